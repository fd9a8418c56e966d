//! Dirichlet characters modulo a prime, exact moment sums and the Weil-type
//! upper bounds they are compared against.
//!
//! Characters are indexed through the least primitive root `g`: the character
//! with index `j` sends `g^k` to `exp(2πi·jk/(p−1))` and `0` to `0`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Mutex;

use num_complex::Complex64;
use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::enclosure::{CertifiedReal, Tri};
use crate::error::{Error, Result};
use crate::ntcore::{gcd_u64, PrimeContext};

/// Window sums are recomputed from scratch this often.
pub const RESYNC_INTERVAL: usize = 1 << 16;

/// Absolute tolerance for character identities, per unit-magnitude term.
pub const IDENTITY_TOLERANCE: f64 = 1e-6;

const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// A character modulo `p`, identified by its exponent index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Character {
    pub j: u64,
    pub order: u64,
}

impl Character {
    pub fn new(ctx: &PrimeContext, j: u64) -> Result<Self> {
        let pm1 = ctx.p() - 1;
        if j >= pm1 {
            return Err(Error::Domain(format!("character index {j} outside [0, {}]", pm1 - 1)));
        }
        Ok(Self {
            j,
            order: pm1 / gcd_u64(j, pm1),
        })
    }

    pub fn principal() -> Self {
        Self { j: 0, order: 1 }
    }

    pub fn is_principal(&self) -> bool {
        self.j == 0
    }

    pub fn conjugate(&self, ctx: &PrimeContext) -> Self {
        let pm1 = ctx.p() - 1;
        Self {
            j: (pm1 - self.j) % pm1,
            order: self.order,
        }
    }
}

/// Value of `exp(2πi·m/modulus)`, reducing the angle to `[-π, π]` first.
#[inline]
fn unit_root(m: u64, modulus: u64) -> Complex64 {
    let m = m % modulus;
    let signed = if 2 * m > modulus {
        m as f64 - modulus as f64
    } else {
        m as f64
    };
    let theta = 2.0 * PI * signed / modulus as f64;
    Complex64::new(theta.cos(), theta.sin())
}

#[inline]
fn value_from_dlog(j: u64, k: u64, pm1: u64) -> Complex64 {
    unit_root(((j as u128 * k as u128) % pm1 as u128) as u64, pm1)
}

/// `χ(n)`; zero when `p | n`.
pub fn char_value(ctx: &PrimeContext, chi: &Character, n: u64) -> Result<Complex64> {
    let n = n % ctx.p();
    if n == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let k = ctx.dlog(n)?;
    Ok(value_from_dlog(chi.j, k, ctx.p() - 1))
}

/// All characters of exact order `d`; there are `φ(d)` of them.
pub fn characters_of_order(ctx: &PrimeContext, d: u64) -> Result<Vec<Character>> {
    let pm1 = ctx.p() - 1;
    if d == 0 || pm1 % d != 0 {
        return Err(Error::Domain(format!("{d} does not divide p - 1 = {pm1}")));
    }
    let step = pm1 / d;
    let out: Vec<Character> = (0..d)
        .filter(|&m| gcd_u64(m, d) == 1)
        .map(|m| Character {
            j: m * step,
            order: d,
        })
        .collect();
    let phi_d = crate::ntcore::euler_phi(d as u128)? as usize;
    if out.len() != phi_d {
        return Err(Error::Consistency(format!(
            "found {} characters of order {d}, expected φ(d) = {phi_d}",
            out.len()
        )));
    }
    debug_assert!(out.iter().all(|c| c.order == pm1 / gcd_u64(c.j, pm1)));
    Ok(out)
}

/// `Σ_{ord χ = d} χ(n)` by direct evaluation of every character of order `d`.
pub fn order_class_sum(ctx: &PrimeContext, d: u64, n: u64) -> Result<Complex64> {
    let chars = characters_of_order(ctx, d)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for chi in &chars {
        acc += char_value(ctx, chi, n)?;
    }
    Ok(acc)
}

/// Memoized order-class sums. `Σ_{ord χ = d} χ(g^k)` only depends on
/// `k mod d`, so each class is evaluated once per residue.
#[derive(Debug)]
pub struct OrderClassCache<'a> {
    ctx: &'a PrimeContext,
    classes: Mutex<HashMap<u64, std::sync::Arc<Vec<Complex64>>>>,
}

impl<'a> OrderClassCache<'a> {
    pub fn new(ctx: &'a PrimeContext) -> Self {
        Self {
            ctx,
            classes: Mutex::new(HashMap::new()),
        }
    }

    pub fn ctx(&self) -> &'a PrimeContext {
        self.ctx
    }

    fn class(&self, d: u64) -> Result<std::sync::Arc<Vec<Complex64>>> {
        if let Some(v) = self.classes.lock().expect("cache lock").get(&d) {
            return Ok(v.clone());
        }
        let ctx = self.ctx;
        let chars = characters_of_order(ctx, d)?;
        let g = ctx.generator();
        let mut table = Vec::with_capacity(d as usize);
        let mut n = 1u64;
        for _k in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for chi in &chars {
                acc += char_value(ctx, chi, n)?;
            }
            table.push(acc);
            n = crate::ntcore::mulmod(n, g, ctx.p());
        }
        let v = std::sync::Arc::new(table);
        self.classes.lock().expect("cache lock").insert(d, v.clone());
        Ok(v)
    }

    /// `Σ_{ord χ = d} χ(n)` for `1 ≤ n < p`.
    pub fn sum(&self, d: u64, n: u64) -> Result<Complex64> {
        let k = self.ctx.dlog(n)?;
        Ok(self.class(d)?[(k % d) as usize])
    }
}

/// `f(n)` via the character expansion
/// `(φ(p−1)/(p−1)) Σ_{d | p−1} μ(d)/φ(d) Σ_{ord χ = d} χ(n)`.
pub fn primitive_root_indicator_by_characters(cache: &OrderClassCache<'_>, n: u64) -> Result<Complex64> {
    let ctx = cache.ctx();
    let pm1 = ctx.pm1_factors();
    let mut acc = Complex64::new(0.0, 0.0);
    for d in pm1.squarefree_divisors() {
        let f = crate::ntcore::factorize(d)?;
        let mu = f.moebius() as f64;
        let phi = f.euler_phi().to_f64();
        acc += cache.sum(d as u64, n)? * (mu / phi);
    }
    let theta = pm1.theta().to_f64();
    Ok(acc * theta)
}

/// Primitive-root indicator, computed by the order test and by the
/// character expansion; the two must agree within `1e-6`.
pub fn indicator_primitive_root(ctx: &PrimeContext, n: u64) -> Result<u8> {
    indicator_primitive_root_cached(&OrderClassCache::new(ctx), n)
}

pub fn indicator_primitive_root_cached(cache: &OrderClassCache<'_>, n: u64) -> Result<u8> {
    let ctx = cache.ctx();
    if n == 0 || n >= ctx.p() {
        return Err(Error::Domain(format!("n = {n} outside [1, p-1]")));
    }
    let by_order = u8::from(ctx.order_of(n)? == ctx.p() - 1);
    let by_chars = primitive_root_indicator_by_characters(cache, n)?;
    let dev = (by_chars.re - by_order as f64).abs() + by_chars.im.abs();
    if dev > IDENTITY_TOLERANCE {
        return Err(Error::Consistency(format!(
            "indicator mismatch at n = {n}: order test {by_order}, characters {by_chars}"
        )));
    }
    Ok(by_order)
}

/// Exact moment sum with an a-priori floating-point error bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentSumResult {
    pub p: u64,
    pub j: u64,
    pub order: u64,
    pub h: u64,
    pub r: u32,
    pub value: f64,
    pub error_bound: f64,
}

fn window_direct(ctx: &PrimeContext, dlog: &[u32], j: u64, x: u64, h: u64) -> Complex64 {
    let p = ctx.p();
    let mut w = Complex64::new(0.0, 0.0);
    for n in 0..h {
        let y = ((x as u128 + n as u128) % p as u128) as u64;
        if y != 0 {
            w += value_from_dlog(j, dlog[y as usize] as u64, p - 1);
        }
    }
    w
}

fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}

/// `S_χ(p,h,r) = Σ_{x ∈ F_p} |Σ_{n<h} χ(x+n)|^{2r}`.
///
/// The inner window slides in O(1) per step and is recomputed directly at
/// the start of every block of [`RESYNC_INTERVAL`] values of `x`. Blocks are
/// independent and their sums are combined pairwise in index order, so the
/// result does not depend on thread scheduling.
pub fn moment_sum_exact(
    ctx: &PrimeContext,
    chi: &Character,
    h: u64,
    r: u32,
    allow_principal: bool,
) -> Result<MomentSumResult> {
    if h == 0 || r == 0 {
        return Err(Error::Domain("moment sums need h ≥ 1 and r ≥ 1".into()));
    }
    if chi.is_principal() && !allow_principal {
        return Err(Error::Domain("principal character excluded (pass allow_principal)".into()));
    }
    let p = ctx.p();
    let dlog = ctx.dlog_table()?;
    let pm1 = p - 1;
    let j = chi.j;
    let chi_at = |y: u64| -> Complex64 {
        if y == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            value_from_dlog(j, dlog[y as usize] as u64, pm1)
        }
    };
    let blocks: Vec<u64> = (0..p).step_by(RESYNC_INTERVAL).collect();
    let sums: Vec<f64> = blocks
        .par_iter()
        .map(|&start| {
            let end = (start + RESYNC_INTERVAL as u64).min(p);
            let mut w = window_direct(ctx, dlog, j, start, h);
            let mut acc = 0.0f64;
            for x in start..end {
                acc += w.norm_sqr().powi(r as i32);
                let leaving = chi_at(x);
                let entering = chi_at(((x as u128 + h as u128) % p as u128) as u64);
                w += entering - leaving;
            }
            acc
        })
        .collect();
    let value = pairwise_sum(&sums);

    // Each character value is within 4u of the true unit root; a window
    // accumulates at most h + 2·RESYNC_INTERVAL such values and as many
    // additions.
    let hf = h as f64;
    let steps = hf + 2.0 * RESYNC_INTERVAL.min(p as usize) as f64;
    let window_err = 8.0 * UNIT_ROUNDOFF * steps * (1.0 + hf);
    let rf = r as f64;
    let term_max = hf.powf(2.0 * rf);
    let term_err = 2.0 * rf * hf.powf(2.0 * rf - 1.0) * window_err * 1.01 + 4.0 * rf * UNIT_ROUNDOFF * term_max;
    let sum_err = (RESYNC_INTERVAL as f64 + (blocks.len() as f64).log2().ceil() + 1.0)
        * UNIT_ROUNDOFF
        * (value.abs() + p as f64 * term_err);
    Ok(MomentSumResult {
        p,
        j,
        order: chi.order,
        h,
        r,
        value: value.max(0.0),
        error_bound: p as f64 * term_err + sum_err,
    })
}

/// Direct O(p·h) evaluation of the same sum; the oracle for the sliding
/// window.
pub fn moment_sum_direct(ctx: &PrimeContext, chi: &Character, h: u64, r: u32) -> Result<f64> {
    let p = ctx.p();
    let dlog = ctx.dlog_table()?;
    let mut terms = Vec::with_capacity(p as usize);
    for x in 0..p {
        terms.push(window_direct(ctx, dlog, chi.j, x, h).norm_sqr().powi(r as i32));
    }
    Ok(pairwise_sum(&terms))
}

/// Number of `2r`-tuples the Weil bound cannot handle:
/// `c_r(h,n) = Σ_{d=0}^{⌊r/n⌋} (r!/(d!(n!)^d))² h^{r−(n−2)d}/(r−nd)!`.
pub fn exception_count_exact(r: u32, h: u64, n: u32) -> Result<Rational> {
    if r == 0 || h == 0 || n < 2 {
        return Err(Error::Domain("exception count needs r, h ≥ 1 and n ≥ 2".into()));
    }
    let fact = |k: u32| Integer::from(Integer::factorial(k));
    let mut total = Rational::from(0);
    for d in 0..=(r / n) {
        let coeff = Rational::from((fact(r), fact(d) * Integer::from(fact(n).pow(d))));
        let exp = r as i64 - (n as i64 - 2) * d as i64;
        let hpow = if exp >= 0 {
            Rational::from(Integer::from(h).pow(exp as u32))
        } else {
            Rational::from((Integer::from(1), Integer::from(h).pow((-exp) as u32)))
        };
        total += Rational::from(&coeff * &coeff) * hpow / fact(r - n * d);
    }
    Ok(total)
}

pub fn exception_count_bound(r: u32, h: u64, n: u32) -> Result<f64> {
    Ok(exception_count_exact(r, h, n)?.to_f64())
}

/// `(2r)!/(2^r r!)`, the number of perfect matchings on `2r` points.
pub fn double_factorial_odd(r: u32) -> Integer {
    Integer::from(Integer::factorial(2 * r)) / (Integer::from(Integer::u_pow_u(2, r)) * Integer::from(Integer::factorial(r)))
}

/// Which case of the `r = 2` bound applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderClass {
    Quadratic,
    Higher,
}

impl OrderClass {
    pub fn of(chi: &Character) -> Self {
        if chi.order == 2 {
            OrderClass::Quadratic
        } else {
            OrderClass::Higher
        }
    }
}

/// `(2r)!/(2^r r!)·p·h^r + (2r−1)·√p·h^{2r}`.
///
/// `reduced_degree` replaces `2r−1` by `2(r−1)`, which is available for
/// quadratic characters only; certificates never set it.
pub fn weil_bound_general(p: f64, h: u64, r: u32, reduced_degree: bool) -> f64 {
    let hf = h as f64;
    let c = double_factorial_odd(r).to_f64();
    let deg = if reduced_degree { 2.0 * (r as f64 - 1.0) } else { 2.0 * r as f64 - 1.0 };
    c * p * hf.powi(r as i32) + deg * p.sqrt() * hf.powi(2 * r as i32)
}

/// The sharper fourth-moment bound for the given order class.
pub fn weil_bound_r2(p: f64, h: u64, class: OrderClass) -> f64 {
    let hf = h as f64;
    let sp = p.sqrt();
    match class {
        OrderClass::Quadratic => (3.0 * hf * hf - 2.0 * hf) * p + 2.0 * (hf.powi(4) - 3.0 * hf * hf + 2.0 * hf) * sp,
        OrderClass::Higher => (2.0 * hf * hf - hf) * p + 3.0 * (hf.powi(4) - 2.0 * hf * hf + hf) * sp,
    }
}

/// The applicable bound: the class-specific one when `r = 2`, the general
/// one otherwise.
pub fn weil_bound(p: f64, h: u64, r: u32, class: OrderClass) -> f64 {
    if r == 2 {
        weil_bound_r2(p, h, class)
    } else {
        weil_bound_general(p, h, r, false)
    }
}

/// Branch of the W factor that was used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WBranch {
    General,
    FourthMoment,
}

/// `W(p,h,r)` with `S_χ ≤ W·√p·h^{2r}`: the smaller of
/// `√2(2r/(eh))^r√p + (2r−1)` and, for `r = 2`, `3(1 + √p/h²)`.
pub fn w_factor(p: f64, h: f64, r: u32) -> (f64, WBranch) {
    let rf = r as f64;
    let general = 2f64.sqrt() * (2.0 * rf / (std::f64::consts::E * h)).powf(rf) * p.sqrt() + 2.0 * rf - 1.0;
    if r == 2 {
        let fourth = 3.0 * (1.0 + p.sqrt() / (h * h));
        if fourth < general {
            return (fourth, WBranch::FourthMoment);
        }
    }
    (general, WBranch::General)
}

/// Enclosure version of [`w_factor`], from enclosures of `√p` and `h`.
pub fn w_factor_enclosure(sqrt_p: &CertifiedReal, h: &CertifiedReal, r: u32) -> Result<(CertifiedReal, WBranch)> {
    let prec = sqrt_p.prec().max(h.prec());
    let rr = CertifiedReal::from_i64(prec, r as i64);
    let e = CertifiedReal::e(prec);
    let base = rr.scale_i64(2).div(&e.mul_ref(h))?;
    let general = CertifiedReal::from_i64(prec, 2)
        .sqrt()?
        .mul_ref(&base.powi(r as i32)?)
        .mul_ref(sqrt_p)
        .add_i64(2 * r as i64 - 1);
    if r == 2 {
        let fourth = sqrt_p.div(&h.powi(2)?)?.add_i64(1).scale_i64(3);
        if fourth.hi() < general.hi() {
            return Ok((fourth, WBranch::FourthMoment));
        }
    }
    Ok((general, WBranch::General))
}

/// `((2r/e)^r, (2r)!/(2^r r!), √2(2r/e)^r)`, evaluated in log space.
#[derive(Clone, Debug, Serialize)]
pub struct StirlingSandwich {
    pub r: u32,
    pub ln_lower: CertifiedReal,
    pub ln_mid: CertifiedReal,
    pub ln_upper: CertifiedReal,
    pub lower: f64,
    pub mid: f64,
    pub upper: f64,
    pub strict: Tri,
}

pub fn stirling_sandwich(r: u32, prec: u32) -> Result<StirlingSandwich> {
    if r == 0 {
        return Err(Error::Domain("stirling sandwich needs r ≥ 1".into()));
    }
    let rr = CertifiedReal::from_i64(prec, r as i64);
    let ln_lower = rr.mul_ref(&rr.scale_i64(2).ln()?.add_i64(-1));
    let ln_mid = CertifiedReal::from_integer(prec, &double_factorial_odd(r)).ln()?;
    let ln_upper = CertifiedReal::ln2(prec)
        .div(&CertifiedReal::from_i64(prec, 2))?
        .add_ref(&ln_lower);
    let strict = ln_lower.lt(&ln_mid).and(ln_mid.lt(&ln_upper));
    if strict == Tri::False {
        return Err(Error::Verification(format!("stirling ordering fails at r = {r}")));
    }
    Ok(StirlingSandwich {
        r,
        lower: ln_lower.mid_f64().exp(),
        mid: ln_mid.mid_f64().exp(),
        upper: ln_upper.mid_f64().exp(),
        ln_lower,
        ln_mid,
        ln_upper,
        strict,
    })
}

/// One comparison of an exact moment sum against its bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharsumRecord {
    pub p: u64,
    pub j: u64,
    pub order: u64,
    pub h: u64,
    pub r: u32,
    pub exact: f64,
    pub bound: f64,
    pub slack: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharsumReport {
    pub claim: String,
    pub primes_checked: usize,
    pub records_checked: usize,
    pub violations: Vec<CharsumRecord>,
    /// Smallest `(bound − exact)/bound` seen.
    pub worst_relative_slack: f64,
    pub worst: Option<CharsumRecord>,
    pub pass: bool,
}

/// Checks `S_χ(p,h,r) ≤` the general bound (and the class bound at `r = 2`)
/// for every non-principal character of every prime in `[p_min, p_max]`.
pub fn verify_dominance(p_min: u64, p_max: u64, hs: &[u64], rs: &[u32]) -> Result<CharsumReport> {
    let primes: Vec<u64> = crate::ntcore::primes_up_to(p_max)
        .into_iter()
        .filter(|&p| p >= p_min.max(3))
        .collect();
    let per_prime: Vec<Result<Vec<CharsumRecord>>> = primes
        .par_iter()
        .map(|&p| dominance_for_prime(p, hs, rs))
        .collect();
    let mut records_checked = 0usize;
    let mut violations = Vec::new();
    let mut worst: Option<CharsumRecord> = None;
    let mut worst_rel = f64::INFINITY;
    for recs in per_prime {
        for rec in recs? {
            records_checked += 1;
            let rel = rec.slack / rec.bound;
            if rel < worst_rel {
                worst_rel = rel;
                worst = Some(rec.clone());
            }
            if rec.slack < -IDENTITY_TOLERANCE * rec.bound {
                violations.push(rec);
            }
        }
    }
    Ok(CharsumReport {
        claim: "S_chi(p,h,r) <= Weil-type bound".into(),
        primes_checked: primes.len(),
        records_checked,
        pass: violations.is_empty(),
        violations,
        worst_relative_slack: worst_rel,
        worst,
    })
}

fn dominance_for_prime(p: u64, hs: &[u64], rs: &[u32]) -> Result<Vec<CharsumRecord>> {
    let ctx = PrimeContext::new(p)?;
    let pf = p as f64;
    let mut out = Vec::new();
    for j in 1..p - 1 {
        let chi = Character::new(&ctx, j)?;
        for &h in hs {
            for &r in rs {
                let m = moment_sum_exact(&ctx, &chi, h, r, false)?;
                let exact = m.value;
                let mut push = |bound: f64| {
                    out.push(CharsumRecord {
                        p,
                        j,
                        order: chi.order,
                        h,
                        r,
                        exact,
                        bound,
                        slack: bound - exact + m.error_bound,
                    })
                };
                push(weil_bound_general(pf, h, r, false));
                if r == 2 {
                    push(weil_bound_r2(pf, h, OrderClass::of(&chi)));
                }
            }
        }
    }
    Ok(out)
}
