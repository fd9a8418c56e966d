//! The `e`-free sieve: indicator functions, their character expansions and
//! the lower-bound inequality used to replace `2^ω` by a smaller factor.

use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::characters::{OrderClassCache, IDENTITY_TOLERANCE};
use crate::error::{Error, Result};
use crate::ntcore::{factorize, first_primes, primes_up_to, Factorization, PrimeContext};

/// A validated sieve configuration for a concrete prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveConfig {
    pub p: u128,
    pub e: u128,
    pub excluded: Vec<u128>,
    pub delta: Rational,
    pub omega: usize,
}

impl SieveConfig {
    /// Validates `e` (even, divides `p − 1`) and recomputes the excluded
    /// primes from the factorization of `p − 1`.
    pub fn new(p: u128, pm1: &Factorization, e: u128) -> Result<Self> {
        if pm1.value() != Integer::from(p - 1) {
            return Err(Error::Config("factorization does not multiply to p - 1".into()));
        }
        if e == 0 || e % 2 != 0 {
            return Err(Error::Config(format!("e = {e} must be even")));
        }
        if (p - 1) % e != 0 {
            return Err(Error::Config(format!("e = {e} does not divide p - 1")));
        }
        let excluded: Vec<u128> = pm1.primes().filter(|q| e % q != 0).collect();
        let delta = delta_of(&excluded);
        Ok(Self {
            p,
            e,
            excluded,
            delta,
            omega: pm1.omega(),
        })
    }

    /// The largest `e` leaving exactly `excluded` out.
    pub fn excluding(p: u128, pm1: &Factorization, excluded: &[u128]) -> Result<Self> {
        let mut e = p - 1;
        for &q in excluded {
            if q == 2 {
                return Err(Error::Config("2 always divides e and cannot be excluded".into()));
            }
            if !pm1.contains_prime(q) {
                return Err(Error::Config(format!("{q} does not divide p - 1")));
            }
            while e % q == 0 {
                e /= q;
            }
        }
        Self::new(p, pm1, e)
    }

    /// Excludes the `s` largest primes of `p − 1`.
    pub fn excluding_largest(p: u128, pm1: &Factorization, s: usize) -> Result<Self> {
        let odd: Vec<u128> = pm1.primes().filter(|&q| q != 2).collect();
        if s > odd.len() {
            return Err(Error::Config(format!("cannot exclude {s} of {} odd primes", odd.len())));
        }
        Self::excluding(p, pm1, &odd[odd.len() - s..])
    }

    pub fn s(&self) -> usize {
        self.excluded.len()
    }

    pub fn spec(&self) -> SieveSpec {
        SieveSpec {
            e_desc: if self.excluded.is_empty() {
                "p-1".into()
            } else {
                format!("{} (excludes {:?})", self.e, self.excluded)
            },
            s: self.s(),
            delta: self.delta.clone(),
            omega: self.omega,
        }
    }

    pub fn sieve_factor(&self) -> Result<Rational> {
        self.spec().factor()
    }
}

fn delta_of(excluded: &[u128]) -> Rational {
    excluded
        .iter()
        .fold(Rational::from(1), |acc, &q| acc - Rational::from((1, Integer::from(q))))
}

/// What a certificate needs to know about the sieve: `ω`, `s` and a lower
/// bound for `δ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveSpec {
    pub e_desc: String,
    pub s: usize,
    #[serde(with = "rational_string")]
    pub delta: Rational,
    pub omega: usize,
}

/// How to lower-bound `δ` when only `ω` and `s = ω − k` are known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaBound {
    /// `1 − Σ_{i=k}^{ω} 1/q_i`, one term more than needed.
    Stated,
    /// `1 − Σ_{i=k+1}^{ω} 1/q_i`: the `s` excluded primes are the `s`
    /// largest primes of `p − 1`, and the `i`-th smallest of those is at
    /// least the `i`-th prime.
    Sharp,
}

impl SieveSpec {
    pub fn unsieved(omega: usize) -> Self {
        Self {
            e_desc: "p-1".into(),
            s: 0,
            delta: Rational::from(1),
            omega,
        }
    }

    /// Worst case over all `p` with `ω(p − 1) = omega` when the `s` largest
    /// primes are excluded.
    pub fn worst_case(omega: usize, s: usize, bound: DeltaBound) -> Result<Self> {
        if s >= omega.max(1) && s > 0 {
            return Err(Error::Config(format!("s = {s} must be below ω = {omega}")));
        }
        if s == 0 {
            return Ok(Self::unsieved(omega));
        }
        let k = omega - s;
        let first = match bound {
            DeltaBound::Stated => k,
            DeltaBound::Sharp => k + 1,
        };
        let qs = first_primes(omega);
        let mut delta = Rational::from(1);
        for i in first..=omega {
            delta -= Rational::from((1, qs[i - 1]));
        }
        Ok(Self {
            e_desc: format!("exclude the {s} largest primes of p-1 (delta bound: {bound:?})").to_lowercase(),
            s,
            delta,
            omega,
        })
    }

    /// `F = (2 + (s−1)/δ)·2^{ω−s}`; `s = 0` gives `2^ω`.
    pub fn factor(&self) -> Result<Rational> {
        if self.delta <= 0 {
            return Err(Error::Config(format!("delta = {} is not positive", self.delta)));
        }
        if self.s > self.omega {
            return Err(Error::Config("s exceeds ω".into()));
        }
        let lead = Rational::from(2) + Rational::from(self.s as i64 - 1) / self.delta.clone();
        let pow = Integer::from(Integer::u_pow_u(2, (self.omega - self.s) as u32));
        Ok(lead * pow)
    }
}

pub(crate) mod rational_string {
    use rug::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse::<Rational>().map_err(serde::de::Error::custom)
    }
}

/// `1` iff `y^d ≡ n` is insoluble for every divisor `d > 1` of `e`; with
/// `n = g^k` this is: no prime `q | e` divides `k`.
pub fn e_free(ctx: &PrimeContext, e_primes: &[u64], n: u64) -> Result<u8> {
    let k = ctx.dlog(n)?;
    Ok(u8::from(e_primes.iter().all(|&q| k % q != 0)))
}

fn prime_list(f: &Factorization) -> Vec<u64> {
    f.primes().map(|q| q as u64).collect()
}

fn theta_of(primes: &[u64]) -> Rational {
    primes
        .iter()
        .fold(Rational::from(1), |acc, &q| acc * Rational::from((q - 1, q)))
}

/// `Σ_{d | e, d sqfree} μ(d)/φ(d)·Σ_{ord χ = d} χ(n)`, optionally skipping
/// `d = 1`.
fn expansion(cache: &OrderClassCache<'_>, e_primes: &[u64], n: u64, include_one: bool) -> Result<num_complex::Complex64> {
    let mut acc = num_complex::Complex64::new(0.0, 0.0);
    for mask in 0u32..(1 << e_primes.len()) {
        if mask == 0 && !include_one {
            continue;
        }
        let mut d = 1u64;
        let mut phi = 1u64;
        for (i, &q) in e_primes.iter().enumerate() {
            if mask >> i & 1 == 1 {
                d *= q;
                phi *= q - 1;
            }
        }
        let mu = if mask.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        acc += cache.sum(d, n)? * (mu / phi as f64);
    }
    Ok(acc)
}

/// `|f_e(n)/θ(e) − Re R| + |Im R|` with `R` the character expansion
/// `1 + Σ_{d|e, d>1} μ(d)/φ(d) Σ_{ord χ = d} χ(n)`.
pub fn fe_character_identity_check(cache: &OrderClassCache<'_>, e: u64, n: u64) -> Result<f64> {
    let ctx = cache.ctx();
    let e_primes = prime_list(&factorize(e as u128)?);
    let lhs = e_free(ctx, &e_primes, n)? as f64 / theta_of(&e_primes).to_f64();
    let rhs = expansion(cache, &e_primes, n, true)?;
    let slack = (lhs - rhs.re).abs() + rhs.im.abs();
    if slack > IDENTITY_TOLERANCE {
        return Err(Error::Consistency(format!(
            "f_e identity off by {slack:e} at p = {}, e = {e}, n = {n}",
            ctx.p()
        )));
    }
    Ok(slack)
}

struct ConfigView {
    e_primes: Vec<u64>,
    excluded: Vec<u64>,
    delta: Rational,
}

impl ConfigView {
    fn of(config: &SieveConfig) -> Result<Self> {
        if config.delta <= 0 {
            return Err(Error::Config("delta must be positive".into()));
        }
        Ok(Self {
            e_primes: prime_list(&factorize(config.e)?),
            excluded: config.excluded.iter().map(|&q| q as u64).collect(),
            delta: config.delta.clone(),
        })
    }
}

/// `Σ_{d|e} μ(p_i d)/φ(p_i d) Σ_{ord χ = p_i d} χ(n)`, `d = 1` included.
fn excluded_expansion(cache: &OrderClassCache<'_>, e_primes: &[u64], pi: u64, n: u64) -> Result<num_complex::Complex64> {
    let mut acc = num_complex::Complex64::new(0.0, 0.0);
    for mask in 0u32..(1 << e_primes.len()) {
        let mut d = pi;
        let mut phi = pi - 1;
        for (i, &q) in e_primes.iter().enumerate() {
            if mask >> i & 1 == 1 {
                d *= q;
                phi *= q - 1;
            }
        }
        let mu = if (mask.count_ones() + 1) % 2 == 0 { 1.0 } else { -1.0 };
        acc += cache.sum(d, n)? * (mu / phi as f64);
    }
    Ok(acc)
}

/// Evaluates both sides of the sieve inequality
/// `f(n)/(δθ(e)) ≥ 1 + (1/δ)Σ_i θ(p_i) Σ_{d|e} … + Σ_{d|e, d>1} …`
/// and returns `LHS − Re RHS`, which must not fall below `−1e-6`.
pub fn sieve_lower_bound_check(config: &SieveConfig, cache: &OrderClassCache<'_>, n: u64) -> Result<f64> {
    let view = ConfigView::of(config)?;
    let ctx = cache.ctx();
    let delta = view.delta.to_f64();
    let f = u8::from(ctx.order_of(n)? == ctx.p() - 1) as f64;
    let lhs = f / (delta * theta_of(&view.e_primes).to_f64());
    let mut rhs = expansion(cache, &view.e_primes, n, true)?;
    for &pi in &view.excluded {
        let theta_pi = (pi - 1) as f64 / pi as f64;
        rhs += excluded_expansion(cache, &view.e_primes, pi, n)? * (theta_pi / delta);
    }
    let slack = lhs - rhs.re;
    if slack < -IDENTITY_TOLERANCE || rhs.im.abs() > IDENTITY_TOLERANCE {
        return Err(Error::Verification(format!(
            "sieve inequality fails at p = {}, e = {}, n = {n}: {lhs} < {}",
            ctx.p(),
            config.e,
            rhs.re
        )));
    }
    Ok(slack)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntermediateReport {
    pub n: u64,
    /// `f_{p−1}(n) − [Σ_i (f_{p_i e}(n) − θ(p_i) f_e(n)) + δ f_e(n)]`, exact.
    #[serde(with = "rational_string")]
    pub combinatorial_slack: Rational,
    /// Largest deviation in `f_{p_i e} − θ(p_i) f_e = θ(p_i e) Σ_{d|e} …`.
    pub expansion_deviation: f64,
}

/// The two displayed steps between the indicator identity and the sieve
/// inequality.
pub fn intermediate_identities_check(config: &SieveConfig, cache: &OrderClassCache<'_>, n: u64) -> Result<IntermediateReport> {
    let view = ConfigView::of(config)?;
    let ctx = cache.ctx();
    let f_e = e_free(ctx, &view.e_primes, n)?;
    let full: Vec<u64> = prime_list(ctx.pm1_factors());
    let f_full = e_free(ctx, &full, n)?;
    let theta_e = theta_of(&view.e_primes);
    let mut rhs = Rational::from(&view.delta * f_e);
    let mut dev = 0.0f64;
    for &pi in &view.excluded {
        let mut pe = view.e_primes.clone();
        pe.push(pi);
        let f_pe = e_free(ctx, &pe, n)?;
        let theta_pi = Rational::from((pi - 1, pi));
        let term = Rational::from(f_pe) - Rational::from(&theta_pi * f_e);
        let expanded = excluded_expansion(cache, &view.e_primes, pi, n)? * Rational::from(&theta_pi * &theta_e).to_f64();
        dev = dev.max((term.to_f64() - expanded.re).abs() + expanded.im.abs());
        rhs += term;
    }
    let slack = Rational::from(f_full) - rhs;
    if slack < 0 || dev > IDENTITY_TOLERANCE {
        return Err(Error::Verification(format!(
            "intermediate sieve step fails at p = {}, e = {}, n = {n}: slack {slack}, deviation {dev:e}",
            ctx.p(),
            config.e
        )));
    }
    Ok(IntermediateReport {
        n,
        combinatorial_slack: slack,
        expansion_deviation: dev,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SieveSummary {
    pub primes_checked: usize,
    pub configs_checked: usize,
    pub identity_checks: usize,
    pub inequality_checks: usize,
    /// Largest deviation seen in the `f_e` character identity.
    pub identity_max_deviation: f64,
    /// Smallest `LHS − RHS` seen in the sieve inequality.
    pub worst_slack: f64,
    pub pass: bool,
}

#[derive(Default)]
struct PrimeTally {
    configs: usize,
    identity_checks: usize,
    inequality_checks: usize,
    identity_dev: f64,
    worst_slack: f64,
}

fn sweep_prime(p: u64) -> Result<PrimeTally> {
    let ctx = PrimeContext::new(p)?;
    let cache = OrderClassCache::new(&ctx);
    let pm1 = ctx.pm1_factors().clone();
    let mut tally = PrimeTally {
        worst_slack: f64::INFINITY,
        ..Default::default()
    };
    for e in pm1.divisors().into_iter().filter(|e| e % 2 == 0) {
        for n in 1..p {
            tally.identity_dev = tally.identity_dev.max(fe_character_identity_check(&cache, e as u64, n)?);
            tally.identity_checks += 1;
        }
        let config = SieveConfig::new(p as u128, &pm1, e)?;
        if config.delta <= 0 {
            continue;
        }
        tally.configs += 1;
        for n in 1..p {
            tally.worst_slack = tally.worst_slack.min(sieve_lower_bound_check(&config, &cache, n)?);
            intermediate_identities_check(&config, &cache, n)?;
            tally.inequality_checks += 1;
        }
    }
    Ok(tally)
}

/// Every odd prime `p ≤ p_max`, every even `e | p − 1`, every `n`: the
/// `f_e` identity, and for `δ > 0` the sieve inequality and its two
/// intermediate steps.
pub fn verify(p_max: u64) -> Result<SieveSummary> {
    let primes: Vec<u64> = primes_up_to(p_max).into_iter().filter(|&p| p > 2).collect();
    let tallies: Vec<Result<PrimeTally>> = primes.par_iter().map(|&p| sweep_prime(p)).collect();
    let mut summary = SieveSummary {
        primes_checked: primes.len(),
        configs_checked: 0,
        identity_checks: 0,
        inequality_checks: 0,
        identity_max_deviation: 0.0,
        worst_slack: f64::INFINITY,
        pass: true,
    };
    for t in tallies {
        match t {
            Ok(t) => {
                summary.configs_checked += t.configs;
                summary.identity_checks += t.identity_checks;
                summary.inequality_checks += t.inequality_checks;
                summary.identity_max_deviation = summary.identity_max_deviation.max(t.identity_dev);
                summary.worst_slack = summary.worst_slack.min(t.worst_slack);
            }
            Err(Error::Consistency(_)) | Err(Error::Verification(_)) => summary.pass = false,
            Err(e) => return Err(e),
        }
    }
    Ok(summary)
}
