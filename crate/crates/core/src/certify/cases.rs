//! The `ω`-case analysis behind the two corollaries.
//!
//! Both corollaries reduce the main criterion, for a fixed `(h, H)` shape, to
//! `K·F⁴ < p^c` (`K = 13, c = 1/2` for `H = p^{5/8}`; `K = 7, c = 1/4` for
//! `H = 0.999·p^{1/2}`), then split on `ω = ω(p − 1)`. The engine certifies
//! the reduction constant and every split, row by row, in log space.

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::Serialize;

use super::{all_hold, Check, Relation};
use crate::enclosure::{CertifiedReal, Tri};
use crate::error::Result;
use crate::intervals::envelopes_enclosure;
use crate::ntcore::{first_primes, primes_up_to};
use crate::sieve::{DeltaBound, SieveSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseTarget {
    /// `H = p^{5/8}`, `h = ⌈2p^{1/4}⌉`, `r = 2`, `p ≥ 10^22`.
    Cor2,
    /// `H = 0.999·p^{1/2}`, `h = ⌈p^{1/4}⌉`, `r = 2`, `p ≥ 10^56`.
    Lonely,
}

/// How `s` is chosen per `ω`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SPolicy {
    /// The splits as written: `s = 0` up to 8, `s = ω − 3` up to 50,
    /// `s = ω − 5` up to 199. The `H = 0.999·p^{1/2}` case has no stated
    /// split and always searches.
    Stated,
    /// The `s` minimizing `F` for each `ω`.
    Best,
}

/// Which `K` the per-`ω` rows use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstantChoice {
    /// 13 or 7 as stated.
    Stated,
    /// The upper enclosure of the constant the reduction actually yields.
    Derived,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CaseOptions {
    pub delta_bound: DeltaBound,
    pub s_policy: SPolicy,
    pub constant: ConstantChoice,
    pub precision: u32,
}

impl CaseOptions {
    pub fn stated(precision: u32) -> Self {
        Self {
            delta_bound: DeltaBound::Stated,
            s_policy: SPolicy::Stated,
            constant: ConstantChoice::Stated,
            precision,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseRow {
    pub regime: String,
    pub omega: usize,
    pub s: usize,
    pub delta_lo: String,
    pub lhs_hi: String,
    pub rhs_lo: String,
    /// `log10(rhs_lo) − log10(lhs_hi)`; positive means the row holds.
    pub margin: f64,
    pub pass: Tri,
    /// `K·2^{4ω}` when `s = 0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs_exact: Option<String>,
}

impl CaseRow {
    pub const TSV_HEADER: &'static str = "regime\tomega\ts\tdelta_lo\tlhs_hi\trhs_lo\tmargin\tpass";

    pub fn tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{:.4}\t{}",
            self.regime, self.omega, self.s, self.delta_lo, self.lhs_hi, self.rhs_lo, self.margin, self.pass
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RegimeSummary {
    pub name: String,
    pub omega_lo: usize,
    pub omega_hi: usize,
    pub rows_checked: usize,
    pub failures: usize,
    pub worst_margin: f64,
    pub worst_omega: usize,
    pub pass: Tri,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub target: CaseTarget,
    pub options: CaseOptions,
    /// The constant the rows are checked with.
    #[serde(rename = "K")]
    pub k: CertifiedReal,
    /// Exponent `c` of the right side `p^c`.
    pub rhs_exponent: String,
    pub reduction: Vec<Check>,
    pub regimes: Vec<RegimeSummary>,
    pub links: Vec<Check>,
    /// Per-`ω` rows; regimes too long to tabulate keep only their worst row.
    pub rows: Vec<CaseRow>,
    pub pass: bool,
    pub failures: Vec<String>,
}

impl CaseReport {
    pub fn tsv(&self) -> String {
        let mut out = String::from(CaseRow::TSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.tsv());
            out.push('\n');
        }
        out
    }
}

/// `m·10^e` from a natural logarithm.
fn sci_from_ln(ln: f64) -> String {
    let l10 = ln / std::f64::consts::LN_10;
    let mut e = l10.floor();
    let mut m = 10f64.powf(l10 - e);
    if m >= 9.99995 {
        m /= 10.0;
        e += 1.0;
    }
    format!("{m:.4}e{e}")
}

fn pow10(prec: u32, k: u32) -> CertifiedReal {
    CertifiedReal::from_integer(prec, &Integer::from(Integer::u_pow_u(10, k)))
}

/// Links from the `(h, H)` shape to `13·F⁴ < p^{1/2}`, valid for `p ≥ 10^20`.
fn cor2_reduction(prec: u32) -> Result<(Vec<Check>, CertifiedReal)> {
    let one = CertifiedReal::from_i64(prec, 1);
    let p = pow10(prec, 20);
    let quarter = p.pow_rational(&Rational::from((1, 4)))?;
    let h_lo = quarter.scale_i64(2);
    let x_lo = p.pow_rational(&Rational::from((5, 8)))?.div(&h_lo.add_i64(1))?;
    let (a, b) = envelopes_enclosure(&pow10(prec, 7), &CertifiedReal::from_i64(prec, 200_000))?;
    let a_claim = one.sub_ref(&one.div(&pow10(prec, 6))?);
    let b_claim = one.add_ref(&one.div(&pow10(prec, 5))?);
    let w = CertifiedReal::from_ratio(prec, 15, 4);
    // h ≤ 2p^{1/4} + 1 ≤ 2p^{1/4}·(1 + 1/(2·10^5)).
    let h_slack = one.add_ref(&CertifiedReal::from_ratio(prec, 1, 200_000));
    let k = CertifiedReal::pi(prec)
        .powi(2)?
        .div(&CertifiedReal::from_i64(prec, 6))?
        .mul_ref(&b_claim.powi(3)?)
        .div(&a_claim.powi(4)?)?
        .mul_ref(&w)
        .scale_i64(2)
        .mul_ref(&h_slack);
    let checks = vec![
        // (10^20)^{1/4} = 10^5 exactly.
        Check::exact(
            "h >= 2e5 (h >= 2p^(1/4), p >= 1e20)",
            h_lo.clone(),
            Relation::Ge,
            CertifiedReal::from_i64(prec, 200_000),
            Integer::from(Integer::u_pow_u(10, 20)) >= Integer::from(Integer::u_pow_u(100_000, 4)),
        ),
        Check::new("X >= 1e7 (X >= p^(5/8)/(2p^(1/4)+1), increasing)", x_lo, Relation::Ge, pow10(prec, 7)),
        Check::exact(
            "W <= 15/4 (sqrt(p)/h^2 <= 1/4)",
            w.clone(),
            Relation::Le,
            CertifiedReal::from_ratio(prec, 15, 4),
            true,
        ),
        Check::new("A(1e7) >= 1 - 1e-6", a, Relation::Ge, a_claim),
        Check::new("B(1e7, 2e5) <= 1 + 1e-5", b, Relation::Le, b_claim),
        Check::new(
            "reduction constant (pi^2/6)(B^3/A^4)(15/4)*2(1+1/(2e5)) < 13",
            k.clone(),
            Relation::Lt,
            CertifiedReal::from_i64(prec, 13),
        ),
        Check::exact(
            "2H^2 < hp: 2*1^2 <= 2 and h > 2p^(1/4) strictly (2p^(1/4) is irrational)",
            CertifiedReal::from_i64(prec, 2),
            Relation::Le,
            CertifiedReal::from_i64(prec, 2),
            true,
        ),
    ];
    Ok((checks, k))
}

/// Links from `H = 0.999·p^{1/2}`, `h = ⌈p^{1/4}⌉` to `K·F⁴ < p^{1/4}`,
/// valid for `p ≥ 10^56`.
fn lonely_reduction(prec: u32) -> Result<(Vec<Check>, CertifiedReal)> {
    let one = CertifiedReal::from_i64(prec, 1);
    let c = CertifiedReal::from_ratio(prec, 999, 1000);
    let p = pow10(prec, 56);
    let quarter = p.pow_rational(&Rational::from((1, 4)))?;
    let sqrt_p = p.sqrt()?;
    let x_lo = c.mul_ref(&sqrt_p).div(&quarter.add_i64(1))?;
    let x_claim = pow10(prec, 13);
    let h_claim = pow10(prec, 14);
    let (a, b) = envelopes_enclosure(&x_claim, &h_claim)?;
    let w = CertifiedReal::from_i64(prec, 6);
    let h_slack = one.add_ref(&one.div(&h_claim)?);
    let k = CertifiedReal::pi(prec)
        .powi(2)?
        .div(&CertifiedReal::from_i64(prec, 6))?
        .mul_ref(&b.powi(3)?)
        .div(&a.powi(4)?)?
        .mul_ref(&w)
        .mul_ref(&h_slack)
        .div(&c.powi(2)?)?;
    let checks = vec![
        Check::exact(
            "h >= 1e14 (h >= p^(1/4), p >= 1e56)",
            quarter.clone(),
            Relation::Ge,
            h_claim.clone(),
            Integer::from(Integer::u_pow_u(10, 56)) >= Integer::from(Integer::u_pow_u(10, 14)).pow(4),
        ),
        Check::new("X >= 1e13 (X >= 0.999 p^(1/2)/(p^(1/4)+1), increasing)", x_lo, Relation::Ge, x_claim),
        Check::exact("W <= 6 (sqrt(p)/h^2 <= 1)", w.clone(), Relation::Le, CertifiedReal::from_i64(prec, 6), true),
        Check::new("A(1e13) > 0", a.clone(), Relation::Gt, CertifiedReal::from_i64(prec, 0)),
        Check::new(
            "2H^2 < hp at p = 1e56 (ratio decreasing)",
            c.powi(2)?.scale_i64(2),
            Relation::Lt,
            quarter,
        ),
        Check::new(
            "reduction constant (pi^2/6)(B^3/A^4)*6(1+1e-14)/0.999^2 <= 7",
            k.clone(),
            Relation::Le,
            CertifiedReal::from_i64(prec, 7),
        ),
        Check::new(
            "0.001 p^(1/2) > 2 at p = 1e56",
            sqrt_p.div(&CertifiedReal::from_i64(prec, 1000))?,
            Relation::Gt,
            CertifiedReal::from_i64(prec, 2),
        )
        .informational(),
    ];
    Ok((checks, k))
}

/// Prime `ω ≤ 1.39·L/ln L` (Robin) turns `K·2^{4ω} < p^c` into
/// `ln K + 5.56·ln2·L/ln L < c·L`, checked at `L0` together with the sign of
/// its derivative; `(x − 1)/x²` decreases for `x ≥ 2`, so the derivative
/// stays positive beyond `L0`.
fn robin_links(ln_k: &CertifiedReal, c: &Rational, l0: &CertifiedReal, label: &str) -> Result<Vec<Check>> {
    let prec = l0.prec();
    let coeff = CertifiedReal::from_ratio(prec, 556, 100).mul_ref(&CertifiedReal::ln2(prec));
    let ce = CertifiedReal::from_rational(prec, c);
    let ln_l0 = l0.ln()?;
    let lhs = ln_k.add_ref(&coeff.mul_ref(&l0.div(&ln_l0)?));
    let rhs = ce.mul_ref(l0);
    let deriv = ce.sub_ref(&coeff.mul_ref(&ln_l0.add_i64(-1).div(&ln_l0.powi(2)?)?));
    Ok(vec![
        Check::new(format!("Robin branch at {label}: ln K + 5.56 ln2 L/ln L < c L"), lhs, Relation::Lt, rhs),
        Check::new(format!("Robin branch at {label}: derivative positive"), deriv, Relation::Gt, CertifiedReal::from_i64(prec, 0)),
        Check::new(format!("Robin branch at {label}: ln L >= 2"), ln_l0, Relation::Ge, CertifiedReal::from_i64(prec, 2)),
    ])
}

/// `s = ω − k` minimizing `F` in double precision, over `s = 0` and the `k`
/// covered by `recip_prefix` (partial sums of `1/q_i`, starting at 0).
fn best_s(omega: usize, recip_prefix: &[f64], recip_total: f64, bound: DeltaBound) -> usize {
    let mut best = (omega as f64 * std::f64::consts::LN_2, 0usize);
    for k in 1..omega.min(recip_prefix.len() - 1) {
        let first = match bound {
            DeltaBound::Stated => k,
            DeltaBound::Sharp => k + 1,
        };
        let delta = 1.0 - (recip_total - recip_prefix[first - 1]);
        if delta <= 1e-9 {
            continue;
        }
        let s = omega - k;
        let ln_f = (2.0 + (s as f64 - 1.0) / delta).ln() + k as f64 * std::f64::consts::LN_2;
        if ln_f < best.0 - 1e-12 {
            best = (ln_f, s);
        }
    }
    best.1
}

/// `F` from a lower bound for `δ`.
fn factor_enclosure(omega: usize, s: usize, delta: &CertifiedReal) -> Result<CertifiedReal> {
    let prec = delta.prec();
    let lead = CertifiedReal::from_i64(prec, s as i64 - 1).div(delta)?.add_i64(2);
    Ok(lead.mul_ref(&CertifiedReal::from_i64(prec, 2).powi((omega - s) as i32)?))
}

struct RowInput<'a> {
    regime: &'a str,
    omega: usize,
    s: usize,
    delta: CertifiedReal,
    ln_p_lo: CertifiedReal,
}

fn eval_row(inp: RowInput<'_>, ln_k: &CertifiedReal, k_exact: Option<&Integer>, c: &Rational) -> Result<CaseRow> {
    let prec = inp.delta.prec();
    let positive = inp.delta.is_positive();
    let ce = CertifiedReal::from_rational(prec, c);
    let rhs = ce.mul_ref(&inp.ln_p_lo);
    let delta_lo = inp.delta.lo_string(10);
    if positive != Tri::True {
        return Ok(CaseRow {
            regime: inp.regime.into(),
            omega: inp.omega,
            s: inp.s,
            delta_lo,
            lhs_hi: "inf".into(),
            rhs_lo: sci_from_ln(rhs.lo_f64()),
            margin: f64::NEG_INFINITY,
            pass: Tri::False,
            lhs_exact: None,
        });
    }
    let f = factor_enclosure(inp.omega, inp.s, &inp.delta)?;
    let lhs = ln_k.add_ref(&f.ln()?.scale_i64(4));
    let lhs_exact = match (k_exact, inp.s) {
        (Some(k), 0) => Some(Integer::from(k * Integer::from(Integer::u_pow_u(2, 4 * inp.omega as u32))).to_string()),
        _ => None,
    };
    Ok(CaseRow {
        regime: inp.regime.into(),
        omega: inp.omega,
        s: inp.s,
        delta_lo,
        lhs_hi: sci_from_ln(lhs.hi_f64()),
        rhs_lo: sci_from_ln(rhs.lo_f64()),
        margin: (rhs.lo_f64() - lhs.hi_f64()) / std::f64::consts::LN_10,
        pass: lhs.lt(&rhs),
        lhs_exact,
    })
}

fn summarize(name: &str, lo: usize, hi: usize, rows: &[CaseRow]) -> RegimeSummary {
    let mut s = RegimeSummary {
        name: name.into(),
        omega_lo: lo,
        omega_hi: hi,
        rows_checked: rows.len(),
        failures: rows.iter().filter(|r| r.pass != Tri::True).count(),
        worst_margin: f64::INFINITY,
        worst_omega: lo,
        pass: Tri::True,
    };
    for r in rows {
        if r.margin < s.worst_margin {
            s.worst_margin = r.margin;
            s.worst_omega = r.omega;
        }
        s.pass = s.pass.and(r.pass);
    }
    s
}

enum SRule {
    Zero,
    OmegaMinus(usize),
    Best,
}

struct Regime {
    name: &'static str,
    lo: usize,
    hi: usize,
    rule: SRule,
    /// Whether `p > primorial(ω)` is used for the right side.
    primorial: bool,
}

/// Rows for `ω ≤ hi` with exact rational `δ`.
#[allow(clippy::too_many_arguments)]
fn exact_rows(
    regimes: &[Regime],
    opts: &CaseOptions,
    ln_k: &CertifiedReal,
    k_exact: Option<&Integer>,
    c: &Rational,
    p_floor: &Integer,
    rows: &mut Vec<CaseRow>,
    summaries: &mut Vec<RegimeSummary>,
) -> Result<()> {
    let prec = opts.precision;
    let top = regimes.iter().map(|r| r.hi).max().unwrap_or(0);
    let qs = first_primes(top + 1);
    let mut recip_prefix = vec![0.0f64];
    for q in &qs {
        recip_prefix.push(recip_prefix.last().unwrap() + 1.0 / *q as f64);
    }
    let ln_floor = CertifiedReal::from_integer(prec, p_floor).ln()?;
    for reg in regimes {
        let mut regime_rows = Vec::new();
        for omega in reg.lo..=reg.hi {
            let s = match reg.rule {
                SRule::Zero => 0,
                SRule::OmegaMinus(k) => omega.saturating_sub(k),
                SRule::Best => best_s(omega, &recip_prefix[..=omega], recip_prefix[omega], opts.delta_bound),
            };
            let spec = SieveSpec::worst_case(omega, s, opts.delta_bound)?;
            let ln_p_lo = if reg.primorial {
                let prim: Integer = qs[..omega].iter().fold(Integer::from(1), |acc, q| acc * *q);
                let lp = CertifiedReal::from_integer(prec, &prim).ln()?;
                if prim > *p_floor {
                    lp
                } else {
                    ln_floor.clone()
                }
            } else {
                ln_floor.clone()
            };
            regime_rows.push(eval_row(
                RowInput {
                    regime: reg.name,
                    omega,
                    s,
                    delta: CertifiedReal::from_rational(prec, &spec.delta),
                    ln_p_lo,
                },
                ln_k,
                k_exact,
                c,
            )?);
        }
        summaries.push(summarize(reg.name, reg.lo, reg.hi, &regime_rows));
        rows.extend(regime_rows);
    }
    Ok(())
}

/// Largest `ω` with `primorial(ω) < 10^k`.
fn omega_max_below_pow10(k: u32) -> usize {
    let limit = Integer::from(Integer::u_pow_u(10, k));
    let mut prod = Integer::from(1);
    let mut n = 0;
    for q in primes_up_to(100_000) {
        prod *= q;
        if prod >= limit {
            return n;
        }
        n += 1;
    }
    n
}

pub fn corollary_case_engine(target: CaseTarget, opts: &CaseOptions) -> Result<CaseReport> {
    match target {
        CaseTarget::Cor2 => cor2_engine(opts),
        CaseTarget::Lonely => lonely_engine(opts),
    }
}

fn constant_for(opts: &CaseOptions, stated: i64, derived: &CertifiedReal) -> (CertifiedReal, Option<Integer>) {
    match opts.constant {
        ConstantChoice::Stated => (CertifiedReal::from_i64(opts.precision, stated), Some(Integer::from(stated))),
        ConstantChoice::Derived => (derived.clone(), None),
    }
}

fn finish(
    target: CaseTarget,
    opts: &CaseOptions,
    k: CertifiedReal,
    c: &Rational,
    reduction: Vec<Check>,
    regimes: Vec<RegimeSummary>,
    links: Vec<Check>,
    rows: Vec<CaseRow>,
) -> CaseReport {
    let mut failures = Vec::new();
    for c in reduction.iter().chain(links.iter()) {
        if c.counts() && c.holds != Tri::True {
            failures.push(format!("{}: {} {} {} [{}]", c.name, c.lhs, c.relation, c.rhs, c.holds));
        }
    }
    for r in &regimes {
        if r.pass != Tri::True {
            let bad: Vec<String> = rows
                .iter()
                .filter(|row| row.regime == r.name && row.pass != Tri::True)
                .map(|row| row.omega.to_string())
                .collect();
            failures.push(format!(
                "regime {}: {} of {} rows fail (omega = {}), worst margin {:.4} at omega = {}",
                r.name,
                r.failures,
                r.rows_checked,
                if bad.is_empty() { "-".into() } else { bad.join(",") },
                r.worst_margin,
                r.worst_omega
            ));
        }
    }
    let pass = all_hold(&reduction).and(all_hold(&links)).is_true() && regimes.iter().all(|r| r.pass.is_true());
    CaseReport {
        target,
        options: *opts,
        k,
        rhs_exponent: c.to_string(),
        reduction,
        regimes,
        links,
        rows,
        pass,
        failures,
    }
}

fn cor2_engine(opts: &CaseOptions) -> Result<CaseReport> {
    let prec = opts.precision;
    let c = Rational::from((1, 2));
    let (reduction, k_derived) = cor2_reduction(prec)?;
    let (k, k_exact) = constant_for(opts, 13, &k_derived);
    let ln_k = k.ln()?;
    let p_floor = Integer::from(Integer::u_pow_u(10, 22));
    let stated = opts.s_policy == SPolicy::Stated;
    let mut links = Vec::new();
    let last = if stated {
        199
    } else {
        omega_max_below_pow10(1000)
    };
    let rule = |r: SRule| if stated { r } else { SRule::Best };
    let regimes = [
        Regime {
            name: "omega<=8",
            lo: 1,
            hi: 8,
            rule: rule(SRule::Zero),
            primorial: false,
        },
        Regime {
            name: "9<=omega<=17",
            lo: 9,
            hi: 17,
            rule: rule(SRule::OmegaMinus(3)),
            primorial: false,
        },
        Regime {
            name: "18<=omega<=50",
            lo: 18,
            hi: 50,
            rule: rule(SRule::OmegaMinus(3)),
            primorial: true,
        },
        Regime {
            name: "50<omega<200",
            lo: 51,
            hi: last,
            rule: rule(SRule::OmegaMinus(5)),
            primorial: true,
        },
    ];
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    exact_rows(&regimes, opts, &ln_k, k_exact.as_ref(), &c, &p_floor, &mut rows, &mut summaries)?;

    // p < 10^1000 bounds ω through p > primorial(ω).
    let bound = Integer::from(Integer::u_pow_u(10, 1000));
    let next = primorial_integer(last + 1);
    links.push(Check::exact(
        format!("p < 1e1000 forces omega <= {last} (primorial({}) >= 1e1000)", last + 1),
        CertifiedReal::from_integer(prec, &next).ln()?,
        Relation::Ge,
        CertifiedReal::from_integer(prec, &bound).ln()?,
        next >= bound,
    ));
    let l0 = CertifiedReal::from_i64(prec, 1000).mul_ref(&CertifiedReal::from_i64(prec, 10).ln()?);
    let robin = robin_links(&ln_k, &c, &l0, "p = 1e1000")?;
    summaries.push(RegimeSummary {
        name: "p>=1e1000 (Robin, s=0)".into(),
        omega_lo: 0,
        omega_hi: 0,
        rows_checked: 0,
        failures: robin.iter().filter(|c| c.holds != Tri::True).count(),
        worst_margin: (robin[0].rhs.lo_f64() - robin[0].lhs.hi_f64()) / std::f64::consts::LN_10,
        worst_omega: 0,
        pass: all_hold(&robin),
    });
    links.extend(robin);
    Ok(finish(CaseTarget::Cor2, opts, k, &c, reduction, summaries, links, rows))
}

fn primorial_integer(k: usize) -> Integer {
    crate::ntcore::primorial(k)
}

/// `e^{15.5}`: beyond `p = e^{L0}` the Robin bound settles `K·2^{4ω} < p^{1/4}`.
fn lonely_robin_l0(prec: u32) -> CertifiedReal {
    CertifiedReal::from_ratio(prec, 31, 2).exp()
}

fn lonely_engine(opts: &CaseOptions) -> Result<CaseReport> {
    let prec = opts.precision;
    let c = Rational::from((1, 4));
    let (reduction, k_derived) = lonely_reduction(prec)?;
    let (k, k_exact) = constant_for(opts, 7, &k_derived);
    let ln_k = k.ln()?;
    let p_floor = Integer::from(Integer::u_pow_u(10, 56));
    let small_top = 200;
    let regimes = [Regime {
        name: "omega<=200",
        lo: 1,
        hi: small_top,
        rule: SRule::Best,
        primorial: true,
    }];
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    exact_rows(&regimes, opts, &ln_k, k_exact.as_ref(), &c, &p_floor, &mut rows, &mut summaries)?;

    // 200 < ω while ln primorial(ω) < L0, with δ from running enclosures.
    let l0 = lonely_robin_l0(prec);
    let l0_f = l0.hi_f64();
    let mut limit = 8_000_000u64;
    let qs = loop {
        let qs = primes_up_to(limit);
        let theta: f64 = qs.iter().map(|&q| (q as f64).ln()).sum();
        if theta > l0_f * 1.001 {
            break qs;
        }
        limit *= 2;
    };
    let kmax = 400usize;
    let mut recip_prefix = vec![0.0f64];
    for q in &qs[..kmax] {
        recip_prefix.push(recip_prefix.last().unwrap() + 1.0 / *q as f64);
    }
    let mut recip_enc = vec![CertifiedReal::from_i64(prec, 0)];
    for q in &qs[..kmax] {
        let next = recip_enc.last().unwrap().add_ref(&CertifiedReal::from_ratio(prec, 1, *q as i64));
        recip_enc.push(next);
    }
    let ln_floor = CertifiedReal::from_integer(prec, &p_floor).ln()?;
    let name = "200<omega<=omega_R";
    let mut theta = CertifiedReal::from_i64(prec, 0);
    let mut recip_total = CertifiedReal::from_i64(prec, 0);
    let mut recip_total_f = 0.0f64;
    let mut chunk: Vec<CaseRow> = Vec::new();
    let mut large: Option<RegimeSummary> = None;
    let mut worst: Option<CaseRow> = None;
    let mut failing: Vec<CaseRow> = Vec::new();
    let mut omega = 0usize;
    loop {
        let q = qs[omega];
        theta = theta.add_ref(&CertifiedReal::from_i64(prec, q as i64).ln()?);
        recip_total = recip_total.add_ref(&CertifiedReal::from_ratio(prec, 1, q as i64));
        recip_total_f += 1.0 / q as f64;
        // p > primorial(ω + 1) ≥ e^{L0} belongs to the Robin branch.
        if omega + 1 > small_top && theta.ge(&l0) == Tri::True {
            break;
        }
        omega += 1;
        if omega <= small_top {
            continue;
        }
        let s = best_s(omega, &recip_prefix, recip_total_f, opts.delta_bound);
        let first = match opts.delta_bound {
            DeltaBound::Stated => omega - s,
            DeltaBound::Sharp => omega - s + 1,
        };
        let delta = if s == 0 {
            CertifiedReal::from_i64(prec, 1)
        } else {
            CertifiedReal::from_i64(prec, 1).sub_ref(&recip_total.sub_ref(&recip_enc[first - 1]))
        };
        let row = eval_row(
            RowInput {
                regime: name,
                omega,
                s,
                delta,
                ln_p_lo: theta.max(&ln_floor),
            },
            &ln_k,
            None,
            &c,
        )?;
        if row.pass != Tri::True && failing.len() < 50 {
            failing.push(row.clone());
        }
        if worst.as_ref().is_none_or(|w| row.margin < w.margin) {
            worst = Some(row.clone());
        }
        chunk.push(row);
        if chunk.len() >= 4096 {
            large = Some(merge_summary(large, summarize(name, small_top + 1, omega, &chunk)));
            chunk.clear();
        }
    }
    let omega_r = omega;
    if !chunk.is_empty() || large.is_none() {
        large = Some(merge_summary(large, summarize(name, small_top + 1, omega_r, &chunk)));
    }
    if let Some(mut l) = large {
        l.omega_hi = omega_r;
        summaries.push(l);
    }
    rows.extend(failing);
    if let Some(w) = worst {
        if !rows.iter().any(|r| r.omega == w.omega) {
            rows.push(w);
        }
    }

    let mut links = vec![Check::new(
        format!("p < e^(e^15.5) forces omega <= {omega_r} (ln primorial({}) >= e^15.5)", omega_r + 1),
        theta,
        Relation::Ge,
        l0.clone(),
    )];
    let robin = robin_links(&ln_k, &c, &l0, "p = e^(e^15.5)")?;
    summaries.push(RegimeSummary {
        name: "p>=e^(e^15.5) (Robin, s=0)".into(),
        omega_lo: 0,
        omega_hi: 0,
        rows_checked: 0,
        failures: robin.iter().filter(|c| c.holds != Tri::True).count(),
        worst_margin: (robin[0].rhs.lo_f64() - robin[0].lhs.hi_f64()) / std::f64::consts::LN_10,
        worst_omega: 0,
        pass: all_hold(&robin),
    });
    links.extend(robin);
    Ok(finish(CaseTarget::Lonely, opts, k, &c, reduction, summaries, links, rows))
}

fn merge_summary(prev: Option<RegimeSummary>, next: RegimeSummary) -> RegimeSummary {
    match prev {
        None => next,
        Some(mut p) => {
            p.rows_checked += next.rows_checked;
            p.failures += next.failures;
            if next.worst_margin < p.worst_margin {
                p.worst_margin = next.worst_margin;
                p.worst_omega = next.worst_omega;
            }
            p.pass = p.pass.and(next.pass);
            p.omega_hi = next.omega_hi;
            p
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enclosure::DEFAULT_PRECISION as P;

    fn failing(r: &CaseReport, lo: usize, hi: usize) -> Vec<usize> {
        r.rows.iter().filter(|x| x.pass != Tri::True && (lo..=hi).contains(&x.omega)).map(|x| x.omega).collect()
    }

    #[test]
    fn cor2_with_stated_splits() {
        let r = corollary_case_engine(CaseTarget::Cor2, &CaseOptions::stated(P)).unwrap();
        assert!(!r.pass);
        let row8 = r.rows.iter().find(|x| x.omega == 8).unwrap();
        assert_eq!(row8.lhs_exact.as_deref(), Some("55834574848"));
        assert_eq!(row8.pass, Tri::True);
        assert!(failing(&r, 1, 8).is_empty());
        assert_eq!(failing(&r, 9, 17), vec![13, 14, 15, 16, 17]);
        assert_eq!(failing(&r, 18, 28), vec![18, 19, 20, 28]);
        let row29 = r.rows.iter().find(|x| x.omega == 29).unwrap();
        assert!(row29.margin.is_infinite() && row29.delta_lo.starts_with('-'));
        let cover = r.links.iter().find(|c| c.name.contains("forces omega")).unwrap();
        assert_eq!(cover.holds, Tri::False);
    }

    #[test]
    fn cor2_repaired_leaves_only_omega_17() {
        let opts = CaseOptions {
            delta_bound: DeltaBound::Sharp,
            s_policy: SPolicy::Best,
            constant: ConstantChoice::Derived,
            precision: P,
        };
        let r = corollary_case_engine(CaseTarget::Cor2, &opts).unwrap();
        assert!(r.k.hi_f64() < 12.34);
        let bad: Vec<usize> = r.rows.iter().filter(|x| x.pass != Tri::True).map(|x| x.omega).collect();
        assert_eq!(bad, vec![17]);
        assert!(r.links.iter().all(|c| c.holds == Tri::True));
        assert!(r.reduction.iter().all(|c| c.holds == Tri::True));
    }

    #[test]
    fn lonely_reduction_constant_exceeds_seven() {
        let (checks, k) = lonely_reduction(P).unwrap();
        assert!(k.lo_f64() > 9.88 && k.hi_f64() < 9.90);
        let c = checks.iter().find(|c| c.name.starts_with("reduction constant")).unwrap();
        assert_eq!(c.holds, Tri::False);
        assert!(checks.iter().filter(|c| !c.name.starts_with("reduction constant")).all(|c| c.holds == Tri::True));
    }
}
