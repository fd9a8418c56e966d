//! Closed-form upper bounds for `g(p)` and the comparison with the
//! Burgess-constant bound `C(r)^r·2^{rω}·p^{1/4+1/(4r)}·(ln p)^{1/2}`.
//!
//! Everything is evaluated in log space, so `p = 10^1000` costs the same as
//! `p = 10^15`.

use rug::{Integer, Rational};
use serde::Serialize;

use super::{Check, PSpec, Relation};
use crate::enclosure::{CertifiedReal, Tri};
use crate::error::{Error, Result};
use crate::sieve::SieveSpec;

/// `(r, C(r), C(r)^r)` as published, four decimals.
pub const BURGESS_CONSTANTS: [(u32, &str, &str); 9] = [
    (2, "3.5851", "12.8530"),
    (3, "2.5144", "15.8966"),
    (4, "2.1258", "20.4216"),
    (5, "1.9231", "26.3033"),
    (6, "1.7959", "33.5501"),
    (7, "1.7066", "42.1621"),
    (8, "1.6384", "51.9230"),
    (9, "1.5857", "63.3855"),
    (10, "1.5410", "75.5139"),
];

/// A bound together with its base-10 logarithm.
#[derive(Clone, Debug, Serialize)]
pub struct BoundValue {
    pub bound: String,
    pub p: String,
    pub r: u32,
    pub omega: usize,
    #[serde(rename = "F")]
    pub sieve_factor: CertifiedReal,
    pub value: CertifiedReal,
    pub ln_value: CertifiedReal,
    pub log10_value: CertifiedReal,
    /// Bound `≥ √p`, i.e. no better than the trivial `0.999·√p`.
    pub vacuous: Tri,
}

fn ln_p(p_spec: &PSpec, prec: u32) -> Result<CertifiedReal> {
    CertifiedReal::from_integer(prec, &p_spec.p_min()).ln()
}

fn finish(bound: &str, p_spec: &PSpec, r: u32, omega: usize, f: CertifiedReal, ln_v: CertifiedReal, prec: u32) -> Result<BoundValue> {
    let ln10 = CertifiedReal::from_i64(prec, 10).ln()?;
    let half_ln_p = ln_p(p_spec, prec)?.div(&CertifiedReal::from_i64(prec, 2))?;
    Ok(BoundValue {
        bound: bound.into(),
        p: p_spec.label(),
        r,
        omega,
        sieve_factor: f,
        value: ln_v.exp(),
        log10_value: ln_v.div(&ln10)?,
        vacuous: ln_v.ge(&half_ln_p),
        ln_value: ln_v,
    })
}

/// `ln(2r) + r·ln F + (1/4 + 1/(4r))·ln p`.
fn ln_two_r_f_pow(p_spec: &PSpec, r: u32, f: &CertifiedReal, prec: u32) -> Result<CertifiedReal> {
    let expo = CertifiedReal::from_rational(prec, &(Rational::from((1, 4)) + Rational::from((1, 4 * r))));
    Ok(CertifiedReal::from_i64(prec, 2 * r as i64)
        .ln()?
        .add_ref(&f.ln()?.scale_i64(r as i64))
        .add_ref(&expo.mul_ref(&ln_p(p_spec, prec)?)))
}

/// `2r·2^{rω}·p^{1/4+1/(4r)}` at the smallest `p` of `p_spec`.
pub fn bound_theorem1(p_spec: &PSpec, r: u32, omega: usize, prec: u32) -> Result<BoundValue> {
    let mut b = bound_sieved(p_spec, r, &SieveSpec::unsieved(omega), prec)?;
    b.bound = "unsieved".into();
    Ok(b)
}

/// `2r·F^r·p^{1/4+1/(4r)}` with `F = (2 + (s−1)/δ)·2^{ω−s}`.
pub fn bound_sieved(p_spec: &PSpec, r: u32, sieve: &SieveSpec, prec: u32) -> Result<BoundValue> {
    if r < 2 {
        return Err(Error::Domain(format!("r = {r}: the bound needs r >= 2")));
    }
    let f = CertifiedReal::from_rational(prec, &sieve.factor()?);
    let ln_v = ln_two_r_f_pow(p_spec, r, &f, prec)?;
    finish("sieved", p_spec, r, sieve.omega, f, ln_v, prec)
}

fn parse_decimal(s: &str) -> Result<Rational> {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits: Integer = format!("{int}{frac}").parse().map_err(|_| Error::Parse(format!("bad decimal {s:?}")))?;
    Ok(Rational::from((digits, Integer::from(Integer::u_pow_u(10, frac.len() as u32)))))
}

/// A four-decimal table entry `v` as the enclosure `[v − 5·10⁻⁵, v + 5·10⁻⁵]`.
fn table_entry(prec: u32, s: &str) -> Result<CertifiedReal> {
    let q = parse_decimal(s)?;
    let eps = Rational::from((5, 100_000));
    Ok(CertifiedReal::from_bounds(
        CertifiedReal::from_rational(prec, &(q.clone() - &eps)),
        CertifiedReal::from_rational(prec, &(q + eps)),
    ))
}

fn table_row(r: u32) -> Result<(&'static str, &'static str)> {
    BURGESS_CONSTANTS
        .iter()
        .find(|(rr, _, _)| *rr == r)
        .map(|(_, c, cr)| (*c, *cr))
        .ok_or_else(|| Error::Domain(format!("r = {r} is outside the tabulated range 2..=10")))
}

/// `C(r)^r·2^{rω}·p^{1/4+1/(4r)}·(ln p)^{1/2}`.
pub fn burgess_comparison_bound(p_spec: &PSpec, r: u32, omega: usize, prec: u32) -> Result<BoundValue> {
    let (_, c_pow) = table_row(r)?;
    let cr = table_entry(prec, c_pow)?;
    let f = CertifiedReal::from_integer(prec, &Integer::from(Integer::u_pow_u(2, omega as u32)));
    let lnp = ln_p(p_spec, prec)?;
    let expo = CertifiedReal::from_rational(prec, &(Rational::from((1, 4)) + Rational::from((1, 4 * r))));
    let ln_v = cr
        .ln()?
        .add_ref(&f.ln()?.scale_i64(r as i64))
        .add_ref(&expo.mul_ref(&lnp))
        .add_ref(&lnp.ln()?.div(&CertifiedReal::from_i64(prec, 2))?);
    finish("burgess-constant", p_spec, r, omega, f, ln_v, prec)
}

/// One row of the side-by-side comparison.
#[derive(Clone, Debug, Serialize)]
pub struct BurgessRow {
    pub r: u32,
    #[serde(rename = "C")]
    pub c: String,
    #[serde(rename = "C_pow_r")]
    pub c_pow: String,
    /// `C(r)` raised to `r` overlaps the tabulated `C(r)^r` (both rounded).
    pub table_consistent: Tri,
    pub burgess: BoundValue,
    pub unsieved: BoundValue,
    /// `2r/(C(r)^r·(ln p)^{1/2})`, decreasing in `p`.
    pub ratio: CertifiedReal,
    pub unsieved_below: Check,
}

/// Both bounds for `r = 2..=10` at the smallest `p` of `p_spec`. The ratio
/// does not depend on `ω` and decreases with `p`, so a certified ratio below 1
/// at `p0` covers every `p ≥ p0`.
pub fn burgess_table(p_spec: &PSpec, omega: usize, prec: u32) -> Result<Vec<BurgessRow>> {
    BURGESS_CONSTANTS
        .iter()
        .map(|&(r, c, c_pow)| {
            let ce = table_entry(prec, c)?;
            let cpe = table_entry(prec, c_pow)?;
            let raised = ce.powi(r as i32)?;
            let table_consistent = Tri::from_bool(raised.lo() <= cpe.hi() && cpe.lo() <= raised.hi());
            let burgess = burgess_comparison_bound(p_spec, r, omega, prec)?;
            let unsieved = bound_theorem1(p_spec, r, omega, prec)?;
            let ratio = unsieved.ln_value.sub_ref(&burgess.ln_value).exp();
            let one = CertifiedReal::from_i64(prec, 1);
            Ok(BurgessRow {
                r,
                c: c.into(),
                c_pow: c_pow.into(),
                table_consistent,
                unsieved_below: Check::new(format!("r = {r}: unsieved / burgess-constant"), ratio.clone(), Relation::Lt, one),
                burgess,
                unsieved,
                ratio,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::OmegaMode;
    use crate::enclosure::DEFAULT_PRECISION as P;
    use crate::sieve::DeltaBound;

    fn p56(omega: usize) -> PSpec {
        PSpec::power_of_ten(56, omega, OmegaMode::Exactly)
    }

    #[test]
    fn theorem1_at_1e56() {
        let b = bound_theorem1(&p56(10), 2, 10, P).unwrap();
        // 4·2^20·10^{56·3/8}.
        let expect = 4.0 * 2f64.powi(20) * 10f64.powi(21);
        assert!((b.value.mid_f64() / expect - 1.0).abs() < 1e-9);
        let l = (4.0 * 2f64.powi(20)).log10() + 21.0;
        assert!(b.log10_value.lo_f64() <= l + 1e-9 && l - 1e-9 <= b.log10_value.hi_f64());
        assert_eq!(b.vacuous, Tri::False);
    }

    #[test]
    fn sieved_with_empty_sieve_coincides() {
        let a = bound_theorem1(&p56(7), 3, 7, P).unwrap();
        let b = bound_sieved(&p56(7), 3, &SieveSpec::unsieved(7), P).unwrap();
        assert_eq!(a.value.lo(), b.value.lo());
        assert_eq!(a.value.hi(), b.value.hi());
    }

    #[test]
    fn vacuous_when_constant_swamps_p() {
        // 2r·2^{rω} ≥ p^{1/4−1/(4r)}: r = 2, ω = 40 at 10^56 (2^82 vs 10^7).
        let b = bound_theorem1(&p56(40), 2, 40, P).unwrap();
        assert_eq!(b.vacuous, Tri::True);
    }

    #[test]
    fn sieved_factor_for_stated_worst_case() {
        let spec = SieveSpec::worst_case(12, 9, DeltaBound::Stated).unwrap();
        let b = bound_sieved(&p56(12), 2, &spec, P).unwrap();
        let f = spec.factor().unwrap();
        assert!(b.sieve_factor.contains_rational(&f));
        assert!(bound_sieved(&p56(40), 2, &SieveSpec::worst_case(40, 37, DeltaBound::Stated).unwrap(), P).is_err());
    }

    #[test]
    fn table_rows_and_comparison() {
        let rows = burgess_table(&p56(10), 10, P).unwrap();
        assert_eq!(rows.len(), 9);
        for row in &rows {
            assert_eq!(row.table_consistent, Tri::True, "r = {}", row.r);
            assert_eq!(row.unsieved_below.holds, Tri::True, "r = {}", row.r);
        }
        // r = 2: 4/(12.8530·√(56 ln 10)).
        let expect = 4.0 / (12.853 * (56.0 * 10f64.ln()).sqrt());
        assert!((rows[0].ratio.mid_f64() / expect - 1.0).abs() < 1e-5);
        assert!(burgess_comparison_bound(&p56(10), 11, 10, P).is_err());
        assert!(burgess_comparison_bound(&p56(10), 1, 10, P).is_err());
    }
}
