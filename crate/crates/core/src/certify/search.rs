//! Parameter search for exact primes and threshold families, and the
//! brute-force soundness cross-check of issued certificates.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::Serialize;

use super::{theorem3_certify, Certificate, OmegaMode, ParamsInput, PSpec, ThresholdShape, Verdict};
use crate::characters::w_factor;
use crate::error::{Error, Result};
use crate::intervals::envelopes;
use crate::ntcore::{is_prime, least_primitive_root};
use crate::sieve::{SieveConfig, SieveSpec};

pub const R_MAX: u32 = 20;

#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub p_spec: String,
    pub candidates: usize,
    pub certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    /// Per-`r` verdicts for threshold searches.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tried: Vec<(u32, Verdict)>,
}

/// Condition ratio `LHS/H²` in double precision; `None` outside the domain.
fn ratio_f64(p: f64, f: f64, r: u32, h: f64, big_h: f64) -> Option<f64> {
    let x = big_h / h;
    if x < 3.0 {
        return None;
    }
    let env = envelopes(x, h);
    if env.a_factor <= 0.0 {
        return None;
    }
    let (w, _) = w_factor(p, h, r);
    let two_r = 2 * r as i32;
    let ln_lhs = (std::f64::consts::PI.powi(2) / 6.0).ln() + (two_r - 1) as f64 * env.b_factor.ln()
        - two_r as f64 * env.a_factor.ln()
        + two_r as f64 * f.ln()
        + h.ln()
        + 0.5 * p.ln()
        + w.ln();
    Some((ln_lhs - 2.0 * big_h.ln()).exp())
}

/// Smallest `H ∈ [3h, √(hp/2))` meeting the criterion in double precision.
fn min_big_h(p: f64, f: f64, r: u32, h: f64) -> Option<f64> {
    let hi0 = (h * p / 2.0).sqrt() * (1.0 - 1e-9);
    let lo0 = 3.0 * h;
    if hi0 <= lo0 || ratio_f64(p, f, r, h, hi0)? >= 1.0 {
        return None;
    }
    let (mut lo, mut hi) = (lo0, hi0);
    if ratio_f64(p, f, r, h, lo).is_some_and(|q| q < 1.0) {
        return Some(lo);
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if ratio_f64(p, f, r, h, mid).is_some_and(|q| q < 1.0) {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi / lo < 1.0 + 1e-12 {
            break;
        }
    }
    Some(hi)
}

/// Best `(h, H)` for fixed `(r, F)`: a geometric grid over `h`, then a finer
/// pass around the grid optimum.
fn best_h(p: f64, f: f64, r: u32) -> Option<(u64, f64)> {
    let h_top = (p / 18.0).min(1e15);
    let scan = |lo: f64, hi: f64, step: f64| -> Option<(u64, f64)> {
        let mut best: Option<(u64, f64)> = None;
        let mut h = lo.max(2.0);
        let mut last = 0u64;
        while h <= hi {
            let hi_int = h.round() as u64;
            if hi_int != last {
                last = hi_int;
                if let Some(bh) = min_big_h(p, f, r, hi_int as f64) {
                    if best.is_none_or(|(_, b)| bh < b) {
                        best = Some((hi_int, bh));
                    }
                }
            }
            h *= step;
        }
        best
    };
    let (h1, _) = scan(2.0, h_top, 1.05)?;
    scan(h1 as f64 / 1.06, (h1 as f64 * 1.06).min(h_top), 1.001)
}

struct Candidate {
    big_h: Integer,
    r: u32,
    s: usize,
    h: u64,
    spec: SieveSpec,
}

/// Searches `r ∈ [2, 20]`, `s` (excluding the `s` largest odd primes of
/// `p − 1`) and `h`, and returns the certificate with the smallest `H`; ties
/// go to the smaller `r`, then the smaller `s`.
pub fn optimize_params(p_spec: &PSpec, prec: u32) -> Result<SearchOutcome> {
    let PSpec::Exact { p, pm1 } = p_spec else {
        return Err(Error::Domain("use optimize_threshold for threshold families".into()));
    };
    let p = *p;
    let pf = p as f64;
    let odd = pm1.primes().filter(|&q| q != 2).count();
    let mut configs: Vec<(usize, SieveSpec)> = Vec::new();
    for s in 0..=odd {
        let cfg = SieveConfig::excluding_largest(p, pm1, s)?;
        if cfg.delta > 0 {
            configs.push((s, cfg.spec()));
        }
    }
    let jobs: Vec<(u32, usize, SieveSpec)> = (2..=R_MAX)
        .flat_map(|r| configs.iter().map(move |(s, spec)| (r, *s, spec.clone())))
        .collect();
    let candidates = jobs.len();
    let mut found: Vec<Candidate> = jobs
        .into_par_iter()
        .filter_map(|(r, s, spec)| {
            let f = spec.factor().ok()?.to_f64();
            let (h, bh) = best_h(pf, f, r)?;
            let big_h = Integer::from(Integer::from_f64((bh * (1.0 + 1e-9)).ceil())?);
            Some(Candidate { big_h, r, s, h, spec })
        })
        .collect();
    found.sort_by(|a, b| a.big_h.cmp(&b.big_h).then(a.r.cmp(&b.r)).then(a.s.cmp(&b.s)));
    for cand in &found {
        // Rounding in the double-precision search can land just short; nudge H
        // up a few times while 2H² < hp still holds.
        let mut big_h = cand.big_h.clone();
        for _ in 0..4 {
            if Integer::from(big_h.square_ref()) * 2u32 >= Integer::from(cand.h) * Integer::from(p) {
                break;
            }
            let params = ParamsInput::Exact {
                h: Integer::from(cand.h),
                big_h: Rational::from(big_h.clone()),
            };
            match theorem3_certify(p_spec, &cand.spec, cand.r, &params, prec) {
                Ok(cert) if cert.verdict == Verdict::Certified => {
                    return Ok(SearchOutcome {
                        p_spec: p_spec.label(),
                        candidates,
                        certified: true,
                        reason: None,
                        certificate: Some(cert),
                        tried: Vec::new(),
                    });
                }
                _ => big_h += Integer::from(&big_h / 1_000_000u32) + 1u32,
            }
        }
    }
    Ok(SearchOutcome {
        p_spec: p_spec.label(),
        candidates,
        certified: false,
        reason: Some(format!(
            "infeasible at this p: no r in 2..={R_MAX}, s and h satisfy the criterion with 2H^2 < hp (omega = {})",
            pm1.omega()
        )),
        certificate: None,
        tried: Vec::new(),
    })
}

/// For `p ≥ p0` with `ω(p − 1) ≤ ω`: the balanced shape for each `r` in
/// `r_lo..=r_hi`, keeping the certified one with the smallest exponent of `p`
/// in `H` (the largest `r`).
pub fn optimize_threshold(p0: &Integer, label: &str, omega: usize, r_lo: u32, r_hi: u32, prec: u32) -> Result<SearchOutcome> {
    let p_spec = PSpec::Threshold {
        p0: p0.clone(),
        label: label.into(),
        omega,
        omega_mode: OmegaMode::AtMost,
    };
    let sieve = SieveSpec::unsieved(omega);
    let f = sieve.factor()?;
    let results: Vec<(u32, Result<Certificate>)> = (r_lo..=r_hi)
        .into_par_iter()
        .map(|r| (r, theorem3_certify(&p_spec, &sieve, r, &ParamsInput::Shape(ThresholdShape::win(r, &f)), prec)))
        .collect();
    let mut tried = Vec::new();
    let mut best: Option<Certificate> = None;
    for (r, res) in results {
        let v = match res {
            Ok(cert) => {
                let v = cert.verdict;
                if v == Verdict::Certified {
                    best = Some(cert);
                }
                v
            }
            Err(_) => Verdict::Failed,
        };
        tried.push((r, v));
    }
    Ok(SearchOutcome {
        p_spec: p_spec.label(),
        candidates: tried.len(),
        certified: best.is_some(),
        reason: best.is_none().then(|| "no r in range certifies at this threshold".to_string()),
        certificate: best,
        tried,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CrosscheckRow {
    pub p: u64,
    pub omega: usize,
    pub g: u64,
    pub r: u32,
    pub s: usize,
    pub h: String,
    #[serde(rename = "H")]
    pub big_h: String,
    /// `log10(H/g)`.
    pub margin: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrosscheckReport {
    pub primes_checked: usize,
    pub certified: usize,
    pub skipped: usize,
    pub contradictions: Vec<CrosscheckRow>,
    pub min_margin: f64,
    pub median_margin: f64,
    pub max_margin: f64,
    pub rows: Vec<CrosscheckRow>,
    pub pass: bool,
}

/// Certifies each prime with [`optimize_params`] and compares `H` with the
/// brute-force `g(p)`.
pub fn soundness_crosscheck(primes: &[u64], prec: u32) -> Result<CrosscheckReport> {
    let results: Vec<Option<CrosscheckRow>> = primes
        .par_iter()
        .map(|&p| -> Result<Option<CrosscheckRow>> {
            let spec = PSpec::exact(p as u128)?;
            let out = optimize_params(&spec, prec)?;
            let Some(cert) = out.certificate else {
                return Ok(None);
            };
            let g = least_primitive_root(p)?;
            let big_h = cert.big_h_exact.clone().expect("exact certificates carry H");
            let margin = (big_h.to_f64() / g as f64).log10();
            Ok(Some(CrosscheckRow {
                p,
                omega: spec.omega(),
                g,
                r: cert.r,
                s: cert.sieve.s,
                h: cert.h.to_string(),
                big_h: big_h.to_string(),
                margin,
                holds: Rational::from(g) < big_h,
            }))
        })
        .collect::<Result<_>>()?;
    let skipped = results.iter().filter(|r| r.is_none()).count();
    let rows: Vec<CrosscheckRow> = results.into_iter().flatten().collect();
    let contradictions: Vec<CrosscheckRow> = rows
        .iter()
        .filter(|r| !r.holds)
        .cloned()
        .collect();
    let mut margins: Vec<f64> = rows.iter().map(|r| r.margin).collect();
    margins.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let pick = |i: usize| margins.get(i).copied().unwrap_or(f64::NAN);
    Ok(CrosscheckReport {
        primes_checked: primes.len(),
        certified: rows.len(),
        skipped,
        min_margin: pick(0),
        median_margin: pick(margins.len() / 2),
        max_margin: pick(margins.len().saturating_sub(1)),
        pass: contradictions.is_empty(),
        contradictions,
        rows,
    })
}

/// Safe primes `p = 2q + 1` in `[lo, hi]`, at most `limit` of them.
pub fn safe_primes(lo: u64, hi: u64, limit: usize) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    let mut p = lo.max(5) | 1;
    // p ≡ 3 (mod 4) for p > 7 with (p − 1)/2 odd.
    while p <= hi && out.len() < limit {
        if p % 4 == 3 && is_prime(p as u128)? && is_prime(((p - 1) / 2) as u128)? {
            out.push(p);
        }
        p += 2;
    }
    Ok(out)
}

/// `count` primes drawn uniformly from `[lo, hi]` with a seeded ChaCha8
/// stream, sorted and deduplicated.
pub fn random_primes(lo: u64, hi: u64, count: usize, seed: u64) -> Result<Vec<u64>> {
    if hi <= lo {
        return Err(Error::Domain("empty range".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut draws = 0usize;
    while out.len() < count {
        draws += 1;
        if draws > count * 10_000 {
            return Err(Error::BudgetExceeded("too few primes in range".into()));
        }
        let n = rng.gen_range(lo..=hi) | 1;
        if n >= 3 && is_prime(n as u128)? {
            out.push(n);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// `ω(p − 1)` of a prime, for filtering scans.
pub fn omega_of_pm1(p: u64) -> Result<usize> {
    Ok(crate::ntcore::factorize(p as u128 - 1)?.omega())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enclosure::DEFAULT_PRECISION as P;

    #[test]
    fn safe_prime_near_1e9_certifies_below_p_07() {
        let p = safe_primes(1_000_000_000, 1_000_100_000, 1).unwrap()[0];
        let out = optimize_params(&PSpec::exact(p as u128).unwrap(), P).unwrap();
        let cert = out.certificate.expect("certified");
        assert!(cert.lhs.hi() < cert.rhs.lo());
        let bound = (p as f64).powf(0.7);
        assert!(cert.big_h.hi_f64() < bound, "H = {} vs p^0.7 = {bound}", cert.big_h);
        let g = least_primitive_root(p).unwrap();
        assert!(Rational::from(g) < *cert.big_h_exact.as_ref().unwrap());
    }

    #[test]
    fn omega_ten_near_1e7_is_infeasible() {
        // No p ≈ 10^7 has ω(p − 1) = 10 (primorial(10) ≈ 6.5·10^9), so take
        // p − 1 = 18·510510 with ω = 7, already far out of reach.
        let out = optimize_params(&PSpec::exact(9_189_181).unwrap(), P).unwrap();
        assert!(!out.certified);
        assert!(out.reason.unwrap().starts_with("infeasible"));
    }

    #[test]
    fn deterministic_choice() {
        let spec = PSpec::exact(1_000_000_007).unwrap();
        let a = optimize_params(&spec, P).unwrap().certificate.unwrap();
        let b = optimize_params(&spec, P).unwrap().certificate.unwrap();
        assert_eq!(a.big_h_exact, b.big_h_exact);
        assert_eq!((a.r, a.sieve.s), (b.r, b.sieve.s));
    }

    #[test]
    fn threshold_search_at_1e56_omega_20() {
        let p0 = Integer::from(Integer::u_pow_u(10, 56));
        let out = optimize_threshold(&p0, "1e56", 20, 2, 10, P).unwrap();
        let cert = out.certificate.expect("some r certifies");
        assert_eq!(cert.r, 2);
        assert_eq!(out.tried.len(), 9);
    }

    #[test]
    fn random_primes_are_seeded() {
        let a = random_primes(100_000_000, 200_000_000, 5, 0).unwrap();
        let b = random_primes(100_000_000, 200_000_000, 5, 0).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|&p| is_prime(p as u128).unwrap()));
    }
}
