//! The Burgess interval family around the rationals `tp/q`, exact point
//! counts, the envelopes `A(X)`, `B(X)`, and sweeps that check the real-X
//! estimates for the auxiliary sums `S` and `T`.

use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::enclosure::{CertifiedReal, Tri};
use crate::error::{Error, Result};
use crate::ntcore::{gcd_u64, moebius_table, phi_table};

/// An interval with exact rational endpoints and explicit openness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn contains(&self, z: &Integer) -> bool {
        let lo_ok = if self.lo_closed { *z >= self.lo } else { *z > self.lo };
        let hi_ok = if self.hi_closed { *z <= self.hi } else { *z < self.hi };
        lo_ok && hi_ok
    }

    /// Number of integers inside, by exact floor/ceiling.
    pub fn count_integers(&self) -> Integer {
        let (lo, hi) = (&self.lo, &self.hi);
        let n = match (self.lo_closed, self.hi_closed) {
            // (a, b]
            (false, true) => Integer::from(hi.floor_ref()) - Integer::from(lo.floor_ref()),
            // [a, b)
            (true, false) => Integer::from(hi.ceil_ref()) - Integer::from(lo.ceil_ref()),
            // [a, b]
            (true, true) => Integer::from(hi.floor_ref()) - Integer::from(lo.ceil_ref()) + 1u32,
            // (a, b)
            (false, false) => Integer::from(hi.ceil_ref()) - Integer::from(lo.floor_ref()) - 1u32,
        };
        n.max(Integer::new())
    }

    fn render(&self) -> String {
        format!(
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalEntry {
    pub q: u64,
    pub t: u64,
    /// `(tp/q, (tp+H)/q − h + 1]`
    pub i: Interval,
    /// `[(tp−H)/q, tp/q − h + 1)`
    pub j: Interval,
}

#[derive(Clone, Debug)]
pub struct IntervalSystem {
    pub p: u64,
    pub big_h: Rational,
    pub h: u64,
    pub x: Rational,
    pub entries: Vec<IntervalEntry>,
}

/// Builds every `I(q,t)`, `J(q,t)` with `0 ≤ t < q ≤ X`, `gcd(t,q) = 1`,
/// and checks pairwise disjointness and containment in `[−H, p−H)`.
pub fn build_intervals(p: u64, big_h: &Rational, h: u64) -> Result<IntervalSystem> {
    if h < 2 {
        return Err(Error::Parameter(format!("h = {h} violates h ≥ 2")));
    }
    if *big_h <= 0 {
        return Err(Error::Parameter("H must be positive".into()));
    }
    if *big_h >= p {
        return Err(Error::Parameter(format!("H = {big_h} violates H < p = {p}")));
    }
    let x = Rational::from(big_h / h);
    if x < 2 {
        return Err(Error::Parameter(format!("X = H/h = {x} violates X ≥ 2")));
    }
    let two_hx = Rational::from(big_h * &x) * 2u32;
    if two_hx >= p {
        return Err(Error::Parameter(format!("2HX = {} violates 2HX < p = {p}", two_hx.to_f64())));
    }
    let q_max = Integer::from(x.floor_ref()).to_u64().expect("X fits in u64");
    let shift = Rational::from(1) - h;
    let mut entries = Vec::new();
    for q in 1..=q_max {
        for t in 0..q {
            if gcd_u64(t, q) != 1 {
                continue;
            }
            let tp = Rational::from(Integer::from(t) * p);
            let centre = Rational::from(&tp / q);
            let i = Interval {
                lo: centre.clone(),
                hi: Rational::from(Rational::from(&tp + big_h) / q) + &shift,
                lo_closed: false,
                hi_closed: true,
            };
            let j = Interval {
                lo: Rational::from(&tp - big_h) / q,
                hi: centre + &shift,
                lo_closed: true,
                hi_closed: false,
            };
            entries.push(IntervalEntry { q, t, i, j });
        }
    }
    let sys = IntervalSystem {
        p,
        big_h: big_h.clone(),
        h,
        x,
        entries,
    };
    check_disjoint(&sys)?;
    Ok(sys)
}

fn check_disjoint(sys: &IntervalSystem) -> Result<()> {
    let mut all: Vec<&Interval> = sys.entries.iter().flat_map(|e| [&e.i, &e.j]).collect();
    all.sort_by(|a, b| a.lo.cmp(&b.lo));
    for w in all.windows(2) {
        let (a, b) = (w[0], w[1]);
        let separated = a.hi < b.lo || (a.hi == b.lo && !(a.hi_closed && b.lo_closed));
        if !separated {
            return Err(Error::Consistency(format!(
                "intervals {} and {} overlap",
                a.render(),
                b.render()
            )));
        }
    }
    let floor = Rational::from(-&sys.big_h);
    let ceiling = Rational::from(Rational::from(sys.p) - &sys.big_h);
    for iv in &all {
        let lo_ok = iv.lo >= floor;
        let hi_ok = iv.hi < ceiling || (iv.hi == ceiling && !iv.hi_closed);
        if !(lo_ok && hi_ok) {
            return Err(Error::Consistency(format!("interval {} leaves [-H, p-H)", iv.render())));
        }
    }
    Ok(())
}

/// `N(X)`, the number of integers in the union of the family.
pub fn count_points(sys: &IntervalSystem) -> Integer {
    sys.entries
        .iter()
        .map(|e| e.i.count_integers() + e.j.count_integers())
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePair {
    pub a_factor: f64,
    pub b_factor: f64,
}

/// `A(X) = 1 − 2π²/(9X)` and `B(X) = 1 + 2π²/(9X) + 1/h + (π²/(3h))·ln X/X`.
pub fn envelopes(x: f64, h: f64) -> EnvelopePair {
    let pi2 = std::f64::consts::PI.powi(2);
    EnvelopePair {
        a_factor: 1.0 - 2.0 * pi2 / (9.0 * x),
        b_factor: 1.0 + 2.0 * pi2 / (9.0 * x) + 1.0 / h + pi2 / (3.0 * h) * x.ln() / x,
    }
}

/// Enclosures of `A(X)` and `B(X)`.
pub fn envelopes_enclosure(x: &CertifiedReal, h: &CertifiedReal) -> Result<(CertifiedReal, CertifiedReal)> {
    let prec = x.prec().max(h.prec());
    let pi2 = CertifiedReal::pi(prec).powi(2)?;
    let one = CertifiedReal::from_i64(prec, 1);
    let u = pi2.scale_i64(2).div(&x.scale_i64(9))?;
    let a = one.sub_ref(&u);
    let tail = pi2
        .div(&h.scale_i64(3))?
        .mul_ref(&x.ln()?.div(x)?);
    let b = one.add_ref(&u).add_ref(&h.recip()?).add_ref(&tail);
    Ok((a, b))
}

/// `T(X) = Σ_{q ≤ X} φ(q)`.
pub fn sum_t(x: &Rational) -> Integer {
    let k = floor_u64(x);
    phi_table(k as usize)
        .iter()
        .skip(1)
        .map(|&v| Integer::from(v))
        .sum()
}

/// `S(X) = X·Σ_{q ≤ X} φ(q)/q − T(X)`, exactly.
pub fn sum_s(x: &Rational) -> Rational {
    let k = floor_u64(x);
    let phi = phi_table(k as usize);
    let mut a = Rational::new();
    for q in 1..=k as usize {
        a += Rational::from((phi[q], q as u64));
    }
    let t: Integer = phi.iter().skip(1).map(|&v| Integer::from(v)).sum();
    Rational::from(x * &a) - t
}

fn floor_u64(x: &Rational) -> u64 {
    if *x < 1 {
        return 0;
    }
    Integer::from(x.floor_ref()).to_u64().expect("X fits in u64")
}

/// Outcome of a real-X sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeReport {
    pub claim: String,
    #[serde(rename = "X_range")]
    pub x_range: [f64; 2],
    pub candidates_checked: usize,
    /// Lower end of the smallest slack enclosure.
    pub worst_slack: f64,
    pub worst_at: f64,
    pub pass: bool,
}

struct SlackTracker {
    worst: Option<CertifiedReal>,
    worst_at: f64,
    count: usize,
    all_true: bool,
}

impl SlackTracker {
    fn new() -> Self {
        Self {
            worst: None,
            worst_at: f64::NAN,
            count: 0,
            all_true: true,
        }
    }

    /// Records `slack`, which the claim needs to be `≥ 0`.
    fn push(&mut self, slack: CertifiedReal, at: f64) {
        self.count += 1;
        let zero = CertifiedReal::from_i64(slack.prec(), 0);
        if slack.ge(&zero) != Tri::True {
            self.all_true = false;
        }
        let replace = match &self.worst {
            None => true,
            Some(w) => slack.lo() < w.lo(),
        };
        if replace {
            self.worst = Some(slack);
            self.worst_at = at;
        }
    }

    fn finish(self, claim: &str, range: [f64; 2]) -> EnvelopeReport {
        let worst = self.worst.as_ref().map(|w| w.lo_f64()).unwrap_or(f64::INFINITY);
        EnvelopeReport {
            claim: claim.into(),
            x_range: range,
            candidates_checked: self.count,
            worst_slack: worst,
            worst_at: self.worst_at,
            pass: self.all_true && worst > 0.0,
        }
    }
}

/// `|S(X) − 3X²/π²| ≤ (2/3)X` for every real `X ∈ [1, x_max)`.
///
/// On `[k, k+1)` we have `S = aX − T` with `a = Σ_{q≤k} φ(q)/q`, so
/// `f = S − 3X²/π²` is a concave quadratic. The upper branch `f − 2X/3` is
/// concave with its maximum at an endpoint or at `X* = π²(a − 2/3)/6`; the
/// lower branch `−f − 2X/3` is convex, so its supremum is at an endpoint
/// (the right one as a limit).
pub fn verify_s_envelope(x_max: u64, prec: u32) -> Result<EnvelopeReport> {
    let phi = phi_table(x_max as usize);
    let c = CertifiedReal::from_i64(prec, 3).div(&CertifiedReal::pi(prec).powi(2)?)?;
    let two_thirds = CertifiedReal::from_ratio(prec, 2, 3);
    let mut a = Rational::new();
    let mut t = Integer::new();
    let mut tracker = SlackTracker::new();
    for k in 1..x_max {
        a += Rational::from((phi[k as usize], k));
        t += phi[k as usize];
        let ae = CertifiedReal::from_rational(prec, &a);
        let te = CertifiedReal::from_integer(prec, &t);
        let f = |x: &CertifiedReal| -> Result<CertifiedReal> {
            Ok(ae.mul_ref(x).sub_ref(&te).sub_ref(&c.mul_ref(&x.powi(2)?)))
        };
        let mut candidates = vec![CertifiedReal::from_i64(prec, k as i64), CertifiedReal::from_i64(prec, k as i64 + 1)];
        let xstar = ae.sub_ref(&two_thirds).div(&c.scale_i64(2))?;
        let seg_lo = CertifiedReal::from_i64(prec, k as i64);
        let seg_hi = CertifiedReal::from_i64(prec, k as i64 + 1);
        if xstar.hi() >= seg_lo.lo() && xstar.lo() <= seg_hi.hi() {
            candidates.push(xstar.max(&seg_lo).min(&seg_hi));
        }
        for x in &candidates {
            let fx = f(x)?;
            let bound = two_thirds.mul_ref(x);
            tracker.push(bound.sub_ref(&fx), x.mid_f64());
            tracker.push(bound.add_ref(&fx), x.mid_f64());
        }
    }
    Ok(tracker.finish("|S - 3X^2/pi^2| <= (2/3) X", [1.0, x_max as f64]))
}

/// `|T(X) − 3X²/π²| ≤ X ln X` for every real `X ∈ [2, x_max)`.
///
/// `T` is constant on `[k, k+1)`. `T − cX² − X ln X` is decreasing, so its
/// maximum is at `X = k`; `cX² − T − X ln X` is convex once `X > π²/6`
/// (checked), so its supremum is at `k` or at the limit `k+1`.
pub fn verify_t_envelope(x_max: u64, prec: u32) -> Result<EnvelopeReport> {
    let phi = phi_table(x_max as usize);
    let c = CertifiedReal::from_i64(prec, 3).div(&CertifiedReal::pi(prec).powi(2)?)?;
    // convexity of c X^2 - X ln X needs 2c > 1/X on the whole range
    let convex = c.scale_i64(2).gt(&CertifiedReal::from_ratio(prec, 1, 2));
    if convex != Tri::True {
        return Err(Error::Verification("convexity of the lower branch not certified".into()));
    }
    let mut t = Integer::from(phi[1]);
    let mut tracker = SlackTracker::new();
    for k in 2..x_max {
        t += phi[k as usize];
        let te = CertifiedReal::from_integer(prec, &t);
        for (x, both) in [(k as i64, true), (k as i64 + 1, false)] {
            let xe = CertifiedReal::from_i64(prec, x);
            let bound = xe.mul_ref(&xe.ln()?);
            let diff = te.sub_ref(&c.mul_ref(&xe.powi(2)?));
            if both {
                tracker.push(bound.sub_ref(&diff), x as f64);
            }
            tracker.push(bound.add_ref(&diff), x as f64);
        }
    }
    Ok(tracker.finish("|T - 3X^2/pi^2| <= X log X", [2.0, x_max as f64]))
}

/// Empirical checks, at every integer breakpoint up to `x_max`, of the
/// external estimates the envelope proof leans on. Each sum is constant on
/// `[k, k+1)`, so each claim is tested at whichever end of the segment makes
/// its right-hand side smallest.
pub fn verify_external_inputs(x_max: u64) -> Result<Vec<EnvelopeReport>> {
    let mu = moebius_table(x_max as usize + 1);
    let six_over_pi2 = 6.0 / std::f64::consts::PI.powi(2);
    let mut m1 = 0.0f64; // Σ μ(d)/d
    let mut m2 = 0.0f64; // Σ μ(d)/d²
    let mut sqf = 0u64; // Σ μ²(d)
    let mut sqf_recip = 0.0f64; // Σ μ²(d)/d
    let mut worst = [(f64::INFINITY, 0.0f64); 4];
    let update = |i: usize, slack: f64, at: f64, worst: &mut [(f64, f64); 4]| {
        if slack < worst[i].0 {
            worst[i] = (slack, at);
        }
    };
    for k in 1..=x_max {
        let m = mu[k as usize] as f64;
        let kf = k as f64;
        m1 += m / kf;
        m2 += m / (kf * kf);
        if m != 0.0 {
            sqf += 1;
            sqf_recip += 1.0 / kf;
        }
        let right = kf + 1.0;
        update(0, 0.1 + 2.0 / right - m1.abs(), kf, &mut worst);
        update(1, six_over_pi2 * kf + 0.679091 * kf.sqrt() - sqf as f64, kf, &mut worst);
        update(2, six_over_pi2 * kf.ln() + 2.0 - sqf_recip, kf, &mut worst);
        update(3, 1.0 / right - (six_over_pi2 - m2).abs(), kf, &mut worst);
    }
    // float sums over ≤ 10^6 terms stay within 1e-9 of the true value
    let tol = 1e-9;
    let claims = [
        "|sum_{d<=X} mu(d)/d| <= 1/10 + 2/X",
        "sum_{d<=X} mu(d)^2 <= 6X/pi^2 + 0.679091 sqrt(X)",
        "sum_{d<=X} mu(d)^2/d <= 6 log(X)/pi^2 + 2",
        "|sum_{d>X} mu(d)/d^2| <= 1/X",
    ];
    Ok(claims
        .iter()
        .zip(worst)
        .map(|(claim, (slack, at))| EnvelopeReport {
            claim: (*claim).into(),
            x_range: [1.0, x_max as f64],
            candidates_checked: x_max as usize,
            worst_slack: slack,
            worst_at: at,
            pass: slack > tol,
        })
        .collect())
}

/// One `(p, H, h)` cell of the point-count grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountCell {
    pub p: u64,
    #[serde(rename = "H")]
    pub big_h: String,
    pub h: u64,
    #[serde(rename = "X")]
    pub x: f64,
    pub count: String,
    pub lower: CellBound,
    pub upper: CellBound,
    /// `2hS ≤ N`, checked exactly.
    pub sandwich_lower: bool,
    /// `N ≤ 2hS + 2T`, checked exactly. This step treats a half-open
    /// interval of length `L` as holding at most `L` integers, which fails
    /// when `H/q` is not an integer; it is reported, not required.
    pub sandwich_upper: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellBound {
    pub value_lo: f64,
    pub value_hi: f64,
    pub holds: Tri,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CountGridReport {
    pub claim: String,
    pub triples: usize,
    pub failures: Vec<CountCell>,
    pub sandwich_lower_failures: usize,
    pub sandwich_upper_failures: usize,
    pub worst_lower_ratio: f64,
    pub worst_upper_ratio: f64,
    pub pass: bool,
}

/// Checks `A(X)·(6/π²)X²h ≤ N(X) ≤ B(X)·(6/π²)X²h` for one triple and
/// records both halves of `2hS ≤ N ≤ 2hS + 2T`.
pub fn check_count_cell(p: u64, big_h: &Rational, h: u64, prec: u32) -> Result<CountCell> {
    let sys = build_intervals(p, big_h, h)?;
    let n = count_points(&sys);
    let s = sum_s(&sys.x);
    let t = sum_t(&sys.x);
    let two_h_s = Rational::from(&s * (2 * h));
    let sandwich_lower = two_h_s <= n;
    let sandwich_upper = Rational::from(&n - &two_h_s) <= Rational::from(Integer::from(&t * 2u32));

    let xe = CertifiedReal::from_rational(prec, &sys.x);
    let he = CertifiedReal::from_i64(prec, h as i64);
    let (a, b) = envelopes_enclosure(&xe, &he)?;
    let main = CertifiedReal::from_i64(prec, 6)
        .div(&CertifiedReal::pi(prec).powi(2)?)?
        .mul_ref(&xe.powi(2)?)
        .mul_ref(&he);
    let lo = a.mul_ref(&main);
    let hi = b.mul_ref(&main);
    let ne = CertifiedReal::from_integer(prec, &n);
    Ok(CountCell {
        p,
        big_h: big_h.to_string(),
        h,
        x: sys.x.to_f64(),
        count: n.to_string(),
        lower: CellBound {
            value_lo: lo.lo_f64(),
            value_hi: lo.hi_f64(),
            holds: lo.le(&ne),
        },
        upper: CellBound {
            value_lo: hi.lo_f64(),
            value_hi: hi.hi_f64(),
            holds: ne.le(&hi),
        },
        sandwich_lower,
        sandwich_upper,
    })
}

/// The default grid: for each `p`, integer and half-integer `X` in
/// `[2, 50]`, and every `h ≥ 2` (up to `h_cap`) with `2X²h < p`.
pub fn default_count_grid(ps: &[u64], h_cap: u64) -> Vec<(u64, Rational, u64)> {
    let mut out = Vec::new();
    for &p in ps {
        for twice_x in 4u64..=100 {
            let x = Rational::from((twice_x, 2));
            let hs: Vec<u64> = [2u64, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233]
                .into_iter()
                .filter(|&h| h <= h_cap)
                .filter(|&h| Rational::from(&x * &x) * (2 * h) < p)
                .collect();
            for h in hs {
                out.push((p, Rational::from(&x * h), h));
            }
        }
    }
    out
}

pub fn verify_count_grid(cells: &[(u64, Rational, u64)], prec: u32) -> Result<CountGridReport> {
    let results: Vec<Result<CountCell>> = cells
        .par_iter()
        .map(|(p, big_h, h)| check_count_cell(*p, big_h, *h, prec))
        .collect();
    let mut failures = Vec::new();
    let mut worst_lower = f64::INFINITY;
    let mut worst_upper = f64::INFINITY;
    let mut count = 0;
    let mut lower_fail = 0;
    let mut upper_fail = 0;
    for cell in results {
        let cell = cell?;
        count += 1;
        lower_fail += usize::from(!cell.sandwich_lower);
        upper_fail += usize::from(!cell.sandwich_upper);
        let n: f64 = cell.count.parse().unwrap_or(f64::NAN);
        worst_lower = worst_lower.min(n / cell.lower.value_hi);
        worst_upper = worst_upper.min(cell.upper.value_lo / n);
        if cell.lower.holds != Tri::True || cell.upper.holds != Tri::True {
            failures.push(cell);
        }
    }
    Ok(CountGridReport {
        claim: "A(X)(6/pi^2)X^2 h <= N(X) <= B(X)(6/pi^2)X^2 h".into(),
        triples: count,
        pass: failures.is_empty(),
        failures,
        sandwich_lower_failures: lower_fail,
        sandwich_upper_failures: upper_fail,
        worst_lower_ratio: worst_lower,
        worst_upper_ratio: worst_upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn builds_the_small_example() {
        let sys = build_intervals(10007, &r(100), 10).unwrap();
        assert_eq!(sys.x, 10);
        assert!(sys.entries.iter().all(|e| e.q <= 10));
        // number of entries is Σ_{q≤10} φ(q) = 32
        assert_eq!(sys.entries.len(), 32);
        let first = &sys.entries[0];
        assert_eq!((first.q, first.t), (1, 0));
        assert_eq!(first.i.lo, 0);
        assert_eq!(first.i.hi, 91);
        assert_eq!(first.j.lo, -100);
        assert_eq!(first.j.hi, -9);
        assert_eq!(first.i.count_integers(), 91);
        assert_eq!(first.j.count_integers(), 91);
    }

    #[test]
    fn rejects_large_2hx() {
        let err = build_intervals(101, &r(60), 10).unwrap_err();
        assert!(err.to_string().contains("2HX"), "{err}");
        assert!(build_intervals(10007, &r(30), 20).is_err());
        assert!(build_intervals(10007, &r(30), 1).is_err());
    }

    #[test]
    fn count_matches_membership_enumeration() {
        for (p, big_h, h) in [(10007u64, 100i64, 10u64), (10007, 40, 20), (65537, 150, 7)] {
            let sys = build_intervals(p, &r(big_h), h).unwrap();
            let n = count_points(&sys);
            let mut brute = 0u64;
            for z in -big_h..(p as i64 - big_h) {
                let z = Integer::from(z);
                if sys.entries.iter().any(|e| e.i.contains(&z) || e.j.contains(&z)) {
                    brute += 1;
                }
            }
            assert_eq!(n, brute);
        }
    }

    #[test]
    fn shifted_points_land_in_the_window() {
        let sys = build_intervals(65537, &r(300), 6).unwrap();
        let h = sys.h as i64;
        for e in &sys.entries {
            for (iv, positive) in [(&e.i, true), (&e.j, false)] {
                let lo = Integer::from(iv.lo.floor_ref()).to_i64().unwrap();
                let hi = Integer::from(iv.hi.ceil_ref()).to_i64().unwrap();
                for z in lo..=hi {
                    if !iv.contains(&Integer::from(z)) {
                        continue;
                    }
                    for n in 0..h {
                        let v = e.q as i64 * (z + n) - 65537 * e.t as i64;
                        if positive {
                            assert!(v > 0 && v <= 300);
                        } else {
                            assert!((-300..0).contains(&v));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn envelope_examples() {
        let e = envelopes(10.0, 10.0);
        assert!((e.a_factor - 0.780675).abs() < 1e-6);
        assert!((e.b_factor - 1.3950765).abs() < 1e-6);
        let x0 = 2.0 * std::f64::consts::PI.powi(2) / 9.0;
        assert!(envelopes(x0, 5.0).a_factor.abs() < 1e-15);
        let big = envelopes(1e7, 2e5);
        assert!(big.a_factor >= 1.0 - 1e-6 && big.b_factor <= 1.0 + 1e-5);
    }

    #[test]
    fn sum_examples() {
        assert_eq!(sum_t(&r(10)), 32);
        assert_eq!(sum_t(&r(1)), 1);
        let s = sum_s(&r(10));
        // 10·(1 + 1/2 + 2/3 + 2/4 + 4/5 + 2/6 + 6/7 + 4/8 + 6/9 + 4/10) − 32
        let direct = Rational::from((1, 1)) + Rational::from((1, 2)) + Rational::from((2, 3))
            + Rational::from((2, 4)) + Rational::from((4, 5)) + Rational::from((2, 6))
            + Rational::from((6, 7)) + Rational::from((4, 8)) + Rational::from((6, 9))
            + Rational::from((4, 10));
        assert_eq!(s, direct * 10u32 - 32u32);
        assert!((s.to_f64() - 30.238).abs() < 1e-3);
        assert_eq!(sum_s(&r(1)), 0);
    }

    #[test]
    fn s_and_t_sweeps_pass() {
        let s = verify_s_envelope(38, 128).unwrap();
        assert!(s.pass && s.worst_slack > 0.0, "{s:?}");
        let t = verify_t_envelope(1000, 128).unwrap();
        assert!(t.pass && t.worst_slack > 0.0, "{t:?}");
    }

    #[test]
    fn external_inputs_small_range() {
        for rep in verify_external_inputs(10_000).unwrap() {
            assert!(rep.pass, "{rep:?}");
        }
    }

    #[test]
    fn count_cell_small_grid() {
        let cells = default_count_grid(&[10007], 13);
        let rep = verify_count_grid(&cells, 128).unwrap();
        assert!(rep.triples > 20);
        assert!(rep.pass, "{:?}", rep.failures.first());
        assert_eq!(rep.sandwich_lower_failures, 0);
    }

    #[test]
    fn upper_sandwich_needs_integral_h_over_q() {
        // q = 2, t = 1: (5003.5, 5005] holds 2 integers but has length 1.5
        let cell = check_count_cell(10007, &r(5), 2, 128).unwrap();
        assert_eq!(cell.count, "12");
        assert!(cell.sandwich_lower);
        assert!(!cell.sandwich_upper);
        // H = 4, h = 2: every q ≤ X = 2 divides H
        let cell = check_count_cell(10007, &r(4), 2, 128).unwrap();
        assert!(cell.sandwich_upper);
    }
}
