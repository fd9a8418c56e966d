//! Certified evaluation of the criterion
//!
//! `(π²/6)·B(X)^{2r−1}/A(X)^{2r}·F^{2r}·h·√p·W(p,h,r) < H²  ⇒  g(p) < H`
//!
//! with `X = H/h` and `F = (2 + (s−1)/δ)·2^{ω−s}`, for exact primes and for
//! threshold families "all p ≥ P₀ with ω(p − 1) = ω". The derived bounds, the
//! corollary case analysis, the win-chain derivations and the parameter search
//! live in the submodules.

pub mod bounds;
pub mod cases;
pub mod search;
pub mod win;

use std::fmt;

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::{Serialize, Serializer};

use crate::characters::{w_factor_enclosure, WBranch};
use crate::enclosure::{escalate, CertifiedReal, Tri};
use crate::error::{Error, Result};
use crate::intervals::envelopes_enclosure;
use crate::ntcore::Factorization;
use crate::sieve::SieveSpec;

pub use bounds::{bound_sieved, bound_theorem1, burgess_comparison_bound, burgess_table, BoundValue, BurgessRow, BURGESS_CONSTANTS};
pub use cases::{corollary_case_engine, CaseOptions, CaseReport, CaseRow, CaseTarget, ConstantChoice, SPolicy};
pub use search::{optimize_params, optimize_threshold, random_primes, safe_primes, soundness_crosscheck, CrosscheckReport, SearchOutcome};
pub use win::{theorem_win2_derive, theorem_win_derive, win_chain_sweep, WinChain, WinSweep};

pub(crate) mod int_string {
    use rug::Integer;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(n: &Integer, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }
}

fn u128_string<S: Serializer>(n: &u128, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

/// Outcome of a certification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Certified,
    Failed,
    Indeterminate,
}

impl Verdict {
    fn from_tri(t: Tri) -> Self {
        match t {
            Tri::True => Verdict::Certified,
            Tri::False => Verdict::Failed,
            Tri::Unknown => Verdict::Indeterminate,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Certified => "certified",
            Verdict::Failed => "failed",
            Verdict::Indeterminate => "indeterminate",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaMode {
    Exactly,
    /// Covers every `ω(p − 1) ≤ omega`; only sound with `s = 0`, where `F = 2^ω`
    /// grows with `ω`.
    AtMost,
}

/// Which primes a certificate speaks about.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PSpec {
    Exact {
        #[serde(serialize_with = "u128_string")]
        p: u128,
        pm1: Factorization,
    },
    Threshold {
        #[serde(with = "int_string")]
        p0: Integer,
        label: String,
        omega: usize,
        omega_mode: OmegaMode,
    },
}

impl PSpec {
    pub fn exact(p: u128) -> Result<Self> {
        if p < 3 || !crate::ntcore::is_prime(p)? {
            return Err(Error::Domain(format!("{p} is not an odd prime")));
        }
        Ok(PSpec::Exact {
            p,
            pm1: crate::ntcore::factorize(p - 1)?,
        })
    }

    /// `p ≥ 10^k`.
    pub fn power_of_ten(k: u32, omega: usize, mode: OmegaMode) -> Self {
        PSpec::Threshold {
            p0: Integer::from(Integer::u_pow_u(10, k)),
            label: format!("1e{k}"),
            omega,
            omega_mode: mode,
        }
    }

    pub fn threshold(p0: Integer, omega: usize, mode: OmegaMode) -> Self {
        PSpec::Threshold {
            label: p0.to_string(),
            p0,
            omega,
            omega_mode: mode,
        }
    }

    pub fn omega(&self) -> usize {
        match self {
            PSpec::Exact { pm1, .. } => pm1.omega(),
            PSpec::Threshold { omega, .. } => *omega,
        }
    }

    /// Smallest prime covered, as an integer.
    pub fn p_min(&self) -> Integer {
        match self {
            PSpec::Exact { p, .. } => Integer::from(*p),
            PSpec::Threshold { p0, .. } => p0.clone(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            PSpec::Exact { p, .. } => p.to_string(),
            PSpec::Threshold { label, omega, omega_mode, .. } => match omega_mode {
                OmegaMode::Exactly => format!("p >= {label}, omega(p-1) = {omega}"),
                OmegaMode::AtMost => format!("p >= {label}, omega(p-1) <= {omega}"),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Gt => ">",
            Relation::Ge => ">=",
        })
    }
}

/// One certified comparison in a chain of inequalities.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub lhs: CertifiedReal,
    pub relation: Relation,
    pub rhs: CertifiedReal,
    pub holds: Tri,
    /// Reported but not part of the pass/fail decision.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub informational: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, lhs: CertifiedReal, relation: Relation, rhs: CertifiedReal) -> Self {
        let holds = match relation {
            Relation::Lt => lhs.lt(&rhs),
            Relation::Le => lhs.le(&rhs),
            Relation::Gt => lhs.gt(&rhs),
            Relation::Ge => lhs.ge(&rhs),
        };
        Self {
            name: name.into(),
            lhs,
            relation,
            rhs,
            holds,
            informational: false,
        }
    }

    /// A comparison decided exactly elsewhere; the enclosures are for display.
    pub fn exact(name: impl Into<String>, lhs: CertifiedReal, relation: Relation, rhs: CertifiedReal, holds: bool) -> Self {
        Self {
            name: name.into(),
            lhs,
            relation,
            rhs,
            holds: Tri::from_bool(holds),
            informational: false,
        }
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    pub fn counts(&self) -> bool {
        !self.informational
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} {} {} [{}]{}",
            self.name,
            self.lhs,
            self.relation,
            self.rhs,
            self.holds,
            if self.informational { " (informational)" } else { "" }
        )
    }
}

/// Conjunction over the non-informational checks.
pub fn all_hold(checks: &[Check]) -> Tri {
    checks.iter().filter(|c| c.counts()).fold(Tri::True, |acc, c| acc.and(c.holds))
}

/// First non-informational check that is not certified true.
pub fn first_failure(checks: &[Check]) -> Option<&Check> {
    checks.iter().find(|c| c.counts() && c.holds != Tri::True)
}

/// The coefficient `c` of `h = ⌈c·p^β⌉` in a threshold shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HCoefficient {
    Rational {
        #[serde(with = "crate::sieve::rational_string")]
        value: Rational,
    },
    /// `(2r/e)·(√2(r−1)/(2r−1))^{1/r}`, the choice that makes the two terms of
    /// the general W bound comparable (`e` is Euler's number).
    BalancedWeil { r: u32 },
}

impl HCoefficient {
    pub fn enclosure(&self, prec: u32) -> Result<CertifiedReal> {
        match self {
            HCoefficient::Rational { value } => Ok(CertifiedReal::from_rational(prec, value)),
            HCoefficient::BalancedWeil { r } => balanced_weil_coefficient(prec, *r),
        }
    }

    fn describe(&self) -> String {
        match self {
            HCoefficient::Rational { value } => value.to_string(),
            HCoefficient::BalancedWeil { r } => format!("(2*{r}/e)*(sqrt(2)*({r}-1)/(2*{r}-1))^(1/{r})"),
        }
    }
}

/// `κ_r = (√2(r−1)/(2r−1))^{1/r}`.
pub fn kappa(prec: u32, r: u32) -> Result<CertifiedReal> {
    if r < 2 {
        return Err(Error::Domain("kappa needs r >= 2".into()));
    }
    let base = CertifiedReal::from_i64(prec, 2)
        .sqrt()?
        .mul_ref(&CertifiedReal::from_ratio(prec, r as i64 - 1, 2 * r as i64 - 1));
    base.pow_rational(&Rational::from((1, r)))
}

/// `(2r/e)·κ_r`.
pub fn balanced_weil_coefficient(prec: u32, r: u32) -> Result<CertifiedReal> {
    Ok(CertifiedReal::from_i64(prec, 2 * r as i64)
        .div(&CertifiedReal::e(prec))?
        .mul_ref(&kappa(prec, r)?))
}

/// `h = ⌈c_h·p^β⌉`, `H = c_H·p^α` for every `p` of a threshold family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdShape {
    pub h_coeff: HCoefficient,
    #[serde(with = "crate::sieve::rational_string")]
    pub h_exp: Rational,
    #[serde(with = "crate::sieve::rational_string")]
    pub big_h_coeff: Rational,
    #[serde(with = "crate::sieve::rational_string")]
    pub big_h_exp: Rational,
}

impl ThresholdShape {
    pub fn h_formula(&self) -> String {
        format!("ceil({} * p^({}))", self.h_coeff.describe(), self.h_exp)
    }

    pub fn big_h_formula(&self) -> String {
        format!("{} * p^({})", self.big_h_coeff, self.big_h_exp)
    }

    /// `H = C·r·F^r·p^{1/4+1/(4r)}`, `h` by the balanced recipe, with `C = 2`.
    pub fn win(r: u32, f: &Rational) -> Self {
        let f_pow = Rational::from(f.pow(r));
        Self {
            h_coeff: HCoefficient::BalancedWeil { r },
            h_exp: Rational::from((1, 2 * r)),
            big_h_coeff: Rational::from(2 * r) * f_pow,
            big_h_exp: Rational::from((1, 4)) + Rational::from((1, 4 * r)),
        }
    }
}

/// `h` as issued: an integer for exact primes, a formula for thresholds.
#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum HValue {
    Exact(#[serde(with = "int_string")] Integer),
    Shape { formula: String, at_p0: CertifiedReal },
}

impl fmt::Display for HValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HValue::Exact(h) => write!(f, "{h}"),
            HValue::Shape { formula, at_p0 } => write!(f, "{formula} (at p0: {at_p0})"),
        }
    }
}

/// Parameters as requested by the caller.
#[derive(Clone, Debug)]
pub enum ParamsInput {
    Exact { h: Integer, big_h: Rational },
    Shape(ThresholdShape),
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub w_branch: WBranch,
    /// Upper bound used for `W` (exact primes) or for `h·√p·W` divided by
    /// `H²` (thresholds).
    pub w: CertifiedReal,
    #[serde(rename = "X")]
    pub x: CertifiedReal,
    #[serde(rename = "A")]
    pub a: CertifiedReal,
    #[serde(rename = "B")]
    pub b: CertifiedReal,
    #[serde(rename = "F")]
    pub sieve_factor: CertifiedReal,
    pub precision: u32,
    pub preconditions: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub p_spec: PSpec,
    pub r: u32,
    pub h: HValue,
    #[serde(rename = "H")]
    pub big_h: CertifiedReal,
    /// Exact `H` when it is rational.
    #[serde(rename = "H_exact", skip_serializing_if = "Option::is_none", serialize_with = "opt_rational")]
    pub big_h_exact: Option<Rational>,
    pub sieve: SieveSpec,
    pub lhs: CertifiedReal,
    pub rhs: CertifiedReal,
    pub verdict: Verdict,
    pub provenance: Provenance,
}

fn opt_rational<S: Serializer>(q: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&q.to_string()),
        None => s.serialize_none(),
    }
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }

    /// For exact certificates: `⌈H⌉ − 1` as an integer when `H` is exact,
    /// i.e. the largest integer the certificate allows `g(p)` to be.
    pub fn exact_h(&self) -> Option<&Rational> {
        self.big_h_exact.as_ref()
    }
}

/// Checks `sieve` against `p_spec` and returns `F`.
fn sieve_factor(p_spec: &PSpec, sieve: &SieveSpec) -> Result<Rational> {
    let f = sieve.factor()?;
    if sieve.omega != p_spec.omega() {
        return Err(Error::Config(format!(
            "sieve is for omega = {} but the prime specification has omega = {}",
            sieve.omega,
            p_spec.omega()
        )));
    }
    if let PSpec::Threshold { omega_mode: OmegaMode::AtMost, .. } = p_spec {
        if sieve.s != 0 {
            return Err(Error::Config("an omega range needs the unsieved configuration (s = 0)".into()));
        }
    }
    Ok(f)
}

/// Certifies `g(p) < H` for every prime in `p_spec`, escalating precision on
/// indeterminate comparisons.
pub fn theorem3_certify(p_spec: &PSpec, sieve: &SieveSpec, r: u32, params: &ParamsInput, prec: u32) -> Result<Certificate> {
    if r == 0 {
        return Err(Error::Parameter("r must be at least 1".into()));
    }
    let f = sieve_factor(p_spec, sieve)?;
    let (_, cert, _) = escalate(prec, |prec| {
        let cert = match (p_spec, params) {
            (PSpec::Exact { p, .. }, ParamsInput::Exact { h, big_h }) => certify_exact(p_spec, *p, sieve, &f, r, h, big_h, prec)?,
            (PSpec::Threshold { p0, .. }, ParamsInput::Shape(shape)) => certify_threshold(p_spec, p0, sieve, &f, r, shape, prec)?,
            (PSpec::Exact { .. }, ParamsInput::Shape(_)) => {
                return Err(Error::Parameter("exact primes take explicit h and H".into()));
            }
            (PSpec::Threshold { .. }, ParamsInput::Exact { .. }) => {
                return Err(Error::Parameter("threshold families take an (h, H) shape".into()));
            }
        };
        let tri = match cert.verdict {
            Verdict::Certified => Tri::True,
            Verdict::Failed => Tri::False,
            Verdict::Indeterminate => Tri::Unknown,
        };
        Ok((tri, cert))
    })?;
    Ok(cert)
}

fn pi2_over_6(prec: u32) -> Result<CertifiedReal> {
    CertifiedReal::pi(prec).powi(2)?.div(&CertifiedReal::from_i64(prec, 6))
}

/// `(π²/6)·B^{2r−1}/A^{2r}·F^{2r}`.
fn leading_constant(a: &CertifiedReal, b: &CertifiedReal, f: &CertifiedReal, r: u32) -> Result<CertifiedReal> {
    let prec = a.prec();
    let two_r = 2 * r as i32;
    Ok(pi2_over_6(prec)?
        .mul_ref(&b.powi(two_r - 1)?)
        .div(&a.powi(two_r)?)?
        .mul_ref(&f.powi(two_r)?))
}

#[allow(clippy::too_many_arguments)]
fn certify_exact(
    p_spec: &PSpec,
    p: u128,
    sieve: &SieveSpec,
    f: &Rational,
    r: u32,
    h: &Integer,
    big_h: &Rational,
    prec: u32,
) -> Result<Certificate> {
    if *h < 2 {
        return Err(Error::Parameter(format!("h = {h} violates h >= 2")));
    }
    if *big_h < Rational::from(h * Integer::from(2)) {
        return Err(Error::Parameter(format!("H = {big_h} violates H >= 2h = {}", Integer::from(h * 2))));
    }
    let two_h2 = Rational::from(big_h.square_ref()) * Rational::from(2);
    let hp = Rational::from(h * Integer::from(p));
    if two_h2 >= hp {
        return Err(Error::Parameter(format!("2H^2 = {} violates 2H^2 < hp = {hp}", two_h2.to_f64())));
    }
    let pp = CertifiedReal::from_u128(prec, p);
    let sqrt_p = pp.sqrt()?;
    let hh = CertifiedReal::from_integer(prec, h);
    let bh = CertifiedReal::from_rational(prec, big_h);
    let x = bh.div(&hh)?;
    let (a, b) = envelopes_enclosure(&x, &hh)?;
    let mut pre = vec![
        Check::exact("h >= 2", hh.clone(), Relation::Ge, CertifiedReal::from_i64(prec, 2), true),
        Check::exact("H >= 2h", bh.clone(), Relation::Ge, hh.scale_i64(2), true),
        Check::exact(
            "2H^2 < hp",
            CertifiedReal::from_rational(prec, &two_h2),
            Relation::Lt,
            CertifiedReal::from_rational(prec, &hp),
            true,
        ),
        Check::exact(
            "delta > 0",
            CertifiedReal::from_rational(prec, &sieve.delta),
            Relation::Gt,
            CertifiedReal::from_i64(prec, 0),
            true,
        ),
    ];
    let a_pos = Check::new("A(X) > 0", a.clone(), Relation::Gt, CertifiedReal::from_i64(prec, 0));
    if a_pos.holds == Tri::False {
        return Err(Error::Parameter(format!("A(X) = {a} violates A(X) > 0 (X = {x} too small)")));
    }
    pre.push(a_pos);
    let (w, branch) = w_factor_enclosure(&sqrt_p, &hh, r)?;
    let fe = CertifiedReal::from_rational(prec, f);
    let lhs = leading_constant(&a, &b, &fe, r)?
        .mul_ref(&hh)
        .mul_ref(&sqrt_p)
        .mul_ref(&w);
    let rhs = bh.powi(2)?;
    let tri = all_hold(&pre).and(lhs.lt(&rhs));
    Ok(Certificate {
        p_spec: p_spec.clone(),
        r,
        h: HValue::Exact(h.clone()),
        big_h: bh,
        big_h_exact: Some(big_h.clone()),
        sieve: sieve.clone(),
        lhs,
        rhs,
        verdict: Verdict::from_tri(tri),
        provenance: Provenance {
            w_branch: branch,
            w,
            x,
            a,
            b,
            sieve_factor: fe,
            precision: prec,
            preconditions: pre,
            notes: Vec::new(),
        },
    })
}

/// One monomial bound `coeff·p^exp` for a piece of `h·√p·W/H²`, valid for
/// every `p ≥ p0` once `exp ≤ 0`.
struct Monomial {
    at_p0: CertifiedReal,
    exp: Rational,
    what: &'static str,
}

/// Bounds for `h·√p·W/H²` at `p0` by monomials in `p`, one list per W branch.
fn w_monomials(
    r: u32,
    p0: &CertifiedReal,
    hb: &CertifiedReal,
    bh: &CertifiedReal,
    shape: &ThresholdShape,
) -> Result<Vec<(WBranch, Vec<Monomial>)>> {
    let prec = p0.prec();
    let sqrt_p = p0.sqrt()?;
    let h2 = bh.powi(2)?;
    let alpha2 = Rational::from(&shape.big_h_exp * 2);
    let beta = &shape.h_exp;
    let half = Rational::from((1, 2));
    let rr = CertifiedReal::from_i64(prec, r as i64);
    let two_r_over_e = rr.scale_i64(2).div(&CertifiedReal::e(prec))?;
    // √2(2r/e)^r·h^{1−r}·p/H², with h ≥ c·p^β.
    let g1 = CertifiedReal::from_i64(prec, 2)
        .sqrt()?
        .mul_ref(&two_r_over_e.powi(r as i32)?)
        .mul_ref(&hb.powi(1 - r as i32)?)
        .mul_ref(p0)
        .div(&h2)?;
    let g1_exp = Rational::from(beta * Rational::from(1 - r as i64)) + 1 - &alpha2;
    // (2r−1)·h·√p/H² with h ≤ c·p^β + 1, split into its two monomials.
    let h_term = |k: i64| -> Result<Vec<Monomial>> {
        Ok(vec![
            Monomial {
                at_p0: hb.mul_ref(&sqrt_p).div(&h2)?.scale_i64(k),
                exp: Rational::from(beta + &half) - &alpha2,
                what: "c*p^beta * sqrt(p) / H^2",
            },
            Monomial {
                at_p0: sqrt_p.div(&h2)?.scale_i64(k),
                exp: half.clone() - &alpha2,
                what: "sqrt(p) / H^2",
            },
        ])
    };
    let mut general = vec![Monomial {
        at_p0: g1,
        exp: g1_exp,
        what: "sqrt(2)(2r/e)^r h^(1-r) p / H^2",
    }];
    general.extend(h_term(2 * r as i64 - 1)?);
    let mut out = vec![(WBranch::General, general)];
    if r == 2 {
        let mut fourth = h_term(3)?;
        fourth.push(Monomial {
            at_p0: p0.scale_i64(3).div(&hb.mul_ref(&h2))?,
            exp: Rational::from(1) - beta - &alpha2,
            what: "3 p / (h H^2)",
        });
        out.push((WBranch::FourthMoment, fourth));
    }
    Ok(out)
}

fn certify_threshold(
    p_spec: &PSpec,
    p0: &Integer,
    sieve: &SieveSpec,
    f: &Rational,
    r: u32,
    shape: &ThresholdShape,
    prec: u32,
) -> Result<Certificate> {
    if *p0 < 3 {
        return Err(Error::Domain("threshold must be at least 3".into()));
    }
    let alpha = &shape.big_h_exp;
    let beta = &shape.h_exp;
    if *beta < 0 || alpha <= beta {
        return Err(Error::Parameter(format!(
            "shape exponents alpha = {alpha}, beta = {beta} violate 0 <= beta < alpha (X must grow with p)"
        )));
    }
    if shape.big_h_coeff <= 0 {
        return Err(Error::Parameter("H coefficient must be positive".into()));
    }
    let mut notes = vec![
        format!("h = {}, H = {}", shape.h_formula(), shape.big_h_formula()),
        "every factor is evaluated at p0 with h in [c*p0^beta, c*p0^beta + 1]; X, h grow with p and A(X) increases, B(X) decreases for X >= 3, so the bounds hold for all p >= p0".into(),
    ];
    let p0e = CertifiedReal::from_integer(prec, p0);
    let ch = shape.h_coeff.enclosure(prec)?;
    let hb = ch.mul_ref(&p0e.pow_rational(beta)?);
    let bh = CertifiedReal::from_rational(prec, &shape.big_h_coeff).mul_ref(&p0e.pow_rational(alpha)?);
    let x_lo = bh.div(&hb.add_i64(1))?;
    let mut pre = vec![
        Check::new("c*p0^beta > 1 (so h >= 2)", hb.clone(), Relation::Gt, CertifiedReal::from_i64(prec, 1)),
        Check::new("X >= 3 at p0 (H >= 2h; B decreasing)", x_lo.clone(), Relation::Ge, CertifiedReal::from_i64(prec, 3)),
        Check::exact(
            "delta > 0",
            CertifiedReal::from_rational(prec, &sieve.delta),
            Relation::Gt,
            CertifiedReal::from_i64(prec, 0),
            sieve.delta > 0,
        ),
    ];
    // 2H² < hp: compare exponents, then coefficients.
    let two_alpha = Rational::from(alpha * 2);
    let beta1 = Rational::from(beta + 1);
    let two_ch2 = CertifiedReal::from_rational(prec, &(Rational::from(shape.big_h_coeff.square_ref()) * Rational::from(2)));
    if two_alpha > beta1 {
        return Err(Error::Parameter(format!("2*alpha = {two_alpha} > beta + 1 = {beta1}: 2H^2 < hp fails for large p")));
    } else if two_alpha < beta1 {
        pre.push(Check::new(
            "2H^2 < hp at p0 (ratio decreasing in p)",
            bh.powi(2)?.scale_i64(2),
            Relation::Lt,
            hb.mul_ref(&p0e),
            ));
    } else {
        match &shape.h_coeff {
            HCoefficient::Rational { value } if !beta.denom().eq(&1) => {
                let c2 = Rational::from(shape.big_h_coeff.square_ref()) * Rational::from(2);
                notes.push("2H^2 < hp: c*p^beta is irrational for prime p and non-integral beta, so h > c*p^beta strictly".into());
                pre.push(Check::exact(
                    "2 c_H^2 <= c_h (equal exponents)",
                    two_ch2.clone(),
                    Relation::Le,
                    CertifiedReal::from_rational(prec, value),
                    c2 <= *value,
                ));
            }
            _ => pre.push(Check::new("2 c_H^2 < c_h (equal exponents)", two_ch2.clone(), Relation::Lt, ch.clone())),
        }
    }
    for c in &pre {
        if c.holds == Tri::False {
            return Err(Error::Parameter(format!("{} fails: {} {} {}", c.name, c.lhs, c.relation, c.rhs)));
        }
    }
    let (a, b) = envelopes_enclosure(&x_lo, &hb)?;
    let a_pos = Check::new("A(X) > 0", a.clone(), Relation::Gt, CertifiedReal::from_i64(prec, 0));
    if a_pos.holds == Tri::False {
        return Err(Error::Parameter(format!("A(X) = {a} violates A(X) > 0")));
    }
    pre.push(a_pos);

    let mut best: Option<(WBranch, CertifiedReal)> = None;
    for (branch, monos) in w_monomials(r, &p0e, &hb, &bh, shape)? {
        if let Some(m) = monos.iter().find(|m| m.exp > 0) {
            notes.push(format!("{branch:?} W branch skipped: term {} grows like p^{}", m.what, m.exp));
            continue;
        }
        let sum = monos
            .iter()
            .fold(CertifiedReal::from_i64(prec, 0), |acc, m| acc.add_ref(&m.at_p0));
        if best.as_ref().is_none_or(|(_, s)| sum.hi() < s.hi()) {
            best = Some((branch, sum));
        }
    }
    let Some((branch, ratio_w)) = best else {
        return Err(Error::Parameter("no W branch gives a bound nonincreasing in p for this shape".into()));
    };
    let fe = CertifiedReal::from_rational(prec, f);
    let rhs = bh.powi(2)?;
    let lhs = leading_constant(&a, &b, &fe, r)?.mul_ref(&ratio_w).mul_ref(&rhs);
    let tri = all_hold(&pre).and(lhs.lt(&rhs));
    Ok(Certificate {
        p_spec: p_spec.clone(),
        r,
        h: HValue::Shape {
            formula: shape.h_formula(),
            at_p0: hb,
        },
        big_h: bh,
        big_h_exact: None,
        sieve: sieve.clone(),
        lhs,
        rhs,
        verdict: Verdict::from_tri(tri),
        provenance: Provenance {
            w_branch: branch,
            w: ratio_w,
            x: x_lo,
            a,
            b,
            sieve_factor: fe,
            precision: prec,
            preconditions: pre,
            notes,
        },
    })
}
