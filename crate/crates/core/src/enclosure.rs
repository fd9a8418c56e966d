//! Outward-rounded real enclosures on MPFR.
//!
//! A [`CertifiedReal`] is a pair `[lo, hi]` of binary floats where every
//! operation rounds `lo` toward −∞ and `hi` toward +∞, so the exact value of
//! the expression always lies inside. Comparisons answer with [`Tri`]: a
//! definite verdict when the enclosures are separated, `Unknown` otherwise.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::{Constant, Round};
use rug::ops::PowAssignRound;
use rug::{Float, Integer, Rational};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 128;
pub const MAX_PRECISION: u32 = 1024;
pub const MIN_PRECISION: u32 = 64;
pub const MAX_USER_PRECISION: u32 = 4096;

/// Digits written to JSON for each endpoint.
const JSON_DIGITS: usize = 20;

/// Three-valued comparison outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    True,
    False,
    Unknown,
}

impl Tri {
    pub fn is_true(self) -> bool {
        self == Tri::True
    }

    pub fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::False, _) | (_, Tri::False) => Tri::False,
            (Tri::True, Tri::True) => Tri::True,
            _ => Tri::Unknown,
        }
    }

    pub fn not(self) -> Tri {
        match self {
            Tri::True => Tri::False,
            Tri::False => Tri::True,
            Tri::Unknown => Tri::Unknown,
        }
    }

    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tri::True => "true",
            Tri::False => "false",
            Tri::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CertifiedReal {
    lo: Float,
    hi: Float,
}

fn down<T>(prec: u32, v: T) -> Float
where
    Float: rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, v, Round::Down).0
}

fn up<T>(prec: u32, v: T) -> Float
where
    Float: rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, v, Round::Up).0
}

fn widen(x: &Float, prec: u32) -> Float {
    // exact whenever prec >= x.prec()
    Float::with_val(prec.max(x.prec()), x)
}

fn min_f(a: Float, b: Float) -> Float {
    if a < b {
        a
    } else {
        b
    }
}

fn max_f(a: Float, b: Float) -> Float {
    if a > b {
        a
    } else {
        b
    }
}

impl CertifiedReal {
    fn from_parts(lo: Float, hi: Float) -> Self {
        debug_assert!(lo <= hi, "inverted enclosure");
        Self { lo, hi }
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    fn joint_prec(&self, other: &Self) -> u32 {
        self.prec().max(other.prec())
    }

    pub fn from_integer(prec: u32, n: &Integer) -> Self {
        Self::from_parts(down(prec, n), up(prec, n))
    }

    pub fn from_rational(prec: u32, q: &Rational) -> Self {
        Self::from_parts(down(prec, q), up(prec, q))
    }

    pub fn from_i64(prec: u32, n: i64) -> Self {
        Self::from_integer(prec, &Integer::from(n))
    }

    pub fn from_u128(prec: u32, n: u128) -> Self {
        Self::from_integer(prec, &Integer::from(n))
    }

    /// `num/den` as an enclosure.
    pub fn from_ratio(prec: u32, num: i64, den: i64) -> Self {
        Self::from_rational(prec, &Rational::from((num, den)))
    }

    /// Exact conversion; panics on non-finite input.
    pub fn from_f64(prec: u32, x: f64) -> Self {
        assert!(x.is_finite(), "non-finite literal");
        let p = prec.max(53);
        Self::from_parts(Float::with_val(p, x), Float::with_val(p, x))
    }

    /// Hull of two decimal bounds, e.g. a published constant with its
    /// rounding radius.
    pub fn from_bounds(lo: Self, hi: Self) -> Self {
        Self::from_parts(lo.lo, hi.hi)
    }

    pub fn pi(prec: u32) -> Self {
        Self::from_parts(down(prec, Constant::Pi), up(prec, Constant::Pi))
    }

    pub fn ln2(prec: u32) -> Self {
        Self::from_parts(down(prec, Constant::Log2), up(prec, Constant::Log2))
    }

    /// Euler's number.
    pub fn e(prec: u32) -> Self {
        Self::from_i64(prec, 1).exp()
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64_round(Round::Down)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64_round(Round::Up)
    }

    pub fn mid_f64(&self) -> f64 {
        let mid = Float::with_val(self.prec() + 1, &self.lo + &self.hi) / 2u32;
        mid.to_f64()
    }

    pub fn width(&self) -> Float {
        up(self.prec(), &self.hi - &self.lo)
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        self.lo <= *q && self.hi >= *q
    }

    pub fn is_nonnegative(&self) -> Tri {
        self.ge(&Self::from_i64(self.prec(), 0))
    }

    pub fn is_positive(&self) -> Tri {
        self.gt(&Self::from_i64(self.prec(), 0))
    }

    /// Same enclosure carried at a higher working precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        Self::from_parts(widen(&self.lo, prec), widen(&self.hi, prec))
    }

    pub fn lt(&self, other: &Self) -> Tri {
        if self.hi < other.lo {
            Tri::True
        } else if self.lo >= other.hi {
            Tri::False
        } else {
            Tri::Unknown
        }
    }

    pub fn le(&self, other: &Self) -> Tri {
        if self.hi <= other.lo {
            Tri::True
        } else if self.lo > other.hi {
            Tri::False
        } else {
            Tri::Unknown
        }
    }

    pub fn gt(&self, other: &Self) -> Tri {
        other.lt(self)
    }

    pub fn ge(&self, other: &Self) -> Tri {
        other.le(self)
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        let p = self.joint_prec(other);
        Self::from_parts(down(p, &self.lo + &other.lo), up(p, &self.hi + &other.hi))
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        let p = self.joint_prec(other);
        Self::from_parts(down(p, &self.lo - &other.hi), up(p, &self.hi - &other.lo))
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        let p = self.joint_prec(other);
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            let d = down(p, a * b);
            let u = up(p, a * b);
            lo = Some(match lo {
                None => d,
                Some(l) => min_f(l, d),
            });
            hi = Some(match hi {
                None => u,
                Some(h) => max_f(h, u),
            });
        }
        Self::from_parts(lo.unwrap(), hi.unwrap())
    }

    /// Division; the divisor enclosure must exclude zero.
    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.lo <= 0 && other.hi >= 0 {
            return Err(Error::Domain("division by an enclosure containing 0".into()));
        }
        let p = self.joint_prec(other);
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            let d = down(p, a / b);
            let u = up(p, a / b);
            lo = Some(match lo {
                None => d,
                Some(l) => min_f(l, d),
            });
            hi = Some(match hi {
                None => u,
                Some(h) => max_f(h, u),
            });
        }
        Ok(Self::from_parts(lo.unwrap(), hi.unwrap()))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::from_i64(self.prec(), 1).div(self)
    }

    pub fn neg_ref(&self) -> Self {
        Self::from_parts(Float::with_val(self.prec(), -&self.hi), Float::with_val(self.prec(), -&self.lo))
    }

    pub fn abs(&self) -> Self {
        let p = self.prec();
        if self.lo >= 0 {
            self.clone()
        } else if self.hi <= 0 {
            self.neg_ref()
        } else {
            let m = max_f(Float::with_val(p, -&self.lo), self.hi.clone());
            Self::from_parts(Float::with_val(p, 0), m)
        }
    }

    pub fn min(&self, other: &Self) -> Self {
        Self::from_parts(min_f(self.lo.clone(), other.lo.clone()), min_f(self.hi.clone(), other.hi.clone()))
    }

    pub fn max(&self, other: &Self) -> Self {
        Self::from_parts(max_f(self.lo.clone(), other.lo.clone()), max_f(self.hi.clone(), other.hi.clone()))
    }

    /// Smallest enclosure containing both.
    pub fn hull(&self, other: &Self) -> Self {
        Self::from_parts(min_f(self.lo.clone(), other.lo.clone()), max_f(self.hi.clone(), other.hi.clone()))
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.hi < 0 {
            return Err(Error::Domain("square root of a negative enclosure".into()));
        }
        let p = self.prec();
        let lo = if self.lo < 0 {
            Float::with_val(p, 0)
        } else {
            down(p, self.lo.sqrt_ref())
        };
        Ok(Self::from_parts(lo, up(p, self.hi.sqrt_ref())))
    }

    pub fn ln(&self) -> Result<Self> {
        if self.lo <= 0 {
            return Err(Error::Domain("logarithm of an enclosure reaching 0".into()));
        }
        let p = self.prec();
        Ok(Self::from_parts(down(p, self.lo.ln_ref()), up(p, self.hi.ln_ref())))
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        Self::from_parts(down(p, self.lo.exp_ref()), up(p, self.hi.exp_ref()))
    }

    fn pow_u(x: &Float, n: u32, prec: u32, round: Round) -> Float {
        let mut y = widen(x, prec);
        y.pow_assign_round(n, round);
        y
    }

    /// Integer power.
    pub fn powi(&self, n: i32) -> Result<Self> {
        if n < 0 {
            return self.powi(-n)?.recip();
        }
        let n = n as u32;
        let p = self.prec();
        if n == 0 {
            return Ok(Self::from_i64(p, 1));
        }
        let r = if self.lo >= 0 {
            Self::from_parts(Self::pow_u(&self.lo, n, p, Round::Down), Self::pow_u(&self.hi, n, p, Round::Up))
        } else if n % 2 == 1 {
            Self::from_parts(Self::pow_u(&self.lo, n, p, Round::Down), Self::pow_u(&self.hi, n, p, Round::Up))
        } else if self.hi <= 0 {
            let a = self.neg_ref();
            Self::from_parts(Self::pow_u(&a.lo, n, p, Round::Down), Self::pow_u(&a.hi, n, p, Round::Up))
        } else {
            let a = self.abs();
            Self::from_parts(Float::with_val(p, 0), Self::pow_u(&a.hi, n, p, Round::Up))
        };
        Ok(r)
    }

    /// `self^y = exp(y ln self)` for a positive base.
    pub fn pow(&self, y: &Self) -> Result<Self> {
        Ok(y.mul_ref(&self.ln()?).exp())
    }

    pub fn pow_rational(&self, y: &Rational) -> Result<Self> {
        let yy = Self::from_rational(self.prec(), y);
        self.pow(&yy)
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        self.mul_ref(&Self::from_i64(self.prec(), k))
    }

    pub fn add_i64(&self, k: i64) -> Self {
        self.add_ref(&Self::from_i64(self.prec(), k))
    }

    /// `⌈x⌉` when both endpoints agree on it.
    pub fn ceil_exact(&self) -> Option<Integer> {
        let a = self.lo.to_integer_round(Round::Up)?.0;
        let b = self.hi.to_integer_round(Round::Up)?.0;
        (a == b).then_some(a)
    }

    /// `⌊x⌋` when both endpoints agree on it.
    pub fn floor_exact(&self) -> Option<Integer> {
        let a = self.lo.to_integer_round(Round::Down)?.0;
        let b = self.hi.to_integer_round(Round::Down)?.0;
        (a == b).then_some(a)
    }

    /// Integer enclosure `[⌊lo⌋, ⌈hi⌉]`.
    pub fn integer_hull(&self) -> (Integer, Integer) {
        (
            self.lo.to_integer_round(Round::Down).expect("finite").0,
            self.hi.to_integer_round(Round::Up).expect("finite").0,
        )
    }

    pub fn lo_string(&self, digits: usize) -> String {
        self.lo.to_string_radix_round(10, Some(digits), Round::Down)
    }

    pub fn hi_string(&self, digits: usize) -> String {
        self.hi.to_string_radix_round(10, Some(digits), Round::Up)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&CertifiedReal> for &CertifiedReal {
            type Output = CertifiedReal;
            fn $m(self, rhs: &CertifiedReal) -> CertifiedReal {
                self.$f(rhs)
            }
        }
        impl $tr<CertifiedReal> for CertifiedReal {
            type Output = CertifiedReal;
            fn $m(self, rhs: CertifiedReal) -> CertifiedReal {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&CertifiedReal> for CertifiedReal {
            type Output = CertifiedReal;
            fn $m(self, rhs: &CertifiedReal) -> CertifiedReal {
                (&self).$f(rhs)
            }
        }
    };
}

binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);

impl Neg for &CertifiedReal {
    type Output = CertifiedReal;
    fn neg(self) -> CertifiedReal {
        self.neg_ref()
    }
}

impl Neg for CertifiedReal {
    type Output = CertifiedReal;
    fn neg(self) -> CertifiedReal {
        self.neg_ref()
    }
}

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or(12);
        write!(f, "[{}, {}]", self.lo_string(d), self.hi_string(d))
    }
}

impl Serialize for CertifiedReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CertifiedReal", 2)?;
        st.serialize_field("lo", &self.lo_string(JSON_DIGITS))?;
        st.serialize_field("hi", &self.hi_string(JSON_DIGITS))?;
        st.end()
    }
}

/// Runs `f` at increasing precision (doubling from `start`, capped at
/// [`MAX_PRECISION`]) until it returns a definite verdict.
pub fn escalate<T>(start: u32, mut f: impl FnMut(u32) -> Result<(Tri, T)>) -> Result<(Tri, T, u32)> {
    let mut prec = start.max(MIN_PRECISION);
    loop {
        let (v, t) = f(prec)?;
        if v != Tri::Unknown || prec >= MAX_PRECISION.max(start) {
            return Ok((v, t, prec));
        }
        prec = (prec * 2).min(MAX_PRECISION.max(start));
    }
}

/// Precision from the `PRIMROOT_PRECISION` environment variable, falling back
/// to [`DEFAULT_PRECISION`].
pub fn env_precision() -> u32 {
    std::env::var("PRIMROOT_PRECISION")
        .ok()
        .and_then(|s| s.parse::<u32>().ok())
        .filter(|p| (MIN_PRECISION..=MAX_USER_PRECISION).contains(p))
        .unwrap_or(DEFAULT_PRECISION)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P: u32 = DEFAULT_PRECISION;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn constants_enclose_reference_digits() {
        let pi = CertifiedReal::pi(P);
        assert!(pi.lo_f64() <= std::f64::consts::PI && std::f64::consts::PI <= pi.hi_f64());
        let e = CertifiedReal::e(P);
        assert!(e.lo_f64() <= std::f64::consts::E && std::f64::consts::E <= e.hi_f64());
        assert!(pi.width() < 1e-35);
    }

    #[test]
    fn one_third_is_not_a_point() {
        let x = CertifiedReal::from_rational(P, &q(1, 3));
        assert!(x.lo() < x.hi());
        assert!(x.contains_rational(&q(1, 3)));
        let three = CertifiedReal::from_i64(P, 3);
        let one = x.mul_ref(&three);
        assert!(one.contains_rational(&q(1, 1)));
    }

    #[test]
    fn comparisons_are_three_valued() {
        let a = CertifiedReal::from_i64(P, 1);
        let b = CertifiedReal::from_i64(P, 2);
        assert_eq!(a.lt(&b), Tri::True);
        assert_eq!(b.lt(&a), Tri::False);
        assert_eq!(a.lt(&a), Tri::False);
        assert_eq!(a.le(&a), Tri::True);
        let t = CertifiedReal::from_rational(P, &q(1, 3));
        assert_eq!(t.lt(&t), Tri::Unknown);
    }

    #[test]
    fn division_by_zero_enclosure_is_an_error() {
        let z = CertifiedReal::from_i64(P, 1).sub_ref(&CertifiedReal::from_i64(P, 1));
        assert!(CertifiedReal::from_i64(P, 1).div(&z).is_err());
    }

    #[test]
    fn powers_and_logs() {
        let two = CertifiedReal::from_i64(P, 2);
        assert!(two.powi(10).unwrap().contains_rational(&q(1024, 1)));
        assert!(two.powi(-2).unwrap().contains_rational(&q(1, 4)));
        let m = CertifiedReal::from_i64(P, -3);
        assert!(m.powi(2).unwrap().contains_rational(&q(9, 1)));
        assert!(m.powi(3).unwrap().contains_rational(&q(-27, 1)));
        let s = CertifiedReal::from_i64(P, 16).pow_rational(&q(1, 4)).unwrap();
        assert!(s.contains_rational(&q(2, 1)));
        let l = CertifiedReal::from_i64(P, 8).ln().unwrap();
        let l2 = CertifiedReal::ln2(P).scale_i64(3);
        assert_eq!(l.lt(&l2), Tri::Unknown);
        assert!(CertifiedReal::from_i64(P, 0).ln().is_err());
    }

    #[test]
    fn straddling_even_power_includes_zero() {
        let x = CertifiedReal::from_i64(P, -1).hull(&CertifiedReal::from_i64(P, 2));
        let y = x.powi(2).unwrap();
        assert!(y.contains_rational(&q(0, 1)));
        assert!(y.contains_rational(&q(4, 1)));
    }

    #[test]
    fn ceil_and_floor() {
        let x = CertifiedReal::from_rational(P, &q(7, 3));
        assert_eq!(x.ceil_exact(), Some(Integer::from(3)));
        assert_eq!(x.floor_exact(), Some(Integer::from(2)));
    }

    #[test]
    fn escalation_stops_at_a_definite_answer() {
        // 10^40 + 1 vs 10^40: indistinguishable at 64 bits, separated at 256
        let a = Integer::from(Integer::u_pow_u(10, 40)) + 1u32;
        let b = Integer::from(Integer::u_pow_u(10, 40));
        let (v, _, prec) = escalate(64, |prec| {
            let x = CertifiedReal::from_integer(prec, &a);
            let y = CertifiedReal::from_integer(prec, &b);
            Ok((y.lt(&x), ()))
        })
        .unwrap();
        assert_eq!(v, Tri::True);
        assert!(prec > 64);
    }

    #[test]
    fn json_uses_decimal_strings() {
        let x = CertifiedReal::from_rational(P, &q(1, 3));
        let v = serde_json::to_value(&x).unwrap();
        assert!(v["lo"].as_str().unwrap().starts_with("3.33333"));
        assert!(v["hi"].as_str().unwrap().starts_with("3.33333"));
    }

    #[derive(Clone, Debug)]
    enum Expr {
        Lit(i64, i64),
        Add(Box<Expr>, Box<Expr>),
        Sub(Box<Expr>, Box<Expr>),
        Mul(Box<Expr>, Box<Expr>),
        Div(Box<Expr>, Box<Expr>),
        Sq(Box<Expr>),
    }

    fn expr() -> impl Strategy<Value = Expr> {
        let leaf = (-1000i64..1000, 1i64..1000).prop_map(|(n, d)| Expr::Lit(n, d));
        leaf.prop_recursive(5, 32, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
                inner.prop_map(|a| Expr::Sq(Box::new(a))),
            ]
        })
    }

    fn eval(e: &Expr) -> Option<(Rational, CertifiedReal)> {
        Some(match e {
            Expr::Lit(n, d) => (q(*n, *d), CertifiedReal::from_rational(64, &q(*n, *d))),
            Expr::Add(a, b) => {
                let (x, xe) = eval(a)?;
                let (y, ye) = eval(b)?;
                (x + y, xe + ye)
            }
            Expr::Sub(a, b) => {
                let (x, xe) = eval(a)?;
                let (y, ye) = eval(b)?;
                (x - y, xe - ye)
            }
            Expr::Mul(a, b) => {
                let (x, xe) = eval(a)?;
                let (y, ye) = eval(b)?;
                (x * y, xe * ye)
            }
            Expr::Div(a, b) => {
                let (x, xe) = eval(a)?;
                let (y, ye) = eval(b)?;
                if y == 0 {
                    return None;
                }
                let z = xe.div(&ye).ok()?;
                (x / y, z)
            }
            Expr::Sq(a) => {
                let (x, xe) = eval(a)?;
                (Rational::from(&x * &x), xe.powi(2).unwrap())
            }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn rational_expression_trees_are_enclosed(e in expr()) {
            if let Some((exact, enc)) = eval(&e) {
                prop_assert!(enc.contains_rational(&exact), "{exact} not in {enc}");
            }
        }
    }
}
