//! Exact integer number theory: primality, factorization, multiplicative
//! functions, primitive roots and the brute-force `g(p)` oracle.
//!
//! Everything here works on machine integers (`u64` for the enumerable
//! regime, `u128` for primality and factorization) and on GMP integers where a
//! product can outgrow 128 bits.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Miller–Rabin with the first 13 prime bases is exact below this bound
/// (Sorenson–Webster).
pub const MR_DETERMINISTIC_BOUND: u128 = 3_317_044_064_679_887_385_961_981;

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Default cap on `p` for building a discrete-log table.
pub const DEFAULT_DLOG_CAP: u64 = 10_000_000;

const TRIAL_LIMIT: u64 = 4096;
const RHO_ITERATIONS: u64 = 1 << 26;

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn strong_probable_prime_u64(n: u64, a: u64) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let d_shift = (n - 1).trailing_zeros();
    let d = (n - 1) >> d_shift;
    let mut x = powmod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..d_shift {
        x = mulmod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

fn strong_probable_prime_big(n: &Integer, a: u64) -> bool {
    let nm1 = Integer::from(n - 1u32);
    let s = nm1.find_one(0).unwrap_or(0);
    let d = Integer::from(&nm1 >> s);
    let a = Integer::from(a) % n;
    if a == 0 {
        return true;
    }
    let mut x = a.pow_mod(&d, n).expect("positive exponent");
    if x == 1 || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = x.pow_mod(&Integer::from(2), n).expect("positive exponent");
        if x == nm1 {
            return true;
        }
    }
    false
}

fn to_integer(n: u128) -> Integer {
    Integer::from(n)
}

fn integer_to_u128(n: &Integer) -> u128 {
    n.to_u128().expect("value fits in 128 bits")
}

/// Deterministic primality test on the full `u128` range.
///
/// Below [`MR_DETERMINISTIC_BOUND`] this is Miller–Rabin with a proven
/// witness set. Above it the number must pass the same strong-pseudoprime
/// screen and then carry a Pocklington proof built from a partial
/// factorization of `n - 1`; if no proof is found within the rho budget the
/// result is an [`Error::UnsupportedRange`] rather than a guess.
pub fn is_prime(n: u128) -> Result<bool> {
    if n < 2 {
        return Ok(false);
    }
    for &q in &MR_BASES {
        let q = q as u128;
        if n == q {
            return Ok(true);
        }
        if n % q == 0 {
            return Ok(false);
        }
    }
    if n < 43 * 43 {
        return Ok(true);
    }
    if n <= u64::MAX as u128 {
        let n = n as u64;
        return Ok(MR_BASES.iter().all(|&a| strong_probable_prime_u64(n, a)));
    }
    let big = to_integer(n);
    if !MR_BASES.iter().all(|&a| strong_probable_prime_big(&big, a)) {
        return Ok(false);
    }
    if n < MR_DETERMINISTIC_BOUND {
        return Ok(true);
    }
    pocklington(n)
}

/// Pocklington–Lehmer: with `n - 1 = F·R`, `F` fully factored and `F² > n`,
/// `n` is prime if every prime `q | F` has a witness `a` with
/// `a^(n-1) ≡ 1` and `gcd(a^((n-1)/q) - 1, n) = 1`.
fn pocklington(n: u128) -> Result<bool> {
    let nm1 = n - 1;
    let mut rest = nm1;
    let mut proven: Vec<u128> = Vec::new();
    let mut factored: u128 = 1;
    let enough = |f: u128| f.checked_mul(f).map_or(true, |sq| sq > n);

    let mut q = 2u128;
    while q < TRIAL_LIMIT as u128 && !enough(factored) {
        if rest % q == 0 {
            proven.push(q);
            while rest % q == 0 {
                rest /= q;
                factored *= q;
            }
        }
        q += 1;
    }
    let mut pending = vec![rest];
    while !enough(factored) {
        let Some(m) = pending.pop() else { break };
        if m == 1 {
            continue;
        }
        if is_prime(m)? {
            proven.push(m);
            while rest % m == 0 {
                rest /= m;
                factored *= m;
            }
            continue;
        }
        let d = find_factor(m).ok_or_else(|| {
            Error::UnsupportedRange(format!("primality of {n} not provable within rho budget"))
        })?;
        pending.push(d);
        pending.push(m / d);
    }
    if !enough(factored) {
        return Err(Error::UnsupportedRange(format!(
            "primality of {n} not provable within rho budget"
        )));
    }
    let big = to_integer(n);
    let big_nm1 = to_integer(nm1);
    for &q in &proven {
        let mut witnessed = false;
        for a in 2u32..200 {
            let a = Integer::from(a);
            if a.clone().pow_mod(&big_nm1, &big).expect("pow") != 1 {
                return Ok(false);
            }
            let e = Integer::from(&big_nm1 / to_integer(q));
            let t = a.pow_mod(&e, &big).expect("pow") - 1u32;
            if t.gcd(&big) == 1 {
                witnessed = true;
                break;
            }
        }
        if !witnessed {
            return Err(Error::UnsupportedRange(format!(
                "no Pocklington witness for {n} at prime {q}"
            )));
        }
    }
    Ok(true)
}

fn rho_u64(n: u64, c: u64) -> Option<u64> {
    // Brent's cycle detection with batched gcds.
    let f = |x: u64| (mulmod(x, x, n) + c) % n;
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut x = y;
    let mut ys = y;
    let mut g = 1u64;
    let m = 128u64;
    let mut iters = 0u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                q = mulmod(q, x.abs_diff(y), n);
            }
            g = gcd_u64(q, n);
            k += m;
        }
        r <<= 1;
        iters += r;
        if iters > RHO_ITERATIONS {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn rho_big(n: &Integer, c: u32) -> Option<Integer> {
    let f = |x: &Integer| -> Integer { (Integer::from(x * x) + c) % n };
    let mut x = Integer::from(2);
    let mut y = Integer::from(2);
    let mut iters = 0u64;
    loop {
        x = f(&x);
        y = f(&f(&y));
        let d = Integer::from(&x - &y).abs().gcd(n);
        if d == *n {
            return None;
        }
        if d != 1 {
            return Some(d);
        }
        iters += 1;
        if iters > RHO_ITERATIONS >> 6 {
            return None;
        }
    }
}

/// A nontrivial factor of the composite `n`, or `None` when the rho budget
/// runs out.
fn find_factor(n: u128) -> Option<u128> {
    if n % 2 == 0 {
        return Some(2);
    }
    if n <= u64::MAX as u128 {
        let n64 = n as u64;
        return (1..16).find_map(|c| rho_u64(n64, c)).map(u128::from);
    }
    let big = to_integer(n);
    (1..8).find_map(|c| rho_big(&big, c)).map(|d| integer_to_u128(&d))
}

/// Prime factorization, as `(prime, exponent)` pairs ascending by prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<(u128, u32)>", try_from = "Vec<(u128, u32)>")]
pub struct Factorization {
    entries: Vec<(u128, u32)>,
}

impl Factorization {
    /// Validates a user-supplied factorization: primes strictly increasing,
    /// each one proven prime, exponents positive.
    pub fn from_entries(entries: Vec<(u128, u32)>) -> Result<Self> {
        for w in entries.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::Domain("factorization primes must be strictly increasing".into()));
            }
        }
        for &(q, e) in &entries {
            if e == 0 {
                return Err(Error::Domain(format!("zero exponent for prime {q}")));
            }
            if !is_prime(q)? {
                return Err(Error::Domain(format!("{q} is not prime")));
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(u128, u32)] {
        &self.entries
    }

    pub fn primes(&self) -> impl Iterator<Item = u128> + '_ {
        self.entries.iter().map(|&(q, _)| q)
    }

    /// Number of distinct primes.
    pub fn omega(&self) -> usize {
        self.entries.len()
    }

    pub fn contains_prime(&self, q: u128) -> bool {
        self.entries.binary_search_by_key(&q, |&(p, _)| p).is_ok()
    }

    pub fn exponent_of(&self, q: u128) -> u32 {
        self.entries
            .binary_search_by_key(&q, |&(p, _)| p)
            .map(|i| self.entries[i].1)
            .unwrap_or(0)
    }

    /// The factored integer as a GMP integer.
    pub fn value(&self) -> Integer {
        self.entries
            .iter()
            .fold(Integer::from(1), |acc, &(q, e)| acc * Integer::from(to_integer(q).pow(e)))
    }

    /// The factored integer, when it fits in 128 bits.
    pub fn value_u128(&self) -> Option<u128> {
        self.value().to_u128()
    }

    /// All positive divisors, ascending. Only sensible for `u128` values.
    pub fn divisors(&self) -> Vec<u128> {
        let mut divs = vec![1u128];
        for &(q, e) in &self.entries {
            let len = divs.len();
            let mut pk = 1u128;
            for _ in 0..e {
                pk *= q;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    /// Squarefree divisors, ascending.
    pub fn squarefree_divisors(&self) -> Vec<u128> {
        let mut divs = vec![1u128];
        for &(q, _) in &self.entries {
            let len = divs.len();
            for i in 0..len {
                divs.push(divs[i] * q);
            }
        }
        divs.sort_unstable();
        divs
    }

    pub fn euler_phi(&self) -> Integer {
        self.entries.iter().fold(Integer::from(1), |acc, &(q, e)| {
            acc * (to_integer(q) - 1u32) * Integer::from(to_integer(q).pow(e - 1))
        })
    }

    pub fn moebius(&self) -> i8 {
        if self.entries.iter().any(|&(_, e)| e > 1) {
            0
        } else if self.entries.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// `θ(n) = φ(n)/n = Π (1 - 1/q)`.
    pub fn theta(&self) -> Rational {
        self.entries.iter().fold(Rational::from(1), |acc, &(q, _)| {
            acc * Rational::from((to_integer(q) - 1u32, to_integer(q)))
        })
    }
}

impl From<Factorization> for Vec<(u128, u32)> {
    fn from(f: Factorization) -> Self {
        f.entries
    }
}

impl TryFrom<Vec<(u128, u32)>> for Factorization {
    type Error = Error;
    fn try_from(v: Vec<(u128, u32)>) -> Result<Self> {
        Factorization::from_entries(v)
    }
}

/// Complete prime factorization of `n ≥ 1`.
///
/// Trial division clears small primes; Pollard rho (Brent) splits what is
/// left. The rho budget is sized for `n` up to about `10^18`; larger
/// cofactors with two big prime factors may return
/// [`Error::BudgetExceeded`].
pub fn factorize(n: u128) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Domain("cannot factor 0".into()));
    }
    let mut primes: Vec<u128> = Vec::new();
    let mut m = n;
    let mut q = 2u128;
    while q < TRIAL_LIMIT as u128 && q * q <= m {
        while m % q == 0 {
            primes.push(q);
            m /= q;
        }
        q += if q == 2 { 1 } else { 2 };
    }
    let mut stack = vec![m];
    while let Some(c) = stack.pop() {
        if c == 1 {
            continue;
        }
        if is_prime(c)? {
            primes.push(c);
            continue;
        }
        // perfect squares defeat rho with x^2 + c on occasion; peel them first
        let r = Integer::from(c).sqrt();
        let r128 = integer_to_u128(&r);
        if r128 * r128 == c {
            stack.push(r128);
            stack.push(r128);
            continue;
        }
        let d = find_factor(c)
            .ok_or_else(|| Error::BudgetExceeded(format!("could not split {c} within rho budget")))?;
        stack.push(d);
        stack.push(c / d);
    }
    primes.sort_unstable();
    let mut entries: Vec<(u128, u32)> = Vec::new();
    for q in primes {
        match entries.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => entries.push((q, 1)),
        }
    }
    Ok(Factorization { entries })
}

pub fn euler_phi(n: u128) -> Result<u128> {
    let f = factorize(n)?;
    Ok(integer_to_u128(&f.euler_phi()))
}

pub fn moebius(n: u128) -> Result<i8> {
    Ok(factorize(n)?.moebius())
}

/// `θ(n) = φ(n)/n` as an exact rational.
pub fn theta(n: u128) -> Result<Rational> {
    Ok(factorize(n)?.theta())
}

/// Multiplicative order of `a` modulo the prime `p`.
pub fn multiplicative_order(a: u64, p: u64) -> Result<u64> {
    if !is_prime(p as u128)? {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if a % p == 0 {
        return Err(Error::Domain(format!("{a} ≡ 0 (mod {p}) has no order")));
    }
    let pm1 = factorize((p - 1) as u128)?;
    Ok(order_mod_prime(a, p, &pm1))
}

/// Order by divisor descent over the known factorization of `p - 1`.
pub(crate) fn order_mod_prime(a: u64, p: u64, pm1: &Factorization) -> u64 {
    let mut k = p - 1;
    for &(q, e) in pm1.entries() {
        let q = q as u64;
        for _ in 0..e {
            if k % q == 0 && powmod(a, k / q, p) == 1 {
                k /= q;
            } else {
                break;
            }
        }
    }
    k
}

fn is_generator(g: u64, p: u64, pm1_primes: &[u64]) -> bool {
    g % p != 0 && pm1_primes.iter().all(|&q| powmod(g, (p - 1) / q, p) != 1)
}

/// Work caps for the brute-force least-primitive-root search.
#[derive(Clone, Copy, Debug)]
pub struct RootBudget {
    /// Largest candidate tried; `None` means every residue below `p`.
    pub max_candidate: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Default for RootBudget {
    fn default() -> Self {
        Self {
            max_candidate: None,
            max_time: Some(Duration::from_secs(30)),
        }
    }
}

/// `g(p)`: the least `g ≥ 2` whose order modulo `p` is `p - 1`.
pub fn least_primitive_root(p: u64) -> Result<u64> {
    least_primitive_root_with(p, &RootBudget::default())
}

pub fn least_primitive_root_with(p: u64, budget: &RootBudget) -> Result<u64> {
    if p < 3 || p % 2 == 0 || !is_prime(p as u128)? {
        return Err(Error::Domain(format!("{p} is not an odd prime")));
    }
    let pm1 = factorize((p - 1) as u128)?;
    let primes: Vec<u64> = pm1.primes().map(|q| q as u64).collect();
    search_generator(p, &primes, budget)
}

fn search_generator(p: u64, pm1_primes: &[u64], budget: &RootBudget) -> Result<u64> {
    let start = Instant::now();
    let last = budget.max_candidate.unwrap_or(p - 1).min(p - 1);
    for g in 2..=last {
        if is_generator(g, p, pm1_primes) {
            return Ok(g);
        }
        if g % 1024 == 0 {
            if let Some(t) = budget.max_time {
                if start.elapsed() > t {
                    return Err(Error::BudgetExceeded(format!(
                        "g({p}) search passed {g} after {:?}",
                        start.elapsed()
                    )));
                }
            }
        }
    }
    if p == 3 && last >= 2 {
        return Ok(2);
    }
    Err(Error::BudgetExceeded(format!("no primitive root of {p} up to {last}")))
}

/// All primes `≤ limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// The first `k` primes.
pub fn first_primes(k: usize) -> Vec<u64> {
    if k == 0 {
        return Vec::new();
    }
    // p_k < k (ln k + ln ln k) for k ≥ 6
    let kf = k.max(6) as f64;
    let bound = (kf * (kf.ln() + kf.ln().ln())).ceil() as u64 + 16;
    let mut ps = primes_up_to(bound);
    ps.truncate(k);
    ps
}

/// Product of the first `k` primes.
pub fn primorial(k: usize) -> Integer {
    first_primes(k)
        .into_iter()
        .fold(Integer::from(1), |acc, q| acc * q)
}

/// Möbius function on `[0, n]` by a linear sieve (index 0 unused).
pub fn moebius_table(n: usize) -> Vec<i8> {
    let mut mu = vec![1i8; n + 1];
    let mut is_comp = vec![false; n + 1];
    let mut primes: Vec<usize> = Vec::new();
    if n >= 1 {
        mu[0] = 0;
    }
    for i in 2..=n {
        if !is_comp[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &q in &primes {
            let m = i * q;
            if m > n {
                break;
            }
            is_comp[m] = true;
            if i % q == 0 {
                mu[m] = 0;
                break;
            }
            mu[m] = -mu[i];
        }
    }
    mu
}

/// Euler φ on `[0, n]` by sieve (index 0 unused).
pub fn phi_table(n: usize) -> Vec<u64> {
    let mut phi: Vec<u64> = (0..=n as u64).collect();
    for i in 2..=n {
        if phi[i] == i as u64 {
            let mut j = i;
            while j <= n {
                phi[j] -= phi[j] / i as u64;
                j += i;
            }
        }
    }
    phi
}

/// An odd prime together with everything the character machinery needs:
/// the factorization of `p - 1`, `ω(p - 1)`, the least primitive root as the
/// discrete-log base, and a lazily built discrete-log table.
///
/// Immutable after construction; the table is built at most once and the
/// value can be shared across threads.
#[derive(Debug)]
pub struct PrimeContext {
    p: u64,
    pm1: Factorization,
    pm1_primes: Vec<u64>,
    generator: u64,
    dlog_cap: u64,
    dlog: OnceLock<Vec<u32>>,
}

impl PrimeContext {
    pub fn new(p: u64) -> Result<Self> {
        Self::with_dlog_cap(p, DEFAULT_DLOG_CAP)
    }

    pub fn with_dlog_cap(p: u64, dlog_cap: u64) -> Result<Self> {
        if p < 3 || p % 2 == 0 || !is_prime(p as u128)? {
            return Err(Error::Domain(format!("{p} is not an odd prime")));
        }
        let pm1 = factorize((p - 1) as u128)?;
        let pm1_primes: Vec<u64> = pm1.primes().map(|q| q as u64).collect();
        let generator = search_generator(p, &pm1_primes, &RootBudget::default())?;
        Ok(Self {
            p,
            pm1,
            pm1_primes,
            generator,
            dlog_cap: dlog_cap.min(u32::MAX as u64),
            dlog: OnceLock::new(),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn pm1_factors(&self) -> &Factorization {
        &self.pm1
    }

    pub fn pm1_primes(&self) -> &[u64] {
        &self.pm1_primes
    }

    pub fn omega(&self) -> usize {
        self.pm1.omega()
    }

    /// The least primitive root, used as the discrete-log base.
    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn has_dlog_table(&self) -> bool {
        self.p <= self.dlog_cap
    }

    /// `table[n] = k` with `g^k ≡ n`; index 0 holds `u32::MAX`.
    pub fn dlog_table(&self) -> Result<&[u32]> {
        if !self.has_dlog_table() {
            return Err(Error::Regime(format!(
                "p = {} exceeds the discrete-log cap {}",
                self.p, self.dlog_cap
            )));
        }
        Ok(self.dlog.get_or_init(|| {
            let p = self.p as usize;
            let mut table = vec![u32::MAX; p];
            let mut x = 1u64;
            for k in 0..(p - 1) {
                table[x as usize] = k as u32;
                x = mulmod(x, self.generator, self.p);
            }
            table
        }))
    }

    pub fn dlog(&self, n: u64) -> Result<u64> {
        let n = n % self.p;
        if n == 0 {
            return Err(Error::Domain("0 has no discrete logarithm".into()));
        }
        Ok(self.dlog_table()?[n as usize] as u64)
    }

    pub fn order_of(&self, a: u64) -> Result<u64> {
        if a % self.p == 0 {
            return Err(Error::Domain(format!("{a} ≡ 0 (mod {})", self.p)));
        }
        Ok(order_mod_prime(a, self.p, &self.pm1))
    }

    pub fn is_primitive_root(&self, a: u64) -> bool {
        is_generator(a, self.p, &self.pm1_primes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_is_prime(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn small_primality_matches_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime(n as u128).unwrap(), trial_is_prime(n), "n = {n}");
        }
        assert!(is_prime(2).unwrap());
        assert!(!is_prime(1).unwrap());
    }

    #[test]
    fn primality_near_10_15() {
        // frozen from trial division up to sqrt: 10^15+37 is the first prime above 10^15
        let base = 1_000_000_000_000_000u64;
        let first = (base..).find(|&n| trial_is_prime(n)).unwrap();
        assert_eq!(first, base + 37);
        assert!(is_prime(first as u128).unwrap());
        for n in base..first {
            assert!(!is_prime(n as u128).unwrap());
        }
    }

    #[test]
    fn strong_pseudoprimes_are_rejected() {
        // 3215031751 is a strong pseudoprime to bases 2, 3, 5, 7
        assert!(!is_prime(3_215_031_751).unwrap());
        // 3825123056546413051 fools bases 2..23
        assert!(!is_prime(3_825_123_056_546_413_051).unwrap());
        // product of two primes above 2^64
        let a = 18_446_744_073_709_551_629u128; // next prime after 2^64
        assert!(is_prime(a).unwrap());
        assert!(!is_prime(a * 3).unwrap());
    }

    #[test]
    fn primality_above_the_witness_bound_uses_a_proof() {
        // 2^89 - 1 is a Mersenne prime (well above the deterministic MR bound)
        let m89 = (1u128 << 89) - 1;
        assert!(is_prime(m89).unwrap());
        assert!(!is_prime(m89 - 2).unwrap());
        // 2^127 - 1
        let m127 = (1u128 << 127) - 1;
        assert!(is_prime(m127).unwrap());
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(12).unwrap().entries(), &[(2, 2), (3, 1)]);
        assert!(factorize(1).unwrap().entries().is_empty());
        assert!(factorize(0).is_err());
        // 10^9 + 6 = 2 · 500000003, frozen from trial division
        let f = factorize(1_000_000_006).unwrap();
        assert_eq!(f.entries(), &[(2, 1), (500_000_003, 1)]);
    }

    #[test]
    fn factorize_semiprimes_near_10_18() {
        let a = 999_999_937u128;
        let b = 1_000_000_007u128;
        let f = factorize(a * b).unwrap();
        assert_eq!(f.entries(), &[(a, 1), (b, 1)]);
        let f = factorize(a * a).unwrap();
        assert_eq!(f.entries(), &[(a, 2)]);
    }

    #[test]
    fn multiplicative_function_examples() {
        assert_eq!(euler_phi(1).unwrap(), 1);
        assert_eq!(moebius(12).unwrap(), 0);
        assert_eq!(moebius(30).unwrap(), -1);
        assert_eq!(theta(12).unwrap(), Rational::from((1, 3)));
        // direct count of residues coprime to 12
        let count = (1..=12u64).filter(|&k| gcd_u64(k, 12) == 1).count();
        assert_eq!(count, 4);
    }

    #[test]
    fn divisor_sum_identities() {
        for n in 1..=3000u128 {
            let f = factorize(n).unwrap();
            let divs = f.divisors();
            let phi_sum: u128 = divs.iter().map(|&d| euler_phi(d).unwrap()).sum();
            assert_eq!(phi_sum, n);
            let mu_sum: i64 = divs.iter().map(|&d| moebius(d).unwrap() as i64).sum();
            assert_eq!(mu_sum, (n == 1) as i64);
        }
    }

    #[test]
    fn sieve_tables_agree_with_factorization() {
        let mu = moebius_table(2000);
        let phi = phi_table(2000);
        for n in 1..=2000u128 {
            assert_eq!(mu[n as usize], moebius(n).unwrap());
            assert_eq!(phi[n as usize] as u128, euler_phi(n).unwrap());
        }
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(least_primitive_root(3).unwrap(), 2);
        assert_eq!(least_primitive_root(7).unwrap(), 3);
        // brute force: 19 is the smallest g with order 190 mod 191
        let brute = (2..191u64)
            .find(|&g| (1..190u64).all(|k| powmod(g, k, 191) != 1))
            .unwrap();
        assert_eq!(brute, 19);
        assert_eq!(least_primitive_root(191).unwrap(), brute);
        assert!(least_primitive_root(9).is_err());
    }

    #[test]
    fn primitive_root_budget_is_enforced() {
        let budget = RootBudget {
            max_candidate: Some(2),
            max_time: None,
        };
        // g(7) = 3, so a cap of 2 must trip the budget
        assert!(matches!(
            least_primitive_root_with(7, &budget),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn multiplicative_order_examples() {
        assert_eq!(multiplicative_order(1, 7).unwrap(), 1);
        assert_eq!(multiplicative_order(6, 7).unwrap(), 2);
        let brute = (1..=6u64).find(|&k| powmod(3, k, 7) == 1).unwrap();
        assert_eq!(multiplicative_order(3, 7).unwrap(), brute);
        assert!(multiplicative_order(14, 7).is_err());
    }

    #[test]
    fn primorial_examples() {
        assert_eq!(primorial(0), 1);
        assert_eq!(primorial(4), 210);
        let direct = first_primes(18)
            .iter()
            .fold(Integer::from(1), |a, &q| a * q);
        assert_eq!(primorial(18), direct);
        assert_eq!(primorial(18), Integer::from(117_288_381_359_406_970_983_270u128));
        for k in 0..60 {
            let ratio = Integer::from(primorial(k + 1) / primorial(k));
            assert_eq!(ratio, first_primes(k + 1)[k]);
        }
    }

    #[test]
    fn primitive_roots_up_to_bound() {
        for p in primes_up_to(20_000).into_iter().skip(1) {
            let ctx = PrimeContext::new(p).unwrap();
            let g = ctx.generator();
            assert_eq!(ctx.order_of(g).unwrap(), p - 1);
            for a in 2..g {
                assert!(ctx.order_of(a).unwrap() < p - 1);
            }
        }
    }

    #[test]
    fn dlog_table_is_a_bijection() {
        let ctx = PrimeContext::new(1009).unwrap();
        let t = ctx.dlog_table().unwrap();
        let mut seen = vec![false; 1008];
        for n in 1..1009usize {
            let k = t[n] as usize;
            assert!(!seen[k]);
            seen[k] = true;
            assert_eq!(powmod(ctx.generator(), k as u64, 1009), n as u64);
        }
        assert_eq!(ctx.omega(), ctx.pm1_factors().omega());
    }

    #[test]
    fn dlog_cap_is_respected() {
        let ctx = PrimeContext::with_dlog_cap(1009, 100).unwrap();
        assert!(matches!(ctx.dlog_table(), Err(Error::Regime(_))));
    }

    #[test]
    fn factorization_json_is_a_pair_list() {
        let f = factorize(360).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, "[[2,3],[3,2],[5,1]]");
        let back: Factorization = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<Factorization>("[[4,1]]").is_err());
    }
}
