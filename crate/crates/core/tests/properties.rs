//! Cross-module invariants, checked against naive oracles written here.

use num_complex::Complex64;
use proptest::prelude::*;
use rug::{Integer, Rational};

use primroot::certify::{
    bound_sieved, bound_theorem1, safe_primes, theorem3_certify, OmegaMode, PSpec, ParamsInput, Verdict,
};
use primroot::characters::{char_value, indicator_primitive_root, moment_sum_exact, Character};
use primroot::enclosure::DEFAULT_PRECISION as P;
use primroot::intervals::build_intervals;
use primroot::ntcore::{
    euler_phi, factorize, first_primes, is_prime, least_primitive_root, moebius, multiplicative_order, primes_up_to,
    primorial,
};
use primroot::sieve::{e_free, SieveSpec};
use primroot::PrimeContext;

fn naive_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        naive_gcd(b, a % b)
    }
}

fn naive_phi(n: u64) -> u64 {
    (1..=n).filter(|&k| naive_gcd(k, n) == 1).count() as u64
}

fn naive_order(a: u64, p: u64) -> u64 {
    let mut x = a % p;
    let mut k = 1;
    while x != 1 {
        x = x * a % p;
        k += 1;
    }
    k
}

fn naive_is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn small_prime() -> impl Strategy<Value = u64> {
    (5u64..400).prop_filter("prime", |&n| naive_is_prime(n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn divisor_sums(n in 1u64..100_000) {
        let divs: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
        let phi_sum: u128 = divs.iter().map(|&d| euler_phi(d as u128).unwrap()).sum();
        prop_assert_eq!(phi_sum, n as u128);
        let mu_sum: i64 = divs.iter().map(|&d| moebius(d as u128).unwrap() as i64).sum();
        prop_assert_eq!(mu_sum, i64::from(n == 1));
    }

    #[test]
    fn phi_matches_gcd_count(n in 1u64..3000) {
        prop_assert_eq!(euler_phi(n as u128).unwrap(), naive_phi(n) as u128);
    }

    #[test]
    fn factorize_multiplies_back(a in 2u64..1u64 << 31, b in 2u64..1u64 << 31) {
        let n = a as u128 * b as u128;
        let f = factorize(n).unwrap();
        prop_assert_eq!(f.value(), Integer::from(n));
        for (q, _) in f.entries() {
            prop_assert!(is_prime(*q).unwrap());
        }
    }

    #[test]
    fn least_root_is_least(p in (3u64..100_000).prop_filter("prime", |&n| naive_is_prime(n))) {
        let g = least_primitive_root(p).unwrap();
        prop_assert_eq!(naive_order(g, p), p - 1);
        prop_assert_eq!(multiplicative_order(g, p).unwrap(), p - 1);
        for a in 2..g {
            prop_assert!(naive_order(a, p) < p - 1);
        }
    }

    #[test]
    fn conjugate_moment_sums_agree(p in small_prime(), jj in 1u64..1000, h in 2u64..9, r in 1u32..4) {
        let ctx = PrimeContext::new(p).unwrap();
        let chi = Character::new(&ctx, jj % (p - 1)).unwrap();
        let a = moment_sum_exact(&ctx, &chi, h, r, true).unwrap();
        let b = moment_sum_exact(&ctx, &chi.conjugate(&ctx), h, r, true).unwrap();
        prop_assert!((a.value - b.value).abs() <= a.error_bound + b.error_bound);
    }

    #[test]
    fn moment_sum_matches_direct_character_values(p in (5u64..120).prop_filter("prime", |&n| naive_is_prime(n)), jj in 0u64..1000, h in 1u64..6, r in 1u32..3) {
        let ctx = PrimeContext::new(p).unwrap();
        let chi = Character::new(&ctx, jj % (p - 1)).unwrap();
        let mut direct = 0.0;
        for x in 0..p {
            let mut w = Complex64::new(0.0, 0.0);
            for n in 0..h {
                w += char_value(&ctx, &chi, (x + n) % p).unwrap();
            }
            direct += w.norm_sqr().powi(r as i32);
        }
        let m = moment_sum_exact(&ctx, &chi, h, r, true).unwrap();
        prop_assert!((m.value - direct).abs() <= m.error_bound + 1e-9 * direct.max(1.0));
    }

    #[test]
    fn e_free_with_all_primes_is_the_primitive_root_indicator(p in small_prime(), n in 1u64..400) {
        let ctx = PrimeContext::new(p).unwrap();
        let n = 1 + n % (p - 1);
        let ind = indicator_primitive_root(&ctx, n).unwrap();
        prop_assert_eq!(e_free(&ctx, ctx.pm1_primes(), n).unwrap(), ind);
        prop_assert_eq!(ind, u8::from(naive_order(n, p) == p - 1));
    }

    #[test]
    fn e_free_is_monotone_in_e(p in small_prime(), mask in 0u32..256, extra in 0u32..256, n in 1u64..400) {
        let ctx = PrimeContext::new(p).unwrap();
        let n = 1 + n % (p - 1);
        let qs = ctx.pm1_primes();
        // e always contains 2; e' adds primes to e.
        let pick = |m: u32| -> Vec<u64> {
            qs.iter().enumerate().filter(|(i, &q)| q == 2 || m >> i & 1 == 1).map(|(_, &q)| q).collect()
        };
        let e = pick(mask);
        let e2 = pick(mask | extra);
        prop_assert!(e_free(&ctx, &e2, n).unwrap() <= e_free(&ctx, &e, n).unwrap());
    }

    #[test]
    fn interval_systems_are_disjoint(p in prop::sample::select(vec![10007u64, 65537, 1_000_003]), x2 in 4u64..60, h in 2u64..20) {
        let big_h = Rational::from((x2 * h, 2));
        prop_assume!(Rational::from(&big_h * &big_h) * 2 < Rational::from(p) * h);
        let sys = match build_intervals(p, &big_h, h) {
            Ok(s) => s,
            Err(_) => return Ok(()),
        };
        let mut ivs: Vec<_> = sys.entries.iter().flat_map(|e| [&e.i, &e.j]).filter(|iv| iv.lo < iv.hi).collect();
        ivs.sort_by(|a, b| a.lo.cmp(&b.lo));
        for w in ivs.windows(2) {
            let touching_ok = w[0].hi == w[1].lo && !(w[0].hi_closed && w[1].lo_closed);
            prop_assert!(w[0].hi < w[1].lo || touching_ok, "overlap");
        }
    }

    #[test]
    fn interval_shift_property(x2 in 4u64..40, h in 2u64..12, pick in 0usize..10_000, z_off in 0u64..10_000, n in 0u64..12) {
        let p = 65537u64;
        let big_h = Rational::from((x2 * h, 2));
        let sys = build_intervals(p, &big_h, h).unwrap();
        let e = &sys.entries[pick % sys.entries.len()];
        let n = n % h;
        for (iv, positive) in [(&e.i, true), (&e.j, false)] {
            let lo = Integer::from(iv.lo.floor_ref());
            let width = Integer::from(iv.hi.ceil_ref()) - &lo + 1u32;
            prop_assume!(width > 0);
            let z = lo + Integer::from(z_off) % width;
            if iv.contains(&z) {
                let v = Rational::from(Integer::from(e.q) * (z + n) - Integer::from(p) * e.t);
                if positive {
                    prop_assert!(v > 0 && v <= big_h);
                } else {
                    prop_assert!(v < 0 && v >= -big_h.clone());
                }
            }
        }
    }

    #[test]
    fn unsieved_sieved_bound_is_theorem1(k in 15u32..200, r in 2u32..30, omega in 1usize..40) {
        let spec = PSpec::power_of_ten(k, omega, OmegaMode::Exactly);
        let a = bound_theorem1(&spec, r, omega, P).unwrap();
        let b = bound_sieved(&spec, r, &SieveSpec::unsieved(omega), P).unwrap();
        prop_assert_eq!(a.ln_value.lo(), b.ln_value.lo());
        prop_assert_eq!(a.ln_value.hi(), b.ln_value.hi());
    }
}

#[test]
fn primorial_ratios_are_primes() {
    let ps = first_primes(60);
    for k in 0..59 {
        let q = Integer::from(primorial(k + 1) / primorial(k));
        assert_eq!(q, ps[k]);
    }
}

#[test]
fn every_prime_below_1e5_has_the_least_root() {
    for p in primes_up_to(100_000).into_iter().filter(|&p| p > 2) {
        let g = least_primitive_root(p).unwrap();
        assert_eq!(multiplicative_order(g, p).unwrap(), p - 1, "p = {p}");
        assert!((2..g).all(|a| multiplicative_order(a, p).unwrap() < p - 1), "p = {p}");
    }
}

#[test]
fn second_moments_summed_over_all_characters() {
    // Orthogonality: Σ_χ Σ_x |Σ_{n<h} χ(x+n)|² = (p−1)·Σ_x #{n < h : x+n ≢ 0} = (p−1)²h.
    for p in primes_up_to(100).into_iter().filter(|&p| p > 2) {
        let ctx = PrimeContext::new(p).unwrap();
        for h in 1..p.min(8) {
            let mut total = 0.0;
            let mut err = 0.0;
            for j in 0..p - 1 {
                let m = moment_sum_exact(&ctx, &Character::new(&ctx, j).unwrap(), h, 1, true).unwrap();
                total += m.value;
                err += m.error_bound;
            }
            let expect = ((p - 1) * (p - 1) * h) as f64;
            assert!((total - expect).abs() <= err + 1e-9 * expect, "p = {p}, h = {h}");
        }
    }
}

#[test]
fn lhs_is_nondecreasing_along_safe_prime_ladders() {
    // Fixed r, h, H, ω = 2, no sieve: only √p and W(p) move, both upward.
    let ladder = safe_primes(1_000_000, 400_000_000, 400).unwrap();
    let ladder: Vec<u64> = ladder.iter().step_by(20).copied().collect();
    assert!(ladder.len() >= 15);
    for r in [2u32, 3] {
        let mut prev: Option<rug::Float> = None;
        for &p in &ladder {
            let spec = PSpec::exact(p as u128).unwrap();
            let params = ParamsInput::Exact { h: Integer::from(40), big_h: Rational::from(4000) };
            let cert = theorem3_certify(&spec, &SieveSpec::unsieved(2), r, &params, P).unwrap();
            if let Some(prev) = &prev {
                assert!(cert.lhs.lo() >= prev, "r = {r}, p = {p}");
            }
            prev = Some(cert.lhs.hi().clone());
        }
    }
}

fn certify_sample(p: u64, r: u32, h: u64, t: f64, sieve_one: bool) -> Option<(bool, Rational)> {
    let spec = PSpec::exact(p as u128).unwrap();
    let PSpec::Exact { pm1, .. } = &spec else { unreachable!() };
    // H = t·√(hp/2), so 2H² < hp holds by construction.
    let big_h = Rational::from(((t * (h as f64 * p as f64 / 2.0).sqrt()) as u64).max(3 * h));
    let sieve = if sieve_one && pm1.omega() > 1 {
        primroot::sieve::SieveConfig::excluding_largest(p as u128, pm1, 1).unwrap().spec()
    } else {
        SieveSpec::unsieved(pm1.omega())
    };
    let params = ParamsInput::Exact { h: Integer::from(h), big_h: big_h.clone() };
    let cert = theorem3_certify(&spec, &sieve, r, &params, P).ok()?;
    Some((cert.verdict == Verdict::Certified, big_h))
}

fn sample_prime() -> impl Strategy<Value = u64> {
    (100_000_000u64..4_000_000_000).prop_map(|n| (n..).find(|&m| naive_is_prime(m)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Any parameters the certifier accepts must agree with brute force.
    #[test]
    fn certificates_are_sound(p in sample_prime(), r in 2u32..4, h in 20u64..3000, t in 0.05f64..0.999, sieve_one in any::<bool>()) {
        if let Some((true, big_h)) = certify_sample(p, r, h, t, sieve_one) {
            prop_assert!(Rational::from(least_primitive_root(p).unwrap()) < big_h);
        }
    }
}

#[test]
fn the_sound_sampler_issues_certificates() {
    // Guards the property above against never reaching its assertion.
    let mut issued = 0;
    for (i, p) in safe_primes(1_000_000_000, 1_010_000_000, 40).unwrap().into_iter().enumerate() {
        let h = 200 + 50 * i as u64;
        if let Some((true, big_h)) = certify_sample(p, 2, h, 0.9, false) {
            assert!(Rational::from(least_primitive_root(p).unwrap()) < big_h);
            issued += 1;
        }
    }
    assert!(issued >= 20, "only {issued} certificates");
}
