//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Runs without the libtest harness so the lines always print.

use std::time::{Duration, Instant};

use primroot::certify::{
    burgess_table, corollary_case_engine, random_primes, safe_primes, soundness_crosscheck, win_chain_sweep, CaseOptions,
    CaseTarget, OmegaMode, PSpec, BURGESS_CONSTANTS,
};
use primroot::characters::verify_dominance;
use primroot::enclosure::DEFAULT_PRECISION as P;
use primroot::intervals::{default_count_grid, verify_count_grid, verify_s_envelope, verify_t_envelope};

struct Outcome {
    pass: bool,
    detail: String,
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let t0 = Instant::now();
    let mut out = f();
    let dt = t0.elapsed();
    if let Some(limit) = limit {
        if dt > limit {
            out.pass = false;
            out.detail.push_str(&format!("; over the {}s budget", limit.as_secs()));
        }
    }
    (out, dt)
}

fn err(e: impl std::fmt::Display) -> Outcome {
    Outcome { pass: false, detail: format!("error: {e}") }
}

fn c1_character_bounds() -> Outcome {
    let hs: Vec<u64> = (2..=8).collect();
    let rs: Vec<u32> = (1..=4).collect();
    match verify_dominance(5, 500, &hs, &rs) {
        Ok(r) => Outcome {
            pass: r.pass && r.violations.is_empty(),
            detail: format!(
                "{} primes, {} comparisons, {} violations, worst relative slack {:.3e}",
                r.primes_checked,
                r.records_checked,
                r.violations.len(),
                r.worst_relative_slack
            ),
        },
        Err(e) => err(e),
    }
}

fn c2_interval_envelopes() -> Outcome {
    let cells = default_count_grid(&[10007, 65537, 1_000_003], 233);
    match verify_count_grid(&cells, P) {
        Ok(r) => Outcome {
            pass: r.pass && r.failures.is_empty() && r.triples >= 200,
            detail: format!(
                "{} (p, H, h) triples with X in [2, 50], {} envelope failures, worst lower/upper ratios {:.4}/{:.4}",
                r.triples,
                r.failures.len(),
                r.worst_lower_ratio,
                r.worst_upper_ratio
            ),
        },
        Err(e) => err(e),
    }
}

fn c3_sum_envelopes() -> Outcome {
    match (verify_s_envelope(38, P), verify_t_envelope(1000, P)) {
        (Ok(s), Ok(t)) => Outcome {
            pass: s.pass && t.pass && s.worst_slack > 0.0 && t.worst_slack > 0.0,
            detail: format!(
                "S on [1, 38): worst slack {:.4e} at X = {}; T on [2, 1000): worst slack {:.4e} at X = {}",
                s.worst_slack, s.worst_at, t.worst_slack, t.worst_at
            ),
        },
        (Err(e), _) | (_, Err(e)) => err(e),
    }
}

fn c4_sieve() -> Outcome {
    match primroot::sieve::verify(2000) {
        Ok(r) => Outcome {
            pass: r.pass && r.identity_max_deviation < 1e-6,
            detail: format!(
                "{} primes, {} configs, {} identity checks (max deviation {:.2e}), {} inequality checks (worst slack {:.2e}, float tolerance 1e-6)",
                r.primes_checked, r.configs_checked, r.identity_checks, r.identity_max_deviation, r.inequality_checks, r.worst_slack
            ),
        },
        Err(e) => err(e),
    }
}

fn c5_case_engine() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for target in [CaseTarget::Cor2, CaseTarget::Lonely] {
        match corollary_case_engine(target, &CaseOptions::stated(P)) {
            Ok(r) => {
                pass &= r.pass;
                let omega8 = r.rows.iter().find(|x| x.omega == 8 && x.lhs_exact.is_some());
                let exact = omega8.map(|x| format!(", omega = 8 LHS = {}", x.lhs_exact.as_deref().unwrap())).unwrap_or_default();
                parts.push(format!(
                    "{target:?}: {} ({} failing checks{exact}; first: {})",
                    if r.pass { "pass" } else { "fail" },
                    r.failures.len(),
                    r.failures.first().map(String::as_str).unwrap_or("none")
                ));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{target:?}: error {e}"));
            }
        }
    }
    Outcome { pass, detail: parts.join(" | ") }
}

fn c6_win_chain() -> Outcome {
    match win_chain_sweep(15, 2, 100, P) {
        Ok(s) => {
            let failing: Vec<String> =
                s.rows.iter().filter(|r| !r.pass).map(|r| format!("{} r={}", r.variant, r.r)).collect();
            Outcome {
                pass: s.pass && s.max_final_constant < 4.0,
                detail: format!(
                    "{} chains for r in 2..=100 at p >= 1e15, {} failing{}, largest final constant {:.4} at r = {}",
                    s.rows.len(),
                    failing.len(),
                    if failing.is_empty() { String::new() } else { format!(" ({})", failing.join(", ")) },
                    s.max_final_constant,
                    s.max_final_constant_r
                ),
            }
        }
        Err(e) => err(e),
    }
}

fn c7_soundness() -> Outcome {
    let mut primes = Vec::new();
    for (lo, hi) in [(100_000_000, 110_000_000), (1_000_000_000, 1_010_000_000)] {
        match safe_primes(lo, hi, 50) {
            Ok(v) => primes.extend(v),
            Err(e) => return err(e),
        }
    }
    match random_primes(100_000_000, 4_000_000_000, 150, 0) {
        Ok(v) => primes.extend(v),
        Err(e) => return err(e),
    }
    primes.sort_unstable();
    primes.dedup();
    match soundness_crosscheck(&primes, P) {
        Ok(r) => Outcome {
            pass: r.pass && r.contradictions.is_empty() && r.certified >= 100,
            detail: format!(
                "{} primes tried, {} certified, {} without a certificate, {} contradictions, log10(H/g) margin min {:.3} median {:.3}",
                r.primes_checked,
                r.certified,
                r.skipped,
                r.contradictions.len(),
                r.min_margin,
                r.median_margin
            ),
        },
        Err(e) => err(e),
    }
}

fn c8_bound_tables() -> Outcome {
    // Pinned entries of the published table.
    let pinned = BURGESS_CONSTANTS.first().map(|r| r.2) == Some("12.8530") && BURGESS_CONSTANTS.last().map(|r| r.2) == Some("75.5139");
    match burgess_table(&PSpec::power_of_ten(56, 10, OmegaMode::Exactly), 10, P) {
        Ok(rows) => {
            let consistent = rows.iter().all(|r| r.table_consistent.is_true());
            let below = rows.iter().all(|r| r.unsieved_below.holds.is_true());
            let worst = rows.iter().map(|r| r.ratio.hi_f64()).fold(0.0, f64::max);
            Outcome {
                pass: pinned && consistent && below && rows.len() == 9,
                detail: format!(
                    "r = 2..10 at p >= 1e56: table entries pinned {pinned}, C^r consistent {consistent}, \
                     unsieved strictly below in every row {below} (largest ratio {worst:.4e})"
                ),
            }
        }
        Err(e) => err(e),
    }
}

fn main() {
    let criteria: [(&str, Option<u64>, fn() -> Outcome); 8] = [
        ("character-bound dominance", Some(300), c1_character_bounds),
        ("interval envelopes", Some(120), c2_interval_envelopes),
        ("S and T sum envelopes", None, c3_sum_envelopes),
        ("sieve identity and inequality", Some(600), c4_sieve),
        ("case engine (cor2, lonely)", None, c5_case_engine),
        ("win chain r = 2..100", None, c6_win_chain),
        ("end-to-end soundness", None, c7_soundness),
        ("bound tables", None, c8_bound_tables),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let (out, dt) = timed(limit.map(Duration::from_secs), f);
        if !out.pass {
            failed += 1;
        }
        println!(
            "criterion {}: {} [{name}] ({:.1}s) {}",
            i + 1,
            if out.pass { "PASS" } else { "FAIL" },
            dt.as_secs_f64(),
            out.detail
        );
    }
    println!("acceptance: {} of 8 criteria pass", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
