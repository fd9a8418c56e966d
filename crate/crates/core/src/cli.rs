//! The `primroot` command line.
//!
//! Exit codes: 0 on success, 1 when a verification or certification fails,
//! 2 on usage errors (bad flags, malformed numbers, inputs outside a
//! command's domain).

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::{Integer, Rational};
use serde::Serialize;
use serde_json::{json, Value};

use crate::certify::{
    bound_sieved, bound_theorem1, burgess_comparison_bound, burgess_table, corollary_case_engine, optimize_params,
    optimize_threshold, random_primes, safe_primes, soundness_crosscheck, theorem3_certify, win_chain_sweep, CaseOptions,
    CaseTarget, ConstantChoice, HCoefficient, OmegaMode, PSpec, ParamsInput, SPolicy, ThresholdShape, Verdict,
};
use crate::characters::{stirling_sandwich, verify_dominance};
use crate::enclosure::{MAX_USER_PRECISION, MIN_PRECISION};
use crate::error::Error;
use crate::intervals::{default_count_grid, verify_count_grid, verify_external_inputs, verify_s_envelope, verify_t_envelope};
use crate::ntcore::{is_prime, least_primitive_root};
use crate::sieve::{DeltaBound, SieveConfig, SieveSpec};

#[derive(Parser, Debug)]
#[command(name = "primroot", version, about = "Explicit upper bounds for the least primitive root g(p)")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Working precision in bits for enclosures.
    #[arg(long, global = true, env = "PRIMROOT_PRECISION", default_value_t = crate::enclosure::DEFAULT_PRECISION,
          value_parser = clap::value_parser!(u32).range(MIN_PRECISION as i64..=MAX_USER_PRECISION as i64))]
    pub precision: u32,
    /// Seed for sampled sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Human,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Least primitive root of a prime, by brute force.
    Gp { p: u64 },
    /// Closed-form upper bounds for g(p).
    Bound {
        #[arg(value_enum)]
        kind: BoundKind,
        #[command(flatten)]
        args: BoundArgs,
    },
    /// Certify g(p) < H from the main criterion.
    Certify(CertifyArgs),
    /// Run one of the verification suites.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Search and brute-force check certificates for primes in a range.
    Scan(ScanArgs),
    /// Search (r, s, h, H) for the smallest certified H.
    Optimize(OptimizeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundKind {
    Thm1,
    Sieved,
    Burgess,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    /// A prime, or a threshold written `1e56` / `10^56`.
    #[arg(long)]
    p: String,
    #[arg(long, default_value_t = 2)]
    r: u32,
    /// ω(p − 1); defaults to the actual value for an exact prime.
    #[arg(long)]
    omega: Option<usize>,
    /// Number of excluded primes.
    #[arg(long)]
    s: Option<usize>,
    /// Lower bound for δ as a fraction; defaults to the worst case.
    #[arg(long)]
    delta: Option<String>,
    #[arg(long, value_enum, default_value_t = DeltaArg::Stated)]
    delta_bound: DeltaArg,
    /// All r in 2..=10 side by side (burgess only).
    #[arg(long)]
    table: bool,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[arg(long)]
    p: String,
    #[arg(long, default_value_t = 2)]
    r: u32,
    /// Integer h for an exact prime.
    #[arg(long)]
    h: Option<String>,
    /// H as an integer or fraction for an exact prime.
    #[arg(long = "H")]
    big_h: Option<String>,
    /// Sieve modulus e, an even divisor of p − 1.
    #[arg(long)]
    e: Option<u128>,
    /// Thresholds: h = ⌈h_coeff·p^h_exp⌉.
    #[arg(long, default_value = "1")]
    h_coeff: String,
    #[arg(long, default_value = "1/4")]
    h_exp: String,
    /// Thresholds: H = H_coeff·p^H_exp.
    #[arg(long = "H-coeff", default_value = "1")]
    big_h_coeff: String,
    #[arg(long = "H-exp", default_value = "5/8")]
    big_h_exp: String,
    #[arg(long)]
    omega: Option<usize>,
    #[arg(long)]
    at_most: bool,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long, value_enum, default_value_t = DeltaArg::Stated)]
    delta_bound: DeltaArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DeltaArg {
    Stated,
    Sharp,
}

impl From<DeltaArg> for DeltaBound {
    fn from(d: DeltaArg) -> Self {
        match d {
            DeltaArg::Stated => DeltaBound::Stated,
            DeltaArg::Sharp => DeltaBound::Sharp,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Suite {
    /// Exact moment sums against the Weil-type bounds.
    Charsum {
        #[arg(long, default_value_t = 5)]
        pmin: u64,
        #[arg(long, default_value_t = 500)]
        pmax: u64,
        #[arg(long, default_value_t = 2)]
        hmin: u64,
        #[arg(long, default_value_t = 8)]
        hmax: u64,
        #[arg(long, default_value_t = 1)]
        rmin: u32,
        #[arg(long, default_value_t = 4)]
        rmax: u32,
    },
    /// Point-count envelopes and the S/T sums over real X.
    Intervals {
        #[arg(long, default_value_t = 38)]
        s_xmax: u64,
        #[arg(long, default_value_t = 1000)]
        t_xmax: u64,
        /// Also check the cited Möbius-sum inputs up to this X.
        #[arg(long, default_value_t = 0)]
        external_xmax: u64,
        #[arg(long, default_value_t = 233)]
        h_cap: u64,
    },
    /// The f_e identity and the sieve inequality.
    Sieve {
        #[arg(long, default_value_t = 2000)]
        pmax: u64,
    },
    /// The corollary case analysis.
    Cases {
        #[arg(long, value_enum)]
        target: TargetArg,
        #[arg(long, value_enum, default_value_t = DeltaArg::Stated)]
        delta_bound: DeltaArg,
        #[arg(long, value_enum, default_value_t = SPolicyArg::Stated)]
        s_policy: SPolicyArg,
        #[arg(long, value_enum, default_value_t = ConstantArg::Stated)]
        constant: ConstantArg,
    },
    /// (2r/e)^r < (2r)!/(2^r r!) < √2(2r/e)^r.
    Stirling {
        #[arg(long, default_value_t = 1)]
        rmin: u32,
        #[arg(long, default_value_t = 100)]
        rmax: u32,
    },
    /// Every intermediate constant of the g(p) < C r F^r p^(1/4+1/(4r)) chains.
    WinChain {
        /// Threshold 1eK with K >= 15.
        #[arg(long, default_value = "1e15")]
        p: String,
        #[arg(long, default_value_t = 2)]
        rmin: u32,
        #[arg(long, default_value_t = 100)]
        rmax: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    Cor2,
    Lonely,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SPolicyArg {
    Stated,
    Best,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConstantArg {
    Stated,
    Derived,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    All,
    SafePrime,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long)]
    from: u64,
    #[arg(long)]
    to: u64,
    #[arg(long, value_enum, default_value_t = Shape::All)]
    shape: Shape,
    /// At most this many primes.
    #[arg(long, default_value_t = 100)]
    limit: usize,
    /// Sample primes at random (seeded) instead of taking the first ones.
    #[arg(long)]
    random: bool,
}

#[derive(Args, Debug)]
pub struct OptimizeArgs {
    #[arg(long)]
    p: String,
    /// Thresholds only.
    #[arg(long)]
    omega: Option<usize>,
    #[arg(long, default_value_t = 2)]
    rmin: u32,
    #[arg(long, default_value_t = 20)]
    rmax: u32,
}

/// What a command produced.
struct Report {
    json: Value,
    tsv: Option<String>,
    pass: bool,
}

impl Report {
    fn new<T: Serialize>(v: &T, pass: bool) -> Result<Self, Failure> {
        Ok(Self {
            json: serde_json::to_value(v).map_err(|e| Failure::Run(e.to_string()))?,
            tsv: None,
            pass,
        })
    }

    fn with_tsv(mut self, tsv: String) -> Self {
        self.tsv = Some(tsv);
        self
    }
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::Domain(_) | Error::Parameter(_) | Error::Config(_) | Error::UnsupportedRange(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Run(e.to_string()),
        }
    }
}

/// Parses, runs and prints; returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            let text = render(&report, cli.format);
            if writeln!(out, "{text}").is_err() {
                return 1;
            }
            if report.pass {
                0
            } else {
                1
            }
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Run(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
    }
}

fn render(r: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(&r.json).expect("serializable"),
        Format::Tsv => r.tsv.clone().unwrap_or_else(|| {
            let mut lines = Vec::new();
            flatten("", &r.json, &mut lines);
            lines.iter().map(|(k, v)| format!("{k}\t{v}")).collect::<Vec<_>>().join("\n")
        }),
        Format::Human => {
            let mut lines = Vec::new();
            flatten("", &r.json, &mut lines);
            let w = lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            lines.iter().map(|(k, v)| format!("{k:<w$}  {v}")).collect::<Vec<_>>().join("\n")
        }
    }
}

/// Dotted key paths to scalar leaves; enclosures `{lo, hi}` stay on one line.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) if m.len() == 2 && m.contains_key("lo") && m.contains_key("hi") => {
            let s = |x: &Value| x.as_str().map(str::to_string).unwrap_or_else(|| x.to_string());
            out.push((prefix.to_string(), format!("[{}, {}]", s(&m["lo"]), s(&m["hi"]))));
        }
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&key(k), x, out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| flatten(&key(&i.to_string()), x, out)),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

/// `1eK`, `10^K`, or a decimal integer.
enum PArg {
    Pow10(u32),
    Exact(u128),
}

fn parse_p(s: &str) -> Result<PArg, Failure> {
    let s = s.trim();
    let k = s.strip_prefix("1e").or_else(|| s.strip_prefix("1E")).or_else(|| s.strip_prefix("10^"));
    if let Some(k) = k {
        return k.parse().map(PArg::Pow10).map_err(|_| Failure::Usage(format!("bad exponent in {s:?}")));
    }
    s.parse().map(PArg::Exact).map_err(|_| Failure::Usage(format!("{s:?} is neither an integer nor 1eK")))
}

fn parse_rational(name: &str, s: &str) -> Result<Rational, Failure> {
    let (num, den) = s.split_once('/').unwrap_or((s, "1"));
    let num: Integer = num.trim().parse().map_err(|_| Failure::Usage(format!("--{name}: bad number {s:?}")))?;
    let den: Integer = den.trim().parse().map_err(|_| Failure::Usage(format!("--{name}: bad number {s:?}")))?;
    if den == 0 {
        return Err(Failure::Usage(format!("--{name}: zero denominator")));
    }
    Ok(Rational::from((num, den)))
}

fn p_spec(p: &str, omega: Option<usize>, mode: OmegaMode) -> Result<PSpec, Failure> {
    match parse_p(p)? {
        PArg::Pow10(k) => {
            let omega = omega.ok_or_else(|| Failure::Usage("a threshold p needs --omega".into()))?;
            Ok(PSpec::power_of_ten(k, omega, mode))
        }
        PArg::Exact(n) => {
            let spec = PSpec::exact(n)?;
            if let Some(w) = omega {
                if w != spec.omega() {
                    return Err(Failure::Usage(format!("--omega {w} but omega(p - 1) = {}", spec.omega())));
                }
            }
            Ok(spec)
        }
    }
}

fn sieve_for(omega: usize, s: Option<usize>, delta: Option<&str>, bound: DeltaArg) -> Result<SieveSpec, Failure> {
    match (s, delta) {
        (None | Some(0), None) => Ok(SieveSpec::unsieved(omega)),
        (s, Some(d)) => {
            let s = s.ok_or_else(|| Failure::Usage("--delta needs --s".into()))?;
            Ok(SieveSpec {
                e_desc: format!("{s} excluded primes, delta >= {d}"),
                s,
                delta: parse_rational("delta", d)?,
                omega,
            })
        }
        (Some(s), None) => Ok(SieveSpec::worst_case(omega, s, bound.into())?),
    }
}

fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    let prec = cli.precision;
    match &cli.command {
        Command::Gp { p } => {
            if *p < 3 || !is_prime(*p as u128)? {
                return Err(Failure::Usage(format!("{p} is not an odd prime")));
            }
            let g = least_primitive_root(*p)?;
            Ok(Report::new(&g, true)?.with_tsv(g.to_string()))
        }
        Command::Bound { kind, args } => bound(*kind, args, prec),
        Command::Certify(a) => certify(a, prec),
        Command::Verify { suite } => verify(suite, prec),
        Command::Scan(a) => scan(a, cli.seed, prec),
        Command::Optimize(a) => optimize(a, prec),
    }
}

fn bound(kind: BoundKind, a: &BoundArgs, prec: u32) -> Result<Report, Failure> {
    let spec = p_spec(&a.p, a.omega, OmegaMode::Exactly)?;
    let omega = spec.omega();
    match kind {
        BoundKind::Thm1 => Report::new(&bound_theorem1(&spec, a.r, omega, prec)?, true),
        BoundKind::Sieved => {
            let sieve = sieve_for(omega, a.s, a.delta.as_deref(), a.delta_bound)?;
            Report::new(&bound_sieved(&spec, a.r, &sieve, prec)?, true)
        }
        BoundKind::Burgess if a.table => {
            let rows = burgess_table(&spec, omega, prec)?;
            let pass = rows.iter().all(|r| r.table_consistent.is_true() && r.unsieved_below.holds.is_true());
            let mut tsv = String::from("r\tC\tC^r\tconsistent\tlog10_burgess_hi\tlog10_unsieved_hi\tratio_hi\tunsieved_below");
            for r in &rows {
                tsv.push_str(&format!(
                    "\n{}\t{}\t{}\t{}\t{:.6}\t{:.6}\t{:.6e}\t{}",
                    r.r,
                    r.c,
                    r.c_pow,
                    r.table_consistent,
                    r.burgess.log10_value.hi_f64(),
                    r.unsieved.log10_value.hi_f64(),
                    r.ratio.hi_f64(),
                    r.unsieved_below.holds
                ));
            }
            Ok(Report::new(&json!({ "p": spec.label(), "omega": omega, "rows": rows, "pass": pass }), pass)?.with_tsv(tsv))
        }
        BoundKind::Burgess => Report::new(&burgess_comparison_bound(&spec, a.r, omega, prec)?, true),
    }
}

fn certify(a: &CertifyArgs, prec: u32) -> Result<Report, Failure> {
    let mode = if a.at_most { OmegaMode::AtMost } else { OmegaMode::Exactly };
    let spec = p_spec(&a.p, a.omega, mode)?;
    let (sieve, params) = match &spec {
        PSpec::Exact { p, pm1 } => {
            let h = a.h.as_deref().ok_or_else(|| Failure::Usage("an exact prime needs --h".into()))?;
            let big_h = a.big_h.as_deref().ok_or_else(|| Failure::Usage("an exact prime needs --H".into()))?;
            let h: Integer = h.parse().map_err(|_| Failure::Usage(format!("--h: bad integer {h:?}")))?;
            let big_h = parse_rational("H", big_h)?;
            let sieve = match a.e {
                Some(e) => SieveConfig::new(*p, pm1, e)?.spec(),
                None => SieveSpec::unsieved(spec.omega()),
            };
            (sieve, ParamsInput::Exact { h, big_h })
        }
        PSpec::Threshold { .. } => {
            if a.h.is_some() || a.big_h.is_some() || a.e.is_some() {
                return Err(Failure::Usage("thresholds take --h-coeff/--h-exp/--H-coeff/--H-exp and --s".into()));
            }
            let shape = ThresholdShape {
                h_coeff: HCoefficient::Rational { value: parse_rational("h-coeff", &a.h_coeff)? },
                h_exp: parse_rational("h-exp", &a.h_exp)?,
                big_h_coeff: parse_rational("H-coeff", &a.big_h_coeff)?,
                big_h_exp: parse_rational("H-exp", &a.big_h_exp)?,
            };
            (sieve_for(spec.omega(), a.s, None, a.delta_bound)?, ParamsInput::Shape(shape))
        }
    };
    let cert = theorem3_certify(&spec, &sieve, a.r, &params, prec)?;
    Report::new(&cert, cert.verdict == Verdict::Certified)
}

fn verify(suite: &Suite, prec: u32) -> Result<Report, Failure> {
    match suite {
        Suite::Charsum { pmin, pmax, hmin, hmax, rmin, rmax } => {
            let hs: Vec<u64> = (*hmin..=*hmax).collect();
            let rs: Vec<u32> = (*rmin..=*rmax).collect();
            let rep = verify_dominance(*pmin, *pmax, &hs, &rs)?;
            Report::new(&rep, rep.pass)
        }
        Suite::Intervals { s_xmax, t_xmax, external_xmax, h_cap } => {
            let s = verify_s_envelope(*s_xmax, prec)?;
            let t = verify_t_envelope(*t_xmax, prec)?;
            let grid = verify_count_grid(&default_count_grid(&[10007, 65537, 1_000_003], *h_cap), prec)?;
            let external = if *external_xmax > 0 { verify_external_inputs(*external_xmax)? } else { Vec::new() };
            let pass = s.pass && t.pass && grid.pass && external.iter().all(|e| e.pass);
            let worst = s.worst_slack.min(t.worst_slack);
            let v = json!({
                "claim": "point-count envelopes and the S, T sums",
                "X_range": [s.x_range[0].min(t.x_range[0]), s.x_range[1].max(t.x_range[1])],
                "worst_slack": worst,
                "pass": pass,
                "s_envelope": s,
                "t_envelope": t,
                "count_grid": grid,
                "external_inputs": external,
            });
            Report::new(&v, pass)
        }
        Suite::Sieve { pmax } => {
            let rep = crate::sieve::verify(*pmax)?;
            Report::new(&rep, rep.pass)
        }
        Suite::Cases { target, delta_bound, s_policy, constant } => {
            let target = match target {
                TargetArg::Cor2 => CaseTarget::Cor2,
                TargetArg::Lonely => CaseTarget::Lonely,
            };
            let opts = CaseOptions {
                delta_bound: (*delta_bound).into(),
                s_policy: match s_policy {
                    SPolicyArg::Stated => SPolicy::Stated,
                    SPolicyArg::Best => SPolicy::Best,
                },
                constant: match constant {
                    ConstantArg::Stated => ConstantChoice::Stated,
                    ConstantArg::Derived => ConstantChoice::Derived,
                },
                precision: prec,
            };
            let rep = corollary_case_engine(target, &opts)?;
            let tsv = rep.tsv();
            Ok(Report::new(&rep, rep.pass)?.with_tsv(tsv))
        }
        Suite::Stirling { rmin, rmax } => {
            if rmin > rmax || *rmin == 0 {
                return Err(Failure::Usage("need 1 <= rmin <= rmax".into()));
            }
            let rows = (*rmin..=*rmax).map(|r| stirling_sandwich(r, prec)).collect::<crate::Result<Vec<_>>>()?;
            let pass = rows.iter().all(|r| r.strict.is_true());
            let mut tsv = String::from("r\tlower\tmid\tupper\tstrict");
            for r in &rows {
                tsv.push_str(&format!("\n{}\t{:.6e}\t{:.6e}\t{:.6e}\t{}", r.r, r.lower, r.mid, r.upper, r.strict));
            }
            Ok(Report::new(&json!({ "rows": rows, "pass": pass }), pass)?.with_tsv(tsv))
        }
        Suite::WinChain { p, rmin, rmax } => {
            let PArg::Pow10(k) = parse_p(p)? else {
                return Err(Failure::Usage("--p must be a threshold 1eK".into()));
            };
            if rmin > rmax || *rmin < 2 {
                return Err(Failure::Usage("need 2 <= rmin <= rmax".into()));
            }
            let sweep = win_chain_sweep(k, *rmin, *rmax, prec)?;
            let mut tsv = String::from("variant\tr\tp_chain\tfinal_constant_hi\tpass\tfirst_failure");
            for r in &sweep.rows {
                tsv.push_str(&format!(
                    "\n{}\t{}\t{}\t{:.6}\t{}\t{}",
                    r.variant,
                    r.r,
                    r.p_chain,
                    r.final_constant_hi,
                    r.pass,
                    r.first_failure.as_deref().unwrap_or("")
                ));
            }
            Ok(Report::new(&sweep, sweep.pass)?.with_tsv(tsv))
        }
    }
}

fn scan(a: &ScanArgs, seed: u64, prec: u32) -> Result<Report, Failure> {
    if a.from > a.to {
        return Err(Failure::Usage("--from exceeds --to".into()));
    }
    let primes = match (a.shape, a.random) {
        (Shape::SafePrime, _) => safe_primes(a.from, a.to, a.limit)?,
        (Shape::All, true) => random_primes(a.from, a.to, a.limit, seed)?,
        (Shape::All, false) => {
            let mut v = Vec::new();
            let mut n = a.from.max(3);
            while n <= a.to && v.len() < a.limit {
                if is_prime(n as u128)? {
                    v.push(n);
                }
                n += 1;
            }
            v
        }
    };
    let rep = soundness_crosscheck(&primes, prec)?;
    Report::new(&rep, rep.pass)
}

fn optimize(a: &OptimizeArgs, prec: u32) -> Result<Report, Failure> {
    let out = match parse_p(&a.p)? {
        PArg::Exact(_) => optimize_params(&p_spec(&a.p, a.omega, OmegaMode::Exactly)?, prec)?,
        PArg::Pow10(k) => {
            let omega = a.omega.ok_or_else(|| Failure::Usage("a threshold p needs --omega".into()))?;
            if a.rmin < 2 || a.rmin > a.rmax {
                return Err(Failure::Usage("need 2 <= rmin <= rmax".into()));
            }
            optimize_threshold(&Integer::from(Integer::u_pow_u(10, k)), &format!("1e{k}"), omega, a.rmin, a.rmax, prec)?
        }
    };
    let pass = out.certified;
    Report::new(&out, pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("primroot").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn gp_seven() {
        let (code, out, _) = run_str(&["gp", "7"]);
        assert_eq!((code, out.trim()), (0, "3"));
        let (code, out, _) = run_str(&["gp", "7", "--format", "tsv"]);
        assert_eq!((code, out.trim()), (0, "3"));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_str(&["gp", "8"]).0, 2);
        assert_eq!(run_str(&["frobnicate"]).0, 2);
        assert_eq!(run_str(&["gp", "7", "--bogus"]).0, 2);
        assert_eq!(run_str(&["bound", "thm1", "--p", "1e56"]).0, 2);
        assert_eq!(run_str(&["gp", "7", "--precision", "10"]).0, 2);
    }

    #[test]
    fn threshold_parsing() {
        assert!(matches!(parse_p("1e56"), Ok(PArg::Pow10(56))));
        assert!(matches!(parse_p("10^22"), Ok(PArg::Pow10(22))));
        assert!(matches!(parse_p("1000000007"), Ok(PArg::Exact(1_000_000_007))));
        assert!(parse_p("1.5e3").is_err());
    }

    #[test]
    fn bound_thm1_json() {
        let (code, out, _) = run_str(&["bound", "thm1", "--p", "1e56", "--r", "2", "--omega", "10"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let lo: f64 = v["log10_value"]["lo"].as_str().unwrap().parse().unwrap();
        let expect = (4.0 * 2f64.powi(20)).log10() + 56.0 * 3.0 / 8.0;
        assert!((lo - expect).abs() < 1e-9);
    }

    #[test]
    fn certify_exit_codes() {
        let ok = ["certify", "--p", "1000000007", "--r", "2", "--h", "400", "--H", "300000"];
        assert_eq!(run_str(&ok).0, 0);
        let fail = ["certify", "--p", "1000000007", "--r", "2", "--h", "400", "--H", "20000"];
        assert_eq!(run_str(&fail).0, 1);
        let bad = ["certify", "--p", "1000000007", "--r", "2", "--h", "100", "--H", "150"];
        assert_eq!(run_str(&bad).0, 2);
    }

    #[test]
    fn output_is_deterministic() {
        let args = ["optimize", "--p", "1000000007", "--format", "human"];
        let a = run_str(&args);
        let b = run_str(&args);
        assert_eq!(a, b);
        assert_eq!(a.0, 0);
    }
}
