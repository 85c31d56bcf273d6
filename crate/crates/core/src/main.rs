use clap::{Args, Parser, Subcommand, ValueEnum};
use std::process::ExitCode;
use std::time::Instant;
use twozero::charsum::{count_f_brute, f_character_formula, f_closed_e4n2, quad_pair_sum, weil_gap, ClassPattern};
use twozero::code::{brute_weight_distribution_with, BruteOptions, CodeParams, ExecMode};
use twozero::curve::{count_points_brute, count_points_closed, trace_power, Cubic};
use twozero::ffield::{make_field, odd_prime_powers, parse_coeffs};
use twozero::report::{format_enumerator, RunReport};
use twozero::{
    closed_weight_distribution, derive_params_with, gaussian_period_direct, periods_closed_n2,
    Error,
};

/// Weight distributions of the cyclic codes C_(q,m,h,e).
#[derive(Parser)]
#[command(name = "twozero", version, about)]
struct Cli {
    #[command(flatten)]
    code: CodeArgs,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CodeArgs {
    /// Characteristic p (prime).
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Subfield degree s, so q = p^s.
    #[arg(long, global = true)]
    s: Option<u32>,
    /// Extension exponent m, so r = q^m.
    #[arg(long, global = true)]
    m: Option<u32>,
    /// Divisor h of q-1.
    #[arg(long, global = true)]
    h: Option<u64>,
    /// Divisor e of h.
    #[arg(long, global = true)]
    e: Option<u64>,
    /// Field modulus, comma-separated coefficients, constant term first.
    #[arg(long, global = true)]
    modulus: Option<String>,
    /// Generator element, comma-separated coefficients.
    #[arg(long, global = true)]
    generator: Option<String>,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form weight distribution (e=4, N=2 only).
    Closed,
    /// Exhaustive weight distribution over all r² codewords.
    Brute {
        /// Ignore the r² pair budget.
        #[arg(long)]
        force: bool,
    },
    /// Run both engines and compare entry-for-entry.
    Verify {
        #[arg(long)]
        force: bool,
    },
    /// Exhaustive property suites for the supporting identities.
    Oracles {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Largest field cardinality for the pair-sum suite.
        #[arg(long, default_value_t = 169)]
        max_r: u64,
        /// Largest prime power for the point-count suite.
        #[arg(long, default_value_t = 10_000)]
        max_card: u64,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum Suite {
    Lemma31,
    Lemma32,
    Lemma33,
    Weil,
    Periods,
    All,
}

// exit codes: 0 ok/agree, 1 disagree, 2 invalid parameters, 3 budget
fn exit_for(err: &Error) -> u8 {
    match err {
        Error::BudgetExceeded { .. } => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    #[cfg(feature = "parallel")]
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}

fn build_params(args: &CodeArgs) -> Result<CodeParams, Error> {
    let (p, s, m, h, e) = match (args.p, args.s, args.m, args.h, args.e) {
        (Some(p), Some(s), Some(m), Some(h), Some(e)) => (p, s, m, h, e),
        _ => {
            return Err(Error::InvalidParams(
                "--p --s --m --h --e are all required".into(),
            ))
        }
    };
    let modulus = args.modulus.as_deref().map(parse_coeffs).transpose()?;
    let generator = args.generator.as_deref().map(parse_coeffs).transpose()?;
    derive_params_with(p, s, m, h, e, modulus.as_deref(), generator.as_deref())
}

fn emit(report: &RunReport, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(report).unwrap()),
        Format::Text => {
            println!("{}", report.enumerator);
            if let Some(agree) = report.agreement {
                println!("agreement={agree}");
            }
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Error> {
    match &cli.command {
        Command::Closed => {
            let params = build_params(&cli.code)?;
            let start = Instant::now();
            let dist = closed_weight_distribution(&params)?;
            let report = RunReport::build(
                &params,
                &dist,
                "closed",
                None,
                start.elapsed().as_millis(),
            );
            emit(&report, cli.format);
            Ok(0)
        }
        Command::Brute { force } => {
            let params = build_params(&cli.code)?;
            let start = Instant::now();
            let dist = brute_weight_distribution_with(
                &params,
                &BruteOptions {
                    mode: ExecMode::auto(),
                    force: *force,
                },
            )?;
            let report =
                RunReport::build(&params, &dist, "brute", None, start.elapsed().as_millis());
            emit(&report, cli.format);
            Ok(0)
        }
        Command::Verify { force } => {
            let params = build_params(&cli.code)?;
            let start = Instant::now();
            let closed = closed_weight_distribution(&params)?;
            let brute = brute_weight_distribution_with(
                &params,
                &BruteOptions {
                    mode: ExecMode::auto(),
                    force: *force,
                },
            )?;
            let agree = closed == brute;
            let report = RunReport::build(
                &params,
                &closed,
                "verify",
                Some(agree),
                start.elapsed().as_millis(),
            );
            emit(&report, cli.format);
            if !agree {
                eprintln!(
                    "disagreement: closed={} brute={}",
                    report.enumerator,
                    format_enumerator(&brute)
                );
                return Ok(1);
            }
            Ok(0)
        }
        Command::Oracles {
            suite,
            max_r,
            max_card,
        } => run_oracles(*suite, *max_r, *max_card),
    }
}

fn run_oracles(suite: Suite, max_r: u64, max_card: u64) -> Result<u8, Error> {
    let mut failures = 0usize;
    match suite {
        Suite::Lemma31 => failures += suite_lemma31(max_r)?,
        Suite::Lemma32 => failures += suite_lemma32(max_card)?,
        Suite::Lemma33 => failures += suite_lemma33()?,
        Suite::Weil => failures += suite_weil()?,
        Suite::Periods => failures += suite_periods()?,
        Suite::All => {
            failures += suite_lemma31(max_r)?;
            failures += suite_lemma32(max_card)?;
            failures += suite_lemma33()?;
            failures += suite_weil()?;
            failures += suite_periods()?;
        }
    }
    if failures == 0 {
        println!("all suites passed");
        Ok(0)
    } else {
        println!("{failures} failures");
        Ok(1)
    }
}

/// Σ_x χ((x+a)(x+b)) = -1 for all distinct pairs, every odd field in range.
fn suite_lemma31(max_r: u64) -> Result<usize, Error> {
    let mut checked = 0u64;
    let mut failures = 0usize;
    for (p, d, card) in odd_prime_powers(max_r) {
        if card < 9 {
            continue;
        }
        let ctx = make_field(p, d, None)?;
        for a in ctx.elements() {
            for b in ctx.elements() {
                if a == b {
                    continue;
                }
                if quad_pair_sum(&ctx, a, b)? != -1 {
                    failures += 1;
                }
                checked += 1;
            }
        }
    }
    println!("lemma31: {checked} pairs checked, {failures} failures");
    Ok(failures)
}

/// Closed point count equals the brute count for every odd prime power.
fn suite_lemma32(max_card: u64) -> Result<usize, Error> {
    let mut failures = 0usize;
    let cases = odd_prime_powers(max_card);
    for &(p, d, _) in &cases {
        let ctx = make_field(p, d, None)?;
        let brute = count_points_brute(&ctx, &Cubic::FourX, true)? as i128;
        if brute != count_points_closed(p, d)? {
            failures += 1;
        }
    }
    println!("lemma32: {} prime powers checked, {failures} failures", cases.len());
    Ok(failures)
}

/// Triple agreement brute = formula = closed on all 16 patterns, r ∈ {25, 81}.
fn suite_lemma33() -> Result<usize, Error> {
    let mut failures = 0usize;
    let mut checked = 0usize;
    for (p, s, m, h, e) in [(5u64, 1u32, 2u32, 4u64, 4u64), (3, 2, 2, 4, 4)] {
        let params = derive_params_with(p, s, m, h, e, None, None)?;
        let t = trace_power(p, s * m)?;
        for pat in ClassPattern::all(e, params.big_n) {
            let brute = count_f_brute(&params, &pat)?;
            let formula = f_character_formula(&params, &pat)?;
            let closed = f_closed_e4n2(&params, &pat, t)?;
            if brute != formula || brute != closed {
                failures += 1;
            }
            checked += 1;
        }
    }
    println!("lemma33: {checked} patterns checked, {failures} failures");
    Ok(failures)
}

fn suite_weil() -> Result<usize, Error> {
    let mut failures = 0usize;
    let mut checked = 0usize;
    for (p, s, m, h, e) in [(5u64, 1u32, 2u32, 4u64, 4u64), (3, 2, 2, 4, 4)] {
        let params = derive_params_with(p, s, m, h, e, None, None)?;
        for pat in ClassPattern::all(e, params.big_n) {
            if !weil_gap(&params, &pat)?.holds {
                failures += 1;
            }
            checked += 1;
        }
    }
    println!("weil: {checked} patterns checked, {failures} failures");
    Ok(failures)
}

/// Direct periods equal the closed form on the built-in field list and
/// η_1 + η_α = -1.
fn suite_periods() -> Result<usize, Error> {
    let mut failures = 0usize;
    for (p, s, m) in [(3u64, 1u32, 2u32), (5, 1, 2), (3, 2, 2), (13, 1, 2), (17, 1, 2)] {
        let ctx = make_field(p, s * m, None)?;
        let (e1, ea) = periods_closed_n2(p, s, m)?;
        let d1 = gaussian_period_direct(&ctx, 2, ctx.one())?.as_integer();
        let da = gaussian_period_direct(&ctx, 2, ctx.generator())?.as_integer();
        if d1 != Some(e1) || da != Some(ea) || e1 + ea != -1 {
            failures += 1;
        }
    }
    println!("periods: 5 fields checked, {failures} failures");
    Ok(failures)
}
