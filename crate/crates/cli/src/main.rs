use std::fs;
use std::panic;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use steenweb::corpus::{data_dir, load_model, load_ring, load_rings, RingEntry};
use steenweb::periodicity::{
    check_bodd_corollary, classify_4periodic, minimal_period, rational_gcd_periodicity, Outcome, PeriodicityError,
};
use steenweb::rings::AnyAlgebra;
use steenweb::steenrod::{adem_reduce, parse_element, Prime};
use steenweb::suites::{self, SuiteReport};
use steenweb::web::{check_result, find_certificate, random_model, Leaf, SearchMode, WebError, WebResult};

const PASS: u8 = 0;
const CHECK_FAILED: u8 = 1;
const INPUT_ERROR: u8 = 2;
const INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "steenweb", version, about = "Steenrod reductions, cohomology periodicity and symmetry webs")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce an element such as "Sq2 . Sq2" to admissible form.
    Reduce {
        expr: String,
        #[arg(long, default_value_t = 2)]
        prime: u32,
    },
    /// Analyze a cohomology ring file.
    Ring {
        #[command(subcommand)]
        command: RingCommand,
    },
    /// Search isotropy models for symmetry-web certificates.
    Web {
        #[command(subcommand)]
        command: WebCommand,
    },
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum RingCommand {
    Validate(RingFile),
    MinimalPeriod {
        #[command(flatten)]
        file: RingFile,
        /// Range bound c; defaults to the formal dimension.
        #[arg(long)]
        range: Option<usize>,
    },
    Classify(RingFile),
    BoddCheck(RingFile),
    GcdCheck {
        #[command(flatten)]
        file: RingFile,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        range: Option<usize>,
    },
}

#[derive(Args)]
struct RingFile {
    #[arg(long)]
    file: PathBuf,
}

#[derive(Subcommand)]
enum WebCommand {
    Analyze {
        #[arg(long)]
        file: PathBuf,
        /// Drop the rank precondition and never follow the induction gate.
        #[arg(long)]
        relaxed: bool,
    },
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        bound: i64,
        #[arg(long)]
        relaxed: bool,
    },
    Exhaustive {
        #[arg(long, default_value_t = 8)]
        nmax: usize,
        #[arg(long, default_value_t = 4)]
        rmax: usize,
        #[arg(long, default_value_t = 1)]
        bound: i64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    AdemOracle,
    SqDecomposition,
    HitLemma,
    PowerOfTwo,
    OddP,
    GcdClosure,
    Bodd,
    WebExhaustive,
    WebRandom,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[arg(long)]
    prime: Option<u32>,
    /// Main bound of the suite: dmax, kmax, lmax or nmax.
    #[arg(long)]
    range: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    count: Option<usize>,
    /// Polynomial generators for adem-oracle.
    #[arg(long)]
    vars: Option<usize>,
    /// Model sizes for web-random.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
}

struct Report {
    value: Value,
    /// One-line human summary.
    headline: String,
    code: u8,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

fn input(message: impl ToString) -> Failure {
    Failure { code: INPUT_ERROR, message: message.to_string() }
}

fn prime(p: u32) -> Result<Prime, Failure> {
    Prime::new(p).map_err(input)
}

fn reduce(expr: &str, p: u32) -> Result<Report, Failure> {
    let p = prime(p)?;
    let e = parse_element(expr, p).map_err(|e| input(format!("{expr:?}: {e}")))?;
    let canonical = adem_reduce(&e);
    if !canonical.is_canonical() {
        return Err(Failure { code: INTERNAL, message: format!("{canonical} is not admissible") });
    }
    let text = canonical.to_string();
    Ok(Report { value: json!({"input": expr, "prime": p.get(), "canonical": text}), headline: text, code: PASS })
}

fn load(path: &Path) -> Result<AnyAlgebra, Failure> {
    load_ring(path).map_err(input)
}

fn periodicity_failure(e: PeriodicityError) -> Failure {
    match e {
        PeriodicityError::HypothesisViolation(_) | PeriodicityError::NotFourPeriodic(_) => {
            Failure { code: CHECK_FAILED, message: e.to_string() }
        }
        _ => input(e),
    }
}

macro_rules! with_ring {
    ($ring:expr, $a:ident => $body:expr) => {
        match $ring {
            AnyAlgebra::Fp($a) => $body,
            AnyAlgebra::Q($a) => $body,
        }
    };
}

fn outcome_code(o: Outcome) -> u8 {
    match o {
        Outcome::Fail => CHECK_FAILED,
        Outcome::Pass | Outcome::Inapplicable => PASS,
    }
}

fn ring(cmd: &RingCommand) -> Result<Report, Failure> {
    let path = match cmd {
        RingCommand::Validate(f) | RingCommand::Classify(f) | RingCommand::BoddCheck(f) => &f.file,
        RingCommand::MinimalPeriod { file, .. } | RingCommand::GcdCheck { file, .. } => &file.file,
    };
    let ring = load(path)?;
    let report = ring.validate();
    if let RingCommand::Validate(_) = cmd {
        let ok = report.passed();
        let headline = match report.first_failure() {
            None => format!("{}: valid", ring.name()),
            Some((axiom, f)) => format!("{}: {axiom} fails at {}: {}", ring.name(), f.witness, f.detail),
        };
        let value = serde_json::to_value(&report).expect("serializable");
        return Ok(Report { value, headline, code: if ok { PASS } else { CHECK_FAILED } });
    }
    if !report.passed() {
        let value = serde_json::to_value(&report).expect("serializable");
        return Ok(Report { value, headline: format!("{}: ring does not validate", ring.name()), code: CHECK_FAILED });
    }
    match cmd {
        RingCommand::Validate(_) => unreachable!(),
        RingCommand::MinimalPeriod { range, .. } => with_ring!(&ring, a => {
            let spectrum = minimal_period(a, range.unwrap_or(a.n())).map_err(periodicity_failure)?;
            let headline = match spectrum.minimal_period {
                Some(l) => format!("{}: minimal period {l}", a.name()),
                None => format!("{}: no periodicity up to {}", a.name(), spectrum.c),
            };
            Ok(Report { value: spectrum.to_json(a.field()), headline, code: PASS })
        }),
        RingCommand::Classify(_) => with_ring!(&ring, a => {
            let label = classify_4periodic(a).map_err(periodicity_failure)?;
            Ok(Report {
                value: json!({"ring": a.name(), "label": label.as_str()}),
                headline: label.as_str().to_string(),
                code: PASS,
            })
        }),
        RingCommand::BoddCheck(_) => with_ring!(&ring, a => {
            let v = check_bodd_corollary(a).map_err(periodicity_failure)?;
            let headline = format!("{}: {:?}, b_odd = {}", a.name(), v.result, a.b_odd());
            Ok(Report { code: outcome_code(v.result), value: serde_json::to_value(&v).expect("serializable"), headline })
        }),
        RingCommand::GcdCheck { k, range, .. } => with_ring!(&ring, a => {
            let v = rational_gcd_periodicity(a, *k, range.unwrap_or(a.n())).map_err(periodicity_failure)?;
            let headline = format!("{}: {:?}, D = {}", a.name(), v.result, v.witness["D"]);
            Ok(Report { code: outcome_code(v.result), value: serde_json::to_value(&v).expect("serializable"), headline })
        }),
    }
}

fn web_failure(e: WebError) -> Failure {
    match e {
        WebError::EffectivenessLoss(_) | WebError::RankBoundViolated(_) => Failure { code: INTERNAL, message: e.to_string() },
        _ => input(e),
    }
}

fn mode(relaxed: bool) -> SearchMode {
    if relaxed {
        SearchMode::Relaxed
    } else {
        SearchMode::Strict
    }
}

fn leaf_summary(res: &WebResult) -> String {
    match &res.leaf {
        Leaf::Certificate(c) => format!("Case {} certificate: {}", c.case, c.inequality),
        Leaf::PointComponent => "point component".to_string(),
        Leaf::Flagged { case, reason, .. } => format!("flagged in Case {case}: {reason}"),
    }
}

/// Searches and re-checks one model.
fn analyze(model: &steenweb::web::IsotropyModel, relaxed: bool) -> Result<(WebResult, Value, u8), Failure> {
    let res = find_certificate(model, mode(relaxed)).map_err(web_failure)?;
    let check = check_result(&res);
    let code = if !check.ok {
        INTERNAL
    } else if res.is_flagged() {
        CHECK_FAILED
    } else {
        PASS
    };
    let value = json!({"result": res, "check": check});
    Ok((res, value, code))
}

fn web(cmd: &WebCommand) -> Result<Report, Failure> {
    match *cmd {
        WebCommand::Analyze { ref file, relaxed } => {
            let model = load_model(file).map_err(input)?;
            let (res, value, code) = analyze(&model, relaxed)?;
            let mut headline = leaf_summary(&res);
            if code == INTERNAL {
                headline = format!("independent check failed: {}", value["check"]["failures"]);
            }
            Ok(Report { value, headline, code })
        }
        WebCommand::Random { n, r, count, seed, bound, relaxed } => {
            let mut results = Vec::new();
            let mut code = PASS;
            let (mut certified, mut flagged) = (0, 0);
            for i in 0..count as u64 {
                let s = seed.wrapping_add(i);
                let model = random_model(n, r, s, bound).map_err(web_failure)?;
                let (res, _, c) = analyze(&model, relaxed)?;
                code = code.max(c);
                certified += usize::from(c == PASS);
                flagged += usize::from(res.is_flagged());
                results.push(json!({"seed": s, "model": model, "leaf": res.leaf, "summary": leaf_summary(&res)}));
            }
            let value = json!({
                "n": n, "r": r, "count": count, "seed": seed, "bound": bound,
                "certified": certified, "flagged": flagged, "results": results,
            });
            let headline = format!("{count} models: {certified} verified, {flagged} flagged");
            Ok(Report { value, headline, code })
        }
        WebCommand::Exhaustive { nmax, rmax, bound } => Ok(suite_report(suites::web_exhaustive(nmax, rmax, bound))),
    }
}

fn suite_report(rep: SuiteReport) -> Report {
    let headline = format!(
        "{}: {} checked, {} passed, {} failed, {} skipped",
        rep.suite, rep.checked, rep.passed, rep.failed, rep.skipped
    );
    let code = if rep.ok() { PASS } else { CHECK_FAILED };
    Report { value: serde_json::to_value(&rep).expect("serializable"), headline, code }
}

fn corpus() -> Result<Vec<RingEntry>, Failure> {
    load_rings(&data_dir()).map_err(input)
}

fn verify(args: &VerifyArgs) -> Result<Report, Failure> {
    let seed = || args.seed.ok_or_else(|| input("this suite is randomized: --seed is required"));
    let rep = match args.suite {
        Suite::AdemOracle => {
            let p = prime(args.prime.unwrap_or(2))?;
            let (dmax, vars) = if p.is_two() { (20, 4) } else { (40, 3) };
            suites::adem_oracle(p, args.range.unwrap_or(dmax), args.vars.unwrap_or(vars))
        }
        Suite::SqDecomposition => suites::sq_decomposition(args.range.unwrap_or(256), 32),
        Suite::HitLemma => {
            let p = prime(args.prime.unwrap_or(3))?;
            if p.is_two() {
                return Err(input("hit-lemma needs an odd prime"));
            }
            suites::hit_lemma(p, args.range.unwrap_or(200))
        }
        Suite::PowerOfTwo => suites::power_of_two(&corpus()?, args.count.unwrap_or(500), seed()?),
        Suite::OddP => {
            let primes = match args.prime {
                Some(p) => vec![prime(p)?],
                None => vec![Prime::THREE, prime(5)?],
            };
            if primes.iter().any(|p| p.is_two()) {
                return Err(input("odd-p needs an odd prime"));
            }
            suites::odd_p(&corpus()?, &primes, args.count.unwrap_or(500), seed()?)
        }
        Suite::GcdClosure => suites::gcd_closure(&corpus()?),
        Suite::Bodd => suites::bodd(&corpus()?),
        Suite::WebExhaustive => suites::web_exhaustive(args.range.unwrap_or(8) as usize, 4, 1),
        Suite::WebRandom => {
            let ns = args.n.clone().unwrap_or_else(|| vec![16, 32, 64]);
            if ns.is_empty() {
                return Err(input("--n needs at least one size"));
            }
            suites::web_random(&ns, args.count.unwrap_or(1000), seed()?, 2)
        }
    };
    Ok(suite_report(rep))
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Reduce { expr, prime } => reduce(expr, *prime),
        Command::Ring { command } => ring(command),
        Command::Web { command } => web(command),
        Command::Verify(args) => verify(args),
    }
}

fn emit(cli: &Cli, rep: &Report) -> Result<(), Failure> {
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&rep.value).expect("serializable"),
        Format::Table => rep.headline.clone(),
    };
    match &cli.out {
        Some(path) => fs::write(path, text + "\n").map_err(|e| input(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = panic::catch_unwind(|| run(&cli).and_then(|rep| emit(&cli, &rep).map(|()| rep.code)));
    let code = match outcome {
        Ok(Ok(code)) => code,
        Ok(Err(f)) => {
            eprintln!("error: {}", f.message);
            f.code
        }
        // the panic message is already on stderr
        Err(_) => INTERNAL,
    };
    ExitCode::from(code)
}
