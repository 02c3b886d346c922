use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use intersets::inline::parse_set;
use intersets::report::{report_to_json, report_to_tsv};
use intersets::schema::parse_family;
use intersets::suites::{run_suite, SuiteConfig, SuiteError, SUITE_IDS};
use intersets_core::hset::{compute_h, AnalyzerConfig};
use intersets_core::sumset::{representation_count, symbolic_hfold_sum, Mode, RepCount, SumsetResult};
use intersets_core::window::DEFAULT_WINDOW_CAP;
use intersets_core::{Family, Int, Window};

#[derive(Parser)]
#[command(name = "intersets", version, about = "Sumsets of intersections of integer sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Add,
    Mult,
}

#[derive(Subcommand)]
enum Command {
    /// Classify h = 1..hmax for the family described in a JSON file.
    Hset {
        spec: PathBuf,
        #[arg(long, default_value_t = 5)]
        hmax: usize,
        #[arg(long = "Q", default_value_t = 20)]
        q: usize,
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<Window>,
        #[arg(long = "gen-radius", value_parser = parse_int, allow_hyphen_values = true)]
        gen_radius: Option<Int>,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUITE_IDS))]
        id: String,
        #[arg(long)]
        hmax: Option<usize>,
        #[arg(long = "Q")]
        q: Option<usize>,
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<Window>,
        #[arg(long = "gen-radius", value_parser = parse_int, allow_hyphen_values = true)]
        gen_radius: Option<Int>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        h: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print hA for an inline set expression.
    Sumset {
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long)]
        h: usize,
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<Window>,
        #[arg(long = "gen-radius", value_parser = parse_int, allow_hyphen_values = true)]
        gen_radius: Option<Int>,
    },
    /// Count ordered representations of x as a sum or product of h elements.
    Repfn {
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long)]
        h: usize,
        #[arg(long, value_parser = parse_int, allow_hyphen_values = true)]
        x: Int,
        #[arg(long = "gen-radius", value_parser = parse_int, allow_hyphen_values = true)]
        gen_radius: Option<Int>,
    },
}

fn parse_int(s: &str) -> Result<Int, String> {
    Int::from_str(s.trim()).map_err(|_| format!("`{s}` is not an integer"))
}

fn parse_window(s: &str) -> Result<Window, String> {
    let (lo, hi) = s.split_once(':').ok_or("expected LO:HI")?;
    let (lo, hi) = (parse_int(lo)?, parse_int(hi)?);
    Window::new(lo, hi).map_err(|e| e.to_string())
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure { code: 2, message: message.to_string() }
    }
}

impl From<SuiteError> for Failure {
    fn from(e: SuiteError) -> Self {
        Failure { code: e.exit_code() as u8, message: e.to_string() }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Hset { spec, hmax, q, window, gen_radius, format, out } => {
            let text = fs::read_to_string(&spec).map_err(|e| Failure::input(format!("{}: {e}", spec.display())))?;
            let spec = parse_family(&text).map_err(Failure::input)?;
            let family = Family::new(spec).map_err(|e| Failure::from(SuiteError::from(e)))?;
            let mut cfg = AnalyzerConfig { h_max: hmax, q, ..AnalyzerConfig::default() };
            if let Some(w) = window {
                cfg.window = w;
            }
            cfg.gen_radius = gen_radius.unwrap_or_else(|| cfg.window.radius() * 4).max(cfg.window.radius());
            let report = compute_h(&family, &cfg).map_err(|e| Failure::from(SuiteError::from(e)))?;
            let text = match format {
                Format::Tsv => report_to_tsv(&report),
                Format::Json => format!("{:#}\n", report_to_json(&report)),
            };
            emit(&text, out.as_ref())?;
            Ok(0)
        }
        Command::Verify { id, hmax, q, window, gen_radius, seed, samples, h, out } => {
            let cfg = SuiteConfig { h_max: hmax, q, window, gen_radius, seed, samples, h };
            let report = run_suite(&id, &cfg)?;
            emit(&report.to_text(), out.as_ref())?;
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Sumset { set, h, window, gen_radius } => {
            let set = parse_set(&set).map_err(Failure::input)?;
            let w = window.unwrap_or(Window { lo: Int::from(-50), hi: Int::from(50) });
            let radius = gen_radius.unwrap_or_else(|| w.radius() * 2);
            let r = symbolic_hfold_sum(&set, h, &w, &radius).map_err(|e| Failure::from(SuiteError::from(e)))?;
            let members = r.members_in(&w, DEFAULT_WINDOW_CAP).map_err(|e| Failure::from(SuiteError::from(e)))?;
            let line: Vec<String> = members.iter().map(Int::to_string).collect();
            println!("{}", line.join(" "));
            match &r {
                SumsetResult::Closed(c) => println!("complete: closed form {c}"),
                SumsetResult::Windowed { complete: true, generation_radius, .. } => {
                    println!("complete on {w} (summands within radius {generation_radius})")
                }
                SumsetResult::Windowed { generation_radius, .. } => {
                    println!("incomplete on {w}: only summands within radius {generation_radius} were used")
                }
            }
            Ok(0)
        }
        Command::Repfn { mode, set, h, x, gen_radius } => {
            let set = parse_set(&set).map_err(Failure::input)?;
            let mode = match mode {
                ModeArg::Add => Mode::Additive,
                ModeArg::Mult => Mode::Multiplicative,
            };
            let radius = gen_radius.unwrap_or_else(|| Int::from(200));
            match representation_count(&set, h, &x, mode, &radius).map_err(|e| Failure::from(SuiteError::from(e)))? {
                RepCount::Exact(k) => println!("{k}"),
                RepCount::LowerBound(k) => println!(">= {k}"),
                RepCount::Infinite => println!("infinite"),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
