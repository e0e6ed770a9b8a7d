use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lattice_hankel::exactalg::Scalar;
use lattice_hankel::gx::{fe_from_json, orbit, shift_out, OrbitOutcome, DEFAULT_MAX_STEPS};
use lattice_hankel::hankel::{det_table, detect_period};
use lattice_hankel::pathcount::{f_series, lgv_signed_sum, ItConfig, PathParams, Point, DEFAULT_BUDGET};
use lattice_hankel::verify::Suite;
use lattice_hankel::Error;
use serde::Deserialize;
use serde_json::json;

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

/// Exact Hankel determinants of lattice-path sequences.
#[derive(Parser)]
#[command(name = "lhankel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print f(0..=n) for F = 1 + t x^ell F + x^2 F^2.
    Seq {
        #[command(flatten)]
        path: PathArgs,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Print det H^shift_n for n = 1..=n.
    Hankel {
        #[command(flatten)]
        path: PathArgs,
        #[arg(long, default_value_t = 0)]
        shift: usize,
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// Append the eventual period of the determinant sequence.
        #[arg(long)]
        detect_period: bool,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Iterate the continued-fraction transformation on a functional equation.
    Transform {
        /// JSON file holding {d,k,u,v} or {a,b,c}.
        #[arg(long)]
        fe: PathBuf,
        /// Drop this many leading terms of the series first.
        #[arg(long, default_value_t = 0)]
        shift: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Compare the signed sum over path tuples with the path-weight determinant.
    Lgv {
        /// JSON file holding initials, terminals, ell and t.
        #[arg(long)]
        config: PathBuf,
        /// Maximum number of path tuples to enumerate.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Run the acceptance suite.
    Verify {
        /// Run a single criterion, by name or number.
        #[arg(long)]
        only: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
}

#[derive(Args)]
struct PathArgs {
    #[arg(long)]
    ell: usize,
    /// A rational number or a rational function of the symbol t.
    #[arg(long, default_value = "1")]
    t: Scalar,
}

impl PathArgs {
    fn params(&self) -> Result<PathParams, Failure> {
        PathParams::new(self.ell, self.t.clone()).map_err(Failure::from)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Csv,
    Json,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: String) -> Failure {
    Failure { code: EXIT_USAGE, message }
}

/// What a command prints, and whether it counts as a failed check.
struct Output {
    text: String,
    failed: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, failed: false }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{}", out.text);
            if out.failed {
                ExitCode::from(EXIT_FAILED)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<Output, Failure> {
    match command {
        Command::Seq { path, n, format } => seq(&path, n, format),
        Command::Hankel { path, shift, n, detect_period, format } => hankel(&path, shift, n, detect_period, format),
        Command::Transform { fe, shift, max_steps, format } => transform(&fe, shift, max_steps, format),
        Command::Lgv { config, budget, format } => lgv(&config, budget, format),
        Command::Verify { only, format } => verify(only.as_deref(), format),
    }
}

fn json_line(v: &impl serde::Serialize) -> String {
    serde_json::to_string(v).expect("serializable") + "\n"
}

fn seq(path: &PathArgs, n: usize, format: Format) -> Result<Output, Failure> {
    let f = f_series(&path.params()?, n);
    let text = match format {
        Format::Plain => f.iter().map(|c| format!("{c}\n")).collect(),
        Format::Csv => {
            let rows: String = f.iter().enumerate().map(|(i, c)| format!("{i},{c}\n")).collect();
            format!("n,f\n{rows}")
        }
        Format::Json => json_line(&f),
    };
    Ok(Output::ok(text))
}

fn hankel(path: &PathArgs, shift: usize, n: usize, with_period: bool, format: Format) -> Result<Output, Failure> {
    let f = f_series(&path.params()?, 2 * n + shift);
    let rows = det_table(&f, shift, n)?;
    let mut text: String = match format {
        Format::Plain => rows.iter().map(|r| format!("{:>4}  {}\n", r.n, r.det)).collect(),
        Format::Csv => std::iter::once("n,det\n".to_string()).chain(rows.iter().map(|r| format!("{},{}\n", r.n, r.det))).collect(),
        Format::Json => rows.iter().map(json_line).collect(),
    };
    if with_period {
        let dets: Vec<Scalar> = rows.into_iter().map(|r| r.det).collect();
        let period = detect_period(&dets, dets.len() / 3);
        text += &match (format, period) {
            (Format::Json, p) => json_line(&json!({ "period": p })),
            (_, Some(p)) => format!("period {} from offset {}\n", p.period, p.offset),
            (_, None) => "no period detected\n".to_string(),
        };
    }
    Ok(Output::ok(text))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn transform(file: &Path, shift: usize, max_steps: usize, format: Format) -> Result<Output, Failure> {
    let mut fe = fe_from_json(&read(file)?)?;
    if shift > 0 {
        fe = shift_out(&fe, shift)?.fe;
    }
    let trace = orbit(&fe, max_steps)?;
    let text = match format {
        Format::Plain => format!("{trace}\n"),
        Format::Json => json_line(&trace),
        Format::Csv => {
            let mut out = String::from("step,kinds,delta,sign,fe\n");
            for r in trace.records() {
                let kinds: Vec<String> = r.kinds.iter().map(ToString::to_string).collect();
                out += &format!("{},{},{},{},\"{}\"\n", r.index, kinds.join("+"), r.chain.delta, r.chain.sign, r.to);
            }
            out += &match &trace.outcome {
                OrbitOutcome::Cycle { start, end, .. } => format!("# cycle F{end} = F{start}\n"),
                OrbitOutcome::NoCycle { steps } => format!("# no cycle within {steps} steps\n"),
                OrbitOutcome::RationalTerminal { step, reason } => format!("# rational terminal at step {step}: {reason}\n"),
            };
            out
        }
    };
    Ok(Output::ok(text))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LgvFile {
    initials: Vec<Point>,
    terminals: Vec<Point>,
    ell: usize,
    t: Scalar,
}

fn lgv(file: &Path, budget: u64, format: Format) -> Result<Output, Failure> {
    let input: LgvFile = serde_json::from_str(&read(file)?).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let config = ItConfig::new(input.initials, input.terminals)?;
    let params = PathParams::new(input.ell, input.t)?;
    let sum = lgv_signed_sum(&config, &params, budget)?;
    let det = config.weight_matrix(&params).det();
    let matched = sum == det;
    let verdict = if matched { "MATCH" } else { "MISMATCH" };
    let text = match format {
        Format::Plain => format!("signed sum:  {sum}\ndeterminant: {det}\n{verdict}\n"),
        Format::Csv => format!("signed_sum,det,match\n{sum},{det},{matched}\n"),
        Format::Json => json_line(&json!({ "signed_sum": sum, "det": det, "match": matched })),
    };
    Ok(Output { text, failed: !matched })
}

fn verify(only: Option<&str>, format: Format) -> Result<Output, Failure> {
    let reports = Suite::default().run(only)?;
    let failed = reports.iter().filter(|r| !r.passed).count();
    let text = match format {
        Format::Plain => {
            let mut out: String = reports.iter().map(|r| format!("{r}\n")).collect();
            let total: f64 = reports.iter().map(|r| r.elapsed.as_secs_f64()).sum();
            out += &format!("{} of {} criteria passed in {total:.2}s\n", reports.len() - failed, reports.len());
            out
        }
        Format::Csv => {
            let rows: String = reports
                .iter()
                .map(|r| format!("{},{},{},{:.3}\n", r.id, r.name, r.passed, r.elapsed.as_secs_f64()))
                .collect();
            format!("id,name,passed,seconds\n{rows}")
        }
        Format::Json => json_line(&reports),
    };
    Ok(Output { text, failed: failed > 0 })
}
