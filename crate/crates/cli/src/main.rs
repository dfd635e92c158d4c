use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kantorovich_cli::instance::Num;
use kantorovich_cli::{
    gen, load_instance, parse_instance, run_scenario, Arithmetic, Command, InputError, Instance, Options,
};

#[derive(Parser)]
#[command(name = "kantorovich", version, about = "Transport duality scenarios on finite spaces")]
struct Cli {
    /// Arithmetic for this run; defaults to the instance's own setting.
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,

    /// Comparison tolerance in float mode (ignored in rational mode).
    #[arg(long, global = true, default_value_t = kantorovich::scalar::DEFAULT_TOLERANCE)]
    tolerance: f64,

    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Rational,
    Float,
}

#[derive(Args)]
struct Input {
    /// Instance file (JSON), or `-` for stdin.
    instance: PathBuf,
}

#[derive(Subcommand)]
enum Verb {
    /// All four functionals with couplings and potentials.
    Solve(Input),
    /// beta <= alpha <= alpha* <= beta*.
    Chain(Input),
    /// Infimal-convolution approximants of the cost.
    Approx {
        #[command(flatten)]
        input: Input,
        /// Parameters n, comma separated.
        #[arg(long = "n", value_delimiter = ',', required = true)]
        n: Vec<String>,
    },
    /// Star partition and the discretization bound.
    Partition {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        eps: String,
        /// Uniform Lipschitz bound u of the cost in x.
        #[arg(long)]
        lipschitz: String,
    },
    /// Extend a coarse coupling over the instance's partition.
    Extend(Input),
    /// Minimal cross covering the rectangle union.
    Cover(Input),
    /// Marginal-null cross for the rectangle union, if one exists.
    Arveson(Input),
    /// 1-Wasserstein distance between the x and y weights on x's metric.
    Wasserstein(Input),
    /// Compare the simplex against vertex enumeration.
    OracleCheck {
        #[command(flatten)]
        input: Input,
        /// Largest |X|*|Y| to enumerate.
        #[arg(long, default_value_t = kantorovich::transport::DEFAULT_ENUMERATION_CAP)]
        cap: usize,
    },
    /// Print a random instance.
    Gen {
        #[arg(long)]
        seed: u64,
        /// Shape as RxC, e.g. 3x4.
        #[arg(long, value_parser = parse_size)]
        size: (usize, usize),
    },
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (r, c) = s.split_once(['x', 'X']).ok_or("expected RxC")?;
    let r: usize = r.trim().parse().map_err(|e| format!("rows: {e}"))?;
    let c: usize = c.trim().parse().map_err(|e| format!("cols: {e}"))?;
    if r == 0 || c == 0 {
        return Err("both sides must be positive".into());
    }
    Ok((r, c))
}

fn read(path: &Path) -> Result<Instance, InputError> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| InputError::Io { path: "stdin".into(), message: e.to_string() })?;
        parse_instance(&text)
    } else {
        load_instance(path)
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), InputError> {
    match output {
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            // A closed pipe (`| head`) is the reader's choice, not a failure.
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                Err(InputError::Io { path: "stdout".into(), message: e.to_string() })
            }
            _ => Ok(()),
        },
        Some(p) => std::fs::write(p, format!("{text}\n"))
            .map_err(|e| InputError::Io { path: p.display().to_string(), message: e.to_string() }),
    }
}

fn execute(cli: Cli) -> Result<bool, InputError> {
    let options = Options {
        mode: cli.mode.map(|m| match m {
            Mode::Rational => Arithmetic::Rational,
            Mode::Float => Arithmetic::Float,
        }),
        tolerance: cli.tolerance,
        timing: cli.timing,
    };
    let (input, command) = match cli.verb {
        Verb::Gen { seed, size: (r, c) } => {
            emit(&gen::generate(seed, r, c).to_json(), cli.output.as_deref())?;
            return Ok(true);
        }
        Verb::Solve(i) => (i, Command::Solve),
        Verb::Chain(i) => (i, Command::Chain),
        Verb::Approx { input, n } => (input, Command::Approx { params: n.into_iter().map(Num).collect() }),
        Verb::Partition { input, eps, lipschitz } => {
            (input, Command::Partition { eps: Num(eps), lipschitz: Num(lipschitz) })
        }
        Verb::Extend(i) => (i, Command::Extend),
        Verb::Cover(i) => (i, Command::Cover),
        Verb::Arveson(i) => (i, Command::Arveson),
        Verb::Wasserstein(i) => (i, Command::Wasserstein),
        Verb::OracleCheck { input, cap } => (input, Command::OracleCheck { cap }),
    };
    let instance = read(&input.instance)?;
    let report = run_scenario(&instance, &command, &options)?;
    let text = serde_json::to_string_pretty(&report.document).expect("reports serialize");
    emit(&text, cli.output.as_deref())?;
    Ok(report.ok)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
