use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gg_cli::{
    cmd_analyze, cmd_family, cmd_geodesic, cmd_kovacic, cmd_pde, parse_triple, CliError, Direction, GeodesicArgs,
    Outcome, RunOptions, EXIT_INPUT,
};
use gg_core::kovacic::SearchOptions;
use gg_core::numfield::DEFAULT_DEGREE_CAP;

#[derive(Parser)]
#[command(name = "gg", version, about = "Non-integrability of geodesic flows on symmetric Monge patches")]
struct Cli {
    /// Write the JSON report here.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Search {
    /// Worker threads for the case II search.
    #[arg(long, env = "GG_THREADS")]
    threads: Option<usize>,
    /// Skip the interval pre-filter and go straight to exact arithmetic.
    #[arg(long)]
    no_prefilter: bool,
    /// Largest splitting-field degree built exactly.
    #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
    degree_cap: usize,
}

impl Search {
    fn options(&self) -> RunOptions {
        RunOptions {
            threads: self.threads,
            search: SearchOptions {
                prefilter: !self.no_prefilter,
                degree_cap: self.degree_cap,
            },
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Full pipeline for z = f(x, y).
    Analyze {
        #[arg(long = "f")]
        f: String,
        #[command(flatten)]
        search: Search,
    },
    /// Classify w'' = r w for a rational r(y).
    Kovacic {
        #[arg(long = "r", allow_hyphen_values = true)]
        r: String,
        #[command(flatten)]
        search: Search,
    },
    /// The surfaces x^n y^n z = 1.
    Family {
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        search: Search,
    },
    /// Integrate a geodesic on F(x, y, z) = c and print CSV.
    Geodesic {
        #[arg(long = "F")]
        f: String,
        #[arg(long = "c", default_value = "0", allow_hyphen_values = true)]
        c: String,
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        /// `random` or a vector `a,b,c` projected onto the tangent plane.
        #[arg(long, default_value = "random", allow_hyphen_values = true)]
        dir: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5.0)]
        length: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Candidate test y f_xx - f_y = 0 along x = 0.
    PdeTest {
        #[arg(long = "f")]
        f: String,
    },
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.cmd {
        Cmd::Analyze { f, search } => cmd_analyze(f, &search.options()),
        Cmd::Kovacic { r, search } => cmd_kovacic(r, &search.options()),
        Cmd::Family { n, search } => cmd_family(*n, &search.options()),
        Cmd::PdeTest { f } => cmd_pde(f),
        Cmd::Geodesic {
            f,
            c,
            start,
            dir,
            seed,
            length,
            step,
            ..
        } => cmd_geodesic(&GeodesicArgs {
            f: f.clone(),
            c: c.clone(),
            start: parse_triple(start)?,
            dir: if dir == "random" {
                Direction::Random
            } else {
                Direction::Fixed(parse_triple(dir)?)
            },
            seed: *seed,
            length: *length,
            step: *step,
        }),
    }
}

fn write(path: &PathBuf, what: &str, body: &str) -> Result<(), CliError> {
    std::fs::write(path, body).map_err(|e| CliError::new("cli.io", format!("writing {what} to {}: {e}", path.display())))
}

fn main() -> ExitCode {
    // clap uses exit status 2 for usage errors, which is reserved here
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { 0 });
        }
    };
    let result = run(&cli).and_then(|out| {
        if let Some(path) = &cli.json {
            let json = serde_json::to_string_pretty(&out.report).expect("report serializes");
            write(path, "report", &(json + "\n"))?;
        }
        match (&out.csv, &cli.cmd) {
            (Some(csv), Cmd::Geodesic { out: Some(path), .. }) => {
                write(path, "trajectory", csv)?;
                print!("{}", out.report.render());
            }
            (Some(csv), _) => {
                print!("{csv}");
                eprint!("{}", out.report.render());
            }
            (None, _) => print!("{}", out.report.render()),
        }
        Ok(out.exit)
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
