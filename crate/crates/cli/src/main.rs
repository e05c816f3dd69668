//! `polyapprox`: polyhedral approximation of spectrahedra from the command
//! line.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polyapprox::io::{self, ResultFile, ResultKind};
use polyapprox::{cone_approximation, cutting_scheme, eda_approximation, polyc, ApproxParams, CuttingOptions, Error};

#[derive(Parser)]
#[command(name = "polyapprox", version, about = "Polyhedral outer approximation of spectrahedra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Record wall time in the result and print a stats line.
    #[arg(long, global = true)]
    stats: bool,
    /// Suppress warnings and the summary.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// (eps, delta)-approximation of an unbounded, line-free spectrahedron.
    Approx {
        #[command(flatten)]
        io: InOut,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
        /// Seed of the containment sampler.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// eps-approximation of a compact spectrahedron.
    Cutting {
        #[command(flatten)]
        io: InOut,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
    },
    /// Polyhedral approximation of a spectrahedral cone (A0 = 0).
    Cone {
        #[command(flatten)]
        io: InOut,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
    },
    /// CSV plot data for a 2-D result or a 3-D cone.
    Plot {
        #[command(flatten)]
        io: InOut,
    },
}

#[derive(Args)]
struct InOut {
    input: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::InvalidArgument(_) => 1,
            Error::UnboundedInput | Error::Unbounded => 2,
            Error::NotPointed => 3,
            Error::NoInterior => 4,
            Error::CompactInput => {
                return Failure::new(5, "input is compact; approximate it with the `cutting` subcommand");
            }
            Error::NotHomogeneous => 6,
            _ => 8,
        };
        Failure::new(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors share the input-error code; help and version succeed.
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Approx { io, eps, delta, max_iter, seed } => {
            let c = load_problem(&io.input, cli.quiet)?;
            let mut params = ApproxParams::new(*eps, *delta)?;
            params.max_iterations = *max_iter;
            params.seed = *seed;
            let r = eda_approximation(&c, &params)?;
            let file = ResultFile::from_approx(&r, &params, cli.stats);
            if r.certificate.containment_failures > 0 && !cli.quiet {
                eprintln!(
                    "warning: {} of {} sampled members lie outside the result",
                    r.certificate.containment_failures, r.certificate.containment_samples
                );
            }
            finish(cli, io, &file)
        }
        Command::Cutting { io, eps, max_iter } => {
            let c = load_problem(&io.input, cli.quiet)?;
            let r = cutting_scheme(&c, *eps, &CuttingOptions { max_iterations: *max_iter })?;
            finish(cli, io, &ResultFile::from_cutting(&r, *eps, cli.stats))
        }
        Command::Cone { io, delta, max_iter } => {
            let c = load_problem(&io.input, cli.quiet)?;
            let r = cone_approximation(&c, *delta, &CuttingOptions { max_iterations: *max_iter })?;
            finish(cli, io, &ResultFile::from_cone(&r, *delta, cli.stats))
        }
        Command::Plot { io } => {
            let text = read(&io.input)?;
            let result = io::parse_result(&text)?;
            write(io.output.as_deref(), &plot_csv(&result)?)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))
}

fn write(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::new(1, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_problem(path: &Path, quiet: bool) -> Result<polyapprox::Spectrahedron, Failure> {
    let p = io::parse_problem(&read(path)?)?;
    if !quiet {
        for w in &p.warnings {
            eprintln!("warning: {w}");
        }
    }
    Ok(p.spectrahedron)
}

fn finish(cli: &Cli, io: &InOut, file: &ResultFile) -> Result<(), Failure> {
    let mut text = file.to_json();
    text.push('\n');
    write(io.output.as_deref(), &text)?;
    if !cli.quiet {
        if let Some(s) = &file.stats {
            let mut line = format!("sdp_solves {} / vertices {}", s.sdp_solves, s.vertices);
            if let Some(t) = s.seconds {
                let _ = write!(line, " / seconds {t:.2}");
            }
            eprintln!("{line}");
        }
    }
    Ok(())
}

fn plot_csv(r: &ResultFile) -> Result<String, Failure> {
    let mut out = String::new();
    match r.n {
        2 => {
            let (points, rays) = polyc::planar_boundary(&r.vrep()?)?;
            out.push_str("x1,x2,kind\n");
            // An arriving ray is listed before the chain, a leaving one after.
            let (first, last) = match rays.len() {
                2 => (Some(&rays[0]), Some(&rays[1])),
                1 => (None, Some(&rays[0])),
                _ => (None, None),
            };
            if let Some(d) = first {
                let _ = writeln!(out, "{},{},ray", d[0], d[1]);
            }
            for p in &points {
                let _ = writeln!(out, "{},{},vertex", p[0], p[1]);
            }
            if let Some(d) = last {
                let _ = writeln!(out, "{},{},ray", d[0], d[1]);
            }
        }
        3 if r.kind == ResultKind::Cone => {
            out.push_str("x1,x2,x3,kind\n");
            for d in &r.rays {
                let _ = writeln!(out, "{},{},{},ray", d[0], d[1], d[2]);
            }
        }
        n => return Err(Failure::new(7, format!("cannot plot a {n}-dimensional result"))),
    }
    Ok(out)
}
