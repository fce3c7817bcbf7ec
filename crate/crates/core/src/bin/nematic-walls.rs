use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nematic_walls::cli::{BcChoice, Command, Domain, InitChoice, RunConfig};

#[derive(Parser)]
#[command(name = "nematic-walls", version, about = "Walls and critical points of extreme-anisotropy nematic films")]
struct Cli {
    #[command(subcommand)]
    cmd: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Tangential boundary data on a disc.
    DiscTangential(Opts),
    /// Hedgehog u = ±x/|x| on the unit disc.
    DiscHedgehog(Opts),
    /// Degree −1 critical point on a disc.
    DiscDegMinusOne(Opts),
    /// Radial minimizer on the annulus 1 < r < R.
    Annulus(Opts),
    /// 1D minimizer on a strip.
    #[command(name = "rect-1d")]
    Rect1d(Opts),
    /// Cross-tie at one L/H.
    Crosstie(Opts),
    /// Cross-tie against 1D energy over a range of L/H.
    CrosstieSweep(Opts),
    /// Stabilized gradient flow of the ε-energy.
    Gradflow(Opts),
    /// Evaluate the ε-energy of a field stored as CSV.
    EnergyEval(Opts),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct Opts {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Validate and print the resolved configuration without running.
    #[arg(long)]
    check: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(short = 'L', long = "L")]
    l: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(short = 'H', long = "H")]
    h: Option<f64>,
    #[arg(short = 'T', long = "T")]
    t: Option<f64>,
    #[arg(short = 'R', long = "R")]
    r: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    sign: Option<f64>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    #[arg(long, value_parser = parse_domain)]
    domain: Option<Domain>,
    #[arg(long, value_parser = parse_bc)]
    bc: Option<BcChoice>,
    #[arg(long, value_parser = parse_init)]
    init: Option<InitChoice>,
    #[arg(long)]
    perturb: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_time: Option<f64>,
    #[arg(long)]
    eps_start: Option<f64>,
    #[arg(long)]
    checkpoints: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    lmin: Option<f64>,
    #[arg(long)]
    lmax: Option<f64>,
    #[arg(long)]
    step: Option<f64>,
    #[arg(long)]
    panels: Option<usize>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    input: Option<PathBuf>,
}

fn parse_enum<T: serde::de::DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

fn parse_domain(s: &str) -> Result<Domain, String> {
    parse_enum(s)
}

fn parse_bc(s: &str) -> Result<BcChoice, String> {
    parse_enum(s)
}

fn parse_init(s: &str) -> Result<InitChoice, String> {
    parse_enum(s)
}

macro_rules! set {
    ($cfg:ident, $o:ident, $($f:ident),*) => {
        $(if let Some(v) = $o.$f.clone() { $cfg.$f = v; })*
    };
}

fn resolve(command: Command, o: Opts) -> Result<(RunConfig, bool), String> {
    let mut cfg = match &o.config {
        Some(p) => RunConfig::load(p).map_err(|e| format!("{}: {e}", p.display()))?,
        None => RunConfig::default(),
    };
    cfg.subcommand = command;
    set!(cfg, o, out, l, eps, h, t, r, a, sign, nx, ny, domain, bc, init, perturb, tol, max_time, checkpoints, seed, lmin, lmax, step, panels, order);
    if o.dt.is_some() {
        cfg.dt = o.dt;
    }
    if o.eps_start.is_some() {
        cfg.eps_start = o.eps_start;
    }
    if o.input.is_some() {
        cfg.input = o.input;
    }
    Ok((cfg, o.check))
}

fn main() -> ExitCode {
    if let Ok(n) = std::env::var("NEMATIC_WALLS_THREADS") {
        match n.parse::<usize>() {
            Ok(n) => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            Err(_) => {
                eprintln!("error: NEMATIC_WALLS_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    let (command, opts) = match Cli::parse().cmd {
        Sub::DiscTangential(o) => (Command::DiscTangential, o),
        Sub::DiscHedgehog(o) => (Command::DiscHedgehog, o),
        Sub::DiscDegMinusOne(o) => (Command::DiscDegMinusOne, o),
        Sub::Annulus(o) => (Command::Annulus, o),
        Sub::Rect1d(o) => (Command::Rect1d, o),
        Sub::Crosstie(o) => (Command::Crosstie, o),
        Sub::CrosstieSweep(o) => (Command::CrosstieSweep, o),
        Sub::Gradflow(o) => (Command::Gradflow, o),
        Sub::EnergyEval(o) => (Command::EnergyEval, o),
    };
    let (cfg, check) = match resolve(command, opts) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(errs) = cfg.validate() {
        for e in errs {
            eprintln!("error: {e}");
        }
        return ExitCode::from(2);
    }
    if check {
        println!("{}", cfg.to_json().expect("config serializes"));
        return ExitCode::SUCCESS;
    }
    match cfg.dispatch() {
        Ok(out) => {
            println!("{}", serde_json::to_string_pretty(&out.summary).expect("summary serializes"));
            for f in out.files {
                eprintln!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {} failed: {e}", command.name());
            ExitCode::FAILURE
        }
    }
}
