use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use lpp_core::analytics::{pbar, shape_gamma, xibar};
use lpp_lab::config::Settings;
use lpp_lab::error::{LabError, LabResult};
use lpp_lab::experiments::Experiment;
use lpp_lab::report::Outcome;
use lpp_lab::selftest::{run_selftest, SelftestOptions};

/// Monte Carlo and exact computations for geometric last-passage percolation.
#[derive(Parser, Debug)]
#[command(name = "lpp-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mean of G(n,n)/n against the shape function.
    Shape(Flags),
    /// Log moment generating function of the two-parameter boundary model.
    Logmgf(Flags),
    /// Increment laws and independence along a down-right staircase.
    Burke(Flags),
    /// Tail of the exit point in the stationary model.
    ExitTail(Flags),
    /// Geodesics crossing a vertical segment at the transversal scale.
    Crossing(Flags),
    /// Probability that a geometric-difference walk stays nonpositive.
    Rw(Flags),
    /// Two-sided boundary walk built from stationary columns.
    RwBoundary(Flags),
    /// Finite-size surrogate for bi-infinite geodesics through a fixed edge.
    Biinf(Flags),
    /// Closed-form shape quantities.
    Analytics(Flags),
    /// Deterministic identity suite and closed-form round trips.
    Selftest(SelftestFlags),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Default)]
struct Flags {
    #[arg(long)]
    r: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
    /// Direction as `x,y`.
    #[arg(long)]
    xi: Option<String>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    n: Option<String>,
    /// Size or comma-separated list of sizes.
    #[arg(long)]
    size: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    /// Comma-separated list of levels.
    #[arg(long)]
    s: Option<String>,
    #[arg(long)]
    reps: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    threads: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Inferred from the `--out` extension when absent, else json.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Key-value config file; flags win on conflict.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SelftestFlags {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Swap the geodesic tie rules (mutation check of the suite itself).
    #[arg(long, hide = true)]
    swap_tie_rule: bool,
}

impl Flags {
    fn settings(&self) -> LabResult<Settings> {
        let base = match &self.config {
            Some(path) => Settings::from_file(path)?,
            None => Settings::new(),
        };
        let mut flags = Settings::new();
        let pairs = [
            ("r", &self.r),
            ("p", &self.p),
            ("q", &self.q),
            ("xi", &self.xi),
            ("m", &self.m),
            ("n", &self.n),
            ("size", &self.size),
            ("delta", &self.delta),
            ("alpha", &self.alpha),
            ("s", &self.s),
            ("reps", &self.reps),
            ("seed", &self.seed),
            ("threads", &self.threads),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                flags.set(k, v)?;
            }
        }
        Ok(base.overlay(&flags))
    }

    fn format(&self, settings: &Settings) -> LabResult<Format> {
        if let Some(f) = self.format {
            return Ok(f);
        }
        if let Some(f) = settings.raw("format") {
            return match f {
                "csv" => Ok(Format::Csv),
                "json" => Ok(Format::Json),
                other => Err(LabError::Config(format!("unknown format `{other}`"))),
            };
        }
        let out = self.out.clone().or_else(|| settings.raw("out").map(PathBuf::from));
        Ok(match out.as_deref().and_then(Path::extension).and_then(|e| e.to_str()) {
            Some("csv") => Format::Csv,
            _ => Format::Json,
        })
    }

    fn out(&self, settings: &Settings) -> Option<PathBuf> {
        self.out.clone().or_else(|| settings.raw("out").map(PathBuf::from))
    }
}

fn emit(out: Option<&Path>, text: &str) -> LabResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run_experiment(name: &str, flags: &Flags) -> LabResult<u8> {
    let settings = flags.settings()?;
    let format = flags.format(&settings)?;
    let threads = settings.usize_or("threads", 0)?;
    let exp = Experiment::from_settings(name, &settings)?;
    let report = exp.run(threads)?;
    let text = match format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json()?,
    };
    emit(flags.out(&settings).as_deref(), &text)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let mut code = 0;
    for v in &report.verdicts {
        if v.outcome != Outcome::Pass {
            eprintln!("{:?} gate {}: {}", v.outcome, v.gate, v.detail);
            code = 3;
        }
    }
    Ok(code)
}

fn run_analytics(flags: &Flags) -> LabResult<u8> {
    let settings = flags.settings()?;
    let r = settings.require_f64("r")?;
    let mut lines = Vec::new();
    let mut any = false;
    // `gamma` is the shape function at (m, n), by default the diagonal
    // point (1, 1); `gamma_xi` evaluates it at the direction itself
    let mn = (settings.f64_or("m", 1.0)?, settings.f64_or("n", 1.0)?);
    if let Some(xi) = settings.pair("xi")? {
        lines.push(("pbar", pbar(xi, r)?));
        lines.push(("gamma", shape_gamma(mn, r)?));
        lines.push(("gamma_xi", shape_gamma(xi, r)?));
        any = true;
    }
    if let Some(p) = settings.f64("p")? {
        let (a, b) = xibar(p, r)?;
        lines.push(("xibar_1", a));
        lines.push(("xibar_2", b));
        any = true;
    }
    if !any && (settings.raw("m").is_some() || settings.raw("n").is_some()) {
        lines.push(("gamma", shape_gamma(mn, r)?));
        any = true;
    }
    if !any {
        return Err(LabError::Config("analytics needs --xi, --p, --m or --n".into()));
    }
    let text = match flags.format(&settings)? {
        Format::Json if flags.format.is_some() || flags.out(&settings).is_some() => {
            let map: serde_json::Map<String, serde_json::Value> = lines.iter().map(|(k, v)| (k.to_string(), (*v).into())).collect();
            serde_json::to_string_pretty(&map)? + "\n"
        }
        Format::Csv => {
            let (keys, vals): (Vec<_>, Vec<_>) = lines.iter().map(|(k, v)| (k.to_string(), format!("{v:?}"))).unzip();
            format!("{}\n{}\n", keys.join(","), vals.join(","))
        }
        Format::Json => lines.iter().map(|(k, v)| format!("{k}={v:?}\n")).collect(),
    };
    emit(flags.out(&settings).as_deref(), &text)?;
    Ok(0)
}

fn run_selftest_cmd(flags: &SelftestFlags) -> LabResult<u8> {
    let mut opts = SelftestOptions { swap_tie_rule: flags.swap_tie_rule, ..SelftestOptions::default() };
    if let Some(seed) = flags.seed {
        opts.seed = seed;
    }
    let report = run_selftest(&opts);
    emit(flags.out.as_deref(), &report.render())?;
    if report.passed() {
        Ok(0)
    } else {
        eprintln!("failing invariants: {}", report.failing().join(", "));
        Ok(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, result) = match &cli.command {
        Command::Shape(f) => ("shape", run_experiment("shape", f)),
        Command::Logmgf(f) => ("logmgf", run_experiment("logmgf", f)),
        Command::Burke(f) => ("burke", run_experiment("burke", f)),
        Command::ExitTail(f) => ("exit-tail", run_experiment("exit-tail", f)),
        Command::Crossing(f) => ("crossing", run_experiment("crossing", f)),
        Command::Rw(f) => ("rw", run_experiment("rw", f)),
        Command::RwBoundary(f) => ("rw-boundary", run_experiment("rw-boundary", f)),
        Command::Biinf(f) => ("biinf", run_experiment("biinf", f)),
        Command::Analytics(f) => ("analytics", run_analytics(f)),
        Command::Selftest(f) => ("selftest", run_selftest_cmd(f)),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = e.exit_code();
            if code == 2 {
                let mut cmd = Cli::command();
                if let Some(sub) = cmd.find_subcommand_mut(name) {
                    eprintln!("\n{}", sub.render_usage());
                }
            }
            ExitCode::from(code as u8)
        }
    }
}
