use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tiltlab::algebra::Algebra;
use tiltlab::json::{
    algebra_from_json, ar_quiver_json, module_from_json, parse_str, partial_report_json,
    t_tilting_report_json, tilting_report_json,
};
use tiltlab::lab::{
    enumerate_tilting, replay_json, verify_theorem, AlgebraClass, Catalog, VerifyConfig,
};
use tiltlab::module::Module;
use tiltlab::tilting::{is_partial_tilting, is_t_tilting, is_tilting};
use tiltlab::Error;

#[derive(Parser)]
#[command(
    name = "tiltlab",
    version,
    about = "Tilting theory over finite-dimensional algebras"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Cut-off for projective and injective dimensions.
    #[arg(long, global = true, default_value_t = 12)]
    pd_bound: usize,
    /// Maximum number of indecomposables to enumerate.
    #[arg(long, global = true, default_value_t = 200)]
    cap: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Random samples per closure test.
    #[arg(long, global = true, default_value_t = 20)]
    samples: usize,
    /// Write the JSON output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a tilting predicate on a module.
    Check {
        kind: CheckKind,
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        module: PathBuf,
        /// The tilting module T, for `t-tilting`.
        #[arg(long)]
        tilting: Option<PathBuf>,
    },
    /// Verify one of the correspondences and write a certificate, or replay one.
    Verify {
        theorem: Option<u8>,
        #[arg(long)]
        algebra: Option<PathBuf>,
        #[arg(long)]
        tilting: Option<PathBuf>,
        /// Declared class of the algebra, for correspondences 2 and 6.
        #[arg(long)]
        class: Option<ClassArg>,
        #[arg(long, conflicts_with_all = ["theorem", "algebra", "tilting"])]
        replay: Option<PathBuf>,
    },
    /// List the AR quiver, a perpendicular category or the tilting modules.
    Explore {
        what: ExploreKind,
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        tilting: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Tilting,
    Partial,
    TTilting,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExploreKind {
    Ar,
    Perp,
    Tilting,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Gorenstein,
    Replicated,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

/// Failures mapped onto exit codes.
enum Failure {
    Input(String),
    Precondition(String),
    Cap(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let msg = e.to_string();
        match e {
            Error::Io(_)
            | Error::Schema(_)
            | Error::ShapeMismatch(_)
            | Error::DimensionMismatch(_)
            | Error::RelationViolated(_)
            | Error::InvalidAlgebra(_)
            | Error::CyclicQuiver
            | Error::InadmissibleRelation(_)
            | Error::NotHereditary => Failure::Input(msg),
            Error::CapExceeded(_) => Failure::Cap(msg),
            _ => Failure::Precondition(msg),
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Precondition(_) => 3,
            Failure::Cap(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Precondition(m) | Failure::Cap(m) => m,
        }
    }
}

type Outcome = Result<bool, Failure>;

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_algebra(path: &Path) -> Result<Arc<Algebra>, Failure> {
    Ok(Arc::new(algebra_from_json(&read_json(path)?)?))
}

fn load_module(a: &Arc<Algebra>, path: &Path) -> Result<Module, Failure> {
    Ok(module_from_json(a, &read_json(path)?)?)
}

fn required<'a>(p: &'a Option<PathBuf>, flag: &str) -> Result<&'a PathBuf, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure::Precondition(format!("--{flag} is required")))
}

fn emit(global: &Global, text: &str) -> Result<(), Failure> {
    match &global.out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            match writeln!(out, "{text}") {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
                    Err(Failure::Input(format!("stdout: {e}")))
                }
                _ => Ok(()),
            }
        }
    }
}

fn emit_json(global: &Global, v: &Value) -> Result<(), Failure> {
    emit(global, &serde_json::to_string_pretty(v).expect("json"))
}

fn check(
    global: &Global,
    kind: CheckKind,
    algebra: &Path,
    module: &Path,
    tilting: &Option<PathBuf>,
) -> Outcome {
    let a = load_algebra(algebra)?;
    let m = load_module(&a, module)?;
    let (verdict, report) = match kind {
        CheckKind::Tilting => {
            let r = is_tilting(&m, global.pd_bound)?;
            (r.verdict, tilting_report_json(&r))
        }
        CheckKind::Partial => {
            let r = is_partial_tilting(&m, global.pd_bound)?;
            (r.verdict, partial_report_json(&r))
        }
        CheckKind::TTilting => {
            let t = load_module(&a, required(tilting, "tilting")?)?;
            if !is_tilting(&t, global.pd_bound)?.verdict {
                return Err(Failure::Precondition("T is not a tilting module".into()));
            }
            let r = is_t_tilting(&t, &m, global.pd_bound)?;
            (r.verdict, t_tilting_report_json(&r))
        }
    };
    emit_json(global, &report)?;
    eprintln!("verdict: {verdict}");
    Ok(verdict)
}

fn verify(
    global: &Global,
    theorem: Option<u8>,
    algebra: &Option<PathBuf>,
    tilting: &Option<PathBuf>,
    class: Option<ClassArg>,
    replay: &Option<PathBuf>,
) -> Outcome {
    if let Some(path) = replay {
        let report = replay_json(&read_json(path)?)?;
        for f in &report.failures {
            eprintln!("replay failure: {f}");
        }
        eprintln!(
            "replayed {} maps: {}",
            report.checked_maps,
            if report.passed() { "ok" } else { "FAILED" }
        );
        return Ok(report.passed());
    }
    let theorem = theorem
        .ok_or_else(|| Failure::Precondition("a correspondence number 1..6 is required".into()))?;
    let a = load_algebra(required(algebra, "algebra")?)?;
    let t = load_module(&a, required(tilting, "tilting")?)?;
    let cfg = VerifyConfig {
        cap: global.cap,
        bound: global.pd_bound,
        seed: global.seed,
        samples: global.samples,
        class: class.map(|c| match c {
            ClassArg::Gorenstein => AlgebraClass::Gorenstein,
            ClassArg::Replicated => AlgebraClass::Replicated,
        }),
    };
    let cert = verify_theorem(theorem, &a, &t, &cfg)?;
    emit_json(global, &cert.to_json())?;
    for f in &cert.failures {
        eprintln!("failure: {f}");
    }
    eprintln!(
        "correspondence {theorem}: {} {} / {} {}: {}",
        cert.left.len(),
        cert.left_kind,
        cert.right.len(),
        cert.right_kind,
        if cert.passed { "verified" } else { "FAILED" }
    );
    Ok(cert.passed)
}

fn explore(
    global: &Global,
    what: ExploreKind,
    algebra: &Path,
    tilting: &Option<PathBuf>,
    format: Format,
) -> Outcome {
    let a = load_algebra(algebra)?;
    let cat = Catalog::new(&a, global.cap, global.pd_bound, global.seed)?;
    let dims = |ids: &[usize]| -> Vec<Value> {
        ids.iter()
            .map(|&i| json!({"id": i, "dims": cat.module(i).dims()}))
            .collect()
    };
    match what {
        ExploreKind::Ar => {
            if format == Format::Dot {
                emit(global, cat.quiver.to_dot().trim_end())?;
            } else {
                emit_json(global, &ar_quiver_json(&cat.quiver))?;
            }
            eprintln!("{} indecomposables", cat.len());
        }
        ExploreKind::Perp => {
            let t = load_module(&a, required(tilting, "tilting")?)?;
            let t_ids = cat.support(&t)?;
            let perp = cat.right_perp(&t_ids);
            emit_json(
                global,
                &json!({"tilting": dims(&t_ids), "members": dims(&perp)}),
            )?;
            eprintln!(
                "{} of {} indecomposables lie in T^perp",
                perp.len(),
                cat.len()
            );
        }
        ExploreKind::Tilting => {
            let list = enumerate_tilting(&cat)?;
            let entries: Vec<Value> = list
                .iter()
                .map(|ids| json!({"summands": dims(ids)}))
                .collect();
            emit_json(global, &json!({"count": list.len(), "tilting": entries}))?;
            eprintln!("{} basic tilting modules", list.len());
        }
    }
    Ok(true)
}

fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Check {
            kind,
            algebra,
            module,
            tilting,
        } => check(g, *kind, algebra, module, tilting),
        Command::Verify {
            theorem,
            algebra,
            tilting,
            class,
            replay,
        } => verify(g, *theorem, algebra, tilting, *class, replay),
        Command::Explore {
            what,
            algebra,
            tilting,
            format,
        } => explore(g, *what, algebra, tilting, *format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
