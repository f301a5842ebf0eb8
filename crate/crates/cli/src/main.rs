use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qhk::algebra::{build_algebra, GradedAlgebra, DEFAULT_DEGREE_CAP};
use qhk::category::{Bideg, GradedCategory};
use qhk::fixtures;
use qhk::koszul::{
    build_e_delta, build_e_nabla, check_conditions, check_koszul, nested_dims, verify_main_theorem, MainOptions, Verdict,
    DEFAULT_ISO_CAP,
};
use qhk::presentation::parse_algebra;
use qhk::qh::HighestWeight;
use qhk::report;

const INPUT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "qhk", version, about = "Quasi-hereditary and Koszul checks for graded quiver algebras")]
struct Cli {
    /// Worker threads for Ext computations; 1 runs sequentially. Results do not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a presentation.
    Validate { path: PathBuf },
    /// Hilbert, species and height tables.
    Info { path: PathBuf },
    /// Run one stage: qh, koszul or conditions.
    Check {
        path: PathBuf,
        which: Stage,
        /// Resolution length bound; defaults to the algebra's dimension.
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bigraded Ext tables of standards and costandards with composition ranks.
    ExtDelta {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Highest homological degree; defaults to the algebra's dimension.
        #[arg(long)]
        n_bound: Option<usize>,
    },
    /// The full pipeline, stopping at the first failing stage.
    VerifyMainTheorem {
        path: PathBuf,
        #[arg(long)]
        max_degree: Option<usize>,
        /// Largest total dimension for which an explicit isomorphism is searched.
        #[arg(long, default_value_t = DEFAULT_ISO_CAP)]
        iso_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List or print the built-in examples.
    Examples {
        #[command(subcommand)]
        action: ExamplesAction,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Stage {
    Qh,
    Koszul,
    Conditions,
}

#[derive(Subcommand)]
enum ExamplesAction {
    List,
    Emit {
        name: String,
        /// Height assignment, for examples shipped with several.
        #[arg(long)]
        variant: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Failure(u8, String);

type Outcome = Result<u8, Failure>;

fn input_error(msg: impl Into<String>) -> Failure {
    Failure(INPUT_ERROR, msg.into())
}

fn read_input(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => input_error(format!("{}: not found", path.display())),
        _ => input_error(format!("{}: {e}", path.display())),
    })
}

fn load(path: &Path) -> Result<(String, GradedAlgebra), Failure> {
    let text = read_input(path)?;
    let p = parse_algebra(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let alg = build_algebra(&p, DEFAULT_DEGREE_CAP).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    Ok((text, alg))
}

fn emit(v: &Value, out: Option<&Path>) -> Result<(), Failure> {
    let s = report::render(v);
    match out {
        Some(p) => std::fs::write(p, s).map_err(|e| input_error(format!("{}: {e}", p.display()))),
        None => {
            print!("{s}");
            Ok(())
        }
    }
}

fn code(v: Verdict) -> u8 {
    v.exit_code() as u8
}

fn configure_jobs(jobs: Option<usize>) -> Result<(), Failure> {
    match jobs {
        Some(0) => Err(input_error("--jobs must be at least 1")),
        Some(1) => {
            qhk::par::set_sequential(true);
            Ok(())
        }
        #[cfg(feature = "parallel")]
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| input_error(format!("--jobs: {e}"))),
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(()),
        None => Ok(()),
    }
}

fn cmd_validate(path: &Path) -> Outcome {
    let text = read_input(path)?;
    let p = parse_algebra(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    println!("ok: {} ({} vertices, {} arrows, {} relations)", p.name, p.vertices.len(), p.arrows.len(), p.relations.len());
    Ok(0)
}

fn cmd_info(path: &Path) -> Outcome {
    let (text, alg) = load(path)?;
    let p = alg.presentation();
    let species: Vec<Value> = alg
        .species()
        .iter()
        .map(|(&(x, y, n), &d)| json!({"from": p.vid(x), "to": p.vid(y), "degree": n, "dim": d}))
        .collect();
    let heights: BTreeMap<&str, i64> = (0..alg.vertex_count()).map(|v| (p.vid(v), p.ht(v))).collect();
    let body = json!({
        "name": p.name,
        "hilbert": alg.hilbert(),
        "total_dim": alg.total_dim(),
        "species": species,
        "heights": heights,
    });
    emit(&report::envelope("info", Some(&text), body), None)?;
    Ok(0)
}

fn cmd_check(path: &Path, which: Stage, max_degree: Option<usize>, out: Option<&Path>) -> Outcome {
    let (text, alg) = load(path)?;
    let bound = max_degree.unwrap_or_else(|| alg.total_dim().max(1));
    let (name, body, verdict) = match which {
        Stage::Koszul => {
            let r = check_koszul(&alg, bound);
            ("check koszul", serde_json::to_value(&r).unwrap(), r.verdict)
        }
        Stage::Qh | Stage::Conditions => {
            let hw = HighestWeight::new(alg);
            let qh = hw.check_qh();
            if matches!(which, Stage::Qh) || !qh.pass {
                let v = if qh.pass { Verdict::Pass } else { Verdict::Fail };
                let body = json!({"stage": "qh", "qh": qh, "verdict": v});
                ("check qh", body, v)
            } else {
                let c = check_conditions(&hw, bound).map_err(|e| Failure(1, e.to_string()))?;
                ("check conditions", serde_json::to_value(&c).unwrap(), c.verdict)
            }
        }
    };
    emit(&report::envelope(name, Some(&text), body), out)?;
    Ok(code(verdict))
}

fn ext_side(cat: &GradedCategory<Bideg>, truncated: bool) -> Value {
    let o = cat.objects();
    let comp = |(x, y, d): (usize, usize, Bideg)| format!("{},{},{},{}", o[x], o[y], d.n, d.m);
    let ranks: Vec<Value> = cat
        .composition_ranks()
        .into_iter()
        .map(|((a, b), r)| json!({"first": comp(a), "second": comp(b), "rank": r}))
        .collect();
    json!({
        "dims": nested_dims(cat),
        "total_dim": cat.total_dim(),
        "composition_ranks": ranks,
        "truncated": truncated,
    })
}

fn cmd_ext_delta(path: &Path, out: Option<&Path>, n_bound: Option<usize>) -> Outcome {
    let (text, alg) = load(path)?;
    let bound = n_bound.unwrap_or_else(|| alg.total_dim().max(1));
    let hw = HighestWeight::new(alg);
    let qh = hw.check_qh();
    if !qh.pass {
        return Err(Failure(1, format!("not quasi-hereditary: {}", qh.witnesses.join("; "))));
    }
    let (d, n) = (build_e_delta(&hw, bound), build_e_nabla(&hw, bound));
    let truncated = d.truncated || n.truncated;
    let body = json!({
        "n_bound": bound,
        "delta": ext_side(&d.category, d.truncated),
        "nabla": ext_side(&n.category, n.truncated),
    });
    emit(&report::envelope("ext-delta", Some(&text), body), out)?;
    Ok(if truncated { code(Verdict::Truncated) } else { 0 })
}

fn cmd_verify(path: &Path, max_degree: Option<usize>, iso_cap: usize, out: Option<&Path>) -> Outcome {
    let (text, alg) = load(path)?;
    let r = verify_main_theorem(alg, MainOptions { max_degree, iso_cap });
    emit(&report::envelope("verify-main-theorem", Some(&text), &r), out)?;
    if let (Some(stage), Some(reason)) = (&r.stopped_at, &r.reason) {
        eprintln!("stopped at {stage}: {reason}");
    }
    Ok(code(r.verdict))
}

fn cmd_examples(action: &ExamplesAction) -> Outcome {
    match action {
        ExamplesAction::List => {
            for n in fixtures::NAMES {
                println!("{n}");
            }
            Ok(0)
        }
        ExamplesAction::Emit { name, variant, out } => {
            let text = fixtures::lookup(name, variant.as_deref()).ok_or_else(|| {
                let v = variant.as_deref().map(|v| format!(" (variant {v})")).unwrap_or_default();
                input_error(format!("unknown example `{name}`{v}; try `qhk examples list`"))
            })?;
            match out {
                Some(p) => std::fs::write(p, text).map_err(|e| input_error(format!("{}: {e}", p.display())))?,
                None => print!("{text}"),
            }
            Ok(0)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    configure_jobs(cli.jobs)?;
    match &cli.command {
        Command::Validate { path } => cmd_validate(path),
        Command::Info { path } => cmd_info(path),
        Command::Check { path, which, max_degree, out } => cmd_check(path, *which, *max_degree, out.as_deref()),
        Command::ExtDelta { path, out, n_bound } => cmd_ext_delta(path, out.as_deref(), *n_bound),
        Command::VerifyMainTheorem { path, max_degree, iso_cap, out } => cmd_verify(path, *max_degree, *iso_cap, out.as_deref()),
        Command::Examples { action } => cmd_examples(action),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(c) => ExitCode::from(c),
        Err(Failure(c, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(c)
        }
    }
}
