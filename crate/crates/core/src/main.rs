use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use phiprime::dsl::{parse_spec, Session};
use phiprime::module::DEFAULT_CAP;
use phiprime::phi::PhiSpec;
use phiprime::report::{
    render_classifications, render_verification, ClassifyReport, Format, SpecReport,
};
use phiprime::theorems::{
    classify_all, hunt_counterexamples, standard_suite, verify_theorem, HuntFamily, HuntQuestion,
    TheoremId,
};
use phiprime::{Error, ModuleCtx};

#[derive(Parser)]
#[command(
    name = "phiprime",
    version,
    about = "Prime and φ-prime submodules of finite modules"
)]
struct Cli {
    /// Output format: table, json or csv.
    #[arg(long, global = true, default_value = "table")]
    format: Format,

    /// Largest module (in elements) whose lattice may be enumerated.
    /// Overrides the spec's `cap` line and the PHI_CAP variable.
    #[arg(long, global = true)]
    cap: Option<usize>,

    /// Worker threads for sweeps; output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Standard,
}

#[derive(Args)]
struct Source {
    /// A context spec file.
    #[arg(long)]
    spec: Option<PathBuf>,

    /// A built-in family of contexts.
    #[arg(long, value_enum, conflicts_with = "spec")]
    suite: Option<Suite>,
}

#[derive(Subcommand)]
enum Command {
    /// Flag every submodule as prime, weak prime and φ-prime.
    Classify {
        /// A context spec file (same as --spec).
        file: Option<PathBuf>,
        #[command(flatten)]
        source: Source,
    },
    /// Check a theorem exhaustively; `all` checks every one.
    Verify {
        theorem: String,
        #[command(flatten)]
        source: Source,
    },
    /// Search for counterexamples to an open question.
    Hunt {
        /// converse_2_12ii or product_forms_2_13.
        question: String,
        /// Restrict the search to one spec's context, φ functions and sets.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Only report P with P(S) = P.
        #[arg(long)]
        saturated_only: bool,
    },
    /// Check every named submodule against every named φ in a spec.
    Report { file: PathBuf },
}

/// Failures that map to exit code 2.
struct InputError(String);

impl From<Error> for InputError {
    fn from(e: Error) -> InputError {
        InputError(e.to_string())
    }
}

fn load(path: &Path) -> Result<Session, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))?;
    let spec = parse_spec(&text).map_err(|e| match e {
        Error::Parse(diags) => InputError(
            diags
                .iter()
                .map(|d| format!("{}:{d}", path.display()))
                .collect::<Vec<_>>()
                .join("\n"),
        ),
        other => other.into(),
    })?;
    Ok(spec.build()?)
}

fn resolve_cap(flag: Option<usize>, spec: Option<usize>) -> Result<usize, InputError> {
    if let Some(c) = flag.or(spec) {
        return Ok(c);
    }
    match std::env::var("PHI_CAP") {
        Ok(v) => v
            .trim()
            .parse()
            .ok()
            .filter(|&c| c > 0)
            .ok_or_else(|| InputError(format!("PHI_CAP must be a positive integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

fn contexts(source: &Source, cap: Option<usize>) -> Result<(Vec<ModuleCtx>, usize), InputError> {
    match (&source.spec, source.suite) {
        (Some(path), _) => {
            let s = load(path)?;
            Ok((vec![s.ctx], resolve_cap(cap, s.cap)?))
        }
        (None, Some(Suite::Standard)) => Ok((standard_suite(), resolve_cap(cap, None)?)),
        (None, None) => Err(InputError(
            "give a context with --spec FILE or --suite standard".into(),
        )),
    }
}

fn default_phis() -> Vec<(String, PhiSpec)> {
    [PhiSpec::PhiN(1), PhiSpec::PhiN(2), PhiSpec::Omega]
        .into_iter()
        .map(|p| (p.column(), p))
        .collect()
}

/// Renders the command's output and reports whether it passed.
fn run(cli: &Cli) -> Result<(String, bool), InputError> {
    match &cli.command {
        Command::Classify { file, source } => {
            if file.is_some() && (source.spec.is_some() || source.suite.is_some()) {
                return Err(InputError(
                    "give the spec either positionally or with --spec".into(),
                ));
            }
            let (sessions, cap) = match file.as_ref().or(source.spec.as_ref()) {
                Some(path) => {
                    let s = load(path)?;
                    let cap = resolve_cap(cli.cap, s.cap)?;
                    let phis = if s.phis.is_empty() {
                        default_phis()
                    } else {
                        s.phis.clone()
                    };
                    (vec![(s.ctx, phis)], cap)
                }
                None => {
                    let (ctxs, cap) = contexts(source, cli.cap)?;
                    (ctxs.into_iter().map(|c| (c, default_phis())).collect(), cap)
                }
            };
            let mut reports = Vec::new();
            for (ctx, named) in &sessions {
                let phis: Vec<PhiSpec> = named.iter().map(|(_, p)| p.clone()).collect();
                let flags = classify_all(ctx, &phis, cap)?;
                reports.push(ClassifyReport::new(ctx, flags, named));
            }
            Ok((render_classifications(&reports, cli.format)?, true))
        }
        Command::Verify { theorem, source } => {
            let ids: Vec<TheoremId> = if theorem.eq_ignore_ascii_case("all") {
                TheoremId::ALL.to_vec()
            } else {
                vec![theorem.parse()?]
            };
            let (ctxs, cap) = contexts(source, cli.cap)?;
            let reports = ids
                .into_iter()
                .map(|id| verify_theorem(id, &ctxs, cap))
                .collect::<Result<Vec<_>, _>>()?;
            let passed = reports.iter().all(|r| r.passed());
            Ok((render_verification(&reports, cli.format)?, passed))
        }
        Command::Hunt {
            question,
            spec,
            saturated_only,
        } => {
            let question: HuntQuestion = question.parse()?;
            let (mut family, cap) = match spec {
                Some(path) => {
                    let s = load(path)?;
                    let cap = resolve_cap(cli.cap, s.cap)?;
                    let phis = if s.phis.is_empty() {
                        PhiSpec::standard_family()
                    } else {
                        s.phis.iter().map(|(_, p)| p.clone()).collect()
                    };
                    let sets = (!s.mult_sets.is_empty())
                        .then(|| s.mult_sets.iter().map(|(_, m)| m.clone()).collect());
                    let family = HuntFamily {
                        contexts: vec![s.ctx],
                        phis,
                        mult_sets: sets,
                        saturated_only: false,
                    };
                    (family, cap)
                }
                None => (
                    HuntFamily::default_for(question),
                    resolve_cap(cli.cap, None)?,
                ),
            };
            family.saturated_only = *saturated_only;
            let report = hunt_counterexamples(question, &family, cap)?;
            let passed = report.passed();
            let mut out = render_verification(&[report], cli.format)?;
            if passed && cli.format == Format::Table {
                out.push_str("none found in family\n");
            }
            Ok((out, passed))
        }
        Command::Report { file } => {
            let s = load(file)?;
            let cap = resolve_cap(cli.cap, s.cap)?;
            let report = SpecReport::build(&s, cap)?;
            Ok((report.render(cli.format)?, true))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot start {n} workers: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok((out, passed)) => {
            print!("{out}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
