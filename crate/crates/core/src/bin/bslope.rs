use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use bslope::data::{default_data_dir, read_text};
use bslope::families::{Family, FamilySpec};
use bslope::peripheral::{ints_json, Outcome};
use bslope::search::{budget, Budget, ResumeToken, WARN_ABOVE};
use bslope::{
    degeneration_matrix, degeneration_vector, exhaustive_search, DegenerationIndex, EdgeClass,
    EdgeSelector, Error, ExponentMatrix, GluingSystem, PeripheralCurves, RowOrder, SearchOptions,
    SlopeProblem, Triangulation,
};

/// Writes a line to stdout; a closed pipe ends the process quietly.
macro_rules! out {
    ($($arg:tt)*) => {
        if writeln!(std::io::stdout(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    };
}

#[derive(Parser)]
#[command(
    name = "bslope",
    version,
    about = "Boundary slopes from ideal triangulations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a triangulation and report tetrahedra, edge classes and degrees.
    Validate(TriArgs),
    /// List edge classes as `<id> <degree>: tet(pair) ...`.
    Edges(TriArgs),
    /// Print the exponent matrix, or the degeneration matrix of one index.
    Matrix(MatrixArgs),
    /// Evaluate given degeneration indices.
    Slopes(SlopesArgs),
    /// Scan all 3^n degeneration indices.
    Search(SearchArgs),
    /// Generate and check members of the K or J family.
    Family(FamilyArgs),
}

#[derive(Args)]
struct TriArgs {
    #[arg(long)]
    triangulation: PathBuf,
    /// Comma-separated selectors, one per class, giving the class order.
    /// Defaults to first appearance.
    #[arg(long)]
    edge_order: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SystemArgs {
    #[arg(long)]
    triangulation: PathBuf,
    /// Class to drop: `tet:pair` (a member of the class) or a class id.
    #[arg(long)]
    omit_edge: String,
    /// Comma-separated selectors, one per class, giving the row order.
    /// Defaults to first appearance.
    #[arg(long)]
    row_order: Option<String>,
}

#[derive(Args)]
struct MatrixArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Degeneration index over `0`, `1`, `i`.
    #[arg(long)]
    index: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SlopesArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long)]
    curves: PathBuf,
    /// File with one index per line.
    #[arg(long, required_unless_present = "index")]
    indices: Option<PathBuf>,
    #[arg(long)]
    index: Vec<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long)]
    curves: PathBuf,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Skip subtrees whose leading columns are dependent.
    #[arg(long)]
    prune: bool,
    #[arg(long)]
    chunk_depth: Option<usize>,
    /// Stop after this many chunks and print a resume token.
    #[arg(long)]
    max_chunks: Option<u64>,
    #[arg(long)]
    resume: Option<String>,
    /// Allow scans of more than 18 tetrahedra.
    #[arg(long)]
    force: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    max_n: usize,
    /// Directory holding `families/K.toml` and `families/J.toml`.
    #[arg(long)]
    data_dir: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = err.downcast_ref::<Error>().map_or(1, Error::exit_code);
            ExitCode::from(code as u8)
        }
    }
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Validate(a) => validate(&a),
        Command::Edges(a) => edges(&a),
        Command::Matrix(a) => matrix(&a),
        Command::Slopes(a) => slopes(&a),
        Command::Search(a) => search(&a),
        Command::Family(a) => family(&a),
    }
}

fn print_json(v: &Value) {
    out!(
        "{}",
        serde_json::to_string_pretty(v).expect("JSON values serialize")
    );
}

fn load_triangulation(path: &Path) -> anyhow::Result<Triangulation> {
    let text = read_text(path)?;
    Triangulation::parse(&text).with_context(|| path.display().to_string())
}

fn parse_order(list: Option<&str>) -> anyhow::Result<RowOrder> {
    Ok(match list {
        None => RowOrder::FirstAppearance,
        Some(list) => RowOrder::Reference(
            list.split(',')
                .map(|sel| sel.trim().parse())
                .collect::<bslope::Result<_>>()?,
        ),
    })
}

/// Edge classes renumbered by `--edge-order`.
fn ordered_classes(a: &TriArgs) -> anyhow::Result<(Triangulation, Vec<EdgeClass>)> {
    let tri = load_triangulation(&a.triangulation)?;
    let classes = tri.edge_classes();
    let order = parse_order(a.edge_order.as_deref())?.resolve(&classes)?;
    let classes = order
        .iter()
        .enumerate()
        .map(|(id, &c)| EdgeClass {
            id,
            members: classes[c].members.clone(),
        })
        .collect();
    Ok((tri, classes))
}

fn validate(a: &TriArgs) -> anyhow::Result<()> {
    let (tri, classes) = ordered_classes(a)?;
    let degrees: Vec<usize> = classes.iter().map(|c| c.degree()).collect();
    let warnings = tri.warnings(&classes);
    if a.json {
        print_json(&json!({
            "tets": tri.len(),
            "edge_classes": classes.len(),
            "degrees": degrees,
            "warnings": warnings,
        }));
    } else {
        let list: Vec<String> = degrees.iter().map(usize::to_string).collect();
        out!(
            "{} tets, {} edge classes, degrees [{}]",
            tri.len(),
            classes.len(),
            list.join(",")
        );
        for w in &warnings {
            out!("warning: {w}");
        }
    }
    Ok(())
}

fn edges(a: &TriArgs) -> anyhow::Result<()> {
    let (_, classes) = ordered_classes(a)?;
    let member = |&(t, p): &(usize, bslope::VertexPair)| format!("{t}({p})");
    if a.json {
        let rows: Vec<Value> = classes
            .iter()
            .map(|c| {
                json!({
                    "id": c.id,
                    "degree": c.degree(),
                    "members": c.members.iter().map(member).collect::<Vec<_>>(),
                })
            })
            .collect();
        print_json(&Value::Array(rows));
    } else {
        for c in &classes {
            let members: Vec<String> = c.members.iter().map(member).collect();
            out!("{} {}: {}", c.id, c.degree(), members.join(" "));
        }
    }
    Ok(())
}

fn exponent_matrix(s: &SystemArgs) -> anyhow::Result<ExponentMatrix> {
    let tri = load_triangulation(&s.triangulation)?;
    let (classes, sys) = GluingSystem::from_triangulation(&tri);
    let omit: EdgeSelector = s.omit_edge.parse()?;
    let order = parse_order(s.row_order.as_deref())?;
    Ok(sys.build_r(&classes, &omit, &order)?)
}

fn slope_problem(s: &SystemArgs, curves: &Path) -> anyhow::Result<SlopeProblem> {
    let r = exponent_matrix(s)?;
    let curves = PeripheralCurves::parse(&read_text(curves)?)
        .with_context(|| curves.display().to_string())?;
    Ok(SlopeProblem::new(r, curves)?)
}

fn matrix(a: &MatrixArgs) -> anyhow::Result<()> {
    let r = exponent_matrix(&a.system)?;
    match &a.index {
        None if a.json => print_json(&json!({
            "omitted_edge": r.omitted_edge(),
            "rows": r.matrix().to_rows(),
        })),
        None => out!("{}", r.to_string().trim_end()),
        Some(text) => {
            let index: DegenerationIndex = text.parse()?;
            let ri = degeneration_matrix(&r, &index)?;
            let d = degeneration_vector(&ri)?;
            if a.json {
                print_json(&json!({
                    "index": index.to_string(),
                    "rows": ri.to_rows(),
                    "d": ints_json(d.entries()),
                }));
            } else {
                out!("# degeneration matrix for {index}");
                out!("{}", ri.to_string().trim_end());
                let d: Vec<String> = d.entries().iter().map(|x| x.to_string()).collect();
                out!("# d = ({})", d.join(", "));
            }
        }
    }
    Ok(())
}

fn outcome_line(o: &Outcome) -> String {
    match o {
        Outcome::Certified(r) => format!(
            "{}  slope {}  (v_lambda, v_mu) = ({}, {})  c = {}",
            r.index,
            r.slope,
            r.valuations.v_lambda,
            r.valuations.v_mu,
            r.ideal_point_count()
        ),
        Outcome::NoSlope { index, .. } => {
            format!("{index}  ideal point, but both valuations vanish")
        }
        Outcome::NotSignDefinite { index, .. } => format!("{index}  not sign-definite"),
    }
}

fn slopes(a: &SlopesArgs) -> anyhow::Result<()> {
    let problem = slope_problem(&a.system, &a.curves)?;
    let mut indices = match &a.indices {
        Some(path) => DegenerationIndex::parse_list(&read_text(path)?)
            .with_context(|| path.display().to_string())?,
        None => Vec::new(),
    };
    for text in &a.index {
        indices.push(text.parse()?);
    }
    // one record per index, in input order
    let outcomes = indices
        .iter()
        .map(|i| problem.evaluate(i))
        .collect::<bslope::Result<Vec<_>>>()?;
    if a.json {
        print_json(&Value::Array(
            outcomes.iter().map(Outcome::to_json).collect(),
        ));
    } else {
        for o in &outcomes {
            out!("{}", outcome_line(o));
        }
    }
    Ok(())
}

fn search(a: &SearchArgs) -> anyhow::Result<()> {
    let problem = slope_problem(&a.system, &a.curves)?;
    let n = problem.tets();
    if budget(n) != Budget::Ok {
        eprintln!("warning: 3^{n} indices; scans above {WARN_ABOVE} tetrahedra take a long time");
    }
    let resume = a
        .resume
        .as_deref()
        .map(str::parse::<ResumeToken>)
        .transpose()?;
    let options = SearchOptions {
        workers: a.workers,
        prune: a.prune,
        chunk_depth: a.chunk_depth,
        resume,
        max_chunks: a.max_chunks,
        cancel: None,
        force: a.force,
    };
    let started = Instant::now();
    let report = exhaustive_search(&problem, &options).map_err(|e| match e {
        Error::Budget(_) => anyhow::Error::new(e).context("rerun with --force to scan anyway"),
        e => e.into(),
    })?;
    if a.json {
        print_json(&report.to_json());
    } else {
        for r in &report.certified {
            out!("{}", outcome_line(&Outcome::Certified(r.clone())));
        }
        for o in &report.rejected {
            out!("{}", outcome_line(o));
        }
        let slopes: Vec<String> = report
            .distinct_slopes
            .iter()
            .map(|s| s.to_string())
            .collect();
        out!(
            "certified {} of {} scanned ({} total)",
            report.certified.len(),
            report.scanned,
            report.total
        );
        out!("distinct slopes: {}", slopes.join(", "));
        if let Some(token) = report.resume_token {
            out!("resume with --resume {token}");
        }
        eprintln!("wall time {:.2} s", started.elapsed().as_secs_f64());
    }
    Ok(())
}

fn family(a: &FamilyArgs) -> anyhow::Result<()> {
    let dir = a.data_dir.clone().unwrap_or_else(default_data_dir);
    let spec = FamilySpec::load_from_data_dir(&dir, a.family)?;
    let reports = spec.report(a.max_n)?;
    if a.json {
        print_json(&Value::Array(reports.iter().map(|r| r.to_json()).collect()));
    } else {
        for r in &reports {
            let slopes: Vec<String> = r
                .outcomes
                .iter()
                .map(|o| {
                    o.certified()
                        .map_or("-".to_string(), |s| s.slope.to_string())
                })
                .collect();
            out!(
                "{}_{}: {} tets, slopes [{}]{}",
                a.family,
                r.n,
                r.tets,
                slopes.join(", "),
                if r.ok() { "" } else { "  (check failed)" }
            );
        }
    }
    Ok(())
}
