//! The `ultratree` command. Exit codes: 0 success, 1 domain error (named on
//! stderr), 2 usage error.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use ultratree_core::symbolic::examples::{fig1, fig10, four_point_space, star_vs_path};
use ultratree_core::symbolic::{
    certificate_budget, compact_labeling_witness, count_geq, discrete_tb_labeling_witness, free_predicates,
    isolated_points, truncate, validate, Count, Judgement, Witness,
};
use ultratree_core::{
    attachment_point, classify, conjecture_predicate, hull, is_isomorphic_labeled, representable, LabeledTree,
    PathMaxIndex, Rational, RepresentOpts, SymbolicTree, UltraSpace,
};

use crate::dot::{to_dot, Highlight};
use crate::format::{
    error_name, parse_space, parse_symbolic, parse_tree, space_to_string, symbolic_to_string, tree_to_string,
    FormatError, ScanLine, TreeJson,
};
use crate::scan::parallel_scan;

/// Largest value accepted from `ULTRATREE_SIZE_CAP`.
pub const SIZE_CAP_CEILING: usize = 8;
/// Largest tree whose full distance matrix is printed.
const MATRIX_CAP: usize = 5000;

#[derive(Parser, Debug)]
#[command(name = "ultratree", version, about = "Ultrametrics generated by vertex-labeled trees")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct AnyInput {
    #[arg(long, value_name = "FILE")]
    tree: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    symbolic: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    space: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum WitnessKind {
    /// A labeling under which the space is compact.
    Compact,
    /// A labeling under which the space is discrete and totally bounded.
    DiscreteTb,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ExampleName {
    Fig10,
    Fig1,
    StarPath,
    FourPoint,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check that a tree, symbolic tree or distance matrix is well formed.
    Validate(AnyInput),
    /// Distance between two vertices.
    Dist {
        #[arg(long, value_name = "FILE")]
        tree: PathBuf,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
    },
    /// Full distance matrix, as matrix JSON.
    Matrix {
        #[arg(long, value_name = "FILE")]
        tree: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Smallest subtree containing a set of vertices.
    Hull {
        #[arg(long, value_name = "FILE")]
        tree: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<String>,
        /// Writes the hull as tree JSON here and a DOT overlay beside it.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Where a vertex outside a connected set attaches to it.
    AttachPoint {
        #[arg(long, value_name = "FILE")]
        tree: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<String>,
        #[arg(long)]
        v: String,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Whether two labeled trees are isomorphic.
    Iso {
        /// Two tree files: `--tree A --tree B`.
        #[arg(long, value_name = "FILE", num_args = 1..=2, required = true)]
        tree: Vec<PathBuf>,
    },
    /// Completeness, discreteness, total boundedness and compactness.
    Classify {
        #[arg(long, value_name = "FILE")]
        symbolic: PathBuf,
        /// Also count vertices with label at least each of these values.
        #[arg(long, value_delimiter = ',')]
        values: Vec<String>,
    },
    /// Properties of the underlying unlabeled tree, and isolated points.
    Predicates {
        #[arg(long, value_name = "FILE")]
        symbolic: PathBuf,
    },
    /// Relabel a tree so that its space becomes compact or discrete and totally bounded.
    WitnessLabeling {
        kind: WitnessKind,
        #[arg(long, value_name = "FILE")]
        symbolic: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Finite piece of a symbolic tree, as tree JSON.
    Truncate {
        #[arg(long, value_name = "FILE")]
        symbolic: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Whether every ball meets the necessary condition for representability.
    ConjecturePredicate {
        #[arg(long, value_name = "FILE")]
        space: PathBuf,
    },
    /// Search for a labeled tree on the points generating the space.
    Representable {
        #[arg(long, value_name = "FILE")]
        space: PathBuf,
        /// Writes the representing tree here, if one exists.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Check predicate against representability on all small spaces (JSON lines).
    Scan {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Appends to this file, skipping spaces already recorded there.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Write a built-in construction to files.
    Example {
        name: ExampleName,
        /// Directory to write into.
        #[arg(long, value_name = "DIR", default_value = ".")]
        out: PathBuf,
    },
    /// Graphviz rendering of a tree or of a truncation of a symbolic tree.
    ExportDot {
        #[arg(long, value_name = "FILE", conflicts_with = "symbolic")]
        tree: Option<PathBuf>,
        #[arg(long, value_name = "FILE", requires = "budget")]
        symbolic: Option<PathBuf>,
        #[arg(long)]
        budget: Option<u64>,
        /// Highlighted vertices.
        #[arg(long, value_delimiter = ',')]
        set: Vec<String>,
        /// Also mark where this vertex attaches to the highlighted set.
        #[arg(long, requires = "set")]
        v: Option<String>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub usage: bool,
}

impl CliError {
    fn domain<E: std::fmt::Debug + Display>(e: E) -> Self {
        CliError { kind: error_name(&e), message: e.to_string(), usage: false }
    }

    fn usage(message: impl Into<String>) -> Self {
        CliError { kind: "Usage".into(), message: message.into(), usage: true }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError { kind: e.kind(), message: e.to_string(), usage: false }
    }
}

type Res<T> = Result<T, CliError>;

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| CliError {
        kind: "Io".into(),
        message: format!("{}: {e}", path.display()),
        usage: false,
    })
}

fn write_file(path: &Path, contents: &str) -> Res<()> {
    let mut text = contents.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| CliError { kind: "Io".into(), message: format!("{}: {e}", path.display()), usage: false })
}

fn load_tree(p: &Path) -> Res<LabeledTree> {
    Ok(parse_tree(&read(p)?)?)
}

fn load_space(p: &Path) -> Res<UltraSpace> {
    Ok(parse_space(&read(p)?)?)
}

fn load_symbolic(p: &Path) -> Res<SymbolicTree> {
    let t = parse_symbolic(&read(p)?)?;
    validate(&t).map_err(CliError::domain)?;
    Ok(t)
}

fn rational(s: &str) -> Res<Rational> {
    s.trim().parse().map_err(|_| CliError::usage(format!("not a rational: {s:?}")))
}

/// Enumeration cap from `ULTRATREE_SIZE_CAP`, if set.
pub fn size_cap_override() -> Res<Option<usize>> {
    match std::env::var("ULTRATREE_SIZE_CAP") {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if (1..=SIZE_CAP_CEILING).contains(&n) => Ok(Some(n)),
            _ => Err(CliError::usage(format!(
                "ULTRATREE_SIZE_CAP must be an integer between 1 and {SIZE_CAP_CEILING}, got {s:?}"
            ))),
        },
    }
}

fn represent_opts() -> Res<RepresentOpts> {
    Ok(RepresentOpts { cap: size_cap_override()?, ..RepresentOpts::default() })
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON value serializes")
}

fn witness_json(w: &Witness) -> Value {
    let kind = match w {
        Witness::Ray { .. } => "ray",
        Witness::Accumulation { .. } => "accumulation",
        Witness::InfiniteLevelSet { .. } => "infinite_level_set",
        Witness::InfiniteDegree { .. } => "infinite_degree",
    };
    json!({ "kind": kind, "description": w.to_string() })
}

fn judgement_json(j: &Judgement) -> Value {
    json!({ "holds": j.holds, "witness": j.witness.as_ref().map(witness_json) })
}

struct Out<'a> {
    stdout: &'a mut dyn Write,
    json: bool,
}

impl Out<'_> {
    fn line(&mut self, s: impl Display) -> Res<()> {
        writeln!(self.stdout, "{s}").map_err(|e| CliError { kind: "Io".into(), message: e.to_string(), usage: false })
    }

    /// Writes `contents` to `out` if given (reporting the path), else to stdout.
    fn emit(&mut self, out: Option<&Path>, contents: &str) -> Res<()> {
        match out {
            Some(p) => {
                write_file(p, contents)?;
                if self.json {
                    self.line(pretty(&json!({ "wrote": [p.display().to_string()] })))
                } else {
                    self.line(format!("wrote {}", p.display()))
                }
            }
            None => self.line(contents.trim_end()),
        }
    }
}

/// Runs the tool on `argv` (including the program name) and returns the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return if code == 0 { 0 } else { 2 };
        }
    };
    let mut out = Out { stdout, json: cli.json };
    match dispatch(cli.cmd, &mut out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error[{}]: {}", e.kind, e.message);
            if e.usage {
                2
            } else {
                1
            }
        }
    }
}

fn dispatch(cmd: Cmd, out: &mut Out) -> Res<()> {
    match cmd {
        Cmd::Validate(input) => cmd_validate(input, out),
        Cmd::Dist { tree, u, v } => {
            let t = load_tree(&tree)?;
            let d = PathMaxIndex::build(&t).query(&u, &v).map_err(CliError::domain)?;
            if out.json {
                out.line(pretty(&json!({ "u": u, "v": v, "distance": d.to_string() })))
            } else {
                out.line(d)
            }
        }
        Cmd::Matrix { tree, out: file } => {
            let t = load_tree(&tree)?;
            let x = PathMaxIndex::build(&t).all_pairs(MATRIX_CAP).map_err(CliError::domain)?;
            if file.is_none() && !out.json {
                return print_table(&x, out);
            }
            out.emit(file.as_deref(), &space_to_string(&x))
        }
        Cmd::Hull { tree, set, out: file } => {
            let t = load_tree(&tree)?;
            let h = hull(&t, set.iter().map(String::as_str)).map_err(CliError::domain)?;
            let hl = Highlight { set: set.iter().cloned().collect(), ..Highlight::default() };
            let dot = to_dot(&h.tree, &hl);
            match file {
                Some(p) => {
                    let dot_path = p.with_extension("dot");
                    write_file(&p, &tree_to_string(&h.tree))?;
                    write_file(&dot_path, &dot)?;
                    let paths = [p.display().to_string(), dot_path.display().to_string()];
                    if out.json {
                        out.line(pretty(&json!({ "wrote": paths })))
                    } else {
                        out.line(format!("wrote {}\nwrote {}", paths[0], paths[1]))
                    }
                }
                None if out.json => out.line(pretty(&json!({ "hull": TreeJson::of(&h.tree), "dot": dot }))),
                None => {
                    out.line(tree_to_string(&h.tree))?;
                    out.line(dot.trim_end())
                }
            }
        }
        Cmd::AttachPoint { tree, set, v, out: file } => {
            let t = load_tree(&tree)?;
            let rep = attachment_point(&t, set.iter().map(String::as_str), &v).map_err(CliError::domain)?;
            let keep: BTreeSet<&str> = set.iter().map(String::as_str).chain(rep.path.iter().map(String::as_str)).collect();
            let sub = t.restrict(keep).map_err(CliError::domain)?;
            let hl = Highlight {
                set: set.iter().cloned().collect(),
                roots: [rep.root.clone()].into(),
                path: rep.path.clone(),
            };
            let dot = to_dot(&sub, &hl);
            if let Some(p) = file {
                let dot_path = p.with_extension("dot");
                write_file(&p, &tree_to_string(&sub))?;
                write_file(&dot_path, &dot)?;
            }
            if out.json {
                out.line(pretty(&json!({
                    "tooth": rep.tooth, "root": rep.root, "path": rep.path,
                    "subtree": TreeJson::of(&sub), "dot": dot,
                })))
            } else {
                out.line(format!("root {}", rep.root))?;
                out.line(format!("path {}", rep.path.join(" - ")))
            }
        }
        Cmd::Iso { tree } => {
            if tree.len() != 2 {
                return Err(CliError::usage(format!("iso needs exactly two trees, got {}", tree.len())));
            }
            let (a, b) = (load_tree(&tree[0])?, load_tree(&tree[1])?);
            let m = is_isomorphic_labeled(&a, &b);
            if out.json {
                return out.line(pretty(&json!({ "isomorphic": m.is_some(), "map": m })));
            }
            match m {
                None => out.line("not isomorphic"),
                Some(map) => {
                    out.line("isomorphic")?;
                    for (u, v) in map {
                        out.line(format!("  {u} -> {v}"))?;
                    }
                    Ok(())
                }
            }
        }
        Cmd::Classify { symbolic, values } => cmd_classify(&symbolic, &values, out),
        Cmd::Predicates { symbolic } => cmd_predicates(&symbolic, out),
        Cmd::WitnessLabeling { kind, symbolic, out: file } => {
            let t = load_symbolic(&symbolic)?;
            let w = match kind {
                WitnessKind::Compact => compact_labeling_witness(&t),
                WitnessKind::DiscreteTb => discrete_tb_labeling_witness(&t),
            }
            .map_err(CliError::domain)?;
            out.emit(file.as_deref(), &symbolic_to_string(&w))
        }
        Cmd::Truncate { symbolic, budget, out: file } => {
            let t = load_symbolic(&symbolic)?;
            let tr = truncate(&t, budget).map_err(CliError::domain)?;
            out.emit(file.as_deref(), &tree_to_string(&tr.tree))
        }
        Cmd::ConjecturePredicate { space } => {
            let x = load_space(&space)?;
            let c = conjecture_predicate(&x);
            if out.json {
                let ball = c.failing_ball.as_ref().map(|b| {
                    json!({ "center": b.center, "radius": b.radius.to_string(), "members": b.members })
                });
                return out.line(pretty(&json!({ "holds": c.holds, "failing_ball": ball })));
            }
            match c.failing_ball {
                None => out.line("holds"),
                Some(b) => out.line(format!(
                    "fails: ball B({}, {}) = {{{}}}",
                    b.center,
                    b.radius,
                    b.members.join(", ")
                )),
            }
        }
        Cmd::Representable { space, out: file } => {
            let x = load_space(&space)?;
            let rep = representable(&x, &represent_opts()?).map_err(CliError::domain)?;
            if let (Some(p), Some(w)) = (&file, &rep.witness) {
                write_file(p, &tree_to_string(w))?;
            }
            if out.json {
                return out.line(pretty(&json!({
                    "representable": rep.witness.is_some(),
                    "trees_searched": rep.trees_searched,
                    "witness_tree": rep.witness.as_ref().map(TreeJson::of),
                })));
            }
            match rep.witness {
                None => out.line(format!("not representable ({} trees searched)", rep.trees_searched)),
                Some(w) => {
                    out.line("representable")?;
                    if file.is_none() {
                        out.line(tree_to_string(&w))?;
                    }
                    Ok(())
                }
            }
        }
        Cmd::Scan { n, values, workers, out: file } => cmd_scan(n, &values, workers, file.as_deref(), out),
        Cmd::Example { name, out: dir } => cmd_example(name, &dir, out),
        Cmd::ExportDot { tree, symbolic, budget, set, v, out: file } => {
            let t = match (tree, symbolic) {
                (Some(p), None) => load_tree(&p)?,
                (None, Some(p)) => {
                    let s = load_symbolic(&p)?;
                    truncate(&s, budget.unwrap_or(1)).map_err(CliError::domain)?.tree
                }
                _ => return Err(CliError::usage("export-dot needs --tree FILE or --symbolic FILE --budget N")),
            };
            let mut hl = Highlight { set: set.iter().cloned().collect(), ..Highlight::default() };
            if let Some(v) = v {
                let rep = attachment_point(&t, set.iter().map(String::as_str), &v).map_err(CliError::domain)?;
                hl.roots.insert(rep.root);
                hl.path = rep.path;
            }
            out.emit(file.as_deref(), &to_dot(&t, &hl))
        }
    }
}

fn print_table(x: &UltraSpace, out: &mut Out) -> Res<()> {
    let cells: Vec<Vec<String>> = std::iter::once(
        std::iter::once(String::new()).chain(x.points().iter().cloned()).collect(),
    )
    .chain(
        x.points()
            .iter()
            .enumerate()
            .map(|(i, p)| std::iter::once(p.clone()).chain(x.row(i).iter().map(Rational::to_string)).collect()),
    )
    .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        out.line(line.join(" ").trim_end())?;
    }
    Ok(())
}

fn cmd_validate(input: AnyInput, out: &mut Out) -> Res<()> {
    let summary: Value = if let Some(p) = input.tree {
        let t = load_tree(&p)?;
        let nd = t.is_non_degenerate();
        let bad: Vec<String> = nd.violations.iter().map(|(u, v)| format!("{u} -- {v}")).collect();
        json!({ "kind": "tree", "vertices": t.len(), "non_degenerate": nd.holds(), "degenerate_edges": bad })
    } else if let Some(p) = input.symbolic {
        let t = load_symbolic(&p)?;
        json!({ "kind": "symbolic", "description": t.to_string() })
    } else {
        let x = load_space(input.space.as_deref().expect("clap enforces one input"))?;
        json!({ "kind": "space", "points": x.len(), "ultrametric": x.is_proper() })
    };
    if out.json {
        return out.line(pretty(&summary));
    }
    match summary["kind"].as_str() {
        Some("tree") => {
            out.line(format!("valid tree: {} vertices", summary["vertices"]))?;
            out.line(format!("non_degenerate={}", summary["non_degenerate"]))?;
            for e in summary["degenerate_edges"].as_array().into_iter().flatten() {
                out.line(format!("  degenerate edge {}", e.as_str().unwrap_or_default()))?;
            }
            Ok(())
        }
        Some("symbolic") => out.line(format!("valid symbolic tree: {}", summary["description"].as_str().unwrap_or_default())),
        _ => {
            out.line(format!("valid space: {} points", summary["points"]))?;
            out.line(format!("ultrametric={}", summary["ultrametric"]))
        }
    }
}

fn cmd_classify(path: &Path, values: &[String], out: &mut Out) -> Res<()> {
    let t = load_symbolic(path)?;
    let v = classify(&t).map_err(CliError::domain)?;
    let mut levels = Vec::new();
    for s in values {
        let eps = rational(s)?;
        if !eps.is_positive() {
            return Err(CliError::usage(format!("level {s} must be positive")));
        }
        let count = count_geq(&t, &eps).map_err(CliError::domain)?;
        let budget = certificate_budget(&t, &eps).map_err(CliError::domain)?;
        levels.push((eps, count, budget));
    }
    let rows = [
        ("complete", &v.complete),
        ("discrete", &v.discrete),
        ("totally_bounded", &v.totally_bounded),
        ("compact", &v.compact),
    ];
    if out.json {
        let mut m = serde_json::Map::new();
        for (name, j) in rows {
            m.insert(name.into(), judgement_json(j));
        }
        m.insert("discrete_and_tb".into(), json!(v.discrete_and_tb));
        let lv: Vec<Value> = levels
            .iter()
            .map(|(e, c, b)| {
                let count = match c {
                    Count::Finite(n) => json!(n),
                    Count::Infinite => json!("infinite"),
                };
                json!({ "epsilon": e.to_string(), "count": count, "budget": b })
            })
            .collect();
        if !lv.is_empty() {
            m.insert("levels".into(), Value::Array(lv));
        }
        return out.line(pretty(&Value::Object(m)));
    }
    for (name, j) in rows {
        out.line(format!("{name}={}", j.holds))?;
        if let Some(w) = &j.witness {
            out.line(format!("  witness: {w}"))?;
        }
    }
    out.line(format!("discrete_and_tb={}", v.discrete_and_tb))?;
    for (e, c, b) in levels {
        let budget = b.map_or("none".to_string(), |b| b.to_string());
        out.line(format!("count_geq({e})={c} budget={budget}"))?;
    }
    Ok(())
}

fn cmd_predicates(path: &Path, out: &mut Out) -> Res<()> {
    let t = load_symbolic(path)?;
    let f = free_predicates(&t).map_err(CliError::domain)?;
    let iso = isolated_points(&t).map_err(CliError::domain)?;
    if out.json {
        let pts: Vec<Value> = iso
            .iter()
            .map(|p| {
                json!({
                    "vertex": p.vertex.to_string(),
                    "label": p.label.to_string(),
                    "isolated": p.isolated,
                    "approached_by": p.approach_prefix.iter().map(ToString::to_string).collect::<Vec<_>>(),
                })
            })
            .collect();
        return out.line(pretty(&json!({
            "rayless": f.rayless,
            "locally_finite": f.locally_finite,
            "finite": f.finite,
            "has_adjacent_infinite_degree_pair": f.has_adjacent_infinite_degree_pair,
            "countable": f.countable,
            "points": pts,
        })));
    }
    out.line(format!("rayless={}", f.rayless))?;
    out.line(format!("locally_finite={}", f.locally_finite))?;
    out.line(format!("finite={}", f.finite))?;
    out.line(format!("has_adjacent_infinite_degree_pair={}", f.has_adjacent_infinite_degree_pair))?;
    out.line(format!("countable={}", f.countable))?;
    for p in iso {
        let state = if p.isolated { "isolated".to_string() } else {
            let near: Vec<String> = p.approach_prefix.iter().map(ToString::to_string).collect();
            format!("accumulation point of {}, ...", near.join(", "))
        };
        out.line(format!("  {} (l={}): {state}", p.vertex, p.label))?;
    }
    Ok(())
}

fn cmd_scan(n: usize, values: &[String], workers: usize, file: Option<&Path>, out: &mut Out) -> Res<()> {
    let vals = values.iter().map(|s| rational(s)).collect::<Res<Vec<_>>>()?;
    if workers == 0 {
        return Err(CliError::usage("--workers must be at least 1"));
    }
    let opts = represent_opts()?;
    // resume: ids already present in the output file are skipped
    let mut done = BTreeSet::new();
    if let Some(p) = file.filter(|p| p.exists()) {
        for line in read(p)?.lines().filter(|l| !l.trim().is_empty()) {
            let rec: ScanLine = serde_json::from_str(line).map_err(FormatError::from)?;
            done.insert(rec.space_id);
        }
    }
    let report = parallel_scan(n, &vals, &opts, workers, |id| done.contains(id)).map_err(CliError::domain)?;
    let lines: Vec<String> = report.records.iter().map(|r| ScanLine::of(r).to_line()).collect();
    match file {
        Some(p) => {
            let mut f = fs::OpenOptions::new()
                .create(true)
                .append(true)
                .open(p)
                .map_err(|e| CliError { kind: "Io".into(), message: format!("{}: {e}", p.display()), usage: false })?;
            for l in &lines {
                writeln!(f, "{l}").map_err(|e| CliError { kind: "Io".into(), message: e.to_string(), usage: false })?;
            }
        }
        None => {
            for l in &lines {
                out.line(l)?;
            }
        }
    }
    let s = &report.summary;
    let summary = json!({
        "n": n, "spaces": s.spaces, "skipped": done.len(), "predicate_true": s.predicate_true,
        "representable": s.representable, "agreements": s.agreements,
        "disagreements": report.disagreements,
    });
    if file.is_some() {
        if out.json {
            out.line(pretty(&summary))?;
        } else {
            out.line(format!(
                "scanned {} spaces ({} already recorded): predicate {} / representable {}, {} agree, {} disagree",
                s.spaces,
                done.len(),
                s.predicate_true,
                s.representable,
                s.agreements,
                s.disagreements
            ))?;
        }
    }
    Ok(())
}

fn cmd_example(name: ExampleName, dir: &Path, out: &mut Out) -> Res<()> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError { kind: "Io".into(), message: format!("{}: {e}", dir.display()), usage: false })?;
    let files: BTreeMap<&str, String> = match name {
        ExampleName::Fig10 => [("fig10.json", symbolic_to_string(&fig10()))].into(),
        ExampleName::Fig1 => [("fig1.json", symbolic_to_string(&fig1()))].into(),
        ExampleName::StarPath => {
            let (star, path) = star_vs_path();
            [("star.json", tree_to_string(&star)), ("path.json", tree_to_string(&path))].into()
        }
        ExampleName::FourPoint => [("four_point.json", space_to_string(&four_point_space()))].into(),
    };
    let mut written = Vec::new();
    for (f, text) in files {
        let p = dir.join(f);
        write_file(&p, &text)?;
        written.push(p.display().to_string());
    }
    if out.json {
        out.line(pretty(&json!({ "wrote": written })))
    } else {
        written.iter().try_for_each(|p| out.line(format!("wrote {p}")))
    }
}
