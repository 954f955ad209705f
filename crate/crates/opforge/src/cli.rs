//! Command-line surface: enumeration, conversions, calculus, verification
//! suites and homology, with text or JSON output.

pub mod suites;

use std::io::{Read, Write};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::brace_calculus::{decompose_into_atoms, whisker, whiskered_insert};
use crate::error::{OpError, Result};
use crate::grid_paths::{complexity, enumerate_paths, ColourSignature, MarkedLatticePath};
use crate::hochschild::{evaluate, evaluate_whiskered, gerstenhaber_suite};
use crate::homology_engine::{build_window, homology, homology_json, Model};
use crate::lattice_operad::{
    brac_compose, compose, normalize, path_to_surjection, surjection_to_path, Surjection,
};
use crate::simplicial_ops::{
    cosimplicial_coboundary, simplicial_boundary, total_differential, DifferentialContext,
    FormalSum,
};
use crate::tree_calculus::{
    path_to_tree, tree_boundary, tree_coboundary, tree_differential, tree_insert, tree_to_path,
    PlanarTree,
};

#[derive(Debug, Parser)]
#[command(name = "opforge", version, about = "Lattice path, tree and brace operads with exact homology")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiffModel {
    Lat,
    Tree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiffOp {
    Simplicial,
    Cosimplicial,
    Total,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ComposeModel {
    Lat,
    Brac,
    Tree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HomologyModel {
    Brac,
    Nbrac,
    Tree,
    Total,
}

/// Inputs are given as an argument, as `@file`, or on standard input when
/// omitted or `-`. Multi-line inputs are processed line by line.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// List every path of a colour signature `k1,..,kn;l`.
    Enumerate {
        #[arg(long, allow_hyphen_values = true)]
        sig: String,
        /// Complexity bound.
        #[arg(long)]
        c: Option<usize>,
    },
    /// Complexity of each path.
    Complexity { input: Option<String> },
    /// Differential of each path or tree.
    Diff {
        #[arg(long, value_enum, default_value_t = DiffModel::Lat)]
        model: DiffModel,
        #[arg(long, value_enum, default_value_t = DiffOp::Simplicial)]
        op: DiffOp,
        input: Option<String>,
    },
    /// Operadic composition `outer o_i inner`.
    Compose {
        #[arg(long, value_enum, default_value_t = ComposeModel::Lat)]
        model: ComposeModel,
        outer: String,
        slot: usize,
        inner: String,
    },
    /// The projection killing paths with internal points, on a formal sum.
    Normalize { input: Option<String> },
    /// Path of each tree.
    Tree2path { input: Option<String> },
    /// Tree of each path of complexity at most 2.
    Path2tree { input: Option<String> },
    /// Tree differential `d = ∂ - δ`, or one of its parts.
    TreeDiff {
        #[arg(long, value_enum, default_value_t = DiffOp::Total)]
        op: DiffOp,
        input: Option<String>,
    },
    /// Path of each nondegenerate surjection.
    Surj2path { input: Option<String> },
    /// Surjection of each internal-point-free unmarked path.
    Path2surj { input: Option<String> },
    /// Whiskering of an amputated tree up to a leg budget.
    Whisker {
        #[arg(long)]
        budget: usize,
        input: Option<String>,
    },
    /// Decomposition of an amputated tree into generating atoms.
    Decompose { input: Option<String> },
    /// Whiskered insertion of amputated trees.
    BraceCompose {
        outer: String,
        slot: usize,
        inner: String,
    },
    /// Symbolic value of a tree on generic cochains `f1..fn`.
    Eval {
        #[arg(long)]
        tree: String,
        /// Cochain arities, required for amputated trees.
        #[arg(long, value_delimiter = ',')]
        arities: Option<Vec<usize>>,
    },
    /// Residuals of the Gerstenhaber identities.
    Gerstenhaber {
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
    },
    /// Integer homology of a degree window.
    Homology {
        #[arg(long, value_enum)]
        model: HomologyModel,
        #[arg(long, default_value_t = 2)]
        c: usize,
        #[arg(long)]
        n: usize,
        /// Leg count for `tree`, leg bound for `total`.
        #[arg(long, default_value_t = 0)]
        l: usize,
        /// Range `low..high`, inclusive.
        #[arg(long, allow_hyphen_values = true)]
        degrees: String,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(suites::SUITES))]
        suite: String,
        /// Bound on `k1 + .. + kn`.
        #[arg(long)]
        max_k: Option<usize>,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, default_value_t = 300)]
        samples: usize,
        /// Injects a fault into the operation under test.
        #[arg(long, hide = true)]
        mutate: bool,
    },
}

/// Outcome of one command: printed output and exit status.
struct Outcome {
    text: String,
    json: Value,
    status: i32,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome { text, json, status: 0 }
    }
}

fn read_input(input: Option<&str>) -> std::result::Result<String, String> {
    match input {
        None | Some("-") => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| format!("cannot read standard input: {e}"))?;
            Ok(s)
        }
        Some(arg) => match arg.strip_prefix('@') {
            Some(file) => std::fs::read_to_string(file).map_err(|e| format!("cannot read {file}: {e}")),
            None => Ok(arg.to_string()),
        },
    }
}

fn lines(input: &str) -> Vec<(usize, &str)> {
    input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect()
}

fn at_line(line: usize, e: OpError) -> OpError {
    match e {
        OpError::Parse { token, detail, .. } => OpError::Parse { line, token, detail },
        other => other,
    }
}

fn parse_all<T: FromStr<Err = OpError>>(input: &str) -> Result<Vec<T>> {
    lines(input)
        .into_iter()
        .map(|(no, l)| l.parse::<T>().map_err(|e| at_line(no, e)))
        .collect()
}

fn sum_json<B: Ord + Clone + std::fmt::Display>(s: &FormalSum<B>) -> Value {
    Value::Array(
        s.iter()
            .map(|(b, c)| json!({ "coeff": c, "basis": b.to_string() }))
            .collect(),
    )
}

fn per_item<T, R>(items: &[T], f: impl Fn(&T) -> Result<R>, text: impl Fn(&R) -> String, js: impl Fn(&R) -> Value) -> Result<Outcome> {
    let results = items.iter().map(f).collect::<Result<Vec<_>>>()?;
    let t: Vec<String> = results.iter().map(text).collect();
    let j: Vec<Value> = results.iter().map(js).collect();
    let json = if j.len() == 1 { j.into_iter().next().expect("one") } else { Value::Array(j) };
    Ok(Outcome::ok(t.join("\n"), json))
}

fn parse_range(s: &str) -> Result<(i64, i64)> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| OpError::parse(1, format!("degree range `{s}` must be `low..high`")))?;
    let low = a.trim().parse::<i64>().map_err(|_| OpError::parse(1, format!("bad degree `{a}`")))?;
    let high = b.trim().parse::<i64>().map_err(|_| OpError::parse(2, format!("bad degree `{b}`")))?;
    Ok((low, high))
}

fn execute(cmd: &Command) -> Result<Outcome> {
    let input_of = |i: &Option<String>| read_input(i.as_deref()).map_err(|e| OpError::parse(0, e));
    match cmd {
        Command::Enumerate { sig, c } => {
            let sig: ColourSignature = sig.parse()?;
            let paths = enumerate_paths(&sig, *c);
            let t: Vec<String> = paths.iter().map(|p| p.to_string()).collect();
            let j = Value::Array(t.iter().map(|s| Value::from(s.as_str())).collect());
            Ok(Outcome::ok(t.join("\n"), j))
        }
        Command::Complexity { input } => {
            let paths: Vec<MarkedLatticePath> = parse_all(&input_of(input)?)?;
            per_item(&paths, |p| Ok(complexity(p)), |c| c.to_string(), |c| json!(c))
        }
        Command::Diff { model, op, input } => {
            let text = input_of(input)?;
            match model {
                DiffModel::Lat => {
                    let paths: Vec<MarkedLatticePath> = parse_all(&text)?;
                    per_item(
                        &paths,
                        |p| {
                            Ok(match op {
                                DiffOp::Simplicial => simplicial_boundary(p),
                                DiffOp::Cosimplicial => cosimplicial_coboundary(p),
                                DiffOp::Total => total_differential(
                                    &FormalSum::single(p.clone()),
                                    DifferentialContext::Lattice,
                                ),
                            })
                        },
                        |s| s.to_string(),
                        sum_json,
                    )
                }
                DiffModel::Tree => {
                    let trees: Vec<PlanarTree> = parse_all(&text)?;
                    per_item(&trees, |t| Ok(tree_op(t, *op)), |s| s.to_string(), sum_json)
                }
            }
        }
        Command::Compose { model, outer, slot, inner } => match model {
            ComposeModel::Lat => {
                let p = compose(&outer.parse()?, *slot, &inner.parse()?)?;
                Ok(Outcome::ok(p.to_string(), json!(p.to_string())))
            }
            ComposeModel::Brac => {
                let r = brac_compose(&outer.parse()?, *slot, &inner.parse()?)?;
                let flag = if r.signed { "signed" } else { "unsigned" };
                Ok(Outcome::ok(
                    format!("{}\n{flag}", r.sum),
                    json!({ "sum": sum_json(&r.sum), "signed": r.signed }),
                ))
            }
            ComposeModel::Tree => {
                let t = tree_insert(&outer.parse()?, *slot, &inner.parse()?)?;
                Ok(Outcome::ok(t.to_string(), json!(t.to_string())))
            }
        },
        Command::Normalize { input } => {
            let text = input_of(input)?;
            let sums: Vec<FormalSum<MarkedLatticePath>> = parse_all(&text)?;
            per_item(&sums, |s| Ok(normalize(s)), |s| s.to_string(), sum_json)
        }
        Command::Tree2path { input } => {
            let trees: Vec<PlanarTree> = parse_all(&input_of(input)?)?;
            per_item(&trees, |t| Ok(tree_to_path(t)), |p| p.to_string(), |p| json!(p.to_string()))
        }
        Command::Path2tree { input } => {
            let paths: Vec<MarkedLatticePath> = parse_all(&input_of(input)?)?;
            per_item(&paths, path_to_tree, |t| t.to_string(), |t| json!(t.to_string()))
        }
        Command::TreeDiff { op, input } => {
            let trees: Vec<PlanarTree> = parse_all(&input_of(input)?)?;
            per_item(&trees, |t| Ok(tree_op(t, *op)), |s| s.to_string(), sum_json)
        }
        Command::Surj2path { input } => {
            let us: Vec<Surjection> = parse_all(&input_of(input)?)?;
            per_item(&us, surjection_to_path, |p| p.to_string(), |p| json!(p.to_string()))
        }
        Command::Path2surj { input } => {
            let paths: Vec<MarkedLatticePath> = parse_all(&input_of(input)?)?;
            per_item(&paths, path_to_surjection, |u| u.to_string(), |u| json!(u.to_string()))
        }
        Command::Whisker { budget, input } => {
            let trees: Vec<PlanarTree> = parse_all(&input_of(input)?)?;
            per_item(&trees, |t| whisker(t, *budget), |s| s.to_string(), sum_json)
        }
        Command::Decompose { input } => {
            let trees: Vec<PlanarTree> = parse_all(&input_of(input)?)?;
            per_item(
                &trees,
                decompose_into_atoms,
                |d| format!("{}*{}", d.sign, d.expr),
                |d| json!({ "sign": d.sign, "expr": d.expr.to_string() }),
            )
        }
        Command::BraceCompose { outer, slot, inner } => {
            let s = whiskered_insert(&outer.parse()?, *slot, &inner.parse()?)?;
            Ok(Outcome::ok(s.to_string(), sum_json(&s)))
        }
        Command::Eval { tree, arities } => {
            let t: PlanarTree = tree.parse()?;
            let value = if t.leg_count() == 0 && t.white_count() > 0 {
                let ar = arities.clone().ok_or_else(|| {
                    OpError::invariant("cochain arities", "an amputated tree needs --arities")
                })?;
                evaluate_whiskered(&t, &ar)?
            } else {
                if let Some(ar) = arities {
                    if *ar != t.arities() {
                        return Err(OpError::Mismatch(format!(
                            "arities {ar:?} differ from the tree's {:?}",
                            t.arities()
                        )));
                    }
                }
                evaluate(&t)
            };
            Ok(Outcome::ok(value.to_string(), json!(value.to_string())))
        }
        Command::Gerstenhaber { max_arity } => {
            let checks = gerstenhaber_suite(*max_arity);
            let failed = checks.iter().filter(|c| !c.holds()).count();
            let t: Vec<String> = checks
                .iter()
                .map(|c| format!("{} {:?} residual {}", c.name, c.arities, c.residual))
                .collect();
            let j: Vec<Value> = checks
                .iter()
                .map(|c| json!({ "identity": c.name, "arities": c.arities, "residual": c.residual.to_string() }))
                .collect();
            let summary = format!("{} of {} identities cancel", checks.len() - failed, checks.len());
            Ok(Outcome {
                text: format!("{}\n{summary}", t.join("\n")),
                json: Value::Array(j),
                status: if failed == 0 { 0 } else { 1 },
            })
        }
        Command::Homology { model, c, n, l, degrees } => {
            let (low, high) = parse_range(degrees)?;
            let model = match model {
                HomologyModel::Brac => Model::Brac { c: *c, n: *n },
                HomologyModel::Nbrac => Model::NBrac { c: *c, n: *n },
                HomologyModel::Tree => Model::TreeColumn { n: *n, l: *l },
                HomologyModel::Total => Model::Total { c: *c, n: *n, max_l: *l },
            };
            let groups = homology(&build_window(model, low, high)?);
            let t: Vec<String> = groups.iter().map(|g| g.to_string()).collect();
            Ok(Outcome::ok(t.join("\n"), homology_json(&groups)))
        }
        Command::Verify { suite, max_k, seed, samples, mutate } => {
            let opts = suites::SuiteOptions {
                max_k: *max_k,
                seed: *seed,
                samples: *samples,
                mutate: *mutate,
            };
            let report = suites::run_suite(suite, &opts)?;
            Ok(Outcome {
                text: report.to_string(),
                json: report.to_json(),
                status: if report.passed { 0 } else { 1 },
            })
        }
    }
}

fn tree_op(t: &PlanarTree, op: DiffOp) -> FormalSum<PlanarTree> {
    match op {
        DiffOp::Simplicial => tree_boundary(t),
        DiffOp::Cosimplicial => tree_coboundary(t),
        DiffOp::Total => tree_differential(t),
    }
}

fn configure_threads() -> std::result::Result<(), String> {
    if let Ok(v) = std::env::var("OPFORGE_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| format!("OPFORGE_THREADS must be a positive integer, got `{v}`"))?;
        if n == 0 {
            return Err("OPFORGE_THREADS must be positive".into());
        }
        // A pool built earlier in the same process is kept.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Runs the CLI on `args` (including the program name), writing results to
/// `out` and diagnostics to `err`. Returns the exit status: 0 on success, 1
/// on a domain error, 2 on a usage or parse error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let status = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if status == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return status;
        }
    };
    if let Err(msg) = configure_threads() {
        let _ = writeln!(err, "error: {msg}");
        return 2;
    }
    match execute(&cli.command) {
        Ok(o) => {
            let body = match cli.format {
                Format::Text => o.text,
                Format::Json => serde_json::to_string_pretty(&o.json).expect("serializable"),
            };
            let _ = writeln!(out, "{body}");
            let _ = out.flush();
            o.status
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_parse() {
                2
            } else {
                1
            }
        }
    }
}
