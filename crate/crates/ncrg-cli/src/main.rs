//! Command-line front end: graph enumeration, amplitudes, flows, verification
//! suites, transforms, matrix-image checks, renormalization and the cubic
//! odd-pairing demo. Results are written to standard output as JSON.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on input errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use ncrg::feynman::{amplitude, weight};
use ncrg::graph_core::{classify, from_json, GraphJson};
use ncrg::graph_enum::{enumerate_profile_capped, enumerate_ribbon, MultiDegree};
use ncrg::io::{
    comm_interaction_to_json, family_from_json, interaction_from_json, interaction_to_json,
    propagator_from_json, tensor_to_json, theory_from_json, theory_to_json, TextScalar,
};
use ncrg::renorm::{canonical_family, check_rge, renormalized, EpsFunction, RenormScheme, Var};
use ncrg::rgflow::{check_propagator, flow_comm, flow_nc};
use ncrg::scalar::{parse_rational, Rational};
use ncrg::tensor_algebra::{partitions, GradedSpace, NcInteraction, Tensor, Theory, Truncation};
use ncrg::transforms::{
    demo_cs, lqt_vanishing_check, morita, sigma, tensor_theory, FrobeniusAlgebra,
};
use ncrg::verify::{run_suites, Suite, VerifyConfig};
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "ncrg", version, about = "Exact noncommutative renormalization group flow on stable ribbon graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the isomorphism classes of connected stable ribbon graphs of a multidegree.
    Enumerate(EnumerateArgs),
    /// Feynman amplitude and weight of one ribbon graph.
    Amplitude(AmplitudeArgs),
    /// Flow an interaction along a propagator.
    Flow(FlowArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Commutative projection or extension by a matrix algebra.
    Transform(TransformArgs),
    /// Matrix images of an interaction and the joint-injectivity certificate.
    ///
    /// Without an interaction file, fails unless the images of the box cells are
    /// jointly injective; with one, fails when every image of a nonzero
    /// interaction vanishes although injectivity is certified.
    LqtCheck(LqtArgs),
    /// Counterterms and renormalized effective interaction.
    Renorm(RenormArgs),
    /// Compare the matrix images of the cubic odd-pairing interaction with the trace cubic.
    DemoCs(DemoArgs),
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    /// Genus.
    #[arg(long)]
    genus: u32,
    /// Reduced boundary.
    #[arg(long)]
    boundary: u32,
    /// Number of cycles of the leg decomposition.
    #[arg(long)]
    cycles: u32,
    /// Number of legs.
    #[arg(long)]
    legs: u32,
    /// Keep only trees.
    #[arg(long, conflicts_with = "p_trees")]
    trees: bool,
    /// Keep only p-trees.
    #[arg(long, value_name = "P")]
    p_trees: Option<u32>,
    /// Keep only graphs with at most this many half-edges.
    #[arg(long)]
    max_half_edges: Option<usize>,
}

#[derive(Debug, Args)]
struct Inputs {
    /// Theory file.
    #[arg(long)]
    theory: PathBuf,
    /// Interaction file.
    #[arg(long)]
    interaction: PathBuf,
}

#[derive(Debug, Args)]
struct AmplitudeArgs {
    /// Graph file.
    #[arg(long)]
    graph: PathBuf,
    #[command(flatten)]
    inputs: Inputs,
    /// Propagator file; the inverse pairing when absent.
    #[arg(long)]
    propagator: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FlowArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Propagator file.
    #[arg(long)]
    propagator: PathBuf,
    /// Loop-number bound; the interaction's own bound when absent.
    #[arg(long)]
    nmax: Option<u32>,
    /// Leg bound at the top loop number.
    #[arg(long)]
    lmax: Option<u32>,
    /// Flow the commutative projection instead.
    #[arg(long)]
    commutative: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Suite: graphs, group-action, tree-square, order-formula, sigma, otft,
    /// counterterms, levels, lqt, or all.
    suite: String,
    /// Loop-number bound of the random interactions and counterterms.
    #[arg(long, default_value_t = 2)]
    nmax: u32,
    /// Leg bound at the top loop number.
    #[arg(long, default_value_t = 5)]
    lmax: u32,
    /// Base random seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of random interactions.
    #[arg(long, default_value_t = 20)]
    samples: usize,
    /// Largest field-space dimension.
    #[arg(long, default_value_t = 3)]
    max_dim: usize,
    /// Largest number of half-edges in the graph corpus.
    #[arg(long, default_value_t = 10)]
    max_half_edges: usize,
    /// Print a markdown table instead of JSON.
    #[arg(long)]
    markdown: bool,
}

#[derive(Debug, Args)]
struct TransformArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Commutative projection.
    #[arg(long, conflicts_with = "morita", required_unless_present = "morita")]
    sigma: bool,
    /// Extension by a Frobenius algebra: matN, dual or trivial.
    #[arg(long, value_name = "ALGEBRA")]
    morita: Option<String>,
}

#[derive(Debug, Args)]
struct LqtArgs {
    /// Largest matrix size.
    #[arg(long, default_value_t = 2)]
    nmax: usize,
    /// Theory file; a one-dimensional even space when absent.
    #[arg(long, requires = "interaction")]
    theory: Option<PathBuf>,
    /// Interaction file; the zero interaction when absent.
    #[arg(long, requires = "theory")]
    interaction: Option<PathBuf>,
    /// Loop-number bound of the box, without an interaction file.
    #[arg(long, default_value_t = 1)]
    box_nmax: u32,
    /// Leg bound of the box, without an interaction file.
    #[arg(long, default_value_t = 4)]
    box_lmax: u32,
}

#[derive(Debug, Args)]
struct RenormArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Family file; the canonical family of the theory when absent.
    #[arg(long)]
    family: Option<PathBuf>,
    /// Renormalization scheme.
    #[arg(long, default_value = "default")]
    scheme: String,
    /// Loop-number bound; the interaction's own bound when absent.
    #[arg(long)]
    nmax: Option<u32>,
    /// Leg bound at the top loop number.
    #[arg(long)]
    lmax: Option<u32>,
    /// Also evaluate the renormalized interaction at this scale; the
    /// coefficients must then be free of logarithms and exponentials in L.
    #[arg(long, value_name = "L")]
    at: Option<String>,
}

#[derive(Debug, Args)]
struct DemoArgs {
    /// Largest matrix size.
    #[arg(long = "N", default_value_t = 3)]
    n: usize,
}

/// An error in the user's input, reported with exit code 2.
#[derive(Debug)]
struct InputError(anyhow::Error);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for InputError {}

fn input<T>(r: anyhow::Result<T>) -> anyhow::Result<T> {
    r.map_err(|e| InputError(e).into())
}

fn read(path: &Path) -> anyhow::Result<String> {
    input(std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display())))
}

fn load_theory(path: &Path) -> anyhow::Result<Theory> {
    let s = read(path)?;
    input(theory_from_json(&s).with_context(|| format!("in {}", path.display())))
}

fn load_interaction<S: TextScalar>(path: &Path, space: &Arc<GradedSpace>) -> anyhow::Result<NcInteraction<S>> {
    let s = read(path)?;
    input(interaction_from_json(&s, space).with_context(|| format!("in {}", path.display())))
}

fn load_propagator(path: &Path, space: &GradedSpace) -> anyhow::Result<Tensor<Rational>> {
    let s = read(path)?;
    let p = input(propagator_from_json(&s, space).with_context(|| format!("in {}", path.display())))?;
    input(check_propagator(space, &p).with_context(|| format!("in {}", path.display())))?;
    Ok(p)
}

fn retruncate<S: ncrg::Scalar>(
    i: NcInteraction<S>,
    nmax: Option<u32>,
    lmax: Option<u32>,
) -> NcInteraction<S> {
    if nmax.is_none() && lmax.is_none() {
        return i;
    }
    let t = i.truncation();
    i.with_truncation(Truncation::new(nmax.unwrap_or(t.nmax), lmax.unwrap_or(t.lmax)))
}

fn print(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON output"));
}

fn enumerate(a: &EnumerateArgs) -> anyhow::Result<bool> {
    let classes = match a.max_half_edges {
        Some(cap) => {
            let mut out: Vec<_> = partitions(a.legs, a.cycles)
                .iter()
                .flat_map(|r| enumerate_profile_capped(a.genus, a.boundary, r, cap))
                .collect();
            out.sort_by(|x, y| x.key.cmp(&y.key));
            out
        }
        None => enumerate_ribbon(MultiDegree::new(a.genus, a.boundary, a.cycles, a.legs)),
    };
    for c in classes {
        let cls = classify(&c.graph);
        let keep = if a.trees {
            cls.is_tree
        } else if let Some(p) = a.p_trees {
            cls.is_p_tree(p)
        } else {
            true
        };
        if keep {
            let line = json!({"automorphisms": c.automorphisms, "graph": GraphJson::from(&c.graph)});
            println!("{}", serde_json::to_string(&line).expect("JSON output"));
        }
    }
    Ok(true)
}

fn amplitude_cmd(a: &AmplitudeArgs) -> anyhow::Result<bool> {
    let theory = load_theory(&a.inputs.theory)?;
    let space = theory.space.clone();
    let i: NcInteraction<Rational> = load_interaction(&a.inputs.interaction, &space)?;
    let graph = input(from_json(&read(&a.graph)?).map_err(anyhow::Error::from))?;
    let p = match &a.propagator {
        Some(path) => load_propagator(path, &space)?,
        None => {
            let p = input(theory.inverse_pairing_tensor().map_err(anyhow::Error::from))?;
            input(check_propagator(&space, &p).context("the inverse pairing is not a propagator"))?;
            p
        }
    };
    let amp = amplitude(&graph, &i, &p)?;
    let mut out = json!({
        "legs": amp.legs,
        "amplitude": tensor_to_json(&space, &amp.tensor),
    });
    if graph.is_connected() {
        let w = weight(&graph, &i, &p)?;
        out["cell"] = json!([w.cell.i, w.cell.j, w.cell.k, w.cell.l]);
        out["r"] = json!(w.r);
        out["weight"] = tensor_to_json(&space, &w.tensor);
    }
    print(&out);
    Ok(true)
}

fn flow_cmd(a: &FlowArgs) -> anyhow::Result<bool> {
    let theory = load_theory(&a.inputs.theory)?;
    let space = theory.space.clone();
    let i: NcInteraction<Rational> = load_interaction(&a.inputs.interaction, &space)?;
    let i = retruncate(i, a.nmax, a.lmax);
    let p = load_propagator(&a.propagator, &space)?;
    if a.commutative {
        print(&comm_interaction_to_json(&flow_comm(&sigma(&i), &p)?));
    } else {
        print(&interaction_to_json(&flow_nc(&i, &p)?));
    }
    Ok(true)
}

fn verify_cmd(a: &VerifyArgs) -> anyhow::Result<bool> {
    let suites = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![input(Suite::by_name(&a.suite).map_err(anyhow::Error::from))?]
    };
    if a.max_dim == 0 {
        input::<()>(Err(anyhow::anyhow!("--max-dim must be positive")))?;
    }
    let cfg = VerifyConfig {
        trunc: Truncation::new(a.nmax, a.lmax),
        seed: a.seed,
        samples: a.samples,
        max_dim: a.max_dim,
        max_half_edges: a.max_half_edges,
    };
    let checks = run_suites(&suites, &cfg);
    let passed = checks.iter().all(|c| c.passed);
    if a.markdown {
        println!("| suite | check | result | detail |");
        println!("|---|---|---|---|");
        for c in &checks {
            let result = if c.passed { "pass" } else { "FAIL" };
            println!("| {} | {} | {result} | {} |", c.suite, c.name, c.detail);
        }
    } else {
        let rows: Vec<Value> = checks
            .iter()
            .map(|c| {
                json!({
                    "suite": c.suite.name(),
                    "check": c.name,
                    "passed": c.passed,
                    "detail": c.detail,
                })
            })
            .collect();
        print(&json!({"passed": passed, "checks": rows}));
    }
    Ok(passed)
}

fn transform_cmd(a: &TransformArgs) -> anyhow::Result<bool> {
    let theory = load_theory(&a.inputs.theory)?;
    let i: NcInteraction<Rational> = load_interaction(&a.inputs.interaction, &theory.space)?;
    match &a.morita {
        None => print(&comm_interaction_to_json(&sigma(&i))),
        Some(name) => {
            let alg = input(FrobeniusAlgebra::by_name(name).map_err(anyhow::Error::from))?;
            let extended = input(tensor_theory(&theory, &alg).map_err(anyhow::Error::from))?;
            print(&json!({
                "theory": theory_to_json(&extended),
                "interaction": interaction_to_json(&morita(&i, &alg)),
            }));
        }
    }
    Ok(true)
}

fn lqt_cmd(a: &LqtArgs) -> anyhow::Result<bool> {
    let i: NcInteraction<Rational> = match (&a.theory, &a.interaction) {
        (Some(t), Some(path)) => load_interaction(path, &load_theory(t)?.space)?,
        _ => NcInteraction::new(
            Arc::new(GradedSpace::with_degrees(&[0])),
            Truncation::new(a.box_nmax, a.box_lmax),
        ),
    };
    if a.nmax == 0 {
        input::<()>(Err(anyhow::anyhow!("--nmax must be positive")))?;
    }
    let report = lqt_vanishing_check(&i, a.nmax);
    let consistent = !(report.converse_holds() && report.all_vanish() && !i.is_zero());
    let vanishing: Vec<Value> = report
        .vanishing
        .iter()
        .map(|&(n, v)| json!({"N": n, "image_vanishes": v}))
        .collect();
    print(&json!({
        "images": vanishing,
        "basis_size": report.basis_size,
        "rank": report.rank,
        "kernel_dimension": report.kernel_dimension(),
        "max_words": report.max_words,
        "injective_certificate": report.converse_holds(),
        "interaction_is_zero": i.is_zero(),
    }));
    Ok(consistent && (a.interaction.is_some() || report.converse_holds()))
}

fn renorm_cmd(a: &RenormArgs) -> anyhow::Result<bool> {
    let theory = load_theory(&a.inputs.theory)?;
    let space = theory.space.clone();
    let i: NcInteraction<EpsFunction> = load_interaction(&a.inputs.interaction, &space)?;
    let i = retruncate(i, a.nmax, a.lmax);
    let scheme = input(RenormScheme::by_name(&a.scheme).map_err(anyhow::Error::from))?;
    let family = match &a.family {
        Some(path) => input(family_from_json(&read(path)?, &theory).with_context(|| format!("in {}", path.display())))?,
        None => input(canonical_family(&theory).context("building the canonical family"))?,
    };
    let at = a
        .at
        .as_deref()
        .map(|s| parse_rational(s).with_context(|| format!("--at: not a rational number: {s:?}")))
        .transpose();
    let at = input(at)?;
    let r = renormalized(&i, &family, &scheme)?;
    let rge = check_rge(&r.theory, &family)?;
    let stages: Vec<Value> = r
        .counterterms
        .stages
        .iter()
        .map(|c| json!([c.i, c.j, c.k, c.l]))
        .collect();
    let mut out = json!({
        "stages": stages,
        "counterterms": interaction_to_json(&r.counterterms.interaction),
        "renormalized": interaction_to_json(&r.theory),
        "rge_holds": rge.is_none(),
    });
    if let Some(c) = rge {
        out["rge_counterexample"] = json!([c.i, c.j, c.k, c.l]);
    }
    if let Some(l) = at {
        if l <= Rational::from_integer(0.into()) {
            input::<()>(Err(anyhow::anyhow!("--at must be positive")))?;
        }
        for (_, data) in r.theory.cells() {
            for (_, f) in data.values().flat_map(|t| t.iter()) {
                input(f.substitute(Var::L, &l).context("--at"))?;
            }
        }
        let value = r
            .theory
            .map(|t| t.map(|f| f.substitute(Var::L, &l).expect("substitution checked above")));
        out["at"] = json!(a.at);
        out["value"] = interaction_to_json(&value);
    }
    print(&out);
    Ok(rge.is_none())
}

fn demo_cmd(a: &DemoArgs) -> anyhow::Result<bool> {
    if a.n == 0 {
        input::<()>(Err(anyhow::anyhow!("--N must be positive")))?;
    }
    let reports = demo_cs(a.n)?;
    let rows: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "N": r.n,
                "cells_compared": r.cells_compared,
                "matches": r.matches(),
                "image_nonzero": r.nonzero,
                "mismatched": r.mismatched,
            })
        })
        .collect();
    let passed = reports.iter().all(|r| r.matches());
    print(&json!({"passed": passed, "reports": rows}));
    Ok(passed)
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    match &cli.command {
        Command::Enumerate(a) => enumerate(a),
        Command::Amplitude(a) => amplitude_cmd(a),
        Command::Flow(a) => flow_cmd(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Transform(a) => transform_cmd(a),
        Command::LqtCheck(a) => lqt_cmd(a),
        Command::Renorm(a) => renorm_cmd(a),
        Command::DemoCs(a) => demo_cmd(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let input_error = e.downcast_ref::<InputError>().is_some()
                || matches!(
                    e.downcast_ref::<ncrg::Error>(),
                    Some(ncrg::Error::Parse(_) | ncrg::Error::InvalidInteraction(_))
                );
            ExitCode::from(if input_error { 2 } else { 1 })
        }
    }
}
