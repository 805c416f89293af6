//! Argument parsing and command dispatch.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use dualgraph::chain::standardize_chain_graph;
use dualgraph::fibration::validate_fiber;
use dualgraph::lattice::{definiteness, smith_invariants};
use dualgraph::moves::{blow_down, blow_up_edge, blow_up_free, snc_minimalize};
use dualgraph::pipeline::build_pencil;
use dualgraph::resolution::{
    completion_checks, infinity_checks, local_checks, resolve_at_infinity, resolve_cusp_local,
};
use dualgraph::{
    build_completion, certify, discriminant, enumerate_fibers, euler_open, q_acyclicity_relation, Check, CuspPair,
    MoveLog, VertexId, WeightedGraph,
};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::certificate::{check_lines, Certificate};
use crate::dsl::{parse_document, print_graph, GraphDocument};
use crate::render::{dot, dot_clusters, Cluster};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Stage {
    Local,
    Infinity,
    Completion,
}

#[derive(Debug, Parser)]
#[command(name = "dualgraph", version, about = "Exact calculus on weighted dual graphs")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the output to PATH instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Recorded in the certificate input.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Discriminant of the graph or of a selection.
    Disc {
        file: PathBuf,
        /// Vertex ids or role names, comma separated.
        #[arg(long, value_delimiter = ',')]
        sub: Option<Vec<String>>,
    },
    /// Contracts (-1)-curves until none is contractible.
    Minimalize {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        protect: Vec<String>,
    },
    /// Brings a chain to a standard form.
    Standardize { file: PathBuf },
    /// Blows up a general point of a vertex or an intersection point.
    Blowup {
        file: PathBuf,
        #[arg(long, conflicts_with = "edge", required_unless_present = "edge")]
        vertex: Option<u32>,
        #[arg(long, value_parser = parse_edge, value_name = "ID,ID")]
        edge: Option<(u32, u32)>,
    },
    /// Contracts a (-1)-curve.
    Blowdown {
        file: PathBuf,
        #[arg(long)]
        vertex: u32,
    },
    /// Enumerates fibers with at most N components.
    Fibers {
        #[arg(long, value_name = "N")]
        max: usize,
        #[arg(long)]
        validate: bool,
    },
    /// Resolves the curve x^n = y^m.
    Resolve {
        n: u64,
        m: u64,
        #[arg(long, value_enum)]
        stage: Stage,
    },
    /// Certifies the fibration data of the curve x^n = y^m.
    VerifyTheorem {
        #[arg(required_unless_present = "range")]
        n: Option<u64>,
        #[arg(required_unless_present = "range")]
        m: Option<u64>,
        /// All coprime pairs with A <= m < n <= B.
        #[arg(long, num_args = 2, value_names = ["A", "B"], conflicts_with_all = ["n", "m"])]
        range: Option<Vec<u64>>,
    },
    /// Invariant factors of the intersection form.
    Homology {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        sub: Option<Vec<String>>,
    },
    /// Tests |d| = d_e h^2 for an integer h.
    CheckAcyclic {
        #[arg(long, allow_negative_numbers = true)]
        d: BigInt,
        #[arg(long, allow_negative_numbers = true)]
        de: BigInt,
    },
    /// Euler characteristic of the complement of the graph.
    Euler {
        file: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        rho: i64,
    },
}

fn parse_edge(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or("expected ID,ID")?;
    let a = a.trim().parse().map_err(|_| format!("invalid vertex id `{a}`"))?;
    let b = b.trim().parse().map_err(|_| format!("invalid vertex id `{b}`"))?;
    Ok((a, b))
}

/// Result of running the program: exit code and the two streams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr,
        }
    }
}

/// Input problems: unreadable files, bad documents, unknown selections.
struct UsageError(String);

/// What a command produced, before formatting.
struct Report {
    input: Value,
    checks: Vec<Check>,
    moves: MoveLog,
    result: Value,
    error: Option<String>,
    text: String,
    dot: Option<String>,
}

impl Report {
    fn new(input: Value) -> Self {
        Report {
            input,
            checks: Vec::new(),
            moves: MoveLog::new(),
            result: Value::Null,
            error: None,
            text: String::new(),
            dot: None,
        }
    }

    fn failed(input: Value, err: dualgraph::Error) -> Self {
        let mut r = Report::new(input);
        r.error = Some(err.to_string());
        r
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn load(path: &Path) -> Result<GraphDocument, UsageError> {
    let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn file_input(doc: &GraphDocument) -> Value {
    json!({ "graph": to_value(&doc.graph) })
}

/// Resolves ids and role names to vertices of the document.
fn selection(doc: &GraphDocument, toks: &[String]) -> Result<Vec<VertexId>, UsageError> {
    let mut out = Vec::new();
    for tok in toks {
        let tok = tok.trim();
        if let Ok(id) = tok.parse::<u32>() {
            let v = VertexId(id);
            if !doc.graph.contains(v) {
                return Err(UsageError(format!("unknown vertex {id}")));
            }
            out.push(v);
        } else if let Some(ids) = doc.roles.get(tok) {
            out.extend(ids.iter().copied());
        } else {
            return Err(UsageError(format!("`{tok}` is neither a vertex id nor a role")));
        }
    }
    let mut seen = BTreeSet::new();
    out.retain(|v| seen.insert(*v));
    Ok(out)
}

fn selection_or_all(doc: &GraphDocument, toks: &Option<Vec<String>>) -> Result<Vec<VertexId>, UsageError> {
    match toks {
        Some(t) => selection(doc, t),
        None => Ok(doc.graph.vertices().collect()),
    }
}

fn ids(vs: &[VertexId]) -> Vec<u32> {
    vs.iter().map(|v| v.0).collect()
}

fn graph_report(input: Value, g: &WeightedGraph, moves: MoveLog) -> Report {
    let mut r = Report::new(input);
    r.result = json!({ "graph": to_value(g) });
    r.text = print_graph(g);
    r.dot = Some(dot(g, None));
    r.moves = moves;
    r
}

fn disc(doc: &GraphDocument, sub: &Option<Vec<String>>) -> Result<Report, UsageError> {
    let vs = selection_or_all(doc, sub)?;
    let s = doc.graph.sub(vs.iter().copied()).expect("selection is known");
    let d = discriminant(&s);
    let mut input = file_input(doc);
    input["selection"] = json!(ids(&vs));
    let mut r = Report::new(input);
    r.result = json!({ "discriminant": d.to_string(), "definiteness": to_value(&definiteness(&s)) });
    r.text = format!("{d}\n");
    r.dot = Some(dot(&s.to_graph(), None));
    Ok(r)
}

fn minimalize(doc: &GraphDocument, protect: &[String]) -> Result<Report, UsageError> {
    let keep: BTreeSet<VertexId> = selection(doc, protect)?.into_iter().collect();
    let (g, log) = snc_minimalize(&doc.graph, &keep);
    let mut input = file_input(doc);
    input["protect"] = json!(keep.iter().map(|v| v.0).collect::<Vec<_>>());
    let mut r = graph_report(input, &g, log);
    r.checks.push(Check::eq(
        "discriminant unchanged",
        discriminant(&doc.graph.whole()),
        discriminant(&g.whole()),
    ));
    Ok(r)
}

fn standardize(doc: &GraphDocument) -> Report {
    let input = file_input(doc);
    match standardize_chain_graph(&doc.graph) {
        Ok(sc) => {
            let mut r = graph_report(input, &sc.graph, sc.log.clone());
            r.checks.push(Check::eq(
                "discriminant unchanged",
                discriminant(&doc.graph.whole()),
                discriminant(&sc.graph.whole()),
            ));
            r.checks.push(Check::holds("standard", "true", sc.chain.is_standard()));
            r.result["chain"] = to_value(&sc.chain);
            r.result["order"] = json!(ids(&sc.order));
            r.text = format!("{}\n{}", sc.chain, r.text);
            r
        }
        Err(e) => Report::failed(input, e),
    }
}

fn single_move(doc: &GraphDocument, input: Value, m: dualgraph::Result<(WeightedGraph, dualgraph::Move)>) -> Report {
    match m {
        Ok((g, mv)) => {
            let mut log = MoveLog::new();
            log.push(mv);
            let mut r = graph_report(input, &g, log.clone());
            r.checks.push(Check::holds(
                "move replays",
                "true",
                log.replay(&doc.graph).as_ref() == Ok(&g),
            ));
            r
        }
        Err(e) => Report::failed(input, e),
    }
}

fn fibers(max: usize, validate: bool) -> Report {
    let all = enumerate_fibers(max);
    let mut r = Report::new(json!({ "max": max, "validate": validate }));
    let counts: Vec<usize> = (1..=max).map(|k| all.iter().filter(|f| f.len() == k).count()).collect();
    let mut records = Vec::new();
    let mut violations = Vec::new();
    for f in &all {
        let mut rec = json!({
            "canonical": f.canonical_form(),
            "graph": to_value(&f.graph),
            "multiplicity": to_value(&f.multiplicity),
        });
        if validate {
            let report = validate_fiber(f);
            if !report.passes() {
                violations.push(json!({ "canonical": f.canonical_form(), "report": to_value(&report) }));
            }
            rec["violations"] = json!(report.violations());
        }
        records.push(rec);
    }
    r.text = format!("fibers: {}\ncounts: {:?}\n", all.len(), counts);
    if validate {
        r.text.push_str(&format!("violations: {}\n", violations.len()));
        r.checks.push(Check::eq("fibers with violations", 0, violations.len()));
    }
    r.result = json!({
        "fibers": all.len(),
        "counts": counts,
        "violations": violations.len(),
        "list": records,
        "failing": violations,
    });
    let parts: Vec<Cluster<'_>> = all
        .iter()
        .map(|f| (f.canonical_form(), &f.graph, Some(&f.multiplicity)))
        .collect();
    r.dot = Some(dot_clusters(&parts));
    r
}

fn pair(n: u64, m: u64) -> Result<CuspPair, dualgraph::Error> {
    CuspPair::new(n, m)
}

fn resolve(n: u64, m: u64, stage: Stage) -> Report {
    let stage_name = format!("{stage:?}").to_lowercase();
    let input = json!({ "n": n, "m": m, "stage": stage_name });
    let p = match pair(n, m) {
        Ok(p) => p,
        Err(e) => return Report::failed(input, e),
    };
    let mut r = Report::new(input);
    let (g, checks, moves, result) = match stage {
        Stage::Local => {
            let res = resolve_cusp_local(p);
            (res.graph.clone(), local_checks(&res), res.log.clone(), to_value(&res))
        }
        Stage::Infinity => {
            let res = resolve_at_infinity(p);
            (
                res.graph.clone(),
                infinity_checks(&res),
                res.log.clone(),
                to_value(&res),
            )
        }
        Stage::Completion => {
            let model = build_completion(p);
            (
                model.graph.clone(),
                completion_checks(&model),
                model.history.clone(),
                to_value(&model),
            )
        }
    };
    r.text = print_graph(&g);
    r.dot = Some(dot(&g, None));
    r.checks = checks;
    r.moves = moves;
    r.result = result;
    r
}

fn theorem(p: CuspPair) -> Report {
    let cert = certify(p);
    let mut r = Report::new(json!({ "n": p.n, "m": p.m }));
    r.text = format!(
        "n = {}, m = {}\nd(V1) = {}\nd(V2) = {}\nrho = {}\npsi moves = {}\n",
        p.n, p.m, cert.dv1, cert.dv2, cert.rho, cert.psi_moves
    );
    for f in &cert.fibers {
        let chain = f
            .chain
            .as_ref()
            .map_or_else(|| "not a chain".to_string(), |c| c.to_string());
        r.text.push_str(&format!(
            "{}: {} multiplicities {:?}\n",
            f.name, chain, f.multiplicities
        ));
    }
    let model = build_pencil(p);
    let mut mult = BTreeMap::new();
    for f in &cert.fibers {
        for (v, k) in f.vertices.iter().zip(&f.multiplicities) {
            mult.insert(*v, *k);
        }
    }
    r.dot = Some(dot(&model.graph, Some(&mult)));
    r.moves = model.history;
    r.result = to_value(&cert);
    if let Some(obj) = r.result.as_object_mut() {
        obj.remove("checks");
    }
    r.checks = cert.checks;
    r
}

fn homology(doc: &GraphDocument, sub: &Option<Vec<String>>) -> Result<Report, UsageError> {
    let vs = selection_or_all(doc, sub)?;
    let s = doc.graph.sub(vs.iter().copied()).expect("selection is known");
    let inv = smith_invariants(&s);
    let rank = inv.invariant_factors.iter().filter(|x| x.is_zero()).count();
    let torsion: Vec<String> = inv
        .invariant_factors
        .iter()
        .filter(|x| !x.is_zero() && !x.abs().eq(&BigInt::from(1)))
        .map(|x| x.abs().to_string())
        .collect();
    let mut input = file_input(doc);
    input["selection"] = json!(ids(&vs));
    let mut r = Report::new(input);
    if !inv.discriminant.is_zero() {
        r.checks.push(Check::eq(
            "torsion order = |d|",
            inv.discriminant.abs(),
            inv.torsion_order(),
        ));
    }
    let group = if torsion.is_empty() && rank == 0 {
        "0".to_string()
    } else {
        let mut parts: Vec<String> = torsion.iter().map(|t| format!("Z/{t}")).collect();
        if rank > 0 {
            parts.insert(0, if rank == 1 { "Z".into() } else { format!("Z^{rank}") });
        }
        parts.join(" + ")
    };
    r.text = format!(
        "cokernel: {group}\ndiscriminant: {}\ntorsion order: {}\n",
        inv.discriminant,
        inv.torsion_order()
    );
    r.result = json!({
        "invariants": to_value(&inv),
        "torsion_order": inv.torsion_order().to_string(),
        "free_rank": rank,
        "cokernel": group,
    });
    r.dot = Some(dot(&s.to_graph(), None));
    Ok(r)
}

fn check_acyclic(d: &BigInt, de: &BigInt) -> Report {
    let input = json!({ "d": d.to_string(), "de": de.to_string() });
    match q_acyclicity_relation(d, de) {
        Ok(a) => {
            let mut r = Report::new(input);
            r.checks
                .push(Check::holds("|d| / d_e is a perfect square", "true", a.is_consistent()));
            r.text = match (&a.h1_order, &a.violation) {
                (Some(h), _) => format!("h1 order: {h}\n"),
                (None, Some(v)) => format!("violation: {v}\n"),
                (None, None) => String::new(),
            };
            r.result = to_value(&a);
            r
        }
        Err(e) => Report::failed(input, e),
    }
}

fn euler(doc: &GraphDocument, rho: i64) -> Report {
    let mut input = file_input(doc);
    input["rho"] = json!(rho);
    match euler_open(rho, &doc.graph.whole()) {
        Ok(chi) => {
            let mut r = Report::new(input);
            r.text = format!("{chi}\n");
            r.result = json!({ "euler": chi });
            r.dot = Some(dot(&doc.graph, None));
            r
        }
        Err(e) => Report::failed(input, e),
    }
}

fn dispatch(cmd: &Command) -> Result<Report, UsageError> {
    Ok(match cmd {
        Command::Disc { file, sub } => disc(&load(file)?, sub)?,
        Command::Minimalize { file, protect } => minimalize(&load(file)?, protect)?,
        Command::Standardize { file } => standardize(&load(file)?),
        Command::Blowup { file, vertex, edge } => {
            let doc = load(file)?;
            let mut input = file_input(&doc);
            let m = match (vertex, edge) {
                (Some(v), _) => {
                    input["vertex"] = json!(v);
                    blow_up_free(&doc.graph, VertexId(*v))
                }
                (None, Some((a, b))) => {
                    input["edge"] = json!([a, b]);
                    blow_up_edge(&doc.graph, VertexId(*a), VertexId(*b))
                }
                (None, None) => unreachable!("clap requires one of the two"),
            };
            single_move(&doc, input, m)
        }
        Command::Blowdown { file, vertex } => {
            let doc = load(file)?;
            let mut input = file_input(&doc);
            input["vertex"] = json!(vertex);
            let m = blow_down(&doc.graph, VertexId(*vertex));
            single_move(&doc, input, m)
        }
        Command::Fibers { max, validate } => fibers(*max, *validate),
        Command::Resolve { n, m, stage } => resolve(*n, *m, *stage),
        Command::VerifyTheorem {
            n: Some(n), m: Some(m), ..
        } => match pair(*n, *m) {
            Ok(p) => theorem(p),
            Err(e) => Report::failed(json!({ "n": n, "m": m }), e),
        },
        Command::VerifyTheorem { .. } => unreachable!("ranges are handled by run"),
        Command::Homology { file, sub } => homology(&load(file)?, sub)?,
        Command::CheckAcyclic { d, de } => check_acyclic(d, de),
        Command::Euler { file, rho } => euler(&load(file)?, *rho),
    })
}

fn certificate(argv: &[String], seed: Option<u64>, report: &Report) -> Certificate {
    let mut input = report.input.clone();
    if let Some(s) = seed {
        input["seed"] = json!(s);
    }
    let mut cert = Certificate::new(argv.to_vec(), input);
    cert.checks = report.checks.clone();
    cert.moves = report.moves.clone();
    cert.result = report.result.clone();
    cert.error = report.error.clone();
    cert.seal()
}

fn render(format: Format, cert: &Certificate, report: &Report) -> Result<String, UsageError> {
    Ok(match format {
        Format::Json => cert.to_json() + "\n",
        Format::Text => format!("{}{}", report.text, check_lines(&cert.checks)),
        Format::Dot => match (&report.dot, &report.error) {
            (_, Some(e)) => format!("// error: {e}\n"),
            (Some(d), None) => d.clone(),
            (None, None) => return Err(UsageError("this command has no DOT output".into())),
        },
    })
}

fn verify_range(argv: &[String], cli: &Cli, lo: u64, hi: u64) -> Result<(i32, String), UsageError> {
    if cli.format == Format::Dot {
        return Err(UsageError("verify-theorem --range has no DOT output".into()));
    }
    let pairs = CuspPair::range(lo, hi);
    // `collect` on an indexed parallel iterator keeps the input order.
    let certs: Vec<(CuspPair, Certificate)> = pairs
        .par_iter()
        .map(|&p| {
            let report = theorem(p);
            (p, certificate(argv, cli.seed, &report))
        })
        .collect();
    let failing = certs.iter().filter(|(_, c)| c.status != 0).count();
    let mut out = String::new();
    for (p, c) in &certs {
        match cli.format {
            Format::Json => {
                out.push_str(&c.to_json_line());
                out.push('\n');
            }
            _ => {
                let tag = if c.status == 0 { "pass" } else { "FAIL" };
                out.push_str(&format!(
                    "{} {} {tag} d(V1) = {} d(V2) = {}\n",
                    p.n,
                    p.m,
                    c.result["dv1"].as_str().unwrap_or("?"),
                    c.result["dv2"].as_str().unwrap_or("?")
                ));
            }
        }
    }
    if cli.format == Format::Text {
        out.push_str(&format!("pairs: {}, failing: {failing}\n", certs.len()));
    }
    Ok((if failing == 0 { 0 } else { 1 }, out))
}

fn execute(argv: &[String], cli: &Cli) -> Result<(i32, String, String), UsageError> {
    if let Command::VerifyTheorem { range: Some(r), .. } = &cli.command {
        let (code, out) = verify_range(argv, cli, r[0], r[1])?;
        return Ok((code, out, String::new()));
    }
    let report = dispatch(&cli.command)?;
    let cert = certificate(argv, cli.seed, &report);
    let out = render(cli.format, &cert, &report)?;
    let err = report
        .error
        .as_ref()
        .map(|e| format!("error: {e}\n"))
        .unwrap_or_default();
    Ok((cert.status, out, err))
}

/// Runs the program on `args`, the arguments after the program name.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(std::iter::once("dualgraph".to_string()).chain(argv.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome::usage(text)
            };
        }
    };
    match execute(&argv, &cli) {
        Ok((code, stdout, stderr)) => match &cli.out {
            Some(path) => match std::fs::write(path, &stdout) {
                Ok(()) => Outcome {
                    code,
                    stdout: String::new(),
                    stderr,
                },
                Err(e) => Outcome::usage(format!("{}: {e}", path.display())),
            },
            None => Outcome { code, stdout, stderr },
        },
        Err(UsageError(msg)) => Outcome::usage(format!("error: {msg}")),
    }
}
