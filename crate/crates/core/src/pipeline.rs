//! The pencil spanned by `x^n` and `y^m z^(n-m)`. Resolving its base points
//! at the origin and at infinity gives a P^1-fibration with the curve
//! `x^n = y^m` as a full 0-fiber, two sections, and two singular fibers
//! `F_i = V_i + L_i + D_i`. The certificate checks the fiber structure and
//! recovers `n = d(V_1)`, `m = d(V_2)`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::chain::standardize_chain;
use crate::error::{Error, Result};
use crate::fibration::{fujita_accounting, validate_fiber, Fiber, FibrationModel, ModelFiber, Section};
use crate::graph::{VertexId, WeightedGraph};
use crate::lattice::discriminant;
use crate::moves::{blow_down_in, blow_up_edge_in, snc_minimalize, MoveLog};
use crate::resolution::{
    build_completion, completion_checks, empty_d1_shape, run_engine, Attachment, Branch, Check, CuspPair, EngineMode,
    EuclidStep, Role, LINE_WEIGHT,
};
use crate::shape::{chain_order, chain_type, ChainType};

/// Three lines `L_inf = {z = 0}`, `l_x = {x = 0}`, `l_y = {y = 0}` in the
/// plane, as vertices 0, 1 and 2.
pub fn pencil_plane() -> WeightedGraph {
    WeightedGraph::build(
        &[(0, LINE_WEIGHT), (1, LINE_WEIGHT), (2, LINE_WEIGHT)],
        &[(0, 1), (0, 2), (1, 2)],
    )
    .expect("three lines")
}

/// The resolved pencil. `E` is attached after all moves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilModel {
    pub pair: CuspPair,
    pub graph: WeightedGraph,
    pub l_inf: VertexId,
    pub l_x: VertexId,
    pub l_y: VertexId,
    /// Section created last at infinity.
    pub h_inf: VertexId,
    /// Section created last at the origin.
    pub h0: VertexId,
    pub e: VertexId,
    /// Order of `x^n / (y^m z^(n-m))` along every component but `E`.
    pub order: BTreeMap<VertexId, i64>,
    /// Surviving exceptional curves over infinity, in creation order.
    pub infinity: Vec<VertexId>,
    /// Exceptional curves over the origin, in creation order.
    pub origin: Vec<VertexId>,
    pub infinity_steps: Vec<EuclidStep>,
    pub origin_steps: Vec<EuclidStep>,
    pub history: MoveLog,
    pub attachment: Attachment,
    /// Blow-downs contracting vertical (-1)-curves over infinity.
    pub psi_moves: usize,
    pub rho: i64,
}

fn pencil_run(
    g: &mut WeightedGraph,
    log: &mut MoveLog,
    order: &mut BTreeMap<VertexId, i64>,
    (a, b): (u64, u64),
    (x, y): (VertexId, VertexId),
) -> Vec<EuclidStep> {
    let br = Branch {
        a,
        b,
        x: Some(x),
        y: Some(y),
    };
    let steps = run_engine(g, log, br, EngineMode::Pencil);
    for s in &steps {
        let o = s.through.iter().map(|v| order[v]).sum();
        order.insert(s.vertex, o);
    }
    steps
}

pub fn build_pencil(p: CuspPair) -> PencilModel {
    let (n, m) = (p.n as i64, p.m as i64);
    let mut g = pencil_plane();
    let (l_inf, l_x, l_y) = (VertexId(0), VertexId(1), VertexId(2));
    let mut order = BTreeMap::from([(l_inf, -(n - m)), (l_x, n), (l_y, -m)]);
    let mut history = MoveLog::new();
    let infinity_steps = pencil_run(&mut g, &mut history, &mut order, (p.n, p.n - p.m), (l_x, l_inf));
    let origin_steps = pencil_run(&mut g, &mut history, &mut order, (p.n, p.m), (l_x, l_y));
    let h_inf = infinity_steps.last().expect("base point at infinity").vertex;
    let h0 = origin_steps.last().expect("base point at the origin").vertex;

    let vertical_inf: BTreeSet<VertexId> = std::iter::once(l_inf)
        .chain(infinity_steps.iter().map(|s| s.vertex))
        .filter(|&v| v != h_inf)
        .collect();
    let protected: BTreeSet<VertexId> = g.vertices().filter(|v| !vertical_inf.contains(v)).collect();
    let (h, psi) = snc_minimalize(&g, &protected);
    let psi_moves = psi.len();
    g = h;
    history.extend(psi);
    order.retain(|v, _| g.contains(*v));

    let sum_sq: u64 = infinity_steps
        .iter()
        .chain(&origin_steps)
        .map(|s| s.multiplicity * s.multiplicity)
        .sum();
    let e = g.fresh_id();
    let attachment = Attachment {
        vertex: e,
        weight: (p.n * p.n) as i64 - sum_sq as i64,
        meets: vec![h_inf, h0],
    };
    attachment.apply(&mut g).expect("fresh vertex");

    PencilModel {
        pair: p,
        infinity: infinity_steps
            .iter()
            .map(|s| s.vertex)
            .filter(|&v| g.contains(v))
            .collect(),
        origin: origin_steps.iter().map(|s| s.vertex).collect(),
        rho: 1 + history.rho_delta(),
        graph: g,
        l_inf,
        l_x,
        l_y,
        h_inf,
        h0,
        e,
        order,
        infinity_steps,
        origin_steps,
        history,
        attachment,
        psi_moves,
    }
}

impl PencilModel {
    pub fn replay_from_plane(&self) -> Result<WeightedGraph> {
        let mut g = self.history.replay(&pencil_plane())?;
        self.attachment.apply(&mut g)?;
        Ok(g)
    }

    /// Components where the pencil parameter vanishes (`sign > 0`) or has a
    /// pole (`sign < 0`), in graph order.
    pub fn fiber_vertices(&self, sign: i64) -> Vec<VertexId> {
        self.graph
            .vertices()
            .filter(|v| self.order.get(v).is_some_and(|o| o.signum() == sign))
            .collect()
    }

    /// Boundary components over infinity: the line and its exceptional
    /// curves.
    pub fn is_over_infinity(&self, v: VertexId) -> bool {
        v == self.l_inf || self.infinity.contains(&v)
    }
}

/// A singular fiber `F = V + L + D` with `L` the component outside the
/// boundary, `V` over the origin and `D` over infinity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledFiber {
    pub name: String,
    /// Components in chain order when the fiber is a chain.
    pub vertices: Vec<VertexId>,
    /// Multiplicities aligned with `vertices`, read off the pencil.
    pub multiplicities: Vec<u64>,
    pub chain: Option<ChainType>,
    pub l: VertexId,
    pub v: Vec<VertexId>,
    pub d: Vec<VertexId>,
    pub mult_l: u64,
    #[serde(with = "crate::decimal")]
    pub d_v: BigInt,
    #[serde(with = "crate::decimal")]
    pub d_d: BigInt,
}

/// Graph-level form of the coordinate construction: contract `U`, make the
/// lines (-1)-curves by blow-ups at infinity, and inspect the fiber `F` of
/// the new fibration lying in the boundary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateModel {
    /// Self-intersections of the two lines once `U` is contracted.
    pub line_weights: (i64, i64),
    pub blow_ups: (usize, usize),
    pub boundary: Option<ChainType>,
    /// The boundary tips met by the lines are (-1)-curves.
    pub tips_minus_one: bool,
    /// `F` is a fiber of the fibration spanned by the two lines.
    pub f_is_fiber: bool,
    /// `F` after contracting (-1)-curves away from the components meeting
    /// the tips.
    pub f_reduced: Option<ChainType>,
    /// `s` when `F` reduces to `[1,2,...,2,1]` with `s` twos.
    pub twos: Option<usize>,
    #[serde(with = "crate::decimal")]
    pub d_boundary: BigInt,
    /// `F` after one blow-up at the point where a tip meets it.
    pub f_after: Option<ChainType>,
    pub f_after_is_fiber: bool,
}

fn invariant(msg: impl Into<String>) -> Error {
    Error::PipelineInvariantViolation(msg.into())
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "none".into(), |x| x.to_string())
}

fn ones_and_twos(t: &ChainType) -> Option<usize> {
    let e = t.entries();
    match e {
        [1, mid @ .., 1] if mid.iter().all(|&a| a == 2) => Some(mid.len()),
        _ => None,
    }
}

pub fn coordinate_model(model: &PencilModel) -> Result<CoordinateModel> {
    let mut g = model.graph.clone();
    g.remove_vertex(model.e)?;
    for &u in model.origin.iter().rev() {
        blow_down_in(&mut g, u)?;
    }
    let lines = [model.l_x, model.l_y];
    let line_weights = (g.weight(lines[0]).unwrap(), g.weight(lines[1]).unwrap());
    let mut tips = [VertexId(0); 2];
    let mut counts = [0usize; 2];
    for (i, &l) in lines.iter().enumerate() {
        let other = lines[1 - i];
        let near: Vec<VertexId> = g.neighbors(l).into_iter().filter(|&v| v != other).collect();
        let [mut w] = near[..] else {
            return Err(invariant(format!("line {l} meets the boundary {} times", near.len())));
        };
        while g.weight(l).unwrap() > -1 {
            w = blow_up_edge_in(&mut g, l, w)?.vertex;
            counts[i] += 1;
        }
        tips[i] = w;
    }
    let boundary_ids: Vec<VertexId> = g.vertices().filter(|v| !lines.contains(v)).collect();
    let boundary = chain_type(&g.sub(boundary_ids.iter().copied())?);
    let tips_minus_one = tips.iter().all(|&w| g.weight(w) == Some(-1));

    let f: Vec<VertexId> = boundary_ids.iter().copied().filter(|v| !tips.contains(v)).collect();
    let f_sub = g.sub(f.iter().copied())?;
    let inner = |w: VertexId| f_sub.parent().neighbors(w).into_iter().find(|v| f_sub.contains(*v));
    let (w3, w4) = match (inner(tips[0]), inner(tips[1])) {
        (Some(a), Some(b)) if a != b => (a, b),
        _ => return Err(invariant("tips do not meet distinct components of F")),
    };
    let f_is_fiber = Fiber::from_graph(&f_sub.to_graph()).is_ok();

    let movable: BTreeSet<VertexId> = f.iter().copied().filter(|&v| v != w3 && v != w4).collect();
    let protected: BTreeSet<VertexId> = g.vertices().filter(|v| !movable.contains(v)).collect();
    let (mut h, _) = snc_minimalize(&g, &protected);
    let f: Vec<VertexId> = f.into_iter().filter(|&v| h.contains(v)).collect();
    let f_reduced = chain_type(&h.sub(f.iter().copied())?);
    let twos = f_reduced.as_ref().and_then(ones_and_twos);
    let d_boundary = discriminant(&h.sub(f.iter().copied().chain(tips))?);

    let n = blow_up_edge_in(&mut h, tips[0], w3)?.vertex;
    let f_after_ids: Vec<VertexId> = f.iter().copied().chain([n]).collect();
    let f_after = chain_type(&h.sub(f_after_ids.iter().copied())?);
    let f_after_is_fiber = Fiber::from_graph(&h.induced(f_after_ids)?).is_ok();
    Ok(CoordinateModel {
        line_weights,
        blow_ups: (counts[0], counts[1]),
        boundary,
        tips_minus_one,
        f_is_fiber,
        f_reduced,
        twos,
        d_boundary,
        f_after,
        f_after_is_fiber,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCertificate {
    pub pair: CuspPair,
    pub fibers: Vec<LabeledFiber>,
    #[serde(with = "crate::decimal")]
    pub dv1: BigInt,
    #[serde(with = "crate::decimal")]
    pub dv2: BigInt,
    pub rho: i64,
    pub psi_moves: usize,
    pub sigma_x: Option<i64>,
    pub coordinate: Option<CoordinateModel>,
    /// Standard form of the boundary of the plane in the smooth case.
    pub smooth_boundary: Option<ChainType>,
    pub checks: Vec<Check>,
}

impl TheoremCertificate {
    pub fn passes(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

struct FiberData {
    labeled: LabeledFiber,
    model: Option<ModelFiber>,
}

fn examine_fiber(model: &PencilModel, i: usize, line: VertexId, out: &mut Vec<Check>) -> FiberData {
    let g = &model.graph;
    let name = format!("F{i}");
    let sign = if i == 1 { 1 } else { -1 };
    let ids = model.fiber_vertices(sign);
    let sub = g.sub(ids.iter().copied()).expect("fiber vertices");
    let chain = chain_type(&sub);
    let vertices = chain_order(&sub).unwrap_or_else(|| ids.clone());
    let mult = |v: &VertexId| model.order[v].unsigned_abs();
    let v: Vec<VertexId> = ids.iter().copied().filter(|x| model.origin.contains(x)).collect();
    let d: Vec<VertexId> = ids.iter().copied().filter(|&x| model.is_over_infinity(x)).collect();
    let d_v = discriminant(&g.sub(v.iter().copied()).expect("roles"));
    let d_d = discriminant(&g.sub(d.iter().copied()).expect("roles"));
    let mult_l = model.order.get(&line).map_or(0, |o| o.unsigned_abs());

    out.push(Check::holds(
        &format!("{name} contains L{i}"),
        "true",
        ids.contains(&line),
    ));
    let minus_ones: Vec<VertexId> = ids.iter().copied().filter(|&x| g.weight(x) == Some(-1)).collect();
    if ids.len() == 1 {
        out.push(Check::eq(
            &format!("{name} smooth 0-curve"),
            0,
            g.weight(ids[0]).unwrap(),
        ));
    } else {
        out.push(Check::holds(&format!("{name} is a chain"), "true", chain.is_some()));
        out.push(Check::holds(
            &format!("{name} has unique (-1) L{i}"),
            "true",
            minus_ones == [line],
        ));
    }
    let fiber = Fiber::from_graph(&sub.to_graph());
    out.push(Check::holds(
        &format!("{name} contracts to a 0-curve"),
        "true",
        fiber.is_ok(),
    ));
    let mut model_fiber = None;
    if let Ok(f) = fiber {
        let agree = ids.iter().all(|x| f.mult(*x) == mult(x));
        out.push(Check::holds(
            &format!("{name} multiplicities match the pencil"),
            "true",
            agree,
        ));
        let report = validate_fiber(&f);
        out.push(Check::eq(
            &format!("{name} structural violations"),
            0,
            report.violations(),
        ));
        model_fiber = Some(ModelFiber {
            name: name.clone(),
            boundary: ids.iter().copied().filter(|&x| x != line).collect(),
            fiber: f,
        });
    }
    out.push(Check::eq(
        &format!("#{name} = #V{i} + 1 + #D{i}"),
        ids.len(),
        v.len() + d.len() + 1,
    ));
    for (part, set) in [("V", &v), ("D", &d)] {
        let comps = g.sub(set.iter().copied()).expect("roles").components().len();
        out.push(Check::holds(&format!("{part}{i} connected"), "true", comps <= 1));
    }
    out.push(Check::eq(
        &format!("mult(L{i}) = d(V{i})"),
        BigInt::from(mult_l),
        d_v.clone(),
    ));
    out.push(Check::eq(
        &format!("mult(L{i}) = d(D{i})"),
        BigInt::from(mult_l),
        d_d.clone(),
    ));
    FiberData {
        labeled: LabeledFiber {
            name,
            multiplicities: vertices.iter().map(mult).collect(),
            vertices,
            chain,
            l: line,
            v,
            d,
            mult_l,
            d_v,
            d_d,
        },
        model: model_fiber,
    }
}

fn section_meeting(g: &WeightedGraph, section: VertexId, fiber: &[VertexId]) -> Option<VertexId> {
    let hits: Vec<VertexId> = g.neighbors(section).into_iter().filter(|v| fiber.contains(v)).collect();
    match hits[..] {
        [v] => Some(v),
        _ => None,
    }
}

fn fibration_checks(model: &PencilModel, fibers: &[FiberData], out: &mut Vec<Check>) -> Option<i64> {
    let g = &model.graph;
    let mut model_fibers: Vec<ModelFiber> = fibers.iter().filter_map(|f| f.model.clone()).collect();
    if model_fibers.len() != 2 {
        out.push(Check::holds("fibration model", "built", false));
        return None;
    }
    model_fibers.push(ModelFiber {
        name: "E".into(),
        fiber: Fiber::smooth_at(model.e),
        boundary: BTreeSet::from([model.e]),
    });
    let mut sections = Vec::new();
    for (name, h) in [("H_inf", model.h_inf), ("H0", model.h0)] {
        let meets: Option<Vec<VertexId>> = fibers
            .iter()
            .map(|f| section_meeting(g, h, &f.labeled.vertices))
            .chain([Some(model.e).filter(|&e| g.edge_multiplicity(h, e) == 1)])
            .collect();
        let Some(meets) = meets else {
            out.push(Check::holds(&format!("{name} meets every fiber once"), "true", false));
            return None;
        };
        sections.push(Section {
            name: name.into(),
            in_boundary: true,
            meets,
        });
    }
    let fm = match FibrationModel::with_rho(model_fibers, sections, model.rho) {
        Ok(fm) => fm,
        Err(err) => {
            out.push(Check::eq("fibration model", "consistent".to_string(), err.to_string()));
            return None;
        }
    };
    out.push(Check::holds("rho = 2 + sum (#F - 1)", "true", true));
    match fujita_accounting(&fm) {
        Ok(acc) => {
            out.push(Check::eq("h + nu + rho = Sigma + #D + 2", acc.rhs, acc.lhs));
            out.push(Check::eq("Sigma_X", 0, acc.sigma_x));
            out.push(Check::eq("#D = #components - 2", g.len() as i64 - 2, acc.boundary_size));
            Some(acc.sigma_x)
        }
        Err(err) => {
            out.push(Check::eq(
                "h + nu + rho = Sigma + #D + 2",
                "holds".to_string(),
                err.to_string(),
            ));
            None
        }
    }
}

fn coordinate_checks(model: &PencilModel, out: &mut Vec<Check>) -> Option<CoordinateModel> {
    let cm = match coordinate_model(model) {
        Ok(cm) => cm,
        Err(err) => {
            out.push(Check::eq("coordinate model", "built".to_string(), err.to_string()));
            return None;
        }
    };
    out.push(Check::holds(
        "lines non-negative once U is contracted",
        "true",
        cm.line_weights.0 >= 0 && cm.line_weights.1 >= 0,
    ));
    out.push(Check::holds(
        "boundary is a chain after blow-ups",
        "true",
        cm.boundary.is_some(),
    ));
    out.push(Check::holds("lines meet (-1) tips", "true", cm.tips_minus_one));
    out.push(Check::holds("F is a fiber", "true", cm.f_is_fiber));
    out.push(Check::holds("F reduces to [1,2,...,2,1]", "true", cm.twos.is_some()));
    out.push(Check::eq("d(W1 + F + W2)", BigInt::from(-1), cm.d_boundary.clone()));
    out.push(Check::eq("number of twos in F", "0".to_string(), opt(cm.twos)));
    out.push(Check::eq(
        "F after one blow-up",
        "[1,2,1]".to_string(),
        cm.f_after.as_ref().map_or_else(|| "none".into(), |t| t.to_string()),
    ));
    out.push(Check::holds(
        "F after one blow-up is a fiber",
        "true",
        cm.f_after_is_fiber,
    ));
    Some(cm)
}

fn smooth_checks(p: CuspPair, out: &mut Vec<Check>) -> Option<ChainType> {
    let completion = build_completion(p);
    for c in completion_checks(&completion) {
        out.push(Check {
            name: format!("completion: {}", c.name),
            ..c
        });
    }
    match empty_d1_shape(&completion) {
        Ok(shape) => {
            out.push(Check::eq("C weight", 0, shape.c_weight));
            out.push(Check::holds("D2 irreducible", "true", shape.d2_irreducible));
            out.push(Check::eq(
                "D2 weight after transformations",
                "0".to_string(),
                opt(shape.d2_weight_after),
            ));
            out.push(Check::eq("E weight after transformations", 0, shape.e_weight_after));
            out.push(Check::eq(
                "C + D2 after transformations",
                "[0,0]".to_string(),
                shape
                    .boundary_type
                    .as_ref()
                    .map_or_else(|| "none".into(), |t| t.to_string()),
            ));
        }
        Err(err) => out.push(Check::eq("D1 = 0", "true".to_string(), err.to_string())),
    }
    let infinity: Vec<VertexId> = [Role::D1, Role::C, Role::D2]
        .iter()
        .flat_map(|&r| completion.role(r).iter().copied())
        .collect();
    let standard = completion
        .graph
        .sub(infinity)
        .ok()
        .and_then(|s| standardize_chain(&s).ok())
        .map(|r| r.chain);
    out.push(Check::eq(
        "boundary standard form",
        "[0,0]".to_string(),
        standard.as_ref().map_or_else(|| "none".into(), |t| t.to_string()),
    ));
    standard
}

/// Runs every check and returns the certificate, passing or not.
pub fn certify(p: CuspPair) -> TheoremCertificate {
    let model = build_pencil(p);
    let g = &model.graph;
    let mut checks = Vec::new();
    checks.push(Check::holds(
        "history replays from the plane",
        "true",
        model.replay_from_plane().as_ref() == Ok(g),
    ));
    checks.push(Check::eq("rho", 1 + model.history.rho_delta(), model.rho));
    checks.push(Check::eq("E^2", 0, model.attachment.weight));
    let sections: Vec<VertexId> = model.fiber_vertices(0);
    let mut expected = vec![model.h_inf, model.h0];
    expected.sort();
    checks.push(Check::holds(
        "horizontal components are the two sections",
        "true",
        sections == expected,
    ));
    let lines = [model.l_x, model.l_y];
    let stray: Vec<VertexId> = g
        .vertices()
        .filter(|v| !lines.contains(v) && !expected.contains(v) && *v != model.e && g.weight(*v) == Some(-1))
        .collect();
    checks.push(Check::holds("no (-1) in D - C - U1 - E", "true", stray.is_empty()));

    let fibers: Vec<FiberData> = [(1, model.l_x), (2, model.l_y)]
        .into_iter()
        .map(|(i, l)| examine_fiber(&model, i, l, &mut checks))
        .collect();
    let dv1 = fibers[0].labeled.d_v.clone();
    let dv2 = fibers[1].labeled.d_v.clone();
    checks.push(Check::eq("d(V1) = n", BigInt::from(p.n), dv1.clone()));
    checks.push(Check::eq("d(V2) = m", BigInt::from(p.m), dv2.clone()));
    let sigma_x = fibration_checks(&model, &fibers, &mut checks);

    let (coordinate, smooth_boundary) = if p.is_smooth() {
        (None, smooth_checks(p, &mut checks))
    } else {
        (coordinate_checks(&model, &mut checks), None)
    };
    TheoremCertificate {
        pair: p,
        fibers: fibers.into_iter().map(|f| f.labeled).collect(),
        dv1,
        dv2,
        rho: model.rho,
        psi_moves: model.psi_moves,
        sigma_x,
        coordinate,
        smooth_boundary,
        checks,
    }
}

/// The certificate, or `PipelineInvariantViolation` naming the failed
/// checks.
pub fn theorem_pipeline(p: CuspPair) -> Result<TheoremCertificate> {
    let cert = certify(p);
    if cert.passes() {
        Ok(cert)
    } else {
        let names: Vec<String> = cert
            .failures()
            .iter()
            .map(|c| format!("{}: expected {}, computed {}", c.name, c.expected, c.computed))
            .collect();
        Err(invariant(format!("({}, {}): {}", p.n, p.m, names.join("; "))))
    }
}
