//! Resolution of the cusp `x^n = y^m` at the origin and at infinity, and the
//! completion of the complement of the curve with its boundary roles.
//!
//! The engine tracks a local branch `u^a = v^b` together with the boundary
//! components through the current center playing the roles of the axes
//! `X = {u = 0}` and `Y = {v = 0}`. Blowing up replaces `(a, b)` by
//! `(a - b, b)` with the new curve as `X`, or by `(a, b - a)` with the new
//! curve as `Y`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{VertexId, Weight, WeightedGraph};
use crate::lattice::discriminant;
use crate::moves::{
    blow_up_edge_in, blow_up_free_in, blow_up_point_in, elementary_transformation_in, snc_minimalize, MoveLog, Side,
};
use crate::shape::{chain_type, classify_shape, ChainType};

/// Exponents of the curve `x^n = y^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CuspPair {
    pub n: u64,
    pub m: u64,
}

impl CuspPair {
    pub fn new(n: u64, m: u64) -> Result<CuspPair> {
        if n.gcd(&m) != 1 {
            return Err(Error::NotCoprime(n, m));
        }
        if n <= m {
            return Err(Error::BadOrder(n, m));
        }
        if m == 0 {
            return Err(Error::Transversal);
        }
        Ok(CuspPair { n, m })
    }

    /// Smooth curve, i.e. `m = 1`.
    pub fn is_smooth(&self) -> bool {
        self.m == 1
    }

    /// Coprime pairs with `lo <= m < n <= hi`, ordered by `(n, m)`.
    pub fn range(lo: u64, hi: u64) -> Vec<CuspPair> {
        let mut out = Vec::new();
        for n in lo.max(2)..=hi {
            for m in lo.max(1)..n {
                if let Ok(p) = CuspPair::new(n, m) {
                    out.push(p);
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EngineMode {
    /// Stop as soon as the curve is smooth and meets the boundary
    /// transversally in one component.
    Log,
    /// Run until the branch has multiplicity one and separates, as for the
    /// base point of a pencil.
    Pencil,
}

/// One blow-up performed by the engine.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EuclidStep {
    pub vertex: VertexId,
    /// Multiplicity of the branch at the center.
    pub multiplicity: u64,
    /// Components through the center.
    pub through: Vec<VertexId>,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Branch {
    pub(crate) a: u64,
    pub(crate) b: u64,
    pub(crate) x: Option<VertexId>,
    pub(crate) y: Option<VertexId>,
}

impl Branch {
    fn is_log_resolved(&self) -> bool {
        match (self.x, self.y) {
            (Some(_), Some(_)) => false,
            (Some(_), None) => self.b == 1,
            (None, Some(_)) => self.a == 1,
            (None, None) => self.a.min(self.b) == 1,
        }
    }
}

pub(crate) fn run_engine(
    g: &mut WeightedGraph,
    log: &mut MoveLog,
    mut br: Branch,
    mode: EngineMode,
) -> Vec<EuclidStep> {
    let mut steps = Vec::new();
    loop {
        if mode == EngineMode::Log && br.is_log_resolved() {
            break;
        }
        let mv = match (br.x, br.y) {
            (Some(p), Some(q)) => blow_up_edge_in(g, p, q).expect("axes meet at the center"),
            (Some(p), None) | (None, Some(p)) => blow_up_free_in(g, p).expect("axis exists"),
            (None, None) => blow_up_point_in(g),
        };
        let n = mv.vertex;
        steps.push(EuclidStep {
            vertex: n,
            multiplicity: br.a.min(br.b),
            through: br.x.into_iter().chain(br.y).collect(),
        });
        log.push(mv);
        if br.a == br.b {
            br = Branch {
                a: 1,
                b: 1,
                x: Some(n),
                y: None,
            };
            if mode == EngineMode::Pencil {
                break;
            }
        } else if br.a > br.b {
            br.a -= br.b;
            br.x = Some(n);
        } else {
            br.b -= br.a;
            br.y = Some(n);
        }
    }
    steps
}

/// Weight of the initial line at infinity.
pub const LINE_WEIGHT: Weight = 1;

/// Minimal log resolution at the origin. `exceptional` lists the new
/// components in creation order; `e` is the proper transform of the curve,
/// carrying only its local contribution `-sum mult^2` as weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalResolution {
    pub pair: CuspPair,
    pub graph: WeightedGraph,
    pub u: Vec<VertexId>,
    pub e: VertexId,
    pub steps: Vec<EuclidStep>,
    pub log: MoveLog,
}

impl LocalResolution {
    /// The (-1)-component of `U` meeting `E`.
    pub fn u_last(&self) -> Option<VertexId> {
        self.u.last().copied()
    }
}

pub fn resolve_cusp_local(p: CuspPair) -> LocalResolution {
    let mut g = WeightedGraph::new();
    let mut log = MoveLog::new();
    let br = Branch {
        a: p.n,
        b: p.m,
        x: None,
        y: None,
    };
    let steps = run_engine(&mut g, &mut log, br, EngineMode::Log);
    let u: Vec<VertexId> = steps.iter().map(|s| s.vertex).collect();
    let local: i64 = steps.iter().map(|s| (s.multiplicity * s.multiplicity) as i64).sum();
    let e = g.fresh_id();
    g.add_vertex(e, -local).expect("fresh id");
    if let Some(&last) = u.last() {
        g.add_edge(e, last).expect("exists");
    }
    LocalResolution {
        pair: p,
        graph: g,
        u,
        e,
        steps,
        log,
    }
}

/// Resolution at the point at infinity of the curve. The line at infinity
/// is vertex `0` of the graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfinityResolution {
    pub pair: CuspPair,
    pub graph: WeightedGraph,
    pub l_inf: VertexId,
    /// The component meeting `E`.
    pub c: VertexId,
    /// Connected part of the remaining tree containing the line at infinity.
    pub d1: Vec<VertexId>,
    pub d2: Vec<VertexId>,
    pub e: VertexId,
    pub steps: Vec<EuclidStep>,
    pub log: MoveLog,
}

impl InfinityResolution {
    pub fn boundary(&self) -> Vec<VertexId> {
        self.graph.vertices().filter(|&v| v != self.e).collect()
    }
}

pub(crate) fn plane_graph() -> WeightedGraph {
    WeightedGraph::build(&[(0, LINE_WEIGHT)], &[]).expect("single vertex")
}

fn infinity_part(
    g: &mut WeightedGraph,
    log: &mut MoveLog,
    p: CuspPair,
    mode: EngineMode,
    x: Option<VertexId>,
) -> Vec<EuclidStep> {
    let br = Branch {
        a: p.n,
        b: p.n - p.m,
        x,
        y: Some(VertexId(0)),
    };
    run_engine(g, log, br, mode)
}

/// Splits the tree at infinity minus `c` into the part containing the line
/// and the rest.
fn split_at(g: &WeightedGraph, tree: &[VertexId], c: VertexId, l_inf: VertexId) -> (Vec<VertexId>, Vec<VertexId>) {
    let rest = g.sub(tree.iter().copied().filter(|&v| v != c)).expect("tree vertices");
    let mut d1 = Vec::new();
    let mut d2 = Vec::new();
    for comp in rest.components() {
        if comp.contains(&l_inf) {
            d1 = comp;
        } else {
            d2.extend(comp);
        }
    }
    let order = |ids: Vec<VertexId>| g.vertices().filter(|v| ids.contains(v)).collect::<Vec<_>>();
    (order(d1), order(d2))
}

pub fn resolve_at_infinity(p: CuspPair) -> InfinityResolution {
    let mut g = plane_graph();
    let mut log = MoveLog::new();
    let steps = infinity_part(&mut g, &mut log, p, EngineMode::Log, None);
    let c = steps.last().expect("the curve is tangent to the line").vertex;
    let tree: Vec<VertexId> = g.vertices().collect();
    let (d1, d2) = split_at(&g, &tree, c, VertexId(0));
    let local: i64 = steps.iter().map(|s| (s.multiplicity * s.multiplicity) as i64).sum();
    let e = g.fresh_id();
    g.add_vertex(e, -local).expect("fresh id");
    g.add_edge(e, c).expect("exists");
    InfinityResolution {
        pair: p,
        graph: g,
        l_inf: VertexId(0),
        c,
        d1,
        d2,
        e,
        steps,
        log,
    }
}

/// Boundary roles of a completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    D1,
    C,
    D2,
    E,
    U,
}

/// The curve `E` is not produced by a move; it is attached after all moves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attachment {
    pub vertex: VertexId,
    pub weight: Weight,
    pub meets: Vec<VertexId>,
}

impl Attachment {
    pub fn apply(&self, g: &mut WeightedGraph) -> Result<()> {
        g.add_vertex(self.vertex, self.weight)?;
        for &v in &self.meets {
            g.add_edge(self.vertex, v)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletionOptions {
    /// Contract non-branching (-1)-curves in `D1'`.
    pub apply_psi: bool,
}

impl Default for CompletionOptions {
    fn default() -> Self {
        CompletionOptions { apply_psi: true }
    }
}

/// The completion `(X, D)` of the complement of the curve with
/// `D = D1 + C + D2 + E + U`, together with its construction history.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletionModel {
    pub pair: Option<CuspPair>,
    pub graph: WeightedGraph,
    pub roles: BTreeMap<Role, Vec<VertexId>>,
    /// The line at infinity, unless contracted.
    pub l_inf: Option<VertexId>,
    pub rho: i64,
    /// Moves from the plane with its line at infinity, before `E` is
    /// attached.
    pub history: MoveLog,
    pub attachment: Attachment,
    /// `D1'` before contraction.
    pub d1_prime: Vec<VertexId>,
    /// Number of blow-downs performed by the contraction of `D1'`.
    pub psi_moves: usize,
    pub infinity_steps: Vec<EuclidStep>,
    pub origin_steps: Vec<EuclidStep>,
}

impl CompletionModel {
    /// Builds a model from explicit data, for synthetic checks. `rho` is
    /// taken as given and the history is empty.
    pub fn synthetic(graph: WeightedGraph, roles: BTreeMap<Role, Vec<VertexId>>, rho: i64) -> Result<CompletionModel> {
        let e = match roles.get(&Role::E).map(Vec::as_slice) {
            Some([e]) => *e,
            _ => return Err(Error::PipelineInvariantViolation("E must be a single vertex".into())),
        };
        let mut seen = BTreeSet::new();
        for ids in roles.values() {
            for &v in ids {
                if !graph.contains(v) {
                    return Err(Error::UnknownVertex(v));
                }
                if !seen.insert(v) {
                    return Err(Error::PipelineInvariantViolation(format!("vertex {v} has two roles")));
                }
            }
        }
        if seen.len() != graph.len() {
            return Err(Error::PipelineInvariantViolation("roles do not cover the graph".into()));
        }
        let attachment = Attachment {
            vertex: e,
            weight: graph.weight(e).unwrap(),
            meets: graph.neighbors(e),
        };
        Ok(CompletionModel {
            pair: None,
            graph,
            d1_prime: roles.get(&Role::D1).cloned().unwrap_or_default(),
            roles,
            l_inf: None,
            rho,
            history: MoveLog::new(),
            attachment,
            psi_moves: 0,
            infinity_steps: Vec::new(),
            origin_steps: Vec::new(),
        })
    }

    pub fn role(&self, r: Role) -> &[VertexId] {
        self.roles.get(&r).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn c(&self) -> VertexId {
        self.role(Role::C)[0]
    }

    pub fn e(&self) -> VertexId {
        self.role(Role::E)[0]
    }

    pub fn d_of(&self, roles: &[Role]) -> BigInt {
        let ids: Vec<VertexId> = roles.iter().flat_map(|&r| self.role(r).iter().copied()).collect();
        discriminant(&self.graph.sub(ids).expect("role vertices"))
    }

    /// The boundary minus `C`.
    pub fn b_vertices(&self) -> Vec<VertexId> {
        let c = self.c();
        self.graph.vertices().filter(|&v| v != c).collect()
    }

    pub fn psi_acted(&self) -> bool {
        self.psi_moves > 0
    }

    pub fn c_d1_edges(&self) -> usize {
        let c = self.c();
        self.role(Role::D1)
            .iter()
            .map(|&v| self.graph.edge_multiplicity(c, v) as usize)
            .sum()
    }

    /// `chi(X) = chi(Xbar) - chi(B)` for `X = Xbar - B`, `B = D - C`.
    pub fn euler_x(&self) -> Result<i64> {
        let b = self.graph.sub(self.b_vertices())?;
        crate::verify::euler_open(self.rho, &b)
    }

    /// Rebuilds the graph from the plane: history, then `E`.
    pub fn replay_from_plane(&self) -> Result<WeightedGraph> {
        let mut g = self.history.replay(&plane_graph())?;
        self.attachment.apply(&mut g)?;
        Ok(g)
    }
}

/// Glues the resolutions at infinity and at the origin along `E` and
/// contracts `D1'`.
pub fn build_completion(p: CuspPair) -> CompletionModel {
    build_completion_with(p, CompletionOptions::default())
}

pub fn build_completion_with(p: CuspPair, opts: CompletionOptions) -> CompletionModel {
    let mut g = plane_graph();
    let l_inf = VertexId(0);
    let mut history = MoveLog::new();
    let infinity_steps = infinity_part(&mut g, &mut history, p, EngineMode::Log, None);
    let c = infinity_steps.last().expect("tangent at infinity").vertex;
    let tree: Vec<VertexId> = g.vertices().collect();
    let (d1_prime, d2) = split_at(&g, &tree, c, l_inf);
    let origin = Branch {
        a: p.n,
        b: p.m,
        x: None,
        y: None,
    };
    let origin_steps = run_engine(&mut g, &mut history, origin, EngineMode::Log);
    let u: Vec<VertexId> = origin_steps.iter().map(|s| s.vertex).collect();

    let mut psi_moves = 0;
    if opts.apply_psi {
        let d1_set: BTreeSet<VertexId> = d1_prime.iter().copied().collect();
        let protected: BTreeSet<VertexId> = g.vertices().filter(|v| !d1_set.contains(v)).collect();
        let (h, psi) = snc_minimalize(&g, &protected);
        psi_moves = psi.len();
        g = h;
        history.extend(psi);
    }
    let d1: Vec<VertexId> = d1_prime.iter().copied().filter(|&v| g.contains(v)).collect();

    let sum_sq: u64 = infinity_steps
        .iter()
        .chain(&origin_steps)
        .map(|s| s.multiplicity * s.multiplicity)
        .sum();
    let e_weight = (p.n * p.n) as i64 - sum_sq as i64;
    let e = g.fresh_id();
    let attachment = Attachment {
        vertex: e,
        weight: e_weight,
        meets: std::iter::once(c).chain(u.last().copied()).collect(),
    };
    attachment.apply(&mut g).expect("fresh vertex");

    let rho = 1 + history.rho_delta();
    let roles = BTreeMap::from([
        (Role::D1, d1),
        (Role::C, vec![c]),
        (Role::D2, d2),
        (Role::E, vec![e]),
        (Role::U, u),
    ]);
    CompletionModel {
        pair: Some(p),
        l_inf: g.contains(l_inf).then_some(l_inf),
        graph: g,
        roles,
        rho,
        history,
        attachment,
        d1_prime,
        psi_moves,
        infinity_steps,
        origin_steps,
    }
}

/// Named outcome of one structural check on a constructed model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

impl Check {
    pub fn eq<T: PartialEq + std::fmt::Display>(name: &str, expected: T, computed: T) -> Check {
        Check {
            name: name.to_string(),
            pass: expected == computed,
            expected: expected.to_string(),
            computed: computed.to_string(),
        }
    }

    pub fn holds(name: &str, what: &str, pass: bool) -> Check {
        Check {
            name: name.to_string(),
            expected: what.to_string(),
            computed: if pass { what.to_string() } else { format!("not {what}") },
            pass,
        }
    }
}

/// Checks on the resolution at the origin: `U` is unimodular with a unique
/// (-1)-component, which meets `E` once. A smooth curve needs no blow-up.
pub fn local_checks(r: &LocalResolution) -> Vec<Check> {
    if r.pair.is_smooth() {
        return vec![Check::eq("components of U", 0, r.u.len())];
    }
    let g = &r.graph;
    let u = g.sub(r.u.iter().copied()).expect("exceptional vertices");
    let minus_ones: Vec<VertexId> = r.u.iter().copied().filter(|&v| g.weight(v) == Some(-1)).collect();
    vec![
        Check::eq("d(U)", BigInt::one(), discriminant(&u)),
        Check::eq("(-1)-components of U", 1, minus_ones.len()),
        Check::holds(
            "the (-1) of U meets E once",
            "true",
            minus_ones.len() == 1 && r.u_last() == Some(minus_ones[0]) && g.edge_multiplicity(minus_ones[0], r.e) == 1,
        ),
        Check::holds(
            "log replays",
            "true",
            r.log.replay(&WeightedGraph::new()).ok().map(|h| h.len()) == Some(r.u.len()),
        ),
    ]
}

/// Checks on the resolution at infinity: the boundary `D1' + C' + D2` has
/// `d = -1` and `D2` is a negative definite chain without (-1)-curves.
pub fn infinity_checks(r: &InfinityResolution) -> Vec<Check> {
    let g = &r.graph;
    let d = g.sub(r.boundary()).expect("boundary");
    let d2 = g.sub(r.d2.iter().copied()).expect("D2");
    let mut out = vec![Check::eq("d(D1'+C'+D2)", BigInt::from(-1), discriminant(&d))];
    if !r.d2.is_empty() {
        out.push(Check::holds("d(D2) >= 2", "true", discriminant(&d2) >= BigInt::from(2)));
    }
    out.push(Check::holds(
        "D2 chain without (-1)",
        "true",
        classify_shape(&d2).is_chain && d2.vertices().iter().all(|&v| d2.weight(v) != -1),
    ));
    out.push(Check::holds(
        "D2 negative definite",
        "true",
        crate::lattice::definiteness(&d2) == crate::lattice::Definiteness::NegativeDefinite,
    ));
    out.push(Check::holds("C meets E", "true", g.edge_multiplicity(r.c, r.e) == 1));
    out
}

/// Structural checks every completion must pass.
pub fn completion_checks(model: &CompletionModel) -> Vec<Check> {
    let mut out = Vec::new();
    let g = &model.graph;
    let c = model.c();
    let e = model.e();
    let infinity: Vec<Role> = vec![Role::D1, Role::C, Role::D2];
    out.push(Check::eq("d(D1+C+D2)", BigInt::from(-1), model.d_of(&infinity)));
    let d2 = model.graph.sub(model.role(Role::D2).iter().copied()).expect("roles");
    let d_d2 = discriminant(&d2);
    let smooth = model.pair.is_some_and(|p| p.is_smooth());
    if !smooth || !d2.is_empty() {
        out.push(Check::holds("d(D2) >= 2", "true", d_d2 >= BigInt::from(2)));
    }
    out.push(Check::holds(
        "D2 chain without (-1)",
        "true",
        classify_shape(&d2).is_chain && d2.vertices().iter().all(|&v| d2.weight(v) != -1),
    ));
    out.push(Check::holds(
        "D2 negative definite",
        "true",
        crate::lattice::definiteness(&d2) == crate::lattice::Definiteness::NegativeDefinite,
    ));
    let d1 = model.role(Role::D1);
    if !d1.is_empty() {
        let g1 = model.d_of(&[Role::D1]);
        out.push(Check::eq("gcd(d(D1), d(D2))", BigInt::one(), g1.gcd(&d_d2)));
    }
    out.push(Check::holds("C meets E", "true", g.edge_multiplicity(c, e) == 1));
    let u = model.role(Role::U);
    let u_sub = g.sub(u.iter().copied()).expect("roles");
    for comp in u_sub.components() {
        let sub = u_sub.restrict(comp.iter().copied());
        let minus_ones: Vec<VertexId> = comp.iter().copied().filter(|&v| g.weight(v) == Some(-1)).collect();
        let meets_e: Vec<VertexId> = comp
            .iter()
            .copied()
            .filter(|&v| g.edge_multiplicity(v, e) > 0)
            .collect();
        out.push(Check::eq("d(U component)", BigInt::one(), discriminant(&sub)));
        out.push(Check::holds(
            "U component has a unique (-1) meeting E once",
            "true",
            minus_ones.len() == 1 && meets_e == minus_ones && g.edge_multiplicity(minus_ones[0], e) == 1,
        ));
    }
    match model.euler_x() {
        Ok(chi) => {
            out.push(Check::eq("chi(X) = -#(C-D1)", -(model.c_d1_edges() as i64), chi));
            if !d1.is_empty() {
                out.push(Check::eq("chi(X) when D1 != 0", -1, chi));
            }
        }
        Err(err) => out.push(Check::holds("chi(X) computable", "true", err.to_string().is_empty())),
    }
    let replay = model.replay_from_plane();
    out.push(Check::holds(
        "history replays from the plane",
        "true",
        replay.as_ref() == Ok(&model.graph),
    ));
    if let Some(p) = model.pair {
        out.push(Check::eq("rho", 1 + model.history.rho_delta(), model.rho));
        if p.is_smooth() {
            out.push(Check::holds("U = 0", "true", u.is_empty()));
        }
    }
    out
}

/// The shape reached when `D1 = 0`: `C` is a 0-curve, `D2` irreducible,
/// and elementary transformations at `C` toward `E` raise `D2` to a
/// 0-curve, leaving a boundary `C + D2` of type `[0,0]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmptyD1Shape {
    pub c_weight: Weight,
    pub d2_irreducible: bool,
    /// `C^2 d(D2) + d(D2 - D_C)`, which must be 1.
    #[serde(with = "crate::decimal")]
    pub splitting_value: BigInt,
    pub transformations: usize,
    /// Graph after the transformations.
    pub graph: WeightedGraph,
    pub d2_weight_after: Option<Weight>,
    pub e_weight_after: Weight,
    pub boundary_type: Option<ChainType>,
    pub log: MoveLog,
}

pub fn empty_d1_shape(model: &CompletionModel) -> Result<EmptyD1Shape> {
    if !model.role(Role::D1).is_empty() {
        return Err(Error::PipelineInvariantViolation("D1 is not empty".into()));
    }
    let c = model.c();
    let e = model.e();
    let d2 = model.role(Role::D2).to_vec();
    let g = &model.graph;
    let c_weight = g.weight(c).unwrap();
    let d2_sub = g.sub(d2.iter().copied())?;
    let d_c = d2.iter().copied().find(|&v| g.edge_multiplicity(c, v) > 0);
    let without = match d_c {
        Some(v) => discriminant(&d2_sub.without([v])),
        None => BigInt::one(),
    };
    let splitting_value = BigInt::from(c_weight) * discriminant(&d2_sub) + without;
    let mut h = g.clone();
    let mut log = MoveLog::new();
    let mut c_now = c;
    let mut transformations = 0;
    if c_weight == 0 && d2.len() == 1 {
        let target = d2[0];
        while h.weight(target).unwrap() < 0 {
            let sub = elementary_transformation_in(&mut h, c_now, Side::Toward(e))?;
            c_now = sub.moves()[0].vertex;
            log.extend(sub);
            transformations += 1;
        }
    }
    let boundary_type = chain_type(&h.sub(std::iter::once(c_now).chain(d2.iter().copied()))?);
    Ok(EmptyD1Shape {
        c_weight,
        d2_irreducible: d2.len() == 1,
        splitting_value,
        transformations,
        d2_weight_after: d2.first().and_then(|&v| h.weight(v)),
        e_weight_after: h.weight(e).unwrap(),
        boundary_type,
        graph: h,
        log,
    })
}
