//! Fibers of P^1-fibrations as dual graphs with multiplicities, their
//! exhaustive enumeration, structural validation, and Fujita's count
//! `h + nu + rho = Sigma + #D + 2` on fibration models.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{VertexId, WeightedGraph};
use crate::lattice::{discriminant, inertia, intersection_matrix};
use crate::moves::{blow_down_in, blow_up_edge_in, blow_up_free_in, can_blow_down, Move, MoveKind, MoveLog};
use crate::shape::{chain_order, classify_shape};

/// A fiber, built from the single 0-curve `root` by the blow-ups in
/// `history`. Multiplicities are those of the full fiber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fiber {
    pub graph: WeightedGraph,
    pub multiplicity: BTreeMap<VertexId, u64>,
    pub root: VertexId,
    pub history: MoveLog,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberPosition {
    /// A general point of the vertex.
    Vertex(VertexId),
    /// The intersection point of two vertices.
    Edge(VertexId, VertexId),
}

fn seed_graph(root: VertexId) -> WeightedGraph {
    let mut g = WeightedGraph::new();
    g.add_vertex(root, 0).expect("empty graph");
    g
}

fn track_multiplicity(mult: &mut BTreeMap<VertexId, u64>, m: &Move) -> Result<()> {
    let value = match &m.kind {
        MoveKind::BlowUpFree { on } => mult[on],
        MoveKind::BlowUpEdge { ends: (u, v) } => mult[u] + mult[v],
        _ => {
            return Err(Error::NotAFiber(format!(
                "history contains a non-fiber move at {}",
                m.vertex
            )))
        }
    };
    mult.insert(m.vertex, value);
    Ok(())
}

impl Fiber {
    /// The smooth fiber `[0]` with multiplicity one.
    pub fn smooth() -> Fiber {
        Self::smooth_at(VertexId(0))
    }

    pub fn smooth_at(root: VertexId) -> Fiber {
        Fiber {
            graph: seed_graph(root),
            multiplicity: BTreeMap::from([(root, 1)]),
            root,
            history: MoveLog::new(),
        }
    }

    /// Recovers the blow-up history and multiplicities of a fiber graph by
    /// contracting (-1)-curves, smallest id first, down to a single 0-curve.
    pub fn from_graph(g: &WeightedGraph) -> Result<Fiber> {
        let mut h = g.clone();
        let mut down = MoveLog::new();
        while h.len() > 1 {
            let v = h
                .vertices()
                .filter(|&v| can_blow_down(&h, v).is_ok())
                .min()
                .ok_or_else(|| Error::NotAFiber("no contractible (-1)-vertex left".into()))?;
            down.push(blow_down_in(&mut h, v)?);
        }
        let root = h
            .vertices()
            .next()
            .ok_or_else(|| Error::NotAFiber("empty graph".into()))?;
        if h.weight(root) != Some(0) {
            return Err(Error::NotAFiber(format!(
                "contracts to weight {} instead of 0",
                h.weight(root).unwrap()
            )));
        }
        let history = down.inverse();
        let graph = history.replay(&h)?;
        let mut multiplicity = BTreeMap::from([(root, 1)]);
        for m in history.moves() {
            track_multiplicity(&mut multiplicity, m)?;
        }
        debug_assert_eq!(&graph, g);
        Ok(Fiber {
            graph,
            multiplicity,
            root,
            history,
        })
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn mult(&self, v: VertexId) -> u64 {
        self.multiplicity[&v]
    }

    /// Rebuilds the graph from the history, checking it matches.
    pub fn replay(&self) -> Result<WeightedGraph> {
        self.history.replay(&seed_graph(self.root))
    }

    /// Rooted canonical encoding over `(weight, multiplicity)` labels,
    /// minimized over all roots. Equal strings mean isomorphic fibers.
    pub fn canonical_form(&self) -> String {
        let g = &self.graph;
        fn enc(g: &WeightedGraph, mult: &BTreeMap<VertexId, u64>, v: VertexId, parent: Option<VertexId>) -> String {
            let mut kids: Vec<String> = g
                .neighbors(v)
                .into_iter()
                .filter(|&x| Some(x) != parent)
                .map(|x| enc(g, mult, x, Some(v)))
                .collect();
            kids.sort();
            format!("({}:{}{})", g.weight(v).unwrap(), mult[&v], kids.concat())
        }
        g.vertices()
            .map(|r| enc(g, &self.multiplicity, r, None))
            .min()
            .unwrap_or_default()
    }
}

/// Blow-up of a fiber. The new component's multiplicity is that of the
/// carrier, or the sum over both branches at an intersection point.
pub fn fiber_blow_up(f: &Fiber, position: FiberPosition) -> Result<Fiber> {
    let mut out = f.clone();
    let m = match position {
        FiberPosition::Vertex(v) => blow_up_free_in(&mut out.graph, v)?,
        FiberPosition::Edge(u, v) => blow_up_edge_in(&mut out.graph, u, v)?,
    };
    track_multiplicity(&mut out.multiplicity, &m)?;
    out.history.push(m);
    Ok(out)
}

/// All fibers with at most `max_vertices` components up to isomorphism,
/// ordered by size and then by canonical form.
pub fn enumerate_fibers(max_vertices: usize) -> Vec<Fiber> {
    let mut all = Vec::new();
    if max_vertices == 0 {
        return all;
    }
    let mut level: BTreeMap<String, Fiber> = BTreeMap::new();
    let seed = Fiber::smooth();
    level.insert(seed.canonical_form(), seed);
    for _ in 1..max_vertices {
        let mut next: BTreeMap<String, Fiber> = BTreeMap::new();
        for f in level.values() {
            let positions = f
                .graph
                .vertices()
                .map(FiberPosition::Vertex)
                .chain(f.graph.edges().map(|(u, v, _)| FiberPosition::Edge(u, v)));
            for p in positions {
                let child = fiber_blow_up(f, p).expect("valid position");
                next.entry(child.canonical_form()).or_insert(child);
            }
        }
        all.extend(std::mem::replace(&mut level, next).into_values());
    }
    all.extend(level.into_values());
    all
}

/// Number of fibers per component count `1..=max_vertices`.
pub fn fiber_counts(max_vertices: usize) -> Vec<usize> {
    let fibers = enumerate_fibers(max_vertices);
    (1..=max_vertices)
        .map(|k| fibers.iter().filter(|f| f.len() == k).count())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum FiberViolation {
    NotATree,
    BranchingMinusOne {
        vertex: VertexId,
    },
    NonZeroDiscriminant {
        #[serde(with = "crate::decimal")]
        value: BigInt,
    },
    NotNumericallyTrivial,
    /// The multiplicities do not span the kernel of the intersection form.
    KernelMismatch {
        rank: usize,
    },
    TooManyComponentsWithoutL {
        count: usize,
    },
    NoChainSide,
    MultiplicityOneCount {
        count: usize,
    },
    MultiplicityOneNotTip {
        vertex: VertexId,
    },
    MultiplicityOneSplit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberReport {
    pub tier1: Vec<FiberViolation>,
    /// Present only when the fiber has exactly one (-1)-component.
    pub unique_minus_one: Option<VertexId>,
    pub tier2: Vec<FiberViolation>,
}

impl FiberReport {
    pub fn passes(&self) -> bool {
        self.tier1.is_empty() && self.tier2.is_empty()
    }

    pub fn violations(&self) -> usize {
        self.tier1.len() + self.tier2.len()
    }
}

/// Checks the structure every fiber has, and the finer structure of fibers
/// with a unique (-1)-component.
pub fn validate_fiber(f: &Fiber) -> FiberReport {
    let g = &f.graph;
    let whole = g.whole();
    let mut tier1 = Vec::new();
    let shape = classify_shape(&whole);
    if !shape.is_tree {
        tier1.push(FiberViolation::NotATree);
    }
    let minus_ones: Vec<VertexId> = g.vertices().filter(|&v| g.weight(v) == Some(-1)).collect();
    for &v in &minus_ones {
        if g.degree(v) > 2 {
            tier1.push(FiberViolation::BranchingMinusOne { vertex: v });
        }
    }
    let d = discriminant(&whole);
    if !d.is_zero() {
        tier1.push(FiberViolation::NonZeroDiscriminant { value: d });
    }
    let q = intersection_matrix(&whole);
    let m: Vec<BigInt> = g
        .vertices()
        .map(|v| BigInt::from(f.multiplicity.get(&v).copied().unwrap_or(0)))
        .collect();
    if q.mul_vec(&m).iter().any(|x| !x.is_zero()) || m.iter().any(|x| x.is_zero()) {
        tier1.push(FiberViolation::NotNumericallyTrivial);
    }
    let zero = inertia(&q).zero;
    if zero != 1 {
        tier1.push(FiberViolation::KernelMismatch { rank: g.len() - zero });
    }

    let unique_minus_one = match minus_ones.as_slice() {
        [l] => Some(*l),
        _ => None,
    };
    let mut tier2 = Vec::new();
    if let (Some(l), true) = (unique_minus_one, shape.is_tree) {
        let rest = whole.without([l]);
        let parts = rest.components();
        if parts.len() > 2 {
            tier2.push(FiberViolation::TooManyComponentsWithoutL { count: parts.len() });
        }
        if parts.len() == 2
            && !parts
                .iter()
                .any(|p| classify_shape(&rest.restrict(p.iter().copied())).is_chain)
        {
            tier2.push(FiberViolation::NoChainSide);
        }
        let ones: Vec<VertexId> = g.vertices().filter(|&v| f.multiplicity.get(&v) == Some(&1)).collect();
        if ones.len() != 2 {
            tier2.push(FiberViolation::MultiplicityOneCount { count: ones.len() });
        }
        for &v in &ones {
            if g.degree(v) > 1 {
                tier2.push(FiberViolation::MultiplicityOneNotTip { vertex: v });
            }
        }
        if !shape.is_chain && ones.len() == 2 {
            let same = parts.iter().any(|p| p.contains(&ones[0]) && p.contains(&ones[1]));
            if !same {
                tier2.push(FiberViolation::MultiplicityOneSplit);
            }
        }
    }
    FiberReport {
        tier1,
        unique_minus_one,
        tier2,
    }
}

/// For a chain fiber with a unique (-1)-component `L`: the discriminants of
/// the two sides of `L` and the multiplicity of `L`.
pub fn chain_fiber_sides(f: &Fiber) -> Option<(BigInt, BigInt, u64)> {
    let whole = f.graph.whole();
    let order = chain_order(&whole)?;
    let report = validate_fiber(f);
    let l = report.unique_minus_one?;
    let pos = order.iter().position(|&v| v == l)?;
    let left = whole.restrict(order[..pos].iter().copied());
    let right = whole.restrict(order[pos + 1..].iter().copied());
    Some((discriminant(&left), discriminant(&right), f.mult(l)))
}

/// A fiber of a fibration model with the components lying in the boundary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFiber {
    pub name: String,
    pub fiber: Fiber,
    pub boundary: BTreeSet<VertexId>,
}

impl ModelFiber {
    /// Number of components outside the boundary.
    pub fn sigma(&self) -> usize {
        self.fiber.len() - self.boundary.len()
    }
}

/// Incidence record of a section: the component it meets in each fiber, in
/// the order of `FibrationModel::fibers`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub name: String,
    pub in_boundary: bool,
    pub meets: Vec<VertexId>,
}

/// Singular fibers and fibers meeting the boundary, with sections. Fibers
/// not listed are smooth and disjoint from the boundary's vertical part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrationModel {
    pub fibers: Vec<ModelFiber>,
    pub sections: Vec<Section>,
    pub rho: i64,
}

fn rho_from_fibers(fibers: &[ModelFiber]) -> i64 {
    2 + fibers.iter().map(|f| f.fiber.len() as i64 - 1).sum::<i64>()
}

impl FibrationModel {
    /// Builds a model with `rho = 2 + sum (#F - 1)`.
    pub fn new(fibers: Vec<ModelFiber>, sections: Vec<Section>) -> Result<FibrationModel> {
        let rho = rho_from_fibers(&fibers);
        Self::with_rho(fibers, sections, rho)
    }

    /// Builds a model carrying an externally maintained Picard rank, which
    /// must agree with the fiber sizes.
    pub fn with_rho(fibers: Vec<ModelFiber>, sections: Vec<Section>, rho: i64) -> Result<FibrationModel> {
        let model = FibrationModel { fibers, sections, rho };
        model.check()?;
        Ok(model)
    }

    fn check(&self) -> Result<()> {
        let bad = |s: String| Err(Error::ModelInconsistent(s));
        if self.rho != rho_from_fibers(&self.fibers) {
            return bad(format!(
                "rho {} but fibers give {}",
                self.rho,
                rho_from_fibers(&self.fibers)
            ));
        }
        for f in &self.fibers {
            if let Some(v) = f.boundary.iter().find(|v| !f.fiber.graph.contains(**v)) {
                return bad(format!("boundary vertex {v} not in fiber {}", f.name));
            }
        }
        for s in &self.sections {
            if s.meets.len() != self.fibers.len() {
                return bad(format!("section {} lists {} fibers", s.name, s.meets.len()));
            }
            for (f, &v) in self.fibers.iter().zip(&s.meets) {
                match f.fiber.multiplicity.get(&v) {
                    Some(1) => {}
                    Some(k) => {
                        return bad(format!(
                            "section {} meets {v} of multiplicity {k} in {}",
                            s.name, f.name
                        ))
                    }
                    None => return bad(format!("section {} meets unknown vertex {v} in {}", s.name, f.name)),
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FujitaAccounting {
    /// Sections in the boundary.
    pub h: i64,
    /// Fibers entirely in the boundary.
    pub nu: i64,
    pub rho: i64,
    /// Sum over the other fibers of `sigma(F) - 1`.
    pub sigma_x: i64,
    /// Number of boundary components.
    pub boundary_size: i64,
    pub lhs: i64,
    pub rhs: i64,
}

pub fn fujita_accounting(model: &FibrationModel) -> Result<FujitaAccounting> {
    model.check()?;
    let h = model.sections.iter().filter(|s| s.in_boundary).count() as i64;
    let nu = model.fibers.iter().filter(|f| f.sigma() == 0).count() as i64;
    let sigma_x = model
        .fibers
        .iter()
        .filter(|f| f.sigma() > 0)
        .map(|f| f.sigma() as i64 - 1)
        .sum();
    let boundary_size = h + model.fibers.iter().map(|f| f.boundary.len() as i64).sum::<i64>();
    let lhs = h + nu + model.rho;
    let rhs = sigma_x + boundary_size + 2;
    if lhs != rhs {
        return Err(Error::ModelInconsistent(format!(
            "h + nu + rho = {lhs} but Sigma + #D + 2 = {rhs}"
        )));
    }
    Ok(FujitaAccounting {
        h,
        nu,
        rho: model.rho,
        sigma_x,
        boundary_size,
        lhs,
        rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape::chain_type;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn mults_along_chain(f: &Fiber) -> (Vec<i64>, Vec<u64>) {
        let order = chain_order(&f.graph.whole()).unwrap();
        (
            order.iter().map(|&x| -f.graph.weight(x).unwrap()).collect(),
            order.iter().map(|&x| f.mult(x)).collect(),
        )
    }

    #[test]
    fn blow_up_examples() {
        let f = fiber_blow_up(&Fiber::smooth(), FiberPosition::Vertex(v(0))).unwrap();
        assert_eq!(mults_along_chain(&f), (vec![1, 1], vec![1, 1]));
        let f = fiber_blow_up(&f, FiberPosition::Edge(v(0), v(1))).unwrap();
        assert_eq!(mults_along_chain(&f), (vec![2, 1, 2], vec![1, 2, 1]));
        let f = fiber_blow_up(&f, FiberPosition::Edge(v(2), v(1))).unwrap();
        assert_eq!(mults_along_chain(&f), (vec![2, 2, 1, 3], vec![1, 2, 3, 1]));
        assert!(validate_fiber(&f).passes());
        assert_eq!(f.replay().unwrap(), f.graph);
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(fiber_counts(3), vec![1, 1, 2]);
        let types: Vec<String> = enumerate_fibers(3)
            .iter()
            .map(|f| chain_type(&f.graph.whole()).unwrap().to_string())
            .collect();
        assert!(types.contains(&"[2,1,2]".to_string()));
        assert!(types.contains(&"[1,2,1]".to_string()));
    }

    #[test]
    fn validation_examples() {
        let fibers = enumerate_fibers(3);
        let find = |t: &str| {
            fibers
                .iter()
                .find(|f| chain_type(&f.graph.whole()).unwrap().to_string() == t)
                .unwrap()
        };
        let r = validate_fiber(find("[2,1,2]"));
        assert!(r.passes());
        assert!(r.unique_minus_one.is_some());
        let r = validate_fiber(find("[1,2,1]"));
        assert!(r.tier1.is_empty());
        assert_eq!(r.unique_minus_one, None);

        let g = WeightedGraph::build(&[(0, -1), (1, -2), (2, -2), (3, -2)], &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let bad = Fiber {
            graph: g,
            multiplicity: BTreeMap::from([(v(0), 2), (v(1), 1), (v(2), 1), (v(3), 1)]),
            root: v(0),
            history: MoveLog::new(),
        };
        let r = validate_fiber(&bad);
        assert!(r.tier1.contains(&FiberViolation::BranchingMinusOne { vertex: v(0) }));
    }

    #[test]
    fn from_graph_recovers_multiplicities() {
        let g = WeightedGraph::chain_of_type(&[2, 2, 1, 3]);
        let f = Fiber::from_graph(&g).unwrap();
        assert_eq!(f.graph, g);
        assert_eq!(mults_along_chain(&f).1, vec![1, 2, 3, 1]);
        assert_eq!(chain_fiber_sides(&f), Some((BigInt::from(3), BigInt::from(3), 3)));
        let g = WeightedGraph::chain_of_type(&[2, 2]);
        assert!(matches!(Fiber::from_graph(&g), Err(Error::NotAFiber(_))));
    }

    fn boundary_of(f: &Fiber, ids: &[u32]) -> BTreeSet<VertexId> {
        let _ = f;
        ids.iter().map(|&i| v(i)).collect()
    }

    #[test]
    fn fujita_examples() {
        let smooth = Fiber::smooth();
        let model = FibrationModel::new(
            vec![ModelFiber {
                name: "F".into(),
                boundary: boundary_of(&smooth, &[0]),
                fiber: smooth,
            }],
            vec![Section {
                name: "H".into(),
                in_boundary: true,
                meets: vec![v(0)],
            }],
        )
        .unwrap();
        let acc = fujita_accounting(&model).unwrap();
        assert_eq!(
            (acc.h, acc.nu, acc.rho, acc.sigma_x, acc.boundary_size),
            (1, 1, 2, 0, 2)
        );

        let f212 = Fiber::from_graph(&WeightedGraph::chain_of_type(&[2, 1, 2])).unwrap();
        let ends: Vec<VertexId> = f212.graph.vertices().filter(|&x| f212.mult(x) == 1).collect();
        let mid: Vec<VertexId> = f212.graph.vertices().filter(|&x| f212.mult(x) == 2).collect();
        let one = ModelFiber {
            name: "F1".into(),
            boundary: ends.iter().copied().collect(),
            fiber: f212.clone(),
        };
        assert_eq!(one.sigma(), 1);
        let two = ModelFiber {
            name: "F2".into(),
            boundary: [ends[0]].into_iter().collect(),
            fiber: f212.clone(),
        };
        assert_eq!(two.sigma(), 2);
        let model = FibrationModel::new(
            vec![one, two],
            vec![Section {
                name: "H".into(),
                in_boundary: true,
                meets: vec![ends[0], ends[0]],
            }],
        )
        .unwrap();
        let acc = fujita_accounting(&model).unwrap();
        assert_eq!(acc.sigma_x, 1);
        assert_eq!(acc.lhs, acc.rhs);

        let err = FibrationModel::new(
            vec![ModelFiber {
                name: "F".into(),
                boundary: BTreeSet::new(),
                fiber: f212,
            }],
            vec![Section {
                name: "H".into(),
                in_boundary: false,
                meets: vec![mid[0]],
            }],
        );
        assert!(matches!(err, Err(Error::ModelInconsistent(_))));
    }
}
