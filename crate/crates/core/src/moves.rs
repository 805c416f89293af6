//! Blow-ups and blow-downs on weighted dual graphs, with move records that
//! replay and invert exactly.
//!
//! Every move preserves the discriminant of the whole graph: a blow-up
//! replaces the lattice `L` by `L + <-1>` up to a unimodular change of basis.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{VertexId, WeightedGraph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MoveKind {
    /// Blow-up of a point lying on no component.
    BlowUpPoint,
    /// Blow-up of a point lying on exactly one component.
    BlowUpFree { on: VertexId },
    /// Blow-up of an intersection point of two components.
    BlowUpEdge { ends: (VertexId, VertexId) },
    /// Contraction of a (-1)-curve meeting the listed components.
    BlowDown { neighbors: Vec<VertexId> },
}

/// One recorded move. `vertex` is the component created (blow-ups) or
/// removed (blow-downs); `index` is its position in the canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    #[serde(flatten)]
    pub kind: MoveKind,
    pub vertex: VertexId,
    pub index: usize,
    pub weight_deltas: BTreeMap<VertexId, i64>,
}

impl Move {
    pub fn is_blow_up(&self) -> bool {
        !matches!(self.kind, MoveKind::BlowDown { .. })
    }

    /// The move undoing this one.
    pub fn inverse(&self) -> Move {
        let flip = |d: &BTreeMap<VertexId, i64>| d.iter().map(|(&k, &v)| (k, -v)).collect();
        let kind = match &self.kind {
            MoveKind::BlowUpPoint => MoveKind::BlowDown { neighbors: vec![] },
            MoveKind::BlowUpFree { on } => MoveKind::BlowDown { neighbors: vec![*on] },
            MoveKind::BlowUpEdge { ends } => MoveKind::BlowDown {
                neighbors: vec![ends.0, ends.1],
            },
            MoveKind::BlowDown { neighbors } => match neighbors.as_slice() {
                [] => MoveKind::BlowUpPoint,
                [a] => MoveKind::BlowUpFree { on: *a },
                [a, b] => MoveKind::BlowUpEdge { ends: (*a, *b) },
                _ => unreachable!("blow-downs have at most two neighbors"),
            },
        };
        Move {
            kind,
            vertex: self.vertex,
            index: self.index,
            weight_deltas: flip(&self.weight_deltas),
        }
    }

    /// Replays the move on `g`, reusing the recorded ids and position.
    pub fn apply(&self, g: &mut WeightedGraph) -> Result<()> {
        let mismatch = |what: &str| Error::ReplayMismatch(format!("{what} for vertex {}", self.vertex));
        match &self.kind {
            MoveKind::BlowUpPoint => {
                g.insert_vertex_at(self.index, self.vertex, -1)?;
            }
            MoveKind::BlowUpFree { on } => {
                if !g.contains(*on) {
                    return Err(Error::UnknownVertex(*on));
                }
                g.insert_vertex_at(self.index, self.vertex, -1)?;
                g.add_to_weight(*on, -1)?;
                g.add_edge(*on, self.vertex)?;
            }
            MoveKind::BlowUpEdge { ends: (u, v) } => {
                g.remove_edge(*u, *v)?;
                g.insert_vertex_at(self.index, self.vertex, -1)?;
                g.add_to_weight(*u, -1)?;
                g.add_to_weight(*v, -1)?;
                g.add_edge(*u, self.vertex)?;
                g.add_edge(self.vertex, *v)?;
            }
            MoveKind::BlowDown { neighbors } => {
                let w = self.vertex;
                if g.weight(w) != Some(-1) {
                    return Err(mismatch("weight is not -1"));
                }
                let mut actual = g.neighbors(w);
                let mut expected = neighbors.clone();
                actual.sort();
                expected.sort();
                if actual != expected || g.degree(w) != neighbors.len() {
                    return Err(mismatch("neighbors differ"));
                }
                if g.index_of(w) != Some(self.index) {
                    return Err(mismatch("position differs"));
                }
                contract(g, w)?;
            }
        }
        Ok(())
    }
}

/// Ordered sequence of moves.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MoveLog {
    moves: Vec<Move>,
}

impl MoveLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, m: Move) {
        self.moves.push(m);
    }

    pub fn extend(&mut self, other: MoveLog) {
        self.moves.extend(other.moves);
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn blow_ups(&self) -> usize {
        self.moves.iter().filter(|m| m.is_blow_up()).count()
    }

    pub fn blow_downs(&self) -> usize {
        self.len() - self.blow_ups()
    }

    /// Net change of the Picard rank along the log.
    pub fn rho_delta(&self) -> i64 {
        self.blow_ups() as i64 - self.blow_downs() as i64
    }

    /// The log undoing this one.
    pub fn inverse(&self) -> MoveLog {
        MoveLog {
            moves: self.moves.iter().rev().map(Move::inverse).collect(),
        }
    }

    pub fn replay(&self, source: &WeightedGraph) -> Result<WeightedGraph> {
        let mut g = source.clone();
        for m in &self.moves {
            m.apply(&mut g)?;
        }
        Ok(g)
    }
}

fn new_vertex(g: &mut WeightedGraph) -> (VertexId, usize) {
    let id = g.fresh_id();
    let index = g.len();
    g.add_vertex(id, -1).expect("fresh id");
    (id, index)
}

pub(crate) fn blow_up_point_in(g: &mut WeightedGraph) -> Move {
    let (w, index) = new_vertex(g);
    Move {
        kind: MoveKind::BlowUpPoint,
        vertex: w,
        index,
        weight_deltas: BTreeMap::new(),
    }
}

pub(crate) fn blow_up_free_in(g: &mut WeightedGraph, v: VertexId) -> Result<Move> {
    if !g.contains(v) {
        return Err(Error::UnknownVertex(v));
    }
    let (w, index) = new_vertex(g);
    g.add_to_weight(v, -1)?;
    g.add_edge(v, w)?;
    Ok(Move {
        kind: MoveKind::BlowUpFree { on: v },
        vertex: w,
        index,
        weight_deltas: BTreeMap::from([(v, -1)]),
    })
}

pub(crate) fn blow_up_edge_in(g: &mut WeightedGraph, u: VertexId, v: VertexId) -> Result<Move> {
    if g.edge_multiplicity(u, v) == 0 {
        return Err(Error::UnknownEdge(u, v));
    }
    g.remove_edge(u, v)?;
    let (w, index) = new_vertex(g);
    g.add_to_weight(u, -1)?;
    g.add_to_weight(v, -1)?;
    g.add_edge(u, w)?;
    g.add_edge(w, v)?;
    Ok(Move {
        kind: MoveKind::BlowUpEdge { ends: (u, v) },
        vertex: w,
        index,
        weight_deltas: BTreeMap::from([(u, -1), (v, -1)]),
    })
}

/// Checks the blow-down preconditions without changing anything.
pub fn can_blow_down(g: &WeightedGraph, v: VertexId) -> Result<()> {
    match g.weight(v) {
        None => return Err(Error::UnknownVertex(v)),
        Some(-1) => {}
        Some(_) => return Err(Error::NotMinusOne(v)),
    }
    let deg = g.degree(v);
    if deg >= 3 {
        return Err(Error::TooBranched(v));
    }
    if deg == 2 {
        let nb = g.neighbors(v);
        // A double edge to one neighbor would contract to a tangency.
        if nb.len() != 2 || g.edge_multiplicity(nb[0], nb[1]) > 0 {
            return Err(Error::NotSnc(v));
        }
    }
    Ok(())
}

fn contract(g: &mut WeightedGraph, v: VertexId) -> Result<(Vec<VertexId>, usize)> {
    let nb = g.neighbors(v);
    let index = g.remove_vertex(v)?;
    for &x in &nb {
        g.add_to_weight(x, 1)?;
    }
    if let [a, b] = nb.as_slice() {
        g.add_edge(*a, *b)?;
    }
    Ok((nb, index))
}

pub(crate) fn blow_down_in(g: &mut WeightedGraph, v: VertexId) -> Result<Move> {
    can_blow_down(g, v)?;
    let (neighbors, index) = contract(g, v)?;
    let weight_deltas = neighbors.iter().map(|&x| (x, 1)).collect();
    Ok(Move {
        kind: MoveKind::BlowDown { neighbors },
        vertex: v,
        index,
        weight_deltas,
    })
}

/// Blow-up at a point lying on no component: a new isolated (-1)-vertex.
pub fn blow_up_point(g: &WeightedGraph) -> (WeightedGraph, Move) {
    let mut h = g.clone();
    let m = blow_up_point_in(&mut h);
    (h, m)
}

/// Blow-up at a general point of `v`.
pub fn blow_up_free(g: &WeightedGraph, v: VertexId) -> Result<(WeightedGraph, Move)> {
    let mut h = g.clone();
    let m = blow_up_free_in(&mut h, v)?;
    Ok((h, m))
}

/// Blow-up at an intersection point of `u` and `v`.
pub fn blow_up_edge(g: &WeightedGraph, u: VertexId, v: VertexId) -> Result<(WeightedGraph, Move)> {
    let mut h = g.clone();
    let m = blow_up_edge_in(&mut h, u, v)?;
    Ok((h, m))
}

pub fn blow_down(g: &WeightedGraph, v: VertexId) -> Result<(WeightedGraph, Move)> {
    let mut h = g.clone();
    let m = blow_down_in(&mut h, v)?;
    Ok((h, m))
}

/// Contracts unprotected non-branching (-1)-vertices, smallest id first,
/// until none is left. Candidates whose contraction would break snc are
/// skipped.
pub fn snc_minimalize(g: &WeightedGraph, protected: &BTreeSet<VertexId>) -> (WeightedGraph, MoveLog) {
    let mut h = g.clone();
    let mut log = MoveLog::new();
    loop {
        let mut candidates: Vec<VertexId> = h
            .vertices()
            .filter(|v| !protected.contains(v) && can_blow_down(&h, *v).is_ok())
            .collect();
        candidates.sort();
        let Some(&v) = candidates.first() else {
            break;
        };
        log.push(blow_down_in(&mut h, v).expect("checked"));
    }
    (h, log)
}

/// Where the blow-up of an elementary transformation happens.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// At the intersection point with this neighbor.
    Toward(VertexId),
    /// At a point meeting no other component.
    Free,
}

/// Blow up on a 0-curve and contract its proper transform. The new 0-curve
/// is the vertex created by the first logged move.
pub fn elementary_transformation(
    g: &WeightedGraph,
    zero_vertex: VertexId,
    side: Side,
) -> Result<(WeightedGraph, MoveLog)> {
    let mut h = g.clone();
    let log = elementary_transformation_in(&mut h, zero_vertex, side)?;
    Ok((h, log))
}

pub(crate) fn elementary_transformation_in(
    g: &mut WeightedGraph,
    zero_vertex: VertexId,
    side: Side,
) -> Result<MoveLog> {
    match g.weight(zero_vertex) {
        None => return Err(Error::UnknownVertex(zero_vertex)),
        Some(0) => {}
        Some(_) => return Err(Error::NotZeroCurve(zero_vertex)),
    }
    let deg = g.degree(zero_vertex);
    if deg > 2 || (deg == 2 && side == Side::Free) {
        return Err(Error::TooBranched(zero_vertex));
    }
    let mut scratch = g.clone();
    let mut log = MoveLog::new();
    let up = match side {
        Side::Toward(n) => blow_up_edge_in(&mut scratch, zero_vertex, n)?,
        Side::Free => blow_up_free_in(&mut scratch, zero_vertex)?,
    };
    log.push(up);
    log.push(blow_down_in(&mut scratch, zero_vertex)?);
    *g = scratch;
    Ok(log)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::discriminant;
    use crate::shape::chain_type;
    use num_bigint::BigInt;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn ty(g: &WeightedGraph) -> Vec<i64> {
        chain_type(&g.whole()).unwrap().entries().to_vec()
    }

    #[test]
    fn blow_up_free_on_zero_curve() {
        let g = WeightedGraph::chain_of_type(&[0]);
        let (h, m) = blow_up_free(&g, v(0)).unwrap();
        assert_eq!(ty(&h), vec![1, 1]);
        assert_eq!(discriminant(&g.whole()), BigInt::from(0));
        assert_eq!(discriminant(&h.whole()), BigInt::from(0));
        assert_eq!(m.vertex, v(1));
        let g = WeightedGraph::chain_of_type(&[2]);
        let (h, _) = blow_up_free(&g, v(0)).unwrap();
        assert_eq!(ty(&h), vec![1, 3]);
    }

    #[test]
    fn blow_up_edge_examples() {
        let g = WeightedGraph::chain_of_type(&[1, 1]);
        let (h, _) = blow_up_edge(&g, v(0), v(1)).unwrap();
        assert_eq!(ty(&h), vec![2, 1, 2]);
        assert_eq!(discriminant(&h.whole()), BigInt::from(0));
        let g = WeightedGraph::chain_of_type(&[0, 0]);
        let (h, _) = blow_up_edge(&g, v(0), v(1)).unwrap();
        assert_eq!(ty(&h), vec![1, 1, 1]);
        assert_eq!(discriminant(&h.whole()), BigInt::from(-1));
        assert_eq!(
            blow_up_edge(&g, v(0), v(0)).unwrap_err(),
            Error::UnknownEdge(v(0), v(0))
        );
    }

    #[test]
    fn blow_down_examples() {
        let g = WeightedGraph::chain_of_type(&[2, 1, 2]);
        let (h, _) = blow_down(&g, v(1)).unwrap();
        assert_eq!(ty(&h), vec![1, 1]);
        let g = WeightedGraph::chain_of_type(&[1, 2]);
        let (h, _) = blow_down(&g, v(0)).unwrap();
        assert_eq!(ty(&h), vec![1]);
        assert_eq!(discriminant(&g.whole()), discriminant(&h.whole()));
        let star = WeightedGraph::build(&[(0, -1), (1, -2), (2, -2), (3, -2)], &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(blow_down(&star, v(0)).unwrap_err(), Error::TooBranched(v(0)));
        let g = WeightedGraph::chain_of_type(&[2]);
        assert_eq!(blow_down(&g, v(0)).unwrap_err(), Error::NotMinusOne(v(0)));
        let tri = WeightedGraph::build(&[(0, -1), (1, -2), (2, -2)], &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(blow_down(&tri, v(0)).unwrap_err(), Error::NotSnc(v(0)));
    }

    #[test]
    fn round_trip_restores_graph() {
        let g = WeightedGraph::build(&[(5, 0), (2, -3), (9, 1)], &[(5, 2), (2, 9)]).unwrap();
        let (h, m) = blow_up_edge(&g, v(2), v(9)).unwrap();
        let (back, down) = blow_down(&h, m.vertex).unwrap();
        assert_eq!(back, g);
        assert_eq!(down, m.inverse());
        let mut again = h.clone();
        m.inverse().apply(&mut again).unwrap();
        assert_eq!(again, g);
    }

    #[test]
    fn undo_of_blow_down_restores_position() {
        let g = WeightedGraph::chain_of_type(&[2, 1, 2, 3]);
        let (h, m) = blow_down(&g, v(1)).unwrap();
        let mut back = h.clone();
        m.inverse().apply(&mut back).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn minimalize_examples() {
        let g = WeightedGraph::chain_of_type(&[2, 1, 2]);
        let (h, log) = snc_minimalize(&g, &BTreeSet::new());
        assert_eq!(ty(&h), vec![0]);
        assert_eq!(log.len(), 2);
        let protected = BTreeSet::from([v(0), v(2)]);
        let (h, log) = snc_minimalize(&g, &protected);
        assert_eq!(ty(&h), vec![1, 1]);
        assert_eq!(log.len(), 1);
        let g = WeightedGraph::chain_of_type(&[2, 3, 2]);
        let (h, log) = snc_minimalize(&g, &BTreeSet::new());
        assert_eq!(h, g);
        assert!(log.is_empty());
    }

    #[test]
    fn elementary_transformation_examples() {
        let g = WeightedGraph::chain_of_type(&[2, 0, 2]);
        let (h, log) = elementary_transformation(&g, v(1), Side::Toward(v(0))).unwrap();
        assert_eq!(log.len(), 2);
        // reading from the old left end: [3, 0, 1]
        let order = crate::shape::chain_order(&h.whole()).unwrap();
        let reading: Vec<i64> = order.iter().map(|&x| -h.weight(x).unwrap()).collect();
        assert_eq!(reading, vec![1, 0, 3]);
        assert_eq!(h.weight(v(0)), Some(-3));

        let g = WeightedGraph::chain_of_type(&[0, 3]);
        let (h, _) = elementary_transformation(&g, v(0), Side::Free).unwrap();
        assert_eq!(ty(&h), vec![0, 2]);

        let star = WeightedGraph::build(&[(0, 0), (1, -2), (2, -2), (3, -2)], &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(
            elementary_transformation(&star, v(0), Side::Free).unwrap_err(),
            Error::TooBranched(v(0))
        );
        let g = WeightedGraph::chain_of_type(&[2, 1]);
        assert_eq!(
            elementary_transformation(&g, v(1), Side::Free).unwrap_err(),
            Error::NotZeroCurve(v(1))
        );
    }

    #[test]
    fn log_replay_and_inverse() {
        let g = WeightedGraph::chain_of_type(&[0, 0]);
        let mut h = g.clone();
        let mut log = MoveLog::new();
        log.push(blow_up_edge_in(&mut h, v(0), v(1)).unwrap());
        log.push(blow_up_free_in(&mut h, v(2)).unwrap());
        log.push(blow_up_point_in(&mut h));
        assert_eq!(log.replay(&g).unwrap(), h);
        assert_eq!(log.inverse().replay(&h).unwrap(), g);
        assert_eq!(log.rho_delta(), 3);
    }
}
