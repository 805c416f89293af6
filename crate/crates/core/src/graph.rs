//! Weighted dual graphs of snc divisors.
//!
//! A vertex is a rational component carrying its self-intersection; an edge is
//! one transversal intersection point. Vertices keep their insertion order,
//! which is the canonical row order of every matrix built from the graph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Stable identifier of a component. Fresh ids are never handed out twice by
/// the same graph.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Self-intersection number of a component.
pub type Weight = i64;

fn edge_key(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(into = "GraphRecord", try_from = "GraphRecord")]
pub struct WeightedGraph {
    weights: IndexMap<VertexId, Weight>,
    edges: BTreeMap<(VertexId, VertexId), u32>,
    next_id: u32,
}

/// Serialized shape: vertices in canonical order, one entry per edge
/// (repeated for multi-edges) and the id allocator.
#[derive(Serialize, Deserialize)]
struct GraphRecord {
    vertices: Vec<(VertexId, Weight)>,
    edges: Vec<(VertexId, VertexId)>,
    next_id: u32,
}

impl From<WeightedGraph> for GraphRecord {
    fn from(g: WeightedGraph) -> Self {
        let edges = g
            .edges
            .iter()
            .flat_map(|(&(u, v), &c)| std::iter::repeat_n((u, v), c as usize))
            .collect();
        GraphRecord {
            vertices: g.weights.into_iter().collect(),
            edges,
            next_id: g.next_id,
        }
    }
}

impl TryFrom<GraphRecord> for WeightedGraph {
    type Error = Error;

    fn try_from(r: GraphRecord) -> Result<Self> {
        let mut g = WeightedGraph::new();
        for (v, w) in r.vertices {
            g.add_vertex(v, w)?;
        }
        for (u, v) in r.edges {
            g.add_edge(u, v)?;
        }
        g.next_id = g.next_id.max(r.next_id);
        Ok(g)
    }
}

impl PartialEq for WeightedGraph {
    /// Order-sensitive: two graphs are equal only if their canonical vertex
    /// orders agree as well. The id allocator is not compared.
    fn eq(&self, other: &Self) -> bool {
        self.weights.len() == other.weights.len()
            && self.weights.iter().eq(other.weights.iter())
            && self.edges == other.edges
    }
}

impl Eq for WeightedGraph {}

impl WeightedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from explicit vertex and edge lists.
    pub fn build(vertex_weights: &[(u32, Weight)], edges: &[(u32, u32)]) -> Result<Self> {
        let mut g = Self::new();
        for &(id, w) in vertex_weights {
            g.add_vertex(VertexId(id), w)?;
        }
        for &(u, v) in edges {
            g.add_edge(VertexId(u), VertexId(v))?;
        }
        Ok(g)
    }

    /// A chain with the given self-intersections, ids `0..k` left to right.
    pub fn chain(weights: &[Weight]) -> Self {
        let mut g = Self::new();
        for (i, &w) in weights.iter().enumerate() {
            g.add_vertex(VertexId(i as u32), w).expect("fresh id");
            if i > 0 {
                g.add_edge(VertexId(i as u32 - 1), VertexId(i as u32))
                    .expect("known endpoints");
            }
        }
        g
    }

    /// A chain of the given type `[a_1, ..., a_k]`, i.e. weights `-a_i`.
    pub fn chain_of_type(entries: &[i64]) -> Self {
        let weights: Vec<Weight> = entries.iter().map(|a| -a).collect();
        Self::chain(&weights)
    }

    pub fn add_vertex(&mut self, id: VertexId, weight: Weight) -> Result<()> {
        if self.weights.contains_key(&id) {
            return Err(Error::DuplicateId(id));
        }
        self.weights.insert(id, weight);
        self.next_id = self.next_id.max(id.0 + 1);
        Ok(())
    }

    pub(crate) fn insert_vertex_at(&mut self, index: usize, id: VertexId, weight: Weight) -> Result<()> {
        if self.weights.contains_key(&id) {
            return Err(Error::DuplicateId(id));
        }
        let index = index.min(self.weights.len());
        self.weights.shift_insert(index, id, weight);
        self.next_id = self.next_id.max(id.0 + 1);
        Ok(())
    }

    /// Adds one intersection point between `u` and `v`.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        for x in [u, v] {
            if !self.contains(x) {
                return Err(Error::UnknownEndpoint(x));
            }
        }
        *self.edges.entry(edge_key(u, v)).or_insert(0) += 1;
        Ok(())
    }

    /// Removes one intersection point between `u` and `v`.
    pub(crate) fn remove_edge(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        let key = edge_key(u, v);
        match self.edges.get_mut(&key) {
            Some(c) if *c > 1 => *c -= 1,
            Some(_) => {
                self.edges.remove(&key);
            }
            None => return Err(Error::UnknownEdge(u, v)),
        }
        Ok(())
    }

    /// Removes a vertex with its incident edges; returns its former index.
    pub(crate) fn remove_vertex(&mut self, v: VertexId) -> Result<usize> {
        let index = self.index_of(v).ok_or(Error::UnknownVertex(v))?;
        self.weights.shift_remove(&v);
        self.edges.retain(|&(a, b), _| a != v && b != v);
        Ok(index)
    }

    pub(crate) fn set_weight(&mut self, v: VertexId, w: Weight) -> Result<()> {
        let slot = self.weights.get_mut(&v).ok_or(Error::UnknownVertex(v))?;
        *slot = w;
        Ok(())
    }

    pub(crate) fn add_to_weight(&mut self, v: VertexId, delta: Weight) -> Result<()> {
        let slot = self.weights.get_mut(&v).ok_or(Error::UnknownVertex(v))?;
        *slot += delta;
        Ok(())
    }

    /// Reserves a fresh vertex id.
    pub(crate) fn fresh_id(&mut self) -> VertexId {
        let id = VertexId(self.next_id);
        self.next_id += 1;
        id
    }

    /// The id the next blow-up would receive.
    pub fn peek_fresh_id(&self) -> VertexId {
        VertexId(self.next_id)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.weights.contains_key(&v)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, v: VertexId) -> Option<Weight> {
        self.weights.get(&v).copied()
    }

    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        self.weights.get_index_of(&v)
    }

    /// Vertices in canonical (insertion) order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.weights.keys().copied()
    }

    pub fn weighted_vertices(&self) -> impl Iterator<Item = (VertexId, Weight)> + '_ {
        self.weights.iter().map(|(&v, &w)| (v, w))
    }

    /// Edges as `(u, v, multiplicity)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, u32)> + '_ {
        self.edges.iter().map(|(&(u, v), &c)| (u, v, c))
    }

    pub fn edge_total(&self) -> usize {
        self.edges.values().map(|&c| c as usize).sum()
    }

    pub fn edge_multiplicity(&self, u: VertexId, v: VertexId) -> u32 {
        self.edges.get(&edge_key(u, v)).copied().unwrap_or(0)
    }

    /// Distinct neighbors in canonical order.
    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let set: BTreeSet<VertexId> = self
            .edges
            .keys()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        self.vertices().filter(|x| set.contains(x)).collect()
    }

    /// Number of intersection points on `v`, counted with multiplicity.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .iter()
            .filter(|(&(a, b), _)| a == v || b == v)
            .map(|(_, &c)| c as usize)
            .sum()
    }

    /// The whole graph as a selection.
    pub fn whole(&self) -> SubDivisor<'_> {
        SubDivisor {
            graph: self,
            selected: self.vertices().collect(),
            members: self.vertices().collect(),
        }
    }

    /// Selects a vertex subset; the selection keeps canonical order.
    pub fn sub<I>(&self, ids: I) -> Result<SubDivisor<'_>>
    where
        I: IntoIterator<Item = VertexId>,
    {
        let members: BTreeSet<VertexId> = ids.into_iter().collect();
        if let Some(&bad) = members.iter().find(|v| !self.contains(**v)) {
            return Err(Error::UnknownVertex(bad));
        }
        let selected = self.vertices().filter(|v| members.contains(v)).collect();
        Ok(SubDivisor {
            graph: self,
            selected,
            members,
        })
    }

    /// The induced subgraph on `ids`, keeping ids and relative order.
    pub fn induced<I>(&self, ids: I) -> Result<WeightedGraph>
    where
        I: IntoIterator<Item = VertexId>,
    {
        let sub = self.sub(ids)?;
        Ok(sub.to_graph())
    }
}

/// A selected set of components of a parent graph. All matrix data is that
/// of the induced subgraph.
#[derive(Clone, Debug)]
pub struct SubDivisor<'g> {
    graph: &'g WeightedGraph,
    selected: Vec<VertexId>,
    members: BTreeSet<VertexId>,
}

impl<'g> SubDivisor<'g> {
    pub fn parent(&self) -> &'g WeightedGraph {
        self.graph
    }

    /// Selected vertices in canonical order.
    pub fn vertices(&self) -> &[VertexId] {
        &self.selected
    }

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.members.contains(&v)
    }

    pub fn weight(&self, v: VertexId) -> Weight {
        self.graph.weight(v).expect("selected vertex exists")
    }

    /// Induced edges `(u, v, multiplicity)`.
    pub fn edges(&self) -> Vec<(VertexId, VertexId, u32)> {
        self.graph
            .edges()
            .filter(|&(u, v, _)| self.contains(u) && self.contains(v))
            .collect()
    }

    pub fn edge_total(&self) -> usize {
        self.edges().iter().map(|&(_, _, c)| c as usize).sum()
    }

    /// Neighbors of `v` inside the selection.
    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        self.graph
            .neighbors(v)
            .into_iter()
            .filter(|x| self.contains(*x))
            .collect()
    }

    /// Degree of `v` inside the selection, with multiplicity.
    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbors(v)
            .into_iter()
            .map(|x| self.graph.edge_multiplicity(v, x) as usize)
            .sum()
    }

    /// Restricts further to the members of `self` that also lie in `ids`.
    pub fn restrict<I>(&self, ids: I) -> SubDivisor<'g>
    where
        I: IntoIterator<Item = VertexId>,
    {
        let keep: BTreeSet<VertexId> = ids.into_iter().filter(|v| self.contains(*v)).collect();
        let selected = self.selected.iter().copied().filter(|v| keep.contains(v)).collect();
        SubDivisor {
            graph: self.graph,
            selected,
            members: keep,
        }
    }

    /// The selection minus the given vertices.
    pub fn without<I>(&self, ids: I) -> SubDivisor<'g>
    where
        I: IntoIterator<Item = VertexId>,
    {
        let drop: BTreeSet<VertexId> = ids.into_iter().collect();
        self.restrict(self.selected.clone().into_iter().filter(|v| !drop.contains(v)))
    }

    /// Connected components, each in canonical order; components are listed
    /// by their first vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in &self.selected {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut stack = vec![start];
            seen.insert(start);
            while let Some(v) = stack.pop() {
                comp.insert(v);
                for w in self.neighbors(v) {
                    if seen.insert(w) {
                        stack.push(w);
                    }
                }
            }
            out.push(self.selected.iter().copied().filter(|v| comp.contains(v)).collect());
        }
        out
    }

    /// Copies the induced subgraph out, keeping ids and order.
    pub fn to_graph(&self) -> WeightedGraph {
        let mut g = WeightedGraph::new();
        for &v in &self.selected {
            g.add_vertex(v, self.weight(v)).expect("distinct ids");
        }
        for (u, v, c) in self.edges() {
            for _ in 0..c {
                g.add_edge(u, v).expect("endpoints selected");
            }
        }
        g.next_id = g.next_id.max(self.graph.next_id);
        g
    }
}
