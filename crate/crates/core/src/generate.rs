//! Seeded random and exhaustive generators of graphs, subdivisors, move
//! sequences and chains, for property checks.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{VertexId, Weight, WeightedGraph};
use crate::moves::{blow_down_in, blow_up_edge_in, blow_up_free_in, can_blow_down, MoveLog};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random recursive tree on ids `0..n`: vertex `i` attaches to a uniform
/// earlier vertex.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize, weights: RangeInclusive<Weight>) -> WeightedGraph {
    let vs: Vec<(u32, Weight)> = (0..n as u32).map(|i| (i, rng.gen_range(weights.clone()))).collect();
    let es: Vec<(u32, u32)> = (1..n as u32).map(|i| (rng.gen_range(0..i), i)).collect();
    WeightedGraph::build(&vs, &es).expect("tree")
}

/// Random graph: a random tree plus `extra` further simple edges.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, extra: usize, weights: RangeInclusive<Weight>) -> WeightedGraph {
    let mut g = random_tree(rng, n, weights);
    for _ in 0..extra {
        if n < 2 {
            break;
        }
        let u = VertexId(rng.gen_range(0..n as u32));
        let v = VertexId(rng.gen_range(0..n as u32));
        if u != v && g.edge_multiplicity(u, v) == 0 {
            g.add_edge(u, v).expect("known endpoints");
        }
    }
    g
}

/// Nonempty random subset of the vertices.
pub fn random_selection<R: Rng>(rng: &mut R, g: &WeightedGraph) -> Vec<VertexId> {
    let mut vs: Vec<VertexId> = g.vertices().collect();
    vs.shuffle(rng);
    let k = rng.gen_range(1..=vs.len());
    vs.truncate(k);
    vs.sort();
    vs
}

/// Applies up to `len` random moves: blow-ups at a general point of a
/// vertex or at an edge, and contractions of contractible (-1)-vertices.
pub fn random_moves<R: Rng>(rng: &mut R, g: &WeightedGraph, len: usize) -> (WeightedGraph, MoveLog) {
    let mut h = g.clone();
    let mut log = MoveLog::new();
    for _ in 0..len {
        let vs: Vec<VertexId> = h.vertices().collect();
        let contractible: Vec<VertexId> = vs.iter().copied().filter(|&v| can_blow_down(&h, v).is_ok()).collect();
        let edges: Vec<(VertexId, VertexId)> = h.edges().map(|(u, v, _)| (u, v)).collect();
        let m = match rng.gen_range(0..3) {
            0 if !contractible.is_empty() && h.len() > 1 => {
                blow_down_in(&mut h, *contractible.choose(rng).unwrap()).expect("contractible")
            }
            1 if !edges.is_empty() => {
                let (u, v) = *edges.choose(rng).unwrap();
                blow_up_edge_in(&mut h, u, v).expect("edge exists")
            }
            _ if !vs.is_empty() => blow_up_free_in(&mut h, *vs.choose(rng).unwrap()).expect("vertex exists"),
            _ => continue,
        };
        log.push(m);
    }
    (h, log)
}

/// Random chain reached from the chain `start` by blow-ups at edges and
/// tips and contractions of (-1)-vertices of degree at most 2, so that
/// every intermediate graph is a chain.
pub fn random_chain_from<R: Rng>(rng: &mut R, start: &[i64], steps: usize) -> WeightedGraph {
    let mut g = WeightedGraph::chain_of_type(start);
    for _ in 0..steps {
        let vs: Vec<VertexId> = g.vertices().collect();
        let tips: Vec<VertexId> = vs.iter().copied().filter(|&v| g.degree(v) <= 1).collect();
        let contractible: Vec<VertexId> = vs
            .iter()
            .copied()
            .filter(|&v| g.len() > 1 && can_blow_down(&g, v).is_ok())
            .collect();
        let edges: Vec<(VertexId, VertexId)> = g.edges().map(|(u, v, _)| (u, v)).collect();
        match rng.gen_range(0..3) {
            0 if !contractible.is_empty() => {
                blow_down_in(&mut g, *contractible.choose(rng).unwrap()).expect("contractible");
            }
            1 if !edges.is_empty() => {
                let (u, v) = *edges.choose(rng).unwrap();
                blow_up_edge_in(&mut g, u, v).expect("edge exists");
            }
            _ => {
                blow_up_free_in(&mut g, *tips.choose(rng).unwrap()).expect("tip exists");
            }
        }
    }
    g
}

fn ahu(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
    let mut kids: Vec<String> = adj[v]
        .iter()
        .filter(|&&u| u != parent)
        .map(|&u| ahu(adj, u, v))
        .collect();
    kids.sort();
    format!("({})", kids.concat())
}

fn tree_code(adj: &[Vec<usize>]) -> String {
    (0..adj.len())
        .map(|r| ahu(adj, r, usize::MAX))
        .min()
        .unwrap_or_default()
}

/// Unlabeled trees on `n` vertices, one representative each, as adjacency
/// lists on `0..n`.
pub fn unlabeled_trees(n: usize) -> Vec<Vec<Vec<usize>>> {
    if n == 0 {
        return Vec::new();
    }
    let mut level: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new()]];
    for k in 1..n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for t in &level {
            for v in 0..k {
                let mut adj = t.clone();
                adj[v].push(k);
                adj.push(vec![v]);
                if seen.insert(tree_code(&adj)) {
                    next.push(adj);
                }
            }
        }
        level = next;
    }
    level
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out
}

/// Vertex permutations other than the identity preserving the adjacency.
pub fn automorphisms(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let edges: BTreeSet<(usize, usize)> = (0..n)
        .flat_map(|v| adj[v].iter().map(move |&u| (v.min(u), v.max(u))))
        .collect();
    permutations(n)
        .into_iter()
        .filter(|p| p.iter().enumerate().any(|(i, &x)| i != x))
        .filter(|p| {
            edges
                .iter()
                .all(|&(a, b)| edges.contains(&(p[a].min(p[b]), p[a].max(p[b]))))
        })
        .collect()
}

/// Every weighted tree with `1..=max_vertices` vertices and weights in
/// `weights`, once per isomorphism class.
pub fn weighted_trees(max_vertices: usize, weights: RangeInclusive<Weight>) -> impl Iterator<Item = WeightedGraph> {
    let values: Vec<Weight> = weights.collect();
    (1..=max_vertices).flat_map(move |n| {
        let values = values.clone();
        unlabeled_trees(n).into_iter().flat_map(move |adj| {
            let auts = automorphisms(&adj);
            let edges: Vec<(u32, u32)> = (0..n)
                .flat_map(|v| {
                    adj[v]
                        .iter()
                        .filter(move |&&u| u > v)
                        .map(move |&u| (v as u32, u as u32))
                })
                .collect();
            let k = values.len();
            let total = k.pow(n as u32);
            let values = values.clone();
            (0..total).filter_map(move |code| {
                let mut digits = vec![0usize; n];
                let mut c = code;
                for d in digits.iter_mut() {
                    *d = c % k;
                    c /= k;
                }
                // keep the lexicographically smallest labelling in the orbit
                let minimal = auts.iter().all(|p| {
                    let first_difference = (0..n).map(|i| digits[p[i]].cmp(&digits[i])).find(|o| o.is_ne());
                    first_difference != Some(std::cmp::Ordering::Less)
                });
                minimal.then(|| {
                    let vs: Vec<(u32, Weight)> = (0..n).map(|i| (i as u32, values[digits[i]])).collect();
                    WeightedGraph::build(&vs, &edges).expect("tree")
                })
            })
        })
    })
}
