//! Shape of a selection: forests, trees, chains, tips and branching
//! components; chain types and quotient-type recognition.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::graph::{SubDivisor, VertexId};
use crate::lattice::{definiteness, discriminant, require_forest, Definiteness};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeReport {
    pub is_forest: bool,
    pub is_tree: bool,
    pub is_chain: bool,
    pub components: Vec<Vec<VertexId>>,
    /// Vertices of degree at most one in the selection.
    pub tips: Vec<VertexId>,
    /// Vertices meeting at least three other selected components.
    pub branching: Vec<VertexId>,
}

pub fn classify_shape(s: &SubDivisor<'_>) -> ShapeReport {
    let components = s.components();
    let is_forest = require_forest(s).is_ok();
    let is_tree = is_forest && components.len() == 1;
    let degrees: Vec<(VertexId, usize)> = s.vertices().iter().map(|&v| (v, s.degree(v))).collect();
    let is_chain = is_tree && degrees.iter().all(|&(_, d)| d <= 2);
    ShapeReport {
        is_forest,
        is_tree,
        is_chain,
        components,
        tips: degrees.iter().filter(|&&(_, d)| d <= 1).map(|&(v, _)| v).collect(),
        branching: degrees.iter().filter(|&&(_, d)| d >= 3).map(|&(v, _)| v).collect(),
    }
}

/// The type `[a_1, ..., a_k]` of a chain, i.e. self-intersections
/// `-a_1, ..., -a_k`, stored in the lexicographically smaller of its two
/// readings. The empty chain is the zero divisor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChainType {
    entries: Vec<i64>,
}

impl ChainType {
    pub fn new(mut entries: Vec<i64>) -> Self {
        let rev: Vec<i64> = entries.iter().rev().copied().collect();
        if rev < entries {
            entries = rev;
        }
        Self { entries }
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `[0]`, `[1]` or `[0, 0, a_1, ..., a_{k-2}]` with every `a_i >= 2`.
    pub fn is_standard(&self) -> bool {
        match self.entries.as_slice() {
            [0] | [1] => true,
            [0, 0, rest @ ..] => rest.iter().all(|&a| a >= 2),
            _ => false,
        }
    }
}

impl std::fmt::Display for ChainType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

/// Walks a chain selection from one tip to the other. The walk starts at
/// whichever tip makes the type reading lexicographically smaller (ties go
/// to the tip that comes first canonically).
pub fn chain_order(s: &SubDivisor<'_>) -> Option<Vec<VertexId>> {
    if s.is_empty() {
        return Some(Vec::new());
    }
    if !classify_shape(s).is_chain {
        return None;
    }
    let tips: Vec<VertexId> = s.vertices().iter().copied().filter(|&v| s.degree(v) <= 1).collect();
    let walk = |start: VertexId| {
        let mut order = vec![start];
        let mut prev: Option<VertexId> = None;
        let mut cur = start;
        loop {
            let next = s.neighbors(cur).into_iter().find(|&x| Some(x) != prev);
            match next {
                Some(n) => {
                    order.push(n);
                    prev = Some(cur);
                    cur = n;
                }
                None => break order,
            }
        }
    };
    let a = walk(tips[0]);
    let mut b = a.clone();
    b.reverse();
    let reading = |o: &[VertexId]| o.iter().map(|&v| -s.weight(v)).collect::<Vec<_>>();
    if reading(&b) < reading(&a) {
        Some(b)
    } else {
        Some(a)
    }
}

/// Type of a chain selection, or `None` if the selection is not a chain.
pub fn chain_type(s: &SubDivisor<'_>) -> Option<ChainType> {
    chain_order(s).map(|o| ChainType::new(o.iter().map(|&v| -s.weight(v)).collect()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuotientKind {
    Cyclic,
    /// Twig discriminants, listed by the canonical order of the center's
    /// neighbors.
    Fork {
        center: VertexId,
        #[serde(with = "crate::decimal::vec")]
        twig_discriminants: Vec<BigInt>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub is_quotient_type: bool,
    pub kind: Option<QuotientKind>,
    /// Whether any selected component is a (-1)-curve. Snc-minimal
    /// quotient-type divisors never contain one.
    pub has_minus_one: bool,
}

/// Negative definite chain (cyclic) or negative definite tree with a single
/// branching component of degree three (fork). Whether the twig triple is
/// actually admissible is left to the caller.
pub fn is_quotient_type(s: &SubDivisor<'_>) -> QuotientReport {
    let has_minus_one = s.vertices().iter().any(|&v| s.weight(v) == -1);
    let no = QuotientReport {
        is_quotient_type: false,
        kind: None,
        has_minus_one,
    };
    if s.is_empty() || definiteness(s) != Definiteness::NegativeDefinite {
        return no;
    }
    let shape = classify_shape(s);
    if shape.is_chain {
        return QuotientReport {
            is_quotient_type: true,
            kind: Some(QuotientKind::Cyclic),
            has_minus_one,
        };
    }
    if !shape.is_tree || shape.branching.len() != 1 {
        return no;
    }
    let center = shape.branching[0];
    let twigs = s.neighbors(center);
    if twigs.len() != 3 {
        return no;
    }
    let rest = s.without([center]);
    let components = rest.components();
    let mut twig_discriminants = Vec::with_capacity(3);
    for t in twigs {
        let comp = components.iter().find(|c| c.contains(&t)).expect("twig component");
        twig_discriminants.push(discriminant(&rest.restrict(comp.iter().copied())));
    }
    QuotientReport {
        is_quotient_type: true,
        kind: Some(QuotientKind::Fork {
            center,
            twig_discriminants,
        }),
        has_minus_one,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;

    #[test]
    fn chain_shape() {
        let g = WeightedGraph::chain_of_type(&[2, 1, 2]);
        let r = classify_shape(&g.whole());
        assert!(r.is_chain && r.is_tree && r.is_forest);
        assert_eq!(r.tips, vec![VertexId(0), VertexId(2)]);
        assert!(r.branching.is_empty());
    }

    #[test]
    fn star_shape() {
        let g = WeightedGraph::build(&[(0, -2), (1, -2), (2, -2), (3, -2)], &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let r = classify_shape(&g.whole());
        assert!(r.is_tree);
        assert!(!r.is_chain);
        assert_eq!(r.branching, vec![VertexId(0)]);
    }

    #[test]
    fn triangle_is_not_a_forest() {
        let g = WeightedGraph::build(&[(0, -2), (1, -2), (2, -2)], &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let r = classify_shape(&g.whole());
        assert!(!r.is_forest);
        assert!(!r.is_tree);
    }

    #[test]
    fn chain_type_uses_smaller_reading() {
        let g = WeightedGraph::chain_of_type(&[3, 0, 1]);
        assert_eq!(chain_type(&g.whole()).unwrap().entries(), &[1, 0, 3]);
        assert_eq!(ChainType::new(vec![2, 5]).entries(), &[2, 5]);
        assert_eq!(ChainType::new(vec![]).len(), 0);
    }

    #[test]
    fn standard_forms() {
        for t in [vec![0], vec![1], vec![0, 0], vec![0, 0, 2, 7]] {
            assert!(ChainType::new(t).is_standard());
        }
        for t in [vec![2], vec![0, 0, 1], vec![0, 1], vec![]] {
            assert!(!ChainType::new(t).is_standard());
        }
    }

    #[test]
    fn quotient_examples() {
        let g = WeightedGraph::chain_of_type(&[2, 2, 2]);
        let r = is_quotient_type(&g.whole());
        assert!(r.is_quotient_type);
        assert_eq!(r.kind, Some(QuotientKind::Cyclic));

        let g = WeightedGraph::chain_of_type(&[0, 0]);
        assert!(!is_quotient_type(&g.whole()).is_quotient_type);

        // D4: the 4x4 determinant of -Q is 4 and all leading minors are positive.
        let g = WeightedGraph::build(&[(0, -2), (1, -2), (2, -2), (3, -2)], &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let r = is_quotient_type(&g.whole());
        assert!(r.is_quotient_type);
        assert_eq!(discriminant(&g.whole()), BigInt::from(4));
        match r.kind {
            Some(QuotientKind::Fork { twig_discriminants, .. }) => {
                assert_eq!(twig_discriminants, vec![BigInt::from(2); 3]);
            }
            other => panic!("expected fork, got {other:?}"),
        }
    }

    #[test]
    fn minus_one_is_flagged() {
        let g = WeightedGraph::chain_of_type(&[2, 1, 3]);
        let r = is_quotient_type(&g.whole());
        assert!(r.has_minus_one);
    }
}
