//! Bringing a chain into standard form `[0]`, `[1]` or `[0,0,a_1,...]`.
//!
//! Blow-ups add an orthogonal `<-1>` summand, so the number of positive and
//! zero eigenvalues of the intersection form is invariant. That decides the
//! target: no positive eigenvalue and a one-dimensional kernel gives `[0]`,
//! a negative definite unimodular chain gives `[1]`, and one positive
//! eigenvalue with trivial kernel gives `[0,0,R]`. Everything else has no
//! standard form.
//!
//! For the last case a pair of adjacent zeros spans a hyperbolic plane `H`
//! and the tail `R` carries the form on `H^perp`, which is then negative
//! definite. Contracting the (-1)s of the tail therefore leaves entries
//! `>= 2`.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{SubDivisor, VertexId, WeightedGraph};
use crate::lattice::{discriminant, inertia, intersection_matrix};
use crate::moves::{blow_down_in, blow_up_edge_in, blow_up_free_in, elementary_transformation_in, MoveLog, Side};
use crate::shape::{chain_order, ChainType};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardizedChain {
    /// The chain after all moves.
    pub graph: WeightedGraph,
    pub chain: ChainType,
    /// Vertices of `graph` read in the orientation of `chain`.
    pub order: Vec<VertexId>,
    /// Moves turning the induced input graph into `graph`.
    pub log: MoveLog,
}

/// Upper bound on the number of moves used for a chain of length `k` whose
/// entries have absolute sum `s`.
pub fn standardization_move_bound(k: usize, s: u64) -> u64 {
    let k = k as u64;
    4 * (k + 1) + 16 * (s + 2 * k + 1)
}

struct ChainWork {
    g: WeightedGraph,
    order: Vec<VertexId>,
    log: MoveLog,
}

impl ChainWork {
    fn a(&self, j: usize) -> i64 {
        -self.g.weight(self.order[j]).expect("chain vertex")
    }

    fn len(&self) -> usize {
        self.order.len()
    }

    fn contract(&mut self, j: usize) {
        let m = blow_down_in(&mut self.g, self.order[j]).expect("chain (-1) is contractible");
        self.log.push(m);
        self.order.remove(j);
    }

    /// Blow up between `j` and `j+1`, or at a free point of `j` when it is
    /// the right tip.
    fn raise(&mut self, j: usize) {
        let v = self.order[j];
        let m = match self.order.get(j + 1) {
            Some(&n) => blow_up_edge_in(&mut self.g, v, n),
            None => blow_up_free_in(&mut self.g, v),
        }
        .expect("valid blow-up");
        self.order.insert(j + 1, m.vertex);
        self.log.push(m);
    }

    /// Elementary transformation at the zero in position `j`, toward the
    /// neighbor at `toward` or at a free point.
    fn et(&mut self, j: usize, toward: Option<usize>) {
        let side = match toward {
            Some(t) => Side::Toward(self.order[t]),
            None => Side::Free,
        };
        let sub = elementary_transformation_in(&mut self.g, self.order[j], side).expect("valid transformation");
        self.order[j] = sub.moves()[0].vertex;
        self.log.extend(sub);
    }

    fn contract_ones_from(&mut self, start: usize) {
        while self.len() >= 2 {
            match (start..self.len()).find(|&j| self.a(j) == 1) {
                Some(j) => self.contract(j),
                None => break,
            }
        }
    }

    /// With a zero at `j >= 1`, turn the entry at `j-1` into a zero.
    fn zero_left_neighbor(&mut self, j: usize) {
        while self.a(j - 1) > 0 {
            let right = (j + 1 < self.len()).then_some(j + 1);
            self.et(j, right);
        }
        while self.a(j - 1) < 0 {
            self.et(j, Some(j - 1));
        }
    }

    /// With a zero at the left tip, turn the entry at position 1 into a zero.
    fn zero_second(&mut self) {
        while self.a(1) > 0 {
            self.et(0, None);
        }
        while self.a(1) < 0 {
            self.et(0, Some(1));
        }
    }

    /// Produce a zero pair and move it to positions 0 and 1.
    fn establish_prefix(&mut self) -> Result<()> {
        let i = (0..self.len())
            .find(|&j| self.a(j) <= 0)
            .ok_or_else(|| Error::PipelineInvariantViolation("indefinite chain without a non-positive entry".into()))?;
        while self.a(i) < 0 {
            self.raise(i);
        }
        if i == 0 {
            self.zero_second();
            return Ok(());
        }
        self.zero_left_neighbor(i);
        // [x, 0, 0] -> [0, 0, x]
        let mut j = i - 1;
        while j > 0 {
            self.zero_left_neighbor(j);
            j -= 1;
        }
        Ok(())
    }

    /// Contract every 1 in the tail behind the `[0,0]` prefix.
    fn clean_tail(&mut self) {
        loop {
            self.contract_ones_from(3);
            if self.len() >= 3 && self.a(2) == 1 {
                // [0,0,1,b,...] -> [0,-1,b-1,...] -> [0,0,b-1,...]
                self.contract(2);
                self.et(0, Some(1));
            } else {
                break;
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Target {
    Zero,
    One,
    ZeroZero,
}

fn target_of(s: &SubDivisor<'_>, entries: &[i64]) -> Option<Target> {
    let q = intersection_matrix(s);
    let inert = inertia(&q);
    match (inert.positive, inert.zero) {
        (0, 1) => Some(Target::Zero),
        (0, 0) if discriminant(s) == BigInt::one() => Some(Target::One),
        (1, 0) if !entries.is_empty() => Some(Target::ZeroZero),
        _ => None,
    }
}

/// Standard form of a chain selection, reached by blow-ups and blow-downs on
/// the chain alone. The log refers to the induced graph on the selection.
pub fn standardize_chain(s: &SubDivisor<'_>) -> Result<StandardizedChain> {
    if s.is_empty() {
        return Err(Error::NotAChain);
    }
    let order = chain_order(s).ok_or(Error::NotAChain)?;
    let entries: Vec<i64> = order.iter().map(|&v| -s.weight(v)).collect();
    let target = target_of(s, &entries)
        .ok_or_else(|| Error::NoStandardForm(ChainType::new(entries.clone()).entries().to_vec()))?;
    let mut work = ChainWork {
        g: s.to_graph(),
        order,
        log: MoveLog::new(),
    };
    work.contract_ones_from(0);
    if target == Target::ZeroZero {
        work.establish_prefix()?;
        work.clean_tail();
    }
    let raw: Vec<i64> = (0..work.len()).map(|j| work.a(j)).collect();
    let chain = ChainType::new(raw.clone());
    if !chain.is_standard() {
        return Err(Error::PipelineInvariantViolation(format!(
            "standardization ended at non-standard {chain}"
        )));
    }
    let mut order = work.order;
    if chain.entries() != raw.as_slice() {
        order.reverse();
    }
    Ok(StandardizedChain {
        graph: work.g,
        chain,
        order,
        log: work.log,
    })
}

/// Standardizes a graph that is itself a chain.
pub fn standardize_chain_graph(g: &WeightedGraph) -> Result<StandardizedChain> {
    standardize_chain(&g.whole())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn std_of(t: &[i64]) -> Result<Vec<i64>> {
        let g = WeightedGraph::chain_of_type(t);
        standardize_chain_graph(&g).map(|r| r.chain.entries().to_vec())
    }

    #[test]
    fn spec_examples() {
        assert_eq!(std_of(&[1]).unwrap(), vec![1]);
        assert_eq!(std_of(&[2, 1, 2]).unwrap(), vec![0]);
        assert_eq!(std_of(&[0, 0]).unwrap(), vec![0, 0]);
        assert_eq!(std_of(&[1, 1, 1]).unwrap(), vec![0, 0]);
    }

    #[test]
    fn line_and_conic_boundaries() {
        // a line in the plane and a smooth conic, i.e. weights +1 and +4
        assert_eq!(std_of(&[-1]).unwrap(), vec![0, 0]);
        // standard forms are not unique: [0,0,4] and [0,0,2,2,2] both have d = -4
        let conic = std_of(&[-4]).unwrap();
        assert!(ChainType::new(conic.clone()).is_standard());
        assert_eq!(
            discriminant(&WeightedGraph::chain_of_type(&conic).whole()),
            BigInt::from(-4)
        );
        assert_eq!(std_of(&[0, 0, 2, 3]).unwrap(), vec![0, 0, 2, 3]);
    }

    #[test]
    fn zero_in_the_middle() {
        let r = std_of(&[3, 0, 5]).unwrap();
        assert_eq!(&r[..2], &[0, 0]);
    }

    #[test]
    fn without_standard_form() {
        assert_eq!(std_of(&[2]).unwrap_err(), Error::NoStandardForm(vec![2]));
        assert_eq!(std_of(&[0, 0, 0]).unwrap_err(), Error::NoStandardForm(vec![0, 0, 0]));
        let star = WeightedGraph::build(&[(0, -2), (1, -2), (2, -2), (3, -2)], &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(standardize_chain_graph(&star).unwrap_err(), Error::NotAChain);
    }

    #[test]
    fn log_replays_and_preserves_discriminant() {
        for t in [
            vec![3, 0, 5],
            vec![4, -1, 2],
            vec![5, 0, 1, 3],
            vec![2, 2, -3],
            vec![1, 1, 1],
        ] {
            let g = WeightedGraph::chain_of_type(&t);
            let r = standardize_chain_graph(&g).unwrap();
            assert_eq!(r.log.replay(&g).unwrap(), r.graph);
            assert_eq!(discriminant(&g.whole()), discriminant(&r.graph.whole()));
            let s: u64 = t.iter().map(|a| a.unsigned_abs()).sum();
            assert!(r.log.len() as u64 <= standardization_move_bound(t.len(), s));
            let read: Vec<i64> = r.order.iter().map(|&v| -r.graph.weight(v).unwrap()).collect();
            assert_eq!(read, r.chain.entries());
        }
    }
}
