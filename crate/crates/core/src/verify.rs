//! Euler characteristics of open surfaces from boundary data, the relation
//! `|d(D)| = d(E_hat) |H_1|^2` on Q-acyclic surfaces, and the divisibility
//! argument ruling out `D1 != 0` for smooth curves.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SubDivisor;
use crate::lattice::require_forest;
use crate::resolution::{build_completion_with, CompletionModel, CompletionOptions, CuspPair, Role};

/// `chi(Xbar - D) = (2 + rho) - (2 #D - #edges(D))` for a rational surface
/// `Xbar` of Picard rank `rho` and an snc forest `D` of rational curves.
pub fn euler_open(rho: i64, boundary: &SubDivisor<'_>) -> Result<i64> {
    require_forest(boundary)?;
    Ok(2 + rho - (2 * boundary.len() as i64 - boundary.edge_total() as i64))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcyclicityCheck {
    /// `|d(D)|`.
    #[serde(with = "crate::decimal")]
    pub d_boundary: BigInt,
    #[serde(with = "crate::decimal")]
    pub d_exceptional: BigInt,
    /// `|H_1|`, when `|d(D)| / d(E_hat)` is a perfect square.
    pub h1_order: Option<String>,
    pub violation: Option<String>,
}

impl AcyclicityCheck {
    pub fn is_consistent(&self) -> bool {
        self.violation.is_none()
    }
}

pub fn q_acyclicity_relation(d_boundary: &BigInt, d_exceptional: &BigInt) -> Result<AcyclicityCheck> {
    if d_boundary.is_zero() {
        return Err(Error::ZeroBoundaryDiscriminant);
    }
    if !d_exceptional.is_positive() {
        return Err(Error::NonPositiveExceptional(d_exceptional.to_string()));
    }
    let d = d_boundary.abs();
    let (q, r) = d.div_rem(d_exceptional);
    let mut out = AcyclicityCheck {
        d_boundary: d.clone(),
        d_exceptional: d_exceptional.clone(),
        h1_order: None,
        violation: None,
    };
    if !r.is_zero() {
        out.violation = Some(format!("d(E_hat) = {d_exceptional} does not divide |d(D)| = {d}"));
        return Ok(out);
    }
    let s = q.sqrt();
    if &s * &s == q {
        out.h1_order = Some(s.to_string());
    } else {
        out.violation = Some(format!("|d(D)| / d(E_hat) = {q} is not a perfect square"));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityReport {
    #[serde(with = "crate::decimal")]
    pub d_d1: BigInt,
    #[serde(with = "crate::decimal")]
    pub d_d2: BigInt,
    /// `d(E) = -E^2`.
    #[serde(with = "crate::decimal")]
    pub d_e: BigInt,
    #[serde(with = "crate::decimal")]
    pub d_d2_plus_e: BigInt,
    /// `d(D2 + E) = d(D2) d(E)`.
    pub product_identity: bool,
    /// `d(D2 + E)` divides `d(D1)`.
    pub divides: bool,
    #[serde(with = "crate::decimal")]
    pub gcd_d1_d2: BigInt,
    pub d1_empty: bool,
    pub e_self_intersection: i64,
    /// `E^2 < 0`, `D1 != 0` and the divisibility fails.
    pub contradiction: bool,
}

/// Compares `d(D2 + E)` with `d(D1)` on a smooth-curve model.
pub fn divisibility_check(model: &CompletionModel) -> Result<DivisibilityReport> {
    if !model.role(Role::U).is_empty() {
        return Err(Error::NotSmoothCase);
    }
    let d_d1 = model.d_of(&[Role::D1]);
    let d_d2 = model.d_of(&[Role::D2]);
    let e2 = model.graph.weight(model.e()).expect("E exists");
    let d_e = BigInt::from(-e2);
    let d_d2_plus_e = model.d_of(&[Role::D2, Role::E]);
    let divides = !d_d2_plus_e.is_zero() && (&d_d1 % &d_d2_plus_e).is_zero();
    let d1_empty = model.role(Role::D1).is_empty();
    Ok(DivisibilityReport {
        product_identity: d_d2_plus_e == &d_d2 * &d_e,
        gcd_d1_d2: d_d1.gcd(&d_d2),
        contradiction: !d1_empty && e2 < 0 && !divides,
        divides,
        d1_empty,
        e_self_intersection: e2,
        d_d1,
        d_d2,
        d_e,
        d_d2_plus_e,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmoothBranch {
    /// `E^2 > 0`.
    Positive,
    /// `E^2 < 0`.
    Negative,
    /// `E^2 = 0`.
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Obstruction {
    /// `D1 + D2` would lie in one fiber, forcing `D1 = 0`, yet both are
    /// nonempty and disjoint.
    ForcedEmptyD1,
    /// `d(D2) d(E)` does not divide `d(D1)`.
    DivisibilityClash,
    /// `D1` would be a 0-curve fiber with `d(D1) = 0`, yet coprimality with
    /// `d(D2)` gives `d(D1) != 0`.
    FiberDiscriminant,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchReport {
    pub branch: SmoothBranch,
    pub e_weight: i64,
    pub divisibility: DivisibilityReport,
    pub obstructions: Vec<Obstruction>,
}

/// Obstructions raised by the argument of `branch` on a model whose `E` has
/// the matching sign.
pub fn branch_obstructions(model: &CompletionModel, branch: SmoothBranch) -> Result<BranchReport> {
    let div = divisibility_check(model)?;
    let mut obstructions = Vec::new();
    match branch {
        SmoothBranch::Positive => {
            let d1 = model.role(Role::D1);
            let d2 = model.role(Role::D2);
            let joint = model.graph.sub(d1.iter().chain(d2).copied())?;
            if !d1.is_empty() && !d2.is_empty() && joint.components().len() > 1 {
                obstructions.push(Obstruction::ForcedEmptyD1);
            }
        }
        SmoothBranch::Negative => {
            if div.contradiction {
                obstructions.push(Obstruction::DivisibilityClash);
            }
        }
        SmoothBranch::Zero => {
            if !div.d1_empty && !div.d_d1.is_zero() && div.gcd_d1_d2 == BigInt::from(1) {
                obstructions.push(Obstruction::FiberDiscriminant);
            }
        }
    }
    Ok(BranchReport {
        branch,
        e_weight: div.e_self_intersection,
        divisibility: div,
        obstructions,
    })
}

/// Runs the three branches on the completion of the smooth curve `y = x^n`
/// before contraction of `D1'`, with `E` given the weights `n`, `-1`, `0`.
pub fn smooth_case_branches(n: u64) -> Result<Vec<BranchReport>> {
    let p = CuspPair::new(n, 1)?;
    let base = build_completion_with(p, CompletionOptions { apply_psi: false });
    let e = base.e();
    let mut out = Vec::new();
    for (branch, w) in [
        (SmoothBranch::Positive, n as i64),
        (SmoothBranch::Negative, -1),
        (SmoothBranch::Zero, 0),
    ] {
        let mut model = base.clone();
        let mut g = model.graph.clone();
        g.set_weight(e, w)?;
        model.graph = g;
        out.push(branch_obstructions(&model, branch)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{VertexId, WeightedGraph};
    use std::collections::BTreeMap;

    #[test]
    fn euler_examples() {
        let g = WeightedGraph::chain_of_type(&[-1]);
        assert_eq!(euler_open(1, &g.whole()).unwrap(), 1);
        let g = WeightedGraph::chain_of_type(&[0, 0]);
        assert_eq!(euler_open(2, &g.whole()).unwrap(), 1);
        let tri = WeightedGraph::build(&[(0, 1), (1, 1), (2, 1)], &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(euler_open(1, &tri.whole()), Err(Error::NotAForest));
    }

    #[test]
    fn acyclicity_examples() {
        let r = q_acyclicity_relation(&BigInt::from(1), &BigInt::from(1)).unwrap();
        assert_eq!(r.h1_order.as_deref(), Some("1"));
        let r = q_acyclicity_relation(&BigInt::from(-9), &BigInt::from(1)).unwrap();
        assert_eq!(r.h1_order.as_deref(), Some("3"));
        let r = q_acyclicity_relation(&BigInt::from(6), &BigInt::from(2)).unwrap();
        assert!(!r.is_consistent());
        assert_eq!(
            q_acyclicity_relation(&BigInt::from(0), &BigInt::from(1)),
            Err(Error::ZeroBoundaryDiscriminant)
        );
        assert!(matches!(
            q_acyclicity_relation(&BigInt::from(4), &BigInt::from(0)),
            Err(Error::NonPositiveExceptional(_))
        ));
    }

    fn synthetic(d1: &[i64], c: i64, d2: &[i64], e: i64) -> CompletionModel {
        // chain D1 - C - D2 with E on C
        let mut weights = Vec::new();
        let mut edges = Vec::new();
        let mut id = 0u32;
        let mut roles: BTreeMap<Role, Vec<VertexId>> = BTreeMap::new();
        let mut prev: Option<u32> = None;
        for (role, part) in [(Role::D1, d1.to_vec()), (Role::C, vec![c]), (Role::D2, d2.to_vec())] {
            for w in part {
                weights.push((id, w));
                if let Some(p) = prev {
                    edges.push((p, id));
                }
                roles.entry(role).or_default().push(VertexId(id));
                prev = Some(id);
                id += 1;
            }
        }
        let c_id = roles[&Role::C][0].0;
        weights.push((id, e));
        edges.push((c_id, id));
        roles.insert(Role::E, vec![VertexId(id)]);
        roles.insert(Role::U, vec![]);
        let g = WeightedGraph::build(&weights, &edges).unwrap();
        CompletionModel::synthetic(g, roles, 0).unwrap()
    }

    #[test]
    fn divisibility_examples() {
        // d(D2) = 2, d(D1) = 3
        let r = divisibility_check(&synthetic(&[-3], -1, &[-2], -1)).unwrap();
        assert!(r.product_identity);
        assert!(!r.divides);
        assert!(r.contradiction);
        // d(D2) = 3, d(E) = 1, d(D1) = 9
        let r = divisibility_check(&synthetic(&[-9], -1, &[-3], -1)).unwrap();
        assert!(r.divides);
        assert!(!r.contradiction);
        let r = divisibility_check(&synthetic(&[], 0, &[-2], -1)).unwrap();
        assert!(r.d1_empty && !r.contradiction);
    }

    #[test]
    fn singular_models_are_rejected() {
        let model = crate::resolution::build_completion(CuspPair::new(3, 2).unwrap());
        assert_eq!(divisibility_check(&model), Err(Error::NotSmoothCase));
    }

    #[test]
    fn one_obstruction_per_branch() {
        for n in 2..10 {
            for r in smooth_case_branches(n).unwrap() {
                assert_eq!(r.obstructions.len(), 1, "n = {n}: {r:?}");
            }
        }
    }
}
