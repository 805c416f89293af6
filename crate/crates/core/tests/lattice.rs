use dualgraph::generate::{random_graph, random_selection, random_tree, seeded, weighted_trees};
use dualgraph::lattice::{definiteness, discriminant_by_splitting, smith_invariants, Definiteness};
use dualgraph::{discriminant, WeightedGraph};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn splitting_matches_bareiss_on_all_small_trees() {
    let mut count = 0usize;
    for g in weighted_trees(7, -5..=2) {
        let s = g.whole();
        assert_eq!(discriminant_by_splitting(&s).unwrap(), discriminant(&s), "{g:?}");
        count += 1;
    }
    eprintln!("{count} weighted trees");
    assert!(count > 0);
}

#[test]
fn splitting_matches_bareiss_on_random_trees() {
    let mut rng = seeded(1);
    for i in 0..1000 {
        let n = 1 + i % 12;
        let g = random_tree(&mut rng, n, -6..=3);
        let s = g.whole();
        assert_eq!(discriminant_by_splitting(&s).unwrap(), discriminant(&s));
    }
}

#[test]
fn splitting_rejects_cycles() {
    let tri = WeightedGraph::build(&[(0, -2), (1, -2), (2, -2)], &[(0, 1), (1, 2), (0, 2)]).unwrap();
    assert!(discriminant_by_splitting(&tri.whole()).is_err());
}

#[test]
fn two_a_two() {
    for a in -10i64..=10 {
        let d = discriminant(&WeightedGraph::chain_of_type(&[2, a, 2]).whole());
        assert_eq!(d, BigInt::from(4 * (a - 1)));
        assert!((&d % BigInt::from(2)).is_zero());
    }
}

#[test]
fn smith_order_is_abs_discriminant() {
    let mut rng = seeded(2);
    let (mut definite, mut indefinite) = (0, 0);
    while definite < 500 || indefinite < 500 {
        let n = rng.gen_range(1..=9);
        let extra = rng.gen_range(0..3);
        let g = random_graph(&mut rng, n, extra, -5..=2);
        let sel = random_selection(&mut rng, &g);
        let s = g.sub(sel).unwrap();
        let d = discriminant(&s);
        if d.is_zero() {
            continue;
        }
        match definiteness(&s) {
            Definiteness::NegativeDefinite if definite < 500 => definite += 1,
            Definiteness::Indefinite if indefinite < 500 => indefinite += 1,
            _ => continue,
        }
        assert_eq!(smith_invariants(&s).torsion_order(), d.abs());
    }
}

fn relabel(g: &WeightedGraph, shift: u32) -> WeightedGraph {
    let vs: Vec<(u32, i64)> = g.weighted_vertices().map(|(v, w)| (v.0 * 3 + shift, w)).collect();
    let es: Vec<(u32, u32)> = g.edges().map(|(u, v, _)| (u.0 * 3 + shift, v.0 * 3 + shift)).collect();
    let mut vs = vs;
    vs.reverse();
    WeightedGraph::build(&vs, &es).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn discriminant_ignores_labels(seed in any::<u64>(), n in 1usize..10, shift in 0u32..3) {
        let mut rng = seeded(seed);
        let g = random_graph(&mut rng, n, 2, -4..=2);
        prop_assert_eq!(discriminant(&g.whole()), discriminant(&relabel(&g, shift).whole()));
    }

    #[test]
    fn disjoint_union_multiplies(seed in any::<u64>(), a in 1usize..7, b in 1usize..7) {
        let mut rng = seeded(seed);
        let h1 = random_tree(&mut rng, a, -4..=2);
        let h2 = random_tree(&mut rng, b, -4..=2);
        let mut vs: Vec<(u32, i64)> = h1.weighted_vertices().map(|(v, w)| (v.0, w)).collect();
        vs.extend(h2.weighted_vertices().map(|(v, w)| (v.0 + 100, w)));
        let mut es: Vec<(u32, u32)> = h1.edges().map(|(u, v, _)| (u.0, v.0)).collect();
        es.extend(h2.edges().map(|(u, v, _)| (u.0 + 100, v.0 + 100)));
        let union = WeightedGraph::build(&vs, &es).unwrap();
        prop_assert_eq!(discriminant(&union.whole()), discriminant(&h1.whole()) * discriminant(&h2.whole()));
    }
}
