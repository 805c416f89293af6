use dualgraph::chain::{standardization_move_bound, standardize_chain_graph};
use dualgraph::generate::{random_chain_from, seeded};
use dualgraph::{discriminant, WeightedGraph};
use num_bigint::BigInt;
use rand::Rng;

#[test]
fn two_one_two_is_a_zero_curve() {
    let r = standardize_chain_graph(&WeightedGraph::chain_of_type(&[2, 1, 2])).unwrap();
    assert_eq!(r.chain.entries(), &[0]);
}

#[test]
fn random_plane_boundaries_standardize_to_zero_zero() {
    let mut rng = seeded(21);
    for _ in 0..200 {
        let steps = rng.gen_range(1..=20);
        let g = random_chain_from(&mut rng, &[0, 0], steps);
        assert_eq!(discriminant(&g.whole()), BigInt::from(-1));
        let r = standardize_chain_graph(&g).unwrap();
        assert_eq!(r.chain.entries(), &[0, 0], "from {g:?}");
        assert_eq!(r.log.replay(&g).unwrap(), r.graph);
        let k = g.len();
        let s: u64 = g.weighted_vertices().map(|(_, w)| w.unsigned_abs()).sum();
        assert!(r.log.len() as u64 <= standardization_move_bound(k, s));
    }
}

#[test]
fn standardization_keeps_the_discriminant() {
    let mut rng = seeded(22);
    for _ in 0..200 {
        let k = rng.gen_range(1..=6);
        let entries: Vec<i64> = (0..k).map(|_| rng.gen_range(-3..=5)).collect();
        let g = WeightedGraph::chain_of_type(&entries);
        let Ok(r) = standardize_chain_graph(&g) else { continue };
        assert!(r.chain.is_standard());
        assert_eq!(discriminant(&g.whole()), discriminant(&r.graph.whole()));
        let s: u64 = entries.iter().map(|a| a.unsigned_abs()).sum();
        assert!(r.log.len() as u64 <= standardization_move_bound(k, s), "{entries:?}");
    }
}
