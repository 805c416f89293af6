use dualgraph::enumerate_fibers;
use dualgraph::fibration::{chain_fiber_sides, fiber_counts, validate_fiber};
use num_bigint::BigInt;

#[test]
fn counts_per_size() {
    assert_eq!(fiber_counts(8), vec![1, 1, 2, 5, 18, 70, 320, 1525]);
}

#[test]
fn every_enumerated_fiber_is_valid() {
    let fibers = enumerate_fibers(8);
    let mut unique = 0;
    for f in &fibers {
        let r = validate_fiber(f);
        assert!(r.passes(), "{} {:?}", f.canonical_form(), r);
        if r.unique_minus_one.is_some() {
            unique += 1;
        }
        assert_eq!(f.replay().unwrap(), f.graph);
    }
    assert!(unique > 0);
}

#[test]
fn chain_sides_carry_the_multiplicity() {
    for f in enumerate_fibers(8) {
        if let Some((left, right, m)) = chain_fiber_sides(&f) {
            assert_eq!(left, BigInt::from(m), "{}", f.canonical_form());
            assert_eq!(right, BigInt::from(m), "{}", f.canonical_form());
        }
    }
}
