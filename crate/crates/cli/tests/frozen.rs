mod common;

#[test]
fn outputs_match_the_frozen_fixtures() {
    if let Err(e) = common::check_frozen() {
        panic!("{e}; rerun with UPDATE_FIXTURES=1 after an intended change");
    }
}
