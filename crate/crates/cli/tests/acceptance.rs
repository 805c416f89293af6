//! Acceptance run: one line per criterion, nonzero exit if any fails.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use dualgraph::chain::standardize_chain_graph;
use dualgraph::fibration::{fiber_counts, validate_fiber};
use dualgraph::generate::{
    random_chain_from, random_graph, random_moves, random_selection, random_tree, seeded, weighted_trees,
};
use dualgraph::lattice::{definiteness, discriminant_by_splitting, smith_invariants, Definiteness};
use dualgraph::moves::{blow_down, blow_up_edge, blow_up_free, snc_minimalize};
use dualgraph::verify::{divisibility_check, smooth_case_branches, Obstruction, SmoothBranch};
use dualgraph::{
    build_completion, discriminant, enumerate_fibers, q_acyclicity_relation, CuspPair, Role, VertexId, WeightedGraph,
};
use dualgraph_cli::run;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn completions() -> Vec<CuspPair> {
    let mut pairs = CuspPair::range(2, 30);
    pairs.extend((2..=30).map(|n| CuspPair::new(n, 1).unwrap()));
    pairs
}

fn pencil_endgame() -> Outcome {
    let out = run(["verify-theorem", "--range", "2", "30", "--format", "json"]);
    ensure(out.code == 0, || format!("exit {}", out.code))?;
    let mut count = 0;
    for line in out.stdout.lines() {
        let c: Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
        let (n, m) = (c["input"]["n"].as_u64().unwrap(), c["input"]["m"].as_u64().unwrap());
        ensure(c["status"] == 0, || format!("({n},{m}) status {}", c["status"]))?;
        ensure(c["result"]["dv1"].as_str() == Some(n.to_string().as_str()), || {
            format!("({n},{m}) d(V1) = {}", c["result"]["dv1"])
        })?;
        ensure(c["result"]["dv2"].as_str() == Some(m.to_string().as_str()), || {
            format!("({n},{m}) d(V2) = {}", c["result"]["dv2"])
        })?;
        ensure(c["result"]["sigma_x"] == 0, || {
            format!("({n},{m}) Sigma_X = {}", c["result"]["sigma_x"])
        })?;
        let accounting = c["checks"]
            .as_array()
            .unwrap()
            .iter()
            .find(|k| k["name"] == "h + nu + rho = Sigma + #D + 2");
        ensure(accounting.is_some_and(|k| k["pass"] == true), || {
            format!("({n},{m}) rank accounting")
        })?;
        count += 1;
    }
    ensure(count == 248, || format!("{count} pairs"))?;
    Ok(format!(
        "{count} coprime pairs 2 <= m < n <= 30, d(V1) = n, d(V2) = m, Sigma_X = 0"
    ))
}

fn plane_boundary() -> Outcome {
    let mut with_d1 = 0;
    for p in completions() {
        let model = build_completion(p);
        let d = model.d_of(&[Role::D1, Role::C, Role::D2]);
        ensure(d == BigInt::from(-1), || format!("{p:?}: d(D) = {d}"))?;
        let d2 = model.d_of(&[Role::D2]);
        if !model.role(Role::D2).is_empty() {
            ensure(d2 >= BigInt::from(2), || format!("{p:?}: d(D2) = {d2}"))?;
        }
        if !model.role(Role::D1).is_empty() {
            let d1 = model.d_of(&[Role::D1]);
            let g = num_integer::Integer::gcd(&d1, &d2);
            ensure(g.is_one(), || format!("{p:?}: gcd(d(D1), d(D2)) = {g}"))?;
            with_d1 += 1;
        }
    }
    Ok(format!(
        "{} completions, d(D) = -1, d(D2) >= 2, gcd = 1 on {with_d1} with D1 != 0",
        completions().len()
    ))
}

fn euler_bookkeeping() -> Outcome {
    let mut minus_one = 0;
    for p in completions() {
        let model = build_completion(p);
        let chi = model.euler_x().map_err(|e| format!("{p:?}: {e}"))?;
        let edges = model.c_d1_edges() as i64;
        ensure(chi == -edges, || format!("{p:?}: chi = {chi}, #(C-D1) = {edges}"))?;
        if !model.role(Role::D1).is_empty() {
            ensure(chi == -1, || format!("{p:?}: chi = {chi} with D1 != 0"))?;
            minus_one += 1;
        }
    }
    Ok(format!(
        "chi(X) = -#(C-D1) on all completions, chi = -1 on the {minus_one} with D1 != 0"
    ))
}

fn splitting() -> Outcome {
    let mut count = 0usize;
    for g in weighted_trees(7, -5..=2) {
        let s = g.whole();
        let split = discriminant_by_splitting(&s).map_err(|e| e.to_string())?;
        ensure(split == discriminant(&s), || format!("{g:?}"))?;
        count += 1;
    }
    let mut rng = seeded(1);
    for i in 0..1000 {
        let g = random_tree(&mut rng, 1 + i % 12, -6..=3);
        let s = g.whole();
        ensure(discriminant_by_splitting(&s).ok() == Some(discriminant(&s)), || {
            format!("{g:?}")
        })?;
    }
    Ok(format!(
        "{count} weighted trees up to isomorphism and 1000 random trees"
    ))
}

fn fibers() -> Outcome {
    let all = enumerate_fibers(8);
    let mut unique = 0;
    for f in &all {
        let r = validate_fiber(f);
        ensure(r.tier1.is_empty(), || format!("{}: {:?}", f.canonical_form(), r.tier1))?;
        if r.unique_minus_one.is_some() {
            ensure(r.tier2.is_empty(), || format!("{}: {:?}", f.canonical_form(), r.tier2))?;
            unique += 1;
        }
    }
    Ok(format!(
        "{} fibers pass tier 1, {unique} with a unique (-1) pass tier 2",
        all.len()
    ))
}

fn move_calculus() -> Outcome {
    let mut rng = seeded(11);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=6);
        let extra = rng.gen_range(0..2);
        let g = random_graph(&mut rng, n, extra, -4..=2);
        let len = rng.gen_range(0..=30);
        let (h, log) = random_moves(&mut rng, &g, len);
        ensure(discriminant(&g.whole()) == discriminant(&h.whole()), || {
            format!("{g:?} -> {h:?}")
        })?;
        ensure(log.replay(&g).as_ref() == Ok(&h), || "replay".into())?;
    }
    let mut rng = seeded(12);
    for _ in 0..300 {
        let n = rng.gen_range(1..=7);
        let g = random_graph(&mut rng, n, 1, -4..=2);
        let (h, m) = blow_up_free(&g, VertexId(rng.gen_range(0..n as u32))).map_err(|e| e.to_string())?;
        ensure(blow_down(&h, m.vertex).map(|x| x.0).as_ref() == Ok(&g), || {
            format!("{g:?}")
        })?;
        let first = g.edges().next().map(|(a, b, _)| (a, b));
        if let Some((a, b)) = first {
            let (h, m) = blow_up_edge(&g, a, b).map_err(|e| e.to_string())?;
            ensure(blow_down(&h, m.vertex).map(|x| x.0).as_ref() == Ok(&g), || {
                format!("{g:?}")
            })?;
        }
    }
    let mut rng = seeded(13);
    let none = BTreeSet::new();
    for _ in 0..300 {
        let n = rng.gen_range(1..=6);
        let g = random_graph(&mut rng, n, 0, -3..=1);
        let (h, _) = random_moves(&mut rng, &g, 12);
        let (once, _) = snc_minimalize(&h, &none);
        let (twice, again) = snc_minimalize(&once, &none);
        ensure(once == twice && again.is_empty(), || format!("{h:?}"))?;
    }
    Ok("1000 random sequences keep d, 300 round trips, 300 idempotent minimalizations".into())
}

fn standard_forms() -> Outcome {
    let r = standardize_chain_graph(&WeightedGraph::chain_of_type(&[2, 1, 2])).map_err(|e| e.to_string())?;
    ensure(r.chain.entries() == [0], || format!("[2,1,2] -> {}", r.chain))?;
    let mut rng = seeded(21);
    for _ in 0..200 {
        let steps = rng.gen_range(1..=20);
        let g = random_chain_from(&mut rng, &[0, 0], steps);
        ensure(discriminant(&g.whole()) == BigInt::from(-1), || format!("{g:?}"))?;
        let r = standardize_chain_graph(&g).map_err(|e| e.to_string())?;
        ensure(r.chain.entries() == [0, 0], || format!("{g:?} -> {}", r.chain))?;
    }
    for a in -10i64..=10 {
        let d = discriminant(&WeightedGraph::chain_of_type(&[2, a, 2]).whole());
        ensure(d == BigInt::from(4 * (a - 1)), || format!("d([2,{a},2]) = {d}"))?;
        ensure((&d % BigInt::from(2)).is_zero(), || {
            format!("d([2,{a},2]) = {d} is odd")
        })?;
    }
    Ok("[2,1,2] -> [0], 200 random d = -1 chains -> [0,0], d([2,a,2]) = 4(a-1) for |a| <= 10".into())
}

fn smith_and_acyclicity() -> Outcome {
    let mut rng = seeded(2);
    let (mut definite, mut indefinite) = (0, 0);
    while definite < 500 || indefinite < 500 {
        let n = rng.gen_range(1..=9);
        let extra = rng.gen_range(0..3);
        let g = random_graph(&mut rng, n, extra, -5..=2);
        let s = g.sub(random_selection(&mut rng, &g)).map_err(|e| e.to_string())?;
        let d = discriminant(&s);
        if d.is_zero() {
            continue;
        }
        match definiteness(&s) {
            Definiteness::NegativeDefinite if definite < 500 => definite += 1,
            Definiteness::Indefinite if indefinite < 500 => indefinite += 1,
            _ => continue,
        }
        let order = smith_invariants(&s).torsion_order();
        ensure(order == d.abs(), || format!("order {order}, d = {d}"))?;
    }
    let q = |d: i64, e: i64| q_acyclicity_relation(&BigInt::from(d), &BigInt::from(e)).map_err(|x| x.to_string());
    ensure(q(1, 1)?.h1_order.as_deref() == Some("1"), || "(1,1)".into())?;
    ensure(q(9, 1)?.h1_order.as_deref() == Some("3"), || "(9,1)".into())?;
    ensure(q(6, 2)?.violation.is_some(), || "(6,2)".into())?;
    for n in 2..=30 {
        let model = build_completion(CuspPair::new(n, 1).unwrap());
        let div = divisibility_check(&model).map_err(|e| e.to_string())?;
        ensure(div.d1_empty && !div.contradiction, || format!("({n},1): {div:?}"))?;
        for r in smooth_case_branches(n).map_err(|e| e.to_string())? {
            let expected = match r.branch {
                SmoothBranch::Positive => Obstruction::ForcedEmptyD1,
                SmoothBranch::Negative => Obstruction::DivisibilityClash,
                SmoothBranch::Zero => Obstruction::FiberDiscriminant,
            };
            ensure(r.obstructions == [expected], || {
                format!("({n},1) {:?}: {:?}", r.branch, r.obstructions)
            })?;
        }
    }
    Ok("smith order = |d| on 500 + 500 subdivisors, h = 1, 3 and a violation, one obstruction per branch".into())
}

fn regression() -> Outcome {
    let counts = fiber_counts(8);
    ensure(counts == [1, 1, 2, 5, 18, 70, 320, 1525], || format!("{counts:?}"))?;
    let bytes = common::check_frozen()?;
    Ok(format!("fiber counts {counts:?}, {bytes} frozen bytes unchanged"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("pencil endgame", pencil_endgame),
        ("plane boundary discriminants", plane_boundary),
        ("Euler bookkeeping", euler_bookkeeping),
        ("splitting discriminants", splitting),
        ("fiber structure", fibers),
        ("move calculus", move_calculus),
        ("standard forms", standard_forms),
        ("Smith order and acyclicity", smith_and_acyclicity),
        ("frozen regression", regression),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} PASS {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
