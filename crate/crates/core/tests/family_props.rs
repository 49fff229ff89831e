use std::collections::{BTreeMap, BTreeSet};

use fansquare_core::bound::{
    thm6_bound_below, thm6_bound_nonstationary, verify_witness, ClosureRule, Club, Recursion,
    SampleClosure,
};
use fansquare_core::family::{build_thm3_labeling, disagreement, FuncFamily};
use fansquare_core::ladder::LadderSystem;
use fansquare_core::ordinal::Ordinal;
use fansquare_core::random;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn o(s: &str) -> Ordinal {
    s.parse().unwrap()
}

fn check_labeling(family: &FuncFamily, d: &BTreeSet<Ordinal>, gamma: &Ordinal) {
    let f = build_thm3_labeling(family, gamma, d).unwrap();
    for beta in d.range(..=gamma.clone()) {
        for alpha in d.range(..beta.clone()) {
            let h = family.eval(alpha, beta).unwrap();
            assert!(
                f[alpha] + f[beta] > h,
                "f({alpha}) + f({beta}) = {} <= {h}",
                f[alpha] + f[beta]
            );
        }
    }
}

#[test]
fn sample_labeling_on_walk_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (bound, ladders) in [
        ("w^(2)", LadderSystem::canonical()),
        ("w^(3)", LadderSystem::canonical()),
        ("w^(3)", LadderSystem::seeded(5)),
    ] {
        let family = FuncFamily::walk(o(bound), ladders);
        for _ in 0..40 {
            let d = random::ordinals_below(&mut rng, family.bound(), 12);
            let gamma = d.iter().nth(rng.gen_range(0..d.len())).unwrap().clone();
            check_labeling(&family, &d, &gamma);
        }
    }
}

fn below_config(seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ladders = LadderSystem::seeded(seed);
    let family = FuncFamily::ladder_disagreement(o("w^(3)"), ladders.clone());
    let gamma = random::limit_below(&mut rng, &o("w^(3)"));
    let mut seed_pts = random::ordinals_below(&mut rng, &gamma, 10);
    seed_pts.insert(gamma.clone());
    let rules = vec![
        ClosureRule::LadderPrefix {
            ladders: ladders.clone(),
            depth: 2,
        },
        ClosureRule::Club(Club::shifted_ladder(&gamma, &ladders).unwrap()),
    ];
    let d = SampleClosure::close(seed_pts, rules).unwrap();
    let w = thm6_bound_below(&family, &gamma, &d).unwrap();
    let bad = verify_witness(&w, &family, d.points()).unwrap();
    assert!(bad.is_empty(), "seed {seed}, gamma {gamma}: {bad:?}");
}

#[test]
fn below_bound_is_certified_on_its_closure() {
    for seed in 0..60 {
        below_config(seed);
    }
}

#[test]
fn nonstationary_bound_is_certified_on_its_closure() {
    for seed in 0..40u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let ladders = LadderSystem::seeded(seed);
        let top = o("w^(3)");
        let family = FuncFamily::ladder_disagreement(top.clone(), ladders.clone());
        let a: BTreeSet<Ordinal> = (0..5)
            .map(|_| random::limit_below(&mut rng, &top))
            .collect();
        let explicit: BTreeSet<Ordinal> = (0..4)
            .map(|_| random::ordinal_below(&mut rng, &top))
            .filter(|x| !a.contains(x))
            .collect();
        let club = Club::new(top.clone(), explicit, ladders.clone()).unwrap();
        let a: BTreeSet<Ordinal> = a
            .into_iter()
            .filter(|x| !club.contains(x).unwrap())
            .collect();
        let mut pts = random::ordinals_below(&mut rng, &top, 10);
        pts.extend(a.iter().cloned());
        let d = SampleClosure::close(pts, vec![ClosureRule::Club(club.clone())]).unwrap();
        let w = thm6_bound_nonstationary(&family, &a, &club, &d).unwrap();
        assert!(a.iter().all(|x| w.witness.contains_key(x)));
        let bad = verify_witness(&w, &family, d.points()).unwrap();
        assert!(bad.is_empty(), "seed {seed}: {bad:?}");

        // a larger, unclosed sample is only an empirical report
        let mut wider = d.points().clone();
        wider.extend(random::ordinals_below(&mut rng, &top, 10));
        let _ = verify_witness(&w, &family, &wider).unwrap();
    }
}

#[test]
fn successor_bounds_dominate() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for seed in 0..10 {
        let rec = Recursion::new(LadderSystem::seeded(seed));
        for _ in 0..10 {
            let beta = random::limit_below(&mut rng, &o("w^(3)"));
            for x in random::ordinals_below(&mut rng, &beta, 6) {
                let lo = rec.value(&beta, &x).unwrap();
                let hi = rec.value(&beta.succ(), &x).unwrap();
                assert!(hi >= lo, "g_{{{beta}+1}}({x}) = {hi} < {lo}");
            }
        }
    }
}

proptest! {
    #[test]
    fn shared_prefix_forces_disagreement_index(
        prefix in proptest::collection::vec(1u64..4, 0..6),
        tail_a in 1u64..5,
        tail_b in 1u64..5,
    ) {
        // increasing naturals from the gaps, then diverge
        let mut xs = Vec::new();
        let mut acc = 0;
        for g in &prefix {
            acc += g;
            xs.push(Ordinal::nat(acc));
        }
        let p = xs.len() as u32;
        let mut a = xs.clone();
        a.push(Ordinal::nat(acc + tail_a));
        let mut b = xs;
        b.push(Ordinal::omega().add_nat(tail_b));
        let mut t = BTreeMap::new();
        t.insert(o("w"), a);
        t.insert(o("w*2"), b);
        let l = LadderSystem::explicit(t).unwrap();
        let h = disagreement(&l, &o("w"), &o("w*2")).unwrap();
        prop_assert!(h >= p);
        prop_assert_eq!(h, disagreement(&l, &o("w*2"), &o("w")).unwrap());
    }
}
