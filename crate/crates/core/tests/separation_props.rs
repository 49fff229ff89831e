use fansquare_core::cdw::HFamily;
use fansquare_core::family::FuncFamily;
use fansquare_core::ladder::LadderSystem;
use fansquare_core::ordinal::Ordinal;
use fansquare_core::random;
use fansquare_core::separation::{
    adversary_two_sets, exists_separation_capped, is_separation, largest_separable_subset, min_cap,
    min_sum_labeling, solve_separation, Labeling, SeparationResult, ORACLE_GUARD,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent enumeration: every labeling in lexicographic order, checked
/// pair by pair against the raw sets.
fn oracle_least(h: &HFamily, idx: &[usize], cap: u32) -> Option<Vec<u32>> {
    let k = idx.len();
    let total = (cap as u64 + 1).pow(k as u32);
    (0..total).find_map(|code| {
        let mut f = vec![0u32; k];
        let mut c = code;
        for slot in f.iter_mut().rev() {
            *slot = (c % (cap as u64 + 1)) as u32;
            c /= cap as u64 + 1;
        }
        let ok = (0..k)
            .all(|a| (a + 1..k).all(|b| !h.get(idx[a], idx[b]).unwrap().contains(f[a], f[b])));
        ok.then_some(f)
    })
}

fn oracle_min_sum(h: &HFamily, idx: &[usize], cap: u32) -> Option<u64> {
    let k = idx.len();
    let total = (cap as u64 + 1).pow(k as u32);
    (0..total)
        .filter_map(|code| {
            let mut f = vec![0u32; k];
            let mut c = code;
            for slot in f.iter_mut().rev() {
                *slot = (c % (cap as u64 + 1)) as u32;
                c /= cap as u64 + 1;
            }
            let ok = (0..k)
                .all(|a| (a + 1..k).all(|b| !h.get(idx[a], idx[b]).unwrap().contains(f[a], f[b])));
            ok.then(|| f.iter().map(|&x| x as u64).sum())
        })
        .min()
}

fn family(seed: u64, n: usize) -> HFamily {
    random::h_family(&mut ChaCha8Rng::seed_from_u64(seed), n, 7)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn solvers_agree_with_enumeration(seed in any::<u64>(), n in 1usize..=5, cap in 0u32..=6) {
        let h = family(seed, n);
        let idx: Vec<usize> = (0..n).collect();
        let expect = oracle_least(&h, &idx, cap);
        let brute = exists_separation_capped(&h, &idx, cap, ORACLE_GUARD).unwrap();
        let fast = solve_separation(&h, &idx, cap).unwrap();
        let want = expect.map(|f| Labeling::from_pairs(idx.iter().copied().zip(f)));
        prop_assert_eq!(brute.status.witness(), want.as_ref());
        prop_assert_eq!(fast.status.witness(), want.as_ref());
        if let Some(w) = &want {
            prop_assert!(is_separation(&h, &idx, w).unwrap().is_none());
        }
    }

    #[test]
    fn min_cap_and_min_sum_match_enumeration(seed in any::<u64>(), n in 1usize..=5) {
        let h = family(seed, n);
        let idx: Vec<usize> = (0..n).collect();
        let c = min_cap(&h, &idx).unwrap();
        prop_assert!(oracle_least(&h, &idx, c).is_some());
        if c > 0 {
            prop_assert!(oracle_least(&h, &idx, c - 1).is_none());
        }
        // coordinates are below 7, so cap 7 already reaches every optimum
        let ms = min_sum_labeling(&h, &idx).unwrap();
        prop_assert!(ms.exact);
        prop_assert_eq!(Some(ms.sum), oracle_min_sum(&h, &idx, 7));
        prop_assert!(is_separation(&h, &idx, &ms.labeling).unwrap().is_none());
    }

    #[test]
    fn monotone_in_cap_and_subset(seed in any::<u64>(), n in 2usize..=6, cap in 0u32..=6, drop in 0usize..6) {
        let h = family(seed, n);
        let idx: Vec<usize> = (0..n).collect();
        let here = solve_separation(&h, &idx, cap).unwrap().status.is_separated();
        let above = solve_separation(&h, &idx, cap + 1).unwrap().status.is_separated();
        prop_assert!(!here || above);
        let sub: Vec<usize> = idx.iter().copied().filter(|&i| i != drop % n).collect();
        let sub_ok = solve_separation(&h, &sub, cap).unwrap().status.is_separated();
        prop_assert!(!here || sub_ok);
        let best = largest_separable_subset(&h, &idx, cap).unwrap();
        prop_assert!(solve_separation(&h, &best, cap).unwrap().status.is_separated());
        if here {
            prop_assert_eq!(best.len(), n);
        }
    }

    #[test]
    fn pointwise_domination_preserves_separation(seed in any::<u64>(), n in 1usize..=5, bump in proptest::collection::vec(0u32..3, 5)) {
        let h = family(seed, n);
        let idx: Vec<usize> = (0..n).collect();
        let f = solve_separation(&h, &idx, 7).unwrap();
        let f = f.status.witness().unwrap();
        let g = Labeling::from_pairs(idx.iter().map(|&i| (i, f.get(i).unwrap() + bump[i])));
        prop_assert!(is_separation(&h, &idx, &g).unwrap().is_none());
    }

    #[test]
    fn split_adversary_is_consistent(seed in any::<u64>(), n in 2usize..=6, cut in 1usize..6, cap in 0u32..=6) {
        let h = family(seed, n);
        let idx: Vec<usize> = (0..n).collect();
        let cut = cut.min(n - 1);
        let f = Labeling::constant(&idx, cap);
        let whole = is_separation(&h, &idx, &f).unwrap();
        let left = &idx[..cut];
        let right = &idx[cut..];
        let cross = adversary_two_sets(&h, left, right, &f).unwrap();
        let l = is_separation(&h, left, &f).unwrap();
        let r = is_separation(&h, right, &f).unwrap();
        prop_assert_eq!(whole.is_none(), cross.is_none() && l.is_none() && r.is_none());
    }
}

#[test]
fn constant_shadow_on_sum_threshold_families() {
    // for h = sum threshold, a pair is cleared by constant c iff 2c > h_b(a)
    let o = |s: &str| s.parse::<Ordinal>().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for ladders in [LadderSystem::canonical(), LadderSystem::seeded(9)] {
        let fam = FuncFamily::walk(o("w^(2)"), ladders);
        let pts: Vec<Ordinal> = random::ordinals_below(&mut rng, &o("w^(2)"), 6)
            .into_iter()
            .collect();
        let h = HFamily::sum_threshold(fam.clone(), pts.clone()).unwrap();
        let idx: Vec<usize> = (0..pts.len()).collect();
        let top = (0..pts.len())
            .flat_map(|b| (0..b).map(move |a| (a, b)))
            .map(|(a, b)| fam.eval(&pts[a], &pts[b]).unwrap())
            .max()
            .unwrap_or(0);
        let c = top / 2 + 1;
        assert!(is_separation(&h, &idx, &Labeling::constant(&idx, c))
            .unwrap()
            .is_none());
        assert!(min_cap(&h, &idx).unwrap() <= c);
    }
}

#[test]
fn results_round_trip_through_json() {
    let h = family(5, 4);
    let idx: Vec<usize> = (0..4).collect();
    for cap in 0..8 {
        let r = solve_separation(&h, &idx, cap).unwrap();
        let r = SeparationResult {
            min_cap: Some(1),
            ..r
        };
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<SeparationResult>(&text).unwrap(), r);
    }
}
