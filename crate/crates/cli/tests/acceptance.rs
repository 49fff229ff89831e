//! Acceptance suite. Run with `--nocapture` to see one line per criterion.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use fansquare_cli::commands::growth_rows;
use fansquare_cli::config::{Config, IndexSpec};
use fansquare_core::bound::{
    thm6_bound_below, thm6_bound_nonstationary, verify_witness, ClosureRule, Club, SampleClosure,
};
use fansquare_core::cdw::{downward_close, extract_from_space, CdwSet, HFamily, SpaceData};
use fansquare_core::family::{build_thm3_labeling, FuncFamily};
use fansquare_core::ladder::LadderSystem;
use fansquare_core::ordinal::Ordinal;
use fansquare_core::random;
use fansquare_core::separation::{
    exists_separation_capped, is_separation, min_cap, min_sum_labeling, solve_separation, Labeling,
    ORACLE_GUARD,
};
use fansquare_core::space::{
    build_space, fan_closure_shadow, fan_points, CombSpace, FanOpen, FanOutcome, FanPoint,
};
use fansquare_core::walk::CSequence;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn o(s: &str) -> Ordinal {
    s.parse().unwrap()
}

/// Every labeling of `k` positions with values `<= cap`, lexicographic.
fn labelings(k: usize, cap: u32) -> impl Iterator<Item = Vec<u32>> {
    let base = cap as u64 + 1;
    (0..base.pow(k as u32)).map(move |mut code| {
        let mut f = vec![0u32; k];
        for slot in f.iter_mut().rev() {
            *slot = (code % base) as u32;
            code /= base;
        }
        f
    })
}

fn separates(h: &HFamily, idx: &[usize], f: &[u32]) -> bool {
    (0..idx.len())
        .all(|a| (a + 1..idx.len()).all(|b| !h.get(idx[a], idx[b]).unwrap().contains(f[a], f[b])))
}

fn oracle_least(h: &HFamily, idx: &[usize], cap: u32) -> Option<Vec<u32>> {
    labelings(idx.len(), cap).find(|f| separates(h, idx, f))
}

fn oracle_min_cap(h: &HFamily, idx: &[usize]) -> u32 {
    (0..).find(|&c| oracle_least(h, idx, c).is_some()).unwrap()
}

fn oracle_min_sum(h: &HFamily, idx: &[usize], cap: u32) -> u64 {
    labelings(idx.len(), cap)
        .filter(|f| separates(h, idx, f))
        .map(|f| f.iter().map(|&x| x as u64).sum())
        .min()
        .unwrap()
}

fn local(idx: &[usize], f: &[u32]) -> Labeling {
    Labeling::from_pairs(idx.iter().copied().zip(f.iter().copied()))
}

type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

struct Outcome {
    failures: usize,
    detail: String,
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA1);
    let mut bad = 0;
    for _ in 0..500 {
        let n = rng.gen_range(1..=5);
        let h = random::h_family(&mut rng, n, 7);
        let cap = rng.gen_range(0..=6);
        let idx: Vec<usize> = (0..n).collect();
        let expect = oracle_least(&h, &idx, cap).map(|f| local(&idx, &f));
        let brute = exists_separation_capped(&h, &idx, cap, ORACLE_GUARD).unwrap();
        let fast = solve_separation(&h, &idx, cap).unwrap();
        if fast.status.witness() != expect.as_ref() || brute.status != fast.status {
            bad += 1;
        }
    }
    Outcome {
        failures: bad,
        detail: format!("{bad} disagreements in 500 instances"),
    }
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA2);
    let mut bad = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=6);
        let h = random::h_family(&mut rng, n, 6);
        let all: Vec<usize> = (0..n).collect();
        let sub: Vec<usize> = all.iter().copied().filter(|_| rng.gen_bool(0.7)).collect();
        let f = local(
            &sub,
            &(0..sub.len())
                .map(|_| rng.gen_range(0..7))
                .collect::<Vec<_>>(),
        );
        let x = build_space(&h, &all).unwrap();
        if x.separation_check(&sub, &f).unwrap() != is_separation(&h, &sub, &f).unwrap().is_none() {
            bad += 1;
        }
    }
    Outcome {
        failures: bad,
        detail: format!("{bad} mismatches in 1000 cases"),
    }
}

/// Intersection table of a built space, read off the point sets.
fn tabulate(x: &CombSpace, depth: u32) -> SpaceData {
    let k = x.indices().len();
    let mut table = BTreeMap::new();
    for j in 0..k {
        for i in 0..j {
            let grid: Vec<bool> = (0..depth)
                .flat_map(|n| (0..depth).map(move |m| (n, m)))
                .map(|(n, m)| {
                    let u = x.neighborhood(i, n);
                    x.neighborhood(j, m).iter().any(|p| u.contains(p))
                })
                .collect();
            if grid.contains(&true) {
                table.insert((i, j), grid);
            }
        }
    }
    SpaceData {
        indices: x.indices().to_vec(),
        depth,
        table,
    }
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA3);
    let mut bad = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let h = random::h_family(&mut rng, n, 6);
        let all: Vec<usize> = (0..n).collect();
        let x = build_space(&h, &all).unwrap();
        let back = extract_from_space(&tabulate(&x, 8)).unwrap();
        if back.entries().unwrap() != h.entries().unwrap() {
            bad += 1;
        }
    }
    Outcome {
        failures: bad,
        detail: format!("{bad} mismatches in 200 round trips"),
    }
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA4);
    let fam = FuncFamily::walk(o("w^(3)"), LadderSystem::canonical());
    let mut bad = 0;
    for _ in 0..100 {
        let size = rng.gen_range(2..=15);
        let d = random::ordinals_below(&mut rng, fam.bound(), size);
        let gamma = d.iter().nth(rng.gen_range(0..d.len())).unwrap().clone();
        let f = build_thm3_labeling(&fam, &gamma, &d).unwrap();
        let a: Vec<Ordinal> = d
            .range(..=gamma.clone())
            .filter(|_| rng.gen_bool(0.8))
            .cloned()
            .collect();
        let h = HFamily::sum_threshold(fam.clone(), a.clone()).unwrap();
        let idx: Vec<usize> = (0..a.len()).collect();
        let lab = local(&idx, &a.iter().map(|x| f[x]).collect::<Vec<_>>());
        let engine = is_separation(&h, &idx, &lab).unwrap().is_none();
        // direct check against rho values
        let direct = (0..a.len())
            .all(|j| (0..j).all(|i| f[&a[i]] + f[&a[j]] > fam.eval(&a[i], &a[j]).unwrap()));
        if !(engine && direct) {
            bad += 1;
        }
    }
    Outcome {
        failures: bad,
        detail: format!("{bad} violations in 100 samples"),
    }
}

fn criterion_5() -> Outcome {
    let mut bad = 0;
    for h in 0..=10 {
        let s = CdwSet::sum_threshold(h);
        let grid = downward_close((0..=h).map(|n| (n, h - n)));
        for n in 0..=10 {
            if s.contains(n, n) != (2 * n <= h) || grid.contains(n, n) != (2 * n <= h) {
                bad += 1;
            }
        }
    }
    Outcome {
        failures: bad,
        detail: format!("{bad} failures over h, n <= 10"),
    }
}

fn criterion_6() -> Outcome {
    let mut bad = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(0xA6);
    let top = o("w^(3)");
    for seed in 0..100u64 {
        let ladders = LadderSystem::seeded(seed);
        let fam = FuncFamily::ladder_disagreement(top.clone(), ladders.clone());

        let gamma = random::limit_below(&mut rng, &top);
        let mut pts = random::ordinals_below(&mut rng, &gamma, 10);
        pts.insert(gamma.clone());
        let rules = vec![
            ClosureRule::LadderPrefix {
                ladders: ladders.clone(),
                depth: 2,
            },
            ClosureRule::Club(Club::shifted_ladder(&gamma, &ladders).unwrap()),
        ];
        let d = SampleClosure::close(pts, rules).unwrap();
        let w = thm6_bound_below(&fam, &gamma, &d).unwrap();
        bad += verify_witness(&w, &fam, d.points()).unwrap().len();

        let explicit: BTreeSet<Ordinal> = (0..3)
            .map(|_| random::ordinal_below(&mut rng, &top))
            .collect();
        let club = Club::new(top.clone(), explicit, ladders.clone()).unwrap();
        let set: BTreeSet<Ordinal> = (0..5)
            .map(|_| random::limit_below(&mut rng, &top))
            .filter(|x| !club.contains(x).unwrap())
            .collect();
        let mut pts = random::ordinals_below(&mut rng, &top, 10);
        pts.extend(set.iter().cloned());
        let d = SampleClosure::close(pts, vec![ClosureRule::Club(club.clone())]).unwrap();
        let w = thm6_bound_nonstationary(&fam, &set, &club, &d).unwrap();
        bad += verify_witness(&w, &fam, d.points()).unwrap().len();
    }
    Outcome {
        failures: bad,
        detail: format!("{bad} violations over 100 configurations"),
    }
}

fn explicit_family(k: usize, pairs: &[(usize, usize)], set: CdwSet) -> HFamily {
    HFamily::abstract_explicit(k, pairs.iter().map(|&p| (p, set.clone())).collect()).unwrap()
}

/// Fan-language oracle: some `V_g` with range `<= cap` misses `S_B`.
fn fan_escapes(h: &HFamily, b: &[usize], cap: u32) -> Option<Vec<u32>> {
    let s = fan_points(h, b).unwrap();
    labelings(b.len(), cap).find(|g| {
        let open = FanOpen { code: local(b, g) };
        !s.iter().any(|&(p, q)| open.square_contains(p, q))
            && open.square_contains(FanPoint::Star, FanPoint::Star)
    })
}

fn criterion_7() -> Outcome {
    let mut bad = Vec::new();
    let single = explicit_family(2, &[(0, 1)], downward_close([(0, 0)]));
    let pair = [0, 1];
    if min_cap(&single, &pair).unwrap() != 1 || oracle_min_cap(&single, &pair) != 1 {
        bad.push("single pair min_cap");
    }
    let tri = explicit_family(3, &[(0, 1), (0, 2), (1, 2)], CdwSet::sum_threshold(3));
    let all = [0, 1, 2];
    if min_cap(&tri, &all).unwrap() != 2 || oracle_min_cap(&tri, &all) != 2 {
        bad.push("triangle min_cap");
    }
    let ms = min_sum_labeling(&tri, &all).unwrap();
    if ms.sum != 6 || oracle_min_sum(&tri, &all, 4) != 6 {
        bad.push("triangle min_sum");
    }
    let fan = explicit_family(2, &[(0, 1)], CdwSet::sum_threshold(3));
    if fan_closure_shadow(&fan, &pair, 1).unwrap() != FanOutcome::AdversaryWins
        || fan_escapes(&fan, &pair, 1).is_some()
    {
        bad.push("fan shadow at cap 1");
    }
    let g = local(&pair, &[2, 2]);
    if fan_closure_shadow(&fan, &pair, 2).unwrap() != (FanOutcome::Escape { g })
        || fan_escapes(&fan, &pair, 2) != Some(vec![2, 2])
    {
        bad.push("fan shadow at cap 2");
    }
    Outcome {
        failures: bad.len(),
        detail: if bad.is_empty() {
            "all exact values confirmed".into()
        } else {
            bad.join(", ")
        },
    }
}

fn criterion_8() -> Outcome {
    let mut bad = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(0xA8);

    for _ in 0..10_000 {
        let pts: Vec<(u32, u32)> = (0..rng.gen_range(0..8))
            .map(|_| (rng.gen_range(0..16), rng.gen_range(0..16)))
            .collect();
        let s = downward_close(pts.iter().copied());
        let grid: BTreeSet<(u32, u32)> = pts
            .iter()
            .flat_map(|&(n, m)| (0..=n).flat_map(move |a| (0..=m).map(move |b| (a, b))))
            .collect();
        let maximal: BTreeSet<(u32, u32)> = grid
            .iter()
            .copied()
            .filter(|&(n, m)| !grid.contains(&(n + 1, m)) && !grid.contains(&(n, m + 1)))
            .collect();
        let stairs: BTreeSet<(u32, u32)> = s.staircase().iter().copied().collect();
        if downward_close(s.points()) != s
            || s.points().collect::<BTreeSet<_>>() != grid
            || stairs != maximal
        {
            bad += 1;
        }
    }

    let c = CSequence::new(LadderSystem::canonical());
    let top = o("w^(w)");
    for _ in 0..10_000 {
        let mut a = random::ordinal_below(&mut rng, &top);
        let mut b = random::ordinal_below(&mut rng, &top);
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        let trace = c.walk(&a, &b).unwrap();
        let r = c.rho2(&a, &b).unwrap();
        let ok = if a == b {
            r == 0
        } else {
            let d = c.step(&a, &b).unwrap();
            r >= 1 && r == 1 + c.rho2(&a, &d).unwrap() && trace.steps.len() < 10_000
        };
        if !ok {
            bad += 1;
        }
    }

    let fam = FuncFamily::walk(o("w^(2)"), LadderSystem::canonical());
    for _ in 0..20 {
        let pts: Vec<Ordinal> = random::ordinals_below(&mut rng, fam.bound(), 5)
            .into_iter()
            .collect();
        let h = HFamily::sum_threshold(fam.clone(), pts.clone()).unwrap();
        let x = build_space(&h, &(0..pts.len()).collect::<Vec<_>>()).unwrap();
        for g in 0..pts.len() {
            for k in 0..=5 {
                if !x.clopen_check(g, k) {
                    bad += 1;
                }
            }
        }
    }
    // h <= 4 constant families, clopen at every level
    for hv in 0..=4 {
        let h = explicit_family(
            4,
            &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (0, 3)],
            CdwSet::sum_threshold(hv),
        );
        let x = build_space(&h, &[0, 1, 2, 3]).unwrap();
        for g in 0..4 {
            for k in 0..=5 {
                if !x.clopen_check(g, k) {
                    bad += 1;
                }
            }
        }
    }
    Outcome {
        failures: bad,
        detail: format!("{bad} failures across closure, walk and clopen suites"),
    }
}

fn criterion_9() -> Outcome {
    let cfg = Config {
        bound: "w^(2)".into(),
        indices: IndexSpec::FirstLimits(8),
        schedule: (2..=8).collect(),
        ..Config::default()
    };
    let mut bad = 0;
    let rows = growth_rows(&cfg).unwrap();
    println!("    N,min_cap,min_sum,witness_max");
    for r in &rows {
        println!("    {},{},{},{}", r.n, r.min_cap, r.min_sum, r.witness_max);
    }
    if rows.windows(2).any(|w| w[1].min_cap < w[0].min_cap) {
        bad += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xA9);
    for _ in 0..100 {
        let n = rng.gen_range(1..=7);
        let h = random::h_family(&mut rng, n, 5);
        let caps: Vec<u32> = (1..=n)
            .map(|k| min_cap(&h, &(0..k).collect::<Vec<_>>()).unwrap())
            .collect();
        if caps.windows(2).any(|w| w[1] < w[0]) {
            bad += 1;
        }
    }
    Outcome {
        failures: bad,
        detail: format!("{bad} decreasing chains"),
    }
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        (
            "1 oracle equivalence",
            criterion_1,
            Some(Duration::from_secs(10)),
        ),
        (
            "2 space/family correspondence",
            criterion_2,
            Some(Duration::from_secs(10)),
        ),
        ("3 extraction round trip", criterion_3, None),
        ("4 sample-certified labeling", criterion_4, None),
        ("5 constant-labeling algebra", criterion_5, None),
        (
            "6 bound certification",
            criterion_6,
            Some(Duration::from_secs(60)),
        ),
        ("7 exact quantities", criterion_7, None),
        ("8 structural suites", criterion_8, None),
        ("9 growth monotonicity", criterion_9, None),
    ];
    let mut failed = Vec::new();
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let slow = limit.is_some_and(|l| took > l);
        let pass = out.failures == 0 && !slow;
        let budget = limit.map_or(String::new(), |l| format!(" (limit {l:?})"));
        println!(
            "{} criterion {name}: {} in {took:.2?}{budget}",
            if pass { "PASS" } else { "FAIL" },
            out.detail
        );
        if !pass {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
