//! The seeded property suite behind `verify`.

use std::collections::{BTreeMap, BTreeSet};

use fansquare_core::bound::{thm6_bound_below, verify_witness, ClosureRule, Club, SampleClosure};
use fansquare_core::cdw::{downward_close, extract_from_space, SpaceData};
use fansquare_core::family::{build_thm3_labeling, FuncFamily};
use fansquare_core::ladder::LadderSystem;
use fansquare_core::ordinal::Ordinal;
use fansquare_core::random;
use fansquare_core::separation::{
    exists_separation_capped, is_separation, solve_separation, Labeling, ORACLE_GUARD,
};
use fansquare_core::space::build_space;
use fansquare_core::walk::CSequence;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub check: String,
    pub case: usize,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub checks: Vec<CheckSummary>,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

type Check = fn(&mut ChaCha8Rng) -> Result<(), String>;

fn o(s: &str) -> Ordinal {
    s.parse().expect("literal")
}

fn cdw_closure(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let pts: Vec<(u32, u32)> = (0..rng.gen_range(0..8))
        .map(|_| (rng.gen_range(0..16), rng.gen_range(0..16)))
        .collect();
    let s = downward_close(pts.iter().copied());
    if downward_close(s.points()) != s {
        return Err(format!("closure of {pts:?} is not idempotent"));
    }
    if let Some(p) = pts.iter().find(|&&(n, m)| !s.contains(n, m)) {
        return Err(format!("closure of {pts:?} misses {p:?}"));
    }
    let grid: BTreeSet<(u32, u32)> = pts
        .iter()
        .flat_map(|&(n, m)| (0..=n).flat_map(move |a| (0..=m).map(move |b| (a, b))))
        .collect();
    if s.points().collect::<BTreeSet<_>>() != grid {
        return Err(format!("closure of {pts:?} differs from the grid"));
    }
    Ok(())
}

fn oracle_equivalence(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = rng.gen_range(1..=5);
    let h = random::h_family(rng, n, 7);
    let cap = rng.gen_range(0..=6);
    let idx: Vec<usize> = (0..n).collect();
    let a = exists_separation_capped(&h, &idx, cap, ORACLE_GUARD).map_err(|e| e.to_string())?;
    let b = solve_separation(&h, &idx, cap).map_err(|e| e.to_string())?;
    if a != b {
        return Err(format!("cap {cap}: oracle {a:?}, solver {b:?}"));
    }
    Ok(())
}

fn correspondence(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = rng.gen_range(1..=5);
    let h = random::h_family(rng, n, 6);
    let idx: Vec<usize> = (0..n).collect();
    let f = Labeling::from_pairs(idx.iter().map(|&i| (i, rng.gen_range(0..7))));
    let x = build_space(&h, &idx).map_err(|e| e.to_string())?;
    let top = x.separation_check(&idx, &f).map_err(|e| e.to_string())?;
    let comb = is_separation(&h, &idx, &f)
        .map_err(|e| e.to_string())?
        .is_none();
    if top != comb {
        return Err(format!(
            "labeling {f:?}: space says {top}, family says {comb}"
        ));
    }
    Ok(())
}

fn round_trip(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = rng.gen_range(1..=5);
    let h = random::h_family(rng, n, 6);
    let idx: Vec<usize> = (0..n).collect();
    let x = build_space(&h, &idx).map_err(|e| e.to_string())?;
    let depth = 8;
    let mut table = BTreeMap::new();
    for j in 0..n {
        for i in 0..j {
            let grid: Vec<bool> = (0..depth)
                .flat_map(|a| (0..depth).map(move |b| (a, b)))
                .map(|(a, b)| {
                    let u = x.neighborhood(i, a);
                    x.neighborhood(j, b).iter().any(|p| u.contains(p))
                })
                .collect();
            if grid.iter().any(|&b| b) {
                table.insert((i, j), grid);
            }
        }
    }
    let sd = SpaceData {
        indices: x.indices().to_vec(),
        depth,
        table,
    };
    let back = extract_from_space(&sd).map_err(|e| e.to_string())?;
    if back.entries().map_err(|e| e.to_string())? != h.entries().map_err(|e| e.to_string())? {
        return Err("extracted family differs".into());
    }
    Ok(())
}

fn walk_identity(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let c = CSequence::new(LadderSystem::canonical());
    let top = o("w^(w)");
    let mut a = random::ordinal_below(rng, &top);
    let mut b = random::ordinal_below(rng, &top);
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    let r = c.rho2(&a, &b).map_err(|e| e.to_string())?;
    if a == b {
        return if r == 0 {
            Ok(())
        } else {
            Err(format!("rho2({a}, {a}) = {r}"))
        };
    }
    let d = c.step(&a, &b).map_err(|e| e.to_string())?;
    let rest = c.rho2(&a, &d).map_err(|e| e.to_string())?;
    if r != rest + 1 || r == 0 {
        return Err(format!("rho2({a}, {b}) = {r}, rho2({a}, {d}) = {rest}"));
    }
    Ok(())
}

fn sample_labeling(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let fam = FuncFamily::walk(o("w^(3)"), LadderSystem::canonical());
    let d = random::ordinals_below(rng, fam.bound(), 12);
    let gamma = d
        .iter()
        .nth(rng.gen_range(0..d.len()))
        .expect("nonempty")
        .clone();
    let f = build_thm3_labeling(&fam, &gamma, &d).map_err(|e| e.to_string())?;
    for beta in d.range(..=gamma.clone()) {
        for alpha in d.range(..beta.clone()) {
            let h = fam.eval(alpha, beta).map_err(|e| e.to_string())?;
            if f[alpha] + f[beta] <= h {
                return Err(format!("pair ({alpha}, {beta}) not cleared"));
            }
        }
    }
    Ok(())
}

fn bound_certification(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let seed = rng.gen();
    let ladders = LadderSystem::seeded(seed);
    let fam = FuncFamily::ladder_disagreement(o("w^(3)"), ladders.clone());
    let gamma = random::limit_below(rng, fam.bound());
    let mut pts = random::ordinals_below(rng, &gamma, 10);
    pts.insert(gamma.clone());
    let run = || -> fansquare_core::Result<Vec<(Ordinal, Ordinal)>> {
        let rules = vec![
            ClosureRule::LadderPrefix {
                ladders: ladders.clone(),
                depth: 2,
            },
            ClosureRule::Club(Club::shifted_ladder(&gamma, &ladders)?),
        ];
        let d = SampleClosure::close(pts.clone(), rules)?;
        let w = thm6_bound_below(&fam, &gamma, &d)?;
        verify_witness(&w, &fam, d.points())
    };
    match run() {
        Ok(v) if v.is_empty() => Ok(()),
        Ok(v) => Err(format!(
            "seed {seed}, gamma {gamma}: {} violations",
            v.len()
        )),
        Err(e) => Err(e.to_string()),
    }
}

const CHECKS: &[(&str, usize, Check)] = &[
    ("cdw_closure", 1000, cdw_closure),
    ("oracle_equivalence", 500, oracle_equivalence),
    ("correspondence", 1000, correspondence),
    ("round_trip", 200, round_trip),
    ("walk_identity", 1000, walk_identity),
    ("sample_labeling", 50, sample_labeling),
    ("bound_certification", 20, bound_certification),
];

/// Runs every check; each gets its own stream derived from `seed`.
pub fn run_suite(seed: u64) -> SuiteReport {
    let mut checks = Vec::new();
    let mut failures = Vec::new();
    for (k, &(name, cases, check)) in CHECKS.iter().enumerate() {
        let mut rng =
            ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let before = failures.len();
        for case in 0..cases {
            if let Err(detail) = check(&mut rng) {
                failures.push(Failure {
                    check: name.into(),
                    case,
                    detail,
                });
            }
        }
        checks.push(CheckSummary {
            name: name.into(),
            cases,
            failures: failures.len() - before,
        });
    }
    SuiteReport {
        seed,
        checks,
        failures,
    }
}
