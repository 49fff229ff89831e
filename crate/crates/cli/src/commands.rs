//! One function per subcommand. Each returns the rendered output and the
//! exit code; writing it out is left to the caller.

use std::collections::BTreeSet;

use fansquare_core::bound::{
    thm6_bound_below, thm6_bound_nonstationary, verify_witness, BoundWitnessDoc, ClosureRule, Club,
    SampleClosure,
};
use fansquare_core::cdw::{HFamilyDoc, IndexLabel};
use fansquare_core::ordinal::Ordinal;
use fansquare_core::random;
use fansquare_core::separation::{
    adversary_two_sets, exists_separation_capped, min_cap, min_sum_labeling, solve_separation,
    Labeling, MinSum, SeparationResult, Violation,
};
use fansquare_core::space::{build_space, export_space};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{
    parse_ordinal, BoundMode, Config, FamilyKind, FamilySpec, Format, LadderKind, LadderSpec,
};
use crate::CliError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_BLOCKED: i32 = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub body: String,
    pub code: i32,
}

impl Outcome {
    fn json<T: Serialize>(value: &T, code: i32) -> Result<Self, CliError> {
        let mut body = serde_json::to_string_pretty(value).map_err(fansquare_core::Error::from)?;
        body.push('\n');
        Ok(Outcome { body, code })
    }
}

fn positions(n: usize) -> Vec<usize> {
    (0..n).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDoc {
    pub kind: FamilyKind,
    pub bound: Ordinal,
    pub ladders: LadderSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<(String, String, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenReport {
    pub family: FamilyDoc,
    pub hfamily: HFamilyDoc,
}

pub fn gen(cfg: &Config) -> Result<Outcome, CliError> {
    let fam = cfg.func_family()?;
    let mut ladders = cfg.ladders.clone();
    if ladders.kind == LadderKind::Seeded {
        ladders.seed = Some(ladders.seed.unwrap_or(cfg.seed));
    }
    let FamilySpec { kind, values } = cfg.family.clone();
    let report = GenReport {
        family: FamilyDoc {
            kind,
            bound: fam.bound().clone(),
            ladders,
            values,
        },
        hfamily: cfg.h_family()?.to_doc()?,
    };
    Outcome::json(&report, EXIT_OK)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalRow {
    pub alpha: Ordinal,
    pub beta: Ordinal,
    pub h: u32,
}

/// `h_beta(alpha)` for every pair of the index set.
pub fn eval(cfg: &Config) -> Result<Outcome, CliError> {
    let fam = cfg.func_family()?;
    let idx = cfg.index_set()?;
    let mut rows = Vec::new();
    for (j, beta) in idx.iter().enumerate() {
        for alpha in &idx[..j] {
            rows.push(EvalRow {
                alpha: alpha.clone(),
                beta: beta.clone(),
                h: fam.eval(alpha, beta)?,
            });
        }
    }
    Outcome::json(&rows, EXIT_OK)
}

pub fn hset(cfg: &Config) -> Result<Outcome, CliError> {
    Outcome::json(&cfg.h_family()?.to_doc()?, EXIT_OK)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparateReport {
    pub indices: Vec<IndexLabel>,
    pub cap: u32,
    pub solver: String,
    pub result: SeparationResult,
}

pub fn separate(cfg: &Config) -> Result<Outcome, CliError> {
    let h = cfg.h_family()?;
    let idx = positions(h.len());
    let (solver, result) = if cfg.oracle {
        (
            "oracle",
            exists_separation_capped(&h, &idx, cfg.cap, cfg.guard as u128)?,
        )
    } else {
        ("pruned", solve_separation(&h, &idx, cfg.cap)?)
    };
    let code = if result.status.is_separated() {
        EXIT_OK
    } else {
        EXIT_BLOCKED
    };
    let report = SeparateReport {
        indices: h.indices().to_vec(),
        cap: cfg.cap,
        solver: solver.into(),
        result,
    };
    Outcome::json(&report, code)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinCapReport {
    pub indices: Vec<IndexLabel>,
    pub min_cap: u32,
    pub min_sum: MinSum,
}

pub fn mincap(cfg: &Config) -> Result<Outcome, CliError> {
    let h = cfg.h_family()?;
    let idx = positions(h.len());
    let report = MinCapReport {
        indices: h.indices().to_vec(),
        min_cap: min_cap(&h, &idx)?,
        min_sum: min_sum_labeling(&h, &idx)?,
    };
    Outcome::json(&report, EXIT_OK)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversaryReport {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub labeling: Labeling,
    pub pair: Option<Violation>,
}

/// Looks for a violating pair across a split of the index set.
pub fn adversary(cfg: &Config) -> Result<Outcome, CliError> {
    let h = cfg.h_family()?;
    let idx = positions(h.len());
    let cut = cfg.split.unwrap_or(idx.len() / 2).min(idx.len());
    let labeling = match &cfg.labeling {
        Some(v) if v.len() == idx.len() => {
            Labeling::from_pairs(idx.iter().copied().zip(v.iter().copied()))
        }
        Some(v) => {
            return Err(CliError::Config(format!(
                "labeling has {} values for {} indices",
                v.len(),
                idx.len()
            )))
        }
        None => Labeling::constant(&idx, cfg.cap),
    };
    let (left, right) = idx.split_at(cut);
    let pair = adversary_two_sets(&h, left, right, &labeling)?;
    let code = if pair.is_some() {
        EXIT_BLOCKED
    } else {
        EXIT_OK
    };
    let report = AdversaryReport {
        left: left.to_vec(),
        right: right.to_vec(),
        labeling,
        pair,
    };
    Outcome::json(&report, code)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmpiricalReport {
    pub points: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub mode: BoundMode,
    pub gamma: Ordinal,
    pub closure_size: usize,
    pub witness: BoundWitnessDoc,
    pub violations: Vec<(Ordinal, Ordinal)>,
    pub empirical: EmpiricalReport,
}

pub fn bound(cfg: &Config) -> Result<Outcome, CliError> {
    let fam = cfg.func_family()?;
    let spec = &cfg.bound_spec;
    let top = cfg.working_bound()?;
    let ladders = fam
        .ladders()
        .cloned()
        .unwrap_or_else(fansquare_core::ladder::LadderSystem::canonical);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let gamma = match (&spec.mode, &spec.gamma) {
        (BoundMode::Below, Some(g)) => parse_ordinal(g)?,
        _ => top.clone(),
    };
    if gamma.is_zero() {
        return Err(CliError::Config("the bound must be nonzero".into()));
    }
    let mut seed_pts = random::ordinals_below(&mut rng, &gamma, spec.sample);
    let (rules, set, club) = match spec.mode {
        BoundMode::Below => {
            seed_pts.insert(gamma.clone());
            let mut rules = Vec::new();
            if gamma.is_limit() && cfg.family.kind != FamilyKind::Explicit {
                rules.push(ClosureRule::LadderPrefix {
                    ladders: ladders.clone(),
                    depth: 2,
                });
                rules.push(ClosureRule::Club(Club::shifted_ladder(&gamma, &ladders)?));
            }
            (rules, BTreeSet::new(), None)
        }
        BoundMode::Nonstationary => {
            let set: BTreeSet<Ordinal> = spec
                .set
                .iter()
                .map(|s| parse_ordinal(s))
                .collect::<Result<_, _>>()?;
            let pts = spec
                .club
                .iter()
                .map(|s| parse_ordinal(s))
                .collect::<Result<_, _>>()?;
            let club = Club::new(top.clone(), pts, ladders.clone())?;
            seed_pts.extend(set.iter().cloned());
            (vec![ClosureRule::Club(club.clone())], set, Some(club))
        }
    };
    let sample = if spec.close {
        SampleClosure::close(seed_pts, rules)?
    } else {
        SampleClosure::unclosed(seed_pts, rules)
    };
    let w = match &club {
        None => thm6_bound_below(&fam, &gamma, &sample)?,
        Some(c) => thm6_bound_nonstationary(&fam, &set, c, &sample)?,
    };
    let violations = verify_witness(&w, &fam, sample.points())?;
    let mut wider = sample.points().clone();
    wider.extend(random::ordinals_below(&mut rng, &gamma, spec.extra));
    let empirical = EmpiricalReport {
        points: wider.len(),
        violations: verify_witness(&w, &fam, &wider)?.len(),
    };
    let code = if violations.is_empty() {
        EXIT_OK
    } else {
        crate::EXIT_VALIDATOR
    };
    let report = BoundReport {
        mode: spec.mode.clone(),
        gamma,
        closure_size: sample.points().len(),
        witness: w.to_doc()?,
        violations,
        empirical,
    };
    Outcome::json(&report, code)
}

pub fn space(cfg: &Config) -> Result<Outcome, CliError> {
    let h = cfg.h_family()?;
    let x = build_space(&h, &positions(h.len()))?;
    let fmt = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => "json",
        Format::Dot => "dot",
        Format::Csv => return Err(CliError::Config("space exports json or dot".into())),
    };
    let mut body = export_space(&x, fmt, cfg.cap)?;
    if !body.ends_with('\n') {
        body.push('\n');
    }
    Ok(Outcome {
        body,
        code: EXIT_OK,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub struct GrowthRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub min_cap: u32,
    pub min_sum: u64,
    pub witness_max: u32,
}

/// Statistics along the nested prefixes of the index set.
pub fn growth_rows(cfg: &Config) -> Result<Vec<GrowthRow>, CliError> {
    let h = cfg.h_family()?;
    let sizes: Vec<usize> = if cfg.schedule.is_empty() {
        (1..=h.len()).collect()
    } else {
        cfg.schedule.clone()
    };
    if sizes.windows(2).any(|w| w[0] > w[1]) || sizes.last().is_some_and(|&n| n > h.len()) {
        return Err(CliError::Config(format!(
            "schedule must be non-decreasing and at most {}",
            h.len()
        )));
    }
    let mut rows: Vec<GrowthRow> = Vec::new();
    for n in sizes {
        let idx = positions(n);
        let c = min_cap(&h, &idx)?;
        let least = solve_separation(&h, &idx, c)?;
        let witness_max = least
            .status
            .witness()
            .and_then(|f| f.values().values().max().copied())
            .unwrap_or(0);
        if let Some(prev) = rows.last() {
            if c < prev.min_cap {
                return Err(CliError::Validator(format!(
                    "min_cap fell from {} to {c} between N={} and N={n}",
                    prev.min_cap, prev.n
                )));
            }
        }
        rows.push(GrowthRow {
            n,
            min_cap: c,
            min_sum: min_sum_labeling(&h, &idx)?.sum,
            witness_max,
        });
    }
    Ok(rows)
}

pub fn growth(cfg: &Config) -> Result<Outcome, CliError> {
    let rows = growth_rows(cfg)?;
    match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut body = String::from("N,min_cap,min_sum,witness_max\n");
            for r in &rows {
                body.push_str(&format!(
                    "{},{},{},{}\n",
                    r.n, r.min_cap, r.min_sum, r.witness_max
                ));
            }
            Ok(Outcome {
                body,
                code: EXIT_OK,
            })
        }
        Format::Json => Outcome::json(&rows, EXIT_OK),
        Format::Dot => Err(CliError::Config("growth exports csv or json".into())),
    }
}
