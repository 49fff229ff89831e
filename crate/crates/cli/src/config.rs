//! Experiment configuration. Ordinals are kept as literals here and parsed
//! on use, so a bad literal surfaces as [`CliError`] with exit code 2.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use fansquare_core::cdw::{HFamily, HFamilyDoc};
use fansquare_core::family::FuncFamily;
use fansquare_core::ladder::LadderSystem;
use fansquare_core::ordinal::Ordinal;
use fansquare_core::random;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_GUARD: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LadderKind {
    Canonical,
    Seeded,
    Explicit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LadderSpec {
    pub kind: LadderKind,
    /// Falls back to the top-level seed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub table: BTreeMap<String, Vec<String>>,
}

impl Default for LadderSpec {
    fn default() -> Self {
        LadderSpec {
            kind: LadderKind::Canonical,
            seed: None,
            table: BTreeMap::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Walk,
    Ladder,
    Explicit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    /// `(alpha, beta, h)` rows for the explicit kind.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<(String, String, u32)>,
}

impl Default for FamilySpec {
    fn default() -> Self {
        FamilySpec {
            kind: FamilyKind::Walk,
            values: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexSpec {
    Explicit(Vec<String>),
    FirstLimits(usize),
    Random { n: usize, seed: Option<u64> },
}

impl Default for IndexSpec {
    fn default() -> Self {
        IndexSpec::FirstLimits(4)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMode {
    #[default]
    Below,
    Nonstationary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundSpec {
    pub mode: BoundMode,
    /// Defaults to the working bound.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
    /// The bounded set of limits, nonstationary mode only.
    pub set: Vec<String>,
    /// Explicit points of the club below the working bound.
    pub club: Vec<String>,
    /// Random points drawn before closing.
    pub sample: usize,
    /// Extra points for the empirical check outside the closure.
    pub extra: usize,
    pub close: bool,
}

impl Default for BoundSpec {
    fn default() -> Self {
        BoundSpec {
            mode: BoundMode::Below,
            gamma: None,
            set: Vec::new(),
            club: Vec::new(),
            sample: 40,
            extra: 20,
            close: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub bound: String,
    pub seed: u64,
    pub ladders: LadderSpec,
    pub family: FamilySpec,
    pub indices: IndexSpec,
    /// An `HFamily` document; replaces the sum-threshold family when set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hfamily: Option<PathBuf>,
    pub cap: u32,
    pub guard: u64,
    /// Use the brute-force solver in `separate`.
    pub oracle: bool,
    /// Labeling for `adversary`; the constant `cap` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labeling: Option<Vec<u32>>,
    /// Size of the left set for `adversary`; half when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<usize>,
    pub bound_spec: BoundSpec,
    /// Prefix sizes for `growth`; `1..=|A|` when empty.
    pub schedule: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            bound: "w^(2)".into(),
            seed: 0,
            ladders: LadderSpec::default(),
            family: FamilySpec::default(),
            indices: IndexSpec::default(),
            hfamily: None,
            cap: 2,
            guard: DEFAULT_GUARD,
            oracle: false,
            labeling: None,
            split: None,
            bound_spec: BoundSpec::default(),
            schedule: Vec::new(),
            out: None,
            format: None,
        }
    }
}

pub fn parse_ordinal(s: &str) -> Result<Ordinal, CliError> {
    Ok(s.parse::<Ordinal>().map_err(fansquare_core::Error::from)?)
}

fn parse_all(xs: &[String]) -> Result<Vec<Ordinal>, CliError> {
    xs.iter().map(|s| parse_ordinal(s)).collect()
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.guard == 0 {
            return Err(CliError::Config("guard must be positive".into()));
        }
        self.working_bound()?;
        Ok(())
    }

    pub fn working_bound(&self) -> Result<Ordinal, CliError> {
        parse_ordinal(&self.bound)
    }

    pub fn ladder_system(&self) -> Result<LadderSystem, CliError> {
        Ok(match self.ladders.kind {
            LadderKind::Canonical => LadderSystem::canonical(),
            LadderKind::Seeded => LadderSystem::seeded(self.ladders.seed.unwrap_or(self.seed)),
            LadderKind::Explicit => {
                let mut table = BTreeMap::new();
                for (k, v) in &self.ladders.table {
                    table.insert(parse_ordinal(k)?, parse_all(v)?);
                }
                LadderSystem::explicit(table)?
            }
        })
    }

    pub fn func_family(&self) -> Result<FuncFamily, CliError> {
        let bound = self.working_bound()?;
        Ok(match self.family.kind {
            FamilyKind::Walk => FuncFamily::walk(bound, self.ladder_system()?),
            FamilyKind::Ladder => FuncFamily::ladder_disagreement(bound, self.ladder_system()?),
            FamilyKind::Explicit => {
                let mut table = BTreeMap::new();
                for (a, b, v) in &self.family.values {
                    table.insert((parse_ordinal(a)?, parse_ordinal(b)?), *v);
                }
                FuncFamily::explicit(bound, table)?
            }
        })
    }

    /// The index set `A`, sorted.
    pub fn index_set(&self) -> Result<Vec<Ordinal>, CliError> {
        let bound = self.working_bound()?;
        let mut out = match &self.indices {
            IndexSpec::Explicit(xs) => parse_all(xs)?,
            IndexSpec::FirstLimits(n) => {
                let xs: Vec<Ordinal> = (1..=*n as u64)
                    .map(|k| Ordinal::monomial(Ordinal::nat(1), k))
                    .take_while(|x| *x < bound)
                    .collect();
                if xs.len() < *n {
                    return Err(CliError::Config(format!(
                        "fewer than {n} limits of the form w*k below {bound}"
                    )));
                }
                xs
            }
            IndexSpec::Random { n, seed } => {
                if bound.is_zero() {
                    return Err(CliError::Config(
                        "random indices need a nonzero bound".into(),
                    ));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(self.seed));
                random::ordinals_below(&mut rng, &bound, *n)
                    .into_iter()
                    .collect()
            }
        };
        out.sort();
        out.dedup();
        Ok(out)
    }

    pub fn h_family(&self) -> Result<HFamily, CliError> {
        match &self.hfamily {
            Some(path) => load_h_family(path),
            None => Ok(HFamily::sum_threshold(
                self.func_family()?,
                self.index_set()?,
            )?),
        }
    }
}

/// Loads and validates an `HFamily` document; any defect is a validator
/// failure.
pub fn load_h_family(path: &Path) -> Result<HFamily, CliError> {
    let text = std::fs::read_to_string(path)?;
    let doc: HFamilyDoc =
        serde_json::from_str(&text).map_err(|e| CliError::Validator(e.to_string()))?;
    HFamily::from_doc(&doc).map_err(|e| CliError::Validator(e.to_string()))
}
