//! Families `{h_beta : beta < bound}` of integer-valued functions, where
//! `h_beta` is defined on the ordinals below `beta`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ladder::LadderSystem;
use crate::ordinal::Ordinal;
use crate::walk::CSequence;

#[derive(Clone, Debug)]
pub enum FamilyKind {
    /// `h_beta(alpha) = rho2(alpha, beta)`.
    Walk(Arc<CSequence>),
    /// `h_beta(alpha)` is the first index where the ladders of `alpha` and
    /// `beta` differ when both are limits, and 0 otherwise.
    LadderDisagreement(LadderSystem),
    /// Finite table; pairs not listed evaluate to 0.
    Explicit(Arc<BTreeMap<(Ordinal, Ordinal), u32>>),
}

#[derive(Clone, Debug)]
pub struct FuncFamily {
    bound: Ordinal,
    kind: FamilyKind,
}

impl FuncFamily {
    pub fn walk(bound: Ordinal, ladders: LadderSystem) -> Self {
        FuncFamily {
            bound,
            kind: FamilyKind::Walk(Arc::new(CSequence::new(ladders))),
        }
    }

    pub fn ladder_disagreement(bound: Ordinal, ladders: LadderSystem) -> Self {
        FuncFamily {
            bound,
            kind: FamilyKind::LadderDisagreement(ladders),
        }
    }

    pub fn explicit(bound: Ordinal, table: BTreeMap<(Ordinal, Ordinal), u32>) -> Result<Self> {
        for (a, b) in table.keys() {
            if a >= b || *b >= bound {
                return Err(Error::OutOfRange {
                    alpha: a.clone(),
                    beta: b.clone(),
                    bound,
                });
            }
        }
        Ok(FuncFamily {
            bound,
            kind: FamilyKind::Explicit(Arc::new(table)),
        })
    }

    pub fn bound(&self) -> &Ordinal {
        &self.bound
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn ladders(&self) -> Option<&LadderSystem> {
        match &self.kind {
            FamilyKind::Walk(c) => Some(c.ladders()),
            FamilyKind::LadderDisagreement(l) => Some(l),
            FamilyKind::Explicit(_) => None,
        }
    }

    /// `h_beta(alpha)` for `alpha < beta < bound`.
    pub fn eval(&self, alpha: &Ordinal, beta: &Ordinal) -> Result<u32> {
        if alpha >= beta || *beta >= self.bound {
            return Err(Error::OutOfRange {
                alpha: alpha.clone(),
                beta: beta.clone(),
                bound: self.bound.clone(),
            });
        }
        self.h(alpha, beta)
    }

    /// Evaluation without the range check against `bound`; `alpha < beta`
    /// is still assumed.
    pub(crate) fn h(&self, alpha: &Ordinal, beta: &Ordinal) -> Result<u32> {
        match &self.kind {
            FamilyKind::Walk(c) => c.rho2(alpha, beta),
            FamilyKind::LadderDisagreement(l) => disagreement(l, alpha, beta),
            FamilyKind::Explicit(t) => {
                Ok(t.get(&(alpha.clone(), beta.clone())).copied().unwrap_or(0))
            }
        }
    }

    /// Indices `beta` whose `h_beta` may be nonzero, for explicit families.
    pub(crate) fn explicit_support(&self) -> Option<BTreeSet<Ordinal>> {
        match &self.kind {
            FamilyKind::Explicit(t) => Some(t.keys().map(|(_, b)| b.clone()).collect()),
            _ => None,
        }
    }
}

/// `min {n : a_alpha(n) != a_beta(n)}` for limits, else 0.
pub fn disagreement(ladders: &LadderSystem, alpha: &Ordinal, beta: &Ordinal) -> Result<u32> {
    if !alpha.is_limit() || !beta.is_limit() || alpha == beta {
        return Ok(0);
    }
    let (lo, hi) = if alpha < beta {
        (alpha, beta)
    } else {
        (beta, alpha)
    };
    // the ladder of `hi` reaches `lo` at `cut`, where the ladder of `lo` cannot be
    let cut = ladders.least_at_least(hi, lo)?;
    let n = (0..cut)
        .find(|&n| ladders.at(lo, n) != ladders.at(hi, n))
        .unwrap_or(cut);
    Ok(n as u32)
}

/// `max over xi in D below alpha of (h_alpha(xi) - h_gamma(xi)) + 1`, never
/// below 1.
pub fn empirical_witness(
    family: &FuncFamily,
    alpha: &Ordinal,
    gamma: &Ordinal,
    sample: &BTreeSet<Ordinal>,
) -> Result<u32> {
    if alpha >= gamma {
        return Err(Error::NotBelow {
            lo: alpha.clone(),
            hi: gamma.clone(),
        });
    }
    let mut best: i64 = 0;
    for xi in sample.range(..alpha) {
        let d = family.h(xi, alpha)? as i64 - family.h(xi, gamma)? as i64;
        best = best.max(d);
    }
    Ok((best + 1) as u32)
}

/// The labeling `f(alpha) = h_gamma(alpha) + n_{alpha gamma}` below `gamma`
/// and 0 elsewhere, over the sample. Every pair `alpha < beta <= gamma` of
/// the sample then has `f(alpha) + f(beta) > h_beta(alpha)`.
pub fn build_thm3_labeling(
    family: &FuncFamily,
    gamma: &Ordinal,
    sample: &BTreeSet<Ordinal>,
) -> Result<BTreeMap<Ordinal, u32>> {
    if !sample.contains(gamma) {
        return Err(Error::NotClosed(gamma.clone()));
    }
    sample
        .iter()
        .map(|alpha| {
            let v = if alpha < gamma {
                family.h(alpha, gamma)? + empirical_witness(family, alpha, gamma, sample)?
            } else {
                0
            };
            Ok((alpha.clone(), v))
        })
        .collect()
}
