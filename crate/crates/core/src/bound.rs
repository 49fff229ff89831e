//! Weak bounds for the ladder-disagreement family.
//!
//! For every ordinal `gamma` there is `g_gamma` on `gamma` and, for every
//! `beta < gamma`, a natural `n_beta` with `g_gamma + n_beta > h_beta`
//! everywhere below `beta`. Successor steps take the pointwise max with the
//! new function; limit steps route every limit `beta` through the club
//! `C = {a_gamma(n) + 1}` (successors only, so it avoids every limit) and
//! use `n_beta = k + m + 1` with `k` least such that `a_beta(k)` clears the
//! club point below `beta`. A finite set avoiding a club of the working
//! bound is handled the same way with `delta+` / `delta-`.
//!
//! Bounds are lazy: values and witnesses are computed on request and
//! memoized, so they are exact at every ordinal, not only on the sample
//! they are certified on.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{disagreement, FamilyKind, FuncFamily};
use crate::ladder::LadderSystem;
use crate::ordinal::{Class, Ordinal};

/// Closed unbounded subset of a limit `bound`: finitely many explicit points
/// plus the tail `{a_bound(n) + 1 : n < w}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Club {
    bound: Ordinal,
    explicit: BTreeSet<Ordinal>,
    ladders: LadderSystem,
}

impl Club {
    pub fn new(bound: Ordinal, explicit: BTreeSet<Ordinal>, ladders: LadderSystem) -> Result<Self> {
        if !bound.is_limit() {
            return Err(Error::NotLimit(bound));
        }
        if let Some(x) = explicit.iter().find(|x| **x >= bound) {
            return Err(Error::NotBelow {
                lo: x.clone(),
                hi: bound,
            });
        }
        Ok(Club {
            bound,
            explicit,
            ladders,
        })
    }

    /// The successor-shifted ladder of `gamma`.
    pub fn shifted_ladder(gamma: &Ordinal, ladders: &LadderSystem) -> Result<Self> {
        Club::new(gamma.clone(), BTreeSet::new(), ladders.clone())
    }

    pub fn bound(&self) -> &Ordinal {
        &self.bound
    }

    pub fn explicit(&self) -> &BTreeSet<Ordinal> {
        &self.explicit
    }

    /// Tail threshold: `a + 1 >= beta` iff `a >= key(beta)`, and
    /// `a + 1 < beta` iff `a < key(beta)`.
    fn key(beta: &Ordinal) -> Ordinal {
        beta.predecessor().unwrap_or_else(|| beta.clone())
    }

    fn tail_min_from(&self, beta: &Ordinal) -> Result<Ordinal> {
        let n = self.ladders.least_at_least(&self.bound, &Self::key(beta))?;
        Ok(self.ladders.at(&self.bound, n).succ())
    }

    fn tail_max_below(&self, beta: &Ordinal) -> Result<Option<Ordinal>> {
        let n = self.ladders.least_at_least(&self.bound, &Self::key(beta))?;
        Ok((n > 0).then(|| self.ladders.at(&self.bound, n - 1).succ()))
    }

    pub fn contains(&self, x: &Ordinal) -> Result<bool> {
        if self.explicit.contains(x) {
            return Ok(true);
        }
        if x >= &self.bound || x.is_zero() {
            return Ok(false);
        }
        Ok(self.tail_min_from(x)? == *x)
    }

    /// `min(C \ beta)`, for `beta < bound`.
    pub fn min_from(&self, beta: &Ordinal) -> Result<Ordinal> {
        let tail = self.tail_min_from(beta)?;
        Ok(match self.explicit.range(beta..).next() {
            Some(e) if *e < tail => e.clone(),
            _ => tail,
        })
    }

    /// `min(C \ (beta + 1))`.
    pub fn min_above(&self, beta: &Ordinal) -> Result<Ordinal> {
        self.min_from(&beta.succ())
    }

    /// `max(C ∩ beta)`, which is also the supremum for `beta < bound`.
    pub fn max_below(&self, beta: &Ordinal) -> Result<Option<Ordinal>> {
        let tail = self.tail_max_below(beta)?;
        let exp = self.explicit.range(..beta).next_back().cloned();
        Ok(tail.max(exp))
    }
}

/// Maps a sample set must be closed under.
#[derive(Clone, Debug)]
pub enum ClosureRule {
    /// `a_beta(0..depth)` for every limit `beta`.
    LadderPrefix { ladders: LadderSystem, depth: u64 },
    /// `min(C ∩ (beta, bound))` and `max(C ∩ beta)` for every limit `beta`
    /// below the club's bound.
    Club(Club),
}

impl ClosureRule {
    fn images(&self, beta: &Ordinal) -> Result<Vec<Ordinal>> {
        if !beta.is_limit() {
            return Ok(Vec::new());
        }
        match self {
            ClosureRule::LadderPrefix { ladders, depth } => {
                Ok((0..*depth).map(|n| ladders.at(beta, n)).collect())
            }
            ClosureRule::Club(c) => {
                if beta >= c.bound() {
                    return Ok(Vec::new());
                }
                let mut out = vec![c.min_above(beta)?];
                out.extend(c.max_below(beta)?);
                Ok(out)
            }
        }
    }
}

/// Largest sample a closure may grow to.
pub const CLOSURE_LIMIT: usize = 200_000;

/// A finite set of ordinals together with the maps it is closed under.
#[derive(Clone, Debug)]
pub struct SampleClosure {
    points: BTreeSet<Ordinal>,
    rules: Vec<ClosureRule>,
}

impl SampleClosure {
    pub fn close(seed: impl IntoIterator<Item = Ordinal>, rules: Vec<ClosureRule>) -> Result<Self> {
        let mut points: BTreeSet<Ordinal> = seed.into_iter().collect();
        let mut frontier: Vec<Ordinal> = points.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            for rule in &rules {
                for y in rule.images(&x)? {
                    if points.insert(y.clone()) {
                        if points.len() > CLOSURE_LIMIT {
                            return Err(Error::GuardExceeded {
                                needed: points.len() as u128,
                                guard: CLOSURE_LIMIT as u128,
                            });
                        }
                        frontier.push(y);
                    }
                }
            }
        }
        Ok(SampleClosure { points, rules })
    }

    /// Wraps a set without closing it; see [`SampleClosure::missing`].
    pub fn unclosed(points: BTreeSet<Ordinal>, rules: Vec<ClosureRule>) -> Self {
        SampleClosure { points, rules }
    }

    pub fn points(&self) -> &BTreeSet<Ordinal> {
        &self.points
    }

    pub fn rules(&self) -> &[ClosureRule] {
        &self.rules
    }

    /// First image of `rule` that is not in the set.
    pub fn missing(&self, rule: &ClosureRule) -> Result<Option<Ordinal>> {
        for x in &self.points {
            for y in rule.images(x)? {
                if !self.points.contains(&y) {
                    return Ok(Some(y));
                }
            }
        }
        Ok(None)
    }

    pub fn is_closed(&self) -> Result<bool> {
        for r in &self.rules {
            if self.missing(r)?.is_some() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn reclose(&self) -> Result<Self> {
        Self::close(self.points.iter().cloned(), self.rules.clone())
    }
}

/// A lazily evaluated candidate bound `g` with per-index witnesses.
pub trait WeakBound: Send + Sync + fmt::Debug {
    /// `g` is defined below this ordinal.
    fn domain(&self) -> &Ordinal;
    fn value(&self, x: &Ordinal) -> Result<u32>;
    /// `n_beta`, or `None` where the construction makes no claim.
    fn witness(&self, beta: &Ordinal) -> Result<Option<u32>>;
}

#[derive(Clone, Debug)]
pub struct BoundWitness {
    pub bound: Arc<dyn WeakBound>,
    pub witness: BTreeMap<Ordinal, u32>,
    pub certified_on: BTreeSet<Ordinal>,
}

/// JSON form of a [`BoundWitness`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundWitnessDoc {
    pub witness: Vec<(Ordinal, u32)>,
    pub certified_on: Vec<Ordinal>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub g: Vec<(Ordinal, u32)>,
}

impl BoundWitness {
    fn certify(bound: Arc<dyn WeakBound>, sample: &SampleClosure) -> Result<Self> {
        let mut witness = BTreeMap::new();
        let mut certified_on = BTreeSet::new();
        for x in sample.points().range(..bound.domain().clone()) {
            certified_on.insert(x.clone());
            if let Some(n) = bound.witness(x)? {
                witness.insert(x.clone(), n);
            }
        }
        Ok(BoundWitness {
            bound,
            witness,
            certified_on,
        })
    }

    pub fn to_doc(&self) -> Result<BoundWitnessDoc> {
        Ok(BoundWitnessDoc {
            witness: self.witness.iter().map(|(k, v)| (k.clone(), *v)).collect(),
            certified_on: self.certified_on.iter().cloned().collect(),
            g: self
                .certified_on
                .iter()
                .map(|x| Ok((x.clone(), self.bound.value(x)?)))
                .collect::<Result<_>>()?,
        })
    }
}

/// Pairs `(alpha, beta)` of the sample, `alpha < beta` both below the bound's
/// domain, with `g(alpha) + n_beta <= h_beta(alpha)`.
pub fn verify_witness(
    w: &BoundWitness,
    family: &FuncFamily,
    sample: &BTreeSet<Ordinal>,
) -> Result<Vec<(Ordinal, Ordinal)>> {
    let dom = w.bound.domain();
    let mut out = Vec::new();
    for beta in sample.range(..dom.clone()) {
        // on the certified set only recorded witnesses are claims; elsewhere
        // the lazy witness is checked empirically
        let n = if w.certified_on.contains(beta) {
            match w.witness.get(beta) {
                Some(&n) => n,
                None => continue,
            }
        } else {
            match w.bound.witness(beta)? {
                Some(n) => n,
                None => continue,
            }
        };
        for alpha in sample.range(..beta.clone()) {
            let g = w.bound.value(alpha)? as u64;
            if g + n as u64 <= family.h(alpha, beta)? as u64 {
                out.push((alpha.clone(), beta.clone()));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Memoized `g_gamma` and witnesses for the disagreement family, for every
/// `gamma` at once.
#[derive(Debug)]
pub struct Recursion {
    ladders: LadderSystem,
    values: RwLock<HashMap<(Ordinal, Ordinal), u32>>,
    witnesses: RwLock<HashMap<(Ordinal, Ordinal), u32>>,
}

/// `gamma = lim + j` with `j` finite.
fn limit_part(gamma: &Ordinal) -> Ordinal {
    match gamma.terms().last() {
        Some(t) if t.exp.is_zero() => {
            Ordinal::from_terms(gamma.terms()[..gamma.terms().len() - 1].to_vec())
                .expect("prefix of a normal form is normal")
        }
        _ => gamma.clone(),
    }
}

impl Recursion {
    pub fn new(ladders: LadderSystem) -> Self {
        Recursion {
            ladders,
            values: RwLock::new(HashMap::new()),
            witnesses: RwLock::new(HashMap::new()),
        }
    }

    fn h(&self, alpha: &Ordinal, beta: &Ordinal) -> Result<u32> {
        disagreement(&self.ladders, alpha, beta)
    }

    /// `g_gamma(x)` for `x < gamma`.
    pub fn value(&self, gamma: &Ordinal, x: &Ordinal) -> Result<u32> {
        let key = (gamma.clone(), x.clone());
        if let Some(&v) = self.values.read().unwrap().get(&key) {
            return Ok(v);
        }
        let v = match gamma.classify() {
            Class::Zero => unreachable!("empty domain"),
            Class::Successor(_) => {
                // g_{l+j} = max(g_l, h_l) below l and 1 on [l, l+j); successors
                // carry h = 0 so the chain collapses
                let lim = limit_part(gamma);
                if *x >= lim {
                    1
                } else {
                    self.value(&lim, x)?.max(self.h(x, &lim)?)
                }
            }
            Class::LimitCofOmega => {
                if x.is_limit() {
                    let club = Club::shifted_ladder(gamma, &self.ladders)?;
                    self.value(&club.min_from(x)?, x)?
                } else {
                    1
                }
            }
        };
        self.values.write().unwrap().insert(key, v);
        Ok(v)
    }

    /// `n` with `g_gamma + n > h_beta` below `beta`, for `beta < gamma`.
    pub fn witness(&self, gamma: &Ordinal, beta: &Ordinal) -> Result<u32> {
        if !beta.is_limit() {
            return Ok(1);
        }
        let key = (gamma.clone(), beta.clone());
        if let Some(&v) = self.witnesses.read().unwrap().get(&key) {
            return Ok(v);
        }
        let v = match gamma.classify() {
            Class::Zero => unreachable!("empty domain"),
            Class::Successor(_) => {
                let lim = limit_part(gamma);
                if *beta == lim {
                    1
                } else {
                    self.witness(&lim, beta)?
                }
            }
            Class::LimitCofOmega => {
                let club = Club::shifted_ladder(gamma, &self.ladders)?;
                let up = club.min_from(beta)?;
                self.split_witness(beta, &up, club.max_below(beta)?)?
            }
        };
        self.witnesses.write().unwrap().insert(key, v);
        Ok(v)
    }

    /// `k + m + 1`: `k` least with `a_beta(k) > down`, `m` the witness of
    /// `g_up` for `beta`.
    fn split_witness(&self, beta: &Ordinal, up: &Ordinal, down: Option<Ordinal>) -> Result<u32> {
        let k = match down {
            None => 0,
            Some(d) => self.ladders.least_above(beta, &d)? as u32,
        };
        let m = self.witness(up, beta)?;
        Ok(k + m + 1)
    }
}

/// `g_gamma` for the disagreement family.
#[derive(Debug)]
pub struct BelowBound {
    gamma: Ordinal,
    rec: Recursion,
}

impl WeakBound for BelowBound {
    fn domain(&self) -> &Ordinal {
        &self.gamma
    }

    fn value(&self, x: &Ordinal) -> Result<u32> {
        self.check(x)?;
        self.rec.value(&self.gamma, x)
    }

    fn witness(&self, beta: &Ordinal) -> Result<Option<u32>> {
        self.check(beta)?;
        self.rec.witness(&self.gamma, beta).map(Some)
    }
}

impl BelowBound {
    fn check(&self, x: &Ordinal) -> Result<()> {
        if *x >= self.gamma {
            return Err(Error::NotBelow {
                lo: x.clone(),
                hi: self.gamma.clone(),
            });
        }
        Ok(())
    }
}

/// `g(beta) = g_{delta+(beta)}(beta)` on limits, 1 elsewhere.
#[derive(Debug)]
pub struct NonstationaryBound {
    club: Club,
    rec: Recursion,
}

impl WeakBound for NonstationaryBound {
    fn domain(&self) -> &Ordinal {
        self.club.bound()
    }

    fn value(&self, x: &Ordinal) -> Result<u32> {
        if !x.is_limit() {
            return Ok(1);
        }
        let up = self.club.min_above(x)?;
        self.rec.value(&up, x)
    }

    /// No claim for limits that lie in the club.
    fn witness(&self, beta: &Ordinal) -> Result<Option<u32>> {
        if !beta.is_limit() {
            return Ok(Some(1));
        }
        if self.club.contains(beta)? {
            return Ok(None);
        }
        let up = self.club.min_above(beta)?;
        let down = self.club.max_below(beta)?;
        self.rec.split_witness(beta, &up, down).map(Some)
    }
}

/// Pointwise max of a finite explicit family: the successor step iterated
/// over its finitely many nonzero members.
#[derive(Debug)]
pub struct ExplicitBound {
    gamma: Ordinal,
    family: FuncFamily,
    support: BTreeSet<Ordinal>,
}

impl WeakBound for ExplicitBound {
    fn domain(&self) -> &Ordinal {
        &self.gamma
    }

    fn value(&self, x: &Ordinal) -> Result<u32> {
        let mut v = 1;
        for b in self.support.range(..self.gamma.clone()) {
            if x < b {
                v = v.max(self.family.h(x, b)?);
            }
        }
        Ok(v)
    }

    fn witness(&self, _beta: &Ordinal) -> Result<Option<u32>> {
        Ok(Some(1))
    }
}

fn disagreement_ladders(family: &FuncFamily) -> Result<&LadderSystem> {
    match family.kind() {
        FamilyKind::LadderDisagreement(l) => Ok(l),
        _ => Err(Error::Unsupported(
            "bound construction needs a ladder-disagreement family".into(),
        )),
    }
}

/// Weak bound for `{h_beta : beta < gamma}`, certified on `sample`.
pub fn thm6_bound_below(
    family: &FuncFamily,
    gamma: &Ordinal,
    sample: &SampleClosure,
) -> Result<BoundWitness> {
    if let Some(support) = family.explicit_support() {
        let bound = ExplicitBound {
            gamma: gamma.clone(),
            family: family.clone(),
            support,
        };
        return BoundWitness::certify(Arc::new(bound), sample);
    }
    let ladders = disagreement_ladders(family)?;
    if !gamma.is_limit() {
        return Err(Error::NotLimit(gamma.clone()));
    }
    let rule = ClosureRule::Club(Club::shifted_ladder(gamma, ladders)?);
    if let Some(m) = sample.missing(&rule)? {
        return Err(Error::NotClosed(m));
    }
    let bound = BelowBound {
        gamma: gamma.clone(),
        rec: Recursion::new(ladders.clone()),
    };
    BoundWitness::certify(Arc::new(bound), sample)
}

/// Weak bound for `{h_beta : beta in set}` where `set` consists of limits
/// and misses the club.
pub fn thm6_bound_nonstationary(
    family: &FuncFamily,
    set: &BTreeSet<Ordinal>,
    club: &Club,
    sample: &SampleClosure,
) -> Result<BoundWitness> {
    let ladders = disagreement_ladders(family)?;
    for a in set {
        if !a.is_limit() {
            return Err(Error::NotLimit(a.clone()));
        }
        if club.contains(a)? {
            return Err(Error::ClubMeetsSet(a.clone()));
        }
        if a >= club.bound() {
            return Err(Error::NotBelow {
                lo: a.clone(),
                hi: club.bound().clone(),
            });
        }
    }
    let rule = ClosureRule::Club(club.clone());
    if let Some(m) = sample.missing(&rule)? {
        return Err(Error::NotClosed(m));
    }
    let bound = NonstationaryBound {
        club: club.clone(),
        rec: Recursion::new(ladders.clone()),
    };
    let mut w = BoundWitness::certify(Arc::new(bound), sample)?;
    // the claim covers the given set and the indices whose h vanishes
    w.witness.retain(|b, _| set.contains(b) || !b.is_limit());
    Ok(w)
}
