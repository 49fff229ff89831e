//! Separations of a finite index set: labelings `f` with
//! `(f(a), f(b))` outside `H_ab` for every pair `a < b`.
//!
//! Every `H_ab` is closed downward, so the separations form an up-set: raising
//! any label of a separation keeps it a separation. The solvers lean on that
//! in three places. A capped instance is feasible iff the constant labeling
//! at the cap is. Completing a partial labeling with the cap is the best
//! possible completion. Only the thresholds `c + 1` for staircase
//! coordinates `c` matter when minimizing.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::cdw::{HFamily, PairTable};
use crate::error::{Error, Result};

/// Largest labeling space the brute-force oracle will enumerate.
pub const ORACLE_GUARD: u128 = 100_000_000;

/// Largest index set handed to the exact min-sum search.
pub const MIN_SUM_EXACT_LIMIT: usize = 12;

/// Largest index set for the exact maximum separable subset search.
pub const SUBSET_SEARCH_LIMIT: usize = 20;

/// Finite map from index positions to naturals.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct Labeling {
    values: BTreeMap<usize, u32>,
}

// Keys go through strings so a labeling nested in a tagged enum, where serde
// buffers the map, still reads back.
impl<'de> Deserialize<'de> for Labeling {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, u32>::deserialize(d)?;
        let values = raw
            .into_iter()
            .map(|(k, v)| {
                k.parse::<usize>()
                    .map(|k| (k, v))
                    .map_err(|_| serde::de::Error::custom(format!("bad index key {k:?}")))
            })
            .collect::<std::result::Result<_, _>>()?;
        Ok(Labeling { values })
    }
}

impl Labeling {
    pub fn new(values: BTreeMap<usize, u32>) -> Self {
        Labeling { values }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        Labeling {
            values: pairs.into_iter().collect(),
        }
    }

    pub fn constant(indices: &[usize], v: u32) -> Self {
        Self::from_pairs(indices.iter().map(|&i| (i, v)))
    }

    fn from_local(indices: &[usize], local: &[u32]) -> Self {
        Self::from_pairs(indices.iter().copied().zip(local.iter().copied()))
    }

    pub fn get(&self, i: usize) -> Option<u32> {
        self.values.get(&i).copied()
    }

    pub fn values(&self) -> &BTreeMap<usize, u32> {
        &self.values
    }

    pub fn sum(&self) -> u64 {
        self.values.values().map(|&v| v as u64).sum()
    }

    fn local(&self, indices: &[usize]) -> Result<Vec<u32>> {
        indices
            .iter()
            .map(|&i| {
                self.get(i)
                    .ok_or_else(|| Error::Format(format!("labeling is undefined at index {i}")))
            })
            .collect()
    }
}

/// A pair `a < b` with `(f(a), f(b))` in `H_ab`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub alpha: usize,
    pub beta: usize,
    pub values: (u32, u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    Separated { witness: Labeling },
    Blocked { cap: u32 },
    AdversaryPair(Violation),
}

impl Status {
    pub fn is_separated(&self) -> bool {
        matches!(self, Status::Separated { .. })
    }

    pub fn witness(&self) -> Option<&Labeling> {
        match self {
            Status::Separated { witness } => Some(witness),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationResult {
    pub status: Status,
    pub min_cap: Option<u32>,
    pub min_sum: Option<u64>,
}

impl SeparationResult {
    fn status(status: Status) -> Self {
        SeparationResult {
            status,
            min_cap: None,
            min_sum: None,
        }
    }
}

fn first_violation(t: &PairTable, f: &[u32]) -> Option<(usize, usize)> {
    for a in 0..f.len() {
        for b in a + 1..f.len() {
            if t.get(a, b).contains(f[a], f[b]) {
                return Some((a, b));
            }
        }
    }
    None
}

/// The least violating pair, or `None` when `f` separates `indices`.
pub fn is_separation(h: &HFamily, indices: &[usize], f: &Labeling) -> Result<Option<Violation>> {
    let t = h.table(indices)?;
    let local = f.local(indices)?;
    Ok(first_violation(&t, &local).map(|(a, b)| Violation {
        alpha: indices[a],
        beta: indices[b],
        values: (local[a], local[b]),
    }))
}

/// Brute force over all labelings with values `<= cap` in lexicographic
/// order; the first separation found is the least one.
pub fn exists_separation_capped(
    h: &HFamily,
    indices: &[usize],
    cap: u32,
    guard: u128,
) -> Result<SeparationResult> {
    let k = indices.len();
    let needed = (cap as u128 + 1).checked_pow(k as u32).unwrap_or(u128::MAX);
    if needed > guard {
        return Err(Error::GuardExceeded { needed, guard });
    }
    let t = h.table(indices)?;
    let mut f = vec![0u32; k];
    loop {
        if first_violation(&t, &f).is_none() {
            return Ok(SeparationResult::status(Status::Separated {
                witness: Labeling::from_local(indices, &f),
            }));
        }
        // odometer step, last position fastest
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(SeparationResult::status(Status::Blocked { cap }));
            }
            pos -= 1;
            if f[pos] < cap {
                f[pos] += 1;
                f[pos + 1..].iter_mut().for_each(|x| *x = 0);
                break;
            }
        }
    }
}

/// Least value for position `i` that clears every pair with the fixed
/// prefix `f[..i]`.
fn prefix_lower_bound(t: &PairTable, f: &[u32], i: usize) -> u32 {
    (0..i)
        .filter_map(|j| t.get(j, i).column_height(f[j]))
        .map(|m| m + 1)
        .max()
        .unwrap_or(0)
}

/// Lexicographically least separation with values `<= cap`.
fn least_capped(t: &PairTable, cap: u32) -> Option<Vec<u32>> {
    let k = t.len();
    let mut f = vec![cap; k];
    if first_violation(t, &f).is_some() {
        return None;
    }
    for i in 0..k {
        // f[..i] fixed, f[i+1..] = cap; positions after i only need checking
        // against i
        let start = prefix_lower_bound(t, &f, i);
        let v = (start..=cap)
            .find(|&v| (i + 1..k).all(|l| !t.get(i, l).contains(v, cap)))
            .expect("cap itself is feasible");
        f[i] = v;
    }
    Some(f)
}

/// Pruned search; agrees with [`exists_separation_capped`] on status and
/// returns the same least witness.
pub fn solve_separation(h: &HFamily, indices: &[usize], cap: u32) -> Result<SeparationResult> {
    let t = h.table(indices)?;
    Ok(SeparationResult::status(match least_capped(&t, cap) {
        Some(f) => Status::Separated {
            witness: Labeling::from_local(indices, &f),
        },
        None => Status::Blocked { cap },
    }))
}

fn min_cap_table(t: &PairTable) -> u32 {
    let top = t.max_coord().map_or(0, |c| c + 1);
    (0..=top)
        .find(|&c| first_violation(t, &vec![c; t.len()]).is_none())
        .expect("a cap above every coordinate separates")
}

/// Least cap admitting a separation.
pub fn min_cap(h: &HFamily, indices: &[usize]) -> Result<u32> {
    Ok(min_cap_table(&h.table(indices)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinSum {
    pub labeling: Labeling,
    pub sum: u64,
    /// `false` when the greedy upper bound was used.
    pub exact: bool,
}

/// Values at which the status of some pair incident to `i` can change.
fn breakpoints(t: &PairTable, i: usize) -> Vec<u32> {
    let mut b = BTreeSet::from([0u32]);
    for j in 0..i {
        b.extend(t.get(j, i).staircase().iter().map(|&(_, m)| m + 1));
    }
    for l in i + 1..t.len() {
        b.extend(t.get(i, l).staircase().iter().map(|&(n, _)| n + 1));
    }
    b.into_iter().collect()
}

struct MinSumSearch<'a> {
    t: &'a PairTable,
    cands: Vec<Vec<u32>>,
    f: Vec<u32>,
    best: Option<(u64, Vec<u32>)>,
}

impl MinSumSearch<'_> {
    /// Each unassigned position must clear its pairs with the assigned
    /// prefix `f[..i]`.
    fn remaining_bound(&self, i: usize) -> u64 {
        (i..self.t.len())
            .map(|l| {
                (0..i)
                    .filter_map(|j| self.t.get(j, l).column_height(self.f[j]))
                    .map(|m| m as u64 + 1)
                    .max()
                    .unwrap_or(0)
            })
            .sum()
    }

    fn go(&mut self, i: usize, sum: u64) {
        let k = self.t.len();
        if i == k {
            if self.best.as_ref().is_none_or(|(b, _)| sum < *b) {
                self.best = Some((sum, self.f.clone()));
            }
            return;
        }
        if let Some((b, _)) = &self.best {
            if sum + self.remaining_bound(i) >= *b {
                return;
            }
        }
        let lb = prefix_lower_bound(self.t, &self.f, i);
        for ci in 0..self.cands[i].len() {
            let v = self.cands[i][ci];
            if v < lb {
                continue;
            }
            if let Some((b, _)) = &self.best {
                if sum + v as u64 >= *b {
                    break;
                }
            }
            self.f[i] = v;
            self.go(i + 1, sum + v as u64);
        }
    }
}

fn greedy_min_sum(t: &PairTable, cands: &[Vec<u32>]) -> Vec<u32> {
    let k = t.len();
    let mut f: Vec<u32> = cands.iter().map(|c| *c.last().unwrap()).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..k {
            let ok = |v: u32, f: &[u32]| {
                (0..i).all(|j| !t.get(j, i).contains(f[j], v))
                    && (i + 1..k).all(|l| !t.get(i, l).contains(v, f[l]))
            };
            if let Some(&v) = cands[i].iter().find(|&&v| v < f[i] && ok(v, &f)) {
                f[i] = v;
                changed = true;
            }
        }
    }
    f
}

/// Separation minimizing the label sum; exact by branch and bound up to
/// [`MIN_SUM_EXACT_LIMIT`] indices, greedy beyond.
pub fn min_sum_labeling(h: &HFamily, indices: &[usize]) -> Result<MinSum> {
    let t = h.table(indices)?;
    let cands: Vec<Vec<u32>> = (0..t.len()).map(|i| breakpoints(&t, i)).collect();
    let (f, exact) = if t.len() <= MIN_SUM_EXACT_LIMIT {
        let mut s = MinSumSearch {
            t: &t,
            cands,
            f: vec![0; t.len()],
            best: None,
        };
        s.go(0, 0);
        (s.best.expect("the top breakpoints separate").1, true)
    } else {
        (greedy_min_sum(&t, &cands), false)
    };
    debug_assert!(first_violation(&t, &f).is_none());
    let labeling = Labeling::from_local(indices, &f);
    Ok(MinSum {
        sum: labeling.sum(),
        labeling,
        exact,
    })
}

/// Some `a` in `left` and `b` in `right` with `a < b` and
/// `(f(a), f(b))` in `H_ab`; the least such pair.
pub fn adversary_two_sets(
    h: &HFamily,
    left: &[usize],
    right: &[usize],
    f: &Labeling,
) -> Result<Option<Violation>> {
    let lookup = |i: usize| {
        f.get(i)
            .ok_or_else(|| Error::Format(format!("labeling is undefined at index {i}")))
    };
    let mut left: Vec<usize> = left.to_vec();
    let mut right: Vec<usize> = right.to_vec();
    left.sort_unstable();
    right.sort_unstable();
    for &a in &left {
        for &b in right.iter().filter(|&&b| b > a) {
            let (x, y) = (lookup(a)?, lookup(b)?);
            if h.get(a, b)?.contains(x, y) {
                return Ok(Some(Violation {
                    alpha: a,
                    beta: b,
                    values: (x, y),
                }));
            }
        }
    }
    Ok(None)
}

/// A maximum subset of `indices` that is separated at `cap`.
///
/// A subset is separable at `cap` iff the constant labeling `cap` separates
/// it, so this is a maximum independent set of the conflict graph
/// `{(a, b) : (cap, cap) in H_ab}`.
pub fn largest_separable_subset(h: &HFamily, indices: &[usize], cap: u32) -> Result<Vec<usize>> {
    let k = indices.len();
    if k > SUBSET_SEARCH_LIMIT {
        return Err(Error::GuardExceeded {
            needed: k as u128,
            guard: SUBSET_SEARCH_LIMIT as u128,
        });
    }
    let t = h.table(indices)?;
    let mut adj = vec![0u32; k];
    for a in 0..k {
        for b in a + 1..k {
            if t.get(a, b).contains(cap, cap) {
                adj[a] |= 1 << b;
                adj[b] |= 1 << a;
            }
        }
    }
    let mut best = 0u32;
    max_independent(&adj, if k == 0 { 0 } else { (1u32 << k) - 1 }, 0, &mut best);
    Ok((0..k)
        .filter(|&i| best & (1 << i) != 0)
        .map(|i| indices[i])
        .collect())
}

fn max_independent(adj: &[u32], cand: u32, chosen: u32, best: &mut u32) {
    if cand == 0 {
        if chosen.count_ones() > best.count_ones() {
            *best = chosen;
        }
        return;
    }
    if chosen.count_ones() + cand.count_ones() <= best.count_ones() {
        return;
    }
    let v = cand.trailing_zeros() as usize;
    let bit = 1u32 << v;
    max_independent(adj, cand & !bit & !adj[v], chosen | bit, best);
    if adj[v] & cand != 0 {
        max_independent(adj, cand & !bit, chosen, best);
    }
}
