//! Ladder systems: for every limit `alpha` a strictly increasing sequence
//! `a_alpha(0) < a_alpha(1) < ...` cofinal in `alpha`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ordinal::{Class, Ordinal};

/// Largest index a cofinality search will probe before giving up.
const SEARCH_LIMIT: u64 = 1 << 40;

/// Longest shared prefix a seeded ladder may carry.
pub const SEEDED_PREFIX_MAX: u64 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LadderKind {
    Canonical,
    Seeded(u64),
    /// Finite prefixes for selected limits; every listed ladder and every
    /// unlisted limit continues along the canonical ladder.
    Explicit(Arc<BTreeMap<Ordinal, Vec<Ordinal>>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderSystem {
    kind: LadderKind,
}

impl LadderSystem {
    pub fn canonical() -> Self {
        LadderSystem {
            kind: LadderKind::Canonical,
        }
    }

    pub fn seeded(seed: u64) -> Self {
        LadderSystem {
            kind: LadderKind::Seeded(seed),
        }
    }

    pub fn explicit(table: BTreeMap<Ordinal, Vec<Ordinal>>) -> Result<Self> {
        for (alpha, prefix) in &table {
            if !alpha.is_limit() {
                return Err(Error::NotLimit(alpha.clone()));
            }
            if prefix.iter().any(|x| x >= alpha) {
                return Err(Error::Ladder(format!(
                    "prefix of {alpha} leaves the ordinal"
                )));
            }
            if prefix.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Ladder(format!(
                    "prefix of {alpha} is not increasing"
                )));
            }
        }
        Ok(LadderSystem {
            kind: LadderKind::Explicit(Arc::new(table)),
        })
    }

    pub fn kind(&self) -> &LadderKind {
        &self.kind
    }

    /// `a_alpha(n)`.
    pub fn ladder(&self, alpha: &Ordinal, n: u64) -> Result<Ordinal> {
        if !alpha.is_limit() {
            return Err(Error::NotLimit(alpha.clone()));
        }
        Ok(self.at(alpha, n))
    }

    /// `a_alpha(n)` for a limit `alpha`; panics otherwise.
    pub(crate) fn at(&self, alpha: &Ordinal, n: u64) -> Ordinal {
        match &self.kind {
            LadderKind::Canonical => canonical(alpha, n),
            LadderKind::Seeded(seed) => {
                let prefix = seeded_prefix(*seed, alpha);
                prefixed(alpha, &prefix, n)
            }
            LadderKind::Explicit(table) => match table.get(alpha) {
                Some(prefix) => prefixed(alpha, prefix, n),
                None => canonical(alpha, n),
            },
        }
    }

    /// Least `n` with `a_alpha(n) >= beta`, for `beta < alpha`.
    pub fn least_at_least(&self, alpha: &Ordinal, beta: &Ordinal) -> Result<u64> {
        self.search(alpha, |x| x >= beta)
    }

    /// Least `n` with `a_alpha(n) > beta`, for `beta < alpha`.
    pub fn least_above(&self, alpha: &Ordinal, beta: &Ordinal) -> Result<u64> {
        self.search(alpha, |x| x > beta)
    }

    fn search(&self, alpha: &Ordinal, pred: impl Fn(&Ordinal) -> bool) -> Result<u64> {
        if !alpha.is_limit() {
            return Err(Error::NotLimit(alpha.clone()));
        }
        gallop(|n| pred(&self.at(alpha, n))).ok_or_else(|| Error::LadderSearch {
            alpha: alpha.clone(),
        })
    }
}

/// Least `n` with `pred(n)` for a monotone predicate, by doubling then
/// bisection.
fn gallop(pred: impl Fn(u64) -> bool) -> Option<u64> {
    if pred(0) {
        return Some(0);
    }
    let mut lo = 0; // pred(lo) false
    let mut hi = 1;
    while !pred(hi) {
        lo = hi;
        hi *= 2;
        if hi > SEARCH_LIMIT {
            return None;
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// Fundamental sequences: `(d+w^(e+1))[n] = d+w^e*n` and
/// `(d+w^l)[n] = d+w^(l[n])` for limit `l`.
fn canonical(alpha: &Ordinal, n: u64) -> Ordinal {
    let (rest, exp) = alpha.split_last().expect("zero has no ladder");
    match exp.classify() {
        Class::Successor(e) => rest.add(&Ordinal::monomial(e, n)),
        Class::LimitCofOmega => rest.add(&Ordinal::omega_pow(canonical(&exp, n))),
        Class::Zero => panic!("{alpha} is not a limit"),
    }
}

/// Ladder that starts with `prefix` and then follows the canonical ladder
/// from its first entry above the prefix.
fn prefixed(alpha: &Ordinal, prefix: &[Ordinal], n: u64) -> Ordinal {
    let n_usize = usize::try_from(n).unwrap_or(usize::MAX);
    if n_usize < prefix.len() {
        return prefix[n_usize].clone();
    }
    let offset = match prefix.last() {
        None => 0,
        Some(top) => gallop(|j| canonical(alpha, j) > *top).expect("canonical ladder is cofinal"),
    };
    canonical(alpha, offset + (n - prefix.len() as u64))
}

pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable 64-bit fingerprint of an ordinal (FNV-1a over its literal).
pub(crate) fn fingerprint(alpha: &Ordinal) -> u64 {
    alpha
        .to_string()
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
            (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
        })
}

/// The shared pool `p_0 < p_1 < ...` of small naturals drawn from the seed,
/// truncated to a per-ordinal length in `0..=SEEDED_PREFIX_MAX`.
fn seeded_prefix(seed: u64, alpha: &Ordinal) -> Vec<Ordinal> {
    let len = splitmix64(seed ^ fingerprint(alpha)) % (SEEDED_PREFIX_MAX + 1);
    let mut out = Vec::with_capacity(len as usize);
    let mut p = 0u64;
    for i in 0..len {
        let r = splitmix64(seed.wrapping_add(i.wrapping_mul(0x5851_F42D_4C95_7F2D))) % 3;
        p = if i == 0 { r } else { p + 1 + r };
        out.push(Ordinal::nat(p));
    }
    out
}
