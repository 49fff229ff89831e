//! Seeded generators for ordinals, c.d.w. sets and families.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use crate::cdw::{downward_close, CdwSet, HFamily};
use crate::ordinal::{Ordinal, Term};

/// Largest coefficient the generators emit.
pub const MAX_COEFF: u64 = 6;

/// Uniform-ish ordinal strictly below `bound` with coefficients at most
/// [`MAX_COEFF`]; `bound` must be nonzero.
pub fn ordinal_below<R: Rng + ?Sized>(rng: &mut R, bound: &Ordinal) -> Ordinal {
    assert!(!bound.is_zero(), "nothing lies below zero");
    if let Some(n) = bound.as_nat() {
        return Ordinal::nat(rng.gen_range(0..n));
    }
    let lead = &bound.terms()[0];
    loop {
        let count = rng.gen_range(1..=3);
        let x = terms_up_to(rng, &lead.exp, count);
        if x < *bound {
            return x;
        }
    }
}

/// At most `count` terms with exponents `<= top`, strictly decreasing.
fn terms_up_to<R: Rng + ?Sized>(rng: &mut R, top: &Ordinal, count: usize) -> Ordinal {
    let mut terms: Vec<Term> = Vec::new();
    let mut cap = top.succ();
    for _ in 0..count {
        let exp = ordinal_below(rng, &cap);
        terms.push(Term {
            exp: exp.clone(),
            coeff: rng.gen_range(1..=MAX_COEFF),
        });
        if exp.is_zero() {
            break;
        }
        cap = exp;
    }
    Ordinal::from_terms(terms).expect("exponents strictly decrease")
}

/// A limit below `bound`, which must exceed `w`.
pub fn limit_below<R: Rng + ?Sized>(rng: &mut R, bound: &Ordinal) -> Ordinal {
    assert!(*bound > Ordinal::omega(), "no limits below {bound}");
    loop {
        let x = ordinal_below(rng, bound);
        let terms: Vec<Term> = x
            .terms()
            .iter()
            .filter(|t| !t.exp.is_zero())
            .cloned()
            .collect();
        let lim = Ordinal::from_terms(terms).expect("sub-list of a normal form");
        if !lim.is_zero() {
            return lim;
        }
    }
}

/// `count` distinct ordinals below `bound` (fewer if the bound is small).
pub fn ordinals_below<R: Rng + ?Sized>(
    rng: &mut R,
    bound: &Ordinal,
    count: usize,
) -> BTreeSet<Ordinal> {
    let mut out = BTreeSet::new();
    let mut tries = 0;
    while out.len() < count && tries < count * 50 {
        out.insert(ordinal_below(rng, bound));
        tries += 1;
    }
    out
}

/// Random c.d.w. set with at most `max_stairs` generators, coordinates
/// below `coord_bound`.
pub fn cdw_set<R: Rng + ?Sized>(rng: &mut R, coord_bound: u32, max_stairs: usize) -> CdwSet {
    let k = rng.gen_range(0..=max_stairs);
    downward_close((0..k).map(|_| (rng.gen_range(0..coord_bound), rng.gen_range(0..coord_bound))))
}

/// Random explicit family over `0..n`; each pair is empty with probability
/// one half.
pub fn h_family<R: Rng + ?Sized>(rng: &mut R, n: usize, coord_bound: u32) -> HFamily {
    let mut sets = BTreeMap::new();
    for j in 0..n {
        for i in 0..j {
            if rng.gen_bool(0.5) {
                let s = cdw_set(rng, coord_bound, 3);
                if !s.is_empty() {
                    sets.insert((i, j), s);
                }
            }
        }
    }
    HFamily::abstract_explicit(n, sets).expect("keys are index pairs")
}
