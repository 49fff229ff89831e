//! Finite closed-downward subsets of `w x w`, stored by their maximal
//! antichain, and families `H = {H_ab : a < b}` of them.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::FuncFamily;
use crate::ordinal::Ordinal;

/// A finite c.d.w. set. The staircase is sorted by strictly increasing first
/// coordinate and strictly decreasing second coordinate.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct CdwSet {
    stairs: Vec<(u32, u32)>,
}

impl CdwSet {
    pub fn empty() -> Self {
        CdwSet { stairs: Vec::new() }
    }

    /// Validates a staircase given as maximal elements in any order.
    pub fn from_staircase(mut stairs: Vec<(u32, u32)>) -> Result<Self> {
        stairs.sort_unstable();
        for w in stairs.windows(2) {
            if w[0].0 == w[1].0 || w[0].1 <= w[1].1 {
                return Err(Error::InvalidStaircase(format!(
                    "{:?} and {:?} are comparable",
                    w[0], w[1]
                )));
            }
        }
        Ok(CdwSet { stairs })
    }

    /// `{(n, m) : n + m <= h}`.
    pub fn sum_threshold(h: u32) -> Self {
        CdwSet {
            stairs: (0..=h).map(|t| (t, h - t)).collect(),
        }
    }

    pub fn staircase(&self) -> &[(u32, u32)] {
        &self.stairs
    }

    pub fn is_empty(&self) -> bool {
        self.stairs.is_empty()
    }

    pub fn contains(&self, n: u32, m: u32) -> bool {
        self.column_height(n).is_some_and(|h| m <= h)
    }

    /// Largest `m` with `(n, m)` in the set.
    pub fn column_height(&self, n: u32) -> Option<u32> {
        let i = self.stairs.partition_point(|&(x, _)| x < n);
        self.stairs.get(i).map(|&(_, m)| m)
    }

    /// Largest `n` with `(n, m)` in the set.
    pub fn row_length(&self, m: u32) -> Option<u32> {
        self.stairs
            .iter()
            .rev()
            .find(|&&(_, y)| y >= m)
            .map(|&(x, _)| x)
    }

    /// Number of points in the set.
    pub fn len(&self) -> u64 {
        let mut total = 0u64;
        let mut prev = 0u32;
        for &(n, m) in &self.stairs {
            // columns prev..=n all have height m
            total += (n - prev + 1) as u64 * (m as u64 + 1);
            prev = n + 1;
        }
        total
    }

    pub fn points(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let mut prev = 0u32;
        self.stairs.iter().flat_map(move |&(n, m)| {
            let lo = prev;
            prev = n + 1;
            (lo..=n).flat_map(move |x| (0..=m).map(move |y| (x, y)))
        })
    }

    /// Largest coordinate appearing in the set.
    pub fn max_coord(&self) -> Option<u32> {
        let n = self.stairs.last()?.0;
        let m = self.stairs.first()?.1;
        Some(n.max(m))
    }

    pub fn is_subset(&self, other: &CdwSet) -> bool {
        self.stairs.iter().all(|&(n, m)| other.contains(n, m))
    }
}

impl fmt::Debug for CdwSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.stairs).finish()
    }
}

impl<'de> Deserialize<'de> for CdwSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let stairs = Vec::<(u32, u32)>::deserialize(d)?;
        CdwSet::from_staircase(stairs).map_err(serde::de::Error::custom)
    }
}

/// Smallest c.d.w. superset of `pairs`.
pub fn downward_close(pairs: impl IntoIterator<Item = (u32, u32)>) -> CdwSet {
    let mut pts: Vec<(u32, u32)> = pairs.into_iter().collect();
    pts.sort_unstable_by(|a, b| b.cmp(a));
    let mut stairs = Vec::new();
    let mut best: Option<u32> = None;
    for (n, m) in pts {
        if best.is_none_or(|b| m > b) {
            stairs.push((n, m));
            best = Some(m);
        }
    }
    stairs.reverse();
    CdwSet { stairs }
}

/// `H_ab = {(n, m) : n + m <= h_b(a)}`.
pub fn sum_threshold(family: &FuncFamily, alpha: &Ordinal, beta: &Ordinal) -> Result<CdwSet> {
    Ok(CdwSet::sum_threshold(family.eval(alpha, beta)?))
}

/// Label of an index: a natural or an ordinal literal.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IndexLabel {
    Int(u64),
    Ord(Ordinal),
}

impl PartialOrd for IndexLabel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IndexLabel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.as_ordinal().cmp(&other.as_ordinal())
    }
}

impl IndexLabel {
    pub fn as_ordinal(&self) -> Ordinal {
        match self {
            IndexLabel::Int(n) => Ordinal::nat(*n),
            IndexLabel::Ord(o) => o.clone(),
        }
    }
}

impl fmt::Display for IndexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexLabel::Int(n) => write!(f, "{n}"),
            IndexLabel::Ord(o) => write!(f, "{o}"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Provider {
    SumThreshold(FuncFamily),
    Explicit(BTreeMap<(usize, usize), CdwSet>),
    /// Extraction result, with the pruning thresholds that produced it.
    FromSpace {
        sets: BTreeMap<(usize, usize), CdwSet>,
        h: Vec<u32>,
        g: Vec<u32>,
    },
}

/// `{H_ij : i < j}` over a finite ordered index universe; sets are addressed
/// by position.
#[derive(Clone, Debug)]
pub struct HFamily {
    indices: Vec<IndexLabel>,
    provider: Provider,
}

impl HFamily {
    fn check_indices(indices: &[IndexLabel]) -> Result<()> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Format("indices must be strictly increasing".into()));
        }
        Ok(())
    }

    pub fn sum_threshold(family: FuncFamily, indices: Vec<Ordinal>) -> Result<Self> {
        let indices: Vec<_> = indices.into_iter().map(IndexLabel::Ord).collect();
        Self::check_indices(&indices)?;
        if let Some(top) = indices.last() {
            if top.as_ordinal() >= *family.bound() {
                return Err(Error::NotBelow {
                    lo: top.as_ordinal(),
                    hi: family.bound().clone(),
                });
            }
        }
        Ok(HFamily {
            indices,
            provider: Provider::SumThreshold(family),
        })
    }

    pub fn explicit(
        indices: Vec<IndexLabel>,
        sets: BTreeMap<(usize, usize), CdwSet>,
    ) -> Result<Self> {
        Self::check_indices(&indices)?;
        Self::check_keys(indices.len(), &sets)?;
        Ok(HFamily {
            indices,
            provider: Provider::Explicit(sets),
        })
    }

    /// Explicit family over `0..n`.
    pub fn abstract_explicit(n: usize, sets: BTreeMap<(usize, usize), CdwSet>) -> Result<Self> {
        Self::explicit((0..n as u64).map(IndexLabel::Int).collect(), sets)
    }

    fn check_keys(n: usize, sets: &BTreeMap<(usize, usize), CdwSet>) -> Result<()> {
        if let Some((i, j)) = sets.keys().find(|(i, j)| i >= j || *j >= n) {
            return Err(Error::Format(format!(
                "pair ({i}, {j}) is not an index pair"
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[IndexLabel] {
        &self.indices
    }

    pub fn provider(&self) -> &Provider {
        &self.provider
    }

    pub fn kind_name(&self) -> &'static str {
        match self.provider {
            Provider::SumThreshold(_) => "sum_threshold",
            Provider::Explicit(_) => "explicit",
            Provider::FromSpace { .. } => "from_space",
        }
    }

    pub fn position(&self, label: &IndexLabel) -> Option<usize> {
        self.indices.binary_search(label).ok()
    }

    /// `H_ij` for positions `i < j`.
    pub fn get(&self, i: usize, j: usize) -> Result<CdwSet> {
        if i >= j || j >= self.indices.len() {
            return Err(Error::Format(format!("({i}, {j}) is not an index pair")));
        }
        match &self.provider {
            Provider::SumThreshold(f) => sum_threshold(
                f,
                &self.indices[i].as_ordinal(),
                &self.indices[j].as_ordinal(),
            ),
            Provider::Explicit(sets) | Provider::FromSpace { sets, .. } => {
                Ok(sets.get(&(i, j)).cloned().unwrap_or_default())
            }
        }
    }

    /// All sets, keyed by position pair; empty sets are omitted.
    pub fn entries(&self) -> Result<BTreeMap<(usize, usize), CdwSet>> {
        let mut out = BTreeMap::new();
        for j in 0..self.len() {
            for i in 0..j {
                let s = self.get(i, j)?;
                if !s.is_empty() {
                    out.insert((i, j), s);
                }
            }
        }
        Ok(out)
    }

    /// Same sets, materialized as an explicit family.
    pub fn to_explicit(&self) -> Result<HFamily> {
        HFamily::explicit(self.indices.clone(), self.entries()?)
    }

    /// Dense table of the sets among `subset` (positions, increasing).
    pub fn table(&self, subset: &[usize]) -> Result<PairTable> {
        if subset.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Format("subset must be strictly increasing".into()));
        }
        let k = subset.len();
        let mut sets = vec![CdwSet::empty(); k * k];
        for b in 0..k {
            for a in 0..b {
                sets[a * k + b] = self.get(subset[a], subset[b])?;
            }
        }
        Ok(PairTable { k, sets })
    }

    pub fn to_doc(&self) -> Result<HFamilyDoc> {
        Ok(HFamilyDoc {
            indices: self.indices.clone(),
            kind: self.kind_name().to_string(),
            entries: self
                .entries()?
                .into_iter()
                .map(|((i, j), s)| (i, j, s))
                .collect(),
        })
    }

    /// Loads a document as an explicit family; staircases are validated.
    pub fn from_doc(doc: &HFamilyDoc) -> Result<Self> {
        let mut sets = BTreeMap::new();
        for (i, j, s) in &doc.entries {
            if sets.insert((*i, *j), s.clone()).is_some() {
                return Err(Error::Format(format!("duplicate entry ({i}, {j})")));
            }
        }
        HFamily::explicit(doc.indices.clone(), sets)
    }
}

/// Pairwise sets for a fixed subset, indexed locally `0..k`.
#[derive(Clone, Debug)]
pub struct PairTable {
    k: usize,
    sets: Vec<CdwSet>,
}

impl PairTable {
    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }

    /// Set for local positions `a < b`.
    pub fn get(&self, a: usize, b: usize) -> &CdwSet {
        debug_assert!(a < b);
        &self.sets[a * self.k + b]
    }

    pub fn max_coord(&self) -> Option<u32> {
        self.sets.iter().filter_map(CdwSet::max_coord).max()
    }
}

/// JSON form of an [`HFamily`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HFamilyDoc {
    pub indices: Vec<IndexLabel>,
    pub kind: String,
    pub entries: Vec<(usize, usize, CdwSet)>,
}

/// Finite shadow of a space around a set of index points: for `i < j` and
/// `n, m < depth`, whether `U_n(i)` meets `U_m(j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceData {
    pub indices: Vec<IndexLabel>,
    pub depth: u32,
    /// Row-major `depth x depth` grids keyed by position pair; absent pairs
    /// never intersect.
    pub table: BTreeMap<(usize, usize), Vec<bool>>,
}

impl SpaceData {
    pub fn intersects(&self, i: usize, n: u32, j: usize, m: u32) -> bool {
        let d = self.depth as usize;
        self.table
            .get(&(i, j))
            .is_some_and(|g| g[n as usize * d + m as usize])
    }

    /// Neighbourhood bases decrease, so shrinking either level keeps an
    /// intersection.
    pub fn check_monotone(&self) -> Result<()> {
        let d = self.depth as usize;
        for (&(i, j), grid) in &self.table {
            if i >= j || j >= self.indices.len() || grid.len() != d * d {
                return Err(Error::Format(format!("bad table entry ({i}, {j})")));
            }
            for n in 0..d {
                for m in 0..d {
                    if !grid[n * d + m] {
                        continue;
                    }
                    let down_n = n == 0 || grid[(n - 1) * d + m];
                    let down_m = m == 0 || grid[n * d + m - 1];
                    if !(down_n && down_m) {
                        return Err(Error::NonMonotone {
                            alpha: i,
                            n: n as u32,
                            beta: j,
                            m: m as u32,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Recovers `H` from intersection data: `S` is the set of intersecting
/// cells, `h`/`g` are the per-index thresholds past which every
/// section of `S` is finite, `T` keeps the cells above the thresholds and
/// each `H_ij` is the downward closure of the `(i, j)` slice of `T`.
pub fn extract_from_space(sd: &SpaceData) -> Result<HFamily> {
    sd.check_monotone()?;
    let k = sd.indices.len();
    let d = sd.depth;
    // Sections of a finite table are finite, so the least thresholds are 0.
    let h = vec![0u32; k];
    let g = vec![0u32; k];
    let mut sets = BTreeMap::new();
    for &(i, j) in sd.table.keys() {
        let slice = (0..d)
            .flat_map(|n| (0..d).map(move |m| (n, m)))
            .filter(|&(n, m)| n >= h[i] && m >= g[j] && sd.intersects(i, n, j, m));
        let set = downward_close(slice);
        if !set.is_empty() {
            sets.insert((i, j), set);
        }
    }
    HFamily::check_indices(&sd.indices)?;
    Ok(HFamily {
        indices: sd.indices.clone(),
        provider: Provider::FromSpace { sets, h, g },
    })
}
