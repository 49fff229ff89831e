//! The space `X = I ∪ A` built from a c.d.w. family, and the fan-square view
//! of the same data.
//!
//! Points of `I` are pairs `((a, n), (b, m))` with `a < b` and
//! `(n, m) ∈ H_ab`; they are isolated. Index point `c` has the decreasing
//! base `U_k(c) = {c} ∪ {((a, n), (b, m)) ∈ I : (a = c, n >= k) or (b = c, m >= k)}`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cdw::{HFamily, IndexLabel};
use crate::error::{Error, Result};
use crate::separation::{solve_separation, Labeling};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IsoPoint {
    pub a: usize,
    pub n: u32,
    pub b: usize,
    pub m: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Index(usize),
    Iso(IsoPoint),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombSpace {
    indices: Vec<IndexLabel>,
    isolated: Vec<IsoPoint>,
}

impl IsoPoint {
    fn in_base(&self, c: usize, k: u32) -> bool {
        (self.a == c && self.n >= k) || (self.b == c && self.m >= k)
    }
}

/// Builds the space over the positions `subset` of `h`; the space's own
/// index positions are `0..subset.len()` in the same order.
pub fn build_space(h: &HFamily, subset: &[usize]) -> Result<CombSpace> {
    let t = h.table(subset)?;
    let mut isolated = Vec::new();
    for b in 0..subset.len() {
        for a in 0..b {
            isolated.extend(t.get(a, b).points().map(|(n, m)| IsoPoint { a, n, b, m }));
        }
    }
    isolated.sort_unstable();
    Ok(CombSpace {
        indices: subset.iter().map(|&i| h.indices()[i].clone()).collect(),
        isolated,
    })
}

impl CombSpace {
    pub fn indices(&self) -> &[IndexLabel] {
        &self.indices
    }

    pub fn isolated(&self) -> &[IsoPoint] {
        &self.isolated
    }

    /// `U_k(c)`, index point first.
    pub fn neighborhood(&self, c: usize, k: u32) -> Vec<Point> {
        std::iter::once(Point::Index(c))
            .chain(
                self.isolated
                    .iter()
                    .filter(|p| p.in_base(c, k))
                    .map(|p| Point::Iso(*p)),
            )
            .collect()
    }

    /// Largest coordinate of an isolated point involving `c`.
    fn max_coord_at(&self, c: usize) -> Option<u32> {
        self.isolated
            .iter()
            .filter(|p| p.a == c || p.b == c)
            .map(|p| p.n.max(p.m))
            .max()
    }

    /// For every other index point, the least depth whose base element
    /// misses `U_k(c)`; `None` if some index point has no such depth up to
    /// one past the largest coordinate at `c`.
    pub fn clopen_cover(&self, c: usize, k: u32) -> Option<Vec<(usize, u32)>> {
        let limit = self.max_coord_at(c).map_or(0, |x| x + 1);
        let inside: BTreeSet<Point> = self.neighborhood(c, k).into_iter().collect();
        let mut cover = Vec::new();
        for other in (0..self.indices.len()).filter(|&o| o != c) {
            let depth = (0..=limit).find(|&j| {
                self.isolated
                    .iter()
                    .filter(|p| p.in_base(other, j))
                    .all(|p| !inside.contains(&Point::Iso(*p)))
            })?;
            cover.push((other, depth));
        }
        Some(cover)
    }

    /// `U_k(c)` is a base element, hence open; it is closed when every
    /// outside point has a base element missing it. Isolated points are
    /// their own base, so only the other index points need a depth.
    pub fn clopen_check(&self, c: usize, k: u32) -> bool {
        c < self.indices.len() && self.clopen_cover(c, k).is_some()
    }

    /// Whether `{U_f(c)(c) : c ∈ subset}` is pairwise disjoint, by counting
    /// how many chosen neighbourhoods hold each isolated point.
    pub fn separation_check(&self, subset: &[usize], f: &Labeling) -> Result<bool> {
        let mut level = vec![None; self.indices.len()];
        for &c in subset {
            let v = f
                .get(c)
                .ok_or_else(|| Error::Format(format!("labeling is undefined at index {c}")))?;
            *level
                .get_mut(c)
                .ok_or_else(|| Error::Format(format!("no index {c}")))? = Some(v);
        }
        for p in &self.isolated {
            let hits = [p.a, p.b]
                .iter()
                .filter(|&&c| level[c].is_some_and(|k| p.in_base(c, k)))
                .count();
            if hits > 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_doc(&self) -> SpaceDoc {
        SpaceDoc {
            indices: self.indices.clone(),
            isolated: self
                .isolated
                .iter()
                .map(|p| {
                    (
                        (self.indices[p.a].clone(), p.n),
                        (self.indices[p.b].clone(), p.m),
                    )
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &SpaceDoc) -> Result<Self> {
        if doc.indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Format("indices must be strictly increasing".into()));
        }
        let pos = |l: &IndexLabel| {
            doc.indices
                .binary_search(l)
                .map_err(|_| Error::Format(format!("unknown index {l}")))
        };
        let mut isolated = Vec::with_capacity(doc.isolated.len());
        for ((a, n), (b, m)) in &doc.isolated {
            let (a, b) = (pos(a)?, pos(b)?);
            if a >= b {
                return Err(Error::Format(
                    "isolated point with unordered indices".into(),
                ));
            }
            isolated.push(IsoPoint { a, n: *n, b, m: *m });
        }
        isolated.sort_unstable();
        Ok(CombSpace {
            indices: doc.indices.clone(),
            isolated,
        })
    }

    /// DOT graph joining each index point to the isolated points of its
    /// level-`k` base element.
    pub fn to_dot(&self, k: u32) -> String {
        let mut out = String::from("graph space {\n");
        for (i, l) in self.indices.iter().enumerate() {
            let _ = writeln!(out, "  idx_{i} [label=\"{l}\"];");
        }
        for p in &self.isolated {
            let _ = writeln!(out, "  {} [shape=point];", iso_name(p));
        }
        for c in 0..self.indices.len() {
            for p in self.isolated.iter().filter(|p| p.in_base(c, k)) {
                let _ = writeln!(out, "  idx_{c} -- {};", iso_name(p));
            }
        }
        out.push_str("}\n");
        out
    }
}

fn iso_name(p: &IsoPoint) -> String {
    format!("iso_{}_{}_{}_{}", p.a, p.n, p.b, p.m)
}

/// JSON form of a [`CombSpace`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceDoc {
    pub indices: Vec<IndexLabel>,
    pub isolated: Vec<((IndexLabel, u32), (IndexLabel, u32))>,
}

pub fn space_separation_check(x: &CombSpace, subset: &[usize], f: &Labeling) -> Result<bool> {
    x.separation_check(subset, f)
}

pub fn clopen_check(x: &CombSpace, c: usize, k: u32) -> bool {
    x.clopen_check(c, k)
}

/// Serializes as `json` or `dot` (the latter at base level `k`).
pub fn export_space(x: &CombSpace, format: &str, k: u32) -> Result<String> {
    match format {
        "json" => Ok(serde_json::to_string(&x.to_doc())?),
        "dot" => Ok(x.to_dot(k)),
        other => Err(Error::Unsupported(format!("space format {other:?}"))),
    }
}

/// A point of the fan: the apex or `(index, level)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FanPoint {
    Star,
    At(usize, u32),
}

/// `B_f = {*} ∪ {(a, n) : n >= f(a)}`, coded by `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanOpen {
    pub code: Labeling,
}

impl FanOpen {
    pub fn contains(&self, p: FanPoint) -> bool {
        match p {
            FanPoint::Star => true,
            FanPoint::At(a, n) => self.code.get(a).is_some_and(|f| n >= f),
        }
    }

    /// Membership in `V_g = B_g × B_g`.
    pub fn square_contains(&self, p: FanPoint, q: FanPoint) -> bool {
        self.contains(p) && self.contains(q)
    }
}

/// `S_B`: the points of the fan square recorded by `H` over `subset`.
pub fn fan_points(h: &HFamily, subset: &[usize]) -> Result<Vec<(FanPoint, FanPoint)>> {
    let x = build_space(h, subset)?;
    Ok(x.isolated
        .iter()
        .map(|p| {
            (
                FanPoint::At(subset[p.a], p.n),
                FanPoint::At(subset[p.b], p.m),
            )
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum FanOutcome {
    /// Every `V_g` with labels at most the cap meets `S_B`.
    AdversaryWins,
    /// `V_g ∩ S_B = ∅`.
    Escape { g: Labeling },
}

pub fn fan_closure_shadow(h: &HFamily, subset: &[usize], cap: u32) -> Result<FanOutcome> {
    let r = solve_separation(h, subset, cap)?;
    Ok(match r.status.witness() {
        Some(g) => FanOutcome::Escape { g: g.clone() },
        None => FanOutcome::AdversaryWins,
    })
}
