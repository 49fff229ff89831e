//! C-sequences and minimal walks.
//!
//! `C_{a+1} = {a}` and `C_l = {a_l(n) : n < w}` for limits. The walk from
//! `beta` down to `alpha` repeatedly replaces `beta` by `min(C_beta \ alpha)`;
//! `rho2(alpha, beta)` counts the steps.

use std::collections::HashMap;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ladder::LadderSystem;
use crate::ordinal::{Class, Ordinal};

const DEFAULT_MEMO_CAPACITY: usize = 1 << 18;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkTrace {
    pub steps: Vec<Ordinal>,
}

impl WalkTrace {
    pub fn rho2(&self) -> u32 {
        (self.steps.len() - 1) as u32
    }
}

#[derive(Debug)]
pub struct CSequence {
    ladders: LadderSystem,
    memo: RwLock<HashMap<(Ordinal, Ordinal), u32>>,
    capacity: usize,
}

impl Clone for CSequence {
    fn clone(&self) -> Self {
        CSequence::with_capacity(self.ladders.clone(), self.capacity)
    }
}

impl CSequence {
    pub fn new(ladders: LadderSystem) -> Self {
        Self::with_capacity(ladders, DEFAULT_MEMO_CAPACITY)
    }

    pub fn with_capacity(ladders: LadderSystem, capacity: usize) -> Self {
        CSequence {
            ladders,
            memo: RwLock::new(HashMap::new()),
            capacity,
        }
    }

    pub fn ladders(&self) -> &LadderSystem {
        &self.ladders
    }

    /// `min(C_beta \ alpha)` for `alpha < beta`.
    pub fn step(&self, alpha: &Ordinal, beta: &Ordinal) -> Result<Ordinal> {
        if alpha >= beta {
            return Err(Error::NotBelow {
                lo: alpha.clone(),
                hi: beta.clone(),
            });
        }
        match beta.classify() {
            Class::Successor(pred) => Ok(pred),
            Class::LimitCofOmega => {
                let n = self.ladders.least_at_least(beta, alpha)?;
                Ok(self.ladders.at(beta, n))
            }
            Class::Zero => unreachable!("nothing lies below zero"),
        }
    }

    pub fn walk(&self, alpha: &Ordinal, beta: &Ordinal) -> Result<WalkTrace> {
        if alpha > beta {
            return Err(Error::NotBelow {
                lo: alpha.clone(),
                hi: beta.clone(),
            });
        }
        let mut steps = vec![beta.clone()];
        let mut cur = beta.clone();
        while cur != *alpha {
            cur = self.step(alpha, &cur)?;
            steps.push(cur.clone());
        }
        Ok(WalkTrace { steps })
    }

    /// Number of steps of the minimal walk from `beta` to `alpha`.
    pub fn rho2(&self, alpha: &Ordinal, beta: &Ordinal) -> Result<u32> {
        let key = (alpha.clone(), beta.clone());
        if let Some(&v) = self.memo.read().unwrap().get(&key) {
            return Ok(v);
        }
        let trace = self.walk(alpha, beta)?;
        let k = trace.rho2();
        let mut memo = self.memo.write().unwrap();
        if memo.len() + trace.steps.len() > self.capacity {
            memo.clear();
        }
        // every suffix of a walk is itself the walk from that point
        for (i, b) in trace.steps.into_iter().enumerate() {
            memo.insert((alpha.clone(), b), k - i as u32);
        }
        Ok(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn canon() -> CSequence {
        CSequence::new(LadderSystem::canonical())
    }

    #[test]
    fn step_examples() {
        let c = canon();
        assert_eq!(c.step(&o("w"), &o("w*2")).unwrap(), o("w"));
        assert_eq!(c.step(&o("5"), &o("w")).unwrap(), o("5"));
        assert_eq!(c.step(&o("5"), &o("w+1")).unwrap(), o("w"));
        assert!(c.step(&o("w"), &o("w")).is_err());
    }

    #[test]
    fn walk_examples() {
        let c = canon();
        let t = c.walk(&o("w"), &o("w")).unwrap();
        assert_eq!(t.steps, vec![o("w")]);
        assert_eq!(t.rho2(), 0);

        let t = c.walk(&o("w"), &o("w*2")).unwrap();
        assert_eq!(t.steps, vec![o("w*2"), o("w")]);
        assert_eq!(t.rho2(), 1);

        let t = c.walk(&o("5"), &o("w+1")).unwrap();
        assert_eq!(t.steps, vec![o("w+1"), o("w"), o("5")]);
        assert_eq!(c.rho2(&o("5"), &o("w+1")).unwrap(), 2);

        assert!(c.walk(&o("w+1"), &o("w")).is_err());
    }

    #[test]
    fn memo_agrees_with_fresh_walks() {
        let c = CSequence::with_capacity(LadderSystem::canonical(), 8);
        let pairs = [("3", "w^(2)+2"), ("w+3", "w^(3)"), ("w*2", "w^(2)*2+w")];
        for _ in 0..3 {
            for (a, b) in pairs {
                let k = c.rho2(&o(a), &o(b)).unwrap();
                assert_eq!(k, c.walk(&o(a), &o(b)).unwrap().rho2());
            }
        }
    }
}
