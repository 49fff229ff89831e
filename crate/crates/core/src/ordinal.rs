//! Countable ordinals below epsilon_0 in hereditary Cantor normal form.
//!
//! An [`Ordinal`] is a list of `(exponent, coefficient)` terms with strictly
//! decreasing exponents and positive coefficients; exponents are ordinals
//! themselves. The representation is canonical, so structural equality is
//! ordinal equality and the derived lexicographic order on the term list is
//! the ordinal order.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::OrdinalError;

/// One `w^(exp) * coeff` summand.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Term {
    pub exp: Ordinal,
    pub coeff: u64,
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

/// Shape of an ordinal as far as limits are concerned.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Class {
    Zero,
    Successor(Ordinal),
    /// Every limit below epsilon_0 has cofinality omega.
    LimitCofOmega,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Ordinal {
                terms: vec![Term {
                    exp: Self::zero(),
                    coeff: n,
                }],
            }
        }
    }

    pub fn omega() -> Self {
        Self::omega_pow(Self::nat(1))
    }

    /// `w^exp`.
    pub fn omega_pow(exp: Ordinal) -> Self {
        Self::monomial(exp, 1)
    }

    /// `w^exp * coeff`; zero when `coeff == 0`.
    pub fn monomial(exp: Ordinal, coeff: u64) -> Self {
        if coeff == 0 {
            return Self::zero();
        }
        Ordinal {
            terms: vec![Term { exp, coeff }],
        }
    }

    /// Builds an ordinal from terms, checking the Cantor normal form invariants.
    pub fn from_terms(terms: Vec<Term>) -> Result<Self, OrdinalError> {
        for t in &terms {
            if t.coeff == 0 {
                return Err(OrdinalError::NonCanonical("zero coefficient".into()));
            }
        }
        for w in terms.windows(2) {
            if w[0].exp <= w[1].exp {
                return Err(OrdinalError::NonCanonical(
                    "exponents must strictly decrease".into(),
                ));
            }
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as a natural number, if it is finite.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exp.is_zero() => Some(t.coeff),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_nat().is_some()
    }

    pub fn is_limit(&self) -> bool {
        matches!(self.terms.last(), Some(t) if !t.exp.is_zero())
    }

    pub fn compare(&self, other: &Ordinal) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            match a.exp.compare(&b.exp).then(a.coeff.cmp(&b.coeff)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }

    pub fn classify(&self) -> Class {
        match self.terms.last() {
            None => Class::Zero,
            Some(t) if t.exp.is_zero() => {
                let mut terms = self.terms.clone();
                let last = terms.last_mut().unwrap();
                if last.coeff == 1 {
                    terms.pop();
                } else {
                    last.coeff -= 1;
                }
                Class::Successor(Ordinal { terms })
            }
            Some(_) => Class::LimitCofOmega,
        }
    }

    pub fn predecessor(&self) -> Option<Ordinal> {
        match self.classify() {
            Class::Successor(p) => Some(p),
            _ => None,
        }
    }

    pub fn succ(&self) -> Ordinal {
        self.add_nat(1)
    }

    /// `self + n`.
    pub fn add_nat(&self, n: u64) -> Ordinal {
        if n == 0 {
            return self.clone();
        }
        let mut terms = self.terms.clone();
        match terms.last_mut() {
            Some(t) if t.exp.is_zero() => t.coeff += n,
            _ => terms.push(Term {
                exp: Ordinal::zero(),
                coeff: n,
            }),
        }
        Ordinal { terms }
    }

    /// Ordinal sum `self + other`: the terms of `self` below the leading
    /// exponent of `other` are absorbed.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some(head) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .take_while(|t| t.exp >= head.exp)
            .cloned()
            .collect();
        let mut rest = other.terms.iter();
        if let Some(last) = terms.last_mut() {
            if last.exp == head.exp {
                last.coeff += head.coeff;
                rest.next();
            }
        }
        terms.extend(rest.cloned());
        Ordinal { terms }
    }

    /// Splits a nonzero ordinal as `rest + w^exp`, returning `(rest, exp)`.
    pub fn split_last(&self) -> Option<(Ordinal, Ordinal)> {
        let last = self.terms.last()?;
        let mut terms = self.terms.clone();
        let exp = last.exp.clone();
        let l = terms.last_mut().unwrap();
        if l.coeff == 1 {
            terms.pop();
        } else {
            l.coeff -= 1;
        }
        Some((Ordinal { terms }, exp))
    }

    /// Nesting depth of exponents; naturals have height 0 or 1.
    pub fn height(&self) -> usize {
        self.terms.first().map(|t| 1 + t.exp.height()).unwrap_or(0)
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::nat(n)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            if t.exp.is_zero() {
                write!(f, "{}", t.coeff)?;
                continue;
            }
            if t.exp.as_nat() == Some(1) {
                f.write_str("w")?;
            } else {
                write!(f, "w^({})", t.exp)?;
            }
            if t.coeff != 1 {
                write!(f, "*{}", t.coeff)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> OrdinalError {
        OrdinalError::Parse {
            input: self.src.to_string(),
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<u64, OrdinalError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected natural number"));
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| self.err("natural number out of range"))
    }

    fn coeff(&mut self) -> Result<u64, OrdinalError> {
        if self.eat(b'*') {
            self.nat()
        } else {
            Ok(1)
        }
    }

    fn term(&mut self) -> Result<Ordinal, OrdinalError> {
        if self.eat(b'w') {
            if self.eat(b'^') {
                if !self.eat(b'(') {
                    return Err(self.err("expected '(' after 'w^'"));
                }
                let exp = self.ord()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                let c = self.coeff()?;
                Ok(Ordinal::monomial(exp, c))
            } else {
                let c = self.coeff()?;
                Ok(Ordinal::monomial(Ordinal::nat(1), c))
            }
        } else {
            Ok(Ordinal::nat(self.nat()?))
        }
    }

    fn ord(&mut self) -> Result<Ordinal, OrdinalError> {
        let mut acc = self.term()?;
        while self.eat(b'+') {
            let t = self.term()?;
            acc = acc.add(&t);
        }
        Ok(acc)
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s, pos: 0 };
        let o = p.ord()?;
        if p.pos != s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(o)
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
