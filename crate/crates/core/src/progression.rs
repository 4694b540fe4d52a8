//! Finite unions of progressions `a N + b` with `N = {1, 2, 3, ...}`, plus an
//! optional point at infinity.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const STEPS: [i64; 3] = [2, 4, 8];

/// `{step * n + offset : n >= 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Progression {
    pub step: i64,
    pub offset: i64,
}

impl Progression {
    pub fn new(step: i64, offset: i64) -> Result<Self> {
        if !STEPS.contains(&step) {
            return Err(Error::InvalidParameters(format!("progression step {step} not in {{2,4,8}}")));
        }
        if step + offset < 2 {
            return Err(Error::InvalidParameters(format!(
                "progression {step}N{offset:+} has least element below 2"
            )));
        }
        Ok(Progression { step, offset })
    }

    /// Least element.
    pub fn start(&self) -> i64 {
        self.step + self.offset
    }

    pub fn contains(&self, x: i64) -> bool {
        x >= self.start() && (x - self.start()) % self.step == 0
    }

    /// Containment of the underlying sets.
    pub fn is_subset_of(&self, other: &Progression) -> bool {
        self.step % other.step == 0
            && self.start() >= other.start()
            && (self.start() - other.start()) % other.step == 0
    }

    /// The `n`-th element, `n >= 1`.
    pub fn element(&self, n: i64) -> i64 {
        self.step * n + self.offset
    }
}

impl fmt::Display for Progression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}ℕ", self.step)?;
        match self.offset {
            0 => Ok(()),
            o if o > 0 => write!(f, "+{o}"),
            o => write!(f, "−{}", -o),
        }
    }
}

/// A finite union of progressions, kept in a canonical form: every maximal
/// progression with step in {2,4,8} inside the set that is not contained in
/// another one, sorted by step then offset. Two sets are equal iff their
/// canonical forms are.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ResidueClassSet {
    progressions: Vec<Progression>,
    infinity: bool,
}

impl ResidueClassSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_progressions(ps: impl IntoIterator<Item = Progression>, infinity: bool) -> Self {
        let raw: Vec<Progression> = ps.into_iter().collect();
        ResidueClassSet { progressions: canonicalize(&raw), infinity }
    }

    pub fn single(p: Progression) -> Self {
        ResidueClassSet { progressions: vec![p], infinity: false }
    }

    pub fn infinity_only() -> Self {
        ResidueClassSet { progressions: Vec::new(), infinity: true }
    }

    pub fn progressions(&self) -> &[Progression] {
        &self.progressions
    }

    pub fn includes_infinity(&self) -> bool {
        self.infinity
    }

    pub fn with_infinity(mut self, infinity: bool) -> Self {
        self.infinity = infinity;
        self
    }

    pub fn is_empty(&self) -> bool {
        self.progressions.is_empty() && !self.infinity
    }

    pub fn contains(&self, x: i64) -> bool {
        self.progressions.iter().any(|p| p.contains(x))
    }

    pub fn contains_big(&self, x: &BigInt) -> bool {
        if x.is_negative() {
            return false;
        }
        match x.to_i64() {
            Some(v) => self.contains(v),
            // Beyond every start: membership is decided by residues mod 8.
            None => self.progressions.iter().any(|p| {
                let r = (x - BigInt::from(p.start())).mod_floor(&BigInt::from(p.step));
                r == BigInt::from(0)
            }),
        }
    }

    pub fn union(&self, other: &ResidueClassSet) -> ResidueClassSet {
        let all = self.progressions.iter().chain(&other.progressions).copied();
        ResidueClassSet::from_progressions(all, self.infinity || other.infinity)
    }

    /// Elements up to `bound`, ascending.
    pub fn elements_up_to(&self, bound: i64) -> Vec<i64> {
        (2..=bound).filter(|&x| self.contains(x)).collect()
    }

    /// Plain-ASCII rendering, e.g. `4N-2 u {inf}`.
    pub fn to_ascii(&self) -> String {
        self.to_string().replace('ℕ', "N").replace('−', "-").replace(" ∪ ", " u ").replace('∞', "inf")
    }
}

impl fmt::Display for ResidueClassSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.progressions.iter().map(|p| p.to_string()).collect();
        if self.infinity {
            parts.push("{∞}".to_string());
        }
        if parts.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "{}", parts.join(" ∪ "))
    }
}

fn canonicalize(raw: &[Progression]) -> Vec<Progression> {
    if raw.is_empty() {
        return Vec::new();
    }
    let member = |x: i64| raw.iter().any(|p| p.contains(x));
    // Past the largest start the set is periodic with period 8, so a tail
    // is contained once one full period past that point is.
    let top = raw.iter().map(Progression::start).max().unwrap_or(2);
    let mut maximal = Vec::new();
    for step in STEPS {
        for start in 2..2 + step {
            let first = (start..=top + 8)
                .step_by(step as usize)
                .find(|&s| (s..=s.max(top) + 8).step_by(step as usize).all(member));
            if let Some(s) = first {
                maximal.push(Progression { step, offset: s - step });
            }
        }
    }
    let mut kept: Vec<Progression> = maximal
        .iter()
        .filter(|p| !maximal.iter().any(|q| q != *p && p.is_subset_of(q)))
        .copied()
        .collect();
    kept.sort();
    kept.dedup();
    kept
}

/// Serialized form: `{"progressions":[{"step":4,"offset":-2}],"infinity":true}`.
#[derive(Serialize, Deserialize)]
struct SetRepr {
    progressions: Vec<Progression>,
    infinity: bool,
}

impl Serialize for ResidueClassSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SetRepr { progressions: self.progressions.clone(), infinity: self.infinity }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ResidueClassSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SetRepr::deserialize(d)?;
        for p in &r.progressions {
            Progression::new(p.step, p.offset).map_err(serde::de::Error::custom)?;
        }
        Ok(ResidueClassSet::from_progressions(r.progressions, r.infinity))
    }
}
