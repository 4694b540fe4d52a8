//! Brute-force Reidemeister counts that do not use any closed form: twisted
//! classes on finite quotients, and on a box of the 2-dimensional quotient
//! `Gamma / <e1>`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::acgroup::MAX_QUOTIENT_ORDER;
use crate::automorphisms::build_d3f2;
use crate::error::{Error, Result};
use crate::finite::{twisted_classes_finite, FiniteGroup, UnionFind};
use crate::linalg::IntMatrix;
use crate::reidemeister::{r_number_d3f2, ReidemeisterValue};

pub const DEFAULT_MAX_ORDER: u64 = 20_000;
pub const DEFAULT_BOX: i64 = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoxedCount {
    pub box_size: i64,
    pub count: usize,
    /// Count at `box_size` equals the count at `2 * box_size`.
    pub stabilized: bool,
}

/// Twisted classes of `phi'` on `Z^2 x| Z_2` (holonomy `-1`), where
/// `phi'(t^v) = t^{Mv}` and `phi'(alpha) = t^d alpha`, counted on a box.
///
/// Elements `(v, eps)` with `|v|_inf <= B` are joined along `g ~ h g phi'(h)^-1`
/// for conjugators `h = (u, eta)` with `|u|_inf <= B/4`, when both ends lie in
/// the box. The count is the number of resulting components that meet
/// `[-B/2, B/2]^2`.
pub fn boxed_twisted_classes(m: &IntMatrix, d: &[BigInt], b: i64) -> Result<BoxedCount> {
    let (mm, dd) = small_quotient_data(m, d)?;
    if mm[0][0] + mm[1][1] == 0 {
        return Err(Error::NotApplicable("tr M = 0: infinitely many classes".into()));
    }
    if b < 4 {
        return Err(Error::InvalidParameters(format!("box size {b} is below 4")));
    }
    let count = box_count(mm, dd, b);
    Ok(BoxedCount { box_size: b, count, stabilized: count == box_count(mm, dd, 2 * b) })
}

type Mat2 = [[i64; 2]; 2];

fn small_quotient_data(m: &IntMatrix, d: &[BigInt]) -> Result<(Mat2, [i64; 2])> {
    if m.rows() != 2 || m.cols() != 2 || d.len() != 2 {
        return Err(Error::Dimension("need a 2x2 matrix and a 2-vector".into()));
    }
    let small = |x: &BigInt| x.to_i64().filter(|v| v.abs() <= 1 << 20);
    let too_big = || Error::InvalidParameters("entries too large for the boxed oracle".into());
    let mut mm = [[0i64; 2]; 2];
    for (i, row) in mm.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = small(m.get(i, j)).ok_or_else(too_big)?;
        }
    }
    let dd = [small(&d[0]).ok_or_else(too_big)?, small(&d[1]).ok_or_else(too_big)?];
    Ok((mm, dd))
}

#[derive(Clone, Copy)]
struct Q {
    v: [i64; 2],
    eps: bool,
}

impl Q {
    fn mul(self, o: Q) -> Q {
        let s = if self.eps { -1 } else { 1 };
        Q { v: [self.v[0] + s * o.v[0], self.v[1] + s * o.v[1]], eps: self.eps ^ o.eps }
    }

    fn inv(self) -> Q {
        if self.eps {
            self
        } else {
            Q { v: [-self.v[0], -self.v[1]], eps: false }
        }
    }
}

fn box_count(m: Mat2, d: [i64; 2], b: i64) -> usize {
    let phi = |x: Q| {
        let mv = [m[0][0] * x.v[0] + m[0][1] * x.v[1], m[1][0] * x.v[0] + m[1][1] * x.v[1]];
        Q { v: mv, eps: false }.mul(if x.eps { Q { v: d, eps: true } } else { Q { v: [0, 0], eps: false } })
    };
    let side = 2 * b + 1;
    let index = |x: Q| -> Option<usize> {
        if x.v.iter().all(|c| c.abs() <= b) {
            let i = ((x.v[0] + b) * side + (x.v[1] + b)) as usize;
            Some(2 * i + usize::from(x.eps))
        } else {
            None
        }
    };
    let n = (2 * side * side) as usize;
    let mut uf = UnionFind::new(n);
    let r = b / 4;
    for u0 in -r..=r {
        for u1 in -r..=r {
            for eta in [false, true] {
                let h = Q { v: [u0, u1], eps: eta };
                let twist = phi(h).inv();
                for x0 in -b..=b {
                    for x1 in -b..=b {
                        for eps in [false, true] {
                            let g = Q { v: [x0, x1], eps };
                            if let (Some(i), Some(j)) = (index(g), index(h.mul(g).mul(twist))) {
                                uf.union(i, j);
                            }
                        }
                    }
                }
            }
        }
    }
    let half = b / 2;
    let mut roots: Vec<usize> = Vec::new();
    for x0 in -half..=half {
        for x1 in -half..=half {
            for eps in [false, true] {
                let i = index(Q { v: [x0, x1], eps }).expect("inner box");
                roots.push(uf.find(i));
            }
        }
    }
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// Moduli `(a, b t, b t)` of the default refinement chain, smallest first,
/// with group order `2 a (b t)^2 <= max_order`. Consecutive entries divide
/// each other, so the kernels are nested.
pub fn default_schedule(t: u64, max_order: u64) -> Vec<[u64; 3]> {
    let t = t.max(1);
    let mut out = Vec::new();
    let (mut a, mut b) = (2u64, 2u64);
    loop {
        let order = 2u128 * a as u128 * (b as u128 * t as u128).pow(2);
        if order > max_order as u128 {
            break;
        }
        out.push([a, b * t, b * t]);
        if a >= 2 * b {
            b *= 2;
        } else {
            a *= 2;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleLevel {
    pub moduli: Vec<u64>,
    pub order: usize,
    pub classes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkippedLevel {
    pub moduli: Vec<u64>,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub closed_form: ReidemeisterValue,
    pub levels: Vec<OracleLevel>,
    pub skipped: Vec<SkippedLevel>,
    /// Every count is at most the closed form.
    pub bounded: bool,
    /// Counts never decrease along the schedule.
    pub monotone: bool,
    /// The last count equals the closed form.
    pub saturated: bool,
    /// Order of the first quotient whose count equals the closed form.
    pub saturated_at: Option<usize>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.bounded && self.monotone && self.saturated
    }

    /// The largest count seen.
    pub fn best(&self) -> Option<usize> {
        self.levels.iter().map(|l| l.classes).max()
    }
}

/// Counts twisted classes of the D3F2 automorphism `(k, M, d)` on each
/// admissible quotient of `schedule`, and compares with `r_number_d3f2`.
/// Levels where the reduction is not a normal subgroup or is not preserved
/// by the automorphism are skipped.
pub fn oracle_compare_d3f2(
    k: &[BigInt],
    m: &IntMatrix,
    d: &[BigInt],
    schedule: &[[u64; 3]],
) -> Result<OracleReport> {
    let aut = build_d3f2(k, m, d)?;
    let closed_form = r_number_d3f2(k, m, d)?;
    let target = match &closed_form {
        ReidemeisterValue::Finite(n) => n.clone(),
        ReidemeisterValue::Infinite => {
            return Err(Error::NotApplicable("R is infinite; no finite quotient can saturate".into()))
        }
    };
    let mut levels = Vec::new();
    let mut skipped = Vec::new();
    for moduli in schedule {
        if 2 * moduli.iter().product::<u64>() > MAX_QUOTIENT_ORDER {
            skipped.push(SkippedLevel { moduli: moduli.to_vec(), reason: "too large".into() });
            continue;
        }
        let outcome = aut
            .spec()
            .finite_quotient(moduli)
            .and_then(|q| aut.induced_on(&q).map(|images| (q, images)));
        match outcome {
            Ok((q, images)) => {
                let classes = twisted_classes_finite(&q, &images);
                levels.push(OracleLevel { moduli: moduli.to_vec(), order: q.order(), classes });
            }
            Err(e @ (Error::NonNormalSubgroup { .. } | Error::Inconsistent(_))) => {
                skipped.push(SkippedLevel { moduli: moduli.to_vec(), reason: e.to_string() })
            }
            Err(e) => return Err(e),
        }
    }
    if levels.is_empty() {
        return Err(Error::NotApplicable("no admissible quotient in the schedule".into()));
    }
    let bounded = levels.iter().all(|l| BigInt::from(l.classes) <= target);
    let monotone = levels.windows(2).all(|w| w[0].classes <= w[1].classes);
    let saturated_at = levels.iter().find(|l| BigInt::from(l.classes) == target).map(|l| l.order);
    let saturated = levels.last().is_some_and(|l| BigInt::from(l.classes) == target);
    Ok(OracleReport { closed_form, levels, skipped, bounded, monotone, saturated, saturated_at })
}

/// `oracle_compare_d3f2` on `default_schedule(|tr M|, max_order)`. The trace
/// factor makes the lattice moduli divisible by `det(1 - M) = -tr M`.
pub fn oracle_d3f2(k: &[BigInt], m: &IntMatrix, d: &[BigInt], max_order: u64) -> Result<OracleReport> {
    let tr = m.trace().abs();
    if tr.is_zero() {
        return Err(Error::NotApplicable("tr M = 0: R is infinite".into()));
    }
    let odd = {
        let mut t = tr;
        while t.is_even() {
            t /= 2;
        }
        t.to_u64().ok_or_else(|| Error::InvalidParameters("trace too large".into()))?
    };
    oracle_compare_d3f2(k, m, d, &default_schedule(odd, max_order))
}
