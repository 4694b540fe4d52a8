//! Torsion-free nilpotent groups of class two and rank 3 or 4.
//!
//! Elements are kept in the normal form `e1^a1 e2^a2 ... er^ar`, stored as
//! the exponent vector with the central coordinate first. Generators satisfy
//! `e_j e_i = e1^kappa(j,i) e_i e_j` for `j > i >= 2`, with `e1` central.
//! That sign convention is the one under which [`lambda_rep`] is a
//! homomorphism.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{integer_kernel, IntMatrix, RatMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NilParams {
    rank: usize,
    /// `[l1]` for rank 3, `[l1, l2, l3]` for rank 4.
    l: Vec<BigInt>,
}

impl NilParams {
    pub fn rank3(l1: impl Into<BigInt>) -> Self {
        NilParams { rank: 3, l: vec![l1.into()] }
    }

    pub fn rank4(l1: impl Into<BigInt>, l2: impl Into<BigInt>, l3: impl Into<BigInt>) -> Self {
        NilParams { rank: 4, l: vec![l1.into(), l2.into(), l3.into()] }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn l(&self) -> &[BigInt] {
        &self.l
    }

    /// Structure constant for the pair of 0-based coordinates `j > i >= 1`.
    pub fn kappa(&self, j: usize, i: usize) -> BigInt {
        match (self.rank, j, i) {
            (_, 2, 1) => self.l[0].clone(),
            (4, 3, 1) => self.l[1].clone(),
            (4, 3, 2) => self.l[2].clone(),
            _ => BigInt::zero(),
        }
    }

    /// `sum_{j > i} kappa(j,i) a_j b_i` over the non-central coordinates.
    pub fn bilinear(&self, a: &[BigInt], b: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for j in 2..self.rank {
            for i in 1..j {
                let k = self.kappa(j, i);
                if !k.is_zero() {
                    acc += k * &a[j] * &b[i];
                }
            }
        }
        acc
    }

    /// Antisymmetric matrix `C` on coordinates `2..r` with `[v, w]` having
    /// central exponent `v^T C w`, where `v w = e1^[v,w] w v`.
    pub fn commutator_form(&self) -> IntMatrix {
        let n = self.rank - 1;
        let mut c = IntMatrix::zeros(n, n);
        for j in 2..self.rank {
            for i in 1..j {
                let k = self.kappa(j, i);
                c.set(j - 1, i - 1, k.clone());
                c.set(i - 1, j - 1, -k);
            }
        }
        c
    }

    fn check(&self, x: &NilElement) -> Result<()> {
        if x.exps.len() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: x.exps.len() });
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NilElement {
    pub exps: Vec<BigInt>,
}

impl NilElement {
    pub fn identity(rank: usize) -> Self {
        NilElement { exps: vec![BigInt::zero(); rank] }
    }

    /// `e_{index+1}^power`, i.e. `index` is 0-based.
    pub fn generator(rank: usize, index: usize, power: impl Into<BigInt>) -> Self {
        let mut x = Self::identity(rank);
        x.exps[index] = power.into();
        x
    }

    pub fn from_i64(exps: &[i64]) -> Self {
        NilElement { exps: exps.iter().map(|&a| BigInt::from(a)).collect() }
    }

    pub fn rank(&self) -> usize {
        self.exps.len()
    }

    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(Zero::is_zero)
    }
}

impl fmt::Debug for NilElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.exps.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

pub fn nil_multiply(p: &NilParams, x: &NilElement, y: &NilElement) -> Result<NilElement> {
    p.check(x)?;
    p.check(y)?;
    let mut exps: Vec<BigInt> = x.exps.iter().zip(&y.exps).map(|(a, b)| a + b).collect();
    exps[0] += p.bilinear(&x.exps, &y.exps);
    Ok(NilElement { exps })
}

pub fn nil_inverse(p: &NilParams, x: &NilElement) -> Result<NilElement> {
    p.check(x)?;
    let mut exps: Vec<BigInt> = x.exps.iter().map(|a| -a).collect();
    exps[0] = -&x.exps[0] + p.bilinear(&x.exps, &x.exps);
    Ok(NilElement { exps })
}

/// `x^n = (n a1 + C(n,2) B(a,a), n a)`, valid for every integer `n`.
pub fn nil_power(p: &NilParams, x: &NilElement, n: &BigInt) -> Result<NilElement> {
    p.check(x)?;
    let mut exps: Vec<BigInt> = x.exps.iter().map(|a| a * n).collect();
    let pairs = n * (n - BigInt::one()) / BigInt::from(2);
    exps[0] += pairs * p.bilinear(&x.exps, &x.exps);
    Ok(NilElement { exps })
}

/// `lambda(e_{index+1})` as an `(r+1) x (r+1)` affine matrix.
pub fn lambda_generator(p: &NilParams, index: usize) -> RatMatrix {
    let r = p.rank;
    let mut m = RatMatrix::identity(r + 1);
    m.set(index, r, BigRational::one());
    if index > 0 {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        for j in 1..r {
            let entry = if index > j {
                BigRational::from_integer(p.kappa(index, j)) * &half
            } else if index < j {
                -BigRational::from_integer(p.kappa(j, index)) * &half
            } else {
                continue;
            };
            m.set(0, j, entry);
        }
    }
    m
}

/// Product `lambda(e1)^a1 ... lambda(er)^ar`.
pub fn lambda_rep(p: &NilParams, x: &NilElement) -> Result<RatMatrix> {
    p.check(x)?;
    let r = p.rank;
    let mut acc = RatMatrix::identity(r + 1);
    for (i, a) in x.exps.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        // lambda(e_i) = 1 + E with E^2 = 0, so lambda(e_i)^a = 1 + aE.
        let g = lambda_generator(p, i);
        let mut pw = RatMatrix::identity(r + 1);
        let a = BigRational::from_integer(a.clone());
        for row in 0..=r {
            for col in 0..=r {
                let e = g.get(row, col) - pw.get(row, col);
                if !e.is_zero() {
                    pw.set(row, col, pw.get(row, col) + &a * e);
                }
            }
        }
        acc = acc.checked_mul(&pw)?;
    }
    Ok(acc)
}

/// Recovers the normal form of an element from its affine matrix, or `None`
/// if the matrix is not in `lambda(N)`.
pub fn lambda_decode(p: &NilParams, m: &RatMatrix) -> Option<NilElement> {
    let r = p.rank;
    let mut exps = vec![BigInt::zero(); r];
    for (i, e) in exps.iter_mut().enumerate().skip(1) {
        let t = m.get(i, r);
        if !t.is_integer() {
            return None;
        }
        *e = t.to_integer();
    }
    let partial = lambda_rep(p, &NilElement { exps: exps.clone() }).ok()?;
    let a1 = m.get(0, r) - partial.get(0, r);
    if !a1.is_integer() {
        return None;
    }
    exps[0] = a1.to_integer();
    let x = NilElement { exps };
    (lambda_rep(p, &x).ok()? == *m).then_some(x)
}

/// Generators of the centre: `e1` together with a lattice basis of the
/// kernel of the commutator form.
pub fn center_basis(p: &NilParams) -> Vec<NilElement> {
    let mut basis = vec![NilElement::generator(p.rank, 0, 1)];
    for v in integer_kernel(&p.commutator_form()) {
        let mut exps = vec![BigInt::zero()];
        exps.extend(v);
        basis.push(NilElement { exps });
    }
    basis
}

/// Projection to `N / <e1>`: drop the central coordinate.
pub fn isolator_quotient(x: &NilElement) -> Vec<BigInt> {
    x.exps[1..].to_vec()
}
