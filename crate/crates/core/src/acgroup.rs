//! Almost-crystallographic groups `Gamma = N . <alpha>` of dimension 3 and 4.
//!
//! Elements are `n alpha^eps` with `n` in normal form and `0 <= eps < |F|`.
//! Conjugation by `alpha` is stored as the images `tau(e_i) = alpha e_i alpha^-1`
//! and `alpha^|F| = z` with `z` central in `N`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite::FiniteGroup;
use crate::linalg::{IntMatrix, RatMatrix};
use crate::nilgroup::{lambda_rep, nil_inverse, nil_multiply, nil_power, NilElement, NilParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    D3F1,
    D3F2,
    D4F2,
    D4F3,
    D4F4,
    D4F5,
    D4F143,
    D4F146,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::D3F1,
        Family::D3F2,
        Family::D4F2,
        Family::D4F3,
        Family::D4F4,
        Family::D4F5,
        Family::D4F143,
        Family::D4F146,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::D3F1 => "d3f1",
            Family::D3F2 => "d3f2",
            Family::D4F2 => "d4f2",
            Family::D4F3 => "d4f3",
            Family::D4F4 => "d4f4",
            Family::D4F5 => "d4f5",
            Family::D4F143 => "d4f143",
            Family::D4F146 => "d4f146",
        }
    }

    pub fn param_count(self) -> usize {
        match self {
            Family::D3F1 => 1,
            Family::D4F2 => 7,
            _ => 4,
        }
    }

    pub fn rank(self) -> usize {
        match self {
            Family::D3F1 | Family::D3F2 => 3,
            _ => 4,
        }
    }

    pub fn alpha_order(self) -> usize {
        match self {
            Family::D3F1 => 1,
            Family::D4F143 | Family::D4F146 => 3,
            _ => 2,
        }
    }

    /// `(mu, nu)` for families 3, 4, 5 and `(mu, 0)` for 143/146.
    fn mu_nu(self) -> (i64, i64) {
        match self {
            Family::D4F4 | Family::D4F146 => (1, 0),
            Family::D4F5 => (0, 1),
            _ => (0, 0),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Family::ALL
            .into_iter()
            .find(|f| f.name() == lower)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown family {s:?}")))
    }
}

/// A group of one of the supported families, with its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ACGroupSpec {
    family: Family,
    params: Vec<BigInt>,
    nil: NilParams,
    /// `tau[i] = alpha e_i alpha^-1`.
    tau: Vec<NilElement>,
    /// `alpha^order`.
    z: NilElement,
}

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

impl ACGroupSpec {
    pub fn new(family: Family, params: Vec<BigInt>) -> Result<Self> {
        if params.len() != family.param_count() {
            return Err(Error::InvalidParameters(format!(
                "family {family} takes {} parameters, got {}",
                family.param_count(),
                params.len()
            )));
        }
        let k = |i: usize| params[i - 1].clone();
        let zero = BigInt::zero;
        let (mu, nu) = family.mu_nu();
        let el = |v: Vec<BigInt>| NilElement { exps: v };
        let (nil, tau, z) = match family {
            Family::D3F1 => {
                let nil = NilParams::rank3(k(1));
                let tau = (0..3).map(|i| NilElement::generator(3, i, 1)).collect();
                (nil, tau, NilElement::identity(3))
            }
            Family::D3F2 => (
                NilParams::rank3(k(1)),
                vec![
                    NilElement::generator(3, 0, 1),
                    el(vec![k(2), big(-1), zero()]),
                    el(vec![k(3), zero(), big(-1)]),
                ],
                NilElement::generator(3, 0, k(4)),
            ),
            Family::D4F2 => (
                NilParams::rank4(k(1), k(2), k(3)),
                vec![
                    NilElement::generator(4, 0, 1),
                    el(vec![k(4), big(-1), zero(), zero()]),
                    el(vec![k(5), zero(), big(-1), zero()]),
                    el(vec![k(6), zero(), zero(), big(-1)]),
                ],
                NilElement::generator(4, 0, k(7)),
            ),
            Family::D4F3 | Family::D4F4 | Family::D4F5 => (
                NilParams::rank4(0, 0, k(1)),
                vec![
                    NilElement::generator(4, 0, 1),
                    NilElement::generator(4, 1, 1),
                    el(vec![k(2), big(-nu), big(-1), zero()]),
                    el(vec![k(3), zero(), zero(), big(-1)]),
                ],
                el(vec![k(4), big(mu), zero(), zero()]),
            ),
            Family::D4F143 | Family::D4F146 => (
                NilParams::rank4(0, 0, k(1)),
                vec![
                    NilElement::generator(4, 0, 1),
                    NilElement::generator(4, 1, 1),
                    // The image of e3 is e1^k2 e4: this is what lambda(alpha) encodes.
                    el(vec![k(2), zero(), zero(), big(1)]),
                    el(vec![k(3), big(mu), big(-1), big(-1)]),
                ],
                NilElement::generator(4, 0, k(4)),
            ),
        };
        Ok(ACGroupSpec { family, params, nil, tau, z })
    }

    pub fn from_i64(family: Family, params: &[i64]) -> Result<Self> {
        Self::new(family, params.iter().map(|&x| big(x)).collect())
    }

    pub fn d3f2(k1: i64, k2: i64, k3: i64, k4: i64) -> Self {
        Self::from_i64(Family::D3F2, &[k1, k2, k3, k4]).expect("four parameters")
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn params(&self) -> &[BigInt] {
        &self.params
    }

    pub fn nil_params(&self) -> &NilParams {
        &self.nil
    }

    pub fn rank(&self) -> usize {
        self.nil.rank()
    }

    pub fn alpha_order(&self) -> usize {
        self.family.alpha_order()
    }

    /// Images of the translation generators under conjugation by `alpha`.
    pub fn conjugation_images(&self) -> &[NilElement] {
        &self.tau
    }

    pub fn alpha_power(&self) -> &NilElement {
        &self.z
    }

    /// Number of generators: `e_1..e_r`, then `alpha` if the holonomy is non-trivial.
    pub fn generator_count(&self) -> usize {
        self.rank() + usize::from(self.alpha_order() > 1)
    }

    pub fn generators(&self) -> Vec<ACElement> {
        let r = self.rank();
        let mut gens: Vec<ACElement> = (0..r).map(|i| ACElement::translation(NilElement::generator(r, i, 1))).collect();
        if self.alpha_order() > 1 {
            gens.push(self.alpha());
        }
        gens
    }

    pub fn identity(&self) -> ACElement {
        ACElement::translation(NilElement::identity(self.rank()))
    }

    pub fn alpha(&self) -> ACElement {
        ACElement { nil: NilElement::identity(self.rank()), eps: 1 % self.alpha_order() }
    }

    fn check(&self, x: &ACElement) -> Result<()> {
        if x.nil.rank() != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), found: x.nil.rank() });
        }
        if x.eps >= self.alpha_order() {
            return Err(Error::SpecMismatch(format!(
                "holonomy exponent {} out of range for {}",
                x.eps, self.family
            )));
        }
        Ok(())
    }

    /// `alpha n alpha^-1`.
    pub fn tau(&self, n: &NilElement) -> Result<NilElement> {
        let mut acc = NilElement::identity(self.rank());
        for (img, a) in self.tau.iter().zip(&n.exps) {
            if a.is_zero() {
                continue;
            }
            acc = nil_multiply(&self.nil, &acc, &nil_power(&self.nil, img, a)?)?;
        }
        Ok(acc)
    }

    pub fn tau_power(&self, n: &NilElement, eps: usize) -> Result<NilElement> {
        let mut acc = n.clone();
        for _ in 0..eps {
            acc = self.tau(&acc)?;
        }
        Ok(acc)
    }

    pub fn multiply(&self, x: &ACElement, y: &ACElement) -> Result<ACElement> {
        self.check(x)?;
        self.check(y)?;
        let moved = self.tau_power(&y.nil, x.eps)?;
        let mut nil = nil_multiply(&self.nil, &x.nil, &moved)?;
        let mut eps = x.eps + y.eps;
        if eps >= self.alpha_order() {
            eps -= self.alpha_order();
            nil = nil_multiply(&self.nil, &nil, &self.z)?;
        }
        Ok(ACElement { nil, eps })
    }

    pub fn inverse(&self, x: &ACElement) -> Result<ACElement> {
        self.check(x)?;
        if x.eps == 0 {
            return Ok(ACElement::translation(nil_inverse(&self.nil, &x.nil)?));
        }
        // x alpha^(order-eps) = n z, so x^-1 = alpha^(order-eps) (n z)^-1.
        let y = ACElement { nil: NilElement::identity(self.rank()), eps: self.alpha_order() - x.eps };
        let nz = nil_multiply(&self.nil, &x.nil, &self.z)?;
        self.multiply(&y, &ACElement::translation(nil_inverse(&self.nil, &nz)?))
    }

    pub fn power(&self, x: &ACElement, n: &BigInt) -> Result<ACElement> {
        let (mut base, mut e) = if n.is_negative() { (self.inverse(x)?, -n) } else { (x.clone(), n.clone()) };
        let mut acc = self.identity();
        let two = big(2);
        while !e.is_zero() {
            if e.is_odd() {
                acc = self.multiply(&acc, &base)?;
            }
            e /= &two;
            if !e.is_zero() {
                base = self.multiply(&base, &base)?;
            }
        }
        Ok(acc)
    }

    pub fn conjugate(&self, g: &ACElement, x: &ACElement) -> Result<ACElement> {
        let gx = self.multiply(g, x)?;
        self.multiply(&gx, &self.inverse(g)?)
    }

    /// `prod_i images[i]^(n_i)` in the order `e_1, ..., e_r`.
    pub fn evaluate_word(&self, images: &[ACElement], n: &NilElement) -> Result<ACElement> {
        let mut acc = self.identity();
        for (img, a) in images.iter().zip(&n.exps) {
            if !a.is_zero() {
                acc = self.multiply(&acc, &self.power(img, a)?)?;
            }
        }
        Ok(acc)
    }

    /// Both sides of every defining relation, with the generators replaced
    /// by `images` (one per generator, `alpha` last).
    pub fn relation_sides(&self, images: &[ACElement]) -> Result<Vec<(String, ACElement, ACElement)>> {
        if images.len() != self.generator_count() {
            return Err(Error::InvalidParameters(format!(
                "expected {} generator images, got {}",
                self.generator_count(),
                images.len()
            )));
        }
        let r = self.rank();
        let mut sides = Vec::new();
        for j in 1..r {
            for i in 0..j {
                // e_j e_i = e1^kappa e_i e_j
                let lhs = self.multiply(&images[j], &images[i])?;
                let kappa = if i == 0 { BigInt::zero() } else { self.nil.kappa(j, i) };
                let ij = self.multiply(&images[i], &images[j])?;
                let rhs = self.multiply(&self.power(&images[0], &kappa)?, &ij)?;
                sides.push((format!("[e{}, e{}]", j + 1, i + 1), lhs, rhs));
            }
        }
        if self.alpha_order() > 1 {
            let a = &images[r];
            for i in 0..r {
                let lhs = self.conjugate(a, &images[i])?;
                let rhs = self.evaluate_word(images, &self.tau[i])?;
                sides.push((format!("alpha*e{}", i + 1), lhs, rhs));
            }
            let lhs = self.power(a, &big(self.alpha_order() as i64))?;
            let rhs = self.evaluate_word(images, &self.z)?;
            sides.push((format!("alpha^{}", self.alpha_order()), lhs, rhs));
        }
        Ok(sides)
    }

    /// Names of the defining relations that fail for `images`.
    pub fn relation_failures(&self, images: &[ACElement]) -> Result<Vec<String>> {
        Ok(self
            .relation_sides(images)?
            .into_iter()
            .filter(|(_, l, r)| l != r)
            .map(|(name, _, _)| name)
            .collect())
    }

    /// `lambda(alpha)`, an `(r+1) x (r+1)` rational affine matrix.
    pub fn lambda_alpha(&self) -> RatMatrix {
        let r = self.rank();
        let q = |n: &BigInt, d: i64| BigRational::new(n.clone(), big(d));
        let int = |n: i64| BigRational::from_integer(big(n));
        let p = &self.params;
        let mut m = RatMatrix::identity(r + 1);
        let (mu, nu) = self.family.mu_nu();
        match self.family {
            Family::D3F1 => {}
            Family::D3F2 => {
                m.set(0, 1, q(&p[1], 1));
                m.set(0, 2, q(&p[2], 1));
                m.set(0, 3, q(&p[3], 2));
                m.set(1, 1, int(-1));
                m.set(2, 2, int(-1));
            }
            Family::D4F2 => {
                for j in 1..4 {
                    m.set(0, j, q(&p[j + 2], 1));
                    m.set(j, j, int(-1));
                }
                m.set(0, 4, q(&p[6], 2));
            }
            Family::D4F3 | Family::D4F4 | Family::D4F5 => {
                m.set(0, 2, q(&p[1], 1));
                m.set(0, 3, q(&p[2], 1));
                m.set(0, 4, q(&p[3], 2));
                m.set(1, 2, int(-nu));
                m.set(1, 4, BigRational::new(big(mu), big(2)));
                m.set(2, 2, int(-1));
                m.set(3, 3, int(-1));
            }
            Family::D4F143 | Family::D4F146 => {
                m.set(0, 2, q(&p[1], 1));
                m.set(0, 3, q(&p[2], 1) - q(&p[0], 2));
                m.set(0, 4, q(&p[3], 3));
                m.set(1, 3, int(mu));
                m.set(2, 2, int(0));
                m.set(2, 3, int(-1));
                m.set(3, 2, int(1));
                m.set(3, 3, int(-1));
            }
        }
        m
    }

    /// `lambda(n) lambda(alpha)^eps`.
    pub fn lambda(&self, x: &ACElement) -> Result<RatMatrix> {
        self.check(x)?;
        let mut m = lambda_rep(&self.nil, &x.nil)?;
        let la = self.lambda_alpha();
        for _ in 0..x.eps {
            m = m.checked_mul(&la)?;
        }
        Ok(m)
    }

    /// Matrix of conjugation by `alpha` in exponent coordinates: column `i`
    /// is the exponent vector of `tau(e_i)`.
    pub fn conjugation_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(&self.tau.iter().map(|t| t.exps.clone()).collect::<Vec<_>>())
            .expect("conjugation images have equal length")
    }

    pub fn holonomy(&self) -> HolonomyRep {
        let a = self.conjugation_matrix();
        let elements = (0..self.alpha_order())
            .map(|eps| HolonomyElement { eps, astar: a.pow(eps as u32).expect("square matrix") })
            .collect();
        HolonomyRep { elements }
    }

    /// Linear parts of `lambda(alpha)^eps`.
    pub fn lambda_linear_parts(&self) -> Vec<RatMatrix> {
        let r = self.rank();
        let la = self.lambda_alpha();
        let mut acc = RatMatrix::identity(r + 1);
        let mut out = Vec::new();
        for _ in 0..self.alpha_order() {
            out.push(acc.block(0, 0, r, r));
            acc = acc.checked_mul(&la).expect("square");
        }
        out
    }

    /// Image in `Gamma / <e1>`: drop the central coordinate.
    pub fn project_to_quotient(&self, x: &ACElement) -> (Vec<BigInt>, usize) {
        (x.nil.exps[1..].to_vec(), x.eps)
    }

    /// Product in `Gamma / <e1>`, computed from the lower block of the
    /// conjugation matrix.
    pub fn quotient_multiply(
        &self,
        x: &(Vec<BigInt>, usize),
        y: &(Vec<BigInt>, usize),
    ) -> Result<(Vec<BigInt>, usize)> {
        let r = self.rank();
        let a = self.conjugation_matrix().block(1, 1, r - 1, r - 1);
        let moved = a.pow(x.1 as u32)?.mul_vec(&y.0)?;
        let mut v: Vec<BigInt> = x.0.iter().zip(&moved).map(|(p, q)| p + q).collect();
        let mut eps = x.1 + y.1;
        if eps >= self.alpha_order() {
            eps -= self.alpha_order();
            for (vi, zi) in v.iter_mut().zip(&self.z.exps[1..]) {
                *vi += zi;
            }
        }
        Ok((v, eps))
    }

    pub fn finite_quotient(&self, moduli: &[u64]) -> Result<FiniteQuotient> {
        FiniteQuotient::new(self.clone(), moduli.to_vec())
    }
}

impl fmt::Display for ACGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
        write!(f, "{}({})", self.family, ps.join(","))
    }
}

/// `nil * alpha^eps`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ACElement {
    pub nil: NilElement,
    pub eps: usize,
}

impl ACElement {
    pub fn new(nil: NilElement, eps: usize) -> Self {
        ACElement { nil, eps }
    }

    pub fn translation(nil: NilElement) -> Self {
        ACElement { nil, eps: 0 }
    }

    pub fn from_i64(exps: &[i64], eps: usize) -> Self {
        ACElement { nil: NilElement::from_i64(exps), eps }
    }
}

impl fmt::Debug for ACElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}a^{}", self.nil, self.eps)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HolonomyElement {
    pub eps: usize,
    pub astar: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HolonomyRep {
    pub elements: Vec<HolonomyElement>,
}

impl HolonomyRep {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn matrices(&self) -> impl Iterator<Item = &IntMatrix> {
        self.elements.iter().map(|h| &h.astar)
    }
}

/// `Gamma / K` where `K` is the kernel of reducing every exponent `a_i`
/// modulo `moduli[i]`. Built only when that reduction is compatible with
/// multiplication, i.e. `K` is a normal subgroup.
#[derive(Clone, Debug)]
pub struct FiniteQuotient {
    spec: ACGroupSpec,
    moduli: Vec<u64>,
    order: usize,
}

/// Order bound for finite quotients (indices are stored as `u32`).
pub const MAX_QUOTIENT_ORDER: u64 = 1 << 24;

impl FiniteQuotient {
    fn new(spec: ACGroupSpec, moduli: Vec<u64>) -> Result<Self> {
        if moduli.len() != spec.rank() || moduli.contains(&0) {
            return Err(Error::InvalidParameters(format!(
                "need {} positive moduli, got {:?}",
                spec.rank(),
                moduli
            )));
        }
        let order = moduli
            .iter()
            .try_fold(spec.alpha_order() as u64, |acc, &q| acc.checked_mul(q))
            .filter(|&n| n <= MAX_QUOTIENT_ORDER)
            .ok_or_else(|| Error::InvalidParameters(format!("quotient for {moduli:?} is too large")))?;
        let fq = FiniteQuotient { spec, moduli, order: order as usize };
        fq.check_compatible()?;
        Ok(fq)
    }

    pub fn spec(&self) -> &ACGroupSpec {
        &self.spec
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    /// Reduction of exponents is compatible with multiplication iff every
    /// shift of an exponent by its modulus leaves the reduced product
    /// unchanged. For fixed holonomy parts the product exponents are integer
    /// valued polynomials of degree at most 2, so the difference under a
    /// shift is affine and it suffices to test it at the origin and at the
    /// unit vectors.
    fn check_compatible(&self) -> Result<()> {
        let r = self.spec.rank();
        let ord = self.spec.alpha_order();
        let unit = |k: Option<usize>, scale: u64| {
            let mut n = NilElement::identity(r);
            if let Some(k) = k {
                n.exps[k] = BigInt::from(scale);
            }
            n
        };
        let points: Vec<(NilElement, NilElement)> = std::iter::once((unit(None, 0), unit(None, 0)))
            .chain((0..r).map(|k| (unit(Some(k), 1), unit(None, 0))))
            .chain((0..r).map(|k| (unit(None, 0), unit(Some(k), 1))))
            .collect();
        let shift = |n: &NilElement, k: usize| {
            let mut m = n.clone();
            m.exps[k] += self.moduli[k];
            m
        };
        for ex in 0..ord {
            for ey in 0..ord {
                for (a, b) in &points {
                    let x = ACElement::new(a.clone(), ex);
                    let y = ACElement::new(b.clone(), ey);
                    let base = self.index_of(&self.spec.multiply(&x, &y)?);
                    for k in 0..r {
                        let xs = ACElement::new(shift(a, k), ex);
                        let ys = ACElement::new(shift(b, k), ey);
                        if self.index_of(&self.spec.multiply(&xs, &y)?) != base
                            || self.index_of(&self.spec.multiply(&x, &ys)?) != base
                        {
                            return Err(Error::NonNormalSubgroup {
                                moduli: self.moduli.clone(),
                                reason: format!(
                                    "shifting e{} by {} changes a reduced product",
                                    k + 1,
                                    self.moduli[k]
                                ),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Index of the coset of `x`.
    pub fn index_of(&self, x: &ACElement) -> usize {
        let mut idx: u64 = 0;
        for (a, &q) in x.nil.exps.iter().zip(&self.moduli) {
            let r = a.mod_floor(&BigInt::from(q)).to_u64().expect("residue fits");
            idx = idx * q + r;
        }
        (idx as usize) * self.spec.alpha_order() + x.eps
    }

    /// Canonical representative with exponents in `[0, q_i)`.
    pub fn element(&self, idx: usize) -> ACElement {
        let ord = self.spec.alpha_order();
        let eps = idx % ord;
        let mut rest = (idx / ord) as u64;
        let mut exps = vec![BigInt::zero(); self.moduli.len()];
        for (e, &q) in exps.iter_mut().zip(&self.moduli).rev() {
            *e = BigInt::from(rest % q);
            rest /= q;
        }
        ACElement { nil: NilElement { exps }, eps }
    }

    /// Induced map of an endomorphism given on representatives; fails if
    /// `phi` does not preserve the kernel.
    pub fn induced_map<F>(&self, phi: F) -> Result<Vec<usize>>
    where
        F: Fn(&ACElement) -> Result<ACElement>,
    {
        let r = self.spec.rank();
        // Same affine-difference argument as for products.
        for eps in 0..self.spec.alpha_order() {
            let mut points = vec![NilElement::identity(r)];
            points.extend((0..r).map(|k| NilElement::generator(r, k, 1)));
            for p in &points {
                let base = self.index_of(&phi(&ACElement::new(p.clone(), eps))?);
                for k in 0..r {
                    let mut s = p.clone();
                    s.exps[k] += self.moduli[k];
                    if self.index_of(&phi(&ACElement::new(s, eps))?) != base {
                        return Err(Error::NonNormalSubgroup {
                            moduli: self.moduli.clone(),
                            reason: format!("the automorphism does not preserve the kernel (e{})", k + 1),
                        });
                    }
                }
            }
        }
        (0..self.order).map(|i| Ok(self.index_of(&phi(&self.element(i))?))).collect()
    }
}

impl FiniteGroup for FiniteQuotient {
    fn order(&self) -> usize {
        self.order
    }

    fn identity(&self) -> usize {
        0
    }

    fn multiply(&self, a: usize, b: usize) -> usize {
        let p = self.spec.multiply(&self.element(a), &self.element(b)).expect("same group");
        self.index_of(&p)
    }

    fn inverse(&self, a: usize) -> usize {
        self.index_of(&self.spec.inverse(&self.element(a)).expect("same group"))
    }

    fn generators(&self) -> Vec<usize> {
        self.spec.generators().iter().map(|g| self.index_of(g)).collect()
    }
}

/// The integer entries of `lambda(alpha)` as a sanity value for callers
/// comparing linear parts; `None` if some entry is fractional.
pub fn integral_linear_part(m: &RatMatrix) -> Option<IntMatrix> {
    m.to_integer()
}
