//! Automorphisms given by generator images, and the parameterized families
//! with finite Reidemeister number.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::acgroup::{ACElement, ACGroupSpec, Family, FiniteQuotient};
use crate::error::{Error, Result};
use crate::linalg::{det, IntMatrix};
use crate::nilgroup::NilElement;

/// An automorphism of `Gamma`, stored as the images of `e_1..e_r` and `alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    spec: ACGroupSpec,
    images: Vec<ACElement>,
}

impl Automorphism {
    /// Checks every defining relation and bijectivity.
    pub fn new(spec: ACGroupSpec, images: Vec<ACElement>) -> Result<Self> {
        let r = spec.rank();
        if images.len() != spec.generator_count() {
            return Err(Error::InvalidParameters(format!(
                "{} generator images needed, got {}",
                spec.generator_count(),
                images.len()
            )));
        }
        if let Some(i) = images[..r].iter().position(|x| x.eps != 0) {
            return Err(Error::InvalidAutomorphism {
                condition: "translations".into(),
                detail: format!("image of e{} leaves the translation subgroup", i + 1),
            });
        }
        if let Some(rel) = spec.relation_failures(&images)?.into_iter().next() {
            return Err(Error::InvalidAutomorphism {
                condition: format!("relation {rel}"),
                detail: "generator images do not satisfy the relation".into(),
            });
        }
        let aut = Automorphism { spec, images };
        let d = det(&aut.dstar())?;
        if !d.abs().is_one() {
            return Err(Error::InvalidAutomorphism {
                condition: "bijectivity".into(),
                detail: format!("det D_* = {d}"),
            });
        }
        let ord = aut.spec.alpha_order();
        if ord > 1 && aut.images[r].eps.gcd(&ord) != 1 {
            return Err(Error::InvalidAutomorphism {
                condition: "bijectivity".into(),
                detail: "image of alpha does not generate the holonomy".into(),
            });
        }
        Ok(aut)
    }

    pub fn identity(spec: &ACGroupSpec) -> Self {
        Automorphism { spec: spec.clone(), images: spec.generators() }
    }

    pub fn spec(&self) -> &ACGroupSpec {
        &self.spec
    }

    pub fn images(&self) -> &[ACElement] {
        &self.images
    }

    pub fn apply(&self, x: &ACElement) -> Result<ACElement> {
        let n = self.spec.evaluate_word(&self.images, &x.nil)?;
        if x.eps == 0 {
            return Ok(n);
        }
        let a = self.spec.power(&self.images[self.spec.rank()], &BigInt::from(x.eps))?;
        self.spec.multiply(&n, &a)
    }

    /// Column `i` is the exponent vector of the image of `e_i`.
    pub fn dstar(&self) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = self.images[..self.spec.rank()].iter().map(|x| x.nil.exps.clone()).collect();
        IntMatrix::from_columns(&cols).expect("images have the group's rank")
    }

    /// Image array on a finite quotient; fails unless the map is a
    /// well-defined permutation.
    pub fn induced_on(&self, q: &FiniteQuotient) -> Result<Vec<usize>> {
        let images = q.induced_map(|x| self.apply(x))?;
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::Inconsistent(format!(
                    "induced map on the quotient by {:?} is not injective",
                    q.moduli()
                )));
            }
        }
        Ok(images)
    }
}

/// Outcome of the four conditions on `(k, M, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct D3F2Conditions {
    pub a: bool,
    pub b: bool,
    pub c: bool,
    pub d: bool,
}

impl D3F2Conditions {
    pub fn all(&self) -> bool {
        self.a && self.b && self.c && self.d
    }

    pub fn first_failure(&self) -> Option<&'static str> {
        [(self.a, "(a)"), (self.b, "(b)"), (self.c, "(c)"), (self.d, "(d)")]
            .into_iter()
            .find(|(ok, _)| !ok)
            .map(|(_, name)| name)
    }
}

/// Entries of `M = [[m1, m3], [m2, m4]]`.
fn m_entries(m: &IntMatrix) -> Result<[BigInt; 4]> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::Dimension(format!("M must be 2x2, got {}x{}", m.rows(), m.cols())));
    }
    Ok([m.get(0, 0).clone(), m.get(1, 0).clone(), m.get(0, 1).clone(), m.get(1, 1).clone()])
}

fn pair(d: &[BigInt]) -> Result<[BigInt; 2]> {
    match d {
        [d1, d2] => Ok([d1.clone(), d2.clone()]),
        _ => Err(Error::Dimension(format!("d must have 2 entries, got {}", d.len()))),
    }
}

fn four(k: &[BigInt]) -> Result<[BigInt; 4]> {
    match k {
        [a, b, c, d] => Ok([a.clone(), b.clone(), c.clone(), d.clone()]),
        _ => Err(Error::InvalidParameters(format!("expected 4 parameters, got {}", k.len()))),
    }
}

/// Numerators of the e1-exponents of the images of `e2`, `e3`, `alpha`
/// (before halving), in that order.
fn d3f2_numerators(k: &[BigInt; 4], m: &[BigInt; 4], d: &[BigInt; 2]) -> [BigInt; 3] {
    let [k1, k2, k3, _] = k;
    let [m1, m2, m3, m4] = m;
    let [d1, d2] = d;
    let one = BigInt::one();
    [
        k1 * (m1 * m2 + m1 * d2 - m2 * d1) - k2 * (m1 + &one) - k3 * m2,
        k1 * (m3 * m4 + m3 * d2 - m4 * d1) - k2 * m3 - k3 * (m4 + &one),
        k1 * d1 * d2 - k2 * d1 - k3 * d2,
    ]
}

pub fn check_conditions_d3f2(k: &[BigInt], m: &IntMatrix, d: &[BigInt]) -> Result<D3F2Conditions> {
    let (k, me, d) = (four(k)?, m_entries(m)?, pair(d)?);
    let [a, b, c] = d3f2_numerators(&k, &me, &d);
    let det = &me[0] * &me[3] - &me[1] * &me[2];
    Ok(D3F2Conditions { a: a.is_even(), b: b.is_even(), c: c.is_even(), d: det == BigInt::from(-1) })
}

pub fn build_d3f2(k: &[BigInt], m: &IntMatrix, d: &[BigInt]) -> Result<Automorphism> {
    let conds = check_conditions_d3f2(k, m, d)?;
    if let Some(c) = conds.first_failure() {
        let detail = if c == "(d)" {
            format!("det M = {}, must be -1", det(m)?)
        } else {
            "e1-exponent is not an integer".to_string()
        };
        return Err(Error::InvalidAutomorphism { condition: c.into(), detail });
    }
    let (kk, me, dd) = (four(k)?, m_entries(m)?, pair(d)?);
    let two = BigInt::from(2);
    let [x2, x3, xa] = d3f2_numerators(&kk, &me, &dd).map(|n| n / &two);
    let [m1, m2, m3, m4] = me;
    let [d1, d2] = dd;
    let spec = ACGroupSpec::new(Family::D3F2, kk.to_vec())?;
    let t = |v: Vec<BigInt>| ACElement::translation(NilElement { exps: v });
    let images = vec![
        t(vec![BigInt::from(-1), BigInt::zero(), BigInt::zero()]),
        t(vec![x2, m1, m2]),
        t(vec![x3, m3, m4]),
        ACElement::new(NilElement { exps: vec![xa - &kk[3], d1, d2] }, 1),
    ];
    Automorphism::new(spec, images)
}

fn el(v: Vec<BigInt>, eps: usize) -> ACElement {
    ACElement::new(NilElement { exps: v }, eps)
}

fn b(x: i64) -> BigInt {
    BigInt::from(x)
}

/// The automorphism with `D_*` lower block `[[1,2],[2,3]]` that exists for
/// every group in families 3, 4 and 5.
pub fn build_d4_families_345(spec: &ACGroupSpec) -> Result<Automorphism> {
    let (mu, nu) = match spec.family() {
        Family::D4F3 => (0, 0),
        Family::D4F4 => (1, 0),
        Family::D4F5 => (0, 1),
        f => return Err(Error::NotApplicable(format!("family {f} is not one of 3, 4, 5"))),
    };
    let p = spec.params();
    let (k1, k2, k3, k4) = (&p[0], &p[1], &p[2], &p[3]);
    let images = vec![
        el(vec![b(-1), b(0), b(0), b(0)], 0),
        el(vec![b(0), b(-1), b(0), b(0)], 0),
        el(vec![k1 - k2 - k3, b(nu), b(1), b(2)], 0),
        el(vec![b(3) * k1 - k2 - b(2) * k3, b(nu), b(2), b(3)], 0),
        el(vec![-k4, b(-mu), b(0), b(0)], 1),
    ];
    Automorphism::new(spec.clone(), images)
}

/// Family 3 group with parameters `(2k, 0, 0, 1)`.
pub fn d4f3_group(k: &BigInt) -> ACGroupSpec {
    ACGroupSpec::new(Family::D4F3, vec![b(2) * k, b(0), b(0), b(1)]).expect("four parameters")
}

/// Family 5 group with parameters `(k, 0, 0, 1)`.
pub fn d4f5_group(k: &BigInt) -> ACGroupSpec {
    ACGroupSpec::new(Family::D4F5, vec![k.clone(), b(0), b(0), b(1)]).expect("four parameters")
}

/// General finite-R automorphism of the family 3 group `(2k, 0, 0, 1)`.
pub fn build_d4f3(k: &BigInt, m: &IntMatrix, d: &[BigInt], l: &BigInt) -> Result<Automorphism> {
    let [m1, m2, m3, m4] = m_entries(m)?;
    let [d1, d2] = pair(d)?;
    if &m1 * &m4 - &m2 * &m3 != b(-1) {
        return Err(Error::InvalidAutomorphism { condition: "det M = -1".into(), detail: format!("det M = {}", det(m)?) });
    }
    let images = vec![
        el(vec![b(-1), b(0), b(0), b(0)], 0),
        el(vec![l.clone(), b(-1), b(0), b(0)], 0),
        el(vec![k * (&m1 * &m2 + &m1 * &d2 - &m2 * &d1), b(0), m1.clone(), m2.clone()], 0),
        el(vec![k * (&m3 * &m4 + &m3 * &d2 - &m4 * &d1), b(0), m3, m4], 0),
        el(vec![k * &d1 * &d2 - b(1), b(0), d1, d2], 1),
    ];
    Automorphism::new(d4f3_group(k), images)
}

/// `phi_m` on the family 3 group `(2k, 0, 0, 1)`.
pub fn build_d4f3_phi_m(k: &BigInt, m: &BigInt) -> Result<Automorphism> {
    let images = vec![
        el(vec![b(-1), b(0), b(0), b(0)], 0),
        el(vec![b(0), b(-1), b(0), b(0)], 0),
        el(vec![b(0), b(0), b(0), b(1)], 0),
        el(vec![k * m, b(0), b(1), m.clone()], 0),
        el(vec![b(-1), b(0), b(0), b(0)], 1),
    ];
    Automorphism::new(d4f3_group(k), images)
}

/// General finite-R automorphism of the family 5 group `(k, 0, 0, 1)`.
pub fn build_d4f5(k: &BigInt, m: &IntMatrix, d: &[BigInt], l: &BigInt) -> Result<Automorphism> {
    let [m1, m2, m3, m4] = m_entries(m)?;
    let [d1, d2] = pair(d)?;
    let constraint = &m1 - &m4 + b(2) * &m1 * &m4 - &m2 * &m3;
    if !constraint.is_zero() {
        return Err(Error::InvalidAutomorphism {
            condition: "m1 - m4 + 2 m1 m4 - m2 m3 = 0".into(),
            detail: format!("left side is {constraint}"),
        });
    }
    let two = b(2);
    let e2 = k * (&two * &m1 * &m2 + &two * &m1 * &d2 - &two * &m2 * &d1 - &m2 - &d2) - &two * l;
    let e4 = k * (&two * &m3 * &m4 + &m3 * &d2 + &m3 - &two * &m4 * &d1 - &d1);
    let images = vec![
        el(vec![b(-1), b(0), b(0), b(0)], 0),
        el(vec![e2, b(-1), b(0), b(0)], 0),
        el(vec![l.clone(), m1.clone(), &two * &m1 - b(1), m2], 0),
        el(vec![e4, m3.clone(), &two * &m3, b(1) + &two * &m4], 0),
        el(vec![k * &d1 * &d2 - b(1), d1.clone(), &two * &d1, d2], 1),
    ];
    Automorphism::new(d4f5_group(k), images)
}

/// `phi_m` on the family 5 group `(k, 0, 0, 1)`.
pub fn build_d4f5_phi_m(k: &BigInt, m: &BigInt) -> Result<Automorphism> {
    let two = b(2);
    let images = vec![
        el(vec![b(-1), b(0), b(0), b(0)], 0),
        el(vec![k * (&two * m - b(1)), b(-1), b(0), b(0)], 0),
        el(vec![b(0), m.clone(), &two * m - b(1), b(1)], 0),
        el(vec![k * m, m.clone(), &two * m, b(1)], 0),
        el(vec![b(-1), b(0), b(0), b(0)], 1),
    ];
    Automorphism::new(d4f5_group(k), images)
}

/// Parameters of a family member: `M = [[m1, m3], [m2, m4]]`, `d`, and the
/// free exponent `l` where the family has one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutSpec {
    pub spec: ACGroupSpec,
    pub m: IntMatrix,
    pub d: Vec<BigInt>,
    pub extra: Vec<BigInt>,
}

impl AutSpec {
    pub fn build(&self) -> Result<Automorphism> {
        let p = self.spec.params();
        let l = self.extra.first().cloned().unwrap_or_default();
        match self.spec.family() {
            Family::D3F2 => build_d3f2(p, &self.m, &self.d),
            Family::D4F3 => {
                let k = half_of_first(p, Family::D4F3)?;
                build_d4f3(&k, &self.m, &self.d, &l)
            }
            Family::D4F5 => {
                if !(p[1].is_zero() && p[2].is_zero() && p[3].is_one()) {
                    return Err(Error::NotApplicable("family 5 form needs parameters (k,0,0,1)".into()));
                }
                build_d4f5(&p[0], &self.m, &self.d, &l)
            }
            f => Err(Error::NotApplicable(format!("no (M, d) parameterization for family {f}"))),
        }
    }
}

fn half_of_first(p: &[BigInt], f: Family) -> Result<BigInt> {
    if p[0].is_odd() || !p[1].is_zero() || !p[2].is_zero() || !p[3].is_one() {
        return Err(Error::NotApplicable(format!("family {f} form needs parameters (2k,0,0,1)")));
    }
    Ok(&p[0] / b(2))
}
