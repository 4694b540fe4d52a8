//! Reidemeister numbers: the determinant criterion for `R = infinity`, the
//! averaging formula, the closed form for the 3-dimensional family 2, and
//! Reidemeister spectra.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::acgroup::{ACElement, ACGroupSpec, Family, HolonomyRep};
use crate::automorphisms::{check_conditions_d3f2, Automorphism};
use crate::error::{Error, Result};
use crate::linalg::{count_solutions_gf2, det, integer_kernel, mod2, unimodular_completion, IntMatrix, Mod2Matrix, Mod2Vector};
use crate::makelist::{make_list, parities, Parity4};
use crate::nilgroup::NilElement;
use crate::progression::{Progression, ResidueClassSet};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ReidemeisterValue {
    Finite(BigInt),
    Infinite,
}

impl ReidemeisterValue {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ReidemeisterValue::Infinite)
    }

    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            ReidemeisterValue::Finite(n) => Some(n),
            ReidemeisterValue::Infinite => None,
        }
    }
}

impl From<i64> for ReidemeisterValue {
    fn from(n: i64) -> Self {
        ReidemeisterValue::Finite(BigInt::from(n))
    }
}

impl fmt::Display for ReidemeisterValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReidemeisterValue::Finite(n) => write!(f, "{n}"),
            ReidemeisterValue::Infinite => write!(f, "∞"),
        }
    }
}

/// JSON: an integer (a decimal string beyond 64 bits), or the string `"infinity"`.
impl Serialize for ReidemeisterValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ReidemeisterValue::Infinite => s.serialize_str("infinity"),
            ReidemeisterValue::Finite(n) => match n.to_i64() {
                Some(v) => s.serialize_i64(v),
                None => s.serialize_str(&n.to_string()),
            },
        }
    }
}

impl<'de> Deserialize<'de> for ReidemeisterValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) if s == "infinity" => Ok(ReidemeisterValue::Infinite),
            serde_json::Value::String(s) => {
                s.parse::<BigInt>().map(ReidemeisterValue::Finite).map_err(serde::de::Error::custom)
            }
            serde_json::Value::Number(n) => n
                .to_string()
                .parse::<BigInt>()
                .map(ReidemeisterValue::Finite)
                .map_err(serde::de::Error::custom),
            other => Err(serde::de::Error::custom(format!("not a Reidemeister number: {other}"))),
        }
    }
}

fn dets(f: &HolonomyRep, dstar: &IntMatrix) -> Result<Vec<BigInt>> {
    f.matrices()
        .map(|a| {
            let ad = a.checked_mul(dstar)?;
            det(&(&IntMatrix::identity(ad.rows()) - &ad))
        })
        .collect()
}

/// True iff `1 - A D_*` is singular for some holonomy matrix `A`, i.e. `R = infinity`.
pub fn rinfty_check(f: &HolonomyRep, dstar: &IntMatrix) -> Result<bool> {
    Ok(dets(f, dstar)?.iter().any(Zero::is_zero))
}

/// `(1/|F|) sum_A |det(1 - A D_*)|`. Only meaningful for torsion-free groups;
/// the caller decides that.
pub fn averaging(f: &HolonomyRep, dstar: &IntMatrix) -> Result<ReidemeisterValue> {
    let ds = dets(f, dstar)?;
    if ds.iter().any(Zero::is_zero) {
        return Ok(ReidemeisterValue::Infinite);
    }
    let sum: BigInt = ds.iter().map(|d| d.abs()).sum();
    let n = BigInt::from(f.order());
    let (q, r) = sum.div_rem(&n);
    if !r.is_zero() {
        return Err(Error::Inconsistent(format!("averaging sum {sum} is not divisible by |F| = {n}")));
    }
    Ok(ReidemeisterValue::Finite(q))
}

pub fn averaging_for(aut: &Automorphism) -> Result<ReidemeisterValue> {
    averaging(&aut.spec().holonomy(), &aut.dstar())
}

pub fn rinfty_for(aut: &Automorphism) -> Result<bool> {
    rinfty_check(&aut.spec().holonomy(), &aut.dstar())
}

/// Number of `z in Z_2^2` with `(1 - M) z = d` whose congruence
/// `k1 z2 z3 - k2 z2 - k3 z3 - k4` is even.
pub fn compute_s(k: Parity4, mbar: Mod2Matrix, dbar: Mod2Vector) -> u32 {
    let a = Mod2Matrix::IDENTITY.add(&mbar);
    Mod2Vector::all()
        .filter(|&z| a.mul_vec(z) == dbar)
        .filter(|z| {
            let [z2, z3] = z.0;
            (k[0] * z2 * z3 + k[1] * z2 + k[2] * z3 + k[3]).is_multiple_of(2)
        })
        .count() as u32
}

/// Closed form `2(|tr M| + S)`, or infinity when `tr M = 0`.
pub fn r_number_d3f2(k: &[BigInt], m: &IntMatrix, d: &[BigInt]) -> Result<ReidemeisterValue> {
    let conds = check_conditions_d3f2(k, m, d)?;
    if let Some(c) = conds.first_failure() {
        return Err(Error::InvalidAutomorphism { condition: c.into(), detail: "parameters do not define an automorphism".into() });
    }
    let tr = m.trace();
    if tr.is_zero() {
        return Ok(ReidemeisterValue::Infinite);
    }
    let s = compute_s(parities(k), mod2(m)?, Mod2Vector::from_ints(d)?);
    Ok(ReidemeisterValue::Finite(BigInt::from(2) * (tr.abs() + s)))
}

/// Reidemeister number on `Gamma / <e1>`: `|tr M| + O(1 - M, d)`.
pub fn r_number_quotient(m: &IntMatrix, d: &[BigInt]) -> Result<ReidemeisterValue> {
    let tr = m.trace();
    if tr.is_zero() {
        return Ok(ReidemeisterValue::Infinite);
    }
    let a = Mod2Matrix::IDENTITY.add(&mod2(m)?);
    let o = count_solutions_gf2(&a, Mod2Vector::from_ints(d)?);
    Ok(ReidemeisterValue::Finite(tr.abs() + o))
}

/// The progression that contains every finite `R` for rows with this `M` and `S`.
pub fn residue_set_for(mbar: Mod2Matrix, s: u32) -> ResidueClassSet {
    let s2 = 2 * s as i64;
    let p = if mbar == Mod2Matrix::IDENTITY {
        Progression { step: 8, offset: s2 }
    } else if mbar.trace() == 0 {
        Progression { step: 4, offset: s2 }
    } else {
        Progression { step: 4, offset: s2 - 2 }
    };
    ResidueClassSet::single(p)
}

/// Union of the row sets of the enumeration, together with infinity.
pub fn spectrum_d3f2(k: Parity4) -> ResidueClassSet {
    let rows = make_list(k);
    ResidueClassSet::from_progressions(rows.iter().flat_map(|r| r.rset.progressions().to_vec()), true)
}

#[derive(Clone, Debug, Serialize)]
pub struct KnownSpectrum {
    pub group: &'static str,
    pub description: &'static str,
    pub spectrum: ResidueClassSet,
}

fn prog(step: i64) -> Progression {
    Progression { step, offset: 0 }
}

/// Spectra that are recorded here as constants rather than computed.
pub fn known_spectra() -> Vec<KnownSpectrum> {
    let with_inf = |step| ResidueClassSet::single(prog(step)).with_infinity(true);
    vec![
        KnownSpectrum {
            group: "d3f1",
            description: "3-dimensional family 1: the nilpotent groups of class 2 themselves",
            spectrum: with_inf(2),
        },
        KnownSpectrum {
            group: "d4f1",
            description: "4-dimensional family 1: torsion-free nilpotent of class 3 and rank 4",
            spectrum: with_inf(4),
        },
        KnownSpectrum {
            group: "d4f4 (k,0,0,0)",
            description: "family 4 almost-Bieberbach groups, first case",
            spectrum: with_inf(4),
        },
        KnownSpectrum {
            group: "d4f4 (2k,1,0,0)",
            description: "family 4 almost-Bieberbach groups, second case",
            spectrum: with_inf(8),
        },
        KnownSpectrum {
            group: "class 3, rank 4",
            description: "4-dimensional groups with translation subgroup of class 3 have the R-infinity property",
            spectrum: ResidueClassSet::infinity_only(),
        },
    ]
}

/// Outcome of [`rinfty_family_evidence`]. Sampling gives evidence, not proof.
#[derive(Clone, Debug, Serialize)]
pub struct RinftyEvidence {
    pub family: Family,
    pub seed: u64,
    pub requested: usize,
    pub attempts: usize,
    pub valid: usize,
    pub counterexamples: Vec<String>,
    pub label: &'static str,
}

impl RinftyEvidence {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty() && self.valid == self.requested
    }
}

/// Draws automorphisms of random groups in the family and checks that each
/// has `R = infinity`. Stops after `budget` valid automorphisms, or after
/// `50 * budget` attempts.
pub fn rinfty_family_evidence(family: Family, budget: usize, seed: u64) -> Result<RinftyEvidence> {
    if family.alpha_order() == 1 {
        return Err(Error::NotApplicable(format!("family {family} has trivial holonomy")));
    }
    if !matches!(family, Family::D4F2 | Family::D4F143 | Family::D4F146) {
        return Err(Error::NotApplicable(format!("no sampler for family {family}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = RinftyEvidence {
        family,
        seed,
        requested: budget,
        attempts: 0,
        valid: 0,
        counterexamples: Vec::new(),
        label: "evidence, not proof",
    };
    while report.valid < budget && report.attempts < 50 * budget.max(1) {
        report.attempts += 1;
        let candidate = match family {
            Family::D4F2 => sample_d4f2(&mut rng)?,
            _ => sample_d4f143(family, &mut rng)?,
        };
        let Some(aut) = candidate else { continue };
        report.valid += 1;
        if !rinfty_for(&aut)? {
            report.counterexamples.push(format!("{} with images {:?}", aut.spec(), aut.images()));
        }
    }
    Ok(report)
}

fn bigs(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn random_gl2(rng: &mut ChaCha8Rng) -> [[i64; 2]; 2] {
    loop {
        let m: [[i64; 2]; 2] = [[rng.gen_range(-2..=2), rng.gen_range(-2..=2)], [rng.gen_range(-2..=2), rng.gen_range(-2..=2)]];
        if (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs() == 1 {
            return m;
        }
    }
}

/// Candidate for family 2: the lattice part `D'` fixes the centre direction
/// `g` up to sign and acts on the rest through some `S` in `GL_2(Z)`; this
/// forces `phi(e1) = e1^det(S)`.
fn sample_d4f2(rng: &mut ChaCha8Rng) -> Result<Option<Automorphism>> {
    let mut k: Vec<i64> = (0..7).map(|_| rng.gen_range(-3..=3)).collect();
    if k[..3].iter().all(|&x| x == 0) {
        k[rng.gen_range(0..3)] = *[-2, -1, 1, 2].choose(rng).expect("non-empty");
    }
    let spec = ACGroupSpec::new(Family::D4F2, bigs(&k))?;
    let kernel = integer_kernel(&spec.nil_params().commutator_form());
    let g = kernel.first().ok_or_else(|| Error::Inconsistent("commutator form has no kernel".into()))?;
    let q = unimodular_completion(g)?;
    let qinv = q.to_rational().inverse().and_then(|m| m.to_integer()).ok_or_else(|| Error::Inconsistent("completion is not unimodular".into()))?;
    let s = random_gl2(rng);
    let eps: i64 = *[-1, 1].choose(rng).expect("non-empty");
    let p = IntMatrix::from_rows(&[
        [eps, rng.gen_range(-2..=2), rng.gen_range(-2..=2)],
        [0, s[0][0], s[0][1]],
        [0, s[1][0], s[1][1]],
    ]);
    let dprime = &(&q * &p) * &qinv;
    let sigma = s[0][0] * s[1][1] - s[0][1] * s[1][0];
    let t: Vec<i64> = (0..3).map(|_| rng.gen_range(-2..=2)).collect();
    let lattice: Vec<Vec<BigInt>> = (0..3).map(|c| dprime.column(c)).collect();
    complete_images(&spec, sigma, &lattice, &bigs(&t), 1, rng)
}

/// Candidate for families 143/146: `e2` spans the centre of `N` modulo `e1`,
/// so `D'` is block triangular with a `2 x 2` block `C` that intertwines the
/// order-3 rotation with its `delta`-th power.
fn sample_d4f143(family: Family, rng: &mut ChaCha8Rng) -> Result<Option<Automorphism>> {
    let mut k: Vec<i64> = (0..4).map(|_| rng.gen_range(-3..=3)).collect();
    if k[0] == 0 {
        k[0] = *[-2, -1, 1, 2].choose(rng).expect("non-empty");
    }
    let spec = ACGroupSpec::new(family, bigs(&k))?;
    let delta: usize = rng.gen_range(1..=2);
    let rot = [[0, -1], [1, -1]];
    let mul = |a: [[i64; 2]; 2], b: [[i64; 2]; 2]| {
        [
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ]
    };
    let rot_d = if delta == 1 { rot } else { mul(rot, rot) };
    let mut blocks = Vec::new();
    for e in 0..81 {
        let v: Vec<i64> = (0..4).map(|i| (e / 3i64.pow(i)) % 3 - 1).collect();
        let c = [[v[0], v[1]], [v[2], v[3]]];
        if (c[0][0] * c[1][1] - c[0][1] * c[1][0]).abs() == 1 && mul(rot_d, c) == mul(c, rot) {
            blocks.push(c);
        }
    }
    let c = *blocks.choose(rng).ok_or_else(|| Error::Inconsistent("no intertwining block".into()))?;
    let sigma = c[0][0] * c[1][1] - c[0][1] * c[1][0];
    let s2: i64 = *[-1, 1].choose(rng).expect("non-empty");
    // e2-components of the images of e3, e4 and of alpha are found below.
    let lattice = vec![bigs(&[s2, 0, 0]), bigs(&[0, c[0][0], c[1][0]]), bigs(&[0, c[0][1], c[1][1]])];
    let t = bigs(&[0, rng.gen_range(-2..=2), rng.gen_range(-2..=2)]);
    complete_images(&spec, sigma, &lattice, &t, delta, rng)
}

/// Images from lattice data: `phi(e1) = e1^sigma`, `phi(e_i)` has lattice
/// part `lattice[i-2]`, `phi(alpha)` has lattice part `t` and holonomy
/// exponent `delta`. The `e2`-entries of the images of `e3`, `e4`, `alpha`
/// (families 143/146 only) and all `e1`-exponents are then solved for:
/// relation defects are affine in them, so the coefficients are read off
/// from unit perturbations and solutions are searched in a small box.
fn complete_images(
    spec: &ACGroupSpec,
    sigma: i64,
    lattice: &[Vec<BigInt>],
    t: &[BigInt],
    delta: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Automorphism>> {
    let r = spec.rank();
    let mut base: Vec<ACElement> = Vec::with_capacity(r + 1);
    base.push(ACElement::translation(NilElement::generator(r, 0, sigma)));
    for col in lattice {
        let mut exps = vec![BigInt::zero()];
        exps.extend(col.iter().cloned());
        base.push(ACElement::translation(NilElement { exps }));
    }
    let mut exps = vec![BigInt::zero()];
    exps.extend(t.iter().cloned());
    base.push(ACElement::new(NilElement { exps }, delta));

    // Stage 1: lattice unknowns, against lattice defects.
    let lattice_unknowns: Vec<(usize, usize)> = match spec.family() {
        Family::D4F143 | Family::D4F146 => vec![(2, 1), (3, 1), (4, 1)],
        _ => Vec::new(),
    };
    let lattice_defect = |imgs: &[ACElement]| -> Result<Option<Vec<BigInt>>> {
        let mut out = Vec::new();
        for (_, l, rr) in spec.relation_sides(imgs)? {
            if l.eps != rr.eps {
                return Ok(None);
            }
            out.extend(l.nil.exps[1..].iter().zip(&rr.nil.exps[1..]).map(|(a, b)| a - b));
        }
        Ok(Some(out))
    };
    let Some(base) = solve_affine(&base, &lattice_unknowns, 3, &lattice_defect, rng)? else {
        return Ok(None);
    };

    // Stage 2: central exponents, against central defects.
    let central_unknowns: Vec<(usize, usize)> = (1..=r).map(|i| (i, 0)).collect();
    let central_defect = |imgs: &[ACElement]| -> Result<Option<Vec<BigInt>>> {
        let mut out = Vec::new();
        for (_, l, rr) in spec.relation_sides(imgs)? {
            if l.eps != rr.eps || l.nil.exps[1..] != rr.nil.exps[1..] {
                return Ok(None);
            }
            out.push(&l.nil.exps[0] - &rr.nil.exps[0]);
        }
        Ok(Some(out))
    };
    let Some(images) = solve_affine(&base, &central_unknowns, 4, &central_defect, rng)? else {
        return Ok(None);
    };
    match Automorphism::new(spec.clone(), images) {
        Ok(aut) => Ok(Some(aut)),
        Err(Error::InvalidAutomorphism { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

type DefectFn<'a> = dyn Fn(&[ACElement]) -> Result<Option<Vec<BigInt>>> + 'a;

/// Finds values for the listed `(image, coordinate)` entries (added to
/// `base`) that make the affine defect vanish; picks one solution at random.
/// Unknowns not pinned by a single-variable row range over `[-bound, bound]`.
fn solve_affine(
    base: &[ACElement],
    unknowns: &[(usize, usize)],
    bound: i64,
    defect: &DefectFn<'_>,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Vec<ACElement>>> {
    let shifted = |values: &[i64]| {
        let mut imgs = base.to_vec();
        for (&(i, c), &v) in unknowns.iter().zip(values) {
            imgs[i].nil.exps[c] += v;
        }
        imgs
    };
    let Some(d0) = defect(base)? else { return Ok(None) };
    let d0: Vec<i64> = match d0.iter().map(|x| x.to_i64()).collect::<Option<Vec<_>>>() {
        Some(v) => v,
        None => return Ok(None),
    };
    let mut coeffs: Vec<Vec<i64>> = Vec::new();
    for j in 0..unknowns.len() {
        let mut unit = vec![0; unknowns.len()];
        unit[j] = 1;
        let Some(dj) = defect(&shifted(&unit))? else { return Ok(None) };
        coeffs.push(dj.iter().zip(&d0).map(|(a, b)| a.to_i64().unwrap_or(i64::MAX) - b).collect());
    }
    let n = unknowns.len();
    // Rows with one nonzero coefficient pin that unknown; rows whose
    // coefficients' gcd does not divide the constant have no solution.
    let mut fixed: Vec<Option<i64>> = vec![None; n];
    for (row, &c0) in d0.iter().enumerate() {
        let g = coeffs.iter().fold(0i64, |g, c| g.gcd(&c[row]));
        if g == 0 {
            if c0 != 0 {
                return Ok(None);
            }
            continue;
        }
        if c0 % g != 0 {
            return Ok(None);
        }
        let nonzero: Vec<usize> = (0..n).filter(|&j| coeffs[j][row] != 0).collect();
        if let [j] = nonzero[..] {
            let v = -c0 / coeffs[j][row];
            match fixed[j] {
                Some(w) if w != v => return Ok(None),
                _ => fixed[j] = Some(v),
            }
        }
    }
    let free: Vec<usize> = (0..n).filter(|&j| fixed[j].is_none()).collect();
    let width = (2 * bound + 1) as usize;
    let total = width.pow(free.len() as u32);
    let mut values: Vec<i64> = fixed.iter().map(|v| v.unwrap_or(0)).collect();
    let mut solutions = Vec::new();
    for code in 0..total {
        for (pos, &j) in free.iter().enumerate() {
            values[j] = ((code / width.pow(pos as u32)) % width) as i64 - bound;
        }
        let ok = (0..d0.len()).all(|row| {
            d0[row] + values.iter().zip(&coeffs).map(|(v, c)| v * c[row]).sum::<i64>() == 0
        });
        if ok {
            solutions.push(values.clone());
        }
    }
    let Some(values) = solutions.choose(rng) else { return Ok(None) };
    let imgs = shifted(values);
    // The affine model is checked, not trusted.
    match defect(&imgs)? {
        Some(d) if d.iter().all(Zero::is_zero) => Ok(Some(imgs)),
        _ => Ok(None),
    }
}
