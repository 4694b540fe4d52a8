//! Exact integer, rational and GF(2) matrices.
//!
//! Everything here is small (at most 8x8) and exact; there is no floating
//! point anywhere in the crate.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest matrix size the determinant routines accept.
pub const MAX_DIM: usize = 8;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from nested rows of `i64`. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.as_ref().len(), c, "ragged matrix literal");
            data.extend(row.as_ref().iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix { rows: r, cols: c, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<BigInt>]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            if col.len() != r {
                return Err(Error::Dimension("columns of unequal length".into()));
            }
            for (i, x) in col.iter().enumerate() {
                m.data[i * c + j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// The `nr x nc` block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        let mut b = Self::zeros(nr, nc);
        for i in 0..nr {
            for j in 0..nc {
                b.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        b
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect())
    }

    pub fn checked_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, rhs: &IntMatrix, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Result<IntMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn checked_add(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn checked_sub(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn pow(&self, n: u32) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(Error::Dimension("power of a non-square matrix".into()));
        }
        let mut acc = Self::identity(self.rows);
        for _ in 0..n {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| BigRational::from_integer(x.clone())).collect(),
        }
    }

    /// Entries as `i64`, if they all fit.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.data.iter().map(ToPrimitive::to_i64).collect()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("matrix dimensions")
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;
    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_add(rhs).expect("matrix dimensions")
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;
    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_sub(rhs).expect("matrix dimensions")
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("determinant of a {}x{} matrix", m.rows, m.cols)));
    }
    let n = m.rows;
    if n > MAX_DIM {
        return Err(Error::Dimension(format!("{n}x{n} exceeds the supported size {MAX_DIM}")));
    }
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j).clone()).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(sign * &a[n - 1][n - 1])
}

/// `det(1 - m) == 0`.
pub fn has_eigenvalue_one(m: &IntMatrix) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::Dimension("eigenvalue test on a non-square matrix".into()));
    }
    let shifted = &IntMatrix::identity(m.rows) - m;
    Ok(det(&shifted)?.is_zero())
}

/// Lattice basis of the integer kernel `{x in Z^c : m x = 0}`.
///
/// Unimodular column operations bring `m` to column echelon form; the
/// matching columns of the accumulated transform that map to zero span the
/// kernel. Each returned vector is primitive and its first nonzero entry is
/// positive.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (r, c) = (m.rows, m.cols);
    let mut work: Vec<Vec<BigInt>> = (0..c).map(|j| m.column(j)).collect();
    let mut transform: Vec<Vec<BigInt>> = (0..c)
        .map(|j| (0..c).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut pivot_col = 0;
    for row in 0..r {
        if pivot_col >= c {
            break;
        }
        loop {
            // Euclid on the entries of `row` among the remaining columns.
            let nonzero: Vec<usize> = (pivot_col..c).filter(|&j| !work[j][row].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            let best = *nonzero.iter().min_by_key(|&&j| work[j][row].abs()).unwrap();
            work.swap(pivot_col, best);
            transform.swap(pivot_col, best);
            let mut done = true;
            for j in pivot_col + 1..c {
                if work[j][row].is_zero() {
                    continue;
                }
                let q = work[j][row].div_floor(&work[pivot_col][row]);
                for i in 0..r {
                    let t = &q * &work[pivot_col][i];
                    work[j][i] -= t;
                }
                for i in 0..c {
                    let t = &q * &transform[pivot_col][i];
                    transform[j][i] -= t;
                }
                if !work[j][row].is_zero() {
                    done = false;
                }
            }
            if done {
                pivot_col += 1;
                break;
            }
        }
    }
    transform[pivot_col..]
        .iter()
        .map(|v| {
            let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            let mut v: Vec<BigInt> = if g.is_zero() { v.clone() } else { v.iter().map(|x| x / &g).collect() };
            if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                v.iter_mut().for_each(|x| *x = -x.clone());
            }
            v
        })
        .collect()
}

/// A unimodular matrix whose first column is `v`. `v` must be primitive.
pub fn unimodular_completion(v: &[BigInt]) -> Result<IntMatrix> {
    let n = v.len();
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_one() {
        return Err(Error::InvalidParameters(format!("vector {v:?} is not primitive")));
    }
    // Row-reduce v to e_1 while recording the inverse operations as column
    // operations on an identity matrix.
    let mut w = v.to_vec();
    let mut q = IntMatrix::identity(n);
    loop {
        let nonzero: Vec<usize> = (0..n).filter(|&i| !w[i].is_zero()).collect();
        let p = *nonzero.iter().min_by_key(|&&i| w[i].abs()).unwrap();
        if nonzero.len() == 1 {
            if p != 0 {
                w.swap(0, p);
                for i in 0..n {
                    let a = q.get(i, 0).clone();
                    let b = q.get(i, p).clone();
                    q.set(i, 0, b);
                    q.set(i, p, a);
                }
            }
            if w[0].is_negative() {
                for i in 0..n {
                    let a = -q.get(i, 0).clone();
                    q.set(i, 0, a);
                }
            }
            return Ok(q);
        }
        for &i in &nonzero {
            if i == p {
                continue;
            }
            // row_i -= k * row_p  is undone by  col_p += k * col_i.
            let k = w[i].div_floor(&w[p]);
            let t = &k * &w[p];
            w[i] -= t;
            for r in 0..n {
                let t = q.get(r, p) + &k * q.get(r, i);
                q.set(r, p, t);
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        let mut b = Self::zeros(nr, nc);
        for i in 0..nr {
            for j in 0..nc {
                b.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        b
    }

    pub fn checked_mul(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a.get(col, col).clone();
            for j in 0..n {
                let x = a.get(col, j) / &p;
                a.set(col, j, x);
                let y = inv.get(col, j) / &p;
                inv.set(col, j, y);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    let x = a.get(r, j) - &f * a.get(col, j);
                    a.set(r, j, x);
                    let y = inv.get(r, j) - &f * inv.get(col, j);
                    inv.set(r, j, y);
                }
            }
        }
        Some(inv)
    }

    /// Integer power; negative exponents go through the inverse.
    pub fn pow(&self, n: &BigInt) -> Option<RatMatrix> {
        let base = if n.is_negative() { self.inverse()? } else { self.clone() };
        let mut e = n.abs();
        let mut acc = Self::identity(self.rows);
        let mut sq = base;
        let two = BigInt::from(2);
        while !e.is_zero() {
            if e.is_odd() {
                acc = acc.checked_mul(&sq).ok()?;
            }
            e /= &two;
            if !e.is_zero() {
                sq = sq.checked_mul(&sq).ok()?;
            }
        }
        Some(acc)
    }

    /// Exact determinant by Gaussian elimination over the rationals.
    pub fn det(&self) -> Result<BigRational> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut d = BigRational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return Ok(BigRational::zero());
            };
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                }
                d = -d;
            }
            let p = a.get(col, col).clone();
            d *= &p;
            for r in col + 1..n {
                let f = a.get(r, col) / &p;
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let x = a.get(r, j) - &f * a.get(col, j);
                    a.set(r, j, x);
                }
            }
        }
        Ok(d)
    }

    /// The integer matrix with the same entries, if all are integral.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        let data = self
            .data
            .iter()
            .map(|x| if x.is_integer() { Some(x.to_integer()) } else { None })
            .collect::<Option<Vec<_>>>()?;
        Some(IntMatrix { rows: self.rows, cols: self.cols, data })
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;
    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        self.checked_mul(rhs).expect("matrix dimensions")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mod2Vector(pub [u8; 2]);

impl Mod2Vector {
    pub fn new(a: u8, b: u8) -> Self {
        Mod2Vector([a & 1, b & 1])
    }

    pub fn all() -> impl Iterator<Item = Mod2Vector> {
        (0..4u8).map(|i| Mod2Vector::new(i >> 1, i))
    }

    pub fn from_ints(v: &[BigInt]) -> Result<Self> {
        match v {
            [a, b] => Ok(Mod2Vector::new(parity(a), parity(b))),
            _ => Err(Error::Dimension(format!("expected a 2-vector, got length {}", v.len()))),
        }
    }
}

impl fmt::Debug for Mod2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0[0], self.0[1])
    }
}

/// 2x2 matrix over GF(2), stored row-major.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mod2Matrix(pub [[u8; 2]; 2]);

impl Mod2Matrix {
    pub const IDENTITY: Mod2Matrix = Mod2Matrix([[1, 0], [0, 1]]);

    pub fn new(rows: [[u8; 2]; 2]) -> Self {
        Mod2Matrix(rows.map(|r| r.map(|x| x & 1)))
    }

    /// All sixteen 2x2 matrices in row-major lexicographic order.
    pub fn all() -> impl Iterator<Item = Mod2Matrix> {
        (0..16u8).map(|i| Mod2Matrix::new([[i >> 3, i >> 2], [i >> 1, i]]))
    }

    /// The six invertible ones, same order.
    pub fn general_linear() -> impl Iterator<Item = Mod2Matrix> {
        Self::all().filter(|m| m.det() == 1)
    }

    pub fn det(&self) -> u8 {
        let [[a, b], [c, d]] = self.0;
        (a * d + b * c) & 1
    }

    pub fn trace(&self) -> u8 {
        (self.0[0][0] + self.0[1][1]) & 1
    }

    pub fn rank(&self) -> u8 {
        if self.det() == 1 {
            2
        } else if self.0.iter().flatten().any(|&x| x == 1) {
            1
        } else {
            0
        }
    }

    pub fn mul_vec(&self, v: Mod2Vector) -> Mod2Vector {
        let [[a, b], [c, d]] = self.0;
        let [x, y] = v.0;
        Mod2Vector::new(a * x + b * y, c * x + d * y)
    }

    pub fn add(&self, rhs: &Mod2Matrix) -> Mod2Matrix {
        let mut out = [[0u8; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = self.0[i][j] ^ rhs.0[i][j];
            }
        }
        Mod2Matrix(out)
    }

    pub fn mul(&self, rhs: &Mod2Matrix) -> Mod2Matrix {
        let mut out = [[0u8; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = (self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j]) & 1;
            }
        }
        Mod2Matrix(out)
    }
}

impl fmt::Debug for Mod2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.0;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

pub fn parity(x: &BigInt) -> u8 {
    if x.is_odd() {
        1
    } else {
        0
    }
}

/// Entrywise reduction of a 2x2 integer matrix.
pub fn mod2(m: &IntMatrix) -> Result<Mod2Matrix> {
    if m.rows != 2 || m.cols != 2 {
        return Err(Error::Dimension(format!("mod2 expects 2x2, got {}x{}", m.rows, m.cols)));
    }
    Ok(Mod2Matrix::new([
        [parity(m.get(0, 0)), parity(m.get(0, 1))],
        [parity(m.get(1, 0)), parity(m.get(1, 1))],
    ]))
}

/// `#{x in GF(2)^2 : a x = b}` by enumeration.
pub fn count_solutions_gf2(a: &Mod2Matrix, b: Mod2Vector) -> u32 {
    Mod2Vector::all().filter(|&x| a.mul_vec(x) == b).count() as u32
}
