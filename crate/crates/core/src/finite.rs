//! Finite groups given by index arithmetic, and twisted-conjugacy class
//! counting on them.

use crate::error::{Error, Result};

/// A finite group on the index set `0..order()`.
pub trait FiniteGroup {
    fn order(&self) -> usize;
    fn identity(&self) -> usize;
    fn multiply(&self, a: usize, b: usize) -> usize;
    fn inverse(&self, a: usize) -> usize;
    /// A generating set. Defaults to every element.
    fn generators(&self) -> Vec<usize> {
        (0..self.order()).collect()
    }
}

/// A group stored as an explicit multiplication table.
#[derive(Clone, Debug)]
pub struct FiniteGroupTable {
    n: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
    identity: usize,
    generators: Option<Vec<usize>>,
}

impl FiniteGroupTable {
    /// Validates closure, associativity, identity and inverses. The
    /// associativity check is cubic in the order.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidParameters("multiplication table must be square and non-empty".into()));
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return Err(Error::InvalidParameters("table entry out of range".into()));
        }
        let flat: Vec<u32> = table.iter().flatten().map(|&x| x as u32).collect();
        let at = |a: usize, b: usize| flat[a * n + b] as usize;
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::InvalidParameters("no identity element".into()))?;
        let mut inv = vec![0u32; n];
        for a in 0..n {
            let b = (0..n)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or_else(|| Error::InvalidParameters(format!("element {a} has no inverse")))?;
            inv[a] = b as u32;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::InvalidParameters(format!("not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(FiniteGroupTable { n, table: flat, inv, identity, generators: None })
    }

    /// Materializes any finite group as a table.
    pub fn from_group<G: FiniteGroup + ?Sized>(g: &G) -> Result<Self> {
        let n = g.order();
        let table = (0..n).map(|a| (0..n).map(|b| g.multiply(a, b)).collect()).collect();
        let mut t = Self::from_table(table)?;
        t.generators = Some(g.generators());
        Ok(t)
    }

    /// `Z/n` under addition.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let mut t = Self::from_table(table).expect("cyclic group table");
        t.generators = Some(vec![1 % n]);
        t
    }

    pub fn with_generators(mut self, generators: Vec<usize>) -> Self {
        self.generators = Some(generators);
        self
    }
}

impl FiniteGroup for FiniteGroupTable {
    fn order(&self) -> usize {
        self.n
    }

    fn identity(&self) -> usize {
        self.identity
    }

    fn multiply(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    fn inverse(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    fn generators(&self) -> Vec<usize> {
        self.generators.clone().unwrap_or_else(|| (0..self.n).collect())
    }
}

pub struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect(), rank: vec![0; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb as u32,
            std::cmp::Ordering::Greater => self.parent[rb] = ra as u32,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra as u32;
                self.rank[ra] += 1;
            }
        }
    }

    pub fn count_roots(&mut self) -> usize {
        (0..self.parent.len()).filter(|&i| self.find(i) == i).count()
    }
}

/// Checks that `images[x]` defines an endomorphism: `phi(g x) = phi(g) phi(x)`
/// for every generator `g` and every `x`.
pub fn check_endomorphism<G: FiniteGroup + ?Sized>(group: &G, images: &[usize]) -> Result<()> {
    let n = group.order();
    if images.len() != n || images.iter().any(|&x| x >= n) {
        return Err(Error::InvalidParameters("image array does not match the group".into()));
    }
    for g in group.generators() {
        for x in 0..n {
            if images[group.multiply(g, x)] != group.multiply(images[g], images[x]) {
                return Err(Error::InvalidParameters(format!(
                    "image array is not a homomorphism at generator {g}, element {x}"
                )));
            }
        }
    }
    Ok(())
}

/// Number of classes of `x ~ h x phi(h)^-1`.
///
/// The relation is the orbit relation of an action of the group, so it is
/// enough to join `x` with `g x phi(g)^-1` for generators `g`.
pub fn twisted_classes_finite<G: FiniteGroup + ?Sized>(group: &G, images: &[usize]) -> usize {
    let n = group.order();
    let mut uf = UnionFind::new(n);
    for g in group.generators() {
        let twist = group.inverse(images[g]);
        for x in 0..n {
            let y = group.multiply(group.multiply(g, x), twist);
            uf.union(x, y);
        }
    }
    uf.count_roots()
}

/// Same count, joining over every pair `(x, h)`. Quadratic; for cross-checks.
pub fn twisted_classes_all_pairs<G: FiniteGroup + ?Sized>(group: &G, images: &[usize]) -> usize {
    let n = group.order();
    let mut uf = UnionFind::new(n);
    for h in 0..n {
        let twist = group.inverse(images[h]);
        for x in 0..n {
            uf.union(x, group.multiply(group.multiply(h, x), twist));
        }
    }
    uf.count_roots()
}

/// Ordinary conjugacy classes by direct orbit enumeration.
pub fn conjugacy_class_count<G: FiniteGroup + ?Sized>(group: &G) -> usize {
    let n = group.order();
    let mut seen = vec![false; n];
    let mut classes = 0;
    for x in 0..n {
        if seen[x] {
            continue;
        }
        classes += 1;
        for h in 0..n {
            let c = group.multiply(group.multiply(h, x), group.inverse(h));
            seen[c] = true;
        }
    }
    classes
}

#[cfg(test)]
mod tests {
    use super::*;

    /// S3 as permutations of {0,1,2}, elements in lexicographic order.
    fn s3() -> FiniteGroupTable {
        let perms: Vec<[usize; 3]> =
            vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let table = perms
            .iter()
            .map(|a| perms.iter().map(|b| idx([a[b[0]], a[b[1]], a[b[2]]])).collect())
            .collect();
        FiniteGroupTable::from_table(table).unwrap()
    }

    #[test]
    fn cyclic_examples() {
        let z5 = FiniteGroupTable::cyclic(5);
        let identity: Vec<usize> = (0..5).collect();
        assert_eq!(twisted_classes_finite(&z5, &identity), 5);
        let inversion: Vec<usize> = (0..5).map(|x| (5 - x) % 5).collect();
        check_endomorphism(&z5, &inversion).unwrap();
        assert_eq!(twisted_classes_finite(&z5, &inversion), 1);
    }

    #[test]
    fn identity_twist_counts_conjugacy_classes() {
        let g = s3();
        let id: Vec<usize> = (0..6).collect();
        assert_eq!(conjugacy_class_count(&g), 3);
        assert_eq!(twisted_classes_finite(&g, &id), 3);
        assert_eq!(twisted_classes_all_pairs(&g, &id), 3);
    }

    #[test]
    fn inner_twist_matches_all_pairs() {
        let g = s3();
        // Conjugation by the transposition at index 1.
        let t = 1;
        let images: Vec<usize> = (0..6).map(|x| g.multiply(g.multiply(t, x), g.inverse(t))).collect();
        check_endomorphism(&g, &images).unwrap();
        assert_eq!(twisted_classes_finite(&g, &images), twisted_classes_all_pairs(&g, &images));
    }

    #[test]
    fn rejects_non_groups() {
        assert!(FiniteGroupTable::from_table(vec![vec![0, 0], vec![0, 0]]).is_err());
        assert!(FiniteGroupTable::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
        let z4 = FiniteGroupTable::cyclic(4);
        assert!(check_endomorphism(&z4, &[0, 2, 1, 3]).is_err());
    }
}
