//! Enumeration of admissible `(M mod 2, d mod 2)` per parity class of
//! `(k1, k2, k3, k4)`, and comparison against the stored tables.

use std::collections::BTreeSet;
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::automorphisms::{build_d3f2, check_conditions_d3f2};
use crate::error::{Error, Result};
use crate::linalg::{parity, IntMatrix, Mod2Matrix, Mod2Vector};
use crate::progression::{Progression, ResidueClassSet};
use crate::reidemeister::{compute_s, r_number_d3f2, residue_set_for, spectrum_d3f2, ReidemeisterValue};

/// `(k1, k2, k3, k4) mod 2`.
pub type Parity4 = [u8; 4];

pub fn parities(k: &[BigInt]) -> Parity4 {
    let mut p = [0u8; 4];
    for (pi, ki) in p.iter_mut().zip(k) {
        *pi = parity(ki);
    }
    p
}

/// The parity classes with a stored table, in table order. The other four
/// are isomorphic to one of these via `(k1,k2,k3,k4) -> (-k1,k3,k2,k4)`.
pub const TABLE_KEYS: [Parity4; 12] = [
    [0, 0, 0, 0],
    [0, 0, 0, 1],
    [0, 0, 1, 0],
    [0, 0, 1, 1],
    [0, 1, 1, 0],
    [0, 1, 1, 1],
    [1, 0, 0, 0],
    [1, 0, 0, 1],
    [1, 0, 1, 0],
    [1, 0, 1, 1],
    [1, 1, 1, 0],
    [1, 1, 1, 1],
];

pub const TABLE_ROW_COUNTS: [usize; 12] = [24, 24, 4, 4, 4, 4, 6, 6, 6, 6, 6, 6];

/// Parities of the isomorphic parameter tuple `(-k1, k3, k2, k4)`.
pub fn swap_parities(k: Parity4) -> Parity4 {
    [k[0], k[2], k[1], k[3]]
}

/// The key with a stored table for `k`, and whether the swap was needed.
pub fn canonical_key(k: Parity4) -> (Parity4, bool) {
    if TABLE_KEYS.contains(&k) {
        (k, false)
    } else {
        (swap_parities(k), true)
    }
}

pub fn key_string(k: Parity4) -> String {
    k.iter().map(|b| char::from(b'0' + b)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MakeListRow {
    pub mbar: Mod2Matrix,
    pub dbar: Mod2Vector,
    pub s: u32,
    pub rset: ResidueClassSet,
}

impl MakeListRow {
    pub fn progression(&self) -> Progression {
        self.rset.progressions()[0]
    }
}

fn lift(v: u8) -> BigInt {
    BigInt::from(v)
}

/// Conditions (a)-(c) on the 0/1 lifts.
fn parity_conditions_hold(k: Parity4, mbar: Mod2Matrix, dbar: Mod2Vector) -> bool {
    let kk: Vec<BigInt> = k.iter().map(|&x| lift(x)).collect();
    let [[m1, m3], [m2, m4]] = mbar.0;
    let m = IntMatrix::from_rows(&[[m1 as i64, m3 as i64], [m2 as i64, m4 as i64]]);
    let d = [lift(dbar.0[0]), lift(dbar.0[1])];
    let c = check_conditions_d3f2(&kk, &m, &d).expect("fixed shapes");
    c.a && c.b && c.c
}

/// Rows for one parity class: `M` over `GL_2(Z_2)` in row-major
/// lexicographic order, then `d` lexicographically.
pub fn make_list(k: Parity4) -> Vec<MakeListRow> {
    let k = k.map(|x| x & 1);
    let mut rows = Vec::new();
    for mbar in Mod2Matrix::general_linear() {
        for dbar in Mod2Vector::all() {
            if parity_conditions_hold(k, mbar, dbar) {
                let s = compute_s(k, mbar, dbar);
                rows.push(MakeListRow { mbar, dbar, s, rset: residue_set_for(mbar, s) });
            }
        }
    }
    rows
}

pub fn spectrum_from_rows(rows: &[MakeListRow]) -> ResidueClassSet {
    ResidueClassSet::from_progressions(rows.iter().flat_map(|r| r.rset.progressions().to_vec()), false)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GoldenRow {
    #[serde(rename = "M")]
    pub m: [[u8; 2]; 2],
    pub d: [u8; 2],
    #[serde(rename = "R")]
    pub r: Progression,
}

impl GoldenRow {
    pub fn from_row(row: &MakeListRow) -> Self {
        GoldenRow { m: row.mbar.0, d: row.dbar.0, r: row.progression() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenTable {
    pub k: Parity4,
    pub rows: Vec<GoldenRow>,
}

impl GoldenTable {
    pub fn from_rows(k: Parity4, rows: &[MakeListRow]) -> Self {
        GoldenTable { k, rows: rows.iter().map(GoldenRow::from_row).collect() }
    }

    /// One row per line, the layout of the files in `golden/`.
    pub fn to_json(&self) -> String {
        let k: Vec<String> = self.k.iter().map(|x| x.to_string()).collect();
        let rows: Vec<String> =
            self.rows.iter().map(|r| format!("  {}", serde_json::to_string(r).expect("plain data"))).collect();
        format!("{{\"k\":[{}],\"rows\":[\n{}\n]}}\n", k.join(","), rows.join(",\n"))
    }
}

const EMBEDDED_TABLES: [&str; 12] = [
    include_str!("../golden/makelist_0000.json"),
    include_str!("../golden/makelist_0001.json"),
    include_str!("../golden/makelist_0010.json"),
    include_str!("../golden/makelist_0011.json"),
    include_str!("../golden/makelist_0110.json"),
    include_str!("../golden/makelist_0111.json"),
    include_str!("../golden/makelist_1000.json"),
    include_str!("../golden/makelist_1001.json"),
    include_str!("../golden/makelist_1010.json"),
    include_str!("../golden/makelist_1011.json"),
    include_str!("../golden/makelist_1110.json"),
    include_str!("../golden/makelist_1111.json"),
];

const EMBEDDED_WITNESSES: &str = include_str!("../golden/witnesses.json");

pub fn golden_file_name(k: Parity4) -> String {
    format!("makelist_{}.json", key_string(k))
}

fn parse_table(text: &str, origin: &str) -> Result<GoldenTable> {
    serde_json::from_str(text).map_err(|e| Error::Golden(format!("{origin}: {e}")))
}

/// The twelve stored tables, from `dir` if given, else the copies compiled
/// into the library.
pub fn load_golden_tables(dir: Option<&Path>) -> Result<Vec<GoldenTable>> {
    TABLE_KEYS
        .iter()
        .zip(EMBEDDED_TABLES)
        .map(|(&k, embedded)| {
            let table = match dir {
                Some(d) => {
                    let path = d.join(golden_file_name(k));
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Error::Golden(format!("{}: {e}", path.display())))?;
                    parse_table(&text, &path.display().to_string())?
                }
                None => parse_table(embedded, &golden_file_name(k))?,
            };
            if table.k != k {
                return Err(Error::Golden(format!(
                    "{} declares key {:?}",
                    golden_file_name(k),
                    table.k
                )));
            }
            Ok(table)
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TableDiff {
    pub k: Parity4,
    pub expected_rows: usize,
    pub computed_rows: usize,
    /// In the stored table but not computed.
    pub missing: Vec<GoldenRow>,
    /// Computed but not in the stored table.
    pub unexpected: Vec<GoldenRow>,
}

impl TableDiff {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.unexpected.is_empty() && self.expected_rows == self.computed_rows
    }
}

/// Set comparison of one stored table with a fresh enumeration.
pub fn diff_table(golden: &GoldenTable) -> TableDiff {
    let computed: BTreeSet<GoldenRow> = make_list(golden.k).iter().map(GoldenRow::from_row).collect();
    let stored: BTreeSet<GoldenRow> = golden.rows.iter().cloned().collect();
    TableDiff {
        k: golden.k,
        expected_rows: golden.rows.len(),
        computed_rows: computed.len(),
        missing: stored.difference(&computed).cloned().collect(),
        unexpected: computed.difference(&stored).cloned().collect(),
    }
}

/// Diffs for every stored table; all empty on success. Row counts are also
/// compared with the published sizes.
pub fn verify_tables(golden: &[GoldenTable]) -> Vec<TableDiff> {
    golden
        .iter()
        .map(|g| {
            let mut d = diff_table(g);
            if let Some(i) = TABLE_KEYS.iter().position(|&k| k == g.k) {
                d.expected_rows = d.expected_rows.max(TABLE_ROW_COUNTS[i]);
                if g.rows.len() != TABLE_ROW_COUNTS[i] {
                    d.expected_rows = TABLE_ROW_COUNTS[i];
                }
            }
            d
        })
        .collect()
}

/// One witness family: `M` entries and `R` are affine in `m >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRow {
    pub k: [i64; 4],
    /// Entry `[c0, c1]` stands for `c0 + c1 m`; layout `[[m1, m3], [m2, m4]]`.
    #[serde(rename = "M")]
    pub m: [[[i64; 2]; 2]; 2],
    pub d: [i64; 2],
    /// `R = a m + b`.
    #[serde(rename = "R")]
    pub r: [i64; 2],
    pub spectrum: Vec<Progression>,
}

impl WitnessRow {
    pub fn matrix(&self, m: i64) -> IntMatrix {
        let e = |i: usize, j: usize| self.m[i][j][0] + self.m[i][j][1] * m;
        IntMatrix::from_rows(&[[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn k_big(&self) -> Vec<BigInt> {
        self.k.iter().map(|&x| BigInt::from(x)).collect()
    }

    pub fn d_big(&self) -> Vec<BigInt> {
        self.d.iter().map(|&x| BigInt::from(x)).collect()
    }

    pub fn spectrum_set(&self) -> ResidueClassSet {
        ResidueClassSet::from_progressions(self.spectrum.iter().copied(), true)
    }
}

#[derive(Deserialize)]
struct WitnessFile {
    rows: Vec<WitnessRow>,
}

pub fn load_witnesses(dir: Option<&Path>) -> Result<Vec<WitnessRow>> {
    let text = match dir {
        Some(d) => {
            let path = d.join("witnesses.json");
            std::fs::read_to_string(&path).map_err(|e| Error::Golden(format!("{}: {e}", path.display())))?
        }
        None => EMBEDDED_WITNESSES.to_string(),
    };
    let f: WitnessFile = serde_json::from_str(&text).map_err(|e| Error::Golden(format!("witnesses.json: {e}")))?;
    Ok(f.rows)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct WitnessReport {
    pub rows_checked: usize,
    pub values_checked: usize,
    pub failures: Vec<String>,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every witness row and `m` in `ms`: the automorphism exists, its
/// closed-form `R` is `a m + b` and lies in the enumerated spectrum. Also
/// checks that `{a m + b : m >= 1}` is the stated spectrum and that the
/// stated spectrum is the enumerated one.
pub fn witness_check(rows: &[WitnessRow], ms: std::ops::RangeInclusive<i64>) -> WitnessReport {
    let mut report = WitnessReport::default();
    for row in rows {
        report.rows_checked += 1;
        let kb = row.k_big();
        let key = parities(&kb);
        let enumerated = spectrum_d3f2(key);
        let tag = key_string(key);
        if row.spectrum_set() != enumerated {
            report.failures.push(format!("{tag}: stated spectrum {} != enumerated {}", row.spectrum_set(), enumerated));
        }
        match Progression::new(row.r[0], row.r[1]) {
            Ok(p) if ResidueClassSet::single(p).with_infinity(true) == row.spectrum_set() => {}
            _ => report.failures.push(format!("{tag}: values {}m{:+} do not sweep the spectrum", row.r[0], row.r[1])),
        }
        for m in ms.clone() {
            report.values_checked += 1;
            let mat = row.matrix(m);
            if let Err(e) = build_d3f2(&kb, &mat, &row.d_big()) {
                report.failures.push(format!("{tag} m={m}: {e}"));
                continue;
            }
            let expected = BigInt::from(row.r[0] * m + row.r[1]);
            match r_number_d3f2(&kb, &mat, &row.d_big()) {
                Ok(ReidemeisterValue::Finite(v)) if v == expected => {
                    if !enumerated.contains_big(&v) {
                        report.failures.push(format!("{tag} m={m}: R={v} outside the spectrum"));
                    }
                }
                Ok(v) => report.failures.push(format!("{tag} m={m}: R={v}, expected {expected}")),
                Err(e) => report.failures.push(format!("{tag} m={m}: {e}")),
            }
        }
    }
    report
}
