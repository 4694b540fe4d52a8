//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! `cargo test -p twistedconj --test acceptance -- --nocapture` shows the lines.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twistedconj::acgroup::{ACElement, ACGroupSpec, Family};
use twistedconj::automorphisms::{
    build_d3f2, build_d4_families_345, build_d4f3, build_d4f3_phi_m, build_d4f5_phi_m, check_conditions_d3f2,
    Automorphism,
};
use twistedconj::linalg::IntMatrix;
use twistedconj::makelist::{
    load_golden_tables, load_witnesses, parities, swap_parities, verify_tables, witness_check, Parity4, TABLE_ROW_COUNTS,
};
use twistedconj::nilgroup::NilElement;
use twistedconj::oracle::{boxed_twisted_classes, oracle_d3f2, DEFAULT_BOX, DEFAULT_MAX_ORDER};
use twistedconj::reidemeister::{
    averaging_for, r_number_d3f2, r_number_quotient, rinfty_family_evidence, rinfty_for, spectrum_d3f2,
    ReidemeisterValue,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn big(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

fn mat(a: i64, b: i64, c: i64, d: i64) -> IntMatrix {
    IntMatrix::from_rows(&[[a, b], [c, d]])
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_parities() -> impl Iterator<Item = Parity4> {
    (0..16u8).map(|i| [i >> 3 & 1, i >> 2 & 1, i >> 1 & 1, i & 1])
}

/// Random `M` with determinant -1 and entries in `[-r, r]`.
fn random_det_minus_one(rng: &mut ChaCha8Rng, r: i64) -> IntMatrix {
    loop {
        let e: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-r..=r));
        if e[0] * e[3] - e[1] * e[2] == -1 {
            return mat(e[0], e[1], e[2], e[3]);
        }
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let golden = load_golden_tables(None).map_err(|e| e.to_string())?;
    let diffs = verify_tables(&golden);
    let elapsed = start.elapsed();
    let rows: usize = golden.iter().map(|g| g.rows.len()).sum();
    for (d, n) in diffs.iter().zip(TABLE_ROW_COUNTS) {
        ensure(d.is_empty() && d.computed_rows == n, || format!("table {:?}: {d:?}", d.k))?;
    }
    ensure(rows == 100, || format!("{rows} rows, expected 100"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("12 tables, {rows} rows, 0 diffs in {elapsed:.2?}"))
}

fn criterion_2() -> Outcome {
    let rows = load_witnesses(None).map_err(|e| e.to_string())?;
    ensure(rows.len() == 12, || format!("{} witness rows", rows.len()))?;
    let report = witness_check(&rows, 1..=25);
    ensure(report.passed(), || report.failures.join("; "))?;
    Ok(format!("{} rows x m=1..25, {} values exact", report.rows_checked, report.values_checked))
}

fn criterion_3() -> Outcome {
    let rows = load_witnesses(None).map_err(|e| e.to_string())?;
    for row in &rows {
        let k = parities(&row.k_big());
        let computed = spectrum_d3f2(k);
        ensure(computed == row.spectrum_set(), || format!("{k:?}: {computed} vs {}", row.spectrum_set()))?;
    }
    Ok(format!("{} parity classes agree", rows.len()))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    while checked < 100 {
        let k = [
            2 * rng.gen_range(-3..=3),
            2 * rng.gen_range(-3..=3),
            2 * rng.gen_range(-3..=3),
            2 * rng.gen_range(-3..=3) + 1,
        ];
        let m = random_det_minus_one(&mut rng, 4);
        let d = [rng.gen_range(-3..=3), rng.gen_range(-3..=3)];
        let (k, d) = (big(&k), big(&d));
        let Ok(aut) = build_d3f2(&k, &m, &d) else { continue };
        let avg = averaging_for(&aut).map_err(|e| e.to_string())?;
        let closed = r_number_d3f2(&k, &m, &d).map_err(|e| e.to_string())?;
        ensure(avg == closed, || format!("k={k:?} M={m:?} d={d:?}: averaging {avg}, closed form {closed}"))?;
        checked += 1;
    }
    // Class (1,1,1,0): the averaging sum undercounts.
    let k = big(&[1, 1, 1, 0]);
    let mut witness = None;
    'search: for mm in 1..=6 {
        let m = mat(0, 1, 1, mm);
        for d in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            let d = big(&d);
            if let Ok(aut) = build_d3f2(&k, &m, &d) {
                let avg = averaging_for(&aut).map_err(|e| e.to_string())?;
                let closed = r_number_d3f2(&k, &m, &d).map_err(|e| e.to_string())?;
                if avg != closed {
                    witness = Some(format!("M=[[0,1],[1,{mm}]] d={d:?}: averaging {avg} vs {closed}"));
                    break 'search;
                }
            }
        }
    }
    let w = witness.ok_or("no automorphism outside (0,0,0,1) separates averaging from 2(|tr M|+S)")?;
    Ok(format!("100 random automorphisms agree; (1,1,1,0) {w}"))
}

fn criterion_5() -> Outcome {
    for m in 1..=10i64 {
        let mb = BigInt::from(m);
        for k in 1..=3i64 {
            let kb = BigInt::from(k);
            let f3 = averaging_for(&build_d4f3_phi_m(&kb, &mb).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            ensure(f3 == ReidemeisterValue::from(4 * m), || format!("family 3 phi_{m} (k={k}): {f3}"))?;
            let f5 = averaging_for(&build_d4f5_phi_m(&kb, &mb).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            ensure(f5 == ReidemeisterValue::from(8 * m), || format!("family 5 phi_{m} (k={k}): {f5}"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    while checked < 100 {
        let m = random_det_minus_one(&mut rng, 5);
        let tr = m.trace();
        if tr == BigInt::from(0) {
            continue;
        }
        let k = BigInt::from(rng.gen_range(1..=4));
        let d = big(&[rng.gen_range(-4..=4), rng.gen_range(-4..=4)]);
        let l = BigInt::from(rng.gen_range(-4..=4));
        let aut = build_d4f3(&k, &m, &d, &l).map_err(|e| e.to_string())?;
        let avg = averaging_for(&aut).map_err(|e| e.to_string())?;
        let expected = ReidemeisterValue::Finite(BigInt::from(4) * tr.abs());
        ensure(avg == expected, || format!("k={k} M={m:?} d={d:?}: {avg} vs {expected}"))?;
        checked += 1;
    }
    Ok("phi_m gives 4m and 8m for m=1..10; 100 random family 3 automorphisms give 4|tr M|".into())
}

fn criterion_6() -> Outcome {
    let groups = [
        ACGroupSpec::from_i64(Family::D4F3, &[2, 1, -1, 3]),
        ACGroupSpec::from_i64(Family::D4F4, &[3, 0, 2, 1]),
        ACGroupSpec::from_i64(Family::D4F5, &[1, 1, 0, 1]),
    ];
    for g in groups {
        let g = g.map_err(|e| e.to_string())?;
        let aut = build_d4_families_345(&g).map_err(|e| e.to_string())?;
        ensure(!rinfty_for(&aut).map_err(|e| e.to_string())?, || format!("{}: R = infinity", g.family()))?;
        ensure(rinfty_for(&Automorphism::identity(&g)).map_err(|e| e.to_string())?, || {
            format!("{}: identity has finite R", g.family())
        })?;
    }
    let mut zero_trace = 0;
    for k in all_parities() {
        let kb = big(&k.map(i64::from));
        for (m, d) in [(mat(0, 1, 1, 0), [0, 0]), (mat(1, 2, 1, -1), [1, 0]), (mat(2, 1, 5, -2), [0, 1]), (mat(0, 1, 1, 0), [1, 1])] {
            let d = big(&d);
            if let Ok(aut) = build_d3f2(&kb, &m, &d) {
                ensure(rinfty_for(&aut).map_err(|e| e.to_string())?, || format!("k={k:?} M={m:?}: finite R"))?;
                zero_trace += 1;
            }
        }
    }
    ensure(zero_trace > 0, || "no trace-zero D3F2 automorphism was built".into())?;
    Ok(format!("families 3/4/5 finite, identity infinite, {zero_trace} trace-zero D3F2 cases infinite"))
}

fn criterion_7() -> Outcome {
    let mut parts = Vec::new();
    for family in [Family::D4F2, Family::D4F143, Family::D4F146] {
        let ev = rinfty_family_evidence(family, 1000, 7).map_err(|e| e.to_string())?;
        ensure(ev.valid == 1000, || format!("{family}: only {} valid candidates in {} attempts", ev.valid, ev.attempts))?;
        ensure(ev.counterexamples.is_empty(), || format!("{family}: {}", ev.counterexamples.join("; ")))?;
        parts.push(format!("{family} 1000/0"));
    }
    Ok(format!("{} (evidence, not proof)", parts.join(", ")))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut grid = 0;
    let r = -3..=3i64;
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                for dd in r.clone() {
                    let tr = a + dd;
                    if a * dd - b * c != -1 || tr == 0 || tr.abs() > 4 {
                        continue;
                    }
                    let m = mat(a, b, c, dd);
                    for d in [[0, 0], [0, 1], [1, 0], [1, 1]] {
                        let d = big(&d);
                        let boxed = boxed_twisted_classes(&m, &d, DEFAULT_BOX).map_err(|e| e.to_string())?;
                        let formula = r_number_quotient(&m, &d).map_err(|e| e.to_string())?;
                        ensure(boxed.stabilized, || format!("M={m:?} d={d:?}: box count not stable"))?;
                        ensure(ReidemeisterValue::from(boxed.count as i64) == formula, || {
                            format!("M={m:?} d={d:?}: box {} vs {formula}", boxed.count)
                        })?;
                        grid += 1;
                    }
                }
            }
        }
    }
    let cases: [([i64; 4], IntMatrix, [i64; 2]); 12] = [
        ([0, 0, 0, 1], mat(0, 1, 1, 1), [0, 0]),
        ([0, 0, 0, 1], mat(0, 1, 1, 2), [0, 0]),
        ([0, 0, 0, 1], mat(0, 1, 1, 3), [0, 0]),
        ([0, 0, 0, 1], mat(0, 1, 1, 4), [0, 0]),
        ([0, 0, 0, 1], mat(0, 1, 1, 5), [0, 0]),
        ([0, 0, 0, 1], mat(0, 1, 1, 6), [0, 0]),
        ([0, 0, 0, 0], mat(0, 1, 1, 2), [0, 1]),
        ([0, 0, 1, 1], mat(1, 1, 2, 1), [0, 0]),
        ([0, 0, 0, 1], mat(1, 1, 2, 1), [1, 1]),
        ([0, 0, 0, 1], mat(2, 1, 1, 0), [0, 1]),
        ([0, 0, 0, 1], mat(1, 2, 1, 1), [0, 0]),
        ([0, 0, 0, 3], mat(0, 1, 1, -2), [0, 0]),
    ];
    let mut saturated = 0;
    let mut notes = Vec::new();
    for (k, m, d) in &cases {
        let (k, d) = (big(k), big(d));
        let Ok(closed) = r_number_d3f2(&k, m, &d) else { continue };
        if closed.finite().is_none_or(|r| *r > BigInt::from(12)) {
            continue;
        }
        let report = oracle_d3f2(&k, m, &d, DEFAULT_MAX_ORDER).map_err(|e| e.to_string())?;
        ensure(report.bounded && report.monotone, || format!("k={k:?} M={m:?} d={d:?}: {report:?}"))?;
        if report.saturated {
            saturated += 1;
        } else {
            notes.push(format!("k={k:?} M={m:?} d={d:?} reached {:?} of {closed}", report.best()));
        }
    }
    let elapsed = start.elapsed();
    ensure(saturated >= 10, || format!("only {saturated} saturated: {}", notes.join("; ")))?;
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{grid} boxed cases agree; {saturated} D3F2 automorphisms saturate; {elapsed:.1?}"))
}

fn random_element(rng: &mut ChaCha8Rng, spec: &ACGroupSpec) -> ACElement {
    let exps: Vec<i64> = (0..spec.rank()).map(|_| rng.gen_range(-6..=6)).collect();
    ACElement::new(NilElement::from_i64(&exps), rng.gen_range(0..spec.alpha_order()))
}

fn random_spec(rng: &mut ChaCha8Rng, family: Family) -> ACGroupSpec {
    loop {
        let p: Vec<i64> = (0..family.param_count()).map(|_| rng.gen_range(-3..=3)).collect();
        if let Ok(s) = ACGroupSpec::from_i64(family, &p) {
            return s;
        }
    }
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for family in Family::ALL {
        let spec = random_spec(&mut rng, family);
        for _ in 0..1000 {
            let (x, y, z) = (random_element(&mut rng, &spec), random_element(&mut rng, &spec), random_element(&mut rng, &spec));
            let xy = spec.multiply(&x, &y).map_err(|e| e.to_string())?;
            let lhs = spec.lambda(&xy).map_err(|e| e.to_string())?;
            let rhs = &spec.lambda(&x).map_err(|e| e.to_string())? * &spec.lambda(&y).map_err(|e| e.to_string())?;
            ensure(lhs == rhs, || format!("{family}: lambda not multiplicative at {x:?}, {y:?}"))?;
            let left = spec.multiply(&xy, &z).map_err(|e| e.to_string())?;
            let right = spec.multiply(&x, &spec.multiply(&y, &z).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            ensure(left == right, || format!("{family}: not associative at {x:?}, {y:?}, {z:?}"))?;
        }
    }
    // Relations for every automorphism built from a sample of D3F2 parameters.
    let mut built = 0;
    for _ in 0..400 {
        let k = big(&std::array::from_fn::<i64, 4, _>(|_| rng.gen_range(-4..=4)));
        let m = random_det_minus_one(&mut rng, 4);
        let d = big(&[rng.gen_range(-3..=3), rng.gen_range(-3..=3)]);
        if let Ok(aut) = build_d3f2(&k, &m, &d) {
            let failures = aut.spec().relation_failures(aut.images()).map_err(|e| e.to_string())?;
            ensure(failures.is_empty(), || format!("k={k:?} M={m:?} d={d:?}: {failures:?}"))?;
            built += 1;
        }
    }
    // Conditions (a)-(c) depend only on parities.
    for _ in 0..2000 {
        let k: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-9..=9));
        let m: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-9..=9));
        let d: [i64; 2] = std::array::from_fn(|_| rng.gen_range(-9..=9));
        let full = check_conditions_d3f2(&big(&k), &mat(m[0], m[1], m[2], m[3]), &big(&d)).map_err(|e| e.to_string())?;
        let r = |x: i64| x.rem_euclid(2);
        let low = check_conditions_d3f2(&big(&k.map(r)), &mat(r(m[0]), r(m[1]), r(m[2]), r(m[3])), &big(&d.map(r)))
            .map_err(|e| e.to_string())?;
        ensure((full.a, full.b, full.c) == (low.a, low.b, low.c), || format!("k={k:?} M={m:?} d={d:?}"))?;
    }
    for k in all_parities() {
        ensure(spectrum_d3f2(k) == spectrum_d3f2(swap_parities(k)), || format!("swap changes the spectrum of {k:?}"))?;
    }
    Ok(format!("lambda and associativity on 1000 triples x {} families; {built} automorphisms; lifts; swap", Family::ALL.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("1 golden tables", criterion_1),
        ("2 witness families", criterion_2),
        ("3 spectra", criterion_3),
        ("4 averaging cross-check", criterion_4),
        ("5 4D almost-Bieberbach averaging", criterion_5),
        ("6 R-infinity criterion", criterion_6),
        ("7 R-infinity evidence sampling", criterion_7),
        ("8 oracle agreement", criterion_8),
        ("9 structural properties", criterion_9),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let t = start.elapsed();
        match outcome {
            Ok(msg) => println!("PASS [{name}] {msg} ({t:.2?})"),
            Err(msg) => {
                println!("FAIL [{name}] {msg} ({t:.2?})");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
