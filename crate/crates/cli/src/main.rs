mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use twistedconj::acgroup::{ACGroupSpec, Family};
use twistedconj::automorphisms::{
    build_d3f2, build_d4_families_345, build_d4f3, build_d4f3_phi_m, build_d4f5, build_d4f5_phi_m,
    check_conditions_d3f2,
};
use twistedconj::linalg::IntMatrix;
use twistedconj::makelist::{
    canonical_key, key_string, load_golden_tables, load_witnesses, make_list, parities, verify_tables,
    witness_check, GoldenRow, TableDiff,
};
use twistedconj::oracle::{boxed_twisted_classes, oracle_d3f2, DEFAULT_BOX, DEFAULT_MAX_ORDER};
use twistedconj::progression::ResidueClassSet;
use twistedconj::reidemeister::{
    averaging_for, known_spectra, r_number_d3f2, r_number_quotient, rinfty_family_evidence, rinfty_for,
    spectrum_d3f2, ReidemeisterValue,
};
use twistedconj::Error;

use output::{Document, Format};

const MATRIX_HELP: &str = "Matrices are given row-major: --M a,b,c,d means [[a,b],[c,d]].
With M = [[m1,m3],[m2,m4]] this is --M m1,m3,m2,m4, so the image of e2 has
lattice part (m1,m2) and the image of e3 has lattice part (m3,m4).

Example: twistedconj rnumber --family d3f2 --k 0,0,0,1 --M 0,1,1,3 --d 0,0
         gives R = 6 for M = [[0,1],[1,3]].";

#[derive(Parser)]
#[command(name = "twistedconj", version, about = "Reidemeister numbers and spectra of almost-crystallographic groups of dimension 3 and 4")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Directory with makelist_XXXX.json and witnesses.json; defaults to the built-in copies.
    #[arg(long, env = "TWISTEDCONJ_GOLDEN_DIR", global = true)]
    golden_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Debug)]
struct Ints(Vec<BigInt>);

fn parse_ints(s: &str) -> Result<Ints, String> {
    s.split(',')
        .map(|t| t.trim().parse::<BigInt>().map_err(|_| format!("{t:?} is not an integer")))
        .collect::<Result<Vec<_>, _>>()
        .map(Ints)
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse::<Family>().map_err(|_| {
        let names: Vec<&str> = Family::ALL.iter().map(|f| f.name()).collect();
        format!("unknown family {s:?}; expected one of {}", names.join(", "))
    })
}

#[derive(Subcommand)]
enum Command {
    /// Admissible (M mod 2, d mod 2) with their sets of possible R for one parity class of k.
    Makelist {
        /// k1,k2,k3,k4 (reduced mod 2).
        #[arg(long, value_parser = parse_ints, allow_hyphen_values = true)]
        k: Ints,
    },
    /// Compare the enumeration with the stored tables and check the witness families.
    Verify(VerifyArgs),
    /// Reidemeister number of one automorphism.
    #[command(after_help = MATRIX_HELP)]
    Rnumber(AutArgs),
    /// Reidemeister spectrum of a group.
    Spectrum {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        /// Group parameters.
        #[arg(long, value_parser = parse_ints, allow_hyphen_values = true)]
        k: Option<Ints>,
    },
    /// R-infinity: sampling evidence, or an explicit automorphism with finite R.
    Rinfty {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        /// Number of valid automorphisms to sample.
        #[arg(long, default_value_t = 1000)]
        sample: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Group parameters (families 3, 4, 5).
        #[arg(long, value_parser = parse_ints, allow_hyphen_values = true)]
        k: Option<Ints>,
    },
    /// Brute-force twisted class counts on finite quotients and on a box.
    #[command(after_help = MATRIX_HELP)]
    Oracle {
        #[command(flatten)]
        aut: AutArgs,
        /// Largest finite quotient order.
        #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
        max_order: u64,
        /// Box size for the count on Gamma/<e1>.
        #[arg(long = "box", default_value_t = DEFAULT_BOX)]
        box_size: i64,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    tables: bool,
    #[arg(long)]
    witnesses: bool,
    #[arg(long)]
    all: bool,
    /// Worker threads for the table comparison.
    #[arg(long, default_value_t = 1)]
    parallel: usize,
}

#[derive(Args)]
struct AutArgs {
    #[arg(long, value_parser = parse_family)]
    family: Family,
    /// Group parameters; for d4f3 and d4f5 the single k of (2k,0,0,1) and (k,0,0,1).
    #[arg(long, value_parser = parse_ints, allow_hyphen_values = true)]
    k: Option<Ints>,
    /// M row-major: a,b,c,d = [[a,b],[c,d]].
    #[arg(long = "M", value_parser = parse_ints, allow_hyphen_values = true)]
    m: Option<Ints>,
    /// d1,d2.
    #[arg(long, value_parser = parse_ints, allow_hyphen_values = true)]
    d: Option<Ints>,
    /// The free exponent l (d4f3, d4f5).
    #[arg(long, value_parser = parse_ints, allow_hyphen_values = true)]
    extra: Option<Ints>,
    /// Use phi_m (d4f3, d4f5).
    #[arg(long, allow_hyphen_values = true)]
    phi_m: Option<BigInt>,
}

enum Failure {
    /// Exit 2.
    Usage(String),
    /// Exit 1.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameters(_) | Error::Dimension(_) | Error::RankMismatch { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

/// A document and whether the check it reports passed.
type Outcome = Result<(Document, bool), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Makelist { k } => cmd_makelist(k),
        Command::Verify(args) => cmd_verify(args, &cli.golden_dir),
        Command::Rnumber(args) => cmd_rnumber(args),
        Command::Spectrum { family, k } => cmd_spectrum(*family, k.as_ref()),
        Command::Rinfty { family, sample, seed, k } => cmd_rinfty(*family, *sample, *seed, k.as_ref()),
        Command::Oracle { aut, max_order, box_size } => cmd_oracle(aut, *max_order, *box_size),
    };
    match outcome {
        Ok((doc, ok)) => {
            print!("{}", doc.render(cli.format));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn num(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn nums(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(num).collect())
}

fn value_json(v: &ReidemeisterValue) -> Value {
    serde_json::to_value(v).expect("plain value")
}

fn need<'a>(x: Option<&'a Ints>, flag: &str, len: usize) -> Result<&'a [BigInt], Failure> {
    match x {
        Some(Ints(v)) if v.len() == len => Ok(v),
        Some(Ints(v)) => Err(Failure::Usage(format!("--{flag} needs {len} comma-separated integers, got {}", v.len()))),
        None => Err(Failure::Usage(format!("--{flag} is required"))),
    }
}

fn matrix(x: Option<&Ints>) -> Result<IntMatrix, Failure> {
    let e = need(x, "M", 4)?;
    Ok(IntMatrix::new(2, 2, e.to_vec())?)
}

fn matrix_json(m: &IntMatrix) -> Value {
    json!([[num(m.get(0, 0)), num(m.get(0, 1))], [num(m.get(1, 0)), num(m.get(1, 1))]])
}

fn tuple_string<T: ToString>(xs: &[T]) -> String {
    format!("({})", xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn mod2_matrix_string(m: [[u8; 2]; 2]) -> String {
    format!("[[{},{}],[{},{}]]", m[0][0], m[0][1], m[1][0], m[1][1])
}

fn cmd_makelist(k: &Ints) -> Outcome {
    let k = need(Some(k), "k", 4)?;
    let key = parities(k);
    let (table_key, swapped) = canonical_key(key);
    let rows = make_list(table_key);
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "M": r.mbar.0,
                "d": r.dbar.0,
                "S": r.s,
                "R": r.progression(),
            })
        })
        .collect();
    let table = rows
        .iter()
        .map(|r| vec![mod2_matrix_string(r.mbar.0), tuple_string(&r.dbar.0), r.s.to_string(), r.progression().to_string()])
        .collect();
    let mut doc = Document::new(json!({
        "k": key,
        "table_key": table_key,
        "swapped": swapped,
        "rows": json_rows,
    }))
    .table(&["M", "d", "S", "R"], table)
    .hide_in_md("S");
    if swapped {
        doc = doc.note(format!(
            "no table for {}: the group with parameters (k1,k2,k3,k4) is isomorphic to the one with (-k1,k3,k2,k4), so these are the rows for {}",
            tuple_string(&key),
            tuple_string(&table_key)
        ));
    }
    Ok((doc, true))
}

fn row_string(r: &GoldenRow) -> String {
    format!("M={} d={} R={}", mod2_matrix_string(r.m), tuple_string(&r.d), r.r)
}

fn cmd_verify(args: &VerifyArgs, dir: &Option<PathBuf>) -> Outcome {
    let all = args.all || !(args.tables || args.witnesses);
    let mut ok = true;
    let mut json = serde_json::Map::new();
    let mut rows = Vec::new();
    let mut doc_notes = Vec::new();
    if all || args.tables {
        let golden = load_golden_tables(dir.as_deref()).map_err(|e| Failure::Check(e.to_string()))?;
        let diffs = parallel_verify(&golden, args.parallel.max(1));
        let mut entries = Vec::new();
        for d in &diffs {
            let good = d.is_empty();
            ok &= good;
            let tag = key_string(d.k);
            for r in &d.missing {
                doc_notes.push(format!("{tag}: stored row not produced: {}", row_string(r)));
            }
            for r in &d.unexpected {
                doc_notes.push(format!("{tag}: produced row not stored: {}", row_string(r)));
            }
            rows.push(vec![
                format!("table {tag}"),
                d.expected_rows.to_string(),
                d.computed_rows.to_string(),
                if good { "OK" } else { "DIFF" }.to_string(),
            ]);
            entries.push(json!({
                "k": tag,
                "stored_rows": d.expected_rows,
                "computed_rows": d.computed_rows,
                "ok": good,
                "missing": d.missing,
                "unexpected": d.unexpected,
            }));
        }
        json.insert("tables".into(), Value::Array(entries));
    }
    if all || args.witnesses {
        let witnesses = load_witnesses(dir.as_deref()).map_err(|e| Failure::Check(e.to_string()))?;
        let report = witness_check(&witnesses, 1..=25);
        ok &= report.passed();
        doc_notes.extend(report.failures.iter().map(|f| format!("witness {f}")));
        rows.push(vec![
            "witnesses".into(),
            report.rows_checked.to_string(),
            report.values_checked.to_string(),
            if report.passed() { "OK" } else { "DIFF" }.to_string(),
        ]);
        json.insert("witnesses".into(), serde_json::to_value(&report).expect("plain data"));
    }
    json.insert("ok".into(), json!(ok));
    let mut doc = Document::new(Value::Object(json)).table(&["check", "expected", "computed", "status"], rows);
    for n in doc_notes {
        doc = doc.note(n);
    }
    Ok((doc, ok))
}

/// Splits the tables over `workers` threads; results come back in key order.
fn parallel_verify(golden: &[twistedconj::makelist::GoldenTable], workers: usize) -> Vec<TableDiff> {
    let chunk = golden.len().div_ceil(workers).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = golden.chunks(chunk).map(|c| s.spawn(move || verify_tables(c))).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

fn cmd_rnumber(a: &AutArgs) -> Outcome {
    match a.family {
        Family::D3F2 => {
            let k = need(a.k.as_ref(), "k", 4)?;
            let m = matrix(a.m.as_ref())?;
            let d = need(a.d.as_ref(), "d", 2)?;
            let conds = check_conditions_d3f2(k, &m, d)?;
            build_d3f2(k, &m, d)?;
            let r = r_number_d3f2(k, &m, d)?;
            let doc = Document::new(json!({
                "family": "d3f2",
                "k": nums(k),
                "M": matrix_json(&m),
                "d": nums(d),
                "R": value_json(&r),
                "method": "closed-form",
                "conditions": conds,
            }))
            .table(&["family", "k", "M", "d", "R", "method"], vec![vec![
                "d3f2".into(),
                tuple_string(k),
                format!("{m:?}"),
                tuple_string(d),
                r.to_string(),
                "closed-form".into(),
            ]]);
            Ok((doc, true))
        }
        Family::D4F3 | Family::D4F5 => {
            let k = match a.k.as_ref() {
                Some(_) => need(a.k.as_ref(), "k", 1)?[0].clone(),
                None => BigInt::from(1),
            };
            let f3 = a.family == Family::D4F3;
            let (aut, params, mut conditions) = if let Some(pm) = &a.phi_m {
                let aut = if f3 { build_d4f3_phi_m(&k, pm)? } else { build_d4f5_phi_m(&k, pm)? };
                (aut, json!({"phi_m": num(pm)}), serde_json::Map::new())
            } else {
                let m = matrix(a.m.as_ref())?;
                let d = need(a.d.as_ref(), "d", 2)?;
                let l = match a.extra.as_ref() {
                    Some(_) => need(a.extra.as_ref(), "extra", 1)?[0].clone(),
                    None => BigInt::from(0),
                };
                let aut = if f3 { build_d4f3(&k, &m, d, &l)? } else { build_d4f5(&k, &m, d, &l)? };
                let mut c = serde_json::Map::new();
                c.insert("det M = -1".into(), json!(true));
                if !f3 {
                    c.insert("m1 - m4 + 2 m1 m4 - m2 m3 = 0".into(), json!(true));
                }
                (aut, json!({"M": matrix_json(&m), "d": nums(d), "l": num(&l)}), c)
            };
            conditions.insert("relations".into(), json!(true));
            let r = averaging_for(&aut)?;
            let doc = Document::new(json!({
                "family": a.family.name(),
                "group": aut.spec().to_string(),
                "automorphism": params,
                "R": value_json(&r),
                "method": "averaging",
                "conditions": conditions,
            }))
            .table(&["family", "group", "R", "method"], vec![vec![
                a.family.name().into(),
                aut.spec().to_string(),
                r.to_string(),
                "averaging".into(),
            ]]);
            Ok((doc, true))
        }
        f => Err(Failure::Check(format!("no automorphism parameterization for family {f}"))),
    }
}

fn spectrum_doc(family: Family, k: &[BigInt], set: &ResidueClassSet, note: Option<&str>) -> Document {
    let mut doc = Document::new(serde_json::to_value(set).expect("plain data")).table(
        &["family", "k", "spectrum"],
        vec![vec![family.name().into(), tuple_string(k), set.to_string()]],
    );
    if let Some(n) = note {
        doc = doc.note(n);
    }
    doc
}

fn known(group: &str) -> ResidueClassSet {
    known_spectra().into_iter().find(|s| s.group == group).expect("recorded constant").spectrum
}

fn cmd_spectrum(family: Family, k: Option<&Ints>) -> Outcome {
    let params = |n| need(k, "k", n);
    let doc = match family {
        Family::D3F2 => {
            let k = params(4)?;
            spectrum_doc(family, k, &spectrum_d3f2(parities(k)), None)
        }
        Family::D3F1 => spectrum_doc(family, k.map_or(&[], |x| &x.0), &known("d3f1"), Some("recorded constant")),
        Family::D4F4 => {
            let k = params(4)?;
            let zero = BigInt::from(0);
            let tail_zero = k[2] == zero && k[3] == zero;
            let set = if tail_zero && k[1] == zero {
                known("d4f4 (k,0,0,0)")
            } else if tail_zero && k[1] == BigInt::from(1) && &k[0] % 2 == zero {
                known("d4f4 (2k,1,0,0)")
            } else {
                return Err(Failure::Check("family 4 spectra are recorded for (k,0,0,0) and (2k,1,0,0) only".into()));
            };
            spectrum_doc(family, k, &set, Some("recorded constant"))
        }
        Family::D4F2 | Family::D4F143 | Family::D4F146 => spectrum_doc(
            family,
            k.map_or(&[], |x| &x.0),
            &ResidueClassSet::infinity_only(),
            Some("recorded constant; `rinfty` samples automorphisms as evidence"),
        ),
        f => return Err(Failure::Check(format!("no spectrum recorded for family {f}"))),
    };
    Ok((doc, true))
}

fn cmd_rinfty(family: Family, sample: usize, seed: u64, k: Option<&Ints>) -> Outcome {
    match family {
        Family::D4F2 | Family::D4F143 | Family::D4F146 => {
            let ev = rinfty_family_evidence(family, sample, seed)?;
            let ok = ev.passed();
            let doc = Document::new(serde_json::to_value(&ev).expect("plain data"))
                .table(&["family", "seed", "valid", "attempts", "counterexamples"], vec![vec![
                    family.name().into(),
                    seed.to_string(),
                    ev.valid.to_string(),
                    ev.attempts.to_string(),
                    ev.counterexamples.len().to_string(),
                ]])
                .note(ev.label);
            Ok((doc, ok))
        }
        Family::D4F3 | Family::D4F4 | Family::D4F5 => {
            let k = need(k, "k", 4)?;
            let spec = ACGroupSpec::new(family, k.to_vec())?;
            let aut = build_d4_families_345(&spec)?;
            let infinite = rinfty_for(&aut)?;
            let doc = Document::new(json!({
                "family": family.name(),
                "group": spec.to_string(),
                "witness_dstar": format!("{:?}", aut.dstar()),
                "witness_R_infinite": infinite,
                "rinfty": infinite,
            }))
            .table(&["family", "group", "R-infinity"], vec![vec![
                family.name().into(),
                spec.to_string(),
                infinite.to_string(),
            ]]);
            Ok((doc, !infinite))
        }
        f => Err(Failure::Check(format!("no R-infinity check for family {f}"))),
    }
}

fn cmd_oracle(a: &AutArgs, max_order: u64, box_size: i64) -> Outcome {
    if a.family != Family::D3F2 {
        return Err(Failure::Check(format!("the oracle covers family d3f2 only, not {}", a.family)));
    }
    let k = need(a.k.as_ref(), "k", 4)?;
    let m = matrix(a.m.as_ref())?;
    let d = need(a.d.as_ref(), "d", 2)?;
    let report = oracle_d3f2(k, &m, d, max_order)?;
    let boxed = boxed_twisted_classes(&m, d, box_size)?;
    let formula = r_number_quotient(&m, d)?;
    let box_ok = boxed.stabilized && ReidemeisterValue::from(boxed.count as i64) == formula;
    let ok = report.passed() && box_ok;
    let mut json = serde_json::to_value(&report).expect("plain data");
    json["quotient"] = json!({ "formula": value_json(&formula), "boxed": boxed, "agree": box_ok });
    let rows = report
        .levels
        .iter()
        .map(|l| vec![tuple_string(&l.moduli), l.order.to_string(), l.classes.to_string()])
        .collect();
    let status = if report.saturated { "saturate at" } else { "do not reach" };
    let doc = Document::new(json)
        .table(&["moduli", "order", "classes"], rows)
        .note(format!("closed form {}; finite quotients {status} it", report.closed_form))
        .note(format!("Gamma/<e1>: boxed count {} (stabilized: {}), formula {formula}", boxed.count, boxed.stabilized));
    Ok((doc, ok))
}
