//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Expected values are frozen here rather than read from the embedded
//! fixtures, so a corrupted fixture cannot make this target agree with itself.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use cy_modularity::cli::{run, OutputDocument, TraceTablePayload};
use cy_modularity::ffarith::{cubic_irreducible, primes_in, weil_bound, Cubic};
use cy_modularity::livne::{
    find_covering, is_covering, parity_certificate, xi_vector, CertificateKind, RamificationSet,
};
use cy_modularity::qseries::{fixture, level6_form};
use cy_modularity::threefold::{TwistAut, TwistId};

type Row = (u64, &'static str, u64, i64);

const PI1: &[Row] = &[
    (3, "(1,1,1)", 612, -8),
    (5, "(0,1,1)", 1560, 6),
    (7, "(1,0,1)", 3060, -28),
    (13, "(0,1,0)", 10992, -58),
    (19, "(1,1,0)", 24984, 116),
    (41, "(0,0,1)", 151920, -342),
    (47, "(1,0,0)", 211824, 288),
    (89, "(0,0,0)", 1090224, -774),
];

const PI2: &[Row] = &[
    (5, "(0,1,1,1)", 1344, -18),
    (11, "(1,1,0,1)", 6648, -36),
    (13, "(0,1,0,1)", 9512, -34),
    (17, "(0,0,1,1)", 17112, 42),
    (19, "(1,1,1,0)", 22184, -124),
    (23, "(1,0,0,1)", 34248, 0),
    (29, "(0,1,1,0)", 59088, 102),
    (31, "(1,0,1,0)", 69632, -160),
    (37, "(0,1,0,0)", 106496, 398),
    (43, "(1,1,1,1)", 155456, -268),
    (47, "(1,0,0,0)", 193824, 240),
    (59, "(1,1,0,0)", 347112, -132),
    (73, "(0,0,0,1)", 605600, -502),
    (103, "(1,0,1,1)", 1521152, 56),
    (137, "(0,0,1,0)", 3329952, -2358),
    (193, "(0,0,0,0)", 8682704, 4034),
];

const PI3: &[Row] = &[
    (3, "(1,1,1)", 468, -8),
    (7, "(1,0,1)", 2196, -4),
    (11, "(1,1,0)", 5676, 12),
    (13, "(0,1,1)", 8262, -58),
    (17, "(0,0,1)", 14946, 66),
    (29, "(0,1,0)", 53190, -90),
    (31, "(1,0,0)", 62376, 152),
    (41, "(0,0,0)", 126186, -438),
];

const PI4: &[Row] = &[
    (3, "(1,1,0)", 432, -8),
    (5, "(0,1,1)", 1200, 6),
    (7, "(1,0,1)", 2394, -34),
    (11, "(1,1,1)", 6078, 6),
    (17, "(0,0,1)", 15840, 90),
    (23, "(1,0,0)", 31980, 60),
    (37, "(0,1,0)", 101556, -286),
    (41, "(0,0,0)", 130764, 150),
];

const TABLES: [(TwistId, &[u64], &[Row]); 5] = [
    (TwistId::Pi1, &[2, 17], PI1),
    (TwistId::Pi2, &[2, 3, 7], PI2),
    (TwistId::Pi3, &[2, 5], PI3),
    (TwistId::Pi4, &[2, 73], PI4),
    (TwistId::Pi5, &[2, 73], PI4),
];

type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn single_threaded<T: Send>(f: impl FnOnce() -> T + Send) -> (T, Duration) {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let start = Instant::now();
    let out = pool.install(f);
    (out, start.elapsed())
}

/// Compares count and trace, and the sign vector when `with_xi` is set.
fn check_rows(twist: TwistId, rows: &[Row], primes: &[u64], with_xi: bool) -> Check {
    let sigma = TwistAut::new(twist);
    let s = RamificationSet::for_twist(&sigma);
    for &(p, xi, count, trace) in rows.iter().filter(|r| primes.contains(&r.0)) {
        let got = sigma.total_count(p).map_err(|e| format!("{twist} p={p}: {e}"))?;
        let tr = sigma.trace_from_count(p, got.total).map_err(|e| e.to_string())?;
        ensure(got.total == count && tr == trace, || {
            format!("{twist} p={p}: got ({}, {tr}), expected ({count}, {trace})", got.total)
        })?;
        if with_xi {
            let v = xi_vector(p, &s).map_err(|e| e.to_string())?.to_string();
            ensure(v == xi, || format!("{twist} p={p}: xi {v}, expected {xi}"))?;
        }
    }
    Ok(())
}

fn criterion_1() -> Check {
    let (res, elapsed) = single_threaded(|| {
        check_rows(TwistId::Pi1, PI1, &[5, 7, 13, 19, 41, 47, 89, 3], true)
    });
    res?;
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))
}

fn criterion_2() -> Check {
    let primes: Vec<u64> = PI2.iter().map(|r| r.0).collect();
    let (res, elapsed) = single_threaded(|| check_rows(TwistId::Pi2, PI2, &primes, false));
    res?;
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))
}

fn trace_payload(twist: &str) -> Result<TraceTablePayload, String> {
    let out = run([
        "cy-modularity", "--no-timing", "trace", "--twist", twist, "--pmax", "41", "--allow-char3",
    ]);
    ensure(out.code == 0, || format!("trace {twist} exited {}", out.code))?;
    let doc = OutputDocument::from_json(&out.stdout).map_err(|e| e.to_string())?;
    serde_json::from_value(doc.payload).map_err(|e| e.to_string())
}

fn criterion_3() -> Check {
    for (twist, rows) in [(TwistId::Pi3, PI3), (TwistId::Pi4, PI4), (TwistId::Pi5, PI4)] {
        let primes: Vec<u64> = rows.iter().map(|r| r.0).filter(|&p| p >= 5).collect();
        check_rows(twist, rows, &primes, true)?;
    }
    for (twist, count, published) in [("pi3", 432, 468), ("pi4", 468, 432), ("pi5", 468, 432)] {
        let payload = trace_payload(twist)?;
        let row = payload.rows.iter().find(|r| r.p == 3).ok_or("no p = 3 row")?;
        ensure(row.count == count && row.trace == -8, || {
            format!("{twist} p=3: ({}, {})", row.count, row.trace)
        })?;
        let flagged = payload.discrepancies.iter().any(|d| {
            d.p == 3 && d.field == "count" && d.published == published.to_string()
        });
        ensure(flagged, || format!("{twist}: p = 3 count discrepancy not flagged"))?;
    }
    Ok(())
}

fn criterion_4() -> Check {
    let f = level6_form(100).map_err(|e| e.to_string())?;
    let sigma = TwistAut::new(TwistId::Identity);
    let start = Instant::now();
    for p in primes_in(5, 97) {
        let tr = sigma.lefschetz_trace(p).map_err(|e| e.to_string())?;
        let a = f.coeff(p as usize).unwrap();
        ensure(tr == a, || format!("p={p}: trace {tr}, eta coefficient {a}"))?;
    }
    ensure(start.elapsed() < Duration::from_secs(60), || "too slow".into())
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn criterion_5() -> Check {
    let f = level6_form(10_000).map_err(|e| e.to_string())?;
    let a = |n: usize| f.coeff(n).unwrap();
    for m in 1..=100 {
        for n in 1..=100 {
            if gcd(m, n) == 1 {
                ensure(a(m * n) == a(m) * a(n), || format!("a({m}*{n}) != a({m}) a({n})"))?;
            }
        }
    }
    for p in [5usize, 7] {
        ensure(a(p * p) == a(p) * a(p) - (p * p * p) as i64, || format!("a_{{{p}^2}}"))?;
    }
    for sigma in TwistAut::all() {
        for rec in sigma.trace_table(200, true).map_err(|e| e.to_string())? {
            ensure(rec.trace.abs() <= weil_bound(rec.p), || {
                format!("{} p={}: |{}| exceeds {}", sigma.id, rec.p, rec.trace, weil_bound(rec.p))
            })?;
        }
    }
    Ok(())
}

fn criterion_6() -> Check {
    let mut problems = Vec::new();
    for (twist, s, rows) in TABLES {
        let s = RamificationSet::new(s.iter().copied());
        let t: Vec<u64> = rows.iter().map(|r| r.0).collect();
        if !is_covering(&t, &s).map_err(|e| e.to_string())? {
            problems.push(format!("{twist}: printed T does not cover"));
        }
        for &(p, xi, _, _) in rows {
            let v = xi_vector(p, &s).map_err(|e| e.to_string())?.to_string();
            if v != xi {
                problems.push(format!("{twist} p={p}: xi {v}, printed {xi}"));
            }
        }
    }
    let cover = find_covering(&RamificationSet::new([2, 17]), 100, &[3]).map_err(|e| e.to_string())?;
    let w = cover.iter().find(|w| w.xi.to_string() == "(1,1,1)").map(|w| w.p);
    if w != Some(11) {
        problems.push(format!("(1,1,1) witness {w:?}"));
    }
    ensure(problems.is_empty(), || problems.join("; "))
}

fn criterion_7() -> Check {
    let (res, elapsed) = single_threaded(|| -> Check {
        for sigma in TwistAut::twisted() {
            for rec in sigma.trace_table(200, false).map_err(|e| e.to_string())? {
                ensure(rec.count % 2 == 0 && rec.trace % 2 == 0, || {
                    format!("{} p={}: ({}, {})", sigma.id, rec.p, rec.count, rec.trace)
                })?;
            }
        }
        Ok(())
    });
    res?;
    ensure(elapsed < Duration::from_secs(600), || format!("took {elapsed:?}"))
}

fn criterion_8() -> Check {
    let f10 = fixture(10).map_err(|e| e.to_string())?;
    let h = Cubic::new(1, -1, 2, 2).unwrap();
    let certs = parity_certificate(10, &[h], &f10, &[3]).map_err(|e| e.to_string())?;
    ensure(
        certs.len() == 1
            && certs[0].kind == CertificateKind::Cubic { cubic: h, p: 3, ap: -8 }
            && certs[0].validate(&f10),
        || format!("level 10: {certs:?}"),
    )?;

    let f17 = fixture(17).map_err(|e| e.to_string())?;
    let certs = parity_certificate(17, &[], &f17, &[]).map_err(|e| e.to_string())?;
    ensure(certs.iter().all(|c| c.validate(&f17)), || "level 17".into())?;

    // every monic cubic with small coefficients that is irreducible mod 3 or 13
    let f73 = fixture(73).map_err(|e| e.to_string())?;
    let mut tried = 0;
    for c2 in -3..=3 {
        for c1 in -3..=3 {
            for c0 in -3..=3 {
                let h = Cubic::new(1, c2, c1, c0).unwrap();
                let irr = |p| cubic_irreducible(&h, p).unwrap();
                if !(irr(3) || irr(13)) {
                    continue;
                }
                tried += 1;
                let certs = parity_certificate(73, &[h], &f73, &[3, 13])
                    .map_err(|e| format!("{h}: {e}"))?;
                ensure(certs.iter().all(|c| c.validate(&f73)), || format!("level 73: {h}"))?;
            }
        }
    }
    ensure(tried > 0, || "no cubic tried".into())
}

fn criterion_9() -> Check {
    for p in primes_in(5, 97) {
        for sigma in TwistAut::twisted() {
            if sigma.bad_primes().contains(&p) {
                continue;
            }
            let q = p * p + p;
            let expected = match sigma.id {
                TwistId::Pi1 => 48 * q,
                TwistId::Pi2 => 40 * q + if p % 3 == 2 { 4 * (p + 1) } else { 0 },
                TwistId::Pi3 => 33 * q,
                TwistId::Pi4 | TwistId::Pi5 => 36 * q,
                TwistId::Identity => unreachable!(),
            };
            let got = sigma.cusp_contribution(p).map_err(|e| e.to_string())?;
            ensure(got == expected, || format!("{} p={p}: {got} vs {expected}", sigma.id))?;
        }
    }
    Ok(())
}

fn criterion_10() -> Check {
    let out = Command::new(env!("CARGO_BIN_EXE_cy-modularity"))
        .args(["verify", "--twist", "pi1", "--fixture-level", "10"])
        .output()
        .map_err(|e| e.to_string())?;
    let stderr = String::from_utf8_lossy(&out.stderr);
    ensure(out.status.code() == Some(1), || format!("exit {:?}", out.status.code()))?;
    ensure(stderr.contains("p = 5"), || format!("stderr: {stderr}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("pi1 table reproduced", criterion_1),
        ("pi2 table reproduced", criterion_2),
        ("pi3/pi4/pi5 tables reproduced, p = 3 flagged", criterion_3),
        ("identity traces equal eta coefficients", criterion_4),
        ("Hecke relations and Weil bound", criterion_5),
        ("sign vectors and covering sets", criterion_6),
        ("parity sweep", criterion_7),
        ("obstruction certificates", criterion_8),
        ("cusp closed forms", criterion_9),
        ("negative control", criterion_10),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".into()));
        let ms = start.elapsed().as_millis();
        match result {
            Ok(()) => println!("PASS criterion {}: {name} ({ms} ms)", i + 1),
            Err(why) => {
                failed.push(i + 1);
                println!("FAIL criterion {}: {name} ({ms} ms): {why}", i + 1);
            }
        }
    }
    println!("{} of 10 criteria passed; failed: {failed:?}", 10 - failed.len());
    // reporting run by default so the rest of the suite still executes;
    // ACCEPTANCE_STRICT=1 turns any failed criterion into a failing exit
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    if strict && !failed.is_empty() {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
