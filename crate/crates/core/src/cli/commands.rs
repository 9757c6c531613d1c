use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use super::output::{write_trace_csv, Discrepancy, OutputDocument, Timing, TraceRow, TraceTablePayload, SCHEMA};
use super::{exit_code, Cli, Command, Format, Outcome, EXIT_MISMATCH, EXIT_OK};
use crate::error::{Error, Result};
use crate::ffarith::{primes_in, Cubic};
use crate::livne::{
    expected_level, find_covering, verify_modularity, xi_vector, RamificationSet, VerifyOptions,
};
use crate::qseries::{fixture, level6_form, published_table, MAX_PRECISION};
use crate::threefold::{TwistAut, TwistId};

/// What a command hands back before it is wrapped into a document.
struct Response {
    payload: Value,
    code: i32,
    notes: Vec<String>,
    csv: Option<String>,
}

impl Response {
    fn ok(payload: impl Serialize) -> Self {
        Self {
            payload: serde_json::to_value(payload).expect("payload serializes"),
            code: EXIT_OK,
            notes: Vec::new(),
            csv: None,
        }
    }
}

/// Runs an already-parsed command line.
pub fn execute(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let response = match dispatch(cli) {
        Ok(r) => r,
        Err(e) => {
            return Outcome {
                code: exit_code(&e),
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            }
        }
    };
    let stderr: String = response.notes.iter().map(|n| format!("{n}\n")).collect();
    if let Some(csv) = response.csv {
        return Outcome {
            code: response.code,
            stdout: csv,
            stderr,
        };
    }
    let mut command = serde_json::to_value(&cli.command).expect("command serializes");
    command["format"] = json!(cli.format);
    let doc = OutputDocument {
        schema: SCHEMA.to_string(),
        command,
        payload: response.payload,
        timing: (!cli.no_timing).then(|| Timing {
            elapsed_ms: start.elapsed().as_millis() as u64,
        }),
    };
    Outcome {
        code: response.code,
        stdout: doc.to_json(),
        stderr,
    }
}

fn dispatch(cli: &Cli) -> Result<Response> {
    if cli.format == Format::Csv && !matches!(cli.command, Command::Trace(_)) {
        return Err(Error::InvalidArgument(
            "csv output is only available for trace".into(),
        ));
    }
    match &cli.command {
        Command::Count(a) => count(&a.twist, a.prime),
        Command::Trace(a) => trace(&a.twist, a.pmax, a.allow_char3, cli.format),
        Command::Verify(a) => verify(a),
        Command::Eta(a) => eta(a.nmax),
        Command::Selfcheck(a) => selfcheck(a.pmax),
        Command::Covering(a) => covering(&a.set, a.limit, &a.exclude),
        Command::Fixture(a) => Ok(Response::ok(fixture(a.level)?.to_value())),
    }
}

fn twist(name: &str) -> Result<TwistAut> {
    Ok(TwistAut::new(name.parse::<TwistId>()?))
}

fn count(name: &str, p: u64) -> Result<Response> {
    let sigma = twist(name)?;
    let breakdown = sigma.total_count(p)?;
    let census = sigma.node_census();
    let trace = sigma.trace_from_count(p, breakdown.total)?;
    Ok(Response::ok(json!({
        "twist": sigma.id,
        "p": p,
        "count": breakdown.total,
        "trace": trace,
        "e": census.euler,
        "h11": census.h11,
        "bad_primes": sigma.bad_primes(),
        "cusp_blocks": breakdown.cusp_blocks,
        "cusp_total": breakdown.cusp_total,
        "generic_total": breakdown.generic_total,
    })))
}

pub(crate) fn trace_payload(sigma: &TwistAut, p_max: u64, allow_char3: bool) -> Result<TraceTablePayload> {
    if p_max < 3 {
        return Err(Error::InvalidArgument(format!("pmax {p_max} is below 3")));
    }
    let s = RamificationSet::for_twist(sigma);
    let records = sigma.trace_table(p_max, allow_char3)?;
    let rows = records
        .iter()
        .map(|r| {
            Ok(TraceRow {
                p: r.p,
                xi: xi_vector(r.p, &s)?,
                count: r.count,
                trace: r.trace,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let char3_primes = records.iter().filter(|r| r.char3).map(|r| r.p).collect();
    let notice = rows.is_empty().then(|| {
        let mut msg = format!(
            "no good primes up to {p_max} for {} (bad primes {:?})",
            sigma.id,
            sigma.bad_primes()
        );
        if !allow_char3 && p_max >= 3 && !s.contains(3) {
            msg.push_str("; p = 3 requires --allow-char3");
        }
        msg
    });
    Ok(TraceTablePayload {
        twist: sigma.id,
        e: sigma.node_census().euler,
        discrepancies: discrepancies(sigma.id, &rows),
        s,
        rows,
        char3_primes,
        notice,
    })
}

fn discrepancies(twist: TwistId, rows: &[TraceRow]) -> Vec<Discrepancy> {
    let Some(table) = published_table(twist) else {
        return Vec::new();
    };
    let others: Vec<_> = TwistId::TWISTED
        .into_iter()
        .filter(|&t| t != twist)
        .filter_map(published_table)
        .collect();
    let mut out = Vec::new();
    for row in rows {
        let Some(published) = table.row(row.p) else {
            continue;
        };
        let mut check = |field: &str, computed: String, published: String, get: &dyn Fn(&crate::qseries::PublishedRow) -> String| {
            if computed != published {
                let also = others
                    .iter()
                    .filter(|t| t.row(row.p).is_some_and(|r| get(r) == computed))
                    .map(|t| t.twist)
                    .collect();
                out.push(Discrepancy {
                    p: row.p,
                    field: field.to_string(),
                    computed,
                    published,
                    computed_value_published_for: also,
                });
            }
        };
        check("xi", row.xi.to_string(), crate::livne::SignVector::from_bits(published.xi.clone()).map(|v| v.to_string()).unwrap_or_default(), &|r| {
            crate::livne::SignVector::from_bits(r.xi.clone()).map(|v| v.to_string()).unwrap_or_default()
        });
        check("count", row.count.to_string(), published.count.to_string(), &|r| r.count.to_string());
        check("trace", row.trace.to_string(), published.trace.to_string(), &|r| r.trace.to_string());
    }
    out
}

fn trace(name: &str, p_max: u64, allow_char3: bool, format: Format) -> Result<Response> {
    let sigma = twist(name)?;
    let payload = trace_payload(&sigma, p_max, allow_char3)?;
    let mut notes: Vec<String> = payload.notice.iter().cloned().collect();
    for d in &payload.discrepancies {
        let mut note = format!(
            "warning: p = {}: computed {} {} differs from published {}",
            d.p, d.field, d.computed, d.published
        );
        if !d.computed_value_published_for.is_empty() {
            let names: Vec<String> = d
                .computed_value_published_for
                .iter()
                .map(|t| t.to_string())
                .collect();
            note.push_str(&format!(" (published for {})", names.join(", ")));
        }
        notes.push(note);
    }
    let csv = (format == Format::Csv).then(|| write_trace_csv(&payload.rows));
    let mut r = Response::ok(&payload);
    r.notes = notes;
    r.csv = csv;
    Ok(r)
}

fn parse_cubic(text: &str) -> Result<Cubic> {
    let coeffs: Vec<i64> = text
        .split(',')
        .map(|c| {
            c.trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("cubic {text:?}")))
        })
        .collect::<Result<_>>()?;
    let coeffs: [i64; 4] = coeffs
        .try_into()
        .map_err(|_| Error::InvalidArgument(format!("cubic {text:?} needs four coefficients")))?;
    Cubic::try_from(coeffs)
}

fn verify(a: &super::VerifyArgs) -> Result<Response> {
    let sigma = twist(&a.twist)?;
    let level = a.fixture_level.unwrap_or_else(|| expected_level(sigma.id));
    let fixture = fixture(level)?;
    let cubics = if a.cubics.is_empty() {
        None
    } else {
        Some(a.cubics.iter().map(|c| parse_cubic(c)).collect::<Result<Vec<_>>>()?)
    };
    let options = VerifyOptions {
        p_limit: a.plimit,
        allow_char3: a.allow_char3,
        parity_bound: a.parity_bound,
        cubics,
    };
    let report = verify_modularity(&sigma, &fixture, &options)?;
    let mut r = Response::ok(&report);
    if !report.is_modular() {
        r.code = EXIT_MISMATCH;
        r.notes.push(match report.first_mismatch() {
            Some(c) => format!(
                "mismatch at p = {}: trace {} but a_p = {} (level {})",
                c.p, c.trace, c.ap, level
            ),
            None => format!("not verified: {:?}", report.verdict),
        });
    }
    Ok(r)
}

fn check_nmax(n_max: usize) -> Result<()> {
    if n_max > MAX_PRECISION {
        return Err(Error::InvalidArgument(format!(
            "nmax {n_max} exceeds {MAX_PRECISION}"
        )));
    }
    Ok(())
}

fn eta(n_max: usize) -> Result<Response> {
    check_nmax(n_max)?;
    if n_max == 0 {
        return Err(Error::InvalidArgument("nmax must be positive".into()));
    }
    let f = level6_form(n_max.max(2))?;
    let terms: Vec<Value> = (1..=n_max)
        .map(|n| json!({"n": n, "a": f.coeff(n).expect("within precision")}))
        .collect();
    Ok(Response::ok(json!({ "n_max": n_max, "terms": terms })))
}

fn selfcheck(p_max: u64) -> Result<Response> {
    check_nmax(p_max as usize)?;
    let sigma = TwistAut::new(TwistId::Identity);
    let bad = sigma.bad_primes();
    let primes: Vec<u64> = primes_in(5, p_max)
        .into_iter()
        .filter(|p| !bad.contains(p))
        .collect();
    let f = level6_form((p_max as usize).max(2))?;
    let mut comparisons = Vec::new();
    let mut mismatches = Vec::new();
    for p in &primes {
        let trace = sigma.lefschetz_trace(*p)?;
        let eta = f.coeff(*p as usize).expect("within precision");
        if trace != eta {
            mismatches.push(*p);
        }
        comparisons.push(json!({"p": p, "trace": trace, "eta": eta}));
    }
    let mut payload = json!({
        "p_max": p_max,
        "comparisons": comparisons,
        "mismatches": mismatches,
        "all_match": mismatches.is_empty(),
    });
    let mut notes = Vec::new();
    if primes.is_empty() {
        let msg = format!("no good primes in 5..={p_max} (bad primes {bad:?})");
        payload["notice"] = json!(msg);
        notes.push(msg);
    }
    let mut r = Response::ok(payload);
    if !mismatches.is_empty() {
        r.code = EXIT_MISMATCH;
        notes.push(format!("trace differs from eta coefficient at {mismatches:?}"));
    }
    r.notes = notes;
    Ok(r)
}

fn covering(set: &[u64], limit: u64, exclude: &[u64]) -> Result<Response> {
    if !set.contains(&2) {
        return Err(Error::InvalidArgument("ramification set must contain 2".into()));
    }
    if let Some(&q) = set.iter().find(|&&q| !crate::ffarith::is_prime(q)) {
        return Err(Error::InvalidArgument(format!("{q} is not prime")));
    }
    let s = RamificationSet::new(set.iter().copied());
    let witnesses = find_covering(&s, limit, exclude)?;
    Ok(Response::ok(json!({
        "S": s,
        "limit": limit,
        "exclude": exclude,
        "witnesses": witnesses,
    })))
}
