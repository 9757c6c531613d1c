use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::livne::{RamificationSet, SignVector};
use crate::threefold::{TraceRecord, TwistId};

pub const SCHEMA: &str = "cy-modularity/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: u64,
}

/// One self-describing document per invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub schema: String,
    pub command: serde_json::Value,
    pub payload: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl OutputDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.schema != SCHEMA {
            return Err(Error::Parse(format!("unknown schema {:?}", doc.schema)));
        }
        Ok(doc)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRow {
    pub p: u64,
    pub xi: SignVector,
    pub count: u64,
    pub trace: i64,
}

/// A computed value that differs from the published table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub p: u64,
    pub field: String,
    pub computed: String,
    pub published: String,
    /// Other published tables whose row at `p` carries the computed value.
    pub computed_value_published_for: Vec<TwistId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceTablePayload {
    pub twist: TwistId,
    pub e: u64,
    #[serde(rename = "S")]
    pub s: RamificationSet,
    pub rows: Vec<TraceRow>,
    /// Rows computed with the characteristic-3 fibre rules.
    pub char3_primes: Vec<u64>,
    pub discrepancies: Vec<Discrepancy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notice: Option<String>,
}

impl TraceTablePayload {
    pub fn records(&self) -> Vec<TraceRecord> {
        self.rows
            .iter()
            .map(|r| TraceRecord {
                twist: self.twist,
                p: r.p,
                xi: Some(r.xi.clone()),
                count: r.count,
                trace: r.trace,
                char3: self.char3_primes.contains(&r.p),
            })
            .collect()
    }
}

/// Re-reads the records of a JSON `trace` document.
pub fn parse_trace_json(text: &str) -> Result<Vec<TraceRecord>> {
    let doc = OutputDocument::from_json(text)?;
    let payload: TraceTablePayload =
        serde_json::from_value(doc.payload).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(payload.records())
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    p: u64,
    xi: String,
    count: u64,
    trace: i64,
}

pub(crate) fn write_trace_csv(rows: &[TraceRow]) -> String {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    // header is written even for an empty table
    w.write_record(["p", "xi", "count", "trace"]).expect("in-memory write");
    for r in rows {
        w.serialize(CsvRow {
            p: r.p,
            xi: r.xi.to_string(),
            count: r.count,
            trace: r.trace,
        })
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

/// Re-reads a CSV `trace` table. The twist is not part of the CSV layout;
/// a row at `p = 3` is always a characteristic-3 row.
pub fn parse_trace_csv(text: &str, twist: TwistId) -> Result<Vec<TraceRecord>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r.headers().map_err(|e| Error::Parse(e.to_string()))?;
    if headers != vec!["p", "xi", "count", "trace"] {
        return Err(Error::Parse(format!("unexpected CSV header {headers:?}")));
    }
    r.deserialize::<CsvRow>()
        .map(|row| {
            let row = row.map_err(|e| Error::Parse(e.to_string()))?;
            Ok(TraceRecord {
                twist,
                p: row.p,
                xi: Some(row.xi.parse()?),
                count: row.count,
                trace: row.trace,
                char3: row.p == 3,
            })
        })
        .collect()
}
