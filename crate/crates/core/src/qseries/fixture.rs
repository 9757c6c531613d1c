//! Newform coefficient fixtures and reference trace tables.
//!
//! Levels 10, 17, 21 and 73 are published data carried in embedded JSON
//! documents. Level 6 is expanded from its eta product at load time.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::level6_form;
use crate::error::{Error, Result};
use crate::ffarith::{is_prime, Cubic};
use crate::threefold::TwistId;

const NEWFORMS_JSON: &str = include_str!("../../fixtures/newforms.json");
const TABLES_JSON: &str = include_str!("../../fixtures/published_tables.json");

pub const SUPPORTED_LEVELS: [u32; 5] = [6, 10, 17, 21, 73];

/// Number of eta-product terms used for the level-6 fixture.
const ETA_FIXTURE_TERMS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    PaperExpansion,
    PaperTable,
    EtaDerived,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureEntry {
    pub ap: i64,
    pub provenance: Vec<Provenance>,
}

/// On-disk shape: one record per (index, source).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct FixtureRecord {
    p: u64,
    ap: i64,
    provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct FixtureDocument {
    level: u32,
    entries: Vec<FixtureRecord>,
    #[serde(default)]
    cubics: Option<Vec<Cubic>>,
    #[serde(default)]
    parity_witnesses: Vec<u64>,
}

/// Prime-indexed coefficients of a weight-4 newform.
///
/// Index 1 carries the normalisation `a_1 = 1`; every other index is prime.
/// `cubics` lists the cubics whose splitting fields are the S3/C3 extensions
/// unramified outside the level (and 2): `Some(vec![])` when none exist,
/// `None` when the list is not known to the fixture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewformFixture {
    level: u32,
    entries: BTreeMap<u64, FixtureEntry>,
    cubics: Option<Vec<Cubic>>,
    parity_witnesses: Vec<u64>,
}

impl NewformFixture {
    fn from_document(doc: FixtureDocument) -> Result<Self> {
        let mut entries: BTreeMap<u64, FixtureEntry> = BTreeMap::new();
        for rec in doc.entries {
            if rec.p != 1 && !is_prime(rec.p) {
                return Err(Error::Parse(format!(
                    "level {}: index {} is neither 1 nor prime",
                    doc.level, rec.p
                )));
            }
            match entries.get_mut(&rec.p) {
                Some(e) if e.ap != rec.ap => {
                    return Err(Error::Parse(format!(
                        "level {}: conflicting a_{} values {} and {}",
                        doc.level, rec.p, e.ap, rec.ap
                    )))
                }
                Some(e) => {
                    if !e.provenance.contains(&rec.provenance) {
                        e.provenance.push(rec.provenance);
                    }
                }
                None => {
                    entries.insert(
                        rec.p,
                        FixtureEntry {
                            ap: rec.ap,
                            provenance: vec![rec.provenance],
                        },
                    );
                }
            }
        }
        if entries.get(&1).map(|e| e.ap) != Some(1) {
            return Err(Error::Parse(format!(
                "level {}: newform is not normalized (a_1 != 1)",
                doc.level
            )));
        }
        Ok(Self {
            level: doc.level,
            entries,
            cubics: doc.cubics,
            parity_witnesses: doc.parity_witnesses,
        })
    }

    fn to_document(&self) -> FixtureDocument {
        let mut records: Vec<FixtureRecord> = self
            .entries
            .iter()
            .flat_map(|(&p, e)| {
                e.provenance.iter().map(move |&provenance| FixtureRecord {
                    p,
                    ap: e.ap,
                    provenance,
                })
            })
            .collect();
        records.sort_by_key(|r| (r.provenance, r.p));
        FixtureDocument {
            level: self.level,
            entries: records,
            cubics: self.cubics.clone(),
            parity_witnesses: self.parity_witnesses.clone(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: FixtureDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_document(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("fixture serializes")
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_document()).expect("fixture serializes")
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn ap(&self, p: u64) -> Option<i64> {
        self.entries.get(&p).map(|e| e.ap)
    }

    pub fn entry(&self, p: u64) -> Option<&FixtureEntry> {
        self.entries.get(&p)
    }

    /// Primes with a known coefficient, ascending.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.keys().copied().filter(|&p| p != 1)
    }

    pub fn cubics(&self) -> Option<&[Cubic]> {
        self.cubics.as_deref()
    }

    pub fn parity_witnesses(&self) -> &[u64] {
        &self.parity_witnesses
    }

    /// Prime divisors of the level.
    pub fn level_primes(&self) -> Vec<u64> {
        (2..=u64::from(self.level))
            .filter(|&q| is_prime(q) && u64::from(self.level) % q == 0)
            .collect()
    }
}

fn eta_fixture() -> Result<NewformFixture> {
    let f = level6_form(ETA_FIXTURE_TERMS)?;
    let entries = f
        .coefficients()
        .iter()
        .enumerate()
        .filter(|&(n, _)| n == 1 || is_prime(n as u64))
        .map(|(n, &ap)| FixtureRecord {
            p: n as u64,
            ap,
            provenance: Provenance::EtaDerived,
        })
        .collect();
    NewformFixture::from_document(FixtureDocument {
        level: 6,
        entries,
        cubics: None,
        parity_witnesses: Vec::new(),
    })
}

/// The fixture for a supported level.
pub fn fixture(level: u32) -> Result<NewformFixture> {
    if level == 6 {
        return eta_fixture();
    }
    let docs: Vec<FixtureDocument> =
        serde_json::from_str(NEWFORMS_JSON).map_err(|e| Error::Parse(e.to_string()))?;
    let doc = docs
        .into_iter()
        .find(|d| d.level == level)
        .ok_or(Error::UnsupportedLevel(level))?;
    NewformFixture::from_document(doc)
}

/// Coefficients of `1 - a_p T + p^3 T^2`, the reciprocal of the good
/// Euler factor at `p` with `T = p^{-s}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerFactor {
    pub constant: i64,
    pub linear: i64,
    pub quadratic: i64,
}

impl EulerFactor {
    pub fn as_tuple(&self) -> (i64, i64, i64) {
        (self.constant, self.linear, self.quadratic)
    }
}

pub fn euler_factor(p: u64, ap: i64) -> EulerFactor {
    debug_assert!(is_prime(p));
    let p = p as i64;
    EulerFactor {
        constant: 1,
        linear: -ap,
        quadratic: p * p * p,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublishedRow {
    pub p: u64,
    pub xi: Vec<u8>,
    pub count: u64,
    pub trace: i64,
}

/// A published table of point counts and traces for one twist.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublishedTable {
    pub twist: TwistId,
    pub e: u64,
    #[serde(rename = "S")]
    pub s: Vec<u64>,
    pub rows: Vec<PublishedRow>,
}

impl PublishedTable {
    pub fn row(&self, p: u64) -> Option<&PublishedRow> {
        self.rows.iter().find(|r| r.p == p)
    }
}

/// Reference table for a twist; the untwisted product has none.
pub fn published_table(twist: TwistId) -> Option<PublishedTable> {
    let tables: Vec<PublishedTable> =
        serde_json::from_str(TABLES_JSON).expect("embedded tables parse");
    tables.into_iter().find(|t| t.twist == twist)
}
