//! Finite verification of an isomorphism of 2-adic representations: sign
//! vectors of Frobenius in the multiquadratic extension unramified outside
//! `S`, covering sets, parity certificates and the full modularity report.
//!
//! Representations never appear explicitly. Everything is decided from
//! integer traces (point counts) and newform coefficients.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffarith::{check_odd_prime, cubic_irreducible, legendre_reciprocity, primes_in, Cubic};
use crate::qseries::NewformFixture;
use crate::threefold::{TwistAut, TwistId};

/// `{2} ∪ bad primes`, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RamificationSet(Vec<u64>);

impl RamificationSet {
    pub fn new(primes: impl IntoIterator<Item = u64>) -> Self {
        let mut v: Vec<u64> = primes.into_iter().chain(std::iter::once(2)).collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }

    pub fn for_twist(sigma: &TwistAut) -> Self {
        Self::new(sigma.bad_primes())
    }

    pub fn primes(&self) -> &[u64] {
        &self.0
    }

    pub fn contains(&self, p: u64) -> bool {
        self.0.binary_search(&p).is_ok()
    }

    /// `2^{#S + 1}`, the order of the Galois group of the compositum.
    pub fn group_order(&self) -> usize {
        1 << (self.0.len() + 1)
    }
}

/// Image of Frobenius in `(Z/2Z)^{#S+1}`, coordinates ordered
/// `(-1, s_1 < s_2 < ...)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignVector(Vec<u8>);

impl SignVector {
    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Parse(format!("sign vector {bits:?} is not binary")));
        }
        Ok(Self(bits))
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str(")")
    }
}

impl std::str::FromStr for SignVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("sign vector {s:?}")))?;
        let bits = inner
            .split(',')
            .map(|b| b.trim().parse::<u8>().map_err(|e| Error::Parse(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(bits)
    }
}

/// Sign vector of `Frob_p`: the bit for `s` is `(1 - (s/p))/2`.
pub fn xi_vector(p: u64, s: &RamificationSet) -> Result<SignVector> {
    if p == 2 || s.contains(p) {
        return Err(Error::RamifiedPrime(p));
    }
    let p = check_odd_prime(p as i64)?;
    let bit = |a: i64| u8::from(legendre_reciprocity(a, p) == -1);
    let mut bits = vec![bit(-1)];
    bits.extend(s.primes().iter().map(|&q| bit(q as i64)));
    Ok(SignVector(bits))
}

fn check_disjoint(t: &[u64], s: &RamificationSet) -> Result<()> {
    let overlap: Vec<u64> = t.iter().copied().filter(|&p| s.contains(p)).collect();
    if overlap.is_empty() {
        Ok(())
    } else {
        Err(Error::CoveringOverlap(overlap))
    }
}

/// Whether the Frobenii at `t` exhaust `Gal(Q[S]/Q)`.
pub fn is_covering(t: &[u64], s: &RamificationSet) -> Result<bool> {
    check_disjoint(t, s)?;
    let mut seen = std::collections::BTreeSet::new();
    for &p in t {
        seen.insert(xi_vector(p, s)?);
    }
    Ok(seen.len() == s.group_order())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringWitness {
    pub p: u64,
    pub xi: SignVector,
}

/// Greedy scan of `candidates` (ascending), keeping the first prime that
/// realizes each unseen sign vector. Returns the witnesses found and
/// whether they cover.
fn greedy_cover(
    s: &RamificationSet,
    candidates: impl IntoIterator<Item = u64>,
) -> Result<(Vec<CoveringWitness>, bool)> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for p in candidates {
        if p == 2 || s.contains(p) {
            continue;
        }
        let xi = xi_vector(p, s)?;
        if seen.insert(xi.clone()) {
            out.push(CoveringWitness { p, xi });
            if seen.len() == s.group_order() {
                return Ok((out, true));
            }
        }
    }
    Ok((out, false))
}

/// Smallest-primes covering set: one witness per sign vector.
pub fn find_covering(
    s: &RamificationSet,
    p_limit: u64,
    exclude: &[u64],
) -> Result<Vec<CoveringWitness>> {
    let candidates = primes_in(3, p_limit)
        .into_iter()
        .filter(|p| !exclude.contains(p));
    let (witnesses, covers) = greedy_cover(s, candidates)?;
    if covers {
        Ok(witnesses)
    } else {
        Err(Error::InsufficientLimit {
            limit: p_limit,
            missing: s.group_order() - witnesses.len(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertificateKind {
    /// No S3 or C3 extension unramified outside the level and 2 exists.
    NoExtension,
    /// `cubic` is irreducible mod `p` while `a_p` is even.
    Cubic { cubic: Cubic, p: u64, ap: i64 },
}

/// Rules out an odd trace: Frobenius at `p` would have order 3 in the
/// splitting field of `cubic`, forcing `a_p` odd.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionCertificate {
    pub level: u32,
    #[serde(flatten)]
    pub kind: CertificateKind,
}

impl ObstructionCertificate {
    /// Re-checks the certificate against a fixture.
    pub fn validate(&self, fixture: &NewformFixture) -> bool {
        match &self.kind {
            CertificateKind::NoExtension => fixture.cubics() == Some(&[]),
            CertificateKind::Cubic { cubic, p, ap } => {
                fixture.ap(*p) == Some(*ap)
                    && ap % 2 == 0
                    && cubic_irreducible(cubic, *p).unwrap_or(false)
            }
        }
    }
}

/// One certificate per cubic, taking the first prime of `pool` where the
/// cubic is irreducible and the fixture coefficient is even.
pub fn parity_certificate(
    level: u32,
    cubics: &[Cubic],
    fixture: &NewformFixture,
    pool: &[u64],
) -> Result<Vec<ObstructionCertificate>> {
    if cubics.is_empty() {
        return Ok(vec![ObstructionCertificate {
            level,
            kind: CertificateKind::NoExtension,
        }]);
    }
    let level_primes = fixture.level_primes();
    let mut pool: Vec<u64> = pool
        .iter()
        .copied()
        .filter(|&p| p != 2 && !level_primes.contains(&p))
        .collect();
    pool.sort_unstable();
    pool.dedup();

    let mut out = Vec::with_capacity(cubics.len());
    for cubic in cubics {
        let witness = pool.iter().find_map(|&p| {
            let ap = fixture.ap(p)?;
            let irreducible = cubic_irreducible(cubic, p).ok()?;
            (irreducible && ap % 2 == 0).then_some((p, ap))
        });
        match witness {
            Some((p, ap)) => out.push(ObstructionCertificate {
                level,
                kind: CertificateKind::Cubic {
                    cubic: *cubic,
                    p,
                    ap,
                },
            }),
            None => {
                return Err(Error::IncompleteFixture {
                    level,
                    needed: pool.iter().copied().filter(|&p| fixture.ap(p).is_none()).collect(),
                })
            }
        }
    }
    Ok(out)
}

/// The newform level each twist is matched against.
pub fn expected_level(twist: TwistId) -> u32 {
    match twist {
        TwistId::Identity => 6,
        TwistId::Pi1 => 17,
        TwistId::Pi2 => 21,
        TwistId::Pi3 => 10,
        TwistId::Pi4 | TwistId::Pi5 => 73,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Upper bound for covering-set primes.
    pub p_limit: u64,
    /// Admit `p = 3` into the covering set even when other witnesses exist.
    pub allow_char3: bool,
    /// Largest prime in the parity sweep of the point counts.
    pub parity_bound: u64,
    /// Cubic list overriding the fixture's (for levels where it is external).
    pub cubics: Option<Vec<Cubic>>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            p_limit: 200,
            allow_char3: false,
            parity_bound: 200,
            cubics: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub p: u64,
    pub xi: SignVector,
    pub count: u64,
    pub trace: i64,
    pub ap: i64,
    pub matches: bool,
    pub char3: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum CubicStatus {
    Certified,
    /// The S3/C3 cubic list is not part of the fixture.
    ConditionalOnExternalCubics,
    Incomplete { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParitySummary {
    pub bound: u64,
    pub primes_checked: usize,
    pub odd_counts: Vec<u64>,
    pub odd_traces: Vec<u64>,
    pub odd_fixture_coefficients: Vec<u64>,
    pub certificates: Vec<ObstructionCertificate>,
    pub cubics: CubicStatus,
}

impl ParitySummary {
    pub fn sweep_passed(&self) -> bool {
        self.odd_counts.is_empty()
            && self.odd_traces.is_empty()
            && self.odd_fixture_coefficients.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Modular,
    Mismatch { p: u64, trace: i64, ap: i64 },
    ParityFailure,
    LevelOutsideRamification,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub twist: TwistId,
    pub level: u32,
    #[serde(rename = "S")]
    pub ramification: RamificationSet,
    pub covering: Vec<CoveringWitness>,
    /// Set when 3 had to enter the covering set under the default policy.
    pub char3_fallback: bool,
    pub comparisons: Vec<Comparison>,
    pub parity: ParitySummary,
    pub analytic_conditions: Vec<String>,
    pub verdict: Verdict,
}

impl VerificationReport {
    pub fn is_modular(&self) -> bool {
        self.verdict == Verdict::Modular
    }

    pub fn first_mismatch(&self) -> Option<&Comparison> {
        self.comparisons.iter().find(|c| !c.matches)
    }
}

fn choose_covering(
    s: &RamificationSet,
    fixture: &NewformFixture,
    options: &VerifyOptions,
) -> Result<(Vec<CoveringWitness>, bool, bool)> {
    let available = |with_three: bool| {
        fixture
            .primes()
            .filter(move |&p| p <= options.p_limit && (with_three || p != 3))
    };
    let (witnesses, covers) = greedy_cover(s, available(options.allow_char3))?;
    if covers || options.allow_char3 || s.contains(3) || fixture.ap(3).is_none() {
        return Ok((witnesses, covers, false));
    }
    // the only fixture witness for some class may be 3
    let (retry, retry_covers) = greedy_cover(s, available(true))?;
    if retry_covers {
        Ok((retry, true, true))
    } else {
        Ok((witnesses, false, false))
    }
}

/// Checks the conditions of Livné's criterion for `σ` against `fixture`.
///
/// Traces are compared on a covering set drawn from the fixture's primes.
/// Evenness is checked by a point-count sweep over all good primes up to
/// `parity_bound` and by cubic obstruction certificates for the newform.
pub fn verify_modularity(
    sigma: &TwistAut,
    fixture: &NewformFixture,
    options: &VerifyOptions,
) -> Result<VerificationReport> {
    let s = RamificationSet::for_twist(sigma);
    let level_ok = fixture.level_primes().iter().all(|&q| s.contains(q));
    let (covering, covers, char3_fallback) = choose_covering(&s, fixture, options)?;

    let mut comparisons: Vec<Comparison> = covering
        .par_iter()
        .map(|w| {
            let count = sigma.total_count(w.p)?.total;
            let trace = sigma.trace_from_count(w.p, count)?;
            let ap = fixture.ap(w.p).expect("covering drawn from fixture primes");
            Ok(Comparison {
                p: w.p,
                xi: w.xi.clone(),
                count,
                trace,
                ap,
                matches: trace == ap,
                char3: w.p == 3,
            })
        })
        .collect::<Result<_>>()?;
    comparisons.sort_by_key(|c| c.p);
    let mismatch = comparisons.iter().find(|c| !c.matches).cloned();

    if mismatch.is_none() && !covers {
        // one prime per class the fixture cannot witness
        let exclude: &[u64] = if options.allow_char3 { &[] } else { &[3] };
        let seen: Vec<&SignVector> = covering.iter().map(|w| &w.xi).collect();
        let needed = find_covering(&s, options.p_limit, exclude)?
            .into_iter()
            .filter(|w| !seen.contains(&&w.xi))
            .map(|w| w.p)
            .collect();
        return Err(Error::IncompleteFixture {
            level: fixture.level(),
            needed,
        });
    }

    let parity = parity_summary(sigma, &s, fixture, options)?;

    let verdict = if let Some(c) = mismatch {
        Verdict::Mismatch {
            p: c.p,
            trace: c.trace,
            ap: c.ap,
        }
    } else if !level_ok {
        Verdict::LevelOutsideRamification
    } else if !parity.sweep_passed() || matches!(parity.cubics, CubicStatus::Incomplete { .. })
    {
        Verdict::ParityFailure
    } else {
        Verdict::Modular
    };

    Ok(VerificationReport {
        twist: sigma.id,
        level: fixture.level(),
        ramification: s,
        covering,
        char3_fallback,
        comparisons,
        parity,
        analytic_conditions: vec![
            "det of Frobenius is p^3 on both sides (cyclotomic character cubed)".into(),
            "determinants agree mod 2 by Chebotarev density".into(),
        ],
        verdict,
    })
}

fn parity_summary(
    sigma: &TwistAut,
    s: &RamificationSet,
    fixture: &NewformFixture,
    options: &VerifyOptions,
) -> Result<ParitySummary> {
    let lo = if options.allow_char3 { 3 } else { 5 };
    let primes: Vec<u64> = primes_in(lo, options.parity_bound)
        .into_iter()
        .filter(|&p| !s.contains(p))
        .collect();
    let sweep: Vec<(u64, u64, i64)> = primes
        .par_iter()
        .map(|&p| {
            let count = sigma.total_count(p)?.total;
            Ok((p, count, sigma.trace_from_count(p, count)?))
        })
        .collect::<Result<_>>()?;
    let odd_counts = sweep.iter().filter(|r| r.1 % 2 != 0).map(|r| r.0).collect();
    let odd_traces = sweep.iter().filter(|r| r.2 % 2 != 0).map(|r| r.0).collect();
    let odd_fixture_coefficients = fixture
        .primes()
        .filter(|&p| !s.contains(p) && fixture.ap(p).is_some_and(|a| a % 2 != 0))
        .collect();

    let (certificates, cubics) = match options.cubics.as_deref().or(fixture.cubics()) {
        None => (Vec::new(), CubicStatus::ConditionalOnExternalCubics),
        Some(list) => {
            let pool: Vec<u64> = if fixture.parity_witnesses().is_empty() {
                fixture.primes().collect()
            } else {
                fixture.parity_witnesses().to_vec()
            };
            match parity_certificate(fixture.level(), list, fixture, &pool) {
                Ok(certs) => (certs, CubicStatus::Certified),
                Err(e) => (
                    Vec::new(),
                    CubicStatus::Incomplete {
                        reason: e.to_string(),
                    },
                ),
            }
        }
    };

    Ok(ParitySummary {
        bound: options.parity_bound,
        primes_checked: sweep.len(),
        odd_counts,
        odd_traces,
        odd_fixture_coefficients,
        certificates,
        cubics,
    })
}
