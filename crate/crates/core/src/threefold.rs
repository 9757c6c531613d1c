//! Twisted self fibre products of the level-6 modular surface.
//!
//! For a twist `σ` of the base line permuting the cusps `0, 1, ∞`, the fibre
//! of the threefold over `k` is `F_k × F_{σ⁻¹(k)}`. Over a double cusp both
//! factors are singular and every pair of singular points is a node, which
//! the small resolution replaces by a line.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffarith::{check_odd_prime, primes_in, reduce, FpElem};
use crate::livne::SignVector;
use crate::surface::{
    classify_fibre, classify_fibre_rational, check_surface_prime, FibreClass, FibreParam,
    FibreTable, Kodaira, NODAL_CUSP,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TwistId {
    Identity,
    Pi1,
    Pi2,
    Pi3,
    Pi4,
    Pi5,
}

impl TwistId {
    pub const ALL: [TwistId; 6] = [
        TwistId::Identity,
        TwistId::Pi1,
        TwistId::Pi2,
        TwistId::Pi3,
        TwistId::Pi4,
        TwistId::Pi5,
    ];

    /// The five non-trivial twists.
    pub const TWISTED: [TwistId; 5] = [
        TwistId::Pi1,
        TwistId::Pi2,
        TwistId::Pi3,
        TwistId::Pi4,
        TwistId::Pi5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TwistId::Identity => "identity",
            TwistId::Pi1 => "pi1",
            TwistId::Pi2 => "pi2",
            TwistId::Pi3 => "pi3",
            TwistId::Pi4 => "pi4",
            TwistId::Pi5 => "pi5",
        }
    }
}

impl fmt::Display for TwistId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TwistId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TwistId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown twist {s:?}")))
    }
}

impl Serialize for TwistId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for TwistId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}

/// A fractional-linear automorphism `t ↦ (at + b)/(ct + d)` of the base line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwistAut {
    pub id: TwistId,
    pub matrix: [[i64; 2]; 2],
}

/// The four base points that can carry singular fibres in characteristic 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cusp {
    Zero,
    One,
    Infinity,
    Nodal,
}

impl Cusp {
    pub const ALL: [Cusp; 4] = [Cusp::Zero, Cusp::One, Cusp::Infinity, Cusp::Nodal];

    /// `(num, den)` with `den = 0` at infinity.
    pub fn rational(self) -> (i64, i64) {
        match self {
            Cusp::Zero => (0, 1),
            Cusp::One => (1, 1),
            Cusp::Infinity => (1, 0),
            Cusp::Nodal => (NODAL_CUSP, 1),
        }
    }

    pub fn reduce(self, p: u64) -> FibreParam {
        match self.rational() {
            (_, 0) => FibreParam::Infinity,
            (n, _) => FibreParam::finite(n, p),
        }
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rational() {
            (_, 0) => f.write_str("inf"),
            (n, _) => write!(f, "{n}"),
        }
    }
}

impl Serialize for Cusp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn normalize((num, den): (i64, i64)) -> (i64, i64) {
    if den == 0 {
        return (1, 0);
    }
    let g = gcd(num, den);
    let s = den.signum();
    (s * num / g, s * den / g)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl TwistAut {
    pub fn new(id: TwistId) -> Self {
        let matrix = match id {
            TwistId::Identity => [[1, 0], [0, 1]],
            // 1 - t
            TwistId::Pi1 => [[-1, 1], [0, 1]],
            // 1/t
            TwistId::Pi2 => [[0, 1], [1, 0]],
            // t/(t - 1)
            TwistId::Pi3 => [[1, 0], [1, -1]],
            // 1/(1 - t)
            TwistId::Pi4 => [[0, 1], [-1, 1]],
            // (t - 1)/t
            TwistId::Pi5 => [[1, -1], [1, 0]],
        };
        Self { id, matrix }
    }

    pub fn all() -> impl Iterator<Item = TwistAut> {
        TwistId::ALL.into_iter().map(TwistAut::new)
    }

    pub fn twisted() -> impl Iterator<Item = TwistAut> {
        TwistId::TWISTED.into_iter().map(TwistAut::new)
    }

    pub fn determinant(&self) -> i64 {
        let [[a, b], [c, d]] = self.matrix;
        a * d - b * c
    }

    /// Inverse via the adjugate matrix, kept over the integers.
    pub fn inverse(&self) -> TwistAut {
        let [[a, b], [c, d]] = self.matrix;
        let id = match self.id {
            TwistId::Pi4 => TwistId::Pi5,
            TwistId::Pi5 => TwistId::Pi4,
            other => other,
        };
        TwistAut {
            id,
            matrix: [[d, -b], [-c, a]],
        }
    }

    /// Evaluates the map on `F_p ∪ {∞}`.
    pub fn apply(&self, t: FibreParam, p: u64) -> Result<FibreParam> {
        let p = check_odd_prime(p as i64)?;
        if reduce(self.determinant(), p) == 0 {
            return Err(Error::DegenerateReduction {
                twist: self.id.to_string(),
                p,
            });
        }
        Ok(self.apply_unchecked(t, p))
    }

    pub(crate) fn apply_unchecked(&self, t: FibreParam, p: u64) -> FibreParam {
        let [[a, b], [c, d]] = self.matrix;
        let (num, den) = match t {
            FibreParam::Infinity => (reduce(a, p), reduce(c, p)),
            FibreParam::Finite(t) => {
                let t = t as i64;
                (reduce(a * t + b, p), reduce(c * t + d, p))
            }
        };
        if den == 0 {
            return FibreParam::Infinity;
        }
        let den = FpElem::from_reduced(den, p).inverse().expect("nonzero");
        FibreParam::Finite((FpElem::from_reduced(num, p) * den).value())
    }

    /// Evaluates the map on a rational point `num/den` (`den = 0` is ∞).
    pub fn apply_rational(&self, (num, den): (i64, i64)) -> (i64, i64) {
        let [[a, b], [c, d]] = self.matrix;
        normalize((a * num + b * den, c * num + d * den))
    }

    /// Primes of bad reduction of the resolved threefold.
    ///
    /// 2 (resp. 3) is bad when σ fixes 0 (resp. 1): the fibre there has two
    /// additive factors. A prime `p >= 5` is bad when σ(-8) ≡ -8 mod p,
    /// which adds a node over the nodal fibre.
    pub fn bad_primes(&self) -> Vec<u64> {
        let mut bad = Vec::new();
        if self.apply_rational(Cusp::Zero.rational()) == Cusp::Zero.rational() {
            bad.push(2);
        }
        if self.apply_rational(Cusp::One.rational()) == Cusp::One.rational() {
            bad.push(3);
        }
        let [[a, b], [c, d]] = self.matrix;
        let t = NODAL_CUSP;
        let cross = (a * t + b) - t * (c * t + d);
        // cross == 0 only for the identity, where -8 is a genuine double cusp
        if cross != 0 {
            bad.extend(prime_factors(cross.unsigned_abs()).into_iter().filter(|&q| q >= 5));
        }
        bad.sort_unstable();
        bad.dedup();
        bad
    }

    /// Double cusps and node counts in characteristic 0.
    pub fn node_census(&self) -> NodeCensus {
        let inv = self.inverse();
        let cusps: Vec<CuspNodes> = Cusp::ALL
            .into_iter()
            .filter_map(|cusp| {
                let (n, d) = cusp.rational();
                let first = classify_fibre_rational(n, d);
                let (n2, d2) = inv.apply_rational((n, d));
                let second = classify_fibre_rational(n2, d2);
                (first.is_singular() && second.is_singular()).then(|| CuspNodes {
                    cusp,
                    first: first.kodaira,
                    second: second.kodaira,
                    nodes: u64::from(first.singular_points * second.singular_points),
                })
            })
            .collect();
        let total_nodes: u64 = cusps.iter().map(|c| c.nodes).sum();
        NodeCensus {
            twist: self.id,
            cusps,
            total_nodes,
            euler: 2 * total_nodes,
            h11: total_nodes,
        }
    }

    fn check_good(&self, p: u64) -> Result<u64> {
        let p = check_surface_prime(p)?;
        let bad = self.bad_primes();
        if bad.contains(&p) {
            return Err(Error::BadPrime {
                twist: self.id.to_string(),
                p,
                bad,
            });
        }
        Ok(p)
    }

    /// Base points over `F_p` where both factors are singular.
    pub fn double_cusps(&self, p: u64) -> Result<Vec<(FibreParam, FibreClass, FibreClass)>> {
        let p = check_surface_prime(p)?;
        let inv = self.inverse();
        let mut seen = Vec::new();
        let mut out = Vec::new();
        for cusp in Cusp::ALL {
            let t = cusp.reduce(p);
            if seen.contains(&t) {
                continue;
            }
            seen.push(t);
            let first = classify_fibre(t, p)?;
            let second = classify_fibre(inv.apply(t, p)?, p)?;
            if first.is_singular() && second.is_singular() {
                out.push((t, first, second));
            }
        }
        Ok(out)
    }

    fn cusp_blocks(&self, table: &FibreTable) -> Result<Vec<CuspBlock>> {
        let p = table.prime();
        let inv = self.inverse();
        self.double_cusps(p)?
            .into_iter()
            .map(|(t, first, second)| {
                let t2 = inv.apply_unchecked(t, p);
                if first.kodaira == Kodaira::III && second.kodaira == Kodaira::III {
                    // both factors additive: no projective small resolution
                    return Err(Error::BadPrime {
                        twist: self.id.to_string(),
                        p,
                        bad: self.bad_primes(),
                    });
                }
                let first_count = table.resolved(t);
                let second_count = table.resolved(t2);
                let fixed_node_pairs = u64::from(
                    first.rational_singular_points(p) * second.rational_singular_points(p),
                );
                Ok(CuspBlock {
                    cusp: t,
                    first: first.kodaira,
                    second: second.kodaira,
                    first_count,
                    second_count,
                    fixed_node_pairs,
                    points: first_count * second_count + fixed_node_pairs * p,
                })
            })
            .collect()
    }

    /// Points over `F_p` on the fibres above the double cusps, including
    /// the exceptional lines of the small resolution.
    pub fn cusp_contribution(&self, p: u64) -> Result<u64> {
        let p = self.check_good(p)?;
        let table = FibreTable::compute(p)?;
        Ok(self.cusp_blocks(&table)?.iter().map(|b| b.points).sum())
    }

    /// `#Ŵ(F_p)`, counted fibre by fibre.
    pub fn total_count(&self, p: u64) -> Result<CountBreakdown> {
        let p = self.check_good(p)?;
        let table = FibreTable::compute(p)?;
        self.count_with_table(&table)
    }

    pub(crate) fn count_with_table(&self, table: &FibreTable) -> Result<CountBreakdown> {
        let p = table.prime();
        let blocks = self.cusp_blocks(table)?;
        let inv = self.inverse();
        let skip: Vec<FibreParam> = blocks.iter().map(|b| b.cusp).collect();
        let generic: u64 = (0..p)
            .into_par_iter()
            .map(FibreParam::Finite)
            .filter(|k| !skip.contains(k))
            .map(|k| table.resolved(k) * table.resolved(inv.apply_unchecked(k, p)))
            .sum();
        let cusp_total: u64 = blocks.iter().map(|b| b.points).sum();
        Ok(CountBreakdown {
            twist: self.id,
            p,
            cusp_blocks: blocks,
            cusp_total,
            generic_total: generic,
            total: cusp_total + generic,
        })
    }

    /// Trace of Frobenius on the middle cohomology, from the Lefschetz
    /// formula with `tr_0 = 1`, `tr_1 = 0`, `tr_2 = h11·p`.
    pub fn lefschetz_trace(&self, p: u64) -> Result<i64> {
        let count = self.total_count(p)?;
        self.trace_from_count(p, count.total)
    }

    pub fn trace_from_count(&self, p: u64, count: u64) -> Result<i64> {
        let h11 = self.node_census().h11 as i64;
        let p = p as i64;
        let overflow = || Error::Overflow("lefschetz trace");
        let middle = p
            .checked_mul(p + 1)
            .and_then(|v| v.checked_mul(h11))
            .ok_or_else(overflow)?;
        let cube = p
            .checked_mul(p)
            .and_then(|v| v.checked_mul(p))
            .ok_or_else(overflow)?;
        let count = i64::try_from(count).map_err(|_| overflow())?;
        (1 + middle)
            .checked_add(cube)
            .and_then(|v| v.checked_sub(count))
            .ok_or_else(overflow)
    }

    /// One record per good prime `5 <= p <= p_max` (and `p = 3` when
    /// `include_char3` is set and 3 is good), sorted by `p`.
    pub fn trace_table(&self, p_max: u64, include_char3: bool) -> Result<Vec<TraceRecord>> {
        let bad = self.bad_primes();
        let lo = if include_char3 { 3 } else { 5 };
        let primes: Vec<u64> = primes_in(lo, p_max)
            .into_iter()
            .filter(|p| !bad.contains(p))
            .collect();
        primes
            .into_par_iter()
            .map(|p| self.record(p))
            .collect()
    }

    pub fn record(&self, p: u64) -> Result<TraceRecord> {
        let count = self.total_count(p)?.total;
        Ok(TraceRecord {
            twist: self.id,
            p,
            xi: None,
            count,
            trace: self.trace_from_count(p, count)?,
            char3: p == 3,
        })
    }
}

/// Nodes of the threefold above one double cusp.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CuspNodes {
    pub cusp: Cusp,
    pub first: Kodaira,
    pub second: Kodaira,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeCensus {
    pub twist: TwistId,
    pub cusps: Vec<CuspNodes>,
    pub total_nodes: u64,
    pub euler: u64,
    pub h11: u64,
}

impl NodeCensus {
    pub fn nodes_at(&self, cusp: Cusp) -> Option<u64> {
        self.cusps.iter().find(|c| c.cusp == cusp).map(|c| c.nodes)
    }
}

/// Points over `F_p` on the resolved fibre above one double cusp.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspBlock {
    pub cusp: FibreParam,
    pub first: Kodaira,
    pub second: Kodaira,
    pub first_count: u64,
    pub second_count: u64,
    pub fixed_node_pairs: u64,
    pub points: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountBreakdown {
    pub twist: TwistId,
    pub p: u64,
    pub cusp_blocks: Vec<CuspBlock>,
    pub cusp_total: u64,
    pub generic_total: u64,
    pub total: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub twist: TwistId,
    pub p: u64,
    pub xi: Option<SignVector>,
    pub count: u64,
    pub trace: i64,
    /// Computed with the characteristic-3 fibre rules.
    pub char3: bool,
}

/// `σ(-8) ≡ -8 mod p`, evaluated on the reduction.
pub fn fixes_nodal_cusp(sigma: &TwistAut, p: u64) -> Result<bool> {
    let t = Cusp::Nodal.reduce(p);
    Ok(sigma.apply(t, p)? == t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use FibreParam::{Finite, Infinity};

    fn tw(id: TwistId) -> TwistAut {
        TwistAut::new(id)
    }

    #[test]
    fn twist_apply_examples() {
        for p in [3, 5, 7, 101] {
            assert_eq!(tw(TwistId::Pi1).apply(Finite(0), p).unwrap(), Finite(1));
        }
        assert_eq!(tw(TwistId::Pi2).apply(Finite(2), 5).unwrap(), Finite(3));
        assert_eq!(tw(TwistId::Pi5).apply(Finite(2), 3).unwrap(), Finite(2));
        assert_eq!(tw(TwistId::Pi2).apply(Finite(0), 5).unwrap(), Infinity);
        assert_eq!(tw(TwistId::Pi2).apply(Infinity, 5).unwrap(), Finite(0));
        assert_eq!(tw(TwistId::Pi1).apply(Infinity, 5).unwrap(), Infinity);
        assert_eq!(tw(TwistId::Pi3).apply(Infinity, 7).unwrap(), Finite(1));
    }

    #[test]
    fn degenerate_matrix_is_rejected() {
        let sigma = TwistAut {
            id: TwistId::Pi1,
            matrix: [[1, 2], [3, 1]], // det = -5
        };
        assert!(matches!(
            sigma.apply(Finite(1), 5),
            Err(Error::DegenerateReduction { p: 5, .. })
        ));
        assert!(sigma.apply(Finite(1), 7).is_ok());
    }

    #[test]
    fn twists_permute_cusps() {
        let cusps = [(0, 1), (1, 1), (1, 0)];
        for sigma in TwistAut::all() {
            let mut image: Vec<_> = cusps.iter().map(|&c| sigma.apply_rational(c)).collect();
            image.sort();
            let mut expected = cusps.to_vec();
            expected.sort();
            assert_eq!(image, expected, "{}", sigma.id);
        }
    }

    #[test]
    fn inverses_compose_to_identity() {
        for p in [3u64, 5, 7, 11, 13] {
            for sigma in TwistAut::all() {
                let inv = sigma.inverse();
                for t in crate::surface::base_points(p) {
                    assert_eq!(inv.apply(sigma.apply(t, p).unwrap(), p).unwrap(), t);
                }
            }
        }
        assert_eq!(tw(TwistId::Pi4).inverse().id, TwistId::Pi5);
        for id in [TwistId::Pi1, TwistId::Pi2, TwistId::Pi3] {
            let sigma = tw(id);
            // involution up to a scalar matrix
            for t in crate::surface::base_points(11) {
                assert_eq!(sigma.apply(sigma.apply(t, 11).unwrap(), 11).unwrap(), t);
            }
        }
    }

    #[test]
    fn bad_prime_examples() {
        assert_eq!(tw(TwistId::Pi1).bad_primes(), vec![17]);
        assert_eq!(tw(TwistId::Pi2).bad_primes(), vec![3, 7]);
        assert_eq!(tw(TwistId::Pi3).bad_primes(), vec![2, 5]);
        assert_eq!(tw(TwistId::Pi4).bad_primes(), vec![73]);
        assert_eq!(tw(TwistId::Pi5).bad_primes(), vec![73]);
        assert_eq!(tw(TwistId::Identity).bad_primes(), vec![2, 3]);
    }

    #[test]
    fn census_examples() {
        let c = tw(TwistId::Pi1).node_census();
        assert_eq!(c.nodes_at(Cusp::Zero), Some(6));
        assert_eq!(c.nodes_at(Cusp::One), Some(6));
        assert_eq!(c.nodes_at(Cusp::Infinity), Some(36));
        assert_eq!(c.nodes_at(Cusp::Nodal), None);
        assert_eq!(c.euler, 96);

        let c = tw(TwistId::Pi3).node_census();
        assert_eq!(
            [Cusp::Zero, Cusp::One, Cusp::Infinity].map(|k| c.nodes_at(k)),
            [Some(9), Some(12), Some(12)]
        );
        assert_eq!(c.euler, 66);

        let c = tw(TwistId::Identity).node_census();
        assert_eq!(
            Cusp::ALL.map(|k| c.nodes_at(k)),
            [Some(9), Some(4), Some(36), Some(1)]
        );
        assert_eq!(c.euler, 100);

        assert_eq!(tw(TwistId::Pi2).node_census().euler, 80);
        assert_eq!(tw(TwistId::Pi4).node_census().euler, 72);
        assert_eq!(tw(TwistId::Pi5).node_census().euler, 72);
    }

    #[test]
    fn census_totals() {
        for sigma in TwistAut::all() {
            let c = sigma.node_census();
            assert_eq!(c.cusps.iter().map(|k| k.nodes).sum::<u64>(), c.total_nodes);
            assert_eq!(c.euler, 2 * c.total_nodes);
            assert_eq!(c.h11 * 2, c.euler);
        }
    }

    #[test]
    fn cusp_contribution_examples() {
        assert_eq!(tw(TwistId::Pi1).cusp_contribution(5).unwrap(), 1440);
        assert_eq!(tw(TwistId::Pi2).cusp_contribution(5).unwrap(), 1224);
        assert_eq!(tw(TwistId::Pi1).cusp_contribution(3).unwrap(), 576);
    }

    #[test]
    fn bad_primes_are_refused() {
        assert!(matches!(
            tw(TwistId::Pi2).cusp_contribution(7),
            Err(Error::BadPrime { p: 7, .. })
        ));
        assert!(matches!(
            tw(TwistId::Pi3).total_count(5),
            Err(Error::BadPrime { p: 5, .. })
        ));
        assert_eq!(
            tw(TwistId::Pi1).total_count(2),
            Err(Error::UnsupportedCharacteristic(2))
        );
    }

    #[test]
    fn count_and_trace_examples() {
        assert_eq!(tw(TwistId::Pi1).total_count(5).unwrap().total, 1560);
        assert_eq!(tw(TwistId::Pi3).total_count(41).unwrap().total, 126186);
        assert_eq!(tw(TwistId::Pi1).lefschetz_trace(7).unwrap(), -28);
        assert_eq!(tw(TwistId::Pi4).lefschetz_trace(37).unwrap(), -286);
    }

    #[test]
    fn characteristic_three_counts() {
        assert_eq!(tw(TwistId::Pi1).total_count(3).unwrap().total, 612);
        assert_eq!(tw(TwistId::Pi3).total_count(3).unwrap().total, 432);
        assert_eq!(tw(TwistId::Pi4).total_count(3).unwrap().total, 468);
        assert_eq!(tw(TwistId::Pi5).total_count(3).unwrap().total, 468);
        for id in [TwistId::Pi1, TwistId::Pi3, TwistId::Pi4, TwistId::Pi5] {
            assert_eq!(tw(id).lefschetz_trace(3).unwrap(), -8, "{id}");
        }
    }

    #[test]
    fn identity_has_four_cusp_blocks() {
        let b = tw(TwistId::Identity).total_count(5).unwrap();
        assert_eq!(b.cusp_blocks.len(), 4);
        assert_eq!(b.total, b.cusp_total + b.generic_total);
    }

    #[test]
    fn trace_table_examples() {
        let rows = tw(TwistId::Pi3).trace_table(13, true).unwrap();
        let got: Vec<(u64, i64, bool)> = rows.iter().map(|r| (r.p, r.trace, r.char3)).collect();
        assert_eq!(
            got,
            vec![(3, -8, true), (7, -4, false), (11, 12, false), (13, -58, false)]
        );

        let rows = tw(TwistId::Pi1).trace_table(4, true).unwrap();
        assert_eq!(rows.iter().map(|r| r.p).collect::<Vec<_>>(), vec![3]);
        assert!(tw(TwistId::Pi1).trace_table(4, false).unwrap().is_empty());

        let rows = tw(TwistId::Identity).trace_table(7, false).unwrap();
        assert_eq!(
            rows.iter().map(|r| (r.p, r.trace)).collect::<Vec<_>>(),
            vec![(5, 6), (7, -16)]
        );
    }

    #[test]
    fn twist_names_round_trip() {
        for id in TwistId::ALL {
            assert_eq!(id.name().parse::<TwistId>().unwrap(), id);
        }
        assert!("pi6".parse::<TwistId>().is_err());
    }
}
