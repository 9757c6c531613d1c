//! The elliptic modular surface of level 6 as the pencil of plane cubics
//! `s(x+y)(y+z)(z+x) + t·xyz = 0` over the base line with coordinate `(s:t)`.
//!
//! Fibres are counted by walking the canonical representatives
//! `(1:y:z)`, `(0:1:z)`, `(0:0:1)` of the projective plane.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffarith::{check_odd_prime, inv_mod, legendre_reciprocity, mul_mod, reduce};

/// A point of the base line over `F_p`: `t` with `s = 1`, or `(0:1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FibreParam {
    Finite(u64),
    Infinity,
}

impl FibreParam {
    pub fn finite(t: i64, p: u64) -> Self {
        FibreParam::Finite(reduce(t, p))
    }
}

impl fmt::Display for FibreParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FibreParam::Finite(t) => write!(f, "{t}"),
            FibreParam::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for FibreParam {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FibreParam {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        if raw == "inf" {
            return Ok(FibreParam::Infinity);
        }
        raw.parse()
            .map(FibreParam::Finite)
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kodaira {
    Smooth,
    I1,
    I2,
    I3,
    I6,
    III,
}

impl Kodaira {
    pub fn is_singular(self) -> bool {
        self != Kodaira::Smooth
    }

    /// Topological Euler number of the fibre.
    pub fn euler_number(self) -> u32 {
        match self {
            Kodaira::Smooth => 0,
            Kodaira::I1 => 1,
            Kodaira::I2 => 2,
            Kodaira::I3 => 3,
            Kodaira::I6 => 6,
            Kodaira::III => 3,
        }
    }
}

/// Field of definition of the singular points of a fibre.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rationality {
    AllRational,
    ConjugatePair { discriminant: i64 },
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FibreClass {
    pub kodaira: Kodaira,
    pub singular_points: u32,
    pub rationality: Rationality,
}

impl FibreClass {
    const SMOOTH: Self = Self::rational(Kodaira::Smooth, 0, Rationality::None);

    const fn rational(kodaira: Kodaira, singular_points: u32, rationality: Rationality) -> Self {
        Self {
            kodaira,
            singular_points,
            rationality,
        }
    }

    pub fn is_singular(&self) -> bool {
        self.kodaira.is_singular()
    }

    /// Singular points fixed by Frobenius over `F_p`.
    pub fn rational_singular_points(&self, p: u64) -> u32 {
        match self.rationality {
            Rationality::AllRational => self.singular_points,
            Rationality::ConjugatePair { discriminant } => {
                if legendre_reciprocity(discriminant, p) == 1 {
                    self.singular_points
                } else {
                    0
                }
            }
            Rationality::None => 0,
        }
    }
}

const I6: FibreClass = FibreClass::rational(Kodaira::I6, 6, Rationality::AllRational);
const I3: FibreClass = FibreClass::rational(Kodaira::I3, 3, Rationality::AllRational);
const I2: FibreClass = FibreClass::rational(
    Kodaira::I2,
    2,
    Rationality::ConjugatePair { discriminant: -3 },
);
const I1: FibreClass = FibreClass::rational(Kodaira::I1, 1, Rationality::AllRational);
const III: FibreClass = FibreClass::rational(Kodaira::III, 1, Rationality::AllRational);

/// Base value where the fibre is an irreducible nodal cubic.
pub const NODAL_CUSP: i64 = -8;

pub(crate) fn check_surface_prime(p: u64) -> Result<u64> {
    if p == 2 {
        return Err(Error::UnsupportedCharacteristic(2));
    }
    check_odd_prime(p as i64)
}

/// Kodaira type of the fibre over `t` after reduction mod `p`.
///
/// In characteristic 3 the `I2` fibre at `t = 1` and the `I1` fibre at
/// `t = -8 ≡ 1` merge into a single fibre of type III.
pub fn classify_fibre(t: FibreParam, p: u64) -> Result<FibreClass> {
    let p = check_surface_prime(p)?;
    let nodal = reduce(NODAL_CUSP, p);
    Ok(match t {
        FibreParam::Infinity => I6,
        FibreParam::Finite(0) => I3,
        FibreParam::Finite(1) if p == 3 => III,
        FibreParam::Finite(1) => I2,
        FibreParam::Finite(v) if v == nodal => I1,
        FibreParam::Finite(_) => FibreClass::SMOOTH,
    })
}

/// Classification of the fibre over a rational base point `num/den`
/// (`den = 0` for infinity), i.e. in characteristic 0.
pub fn classify_fibre_rational(num: i64, den: i64) -> FibreClass {
    match (num, den) {
        (_, 0) => I6,
        (0, _) => I3,
        (n, d) if n == d => I2,
        (n, d) if n == NODAL_CUSP * d => I1,
        _ => FibreClass::SMOOTH,
    }
}

#[inline]
fn cubic_parts(x: u64, y: u64, z: u64, p: u64) -> (u64, u64) {
    let a = mul_mod(mul_mod((x + y) % p, (y + z) % p, p), (z + x) % p, p);
    let b = mul_mod(mul_mod(x, y, p), z, p);
    (a, b)
}

/// Number of `F_p`-points of the plane cubic over `t`, by enumeration of
/// all `p^2 + p + 1` points of the projective plane.
pub fn count_plane_fibre(t: FibreParam, p: u64) -> Result<u64> {
    let p = check_odd_prime(p as i64)?;
    let on_fibre = |x: u64, y: u64, z: u64| {
        let (a, b) = cubic_parts(x, y, z, p);
        match t {
            FibreParam::Infinity => b == 0,
            FibreParam::Finite(t) => (a + mul_mod(t, b, p)) % p == 0,
        }
    };
    let affine: u64 = (0..p)
        .into_par_iter()
        .map(|y| (0..p).filter(|&z| on_fibre(1, y, z)).count() as u64)
        .sum();
    let at_x0 = (0..p).filter(|&z| on_fibre(0, 1, z)).count() as u64;
    Ok(affine + at_x0 + u64::from(on_fibre(0, 0, 1)))
}

/// Points on the fibre of the resolved surface. Only the fibre at infinity
/// is touched by the resolution: three exceptional lines add `3p`.
pub fn count_resolved_fibre(t: FibreParam, p: u64) -> Result<u64> {
    let p = check_surface_prime(p)?;
    let plane = count_plane_fibre(t, p)?;
    Ok(match t {
        FibreParam::Infinity => plane + 3 * p,
        FibreParam::Finite(_) => plane,
    })
}

/// Point counts of every fibre over `F_p`, from a single pass over the plane.
///
/// Each point `(x:y:z)` with `xyz != 0` lies on exactly one fibre,
/// `t = -(x+y)(y+z)(z+x)/xyz`; points with `xyz = 0` lie on the fibre at
/// infinity, and the base points of the pencil lie on every fibre.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibreTable {
    p: u64,
    // index p holds the fibre at infinity
    plane: Vec<u64>,
}

impl FibreTable {
    pub fn compute(p: u64) -> Result<Self> {
        let p = check_odd_prime(p as i64)?;
        let n = p as usize;
        let inverse: Vec<u64> = (0..p).map(|b| inv_mod(b, p).unwrap_or(0)).collect();

        let tally = |hist: &mut [u64], base: &mut u64, x: u64, y: u64, z: u64| {
            let (a, b) = cubic_parts(x, y, z, p);
            match (a, b) {
                (0, 0) => *base += 1,
                (_, 0) => hist[n] += 1,
                _ => hist[mul_mod(p - a, inverse[b as usize], p) as usize] += 1,
            }
        };

        let (mut hist, mut base) = (0..p)
            .into_par_iter()
            .fold(
                || (vec![0u64; n + 1], 0u64),
                |(mut hist, mut base), y| {
                    for z in 0..p {
                        tally(&mut hist, &mut base, 1, y, z);
                    }
                    (hist, base)
                },
            )
            .reduce(
                || (vec![0u64; n + 1], 0u64),
                |(mut h1, b1), (h2, b2)| {
                    h1.iter_mut().zip(&h2).for_each(|(a, b)| *a += b);
                    (h1, b1 + b2)
                },
            );
        for z in 0..p {
            tally(&mut hist, &mut base, 0, 1, z);
        }
        tally(&mut hist, &mut base, 0, 0, 1);

        hist.iter_mut().for_each(|c| *c += base);
        Ok(Self { p, plane: hist })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn plane(&self, t: FibreParam) -> u64 {
        match t {
            FibreParam::Finite(v) => self.plane[v as usize],
            FibreParam::Infinity => self.plane[self.p as usize],
        }
    }

    pub fn resolved(&self, t: FibreParam) -> u64 {
        match t {
            FibreParam::Finite(_) => self.plane(t),
            FibreParam::Infinity => self.plane(t) + 3 * self.p,
        }
    }
}

/// All base points `0..p` followed by infinity.
pub fn base_points(p: u64) -> impl Iterator<Item = FibreParam> {
    (0..p)
        .map(FibreParam::Finite)
        .chain(std::iter::once(FibreParam::Infinity))
}
