//! Truncated integer q-series and the level-6 eta product.

mod fixture;

pub use fixture::{
    euler_factor, fixture, published_table, EulerFactor, FixtureEntry, NewformFixture,
    Provenance, PublishedTable, PublishedRow, SUPPORTED_LEVELS,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest precision accepted by the series constructors.
pub const MAX_PRECISION: usize = 100_000;

/// `Σ_{n <= n_max} a_n q^n` with exact `i64` coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSeries {
    coeffs: Vec<i64>,
}

fn check_precision(n_max: usize) -> Result<()> {
    if n_max > MAX_PRECISION {
        return Err(Error::InvalidArgument(format!(
            "precision {n_max} exceeds {MAX_PRECISION}"
        )));
    }
    Ok(())
}

impl QSeries {
    pub fn zero(n_max: usize) -> Self {
        Self {
            coeffs: vec![0; n_max + 1],
        }
    }

    pub fn one(n_max: usize) -> Self {
        let mut s = Self::zero(n_max);
        s.coeffs[0] = 1;
        s
    }

    /// Series with the given leading coefficients, truncated or zero-padded
    /// to precision `n_max`.
    pub fn from_coeffs(coeffs: &[i64], n_max: usize) -> Self {
        let mut s = Self::zero(n_max);
        let k = coeffs.len().min(n_max + 1);
        s.coeffs[..k].copy_from_slice(&coeffs[..k]);
        s
    }

    /// Highest exponent carried.
    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `q^n`, or `None` past the precision.
    pub fn coeff(&self, n: usize) -> Option<i64> {
        self.coeffs.get(n).copied()
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coeffs
    }

    fn nonzero(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, c))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let n = self.precision().min(other.precision());
        let coeffs = (0..=n)
            .map(|i| {
                self.coeffs[i]
                    .checked_add(other.coeffs[i])
                    .ok_or(Error::Overflow("series addition"))
            })
            .collect::<Result<_>>()?;
        Ok(Self { coeffs })
    }

    /// Product truncated at the smaller of the two precisions. The loop runs
    /// over the nonzero terms of the sparser factor.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let n = self.precision().min(other.precision());
        let (sparse, dense) = if self.nonzero().count() <= other.nonzero().count() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = vec![0i64; n + 1];
        for (i, a) in sparse.nonzero().take_while(|&(i, _)| i <= n) {
            for (j, &b) in dense.coeffs[..=n - i].iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let term = a.checked_mul(b).ok_or(Error::Overflow("series product"))?;
                out[i + j] = out[i + j]
                    .checked_add(term)
                    .ok_or(Error::Overflow("series product"))?;
            }
        }
        Ok(Self { coeffs: out })
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::one(self.precision());
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Multiplication by `q^k`, keeping the precision.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.precision();
        let mut out = vec![0i64; n + 1];
        if k <= n {
            out[k..].copy_from_slice(&self.coeffs[..=n - k]);
        }
        Self { coeffs: out }
    }
}

/// Generalized pentagonal numbers `k(3k-1)/2` for `k = 0, 1, -1, 2, -2, ...`
/// paired with the sign `(-1)^k`, up to `limit`.
fn pentagonal_terms(limit: usize) -> Vec<(usize, i64)> {
    let mut out = vec![(0, 1)];
    for k in 1usize.. {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let lo = k * (3 * k - 1) / 2;
        if lo > limit {
            break;
        }
        out.push((lo, sign));
        let hi = k * (3 * k + 1) / 2;
        if hi <= limit {
            out.push((hi, sign));
        }
    }
    out
}

/// `Π_{n >= 1} (1 - q^{mn})` to precision `n_max`, by Euler's pentagonal
/// number theorem.
pub fn eta_block(m: usize, n_max: usize) -> Result<QSeries> {
    if m == 0 || n_max == 0 {
        return Err(Error::InvalidArgument(
            "eta block needs m >= 1 and n_max >= 1".into(),
        ));
    }
    check_precision(n_max)?;
    let mut s = QSeries::zero(n_max);
    for (e, sign) in pentagonal_terms(n_max / m) {
        s.coeffs[e * m] = sign;
    }
    Ok(s)
}

/// Factors `m` of the eta quotient `(η(τ)η(2τ)η(3τ)η(6τ))²`, each squared.
pub const LEVEL6_ETA_FACTORS: [usize; 4] = [1, 2, 3, 6];

/// Exponent of the `q^{Σ 2m/24}` prefactor of the level-6 eta product.
pub fn level6_prefactor_exponent() -> usize {
    let twenty_fourths: usize = LEVEL6_ETA_FACTORS.iter().map(|m| 2 * m).sum();
    assert_eq!(twenty_fourths % 24, 0, "eta product prefactor is not integral");
    twenty_fourths / 24
}

/// The weight-4 newform of level 6, `(η(τ)η(2τ)η(3τ)η(6τ))²`, to `q^{n_max}`.
pub fn level6_form(n_max: usize) -> Result<QSeries> {
    if n_max < 2 {
        return Err(Error::InvalidArgument("level-6 form needs n_max >= 2".into()));
    }
    check_precision(n_max)?;
    let shift = level6_prefactor_exponent();
    let inner = n_max - shift;
    let mut acc = QSeries::one(inner);
    for m in LEVEL6_ETA_FACTORS {
        let block = eta_block(m, inner)?;
        acc = acc.mul(&block)?.mul(&block)?;
    }
    Ok(QSeries::from_coeffs(&acc.coeffs, n_max).shift(shift))
}
