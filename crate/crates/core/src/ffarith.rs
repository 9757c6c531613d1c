//! Prime-field arithmetic, quadratic symbols and the rootless test for cubics.
//!
//! Every prime handled by the crate is below [`MAX_PRIME`], so residues fit
//! comfortably in 64 bits and products of two residues never come near
//! overflow. Multiplications are still checked.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on every prime the pipeline accepts.
pub const MAX_PRIME: u64 = 10_000;

/// Deterministic trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes in `[lo, hi]`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

/// Validates `p` as an odd prime within the supported range.
pub fn check_odd_prime(p: i64) -> Result<u64> {
    if p < 3 || !is_prime(p as u64) {
        return Err(Error::NotOddPrime(p));
    }
    let p = p as u64;
    if p > MAX_PRIME {
        return Err(Error::PrimeTooLarge(p));
    }
    Ok(p)
}

fn check_prime(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotOddPrime(p as i64));
    }
    if p > MAX_PRIME {
        return Err(Error::PrimeTooLarge(p));
    }
    Ok(p)
}

/// Reduces any integer into `[0, p)`.
#[inline]
pub fn reduce(s: i64, p: u64) -> u64 {
    s.rem_euclid(p as i64) as u64
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    a.checked_mul(b)
        .unwrap_or_else(|| panic!("residue product {a}*{b} overflows u64 (p = {p})"))
        % p
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue by the extended Euclidean algorithm.
pub(crate) fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let (mut r0, mut r1) = (p as i64, (a % p) as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(p as i64) as u64)
}

/// Largest integer `r` with `r * r <= n`.
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `floor(2 p^{3/2})`, the Weil-Deligne bound for a weight-3 Frobenius trace.
pub fn weil_bound(p: u64) -> i64 {
    isqrt(4 * p * p * p) as i64
}

/// Legendre symbol `(s/p)`, computed through quadratic reciprocity.
pub fn legendre(s: i64, p: u64) -> Result<i8> {
    let p = check_odd_prime(p as i64)?;
    Ok(legendre_reciprocity(s, p))
}

/// Euler's criterion: `s^((p-1)/2) mod p`. `p` must be an odd prime.
pub fn legendre_euler(s: i64, p: u64) -> i8 {
    match pow_mod(reduce(s, p), (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Jacobi-symbol recursion (reciprocity plus the supplementary laws).
/// `p` must be an odd prime.
pub fn legendre_reciprocity(s: i64, p: u64) -> i8 {
    let mut a = reduce(s, p);
    let mut n = p;
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// An element of the prime field `F_p`, `p` odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpElem {
    value: u64,
    modulus: u64,
}

impl FpElem {
    pub fn new(value: i64, p: u64) -> Result<Self> {
        let p = check_odd_prime(p as i64)?;
        Ok(Self {
            value: reduce(value, p),
            modulus: p,
        })
    }

    pub(crate) fn from_reduced(value: u64, modulus: u64) -> Self {
        debug_assert!(value < modulus);
        Self { value, modulus }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inverse(self) -> Result<Self> {
        inv_mod(self.value, self.modulus)
            .map(|v| Self::from_reduced(v, self.modulus))
            .ok_or(Error::DivisionByZero(self.modulus))
    }

    pub fn pow(self, exp: u64) -> Self {
        Self::from_reduced(pow_mod(self.value, exp, self.modulus), self.modulus)
    }

    fn same_field(self, other: Self) {
        assert_eq!(
            self.modulus, other.modulus,
            "mixed moduli {} and {}",
            self.modulus, other.modulus
        );
    }
}

impl fmt::Display for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

impl Add for FpElem {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.same_field(rhs);
        Self::from_reduced((self.value + rhs.value) % self.modulus, self.modulus)
    }
}

impl Sub for FpElem {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.same_field(rhs);
        Self::from_reduced(
            (self.value + self.modulus - rhs.value) % self.modulus,
            self.modulus,
        )
    }
}

impl Mul for FpElem {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.same_field(rhs);
        Self::from_reduced(mul_mod(self.value, rhs.value, self.modulus), self.modulus)
    }
}

impl Neg for FpElem {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_reduced((self.modulus - self.value) % self.modulus, self.modulus)
    }
}

/// Integer cubic `c3 x^3 + c2 x^2 + c1 x + c0` with `c3 != 0`.
///
/// Serialized as the coefficient array `[c3, c2, c1, c0]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[i64; 4]", into = "[i64; 4]")]
pub struct Cubic {
    coeffs: [i64; 4],
}

impl Cubic {
    pub fn new(c3: i64, c2: i64, c1: i64, c0: i64) -> Result<Self> {
        Self::try_from([c3, c2, c1, c0])
    }

    /// Coefficients from the leading one down.
    pub fn coefficients(&self) -> [i64; 4] {
        self.coeffs
    }

    /// Horner evaluation of the reduction mod `p`.
    pub fn eval_mod(&self, x: u64, p: u64) -> u64 {
        self.coeffs
            .iter()
            .fold(0, |acc, &c| (mul_mod(acc, x, p) + reduce(c, p)) % p)
    }
}

impl TryFrom<[i64; 4]> for Cubic {
    type Error = Error;
    fn try_from(coeffs: [i64; 4]) -> Result<Self> {
        if coeffs[0] == 0 {
            return Err(Error::InvalidArgument(
                "cubic with vanishing leading coefficient".into(),
            ));
        }
        Ok(Self { coeffs })
    }
}

impl From<Cubic> for [i64; 4] {
    fn from(c: Cubic) -> Self {
        c.coeffs
    }
}

impl fmt::Display for Cubic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let deg = 3 - i;
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.unsigned_abs();
            if mag != 1 || deg == 0 {
                write!(f, "{mag}")?;
            }
            match deg {
                0 => {}
                1 => f.write_str("x")?,
                d => write!(f, "x^{d}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// A cubic over `F_p` is irreducible exactly when it has no root there.
pub fn cubic_irreducible(h: &Cubic, p: u64) -> Result<bool> {
    let p = check_prime(p)?;
    if reduce(h.coeffs[0], p) == 0 {
        return Err(Error::DegenerateCubic {
            cubic: h.to_string(),
            p,
        });
    }
    Ok((0..p).all(|x| h.eval_mod(x, p) != 0))
}
