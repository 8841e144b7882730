//! Exact integer polynomials, rational generating functions with a pole at
//! `t = 1`, and truncated bigraded multiplicity tables.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Binomial coefficient as a machine integer, for counting enumerated objects.
pub fn binomial_u64(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Serde adapter writing a `BigInt` as a decimal string.
pub mod dec {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Serde adapter writing a fixed array of `BigInt` as decimal strings.
pub mod dec_array {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer, const N: usize>(
        v: &[BigInt; N],
        s: S,
    ) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>, const N: usize>(
        d: D,
    ) -> Result<[BigInt; N], D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let parsed: Vec<BigInt> = raw
            .iter()
            .map(|x| x.parse().map_err(serde::de::Error::custom))
            .collect::<Result<_, _>>()?;
        parsed
            .try_into()
            .map_err(|_| serde::de::Error::custom(format!("expected {N} entries")))
    }
}

/// Integer polynomial in `t`, stored without trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * t^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `a + b t`.
    pub fn linear(a: i64, b: i64) -> Self {
        Self::from_i64(&[a, b])
    }

    /// `(1 - t)^p`.
    pub fn one_minus_t_pow(p: u32) -> Self {
        Self::linear(1, -1).pow(p)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Exact quotient by `1 - t`, or `None` when `t = 1` is not a root.
    pub fn div_one_minus_t(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if !self.eval(&BigInt::one()).is_zero() {
            return None;
        }
        // p(t) = (1 - t) q(t)  =>  q_i = sum_{k <= i} p_k
        let n = self.coeffs.len();
        let mut q = Vec::with_capacity(n - 1);
        let mut running = BigInt::zero();
        for c in &self.coeffs[..n - 1] {
            running += c;
            q.push(running.clone());
        }
        Some(Self::new(q))
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}t")?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{mag}t^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for IntPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        strs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Coeff {
            Int(i64),
            Str(String),
        }
        let raw: Vec<Coeff> = Vec::deserialize(d)?;
        let mut coeffs = Vec::with_capacity(raw.len());
        for c in raw {
            coeffs.push(match c {
                Coeff::Int(v) => BigInt::from(v),
                Coeff::Str(s) => s.parse::<BigInt>().map_err(serde::de::Error::custom)?,
            });
        }
        Ok(IntPoly::new(coeffs))
    }
}

/// Generating function `num(t) / (1 - t)^pole`.
///
/// Two series are equal when they define the same power series, so
/// `(1 + t)/(1 - t)` equals `(1 - t^2)/(1 - t)^2`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RationalSeries {
    pub num: IntPoly,
    pub pole: u32,
}

impl RationalSeries {
    pub fn new(num: IntPoly, pole: u32) -> Self {
        RationalSeries { num, pole }
    }

    pub fn zero() -> Self {
        Self::new(IntPoly::zero(), 0)
    }

    /// Same series with the numerator multiplied through to a larger pole.
    pub fn with_pole(&self, pole: u32) -> Self {
        assert!(pole >= self.pole, "cannot lower a pole by padding");
        Self::new(&self.num * &IntPoly::one_minus_t_pow(pole - self.pole), pole)
    }

    /// Cancels common factors of `1 - t` between numerator and denominator.
    pub fn reduced(&self) -> Self {
        let mut num = self.num.clone();
        let mut pole = self.pole;
        if num.is_zero() {
            return Self::zero();
        }
        while pole > 0 {
            match num.div_one_minus_t() {
                Some(q) => {
                    num = q;
                    pole -= 1;
                }
                None => break,
            }
        }
        Self::new(num, pole)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.num.scale(c), self.pole)
    }

    /// Constant term of the expansion.
    pub fn value_at_zero(&self) -> BigInt {
        self.num.coeff(0)
    }

    /// Power series coefficients `[t^0 .. t^n]`.
    pub fn expand(&self, n: usize) -> Vec<BigInt> {
        let p = self.pole as u64;
        (0..=n)
            .map(|m| {
                let top = self.num.degree().map_or(0, |d| d.min(m));
                let mut acc = BigInt::zero();
                if self.num.is_zero() {
                    return acc;
                }
                for i in 0..=top {
                    let c = &self.num.coeffs()[i];
                    if c.is_zero() {
                        continue;
                    }
                    let k = (m - i) as u64;
                    let w = if p == 0 {
                        if k == 0 {
                            BigInt::one()
                        } else {
                            BigInt::zero()
                        }
                    } else {
                        binomial(k + p - 1, p - 1)
                    };
                    acc += c * w;
                }
                acc
            })
            .collect()
    }
}

impl PartialEq for RationalSeries {
    fn eq(&self, other: &Self) -> bool {
        let p = self.pole.max(other.pole);
        self.with_pole(p).num == other.with_pole(p).num
    }
}

impl Eq for RationalSeries {}

impl Add for &RationalSeries {
    type Output = RationalSeries;
    fn add(self, rhs: &RationalSeries) -> RationalSeries {
        let p = self.pole.max(rhs.pole);
        RationalSeries::new(&self.with_pole(p).num + &rhs.with_pole(p).num, p)
    }
}

impl Add for RationalSeries {
    type Output = RationalSeries;
    fn add(self, rhs: RationalSeries) -> RationalSeries {
        &self + &rhs
    }
}

impl std::iter::Sum for RationalSeries {
    fn sum<I: Iterator<Item = RationalSeries>>(iter: I) -> Self {
        iter.fold(RationalSeries::zero(), |a, b| &a + &b)
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pole {
            0 => write!(f, "{}", self.num),
            1 => write!(f, "({}) / (1 - t)", self.num),
            p => write!(f, "({}) / (1 - t)^{p}", self.num),
        }
    }
}

/// Exponent vector of a character relative to a base character.
pub type CharOffset = Vec<i64>;

/// Truncated table of multiplicities indexed by (degree, character offset).
///
/// Only degrees `0..=trunc` are recorded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "BigradedJson", try_from = "BigradedJson")]
pub struct BigradedSeries {
    trunc: u32,
    entries: BTreeMap<(u32, CharOffset), u64>,
}

#[derive(Serialize, Deserialize)]
struct BigradedJson {
    trunc: u32,
    entries: Vec<BigradedEntry>,
}

#[derive(Serialize, Deserialize)]
struct BigradedEntry {
    deg: u32,
    offset: CharOffset,
    mult: u64,
}

impl From<BigradedSeries> for BigradedJson {
    fn from(b: BigradedSeries) -> Self {
        BigradedJson {
            trunc: b.trunc,
            entries: b
                .entries
                .into_iter()
                .map(|((deg, offset), mult)| BigradedEntry { deg, offset, mult })
                .collect(),
        }
    }
}

impl TryFrom<BigradedJson> for BigradedSeries {
    type Error = Error;
    fn try_from(j: BigradedJson) -> Result<Self> {
        let mut b = BigradedSeries::new(j.trunc);
        for e in j.entries {
            b.insert(e.deg, e.offset, e.mult)?;
        }
        Ok(b)
    }
}

impl BigradedSeries {
    pub fn new(trunc: u32) -> Self {
        BigradedSeries {
            trunc,
            entries: BTreeMap::new(),
        }
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    /// Adds `mult` to the entry at `(deg, offset)`.
    pub fn insert(&mut self, deg: u32, offset: CharOffset, mult: u64) -> Result<()> {
        if deg > self.trunc {
            return Err(Error::Truncation(format!(
                "degree {deg} exceeds truncation {}",
                self.trunc
            )));
        }
        if mult > 0 {
            *self.entries.entry((deg, offset)).or_insert(0) += mult;
        }
        Ok(())
    }

    pub fn get(&self, deg: u32, offset: &[i64]) -> u64 {
        self.entries
            .get(&(deg, offset.to_vec()))
            .copied()
            .unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, &CharOffset, u64)> {
        self.entries.iter().map(|((d, o), m)| (*d, o, *m))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total multiplicity in each degree `0..=trunc`.
    pub fn totals(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.trunc as usize + 1];
        for ((d, _), m) in &self.entries {
            out[*d as usize] += m;
        }
        out
    }

    /// Moves every entry from `(d, c)` to `(d + shift, c + twist)`.
    ///
    /// The truncation moves with the entries. A nonzero entry landing in a
    /// negative degree is a truncation violation.
    pub fn shift_twist(&self, shift: i64, twist: &[i64]) -> Result<Self> {
        let new_trunc = self.trunc as i64 + shift;
        if new_trunc < 0 {
            return Err(Error::Truncation(format!(
                "shift {shift} moves truncation {} below zero",
                self.trunc
            )));
        }
        let mut out = BigradedSeries::new(new_trunc as u32);
        for ((d, c), m) in &self.entries {
            let nd = *d as i64 + shift;
            if nd < 0 {
                return Err(Error::Truncation(format!(
                    "entry in degree {d} shifted to negative degree {nd}"
                )));
            }
            if c.len() != twist.len() {
                return Err(Error::InvalidArgument(format!(
                    "twist has length {} but offsets have length {}",
                    twist.len(),
                    c.len()
                )));
            }
            let nc: CharOffset = c.iter().zip(twist).map(|(a, b)| a + b).collect();
            out.insert(nd as u32, nc, *m)?;
        }
        Ok(out)
    }

    /// Entrywise sum of two tables with the same truncation.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.trunc != other.trunc {
            return Err(Error::Truncation(format!(
                "cannot add tables truncated at {} and {}",
                self.trunc, other.trunc
            )));
        }
        let mut out = self.clone();
        for ((d, c), m) in &other.entries {
            out.insert(*d, c.clone(), *m)?;
        }
        Ok(out)
    }
}
