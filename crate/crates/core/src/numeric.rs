//! Exact rational densities and iterated-log magnitudes.
//!
//! Density parameters (p, rho, eps, eta, gamma) are carried as exact
//! fractions so that every degree-window and density comparison is a
//! cross-multiplication over integers, never a float compare. Values like
//! the cleaning shrink factors underflow any float in the exponent, so we
//! also keep a small iterated-log number type for them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Exact nonnegative rational, always kept reduced.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Frac {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Frac {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        Frac {
            num: num / g,
            den: den / g,
        }
    }

    pub const ZERO: Frac = Frac { num: 0, den: 1 };
    pub const ONE: Frac = Frac { num: 1, den: 1 };

    #[inline]
    pub fn num(&self) -> u64 {
        self.num
    }

    #[inline]
    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn big(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    pub fn mul(&self, other: &Frac) -> Frac {
        let n = self.num as u128 * other.num as u128;
        let d = self.den as u128 * other.den as u128;
        let g = gcd128(n, d).max(1);
        let (n, d) = (n / g, d / g);
        assert!(n <= u64::MAX as u128 && d <= u64::MAX as u128, "fraction overflow");
        Frac {
            num: n as u64,
            den: d as u64,
        }
    }

    pub fn div_int(&self, k: u64) -> Frac {
        assert!(k != 0);
        Frac::new_u128(self.num as u128, self.den as u128 * k as u128)
    }

    pub fn mul_int(&self, k: u64) -> Frac {
        Frac::new_u128(self.num as u128 * k as u128, self.den as u128)
    }

    pub fn half(&self) -> Frac {
        self.div_int(2)
    }

    fn new_u128(n: u128, d: u128) -> Frac {
        let g = gcd128(n, d).max(1);
        let (n, d) = (n / g, d / g);
        assert!(n <= u64::MAX as u128 && d <= u64::MAX as u128, "fraction overflow");
        Frac {
            num: n as u64,
            den: d as u64,
        }
    }

    /// `self <= other` by cross-multiplication.
    pub fn le(&self, other: &Frac) -> bool {
        (self.num as u128) * (other.den as u128) <= (other.num as u128) * (self.den as u128)
    }

    pub fn lt(&self, other: &Frac) -> bool {
        (self.num as u128) * (other.den as u128) < (other.num as u128) * (self.den as u128)
    }

    /// Smallest integer `>= self`.
    pub fn ceil_int(&self) -> u64 {
        self.num.div_ceil(self.den)
    }

    /// Parses "a/b", a plain integer, or a decimal string like "0.25" (exact).
    pub fn parse(s: &str) -> Result<Frac, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("cannot parse `{s}` as a fraction"));
        if let Some((a, b)) = s.split_once('/') {
            let num: u64 = a.trim().parse().map_err(|_| bad())?;
            let den: u64 = b.trim().parse().map_err(|_| bad())?;
            if den == 0 {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            return Ok(Frac::new(num, den));
        }
        if let Some((int, frac)) = s.split_once('.') {
            let int_part: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
            if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let digits: u64 = frac.parse().map_err(|_| bad())?;
            let den = 10u64.pow(frac.len() as u32);
            return Ok(Frac::new_u128(
                int_part as u128 * den as u128 + digits as u128,
                den as u128,
            ));
        }
        let num: u64 = s.parse().map_err(|_| bad())?;
        Ok(Frac::new(num, 1))
    }
}

fn gcd128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Frac {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Frac::parse(s)
    }
}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frac {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        ((self.num as u128) * (other.den as u128)).cmp(&((other.num as u128) * (self.den as u128)))
    }
}

impl Serialize for Frac {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Frac {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl de::Visitor<'_> for V {
            type Value = Frac;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a fraction string like \"1/2\" or \"0.25\", or an integer")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Frac, E> {
                Frac::parse(v).map_err(E::custom)
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Frac, E> {
                Ok(Frac::new(v, 1))
            }
        }
        d.deserialize_any(V)
    }
}

/// A numeric report field that mirrors a formula from the construction,
/// carrying the symbolic expression next to the evaluated value.
#[derive(Clone, Debug, Serialize)]
pub struct Reported<T: Serialize> {
    pub value: T,
    pub paper_formula: &'static str,
}

impl<T: Serialize> Reported<T> {
    pub fn new(value: T, paper_formula: &'static str) -> Self {
        Reported {
            value,
            paper_formula,
        }
    }
}

// ---------------------------------------------------------------------------
// Iterated-log magnitudes
// ---------------------------------------------------------------------------

/// A huge nonnegative magnitude `M` stored as an iterated exponential:
/// `level = 0` means `M = value`; `level = k` means `M = 2^(M')` where `M'`
/// is the magnitude `(level = k-1, value)`.
///
/// Used for `-log2` of the cleaning shrink factors, whose towers outgrow
/// `f64` after two stages.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogMag {
    pub level: u32,
    pub value: f64,
}

impl LogMag {
    pub fn from_f64(v: f64) -> Self {
        assert!(v >= 0.0 && v.is_finite());
        LogMag { level: 0, value: v }
    }

    /// Lowers the level while the value stays comfortably representable.
    fn normalize(mut self) -> Self {
        while self.level > 0 && self.value <= 45.0 {
            self.value = self.value.exp2();
            self.level -= 1;
        }
        self
    }

    /// `2^M` as a magnitude.
    pub fn exp2(self) -> Self {
        let s = self.normalize();
        if s.level == 0 && s.value <= 900.0 {
            LogMag {
                level: 0,
                value: s.value.exp2(),
            }
        } else {
            LogMag {
                level: s.level + 1,
                value: s.value,
            }
        }
    }

    /// Magnitude addition.
    pub fn add(self, other: LogMag) -> LogMag {
        let a = self.normalize();
        let b = other.normalize();
        match (a.level, b.level) {
            (0, 0) => LogMag {
                level: 0,
                value: a.value + b.value,
            },
            _ => {
                // Lift the lower-level operand and absorb the smaller one;
                // at these scales the correction is below f64 resolution
                // except at level 1, where log2(1 + 2^(v-u)) still matters.
                let (hi, lo) = if (a.level, a.value) >= (b.level, b.value) {
                    (a, b)
                } else {
                    (b, a)
                };
                if hi.level > lo.level + 1 {
                    return hi;
                }
                let lo_at_hi = if lo.level == hi.level {
                    lo.value
                } else {
                    // lo.level + 1 == hi.level: value -> log2(value)
                    if lo.value <= 0.0 {
                        return hi;
                    }
                    lo.value.log2()
                };
                if hi.level == 1 {
                    let delta = lo_at_hi - hi.value;
                    LogMag {
                        level: 1,
                        value: hi.value + (1.0 + delta.exp2()).log2(),
                    }
                } else {
                    hi
                }
            }
        }
    }

    /// `c * 2^M` for a constant `c >= 1`, as a magnitude.
    pub fn scale_exp2(self, c: f64) -> LogMag {
        assert!(c >= 1.0);
        let s = self.normalize();
        if s.level == 0 && s.value <= 900.0 {
            LogMag {
                level: 0,
                value: c * s.value.exp2(),
            }
        } else {
            // log2(c * 2^M) = log2(c) + M, then re-exponentiate.
            LogMag::from_f64(c.log2()).add(s).exp2_raw()
        }
    }

    fn exp2_raw(self) -> LogMag {
        LogMag {
            level: self.level + 1,
            value: self.value,
        }
    }

    pub fn to_f64(self) -> Option<f64> {
        let s = self.normalize();
        if s.level == 0 {
            Some(s.value)
        } else if s.level == 1 && s.value <= 1000.0 {
            Some(s.value.exp2())
        } else {
            None
        }
    }

    pub fn cmp_mag(self, other: LogMag) -> std::cmp::Ordering {
        let a = self.normalize();
        let b = other.normalize();
        match a.level.cmp(&b.level) {
            std::cmp::Ordering::Equal => a.value.partial_cmp(&b.value).unwrap(),
            o => o,
        }
    }
}

/// log2 of a value in (0, 1], stored as an iterated-log magnitude of its
/// absolute value.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct NegLog2 {
    /// Magnitude of `-log2(x)`.
    pub mag: LogMag,
}

impl NegLog2 {
    pub fn of_frac(f: &Frac) -> Self {
        assert!(!f.is_zero() && f.le(&Frac::ONE));
        NegLog2 {
            mag: LogMag::from_f64(-(f.to_f64().log2())),
        }
    }

    /// As a plain `log2` value when representable.
    pub fn log2_f64(&self) -> Option<f64> {
        self.mag.to_f64().map(|m| -m)
    }
}


// BigRational helpers used by formula evaluations.

/// `base^exp` for a rational base and nonnegative integer exponent.
pub fn big_pow(base: &BigRational, exp: u32) -> BigRational {
    let mut acc = BigRational::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    acc
}

/// Exact comparison `a > b` for BigRationals.
pub fn big_gt(a: &BigRational, b: &BigRational) -> bool {
    (a - b).is_positive()
}

pub fn big_from_u64(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}
