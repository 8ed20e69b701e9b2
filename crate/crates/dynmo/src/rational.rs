//! Exact non-negative rational arithmetic.
//!
//! All weights, thresholds, capitals and recovery rates in this crate are
//! exact fractions. Floating point only appears at presentation time,
//! behind an explicit `--approx` style conversion.
//!
//! Values that fit in machine words stay allocation-free (the common case
//! in cascades over large instances); anything larger transparently
//! promotes to big-integer ratios. The representation is canonical: a
//! value is stored big only when it cannot be stored small, so structural
//! comparison agrees with numeric comparison.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone)]
enum Repr {
    /// numerator >= 0, denominator >= 1, lowest terms
    Small(i64, i64),
    /// reduced, positive denominator, does not fit `Small`
    Big(Box<Ratio<BigInt>>),
}

/// Exact fraction `p/q` with `p >= 0`, `q >= 1`, always in lowest terms.
#[derive(Clone)]
pub struct Rational(Repr);

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    // drop to 64-bit arithmetic as soon as both operands fit
    while b != 0 {
        if a <= u64::MAX as u128 && b <= u64::MAX as u128 {
            return gcd_u64(a as u64, b as u64) as u128;
        }
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// Reduce and pick the smallest representation. `d > 0`, `n >= 0`.
fn normalize_i128(mut n: i128, mut d: i128) -> Repr {
    debug_assert!(n >= 0 && d > 0);
    if n == 0 {
        return Repr::Small(0, 1);
    }
    if d > 1 {
        let g = gcd_u128(n as u128, d as u128) as i128;
        n /= g;
        d /= g;
    }
    if let (Ok(n64), Ok(d64)) = (i64::try_from(n), i64::try_from(d)) {
        Repr::Small(n64, d64)
    } else {
        Repr::Big(Box::new(Ratio::new(BigInt::from(n), BigInt::from(d))))
    }
}

/// Demote a reduced big ratio when it fits machine words.
fn normalize_big(ratio: Ratio<BigInt>) -> Repr {
    if let (Some(n), Some(d)) = (ratio.numer().to_i64(), ratio.denom().to_i64()) {
        Repr::Small(n, d)
    } else {
        Repr::Big(Box::new(ratio))
    }
}

impl Rational {
    pub fn new(numer: u64, denom: u64) -> Result<Self, Error> {
        if denom == 0 {
            return Err(Error::Parse("denominator must be positive".into()));
        }
        Ok(Rational(normalize_big(Ratio::new(
            BigInt::from(numer),
            BigInt::from(denom),
        ))))
    }

    pub fn from_integer(value: u64) -> Self {
        match i64::try_from(value) {
            Ok(v) => Rational(Repr::Small(v, 1)),
            Err(_) => Rational(Repr::Big(Box::new(Ratio::from_integer(BigInt::from(value))))),
        }
    }

    pub(crate) fn from_ratio(ratio: Ratio<BigInt>) -> Result<Self, Error> {
        if ratio.is_negative() {
            return Err(Error::Parse(format!("negative value {ratio} not allowed")));
        }
        Ok(Rational(normalize_big(ratio)))
    }

    pub fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn numer_big(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom_big(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    fn as_big(&self) -> Ratio<BigInt> {
        match &self.0 {
            Repr::Small(n, d) => Ratio::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => (**r).clone(),
        }
    }

    /// `max(self - other, 0)`. Threshold bookkeeping clamps at zero: a
    /// threshold driven to (or below) zero means the vertex self-activates,
    /// and the two states are indistinguishable to every algorithm here.
    pub fn saturating_sub(&self, other: &Rational) -> Rational {
        if self <= other {
            return Rational::zero();
        }
        match (&self.0, &other.0) {
            (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
                let n = *an as i128 * *bd as i128 - *bn as i128 * *ad as i128;
                let d = *ad as i128 * *bd as i128;
                Rational(normalize_i128(n, d))
            }
            _ => Rational(normalize_big(self.as_big() - other.as_big())),
        }
    }

    /// `self * scale`, required to come out an integer (callers pass the
    /// common denominator scale).
    pub(crate) fn scaled_integer(&self, scale: &BigInt) -> Option<BigInt> {
        let scaled = self.as_big() * scale;
        scaled.is_integer().then(|| scaled.to_integer())
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Rational {}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
                (*an as i128 * *bd as i128).cmp(&(*bn as i128 * *ad as i128))
            }
            (Repr::Big(a), Repr::Big(b)) => a.cmp(b),
            // canonical: a big value never equals a small one
            (Repr::Small(..), Repr::Big(_)) => Ordering::Less,
            (Repr::Big(_), Repr::Small(..)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add<&Rational> for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
                if ad == bd {
                    // common denominator: sum stays reduced up to a factor
                    // shared with d, which the i128 path sorts out; take
                    // the cheap exit for integers.
                    if *ad == 1 {
                        return match an.checked_add(*bn) {
                            Some(n) => Rational(Repr::Small(n, 1)),
                            None => Rational(normalize_i128(*an as i128 + *bn as i128, 1)),
                        };
                    }
                    return Rational(normalize_i128(*an as i128 + *bn as i128, *ad as i128));
                }
                let n = *an as i128 * *bd as i128 + *bn as i128 * *ad as i128;
                let d = *ad as i128 * *bd as i128;
                Rational(normalize_i128(n, d))
            }
            _ => Rational(normalize_big(self.as_big() + rhs.as_big())),
        }
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        *self = &*self + rhs;
    }
}

impl Mul<&Rational> for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
                let n = *an as i128 * *bn as i128;
                let d = *ad as i128 * *bd as i128;
                Rational(normalize_i128(n, d))
            }
            _ => Rational(normalize_big(self.as_big() * rhs.as_big())),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `"p/q"`, decimal strings like `"0.25"`, and plain integers.
    /// Negative values are rejected.
    fn from_str(text: &str) -> Result<Self, Error> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty number".into()));
        }
        if text.starts_with('-') {
            return Err(Error::Parse(format!("negative value {text:?} not allowed")));
        }
        if let Some((num, den)) = text.split_once('/') {
            let n: BigInt = num
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad numerator in {text:?}")))?;
            let d: BigInt = den
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad denominator in {text:?}")))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {text:?}")));
            }
            if n.is_negative() || d.is_negative() {
                return Err(Error::Parse(format!("negative value {text:?} not allowed")));
            }
            return Ok(Rational(normalize_big(Ratio::new(n, d))));
        }
        if let Some((int_part, frac_part)) = text.split_once('.') {
            if !frac_part.chars().all(|c| c.is_ascii_digit()) || frac_part.is_empty() {
                return Err(Error::Parse(format!("bad decimal {text:?}")));
            }
            let int_part = if int_part.is_empty() { "0" } else { int_part };
            let whole: BigInt = int_part
                .parse()
                .map_err(|_| Error::Parse(format!("bad decimal {text:?}")))?;
            let frac: BigInt = frac_part
                .parse()
                .map_err(|_| Error::Parse(format!("bad decimal {text:?}")))?;
            if whole.is_negative() {
                return Err(Error::Parse(format!("negative value {text:?} not allowed")));
            }
            let pow = BigInt::from(10u32).pow(frac_part.len() as u32);
            return Ok(Rational(normalize_big(Ratio::new(whole * &pow + frac, pow))));
        }
        let n: BigInt = text
            .parse()
            .map_err(|_| Error::Parse(format!("bad number {text:?}")))?;
        Ok(Rational(normalize_big(Ratio::from_integer(n))))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(u64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Text(s) => s.parse().map_err(|e| D::Error::custom(format!("{e}"))),
            Raw::Int(v) => Ok(Rational::from_integer(v)),
        }
    }
}
