//! Rate constants per action name, kept exact so the oracle can work in
//! rational arithmetic, plus the `Weight` abstraction over exact and float
//! rate values.

use std::collections::BTreeMap;
use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::syntax::ActionName;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RatesError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("rate for {name} must be positive and finite, got {text}")]
    NotPositive { name: String, text: String },
}

/// Total map from action names to positive rates, with a default for
/// names that are not listed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RateMap {
    rates: BTreeMap<ActionName, BigRational>,
    default: BigRational,
}

impl Default for RateMap {
    fn default() -> Self {
        RateMap::uniform(BigRational::one())
    }
}

impl RateMap {
    /// Every name gets `default`. Panics unless `default` is positive.
    pub fn uniform(default: BigRational) -> Self {
        assert!(default.is_positive(), "rates must be positive");
        RateMap {
            rates: BTreeMap::new(),
            default,
        }
    }

    /// Panics unless `rate` is positive.
    pub fn with(mut self, name: impl Into<ActionName>, rate: BigRational) -> Self {
        assert!(rate.is_positive(), "rates must be positive");
        self.rates.insert(name.into(), rate);
        self
    }

    /// Convenience for integer rates.
    pub fn with_int(self, name: impl Into<ActionName>, rate: i64) -> Self {
        self.with(name, BigRational::from_integer(BigInt::from(rate)))
    }

    pub fn exact(&self, name: &ActionName) -> &BigRational {
        self.rates.get(name).unwrap_or(&self.default)
    }

    pub fn float(&self, name: &ActionName) -> f64 {
        to_f64(self.exact(name))
    }

    pub fn default_rate(&self) -> &BigRational {
        &self.default
    }

    pub fn listed(&self) -> impl Iterator<Item = (&ActionName, &BigRational)> {
        self.rates.iter()
    }

    /// Parses lines of the form `name = rate` and `default = rate`; `#`
    /// starts a comment.
    pub fn parse(text: &str) -> Result<Self, RatesError> {
        let mut map = RateMap::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let malformed = |message: String| RatesError::Malformed {
                line: i + 1,
                message,
            };
            let (name, value) = line
                .split_once('=')
                .ok_or_else(|| malformed(format!("expected `name = rate`, found `{line}`")))?;
            let (name, value) = (name.trim(), value.trim());
            let valid_name = name
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid_name {
                return Err(malformed(format!("invalid action name `{name}`")));
            }
            let rate =
                parse_decimal(value).ok_or_else(|| malformed(format!("invalid rate `{value}`")))?;
            if !rate.is_positive() {
                return Err(RatesError::NotPositive {
                    name: name.to_string(),
                    text: value.to_string(),
                });
            }
            if name == "default" {
                map.default = rate;
            } else {
                map.rates.insert(ActionName::new(name), rate);
            }
        }
        Ok(map)
    }
}

/// Exact value of a decimal literal such as `10`, `0.25`, `2.5e-3` or a
/// fraction `1/3`.
pub fn parse_decimal(text: &str) -> Option<BigRational> {
    if let Some((num, den)) = text.split_once('/') {
        let num = parse_decimal(num.trim())?;
        let den = parse_decimal(den.trim())?;
        return (!den.is_zero()).then(|| num / den);
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    if exponent.abs() > 400 {
        return None;
    }
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let scale = exponent - frac_part.len() as i32 - 1;
    let ten = BigRational::from_integer(BigInt::from(10));
    let mut value = BigRational::from_integer(digits);
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, scale.unsigned_abs() as usize);
    }
    Some(if negative { -value } else { value })
}

pub fn to_f64(r: &BigRational) -> f64 {
    ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

/// Arithmetic needed for rate tables: exact rationals or `f64`.
pub trait Weight:
    Clone
    + Debug
    + Display
    + PartialEq
    + Zero
    + Add<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn iota(rates: &RateMap, name: &ActionName) -> Self;
    fn from_count(n: u64) -> Self;
    fn to_f64(&self) -> f64;
}

impl Weight for BigRational {
    fn iota(rates: &RateMap, name: &ActionName) -> Self {
        rates.exact(name).clone()
    }

    fn from_count(n: u64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn to_f64(&self) -> f64 {
        to_f64(self)
    }
}

impl Weight for f64 {
    fn iota(rates: &RateMap, name: &ActionName) -> Self {
        rates.float(name)
    }

    fn from_count(n: u64) -> Self {
        n as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}
