//! Exact rational probabilities and finite distributions.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Float-mode sums are accepted when within this distance of one.
pub const FLOAT_SUM_TOL: f64 = 1e-12;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"3/5"`, `"0.6"`, `"1e-3"` or `"2"` into an exact rational.
///
/// Decimal notation is read digit by digit, so `"0.1"` is exactly 1/10
/// rather than the nearest binary float.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("cannot parse '{s}' as a rational"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{whole}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = Rational::from_integer(digits);
    if scale >= 0 {
        r *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -r } else { r })
}

/// Exact conversion of a finite float (every f64 is a dyadic rational).
pub fn from_f64_exact(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::InvalidInput(format!("non-finite value {x}")))
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A probability vector over `0..len`, held exactly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteDistribution {
    weights: Vec<Rational>,
}

impl FiniteDistribution {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDistribution("no outcomes".into()));
        }
        if let Some(i) = weights.iter().position(|w| w.is_negative()) {
            return Err(Error::InvalidDistribution(format!("negative weight at index {i}")));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!("weights sum to {} instead of 1", format_rational(&total))));
        }
        Ok(Self { weights })
    }

    /// Float-mode constructor: accepts sums within [`FLOAT_SUM_TOL`] of one,
    /// then rescales exactly so the stored weights sum to one.
    pub fn from_f64(weights: &[f64]) -> Result<Self> {
        if let Some(i) = weights.iter().position(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidDistribution(format!("bad weight at index {i}")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > FLOAT_SUM_TOL {
            return Err(Error::InvalidDistribution(format!("weights sum to {sum} instead of 1")));
        }
        let exact: Vec<Rational> = weights.iter().map(|w| from_f64_exact(*w)).collect::<Result<_>>()?;
        Self::normalized(exact)
    }

    /// Divides by the total; fails when the total is zero.
    pub fn normalized(weights: Vec<Rational>) -> Result<Self> {
        let total: Rational = weights.iter().sum();
        if total.is_zero() {
            return Err(Error::InvalidDistribution("total mass is zero".into()));
        }
        Self::new(weights.into_iter().map(|w| w / &total).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDistribution("no outcomes".into()));
        }
        Ok(Self { weights: vec![ratio(1, n as i64); n] })
    }

    pub fn point_mass(n: usize, at: usize) -> Result<Self> {
        if at >= n {
            return Err(Error::IndexOutOfRange { index: at, size: n });
        }
        let mut weights = vec![Rational::zero(); n];
        weights[at] = Rational::one();
        Ok(Self { weights })
    }

    /// Uniform over the listed outcomes (duplicates are ignored).
    pub fn uniform_over(n: usize, outcomes: &[usize]) -> Result<Self> {
        let mut hit = vec![false; n];
        for &o in outcomes {
            if o >= n {
                return Err(Error::IndexOutOfRange { index: o, size: n });
            }
            hit[o] = true;
        }
        let k = hit.iter().filter(|h| **h).count();
        if k == 0 {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        let w = ratio(1, k as i64);
        Ok(Self { weights: hit.into_iter().map(|h| if h { w.clone() } else { Rational::zero() }).collect() })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &Rational {
        &self.weights[i]
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.weights.iter().enumerate().filter(|(_, w)| !w.is_zero()).map(|(i, _)| i)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.weights.iter().map(to_f64).collect()
    }

    pub fn expect(&self, values: &[Rational]) -> Result<Rational> {
        if values.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: values.len() });
        }
        Ok(self.weights.iter().zip(values).filter(|(w, _)| !w.is_zero()).map(|(w, v)| w * v).sum())
    }
}

impl fmt::Display for FiniteDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(format_rational).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}
