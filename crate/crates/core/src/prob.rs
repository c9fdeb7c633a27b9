//! Pile-size probability vectors.
//!
//! A [`ProbabilityVector`] carries its entries both as exact big rationals
//! (the form every oracle computation uses) and as `f64` with a cumulative
//! table (the form the samplers use). Construction normalizes exactly by the
//! rational sum, so the stored rationals always sum to exactly 1.
//!
//! Exact work wants rational inputs; `from_floats` converts each float via
//! its exact binary value, which is lossless but rarely the rational the
//! caller had in mind — prefer `parse_list("1/3,2/3")` for CLI-style input.

use num::rational::BigRational;
use num::{BigInt, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::rng::RngStream;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProbabilityError {
    #[error("probability vector must be nonempty")]
    Empty,
    #[error("probability entry {index} is negative")]
    Negative { index: usize },
    #[error("probability entries sum to zero")]
    ZeroSum,
    #[error("cannot parse probability entry `{entry}`")]
    Parse { entry: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    rationals: Vec<BigRational>,
    floats: Vec<f64>,
    cumulative: Vec<f64>,
}

impl ProbabilityVector {
    /// Normalizes exactly by the rational sum. Fails on negative entries or
    /// an all-zero vector.
    pub fn from_rationals(entries: Vec<BigRational>) -> Result<Self, ProbabilityError> {
        if entries.is_empty() {
            return Err(ProbabilityError::Empty);
        }
        for (index, e) in entries.iter().enumerate() {
            if e.is_negative() {
                return Err(ProbabilityError::Negative { index });
            }
        }
        let sum: BigRational = entries.iter().cloned().sum();
        if sum.is_zero() {
            return Err(ProbabilityError::ZeroSum);
        }
        let rationals: Vec<BigRational> = entries.into_iter().map(|e| e / &sum).collect();
        let floats: Vec<f64> = rationals.iter().map(|r| r.to_f64().unwrap_or(0.0)).collect();
        let mut cumulative = Vec::with_capacity(floats.len());
        let mut acc = 0.0;
        for &f in &floats {
            acc += f;
            cumulative.push(acc);
        }
        // guard against float round-off at the top of the table
        if let Some(last) = cumulative.last_mut() {
            *last = 1.0;
        }
        Ok(Self { rationals, floats, cumulative })
    }

    /// Each float is converted to its exact binary rational before the exact
    /// normalization.
    pub fn from_floats(entries: &[f64]) -> Result<Self, ProbabilityError> {
        let rationals = entries
            .iter()
            .enumerate()
            .map(|(index, &f)| {
                if !f.is_finite() || f < 0.0 {
                    return Err(ProbabilityError::Negative { index });
                }
                Ok(BigRational::from_float(f).unwrap_or_else(BigRational::zero))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rationals(rationals)
    }

    /// The unbiased vector `(1/a, ..., 1/a)`.
    pub fn uniform(a: u32) -> Self {
        assert!(a >= 1, "alphabet size must be >= 1");
        let one_over_a = BigRational::new(BigInt::one(), BigInt::from(a));
        Self::from_rationals(vec![one_over_a; a as usize]).expect("uniform vector is valid")
    }

    /// Parses a comma-separated list; each entry is either an exact rational
    /// `p/q` or a decimal literal (converted via its exact decimal value, so
    /// `0.25` means exactly 1/4).
    pub fn parse_list(s: &str) -> Result<Self, ProbabilityError> {
        let entries = s
            .split(',')
            .map(|e| parse_rational(e.trim()).ok_or(ProbabilityError::Parse { entry: e.trim().to_string() }))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rationals(entries)
    }

    pub fn len(&self) -> usize {
        self.rationals.len()
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }

    pub fn rationals(&self) -> &[BigRational] {
        &self.rationals
    }

    pub fn floats(&self) -> &[f64] {
        &self.floats
    }

    pub fn is_uniform(&self) -> bool {
        self.rationals.windows(2).all(|w| w[0] == w[1])
    }

    /// Lexicographic product: entry `(i, j)` of the result is `p_i * q_j`,
    /// with `i` the major index.
    pub fn tensor(&self, other: &Self) -> Self {
        let rationals = self
            .rationals
            .iter()
            .flat_map(|p| other.rationals.iter().map(move |q| p * q))
            .collect();
        Self::from_rationals(rationals).expect("tensor of valid vectors is valid")
    }

    /// One categorical draw (0-based index), CDF inversion on the float
    /// table.
    pub fn sample_index(&self, rng: &mut RngStream) -> usize {
        let u = rng.unit_f64();
        // first index whose cumulative weight exceeds u; zero-probability
        // entries can never be selected since u < cumulative stays false
        // while the table is flat
        match self.cumulative.binary_search_by(|c| {
            if *c <= u { std::cmp::Ordering::Less } else { std::cmp::Ordering::Greater }
        }) {
            Ok(i) | Err(i) => i.min(self.len() - 1),
        }
    }

    /// Compact descriptor for report echoes, e.g. `uniform` or `1/3,2/3`.
    pub fn descriptor(&self) -> String {
        if self.is_uniform() {
            "uniform".to_string()
        } else {
            self.rationals.iter().map(rational_to_string).collect::<Vec<_>>().join(",")
        }
    }
}

/// Free-function alias for the lexicographic product.
pub fn tensor_product(p: &ProbabilityVector, q: &ProbabilityVector) -> ProbabilityVector {
    p.tensor(q)
}

/// Renders a reduced rational as `num/den`, collapsing denominator 1.
pub fn rational_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q`, an integer, or a plain decimal literal, exactly.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if !frac_part.chars().all(|c| c.is_ascii_digit()) || frac_part.is_empty() {
            return None;
        }
        let negative = int_part.trim_start().starts_with('-');
        let int_part = if int_part.is_empty() || int_part == "-" { "0" } else { int_part };
        let i: BigInt = int_part.parse().ok()?;
        let f: BigInt = frac_part.parse().ok()?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = BigRational::new(f, scale);
        let whole = BigRational::from_integer(i);
        return Some(if negative { whole - frac } else { whole + frac });
    }
    let n: BigInt = s.parse().ok()?;
    Some(BigRational::from_integer(n))
}
