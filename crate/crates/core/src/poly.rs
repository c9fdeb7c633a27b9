//! Integer polynomials and Gaussian (q-)binomial machinery.
//!
//! [`q_multinomial`] is the inversion generating function over arrangements
//! of a multiset: the coefficient of `q^k` counts arrangements of
//! `{1^{b_1}, ..., a^{b_a}}` with exactly `k` inversions. Everything here is
//! exact big-integer arithmetic.

use num::{BigInt, One, Zero};

/// Dense integer polynomial; index = degree, trailing coefficient nonzero
/// unless the polynomial is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![BigInt::one()] }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coefficient_sum(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Self::from_coeffs(coeffs)
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_coeffs(coeffs)
    }
}

impl std::fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => write!(f, "q")?,
                1 => write!(f, "{c}q")?,
                _ if c.is_one() => write!(f, "q^{k}")?,
                _ => write!(f, "{c}q^{k}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Gaussian binomial `[m choose k]_q` via the Pascal-style recurrence
/// `[r k] = [r-1 k-1] + q^k [r-1 k]`, no floating point anywhere.
pub fn q_binomial(m: u64, k: u64) -> IntPolynomial {
    if k > m {
        return IntPolynomial::zero();
    }
    let k = k.min(m - k) as usize; // symmetry keeps the table small
    let mut row: Vec<IntPolynomial> = vec![IntPolynomial::one(); 1];
    for r in 1..=m {
        let cols = (r as usize).min(k);
        let mut next = Vec::with_capacity(cols + 1);
        next.push(IntPolynomial::one());
        for c in 1..=cols {
            let left = &row[c - 1];
            let up = if c < row.len() { row[c].shift(c) } else { IntPolynomial::zero() };
            next.push(left.add(&up));
        }
        row = next;
    }
    row[k].clone()
}

/// The q-multinomial coefficient `[n choose b_1, ..., b_a]_q`, computed as a
/// product of Gaussian binomials over the prefix sums. The coefficient of
/// `q^k` counts multiset arrangements with `k` inversions; the coefficients
/// sum to the ordinary multinomial and the degree is `sum_{i<j} b_i b_j`.
pub fn q_multinomial(composition: &[u64]) -> IntPolynomial {
    let mut result = IntPolynomial::one();
    let mut prefix = 0u64;
    for &b in composition {
        prefix += b;
        result = result.mul(&q_binomial(prefix, b));
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[i64]) -> IntPolynomial {
        IntPolynomial::from_coeffs(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn small_q_binomials() {
        assert_eq!(q_binomial(3, 1), poly(&[1, 1, 1]));
        assert_eq!(q_binomial(4, 2), poly(&[1, 1, 2, 1, 1]));
        assert_eq!(q_binomial(5, 0), IntPolynomial::one());
        assert_eq!(q_binomial(2, 3), IntPolynomial::zero());
    }

    #[test]
    fn q_multinomial_examples() {
        // arrangements of {1,1,2} have 0, 1, 2 inversions
        assert_eq!(q_multinomial(&[2, 1]), poly(&[1, 1, 1]));
        // single pile
        assert_eq!(q_multinomial(&[6]), IntPolynomial::one());
        // all-distinct 3-letter case: inversion table of the 6 permutations
        assert_eq!(q_multinomial(&[1, 1, 1]), poly(&[1, 2, 2, 1]));
    }

    #[test]
    fn coefficient_sum_and_degree() {
        for comp in [vec![2u64, 1], vec![3, 2], vec![1, 1, 1, 1], vec![2, 2, 3]] {
            let p = q_multinomial(&comp);
            let n: u64 = comp.iter().sum();
            let mut multinomial = BigInt::one();
            let mut rem = n;
            for &b in &comp {
                for i in 0..b {
                    multinomial *= BigInt::from(rem - i);
                }
                for i in 1..=b {
                    multinomial /= BigInt::from(i);
                }
                rem -= b;
            }
            assert_eq!(p.coefficient_sum(), multinomial, "composition {comp:?}");
            let cross: u64 = comp
                .iter()
                .enumerate()
                .flat_map(|(i, &bi)| comp[i + 1..].iter().map(move |&bj| bi * bj))
                .sum();
            assert_eq!(p.degree(), Some(cross as usize), "composition {comp:?}");
        }
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(q_multinomial(&[2, 1]).to_string(), "1 + q + q^2");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn mul_add_shift() {
        let p = poly(&[1, 1]);
        assert_eq!(p.mul(&p), poly(&[1, 2, 1]));
        assert_eq!(p.add(&poly(&[0, -1])), poly(&[1]));
        assert_eq!(p.shift(2), poly(&[0, 0, 1, 1]));
        assert_eq!(p.mul(&IntPolynomial::zero()), IntPolynomial::zero());
    }
}
