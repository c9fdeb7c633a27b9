//! Exact distributions at small deck sizes, in big-rational arithmetic.
//!
//! These enumerations and dynamic programs are the trust anchor for the
//! whole crate: samplers, closed-form moments, and distance bounds are all
//! tested against them. Floats never appear here; probabilities leave this
//! module as reduced `num/den` rationals.
//!
//! Every enumeration takes an explicit step budget and fails loudly when it
//! would be exceeded; there is no silent fallback. Budgets are measured in
//! "word-steps": (number of objects enumerated) x (work per object, roughly
//! the deck size).

use std::collections::BTreeMap;

use num::rational::BigRational;
use num::{BigInt, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Permutation;
use crate::poly::q_multinomial;
use crate::prob::{parse_rational, rational_to_string, ProbabilityVector};
use crate::shuffle::{coupled_from_word, displacement_permutation};
use crate::perm::Word;
use crate::stats::{descents, inversions, la_sequence_with_ties, tie_aware_extrema_counts, StatisticKind};

/// Default enumeration budget, in word-steps. `10!` permutations of 10 cards
/// cost about `3.6e7` steps and fit; `11!` does not.
pub const DEFAULT_ENUM_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration budget exceeded: needs {required} word-steps, budget is {budget}; use a DP oracle or Monte Carlo instead")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("probability vector length {got} does not match a = {expected}")]
    ProbabilityLength { got: usize, expected: usize },
    #[error("m must satisfy 0 <= m <= n (got m = {m}, n = {n})")]
    TopMOutOfRange { m: usize, n: usize },
    #[error("laws must share the same deck size")]
    SizeMismatch,
    #[error("law is not normalized")]
    NotNormalized,
}

/// A statistic's exact law: value -> probability, with all stored
/// probabilities positive and summing to exactly 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactDistribution {
    support: BTreeMap<i64, BigRational>,
    pub model: String,
    pub statistic: StatisticKind,
}

impl ExactDistribution {
    fn from_weights(
        weights: BTreeMap<i64, BigRational>,
        model: String,
        statistic: StatisticKind,
    ) -> Self {
        let support: BTreeMap<i64, BigRational> =
            weights.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        let dist = Self { support, model, statistic };
        debug_assert!(dist.total().is_one());
        dist
    }

    pub fn support(&self) -> &BTreeMap<i64, BigRational> {
        &self.support
    }

    pub fn probability(&self, value: i64) -> BigRational {
        self.support.get(&value).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total(&self) -> BigRational {
        self.support.values().cloned().sum()
    }

    pub fn mean(&self) -> BigRational {
        self.support
            .iter()
            .map(|(&v, p)| BigRational::from_integer(BigInt::from(v)) * p)
            .sum()
    }

    pub fn variance(&self) -> BigRational {
        let mean = self.mean();
        let second: BigRational = self
            .support
            .iter()
            .map(|(&v, p)| {
                let vv = BigRational::from_integer(BigInt::from(v));
                &vv * &vv * p
            })
            .sum();
        second - &mean * &mean
    }

    /// Pointwise CDF values over a value grid (running rational sums).
    pub fn cdf_on(&self, grid: &[i64]) -> Vec<BigRational> {
        let mut out = Vec::with_capacity(grid.len());
        let mut acc = BigRational::zero();
        let mut iter = self.support.iter().peekable();
        for &v in grid {
            while let Some((&sv, p)) = iter.peek() {
                if sv <= v {
                    acc += (*p).clone();
                    iter.next();
                } else {
                    break;
                }
            }
            out.push(acc.clone());
        }
        out
    }

    pub fn to_f64_map(&self) -> BTreeMap<i64, f64> {
        self.support
            .iter()
            .map(|(&v, p)| (v, p.to_f64().unwrap_or(0.0)))
            .collect()
    }

    pub fn to_json(&self) -> ExactDistributionJson {
        ExactDistributionJson {
            model: self.model.clone(),
            statistic: self.statistic,
            probabilities: self
                .support
                .iter()
                .map(|(v, p)| (v.to_string(), rational_to_string(p)))
                .collect(),
        }
    }

    pub fn from_json(json: &ExactDistributionJson) -> Option<Self> {
        let mut support = BTreeMap::new();
        for (k, v) in &json.probabilities {
            support.insert(k.parse().ok()?, parse_rational(v)?);
        }
        let dist = Self { support, model: json.model.clone(), statistic: json.statistic };
        dist.total().is_one().then_some(dist)
    }
}

/// On-disk form: probabilities as exact `num/den` strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactDistributionJson {
    pub model: String,
    pub statistic: StatisticKind,
    pub probabilities: BTreeMap<String, String>,
}

fn check_budget(required: u128, budget: u64) -> Result<(), OracleError> {
    if required > budget as u128 {
        return Err(OracleError::BudgetExceeded { required, budget });
    }
    Ok(())
}

fn words_cost(n: usize, a: u32) -> u128 {
    (a as u128)
        .checked_pow(n as u32)
        .and_then(|w| w.checked_mul(n as u128))
        .unwrap_or(u128::MAX)
}

fn factorial_cost(n: usize) -> u128 {
    let mut f: u128 = 1;
    for k in 2..=n as u128 {
        f = f.saturating_mul(k);
    }
    f.saturating_mul(n as u128)
}

fn binomial_u128(n: usize, m: usize) -> u128 {
    let m = m.min(n - m.min(n));
    let mut c: u128 = 1;
    for i in 0..m {
        c = c.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    c
}

fn check_p(a: u32, p: &ProbabilityVector) -> Result<(), OracleError> {
    if p.len() != a as usize {
        return Err(OracleError::ProbabilityLength { got: p.len(), expected: a as usize });
    }
    Ok(())
}

/// Calls `f` on every word in `{1..=a}^n`, odometer order.
fn for_each_word(n: usize, a: u32, mut f: impl FnMut(&[u32])) {
    let mut digits = vec![1u32; n];
    loop {
        f(&digits);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if digits[i] < a {
                digits[i] += 1;
                for d in digits[i + 1..].iter_mut() {
                    *d = 1;
                }
                break;
            }
        }
    }
}

/// Calls `f` on every permutation of `1..=n` (Heap's algorithm).
fn for_each_permutation(n: usize, mut f: impl FnMut(&[u32])) {
    let mut values: Vec<u32> = (1..=n as u32).collect();
    let mut c = vec![0usize; n];
    f(&values);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                values.swap(0, i);
            } else {
                values.swap(c[i], i);
            }
            f(&values);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Calls `f` on every composition `b_1 + ... + b_a = n` with `b_i >= 0`.
fn for_each_composition(n: u64, a: usize, mut f: impl FnMut(&[u64])) {
    fn recurse(rest: u64, slot: usize, buf: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
        if slot + 1 == buf.capacity() {
            buf.push(rest);
            f(buf);
            buf.pop();
            return;
        }
        for b in 0..=rest {
            buf.push(b);
            recurse(rest - b, slot + 1, buf, f);
            buf.pop();
        }
    }
    let mut buf = Vec::with_capacity(a);
    recurse(n, 0, &mut buf, &mut f);
}

/// Lexicographic next permutation of a slice with repeats; `false` once the
/// sequence is fully descending.
fn next_multiset_permutation(xs: &mut [u32]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// Tie-aware statistic value of a digit or one-line slice.
pub(crate) fn eval_stat_slice(stat: StatisticKind, seq: &[u32]) -> i64 {
    let v = match stat {
        StatisticKind::Descents => descents(seq).expect("nonempty"),
        StatisticKind::Inversions => inversions(seq).expect("nonempty"),
        StatisticKind::LongestAlternating => la_sequence_with_ties(seq),
        StatisticKind::LocalMaxCount => tie_aware_extrema_counts(seq).0,
        StatisticKind::LocalMinCount => tie_aware_extrema_counts(seq).1,
    };
    v as i64
}

fn word_weight(p: &[BigRational], digits: &[u32]) -> BigRational {
    let mut w = BigRational::one();
    for &d in digits {
        w *= &p[d as usize - 1];
    }
    w
}

/// Exact law of a statistic over words of `n` i.i.d. digits with law `p`.
/// The LA statistic is the tie-aware one.
pub fn exact_dist_words(
    n: usize,
    a: u32,
    p: &ProbabilityVector,
    stat: StatisticKind,
    budget: u64,
) -> Result<ExactDistribution, OracleError> {
    check_p(a, p)?;
    check_budget(words_cost(n, a), budget)?;
    let model = format!("word(n={n},a={a},p={})", p.descriptor());
    let mut weights: BTreeMap<i64, BigRational> = BTreeMap::new();
    if p.is_uniform() {
        // equal weights: count words, divide once
        let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
        for_each_word(n, a, |digits| {
            *counts.entry(eval_stat_slice(stat, digits)).or_insert(0) += 1;
        });
        let denom = BigInt::from(a).pow(n as u32);
        for (v, c) in counts {
            weights.insert(v, BigRational::new(BigInt::from(c), denom.clone()));
        }
    } else {
        let rat = p.rationals();
        for_each_word(n, a, |digits| {
            let w = word_weight(rat, digits);
            if !w.is_zero() {
                let e = weights.entry(eval_stat_slice(stat, digits)).or_insert_with(BigRational::zero);
                *e += w;
            }
        });
    }
    Ok(ExactDistribution::from_weights(weights, model, stat))
}

/// Exact law of a statistic over uniformly random permutations of `n`.
pub fn exact_dist_uniform(
    n: usize,
    stat: StatisticKind,
    budget: u64,
) -> Result<ExactDistribution, OracleError> {
    check_budget(factorial_cost(n), budget)?;
    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
    for_each_permutation(n, |values| {
        *counts.entry(eval_stat_slice(stat, values)).or_insert(0) += 1;
    });
    let mut denom = BigInt::one();
    for k in 2..=n {
        denom *= BigInt::from(k);
    }
    let weights = counts
        .into_iter()
        .map(|(v, c)| (v, BigRational::new(BigInt::from(c), denom.clone())))
        .collect();
    Ok(ExactDistribution::from_weights(weights, format!("uniform(n={n})"), stat))
}

/// Exact permutation law of the `a`-pile riffle, by enumerating digit words
/// and pushing each through the displacement map (the inverse description).
pub fn exact_perm_law_riffle(
    n: usize,
    a: u32,
    p: &ProbabilityVector,
    budget: u64,
) -> Result<BTreeMap<Permutation, BigRational>, OracleError> {
    check_p(a, p)?;
    check_budget(words_cost(n, a), budget)?;
    let rat = p.rationals();
    let mut law: BTreeMap<Permutation, BigRational> = BTreeMap::new();
    for_each_word(n, a, |digits| {
        let w = word_weight(rat, digits);
        if !w.is_zero() {
            let perm = displacement_permutation(digits);
            *law.entry(perm).or_insert_with(BigRational::zero) += w;
        }
    });
    Ok(law)
}

/// Exact permutation law of the `a`-pile riffle by the forward description:
/// enumerate pile-size compositions, then all interleavings of each.
/// Independent of [`exact_perm_law_riffle`]'s route; the two must agree.
pub fn exact_perm_law_riffle_forward(
    n: usize,
    a: u32,
    p: &ProbabilityVector,
    budget: u64,
) -> Result<BTreeMap<Permutation, BigRational>, OracleError> {
    check_p(a, p)?;
    check_budget(words_cost(n, a), budget)?;
    let rat = p.rationals();
    let mut law: BTreeMap<Permutation, BigRational> = BTreeMap::new();
    for_each_composition(n as u64, a as usize, |sizes| {
        // each of the multinomial(n; sizes) interleavings shares the weight
        // prod p_i^{b_i}
        let mut weight = BigRational::one();
        for (i, &b) in sizes.iter().enumerate() {
            for _ in 0..b {
                weight *= &rat[i];
            }
        }
        if weight.is_zero() {
            return;
        }
        let mut labels: Vec<u32> = Vec::with_capacity(n);
        for (i, &b) in sizes.iter().enumerate() {
            labels.extend(std::iter::repeat_n(i as u32 + 1, b as usize));
        }
        loop {
            let perm = displacement_permutation(&labels);
            *law.entry(perm).or_insert_with(BigRational::zero) += weight.clone();
            if !next_multiset_permutation(&mut labels) {
                break;
            }
        }
    });
    Ok(law)
}

/// Exact permutation law of the ordered top-m shuffle, forward route:
/// uniform over the `C(n, m)` interleavings of piles `(m, n-m)`.
pub fn exact_perm_law_topm(
    n: usize,
    m: usize,
    budget: u64,
) -> Result<BTreeMap<Permutation, BigRational>, OracleError> {
    if m > n {
        return Err(OracleError::TopMOutOfRange { m, n });
    }
    check_budget(binomial_u128(n, m).saturating_mul(n as u128), budget)?;
    let weight = BigRational::new(BigInt::one(), BigInt::from(binomial_u128(n, m)));
    let mut labels: Vec<u32> = vec![1; m];
    labels.extend(std::iter::repeat_n(2, n - m));
    let mut law: BTreeMap<Permutation, BigRational> = BTreeMap::new();
    loop {
        let perm = displacement_permutation(&labels);
        *law.entry(perm).or_insert_with(BigRational::zero) += weight.clone();
        if !next_multiset_permutation(&mut labels) {
            break;
        }
    }
    Ok(law)
}

/// Exact permutation law of the ordered top-m shuffle via its inverse
/// description: uniformly random binary words with exactly `n - m` high
/// digits, pushed through the sort-and-invert route.
pub fn exact_perm_law_topm_inverse(
    n: usize,
    m: usize,
    budget: u64,
) -> Result<BTreeMap<Permutation, BigRational>, OracleError> {
    if m > n {
        return Err(OracleError::TopMOutOfRange { m, n });
    }
    check_budget(binomial_u128(n, m).saturating_mul(n as u128), budget)?;
    let weight = BigRational::new(BigInt::one(), BigInt::from(binomial_u128(n, m)));
    let mut digits: Vec<u32> = vec![1; m];
    digits.extend(std::iter::repeat_n(2, n - m));
    let mut law: BTreeMap<Permutation, BigRational> = BTreeMap::new();
    loop {
        let coupled = coupled_from_word(Word::new(digits.clone(), 2).expect("binary word"));
        *law.entry(coupled.permutation).or_insert_with(BigRational::zero) += weight.clone();
        if !next_multiset_permutation(&mut digits) {
            break;
        }
    }
    Ok(law)
}

/// Exact law of a statistic under the ordered top-m shuffle.
pub fn exact_dist_topm(
    n: usize,
    m: usize,
    stat: StatisticKind,
    budget: u64,
) -> Result<ExactDistribution, OracleError> {
    let law = exact_perm_law_topm_inverse(n, m, budget)?;
    Ok(stat_pushforward(&law, stat, format!("top-m(n={n},m={m})")))
}

/// Exact inversion law of the riffle via the generating-function route:
/// sum over pile compositions of `prod p_i^{b_i}` times the q-multinomial
/// coefficients of the composition. Must agree with the word enumeration.
pub fn exact_inv_dist_via_galois(
    n: usize,
    a: u32,
    p: &ProbabilityVector,
    budget: u64,
) -> Result<ExactDistribution, OracleError> {
    check_p(a, p)?;
    let compositions = binomial_u128(n + a as usize - 1, a as usize - 1);
    check_budget(compositions.saturating_mul((n as u128).saturating_mul(n as u128)), budget)?;
    let rat = p.rationals();
    let mut weights: BTreeMap<i64, BigRational> = BTreeMap::new();
    for_each_composition(n as u64, a as usize, |sizes| {
        let mut weight = BigRational::one();
        for (i, &b) in sizes.iter().enumerate() {
            for _ in 0..b {
                weight *= &rat[i];
            }
        }
        if weight.is_zero() {
            return;
        }
        let poly = q_multinomial(sizes);
        for (k, coeff) in poly.coeffs().iter().enumerate() {
            if !coeff.is_zero() {
                let e = weights.entry(k as i64).or_insert_with(BigRational::zero);
                *e += &weight * BigRational::from_integer(coeff.clone());
            }
        }
    });
    let model = format!("riffle(n={n},a={a},p={})", p.descriptor());
    Ok(ExactDistribution::from_weights(weights, model, StatisticKind::Inversions))
}

/// Exact descent law of the riffle via a transfer-matrix DP over positions
/// with state (last digit, descent count).
pub fn exact_des_dist_dp(
    n: usize,
    a: u32,
    p: &ProbabilityVector,
    budget: u64,
) -> Result<ExactDistribution, OracleError> {
    check_p(a, p)?;
    check_budget((n as u128) * (n as u128) * (a as u128) * (a as u128), budget)?;
    let rat = p.rationals();
    let a = a as usize;
    // dp[d][k]: weight of prefixes ending in digit d+1 with k descents
    let mut dp: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n]; a];
    for d in 0..a {
        dp[d][0] = rat[d].clone();
    }
    for _pos in 2..=n {
        let mut next: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n]; a];
        for (d, row) in dp.iter().enumerate() {
            for (k, weight) in row.iter().enumerate().take(n - 1) {
                if weight.is_zero() {
                    continue;
                }
                for (d2, pd2) in rat.iter().enumerate() {
                    if pd2.is_zero() {
                        continue;
                    }
                    let k2 = k + usize::from(d > d2);
                    next[d2][k2] += weight * pd2;
                }
            }
        }
        dp = next;
    }
    let mut weights: BTreeMap<i64, BigRational> = BTreeMap::new();
    for row in dp {
        for (k, w) in row.into_iter().enumerate() {
            if !w.is_zero() {
                *weights.entry(k as i64).or_insert_with(BigRational::zero) += w;
            }
        }
    }
    let model = format!("riffle(n={n},a={},p={})", a, p.descriptor());
    Ok(ExactDistribution::from_weights(weights, model, StatisticKind::Descents))
}

/// Pushforward of an exact permutation law through a statistic.
pub fn stat_pushforward(
    law: &BTreeMap<Permutation, BigRational>,
    stat: StatisticKind,
    model: String,
) -> ExactDistribution {
    let mut weights: BTreeMap<i64, BigRational> = BTreeMap::new();
    for (perm, w) in law {
        let v = eval_stat_slice(stat, perm.values());
        *weights.entry(v).or_insert_with(BigRational::zero) += w.clone();
    }
    ExactDistribution::from_weights(weights, model, stat)
}

/// Exact law of a statistic of the riffle-shuffled permutation itself
/// (needed where the permutation statistic differs from the word statistic,
/// e.g. the alternating length).
pub fn exact_dist_riffle_perm(
    n: usize,
    a: u32,
    p: &ProbabilityVector,
    stat: StatisticKind,
    budget: u64,
) -> Result<ExactDistribution, OracleError> {
    let law = exact_perm_law_riffle(n, a, p, budget)?;
    let model = format!("riffle(n={n},a={a},p={})", p.descriptor());
    Ok(stat_pushforward(&law, stat, model))
}

/// Exact law of the composition "draw from `first`, then draw from
/// `second`" (first listed acts on the deck first).
pub fn convolve_laws(
    first: &BTreeMap<Permutation, BigRational>,
    second: &BTreeMap<Permutation, BigRational>,
    budget: u64,
) -> Result<BTreeMap<Permutation, BigRational>, OracleError> {
    let fk = first.keys().next().ok_or(OracleError::NotNormalized)?;
    let sk = second.keys().next().ok_or(OracleError::NotNormalized)?;
    if fk.len() != sk.len() {
        return Err(OracleError::SizeMismatch);
    }
    check_budget(
        (first.len() as u128)
            .saturating_mul(second.len() as u128)
            .saturating_mul(fk.len() as u128),
        budget,
    )?;
    let mut law: BTreeMap<Permutation, BigRational> = BTreeMap::new();
    for (f, pf) in first {
        for (s, ps) in second {
            let composed = f.then(s);
            *law.entry(composed).or_insert_with(BigRational::zero) += pf * ps;
        }
    }
    Ok(law)
}

/// Sum of an exact permutation law; 1 for every law this module produces.
pub fn perm_law_total(law: &BTreeMap<Permutation, BigRational>) -> BigRational {
    law.values().cloned().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn uniform(a: u32) -> ProbabilityVector {
        ProbabilityVector::uniform(a)
    }

    #[test]
    fn word_law_examples() {
        let d = exact_dist_words(2, 2, &uniform(2), StatisticKind::Inversions, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(d.support().len(), 2);
        assert_eq!(d.probability(0), r(3, 4));
        assert_eq!(d.probability(1), r(1, 4));

        let d = exact_dist_words(1, 3, &uniform(3), StatisticKind::Inversions, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(d.probability(0), r(1, 1));

        let d = exact_dist_words(3, 2, &uniform(2), StatisticKind::Descents, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(d.probability(0), r(1, 2));
        assert_eq!(d.probability(1), r(1, 2));
    }

    #[test]
    fn uniform_law_examples() {
        let d = exact_dist_uniform(3, StatisticKind::Descents, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(d.probability(0), r(1, 6));
        assert_eq!(d.probability(1), r(4, 6));
        assert_eq!(d.probability(2), r(1, 6));

        let d = exact_dist_uniform(2, StatisticKind::Inversions, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(d.probability(0), r(1, 2));
        assert_eq!(d.probability(1), r(1, 2));

        let d = exact_dist_uniform(7, StatisticKind::LongestAlternating, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(d.mean(), r(29, 6));
        assert_eq!(d.variance(), r(211, 180));
    }

    #[test]
    fn riffle_perm_law_examples() {
        let law = exact_perm_law_riffle(4, 2, &uniform(2), DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(law[&Permutation::identity(4)], r(5, 16));
        assert!(perm_law_total(&law).is_one());

        let law1 = exact_perm_law_riffle(5, 1, &uniform(1), DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(law1.len(), 1);
        assert_eq!(law1[&Permutation::identity(5)], r(1, 1));

        let law = exact_perm_law_riffle(7, 2, &uniform(2), DEFAULT_ENUM_BUDGET).unwrap();
        let target = Permutation::from_one_line(vec![1, 2, 5, 3, 6, 7, 4]).unwrap();
        assert_eq!(law[&target], r(1, 128));

        let law33 = exact_perm_law_riffle(3, 3, &uniform(3), DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(law33[&Permutation::identity(3)], r(10, 27));
    }

    #[test]
    fn forward_route_matches_word_route() {
        for (n, a) in [(4usize, 2u32), (5, 2), (4, 3)] {
            let word_route = exact_perm_law_riffle(n, a, &uniform(a), DEFAULT_ENUM_BUDGET).unwrap();
            let fwd_route =
                exact_perm_law_riffle_forward(n, a, &uniform(a), DEFAULT_ENUM_BUDGET).unwrap();
            assert_eq!(word_route, fwd_route, "n={n} a={a}");
        }
        let biased = ProbabilityVector::parse_list("1/3,2/3").unwrap();
        assert_eq!(
            exact_perm_law_riffle(4, 2, &biased, DEFAULT_ENUM_BUDGET).unwrap(),
            exact_perm_law_riffle_forward(4, 2, &biased, DEFAULT_ENUM_BUDGET).unwrap()
        );
    }

    #[test]
    fn topm_examples() {
        let d = exact_dist_topm(2, 1, StatisticKind::Inversions, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(d.probability(0), r(1, 2));
        assert_eq!(d.probability(1), r(1, 2));

        let d = exact_dist_topm(5, 0, StatisticKind::Descents, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(d.probability(0), r(1, 1));

        // two ordered piles still produce multi-descent listings: returning
        // to the low pile after a high-pile run is a descent each time
        let d = exact_dist_topm(6, 2, StatisticKind::Descents, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(d.probability(0), r(1, 15));
        assert_eq!(d.probability(1), r(8, 15));
        assert_eq!(d.probability(2), r(6, 15));
    }

    #[test]
    fn galois_route_matches_enumeration() {
        let d = exact_inv_dist_via_galois(2, 2, &uniform(2), DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(d.probability(0), r(3, 4));
        assert_eq!(d.probability(1), r(1, 4));

        let words = exact_dist_words(8, 2, &uniform(2), StatisticKind::Inversions, DEFAULT_ENUM_BUDGET).unwrap();
        let galois = exact_inv_dist_via_galois(8, 2, &uniform(2), DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(words.support(), galois.support());

        let point = exact_inv_dist_via_galois(6, 1, &uniform(1), DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(point.probability(0), r(1, 1));
    }

    #[test]
    fn des_dp_matches_enumeration() {
        let dp = exact_des_dist_dp(3, 2, &uniform(2), DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(dp.probability(0), r(1, 2));
        assert_eq!(dp.probability(1), r(1, 2));

        let dp = exact_des_dist_dp(2, 3, &uniform(3), DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(dp.probability(1), r(1, 3));

        let point = exact_des_dist_dp(4, 1, &uniform(1), DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(point.probability(0), r(1, 1));

        let p = ProbabilityVector::parse_list("1/3,2/3").unwrap();
        let dp = exact_des_dist_dp(6, 2, &p, DEFAULT_ENUM_BUDGET).unwrap();
        let enumerated = exact_dist_words(6, 2, &p, StatisticKind::Descents, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(dp.support(), enumerated.support());
    }

    #[test]
    fn convolution_identity_law() {
        let p42 = exact_perm_law_riffle(4, 2, &uniform(2), DEFAULT_ENUM_BUDGET).unwrap();
        let mut point = BTreeMap::new();
        point.insert(Permutation::identity(4), BigRational::one());
        assert_eq!(convolve_laws(&p42, &point, DEFAULT_ENUM_BUDGET).unwrap(), p42);
        assert_eq!(convolve_laws(&point, &p42, DEFAULT_ENUM_BUDGET).unwrap(), p42);
        // support bound
        let conv = convolve_laws(&p42, &p42, DEFAULT_ENUM_BUDGET).unwrap();
        assert!(conv.len() <= p42.len() * p42.len());
        assert!(conv.len() <= 24);
    }

    #[test]
    fn budget_is_enforced() {
        let err = exact_dist_uniform(20, StatisticKind::Descents, DEFAULT_ENUM_BUDGET).unwrap_err();
        assert!(matches!(err, OracleError::BudgetExceeded { .. }));
        let msg = err.to_string();
        assert!(msg.contains("Monte Carlo"));
        assert!(exact_dist_words(40, 3, &uniform(3), StatisticKind::Descents, DEFAULT_ENUM_BUDGET).is_err());
        // tight custom budget
        assert!(exact_dist_uniform(5, StatisticKind::Descents, 10).is_err());
    }

    #[test]
    fn json_round_trip_preserves_exactness() {
        let d = exact_dist_words(3, 2, &uniform(2), StatisticKind::Inversions, DEFAULT_ENUM_BUDGET).unwrap();
        let json = d.to_json();
        assert_eq!(json.probabilities["0"], "1/2");
        let back = ExactDistribution::from_json(&json).unwrap();
        assert_eq!(back, d);
        let text = serde_json::to_string(&json).unwrap();
        let parsed: ExactDistributionJson = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, json);
    }
}
