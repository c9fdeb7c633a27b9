//! Seedable samplers for every shuffle model.
//!
//! Two independent routes produce riffle outcomes:
//!
//! * the forward route cuts the deck into piles with multinomial sizes and
//!   interleaves them uniformly ([`sample_riffle_forward`]);
//! * the inverse route assigns i.i.d. digits to the cards and stable-sorts
//!   by digit, yielding a coupled `(word, permutation)` pair
//!   ([`sample_riffle_inverse`]).
//!
//! The forward route places piles through the displacement map of its
//! interleaving word ([`displacement_permutation`]); the inverse route
//! sorts and inverts, with the displacement form asserted against it in
//! debug builds. The two exact laws coincide; the test suite checks this by
//! enumeration.
//!
//! Samplers are pure given an [`RngStream`]. A stream is single-owner:
//! parallel callers construct disjoint streams instead of locking one.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{Permutation, Word};
use crate::prob::ProbabilityVector;
use crate::rng::RngStream;
use crate::stats::rank_sequence;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("a must be >= 1")]
    AlphabetTooSmall,
    #[error("deck size n must be >= 1")]
    DeckTooSmall,
    #[error("probability vector length {got} does not match a = {expected}")]
    ProbabilityLength { got: usize, expected: usize },
    #[error("m must satisfy 0 <= m <= n (got m = {m}, n = {n})")]
    TopMOutOfRange { m: usize, n: usize },
    #[error("alpha must satisfy 0 <= alpha < 1/2 (got {alpha})")]
    AlphaOutOfRange { alpha: f64 },
    #[error("alpha too large for n")]
    AlphaTooLarge,
    #[error("convolution requires at least one model")]
    EmptyConvolution,
    #[error("convolution models disagree on n ({first} vs {other})")]
    ConvolutionSizeMismatch { first: usize, other: usize },
}

/// A coupled draw from the inverse description: the digit word and the
/// shuffle outcome it induces.
///
/// Invariant (asserted in debug builds): for every position `i`,
/// `permutation(i) = #{j : word[j] < word[i]} + #{j <= i : word[j] = word[i]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoupledSample {
    pub word: Word,
    pub permutation: Permutation,
}

/// The shuffle distributions understood by the Monte Carlo engine and CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ShuffleModel {
    /// Multi-pile riffle via the forward description (cut, then interleave).
    RiffleForward { n: usize, a: u32, p: Option<Vec<String>> },
    /// Multi-pile riffle via the inverse description (digits, then sort).
    RiffleInverse { n: usize, a: u32, p: Option<Vec<String>> },
    UniformPermutation { n: usize },
    /// Cut the top `m` cards and interleave them into the rest, both packets
    /// keeping relative order.
    OrderedTopM { n: usize, m: usize },
    /// Two-pile riffle with pile sizes uniform over the splits where both
    /// piles hold at least `alpha * n` cards.
    AlphaConstrained { n: usize, alpha: f64 },
    /// Composition of independent draws; the first listed model acts on the
    /// deck first.
    Convolution { models: Vec<ShuffleModel> },
}

impl ShuffleModel {
    pub fn deck_size(&self) -> usize {
        match self {
            ShuffleModel::RiffleForward { n, .. }
            | ShuffleModel::RiffleInverse { n, .. }
            | ShuffleModel::UniformPermutation { n }
            | ShuffleModel::OrderedTopM { n, .. }
            | ShuffleModel::AlphaConstrained { n, .. } => *n,
            ShuffleModel::Convolution { models } => {
                models.first().map_or(0, ShuffleModel::deck_size)
            }
        }
    }

    fn parse_p(a: u32, p: &Option<Vec<String>>) -> Result<ProbabilityVector, ModelError> {
        match p {
            None => Ok(ProbabilityVector::uniform(a)),
            Some(entries) => {
                let joined = entries.join(",");
                let pv = ProbabilityVector::parse_list(&joined)
                    .map_err(|_| ModelError::ProbabilityLength { got: entries.len(), expected: a as usize })?;
                if pv.len() != a as usize {
                    return Err(ModelError::ProbabilityLength { got: pv.len(), expected: a as usize });
                }
                Ok(pv)
            }
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        match self {
            ShuffleModel::RiffleForward { n, a, p } | ShuffleModel::RiffleInverse { n, a, p } => {
                if *n < 1 {
                    return Err(ModelError::DeckTooSmall);
                }
                if *a < 1 {
                    return Err(ModelError::AlphabetTooSmall);
                }
                Self::parse_p(*a, p).map(|_| ())
            }
            ShuffleModel::UniformPermutation { n } => {
                if *n < 1 { Err(ModelError::DeckTooSmall) } else { Ok(()) }
            }
            ShuffleModel::OrderedTopM { n, m } => {
                if *n < 1 {
                    Err(ModelError::DeckTooSmall)
                } else if *m > *n {
                    Err(ModelError::TopMOutOfRange { m: *m, n: *n })
                } else {
                    Ok(())
                }
            }
            ShuffleModel::AlphaConstrained { n, alpha } => {
                if *n < 1 {
                    return Err(ModelError::DeckTooSmall);
                }
                if !alpha.is_finite() || *alpha < 0.0 || *alpha >= 0.5 {
                    return Err(ModelError::AlphaOutOfRange { alpha: *alpha });
                }
                alpha_pile_range(*n, *alpha).map(|_| ())
            }
            ShuffleModel::Convolution { models } => {
                if models.is_empty() {
                    return Err(ModelError::EmptyConvolution);
                }
                let first = models[0].deck_size();
                for m in models {
                    m.validate()?;
                    if m.deck_size() != first {
                        return Err(ModelError::ConvolutionSizeMismatch {
                            first,
                            other: m.deck_size(),
                        });
                    }
                }
                Ok(())
            }
        }
    }

    /// Validates and pre-resolves probability vectors so per-draw work stays
    /// allocation-light.
    pub fn compile(&self) -> Result<CompiledModel, ModelError> {
        self.validate()?;
        Ok(match self {
            ShuffleModel::RiffleForward { n, a, p } => CompiledModel::RiffleForward {
                n: *n,
                p: Self::parse_p(*a, p)?,
            },
            ShuffleModel::RiffleInverse { n, a, p } => CompiledModel::RiffleInverse {
                n: *n,
                p: Self::parse_p(*a, p)?,
            },
            ShuffleModel::UniformPermutation { n } => CompiledModel::Uniform { n: *n },
            ShuffleModel::OrderedTopM { n, m } => CompiledModel::TopM { n: *n, m: *m },
            ShuffleModel::AlphaConstrained { n, alpha } => CompiledModel::Alpha {
                n: *n,
                alpha: *alpha,
            },
            ShuffleModel::Convolution { models } => CompiledModel::Convolution {
                models: models
                    .iter()
                    .map(ShuffleModel::compile)
                    .collect::<Result<Vec<_>, _>>()?,
            },
        })
    }

    /// One draw. Convenience wrapper over [`ShuffleModel::compile`]; batch
    /// callers should compile once.
    pub fn sample(&self, rng: &mut RngStream) -> Permutation {
        self.compile().expect("valid model").sample(rng)
    }

    /// Probability vector of a riffle model (uniform when unspecified).
    pub fn probability_vector(&self) -> Option<ProbabilityVector> {
        match self {
            ShuffleModel::RiffleForward { a, p, .. } | ShuffleModel::RiffleInverse { a, p, .. } => {
                Self::parse_p(*a, p).ok()
            }
            _ => None,
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            ShuffleModel::RiffleForward { n, a, .. } => {
                let p = self.probability_vector().map(|p| p.descriptor()).unwrap_or_default();
                format!("riffle(n={n},a={a},p={p})")
            }
            ShuffleModel::RiffleInverse { n, a, .. } => {
                let p = self.probability_vector().map(|p| p.descriptor()).unwrap_or_default();
                format!("riffle-inverse(n={n},a={a},p={p})")
            }
            ShuffleModel::UniformPermutation { n } => format!("uniform(n={n})"),
            ShuffleModel::OrderedTopM { n, m } => format!("top-m(n={n},m={m})"),
            ShuffleModel::AlphaConstrained { n, alpha } => format!("alpha(n={n},alpha={alpha})"),
            ShuffleModel::Convolution { models } => {
                let parts: Vec<String> = models.iter().map(ShuffleModel::descriptor).collect();
                format!("convolution[{}]", parts.join(" * "))
            }
        }
    }
}

/// A validated model with its probability vectors resolved.
#[derive(Debug, Clone)]
pub enum CompiledModel {
    RiffleForward { n: usize, p: ProbabilityVector },
    RiffleInverse { n: usize, p: ProbabilityVector },
    Uniform { n: usize },
    TopM { n: usize, m: usize },
    Alpha { n: usize, alpha: f64 },
    Convolution { models: Vec<CompiledModel> },
}

impl CompiledModel {
    pub fn sample(&self, rng: &mut RngStream) -> Permutation {
        match self {
            CompiledModel::RiffleForward { n, p } => sample_riffle_forward(*n, p, rng),
            CompiledModel::RiffleInverse { n, p } => sample_riffle_inverse(*n, p, rng).permutation,
            CompiledModel::Uniform { n } => sample_uniform(*n, rng),
            CompiledModel::TopM { n, m } => sample_top_m(*n, *m, rng),
            CompiledModel::Alpha { n, alpha } => {
                sample_alpha_constrained(*n, *alpha, rng).expect("validated at compile time")
            }
            CompiledModel::Convolution { models } => {
                let mut acc = models[0].sample(rng);
                for m in &models[1..] {
                    acc = acc.then(&m.sample(rng));
                }
                acc
            }
        }
    }
}

/// The displacement map of a digit word: card `i` lands at position
/// `#{j : d_j < d_i} + #{j <= i : d_j = d_i}`. Read as one-line notation this
/// is exactly the deck listing produced by the forward shuffle whose
/// interleaving word is `digits`.
pub fn displacement_permutation(digits: &[u32]) -> Permutation {
    let a = digits.iter().copied().max().unwrap_or(1) as usize;
    // counting sort bookkeeping: totals below each digit, then running ranks
    let mut below = vec![0u32; a + 2];
    for &d in digits {
        below[d as usize + 1] += 1;
    }
    for d in 1..below.len() {
        below[d] += below[d - 1];
    }
    let mut seen = vec![0u32; a + 1];
    let values = digits
        .iter()
        .map(|&d| {
            seen[d as usize] += 1;
            below[d as usize] + seen[d as usize]
        })
        .collect();
    Permutation::from_one_line_unchecked(values)
}

/// Builds the coupled pair from a digit word by the sort route: stable-sort
/// card indices by digit (the inverse-shuffle deck), then invert. Debug
/// builds assert the displacement invariant against the independent formula.
pub fn coupled_from_word(word: Word) -> CoupledSample {
    let mut order: Vec<u32> = (0..word.len() as u32).collect();
    order.sort_by_key(|&i| word.digits()[i as usize]); // stable: ties keep index order
    let sorted_deck =
        Permutation::from_one_line_unchecked(order.into_iter().map(|i| i + 1).collect());
    let permutation = sorted_deck.invert();
    debug_assert_eq!(permutation, displacement_permutation(word.digits()));
    CoupledSample { word, permutation }
}

/// Pile sizes `b_1..b_a` with the multinomial `(n; p)` law, realized as `n`
/// independent categorical draws tallied.
pub fn multinomial_cut(n: usize, p: &ProbabilityVector, rng: &mut RngStream) -> Vec<u64> {
    let mut sizes = vec![0u64; p.len()];
    for _ in 0..n {
        sizes[p.sample_index(rng)] += 1;
    }
    sizes
}

/// Uniformly random interleaving of piles with the given sizes, keeping each
/// pile in relative order. Pile `i` holds the card labels
/// `b_1 + ... + b_{i-1} + 1 ..= b_1 + ... + b_i`.
///
/// Implemented by shuffling the multiset of pile labels (uniform over
/// arrangements) and placing piles by stable order, i.e. the displacement
/// map of the label word.
pub fn uniform_interleave(pile_sizes: &[u64], rng: &mut RngStream) -> Permutation {
    let n: u64 = pile_sizes.iter().sum();
    assert!(n >= 1, "interleave requires at least one card");
    let mut labels: Vec<u32> = Vec::with_capacity(n as usize);
    for (i, &b) in pile_sizes.iter().enumerate() {
        labels.extend(std::iter::repeat_n(i as u32 + 1, b as usize));
    }
    rng.shuffle(&mut labels);
    displacement_permutation(&labels)
}

/// One forward riffle draw: multinomial cut, then uniform interleave.
pub fn sample_riffle_forward(n: usize, p: &ProbabilityVector, rng: &mut RngStream) -> Permutation {
    let sizes = multinomial_cut(n, p, rng);
    uniform_interleave(&sizes, rng)
}

/// A word of `n` i.i.d. digits with law `p`.
pub fn sample_word(n: usize, p: &ProbabilityVector, rng: &mut RngStream) -> Word {
    let digits = (0..n).map(|_| p.sample_index(rng) as u32 + 1).collect();
    Word::new(digits, p.len() as u32).expect("sampled digits are in range")
}

/// One inverse-description draw: i.i.d. digits, stable sort, invert. The
/// permutation has the same law as [`sample_riffle_forward`].
pub fn sample_riffle_inverse(n: usize, p: &ProbabilityVector, rng: &mut RngStream) -> CoupledSample {
    coupled_from_word(sample_word(n, p, rng))
}

/// Uniform permutation via an in-place unbiased shuffle.
pub fn sample_uniform(n: usize, rng: &mut RngStream) -> Permutation {
    let mut values: Vec<u32> = (1..=n as u32).collect();
    rng.shuffle(&mut values);
    Permutation::from_one_line_unchecked(values)
}

/// Cross-validation implementation: ranks of `n` i.i.d. uniforms. Ties have
/// probability zero; the draw is simply repeated if one occurs.
pub fn sample_uniform_via_ranks(n: usize, rng: &mut RngStream) -> Permutation {
    assert!(n >= 1);
    loop {
        let draws: Vec<f64> = (0..n).map(|_| rng.unit_f64()).collect();
        if let Ok(perm) = rank_sequence(&draws) {
            return perm;
        }
    }
}

/// Ordered top-m-to-random: uniform over the `C(n, m)` interleavings of the
/// top `m` cards into the remaining `n - m`, both packets in order.
pub fn sample_top_m(n: usize, m: usize, rng: &mut RngStream) -> Permutation {
    assert!(m <= n, "m must be <= n");
    uniform_interleave(&[m as u64, (n - m) as u64], rng)
}

/// Inverse description of the ordered top-m shuffle: a uniformly random
/// binary word with exactly `m` low digits, pushed through the sort route.
/// The permutation law equals [`sample_top_m`]'s.
pub fn sample_top_m_inverse(n: usize, m: usize, rng: &mut RngStream) -> CoupledSample {
    assert!(m <= n, "m must be <= n");
    let mut digits: Vec<u32> = vec![1; m];
    digits.extend(std::iter::repeat_n(2, n - m));
    rng.shuffle(&mut digits);
    coupled_from_word(Word::new(digits, 2).expect("binary word"))
}

fn alpha_pile_range(n: usize, alpha: f64) -> Result<(usize, usize), ModelError> {
    let lo = (alpha * n as f64).ceil() as usize;
    if 2 * lo > n {
        return Err(ModelError::AlphaTooLarge);
    }
    Ok((lo, n - lo))
}

/// Two-pile riffle with `(n_0, n_1)` uniform over the splits satisfying
/// `min(n_0, n_1) >= alpha * n`, then a uniform interleave.
pub fn sample_alpha_constrained(
    n: usize,
    alpha: f64,
    rng: &mut RngStream,
) -> Result<Permutation, ModelError> {
    let (lo, hi) = alpha_pile_range(n, alpha)?;
    let n0 = lo as u64 + rng.below((hi - lo + 1) as u64);
    Ok(uniform_interleave(&[n0, n as u64 - n0], rng))
}

/// Composition of independent draws, first listed model acting on the deck
/// first.
pub fn sample_convolution(
    models: &[ShuffleModel],
    rng: &mut RngStream,
) -> Result<Permutation, ModelError> {
    let first = models.first().ok_or(ModelError::EmptyConvolution)?;
    let mut acc = first.sample(rng);
    for m in &models[1..] {
        if m.deck_size() != acc.len() {
            return Err(ModelError::ConvolutionSizeMismatch {
                first: acc.len(),
                other: m.deck_size(),
            });
        }
        acc = acc.then(&m.sample(rng));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn displacement_matches_worked_example() {
        let word = Word::new(vec![1, 1, 2, 1, 2, 2, 1], 2).unwrap();
        let coupled = coupled_from_word(word);
        assert_eq!(coupled.permutation.values(), &[1, 2, 5, 3, 6, 7, 4]);
        // the sorted deck itself
        assert_eq!(coupled.permutation.invert().values(), &[1, 2, 4, 7, 3, 5, 6]);
    }

    #[test]
    fn displacement_small_cases() {
        assert_eq!(displacement_permutation(&[2, 1]).values(), &[2, 1]);
        assert_eq!(displacement_permutation(&[3, 3, 3]).values(), &[1, 2, 3]);
        let word = Word::new(vec![2, 1, 1], 3).unwrap();
        assert_eq!(coupled_from_word(word).permutation.values(), &[3, 1, 2]);
    }

    #[test]
    fn degenerate_cut_is_identity() {
        let mut rng = RngStream::new(11, 0);
        let p = ProbabilityVector::parse_list("1,0").unwrap();
        for _ in 0..50 {
            assert_eq!(multinomial_cut(6, &p, &mut rng), vec![6, 0]);
        }
        let single = ProbabilityVector::uniform(1);
        assert_eq!(multinomial_cut(5, &single, &mut rng), vec![5]);
        for _ in 0..20 {
            assert!(sample_riffle_forward(6, &single, &mut rng).is_identity());
        }
    }

    #[test]
    fn single_pile_interleave_is_identity() {
        let mut rng = RngStream::new(12, 0);
        assert!(uniform_interleave(&[7], &mut rng).is_identity());
        assert!(uniform_interleave(&[7, 0, 0], &mut rng).is_identity());
    }

    #[test]
    fn top_m_edges() {
        let mut rng = RngStream::new(13, 0);
        for _ in 0..20 {
            assert!(sample_top_m(6, 0, &mut rng).is_identity());
            assert!(sample_top_m(6, 6, &mut rng).is_identity());
            let c = sample_top_m_inverse(6, 0, &mut rng);
            assert!(c.permutation.is_identity());
            assert!(c.word.digits().iter().all(|&d| d == 2));
        }
    }

    #[test]
    fn alpha_constraint_arithmetic() {
        let mut rng = RngStream::new(14, 0);
        assert_eq!(
            sample_alpha_constrained(4, 0.6, &mut rng).unwrap_err(),
            ModelError::AlphaTooLarge
        );
        // alpha = 0: the constraint is vacuous, pile sizes range over 0..=n
        assert!(ShuffleModel::AlphaConstrained { n: 5, alpha: 0.0 }.validate().is_ok());
        assert_eq!(sample_alpha_constrained(5, 0.0, &mut rng).unwrap().len(), 5);
        // n=10, alpha=0.4: pile sizes in {4, 5, 6}
        for _ in 0..200 {
            let mut probe = rng.clone();
            let n0 = 4 + probe.below(3);
            let p = sample_alpha_constrained(10, 0.4, &mut rng).unwrap();
            assert_eq!(p.len(), 10);
            assert!((4..=6).contains(&n0));
        }
    }

    #[test]
    fn convolution_of_one_model_matches_model() {
        let model = ShuffleModel::RiffleForward { n: 8, a: 2, p: None };
        let conv = ShuffleModel::Convolution { models: vec![model.clone()] };
        let mut r1 = RngStream::new(99, 3);
        let mut r2 = RngStream::new(99, 3);
        for _ in 0..50 {
            assert_eq!(model.sample(&mut r1), conv.sample(&mut r2));
        }
    }

    #[test]
    fn validation_rejects_bad_models() {
        assert_eq!(
            ShuffleModel::RiffleForward { n: 3, a: 0, p: None }.validate(),
            Err(ModelError::AlphabetTooSmall)
        );
        assert_eq!(
            ShuffleModel::OrderedTopM { n: 3, m: 4 }.validate(),
            Err(ModelError::TopMOutOfRange { m: 4, n: 3 })
        );
        assert!(ShuffleModel::AlphaConstrained { n: 10, alpha: 0.5 }.validate().is_err());
        assert_eq!(
            ShuffleModel::Convolution { models: vec![] }.validate(),
            Err(ModelError::EmptyConvolution)
        );
        let mixed = ShuffleModel::Convolution {
            models: vec![
                ShuffleModel::UniformPermutation { n: 3 },
                ShuffleModel::UniformPermutation { n: 4 },
            ],
        };
        assert!(matches!(mixed.validate(), Err(ModelError::ConvolutionSizeMismatch { .. })));
        assert!(ShuffleModel::RiffleForward { n: 3, a: 1, p: None }.validate().is_ok());
    }

    #[test]
    fn sampled_sequences_are_deterministic() {
        let model = ShuffleModel::RiffleForward { n: 20, a: 4, p: None };
        let draws = |seed, stream| {
            let mut rng = RngStream::new(seed, stream);
            (0..10).map(|_| model.sample(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draws(5, 2), draws(5, 2));
        assert_ne!(draws(5, 2), draws(5, 3));
    }

    #[test]
    fn biased_word_digit_frequencies() {
        let p = ProbabilityVector::parse_list("1/2,1/3,1/6").unwrap();
        let mut rng = RngStream::new(21, 0);
        let mut counts = [0u64; 3];
        let total = 60_000u64;
        let w = sample_word(total as usize, &p, &mut rng);
        for &d in w.digits() {
            counts[d as usize - 1] += 1;
        }
        for (i, expect) in [0.5, 1.0 / 3.0, 1.0 / 6.0].iter().enumerate() {
            let freq = counts[i] as f64 / total as f64;
            let sd = (expect * (1.0 - expect) / total as f64).sqrt();
            assert!(
                (freq - expect).abs() < 4.0 * sd,
                "digit {} frequency {} too far from {}",
                i + 1,
                freq,
                expect
            );
        }
    }
}
