//! Statistic kernels: descents, inversions, longest alternating subsequence,
//! local extrema, ranks.
//!
//! All kernels are pure functions of their input slice. Sequences with
//! repeated values are accepted everywhere except [`la_distinct`] and
//! [`local_extrema_distinct`]: the extremum bookkeeping for sequences with
//! ties follows different boundary rules than the distinct-value one, and
//! mixing the two silently would corrupt every downstream identity check, so
//! the distinct-only kernels reject ties outright.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{Permutation, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StatError {
    #[error("empty sequence")]
    EmptySequence,
    #[error("requires distinct entries")]
    RequiresDistinct,
    #[error("ranks undefined under ties")]
    TiedRanks,
    #[error("ranks undefined for non-finite values")]
    NonFiniteRanks,
}

/// The permutation/word statistics understood by the exact oracles and the
/// Monte Carlo engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatisticKind {
    Descents,
    Inversions,
    LongestAlternating,
    LocalMaxCount,
    LocalMinCount,
}

impl StatisticKind {
    pub const ALL: [StatisticKind; 5] = [
        StatisticKind::Descents,
        StatisticKind::Inversions,
        StatisticKind::LongestAlternating,
        StatisticKind::LocalMaxCount,
        StatisticKind::LocalMinCount,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StatisticKind::Descents => "des",
            StatisticKind::Inversions => "inv",
            StatisticKind::LongestAlternating => "la",
            StatisticKind::LocalMaxCount => "localmax",
            StatisticKind::LocalMinCount => "localmin",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "des" | "descents" => Some(StatisticKind::Descents),
            "inv" | "inversions" => Some(StatisticKind::Inversions),
            "la" => Some(StatisticKind::LongestAlternating),
            "localmax" => Some(StatisticKind::LocalMaxCount),
            "localmin" => Some(StatisticKind::LocalMinCount),
            _ => None,
        }
    }
}

impl std::fmt::Display for StatisticKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Number of positions `i` with `seq[i] > seq[i+1]` (strict; ties are not
/// descents).
pub fn descents<T: PartialOrd>(seq: &[T]) -> Result<u64, StatError> {
    if seq.is_empty() {
        return Err(StatError::EmptySequence);
    }
    Ok(seq.windows(2).filter(|w| w[0] > w[1]).count() as u64)
}

/// Number of pairs `i < j` with `seq[i] > seq[j]` (strict).
///
/// Uses a merge count for long inputs and the direct pair scan below the
/// cutoff; the two agree by construction and are cross-checked against an
/// independent quadratic oracle in the test suite.
pub fn inversions<T: Ord + Clone>(seq: &[T]) -> Result<u64, StatError> {
    if seq.is_empty() {
        return Err(StatError::EmptySequence);
    }
    const MERGE_CUTOFF: usize = 64;
    if seq.len() <= MERGE_CUTOFF {
        let mut count = 0u64;
        for i in 0..seq.len() {
            for j in i + 1..seq.len() {
                if seq[i] > seq[j] {
                    count += 1;
                }
            }
        }
        return Ok(count);
    }
    let mut work: Vec<T> = seq.to_vec();
    let mut buf: Vec<T> = Vec::with_capacity(seq.len());
    buf.extend_from_slice(seq);
    Ok(merge_count(&mut work, &mut buf))
}

/// Bottom-up merge sort that counts strict inversions. Equal elements are
/// taken from the left half first, so ties contribute nothing.
fn merge_count<T: Ord + Clone>(data: &mut [T], buf: &mut [T]) -> u64 {
    let n = data.len();
    let mut count = 0u64;
    let mut width = 1;
    while width < n {
        let mut start = 0;
        while start < n {
            let mid = usize::min(start + width, n);
            let end = usize::min(start + 2 * width, n);
            if mid < end {
                count += merge_halves(&data[start..mid], &data[mid..end], &mut buf[start..end]);
                data[start..end].clone_from_slice(&buf[start..end]);
            }
            start = end;
        }
        width *= 2;
    }
    count
}

fn merge_halves<T: Ord + Clone>(left: &[T], right: &[T], out: &mut [T]) -> u64 {
    let mut count = 0u64;
    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < left.len() && j < right.len() {
        if right[j] < left[i] {
            // everything still in the left half is an inversion with right[j]
            count += (left.len() - i) as u64;
            out[k] = right[j].clone();
            j += 1;
        } else {
            out[k] = left[i].clone();
            i += 1;
        }
        k += 1;
    }
    while i < left.len() {
        out[k] = left[i].clone();
        i += 1;
        k += 1;
    }
    while j < right.len() {
        out[k] = right[j].clone();
        j += 1;
        k += 1;
    }
    count
}

fn has_duplicates<T: Ord>(seq: &[T]) -> bool {
    let mut idx: Vec<usize> = (0..seq.len()).collect();
    idx.sort_by(|&a, &b| seq[a].cmp(&seq[b]));
    idx.windows(2).any(|w| seq[w[0]] == seq[w[1]])
}

/// Length of the longest strictly alternating subsequence
/// `x_{i1} > x_{i2} < x_{i3} > ...` of a sequence of distinct values.
///
/// Computed as `1 + [x_1 > x_2] + #interior strict extrema`; a single
/// element has length 1.
pub fn la_distinct<T: Ord>(seq: &[T]) -> Result<u64, StatError> {
    if seq.is_empty() {
        return Err(StatError::EmptySequence);
    }
    if has_duplicates(seq) {
        return Err(StatError::RequiresDistinct);
    }
    let n = seq.len();
    if n == 1 {
        return Ok(1);
    }
    let mut total = 1 + u64::from(seq[0] > seq[1]);
    for k in 1..n - 1 {
        let up = seq[k - 1] < seq[k] && seq[k] > seq[k + 1];
        let down = seq[k - 1] > seq[k] && seq[k] < seq[k + 1];
        total += u64::from(up || down);
    }
    Ok(total)
}

/// 1-based interior positions of strict local maxima and minima of a
/// distinct-valued sequence. Endpoints never qualify.
pub fn local_extrema_distinct<T: Ord>(
    seq: &[T],
) -> Result<(BTreeSet<usize>, BTreeSet<usize>), StatError> {
    if seq.is_empty() {
        return Err(StatError::EmptySequence);
    }
    if has_duplicates(seq) {
        return Err(StatError::RequiresDistinct);
    }
    let mut maxima = BTreeSet::new();
    let mut minima = BTreeSet::new();
    for k in 1..seq.len().saturating_sub(1) {
        if seq[k - 1] < seq[k] && seq[k] > seq[k + 1] {
            maxima.insert(k + 1);
        } else if seq[k - 1] > seq[k] && seq[k] < seq[k + 1] {
            minima.insert(k + 1);
        }
    }
    Ok((maxima, minima))
}

/// Tie-aware local maximum / minimum counts.
///
/// With `s` the start of the constant plateau containing position `k`
/// (1-based), position `k` is
///
/// * a local maximum when (`k = n` or `x_k > x_{k+1}`) and (`s = 1` or
///   `x_{s-1} < x_s`) — a plateau reaching back to position 1 counts;
/// * a local minimum when (`k = n` or `x_k < x_{k+1}`) and `s > 1` with
///   `x_{s-1} > x_s` — an all-equal prefix does not produce a minimum.
///
/// On distinct values this reduces to: interior strict extrema, position 1
/// as a maximum when `x_1 > x_2`, and position `n` as a maximum or minimum
/// according to the final comparison.
pub fn tie_aware_extrema_counts<T: PartialOrd>(seq: &[T]) -> (u64, u64) {
    let n = seq.len();
    let mut maxima = 0u64;
    let mut minima = 0u64;
    let mut plateau_start = 0usize; // 0-based index of the current plateau
    for k in 0..n {
        if k > 0 && seq[k] != seq[k - 1] {
            plateau_start = k;
        }
        let falls = k + 1 == n || seq[k] > seq[k + 1];
        let rises = k + 1 == n || seq[k] < seq[k + 1];
        if falls && (plateau_start == 0 || seq[plateau_start - 1] < seq[plateau_start]) {
            maxima += 1;
        }
        if rises && plateau_start > 0 && seq[plateau_start - 1] > seq[plateau_start] {
            minima += 1;
        }
    }
    (maxima, minima)
}

/// Length of the longest strictly alternating subsequence of a word,
/// ties allowed: the number of tie-aware local maxima plus minima.
pub fn la_word(word: &Word) -> u64 {
    la_sequence_with_ties(word.digits())
}

/// Tie-aware alternating length of an arbitrary slice.
pub fn la_sequence_with_ties<T: PartialOrd>(seq: &[T]) -> u64 {
    let (maxima, minima) = tie_aware_extrema_counts(seq);
    maxima + minima
}

/// Ranks of distinct reals, 1 = smallest. Ties or non-finite entries are a
/// probability-zero event for the continuous sources this is used with, so
/// they are surfaced as errors instead of being broken silently.
pub fn rank_sequence(values: &[f64]) -> Result<Permutation, StatError> {
    if values.is_empty() {
        return Err(StatError::EmptySequence);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(StatError::NonFiniteRanks);
    }
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    for w in idx.windows(2) {
        if values[w[0]] == values[w[1]] {
            return Err(StatError::TiedRanks);
        }
    }
    let mut ranks = vec![0u32; values.len()];
    for (rank, &i) in idx.iter().enumerate() {
        ranks[i] = rank as u32 + 1;
    }
    Ok(Permutation::from_one_line_unchecked(ranks))
}

/// Evaluates a statistic on a permutation's one-line sequence.
pub fn evaluate_on_perm(stat: StatisticKind, perm: &Permutation) -> u64 {
    let v = perm.values();
    match stat {
        StatisticKind::Descents => descents(v).expect("permutation is nonempty"),
        StatisticKind::Inversions => inversions(v).expect("permutation is nonempty"),
        StatisticKind::LongestAlternating => la_sequence_with_ties(v),
        StatisticKind::LocalMaxCount => tie_aware_extrema_counts(v).0,
        StatisticKind::LocalMinCount => tie_aware_extrema_counts(v).1,
    }
}

/// Evaluates a statistic on a word's digit sequence (tie-aware throughout).
pub fn evaluate_on_word(stat: StatisticKind, word: &Word) -> u64 {
    let d = word.digits();
    match stat {
        StatisticKind::Descents => descents(d).expect("word is nonempty"),
        StatisticKind::Inversions => inversions(d).expect("word is nonempty"),
        StatisticKind::LongestAlternating => la_word(word),
        StatisticKind::LocalMaxCount => tie_aware_extrema_counts(d).0,
        StatisticKind::LocalMinCount => tie_aware_extrema_counts(d).1,
    }
}
