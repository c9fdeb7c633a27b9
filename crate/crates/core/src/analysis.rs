//! Monte Carlo engine and statistical verdicts.
//!
//! The sampling engine splits work into fixed 2^16-sample chunks; chunk `i`
//! always draws from stream `(master_seed, i)`, and merging is plain count
//! addition, so results are byte-identical for any worker count or
//! scheduling order.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use num::rational::BigRational;
use num::{BigInt, One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::moments::{self, MomentsError};
use crate::normal::std_normal_cdf;
use crate::oracle::{
    exact_dist_riffle_perm, exact_dist_uniform, ExactDistribution, OracleError,
};
use crate::prob::ProbabilityVector;
use crate::rng::{derive_seed, RngStream};
use crate::shuffle::{sample_riffle_inverse, ShuffleModel};
use crate::stats::{evaluate_on_perm, la_distinct, la_sequence_with_ties, StatisticKind};

/// Samples per stream chunk. Fixed so that counts do not depend on the
/// worker count.
pub const MC_CHUNK: u64 = 1 << 16;

/// Asymptotic standard error of an empirical Kolmogorov statistic,
/// `se ~ 0.87 / sqrt(m)`.
pub const KS_SE_COEFF: f64 = 0.87;

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("n_samples must be >= 1")]
    ZeroSamples,
    #[error("workers must be >= 1")]
    ZeroWorkers,
    #[error("degenerate statistic: standard deviation must be positive")]
    DegenerateSd,
    #[error("distribution is not normalized")]
    Unnormalized,
    #[error("bound requires a >= n")]
    BoundDomain,
    #[error("rate grid needs at least 3 strictly increasing sizes")]
    BadGrid,
    #[error("no closed-form moments for statistic `{0}` under this model family")]
    UnsupportedStat(StatisticKind),
    #[error("invalid model: {0}")]
    Model(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl From<MomentsError> for AnalysisError {
    fn from(_: MomentsError) -> Self {
        AnalysisError::DegenerateSd
    }
}

/// Histogram of a statistic over seeded Monte Carlo draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalDistribution {
    pub counts: BTreeMap<i64, u64>,
    pub n_samples: u64,
    pub model: String,
    pub statistic: StatisticKind,
    pub master_seed: u64,
    /// Execution detail only; never serialized, never affects counts.
    #[serde(skip)]
    pub worker_count: usize,
}

impl EmpiricalDistribution {
    pub fn to_f64_map(&self) -> BTreeMap<i64, f64> {
        let m = self.n_samples as f64;
        self.counts.iter().map(|(&v, &c)| (v, c as f64 / m)).collect()
    }

    pub fn mean(&self) -> f64 {
        let m = self.n_samples as f64;
        self.counts.iter().map(|(&v, &c)| v as f64 * c as f64).sum::<f64>() / m
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        let m = self.n_samples as f64;
        self.counts
            .iter()
            .map(|(&v, &c)| (v as f64 - mean).powi(2) * c as f64)
            .sum::<f64>()
            / m
    }
}

/// Chunked, scheduling-independent parallel tally of `eval` over
/// `n_samples` draws.
fn run_chunked<F>(
    n_samples: u64,
    master_seed: u64,
    workers: usize,
    eval: F,
) -> Result<BTreeMap<i64, u64>, AnalysisError>
where
    F: Fn(&mut RngStream) -> i64 + Sync,
{
    if n_samples == 0 {
        return Err(AnalysisError::ZeroSamples);
    }
    if workers == 0 {
        return Err(AnalysisError::ZeroWorkers);
    }
    let n_chunks = n_samples.div_ceil(MC_CHUNK);
    let threads = workers.min(n_chunks as usize);
    let next = AtomicU64::new(0);
    let eval = &eval;
    let partials: Vec<BTreeMap<i64, u64>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|_| {
                let next = &next;
                scope.spawn(move || {
                    let mut local: BTreeMap<i64, u64> = BTreeMap::new();
                    loop {
                        let chunk = next.fetch_add(1, Ordering::Relaxed);
                        if chunk >= n_chunks {
                            break;
                        }
                        let mut rng = RngStream::new(master_seed, chunk);
                        let take = MC_CHUNK.min(n_samples - chunk * MC_CHUNK);
                        for _ in 0..take {
                            *local.entry(eval(&mut rng)).or_insert(0) += 1;
                        }
                    }
                    local
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
    for partial in partials {
        for (v, c) in partial {
            *counts.entry(v).or_insert(0) += c;
        }
    }
    Ok(counts)
}

/// `n_samples` i.i.d. draws of `stat` under `model`.
pub fn run_monte_carlo(
    model: &ShuffleModel,
    stat: StatisticKind,
    n_samples: u64,
    master_seed: u64,
    workers: usize,
) -> Result<EmpiricalDistribution, AnalysisError> {
    let compiled = model.compile().map_err(|e| AnalysisError::Model(e.to_string()))?;
    let counts = run_chunked(n_samples, master_seed, workers, |rng| {
        evaluate_on_perm(stat, &compiled.sample(rng)) as i64
    })?;
    Ok(EmpiricalDistribution {
        counts,
        n_samples,
        model: model.descriptor(),
        statistic: stat,
        master_seed,
        worker_count: workers,
    })
}

/// `n_samples` i.i.d. draws of the tie-aware `stat` over random words of
/// `n` digits with law `p`. This is the word-side counterpart of
/// [`run_monte_carlo`]: for the alternating length the word statistic is a
/// different random variable than the shuffled permutation's.
pub fn run_monte_carlo_words(
    n: usize,
    p: &ProbabilityVector,
    stat: StatisticKind,
    n_samples: u64,
    master_seed: u64,
    workers: usize,
) -> Result<EmpiricalDistribution, AnalysisError> {
    if n == 0 {
        return Err(AnalysisError::Model("deck size n must be >= 1".into()));
    }
    let counts = run_chunked(n_samples, master_seed, workers, |rng| {
        let digits: Vec<u32> = (0..n).map(|_| p.sample_index(rng) as u32 + 1).collect();
        crate::oracle::eval_stat_slice(stat, &digits)
    })?;
    Ok(EmpiricalDistribution {
        counts,
        n_samples,
        model: format!("word(n={n},a={},p={})", p.len(), p.descriptor()),
        statistic: stat,
        master_seed,
        worker_count: workers,
    })
}

/// Kolmogorov distance between an integer-valued empirical law and a normal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalityReport {
    pub d_k: f64,
    pub standardization: String,
    pub mean: f64,
    pub sd: f64,
    pub n_samples: u64,
    pub model: String,
    pub statistic: StatisticKind,
}

/// Supremum CDF gap against `N(mean, sd^2)`. The statistic is integer valued
/// while the normal is continuous, so the supremum sits at a jump: both the
/// left and right limits of the empirical CDF are compared at every support
/// point.
pub fn kolmogorov_to_normal(
    emp: &EmpiricalDistribution,
    mean: f64,
    sd: f64,
) -> Result<NormalityReport, AnalysisError> {
    if sd.is_nan() || sd <= 0.0 {
        return Err(AnalysisError::DegenerateSd);
    }
    let m = emp.n_samples as f64;
    let mut cum = 0u64;
    let mut d_k: f64 = 0.0;
    for (&v, &c) in &emp.counts {
        let phi = std_normal_cdf((v as f64 - mean) / sd);
        let below = cum as f64 / m;
        cum += c;
        let at = cum as f64 / m;
        d_k = d_k.max((at - phi).abs()).max((below - phi).abs());
    }
    Ok(NormalityReport {
        d_k,
        standardization: "exact-variance".to_string(),
        mean,
        sd,
        n_samples: emp.n_samples,
        model: emp.model.clone(),
        statistic: emp.statistic,
    })
}

fn check_normalized(p: &BTreeMap<i64, f64>) -> Result<(), AnalysisError> {
    let total: f64 = p.values().sum();
    if (total - 1.0).abs() > 1e-9 || p.values().any(|&x| x < 0.0) {
        return Err(AnalysisError::Unnormalized);
    }
    Ok(())
}

/// Total-variation distance `(1/2) sum |p - q|` between two normalized
/// integer-supported pmfs.
pub fn tv_distance(
    p: &BTreeMap<i64, f64>,
    q: &BTreeMap<i64, f64>,
) -> Result<f64, AnalysisError> {
    check_normalized(p)?;
    check_normalized(q)?;
    let mut keys: Vec<i64> = p.keys().chain(q.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    let sum: f64 = keys
        .iter()
        .map(|k| (p.get(k).copied().unwrap_or(0.0) - q.get(k).copied().unwrap_or(0.0)).abs())
        .sum();
    Ok(sum / 2.0)
}

/// Exact total-variation distance between two exact laws.
pub fn tv_distance_exact(p: &ExactDistribution, q: &ExactDistribution) -> BigRational {
    let mut keys: Vec<i64> = p.support().keys().chain(q.support().keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    let two = BigRational::from_integer(BigInt::from(2));
    keys.iter()
        .map(|&k| (p.probability(k) - q.probability(k)).abs())
        .sum::<BigRational>()
        / two
}

/// Upper bound `1 - prod_{i=0}^{n-1} (a - i)/a` on the total-variation
/// distance between a statistic of the `a`-pile riffle and of a uniform
/// permutation; requires `a >= n`. This is the probability that `n` i.i.d.
/// digits over `a` letters are not all distinct, computed in product form so
/// no factorial overflows.
pub fn tv_bound(n: u64, a: u64) -> Result<f64, AnalysisError> {
    if n < 1 || a < n {
        return Err(AnalysisError::BoundDomain);
    }
    let mut prod = 1.0f64;
    for i in 0..n {
        prod *= (a - i) as f64 / a as f64;
    }
    Ok(1.0 - prod)
}

/// Exact-rational form of [`tv_bound`].
pub fn tv_bound_exact(n: u64, a: u64) -> Result<BigRational, AnalysisError> {
    if n < 1 || a < n {
        return Err(AnalysisError::BoundDomain);
    }
    let mut prod = BigRational::one();
    for i in 0..n {
        prod *= BigRational::new(BigInt::from(a - i), BigInt::from(a));
    }
    Ok(BigRational::one() - prod)
}

/// One exact riffle-vs-uniform comparison: TV distance between the exact
/// statistic laws, against the product-form bound. Strict rational
/// comparison, no tolerance.
#[derive(Debug, Clone)]
pub struct TvCase {
    pub n: u64,
    pub a: u64,
    pub statistic: StatisticKind,
    pub tv: BigRational,
    pub bound: BigRational,
    pub holds: bool,
}

pub fn tv_check_riffle_vs_uniform(
    n: u64,
    a: u64,
    stat: StatisticKind,
    budget: u64,
) -> Result<TvCase, AnalysisError> {
    let bound = tv_bound_exact(n, a)?;
    let p = ProbabilityVector::uniform(a as u32);
    let riffle = exact_dist_riffle_perm(n as usize, a as u32, &p, stat, budget)?;
    let uniform = exact_dist_uniform(n as usize, stat, budget)?;
    let tv = tv_distance_exact(&riffle, &uniform);
    let holds = tv <= bound;
    Ok(TvCase { n, a, statistic: stat, tv, bound, holds })
}

/// Outcome of per-sample coupling verification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingReport {
    pub model: String,
    pub n: usize,
    pub a: u32,
    pub n_samples: u64,
    pub master_seed: u64,
    /// Total number of identity checks performed.
    pub checks: u64,
    pub failures: u64,
    /// Identity, sample index and stream of the first failure, if any.
    pub first_failure: Option<String>,
    /// How often the word's own tie-aware alternating length coincided with
    /// the permutation's (recorded, not asserted; they are different
    /// statistics).
    pub la_pathwise_equal: u64,
    pub la_pathwise_total: u64,
}

/// Draws coupled `(word, permutation)` samples and verifies, per sample and
/// with zero tolerance:
///
/// 1. inversions and descents of the permutation equal the word's strict
///    pair counts (both sides computed by independent code paths);
/// 2. the full pairwise comparison coupling, exhaustively, when `n <= 60`;
/// 3. for two-pile shuffles: every interior position is a local maximum
///    exactly when it is a descent and a local minimum exactly when the
///    previous position is, and the alternating length satisfies
///    `LA = 2 * (word descents) + 1(last pair non-descending)` — the tie
///    case lands on the non-descending side, which is what the sort route
///    produces.
///
/// Whether `LA(permutation) = LA(word)` pathwise is recorded but not
/// asserted.
pub fn verify_couplings(
    n: usize,
    a: u32,
    p: &ProbabilityVector,
    n_samples: u64,
    master_seed: u64,
) -> Result<CouplingReport, AnalysisError> {
    if n_samples == 0 {
        return Err(AnalysisError::ZeroSamples);
    }
    if n == 0 || p.len() != a as usize {
        return Err(AnalysisError::Model("invalid coupling parameters".into()));
    }
    let mut checks = 0u64;
    let mut failures = 0u64;
    let mut first_failure: Option<String> = None;
    let mut la_equal = 0u64;
    let n_chunks = n_samples.div_ceil(MC_CHUNK);
    let mut sample_index = 0u64;
    for chunk in 0..n_chunks {
        let mut rng = RngStream::new(master_seed, chunk);
        let take = MC_CHUNK.min(n_samples - chunk * MC_CHUNK);
        for _ in 0..take {
            sample_index += 1;
            let coupled = sample_riffle_inverse(n, p, &mut rng);
            let w = coupled.word.digits();
            let rho = coupled.permutation.values();
            let fail = |name: &str, first_failure: &mut Option<String>| {
                if first_failure.is_none() {
                    *first_failure =
                        Some(format!("{name} at sample {sample_index} (stream {chunk})"));
                }
            };

            // direct quadratic pair count on the word (independent of the
            // merge-count kernel used on the permutation)
            let mut word_inv = 0u64;
            for i in 0..n {
                for j in i + 1..n {
                    word_inv += u64::from(w[i] > w[j]);
                }
            }
            checks += 1;
            if crate::stats::inversions(rho).expect("nonempty") != word_inv {
                failures += 1;
                fail("inversion identity", &mut first_failure);
            }

            let word_des: u64 = (0..n - 1).map(|i| u64::from(w[i] > w[i + 1])).sum();
            checks += 1;
            if crate::stats::descents(rho).expect("nonempty") != word_des {
                failures += 1;
                fail("descent identity", &mut first_failure);
            }

            if n <= 60 {
                let mut pairwise_ok = true;
                for i in 0..n {
                    for k in i + 1..n {
                        if (rho[i] > rho[k]) != (w[i] > w[k]) {
                            pairwise_ok = false;
                        }
                    }
                }
                checks += 1;
                if !pairwise_ok {
                    failures += 1;
                    fail("pairwise comparison coupling", &mut first_failure);
                }
            }

            if a == 2 && n >= 2 {
                let la = la_distinct(rho).expect("permutation entries are distinct");
                let two_pile = 2 * word_des + u64::from(w[n - 2] <= w[n - 1]);
                checks += 1;
                if la != two_pile {
                    failures += 1;
                    fail("two-pile alternating-length identity", &mut first_failure);
                }

                let mut extrema_ok = true;
                for k in 1..n - 1 {
                    // 0-based interior position k
                    let is_max = rho[k - 1] < rho[k] && rho[k] > rho[k + 1];
                    let is_min = rho[k - 1] > rho[k] && rho[k] < rho[k + 1];
                    if is_max != (rho[k] > rho[k + 1]) || is_min != (rho[k - 1] > rho[k]) {
                        extrema_ok = false;
                    }
                }
                checks += 1;
                if !extrema_ok {
                    failures += 1;
                    fail("two-pile extremum/descent characterization", &mut first_failure);
                }
            }

            let la_perm = la_distinct(rho).expect("distinct");
            if la_perm == la_sequence_with_ties(w) {
                la_equal += 1;
            }
        }
    }
    Ok(CouplingReport {
        model: format!("riffle-inverse(n={n},a={a},p={})", p.descriptor()),
        n,
        a,
        n_samples,
        master_seed,
        checks,
        failures,
        first_failure,
        la_pathwise_equal: la_equal,
        la_pathwise_total: n_samples,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub n: usize,
    pub d_k: f64,
    /// `d_k * sqrt(n)`.
    pub scaled: f64,
}

/// Result of the Kolmogorov-rate check across deck sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub statistic: StatisticKind,
    pub a: u64,
    pub n_samples: u64,
    pub master_seed: u64,
    pub points: Vec<RatePoint>,
    /// `max over the grid of d_k * sqrt(n)`.
    pub c_hat: f64,
    /// Pass threshold for the largest-n scaled value.
    pub threshold: f64,
    pub pass: bool,
}

/// Runs the riffle model at each grid size, standardizes with the exact
/// moments, and checks that `d_K * sqrt(n)` does not grow: the largest-n
/// value must stay below `1.25 x` the smallest-n value plus three Monte
/// Carlo standard errors of a Kolmogorov statistic (scaled by `sqrt(n)`).
/// Each grid point draws from its own derived master seed.
pub fn rate_check(
    stat: StatisticKind,
    a: u64,
    n_grid: &[usize],
    n_samples: u64,
    master_seed: u64,
    workers: usize,
) -> Result<RateReport, AnalysisError> {
    if n_grid.len() < 3 || n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AnalysisError::BadGrid);
    }
    let mut points = Vec::with_capacity(n_grid.len());
    for (i, &n) in n_grid.iter().enumerate() {
        let report = match stat {
            StatisticKind::Inversions => moments::inv_moments_riffle(n as u64, a),
            StatisticKind::Descents => moments::des_moments_riffle(n as u64, a),
            other => return Err(AnalysisError::UnsupportedStat(other)),
        };
        if report.variance.is_nan() || report.variance <= 0.0 {
            return Err(AnalysisError::DegenerateSd);
        }
        let model = ShuffleModel::RiffleForward { n, a: a as u32, p: None };
        let emp = run_monte_carlo(&model, stat, n_samples, derive_seed(master_seed, i as u64), workers)?;
        let normality = kolmogorov_to_normal(&emp, report.mean, report.sd())?;
        points.push(RatePoint { n, d_k: normality.d_k, scaled: normality.d_k * (n as f64).sqrt() });
    }
    let c_hat = points.iter().map(|p| p.scaled).fold(0.0, f64::max);
    let se = KS_SE_COEFF / (n_samples as f64).sqrt();
    let n_max = *n_grid.last().expect("nonempty grid") as f64;
    let threshold = 1.25 * points[0].scaled + 3.0 * se * n_max.sqrt();
    let pass = points.last().expect("nonempty").scaled <= threshold;
    Ok(RateReport {
        statistic: stat,
        a,
        n_samples,
        master_seed,
        points,
        c_hat,
        threshold,
        pass,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DominanceCase {
    pub a: u64,
    pub two_dominates_a: bool,
    pub a_dominates_uniform: bool,
    /// First statistic value violating the CDF ordering, if any.
    pub witness: Option<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DominanceReport {
    pub n: u64,
    pub cases: Vec<DominanceCase>,
    pub pass: bool,
}

/// Exact stochastic-dominance check for inversions: the two-pile riffle CDF
/// must dominate every `a`-pile riffle CDF pointwise, which in turn must
/// dominate the uniform-permutation CDF (larger statistic = smaller CDF).
/// All comparisons are exact rationals.
pub fn dominance_check(n: u64, a_list: &[u64], budget: u64) -> Result<DominanceReport, AnalysisError> {
    let inv = StatisticKind::Inversions;
    let two = exact_dist_riffle_perm(n as usize, 2, &ProbabilityVector::uniform(2), inv, budget)?;
    let uniform = exact_dist_uniform(n as usize, inv, budget)?;
    let max_inv = (n * (n - 1) / 2) as i64;
    let grid: Vec<i64> = (0..=max_inv).collect();
    let f2 = two.cdf_on(&grid);
    let fu = uniform.cdf_on(&grid);
    let mut cases = Vec::new();
    let mut pass = true;
    for &a in a_list {
        let da = exact_dist_riffle_perm(n as usize, a as u32, &ProbabilityVector::uniform(a as u32), inv, budget)?;
        let fa = da.cdf_on(&grid);
        let mut witness = None;
        let mut two_dom = true;
        let mut a_dom = true;
        for (i, &v) in grid.iter().enumerate() {
            if f2[i] < fa[i] {
                two_dom = false;
                witness.get_or_insert(v);
            }
            if fa[i] < fu[i] {
                a_dom = false;
                witness.get_or_insert(v);
            }
        }
        pass &= two_dom && a_dom;
        cases.push(DominanceCase { a, two_dominates_a: two_dom, a_dominates_uniform: a_dom, witness });
    }
    Ok(DominanceReport { n, cases, pass })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailPoint {
    pub t: u64,
    pub bound: f64,
    pub frequency: f64,
    pub std_error: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub n: u64,
    pub n_samples: u64,
    pub master_seed: u64,
    pub points: Vec<TailPoint>,
    pub pass: bool,
}

/// Bounded-differences tail check for the alternating length of a uniform
/// permutation: the empirical frequency of `|LA - mu| >= t` must stay below
/// `2 exp(-2 t^2 / (9 n))` plus three binomial standard errors, for every
/// `t` in `1..=ceil(3 sqrt(n))`.
pub fn mcdiarmid_tail_check(
    n: u64,
    n_samples: u64,
    master_seed: u64,
    workers: usize,
) -> Result<TailReport, AnalysisError> {
    let model = ShuffleModel::UniformPermutation { n: n as usize };
    let emp = run_monte_carlo(&model, StatisticKind::LongestAlternating, n_samples, master_seed, workers)?;
    let mu = moments::la_moments_uniform(n).mean;
    let t_max = (3.0 * (n as f64).sqrt()).ceil() as u64;
    let m = n_samples as f64;
    let mut points = Vec::with_capacity(t_max as usize);
    let mut pass = true;
    for t in 1..=t_max {
        let tail: u64 = emp
            .counts
            .iter()
            .filter(|(&v, _)| (v as f64 - mu).abs() >= t as f64)
            .map(|(_, &c)| c)
            .sum();
        let frequency = tail as f64 / m;
        let bound = 2.0 * (-2.0 * (t * t) as f64 / (9.0 * n as f64)).exp();
        let std_error = (frequency * (1.0 - frequency) / m).sqrt();
        let ok = bound >= 1.0 || frequency <= bound + 3.0 * std_error;
        pass &= ok;
        points.push(TailPoint { t, bound, frequency, std_error, pass: ok });
    }
    Ok(TailReport { n, n_samples, master_seed, points, pass })
}
