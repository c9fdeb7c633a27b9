//! `shufflelab` — reproducible shuffle sampling, exact small-deck oracles,
//! and distributional verdicts, with machine-readable JSON output.
//!
//! Conventions: stdout carries data, stderr carries diagnostics. Exit codes:
//! 0 success, 2 invalid input, 3 enumeration budget exceeded, 4 a
//! mathematical verdict failed (the claim under test is false for this run).
//! Every randomized command requires an explicit `--seed`; results are then
//! byte-identical across reruns and worker counts (`elapsed_ms` aside).

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use shufflelab::analysis::{
    dominance_check, kolmogorov_to_normal, mcdiarmid_tail_check, rate_check, run_monte_carlo,
    run_monte_carlo_words, tv_bound, tv_bound_exact, tv_distance_exact, verify_couplings,
    AnalysisError,
};
use shufflelab::moments::{
    des_moments_riffle, inv_moments_riffle, inv_std_scale_projection, la_moments_uniform,
    la_moments_words, MomentReport,
};
use shufflelab::oracle::{
    convolve_laws, exact_des_dist_dp, exact_dist_riffle_perm, exact_dist_topm,
    exact_dist_uniform, exact_dist_words, exact_inv_dist_via_galois, exact_perm_law_riffle,
    stat_pushforward, ExactDistribution, OracleError, DEFAULT_ENUM_BUDGET,
};
use shufflelab::prob::{rational_to_string, ProbabilityVector};
use shufflelab::rng::RngStream;
use shufflelab::shuffle::ShuffleModel;
use shufflelab::stats::StatisticKind;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "shufflelab", version, about = "Riffle-shuffle sampling, exact oracles, and distributional checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format (csv applies to distribution outputs only)
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the output to a file instead of stdout
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct ModelArgs {
    /// Shuffle model: riffle | riffle-inverse | uniform | top-m | alpha | convolution
    #[arg(long)]
    model: String,
    /// Deck size
    #[arg(long)]
    n: Option<usize>,
    /// Number of piles / alphabet size (riffle models)
    #[arg(long)]
    a: Option<u32>,
    /// Pile-size probabilities, e.g. `1/3,2/3` (rational) or `0.25,0.75`
    #[arg(long)]
    p: Option<String>,
    /// Cut size for the ordered top-m shuffle
    #[arg(long)]
    m: Option<usize>,
    /// Minimum pile fraction for the constrained two-pile shuffle
    #[arg(long)]
    alpha: Option<f64>,
    /// Convolution factors, e.g. `a=2;p=1/3,2/3|a=2;p=1/4,3/4`
    #[arg(long)]
    conv: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Draw permutations from a shuffle model
    Sample {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact distribution of a statistic, probabilities as reduced rationals
    Exact {
        #[command(flatten)]
        model: ModelArgs,
        /// Statistic: des | inv | la | localmax | localmin
        #[arg(long)]
        stat: String,
        /// Oracle route for riffle inversions/descents: auto | words | galois | dp
        #[arg(long, default_value = "auto")]
        method: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Closed-form mean and variance of a statistic
    Moments {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        stat: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Monte Carlo Kolmogorov distance between a standardized statistic and
    /// the standard normal
    Normality {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        stat: String,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// exact (variance) or projection (U-statistic scale, inversions only)
        #[arg(long, default_value = "exact")]
        standardization: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Total-variation bound between riffle and uniform statistics
    Tvbound {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        a: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact check that two composed riffles equal the product riffle
    ConvolutionCheck {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        p2: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact CDF-dominance check for inversions across pile counts
    Dominance {
        #[arg(long)]
        n: u64,
        /// Comma-separated pile counts to compare against, e.g. `3,4`
        #[arg(long, value_name = "LIST")]
        a_list: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Per-sample verification of the word/permutation coupling identities
    VerifyCouplings {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Kolmogorov-distance decay across deck sizes (d_K * sqrt(n) must not grow)
    Rate {
        #[arg(long)]
        stat: String,
        #[arg(long)]
        a: u64,
        /// Comma-separated increasing deck sizes, e.g. `50,100,200,400`
        #[arg(long, value_name = "LIST")]
        grid: String,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Concentration tail check for the alternating length of uniform permutations
    Mcdiarmid {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Failure with a process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        let code = if matches!(e, OracleError::BudgetExceeded { .. }) { 3 } else { 2 };
        Self { code, message: e.to_string() }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        let code = match &e {
            AnalysisError::Oracle(OracleError::BudgetExceeded { .. }) => 3,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

fn enum_budget() -> u64 {
    std::env::var("SHUFFLELAB_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_ENUM_BUDGET)
}

fn parse_stat(s: &str) -> Result<StatisticKind, Failure> {
    StatisticKind::parse(s)
        .ok_or_else(|| Failure::input(format!("--stat must be one of des, inv, la, localmax, localmin (got `{s}`)")))
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::input(format!("{flag} is required for this model")))
}

fn parse_probability(a: u32, p: &Option<String>) -> Result<ProbabilityVector, Failure> {
    match p {
        None => Ok(ProbabilityVector::uniform(a)),
        Some(s) => {
            let pv = ProbabilityVector::parse_list(s)
                .map_err(|e| Failure::input(format!("--p: {e}")))?;
            if pv.len() != a as usize {
                return Err(Failure::input(format!(
                    "--p has {} entries but --a is {a}",
                    pv.len()
                )));
            }
            Ok(pv)
        }
    }
}

impl ModelArgs {
    fn build(&self) -> Result<ShuffleModel, Failure> {
        let model = match self.model.as_str() {
            "riffle" | "riffle-inverse" => {
                let n = require(self.n, "--n")?;
                let a = require(self.a, "--a")?;
                if a < 1 {
                    return Err(Failure::input("a must be >= 1"));
                }
                let p = self.p.as_ref().map(|s| vec![s.clone()]);
                if self.model == "riffle" {
                    ShuffleModel::RiffleForward { n, a, p }
                } else {
                    ShuffleModel::RiffleInverse { n, a, p }
                }
            }
            "uniform" => ShuffleModel::UniformPermutation { n: require(self.n, "--n")? },
            "top-m" => ShuffleModel::OrderedTopM {
                n: require(self.n, "--n")?,
                m: require(self.m, "--m")?,
            },
            "alpha" => ShuffleModel::AlphaConstrained {
                n: require(self.n, "--n")?,
                alpha: require(self.alpha, "--alpha")?,
            },
            "convolution" => {
                let n = require(self.n, "--n")?;
                let spec = require(self.conv.clone(), "--conv")?;
                let models = spec
                    .split('|')
                    .map(|factor| parse_conv_factor(n, factor))
                    .collect::<Result<Vec<_>, _>>()?;
                ShuffleModel::Convolution { models }
            }
            other => {
                return Err(Failure::input(format!(
                    "--model must be riffle, riffle-inverse, uniform, top-m, alpha or convolution (got `{other}`)"
                )))
            }
        };
        model.validate().map_err(|e| Failure::input(e.to_string()))?;
        Ok(model)
    }
}

/// One convolution factor, e.g. `a=2;p=1/3,2/3`.
fn parse_conv_factor(n: usize, spec: &str) -> Result<ShuffleModel, Failure> {
    let mut a: Option<u32> = None;
    let mut p: Option<String> = None;
    for part in spec.split(';') {
        match part.trim().split_once('=') {
            Some(("a", v)) => {
                a = Some(v.trim().parse().map_err(|_| {
                    Failure::input(format!("--conv: cannot parse pile count `{v}`"))
                })?)
            }
            Some(("p", v)) => p = Some(v.trim().to_string()),
            _ => return Err(Failure::input(format!("--conv: unrecognized factor part `{part}`"))),
        }
    }
    let a = a.ok_or_else(|| Failure::input("--conv: each factor needs `a=<piles>`"))?;
    Ok(ShuffleModel::RiffleForward { n, a, p: p.map(|s| vec![s]) })
}

/// Standard report envelope; alphabetical key order makes reruns
/// byte-comparable (timing aside).
fn envelope(command: &str, elapsed: Instant, mut body: Value) -> Value {
    let obj = body.as_object_mut().expect("report body is an object");
    obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
    obj.insert("command".into(), json!(command));
    obj.insert("library_version".into(), json!(env!("CARGO_PKG_VERSION")));
    obj.insert("elapsed_ms".into(), json!(elapsed.elapsed().as_millis() as u64));
    body
}

struct Output {
    text: String,
    /// 0, or 4 when a mathematical verdict failed.
    verdict_code: u8,
}

impl Output {
    fn data(text: String) -> Self {
        Self { text, verdict_code: 0 }
    }

    fn verdict(text: String, pass: bool) -> Self {
        Self { text, verdict_code: if pass { 0 } else { 4 } }
    }
}

fn moment_report_json(r: &MomentReport) -> Value {
    json!({
        "statistic": r.statistic,
        "model": r.model,
        "mean": r.mean,
        "variance": r.variance,
        "exact": r.exact,
        "mean_exact": r.mean_exact.as_ref().map(rational_to_string),
        "variance_exact": r.variance_exact.as_ref().map(rational_to_string),
    })
}

fn distribution_output(dist: &ExactDistribution, format: Format, command: &str, started: Instant) -> String {
    match format {
        Format::Csv => {
            let mut text = String::from("value,probability\n");
            for (v, p) in dist.support() {
                text.push_str(&format!("{v},{}\n", rational_to_string(p)));
            }
            text
        }
        Format::Json => {
            let report = envelope(
                command,
                started,
                json!({
                    "model": dist.model,
                    "statistic": dist.statistic,
                    "distribution": dist.to_json().probabilities,
                }),
            );
            serde_json::to_string_pretty(&report).expect("report serializes")
        }
    }
}

fn exact_command(model: &ModelArgs, stat: StatisticKind, method: &str, budget: u64) -> Result<ExactDistribution, Failure> {
    match model.model.as_str() {
        "riffle" | "riffle-inverse" => {
            let n = require(model.n, "--n")?;
            let a = require(model.a, "--a")?;
            if a < 1 {
                return Err(Failure::input("a must be >= 1"));
            }
            let p = parse_probability(a, &model.p)?;
            let dist = match (stat, method) {
                (StatisticKind::Inversions, "galois") => exact_inv_dist_via_galois(n, a, &p, budget)?,
                (StatisticKind::Descents, "dp") => exact_des_dist_dp(n, a, &p, budget)?,
                (StatisticKind::Inversions | StatisticKind::Descents, "auto" | "words") => {
                    // the word law equals the shuffle law for these statistics
                    let mut d = exact_dist_words(n, a, &p, stat, budget)?;
                    d.model = format!("riffle(n={n},a={a},p={})", p.descriptor());
                    d
                }
                (_, "auto") => exact_dist_riffle_perm(n, a, &p, stat, budget)?,
                _ => {
                    return Err(Failure::input(format!(
                        "--method {method} does not apply to statistic {stat}"
                    )))
                }
            };
            Ok(dist)
        }
        "word" => {
            let n = require(model.n, "--n")?;
            let a = require(model.a, "--a")?;
            let p = parse_probability(a, &model.p)?;
            Ok(exact_dist_words(n, a, &p, stat, budget)?)
        }
        "uniform" => Ok(exact_dist_uniform(require(model.n, "--n")?, stat, budget)?),
        "top-m" => Ok(exact_dist_topm(
            require(model.n, "--n")?,
            require(model.m, "--m")?,
            stat,
            budget,
        )?),
        other => Err(Failure::input(format!(
            "exact supports riffle, word, uniform and top-m models (got `{other}`)"
        ))),
    }
}

/// Closed-form moments for the (model, statistic) pairs that have them.
fn moments_for(model: &ModelArgs, stat: StatisticKind) -> Result<MomentReport, Failure> {
    match (model.model.as_str(), stat) {
        ("riffle" | "riffle-inverse", StatisticKind::Inversions) => {
            let n = require(model.n, "--n")? as u64;
            let a = require(model.a, "--a")? as u64;
            Ok(inv_moments_riffle(n, a))
        }
        ("riffle" | "riffle-inverse", StatisticKind::Descents) => {
            let n = require(model.n, "--n")? as u64;
            let a = require(model.a, "--a")? as u64;
            Ok(des_moments_riffle(n, a))
        }
        ("riffle" | "riffle-inverse", StatisticKind::LongestAlternating) => {
            let n = require(model.n, "--n")? as u64;
            let a = require(model.a, "--a")?;
            if a != 2 {
                return Err(Failure::input(
                    "closed-form riffle moments for `la` exist only at a = 2; use the word model or the exact oracle",
                ));
            }
            // two-pile representation: LA = 2 * descents + final non-descent
            let des = des_moments_riffle(n, 2);
            Ok(MomentReport {
                statistic: StatisticKind::LongestAlternating,
                model: format!("riffle(n={n},a=2,p=uniform)"),
                mean: 2.0 * des.mean + 0.75,
                variance: 4.0 * des.variance,
                exact: false,
                mean_exact: None,
                variance_exact: None,
            })
        }
        ("uniform", StatisticKind::LongestAlternating) => {
            Ok(la_moments_uniform(require(model.n, "--n")? as u64))
        }
        ("word", StatisticKind::LongestAlternating) => {
            let n = require(model.n, "--n")? as u64;
            let a = require(model.a, "--a")? as u64;
            la_moments_words(n, a).map_err(|e| Failure::input(e.to_string()))
        }
        (m, s) => Err(Failure::input(format!(
            "no closed-form moments for statistic `{s}` under model `{m}`; use the exact oracle or Monte Carlo"
        ))),
    }
}

fn run(cli: Cli) -> Result<Output, Failure> {
    let started = Instant::now();
    match cli.command {
        Command::Sample { model, samples, seed, output } => {
            let shuffle = model.build()?;
            let compiled = shuffle.compile().map_err(|e| Failure::input(e.to_string()))?;
            let mut rng = RngStream::new(seed, 0);
            match output.format {
                Format::Json => {
                    let perms: Vec<Vec<u32>> = (0..samples)
                        .map(|_| compiled.sample(&mut rng).values().to_vec())
                        .collect();
                    let report = envelope(
                        "sample",
                        started,
                        json!({
                            "model": shuffle.descriptor(),
                            "seed": seed,
                            "samples": samples,
                            "permutations": perms,
                        }),
                    );
                    Ok(Output::data(serde_json::to_string_pretty(&report).expect("serializes")))
                }
                Format::Csv => {
                    let mut text = String::new();
                    for _ in 0..samples {
                        text.push_str(&compiled.sample(&mut rng).to_string());
                        text.push('\n');
                    }
                    Ok(Output::data(text))
                }
            }
        }

        Command::Exact { model, stat, method, output } => {
            let stat = parse_stat(&stat)?;
            let dist = exact_command(&model, stat, &method, enum_budget())?;
            Ok(Output::data(distribution_output(&dist, output.format, "exact", started)))
        }

        Command::Moments { model, stat, output } => {
            require_json(&output)?;
            let stat = parse_stat(&stat)?;
            let report = moments_for(&model, stat)?;
            let body = envelope("moments", started, moment_report_json(&report));
            Ok(Output::data(serde_json::to_string_pretty(&body).expect("serializes")))
        }

        Command::Normality { model, stat, samples, seed, workers, standardization, output } => {
            require_json(&output)?;
            let stat = parse_stat(&stat)?;
            let moments = moments_for(&model, stat)?;
            let emp = if model.model == "word" {
                let n = require(model.n, "--n")?;
                let a = require(model.a, "--a")?;
                let p = parse_probability(a, &model.p)?;
                run_monte_carlo_words(n, &p, stat, samples, seed, workers)?
            } else {
                run_monte_carlo(&model.build()?, stat, samples, seed, workers)?
            };
            let (mean, sd, label) = match standardization.as_str() {
                "exact" => (moments.mean, moments.variance.sqrt(), "exact-variance"),
                "projection" => {
                    if stat != StatisticKind::Inversions {
                        return Err(Failure::input(
                            "--standardization projection applies to the inversion statistic only",
                        ));
                    }
                    let n = require(model.n, "--n")? as u64;
                    let a = require(model.a, "--a")? as u64;
                    (moments.mean, inv_std_scale_projection(n, a), "projection-scale")
                }
                other => {
                    return Err(Failure::input(format!(
                        "--standardization must be `exact` or `projection` (got `{other}`)"
                    )))
                }
            };
            let mut report = kolmogorov_to_normal(&emp, mean, sd)?;
            report.standardization = label.to_string();
            let body = envelope(
                "normality",
                started,
                json!({
                    "model": emp.model,
                    "statistic": stat,
                    "samples": samples,
                    "seed": seed,
                    "standardization": report.standardization,
                    "mean": report.mean,
                    "sd": report.sd,
                    "d_k": report.d_k,
                    "moments_exact": moments.exact,
                }),
            );
            Ok(Output::data(serde_json::to_string_pretty(&body).expect("serializes")))
        }

        Command::Tvbound { n, a, output } => {
            require_json(&output)?;
            let bound = tv_bound(n, a).map_err(|e| Failure::input(e.to_string()))?;
            let exact = tv_bound_exact(n, a).map_err(|e| Failure::input(e.to_string()))?;
            let body = envelope(
                "tvbound",
                started,
                json!({
                    "n": n,
                    "a": a,
                    "bound": bound,
                    "bound_exact": rational_to_string(&exact),
                }),
            );
            Ok(Output::data(serde_json::to_string_pretty(&body).expect("serializes")))
        }

        Command::ConvolutionCheck { n, a, b, p, p2, output } => {
            require_json(&output)?;
            let budget = enum_budget();
            let pa = parse_probability(a, &p)?;
            let pb = parse_probability(b, &p2)?;
            let first = exact_perm_law_riffle(n, a, &pa, budget)?;
            let second = exact_perm_law_riffle(n, b, &pb, budget)?;
            let composed = convolve_laws(&first, &second, budget)?;
            let product_p = pa.tensor(&pb);
            let product = exact_perm_law_riffle(n, a * b, &product_p, budget)?;
            let lhs = stat_pushforward(&composed, StatisticKind::Inversions, "composed".into());
            let rhs = stat_pushforward(&product, StatisticKind::Inversions, "product".into());
            let tv_stat = tv_distance_exact(&lhs, &rhs);
            let perm_laws_equal = composed == product;
            let pass = perm_laws_equal;
            let body = envelope(
                "convolution-check",
                started,
                json!({
                    "n": n,
                    "a": a,
                    "b": b,
                    "p": pa.descriptor(),
                    "p2": pb.descriptor(),
                    "product_p": product_p.descriptor(),
                    "perm_laws_equal": perm_laws_equal,
                    "tv_inversions": rational_to_string(&tv_stat),
                    "pass": pass,
                }),
            );
            Ok(Output::verdict(serde_json::to_string_pretty(&body).expect("serializes"), pass))
        }

        Command::Dominance { n, a_list, output } => {
            require_json(&output)?;
            let list: Vec<u64> = a_list
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| Failure::input(format!("--a-list: cannot parse `{s}`"))))
                .collect::<Result<_, _>>()?;
            let report = dominance_check(n, &list, enum_budget())?;
            let pass = report.pass;
            let body = envelope(
                "dominance",
                started,
                json!({
                    "n": n,
                    "a_list": list,
                    "cases": serde_json::to_value(&report.cases).expect("serializes"),
                    "pass": pass,
                }),
            );
            Ok(Output::verdict(serde_json::to_string_pretty(&body).expect("serializes"), pass))
        }

        Command::VerifyCouplings { n, a, p, samples, seed, output } => {
            require_json(&output)?;
            if a < 1 {
                return Err(Failure::input("a must be >= 1"));
            }
            let pv = parse_probability(a, &p)?;
            let report = verify_couplings(n, a, &pv, samples, seed)?;
            let pass = report.failures == 0;
            let body = envelope(
                "verify-couplings",
                started,
                json!({
                    "model": report.model,
                    "n": n,
                    "a": a,
                    "samples": samples,
                    "seed": seed,
                    "checks": report.checks,
                    "failures": report.failures,
                    "first_failure": report.first_failure,
                    "la_pathwise_equal": report.la_pathwise_equal,
                    "la_pathwise_total": report.la_pathwise_total,
                    "pass": pass,
                }),
            );
            Ok(Output::verdict(serde_json::to_string_pretty(&body).expect("serializes"), pass))
        }

        Command::Rate { stat, a, grid, samples, seed, workers, output } => {
            require_json(&output)?;
            let stat = parse_stat(&stat)?;
            let sizes: Vec<usize> = grid
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| Failure::input(format!("--grid: cannot parse `{s}`"))))
                .collect::<Result<_, _>>()?;
            let report = rate_check(stat, a, &sizes, samples, seed, workers)?;
            let pass = report.pass;
            let body = envelope(
                "rate",
                started,
                json!({
                    "statistic": stat,
                    "a": a,
                    "grid": sizes,
                    "samples": samples,
                    "seed": seed,
                    "points": serde_json::to_value(&report.points).expect("serializes"),
                    "c_hat": report.c_hat,
                    "threshold": report.threshold,
                    "pass": pass,
                }),
            );
            Ok(Output::verdict(serde_json::to_string_pretty(&body).expect("serializes"), pass))
        }

        Command::Mcdiarmid { n, samples, seed, workers, output } => {
            require_json(&output)?;
            let report = mcdiarmid_tail_check(n, samples, seed, workers)?;
            let pass = report.pass;
            let body = envelope(
                "mcdiarmid",
                started,
                json!({
                    "n": n,
                    "samples": samples,
                    "seed": seed,
                    "points": serde_json::to_value(&report.points).expect("serializes"),
                    "pass": pass,
                }),
            );
            Ok(Output::verdict(serde_json::to_string_pretty(&body).expect("serializes"), pass))
        }
    }
}

fn require_json(output: &OutputArgs) -> Result<(), Failure> {
    if output.format == Format::Csv {
        return Err(Failure::input("csv output applies to distribution commands only"));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_path = match &cli.command {
        Command::Sample { output, .. }
        | Command::Exact { output, .. }
        | Command::Moments { output, .. }
        | Command::Normality { output, .. }
        | Command::Tvbound { output, .. }
        | Command::ConvolutionCheck { output, .. }
        | Command::Dominance { output, .. }
        | Command::VerifyCouplings { output, .. }
        | Command::Rate { output, .. }
        | Command::Mcdiarmid { output, .. } => output.out.clone(),
    };
    match run(cli) {
        Ok(output) => {
            let mut text = output.text;
            if !text.ends_with('\n') {
                text.push('\n');
            }
            if let Some(path) = out_path {
                if let Err(e) = std::fs::write(&path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{text}");
                let _ = std::io::stdout().flush();
            }
            ExitCode::from(output.verdict_code)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
