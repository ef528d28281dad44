//! Monte-Carlo execution of the single-setting protocol.
//!
//! Under independent phase flips the outcome of measuring a Pauli word
//! depends only on the parity of the overlap between the error pattern and
//! the word's X/Y sites, so a shot costs O(n) random bits instead of a
//! statevector.

use std::io::Write;

use rand::distributions::{Bernoulli, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::error::{check_range, Error, Result};
use crate::pauli::PauliString;
use crate::stabilizer::StabilizerProduct;
use crate::thermal::{self, BoundReport, ThermalParams};

/// Per-worker generator: stream `worker` of the ChaCha8 family seeded by `seed`.
pub fn worker_rng(seed: u64, worker: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(worker);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub epsilon: f64,
    pub delta: f64,
    pub n_samples: u64,
    pub seed: u64,
    /// Number of independent RNG streams the samples are split across.
    /// Results are reproducible for a fixed worker count.
    pub workers: usize,
}

impl ProtocolConfig {
    /// Sample count from the Hoeffding bound for `(epsilon, delta)`.
    pub fn hoeffding(epsilon: f64, delta: f64, seed: u64) -> Result<Self> {
        let n_samples = thermal::sample_size(epsilon, delta)?;
        Self::new(epsilon, delta, n_samples, seed)
    }

    pub fn new(epsilon: f64, delta: f64, n_samples: u64, seed: u64) -> Result<Self> {
        check_range("epsilon", epsilon, epsilon > 0.0 && epsilon < 1.0, "(0, 1)")?;
        check_range("delta", delta, delta > 0.0 && delta < 1.0, "(0, 1)")?;
        check_range("n_samples", n_samples as f64, n_samples >= 1, ">= 1")?;
        Ok(ProtocolConfig {
            epsilon,
            delta,
            n_samples,
            seed,
            workers: 1,
        })
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub n: usize,
    pub setting: PauliString,
    pub f_est: f64,
    pub n_samples: u64,
    pub plus_count: u64,
    pub minus_count: u64,
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
    pub workers: usize,
    /// Accuracy bounds; absent when `n` is odd or below 4.
    pub bound_report: Option<BoundReport>,
    /// Simulation-side ground truth. The estimator never reads it.
    pub beta_used: ThermalParams,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Independent phase flips on `n` qubits, each with probability `p_flip`.
pub fn sample_error_pattern<R: rand::Rng + ?Sized>(
    n: usize,
    p_flip: f64,
    rng: &mut R,
) -> Result<BitVec> {
    check_range("p_flip", p_flip, (0.0..=0.5).contains(&p_flip), "[0, 1/2]")?;
    let coin = Bernoulli::new(p_flip).expect("probability in range");
    Ok(draw_pattern(n, &coin, rng))
}

fn draw_pattern<R: rand::Rng + ?Sized>(n: usize, coin: &Bernoulli, rng: &mut R) -> BitVec {
    let mut pattern = BitVec::zeros(n);
    for i in 0..n {
        if coin.sample(rng) {
            pattern.set(i, true);
        }
    }
    pattern
}

/// `(-1)^{|pattern & xy-sites(setting)|}`.
pub fn measure_outcome(pattern: &BitVec, setting: &PauliString) -> Result<i8> {
    if pattern.len() != setting.n() {
        return Err(Error::SizeMismatch {
            expected: setting.n(),
            actual: pattern.len(),
        });
    }
    Ok(outcome(pattern, setting))
}

#[inline]
fn outcome(pattern: &BitVec, setting: &PauliString) -> i8 {
    if pattern.and_count(setting.x_mask()) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Lazily streamed ±1 outcomes from one RNG stream.
pub fn outcome_stream<'a>(
    setting: &'a PauliString,
    thermal: &ThermalParams,
    seed: u64,
) -> impl Iterator<Item = i8> + 'a {
    let coin = Bernoulli::new(thermal.p_flip).expect("p_flip in [0, 1/2]");
    let mut rng = worker_rng(seed, 0);
    std::iter::repeat_with(move || outcome(&draw_pattern(setting.n(), &coin, &mut rng), setting))
}

fn shard_sizes(total: u64, workers: usize) -> Vec<u64> {
    let w = workers as u64;
    (0..w)
        .map(|i| total / w + u64::from(i < total % w))
        .collect()
}

/// Draws `N` error patterns, records the ±1 outcomes of `setting` and
/// returns `F_est = (m+ - m-) / N` with the accuracy bounds attached.
pub fn run_protocol(
    setting: &PauliString,
    thermal: &ThermalParams,
    config: &ProtocolConfig,
) -> Result<VerificationReport> {
    let n = setting.n();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    check_range("p_flip", thermal.p_flip, (0.0..=0.5).contains(&thermal.p_flip), "[0, 1/2]")?;
    let coin = Bernoulli::new(thermal.p_flip).expect("probability in range");
    let shards = shard_sizes(config.n_samples, config.workers.max(1));
    let minus_count: u64 = shards
        .par_iter()
        .enumerate()
        .map(|(worker, &count)| {
            let mut rng = worker_rng(config.seed, worker as u64);
            (0..count)
                .filter(|_| outcome(&draw_pattern(n, &coin, &mut rng), setting) < 0)
                .count() as u64
        })
        .sum();
    let plus_count = config.n_samples - minus_count;
    let f_est = (plus_count as f64 - minus_count as f64) / config.n_samples as f64;
    let bound_report = if n % 2 == 0 && n >= 4 {
        Some(thermal::bound_report(
            n,
            setting.xy_support(),
            thermal,
            config.epsilon,
        )?)
    } else {
        None
    };
    Ok(VerificationReport {
        n,
        setting: setting.clone(),
        f_est,
        n_samples: config.n_samples,
        plus_count,
        minus_count,
        epsilon: config.epsilon,
        delta: config.delta,
        seed: config.seed,
        workers: config.workers.max(1),
        bound_report,
        beta_used: *thermal,
    })
}

/// [`run_protocol`] for a generalized-stabilizer setting; rejected unless
/// it reduces to a Pauli word.
pub fn run_protocol_product(
    setting: &StabilizerProduct,
    thermal: &ThermalParams,
    config: &ProtocolConfig,
) -> Result<VerificationReport> {
    let word = setting.try_to_pauli().ok_or(Error::NotPauli)?;
    run_protocol(&word, thermal, config)
}

/// `|true_fidelity - F_est|` within the fine accuracy bound. False when the
/// report carries no bound.
pub fn check_theorem1(report: &VerificationReport, true_fidelity: f64) -> bool {
    report
        .bound_report
        .is_some_and(|b| (true_fidelity - report.f_est).abs() <= b.theorem1_bound)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub f_est: f64,
    /// `Tr[ρ_T S]`, the value `F_est` converges to.
    pub expectation: f64,
    pub fidelity: f64,
    pub theorem1_bound: Option<f64>,
    /// `|F_est - Tr[ρ_T S]| <= ε`.
    pub hoeffding_pass: bool,
    /// `|F - F_est| <= fine bound`.
    pub theorem1_pass: bool,
}

/// Column order of [`write_trials_csv`].
pub const TRIAL_CSV_COLUMNS: [&str; 8] = [
    "trial",
    "seed",
    "f_est",
    "expectation",
    "fidelity",
    "theorem1_bound",
    "hoeffding_pass",
    "theorem1_pass",
];

/// Runs `trials` independent protocol executions with seeds
/// `config.seed + i`.
pub fn run_trials(
    setting: &PauliString,
    thermal: &ThermalParams,
    config: &ProtocolConfig,
    trials: usize,
) -> Result<Vec<TrialRecord>> {
    let n = setting.n();
    let expectation = thermal::expectation_general(n, setting.xy_support(), thermal)?;
    let fidelity = thermal::fidelity(n, thermal)?;
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let seed = config.seed.wrapping_add(trial as u64);
            let report = run_protocol(setting, thermal, &config.with_seed(seed))?;
            Ok(TrialRecord {
                trial,
                seed,
                f_est: report.f_est,
                expectation,
                fidelity,
                theorem1_bound: report.bound_report.map(|b| b.theorem1_bound),
                hoeffding_pass: (report.f_est - expectation).abs() <= config.epsilon,
                theorem1_pass: check_theorem1(&report, fidelity),
            })
        })
        .collect()
}

pub fn write_trials_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(TRIAL_CSV_COLUMNS).map_err(io)?;
    for r in records {
        w.write_record([
            r.trial.to_string(),
            r.seed.to_string(),
            r.f_est.to_string(),
            r.expectation.to_string(),
            r.fidelity.to_string(),
            r.theorem1_bound.map(|b| b.to_string()).unwrap_or_default(),
            r.hoeffding_pass.to_string(),
            r.theorem1_pass.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(())
}
