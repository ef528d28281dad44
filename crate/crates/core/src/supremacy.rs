//! Restricted hypergraph family, its single Pauli measurement setting, the
//! IQP certification decision rule and X-basis sampling.

use rand::distributions::{Bernoulli, Distribution, WeightedIndex};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::graph::HypergraphSpec;
use crate::oracle;
use crate::pauli::{PauliString, SettingVector};
use crate::sampler::{self, worker_rng, ProtocolConfig, VerificationReport};
use crate::stabilizer::generalized_product;
use crate::thermal::ThermalParams;

/// Smallest `n` for which the certification arithmetic below is sound.
pub const CERTIFICATION_MIN_QUBITS: usize = 400_000;
/// Accuracy the certification rule is calibrated for.
pub const CERTIFICATION_EPSILON: f64 = 1e-6;
pub const CERTIFICATION_DELTA: f64 = 1e-2;
/// Accept iff `F_est - 2/n >= ACCEPT_THRESHOLD`.
pub const ACCEPT_THRESHOLD: f64 = 0.999995;
/// L1 distance (sum |q - q'|) below which IQP sampling is classically hard.
pub const SUPREMACY_L1_DISTANCE: f64 = 1.0 / 192.0;

pub const MAX_SAMPLING_QUBITS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyInstance {
    pub spec: HypergraphSpec,
}

impl FamilyInstance {
    pub fn n(&self) -> usize {
        self.spec.n()
    }
}

/// The four CCZ triple families for `n` qubits (1-indexed), before clipping.
fn family_triples(n: usize) -> Vec<(usize, usize, usize)> {
    let limit = |num: usize| num.div_ceil(4);
    let mut out = Vec::new();
    for j in 1..=limit(n + 1) {
        out.push((4 * j - 3, 4 * j - 2, 4 * j - 1));
    }
    for j in 1..=limit(n) {
        out.push((4 * j - 3, 4 * j - 1, 4 * j));
    }
    for j in 1..=limit(n.saturating_sub(1)) {
        out.push((4 * j - 1, 4 * j, 4 * j + 1));
    }
    for j in 1..=limit(n.saturating_sub(2)) {
        out.push((4 * j - 1, 4 * j + 1, 4 * j + 2));
    }
    out
}

/// Two-row family: the fixed CCZ pattern with triples that reach past
/// vertex `n` dropped, plus arbitrary CZ edges `e2` (1-indexed).
pub fn build_family(n: usize, e2: &[(usize, usize)]) -> Result<FamilyInstance> {
    if n % 2 != 0 {
        return Err(Error::OddQubitCount { n });
    }
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let e3 = family_triples(n)
        .into_iter()
        .filter(|&(a, b, c)| a.max(b).max(c) <= n);
    Ok(FamilyInstance {
        spec: HypergraphSpec::new(n, e2.iter().copied(), e3)?,
    })
}

/// Four-row, five-column instance on 20 qubits. Column `c` holds qubits
/// `4c+1..4c+4`; rows 1 and 3 (odd labels) form a grid and every odd-odd
/// grid edge carries two CCZ triangles whose third vertices are distinct
/// even qubits, so the CZ factors cancel in the alternating product.
pub fn four_row_instance() -> FamilyInstance {
    let mut e3 = Vec::new();
    for c in 0..5 {
        let base = 4 * c;
        // vertical odd edge inside the column
        e3.push((base + 1, base + 2, base + 3));
        e3.push((base + 1, base + 3, base + 4));
        if c < 4 {
            // horizontal odd edges to the next column
            e3.push((base + 1, base + 2, base + 5));
            e3.push((base + 1, base + 5, base + 6));
            e3.push((base + 3, base + 4, base + 7));
            e3.push((base + 3, base + 7, base + 8));
        }
    }
    FamilyInstance {
        spec: HypergraphSpec::new(20, [], e3).expect("valid triples"),
    }
}

/// The reduced setting `S~_{(01)^{n/2}}` as a Pauli word. Fails with
/// [`Error::NotPauli`] when a CZ factor survives the product.
pub fn optimal_setting(inst: &FamilyInstance) -> Result<PauliString> {
    optimal_setting_for(&inst.spec)
}

pub fn optimal_setting_for(h: &HypergraphSpec) -> Result<PauliString> {
    let product = generalized_product(h, &SettingVector::alternating(h.n())?)?;
    product.try_to_pauli().ok_or(Error::NotPauli)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accept,
    Reject,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificationDecision {
    pub f_est: f64,
    pub n: usize,
    pub threshold_met: bool,
    /// `2 sqrt(1 + ε - (F_est - 2/n))`, the L1 distance bound that holds
    /// with probability at least `1 - δ`.
    pub tvd_bound: f64,
    pub verdict: Verdict,
    /// True when `n` is below [`CERTIFICATION_MIN_QUBITS`].
    pub small_n_regime: bool,
}

/// Applies the acceptance rule `F_est - 2/n >= 0.999995`.
pub fn certify(f_est: f64, n: usize, allow_small_n: bool) -> Result<CertificationDecision> {
    check_range("f_est", f_est, (-1.0..=1.0).contains(&f_est), "[-1, 1]")?;
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let small = n < CERTIFICATION_MIN_QUBITS;
    if small && !allow_small_n {
        return Err(Error::BelowCertificationRegime {
            n,
            min: CERTIFICATION_MIN_QUBITS,
        });
    }
    let margin = f_est - 2.0 / n as f64;
    let threshold_met = margin >= ACCEPT_THRESHOLD;
    let tvd_bound = 2.0 * (1.0 + CERTIFICATION_EPSILON - margin).max(0.0).sqrt();
    Ok(CertificationDecision {
        f_est,
        n,
        threshold_met,
        tvd_bound,
        verdict: if threshold_met {
            Verdict::Accept
        } else {
            Verdict::Reject
        },
        small_n_regime: small,
    })
}

/// Runs the measurement protocol with the reduced setting and certifies
/// its estimate.
pub fn simulate_certification(
    inst: &FamilyInstance,
    thermal: &ThermalParams,
    config: &ProtocolConfig,
    allow_small_n: bool,
) -> Result<(VerificationReport, CertificationDecision)> {
    let setting = optimal_setting(inst)?;
    let report = sampler::run_protocol(&setting, thermal, config)?;
    let decision = certify(report.f_est, inst.n(), allow_small_n)?;
    Ok((report, decision))
}

/// Born probabilities of the ideal state measured in the X basis. Bit `q`
/// of the outcome index is qubit `q + 1`, with 1 meaning `|->`.
pub fn x_basis_distribution(h: &HypergraphSpec) -> Result<Vec<f64>> {
    let n = h.n();
    if n > MAX_SAMPLING_QUBITS {
        return Err(Error::TooManyQubits {
            n,
            max: MAX_SAMPLING_QUBITS,
        });
    }
    let mut amps: Vec<f64> = oracle::build_pure_state(h)?
        .amplitudes()
        .iter()
        .map(|a| a.re)
        .collect();
    walsh_hadamard(&mut amps);
    Ok(amps.into_iter().map(|a| a * a).collect())
}

/// Normalized in-place Walsh-Hadamard transform, `H^{⊗n}`.
pub(crate) fn walsh_hadamard(v: &mut [f64]) {
    let dim = v.len();
    let mut h = 1;
    while h < dim {
        for block in (0..dim).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (v[i], v[i + h]);
                v[i] = a + b;
                v[i + h] = a - b;
            }
        }
        h *= 2;
    }
    let scale = (dim as f64).sqrt().recip();
    for x in v.iter_mut() {
        *x *= scale;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IqpSample {
    pub n: usize,
    pub shots: u64,
    pub counts: Vec<u64>,
}

impl IqpSample {
    pub fn empirical(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.shots as f64)
            .collect()
    }

    /// `sum_z |q_z - q'_z|`.
    pub fn l1_distance(&self, exact: &[f64]) -> f64 {
        self.empirical()
            .iter()
            .zip(exact)
            .map(|(a, b)| (a - b).abs())
            .sum()
    }

    /// `(1/2) sum_z |q_z - q'_z|`.
    pub fn total_variation(&self, exact: &[f64]) -> f64 {
        0.5 * self.l1_distance(exact)
    }
}

/// X-basis measurement of `shots` thermal copies.
///
/// A phase-flip pattern `e` followed by X-basis readout is the same as
/// reading out the ideal state and XOR-ing the result with `e`
/// (`H Z = X H`), so each shot draws an ideal outcome and an error pattern.
pub fn iqp_sample(
    h: &HypergraphSpec,
    thermal: &ThermalParams,
    shots: u64,
    seed: u64,
    workers: usize,
) -> Result<IqpSample> {
    let n = h.n();
    let probs = x_basis_distribution(h)?;
    let ideal = WeightedIndex::new(&probs).map_err(|e| Error::CheckFailed(e.to_string()))?;
    check_range("p_flip", thermal.p_flip, (0.0..=0.5).contains(&thermal.p_flip), "[0, 1/2]")?;
    let coin = Bernoulli::new(thermal.p_flip).expect("probability in range");
    let workers = workers.max(1) as u64;
    let counts = (0..workers)
        .into_par_iter()
        .map(|w| {
            let mut rng = worker_rng(seed, w);
            let mut local = vec![0u64; probs.len()];
            let share = shots / workers + u64::from(w < shots % workers);
            for _ in 0..share {
                let mut z = ideal.sample(&mut rng);
                for q in 0..n {
                    if coin.sample(&mut rng) {
                        z ^= 1 << q;
                    }
                }
                local[z] += 1;
            }
            local
        })
        .reduce(
            || vec![0u64; probs.len()],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(IqpSample { n, shots, counts })
}
