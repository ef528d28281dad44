//! Subcommand implementations. Each returns its result in memory; writing
//! it out is left to the caller.

use std::path::Path;

use serde::Serialize;
use serde_json::json;
use thermgraph_core::identities::{self, IdentityReport};
use thermgraph_core::oracle;
use thermgraph_core::pauli::stabilizer_product;
use thermgraph_core::sampler::{self, ProtocolConfig, VerificationReport};
use thermgraph_core::stabilizer::generalized_product;
use thermgraph_core::supremacy::{self, CertificationDecision};
use thermgraph_core::thermal::{self, BoundReport, InversionTarget};
use thermgraph_core::{
    BitVec, GraphSpec, HypergraphSpec, PauliString, SettingVector, StabilizerProduct, ThermalParams,
};

use crate::args::*;
use crate::error::{CliError, CliResult};
use crate::manifest::RunManifest;

/// Column order of the `curves` CSV.
pub const CURVES_COLUMNS: [&str; 6] = ["n", "T", "p_beta", "F", "F_est_infinite", "F_ub"];
/// Column order of the `sweep-wt` CSV.
pub const SWEEP_COLUMNS: [&str; 8] = [
    "beta",
    "t",
    "wt",
    "expectation",
    "fidelity",
    "deviation",
    "leading_term",
    "is_argmin",
];
pub const ORACLE_EXPECTATION_TOLERANCE: f64 = 1e-9;
pub const ORACLE_DENSITY_TOLERANCE: f64 = 1e-8;
/// Largest `n` at which `oracle-check` also builds the Gibbs state.
pub const ORACLE_GIBBS_MAX: usize = 8;

#[derive(Clone, Debug)]
pub enum Body {
    Json(serde_json::Value),
    Csv(String),
}

#[derive(Clone, Debug)]
pub struct Output {
    pub manifest: RunManifest,
    pub body: Body,
    /// Set when the result is complete but a check inside it failed.
    pub failed_check: Option<String>,
}

impl Output {
    fn json(command: &Command, value: impl Serialize) -> Self {
        Output {
            manifest: RunManifest::new(command),
            body: Body::Json(serde_json::to_value(value).expect("result serializes")),
            failed_check: None,
        }
    }

    fn csv(command: &Command, text: String) -> Self {
        Output {
            manifest: RunManifest::new(command),
            body: Body::Csv(text),
            failed_check: None,
        }
    }

    /// The document written to stdout or `--output`. JSON results embed
    /// the manifest; CSV results are the bare table.
    pub fn render(&self) -> String {
        match &self.body {
            Body::Json(v) => {
                let doc = json!({ "manifest": self.manifest, "result": v });
                serde_json::to_string_pretty(&doc).expect("document serializes") + "\n"
            }
            Body::Csv(text) => text.clone(),
        }
    }

    pub fn is_csv(&self) -> bool {
        matches!(self.body, Body::Csv(_))
    }
}

pub fn run(command: &Command) -> CliResult<Output> {
    match command {
        Command::Expectation(a) => expectation(command, a),
        Command::Verify(a) => verify(command, a),
        Command::Curves(a) => curves(command, a),
        Command::SweepWt(a) => sweep_wt(command, a),
        Command::Identities(a) => run_identities(command, a),
        Command::OracleCheck(a) => oracle_check(command, a),
        Command::CertifyIqp(a) => certify_iqp(command, a),
        Command::EstimateTemperature(a) => estimate_temperature(command, a),
        Command::Replay(a) => replay(a),
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn thermal_params(t: &TemperatureArgs) -> CliResult<ThermalParams> {
    match (t.beta, t.temperature, t.boltzmann_ratio) {
        (Some(b), None, None) => {
            if b.is_infinite() {
                return Err(invalid("use --temperature 0 for zero temperature"));
            }
            Ok(ThermalParams::from_beta(b)?)
        }
        (None, Some(temp), None) => Ok(ThermalParams::from_temperature(temp)?),
        (None, None, Some(r)) => Ok(ThermalParams::from_boltzmann_ratio(r)?),
        (None, None, None) => Err(invalid(
            "one of --beta, --temperature, --boltzmann-ratio is required",
        )),
        _ => Err(invalid(
            "--beta, --temperature and --boltzmann-ratio are mutually exclusive",
        )),
    }
}

pub fn load_graph(g: &GraphArgs) -> CliResult<HypergraphSpec> {
    let spec = match (&g.graph, g.ring, g.path, g.qubits) {
        (Some(p), None, None, None) => HypergraphSpec::from_json(&read_file(p)?)?,
        (None, Some(n), None, None) => GraphSpec::ring(n)?.into(),
        (None, None, Some(n), None) => GraphSpec::path(n)?.into(),
        (None, None, None, Some(n)) => GraphSpec::empty(n)?.into(),
        (None, None, None, None) => {
            return Err(invalid(
                "one of --graph, --ring, --path, --qubits is required",
            ))
        }
        _ => return Err(invalid("graph options are mutually exclusive")),
    };
    Ok(spec)
}

fn selection(s: &SettingArgs, n: usize) -> CliResult<SettingVector> {
    let l = match (&s.setting, s.wt) {
        (Some(text), _) => {
            let l: SettingVector = text.parse()?;
            if l.len() != n {
                return Err(thermgraph_core::Error::SizeMismatch {
                    expected: n,
                    actual: l.len(),
                }
                .into());
            }
            l
        }
        (None, Some(wt)) => SettingVector::prefix_ones(n, wt)?,
        (None, None) => {
            if n % 2 != 0 {
                return Err(thermgraph_core::Error::OddQubitCount { n }.into());
            }
            SettingVector::prefix_ones(n, n / 2)?
        }
    };
    Ok(l)
}

/// The setting's normal form and, when it is one, its Pauli word.
fn setting_operator(
    h: &HypergraphSpec,
    l: &SettingVector,
) -> CliResult<(StabilizerProduct, Option<PauliString>)> {
    if let Some(g) = h.as_graph() {
        let word = stabilizer_product(&g, l)?;
        let product = generalized_product(h, l)?;
        return Ok((product, Some(word)));
    }
    let product = generalized_product(h, l)?;
    let word = product.try_to_pauli();
    Ok((product, word))
}

fn finite_beta(th: &ThermalParams) -> Option<f64> {
    (!th.is_zero_temperature()).then(|| th.beta())
}

#[derive(Serialize)]
struct ExpectationRecord {
    n: usize,
    setting: String,
    /// Number of X/Y sites of the setting.
    wt: usize,
    pauli: Option<String>,
    beta: Option<f64>,
    temperature: f64,
    p_flip: f64,
    boltzmann_ratio: f64,
    expectation: f64,
    fidelity: f64,
    deviation: f64,
    leading_term: f64,
    union_bound: f64,
    bounds: Option<BoundReport>,
}

fn expectation(command: &Command, a: &ExpectationArgs) -> CliResult<Output> {
    let h = load_graph(&a.graph)?;
    let n = h.n();
    let l = selection(&a.selection, n)?;
    let th = thermal_params(&a.temperature)?;
    let (product, word) = setting_operator(&h, &l)?;
    let wt = product.x_mask().count_ones();
    let e = thermal::expectation_general(n, wt, &th)?;
    let f = thermal::fidelity(n, &th)?;
    let bounds = if n % 2 == 0 && n >= 4 {
        Some(thermal::bound_report(n, wt, &th, a.epsilon)?)
    } else {
        None
    };
    Ok(Output::json(
        command,
        ExpectationRecord {
            n,
            setting: l.to_string(),
            wt,
            pauli: word.map(|w| w.to_string()),
            beta: finite_beta(&th),
            temperature: th.temperature(),
            p_flip: th.p_flip,
            boltzmann_ratio: th.boltzmann_ratio(),
            expectation: e,
            fidelity: f,
            deviation: (e - f).abs(),
            leading_term: thermal::deviation_leading_term(n, wt, &th)?,
            union_bound: thermal::union_bound(n, &th)?,
            bounds,
        },
    ))
}

fn verify(command: &Command, a: &VerifyArgs) -> CliResult<Output> {
    let h = load_graph(&a.graph)?;
    let l = selection(&a.selection, h.n())?;
    let th = thermal_params(&a.temperature)?;
    let (_, word) = setting_operator(&h, &l)?;
    let word = word.ok_or(thermgraph_core::Error::NotPauli)?;
    if a.trials == 0 {
        return Err(invalid("--trials must be at least 1"));
    }
    let config = match a.samples {
        Some(s) => ProtocolConfig::new(a.epsilon, a.delta, s, a.seed)?,
        None => ProtocolConfig::hoeffding(a.epsilon, a.delta, a.seed)?,
    }
    .with_workers(a.workers);
    let trials = sampler::run_trials(&word, &th, &config, a.trials)?;
    let mut buf = Vec::new();
    sampler::write_trials_csv(&trials, &mut buf)?;
    let count = trials.len() as f64;
    let rate = |pass: fn(&sampler::TrialRecord) -> bool| {
        trials.iter().filter(|t| pass(t)).count() as f64 / count
    };
    let first = &trials[0];
    let mut w = csv::Writer::from_writer(buf);
    w.write_record([
        "summary".to_string(),
        String::new(),
        (trials.iter().map(|t| t.f_est).sum::<f64>() / count).to_string(),
        first.expectation.to_string(),
        first.fidelity.to_string(),
        first
            .theorem1_bound
            .map(|b| b.to_string())
            .unwrap_or_default(),
        rate(|t| t.hoeffding_pass).to_string(),
        rate(|t| t.theorem1_pass).to_string(),
    ])
    .map_err(|e| CliError::Io(e.to_string()))?;
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(Output::csv(
        command,
        String::from_utf8(bytes).expect("csv is utf-8"),
    ))
}

/// Shortest round-trip decimal, switching to exponent form outside
/// `[1e-5, 1e16)` so tiny probabilities stay readable.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&a) || !x.is_finite() {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

/// Temperature grid `t_max * i / points` for `i = 1..=points`.
pub fn temperature_grid(t_max: f64, points: usize) -> Vec<f64> {
    (1..=points)
        .map(|i| t_max * i as f64 / points as f64)
        .collect()
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

pub fn curves_csv(a: &CurvesArgs) -> CliResult<String> {
    if a.n.is_empty() {
        return Err(invalid("--n needs at least one qubit count"));
    }
    if !(a.t_max > 0.0 && a.t_max.is_finite()) || a.points == 0 {
        return Err(invalid("--t-max must be positive and --points at least 1"));
    }
    let grid = temperature_grid(a.t_max, a.points);
    let mut rows = Vec::new();
    for &n in &a.n {
        for &temp in &grid {
            let th = ThermalParams::from_temperature(temp)?;
            rows.push(vec![
                n.to_string(),
                fmt_f64(temp),
                fmt_f64(th.p_flip),
                fmt_f64(thermal::fidelity(n, &th)?),
                fmt_f64(thermal::expectation_optimal(n, &th)?),
                fmt_f64(thermal::union_bound(n, &th)?),
            ]);
        }
    }
    csv_text(&CURVES_COLUMNS, rows)
}

fn curves(command: &Command, a: &CurvesArgs) -> CliResult<Output> {
    Ok(Output::csv(command, curves_csv(a)?))
}

fn sweep_wt(command: &Command, a: &SweepWtArgs) -> CliResult<Output> {
    let n = a.n;
    if n % 2 != 0 {
        return Err(thermgraph_core::Error::OddQubitCount { n }.into());
    }
    if !(2..=40).contains(&n) {
        return Err(invalid(format!("n = {n} outside [2, 40]")));
    }
    let params: Vec<ThermalParams> = match (&a.grid.betas, &a.grid.ratios) {
        (Some(b), None) => b
            .iter()
            .map(|&b| ThermalParams::from_beta(b))
            .collect::<Result<_, _>>()?,
        (None, Some(r)) => r
            .iter()
            .map(|&r| ThermalParams::from_boltzmann_ratio(r))
            .collect::<Result<_, _>>()?,
        (None, None) => vec![ThermalParams::from_boltzmann_ratio(1e-3)?],
        _ => return Err(invalid("--betas and --ratios are mutually exclusive")),
    };
    let mut rows = Vec::new();
    for th in &params {
        let f = thermal::fidelity(n, th)?;
        let mut records = Vec::with_capacity(n + 1);
        for wt in 0..=n {
            let e = thermal::expectation_general(n, wt, th)?;
            let lead = thermal::deviation_leading_term(n, wt, th)?;
            records.push((wt, e, (e - f).abs(), lead));
        }
        let argmin = records
            .iter()
            .min_by(|x, y| x.2.total_cmp(&y.2))
            .map(|r| r.0)
            .expect("n + 1 rows");
        for (wt, e, dev, lead) in records {
            rows.push(vec![
                fmt_f64(th.beta()),
                fmt_f64(th.boltzmann_ratio()),
                wt.to_string(),
                fmt_f64(e),
                fmt_f64(f),
                fmt_f64(dev),
                fmt_f64(lead),
                (wt == argmin).to_string(),
            ]);
        }
    }
    Ok(Output::csv(command, csv_text(&SWEEP_COLUMNS, rows)?))
}

#[derive(Serialize)]
struct IdentitiesRecord {
    k_max: usize,
    odd_vanishes: IdentityReport,
    even_alternates: IdentityReport,
    alternating_convolution: IdentityReport,
    generating_polynomial: IdentityReport,
    passed: bool,
}

fn run_identities(command: &Command, a: &IdentitiesArgs) -> CliResult<Output> {
    let record = IdentitiesRecord {
        k_max: a.kmax,
        odd_vanishes: identities::check_odd(a.kmax)?,
        even_alternates: identities::check_even(a.kmax)?,
        alternating_convolution: identities::check_alternating(a.kmax)?,
        generating_polynomial: identities::check_generating_polynomial(a.kmax)?,
        passed: false,
    };
    let failures = record.odd_vanishes.failures.len()
        + record.even_alternates.failures.len()
        + record.alternating_convolution.failures.len()
        + record.generating_polynomial.failures.len();
    let record = IdentitiesRecord {
        passed: failures == 0,
        ..record
    };
    let mut out = Output::json(command, record);
    if failures > 0 {
        out.failed_check = Some(format!("{failures} identity failures"));
    }
    Ok(out)
}

#[derive(Serialize)]
struct OracleCase {
    n: usize,
    beta: f64,
    settings: usize,
    max_expectation_error: f64,
    /// Entrywise distance between the Gibbs and phase-flip constructions.
    gibbs_distance: Option<f64>,
}

#[derive(Serialize)]
struct OracleRecord {
    cases: Vec<OracleCase>,
    max_expectation_error: f64,
    max_density_error: f64,
    expectation_tolerance: f64,
    density_tolerance: f64,
    passed: bool,
}

/// Closed-form expectation of every setting against the dense thermal
/// state, and the Gibbs state against the phase-flip construction.
pub fn oracle_case(h: &HypergraphSpec, th: &ThermalParams) -> CliResult<(f64, Option<f64>)> {
    let n = h.n();
    let rho = oracle::thermal_density(h, th)?;
    let mut worst = 0.0f64;
    for mask in 0..1u64 << n {
        let l = SettingVector::new(BitVec::from_u64(n, mask));
        let s = generalized_product(h, &l)?;
        let dense = oracle::dense_expectation(&rho, &s)?;
        let closed = thermal::expectation_general(n, s.x_mask().count_ones(), th)?;
        worst = worst.max((dense - closed).abs());
    }
    let gibbs = if n <= ORACLE_GIBBS_MAX {
        Some(oracle::boltzmann_density(h, th)?.max_entry_distance(&rho))
    } else {
        None
    };
    Ok((worst, gibbs))
}

fn oracle_check(command: &Command, a: &OracleCheckArgs) -> CliResult<Output> {
    let graphs: Vec<HypergraphSpec> = match &a.graph {
        Some(p) => vec![HypergraphSpec::from_json(&read_file(p)?)?],
        None => {
            if !(2..=oracle::MAX_GIBBS_QUBITS).contains(&a.nmax) {
                return Err(invalid(format!(
                    "--nmax must lie in [2, {}]",
                    oracle::MAX_GIBBS_QUBITS
                )));
            }
            (2..=a.nmax)
                .map(|n| GraphSpec::ring(n).map(HypergraphSpec::from))
                .collect::<Result<_, _>>()?
        }
    };
    if let Some(h) = graphs.iter().find(|h| h.n() > oracle::MAX_GIBBS_QUBITS) {
        return Err(thermgraph_core::Error::TooManyQubits {
            n: h.n(),
            max: oracle::MAX_GIBBS_QUBITS,
        }
        .into());
    }
    let mut cases = Vec::new();
    for h in &graphs {
        for &b in &a.betas {
            let th = ThermalParams::from_beta(b)?;
            let (err, gibbs) = oracle_case(h, &th)?;
            cases.push(OracleCase {
                n: h.n(),
                beta: b,
                settings: 1 << h.n(),
                max_expectation_error: err,
                gibbs_distance: gibbs,
            });
        }
    }
    let max_e = cases
        .iter()
        .map(|c| c.max_expectation_error)
        .fold(0.0, f64::max);
    let max_d = cases
        .iter()
        .filter_map(|c| c.gibbs_distance)
        .fold(0.0, f64::max);
    let passed = max_e <= ORACLE_EXPECTATION_TOLERANCE && max_d <= ORACLE_DENSITY_TOLERANCE;
    let mut out = Output::json(
        command,
        OracleRecord {
            cases,
            max_expectation_error: max_e,
            max_density_error: max_d,
            expectation_tolerance: ORACLE_EXPECTATION_TOLERANCE,
            density_tolerance: ORACLE_DENSITY_TOLERANCE,
            passed,
        },
    );
    if !passed {
        out.failed_check = Some(format!(
            "oracle disagreement: expectation {max_e:e}, density {max_d:e}"
        ));
    }
    Ok(out)
}

#[derive(Serialize)]
struct SamplingRecord {
    shots: u64,
    /// `sum_z |q_z - q'_z|` against the ideal X-basis distribution.
    l1_distance: f64,
    total_variation: f64,
    /// `2 sqrt(1 - F)` for the simulated temperature.
    fidelity_l1_bound: f64,
}

#[derive(Serialize)]
struct CertifyRecord {
    decision: CertificationDecision,
    setting: Option<String>,
    report: Option<VerificationReport>,
    sampling: Option<SamplingRecord>,
}

fn parse_pairs(items: &[String]) -> CliResult<Vec<(usize, usize)>> {
    items
        .iter()
        .map(|item| {
            let (a, b) = item
                .split_once('-')
                .ok_or_else(|| invalid(format!("edge {item:?}: expected i-j")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| invalid(format!("edge {item:?}: expected i-j")))
            };
            Ok((parse(a)?, parse(b)?))
        })
        .collect()
}

fn read_report(path: &Path) -> CliResult<VerificationReport> {
    let value: serde_json::Value = serde_json::from_str(&read_file(path)?)
        .map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let inner = value.pointer("/result/report").cloned().unwrap_or(value);
    serde_json::from_value(inner).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn certify_iqp(command: &Command, a: &CertifyIqpArgs) -> CliResult<Output> {
    let record = if a.simulate {
        let n = a.n.ok_or_else(|| invalid("--simulate needs --n"))?;
        let th = thermal_params(&a.temperature)?;
        let inst = supremacy::build_family(n, &parse_pairs(&a.e2)?)?;
        let config = match a.samples {
            Some(s) => ProtocolConfig::new(a.epsilon, a.delta, s, a.seed)?,
            None => ProtocolConfig::hoeffding(a.epsilon, a.delta, a.seed)?,
        }
        .with_workers(a.workers);
        let (report, decision) =
            supremacy::simulate_certification(&inst, &th, &config, a.allow_small_n)?;
        let sampling = match a.iqp_shots {
            Some(shots) => {
                let exact = supremacy::x_basis_distribution(&inst.spec)?;
                let sample = supremacy::iqp_sample(&inst.spec, &th, shots, a.seed, a.workers)?;
                Some(SamplingRecord {
                    shots,
                    l1_distance: sample.l1_distance(&exact),
                    total_variation: sample.total_variation(&exact),
                    fidelity_l1_bound: 2.0 * (1.0 - thermal::fidelity(n, &th)?).max(0.0).sqrt(),
                })
            }
            None => None,
        };
        CertifyRecord {
            decision,
            setting: Some(report.setting.to_string()),
            report: Some(report),
            sampling,
        }
    } else if let Some(path) = &a.report {
        let report = read_report(path)?;
        CertifyRecord {
            decision: supremacy::certify(report.f_est, report.n, a.allow_small_n)?,
            setting: Some(report.setting.to_string()),
            report: None,
            sampling: None,
        }
    } else if let Some(f) = a.f_est {
        let n = a.n.ok_or_else(|| invalid("--f-est needs --n"))?;
        CertifyRecord {
            decision: supremacy::certify(f, n, a.allow_small_n)?,
            setting: None,
            report: None,
            sampling: None,
        }
    } else {
        return Err(invalid("one of --f-est, --report, --simulate is required"));
    };
    Ok(Output::json(command, record))
}

#[derive(Serialize)]
struct TemperatureRecord {
    n: usize,
    f_est: f64,
    target: Target,
    beta: Option<f64>,
    temperature: f64,
    p_flip: f64,
    boltzmann_ratio: f64,
    fidelity: f64,
    expectation_optimal: Option<f64>,
}

fn estimate_temperature(command: &Command, a: &EstimateTemperatureArgs) -> CliResult<Output> {
    let target = match a.target {
        Target::Estimator => InversionTarget::Estimator,
        Target::Fidelity => InversionTarget::Fidelity,
    };
    let th = thermal::invert_temperature(a.n, a.f_est, target)?;
    let expectation_optimal = if a.n % 2 == 0 {
        Some(thermal::expectation_optimal(a.n, &th)?)
    } else {
        None
    };
    Ok(Output::json(
        command,
        TemperatureRecord {
            n: a.n,
            f_est: a.f_est,
            target: a.target,
            beta: finite_beta(&th),
            temperature: th.temperature(),
            p_flip: th.p_flip,
            boltzmann_ratio: th.boltzmann_ratio(),
            fidelity: thermal::fidelity(a.n, &th)?,
            expectation_optimal,
        },
    ))
}

fn replay(a: &ReplayArgs) -> CliResult<Output> {
    let manifest = RunManifest::from_json(&read_file(&a.manifest)?)?;
    if matches!(manifest.command, Command::Replay(_)) {
        return Err(invalid("a manifest cannot record a replay"));
    }
    run(&manifest.command)
}
