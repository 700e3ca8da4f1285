//! Classical post-processing estimators.
//!
//! Three estimators share one skeleton: sample iteration counts from a
//! truncated discrete Gaussian, run one amplification circuit per sample, and
//! recover the phase `λ` by optimizing a signal-matching objective over
//! `θ ∈ [0, π/2]` with a two-level grid search.
//!
//! * GLSAE minimizes the least-squares loss `(1/N) Σ (Z_m - cos(2θm))²` over
//!   cosine shots. Heisenberg-limited at `β = 0`; at lower depths its valid
//!   amplitude range shrinks to `[ζ, 1-ζ]` with `ζ = sin²(1/4T)`.
//! * GDMAE maximizes `(1/N) Σ Z_m cos(2θm) + X_m sin(2θm)` over paired
//!   cosine/sine shots at odd iterations. The sine signal breaks the `±λ`
//!   symmetry, so it covers all `a ∈ [0, 1]` at any depth.
//! * GMMAE maximizes the cosine-only magnitude `(1/N) Σ Z_m cos(2θm)`.
//!   Kept as a contrast case: without the sine signal the magnitude peak is
//!   displaced when the circuits are shallow.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gaussian::{PeriodicGaussian, TruncatedGaussianSampler};
use crate::oracle::{AmplitudeOracle, Basis, MeasurementRecord, Protocol};

/// Run parameters for one estimate.
///
/// `T` and `N` defaults are derived from `(epsilon, beta)`:
/// `T = c_T · ε^{β-1} · max(1, ln^{1/2}(1/ε))` and
/// `N = ⌈c_N · ε^{-2β} · ln(1/(κξ))⌉`, where `κ` is the fine-grid spacing and
/// `ξ` the failure-probability budget. Only the asymptotic forms are forced;
/// the constants `c_T`, `c_N` are calibration choices and both values can be
/// overridden outright.
#[derive(Debug, Clone)]
pub struct EstimatorConfig {
    pub protocol: Protocol,
    /// Target additive precision on the amplitude.
    pub epsilon: f64,
    /// Depth/samples tuning knob in `[0, 1]`: 0 is Heisenberg-limited depth,
    /// 1 is shallow circuits at standard-quantum-limit sample counts.
    pub beta: f64,
    /// Support truncation multiple (`M = ⌊σT⌋`).
    pub sigma: f64,
    /// Normalization truncation multiple (`ρ ≥ σ`).
    pub rho: f64,
    /// Failure-probability budget `ξ` entering the sample-count rule.
    pub confidence: f64,
    /// Fine-grid spacing override; defaults to `ε/2` (GLSAE, GMMAE) or `ε/3`
    /// (GDMAE).
    pub grid_kappa: Option<f64>,
    /// Gaussian standard-deviation override.
    pub t_override: Option<f64>,
    /// Sample-count override.
    pub n_override: Option<usize>,
    /// Calibration constant for the derived `T`.
    pub t_constant: f64,
    /// Calibration constant for the derived `N`.
    pub n_constant: f64,
    pub seed: u64,
}

impl EstimatorConfig {
    pub fn new(protocol: Protocol, epsilon: f64) -> Self {
        Self {
            protocol,
            epsilon,
            beta: 0.0,
            sigma: 4.0,
            rho: 6.0,
            confidence: 0.1,
            grid_kappa: None,
            t_override: None,
            n_override: None,
            t_constant: 1.0,
            n_constant: 10.0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.epsilon <= 0.0 || !self.epsilon.is_finite() {
            return Err(Error::parameter(
                "epsilon",
                format!("must be positive, got {}", self.epsilon),
            ));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::parameter(
                "beta",
                format!("must lie in [0, 1], got {}", self.beta),
            ));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::parameter(
                "confidence",
                format!("must lie in (0, 1), got {}", self.confidence),
            ));
        }
        if let Some(k) = self.grid_kappa {
            if k <= 0.0 || k.is_nan() {
                return Err(Error::parameter(
                    "kappa",
                    format!("must be positive, got {k}"),
                ));
            }
        }
        if let Some(t) = self.t_override {
            if t <= 0.0 || t.is_nan() {
                return Err(Error::parameter("t", format!("must be positive, got {t}")));
            }
        }
        if self.n_override == Some(0) {
            return Err(Error::parameter("n", "must be at least 1"));
        }
        Ok(())
    }

    /// Fine-grid spacing `κ`.
    pub fn kappa(&self) -> f64 {
        self.grid_kappa.unwrap_or(match self.protocol {
            Protocol::Gdmae => self.epsilon / 3.0,
            _ => self.epsilon / 2.0,
        })
    }

    /// Gaussian standard deviation actually used.
    pub fn derived_t(&self) -> f64 {
        self.t_override.unwrap_or_else(|| {
            let log_factor = (1.0 / self.epsilon).ln().sqrt().max(1.0);
            self.t_constant * self.epsilon.powf(self.beta - 1.0) * log_factor
        })
    }

    /// Number of sampled iterations actually used.
    pub fn derived_n(&self) -> usize {
        self.n_override.unwrap_or_else(|| {
            let n = self.n_constant
                * self.epsilon.powf(-2.0 * self.beta)
                * (1.0 / (self.kappa() * self.confidence)).ln();
            (n.ceil() as usize).max(1)
        })
    }
}

/// Outcome of one estimate with resource diagnostics.
#[derive(Debug, Clone)]
pub struct EstimateResult {
    pub protocol: Protocol,
    /// Amplitude estimate `ã = sin²(θ*)`.
    pub a_hat: f64,
    /// Phase estimate `θ* ∈ [0, π/2]`.
    pub theta_hat: f64,
    /// Objective value at `θ*`.
    pub objective_value: f64,
    /// Winning coarse grid index `χ*` (1-based).
    pub coarse_index: u64,
    /// Winning fine grid offset `η*`.
    pub fine_index: i64,
    /// Maximum circuit depth used by any shot.
    pub max_depth: u64,
    /// Total state-preparation queries.
    pub total_queries: u64,
    /// Total circuit executions.
    pub total_shots: u64,
    /// Validity-range parameter `ζ = sin²(1/4T)`; GLSAE only.
    pub zeta: Option<f64>,
    /// Set when a GLSAE estimate lands outside `[ζ, 1-ζ]`, where the
    /// depth-limited guarantee does not apply. Diagnostic only.
    pub outside_validity: bool,
    /// Gaussian standard deviation used.
    pub t: f64,
    /// Depth cutoff `M = ⌊σT⌋`.
    pub m_cap: u64,
    /// Number of sampled iterations.
    pub n_samples: usize,
    pub epsilon: f64,
    pub beta: f64,
    pub seed: u64,
}

impl EstimateResult {
    pub const CSV_HEADER: &'static str =
        "protocol,a_true,a_hat,theta_hat,epsilon,beta,T,M,N,depth,queries,shots,seed,objective_value";

    /// Single CSV row; `a_true` is supplied by the caller who knows the
    /// hidden amplitude.
    pub fn csv_row(&self, a_true: f64) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.protocol,
            a_true,
            self.a_hat,
            self.theta_hat,
            self.epsilon,
            self.beta,
            self.t,
            self.m_cap,
            self.n_samples,
            self.max_depth,
            self.total_queries,
            self.total_shots,
            self.seed,
            self.objective_value
        )
    }
}

/// Least-squares loss `(1/N) Σ (Z_m - cos(2θ m_i))²` over cosine records.
pub fn glsae_loss(records: &[MeasurementRecord], theta: f64) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::Config("loss over empty record sequence".into()));
    }
    if records.iter().any(|r| r.basis != Basis::CosZ) {
        return Err(Error::Config(
            "least-squares loss expects cosine-basis records only".into(),
        ));
    }
    let sum: f64 = records
        .iter()
        .map(|r| {
            let c = (2.0 * theta * r.m as f64).cos();
            (r.outcome as f64 - c).powi(2)
        })
        .sum();
    Ok(sum / records.len() as f64)
}

/// Dual-measurement magnitude `(1/N) Σ Z_m cos(2θm) + X_m sin(2θm)` over
/// paired records.
///
/// Every sine record must directly follow its cosine partner at the same
/// sampled `m`; a cosine record may stand alone only at `m = 0`, where the
/// sine term vanishes. `N` counts samples (cosine records).
pub fn gdmae_magnitude(records: &[MeasurementRecord], theta: f64) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::Config("magnitude over empty record sequence".into()));
    }
    let mut sum = 0.0;
    let mut samples = 0usize;
    let mut idx = 0usize;
    while idx < records.len() {
        let z = &records[idx];
        if z.basis != Basis::CosZ {
            return Err(Error::Config(format!(
                "unpaired sine record at position {idx}"
            )));
        }
        samples += 1;
        sum += z.outcome as f64 * (2.0 * theta * z.m as f64).cos();
        idx += 1;
        if z.m != 0 {
            let x = records.get(idx).ok_or_else(|| {
                Error::Config(format!(
                    "cosine record at m = {} misses its sine partner",
                    z.m
                ))
            })?;
            if x.basis != Basis::SinX || x.m != z.m {
                return Err(Error::Config(format!(
                    "cosine record at m = {} misses its sine partner",
                    z.m
                )));
            }
            sum += x.outcome as f64 * (2.0 * theta * x.m as f64).sin();
            idx += 1;
        }
    }
    Ok(sum / samples as f64)
}

/// Cosine-only magnitude `(1/N) Σ Z_m cos(2θm)`.
pub fn gmmae_magnitude(records: &[MeasurementRecord], theta: f64) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::Config("magnitude over empty record sequence".into()));
    }
    if records.iter().any(|r| r.basis != Basis::CosZ) {
        return Err(Error::Config(
            "cosine-only magnitude expects cosine-basis records only".into(),
        ));
    }
    let sum: f64 = records
        .iter()
        .map(|r| r.outcome as f64 * (2.0 * theta * r.m as f64).cos())
        .sum();
    Ok(sum / records.len() as f64)
}

/// Per-`|m|` sufficient statistics of a record sequence.
///
/// All three objectives depend on the records only through, for each distinct
/// `|m|`, the shot count, the summed cosine outcomes and the summed
/// sign-adjusted sine outcomes. Aggregating first makes a grid evaluation
/// `O(distinct |m|)` instead of `O(N)`.
#[derive(Debug, Clone)]
struct SignalSummary {
    samples: f64,
    /// `(|m|, count, Σ Z, Σ X·sign(m))` per distinct `|m|`.
    terms: Vec<(f64, f64, f64, f64)>,
}

impl SignalSummary {
    fn from_records(records: &[MeasurementRecord]) -> Self {
        let mut map: BTreeMap<u64, (f64, f64, f64)> = BTreeMap::new();
        let mut samples = 0.0;
        for r in records {
            let entry = map.entry(r.m.unsigned_abs()).or_insert((0.0, 0.0, 0.0));
            match r.basis {
                Basis::CosZ => {
                    samples += 1.0;
                    entry.0 += 1.0;
                    entry.1 += r.outcome as f64;
                }
                Basis::SinX => {
                    entry.2 += (r.outcome * r.m.signum() as i8) as f64;
                }
            }
        }
        let terms = map
            .into_iter()
            .map(|(m, (count, z, x))| (m as f64, count, z, x))
            .collect();
        Self { samples, terms }
    }

    fn loss(&self, theta: f64) -> f64 {
        let mut sum = 0.0;
        for &(m, count, z, _) in &self.terms {
            let c = (2.0 * theta * m).cos();
            sum += count * (1.0 + c * c) - 2.0 * c * z;
        }
        sum / self.samples
    }

    fn dual_magnitude(&self, theta: f64) -> f64 {
        let mut sum = 0.0;
        for &(m, _, z, x) in &self.terms {
            sum += z * (2.0 * theta * m).cos() + x * (2.0 * theta * m).sin();
        }
        sum / self.samples
    }

    fn cos_magnitude(&self, theta: f64) -> f64 {
        let mut sum = 0.0;
        for &(m, _, z, _) in &self.terms {
            sum += z * (2.0 * theta * m).cos();
        }
        sum / self.samples
    }
}

/// Direction of the grid search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Minimize,
    Maximize,
}

/// Result of [`two_level_grid_search`].
#[derive(Debug, Clone, Copy)]
pub struct GridSearchOutcome {
    pub theta_star: f64,
    pub objective_value: f64,
    /// 1-based winning coarse index `χ*`.
    pub coarse_index: u64,
    /// Winning fine offset `η*` in units of `fine_spacing`.
    pub fine_index: i64,
}

/// Two-level grid optimization over `θ ∈ [0, π/2]`.
///
/// The coarse stage evaluates `θ = πχ/(2M)` for `χ = 1..=M`; the fine stage
/// scans `θ = θ_coarse + η·fine_spacing` for `η ∈ [-steps, steps]`, clamping
/// into `[0, π/2]`. Ties break toward smaller `θ` at both levels.
pub fn two_level_grid_search<F: Fn(f64) -> f64>(
    objective: F,
    m_cap: u64,
    mode: SearchMode,
    fine_spacing: f64,
    fine_halfwidth_steps: u64,
) -> GridSearchOutcome {
    let m_cap = m_cap.max(1);
    let better = |candidate: f64, incumbent: f64| match mode {
        SearchMode::Minimize => candidate < incumbent,
        SearchMode::Maximize => candidate > incumbent,
    };

    let mut coarse_index = 1u64;
    let mut coarse_theta = std::f64::consts::PI / (2.0 * m_cap as f64);
    let mut coarse_value = objective(coarse_theta);
    for chi in 2..=m_cap {
        let theta = std::f64::consts::PI * chi as f64 / (2.0 * m_cap as f64);
        let value = objective(theta);
        if better(value, coarse_value) {
            coarse_index = chi;
            coarse_theta = theta;
            coarse_value = value;
        }
    }

    let steps = fine_halfwidth_steps as i64;
    let mut best_eta = -steps;
    let mut best_theta = f64::NAN;
    let mut best_value = f64::NAN;
    for eta in -steps..=steps {
        let theta =
            (coarse_theta + eta as f64 * fine_spacing).clamp(0.0, std::f64::consts::FRAC_PI_2);
        let value = objective(theta);
        if best_theta.is_nan() || better(value, best_value) {
            best_eta = eta;
            best_theta = theta;
            best_value = value;
        }
    }

    GridSearchOutcome {
        theta_star: best_theta,
        objective_value: best_value,
        coarse_index,
        fine_index: best_eta,
    }
}

/// Fine-grid halfwidth in steps: `⌊8π/(Mε)⌋` for the least-squares search,
/// `⌊12π/(Mε)⌋` for the magnitude searches, so the scanned span is `±4π/M`
/// at the default spacings.
pub fn fine_halfwidth_steps(protocol: Protocol, m_cap: u64, epsilon: f64) -> u64 {
    let factor = match protocol {
        Protocol::Gdmae => 12.0,
        _ => 8.0,
    };
    (factor * std::f64::consts::PI / (m_cap.max(1) as f64 * epsilon)).floor() as u64
}

/// Runs one full estimate: sample, measure, optimize.
///
/// All randomness derives from `config.seed`; repeated calls with the same
/// configuration and oracle amplitude reproduce the result exactly. Never
/// fails on degenerate amplitudes.
pub fn estimate(config: &EstimatorConfig, oracle: &mut AmplitudeOracle) -> Result<EstimateResult> {
    config.validate()?;
    let t = config.derived_t();
    let n = config.derived_n();
    let kappa = config.kappa();
    let sampler =
        TruncatedGaussianSampler::new(t, config.sigma, config.rho, config.protocol.support_kind())?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let queries_before = oracle.queries();
    let shots_before = oracle.shots();
    let records = oracle.batch_measure(&sampler, n, config.protocol, &mut rng)?;
    let summary = SignalSummary::from_records(&records);

    let m_cap = (sampler.max_index() as u64).max(1);
    let steps = fine_halfwidth_steps(config.protocol, m_cap, config.epsilon);
    let outcome = match config.protocol {
        Protocol::Glsae => two_level_grid_search(
            |theta| summary.loss(theta),
            m_cap,
            SearchMode::Minimize,
            kappa,
            steps,
        ),
        Protocol::Gdmae => two_level_grid_search(
            |theta| summary.dual_magnitude(theta),
            m_cap,
            SearchMode::Maximize,
            kappa,
            steps,
        ),
        Protocol::Gmmae => two_level_grid_search(
            |theta| summary.cos_magnitude(theta),
            m_cap,
            SearchMode::Maximize,
            kappa,
            steps,
        ),
    };

    let a_hat = outcome.theta_star.sin().powi(2);
    let zeta = match config.protocol {
        Protocol::Glsae => Some((1.0 / (4.0 * t)).sin().powi(2)),
        _ => None,
    };
    let outside_validity = zeta.map(|z| a_hat < z || a_hat > 1.0 - z).unwrap_or(false);

    Ok(EstimateResult {
        protocol: config.protocol,
        a_hat,
        theta_hat: outcome.theta_star,
        objective_value: outcome.objective_value,
        coarse_index: outcome.coarse_index,
        fine_index: outcome.fine_index,
        max_depth: records.iter().map(|r| r.depth).max().unwrap_or(0),
        total_queries: oracle.queries() - queries_before,
        total_shots: oracle.shots() - shots_before,
        zeta,
        outside_validity,
        t,
        m_cap,
        n_samples: n,
        epsilon: config.epsilon,
        beta: config.beta,
        seed: config.seed,
    })
}

/// Exact expectation of the least-squares loss under the tabulated sampler:
/// `Σ_m pmf(m)·(1 - 2cos(2λm)cos(2θm) + cos²(2θm))`.
pub fn expected_loss(sampler: &TruncatedGaussianSampler, lambda: f64, theta: f64) -> f64 {
    sampler
        .support()
        .map(|(m, p)| {
            let cl = (2.0 * lambda * m as f64).cos();
            let ct = (2.0 * theta * m as f64).cos();
            p * (1.0 - 2.0 * cl * ct + ct * ct)
        })
        .sum()
}

/// Exact expectation of the dual magnitude under the tabulated sampler:
/// `Σ_m pmf(m)·cos(2(θ-λ)m)`.
pub fn expected_dual_magnitude(sampler: &TruncatedGaussianSampler, lambda: f64, theta: f64) -> f64 {
    sampler
        .support()
        .map(|(m, p)| p * (2.0 * (theta - lambda) * m as f64).cos())
        .sum()
}

/// Untruncated loss expectation written through the periodic transform:
/// `3/2 - Φ(2(θ-λ)) - Φ(2(θ+λ)) + Φ(4θ)/2`.
pub fn loss_transform(phi: &PeriodicGaussian, lambda: f64, theta: f64) -> f64 {
    1.5 - phi.value(2.0 * (theta - lambda)) - phi.value(2.0 * (theta + lambda))
        + phi.value(4.0 * theta) / 2.0
}
