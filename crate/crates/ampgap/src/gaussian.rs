//! Discrete Gaussian distributions on the integers and their periodic
//! transforms.
//!
//! Iteration counts are importance-sampled from a truncated discrete Gaussian
//! with standard deviation `T` and cutoff `M = ⌊σT⌋`. The discrete-time cosine
//! transform of that distribution is a periodic Gaussian: unit peaks every 2π
//! for the all-integer distribution, alternating-sign peaks every π for the
//! odd-only distribution. The estimators' objective landscapes are sums of a
//! few such transforms, so the analytic properties checked here (convexity,
//! smoothness, strong concavity of the central peak) are what make grid-search
//! estimation work.

use std::f64::consts::PI;

use rand::Rng;

use crate::error::{Error, Result};

const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_5;

/// Which integers carry probability mass (besides the residual at zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportKind {
    /// Every integer in `[-M, M]`.
    AllIntegers,
    /// Odd integers in `[-M, M]` only; even nonzero integers carry no mass.
    OddOnly,
}

/// Tabulated truncated discrete Gaussian over iteration counts.
///
/// The distribution places weight proportional to `exp(-m²/2T²)` on integers
/// `1 ≤ |m| ≤ M` (odd `m` only, at doubled weight, for [`SupportKind::OddOnly`]),
/// normalized by the truncated sum `Z̃` taken over `|m| ≤ ⌊ρT⌋`, and assigns
/// the residual mass to `m = 0`. Normalizing the odd-only table by the same
/// `Z̃` rather than by the odd-only sum keeps low-depth tables numerically
/// stable: renormalizing over the odd entries alone amplifies truncation and
/// rounding error exactly where most of the mass sits at zero.
///
/// The residual at zero is strictly positive whenever `⌊ρT⌋ > M`. In the
/// odd-only case with `ρ = σ` and odd `M` the alternating parity sum can
/// push it negative; construction reports that as an internal error instead
/// of returning an invalid distribution.
#[derive(Debug, Clone)]
pub struct TruncatedGaussianSampler {
    t: f64,
    sigma: f64,
    rho: f64,
    kind: SupportKind,
    max_index: i64,
    z_tilde: f64,
    /// `pmf[i]` is the probability of `m = i - max_index`.
    pmf: Vec<f64>,
    /// Cumulative sums of `pmf` for inverse-CDF sampling.
    cdf: Vec<f64>,
}

impl TruncatedGaussianSampler {
    /// Builds the tabulated distribution.
    ///
    /// `t` is the Gaussian standard deviation, `sigma` the support truncation
    /// multiple (`M = ⌊σT⌋`), `rho ≥ sigma` the normalization truncation
    /// multiple. `M = 0` is legal and concentrates all mass at `m = 0`.
    pub fn new(t: f64, sigma: f64, rho: f64, kind: SupportKind) -> Result<Self> {
        if t <= 0.0 || t.is_nan() {
            return Err(Error::parameter("t", format!("must be positive, got {t}")));
        }
        if sigma <= 0.0 || sigma.is_nan() {
            return Err(Error::parameter(
                "sigma",
                format!("must be positive, got {sigma}"),
            ));
        }
        if rho < sigma || rho.is_nan() {
            return Err(Error::parameter(
                "rho",
                format!("must be at least sigma = {sigma}, got {rho}"),
            ));
        }

        let max_index = (sigma * t).floor() as i64;
        let norm_index = (rho * t).floor() as i64;

        let gauss = |m: i64| (-((m * m) as f64) / (2.0 * t * t)).exp();

        let mut z_sum = 1.0; // m = 0 term
        for m in 1..=norm_index {
            z_sum += 2.0 * gauss(m);
        }
        let z_tilde = z_sum / (SQRT_TWO_PI * t);

        let len = (2 * max_index + 1) as usize;
        let mut pmf = vec![0.0; len];
        let base = 1.0 / (SQRT_TWO_PI * t * z_tilde);
        let mut tail = 0.0;
        for m in 1..=max_index {
            let w = match kind {
                SupportKind::AllIntegers => base * gauss(m),
                SupportKind::OddOnly => {
                    if m % 2 != 0 {
                        2.0 * base * gauss(m)
                    } else {
                        0.0
                    }
                }
            };
            pmf[(max_index + m) as usize] = w;
            pmf[(max_index - m) as usize] = w;
            tail += 2.0 * w;
        }
        let residual = 1.0 - tail;
        if residual < 0.0 {
            return Err(Error::Internal(format!(
                "residual mass at m = 0 is negative ({residual:.3e}) for t = {t}, \
                 sigma = {sigma}, rho = {rho}"
            )));
        }
        pmf[max_index as usize] = residual;

        let mut cdf = Vec::with_capacity(len);
        let mut acc = 0.0;
        for &p in &pmf {
            acc += p;
            cdf.push(acc);
        }
        // Guard the last entry against rounding so sampling never falls off the end.
        if let Some(last) = cdf.last_mut() {
            *last = 1.0;
        }

        Ok(Self {
            t,
            sigma,
            rho,
            kind,
            max_index,
            z_tilde,
            pmf,
            cdf,
        })
    }

    /// All-integer distribution with the practical defaults `σ = 4`, `ρ = 6`.
    pub fn all_integers(t: f64) -> Result<Self> {
        Self::new(t, 4.0, 6.0, SupportKind::AllIntegers)
    }

    /// Odd-only distribution with the practical defaults `σ = 4`, `ρ = 6`.
    pub fn odd_only(t: f64) -> Result<Self> {
        Self::new(t, 4.0, 6.0, SupportKind::OddOnly)
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn kind(&self) -> SupportKind {
        self.kind
    }

    /// Support cutoff `M = ⌊σT⌋`; no mass lies beyond `|m| = M`.
    pub fn max_index(&self) -> i64 {
        self.max_index
    }

    /// Truncated normalization constant `Z̃`.
    pub fn z_tilde(&self) -> f64 {
        self.z_tilde
    }

    /// Probability of drawing `m`; zero outside `[-M, M]`.
    pub fn pmf(&self, m: i64) -> f64 {
        if m.abs() > self.max_index {
            0.0
        } else {
            self.pmf[(m + self.max_index) as usize]
        }
    }

    /// Iterates over `(m, probability)` for the full support `[-M, M]`.
    pub fn support(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let offset = self.max_index;
        self.pmf
            .iter()
            .enumerate()
            .map(move |(i, &p)| (i as i64 - offset, p))
    }

    /// Draws one iteration count by inverse-CDF lookup over the table.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        let u: f64 = rng.gen();
        let idx = self.cdf.partition_point(|&c| c <= u);
        idx.min(self.cdf.len() - 1) as i64 - self.max_index
    }

    /// Expected state-preparation queries per shot, `Σ_m pmf(m)·max(|m|, 1)`.
    pub fn mean_query_cost(&self) -> f64 {
        self.support()
            .map(|(m, p)| p * (m.unsigned_abs().max(1)) as f64)
            .sum()
    }

    /// Mean of the tabulated distribution (zero by symmetry, up to rounding).
    pub fn mean(&self) -> f64 {
        self.support().map(|(m, p)| p * m as f64).sum()
    }

    /// Variance of the tabulated distribution.
    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.support()
            .map(|(m, p)| p * (m as f64 - mean).powi(2))
            .sum()
    }

    /// Discrete-time cosine transform of the table, `Σ_m pmf(m)·cos(xm)`.
    pub fn cosine_transform(&self, x: f64) -> f64 {
        self.support().map(|(m, p)| p * (x * m as f64).cos()).sum()
    }
}

/// Flavor of the periodic transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeriodicVariant {
    /// `Φ_T`: unit peaks at multiples of 2π.
    Phi,
    /// `Ψ_T`: alternating-sign peaks every π, offset so `Ψ_T(0) = 1`.
    Psi,
}

/// Periodic Gaussian `Φ_T` (or its alternating-sign counterpart `Ψ_T`)
/// evaluated by summing `series_cutoff` image terms on each side.
///
/// Arguments are reduced modulo 2π before summation, so periodicity is exact
/// and the image series converges with error below `exp(-2π²T²J²)`.
#[derive(Debug, Clone)]
pub struct PeriodicGaussian {
    t: f64,
    series_cutoff: u32,
    variant: PeriodicVariant,
    /// Normalization `Z = Σ_j exp(-2j²π²T²)` to the same cutoff.
    z: f64,
    /// `q_T(0) = 1 - 2W/Z`; only meaningful for the `Psi` variant.
    q_zero: f64,
}

/// Default number of image terms summed on each side.
pub const DEFAULT_SERIES_CUTOFF: u32 = 10;

impl PeriodicGaussian {
    /// `Φ_T` with the default series cutoff.
    pub fn phi(t: f64) -> Result<Self> {
        Self::with_cutoff(t, DEFAULT_SERIES_CUTOFF, PeriodicVariant::Phi)
    }

    /// `Ψ_T` with the default series cutoff.
    pub fn psi(t: f64) -> Result<Self> {
        Self::with_cutoff(t, DEFAULT_SERIES_CUTOFF, PeriodicVariant::Psi)
    }

    pub fn with_cutoff(t: f64, series_cutoff: u32, variant: PeriodicVariant) -> Result<Self> {
        if t <= 0.0 || t.is_nan() {
            return Err(Error::parameter("t", format!("must be positive, got {t}")));
        }
        if series_cutoff == 0 {
            return Err(Error::parameter("series_cutoff", "must be positive"));
        }
        let mut z = 1.0;
        for j in 1..=series_cutoff as i64 {
            z += 2.0 * (-2.0 * (j * j) as f64 * PI * PI * t * t).exp();
        }

        // q_T(0) = 1 - 2W/Z with W the odd-only and Z the full integer sum of
        // exp(-m²/2T²); the 1/(√(2π)T) prefactors cancel in the ratio.
        let m_cut = (12.0 * t).ceil() as i64 + 2;
        let mut z_direct = 1.0;
        let mut w_direct = 0.0;
        for m in 1..=m_cut {
            let g = (-((m * m) as f64) / (2.0 * t * t)).exp();
            z_direct += 2.0 * g;
            if m % 2 != 0 {
                w_direct += 2.0 * g;
            }
        }
        let q_zero = 1.0 - 2.0 * w_direct / z_direct;

        Ok(Self {
            t,
            series_cutoff,
            variant,
            z,
            q_zero,
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn series_cutoff(&self) -> u32 {
        self.series_cutoff
    }

    pub fn variant(&self) -> PeriodicVariant {
        self.variant
    }

    /// `q_T(0) = 1 - 2W/Z`, the zero-mass of the untruncated odd-only
    /// distribution.
    pub fn q_zero(&self) -> f64 {
        self.q_zero
    }

    fn phi_value(&self, x: f64) -> f64 {
        // Reduce into [-π, π]; the image sum then covers all significant terms.
        let x = x - 2.0 * PI * (x / (2.0 * PI)).round();
        let j = self.series_cutoff as i64;
        let mut sum = 0.0;
        for k in -j..=j {
            let y = x + 2.0 * PI * k as f64;
            sum += (-y * y * self.t * self.t / 2.0).exp();
        }
        sum / self.z
    }

    /// Evaluates the transform at `x`.
    pub fn value(&self, x: f64) -> f64 {
        match self.variant {
            PeriodicVariant::Phi => self.phi_value(x),
            PeriodicVariant::Psi => self.phi_value(x) - self.phi_value(x + PI) + self.q_zero,
        }
    }

    /// Central-difference second derivative `(f(x+h) - 2f(x) + f(x-h))/h²`.
    ///
    /// Truncation error is `O(h²·max|f⁗|)`; `h` must lie in `[1e-6, 1e-3]`.
    pub fn second_derivative(&self, x: f64, h: f64) -> Result<f64> {
        if !(1e-6..=1e-3).contains(&h) {
            return Err(Error::parameter(
                "h",
                format!("step must lie in [1e-6, 1e-3], got {h}"),
            ));
        }
        Ok((self.value(x + h) - 2.0 * self.value(x) + self.value(x - h)) / (h * h))
    }
}
