//! Analytic single-shot measurement model for amplitude-amplification
//! circuits.
//!
//! For a hidden amplitude `a = sin²(λ)`, a depth-`|m|` amplification circuit
//! measured in the computational (Pauli-Z) basis is a ±1 Bernoulli variable
//! with mean `cos(2λ|m|)`; measuring the flag qubit in the Pauli-X basis at
//! odd `|m|` instead gives mean `sin(2λ|m|)`. This module produces such shots
//! exactly from the closed-form means, together with per-shot depth and query
//! accounting, without simulating any state vector. The dense-matrix check
//! that these means are the correct circuit expectations lives in
//! [`crate::verifier`].

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gaussian::{SupportKind, TruncatedGaussianSampler};

/// Measurement basis of a single shot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// Pauli-Z style readout; mean `cos(2λ|m|)`.
    CosZ,
    /// Pauli-X readout on the flag qubit; mean `sin(2λm)` (sign-adjusted).
    SinX,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::CosZ => write!(f, "cos_z"),
            Basis::SinX => write!(f, "sin_x"),
        }
    }
}

/// Classical post-processing protocol; decides which circuits a batch runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    /// Least-squares loss over cosine shots from the all-integer sampler.
    Glsae,
    /// Dual cosine/sine shots at odd iterations; magnitude maximization.
    Gdmae,
    /// Cosine-only magnitude maximization; deep-circuit regimes only.
    Gmmae,
}

impl Protocol {
    pub fn name(&self) -> &'static str {
        match self {
            Protocol::Glsae => "glsae",
            Protocol::Gdmae => "gdmae",
            Protocol::Gmmae => "gmmae",
        }
    }

    /// Sampler support this protocol draws its iterations from.
    pub fn support_kind(&self) -> SupportKind {
        match self {
            Protocol::Gdmae => SupportKind::OddOnly,
            _ => SupportKind::AllIntegers,
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "glsae" => Ok(Protocol::Glsae),
            "gdmae" => Ok(Protocol::Gdmae),
            "gmmae" => Ok(Protocol::Gmmae),
            other => Err(format!(
                "unknown protocol `{other}` (expected glsae, gdmae or gmmae)"
            )),
        }
    }
}

/// One circuit execution: sampled iteration index, basis, ±1 outcome and the
/// number of state-preparation applications it cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasurementRecord {
    /// Signed sampled iteration index.
    pub m: i64,
    pub basis: Basis,
    /// +1 or -1. For `SinX` at negative `m` the stored value is already
    /// sign-flipped, so it estimates `sin(2λm)` with the signed `m`.
    pub outcome: i8,
    /// State-preparation applications, `max(|m|, 1)`.
    pub depth: u64,
}

impl MeasurementRecord {
    pub const CSV_HEADER: &'static str = "m,basis,outcome,depth";

    pub fn csv_row(&self) -> String {
        format!("{},{},{},{}", self.m, self.basis, self.outcome, self.depth)
    }
}

/// Writes a record sequence as CSV with header.
pub fn write_records_csv<W: Write>(
    records: &[MeasurementRecord],
    out: &mut W,
) -> std::io::Result<()> {
    writeln!(out, "{}", MeasurementRecord::CSV_HEADER)?;
    for r in records {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

/// How many queries to the state-preparation unitary a depth-`d` circuit is
/// charged. The default counts applications of the preparation unitary
/// directly; the alternative charges two per amplification iterate, which
/// rescales constants but not scaling behavior.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QueryAccounting {
    #[default]
    StatePreparations,
    TwoPerIterate,
}

/// Hidden-amplitude Bernoulli oracle with cumulative resource counters.
#[derive(Debug, Clone)]
pub struct AmplitudeOracle {
    a: f64,
    lambda: f64,
    flip_probability: f64,
    accounting: QueryAccounting,
    query_counter: u64,
    shot_counter: u64,
}

impl AmplitudeOracle {
    /// New oracle for amplitude `a ∈ [0, 1]`.
    pub fn new(a: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) || !a.is_finite() {
            return Err(Error::parameter(
                "a",
                format!("amplitude must lie in [0, 1], got {a}"),
            ));
        }
        Ok(Self {
            a,
            lambda: a.sqrt().asin(),
            flip_probability: 0.0,
            accounting: QueryAccounting::default(),
            query_counter: 0,
            shot_counter: 0,
        })
    }

    /// Adds an outcome-flip noise channel: each shot is flipped with
    /// probability `p`. Plumbing for robustness experiments; defaults to 0.
    pub fn with_flip_probability(mut self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || !p.is_finite() {
            return Err(Error::parameter(
                "p_flip",
                format!("flip probability must lie in [0, 1], got {p}"),
            ));
        }
        self.flip_probability = p;
        Ok(self)
    }

    pub fn with_accounting(mut self, accounting: QueryAccounting) -> Self {
        self.accounting = accounting;
        self
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Phase `λ = arcsin(√a) ∈ [0, π/2]`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Total state-preparation queries consumed so far.
    pub fn queries(&self) -> u64 {
        self.query_counter
    }

    /// Total shots (circuit executions) so far.
    pub fn shots(&self) -> u64 {
        self.shot_counter
    }

    fn charge(&mut self, depth: u64) {
        self.shot_counter += 1;
        let per_unit = match self.accounting {
            QueryAccounting::StatePreparations => 1,
            QueryAccounting::TwoPerIterate => 2,
        };
        self.query_counter += per_unit * depth;
    }

    fn maybe_flip<R: Rng + ?Sized>(&self, outcome: i8, rng: &mut R) -> i8 {
        if self.flip_probability > 0.0 && rng.gen::<f64>() < self.flip_probability {
            -outcome
        } else {
            outcome
        }
    }

    /// Executes one cosine-signal shot at iteration index `m`.
    ///
    /// The outcome is +1 with probability `(1 + cos(2λ|m|))/2`. Negative `m`
    /// is folded onto `|m|` since the cosine signal is even. `m = 0` is a
    /// depth-1 prepare-and-measure with deterministic +1 outcome.
    pub fn measure_cos<R: Rng + ?Sized>(&mut self, m: i64, rng: &mut R) -> MeasurementRecord {
        let depth = m.unsigned_abs().max(1);
        self.charge(depth);
        let outcome = if m == 0 {
            1
        } else {
            let p_plus = (1.0 + (2.0 * self.lambda * m.unsigned_abs() as f64).cos()) / 2.0;
            if rng.gen::<f64>() < p_plus {
                1
            } else {
                -1
            }
        };
        MeasurementRecord {
            m,
            basis: Basis::CosZ,
            outcome: self.maybe_flip(outcome, rng),
            depth,
        }
    }

    /// Executes one sine-signal shot at odd iteration index `m`.
    ///
    /// The raw outcome is +1 with probability `(1 + sin(2λ|m|))/2`; for
    /// negative `m` the recorded outcome is sign-flipped, since the sine
    /// signal is odd in `m`.
    pub fn measure_sin<R: Rng + ?Sized>(
        &mut self,
        m: i64,
        rng: &mut R,
    ) -> Result<MeasurementRecord> {
        if m % 2 == 0 {
            return Err(Error::parameter(
                "m",
                format!("sine-signal shots require odd |m|, got {m}"),
            ));
        }
        let depth = m.unsigned_abs();
        self.charge(depth);
        let p_plus = (1.0 + (2.0 * self.lambda * depth as f64).sin()) / 2.0;
        let raw: i8 = if rng.gen::<f64>() < p_plus { 1 } else { -1 };
        let outcome = if m < 0 { -raw } else { raw };
        Ok(MeasurementRecord {
            m,
            basis: Basis::SinX,
            outcome: self.maybe_flip(outcome, rng),
            depth,
        })
    }

    /// Runs the measurement loop of one protocol over `n` sampled iterations.
    ///
    /// GLSAE/GMMAE take one cosine shot per sample. GDMAE takes a cosine and
    /// a sine shot at the same sampled `m` (two independent preparations); a
    /// sampled `m = 0` has no sine circuit — the sine term vanishes there —
    /// so only the deterministic cosine shot is recorded.
    pub fn batch_measure<R: Rng + ?Sized>(
        &mut self,
        sampler: &TruncatedGaussianSampler,
        n: usize,
        protocol: Protocol,
        rng: &mut R,
    ) -> Result<Vec<MeasurementRecord>> {
        if sampler.kind() != protocol.support_kind() {
            return Err(Error::Config(format!(
                "protocol {protocol} requires a {:?} sampler, got {:?}",
                protocol.support_kind(),
                sampler.kind()
            )));
        }
        let mut records = Vec::with_capacity(match protocol {
            Protocol::Gdmae => 2 * n,
            _ => n,
        });
        for _ in 0..n {
            let m = sampler.sample(rng);
            records.push(self.measure_cos(m, rng));
            if protocol == Protocol::Gdmae && m != 0 {
                records.push(self.measure_sin(m, rng)?);
            }
        }
        Ok(records)
    }
}
