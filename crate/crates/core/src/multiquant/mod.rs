//! Iterated quantization of a finite alternative.
//!
//! Level 0 is an n-fold alternative with its truth vectors; each lift builds
//! a Fock space with one mode per basis element of the level below. On a
//! bosonic level, the n-particle product state of a truth vector gives a
//! distribution of relative frequencies `n_k / n` whose mean reproduces the
//! level-below probability `|psi_k|^2`.

mod frequency;
mod tower;

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use frequency::{
    eq11_check, frequency_spectrum, symmetric_product_state, Eq11Config, Eq11Report, FrequencyPoint, FrequencySpectrum,
};
pub use tower::{lift, tower_report, CheckConfig, LevelReport, LiftStatistics, QuantizationTower, TowerReport};

use crate::fock::{FockError, FockSpace};
use crate::opalg::{Index, ModeLabel};

/// Tolerance on the norm of a truth vector.
pub const TRUTH_NORM_TOLERANCE: f64 = 1e-12;
/// Tolerance for probability mass outside the expected particle-number sector.
pub const SECTOR_LEAK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MultiquantError {
    #[error("an alternative needs at least two outcomes, got {0}")]
    TooFewOutcomes(usize),
    #[error("outcome labels must be distinct (`{0}` repeats)")]
    DuplicateOutcome(String),
    #[error("truth vector has length {found}, alternative has {expected} outcomes")]
    LengthMismatch { expected: usize, found: usize },
    #[error("truth vector is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("outcome index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("sector {sector} exceeds cutoff {cutoff}")]
    SectorExceedsCutoff { sector: u32, cutoff: u32 },
    #[error("relative frequencies need a nonempty sector")]
    EmptySector,
    #[error("state leaks {leak:e} probability outside sector {sector}")]
    SectorLeak { sector: u32, leak: f64 },
    #[error("a tower needs at least one lift")]
    EmptyTower,
    #[error("operation needs a {0} space")]
    WrongStatistics(&'static str),
    #[error(transparent)]
    Fock(#[from] FockError),
}

/// The `n` mutually exclusive answers to a question.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alternative {
    labels: Vec<String>,
}

impl Alternative {
    pub fn new(labels: Vec<String>) -> Result<Self, MultiquantError> {
        if labels.len() < 2 {
            return Err(MultiquantError::TooFewOutcomes(labels.len()));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(MultiquantError::DuplicateOutcome(l.clone()));
            }
        }
        Ok(Alternative { labels })
    }

    /// Outcomes named `a1 .. an`.
    pub fn with_size(n: usize) -> Result<Self, MultiquantError> {
        Self::new((1..=n).map(|k| format!("a{k}")).collect())
    }

    pub fn binary() -> Self {
        Self::with_size(2).expect("two outcomes")
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// Anything with a finite, ordered basis that can serve as the mode set of
/// the next quantization level.
pub trait FiniteBasis {
    fn basis_labels(&self) -> Vec<ModeLabel>;
}

impl FiniteBasis for Alternative {
    fn basis_labels(&self) -> Vec<ModeLabel> {
        self.labels.iter().map(|l| ModeLabel::named(l)).collect()
    }
}

/// One mode per basis state, labelled by its occupation vector.
impl FiniteBasis for FockSpace {
    fn basis_labels(&self) -> Vec<ModeLabel> {
        self.basis()
            .iter()
            .map(|occ| ModeLabel::new(occ.iter().map(|&n| Index::Int(n as i64)).collect()))
            .collect()
    }
}

impl FiniteBasis for Arc<FockSpace> {
    fn basis_labels(&self) -> Vec<ModeLabel> {
        self.as_ref().basis_labels()
    }
}

/// Normalized complex amplitudes over an alternative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruthVector {
    alternative: Alternative,
    psi: Vec<Complex64>,
}

impl TruthVector {
    pub fn new(alternative: Alternative, psi: Vec<Complex64>) -> Result<Self, MultiquantError> {
        if psi.len() != alternative.n() {
            return Err(MultiquantError::LengthMismatch { expected: alternative.n(), found: psi.len() });
        }
        let norm = psi.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > TRUTH_NORM_TOLERANCE {
            return Err(MultiquantError::NotNormalized(norm));
        }
        Ok(TruthVector { alternative, psi })
    }

    /// Uniformly distributed on the unit sphere (normalized complex Gaussian).
    pub fn random<R: Rng>(alternative: Alternative, rng: &mut R) -> Self {
        let raw: Vec<Complex64> = (0..alternative.n())
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = raw.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        let psi = raw.into_iter().map(|z| z / norm).collect();
        TruthVector { alternative, psi }
    }

    pub fn alternative(&self) -> &Alternative {
        &self.alternative
    }

    pub fn psi(&self) -> &[Complex64] {
        &self.psi
    }

    pub fn n(&self) -> usize {
        self.psi.len()
    }
}

/// `p_k = |psi_k|^2` for the 1-based outcome index `k`.
pub fn probability(state: &TruthVector, k: usize) -> Result<f64, MultiquantError> {
    if k == 0 || k > state.n() {
        return Err(MultiquantError::IndexOutOfRange { index: k, n: state.n() });
    }
    Ok(state.psi[k - 1].norm_sqr())
}
