use std::sync::Arc;

use num_complex::Complex64;

use super::{FockError, FockSpace, FockStatistics, SparseOperator};
use crate::opalg::ModeLabel;

/// Tolerance for the normalization flag.
pub const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct StateVector {
    space: Arc<FockSpace>,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(space: &Arc<FockSpace>, amplitudes: Vec<Complex64>) -> Result<Self, FockError> {
        if amplitudes.len() != space.dim() {
            return Err(FockError::DimensionMismatch { expected: space.dim(), found: amplitudes.len() });
        }
        Ok(StateVector { space: space.clone(), amplitudes })
    }

    /// Rescales to unit norm.
    pub fn normalized(space: &Arc<FockSpace>, amplitudes: Vec<Complex64>) -> Result<Self, FockError> {
        let mut s = Self::new(space, amplitudes)?;
        let n = s.norm();
        if n == 0.0 {
            return Err(FockError::NotNormalized(0.0));
        }
        s.amplitudes.iter_mut().for_each(|a| *a /= n);
        Ok(s)
    }

    pub fn vacuum(space: &Arc<FockSpace>) -> Self {
        Self::basis_state(space, 0)
    }

    pub fn basis_state(space: &Arc<FockSpace>, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); space.dim()];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        StateVector { space: space.clone(), amplitudes }
    }

    /// Basis state with the given slot occupations.
    pub fn occupation_state(space: &Arc<FockSpace>, occupations: &[u32]) -> Result<Self, FockError> {
        let i = space
            .index_of(occupations)
            .ok_or_else(|| FockError::UnknownMode(format!("occupation {occupations:?} not in basis")))?;
        Ok(Self::basis_state(space, i))
    }

    pub fn space(&self) -> &Arc<FockSpace> {
        &self.space
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORM_TOLERANCE
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Self) -> Result<Complex64, FockError> {
        if self.space.id() != other.space.id() {
            return Err(FockError::SpaceMismatch);
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn apply(&self, op: &SparseOperator) -> Result<Self, FockError> {
        if self.space.id() != op.space().id() {
            return Err(FockError::SpaceMismatch);
        }
        Ok(StateVector { space: self.space.clone(), amplitudes: op.apply(&self.amplitudes) })
    }

    /// `<self| op |self>`
    pub fn expectation(&self, op: &SparseOperator) -> Result<Complex64, FockError> {
        self.inner(&self.apply(op)?)
    }

    /// `<op^2> - <op>^2`, real part, for a Hermitian `op`.
    pub fn variance(&self, op: &SparseOperator) -> Result<f64, FockError> {
        let applied = self.apply(op)?;
        let mean = self.inner(&applied)?.re;
        let second = applied.norm().powi(2);
        Ok(second - mean * mean)
    }
}

/// Truncated coherent state `sum_n alpha^n / sqrt(n!) |n>` in one mode of a
/// Bose space, renormalized. Requires `|alpha|^2 <= cutoff / 4`.
pub fn coherent_state(space: &Arc<FockSpace>, mode: &ModeLabel, alpha: Complex64) -> Result<StateVector, FockError> {
    let FockStatistics::Bose { cutoff } = space.statistics() else {
        return Err(FockError::StatisticsMismatch(format!("coherent state in a {} space", space.statistics())));
    };
    if alpha.norm_sqr() > cutoff as f64 / 4.0 {
        return Err(FockError::AlphaTooLarge { alpha_sq: alpha.norm_sqr(), cutoff });
    }
    let m = space.find_label(mode)?;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); space.dim()];
    let mut coeff = Complex64::new(1.0, 0.0);
    let mut occ = vec![0u32; space.slot_count()];
    for n in 0..=cutoff {
        if n > 0 {
            coeff = coeff * alpha / (n as f64).sqrt();
        }
        occ[m] = n;
        let i = space.index_of(&occ).expect("single-mode occupation within cutoff");
        amplitudes[i] = coeff;
    }
    StateVector::normalized(space, amplitudes)
}
