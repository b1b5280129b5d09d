//! The ur-alternative: a quantized binary alternative with SU(2) action,
//! embeddings of finite state spaces into ur tensor products, Green parabose
//! ur operators, and the named quantization tower starting from one ur.

mod demo;
mod parabose;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use demo::{level_name, ur_tower_demo, UrLevel, UrTowerConfig, UrTowerReport};
pub use parabose::{GreenParaboseSet, ParaboseReport};

use crate::fock::FockError;
use crate::multiquant::MultiquantError;

/// Tolerance on norms, unitarity and determinants.
pub const UR_TOLERANCE: f64 = 1e-12;

pub type Su2 = [[Complex64; 2]; 2];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UrError {
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("matrix is not unitary (defect {0:e})")]
    NotUnitary(f64),
    #[error("determinant {0} is not 1")]
    NotSpecial(Complex64),
    #[error("{found} amplitudes do not fit {m} urs")]
    BadLength { m: u32, found: usize },
    #[error("need at least {min}, got {found}")]
    TooSmall { min: usize, found: usize },
    #[error("parabose order and mode count must be at least 1")]
    ZeroOrder,
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Multiquant(#[from] MultiquantError),
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

fn check_norm(v: &[Complex64]) -> Result<(), UrError> {
    let n = norm(v);
    if (n - 1.0).abs() > UR_TOLERANCE {
        return Err(UrError::NotNormalized(n));
    }
    Ok(())
}

/// Checks `g^+ g = 1` and `det g = 1` within [`UR_TOLERANCE`].
pub fn validate_su2(g: &Su2) -> Result<(), UrError> {
    let mut defect: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let gg: Complex64 = (0..2).map(|k| g[k][i].conj() * g[k][j]).sum();
            let id = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((gg - id).norm());
        }
    }
    if defect > UR_TOLERANCE {
        return Err(UrError::NotUnitary(defect));
    }
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    if (det - 1.0).norm() > UR_TOLERANCE {
        return Err(UrError::NotSpecial(det));
    }
    Ok(())
}

/// Haar-random SU(2) element from a normalized Gaussian quaternion.
pub fn random_su2<R: Rng>(rng: &mut R) -> Su2 {
    let mut q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    q.iter_mut().for_each(|x| *x /= n);
    let a = Complex64::new(q[0], q[3]);
    let b = Complex64::new(q[2], q[1]);
    [[a, -b.conj()], [b, a.conj()]]
}

pub fn su2_product(g: &Su2, h: &Su2) -> Su2 {
    std::array::from_fn(|i| std::array::from_fn(|j| g[i][0] * h[0][j] + g[i][1] * h[1][j]))
}

/// One ur: a normalized spinor.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UrState {
    spinor: [Complex64; 2],
}

impl UrState {
    pub fn new(spinor: [Complex64; 2]) -> Result<Self, UrError> {
        check_norm(&spinor)?;
        Ok(UrState { spinor })
    }

    pub fn spinor(&self) -> [Complex64; 2] {
        self.spinor
    }
}

/// `m` urs: `2^m` amplitudes, ur 1 being the most significant bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UrTensorState {
    m: u32,
    amplitudes: Vec<Complex64>,
}

impl UrTensorState {
    pub fn new(m: u32, amplitudes: Vec<Complex64>) -> Result<Self, UrError> {
        if m == 0 || m >= usize::BITS || amplitudes.len() != 1usize << m {
            return Err(UrError::BadLength { m, found: amplitudes.len() });
        }
        check_norm(&amplitudes)?;
        Ok(UrTensorState { m, amplitudes })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }
}

impl From<UrState> for UrTensorState {
    fn from(s: UrState) -> Self {
        UrTensorState { m: 1, amplitudes: s.spinor.to_vec() }
    }
}

/// States carrying an SU(2) action.
pub trait Su2Action: Sized {
    fn act_unchecked(&self, g: &Su2) -> Self;
}

impl Su2Action for UrState {
    fn act_unchecked(&self, g: &Su2) -> Self {
        let s = self.spinor;
        UrState { spinor: [g[0][0] * s[0] + g[0][1] * s[1], g[1][0] * s[0] + g[1][1] * s[1]] }
    }
}

impl Su2Action for UrTensorState {
    /// `g` applied to every ur.
    fn act_unchecked(&self, g: &Su2) -> Self {
        let mut amps = self.amplitudes.clone();
        for q in 0..self.m {
            let bit = 1usize << (self.m - 1 - q);
            for i in 0..amps.len() {
                if i & bit == 0 {
                    let (x, y) = (amps[i], amps[i | bit]);
                    amps[i] = g[0][0] * x + g[0][1] * y;
                    amps[i | bit] = g[1][0] * x + g[1][1] * y;
                }
            }
        }
        UrTensorState { m: self.m, amplitudes: amps }
    }
}

/// Applies `g` after validating it is in SU(2).
pub fn su2_act<S: Su2Action>(g: &Su2, state: &S) -> Result<S, UrError> {
    validate_su2(g)?;
    Ok(state.act_unchecked(g))
}

/// Embeds a normalized n-vector into `ceil(log2 n)` urs, padding with zeros.
pub fn embed(state: &[Complex64]) -> Result<UrTensorState, UrError> {
    if state.len() < 2 {
        return Err(UrError::TooSmall { min: 2, found: state.len() });
    }
    check_norm(state)?;
    let m = state.len().next_power_of_two().trailing_zeros();
    let mut amplitudes = state.to_vec();
    amplitudes.resize(1usize << m, Complex64::new(0.0, 0.0));
    Ok(UrTensorState { m, amplitudes })
}
