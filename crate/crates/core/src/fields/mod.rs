//! Discretized free Dirac and photon fields on a small momentum lattice.
//!
//! Conventions: metric `(+,-,-,-)`, Dirac representation of the gamma
//! matrices, lattice volume 1. A spacetime point is `[t, x, y, z]`.
//!
//! Every [`FieldOperator`] carries a symbolic form (ladder expression with
//! floating complex coefficients evaluated at one point) and a matrix built
//! directly from Fock ladder operators; the two are compared through
//! [`crate::fock::materialize`].

mod contrast;
mod dirac;
mod photon;

use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

pub use contrast::{run_contrast, ContrastConfig, ContrastReport, OffShellProbe, CONTRAST_MAX_DIM};
pub use dirac::{
    charge, charge_expr, dirac_adjoint, dirac_field, hamiltonian, probability_current, DiracModeBasis,
};
pub use photon::{
    electric_field, field_tensor, number_field_commutator_norm, photon_field, photon_mode_current,
    photon_number_statistics, quadrature, quadrature_eigenstate, transverse_pair, FieldTensor, NumberStatistics,
    PhotonModeBasis,
};

use crate::fock::{materialize, FockError, FockSpace, SparseOperator};
use crate::opalg::{normal_order, Coefficient, OpalgError, OperatorExpr, StatisticsConfig};

/// Agreement required between symbolic and numeric field operators.
pub const FIELD_TOLERANCE: f64 = 1e-10;
/// `k^2` and `k.epsilon` below this are treated as exactly zero.
pub const SHELL_TOLERANCE: f64 = 1e-12;

pub type Spacetime = [f64; 4];
pub type SpinMatrix = [[Complex64; 4]; 4];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldsError {
    #[error("a lattice needs at least one momentum")]
    EmptyLattice,
    #[error("mass must be finite and nonnegative, got {0}")]
    InvalidMass(f64),
    #[error("momentum {0:?} appears twice")]
    DuplicateMomentum([f64; 3]),
    #[error("momentum {0:?} has zero energy")]
    ZeroEnergy([f64; 3]),
    #[error("a Dirac lattice needs positive mass (the E/m measure is undefined at m = 0)")]
    MasslessDirac,
    #[error("a photon lattice must be massless, got mass {0}")]
    MassivePhoton(f64),
    #[error("polarizations of momentum {0:?} are not a transverse orthonormal pair")]
    NonTransverse([f64; 3]),
    #[error("expected polarizations for {expected} momenta, got {found}")]
    PolarizationCount { expected: usize, found: usize },
    #[error("k^2 = {k_squared} is off shell; current coefficient {coefficient:?}")]
    OffShell { k_squared: f64, coefficient: [f64; 4] },
    #[error("k.epsilon = {k_dot_epsilon} breaks the Lorenz condition; current coefficient {coefficient:?}")]
    NotTransverse { k_dot_epsilon: f64, coefficient: [f64; 4] },
    #[error("operation needs a {0} space")]
    WrongStatistics(&'static str),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Opalg(#[from] OpalgError),
}

pub fn minkowski_dot(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `gamma^0 .. gamma^3` in the Dirac representation.
pub fn gamma_matrices() -> [SpinMatrix; 4] {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let g0 = [[o, z, z, z], [z, o, z, z], [z, z, -o, z], [z, z, z, -o]];
    let g1 = [[z, z, z, o], [z, z, o, z], [z, -o, z, z], [-o, z, z, z]];
    let g2 = [[z, z, z, -i], [z, z, i, z], [z, i, z, z], [-i, z, z, z]];
    let g3 = [[z, z, o, z], [z, z, z, -o], [-o, z, z, z], [z, o, z, z]];
    [g0, g1, g2, g3]
}

/// Momenta with their on-shell energies `E = sqrt(p^2 + m^2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumLattice {
    momenta: Vec<[f64; 3]>,
    mass: f64,
    energies: Vec<f64>,
}

impl MomentumLattice {
    pub fn new(momenta: Vec<[f64; 3]>, mass: f64) -> Result<Self, FieldsError> {
        if momenta.is_empty() {
            return Err(FieldsError::EmptyLattice);
        }
        if !(mass.is_finite() && mass >= 0.0) {
            return Err(FieldsError::InvalidMass(mass));
        }
        for (i, p) in momenta.iter().enumerate() {
            if momenta[..i].contains(p) {
                return Err(FieldsError::DuplicateMomentum(*p));
            }
        }
        let energies: Vec<f64> = momenta.iter().map(|p| (dot3(p, p) + mass * mass).sqrt()).collect();
        if let Some(i) = energies.iter().position(|&e| e == 0.0) {
            return Err(FieldsError::ZeroEnergy(momenta[i]));
        }
        Ok(MomentumLattice { momenta, mass, energies })
    }

    pub fn massless(momenta: Vec<[f64; 3]>) -> Result<Self, FieldsError> {
        Self::new(momenta, 0.0)
    }

    pub fn momenta(&self) -> &[[f64; 3]] {
        &self.momenta
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn len(&self) -> usize {
        self.momenta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.momenta.is_empty()
    }

    /// `(E, p)` of momentum `i`.
    pub fn four_momentum(&self, i: usize) -> [f64; 4] {
        let p = self.momenta[i];
        [self.energies[i], p[0], p[1], p[2]]
    }

    /// `p.x` for momentum `i`.
    pub fn phase(&self, i: usize, x: &Spacetime) -> f64 {
        minkowski_dot(&self.four_momentum(i), x)
    }
}

pub(crate) fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// A field operator at one spacetime point, in both representations.
#[derive(Clone, Debug)]
pub struct FieldOperator {
    symbolic: OperatorExpr<Complex64>,
    numeric: SparseOperator,
}

impl FieldOperator {
    pub fn new(symbolic: OperatorExpr<Complex64>, numeric: SparseOperator) -> Self {
        FieldOperator { symbolic, numeric }
    }

    pub fn symbolic(&self) -> &OperatorExpr<Complex64> {
        &self.symbolic
    }

    pub fn numeric(&self) -> &SparseOperator {
        &self.numeric
    }

    pub fn space(&self) -> &Arc<FockSpace> {
        self.numeric.space()
    }

    /// Largest entry of `materialize(symbolic) - numeric`.
    pub fn residual(&self) -> Result<f64, FieldsError> {
        let m = materialize(&self.symbolic, self.numeric.space())?;
        Ok(m.sub(&self.numeric)?.max_abs())
    }

    /// Largest coefficient of the normal-ordered `X - X^+`.
    pub fn symbolic_hermiticity_defect(&self) -> Result<f64, FieldsError> {
        let diff = self.symbolic.clone() - self.symbolic.adjoint();
        let ordered = normal_order(&diff, &StatisticsConfig::default())?;
        Ok(ordered.terms().iter().map(|t| t.coeff.to_c64().norm()).fold(0.0, f64::max))
    }

    /// Spectral norm of `X - X^+`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.numeric.hermiticity_defect()
    }

    pub fn adjoint(&self) -> Self {
        FieldOperator { symbolic: self.symbolic.adjoint(), numeric: self.numeric.adjoint() }
    }

    pub fn scaled(&self, z: Complex64) -> Self {
        FieldOperator { symbolic: self.symbolic.scaled(&z), numeric: self.numeric.scale(z) }
    }
}
