use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{c, dot3, minkowski_dot, FieldOperator, FieldsError, MomentumLattice, Spacetime, SHELL_TOLERANCE};
use crate::fock::{
    species_ladder, total_number, FockMode, FockSpace, FockStatistics, SparseOperator, StateVector,
};
use crate::opalg::{Index, Kind, LadderSymbol, ModeLabel, OperatorExpr, Species, Term};

/// Two transverse polarizations per momentum of a massless lattice.
#[derive(Clone, Debug)]
pub struct PhotonModeBasis {
    lattice: MomentumLattice,
    polarizations: Vec<[[f64; 3]; 2]>,
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = dot3(&v, &v).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Orthonormal pair transverse to `k`: the x axis projected off `k` (the y
/// axis when `k` is along x), then `khat x eps1`. `None` for `k = 0`.
pub fn transverse_pair(k: &[f64; 3]) -> Option<[[f64; 3]; 2]> {
    if dot3(k, k) == 0.0 {
        return None;
    }
    let khat = normalize(*k);
    let mut e1 = None;
    for axis in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]] {
        let along = dot3(&axis, &khat);
        let proj = [axis[0] - along * khat[0], axis[1] - along * khat[1], axis[2] - along * khat[2]];
        if dot3(&proj, &proj) > 1e-12 {
            e1 = Some(normalize(proj));
            break;
        }
    }
    let e1 = e1?;
    Some([e1, cross(&khat, &e1)])
}

impl PhotonModeBasis {
    pub fn new(lattice: MomentumLattice) -> Result<Self, FieldsError> {
        let polarizations = lattice
            .momenta()
            .iter()
            .map(|k| transverse_pair(k).ok_or(FieldsError::ZeroEnergy(*k)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::with_polarizations(lattice, polarizations)
    }

    /// Explicit polarizations, checked for transversality and orthonormality.
    pub fn with_polarizations(lattice: MomentumLattice, polarizations: Vec<[[f64; 3]; 2]>) -> Result<Self, FieldsError> {
        if lattice.mass() != 0.0 {
            return Err(FieldsError::MassivePhoton(lattice.mass()));
        }
        if polarizations.len() != lattice.len() {
            return Err(FieldsError::PolarizationCount { expected: lattice.len(), found: polarizations.len() });
        }
        for (k, [e1, e2]) in lattice.momenta().iter().zip(&polarizations) {
            let khat = normalize(*k);
            let ok = dot3(e1, &khat).abs() <= SHELL_TOLERANCE
                && dot3(e2, &khat).abs() <= SHELL_TOLERANCE
                && dot3(e1, e2).abs() <= SHELL_TOLERANCE
                && (dot3(e1, e1) - 1.0).abs() <= SHELL_TOLERANCE
                && (dot3(e2, e2) - 1.0).abs() <= SHELL_TOLERANCE;
            if !ok {
                return Err(FieldsError::NonTransverse(*k));
            }
        }
        Ok(PhotonModeBasis { lattice, polarizations })
    }

    pub fn lattice(&self) -> &MomentumLattice {
        &self.lattice
    }

    /// Polarization `lambda` (1 or 2) of momentum `i`.
    pub fn polarization(&self, i: usize, lambda: usize) -> [f64; 3] {
        self.polarizations[i][lambda - 1]
    }

    /// Mode label `(i+1, lambda)`.
    pub fn label(&self, i: usize, lambda: usize) -> ModeLabel {
        ModeLabel::new(vec![Index::Int(i as i64 + 1), Index::Int(lambda as i64)])
    }

    fn modes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.lattice.len()).flat_map(|i| (1..=2).map(move |l| (i, l)))
    }

    /// Bose space over all `(k, lambda)` modes, truncated at total occupation `cutoff`.
    pub fn space(&self, cutoff: u32, max_dim: usize) -> Result<Arc<FockSpace>, FieldsError> {
        let modes = self.modes().map(|(i, l)| FockMode { species: Species::A, label: self.label(i, l) }).collect();
        Ok(FockSpace::with_modes(modes, FockStatistics::Bose { cutoff }, max_dim)?)
    }

    /// `exp(-i k.x) / sqrt(2 k0)` for momentum `i`.
    pub fn mode_function(&self, i: usize, x: &Spacetime) -> Complex64 {
        Complex64::from_polar(1.0 / (2.0 * self.lattice.energies()[i]).sqrt(), -self.lattice.phase(i, x))
    }
}

fn require_bose(space: &Arc<FockSpace>) -> Result<(), FieldsError> {
    match space.statistics() {
        FockStatistics::Bose { .. } => Ok(()),
        _ => Err(FieldsError::WrongStatistics("Bose")),
    }
}

/// `sum_modes (z a + conj(z) a+)`; Hermitian by construction in both forms.
fn hermitian_sum(space: &Arc<FockSpace>, coeffs: &[(ModeLabel, Complex64)]) -> Result<FieldOperator, FieldsError> {
    let mut terms = Vec::with_capacity(2 * coeffs.len());
    let mut numeric = SparseOperator::zeros(space);
    for (label, z) in coeffs {
        if *z == c(0.0, 0.0) {
            continue;
        }
        let a = species_ladder(space, Species::A, label, Kind::Annihilate)?;
        let a_dag = species_ladder(space, Species::A, label, Kind::Create)?;
        terms.push(Term::new(*z, vec![], vec![LadderSymbol::annihilate(Species::A, label.clone())]));
        terms.push(Term::new(z.conj(), vec![], vec![LadderSymbol::create(Species::A, label.clone())]));
        numeric = numeric.add(&a.scale(*z))?.add(&a_dag.scale(z.conj()))?;
    }
    Ok(FieldOperator::new(OperatorExpr::from_terms(terms), numeric))
}

fn spatial_field(
    basis: &PhotonModeBasis,
    space: &Arc<FockSpace>,
    x: &Spacetime,
    factor: impl Fn(usize) -> Complex64,
) -> Result<[FieldOperator; 3], FieldsError> {
    require_bose(space)?;
    let mut out = Vec::with_capacity(3);
    for j in 0..3 {
        let coeffs: Vec<_> = basis
            .modes()
            .map(|(i, l)| (basis.label(i, l), basis.mode_function(i, x) * factor(i) * basis.polarization(i, l)[j]))
            .collect();
        out.push(hermitian_sum(space, &coeffs)?);
    }
    Ok(out.try_into().expect("three components"))
}

/// Spatial components `A^1..A^3` of the radiation-gauge potential at `x`.
pub fn photon_field(basis: &PhotonModeBasis, space: &Arc<FockSpace>, x: &Spacetime) -> Result<[FieldOperator; 3], FieldsError> {
    spatial_field(basis, space, x, |_| c(1.0, 0.0))
}

/// `E = -dA/dt`.
pub fn electric_field(basis: &PhotonModeBasis, space: &Arc<FockSpace>, x: &Spacetime) -> Result<[FieldOperator; 3], FieldsError> {
    let energies = basis.lattice.energies().to_vec();
    spatial_field(basis, space, x, move |i| c(0.0, energies[i]))
}

/// `F^{mu nu}` with `E^i = F^{i0}` and `B^1 = -F^{23}` (cyclic).
#[derive(Clone, Debug)]
pub struct FieldTensor {
    components: Vec<Vec<FieldOperator>>,
}

impl FieldTensor {
    pub fn get(&self, mu: usize, nu: usize) -> &FieldOperator {
        &self.components[mu][nu]
    }

    /// `E^i` for `i = 1..=3`.
    pub fn electric(&self, i: usize) -> &FieldOperator {
        self.get(i, 0)
    }

    /// `B^i` for `i = 1..=3`.
    pub fn magnetic(&self, i: usize) -> FieldOperator {
        let (j, k) = match i {
            1 => (2, 3),
            2 => (3, 1),
            _ => (1, 2),
        };
        self.get(j, k).scaled(c(-1.0, 0.0))
    }

    pub fn all(&self) -> impl Iterator<Item = &FieldOperator> {
        self.components.iter().flatten()
    }
}

/// `F^{mu nu} = d^mu A^nu - d^nu A^mu`, with `d^mu -> -i k^mu` on each
/// positive-frequency mode. The lower triangle is the exact negation of the upper.
pub fn field_tensor(basis: &PhotonModeBasis, space: &Arc<FockSpace>, x: &Spacetime) -> Result<FieldTensor, FieldsError> {
    require_bose(space)?;
    let mut coeffs: Vec<Vec<Vec<(ModeLabel, Complex64)>>> = vec![vec![Vec::new(); 4]; 4];
    for (i, l) in basis.modes() {
        let k = basis.lattice.four_momentum(i);
        let e = basis.polarization(i, l);
        let eps = [0.0, e[0], e[1], e[2]];
        let f = basis.mode_function(i, x);
        for mu in 0..4 {
            for nu in mu + 1..4 {
                let z = c(0.0, -1.0) * (k[mu] * eps[nu] - k[nu] * eps[mu]) * f;
                coeffs[mu][nu].push((basis.label(i, l), z));
                coeffs[nu][mu].push((basis.label(i, l), -z));
            }
        }
    }
    let components = coeffs
        .iter()
        .map(|row| row.iter().map(|cs| hermitian_sum(space, cs)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FieldTensor { components })
}

/// Per-mode free current `-k^2 eps^nu + k^nu (k.eps)`.
///
/// Exactly zero for on-shell, transverse input. Otherwise the nonzero
/// coefficient is returned inside the error.
pub fn photon_mode_current(k: &[f64; 4], epsilon: &[f64; 4]) -> Result<[f64; 4], FieldsError> {
    let snap = |v: f64| if v.abs() <= SHELL_TOLERANCE { 0.0 } else { v };
    let k2 = snap(minkowski_dot(k, k));
    let ke = snap(minkowski_dot(k, epsilon));
    let coefficient: [f64; 4] = std::array::from_fn(|nu| -k2 * epsilon[nu] + k[nu] * ke + 0.0);
    if k2 != 0.0 {
        return Err(FieldsError::OffShell { k_squared: k2, coefficient });
    }
    if ke != 0.0 {
        return Err(FieldsError::NotTransverse { k_dot_epsilon: ke, coefficient });
    }
    Ok(coefficient)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumberStatistics {
    pub mean: f64,
    pub variance: f64,
}

/// Mean and variance of the total photon number.
pub fn photon_number_statistics(state: &StateVector) -> Result<NumberStatistics, FieldsError> {
    require_bose(state.space())?;
    let n = total_number(state.space());
    Ok(NumberStatistics { mean: state.expectation(&n)?.re, variance: state.variance(&n)? })
}

/// Spectral norm of `[N, X]`; nonzero means `X` changes the photon number.
pub fn number_field_commutator_norm(field: &FieldOperator) -> Result<f64, FieldsError> {
    let n = total_number(field.space());
    Ok(n.commutator(field.numeric())?.operator_norm())
}

/// `(a + a+) / sqrt 2` of one mode.
pub fn quadrature(space: &Arc<FockSpace>, label: &ModeLabel) -> Result<SparseOperator, FieldsError> {
    require_bose(space)?;
    let a = species_ladder(space, Species::A, label, Kind::Annihilate)?;
    let a_dag = species_ladder(space, Species::A, label, Kind::Create)?;
    Ok(a.add(&a_dag)?.scale(c(std::f64::consts::FRAC_1_SQRT_2, 0.0)))
}

/// Eigenvector of the truncated quadrature with eigenvalue closest to zero.
pub fn quadrature_eigenstate(space: &Arc<FockSpace>, label: &ModeLabel) -> Result<StateVector, FieldsError> {
    let q: DMatrix<Complex64> = quadrature(space, label)?.to_dense();
    let eig = q.symmetric_eigen();
    let (col, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .expect("nonempty space");
    let v: Vec<Complex64> = eig.eigenvectors.column(col).iter().copied().collect();
    Ok(StateVector::normalized(space, v)?)
}
