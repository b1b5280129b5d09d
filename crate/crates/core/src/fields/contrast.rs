use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    charge, dirac_field, field_tensor, hamiltonian, number_field_commutator_norm, photon_field, photon_mode_current,
    probability_current, transverse_pair, DiracModeBasis, FieldOperator, FieldsError, MomentumLattice,
    PhotonModeBasis, Spacetime,
};

/// Dimension bound for contrast runs; operator norms go through dense SVDs.
pub const CONTRAST_MAX_DIM: usize = 256;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ContrastConfig {
    pub momenta: Vec<[f64; 3]>,
    pub mass: f64,
    pub photon_cutoff: u32,
    pub points: usize,
    pub seed: u64,
    /// Off-shell four-momentum whose current coefficient is reported.
    pub off_shell_probe: Option<[f64; 4]>,
    pub max_dim: usize,
}

impl Default for ContrastConfig {
    fn default() -> Self {
        ContrastConfig {
            momenta: vec![[0.0, 0.0, 1.0]],
            mass: 1.0,
            photon_cutoff: 3,
            points: 5,
            seed: 0,
            off_shell_probe: None,
            max_dim: CONTRAST_MAX_DIM,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OffShellProbe {
    pub k: [f64; 4],
    pub epsilon: [f64; 4],
    pub k_squared: f64,
    pub coefficient: [f64; 4],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContrastReport {
    pub seed: u64,
    pub momenta: Vec<[f64; 3]>,
    pub mass: f64,
    pub photon_cutoff: u32,
    pub sample_points: Vec<Spacetime>,
    /// Smallest `||psi_a(x) - psi_a(x)^+||` over components and points.
    pub hermiticity_defect_dirac: f64,
    /// Largest `||A^i(x) - A^i(x)^+||`, numeric.
    pub hermiticity_defect_photon: f64,
    /// Largest coefficient of the normal-ordered `A^i - A^i^+`.
    pub hermiticity_defect_photon_symbolic: f64,
    /// Largest `||j^mu - j^mu^+||` of the normal-ordered current.
    pub current_hermiticity_defect: f64,
    pub charge_commutator_norm: f64,
    /// Smallest over points of the largest `||[N, A^i(x)]||` over components.
    pub photon_number_field_commutator_norm: f64,
    pub on_shell_current_max_abs: f64,
    /// Largest symbolic/numeric mismatch over every field operator built.
    pub symbolic_numeric_max_residual: f64,
    pub off_shell_probe: Option<OffShellProbe>,
}

impl ContrastReport {
    /// Names of the contrast checks that fail at tolerance `tol`.
    pub fn failures(&self, tol: f64) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.hermiticity_defect_dirac <= 0.1 {
            out.push("dirac field hermitian");
        }
        if self.hermiticity_defect_photon_symbolic != 0.0 {
            out.push("photon field symbolic hermiticity");
        }
        if self.hermiticity_defect_photon > 1e-12 {
            out.push("photon field numeric hermiticity");
        }
        if self.current_hermiticity_defect > tol {
            out.push("current hermiticity");
        }
        if self.charge_commutator_norm != 0.0 {
            out.push("charge conservation");
        }
        if self.photon_number_field_commutator_norm <= 0.0 {
            out.push("photon number conserved by field");
        }
        if self.on_shell_current_max_abs != 0.0 {
            out.push("on-shell photon current");
        }
        if self.symbolic_numeric_max_residual > tol {
            out.push("symbolic/numeric agreement");
        }
        if let Some(p) = &self.off_shell_probe {
            if p.coefficient.iter().all(|&v| v == 0.0) {
                out.push("off-shell probe current");
            }
        }
        out
    }
}

fn probe(k: [f64; 4]) -> Result<OffShellProbe, FieldsError> {
    let e = transverse_pair(&[k[1], k[2], k[3]]).map(|p| p[0]).unwrap_or([1.0, 0.0, 0.0]);
    let epsilon = [0.0, e[0], e[1], e[2]];
    match photon_mode_current(&k, &epsilon) {
        Ok(coefficient) => Ok(OffShellProbe { k, epsilon, k_squared: 0.0, coefficient }),
        Err(FieldsError::OffShell { k_squared, coefficient }) => Ok(OffShellProbe { k, epsilon, k_squared, coefficient }),
        Err(e) => Err(e),
    }
}

fn track_residual(acc: &mut f64, ops: &[FieldOperator]) -> Result<(), FieldsError> {
    for op in ops {
        *acc = acc.max(op.residual()?);
    }
    Ok(())
}

/// Dirac versus photon contrast suite at `points` seeded spacetime points.
pub fn run_contrast(config: &ContrastConfig) -> Result<ContrastReport, FieldsError> {
    let dirac = DiracModeBasis::new(MomentumLattice::new(config.momenta.clone(), config.mass)?)?;
    let photon = PhotonModeBasis::new(MomentumLattice::massless(config.momenta.clone())?)?;
    let fermi = dirac.space(config.max_dim)?;
    let bose = photon.space(config.photon_cutoff, config.max_dim)?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let sample_points: Vec<Spacetime> =
        (0..config.points.max(1)).map(|_| std::array::from_fn(|_| rng.gen_range(-2.0..2.0))).collect();

    let mut residual: f64 = 0.0;
    let mut dirac_defect = f64::INFINITY;
    let mut photon_defect: f64 = 0.0;
    let mut photon_defect_sym: f64 = 0.0;
    let mut current_defect: f64 = 0.0;
    let mut number_commutator = f64::INFINITY;
    for x in &sample_points {
        let psi = dirac_field(&dirac, &fermi, x)?;
        track_residual(&mut residual, &psi)?;
        for comp in &psi {
            dirac_defect = dirac_defect.min(comp.hermiticity_defect());
        }
        let j = probability_current(&dirac, &fermi, x)?;
        track_residual(&mut residual, &j)?;
        for comp in &j {
            current_defect = current_defect.max(comp.hermiticity_defect());
        }
        let a = photon_field(&photon, &bose, x)?;
        track_residual(&mut residual, &a)?;
        let mut witness: f64 = 0.0;
        for comp in &a {
            photon_defect = photon_defect.max(comp.hermiticity_defect());
            photon_defect_sym = photon_defect_sym.max(comp.symbolic_hermiticity_defect()?);
            witness = witness.max(number_field_commutator_norm(comp)?);
        }
        number_commutator = number_commutator.min(witness);
        let f = field_tensor(&photon, &bose, x)?;
        let tensor: Vec<FieldOperator> = f.all().cloned().collect();
        track_residual(&mut residual, &tensor)?;
    }

    let q = charge(&dirac, &fermi)?;
    let h = hamiltonian(&dirac, &fermi)?;
    let charge_commutator_norm = q.commutator(&h)?.max_abs();

    let mut on_shell: f64 = 0.0;
    for i in 0..photon.lattice().len() {
        let k = photon.lattice().four_momentum(i);
        for l in 1..=2 {
            let e = photon.polarization(i, l);
            let current = photon_mode_current(&k, &[0.0, e[0], e[1], e[2]])?;
            on_shell = current.iter().fold(on_shell, |m, v| m.max(v.abs()));
        }
    }

    Ok(ContrastReport {
        seed: config.seed,
        momenta: config.momenta.clone(),
        mass: config.mass,
        photon_cutoff: config.photon_cutoff,
        sample_points,
        hermiticity_defect_dirac: dirac_defect,
        hermiticity_defect_photon: photon_defect,
        hermiticity_defect_photon_symbolic: photon_defect_sym,
        current_hermiticity_defect: current_defect,
        charge_commutator_norm,
        photon_number_field_commutator_norm: number_commutator,
        on_shell_current_max_abs: on_shell,
        symbolic_numeric_max_residual: residual,
        off_shell_probe: config.off_shell_probe.map(probe).transpose()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let cfg = ContrastConfig { off_shell_probe: Some([2.0, 0.0, 0.0, 1.0]), ..Default::default() };
        let r = run_contrast(&cfg).unwrap();
        assert_eq!(r.failures(1e-10), Vec::<&str>::new());
        assert_eq!(r.hermiticity_defect_photon_symbolic, 0.0);
        assert_eq!(r.charge_commutator_norm, 0.0);
        assert_eq!(r.on_shell_current_max_abs, 0.0);
        let p = r.off_shell_probe.unwrap();
        assert_eq!(p.k_squared, 3.0);
        assert_eq!(p.coefficient, [0.0, -3.0, 0.0, 0.0]);
    }

    #[test]
    fn deterministic_and_guarded() {
        let cfg = ContrastConfig { points: 2, ..Default::default() };
        assert_eq!(run_contrast(&cfg).unwrap(), run_contrast(&cfg).unwrap());
        let big = ContrastConfig { momenta: vec![[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], ..cfg };
        assert!(matches!(
            run_contrast(&big),
            Err(FieldsError::Fock(crate::fock::FockError::DimensionOverflow { .. }))
        ));
    }
}
