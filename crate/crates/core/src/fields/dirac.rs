use std::sync::Arc;

use num_complex::Complex64;

use super::{c, gamma_matrices, FieldOperator, FieldsError, MomentumLattice, Spacetime};
use crate::fock::{species_ladder, species_number_op, FockMode, FockSpace, FockStatistics, SparseOperator};
use crate::opalg::{
    exact, normal_order, ExactComplex, Kind, LadderSymbol, ModeLabel, OperatorExpr, Species, StatisticsConfig, Term,
};

pub type Spinor = [Complex64; 4];

/// Momentum lattice with the plane-wave spinors `u(p, s)`, `v(p, s)`,
/// normalized to `ubar u = 1`, `vbar v = -1`. Spins are 1 and 2.
#[derive(Clone, Debug)]
pub struct DiracModeBasis {
    lattice: MomentumLattice,
    u: Vec<[Spinor; 2]>,
    v: Vec<[Spinor; 2]>,
}

/// `sigma.p` applied to a two-spinor.
fn sigma_dot(p: &[f64; 3], chi: [Complex64; 2]) -> [Complex64; 2] {
    [
        chi[0] * p[2] + chi[1] * c(p[0], -p[1]),
        chi[0] * c(p[0], p[1]) - chi[1] * p[2],
    ]
}

impl DiracModeBasis {
    pub fn new(lattice: MomentumLattice) -> Result<Self, FieldsError> {
        let m = lattice.mass();
        if m == 0.0 {
            return Err(FieldsError::MasslessDirac);
        }
        let mut u = Vec::with_capacity(lattice.len());
        let mut v = Vec::with_capacity(lattice.len());
        for (p, &e) in lattice.momenta().iter().zip(lattice.energies()) {
            let norm = ((e + m) / (2.0 * m)).sqrt();
            let spin = |s: usize| if s == 0 { [c(1.0, 0.0), c(0.0, 0.0)] } else { [c(0.0, 0.0), c(1.0, 0.0)] };
            let mut us = [[c(0.0, 0.0); 4]; 2];
            let mut vs = [[c(0.0, 0.0); 4]; 2];
            for s in 0..2 {
                let chi = spin(s);
                let lower = sigma_dot(p, chi);
                us[s] = [chi[0] * norm, chi[1] * norm, lower[0] * norm / (e + m), lower[1] * norm / (e + m)];
                vs[s] = [lower[0] * norm / (e + m), lower[1] * norm / (e + m), chi[0] * norm, chi[1] * norm];
            }
            u.push(us);
            v.push(vs);
        }
        Ok(DiracModeBasis { lattice, u, v })
    }

    pub fn lattice(&self) -> &MomentumLattice {
        &self.lattice
    }

    /// Positive-energy spinor; `s` is 1 or 2.
    pub fn u(&self, i: usize, s: usize) -> Spinor {
        self.u[i][s - 1]
    }

    /// Negative-energy spinor; `s` is 1 or 2.
    pub fn v(&self, i: usize, s: usize) -> Spinor {
        self.v[i][s - 1]
    }

    /// Mode label `(i+1, s)` shared by the `b` and `d` modes of momentum `i`.
    pub fn label(&self, i: usize, s: usize) -> ModeLabel {
        ModeLabel::new(vec![crate::opalg::Index::Int(i as i64 + 1), crate::opalg::Index::Int(s as i64)])
    }

    /// Discrete measure `1/sqrt(E/m)` of momentum `i`.
    pub fn weight(&self, i: usize) -> f64 {
        (self.lattice.mass() / self.lattice.energies()[i]).sqrt()
    }

    fn modes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.lattice.len()).flat_map(|i| (1..=2).map(move |s| (i, s)))
    }

    /// Joint Fermi space with `b` and `d` modes for every `(p, s)`.
    pub fn space(&self, max_dim: usize) -> Result<Arc<FockSpace>, FieldsError> {
        let mut modes = Vec::new();
        for species in [Species::B, Species::D] {
            modes.extend(self.modes().map(|(i, s)| FockMode { species, label: self.label(i, s) }));
        }
        Ok(FockSpace::with_modes(modes, FockStatistics::Fermi, max_dim)?)
    }
}

fn require_fermi(space: &Arc<FockSpace>) -> Result<(), FieldsError> {
    match space.statistics() {
        FockStatistics::Fermi => Ok(()),
        _ => Err(FieldsError::WrongStatistics("Fermi")),
    }
}

/// The four spinor components of `psi(x)`.
pub fn dirac_field(basis: &DiracModeBasis, space: &Arc<FockSpace>, x: &Spacetime) -> Result<[FieldOperator; 4], FieldsError> {
    require_fermi(space)?;
    let mut terms: [Vec<Term<Complex64>>; 4] = Default::default();
    let mut numeric: [SparseOperator; 4] = std::array::from_fn(|_| SparseOperator::zeros(space));
    for (i, s) in basis.modes() {
        let label = basis.label(i, s);
        let phase = basis.lattice.phase(i, x);
        let w = basis.weight(i);
        let b = species_ladder(space, Species::B, &label, Kind::Annihilate)?;
        let d_dag = species_ladder(space, Species::D, &label, Kind::Create)?;
        let (u, v) = (basis.u(i, s), basis.v(i, s));
        for alpha in 0..4 {
            let cb = u[alpha] * w * Complex64::from_polar(1.0, -phase);
            let cd = v[alpha] * w * Complex64::from_polar(1.0, phase);
            terms[alpha].push(Term::new(cb, vec![], vec![LadderSymbol::annihilate(Species::B, label.clone())]));
            terms[alpha].push(Term::new(cd, vec![], vec![LadderSymbol::create(Species::D, label.clone())]));
            numeric[alpha] = numeric[alpha].add(&b.scale(cb))?.add(&d_dag.scale(cd))?;
        }
    }
    let mut out = Vec::with_capacity(4);
    for (t, n) in terms.into_iter().zip(numeric) {
        out.push(FieldOperator::new(OperatorExpr::from_terms(t), n));
    }
    Ok(out.try_into().expect("four components"))
}

/// `psibar = psi^+ gamma^0`, component-wise.
pub fn dirac_adjoint(psi: &[FieldOperator; 4]) -> [FieldOperator; 4] {
    let g0 = gamma_matrices()[0];
    std::array::from_fn(|beta| psi[beta].adjoint().scaled(g0[beta][beta]))
}

/// Normal-ordered `psibar gamma^mu psi` at `x`, for `mu = 0..3`.
///
/// The symbolic form is normal ordered by rewriting; the numeric form is the
/// raw matrix product minus its vacuum expectation times the identity.
pub fn probability_current(
    basis: &DiracModeBasis,
    space: &Arc<FockSpace>,
    x: &Spacetime,
) -> Result<[FieldOperator; 4], FieldsError> {
    let psi = dirac_field(basis, space, x)?;
    let bar = dirac_adjoint(&psi);
    let gamma = gamma_matrices();
    let stats = StatisticsConfig::default();
    let mut out = Vec::with_capacity(4);
    for g in &gamma {
        let mut sym = OperatorExpr::<Complex64>::zero();
        let mut num = SparseOperator::zeros(space);
        for alpha in 0..4 {
            for beta in 0..4 {
                let z = g[alpha][beta];
                if z == c(0.0, 0.0) {
                    continue;
                }
                sym = sym + (bar[alpha].symbolic() * psi[beta].symbolic()).scaled(&z);
                num = num.add(&bar[alpha].numeric().mul(psi[beta].numeric())?.scale(z))?;
            }
        }
        let sym = normal_order(&sym, &stats)?.resolve_deltas().without_constant();
        let vacuum = num.get(0, 0);
        let num = num.sub(&SparseOperator::identity(space).scale(vacuum))?;
        out.push(FieldOperator::new(sym, num));
    }
    Ok(out.try_into().expect("four components"))
}

/// `Q = sum (b+ b - d+ d)` over all modes, symbolic.
pub fn charge_expr(basis: &DiracModeBasis) -> OperatorExpr<ExactComplex> {
    let mut terms = Vec::new();
    for (i, s) in basis.modes() {
        let l = basis.label(i, s);
        for (species, sign) in [(Species::B, 1), (Species::D, -1)] {
            let f = vec![LadderSymbol::create(species, l.clone()), LadderSymbol::annihilate(species, l.clone())];
            terms.push(Term::new(exact(sign, 0), vec![], f));
        }
    }
    OperatorExpr::from_terms(terms)
}

/// Matrix of the normal-ordered charge.
pub fn charge(basis: &DiracModeBasis, space: &Arc<FockSpace>) -> Result<SparseOperator, FieldsError> {
    require_fermi(space)?;
    let mut q = SparseOperator::zeros(space);
    for (i, s) in basis.modes() {
        let l = basis.label(i, s);
        q = q.add(&species_number_op(space, Species::B, &l)?)?.sub(&species_number_op(space, Species::D, &l)?)?;
    }
    Ok(q)
}

/// Matrix of `H = sum E (b+ b + d+ d)`.
pub fn hamiltonian(basis: &DiracModeBasis, space: &Arc<FockSpace>) -> Result<SparseOperator, FieldsError> {
    require_fermi(space)?;
    let mut h = SparseOperator::zeros(space);
    for (i, s) in basis.modes() {
        let l = basis.label(i, s);
        let n = species_number_op(space, Species::B, &l)?.add(&species_number_op(space, Species::D, &l)?)?;
        h = h.add(&n.scale(c(basis.lattice.energies()[i], 0.0)))?;
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{StateVector, DEFAULT_MAX_DIM};
    use crate::opalg::{vacuum_expectation, Coefficient};

    fn basis(momenta: Vec<[f64; 3]>) -> DiracModeBasis {
        DiracModeBasis::new(MomentumLattice::new(momenta, 1.0).unwrap()).unwrap()
    }

    fn bar(s: &Spinor) -> Spinor {
        let g0 = gamma_matrices()[0];
        std::array::from_fn(|i| s[i].conj() * g0[i][i])
    }

    fn inner(a: &Spinor, b: &Spinor) -> Complex64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    /// `(gamma^0 E - gamma.p + sign m) s`, from the matrices directly.
    fn dirac_operator(p4: [f64; 4], m: f64, s: &Spinor) -> Spinor {
        let g = gamma_matrices();
        std::array::from_fn(|r| {
            let mut acc = s[r] * m;
            for k in 0..4 {
                acc += g[0][r][k] * s[k] * p4[0];
                for j in 1..4 {
                    acc -= g[j][r][k] * s[k] * p4[j];
                }
            }
            acc
        })
    }

    #[test]
    fn spinors_solve_dirac_equation() {
        let b = basis(vec![[0.0, 0.0, 0.0], [1.0, -2.0, 0.5], [0.0, 3.0, 1.0]]);
        for i in 0..3 {
            let p4 = b.lattice().four_momentum(i);
            for s in 1..=2 {
                let (u, v) = (b.u(i, s), b.v(i, s));
                assert!(dirac_operator(p4, -1.0, &u).iter().all(|z| z.norm() < 1e-12));
                assert!(dirac_operator(p4, 1.0, &v).iter().all(|z| z.norm() < 1e-12));
                assert!((inner(&bar(&u), &u) - 1.0).norm() < 1e-12);
                assert!((inner(&bar(&v), &v) + 1.0).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn massless_rejected() {
        let l = MomentumLattice::massless(vec![[1.0, 0.0, 0.0]]).unwrap();
        assert_eq!(DiracModeBasis::new(l).unwrap_err(), FieldsError::MasslessDirac);
    }

    #[test]
    fn field_is_not_hermitian_and_backends_agree() {
        let b = basis(vec![[0.0, 0.0, 1.0]]);
        let space = b.space(DEFAULT_MAX_DIM).unwrap();
        let x = [0.3, -0.2, 0.7, 1.1];
        let psi = dirac_field(&b, &space, &x).unwrap();
        for comp in &psi {
            assert!(comp.residual().unwrap() <= 1e-10);
        }
        assert!(psi[0].hermiticity_defect() > 0.1);
        let psibar = dirac_adjoint(&psi);
        assert!(psibar[2].residual().unwrap() <= 1e-10);
    }

    #[test]
    fn vacuum_two_point_function() {
        let b = basis(vec![[0.5, 0.0, 1.0]]);
        let space = b.space(DEFAULT_MAX_DIM).unwrap();
        let x = [0.4, 0.1, -0.3, 0.9];
        let y = [-0.2, 0.5, 0.2, 0.0];
        let psi = dirac_field(&b, &space, &x).unwrap();
        let psibar = dirac_adjoint(&dirac_field(&b, &space, &y).unwrap());
        let e = b.lattice().energies()[0];
        let phase = b.lattice().phase(0, &x) - b.lattice().phase(0, &y);
        for alpha in 0..4 {
            for beta in 0..4 {
                let mut oracle = c(0.0, 0.0);
                for s in 1..=2 {
                    let u = b.u(0, s);
                    oracle += u[alpha] * bar(&u)[beta] * (1.0 / e) * Complex64::from_polar(1.0, -phase);
                }
                let product = psi[alpha].symbolic() * psibar[beta].symbolic();
                let sym = vacuum_expectation(&product, &StatisticsConfig::default()).unwrap().to_c64();
                let num = psi[alpha].numeric().mul(psibar[beta].numeric()).unwrap().get(0, 0);
                assert!((sym - oracle).norm() < 1e-10, "{alpha}{beta}: {sym} vs {oracle}");
                assert!((num - oracle).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn current_is_hermitian_with_zero_vacuum_value() {
        let b = basis(vec![[0.0, 1.0, 0.0]]);
        let space = b.space(DEFAULT_MAX_DIM).unwrap();
        let j = probability_current(&b, &space, &[0.2, 0.3, -0.5, 0.1]).unwrap();
        for comp in &j {
            assert!(comp.residual().unwrap() <= 1e-10);
            assert!(comp.hermiticity_defect() <= 1e-10);
            assert!(comp.symbolic_hermiticity_defect().unwrap() <= 1e-10);
            assert!(comp.numeric().get(0, 0).norm() <= 1e-12);
        }
    }

    #[test]
    fn charge_density_number_part() {
        // The momentum-diagonal number terms of j^0 carry weight +1 for b and
        // -1 for d, which is what the spatial integral keeps.
        let b = basis(vec![[0.0, 0.0, 2.0], [1.0, 0.0, 0.0]]);
        let space = b.space(DEFAULT_MAX_DIM).unwrap();
        let j0 = &probability_current(&b, &space, &[1.0, 0.5, 0.5, -0.5]).unwrap()[0];
        let mut seen = 0;
        for t in j0.symbolic().terms() {
            let [f, g] = &t.factors[..] else { panic!("bilinear expected") };
            if f.species != g.species || f.mode.parts()[0] != g.mode.parts()[0] {
                continue;
            }
            let sign = if f.species == Species::B { 1.0 } else { -1.0 };
            let expected = if f.mode == g.mode { sign } else { 0.0 };
            assert!((t.coeff - c(expected, 0.0)).norm() < 1e-12, "{t:?}");
            seen += 1;
        }
        assert!(seen >= 8);
    }

    #[test]
    fn charge_conserved_and_additive() {
        let b = basis(vec![[0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]);
        let space = b.space(DEFAULT_MAX_DIM).unwrap();
        let q = charge(&b, &space).unwrap();
        let h = hamiltonian(&b, &space).unwrap();
        assert!(q.commutator(&h).unwrap().is_zero());
        let q_sym = charge_expr(&b).map_coeffs(|z| z.to_c64());
        let mut h_terms = Vec::new();
        for i in 0..2 {
            for s in 1..=2 {
                for species in [Species::B, Species::D] {
                    let l = b.label(i, s);
                    let f = vec![LadderSymbol::create(species, l.clone()), LadderSymbol::annihilate(species, l)];
                    h_terms.push(Term::new(c(b.lattice().energies()[i], 0.0), vec![], f));
                }
            }
        }
        let h_sym = OperatorExpr::from_terms(h_terms);
        let sym = normal_order(&(&q_sym * &h_sym - &h_sym * &q_sym), &StatisticsConfig::default()).unwrap();
        assert!(sym.resolve_deltas().is_zero());
        for idx in 0..space.dim() {
            let occ = space.occupations(idx);
            let (half_b, half_d) = occ.split_at(occ.len() / 2);
            let expected = half_b.iter().sum::<u32>() as f64 - half_d.iter().sum::<u32>() as f64;
            let state = StateVector::basis_state(&space, idx);
            assert_eq!(state.expectation(&q).unwrap(), c(expected, 0.0));
        }
    }
}
