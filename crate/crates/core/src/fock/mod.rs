//! Numeric backend: truncated Fock spaces and sparse operator matrices.
//!
//! Serves as the brute-force oracle for [`crate::opalg`] through
//! [`materialize`], and as the substrate for the tower, field and ur modules.

mod ladder;
mod operator;
mod space;
mod state;

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

pub use ladder::{green_ladder, ladder, ladder_at, number_op, species_ladder, species_number_op, total_number};
pub use operator::SparseOperator;
pub use space::{fock_dimension, FockMode, FockSpace, FockStatistics, DEFAULT_MAX_DIM};
pub use state::{coherent_state, StateVector, NORM_TOLERANCE};

use crate::opalg::{Coefficient, LadderSymbol, OperatorExpr};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error("a Fock space needs at least one mode")]
    EmptyModes,
    #[error("Bose cutoff and parabose order must be at least 1")]
    CutoffTooSmall,
    #[error("dimension {dim} exceeds the configured bound {bound}")]
    DimensionOverflow { dim: u128, bound: usize },
    #[error("unknown mode {0}")]
    UnknownMode(String),
    #[error("mode label {0} is ambiguous; name the species")]
    AmbiguousMode(String),
    #[error("duplicate mode {0}")]
    DuplicateMode(String),
    #[error("statistics mismatch: {0}")]
    StatisticsMismatch(String),
    #[error("operands live on different Fock spaces")]
    SpaceMismatch,
    #[error("vector length {found} does not match dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("|alpha|^2 = {alpha_sq} exceeds cutoff/4 for cutoff {cutoff}")]
    AlphaTooLarge { alpha_sq: f64, cutoff: u32 },
}

fn factor_matrix(space: &Arc<FockSpace>, f: &LadderSymbol) -> Result<SparseOperator, FockError> {
    if !space.statistics().admits(f.species) {
        return Err(FockError::StatisticsMismatch(format!("{f} in a {} space", space.statistics())));
    }
    match f.green {
        None => species_ladder(space, f.species, &f.mode, f.kind),
        Some(g) => {
            let m = space.find_mode(f.species, &f.mode).ok_or_else(|| FockError::UnknownMode(f.to_string()))?;
            green_ladder(space, &space.modes()[m].label, g, f.kind)
        }
    }
}

/// Matrix of a symbolic expression on `space`.
///
/// Deltas are evaluated on concrete labels (distinct labels give zero).
/// Component-free parabose factors become the composite operator summed
/// over Green components.
pub fn materialize<C: Coefficient>(expr: &OperatorExpr<C>, space: &Arc<FockSpace>) -> Result<SparseOperator, FockError> {
    let mut cache: HashMap<LadderSymbol, SparseOperator> = HashMap::new();
    let mut total = SparseOperator::zeros(space);
    for term in expr.terms() {
        for f in &term.factors {
            if !cache.contains_key(f) {
                cache.insert(f.clone(), factor_matrix(space, f)?);
            }
        }
        if term.deltas.iter().any(|d| !d.is_trivial()) {
            continue;
        }
        let mut product = SparseOperator::identity(space);
        for f in &term.factors {
            product = product.mul(&cache[f])?;
        }
        total = total.add(&product.scale(term.coeff.to_c64()))?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::opalg::{parse_expr, vacuum_expectation, ModeLabel, Species, StatisticsConfig};

    #[test]
    fn materialize_number_and_identity() {
        let s = FockSpace::build(vec![ModeLabel::named("m")], FockStatistics::Fermi).unwrap();
        let n = materialize(&parse_expr("b+(m) b(m)").unwrap(), &s).unwrap();
        assert_eq!(n, number_op(&s, &ModeLabel::named("m")).unwrap());
        assert_eq!(materialize(&parse_expr("1").unwrap(), &s).unwrap(), SparseOperator::identity(&s));
    }

    #[test]
    fn materialize_matches_vacuum_expectation() {
        let s = FockSpace::build(vec![ModeLabel::named("k")], FockStatistics::Bose { cutoff: 2 }).unwrap();
        let e = parse_expr("a(k) a(k) a+(k) a+(k)").unwrap();
        let m = materialize(&e, &s).unwrap();
        let sym = vacuum_expectation(&e, &StatisticsConfig::default()).unwrap();
        assert_eq!(sym.to_c64(), Complex64::new(2.0, 0.0));
        assert!((m.get(0, 0) - sym.to_c64()).norm() < 1e-12);
    }

    #[test]
    fn materialize_errors() {
        let s = FockSpace::build(vec![ModeLabel::int(1)], FockStatistics::Fermi).unwrap();
        assert!(matches!(materialize(&parse_expr("b(2)").unwrap(), &s), Err(FockError::UnknownMode(_))));
        assert!(matches!(materialize(&parse_expr("a(1)").unwrap(), &s), Err(FockError::StatisticsMismatch(_))));
        let modes = vec![
            FockMode { species: Species::B, label: ModeLabel::int(1) },
            FockMode { species: Species::D, label: ModeLabel::int(1) },
        ];
        let both = FockSpace::with_modes(modes, FockStatistics::Fermi, 16).unwrap();
        let e = materialize(&parse_expr("b(1) d(1) + d(1) b(1)").unwrap(), &both).unwrap();
        assert!(e.is_zero());
    }

    #[test]
    fn materialize_respects_adjoint() {
        let s = FockSpace::build(vec![ModeLabel::int(1), ModeLabel::int(2)], FockStatistics::Bose { cutoff: 3 }).unwrap();
        let e = parse_expr("(1+2i) a+(1) a(2) a(2) - 3i a(1)").unwrap();
        let lhs = materialize(&e.adjoint(), &s).unwrap();
        let rhs = materialize(&e, &s).unwrap().adjoint();
        assert_eq!(lhs.sub(&rhs).unwrap().max_abs(), 0.0);
    }
}
