use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::frequency::max_deviation_on;
use super::{Alternative, FiniteBasis, MultiquantError};
use crate::fock::{fock_dimension, FockError, FockSpace, FockStatistics};

/// Statistics of one quantization step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LiftStatistics {
    Fermi,
    Bose { cutoff: u32 },
}

impl LiftStatistics {
    pub fn fock(self) -> FockStatistics {
        match self {
            LiftStatistics::Fermi => FockStatistics::Fermi,
            LiftStatistics::Bose { cutoff } => FockStatistics::Bose { cutoff },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LiftStatistics::Fermi => "fermi",
            LiftStatistics::Bose { .. } => "bose",
        }
    }

    pub fn cutoff(self) -> Option<u32> {
        self.fock().cutoff()
    }
}

impl fmt::Display for LiftStatistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fock())
    }
}

/// Fock space with one mode per basis element of `source`.
///
/// Refuses to build when the result would exceed `max_dim` basis states.
pub fn lift<B: FiniteBasis + ?Sized>(
    source: &B,
    statistics: LiftStatistics,
    max_dim: usize,
) -> Result<Arc<FockSpace>, MultiquantError> {
    let labels = source.basis_labels();
    let dim = fock_dimension(labels.len(), statistics.fock());
    if dim > max_dim as u128 {
        return Err(FockError::DimensionOverflow { dim, bound: max_dim }.into());
    }
    Ok(FockSpace::build_bounded(labels, statistics.fock(), max_dim)?)
}

#[derive(Clone, Debug)]
pub struct TowerLevel {
    pub statistics: LiftStatistics,
    pub space: Arc<FockSpace>,
}

/// Alternative at the bottom, then one Fock space per lift, each built over
/// the basis of the level below.
#[derive(Clone, Debug)]
pub struct QuantizationTower {
    base: Alternative,
    lifts: Vec<TowerLevel>,
}

impl QuantizationTower {
    pub fn build(base: Alternative, lifts: &[LiftStatistics], max_dim: usize) -> Result<Self, MultiquantError> {
        if lifts.is_empty() {
            return Err(MultiquantError::EmptyTower);
        }
        let mut levels: Vec<TowerLevel> = Vec::with_capacity(lifts.len());
        for &statistics in lifts {
            let space = match levels.last() {
                None => lift(&base, statistics, max_dim)?,
                Some(prev) => lift(&prev.space, statistics, max_dim)?,
            };
            levels.push(TowerLevel { statistics, space });
        }
        Ok(QuantizationTower { base, lifts: levels })
    }

    pub fn base(&self) -> &Alternative {
        &self.base
    }

    pub fn lifts(&self) -> &[TowerLevel] {
        &self.lifts
    }

    /// Number of levels, counting the alternative.
    pub fn len(&self) -> usize {
        self.lifts.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dims(&self) -> Vec<usize> {
        std::iter::once(self.base.n()).chain(self.lifts.iter().map(|l| l.space.dim())).collect()
    }
}

/// Settings of the randomized relative-frequency check run at each lift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub draws: usize,
    /// Largest particle-number sector checked on bosonic levels.
    pub max_sector: u32,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { draws: 20, max_sector: 6, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    pub level: usize,
    pub dim: usize,
    pub statistics: String,
    pub cutoff: Option<u32>,
    pub interpretation: String,
    pub eq11_sectors: Vec<u32>,
    pub eq11_max_deviation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TowerReport {
    pub seed: u64,
    pub draws: usize,
    pub levels: Vec<LevelReport>,
    pub note: String,
}

pub const HIGHER_LEVEL_NOTE: &str = "p(f_k) on each level is a probability of the next level up; \
it is reported as a scalar per level and not lifted further";

/// Sectors checked on a level: product states vanish beyond one quantum
/// for fermions.
pub(crate) fn check_sectors(statistics: LiftStatistics, max_sector: u32) -> Vec<u32> {
    match statistics {
        LiftStatistics::Fermi => vec![1],
        LiftStatistics::Bose { cutoff } => (1..=cutoff.min(max_sector)).collect(),
    }
}

/// Per-level dimension, statistics and relative-frequency check.
pub fn tower_report(tower: &QuantizationTower, config: CheckConfig) -> Result<TowerReport, MultiquantError> {
    let mut levels = vec![LevelReport {
        level: 0,
        dim: tower.base.n(),
        statistics: "alternative".into(),
        cutoff: None,
        interpretation: format!("{}-fold alternative; truth vectors give p_k = |psi_k|^2", tower.base.n()),
        eq11_sectors: Vec::new(),
        eq11_max_deviation: None,
    }];
    let mut seeds = ChaCha8Rng::seed_from_u64(config.seed);
    for (i, l) in tower.lifts.iter().enumerate() {
        let level = i + 1;
        let sectors = check_sectors(l.statistics, config.max_sector);
        let (deviation, _) = max_deviation_on(&l.space, &sectors, config.draws, seeds.gen())?;
        levels.push(LevelReport {
            level,
            dim: l.space.dim(),
            statistics: l.statistics.name().into(),
            cutoff: l.statistics.cutoff(),
            interpretation: format!("objects of level {level} are collectives of level {} quanta", level - 1),
            eq11_sectors: sectors,
            eq11_max_deviation: Some(deviation),
        });
    }
    Ok(TowerReport { seed: config.seed, draws: config.draws, levels, note: HIGHER_LEVEL_NOTE.into() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::DEFAULT_MAX_DIM;

    #[test]
    fn lift_dimensions() {
        let alt = Alternative::binary();
        assert_eq!(lift(&alt, LiftStatistics::Fermi, DEFAULT_MAX_DIM).unwrap().dim(), 4);
        assert_eq!(lift(&alt, LiftStatistics::Bose { cutoff: 3 }, DEFAULT_MAX_DIM).unwrap().dim(), 10);
        let t = QuantizationTower::build(alt, &[LiftStatistics::Fermi, LiftStatistics::Fermi], DEFAULT_MAX_DIM).unwrap();
        assert_eq!(t.dims(), vec![2, 4, 16]);
    }

    #[test]
    fn overflow_guard() {
        let alt = Alternative::with_size(13).unwrap();
        let err = lift(&alt, LiftStatistics::Fermi, DEFAULT_MAX_DIM).unwrap_err();
        assert!(matches!(err, MultiquantError::Fock(FockError::DimensionOverflow { .. })));
        let err = QuantizationTower::build(
            Alternative::binary(),
            &[LiftStatistics::Fermi, LiftStatistics::Fermi, LiftStatistics::Fermi, LiftStatistics::Fermi],
            DEFAULT_MAX_DIM,
        )
        .unwrap_err();
        assert!(matches!(err, MultiquantError::Fock(FockError::DimensionOverflow { dim: 65536, .. })));
        assert_eq!(
            QuantizationTower::build(Alternative::binary(), &[], DEFAULT_MAX_DIM).unwrap_err(),
            MultiquantError::EmptyTower
        );
    }

    #[test]
    fn three_level_report() {
        let t = QuantizationTower::build(
            Alternative::binary(),
            &[LiftStatistics::Fermi, LiftStatistics::Bose { cutoff: 4 }],
            DEFAULT_MAX_DIM,
        )
        .unwrap();
        let r = tower_report(&t, CheckConfig::default()).unwrap();
        let dims: Vec<_> = r.levels.iter().map(|l| l.dim).collect();
        assert_eq!(dims, vec![2, 4, 70]);
        assert!(r.levels[1..].iter().all(|l| l.eq11_max_deviation.unwrap() <= 1e-10));
        assert_eq!(r.levels[2].eq11_sectors, vec![1, 2, 3, 4]);
    }

    #[test]
    fn single_lift_has_two_levels() {
        let t = QuantizationTower::build(Alternative::binary(), &[LiftStatistics::Fermi], DEFAULT_MAX_DIM).unwrap();
        assert_eq!(tower_report(&t, CheckConfig::default()).unwrap().levels.len(), 2);
    }
}
