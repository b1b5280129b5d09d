use std::sync::Arc;

use num_complex::Complex64;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Alternative, MultiquantError, TruthVector, SECTOR_LEAK_TOLERANCE};
use crate::fock::{ladder_at, FockSpace, FockStatistics, SparseOperator, StateVector, DEFAULT_MAX_DIM};
use crate::opalg::{Kind, ModeLabel};

/// `(sum_k psi_k c_k^+)^n |0> / sqrt(n!)` for the creators `c_k^+` of `space`.
pub(crate) fn collective_state(space: &Arc<FockSpace>, psi: &[Complex64], n: u32) -> Result<StateVector, MultiquantError> {
    if psi.len() != space.modes().len() {
        return Err(MultiquantError::LengthMismatch { expected: space.modes().len(), found: psi.len() });
    }
    let mut creator = SparseOperator::zeros(space);
    for (k, amp) in psi.iter().enumerate() {
        creator = creator.add(&ladder_at(space, k, Kind::Create)?.scale(*amp))?;
    }
    let mut amplitudes = StateVector::vacuum(space).amplitudes().to_vec();
    for step in 1..=n {
        amplitudes = creator.apply(&amplitudes);
        let s = (step as f64).sqrt();
        amplitudes.iter_mut().for_each(|a| *a /= s);
    }
    Ok(StateVector::new(space, amplitudes)?)
}

/// Normalized bosonic n-particle state in which every quantum carries the
/// truth vector `psi`.
pub fn symmetric_product_state(space: &Arc<FockSpace>, psi: &TruthVector, n: u32) -> Result<StateVector, MultiquantError> {
    let FockStatistics::Bose { cutoff } = space.statistics() else {
        return Err(MultiquantError::WrongStatistics("Bose"));
    };
    if n > cutoff {
        return Err(MultiquantError::SectorExceedsCutoff { sector: n, cutoff });
    }
    collective_state(space, psi.psi(), n)
}

/// Probability that `count` of the `n` quanta occupy the outcome.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyPoint {
    pub count: u32,
    pub probability: f64,
}

/// Distribution of the relative frequency `f_k = n_k / n` of one outcome in
/// the n-particle sector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencySpectrum {
    /// 1-based outcome (mode) index.
    pub outcome: usize,
    pub sector: u32,
    /// One point per `count = 0..=sector`.
    pub support: Vec<FrequencyPoint>,
}

impl FrequencySpectrum {
    pub fn frequency(&self, point: &FrequencyPoint) -> Rational64 {
        Rational64::new(point.count as i64, self.sector as i64)
    }

    /// `E(f_k) = sum_f p(f) f`
    pub fn expectation(&self) -> f64 {
        self.support.iter().map(|p| p.probability * p.count as f64 / self.sector as f64).sum()
    }

    pub fn total_probability(&self) -> f64 {
        self.support.iter().map(|p| p.probability).sum()
    }

    /// `true` when all weight sits on a single frequency.
    pub fn is_point_mass(&self, tol: f64) -> bool {
        self.support.iter().filter(|p| p.probability > tol).count() == 1
    }
}

/// Distribution of `n_k / n` for mode `k` (1-based) in a state supported in
/// the total-occupation-`n` sector.
pub fn frequency_spectrum(state: &StateVector, k: usize, n: u32) -> Result<FrequencySpectrum, MultiquantError> {
    let space = state.space();
    let modes = space.modes().len();
    if k == 0 || k > modes {
        return Err(MultiquantError::IndexOutOfRange { index: k, n: modes });
    }
    if n == 0 {
        return Err(MultiquantError::EmptySector);
    }
    let mut support: Vec<FrequencyPoint> =
        (0..=n).map(|count| FrequencyPoint { count, probability: 0.0 }).collect();
    let mut leak = 0.0;
    for (i, amp) in state.amplitudes().iter().enumerate() {
        let w = amp.norm_sqr();
        if space.total_occupation(i) == n {
            support[space.mode_occupation(i, k - 1) as usize].probability += w;
        } else {
            leak += w;
        }
    }
    if leak > SECTOR_LEAK_TOLERANCE {
        return Err(MultiquantError::SectorLeak { sector: n, leak });
    }
    Ok(FrequencySpectrum { outcome: k, sector: n, support })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eq11Config {
    pub modes: usize,
    pub cutoff: u32,
    pub sector: u32,
    pub draws: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Eq11Report {
    pub modes: usize,
    pub cutoff: u32,
    pub sector: u32,
    pub draws: usize,
    pub seed: u64,
    pub dim: usize,
    /// max over draws and outcomes of `|E(f_k) - |psi_k|^2|`
    pub max_deviation: f64,
    /// max over draws of `|sum_k E(f_k) - 1|`
    pub max_marginal_deviation: f64,
}

/// Per-draw generators derived from one root seed.
pub(crate) fn draw_rngs(seed: u64, draws: usize) -> Vec<ChaCha8Rng> {
    let mut root = ChaCha8Rng::seed_from_u64(seed);
    (0..draws).map(|_| ChaCha8Rng::seed_from_u64(root.gen())).collect()
}

/// Largest deviation of `E(f_k)` from `|psi_k|^2` (and of the marginal sum
/// from one) over random collectives in `sectors` of `space`.
pub(crate) fn max_deviation_on(
    space: &Arc<FockSpace>,
    sectors: &[u32],
    draws: usize,
    seed: u64,
) -> Result<(f64, f64), MultiquantError> {
    let alternative = Alternative::new(space.modes().iter().map(|m| m.label.to_string()).collect())?;
    let mut worst = 0.0f64;
    let mut worst_marginal = 0.0f64;
    for mut rng in draw_rngs(seed, draws) {
        let psi = TruthVector::random(alternative.clone(), &mut rng);
        for &n in sectors {
            let state = collective_state(space, psi.psi(), n)?;
            let mut marginal = 0.0;
            for k in 1..=psi.n() {
                let e = frequency_spectrum(&state, k, n)?.expectation();
                marginal += e;
                worst = worst.max((e - psi.psi()[k - 1].norm_sqr()).abs());
            }
            worst_marginal = worst_marginal.max((marginal - 1.0).abs());
        }
    }
    Ok((worst, worst_marginal))
}

/// Randomized check that relative-frequency expectations in the `sector`
/// product states reproduce `|psi_k|^2`. Sector 0 (the vacuum, no trials)
/// is trivially exact.
pub fn eq11_check(config: Eq11Config) -> Result<Eq11Report, MultiquantError> {
    if config.sector > config.cutoff {
        return Err(MultiquantError::SectorExceedsCutoff { sector: config.sector, cutoff: config.cutoff });
    }
    if config.modes < 2 {
        return Err(MultiquantError::TooFewOutcomes(config.modes));
    }
    let labels = (1..=config.modes as i64).map(ModeLabel::int).collect();
    let space = FockSpace::build_bounded(labels, FockStatistics::Bose { cutoff: config.cutoff }, DEFAULT_MAX_DIM)?;
    let (max_deviation, max_marginal_deviation) = if config.sector == 0 {
        (0.0, 0.0)
    } else {
        max_deviation_on(&space, &[config.sector], config.draws, config.seed)?
    };
    Ok(Eq11Report {
        modes: config.modes,
        cutoff: config.cutoff,
        sector: config.sector,
        draws: config.draws,
        seed: config.seed,
        dim: space.dim(),
        max_deviation,
        max_marginal_deviation,
    })
}
