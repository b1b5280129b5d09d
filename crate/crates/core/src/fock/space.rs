use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::FockError;
use crate::opalg::{ModeLabel, Species};

/// Default bound on the number of basis states.
pub const DEFAULT_MAX_DIM: usize = 4096;

static NEXT_SPACE_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FockStatistics {
    Fermi,
    /// Truncated by total occupation.
    Bose { cutoff: u32 },
    /// Green realization: `order` Bose components, truncated by total occupation.
    Parabose { order: u32, cutoff: u32 },
}

impl FockStatistics {
    /// Species a space of this statistics hosts by default.
    pub fn default_species(self) -> Species {
        match self {
            FockStatistics::Fermi => Species::B,
            FockStatistics::Bose { .. } => Species::A,
            FockStatistics::Parabose { .. } => Species::U,
        }
    }

    pub fn admits(self, species: Species) -> bool {
        match self {
            FockStatistics::Fermi => matches!(species, Species::B | Species::D),
            FockStatistics::Bose { .. } => species == Species::A,
            FockStatistics::Parabose { .. } => species == Species::U,
        }
    }

    pub fn cutoff(self) -> Option<u32> {
        match self {
            FockStatistics::Fermi => None,
            FockStatistics::Bose { cutoff } | FockStatistics::Parabose { cutoff, .. } => Some(cutoff),
        }
    }

    fn components(self) -> u32 {
        match self {
            FockStatistics::Parabose { order, .. } => order,
            _ => 1,
        }
    }
}

impl fmt::Display for FockStatistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FockStatistics::Fermi => f.write_str("fermi"),
            FockStatistics::Bose { cutoff } => write!(f, "bose(cutoff={cutoff})"),
            FockStatistics::Parabose { order, cutoff } => write!(f, "parabose(p={order}, cutoff={cutoff})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FockMode {
    pub species: Species,
    pub label: ModeLabel,
}

impl fmt::Display for FockMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.species.symbol(), self.label)
    }
}

/// A truncated occupation-number space over an ordered mode list.
///
/// Internally the space has one occupation slot per mode, or `order` slots
/// per mode for parabose statistics (slot `(g - 1) * modes + j` holds Green
/// component `g` of mode `j`). Basis states are ordered by total occupation
/// and, within equal totals, by descending lexicographic occupation vector;
/// the vacuum is state 0.
///
/// Fermionic signs follow Jordan-Wigner over the mode order: a ladder
/// operator on slot `s` picks up `(-1)^(occupation of slots before s)`.
/// Parabose component `g` picks up `(-1)^(occupation of components < g)`,
/// which makes distinct components anticommute.
#[derive(Debug)]
pub struct FockSpace {
    id: u64,
    modes: Vec<FockMode>,
    statistics: FockStatistics,
    basis: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

/// Number of basis states a space would have, saturating on overflow.
pub fn fock_dimension(slots: usize, statistics: FockStatistics) -> u128 {
    match statistics {
        FockStatistics::Fermi => {
            if slots >= 127 {
                u128::MAX
            } else {
                1u128 << slots
            }
        }
        FockStatistics::Bose { cutoff } | FockStatistics::Parabose { cutoff, .. } => {
            // C(slots + cutoff, cutoff)
            let mut acc: u128 = 1;
            for i in 1..=cutoff as u128 {
                acc = match acc.checked_mul(slots as u128 + i) {
                    Some(v) => v / i,
                    None => return u128::MAX,
                };
            }
            acc
        }
    }
}

impl FockSpace {
    /// Space over `labels` hosting the default species of `statistics`.
    pub fn build(labels: Vec<ModeLabel>, statistics: FockStatistics) -> Result<Arc<Self>, FockError> {
        Self::build_bounded(labels, statistics, DEFAULT_MAX_DIM)
    }

    pub fn build_bounded(
        labels: Vec<ModeLabel>,
        statistics: FockStatistics,
        max_dim: usize,
    ) -> Result<Arc<Self>, FockError> {
        let species = statistics.default_species();
        let modes = labels.into_iter().map(|label| FockMode { species, label }).collect();
        Self::with_modes(modes, statistics, max_dim)
    }

    /// Space over explicit `(species, label)` modes, e.g. both `b` and `d`
    /// modes in one fermionic space.
    pub fn with_modes(modes: Vec<FockMode>, statistics: FockStatistics, max_dim: usize) -> Result<Arc<Self>, FockError> {
        if modes.is_empty() {
            return Err(FockError::EmptyModes);
        }
        match statistics {
            FockStatistics::Bose { cutoff } | FockStatistics::Parabose { cutoff, .. } if cutoff < 1 => {
                return Err(FockError::CutoffTooSmall)
            }
            FockStatistics::Parabose { order: 0, .. } => return Err(FockError::CutoffTooSmall),
            _ => {}
        }
        for (i, m) in modes.iter().enumerate() {
            if !statistics.admits(m.species) {
                return Err(FockError::StatisticsMismatch(format!("{m} in a {statistics} space")));
            }
            if modes[..i].contains(m) {
                return Err(FockError::DuplicateMode(m.to_string()));
            }
        }
        let slots = modes.len() * statistics.components() as usize;
        let dim = fock_dimension(slots, statistics);
        if dim > max_dim as u128 {
            return Err(FockError::DimensionOverflow { dim, bound: max_dim });
        }
        let basis = enumerate_basis(slots, statistics);
        debug_assert_eq!(basis.len() as u128, dim);
        let index = basis.iter().enumerate().map(|(i, occ)| (occ.clone(), i)).collect();
        Ok(Arc::new(FockSpace {
            id: NEXT_SPACE_ID.fetch_add(1, Ordering::Relaxed),
            modes,
            statistics,
            basis,
            index,
        }))
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn modes(&self) -> &[FockMode] {
        &self.modes
    }

    pub fn statistics(&self) -> FockStatistics {
        self.statistics
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn components(&self) -> u32 {
        self.statistics.components()
    }

    pub fn slot_count(&self) -> usize {
        self.modes.len() * self.components() as usize
    }

    /// Slot occupations of basis state `i`.
    pub fn occupations(&self, i: usize) -> &[u32] {
        &self.basis[i]
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn index_of(&self, occupations: &[u32]) -> Option<usize> {
        self.index.get(occupations).copied()
    }

    pub fn total_occupation(&self, i: usize) -> u32 {
        self.basis[i].iter().sum()
    }

    /// Occupation of mode `mode` in basis state `i`, summed over Green components.
    pub fn mode_occupation(&self, i: usize, mode: usize) -> u32 {
        let d = self.modes.len();
        (0..self.components() as usize).map(|g| self.basis[i][g * d + mode]).sum()
    }

    /// Occupation summed per mode, for every mode.
    pub fn mode_occupations(&self, i: usize) -> Vec<u32> {
        (0..self.modes.len()).map(|m| self.mode_occupation(i, m)).collect()
    }

    pub fn find_mode(&self, species: Species, label: &ModeLabel) -> Option<usize> {
        self.modes.iter().position(|m| m.species == species && &m.label == label)
    }

    /// Looks a mode up by label alone; errors if it is absent or ambiguous.
    pub fn find_label(&self, label: &ModeLabel) -> Result<usize, FockError> {
        let mut hits = self.modes.iter().enumerate().filter(|(_, m)| &m.label == label);
        match (hits.next(), hits.next()) {
            (Some((i, _)), None) => Ok(i),
            (None, _) => Err(FockError::UnknownMode(label.to_string())),
            (Some(_), Some(_)) => Err(FockError::AmbiguousMode(label.to_string())),
        }
    }

    pub(crate) fn slot(&self, mode: usize, component: u32) -> usize {
        (component as usize - 1) * self.modes.len() + mode
    }

    /// Slots whose total occupation parity gives the exchange sign of `slot`.
    pub(crate) fn sign_range(&self, slot: usize) -> std::ops::Range<usize> {
        match self.statistics {
            FockStatistics::Fermi => 0..slot,
            FockStatistics::Bose { .. } => 0..0,
            FockStatistics::Parabose { .. } => 0..slot - slot % self.modes.len(),
        }
    }

    pub(crate) fn max_slot_occupation(&self) -> u32 {
        match self.statistics {
            FockStatistics::Fermi => 1,
            FockStatistics::Bose { cutoff } | FockStatistics::Parabose { cutoff, .. } => cutoff,
        }
    }
}

fn enumerate_basis(slots: usize, statistics: FockStatistics) -> Vec<Vec<u32>> {
    let (per_slot, max_total) = match statistics {
        FockStatistics::Fermi => (1, slots as u32),
        FockStatistics::Bose { cutoff } | FockStatistics::Parabose { cutoff, .. } => (cutoff, cutoff),
    };
    let mut out = Vec::new();
    for total in 0..=max_total {
        let mut current = vec![0; slots];
        compositions(&mut current, 0, total, per_slot, &mut out);
    }
    out
}

/// Appends all occupation vectors with the given remaining total, in
/// descending lexicographic order.
fn compositions(current: &mut Vec<u32>, pos: usize, remaining: u32, per_slot: u32, out: &mut Vec<Vec<u32>>) {
    if pos == current.len() {
        if remaining == 0 {
            out.push(current.clone());
        }
        return;
    }
    let rest_capacity = (current.len() - pos - 1) as u64 * per_slot as u64;
    for n in (0..=remaining.min(per_slot)).rev() {
        if (remaining - n) as u64 > rest_capacity {
            continue;
        }
        current[pos] = n;
        compositions(current, pos + 1, remaining - n, per_slot, out);
    }
    current[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: i64) -> Vec<ModeLabel> {
        (1..=n).map(ModeLabel::int).collect()
    }

    #[test]
    fn fermi_two_modes() {
        let s = FockSpace::build(labels(2), FockStatistics::Fermi).unwrap();
        assert_eq!(s.dim(), 4);
        assert_eq!(s.occupations(0), &[0, 0]);
    }

    #[test]
    fn bose_two_modes_graded_lex() {
        let s = FockSpace::build(labels(2), FockStatistics::Bose { cutoff: 2 }).unwrap();
        let expect: Vec<Vec<u32>> = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]];
        assert_eq!(s.basis(), &expect[..]);
    }

    #[test]
    fn bose_single_mode() {
        let s = FockSpace::build(labels(1), FockStatistics::Bose { cutoff: 5 }).unwrap();
        assert_eq!(s.dim(), 6);
    }

    #[test]
    fn dimension_formula_matches_enumeration() {
        for m in 1..=4 {
            for c in 1..=4 {
                let st = FockStatistics::Bose { cutoff: c };
                let s = FockSpace::build(labels(m), st).unwrap();
                assert_eq!(s.dim() as u128, fock_dimension(m as usize, st));
            }
        }
    }

    #[test]
    fn parabose_one_matches_bose() {
        let b = FockSpace::build(labels(2), FockStatistics::Bose { cutoff: 3 }).unwrap();
        let p = FockSpace::build(labels(2), FockStatistics::Parabose { order: 1, cutoff: 3 }).unwrap();
        assert_eq!(b.basis(), p.basis());
    }

    #[test]
    fn errors() {
        assert_eq!(FockSpace::build(vec![], FockStatistics::Fermi).unwrap_err(), FockError::EmptyModes);
        assert_eq!(
            FockSpace::build(labels(1), FockStatistics::Bose { cutoff: 0 }).unwrap_err(),
            FockError::CutoffTooSmall
        );
        assert!(matches!(
            FockSpace::build(labels(13), FockStatistics::Fermi),
            Err(FockError::DimensionOverflow { .. })
        ));
        assert!(matches!(
            FockSpace::build(vec![ModeLabel::int(1), ModeLabel::int(1)], FockStatistics::Fermi),
            Err(FockError::DuplicateMode(_))
        ));
        let photon_in_fermi = vec![FockMode { species: Species::A, label: ModeLabel::int(1) }];
        assert!(matches!(
            FockSpace::with_modes(photon_in_fermi, FockStatistics::Fermi, 16),
            Err(FockError::StatisticsMismatch(_))
        ));
    }
}
