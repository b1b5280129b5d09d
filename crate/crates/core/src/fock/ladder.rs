use std::sync::Arc;

use num_complex::Complex64;

use super::{FockError, FockSpace, SparseOperator};
use crate::opalg::{Kind, ModeLabel, Species};

/// Ladder operator on a single occupation slot.
pub(crate) fn slot_ladder(space: &Arc<FockSpace>, slot: usize, kind: Kind) -> SparseOperator {
    let signed = space.sign_range(slot);
    let max = space.max_slot_occupation();
    let mut triplets = Vec::new();
    for col in 0..space.dim() {
        let occ = space.occupations(col);
        let n = occ[slot];
        let (target_n, amp) = match kind {
            Kind::Create if n < max => (n + 1, ((n + 1) as f64).sqrt()),
            Kind::Annihilate if n > 0 => (n - 1, (n as f64).sqrt()),
            _ => continue,
        };
        let mut target = occ.to_vec();
        target[slot] = target_n;
        // Out-of-cutoff targets are absent from the basis and map to zero.
        let Some(row) = space.index_of(&target) else { continue };
        let parity: u32 = occ[signed.clone()].iter().sum();
        let sign = if parity.is_multiple_of(2) { 1.0 } else { -1.0 };
        triplets.push((row, col, Complex64::new(sign * amp, 0.0)));
    }
    SparseOperator::from_triplets(space, triplets)
}

/// Ladder operator of a mode given by label alone.
///
/// For parabose spaces this is the composite operator, the sum of all
/// Green components.
pub fn ladder(space: &Arc<FockSpace>, mode: &ModeLabel, kind: Kind) -> Result<SparseOperator, FockError> {
    let m = space.find_label(mode)?;
    Ok(mode_ladder(space, m, kind))
}

/// Ladder operator of a `(species, label)` mode.
pub fn species_ladder(
    space: &Arc<FockSpace>,
    species: Species,
    mode: &ModeLabel,
    kind: Kind,
) -> Result<SparseOperator, FockError> {
    let m = space
        .find_mode(species, mode)
        .ok_or_else(|| FockError::UnknownMode(format!("{}({mode})", species.symbol())))?;
    Ok(mode_ladder(space, m, kind))
}

/// Ladder operator of Green component `component` (1-based) of a parabose mode.
pub fn green_ladder(
    space: &Arc<FockSpace>,
    mode: &ModeLabel,
    component: u32,
    kind: Kind,
) -> Result<SparseOperator, FockError> {
    let m = space.find_label(mode)?;
    if component < 1 || component > space.components() {
        return Err(FockError::StatisticsMismatch(format!(
            "Green component {component} in a {} space",
            space.statistics()
        )));
    }
    Ok(slot_ladder(space, space.slot(m, component), kind))
}

/// Ladder operator of the mode at position `mode` in the space's mode list.
pub fn ladder_at(space: &Arc<FockSpace>, mode: usize, kind: Kind) -> Result<SparseOperator, FockError> {
    if mode >= space.modes().len() {
        return Err(FockError::UnknownMode(format!("#{mode}")));
    }
    Ok(mode_ladder(space, mode, kind))
}

pub(crate) fn mode_ladder(space: &Arc<FockSpace>, mode: usize, kind: Kind) -> SparseOperator {
    let mut op = slot_ladder(space, space.slot(mode, 1), kind);
    for g in 2..=space.components() {
        op = op.add(&slot_ladder(space, space.slot(mode, g), kind)).expect("same space");
    }
    op
}

/// Occupation number of one mode (summed over Green components).
pub fn number_op(space: &Arc<FockSpace>, mode: &ModeLabel) -> Result<SparseOperator, FockError> {
    let m = space.find_label(mode)?;
    Ok(SparseOperator::diagonal(space, |i| space.mode_occupation(i, m) as f64))
}

pub fn species_number_op(space: &Arc<FockSpace>, species: Species, mode: &ModeLabel) -> Result<SparseOperator, FockError> {
    let m = space
        .find_mode(species, mode)
        .ok_or_else(|| FockError::UnknownMode(format!("{}({mode})", species.symbol())))?;
    Ok(SparseOperator::diagonal(space, |i| space.mode_occupation(i, m) as f64))
}

/// Sum of all occupation numbers.
pub fn total_number(space: &Arc<FockSpace>) -> SparseOperator {
    SparseOperator::diagonal(space, |i| space.total_occupation(i) as f64)
}
