use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::UrError;
use crate::fock::{green_ladder, ladder, FockSpace, FockStatistics, SparseOperator};
use crate::opalg::{Kind, ModeLabel};

/// Green realization of `d` parabose modes of order `p`: `p` Bose components
/// per mode with Klein signs between distinct components, truncated at total
/// occupation `cutoff`.
#[derive(Clone, Debug)]
pub struct GreenParaboseSet {
    order: u32,
    cutoff: u32,
    space: Arc<FockSpace>,
}

impl GreenParaboseSet {
    pub fn new(order: u32, modes: usize, cutoff: u32, max_dim: usize) -> Result<Self, UrError> {
        if order == 0 || modes == 0 {
            return Err(UrError::ZeroOrder);
        }
        let labels = (1..=modes as i64).map(ModeLabel::int).collect();
        let space = FockSpace::build_bounded(labels, FockStatistics::Parabose { order, cutoff }, max_dim)?;
        Ok(GreenParaboseSet { order, cutoff, space })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn modes(&self) -> usize {
        self.space.modes().len()
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn space(&self) -> &Arc<FockSpace> {
        &self.space
    }

    /// `A_r` or `A_r^+` (1-based `r`), summed over Green components.
    pub fn composite(&self, r: usize, kind: Kind) -> Result<SparseOperator, UrError> {
        Ok(ladder(&self.space, &ModeLabel::int(r as i64), kind)?)
    }

    /// Green component `alpha` (1-based) of mode `r`.
    pub fn component(&self, r: usize, alpha: u32, kind: Kind) -> Result<SparseOperator, UrError> {
        Ok(green_ladder(&self.space, &ModeLabel::int(r as i64), alpha, kind)?)
    }

    /// `<0| A_r A_r^+ |0>`, equal to the order `p`.
    pub fn vacuum_pairing(&self, r: usize) -> Result<f64, UrError> {
        let a = self.composite(r, Kind::Annihilate)?;
        let a_dag = self.composite(r, Kind::Create)?;
        Ok(a.mul(&a_dag)?.get(0, 0).re)
    }

    /// Largest entry of `[A_k, {A_l^+, A_m}] - 2 delta_kl A_m` over all
    /// `k, l, m`, on columns with total occupation at most `cutoff - 1`.
    pub fn trilinear_residual(&self) -> Result<f64, UrError> {
        let d = self.modes();
        let ann: Vec<_> = (1..=d).map(|r| self.composite(r, Kind::Annihilate)).collect::<Result<_, _>>()?;
        let cre: Vec<_> = (1..=d).map(|r| self.composite(r, Kind::Create)).collect::<Result<_, _>>()?;
        let block = self.cutoff.saturating_sub(1);
        let mut worst: f64 = 0.0;
        for k in 0..d {
            for l in 0..d {
                for m in 0..d {
                    let inner = cre[l].anticommutator(&ann[m])?;
                    let mut lhs = ann[k].commutator(&inner)?;
                    if k == l {
                        lhs = lhs.sub(&ann[m].scale(2.0.into()))?;
                    }
                    worst = worst.max(lhs.max_abs_below(block));
                }
            }
        }
        Ok(worst)
    }

    /// Largest entry of `[A_k, A_l^+] - delta_kl` on columns below the cutoff.
    /// Zero for `p = 1`; for `p > 1` the bilinear Bose relation fails.
    pub fn bose_commutator_residual(&self) -> Result<f64, UrError> {
        let d = self.modes();
        let block = self.cutoff.saturating_sub(1);
        let mut worst: f64 = 0.0;
        for k in 1..=d {
            for l in 1..=d {
                let mut c = self.composite(k, Kind::Annihilate)?.commutator(&self.composite(l, Kind::Create)?)?;
                if k == l {
                    c = c.sub(&SparseOperator::identity(&self.space))?;
                }
                worst = worst.max(c.max_abs_below(block));
            }
        }
        Ok(worst)
    }

    /// Largest entry difference between the composite operators and plain
    /// Bose ladders on a Bose space of the same modes and cutoff. Only
    /// meaningful for `p = 1`, where both share one basis.
    pub fn bose_reduction_defect(&self) -> Result<f64, UrError> {
        let labels = self.space.modes().iter().map(|m| m.label.clone()).collect();
        let bose = FockSpace::build_bounded(labels, FockStatistics::Bose { cutoff: self.cutoff }, usize::MAX)?;
        if bose.basis() != self.space.basis() {
            return Ok(f64::INFINITY);
        }
        let mut worst: f64 = 0.0;
        for r in 1..=self.modes() {
            for kind in [Kind::Annihilate, Kind::Create] {
                let ours = self.composite(r, kind)?;
                let theirs = ladder(&bose, &ModeLabel::int(r as i64), kind)?;
                let n = ours.dim();
                for row in 0..n {
                    for col in 0..n {
                        worst = worst.max((ours.get(row, col) - theirs.get(row, col)).norm());
                    }
                }
            }
        }
        Ok(worst)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParaboseReport {
    pub p: u32,
    pub modes: usize,
    pub cutoff: u32,
    pub dim: usize,
    pub trilinear_residual: f64,
    /// `<0| A_1 A_1^+ |0>`.
    pub vacuum_pairing: f64,
    pub bose_commutator_residual: f64,
    /// Present for `p = 1` only.
    pub bose_reduction_defect: Option<f64>,
}

impl GreenParaboseSet {
    pub fn report(&self) -> Result<ParaboseReport, UrError> {
        Ok(ParaboseReport {
            p: self.order,
            modes: self.modes(),
            cutoff: self.cutoff,
            dim: self.space.dim(),
            trilinear_residual: self.trilinear_residual()?,
            vacuum_pairing: self.vacuum_pairing(1)?,
            bose_commutator_residual: self.bose_commutator_residual()?,
            bose_reduction_defect: if self.order == 1 { Some(self.bose_reduction_defect()?) } else { None },
        })
    }
}
