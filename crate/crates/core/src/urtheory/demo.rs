use serde::{Deserialize, Serialize};

use super::{GreenParaboseSet, ParaboseReport, UrError};
use crate::fock::DEFAULT_MAX_DIM;
use crate::multiquant::{tower_report, Alternative, CheckConfig, LiftStatistics, QuantizationTower};

/// Name of tower level `level`, counting the quantized binary alternative as 0.
pub fn level_name(level: usize) -> String {
    match level {
        0 => "ur".into(),
        1 => "particle".into(),
        2 => "quantized field".into(),
        n => format!("level {n}"),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct UrTowerConfig {
    pub lifts: Vec<LiftStatistics>,
    pub parabose_order: u32,
    pub parabose_modes: usize,
    pub parabose_cutoff: u32,
    pub check: CheckConfig,
    pub max_dim: usize,
}

impl Default for UrTowerConfig {
    fn default() -> Self {
        UrTowerConfig {
            lifts: vec![LiftStatistics::Fermi, LiftStatistics::Bose { cutoff: 2 }],
            parabose_order: 2,
            parabose_modes: 2,
            parabose_cutoff: 3,
            check: CheckConfig::default(),
            max_dim: DEFAULT_MAX_DIM,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UrLevel {
    pub name: String,
    pub dim: usize,
    pub statistics: String,
    pub cutoff: Option<u32>,
    pub eq11_max_deviation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UrTowerReport {
    pub seed: u64,
    pub levels: Vec<UrLevel>,
    pub parabose: ParaboseReport,
    pub note: String,
}

/// Quantization tower over the binary alternative with named levels, plus a
/// Green parabose block for the ur operators.
pub fn ur_tower_demo(config: &UrTowerConfig) -> Result<UrTowerReport, UrError> {
    let tower = QuantizationTower::build(Alternative::binary(), &config.lifts, config.max_dim)?;
    let report = tower_report(&tower, config.check)?;
    let levels = report
        .levels
        .into_iter()
        .map(|l| UrLevel {
            name: level_name(l.level),
            dim: l.dim,
            statistics: l.statistics,
            cutoff: l.cutoff,
            eq11_max_deviation: l.eq11_max_deviation,
        })
        .collect();
    let set = GreenParaboseSet::new(config.parabose_order, config.parabose_modes, config.parabose_cutoff, config.max_dim)?;
    Ok(UrTowerReport { seed: config.check.seed, levels, parabose: set.report()?, note: report.note })
}
