use clap::Args;
use serde::Serialize;
use serde_json::{json, Value};

use qtower::fields::{run_contrast, ContrastConfig};
use qtower::fock::{materialize, FockMode, FockSpace, FockStatistics, DEFAULT_MAX_DIM};
use qtower::multiquant::{eq11_check, CheckConfig, Eq11Config, LiftStatistics};
use qtower::opalg::{
    expand_green, normal_order_counted, parse_expr, vacuum_expectation, ExactComplex, OperatorExpr, Species,
    Statistics, StatisticsConfig,
};
use qtower::urtheory::{ur_tower_demo, GreenParaboseSet, UrTowerConfig};

use crate::error::CliError;
use crate::settings::Settings;
use crate::{Format, Outcome};

pub struct Context<'a> {
    pub seed: u64,
    pub tolerance: f64,
    pub format: Option<Format>,
    pub settings: &'a Settings,
}

#[derive(Serialize)]
struct Envelope<'a, R: Serialize> {
    command: &'a str,
    seed: u64,
    tolerance: f64,
    passed: bool,
    report: R,
}

fn render<R: Serialize>(ctx: &Context, command: &str, passed: bool, report: R, default: Format) -> Result<Outcome, CliError> {
    let envelope = Envelope { command, seed: ctx.seed, tolerance: ctx.tolerance, passed, report };
    let text = match ctx.format.unwrap_or(default) {
        Format::Json => serde_json::to_string_pretty(&envelope)? + "\n",
        Format::Pretty => pretty(&serde_json::to_value(&envelope)?),
    };
    Ok(Outcome { text, passed })
}

/// `key: value` lines for the envelope and each top-level report field.
fn pretty(envelope: &Value) -> String {
    let mut out = String::new();
    for key in ["command", "seed", "tolerance", "passed"] {
        out += &format!("{key}: {}\n", envelope[key]);
    }
    if let Some(fields) = envelope["report"].as_object() {
        for (k, v) in fields {
            out += &format!("{k}: {v}\n");
        }
    }
    out
}

fn parse_stats(spec: &str) -> Result<(Species, Statistics), CliError> {
    let bad = || CliError::Input(format!("bad statistics `{spec}`; expected e.g. a=bose, b=fermi, u=parabose:2"));
    let (species, kind) = spec.split_once('=').ok_or_else(bad)?;
    let species = Species::from_symbol(species.trim()).ok_or_else(bad)?;
    let stats = match kind.trim().to_ascii_lowercase().as_str() {
        "fermi" => Statistics::Fermi,
        "bose" => Statistics::Bose,
        other => {
            let order = other.strip_prefix("parabose").ok_or_else(bad)?;
            let order = match order.strip_prefix(':') {
                Some(p) => p.parse::<u32>().map_err(|_| bad())?,
                None if order.is_empty() => 1,
                None => return Err(bad()),
            };
            if order == 0 {
                return Err(bad());
            }
            Statistics::Parabose(order)
        }
    };
    Ok((species, stats))
}

#[derive(Args, Debug)]
pub struct NormalOrderArgs {
    /// Expression, e.g. "b(1,1) b+(1,1)"
    expr: Option<String>,
    /// Statistics override, repeatable: a=bose, b=fermi, u=parabose:2
    #[arg(long = "stats", value_name = "SPECIES=KIND")]
    stats: Vec<String>,
    /// Expand parabose `u` factors into Green components first
    #[arg(long)]
    expand_green: bool,
    /// Compare with the matrix representation on a truncated Fock space
    #[arg(long)]
    check_numeric: bool,
    /// Bose/parabose cutoff for the numeric check (default 6)
    #[arg(long)]
    cutoff: Option<u32>,
}

/// Fock statistics hosting every species of `expr`, if there is one.
fn numeric_statistics(expr: &OperatorExpr, stats: &StatisticsConfig, cutoff: u32) -> Result<FockStatistics, CliError> {
    let species: Vec<Species> = {
        let mut s: Vec<_> = expr.symbols().iter().map(|f| f.species).collect();
        s.dedup();
        s
    };
    let candidates: Vec<FockStatistics> = species
        .iter()
        .map(|&sp| match (sp, stats.get(sp)) {
            (Species::B | Species::D, Statistics::Fermi) => Ok(FockStatistics::Fermi),
            (Species::A, Statistics::Bose) => Ok(FockStatistics::Bose { cutoff }),
            (Species::U, Statistics::Parabose(order)) => Ok(FockStatistics::Parabose { order, cutoff }),
            (sp, st) => Err(CliError::Unsupported(format!(
                "numeric check has no Fock representation of `{}` with {st:?} statistics",
                sp.symbol()
            ))),
        })
        .collect::<Result<_, _>>()?;
    match candidates.split_first() {
        Some((first, rest)) if rest.iter().all(|c| c == first) => Ok(*first),
        Some(_) => Err(CliError::Unsupported("numeric check needs a single statistics class".into())),
        None => Ok(FockStatistics::Fermi),
    }
}

fn numeric_check(
    input: &OperatorExpr,
    ordered: &OperatorExpr,
    stats: &StatisticsConfig,
    cutoff: u32,
) -> Result<Value, CliError> {
    if input.symbols().is_empty() {
        return Ok(json!({ "statistics": null, "dim": 1, "block_max_total": null, "residual": 0.0 }));
    }
    let fock = numeric_statistics(input, stats, cutoff)?;
    let mut modes: Vec<FockMode> = Vec::new();
    for f in input.symbols() {
        let m = FockMode { species: f.species, label: f.mode.clone() };
        if !modes.contains(&m) {
            modes.push(m);
        }
    }
    let space = FockSpace::with_modes(modes, fock, DEFAULT_MAX_DIM)?;
    let diff = materialize(input, &space)?.sub(&materialize(ordered, &space)?)?;
    let (residual, block) = match fock {
        FockStatistics::Fermi => (diff.max_abs(), None),
        _ => {
            let block = cutoff.saturating_sub(input.max_factors() as u32);
            (diff.max_abs_below(block), Some(block))
        }
    };
    Ok(json!({ "statistics": fock.to_string(), "dim": space.dim(), "block_max_total": block, "residual": residual }))
}

pub fn normal_order(args: NormalOrderArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let s = ctx.settings;
    let text: String =
        s.pick_opt(args.expr, "expr")?.ok_or_else(|| CliError::Input("missing expression".into()))?;
    let stat_specs: Vec<String> = if args.stats.is_empty() { s.pick(None, "stats", Vec::new())? } else { args.stats };
    let expand = args.expand_green || s.pick(None, "expand-green", false)?;
    let check = args.check_numeric || s.pick(None, "check-numeric", false)?;
    let cutoff: u32 = s.pick(args.cutoff, "cutoff", 6)?;

    let mut stats = StatisticsConfig::default();
    for spec in &stat_specs {
        let (species, st) = parse_stats(spec)?;
        stats = stats.with(species, st);
    }
    let mut expr = parse_expr(&text)?;
    if expand {
        if let Statistics::Parabose(p) = stats.get(Species::U) {
            expr = expand_green(&expr, Species::U, p);
        }
    }
    let (ordered, counts) = normal_order_counted(&expr, &stats)?;
    let vacuum = vacuum_expectation(&expr, &stats)?;
    let numeric = if check { Some(numeric_check(&expr, &ordered, &stats, cutoff)?) } else { None };
    let residual = numeric.as_ref().map(|n| n["residual"].as_f64().unwrap_or(f64::INFINITY));
    let passed = residual.is_none_or(|r| r <= ctx.tolerance);

    let report = json!({
        "input": text,
        "canonical": ordered.to_string(),
        "vacuum_expectation": OperatorExpr::<ExactComplex>::scalar(vacuum).to_string(),
        "swaps": counts.swaps,
        "contractions": counts.contractions,
        "numeric_check": numeric,
    });
    if ctx.format.unwrap_or(Format::Pretty) == Format::Pretty {
        let mut out = format!("{ordered}\n");
        if let Some(r) = residual {
            let verdict = if passed { "<=" } else { ">" };
            out += &format!("numeric residual {r:e} {verdict} {:e}\n", ctx.tolerance);
        }
        return Ok(Outcome { text: out, passed });
    }
    render(ctx, "normal-order", passed, report, Format::Json)
}

#[derive(Args, Debug)]
pub struct Eq11Args {
    /// Number of outcomes (default 2)
    #[arg(long)]
    modes: Option<usize>,
    /// Bose cutoff (default 6)
    #[arg(long)]
    cutoff: Option<u32>,
    /// Particle-number sector n (default 4)
    #[arg(long)]
    sector: Option<u32>,
    /// Random truth vectors (default 200)
    #[arg(long)]
    draws: Option<usize>,
}

pub fn eq11(args: Eq11Args, ctx: &Context) -> Result<Outcome, CliError> {
    let s = ctx.settings;
    let config = Eq11Config {
        modes: s.pick(args.modes, "modes", 2)?,
        cutoff: s.pick(args.cutoff, "cutoff", 6)?,
        sector: s.pick(args.sector, "sector", 4)?,
        draws: s.pick(args.draws, "draws", 200)?,
        seed: ctx.seed,
    };
    let report = eq11_check(config)?;
    let passed = report.max_deviation <= ctx.tolerance && report.max_marginal_deviation <= ctx.tolerance;
    render(ctx, "eq11", passed, report, Format::Json)
}

fn parse_vectors<const N: usize>(text: &str) -> Result<Vec<[f64; N]>, CliError> {
    text.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let v: Vec<f64> = p
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Input(format!("bad vector `{p}`: {e}")))?;
            v.try_into().map_err(|_| CliError::Input(format!("`{p}` needs {N} components")))
        })
        .collect()
}

#[derive(Args, Debug)]
pub struct ContrastArgs {
    /// Momenta as "px,py,pz;..." (default "0,0,1")
    #[arg(long)]
    momenta: Option<String>,
    /// Dirac mass (default 1)
    #[arg(long)]
    mass: Option<f64>,
    /// Photon Bose cutoff (default 3)
    #[arg(long)]
    photon_cutoff: Option<u32>,
    /// Random spacetime sample points (default 5)
    #[arg(long)]
    points: Option<usize>,
    /// Off-shell four-momentum "k0,kx,ky,kz" to probe the free current
    #[arg(long)]
    off_shell: Option<String>,
    /// Dimension bound per Fock space (default 256)
    #[arg(long)]
    max_dim: Option<usize>,
}

pub fn contrast(args: ContrastArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let s = ctx.settings;
    let defaults = ContrastConfig::default();
    let momenta = args.momenta.as_deref().map(parse_vectors::<3>).transpose()?;
    let probe = match args.off_shell.as_deref().map(parse_vectors::<4>).transpose()? {
        Some(v) if v.len() == 1 => Some(v[0]),
        Some(_) => return Err(CliError::Input("--off-shell takes one four-vector".into())),
        None => None,
    };
    let config = ContrastConfig {
        momenta: s.pick(momenta, "momenta", defaults.momenta)?,
        mass: s.pick(args.mass, "mass", defaults.mass)?,
        photon_cutoff: s.pick(args.photon_cutoff, "photon-cutoff", defaults.photon_cutoff)?,
        points: s.pick(args.points, "points", defaults.points)?,
        seed: ctx.seed,
        off_shell_probe: s.pick_opt(probe, "off-shell")?,
        max_dim: s.pick(args.max_dim, "max-dim", defaults.max_dim)?,
    };
    let report = run_contrast(&config)?;
    let failures = report.failures(ctx.tolerance);
    let passed = failures.is_empty();
    let mut value = serde_json::to_value(&report)?;
    value["failures"] = json!(failures);
    render(ctx, "contrast", passed, value, Format::Json)
}

fn parse_lifts(text: &str) -> Result<Vec<LiftStatistics>, CliError> {
    text.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let p = p.trim().to_ascii_lowercase();
            if p == "fermi" {
                return Ok(LiftStatistics::Fermi);
            }
            p.strip_prefix("bose:")
                .and_then(|c| c.parse().ok())
                .map(|cutoff| LiftStatistics::Bose { cutoff })
                .ok_or_else(|| CliError::Input(format!("bad lift `{p}`; expected fermi or bose:N")))
        })
        .collect()
}

#[derive(Args, Debug)]
pub struct TowerArgs {
    /// Statistics of each lift, e.g. "fermi,bose:2" (the default)
    #[arg(long)]
    lifts: Option<String>,
    /// Random truth vectors per level (default 20)
    #[arg(long)]
    draws: Option<usize>,
    /// Largest sector checked on bosonic levels (default 6)
    #[arg(long)]
    max_sector: Option<u32>,
    /// Parabose order of the ur operators (default 2)
    #[arg(long)]
    parabose_order: Option<u32>,
    /// Parabose modes (default 2)
    #[arg(long)]
    parabose_modes: Option<usize>,
    /// Parabose cutoff (default 3)
    #[arg(long)]
    parabose_cutoff: Option<u32>,
    /// Dimension bound per level (default 4096)
    #[arg(long)]
    max_dim: Option<usize>,
}

pub fn tower(args: TowerArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let s = ctx.settings;
    let d = UrTowerConfig::default();
    let lifts = match s.pick_opt::<String>(args.lifts, "lifts")? {
        Some(text) => parse_lifts(&text)?,
        None => d.lifts,
    };
    let config = UrTowerConfig {
        lifts,
        parabose_order: s.pick(args.parabose_order, "parabose-order", d.parabose_order)?,
        parabose_modes: s.pick(args.parabose_modes, "parabose-modes", d.parabose_modes)?,
        parabose_cutoff: s.pick(args.parabose_cutoff, "parabose-cutoff", d.parabose_cutoff)?,
        check: CheckConfig {
            draws: s.pick(args.draws, "draws", d.check.draws)?,
            max_sector: s.pick(args.max_sector, "max-sector", d.check.max_sector)?,
            seed: ctx.seed,
        },
        max_dim: s.pick(args.max_dim, "max-dim", d.max_dim)?,
    };
    let report = ur_tower_demo(&config)?;
    let tol = ctx.tolerance;
    let passed = report.levels.iter().all(|l| l.eq11_max_deviation.is_none_or(|d| d <= tol))
        && report.parabose.trilinear_residual <= tol
        && (report.parabose.vacuum_pairing - report.parabose.p as f64).abs() <= tol;
    render(ctx, "tower", passed, report, Format::Json)
}

#[derive(Args, Debug)]
pub struct ParaboseArgs {
    /// Parabose order p (default 2)
    #[arg(long)]
    order: Option<u32>,
    /// Number of modes (default 2)
    #[arg(long)]
    modes: Option<usize>,
    /// Total-occupation cutoff (default 3)
    #[arg(long)]
    cutoff: Option<u32>,
    /// Dimension bound (default 4096)
    #[arg(long)]
    max_dim: Option<usize>,
}

pub fn parabose(args: ParaboseArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let s = ctx.settings;
    let set = GreenParaboseSet::new(
        s.pick(args.order, "order", 2)?,
        s.pick(args.modes, "modes", 2)?,
        s.pick(args.cutoff, "cutoff", 3)?,
        s.pick(args.max_dim, "max-dim", DEFAULT_MAX_DIM)?,
    )?;
    let report = set.report()?;
    let tol = ctx.tolerance;
    let passed = report.trilinear_residual <= tol
        && (report.vacuum_pairing - report.p as f64).abs() <= tol
        && report.bose_reduction_defect.is_none_or(|d| d <= tol && report.bose_commutator_residual <= tol);
    render(ctx, "parabose", passed, report, Format::Json)
}
