//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p qtower --test acceptance`. Every tolerance and
//! runtime budget is pinned below.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use qtower::fields::{photon_number_statistics, run_contrast, ContrastConfig};
use qtower::fock::{coherent_state, materialize, species_ladder, FockMode, FockSpace, FockStatistics, SparseOperator};
use qtower::multiquant::{
    eq11_check, tower_report, Alternative, CheckConfig, Eq11Config, LiftStatistics, QuantizationTower,
};
use qtower::opalg::random::{random_expr, SymbolPool};
use qtower::opalg::{
    expand_green, inversions, is_normal_ordered, normal_order, parse_expr, rewrite_once, vacuum_expectation,
    Coefficient, Kind, ModeLabel, OperatorExpr, Species, Statistics, StatisticsConfig, Term,
};
use qtower::urtheory::{ur_tower_demo, GreenParaboseSet, UrTowerConfig};

const CCR_TOL: f64 = 1e-12;
const BACKEND_TOL: f64 = 1e-10;
const EQ11_TOL: f64 = 1e-10;
const PHOTON_HERMITICITY_TOL: f64 = 1e-12;
const DIRAC_DEFECT_MIN: f64 = 0.1;
const COHERENT_TOL: f64 = 1e-6;
const TRILINEAR_TOL: f64 = 1e-10;
const PAIRING_TOL: f64 = 1e-12;

const CORPUS: &str = include_str!("data/corpus.dsl");

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn anti(x: &SparseOperator, y: &SparseOperator) -> SparseOperator {
    x.anticommutator(y).unwrap()
}

/// CAR on 3 momenta x 2 spins x 2 species, CCR below the Bose cutoff.
fn criterion_1() -> Outcome {
    let mut modes = Vec::new();
    for species in [Species::B, Species::D] {
        for p in 1..=3 {
            for s in 1..=2 {
                modes.push(FockMode { species, label: ModeLabel::new(vec![p.into(), s.into()]) });
            }
        }
    }
    let space = FockSpace::with_modes(modes.clone(), FockStatistics::Fermi, 4096).map_err(|e| e.to_string())?;
    let ops: Vec<(SparseOperator, SparseOperator)> = modes
        .iter()
        .map(|m| {
            let a = species_ladder(&space, m.species, &m.label, Kind::Annihilate).unwrap();
            let c = species_ladder(&space, m.species, &m.label, Kind::Create).unwrap();
            (a, c)
        })
        .collect();
    let id = SparseOperator::identity(&space);
    for (i, (ai, ci)) in ops.iter().enumerate() {
        for (j, (aj, cj)) in ops.iter().enumerate() {
            let mixed = anti(ai, cj);
            let expected = if i == j { &id } else { &SparseOperator::zeros(&space) };
            check(mixed == *expected, || format!("{{b_{i}, b_{j}^+}} not exact"))?;
            check(anti(ai, aj).is_zero(), || format!("{{b_{i}, b_{j}}} != 0"))?;
            check(anti(ci, cj).is_zero(), || format!("{{b_{i}^+, b_{j}^+}} != 0"))?;
        }
    }

    let mut worst: f64 = 0.0;
    for (n_modes, cutoff) in [(2usize, 3u32), (3, 4), (1, 6)] {
        let labels = (1..=n_modes as i64).map(ModeLabel::int).collect();
        let bose = FockSpace::build(labels, FockStatistics::Bose { cutoff }).map_err(|e| e.to_string())?;
        let id = SparseOperator::identity(&bose);
        for i in 1..=n_modes as i64 {
            for j in 1..=n_modes as i64 {
                let (li, lj) = (ModeLabel::int(i), ModeLabel::int(j));
                let ai = species_ladder(&bose, Species::A, &li, Kind::Annihilate).unwrap();
                let aj = species_ladder(&bose, Species::A, &lj, Kind::Annihilate).unwrap();
                let cj = species_ladder(&bose, Species::A, &lj, Kind::Create).unwrap();
                let mut comm = ai.commutator(&cj).unwrap();
                if i == j {
                    comm = comm.sub(&id).unwrap();
                }
                worst = worst.max(comm.max_abs_below(cutoff - 1));
                worst = worst.max(ai.commutator(&aj).unwrap().max_abs_below(cutoff - 1));
            }
        }
    }
    check(worst <= CCR_TOL, || format!("CCR residual {worst:e} > {CCR_TOL:e}"))?;
    Ok(format!("CAR exact on {} modes (dim {}); CCR residual {worst:.1e} <= {CCR_TOL:e}", modes.len(), space.dim()))
}

struct Backend {
    name: &'static str,
    pool: SymbolPool,
    space: Arc<FockSpace>,
    stats: StatisticsConfig,
}

fn backends() -> Vec<Backend> {
    let labels = || vec![ModeLabel::int(1), ModeLabel::int(2), ModeLabel::named("k")];
    let fermi_modes = [Species::B, Species::D]
        .into_iter()
        .flat_map(|species| labels().into_iter().map(move |label| FockMode { species, label }))
        .collect();
    vec![
        Backend {
            name: "fermi",
            pool: SymbolPool::new(&[Species::B, Species::D], labels()),
            space: FockSpace::with_modes(fermi_modes, FockStatistics::Fermi, 4096).unwrap(),
            stats: StatisticsConfig::default(),
        },
        Backend {
            name: "bose",
            pool: SymbolPool::new(&[Species::A], labels()),
            space: FockSpace::build(labels(), FockStatistics::Bose { cutoff: 6 }).unwrap(),
            stats: StatisticsConfig::default(),
        },
        Backend {
            name: "parabose(2)",
            pool: SymbolPool::new(&[Species::U], vec![ModeLabel::int(1), ModeLabel::int(2)]).with_green(2),
            space: FockSpace::build(
                vec![ModeLabel::int(1), ModeLabel::int(2)],
                FockStatistics::Parabose { order: 2, cutoff: 6 },
            )
            .unwrap(),
            stats: StatisticsConfig::default().with(Species::U, Statistics::Parabose(2)),
        },
    ]
}

/// Symbolic vacuum value against the numeric (0,0) matrix element.
fn criterion_2() -> Outcome {
    const PER_BACKEND: usize = 200;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for b in backends() {
        for _ in 0..PER_BACKEND {
            let e = random_expr(&mut rng, &b.pool, 3, 6);
            let sym = vacuum_expectation(&e, &b.stats).map_err(|err| format!("{}: {err} on {e}", b.name))?;
            let num = materialize(&e, &b.space).map_err(|err| format!("{}: {err} on {e}", b.name))?.get(0, 0);
            let d = (sym.to_c64() - num).norm();
            check(d <= BACKEND_TOL, || format!("{}: {e}: symbolic {} vs numeric {num}", b.name, sym))?;
            worst = worst.max(d);
            count += 1;
        }
    }
    Ok(format!("{count} expressions (<= 6 factors); max |symbolic - numeric| = {worst:.1e} <= {BACKEND_TOL:e}"))
}

fn criterion_3() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    for modes in 2..=4 {
        for sector in 1..=6 {
            let r = eq11_check(Eq11Config { modes, cutoff: 6, sector, draws: 200, seed: 11 })
                .map_err(|e| e.to_string())?;
            check(r.max_deviation <= EQ11_TOL, || {
                format!("modes {modes} sector {sector}: deviation {:e}", r.max_deviation)
            })?;
            worst = worst.max(r.max_deviation);
            runs += 1;
        }
    }
    Ok(format!("{runs} (modes, sector) runs x 200 draws; max |E(f_k) - |psi_k|^2| = {worst:.1e} <= {EQ11_TOL:e}"))
}

fn criterion_4() -> Outcome {
    let cfg = ContrastConfig { off_shell_probe: Some([2.0, 0.0, 0.0, 1.0]), ..ContrastConfig::default() };
    let r = run_contrast(&cfg).map_err(|e| e.to_string())?;
    check(r.hermiticity_defect_photon_symbolic == 0.0, || {
        format!("symbolic photon defect {}", r.hermiticity_defect_photon_symbolic)
    })?;
    check(r.hermiticity_defect_photon <= PHOTON_HERMITICITY_TOL, || {
        format!("numeric photon defect {:e}", r.hermiticity_defect_photon)
    })?;
    check(r.hermiticity_defect_dirac > DIRAC_DEFECT_MIN, || format!("dirac defect {}", r.hermiticity_defect_dirac))?;
    check(r.charge_commutator_norm == 0.0, || format!("[Q, H] norm {}", r.charge_commutator_norm))?;
    check(r.photon_number_field_commutator_norm > 0.0, || "[N, A] vanished".into())?;
    check(r.on_shell_current_max_abs == 0.0, || format!("on-shell current {}", r.on_shell_current_max_abs))?;
    let probe = r.off_shell_probe.as_ref().ok_or("no off-shell probe in report")?;
    check(probe.coefficient.iter().any(|&c| c != 0.0), || "off-shell current vanished".into())?;
    Ok(format!(
        "A defect {} (sym) / {:.1e} (num); psi defect {:.3}; [Q,H] = {}; ||[N,A]|| = {:.3}; on-shell j = 0; off-shell j = {:?}",
        r.hermiticity_defect_photon_symbolic,
        r.hermiticity_defect_photon,
        r.hermiticity_defect_dirac,
        r.charge_commutator_norm,
        r.photon_number_field_commutator_norm,
        probe.coefficient
    ))
}

fn criterion_5() -> Outcome {
    let space = FockSpace::build(vec![ModeLabel::int(1)], FockStatistics::Bose { cutoff: 20 }).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for alpha in [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.3, 0.0),
        Complex64::new(0.5, -0.5),
        Complex64::new(0.0, 0.8),
        Complex64::new(1.0, 0.0),
        Complex64::from_polar(1.0, 2.0),
    ] {
        let state = coherent_state(&space, &ModeLabel::int(1), alpha).map_err(|e| e.to_string())?;
        let s = photon_number_statistics(&state).map_err(|e| e.to_string())?;
        let target = alpha.norm_sqr();
        let d = (s.mean - target).abs().max((s.variance - target).abs());
        check(d <= COHERENT_TOL, || format!("alpha {alpha}: mean {} variance {}", s.mean, s.variance))?;
        worst = worst.max(d);
    }
    Ok(format!("N_max = 20, |alpha| <= 1: mean and variance within {worst:.1e} of |alpha|^2 (tol {COHERENT_TOL:e})"))
}

fn criterion_6() -> Outcome {
    let one = GreenParaboseSet::new(1, 2, 4, 4096).map_err(|e| e.to_string())?;
    let reduction = one.bose_reduction_defect().map_err(|e| e.to_string())?;
    check(reduction == 0.0, || format!("p = 1 differs from Bose by {reduction:e}"))?;
    for p in 1..=3u32 {
        let set = GreenParaboseSet::new(p, 1, 3, 4096).map_err(|e| e.to_string())?;
        let pairing = set.vacuum_pairing(1).map_err(|e| e.to_string())?;
        check((pairing - p as f64).abs() <= PAIRING_TOL, || format!("p = {p}: <0|A A+|0> = {pairing}"))?;
    }
    let set = GreenParaboseSet::new(2, 2, 3, 4096).map_err(|e| e.to_string())?;
    let tri = set.trilinear_residual().map_err(|e| e.to_string())?;
    check(tri <= TRILINEAR_TOL, || format!("trilinear residual {tri:e}"))?;
    Ok(format!("p = 1 equals Bose exactly; <0|A A+|0> = p for p = 1..3; trilinear residual {tri:.1e} <= {TRILINEAR_TOL:e}"))
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn expected_dim(prev: usize, stats: LiftStatistics) -> usize {
    match stats {
        LiftStatistics::Fermi => 1usize << prev,
        LiftStatistics::Bose { cutoff } => binomial(prev as u64 + cutoff as u64, cutoff as u64) as usize,
    }
}

/// Rewrites a sum with a random choice of term at each step.
fn random_strategy<C: Coefficient>(
    e: &OperatorExpr<C>,
    stats: &StatisticsConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(OperatorExpr<C>, usize), String> {
    const STEP_LIMIT: usize = 200_000;
    let mut pending: Vec<Term<C>> = e.terms().to_vec();
    let mut done = Vec::new();
    let mut steps = 0;
    while !pending.is_empty() {
        let t = pending.swap_remove(rng.gen_range(0..pending.len()));
        match rewrite_once(&t, stats).map_err(|err| err.to_string())? {
            None => done.push(t),
            Some(next) => {
                for n in &next {
                    let smaller = n.factors.len() < t.factors.len()
                        || (n.factors.len() == t.factors.len() && inversions(&n.factors) < inversions(&t.factors));
                    if !smaller {
                        return Err(format!("rewrite of {t} did not reduce the measure"));
                    }
                }
                pending.extend(next);
            }
        }
        steps += 1;
        if steps > STEP_LIMIT {
            return Err(format!("no termination within {STEP_LIMIT} steps on {e}"));
        }
    }
    let ordered = OperatorExpr::from_terms(done);
    Ok((normal_order(&ordered, stats).map_err(|err| err.to_string())?, steps))
}

fn criterion_7() -> Outcome {
    use LiftStatistics::{Bose, Fermi};
    let configs: Vec<(usize, Vec<LiftStatistics>)> = vec![
        (2, vec![Fermi, Bose { cutoff: 2 }]),
        (2, vec![Fermi, Fermi]),
        (3, vec![Bose { cutoff: 2 }]),
        (2, vec![Bose { cutoff: 3 }, Fermi]),
        (2, vec![Bose { cutoff: 1 }, Bose { cutoff: 1 }, Bose { cutoff: 1 }]),
        (4, vec![Bose { cutoff: 4 }]),
        (2, vec![Fermi, Fermi, Bose { cutoff: 1 }]),
    ];
    for (n, lifts) in &configs {
        let tower = QuantizationTower::build(Alternative::with_size(*n).unwrap(), lifts, 4096).map_err(|e| e.to_string())?;
        let mut expected = vec![*n];
        for l in lifts {
            expected.push(expected_dim(*expected.last().unwrap(), *l));
        }
        check(tower.dims() == expected, || format!("{lifts:?}: dims {:?}, expected {expected:?}", tower.dims()))?;
    }

    const EXPRESSIONS: usize = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut total_steps = 0;
    let all = backends();
    for i in 0..EXPRESSIONS {
        let b = &all[i % all.len()];
        let e = random_expr(&mut rng, &b.pool, 3, 8);
        let direct = normal_order(&e, &b.stats).map_err(|err| err.to_string())?;
        check(is_normal_ordered(&direct), || format!("{e} -> {direct} not normal ordered"))?;
        check(normal_order(&direct, &b.stats).unwrap() == direct, || format!("{e}: not idempotent"))?;
        let (other, steps) = random_strategy(&e, &b.stats, &mut rng)?;
        check(other == direct, || format!("{e}: {direct} vs {other} under another strategy"))?;
        total_steps += steps;

        let x = random_expr(&mut rng, &b.pool, 2, 4);
        let y = random_expr(&mut rng, &b.pool, 2, 4);
        let whole = normal_order(&(&x * &y), &b.stats).unwrap();
        let nx = normal_order(&x, &b.stats).unwrap();
        let ny = normal_order(&y, &b.stats).unwrap();
        let split = normal_order(&(&nx * &ny), &b.stats).unwrap();
        check(whole == split, || format!("({x}) ({y}): {whole} vs {split}"))?;
    }
    Ok(format!(
        "{} tower configurations with exact dimension laws; {EXPRESSIONS} random expressions terminate and agree \
         across strategies and factorizations ({total_steps} rewrite steps)",
        configs.len()
    ))
}

fn schema(name: &str) -> jsonschema::JSONSchema {
    let path = format!("{}/../../schemas/{name}.schema.json", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    let value: Value = serde_json::from_str(&text).unwrap();
    jsonschema::JSONSchema::compile(&value).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn validate(name: &str, value: &Value) -> Result<(), String> {
    let compiled = schema(name);
    let result = compiled.validate(value);
    if let Err(errors) = result {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        return Err(format!("{name}: {}", msgs.join("; ")));
    }
    Ok(())
}

fn reports(seed: u64) -> Result<Vec<(&'static str, Value)>, String> {
    let eq11 = eq11_check(Eq11Config { modes: 3, cutoff: 4, sector: 3, draws: 20, seed }).map_err(|e| e.to_string())?;
    let contrast = run_contrast(&ContrastConfig { seed, off_shell_probe: Some([2.0, 0.0, 0.0, 1.0]), ..Default::default() })
        .map_err(|e| e.to_string())?;
    let tower = QuantizationTower::build(
        Alternative::binary(),
        &[LiftStatistics::Fermi, LiftStatistics::Bose { cutoff: 2 }],
        4096,
    )
    .map_err(|e| e.to_string())?;
    let tower = tower_report(&tower, CheckConfig { seed, ..Default::default() }).map_err(|e| e.to_string())?;
    let mut ur_cfg = UrTowerConfig::default();
    ur_cfg.check.seed = seed;
    let ur = ur_tower_demo(&ur_cfg).map_err(|e| e.to_string())?;
    let parabose = GreenParaboseSet::new(1, 2, 3, 4096).and_then(|s| s.report()).map_err(|e| e.to_string())?;
    let to = |v: Result<Value, serde_json::Error>| v.map_err(|e| e.to_string());
    Ok(vec![
        ("eq11_report", to(serde_json::to_value(eq11))?),
        ("contrast_report", to(serde_json::to_value(contrast))?),
        ("tower_report", to(serde_json::to_value(tower))?),
        ("ur_tower_report", to(serde_json::to_value(ur))?),
        ("parabose_report", to(serde_json::to_value(parabose))?),
    ])
}

fn criterion_8() -> Outcome {
    let mut lines = 0;
    for line in CORPUS.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let e = parse_expr(line).map_err(|err| format!("{line}: {err}"))?;
        let again = parse_expr(&e.to_string()).map_err(|err| format!("{e}: {err}"))?;
        check(again == e, || format!("{line}: reparse of `{e}` gives `{again}`"))?;
        let c = e.canonical();
        check(parse_expr(&c.to_string()).map(|p| p.canonical()) == Ok(c.clone()), || format!("{line}: canonical round-trip"))?;
        lines += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let all = backends();
    const RANDOM: usize = 1000;
    for i in 0..RANDOM {
        let b = &all[i % all.len()];
        let e = random_expr(&mut rng, &b.pool, 4, 6);
        let mut forms = vec![e.clone(), e.canonical()];
        if let Ok(n) = normal_order(&expand_green(&e, Species::U, 2), &b.stats) {
            forms.push(n);
        }
        for f in forms {
            let again = parse_expr(&f.to_string()).map_err(|err| format!("{f}: {err}"))?;
            check(again == f, || format!("`{f}` reparses as `{again}`"))?;
        }
    }

    let first = reports(5)?;
    let second = reports(5)?;
    for ((name, a), (_, b)) in first.iter().zip(&second) {
        validate(name, a)?;
        check(a == b, || format!("{name}: differs between identical seeds"))?;
    }
    let other = reports(6)?;
    check(first[1].1 != other[1].1, || "contrast sample points ignore the seed".into())?;
    Ok(format!(
        "{lines} corpus lines + {RANDOM} random expressions round-trip; {} report kinds validate and repeat bit-for-bit",
        first.len()
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("algebra laws", criterion_1, Duration::from_secs(10)),
        ("backend equivalence", criterion_2, Duration::from_secs(60)),
        ("relative frequencies", criterion_3, Duration::from_secs(60)),
        ("field contrast", criterion_4, Duration::from_secs(30)),
        ("coherent statistics", criterion_5, Duration::from_secs(60)),
        ("parabose", criterion_6, Duration::from_secs(30)),
        ("tower structure", criterion_7, Duration::from_secs(60)),
        ("round-trip", criterion_8, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    let mut out = String::new();
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let result = result.and_then(|msg| {
            if elapsed <= *budget {
                Ok(msg)
            } else {
                Err(format!("{msg}; took {elapsed:.2?}, budget {budget:?}"))
            }
        });
        match result {
            Ok(msg) => {
                let _ = writeln!(out, "criterion {} {name}: PASS ({elapsed:.2?}) {msg}", i + 1);
            }
            Err(msg) => {
                failed += 1;
                let _ = writeln!(out, "criterion {} {name}: FAIL ({elapsed:.2?}) {msg}", i + 1);
            }
        }
    }
    print!("{out}");
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
