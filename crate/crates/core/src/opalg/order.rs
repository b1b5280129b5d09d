//! Normal ordering by adjacent-swap rewriting.
//!
//! A term is rewritten at its first inverted adjacent pair `x y` (with respect
//! to the canonical factor order) into `±y x`, plus the contraction
//! `delta(x, y)` when `x` annihilates and `y` creates the same particle. Each
//! swap removes exactly one inversion and each contraction removes two
//! factors, so rewriting terminates.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::coeff::Coefficient;
use super::expr::{accumulate, from_accumulator, DeltaFactor, Kind, LadderSymbol, ModeLabel, OperatorExpr, Species, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Statistics {
    Fermi,
    Bose,
    /// Parabose of the given order, realized through Green components.
    Parabose(u32),
}

/// Statistics per species. Defaults: `b`, `d` Fermi; `a` Bose; `u` Parabose(1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatisticsConfig {
    map: BTreeMap<Species, Statistics>,
}

impl Default for StatisticsConfig {
    fn default() -> Self {
        let map = [
            (Species::B, Statistics::Fermi),
            (Species::D, Statistics::Fermi),
            (Species::A, Statistics::Bose),
            (Species::U, Statistics::Parabose(1)),
        ]
        .into_iter()
        .collect();
        StatisticsConfig { map }
    }
}

impl StatisticsConfig {
    /// Panics if a parabose order is zero.
    pub fn with(mut self, species: Species, stats: Statistics) -> Self {
        assert!(!matches!(stats, Statistics::Parabose(0)), "parabose order must be at least 1");
        self.map.insert(species, stats);
        self
    }

    pub fn get(&self, species: Species) -> Statistics {
        self.map[&species]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpalgError {
    #[error("unsupported parabose pattern at `{factor}`: {reason}")]
    UnsupportedParabose { factor: String, reason: String },
}

/// How a factor behaves under exchange.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Grade {
    Fermion,
    /// Bose component; plain Bose species use component 1.
    Boson { component: u32 },
}

fn grade(f: &LadderSymbol, stats: &StatisticsConfig) -> Result<Grade, OpalgError> {
    let err = |reason: String| OpalgError::UnsupportedParabose { factor: f.to_string(), reason };
    match (stats.get(f.species), f.green) {
        (Statistics::Fermi, None) => Ok(Grade::Fermion),
        (Statistics::Bose, None) => Ok(Grade::Boson { component: 1 }),
        (Statistics::Parabose(1), None) => Ok(Grade::Boson { component: 1 }),
        (Statistics::Parabose(p), None) => Err(err(format!(
            "parabose order {p} requires expansion into Green components (see `expand_green`)"
        ))),
        (Statistics::Parabose(p), Some(g)) if g <= p => Ok(Grade::Boson { component: g }),
        (Statistics::Parabose(p), Some(g)) => Err(err(format!("Green component {g} exceeds order {p}"))),
        (s, Some(_)) => Err(err(format!("Green component on a species with {s:?} statistics"))),
    }
}

/// Exchange rule for the adjacent pair `x y`: `x y = sign * y x + [contraction]`.
fn exchange(x: &LadderSymbol, gx: Grade, y: &LadderSymbol, gy: Grade) -> (bool, bool) {
    let particle_pair = x.species == y.species && x.kind == Kind::Annihilate && y.kind == Kind::Create;
    match (gx, gy) {
        (Grade::Fermion, Grade::Fermion) => (true, particle_pair),
        (Grade::Boson { component: cx }, Grade::Boson { component: cy }) if x.species == y.species => {
            if cx == cy {
                (false, particle_pair)
            } else {
                (true, false)
            }
        }
        _ => (false, false),
    }
}

/// Rewriting state of a term whose factors have been graded.
#[derive(Clone)]
struct Work<C> {
    coeff: C,
    deltas: Vec<DeltaFactor>,
    factors: Vec<(LadderSymbol, Grade)>,
}

enum Step<C> {
    Done(Work<C>),
    Zero,
    Rewritten(Vec<Work<C>>),
}

fn step<C: Coefficient>(w: Work<C>) -> Step<C> {
    for i in 0..w.factors.len().saturating_sub(1) {
        let (x, gx) = &w.factors[i];
        let (y, gy) = &w.factors[i + 1];
        if x == y && *gx == Grade::Fermion {
            return Step::Zero;
        }
        if x <= y {
            continue;
        }
        let (anti, contracts) = exchange(x, *gx, y, *gy);
        let mut out = Vec::with_capacity(2);
        let mut swapped = w.clone();
        swapped.factors.swap(i, i + 1);
        if anti {
            swapped.coeff = swapped.coeff.negated();
        }
        out.push(swapped);
        if contracts {
            let mut contracted = w.clone();
            contracted.deltas.push(DeltaFactor::new(x.mode.clone(), y.mode.clone()));
            contracted.factors.drain(i..i + 2);
            out.push(contracted);
        }
        return Step::Rewritten(out);
    }
    Step::Done(w)
}

/// Substitutes each delta-connected class of labels by its smallest label,
/// then re-sorts the (already normal-ordered) factors within each kind.
/// Returns `None` if the term vanishes, by fermionic nilpotency or by a delta
/// between distinct integer labels.
fn canonicalize<C: Coefficient>(mut w: Work<C>) -> Option<Term<C>> {
    w.deltas.retain(|d| !d.is_trivial());
    if !w.deltas.is_empty() {
        let mut parent: HashMap<ModeLabel, ModeLabel> = HashMap::new();
        fn find(parent: &mut HashMap<ModeLabel, ModeLabel>, x: &ModeLabel) -> ModeLabel {
            let mut root = x.clone();
            while let Some(p) = parent.get(&root) {
                if *p == root {
                    break;
                }
                root = p.clone();
            }
            root
        }
        for d in &w.deltas {
            let (a, b) = d.labels();
            let ra = find(&mut parent, a);
            let rb = find(&mut parent, b);
            if ra != rb {
                let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                parent.insert(hi, lo.clone());
                parent.entry(lo.clone()).or_insert(lo);
            }
        }
        let labels: Vec<ModeLabel> = parent.keys().cloned().collect();
        // Two distinct integer labels in one class make the term vanish.
        let mut concrete: HashMap<ModeLabel, &ModeLabel> = HashMap::new();
        for l in labels.iter().filter(|l| l.is_concrete()) {
            let r = find(&mut parent, l);
            if *concrete.entry(r).or_insert(l) != l {
                return None;
            }
        }
        let mut deltas: Vec<DeltaFactor> = labels
            .iter()
            .filter_map(|l| {
                let r = find(&mut parent, l);
                (r != *l).then(|| DeltaFactor::new(r, l.clone()))
            })
            .collect();
        deltas.sort();
        for (f, _) in &mut w.factors {
            if parent.contains_key(&f.mode) {
                f.mode = find(&mut parent, &f.mode);
            }
        }
        w.deltas = deltas;
        // Bubble sort within kinds: same-kind swaps never contract.
        let n = w.factors.len();
        for pass in 0..n {
            let mut changed = false;
            for i in 0..n.saturating_sub(1 + pass) {
                let (x, gx) = &w.factors[i];
                let (y, gy) = &w.factors[i + 1];
                if x > y {
                    let (anti, _) = exchange(x, *gx, y, *gy);
                    if anti {
                        w.coeff = w.coeff.negated();
                    }
                    w.factors.swap(i, i + 1);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }
    if w.factors.windows(2).any(|p| p[0] == p[1] && p[0].1 == Grade::Fermion) {
        return None;
    }
    Some(Term {
        coeff: w.coeff,
        deltas: w.deltas,
        factors: w.factors.into_iter().map(|(f, _)| f).collect(),
    })
}

fn graded<C: Coefficient>(t: &Term<C>, stats: &StatisticsConfig) -> Result<Work<C>, OpalgError> {
    let factors = t
        .factors
        .iter()
        .map(|f| grade(f, stats).map(|g| (f.clone(), g)))
        .collect::<Result<_, _>>()?;
    Ok(Work { coeff: t.coeff.clone(), deltas: t.deltas.clone(), factors })
}

/// Rewrite statistics of one normal-ordering run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RewriteStats {
    pub swaps: usize,
    pub contractions: usize,
}

/// Brings every term into normal order (creators left of annihilators) and
/// returns the canonical form.
pub fn normal_order<C: Coefficient>(
    expr: &OperatorExpr<C>,
    stats: &StatisticsConfig,
) -> Result<OperatorExpr<C>, OpalgError> {
    normal_order_counted(expr, stats).map(|(e, _)| e)
}

/// [`normal_order`] that also reports how many rewrite steps were applied.
pub fn normal_order_counted<C: Coefficient>(
    expr: &OperatorExpr<C>,
    stats: &StatisticsConfig,
) -> Result<(OperatorExpr<C>, RewriteStats), OpalgError> {
    let mut counts = RewriteStats::default();
    let mut stack = expr.terms().iter().map(|t| graded(t, stats)).collect::<Result<Vec<_>, _>>()?;
    let mut acc = BTreeMap::new();
    while let Some(w) = stack.pop() {
        match step(w) {
            Step::Done(w) => {
                if let Some(t) = canonicalize(w) {
                    accumulate(&mut acc, t);
                }
            }
            Step::Zero => {}
            Step::Rewritten(next) => {
                counts.swaps += 1;
                counts.contractions += next.len() - 1;
                stack.extend(next);
            }
        }
    }
    Ok((from_accumulator(acc), counts))
}

/// Applies a single rewrite step to a term: `None` if the term is already
/// normal ordered, otherwise the terms it rewrites into (empty if it vanishes).
pub fn rewrite_once<C: Coefficient>(
    term: &Term<C>,
    stats: &StatisticsConfig,
) -> Result<Option<Vec<Term<C>>>, OpalgError> {
    let w = graded(term, stats)?;
    let strip = |w: Work<C>| Term {
        coeff: w.coeff,
        deltas: w.deltas,
        factors: w.factors.into_iter().map(|(f, _)| f).collect(),
    };
    Ok(match step(w) {
        Step::Done(_) => None,
        Step::Zero => Some(Vec::new()),
        Step::Rewritten(next) => Some(next.into_iter().map(strip).collect()),
    })
}

/// Number of factor pairs that stand in the wrong canonical order.
pub fn inversions(factors: &[LadderSymbol]) -> usize {
    let mut n = 0;
    for i in 0..factors.len() {
        for j in i + 1..factors.len() {
            if factors[i] > factors[j] {
                n += 1;
            }
        }
    }
    n
}

/// `true` when every term has all creators left of all annihilators.
pub fn is_normal_ordered<C: Coefficient>(expr: &OperatorExpr<C>) -> bool {
    expr.terms().iter().all(|t| t.factors.windows(2).all(|p| p[0].kind <= p[1].kind))
}

/// Vacuum expectation value: the identity coefficient of the normal-ordered
/// expression with deltas between distinct labels set to zero.
pub fn vacuum_expectation<C: Coefficient>(expr: &OperatorExpr<C>, stats: &StatisticsConfig) -> Result<C, OpalgError> {
    Ok(normal_order(expr, stats)?.resolve_deltas().identity_coefficient())
}

/// Replaces every component-free `u` factor by the sum of its `order` Green
/// components, the form required by [`normal_order`] for parabose order > 1.
pub fn expand_green<C: Coefficient>(expr: &OperatorExpr<C>, species: Species, order: u32) -> OperatorExpr<C> {
    let mut out = Vec::new();
    for term in expr.terms() {
        let mut partial: Vec<Vec<LadderSymbol>> = vec![Vec::new()];
        for f in &term.factors {
            if f.species == species && f.green.is_none() {
                partial = partial
                    .into_iter()
                    .flat_map(|prefix| {
                        (1..=order).map(move |g| {
                            let mut p = prefix.clone();
                            p.push(f.clone().with_green(g));
                            p
                        })
                    })
                    .collect();
            } else {
                for p in &mut partial {
                    p.push(f.clone());
                }
            }
        }
        out.extend(partial.into_iter().map(|factors| Term {
            coeff: term.coeff.clone(),
            deltas: term.deltas.clone(),
            factors,
        }));
    }
    OperatorExpr::from_terms(out).canonical()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::{exact, parse_expr};

    fn no(text: &str) -> String {
        normal_order(&parse_expr(text).unwrap(), &StatisticsConfig::default()).unwrap().to_string()
    }

    #[test]
    fn fermion_pair_same_mode() {
        assert_eq!(no("b(m) b+(m)"), "1 - b+(m) b(m)");
    }

    #[test]
    fn boson_pair_distinct_labels() {
        assert_eq!(no("a(k) a+(k')"), "delta(k; k') + a+(k') a(k)");
    }

    #[test]
    fn distinct_integer_labels_do_not_contract() {
        assert_eq!(no("a(1) a+(2)"), "a+(2) a(1)");
        assert_eq!(no("b(1,1) b+(1,2)"), "-b+(1,2) b(1,1)");
        assert_eq!(no("delta(1; k) delta(k; 2) a(1)"), "0");
        assert_eq!(no("delta(1; k) a(k) a+(1)"), "delta(1; k) + delta(1; k) a+(1) a(1)");
    }

    #[test]
    fn fermion_creators_are_nilpotent() {
        assert_eq!(no("b+(m) b+(m)"), "0");
        assert_eq!(no("d(1) b+(2) d(1)"), "0");
    }

    #[test]
    fn electron_and_positron_anticommute() {
        assert_eq!(no("d+(1) b+(1)"), "-b+(1) d+(1)");
        assert_eq!(no("b(1) d+(1)"), "-d+(1) b(1)");
    }

    #[test]
    fn photon_commutes_with_electron() {
        assert_eq!(no("a(1) b+(1)"), "b+(1) a(1)");
    }

    #[test]
    fn vacuum_values() {
        let s = StatisticsConfig::default();
        let v = |t: &str| vacuum_expectation(&parse_expr(t).unwrap(), &s).unwrap();
        assert_eq!(v("b(m) b+(m)"), exact(1, 0));
        assert_eq!(v("a+(k) a(k)"), exact(0, 0));
        assert_eq!(v("a(k) a(k) a+(k) a+(k)"), exact(2, 0));
        assert_eq!(v("a(k) a+(q)"), exact(0, 0));
    }

    #[test]
    fn unexpanded_parabose_is_rejected() {
        let s = StatisticsConfig::default().with(Species::U, Statistics::Parabose(2));
        let e = parse_expr("u(1) u+(1)").unwrap();
        assert!(matches!(normal_order(&e, &s), Err(OpalgError::UnsupportedParabose { .. })));
        let bad = parse_expr("u#3(1)").unwrap();
        assert!(normal_order(&bad, &s).is_err());
        let green_on_fermion = parse_expr("b#1(1)").unwrap();
        assert!(normal_order(&green_on_fermion, &s).is_err());
    }

    #[test]
    fn green_expansion_vacuum_pairing_equals_order() {
        for p in 1..=3 {
            let s = StatisticsConfig::default().with(Species::U, Statistics::Parabose(p));
            let e = expand_green(&parse_expr("u(1) u+(1)").unwrap(), Species::U, p);
            assert_eq!(vacuum_expectation(&e, &s).unwrap(), exact(p as i64, 0));
        }
    }

    #[test]
    fn distinct_green_components_anticommute() {
        let s = StatisticsConfig::default().with(Species::U, Statistics::Parabose(2));
        let e = normal_order(&parse_expr("u#2(1) u#1+(1)").unwrap(), &s).unwrap();
        assert_eq!(e.to_string(), "-u#1+(1) u#2(1)");
    }

    #[test]
    fn delta_substitution_canonicalizes() {
        // a(k) a+(q) a+(k): the contraction produces delta(k; q) a+(k) and
        // delta(k; q) a+(q); both must collapse to the same representative.
        let e = normal_order(&parse_expr("a(k) a+(q) - a(q) a+(k)").unwrap(), &StatisticsConfig::default()).unwrap();
        assert!(e.terms().iter().all(|t| t.deltas.is_empty()), "{e}");
        let f = normal_order(&parse_expr("delta(k; q) a+(q) - delta(q; k) a+(k)").unwrap(), &StatisticsConfig::default()).unwrap();
        assert!(f.is_zero(), "{f}");
    }

    #[test]
    fn rewrite_step_reduces_measure() {
        let t = parse_expr("b(1) b+(2) b+(1)").unwrap().terms()[0].clone();
        let next = rewrite_once(&t, &StatisticsConfig::default()).unwrap().unwrap();
        assert_eq!(next.len(), 2);
        assert_eq!(inversions(&next[0].factors) + 1, inversions(&t.factors));
        assert_eq!(next[1].factors.len() + 2, t.factors.len());
    }
}
