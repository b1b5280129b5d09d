use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::coeff::{Coefficient, ExactComplex};

/// One component of a mode label: a symbolic name or a small integer.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Index {
    Int(i64),
    Name(String),
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Int(n) => write!(f, "{n}"),
            Index::Name(s) => f.write_str(s),
        }
    }
}

impl From<i64> for Index {
    fn from(n: i64) -> Self {
        Index::Int(n)
    }
}

impl From<&str> for Index {
    fn from(s: &str) -> Self {
        Index::Name(s.to_string())
    }
}

/// Label of a single mode, e.g. `(p1, 1)` for momentum `p1` and spin 1.
///
/// The first part plays the role of the mode name, the rest are its indices.
/// Labels compare lexicographically part by part.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModeLabel(Vec<Index>);

impl ModeLabel {
    /// Panics on an empty part list.
    pub fn new(parts: Vec<Index>) -> Self {
        assert!(!parts.is_empty(), "mode label needs at least one part");
        ModeLabel(parts)
    }

    pub fn int(n: i64) -> Self {
        ModeLabel(vec![Index::Int(n)])
    }

    pub fn named(name: &str) -> Self {
        ModeLabel(vec![Index::Name(name.to_string())])
    }

    pub fn parts(&self) -> &[Index] {
        &self.0
    }

    pub fn name(&self) -> &Index {
        &self.0[0]
    }

    /// True when every part is an integer, so equality with another concrete
    /// label is decided.
    pub fn is_concrete(&self) -> bool {
        self.0.iter().all(|p| matches!(p, Index::Int(_)))
    }

    pub fn indices(&self) -> &[Index] {
        &self.0[1..]
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, part) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{part}")?;
        }
        Ok(())
    }
}

/// Builds a [`ModeLabel`] from a list of integers and names.
#[macro_export]
macro_rules! mode {
    ($($part:expr),+ $(,)?) => {
        $crate::opalg::ModeLabel::new(vec![$($crate::opalg::Index::from($part)),+])
    };
}

/// Particle species. The declaration order is the canonical factor order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Species {
    /// electron
    B,
    /// positron
    D,
    /// photon
    A,
    /// ur
    U,
}

impl Species {
    pub const ALL: [Species; 4] = [Species::B, Species::D, Species::A, Species::U];

    pub fn symbol(self) -> char {
        match self {
            Species::B => 'b',
            Species::D => 'd',
            Species::A => 'a',
            Species::U => 'u',
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        match s {
            "b" => Some(Species::B),
            "d" => Some(Species::D),
            "a" => Some(Species::A),
            "u" => Some(Species::U),
            _ => None,
        }
    }
}

/// Creators sort before annihilators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Kind {
    Create,
    Annihilate,
}

impl Kind {
    pub fn flipped(self) -> Self {
        match self {
            Kind::Create => Kind::Annihilate,
            Kind::Annihilate => Kind::Create,
        }
    }
}

/// A single ladder operator.
///
/// `green` selects a Green component of a parabose species (1-based); `None`
/// is the plain operator. The derived ordering is the canonical factor order:
/// kind, then species, then component, then mode.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LadderSymbol {
    pub kind: Kind,
    pub species: Species,
    pub green: Option<u32>,
    pub mode: ModeLabel,
}

impl LadderSymbol {
    pub fn new(species: Species, kind: Kind, mode: ModeLabel) -> Self {
        LadderSymbol { kind, species, green: None, mode }
    }

    pub fn create(species: Species, mode: ModeLabel) -> Self {
        Self::new(species, Kind::Create, mode)
    }

    pub fn annihilate(species: Species, mode: ModeLabel) -> Self {
        Self::new(species, Kind::Annihilate, mode)
    }

    pub fn with_green(mut self, component: u32) -> Self {
        self.green = Some(component);
        self
    }

    pub fn adjoint(&self) -> Self {
        LadderSymbol { kind: self.kind.flipped(), ..self.clone() }
    }
}

impl fmt::Display for LadderSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.species.symbol())?;
        if let Some(g) = self.green {
            write!(f, "#{g}")?;
        }
        if self.kind == Kind::Create {
            f.write_str("+")?;
        }
        write!(f, "({})", self.mode)
    }
}

/// Kronecker delta between two mode labels, stored with the smaller label first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DeltaFactor(ModeLabel, ModeLabel);

impl DeltaFactor {
    pub fn new(x: ModeLabel, y: ModeLabel) -> Self {
        if x <= y {
            DeltaFactor(x, y)
        } else {
            DeltaFactor(y, x)
        }
    }

    pub fn labels(&self) -> (&ModeLabel, &ModeLabel) {
        (&self.0, &self.1)
    }

    pub fn is_trivial(&self) -> bool {
        self.0 == self.1
    }
}

impl fmt::Display for DeltaFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "delta({}; {})", self.0, self.1)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term<C = ExactComplex> {
    pub coeff: C,
    pub deltas: Vec<DeltaFactor>,
    pub factors: Vec<LadderSymbol>,
}

impl<C: Coefficient> Term<C> {
    pub fn new(coeff: C, deltas: Vec<DeltaFactor>, factors: Vec<LadderSymbol>) -> Self {
        Term { coeff, deltas, factors }
    }

    pub fn scalar(coeff: C) -> Self {
        Term { coeff, deltas: Vec::new(), factors: Vec::new() }
    }

    pub fn is_identity_term(&self) -> bool {
        self.factors.is_empty() && self.deltas.is_empty()
    }

    pub fn adjoint(&self) -> Self {
        Term {
            coeff: self.coeff.conjugate(),
            deltas: self.deltas.clone(),
            factors: self.factors.iter().rev().map(LadderSymbol::adjoint).collect(),
        }
    }

    pub fn product(&self, other: &Self) -> Self {
        let mut deltas = self.deltas.clone();
        deltas.extend(other.deltas.iter().cloned());
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Term { coeff: self.coeff.times(&other.coeff), deltas, factors }
    }

    /// Sorts deltas and drops trivial ones.
    pub(crate) fn tidy_deltas(&mut self) {
        self.deltas.retain(|d| !d.is_trivial());
        self.deltas.sort();
    }
}

/// A sum of products of ladder operators with Kronecker deltas.
///
/// Terms with zero coefficient never appear. Expressions produced by
/// [`OperatorExpr::canonical`] or by normal ordering additionally hold each
/// `(deltas, factors)` pair at most once, sorted by factors then deltas.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorExpr<C = ExactComplex> {
    terms: Vec<Term<C>>,
}

impl<C: Coefficient> Default for OperatorExpr<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> OperatorExpr<C> {
    pub fn zero() -> Self {
        OperatorExpr { terms: Vec::new() }
    }

    pub fn identity() -> Self {
        Self::scalar(C::one())
    }

    pub fn scalar(c: C) -> Self {
        Self::from_terms(vec![Term::scalar(c)])
    }

    pub fn ladder(symbol: LadderSymbol) -> Self {
        Self::from_terms(vec![Term::new(C::one(), Vec::new(), vec![symbol])])
    }

    /// Keeps the given term order; only zero terms are removed.
    pub fn from_terms(terms: Vec<Term<C>>) -> Self {
        let terms = terms.into_iter().filter(|t| !t.coeff.is_zero()).collect();
        OperatorExpr { terms }
    }

    pub fn terms(&self) -> &[Term<C>] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_factors(&self) -> usize {
        self.terms.iter().map(|t| t.factors.len()).max().unwrap_or(0)
    }

    /// All ladder symbols that occur, deduplicated and sorted.
    pub fn symbols(&self) -> Vec<LadderSymbol> {
        let mut out: Vec<_> = self.terms.iter().flat_map(|t| t.factors.iter().cloned()).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Merges equal `(deltas, factors)` pairs and sorts terms. Factor order
    /// inside a term is left untouched.
    pub fn canonical(&self) -> Self {
        let mut acc: BTreeMap<(Vec<LadderSymbol>, Vec<DeltaFactor>), C> = BTreeMap::new();
        for term in &self.terms {
            let mut t = term.clone();
            t.tidy_deltas();
            accumulate(&mut acc, t);
        }
        from_accumulator(acc)
    }

    pub fn adjoint(&self) -> Self {
        OperatorExpr { terms: self.terms.iter().map(Term::adjoint).collect() }.canonical()
    }

    pub fn scaled(&self, c: &C) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| Term { coeff: t.coeff.times(c), ..t.clone() })
                .collect(),
        )
    }

    /// Replaces every Kronecker delta by its value for concrete labels:
    /// distinct labels give zero, equal labels give one.
    pub fn resolve_deltas(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|t| t.deltas.iter().all(DeltaFactor::is_trivial))
                .map(|t| Term { deltas: Vec::new(), ..t.clone() })
                .collect(),
        )
        .canonical()
    }

    /// Coefficient of the pure identity term (no factors, no deltas).
    pub fn identity_coefficient(&self) -> C {
        self.terms
            .iter()
            .filter(|t| t.is_identity_term())
            .fold(C::zero(), |acc, t| acc.plus(&t.coeff))
    }

    /// Drops the identity term.
    pub fn without_constant(&self) -> Self {
        Self::from_terms(self.terms.iter().filter(|t| !t.is_identity_term()).cloned().collect())
    }

    /// Converts coefficients to another ring.
    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> OperatorExpr<D> {
        OperatorExpr::from_terms(
            self.terms
                .iter()
                .map(|t| Term { coeff: f(&t.coeff), deltas: t.deltas.clone(), factors: t.factors.clone() })
                .collect(),
        )
    }
}

pub(crate) fn accumulate<C: Coefficient>(
    acc: &mut BTreeMap<(Vec<LadderSymbol>, Vec<DeltaFactor>), C>,
    term: Term<C>,
) {
    let key = (term.factors, term.deltas);
    match acc.get_mut(&key) {
        Some(c) => *c = c.plus(&term.coeff),
        None => {
            acc.insert(key, term.coeff);
        }
    }
}

pub(crate) fn from_accumulator<C: Coefficient>(
    acc: BTreeMap<(Vec<LadderSymbol>, Vec<DeltaFactor>), C>,
) -> OperatorExpr<C> {
    let terms = acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((factors, deltas), coeff)| Term { coeff, deltas, factors })
        .collect();
    OperatorExpr { terms }
}

impl<C: Coefficient> Add for OperatorExpr<C> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let mut terms = self.terms;
        terms.extend(rhs.terms);
        OperatorExpr { terms }.canonical()
    }
}

impl<C: Coefficient> Neg for OperatorExpr<C> {
    type Output = Self;

    fn neg(self) -> Self {
        self.scaled(&C::one().negated())
    }
}

impl<C: Coefficient> Sub for OperatorExpr<C> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<C: Coefficient> Mul for &OperatorExpr<C> {
    type Output = OperatorExpr<C>;

    fn mul(self, rhs: Self) -> OperatorExpr<C> {
        let terms = self
            .terms
            .iter()
            .flat_map(|x| rhs.terms.iter().map(move |y| x.product(y)))
            .collect();
        OperatorExpr::from_terms(terms).canonical()
    }
}

impl<C: Coefficient> Mul for OperatorExpr<C> {
    type Output = OperatorExpr<C>;

    fn mul(self, rhs: Self) -> OperatorExpr<C> {
        &self * &rhs
    }
}

impl<C: Coefficient> fmt::Display for Term<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (_, mag) = self.coeff.render();
        write_term_body(f, mag, self)
    }
}

fn write_term_body<C>(f: &mut fmt::Formatter<'_>, mag: Option<String>, term: &Term<C>) -> fmt::Result {
    let mut parts: Vec<String> = Vec::new();
    if let Some(m) = mag {
        parts.push(m);
    }
    parts.extend(term.deltas.iter().map(ToString::to_string));
    parts.extend(term.factors.iter().map(ToString::to_string));
    if parts.is_empty() {
        f.write_str("1")
    } else {
        f.write_str(&parts.join(" "))
    }
}

impl<C: Coefficient> fmt::Display for OperatorExpr<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, term) in self.terms.iter().enumerate() {
            let (negative, mag) = term.coeff.render();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write_term_body(f, mag, term)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::exact;

    fn b(kind: Kind, m: i64) -> LadderSymbol {
        LadderSymbol::new(Species::B, kind, ModeLabel::int(m))
    }

    #[test]
    fn canonical_order_puts_creators_first() {
        let c = b(Kind::Create, 9);
        let a = b(Kind::Annihilate, 1);
        assert!(c < a);
        let photon = LadderSymbol::create(Species::A, ModeLabel::int(0));
        assert!(c < photon);
    }

    #[test]
    fn canonical_merges_like_terms() {
        let x = OperatorExpr::<ExactComplex>::ladder(b(Kind::Create, 1));
        let sum = x.clone() + x.clone() - x.scaled(&exact(2, 0));
        assert!(sum.is_zero());
        assert_eq!(sum.to_string(), "0");
    }

    #[test]
    fn adjoint_of_imaginary_product() {
        // adjoint(i b+(m) d+(m')) = -i d(m') b(m)
        let t = Term::new(
            exact(0, 1),
            vec![],
            vec![
                LadderSymbol::create(Species::B, ModeLabel::named("m")),
                LadderSymbol::create(Species::D, ModeLabel::named("m'")),
            ],
        );
        let e = OperatorExpr::from_terms(vec![t]);
        assert_eq!(e.adjoint().to_string(), "-i d(m') b(m)");
        assert_eq!(e.adjoint().adjoint(), e.canonical());
    }

    #[test]
    fn delta_normalizes_label_order() {
        let d = DeltaFactor::new(ModeLabel::named("q"), ModeLabel::named("k"));
        assert_eq!(d.to_string(), "delta(k; q)");
        assert!(DeltaFactor::new(mode!("k", 1), mode!("k", 1)).is_trivial());
    }
}
