//! Seeded random expressions for property checks and backend comparison.

use rand::Rng;

use super::coeff::{exact, ExactComplex};
use super::expr::{Kind, LadderSymbol, ModeLabel, OperatorExpr, Species, Term};

/// Which ladder symbols a random expression may use.
#[derive(Clone, Debug)]
pub struct SymbolPool {
    pub species: Vec<Species>,
    pub modes: Vec<ModeLabel>,
    /// Green components to draw from; empty for component-free symbols.
    pub green: Vec<u32>,
}

impl SymbolPool {
    pub fn new(species: &[Species], modes: Vec<ModeLabel>) -> Self {
        SymbolPool { species: species.to_vec(), modes, green: Vec::new() }
    }

    pub fn with_green(mut self, order: u32) -> Self {
        self.green = (1..=order).collect();
        self
    }

    pub fn symbol<R: Rng>(&self, rng: &mut R) -> LadderSymbol {
        let species = self.species[rng.gen_range(0..self.species.len())];
        let mode = self.modes[rng.gen_range(0..self.modes.len())].clone();
        let kind = if rng.gen_bool(0.5) { Kind::Create } else { Kind::Annihilate };
        let mut s = LadderSymbol::new(species, kind, mode);
        if !self.green.is_empty() {
            s = s.with_green(self.green[rng.gen_range(0..self.green.len())]);
        }
        s
    }
}

/// Product of `len` random symbols with a small random integer coefficient.
pub fn random_term<R: Rng>(rng: &mut R, pool: &SymbolPool, len: usize) -> Term<ExactComplex> {
    let mut coeff = exact(rng.gen_range(-3..=3), rng.gen_range(-2..=2));
    if coeff == exact(0, 0) {
        coeff = exact(1, 0);
    }
    Term::new(coeff, Vec::new(), (0..len).map(|_| pool.symbol(rng)).collect())
}

/// Sum of up to `max_terms` random terms with at most `max_factors` factors each.
pub fn random_expr<R: Rng>(rng: &mut R, pool: &SymbolPool, max_terms: usize, max_factors: usize) -> OperatorExpr {
    let n = rng.gen_range(1..=max_terms);
    let terms = (0..n)
        .map(|_| {
            let len = rng.gen_range(0..=max_factors);
            random_term(rng, pool, len)
        })
        .collect();
    OperatorExpr::from_terms(terms)
}
