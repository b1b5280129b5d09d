//! Symbolic ladder-operator algebra.
//!
//! Expressions are sums of products of ladder operators (`b`, `d` fermionic,
//! `a` bosonic, `u` parabose) with exact complex rational coefficients and
//! Kronecker deltas between mode labels. [`normal_order`] rewrites them to a
//! canonical normal-ordered form under a per-species [`StatisticsConfig`].

mod coeff;
mod expr;
mod order;
mod parse;
pub mod random;

pub use coeff::{exact, Coefficient, ExactComplex};
pub use expr::{DeltaFactor, Index, Kind, LadderSymbol, ModeLabel, OperatorExpr, Species, Term};
pub use order::{
    expand_green, inversions, is_normal_ordered, normal_order, normal_order_counted, rewrite_once, vacuum_expectation,
    OpalgError, RewriteStats, Statistics, StatisticsConfig,
};
pub use parse::{parse_expr, ParseError};
