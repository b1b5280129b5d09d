use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{FockError, FockSpace};

/// Sparse complex matrix bound to a [`FockSpace`].
///
/// Rows are stored as column-sorted `(col, value)` lists with no explicit
/// zeros, so iteration order is deterministic.
#[derive(Clone, Debug)]
pub struct SparseOperator {
    space: Arc<FockSpace>,
    rows: Vec<Vec<(usize, Complex64)>>,
}

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

impl PartialEq for SparseOperator {
    fn eq(&self, other: &Self) -> bool {
        self.space.id() == other.space.id() && self.rows == other.rows
    }
}

impl SparseOperator {
    pub fn zeros(space: &Arc<FockSpace>) -> Self {
        SparseOperator { space: space.clone(), rows: vec![Vec::new(); space.dim()] }
    }

    pub fn identity(space: &Arc<FockSpace>) -> Self {
        Self::diagonal(space, |_| 1.0)
    }

    /// Real diagonal operator with entries `f(basis index)`.
    pub fn diagonal(space: &Arc<FockSpace>, f: impl Fn(usize) -> f64) -> Self {
        let rows = (0..space.dim())
            .map(|i| {
                let v = f(i);
                if v == 0.0 {
                    Vec::new()
                } else {
                    vec![(i, Complex64::new(v, 0.0))]
                }
            })
            .collect();
        SparseOperator { space: space.clone(), rows }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(space: &Arc<FockSpace>, triplets: impl IntoIterator<Item = (usize, usize, Complex64)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, Complex64>> = vec![BTreeMap::new(); space.dim()];
        for (r, c, v) in triplets {
            *acc[r].entry(c).or_insert_with(czero) += v;
        }
        Self::from_maps(space, acc)
    }

    fn from_maps(space: &Arc<FockSpace>, maps: Vec<BTreeMap<usize, Complex64>>) -> Self {
        let rows = maps
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| *v != czero()).collect())
            .collect();
        SparseOperator { space: space.clone(), rows }
    }

    pub fn space(&self) -> &Arc<FockSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.rows[row]
            .binary_search_by_key(&col, |(c, _)| *c)
            .map(|k| self.rows[row][k].1)
            .unwrap_or_else(|_| czero())
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.rows.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |&(c, v)| (r, c, v)))
    }

    fn check(&self, other: &Self) -> Result<(), FockError> {
        if self.space.id() == other.space.id() {
            Ok(())
        } else {
            Err(FockError::SpaceMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FockError> {
        self.check(other)?;
        let mut maps: Vec<BTreeMap<usize, Complex64>> =
            self.rows.iter().map(|r| r.iter().copied().collect()).collect();
        for (r, c, v) in other.entries() {
            *maps[r].entry(c).or_insert_with(czero) += v;
        }
        Ok(Self::from_maps(&self.space, maps))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FockError> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|&(col, v)| (col, v * c)).filter(|(_, v)| *v != czero()).collect())
            .collect();
        SparseOperator { space: self.space.clone(), rows }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Result<Self, FockError> {
        self.check(other)?;
        let maps = self
            .rows
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, Complex64> = BTreeMap::new();
                for &(k, a) in row {
                    for &(j, b) in &other.rows[k] {
                        *acc.entry(j).or_insert_with(czero) += a * b;
                    }
                }
                acc
            })
            .collect();
        Ok(Self::from_maps(&self.space, maps))
    }

    pub fn adjoint(&self) -> Self {
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); self.dim()];
        for (r, c, v) in self.entries() {
            rows[c].push((r, v.conj()));
        }
        SparseOperator { space: self.space.clone(), rows }
    }

    /// `[self, other]`
    pub fn commutator(&self, other: &Self) -> Result<Self, FockError> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// `{self, other}`
    pub fn anticommutator(&self, other: &Self) -> Result<Self, FockError> {
        self.mul(other)?.add(&other.mul(self)?)
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim(), "vector length must match the space dimension");
        self.rows
            .iter()
            .map(|row| row.iter().fold(czero(), |acc, &(c, a)| acc + a * v[c]))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries().all(|(r, c, _)| r == c)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().map(|(_, _, v)| v.norm()).fold(0.0, f64::max)
    }

    /// Largest entry modulus among columns whose basis state satisfies `keep`.
    pub fn max_abs_on_columns(&self, keep: impl Fn(usize) -> bool) -> f64 {
        self.entries().filter(|(_, c, _)| keep(*c)).map(|(_, _, v)| v.norm()).fold(0.0, f64::max)
    }

    /// Largest entry modulus on columns with total occupation `<= max_total`.
    pub fn max_abs_below(&self, max_total: u32) -> f64 {
        self.max_abs_on_columns(|c| self.space.total_occupation(c) <= max_total)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().map(|(_, _, v)| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::from_element(self.dim(), self.dim(), czero());
        for (r, c, v) in self.entries() {
            m[(r, c)] = v;
        }
        m
    }

    /// Spectral norm (largest singular value), through a dense SVD.
    pub fn operator_norm(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        self.to_dense().singular_values().iter().copied().fold(0.0, f64::max)
    }

    /// Spectral norm of `self - self^+`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.sub(&self.adjoint()).expect("same space").operator_norm()
    }

    /// Text export: one `row col re im` line per nonzero entry.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (r, c, v) in self.entries() {
            let _ = writeln!(out, "{r} {c} {:e} {:e}", v.re, v.im);
        }
        out
    }
}
