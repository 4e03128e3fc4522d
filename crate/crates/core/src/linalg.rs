//! Dense complex vectors and matrices.
//!
//! Everything here is plain row-major storage over [`Complex64`]. Reductions
//! over long vectors use a fixed chunking so that results do not depend on the
//! rayon schedule.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::limits::DEGENERACY_TOL;

/// Chunk length for deterministic parallel reductions and maps.
pub(crate) const CHUNK: usize = 1 << 14;

/// Sum `f` over `data` in fixed-size chunks; partial sums are combined in order.
pub(crate) fn chunked_sum<F>(data: &[Complex64], f: F) -> Complex64
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
{
    if data.len() <= CHUNK {
        return f(data);
    }
    let partials: Vec<Complex64> = data.par_chunks(CHUNK).map(&f).collect();
    partials.into_iter().sum()
}

/// A column vector of complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector(Vec<Complex64>);

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Self {
        ComplexVector(entries)
    }

    pub fn from_real(entries: &[f64]) -> Self {
        ComplexVector(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexVector(vec![Complex64::new(0.0, 0.0); dim])
    }

    /// Computational basis vector `|i>` of dimension `dim`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.0
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.0.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        chunked_sum(&self.0, |c| {
            Complex64::new(c.iter().map(|z| z.norm_sqr()).sum(), 0.0)
        })
        .re
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &ComplexVector) -> Result<Complex64> {
        check_dim(self.dim(), other.dim())?;
        Ok(inner_unchecked(&self.0, &other.0))
    }

    pub fn scaled(&self, s: Complex64) -> ComplexVector {
        ComplexVector(self.0.iter().map(|z| z * s).collect())
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: Complex64, other: &ComplexVector) -> Result<()> {
        check_dim(self.dim(), other.dim())?;
        self.0
            .par_chunks_mut(CHUNK)
            .zip(other.0.par_chunks(CHUNK))
            .for_each(|(a, b)| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += s * y;
                }
            });
        Ok(())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexVector) -> Result<f64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `self` divided by its norm.
    pub fn normalized(&self) -> ComplexVector {
        let n = self.norm();
        self.scaled(Complex64::new(1.0 / n, 0.0))
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for ComplexVector {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.0[i]
    }
}

impl From<Vec<Complex64>> for ComplexVector {
    fn from(v: Vec<Complex64>) -> Self {
        ComplexVector(v)
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

fn inner_unchecked(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        check_dim(rows * cols, data.len())?;
        Ok(ComplexMatrix { rows, cols, data })
    }

    /// Build entrywise from `f(row, col)`, rows filled in parallel.
    pub fn from_fn<F>(rows: usize, cols: usize, f: F) -> Self
    where
        F: Fn(usize, usize) -> Complex64 + Sync,
    {
        let mut data = vec![Complex64::new(0.0, 0.0); rows * cols];
        if cols > 0 {
            data.par_chunks_mut(cols).enumerate().for_each(|(r, row)| {
                for (c, x) in row.iter_mut().enumerate() {
                    *x = f(r, c);
                }
            });
        }
        ComplexMatrix { rows, cols, data }
    }

    /// `sum_i |left_i><right_i|`.
    pub fn sum_of_outer_products(left: &[ComplexVector], right: &[ComplexVector]) -> Result<Self> {
        check_dim(left.len(), right.len())?;
        let Some(first) = left.first() else {
            return Ok(Self::zeros(0, 0));
        };
        let (rows, cols) = (first.dim(), right[0].dim());
        for (l, r) in left.iter().zip(right) {
            check_dim(rows, l.dim())?;
            check_dim(cols, r.dim())?;
        }
        Ok(Self::from_fn(rows, cols, |i, j| {
            left.iter()
                .zip(right)
                .map(|(l, r)| l[i] * r[j].conj())
                .sum()
        }))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Complex64) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// `self + other`.
    pub fn add(&self, other: &ComplexMatrix) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    /// Matrix product; output rows are computed in parallel, each with a fixed
    /// summation order.
    pub fn matmul(&self, other: &ComplexMatrix) -> Result<Self> {
        check_dim(self.cols, other.rows)?;
        let inner = self.cols;
        Ok(Self::from_fn(self.rows, other.cols, |r, c| {
            let row = self.row(r);
            (0..inner).map(|j| row[j] * other.get(j, c)).sum()
        }))
    }

    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        check_dim(self.cols, v.dim())?;
        let out: Vec<Complex64> = (0..self.rows)
            .into_par_iter()
            .map(|r| self.row(r).iter().zip(v.iter()).map(|(a, b)| a * b).sum())
            .collect();
        Ok(ComplexVector(out))
    }

    /// `self^k` by repeated multiplication; `k = 0` gives the identity.
    pub fn pow(&self, k: u32) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = acc.matmul(self)?;
        }
        Ok(acc)
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest entrywise modulus of `self - I`.
    pub fn max_abs_diff_identity(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.rows {
            for c in 0..self.cols {
                let id = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((self.get(r, c) - id).norm());
            }
        }
        worst
    }

    fn check_same_shape(&self, other: &ComplexMatrix) -> Result<()> {
        check_dim(self.rows, other.rows)?;
        check_dim(self.cols, other.cols)
    }
}

/// Worst deviation of `m` from unitarity: the larger of `max|m†m - I|` and
/// `max|mm† - I|`.
pub fn unitarity_residual(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let adj = m.adjoint();
    let left = adj.matmul(m)?.max_abs_diff_identity();
    let right = m.matmul(&adj)?.max_abs_diff_identity();
    Ok(left.max(right))
}

pub fn is_unitary(m: &ComplexMatrix, tol: f64) -> Result<bool> {
    Ok(unitarity_residual(m)? <= tol)
}

/// Kronecker product.
pub trait Kronecker: Sized {
    fn kron(&self, other: &Self) -> Self;
}

impl Kronecker for ComplexVector {
    fn kron(&self, other: &Self) -> Self {
        let nb = other.dim();
        let mut out = Vec::with_capacity(self.dim() * nb);
        for a in self.iter() {
            out.extend(other.iter().map(|b| a * b));
        }
        ComplexVector(out)
    }
}

impl Kronecker for ComplexMatrix {
    fn kron(&self, other: &Self) -> Self {
        let (br, bc) = (other.rows, other.cols);
        Self::from_fn(self.rows * br, self.cols * bc, |r, c| {
            self.get(r / br, c / bc) * other.get(r % br, c % bc)
        })
    }
}

pub fn tensor_product<T: Kronecker>(a: &T, b: &T) -> T {
    a.kron(b)
}

/// Project `seed` off every vector in `accepted` (modified Gram-Schmidt,
/// one pass) and return the residual together with its norm relative to the
/// seed norm.
fn orthogonal_residual(seed: &ComplexVector, accepted: &[ComplexVector]) -> (ComplexVector, f64) {
    let seed_norm = seed.norm();
    let mut v = seed.clone();
    for q in accepted {
        let overlap = inner_unchecked(q.as_slice(), v.as_slice());
        for (x, y) in v.0.iter_mut().zip(q.iter()) {
            *x -= overlap * y;
        }
    }
    let norm = v.norm();
    let relative = if seed_norm > 0.0 { norm / seed_norm } else { 0.0 };
    (v, relative)
}

fn check_first(fixed_first: &ComplexVector) -> Result<()> {
    let norm = fixed_first.norm();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

/// Complete `fixed_first` to an orthonormal basis using `seeds` in order.
///
/// The first output vector is `fixed_first` unchanged; output `i + 1` is
/// seed `i` with all earlier outputs projected out, then normalized. Exactly
/// `dim - 1` seeds are required and every one must contribute.
pub fn gram_schmidt_complete(
    fixed_first: &ComplexVector,
    seeds: &[ComplexVector],
) -> Result<Vec<ComplexVector>> {
    let dim = fixed_first.dim();
    check_first(fixed_first)?;
    check_dim(dim - 1, seeds.len())?;
    let mut basis = Vec::with_capacity(dim);
    basis.push(fixed_first.clone());
    for (index, seed) in seeds.iter().enumerate() {
        check_dim(dim, seed.dim())?;
        let (residual, relative) = orthogonal_residual(seed, &basis);
        if relative < DEGENERACY_TOL {
            return Err(Error::DegenerateSeed {
                index,
                residual: relative,
            });
        }
        basis.push(residual.normalized());
    }
    Ok(basis)
}

/// Complete `fixed_first` to an orthonormal basis using the computational
/// basis vectors `|0>, |1>, ...` as seeds, skipping any that degenerate.
pub fn complete_with_canonical_seeds(fixed_first: &ComplexVector) -> Result<Vec<ComplexVector>> {
    let dim = fixed_first.dim();
    check_first(fixed_first)?;
    let mut basis = Vec::with_capacity(dim);
    basis.push(fixed_first.clone());
    for i in 0..dim {
        if basis.len() == dim {
            break;
        }
        let (residual, relative) = orthogonal_residual(&ComplexVector::basis(dim, i), &basis);
        if relative >= DEGENERACY_TOL {
            basis.push(residual.normalized());
        }
    }
    if basis.len() != dim {
        return Err(Error::IncompleteBasis {
            needed: dim,
            found: basis.len(),
        });
    }
    Ok(basis)
}

/// Largest entrywise deviation of the Gram matrix `<b_i|b_j>` from `I`.
pub fn orthonormality_residual(basis: &[ComplexVector]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let g = inner_unchecked(a.as_slice(), b.as_slice());
            let id = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g - id).norm());
        }
    }
    worst
}

/// Largest entrywise deviation of `sum_i |b_i><b_i|` from `I`.
pub fn completeness_residual(basis: &[ComplexVector]) -> Result<f64> {
    Ok(ComplexMatrix::sum_of_outer_products(basis, basis)?.max_abs_diff_identity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gram_schmidt_trivial_basis() {
        let out = gram_schmidt_complete(
            &ComplexVector::basis(2, 0),
            &[ComplexVector::basis(2, 1)],
        )
        .unwrap();
        assert_eq!(out, vec![ComplexVector::basis(2, 0), ComplexVector::basis(2, 1)]);
    }

    #[test]
    fn gram_schmidt_one_projection_step() {
        // (1,0) - <phi|(1,0)> phi = (1/2, -1/2), normalized to (1,-1)/sqrt2.
        let phi = ComplexVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        let out = gram_schmidt_complete(&phi, &[ComplexVector::basis(2, 0)]).unwrap();
        assert_eq!(out[0], phi);
        let expected = ComplexVector::from_real(&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]);
        assert!(out[1].max_abs_diff(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn gram_schmidt_uniform_state_n8() {
        let phi0 = ComplexVector::from_real(&[1.0 / 8f64.sqrt(); 8]);
        let seeds: Vec<_> = (0..7).map(|i| ComplexVector::basis(8, i)).collect();
        let out = gram_schmidt_complete(&phi0, &seeds).unwrap();
        let s = 1.0 / (2.0 * 14f64.sqrt());
        let mut second = vec![-s; 8];
        second[0] = 7.0 * s;
        assert!(out[1].max_abs_diff(&ComplexVector::from_real(&second)).unwrap() < 1e-14);
        let mut last = vec![0.0; 8];
        last[6] = FRAC_1_SQRT_2;
        last[7] = -FRAC_1_SQRT_2;
        assert!(out[7].max_abs_diff(&ComplexVector::from_real(&last)).unwrap() < 1e-14);
        assert!(orthonormality_residual(&out) < 1e-14);
        assert!(completeness_residual(&out).unwrap() < 1e-14);
    }

    #[test]
    fn gram_schmidt_rejects_dependent_seed() {
        let phi = ComplexVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        let seed = ComplexVector::from_real(&[2.0, 2.0]);
        let err = gram_schmidt_complete(&phi, &[seed]).unwrap_err();
        assert!(matches!(err, Error::DegenerateSeed { index: 0, .. }));
    }

    #[test]
    fn gram_schmidt_dimension_errors() {
        let phi = ComplexVector::basis(3, 0);
        let err = gram_schmidt_complete(&phi, &[ComplexVector::basis(3, 1)]).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, found: 1 });
        let err = gram_schmidt_complete(
            &phi,
            &[ComplexVector::basis(3, 1), ComplexVector::basis(2, 1)],
        )
        .unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
        let err = gram_schmidt_complete(&ComplexVector::from_real(&[1.0, 1.0]), &[ComplexVector::basis(2, 0)])
            .unwrap_err();
        assert!(matches!(err, Error::NotNormalized { .. }));
    }

    #[test]
    fn canonical_completion_skips_degenerate_seed() {
        let first = ComplexVector::new(vec![c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let out = complete_with_canonical_seeds(&first).unwrap();
        assert_eq!(out.len(), 3);
        assert!(out[1].max_abs_diff(&ComplexVector::basis(3, 1)).unwrap() < 1e-15);
        assert!(out[2].max_abs_diff(&ComplexVector::basis(3, 2)).unwrap() < 1e-15);
    }

    #[test]
    fn unitarity_checks() {
        assert!(is_unitary(&ComplexMatrix::identity(5), 1e-10).unwrap());
        let not = ComplexMatrix::identity(3).scaled(c(1.1, 0.0));
        assert!(!is_unitary(&not, 1e-10).unwrap());
        let rect = ComplexMatrix::zeros(2, 3);
        assert_eq!(
            is_unitary(&rect, 1e-10).unwrap_err(),
            Error::NonSquare { rows: 2, cols: 3 }
        );
    }

    #[test]
    fn kronecker_examples() {
        let v = tensor_product(&ComplexVector::basis(2, 0), &ComplexVector::basis(2, 1));
        assert_eq!(v, ComplexVector::basis(4, 1));
        let id = tensor_product(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2));
        assert_eq!(id, ComplexMatrix::identity(4));
        let plus = ComplexVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        let pp = tensor_product(&plus, &plus);
        assert!(pp.max_abs_diff(&ComplexVector::from_real(&[0.5; 4])).unwrap() < 1e-15);
    }

    #[test]
    fn matrix_power_and_apply() {
        let m = ComplexMatrix::from_row_major(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        assert_eq!(m.pow(0).unwrap(), ComplexMatrix::identity(2));
        assert_eq!(m.pow(2).unwrap(), ComplexMatrix::identity(2));
        let v = m.apply(&ComplexVector::basis(2, 0)).unwrap();
        assert_eq!(v, ComplexVector::basis(2, 1));
        assert!(m.apply(&ComplexVector::basis(3, 0)).is_err());
    }

    #[test]
    fn chunked_reductions_match_serial() {
        let n = 3 * CHUNK + 17;
        let v = ComplexVector::new((0..n).map(|i| c((i as f64).sin(), (i as f64).cos())).collect());
        let serial: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        assert!((v.norm_sqr() - serial).abs() < 1e-9);
    }
}
