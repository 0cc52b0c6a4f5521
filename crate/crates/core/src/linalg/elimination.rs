//! Row reduction, rank, nullspace and minimum-norm solves.
//!
//! Exact scalars: candidate pivot rows are selected modulo a 61-bit prime,
//! the nullspace of the selected rows is computed over the rationals, and
//! every discarded row is checked against that nullspace. The check makes
//! the result exact; a failed check (a prime dividing some minor) falls back
//! to plain rational elimination.
//!
//! Float scalars: rank and nullspace come from a singular value
//! decomposition with the relative threshold [`FLOAT_RANK_THRESHOLD`].

use std::collections::HashSet;

use nalgebra::DMatrix;

use super::matrix::Matrix;
use super::modp::{self, ModpRowSelector};
use super::LinalgError;
use crate::scalar::{Scalar, FLOAT_RANK_THRESHOLD};

/// A maximal independent set of rows together with the exact kernel.
#[derive(Debug, Clone)]
pub struct RowBasis<T> {
    /// Indices of independent rows of the input, in increasing order.
    pub rows: Vec<usize>,
    /// Basis of the right kernel of the input.
    pub kernel: Vec<Vec<T>>,
}

pub fn rank<T: Scalar>(m: &Matrix<T>) -> usize {
    if T::EXACT {
        row_basis(m).rows.len()
    } else {
        float_svd(m).0
    }
}

/// Basis of `ker(m)`.
pub fn nullspace<T: Scalar>(m: &Matrix<T>) -> Vec<Vec<T>> {
    if T::EXACT {
        row_basis(m).kernel
    } else {
        float_svd(m).1
    }
}

/// Independent rows and kernel of `m`.
pub fn row_basis<T: Scalar>(m: &Matrix<T>) -> RowBasis<T> {
    if m.cols() == 0 {
        return RowBasis { rows: Vec::new(), kernel: Vec::new() };
    }
    if T::EXACT {
        if let Some(rb) = modular_row_basis(m) {
            return rb;
        }
        exact_row_basis(m)
    } else {
        float_row_basis(m)
    }
}

fn sparse_rows<T: Scalar>(m: &Matrix<T>) -> Vec<Vec<(usize, &T)>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().enumerate().filter(|(_, v)| !v.is_zero()).collect())
        .collect()
}

fn modular_row_basis<T: Scalar>(m: &Matrix<T>) -> Option<RowBasis<T>> {
    let p = modp::PRIME;
    let cols = m.cols();
    let mut selector = ModpRowSelector::new(cols, p);
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut chosen = Vec::new();
    for i in 0..m.rows() {
        if selector.rank() == cols {
            break;
        }
        let mut residues = Vec::with_capacity(cols);
        for v in m.row(i) {
            residues.push(v.residue(p)?);
        }
        // rows equal up to a scalar factor are offered once
        let Some(lead) = residues.iter().copied().find(|&r| r != 0) else {
            continue;
        };
        let f = modp::inv(lead, p);
        let key: Vec<u64> = residues.iter().map(|&r| modp::mul(r, f, p)).collect();
        if !seen.insert(key) {
            continue;
        }
        if selector.offer(residues) {
            chosen.push(i);
        }
    }
    let sub = Matrix::from_rows(cols, &chosen.iter().map(|&i| m.row(i).to_vec()).collect::<Vec<_>>())
        .ok()?;
    let kernel = rref_kernel(sub);
    if kernel.len() + chosen.len() != cols {
        return None;
    }
    let chosen_set: HashSet<usize> = chosen.iter().copied().collect();
    for (i, row) in sparse_rows(m).into_iter().enumerate() {
        if chosen_set.contains(&i) {
            continue;
        }
        for v in &kernel {
            let mut acc = T::zero();
            for &(c, a) in &row {
                if !v[c].is_zero() {
                    acc += a.mul_ref(&v[c]);
                }
            }
            if !acc.is_zero() {
                return None;
            }
        }
    }
    Some(RowBasis { rows: chosen, kernel })
}

fn exact_row_basis<T: Scalar>(m: &Matrix<T>) -> RowBasis<T> {
    let cols = m.cols();
    let mut echelon: Vec<(usize, Vec<T>)> = Vec::new();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut chosen = Vec::new();
    for i in 0..m.rows() {
        let mut row = m.row(i).to_vec();
        let mut independent = false;
        for c in 0..cols {
            if row[c].is_zero() {
                continue;
            }
            match pivot_of_col[c] {
                Some(e) => {
                    let f = row[c].clone();
                    let prow = &echelon[e].1;
                    for k in c..cols {
                        if !prow[k].is_zero() {
                            row[k] -= f.mul_ref(&prow[k]);
                        }
                    }
                }
                None => {
                    let f = T::one() / row[c].clone();
                    for v in row.iter_mut().skip(c) {
                        *v *= &f;
                    }
                    pivot_of_col[c] = Some(echelon.len());
                    echelon.push((c, row.clone()));
                    independent = true;
                    break;
                }
            }
        }
        if independent {
            chosen.push(i);
        }
    }
    let sub = Matrix::from_rows(cols, &chosen.iter().map(|&i| m.row(i).to_vec()).collect::<Vec<_>>())
        .expect("rows have matching width");
    RowBasis { rows: chosen, kernel: rref_kernel(sub) }
}

/// Reduced row echelon form in place; returns the pivot columns.
///
/// Float pivots are chosen by largest magnitude and entries below the
/// relative threshold are treated as zero.
pub fn rref<T: Scalar>(m: &mut Matrix<T>) -> Vec<usize> {
    let (rows, cols) = (m.rows(), m.cols());
    let scale = m.max_abs();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let pivot = if T::EXACT {
            (r..rows).find(|&i| !m[(i, c)].is_zero())
        } else {
            (r..rows)
                .filter(|&i| {
                    m[(i, c)].to_f64().abs() > FLOAT_RANK_THRESHOLD * (1.0 + scale.to_f64().abs())
                })
                .max_by(|&a, &b| {
                    m[(a, c)].abs().partial_cmp(&m[(b, c)].abs()).unwrap_or(std::cmp::Ordering::Equal)
                })
        };
        let Some(p) = pivot else { continue };
        m.swap_rows(r, p);
        let inv = T::one() / m[(r, c)].clone();
        for v in m.row_mut(r).iter_mut().skip(c) {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let prow: Vec<(usize, T)> = m
            .row(r)
            .iter()
            .enumerate()
            .skip(c)
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (k, v.clone()))
            .collect();
        for i in 0..rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let f = m[(i, c)].clone();
            let row = m.row_mut(i);
            for (k, pv) in &prow {
                row[*k] -= f.mul_ref(pv);
            }
            if !T::EXACT {
                row[c] = T::zero();
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Kernel basis read off from the reduced row echelon form.
fn rref_kernel<T: Scalar>(mut m: Matrix<T>) -> Vec<Vec<T>> {
    let cols = m.cols();
    let pivots = rref(&mut m);
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![T::zero(); cols];
            v[f] = T::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -m[(r, f)].clone();
            }
            v
        })
        .collect()
}

fn to_nalgebra<T: Scalar>(m: &Matrix<T>, min_rows: usize) -> DMatrix<f64> {
    let rows = m.rows().max(min_rows);
    DMatrix::from_fn(rows, m.cols(), |i, j| if i < m.rows() { m[(i, j)].to_f64() } else { 0.0 })
}

/// Float rank and kernel through the singular value decomposition.
fn float_svd<T: Scalar>(m: &Matrix<T>) -> (usize, Vec<Vec<T>>) {
    let cols = m.cols();
    if cols == 0 {
        return (0, Vec::new());
    }
    // pad to at least square so the right singular vectors span the full domain
    let a = to_nalgebra(m, cols);
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma = &svd.singular_values;
    let smax = sigma.iter().copied().fold(0.0f64, f64::max);
    let cutoff = FLOAT_RANK_THRESHOLD * smax;
    let mut rank = 0;
    let mut kernel = Vec::new();
    for (k, s) in sigma.iter().enumerate() {
        if smax > 0.0 && *s > cutoff {
            rank += 1;
        } else {
            kernel.push(
                (0..cols)
                    .map(|j| T::from_f64(v_t[(k, j)]).expect("finite singular vector"))
                    .collect(),
            );
        }
    }
    (rank, kernel)
}

fn float_row_basis<T: Scalar>(m: &Matrix<T>) -> RowBasis<T> {
    let cols = m.cols();
    // greedy modified Gram-Schmidt on the rows
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    let mut chosen = Vec::new();
    let scale = m.as_slice().iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max);
    for i in 0..m.rows() {
        let mut r: Vec<f64> = m.row(i).iter().map(|v| v.to_f64()).collect();
        for q in &ortho {
            let d: f64 = r.iter().zip(q).map(|(a, b)| a * b).sum();
            for (a, b) in r.iter_mut().zip(q) {
                *a -= d * b;
            }
        }
        let norm = r.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > FLOAT_RANK_THRESHOLD * scale.max(1e-300) * (cols as f64).sqrt() {
            ortho.push(r.into_iter().map(|a| a / norm).collect());
            chosen.push(i);
        }
    }
    RowBasis { rows: chosen, kernel: float_svd(m).1 }
}

/// Inverse of a square matrix.
pub fn inverse<T: Scalar>(m: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
    let k = m.rows();
    if m.cols() != k {
        return Err(LinalgError::ShapeMismatch { expected: k, found: m.cols() });
    }
    let mut aug = Matrix::from_fn(k, 2 * k, |i, j| {
        if j < k {
            m[(i, j)].clone()
        } else if j - k == i {
            T::one()
        } else {
            T::zero()
        }
    });
    let pivots = rref(&mut aug);
    if pivots.len() < k || pivots[k - 1] >= k {
        return Err(LinalgError::Singular);
    }
    Ok(Matrix::from_fn(k, k, |i, j| aug[(i, j + k)].clone()))
}

/// Minimum-norm solutions of `m x = b` for many right-hand sides.
///
/// The norm is `x^T W x` for diagonal positive weights `W` (standard norm when
/// no weights are given). The minimizer lies in `W^{-1} range(m^T)`; it is
/// computed from the normal equations restricted to an independent set of rows.
#[derive(Debug, Clone)]
pub struct MinNormSolver<T> {
    matrix: Matrix<T>,
    weights: Option<Vec<T>>,
    rows: Vec<usize>,
    normal_inverse: Matrix<T>,
}

impl<T: Scalar> MinNormSolver<T> {
    pub fn new(matrix: Matrix<T>, weights: Option<Vec<T>>) -> Result<Self, LinalgError> {
        if let Some(w) = &weights {
            if w.len() != matrix.cols() {
                return Err(LinalgError::ShapeMismatch { expected: matrix.cols(), found: w.len() });
            }
        }
        let rows = row_basis(&matrix).rows;
        let r = rows.len();
        let scaled: Vec<Vec<T>> = rows
            .iter()
            .map(|&i| match &weights {
                None => matrix.row(i).to_vec(),
                Some(w) => matrix.row(i).iter().zip(w).map(|(a, wi)| a.clone() / wi.clone()).collect(),
            })
            .collect();
        let normal = Matrix::from_fn(r, r, |a, b| super::matrix::dot(&scaled[a], matrix.row(rows[b])));
        let normal_inverse = inverse(&normal)?;
        Ok(Self { matrix, weights, rows, normal_inverse })
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn solve(&self, b: &[T]) -> Result<Vec<T>, LinalgError> {
        if b.len() != self.matrix.rows() {
            return Err(LinalgError::ShapeMismatch { expected: self.matrix.rows(), found: b.len() });
        }
        let b_sel: Vec<T> = self.rows.iter().map(|&i| b[i].clone()).collect();
        let y = self.normal_inverse.mul_vec(&b_sel)?;
        let mut x = vec![T::zero(); self.matrix.cols()];
        for (yi, &i) in y.iter().zip(&self.rows) {
            if yi.is_zero() {
                continue;
            }
            for (xj, a) in x.iter_mut().zip(self.matrix.row(i)) {
                if !a.is_zero() {
                    *xj += a.mul_ref(yi);
                }
            }
        }
        if let Some(w) = &self.weights {
            for (xj, wj) in x.iter_mut().zip(w) {
                *xj /= wj;
            }
        }
        let residual: Vec<T> = self
            .matrix
            .mul_vec(&x)?
            .into_iter()
            .zip(b)
            .map(|(ax, bi)| ax - bi.clone())
            .collect();
        let scale = crate::scalar::max_abs(b);
        let worst = crate::scalar::max_abs(&residual);
        if !worst.is_negligible(&scale) {
            return Err(LinalgError::InconsistentSystem { residual: worst.to_f64() });
        }
        Ok(x)
    }
}

/// Minimum-norm `x` with `m x = b`.
pub fn min_norm_solve<T: Scalar>(m: &Matrix<T>, b: &[T]) -> Result<Vec<T>, LinalgError> {
    MinNormSolver::new(m.clone(), None)?.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::scalar::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn qm(rows: usize, cols: usize, v: &[i64]) -> Matrix<Rational> {
        Matrix::from_vec(rows, cols, v.iter().map(|&x| q(x)).collect()).unwrap()
    }

    #[test]
    fn rank_of_zero_and_identity() {
        assert_eq!(rank(&Matrix::<Rational>::zeros(3, 4)), 0);
        assert_eq!(rank(&Matrix::<Rational>::identity(5)), 5);
        assert_eq!(rank(&Matrix::<f64>::zeros(3, 4)), 0);
        assert_eq!(rank(&Matrix::<f64>::identity(5)), 5);
    }

    #[test]
    fn nullspace_trivial_cases() {
        assert!(nullspace(&Matrix::<Rational>::identity(4)).is_empty());
        assert_eq!(nullspace(&Matrix::<Rational>::zeros(2, 4)).len(), 4);
        assert_eq!(nullspace(&Matrix::<f64>::zeros(2, 4)).len(), 4);
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let m = qm(3, 5, &[1, 2, 0, -1, 3, 2, 4, 1, 0, 0, 3, 6, 1, -1, 3]);
        let k = nullspace(&m);
        assert_eq!(k.len() + rank(&m), 5);
        for v in &k {
            assert!(m.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn exact_fallback_agrees_with_modular_path() {
        let m = qm(4, 4, &[2, -1, 0, 0, -1, 2, -1, 0, 0, -1, 2, -1, 1, 0, -1, 1]);
        let a = modular_row_basis(&m).unwrap();
        let b = exact_row_basis(&m);
        assert_eq!(a.rows.len(), b.rows.len());
        assert_eq!(a.kernel.len(), b.kernel.len());
    }

    #[test]
    fn min_norm_examples() {
        let x = min_norm_solve(&Matrix::<Rational>::identity(3), &[q(1), q(-2), q(5)]).unwrap();
        assert_eq!(x, vec![q(1), q(-2), q(5)]);
        let x = min_norm_solve(&qm(1, 2, &[1, 1]), &[q(2)]).unwrap();
        assert_eq!(x, vec![q(1), q(1)]);
    }

    #[test]
    fn min_norm_detects_inconsistency() {
        let m = qm(2, 2, &[1, 1, 2, 2]);
        assert!(matches!(
            min_norm_solve(&m, &[q(1), q(3)]),
            Err(LinalgError::InconsistentSystem { .. })
        ));
    }

    #[test]
    fn min_norm_solution_is_orthogonal_to_kernel() {
        let m = qm(2, 4, &[1, 2, 0, 1, 0, 1, 1, -1]);
        let x = min_norm_solve(&m, &[q(3), q(1)]).unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), vec![q(3), q(1)]);
        for v in nullspace(&m) {
            assert!(super::super::matrix::dot(&x, &v).is_zero());
        }
    }

    #[test]
    fn inverse_round_trip() {
        let m = qm(3, 3, &[2, 1, 0, 1, 3, 1, 0, 1, 4]);
        let inv = inverse(&m).unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(3));
        assert!(matches!(inverse(&qm(2, 2, &[1, 2, 2, 4])), Err(LinalgError::Singular)));
    }

    #[test]
    fn float_rank_threshold() {
        let m = Matrix::from_vec(2, 2, vec![1.0, 0.0, 0.0, 1e-12]).unwrap();
        assert_eq!(rank(&m), 1);
        let m = Matrix::from_vec(2, 2, vec![1.0, 0.0, 0.0, 1e-6]).unwrap();
        assert_eq!(rank(&m), 2);
    }
}
