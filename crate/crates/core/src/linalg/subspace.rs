use std::sync::{Arc, OnceLock};

use super::elimination::{inverse, nullspace, row_basis};
use super::matrix::{weighted_dot, Matrix};
use super::LinalgError;
use crate::scalar::Scalar;

/// Binary subspace operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubspaceOp {
    Intersect,
    SpanUnion,
    /// `{v in b : v orthogonal to a}` for `apply(a, b, ..)`.
    OrthoComplementWithin,
}

/// A linear subspace given by linearly independent vectors.
///
/// The ambient space carries a diagonal inner product: `weights` of `None`
/// means the standard one. The Gram matrix and its inverse are computed once.
#[derive(Debug, Clone)]
pub struct SubspaceBasis<T> {
    ambient_dim: usize,
    weights: Option<Arc<Vec<T>>>,
    vectors: Vec<Vec<T>>,
    gram: Matrix<T>,
    gram_inverse: OnceLock<Matrix<T>>,
}

impl<T: Scalar> SubspaceBasis<T> {
    /// Basis of the span of arbitrary vectors; dependent vectors are dropped.
    pub fn from_spanning(
        ambient_dim: usize,
        weights: Option<Arc<Vec<T>>>,
        vectors: Vec<Vec<T>>,
    ) -> Result<Self, LinalgError> {
        for v in &vectors {
            if v.len() != ambient_dim {
                return Err(LinalgError::ShapeMismatch { expected: ambient_dim, found: v.len() });
            }
        }
        let m = Matrix::from_rows(ambient_dim, &vectors)?;
        let keep = row_basis(&m).rows;
        let mut vectors = vectors;
        let picked: Vec<Vec<T>> = keep.into_iter().map(|i| std::mem::take(&mut vectors[i])).collect();
        Ok(Self::from_independent(ambient_dim, weights, picked))
    }

    /// Trusts that `vectors` are independent.
    pub fn from_independent(
        ambient_dim: usize,
        weights: Option<Arc<Vec<T>>>,
        vectors: Vec<Vec<T>>,
    ) -> Self {
        let w = weights.as_deref().map(|w| w.as_slice());
        let k = vectors.len();
        let mut gram = Matrix::zeros(k, k);
        for i in 0..k {
            for j in i..k {
                let g = weighted_dot(&vectors[i], &vectors[j], w);
                gram[(j, i)] = g.clone();
                gram[(i, j)] = g;
            }
        }
        Self { ambient_dim, weights, vectors, gram, gram_inverse: OnceLock::new() }
    }

    pub fn zero(ambient_dim: usize, weights: Option<Arc<Vec<T>>>) -> Self {
        Self::from_independent(ambient_dim, weights, Vec::new())
    }

    pub fn full(ambient_dim: usize, weights: Option<Arc<Vec<T>>>) -> Self {
        let vectors = (0..ambient_dim)
            .map(|i| {
                let mut v = vec![T::zero(); ambient_dim];
                v[i] = T::one();
                v
            })
            .collect();
        Self::from_independent(ambient_dim, weights, vectors)
    }

    /// `ker(op)` for an operator given as a matrix acting on ambient coordinates.
    pub fn kernel_of(op: &Matrix<T>, weights: Option<Arc<Vec<T>>>) -> Self {
        Self::from_independent(op.cols(), weights, nullspace(op))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<T>] {
        &self.vectors
    }

    pub fn gram(&self) -> &Matrix<T> {
        &self.gram
    }

    pub fn weights(&self) -> Option<&[T]> {
        self.weights.as_deref().map(|w| w.as_slice())
    }

    pub fn shared_weights(&self) -> Option<Arc<Vec<T>>> {
        self.weights.clone()
    }

    pub fn inner(&self, a: &[T], b: &[T]) -> T {
        weighted_dot(a, b, self.weights())
    }

    fn gram_inverse(&self) -> &Matrix<T> {
        self.gram_inverse
            .get_or_init(|| inverse(&self.gram).expect("Gram matrix of independent vectors is invertible"))
    }

    /// Coefficients of the orthogonal projection of `v` in this basis.
    pub fn coefficients(&self, v: &[T]) -> Vec<T> {
        if self.vectors.is_empty() {
            return Vec::new();
        }
        let rhs: Vec<T> = self.vectors.iter().map(|b| self.inner(b, v)).collect();
        self.gram_inverse().mul_vec(&rhs).expect("shapes agree")
    }

    pub fn combine(&self, coeffs: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.ambient_dim];
        for (c, b) in coeffs.iter().zip(&self.vectors) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(b) {
                if !x.is_zero() {
                    *o += c.mul_ref(x);
                }
            }
        }
        out
    }

    /// Orthogonal projection onto the subspace.
    pub fn project(&self, v: &[T]) -> Vec<T> {
        self.combine(&self.coefficients(v))
    }

    pub fn contains(&self, v: &[T]) -> bool {
        let p = self.project(v);
        let scale = crate::scalar::max_abs(v);
        p.iter().zip(v).all(|(a, b)| (a.clone() - b.clone()).is_negligible(&scale))
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        other.vectors.iter().all(|v| self.contains(v))
    }

    /// Equality as sets (mutual containment).
    pub fn same_subspace(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other) && other.contains_subspace(self)
    }

    pub fn is_orthogonal_to(&self, other: &Self) -> bool {
        let scale = self.gram.max_abs().to_f64().max(other.gram.max_abs().to_f64());
        let scale = T::from_f64(scale).unwrap_or_else(T::one);
        self.vectors
            .iter()
            .all(|a| other.vectors.iter().all(|b| self.inner(a, b).is_negligible(&scale)))
    }

    fn check_compatible(&self, other: &Self) -> Result<(), LinalgError> {
        let same_weights = match (self.weights(), other.weights()) {
            (None, None) => true,
            (Some(a), Some(b)) => a == b,
            _ => false,
        };
        if self.ambient_dim != other.ambient_dim || !same_weights {
            return Err(LinalgError::AmbientMismatch {
                left: self.ambient_dim,
                right: other.ambient_dim,
            });
        }
        Ok(())
    }

    pub fn apply(a: &Self, b: &Self, op: SubspaceOp) -> Result<Self, LinalgError> {
        match op {
            SubspaceOp::Intersect => a.intersect(b),
            SubspaceOp::SpanUnion => a.span_union(b),
            SubspaceOp::OrthoComplementWithin => a.ortho_complement_within(b),
        }
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_compatible(other)?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Self::zero(self.ambient_dim, self.weights.clone()));
        }
        // a·alpha = b·beta  <=>  [A | -B] (alpha, beta) = 0
        let ka = self.dim();
        let m = Matrix::from_fn(self.ambient_dim, ka + other.dim(), |i, j| {
            if j < ka {
                self.vectors[j][i].clone()
            } else {
                -other.vectors[j - ka][i].clone()
            }
        });
        let vectors: Vec<Vec<T>> =
            nullspace(&m).into_iter().map(|k| self.combine(&k[..ka])).collect();
        Self::from_spanning(self.ambient_dim, self.weights.clone(), vectors)
    }

    pub fn span_union(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_compatible(other)?;
        let mut vectors = self.vectors.clone();
        vectors.extend(other.vectors.iter().cloned());
        Self::from_spanning(self.ambient_dim, self.weights.clone(), vectors)
    }

    /// `{v in within : <v, a> = 0 for all a in self}`.
    pub fn ortho_complement_within(&self, within: &Self) -> Result<Self, LinalgError> {
        self.check_compatible(within)?;
        if self.dim() == 0 {
            return Ok(within.clone());
        }
        let m = Matrix::from_fn(self.dim(), within.dim(), |i, j| {
            self.inner(&self.vectors[i], &within.vectors[j])
        });
        let vectors: Vec<Vec<T>> = nullspace(&m).into_iter().map(|k| within.combine(&k)).collect();
        Ok(Self::from_independent(self.ambient_dim, self.weights.clone(), vectors))
    }

    /// Matrix whose rows are the basis vectors.
    pub fn as_row_matrix(&self) -> Matrix<T> {
        Matrix::from_rows(self.ambient_dim, &self.vectors).expect("basis vectors have ambient length")
    }

    /// Same subspace with every coordinate converted by `f`.
    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> SubspaceBasis<U> {
        let weights = self.weights.as_ref().map(|w| Arc::new(w.iter().map(&f).collect::<Vec<U>>()));
        let vectors = self.vectors.iter().map(|v| v.iter().map(&f).collect()).collect();
        SubspaceBasis::from_independent(self.ambient_dim, weights, vectors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn span(vs: &[&[i64]]) -> SubspaceBasis<Rational> {
        let vectors = vs.iter().map(|v| v.iter().map(|&x| q(x)).collect()).collect();
        SubspaceBasis::from_spanning(vs[0].len(), None, vectors).unwrap()
    }

    #[test]
    fn intersect_with_self_is_self() {
        let x = span(&[&[1, 0, 1, 0], &[0, 1, 1, 2]]);
        let i = x.intersect(&x).unwrap();
        assert!(i.same_subspace(&x));
    }

    #[test]
    fn complement_of_self_is_zero() {
        let x = span(&[&[1, 0, 1, 0], &[0, 1, 1, 2]]);
        assert_eq!(x.ortho_complement_within(&x).unwrap().dim(), 0);
    }

    #[test]
    fn union_and_intersection_dimensions() {
        let a = span(&[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let b = span(&[&[0, 1, 0, 0], &[0, 0, 1, 0]]);
        assert_eq!(a.intersect(&b).unwrap().dim(), 1);
        assert_eq!(a.span_union(&b).unwrap().dim(), 3);
        let c = a.ortho_complement_within(&b).unwrap();
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&[q(0), q(0), q(5), q(0)]));
    }

    #[test]
    fn weighted_complement_uses_weights() {
        let w = Some(Arc::new(vec![q(1), q(2)]));
        let a = SubspaceBasis::from_spanning(2, w.clone(), vec![vec![q(1), q(1)]]).unwrap();
        let full = SubspaceBasis::full(2, w);
        let c = a.ortho_complement_within(&full).unwrap();
        assert_eq!(c.dim(), 1);
        // (2, -1) has weighted product 1*2*1 + 2*1*(-1) = 0 with (1, 1)
        assert!(c.contains(&[q(2), q(-1)]));
    }

    #[test]
    fn ambient_mismatch_is_reported() {
        let a = span(&[&[1, 0]]);
        let b = span(&[&[1, 0, 0]]);
        assert!(matches!(a.intersect(&b), Err(LinalgError::AmbientMismatch { .. })));
    }

    #[test]
    fn projection_is_idempotent() {
        let a = span(&[&[1, 2, 0], &[0, 1, 1]]);
        let v = vec![q(3), q(-1), q(4)];
        let p = a.project(&v);
        assert_eq!(a.project(&p), p);
        assert!(a.contains(&p));
    }
}
