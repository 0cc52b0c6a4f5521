//! An orthogonal integer basis of the space of algebraic curvature tensors.
//!
//! With `E(p, q)` the unit element of `S^2(Λ^2)` attached to index pairs
//! `p = (a, b)`, `q = (c, d)`, the basis consists of
//!
//! * `E(p, q)` whenever `p` and `q` share an index (including `p = q`);
//! * for each `a < b < c < d`, the two vectors
//!   `u = E(ab, cd) + E(ac, bd)` and `v = -E(ab, cd) + E(ac, bd) + 2 E(ad, bc)`,
//!   which span the solutions of the Bianchi relation
//!   `R_abcd - R_acbd + R_adbc = 0` on that block.
//!
//! Distinct elements have disjoint support or are orthogonal inside their
//! block, so the Frobenius inner product is diagonal in these coordinates.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::tensor::Tensor4;

#[derive(Debug, Clone)]
pub struct CurvatureBasis {
    dim: usize,
    /// Sparse `(flat index, coefficient)` lists, one per basis tensor.
    elements: Vec<Vec<(usize, i64)>>,
    /// Squared Frobenius norms of the basis tensors.
    weights: Vec<i64>,
}

/// `dim 𝔄 = N^2 (N^2 - 1) / 12` for `N = dim V`.
pub fn algebra_dimension(dim: usize) -> usize {
    dim * dim * (dim * dim - 1) / 12
}

impl CurvatureBasis {
    pub fn new(dim: usize) -> Self {
        let flat = |i: usize, j: usize, k: usize, l: usize| ((i * dim + j) * dim + k) * dim + l;
        // entries of E((a,b),(c,d)) with multiplicity
        let unit = |a: usize, b: usize, c: usize, d: usize| -> Vec<(usize, i64)> {
            let mut m: HashMap<usize, i64> = HashMap::new();
            for (x, y, z, w, s) in [
                (a, b, c, d, 1),
                (b, a, c, d, -1),
                (a, b, d, c, -1),
                (b, a, d, c, 1),
                (c, d, a, b, 1),
                (d, c, a, b, -1),
                (c, d, b, a, -1),
                (d, c, b, a, 1),
            ] {
                m.insert(flat(x, y, z, w), s);
            }
            let mut v: Vec<_> = m.into_iter().collect();
            v.sort_unstable();
            v
        };
        let combine = |parts: &[(i64, Vec<(usize, i64)>)]| -> Vec<(usize, i64)> {
            let mut m: HashMap<usize, i64> = HashMap::new();
            for (c, e) in parts {
                for &(f, s) in e {
                    *m.entry(f).or_insert(0) += c * s;
                }
            }
            let mut v: Vec<_> = m.into_iter().filter(|&(_, s)| s != 0).collect();
            v.sort_unstable();
            v
        };

        let pairs: Vec<(usize, usize)> =
            (0..dim).flat_map(|a| (a + 1..dim).map(move |b| (a, b))).collect();
        let mut elements = Vec::new();
        for (pi, &(a, b)) in pairs.iter().enumerate() {
            for &(c, d) in &pairs[pi..] {
                let distinct = a != c && a != d && b != c && b != d;
                if !distinct {
                    elements.push(unit(a, b, c, d));
                } else if a < c {
                    // a < b < c < d: one Bianchi block, emitted once
                    if b < c {
                        let e1 = unit(a, b, c, d);
                        let e2 = unit(a, c, b, d);
                        let e3 = unit(a, d, b, c);
                        elements.push(combine(&[(1, e1.clone()), (1, e2.clone())]));
                        elements.push(combine(&[(-1, e1), (1, e2), (2, e3)]));
                    }
                }
            }
        }
        let weights = elements.iter().map(|e| e.iter().map(|(_, s)| s * s).sum()).collect();
        let basis = Self { dim, elements, weights };
        debug_assert_eq!(basis.len(), algebra_dimension(dim));
        basis
    }

    /// Shared basis for `dim`, built once per process.
    pub fn shared(dim: usize) -> Arc<CurvatureBasis> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<CurvatureBasis>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("basis cache poisoned");
        guard.entry(dim).or_insert_with(|| Arc::new(CurvatureBasis::new(dim))).clone()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn support(&self, k: usize) -> &[(usize, i64)] {
        &self.elements[k]
    }

    pub fn weights<T: Scalar>(&self) -> Vec<T> {
        self.weights.iter().map(|&w| T::from_i64(w)).collect()
    }

    pub fn element<T: Scalar>(&self, k: usize) -> Tensor4<T> {
        let mut t = Tensor4::zeros(self.dim);
        let data = t.data_mut();
        for &(f, s) in &self.elements[k] {
            data[f] = T::from_i64(s);
        }
        t
    }

    /// Coordinates of the orthogonal projection of `raw` onto 𝔄.
    pub fn coords<T: Scalar>(&self, raw: &Tensor4<T>) -> Vec<T> {
        debug_assert_eq!(raw.dim(), self.dim);
        let data = raw.data();
        self.elements
            .iter()
            .zip(&self.weights)
            .map(|(e, &w)| {
                let mut acc = T::zero();
                for &(f, s) in e {
                    if !data[f].is_zero() {
                        acc += data[f].mul_ref(&T::from_i64(s));
                    }
                }
                acc / T::from_i64(w)
            })
            .collect()
    }

    pub fn tensor<T: Scalar>(&self, coords: &[T]) -> Tensor4<T> {
        debug_assert_eq!(coords.len(), self.len());
        let mut t = Tensor4::zeros(self.dim);
        let data = t.data_mut();
        for (c, e) in coords.iter().zip(&self.elements) {
            if c.is_zero() {
                continue;
            }
            for &(f, s) in e {
                data[f] += c.mul_ref(&T::from_i64(s));
            }
        }
        t
    }

    /// Matrix of a linear map on 𝔄 whose outputs are flattened by `f`;
    /// column `k` is `f(b_k)`. Identically zero rows are dropped.
    pub fn operator_matrix<T: Scalar>(&self, f: impl Fn(&Tensor4<T>) -> Vec<T>) -> Matrix<T> {
        let columns: Vec<Vec<T>> = (0..self.len()).map(|k| f(&self.element(k))).collect();
        let rows = columns.first().map_or(0, |c| c.len());
        let keep: Vec<usize> =
            (0..rows).filter(|&r| columns.iter().any(|c| !c[r].is_zero())).collect();
        Matrix::from_fn(keep.len(), self.len(), |r, k| columns[k][keep[r]].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_traits::Zero;

    #[test]
    fn dimensions() {
        for (dim, expected) in [(4, 20), (6, 105), (8, 336)] {
            assert_eq!(CurvatureBasis::new(dim).len(), expected);
            assert_eq!(algebra_dimension(dim), expected);
        }
    }

    #[test]
    fn weights_are_squared_norms() {
        let b = CurvatureBasis::new(4);
        for k in 0..b.len() {
            let e = b.element::<Rational>(k);
            assert_eq!(e.norm_sq(), b.weights::<Rational>()[k]);
        }
    }

    #[test]
    fn basis_is_orthogonal() {
        let b = CurvatureBasis::new(4);
        for i in 0..b.len() {
            for j in 0..i {
                assert!(b.element::<Rational>(i).inner(&b.element(j)).is_zero());
            }
        }
    }

    #[test]
    fn coords_round_trip() {
        let b = CurvatureBasis::new(6);
        let c: Vec<Rational> = (0..b.len()).map(|k| Rational::from_ratio(k as i64 - 40, 3)).collect();
        assert_eq!(b.coords(&b.tensor(&c)), c);
    }
}
