//! The Hermitian vector space `(R^{2n}, <.,.>, J)` in a canonical basis.
//!
//! The basis is ordered `(x_1, ..., x_n, y_1, ..., y_n)` with `J x_i = y_i`
//! and `J y_i = -x_i`; the inner product is the identity. `J` is a signed
//! permutation of the basis, which the tensor code uses directly.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::form::BilinearForm;
use crate::linalg::{inverse, Matrix};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("complex dimension {n} is too small (need n >= 2)")]
    DimensionTooSmall { n: usize },
    #[error("inner product is not positive definite")]
    NotPositiveDefinite,
    #[error("J does not square to -1")]
    NotComplexStructure,
    #[error("J does not preserve the inner product")]
    NotCompatible,
    #[error("normalizing a basis vector needs the square root of {value}, which is not in the field")]
    IrrationalNormalization { value: String },
    #[error("expected a {expected}x{expected} matrix")]
    ShapeMismatch { expected: usize },
}

/// Canonical Hermitian model of complex dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HermitianModel {
    n: usize,
}

impl HermitianModel {
    pub fn new(n: usize) -> Result<Self, ModelError> {
        if n < 2 {
            return Err(ModelError::DimensionTooSmall { n });
        }
        Ok(Self { n })
    }

    /// Complex dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Real dimension `2n`.
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// `J e_i = sign * e_index`.
    #[inline]
    pub fn j_image(&self, i: usize) -> (usize, i8) {
        if i < self.n {
            (i + self.n, 1)
        } else {
            (i - self.n, -1)
        }
    }

    /// Matrix of `J`: column `j` holds `J e_j`.
    pub fn j_matrix<T: Scalar>(&self) -> Matrix<T> {
        let mut m = Matrix::zeros(self.dim(), self.dim());
        for j in 0..self.dim() {
            let (i, s) = self.j_image(j);
            m[(i, j)] = T::from_i64(s as i64);
        }
        m
    }

    pub fn metric<T: Scalar>(&self) -> BilinearForm<T> {
        BilinearForm::identity(self.dim())
    }

    /// Name of basis vector `i` (`x1`, ..., `yn`).
    pub fn basis_label(&self, i: usize) -> String {
        if i < self.n {
            format!("x{}", i + 1)
        } else {
            format!("y{}", i - self.n + 1)
        }
    }

    /// Index of `x_a` (1-based `a`).
    pub fn x(&self, a: usize) -> usize {
        a - 1
    }

    /// Index of `y_a` (1-based `a`).
    pub fn y(&self, a: usize) -> usize {
        self.n + a - 1
    }
}

/// `standard_model(n)`.
pub fn standard_model(n: usize) -> Result<HermitianModel, ModelError> {
    HermitianModel::new(n)
}

/// Kaehler form `Omega(x, y) = <x, J y>`.
pub fn kaehler_form<T: Scalar>(model: &HermitianModel) -> BilinearForm<T> {
    // with the identity metric, Omega_ij = <e_i, J e_j> = J_ij
    BilinearForm::from_matrix(model.j_matrix())
}

/// Seeded random element of the unitary group `{U : UJ = JU, U^T U = 1}`.
///
/// A random antisymmetric matrix is projected onto the commutant of `J`
/// (the unitary Lie algebra) and exponentiated.
pub fn random_unitary(model: &HermitianModel, seed: u64) -> Matrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = model.dim();
    let mut a = DMatrix::<f64>::zeros(d, d);
    for i in 0..d {
        for j in (i + 1)..d {
            let v: f64 = StandardNormal.sample(&mut rng);
            a[(i, j)] = v;
            a[(j, i)] = -v;
        }
    }
    unitary_exp(model, &a)
}

/// `exp` of the projection of `generator` onto the unitary Lie algebra.
pub fn unitary_exp(model: &HermitianModel, generator: &DMatrix<f64>) -> Matrix<f64> {
    let d = model.dim();
    let j = DMatrix::from_fn(d, d, |r, c| model.j_matrix::<f64>()[(r, c)]);
    let anti = (generator - generator.transpose()) * 0.5;
    let x = (&anti - &j * &anti * &j) * 0.5;
    let u = x.exp();
    Matrix::from_fn(d, d, |r, c| u[(r, c)])
}

fn check_square<T: Scalar>(m: &Matrix<T>, d: usize) -> Result<(), ModelError> {
    if m.rows() != d || m.cols() != d {
        return Err(ModelError::ShapeMismatch { expected: d });
    }
    Ok(())
}

fn all_negligible<T: Scalar>(values: &[T], scale: &T) -> bool {
    values.iter().all(|v| v.is_negligible(scale))
}

fn is_positive_definite<T: Scalar>(g: &Matrix<T>) -> bool {
    // symmetric Gaussian elimination; all pivots must be positive
    let d = g.rows();
    let mut m = g.clone();
    let scale = m.max_abs();
    for k in 0..d {
        let p = m[(k, k)].clone();
        if p <= T::zero() || p.is_negligible(&scale) {
            return false;
        }
        for i in (k + 1)..d {
            let f = m[(i, k)].clone() / p.clone();
            for j in k..d {
                let t = f.mul_ref(&m[(k, j)]);
                m[(i, j)] -= t;
            }
        }
    }
    true
}

/// Reduces a compatible pair `(gram, J)` on `R^{2n}` to the canonical model.
///
/// Returns the model together with the matrix `C` whose columns form a
/// `gram`-orthonormal basis `(e_1, ..., e_n, J e_1, ..., J e_n)`, so that
/// `C^T gram C = 1` and `C^{-1} J C` is the standard `J`.
pub fn canonicalize<T: Scalar>(
    gram: &BilinearForm<T>,
    j_raw: &Matrix<T>,
) -> Result<(HermitianModel, Matrix<T>), ModelError> {
    let d = gram.dim();
    if !d.is_multiple_of(2) {
        return Err(ModelError::NotComplexStructure);
    }
    let model = HermitianModel::new(d / 2)?;
    let g = gram.matrix();
    check_square(j_raw, d)?;
    let scale = g.max_abs();
    let asym: Vec<T> = (0..d * d).map(|k| g[(k / d, k % d)].clone() - g[(k % d, k / d)].clone()).collect();
    if !all_negligible(&asym, &scale) || !is_positive_definite(g) {
        return Err(ModelError::NotPositiveDefinite);
    }
    let j2 = j_raw.mul(j_raw).expect("square");
    let j_scale = j_raw.max_abs();
    let plus_id: Vec<T> = (0..d * d)
        .map(|k| {
            let (r, c) = (k / d, k % d);
            let id = if r == c { T::one() } else { T::zero() };
            j2[(r, c)].clone() + id
        })
        .collect();
    if !all_negligible(&plus_id, &(j_scale.clone() * j_scale)) {
        return Err(ModelError::NotComplexStructure);
    }
    let pulled = j_raw.transpose().mul(g).and_then(|m| m.mul(j_raw)).expect("square");
    let diff: Vec<T> = pulled.as_slice().iter().zip(g.as_slice()).map(|(a, b)| a.clone() - b.clone()).collect();
    if !all_negligible(&diff, &scale) {
        return Err(ModelError::NotCompatible);
    }

    let inner = |a: &[T], b: &[T]| -> T { crate::linalg::dot(a, &g.mul_vec(b).expect("square")) };
    let apply_j = |v: &[T]| -> Vec<T> { j_raw.mul_vec(v).expect("square") };
    let mut firsts: Vec<Vec<T>> = Vec::new();
    let mut chosen: Vec<Vec<T>> = Vec::new();
    for i in 0..d {
        if firsts.len() == model.n() {
            break;
        }
        let mut v = vec![T::zero(); d];
        v[i] = T::one();
        for e in &chosen {
            let c = inner(e, &v);
            for (vk, ek) in v.iter_mut().zip(e) {
                *vk -= c.mul_ref(ek);
            }
        }
        let norm_sq = inner(&v, &v);
        if norm_sq.is_negligible(&scale) {
            continue;
        }
        let norm = norm_sq
            .sqrt_exact()
            .ok_or_else(|| ModelError::IrrationalNormalization { value: norm_sq.format_scalar() })?;
        let e: Vec<T> = v.into_iter().map(|x| x / norm.clone()).collect();
        let je = apply_j(&e);
        chosen.push(e.clone());
        chosen.push(je);
        firsts.push(e);
    }
    let mut columns = firsts.clone();
    columns.extend(firsts.iter().map(|e| apply_j(e)));
    let c = Matrix::from_columns(d, &columns).expect("column lengths agree");
    Ok((model, c))
}

/// Inverse of a change-of-basis matrix, for mapping back to the input frame.
pub fn change_of_basis_inverse<T: Scalar>(c: &Matrix<T>) -> Option<Matrix<T>> {
    inverse(c).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_traits::Zero;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    #[test]
    fn dimension_too_small() {
        assert_eq!(standard_model(1), Err(ModelError::DimensionTooSmall { n: 1 }));
        assert!(standard_model(2).is_ok());
    }

    #[test]
    fn j_is_standard_block() {
        let m = standard_model(2).unwrap();
        let j = m.j_matrix::<Rational>();
        // J e1 = e3 with ordering (x1, x2, y1, y2)
        assert_eq!(j.column(0), vec![q(0), q(0), q(1), q(0)]);
        assert_eq!(j.column(2), vec![q(-1), q(0), q(0), q(0)]);
    }

    #[test]
    fn j_squares_to_minus_one_and_is_orthogonal() {
        for n in 2..=4 {
            let m = standard_model(n).unwrap();
            let j = m.j_matrix::<Rational>();
            let j2 = j.mul(&j).unwrap();
            let minus_id = Matrix::from_fn(m.dim(), m.dim(), |a, b| if a == b { q(-1) } else { q(0) });
            assert_eq!(j2, minus_id);
            assert_eq!(j.transpose().mul(&j).unwrap(), Matrix::identity(m.dim()));
        }
    }

    #[test]
    fn kaehler_form_values() {
        let m = standard_model(2).unwrap();
        let omega = kaehler_form::<Rational>(&m);
        assert_eq!(omega.get(m.x(1), m.y(1)), &q(-1));
        assert_eq!(omega.get(m.x(1), m.x(1)), &q(0));
        assert!(omega.is_antisymmetric());
        assert_eq!(omega.j_pullback(&m), omega);
    }

    #[test]
    fn random_unitary_commutes_with_j() {
        let m = standard_model(3).unwrap();
        let j = m.j_matrix::<f64>();
        for seed in 0..5 {
            let u = random_unitary(&m, seed);
            let uj = u.mul(&j).unwrap();
            let ju = j.mul(&u).unwrap();
            let utu = u.transpose().mul(&u).unwrap();
            for r in 0..m.dim() {
                for c in 0..m.dim() {
                    assert!((uj[(r, c)] - ju[(r, c)]).abs() < 1e-12);
                    let id = if r == c { 1.0 } else { 0.0 };
                    assert!((utu[(r, c)] - id).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let m = standard_model(2).unwrap();
        let u = unitary_exp(&m, &DMatrix::zeros(4, 4));
        assert_eq!(u, Matrix::identity(4));
    }

    #[test]
    fn different_seeds_give_different_unitaries() {
        let m = standard_model(2).unwrap();
        let (a, b) = (random_unitary(&m, 1), random_unitary(&m, 2));
        let diff: f64 =
            a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
        assert!(diff > 1e-3);
    }

    #[test]
    fn unitary_preserves_kaehler_form() {
        let m = standard_model(2).unwrap();
        let omega = kaehler_form::<f64>(&m);
        let u = random_unitary(&m, 7);
        let pulled = u.transpose().mul(omega.matrix()).unwrap().mul(&u).unwrap();
        for (a, b) in pulled.as_slice().iter().zip(omega.matrix().as_slice()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn canonical_input_gives_identity() {
        let m = standard_model(2).unwrap();
        let (model, c) = canonicalize(&m.metric::<Rational>(), &m.j_matrix()).unwrap();
        assert_eq!(model, m);
        assert_eq!(c, Matrix::identity(4));
    }

    #[test]
    fn scaled_metric_gives_half_scaling() {
        let m = standard_model(2).unwrap();
        let gram = BilinearForm::from_matrix(Matrix::from_fn(4, 4, |a, b| if a == b { q(4) } else { q(0) }));
        let (_, c) = canonicalize(&gram, &m.j_matrix()).unwrap();
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(c, Matrix::from_fn(4, 4, |a, b| if a == b { half.clone() } else { Rational::zero() }));
    }

    #[test]
    fn canonicalize_rejects_bad_input() {
        let m = standard_model(2).unwrap();
        let j = m.j_matrix::<Rational>();
        let neg = BilinearForm::from_matrix(Matrix::from_fn(4, 4, |a, b| if a == b { q(-1) } else { q(0) }));
        assert_eq!(canonicalize(&neg, &j).unwrap_err(), ModelError::NotPositiveDefinite);
        assert_eq!(
            canonicalize(&m.metric(), &Matrix::<Rational>::identity(4)).unwrap_err(),
            ModelError::NotComplexStructure
        );
        let skew = BilinearForm::from_matrix(Matrix::from_fn(4, 4, |a, b| {
            if a == b {
                if a == 0 { q(2) } else { q(1) }
            } else {
                q(0)
            }
        }));
        assert_eq!(canonicalize(&skew, &j).unwrap_err(), ModelError::NotCompatible);
    }

    #[test]
    fn canonicalize_round_trip_on_conjugated_pair() {
        let m = standard_model(2).unwrap();
        // conjugate the canonical pair by a known invertible map P
        let p = Matrix::from_vec(
            4,
            4,
            vec![2.0, 1.0, 0.0, 0.5, 0.0, 1.0, -1.0, 0.0, 0.3, 0.0, 1.5, 0.0, 0.0, 0.2, 0.0, 1.0],
        )
        .unwrap();
        let p_inv = inverse(&p).unwrap();
        let gram = BilinearForm::from_matrix(p_inv.transpose().mul(&p_inv).unwrap());
        let j_raw = p.mul(&m.j_matrix()).unwrap().mul(&p_inv).unwrap();
        let (_, c) = canonicalize(&gram, &j_raw).unwrap();
        let ctgc = c.transpose().mul(gram.matrix()).unwrap().mul(&c).unwrap();
        let cjc = inverse(&c).unwrap().mul(&j_raw).unwrap().mul(&c).unwrap();
        let j = m.j_matrix::<f64>();
        for r in 0..4 {
            for s in 0..4 {
                let id = if r == s { 1.0f64 } else { 0.0 };
                assert!((ctgc[(r, s)] - id).abs() < 1e-10);
                assert!((cjc[(r, s)] - j[(r, s)]).abs() < 1e-10);
            }
        }
        let back = c.mul(&change_of_basis_inverse(&c).unwrap()).unwrap();
        for r in 0..4 {
            for s in 0..4 {
                let id = if r == s { 1.0f64 } else { 0.0 };
                assert!((back[(r, s)] - id).abs() < 1e-12);
            }
        }
    }
}
