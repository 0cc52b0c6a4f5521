//! Algebraic curvature tensors and the contractions and defect operators
//! acting on them.
//!
//! Slot conventions: `A[i][j][k][l] = A(e_i, e_j, e_k, e_l)` and
//! `(J*A)(x, y, z, w) = A(Jx, Jy, Jz, Jw)`.

use crate::algebra::CurvatureBasis;
use crate::form::BilinearForm;
use crate::linalg::Matrix;
use crate::model::{kaehler_form, HermitianModel};
use crate::scalar::Scalar;
use crate::tensor::{Tensor4, TensorError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CurvatureError {
    #[error("shape mismatch: expected {expected} entries, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("tensor violates the {identity} identity")]
    NotCurvature { identity: &'static str },
}

impl From<TensorError> for CurvatureError {
    fn from(e: TensorError) -> Self {
        match e {
            TensorError::ShapeMismatch { expected, found } => Self::ShapeMismatch { expected, found },
        }
    }
}

/// A rank-4 tensor with the symmetries of a Riemann curvature tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor<T> {
    model: HermitianModel,
    tensor: Tensor4<T>,
}

/// Slot masks of the six mixed terms on the right of the Gray identity.
const GRAY_MIXED: [[bool; 4]; 6] = [
    [true, true, false, false],
    [false, false, true, true],
    [true, false, true, false],
    [false, true, false, true],
    [true, false, false, true],
    [false, true, true, false],
];

impl<T: Scalar> CurvatureTensor<T> {
    /// Validates the curvature identities (exactly, or to the float entry
    /// tolerance) and wraps `tensor`.
    pub fn new(model: HermitianModel, tensor: Tensor4<T>) -> Result<Self, CurvatureError> {
        check_shape(&model, &tensor)?;
        if let Some(identity) = violated_identity(&tensor) {
            return Err(CurvatureError::NotCurvature { identity });
        }
        Ok(Self { model, tensor })
    }

    /// Wraps a tensor already known to satisfy the identities.
    pub fn new_unchecked(model: HermitianModel, tensor: Tensor4<T>) -> Self {
        Self { model, tensor }
    }

    pub fn zero(model: HermitianModel) -> Self {
        Self { model, tensor: Tensor4::zeros(model.dim()) }
    }

    pub fn from_coords(model: HermitianModel, coords: &[T]) -> Self {
        let basis = CurvatureBasis::shared(model.dim());
        Self { model, tensor: basis.tensor(coords) }
    }

    pub fn coords(&self) -> Vec<T> {
        CurvatureBasis::shared(self.model.dim()).coords(&self.tensor)
    }

    pub fn model(&self) -> &HermitianModel {
        &self.model
    }

    pub fn tensor(&self) -> &Tensor4<T> {
        &self.tensor
    }

    pub fn into_tensor(self) -> Tensor4<T> {
        self.tensor
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &T {
        self.tensor.get(i, j, k, l)
    }

    pub fn add(&self, other: &Self) -> Result<Self, CurvatureError> {
        Ok(Self { model: self.model, tensor: self.tensor.add(&other.tensor)? })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CurvatureError> {
        Ok(Self { model: self.model, tensor: self.tensor.sub(&other.tensor)? })
    }

    pub fn scale(&self, c: &T) -> Self {
        Self { model: self.model, tensor: self.tensor.scale(c) }
    }

    pub fn is_zero(&self) -> bool {
        self.tensor.is_zero()
    }

    pub fn norm_sq(&self) -> T {
        self.tensor.norm_sq()
    }

    pub fn inner(&self, other: &Self) -> T {
        self.tensor.inner(&other.tensor)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> CurvatureTensor<U> {
        CurvatureTensor { model: self.model, tensor: self.tensor.map(f) }
    }

    pub fn to_f64(&self) -> CurvatureTensor<f64> {
        self.map(|v| v.to_f64())
    }

    /// Equality up to the entry tolerance of `T` relative to the larger magnitude.
    pub fn approx_eq(&self, other: &Self) -> bool {
        let scale = {
            let a = self.tensor.max_abs();
            let b = other.tensor.max_abs();
            if a > b {
                a
            } else {
                b
            }
        };
        match self.tensor.sub(&other.tensor) {
            Ok(d) => d.is_negligible(&scale),
            Err(_) => false,
        }
    }
}

fn check_shape<T: Scalar>(model: &HermitianModel, t: &Tensor4<T>) -> Result<(), CurvatureError> {
    if t.dim() != model.dim() {
        return Err(CurvatureError::ShapeMismatch {
            expected: model.dim().pow(4),
            found: t.data().len(),
        });
    }
    Ok(())
}

/// First violated identity, checked in the order antisymmetry, pair
/// symmetry, first Bianchi.
pub fn violated_identity<T: Scalar>(t: &Tensor4<T>) -> Option<&'static str> {
    let n = t.dim();
    let scale = t.max_abs();
    type Check<'a, T> = (&'static str, &'a dyn Fn(usize, usize, usize, usize) -> T);
    let checks: [Check<T>; 3] = [
        ("antisymmetry", &|i, j, k, l| t.get(i, j, k, l).clone() + t.get(j, i, k, l)),
        ("pair symmetry", &|i, j, k, l| t.get(i, j, k, l).clone() - t.get(k, l, i, j)),
        ("first Bianchi", &|i, j, k, l| {
            t.get(i, j, k, l).clone() + t.get(j, k, i, l) + t.get(k, i, j, l)
        }),
    ];
    for (name, check) in checks {
        for f in 0..n.pow(4) {
            let [i, j, k, l] = t.unflat(f);
            if !check(i, j, k, l).is_negligible(&scale) {
                return Some(name);
            }
        }
    }
    None
}

/// Orthogonal projection of an arbitrary rank-4 array onto 𝔄.
pub fn symmetrize<T: Scalar>(
    model: &HermitianModel,
    raw: &Tensor4<T>,
) -> Result<CurvatureTensor<T>, CurvatureError> {
    check_shape(model, raw)?;
    let basis = CurvatureBasis::shared(model.dim());
    Ok(CurvatureTensor { model: *model, tensor: basis.tensor(&basis.coords(raw)) })
}

/// `ρ(x, y) = Σ_i A(e_i, x, y, e_i)`.
pub fn ricci<T: Scalar>(a: &CurvatureTensor<T>) -> BilinearForm<T> {
    ricci_raw(&a.tensor)
}

pub(crate) fn ricci_raw<T: Scalar>(t: &Tensor4<T>) -> BilinearForm<T> {
    let n = t.dim();
    BilinearForm::from_fn(n, |j, k| {
        let mut acc = T::zero();
        for i in 0..n {
            acc += t.get(i, j, k, i);
        }
        acc
    })
}

pub fn tau<T: Scalar>(a: &CurvatureTensor<T>) -> T {
    ricci(a).trace()
}

/// `ρ⋆(x, y) = Σ_i A(e_i, x, Jy, Je_i)`.
pub fn star_ricci<T: Scalar>(a: &CurvatureTensor<T>) -> BilinearForm<T> {
    star_ricci_raw(&a.model, &a.tensor)
}

pub(crate) fn star_ricci_raw<T: Scalar>(model: &HermitianModel, t: &Tensor4<T>) -> BilinearForm<T> {
    let n = t.dim();
    BilinearForm::from_fn(n, |j, k| {
        let (pk, sk) = model.j_image(k);
        let mut acc = T::zero();
        for i in 0..n {
            let (pi, si) = model.j_image(i);
            let v = t.get(i, j, pk, pi);
            if sk * si > 0 {
                acc += v;
            } else {
                acc -= v;
            }
        }
        acc
    })
}

pub fn tau_star<T: Scalar>(a: &CurvatureTensor<T>) -> T {
    star_ricci(a).trace()
}

/// `(T*A)(x, y, z, w) = A(Tx, Ty, Tz, Tw)`.
pub fn pullback<T: Scalar>(
    a: &CurvatureTensor<T>,
    t: &Matrix<T>,
) -> Result<CurvatureTensor<T>, CurvatureError> {
    Ok(CurvatureTensor { model: a.model, tensor: a.tensor.pullback(t)? })
}

/// `J*A`.
pub fn j_star<T: Scalar>(a: &CurvatureTensor<T>) -> CurvatureTensor<T> {
    CurvatureTensor { model: a.model, tensor: a.tensor.with_j(&a.model, [true; 4]) }
}

/// `A⋆(x, y, z, w) = A(x, y, Jz, Jw)`; not a curvature tensor in general.
pub fn star_tensor<T: Scalar>(a: &CurvatureTensor<T>) -> Tensor4<T> {
    a.tensor.with_j(&a.model, [false, false, true, true])
}

/// Left side minus right side of the Gray identity, as a raw array.
pub fn gray_defect<T: Scalar>(a: &CurvatureTensor<T>) -> Tensor4<T> {
    gray_defect_raw(&a.model, &a.tensor)
}

pub(crate) fn gray_defect_raw<T: Scalar>(model: &HermitianModel, t: &Tensor4<T>) -> Tensor4<T> {
    let mut out = t.add(&t.with_j(model, [true; 4])).expect("same shape");
    for mask in GRAY_MIXED {
        out = out.sub(&t.with_j(model, mask)).expect("same shape");
    }
    out
}

/// `A(Jx, y, z, w) - A(x, y, Jz, w)`; vanishes exactly on `W_7`.
pub fn w7_defect<T: Scalar>(a: &CurvatureTensor<T>) -> Tensor4<T> {
    w7_defect_raw(&a.model, &a.tensor)
}

pub(crate) fn w7_defect_raw<T: Scalar>(model: &HermitianModel, t: &Tensor4<T>) -> Tensor4<T> {
    t.with_j(model, [true, false, false, false])
        .sub(&t.with_j(model, [false, false, true, false]))
        .expect("same shape")
}

/// `r_0(x, y, z, w) = <x, z><y, w> - <x, w><y, z>`.
pub fn r0<T: Scalar>(model: &HermitianModel) -> CurvatureTensor<T> {
    let d = |a: usize, b: usize| i64::from(a == b);
    let tensor = Tensor4::from_fn(model.dim(), |i, j, k, l| T::from_i64(d(i, k) * d(j, l) - d(i, l) * d(j, k)));
    CurvatureTensor { model: *model, tensor }
}

/// Projection onto 𝔄 of `Ω(x, z) Ω(y, w) - Ω(x, w) Ω(y, z)`.
pub fn r_omega<T: Scalar>(model: &HermitianModel) -> CurvatureTensor<T> {
    let omega = kaehler_form::<T>(model);
    let o = |a: usize, b: usize| omega.get(a, b).clone();
    let raw = Tensor4::from_fn(model.dim(), |i, j, k, l| o(i, k) * o(j, l) - o(i, l) * o(j, k));
    symmetrize(model, &raw).expect("shape from model")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn model(n: usize) -> HermitianModel {
        HermitianModel::new(n).unwrap()
    }

    /// Average over the 8 index symmetries of `S^2(Λ^2)` minus the full
    /// antisymmetrization.
    fn group_average(raw: &Tensor4<Rational>) -> Tensor4<Rational> {
        let perms8: [([usize; 4], i64); 8] = [
            ([0, 1, 2, 3], 1),
            ([1, 0, 2, 3], -1),
            ([0, 1, 3, 2], -1),
            ([1, 0, 3, 2], 1),
            ([2, 3, 0, 1], 1),
            ([3, 2, 0, 1], -1),
            ([2, 3, 1, 0], -1),
            ([3, 2, 1, 0], 1),
        ];
        let mut sym = Tensor4::zeros(raw.dim());
        for (p, s) in perms8 {
            sym = sym.add(&raw.permuted(p).scale(&q(s))).unwrap();
        }
        let sym = sym.scale(&Rational::from_ratio(1, 8));
        let mut alt = Tensor4::zeros(raw.dim());
        for p in all_perms() {
            alt = alt.add(&raw.permuted(p).scale(&q(parity(p)))).unwrap();
        }
        sym.sub(&alt.scale(&Rational::from_ratio(1, 24))).unwrap()
    }

    fn all_perms() -> Vec<[usize; 4]> {
        let mut out = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let p = [a, b, c, d];
                        let mut s = p;
                        s.sort();
                        if s == [0, 1, 2, 3] {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }

    fn parity(p: [usize; 4]) -> i64 {
        let mut inv = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if p[i] > p[j] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }

    fn raw_from(dim: usize, seed: &[i64]) -> Tensor4<Rational> {
        Tensor4::from_fn(dim, |i, j, k, l| {
            let f = ((i * dim + j) * dim + k) * dim + l;
            q(seed[f % seed.len()] - (f as i64 % 3))
        })
    }

    #[test]
    fn symmetrize_matches_group_average() {
        let m = model(2);
        let raw = raw_from(4, &[3, -1, 4, 1, -5, 9, 2, -6, 5]);
        assert_eq!(symmetrize(&m, &raw).unwrap().tensor, group_average(&raw));
    }

    #[test]
    fn symmetrize_fixes_curvature_tensors() {
        let m = model(2);
        let r = r0::<Rational>(&m);
        assert_eq!(symmetrize(&m, r.tensor()).unwrap(), r);
        assert!(violated_identity(r.tensor()).is_none());
    }

    #[test]
    fn symmetrize_kills_symmetric_first_pair() {
        let m = model(2);
        let raw = Tensor4::from_fn(4, |i, j, k, l| q(((i + j) * 3 + k * 5 + l * l) as i64 % 7));
        assert!(symmetrize(&m, &raw).unwrap().is_zero());
        assert!(group_average(&raw).is_zero());
    }

    #[test]
    fn symmetrize_shape_mismatch() {
        let m = model(2);
        assert!(matches!(
            symmetrize(&m, &Tensor4::<Rational>::zeros(6)),
            Err(CurvatureError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn new_rejects_non_curvature() {
        let m = model(2);
        let mut t = Tensor4::<Rational>::zeros(4);
        t.set(0, 1, 0, 1, q(1));
        assert_eq!(
            CurvatureTensor::new(m, t).unwrap_err(),
            CurvatureError::NotCurvature { identity: "antisymmetry" }
        );
    }

    #[test]
    fn contractions_of_r0() {
        for n in 2..=4 {
            let m = model(n);
            let r = r0::<Rational>(&m);
            let dim = q(2 * n as i64);
            assert_eq!(ricci(&r), BilinearForm::identity(2 * n).scale(&(q(1) - dim.clone())));
            assert_eq!(tau(&r), dim.clone() * (q(1) - dim.clone()));
            assert_eq!(star_ricci(&r), BilinearForm::identity(2 * n).scale(&q(-1)));
            assert_eq!(tau_star(&r), -dim);
        }
    }

    #[test]
    fn zero_tensor_contracts_to_zero() {
        let z = CurvatureTensor::<Rational>::zero(model(3));
        assert!(ricci(&z).is_zero());
        assert!(star_ricci(&z).is_zero());
        assert!(gray_defect(&z).is_zero());
        assert!(w7_defect(&z).is_zero());
        assert!(j_star(&z).is_zero());
    }

    #[test]
    fn r0_is_not_in_w7() {
        let m = model(2);
        assert!(!w7_defect(&r0::<Rational>(&m)).is_zero());
    }

    #[test]
    fn r_omega_independent_of_r0() {
        let m = model(3);
        let a = r0::<Rational>(&m);
        let b = r_omega::<Rational>(&m);
        assert!(!b.is_zero());
        let g = Matrix::from_fn(2, 2, |i, j| {
            let x = if i == 0 { &a } else { &b };
            let y = if j == 0 { &a } else { &b };
            x.inner(y)
        });
        let det = g[(0, 0)].clone() * &g[(1, 1)] - g[(0, 1)].clone() * &g[(1, 0)];
        assert!(!det.is_zero());
        assert_eq!(j_star(&b), b);
    }

    #[test]
    fn pullback_by_j_twice_is_identity() {
        let m = model(2);
        let a = symmetrize(&m, &raw_from(4, &[2, 7, -1, 8, 2, -8])).unwrap();
        let j = m.j_matrix::<Rational>();
        let jj = pullback(&pullback(&a, &j).unwrap(), &j).unwrap();
        assert_eq!(jj, a);
        assert_eq!(pullback(&a, &Matrix::identity(4)).unwrap(), a);
        assert_eq!(pullback(&a, &j).unwrap(), j_star(&a));
    }

    #[test]
    fn random_orthogonal_preserves_tau() {
        let m = model(2);
        let a = symmetrize(&m, &raw_from(4, &[1, 4, -2, 8, 5, -7])).unwrap().to_f64();
        let u = crate::model::random_unitary(&m, 7);
        let p = pullback(&a, &u).unwrap();
        assert!((tau(&p) - tau(&a)).abs() < 1e-10);
        assert!((tau_star(&p) - tau_star(&a)).abs() < 1e-10);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn symmetrize_properties(seed in proptest::collection::vec(-9i64..10, 1..40)) {
            let m = model(2);
            let raw = raw_from(4, &seed);
            let a = symmetrize(&m, &raw).unwrap();
            prop_assert!(violated_identity(a.tensor()).is_none());
            prop_assert_eq!(&symmetrize(&m, a.tensor()).unwrap(), &a);
            // self-adjoint: <S raw, other> = <raw, S other>
            let other = raw_from(4, &[seed[0], 3, -2]);
            let b = symmetrize(&m, &other).unwrap();
            prop_assert_eq!(a.tensor().inner(&other), raw.inner(b.tensor()));
            prop_assert!(ricci(&a).is_symmetric());
            // linearity of the defects
            let sum = a.add(&b).unwrap();
            prop_assert_eq!(gray_defect(&sum), gray_defect(&a).add(&gray_defect(&b)).unwrap());
            prop_assert_eq!(w7_defect(&sum), w7_defect(&a).add(&w7_defect(&b)).unwrap());
            prop_assert_eq!(j_star(&j_star(&a)), a);
        }
    }
}
