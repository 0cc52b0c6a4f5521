//! Bilinear forms on `V` and the decomposition of `V* ⊗ V*` into
//! `R<.,.> ⊕ S²₀₊ ⊕ S²₋ ⊕ RΩ ⊕ Λ²₀₊ ⊕ Λ²₋`.

use crate::linalg::Matrix;
use crate::model::{kaehler_form, HermitianModel};
use crate::scalar::Scalar;

/// A bilinear form given by its matrix `theta(e_i, e_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearForm<T> {
    m: Matrix<T>,
}

impl<T: Scalar> BilinearForm<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { m: Matrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { m: Matrix::identity(dim) }
    }

    pub fn from_matrix(m: Matrix<T>) -> Self {
        assert_eq!(m.rows(), m.cols(), "bilinear form needs a square matrix");
        Self { m }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> T) -> Self {
        Self { m: Matrix::from_fn(dim, dim, f) }
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.m[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.m[(i, j)] = v;
    }

    pub fn entries(&self) -> &[T] {
        self.m.as_slice()
    }

    pub fn transpose(&self) -> Self {
        Self { m: self.m.transpose() }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.dim(), |i, j| self.m[(i, j)].clone() + other.m[(i, j)].clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.dim(), |i, j| self.m[(i, j)].clone() - other.m[(i, j)].clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_fn(self.dim(), |i, j| self.m[(i, j)].mul_ref(c))
    }

    /// `(J* theta)(x, y) = theta(Jx, Jy)`.
    pub fn j_pullback(&self, model: &HermitianModel) -> Self {
        Self::from_fn(self.dim(), |i, j| {
            let (a, sa) = model.j_image(i);
            let (b, sb) = model.j_image(j);
            let v = self.m[(a, b)].clone();
            if sa * sb < 0 {
                -v
            } else {
                v
            }
        })
    }

    /// Trace with respect to the canonical inner product.
    pub fn trace(&self) -> T {
        let mut t = T::zero();
        for i in 0..self.dim() {
            t += &self.m[(i, i)];
        }
        t
    }

    /// Standard inner product `sum theta_ij phi_ij`.
    pub fn inner(&self, other: &Self) -> T {
        crate::linalg::dot(self.m.as_slice(), other.m.as_slice())
    }

    pub fn norm_sq(&self) -> T {
        self.inner(self)
    }

    pub fn is_zero(&self) -> bool {
        let scale = self.m.max_abs();
        self.m.as_slice().iter().all(|v| v.is_negligible(&scale))
    }

    fn nearly_equal(&self, other: &Self) -> bool {
        let scale = self.m.max_abs();
        self.m
            .as_slice()
            .iter()
            .zip(other.m.as_slice())
            .all(|(a, b)| (a.clone() - b.clone()).is_negligible(&scale))
    }

    pub fn is_symmetric(&self) -> bool {
        self.nearly_equal(&self.transpose())
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.nearly_equal(&self.transpose().scale(&-T::one()))
    }

    pub fn is_j_invariant(&self, model: &HermitianModel) -> bool {
        self.nearly_equal(&self.j_pullback(model))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> BilinearForm<U> {
        BilinearForm { m: self.m.map(f) }
    }
}

/// The six components of a bilinear form.
///
/// `trace_coeff * <.,.>` and `omega_coeff * Omega` are the two trivial
/// summands; the four remaining parts are stored as forms.
#[derive(Debug, Clone, PartialEq)]
pub struct FormDecomposition<T> {
    pub trace_coeff: T,
    pub omega_coeff: T,
    pub sym_plus_traceless: BilinearForm<T>,
    pub sym_minus: BilinearForm<T>,
    pub alt_plus_traceless: BilinearForm<T>,
    pub alt_minus: BilinearForm<T>,
    model: HermitianModel,
}

impl<T: Scalar> FormDecomposition<T> {
    pub fn trace_part(&self) -> BilinearForm<T> {
        self.model.metric::<T>().scale(&self.trace_coeff)
    }

    pub fn omega_part(&self) -> BilinearForm<T> {
        kaehler_form::<T>(&self.model).scale(&self.omega_coeff)
    }

    /// `theta_{+,S}` = trace part + traceless part.
    pub fn sym_plus(&self) -> BilinearForm<T> {
        self.trace_part().add(&self.sym_plus_traceless)
    }

    /// `theta_{+,Λ}` = Omega part + `Λ²₀₊` part.
    pub fn alt_plus(&self) -> BilinearForm<T> {
        self.omega_part().add(&self.alt_plus_traceless)
    }

    /// The six parts in the order `<.,.>, S²₀₊, S²₋, Ω, Λ²₀₊, Λ²₋`.
    pub fn parts(&self) -> [BilinearForm<T>; 6] {
        [
            self.trace_part(),
            self.sym_plus_traceless.clone(),
            self.sym_minus.clone(),
            self.omega_part(),
            self.alt_plus_traceless.clone(),
            self.alt_minus.clone(),
        ]
    }

    pub fn sum(&self) -> BilinearForm<T> {
        let mut acc = BilinearForm::zeros(self.model.dim());
        for p in self.parts() {
            acc = acc.add(&p);
        }
        acc
    }
}

/// Splits `theta` into its six irreducible components.
pub fn decompose_form<T: Scalar>(model: &HermitianModel, theta: &BilinearForm<T>) -> FormDecomposition<T> {
    let d = model.dim();
    let quarter = T::from_ratio(1, 4);
    let tt = theta.transpose();
    let jt = theta.j_pullback(model);
    let jtt = jt.transpose();
    // theta_{±,S} = ¼{θ(x,y) + θ(y,x) ± θ(Jx,Jy) ± θ(Jy,Jx)}
    // theta_{±,Λ} = ¼{θ(x,y) - θ(y,x) ± θ(Jx,Jy) ∓ θ(Jy,Jx)}
    let sym = theta.add(&tt);
    let jsym = jt.add(&jtt);
    let alt = theta.sub(&tt);
    let jalt = jt.sub(&jtt);
    let sym_plus = sym.add(&jsym).scale(&quarter);
    let sym_minus = sym.sub(&jsym).scale(&quarter);
    let alt_plus = alt.add(&jalt).scale(&quarter);
    let alt_minus = alt.sub(&jalt).scale(&quarter);

    let two_n = T::from_i64(d as i64);
    let trace_coeff = theta.trace() / two_n.clone();
    let omega = kaehler_form::<T>(model);
    // <Omega, Omega> = 2n
    let omega_coeff = alt_plus.inner(&omega) / two_n;
    let sym_plus_traceless = sym_plus.sub(&model.metric::<T>().scale(&trace_coeff));
    let alt_plus_traceless = alt_plus.sub(&omega.scale(&omega_coeff));
    FormDecomposition {
        trace_coeff,
        omega_coeff,
        sym_plus_traceless,
        sym_minus,
        alt_plus_traceless,
        alt_minus,
        model: *model,
    }
}

/// `omega_theta(x, y) = theta(x, J y)`.
pub fn omega_twist<T: Scalar>(model: &HermitianModel, theta: &BilinearForm<T>) -> BilinearForm<T> {
    BilinearForm::from_fn(model.dim(), |i, j| {
        let (b, s) = model.j_image(j);
        let v = theta.get(i, b).clone();
        if s < 0 {
            -v
        } else {
            v
        }
    })
}
