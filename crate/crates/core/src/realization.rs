//! Metric jets that realize curvature tensors.
//!
//! A tensor `Θ ∈ S²₊ ⊗ S²` gives the quadratic jet
//! `g_ij(u) = δ_ij + Θ_ijkl u^k u^l`, whose curvature at the origin is
//! `L(Θ)`. Realizing `A` means solving `L(Θ) = A`; the solution returned is
//! the one of least Frobenius norm.
//!
//! Complex conventions for first jets: `z^a = x^a + i y^a`,
//! `∂_{z_a} = ½(∂_{x_a} - i ∂_{y_a})`, and
//! `g_{a b̄} = g(x_a, x_b) + i g(x_a, y_b)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex;

use crate::algebra::CurvatureBasis;
use crate::curvature::{gray_defect, CurvatureTensor};
use crate::form::BilinearForm;
use crate::linalg::{LinalgError, Matrix, MinNormSolver};
use crate::model::HermitianModel;
use crate::scalar::{Rational, Scalar};
use crate::tensor::{Tensor3, Tensor4};
use crate::tv::{build_components, ComponentId};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RealizationError {
    #[error("invalid theta: {reason}")]
    InvalidTheta { reason: &'static str },
    #[error("invalid metric jet: {reason}")]
    InvalidJet { reason: &'static str },
    #[error("not realizable: W7 part has squared norm {w7_norm_sq:e} (Gray defect squared norm {gray_defect_norm_sq:e})")]
    NotRealizable { w7_norm_sq: f64, gray_defect_norm_sq: f64 },
    #[error("first derivatives of the metric do not vanish at the origin")]
    FirstJetNonzero,
    #[error("the Kaehler condition fails at the origin (max |dΩ| = {max_abs:e})")]
    KaehlerConditionFails { max_abs: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    ModelMismatch { expected: usize, found: usize },
}

/// `Θ ∈ S²₊(V*) ⊗ S²(V*)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaTensor<T> {
    model: HermitianModel,
    tensor: Tensor4<T>,
}

impl<T: Scalar> ThetaTensor<T> {
    pub fn new(model: HermitianModel, tensor: Tensor4<T>) -> Result<Self, RealizationError> {
        if tensor.dim() != model.dim() {
            return Err(RealizationError::ModelMismatch { expected: model.dim(), found: tensor.dim() });
        }
        if let Some(reason) = theta_violation(&model, &tensor) {
            return Err(RealizationError::InvalidTheta { reason });
        }
        Ok(Self { model, tensor })
    }

    pub fn zero(model: HermitianModel) -> Self {
        Self { model, tensor: Tensor4::zeros(model.dim()) }
    }

    pub fn model(&self) -> &HermitianModel {
        &self.model
    }

    pub fn tensor(&self) -> &Tensor4<T> {
        &self.tensor
    }

    pub fn norm_sq(&self) -> T {
        self.tensor.norm_sq()
    }
}

fn theta_violation<T: Scalar>(model: &HermitianModel, t: &Tensor4<T>) -> Option<&'static str> {
    let scale = t.max_abs();
    let close = |a: &Tensor4<T>| a.sub(t).expect("same shape").is_negligible(&scale);
    if !close(&t.permuted([1, 0, 2, 3])) {
        return Some("not symmetric in the first pair");
    }
    if !close(&t.permuted([0, 1, 3, 2])) {
        return Some("not symmetric in the second pair");
    }
    if !close(&t.with_j(model, [true, true, false, false])) {
        return Some("first pair is not J-invariant");
    }
    None
}

/// `L(Θ)(x, y, z, w) = Θ(x, z, y, w) + Θ(y, w, x, z) - Θ(x, w, y, z) - Θ(y, z, x, w)`.
pub fn l_map<T: Scalar>(theta: &ThetaTensor<T>) -> CurvatureTensor<T> {
    let t = &theta.tensor;
    let out = Tensor4::from_fn(t.dim(), |i, j, k, l| {
        t.get(i, k, j, l).clone() + t.get(j, l, i, k) - t.get(i, l, j, k) - t.get(j, k, i, l)
    });
    CurvatureTensor::new_unchecked(theta.model, out)
}

/// Orthogonal integer basis of `S²₊ ⊗ S²`.
///
/// `S²₊` is spanned by `x_a x_b + y_a y_b` (`a <= b`) and
/// `x_a y_b - x_b y_a` (`a < b`), `S²` by `e_k e_l` (`k <= l`), each written
/// as a symmetric matrix with unit entries.
/// Symmetric matrix as `(row, col, entry)` triples.
type SparseSym = [(usize, usize, i64)];

#[derive(Debug, Clone)]
pub struct ThetaBasis {
    dim: usize,
    first: Vec<Vec<(usize, usize, i64)>>,
    second: Vec<Vec<(usize, usize, i64)>>,
}

impl ThetaBasis {
    pub fn new(model: &HermitianModel) -> Self {
        let n = model.n();
        let sym = |i: usize, j: usize, s: i64| -> Vec<(usize, usize, i64)> {
            if i == j {
                vec![(i, i, s)]
            } else {
                vec![(i, j, s), (j, i, s)]
            }
        };
        let mut first = Vec::new();
        for a in 0..n {
            for b in a..n {
                let mut e = sym(a, b, 1);
                e.extend(sym(n + a, n + b, 1));
                first.push(e);
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                let mut e = sym(a, n + b, 1);
                e.extend(sym(b, n + a, -1));
                first.push(e);
            }
        }
        let dim = model.dim();
        let second = (0..dim).flat_map(|k| (k..dim).map(move |l| (k, l))).map(|(k, l)| sym(k, l, 1)).collect();
        Self { dim, first, second }
    }

    pub fn len(&self) -> usize {
        self.first.len() * self.second.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn factors(&self, p: usize) -> (&SparseSym, &SparseSym) {
        (&self.first[p / self.second.len()], &self.second[p % self.second.len()])
    }

    pub fn weights<T: Scalar>(&self) -> Vec<T> {
        let w = |e: &[(usize, usize, i64)]| e.iter().map(|(_, _, s)| s * s).sum::<i64>();
        (0..self.len())
            .map(|p| {
                let (a, b) = self.factors(p);
                T::from_i64(w(a) * w(b))
            })
            .collect()
    }

    pub fn element<T: Scalar>(&self, p: usize) -> Tensor4<T> {
        self.tensor(&(0..self.len()).map(|q| T::from_i64(i64::from(p == q))).collect::<Vec<_>>())
    }

    pub fn tensor<T: Scalar>(&self, params: &[T]) -> Tensor4<T> {
        let mut t = Tensor4::zeros(self.dim);
        for (p, c) in params.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (a, b) = self.factors(p);
            for &(i, j, s) in a {
                for &(k, l, r) in b {
                    t[[i, j, k, l]] += c.mul_ref(&T::from_i64(s * r));
                }
            }
        }
        t
    }
}

/// Minimum-norm solver for `L(Θ) = A` in basis coordinates.
pub struct ThetaSolver {
    model: HermitianModel,
    basis: ThetaBasis,
    solver: MinNormSolver<Rational>,
}

impl ThetaSolver {
    fn build(model: &HermitianModel) -> Self {
        let basis = ThetaBasis::new(model);
        let algebra = CurvatureBasis::shared(model.dim());
        let columns: Vec<Vec<Rational>> = (0..basis.len())
            .map(|p| {
                let theta = ThetaTensor { model: *model, tensor: basis.element(p) };
                algebra.coords(l_map(&theta).tensor())
            })
            .collect();
        let matrix = Matrix::from_columns(algebra.len(), &columns).expect("columns have algebra length");
        let solver = MinNormSolver::new(matrix, Some(basis.weights())).expect("normal matrix is invertible");
        Self { model: *model, basis, solver }
    }

    /// Shared solver for `model`, built once per `n`.
    pub fn shared(model: &HermitianModel) -> Arc<ThetaSolver> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<ThetaSolver>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(s) = cache.lock().expect("cache poisoned").get(&model.n()) {
            return s.clone();
        }
        let built = Arc::new(Self::build(model));
        cache.lock().expect("cache poisoned").entry(model.n()).or_insert(built).clone()
    }

    /// `rank L`, equal to `dim range(L)`.
    pub fn rank(&self) -> usize {
        self.solver.rank()
    }

    pub fn basis(&self) -> &ThetaBasis {
        &self.basis
    }

    pub fn solve(&self, a: &CurvatureTensor<Rational>) -> Result<ThetaTensor<Rational>, LinalgError> {
        let x = self.solver.solve(&a.coords())?;
        Ok(ThetaTensor { model: self.model, tensor: self.basis.tensor(&x) })
    }
}

/// Minimum-norm `Θ` with `L(Θ) = A`; fails when `A` has a Gray defect.
pub fn solve_realization(a: &CurvatureTensor<Rational>) -> Result<ThetaTensor<Rational>, RealizationError> {
    let defect = gray_defect(a);
    if !defect.is_zero() {
        return Err(not_realizable(a, &defect));
    }
    ThetaSolver::shared(a.model()).solve(a).map_err(|_| not_realizable(a, &defect))
}

fn not_realizable(a: &CurvatureTensor<Rational>, defect: &Tensor4<Rational>) -> RealizationError {
    let w7 = build_components(a.model())
        .project(a, ComponentId::W7)
        .map(|p| p.norm_sq().to_f64())
        .unwrap_or(0.0);
    RealizationError::NotRealizable { w7_norm_sq: w7, gray_defect_norm_sq: defect.norm_sq().to_f64() }
}

/// Second-order jet `g_ij(u) = δ_ij + h_ijk u^k + q_ijkl u^k u^l` at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricJet<T> {
    model: HermitianModel,
    h: Tensor3<T>,
    q: Tensor4<T>,
}

impl<T: Scalar> MetricJet<T> {
    /// Validates the symmetries and `J`-compatibility; `q` is symmetrized in
    /// its last two slots.
    pub fn new(model: HermitianModel, h: Tensor3<T>, q: Tensor4<T>) -> Result<Self, RealizationError> {
        let d = model.dim();
        if h.dim() != d || q.dim() != d {
            return Err(RealizationError::ModelMismatch { expected: d, found: h.dim().max(q.dim()) });
        }
        let jet = Self { model, h, q: sym_last_pair(&q) };
        if let Some(reason) = jet.violation() {
            return Err(RealizationError::InvalidJet { reason });
        }
        Ok(jet)
    }

    pub fn flat(model: HermitianModel) -> Self {
        Self { model, h: Tensor3::zeros(model.dim()), q: Tensor4::zeros(model.dim()) }
    }

    pub fn model(&self) -> &HermitianModel {
        &self.model
    }

    pub fn h(&self) -> &Tensor3<T> {
        &self.h
    }

    pub fn q(&self) -> &Tensor4<T> {
        &self.q
    }

    fn violation(&self) -> Option<&'static str> {
        let d = self.model.dim();
        let hs = self.h.max_abs();
        let qs = self.q.max_abs();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    if !(self.h.get(i, j, k).clone() - self.h.get(j, i, k)).is_negligible(&hs) {
                        return Some("first jet is not symmetric");
                    }
                    for l in 0..d {
                        if !(self.q.get(i, j, k, l).clone() - self.q.get(j, i, k, l)).is_negligible(&qs) {
                            return Some("second jet is not symmetric");
                        }
                    }
                }
            }
        }
        if !self.is_j_compatible() {
            return Some("jet is not J-compatible");
        }
        None
    }

    /// Every coefficient form `h_{··k}`, `q_{··kl}` is `J`-invariant.
    pub fn is_j_compatible(&self) -> bool {
        let m = &self.model;
        let d = m.dim();
        let hs = self.h.max_abs();
        let qs = self.q.max_abs();
        let jv = |i: usize| m.j_image(i);
        for i in 0..d {
            for j in 0..d {
                let ((a, sa), (b, sb)) = (jv(i), jv(j));
                let sign = T::from_i64(i64::from(sa * sb));
                for k in 0..d {
                    let diff = self.h.get(a, b, k).mul_ref(&sign) - self.h.get(i, j, k);
                    if !diff.is_negligible(&hs) {
                        return false;
                    }
                    for l in 0..d {
                        let diff = self.q.get(a, b, k, l).mul_ref(&sign) - self.q.get(i, j, k, l);
                        if !diff.is_negligible(&qs) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// The metric at the point `u`, truncated to second order.
    pub fn metric_at(&self, u: &[T]) -> BilinearForm<T> {
        let d = self.model.dim();
        BilinearForm::from_fn(d, |i, j| {
            let mut g = T::from_i64(i64::from(i == j));
            for k in 0..d {
                g += self.h.get(i, j, k).mul_ref(&u[k]);
                for l in 0..d {
                    g += self.q.get(i, j, k, l).mul_ref(&u[k]) * &u[l];
                }
            }
            g
        })
    }

    /// Radius of a ball around the origin on which the truncated metric is
    /// certainly nonsingular: `|h| r + |q| r² < 1` with Frobenius norms.
    pub fn nonsingular_radius(&self) -> f64 {
        let h = self.h.norm_sq().to_f64().sqrt();
        let q = self.q.norm_sq().to_f64().sqrt();
        if q == 0.0 {
            return if h == 0.0 { f64::INFINITY } else { 1.0 / h };
        }
        (-h + (h * h + 4.0 * q).sqrt()) / (2.0 * q)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> MetricJet<U> {
        MetricJet { model: self.model, h: self.h.map(f), q: self.q.map(f) }
    }
}

fn sym_last_pair<T: Scalar>(q: &Tensor4<T>) -> Tensor4<T> {
    let half = T::from_ratio(1, 2);
    Tensor4::from_fn(q.dim(), |i, j, k, l| {
        if k == l {
            q.get(i, j, k, l).clone()
        } else {
            (q.get(i, j, k, l).clone() + q.get(i, j, l, k)) * &half
        }
    })
}

/// The quadratic jet `g = δ + Θ_ijkl u^k u^l`.
pub fn metric_from_theta<T: Scalar>(theta: &ThetaTensor<T>) -> MetricJet<T> {
    MetricJet {
        model: theta.model,
        h: Tensor3::zeros(theta.model.dim()),
        q: sym_last_pair(&theta.tensor),
    }
}

/// `R_ijkl = ½{∂_i∂_k g_jl + ∂_j∂_l g_ik - ∂_i∂_l g_jk - ∂_j∂_k g_il}` at the origin.
pub fn curvature_at_origin<T: Scalar>(jet: &MetricJet<T>) -> Result<CurvatureTensor<T>, RealizationError> {
    if !jet.h.is_zero() {
        return Err(RealizationError::FirstJetNonzero);
    }
    let q = &jet.q;
    // ∂_a∂_b g_ij = 2 q_ijab
    let r = Tensor4::from_fn(q.dim(), |i, j, k, l| {
        q.get(j, l, i, k).clone() + q.get(i, k, j, l) - q.get(j, k, i, l) - q.get(i, l, j, k)
    });
    Ok(CurvatureTensor::new_unchecked(jet.model, r))
}

/// `(dΩ)_kij = ∂_k Ω_ij - ∂_i Ω_kj + ∂_j Ω_ki` at the origin, with
/// `Ω_ij = g(e_i, J e_j)`.
pub fn domega_at_origin<T: Scalar>(jet: &MetricJet<T>) -> Tensor3<T> {
    let m = &jet.model;
    let d = m.dim();
    // ∂_k Ω_ij = s_j h_{i, π(j), k} where J e_j = s_j e_{π(j)}
    let dom = |k: usize, i: usize, j: usize| -> T {
        let (pj, sj) = m.j_image(j);
        let v = jet.h.get(i, pj, k).clone();
        if sj < 0 {
            -v
        } else {
            v
        }
    };
    Tensor3::from_fn(d, |k, i, j| dom(k, i, j) - dom(i, k, j) + dom(j, k, i))
}

/// Holomorphic change `z^a = w^a + ξ_abc w^b w^c`, with `ξ` symmetric in `(b, c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateChange<T> {
    n: usize,
    xi: Vec<Complex<T>>,
}

impl<T: Scalar> CoordinateChange<T> {
    pub fn zero(n: usize) -> Self {
        Self { n, xi: vec![Complex::new(T::zero(), T::zero()); n * n * n] }
    }

    /// Entry `ξ_abc` with 0-based indices.
    pub fn get(&self, a: usize, b: usize, c: usize) -> &Complex<T> {
        &self.xi[(a * self.n + b) * self.n + c]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.xi.iter().all(|z| z.re.is_zero() && z.im.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.n;
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| self.get(a, b, c) == self.get(a, c, b))))
    }

    /// Real form `Φ^m(u) = u^m + C^m_kl u^k u^l`; returns `C` as `[m][k][l]`.
    pub fn real_quadratic(&self) -> Tensor3<T> {
        let n = self.n;
        let mut c = Tensor3::<T>::zeros(2 * n);
        let mut add = |m: usize, k: usize, l: usize, v: &T, sign: i64| {
            let cur = c.get(m, k, l).clone();
            c.set(m, k, l, cur + v.mul_ref(&T::from_i64(sign)));
        };
        // w^b w^c = (s_b s_c - t_b t_c) + i (s_b t_c + t_b s_c), s = u[..n], t = u[n..]
        for a in 0..n {
            for b in 0..n {
                for cc in 0..n {
                    let z = self.get(a, b, cc);
                    let (al, be) = (&z.re, &z.im);
                    add(a, b, cc, al, 1);
                    add(a, n + b, n + cc, al, -1);
                    add(a, b, n + cc, be, -1);
                    add(a, n + b, cc, be, -1);
                    add(n + a, b, cc, be, 1);
                    add(n + a, n + b, n + cc, be, -1);
                    add(n + a, b, n + cc, al, 1);
                    add(n + a, n + b, cc, al, 1);
                }
            }
        }
        c
    }
}

/// The jet of `Φ*g` for `Φ(u) = u + C(u, u)`, truncated at second order.
pub fn apply_coordinate_change<T: Scalar>(jet: &MetricJet<T>, change: &CoordinateChange<T>) -> MetricJet<T> {
    let d = jet.model.dim();
    let c = change.real_quadratic();
    let two = T::from_i64(2);
    // DΦ^m_i = δ^m_i + bm[m][i][l] u^l
    let bm = Tensor3::from_fn(d, |m, i, l| c.get(m, i, l).mul_ref(&two));
    let h = &jet.h;
    let q = &jet.q;
    let h_new = Tensor3::from_fn(d, |i, j, k| h.get(i, j, k).clone() + bm.get(j, i, k) + bm.get(i, j, k));
    let raw = Tensor4::from_fn(d, |i, j, k, l| {
        let mut acc = q.get(i, j, k, l).clone();
        for m in 0..d {
            acc += h.get(i, j, m).mul_ref(c.get(m, k, l));
            acc += bm.get(m, i, k).mul_ref(h.get(m, j, l));
            acc += h.get(i, m, l).mul_ref(bm.get(m, j, k));
            acc += bm.get(m, i, k).mul_ref(bm.get(m, j, l));
        }
        acc
    });
    MetricJet { model: jet.model, h: h_new, q: sym_last_pair(&raw) }
}

/// `P_cdb = ∂_{z_b} g_{c d̄}` at the origin.
fn holomorphic_derivative<T: Scalar>(jet: &MetricJet<T>) -> Vec<Complex<T>> {
    let n = jet.model.n();
    let h = &jet.h;
    let half = T::from_ratio(1, 2);
    let mut p = Vec::with_capacity(n * n * n);
    for c in 0..n {
        for d in 0..n {
            for b in 0..n {
                // S_cd = g(x_c, x_d), M_cd = g(x_c, y_d)
                let sx = h.get(c, d, b);
                let sy = h.get(c, d, n + b);
                let mx = h.get(c, n + d, b);
                let my = h.get(c, n + d, n + b);
                let re = (sx.clone() + my) * &half;
                let im = (mx.clone() - sy) * &half;
                p.push(Complex::new(re, im));
            }
        }
    }
    p
}

/// Kills the first jet by `ξ_dbc = -½ ∂_{z_b} g_{c d̄}`; requires `dΩ(0) = 0`.
pub fn normalize_first_jet<T: Scalar>(
    jet: &MetricJet<T>,
) -> Result<(CoordinateChange<T>, MetricJet<T>), RealizationError> {
    let domega = domega_at_origin(jet);
    let scale = jet.h.max_abs();
    if !domega.data().iter().all(|v| v.is_negligible(&scale)) {
        return Err(RealizationError::KaehlerConditionFails { max_abs: domega.max_abs().to_f64() });
    }
    let n = jet.model.n();
    let p = holomorphic_derivative(jet);
    let minus_half = T::from_ratio(-1, 2);
    let mut change = CoordinateChange::zero(n);
    for d in 0..n {
        for b in 0..n {
            for c in 0..n {
                let v = &p[(c * n + d) * n + b];
                change.xi[(d * n + b) * n + c] = Complex::new(v.re.mul_ref(&minus_half), v.im.mul_ref(&minus_half));
            }
        }
    }
    let out = apply_coordinate_change(jet, &change);
    Ok((change, out))
}

/// Curvature at the origin from Christoffel symbols of the full jet; valid
/// for any first jet.
pub fn levi_civita_curvature<T: Scalar>(jet: &MetricJet<T>) -> Tensor4<T> {
    let d = jet.model.dim();
    let h = &jet.h;
    let q = &jet.q;
    let half = T::from_ratio(1, 2);
    let two = T::from_i64(2);
    // Γ_{a,jk} = ½(∂_j g_ak + ∂_k g_aj - ∂_a g_jk); Γ^m_jk = Γ_{m,jk} at the origin
    let gamma = Tensor3::from_fn(d, |a, j, k| {
        (h.get(a, k, j).clone() + h.get(a, j, k) - h.get(j, k, a)) * &half
    });
    // ∂_a∂_b g_ij = 2 q_ijab
    let dd = |i: usize, j: usize, a: usize, b: usize| q.get(i, j, a, b).mul_ref(&two);
    // ∂_i Γ^m_jk = -h_{m a i} Γ_{a,jk} + ½(∂_i∂_j g_mk + ∂_i∂_k g_mj - ∂_i∂_m g_jk)
    let dgamma = |i: usize, m: usize, j: usize, k: usize| -> T {
        let mut acc = (dd(m, k, i, j) + dd(m, j, i, k) - dd(j, k, i, m)) * &half;
        for a in 0..d {
            acc -= h.get(m, a, i).mul_ref(gamma.get(a, j, k));
        }
        acc
    };
    Tensor4::from_fn(d, |i, j, k, l| {
        // R^m_{ijk}, then lowered with g(0) = δ
        let mut acc = dgamma(i, l, j, k) - dgamma(j, l, i, k);
        for p in 0..d {
            acc += gamma.get(p, j, k).mul_ref(gamma.get(l, i, p));
            acc -= gamma.get(p, i, k).mul_ref(gamma.get(l, j, p));
        }
        acc
    })
}

/// Random Kaehler jet with small integer coefficients: `h` comes from a
/// holomorphic derivative `P_cdb` symmetric in `(c, b)`, `q` from random `Θ`.
pub fn random_kaehler_jet(model: &HermitianModel, seed: u64, bound: i64) -> MetricJet<Rational> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = model.n();
    let d = model.dim();
    let mut p = vec![(0i64, 0i64); n * n * n];
    for c in 0..n {
        for dd in 0..n {
            for b in c..n {
                let v = (rng.random_range(-bound..=bound), rng.random_range(-bound..=bound));
                p[(c * n + dd) * n + b] = v;
                p[(b * n + dd) * n + c] = v;
            }
        }
    }
    let pv = |c: usize, dd: usize, b: usize| p[(c * n + dd) * n + b];
    let mut h = Tensor3::<Rational>::zeros(d);
    for c in 0..n {
        for dd in 0..n {
            for b in 0..n {
                let (pr, pi) = pv(c, dd, b);
                let (qr, qi) = pv(dd, c, b);
                // ∂_x g = P + conj(P'), ∂_y g = i (P - conj(P'))
                let (sx, mx) = (pr + qr, pi - qi);
                let (sy, my) = (-(pi + qi), pr - qr);
                for (k, s, m) in [(b, sx, mx), (n + b, sy, my)] {
                    let (s, m) = (Rational::from_i64(s), Rational::from_i64(m));
                    h.set(c, dd, k, s.clone());
                    h.set(n + c, n + dd, k, s);
                    h.set(c, n + dd, k, m.clone());
                    h.set(n + dd, c, k, m.clone());
                    h.set(n + c, dd, k, -m.clone());
                    h.set(dd, n + c, k, -m);
                }
            }
        }
    }
    let basis = ThetaBasis::new(model);
    let params: Vec<Rational> = (0..basis.len()).map(|_| Rational::from_i64(rng.random_range(-bound..=bound))).collect();
    MetricJet::new(*model, h, basis.tensor(&params)).expect("generated jet is J-compatible")
}

/// Checks attached to a realization.
#[derive(Debug, Clone)]
pub struct RealizationReport<T> {
    /// Largest entry of `curvature(jet) - A`.
    pub round_trip_residual: T,
    pub gray_defect_norm_sq: T,
    /// Largest entry of `dΩ(0)`.
    pub domega_max_abs: T,
    pub first_jet_zero: bool,
    pub j_compatible: bool,
    pub theta_norm_sq: T,
    pub component_norms: BTreeMap<ComponentId, T>,
    pub nonsingular_radius: f64,
}

impl<T: Scalar> RealizationReport<T> {
    pub fn passed(&self) -> bool {
        self.round_trip_residual.is_zero()
            && self.gray_defect_norm_sq.is_zero()
            && self.domega_max_abs.is_zero()
            && self.first_jet_zero
            && self.j_compatible
    }
}

#[derive(Debug, Clone)]
pub struct Realization<T> {
    pub theta: ThetaTensor<T>,
    pub jet: MetricJet<T>,
    pub curvature: CurvatureTensor<T>,
    pub report: RealizationReport<T>,
}

/// `solve_realization`, `metric_from_theta` and `curvature_at_origin` with checks.
pub fn realize(a: &CurvatureTensor<Rational>) -> Result<Realization<Rational>, RealizationError> {
    let theta = solve_realization(a)?;
    let jet = metric_from_theta(&theta);
    let curvature = curvature_at_origin(&jet)?;
    let residual = curvature.tensor().sub(a.tensor()).expect("same model");
    let decomposition = build_components(a.model()).decompose(a).expect("same model");
    let report = RealizationReport {
        round_trip_residual: residual.max_abs(),
        gray_defect_norm_sq: gray_defect(a).norm_sq(),
        domega_max_abs: domega_at_origin(&jet).max_abs(),
        first_jet_zero: jet.h.is_zero(),
        j_compatible: jet.is_j_compatible(),
        theta_norm_sq: theta.norm_sq(),
        component_norms: decomposition.norms,
        nonsingular_radius: jet.nonsingular_radius(),
    };
    Ok(Realization { theta, jet, curvature, report })
}
