//! The ten unitary-invariant components `W_1 .. W_10` of the curvature
//! algebra, built as explicit subspaces in the coordinates of
//! [`CurvatureBasis`].
//!
//! Every subspace carries the diagonal weights of that basis, so inner
//! products, complements and projections agree with the Frobenius inner
//! product on tensors. Adjoint ranges of the contraction maps use the same
//! weights: the adjoint of `M` is `W^{-1} M^T`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::algebra::CurvatureBasis;
use crate::curvature::{
    gray_defect_raw, ricci_raw, star_ricci_raw, w7_defect_raw, CurvatureTensor, r0, r_omega,
};
use crate::form::{decompose_form, BilinearForm};
use crate::linalg::{Matrix, SubspaceBasis};
use crate::model::HermitianModel;
use crate::scalar::{Rational, Scalar};
use crate::tensor::Tensor4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ComponentId {
    W1,
    W2,
    W3,
    W4,
    W5,
    W6,
    W7,
    W8,
    W9,
    W10,
    W1PlusW4,
    W2PlusW5,
}

impl ComponentId {
    /// The ten irreducible components in order.
    pub const ALL: [ComponentId; 10] = [
        ComponentId::W1,
        ComponentId::W2,
        ComponentId::W3,
        ComponentId::W4,
        ComponentId::W5,
        ComponentId::W6,
        ComponentId::W7,
        ComponentId::W8,
        ComponentId::W9,
        ComponentId::W10,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ComponentId::W1 => "W1",
            ComponentId::W2 => "W2",
            ComponentId::W3 => "W3",
            ComponentId::W4 => "W4",
            ComponentId::W5 => "W5",
            ComponentId::W6 => "W6",
            ComponentId::W7 => "W7",
            ComponentId::W8 => "W8",
            ComponentId::W9 => "W9",
            ComponentId::W10 => "W10",
            ComponentId::W1PlusW4 => "W1_plus_W4",
            ComponentId::W2PlusW5 => "W2_plus_W5",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let all = ComponentId::ALL.into_iter().chain([ComponentId::W1PlusW4, ComponentId::W2PlusW5]);
        all.into_iter().find(|c| c.name().eq_ignore_ascii_case(s))
    }

    /// Index of the isotypic class; `W1`/`W4` and `W2`/`W5` share one.
    pub fn isotypic_class(self) -> usize {
        match self {
            ComponentId::W1 | ComponentId::W4 | ComponentId::W1PlusW4 => 1,
            ComponentId::W2 | ComponentId::W5 | ComponentId::W2PlusW5 => 2,
            ComponentId::W3 => 3,
            ComponentId::W6 => 6,
            ComponentId::W7 => 7,
            ComponentId::W8 => 8,
            ComponentId::W9 => 9,
            ComponentId::W10 => 10,
        }
    }

    /// Whether the component is nonzero in complex dimension `n`.
    pub fn present(self, n: usize) -> bool {
        match self {
            ComponentId::W5 | ComponentId::W10 => n >= 3,
            ComponentId::W6 => n >= 4,
            _ => true,
        }
    }

    /// Dimension predicted by the closed formulas.
    pub fn expected_dim(self, n: usize) -> usize {
        if !self.present(n) {
            return 0;
        }
        let n = n as i64;
        let d = match self {
            ComponentId::W1 | ComponentId::W4 => 1,
            ComponentId::W2 | ComponentId::W5 => n * n - 1,
            ComponentId::W3 => n * n * (n - 1) * (n + 3) / 4,
            ComponentId::W6 => n * n * (n * n - 4) / 6,
            ComponentId::W7 => n * n * (n * n - 1) / 6,
            ComponentId::W8 => n * n + n,
            ComponentId::W9 => n * n - n,
            ComponentId::W10 => 2 * n * n * (n * n - 4) / 3,
            ComponentId::W1PlusW4 => 2,
            ComponentId::W2PlusW5 => 2 * (n * n - 1) - if n == 2 { 3 } else { 0 },
        };
        d as usize
    }
}

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TvError {
    #[error("component {component} is absent in complex dimension {n}")]
    ComponentAbsent { component: ComponentId, n: usize },
    #[error("tensor belongs to a model of dimension {found}, components were built for {expected}")]
    ModelMismatch { expected: usize, found: usize },
}

/// All components for one model, in 𝔄 coordinates.
#[derive(Debug, Clone)]
pub struct TvComponents<T> {
    model: HermitianModel,
    basis: Arc<CurvatureBasis>,
    algebra: SubspaceBasis<T>,
    components: BTreeMap<ComponentId, SubspaceBasis<T>>,
    gray: SubspaceBasis<T>,
}

impl<T: Scalar> TvComponents<T> {
    pub fn model(&self) -> &HermitianModel {
        &self.model
    }

    pub fn basis(&self) -> &CurvatureBasis {
        &self.basis
    }

    /// The whole algebra (standard coordinate vectors with basis weights).
    pub fn algebra(&self) -> &SubspaceBasis<T> {
        &self.algebra
    }

    /// Subspace for `c`; absent components are zero subspaces.
    pub fn get(&self, c: ComponentId) -> &SubspaceBasis<T> {
        &self.components[&c]
    }

    pub fn iter(&self) -> impl Iterator<Item = (ComponentId, &SubspaceBasis<T>)> {
        self.components.iter().map(|(c, s)| (*c, s))
    }

    /// `ker(gray_defect)` inside 𝔄.
    pub fn gray(&self) -> &SubspaceBasis<T> {
        &self.gray
    }

    pub fn dims(&self) -> [usize; 10] {
        ComponentId::ALL.map(|c| self.get(c).dim())
    }

    fn check_model(&self, a: &CurvatureTensor<T>) -> Result<(), TvError> {
        if a.model().dim() != self.model.dim() {
            return Err(TvError::ModelMismatch { expected: self.model.dim(), found: a.model().dim() });
        }
        Ok(())
    }

    /// Orthogonal projection of `a` onto component `c`.
    pub fn project(&self, a: &CurvatureTensor<T>, c: ComponentId) -> Result<CurvatureTensor<T>, TvError> {
        self.check_model(a)?;
        let sub = self.get(c);
        if sub.dim() == 0 {
            return Err(TvError::ComponentAbsent { component: c, n: self.model.n() });
        }
        Ok(self.project_coords(&self.basis.coords(a.tensor()), c))
    }

    fn project_coords(&self, coords: &[T], c: ComponentId) -> CurvatureTensor<T> {
        let p = self.get(c).project(coords);
        CurvatureTensor::new_unchecked(self.model, self.basis.tensor(&p))
    }

    /// Projections onto all ten components; absent ones give zero parts.
    pub fn decompose(&self, a: &CurvatureTensor<T>) -> Result<TvDecomposition<T>, TvError> {
        self.check_model(a)?;
        let coords = self.basis.coords(a.tensor());
        let weights = self.basis.weights::<T>();
        let mut parts = BTreeMap::new();
        let mut norms = BTreeMap::new();
        for c in ComponentId::ALL {
            let p = self.get(c).project(&coords);
            let norm: T = p
                .iter()
                .zip(&weights)
                .fold(T::zero(), |acc, (x, w)| acc + x.mul_ref(x) * w);
            norms.insert(c, norm);
            parts.insert(c, CurvatureTensor::new_unchecked(self.model, self.basis.tensor(&p)));
        }
        Ok(TvDecomposition { input: a.clone(), parts, norms })
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> TvComponents<U> {
        TvComponents {
            model: self.model,
            basis: self.basis.clone(),
            algebra: self.algebra.map(f),
            components: self.components.iter().map(|(c, s)| (*c, s.map(f))).collect(),
            gray: self.gray.map(f),
        }
    }
}

/// Component parts of one tensor.
#[derive(Debug, Clone)]
pub struct TvDecomposition<T> {
    pub input: CurvatureTensor<T>,
    pub parts: BTreeMap<ComponentId, CurvatureTensor<T>>,
    /// Squared Frobenius norms of the parts.
    pub norms: BTreeMap<ComponentId, T>,
}

impl<T: Scalar> TvDecomposition<T> {
    pub fn part(&self, c: ComponentId) -> &CurvatureTensor<T> {
        &self.parts[&c]
    }

    pub fn sum(&self) -> CurvatureTensor<T> {
        let mut acc = CurvatureTensor::zero(*self.input.model());
        for p in self.parts.values() {
            acc = acc.add(p).expect("same model");
        }
        acc
    }

    /// `Σ parts = input`, exactly or to tolerance.
    pub fn is_complete(&self) -> bool {
        self.sum().approx_eq(&self.input)
    }
}

/// Row `(W_1 .. W_10)` of component dimensions together with `dim 𝔄`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimsTable {
    pub n: usize,
    pub dims: [usize; 10],
    pub algebra_dim: usize,
}

impl DimsTable {
    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn checksum_ok(&self) -> bool {
        self.total() == self.algebra_dim
    }
}

/// Basis of 𝔄 as a subspace object (coordinate vectors of the fixed basis).
pub fn build_a_basis<T: Scalar>(model: &HermitianModel) -> SubspaceBasis<T> {
    let basis = CurvatureBasis::shared(model.dim());
    SubspaceBasis::full(basis.len(), Some(Arc::new(basis.weights())))
}

type Flatten<'a> = dyn Fn(&Tensor4<Rational>) -> Vec<Rational> + 'a;

struct Builder {
    model: HermitianModel,
    basis: Arc<CurvatureBasis>,
    weights: Arc<Vec<Rational>>,
}

impl Builder {
    fn op(&self, f: &Flatten<'_>) -> Matrix<Rational> {
        self.basis.operator_matrix(f)
    }

    fn kernel(&self, fs: &[&Flatten<'_>]) -> SubspaceBasis<Rational> {
        let mut m: Option<Matrix<Rational>> = None;
        for f in fs {
            let next = self.op(f);
            m = Some(match m {
                None => next,
                Some(prev) => prev.vstack(&next).expect("same column count"),
            });
        }
        SubspaceBasis::kernel_of(&m.expect("at least one operator"), Some(self.weights.clone()))
    }

    /// Range of the adjoint: rows of the operator matrix divided by the weights.
    fn adjoint_range(&self, fs: &[&Flatten<'_>]) -> SubspaceBasis<Rational> {
        let mut vectors = Vec::new();
        for f in fs {
            let m = self.op(f);
            for r in 0..m.rows() {
                vectors.push(m.row(r).iter().zip(self.weights.iter()).map(|(a, w)| a.clone() / w).collect());
            }
        }
        SubspaceBasis::from_spanning(self.basis.len(), Some(self.weights.clone()), vectors)
            .expect("vectors have ambient length")
    }

    fn zero(&self) -> SubspaceBasis<Rational> {
        SubspaceBasis::zero(self.basis.len(), Some(self.weights.clone()))
    }

    fn span(&self, tensors: &[CurvatureTensor<Rational>]) -> SubspaceBasis<Rational> {
        let vectors = tensors.iter().map(|t| self.basis.coords(t.tensor())).collect();
        SubspaceBasis::from_spanning(self.basis.len(), Some(self.weights.clone()), vectors)
            .expect("vectors have ambient length")
    }
}

fn form_entries(f: BilinearForm<Rational>) -> Vec<Rational> {
    f.entries().to_vec()
}

fn build_components_exact(model: &HermitianModel) -> TvComponents<Rational> {
    let basis = CurvatureBasis::shared(model.dim());
    let weights = Arc::new(basis.weights::<Rational>());
    let b = Builder { model: *model, basis: basis.clone(), weights: weights.clone() };
    let m = b.model;
    let n = m.n();

    let raw = |t: &Tensor4<Rational>| t.data().to_vec();
    let w7_op = |t: &Tensor4<Rational>| raw(&w7_defect_raw(&m, t));
    let gray_op = |t: &Tensor4<Rational>| raw(&gray_defect_raw(&m, t));
    let kaehler_op = |t: &Tensor4<Rational>| raw(&t.sub(&t.with_j(&m, [true, true, false, false])).expect("shape"));
    let ricci_op = |t: &Tensor4<Rational>| form_entries(ricci_raw(t));
    let star_op = |t: &Tensor4<Rational>| form_entries(star_ricci_raw(&m, t));
    let j_minus = |t: &Tensor4<Rational>| b.basis.coords(&t.sub(&t.with_j(&m, [true; 4])).expect("shape"));
    let j_plus = |t: &Tensor4<Rational>| b.basis.coords(&t.add(&t.with_j(&m, [true; 4])).expect("shape"));
    let tau_op = |t: &Tensor4<Rational>| vec![ricci_raw(t).trace()];
    let rho_minus_s = |t: &Tensor4<Rational>| form_entries(decompose_form(&m, &ricci_raw(t)).sym_minus);
    let star_minus_alt = |t: &Tensor4<Rational>| form_entries(decompose_form(&m, &star_ricci_raw(&m, t)).alt_minus);
    let rho_0ps = |t: &Tensor4<Rational>| form_entries(decompose_form(&m, &ricci_raw(t)).sym_plus_traceless);
    let star_0ps =
        |t: &Tensor4<Rational>| form_entries(decompose_form(&m, &star_ricci_raw(&m, t)).sym_plus_traceless);

    let w7 = b.kernel(&[&w7_op]);
    let w3 = b.kernel(&[&kaehler_op, &ricci_op]);
    let w10 = if n >= 3 { b.kernel(&[&j_plus, &ricci_op, &star_op]) } else { b.zero() };
    let w6 = if n >= 4 {
        let fixed = b.kernel(&[&j_minus, &ricci_op, &star_op]);
        // W_7 also satisfies the three conditions, so it is removed together with W_3
        let w37 = w3.span_union(&w7).expect("same ambient");
        w37.ortho_complement_within(&fixed).expect("same ambient")
    } else {
        b.zero()
    };
    let w8 = b.adjoint_range(&[&rho_minus_s]);
    let w9 = b.adjoint_range(&[&star_minus_alt]);
    let block14 = b.span(&[r0(&m), r_omega(&m)]);
    let block25 = if n >= 3 { b.adjoint_range(&[&rho_0ps, &star_0ps]) } else { b.adjoint_range(&[&rho_0ps]) };

    let w4 = block14.intersect(&b.kernel(&[&tau_op])).expect("same ambient");
    let w1 = w4.ortho_complement_within(&block14).expect("same ambient");
    let w5 = block25.intersect(&b.kernel(&[&rho_0ps])).expect("same ambient");
    let w2 = w5.ortho_complement_within(&block25).expect("same ambient");

    let gray = b.kernel(&[&gray_op]);

    let mut components = BTreeMap::new();
    for (c, s) in [
        (ComponentId::W1, w1),
        (ComponentId::W2, w2),
        (ComponentId::W3, w3),
        (ComponentId::W4, w4),
        (ComponentId::W5, w5),
        (ComponentId::W6, w6),
        (ComponentId::W7, w7),
        (ComponentId::W8, w8),
        (ComponentId::W9, w9),
        (ComponentId::W10, w10),
        (ComponentId::W1PlusW4, block14),
        (ComponentId::W2PlusW5, block25),
    ] {
        components.insert(c, s);
    }
    TvComponents {
        model: m,
        algebra: SubspaceBasis::full(basis.len(), Some(weights)),
        basis,
        components,
        gray,
    }
}

fn cache<T>() -> &'static Mutex<HashMap<usize, Arc<TvComponents<T>>>>
where
    T: Send + Sync + 'static,
{
    // one map per scalar type
    static EXACT: OnceLock<Mutex<HashMap<usize, Arc<TvComponents<Rational>>>>> = OnceLock::new();
    static FLOAT: OnceLock<Mutex<HashMap<usize, Arc<TvComponents<f64>>>>> = OnceLock::new();
    let any: &dyn std::any::Any = if std::any::TypeId::of::<T>() == std::any::TypeId::of::<Rational>() {
        EXACT.get_or_init(Default::default)
    } else if std::any::TypeId::of::<T>() == std::any::TypeId::of::<f64>() {
        FLOAT.get_or_init(Default::default)
    } else {
        unreachable!("components are cached for Rational and f64 only")
    };
    any.downcast_ref().expect("type checked above")
}

/// Exact components for `model`, built once per `n` (first build wins).
pub fn build_components(model: &HermitianModel) -> Arc<TvComponents<Rational>> {
    let n = model.n();
    if let Some(c) = cache::<Rational>().lock().expect("cache poisoned").get(&n) {
        return c.clone();
    }
    let built = Arc::new(build_components_exact(model));
    cache::<Rational>().lock().expect("cache poisoned").entry(n).or_insert(built).clone()
}

/// Float copy of the exact components, cached alongside them.
pub fn float_components(model: &HermitianModel) -> Arc<TvComponents<f64>> {
    let n = model.n();
    if let Some(c) = cache::<f64>().lock().expect("cache poisoned").get(&n) {
        return c.clone();
    }
    let built = Arc::new(build_components(model).map(|v| v.to_f64()));
    cache::<f64>().lock().expect("cache poisoned").entry(n).or_insert(built).clone()
}

pub fn project(a: &CurvatureTensor<Rational>, c: ComponentId) -> Result<CurvatureTensor<Rational>, TvError> {
    build_components(a.model()).project(a, c)
}

pub fn decompose(a: &CurvatureTensor<Rational>) -> TvDecomposition<Rational> {
    build_components(a.model()).decompose(a).expect("components built for this model")
}

pub fn dims_table(model: &HermitianModel) -> DimsTable {
    let comps = build_components(model);
    DimsTable { n: model.n(), dims: comps.dims(), algebra_dim: comps.basis().len() }
}

pub fn gray_subspace(model: &HermitianModel) -> SubspaceBasis<Rational> {
    build_components(model).gray().clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{j_star, ricci, star_ricci, symmetrize, gray_defect, w7_defect};
    use crate::form::FormDecomposition;

    fn model(n: usize) -> HermitianModel {
        HermitianModel::new(n).unwrap()
    }

    fn tensor_of(c: &TvComponents<Rational>, v: &[Rational]) -> CurvatureTensor<Rational> {
        CurvatureTensor::new_unchecked(*c.model(), c.basis().tensor(v))
    }

    fn sample(m: &HermitianModel, salt: i64) -> CurvatureTensor<Rational> {
        let raw = Tensor4::from_fn(m.dim(), |i, j, k, l| {
            let f = (i * 31 + j * 17 + k * 7 + l * 3) as i64 + salt;
            Rational::from_i64(f % 11 - 5)
        });
        symmetrize(m, &raw).unwrap()
    }

    #[test]
    fn dims_match_formulas() {
        for n in 2..=3 {
            let t = dims_table(&model(n));
            let expected = ComponentId::ALL.map(|c| c.expected_dim(n));
            assert_eq!(t.dims, expected);
            assert!(t.checksum_ok());
        }
        assert_eq!(dims_table(&model(2)).dims, [1, 3, 5, 1, 0, 0, 2, 6, 2, 0]);
    }

    #[test]
    fn cross_class_orthogonality() {
        for n in 2..=3 {
            let c = build_components(&model(n));
            for a in ComponentId::ALL {
                for b in ComponentId::ALL {
                    if a < b {
                        assert!(c.get(a).is_orthogonal_to(c.get(b)), "{a} vs {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn characterizations() {
        let m = model(3);
        let c = build_components(&m);
        for v in c.get(ComponentId::W10).vectors() {
            let a = tensor_of(&c, v);
            assert_eq!(j_star(&a), a.scale(&Rational::from_i64(-1)));
            assert!(ricci(&a).is_zero() && star_ricci(&a).is_zero());
        }
        for v in c.get(ComponentId::W7).vectors() {
            assert!(w7_defect(&tensor_of(&c, v)).is_zero());
        }
        for v in c.get(ComponentId::W3).vectors() {
            let a = tensor_of(&c, v);
            assert!(ricci(&a).is_zero());
            // computed, not assumed: the star-Ricci tensor also vanishes on W3
            assert!(star_ricci(&a).is_zero());
        }
        // rho restricted to W8 is injective into S²₋
        let images: Vec<Vec<Rational>> = c
            .get(ComponentId::W8)
            .vectors()
            .iter()
            .map(|v| {
                let f: FormDecomposition<Rational> = decompose_form(&m, &ricci(&tensor_of(&c, v)));
                f.sym_minus.entries().to_vec()
            })
            .collect();
        let rk = crate::linalg::rank(&Matrix::from_rows(36, &images).unwrap());
        assert_eq!(rk, 12);
    }

    #[test]
    fn trivial_block_is_adjoint_range_of_traces() {
        let m = model(3);
        let c = build_components(&m);
        let basis = CurvatureBasis::shared(m.dim());
        let w = basis.weights::<Rational>();
        let rows: Vec<Vec<Rational>> = (0..2)
            .map(|which| {
                (0..basis.len())
                    .map(|k| {
                        let a = CurvatureTensor::<Rational>::new_unchecked(m, basis.element(k));
                        let t = if which == 0 { ricci(&a).trace() } else { star_ricci(&a).trace() };
                        t / w[k].clone()
                    })
                    .collect()
            })
            .collect();
        let adj = SubspaceBasis::from_spanning(basis.len(), Some(Arc::new(w)), rows).unwrap();
        assert!(adj.same_subspace(c.get(ComponentId::W1PlusW4)));
    }

    #[test]
    fn gray_kernel_is_complement_of_w7() {
        for n in 2..=3 {
            let c = build_components(&model(n));
            let comp = c.get(ComponentId::W7).ortho_complement_within(c.algebra()).unwrap();
            assert!(comp.same_subspace(c.gray()));
        }
    }

    #[test]
    fn w7_gray_defect_is_eight_times() {
        let m = model(2);
        let c = build_components(&m);
        for v in c.get(ComponentId::W7).vectors() {
            let a = tensor_of(&c, v);
            assert_eq!(gray_defect(&a), a.tensor().scale(&Rational::from_i64(8)));
        }
    }

    #[test]
    fn decomposition_sums_and_projectors() {
        let m = model(2);
        let c = build_components(&m);
        let a = sample(&m, 3);
        let d = c.decompose(&a).unwrap();
        assert!(d.is_complete());
        assert_eq!(d.sum(), a);
        for comp in ComponentId::ALL {
            let Ok(p) = c.project(&a, comp) else {
                assert!(!comp.present(2));
                continue;
            };
            assert_eq!(&p, d.part(comp));
            assert_eq!(c.project(&p, comp).unwrap(), p);
            for other in ComponentId::ALL {
                if other != comp && c.get(other).dim() > 0 {
                    assert!(c.project(&p, other).unwrap().is_zero());
                }
            }
        }
        let total: Rational = d.norms.values().cloned().sum();
        assert_eq!(total, a.norm_sq());
    }

    #[test]
    fn absent_component_is_flagged() {
        let m = model(2);
        assert_eq!(
            project(&sample(&m, 1), ComponentId::W6).unwrap_err(),
            TvError::ComponentAbsent { component: ComponentId::W6, n: 2 }
        );
        assert!(decompose(&CurvatureTensor::zero(m)).parts.values().all(|p| p.is_zero()));
    }

    #[test]
    fn r0_lies_in_trivial_block() {
        let m = model(3);
        let a = r0::<Rational>(&m);
        assert_eq!(project(&a, ComponentId::W1PlusW4).unwrap(), a);
    }

    #[test]
    fn float_components_agree() {
        let m = model(2);
        let f = float_components(&m);
        let a = sample(&m, 5);
        let exact = decompose(&a);
        let approx = f.decompose(&a.to_f64()).unwrap();
        for comp in ComponentId::ALL {
            assert!(exact.part(comp).to_f64().approx_eq(approx.part(comp)));
        }
    }

    #[test]
    fn component_names_round_trip() {
        for c in ComponentId::ALL.into_iter().chain([ComponentId::W1PlusW4, ComponentId::W2PlusW5]) {
            assert_eq!(ComponentId::parse(c.name()), Some(c));
        }
    }
}
