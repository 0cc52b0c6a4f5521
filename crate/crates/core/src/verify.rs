//! Checks for the eight acceptance criteria, each returning a report.

use std::fmt;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::corpus::{run_corpus, CaseId};
use crate::curvature::{gray_defect, pullback, symmetrize, CurvatureTensor};
use crate::model::{random_unitary, HermitianModel};
use crate::realization::{
    curvature_at_origin, domega_at_origin, levi_civita_curvature, normalize_first_jet, random_kaehler_jet, realize,
    RealizationError,
};
use crate::scalar::{Rational, Scalar};
use crate::tensor::Tensor4;
use crate::tv::{build_components, float_components, ComponentId};

/// Per-entry tolerance for projections in float mode.
pub const PROJECTION_TOLERANCE: f64 = 1e-8;
/// Per-entry tolerance for the Gray defect in float mode.
pub const GRAY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub number: u8,
    pub title: &'static str,
    pub n: usize,
    pub passed: bool,
    pub details: Vec<String>,
}

impl CriterionReport {
    fn new(number: u8, title: &'static str, n: usize) -> Self {
        Self { number, title, n, passed: true, details: Vec::new() }
    }

    fn check(&mut self, ok: bool, detail: String) {
        self.passed &= ok;
        self.details.push(format!("{} {detail}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, detail: String) {
        self.details.push(format!("note {detail}"));
    }

    /// One summary line: `PASS criterion 3 (2n=6): ...`.
    pub fn summary(&self) -> String {
        format!(
            "{} criterion {} (2n={}): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.number,
            2 * self.n,
            self.title
        )
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.summary())?;
        for d in &self.details {
            writeln!(f, "    {d}")?;
        }
        Ok(())
    }
}

/// Dimension rows stated for 2n = 4, 6, 8.
pub fn stated_dims(n: usize) -> Option<[usize; 10]> {
    match n {
        2 => Some([1, 3, 5, 1, 0, 0, 2, 6, 2, 0]),
        3 => Some([1, 8, 27, 1, 8, 0, 12, 12, 6, 30]),
        4 => Some([1, 15, 84, 1, 15, 20, 40, 20, 12, 128]),
        _ => None,
    }
}

/// Criterion 1: the dimension table.
pub fn dimension_table(model: &HermitianModel) -> CriterionReport {
    let n = model.n();
    let mut r = CriterionReport::new(1, "dimension table", n);
    let comps = build_components(model);
    let dims = comps.dims();
    let expected = stated_dims(n).unwrap_or_else(|| ComponentId::ALL.map(|c| c.expected_dim(n)));
    r.check(dims == expected, format!("dims {dims:?}, expected {expected:?}"));
    let total: usize = dims.iter().sum();
    let algebra = comps.basis().len();
    let stated_total = [(2, 20), (3, 105), (4, 336)].iter().find(|(k, _)| *k == n).map(|(_, t)| *t);
    r.check(
        total == algebra && stated_total.is_none_or(|t| t == total),
        format!("sum {total}, dim of curvature space {algebra}"),
    );
    r
}

/// Criterion 2: completeness and orthogonality of the decomposition.
pub fn direct_sum(model: &HermitianModel) -> CriterionReport {
    let mut r = CriterionReport::new(2, "direct sum completeness and orthogonality", model.n());
    let comps = build_components(model);
    let total: usize = comps.dims().iter().sum();
    r.check(total == comps.algebra().dim(), format!("sum of dims {total} = {}", comps.algebra().dim()));
    let mut pairs = 0;
    let mut bad = Vec::new();
    for (i, a) in ComponentId::ALL.iter().enumerate() {
        for b in &ComponentId::ALL[i + 1..] {
            if a.isotypic_class() == b.isotypic_class() {
                continue;
            }
            pairs += 1;
            if !comps.get(*a).is_orthogonal_to(comps.get(*b)) {
                bad.push(format!("{a}/{b}"));
            }
        }
    }
    r.check(bad.is_empty(), format!("{pairs} cross-class pairs orthogonal; failures {bad:?}"));
    let blocks = [
        (ComponentId::W1, ComponentId::W4, ComponentId::W1PlusW4),
        (ComponentId::W2, ComponentId::W5, ComponentId::W2PlusW5),
    ];
    for (a, b, block) in blocks {
        let union = comps.get(a).span_union(comps.get(b)).expect("same ambient space");
        r.check(union.same_subspace(comps.get(block)), format!("{a} + {b} spans {block}"));
    }
    r
}

/// Stated Gray-kernel dimensions.
pub fn stated_gray_dim(n: usize) -> Option<usize> {
    [(2, 18), (3, 93), (4, 296)].iter().find(|(k, _)| *k == n).map(|(_, d)| *d)
}

/// Criterion 3: the Gray kernel equals the orthogonal complement of W7.
pub fn gray_duality(model: &HermitianModel) -> CriterionReport {
    let n = model.n();
    let mut r = CriterionReport::new(3, "Gray kernel equals W7 complement", n);
    let comps = build_components(model);
    let gray = comps.gray();
    let complement = comps.get(ComponentId::W7).ortho_complement_within(comps.algebra()).expect("same ambient");
    r.check(gray.contains_subspace(&complement), "W7 complement inside Gray kernel".to_string());
    r.check(complement.contains_subspace(gray), "Gray kernel inside W7 complement".to_string());
    let expected = stated_gray_dim(n).unwrap_or(comps.algebra().dim() - ComponentId::W7.expected_dim(n));
    r.check(gray.dim() == expected, format!("dim Gray kernel {} (expected {expected})", gray.dim()));
    r
}

/// Criterion 4: realization round trip over a basis of the Gray kernel.
pub fn realization_round_trip(model: &HermitianModel) -> CriterionReport {
    let mut r = CriterionReport::new(4, "realization round trip on a Gray basis", model.n());
    let comps = build_components(model);
    let (mut ok, mut total) = (0, 0);
    let mut failures = Vec::new();
    for (k, v) in comps.gray().vectors().iter().enumerate() {
        total += 1;
        let a = CurvatureTensor::from_coords(*model, v);
        match realize(&a) {
            Ok(real) => {
                let rep = &real.report;
                let good = real.curvature == a
                    && rep.first_jet_zero
                    && rep.domega_max_abs.is_zero()
                    && domega_at_origin(&real.jet).is_zero()
                    && rep.j_compatible
                    && rep.round_trip_residual.is_zero();
                if good {
                    ok += 1;
                } else {
                    failures.push(k);
                }
            }
            Err(_) => failures.push(k),
        }
    }
    r.check(
        failures.is_empty(),
        format!("{ok}/{total} basis vectors reproduced exactly with h = 0, dOmega = 0, J-compatible jet"),
    );
    if !failures.is_empty() {
        r.note(format!("failing basis indices {failures:?}"));
    }
    r
}

/// Criterion 5: the W7 obstruction.
pub fn w7_obstruction(model: &HermitianModel) -> CriterionReport {
    let mut r = CriterionReport::new(5, "W7 obstruction", model.n());
    let comps = build_components(model);
    let eight = Rational::from_i64(8);
    let vectors = comps.get(ComponentId::W7).vectors();
    let mut defect_ok = 0;
    let mut refused = 0;
    for v in vectors {
        let a = CurvatureTensor::from_coords(*model, v);
        if gray_defect(&a) == a.tensor().scale(&eight) {
            defect_ok += 1;
        }
        if matches!(realize(&a), Err(RealizationError::NotRealizable { w7_norm_sq, .. }) if w7_norm_sq > 0.0) {
            refused += 1;
        }
    }
    let total = vectors.len();
    r.check(defect_ok == total && total > 0, format!("gray_defect(A) = 8A for {defect_ok}/{total} basis vectors"));
    r.check(refused == total && total > 0, format!("NotRealizable for {refused}/{total} basis vectors"));
    r
}

/// Criterion 6: the golden corpus.
pub fn golden_corpus(model: &HermitianModel) -> CriterionReport {
    let mut r = CriterionReport::new(6, "golden corpus of example metrics", model.n());
    for case in run_corpus(model) {
        let values_ok = case.values.iter().filter(|v| v.passed()).count();
        let mut line = format!("{}: {values_ok}/{} stated values", case.id, case.values.len());
        for v in case.values.iter().filter(|v| !v.passed()) {
            line += &format!(
                "; {}{:?} expected {} got {}",
                v.expected.quantity.name(),
                v.expected.indices,
                v.expected.value,
                v.computed
            );
        }
        for c in &case.claims {
            line += &format!("; {} {}", c.claim, if c.passed { "holds" } else { "FAILS" });
        }
        line += &format!("; gray defect {}", if case.gray_defect_zero { "0" } else { "NONZERO" });
        line += match &case.realized {
            Ok(true) => "; realized",
            Ok(false) => "; realization MISMATCH",
            Err(_) => "; realization FAILED",
        };
        r.check(case.passed(), line);
        if case.id == CaseId::W6 {
            let comps = build_components(model);
            let w3 = comps.project(&case.curvature, ComponentId::W3).expect("present").norm_sq();
            let total = case.curvature.norm_sq();
            r.note(format!(
                "W6 case: a zero W3 part is not asserted because it is false: W3 part has squared norm {w3} of {total}; checked instead that A is not Kaehler"
            ));
        }
    }
    r
}

fn random_curvature(model: &HermitianModel, rng: &mut ChaCha8Rng) -> CurvatureTensor<f64> {
    let raw = Tensor4::from_fn(model.dim(), |_, _, _, _| StandardNormal.sample(&mut *rng));
    symmetrize(model, &raw).expect("shape from model")
}

fn max_diff(a: &Tensor4<f64>, b: &Tensor4<f64>) -> f64 {
    a.data().iter().zip(b.data()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Criterion 7: unitary equivariance of projections and the Gray defect.
pub fn equivariance(model: &HermitianModel, unitaries: usize, tensors: usize, seed: u64) -> CriterionReport {
    let mut r = CriterionReport::new(7, "unitary equivariance (float mode)", model.n());
    let comps = float_components(model);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<_> = (0..tensors).map(|_| random_curvature(model, &mut rng)).collect();
    let present: Vec<_> = ComponentId::ALL.into_iter().filter(|c| c.present(model.n())).collect();
    let (mut worst_proj, mut worst_gray) = (0.0f64, 0.0f64);
    for u in 0..unitaries {
        let mat = random_unitary(model, seed.wrapping_mul(1_000_003).wrapping_add(u as u64));
        for a in &samples {
            let ua = pullback(a, &mat).expect("square matrix");
            for &c in &present {
                let lhs = comps.project(&ua, c).expect("present");
                let rhs = pullback(&comps.project(a, c).expect("present"), &mat).expect("square matrix");
                worst_proj = worst_proj.max(max_diff(lhs.tensor(), rhs.tensor()));
            }
            let lhs = gray_defect(&ua);
            let rhs = gray_defect(a).pullback(&mat).expect("square matrix");
            worst_gray = worst_gray.max(max_diff(&lhs, &rhs));
        }
    }
    r.check(
        worst_proj <= PROJECTION_TOLERANCE,
        format!(
            "{unitaries} unitaries x {tensors} tensors x {} components: max projection error {worst_proj:.3e}",
            present.len()
        ),
    );
    r.check(worst_gray <= GRAY_TOLERANCE, format!("max Gray defect error {worst_gray:.3e}"));
    r
}

/// Criterion 8: first-jet normalization on random Kaehler jets.
pub fn first_jet_normalization(model: &HermitianModel, count: usize, seed: u64) -> CriterionReport {
    let mut r = CriterionReport::new(8, "first-jet normalization", model.n());
    let (mut killed, mut agree, mut nontrivial) = (0, 0, 0);
    for k in 0..count {
        let jet = random_kaehler_jet(model, seed.wrapping_add(k as u64), 3);
        if !jet.h().is_zero() {
            nontrivial += 1;
        }
        let Ok((_, out)) = normalize_first_jet(&jet) else { continue };
        if out.h().is_zero() {
            killed += 1;
        }
        let oracle = levi_civita_curvature(&jet);
        if curvature_at_origin(&out).is_ok_and(|c| c.tensor() == &oracle) {
            agree += 1;
        }
    }
    r.check(killed == count, format!("h' = 0 exactly for {killed}/{count} jets ({nontrivial} with h != 0)"));
    r.check(agree == count, format!("curvature matches the Levi-Civita oracle for {agree}/{count} jets"));
    r
}

/// All criteria at one dimension, with the stated sample sizes.
pub fn run_all(model: &HermitianModel, seed: u64) -> Vec<CriterionReport> {
    vec![
        dimension_table(model),
        direct_sum(model),
        gray_duality(model),
        realization_round_trip(model),
        w7_obstruction(model),
        golden_corpus(model),
        equivariance(model, 50, 20, seed),
        first_jet_normalization(model, 100, seed),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_criteria_pass_at_dimension_four() {
        let m = HermitianModel::new(2).unwrap();
        for r in [
            dimension_table(&m),
            direct_sum(&m),
            gray_duality(&m),
            realization_round_trip(&m),
            w7_obstruction(&m),
            golden_corpus(&m),
            equivariance(&m, 3, 3, 1),
            first_jet_normalization(&m, 5, 1),
        ] {
            assert!(r.passed, "{r}");
        }
    }

    #[test]
    fn summary_format() {
        let mut r = CriterionReport::new(9, "demo", 2);
        assert_eq!(r.summary(), "PASS criterion 9 (2n=4): demo");
        r.check(false, "broken".into());
        assert!(r.summary().starts_with("FAIL"));
        assert!(r.to_string().contains("FAIL broken"));
    }
}
