use std::path::Path;
use std::sync::Arc;

use hermitian_curvature::corpus::{check_case, example, run_corpus, CaseId, CaseReport};
use hermitian_curvature::curvature::gray_defect;
use hermitian_curvature::io::{IoError, TensorFile};
use hermitian_curvature::realization::{
    curvature_at_origin, levi_civita_curvature, normalize_first_jet, realize, MetricJet, RealizationError,
};
use hermitian_curvature::tv::{build_components, dims_table, float_components, TvComponents};
use hermitian_curvature::verify::run_all;
use hermitian_curvature::{ComponentId, CurvatureTensor, HermitianModel, Rational, Scalar, Tensor3, Tensor4};
use serde_json::{json, Map, Value};

use crate::{Command, Common, ScalarMode};

pub const EXIT_FAIL: u8 = 1;
pub const EXIT_NOT_REALIZABLE: u8 = 2;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    fn failure(message: impl Into<String>) -> Self {
        Self { code: EXIT_FAIL, message: message.into() }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        Self::usage(e.to_string())
    }
}

type CliResult = Result<u8, CliError>;

pub fn run(command: Command) -> CliResult {
    match command {
        Command::Dims { n } => dims(n),
        Command::Basis { n, component, index, output } => basis(n, &component, index, output.as_deref()),
        Command::Decompose { input, tensor, common } => {
            let file = TensorFile::read(&input)?;
            match common.scalar {
                ScalarMode::Rational => decompose::<Rational>(&file, &tensor, &common, build_components),
                ScalarMode::Float => decompose::<f64>(&file, &tensor, &common, float_components),
            }
        }
        Command::GrayCheck { input, tensor, common } => {
            let file = TensorFile::read(&input)?;
            match common.scalar {
                ScalarMode::Rational => gray_check::<Rational>(&file, &tensor, &common),
                ScalarMode::Float => gray_check::<f64>(&file, &tensor, &common),
            }
        }
        Command::Realize { input, tensor, common } => {
            if common.scalar != ScalarMode::Rational {
                return Err(CliError::usage("realize works in rational mode only"));
            }
            realize_cmd(&TensorFile::read(&input)?, &tensor, common.output.as_deref())
        }
        Command::Curvature { input, common } => {
            let file = TensorFile::read(&input)?;
            match common.scalar {
                ScalarMode::Rational => curvature_cmd::<Rational>(&file, &common),
                ScalarMode::Float => curvature_cmd::<f64>(&file, &common),
            }
        }
        Command::Examples { n, case, output } => examples(n, case.as_deref(), output.as_deref()),
        Command::VerifyAll { n, seed } => verify_all(n, seed),
    }
}

fn model(n: usize) -> Result<HermitianModel, CliError> {
    HermitianModel::new(n).map_err(|e| CliError::usage(e.to_string()))
}

fn emit(file: &TensorFile, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => file.write(path).map_err(CliError::from),
        None => {
            print!("{}", file.to_json());
            Ok(())
        }
    }
}

fn scalar_json<T: Scalar>(v: &T) -> Value {
    Value::String(v.format_scalar())
}

/// Reads a tensor in the mode of `T`, converting from the file's mode if needed.
fn read_tensor4<T: Scalar>(file: &TensorFile, name: &str) -> Result<Tensor4<T>, CliError> {
    if file.header.scalar == T::MODE {
        return Ok(file.tensor4::<T>(name)?);
    }
    let data: Vec<Option<T>> = if file.header.scalar == Rational::MODE {
        file.tensor4::<Rational>(name)?.data().iter().map(|v| T::from_f64(v.to_f64())).collect()
    } else {
        file.tensor4::<f64>(name)?.data().iter().map(|v| T::from_f64(*v)).collect()
    };
    convert(&data, name).map(|d| Tensor4::from_vec(file.dim(), d).expect("same length"))
}

fn read_tensor3<T: Scalar>(file: &TensorFile, name: &str) -> Result<Tensor3<T>, CliError> {
    if file.header.scalar == T::MODE {
        return Ok(file.tensor3::<T>(name)?);
    }
    let data: Vec<Option<T>> = if file.header.scalar == Rational::MODE {
        file.tensor3::<Rational>(name)?.data().iter().map(|v| T::from_f64(v.to_f64())).collect()
    } else {
        file.tensor3::<f64>(name)?.data().iter().map(|v| T::from_f64(*v)).collect()
    };
    convert(&data, name).map(|d| Tensor3::from_vec(file.dim(), d).expect("same length"))
}

fn convert<T: Scalar>(data: &[Option<T>], name: &str) -> Result<Vec<T>, CliError> {
    data.iter()
        .cloned()
        .collect::<Option<Vec<T>>>()
        .ok_or_else(|| CliError::usage(format!("tensor `{name}` has non-finite entries")))
}

fn read_curvature<T: Scalar>(file: &TensorFile, name: &str) -> Result<CurvatureTensor<T>, CliError> {
    let raw = read_tensor4::<T>(file, name)?;
    CurvatureTensor::new(file.model()?, raw).map_err(|e| CliError::usage(format!("tensor `{name}`: {e}")))
}

fn dims(n: usize) -> CliResult {
    let m = model(n)?;
    let table = dims_table(&m);
    println!("n = {n} (2n = {})", m.dim());
    let mut ok = table.checksum_ok();
    for (c, d) in ComponentId::ALL.iter().zip(table.dims) {
        let expected = c.expected_dim(n);
        ok &= d == expected;
        println!("{:<4} {d:>5}{}", c.name(), if d == expected { "" } else { "  (formula disagrees)" });
    }
    println!("total {} ; curvature space {}", table.total(), table.algebra_dim);
    println!("checksum: {}", if ok { "PASS" } else { "FAIL" });
    Ok(if ok { 0 } else { EXIT_FAIL })
}

fn basis(n: usize, component: &str, index: usize, output: Option<&Path>) -> CliResult {
    let m = model(n)?;
    let c = ComponentId::parse(component).ok_or_else(|| CliError::usage(format!("unknown component `{component}`")))?;
    let comps = build_components(&m);
    let sub = comps.get(c);
    let v = sub
        .vectors()
        .get(index)
        .ok_or_else(|| CliError::usage(format!("{c} has dimension {} at n = {n}", sub.dim())))?;
    let a = CurvatureTensor::from_coords(m, v);
    let mut file = TensorFile::for_scalar::<Rational>(&m);
    file.push_tensor4("A", a.tensor());
    file.report = Some(json!({ "component": c.name(), "index": index, "dimension": sub.dim() }));
    emit(&file, output)?;
    Ok(0)
}

fn decompose<T: Scalar>(
    file: &TensorFile,
    name: &str,
    common: &Common,
    components: fn(&HermitianModel) -> Arc<TvComponents<T>>,
) -> CliResult {
    let a = read_curvature::<T>(file, name)?;
    let comps = components(a.model());
    let d = comps.decompose(&a).map_err(|e| CliError::usage(e.to_string()))?;
    let mut out = TensorFile::for_scalar::<T>(a.model());
    out.push_tensor4("A", a.tensor());
    let mut norms = Map::new();
    for c in ComponentId::ALL {
        out.push_tensor4(c.name(), d.part(c).tensor());
        norms.insert(c.name().to_string(), scalar_json(&d.norms[&c]));
    }
    let residual = d.sum().sub(&a).expect("same model").tensor().max_abs();
    let complete = if T::EXACT { residual.is_zero() } else { residual.to_f64() <= common.tolerance };
    out.report = Some(json!({ "norms_sq": norms, "complete": complete, "residual_max_abs": scalar_json(&residual) }));
    emit(&out, common.output.as_deref())?;
    Ok(if complete { 0 } else { EXIT_FAIL })
}

fn norm_text<T: Scalar>(norm_sq: &T) -> String {
    if norm_sq.is_zero() {
        return "0".to_string();
    }
    match (T::EXACT, norm_sq.sqrt_exact()) {
        (true, Some(r)) => r.format_scalar(),
        _ => format!("{:e}", norm_sq.to_f64().sqrt()),
    }
}

fn gray_check<T: Scalar>(file: &TensorFile, name: &str, common: &Common) -> CliResult {
    let a = read_curvature::<T>(file, name)?;
    let defect = gray_defect(&a);
    let pass = if T::EXACT { defect.is_zero() } else { defect.max_abs().to_f64() <= common.tolerance };
    let norm_sq = defect.norm_sq();
    println!("Gray: {}, defect norm {}", if pass { "PASS" } else { "FAIL" }, norm_text(&norm_sq));
    if let Some(path) = &common.output {
        let mut out = TensorFile::for_scalar::<T>(a.model());
        out.push_tensor4("gray_defect", &defect);
        out.report = Some(json!({ "pass": pass, "defect_norm_sq": scalar_json(&norm_sq) }));
        out.write(path)?;
    }
    Ok(if pass { 0 } else { EXIT_FAIL })
}

fn realize_cmd(file: &TensorFile, name: &str, output: Option<&Path>) -> CliResult {
    let a = read_curvature::<Rational>(file, name)?;
    let real = match realize(&a) {
        Ok(r) => r,
        Err(RealizationError::NotRealizable { w7_norm_sq, gray_defect_norm_sq }) => {
            eprintln!(
                "not realizable: W7 part squared norm {w7_norm_sq:e}, Gray defect squared norm {gray_defect_norm_sq:e}"
            );
            return Ok(EXIT_NOT_REALIZABLE);
        }
        Err(e) => return Err(CliError::failure(e.to_string())),
    };
    let rep = &real.report;
    let mut out = TensorFile::for_scalar::<Rational>(a.model());
    out.push_tensor4("theta", real.theta.tensor());
    out.push_tensor3("h", real.jet.h());
    out.push_tensor4("q", real.jet.q());
    out.push_tensor4("A", real.curvature.tensor());
    let norms: Map<String, Value> =
        rep.component_norms.iter().map(|(c, v)| (c.name().to_string(), scalar_json(v))).collect();
    let radius = if rep.nonsingular_radius.is_finite() {
        json!(rep.nonsingular_radius)
    } else {
        json!("inf")
    };
    out.report = Some(json!({
        "passed": rep.passed(),
        "round_trip_residual": scalar_json(&rep.round_trip_residual),
        "gray_defect_norm_sq": scalar_json(&rep.gray_defect_norm_sq),
        "domega_max_abs": scalar_json(&rep.domega_max_abs),
        "first_jet_zero": rep.first_jet_zero,
        "j_compatible": rep.j_compatible,
        "theta_norm_sq": scalar_json(&rep.theta_norm_sq),
        "component_norms_sq": norms,
        "nonsingular_radius": radius,
    }));
    emit(&out, output)?;
    Ok(if rep.passed() { 0 } else { EXIT_FAIL })
}

fn curvature_cmd<T: Scalar>(file: &TensorFile, common: &Common) -> CliResult {
    let m = file.model()?;
    let h = read_tensor3::<T>(file, "h")?;
    let q = read_tensor4::<T>(file, "q")?;
    let jet = MetricJet::new(m, h, q).map_err(|e| CliError::usage(e.to_string()))?;
    let normalized = !jet.h().is_zero();
    let q_final = if normalized {
        let (_, out) = normalize_first_jet(&jet).map_err(|e| CliError::failure(e.to_string()))?;
        let residual = out.h().max_abs();
        let killed = if T::EXACT { residual.is_zero() } else { residual.to_f64() <= common.tolerance };
        if !killed {
            return Err(CliError::failure(format!("first jet not removed (max |h'| = {})", residual)));
        }
        out.q().clone()
    } else {
        jet.q().clone()
    };
    let flat_first = MetricJet::new(m, Tensor3::zeros(m.dim()), q_final).map_err(|e| CliError::failure(e.to_string()))?;
    let a = curvature_at_origin(&flat_first).map_err(|e| CliError::failure(e.to_string()))?;
    let oracle = levi_civita_curvature(&jet);
    let diff = a.tensor().sub(&oracle).expect("same shape").max_abs();
    let agrees = if T::EXACT { diff.is_zero() } else { diff.to_f64() <= common.tolerance };
    let mut out = TensorFile::for_scalar::<T>(&m);
    out.push_tensor4("A", a.tensor());
    out.report = Some(json!({
        "normalized_first_jet": normalized,
        "levi_civita_max_diff": scalar_json(&diff),
        "levi_civita_agrees": agrees,
        "gray_defect_norm_sq": scalar_json(&gray_defect(&a).norm_sq()),
    }));
    emit(&out, common.output.as_deref())?;
    Ok(if agrees { 0 } else { EXIT_FAIL })
}

fn print_case(r: &CaseReport) {
    let values = r.values.iter().filter(|v| v.passed()).count();
    println!("{} {}: {values}/{} stated values", if r.passed() { "PASS" } else { "FAIL" }, r.id, r.values.len());
    for v in r.values.iter().filter(|v| !v.passed()) {
        println!(
            "    {}{:?}: expected {}, computed {}",
            v.expected.quantity.name(),
            v.expected.indices,
            v.expected.value,
            v.computed
        );
    }
    for c in &r.claims {
        println!("    {}: {}", c.claim, if c.passed { "holds" } else { "FAILS" });
    }
    println!("    Gray: {}", if r.gray_defect_zero { "PASS, defect norm 0" } else { "FAIL" });
    match &r.realized {
        Ok(true) => println!("    realization: round trip exact"),
        Ok(false) => println!("    realization: MISMATCH"),
        Err(e) => println!("    realization: {e}"),
    }
}

fn examples(n: usize, case: Option<&str>, output: Option<&Path>) -> CliResult {
    let m = model(n)?;
    let reports = match case {
        Some(name) => {
            let id = CaseId::parse(name).map_err(|e| CliError::usage(e.to_string()))?;
            let c = example(id, &m, &Default::default()).map_err(|e| CliError::usage(e.to_string()))?;
            vec![(check_case(&c), c)]
        }
        None => run_corpus(&m)
            .into_iter()
            .map(|r| {
                let c = example(r.id, &m, &Default::default()).expect("case ran");
                (r, c)
            })
            .collect(),
    };
    let mut file = TensorFile::for_scalar::<Rational>(&m);
    let mut summary = Map::new();
    for (r, c) in &reports {
        print_case(r);
        file.push_tensor3(&format!("{}/h", r.id), c.jet.h());
        file.push_tensor4(&format!("{}/q", r.id), c.jet.q());
        file.push_tensor4(&format!("{}/A", r.id), r.curvature.tensor());
        let params: Map<String, Value> = c.parameters.iter().map(|(k, v)| (k.to_string(), scalar_json(v))).collect();
        summary.insert(r.id.name().to_string(), json!({ "passed": r.passed(), "parameters": params }));
    }
    if let Some(path) = output {
        file.report = Some(Value::Object(summary));
        file.write(path)?;
    }
    Ok(if reports.iter().all(|(r, _)| r.passed()) { 0 } else { EXIT_FAIL })
}

fn verify_all(n: usize, seed: u64) -> CliResult {
    let m = model(n)?;
    let reports = run_all(&m, seed);
    for r in &reports {
        print!("{r}");
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    println!("{} of {} criteria passed at 2n = {}", reports.len() - failed, reports.len(), m.dim());
    Ok(if failed == 0 { 0 } else { EXIT_FAIL })
}

