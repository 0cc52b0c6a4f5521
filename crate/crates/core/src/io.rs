//! JSON tensor files.
//!
//! A file carries a header, a list of named tensors stored as flat
//! row-major arrays of scalar strings (`"p/q"` for rationals, `{:e}` for
//! floats), and an optional free-form report.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::curvature::{CurvatureError, CurvatureTensor};
use crate::model::HermitianModel;
use crate::scalar::Scalar;
use crate::tensor::{Tensor3, Tensor4};

pub const FORMAT: &str = "hermitian-curvature-tensors";
pub const VERSION: u32 = 1;
pub const INDEX_ORDER: &str = "row-major (i,j,k,l); basis x1..xn, y1..yn";

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad header: {0}")]
    Header(String),
    #[error("tensor `{name}`: {reason}")]
    Shape { name: String, reason: String },
    #[error("tensor `{name}` entry {index}: cannot parse {value:?}")]
    Parse { name: String, index: usize, value: String },
    #[error("missing tensor `{0}`")]
    Missing(String),
    #[error("file is in {found} mode, expected {expected}")]
    Mode { expected: String, found: String },
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub format: String,
    pub version: u32,
    pub n: usize,
    /// `"rational"` or `"float"`.
    pub scalar: String,
    pub index_order: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedTensor {
    pub name: String,
    pub shape: Vec<usize>,
    pub data: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorFile {
    pub header: Header,
    pub tensors: Vec<NamedTensor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<serde_json::Value>,
}

impl TensorFile {
    pub fn new(n: usize, scalar: &str) -> Self {
        Self {
            header: Header {
                format: FORMAT.to_string(),
                version: VERSION,
                n,
                scalar: scalar.to_string(),
                index_order: INDEX_ORDER.to_string(),
            },
            tensors: Vec::new(),
            report: None,
        }
    }

    /// Empty file for `model` in the mode of `T`.
    pub fn for_scalar<T: Scalar>(model: &HermitianModel) -> Self {
        Self::new(model.n(), T::MODE)
    }

    pub fn dim(&self) -> usize {
        2 * self.header.n
    }

    pub fn model(&self) -> Result<HermitianModel, IoError> {
        HermitianModel::new(self.header.n).map_err(|e| IoError::Header(e.to_string()))
    }

    pub fn push<T: Scalar>(&mut self, name: &str, shape: Vec<usize>, data: &[T]) {
        debug_assert_eq!(shape.iter().product::<usize>(), data.len());
        self.tensors.push(NamedTensor {
            name: name.to_string(),
            shape,
            data: data.iter().map(Scalar::format_scalar).collect(),
        });
    }

    pub fn push_tensor4<T: Scalar>(&mut self, name: &str, t: &Tensor4<T>) {
        self.push(name, vec![t.dim(); 4], t.data());
    }

    pub fn push_tensor3<T: Scalar>(&mut self, name: &str, t: &Tensor3<T>) {
        self.push(name, vec![t.dim(); 3], t.data());
    }

    pub fn push_scalar<T: Scalar>(&mut self, name: &str, v: &T) {
        self.push(name, vec![], std::slice::from_ref(v));
    }

    pub fn find(&self, name: &str) -> Result<&NamedTensor, IoError> {
        self.tensors.iter().find(|t| t.name == name).ok_or_else(|| IoError::Missing(name.to_string()))
    }

    /// Parses tensor `name` as scalars of type `T`.
    pub fn values<T: Scalar>(&self, name: &str) -> Result<(Vec<usize>, Vec<T>), IoError> {
        let t = self.find(name)?;
        let data = t
            .data
            .iter()
            .enumerate()
            .map(|(index, s)| {
                T::parse_scalar(s).map_err(|_| IoError::Parse { name: name.to_string(), index, value: s.clone() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok((t.shape.clone(), data))
    }

    fn expect_shape(&self, name: &str, shape: &[usize], rank: usize) -> Result<(), IoError> {
        if shape.len() != rank || shape.iter().any(|&s| s != self.dim()) {
            return Err(IoError::Shape {
                name: name.to_string(),
                reason: format!("expected shape [{}; {rank}], found {shape:?}", self.dim()),
            });
        }
        Ok(())
    }

    pub fn tensor4<T: Scalar>(&self, name: &str) -> Result<Tensor4<T>, IoError> {
        let (shape, data) = self.values(name)?;
        self.expect_shape(name, &shape, 4)?;
        Ok(Tensor4::from_vec(self.dim(), data).expect("shape checked"))
    }

    pub fn tensor3<T: Scalar>(&self, name: &str) -> Result<Tensor3<T>, IoError> {
        let (shape, data) = self.values(name)?;
        self.expect_shape(name, &shape, 3)?;
        Ok(Tensor3::from_vec(self.dim(), data).expect("shape checked"))
    }

    /// Tensor `name` as a validated curvature tensor.
    pub fn curvature<T: Scalar>(&self, name: &str) -> Result<CurvatureTensor<T>, IoError> {
        Ok(CurvatureTensor::new(self.model()?, self.tensor4(name)?)?)
    }

    /// Rejects files whose mode differs from `T`.
    pub fn require_mode<T: Scalar>(&self) -> Result<(), IoError> {
        if self.header.scalar != T::MODE {
            return Err(IoError::Mode { expected: T::MODE.to_string(), found: self.header.scalar.clone() });
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), IoError> {
        if self.header.format != FORMAT {
            return Err(IoError::Header(format!("unknown format {:?}", self.header.format)));
        }
        if self.header.version != VERSION {
            return Err(IoError::Header(format!("unsupported version {}", self.header.version)));
        }
        if self.header.n == 0 {
            return Err(IoError::Header("n must be positive".to_string()));
        }
        if !matches!(self.header.scalar.as_str(), "rational" | "float") {
            return Err(IoError::Header(format!("unknown scalar mode {:?}", self.header.scalar)));
        }
        for t in &self.tensors {
            let len: usize = t.shape.iter().product();
            if len != t.data.len() {
                return Err(IoError::Shape {
                    name: t.name.clone(),
                    reason: format!("shape {:?} needs {len} entries, found {}", t.shape, t.data.len()),
                });
            }
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self, IoError> {
        let f: Self = serde_json::from_str(s)?;
        f.validate()?;
        Ok(f)
    }

    /// Pretty JSON with a trailing newline; stable for identical contents.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("tensor files serialize");
        s.push('\n');
        s
    }

    pub fn read(path: &Path) -> Result<Self, IoError> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<(), IoError> {
        fs::write(path, self.to_json())?;
        Ok(())
    }
}
