//! Algebraic curvature tensors on a Hermitian vector space `(R^{2n}, <.,.>, J)`.
//!
//! The crate splits a curvature tensor into its ten unitary components
//! `W1 … W10`, evaluates the Gray identity, and realizes every tensor
//! satisfying it as the curvature at the origin of a Hermitian metric jet
//! with `dΩ(0) = 0`.
//!
//! Everything is generic over [`Scalar`]; subspace and dimension work is done
//! over exact rationals ([`Rational`]), with `f64` available for equivariance
//! checks under irrational unitary matrices.
//!
//! Basis order is `x1 … xn, y1 … yn` with `J x_a = y_a`, and tensors are
//! stored row-major.

pub mod algebra;
pub mod corpus;
pub mod curvature;
pub mod form;
pub mod io;
pub mod linalg;
pub mod model;
pub mod realization;
pub mod scalar;
pub mod tensor;
pub mod tv;
pub mod verify;

pub use curvature::{CurvatureError, CurvatureTensor};
pub use model::HermitianModel;
pub use realization::{MetricJet, RealizationError, ThetaTensor};
pub use scalar::{Rational, Scalar};
pub use tensor::{Tensor3, Tensor4};
pub use tv::{ComponentId, TvComponents};

pub type ExactCurvature = CurvatureTensor<Rational>;
pub type FloatCurvature = CurvatureTensor<f64>;
pub type ExactTensor = Tensor4<Rational>;
pub type FloatTensor = Tensor4<f64>;
pub type ExactMatrix = linalg::Matrix<Rational>;
pub type FloatMatrix = linalg::Matrix<f64>;
pub type ExactJet = MetricJet<Rational>;
pub type ExactTheta = ThetaTensor<Rational>;
