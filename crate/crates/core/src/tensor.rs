//! Dense rank-4 arrays indexed `(i, j, k, l)` in row-major order.

use std::ops::{Index, IndexMut};

use crate::linalg::Matrix;
use crate::model::HermitianModel;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TensorError {
    #[error("shape mismatch: expected {expected} entries, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> Tensor4<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![T::zero(); dim.pow(4)] }
    }

    pub fn from_vec(dim: usize, data: Vec<T>) -> Result<Self, TensorError> {
        if data.len() != dim.pow(4) {
            return Err(TensorError::ShapeMismatch { expected: dim.pow(4), found: data.len() });
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(dim.pow(4));
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    for l in 0..dim {
                        data.push(f(i, j, k, l));
                    }
                }
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn flat(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.dim + j) * self.dim + k) * self.dim + l
    }

    /// Inverse of [`flat`](Self::flat).
    pub fn unflat(&self, f: usize) -> [usize; 4] {
        let d = self.dim;
        [f / (d * d * d), (f / (d * d)) % d, (f / d) % d, f % d]
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &T {
        &self.data[self.flat(i, j, k, l)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: T) {
        let f = self.flat(i, j, k, l);
        self.data[f] = v;
    }

    fn check_same(&self, other: &Self) -> Result<(), TensorError> {
        if self.dim != other.dim {
            return Err(TensorError::ShapeMismatch { expected: self.data.len(), found: other.data.len() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, TensorError> {
        self.check_same(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b).collect();
        Ok(Self { dim: self.dim, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, TensorError> {
        self.check_same(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b).collect();
        Ok(Self { dim: self.dim, data })
    }

    pub fn scale(&self, c: &T) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|a| a.mul_ref(c)).collect() }
    }

    pub fn neg(&self) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|a| -a.clone()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Zero test: exact for rationals, `max |entry| <= 1e-10 (1 + scale)` for floats.
    pub fn is_negligible(&self, scale: &T) -> bool {
        self.data.iter().all(|v| v.is_negligible(scale))
    }

    pub fn max_abs(&self) -> T {
        crate::scalar::max_abs(&self.data)
    }

    pub fn inner(&self, other: &Self) -> T {
        crate::linalg::dot(&self.data, &other.data)
    }

    pub fn norm_sq(&self) -> T {
        crate::scalar::norm_sq(&self.data)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Tensor4<U> {
        Tensor4 { dim: self.dim, data: self.data.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> Tensor4<f64> {
        self.map(|v| v.to_f64())
    }

    /// `out(i0, i1, i2, i3) = self(i_{p[0]}, i_{p[1]}, i_{p[2]}, i_{p[3]})`.
    pub fn permuted(&self, p: [usize; 4]) -> Self {
        Self::from_fn(self.dim, |i, j, k, l| {
            let idx = [i, j, k, l];
            self.get(idx[p[0]], idx[p[1]], idx[p[2]], idx[p[3]]).clone()
        })
    }

    /// Inserts `J` into the slots flagged by `mask`: for `mask = [true, false, true, false]`
    /// the result is `(x, y, z, w) -> self(Jx, y, Jz, w)`.
    pub fn with_j(&self, model: &HermitianModel, mask: [bool; 4]) -> Self {
        let n = self.dim;
        let image: Vec<(usize, i8)> = (0..n).map(|i| model.j_image(i)).collect();
        let step = |slot: usize, i: usize| -> (usize, i8) {
            if mask[slot] {
                image[i]
            } else {
                (i, 1)
            }
        };
        Self::from_fn(n, |i, j, k, l| {
            let (a, sa) = step(0, i);
            let (b, sb) = step(1, j);
            let (c, sc) = step(2, k);
            let (d, sd) = step(3, l);
            let v = self.get(a, b, c, d).clone();
            if sa * sb * sc * sd < 0 {
                -v
            } else {
                v
            }
        })
    }

    /// `(T*A)(x, y, z, w) = A(Tx, Ty, Tz, Tw)`, one slot at a time.
    pub fn pullback(&self, t: &Matrix<T>) -> Result<Self, TensorError> {
        let n = self.dim;
        if t.rows() != n || t.cols() != n {
            return Err(TensorError::ShapeMismatch { expected: n * n, found: t.rows() * t.cols() });
        }
        let mut cur = self.data.clone();
        for slot in 0..4 {
            let stride = n.pow(3 - slot as u32);
            let mut next = vec![T::zero(); cur.len()];
            for (f, out) in next.iter_mut().enumerate() {
                let i = (f / stride) % n;
                let base = f - i * stride;
                let mut acc = T::zero();
                for a in 0..n {
                    let ta = &t[(a, i)];
                    if ta.is_zero() {
                        continue;
                    }
                    let v = &cur[base + a * stride];
                    if !v.is_zero() {
                        acc += ta.mul_ref(v);
                    }
                }
                *out = acc;
            }
            cur = next;
        }
        Ok(Self { dim: n, data: cur })
    }
}

impl<T> Index<[usize; 4]> for Tensor4<T> {
    type Output = T;
    fn index(&self, [i, j, k, l]: [usize; 4]) -> &T {
        &self.data[((i * self.dim + j) * self.dim + k) * self.dim + l]
    }
}

impl<T> IndexMut<[usize; 4]> for Tensor4<T> {
    fn index_mut(&mut self, [i, j, k, l]: [usize; 4]) -> &mut T {
        &mut self.data[((i * self.dim + j) * self.dim + k) * self.dim + l]
    }
}

/// Dense rank-3 array indexed `(i, j, k)` in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> Tensor3<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![T::zero(); dim.pow(3)] }
    }

    pub fn from_vec(dim: usize, data: Vec<T>) -> Result<Self, TensorError> {
        if data.len() != dim.pow(3) {
            return Err(TensorError::ShapeMismatch { expected: dim.pow(3), found: data.len() });
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(dim.pow(3));
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    data.push(f(i, j, k));
                }
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &T {
        &self.data[(i * self.dim + j) * self.dim + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: T) {
        let f = (i * self.dim + j) * self.dim + k;
        self.data[f] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn max_abs(&self) -> T {
        crate::scalar::max_abs(&self.data)
    }

    pub fn norm_sq(&self) -> T {
        crate::scalar::norm_sq(&self.data)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Tensor3<U> {
        Tensor3 { dim: self.dim, data: self.data.iter().map(f).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn sample(dim: usize) -> Tensor4<Rational> {
        Tensor4::from_fn(dim, |i, j, k, l| Rational::from_i64((i * 7 + j * 3 + k * k + 2 * l) as i64 % 5 - 2))
    }

    #[test]
    fn flat_and_unflat_agree() {
        let t = sample(4);
        for f in [0, 1, 17, 255] {
            let [i, j, k, l] = t.unflat(f);
            assert_eq!(t.flat(i, j, k, l), f);
        }
    }

    #[test]
    fn pullback_by_identity_and_functoriality() {
        let t = sample(4);
        let id = Matrix::identity(4);
        assert_eq!(t.pullback(&id).unwrap(), t);
        let s = Matrix::from_fn(4, 4, |i, j| Rational::from_i64(((i + 2 * j) % 3) as i64 - 1));
        let r = Matrix::from_fn(4, 4, |i, j| Rational::from_i64(((3 * i + j) % 4) as i64 - 2));
        let st = s.mul(&r).unwrap();
        let lhs = t.pullback(&st).unwrap();
        let rhs = t.pullback(&s).unwrap().pullback(&r).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullback_matches_direct_sum() {
        let t = sample(4);
        let s = Matrix::from_fn(4, 4, |i, j| Rational::from_i64(((i * j + 1) % 3) as i64));
        let p = t.pullback(&s).unwrap();
        let (i, j, k, l) = (1, 2, 0, 3);
        let mut acc = Rational::from_i64(0);
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        acc += s[(a, i)].clone() * &s[(b, j)] * &s[(c, k)] * &s[(d, l)] * t.get(a, b, c, d);
                    }
                }
            }
        }
        assert_eq!(p.get(i, j, k, l), &acc);
    }

    #[test]
    fn with_j_matches_pullback_by_j() {
        let m = HermitianModel::new(2).unwrap();
        let t = sample(4);
        let j = m.j_matrix::<Rational>();
        assert_eq!(t.with_j(&m, [true; 4]), t.pullback(&j).unwrap());
        let twice = t.with_j(&m, [true, false, false, false]).with_j(&m, [true, false, false, false]);
        assert_eq!(twice, t.neg());
    }

    #[test]
    fn shape_errors() {
        assert!(Tensor4::<Rational>::from_vec(2, vec![Rational::from_i64(0); 15]).is_err());
        let a = sample(2);
        let b = sample(4);
        assert!(a.add(&b).is_err());
    }
}
