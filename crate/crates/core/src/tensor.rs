//! Dense m-order, n-dimensional tensors and the square matrices that act on them.
//!
//! Storage is row-major over the multi-index `(i1, ..., im)`, so the mode-1
//! flattening of a tensor is its data buffer viewed as an `n x n^(m-1)`
//! row-major matrix. Indices in this API are 0-based; documentation uses the
//! 1-based convention of the underlying mathematics where it reads better.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Radicands smaller than this in magnitude are treated as zero.
const ROOT_ZERO_THRESHOLD: f64 = 1e-300;

fn check_finite(data: &[f64]) -> Result<()> {
    match data.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite(i)),
        None => Ok(()),
    }
}

/// `1 + n + ... + n^(terms-1)`: the flat-offset stride of a repeated index.
fn repeated_stride(n: usize, terms: usize) -> usize {
    let mut stride = 0;
    let mut p = 1;
    for _ in 0..terms {
        stride += p;
        p *= n;
    }
    stride
}

/// An m-order n-dimensional real tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    order: usize,
    dim: usize,
    data: Vec<f64>,
}

impl DenseTensor {
    pub fn new(order: usize, dim: usize, data: Vec<f64>) -> Result<Self> {
        if order < 2 {
            return Err(Error::Dimension(format!(
                "tensor order must be >= 2, got {order}"
            )));
        }
        if dim < 1 {
            return Err(Error::Dimension("tensor dimension must be >= 1".into()));
        }
        let expected = dim
            .checked_pow(order as u32)
            .ok_or_else(|| Error::Dimension(format!("{dim}^{order} entries overflow")))?;
        if data.len() != expected {
            return Err(Error::Dimension(format!(
                "expected {expected} entries for order {order}, dim {dim}; got {}",
                data.len()
            )));
        }
        check_finite(&data)?;
        Ok(Self { order, dim, data })
    }

    pub fn zeros(order: usize, dim: usize) -> Result<Self> {
        if order < 2 || dim < 1 {
            return Self::new(order, dim, Vec::new());
        }
        let len = dim
            .checked_pow(order as u32)
            .ok_or_else(|| Error::Dimension(format!("{dim}^{order} entries overflow")))?;
        Self::new(order, dim, vec![0.0; len])
    }

    /// Builds a tensor by evaluating `f` on every 0-based multi-index in
    /// row-major order.
    pub fn from_fn(order: usize, dim: usize, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let mut t = Self::zeros(order, dim)?;
        let mut idx = vec![0usize; order];
        for slot in t.data.iter_mut() {
            *slot = f(&idx);
            for k in (0..order).rev() {
                idx[k] += 1;
                if idx[k] < dim {
                    break;
                }
                idx[k] = 0;
            }
        }
        check_finite(&t.data)?;
        Ok(t)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    /// Length of a mode-1 fiber block, `n^(m-1)`.
    pub fn slice_len(&self) -> usize {
        self.data.len() / self.dim
    }

    /// The mode-1 slice `a_{i, :, ..., :}` as a contiguous block.
    pub fn slice(&self, i: usize) -> &[f64] {
        let len = self.slice_len();
        &self.data[i * len..(i + 1) * len]
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        assert_eq!(
            idx.len(),
            self.order,
            "multi-index length must equal tensor order"
        );
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.dim);
            acc * self.dim + i
        })
    }

    /// Inverse of [`offset`](Self::offset).
    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.order];
        for k in (0..self.order).rev() {
            idx[k] = flat % self.dim;
            flat /= self.dim;
        }
        idx
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: f64) {
        let off = self.offset(idx);
        self.data[off] = value;
    }

    /// Flat offset of `(i, j, j, ..., j)`.
    pub fn majorization_offset(&self, i: usize, j: usize) -> usize {
        i * self.slice_len() + j * repeated_stride(self.dim, self.order - 1)
    }

    /// `a_{i i ... i}`.
    pub fn diagonal(&self, i: usize) -> f64 {
        self.data[i * repeated_stride(self.dim, self.order)]
    }

    pub fn is_diagonal_offset(&self, flat: usize) -> bool {
        flat.is_multiple_of(repeated_stride(self.dim, self.order))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min_entry(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_diff(&self, other: &DenseTensor) -> f64 {
        assert_eq!((self.order, self.dim), (other.order, other.dim));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|&v| v >= 0.0)
    }

    /// True when every off-diagonal entry is nonpositive.
    pub fn is_z_tensor(&self) -> bool {
        self.data
            .iter()
            .enumerate()
            .all(|(k, &v)| v <= 0.0 || self.is_diagonal_offset(k))
    }

    fn zip_with(&self, other: &DenseTensor, f: impl Fn(f64, f64) -> f64) -> DenseTensor {
        assert_eq!(
            (self.order, self.dim),
            (other.order, other.dim),
            "tensor shapes must match"
        );
        DenseTensor {
            order: self.order,
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> DenseTensor {
        DenseTensor {
            order: self.order,
            dim: self.dim,
            data: self.data.iter().map(|&a| f(a)).collect(),
        }
    }
}

impl Add for &DenseTensor {
    type Output = DenseTensor;
    fn add(self, rhs: &DenseTensor) -> DenseTensor {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &DenseTensor {
    type Output = DenseTensor;
    fn sub(self, rhs: &DenseTensor) -> DenseTensor {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &DenseTensor {
    type Output = DenseTensor;
    fn neg(self) -> DenseTensor {
        self.map(|a| -a)
    }
}

impl Mul<f64> for &DenseTensor {
    type Output = DenseTensor;
    fn mul(self, rhs: f64) -> DenseTensor {
        self.map(|a| a * rhs)
    }
}

/// An n x n real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "expected {} matrix entries, got {}",
                dim * dim,
                data.len()
            )));
        }
        check_finite(&data)?;
        Ok(Self { dim, data })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.dim + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn diagonal_part(&self) -> SquareMatrix {
        Self::from_fn(self.dim, |i, j| if i == j { self.get(i, j) } else { 0.0 })
    }

    pub fn strict_lower(&self) -> SquareMatrix {
        Self::from_fn(self.dim, |i, j| if i > j { self.get(i, j) } else { 0.0 })
    }

    pub fn strict_upper(&self) -> SquareMatrix {
        Self::from_fn(self.dim, |i, j| if i < j { self.get(i, j) } else { 0.0 })
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim {
            return Err(Error::Dimension(format!(
                "matrix dim {} vs vector length {}",
                self.dim,
                x.len()
            )));
        }
        Ok((0..self.dim)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn max_abs_diff(&self, other: &SquareMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn min_entry(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// The tensor `M·I_m`: entry `M_{ij}` at `(i, j, ..., j)`, zero elsewhere.
    pub fn times_identity(&self, order: usize) -> Result<DenseTensor> {
        let mut t = DenseTensor::zeros(order, self.dim)?;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let off = t.majorization_offset(i, j);
                t.data[off] = self.get(i, j);
            }
        }
        Ok(t)
    }

    /// LU factorization with partial pivoting.
    pub fn lu(&self) -> Result<Lu> {
        Lu::factor(self)
    }

    pub fn inverse(&self) -> Result<SquareMatrix> {
        let lu = self.lu()?;
        let n = self.dim;
        let mut inv = SquareMatrix::zeros(n);
        let mut col = vec![0.0; n];
        for j in 0..n {
            col.iter_mut().for_each(|c| *c = 0.0);
            col[j] = 1.0;
            lu.solve_in_place(&mut col);
            for i in 0..n {
                inv.set(i, j, col[i]);
            }
        }
        Ok(inv)
    }

    fn zip_with(&self, other: &SquareMatrix, f: impl Fn(f64, f64) -> f64) -> SquareMatrix {
        assert_eq!(self.dim, other.dim, "matrix dimensions must match");
        SquareMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

impl Add for &SquareMatrix {
    type Output = SquareMatrix;
    fn add(self, rhs: &SquareMatrix) -> SquareMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &SquareMatrix {
    type Output = SquareMatrix;
    fn sub(self, rhs: &SquareMatrix) -> SquareMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &SquareMatrix {
    type Output = SquareMatrix;
    fn mul(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions must match");
        let n = self.dim;
        let mut out = SquareMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.get(k, j);
                }
            }
        }
        out
    }
}

impl Mul<f64> for &SquareMatrix {
    type Output = SquareMatrix;
    fn mul(self, rhs: f64) -> SquareMatrix {
        SquareMatrix {
            dim: self.dim,
            data: self.data.iter().map(|a| a * rhs).collect(),
        }
    }
}

/// Packed LU factors `P·M = L·U` with unit-lower `L`.
#[derive(Debug, Clone)]
pub struct Lu {
    dim: usize,
    factors: Vec<f64>,
    pivots: Vec<usize>,
}

impl Lu {
    fn factor(m: &SquareMatrix) -> Result<Self> {
        let n = m.dim;
        let mut a = m.data.clone();
        let mut pivots = Vec::with_capacity(n);
        let scale = m.data.iter().fold(0.0f64, |s, v| s.max(v.abs()));
        let tiny = f64::EPSILON * scale * n as f64;
        for col in 0..n {
            let (p, pmax) =
                (col..n)
                    .map(|r| (r, a[r * n + col].abs()))
                    .fold(
                        (col, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if pmax <= tiny || pmax == 0.0 {
                return Err(Error::SingularEMatrix { column: col });
            }
            pivots.push(p);
            if p != col {
                for j in 0..n {
                    a.swap(col * n + j, p * n + j);
                }
            }
            let d = a[col * n + col];
            for r in col + 1..n {
                let f = a[r * n + col] / d;
                a[r * n + col] = f;
                if f != 0.0 {
                    for j in col + 1..n {
                        a[r * n + j] -= f * a[col * n + j];
                    }
                }
            }
        }
        Ok(Self {
            dim: n,
            factors: a,
            pivots,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Overwrites `b` with the solution of `M·x = b`.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.dim;
        debug_assert_eq!(b.len(), n);
        for (col, &p) in self.pivots.iter().enumerate() {
            if p != col {
                b.swap(col, p);
            }
        }
        for i in 0..n {
            let mut s = b[i];
            for j in 0..i {
                s -= self.factors[i * n + j] * b[j];
            }
            b[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in i + 1..n {
                s -= self.factors[i * n + j] * b[j];
            }
            b[i] = s / self.factors[i * n + i];
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

/// The identity tensor `I_m` of order `m` and dimension `n`.
pub fn identity_tensor(order: usize, dim: usize) -> Result<DenseTensor> {
    let mut t = DenseTensor::zeros(order, dim)?;
    let stride = repeated_stride(dim, order);
    for i in 0..dim {
        t.data[i * stride] = 1.0;
    }
    Ok(t)
}

/// `(A x^{m-1})_i = sum over i2..im of a_{i i2 ... im} x_{i2} ... x_{im}`.
///
/// The products `x_{i2}···x_{im}` are formed left to right and each output
/// component is accumulated in lexicographic order of `(i2, ..., im)`, so the
/// result is bit-reproducible.
pub fn contract(a: &DenseTensor, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != a.dim {
        return Err(Error::Dimension(format!(
            "tensor dim {} vs vector length {}",
            a.dim,
            x.len()
        )));
    }
    let weights = outer_power(x, a.order - 1);
    Ok(a.data
        .chunks_exact(weights.len())
        .map(|slice| {
            let mut acc = 0.0;
            for (c, w) in slice.iter().zip(&weights) {
                acc += c * w;
            }
            acc
        })
        .collect())
}

/// Row-major outer power `x ⊗ x ⊗ ... ⊗ x` with `times` factors.
fn outer_power(x: &[f64], times: usize) -> Vec<f64> {
    let mut w = vec![1.0];
    for _ in 0..times {
        let mut next = Vec::with_capacity(w.len() * x.len());
        for &p in &w {
            for &xi in x {
                next.push(p * xi);
            }
        }
        w = next;
    }
    w
}

/// The product `C = M B` acting on mode-1 fibers:
/// `c_{j i2..im} = sum_{j2} M_{j j2} b_{j2 i2..im}`.
pub fn matrix_tensor_product(m: &SquareMatrix, b: &DenseTensor) -> Result<DenseTensor> {
    if m.dim != b.dim {
        return Err(Error::Dimension(format!(
            "matrix dim {} vs tensor dim {}",
            m.dim, b.dim
        )));
    }
    let n = b.dim;
    let len = b.slice_len();
    let mut out = vec![0.0; b.data.len()];
    for j in 0..n {
        let dst = &mut out[j * len..(j + 1) * len];
        for j2 in 0..n {
            let coef = m.get(j, j2);
            if coef == 0.0 {
                continue;
            }
            for (d, s) in dst.iter_mut().zip(b.slice(j2)) {
                *d += coef * s;
            }
        }
    }
    DenseTensor::new(b.order, n, out)
}

/// The majorization matrix `M(A)_{ij} = a_{i j ... j}`.
pub fn majorization(a: &DenseTensor) -> SquareMatrix {
    SquareMatrix::from_fn(a.dim, |i, j| a.data[a.majorization_offset(i, j)])
}

/// Componentwise `(m-1)`-th root. Odd roots keep the sign of the radicand;
/// even roots of a negative component fail with [`Error::NegativeRadicand`].
pub fn elementwise_root(v: &[f64], order: usize) -> Result<Vec<f64>> {
    if order < 2 {
        return Err(Error::Dimension(format!("order must be >= 2, got {order}")));
    }
    let p = order - 1;
    v.iter()
        .enumerate()
        .map(|(i, &value)| {
            if value.abs() < ROOT_ZERO_THRESHOLD {
                return Ok(0.0);
            }
            if p == 1 {
                return Ok(value);
            }
            if value < 0.0 {
                if p.is_multiple_of(2) {
                    return Err(Error::NegativeRadicand { index: i, value });
                }
                return Ok(-odd_root(-value, p));
            }
            Ok(match p {
                2 => value.sqrt(),
                3 => value.cbrt(),
                _ => value.powf(1.0 / p as f64),
            })
        })
        .collect()
}

fn odd_root(value: f64, p: usize) -> f64 {
    if p == 3 {
        value.cbrt()
    } else {
        value.powf(1.0 / p as f64)
    }
}

/// Additive split `T = D·I_m + L·I_m + R`: `D` is the diagonal and `L` the
/// strict lower triangle of `M(T)`, `R` the remaining entries. Pure
/// rearrangement, so the reconstruction is exact.
#[derive(Debug, Clone)]
pub struct TensorParts {
    pub diagonal: SquareMatrix,
    pub lower: SquareMatrix,
    pub rest: DenseTensor,
}

pub fn split_parts(t: &DenseTensor) -> TensorParts {
    let maj = majorization(t);
    let mut rest = t.clone();
    for i in 0..t.dim {
        for j in 0..=i {
            let off = t.majorization_offset(i, j);
            rest.data[off] = 0.0;
        }
    }
    TensorParts {
        diagonal: maj.diagonal_part(),
        lower: maj.strict_lower(),
        rest,
    }
}

/// The splitting `A = D·I_m − L·I_m − F` with `D = diag M(A)` and
/// `L = −(strict lower triangle of M(A))`.
#[derive(Debug, Clone)]
pub struct Dlf {
    pub d: SquareMatrix,
    pub l: SquareMatrix,
    pub f: DenseTensor,
}

pub fn split_dlf(a: &DenseTensor) -> Dlf {
    let parts = split_parts(a);
    Dlf {
        d: parts.diagonal,
        l: &parts.lower * -1.0,
        f: -&parts.rest,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn example_one() -> DenseTensor {
        crate::bench::generate_example(crate::bench::ExampleSpec::One)
            .unwrap()
            .0
    }

    #[test]
    fn identity_contracts_to_squares() {
        let id = identity_tensor(3, 2).unwrap();
        assert_eq!(contract(&id, &[1.0, 2.0]).unwrap(), vec![1.0, 4.0]);
        assert_eq!(contract(&id, &[3.0, -5.0]).unwrap(), vec![9.0, 25.0]);
    }

    #[test]
    fn example_one_first_component() {
        let a = example_one();
        let y = contract(&a, &[1.0, 1.0, 1.0]).unwrap();
        // 0.97 - 0.21 - 0.12 from the three slices
        assert!((y[0] - 0.64).abs() < 1e-14);
    }

    #[test]
    fn zero_vector_contracts_to_zero() {
        let a = example_one();
        assert_eq!(contract(&a, &[0.0; 3]).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn contract_rejects_wrong_length() {
        let a = identity_tensor(3, 3).unwrap();
        assert!(matches!(contract(&a, &[1.0]), Err(Error::Dimension(_))));
    }

    #[test]
    fn identity_and_zero_matrix_products() {
        let b = example_one();
        let same = matrix_tensor_product(&SquareMatrix::identity(3), &b).unwrap();
        assert_eq!(same, b);
        let zero = matrix_tensor_product(&SquareMatrix::zeros(3), &b).unwrap();
        assert!(zero.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn matrix_tensor_product_single_entry() {
        let m = SquareMatrix::new(3, vec![0.3, -1.2, 2.5, 0.7, 0.1, -0.4, 1.1, 0.9, -2.0]).unwrap();
        let b = DenseTensor::from_fn(3, 3, |ix| {
            (ix[0] as f64 + 1.0) * 0.5 - (ix[1] as f64) * 0.25 + (ix[2] as f64).powi(2) * 0.125
        })
        .unwrap();
        let c = matrix_tensor_product(&m, &b).unwrap();
        // entry (1,2,3) in 1-based indexing
        let expected: f64 = (0..3).map(|j2| m.get(0, j2) * b.get(&[j2, 1, 2])).sum();
        assert!((c.get(&[0, 1, 2]) - expected).abs() < 1e-15);
    }

    #[test]
    fn majorization_examples() {
        assert_eq!(
            majorization(&identity_tensor(4, 3).unwrap()),
            SquareMatrix::identity(3)
        );
        let a = example_one();
        let m = majorization(&a);
        assert_eq!(m.get(0, 1), -0.07);
        assert_eq!(m.get(0, 0), 1.0);
        let z = DenseTensor::zeros(3, 4).unwrap();
        assert_eq!(majorization(&z), SquareMatrix::zeros(4));
    }

    #[test]
    fn identity_tensor_shapes() {
        let id2 = identity_tensor(2, 3).unwrap();
        assert_eq!(id2.as_slice(), SquareMatrix::identity(3).as_slice());
        for (m, n) in [(2, 1), (3, 4), (4, 3), (5, 2)] {
            let sum: f64 = identity_tensor(m, n).unwrap().as_slice().iter().sum();
            assert_eq!(sum, n as f64);
        }
        assert!(matches!(identity_tensor(1, 3), Err(Error::Dimension(_))));
    }

    #[test]
    fn roots() {
        assert_eq!(elementwise_root(&[4.0, 9.0], 3).unwrap(), vec![2.0, 3.0]);
        assert_eq!(elementwise_root(&[-8.0], 4).unwrap(), vec![-2.0]);
        assert!(matches!(
            elementwise_root(&[-1.0], 3),
            Err(Error::NegativeRadicand { index: 0, .. })
        ));
        assert_eq!(
            elementwise_root(&[-1e-310, 1e-301], 3).unwrap(),
            vec![0.0, 0.0]
        );
    }

    #[test]
    fn split_dlf_of_identity() {
        let parts = split_dlf(&identity_tensor(3, 3).unwrap());
        assert_eq!(parts.d, SquareMatrix::identity(3));
        assert_eq!(parts.l, SquareMatrix::zeros(3));
        assert!(parts.f.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn split_dlf_example_one() {
        let a = example_one();
        let parts = split_dlf(&a);
        assert_eq!(parts.l.get(1, 0), 0.02);
        let rebuilt =
            &(&parts.d.times_identity(3).unwrap() - &parts.l.times_identity(3).unwrap()) - &parts.f;
        assert_eq!(rebuilt.max_abs_diff(&a), 0.0);
    }

    #[test]
    fn lu_solves_and_detects_singularity() {
        let m = SquareMatrix::new(3, vec![0.0, 2.0, 1.0, 1.0, 1.0, 0.0, 3.0, 0.0, 1.0]).unwrap();
        let x = m.lu().unwrap().solve(&[3.0, 2.0, 4.0]);
        let back = m.mul_vec(&x).unwrap();
        for (b, e) in back.iter().zip([3.0, 2.0, 4.0]) {
            assert!((b - e).abs() < 1e-14);
        }
        let singular = SquareMatrix::new(2, vec![1.0, 2.0, 2.0, 4.0]).unwrap();
        assert!(matches!(singular.lu(), Err(Error::SingularEMatrix { .. })));
    }

    #[test]
    fn rejects_bad_shapes_and_values() {
        assert!(DenseTensor::new(3, 2, vec![0.0; 7]).is_err());
        assert!(matches!(
            DenseTensor::new(2, 2, vec![0.0, f64::NAN, 0.0, 0.0]),
            Err(Error::NonFinite(1))
        ));
    }
}
