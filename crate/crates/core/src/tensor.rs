//! Dense third-order tensors.
//!
//! Entries are stored frontal-slice-major and column-major within a slice:
//! entry `(i, j, k)` lives at `i + n1 * (j + n2 * k)`. Every frontal slice is
//! therefore a contiguous column-major `n1 x n2` block and every tube
//! `(i, j, :)` is a stride-`n1 * n2` sequence.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[inline]
fn offset(n1: usize, n2: usize, i: usize, j: usize, k: usize) -> usize {
    i + n1 * (j + n2 * k)
}

fn check_dims(n1: usize, n2: usize, n3: usize) -> Result<()> {
    if n1 == 0 || n2 == 0 || n3 == 0 {
        return Err(Error::Shape(format!(
            "tensor dimensions must be positive, got {n1}x{n2}x{n3}"
        )));
    }
    Ok(())
}

fn assert_dims(n1: usize, n2: usize, n3: usize) {
    assert!(
        n1 > 0 && n2 > 0 && n3 > 0,
        "tensor dimensions must be positive, got {n1}x{n2}x{n3}"
    );
}

/// Dense real `n1 x n2 x n3` tensor with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct RealTensor3 {
    n1: usize,
    n2: usize,
    n3: usize,
    data: Vec<f64>,
}

impl RealTensor3 {
    /// All-zero tensor.
    ///
    /// Panics if any dimension is zero.
    pub fn zeros(n1: usize, n2: usize, n3: usize) -> Self {
        assert_dims(n1, n2, n3);
        Self {
            n1,
            n2,
            n3,
            data: vec![0.0; n1 * n2 * n3],
        }
    }

    /// Wraps storage-ordered data, rejecting bad lengths and non-finite entries.
    pub fn from_vec(n1: usize, n2: usize, n3: usize, data: Vec<f64>) -> Result<Self> {
        check_dims(n1, n2, n3)?;
        if data.len() != n1 * n2 * n3 {
            return Err(Error::Shape(format!(
                "data length {} does not match {n1}x{n2}x{n3}",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!(
                "non-finite entry at storage offset {pos}"
            )));
        }
        Ok(Self { n1, n2, n3, data })
    }

    pub fn from_fn(
        n1: usize,
        n2: usize,
        n3: usize,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Self {
        let mut t = Self::zeros(n1, n2, n3);
        for k in 0..n3 {
            for j in 0..n2 {
                for i in 0..n1 {
                    t.data[offset(n1, n2, i, j, k)] = f(i, j, k);
                }
            }
        }
        t
    }

    fn with_data(&self, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), self.data.len());
        Self {
            n1: self.n1,
            n2: self.n2,
            n3: self.n3,
            data,
        }
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.n1, self.n2, self.n3)
    }

    #[inline]
    pub fn n1(&self) -> usize {
        self.n1
    }

    #[inline]
    pub fn n2(&self) -> usize {
        self.n2
    }

    #[inline]
    pub fn n3(&self) -> usize {
        self.n3
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        debug_assert!(i < self.n1 && j < self.n2 && k < self.n3);
        self.data[offset(self.n1, self.n2, i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        debug_assert!(i < self.n1 && j < self.n2 && k < self.n3);
        self.data[offset(self.n1, self.n2, i, j, k)] = v;
    }

    /// Raw storage in frontal-slice-major, column-major-within-slice order.
    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    /// Frontal slice `k` as a column-major `n1 x n2` block.
    #[inline]
    pub fn frontal(&self, k: usize) -> &[f64] {
        let sz = self.n1 * self.n2;
        &self.data[k * sz..(k + 1) * sz]
    }

    #[inline]
    pub fn frontal_mut(&mut self, k: usize) -> &mut [f64] {
        let sz = self.n1 * self.n2;
        &mut self.data[k * sz..(k + 1) * sz]
    }

    /// Copy of the tube `(i, j, :)`.
    pub fn tube(&self, i: usize, j: usize) -> Vec<f64> {
        (0..self.n3).map(|k| self.get(i, j, k)).collect()
    }

    pub fn same_shape(&self, other: &RealTensor3) -> bool {
        self.dims() == other.dims()
    }

    pub(crate) fn expect_same_shape(&self, other: &RealTensor3, op: &'static str) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::shape(
                op,
                format!("{:?} vs {:?}", self.dims(), other.dims()),
            ))
        }
    }

    /// `self + alpha * other`.
    pub fn add_scaled(&self, alpha: f64, other: &RealTensor3) -> Result<RealTensor3> {
        self.expect_same_shape(other, "add_scaled")?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + alpha * b)
            .collect();
        Ok(self.with_data(data))
    }

    pub fn add(&self, other: &RealTensor3) -> Result<RealTensor3> {
        self.add_scaled(1.0, other)
    }

    pub fn sub(&self, other: &RealTensor3) -> Result<RealTensor3> {
        self.add_scaled(-1.0, other)
    }

    pub fn scale(&self, alpha: f64) -> RealTensor3 {
        self.with_data(self.data.iter().map(|v| alpha * v).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max |self - other|` over all entries.
    pub fn max_abs_diff(&self, other: &RealTensor3) -> Result<f64> {
        self.expect_same_shape(other, "max_abs_diff")?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }
}

/// Dense complex tensor with the same layout as [`RealTensor3`]. Holds
/// Fourier-domain images of real tensors.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexTensor3 {
    n1: usize,
    n2: usize,
    n3: usize,
    data: Vec<Complex64>,
}

impl ComplexTensor3 {
    pub fn zeros(n1: usize, n2: usize, n3: usize) -> Self {
        assert_dims(n1, n2, n3);
        Self {
            n1,
            n2,
            n3,
            data: vec![Complex64::new(0.0, 0.0); n1 * n2 * n3],
        }
    }

    pub fn from_vec(n1: usize, n2: usize, n3: usize, data: Vec<Complex64>) -> Result<Self> {
        check_dims(n1, n2, n3)?;
        if data.len() != n1 * n2 * n3 {
            return Err(Error::Shape(format!(
                "data length {} does not match {n1}x{n2}x{n3}",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Numerical("non-finite complex entry".into()));
        }
        Ok(Self { n1, n2, n3, data })
    }

    /// Promotes a real tensor without transforming it.
    pub fn from_real(a: &RealTensor3) -> Self {
        let (n1, n2, n3) = a.dims();
        Self {
            n1,
            n2,
            n3,
            data: a
                .as_slice()
                .iter()
                .map(|&v| Complex64::new(v, 0.0))
                .collect(),
        }
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.n1, self.n2, self.n3)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> Complex64 {
        debug_assert!(i < self.n1 && j < self.n2 && k < self.n3);
        self.data[offset(self.n1, self.n2, i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Complex64) {
        debug_assert!(i < self.n1 && j < self.n2 && k < self.n3);
        self.data[offset(self.n1, self.n2, i, j, k)] = v;
    }

    #[inline]
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    #[inline]
    pub fn frontal(&self, k: usize) -> &[Complex64] {
        let sz = self.n1 * self.n2;
        &self.data[k * sz..(k + 1) * sz]
    }

    #[inline]
    pub fn frontal_mut(&mut self, k: usize) -> &mut [Complex64] {
        let sz = self.n1 * self.n2;
        &mut self.data[k * sz..(k + 1) * sz]
    }

    /// Largest deviation from the conjugate-symmetry law
    /// `conj(slice k) = slice (n3 - k)` (zero-based), including the
    /// imaginary parts of the self-conjugate slices.
    pub fn symmetry_defect(&self) -> f64 {
        let n3 = self.n3;
        let mut worst: f64 = 0.0;
        for k in 0..n3 {
            let mirror = (n3 - k) % n3;
            let (a, b) = (self.frontal(k), self.frontal(mirror));
            for (x, y) in a.iter().zip(b) {
                worst = worst.max((x - y.conj()).norm());
            }
        }
        worst
    }
}

/// Boolean membership of the observed index set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservationMask {
    n1: usize,
    n2: usize,
    n3: usize,
    observed: Vec<bool>,
}

impl ObservationMask {
    pub fn from_vec(n1: usize, n2: usize, n3: usize, observed: Vec<bool>) -> Result<Self> {
        check_dims(n1, n2, n3)?;
        if observed.len() != n1 * n2 * n3 {
            return Err(Error::Shape(format!(
                "mask length {} does not match {n1}x{n2}x{n3}",
                observed.len()
            )));
        }
        Ok(Self {
            n1,
            n2,
            n3,
            observed,
        })
    }

    pub fn full(n1: usize, n2: usize, n3: usize) -> Self {
        assert_dims(n1, n2, n3);
        Self {
            n1,
            n2,
            n3,
            observed: vec![true; n1 * n2 * n3],
        }
    }

    pub fn empty(n1: usize, n2: usize, n3: usize) -> Self {
        assert_dims(n1, n2, n3);
        Self {
            n1,
            n2,
            n3,
            observed: vec![false; n1 * n2 * n3],
        }
    }

    pub fn from_fn(
        n1: usize,
        n2: usize,
        n3: usize,
        mut f: impl FnMut(usize, usize, usize) -> bool,
    ) -> Self {
        let mut m = Self::empty(n1, n2, n3);
        for k in 0..n3 {
            for j in 0..n2 {
                for i in 0..n1 {
                    m.observed[offset(n1, n2, i, j, k)] = f(i, j, k);
                }
            }
        }
        m
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.n1, self.n2, self.n3)
    }

    #[inline]
    pub fn is_observed(&self, i: usize, j: usize, k: usize) -> bool {
        self.observed[offset(self.n1, self.n2, i, j, k)]
    }

    /// Membership flags in tensor storage order.
    #[inline]
    pub fn as_slice(&self) -> &[bool] {
        &self.observed
    }

    pub fn count_observed(&self) -> usize {
        self.observed.iter().filter(|&&b| b).count()
    }

    pub fn observed_fraction(&self) -> f64 {
        self.count_observed() as f64 / self.observed.len() as f64
    }

    pub(crate) fn expect_matches(&self, a: &RealTensor3, op: &'static str) -> Result<()> {
        if self.dims() == a.dims() {
            Ok(())
        } else {
            Err(Error::shape(
                op,
                format!("mask {:?} vs tensor {:?}", self.dims(), a.dims()),
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn addressing_is_slice_major_column_major() {
        let t = RealTensor3::from_fn(2, 3, 2, |i, j, k| (100 * k + 10 * j + i) as f64);
        assert_eq!(t.as_slice()[1], 1.0);
        assert_eq!(t.as_slice()[2], 10.0);
        assert_eq!(t.as_slice()[6], 100.0);
        assert_eq!(t.frontal(1)[3], 111.0);
        assert_eq!(t.tube(1, 2), vec![21.0, 121.0]);
    }

    #[test]
    fn from_vec_rejects_bad_input() {
        assert!(RealTensor3::from_vec(2, 2, 1, vec![0.0; 3]).is_err());
        assert!(RealTensor3::from_vec(0, 2, 1, vec![]).is_err());
        assert!(RealTensor3::from_vec(1, 1, 1, vec![f64::NAN]).is_err());
        assert!(RealTensor3::from_vec(1, 1, 1, vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let a = RealTensor3::zeros(2, 2, 2);
        let b = RealTensor3::zeros(2, 2, 3);
        assert!(matches!(a.sub(&b), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn mask_counts() {
        let m = ObservationMask::from_fn(3, 3, 2, |i, _, _| i == 0);
        assert_eq!(m.count_observed(), 6);
        assert!(m.is_observed(0, 2, 1));
        assert!(!m.is_observed(1, 2, 1));
    }
}
