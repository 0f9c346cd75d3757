//! Small dense complex matrices, column-major.

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    m: usize,
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(m: usize, n: usize) -> Self {
        Self {
            m,
            n,
            data: vec![ZERO; m * n],
        }
    }

    /// `m x n` matrix with ones on the leading diagonal (MATLAB `eye(m, n)`).
    pub fn eye(m: usize, n: usize) -> Self {
        let mut e = Self::zeros(m, n);
        for i in 0..m.min(n) {
            e[(i, i)] = ONE;
        }
        e
    }

    pub fn from_col_major(m: usize, n: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), m * n, "column-major data has wrong length");
        Self { m, n, data }
    }

    pub fn from_real_col_major(m: usize, n: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), m * n, "column-major data has wrong length");
        Self {
            m,
            n,
            data: data.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }

    pub fn from_fn(m: usize, n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut out = Self::zeros(m, n);
        for j in 0..n {
            for i in 0..m {
                out.data[i + m * j] = f(i, j);
            }
        }
        out
    }

    pub fn from_diag(d: &[f64]) -> Self {
        let mut out = Self::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            out[(i, i)] = Complex64::new(v, 0.0);
        }
        out
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.n
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
    pub fn col(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.m..(j + 1) * self.m]
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [Complex64] {
        &mut self.data[j * self.m..(j + 1) * self.m]
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.n, self.m);
        for j in 0..self.n {
            for i in 0..self.m {
                out.data[j + self.n * i] = self.data[i + self.m * j].conj();
            }
        }
        out
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            m: self.m,
            n: self.n,
            data: self.data.iter().map(|v| v.conj()).collect(),
        }
    }

    /// `self * b`.
    pub fn matmul(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.n != b.m {
            return Err(Error::shape(
                "matmul",
                format!("{}x{} * {}x{}", self.m, self.n, b.m, b.n),
            ));
        }
        let mut out = Self::zeros(self.m, b.n);
        for j in 0..b.n {
            let oc = &mut out.data[j * self.m..(j + 1) * self.m];
            for l in 0..self.n {
                let s = b.data[l + b.m * j];
                if s == ZERO {
                    continue;
                }
                let ac = &self.data[l * self.m..(l + 1) * self.m];
                for (o, a) in oc.iter_mut().zip(ac) {
                    *o += a * s;
                }
            }
        }
        Ok(out)
    }

    /// `self^* * b`, computed without forming the adjoint.
    pub fn adjoint_matmul(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.m != b.m {
            return Err(Error::shape(
                "adjoint_matmul",
                format!("({}x{})^* * {}x{}", self.m, self.n, b.m, b.n),
            ));
        }
        let mut out = Self::zeros(self.n, b.n);
        for j in 0..b.n {
            let bc = b.col(j);
            for i in 0..self.n {
                let ac = self.col(i);
                let mut s = ZERO;
                for (a, bv) in ac.iter().zip(bc) {
                    s += a.conj() * bv;
                }
                out.data[i + self.n * j] = s;
            }
        }
        Ok(out)
    }

    /// `self * b^*`.
    pub fn matmul_adjoint(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.n != b.n {
            return Err(Error::shape(
                "matmul_adjoint",
                format!("{}x{} * ({}x{})^*", self.m, self.n, b.m, b.n),
            ));
        }
        let mut out = Self::zeros(self.m, b.m);
        for j in 0..b.m {
            let oc = &mut out.data[j * self.m..(j + 1) * self.m];
            for l in 0..self.n {
                let s = b.data[j + b.m * l].conj();
                if s == ZERO {
                    continue;
                }
                let ac = &self.data[l * self.m..(l + 1) * self.m];
                for (o, a) in oc.iter_mut().zip(ac) {
                    *o += a * s;
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.dims() != b.dims() {
            return Err(Error::shape(
                "sub",
                format!("{:?} vs {:?}", self.dims(), b.dims()),
            ));
        }
        Ok(Self {
            m: self.m,
            n: self.n,
            data: self.data.iter().zip(&b.data).map(|(x, y)| x - y).collect(),
        })
    }

    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_sqr().sqrt()
    }

    /// Euclidean norm of column `j`.
    pub fn col_norm(&self, j: usize) -> f64 {
        self.col(j).iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Leading `rows x cols` block.
    pub fn top_left(&self, rows: usize, cols: usize) -> ComplexMatrix {
        assert!(rows <= self.m && cols <= self.n);
        ComplexMatrix::from_fn(rows, cols, |i, j| self[(i, j)])
    }

    /// `|| self^* self - I ||_F`.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.adjoint_matmul(self).expect("square Gram matrix");
        g.sub(&ComplexMatrix::eye(self.n, self.n))
            .expect("same shape")
            .frobenius_norm()
    }

    pub fn max_imag(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.im.abs()))
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.m && j < self.n);
        &self.data[i + self.m * j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.m && j < self.n);
        &mut self.data[i + self.m * j]
    }
}
