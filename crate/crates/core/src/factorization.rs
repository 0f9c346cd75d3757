//! QR-based factorizations.
//!
//! Everything here reduces to complex Householder QR on the independent
//! Fourier slices of a tensor:
//!
//! * [`economy_qr`] – thin QR with a fixed gauge (real, nonnegative diagonal of `R`).
//! * [`csvd_qr`] – the alternating-QR tri-factorization `A ~ L D R` of a matrix.
//! * [`t_qr`] – tensor QR, `A = Q * R`.
//! * [`ctsvd_qr`] – slice-wise CSVD-QR in the Fourier domain, an approximate
//!   t-SVD `A ~ L * D * R` whose middle factor tends to the f-diagonal factor
//!   of the t-SVD as the iteration count grows.

use std::time::Instant;

use num_complex::Complex64;

use crate::algebra::t_product3;
use crate::error::{Error, Result};
use crate::fourier::{half_len, independent_slices, mirror_weight, real_from_independent};
use crate::matrix::ComplexMatrix;
use crate::tensor::RealTensor3;

/// Thin QR factors: `q` is `m x p` with orthonormal columns, `r` is `p x n`
/// upper triangular, `p = min(m, n)`.
#[derive(Debug, Clone)]
pub struct QrPair {
    pub q: ComplexMatrix,
    pub r: ComplexMatrix,
}

/// Householder QR of any shape. The diagonal of `r` is made real and
/// nonnegative by moving phases into the columns of `q`.
pub fn householder_qr(a: &ComplexMatrix) -> QrPair {
    let (m, n) = a.dims();
    let p = m.min(n);
    let mut w = a.clone();
    // (reflector, tau) per step; None means the column was already reduced.
    let mut reflectors: Vec<Option<(Vec<Complex64>, f64)>> = Vec::with_capacity(p);

    for k in 0..p {
        let x = &w.col(k)[k..];
        let tail: f64 = x[1..].iter().map(|v| v.norm_sqr()).sum();
        if tail == 0.0 {
            reflectors.push(None);
            continue;
        }
        let x0 = x[0];
        let alpha = (x0.norm_sqr() + tail).sqrt();
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let beta = -phase * alpha;
        let mut v: Vec<Complex64> = x.to_vec();
        v[0] -= beta;
        let tau = 1.0 / (alpha * alpha + alpha * x0.norm());

        for c in k..n {
            let col = &mut w.col_mut(c)[k..];
            let mut s = Complex64::new(0.0, 0.0);
            for (vi, ci) in v.iter().zip(col.iter()) {
                s += vi.conj() * ci;
            }
            s *= tau;
            for (vi, ci) in v.iter().zip(col.iter_mut()) {
                *ci -= s * vi;
            }
        }
        // Exact zeros below the diagonal of the reduced column.
        for ci in &mut w.col_mut(k)[k + 1..] {
            *ci = Complex64::new(0.0, 0.0);
        }
        w[(k, k)] = beta;
        reflectors.push(Some((v, tau)));
    }

    let mut r = ComplexMatrix::zeros(p, n);
    for j in 0..n {
        for i in 0..=j.min(p - 1) {
            r[(i, j)] = w[(i, j)];
        }
    }

    let mut q = ComplexMatrix::eye(m, p);
    for k in (0..p).rev() {
        if let Some((v, tau)) = &reflectors[k] {
            for c in k..p {
                let col = &mut q.col_mut(c)[k..];
                let mut s = Complex64::new(0.0, 0.0);
                for (vi, ci) in v.iter().zip(col.iter()) {
                    s += vi.conj() * ci;
                }
                s *= *tau;
                for (vi, ci) in v.iter().zip(col.iter_mut()) {
                    *ci -= s * vi;
                }
            }
        }
    }

    for k in 0..p {
        let d = r[(k, k)];
        let mag = d.norm();
        if mag == 0.0 || (d.im == 0.0 && d.re > 0.0) {
            continue;
        }
        let phase = d / mag;
        let back = phase.conj();
        for j in k..n {
            r[(k, j)] *= back;
        }
        r[(k, k)] = Complex64::new(mag, 0.0);
        for qi in q.col_mut(k) {
            *qi *= phase;
        }
    }

    QrPair { q, r }
}

/// Economy QR of a tall or square matrix.
pub fn economy_qr(a: &ComplexMatrix) -> Result<QrPair> {
    let (m, n) = a.dims();
    if m < n {
        return Err(Error::Shape(format!(
            "economy_qr needs rows >= cols, got {m}x{n}"
        )));
    }
    if m == 0 || n == 0 {
        return Err(Error::Shape("economy_qr of an empty matrix".into()));
    }
    if !a.is_finite() {
        return Err(Error::Numerical(
            "economy_qr input has non-finite entries".into(),
        ));
    }
    Ok(householder_qr(a))
}

fn check_rank(r: usize, m: usize, n: usize) -> Result<()> {
    let max = m.min(n);
    if r == 0 || r > max {
        return Err(Error::Rank { rank: r, max });
    }
    Ok(())
}

/// Matrix tri-factorization `a ~ l * d * rt` from alternating QR.
#[derive(Debug, Clone)]
pub struct CsvdQr {
    /// `m x r`, orthonormal columns.
    pub l: ComplexMatrix,
    /// `r x r`, lower triangular.
    pub d: ComplexMatrix,
    /// `r x n`, orthonormal rows.
    pub rt: ComplexMatrix,
}

impl CsvdQr {
    fn init(m: usize, n: usize, r: usize) -> Self {
        Self {
            l: ComplexMatrix::eye(m, r),
            d: ComplexMatrix::eye(r, r),
            rt: ComplexMatrix::eye(r, n),
        }
    }

    /// One sweep: `L <- Q(a rt^*)`, `[Q_r, T] = qr(a^* L)`, `rt <- Q_r^*`, `d <- T^*`.
    /// Returns `a^* L` so callers can form the residual `a - L (a^* L)^*`.
    fn step(&mut self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        let left = a.matmul_adjoint(&self.rt)?;
        self.l = householder_qr(&left).q;
        let s = a.adjoint_matmul(&self.l)?;
        let QrPair { q, r: t } = householder_qr(&s);
        self.rt = q.adjoint();
        self.d = t.adjoint();
        Ok(s)
    }

    pub fn reconstruct(&self) -> Result<ComplexMatrix> {
        self.l.matmul(&self.d)?.matmul(&self.rt)
    }
}

fn residual_sqr(a: &ComplexMatrix, l: &ComplexMatrix, s: &ComplexMatrix) -> Result<f64> {
    Ok(a.sub(&l.matmul_adjoint(s)?)?.frobenius_norm_sqr())
}

/// Runs `iters` CSVD-QR sweeps on `a` from the rectangular-identity start.
pub fn csvd_qr(a: &ComplexMatrix, r: usize, iters: usize) -> Result<CsvdQr> {
    let (m, n) = a.dims();
    check_rank(r, m, n)?;
    if iters == 0 {
        return Err(Error::Config("csvd_qr needs at least one iteration".into()));
    }
    if !a.is_finite() {
        return Err(Error::Numerical(
            "csvd_qr input has non-finite entries".into(),
        ));
    }
    let mut state = CsvdQr::init(m, n, r);
    for _ in 0..iters {
        state.step(a)?;
    }
    Ok(state)
}

/// Tensor QR factors: `q` is `n1 x p x n3` and partially orthogonal, `r` is
/// `p x n2 x n3` with upper-triangular Fourier slices, `p = min(n1, n2)`.
#[derive(Debug, Clone)]
pub struct TensorQr {
    pub q: RealTensor3,
    pub r: RealTensor3,
}

/// Tensor QR via economy QR of every independent Fourier slice.
pub fn t_qr(a: &RealTensor3) -> Result<TensorQr> {
    if a.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("t_qr input has non-finite entries".into()));
    }
    let n3 = a.n3();
    let (qs, rs): (Vec<_>, Vec<_>) = independent_slices(a)
        .iter()
        .map(|s| {
            let QrPair { q, r } = householder_qr(s);
            (q, r)
        })
        .unzip();
    Ok(TensorQr {
        q: real_from_independent(&qs, n3)?,
        r: real_from_independent(&rs, n3)?,
    })
}

/// Output of CTSVD-QR: `a ~ l * d * rr`.
#[derive(Debug, Clone)]
pub struct FactorTriple {
    /// `n1 x r x n3`, `l^* * l = I`.
    pub l: RealTensor3,
    /// `r x r x n3`.
    pub d: RealTensor3,
    /// `r x n2 x n3`, `rr * rr^* = I`.
    pub rr: RealTensor3,
    pub rank: usize,
}

impl FactorTriple {
    pub fn reconstruct(&self) -> Result<RealTensor3> {
        t_product3(&self.l, &self.d, &self.rr)
    }

    /// Sum of squares of the entries of `d` off the f-diagonal.
    pub fn off_diagonal_mass(&self) -> f64 {
        off_diagonal_mass(&self.d)
    }

    /// The tubes `d(j, j, :)`.
    pub fn diagonal_tubes(&self) -> Vec<Vec<f64>> {
        (0..self.rank).map(|j| self.d.tube(j, j)).collect()
    }
}

/// `sum_{i != j} d(i, j, k)^2`.
pub fn off_diagonal_mass(d: &RealTensor3) -> f64 {
    let (n1, n2, n3) = d.dims();
    let mut mass = 0.0;
    for k in 0..n3 {
        for j in 0..n2 {
            for i in 0..n1 {
                if i != j {
                    mass += d.get(i, j, k).powi(2);
                }
            }
        }
    }
    mass
}

#[derive(Debug, Clone)]
pub struct CtsvdOptions {
    pub max_iters: usize,
    /// Stop once a sweep improves `||a - l*d*rr||_F` by no more than
    /// `tol * ||a||_F`. `None` runs exactly `max_iters` sweeps.
    pub tol: Option<f64>,
}

impl Default for CtsvdOptions {
    fn default() -> Self {
        Self {
            max_iters: 30,
            tol: Some(1e-12),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CtsvdStep {
    pub iter: usize,
    /// `||a - l * d * rr||_F`.
    pub residual: f64,
    pub rmse: f64,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone)]
pub struct Ctsvd {
    pub factors: FactorTriple,
    pub trace: Vec<CtsvdStep>,
}

/// CTSVD-QR with exactly `iters` sweeps per independent Fourier slice.
pub fn ctsvd_qr(a: &RealTensor3, r: usize, iters: usize) -> Result<FactorTriple> {
    Ok(run_ctsvd(a, r, iters, None, false)?.factors)
}

/// CTSVD-QR with per-iteration diagnostics and optional early exit.
pub fn ctsvd_qr_with(a: &RealTensor3, r: usize, opts: &CtsvdOptions) -> Result<Ctsvd> {
    run_ctsvd(a, r, opts.max_iters, opts.tol, true)
}

fn run_ctsvd(
    a: &RealTensor3,
    r: usize,
    iters: usize,
    tol: Option<f64>,
    trace: bool,
) -> Result<Ctsvd> {
    let (n1, n2, n3) = a.dims();
    check_rank(r, n1, n2)?;
    if iters == 0 {
        return Err(Error::Config(
            "ctsvd_qr needs at least one iteration".into(),
        ));
    }
    if a.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical(
            "ctsvd_qr input has non-finite entries".into(),
        ));
    }

    let start = Instant::now();
    let slices = independent_slices(a);
    let mut states: Vec<CsvdQr> = slices.iter().map(|_| CsvdQr::init(n1, n2, r)).collect();
    let norm_a = a.as_slice().iter().map(|v| v * v).sum::<f64>().sqrt();
    let total = (n1 * n2 * n3) as f64;
    let track = trace || tol.is_some();
    let mut steps = Vec::new();
    let mut prev: Option<f64> = None;

    for iter in 1..=iters {
        let mut res_sqr = 0.0;
        for (k, (state, slice)) in states.iter_mut().zip(&slices).enumerate() {
            let s = state.step(slice)?;
            if track {
                res_sqr += mirror_weight(k, n3) * residual_sqr(slice, &state.l, &s)?;
            }
        }
        if !track {
            continue;
        }
        // Parseval: the Fourier-domain residual carries an extra factor n3.
        let residual = (res_sqr / n3 as f64).sqrt();
        steps.push(CtsvdStep {
            iter,
            residual,
            rmse: residual / total.sqrt(),
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        });
        if let (Some(tol), Some(p)) = (tol, prev) {
            if p - residual <= tol * norm_a {
                break;
            }
        }
        prev = Some(residual);
    }

    debug_assert_eq!(states.len(), half_len(n3));
    let ls: Vec<_> = states.iter().map(|s| s.l.clone()).collect();
    let ds: Vec<_> = states.iter().map(|s| s.d.clone()).collect();
    let rs: Vec<_> = states.into_iter().map(|s| s.rt).collect();
    Ok(Ctsvd {
        factors: FactorTriple {
            l: real_from_independent(&ls, n3)?,
            d: real_from_independent(&ds, n3)?,
            rr: real_from_independent(&rs, n3)?,
            rank: r,
        },
        trace: steps,
    })
}
