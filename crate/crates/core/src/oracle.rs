//! Slow reference implementations used for verification.
//!
//! Nothing here shares a code path with the FFT-based algebra it checks: the
//! DFT is the explicit `F_n` matrix product, t-products go through literal
//! block-circulant matrices, and singular values come from one-sided Jacobi
//! rotations. Sizes are capped by [`ORACLE_MAX_DIM`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::tensor::{ComplexTensor3, RealTensor3};

/// Largest `min(rows, cols)` accepted by the SVD-based oracles.
pub const ORACLE_MAX_DIM: usize = 64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A dense matrix built from `n3 x n3` (or `n3 x 1`) blocks of size `n1 x n2`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix {
    pub rows: usize,
    pub cols: usize,
    /// Block shape `(n1, n2, n3)` the matrix was built from.
    pub block: (usize, usize, usize),
    /// Column-major entries.
    pub data: Vec<Complex64>,
}

impl BlockMatrix {
    fn zeros(rows: usize, cols: usize, block: (usize, usize, usize)) -> Self {
        Self {
            rows,
            cols,
            block,
            data: vec![ZERO; rows * cols],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i + self.rows * j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i + self.rows * j] = v;
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Plain triple-loop product.
    pub fn mul(&self, other: &BlockMatrix) -> Result<BlockMatrix> {
        if self.cols != other.rows {
            return Err(Error::shape(
                "BlockMatrix::mul",
                format!(
                    "{}x{} * {}x{}",
                    self.rows, self.cols, other.rows, other.cols
                ),
            ));
        }
        let mut out = BlockMatrix::zeros(self.rows, other.cols, self.block);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut s = ZERO;
                for l in 0..self.cols {
                    s += self.get(i, l) * other.get(l, j);
                }
                out.set(i, j, s);
            }
        }
        Ok(out)
    }

    pub fn max_abs_diff(&self, other: &BlockMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }
}

/// Block-circulant matrix: block `(p, q)` is frontal slice `(p - q) mod n3`.
pub fn bcirc(a: &RealTensor3) -> BlockMatrix {
    let (n1, n2, n3) = a.dims();
    let mut out = BlockMatrix::zeros(n1 * n3, n2 * n3, (n1, n2, n3));
    for p in 0..n3 {
        for q in 0..n3 {
            let k = (p + n3 - q) % n3;
            for j in 0..n2 {
                for i in 0..n1 {
                    out.set(p * n1 + i, q * n2 + j, Complex64::new(a.get(i, j, k), 0.0));
                }
            }
        }
    }
    out
}

/// Frontal slices stacked vertically: an `n1 n3 x n2` matrix.
pub fn unfold(a: &RealTensor3) -> BlockMatrix {
    let (n1, n2, n3) = a.dims();
    let mut out = BlockMatrix::zeros(n1 * n3, n2, (n1, n2, n3));
    for k in 0..n3 {
        for j in 0..n2 {
            for i in 0..n1 {
                out.set(k * n1 + i, j, Complex64::new(a.get(i, j, k), 0.0));
            }
        }
    }
    out
}

/// Inverse of [`unfold`] for depth `n3`; keeps real parts.
pub fn fold(u: &BlockMatrix, n3: usize) -> Result<RealTensor3> {
    if n3 == 0 || !u.rows.is_multiple_of(n3) {
        return Err(Error::shape(
            "fold",
            format!("{} rows is not a multiple of depth {n3}", u.rows),
        ));
    }
    let n1 = u.rows / n3;
    let n2 = u.cols;
    Ok(RealTensor3::from_fn(n1, n2, n3, |i, j, k| {
        u.get(k * n1 + i, j).re
    }))
}

/// Block diagonal of the frontal slices of a Fourier-domain tensor.
pub fn bdiag(a_hat: &ComplexTensor3) -> BlockMatrix {
    let (n1, n2, n3) = a_hat.dims();
    let mut out = BlockMatrix::zeros(n1 * n3, n2 * n3, (n1, n2, n3));
    for k in 0..n3 {
        for j in 0..n2 {
            for i in 0..n1 {
                out.set(k * n1 + i, k * n2 + j, a_hat.get(i, j, k));
            }
        }
    }
    out
}

/// `F_n[p, q] = exp(-2 pi i p q / n)`.
pub fn dft_matrix(n: usize) -> Vec<Vec<Complex64>> {
    (0..n)
        .map(|p| {
            (0..n)
                .map(|q| Complex64::from_polar(1.0, -2.0 * PI * ((p * q) % n) as f64 / n as f64))
                .collect()
        })
        .collect()
}

/// Explicit `F_n v`.
pub fn dft_naive(v: &[Complex64]) -> Vec<Complex64> {
    let f = dft_matrix(v.len());
    f.iter()
        .map(|row| row.iter().zip(v).map(|(w, x)| w * x).sum())
        .collect()
}

/// Explicit `F_n^{-1} v = (1/n) conj(F_n) v`.
pub fn idft_naive(v: &[Complex64]) -> Vec<Complex64> {
    let n = v.len() as f64;
    let f = dft_matrix(v.len());
    f.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .map(|(w, x)| w.conj() * x)
                .sum::<Complex64>()
                / n
        })
        .collect()
}

/// Mode-3 DFT by explicit matrix-vector products on every tube.
pub fn dft_mode3_naive(a: &RealTensor3) -> ComplexTensor3 {
    let (n1, n2, n3) = a.dims();
    let mut out = ComplexTensor3::zeros(n1, n2, n3);
    for j in 0..n2 {
        for i in 0..n1 {
            let tube: Vec<Complex64> = a
                .tube(i, j)
                .into_iter()
                .map(|v| Complex64::new(v, 0.0))
                .collect();
            for (k, v) in dft_naive(&tube).into_iter().enumerate() {
                out.set(i, j, k, v);
            }
        }
    }
    out
}

/// Mode-3 inverse DFT by explicit products, failing on imaginary leakage
/// above `1e-8 * max(1, max |re|)`.
pub fn idft_mode3_naive(a: &ComplexTensor3) -> Result<RealTensor3> {
    let (n1, n2, n3) = a.dims();
    let mut out = RealTensor3::zeros(n1, n2, n3);
    let mut residue: f64 = 0.0;
    let mut scale: f64 = 1.0;
    for j in 0..n2 {
        for i in 0..n1 {
            let tube: Vec<Complex64> = (0..n3).map(|k| a.get(i, j, k)).collect();
            for (k, v) in idft_naive(&tube).into_iter().enumerate() {
                residue = residue.max(v.im.abs());
                scale = scale.max(v.re.abs());
                out.set(i, j, k, v.re);
            }
        }
    }
    if residue > 1e-8 * scale {
        return Err(Error::SymmetryViolation {
            residue,
            limit: 1e-8 * scale,
        });
    }
    Ok(out)
}

/// `(F_n3 (x) I_n1) bcirc(a) (F_n3^{-1} (x) I_n2)` evaluated with explicit
/// Kronecker products; equals `bdiag(dft_mode3(a))`.
pub fn block_diagonalize(a: &RealTensor3) -> Result<BlockMatrix> {
    let (n1, n2, n3) = a.dims();
    let f = dft_matrix(n3);
    let kron = |rows: usize, inverse: bool| {
        let dim = rows * n3;
        let mut m = BlockMatrix::zeros(dim, dim, (n1, n2, n3));
        for (p, row) in f.iter().enumerate() {
            for (q, &fpq) in row.iter().enumerate() {
                let w = if inverse { fpq.conj() / n3 as f64 } else { fpq };
                for i in 0..rows {
                    m.set(p * rows + i, q * rows + i, w);
                }
            }
        }
        m
    };
    kron(n1, false).mul(&bcirc(a))?.mul(&kron(n2, true))
}

/// Literal `fold(bcirc(a) unfold(b))`.
pub fn t_product_naive(a: &RealTensor3, b: &RealTensor3) -> Result<RealTensor3> {
    let (_, n2, n3) = a.dims();
    let (m2, _, m3) = b.dims();
    if n2 != m2 || n3 != m3 {
        return Err(Error::shape(
            "t_product_naive",
            format!("{:?} * {:?}", a.dims(), b.dims()),
        ));
    }
    fold(&bcirc(a).mul(&unfold(b))?, n3)
}

/// `u diag(s) v^*` with singular values in descending order.
#[derive(Debug, Clone)]
pub struct JacobiSvd {
    /// `m x p`, orthonormal columns.
    pub u: ComplexMatrix,
    pub s: Vec<f64>,
    /// `n x p`, orthonormal columns.
    pub v: ComplexMatrix,
}

fn guard(dim: usize, limit: usize) -> Result<()> {
    if dim > limit {
        Err(Error::SizeGuard { dim, limit })
    } else {
        Ok(())
    }
}

/// One-sided (Hestenes) Jacobi SVD, economy size.
pub fn jacobi_svd(a: &ComplexMatrix) -> Result<JacobiSvd> {
    jacobi_svd_sized(a, ORACLE_MAX_DIM)
}

/// [`jacobi_svd`] with a caller-chosen size guard.
pub fn jacobi_svd_sized(a: &ComplexMatrix, limit: usize) -> Result<JacobiSvd> {
    let (m, n) = a.dims();
    guard(m.min(n), limit)?;
    if !a.is_finite() {
        return Err(Error::Numerical(
            "jacobi_svd input has non-finite entries".into(),
        ));
    }
    if m < n {
        let JacobiSvd { u, s, v } = jacobi_tall(&a.adjoint());
        return Ok(JacobiSvd { u: v, s, v: u });
    }
    Ok(jacobi_tall(a))
}

fn jacobi_tall(a: &ComplexMatrix) -> JacobiSvd {
    let (m, n) = a.dims();
    let mut w: Vec<Vec<Complex64>> = (0..n).map(|j| a.col(j).to_vec()).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    if i == j {
                        Complex64::new(1.0, 0.0)
                    } else {
                        ZERO
                    }
                })
                .collect()
        })
        .collect();
    const TOL: f64 = 1e-15;

    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = w[p].iter().map(|x| x.norm_sqr()).sum();
                let beta: f64 = w[q].iter().map(|x| x.norm_sqr()).sum();
                let gamma: Complex64 = w[p].iter().zip(&w[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for cols in [&mut w, &mut v] {
                    let (lo, hi) = cols.split_at_mut(q);
                    for (xp, xq) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                        let xq_rot = *xq * phase;
                        let new_p = *xp * c - xq_rot * s;
                        *xq = *xp * s + xq_rot * c;
                        *xp = new_p;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = w
        .iter()
        .map(|c| c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let smax = norms[order[0]];

    let mut u = ComplexMatrix::zeros(m, n);
    let mut vm = ComplexMatrix::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        let sigma = norms[src];
        s.push(sigma);
        vm.col_mut(dst).copy_from_slice(&v[src]);
        if sigma > 1e-14 * smax && sigma > 0.0 {
            for (o, x) in u.col_mut(dst).iter_mut().zip(&w[src]) {
                *o = x / sigma;
            }
        } else {
            let col = complete_basis(&u, dst);
            u.col_mut(dst).copy_from_slice(&col);
        }
    }
    JacobiSvd { u, s, v: vm }
}

/// A unit vector orthogonal to the first `filled` columns of `u`.
fn complete_basis(u: &ComplexMatrix, filled: usize) -> Vec<Complex64> {
    let m = u.rows();
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    for e in 0..m {
        let mut x = vec![ZERO; m];
        x[e] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            for j in 0..filled {
                let col = u.col(j);
                let proj: Complex64 = col.iter().zip(&x).map(|(c, xi)| c.conj() * xi).sum();
                for (xi, c) in x.iter_mut().zip(col) {
                    *xi -= proj * c;
                }
            }
        }
        let nrm = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if best.as_ref().is_none_or(|(b, _)| nrm > *b) {
            best = Some((nrm, x));
        }
        if nrm > 0.5 {
            break;
        }
    }
    let (nrm, x) = best.expect("m >= 1");
    x.into_iter().map(|v| v / nrm).collect()
}

/// Reference t-SVD `a = u * s * v^*` (economy: `p = min(n1, n2)` singular tubes).
#[derive(Debug, Clone)]
pub struct TSvd {
    /// `n1 x p x n3`.
    pub u: RealTensor3,
    /// `p x p x n3`, f-diagonal.
    pub s: RealTensor3,
    /// `n2 x p x n3`.
    pub v: RealTensor3,
    /// Singular values of every Fourier slice, descending.
    pub fourier_singular_values: Vec<Vec<f64>>,
}

impl TSvd {
    pub fn singular_tubes(&self) -> Vec<Vec<f64>> {
        (0..self.s.n1()).map(|j| self.s.tube(j, j)).collect()
    }
}

pub fn t_svd_ref(a: &RealTensor3) -> Result<TSvd> {
    t_svd_ref_sized(a, ORACLE_MAX_DIM)
}

/// [`t_svd_ref`] with a caller-chosen size guard.
pub fn t_svd_ref_sized(a: &RealTensor3, limit: usize) -> Result<TSvd> {
    let (n1, n2, n3) = a.dims();
    guard(n1.min(n2), limit)?;
    let p = n1.min(n2);
    let a_hat = dft_mode3_naive(a);
    let h = n3 / 2 + 1;

    let mut svds = Vec::with_capacity(h);
    for k in 0..h {
        let slice = ComplexMatrix::from_col_major(n1, n2, a_hat.frontal(k).to_vec());
        svds.push(jacobi_svd_sized(&slice, limit)?);
    }

    let mut u_hat = ComplexTensor3::zeros(n1, p, n3);
    let mut s_hat = ComplexTensor3::zeros(p, p, n3);
    let mut v_hat = ComplexTensor3::zeros(n2, p, n3);
    let mut sv = Vec::with_capacity(n3);
    for k in 0..n3 {
        let (src, mirrored) = if k < h { (k, false) } else { (n3 - k, true) };
        let svd = &svds[src];
        let pick = |x: Complex64| if mirrored { x.conj() } else { x };
        for j in 0..p {
            for i in 0..n1 {
                u_hat.set(i, j, k, pick(svd.u[(i, j)]));
            }
            for i in 0..n2 {
                v_hat.set(i, j, k, pick(svd.v[(i, j)]));
            }
            s_hat.set(j, j, k, Complex64::new(svd.s[j], 0.0));
        }
        sv.push(svd.s.clone());
    }

    Ok(TSvd {
        u: idft_mode3_naive(&u_hat)?,
        s: idft_mode3_naive(&s_hat)?,
        v: idft_mode3_naive(&v_hat)?,
        fourier_singular_values: sv,
    })
}

/// Number of singular tubes whose largest Fourier-domain singular value
/// exceeds `tol` times the overall largest singular value.
pub fn tubal_rank(a: &RealTensor3, tol: f64) -> Result<usize> {
    let tsvd = t_svd_ref(a)?;
    let p = a.n1().min(a.n2());
    let per_tube: Vec<f64> = (0..p)
        .map(|j| {
            tsvd.fourier_singular_values
                .iter()
                .fold(0.0_f64, |m, s| m.max(s[j]))
        })
        .collect();
    let smax = per_tube.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return Ok(0);
    }
    Ok(per_tube.iter().filter(|&&s| s > tol * smax).count())
}

/// Tensor nuclear norm: `(1/n3) * sum over Fourier slices of the slice nuclear norm`.
pub fn nuclear_norm_tensor(a: &RealTensor3) -> Result<f64> {
    let (n1, n2, n3) = a.dims();
    guard(n1.min(n2), ORACLE_MAX_DIM)?;
    let a_hat = dft_mode3_naive(a);
    let mut total = 0.0;
    for k in 0..n3 {
        let slice = ComplexMatrix::from_col_major(n1, n2, a_hat.frontal(k).to_vec());
        total += jacobi_svd(&slice)?.s.iter().sum::<f64>();
    }
    Ok(total / n3 as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::identity_tensor;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random(n1: usize, n2: usize, n3: usize, seed: u64) -> RealTensor3 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        RealTensor3::from_fn(n1, n2, n3, |_, _, _| rng.random_range(-1.0..1.0))
    }

    #[test]
    fn bcirc_degenerate_and_identity() {
        let a = random(2, 3, 1, 1);
        let b = bcirc(&a);
        assert_eq!((b.rows, b.cols), (2, 3));
        assert_eq!(b.get(1, 2).re, a.get(1, 2, 0));

        let i = bcirc(&identity_tensor(2, 3));
        for r in 0..6 {
            for col in 0..6 {
                assert_eq!(i.get(r, col).re, if r == col { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn bcirc_blocks_shift_downwards() {
        let a = random(2, 2, 3, 2);
        let b = bcirc(&a);
        // Block (0, 1) is slice n3 - 1, block (2, 1) is slice 1.
        assert_eq!(b.get(0, 2).re, a.get(0, 0, 2));
        assert_eq!(b.get(4, 2).re, a.get(0, 0, 1));
    }

    #[test]
    fn fold_unfold() {
        let a = random(3, 2, 4, 3);
        let u = unfold(&a);
        for k in 0..4 {
            for j in 0..2 {
                for i in 0..3 {
                    assert_eq!(u.get(k * 3 + i, j).re, a.get(i, j, k));
                }
            }
        }
        assert_eq!(fold(&u, 4).unwrap(), a);
        assert!(fold(&u, 5).is_err());
        let single = random(2, 2, 1, 4);
        assert_eq!(unfold(&single).data, bcirc(&single).data);
    }

    #[test]
    fn naive_t_product_is_bilinear() {
        let a = random(2, 3, 3, 5);
        let b = random(3, 2, 3, 6);
        let c = random(3, 2, 3, 7);
        let lhs = t_product_naive(&a, &b.add(&c).unwrap()).unwrap();
        let rhs = t_product_naive(&a, &b)
            .unwrap()
            .add(&t_product_naive(&a, &c).unwrap())
            .unwrap();
        assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-11);
        let id = t_product_naive(&identity_tensor(2, 3), &a).unwrap();
        assert!(id.max_abs_diff(&a).unwrap() < 1e-15);
    }

    #[test]
    fn jacobi_diag_and_unitary() {
        let d = ComplexMatrix::from_diag(&[1.0, 3.0, 2.0]);
        let svd = jacobi_svd(&d).unwrap();
        assert_eq!(svd.s, vec![3.0, 2.0, 1.0]);

        let h = 0.5f64.sqrt();
        let u =
            ComplexMatrix::from_col_major(2, 2, vec![c(h, 0.0), c(0.0, h), c(0.0, h), c(h, 0.0)]);
        let svd = jacobi_svd(&u).unwrap();
        for s in svd.s {
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn jacobi_matches_characteristic_roots() {
        // a^T a = [[5, 11], [11, 25]] for a = [[1, 2], [3, 4]].
        let a = ComplexMatrix::from_col_major(
            2,
            2,
            vec![c(1.0, 0.0), c(3.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)],
        );
        let (tr, det) = (30.0f64, 4.0f64);
        let disc = (tr * tr - 4.0 * det).sqrt();
        let want = [((tr + disc) / 2.0).sqrt(), ((tr - disc) / 2.0).sqrt()];
        let got = jacobi_svd(&a).unwrap().s;
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-10);
        }

        // Symmetric positive definite, eigenvalues 4, 2, 2.
        let sym = ComplexMatrix::from_col_major(
            3,
            3,
            [2.0, 0.0, 0.0, 0.0, 3.0, 1.0, 0.0, 1.0, 3.0]
                .iter()
                .map(|&v| c(v, 0.0))
                .collect(),
        );
        let got = jacobi_svd(&sym).unwrap().s;
        for (g, w) in got.iter().zip([4.0, 2.0, 2.0]) {
            assert!((g - w).abs() < 1e-10, "{got:?}");
        }
    }

    #[test]
    fn jacobi_random_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for (m, n) in [(6, 4), (4, 6), (5, 5)] {
            let a = ComplexMatrix::from_fn(m, n, |_, _| {
                c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let JacobiSvd { u, s, v } = jacobi_svd(&a).unwrap();
            let rec = u
                .matmul(&ComplexMatrix::from_diag(&s))
                .unwrap()
                .matmul_adjoint(&v)
                .unwrap();
            assert!(rec.sub(&a).unwrap().frobenius_norm() <= 1e-11 * a.frobenius_norm());
            assert!(u.orthonormality_defect() < 1e-12);
            assert!(v.orthonormality_defect() < 1e-12);
            let fro: f64 = s.iter().map(|x| x * x).sum();
            assert!((fro - a.frobenius_norm_sqr()).abs() < 1e-11 * fro.max(1.0));
            assert!(s.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn jacobi_rank_deficient_completes_u() {
        let mut a = ComplexMatrix::zeros(4, 3);
        a[(0, 0)] = c(2.0, 0.0);
        let JacobiSvd { u, s, .. } = jacobi_svd(&a).unwrap();
        assert_eq!(s[0], 2.0);
        assert!(u.orthonormality_defect() < 1e-12);
    }

    #[test]
    fn size_guard() {
        let big = ComplexMatrix::zeros(65, 65);
        assert!(matches!(jacobi_svd(&big), Err(Error::SizeGuard { .. })));
        assert!(matches!(
            t_svd_ref(&RealTensor3::zeros(65, 70, 1)),
            Err(Error::SizeGuard { .. })
        ));
    }

    #[test]
    fn t_svd_simple_cases() {
        let i = identity_tensor(3, 4);
        let t = t_svd_ref(&i).unwrap();
        assert!(t.s.max_abs_diff(&i).unwrap() < 1e-12);
        assert_eq!(tubal_rank(&i, 1e-8).unwrap(), 3);
        assert_eq!(tubal_rank(&RealTensor3::zeros(3, 3, 2), 1e-8).unwrap(), 0);
        assert!((nuclear_norm_tensor(&i).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(
            nuclear_norm_tensor(&RealTensor3::zeros(2, 2, 2)).unwrap(),
            0.0
        );
    }

    #[test]
    fn naive_dft_round_trip() {
        let a = random(2, 3, 5, 9);
        let back = idft_mode3_naive(&dft_mode3_naive(&a)).unwrap();
        assert!(back.max_abs_diff(&a).unwrap() < 1e-12);
    }
}
