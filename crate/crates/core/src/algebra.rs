//! The t-product algebra on real third-order tensors.

use crate::error::{Error, Result};
use crate::fourier::{half_len, independent_slices, real_from_independent};
use crate::matrix::ComplexMatrix;
use crate::tensor::{ObservationMask, RealTensor3};

/// t-product `a * b` of an `n1 x n2 x n3` and an `n2 x l x n3` tensor.
///
/// Computed as independent Fourier-slice matrix products followed by the
/// inverse mode-3 DFT, which equals `fold(bcirc(a) unfold(b))`.
pub fn t_product(a: &RealTensor3, b: &RealTensor3) -> Result<RealTensor3> {
    let (n1, n2, n3) = a.dims();
    let (m2, l, m3) = b.dims();
    if n2 != m2 || n3 != m3 {
        return Err(Error::shape(
            "t_product",
            format!("{n1}x{n2}x{n3} * {m2}x{l}x{m3}"),
        ));
    }
    let a_hat = independent_slices(a);
    let b_hat = independent_slices(b);
    let prod = a_hat
        .iter()
        .zip(&b_hat)
        .map(|(x, y)| x.matmul(y))
        .collect::<Result<Vec<_>>>()?;
    real_from_independent(&prod, n3)
}

/// t-product of three tensors, `a * b * c`, sharing one round of transforms.
pub fn t_product3(a: &RealTensor3, b: &RealTensor3, c: &RealTensor3) -> Result<RealTensor3> {
    let n3 = a.n3();
    if a.n2() != b.n1() || b.n2() != c.n1() || b.n3() != n3 || c.n3() != n3 {
        return Err(Error::shape(
            "t_product3",
            format!("{:?} * {:?} * {:?}", a.dims(), b.dims(), c.dims()),
        ));
    }
    let (ah, bh, ch) = (
        independent_slices(a),
        independent_slices(b),
        independent_slices(c),
    );
    let mut prod = Vec::with_capacity(half_len(n3));
    for ((x, y), z) in ah.iter().zip(&bh).zip(&ch) {
        prod.push(x.matmul(y)?.matmul(z)?);
    }
    real_from_independent(&prod, n3)
}

/// Tensor conjugate transpose: transpose every frontal slice and reverse the
/// order of slices `2..n3` (one-based).
pub fn conj_transpose(a: &RealTensor3) -> RealTensor3 {
    let (n1, n2, n3) = a.dims();
    let mut out = RealTensor3::zeros(n2, n1, n3);
    for k in 0..n3 {
        let src = (n3 - k) % n3;
        for j in 0..n2 {
            for i in 0..n1 {
                out.set(j, i, k, a.get(i, j, src));
            }
        }
    }
    out
}

pub fn frobenius_norm(a: &RealTensor3) -> f64 {
    a.as_slice().iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Sum of the slice-wise matrix inner products.
pub fn inner_product(a: &RealTensor3, b: &RealTensor3) -> Result<f64> {
    a.expect_same_shape(b, "inner_product")?;
    Ok(a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| x * y)
        .sum())
}

/// Frobenius norms of the lateral slices `x(:, j, :)`.
pub fn lateral_slice_norms(x: &RealTensor3) -> Vec<f64> {
    let (n1, n2, n3) = x.dims();
    let mut acc = vec![0.0; n2];
    for k in 0..n3 {
        let s = x.frontal(k);
        for (j, a) in acc.iter_mut().enumerate() {
            *a += s[j * n1..(j + 1) * n1].iter().map(|v| v * v).sum::<f64>();
        }
    }
    acc.into_iter().map(f64::sqrt).collect()
}

/// Tensor L2,1 norm: the sum of lateral-slice Frobenius norms.
pub fn l21_norm(x: &RealTensor3) -> f64 {
    lateral_slice_norms(x).into_iter().sum()
}

/// Identity tensor: the `n x n` identity as first frontal slice, zeros elsewhere.
pub fn identity_tensor(n: usize, n3: usize) -> RealTensor3 {
    identity_tensor_rect(n, n, n3)
}

/// Rectangular identity: leading `m x n` identity block in the first slice.
pub fn identity_tensor_rect(m: usize, n: usize, n3: usize) -> RealTensor3 {
    let mut t = RealTensor3::zeros(m, n, n3);
    for i in 0..m.min(n) {
        t.set(i, i, 0, 1.0);
    }
    t
}

/// Keeps entries in the observed set and zeroes the rest.
pub fn mask_project(a: &RealTensor3, omega: &ObservationMask) -> Result<RealTensor3> {
    omega.expect_matches(a, "mask_project")?;
    let mut out = a.clone();
    for (v, &obs) in out.as_mut_slice().iter_mut().zip(omega.as_slice()) {
        if !obs {
            *v = 0.0;
        }
    }
    Ok(out)
}

/// Real tensor from a Fourier-slice function applied to the independent
/// slices of `a`.
pub(crate) fn map_fourier_slices(
    a: &RealTensor3,
    mut f: impl FnMut(usize, &ComplexMatrix) -> Result<ComplexMatrix>,
) -> Result<RealTensor3> {
    let slices = independent_slices(a);
    let mapped = slices
        .iter()
        .enumerate()
        .map(|(k, s)| f(k, s))
        .collect::<Result<Vec<_>>>()?;
    real_from_independent(&mapped, a.n3())
}
