//! Mode-3 discrete Fourier transform.
//!
//! The forward transform is unnormalised (`X[k] = sum_t x[t] exp(-2 pi i k t / n3)`),
//! the inverse carries the `1/n3` factor. Arbitrary tube lengths are handled by
//! `rustfft`'s mixed-radix and Bluestein plans.
//!
//! Only the first `n3 / 2 + 1` Fourier slices of a real tensor are
//! independent; the rest are complex conjugates. Slice-wise algorithms in this
//! crate compute the independent half and mirror the rest with
//! [`assemble_conjugate_symmetric`].

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::tensor::{ComplexTensor3, RealTensor3};

/// Imaginary residue silently dropped by [`idft_mode3`] (relative to the data scale).
pub const RESIDUE_DISCARD: f64 = 1e-10;
/// Imaginary residue above which [`idft_mode3`] fails with `SymmetryViolation`.
pub const RESIDUE_ERROR: f64 = 1e-8;

/// Number of independent Fourier slices of a real tensor of depth `n3`.
#[inline]
pub fn half_len(n3: usize) -> usize {
    n3 / 2 + 1
}

fn gather_tubes(n12: usize, n3: usize, data: &[Complex64]) -> Vec<Complex64> {
    let mut buf = vec![Complex64::new(0.0, 0.0); n12 * n3];
    for k in 0..n3 {
        let slice = &data[k * n12..(k + 1) * n12];
        for (t, v) in slice.iter().enumerate() {
            buf[t * n3 + k] = *v;
        }
    }
    buf
}

fn scatter_tubes<T>(
    n12: usize,
    n3: usize,
    buf: &[Complex64],
    out: &mut [T],
    f: impl Fn(Complex64) -> T,
) {
    for k in 0..n3 {
        for t in 0..n12 {
            out[k * n12 + t] = f(buf[t * n3 + k]);
        }
    }
}

/// Unnormalised DFT of every tube `(i, j, :)`.
///
/// The output is exactly conjugate symmetric: the upper half of each tube is
/// written as the conjugate of the lower half and the self-conjugate bins are
/// forced real, which is what a real-to-complex transform would produce.
pub fn dft_mode3(a: &RealTensor3) -> ComplexTensor3 {
    let (n1, n2, n3) = a.dims();
    let n12 = n1 * n2;
    let mut out = ComplexTensor3::zeros(n1, n2, n3);
    if n3 == 1 {
        for (o, v) in out.as_mut_slice().iter_mut().zip(a.as_slice()) {
            *o = Complex64::new(*v, 0.0);
        }
        return out;
    }

    let promoted: Vec<Complex64> = a
        .as_slice()
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    let mut buf = gather_tubes(n12, n3, &promoted);
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n3);
    fft.process(&mut buf);

    let h = half_len(n3);
    for tube in buf.chunks_exact_mut(n3) {
        tube[0].im = 0.0;
        if n3 % 2 == 0 {
            tube[n3 / 2].im = 0.0;
        }
        for k in h..n3 {
            tube[k] = tube[n3 - k].conj();
        }
    }
    scatter_tubes(n12, n3, &buf, out.as_mut_slice(), |v| v);
    out
}

/// Inverse of [`dft_mode3`], returning the real part.
///
/// Imaginary residue up to [`RESIDUE_DISCARD`] times the data scale is dropped
/// silently, up to [`RESIDUE_ERROR`] with a warning, and anything larger means
/// the input was not conjugate symmetric. The data scale is
/// `max(1, max |real part|)`.
pub fn idft_mode3(a: &ComplexTensor3) -> Result<RealTensor3> {
    let (n1, n2, n3) = a.dims();
    let n12 = n1 * n2;
    let mut buf = gather_tubes(n12, n3, a.as_slice());
    if n3 > 1 {
        let ifft = FftPlanner::<f64>::new().plan_fft_inverse(n3);
        ifft.process(&mut buf);
        let inv = 1.0 / n3 as f64;
        for v in buf.iter_mut() {
            *v *= inv;
        }
    }

    let scale = buf.iter().fold(1.0_f64, |m, v| m.max(v.re.abs()));
    let residue = buf.iter().fold(0.0_f64, |m, v| m.max(v.im.abs()));
    if residue > RESIDUE_ERROR * scale {
        return Err(Error::SymmetryViolation {
            residue,
            limit: RESIDUE_ERROR * scale,
        });
    }
    if residue > RESIDUE_DISCARD * scale {
        log::warn!("discarding imaginary residue {residue:e} in inverse mode-3 DFT");
    }

    let mut out = RealTensor3::zeros(n1, n2, n3);
    scatter_tubes(n12, n3, &buf, out.as_mut_slice(), |v| v.re);
    Ok(out)
}

/// Fourier slice `k` as a dense matrix.
pub fn slice_matrix(a: &ComplexTensor3, k: usize) -> ComplexMatrix {
    let (n1, n2, _) = a.dims();
    ComplexMatrix::from_col_major(n1, n2, a.frontal(k).to_vec())
}

/// The independent Fourier slices `0..n3/2+1` of a real tensor.
pub fn independent_slices(a: &RealTensor3) -> Vec<ComplexMatrix> {
    let a_hat = dft_mode3(a);
    (0..half_len(a.n3()))
        .map(|k| slice_matrix(&a_hat, k))
        .collect()
}

/// Builds a full conjugate-symmetric Fourier tensor of depth `n3` from its
/// independent slices: slice `k >= n3/2+1` is `conj(slice n3 - k)`.
pub fn assemble_conjugate_symmetric(half: &[ComplexMatrix], n3: usize) -> Result<ComplexTensor3> {
    let h = half_len(n3);
    if half.len() != h {
        return Err(Error::shape(
            "assemble_conjugate_symmetric",
            format!(
                "expected {h} independent slices for depth {n3}, got {}",
                half.len()
            ),
        ));
    }
    let (m, n) = half[0].dims();
    if half.iter().any(|s| s.dims() != (m, n)) {
        return Err(Error::shape(
            "assemble_conjugate_symmetric",
            "independent slices differ in shape",
        ));
    }
    let mut out = ComplexTensor3::zeros(m, n, n3);
    for (k, s) in half.iter().enumerate() {
        out.frontal_mut(k).copy_from_slice(s.as_slice());
    }
    for k in h..n3 {
        let src = half[n3 - k].as_slice();
        for (o, v) in out.frontal_mut(k).iter_mut().zip(src) {
            *o = v.conj();
        }
    }
    Ok(out)
}

/// Inverse transform of a tensor given by its independent Fourier slices.
pub fn real_from_independent(half: &[ComplexMatrix], n3: usize) -> Result<RealTensor3> {
    idft_mode3(&assemble_conjugate_symmetric(half, n3)?)
}

/// Weight of Fourier slice `k` when summing over all `n3` slices using only
/// the independent half: mirrored slices count twice.
#[inline]
pub fn mirror_weight(k: usize, n3: usize) -> f64 {
    if k == 0 || (n3.is_multiple_of(2) && k == n3 / 2) {
        1.0
    } else {
        2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(n1: usize, n2: usize, n3: usize, seed: u64) -> RealTensor3 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        RealTensor3::from_fn(n1, n2, n3, |_, _, _| rng.random_range(-1.0..1.0))
    }

    #[test]
    fn impulse_tube_transforms_to_ones() {
        let mut a = RealTensor3::zeros(1, 1, 6);
        a.set(0, 0, 0, 1.0);
        let f = dft_mode3(&a);
        for k in 0..6 {
            assert!((f.get(0, 0, k) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn constant_tube_is_pure_dc() {
        let a = RealTensor3::from_fn(1, 1, 7, |_, _, _| 2.5);
        let f = dft_mode3(&a);
        assert!((f.get(0, 0, 0).re - 17.5).abs() < 1e-12);
        for k in 1..7 {
            assert!(f.get(0, 0, k).norm() < 1e-12);
        }
    }

    #[test]
    fn output_is_conjugate_symmetric() {
        for n3 in 1..9 {
            let f = dft_mode3(&random(3, 2, n3, n3 as u64));
            assert_eq!(f.symmetry_defect(), 0.0, "n3 = {n3}");
        }
    }

    #[test]
    fn zero_round_trip() {
        let z = idft_mode3(&ComplexTensor3::zeros(2, 3, 4)).unwrap();
        assert_eq!(z, RealTensor3::zeros(2, 3, 4));
    }

    #[test]
    fn round_trip_odd_prime_depth() {
        let a = random(4, 3, 13, 1);
        let back = idft_mode3(&dft_mode3(&a)).unwrap();
        assert!(back.max_abs_diff(&a).unwrap() < 1e-12);
    }

    #[test]
    fn broken_symmetry_is_rejected() {
        let mut f = dft_mode3(&random(2, 2, 5, 3));
        let v = f.get(1, 0, 2);
        f.set(1, 0, 2, v + Complex64::new(0.0, 1e-3));
        assert!(matches!(
            idft_mode3(&f),
            Err(Error::SymmetryViolation { .. })
        ));
    }

    #[test]
    fn assemble_matches_full_transform() {
        let a = random(3, 4, 6, 9);
        let full = dft_mode3(&a);
        let half: Vec<_> = (0..half_len(6)).map(|k| slice_matrix(&full, k)).collect();
        assert_eq!(assemble_conjugate_symmetric(&half, 6).unwrap(), full);
    }
}
