//! Self-check suite comparing the fast kernels against the brute-force oracles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{conj_transpose, frobenius_norm, identity_tensor, l21_norm, t_product};
use crate::error::Result;
use crate::factorization::{ctsvd_qr, t_qr};
use crate::fourier::{dft_mode3, idft_mode3};
use crate::oracle::{
    bcirc, block_diagonalize, dft_mode3_naive, nuclear_norm_tensor, t_product_naive, t_svd_ref,
};
use crate::synth::{synth_lowrank, SynthSpec};
use crate::tensor::RealTensor3;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn random(n1: usize, n2: usize, n3: usize, rng: &mut ChaCha8Rng) -> RealTensor3 {
    RealTensor3::from_fn(n1, n2, n3, |_, _, _| rng.random_range(-1.0..1.0))
}

fn dims(rng: &mut ChaCha8Rng, max: usize) -> (usize, usize, usize) {
    (
        rng.random_range(1..=max),
        rng.random_range(1..=max),
        rng.random_range(1..=max),
    )
}

fn check(name: &'static str, worst: Result<f64>, limit: f64) -> Check {
    match worst {
        Ok(w) => Check {
            name,
            passed: w <= limit,
            detail: format!("worst {w:.3e}, limit {limit:.0e}"),
        },
        Err(e) => Check {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn fft_vs_naive(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let (n1, n2, n3) = dims(rng, 7);
        let a = random(n1, n2, n3, rng);
        let fast = dft_mode3(&a);
        let slow = dft_mode3_naive(&a);
        for (x, y) in fast.as_slice().iter().zip(slow.as_slice()) {
            worst = worst.max((x - y).norm());
        }
        worst = worst.max(idft_mode3(&fast)?.max_abs_diff(&a)?);
    }
    Ok(worst)
}

fn product_vs_bcirc(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let (n1, n2, n3) = dims(rng, 6);
        let l = rng.random_range(1..=6);
        let a = random(n1, n2, n3, rng);
        let b = random(n2, l, n3, rng);
        worst = worst.max(t_product(&a, &b)?.max_abs_diff(&t_product_naive(&a, &b)?)?);
    }
    Ok(worst)
}

/// Off-block-diagonal magnitude of `(F ⊗ I) bcirc(a) (F^{-1} ⊗ I)`.
fn bcirc_diagonalization(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0_f64;
    for _ in 0..10 {
        let (n1, n2, n3) = dims(rng, 5);
        let a = random(n1, n2, n3, rng);
        let bd = block_diagonalize(&a)?;
        let scale = bcirc(&a).frobenius_norm().max(1.0);
        for r in 0..bd.rows {
            for c in 0..bd.cols {
                if r / n1 != c / n2 {
                    worst = worst.max(bd.get(r, c).norm() / scale);
                }
            }
        }
    }
    Ok(worst)
}

/// Associativity, identity and the conjugate-transpose reversal law.
fn algebra_identities(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let (n1, n2, n3) = dims(rng, 6);
        let l = rng.random_range(1..=6);
        let q = rng.random_range(1..=6);
        let a = random(n1, n2, n3, rng);
        let b = random(n2, l, n3, rng);
        let c = random(l, q, n3, rng);
        let ab_c = t_product(&t_product(&a, &b)?, &c)?;
        let a_bc = t_product(&a, &t_product(&b, &c)?)?;
        worst = worst.max(ab_c.max_abs_diff(&a_bc)?);
        worst = worst.max(t_product(&identity_tensor(n1, n3), &a)?.max_abs_diff(&a)?);
        let lhs = conj_transpose(&t_product(&a, &b)?);
        let rhs = t_product(&conj_transpose(&b), &conj_transpose(&a))?;
        worst = worst.max(lhs.max_abs_diff(&rhs)?);
    }
    Ok(worst)
}

fn tqr_contract(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let n1 = rng.random_range(2..=10);
        let n2 = rng.random_range(1..=n1.min(8));
        let n3 = rng.random_range(1..=5);
        let a = random(n1, n2, n3, rng);
        let f = t_qr(&a)?;
        let rec = t_product(&f.q, &f.r)?.sub(&a)?;
        worst = worst.max(frobenius_norm(&rec) / frobenius_norm(&a).max(1e-300));
        let gram = t_product(&conj_transpose(&f.q), &f.q)?;
        worst = worst.max(gram.max_abs_diff(&identity_tensor(n2, n3))?);
    }
    Ok(worst)
}

fn sorted_by_norm(mut tubes: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let norm = |t: &Vec<f64>| t.iter().map(|v| v * v).sum::<f64>();
    tubes.sort_by(|x, y| norm(y).total_cmp(&norm(x)));
    tubes
}

fn ctsvd_vs_tsvd() -> Result<f64> {
    let mut worst = 0.0_f64;
    for seed in 0..3 {
        let a = synth_lowrank(SynthSpec {
            m: 12,
            n: 12,
            p: 3,
            r1: 4,
            seed,
        })?;
        let f = ctsvd_qr(&a, 4, 300)?;
        worst = worst.max(f.reconstruct()?.max_abs_diff(&a)?);
        let got = sorted_by_norm(f.diagonal_tubes());
        let want = sorted_by_norm(t_svd_ref(&a)?.singular_tubes());
        for (g, w) in got.iter().zip(&want) {
            for (x, y) in g.iter().zip(w) {
                worst = worst.max((x - y).abs());
            }
        }
    }
    Ok(worst)
}

/// Largest violation of `||d||_* <= ||d||_{2,1}` on CTSVD-QR outputs.
fn nuclear_vs_l21(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let n1 = rng.random_range(2..=8);
        let n2 = rng.random_range(2..=8);
        let n3 = rng.random_range(1..=4);
        let r = rng.random_range(1..=n1.min(n2));
        let a = random(n1, n2, n3, rng);
        let d = ctsvd_qr(&a, r, 20)?.d;
        worst = worst.max(nuclear_norm_tensor(&d)? - l21_norm(&d));
    }
    Ok(worst)
}

/// Runs every check with fixed seeds.
pub fn run_all() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    vec![
        check("fft matches naive dft", fft_vs_naive(&mut rng), 1e-10),
        check(
            "t-product matches bcirc oracle",
            product_vs_bcirc(&mut rng),
            1e-11,
        ),
        check(
            "fourier transform block-diagonalizes bcirc",
            bcirc_diagonalization(&mut rng),
            1e-12,
        ),
        check(
            "t-product algebra identities",
            algebra_identities(&mut rng),
            1e-10,
        ),
        check(
            "t-qr reconstruction and orthogonality",
            tqr_contract(&mut rng),
            1e-9,
        ),
        check("ctsvd-qr matches reference t-svd", ctsvd_vs_tsvd(), 1e-6),
        check(
            "nuclear norm bounded by l21 norm",
            nuclear_vs_l21(&mut rng),
            1e-9,
        ),
    ]
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_checks_pass() {
        for c in super::run_all() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
