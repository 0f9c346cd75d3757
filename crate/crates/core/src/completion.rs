//! TLNM-TQR: tensor completion by L2,1-norm minimisation of the middle factor
//! of a t-QR based tri-factorization, solved with ADMM.
//!
//! Each iteration, with `X_c = X + Y / mu`:
//!
//! 1. [`update_factors`] – two t-QRs give new `L`, `R` and the unshrunk core `D_T`.
//! 2. [`shrink_d`] – column soft-thresholding of `D_T` in the Fourier domain.
//! 3. [`reassemble_x`] – `X = L*D*R` off the observed set, `M` on it.
//! 4. [`dual_step`] – `Y += mu (X - L*D*R)`, `mu *= rho`.
//!
//! The loop stops once `||L*D*R - X||_F^2 < eps` or after `max_iters` sweeps.

use std::time::Instant;

use crate::algebra::{
    conj_transpose, frobenius_norm, identity_tensor, identity_tensor_rect, map_fourier_slices,
    mask_project, t_product, t_product3,
};
use crate::error::{Error, Result};
use crate::factorization::{t_qr, TensorQr};
use crate::fourier::{independent_slices, mirror_weight};
use crate::tensor::{ObservationMask, RealTensor3};

#[derive(Debug, Clone, PartialEq)]
pub struct CompletionConfig {
    /// Target tubal rank `r`.
    pub rank: usize,
    /// Initial penalty `mu`.
    pub mu0: f64,
    /// Penalty growth factor, `>= 1`.
    pub rho: f64,
    /// Stopping threshold on the squared residual. `None` means
    /// `1e-7 * n1 * n2 * n3`.
    pub eps: Option<f64>,
    pub max_iters: usize,
    /// Reserved for stochastic plumbing; the solver itself is deterministic.
    pub seed: u64,
}

impl Default for CompletionConfig {
    fn default() -> Self {
        Self {
            rank: 11,
            mu0: 1e-2,
            rho: 1.5,
            eps: None,
            max_iters: 100,
            seed: 0,
        }
    }
}

impl CompletionConfig {
    pub fn with_rank(rank: usize) -> Self {
        Self {
            rank,
            ..Self::default()
        }
    }

    /// Squared-residual threshold for a tensor with `entries` elements.
    pub fn effective_eps(&self, entries: usize) -> f64 {
        self.eps.unwrap_or(1e-7 * entries as f64)
    }

    pub fn validate(&self, n1: usize, n2: usize) -> Result<()> {
        let max = n1.min(n2);
        if self.rank == 0 || self.rank > max {
            return Err(Error::Config(format!(
                "rank {} out of range 1..={max}",
                self.rank
            )));
        }
        if !(self.mu0 > 0.0 && self.mu0.is_finite()) {
            return Err(Error::Config(format!(
                "mu must be positive, got {}",
                self.mu0
            )));
        }
        if !(self.rho >= 1.0 && self.rho.is_finite()) {
            return Err(Error::Config(format!("rho must be >= 1, got {}", self.rho)));
        }
        if let Some(eps) = self.eps {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(Error::Config(format!("eps must be positive, got {eps}")));
            }
        }
        if self.max_iters == 0 {
            return Err(Error::Config("max_iters must be at least 1".into()));
        }
        Ok(())
    }
}

/// ADMM state after `k` iterations.
#[derive(Debug, Clone)]
pub struct CompletionState {
    pub l: RealTensor3,
    pub d: RealTensor3,
    pub rr: RealTensor3,
    pub x: RealTensor3,
    pub y: RealTensor3,
    pub mu: f64,
    pub k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    /// `||L*D*R - X||_F^2` after the iteration.
    pub residual: f64,
    /// Penalty used during the iteration.
    pub mu: f64,
    pub rmse_vs_truth: Option<f64>,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone)]
pub struct CompletionReport {
    pub x: RealTensor3,
    pub iterations: usize,
    pub trace: Vec<IterationRecord>,
    pub converged: bool,
}

/// New factors from `X_c`.
#[derive(Debug, Clone)]
pub struct FactorUpdate {
    /// `n1 x r x n3`.
    pub l: RealTensor3,
    /// `r x n2 x n3`.
    pub rr: RealTensor3,
    /// `r x r x n3`, satisfies `l^* * x_c = d_t * rr`.
    pub d_t: RealTensor3,
}

/// `L = Q(t_qr(x_c * rr_k^*))`, `[Q_r, T] = t_qr(x_c^* * L)`, `R = Q_r^*`, `D_T = T^*`.
///
/// `rr_k` is expected to have orthonormal rows (the previous iterate or the
/// rectangular identity).
pub fn update_factors(x_c: &RealTensor3, rr_k: &RealTensor3) -> Result<FactorUpdate> {
    let (n1, n2, n3) = x_c.dims();
    let (r, m2, m3) = rr_k.dims();
    if m2 != n2 || m3 != n3 || r > n1.min(n2) {
        return Err(Error::shape(
            "update_factors",
            format!("x_c {:?} with rr_k {:?}", x_c.dims(), rr_k.dims()),
        ));
    }
    let TensorQr { q: l, .. } = t_qr(&t_product(x_c, &conj_transpose(rr_k))?)?;
    let TensorQr { q: q_r, r: t } = t_qr(&t_product(&conj_transpose(x_c), &l)?)?;
    Ok(FactorUpdate {
        l,
        rr: conj_transpose(&q_r),
        d_t: conj_transpose(&t),
    })
}

/// Column soft-thresholding in the Fourier domain: every column `c` of every
/// Fourier slice of `d_t` is scaled by `max(|c| - 1/mu, 0) / |c|`.
///
/// The result minimises
/// `(1/mu) * fourier_l21_norm(D) + 1/2 ||D - d_t||_F^2`.
pub fn shrink_d(d_t: &RealTensor3, mu: f64) -> Result<RealTensor3> {
    if mu.is_nan() || mu <= 0.0 {
        return Err(Error::Config(format!("mu must be positive, got {mu}")));
    }
    let threshold = 1.0 / mu;
    map_fourier_slices(d_t, |_, s| {
        let mut out = s.clone();
        for j in 0..s.cols() {
            let c = s.col_norm(j);
            let factor = if c > 0.0 {
                (c - threshold).max(0.0) / c
            } else {
                0.0
            };
            for v in out.col_mut(j) {
                *v *= factor;
            }
        }
        Ok(out)
    })
}

/// `(1/n3) * sum over all Fourier slices t and columns j of |dft(d)(:, j, t)|`,
/// the column-sparsity penalty that [`shrink_d`] is the proximal map of.
pub fn fourier_l21_norm(d: &RealTensor3) -> f64 {
    let n3 = d.n3();
    let total: f64 = independent_slices(d)
        .iter()
        .enumerate()
        .map(|(k, s)| mirror_weight(k, n3) * (0..s.cols()).map(|j| s.col_norm(j)).sum::<f64>())
        .sum();
    total / n3 as f64
}

/// `L*D*R` with the observed entries overwritten by `m`.
pub fn reassemble_x(
    l: &RealTensor3,
    d: &RealTensor3,
    rr: &RealTensor3,
    m: &RealTensor3,
    omega: &ObservationMask,
) -> Result<RealTensor3> {
    let ldr = t_product3(l, d, rr)?;
    overwrite_observed(&ldr, m, omega)
}

fn overwrite_observed(
    ldr: &RealTensor3,
    m: &RealTensor3,
    omega: &ObservationMask,
) -> Result<RealTensor3> {
    ldr.expect_same_shape(m, "reassemble_x")?;
    omega.expect_matches(m, "reassemble_x")?;
    let mut x = ldr.clone();
    for ((xv, &mv), &obs) in x
        .as_mut_slice()
        .iter_mut()
        .zip(m.as_slice())
        .zip(omega.as_slice())
    {
        if obs {
            *xv = mv;
        }
    }
    Ok(x)
}

/// Dual ascent: `(y + mu (x - ldr), rho * mu)`.
pub fn dual_step(
    y: &RealTensor3,
    mu: f64,
    x: &RealTensor3,
    ldr: &RealTensor3,
    rho: f64,
) -> Result<(RealTensor3, f64)> {
    y.expect_same_shape(x, "dual_step")?;
    x.expect_same_shape(ldr, "dual_step")?;
    if rho.is_nan() || rho < 1.0 {
        return Err(Error::Config(format!("rho must be >= 1, got {rho}")));
    }
    let mut next = y.clone();
    for ((yv, xv), lv) in next
        .as_mut_slice()
        .iter_mut()
        .zip(x.as_slice())
        .zip(ldr.as_slice())
    {
        *yv += mu * (xv - lv);
    }
    Ok((next, rho * mu))
}

/// Root-mean-square difference, `||x - y||_F / sqrt(n1 n2 n3)`.
pub fn rmse(x: &RealTensor3, y: &RealTensor3) -> Result<f64> {
    x.expect_same_shape(y, "rmse")?;
    let s: f64 = x
        .as_slice()
        .iter()
        .zip(y.as_slice())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok((s / x.len() as f64).sqrt())
}

/// Completes `m` from its entries on `omega`. Entries of `m` off `omega` are ignored.
pub fn tlnm_tqr(
    m: &RealTensor3,
    omega: &ObservationMask,
    cfg: &CompletionConfig,
) -> Result<CompletionReport> {
    tlnm_tqr_observed(m, omega, cfg, None, |_| {})
}

/// [`tlnm_tqr`] with the RMSE against `truth` recorded every iteration.
pub fn tlnm_tqr_with_truth(
    m: &RealTensor3,
    omega: &ObservationMask,
    cfg: &CompletionConfig,
    truth: &RealTensor3,
) -> Result<CompletionReport> {
    tlnm_tqr_observed(m, omega, cfg, Some(truth), |_| {})
}

/// Full-control entry point: `observe` sees the state after every iteration.
pub fn tlnm_tqr_observed(
    m: &RealTensor3,
    omega: &ObservationMask,
    cfg: &CompletionConfig,
    truth: Option<&RealTensor3>,
    mut observe: impl FnMut(&CompletionState),
) -> Result<CompletionReport> {
    let (n1, n2, n3) = m.dims();
    omega.expect_matches(m, "tlnm_tqr")?;
    cfg.validate(n1, n2)?;
    if let Some(t) = truth {
        t.expect_same_shape(m, "tlnm_tqr")?;
    }
    let observed = omega.count_observed();
    if observed == 0 {
        return Err(Error::EmptyMask);
    }
    let fully_observed = observed == m.len();
    let eps = cfg.effective_eps(m.len());
    let r = cfg.rank;
    let start = Instant::now();

    let mut state = CompletionState {
        l: identity_tensor_rect(n1, r, n3),
        d: identity_tensor(r, n3),
        rr: identity_tensor_rect(r, n2, n3),
        x: mask_project(m, omega)?,
        y: RealTensor3::zeros(n1, n2, n3),
        mu: cfg.mu0,
        k: 0,
    };
    let mut ldr = t_product3(&state.l, &state.d, &state.rr)?;
    let mut residual = frobenius_norm(&ldr.sub(&state.x)?).powi(2);
    let mut trace = Vec::new();
    let mut converged = residual < eps;

    while !converged && state.k < cfg.max_iters {
        let x_c = state.x.add_scaled(1.0 / state.mu, &state.y)?;
        let FactorUpdate { l, rr, d_t } = update_factors(&x_c, &state.rr)?;
        let d = shrink_d(&d_t, state.mu)?;
        ldr = t_product3(&l, &d, &rr)?;
        let x = overwrite_observed(&ldr, m, omega)?;
        let (y, mu_next) = dual_step(&state.y, state.mu, &x, &ldr, cfg.rho)?;
        residual = frobenius_norm(&ldr.sub(&x)?).powi(2);
        if !residual.is_finite() {
            return Err(Error::Numerical(format!(
                "residual diverged at iteration {}",
                state.k + 1
            )));
        }

        let mu_used = state.mu;
        state = CompletionState {
            l,
            d,
            rr,
            x,
            y,
            mu: mu_next,
            k: state.k + 1,
        };
        let record = IterationRecord {
            k: state.k,
            residual,
            mu: mu_used,
            rmse_vs_truth: truth.map(|t| rmse(&state.x, t)).transpose()?,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        };
        if state.k.is_multiple_of(10) {
            log::info!(
                "iter {:>4}  residual {:.6e}  mu {:.3e}",
                record.k,
                record.residual,
                record.mu
            );
        }
        trace.push(record);
        observe(&state);
        // With every entry observed the estimate is pinned to the data.
        converged = residual < eps || fully_observed;
    }

    Ok(CompletionReport {
        x: state.x,
        iterations: state.k,
        trace,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::identity_tensor;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(n1: usize, n2: usize, n3: usize, seed: u64) -> RealTensor3 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        RealTensor3::from_fn(n1, n2, n3, |_, _, _| rng.random_range(-1.0..1.0))
    }

    #[test]
    fn config_validation() {
        assert!(CompletionConfig::with_rank(3).validate(4, 5).is_ok());
        assert!(CompletionConfig::with_rank(5).validate(4, 5).is_err());
        assert!(CompletionConfig {
            mu0: 0.0,
            ..CompletionConfig::with_rank(2)
        }
        .validate(4, 4)
        .is_err());
        assert!(CompletionConfig {
            rho: 0.5,
            ..CompletionConfig::with_rank(2)
        }
        .validate(4, 4)
        .is_err());
        assert!(CompletionConfig {
            eps: Some(-1.0),
            ..CompletionConfig::with_rank(2)
        }
        .validate(4, 4)
        .is_err());
    }

    #[test]
    fn empty_mask_is_rejected() {
        let m = random(4, 4, 2, 1);
        let err = tlnm_tqr(
            &m,
            &ObservationMask::empty(4, 4, 2),
            &CompletionConfig::with_rank(2),
        );
        assert!(matches!(err, Err(Error::EmptyMask)));
    }

    #[test]
    fn fully_observed_returns_input() {
        let m = random(5, 4, 3, 2);
        let rep = tlnm_tqr(
            &m,
            &ObservationMask::full(5, 4, 3),
            &CompletionConfig::with_rank(2),
        )
        .unwrap();
        assert_eq!(rep.x, m);
        assert_eq!(rep.iterations, 1);
        assert!(rep.converged);
        assert_eq!(rep.trace.len(), 1);
    }

    #[test]
    fn dual_step_edge_cases() {
        let y = random(3, 3, 2, 3);
        let x = random(3, 3, 2, 4);
        let (y2, mu2) = dual_step(&y, 0.5, &x, &x, 1.5).unwrap();
        assert_eq!(y2, y);
        assert_eq!(mu2, 0.75);
        let (_, mu3) = dual_step(&y, 0.5, &x, &y, 1.0).unwrap();
        assert_eq!(mu3, 0.5);
        assert!(dual_step(&y, 0.5, &x, &RealTensor3::zeros(3, 3, 3), 1.5).is_err());
    }

    #[test]
    fn reassemble_extremes() {
        let l = random(4, 2, 3, 5);
        let d = random(2, 2, 3, 6);
        let rr = random(2, 5, 3, 7);
        let m = random(4, 5, 3, 8);
        let all = reassemble_x(&l, &d, &rr, &m, &ObservationMask::full(4, 5, 3)).unwrap();
        assert_eq!(all, m);
        let none = reassemble_x(&l, &d, &rr, &m, &ObservationMask::empty(4, 5, 3)).unwrap();
        assert_eq!(none, t_product3(&l, &d, &rr).unwrap());
    }

    #[test]
    fn shrink_limits() {
        let d = random(4, 4, 3, 9);
        let same = shrink_d(&d, 1e12).unwrap();
        assert!(same.max_abs_diff(&d).unwrap() < 1e-9);
        let gone = shrink_d(&d.scale(1e-3), 1.0).unwrap();
        assert_eq!(gone.max_abs(), 0.0);
        assert!(shrink_d(&d, 0.0).is_err());
    }

    #[test]
    fn update_factors_on_identity() {
        let x = identity_tensor(4, 3);
        let upd = update_factors(&x, &identity_tensor_rect(4, 4, 3)).unwrap();
        let rec = t_product3(&upd.l, &upd.d_t, &upd.rr).unwrap();
        assert!(rec.max_abs_diff(&x).unwrap() < 1e-12);
    }

    #[test]
    fn rmse_basics() {
        let x = random(3, 2, 2, 10);
        assert_eq!(rmse(&x, &x).unwrap(), 0.0);
        let ones = RealTensor3::from_fn(3, 2, 2, |_, _, _| 1.0);
        assert!((rmse(&x.add(&ones).unwrap(), &x).unwrap() - 1.0).abs() < 1e-15);
        assert!(rmse(&x, &RealTensor3::zeros(2, 3, 2)).is_err());
    }
}
