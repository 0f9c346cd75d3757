use proptest::prelude::*;
use tubal::algebra::{
    conj_transpose, frobenius_norm, identity_tensor, inner_product, l21_norm, lateral_slice_norms,
    mask_project, t_product,
};
use tubal::completion::{dual_step, fourier_l21_norm, reassemble_x, rmse, shrink_d};
use tubal::factorization::{ctsvd_qr, t_qr};
use tubal::fourier::{dft_mode3, idft_mode3};
use tubal::oracle::{dft_mode3_naive, t_product_naive};
use tubal::{ObservationMask, RealTensor3};

fn tensor(n1: usize, n2: usize, n3: usize) -> impl Strategy<Value = RealTensor3> {
    prop::collection::vec(-10.0..10.0f64, n1 * n2 * n3)
        .prop_map(move |v| RealTensor3::from_vec(n1, n2, n3, v).unwrap())
}

fn any_tensor(max: usize) -> impl Strategy<Value = RealTensor3> {
    (1..=max, 1..=max, 1..=max).prop_flat_map(|(a, b, c)| tensor(a, b, c))
}

/// `(a, b, c)` conformant for `a * b * c`.
fn triple(max: usize) -> impl Strategy<Value = (RealTensor3, RealTensor3, RealTensor3)> {
    (1..=max, 1..=max, 1..=max, 1..=max, 1..=max).prop_flat_map(|(n1, n2, l, q, n3)| {
        (tensor(n1, n2, n3), tensor(n2, l, n3), tensor(l, q, n3))
    })
}

/// `a`, `b` and `d` with `a * b` shaped like `d`.
fn adjoint_triple(max: usize) -> impl Strategy<Value = (RealTensor3, RealTensor3, RealTensor3)> {
    (1..=max, 1..=max, 1..=max, 1..=max)
        .prop_flat_map(|(n1, n2, l, n3)| (tensor(n1, n2, n3), tensor(n2, l, n3), tensor(n1, l, n3)))
}

fn tall(max: usize) -> impl Strategy<Value = RealTensor3> {
    (1..=max, 1..=max, 1..=max).prop_flat_map(|(a, b, c)| tensor(a.max(b), a.min(b), c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dft_round_trip(a in any_tensor(8)) {
        let back = idft_mode3(&dft_mode3(&a)).unwrap();
        prop_assert!(back.max_abs_diff(&a).unwrap() <= 1e-12 * a.max_abs().max(1.0));
    }

    #[test]
    fn fft_agrees_with_naive(a in any_tensor(7)) {
        let fast = dft_mode3(&a);
        let slow = dft_mode3_naive(&a);
        let worst = fast.as_slice().iter().zip(slow.as_slice())
            .map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        prop_assert!(worst <= 1e-10 * a.max_abs().max(1.0));
        prop_assert!(fast.symmetry_defect() <= 1e-12);
    }

    #[test]
    fn t_product_agrees_with_bcirc((a, b, _) in triple(6)) {
        let got = t_product(&a, &b).unwrap();
        let want = t_product_naive(&a, &b).unwrap();
        prop_assert!(got.max_abs_diff(&want).unwrap() <= 1e-11 * want.max_abs().max(1.0));
    }

    #[test]
    fn t_product_associative((a, b, c) in triple(6)) {
        let lhs = t_product(&t_product(&a, &b).unwrap(), &c).unwrap();
        let rhs = t_product(&a, &t_product(&b, &c).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-10 * lhs.max_abs().max(1.0));
    }

    #[test]
    fn conj_transpose_reverses_order((a, b, _) in triple(6)) {
        let lhs = conj_transpose(&t_product(&a, &b).unwrap());
        let rhs = t_product(&conj_transpose(&b), &conj_transpose(&a)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-10 * lhs.max_abs().max(1.0));
    }

    #[test]
    fn inner_product_is_adjoint_compatible((a, b, d) in adjoint_triple(5)) {
        let lhs = inner_product(&t_product(&a, &b).unwrap(), &d).unwrap();
        let rhs = inner_product(&b, &t_product(&conj_transpose(&a), &d).unwrap()).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0));
    }

    #[test]
    fn l21_bounds(x in any_tensor(6), alpha in -3.0..3.0f64) {
        let fro = frobenius_norm(&x);
        let l21 = l21_norm(&x);
        let n2 = x.n2() as f64;
        prop_assert!(fro <= l21 + 1e-9);
        prop_assert!(l21 <= n2.sqrt() * fro + 1e-9);
        prop_assert!((l21_norm(&x.scale(alpha)) - alpha.abs() * l21).abs() <= 1e-9 * l21.max(1.0));
        prop_assert_eq!(lateral_slice_norms(&x).len(), x.n2());
    }

    #[test]
    fn l21_triangle(x in any_tensor(5), seed in any::<u64>()) {
        let y = RealTensor3::from_fn(x.n1(), x.n2(), x.n3(), |i, j, k| {
            ((seed ^ (i * 31 + j * 17 + k) as u64) % 1000) as f64 / 100.0 - 5.0
        });
        prop_assert!(l21_norm(&x.add(&y).unwrap()) <= l21_norm(&x) + l21_norm(&y) + 1e-9);
    }

    #[test]
    fn t_qr_contract(a in tall(8)) {
        let f = t_qr(&a).unwrap();
        let rec = t_product(&f.q, &f.r).unwrap();
        prop_assert!(frobenius_norm(&rec.sub(&a).unwrap()) <= 1e-9 * frobenius_norm(&a).max(1.0));
        let gram = t_product(&conj_transpose(&f.q), &f.q).unwrap();
        prop_assert!(gram.max_abs_diff(&identity_tensor(a.n2(), a.n3())).unwrap() <= 1e-10);
    }

    #[test]
    fn orthogonal_tensors_preserve_norm(a in tall(7), seed in 0u64..1000) {
        let q = t_qr(&a).unwrap().q;
        let p = q.n2();
        let b = RealTensor3::from_fn(p, 3, a.n3(), |i, j, k| ((seed as usize + 7 * i + 3 * j + k) % 11) as f64 - 5.0);
        let qb = t_product(&q, &b).unwrap();
        prop_assert!((frobenius_norm(&qb) - frobenius_norm(&b)).abs() <= 1e-9 * frobenius_norm(&b).max(1.0));
    }

    #[test]
    fn shrink_is_nonexpansive(a in any_tensor(5), mu in 0.05..20.0f64, shift in -2.0..2.0f64) {
        let b = RealTensor3::from_fn(a.n1(), a.n2(), a.n3(), |i, j, k| a.get(i, j, k) + shift * ((i + 2 * j + 3 * k) % 3) as f64);
        let sa = shrink_d(&a, mu).unwrap();
        let sb = shrink_d(&b, mu).unwrap();
        let before = frobenius_norm(&a.sub(&b).unwrap());
        let after = frobenius_norm(&sa.sub(&sb).unwrap());
        prop_assert!(after <= before + 1e-9);
        prop_assert!(fourier_l21_norm(&sa) <= fourier_l21_norm(&a) + 1e-9);
    }

    #[test]
    fn reassembly_keeps_observed_entries_exactly(m in any_tensor(5), seed in any::<u64>()) {
        let (n1, n2, n3) = m.dims();
        let omega = ObservationMask::from_fn(n1, n2, n3, |i, j, k| (seed >> ((i + j + k) % 64)) & 1 == 1);
        let r = n1.min(n2);
        let l = RealTensor3::from_fn(n1, r, n3, |i, j, k| (i as f64 - j as f64) * 0.3 + k as f64);
        let d = identity_tensor(r, n3);
        let rr = RealTensor3::from_fn(r, n2, n3, |i, j, _| (i * j) as f64 * 0.1);
        let x = reassemble_x(&l, &d, &rr, &m, &omega).unwrap();
        for (idx, &obs) in omega.as_slice().iter().enumerate() {
            if obs {
                prop_assert_eq!(x.as_slice()[idx].to_bits(), m.as_slice()[idx].to_bits());
            }
        }
        prop_assert_eq!(mask_project(&x, &omega).unwrap(), mask_project(&m, &omega).unwrap());
    }

    #[test]
    fn dual_step_fixed_point(y in any_tensor(4), mu in 0.01..10.0f64) {
        let x = y.scale(2.0);
        let (next, mu_next) = dual_step(&y, mu, &x, &x, 1.5).unwrap();
        prop_assert_eq!(next, y);
        prop_assert!((mu_next - 1.5 * mu).abs() <= 1e-15 * mu);
    }

    #[test]
    fn rmse_is_a_scaled_distance(a in any_tensor(5)) {
        prop_assert_eq!(rmse(&a, &a).unwrap(), 0.0);
        let b = a.scale(-1.0);
        let want = 2.0 * frobenius_norm(&a) / (a.len() as f64).sqrt();
        prop_assert!((rmse(&a, &b).unwrap() - want).abs() <= 1e-12 * want.max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ctsvd_factors_are_orthogonal(a in tall(8), rank_frac in 0.0..1.0f64) {
        let p = a.n2();
        let r = 1 + ((p - 1) as f64 * rank_frac) as usize;
        let f = ctsvd_qr(&a, r, 10).unwrap();
        let n3 = a.n3();
        let ll = t_product(&conj_transpose(&f.l), &f.l).unwrap();
        let rr = t_product(&f.rr, &conj_transpose(&f.rr)).unwrap();
        prop_assert!(ll.max_abs_diff(&identity_tensor(r, n3)).unwrap() <= 1e-10);
        prop_assert!(rr.max_abs_diff(&identity_tensor(r, n3)).unwrap() <= 1e-10);
        if r == p {
            let rec = f.reconstruct().unwrap();
            prop_assert!(rec.max_abs_diff(&a).unwrap() <= 1e-9 * a.max_abs().max(1.0));
        }
    }
}
