use dirac_double::linalg::{c, invert, mat_exp, null_space, numerical_rank, solve_linear, CMat2, RealMatrix};
use dirac_double::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cmat() -> impl Strategy<Value = CMat2> {
    prop::array::uniform8(-1.0f64..1.0)
        .prop_map(|v| CMat2::new(c(v[0], v[1]), c(v[2], v[3]), c(v[4], v[5]), c(v[6], v[7])))
}

/// Truncated Taylor series as an independent reference.
fn series_exp(m: &CMat2) -> CMat2 {
    let mut term = CMat2::identity();
    let mut sum = CMat2::identity();
    for k in 1..60 {
        term = (term * *m).scale_re(1.0 / k as f64);
        sum += term;
    }
    sum
}

proptest! {
    #[test]
    fn exp_inverse_pair(m in cmat()) {
        // entries in [-1, 1] keep the max-norm at or below 2 up to scaling
        let m = m.scale_re(2.0 / m.max_norm().max(1.0));
        let p = mat_exp(&m) * mat_exp(&-m);
        prop_assert!((p - CMat2::identity()).max_norm() <= 1e-10);
    }

    #[test]
    fn exp_determinant(m in cmat()) {
        let m = m.scale_re(2.0);
        let lhs = mat_exp(&m).det();
        let rhs = m.trace().exp();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1.0));
    }

    #[test]
    fn exp_matches_series(m in cmat()) {
        let e = mat_exp(&m);
        prop_assert!((e - series_exp(&m)).max_norm() <= 1e-12);
    }

    #[test]
    fn traceless_exp_is_unimodular(m in cmat()) {
        let tr = m.trace() * 0.5;
        let m0 = m - CMat2::identity().scale(tr);
        prop_assert!((mat_exp(&m0).det() - 1.0).norm() <= 1e-12);
    }
}

#[test]
fn solve_random_well_conditioned_systems() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=8);
        // diagonally dominant, hence well conditioned
        let mut a = RealMatrix::zeros(n, n);
        for i in 0..n {
            let mut off = 0.0;
            for j in 0..n {
                if i != j {
                    a[(i, j)] = rng.gen_range(-1.0..1.0);
                    off += f64::abs(a[(i, j)]);
                }
            }
            a[(i, i)] = (off + 1.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        }
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = solve_linear(&a, &b).unwrap();
        let r = a.mul_vec(&x);
        let res = r.iter().zip(&b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        assert!(res <= 1e-12, "residual {res}");
    }
}

#[test]
fn inverse_times_matrix_is_identity() {
    let a = RealMatrix::from_rows(&[vec![0.0, 2.0, 1.0], vec![1.0, 0.0, 0.0], vec![3.0, 1.0, 4.0]]);
    let inv = invert(&a).unwrap();
    let p = a.matmul(&inv);
    assert!((0..3).all(|i| (0..3).all(|j| (p[(i, j)] - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14)));
}

#[test]
fn singular_system_is_rejected() {
    let a = RealMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
    assert!(matches!(solve_linear(&a, &[1.0, 1.0]), Err(Error::SingularMatrix { .. })));
}

#[test]
fn rank_and_kernel() {
    let a = RealMatrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]]);
    assert_eq!(numerical_rank(&a, 1e-12), 1);
    let ns = null_space(&a, 1e-12);
    assert_eq!(ns.len(), 2);
    for v in &ns {
        assert!(a.mul_vec(v).iter().all(|x| x.abs() < 1e-13));
    }
}
