use dirac_double::dirac::*;
use dirac_double::group::{Side, DIM, DIM_HALF};
use dirac_double::linalg::{CMat2, RealMatrix};
use dirac_double::sampler::Sampler;
use dirac_double::sl2c::descriptor;
use proptest::prelude::*;

/// Point on a level set whose Minus block is a character.
fn on_level(s: &mut Sampler) -> PhasePoint {
    let c = s.uniform(-1.0, 1.0);
    s.point_with_minus(descriptor(), [0.0, 0.0, c])
}

fn fields() -> Vec<ScalarField> {
    let d = descriptor();
    let mut out = coordinate_fields(d);
    for side in [Side::Plus, Side::Minus] {
        for (i, j) in [(0, 0), (0, 1), (1, 1)] {
            for which in [Part::Re, Part::Im] {
                out.push(factor_entry_field(d, side, i, j, which));
            }
        }
    }
    for k in 0..DIM {
        out.push(momentum_fn(d, d.basis_vector(k)));
    }
    out
}

/// Moves p along the tangent vector v for time t: (g·exp(t v), η + t η̇).
fn flow_along(p: &PhasePoint, v: &TangentVector, t: f64) -> PhasePoint {
    let d = descriptor();
    let g = p.g.compose(&d.exp(&(v.body_velocity * t)));
    PhasePoint::new(d, g, p.eta + v.eta_dot * t).unwrap()
}

fn diff_gap(a: &Diff, b: &Diff) -> f64 {
    (a.bold_d - b.bold_d).norm_inf().max((a.delta - b.delta).norm_inf())
}

#[test]
fn analytic_differentials_match_finite_differences() {
    let d = descriptor();
    let mut s = Sampler::new(11);
    for _ in 0..10 {
        let p = s.point(d);
        for f in fields() {
            assert!(f.is_analytic(), "{}", f.name);
            let gap = diff_gap(&f.differential(d, &p), &f.fd_differential(d, &p, FD_STEP));
            assert!(gap < 1e-7, "{}: {gap:e}", f.name);
        }
    }
}

#[test]
fn hamiltonian_fields_differentiate_along_curves() {
    let d = descriptor();
    let mut s = Sampler::new(12);
    let fs = fields();
    for trial in 0..20 {
        let p = on_level(&mut s);
        let f = &fs[trial % fs.len()];
        let g = &fs[(7 * trial + 3) % fs.len()];
        let h = 1e-5;
        let vn = ham_vf_n(d, f, &p);
        let along = (g.eval(&flow_along(&p, &vn, h)) - g.eval(&flow_along(&p, &vn, -h))) / (2.0 * h);
        let bracket = dirac_bracket_n(d, g, f, &p);
        assert!((along - bracket).abs() < 1e-6, "N {} {}: {along} vs {bracket}", g.name, f.name);
        let vm = ham_vf_m(d, f, &p);
        let along = (g.eval(&flow_along(&p, &vm, h)) - g.eval(&flow_along(&p, &vm, -h))) / (2.0 * h);
        let bracket = dirac_bracket_m(d, g, f, &p);
        assert!((along - bracket).abs() < 1e-6, "M {} {}: {along} vs {bracket}", g.name, f.name);
    }
}

#[test]
fn constraint_functions_are_casimirs() {
    let d = descriptor();
    let mut s = Sampler::new(13);
    let fs = fields();
    for _ in 0..5 {
        let p = on_level(&mut s);
        for f in &fs {
            let vn = ham_vf_n(d, f, &p);
            let vm = ham_vf_m(d, f, &p);
            // Ψ and Υ are constant along every Dirac Hamiltonian flow
            let qn = flow_along(&p, &vn, 1e-3);
            let qm = flow_along(&p, &vm, 1e-3);
            assert!((qn.g_minus.matrix - p.g_minus.matrix).max_norm() < 1e-12, "{}", f.name);
            assert!((qn.eta.minus() - p.eta.minus()).norm_inf() < 1e-12, "{}", f.name);
            assert!((qm.g_plus.matrix - p.g_plus.matrix).max_norm() < 1e-12, "{}", f.name);
            assert!((qm.eta.plus() - p.eta.plus()).norm_inf() < 1e-12, "{}", f.name);
        }
    }
}

#[test]
fn m_bracket_is_canonical_on_the_minus_factor() {
    let d = descriptor();
    let mut s = Sampler::new(14);
    for _ in 0..5 {
        let p = s.point(d);
        for a in 0..DIM_HALF {
            let xa = xi_field(d, DIM_HALF + a);
            let ta = d.basis_vector(DIM_HALF + a);
            let expected: CMat2 = p.g_minus.matrix * *ta.matrix();
            for i in 0..2 {
                for j in 0..2 {
                    let re = factor_entry_field(d, Side::Minus, i, j, Part::Re);
                    let im = factor_entry_field(d, Side::Minus, i, j, Part::Im);
                    let z = expected.get(i, j);
                    assert!((dirac_bracket_m(d, &xa, &re, &p) + z.re).abs() < 1e-12);
                    assert!((dirac_bracket_m(d, &xa, &im, &p) + z.im).abs() < 1e-12);
                }
            }
            for b in 0..DIM_HALF {
                let xb = xi_field(d, DIM_HALF + b);
                let expected = -p.eta.pair(&d.ad(&ta, &d.basis_vector(DIM_HALF + b)));
                assert!((dirac_bracket_m(d, &xa, &xb, &p) - expected).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn minus_momenta_generate_dressing() {
    let d = descriptor();
    let mut s = Sampler::new(15);
    for _ in 0..10 {
        let p = on_level(&mut s);
        for a in 0..DIM_HALF {
            let x = d.basis_vector(DIM_HALF + a);
            let v = ham_vf_n(d, &momentum_fn(d, x), &p);
            let plus_body = d.project(&d.adj(&p.g_minus, &v.body_velocity), Side::Plus);
            let dressing = d.dressing_generator(&p.g_plus, &x);
            assert!((plus_body - dressing).norm_inf() < 1e-12);
            assert!(v.max_gap(&momentum_generator_n(d, &x, &p)) < 1e-12);
        }
    }
}

#[test]
fn induced_action_on_n() {
    let d = descriptor();
    let mut s = Sampler::new(16);
    for _ in 0..20 {
        let p = on_level(&mut s);
        let (h1, h2) = (s.group(d), s.group(d));
        let stepwise = g_action_n(d, &h1, &g_action_n(d, &h2, &p).unwrap()).unwrap();
        let direct = g_action_n(d, &h1.compose(&h2), &p).unwrap();
        assert!((stepwise.g.matrix - direct.g.matrix).max_norm() < 1e-10);
        assert!((stepwise.eta - direct.eta).norm_inf() < 1e-10);
        assert_eq!(direct.g_minus, p.g_minus);
        assert!((direct.eta.minus() - p.eta.minus()).norm_inf() < 1e-12);
    }
}

#[test]
fn induced_action_on_m() {
    let d = descriptor();
    let mut s = Sampler::new(17);
    for _ in 0..20 {
        let p = s.point(d);
        let (h1, h2) = (s.group(d), s.group(d));
        let stepwise = g_action_m(d, &h1, &g_action_m(d, &h2, &p).unwrap()).unwrap();
        let direct = g_action_m(d, &h1.compose(&h2), &p).unwrap();
        assert!((stepwise.g.matrix - direct.g.matrix).max_norm() < 1e-10);
        assert!((stepwise.eta - direct.eta).norm_inf() < 1e-10);
        assert_eq!(direct.g_plus, p.g_plus);
    }
}

#[test]
fn constraints_are_second_class() {
    let d = descriptor();
    let mut s = Sampler::new(18);
    for _ in 0..20 {
        let p = s.point(d);
        for fiber in [Fiber::N, Fiber::M] {
            assert!(second_class_check(d, &p, fiber));
            let closed = dirac_matrix(d, &p, fiber);
            let direct = dirac_matrix_from_brackets(d, &p, fiber);
            let gap = RealMatrix::from_fn(DIM, DIM, |i, j| closed[(i, j)] - direct[(i, j)]).max_norm();
            assert!(gap < 1e-12, "{fiber:?}: {gap:e}");
        }
    }
}

#[test]
fn closed_form_brackets_agree_with_the_general_construction() {
    let d = descriptor();
    let mut s = Sampler::new(19);
    let fs = fields();
    let p = on_level(&mut s);
    for (i, f) in fs.iter().enumerate().step_by(3) {
        for g in fs.iter().skip(i % 5).step_by(4) {
            let n = dirac_bracket_general(d, f, g, &p, Fiber::N).unwrap();
            let m = dirac_bracket_general(d, f, g, &p, Fiber::M).unwrap();
            assert!((n - dirac_bracket_n(d, f, g, &p)).abs() < 1e-10, "{} {}", f.name, g.name);
            assert!((m - dirac_bracket_m(d, f, g, &p)).abs() < 1e-10, "{} {}", f.name, g.name);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn brackets_are_antisymmetric(seed in any::<u64>(), i in 0usize..32, j in 0usize..32) {
        let d = descriptor();
        let mut s = Sampler::new(seed);
        let p = s.point(d);
        let fs = fields();
        let (f, g) = (&fs[i % fs.len()], &fs[j % fs.len()]);
        for bracket in [dirac_bracket_n, dirac_bracket_m, canonical_bracket] {
            let sum = bracket(d, f, g, &p) + bracket(d, g, f, &p);
            prop_assert!(sum.abs() < 1e-12 * (1.0 + bracket(d, f, g, &p).abs()));
        }
    }
}
