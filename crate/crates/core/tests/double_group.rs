use dirac_double::group::{AlgebraVector, DualVector, GroupDescriptor, GroupElement, Side, Tag, DIM, DIM_HALF};
use dirac_double::linalg::{c, mat_exp, CMat2};
use dirac_double::sampler::Sampler;
use dirac_double::sl2c::{b_basis, descriptor, form, su2_basis};
use dirac_double::Error;
use proptest::prelude::*;

fn coords() -> impl Strategy<Value = [f64; DIM]> {
    prop::array::uniform6(-1.0f64..1.0)
}

fn group(d: &GroupDescriptor, x: [f64; DIM]) -> GroupElement {
    d.exp(&d.vector(x))
}

/// g X g⁻¹ expanded by hand, independent of the descriptor's Ad.
fn ad_matrix(g: &GroupElement, x: &AlgebraVector) -> CMat2 {
    g.matrix * *x.matrix() * g.matrix.inverse().unwrap()
}

proptest! {
    #[test]
    fn factorization_is_unique(x in coords(), y in coords()) {
        let d = descriptor();
        let gp = d.exp(&d.project(&d.vector(x), Side::Plus));
        let gm = d.exp(&d.project(&d.vector(y), Side::Minus));
        let (p, m) = d.factorize(&gp.compose(&gm)).unwrap();
        prop_assert!((p.matrix - gp.matrix).max_norm() <= 1e-10);
        prop_assert!((m.matrix - gm.matrix).max_norm() <= 1e-10);
        prop_assert_eq!(p.tag, Tag::Plus);
        prop_assert_eq!(m.tag, Tag::Minus);
    }

    #[test]
    fn projector_algebra(x in coords()) {
        let d = descriptor();
        let v = d.vector(x);
        let p = d.project(&v, Side::Plus);
        let m = d.project(&v, Side::Minus);
        prop_assert_eq!(*d.project(&p, Side::Plus).coords(), *p.coords());
        prop_assert!(d.project(&p, Side::Minus).coords().iter().all(|c| *c == 0.0));
        prop_assert_eq!(*(p + m).coords(), *v.coords());
    }

    #[test]
    fn adjoint_matches_conjugation(x in coords(), y in coords()) {
        let d = descriptor();
        let g = group(d, x);
        let v = d.vector(y);
        prop_assert!((*d.adj(&g, &v).matrix() - ad_matrix(&g, &v)).max_norm() <= 1e-12);
    }

    #[test]
    fn adjoint_is_an_action(x in coords(), y in coords(), z in coords()) {
        let d = descriptor();
        let (g, h) = (group(d, x), group(d, y));
        let v = d.vector(z);
        let lhs = d.adj(&g.compose(&h), &v);
        let rhs = d.adj(&g, &d.adj(&h, &v));
        prop_assert!((lhs - rhs).norm_inf() <= 1e-10);
    }

    #[test]
    fn ad_is_derivative_of_adjoint(x in coords(), y in coords()) {
        let d = descriptor();
        let (vx, vy) = (d.vector(x), d.vector(y));
        let t = 1e-5;
        let fd = (d.adj(&d.exp(&(vx * t)), &vy) - d.adj(&d.exp(&(vx * -t)), &vy)) * (0.5 / t);
        prop_assert!((fd - d.ad(&vx, &vy)).norm_inf() <= 1e-8);
    }

    #[test]
    fn form_is_ad_invariant(x in coords(), y in coords(), z in coords()) {
        let d = descriptor();
        let g = group(d, x);
        let (u, v) = (d.vector(y), d.vector(z));
        let lhs = d.form_vec(&d.adj(&g, &u), &d.adj(&g, &v));
        prop_assert!((lhs - d.form_vec(&u, &v)).abs() <= 1e-10);
    }

    #[test]
    fn coadjoint_defining_property(x in coords(), e in coords(), y in coords()) {
        let d = descriptor();
        let g = group(d, x);
        let eta = DualVector::new(e);
        let v = d.vector(y);
        let lhs = d.coadj(&g, &eta).pair(&v);
        let rhs = eta.pair(&d.adj(&g.inverse(), &v));
        prop_assert!((lhs - rhs).abs() <= 1e-10);
    }

    #[test]
    fn coad_defining_property_and_derivative(x in coords(), e in coords(), y in coords()) {
        let d = descriptor();
        let (vx, vy) = (d.vector(x), d.vector(y));
        let eta = DualVector::new(e);
        let lhs = d.coad(&vx, &eta).pair(&vy);
        prop_assert!((lhs + eta.pair(&d.ad(&vx, &vy))).abs() <= 1e-12);
        let t = 1e-5;
        let fd = (d.coadj(&d.exp(&(vx * t)), &eta) - d.coadj(&d.exp(&(vx * -t)), &eta)) * (0.5 / t);
        prop_assert!((fd - d.coad(&vx, &eta)).norm_inf() <= 1e-8);
    }

    #[test]
    fn flat_and_pairing(e in coords(), y in coords()) {
        let d = descriptor();
        let eta = DualVector::new(e);
        let v = d.vector(y);
        prop_assert!((d.form_vec(&d.flat(&eta), &v) - eta.pair(&v)).abs() <= 1e-12);
        prop_assert!((d.unflat(&d.flat(&eta)) - eta).norm_inf() <= 1e-15);
    }
}

#[test]
fn dressing_generator_relation() {
    // Ad_{g₊⁻¹}X₋ splits as the dressing velocity plus a Minus part
    let d = descriptor();
    let mut s = Sampler::new(11);
    for _ in 0..100 {
        let gp = d.exp(&d.project(&s.algebra(d), Side::Plus));
        let xm = d.project(&s.algebra(d), Side::Minus);
        let full = d.adj(&gp.inverse(), &xm);
        let gen = d.dressing_generator(&gp, &xm);
        let rest = full - gen;
        assert!(d.project(&rest, Side::Plus).norm_inf() <= 1e-10);
        assert!((rest - d.project(&full, Side::Minus)).norm_inf() <= 1e-10);
        // and the generator is the derivative of the dressing action
        let t = 1e-5;
        let fwd = d.dressing(&d.exp(&(xm * t)), &gp).unwrap();
        let bwd = d.dressing(&d.exp(&(xm * -t)), &gp).unwrap();
        let dm = (fwd.matrix - bwd.matrix).scale_re(0.5 / t);
        let body = gp.matrix.inverse().unwrap() * dm;
        assert!((body - *gen.matrix()).max_norm() <= 1e-8);
    }
}

#[test]
fn tangent_split_matches_factor_derivatives() {
    let d = descriptor();
    let mut s = Sampler::new(12);
    for _ in 0..20 {
        let g = s.group(d);
        let v = s.algebra(d);
        let split = d.tangent_split(&g, &v).unwrap();
        let t = 1e-5;
        let (pf, mf) = d.factorize(&g.compose(&d.exp(&(v * t))).full()).unwrap();
        let (pb, mb) = d.factorize(&g.compose(&d.exp(&(v * -t))).full()).unwrap();
        let (p0, m0) = d.factorize(&g).unwrap();
        let dp = p0.matrix.inverse().unwrap() * (pf.matrix - pb.matrix).scale_re(0.5 / t);
        let dm = m0.matrix.inverse().unwrap() * (mf.matrix - mb.matrix).scale_re(0.5 / t);
        assert!((dp - *split.plus_body.matrix()).max_norm() <= 1e-8);
        assert!((dm - *split.minus_body.matrix()).max_norm() <= 1e-8);
        assert!((split.x_plus + split.x_minus - v).norm_inf() <= 1e-15);
    }
}

#[test]
fn structure_constants_match_commutators() {
    let d = descriptor();
    for i in 0..DIM {
        for j in 0..DIM {
            let direct = d.basis()[i].commutator(&d.basis()[j]);
            let mut from_table = CMat2::zero();
            for (k, b) in d.basis().iter().enumerate() {
                from_table += b.scale_re(d.structure_constants(i, j)[k]);
            }
            assert!((direct - from_table).max_norm() <= 1e-14);
        }
    }
}

#[test]
fn characters() {
    let d = descriptor();
    assert!(d.is_character(&DualVector::zero()));
    // 𝐭³ vanishes on [𝔟, 𝔟] = span(T¹, T²)
    assert!(d.is_character(&DualVector::unit(DIM_HALF + 2)));
    assert!(!d.is_character(&DualVector::unit(DIM_HALF)));
    assert!(matches!(d.check_character(&DualVector::unit(DIM_HALF + 1)), Err(Error::NotCharacter { .. })));
}

fn factor_ok(_: &CMat2) -> dirac_double::Result<(CMat2, CMat2)> {
    Err(Error::NotFactorizable)
}

fn always(_: &CMat2, _: f64) -> bool {
    true
}

#[test]
fn descriptor_rejects_bad_bases() {
    let (p, m) = (su2_basis(), b_basis());
    let mut traced = m;
    traced[2] = CMat2::identity();
    assert!(GroupDescriptor::new("bad", p, traced, form, factor_ok, always, always).is_err());
    // T¹ swapped for i·T₃ (proportional to T³): the pairing degenerates
    let mut mixed = m;
    mixed[0] = p[2].scale(c(0., 1.));
    assert!(GroupDescriptor::new("bad", p, mixed, form, factor_ok, always, always).is_err());
    assert!(GroupDescriptor::new("ok", p, m, form, factor_ok, always, always).is_ok());
}

#[test]
fn group_element_requires_unit_determinant() {
    let m = CMat2::from_real(2.0, 0.0, 0.0, 1.0);
    assert!(matches!(GroupElement::new(m, Tag::Full), Err(Error::NotUnimodular { .. })));
    let e = mat_exp(&su2_basis()[0]);
    assert!(GroupElement::new(e, Tag::Plus).is_ok());
}
