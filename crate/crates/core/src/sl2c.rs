//! SL(2,C) = SU(2)·B with B the upper triangular matrices with positive real diagonal.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{AlgebraVector, DualVector, GroupDescriptor, GroupElement, Tag, DIM_HALF};
use crate::linalg::{c, CMat2, C64};

/// Basis of 𝔰𝔲₂: T₁, T₂, T₃.
pub fn su2_basis() -> [CMat2; 3] {
    let z = c(0., 0.);
    [
        CMat2::new(z, c(0., 1.), c(0., 1.), z),
        CMat2::new(z, c(1., 0.), c(-1., 0.), z),
        CMat2::new(c(0., 1.), z, z, c(0., -1.)),
    ]
}

/// Basis of 𝔟: T¹, T², T³.
pub fn b_basis() -> [CMat2; 3] {
    let z = c(0., 0.);
    [CMat2::new(z, c(-1., 0.), z, z), CMat2::new(z, c(0., 1.), z, z), CMat2::new(c(-0.5, 0.), z, z, c(0.5, 0.))]
}

/// κ(X, Y) = 4 tr(XY)
pub fn kappa(x: &CMat2, y: &CMat2) -> C64 {
    (*x * *y).trace() * 4.0
}

/// (X, Y) = −¼ Im κ(X, Y) = −Im tr(XY)
pub fn form(x: &CMat2, y: &CMat2) -> f64 {
    -0.25 * kappa(x, y).im
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IwasawaFactors {
    pub alpha: C64,
    pub beta: C64,
    pub a: f64,
    pub z: C64,
}

impl IwasawaFactors {
    /// (α β; −β̄ ᾱ)
    pub fn su2_part(&self) -> CMat2 {
        CMat2::new(self.alpha, self.beta, -self.beta.conj(), self.alpha.conj())
    }

    /// (a z; 0 1/a)
    pub fn b_part(&self) -> CMat2 {
        CMat2::new(c(self.a, 0.), self.z, c(0., 0.), c(1. / self.a, 0.))
    }

    pub fn plus(&self) -> GroupElement {
        GroupElement { matrix: self.su2_part(), tag: Tag::Plus }
    }

    pub fn minus(&self) -> GroupElement {
        GroupElement { matrix: self.b_part(), tag: Tag::Minus }
    }
}

/// Gram–Schmidt on the columns: the normalized first column fixes the SU(2)
/// factor, the remainder is upper triangular with diagonal (a, 1/a), a > 0.
pub fn iwasawa(g: &CMat2) -> Result<IwasawaFactors> {
    if !g.is_finite() {
        return Err(Error::DegenerateInput("non-finite entry"));
    }
    let defect = (g.det() - 1.0).norm();
    if defect > 1e-10 {
        return Err(Error::NotUnimodular { defect });
    }
    let (c0, c1) = (g.get(0, 0), g.get(1, 0));
    let a = (c0.norm_sqr() + c1.norm_sqr()).sqrt();
    if a < 1e-12 {
        return Err(Error::DegenerateInput("first column has vanishing norm"));
    }
    let (u0, u1) = (c0 / a, c1 / a);
    // g₊ = (u0, -ū1; u1, ū0), g₋ = g₊† g
    let z = u0.conj() * g.get(0, 1) + u1.conj() * g.get(1, 1);
    Ok(IwasawaFactors { alpha: u0, beta: -u1.conj(), a, z })
}

fn factorizer(g: &CMat2) -> Result<(CMat2, CMat2)> {
    let f = iwasawa(g)?;
    Ok((f.su2_part(), f.b_part()))
}

fn in_su2(m: &CMat2, tol: f64) -> bool {
    (*m * m.adjoint() - CMat2::identity()).max_norm() <= tol && (m.det() - 1.0).norm() <= tol
}

fn in_b(m: &CMat2, tol: f64) -> bool {
    let (a, d) = (m.get(0, 0), m.get(1, 1));
    m.get(1, 0).norm() <= tol
        && a.im.abs() <= tol
        && d.im.abs() <= tol
        && a.re > 0.0
        && (a.re * d.re - 1.0).abs() <= tol
}

pub fn unitarity_defect(m: &CMat2) -> f64 {
    (*m * m.adjoint() - CMat2::identity()).max_norm()
}

pub fn build_descriptor() -> Result<GroupDescriptor> {
    GroupDescriptor::new("sl2c", su2_basis(), b_basis(), form, factorizer, in_su2, in_b)
}

/// Shared descriptor for the SL(2,C) instance.
pub fn descriptor() -> &'static GroupDescriptor {
    static D: OnceLock<GroupDescriptor> = OnceLock::new();
    D.get_or_init(|| build_descriptor().expect("sl2c descriptor is valid"))
}

/// ψ: 𝔰𝔲₂ → 𝔟*, Tₐ ↦ 𝐭ᵃ.
pub fn psi(x: &AlgebraVector) -> DualVector {
    let c = x.coords();
    DualVector::from_blocks([0.0; 3], [c[0], c[1], c[2]])
}

/// ψ⁻¹: 𝔟* → 𝔰𝔲₂.
pub fn psi_inv(d: &GroupDescriptor, xi: &DualVector) -> AlgebraVector {
    let mut coords = [0.0; 6];
    coords[..DIM_HALF].copy_from_slice(&xi.coords[DIM_HALF..]);
    d.vector(coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iwasawa_of_identity() {
        let f = iwasawa(&CMat2::identity()).unwrap();
        assert_eq!(f.su2_part(), CMat2::identity());
        assert_eq!(f.b_part(), CMat2::identity());
    }

    #[test]
    fn iwasawa_of_triangular() {
        let gm = CMat2::new(c(2., 0.), c(1., 1.), c(0., 0.), c(0.5, 0.));
        let f = iwasawa(&gm).unwrap();
        assert!((f.su2_part() - CMat2::identity()).max_norm() < 1e-15);
        assert!((f.b_part() - gm).max_norm() < 1e-15);
    }

    #[test]
    fn kappa_t3() {
        let t3 = su2_basis()[2];
        assert_eq!(kappa(&t3, &t3), c(-8., 0.));
    }

    #[test]
    fn non_unimodular_rejected() {
        let m = CMat2::from_real(2., 0., 0., 2.);
        assert!(matches!(iwasawa(&m), Err(Error::NotUnimodular { .. })));
    }
}
