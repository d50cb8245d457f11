//! Hand-written closed forms for SL(2,C) = SU(2)·B in the coordinates
//! g₊ = (α β; −β̄ ᾱ), g₋ = (a z; 0 1/a) with z = b + ic.
//!
//! Everything here is written out by hand and serves as an oracle for the
//! generic engine.

use serde::{Deserialize, Serialize};

use crate::dirac::{PhasePoint, TangentVector};
use crate::error::{Error, Result};
use crate::group::{AlgebraVector, DualVector, GroupDescriptor, GroupElement, Side, Tag};
use crate::linalg::{c, null_space, solve_linear, CMat2, RealMatrix, C64};
use crate::sl2c::{b_basis, iwasawa, kappa, su2_basis};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sl2Coordinates {
    pub alpha: C64,
    pub beta: C64,
    pub a: f64,
    pub z: C64,
    pub eta_plus: [f64; 3],
    pub eta_minus: [f64; 3],
}

impl Sl2Coordinates {
    pub fn from_point(p: &PhasePoint) -> Result<Self> {
        let f = iwasawa(&p.g.matrix)?;
        let e = &p.eta.coords;
        Ok(Self {
            alpha: f.alpha,
            beta: f.beta,
            a: f.a,
            z: f.z,
            eta_plus: [e[0], e[1], e[2]],
            eta_minus: [e[3], e[4], e[5]],
        })
    }

    pub fn b(&self) -> f64 {
        self.z.re
    }

    pub fn c(&self) -> f64 {
        self.z.im
    }

    pub fn g_plus(&self) -> CMat2 {
        CMat2::new(self.alpha, self.beta, -self.beta.conj(), self.alpha.conj())
    }

    pub fn g_minus(&self) -> CMat2 {
        CMat2::new(c(self.a, 0.), self.z, c(0., 0.), c(1. / self.a, 0.))
    }

    pub fn to_point(&self) -> PhasePoint {
        let gp = GroupElement { matrix: self.g_plus(), tag: Tag::Plus };
        let gm = GroupElement { matrix: self.g_minus(), tag: Tag::Minus };
        PhasePoint::from_factors(gp, gm, DualVector::from_blocks(self.eta_plus, self.eta_minus))
    }
}

fn combo(coeffs: [f64; 6]) -> CMat2 {
    let (t, u) = (su2_basis(), b_basis());
    let mut m = CMat2::zero();
    for k in 0..3 {
        m += t[k].scale_re(coeffs[k]) + u[k].scale_re(coeffs[3 + k]);
    }
    m
}

/// Coordinates of Ad_{g₋⁻¹}Π₊Ad_{g₋}Tₐ, with e = 1 − b²/a² − c²/a² − 1/a⁴:
/// T₁ − e T² − 2(c/a) T³,  T₂ + e T¹ − 2(b/a) T³,  T₃ + 2(c/a) T¹ + 2(b/a) T².
pub fn projected_generator_coords(a: f64, b: f64, c: f64) -> [[f64; 6]; 3] {
    let e = 1.0 - b * b / (a * a) - c * c / (a * a) - 1.0 / a.powi(4);
    [[1., 0., 0., 0., -e, -2. * c / a], [0., 1., 0., e, 0., -2. * b / a], [0., 0., 1., 2. * c / a, 2. * b / a, 0.]]
}

pub fn explicit_projected_generators(d: &GroupDescriptor, a: f64, b: f64, c: f64) -> [AlgebraVector; 3] {
    projected_generator_coords(a, b, c).map(|x| d.vector(x))
}

/// Nontrivial Dirac brackets on N(g₋, η₋).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExplicitBrackets {
    /// {ξₐ, g_ij} as a complex matrix
    pub xi_t: [CMat2; 3],
    /// {ξₐ, ξ_b}
    pub xi_xi: [[f64; 3]; 3],
}

pub fn explicit_fundamental_brackets(p: &Sl2Coordinates) -> ExplicitBrackets {
    let (a, b, c) = (p.a, p.b(), p.c());
    let g = p.g_plus() * p.g_minus();
    let q = projected_generator_coords(a, b, c);
    let xi_t = [0, 1, 2].map(|k| -(g * combo(q[k])));
    let [x1, x2, x3] = p.eta_plus;
    let [y1, y2, y3] = p.eta_minus;
    let (a2, a4) = (a * a, a.powi(4));
    let s = 1.0 + b * b / a2 + c * c / a2 + 1.0 / a4;
    let x12 = 2.0 * (b * b / a2 + c * c / a2 + 1.0 / a4) * x3 - 2.0 * (b / a) * x1
        + 2.0 * (c / a) * x2
        + 2.0 * (c / a) * s * y1
        + 2.0 * (b / a) * s * y2;
    let x13 = -2.0 * x2 - 2.0 * (c / a) * x3 + 2.0 * (b * b / a2 - c * c / a2 + 1.0 / a4 - 1.0) * y1
        - 4.0 * (b * c / a2) * y2
        + 4.0 * (b / a) * y3;
    let x23 = 2.0 * x1 - 2.0 * (b / a) * x3 - 4.0 * (b * c / a2) * y1
        + 2.0 * (c * c / a2 - b * b / a2 + 1.0 / a4 - 1.0) * y2
        - 4.0 * (c / a) * y3;
    ExplicitBrackets { xi_t, xi_xi: [[0.0, x12, x13], [-x12, 0.0, x23], [-x13, -x23, 0.0]] }
}

/// {ξₐ, ξ_b} when η₋ = 0:
/// {ξ₁,ξ₂} = 2(b²/a² + c²/a² + 1/a⁴)ξ₃ − 2(b/a)ξ₁ + 2(c/a)ξ₂,
/// {ξ₃,ξ₁} = 2ξ₂ + 2(c/a)ξ₃,  {ξ₂,ξ₃} = 2ξ₁ − 2(b/a)ξ₃.
pub fn character_brackets(p: &Sl2Coordinates) -> [[f64; 3]; 3] {
    let (a, b, c) = (p.a, p.b(), p.c());
    let [x1, x2, x3] = p.eta_plus;
    let x12 =
        2.0 * (b * b / (a * a) + c * c / (a * a) + 1.0 / a.powi(4)) * x3 - 2.0 * (b / a) * x1 + 2.0 * (c / a) * x2;
    let x31 = 2.0 * x2 + 2.0 * (c / a) * x3;
    let x23 = 2.0 * x1 - 2.0 * (b / a) * x3;
    [[0.0, x12, -x31], [-x12, 0.0, x23], [x31, -x23, 0.0]]
}

/// The momentum functions φᵃ = ⟨coAd(g, η₊), Tᵃ⟩ as complex numbers (the
/// imaginary parts vanish).
pub fn phi_explicit_complex(p: &Sl2Coordinates) -> [C64; 3] {
    let (al, be, a, z) = (p.alpha, p.beta, p.a, p.z);
    let (ab, bb, zb) = (al.conj(), be.conj(), z.conj());
    let [e1, e2, e3] = p.eta_plus.map(|x| c(x, 0.));
    let i = c(0., 1.);
    let a2 = a * a;
    let p1 = i * 0.5 * a2 * (be * be - bb * bb) * e1 - (be * be + bb * bb) * 0.5 * a2 * e2
        + i * 0.5 * (al * be - ab * bb - zb * be * be * a + z * bb * bb * a) * e3;
    let p2 = -(be * be + bb * bb) * 0.5 * a2 * e1 - i * 0.5 * a2 * (be * be - bb * bb) * e2
        + (zb * be * be * a + z * bb * bb * a - ab * bb - al * be) * 0.5 * e3;
    let p3 = -i * 0.5 * a2 * (ab * be - al * bb) * e1
        + (al * bb + ab * be) * 0.5 * a2 * e2
        + i * 0.5 * a * (zb * ab * be - z * al * bb) * e3;
    [p1, p2, p3]
}

pub fn phi_explicit(p: &Sl2Coordinates) -> [f64; 3] {
    phi_explicit_complex(p).map(|z| z.re)
}

/// H = ½ Σ (φᵃ)².
pub fn example_hamiltonian(p: &Sl2Coordinates) -> f64 {
    0.5 * phi_explicit(p).iter().map(|x| x * x).sum::<f64>()
}

/// Same value as −(1/16) κ(Π₊Ad_g ψ̄(η₊), Π₊Ad_g ψ̄(η₊)).
pub fn example_hamiltonian_kappa(d: &GroupDescriptor, p: &PhasePoint) -> f64 {
    let x = d.project(&d.adj(&p.g, &d.flat(&p.eta.plus())), Side::Plus);
    -kappa(x.matrix(), x.matrix()).re / 16.0
}

/// κ̂: 𝔤₊ → 𝔤₊*, ⟨κ̂(X), Y⟩ = κ(X, Y).
fn kappa_hat(x: &AlgebraVector) -> DualVector {
    let t = su2_basis();
    let mut out = [0.0; 6];
    for (k, tk) in t.iter().enumerate() {
        out[k] = kappa(x.matrix(), tk).re;
    }
    DualVector::new(out)
}

/// Hamilton equations of H = ½Σ(φᵃ)² on N(g₋, 0): with
/// Y = ψ̄*(κ̂(Π₊Ad_g ψ̄(η₊))),
///   g₊⁻¹ġ₊ = −(1/8) Π₊Ad_{g₊⁻¹} Y,
///   η̇₊ = coAd(g₋⁻¹, (1/8) Π₊ ad*_{Π₋Ad_{g₊⁻¹}Y} coAd(g₋, η₊)),
/// with ad*_X = −coad(X, ·). The body velocity of g is Ad_{g₋⁻¹}(g₊⁻¹ġ₊).
pub fn example_hamilton_eqs(d: &GroupDescriptor, p: &PhasePoint) -> Result<TangentVector> {
    if p.eta.minus().norm_inf() > 1e-12 {
        return Err(Error::DegenerateInput("the example equations assume eta_minus = 0"));
    }
    let x = d.project(&d.adj(&p.g, &d.flat(&p.eta.plus())), Side::Plus);
    let y = d.flat(&kappa_hat(&x));
    let gpi = p.g_plus.inverse();
    let ay = d.adj(&gpi, &y);
    let vplus = d.project(&ay, Side::Plus) * (-1.0 / 8.0);
    let ad_star = -d.coad(&d.project(&ay, Side::Minus), &d.coadj(&p.g_minus, &p.eta.plus()));
    let eta_dot = d.coadj(&p.g_minus.inverse(), &(ad_star.plus() * (1.0 / 8.0)));
    Ok(TangentVector { body_velocity: d.adj(&p.g_minus.inverse(), &vplus), eta_dot })
}

fn beta_guard(p: &Sl2Coordinates) -> Result<f64> {
    let nb = p.beta.norm_sqr();
    if p.beta.norm() < 1e-10 {
        return Err(Error::SingularConfiguration { beta_norm: p.beta.norm() });
    }
    Ok(nb)
}

/// The entries m, n of K, as complex numbers (their imaginary parts vanish).
pub fn metric_mn(p: &Sl2Coordinates) -> Result<(C64, C64)> {
    let nb = beta_guard(p)?;
    let (al, be, a, z) = (p.alpha, p.beta, p.a, p.z);
    let (ab, bb, zb) = (al.conj(), be.conj(), z.conj());
    let den = 2.0 * a * a * nb;
    let m = ((be * ab + al * bb) * (a * a - 1.0) + (zb + z) * a * nb) / den;
    let n = c(0., 1.) * ((al * bb - be * ab) * (1.0 - a * a) + (z - zb) * a * nb) / den;
    Ok((m, n))
}

/// K = (1/2|β|²)[[1, 0, m], [0, 1, n], [m, n, 1]] in the basis T₁, T₂, T₃.
pub fn metric_k(p: &Sl2Coordinates) -> Result<[[f64; 3]; 3]> {
    let nb = beta_guard(p)?;
    let (m, n) = metric_mn(p)?;
    let s = 1.0 / (2.0 * nb);
    Ok([[s, 0.0, s * m.re], [0.0, s, s * n.re], [s * m.re, s * n.re, s]])
}

/// Coefficients of 𝔸 on T₁, T₂, T₃ with γ = −β̄, δ = ᾱ. They are complex.
pub fn vector_a(p: &Sl2Coordinates) -> [C64; 3] {
    let (al, be, a, z) = (p.alpha, p.beta, p.a, p.z);
    let (ab, zb) = (al.conj(), z.conj());
    let ga = -be.conj();
    let u = be * (z * ga * a - ab);
    let w = ga * (zb * be * a - al);
    [c(0., 1. / 8.) * (u + w), -(u - w) / 8.0, be * ga * (a * a / 4.0)]
}

fn su2_matrix(coeffs: [C64; 3]) -> CMat2 {
    let t = su2_basis();
    t[0].scale(coeffs[0]) + t[1].scale(coeffs[1]) + t[2].scale(coeffs[2])
}

/// Ω(v) = κ(𝔸, v) for a velocity v ∈ 𝔰𝔲₂.
pub fn constraint_omega(p: &Sl2Coordinates, v: &AlgebraVector) -> C64 {
    kappa(&su2_matrix(vector_a(p)), v.matrix())
}

/// L = −(1/8) κ(v, K v + λ𝔸) for v ∈ 𝔰𝔲₂.
pub fn lagrangian_eval(p: &Sl2Coordinates, v: &AlgebraVector, lambda: f64) -> Result<C64> {
    let k = metric_k(p)?;
    let x = v.coords();
    let kv: [C64; 3] = std::array::from_fn(|i| c((0..3).map(|j| k[i][j] * x[j]).sum(), 0.));
    let a = vector_a(p);
    let rhs = su2_matrix(std::array::from_fn(|i| kv[i] + a[i] * lambda));
    Ok(kappa(v.matrix(), &rhs) * (-1.0 / 8.0))
}

/// Linear map η₊ ↦ g₊⁻¹ġ₊ (𝔰𝔲₂ coordinates) of the first Hamilton equation,
/// built from the generic engine: g₊⁻¹ġ₊ = Π₊Ad_{g₊⁻¹}(Σ φᵃ Tᵃ).
pub fn velocity_map(d: &GroupDescriptor, p: &PhasePoint) -> RealMatrix {
    let mut m = RealMatrix::zeros(3, 3);
    for k in 0..3 {
        let v = plus_velocity(d, p, &DualVector::unit(k));
        for i in 0..3 {
            m[(i, k)] = v.coords()[i];
        }
    }
    m
}

/// g₊⁻¹ġ₊ for momentum η₊ at the configuration of p.
pub fn plus_velocity(d: &GroupDescriptor, p: &PhasePoint, eta_plus: &DualVector) -> AlgebraVector {
    let phi = d.coadj(&p.g, &eta_plus.plus());
    let mut y = [0.0; 6];
    y[3..].copy_from_slice(&phi.coords[3..]);
    d.project(&d.adj(&p.g_plus.inverse(), &d.vector(y)), Side::Plus)
}

/// Result of inverting the velocity map and comparing energies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoundTrip {
    pub eta_plus: [f64; 3],
    /// ‖V η̂ − v‖∞
    pub velocity_residual: f64,
    /// |L(v, 0) + H(η̂) − ⟨η̂, v⟩|
    pub energy_residual: f64,
}

impl RoundTrip {
    pub fn residual(&self) -> f64 {
        self.velocity_residual.max(self.energy_residual)
    }
}

/// Recovers η₊ from a velocity v in the range of the velocity map and checks
/// the Legendre identity L(v, 0) = ⟨η₊, v⟩ − H.
///
/// The map has rank two (one momentum direction does not move g₊), so the
/// solve uses V + k kᵀ with k spanning its kernel.
pub fn legendre_round_trip(d: &GroupDescriptor, p: &PhasePoint, v: &AlgebraVector) -> Result<RoundTrip> {
    let coords = Sl2Coordinates::from_point(p)?;
    let vm = velocity_map(d, p);
    let ns = null_space(&vm, 1e-9);
    if ns.len() != 1 {
        return Err(Error::DegenerateInput("velocity map does not have rank two"));
    }
    let k = &ns[0];
    let nk = k.iter().map(|x| x * x).sum::<f64>().sqrt();
    let scale = vm.max_norm();
    let a = RealMatrix::from_fn(3, 3, |i, j| vm[(i, j)] + scale * k[i] * k[j] / (nk * nk));
    let x = v.coords();
    let eta = solve_linear(&a, &[x[0], x[1], x[2]])?;
    let eta_hat = DualVector::from_blocks([eta[0], eta[1], eta[2]], [0.0; 3]);
    let back = vm.mul_vec(&eta);
    let velocity_residual = (0..3).map(|i| (back[i] - x[i]).abs()).fold(0.0, f64::max);
    let mut at = coords;
    at.eta_plus = [eta[0], eta[1], eta[2]];
    at.eta_minus = [0.0; 3];
    let h = example_hamiltonian(&at);
    let lag = lagrangian_eval(&coords, v, 0.0)?;
    let pairing = eta_hat.pair(v);
    let energy_residual = (lag - c(pairing - h, 0.)).norm();
    Ok(RoundTrip { eta_plus: [eta[0], eta[1], eta[2]], velocity_residual, energy_residual })
}
