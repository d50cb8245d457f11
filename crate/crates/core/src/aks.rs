//! Collective dynamics on N(g₋, η₋): Hamiltonians of the form h∘Φ^L, their
//! Dirac vector fields, a Lie-group RK4 integrator, the solution by
//! factorization, and the orbit-space picture.

use std::sync::Arc;

use crate::dirac::{
    dirac_bracket_n_diff, ham_vf_n_diff, q_minus, q_plus, Diff, PhasePoint, ScalarField, TangentVector,
};
use crate::error::{Error, Result};
use crate::group::{AlgebraVector, DualVector, GroupDescriptor, GroupElement, Side, Tag, DIM};
use crate::linalg::{c, mat_exp, null_space, RealMatrix};

type HFn = dyn Fn(&DualVector) -> f64 + Send + Sync;
type LFn = dyn Fn(&DualVector) -> AlgebraVector + Send + Sync;

/// A function h on 𝔤* with its Legendre map L_h, ⟨ζ, L_h(η)⟩ = d/dt h(η + tζ).
#[derive(Clone)]
pub struct CollectiveHamiltonian {
    pub name: String,
    h: Arc<HFn>,
    legendre: Arc<LFn>,
    pub ad_invariant: bool,
}

impl std::fmt::Debug for CollectiveHamiltonian {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CollectiveHamiltonian")
            .field("name", &self.name)
            .field("ad_invariant", &self.ad_invariant)
            .finish()
    }
}

impl CollectiveHamiltonian {
    pub fn new(
        name: impl Into<String>,
        h: impl Fn(&DualVector) -> f64 + Send + Sync + 'static,
        legendre: impl Fn(&DualVector) -> AlgebraVector + Send + Sync + 'static,
        ad_invariant: bool,
    ) -> Self {
        Self { name: name.into(), h: Arc::new(h), legendre: Arc::new(legendre), ad_invariant }
    }

    pub fn value(&self, eta: &DualVector) -> f64 {
        (self.h)(eta)
    }

    pub fn legendre(&self, eta: &DualVector) -> AlgebraVector {
        (self.legendre)(eta)
    }

    /// h(ξ) = ½⟨ξ, ξ♭⟩, L_h = ♭.
    pub fn quadratic(d: &'static GroupDescriptor) -> Self {
        Self::new("quadratic", move |e| 0.5 * e.pair(&d.flat(e)), move |e| d.flat(e), true)
    }

    /// (½⟨ξ, ξ♭⟩)², L_h = 2h·ξ♭.
    pub fn quartic(d: &'static GroupDescriptor) -> Self {
        Self::new(
            "quartic",
            move |e| (0.5 * e.pair(&d.flat(e))).powi(2),
            move |e| {
                let f = d.flat(e);
                f * e.pair(&f)
            },
            true,
        )
    }

    /// h(ξ) = −½ Re tr((ξ♭)²), L_h(ξ) = i·ξ♭.
    ///
    /// Unlike the quadratic invariant this one has nontrivial dynamics on N(g₋, 0).
    pub fn killing_real(d: &'static GroupDescriptor) -> Self {
        Self::new(
            "killing_real",
            move |e| {
                let m = *d.flat(e).matrix();
                -0.5 * (m * m).trace().re
            },
            move |e| {
                let m = d.flat(e).matrix().scale(c(0., 1.));
                d.expand(&m).expect("i times a traceless matrix is traceless")
            },
            true,
        )
    }

    /// The coordinate function ξ ↦ ξ_k (not Ad-invariant).
    pub fn coordinate(d: &'static GroupDescriptor, k: usize) -> Self {
        Self::new(format!("coordinate_{k}"), move |e| e.coords[k], move |_| d.basis_vector(k), false)
    }
}

/// The field h∘Φ^L on G×𝔤* with δ = Ad_{g⁻¹}L_h(coAd(g,η)), 𝐝 = −coad(δ, η).
pub fn lift(d: &'static GroupDescriptor, h: &CollectiveHamiltonian) -> ScalarField {
    let (h1, h2) = (h.clone(), h.clone());
    ScalarField::new(
        format!("{}∘Φ", h.name),
        move |p| h1.value(&d.coadj(&p.g, &p.eta)),
        move |p| lifted_diff(d, &h2, p),
    )
}

pub fn lifted_diff(d: &GroupDescriptor, h: &CollectiveHamiltonian, p: &PhasePoint) -> Diff {
    let z = d.adj(&p.g.inverse(), &h.legendre(&d.coadj(&p.g, &p.eta)));
    Diff { bold_d: -d.coad(&z, &p.eta), delta: z }
}

/// Dirac field of an Ad-invariant collective Hamiltonian on N(g₋, η₋):
/// (Q L_h(η), ♭⁻¹ Q₋ ♭(−coad(Q L_h(η), η))) with Q = Ad_{g₋⁻¹}Π₊Ad_{g₋}
/// and Q₋ = Ad_{g₋⁻¹}Π₋Ad_{g₋}.
pub fn collective_vf(d: &GroupDescriptor, h: &CollectiveHamiltonian, p: &PhasePoint) -> TangentVector {
    let v = q_plus(d, &p.g_minus, &h.legendre(&p.eta));
    let w = d.unflat(&q_minus(d, &p.g_minus, &d.flat(&-d.coad(&v, &p.eta))));
    TangentVector { body_velocity: v, eta_dot: w }
}

/// Sequence of sampled phase points.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub points: Vec<PhasePoint>,
}

impl Trajectory {
    pub fn last(&self) -> &PhasePoint {
        self.points.last().expect("trajectories are never empty")
    }
}

/// det-root rescaling back onto SL(2).
fn unimodular(g: &GroupElement) -> GroupElement {
    let s = g.matrix.det().sqrt();
    GroupElement { matrix: g.matrix.scale(s.inv()), tag: Tag::Full }
}

/// u̇ for g = g₀·exp(u) given the body velocity v: dexp⁻¹ truncated at second order,
/// which is enough for fourth-order accuracy.
fn dexpinv(d: &GroupDescriptor, u: &AlgebraVector, v: &AlgebraVector) -> AlgebraVector {
    let uv = d.ad(u, v);
    *v + uv * 0.5 + d.ad(u, &uv) * (1.0 / 12.0)
}

/// Classical RK4 in exponential coordinates around the current point
/// (Munthe-Kaas form): the η component is integrated linearly and the group
/// component through g₀·exp(u). g is rescaled to unit determinant every step.
pub fn integrate_rk4(
    d: &GroupDescriptor,
    vf: &dyn Fn(&PhasePoint) -> TangentVector,
    p0: &PhasePoint,
    t_end: f64,
    steps: usize,
) -> Result<Trajectory> {
    assert!(steps >= 1, "at least one step");
    let h = t_end / steps as f64;
    let mut times = Vec::with_capacity(steps + 1);
    let mut points = Vec::with_capacity(steps + 1);
    times.push(0.0);
    points.push(*p0);
    let mut p = *p0;
    for n in 0..steps {
        let at = |u: &AlgebraVector, eta: DualVector| -> Result<PhasePoint> {
            let g = GroupElement { matrix: p.g.matrix * mat_exp(u.matrix()), tag: Tag::Full };
            PhasePoint::new(d, g, eta)
        };
        let k1 = vf(&p);
        let u1 = k1.body_velocity;
        let s2 = u1 * (0.5 * h);
        let k2 = vf(&at(&s2, p.eta + k1.eta_dot * (0.5 * h))?);
        let u2 = dexpinv(d, &s2, &k2.body_velocity);
        let s3 = u2 * (0.5 * h);
        let k3 = vf(&at(&s3, p.eta + k2.eta_dot * (0.5 * h))?);
        let u3 = dexpinv(d, &s3, &k3.body_velocity);
        let s4 = u3 * h;
        let k4 = vf(&at(&s4, p.eta + k3.eta_dot * h)?);
        let u4 = dexpinv(d, &s4, &k4.body_velocity);
        let u = (u1 + u2 * 2.0 + u3 * 2.0 + u4) * (h / 6.0);
        let eta = p.eta + (k1.eta_dot + k2.eta_dot * 2.0 + k3.eta_dot * 2.0 + k4.eta_dot) * (h / 6.0);
        let g = unimodular(&GroupElement { matrix: p.g.matrix * mat_exp(u.matrix()), tag: Tag::Full });
        p = PhasePoint::new(d, g, eta)?;
        times.push((n + 1) as f64 * h);
        points.push(p);
    }
    Ok(Trajectory { times, points })
}

/// Output of [`solve_by_factorization`].
#[derive(Debug, Clone)]
pub struct FactorizationSolution {
    pub trajectory: Trajectory,
    /// h₋(t), the G₋ factor of k(t) = g·exp(t L_h(η₀))
    pub h_minus: Vec<GroupElement>,
    /// η(t) before the Minus block is pinned to the level value
    pub raw_eta: Vec<DualVector>,
    pub xi0: DualVector,
}

impl FactorizationSolution {
    /// ξ(t) = coAd(h₋(t)⁻¹ g₋, η(t)), constant and equal to η₀ along the solution.
    pub fn reconstructed_xi(&self, d: &GroupDescriptor, i: usize) -> DualVector {
        let p = &self.trajectory.points[i];
        d.coadj(&self.h_minus[i].inverse().compose(&p.g_minus), &self.raw_eta[i])
    }
}

/// Solution of the Dirac Hamilton equations of an Ad-invariant h on N(g₋, η₋):
/// with (g₊(t), h₋(t)) the factors of k(t) = g·exp(t L_h(η₀)),
/// the curve is (g₊(t)·g₋, coAd(g₋⁻¹h₋(t), η₀)).
///
/// The G₋ factor and the Minus block of η are copied from p₀, so the level
/// (g₋, η₋) is preserved exactly.
pub fn solve_by_factorization(
    d: &GroupDescriptor,
    h: &CollectiveHamiltonian,
    p0: &PhasePoint,
    t_end: f64,
    samples: usize,
) -> Result<FactorizationSolution> {
    d.check_character(&p0.eta)?;
    if !h.ad_invariant {
        return Err(Error::DegenerateInput("factorization needs an Ad-invariant Hamiltonian"));
    }
    let l = h.legendre(&p0.eta);
    let n = if t_end == 0.0 { 0 } else { samples.max(1) };
    let gmi = p0.g_minus.inverse();
    let eta_minus = p0.eta.minus();
    let mut sol = FactorizationSolution {
        trajectory: Trajectory { times: Vec::with_capacity(n + 1), points: Vec::with_capacity(n + 1) },
        h_minus: Vec::with_capacity(n + 1),
        raw_eta: Vec::with_capacity(n + 1),
        xi0: p0.eta,
    };
    for i in 0..=n {
        let t = if n == 0 { 0.0 } else { t_end * i as f64 / n as f64 };
        if i == 0 {
            sol.trajectory.times.push(0.0);
            sol.trajectory.points.push(*p0);
            sol.h_minus.push(p0.g_minus);
            sol.raw_eta.push(p0.eta);
            continue;
        }
        let k = GroupElement { matrix: p0.g.matrix * mat_exp(&l.matrix().scale_re(t)), tag: Tag::Full };
        let (kp, km) = d.factorize(&k)?;
        let raw = d.coadj(&gmi.compose(&km), &p0.eta);
        let eta = raw.plus() + eta_minus;
        sol.trajectory.times.push(t);
        sol.trajectory.points.push(PhasePoint::from_factors(kp, p0.g_minus, eta));
        sol.h_minus.push(km);
        sol.raw_eta.push(raw);
    }
    Ok(sol)
}

/// {h₁∘Φ^L, h₂∘Φ^L}^N at p.
pub fn involutivity_check(
    d: &GroupDescriptor,
    f: &CollectiveHamiltonian,
    g: &CollectiveHamiltonian,
    p: &PhasePoint,
) -> f64 {
    dirac_bracket_n_diff(d, &lifted_diff(d, f, p), &lifted_diff(d, g, p), p)
}

/// J(g, ξ) = (Π₊ coAd(g, ξ), Π₋ ξ) as dual blocks.
pub fn aks_momentum_j(d: &GroupDescriptor, p: &PhasePoint) -> (DualVector, DualVector) {
    (d.coadj(&p.g, &p.eta).plus(), p.eta.minus())
}

/// L(g, ξ) = (Π₊ coAd(g₋, ξ), Π₋ coAd(g₋, ξ)) on the level set J = (η₊, η₋).
pub fn orbit_map_l(
    d: &GroupDescriptor,
    p: &PhasePoint,
    eta_plus: &DualVector,
    eta_minus: &DualVector,
) -> Result<(DualVector, DualVector)> {
    let (jp, jm) = aks_momentum_j(d, p);
    let residual = (jp - eta_plus.plus()).norm_inf().max((jm - eta_minus.minus()).norm_inf());
    if residual > 1e-8 {
        return Err(Error::NotOnLevelSet { residual });
    }
    Ok(orbit_map_unchecked(d, p))
}

pub fn orbit_map_unchecked(d: &GroupDescriptor, p: &PhasePoint) -> (DualVector, DualVector) {
    let z = d.coadj(&p.g_minus, &p.eta);
    (z.plus(), z.minus())
}

/// ½⟨ς₊, ς₊♭⟩ + ½⟨ς₋, ς₋♭⟩ + ⟨ς₊, ς₋♭⟩
pub fn reduced_hamiltonian(d: &GroupDescriptor, s_plus: &DualVector, s_minus: &DualVector) -> f64 {
    0.5 * s_plus.pair(&d.flat(s_plus)) + 0.5 * s_minus.pair(&d.flat(s_minus)) + s_plus.pair(&d.flat(s_minus))
}

/// Reduced field on the orbit product, with ς = ς₊ + ς₋:
/// (−Π₊ coad(Π₊ς♭, ς₊), Π₋ coad(Π₋ς♭, ς₋)).
pub fn orbit_vf(d: &GroupDescriptor, s_plus: &DualVector, s_minus: &DualVector) -> (DualVector, DualVector) {
    let flat = d.flat(&(*s_plus + *s_minus));
    let vp = -d.coad(&d.project(&flat, Side::Plus), s_plus).plus();
    let vm = d.coad(&d.project(&flat, Side::Minus), s_minus).minus();
    (vp, vm)
}

/// Tangent vector (X, λ) to G×𝔤* in the left trivialization.
pub type TangentPair = (AlgebraVector, DualVector);

/// Basis of the tangent space of the level set Λ = J⁻¹(η₊, η₋) at p:
/// Π₊ coAd(g, coad(X, ξ) + λ) = 0 and Π₋ λ = 0.
pub fn lambda_tangent_basis(d: &GroupDescriptor, p: &PhasePoint) -> Vec<TangentPair> {
    let mut a = RealMatrix::zeros(DIM, 2 * DIM);
    for k in 0..2 * DIM {
        let (x, lam) = if k < DIM {
            (d.basis_vector(k), DualVector::zero())
        } else {
            (d.zero_vector(), DualVector::unit(k - DIM))
        };
        let v = d.coadj(&p.g, &(d.coad(&x, &p.eta) + lam));
        for r in 0..DIM / 2 {
            a[(r, k)] = v.coords[r];
            a[(DIM / 2 + r, k)] = lam.coords[DIM / 2 + r];
        }
    }
    null_space(&a, 1e-10)
        .into_iter()
        .map(|v| {
            let x: [f64; DIM] = std::array::from_fn(|i| v[i]);
            let l: [f64; DIM] = std::array::from_fn(|i| v[DIM + i]);
            (d.vector(x), DualVector::new(l))
        })
        .collect()
}

/// Canonical form ⟨λ, Y⟩ − ⟨μ, X⟩ − ⟨ξ, [X, Y]⟩.
pub fn canonical_form(d: &GroupDescriptor, p: &PhasePoint, u: &TangentPair, v: &TangentPair) -> f64 {
    u.1.pair(&v.0) - v.1.pair(&u.0) - p.eta.pair(&d.ad(&u.0, &v.0))
}

/// Algebra representatives of L_*(X, λ) on the two orbits:
/// the Plus orbit moves by −Π₊Ad_{g₋}X, the Minus orbit by Π₋Ad_{g₋}X.
pub fn orbit_pushforward(d: &GroupDescriptor, p: &PhasePoint, x: &AlgebraVector) -> (AlgebraVector, AlgebraVector) {
    let y = d.adj(&p.g_minus, x);
    (-d.project(&y, Side::Plus), d.project(&y, Side::Minus))
}

/// ω(ς₊, ς₋) = ⟨ς₊, [X₊, Y₊]⟩ − ⟨ς₋, [X₋, Y₋]⟩.
pub fn orbit_form(
    d: &GroupDescriptor,
    s_plus: &DualVector,
    s_minus: &DualVector,
    x: &(AlgebraVector, AlgebraVector),
    y: &(AlgebraVector, AlgebraVector),
) -> f64 {
    s_plus.pair(&d.ad(&x.0, &y.0)) - s_minus.pair(&d.ad(&x.1, &y.1))
}

/// The reduced AKS field on N(g₋, η₋) for a collective Ad-invariant h:
/// (Ad_{g₋⁻¹}Π₊Ad_{g₋}L_h(η), coAd(g₋⁻¹, coad(Π₋Ad_{g₋}L_h(η), coAd(g₋, η)))).
///
/// With η₋ = 0 this is the closed form obtained by reduction in stages; using
/// the full η keeps it equal to the Dirac field at every character η₋.
pub fn aks_vf_on_n_with(d: &GroupDescriptor, h: &CollectiveHamiltonian, p: &PhasePoint) -> Result<TangentVector> {
    d.check_character(&p.eta)?;
    let l = h.legendre(&p.eta);
    let v = q_plus(d, &p.g_minus, &l);
    let z = d.project(&d.adj(&p.g_minus, &l), Side::Minus);
    let w = d.coadj(&p.g_minus.inverse(), &d.coad(&z, &d.coadj(&p.g_minus, &p.eta)));
    Ok(TangentVector { body_velocity: v, eta_dot: w })
}

/// [`aks_vf_on_n_with`] for h(ξ) = ½⟨ξ, ξ♭⟩.
pub fn aks_vf_on_n(d: &'static GroupDescriptor, p: &PhasePoint) -> Result<TangentVector> {
    aks_vf_on_n_with(d, &CollectiveHamiltonian::quadratic(d), p)
}

/// Dirac field of h∘Φ^L for a general (not necessarily invariant) h.
pub fn lifted_vf(d: &GroupDescriptor, h: &CollectiveHamiltonian, p: &PhasePoint) -> TangentVector {
    ham_vf_n_diff(d, &lifted_diff(d, h, p), p)
}
