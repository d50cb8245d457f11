//! Poisson and Dirac brackets on G×𝔤* in the left trivialization.
//!
//! A differential at (g, η) is the pair (𝐝F, δF): 𝐝F ∈ 𝔤* is the
//! left-trivialized group derivative, 𝐝F(X) = d/dt F(g·exp(tX), η), and
//! δF ∈ 𝔤 the fiber derivative, ⟨ζ, δF⟩ = d/dt F(g, η + tζ).

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{AlgebraVector, DualVector, GroupDescriptor, GroupElement, Side, Tag, DIM, DIM_HALF};
use crate::linalg::{invert, numerical_rank, CMat2, RealMatrix, C64};

/// Step for central finite differences.
pub const FD_STEP: f64 = 1e-5;

/// (g, η) ∈ G×𝔤* with the factors of g cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub g: GroupElement,
    pub eta: DualVector,
    pub g_plus: GroupElement,
    pub g_minus: GroupElement,
}

impl PhasePoint {
    pub fn new(d: &GroupDescriptor, g: GroupElement, eta: DualVector) -> Result<Self> {
        let (g_plus, g_minus) = d.factorize(&g)?;
        Ok(Self { g: g.full(), eta, g_plus, g_minus })
    }

    /// Point g = g₊g₋ keeping the given factors verbatim.
    pub fn from_factors(g_plus: GroupElement, g_minus: GroupElement, eta: DualVector) -> Self {
        let g = GroupElement { matrix: g_plus.matrix * g_minus.matrix, tag: Tag::Full };
        Self { g, eta, g_plus, g_minus }
    }
}

/// Differential (𝐝F, δF).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diff {
    pub bold_d: DualVector,
    pub delta: AlgebraVector,
}

impl Diff {
    pub fn zero(d: &GroupDescriptor) -> Self {
        Self { bold_d: DualVector::zero(), delta: d.zero_vector() }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { bold_d: self.bold_d * s, delta: self.delta * s }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { bold_d: self.bold_d + o.bold_d, delta: self.delta + o.delta }
    }

    /// dF(V)
    pub fn apply(&self, v: &TangentVector) -> f64 {
        self.bold_d.pair(&v.body_velocity) + v.eta_dot.pair(&self.delta)
    }
}

/// Left-trivialized tangent vector (g⁻¹ġ, η̇).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector {
    pub body_velocity: AlgebraVector,
    pub eta_dot: DualVector,
}

impl TangentVector {
    pub fn zero(d: &GroupDescriptor) -> Self {
        Self { body_velocity: d.zero_vector(), eta_dot: DualVector::zero() }
    }

    pub fn max_gap(&self, o: &Self) -> f64 {
        (self.body_velocity - o.body_velocity).norm_inf().max((self.eta_dot - o.eta_dot).norm_inf())
    }
}

type EvalFn = dyn Fn(&PhasePoint) -> f64 + Send + Sync;
type DiffFn = dyn Fn(&PhasePoint) -> Diff + Send + Sync;

/// A function on G×𝔤*, optionally with an analytic differential.
#[derive(Clone)]
pub struct ScalarField {
    pub name: String,
    eval: Arc<EvalFn>,
    diff: Option<Arc<DiffFn>>,
}

impl std::fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScalarField").field("name", &self.name).field("analytic", &self.is_analytic()).finish()
    }
}

impl ScalarField {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(&PhasePoint) -> f64 + Send + Sync + 'static,
        diff: impl Fn(&PhasePoint) -> Diff + Send + Sync + 'static,
    ) -> Self {
        Self { name: name.into(), eval: Arc::new(eval), diff: Some(Arc::new(diff)) }
    }

    /// Field whose differential is obtained by finite differences.
    pub fn numeric(name: impl Into<String>, eval: impl Fn(&PhasePoint) -> f64 + Send + Sync + 'static) -> Self {
        Self { name: name.into(), eval: Arc::new(eval), diff: None }
    }

    pub fn is_analytic(&self) -> bool {
        self.diff.is_some()
    }

    pub fn eval(&self, p: &PhasePoint) -> f64 {
        (self.eval)(p)
    }

    pub fn differential(&self, d: &GroupDescriptor, p: &PhasePoint) -> Diff {
        match &self.diff {
            Some(f) => f(p),
            None => self.fd_differential(d, p, FD_STEP),
        }
    }

    /// Central differences along g·exp(±hE_k) and η ± h𝐞_k.
    pub fn fd_differential(&self, d: &GroupDescriptor, p: &PhasePoint, h: f64) -> Diff {
        let mut a = [0.0; DIM];
        let mut delta = [0.0; DIM];
        for k in 0..DIM {
            let e = d.basis_vector(k);
            let shift = |s: f64| {
                let g = p.g.compose(&d.exp(&(e * s))).full();
                PhasePoint::new(d, g, p.eta).expect("factorizable")
            };
            a[k] = (self.eval(&shift(h)) - self.eval(&shift(-h))) / (2.0 * h);
            let mut ep = *p;
            let mut em = *p;
            ep.eta.coords[k] += h;
            em.eta.coords[k] -= h;
            delta[k] = (self.eval(&ep) - self.eval(&em)) / (2.0 * h);
        }
        Diff { bold_d: DualVector::new(a), delta: d.vector(delta) }
    }

    /// F·G with the Leibniz differential.
    pub fn product(&self, other: &Self) -> Self {
        let (f, g) = (self.clone(), other.clone());
        let (f2, g2) = (self.clone(), other.clone());
        let name = format!("({})*({})", self.name, other.name);
        match (self.diff.clone(), other.diff.clone()) {
            (Some(df), Some(dg)) => Self::new(
                name,
                move |p| f.eval(p) * g.eval(p),
                move |p| df(p).scale(g2.eval(p)).add(&dg(p).scale(f2.eval(p))),
            ),
            _ => Self::numeric(name, move |p| f.eval(p) * g.eval(p)),
        }
    }
}

/// Real or imaginary part of a matrix entry of g.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Part {
    Re,
    Im,
}

fn part(z: C64, part: Part) -> f64 {
    match part {
        Part::Re => z.re,
        Part::Im => z.im,
    }
}

/// The function (g, η) ↦ Re or Im of g_ij.
pub fn entry_field(d: &'static GroupDescriptor, i: usize, j: usize, which: Part) -> ScalarField {
    ScalarField::new(
        format!("{:?}(g{}{})", which, i + 1, j + 1),
        move |p| part(p.g.matrix.get(i, j), which),
        move |p| {
            let mut a = [0.0; DIM];
            for (k, ak) in a.iter_mut().enumerate() {
                *ak = part((p.g.matrix * d.basis()[k]).get(i, j), which);
            }
            Diff { bold_d: DualVector::new(a), delta: d.zero_vector() }
        },
    )
}

/// Re or Im of an entry of the factor g₊ or g₋.
///
/// Under g ↦ g·exp(tX) the factors move with body velocities Π₊Ad_{g₋}X and
/// Ad_{g₋⁻¹}Π₋Ad_{g₋}X.
pub fn factor_entry_field(d: &'static GroupDescriptor, side: Side, i: usize, j: usize, which: Part) -> ScalarField {
    let label = match side {
        Side::Plus => "gp",
        Side::Minus => "gm",
    };
    let factor = move |p: &PhasePoint| match side {
        Side::Plus => p.g_plus.matrix,
        Side::Minus => p.g_minus.matrix,
    };
    ScalarField::new(
        format!("{:?}({}{}{})", which, label, i + 1, j + 1),
        move |p| part(factor(p).get(i, j), which),
        move |p| {
            let mut a = [0.0; DIM];
            for (k, ak) in a.iter_mut().enumerate() {
                let e = d.basis_vector(k);
                let v = match side {
                    Side::Plus => d.project(&d.adj(&p.g_minus, &e), Side::Plus),
                    Side::Minus => q_minus(d, &p.g_minus, &e),
                };
                *ak = part((factor(p) * *v.matrix()).get(i, j), which);
            }
            Diff { bold_d: DualVector::new(a), delta: d.zero_vector() }
        },
    )
}

/// The fiber coordinate (g, η) ↦ η_A.
pub fn xi_field(d: &'static GroupDescriptor, k: usize) -> ScalarField {
    let name = if k < DIM_HALF { format!("xi_{}", k + 1) } else { format!("xi^{}", k - DIM_HALF + 1) };
    ScalarField::new(
        name,
        move |p| p.eta.coords[k],
        move |_| Diff { bold_d: DualVector::zero(), delta: d.basis_vector(k) },
    )
}

/// The eight entry fields followed by the six fiber coordinates.
pub fn coordinate_fields(d: &'static GroupDescriptor) -> Vec<ScalarField> {
    let mut out = Vec::with_capacity(14);
    for i in 0..2 {
        for j in 0..2 {
            for which in [Part::Re, Part::Im] {
                out.push(entry_field(d, i, j, which));
            }
        }
    }
    out.extend((0..DIM).map(|k| xi_field(d, k)));
    out
}

/// Canonical bracket evaluated on differentials:
/// ⟨𝐝F, δG⟩ − ⟨𝐝G, δF⟩ − ⟨η, [δF, δG]⟩.
pub fn poisson(d: &GroupDescriptor, f: &Diff, g: &Diff, eta: &DualVector) -> f64 {
    f.bold_d.pair(&g.delta) - g.bold_d.pair(&f.delta) - eta.pair(&d.ad(&f.delta, &g.delta))
}

pub fn canonical_bracket(d: &GroupDescriptor, f: &ScalarField, g: &ScalarField, p: &PhasePoint) -> f64 {
    poisson(d, &f.differential(d, p), &g.differential(d, p), &p.eta)
}

/// Which fibration is constrained: N(g₋, η₋) fixes Ψ, M(g₊, η₊) fixes Υ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fiber {
    N,
    M,
}

/// Ψ(p) = (g₋, η₋) or Υ(p) = (g₊, η₊).
pub fn constraint_value(p: &PhasePoint, fiber: Fiber) -> (GroupElement, DualVector) {
    match fiber {
        Fiber::N => (p.g_minus, p.eta.minus()),
        Fiber::M => (p.g_plus, p.eta.plus()),
    }
}

/// Ad_{g₋⁻¹} Π₊ Ad_{g₋} X
pub fn q_plus(d: &GroupDescriptor, g_minus: &GroupElement, x: &AlgebraVector) -> AlgebraVector {
    d.adj(&g_minus.inverse(), &d.project(&d.adj(g_minus, x), Side::Plus))
}

/// Ad_{g₋⁻¹} Π₋ Ad_{g₋} X
pub fn q_minus(d: &GroupDescriptor, g_minus: &GroupElement, x: &AlgebraVector) -> AlgebraVector {
    d.adj(&g_minus.inverse(), &d.project(&d.adj(g_minus, x), Side::Minus))
}

/// Differentials of the pulled-back coordinate forms on the base:
/// three group forms (α) followed by three fiber coordinates (β).
///
/// On N the group forms are the Tᵃ components of g₋⁻¹ġ₋ = Ad_{g₋⁻¹}Π₋Ad_{g₋}X
/// and the fiber coordinates are ξᵃ; on M they are the Tₐ components of
/// g₊⁻¹ġ₊ = Π₊Ad_{g₋}X and ξₐ.
pub fn constraint_covectors(d: &GroupDescriptor, p: &PhasePoint, fiber: Fiber) -> [Diff; DIM] {
    let mut out = [Diff::zero(d); DIM];
    let images: Vec<AlgebraVector> = (0..DIM)
        .map(|k| {
            let e = d.basis_vector(k);
            match fiber {
                Fiber::N => q_minus(d, &p.g_minus, &e),
                Fiber::M => d.project(&d.adj(&p.g_minus, &e), Side::Plus),
            }
        })
        .collect();
    let offset = match fiber {
        Fiber::N => DIM_HALF,
        Fiber::M => 0,
    };
    for a in 0..DIM_HALF {
        let mut c = [0.0; DIM];
        for (k, ck) in c.iter_mut().enumerate() {
            *ck = images[k].coords()[offset + a];
        }
        out[a] = Diff { bold_d: DualVector::new(c), delta: d.zero_vector() };
        out[DIM_HALF + a] = Diff { bold_d: DualVector::zero(), delta: d.basis_vector(offset + a) };
    }
    out
}

/// Dirac matrix from its closed-form blocks.
///
/// N: [[0, I], [−I, Ω]] with Ω_ab = −⟨η, [Tᵃ, Tᵇ]⟩.
/// M: [[0, F], [−Fᵀ, Θ]] with F_ab = (Tᵃ, Π₊Ad_{g₋}T_b), Θ_ab = −⟨η, [T_a, T_b]⟩.
pub fn dirac_matrix(d: &GroupDescriptor, p: &PhasePoint, fiber: Fiber) -> RealMatrix {
    let n = DIM_HALF;
    let mut c = RealMatrix::zeros(DIM, DIM);
    let fiber_offset = match fiber {
        Fiber::N => n,
        Fiber::M => 0,
    };
    for a in 0..n {
        for b in 0..n {
            let block = match fiber {
                Fiber::N => (a == b) as i32 as f64,
                Fiber::M => {
                    let img = d.project(&d.adj(&p.g_minus, &d.basis_vector(b)), Side::Plus);
                    d.form_vec(&d.basis_vector(n + a), &img)
                }
            };
            c[(a, n + b)] = block;
            c[(n + b, a)] = -block;
            let br = d.ad(&d.basis_vector(fiber_offset + a), &d.basis_vector(fiber_offset + b));
            c[(n + a, n + b)] = -p.eta.pair(&br);
        }
    }
    c
}

/// Dirac matrix entry by entry from canonical brackets of the constraint covectors.
pub fn dirac_matrix_from_brackets(d: &GroupDescriptor, p: &PhasePoint, fiber: Fiber) -> RealMatrix {
    let cs = constraint_covectors(d, p, fiber);
    RealMatrix::from_fn(DIM, DIM, |i, j| poisson(d, &cs[i], &cs[j], &p.eta))
}

/// Full numerical rank of the Dirac matrix at tolerance 1e-10.
pub fn second_class_check(d: &GroupDescriptor, p: &PhasePoint, fiber: Fiber) -> bool {
    is_full_rank(&dirac_matrix(d, p, fiber))
}

pub fn is_full_rank(c: &RealMatrix) -> bool {
    c.max_norm() > 0.0 && numerical_rank(c, 1e-10) == c.rows
}

/// Constraint covectors at a point together with the inverse Dirac matrix,
/// assembled from canonical brackets of the covectors.
#[derive(Debug, Clone)]
pub struct DiracProjector {
    pub fiber: Fiber,
    pub covectors: [Diff; DIM],
    pub inverse: RealMatrix,
}

impl DiracProjector {
    pub fn new(d: &GroupDescriptor, p: &PhasePoint, fiber: Fiber) -> Result<Self> {
        let covectors = constraint_covectors(d, p, fiber);
        let c = RealMatrix::from_fn(DIM, DIM, |i, j| poisson(d, &covectors[i], &covectors[j], &p.eta));
        let inverse = invert(&c).map_err(|_| Error::NotSecondClass)?;
        Ok(Self { fiber, covectors, inverse })
    }

    /// {F,G} − Σ {F,f_l} C^{lk} {f_k,G}
    pub fn bracket(&self, d: &GroupDescriptor, f: &Diff, g: &Diff, p: &PhasePoint) -> f64 {
        let fl: Vec<f64> = self.covectors.iter().map(|cl| poisson(d, f, cl, &p.eta)).collect();
        let kg: Vec<f64> = self.covectors.iter().map(|ck| poisson(d, ck, g, &p.eta)).collect();
        let mut correction = 0.0;
        for (l, fl) in fl.iter().enumerate() {
            for (k, kg) in kg.iter().enumerate() {
                correction += fl * self.inverse[(l, k)] * kg;
            }
        }
        poisson(d, f, g, &p.eta) - correction
    }
}

pub fn dirac_bracket_general_diff(
    d: &GroupDescriptor,
    f: &Diff,
    g: &Diff,
    p: &PhasePoint,
    fiber: Fiber,
) -> Result<f64> {
    Ok(DiracProjector::new(d, p, fiber)?.bracket(d, f, g, p))
}

pub fn dirac_bracket_general(
    d: &GroupDescriptor,
    f: &ScalarField,
    g: &ScalarField,
    p: &PhasePoint,
    fiber: Fiber,
) -> Result<f64> {
    dirac_bracket_general_diff(d, &f.differential(d, p), &g.differential(d, p), p, fiber)
}

fn projected_bracket(
    d: &GroupDescriptor,
    f: &Diff,
    g: &Diff,
    qf: &AlgebraVector,
    qg: &AlgebraVector,
    eta: &DualVector,
) -> f64 {
    f.bold_d.pair(qg) - g.bold_d.pair(qf) - eta.pair(&d.ad(qf, qg))
}

/// Closed-form Dirac bracket on N(g₋, η₋):
/// ⟨𝐝F, QδG⟩ − ⟨𝐝G, QδF⟩ − ⟨η, [QδF, QδG]⟩ with Q = Ad_{g₋⁻¹}Π₊Ad_{g₋}.
pub fn dirac_bracket_n_diff(d: &GroupDescriptor, f: &Diff, g: &Diff, p: &PhasePoint) -> f64 {
    let qf = q_plus(d, &p.g_minus, &f.delta);
    let qg = q_plus(d, &p.g_minus, &g.delta);
    projected_bracket(d, f, g, &qf, &qg, &p.eta)
}

pub fn dirac_bracket_n(d: &GroupDescriptor, f: &ScalarField, g: &ScalarField, p: &PhasePoint) -> f64 {
    dirac_bracket_n_diff(d, &f.differential(d, p), &g.differential(d, p), p)
}

/// Closed-form Dirac bracket on M(g₊, η₊), the canonical bracket with δ projected by Π₋.
pub fn dirac_bracket_m_diff(d: &GroupDescriptor, f: &Diff, g: &Diff, p: &PhasePoint) -> f64 {
    let qf = d.project(&f.delta, Side::Minus);
    let qg = d.project(&g.delta, Side::Minus);
    projected_bracket(d, f, g, &qf, &qg, &p.eta)
}

pub fn dirac_bracket_m(d: &GroupDescriptor, f: &ScalarField, g: &ScalarField, p: &PhasePoint) -> f64 {
    dirac_bracket_m_diff(d, &f.differential(d, p), &g.differential(d, p), p)
}

/// Hamiltonian vector field of the Dirac bracket on N, with dG(V) = {G, F}.
pub fn ham_vf_n_diff(d: &GroupDescriptor, f: &Diff, p: &PhasePoint) -> TangentVector {
    let v = q_plus(d, &p.g_minus, &f.delta);
    let raw = -f.bold_d - d.coad(&v, &p.eta);
    let w = d.unflat(&q_minus(d, &p.g_minus, &d.flat(&raw)));
    TangentVector { body_velocity: v, eta_dot: w }
}

pub fn ham_vf_n(d: &GroupDescriptor, f: &ScalarField, p: &PhasePoint) -> TangentVector {
    ham_vf_n_diff(d, &f.differential(d, p), p)
}

/// Hamiltonian vector field of the Dirac bracket on M.
pub fn ham_vf_m_diff(d: &GroupDescriptor, f: &Diff, p: &PhasePoint) -> TangentVector {
    let v = d.project(&f.delta, Side::Minus);
    let w = (-f.bold_d - d.coad(&v, &p.eta)).minus();
    TangentVector { body_velocity: v, eta_dot: w }
}

pub fn ham_vf_m(d: &GroupDescriptor, f: &ScalarField, p: &PhasePoint) -> TangentVector {
    ham_vf_m_diff(d, &f.differential(d, p), p)
}

/// Φ^L(g, η) = coAd(g, η).
pub fn momentum_map_left(d: &GroupDescriptor, p: &PhasePoint) -> DualVector {
    d.coadj(&p.g, &p.eta)
}

/// φ_X(g, η) = ⟨η, Ad_{g⁻¹}X⟩.
pub fn momentum_value(d: &GroupDescriptor, x: &AlgebraVector, p: &PhasePoint) -> f64 {
    p.eta.pair(&d.adj(&p.g.inverse(), x))
}

/// dφ_X = (−coad(Z, η), Z) with Z = Ad_{g⁻¹}X.
pub fn momentum_diff(d: &GroupDescriptor, x: &AlgebraVector, p: &PhasePoint) -> Diff {
    let z = d.adj(&p.g.inverse(), x);
    Diff { bold_d: -d.coad(&z, &p.eta), delta: z }
}

pub fn momentum_fn(d: &'static GroupDescriptor, x: AlgebraVector) -> ScalarField {
    ScalarField::new(
        format!("phi{:?}", x.coords()),
        move |p| momentum_value(d, &x, p),
        move |p| momentum_diff(d, &x, p),
    )
}

/// The correction {φ_X, φ_Y}^N − φ_{[X,Y]} = −⟨coAd(g₋, η₋), [Π₋Ad_{g₊⁻¹}X, Π₋Ad_{g₊⁻¹}Y]⟩.
pub fn momentum_correction(d: &GroupDescriptor, x: &AlgebraVector, y: &AlgebraVector, p: &PhasePoint) -> f64 {
    let gpi = p.g_plus.inverse();
    let u = d.project(&d.adj(&gpi, x), Side::Minus);
    let v = d.project(&d.adj(&gpi, y), Side::Minus);
    -d.coadj(&p.g_minus, &p.eta.minus()).pair(&d.ad(&u, &v))
}

/// Closed form of V^N_{φ_X}:
/// (Ad_{g₋⁻¹}Π₊Ad_{g₊⁻¹}X, coAd(g₋⁻¹, Π₊ coad(Π₋Ad_{g₊⁻¹}X, coAd(g₋, η)))).
pub fn momentum_generator_n(d: &GroupDescriptor, x: &AlgebraVector, p: &PhasePoint) -> TangentVector {
    let gmi = p.g_minus.inverse();
    let y = d.adj(&p.g_plus.inverse(), x);
    let v = d.adj(&gmi, &d.project(&y, Side::Plus));
    let inner = d.coad(&d.project(&y, Side::Minus), &d.coadj(&p.g_minus, &p.eta)).plus();
    TangentVector { body_velocity: v, eta_dot: d.coadj(&gmi, &inner) }
}

/// Closed form of V^M_{φ_X}: (Π₋Ad_{g⁻¹}X, Π₋ coad(Π₊Ad_{g⁻¹}X, η)).
pub fn momentum_generator_m(d: &GroupDescriptor, x: &AlgebraVector, p: &PhasePoint) -> TangentVector {
    let y = d.adj(&p.g.inverse(), x);
    TangentVector {
        body_velocity: d.project(&y, Side::Minus),
        eta_dot: d.coad(&d.project(&y, Side::Plus), &p.eta).minus(),
    }
}

/// Induced action of G on N(g₋, η₋):
/// h·(g, η) = (Π_{G₊}(hg)·g₋, coAd(g₋⁻¹Π_{G₋}(hg), η)).
pub fn g_action_n(d: &GroupDescriptor, h: &GroupElement, p: &PhasePoint) -> Result<PhasePoint> {
    let (kp, km) = d.factorize(&h.compose(&p.g).full())?;
    let eta = d.coadj(&p.g_minus.inverse().compose(&km), &p.eta);
    Ok(PhasePoint::from_factors(kp, p.g_minus, eta))
}

/// Induced action of G on M(g₊, η₊): with (a₊, a₋) the factors of (hg)⁻¹g₊,
/// h·(g, η) = (g₊a₋⁻¹, coAd(a₊⁻¹, η)).
pub fn g_action_m(d: &GroupDescriptor, h: &GroupElement, p: &PhasePoint) -> Result<PhasePoint> {
    let k = h.compose(&p.g).inverse().compose(&p.g_plus).full();
    let (ap, am) = d.factorize(&k)?;
    let eta = d.coadj(&ap.inverse(), &p.eta);
    Ok(PhasePoint::from_factors(p.g_plus, am.inverse(), eta))
}

/// Dirac brackets among the coordinate functions on N(g₋, η₋).
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalTable {
    /// {ξₐ, g_ij} as a complex matrix (real and imaginary parts of the entry)
    pub xi_t: [CMat2; DIM_HALF],
    /// {ξₐ, ξ_b}
    pub xi_xi: [[f64; DIM_HALF]; DIM_HALF],
    /// structure constants of 𝔤₊: [Tₐ, T_b] = f_ab^c T_c
    pub f: [[[f64; DIM_HALF]; DIM_HALF]; DIM_HALF],
    pub m: [[[f64; DIM_HALF]; DIM_HALF]; DIM_HALF],
    pub n: [[[f64; DIM_HALF]; DIM_HALF]; DIM_HALF],
}

pub fn fundamental_brackets_n(d: &GroupDescriptor, p: &PhasePoint) -> FundamentalTable {
    let n3 = DIM_HALF;
    let t = |k: usize| d.basis_vector(k);
    // D_a = g₋⁻¹ g₋^{T_a}
    let dd: Vec<AlgebraVector> = (0..n3).map(|a| q_minus(d, &p.g_minus, &t(a))).collect();
    let mut table = FundamentalTable {
        xi_t: [CMat2::zero(); DIM_HALF],
        xi_xi: [[0.0; DIM_HALF]; DIM_HALF],
        f: [[[0.0; DIM_HALF]; DIM_HALF]; DIM_HALF],
        m: [[[0.0; DIM_HALF]; DIM_HALF]; DIM_HALF],
        n: [[[0.0; DIM_HALF]; DIM_HALF]; DIM_HALF],
    };
    let form = |x: &AlgebraVector, y: &AlgebraVector| d.form_vec(x, y);
    for a in 0..n3 {
        // T(g₊)[g₋^{T_a}] − T(g)[T_a] = −g·Q T_a
        let gp_gm_d = p.g_plus.matrix * p.g_minus.matrix * *dd[a].matrix();
        table.xi_t[a] = gp_gm_d - p.g.matrix * *t(a).matrix();
        for b in 0..n3 {
            for c in 0..n3 {
                table.f[a][b][c] = d.structure_constants(a, b)[c];
                table.m[a][b][c] = form(&d.ad(&dd[b], &t(n3 + c)), &t(a)) - form(&d.ad(&dd[a], &t(n3 + c)), &t(b));
                table.n[a][b][c] = form(&d.ad(&t(b), &t(c)), &dd[a])
                    - form(&d.ad(&t(a), &t(c)), &dd[b])
                    - form(&t(c), &d.ad(&dd[a], &dd[b]));
            }
            let eta = &p.eta.coords;
            table.xi_xi[a][b] =
                (0..n3).map(|c| (-table.f[a][b][c] + table.m[a][b][c]) * eta[c] + table.n[a][b][c] * eta[n3 + c]).sum();
        }
    }
    table
}

/// Hamiltonian vector field of the canonical bracket on G×𝔤*:
/// (δF, −𝐝F − coad(δF, η)).
pub fn ham_vf_canonical_diff(d: &GroupDescriptor, f: &Diff, p: &PhasePoint) -> TangentVector {
    TangentVector { body_velocity: f.delta, eta_dot: -f.bold_d - d.coad(&f.delta, &p.eta) }
}
