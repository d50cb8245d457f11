//! Calculus on a double Lie group G = G₊·G₋ realized by 2×2 complex matrices.
//!
//! Coordinates on 𝔤 use the combined basis E₀..E₅ = (T₁, T₂, T₃, T¹, T², T³):
//! the first block spans 𝔤₊ ("Plus"), the second 𝔤₋ ("Minus"). Dual vectors use
//! the dual basis, so the Plus block of a dual vector holds ξₐ = ⟨η, Tₐ⟩ and
//! annihilates 𝔤₋, while the Minus block holds ξᵃ = ⟨η, Tᵃ⟩.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{invert, mat_exp, CMat2, RealMatrix};

pub const DIM_HALF: usize = 3;
pub const DIM: usize = 2 * DIM_HALF;

pub type Coords = [f64; DIM];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tag {
    Full,
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
}

/// Splits a unimodular matrix into (plus, minus) factors with g = g₊·g₋.
pub type Factorizer = fn(&CMat2) -> Result<(CMat2, CMat2)>;
/// Membership test for one of the factor subgroups, with tolerance.
pub type Membership = fn(&CMat2, f64) -> bool;
/// Nondegenerate symmetric bilinear form on 𝔤.
pub type BilinearForm = fn(&CMat2, &CMat2) -> f64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    pub matrix: CMat2,
    pub tag: Tag,
}

impl GroupElement {
    /// Wraps a matrix after checking |det - 1| ≤ 1e-10.
    pub fn new(matrix: CMat2, tag: Tag) -> Result<Self> {
        let defect = (matrix.det() - 1.0).norm();
        if !matrix.is_finite() || defect > 1e-10 {
            return Err(Error::NotUnimodular { defect });
        }
        Ok(Self { matrix, tag })
    }

    pub fn identity(tag: Tag) -> Self {
        Self { matrix: CMat2::identity(), tag }
    }

    pub fn inverse(&self) -> Self {
        Self { matrix: self.matrix.inverse_unimodular(), tag: self.tag }
    }

    pub fn compose(&self, other: &Self) -> Self {
        let tag = if self.tag == other.tag { self.tag } else { Tag::Full };
        Self { matrix: self.matrix * other.matrix, tag }
    }

    pub fn full(&self) -> Self {
        Self { matrix: self.matrix, tag: Tag::Full }
    }
}

/// Element of 𝔤; coordinates are authoritative, the matrix is kept in sync.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraVector {
    coords: Coords,
    matrix: CMat2,
}

impl AlgebraVector {
    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    pub fn matrix(&self) -> &CMat2 {
        &self.matrix
    }

    pub fn norm_inf(&self) -> f64 {
        self.coords.iter().fold(0.0, |a, x| a.max(x.abs()))
    }
}

impl Add for AlgebraVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut coords = self.coords;
        for (c, x) in coords.iter_mut().zip(o.coords) {
            *c += x;
        }
        Self { coords, matrix: self.matrix + o.matrix }
    }
}

impl Sub for AlgebraVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for AlgebraVector {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl Mul<f64> for AlgebraVector {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self { coords: self.coords.map(|x| x * s), matrix: self.matrix.scale_re(s) }
    }
}

/// Element of 𝔤* in the dual basis (𝐭₁, 𝐭₂, 𝐭₃, 𝐭¹, 𝐭², 𝐭³).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DualVector {
    pub coords: Coords,
}

impl DualVector {
    pub const fn new(coords: Coords) -> Self {
        Self { coords }
    }

    pub const fn zero() -> Self {
        Self { coords: [0.0; DIM] }
    }

    /// Basis covector with a single unit coordinate.
    pub fn unit(k: usize) -> Self {
        let mut coords = [0.0; DIM];
        coords[k] = 1.0;
        Self { coords }
    }

    pub fn from_blocks(plus: [f64; DIM_HALF], minus: [f64; DIM_HALF]) -> Self {
        let mut coords = [0.0; DIM];
        coords[..DIM_HALF].copy_from_slice(&plus);
        coords[DIM_HALF..].copy_from_slice(&minus);
        Self { coords }
    }

    /// ⟨η, X⟩
    pub fn pair(&self, x: &AlgebraVector) -> f64 {
        self.coords.iter().zip(x.coords()).map(|(a, b)| a * b).sum()
    }

    /// Block η₊ (coordinates ξₐ), Minus block zeroed.
    pub fn plus(&self) -> Self {
        let mut c = self.coords;
        c[DIM_HALF..].fill(0.0);
        Self { coords: c }
    }

    /// Block η₋ (coordinates ξᵃ), Plus block zeroed.
    pub fn minus(&self) -> Self {
        let mut c = self.coords;
        c[..DIM_HALF].fill(0.0);
        Self { coords: c }
    }

    pub fn block(&self, side: Side) -> Self {
        match side {
            Side::Plus => self.plus(),
            Side::Minus => self.minus(),
        }
    }

    pub fn norm_inf(&self) -> f64 {
        self.coords.iter().fold(0.0, |a, x| a.max(x.abs()))
    }
}

impl Add for DualVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut coords = self.coords;
        for (c, x) in coords.iter_mut().zip(o.coords) {
            *c += x;
        }
        Self { coords }
    }
}

impl Sub for DualVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for DualVector {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl Mul<f64> for DualVector {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self { coords: self.coords.map(|x| x * s) }
    }
}

/// Everything the engine needs to know about a concrete double group.
#[derive(Clone)]
pub struct GroupDescriptor {
    pub name: &'static str,
    basis: [CMat2; DIM],
    pairing: [[f64; DIM]; DIM],
    pairing_inv: [[f64; DIM]; DIM],
    structure: [[Coords; DIM]; DIM],
    form: BilinearForm,
    factorizer: Factorizer,
    in_plus: Membership,
    in_minus: Membership,
}

impl std::fmt::Debug for GroupDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupDescriptor").field("name", &self.name).finish_non_exhaustive()
    }
}

impl GroupDescriptor {
    /// Builds the descriptor and validates the double structure: the basis must
    /// consist of traceless matrices, the pairing must be nondegenerate with
    /// isotropic blocks, and each block must close under the commutator.
    pub fn new(
        name: &'static str,
        basis_plus: [CMat2; DIM_HALF],
        basis_minus: [CMat2; DIM_HALF],
        form: BilinearForm,
        factorizer: Factorizer,
        in_plus: Membership,
        in_minus: Membership,
    ) -> Result<Self> {
        let mut basis = [CMat2::zero(); DIM];
        basis[..DIM_HALF].copy_from_slice(&basis_plus);
        basis[DIM_HALF..].copy_from_slice(&basis_minus);
        if basis.iter().any(|b| b.trace().norm() > 1e-14) {
            return Err(Error::DegenerateInput("basis matrices must be traceless"));
        }
        let mut pairing = [[0.0; DIM]; DIM];
        for i in 0..DIM {
            for j in 0..DIM {
                pairing[i][j] = form(&basis[i], &basis[j]);
            }
        }
        for i in 0..DIM_HALF {
            for j in 0..DIM_HALF {
                if pairing[i][j].abs() > 1e-14 || pairing[i + DIM_HALF][j + DIM_HALF].abs() > 1e-14 {
                    return Err(Error::DegenerateInput("blocks must be isotropic"));
                }
            }
        }
        let gram = RealMatrix::from_fn(DIM, DIM, |i, j| pairing[i][j]);
        let inv = invert(&gram).map_err(|_| Error::DegenerateInput("pairing is degenerate"))?;
        let mut pairing_inv = [[0.0; DIM]; DIM];
        for (i, row) in pairing_inv.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = inv[(i, j)];
            }
        }
        let mut d = Self {
            name,
            basis,
            pairing,
            pairing_inv,
            structure: [[[0.0; DIM]; DIM]; DIM],
            form,
            factorizer,
            in_plus,
            in_minus,
        };
        // six independent traceless 2×2 matrices span sl(2,C), so every
        // traceless matrix expands exactly; this is checked on the brackets
        for i in 0..DIM {
            for j in 0..DIM {
                let c = d.basis[i].commutator(&d.basis[j]);
                let v = d.expand(&c)?;
                d.structure[i][j] = v.coords;
            }
        }
        for block in [0..DIM_HALF, DIM_HALF..DIM] {
            for i in block.clone() {
                for j in block.clone() {
                    let s = &d.structure[i][j];
                    let outside = (0..DIM).filter(|k| !block.contains(k)).map(|k| s[k].abs()).fold(0.0, f64::max);
                    if outside > 1e-12 {
                        return Err(Error::DegenerateInput("factor subalgebras must close"));
                    }
                }
            }
        }
        Ok(d)
    }

    pub fn dim_half(&self) -> usize {
        DIM_HALF
    }

    pub fn basis(&self) -> &[CMat2; DIM] {
        &self.basis
    }

    pub fn basis_plus(&self) -> &[CMat2] {
        &self.basis[..DIM_HALF]
    }

    pub fn basis_minus(&self) -> &[CMat2] {
        &self.basis[DIM_HALF..]
    }

    pub fn pairing(&self) -> RealMatrix {
        RealMatrix::from_fn(DIM, DIM, |i, j| self.pairing[i][j])
    }

    /// Coordinates of [E_i, E_j].
    pub fn structure_constants(&self, i: usize, j: usize) -> &Coords {
        &self.structure[i][j]
    }

    pub fn form(&self, x: &CMat2, y: &CMat2) -> f64 {
        (self.form)(x, y)
    }

    /// (X, Y)_𝔤 from coordinates.
    pub fn form_vec(&self, x: &AlgebraVector, y: &AlgebraVector) -> f64 {
        let mut s = 0.0;
        for i in 0..DIM {
            for j in 0..DIM {
                s += x.coords[i] * self.pairing[i][j] * y.coords[j];
            }
        }
        s
    }

    pub fn vector(&self, coords: Coords) -> AlgebraVector {
        let mut m = CMat2::zero();
        for (k, &x) in coords.iter().enumerate() {
            if x != 0.0 {
                m += self.basis[k].scale_re(x);
            }
        }
        AlgebraVector { coords, matrix: m }
    }

    pub fn zero_vector(&self) -> AlgebraVector {
        self.vector([0.0; DIM])
    }

    pub fn basis_vector(&self, k: usize) -> AlgebraVector {
        let mut c = [0.0; DIM];
        c[k] = 1.0;
        self.vector(c)
    }

    fn expand_raw(&self, m: &CMat2) -> Coords {
        let mut rhs = [0.0; DIM];
        for (j, r) in rhs.iter_mut().enumerate() {
            *r = (self.form)(m, &self.basis[j]);
        }
        let mut c = [0.0; DIM];
        for (i, ci) in c.iter_mut().enumerate() {
            *ci = (0..DIM).map(|j| self.pairing_inv[i][j] * rhs[j]).sum();
        }
        c
    }

    /// Expands a matrix in the basis by solving the pairing system.
    pub fn expand(&self, m: &CMat2) -> Result<AlgebraVector> {
        let v = self.vector(self.expand_raw(m));
        let residual = (v.matrix - *m).max_norm();
        if residual > 1e-10 * (1.0 + m.max_norm()) {
            return Err(Error::BasisExpansionFailure { residual });
        }
        Ok(v)
    }

    /// Expansion of a matrix known to be traceless (hence in the span).
    fn expand_traceless(&self, m: &CMat2) -> AlgebraVector {
        AlgebraVector { coords: self.expand_raw(m), matrix: *m }
    }

    pub fn element(&self, m: CMat2) -> Result<GroupElement> {
        GroupElement::new(m, Tag::Full)
    }

    pub fn exp(&self, x: &AlgebraVector) -> GroupElement {
        GroupElement { matrix: mat_exp(&x.matrix), tag: Tag::Full }
    }

    pub fn is_plus(&self, m: &CMat2, tol: f64) -> bool {
        (self.in_plus)(m, tol)
    }

    pub fn is_minus(&self, m: &CMat2, tol: f64) -> bool {
        (self.in_minus)(m, tol)
    }

    /// g ↦ (g₊, g₋) with g = g₊g₋.
    pub fn factorize(&self, g: &GroupElement) -> Result<(GroupElement, GroupElement)> {
        let (p, m) = (self.factorizer)(&g.matrix)?;
        Ok((GroupElement { matrix: p, tag: Tag::Plus }, GroupElement { matrix: m, tag: Tag::Minus }))
    }

    /// Π₊ or Π₋ on 𝔤 (coordinate masks).
    pub fn project(&self, x: &AlgebraVector, side: Side) -> AlgebraVector {
        let mut c = x.coords;
        match side {
            Side::Plus => c[DIM_HALF..].fill(0.0),
            Side::Minus => c[..DIM_HALF].fill(0.0),
        }
        self.vector(c)
    }

    /// [X, Y] through the structure constants.
    pub fn ad(&self, x: &AlgebraVector, y: &AlgebraVector) -> AlgebraVector {
        let mut c = [0.0; DIM];
        for i in 0..DIM {
            if x.coords[i] == 0.0 {
                continue;
            }
            for j in 0..DIM {
                let w = x.coords[i] * y.coords[j];
                if w != 0.0 {
                    for (ck, s) in c.iter_mut().zip(&self.structure[i][j]) {
                        *ck += w * s;
                    }
                }
            }
        }
        AlgebraVector { coords: c, matrix: x.matrix.commutator(&y.matrix) }
    }

    /// Ad_g X = g X g⁻¹.
    pub fn adj(&self, g: &GroupElement, x: &AlgebraVector) -> AlgebraVector {
        let m = g.matrix * x.matrix * g.matrix.inverse_unimodular();
        self.expand_traceless(&m)
    }

    /// Matrix of Ad_g: column k holds the coordinates of Ad_g E_k.
    pub fn adjoint_matrix(&self, g: &GroupElement) -> RealMatrix {
        let mut a = RealMatrix::zeros(DIM, DIM);
        for k in 0..DIM {
            let col = self.adj(g, &self.basis_vector(k));
            for i in 0..DIM {
                a[(i, k)] = col.coords[i];
            }
        }
        a
    }

    /// ψ̄: 𝔤* → 𝔤 with (flat(ξ), Y) = ⟨ξ, Y⟩.
    pub fn flat(&self, xi: &DualVector) -> AlgebraVector {
        let mut c = [0.0; DIM];
        for (i, ci) in c.iter_mut().enumerate() {
            *ci = (0..DIM).map(|j| self.pairing_inv[i][j] * xi.coords[j]).sum();
        }
        self.vector(c)
    }

    /// Inverse of [`flat`](Self::flat).
    pub fn unflat(&self, x: &AlgebraVector) -> DualVector {
        let mut c = [0.0; DIM];
        for (j, cj) in c.iter_mut().enumerate() {
            *cj = (0..DIM).map(|i| x.coords[i] * self.pairing[i][j]).sum();
        }
        DualVector { coords: c }
    }

    /// coAd(g, η) with ⟨coAd(g,η), X⟩ = ⟨η, Ad_{g⁻¹}X⟩.
    ///
    /// Computed as unflat(Ad_g flat η), which relies on Ad-invariance of the form.
    pub fn coadj(&self, g: &GroupElement, eta: &DualVector) -> DualVector {
        self.unflat(&self.adj(g, &self.flat(eta)))
    }

    /// coad(X, η) with ⟨coad(X,η), Y⟩ = −⟨η, [X,Y]⟩, so that
    /// d/dt coAd(exp(tX), η) at t = 0 equals coad(X, η).
    pub fn coad(&self, x: &AlgebraVector, eta: &DualVector) -> DualVector {
        let mut c = [0.0; DIM];
        for (k, ck) in c.iter_mut().enumerate() {
            let mut s = 0.0;
            for i in 0..DIM {
                if x.coords[i] == 0.0 {
                    continue;
                }
                let sc = &self.structure[i][k];
                s -= x.coords[i] * (0..DIM).map(|l| eta.coords[l] * sc[l]).sum::<f64>();
            }
            *ck = s;
        }
        DualVector { coords: c }
    }

    /// Dressing action Dr(h₋, g₊) = Π_{G₊}(h₋ g₊).
    pub fn dressing(&self, h_minus: &GroupElement, g_plus: &GroupElement) -> Result<GroupElement> {
        let (p, _) = self.factorize(&h_minus.compose(g_plus))?;
        Ok(p)
    }

    /// Left-trivialized dressing generator g₊⁻¹ g₊^{X₋} = Π₊ Ad_{g₊⁻¹} X₋.
    pub fn dressing_generator(&self, g_plus: &GroupElement, x_minus: &AlgebraVector) -> AlgebraVector {
        self.project(&self.adj(&g_plus.inverse(), x_minus), Side::Plus)
    }

    /// Splits a body velocity v = g⁻¹ġ at g = g₊g₋ into the factor velocities.
    pub fn tangent_split(&self, g: &GroupElement, v_body: &AlgebraVector) -> Result<TangentSplit> {
        let (_, gm) = self.factorize(g)?;
        let w = self.adj(&gm, v_body);
        let plus_body = self.project(&w, Side::Plus);
        let minus_right = self.project(&w, Side::Minus);
        let minus_body = self.adj(&gm.inverse(), &minus_right);
        Ok(TangentSplit {
            x_plus: self.project(v_body, Side::Plus),
            x_minus: self.project(v_body, Side::Minus),
            plus_body,
            minus_body,
        })
    }

    /// max over a, b of |⟨η₋, [Tᵃ, Tᵇ]⟩|.
    pub fn character_defect(&self, eta: &DualVector) -> f64 {
        let mut worst: f64 = 0.0;
        for a in DIM_HALF..DIM {
            for b in DIM_HALF..DIM {
                let s: f64 = (0..DIM).map(|k| eta.coords[k] * self.structure[a][b][k]).sum();
                worst = worst.max(s.abs());
            }
        }
        worst
    }

    pub fn is_character(&self, eta_minus: &DualVector) -> bool {
        self.character_defect(&eta_minus.minus()) <= 1e-12
    }

    pub fn check_character(&self, eta_minus: &DualVector) -> Result<()> {
        let defect = self.character_defect(&eta_minus.minus());
        if defect > 1e-12 {
            return Err(Error::NotCharacter { defect });
        }
        Ok(())
    }
}

/// Output of [`GroupDescriptor::tangent_split`].
#[derive(Debug, Clone, Copy)]
pub struct TangentSplit {
    /// Π₊ v
    pub x_plus: AlgebraVector,
    /// Π₋ v
    pub x_minus: AlgebraVector,
    /// g₊⁻¹ ġ₊ = Π₊ Ad_{g₋} v
    pub plus_body: AlgebraVector,
    /// g₋⁻¹ ġ₋ = Ad_{g₋⁻¹} Π₋ Ad_{g₋} v
    pub minus_body: AlgebraVector,
}
