//! Small dense kernels: 2×2 complex matrices and the row-major real matrices
//! used for Dirac matrices and tangency systems.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMat2 {
    pub m: [[C64; 2]; 2],
}

impl Default for CMat2 {
    fn default() -> Self {
        Self::zero()
    }
}

impl CMat2 {
    pub const fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Self { m: [[a, b], [c, d]] }
    }

    pub const fn zero() -> Self {
        Self::new(c(0., 0.), c(0., 0.), c(0., 0.), c(0., 0.))
    }

    pub const fn identity() -> Self {
        Self::new(c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.))
    }

    pub fn from_real(a: f64, b: f64, cc: f64, d: f64) -> Self {
        Self::new(c(a, 0.), c(b, 0.), c(cc, 0.), c(d, 0.))
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.m[i][j]
    }

    pub fn det(&self) -> C64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn scale(&self, s: C64) -> Self {
        let m = &self.m;
        Self::new(s * m[0][0], s * m[0][1], s * m[1][0], s * m[1][1])
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(c(s, 0.))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Self::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn inverse(&self) -> Result<Self> {
        let d = self.det();
        let scale = self.max_norm();
        if d.norm() <= 1e-300 || d.norm() < 1e-14 * scale * scale {
            return Err(Error::SingularMatrix { pivot: d.norm(), threshold: 1e-14 * scale * scale });
        }
        let m = &self.m;
        Ok(Self::new(m[1][1], -m[0][1], -m[1][0], m[0][0]).scale(d.inv()))
    }

    /// Inverse of a unimodular matrix (adjugate), no division.
    pub fn inverse_unimodular(&self) -> Self {
        let m = &self.m;
        Self::new(m[1][1], -m[0][1], -m[1][0], m[0][0])
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.m.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// XY - YX
    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }
}

impl Add for CMat2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (a, b) = (&self.m, &o.m);
        Self::new(a[0][0] + b[0][0], a[0][1] + b[0][1], a[1][0] + b[1][0], a[1][1] + b[1][1])
    }
}

impl AddAssign for CMat2 {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for CMat2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let (a, b) = (&self.m, &o.m);
        Self::new(a[0][0] - b[0][0], a[0][1] - b[0][1], a[1][0] - b[1][0], a[1][1] - b[1][1])
    }
}

impl Neg for CMat2 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale_re(-1.0)
    }
}

impl Mul for CMat2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a, b) = (&self.m, &o.m);
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

/// Matrix exponential.
///
/// Traceless input goes through the Cayley–Hamilton closed form
/// `cosh(mu) I + sinh(mu)/mu M` with `mu^2 = -det M`; anything else is
/// handled by scaling and squaring with a [6/6] Padé approximant.
pub fn mat_exp(m: &CMat2) -> CMat2 {
    let tr = m.trace();
    if tr.norm() <= 1e-15 * (1.0 + m.max_norm()) {
        return exp_traceless(m);
    }
    exp_pade(m)
}

fn exp_traceless(m: &CMat2) -> CMat2 {
    let mu2 = -m.det();
    let mu = mu2.sqrt();
    let (ch, sh_over) = if mu.norm() < 1e-6 {
        (c(1., 0.) + mu2 * 0.5 + mu2 * mu2 / 24.0, c(1., 0.) + mu2 / 6.0 + mu2 * mu2 / 120.0)
    } else {
        (mu.cosh(), mu.sinh() / mu)
    };
    CMat2::identity().scale(ch) + m.scale(sh_over)
}

const PADE6: [f64; 7] = [1.0, 0.5, 5.0 / 44.0, 1.0 / 66.0, 1.0 / 792.0, 1.0 / 15840.0, 1.0 / 665280.0];

fn exp_pade(m: &CMat2) -> CMat2 {
    let norm = m.max_norm() * 2.0;
    let mut s = 0i32;
    if norm > 0.5 {
        s = (norm / 0.5).log2().ceil() as i32;
    }
    let a = m.scale_re(0.5f64.powi(s));
    let mut num = CMat2::zero();
    let mut den = CMat2::zero();
    let mut pow = CMat2::identity();
    for (k, &ck) in PADE6.iter().enumerate() {
        num += pow.scale_re(ck);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        den += pow.scale_re(sign * ck);
        pow = pow * a;
    }
    // den is close to I after scaling, never singular here.
    let mut r = den.inverse().expect("Pade denominator is well conditioned") * num;
    for _ in 0..s {
        r = r * r;
    }
    r
}

/// Dense real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let cols = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(row);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn max_norm(&self) -> f64 {
        self.data.iter().fold(0.0, |a, x| a.max(x.abs()))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn matmul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        Self::from_fn(self.rows, o.cols, |i, j| (0..self.cols).map(|k| self[(i, k)] * o[(k, j)]).sum())
    }
}

impl std::ops::Index<(usize, usize)> for RealMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Solve `A x = b` by Gaussian elimination with partial pivoting.
pub fn solve_linear(a: &RealMatrix, b: &[f64]) -> Result<Vec<f64>> {
    assert_eq!(a.rows, a.cols, "solve_linear needs a square matrix");
    assert_eq!(b.len(), a.rows);
    let n = a.rows;
    let threshold = 1e-12 * a.max_norm();
    let mut m = a.data.clone();
    let mut x = b.to_vec();
    for k in 0..n {
        let (p, pv) = (k..n)
            .map(|i| (i, m[i * n + k].abs()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pv <= threshold || pv == 0.0 {
            return Err(Error::SingularMatrix { pivot: pv, threshold });
        }
        if p != k {
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
            }
            x.swap(k, p);
        }
        let piv = m[k * n + k];
        for i in k + 1..n {
            let f = m[i * n + k] / piv;
            if f != 0.0 {
                for j in k..n {
                    m[i * n + j] -= f * m[k * n + j];
                }
                x[i] -= f * x[k];
            }
        }
    }
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| m[k * n + j] * x[j]).sum();
        x[k] = (x[k] - s) / m[k * n + k];
    }
    Ok(x)
}

/// Inverse through column-by-column solves.
pub fn invert(a: &RealMatrix) -> Result<RealMatrix> {
    let n = a.rows;
    let mut inv = RealMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let col = solve_linear(a, &e)?;
        for i in 0..n {
            inv[(i, j)] = col[i];
        }
    }
    Ok(inv)
}

struct FullPivot {
    /// reduced row echelon form, rows beyond `rank` are zero
    rref: Vec<f64>,
    pivot_cols: Vec<usize>,
    cols: usize,
}

fn full_pivot_reduce(a: &RealMatrix, tol: f64) -> FullPivot {
    let (r, cc) = (a.rows, a.cols);
    let mut m = a.data.clone();
    let threshold = tol * a.max_norm();
    let mut col_order: Vec<usize> = (0..cc).collect();
    let mut rank = 0;
    while rank < r.min(cc) {
        let mut best = (rank, rank, -1.0);
        for i in rank..r {
            for j in rank..cc {
                let v = m[i * cc + col_order[j]].abs();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        if best.2 <= threshold || best.2 == 0.0 {
            break;
        }
        let (pi, pj) = (best.0, best.1);
        for j in 0..cc {
            m.swap(rank * cc + j, pi * cc + j);
        }
        col_order.swap(rank, pj);
        let pc = col_order[rank];
        let piv = m[rank * cc + pc];
        for j in 0..cc {
            m[rank * cc + j] /= piv;
        }
        for i in 0..r {
            if i != rank {
                let f = m[i * cc + pc];
                if f != 0.0 {
                    for j in 0..cc {
                        m[i * cc + j] -= f * m[rank * cc + j];
                    }
                }
            }
        }
        rank += 1;
    }
    FullPivot { rref: m, pivot_cols: col_order[..rank].to_vec(), cols: cc }
}

/// Number of pivots above `tol * max_norm(A)` under full-pivot elimination.
pub fn numerical_rank(a: &RealMatrix, tol: f64) -> usize {
    assert!(tol > 0.0);
    full_pivot_reduce(a, tol).pivot_cols.len()
}

/// Basis of the null space of `A` (columns of the returned vectors),
/// read off the reduced echelon form.
pub fn null_space(a: &RealMatrix, tol: f64) -> Vec<Vec<f64>> {
    let fp = full_pivot_reduce(a, tol);
    let free: Vec<usize> = (0..fp.cols).filter(|j| !fp.pivot_cols.contains(j)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0.0; fp.cols];
            v[f] = 1.0;
            for (row, &pc) in fp.pivot_cols.iter().enumerate() {
                v[pc] = -fp.rref[row * fp.cols + f];
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(a: C64, d: C64) -> CMat2 {
        CMat2::new(a, c(0., 0.), c(0., 0.), d)
    }

    fn series_exp(m: &CMat2) -> CMat2 {
        let mut term = CMat2::identity();
        let mut sum = CMat2::identity();
        for k in 1..40 {
            term = (term * *m).scale_re(1.0 / k as f64);
            sum += term;
        }
        sum
    }

    #[test]
    fn exp_zero_is_identity() {
        assert_eq!(mat_exp(&CMat2::zero()), CMat2::identity());
    }

    #[test]
    fn exp_rotation_generator() {
        let t = 0.3;
        let m = diag(c(0., t), c(0., -t));
        let e = mat_exp(&m);
        let expect = diag(c(0., t).exp(), c(0., -t).exp());
        assert!((e - expect).max_norm() < 1e-12);
        assert!((e - series_exp(&m)).max_norm() < 1e-12);
    }

    #[test]
    fn exp_boost_generator() {
        let s = 0.5;
        let m = diag(c(-s / 2., 0.), c(s / 2., 0.));
        let e = mat_exp(&m);
        assert!((e - diag(c((-s / 2.0f64).exp(), 0.), c((s / 2.0f64).exp(), 0.))).max_norm() < 1e-12);
    }

    #[test]
    fn exp_nilpotent_and_tiny() {
        let n = CMat2::new(c(0., 0.), c(2., 1.), c(0., 0.), c(0., 0.));
        assert!((mat_exp(&n) - (CMat2::identity() + n)).max_norm() < 1e-15);
        let tiny = CMat2::new(c(1e-8, 0.), c(3e-8, 0.), c(-2e-8, 1e-8), c(-1e-8, 0.));
        assert!((mat_exp(&tiny) - series_exp(&tiny)).max_norm() < 1e-15);
    }

    #[test]
    fn exp_general_matches_series() {
        let m = CMat2::new(c(0.7, 0.2), c(-1.1, 0.4), c(0.3, -0.9), c(0.1, 0.5));
        assert!((mat_exp(&m) - series_exp(&m)).max_norm() < 1e-12);
        let big = m.scale_re(3.0);
        let rel = (mat_exp(&big) - series_exp(&big)).max_norm() / series_exp(&big).max_norm();
        assert!(rel < 1e-12, "{rel}");
    }

    #[test]
    fn solve_identity_and_hand_cases() {
        let b = vec![1.0, -2.0, 3.0, 0.5, 0.25, -7.0];
        assert_eq!(solve_linear(&RealMatrix::identity(6), &b).unwrap(), b);
        let a = RealMatrix::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]);
        let x = solve_linear(&a, &[1.0, 0.0]).unwrap();
        assert!((x[0] - 0.0).abs() < 1e-15 && (x[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn block_dirac_inverse() {
        // C = [[0,-I],[I,W]] with W skew; C^{-1} = [[W,I],[-I,0]]
        let w = [[0.0, 0.3, -1.2], [-0.3, 0.0, 0.7], [1.2, -0.7, 0.0]];
        let cm = RealMatrix::from_fn(6, 6, |i, j| match (i < 3, j < 3) {
            (true, true) => 0.0,
            (true, false) => -((i == j - 3) as i32 as f64),
            (false, true) => (i - 3 == j) as i32 as f64,
            (false, false) => w[i - 3][j - 3],
        });
        let ci = RealMatrix::from_fn(6, 6, |i, j| match (i < 3, j < 3) {
            (true, true) => w[i][j],
            (true, false) => (i == j - 3) as i32 as f64,
            (false, true) => -((i - 3 == j) as i32 as f64),
            (false, false) => 0.0,
        });
        let prod = cm.matmul(&ci);
        for i in 0..6 {
            for j in 0..6 {
                assert!((prod[(i, j)] - (i == j) as i32 as f64).abs() < 1e-15);
            }
        }
        let b = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let x = solve_linear(&cm, &b).unwrap();
        let expect = ci.mul_vec(&b);
        for k in 0..6 {
            assert!((x[k] - expect[k]).abs() < 1e-13);
        }
        assert_eq!(invert(&cm).unwrap().data.len(), 36);
    }

    #[test]
    fn singular_is_reported() {
        let a = RealMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(matches!(solve_linear(&a, &[1.0, 1.0]), Err(Error::SingularMatrix { .. })));
    }

    #[test]
    fn ranks() {
        assert_eq!(numerical_rank(&RealMatrix::identity(3), 1e-10), 3);
        assert_eq!(numerical_rank(&RealMatrix::zeros(3, 3), 1e-10), 0);
        let u = [0.3, -1.7, 0.9];
        let outer = RealMatrix::from_fn(3, 3, |i, j| u[i] * u[j]);
        assert_eq!(numerical_rank(&outer, 1e-10), 1);
    }

    #[test]
    fn null_space_of_rank_deficient() {
        let a = RealMatrix::from_rows(&[vec![1.0, 2.0, 3.0, 4.0], vec![2.0, 4.0, 6.0, 8.5]]);
        let ns = null_space(&a, 1e-12);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.mul_vec(v).iter().all(|r| r.abs() < 1e-12));
        }
    }
}
