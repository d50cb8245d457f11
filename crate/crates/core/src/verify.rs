//! Seeded verification suites.
//!
//! Each suite returns a list of [`Check`]s. A check either bounds a residual
//! from above, or (for negative controls and the convergence order) from
//! below; in both cases `pass` records whether the measured value landed on
//! the expected side of `tolerance`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::aks::{
    aks_vf_on_n, aks_vf_on_n_with, canonical_form, collective_vf, integrate_rk4, involutivity_check,
    lambda_tangent_basis, lifted_vf, orbit_form, orbit_map_unchecked, orbit_pushforward, solve_by_factorization,
    CollectiveHamiltonian, TangentPair,
};
use crate::dirac::{
    coordinate_fields, dirac_bracket_m, dirac_bracket_m_diff, dirac_bracket_n, dirac_bracket_n_diff, dirac_matrix,
    dirac_matrix_from_brackets, factor_entry_field, fundamental_brackets_n, ham_vf_m, ham_vf_n, momentum_correction,
    momentum_diff, momentum_fn, momentum_generator_m, momentum_generator_n, momentum_value, poisson, q_plus, xi_field,
    Diff, DiracProjector, Fiber, Part, PhasePoint, ScalarField,
};
use crate::error::{Error, Result};
use crate::group::{DualVector, GroupDescriptor, GroupElement, Side, Tag, DIM, DIM_HALF};
use crate::linalg::{c, CMat2, RealMatrix};
use crate::sampler::Sampler;
use crate::sl2c::{descriptor, iwasawa, unitarity_defect};
use crate::sl2c_example::{
    character_brackets, example_hamilton_eqs, example_hamiltonian, example_hamiltonian_kappa,
    explicit_fundamental_brackets, explicit_projected_generators, legendre_round_trip, metric_mn, phi_explicit,
    phi_explicit_complex, velocity_map, Sl2Coordinates,
};

pub const SUITES: [&str; 10] =
    ["iwasawa", "pairing", "dirac", "example", "axioms", "momentum", "involutivity", "flow", "orbit", "lagrangian"];

const DEFAULT_TOLERANCES: [(&str, f64); 31] = [
    ("iwasawa.reconstruction", 1e-11),
    ("iwasawa.unitarity", 1e-10),
    ("iwasawa.triangular", 1e-12),
    ("pairing.table", 1e-14),
    ("dirac.n", 1e-9),
    ("dirac.m", 1e-9),
    ("dirac.matrix", 1e-9),
    ("example.generators", 1e-9),
    ("example.brackets", 1e-9),
    ("example.character", 1e-9),
    ("example.table", 1e-9),
    ("example.momentum", 1e-9),
    ("example.equations", 1e-9),
    ("example.energy", 1e-8),
    ("axioms.antisymmetry", 1e-10),
    ("axioms.leibniz", 1e-8),
    ("axioms.jacobi", 1e-7),
    ("axioms.casimir", 1e-9),
    ("momentum.correction", 1e-9),
    ("momentum.control", 1e-3),
    ("momentum.generator", 1e-9),
    ("involutivity.pairs", 1e-9),
    ("involutivity.control", 1e-3),
    ("flow.gap", 1e-6),
    ("flow.order", 3.7),
    ("flow.xi", 1e-10),
    ("flow.energy", 1e-8),
    ("orbit.pullback", 1e-8),
    ("orbit.vector_field", 1e-9),
    ("lagrangian.diagonal", 1e-12),
    ("lagrangian.round_trip", 1e-7),
];

/// Named tolerances, initialized from the defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances(BTreeMap<String, f64>);

impl Default for Tolerances {
    fn default() -> Self {
        Self(DEFAULT_TOLERANCES.iter().map(|(k, v)| (k.to_string(), *v)).collect())
    }
}

impl Tolerances {
    pub fn get(&self, name: &str) -> f64 {
        self.0[name]
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !self.0.contains_key(name) {
            return Err(Error::UnknownTolerance(name.to_string()));
        }
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidTolerance { name: name.to_string(), value });
        }
        self.0.insert(name.to_string(), value);
        Ok(())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub suite: String,
    pub check: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub seed: u64,
}

impl Check {
    /// Passes when residual ≤ tolerance (NaN fails).
    pub fn at_most(suite: &str, check: &str, residual: f64, tolerance: f64, seed: u64) -> Self {
        let pass = residual <= tolerance;
        Self { suite: suite.into(), check: check.into(), residual, tolerance, pass, seed }
    }

    /// Passes when the measured value ≥ tolerance (NaN fails).
    pub fn at_least(suite: &str, check: &str, residual: f64, tolerance: f64, seed: u64) -> Self {
        let pass = residual >= tolerance;
        Self { suite: suite.into(), check: check.into(), residual, tolerance, pass, seed }
    }
}

/// Running maximum that sticks at NaN.
#[derive(Debug, Clone, Copy, Default)]
struct Max(f64);

impl Max {
    fn add(&mut self, x: f64) {
        if x.is_nan() || self.0.is_nan() {
            self.0 = f64::NAN;
        } else if x > self.0 {
            self.0 = x;
        }
    }
}

pub fn run_suite(name: &str, seed: u64, tol: &Tolerances) -> Option<Vec<Check>> {
    let out = match name {
        "iwasawa" => iwasawa_suite(seed, tol),
        "pairing" => pairing_suite(seed, tol),
        "dirac" => dirac_suite(seed, tol),
        "example" => example_suite(seed, tol),
        "axioms" => axioms_suite(seed, tol),
        "momentum" => momentum_suite(seed, tol),
        "involutivity" => involutivity_suite(seed, tol),
        "flow" => flow_suite(seed, tol),
        "orbit" => orbit_suite(seed, tol),
        "lagrangian" => lagrangian_suite(seed, tol),
        _ => return None,
    };
    Some(out)
}

/// All suites, run on scoped threads and collected in [`SUITES`] order.
pub fn run_all(seed: u64, tol: &Tolerances) -> Vec<Check> {
    std::thread::scope(|s| {
        let handles: Vec<_> = SUITES.iter().map(|name| s.spawn(move || run_suite(name, seed, tol))).collect();
        handles.into_iter().flat_map(|h| h.join().expect("suite panicked").unwrap_or_default()).collect()
    })
}

fn diffs(d: &GroupDescriptor, fields: &[ScalarField], p: &PhasePoint) -> Vec<Diff> {
    fields.iter().map(|f| f.differential(d, p)).collect()
}

fn random_unimodular(s: &mut Sampler) -> CMat2 {
    loop {
        let mut e = || c(s.uniform(-2.0, 2.0), s.uniform(-2.0, 2.0));
        let m = CMat2::new(e(), e(), e(), e());
        let det = m.det();
        if det.norm() >= 0.1 {
            return m.scale(det.sqrt().inv());
        }
    }
}

type BracketFn<'a> = dyn Fn(&Diff, &Diff) -> f64 + 'a;

fn character_minus(s: &mut Sampler, k: usize) -> [f64; DIM_HALF] {
    if k.is_multiple_of(2) {
        [0.0; DIM_HALF]
    } else {
        [0.0, 0.0, s.uniform(-1.0, 1.0)]
    }
}

/// The non-character fixture η₋ = 𝐭¹.
pub const NON_CHARACTER_MINUS: [f64; DIM_HALF] = [1.0, 0.0, 0.0];

fn iwasawa_suite(seed: u64, tol: &Tolerances) -> Vec<Check> {
    let d = descriptor();
    let mut s = Sampler::new(seed);
    let (mut rec, mut unit, mut tri) = (Max::default(), Max::default(), Max::default());
    for k in 0..10_000 {
        let g = if k % 2 == 0 { random_unimodular(&mut s) } else { s.group(d).matrix };
        match iwasawa(&g) {
            Ok(f) => {
                let (gp, gm) = (f.su2_part(), f.b_part());
                rec.add((gp * gm - g).max_norm());
                unit.add(unitarity_defect(&gp));
                let diag = if f.a > 0.0 { 0.0 } else { f64::INFINITY };
                tri.add(gm.get(1, 0).norm().max(gm.get(0, 0).im.abs()).max(gm.get(1, 1).im.abs()).max(diag));
            }
            Err(_) => rec.add(f64::NAN),
        }
    }
    vec![
        Check::at_most("iwasawa", "reconstruction", rec.0, tol.get("iwasawa.reconstruction"), seed),
        Check::at_most("iwasawa", "unitarity", unit.0, tol.get("iwasawa.unitarity"), seed),
        Check::at_most("iwasawa", "triangular_positive", tri.0, tol.get("iwasawa.triangular"), seed),
    ]
}

fn pairing_suite(seed: u64, tol: &Tolerances) -> Vec<Check> {
    let d = descriptor();
    let g = d.pairing();
    let (mut table, mut iso) = (Max::default(), Max::default());
    for i in 0..DIM {
        for j in 0..DIM {
            let expected = if (i + DIM_HALF) % DIM == j { 1.0 } else { 0.0 };
            table.add((g[(i, j)] - expected).abs());
            if (i < DIM_HALF) == (j < DIM_HALF) {
                iso.add(g[(i, j)].abs());
            }
        }
    }
    vec![
        Check::at_most("pairing", "delta_table", table.0, tol.get("pairing.table"), seed),
        Check::at_most("pairing", "isotropic_blocks", iso.0, tol.get("pairing.table"), seed),
    ]
}

fn dirac_suite(seed: u64, tol: &Tolerances) -> Vec<Check> {
    let d = descriptor();
    let fields = coordinate_fields(d);
    let mut s = Sampler::new(seed);
    let (mut gap_n, mut gap_m, mut mat) = (Max::default(), Max::default(), Max::default());
    for _ in 0..100 {
        let p = s.point(d);
        for fiber in [Fiber::N, Fiber::M] {
            let a = dirac_matrix(d, &p, fiber);
            let b = dirac_matrix_from_brackets(d, &p, fiber);
            mat.add(mat_gap(&a, &b));
        }
        let df = diffs(d, &fields, &p);
        let (pn, pm) = match (DiracProjector::new(d, &p, Fiber::N), DiracProjector::new(d, &p, Fiber::M)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => {
                gap_n.add(f64::NAN);
                continue;
            }
        };
        for f in &df {
            for g in &df {
                gap_n.add((pn.bracket(d, f, g, &p) - dirac_bracket_n_diff(d, f, g, &p)).abs());
                gap_m.add((pm.bracket(d, f, g, &p) - dirac_bracket_m_diff(d, f, g, &p)).abs());
            }
        }
    }
    vec![
        Check::at_most("dirac", "matrix_closed_form", mat.0, tol.get("dirac.matrix"), seed),
        Check::at_most("dirac", "general_vs_closed_n", gap_n.0, tol.get("dirac.n"), seed),
        Check::at_most("dirac", "general_vs_closed_m", gap_m.0, tol.get("dirac.m"), seed),
    ]
}

fn mat_gap(a: &RealMatrix, b: &RealMatrix) -> f64 {
    let mut m = Max::default();
    for i in 0..a.rows {
        for j in 0..a.cols {
            m.add((a[(i, j)] - b[(i, j)]).abs());
        }
    }
    m.0
}

/// {ξₐ, g_ij}^N from the engine, as a complex matrix.
fn engine_xi_g(d: &'static GroupDescriptor, a: usize, p: &PhasePoint) -> CMat2 {
    let xa = xi_field(d, a).differential(d, p);
    let mut m = CMat2::zero();
    for i in 0..2 {
        for j in 0..2 {
            let re = crate::dirac::entry_field(d, i, j, Part::Re).differential(d, p);
            let im = crate::dirac::entry_field(d, i, j, Part::Im).differential(d, p);
            m.m[i][j] = c(dirac_bracket_n_diff(d, &xa, &re, p), dirac_bracket_n_diff(d, &xa, &im, p));
        }
    }
    m
}

fn engine_xi_xi(d: &'static GroupDescriptor, p: &PhasePoint) -> [[f64; 3]; 3] {
    let x: Vec<Diff> = (0..DIM_HALF).map(|a| xi_field(d, a).differential(d, p)).collect();
    std::array::from_fn(|a| std::array::from_fn(|b| dirac_bracket_n_diff(d, &x[a], &x[b], p)))
}

fn gap33(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> f64 {
    let mut m = Max::default();
    for i in 0..3 {
        for j in 0..3 {
            m.add((a[i][j] - b[i][j]).abs());
        }
    }
    m.0
}

/// h̃(ζ) = ½ Σ (ζ^a)², L(ζ) = Σ ζ^a Tᵃ; h̃∘Φ^L restricted to η₋ = 0 is the example Hamiltonian.
pub fn example_collective(d: &'static GroupDescriptor) -> CollectiveHamiltonian {
    CollectiveHamiltonian::new(
        "example",
        |e| 0.5 * e.coords[DIM_HALF..].iter().map(|x| x * x).sum::<f64>(),
        move |e| {
            let mut x = [0.0; DIM];
            x[DIM_HALF..].copy_from_slice(&e.coords[DIM_HALF..]);
            d.vector(x)
        },
        false,
    )
}

fn example_suite(seed: u64, tol: &Tolerances) -> Vec<Check> {
    let d = descriptor();
    let mut s = Sampler::new(seed);
    let (mut gens, mut brackets, mut table) = (Max::default(), Max::default(), Max::default());
    let (mut character, mut momentum, mut eqs) = (Max::default(), Max::default(), Max::default());
    let ex = example_collective(d);
    for _ in 0..100 {
        // generic η₋
        let p = s.point(d);
        let sc = Sl2Coordinates::from_point(&p).expect("sampled points are unimodular");
        let explicit = explicit_projected_generators(d, sc.a, sc.b(), sc.c());
        for (a, e) in explicit.iter().enumerate() {
            gens.add((*e - q_plus(d, &p.g_minus, &d.basis_vector(a))).norm_inf());
        }
        let eb = explicit_fundamental_brackets(&sc);
        let ft = fundamental_brackets_n(d, &p);
        let xx = engine_xi_xi(d, &p);
        brackets.add(gap33(&eb.xi_xi, &xx));
        table.add(gap33(&ft.xi_xi, &xx));
        for a in 0..DIM_HALF {
            let eg = engine_xi_g(d, a, &p);
            brackets.add((eb.xi_t[a] - eg).max_norm());
            table.add((ft.xi_t[a] - eg).max_norm());
        }

        // η₋ = 0
        let q = s.point_with_minus(d, [0.0; DIM_HALF]);
        let sq = Sl2Coordinates::from_point(&q).expect("sampled points are unimodular");
        character.add(gap33(&character_brackets(&sq), &engine_xi_xi(d, &q)));
        let phi = phi_explicit(&sq);
        let phi_c = phi_explicit_complex(&sq);
        let mu = d.coadj(&q.g, &q.eta.plus());
        for a in 0..DIM_HALF {
            momentum.add((phi[a] - mu.coords[DIM_HALF + a]).abs());
            momentum.add(phi_c[a].im.abs());
            let t = d.basis_vector(DIM_HALF + a);
            momentum.add((phi[a] - momentum_value(d, &t, &q)).abs());
        }
        let h = example_hamiltonian(&sq);
        momentum.add((h - example_hamiltonian_kappa(d, &q)).abs());
        momentum.add((h - ex.value(&d.coadj(&q.g, &q.eta))).abs());
        match example_hamilton_eqs(d, &q) {
            Ok(v) => eqs.add(v.max_gap(&lifted_vf(d, &ex, &q))),
            Err(_) => eqs.add(f64::NAN),
        }
    }

    // energy along the example flow
    let p0 = s.point_with_minus(d, [0.0; DIM_HALF]);
    let h0 = example_hamiltonian(&Sl2Coordinates::from_point(&p0).expect("unimodular"));
    let vf = |p: &PhasePoint| example_hamilton_eqs(d, p).expect("flow stays on eta_minus = 0");
    let mut energy = Max::default();
    match integrate_rk4(d, &vf, &p0, 5.0, 1000) {
        Ok(traj) => {
            for p in &traj.points {
                let sc = Sl2Coordinates::from_point(p).expect("unimodular");
                energy.add((example_hamiltonian(&sc) - h0).abs());
            }
        }
        Err(_) => energy.add(f64::NAN),
    }

    vec![
        Check::at_most("example", "projected_generators", gens.0, tol.get("example.generators"), seed),
        Check::at_most("example", "fundamental_brackets", brackets.0, tol.get("example.brackets"), seed),
        Check::at_most("example", "generic_table", table.0, tol.get("example.table"), seed),
        Check::at_most("example", "character_reduction", character.0, tol.get("example.character"), seed),
        Check::at_most("example", "momentum_functions", momentum.0, tol.get("example.momentum"), seed),
        Check::at_most("example", "hamilton_equations", eqs.0, tol.get("example.equations"), seed),
        Check::at_most("example", "energy_rk4", energy.0, tol.get("example.energy"), seed),
    ]
}

type Bracket = fn(&GroupDescriptor, &ScalarField, &ScalarField, &PhasePoint) -> f64;

fn bracket_field(name: &str, br: Bracket, f: &ScalarField, g: &ScalarField) -> ScalarField {
    let d = descriptor();
    let (f, g) = (f.clone(), g.clone());
    ScalarField::numeric(format!("{name}({},{})", f.name, g.name), move |p| br(d, &f, &g, p))
}

fn product_field(f: &ScalarField, g: &ScalarField) -> ScalarField {
    let (f, g) = (f.clone(), g.clone());
    ScalarField::numeric(format!("{}*{}", f.name, g.name), move |p| f.eval(p) * g.eval(p))
}

fn triples(n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                out.push([i, j, k]);
            }
        }
    }
    out
}

fn axioms_suite(seed: u64, tol: &Tolerances) -> Vec<Check> {
    let d = descriptor();
    let fields = coordinate_fields(d);
    let tr = triples(fields.len());
    let mut s = Sampler::new(seed);
    let (mut anti, mut bilin, mut leib) = (Max::default(), Max::default(), Max::default());
    let (mut jac_n, mut jac_m, mut cas) = (Max::default(), Max::default(), Max::default());
    let mut casimir_n: Vec<ScalarField> = (DIM_HALF..DIM).map(|k| xi_field(d, k)).collect();
    let mut casimir_m: Vec<ScalarField> = (0..DIM_HALF).map(|k| xi_field(d, k)).collect();
    for i in 0..2 {
        for j in 0..2 {
            for w in [Part::Re, Part::Im] {
                casimir_n.push(factor_entry_field(d, Side::Minus, i, j, w));
                casimir_m.push(factor_entry_field(d, Side::Plus, i, j, w));
            }
        }
    }
    let per_point = tr.len().div_ceil(100);
    for k in 0..100 {
        let p = s.point(d);
        let df = diffs(d, &fields, &p);
        let evaluators: [&BracketFn; 3] =
            [&|f, g| poisson(d, f, g, &p.eta), &|f, g| dirac_bracket_n_diff(d, f, g, &p), &|f, g| {
                dirac_bracket_m_diff(d, f, g, &p)
            }];
        for br in evaluators {
            for (i, f) in df.iter().enumerate() {
                for g in &df {
                    anti.add((br(f, g) + br(g, f)).abs());
                }
                let (g, h) = (&df[(i + 1) % df.len()], &df[(i + 5) % df.len()]);
                let comb = g.scale(2.0).add(&h.scale(-3.0));
                bilin.add((br(f, &comb) - 2.0 * br(f, g) + 3.0 * br(f, h)).abs());
            }
        }
        for r in 0..per_point {
            let [i, j, l] = tr[(k * per_point + r) % tr.len()];
            let (f, g, h) = (&fields[i], &fields[j], &fields[l]);
            let gh = product_field(g, h);
            let lhs = dirac_bracket_n(d, f, &gh, &p);
            let rhs = g.eval(&p) * dirac_bracket_n(d, f, h, &p) + h.eval(&p) * dirac_bracket_n(d, f, g, &p);
            leib.add((lhs - rhs).abs());
            for (br, acc) in [(dirac_bracket_n as Bracket, &mut jac_n), (dirac_bracket_m as Bracket, &mut jac_m)] {
                let j1 = br(d, f, &bracket_field("b", br, g, h), &p);
                let j2 = br(d, g, &bracket_field("b", br, h, f), &p);
                let j3 = br(d, h, &bracket_field("b", br, f, g), &p);
                acc.add((j1 + j2 + j3).abs());
            }
        }
        for f in &df {
            for cn in &casimir_n {
                cas.add(dirac_bracket_n_diff(d, f, &cn.differential(d, &p), &p).abs());
            }
            for cm in &casimir_m {
                cas.add(dirac_bracket_m_diff(d, f, &cm.differential(d, &p), &p).abs());
            }
        }
    }
    vec![
        Check::at_most("axioms", "antisymmetry", anti.0, tol.get("axioms.antisymmetry"), seed),
        Check::at_most("axioms", "bilinearity", bilin.0, tol.get("axioms.antisymmetry"), seed),
        Check::at_most("axioms", "leibniz_n", leib.0, tol.get("axioms.leibniz"), seed),
        Check::at_most("axioms", "jacobi_n", jac_n.0, tol.get("axioms.jacobi"), seed),
        Check::at_most("axioms", "jacobi_m", jac_m.0, tol.get("axioms.jacobi"), seed),
        Check::at_most("axioms", "constraints_casimir", cas.0, tol.get("axioms.casimir"), seed),
    ]
}

fn momentum_suite(seed: u64, tol: &Tolerances) -> Vec<Check> {
    let d = descriptor();
    let mut s = Sampler::new(seed);
    let (mut corr, mut zero, mut control, mut gen) = (Max::default(), Max::default(), Max::default(), Max::default());
    for k in 0..100 {
        let (x, y) = (s.algebra(d), s.algebra(d));
        let p = s.point(d);
        let br = dirac_bracket_n_diff(d, &momentum_diff(d, &x, &p), &momentum_diff(d, &y, &p), &p);
        let lhs = br - momentum_value(d, &d.ad(&x, &y), &p);
        corr.add((lhs - momentum_correction(d, &x, &y, &p)).abs());
        gen.add(momentum_generator_n(d, &x, &p).max_gap(&ham_vf_n(d, &momentum_fn(d, x), &p)));
        gen.add(momentum_generator_m(d, &x, &p).max_gap(&ham_vf_m(d, &momentum_fn(d, x), &p)));

        let cm = character_minus(&mut s, k);
        let q = s.point_with_minus(d, cm);
        let nc = s.point_with_minus(d, NON_CHARACTER_MINUS);
        for i in 0..DIM {
            for j in 0..DIM {
                let (ei, ej) = (d.basis_vector(i), d.basis_vector(j));
                zero.add(momentum_correction(d, &ei, &ej, &q).abs());
                control.add(momentum_correction(d, &ei, &ej, &nc).abs());
            }
        }
        zero.add(momentum_correction(d, &x, &y, &q).abs());
    }
    vec![
        Check::at_most("momentum", "bracket_correction", corr.0, tol.get("momentum.correction"), seed),
        Check::at_most("momentum", "correction_vanishes_at_characters", zero.0, tol.get("momentum.correction"), seed),
        Check::at_least("momentum", "control_non_character", control.0, tol.get("momentum.control"), seed),
        Check::at_most("momentum", "generators", gen.0, tol.get("momentum.generator"), seed),
    ]
}

fn involutivity_suite(seed: u64, tol: &Tolerances) -> Vec<Check> {
    let d = descriptor();
    let hs = [
        CollectiveHamiltonian::quadratic(d),
        CollectiveHamiltonian::quartic(d),
        CollectiveHamiltonian::killing_real(d),
    ];
    let mut s = Sampler::new(seed);
    let (mut pairs, mut nc, mut ninv) = (Max::default(), Max::default(), Max::default());
    for k in 0..100 {
        let cm = character_minus(&mut s, k);
        let p = s.point_with_minus(d, cm);
        for i in 0..hs.len() {
            for j in i + 1..hs.len() {
                pairs.add(involutivity_check(d, &hs[i], &hs[j], &p).abs());
            }
        }
        // Ad-invariant lifts are Casimirs of the momentum algebra, so the
        // non-invariant control pairs two coordinate functions.
        let (ci, cj) =
            (CollectiveHamiltonian::coordinate(d, k % DIM), CollectiveHamiltonian::coordinate(d, (k + 1) % DIM));
        ninv.add(involutivity_check(d, &ci, &cj, &p).abs());
        let q = s.point_with_minus(d, NON_CHARACTER_MINUS);
        nc.add(involutivity_check(d, &hs[0], &hs[2], &q).abs());
    }
    vec![
        Check::at_most("involutivity", "invariant_pairs", pairs.0, tol.get("involutivity.pairs"), seed),
        Check::at_least("involutivity", "control_non_character", nc.0, tol.get("involutivity.control"), seed),
        Check::at_least("involutivity", "control_non_invariant", ninv.0, tol.get("involutivity.control"), seed),
    ]
}

/// Initial condition for the flow checks: η₊ uniform in [−½, ½]³ and the given η₋.
pub fn flow_fixture(seed: u64, eta_minus: [f64; DIM_HALF]) -> PhasePoint {
    let d = descriptor();
    let mut s = Sampler::new(seed);
    let g = s.group(d);
    let plus = std::array::from_fn(|_| s.uniform(-0.5, 0.5));
    PhasePoint::new(d, g, DualVector::from_blocks(plus, eta_minus)).expect("sampled points factorize")
}

/// Sup-norm distance between two phase points (g entries and η).
pub fn point_gap(a: &PhasePoint, b: &PhasePoint) -> f64 {
    (a.g.matrix - b.g.matrix).max_norm().max((a.eta - b.eta).norm_inf())
}

/// Endpoint gap between RK4 with `steps` steps and the factorization solution.
pub fn cross_gap(
    d: &GroupDescriptor,
    h: &CollectiveHamiltonian,
    p0: &PhasePoint,
    t_end: f64,
    steps: usize,
) -> Result<f64> {
    let vf = |p: &PhasePoint| collective_vf(d, h, p);
    let rk = integrate_rk4(d, &vf, p0, t_end, steps)?;
    let fac = solve_by_factorization(d, h, p0, t_end, 1)?;
    Ok(point_gap(rk.last(), fac.trajectory.last()))
}

fn flow_suite(seed: u64, tol: &Tolerances) -> Vec<Check> {
    let d = descriptor();
    let h = CollectiveHamiltonian::killing_real(d);
    let t_end = 5.0;
    let (mut gap, mut xi, mut energy, mut level) = (Max::default(), Max::default(), Max::default(), Max::default());
    let mut order = f64::INFINITY;
    for (i, minus) in [[0.0; DIM_HALF], [0.0, 0.0, 0.4]].into_iter().enumerate() {
        let p0 = flow_fixture(seed.wrapping_add(i as u64), minus);
        let h0 = h.value(&d.coadj(&p0.g, &p0.eta));
        let vf = |p: &PhasePoint| collective_vf(d, &h, p);
        let (rk, fac) =
            match (integrate_rk4(d, &vf, &p0, t_end, 10_000), solve_by_factorization(d, &h, &p0, t_end, 100)) {
                (Ok(r), Ok(f)) => (r, f),
                _ => {
                    gap.add(f64::NAN);
                    order = f64::NAN;
                    continue;
                }
            };
        gap.add(point_gap(rk.last(), fac.trajectory.last()));
        for (k, p) in fac.trajectory.points.iter().enumerate() {
            xi.add((fac.reconstructed_xi(d, k) - fac.xi0).norm_inf());
            energy.add((h.value(&d.coadj(&p.g, &p.eta)) - h0).abs());
            let same = p.g_minus.matrix == p0.g_minus.matrix && p.eta.minus() == p0.eta.minus();
            level.add(if same { 0.0 } else { 1.0 });
        }
        for p in &rk.points {
            energy.add((h.value(&d.coadj(&p.g, &p.eta)) - h0).abs());
        }
        let ladder: Vec<f64> =
            [50, 100, 200].iter().map(|&n| cross_gap(d, &h, &p0, t_end, n).unwrap_or(f64::NAN)).collect();
        for w in ladder.windows(2) {
            let o = (w[0] / w[1]).log2();
            order = if o.is_nan() || order.is_nan() { f64::NAN } else { order.min(o) };
        }
    }
    vec![
        Check::at_most("flow", "rk4_vs_factorization", gap.0, tol.get("flow.gap"), seed),
        Check::at_least("flow", "convergence_order", order, tol.get("flow.order"), seed),
        Check::at_most("flow", "xi_invariance", xi.0, tol.get("flow.xi"), seed),
        Check::at_most("flow", "energy_drift", energy.0, tol.get("flow.energy"), seed),
        Check::at_most("flow", "level_preserved", level.0, 0.0, seed),
    ]
}

fn combine(basis: &[TangentPair], w: &[f64]) -> TangentPair {
    let d = descriptor();
    let mut x = d.zero_vector();
    let mut l = DualVector::zero();
    for (b, wk) in basis.iter().zip(w) {
        x = x + b.0 * *wk;
        l = l + b.1 * *wk;
    }
    (x, l)
}

fn orbit_suite(seed: u64, tol: &Tolerances) -> Vec<Check> {
    let d = descriptor();
    let mut s = Sampler::new(seed);
    let (mut pull, mut vf) = (Max::default(), Max::default());
    for _ in 0..50 {
        let p = s.point(d);
        let basis = lambda_tangent_basis(d, &p);
        if basis.is_empty() {
            pull.add(f64::NAN);
            continue;
        }
        let (sp, sm) = orbit_map_unchecked(d, &p);
        let wu: Vec<f64> = (0..basis.len()).map(|_| s.uniform(-1.0, 1.0)).collect();
        let wv: Vec<f64> = (0..basis.len()).map(|_| s.uniform(-1.0, 1.0)).collect();
        let (u, v) = (combine(&basis, &wu), combine(&basis, &wv));
        let lhs = canonical_form(d, &p, &u, &v);
        let rhs = orbit_form(d, &sp, &sm, &orbit_pushforward(d, &p, &u.0), &orbit_pushforward(d, &p, &v.0));
        pull.add((lhs - rhs).abs());
    }
    let kr = CollectiveHamiltonian::killing_real(d);
    let quad = CollectiveHamiltonian::quadratic(d);
    for k in 0..100 {
        let cm = character_minus(&mut s, k);
        let p = s.point_with_minus(d, cm);
        match (aks_vf_on_n(d, &p), aks_vf_on_n_with(d, &kr, &p)) {
            (Ok(a), Ok(b)) => {
                vf.add(a.max_gap(&collective_vf(d, &quad, &p)));
                vf.add(b.max_gap(&collective_vf(d, &kr, &p)));
            }
            _ => vf.add(f64::NAN),
        }
    }
    vec![
        Check::at_most("orbit", "pullback_identity", pull.0, tol.get("orbit.pullback"), seed),
        Check::at_most("orbit", "aks_vs_collective", vf.0, tol.get("orbit.vector_field"), seed),
    ]
}

/// Point with g₋ = e, |β| ≥ 0.1 and η₋ = 0.
fn su2_point(s: &mut Sampler) -> PhasePoint {
    let d = descriptor();
    loop {
        let x = s.coords();
        let g = d.exp(&d.vector([x[0], x[1], x[2], 0.0, 0.0, 0.0]));
        let f = iwasawa(&g.matrix).expect("unitary matrices are unimodular");
        if f.beta.norm() < 0.1 {
            continue;
        }
        let gp = GroupElement { matrix: f.su2_part(), tag: Tag::Plus };
        let eta = DualVector::from_blocks(std::array::from_fn(|_| s.uniform(-1.0, 1.0)), [0.0; DIM_HALF]);
        return PhasePoint::from_factors(gp, GroupElement::identity(Tag::Minus), eta);
    }
}

fn lagrangian_suite(seed: u64, tol: &Tolerances) -> Vec<Check> {
    let d = descriptor();
    let mut s = Sampler::new(seed);
    let (mut diag, mut round) = (Max::default(), Max::default());
    for _ in 0..100 {
        let p = su2_point(&mut s);
        let sc = Sl2Coordinates::from_point(&p).expect("unimodular");
        match metric_mn(&sc) {
            Ok((m, n)) => diag.add(m.norm().max(n.norm())),
            Err(_) => diag.add(f64::NAN),
        }
        let vm = velocity_map(d, &p);
        let v = vm.mul_vec(&p.eta.coords[..DIM_HALF]);
        let v = d.vector([v[0], v[1], v[2], 0.0, 0.0, 0.0]);
        match legendre_round_trip(d, &p, &v) {
            Ok(r) => round.add(r.residual()),
            Err(_) => round.add(f64::NAN),
        }
    }
    vec![
        Check::at_most("lagrangian", "metric_diagonal_at_identity", diag.0, tol.get("lagrangian.diagonal"), seed),
        Check::at_most("lagrangian", "legendre_round_trip", round.0, tol.get("lagrangian.round_trip"), seed),
    ]
}
