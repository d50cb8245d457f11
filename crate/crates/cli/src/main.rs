//! `dirac-double`: factorize matrices, tabulate brackets, integrate flows and
//! run the verification suites.

// `!(x <= tol)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use dirac_double::aks::{
    aks_momentum_j, aks_vf_on_n_with, collective_vf, integrate_rk4, orbit_map_unchecked, orbit_vf, reduced_hamiltonian,
    solve_by_factorization, CollectiveHamiltonian,
};
use dirac_double::dirac::{
    coordinate_fields, dirac_bracket_m_diff, dirac_bracket_n_diff, fundamental_brackets_n, PhasePoint,
};
use dirac_double::group::{DualVector, GroupDescriptor, DIM_HALF};
use dirac_double::linalg::CMat2;
use dirac_double::sampler::{Sampler, DEFAULT_SEED};
use dirac_double::sl2c::{descriptor, iwasawa, unitarity_defect};
use dirac_double::sl2c_example::Sl2Coordinates;
use dirac_double::verify::{flow_fixture, point_gap, run_all, run_suite, Check, Tolerances, SUITES};
use dirac_double::Error;

#[derive(Parser, Debug)]
#[command(name = "dirac-double", version, about = "Dirac brackets and factorization dynamics on SL(2,C) = SU(2)B")]
struct Cli {
    /// JSON config file; command-line flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (stdout when absent)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Tolerance override, NAME=VALUE (also accepted as --tol.NAME=VALUE)
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    tol: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Factor g = g₊g₋ with g₊ ∈ SU(2) and g₋ upper triangular
    Iwasawa {
        /// Entries re,im of g11, g12, g21, g22; a seeded random matrix when absent
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        matrix: Option<Vec<f64>>,
    },
    /// Dirac bracket tables of the coordinate functions at a point
    Brackets {
        #[arg(long, allow_hyphen_values = true)]
        init: Option<String>,
    },
    /// Integrate the collective flow on N(g₋, η₋)
    Flow {
        #[arg(long = "T")]
        t_end: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, value_enum)]
        method: Option<Method>,
        /// "random" or 13 comma-separated values:
        /// re α, im α, re β, im β, a, re z, im z, η₊₁..₃, ξ¹..³
        #[arg(long, allow_hyphen_values = true)]
        init: Option<String>,
        /// η₋ for a random initial condition
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        eta_minus: Option<Vec<f64>>,
        #[arg(long, value_enum)]
        hamiltonian: Option<Hamiltonian>,
    },
    /// Orbit-space data at a point: J, L, the reduced Hamiltonian and its field
    Orbit {
        #[arg(long, allow_hyphen_values = true)]
        init: Option<String>,
    },
    /// Run a verification suite, or "all"
    Verify { suite: String },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Rk4,
    Factorization,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
enum Hamiltonian {
    Quadratic,
    Quartic,
    KillingReal,
}

/// Optional JSON config; every field may be omitted.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    seed: Option<u64>,
    #[serde(default)]
    tolerances: BTreeMap<String, f64>,
    #[serde(rename = "T")]
    t_end: Option<f64>,
    steps: Option<usize>,
    method: Option<Method>,
    init: Option<String>,
    eta_minus: Option<Vec<f64>>,
    hamiltonian: Option<Hamiltonian>,
    out: Option<PathBuf>,
    format: Option<Format>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    NotCharacter(String),
    Blowup(String),
    ChecksFailed(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::ChecksFailed(_) | Failure::Io(_) => 1,
            Failure::Usage(_) | Failure::NotCharacter(_) => 2,
            Failure::Blowup(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m)
            | Failure::NotCharacter(m)
            | Failure::Blowup(m)
            | Failure::ChecksFailed(m)
            | Failure::Io(m) => m,
        }
    }
}

/// Rewrites `--tol.NAME=V` and `--tol.NAME V` into `--tol NAME=V`.
fn expand_tol_flags(args: impl IntoIterator<Item = String>) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = args.into_iter().peekable();
    while let Some(a) = it.next() {
        match a.strip_prefix("--tol.") {
            Some(rest) if rest.contains('=') => {
                out.push("--tol".into());
                out.push(rest.into());
            }
            Some(rest) => {
                out.push("--tol".into());
                let value = it.next().unwrap_or_default();
                out.push(format!("{rest}={value}"));
            }
            None => out.push(a),
        }
    }
    out
}

struct Settings {
    seed: u64,
    tol: Tolerances,
    out: Option<PathBuf>,
    format: Format,
    file: FileConfig,
}

fn settings(cli: &Cli) -> Result<Settings, Failure> {
    let file = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("config {}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };
    let mut tol = Tolerances::default();
    let mut overrides: Vec<(String, f64)> = file.tolerances.iter().map(|(k, v)| (k.clone(), *v)).collect();
    for spec in &cli.tol {
        let (name, value) =
            spec.split_once('=').ok_or_else(|| Failure::Usage(format!("--tol expects NAME=VALUE, got {spec}")))?;
        let value: f64 =
            value.parse().map_err(|_| Failure::Usage(format!("tolerance {name}: not a number: {value}")))?;
        overrides.push((name.to_string(), value));
    }
    for (name, value) in overrides {
        tol.set(&name, value).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(Settings {
        seed: cli.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        tol,
        out: cli.out.clone().or(file.out.clone()),
        format: cli.format.or(file.format).unwrap_or(Format::Json),
        file,
    })
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn cmat(m: &CMat2) -> [[[f64; 2]; 2]; 2] {
    std::array::from_fn(|i| std::array::from_fn(|j| [m.m[i][j].re, m.m[i][j].im]))
}

#[derive(Serialize)]
struct IwasawaReport {
    input: [[[f64; 2]; 2]; 2],
    renormalized: bool,
    g_plus: [[[f64; 2]; 2]; 2],
    g_minus: [[[f64; 2]; 2]; 2],
    alpha: [f64; 2],
    beta: [f64; 2],
    a: f64,
    z: [f64; 2],
    residual: f64,
    unitarity_defect: f64,
}

fn cmd_iwasawa(s: &Settings, matrix: &Option<Vec<f64>>) -> Result<(), Failure> {
    let g = match matrix {
        Some(v) if v.len() == 8 => CMat2::new(
            Complex64::new(v[0], v[1]),
            Complex64::new(v[2], v[3]),
            Complex64::new(v[4], v[5]),
            Complex64::new(v[6], v[7]),
        ),
        Some(v) => return Err(Failure::Usage(format!("--matrix expects 8 numbers, got {}", v.len()))),
        None => Sampler::new(s.seed).group(descriptor()).matrix,
    };
    let det = g.det();
    let defect = (det - 1.0).norm();
    if !defect.is_finite() || defect > 1e-8 {
        return Err(Failure::Usage(format!("matrix is not unimodular: |det - 1| = {defect:.3e}")));
    }
    let renormalized = defect > 0.0;
    let gn = if renormalized {
        if defect > 1e-12 {
            eprintln!("warning: |det - 1| = {defect:.3e}, dividing by a square root of det");
        }
        g.scale(det.sqrt().inv())
    } else {
        g
    };
    let f = iwasawa(&gn).map_err(|e| Failure::Usage(e.to_string()))?;
    let (gp, gm) = (f.su2_part(), f.b_part());
    let report = IwasawaReport {
        input: cmat(&g),
        renormalized,
        g_plus: cmat(&gp),
        g_minus: cmat(&gm),
        alpha: [f.alpha.re, f.alpha.im],
        beta: [f.beta.re, f.beta.im],
        a: f.a,
        z: [f.z.re, f.z.im],
        residual: (gp * gm - gn).max_norm(),
        unitarity_defect: unitarity_defect(&gp),
    };
    emit(&s.out, &to_json(&report))
}

/// Explicit initial condition from 13 numbers, or a seeded random one.
fn initial_point(s: &Settings, init: &Option<String>, eta_minus: &Option<Vec<f64>>) -> Result<PhasePoint, Failure> {
    let init = init.clone().or(s.file.init.clone()).unwrap_or_else(|| "random".into());
    let eta_minus = eta_minus.clone().or(s.file.eta_minus.clone());
    if init == "random" {
        let minus = match eta_minus {
            Some(v) if v.len() == DIM_HALF => [v[0], v[1], v[2]],
            Some(v) => return Err(Failure::Usage(format!("--eta-minus expects 3 numbers, got {}", v.len()))),
            None => [0.0; DIM_HALF],
        };
        return Ok(flow_fixture(s.seed, minus));
    }
    if eta_minus.is_some() {
        return Err(Failure::Usage("--eta-minus only applies to a random initial condition".into()));
    }
    let v: Vec<f64> = init
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("--init: cannot parse {init}")))?;
    if v.len() != 13 {
        return Err(Failure::Usage(format!("--init expects 13 numbers, got {}", v.len())));
    }
    let (alpha, beta) = (Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3]));
    let unit = alpha.norm_sqr() + beta.norm_sqr();
    if (unit - 1.0).abs() > 1e-8 || !(v[4] > 0.0) {
        return Err(Failure::Usage("--init needs |alpha|^2 + |beta|^2 = 1 and a > 0".into()));
    }
    let sc = Sl2Coordinates {
        alpha: alpha / unit.sqrt(),
        beta: beta / unit.sqrt(),
        a: v[4],
        z: Complex64::new(v[5], v[6]),
        eta_plus: [v[7], v[8], v[9]],
        eta_minus: [v[10], v[11], v[12]],
    };
    Ok(sc.to_point())
}

#[derive(Serialize)]
struct BracketReport {
    seed: u64,
    point: Sl2Coordinates,
    fields: Vec<String>,
    dirac_n: Vec<Vec<f64>>,
    dirac_m: Vec<Vec<f64>>,
    xi_xi_n: [[f64; 3]; 3],
    xi_g_n: Vec<[[[f64; 2]; 2]; 2]>,
}

fn point_coords(p: &PhasePoint) -> Sl2Coordinates {
    let (gp, gm) = (p.g_plus.matrix, p.g_minus.matrix);
    let e = p.eta.coords;
    Sl2Coordinates {
        alpha: gp.get(0, 0),
        beta: gp.get(0, 1),
        a: gm.get(0, 0).re,
        z: gm.get(0, 1),
        eta_plus: [e[0], e[1], e[2]],
        eta_minus: [e[3], e[4], e[5]],
    }
}

fn cmd_brackets(s: &Settings, init: &Option<String>) -> Result<(), Failure> {
    let d = descriptor();
    let p = initial_point(s, init, &None)?;
    let fields = coordinate_fields(d);
    let df: Vec<_> = fields.iter().map(|f| f.differential(d, &p)).collect();
    let table = |br: fn(&GroupDescriptor, &_, &_, &PhasePoint) -> f64| -> Vec<Vec<f64>> {
        df.iter().map(|f| df.iter().map(|g| br(d, f, g, &p)).collect()).collect()
    };
    let ft = fundamental_brackets_n(d, &p);
    let report = BracketReport {
        seed: s.seed,
        point: point_coords(&p),
        fields: fields.iter().map(|f| f.name.clone()).collect(),
        dirac_n: table(dirac_bracket_n_diff),
        dirac_m: table(dirac_bracket_m_diff),
        xi_xi_n: ft.xi_xi,
        xi_g_n: ft.xi_t.iter().map(cmat).collect(),
    };
    emit(&s.out, &to_json(&report))
}

const CSV_COLUMNS: [&str; 15] = [
    "t",
    "re_alpha",
    "im_alpha",
    "re_beta",
    "im_beta",
    "a",
    "re_z",
    "im_z",
    "eta_plus_1",
    "eta_plus_2",
    "eta_plus_3",
    "xi^1",
    "xi^2",
    "xi^3",
    "H",
];

#[derive(Serialize, Debug, Clone)]
struct Row {
    t: f64,
    re_alpha: f64,
    im_alpha: f64,
    re_beta: f64,
    im_beta: f64,
    a: f64,
    re_z: f64,
    im_z: f64,
    eta_plus_1: f64,
    eta_plus_2: f64,
    eta_plus_3: f64,
    #[serde(rename = "xi^1")]
    xi_1: f64,
    #[serde(rename = "xi^2")]
    xi_2: f64,
    #[serde(rename = "xi^3")]
    xi_3: f64,
    #[serde(rename = "H")]
    h: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    gap: Option<f64>,
}

impl Row {
    fn new(t: f64, p: &PhasePoint, h: f64) -> Self {
        let c = point_coords(p);
        Row {
            t,
            re_alpha: c.alpha.re,
            im_alpha: c.alpha.im,
            re_beta: c.beta.re,
            im_beta: c.beta.im,
            a: c.a,
            re_z: c.z.re,
            im_z: c.z.im,
            eta_plus_1: c.eta_plus[0],
            eta_plus_2: c.eta_plus[1],
            eta_plus_3: c.eta_plus[2],
            xi_1: c.eta_minus[0],
            xi_2: c.eta_minus[1],
            xi_3: c.eta_minus[2],
            h,
            gap: None,
        }
    }

    fn values(&self) -> Vec<f64> {
        let mut v = vec![
            self.t,
            self.re_alpha,
            self.im_alpha,
            self.re_beta,
            self.im_beta,
            self.a,
            self.re_z,
            self.im_z,
            self.eta_plus_1,
            self.eta_plus_2,
            self.eta_plus_3,
            self.xi_1,
            self.xi_2,
            self.xi_3,
            self.h,
        ];
        v.extend(self.gap);
        v
    }
}

#[derive(Serialize)]
struct FlowReport<'a> {
    method: Method,
    hamiltonian: Hamiltonian,
    seed: u64,
    #[serde(rename = "T")]
    t_end: f64,
    steps: usize,
    rows: &'a [Row],
}

fn to_csv(rows: &[Row], with_gap: bool) -> String {
    let mut out = CSV_COLUMNS.join(",");
    if with_gap {
        out.push_str(",gap");
    }
    out.push('\n');
    for r in rows {
        let cells: Vec<String> = r.values().iter().map(|x| serde_json::to_string(x).expect("finite")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn collective(h: Hamiltonian) -> CollectiveHamiltonian {
    let d = descriptor();
    match h {
        Hamiltonian::Quadratic => CollectiveHamiltonian::quadratic(d),
        Hamiltonian::Quartic => CollectiveHamiltonian::quartic(d),
        Hamiltonian::KillingReal => CollectiveHamiltonian::killing_real(d),
    }
}

const BLOWUP: f64 = 1e8;

fn check_rows(rows: &[Row]) -> Result<(), Failure> {
    for r in rows {
        if r.values().iter().any(|x| !x.is_finite() || x.abs() > BLOWUP) {
            return Err(Failure::Blowup(format!("integration blew up near t = {}", r.t)));
        }
    }
    Ok(())
}

fn cmd_flow(
    s: &Settings,
    t_end: Option<f64>,
    steps: Option<usize>,
    method: Option<Method>,
    init: &Option<String>,
    eta_minus: &Option<Vec<f64>>,
    hamiltonian: Option<Hamiltonian>,
) -> Result<(), Failure> {
    let d = descriptor();
    let t_end = t_end.or(s.file.t_end).unwrap_or(5.0);
    let steps = steps.or(s.file.steps).unwrap_or(1000);
    let method = method.or(s.file.method).unwrap_or(Method::Both);
    let which = hamiltonian.or(s.file.hamiltonian).unwrap_or(Hamiltonian::KillingReal);
    if !(t_end.is_finite() && t_end >= 0.0) || steps == 0 {
        return Err(Failure::Usage("need T >= 0 and steps >= 1".into()));
    }
    let h = collective(which);
    let p0 = initial_point(s, init, eta_minus)?;
    let energy = |p: &PhasePoint| h.value(&d.coadj(&p.g, &p.eta));
    if t_end == 0.0 {
        let rows = [Row::new(0.0, &p0, energy(&p0))];
        return write_flow(s, method, which, t_end, steps, &rows);
    }

    let factorized = match method {
        Method::Rk4 => None,
        _ => match solve_by_factorization(d, &h, &p0, t_end, steps) {
            Ok(sol) => Some(sol),
            Err(Error::NotCharacter { defect }) => {
                return Err(Failure::NotCharacter(format!(
                    "eta_minus is not a character (defect {defect:.3e}); the factorization solution does not apply"
                )))
            }
            Err(e) => return Err(Failure::Blowup(e.to_string())),
        },
    };
    let rk = match method {
        Method::Factorization => None,
        _ => {
            let vf = |p: &PhasePoint| collective_vf(d, &h, p);
            Some(integrate_rk4(d, &vf, &p0, t_end, steps).map_err(|e| Failure::Blowup(e.to_string()))?)
        }
    };
    let mut rows: Vec<Row> = match (&rk, &factorized) {
        (Some(r), _) => r.times.iter().zip(&r.points).map(|(t, p)| Row::new(*t, p, energy(p))).collect(),
        (None, Some(f)) => {
            f.trajectory.times.iter().zip(&f.trajectory.points).map(|(t, p)| Row::new(*t, p, energy(p))).collect()
        }
        (None, None) => unreachable!("at least one method runs"),
    };
    check_rows(&rows)?;
    if let (Some(r), Some(f)) = (&rk, &factorized) {
        for (row, (a, b)) in rows.iter_mut().zip(r.points.iter().zip(&f.trajectory.points)) {
            row.gap = Some(point_gap(a, b));
        }
    }
    write_flow(s, method, which, t_end, steps, &rows)?;
    let worst = rows.iter().filter_map(|r| r.gap).fold(0.0, f64::max);
    let tol = s.tol.get("flow.gap");
    if method == Method::Both {
        eprintln!("max gap {worst:.3e} (tolerance {tol:.1e})");
        if !(worst <= tol) {
            return Err(Failure::ChecksFailed(format!("max gap {worst:.3e} exceeds {tol:.1e}")));
        }
    }
    Ok(())
}

fn write_flow(
    s: &Settings,
    method: Method,
    which: Hamiltonian,
    t_end: f64,
    steps: usize,
    rows: &[Row],
) -> Result<(), Failure> {
    let text = match s.format {
        Format::Csv => to_csv(rows, rows.iter().any(|r| r.gap.is_some())),
        Format::Json => to_json(&FlowReport { method, hamiltonian: which, seed: s.seed, t_end, steps, rows }),
    };
    emit(&s.out, &text)
}

#[derive(Serialize)]
struct OrbitReport {
    seed: u64,
    point: Sl2Coordinates,
    j_plus: [f64; 6],
    j_minus: [f64; 6],
    l_plus: [f64; 6],
    l_minus: [f64; 6],
    reduced_hamiltonian: f64,
    orbit_vf_plus: [f64; 6],
    orbit_vf_minus: [f64; 6],
    is_character: bool,
    /// sup-norm gap between the reduced AKS field and the Dirac field of the quadratic invariant
    aks_gap: Option<f64>,
}

fn cmd_orbit(s: &Settings, init: &Option<String>) -> Result<(), Failure> {
    let d = descriptor();
    let p = initial_point(s, init, &None)?;
    let (jp, jm) = aks_momentum_j(d, &p);
    let (lp, lm) = orbit_map_unchecked(d, &p);
    let (vp, vm) = orbit_vf(d, &lp, &lm);
    let quad = CollectiveHamiltonian::quadratic(d);
    let aks_gap = aks_vf_on_n_with(d, &quad, &p).ok().map(|v| v.max_gap(&collective_vf(d, &quad, &p)));
    let report = OrbitReport {
        seed: s.seed,
        point: point_coords(&p),
        j_plus: jp.coords,
        j_minus: jm.coords,
        l_plus: lp.coords,
        l_minus: lm.coords,
        reduced_hamiltonian: reduced_hamiltonian(d, &lp, &lm),
        orbit_vf_plus: vp.coords,
        orbit_vf_minus: vm.coords,
        is_character: d.is_character(&DualVector::new(p.eta.minus().coords)),
        aks_gap,
    };
    emit(&s.out, &to_json(&report))
}

fn cmd_verify(s: &Settings, suite: &str) -> Result<(), Failure> {
    let checks: Vec<Check> = if suite == "all" {
        run_all(s.seed, &s.tol)
    } else {
        run_suite(suite, s.seed, &s.tol).ok_or_else(|| {
            Failure::Usage(format!("unknown suite {suite:?}; expected one of: all, {}", SUITES.join(", ")))
        })?
    };
    for c in &checks {
        eprintln!(
            "{} {}/{}: residual {:.3e}, tolerance {:.1e}",
            if c.pass { "PASS" } else { "FAIL" },
            c.suite,
            c.check,
            c.residual,
            c.tolerance
        );
    }
    emit(&s.out, &to_json(&checks))?;
    let failed = checks.iter().filter(|c| !c.pass).count();
    if failed > 0 {
        return Err(Failure::ChecksFailed(format!("{failed} of {} checks failed", checks.len())));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let s = settings(cli)?;
    match &cli.command {
        Command::Iwasawa { matrix } => cmd_iwasawa(&s, matrix),
        Command::Brackets { init } => cmd_brackets(&s, init),
        Command::Flow { t_end, steps, method, init, eta_minus, hamiltonian } => {
            cmd_flow(&s, *t_end, *steps, *method, init, eta_minus, *hamiltonian)
        }
        Command::Orbit { init } => cmd_orbit(&s, init),
        Command::Verify { suite } => cmd_verify(&s, suite),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse_from(expand_tol_flags(std::env::args()));
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            if matches!(f, Failure::Usage(_)) {
                eprintln!("run with --help for usage");
            }
            ExitCode::from(f.code())
        }
    }
}
