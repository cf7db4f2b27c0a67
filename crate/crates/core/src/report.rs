//! Reports, file formats and the verification harness behind the
//! `qrng-privacy` binary.
//!
//! Every number written by this module goes through [`format_number`], so the
//! output is byte-stable for fixed inputs.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::Deserialize;
use serde_json::{Map, Number, Value};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::information::{
    concurrence_from_purity, holevo_bound, i_max, jrw_bound, mutual_information,
    state_bounds, PrivacyBounds,
};
use crate::linalg::{self, CMat2, Vec3};
use crate::measurement::{joint_distribution, JointDistribution, MeasurementDirection};
use crate::optimizer::{ellipse_sweep, optimal_attacker_analytic, verify_convexity};
use crate::oracle::{born_rule_joint, table_mutual_information};
use crate::randomized::i_max_random;
use crate::state::{
    bloch_vector, concurrence, correlation_matrix, partial_trace, schmidt_decompose,
    StateSampler, Subsystem, TwoQubitState,
};

/// Allowed `|e_A·a_A|` for a user direction given on the command line.
pub const CLI_PERPENDICULAR_TOL: f64 = 1e-6;
/// Most negative eigenvalue accepted (then clamped) in tomography input.
pub const TOMOGRAPHY_EIGEN_TOL: f64 = 1e-9;
const TOMOGRAPHY_TOL: f64 = 1e-9;

/// Process exit status for each failure class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    Verification,
    Usage,
    Physicality,
    Precondition,
}

impl FailureKind {
    pub fn exit_code(self) -> u8 {
        match self {
            FailureKind::Verification => 1,
            FailureKind::Usage => 2,
            FailureKind::Physicality => 3,
            FailureKind::Precondition => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub kind: FailureKind,
    pub message: String,
}

impl Failure {
    pub fn new(kind: FailureKind, message: impl Into<String>) -> Self {
        Self {
            kind,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        self.kind.exit_code()
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Failure {}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::NotNormalized(_)
            | Error::BlochTooLong(_)
            | Error::NotHermitian(_)
            | Error::InvalidTrace(_)
            | Error::NotPositive(_)
            | Error::NegativeProbability(_) => FailureKind::Physicality,
            Error::NotUnitVector(_) | Error::Precondition(_) => FailureKind::Precondition,
            Error::Domain { .. } | Error::DegenerateGeometry(_) => FailureKind::Usage,
        };
        Failure::new(kind, e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, Failure>;

/// 12 significant digits; scientific notation below `1e-4` in magnitude and
/// plain `0` for zero.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    if x.abs() < 1e-4 {
        return sci;
    }
    // Take the exponent after rounding, so 0.9999999999999 becomes 1.00000000000.
    let exp: i32 = sci
        .split_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("formatted float has an exponent");
    let decimals = (11 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

fn json_number(x: f64) -> Value {
    Number::from_str(&format_number(x))
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

fn json_vector(v: &Vec3) -> Value {
    Value::Array(v.iter().map(|&x| json_number(x)).collect())
}

/// SHA-256 of the input bytes, hex encoded.
pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Attacker directions reported by `analyze`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalDirections {
    pub user_lab: Vec3,
    pub user_schmidt: Vec3,
    pub attacker_schmidt: Vec3,
    pub attacker_lab: Vec3,
    pub attacker_lab_alternate: Vec3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrivacyReport {
    pub concurrence: f64,
    pub purity: f64,
    pub i_max: f64,
    pub holevo: f64,
    pub jrw: f64,
    /// Absent for tomography input, where the purification is unknown.
    pub directions: Option<OptimalDirections>,
    pub input_digest: String,
}

impl PrivacyReport {
    fn from_bounds(b: &PrivacyBounds, directions: Option<OptimalDirections>, input: &[u8]) -> Self {
        Self {
            concurrence: b.concurrence,
            purity: b.purity,
            i_max: b.i_max,
            holevo: b.holevo,
            jrw: b.jrw,
            directions,
            input_digest: digest(input),
        }
    }

    pub fn to_json_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("concurrence".into(), json_number(self.concurrence));
        m.insert("purity".into(), json_number(self.purity));
        m.insert("i_max".into(), json_number(self.i_max));
        m.insert("holevo".into(), json_number(self.holevo));
        m.insert("jrw".into(), json_number(self.jrw));
        match &self.directions {
            Some(d) => {
                let mut user = Map::new();
                user.insert("lab".into(), json_vector(&d.user_lab));
                user.insert("schmidt".into(), json_vector(&d.user_schmidt));
                m.insert("user_direction".into(), Value::Object(user));
                let mut opt = Map::new();
                opt.insert("schmidt".into(), json_vector(&d.attacker_schmidt));
                opt.insert("lab".into(), json_vector(&d.attacker_lab));
                opt.insert("lab_alternate".into(), json_vector(&d.attacker_lab_alternate));
                m.insert("optimal_directions".into(), Value::Object(opt));
            }
            None => {
                m.insert("user_direction".into(), Value::Null);
                m.insert("optimal_directions".into(), Value::Null);
            }
        }
        m.insert("input_digest".into(), Value::String(format!("sha256:{}", self.input_digest)));
        Value::Object(m)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value())
            .expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    amplitudes: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityFile {
    rho: [[[f64; 2]; 2]; 2],
}

fn c64(p: [f64; 2]) -> num_complex::Complex64 {
    num_complex::Complex64::new(p[0], p[1])
}

/// `{"amplitudes": [[re, im], ×4]}` in the order `00, 01, 10, 11`.
pub fn parse_state(text: &str) -> CliResult<TwoQubitState> {
    let file: StateFile = serde_json::from_str(text)
        .map_err(|e| Failure::new(FailureKind::Usage, format!("malformed state JSON: {e}")))?;
    if file.amplitudes.len() != 4 {
        return Err(Failure::new(
            FailureKind::Usage,
            format!("expected 4 amplitudes, found {}", file.amplitudes.len()),
        ));
    }
    let a = &file.amplitudes;
    Ok(TwoQubitState::new([
        [c64(a[0]), c64(a[1])],
        [c64(a[2]), c64(a[3])],
    ])?)
}

/// `{"rho": [[[re, im], [re, im]], [[re, im], [re, im]]]}`.
pub fn parse_density(text: &str) -> CliResult<CMat2> {
    let file: DensityFile = serde_json::from_str(text)
        .map_err(|e| Failure::new(FailureKind::Usage, format!("malformed density JSON: {e}")))?;
    let r = file.rho;
    Ok([[c64(r[0][0]), c64(r[0][1])], [c64(r[1][0]), c64(r[1][1])]])
}

/// Every physicality property `rho` violates; empty when it is a valid
/// density matrix up to the tomography tolerances.
pub fn density_violations(rho: &CMat2) -> Vec<String> {
    let mut out = Vec::new();
    if rho.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        out.push("entries must be finite".to_string());
        return out;
    }
    let herm = (rho[0][1] - rho[1][0].conj())
        .norm()
        .max(rho[0][0].im.abs())
        .max(rho[1][1].im.abs());
    if herm > TOMOGRAPHY_TOL {
        out.push(format!("not Hermitian (deviation {herm:e})"));
    }
    let tr = rho[0][0].re + rho[1][1].re;
    if (tr - 1.0).abs() > TOMOGRAPHY_TOL {
        out.push(format!("trace is not 1 (trace {tr})"));
    }
    let sym = [
        [rho[0][0], 0.5 * (rho[0][1] + rho[1][0].conj())],
        [0.5 * (rho[1][0] + rho[0][1].conj()), rho[1][1]],
    ];
    let (eig, _) = linalg::hermitian_eigen(&sym);
    if eig[1] < -TOMOGRAPHY_EIGEN_TOL {
        out.push(format!("not positive semi-definite (eigenvalue {:e})", eig[1]));
    }
    out
}

/// Purity from the eigenvalues after clamping the small negative ones.
pub fn tomography_purity(rho: &CMat2) -> CliResult<f64> {
    let violations = density_violations(rho);
    if !violations.is_empty() {
        return Err(Failure::new(
            FailureKind::Physicality,
            format!("non-physical density matrix: {}", violations.join("; ")),
        ));
    }
    let (eig, _) = linalg::hermitian_eigen(rho);
    let l0 = eig[0].clamp(0.0, 1.0);
    let l1 = eig[1].clamp(0.0, 1.0);
    let s = l0 + l1;
    Ok(((l0 * l0 + l1 * l1) / (s * s)).clamp(0.5, 1.0))
}

fn parse_direction(components: &[f64]) -> CliResult<Vec3> {
    if components.len() != 3 {
        return Err(Failure::new(
            FailureKind::Usage,
            format!("direction needs 3 components, got {}", components.len()),
        ));
    }
    Ok([components[0], components[1], components[2]])
}

/// Full report for a pure state. The user direction defaults to the `+x` axis
/// of the Schmidt frame; a given direction must be a unit vector with
/// `|e_A·a_A| ≤ 1e-6` and is then projected onto the plane ⟂ `a_A`.
pub fn analyze(input: &str, direction: Option<&[f64]>) -> CliResult<PrivacyReport> {
    let state = parse_state(input)?;
    let frame = schmidt_decompose(&state).frame();
    let a_a = *bloch_vector(&partial_trace(&state, Subsystem::A)).components();
    let user = match direction {
        None => frame.to_lab(Subsystem::A, &[1.0, 0.0, 0.0]),
        Some(d) => {
            let e = parse_direction(d)?;
            let n = linalg::norm(&e);
            if (n - 1.0).abs() > CLI_PERPENDICULAR_TOL {
                return Err(Failure::new(
                    FailureKind::Precondition,
                    format!("user direction must be a unit vector (norm {n})"),
                ));
            }
            let alpha = linalg::dot(&e, &a_a);
            if alpha.abs() > CLI_PERPENDICULAR_TOL {
                return Err(Failure::new(
                    FailureKind::Precondition,
                    format!("user direction must be perpendicular to the Bloch vector (e_A·a_A = {alpha})"),
                ));
            }
            let an2 = linalg::dot(&a_a, &a_a);
            let projected = if an2 > 1e-24 {
                linalg::sub(&e, &linalg::scale(&a_a, alpha / an2))
            } else {
                e
            };
            linalg::scale(&projected, 1.0 / linalg::norm(&projected))
        }
    };
    let e_a = MeasurementDirection::new(user)?;
    let opt = optimal_attacker_analytic(&state, &e_a)?;
    let bounds = state_bounds(&state)?;
    let directions = OptimalDirections {
        user_lab: user,
        user_schmidt: frame.to_schmidt(Subsystem::A, &user),
        attacker_schmidt: opt.best_direction_schmidt,
        attacker_lab: *opt.best_direction.components(),
        attacker_lab_alternate: *opt
            .alternate_direction
            .expect("analytic optimum has a mirror")
            .components(),
    };
    Ok(PrivacyReport::from_bounds(&bounds, Some(directions), input.as_bytes()))
}

/// Bounds from the user's reduced state alone: purity, then
/// `C = √(2(1 − P))`.
pub fn tomography(input: &str) -> CliResult<PrivacyReport> {
    let rho = parse_density(input)?;
    let p = tomography_purity(&rho)?;
    let c = concurrence_from_purity(p)?;
    let bounds = PrivacyBounds {
        i_max: i_max(c)?,
        holevo: holevo_bound(c)?,
        jrw: jrw_bound(c)?,
        concurrence: c,
        purity: p,
    };
    Ok(PrivacyReport::from_bounds(&bounds, None, input.as_bytes()))
}

/// `C,purity,i_max,holevo,jrw[,i_max_random]` for `steps` evenly spaced
/// concurrences from `c_min` to `c_max` inclusive.
pub fn sweep_csv(c_min: f64, c_max: f64, steps: usize, gamma: Option<f64>) -> CliResult<String> {
    let usage = |m: String| Failure::new(FailureKind::Usage, m);
    if !(0.0..=1.0).contains(&c_min) || !(0.0..=1.0).contains(&c_max) {
        return Err(usage(format!("concurrences must lie in [0, 1] (got {c_min}, {c_max})")));
    }
    if c_min >= c_max {
        return Err(usage(format!("c_min must be below c_max (got {c_min} ≥ {c_max})")));
    }
    if steps < 2 {
        return Err(usage(format!("steps must be at least 2 (got {steps})")));
    }
    if let Some(g) = gamma {
        if !(0.0..=std::f64::consts::PI).contains(&g) {
            return Err(usage(format!("gamma must lie in [0, π] (got {g})")));
        }
    }
    let mut out = String::from("C,purity,i_max,holevo,jrw");
    if gamma.is_some() {
        out.push_str(",i_max_random");
    }
    out.push('\n');
    for k in 0..steps {
        let c = if k == steps - 1 {
            c_max
        } else {
            c_min + (c_max - c_min) * k as f64 / (steps - 1) as f64
        };
        let b = crate::information::privacy_bounds(c)?;
        write!(
            out,
            "{},{},{},{},{}",
            format_number(c),
            format_number(b.purity),
            format_number(b.i_max),
            format_number(b.holevo),
            format_number(b.jrw)
        )
        .expect("writing to a String");
        if let Some(g) = gamma {
            write!(out, ",{}", format_number(i_max_random(c, g)?)).expect("writing to a String");
        }
        out.push('\n');
    }
    Ok(out)
}

/// `phi,I` along the upper half of the constraint ellipse.
pub fn ellipse_csv(c: f64, n_points: usize) -> CliResult<String> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Failure::new(
            FailureKind::Usage,
            format!("concurrence must lie in (0, 1) (got {c})"),
        ));
    }
    let sweep = ellipse_sweep(c, n_points)?;
    let mut out = String::from("phi,I\n");
    for (phi, v) in sweep.phis.iter().zip(&sweep.values) {
        writeln!(out, "{},{}", format_number(*phi), format_number(*v)).expect("writing to a String");
    }
    Ok(out)
}

/// Formulas under test in [`run_verification`]. Swapping one for a corrupted
/// version must make the harness fail.
#[derive(Clone, Copy)]
pub struct Formulas {
    pub i_max: fn(f64) -> crate::error::Result<f64>,
    pub joint: fn(
        &TwoQubitState,
        &MeasurementDirection,
        &MeasurementDirection,
    ) -> crate::error::Result<JointDistribution>,
}

impl Default for Formulas {
    fn default() -> Self {
        Self {
            i_max,
            joint: joint_distribution,
        }
    }
}

fn corrupted_i_max(c: f64) -> crate::error::Result<f64> {
    Ok(i_max(c)? * (1.0 - 1e-3))
}

impl Formulas {
    /// `I_max` scaled down by 0.1 %.
    pub fn corrupted() -> Self {
        Self {
            i_max: corrupted_i_max,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checks: usize,
    pub failures: usize,
    /// Largest deviation seen, in the suite's own units.
    pub worst: f64,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checks: 0,
            failures: 0,
            worst: 0.0,
        }
    }

    fn record(&mut self, deviation: f64, tol: f64) {
        self.checks += 1;
        let d = if deviation.is_nan() { f64::INFINITY } else { deviation };
        self.worst = self.worst.max(d);
        if d > tol {
            self.failures += 1;
        }
    }

    fn fail(&mut self) {
        self.checks += 1;
        self.failures += 1;
        self.worst = f64::INFINITY;
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifySummary {
    pub seed: u64,
    pub states: usize,
    pub suites: Vec<SuiteResult>,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    pub fn render(&self) -> String {
        let mut out = format!("seed {} states {}\n", self.seed, self.states);
        writeln!(out, "{:<20} {:>8} {:>8} {:>20} status", "suite", "checks", "failures", "worst")
            .expect("writing to a String");
        for s in &self.suites {
            writeln!(
                out,
                "{:<20} {:>8} {:>8} {:>20} {}",
                s.name,
                s.checks,
                s.failures,
                format_number(s.worst),
                if s.passed() { "PASS" } else { "FAIL" }
            )
            .expect("writing to a String");
        }
        writeln!(out, "{}", if self.passed() { "ALL PASS" } else { "FAILED" })
            .expect("writing to a String");
        out
    }
}

/// Runs the oracle-equivalence, convexity, bound-ordering and Schmidt-frame
/// suites on `n_states` random states drawn from `seed`.
pub fn run_verification(seed: u64, n_states: usize, formulas: &Formulas) -> VerifySummary {
    let mut sampler = StateSampler::new(seed);
    let mut oracle = SuiteResult::new("oracle-equivalence");
    let mut convexity = SuiteResult::new("convexity");
    let mut ordering = SuiteResult::new("bound-ordering");
    let mut schmidt = SuiteResult::new("schmidt-frame");

    for _ in 0..n_states {
        let state = sampler.pure_state();
        let c = concurrence(&state);
        let a_a = *bloch_vector(&partial_trace(&state, Subsystem::A)).components();

        // Joint distribution and mutual information against the Born rule.
        let e_a = sampler.direction();
        let e_b = sampler.direction();
        match (formulas.joint)(&state, &e_a, &e_b) {
            Ok(w) => {
                let born = born_rule_joint(&state, &e_a, &e_b);
                let dev = (0..4)
                    .map(|k| (w.get(k / 2, k % 2) - born[k / 2][k % 2]).abs())
                    .fold(0.0, f64::max);
                oracle.record(dev, 1e-10);
                oracle.record(
                    (mutual_information(&w) - table_mutual_information(&born)).abs(),
                    1e-10,
                );
            }
            Err(_) => oracle.fail(),
        }

        // Closed-form maximum against the information at the optimal setting.
        let e_perp = sampler.perpendicular_direction(&a_a);
        let exact = (formulas.i_max)(c);
        match (optimal_attacker_analytic(&state, &e_perp), &exact) {
            (Ok(opt), Ok(formula)) => {
                let born = born_rule_joint(&state, &e_perp, &opt.best_direction);
                oracle.record((table_mutual_information(&born) - *formula).abs(), 1e-9);
            }
            _ => oracle.fail(),
        }

        // Convexity of I(κ, β) inside this state's ellipse.
        let s = (1.0 - c * c).max(0.0).sqrt();
        let mut point = || {
            let r = sampler.uniform().sqrt();
            let t = std::f64::consts::TAU * sampler.uniform();
            (c * r * t.cos(), s * r * t.sin())
        };
        let pairs: Vec<_> = (0..4).map(|_| (point(), point())).collect();
        let lambdas: Vec<f64> = (0..4).map(|_| sampler.uniform()).collect();
        match verify_convexity(&pairs, &lambdas) {
            Ok(r) => {
                for _ in 0..r.checked {
                    convexity.checks += 1;
                }
                convexity.failures += r.violations;
                convexity.worst = convexity.worst.max(r.max_violation.max(0.0));
            }
            Err(_) => convexity.fail(),
        }

        // JRW ≤ I_max ≤ Holevo.
        match (exact, holevo_bound(c), jrw_bound(c)) {
            (Ok(im), Ok(h), Ok(j)) => {
                ordering.record((j - im).max(0.0), 1e-9);
                ordering.record((im - h).max(0.0), 1e-9);
            }
            _ => ordering.fail(),
        }

        // Correlation matrix in the Schmidt frame and reconstruction.
        let dec = schmidt_decompose(&state);
        let k = correlation_matrix(&state).in_frame(&dec.frame()).entries;
        let target = [[c, 0.0, 0.0], [0.0, -c, 0.0], [0.0, 0.0, 1.0]];
        let dev = (0..9)
            .map(|i| (k[i / 3][i % 3] - target[i / 3][i % 3]).abs())
            .fold(0.0, f64::max);
        schmidt.record(dev, 1e-8);
        schmidt.record(1.0 - dec.reconstruct().fidelity(&state), 1e-10);
    }

    VerifySummary {
        seed,
        states: n_states,
        suites: vec![oracle, convexity, ordering, schmidt],
    }
}
