//! Numerical checks of flows: matrix exponentials, closure residuals, and group orbits in a
//! matrix representation.

use std::io::{self, Write};

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::config::{ToleranceConfig, DEFAULT_EVIDENCE_HORIZON};
use crate::periodicity::FlowVerdict;
use crate::spectral::numeric_rank;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("matrix exponential overflows: |tM|_1 = {norm:e}")]
    Overflow { norm: f64 },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is {rows}x{cols}, expected {expected}x{expected}")]
    Shape { rows: usize, cols: usize, expected: usize },
    #[error("initial group element is singular")]
    SingularInitial,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("matrix is too far from the identity for the logarithm series")]
    LogOutOfRange,
}

/// Largest `‖tM‖₁` accepted by [`expm`].
pub const EXPM_NORM_GUARD: f64 = 1e5;

const THETA_13: f64 = 5.371920351148152;

const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn norm1(m: &DMatrix<f64>) -> f64 {
    m.column_iter().map(|c| c.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// `e^{tM}` by scaling and squaring with the degree-13 Padé approximant.
pub fn expm(m: &DMatrix<f64>, t: f64) -> Result<DMatrix<f64>, FlowError> {
    if m.nrows() != m.ncols() {
        return Err(FlowError::Shape { rows: m.nrows(), cols: m.ncols(), expected: m.nrows() });
    }
    if !t.is_finite() || m.iter().any(|v| !v.is_finite()) {
        return Err(FlowError::NonFinite);
    }
    let n = m.nrows();
    let a = m * t;
    let norm = norm1(&a);
    if norm > EXPM_NORM_GUARD {
        return Err(FlowError::Overflow { norm });
    }
    let s = if norm > THETA_13 { (norm / THETA_13).log2().ceil() as i32 } else { 0 };
    let a = a / 2f64.powi(s);
    let id = DMatrix::<f64>::identity(n, n);
    let b = &PADE_13;
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9]) + &a6 * b[7] + &a4 * b[5] + &a2 * b[3] + &id * b[1];
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8]) + &a6 * b[6] + &a4 * b[4] + &a2 * b[2] + &id * b[0];
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.lu().solve(&p).ok_or(FlowError::Overflow { norm })?;
    for _ in 0..s {
        r = &r * &r;
    }
    if r.iter().any(|v| !v.is_finite()) {
        return Err(FlowError::Overflow { norm });
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowSample {
    pub t: f64,
    pub matrix: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    /// Largest Frobenius-norm residual over the samples.
    pub max_residual: f64,
    pub argmax_t: f64,
    pub samples: usize,
    pub horizon: f64,
}

/// `samples` equispaced times in `[0, horizon]`.
pub fn time_grid(horizon: f64, samples: usize) -> Vec<f64> {
    if samples < 2 {
        return vec![0.0];
    }
    (0..samples).map(|k| horizon * k as f64 / (samples - 1) as f64).collect()
}

fn check_samples(horizon: f64, samples: usize) -> Result<(), FlowError> {
    if samples < 2 {
        return Err(FlowError::InvalidArgument("at least two samples are required".into()));
    }
    if !(horizon.is_finite() && horizon >= 0.0) {
        return Err(FlowError::InvalidArgument(format!("horizon must be finite and non-negative, got {horizon}")));
    }
    Ok(())
}

/// `max_t ‖e^{(t+T)D} − e^{tD}‖_F` over `samples` equispaced `t ∈ [0, horizon]`.
pub fn flow_period_residual(d: &DMatrix<f64>, period: f64, horizon: f64, samples: usize) -> Result<ResidualReport, FlowError> {
    check_samples(horizon, samples)?;
    if !(period.is_finite() && period > 0.0) {
        return Err(FlowError::InvalidArgument(format!("period must be positive, got {period}")));
    }
    let n = d.nrows();
    let jump = expm(d, period)? - DMatrix::identity(n, n);
    let mut report = ResidualReport { max_residual: 0.0, argmax_t: 0.0, samples, horizon };
    for t in time_grid(horizon, samples) {
        let r = (expm(d, t)? * &jump).norm();
        if r > report.max_residual {
            report.max_residual = r;
            report.argmax_t = t;
        }
    }
    Ok(report)
}

/// `Σ xᵢ·rep(Eᵢ)`.
pub fn represent(rep: &[DMatrix<f64>], x: &[f64]) -> Result<DMatrix<f64>, FlowError> {
    if rep.len() != x.len() || rep.is_empty() {
        return Err(FlowError::InvalidArgument(format!(
            "{} coordinates for a representation of {} matrices",
            x.len(),
            rep.len()
        )));
    }
    let m = rep[0].nrows();
    let mut out = DMatrix::zeros(m, m);
    for (r, c) in rep.iter().zip(x) {
        out += r * *c;
    }
    Ok(out)
}

fn check_initial(g0: &DMatrix<f64>, size: usize) -> Result<(), FlowError> {
    if g0.nrows() != size || g0.ncols() != size {
        return Err(FlowError::Shape { rows: g0.nrows(), cols: g0.ncols(), expected: size });
    }
    if numeric_rank(g0, 1e-12) < size {
        return Err(FlowError::SingularInitial);
    }
    Ok(())
}

/// Which group-level flow to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitKind {
    /// `exp(−tX̂)·g₀·exp(tX̂)`, whose differential at the identity is `e^{−t·ad x}`.
    Conjugation,
    /// `exp(tX̂)·g₀`.
    Invariant,
}

fn orbit_point(kind: OrbitKind, xhat: &DMatrix<f64>, g0: &DMatrix<f64>, t: f64) -> Result<DMatrix<f64>, FlowError> {
    Ok(match kind {
        OrbitKind::Conjugation => expm(xhat, -t)? * g0 * expm(xhat, t)?,
        OrbitKind::Invariant => expm(xhat, t)? * g0,
    })
}

pub fn orbit(kind: OrbitKind, rep: &[DMatrix<f64>], x: &[f64], g0: &DMatrix<f64>, ts: &[f64]) -> Result<Vec<FlowSample>, FlowError> {
    let xhat = represent(rep, x)?;
    check_initial(g0, xhat.nrows())?;
    ts.iter()
        .map(|&t| Ok(FlowSample { t, matrix: orbit_point(kind, &xhat, g0, t)? }))
        .collect()
}

/// Linear flow of the inner derivation `−ad(x)` through `g₀`.
pub fn conjugation_orbit(rep: &[DMatrix<f64>], x: &[f64], g0: &DMatrix<f64>, ts: &[f64]) -> Result<Vec<FlowSample>, FlowError> {
    orbit(OrbitKind::Conjugation, rep, x, g0, ts)
}

/// Right-invariant flow `exp(tX)·g₀`.
pub fn invariant_orbit(rep: &[DMatrix<f64>], x: &[f64], g0: &DMatrix<f64>, ts: &[f64]) -> Result<Vec<FlowSample>, FlowError> {
    orbit(OrbitKind::Invariant, rep, x, g0, ts)
}

/// `max_t ‖g(t+T) − g(t)‖_F` along a group orbit.
pub fn orbit_period_residual(
    kind: OrbitKind,
    rep: &[DMatrix<f64>],
    x: &[f64],
    g0: &DMatrix<f64>,
    period: f64,
    horizon: f64,
    samples: usize,
) -> Result<ResidualReport, FlowError> {
    check_samples(horizon, samples)?;
    let xhat = represent(rep, x)?;
    check_initial(g0, xhat.nrows())?;
    let mut report = ResidualReport { max_residual: 0.0, argmax_t: 0.0, samples, horizon };
    for t in time_grid(horizon, samples) {
        let r = (orbit_point(kind, &xhat, g0, t + period)? - orbit_point(kind, &xhat, g0, t)?).norm();
        if r > report.max_residual {
            report.max_residual = r;
            report.argmax_t = t;
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvidenceOutcome {
    Pass,
    Fail,
    Inconclusive,
}

impl EvidenceOutcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
            Self::Inconclusive => "inconclusive",
        }
    }
}

/// Numerical support for a verdict. For non-periodic verdicts this is falsification evidence over
/// a finite horizon, never a proof.
#[derive(Debug, Clone, PartialEq)]
pub struct Evidence {
    pub outcome: EvidenceOutcome,
    /// Residual at the claimed period, or of `e^{tD} − I` for the identity flow.
    pub closure: Option<ResidualReport>,
    /// Residuals at `T/2`, `T/3`, `2T/3`.
    pub minimality: Vec<(f64, f64)>,
    /// Smallest `‖e^{TD} − I‖_F` over the time grid and where it occurs.
    pub grid_minimum: Option<(f64, f64)>,
    pub note: String,
}

/// Number of grid points in the non-periodic sweep.
const EVIDENCE_GRID: usize = 1024;

/// Smallest `‖e^{TD} − I‖_F` over `T` on an equispaced grid in `[horizon/N, horizon]`.
/// Times at which the exponential overflows count as infinitely far from the identity.
pub fn return_grid_minimum(d: &DMatrix<f64>, horizon: f64, points: usize) -> Result<(f64, f64), FlowError> {
    let n = d.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let mut best = (f64::NAN, f64::INFINITY);
    for k in 1..=points {
        let t = horizon * k as f64 / points as f64;
        let r = match expm(d, t) {
            Ok(e) => (e - &id).norm(),
            Err(FlowError::Overflow { .. }) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        if r < best.1 {
            best = (t, r);
        }
    }
    Ok(best)
}

/// Binds a verdict for `e^{tD}` to numerical evidence.
pub fn verify_verdict(d: &DMatrix<f64>, verdict: &FlowVerdict, cfg: &ToleranceConfig) -> Result<Evidence, FlowError> {
    let n = d.nrows();
    match verdict {
        FlowVerdict::PeriodicFlow { period, .. } => {
            let t = period.value;
            let horizon = cfg.horizon.unwrap_or(4.0 * t);
            let closure = flow_period_residual(d, t, horizon, cfg.samples)?;
            let mut minimality = Vec::new();
            for frac in [0.5, 1.0 / 3.0, 2.0 / 3.0] {
                let r = flow_period_residual(d, t * frac, horizon, cfg.samples)?;
                minimality.push((t * frac, r.max_residual));
            }
            let closes = closure.max_residual <= cfg.period_tol;
            let minimal = minimality.iter().all(|(_, r)| *r >= cfg.separation);
            let note = match (closes, minimal) {
                (true, true) => "flow closes at T and at no tested fraction of T".to_string(),
                (false, _) => format!("closure residual {:e} exceeds {:e}", closure.max_residual, cfg.period_tol),
                (true, false) => "flow also closes at a fraction of T".to_string(),
            };
            Ok(Evidence {
                outcome: if closes && minimal { EvidenceOutcome::Pass } else { EvidenceOutcome::Fail },
                closure: Some(closure),
                minimality,
                grid_minimum: None,
                note,
            })
        }
        FlowVerdict::IdentityFlow => {
            let horizon = cfg.horizon.unwrap_or(DEFAULT_EVIDENCE_HORIZON);
            let id = DMatrix::<f64>::identity(n, n);
            let mut report = ResidualReport { max_residual: 0.0, argmax_t: 0.0, samples: cfg.samples, horizon };
            for t in time_grid(horizon, cfg.samples) {
                let r = (expm(d, t)? - &id).norm();
                if r > report.max_residual {
                    report.max_residual = r;
                    report.argmax_t = t;
                }
            }
            let pass = report.max_residual <= cfg.period_tol;
            Ok(Evidence {
                outcome: if pass { EvidenceOutcome::Pass } else { EvidenceOutcome::Fail },
                closure: Some(report),
                minimality: Vec::new(),
                grid_minimum: None,
                note: "e^{tD} compared with the identity on the time grid".to_string(),
            })
        }
        FlowVerdict::NoPeriodicOrbits { .. } => {
            let horizon = cfg.horizon.unwrap_or(DEFAULT_EVIDENCE_HORIZON);
            let points = EVIDENCE_GRID.max(cfg.samples);
            let (t, r) = return_grid_minimum(d, horizon, points)?;
            let separated = r >= cfg.separation;
            Ok(Evidence {
                outcome: if separated { EvidenceOutcome::Pass } else { EvidenceOutcome::Inconclusive },
                closure: None,
                minimality: Vec::new(),
                grid_minimum: Some((t, r)),
                note: format!(
                    "evidence only: no return to the identity for T in [{:.4}, {horizon}] on a {points}-point grid",
                    horizon / points as f64
                ),
            })
        }
        FlowVerdict::SpectralPeriodicInconclusive { .. } => Ok(Evidence {
            outcome: EvidenceOutcome::Inconclusive,
            closure: None,
            minimality: Vec::new(),
            grid_minimum: None,
            note: "nothing to verify for an inconclusive verdict".to_string(),
        }),
    }
}

/// Principal square root by the Denman–Beavers iteration.
fn sqrtm(a: &DMatrix<f64>) -> Result<DMatrix<f64>, FlowError> {
    let n = a.nrows();
    let mut y = a.clone();
    let mut z = DMatrix::<f64>::identity(n, n);
    for _ in 0..100 {
        let y_inv = y.clone().try_inverse().ok_or(FlowError::LogOutOfRange)?;
        let z_inv = z.clone().try_inverse().ok_or(FlowError::LogOutOfRange)?;
        let y_next = (&y + z_inv) * 0.5;
        let z_next = (&z + y_inv) * 0.5;
        let delta = (&y_next - &y).norm();
        y = y_next;
        z = z_next;
        if delta <= 1e-15 * y.norm() {
            break;
        }
    }
    Ok(y)
}

/// Principal logarithm of a matrix near the identity by inverse scaling and squaring.
pub fn logm_near_identity(g: &DMatrix<f64>) -> Result<DMatrix<f64>, FlowError> {
    if g.nrows() != g.ncols() {
        return Err(FlowError::Shape { rows: g.nrows(), cols: g.ncols(), expected: g.nrows() });
    }
    let n = g.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let mut a = g.clone();
    let mut k = 0;
    while norm1(&(&a - &id)) > 0.25 {
        if k >= 20 {
            return Err(FlowError::LogOutOfRange);
        }
        a = sqrtm(&a)?;
        k += 1;
    }
    // log(I + X) = X − X²/2 + X³/3 − …
    let x = &a - &id;
    let mut term = x.clone();
    let mut sum = DMatrix::zeros(n, n);
    for j in 1..=60 {
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        sum += &term * (sign / j as f64);
        term = &term * &x;
        if term.norm() < 1e-18 {
            break;
        }
    }
    Ok(sum * 2f64.powi(k))
}

/// Least-squares coordinates of `m` in the span of the representation matrices.
pub fn rep_coordinates(rep: &[DMatrix<f64>], m: &DMatrix<f64>) -> Result<Vec<f64>, FlowError> {
    if rep.is_empty() {
        return Err(FlowError::InvalidArgument("empty representation".into()));
    }
    let size = m.len();
    let a = DMatrix::from_fn(size, rep.len(), |r, c| rep[c][r]);
    let b = DVector::from_column_slice(m.as_slice());
    let svd = a.svd(true, true);
    let x = svd.solve(&b, 1e-12).map_err(|e| FlowError::InvalidArgument(e.to_string()))?;
    Ok(x.iter().copied().collect())
}

/// Writes `t, m11, m12, …` rows with entries in row-major order.
pub fn write_orbit_csv<W: Write>(samples: &[FlowSample], mut out: W) -> io::Result<()> {
    let Some(first) = samples.first() else {
        return writeln!(out, "t");
    };
    let (r, c) = first.matrix.shape();
    let mut header = vec!["t".to_string()];
    for i in 1..=r {
        for j in 1..=c {
            header.push(format!("m{i}{j}"));
        }
    }
    writeln!(out, "{}", header.join(","))?;
    for s in samples {
        let mut row = vec![format!("{}", s.t)];
        for i in 0..r {
            for j in 0..c {
                row.push(format!("{:.17e}", s.matrix[(i, j)]));
            }
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
