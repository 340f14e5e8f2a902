//! Periodicity verdicts for the flow `e^{tD}`.
//!
//! The flow is periodic exactly when `D` is semisimple, every eigenvalue lies on the imaginary
//! axis, and the nonzero frequencies are pairwise commensurable. Verdicts for linear flows speak
//! about the simply connected group; periods apply to points that are not fixed.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{ConfigError, ToleranceConfig};
use crate::dersolve::{inner_derivation, leibniz_residual, DerivationError};
use crate::liealg::{AlgebraVector, StructureConstants};
use crate::matrix::QMatrix;
use crate::rational::{exact_sqrt, format_rational, parse_rational, square_free_split, to_f64, Rational};
use crate::spectral::{spectrum, Frequency, Locus, SpectralError, Spectrum};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PeriodicityError {
    #[error("eigenvalues closer than the resolution {resolution:e} cannot be separated; refusing to classify")]
    IllConditioned { resolution: f64 },
    #[error("minimal period needs lcm {lcm} of ratio denominators, above the bound {bound}")]
    PeriodTooLarge { lcm: String, bound: u64 },
    #[error("matrix is not a derivation: Leibniz residual {residual}")]
    NotADerivation { residual: String, pair: Option<(usize, usize)> },
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("malformed verdict document: {0}")]
    Document(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NoPeriodReason {
    NonzeroRealPart,
    RealNonzeroEigenvalue,
    NonSemisimpleEigenvalue,
    IrrationalRatio,
}

impl NoPeriodReason {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::NonzeroRealPart => "NonzeroRealPart",
            Self::RealNonzeroEigenvalue => "RealNonzeroEigenvalue",
            Self::NonSemisimpleEigenvalue => "NonSemisimpleEigenvalue",
            Self::IrrationalRatio => "IrrationalRatio",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        [
            Self::NonzeroRealPart,
            Self::RealNonzeroEigenvalue,
            Self::NonSemisimpleEigenvalue,
            Self::IrrationalRatio,
        ]
        .into_iter()
        .find(|r| r.as_str() == text)
    }
}

/// Frequencies `α₁ < α₂ < …` with `αᵢ/α₁ = pᵢ/qᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalProfile {
    pub base_alpha: f64,
    /// `α₁²` when it is an exactly known rational.
    pub base_alpha_squared: Option<Rational>,
    pub ratios: Vec<(BigInt, BigInt)>,
    pub residuals: Vec<f64>,
}

/// A ratio with no acceptable rational approximant.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("frequency ratio {ratio} has no rational approximant (index {index})")]
pub struct IrrationalFlag {
    pub index: usize,
    pub ratio: f64,
    /// The ratio is known to be irrational exactly, not merely unapproximated.
    pub exact: bool,
}

/// `coeff · √radicand · π` with `radicand` square-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiMultiple {
    pub coeff: Rational,
    pub radicand: BigInt,
}

impl fmt::Display for PiMultiple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.coeff.numer();
        let q = self.coeff.denom();
        let mut head = Vec::new();
        if !p.is_one() {
            head.push(p.to_string());
        }
        if !self.radicand.is_one() {
            head.push(format!("sqrt({})", self.radicand));
        }
        head.push("pi".to_string());
        write!(f, "{}", head.join("*"))?;
        if !q.is_one() {
            write!(f, "/{q}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Period {
    pub value: f64,
    pub symbolic: Option<PiMultiple>,
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.symbolic {
            Some(s) => write!(f, "{s} ({:.12})", self.value),
            None => write!(f, "{:.12}", self.value),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FlowVerdict {
    /// `D = 0`: every point is fixed.
    IdentityFlow,
    PeriodicFlow { period: Period, profile: RationalProfile },
    NoPeriodicOrbits { reason: NoPeriodReason },
    /// The algebra-level flow cannot decide the group-level question.
    SpectralPeriodicInconclusive { note: String },
}

impl FlowVerdict {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::IdentityFlow => "IdentityFlow",
            Self::PeriodicFlow { .. } => "PeriodicFlow",
            Self::NoPeriodicOrbits { .. } => "NoPeriodicOrbits",
            Self::SpectralPeriodicInconclusive { .. } => "SpectralPeriodicInconclusive",
        }
    }

    pub fn period(&self) -> Option<&Period> {
        match self {
            Self::PeriodicFlow { period, .. } => Some(period),
            _ => None,
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, Self::PeriodicFlow { .. })
    }
}

/// A verdict with the qualifications that apply to it.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub verdict: FlowVerdict,
    pub caveats: Vec<String>,
}

impl Classification {
    fn bare(verdict: FlowVerdict) -> Self {
        Self { verdict, caveats: Vec::new() }
    }

    pub fn to_document(&self) -> VerdictDocument {
        let (period, period_symbolic, reason, profile, note) = match &self.verdict {
            FlowVerdict::IdentityFlow => (None, None, None, None, None),
            FlowVerdict::PeriodicFlow { period, profile } => (
                Some(period.value),
                period.symbolic.as_ref().map(ToString::to_string),
                None,
                Some(ProfileDocument {
                    base_alpha: profile.base_alpha,
                    base_alpha_squared: profile.base_alpha_squared.as_ref().map(format_rational),
                    ratios: profile.ratios.iter().map(|(p, q)| [p.to_string(), q.to_string()]).collect(),
                    residuals: profile.residuals.clone(),
                }),
                None,
            ),
            FlowVerdict::NoPeriodicOrbits { reason } => (None, None, Some(reason.as_str().to_string()), None, None),
            FlowVerdict::SpectralPeriodicInconclusive { note } => (None, None, None, None, Some(note.clone())),
        };
        VerdictDocument {
            tag: self.verdict.tag().to_string(),
            period,
            period_symbolic,
            reason,
            profile,
            note,
            caveats: self.caveats.clone(),
        }
    }

    pub fn from_document(doc: &VerdictDocument) -> Result<Self, PeriodicityError> {
        let bad = |msg: &str| PeriodicityError::Document(msg.to_string());
        let verdict = match doc.tag.as_str() {
            "IdentityFlow" => FlowVerdict::IdentityFlow,
            "NoPeriodicOrbits" => {
                let reason = doc.reason.as_deref().and_then(NoPeriodReason::parse).ok_or_else(|| bad("unknown reason"))?;
                FlowVerdict::NoPeriodicOrbits { reason }
            }
            "SpectralPeriodicInconclusive" => FlowVerdict::SpectralPeriodicInconclusive {
                note: doc.note.clone().unwrap_or_default(),
            },
            "PeriodicFlow" => {
                let p = doc.profile.as_ref().ok_or_else(|| bad("periodic verdict without profile"))?;
                let base_alpha_squared = p
                    .base_alpha_squared
                    .as_deref()
                    .map(parse_rational)
                    .transpose()
                    .map_err(|e| bad(&e.to_string()))?;
                let ratios = p
                    .ratios
                    .iter()
                    .map(|[a, b]| Ok((a.parse::<BigInt>()?, b.parse::<BigInt>()?)))
                    .collect::<Result<Vec<_>, num_bigint::ParseBigIntError>>()
                    .map_err(|e| bad(&e.to_string()))?;
                let profile = RationalProfile {
                    base_alpha: p.base_alpha,
                    base_alpha_squared,
                    ratios,
                    residuals: p.residuals.clone(),
                };
                let period = minimal_period(&profile, u64::MAX)?;
                FlowVerdict::PeriodicFlow { period, profile }
            }
            other => return Err(bad(&format!("unknown tag `{other}`"))),
        };
        Ok(Self { verdict, caveats: doc.caveats.clone() })
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.verdict {
            FlowVerdict::IdentityFlow => write!(f, "IdentityFlow: every point is fixed")?,
            FlowVerdict::PeriodicFlow { period, profile } => {
                write!(f, "PeriodicFlow: minimal period T = {period}")?;
                let ratios: Vec<String> = profile.ratios.iter().map(|(p, q)| format!("{p}/{q}")).collect();
                write!(f, "\n  base frequency {:.12}, ratios [{}]", profile.base_alpha, ratios.join(", "))?;
            }
            FlowVerdict::NoPeriodicOrbits { reason } => write!(f, "NoPeriodicOrbits: {}", reason.as_str())?,
            FlowVerdict::SpectralPeriodicInconclusive { note } => write!(f, "SpectralPeriodicInconclusive: {note}")?,
        }
        for c in &self.caveats {
            write!(f, "\n  caveat: {c}")?;
        }
        Ok(())
    }
}

/// Serialized verdict. Every key is always present; absent values are `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictDocument {
    pub tag: String,
    pub period: Option<f64>,
    pub period_symbolic: Option<String>,
    pub reason: Option<String>,
    pub profile: Option<ProfileDocument>,
    pub note: Option<String>,
    #[serde(default)]
    pub caveats: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileDocument {
    pub base_alpha: f64,
    pub base_alpha_squared: Option<String>,
    pub ratios: Vec<[String; 2]>,
    pub residuals: Vec<f64>,
}

/// Best rational approximation with denominator at most `max_den`.
pub fn best_rational(x: &BigRational, max_den: &BigInt) -> BigRational {
    if x.denom() <= max_den {
        return x.clone();
    }
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    loop {
        let a = n.div_floor(&d);
        let q2 = &q0 + &a * &q1;
        if &q2 > max_den {
            break;
        }
        let p2 = &p0 + &a * &p1;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let r = &n - &a * &d;
        (n, d) = (d, r);
        if d.is_zero() {
            break;
        }
    }
    let k = (max_den - &q0).div_floor(&q1);
    let semi = BigRational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let conv = BigRational::new(p1, q1);
    if (&semi - x).abs() <= (&conv - x).abs() {
        semi
    } else {
        conv
    }
}

/// Expresses each frequency as a rational multiple of the smallest one. Exactly known squared
/// frequencies are compared exactly: `√(s/s₁)` is rational iff `s/s₁` is a rational square.
pub fn profile_from_frequencies(freqs: &[Frequency], cfg: &ToleranceConfig) -> Result<RationalProfile, IrrationalFlag> {
    assert!(!freqs.is_empty(), "profile needs at least one frequency");
    let mut sorted = freqs.to_vec();
    sorted.sort_by(|a, b| a.value.total_cmp(&b.value));
    let base = sorted[0].clone();
    let max_den = BigInt::from(cfg.max_denominator);
    let mut ratios = Vec::with_capacity(sorted.len());
    let mut residuals = Vec::with_capacity(sorted.len());
    for (index, f) in sorted.iter().enumerate() {
        let ratio = f.value / base.value;
        if let (Some(s), Some(s1)) = (&f.exact_square, &base.exact_square) {
            match exact_sqrt(&(s / s1)) {
                Some(r) => {
                    ratios.push((r.numer().clone(), r.denom().clone()));
                    residuals.push(0.0);
                    continue;
                }
                None => return Err(IrrationalFlag { index, ratio, exact: true }),
            }
        }
        let exact = BigRational::from_float(ratio).ok_or(IrrationalFlag { index, ratio, exact: false })?;
        let approx = best_rational(&exact, &max_den);
        let residual = (ratio - to_f64(&approx)).abs();
        if residual > cfg.ratio_eps {
            return Err(IrrationalFlag { index, ratio, exact: false });
        }
        ratios.push((approx.numer().clone(), approx.denom().clone()));
        residuals.push(residual);
    }
    Ok(RationalProfile {
        base_alpha: base.value,
        base_alpha_squared: base.exact_square,
        ratios,
        residuals,
    })
}

/// [`profile_from_frequencies`] for frequencies known only numerically.
pub fn rational_ratio_profile(alphas: &[f64], cfg: &ToleranceConfig) -> Result<RationalProfile, IrrationalFlag> {
    let freqs: Vec<Frequency> = alphas
        .iter()
        .map(|&value| Frequency { value, exact_square: None })
        .collect();
    profile_from_frequencies(&freqs, cfg)
}

/// `T = 2π·lcm(qᵢ)/α₁`, the least `T > 0` with every `αᵢT ∈ 2πℤ`.
pub fn minimal_period(profile: &RationalProfile, max_lcm: u64) -> Result<Period, PeriodicityError> {
    let l = profile.ratios.iter().fold(BigInt::one(), |acc, (_, q)| acc.lcm(q));
    if l > BigInt::from(max_lcm) {
        return Err(PeriodicityError::PeriodTooLarge { lcm: l.to_string(), bound: max_lcm });
    }
    let lf = l.to_f64().unwrap_or(f64::INFINITY);
    let value = 2.0 * std::f64::consts::PI * lf / profile.base_alpha;
    let symbolic = profile.base_alpha_squared.as_ref().and_then(|s| {
        // 1/√(a/b) = √(ab)/a with √(ab) = k√m.
        let (a, b) = (s.numer(), s.denom());
        let (k, m) = square_free_split(&(a * b))?;
        Some(PiMultiple {
            coeff: BigRational::new(BigInt::from(2) * &l * k, a.clone()),
            radicand: m,
        })
    });
    Ok(Period { value, symbolic })
}

/// Decides periodicity of `e^{tD}` from its spectrum.
pub fn classify_flow(spec: &Spectrum, cfg: &ToleranceConfig) -> Result<FlowVerdict, PeriodicityError> {
    if spec.ill_conditioned {
        return Err(PeriodicityError::IllConditioned { resolution: spec.resolution });
    }
    let classes = &spec.classes;
    if classes.iter().all(|c| c.locus == Locus::Zero && c.is_semisimple()) {
        return Ok(FlowVerdict::IdentityFlow);
    }
    let no = |reason| Ok(FlowVerdict::NoPeriodicOrbits { reason });
    if classes.iter().any(|c| c.locus == Locus::Complex) {
        return no(NoPeriodReason::NonzeroRealPart);
    }
    if classes.iter().any(|c| c.locus == Locus::Real) {
        return no(NoPeriodReason::RealNonzeroEigenvalue);
    }
    if classes.iter().any(|c| !c.is_semisimple()) {
        return no(NoPeriodReason::NonSemisimpleEigenvalue);
    }
    let freqs: Vec<Frequency> = classes.iter().filter_map(|c| c.frequency()).collect();
    if freqs.is_empty() {
        // Only zero eigenvalues remain, and they are semisimple; handled above.
        return Ok(FlowVerdict::IdentityFlow);
    }
    let profile = match profile_from_frequencies(&freqs, cfg) {
        Ok(p) => p,
        Err(_) => return no(NoPeriodReason::IrrationalRatio),
    };
    let period = minimal_period(&profile, cfg.max_lcm)?;
    Ok(FlowVerdict::PeriodicFlow { period, profile })
}

const LINEAR_PERIOD_CAVEAT: &str =
    "the period applies to points that are not fixed, on the simply connected group with this algebra";

/// Verdict for the linear flow whose derivation is `d`.
pub fn classify_linear_flow(
    algebra: &StructureConstants,
    d: &QMatrix,
    cfg: &ToleranceConfig,
) -> Result<Classification, PeriodicityError> {
    cfg.validate()?;
    let report = leibniz_residual(algebra, d)?;
    if !report.is_derivation() {
        return Err(PeriodicityError::NotADerivation {
            residual: format_rational(&report.residual),
            pair: report.worst_pair,
        });
    }
    let spec = spectrum(d, cfg.rank_tol)?;
    let verdict = classify_flow(&spec, cfg)?;
    let mut out = Classification::bare(verdict);
    if out.verdict.is_periodic() {
        out.caveats.push(LINEAR_PERIOD_CAVEAT.to_string());
    }
    Ok(out)
}

/// Verdict for the right-invariant flow `exp(tX)`, read from `D = −ad(x)`.
pub fn classify_invariant_flow(
    algebra: &StructureConstants,
    x: &AlgebraVector,
    cfg: &ToleranceConfig,
) -> Result<Classification, PeriodicityError> {
    cfg.validate()?;
    let d = inner_derivation(algebra, x)?;
    if d.matrix().is_zero() {
        let note = if x.is_zero() {
            "x = 0: exp(tX) is constant".to_string()
        } else {
            "-ad(x) vanishes because x is central; the identity flow on the algebra does not decide whether exp(tX) closes".to_string()
        };
        return Ok(Classification::bare(FlowVerdict::SpectralPeriodicInconclusive { note }));
    }
    let spec = spectrum(d.matrix(), cfg.rank_tol)?;
    let verdict = classify_flow(&spec, cfg)?;
    let mut out = Classification::bare(verdict);
    if out.verdict.is_periodic() {
        out.caveats.push(
            "the period is that of Ad(exp(-tX)); exp(tX) itself closes at this period only if Ad is injective along the orbit, and may close at a multiple of it".to_string(),
        );
        let center = algebra.center();
        if !center.is_empty() {
            out.caveats.push(format!("the algebra has a center of dimension {}", center.len()));
        }
    }
    Ok(out)
}
