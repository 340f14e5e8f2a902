//! Two- and three-dimensional algebras with their stated derivation patterns, eigenvalue
//! formulas and periodicity claims, cross-checked against the exact solvers.
//!
//! Stated formulas are kept verbatim (up to ASCII transcription). Whenever they disagree with an
//! exact recomputation the disagreement is reported as data; verdicts always come from the exact
//! pipeline.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::config::ToleranceConfig;
use crate::dersolve::{derivation_space, is_derivation, DerivationSpace};
use crate::expr::{Expr, ExprError};
use crate::liealg::{AlgebraVector, StructureConstants};
use crate::matrix::QMatrix;
use crate::periodicity::{classify_linear_flow, FlowVerdict, PeriodicityError};
use crate::rational::{format_rational, frac, int, Rational};
use crate::spectral::{char_poly, spectrum, Eigenvalue, Surd};

/// Entry names in listing order.
pub const ENTRY_NAMES: [&str; 11] = [
    "abelian2",
    "aff2",
    "abelian3",
    "g21_plus_g1",
    "g31_heisenberg",
    "g32",
    "g33",
    "g34_zero",
    "g34_a",
    "g35_a",
    "sl2",
];

/// Parameter used for the parametric families when none is given.
pub fn default_param(name: &str) -> Option<Rational> {
    matches!(name, "g34_a" | "g35_a").then(|| int(2))
}

/// Parameters sampled for the parametric families in the verdict table.
pub fn sample_params() -> [Rational; 3] {
    [frac(1, 2), int(2), int(3)]
}

pub const DEFAULT_SEED: u64 = 0x5eed_1ab5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("parameter a = {a} is outside the admissible range of `{name}` ({range})")]
    ParamOutOfRange { name: String, a: String, range: &'static str },
    #[error("`{0}` takes no parameter")]
    UnexpectedParam(String),
    #[error(transparent)]
    Classification(#[from] PeriodicityError),
}

/// Bracket parameters of the three-dimensional family
/// `[E1,E2] = n3 E3`, `[E3,E1] = a E1 + n2 E2`, `[E2,E3] = n1 E1 − a E2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyParams {
    #[serde(with = "crate::rational::serde_str")]
    pub a: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub n1: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub n2: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub n3: Rational,
}

impl FamilyParams {
    pub fn new(a: Rational, n1: i64, n2: i64, n3: i64) -> Self {
        Self { a, n1: int(n1), n2: int(n2), n3: int(n3) }
    }

    pub fn structure(&self) -> StructureConstants {
        let labels = ["E1", "E2", "E3"].map(String::from).to_vec();
        let mut sc = StructureConstants::new(labels).expect("three labels");
        sc.set_bracket(0, 1, &[(2, self.n3.clone())]).expect("in range");
        sc.set_bracket(0, 2, &[(0, -self.a.clone()), (1, -self.n2.clone())]).expect("in range");
        sc.set_bracket(1, 2, &[(0, self.n1.clone()), (1, -self.a.clone())]).expect("in range");
        sc
    }
}

/// Name of the matrix entry `(r, c)` in a generic `n × n` derivation.
pub fn positional_name(n: usize, r: usize, c: usize) -> String {
    match n {
        2 => ["a", "b", "c", "d"][2 * r + c].to_string(),
        3 => format!("{}{}", ["x", "y", "z"][r], c + 1),
        _ => format!("d{}{}", r + 1, c + 1),
    }
}

fn positional_bindings(m: &QMatrix) -> BTreeMap<String, Rational> {
    let n = m.rows();
    let mut env = BTreeMap::new();
    for r in 0..n {
        for c in 0..n {
            env.insert(positional_name(n, r, c), m.get(r, c).clone());
        }
    }
    env
}

/// Square matrix of polynomial entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicMatrix {
    n: usize,
    entries: Vec<Expr>,
}

impl SymbolicMatrix {
    pub fn new(n: usize, entries: Vec<Expr>) -> Self {
        assert_eq!(entries.len(), n * n);
        Self { n, entries }
    }

    pub fn parse(n: usize, entries: &[&str]) -> Self {
        Self::new(n, entries.iter().map(|e| Expr::p(e)).collect())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, r: usize, c: usize) -> &Expr {
        &self.entries[r * self.n + c]
    }

    /// Free variables in order of first appearance, row by row.
    pub fn variables(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for e in &self.entries {
            for v in e.variables() {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }

    pub fn substitute(&self, sub: &dyn Fn(&str) -> Option<Expr>) -> Self {
        Self::new(self.n, self.entries.iter().map(|e| e.substitute(sub)).collect())
    }

    pub fn eval(&self, env: &BTreeMap<String, Rational>) -> Result<QMatrix, ExprError> {
        let data = self.entries.iter().map(|e| e.eval_map(env)).collect::<Result<Vec<_>, _>>()?;
        Ok(QMatrix::from_row_major(self.n, self.n, data))
    }

    /// The matrix multiplying each variable, when every entry is a linear form.
    pub fn linear_basis(&self) -> Option<Vec<(String, QMatrix)>> {
        let forms = self.entries.iter().map(Expr::linear_coefficients).collect::<Option<Vec<_>>>()?;
        let basis = self
            .variables()
            .into_iter()
            .map(|v| {
                let m = QMatrix::from_fn(self.n, self.n, |r, c| {
                    forms[r * self.n + c].get(&v).cloned().unwrap_or_else(Rational::zero)
                });
                (v, m)
            })
            .collect();
        Some(basis)
    }

    /// Values of the variables producing `m`, if `m` lies in the pattern.
    pub fn solve(&self, m: &QMatrix) -> Option<BTreeMap<String, Rational>> {
        let basis = self.linear_basis()?;
        let n2 = self.n * self.n;
        if basis.is_empty() {
            return m.is_zero().then(BTreeMap::new);
        }
        let system = QMatrix::from_fn(n2, basis.len(), |r, k| basis[k].1.entries()[r].clone());
        let x = system.solve(m.entries())?;
        Some(basis.into_iter().map(|(v, _)| v).zip(x).collect())
    }

    /// Monic characteristic polynomial, ascending coefficients, by Faddeev–LeVerrier.
    pub fn char_poly(&self) -> Vec<Expr> {
        let n = self.n;
        let mul = |a: &[Expr], b: &[Expr]| -> Vec<Expr> {
            let mut out = vec![Expr::zero(); n * n];
            for r in 0..n {
                for c in 0..n {
                    for k in 0..n {
                        out[r * n + c] = &out[r * n + c] + &(&a[r * n + k] * &b[k * n + c]);
                    }
                }
            }
            out
        };
        let mut coeffs = vec![Expr::zero(); n + 1];
        coeffs[n] = Expr::int(1);
        let mut m = vec![Expr::zero(); n * n];
        for k in 1..=n {
            let mut next = mul(&self.entries, &m);
            for i in 0..n {
                next[i * n + i] = &next[i * n + i] + &coeffs[n - k + 1];
            }
            m = next;
            let am = mul(&self.entries, &m);
            let tr = (0..n).fold(Expr::zero(), |acc, i| &acc + &am[i * n + i]);
            coeffs[n - k] = &Expr::constant(frac(-1, k as i64)) * &tr;
        }
        coeffs
    }
}

impl fmt::Display for SymbolicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.n {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.n).map(|c| self.entry(r, c).to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

fn format_char_poly(coeffs: &[Expr]) -> String {
    let n = coeffs.len() - 1;
    let mut parts = Vec::new();
    for k in (0..=n).rev() {
        let c = &coeffs[k];
        if c.is_zero() {
            continue;
        }
        let power = match k {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{k}"),
        };
        let text = if k == n {
            power
        } else if k == 0 {
            format!("({c})")
        } else {
            format!("({c})*{power}")
        };
        parts.push(text);
    }
    parts.join(" + ")
}

/// General element of a derivation space, each free entry named after its pivot position.
pub fn general_element(space: &DerivationSpace) -> SymbolicMatrix {
    let n = space.algebra_dim();
    let mut entries = vec![Expr::zero(); n * n];
    for (b, &(pr, pc)) in space.basis().iter().zip(space.pivots()) {
        let name = Expr::var(&positional_name(n, pr, pc));
        for (slot, value) in entries.iter_mut().zip(b.entries()) {
            if !value.is_zero() {
                *slot = &*slot + &(&Expr::constant(value.clone()) * &name);
            }
        }
    }
    SymbolicMatrix::new(n, entries)
}

/// `offset + coeff·√radicand`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootTerm {
    pub offset: Expr,
    pub coeff: Rational,
    pub radicand: Expr,
}

impl RootTerm {
    pub fn rational(offset: &str) -> Self {
        Self { offset: Expr::p(offset), coeff: Rational::zero(), radicand: Expr::zero() }
    }

    pub fn surd(offset: &str, coeff: Rational, radicand: &str) -> Self {
        Self { offset: Expr::p(offset), coeff, radicand: Expr::p(radicand) }
    }

    fn eval(&self, env: &dyn Fn(&str) -> Option<Rational>) -> Result<Surd, ExprError> {
        let re = self.offset.eval(env)?;
        if self.coeff.is_zero() {
            return Ok(Surd::rational(re));
        }
        let rad = self.radicand.eval(env)? * &self.coeff * &self.coeff;
        let sign = if self.coeff.is_negative() { -1 } else { 1 };
        Ok(Surd::new(re, rad, sign))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EigenFormula {
    /// Eigenvalues listed one by one.
    Roots { stated: String, roots: Vec<RootTerm> },
    /// Characteristic polynomial `−t³ + tr(D)t² + A t + det(D)` with a stated coefficient `A`.
    CubicCharPoly { stated: String, linear_coeff: Expr },
}

impl EigenFormula {
    pub fn stated(&self) -> &str {
        match self {
            Self::Roots { stated, .. } | Self::CubicCharPoly { stated, .. } => stated,
        }
    }
}

/// Conjunction `e = 0` for every `zero` entry and `e < 0` for every `negative` entry.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Condition {
    pub zero: Vec<Expr>,
    pub negative: Vec<Expr>,
}

impl Condition {
    pub fn holds(&self, env: &dyn Fn(&str) -> Option<Rational>) -> Result<bool, ExprError> {
        for e in &self.zero {
            if !e.eval(env)?.is_zero() {
                return Ok(false);
            }
        }
        for e in &self.negative {
            if !e.eval(env)?.is_negative() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// When a linear flow has periodic orbits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Claim {
    NeverPeriodic,
    PeriodicWhen { text: String, condition: Condition },
}

impl Claim {
    fn when(text: &str, zero: &[&str], negative: &[&str]) -> Self {
        Self::PeriodicWhen {
            text: text.to_string(),
            condition: Condition {
                zero: zero.iter().map(|e| Expr::p(e)).collect(),
                negative: negative.iter().map(|e| Expr::p(e)).collect(),
            },
        }
    }

    pub fn predicts_periodic(&self, env: &dyn Fn(&str) -> Option<Rational>) -> Result<bool, ExprError> {
        match self {
            Self::NeverPeriodic => Ok(false),
            Self::PeriodicWhen { condition, .. } => condition.holds(env),
        }
    }

    fn zero_constraints(&self) -> &[Expr] {
        match self {
            Self::NeverPeriodic => &[],
            Self::PeriodicWhen { condition, .. } => &condition.zero,
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NeverPeriodic => write!(f, "no periodic orbits"),
            Self::PeriodicWhen { text, .. } => write!(f, "periodic orbits when {text}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proposition {
    /// Algebra type named in the statement.
    pub stated_label: &'static str,
    pub stated: Claim,
    /// Reading of the statement with evident misprints repaired, when it differs.
    pub corrected: Option<Claim>,
    /// Condition derived independently from the exact derivation space.
    pub exact: Claim,
}

impl Proposition {
    fn plain(label: &'static str, claim: Claim) -> Self {
        Self { stated_label: label, stated: claim.clone(), corrected: None, exact: claim }
    }

    /// The claim as it is meant to be read.
    pub fn reading(&self) -> &Claim {
        self.corrected.as_ref().unwrap_or(&self.stated)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatedBracket {
    pub i: usize,
    pub j: usize,
    pub text: &'static str,
    /// `None` when the stated right-hand side is not a linear combination of basis vectors.
    pub parsed: Option<Vec<(usize, Rational)>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sampler {
    /// Integer combinations of the derivation-space basis.
    Space,
    /// Space draws alternating with `P·diag(B, 0)·P⁻¹` for traceless `B`.
    PlantedKernel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub algebra_type: &'static str,
    pub group: &'static str,
    pub param: Option<Rational>,
    pub family: Option<FamilyParams>,
    pub structure: StructureConstants,
    pub stated_brackets: Vec<StatedBracket>,
    pub pattern: SymbolicMatrix,
    pub eigenvalues: EigenFormula,
    pub proposition: Proposition,
    /// Faithful matrices `rep(E_i)` compatible with the bracket.
    pub representation: Option<Vec<QMatrix>>,
    pub notes: Vec<String>,
    sampler: Sampler,
}

fn semidirect_rep(p: &FamilyParams) -> Vec<QMatrix> {
    // rep(E3) acts on span(E1, E2) as ad(E3).
    let mut e3 = QMatrix::zeros(3, 3);
    e3.set(0, 0, p.a.clone());
    e3.set(0, 1, -p.n1.clone());
    e3.set(1, 0, p.n2.clone());
    e3.set(1, 1, p.a.clone());
    vec![QMatrix::unit(3, 3, 0, 2), QMatrix::unit(3, 3, 1, 2), e3]
}

fn translation_rep(n: usize) -> Vec<QMatrix> {
    (0..n).map(|i| QMatrix::unit(n + 1, n + 1, i, n)).collect()
}

const ABELIAN3_DET: &str = "x1*(y2*z3 - y3*z2) - x2*(y1*z3 - y3*z1) + x3*(y1*z2 - y2*z1)";

fn positional_pattern(n: usize) -> SymbolicMatrix {
    let names: Vec<String> = (0..n * n).map(|k| positional_name(n, k / n, k % n)).collect();
    SymbolicMatrix::parse(n, &names.iter().map(String::as_str).collect::<Vec<_>>())
}

impl CatalogEntry {
    fn base(name: &'static str, algebra_type: &'static str, group: &'static str, structure: StructureConstants) -> Self {
        let n = structure.dim();
        Self {
            name,
            algebra_type,
            group,
            param: None,
            family: None,
            structure,
            stated_brackets: Vec::new(),
            pattern: positional_pattern(n),
            eigenvalues: EigenFormula::Roots { stated: String::new(), roots: Vec::new() },
            proposition: Proposition::plain(algebra_type, Claim::NeverPeriodic),
            representation: None,
            notes: Vec::new(),
            sampler: Sampler::Space,
        }
    }

    fn family(name: &'static str, algebra_type: &'static str, group: &'static str, params: FamilyParams) -> Self {
        let mut e = Self::base(name, algebra_type, group, params.structure());
        e.representation = Some(semidirect_rep(&params));
        e.param = None;
        e.family = Some(params);
        e
    }

    pub fn dim(&self) -> usize {
        self.structure.dim()
    }

    pub fn derivation_space(&self) -> DerivationSpace {
        derivation_space(&self.structure)
    }

    /// Whether every pair satisfies `[rep(E_i), rep(E_j)] = rep([E_i, E_j])`.
    pub fn representation_compatible(&self) -> Option<bool> {
        let rep = self.representation.as_ref()?;
        let n = self.dim();
        let image = |v: &AlgebraVector| {
            let size = rep[0].rows();
            v.0.iter().zip(rep).fold(QMatrix::zeros(size, size), |acc, (c, m)| &acc + &m.scale(c))
        };
        let ok = (0..n).all(|i| {
            (i + 1..n).all(|j| rep[i].commutator(&rep[j]) == image(&self.structure.basis_bracket(i, j)))
        });
        Some(ok)
    }

    /// Whether distinct basis vectors have linearly independent images.
    pub fn representation_faithful(&self) -> Option<bool> {
        let rep = self.representation.as_ref()?;
        let size = rep[0].rows();
        let stacked = QMatrix::from_fn(size * size, rep.len(), |r, k| rep[k].entries()[r].clone());
        Some(stacked.rank() == rep.len())
    }

    /// Values for every symbol that a stated formula may use at derivation `d`: positional entry
    /// names, the pattern variables when `d` fits the pattern, and the family parameter `a`.
    pub fn bindings(&self, d: &QMatrix) -> BTreeMap<String, Rational> {
        let mut env = positional_bindings(d);
        if let Some(vars) = self.pattern.solve(d) {
            env.extend(vars);
        }
        if let Some(a) = &self.param {
            env.insert("a".to_string(), a.clone());
        }
        env
    }
}

fn check_param(name: &str, param: Option<Rational>) -> Result<Option<Rational>, CatalogError> {
    let (range, ok): (&'static str, fn(&Rational) -> bool) = match name {
        "g34_a" => ("a > 0 and a != 1", |a| a.is_positive() && !a.is_one()),
        "g35_a" => ("a > 0", |a| a.is_positive()),
        _ => {
            return match param {
                Some(_) => Err(CatalogError::UnexpectedParam(name.to_string())),
                None => Ok(None),
            }
        }
    };
    let a = param.or_else(|| default_param(name)).expect("parametric family");
    if !ok(&a) {
        return Err(CatalogError::ParamOutOfRange { name: name.to_string(), a: format_rational(&a), range });
    }
    Ok(Some(a))
}

/// Catalog entry by name; parametric families take `a`, defaulting to 2.
pub fn get_entry(name: &str, param: Option<Rational>) -> Result<CatalogEntry, CatalogError> {
    if !ENTRY_NAMES.contains(&name) {
        return Err(CatalogError::UnknownEntry(name.to_string()));
    }
    let param = check_param(name, param)?;
    let half = frac(1, 2);
    let entry = match name {
        "abelian2" => {
            let mut e = CatalogEntry::base("abelian2", "2g1", "R^2", StructureConstants::abelian(2).expect("dim 2"));
            e.eigenvalues = EigenFormula::Roots {
                stated: "{(1/2)(a + d - sqrt((a - d)^2 + 4bc)), (1/2)(a + d + sqrt((a - d)^2 + 4bc))}".into(),
                roots: vec![
                    RootTerm::surd("(a+d)/2", -half.clone(), "(a-d)^2+4*b*c"),
                    RootTerm::surd("(a+d)/2", half, "(a-d)^2+4*b*c"),
                ],
            };
            e.proposition = Proposition::plain(
                "2g1",
                Claim::when("a + d = 0 and (a - d)^2 + 4bc < 0", &["a+d"], &["(a-d)^2+4*b*c"]),
            );
            e.representation = Some(translation_rep(2));
            e
        }
        "aff2" => {
            let sc = StructureConstants::new(vec!["H".into(), "Z".into()])
                .and_then(|s| s.with_bracket(0, 1, &[(1, int(1))]))
                .expect("valid bracket");
            let mut e = CatalogEntry::base("aff2", "aff(2)", "Aff_0(2)", sc);
            e.pattern = SymbolicMatrix::parse(2, &["0", "0", "c", "d"]);
            e.eigenvalues = EigenFormula::Roots {
                stated: "{0, d}".into(),
                roots: vec![RootTerm::rational("0"), RootTerm::rational("d")],
            };
            e.representation = Some(vec![QMatrix::unit(2, 2, 0, 0), QMatrix::unit(2, 2, 0, 1)]);
            e
        }
        "abelian3" => {
            let mut e = CatalogEntry::family("abelian3", "3g1", "R^3", FamilyParams::new(int(0), 0, 0, 0));
            e.pattern = SymbolicMatrix::parse(3, &["x1", "x2", "x3", "y1", "y2", "y3", "z1", "z3", "z3"]);
            let a = "x2*y1 - x1*y2 + x3*z1 - x1*z3 + y3*z2 - y2*z3";
            e.eigenvalues = EigenFormula::CubicCharPoly {
                stated: "p(t) = -t^3 + tr(D) t^2 + A t + det(D), A = x2y1 - x1y2 + x3z1 - x1z3 + y3z2 - y2z3".into(),
                linear_coeff: Expr::p(a),
            };
            e.proposition = Proposition {
                stated_label: "g3,6",
                stated: Claim::when(
                    "tr(D) = det(D) = 0 and x2y1 - y1x2 + x3z1 - x1z3 + y3z2 - y2z3 < 0",
                    &["x1+y2+z3", ABELIAN3_DET],
                    &["x2*y1 - y1*x2 + x3*z1 - x1*z3 + y3*z2 - y2*z3"],
                ),
                corrected: Some(Claim::when(
                    "tr(D) = det(D) = 0 and x2y1 - x1y2 + x3z1 - x1z3 + y3z2 - y2z3 < 0",
                    &["x1+y2+z3", ABELIAN3_DET],
                    &[a],
                )),
                exact: Claim::when(
                    "tr(D) = det(D) = 0 and A < 0, A = x2y1 - x1y2 + x3z1 - x1z3 + y3z2 - y2z3",
                    &["x1+y2+z3", ABELIAN3_DET],
                    &[a],
                ),
            };
            e.representation = Some(translation_rep(3));
            e.notes.push("the stated proposition names the algebra type g3,6".into());
            e.sampler = Sampler::PlantedKernel;
            e
        }
        "g21_plus_g1" => {
            let mut e = CatalogEntry::family(
                "g21_plus_g1",
                "g2,1+g1",
                "Aff(R)_0 x R",
                FamilyParams::new(int(1), 1, -1, 0),
            );
            e.pattern = SymbolicMatrix::parse(3, &["x1", "x2", "x3", "x2", "x1", "y3", "0", "0", "0"]);
            e.eigenvalues = EigenFormula::Roots {
                stated: "{0, x1 - x2, x1 + x2}".into(),
                roots: vec![RootTerm::rational("0"), RootTerm::rational("x1-x2"), RootTerm::rational("x1+x2")],
            };
            e.notes.push("the group is solvable, not semisimple".into());
            e
        }
        "g31_heisenberg" => {
            let mut e =
                CatalogEntry::family("g31_heisenberg", "g3,1", "H_3", FamilyParams::new(int(0), 1, 0, 0));
            e.pattern = SymbolicMatrix::parse(3, &["y2+z3", "x2", "x3", "0", "y2", "y3", "0", "z2", "z3"]);
            e.eigenvalues = EigenFormula::Roots {
                stated: "{y2 + z3, (1/2)(y2 + z3 - sqrt((y2 - z3)^2 + 4x3z2)), (1/2)(y2 + z3 + sqrt((y2 - z3)^2 + 4x3z2))}"
                    .into(),
                roots: vec![
                    RootTerm::rational("y2+z3"),
                    RootTerm::surd("(y2+z3)/2", -half.clone(), "(y2-z3)^2+4*x3*z2"),
                    RootTerm::surd("(y2+z3)/2", half, "(y2-z3)^2+4*x3*z2"),
                ],
            };
            let exact = Claim::when("y2 + z3 = 0 and (y2 - z3)^2 + 4y3z2 < 0", &["y2+z3"], &["(y2-z3)^2+4*y3*z2"]);
            e.proposition = Proposition {
                stated_label: "g3,1",
                stated: Claim::when("y2 + z3 = 0 and (y2 - z3)^2 + 4x3z2 < 0", &["y2+z3"], &["(y2-z3)^2+4*x3*z2"]),
                corrected: Some(exact.clone()),
                exact,
            };
            e.representation = Some(vec![
                QMatrix::unit(3, 3, 0, 2),
                QMatrix::unit(3, 3, 0, 1),
                QMatrix::unit(3, 3, 1, 2),
            ]);
            e
        }
        "g32" => {
            let mut e = CatalogEntry::family("g32", "g3,2", "G3,2", FamilyParams::new(int(1), 1, 0, 0));
            e.pattern = SymbolicMatrix::parse(3, &["0", "x2", "x3", "0", "0", "y3", "0", "0", "0"]);
            e.eigenvalues = EigenFormula::Roots {
                stated: "{0, 0, 0}".into(),
                roots: vec![RootTerm::rational("0"), RootTerm::rational("0"), RootTerm::rational("0")],
            };
            e
        }
        "g33" => {
            let mut e = CatalogEntry::family("g33", "g3,3", "G3,3", FamilyParams::new(int(1), 0, 0, 0));
            e.pattern = SymbolicMatrix::parse(3, &["x1", "x2", "x3", "y1", "y2", "y3", "0", "0", "0"]);
            e.eigenvalues = EigenFormula::Roots {
                stated: "{0, (1/2)(x1 + y2 - sqrt((x2 - y2)^2 + 4x2y1)), (1/2)(x1 + y2 + sqrt((x2 - y2)^2 + 4x2y1))}".into(),
                roots: vec![
                    RootTerm::rational("0"),
                    RootTerm::surd("(x1+y2)/2", -half.clone(), "(x2-y2)^2+4*x2*y1"),
                    RootTerm::surd("(x1+y2)/2", half, "(x2-y2)^2+4*x2*y1"),
                ],
            };
            let exact = Claim::when("x1 + y2 = 0 and (x1 - y2)^2 + 4x2y1 < 0", &["x1+y2"], &["(x1-y2)^2+4*x2*y1"]);
            e.proposition = Proposition {
                stated_label: "g3,3",
                stated: Claim::when("x1 + y2 = 0 and (x2 - y2)^2 + 4x2y1 < 0", &["x1+y2"], &["(x2-y2)^2+4*x2*y1"]),
                corrected: Some(exact.clone()),
                exact,
            };
            e
        }
        "g34_zero" => {
            let mut e =
                CatalogEntry::family("g34_zero", "g0_3,4", "SE(1,1)", FamilyParams::new(int(0), 1, -1, 0));
            e.pattern = SymbolicMatrix::parse(3, &["x1", "x2", "x3", "x2", "x1", "y3", "0", "0", "0"]);
            e.eigenvalues = EigenFormula::Roots {
                stated: "{0, x1 - x2, x1 + x2}".into(),
                roots: vec![RootTerm::rational("0"), RootTerm::rational("x1-x2"), RootTerm::rational("x1+x2")],
            };
            e
        }
        "g34_a" => {
            let a = param.clone().expect("checked");
            let mut e = CatalogEntry::family("g34_a", "ga_3,4", "Ga_3,4", FamilyParams::new(a.clone(), 1, -1, 0));
            let sub = move |v: &str| (v == "a").then(|| Expr::constant(a.clone()));
            e.pattern = SymbolicMatrix::parse(3, &["-y2", "a*y2", "x3", "a*y2", "y2", "y3", "0", "0", "0"]).substitute(&sub);
            e.eigenvalues = EigenFormula::Roots {
                stated: "{0, -sqrt((1 + a)y2^2), sqrt((1 + a)y2^2)}".into(),
                roots: vec![
                    RootTerm::rational("0"),
                    RootTerm::surd("0", int(-1), "(1+a)*y2^2"),
                    RootTerm::surd("0", int(1), "(1+a)*y2^2"),
                ],
            };
            e.param = param;
            e
        }
        "g35_a" => {
            let a = param.clone().expect("checked");
            let mut e = CatalogEntry::family("g35_a", "ga_3,5", "Ga_3,5", FamilyParams::new(a.clone(), 1, 1, 0));
            let sub = move |v: &str| (v == "a").then(|| Expr::constant(a.clone()));
            e.pattern = SymbolicMatrix::parse(3, &["y2", "-a*y2", "x3", "a*y2", "-a*y2", "y3", "0", "0", "0"]).substitute(&sub);
            let rad = "-2*a*y2*y2 - 3*a*y2^2 + y2^2";
            e.eigenvalues = EigenFormula::Roots {
                stated: "{0, (1/2)((-a - 1)y2 - sqrt(-2a y2 y2 - 3a y2^2 + y2^2)), (1/2)((-a - 1)y2 + sqrt(-2a y2 y2 - 3a y2^2 + y2^2))}"
                    .into(),
                roots: vec![
                    RootTerm::rational("0"),
                    RootTerm::surd("(-a-1)*y2/2", -half.clone(), rad),
                    RootTerm::surd("(-a-1)*y2/2", half, rad),
                ],
            };
            e.proposition = Proposition {
                stated_label: "ga_3,5",
                stated: Claim::NeverPeriodic,
                corrected: None,
                exact: Claim::when("x1 = 0 and x2 != 0", &["x1"], &["-x2^2"]),
            };
            e.param = param;
            e
        }
        "sl2" => {
            let sc = StructureConstants::new(vec!["Y".into(), "H".into(), "Z".into()])
                .and_then(|s| s.with_bracket(0, 1, &[(0, int(2)), (2, int(4))]))
                .and_then(|s| s.with_bracket(0, 2, &[(1, int(-1))]))
                .and_then(|s| s.with_bracket(1, 2, &[(2, int(2))]))
                .expect("valid brackets");
            let mut e = CatalogEntry::base("sl2", "sl(2,R)", "Sl(2,R)", sc);
            e.stated_brackets = vec![
                StatedBracket { i: 0, j: 1, text: "[Y,H] = 2YX + 4Z", parsed: None },
                StatedBracket { i: 0, j: 2, text: "[Y,Z] = -H", parsed: Some(vec![(1, int(-1))]) },
                StatedBracket { i: 1, j: 2, text: "[H,Z] = 2Z", parsed: Some(vec![(2, int(2))]) },
            ];
            e.pattern = SymbolicMatrix::parse(3, &["2*b", "-2*a", "0", "-c", "0", "a", "4*b", "-4*a+2*c", "-2*b"]);
            e.eigenvalues = EigenFormula::Roots {
                stated: "{0, -2 sqrt(-a^2 + ac + b^2), 2 sqrt(-a^2 + ac + b^2)}".into(),
                roots: vec![
                    RootTerm::rational("0"),
                    RootTerm::surd("0", int(-2), "-a^2+a*c+b^2"),
                    RootTerm::surd("0", int(2), "-a^2+a*c+b^2"),
                ],
            };
            e.proposition = Proposition::plain("sl(2,R)", Claim::when("a^2 > ac + b^2", &[], &["a*c+b^2-a^2"]));
            let y = QMatrix::from_i64(2, 2, &[0, -1, 1, 0]);
            let h = QMatrix::from_i64(2, 2, &[1, 0, 0, -1]);
            let z = QMatrix::from_i64(2, 2, &[0, 1, 0, 0]);
            e.representation = Some(vec![y, h, z]);
            e.notes.push("derivations are -ad(aY + bH + cZ)".into());
            e
        }
        _ => unreachable!("name checked against the catalog"),
    };
    Ok(entry)
}

/// Every entry, parametric families at their default parameter.
pub fn all_entries() -> Vec<CatalogEntry> {
    ENTRY_NAMES.iter().map(|n| get_entry(n, None).expect("default entries are valid")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub location: String,
    pub stated_value: String,
    pub recomputed_value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheckReport {
    pub entry: String,
    #[serde(with = "crate::rational::serde_str::option")]
    pub param: Option<Rational>,
    pub brackets_match: bool,
    pub derivation_space_match: bool,
    pub eigenvalue_formula_match: bool,
    pub proposition_match: bool,
    pub derivation_dim: usize,
    pub pattern_dim: usize,
    pub discrepancies: Vec<Discrepancy>,
}

impl CrossCheckReport {
    pub fn all_match(&self) -> bool {
        self.discrepancies.is_empty()
    }

    /// Distinct discrepancy locations.
    pub fn locations(&self) -> Vec<&str> {
        let mut out: Vec<&str> = self.discrepancies.iter().map(|d| d.location.as_str()).collect();
        out.dedup();
        out
    }
}

fn format_combination(labels: &[String], terms: &[(usize, Rational)]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (k, c) in terms.iter().filter(|(_, c)| !c.is_zero()) {
        let mag = c.abs();
        let coeff = if mag.is_one() { String::new() } else { format_rational(&mag) };
        let sign = if c.is_negative() { "-" } else { "+" };
        parts.push(format!("{sign} {coeff}{}", labels[*k]));
    }
    if parts.is_empty() {
        return "0".to_string();
    }
    let joined = parts.join(" ");
    joined.strip_prefix("+ ").map(String::from).unwrap_or_else(|| format!("-{}", &joined[2..]))
}

fn format_bindings(env: &BTreeMap<String, Rational>, names: &[String]) -> String {
    names
        .iter()
        .filter_map(|n| env.get(n).map(|v| format!("{n}={}", format_rational(v))))
        .collect::<Vec<_>>()
        .join(", ")
}

fn format_eigen_list(values: &[String]) -> String {
    format!("{{{}}}", values.join(", "))
}

fn sorted_eigen_strings(values: impl IntoIterator<Item = String>) -> Vec<String> {
    let mut v: Vec<String> = values.into_iter().collect();
    v.sort();
    v
}

fn eigenvalues_equal(stated: &[Surd], exact: &[Eigenvalue]) -> bool {
    if stated.len() != exact.len() {
        return false;
    }
    let mut used = vec![false; exact.len()];
    'outer: for s in stated {
        for (idx, e) in exact.iter().enumerate() {
            if used[idx] {
                continue;
            }
            let same = match e {
                Eigenvalue::Exact(x) => x == s,
                Eigenvalue::Approx(z) => (z - s.to_complex()).norm() <= 1e-9 * (1.0 + z.norm()),
            };
            if same {
                used[idx] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn entry_rng(entry: &CatalogEntry, seed: u64, stream: u64) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let param = entry.param.as_ref().map(format_rational).unwrap_or_default();
    for b in entry.name.bytes().chain(param.bytes()) {
        h = (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Cross-check with the default seed.
pub fn cross_check(entry: &CatalogEntry) -> CrossCheckReport {
    cross_check_with(entry, DEFAULT_SEED, &ToleranceConfig::default())
}

pub fn cross_check_with(entry: &CatalogEntry, seed: u64, cfg: &ToleranceConfig) -> CrossCheckReport {
    let mut discrepancies = Vec::new();
    let space = entry.derivation_space();

    let brackets_match = check_brackets(entry, &mut discrepancies);
    let (derivation_space_match, pattern_dim) = check_pattern(entry, &space, &mut discrepancies);
    let eigenvalue_formula_match = check_eigenvalues(entry, seed, &mut discrepancies);
    let proposition_match = check_proposition(entry, &space, seed, cfg, &mut discrepancies);

    CrossCheckReport {
        entry: entry.name.to_string(),
        param: entry.param.clone(),
        brackets_match,
        derivation_space_match,
        eigenvalue_formula_match,
        proposition_match,
        derivation_dim: space.dim(),
        pattern_dim,
        discrepancies,
    }
}

fn check_brackets(entry: &CatalogEntry, out: &mut Vec<Discrepancy>) -> bool {
    let mut ok = true;
    let labels = entry.structure.labels();
    for b in &entry.stated_brackets {
        let actual = entry.structure.basis_bracket(b.i, b.j);
        let actual_terms: Vec<(usize, Rational)> = actual.0.iter().cloned().enumerate().collect();
        let matches = b.parsed.as_ref().is_some_and(|terms| {
            let mut dense = vec![Rational::zero(); entry.dim()];
            for (k, c) in terms {
                dense[*k] += c;
            }
            dense == actual.0
        });
        if !matches {
            ok = false;
            out.push(Discrepancy {
                location: "brackets".into(),
                stated_value: b.text.to_string(),
                recomputed_value: format!(
                    "[{},{}] = {}",
                    labels[b.i],
                    labels[b.j],
                    format_combination(labels, &actual_terms)
                ),
            });
        }
    }
    let report = entry.structure.validate();
    if !report.jacobi_ok {
        ok = false;
        out.push(Discrepancy {
            location: "brackets".into(),
            stated_value: "Jacobi identity".into(),
            recomputed_value: format!("violated at {:?}", report.worst_triple),
        });
    }
    if entry.representation_compatible() == Some(false) {
        ok = false;
        out.push(Discrepancy {
            location: "brackets".into(),
            stated_value: "matrix representation".into(),
            recomputed_value: "commutators do not reproduce the brackets".into(),
        });
    }
    ok
}

fn check_pattern(entry: &CatalogEntry, space: &DerivationSpace, out: &mut Vec<Discrepancy>) -> (bool, usize) {
    let exact = general_element(space);
    let Some(basis) = entry.pattern.linear_basis() else {
        out.push(Discrepancy {
            location: "derivation_pattern".into(),
            stated_value: entry.pattern.to_string(),
            recomputed_value: format!("{exact} (stated pattern is not linear in its entries)"),
        });
        return (false, 0);
    };
    let n2 = entry.dim() * entry.dim();
    let stacked = QMatrix::from_fn(n2, basis.len(), |r, k| basis[k].1.entries()[r].clone());
    let pattern_dim = if basis.is_empty() { 0 } else { stacked.rank() };
    let outside: Vec<&str> = basis
        .iter()
        .filter(|(_, m)| !is_derivation(&entry.structure, m).unwrap_or(false))
        .map(|(v, _)| v.as_str())
        .collect();
    let ok = outside.is_empty() && pattern_dim == space.dim();
    if !ok {
        let mut detail = format!("{exact} (dimension {}; stated pattern has dimension {pattern_dim}", space.dim());
        if !outside.is_empty() {
            detail.push_str(&format!("; directions {} are not derivations", outside.join(", ")));
        }
        detail.push(')');
        out.push(Discrepancy {
            location: "derivation_pattern".into(),
            stated_value: entry.pattern.to_string(),
            recomputed_value: detail,
        });
    }
    (ok, pattern_dim)
}

fn check_eigenvalues(entry: &CatalogEntry, seed: u64, out: &mut Vec<Discrepancy>) -> bool {
    const POINTS: usize = 8;
    let vars = entry.pattern.variables();
    let mut rng = entry_rng(entry, seed, 1);
    let poly = entry.pattern.char_poly();
    for _ in 0..POINTS {
        let mut env: BTreeMap<String, Rational> =
            vars.iter().map(|v| (v.clone(), int(rng.gen_range(-4..=4)))).collect();
        let m = entry.pattern.eval(&env).expect("pattern variables bound");
        for (k, v) in positional_bindings(&m) {
            env.entry(k).or_insert(v);
        }
        if let Some(a) = &entry.param {
            env.insert("a".into(), a.clone());
        }
        let lookup = |v: &str| env.get(v).cloned();
        let mismatch = match &entry.eigenvalues {
            EigenFormula::Roots { roots, .. } => {
                let stated: Vec<Surd> = match roots.iter().map(|r| r.eval(&lookup)).collect() {
                    Ok(s) => s,
                    Err(e) => {
                        out.push(Discrepancy {
                            location: "eigenvalues".into(),
                            stated_value: entry.eigenvalues.stated().to_string(),
                            recomputed_value: format!("formula cannot be evaluated: {e}"),
                        });
                        return false;
                    }
                };
                let spec = spectrum(&m, 1e-9).expect("square matrix");
                let exact: Vec<Eigenvalue> = spec
                    .classes
                    .iter()
                    .flat_map(|c| std::iter::repeat_n(c.value.clone(), c.algebraic))
                    .collect();
                (!eigenvalues_equal(&stated, &exact)).then(|| {
                    (
                        format_eigen_list(&sorted_eigen_strings(stated.iter().map(|s| s.to_string()))),
                        format_eigen_list(&sorted_eigen_strings(exact.iter().map(|e| e.to_string()))),
                    )
                })
            }
            EigenFormula::CubicCharPoly { linear_coeff, .. } => {
                let a = linear_coeff.eval(&lookup).expect("positional names bound");
                let tr = m.trace();
                let det = m.determinant();
                let stated = vec![-det.clone(), -a.clone(), -tr.clone(), int(1)];
                let exact = char_poly(&m).expect("square matrix");
                let exact_coeffs: Vec<Rational> = (0..=3).map(|k| exact.coeff(k)).collect();
                (stated != exact_coeffs).then(|| {
                    (
                        format!("A = {}", format_rational(&a)),
                        format!("A = {}", format_rational(&-exact_coeffs[1].clone())),
                    )
                })
            }
        };
        if let Some((stated_vals, exact_vals)) = mismatch {
            let at = format_bindings(&env, &vars);
            out.push(Discrepancy {
                location: "eigenvalues".into(),
                stated_value: format!("{} = {stated_vals} at {at}", entry.eigenvalues.stated()),
                recomputed_value: format!(
                    "{exact_vals} at {at}; characteristic polynomial of the stated pattern: {}",
                    format_char_poly(&poly)
                ),
            });
            return false;
        }
    }
    true
}

fn check_proposition(
    entry: &CatalogEntry,
    space: &DerivationSpace,
    seed: u64,
    cfg: &ToleranceConfig,
    out: &mut Vec<Discrepancy>,
) -> bool {
    let mut ok = true;
    if entry.proposition.stated_label != entry.algebra_type {
        ok = false;
        out.push(Discrepancy {
            location: "proposition".into(),
            stated_value: format!("stated for type {}", entry.proposition.stated_label),
            recomputed_value: format!("the algebra is of type {}", entry.algebra_type),
        });
    }
    let Ok(rows) = sample_rows(entry, space, seed, cfg, 10) else {
        return ok;
    };
    let stated = &entry.proposition.stated;
    let witness = rows.iter().find(|r| r.stated_periodic != r.verdict.is_periodic());
    if let Some(w) = witness {
        ok = false;
        out.push(Discrepancy {
            location: "proposition".into(),
            stated_value: stated.to_string(),
            recomputed_value: format!(
                "{}; D = {} classifies {} while the statement predicts {}",
                entry.proposition.exact,
                w.derivation,
                w.verdict.tag(),
                if w.stated_periodic { "periodic orbits" } else { "none" }
            ),
        });
    }
    ok
}

/// One sampled derivation with its verdict and the predictions of each form of the claim.
#[derive(Debug, Clone, PartialEq)]
pub struct VerdictRow {
    pub entry: String,
    pub param: Option<Rational>,
    pub derivation: QMatrix,
    pub bindings: BTreeMap<String, Rational>,
    pub verdict: FlowVerdict,
    pub stated_periodic: bool,
    pub reading_periodic: bool,
    pub exact_periodic: bool,
}

impl VerdictRow {
    /// Whether the verdict agrees with the claim as meant to be read.
    pub fn agrees(&self) -> bool {
        self.verdict.is_periodic() == self.reading_periodic
    }
}

fn random_coeffs(rng: &mut ChaCha8Rng, k: usize) -> Vec<Rational> {
    (0..k).map(|_| int(rng.gen_range(-3..=3))).collect()
}

/// Linear functionals `D ↦ Σ W∘D` for the linear zero-constraints of a claim, or the trace when
/// the claim has none.
fn constraint_weights(entry: &CatalogEntry) -> Vec<QMatrix> {
    let n = entry.dim();
    let zero = entry.proposition.exact.zero_constraints();
    if zero.is_empty() {
        return vec![QMatrix::identity(n)];
    }
    zero.iter()
        .filter_map(|e| {
            let coeffs = e.linear_coefficients()?;
            let mut w = QMatrix::zeros(n, n);
            for r in 0..n {
                for c in 0..n {
                    if let Some(v) = coeffs.get(&positional_name(n, r, c)) {
                        w.set(r, c, v.clone());
                    }
                }
            }
            Some(w)
        })
        .collect()
}

/// Moves `coeffs` onto the subspace where every functional vanishes.
fn project_coeffs(space: &DerivationSpace, weights: &[QMatrix], coeffs: &mut [Rational]) {
    let apply = |w: &QMatrix, m: &QMatrix| -> Rational {
        w.entries().iter().zip(m.entries()).map(|(a, b)| a * b).sum()
    };
    let l = QMatrix::from_fn(weights.len(), space.dim(), |j, i| apply(&weights[j], &space.basis()[i]));
    let (_, pivots) = l.rref();
    if pivots.is_empty() {
        return;
    }
    let rhs: Vec<Rational> = l.mul_vec(coeffs).into_iter().map(|v| -v).collect();
    let sub = QMatrix::from_fn(l.rows(), pivots.len(), |r, k| l.get(r, pivots[k]).clone());
    if let Some(delta) = sub.solve(&rhs) {
        for (k, &p) in pivots.iter().enumerate() {
            coeffs[p] += &delta[k];
        }
    }
}

fn planted_kernel(rng: &mut ChaCha8Rng) -> QMatrix {
    let p = loop {
        let candidate = QMatrix::from_fn(3, 3, |_, _| int(rng.gen_range(-2..=2)));
        if !candidate.determinant().is_zero() {
            break candidate;
        }
    };
    let (x, y, z) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3), rng.gen_range(-3..=3));
    let core = QMatrix::from_i64(3, 3, &[x, y, 0, z, -x, 0, 0, 0, 0]);
    let inv = p.inverse().expect("nonsingular");
    &(&p * &core) * &inv
}

/// Draws nonzero derivations until `per_side` samples sit on each side of the exact condition,
/// or the attempt budget runs out.
fn sample_rows(
    entry: &CatalogEntry,
    space: &DerivationSpace,
    seed: u64,
    cfg: &ToleranceConfig,
    per_side: usize,
) -> Result<Vec<VerdictRow>, CatalogError> {
    const ATTEMPTS: usize = 2000;
    let mut rng = entry_rng(entry, seed, 2);
    let weights = constraint_weights(entry);
    let mut rows = Vec::new();
    let (mut periodic, mut other) = (0, 0);
    for attempt in 0..ATTEMPTS {
        if periodic >= per_side && other >= per_side {
            break;
        }
        let d = if attempt % 2 == 1 && entry.sampler == Sampler::PlantedKernel {
            planted_kernel(&mut rng)
        } else {
            let mut coeffs = random_coeffs(&mut rng, space.dim());
            if attempt % 2 == 1 {
                project_coeffs(space, &weights, &mut coeffs);
            }
            space.combine(&coeffs)
        };
        if d.is_zero() {
            continue;
        }
        let env = entry.bindings(&d);
        let lookup = |v: &str| env.get(v).cloned();
        let prop = &entry.proposition;
        let exact_periodic = prop.exact.predicts_periodic(&lookup).expect("exact claim is positional");
        let bucket = if exact_periodic { &mut periodic } else { &mut other };
        if *bucket >= per_side {
            continue;
        }
        *bucket += 1;
        let verdict = classify_linear_flow(&entry.structure, &d, cfg)?.verdict;
        rows.push(VerdictRow {
            entry: entry.name.to_string(),
            param: entry.param.clone(),
            stated_periodic: prop.stated.predicts_periodic(&lookup).unwrap_or(false),
            reading_periodic: prop.reading().predicts_periodic(&lookup).unwrap_or(false),
            exact_periodic,
            derivation: d,
            bindings: env,
            verdict,
        });
    }
    Ok(rows)
}

/// Entries instantiated for the verdict table: each parametric family at every sample `a`.
pub fn verdict_entries() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for name in ENTRY_NAMES {
        if default_param(name).is_some() {
            out.extend(sample_params().into_iter().map(|a| get_entry(name, Some(a)).expect("admissible")));
        } else {
            out.push(get_entry(name, None).expect("known entry"));
        }
    }
    out
}

/// Sampled derivations of every entry with their verdicts, up to ten on each side of each
/// entry's periodicity condition.
pub fn verdict_table() -> Result<Vec<VerdictRow>, CatalogError> {
    verdict_table_with(DEFAULT_SEED, &ToleranceConfig::default())
}

pub fn verdict_table_with(seed: u64, cfg: &ToleranceConfig) -> Result<Vec<VerdictRow>, CatalogError> {
    let mut rows = Vec::new();
    for entry in verdict_entries() {
        let space = entry.derivation_space();
        rows.extend(sample_rows(&entry, &space, seed, cfg, 10)?);
    }
    Ok(rows)
}
