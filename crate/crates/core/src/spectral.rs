//! Eigenvalues with algebraic and geometric multiplicities.
//!
//! Rational matrices take the exact route: characteristic polynomial, square-free decomposition,
//! exact factors, and kernel dimensions of `f(D)` computed over the rationals. Floating-point
//! matrices take the numeric route: Schur eigenvalues, clustering, and SVD ranks.

use std::cmp::Ordering;
use std::fmt;

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::matrix::QMatrix;
use crate::poly::{QFactor, QPoly};
use crate::rational::{exact_sqrt, format_rational, int, to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has non-finite entries")]
    NonFinite,
}

/// `re + sign·√rad`, where `√rad = i·√|rad|` for negative `rad`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    pub re: Rational,
    pub rad: Rational,
    pub sign: i8,
}

impl Surd {
    pub fn rational(value: Rational) -> Self {
        Self { re: value, rad: Rational::zero(), sign: 0 }
    }

    /// Builds `re + sign·√rad` and folds perfect squares of non-negative radicands into `re`.
    pub fn new(re: Rational, rad: Rational, sign: i8) -> Self {
        if rad.is_zero() || sign == 0 {
            return Self::rational(re);
        }
        if !rad.is_negative() {
            if let Some(root) = exact_sqrt(&rad) {
                let shifted = if sign > 0 { re + root } else { re - root };
                return Self::rational(shifted);
            }
        }
        Self { re, rad, sign: sign.signum() }
    }

    pub fn is_real(&self) -> bool {
        !self.rad.is_negative()
    }

    pub fn is_zero(&self) -> bool {
        self.rad.is_zero() && self.re.is_zero()
    }

    pub fn to_complex(&self) -> Complex64 {
        let re = to_f64(&self.re);
        let mag = to_f64(&self.rad.abs()).sqrt() * f64::from(self.sign);
        if self.rad.is_negative() {
            Complex64::new(re, mag)
        } else {
            Complex64::new(re + mag, 0.0)
        }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == 0 {
            return write!(f, "{}", format_rational(&self.re));
        }
        let imaginary = self.rad.is_negative();
        let mag = self.rad.abs();
        let body = match exact_sqrt(&mag) {
            Some(root) if imaginary && root.is_one() => "i".to_string(),
            Some(root) => format!("{}{}", format_rational(&root), if imaginary { "*i" } else { "" }),
            None => format!("sqrt({}){}", format_rational(&mag), if imaginary { "*i" } else { "" }),
        };
        let op = if self.sign > 0 { "+" } else { "-" };
        if self.re.is_zero() {
            if self.sign > 0 {
                write!(f, "{body}")
            } else {
                write!(f, "-{body}")
            }
        } else {
            write!(f, "{} {op} {body}", format_rational(&self.re))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Eigenvalue {
    Exact(Surd),
    Approx(Complex64),
}

impl Eigenvalue {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Self::Exact(s) => s.to_complex(),
            Self::Approx(z) => *z,
        }
    }
}

impl fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exact(s) => write!(f, "{s}"),
            Self::Approx(z) if z.im == 0.0 => write!(f, "{:.12}", z.re),
            Self::Approx(z) => write!(f, "{:.12} {} {:.12}*i", z.re, if z.im < 0.0 { '-' } else { '+' }, z.im.abs()),
        }
    }
}

/// Where an eigenvalue sits in the complex plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Locus {
    Zero,
    /// Real and nonzero.
    Real,
    /// Nonzero with zero real part.
    Imaginary,
    /// Nonzero real and imaginary parts.
    Complex,
}

/// Positive imaginary part of an eigenvalue on the imaginary axis.
#[derive(Clone, Debug, PartialEq)]
pub struct Frequency {
    pub value: f64,
    /// The exact square of the frequency when it is known to be rational.
    pub exact_square: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenClass {
    pub value: Eigenvalue,
    pub locus: Locus,
    pub algebraic: usize,
    pub geometric: usize,
}

impl EigenClass {
    pub fn is_semisimple(&self) -> bool {
        self.algebraic == self.geometric
    }

    /// Frequency of an imaginary eigenvalue in the upper half plane.
    pub fn frequency(&self) -> Option<Frequency> {
        if self.locus != Locus::Imaginary {
            return None;
        }
        match &self.value {
            Eigenvalue::Exact(s) if s.sign > 0 => Some(Frequency {
                value: to_f64(&-s.rad.clone()).sqrt(),
                exact_square: Some(-s.rad.clone()),
            }),
            Eigenvalue::Approx(z) if z.im > 0.0 => Some(Frequency { value: z.im, exact_square: None }),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub classes: Vec<EigenClass>,
    pub dim: usize,
    /// Relative tolerance supplied by the caller.
    pub tolerance: f64,
    /// Absolute radius used to separate or identify numeric eigenvalues.
    pub resolution: f64,
    /// Distinct eigenvalues were too close to separate reliably and were merged.
    pub ill_conditioned: bool,
    /// Characteristic polynomial, when computed exactly.
    pub char_poly: Option<QPoly>,
}

impl Spectrum {
    pub fn is_exact(&self) -> bool {
        self.char_poly.is_some()
    }

    pub fn eigenvalues_with_multiplicity(&self) -> Vec<Complex64> {
        self.classes
            .iter()
            .flat_map(|c| std::iter::repeat_n(c.value.to_complex(), c.algebraic))
            .collect()
    }
}

/// Monic `det(λI − M)` by the Faddeev–LeVerrier recursion.
pub fn char_poly(m: &QMatrix) -> Result<QPoly, SpectralError> {
    if !m.is_square() {
        return Err(SpectralError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut mk = QMatrix::zeros(n, n);
    for k in 1..=n {
        mk = &(m * &mk) + &QMatrix::identity(n).scale(&coeffs[n - k + 1]);
        let am = m * &mk;
        coeffs[n - k] = -am.trace() / int(k as i64);
    }
    Ok(QPoly::new(coeffs))
}

/// Eigenvalues of a real matrix from its real Schur form. Matrices on which the QR iteration
/// stalls (signed permutations, for instance) are retried after a fixed triangular similarity.
pub fn eigenvalues(m: &DMatrix<f64>) -> Vec<Complex64> {
    let n = m.nrows();
    if n == 0 {
        return Vec::new();
    }
    let collect = |s: Schur<f64, nalgebra::Dyn>| s.complex_eigenvalues().iter().copied().collect();
    if let Some(s) = Schur::try_new(m.clone(), f64::EPSILON, 5_000) {
        return collect(s);
    }
    for k in 1..=8 {
        let c = 0.37 * k as f64;
        let p = DMatrix::from_fn(n, n, |r, col| match col.cmp(&r) {
            Ordering::Equal => 1.0,
            Ordering::Greater => c / (col - r) as f64,
            Ordering::Less => 0.0,
        });
        let p_inv = p.clone().try_inverse().expect("unit triangular");
        if let Some(s) = Schur::try_new(&p * m * p_inv, f64::EPSILON, 5_000) {
            return collect(s);
        }
    }
    collect(Schur::new(m.clone()))
}

/// Rank with singular values below `tol · σ_max` treated as zero.
pub fn numeric_rank(m: &DMatrix<f64>, tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * max).count()
}

/// Rank with singular values below `tol · reference` treated as zero.
fn rank_against(m: &DMatrix<f64>, tol: f64, reference: f64) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    sv.iter().filter(|&&s| s > tol * reference).count()
}

/// Kernel dimension at `λ`. Shifted matrices can vanish up to rounding, so their singular values
/// are measured against the scale of `D` and `λ` rather than against their own norm.
fn kernel_dim_numeric(m: &DMatrix<f64>, lambda: Complex64, tol: f64) -> usize {
    let n = m.nrows();
    let norm = m.clone().svd(false, false).singular_values.iter().cloned().fold(0.0, f64::max);
    let reference = (norm + lambda.norm()).max(f64::MIN_POSITIVE);
    if lambda.im == 0.0 {
        let shifted = m - DMatrix::identity(n, n) * lambda.re;
        n - rank_against(&shifted, tol, reference)
    } else {
        // Real form: kernel of D² − 2αD + (α² + β²)I has dimension twice the geometric multiplicity.
        let q = m * m - m * (2.0 * lambda.re) + DMatrix::identity(n, n) * lambda.norm_sqr();
        (n - rank_against(&q, tol, reference * reference)) / 2
    }
}

fn locus_of(z: Complex64, resolution: f64) -> Locus {
    if z.norm() <= resolution {
        Locus::Zero
    } else if z.im.abs() <= resolution {
        Locus::Real
    } else if z.re.abs() <= resolution {
        Locus::Imaginary
    } else {
        Locus::Complex
    }
}

fn order(a: &EigenClass, b: &EigenClass) -> Ordering {
    let (za, zb) = (a.value.to_complex(), b.value.to_complex());
    za.re
        .partial_cmp(&zb.re)
        .unwrap_or(Ordering::Equal)
        .then(za.im.partial_cmp(&zb.im).unwrap_or(Ordering::Equal))
}

/// Exact spectrum of a rational matrix. `tol` only governs roots of factors of degree three or
/// more, which are located numerically.
pub fn spectrum(m: &QMatrix, tol: f64) -> Result<Spectrum, SpectralError> {
    let p = char_poly(m)?;
    let n = m.rows();
    let df = m.to_f64();
    let scale = df.iter().fold(1.0_f64, |acc, v| acc.max(v.abs())) * n.max(1) as f64;
    let resolution = tol * scale;
    let mut classes = Vec::new();
    for (part, mult) in p.square_free_decomposition() {
        for QFactor { poly, irreducible } in part.factor_square_free() {
            let d = poly.deg();
            let kernel = n - poly.eval_matrix(m).rank();
            // The kernel of f(D) is the sum of eigenspaces over the roots of f when semisimple.
            let shared_geometric = if kernel == d * mult {
                Some(mult)
            } else if irreducible && kernel.is_multiple_of(d) {
                Some(kernel / d)
            } else {
                None
            };
            match d {
                1 => {
                    let root = -poly.coeff(0);
                    let locus = if root.is_zero() { Locus::Zero } else { Locus::Real };
                    classes.push(EigenClass {
                        value: Eigenvalue::Exact(Surd::rational(root)),
                        locus,
                        algebraic: mult,
                        geometric: kernel,
                    });
                }
                2 => {
                    // x² + bx + c has roots −b/2 ± √(b²/4 − c).
                    let b = poly.coeff(1);
                    let c = poly.coeff(0);
                    let re = -&b / int(2);
                    let rad = &b * &b / int(4) - c;
                    let geometric = shared_geometric.unwrap_or(kernel / 2);
                    for sign in [-1, 1] {
                        let s = Surd::new(re.clone(), rad.clone(), sign);
                        let locus = if s.is_real() {
                            Locus::Real
                        } else if s.re.is_zero() {
                            Locus::Imaginary
                        } else {
                            Locus::Complex
                        };
                        classes.push(EigenClass {
                            value: Eigenvalue::Exact(s),
                            locus,
                            algebraic: mult,
                            geometric,
                        });
                    }
                }
                _ => {
                    // An irreducible factor with a root on the imaginary axis is even, since −λ = λ̄
                    // is then a common root of f(x) and f(−x).
                    let even = (0..=d).step_by(2).all(|i| poly.coeff(i + 1).is_zero());
                    for z in poly.numeric_roots() {
                        let mut z = z;
                        if z.im.abs() <= resolution {
                            z.im = 0.0;
                        }
                        let mut locus = locus_of(z, resolution);
                        if locus == Locus::Zero {
                            locus = if z.im == 0.0 { Locus::Real } else { Locus::Imaginary };
                        }
                        if irreducible && !even && locus == Locus::Imaginary {
                            locus = Locus::Complex;
                        }
                        if locus == Locus::Imaginary {
                            z.re = 0.0;
                        }
                        let geometric = shared_geometric
                            .unwrap_or_else(|| kernel_dim_numeric(&df, z, tol).clamp(1, mult));
                        classes.push(EigenClass {
                            value: Eigenvalue::Approx(z),
                            locus,
                            algebraic: mult,
                            geometric,
                        });
                    }
                }
            }
        }
    }
    classes.sort_by(order);
    Ok(Spectrum {
        classes,
        dim: n,
        tolerance: tol,
        resolution,
        ill_conditioned: false,
        char_poly: Some(p),
    })
}

/// Spectrum of a floating-point matrix. Eigenvalues within `tol^{1/3}·max(1, |λ|max)` are
/// clustered; clusters closer than four times that radius are merged and flagged.
pub fn spectrum_numeric(m: &DMatrix<f64>, tol: f64) -> Result<Spectrum, SpectralError> {
    if m.nrows() != m.ncols() {
        return Err(SpectralError::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(SpectralError::NonFinite);
    }
    let n = m.nrows();
    let eig = eigenvalues(m);
    let scale = eig.iter().fold(1.0_f64, |acc, z| acc.max(z.norm()));
    let rho = tol.cbrt() * scale;

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (eig[i] - eig[j]).norm() <= rho {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let centroids = |parent: &mut Vec<usize>| {
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        for i in 0..n {
            let r = find(parent, i);
            match groups.iter_mut().find(|(root, _)| *root == r) {
                Some((_, members)) => members.push(i),
                None => groups.push((r, vec![i])),
            }
        }
        groups
            .into_iter()
            .map(|(_, members)| {
                let sum: Complex64 = members.iter().map(|&i| eig[i]).sum();
                (sum / members.len() as f64, members)
            })
            .collect::<Vec<_>>()
    };

    let mut ill = false;
    loop {
        let groups = centroids(&mut parent);
        let mut merged = false;
        'outer: for a in 0..groups.len() {
            for b in a + 1..groups.len() {
                if (groups[a].0 - groups[b].0).norm() < 4.0 * rho {
                    let (ra, rb) = (find(&mut parent, groups[a].1[0]), find(&mut parent, groups[b].1[0]));
                    parent[ra] = rb;
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            break;
        }
        ill = true;
    }

    let mut classes = Vec::new();
    for (centroid, members) in centroids(&mut parent) {
        let mut z = centroid;
        if z.im.abs() <= rho {
            z.im = 0.0;
        }
        let locus = locus_of(z, rho);
        match locus {
            Locus::Zero => z = Complex64::new(0.0, 0.0),
            Locus::Imaginary => z.re = 0.0,
            _ => {}
        }
        let algebraic = members.len();
        let mut geometric = kernel_dim_numeric(m, z, tol).clamp(1, algebraic);
        let merged_distinct = members
            .iter()
            .any(|&i| members.iter().any(|&j| (eig[i] - eig[j]).norm() > rho));
        if merged_distinct && algebraic > 1 {
            geometric = geometric.min(algebraic - 1);
        }
        classes.push(EigenClass {
            value: Eigenvalue::Approx(z),
            locus,
            algebraic,
            geometric,
        });
    }
    classes.sort_by(order);
    Ok(Spectrum {
        classes,
        dim: n,
        tolerance: tol,
        resolution: rho,
        ill_conditioned: ill,
        char_poly: None,
    })
}
