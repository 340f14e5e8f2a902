//! Univariate polynomials with rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::matrix::QMatrix;
use crate::rational::{common_denominator, format_rational, to_f64, Rational};

/// Coefficients are stored in ascending order without trailing zeros; the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<Rational>,
}

/// A factor found by [`QPoly::factor_square_free`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QFactor {
    pub poly: QPoly,
    /// `true` when irreducibility over the rationals is established.
    pub irreducible: bool,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `x − root`
    pub fn linear(root: &Rational) -> Self {
        Self::new(vec![-root.clone(), Rational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree, treating the zero polynomial as degree 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => {
                let inv = lc.recip();
                Self::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for shift in (0..=nd - dd).rev() {
            let c = &rem[shift + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &c * dc;
            }
            quot[shift] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Exact quotient; panics when the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_rem(self).1.is_zero()
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.to_f64_coeffs()
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `p(M)` by Horner's rule.
    pub fn eval_matrix(&self, m: &QMatrix) -> QMatrix {
        let n = m.rows();
        let mut acc = QMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * m) + &QMatrix::identity(n).scale(c);
        }
        acc
    }

    /// Square-free decomposition `p = lc · Π fᵢ^i` by Yun's algorithm. Returns monic non-constant
    /// factors with their multiplicities.
    pub fn square_free_decomposition(&self) -> Vec<(Self, usize)> {
        if self.deg() == 0 {
            return Vec::new();
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div(&a0);
        let c = df.exact_div(&a0);
        let mut d = &c - &b.derivative();
        let mut out = Vec::new();
        let mut i = 1;
        while b.deg() > 0 {
            let a = b.gcd(&d);
            b = b.exact_div(&a);
            let c_next = d.exact_div(&a);
            d = &c_next - &b.derivative();
            if a.deg() > 0 {
                out.push((a, i));
            }
            i += 1;
        }
        out
    }

    /// Product of the distinct monic irreducible factors.
    pub fn square_free_part(&self) -> Self {
        if self.deg() == 0 {
            return Self::one();
        }
        self.monic().exact_div(&self.gcd(&self.derivative()))
    }

    /// Integer coefficients with gcd 1 and positive leading coefficient, proportional to `self`.
    pub fn primitive_integer_coeffs(&self) -> Vec<BigInt> {
        let l = common_denominator(&self.coeffs);
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        if g.is_zero() {
            return ints;
        }
        let sign = if ints.last().is_some_and(Signed::is_negative) { -BigInt::one() } else { BigInt::one() };
        ints.into_iter().map(|v| v / &g * &sign).collect()
    }

    /// Roots in the complex plane from the companion matrix, refined by Newton steps.
    pub fn numeric_roots(&self) -> Vec<Complex64> {
        let Some(d) = self.degree() else {
            return Vec::new();
        };
        if d == 0 {
            return Vec::new();
        }
        let monic = self.monic().to_f64_coeffs();
        let companion = DMatrix::from_fn(d, d, |r, c| {
            if c == d - 1 {
                -monic[r]
            } else if r == c + 1 {
                1.0
            } else {
                0.0
            }
        });
        let raw: Vec<Complex64> = if d == 1 {
            vec![Complex64::new(-monic[0], 0.0)]
        } else {
            crate::spectral::eigenvalues(&companion)
        };
        let deriv: Vec<f64> = (1..=d).map(|i| monic[i] * i as f64).collect();
        let horner = |cs: &[f64], z: Complex64| cs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
        raw.into_iter()
            .map(|mut z| {
                for _ in 0..4 {
                    let p = horner(&monic, z);
                    let dp = horner(&deriv, z);
                    if dp.norm() == 0.0 {
                        break;
                    }
                    let next = z - p / dp;
                    if !next.re.is_finite() || !next.im.is_finite() || horner(&monic, next).norm() >= p.norm() {
                        break;
                    }
                    z = next;
                }
                z
            })
            .collect()
    }

    /// Distinct rational roots in increasing order.
    pub fn rational_roots(&self) -> Vec<Rational> {
        if self.deg() == 0 {
            return Vec::new();
        }
        let f = self.square_free_part();
        let mut roots = Vec::new();
        let mut ints = f.primitive_integer_coeffs();
        if ints[0].is_zero() {
            roots.push(Rational::zero());
            let shift = ints.iter().take_while(|c| c.is_zero()).count();
            ints.drain(..shift);
        }
        let stripped = Self::new(ints.iter().cloned().map(Rational::from_integer).collect());
        match stripped.deg() {
            0 => {}
            1 => roots.push(-stripped.coeff(0) / stripped.coeff(1)),
            _ => {
                let a0 = ints[0].clone();
                let ad = ints.last().expect("nonempty").clone();
                let denominators = divisors(&ad);
                for z in stripped.numeric_roots() {
                    if z.im.abs() > 1e-4 * z.norm().max(1.0) + 1e-6 {
                        continue;
                    }
                    let candidates: Vec<Rational> = match &denominators {
                        Some(qs) => qs
                            .iter()
                            .flat_map(|q| {
                                let a0 = &a0;
                                let qf = q.to_f64().unwrap_or(f64::INFINITY);
                                let centre = (z.re * qf).round();
                                (-1..=1).filter_map(move |off| {
                                    let p = BigInt::from((centre + off as f64) as i128);
                                    (!p.is_zero() && a0.is_multiple_of(&p)).then(|| Rational::new(p, q.clone()))
                                })
                            })
                            .collect(),
                        None => convergents(z.re, 1e12),
                    };
                    for cand in candidates {
                        if !roots.contains(&cand) && stripped.eval(&cand).is_zero() {
                            roots.push(cand);
                        }
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// Splits a square-free polynomial into monic factors: linear factors for rational roots,
    /// then quadratic and cubic factors located from numeric roots and confirmed by exact division.
    pub fn factor_square_free(&self) -> Vec<QFactor> {
        let mut rest = self.monic();
        let mut out = Vec::new();
        for r in self.rational_roots() {
            let lin = Self::linear(&r);
            rest = rest.exact_div(&lin);
            out.push(QFactor { poly: lin, irreducible: true });
        }
        loop {
            let d = rest.deg();
            if d == 0 {
                break;
            }
            if d <= 3 {
                out.push(QFactor { poly: rest, irreducible: true });
                break;
            }
            match rest.find_integer_factor() {
                Some(f) => {
                    rest = rest.exact_div(&f);
                    out.push(QFactor { poly: f, irreducible: true });
                }
                None => {
                    // Without linear, quadratic or cubic factors, degrees up to 7 are irreducible.
                    out.push(QFactor { irreducible: d <= 7, poly: rest });
                    break;
                }
            }
        }
        out
    }

    /// Searches for a monic quadratic, then cubic, divisor with rational coefficients. Works in the
    /// variable `y = L·x` where the polynomial becomes monic with integer coefficients, so the
    /// elementary symmetric functions of any root subset of a true factor are integers.
    fn find_integer_factor(&self) -> Option<Self> {
        let l = common_denominator(&self.coeffs);
        let lf = l.to_f64()?;
        let roots: Vec<Complex64> = self.numeric_roots().into_iter().map(|z| z * lf).collect();
        let near_int = |z: Complex64| -> Option<BigInt> {
            let tol = 0.25_f64.max(1e-9 * z.norm());
            (z.im.abs() < tol && (z.re - z.re.round()).abs() < tol && z.re.abs() < 1e15)
                .then(|| BigInt::from(z.re.round() as i128))
        };
        let lq = Rational::from_integer(l);
        let build = |sym: &[BigInt]| -> Self {
            // y^k − e1 y^{k−1} + e2 y^{k−2} − …, rescaled to x.
            let k = sym.len();
            let mut coeffs = vec![Rational::zero(); k + 1];
            coeffs[k] = Rational::one();
            for (idx, e) in sym.iter().enumerate() {
                let power = idx + 1;
                let sign = if power % 2 == 1 { -1 } else { 1 };
                coeffs[k - power] = Rational::from_integer(e * BigInt::from(sign)) / num_traits::pow(lq.clone(), power);
            }
            Self::new(coeffs)
        };
        let n = roots.len();
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (roots[i], roots[j]);
                if let (Some(e1), Some(e2)) = (near_int(a + b), near_int(a * b)) {
                    let cand = build(&[e1, e2]);
                    if cand.divides(self) {
                        return Some(cand);
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (a, b, c) = (roots[i], roots[j], roots[k]);
                    if let (Some(e1), Some(e2), Some(e3)) =
                        (near_int(a + b + c), near_int(a * b + a * c + b * c), near_int(a * b * c))
                    {
                        let cand = build(&[e1, e2, e3]);
                        if cand.divides(self) {
                            return Some(cand);
                        }
                    }
                }
            }
        }
        None
    }
}

/// Positive divisors of `|n|` when it can be factored by trial division up to 10⁶.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let mut rest = n.abs();
    if rest.is_zero() {
        return None;
    }
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1_000_000);
    while &p * &p <= rest {
        if p > limit {
            return None;
        }
        let mut e = 0;
        while rest.is_multiple_of(&p) {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            primes.push((p.clone(), e));
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if !rest.is_one() {
        primes.push((rest, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (prime, e) in primes {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pw = d.clone();
            for _ in 0..=e {
                next.push(pw.clone());
                pw *= &prime;
            }
        }
        divs = next;
        if divs.len() > 100_000 {
            return None;
        }
    }
    divs.sort();
    Some(divs)
}

/// Continued-fraction convergents of `x` with denominators up to `max_den`.
fn convergents(x: f64, max_den: f64) -> Vec<Rational> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (0.0_f64, 1.0_f64);
    let (mut k0, mut k1) = (1.0_f64, 0.0_f64);
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        let (h2, k2) = (a * h1 + h0, a * k1 + k0);
        if k2 > max_den || !h2.is_finite() {
            break;
        }
        out.push(Rational::new(BigInt::from(h2 as i128), BigInt::from(k2 as i128)));
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    out
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        self + &(-rhs)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{}", format_rational(&mag))?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}x^{i}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}
