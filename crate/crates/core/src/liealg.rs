//! Finite-dimensional real Lie algebras given by exact structure constants.
//!
//! Brackets of basis vectors are stored only for index pairs `i < j`; the opposite order is
//! obtained by negation, so antisymmetry cannot be violated by the stored data. Indices are
//! zero-based in the API and one-based in the JSON file format.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::QMatrix;
use crate::rational::{format_rational, int, parse_rational, ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("bracket entry ({i},{j}) must satisfy i < j")]
    UnorderedPair { i: usize, j: usize },
    #[error("duplicate bracket entry ({i},{j},{k})")]
    DuplicateEntry { i: usize, j: usize, k: usize },
    #[error("algebra dimension must be at least 1")]
    EmptyAlgebra,
    #[error("expected {dim} basis labels, found {found}")]
    LabelCount { dim: usize, found: usize },
    #[error("bad structure constant: {0}")]
    Rational(#[from] ParseRationalError),
    #[error("malformed algebra file: {0}")]
    Format(String),
}

/// Coordinates of an algebra element in the fixed basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AlgebraVector(pub Vec<Rational>);

impl AlgebraVector {
    pub fn zero(dim: usize) -> Self {
        Self(vec![Rational::zero(); dim])
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = int(1);
        v
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        Self(self.0.iter().map(|c| c * factor).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for AlgebraVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Outcome of the Jacobi check. A failing algebra is reported, not rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub jacobi_ok: bool,
    /// Zero-based basis triple with the largest cyclic-sum violation.
    pub worst_triple: Option<(usize, usize, usize)>,
    /// Max-norm of the worst cyclic sum.
    pub residual: Rational,
}

#[derive(Clone, PartialEq, Eq)]
pub struct StructureConstants {
    dim: usize,
    labels: Vec<String>,
    brackets: BTreeMap<(usize, usize), Vec<(usize, Rational)>>,
}

impl fmt::Debug for StructureConstants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StructureConstants(dim={}", self.dim)?;
        for ((i, j), terms) in &self.brackets {
            let rhs: Vec<String> = terms
                .iter()
                .map(|(k, c)| format!("{}*{}", format_rational(c), self.labels[*k]))
                .collect();
            write!(f, ", [{},{}]={}", self.labels[*i], self.labels[*j], rhs.join("+"))?;
        }
        write!(f, ")")
    }
}

impl StructureConstants {
    /// Abelian algebra with the given basis labels.
    pub fn new(labels: Vec<String>) -> Result<Self, LieError> {
        if labels.is_empty() {
            return Err(LieError::EmptyAlgebra);
        }
        Ok(Self {
            dim: labels.len(),
            labels,
            brackets: BTreeMap::new(),
        })
    }

    /// Abelian algebra with labels `E1..En`.
    pub fn abelian(dim: usize) -> Result<Self, LieError> {
        Self::new((1..=dim).map(|i| format!("E{i}")).collect())
    }

    /// Sets `[E_i, E_j] = Σ c_k E_k`. Either index order is accepted; `i > j` stores the negation.
    pub fn set_bracket(&mut self, i: usize, j: usize, terms: &[(usize, Rational)]) -> Result<(), LieError> {
        for &idx in [i, j].iter().chain(terms.iter().map(|(k, _)| k)) {
            if idx >= self.dim {
                return Err(LieError::IndexOutOfRange { index: idx, dim: self.dim });
            }
        }
        if i == j {
            return Err(LieError::UnorderedPair { i, j });
        }
        let (key, sign) = if i < j { ((i, j), int(1)) } else { ((j, i), int(-1)) };
        let mut dense = vec![Rational::zero(); self.dim];
        for (k, c) in terms {
            dense[*k] += c * &sign;
        }
        let sparse: Vec<(usize, Rational)> = dense
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        if sparse.is_empty() {
            self.brackets.remove(&key);
        } else {
            self.brackets.insert(key, sparse);
        }
        Ok(())
    }

    pub fn with_bracket(mut self, i: usize, j: usize, terms: &[(usize, Rational)]) -> Result<Self, LieError> {
        self.set_bracket(i, j, terms)?;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `c_{ij}^k` for any index order.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> Rational {
        let (key, negate) = match i.cmp(&j) {
            std::cmp::Ordering::Less => ((i, j), false),
            std::cmp::Ordering::Greater => ((j, i), true),
            std::cmp::Ordering::Equal => return Rational::zero(),
        };
        let value = self
            .brackets
            .get(&key)
            .and_then(|terms| terms.iter().find(|(kk, _)| *kk == k))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero);
        if negate {
            -value
        } else {
            value
        }
    }

    /// Nonzero constants `(i, j, k, c)` with `i < j`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> + '_ {
        self.brackets
            .iter()
            .flat_map(|(&(i, j), terms)| terms.iter().map(move |(k, c)| (i, j, *k, c)))
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    fn check_dim(&self, v: &AlgebraVector) -> Result<(), LieError> {
        if v.dim() != self.dim {
            return Err(LieError::DimensionMismatch { expected: self.dim, found: v.dim() });
        }
        Ok(())
    }

    /// `[E_i, E_j]` as a coordinate vector.
    pub fn basis_bracket(&self, i: usize, j: usize) -> AlgebraVector {
        let mut out = AlgebraVector::zero(self.dim);
        let (key, negate) = if i < j { ((i, j), false) } else { ((j, i), true) };
        if let Some(terms) = self.brackets.get(&key) {
            for (k, c) in terms {
                out.0[*k] = if negate { -c.clone() } else { c.clone() };
            }
        }
        out
    }

    pub fn bracket(&self, x: &AlgebraVector, y: &AlgebraVector) -> Result<AlgebraVector, LieError> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let mut out = AlgebraVector::zero(self.dim);
        for (&(i, j), terms) in &self.brackets {
            // x_i y_j − x_j y_i multiplies c_{ij}.
            let w = &x.0[i] * &y.0[j] - &x.0[j] * &y.0[i];
            if w.is_zero() {
                continue;
            }
            for (k, c) in terms {
                out.0[*k] += &w * c;
            }
        }
        Ok(out)
    }

    /// Matrix of `ad(x) = [x, ·]`; column `j` is `[x, E_j]`.
    pub fn ad(&self, x: &AlgebraVector) -> Result<QMatrix, LieError> {
        self.check_dim(x)?;
        let n = self.dim;
        let mut m = QMatrix::zeros(n, n);
        for j in 0..n {
            let col = self.bracket(x, &AlgebraVector::basis(n, j))?;
            for (k, c) in col.0.into_iter().enumerate() {
                m.set(k, j, c);
            }
        }
        Ok(m)
    }

    /// Exact Jacobi check over all basis triples.
    pub fn validate(&self) -> ValidationReport {
        let n = self.dim;
        let mut worst: Option<((usize, usize, usize), Rational)> = None;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let e = |a| AlgebraVector::basis(n, a);
                    let cyc = |a: usize, b: usize, c: usize| {
                        self.bracket(&e(a), &self.basis_bracket(b, c)).expect("basis dims agree")
                    };
                    let sum = cyc(i, j, k).add(&cyc(j, k, i)).add(&cyc(k, i, j));
                    let norm = sum.0.iter().map(Signed::abs).max().unwrap_or_else(Rational::zero);
                    if !norm.is_zero() && worst.as_ref().is_none_or(|(_, w)| norm > *w) {
                        worst = Some(((i, j, k), norm));
                    }
                }
            }
        }
        match worst {
            None => ValidationReport {
                jacobi_ok: true,
                worst_triple: None,
                residual: Rational::zero(),
            },
            Some((triple, residual)) => ValidationReport {
                jacobi_ok: false,
                worst_triple: Some(triple),
                residual,
            },
        }
    }

    /// Basis of the center.
    pub fn center(&self) -> Vec<AlgebraVector> {
        let n = self.dim;
        // x is central iff [x, E_j] = 0 for all j: stack the maps x ↦ [x, E_j].
        let rows = QMatrix::from_fn(n * n, n, |r, i| {
            let (j, k) = (r / n, r % n);
            self.constant(i, j, k)
        });
        rows.nullspace().into_iter().map(AlgebraVector).collect()
    }

    /// The same algebra in the reordered basis `F_a = E_{perm[a]}`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.dim);
        let mut inverse = vec![0; self.dim];
        for (a, &p) in perm.iter().enumerate() {
            inverse[p] = a;
        }
        let mut out = Self {
            dim: self.dim,
            labels: perm.iter().map(|&p| self.labels[p].clone()).collect(),
            brackets: BTreeMap::new(),
        };
        for (i, j, k, c) in self.entries() {
            let mut dense = out.basis_bracket(inverse[i], inverse[j]);
            dense.0[inverse[k]] += c;
            let terms: Vec<(usize, Rational)> = dense.0.into_iter().enumerate().collect();
            out.set_bracket(inverse[i], inverse[j], &terms).expect("indices in range");
        }
        out
    }

    pub fn to_file(&self) -> AlgebraFile {
        AlgebraFile {
            dim: self.dim,
            basis: self.labels.clone(),
            brackets: self
                .entries()
                .map(|(i, j, k, c)| BracketEntry {
                    i: i + 1,
                    j: j + 1,
                    k: k + 1,
                    c: format_rational(c),
                })
                .collect(),
        }
    }

    pub fn from_file(file: &AlgebraFile) -> Result<Self, LieError> {
        if file.dim == 0 {
            return Err(LieError::EmptyAlgebra);
        }
        if file.basis.len() != file.dim {
            return Err(LieError::LabelCount { dim: file.dim, found: file.basis.len() });
        }
        let mut sc = Self::new(file.basis.clone())?;
        let mut seen = std::collections::BTreeSet::new();
        let mut dense: BTreeMap<(usize, usize), Vec<(usize, Rational)>> = BTreeMap::new();
        for e in &file.brackets {
            for idx in [e.i, e.j, e.k] {
                if idx == 0 || idx > file.dim {
                    return Err(LieError::IndexOutOfRange { index: idx, dim: file.dim });
                }
            }
            if e.i >= e.j {
                return Err(LieError::UnorderedPair { i: e.i, j: e.j });
            }
            if !seen.insert((e.i, e.j, e.k)) {
                return Err(LieError::DuplicateEntry { i: e.i, j: e.j, k: e.k });
            }
            let c = parse_rational(&e.c)?;
            dense.entry((e.i - 1, e.j - 1)).or_default().push((e.k - 1, c));
        }
        for ((i, j), terms) in dense {
            sc.set_bracket(i, j, &terms)?;
        }
        Ok(sc)
    }

    pub fn from_json(text: &str) -> Result<Self, LieError> {
        let file: AlgebraFile = serde_json::from_str(text).map_err(|e| LieError::Format(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("algebra file serializes")
    }
}

/// On-disk algebra description. Indices are one-based and each entry must have `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub dim: usize,
    pub basis: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: String,
}
