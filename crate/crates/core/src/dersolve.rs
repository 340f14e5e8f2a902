//! Exact derivation algebras.
//!
//! A linear map `D` is a derivation when `D[X,Y] = [DX,Y] + [X,DY]` for all `X, Y`. Writing the
//! unknown entries of `D` row-major (entry `(r, c)` is unknown `r·n + c`), the Leibniz rule on
//! basis pairs gives a homogeneous linear system whose kernel is solved exactly.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::liealg::{AlgebraVector, LieError, StructureConstants};
use crate::matrix::QMatrix;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("matrix is {rows}x{cols}, algebra dimension is {dim}")]
    Shape { rows: usize, cols: usize, dim: usize },
}

/// Leibniz-rule residual of a candidate matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeibnizReport {
    /// Max-norm of `D[Ei,Ej] − [DEi,Ej] − [Ei,DEj]` over all basis pairs.
    pub residual: Rational,
    /// Zero-based pair attaining the residual, if nonzero.
    pub worst_pair: Option<(usize, usize)>,
}

impl LeibnizReport {
    pub fn is_derivation(&self) -> bool {
        self.residual.is_zero()
    }
}

/// A matrix known to be a derivation of a particular algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationMatrix {
    matrix: QMatrix,
}

impl DerivationMatrix {
    /// Certifies `matrix` against `algebra`, returning the failing report otherwise.
    pub fn certify(algebra: &StructureConstants, matrix: QMatrix) -> Result<Result<Self, LeibnizReport>, DerivationError> {
        let report = leibniz_residual(algebra, &matrix)?;
        Ok(if report.is_derivation() {
            Ok(Self { matrix })
        } else {
            Err(report)
        })
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> QMatrix {
        self.matrix
    }
}

/// Canonical basis of `Der(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationSpace {
    dim_algebra: usize,
    basis: Vec<QMatrix>,
    /// For each basis matrix, the row-major position of its leading unit entry.
    pivots: Vec<(usize, usize)>,
}

impl DerivationSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn algebra_dim(&self) -> usize {
        self.dim_algebra
    }

    /// Basis in reduced echelon form over the row-major flattening: each matrix has a unit at its
    /// pivot position and every other basis matrix vanishes there.
    pub fn basis(&self) -> &[QMatrix] {
        &self.basis
    }

    pub fn pivots(&self) -> &[(usize, usize)] {
        &self.pivots
    }

    /// `Σ coeffs[i] · basis[i]`.
    pub fn combine(&self, coeffs: &[Rational]) -> QMatrix {
        assert_eq!(coeffs.len(), self.basis.len());
        let n = self.dim_algebra;
        let mut out = QMatrix::zeros(n, n);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if !c.is_zero() {
                out = &out + &b.scale(c);
            }
        }
        out
    }

    /// Coordinates of `m` in the basis, or `None` if it is not a derivation.
    pub fn coordinates(&self, m: &QMatrix) -> Option<Vec<Rational>> {
        let n = self.dim_algebra;
        if m.rows() != n || m.cols() != n {
            return None;
        }
        let coeffs: Vec<Rational> = self.pivots.iter().map(|&(r, c)| m.get(r, c).clone()).collect();
        (self.combine(&coeffs) == *m).then_some(coeffs)
    }

    pub fn contains(&self, m: &QMatrix) -> bool {
        self.coordinates(m).is_some()
    }
}

/// Row index of the constraint for pair `(i, j)`, `i < j`, and output component `k`.
fn constraint_row(n: usize, i: usize, j: usize, k: usize) -> usize {
    // Pairs enumerated lexicographically.
    let before = i * n - i * (i + 1) / 2;
    (before + (j - i - 1)) * n + k
}

/// Coefficient matrix of the Leibniz system: `n·C(n,2)` rows by `n²` unknowns.
pub fn constraint_matrix(algebra: &StructureConstants) -> QMatrix {
    let n = algebra.dim();
    let pairs = n * (n - 1) / 2;
    let mut m = QMatrix::zeros(pairs * n, n * n);
    let unknown = |r: usize, c: usize| r * n + c;
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let row = constraint_row(n, i, j, k);
                let mut add = |col: usize, v: Rational| {
                    if !v.is_zero() {
                        let cur = m.get(row, col) + &v;
                        m.set(row, col, cur);
                    }
                };
                for l in 0..n {
                    // (D[Ei,Ej])_k = Σ_l D[k][l] c_ij^l
                    add(unknown(k, l), algebra.constant(i, j, l));
                    // ([DEi,Ej])_k = Σ_l D[l][i] c_lj^k
                    add(unknown(l, i), -algebra.constant(l, j, k));
                    // ([Ei,DEj])_k = Σ_l D[l][j] c_il^k
                    add(unknown(l, j), -algebra.constant(i, l, k));
                }
            }
        }
    }
    m
}

pub fn derivation_space(algebra: &StructureConstants) -> DerivationSpace {
    let n = algebra.dim();
    let kernel = constraint_matrix(algebra).nullspace();
    let mut basis = Vec::new();
    let mut pivots = Vec::new();
    if !kernel.is_empty() {
        let stacked = QMatrix::from_rows(kernel);
        let (reduced, pivot_cols) = stacked.rref();
        for (row, &p) in pivot_cols.iter().enumerate() {
            basis.push(QMatrix::from_row_major(n, n, reduced.row(row).to_vec()));
            pivots.push((p / n, p % n));
        }
    }
    DerivationSpace {
        dim_algebra: n,
        basis,
        pivots,
    }
}

fn check_shape(algebra: &StructureConstants, m: &QMatrix) -> Result<(), DerivationError> {
    let dim = algebra.dim();
    if m.rows() != dim || m.cols() != dim {
        return Err(DerivationError::Shape {
            rows: m.rows(),
            cols: m.cols(),
            dim,
        });
    }
    Ok(())
}

/// Evaluates the Leibniz rule on every basis pair directly from the bracket.
pub fn leibniz_residual(algebra: &StructureConstants, m: &QMatrix) -> Result<LeibnizReport, DerivationError> {
    check_shape(algebra, m)?;
    let n = algebra.dim();
    let apply = |v: &AlgebraVector| AlgebraVector(m.mul_vec(&v.0));
    let mut residual = Rational::zero();
    let mut worst_pair = None;
    for i in 0..n {
        for j in i + 1..n {
            let ei = AlgebraVector::basis(n, i);
            let ej = AlgebraVector::basis(n, j);
            let lhs = apply(&algebra.bracket(&ei, &ej)?);
            let r1 = algebra.bracket(&apply(&ei), &ej)?;
            let r2 = algebra.bracket(&ei, &apply(&ej))?;
            for k in 0..n {
                let d = (&lhs.0[k] - &r1.0[k] - &r2.0[k]).abs();
                if d > residual {
                    residual = d;
                    worst_pair = Some((i, j));
                }
            }
        }
    }
    Ok(LeibnizReport { residual, worst_pair })
}

pub fn is_derivation(algebra: &StructureConstants, m: &QMatrix) -> Result<bool, DerivationError> {
    Ok(leibniz_residual(algebra, m)?.is_derivation())
}

/// `−ad(x)`, the derivation whose flow is conjugation by `exp(−t x)` read off on the algebra.
pub fn inner_derivation(algebra: &StructureConstants, x: &AlgebraVector) -> Result<DerivationMatrix, DerivationError> {
    let m = -&algebra.ad(x)?;
    debug_assert!(leibniz_residual(algebra, &m).map(|r| r.is_derivation()).unwrap_or(false) || !algebra.validate().jacobi_ok);
    Ok(DerivationMatrix { matrix: m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn heisenberg() -> StructureConstants {
        StructureConstants::abelian(3)
            .unwrap()
            .with_bracket(1, 2, &[(0, int(1))])
            .unwrap()
    }

    #[test]
    fn constraint_rows_match_direct_residual() {
        let h = heisenberg();
        let cm = constraint_matrix(&h);
        assert_eq!((cm.rows(), cm.cols()), (9, 9));
        // For any matrix the system applied to its flattening equals the direct Leibniz defect.
        let d = QMatrix::from_i64(3, 3, &[1, 2, -1, 0, 3, 5, 4, -2, 1]);
        let defects = cm.mul_vec(d.entries());
        let max = defects.iter().map(Signed::abs).max().unwrap();
        assert_eq!(max, leibniz_residual(&h, &d).unwrap().residual);
    }

    #[test]
    fn abelian_derivations_are_all_matrices() {
        for n in 1..=4 {
            let a = StructureConstants::abelian(n).unwrap();
            let space = derivation_space(&a);
            assert_eq!(space.dim(), n * n);
            assert_eq!(space.basis()[0], QMatrix::unit(n, n, 0, 0));
        }
    }

    #[test]
    fn heisenberg_space_has_dimension_six() {
        let space = derivation_space(&heisenberg());
        assert_eq!(space.dim(), 6);
        // D[0][0] = D[1][1] + D[2][2] and the first column below the diagonal vanishes.
        let d = QMatrix::from_i64(3, 3, &[5, 7, -1, 0, 2, 4, 0, 1, 3]);
        assert!(space.contains(&d));
        let bad = QMatrix::from_i64(3, 3, &[1, 0, 0, 0, 2, 0, 0, 0, 3]);
        assert!(!space.contains(&bad));
        let report = leibniz_residual(&heisenberg(), &bad).unwrap();
        assert_eq!(report.residual, int(4));
        assert_eq!(report.worst_pair, Some((1, 2)));
    }

    #[test]
    fn inner_derivations_are_derivations() {
        let h = heisenberg();
        let x = AlgebraVector(vec![int(1), frac(-2, 3), int(4)]);
        let d = inner_derivation(&h, &x).unwrap();
        assert!(is_derivation(&h, d.matrix()).unwrap());
        assert!(derivation_space(&h).contains(d.matrix()));
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let err = leibniz_residual(&heisenberg(), &QMatrix::zeros(2, 2)).unwrap_err();
        assert_eq!(err, DerivationError::Shape { rows: 2, cols: 2, dim: 3 });
    }

    #[test]
    fn coordinates_round_trip() {
        let space = derivation_space(&heisenberg());
        let coeffs: Vec<Rational> = (0..space.dim()).map(|i| frac(i as i64 - 2, 3)).collect();
        let m = space.combine(&coeffs);
        assert_eq!(space.coordinates(&m), Some(coeffs));
    }
}
