use std::collections::BTreeMap;

use lieflow::matrix::QMatrix;
use lieflow::poly::QPoly;
use lieflow::rational::{frac, int, Rational};
use lieflow::spectral::{char_poly, spectrum, spectrum_numeric, Locus};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_matrix(n: usize) -> impl Strategy<Value = QMatrix> {
    prop::collection::vec((-5i64..=5, 1i64..=3), n * n)
        .prop_map(move |v| QMatrix::from_row_major(n, n, v.into_iter().map(|(p, q)| frac(p, q)).collect()))
}

/// `det(tI − m)` by cofactor expansion along the first row.
fn cofactor_char_poly(m: &QMatrix) -> QPoly {
    let n = m.rows();
    let entry = |r: usize, c: usize| {
        let base = QPoly::constant(-m.get(r, c).clone());
        if r == c {
            &base + &QPoly::from_i64(&[0, 1])
        } else {
            base
        }
    };
    let cells: Vec<Vec<QPoly>> = (0..n).map(|r| (0..n).map(|c| entry(r, c)).collect()).collect();
    fn det(cells: &[Vec<QPoly>]) -> QPoly {
        if cells.len() == 1 {
            return cells[0][0].clone();
        }
        let mut total = QPoly::zero();
        for j in 0..cells.len() {
            let minor: Vec<Vec<QPoly>> = cells[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| p.clone()).collect())
                .collect();
            let term = &cells[0][j] * &det(&minor);
            total = if j % 2 == 0 { &total + &term } else { &total - &term };
        }
        total
    }
    det(&cells)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn char_poly_matches_cofactor_expansion(m in small_matrix(4)) {
        prop_assert_eq!(char_poly(&m).unwrap(), cofactor_char_poly(&m));
    }

    #[test]
    fn cayley_hamilton(m in small_matrix(4)) {
        prop_assert!(char_poly(&m).unwrap().eval_matrix(&m).is_zero());
    }

    #[test]
    fn spectrum_is_similarity_invariant(m in small_matrix(3), l in prop::collection::vec(-2i64..=2, 3)) {
        // Unit lower-triangular change of basis.
        let p = QMatrix::from_rows(vec![
            vec![int(1), int(0), int(0)],
            vec![int(l[0]), int(1), int(0)],
            vec![int(l[1]), int(l[2]), int(1)],
        ]);
        let similar = &(&p * &m) * &p.inverse().unwrap();
        let a = spectrum(&m, 1e-9).unwrap();
        let b = spectrum(&similar, 1e-9).unwrap();
        prop_assert_eq!(a.char_poly, b.char_poly);
        prop_assert_eq!(a.classes.len(), b.classes.len());
        for (x, y) in a.classes.iter().zip(&b.classes) {
            prop_assert_eq!(x.algebraic, y.algebraic);
            prop_assert_eq!(x.geometric, y.geometric);
            prop_assert!((x.value.to_complex() - y.value.to_complex()).norm() < 1e-9);
        }
    }
}

#[test]
fn spectrum_examples() {
    // −ad(Y) on sl(2,R) in the basis (Y, H, Z).
    let d = QMatrix::from_i64(3, 3, &[0, -2, 0, 0, 0, 1, 0, -4, 0]);
    assert_eq!(char_poly(&d).unwrap(), QPoly::from_i64(&[0, 4, 0, 1]));
    let s = spectrum(&d, 1e-9).unwrap();
    assert_eq!(s.classes.len(), 3);
    assert!(s.classes.iter().all(|c| c.is_semisimple() && c.algebraic == 1));
    let freqs: Vec<f64> = s.classes.iter().filter_map(|c| c.frequency()).map(|f| f.value).collect();
    assert_eq!(freqs, vec![2.0]);

    let aff = spectrum(&QMatrix::from_i64(2, 2, &[0, 0, 1, 0]), 1e-9).unwrap();
    assert_eq!((aff.classes.len(), aff.classes[0].algebraic, aff.classes[0].geometric), (1, 2, 1));
    assert_eq!(aff.classes[0].locus, Locus::Zero);

    let id = spectrum(&QMatrix::identity(4), 1e-9).unwrap();
    assert_eq!((id.classes[0].algebraic, id.classes[0].geometric), (4, 4));
    assert_eq!(char_poly(&QMatrix::zeros(3, 3)).unwrap(), QPoly::from_i64(&[0, 0, 0, 1]));
}

/// A real Jordan matrix of size 6 with the expected semisimplicity of each eigenvalue.
struct Plant {
    jordan: QMatrix,
    expected: Vec<(Complex64, bool)>,
}

fn plant(rng: &mut ChaCha8Rng) -> Plant {
    let mut blocks: Vec<(QMatrix, Vec<Complex64>, bool)> = Vec::new();
    let mut remaining = 6;
    while remaining > 0 {
        if remaining >= 2 && rng.gen_bool(0.4) {
            let (a, b) = (rng.gen_range(-1..=1), rng.gen_range(1..=3));
            let size = if remaining >= 4 && rng.gen_bool(0.3) { 2 } else { 1 };
            let dim = 2 * size;
            let mut m = QMatrix::zeros(dim, dim);
            for k in 0..size {
                let o = 2 * k;
                m.set(o, o, int(a));
                m.set(o + 1, o + 1, int(a));
                m.set(o, o + 1, int(-b));
                m.set(o + 1, o, int(b));
                if k + 1 < size {
                    m.set(o, o + 2, int(1));
                    m.set(o + 1, o + 3, int(1));
                }
            }
            let z = Complex64::new(a as f64, b as f64);
            blocks.push((m, vec![z, z.conj()], size == 1));
            remaining -= dim;
        } else {
            let lambda = rng.gen_range(-3..=3);
            let size = rng.gen_range(1..=remaining.min(3));
            let mut m = QMatrix::zeros(size, size);
            for k in 0..size {
                m.set(k, k, int(lambda));
                if k + 1 < size {
                    m.set(k, k + 1, int(1));
                }
            }
            blocks.push((m, vec![Complex64::new(lambda as f64, 0.0)], size == 1));
            remaining -= size;
        }
    }
    let mut jordan = QMatrix::zeros(6, 6);
    let mut offset = 0;
    let mut semisimple: BTreeMap<(i64, i64), bool> = BTreeMap::new();
    for (m, values, ss) in &blocks {
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                jordan.set(offset + r, offset + c, m.get(r, c).clone());
            }
        }
        offset += m.rows();
        for z in values {
            let key = (z.re as i64, z.im as i64);
            let entry = semisimple.entry(key).or_insert(true);
            *entry &= *ss;
        }
    }
    let expected = semisimple.into_iter().map(|((re, im), ss)| (Complex64::new(re as f64, im as f64), ss)).collect();
    Plant { jordan, expected }
}

fn conjugator(rng: &mut ChaCha8Rng) -> QMatrix {
    let lower = QMatrix::from_fn(6, 6, |r, c| match r.cmp(&c) {
        std::cmp::Ordering::Equal => int(1),
        std::cmp::Ordering::Greater => int(rng.gen_range(-1..=1)),
        std::cmp::Ordering::Less => int(0),
    });
    let upper = QMatrix::from_fn(6, 6, |r, c| match r.cmp(&c) {
        std::cmp::Ordering::Equal => int(1),
        std::cmp::Ordering::Less => int(rng.gen_range(-1..=1)),
        std::cmp::Ordering::Greater => int(0),
    });
    &lower * &upper
}

fn semisimplicity_errors(classes: &[(Complex64, bool)], expected: &[(Complex64, bool)]) -> usize {
    let mut errors = 0;
    if classes.len() != expected.len() {
        errors += classes.len().abs_diff(expected.len());
    }
    for (z, ss) in expected {
        match classes.iter().find(|(w, _)| (w - z).norm() < 1e-3) {
            Some((_, got)) if got == ss => {}
            _ => errors += 1,
        }
    }
    errors
}

#[test]
fn planted_jordan_structures_are_recovered() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut exact_errors, mut numeric_errors) = (0, 0);
    for _ in 0..100 {
        let Plant { jordan, expected } = plant(&mut rng);
        let p = conjugator(&mut rng);
        let d = &(&p * &jordan) * &p.inverse().unwrap();

        let exact = spectrum(&d, 1e-9).unwrap();
        let got: Vec<(Complex64, bool)> =
            exact.classes.iter().map(|c| (c.value.to_complex(), c.is_semisimple())).collect();
        exact_errors += semisimplicity_errors(&got, &expected);

        let numeric = spectrum_numeric(&d.to_f64(), 1e-9).unwrap();
        let got: Vec<(Complex64, bool)> =
            numeric.classes.iter().map(|c| (c.value.to_complex(), c.is_semisimple())).collect();
        numeric_errors += semisimplicity_errors(&got, &expected);
    }
    assert_eq!(exact_errors, 0);
    assert_eq!(numeric_errors, 0);
}

#[test]
fn exact_radicals_are_kept_symbolic() {
    // t^2 - 2 and t^2 + 3
    let m = QMatrix::from_i64(4, 4, &[0, 2, 0, 0, 1, 0, 0, 0, 0, 0, 0, -3, 0, 0, 1, 0]);
    let s = spectrum(&m, 1e-9).unwrap();
    let shown: Vec<String> = s.classes.iter().map(|c| c.value.to_string()).collect();
    assert!(shown.contains(&"sqrt(2)".to_string()), "{shown:?}");
    assert!(shown.contains(&"-sqrt(2)".to_string()), "{shown:?}");
    let squares: Vec<Rational> = s.classes.iter().filter_map(|c| c.frequency()).filter_map(|f| f.exact_square).collect();
    assert_eq!(squares, vec![int(3)]);
}
