//! Dense-matrix reference for Pauli rotations, shared by test targets.

use labs_core::pauli::{Axis, PauliWord};
use num_complex::Complex64;

pub type Matrix = Vec<Vec<Complex64>>;

pub fn pauli_matrix(axis: Option<Axis>) -> Matrix {
    let (z, o, i) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0));
    match axis {
        None => vec![vec![o, z], vec![z, o]],
        Some(Axis::X) => vec![vec![z, o], vec![o, z]],
        Some(Axis::Y) => vec![vec![z, -i], vec![i, z]],
        Some(Axis::Z) => vec![vec![o, z], vec![z, -o]],
    }
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![Complex64::default(); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![Complex64::default(); n]; n];
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// Dense `exp(-i x P)` by Taylor series; qubit 1 is the leftmost Kronecker factor.
pub fn dense_rotation(word: &PauliWord, n: usize, x: f64) -> Matrix {
    let mut p = pauli_matrix(word.axis(1));
    for q in 2..=n {
        p = kron(&p, &pauli_matrix(word.axis(q)));
    }
    let dim = p.len();
    let gen: Matrix = p.iter().map(|r| r.iter().map(|v| v * Complex64::new(0.0, -x)).collect()).collect();
    let mut term: Matrix = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::default() }).collect())
        .collect();
    let mut sum = term.clone();
    for k in 1..60 {
        term = matmul(&term, &gen);
        for row in term.iter_mut() {
            for v in row.iter_mut() {
                *v /= k as f64;
            }
        }
        for (srow, trow) in sum.iter_mut().zip(&term) {
            for (s, t) in srow.iter_mut().zip(trow) {
                *s += t;
            }
        }
    }
    sum
}

pub fn all_words(n: usize) -> Vec<PauliWord> {
    let mut out = Vec::new();
    for code in 1..4usize.pow(n as u32) {
        let mut entries = Vec::new();
        let mut c = code;
        for q in 1..=n {
            match c % 4 {
                1 => entries.push((q, Axis::X)),
                2 => entries.push((q, Axis::Y)),
                3 => entries.push((q, Axis::Z)),
                _ => {}
            }
            c /= 4;
        }
        out.push(PauliWord::new(&entries).unwrap());
    }
    out
}
