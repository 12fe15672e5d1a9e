//! Sparse Pauli-string operators with complex coefficients.
//!
//! A word is stored in symplectic form: bit `q-1` of `x` and `z` describes
//! qubit `q` (`X = (1,0)`, `Z = (0,1)`, `Y = (1,1)`). Operators keep their
//! terms in a `BTreeMap`, so iteration order is canonical.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 128;
pub const PRUNE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "X",
            Axis::Y => "Y",
            Axis::Z => "Z",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliWord {
    x: u128,
    z: u128,
}

impl PauliWord {
    pub const IDENTITY: PauliWord = PauliWord { x: 0, z: 0 };

    /// Builds a word from 1-based `(qubit, axis)` entries. Repeated qubits are rejected.
    pub fn new(entries: &[(usize, Axis)]) -> Result<Self> {
        let mut w = PauliWord::IDENTITY;
        for &(q, axis) in entries {
            if q == 0 || q > MAX_QUBITS {
                return Err(Error::InvalidInput(format!("qubit index {q} outside [1, {MAX_QUBITS}]")));
            }
            let bit = 1u128 << (q - 1);
            if (w.x | w.z) & bit != 0 {
                return Err(Error::InvalidInput(format!("qubit {q} repeated in word")));
            }
            match axis {
                Axis::X => w.x |= bit,
                Axis::Z => w.z |= bit,
                Axis::Y => {
                    w.x |= bit;
                    w.z |= bit;
                }
            }
        }
        Ok(w)
    }

    pub fn single(q: usize, axis: Axis) -> Self {
        Self::new(&[(q, axis)]).expect("valid single-qubit word")
    }

    /// Product of `Z` on every listed qubit.
    pub fn zs(qubits: &[usize]) -> Self {
        let mut w = PauliWord::IDENTITY;
        for &q in qubits {
            w.z |= 1u128 << (q - 1);
        }
        w
    }

    #[inline]
    pub fn x_mask(&self) -> u128 {
        self.x
    }

    #[inline]
    pub fn z_mask(&self) -> u128 {
        self.z
    }

    #[inline]
    pub fn support(&self) -> u128 {
        self.x | self.z
    }

    pub fn weight(&self) -> usize {
        self.support().count_ones() as usize
    }

    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    /// Highest qubit index touched, 0 for the identity.
    pub fn max_qubit(&self) -> usize {
        128 - self.support().leading_zeros() as usize
    }

    pub fn axis(&self, q: usize) -> Option<Axis> {
        let bit = 1u128 << (q - 1);
        match (self.x & bit != 0, self.z & bit != 0) {
            (false, false) => None,
            (true, false) => Some(Axis::X),
            (false, true) => Some(Axis::Z),
            (true, true) => Some(Axis::Y),
        }
    }

    /// Sorted 1-based `(qubit, axis)` entries.
    pub fn entries(&self) -> Vec<(usize, Axis)> {
        let mut out = Vec::with_capacity(self.weight());
        let mut rest = self.support();
        while rest != 0 {
            let q = rest.trailing_zeros() as usize + 1;
            out.push((q, self.axis(q).expect("in support")));
            rest &= rest - 1;
        }
        out
    }

    pub fn count(&self, axis: Axis) -> usize {
        let m = match axis {
            Axis::X => self.x & !self.z,
            Axis::Y => self.x & self.z,
            Axis::Z => self.z & !self.x,
        };
        m.count_ones() as usize
    }

    pub fn commutes_with(&self, other: &PauliWord) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// `self * other = phase * word`, with `phase` a power of `i`.
    pub fn mul(&self, other: &PauliWord) -> (Complex64, PauliWord) {
        let (xa, ya, za) = (self.x & !self.z, self.x & self.z, self.z & !self.x);
        let (xb, yb, zb) = (other.x & !other.z, other.x & other.z, other.z & !other.x);
        // XY = iZ, YZ = iX, ZX = iY and their reverses with -i.
        let plus = ((xa & yb) | (ya & zb) | (za & xb)).count_ones() as i32;
        let minus = ((ya & xb) | (za & yb) | (xa & zb)).count_ones() as i32;
        let phase = match (plus - minus).rem_euclid(4) {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        (phase, PauliWord { x: self.x ^ other.x, z: self.z ^ other.z })
    }

    /// Eigenvalue of a diagonal word on the basis state where qubit `q` is
    /// `(bits >> (q-1)) & 1`.
    pub fn diagonal_value(&self, bits: u128) -> f64 {
        debug_assert!(self.is_diagonal());
        if (self.z & bits).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support() == 0 {
            return f.write_str("I");
        }
        for (q, a) in self.entries() {
            write!(f, "{a}{q}")?;
        }
        Ok(())
    }
}

/// One term as emitted in JSON: `{"coeff": 2.0, "word": [[1, "Z"], [3, "Z"]]}`.
///
/// Purely imaginary coefficients set `imag` and leave `coeff` as the real part.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub coeff: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub imag: f64,
    pub word: Vec<(usize, Axis)>,
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

#[derive(Clone, Debug, PartialEq)]
pub struct PauliOperator {
    n_qubits: usize,
    terms: BTreeMap<PauliWord, Complex64>,
}

impl PauliOperator {
    pub fn zero(n_qubits: usize) -> Self {
        assert!(n_qubits <= MAX_QUBITS, "at most {MAX_QUBITS} qubits supported");
        Self { n_qubits, terms: BTreeMap::new() }
    }

    pub fn from_terms<I>(n_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliWord, Complex64)>,
    {
        let mut op = Self::zero(n_qubits);
        for (w, c) in terms {
            if w.max_qubit() > n_qubits {
                return Err(Error::InvalidInput(format!(
                    "word {w} exceeds {n_qubits} qubits"
                )));
            }
            op.add_term(w, c);
        }
        Ok(op)
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliWord, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &PauliWord) -> Complex64 {
        self.terms.get(w).copied().unwrap_or_default()
    }

    pub fn add_term(&mut self, word: PauliWord, coeff: Complex64) {
        let entry = self.terms.entry(word).or_default();
        *entry += coeff;
        if entry.norm() < PRUNE_TOLERANCE {
            self.terms.remove(&word);
        }
    }

    pub fn add_real(&mut self, word: PauliWord, coeff: f64) {
        self.add_term(word, Complex64::new(coeff, 0.0));
    }

    pub fn add_scaled(&mut self, other: &PauliOperator, scale: Complex64) {
        assert_eq!(self.n_qubits, other.n_qubits, "operator sizes differ");
        for (w, c) in &other.terms {
            self.add_term(*w, c * scale);
        }
    }

    pub fn scaled(&self, scale: Complex64) -> Self {
        let mut out = Self::zero(self.n_qubits);
        out.add_scaled(self, scale);
        out
    }

    pub fn sum(&self, other: &PauliOperator) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, Complex64::new(1.0, 0.0));
        out
    }

    pub fn difference(&self, other: &PauliOperator) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, Complex64::new(-1.0, 0.0));
        out
    }

    pub fn product(&self, other: &PauliOperator) -> Self {
        assert_eq!(self.n_qubits, other.n_qubits, "operator sizes differ");
        let mut out = Self::zero(self.n_qubits);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let (phase, w) = wa.mul(wb);
                out.add_term(w, phase * ca * cb);
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.keys().all(PauliWord::is_diagonal)
    }

    pub fn is_hermitian(&self) -> bool {
        self.terms.values().all(|c| c.im.abs() < PRUNE_TOLERANCE)
    }

    /// Diagonal matrix element on the basis state encoded by `bits` (bit `q-1` for qubit `q`).
    /// Off-diagonal words contribute nothing.
    pub fn diagonal_element(&self, bits: u128) -> Complex64 {
        self.terms
            .iter()
            .filter(|(w, _)| w.is_diagonal())
            .map(|(w, c)| c * w.diagonal_value(bits))
            .sum()
    }

    pub fn to_terms(&self) -> Vec<PauliTerm> {
        self.terms
            .iter()
            .map(|(w, c)| PauliTerm { coeff: c.re, imag: c.im, word: w.entries() })
            .collect()
    }
}

/// Exact commutator `[a, b] = ab - ba`; only anticommuting word pairs survive, with `2ab`.
pub fn commutator(a: &PauliOperator, b: &PauliOperator) -> PauliOperator {
    assert_eq!(a.n_qubits, b.n_qubits, "operator sizes differ");
    let mut out = PauliOperator::zero(a.n_qubits);
    for (wa, ca) in &a.terms {
        for (wb, cb) in &b.terms {
            if !wa.commutes_with(wb) {
                let (phase, w) = wa.mul(wb);
                out.add_term(w, phase * ca * cb * 2.0);
            }
        }
    }
    out
}

/// Normalized Hilbert-Schmidt inner product `tr(a^dagger b) / 2^N`.
pub fn hs_inner(a: &PauliOperator, b: &PauliOperator) -> Complex64 {
    assert_eq!(a.n_qubits, b.n_qubits, "operator sizes differ");
    let (small, large, flip) = if a.len() <= b.len() { (a, b, false) } else { (b, a, true) };
    small
        .terms
        .iter()
        .filter_map(|(w, cs)| large.terms.get(w).map(|cl| if flip { cl.conj() * cs } else { cs.conj() * cl }))
        .sum()
}

/// `tr(a^dagger a) / 2^N`.
pub fn hs_norm_sq(a: &PauliOperator) -> f64 {
    a.terms.values().map(|c| c.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn op(n: usize, terms: &[(&[(usize, Axis)], Complex64)]) -> PauliOperator {
        PauliOperator::from_terms(n, terms.iter().map(|(e, k)| (PauliWord::new(e).unwrap(), *k))).unwrap()
    }

    #[test]
    fn single_qubit_products() {
        let x = PauliWord::single(1, Axis::X);
        let y = PauliWord::single(1, Axis::Y);
        let z = PauliWord::single(1, Axis::Z);
        assert_eq!(x.mul(&y), (c(0.0, 1.0), z));
        assert_eq!(y.mul(&x), (c(0.0, -1.0), z));
        assert_eq!(y.mul(&z), (c(0.0, 1.0), x));
        assert_eq!(z.mul(&x), (c(0.0, 1.0), y));
        assert_eq!(x.mul(&z), (c(0.0, -1.0), y));
        assert_eq!(x.mul(&x), (c(1.0, 0.0), PauliWord::IDENTITY));
    }

    #[test]
    fn commutator_examples() {
        let z1 = op(2, &[(&[(1, Axis::Z)], c(1.0, 0.0))]);
        let z2 = op(2, &[(&[(2, Axis::Z)], c(1.0, 0.0))]);
        assert!(commutator(&z1, &z2).is_empty());

        let x1 = op(1, &[(&[(1, Axis::X)], c(1.0, 0.0))]);
        let z1 = op(1, &[(&[(1, Axis::Z)], c(1.0, 0.0))]);
        let r = commutator(&x1, &z1);
        assert_eq!(r.len(), 1);
        assert_eq!(r.coefficient(&PauliWord::single(1, Axis::Y)), c(0.0, -2.0));
    }

    #[test]
    fn inner_product_examples() {
        let z1 = op(2, &[(&[(1, Axis::Z)], c(1.0, 0.0))]);
        let z2 = op(2, &[(&[(2, Axis::Z)], c(1.0, 0.0))]);
        assert_eq!(hs_inner(&z1, &z1).re, 1.0);
        assert_eq!(hs_inner(&z1, &z2).re, 0.0);
        let a = op(2, &[(&[(1, Axis::Z)], c(2.0, 0.0)), (&[(2, Axis::X)], c(3.0, 0.0))]);
        assert_eq!(hs_inner(&a, &a).re, 13.0);
        assert_eq!(hs_norm_sq(&a), 13.0);
    }

    #[test]
    fn adding_negation_cancels_exactly() {
        let a = op(3, &[(&[(1, Axis::Y), (3, Axis::Z)], c(4.0, 0.0)), (&[(2, Axis::X)], c(0.0, 1.5))]);
        assert!(a.difference(&a).is_empty());
    }

    #[test]
    fn word_validation() {
        assert!(PauliWord::new(&[(0, Axis::X)]).is_err());
        assert!(PauliWord::new(&[(2, Axis::X), (2, Axis::Z)]).is_err());
        let w = PauliWord::new(&[(3, Axis::Z), (1, Axis::Y)]).unwrap();
        assert_eq!(w.entries(), vec![(1, Axis::Y), (3, Axis::Z)]);
        assert_eq!(w.to_string(), "Y1Z3");
        assert!(PauliOperator::from_terms(2, [(w, c(1.0, 0.0))]).is_err());
    }

    #[test]
    fn json_term_shape() {
        let a = op(3, &[(&[(1, Axis::Z), (3, Axis::Z)], c(2.0, 0.0))]);
        let json = serde_json::to_string(&a.to_terms()).unwrap();
        assert_eq!(json, r#"[{"coeff":2.0,"word":[[1,"Z"],[3,"Z"]]}]"#);
    }

    fn arb_word(n: usize) -> impl Strategy<Value = PauliWord> {
        prop::collection::vec(0u8..4, n).prop_map(|axes| {
            let entries: Vec<(usize, Axis)> = axes
                .iter()
                .enumerate()
                .filter_map(|(q, a)| match a {
                    1 => Some((q + 1, Axis::X)),
                    2 => Some((q + 1, Axis::Y)),
                    3 => Some((q + 1, Axis::Z)),
                    _ => None,
                })
                .collect();
            PauliWord::new(&entries).unwrap()
        })
    }

    fn arb_op(n: usize) -> impl Strategy<Value = PauliOperator> {
        prop::collection::vec((arb_word(n), -3i32..=3, -3i32..=3), 0..6).prop_map(move |ts| {
            PauliOperator::from_terms(n, ts.into_iter().map(|(w, re, im)| (w, c(re as f64, im as f64)))).unwrap()
        })
    }

    proptest! {
        #[test]
        fn commutator_is_antisymmetric(a in arb_op(4), b in arb_op(4)) {
            let ab = commutator(&a, &b);
            let ba = commutator(&b, &a);
            prop_assert!(ab.sum(&ba).is_empty());
        }

        #[test]
        fn commutator_matches_products(a in arb_op(3), b in arb_op(3)) {
            let direct = a.product(&b).difference(&b.product(&a));
            prop_assert!(commutator(&a, &b).difference(&direct).is_empty());
        }

        #[test]
        fn commutator_is_bilinear(a in arb_op(3), b in arb_op(3), d in arb_op(3), k in -3i32..=3) {
            let k = c(k as f64, 0.5);
            let lhs = commutator(&a.sum(&b.scaled(k)), &d);
            let rhs = commutator(&a, &d).sum(&commutator(&b, &d).scaled(k));
            prop_assert!(lhs.difference(&rhs).iter().all(|(_, v)| v.norm() < 1e-9));
        }

        #[test]
        fn inner_product_is_positive_definite(a in arb_op(4)) {
            let n = hs_inner(&a, &a);
            prop_assert!(n.im.abs() < 1e-12);
            prop_assert_eq!(n.re > 0.0, !a.is_empty());
        }
    }
}
