//! First-order counterdiabatic term and its coefficient `alpha_1 = -Gamma_1 / Gamma_2`.
//!
//! With `H_ad(l) = (1-l) H_i + l H_f` and `H_i = sum_j h_j X_j`, the first
//! nested commutator `O_1 = [H_ad, dH_ad/dl] = [H_i, H_f]` does not depend on
//! `l`. Every coupling `J_A Z_A` of `H_f` contributes one word per site
//! `p in A`, namely `-2i J_A h_p Y_p Z_{A\p}`. The Hermitian generator
//! `G = i O_1` therefore has real coefficients `4 h_p` (pairs) and `8 h_p`
//! (quads), and `exp(theta O_1) = exp(-i theta G)`.
//!
//! All `Gamma` values use the normalized trace `tr(.)/2^N`. The closed forms
//! below are checked against [`oracle_gammas`], which builds `O_1` and `O_2`
//! with explicit Pauli algebra.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{build_hamiltonian, build_interaction_sets, InteractionSets};
use crate::pauli::{commutator, hs_norm_sq, Axis, PauliOperator, PauliWord, MAX_QUBITS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    /// `l(t) = sin^2(pi t / 2T)`
    SinSquared,
    /// `l(t) = t / T`
    Linear,
}

impl std::str::FromStr for ScheduleKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sin_squared" | "sin2" | "sin-squared" => Ok(ScheduleKind::SinSquared),
            "linear" => Ok(ScheduleKind::Linear),
            other => Err(Error::InvalidInput(format!("unknown schedule {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub kind: ScheduleKind,
    pub total_time: f64,
}

impl Default for Schedule {
    fn default() -> Self {
        Self { kind: ScheduleKind::SinSquared, total_time: 1.0 }
    }
}

impl Schedule {
    pub fn new(kind: ScheduleKind, total_time: f64) -> Result<Self> {
        if !(total_time > 0.0 && total_time.is_finite()) {
            return Err(Error::InvalidInput(format!("total time {total_time} must be positive")));
        }
        Ok(Self { kind, total_time })
    }

    /// Returns `(lambda, d lambda / dt)` at time `t`.
    pub fn eval(&self, t: f64) -> Result<(f64, f64)> {
        let big_t = self.total_time;
        if !(0.0..=big_t).contains(&t) {
            return Err(Error::InvalidInput(format!("t = {t} outside [0, {big_t}]")));
        }
        Ok(match self.kind {
            ScheduleKind::SinSquared => {
                let s = (PI * t / (2.0 * big_t)).sin();
                (s * s, PI / (2.0 * big_t) * (PI * t / big_t).sin())
            }
            ScheduleKind::Linear => (t / big_t, 1.0 / big_t),
        })
    }
}

/// Transverse (`h_x`) and longitudinal bias (`h_b`) fields, indexed by qubit - 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldConfig {
    pub h_x: Vec<f64>,
    pub h_b: Vec<f64>,
}

impl FieldConfig {
    /// `h_x = -1` everywhere, so the driver ground state is `|+>^N`.
    pub fn uniform(n: usize) -> Self {
        Self { h_x: vec![-1.0; n], h_b: vec![0.0; n] }
    }

    pub fn with_transverse(h_x: Vec<f64>) -> Self {
        let n = h_x.len();
        Self { h_x, h_b: vec![0.0; n] }
    }

    pub fn n(&self) -> usize {
        self.h_x.len()
    }

    /// The LABS problem Hamiltonian has no one-body `Z` terms, so bias fields must vanish.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.h_x.len() != n || self.h_b.len() != n {
            return Err(Error::LengthMismatch(self.h_x.len(), n));
        }
        if self.h_x.iter().any(|h| !h.is_finite()) {
            return Err(Error::InvalidInput("non-finite transverse field".into()));
        }
        if self.h_b.iter().any(|&b| b != 0.0) {
            return Err(Error::InvalidInput("longitudinal bias fields must be zero".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CdCoefficient {
    pub lambda: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub alpha1: f64,
}

fn check(n: usize, fields: &FieldConfig) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("N = {n}: first-order term needs N >= 3")));
    }
    if n > MAX_QUBITS {
        return Err(Error::AboveCap { n, cap: MAX_QUBITS });
    }
    fields.validate(n)
}

pub fn driver_hamiltonian(fields: &FieldConfig) -> PauliOperator {
    let mut op = PauliOperator::zero(fields.n());
    for (j, &h) in fields.h_x.iter().enumerate() {
        op.add_real(PauliWord::single(j + 1, Axis::X), h);
    }
    op
}

pub fn adiabatic_hamiltonian(n: usize, fields: &FieldConfig, lambda: f64) -> Result<PauliOperator> {
    let h_f = build_hamiltonian(n)?.operator;
    let mut op = driver_hamiltonian(fields).scaled(Complex64::new(1.0 - lambda, 0.0));
    op.add_scaled(&h_f, Complex64::new(lambda, 0.0));
    Ok(op)
}

/// Words of the generator `G = i O_1` with their real coefficients, in block
/// order: every pair `(i, j)` as `Y_i Z_j`, `Z_i Y_j`, then every quad with the
/// `Y` on each position in turn.
pub fn generator_words(sets: &InteractionSets, fields: &FieldConfig) -> Vec<(PauliWord, f64)> {
    let mut out = Vec::with_capacity(2 * sets.pairs.len() + 4 * sets.quads.len());
    for (weight, idx) in sets.tuples() {
        for &p in idx {
            let entries: Vec<(usize, Axis)> = idx
                .iter()
                .map(|&q| (q, if q == p { Axis::Y } else { Axis::Z }))
                .collect();
            let word = PauliWord::new(&entries).expect("distinct indices");
            out.push((word, 2.0 * weight * fields.h_x[p - 1]));
        }
    }
    out
}

/// `O_1 = [H_i, H_f]` in closed form (anti-Hermitian, coefficients `-4i h` and `-8i h`).
pub fn build_o1(n: usize, fields: &FieldConfig) -> Result<PauliOperator> {
    check(n, fields)?;
    let sets = build_interaction_sets(n)?;
    PauliOperator::from_terms(
        n,
        generator_words(&sets, fields)
            .into_iter()
            .map(|(w, g)| (w, Complex64::new(0.0, -g))),
    )
}

/// Hermitian generator `G = i O_1` with real coefficients `4 h` and `8 h`.
pub fn cd_generator(n: usize, fields: &FieldConfig) -> Result<PauliOperator> {
    Ok(build_o1(n, fields)?.scaled(Complex64::new(0.0, 1.0)))
}

/// Per-coupling auxiliary sums used by the closed forms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TupleSums {
    /// `sum_p h_p^2`
    pub s_x: f64,
    /// `sum_p (h_p b_p)^2`
    pub s_bx: f64,
    /// `sum_{p<q} h_p^2 h_q^2`
    pub p_x: f64,
}

pub fn tuple_sums(idx: &[usize], fields: &FieldConfig) -> TupleSums {
    let h2: Vec<f64> = idx.iter().map(|&p| fields.h_x[p - 1].powi(2)).collect();
    let s_x = h2.iter().sum();
    let s_bx = idx.iter().map(|&p| (fields.h_x[p - 1] * fields.h_b[p - 1]).powi(2)).sum();
    let mut p_x = 0.0;
    for a in 0..h2.len() {
        for b in a + 1..h2.len() {
            p_x += h2[a] * h2[b];
        }
    }
    TupleSums { s_x, s_bx, p_x }
}

/// `lambda`-independent pieces of `Gamma_1` and `Gamma_2`.
///
/// `O_2 = [H_ad, O_1] = -i((1-l)[H_i, G] + l[H_f, G])`. The two commutators
/// share no words (`[H_i, G]` yields all-`Z` words and `YY`-words, `[H_f, G]`
/// yields words with exactly one `X`), so
/// `Gamma_2(l) = (1-l)^2 driver_part + l^2 problem_part`.
#[derive(Clone, Debug, PartialEq)]
pub struct CdClosedForm {
    pub n: usize,
    pub gamma1: f64,
    pub driver_part: f64,
    pub problem_part: f64,
}

impl CdClosedForm {
    pub fn new(n: usize, fields: &FieldConfig) -> Result<Self> {
        check(n, fields)?;
        let sets = build_interaction_sets(n)?;

        // Gamma_1 = sum_A c_A S_x(A), with c = 4 J_A^2 (16 for pairs, 64 for quads).
        // [H_i, G] per coupling: Z_A with weight 4 J_A S_x(A), and Y_p Y_q Z_rest
        // with weight 8 J_A h_p h_q, so each coupling adds 16 J_A^2 (S_x^2 + 4 P_x).
        let mut gamma1 = 0.0;
        let mut driver_part = 0.0;
        for (j, idx) in sets.tuples() {
            let sums = tuple_sums(idx, fields);
            gamma1 += 4.0 * j * j * sums.s_x;
            driver_part += 16.0 * j * j * (sums.s_x * sums.s_x + 4.0 * sums.p_x + sums.s_bx);
        }

        Ok(Self { n, gamma1, driver_part, problem_part: problem_part(&sets, fields) })
    }

    pub fn gamma2(&self, lambda: f64) -> f64 {
        (1.0 - lambda).powi(2) * self.driver_part + lambda * lambda * self.problem_part
    }

    pub fn alpha1(&self, lambda: f64) -> Result<CdCoefficient> {
        let gamma2 = self.gamma2(lambda);
        if gamma2 == 0.0 || !gamma2.is_finite() {
            return Err(Error::SingularCoefficient(lambda));
        }
        Ok(CdCoefficient { lambda, gamma1: self.gamma1, gamma2, alpha1: -self.gamma1 / gamma2 })
    }
}

/// `||[H_f, G]||^2` by overlap counting.
///
/// For couplings `A`, `B` that both contain site `p`,
/// `[J_B Z_B, 2 J_A h_p Y_p Z_{A\p}] = -4i J_A J_B h_p X_p Z_{A xor B}`.
/// Different overlapping couplings can land on the same word `X_p Z_S`
/// (`A = B` always gives `X_p`; LABS couplings also produce many coincident
/// symmetric differences), so the amplitudes are accumulated per
/// `(p, A xor B)` before squaring. Counting overlaps pairwise without this
/// grouping does not reproduce the trace.
fn problem_part(sets: &InteractionSets, fields: &FieldConfig) -> f64 {
    let mut incident: Vec<Vec<(u128, f64)>> = vec![Vec::new(); sets.n];
    for (j, idx) in sets.tuples() {
        let mask = idx.iter().fold(0u128, |m, &q| m | (1u128 << (q - 1)));
        for &p in idx {
            incident[p - 1].push((mask, j));
        }
    }
    let mut total = 0.0;
    let mut amplitude: HashMap<u128, f64> = HashMap::new();
    for (site, list) in incident.iter().enumerate() {
        let h2 = fields.h_x[site].powi(2);
        if h2 == 0.0 || list.is_empty() {
            continue;
        }
        amplitude.clear();
        for (a, &(ma, ja)) in list.iter().enumerate() {
            *amplitude.entry(0).or_default() += ja * ja;
            for &(mb, jb) in &list[a + 1..] {
                *amplitude.entry(ma ^ mb).or_default() += 2.0 * ja * jb;
            }
        }
        let mut words: Vec<(u128, f64)> = amplitude.iter().map(|(&k, &v)| (k, v)).collect();
        words.sort_unstable_by_key(|&(k, _)| k);
        total += 16.0 * h2 * words.iter().map(|(_, w)| w * w).sum::<f64>();
    }
    total
}

pub fn gamma1_closed(n: usize, fields: &FieldConfig) -> Result<f64> {
    Ok(CdClosedForm::new(n, fields)?.gamma1)
}

pub fn gamma2_closed(n: usize, fields: &FieldConfig, lambda: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidInput(format!("lambda = {lambda} outside [0, 1]")));
    }
    Ok(CdClosedForm::new(n, fields)?.gamma2(lambda))
}

pub fn alpha1(n: usize, fields: &FieldConfig, lambda: f64) -> Result<CdCoefficient> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidInput(format!("lambda = {lambda} outside [0, 1]")));
    }
    CdClosedForm::new(n, fields)?.alpha1(lambda)
}

/// Nested commutators built with explicit Pauli algebra.
#[derive(Clone, Debug)]
pub struct OracleGammas {
    pub o1: PauliOperator,
    pub o2: PauliOperator,
    pub gamma1: f64,
    pub gamma2: f64,
}

/// `O_1 = [H_ad, H_f - H_i]`, `O_2 = [H_ad, O_1]` and their squared norms.
///
/// Cost grows like the product of the term counts; intended for small N.
pub fn oracle_gammas(n: usize, fields: &FieldConfig, lambda: f64) -> Result<OracleGammas> {
    check(n, fields)?;
    let h_ad = adiabatic_hamiltonian(n, fields, lambda)?;
    let d_lambda = build_hamiltonian(n)?.operator.difference(&driver_hamiltonian(fields));
    let o1 = commutator(&h_ad, &d_lambda);
    let o2 = commutator(&h_ad, &o1);
    Ok(OracleGammas { gamma1: hs_norm_sq(&o1), gamma2: hs_norm_sq(&o2), o1, o2 })
}
