use serde::{Deserialize, Serialize};

use super::statevector::StateVector;
use crate::cd::{generator_words, CdClosedForm, FieldConfig, Schedule};
use crate::error::{Error, Result};
use crate::hamiltonian::build_interaction_sets;
use crate::pauli::{Axis, PauliWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKind {
    TwoBody,
    FourBody,
}

/// One coupling's worth of rotations: a `Y` on each index in turn, `Z` on the rest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationBlock {
    pub kind: BlockKind,
    pub qubits: Vec<usize>,
    pub fields: Vec<f64>,
    /// Step angle `theta = dt * alpha_1 * dlambda/dt`.
    pub theta: f64,
}

impl RotationBlock {
    /// `(word, x)` pairs for `R_P(x) = exp(-i x P)`, with `x = 4 theta h` for
    /// two-body and `8 theta h` for four-body blocks.
    pub fn rotations(&self) -> impl Iterator<Item = (PauliWord, f64)> + '_ {
        let scale = match self.kind {
            BlockKind::TwoBody => 4.0,
            BlockKind::FourBody => 8.0,
        };
        self.qubits.iter().zip(&self.fields).map(move |(&p, &h)| {
            let entries: Vec<(usize, Axis)> = self
                .qubits
                .iter()
                .map(|&q| (q, if q == p { Axis::Y } else { Axis::Z }))
                .collect();
            (PauliWord::new(&entries).expect("distinct qubits"), scale * self.theta * h)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrotterStep {
    pub k: usize,
    pub time: f64,
    pub lambda: f64,
    pub lambda_dot: f64,
    pub alpha1: f64,
    pub theta: f64,
    pub blocks: Vec<RotationBlock>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitPlan {
    pub n: usize,
    pub n_trot: usize,
    pub schedule: Schedule,
    pub steps: Vec<TrotterStep>,
}

impl CircuitPlan {
    pub fn empty(n: usize) -> Self {
        Self { n, n_trot: 0, schedule: Schedule::default(), steps: Vec::new() }
    }

    pub fn block_count(&self) -> usize {
        self.steps.iter().map(|s| s.blocks.len()).sum()
    }

    pub fn rotation_count(&self) -> usize {
        self.steps.iter().flat_map(|s| &s.blocks).map(|b| b.qubits.len()).sum()
    }
}

/// Trotterized `prod_k exp(theta_k O_1)`, with all two-body blocks before the
/// four-body blocks in every step and `theta_k` evaluated at `t = k dt`.
pub fn build_circuit(
    n: usize,
    schedule: &Schedule,
    n_trot: usize,
    fields: &FieldConfig,
) -> Result<CircuitPlan> {
    if n_trot == 0 {
        return Err(Error::InvalidInput("n_trot must be at least 1".into()));
    }
    let closed = CdClosedForm::new(n, fields)?;
    let sets = build_interaction_sets(n)?;
    let dt = schedule.total_time / n_trot as f64;
    let mut steps = Vec::with_capacity(n_trot);
    for k in 1..=n_trot {
        let time = if k == n_trot { schedule.total_time } else { k as f64 * dt };
        let (lambda, lambda_dot) = schedule.eval(time)?;
        let alpha1 = closed.alpha1(lambda)?.alpha1;
        let theta = dt * alpha1 * lambda_dot;
        let block = |kind, idx: &[usize]| RotationBlock {
            kind,
            qubits: idx.to_vec(),
            fields: idx.iter().map(|&q| fields.h_x[q - 1]).collect(),
            theta,
        };
        let blocks = sets
            .pairs
            .iter()
            .map(|p| block(BlockKind::TwoBody, p))
            .chain(sets.quads.iter().map(|q| block(BlockKind::FourBody, q)))
            .collect();
        steps.push(TrotterStep { k, time, lambda, lambda_dot, alpha1, theta, blocks });
    }
    debug_assert!(steps.first().is_none_or(|s| {
        let words: Vec<f64> = s.blocks.iter().flat_map(|b| b.rotations().map(|(_, x)| x)).collect();
        let expected: Vec<f64> = generator_words(&sets, fields).iter().map(|(_, g)| g * s.theta).collect();
        words == expected
    }));
    Ok(CircuitPlan { n, n_trot, schedule: *schedule, steps })
}

/// Runs the plan on `|+>^N`.
pub fn simulate(plan: &CircuitPlan) -> Result<StateVector> {
    let mut state = StateVector::plus_state(plan.n)?;
    for step in &plan.steps {
        for block in &step.blocks {
            for (word, x) in block.rotations() {
                state.apply_pauli_rotation(&word, x)?;
            }
        }
    }
    Ok(state)
}
