//! Heisenberg-interaction realization of the optimal learner.

mod gate;
mod worst_case;

pub use gate::HeisenbergGate;
pub use worst_case::{worst_case_fidelity, WorstCase};

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::channel_core::{average_from_entanglement, UnitaryChannel};
use crate::error::{Error, Result};
use crate::spin_algebra::SpinLabel;

/// Optimal interaction angle `f(θ)` in `[0, 2π)`.
pub fn f_angle(spin: SpinLabel, theta: f64) -> f64 {
    let d = f64::from(spin.two_j()) + 1.0;
    let (s, c) = theta.sin_cos();
    (d * s).atan2(d * c + 1.0).rem_euclid(TAU)
}

/// `arccot[cot θ + 1/((2j+1) sin θ)] + s(θ)` with `arccot ∈ (0, π)`; undefined at multiples of π.
pub fn f_angle_arccot(spin: SpinLabel, theta: f64) -> f64 {
    let d = f64::from(spin.two_j()) + 1.0;
    let x = 1.0 / theta.tan() + 1.0 / (d * theta.sin());
    let arccot = PI / 2.0 - x.atan();
    if theta > PI {
        arccot + PI
    } else {
        arccot
    }
}

/// Builds the learning gate: angle `f(θ)` for a qubit target, `θ` itself for larger targets.
pub fn heisenberg_unitary(two_j: u32, two_k: u32, theta: f64) -> Result<HeisenbergGate> {
    let (memory, target) = (SpinLabel::new(two_j), SpinLabel::new(two_k));
    let angle = if two_k == 1 { f_angle(memory, theta) } else { theta };
    HeisenbergGate::with_angle(memory, target, theta, angle)
}

/// The gate as a channel on memory ⊗ target that discards the memory.
pub fn heisenberg_channel(gate: &HeisenbergGate) -> Result<UnitaryChannel> {
    UnitaryChannel::new(gate.matrix(), gate.memory().dim(), gate.target().dim())
}

/// Closed-form entanglement fidelity of the qubit-target gate with probe `|j,j⟩`.
pub fn heisenberg_entanglement_fidelity(spin: SpinLabel, theta: f64, f_override: Option<f64>) -> f64 {
    let j = spin.j();
    let f = f_override.unwrap_or_else(|| f_angle(spin, theta));
    let d = 1.0 + 2.0 * j;
    (1.0 + 2.0 * j + 4.0 * j * j + 2.0 * j * f.cos() + d * theta.cos() + 2.0 * j * d * (theta - f).cos()) / (2.0 * d * d)
}

/// Interaction time `f(θ)/((2j+1) α ħ)` for coupling strength `α`.
pub fn interaction_time(spin: SpinLabel, theta: f64, coupling_alpha: f64, hbar: f64) -> Result<f64> {
    if !(coupling_alpha > 0.0) {
        return Err(Error::OutOfRange { name: "coupling_alpha", value: coupling_alpha, expected: "> 0" });
    }
    if !(hbar > 0.0) {
        return Err(Error::OutOfRange { name: "hbar", value: hbar, expected: "> 0" });
    }
    Ok(f_angle(spin, theta) / ((f64::from(spin.two_j()) + 1.0) * coupling_alpha * hbar))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinKMode {
    Exact,
    Asymptotic,
}

/// Average fidelity of the spin-k Heisenberg learner with probe `|j,j⟩`.
pub fn spin_k_fidelity(two_j: u32, two_k: u32, theta: f64, mode: SpinKMode) -> Result<f64> {
    if two_k == 0 {
        return Err(Error::InvalidQuantumNumbers("target spin must be at least 1/2".into()));
    }
    let dk = two_k as usize + 1;
    match mode {
        SpinKMode::Exact => {
            let gate = heisenberg_unitary(two_j, two_k, theta)?;
            let fe = gate.probe_fidelity(two_j as i32, theta)?;
            Ok(average_from_entanglement(fe, dk))
        }
        SpinKMode::Asymptotic => {
            let (j, k) = (f64::from(two_j) / 2.0, f64::from(two_k) / 2.0);
            Ok(1.0 - k * (2.0 * k + 1.0) * (1.0 - theta.cos()) / (3.0 * j))
        }
    }
}

/// Worst-case offset `c(k)`: `1/4` when `2k` is odd, `0` otherwise.
pub fn worst_case_offset(two_k: u32) -> f64 {
    if two_k % 2 == 1 {
        0.25
    } else {
        0.0
    }
}

/// Leading-order worst-case fidelity `1 − [k(k+1) + c(k)](1 − cos θ)/j`.
pub fn spin_k_worst_case_asymptote(two_j: u32, two_k: u32, theta: f64) -> f64 {
    let (j, k) = (f64::from(two_j) / 2.0, f64::from(two_k) / 2.0);
    1.0 - (k * (k + 1.0) + worst_case_offset(two_k)) * (1.0 - theta.cos()) / j
}
