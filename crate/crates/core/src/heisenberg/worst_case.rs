use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::{heisenberg_unitary, HeisenbergGate};
use crate::channel_core::target_gate;
use crate::error::{Error, Result};
use crate::spin_algebra::{ComplexOperator, SpinLabel, C64};

const GRID: usize = 64;
const AZIMUTHS: usize = 8;
const AZIMUTH_TOL: f64 = 1e-9;

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorstCase {
    pub value: f64,
    /// Polar angle of the worst input relative to the memory direction.
    pub polar_angle: f64,
}

/// Fidelity for memory `|j,j⟩` and target input at polar angle `alpha`, azimuth `phi`.
fn input_fidelity(gate: &HeisenbergGate, v: &ComplexOperator, alpha: f64, phi: f64) -> Result<f64> {
    let (s, c) = (0.5 * alpha).sin_cos();
    let psi = ComplexOperator::ket(&[C64::new(c, 0.0), C64::from_polar(s, phi)]);
    let memory = gate.memory();
    let out = gate.apply(&memory.ket(memory.two_j() as i32)?.kron(&psi))?;
    let want = v * &psi;
    let mut f = 0.0;
    for i in 0..memory.dim() {
        let amp = want[(0, 0)].conj() * out[(2 * i, 0)] + want[(1, 0)].conj() * out[(2 * i + 1, 0)];
        f += amp.norm_sqr();
    }
    Ok(f)
}

/// Minimum over input states of the Heisenberg learner's fidelity.
///
/// By covariance the minimum over training rotations is attained at the identity.
/// The search is one-dimensional in the polar angle after checking that the
/// fidelity does not depend on the azimuth.
pub fn worst_case_fidelity(spin: SpinLabel, theta: f64) -> Result<WorstCase> {
    if !(theta > 0.0 && theta < TAU) {
        return Err(Error::OutOfRange { name: "theta", value: theta, expected: "(0, 2π)" });
    }
    let gate = heisenberg_unitary(spin.two_j(), 1, theta)?;
    let v = target_gate(SpinLabel::HALF, theta);

    for alpha in [0.7, 1.9, 2.8] {
        let base = input_fidelity(&gate, &v, alpha, 0.0)?;
        for k in 1..AZIMUTHS {
            let other = input_fidelity(&gate, &v, alpha, TAU * k as f64 / AZIMUTHS as f64)?;
            if (other - base).abs() > AZIMUTH_TOL {
                return Err(Error::Numerical(format!("fidelity depends on azimuth: {base} vs {other}")));
            }
        }
    }

    let f = |a: f64| input_fidelity(&gate, &v, a, 0.0);
    let mut best = (f64::INFINITY, 0usize);
    for k in 0..=GRID {
        let val = f(PI * k as f64 / GRID as f64)?;
        if val < best.0 {
            best = (val, k);
        }
    }
    let step = PI / GRID as f64;
    let mut lo = (best.1 as f64 - 1.0).max(0.0) * step;
    let mut hi = (best.1 as f64 + 1.0).min(GRID as f64) * step;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while hi - lo > 1e-10 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        }
    }
    let mid = 0.5 * (lo + hi);
    let candidates = [(best.0, best.1 as f64 * step), (f(mid)?, mid)];
    let (value, polar_angle) = candidates.into_iter().fold((f64::INFINITY, 0.0), |acc, c| if c.0 < acc.0 { c } else { acc });
    Ok(WorstCase { value, polar_angle })
}
