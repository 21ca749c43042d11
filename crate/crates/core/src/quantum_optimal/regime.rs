use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::cases::{case_fidelity, half_spin_mixture_alpha};
use crate::channel_core::{average_from_entanglement, StrategyDescriptor};
use crate::error::{Error, Result};
use crate::numerics::bisect;
use crate::spin_algebra::SpinLabel;
use crate::tolerance;

/// Problem 1 fixes the probe to `|j,j⟩`; Problem 2 also optimizes the probe.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Problem {
    Problem1,
    Problem2,
}

impl Problem {
    pub fn from_index(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Self::Problem1),
            2 => Ok(Self::Problem2),
            _ => Err(Error::OutOfRange { name: "problem", value: f64::from(n), expected: "1 or 2" }),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Self::Problem1 => 1,
            Self::Problem2 => 2,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Case1,
    Case2Mixture,
    Case3,
    J1AnomalousProblem2,
    /// Classical-memory benchmark away from the `j = 1` window.
    MeasureAndOperate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub problem: Problem,
    pub regime: Regime,
    pub optimal_two_m: i32,
    pub entanglement_fidelity: f64,
    /// Average fidelity over pure target inputs.
    pub fidelity: f64,
    pub strategy: StrategyDescriptor,
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..TAU).contains(&theta) {
        return Err(Error::OutOfRange { name: "theta", value: theta, expected: "[0, 2π)" });
    }
    Ok(())
}

/// Half-width of the window around `θ = π` where the `j = 1/2` optimum mixes in
/// the universal NOT: the zero of the mixture weight on `(2π/3, π)`.
pub fn delta_half() -> f64 {
    static CELL: OnceLock<f64> = OnceLock::new();
    *CELL.get_or_init(|| {
        let root = bisect(half_spin_mixture_alpha, 2.0 * PI / 3.0 + 1e-6, PI, tolerance::THRESHOLD_BISECTION)
            .expect("mixture weight changes sign");
        PI - root
    })
}

fn spin_one_gap(theta: f64) -> f64 {
    let stretched = case_fidelity(1, SpinLabel::ONE, 2, theta).expect("case 1").0;
    let equatorial = case_fidelity(3, SpinLabel::ONE, 0, theta).expect("case 3").0;
    stretched - equatorial
}

/// Half-width of the `j = 1` window where the probe `|1,0⟩` beats `|1,1⟩` (Problem 2).
pub fn delta_one() -> f64 {
    static CELL: OnceLock<f64> = OnceLock::new();
    *CELL.get_or_init(|| {
        let root = bisect(spin_one_gap, PI / 2.0, PI, tolerance::THRESHOLD_BISECTION).expect("crossover exists");
        PI - root
    })
}

fn report(problem: Problem, regime: Regime, two_m: i32, fe: f64, strategy: StrategyDescriptor) -> RegimeReport {
    RegimeReport {
        problem,
        regime,
        optimal_two_m: two_m,
        entanglement_fidelity: fe,
        fidelity: average_from_entanglement(fe, 2),
        strategy,
    }
}

/// Optimal quantum learning fidelity with regime dispatch.
pub fn optimal_fidelity(spin: SpinLabel, theta: f64, problem: Problem) -> Result<RegimeReport> {
    check_theta(theta)?;
    let two_j = spin.two_j();
    if two_j == 0 {
        return Err(Error::InvalidQuantumNumbers("memory spin must be at least 1/2".into()));
    }
    let stretched = || -> Result<RegimeReport> {
        let (fe, _) = case_fidelity(1, spin, two_j as i32, theta)?;
        let strategy = StrategyDescriptor::Heisenberg { two_j, two_k: 1, angle_override: None };
        Ok(report(problem, Regime::Case1, two_j as i32, fe, strategy))
    };
    let off_pi = (theta - PI).abs();
    match two_j {
        1 if off_pi <= delta_half() => {
            let (fe, params) = case_fidelity(2, spin, 1, theta)?;
            let strategy = StrategyDescriptor::UNotMixture { alpha: params.alpha.max(0.0) };
            Ok(report(problem, Regime::Case2Mixture, 1, fe, strategy))
        }
        2 if problem == Problem::Problem2 && off_pi <= delta_one() => {
            let (fe, _) = case_fidelity(3, spin, 0, theta)?;
            let strategy = StrategyDescriptor::CaseChoi { case: 3, two_j, two_m: 0, theta };
            Ok(report(problem, Regime::J1AnomalousProblem2, 0, fe, strategy))
        }
        _ => stretched(),
    }
}
