use super::{check_angle, fidelity_profile, MemoryDistribution};
use crate::error::{Error, Result};
use crate::heisenberg::f_angle;
use crate::mo_benchmark::mo_optimal_fidelity;
use crate::numerics::bisect;
use crate::quantum_optimal::Problem;
use crate::spin_algebra::SpinLabel;

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange { name: "gamma", value: gamma, expected: "> 0" })
    }
}

/// Gibbs weights `∝ e^{2γm}` of the memory aligned with the rotation axis.
pub fn thermal_state(spin: SpinLabel, gamma: f64) -> Result<MemoryDistribution> {
    check_gamma(gamma)?;
    let w: Vec<f64> = spin.two_m_values().map(|two_m| (gamma * f64::from(two_m - spin.two_j() as i32)).exp()).collect();
    let z: f64 = w.iter().sum();
    MemoryDistribution::new(spin, w.into_iter().map(|x| x / z).collect())
}

/// Average fidelity of the pure-state Heisenberg learner run on a thermal memory.
pub fn thermal_fidelity(spin: SpinLabel, theta: f64, gamma: f64) -> Result<f64> {
    check_angle(theta)?;
    let profile = fidelity_profile(spin, theta, f_angle(spin, theta))?;
    weighted(&profile, spin, gamma)
}

fn weighted(profile: &[f64], spin: SpinLabel, gamma: f64) -> Result<f64> {
    let d = thermal_state(spin, gamma)?;
    Ok(d.probabilities().iter().zip(profile).map(|(p, f)| p * f).sum())
}

/// Leading-order thermal fidelity `1 − (1−cos θ)/(3j tanh γ)`.
pub fn thermal_asymptote(spin: SpinLabel, theta: f64, gamma: f64) -> f64 {
    1.0 - (1.0 - theta.cos()) / (3.0 * spin.j() * gamma.tanh())
}

/// Inverse temperature above which the thermal learner beats the measure-and-operate optimum.
pub fn thermal_advantage_threshold(spin: SpinLabel, theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < std::f64::consts::TAU) {
        return Err(Error::OutOfRange { name: "theta", value: theta, expected: "(0, 2π)" });
    }
    let benchmark = mo_optimal_fidelity(spin, theta, Problem::Problem1)?.fidelity;
    let profile = fidelity_profile(spin, theta, f_angle(spin, theta))?;
    let gap = |g: f64| weighted(&profile, spin, g).map(|f| f - benchmark).unwrap_or(f64::NAN);
    let (lo, hi) = (1e-6, 60.0);
    if !(gap(lo) < 0.0 && gap(hi) > 0.0) {
        return Err(Error::Infeasible(format!("no thermal advantage crossover at two_j={}, θ={theta}", spin.two_j())));
    }
    bisect(gap, lo, hi, 1e-12)
}
