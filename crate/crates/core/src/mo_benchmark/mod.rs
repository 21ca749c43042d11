//! Classical-memory benchmark: covariant measurement of the memory followed by
//! a conditional rotation of the target.

mod bell;
mod oracle;

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub use bell::unital_bell_reality_check;
pub use oracle::{mo_mc_oracle, spin_k_mo_fidelity, MoLearner, SpinKMoEstimate};

use crate::channel_core::{average_from_entanglement, StrategyDescriptor};
use crate::error::{Error, Result};
use crate::numerics::bisect;
use crate::quantum_optimal::{spin_one_equatorial_fidelity, Problem, Regime, RegimeReport};
use crate::spin_algebra::{clebsch_gordan, SpinLabel};
use crate::tolerance;

/// Probe `|j,m⟩`, measurement seed `|j,n⟩`, and conditional rotation angle.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MOParams {
    pub two_m: i32,
    pub xi_two_n: i32,
    pub theta_prime: f64,
}

impl MOParams {
    pub fn new(spin: SpinLabel, two_m: i32, xi_two_n: i32, theta_prime: f64) -> Result<Self> {
        spin.check_m(two_m)?;
        spin.check_m(xi_two_n)?;
        if !(0.0..TAU).contains(&theta_prime) {
            return Err(Error::OutOfRange { name: "theta_prime", value: theta_prime, expected: "[0, 2π)" });
        }
        Ok(Self { two_m, xi_two_n, theta_prime })
    }
}

/// Weights of the `l = 0, 1, 2` components of the operator `Γ`.
fn gamma_weights(theta: f64, theta_prime: f64) -> [f64; 3] {
    let (s, c) = (0.5 * theta).sin_cos();
    let (sp, cp) = (0.5 * theta_prime).sin_cos();
    [cp * cp * c * c + sp * sp * s * s / 3.0, 2.0 / 3.0 * cp * c * sp * s, 2.0 / 15.0 * sp * sp * s * s]
}

/// Entanglement fidelity of the covariant measure-and-operate strategy.
///
/// Evaluated as `(2j+1)(−1)^{n−m} Σ_l γ_l ⟨l,0|j,n;j,−n⟩⟨l,0|j,m;j,−m⟩`.
pub fn mo_element_fidelity(spin: SpinLabel, two_m: i32, xi_two_n: i32, theta: f64, theta_prime: f64) -> Result<f64> {
    spin.check_m(two_m)?;
    spin.check_m(xi_two_n)?;
    let tj = spin.two_j() as i32;
    let gamma = gamma_weights(theta, theta_prime);
    let sign = if ((xi_two_n - two_m) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let mut acc = 0.0;
    for (l, g) in gamma.iter().enumerate() {
        let two_l = 2 * l as i32;
        if two_l > 2 * tj {
            continue;
        }
        acc += g * clebsch_gordan(tj, xi_two_n, tj, -xi_two_n, two_l, 0)? * clebsch_gordan(tj, two_m, tj, -two_m, two_l, 0)?;
    }
    Ok(f64::from(tj + 1) * sign * acc)
}

/// Closed form of [`mo_element_fidelity`] for `n = m`, from the squared overlaps.
pub fn mo_element_fidelity_diagonal(spin: SpinLabel, two_m: i32, theta: f64, theta_prime: f64) -> Result<f64> {
    spin.check_m(two_m)?;
    let j = spin.j();
    let m = f64::from(two_m) / 2.0;
    let d = 2.0 * j + 1.0;
    let [g0, g1, g2] = gamma_weights(theta, theta_prime);
    let mut sum = g0 / d + g1 * 3.0 * m * m / (j * (j + 1.0) * d);
    if spin.two_j() >= 2 {
        sum += g2 * 5.0 * (j * j + j - 3.0 * m * m).powi(2) / (j * (j + 1.0) * (2.0 * j - 1.0) * d * (2.0 * j + 3.0));
    }
    Ok(d * sum)
}

/// Optimal conditional rotation angle for the stretched probe, in `[0, 2π)`.
pub fn optimal_theta_prime(spin: SpinLabel, theta: f64) -> f64 {
    let j = spin.j();
    let q = 2.0 * j * j + 3.0 * j;
    let y = q * theta.sin();
    let x = (q + 2.0) * theta.cos() + 2.0 * j + 1.0;
    let t = y.atan2(x).rem_euclid(TAU);
    if t >= TAU { 0.0 } else { t }
}

/// Optimal MO average fidelity with the stretched probe, given `θ′`.
pub fn mo_closed_form(spin: SpinLabel, theta: f64, theta_prime: f64) -> f64 {
    let j = spin.j();
    (4.0 * j + 4.0 + (2.0 * j + 1.0) * (theta - theta_prime).cos()) / (3.0 * (2.0 * j + 3.0))
        + ((2.0 * j + 1.0) * (theta.cos() + theta_prime.cos()) + (theta + theta_prime).cos() + 1.0)
            / (3.0 * (j + 1.0) * (2.0 * j + 3.0))
}

fn spin_one_gap(theta: f64) -> f64 {
    let spin = SpinLabel::ONE;
    mo_closed_form(spin, theta, optimal_theta_prime(spin, theta)) - spin_one_equatorial_fidelity(theta)
}

/// Half-width of the window around `θ = π` where the `j = 1` benchmark prefers the probe `|1,0⟩`.
pub fn mo_threshold_one() -> f64 {
    static CELL: OnceLock<f64> = OnceLock::new();
    *CELL.get_or_init(|| {
        let root = bisect(spin_one_gap, PI / 2.0, PI, tolerance::THRESHOLD_BISECTION).expect("crossover exists");
        PI - root
    })
}

/// Optimal measure-and-operate fidelity, with the `j = 1` probe transition for Problem 2.
pub fn mo_optimal_fidelity(spin: SpinLabel, theta: f64, problem: Problem) -> Result<RegimeReport> {
    if !(0.0..TAU).contains(&theta) {
        return Err(Error::OutOfRange { name: "theta", value: theta, expected: "[0, 2π)" });
    }
    let two_j = spin.two_j();
    if two_j == 0 {
        return Err(Error::InvalidQuantumNumbers("memory spin must be at least 1/2".into()));
    }
    if two_j == 2 && problem == Problem::Problem2 && (PI - theta).abs() <= mo_threshold_one() {
        let fidelity = spin_one_equatorial_fidelity(theta);
        return Ok(RegimeReport {
            problem,
            regime: Regime::J1AnomalousProblem2,
            optimal_two_m: 0,
            entanglement_fidelity: 1.5 * fidelity - 0.5,
            fidelity,
            strategy: StrategyDescriptor::MoStrategy { two_j, two_m: 0, xi_two_n: 0, theta_prime: PI },
        });
    }
    let theta_prime = optimal_theta_prime(spin, theta);
    let positivity = (0.5 * theta_prime).sin() * (0.5 * theta_prime).cos() * (0.5 * theta).sin() * (0.5 * theta).cos();
    if positivity < -1e-12 {
        return Err(Error::Numerical(format!("Γ is not positive at θ={theta}, θ′={theta_prime}")));
    }
    let tj = two_j as i32;
    let fe = mo_element_fidelity(spin, tj, tj, theta, theta_prime)?;
    Ok(RegimeReport {
        problem,
        regime: Regime::MeasureAndOperate,
        optimal_two_m: tj,
        entanglement_fidelity: fe,
        fidelity: average_from_entanglement(fe, 2),
        strategy: StrategyDescriptor::MoStrategy { two_j, two_m: tj, xi_two_n: tj, theta_prime },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum_optimal::optimal_fidelity;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn element_fidelity_examples() {
        for two_j in 1..=6u32 {
            let spin = SpinLabel::new(two_j);
            for two_m in spin.two_m_values() {
                assert_relative_eq!(mo_element_fidelity(spin, two_m, two_m, 0.0, 0.0).unwrap(), 1.0, epsilon = 1e-12);
            }
        }
        let fe = mo_element_fidelity(SpinLabel::ONE, 0, 0, PI, PI).unwrap();
        assert_relative_eq!(fe, 0.6, epsilon = 1e-12);
        assert_relative_eq!(average_from_entanglement(fe, 2), 11.0 / 15.0, epsilon = 1e-12);
    }

    #[test]
    fn cg_form_matches_squared_overlaps() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for two_j in 1..=6u32 {
            let spin = SpinLabel::new(two_j);
            for two_m in spin.two_m_values() {
                for _ in 0..20 {
                    let (t, tp) = (rng.random_range(0.0..TAU), rng.random_range(0.0..TAU));
                    let a = mo_element_fidelity(spin, two_m, two_m, t, tp).unwrap();
                    let b = mo_element_fidelity_diagonal(spin, two_m, t, tp).unwrap();
                    assert!((a - b).abs() < 1e-12, "two_j={two_j} two_m={two_m}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn theta_prime_special_values_and_stationarity() {
        for two_j in 1..=12u32 {
            let spin = SpinLabel::new(two_j);
            assert_eq!(optimal_theta_prime(spin, 0.0), 0.0);
            assert_relative_eq!(optimal_theta_prime(spin, PI), PI, epsilon = 1e-12);
            let tj = two_j as i32;
            for k in 1..40 {
                let theta = TAU * k as f64 / 40.0;
                let tp = optimal_theta_prime(spin, theta);
                let h = 1e-5;
                let f = |x: f64| mo_element_fidelity(spin, tj, tj, theta, x).unwrap();
                let deriv = (f(tp + h) - f(tp - h)) / (2.0 * h);
                assert!(deriv.abs() < 1e-6, "two_j={two_j} θ={theta}: {deriv}");
                assert!(f(tp) >= f(tp + 0.01) && f(tp) >= f(tp - 0.01));
            }
        }
        let big = SpinLabel::new(2000);
        assert!((optimal_theta_prime(big, 1.0) - 1.0).abs() < 2e-3);
    }

    #[test]
    fn closed_form_matches_element_fidelity() {
        for two_j in 1..=40u32 {
            let spin = SpinLabel::new(two_j);
            for k in 0..50 {
                let theta = TAU * k as f64 / 50.0;
                let tp = optimal_theta_prime(spin, theta);
                let fe = mo_element_fidelity(spin, two_j as i32, two_j as i32, theta, tp).unwrap();
                assert!((average_from_entanglement(fe, 2) - mo_closed_form(spin, theta, tp)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn headline_and_anomaly() {
        let r = mo_optimal_fidelity(SpinLabel::new(3), PI, Problem::Problem1).unwrap();
        assert_relative_eq!(r.fidelity, 29.0 / 45.0, epsilon = 1e-12);
        let r = mo_optimal_fidelity(SpinLabel::ONE, PI, Problem::Problem2).unwrap();
        assert_relative_eq!(r.fidelity, 11.0 / 15.0, epsilon = 1e-12);
        assert_eq!(r.optimal_two_m, 0);
        assert!((mo_threshold_one() / PI - 0.303).abs() < 5e-3, "{}", mo_threshold_one() / PI);
        for two_j in [1u32, 3, 4, 9] {
            let r = mo_optimal_fidelity(SpinLabel::new(two_j), 0.0, Problem::Problem2).unwrap();
            assert_relative_eq!(r.fidelity, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn stretched_probe_is_best_away_from_anomaly() {
        for two_j in [1u32, 3, 4, 5, 8] {
            let spin = SpinLabel::new(two_j);
            for k in 0..30 {
                let theta = TAU * k as f64 / 30.0;
                let best = mo_optimal_fidelity(spin, theta, Problem::Problem2).unwrap().entanglement_fidelity;
                for two_m in spin.two_m_values() {
                    for two_n in spin.two_m_values() {
                        for q in 0..24 {
                            let tp = TAU * q as f64 / 24.0;
                            let fe = mo_element_fidelity(spin, two_m, two_n, theta, tp).unwrap();
                            assert!(fe <= best + 1e-9, "two_j={two_j} θ={theta} m={two_m} n={two_n} θ′={tp}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn quantum_beats_classical() {
        for two_j in 1..=12u32 {
            let spin = SpinLabel::new(two_j);
            for k in 1..60 {
                let theta = TAU * k as f64 / 60.0;
                for problem in [Problem::Problem1, Problem::Problem2] {
                    let q = optimal_fidelity(spin, theta, problem).unwrap().fidelity;
                    let c = mo_optimal_fidelity(spin, theta, problem).unwrap().fidelity;
                    assert!(q >= c - 1e-12, "two_j={two_j} θ={theta}");
                    let anomalous = two_j == 2 && problem == Problem::Problem2 && (theta - PI).abs() <= crate::quantum_optimal::delta_one();
                    let half_pi = two_j == 1 && (theta - PI).abs() < 1e-12;
                    if !anomalous && !half_pi {
                        assert!(q - c > 1e-9, "two_j={two_j} θ={theta} {problem:?}: {q} vs {c}");
                    }
                }
            }
        }
    }
}
