use super::params::{multiplicity_bounds, CovariantChoiParams};
#[cfg(test)]
use super::params::covariant_fidelity;
use crate::error::{Error, Result};
use crate::spin_algebra::{coupling_decomposition, SpinLabel, C64};

fn phase_of(z: C64) -> C64 {
    if z.norm() > 0.0 {
        z / z.norm()
    } else {
        C64::new(1.0, 0.0)
    }
}

/// Stationary point `case` (1–4) of the fidelity over the covariant family.
///
/// Returns the entanglement fidelity from the closed form of each case and the
/// parameters that realize it. Cases 2 and 4 fail with [`Error::Infeasible`]
/// when their stationary point leaves the parameter domain.
pub fn case_fidelity(case: u8, spin: SpinLabel, two_m: i32, theta: f64) -> Result<(f64, CovariantChoiParams)> {
    if spin.two_j() == 0 {
        return Err(Error::InvalidQuantumNumbers("memory spin must be at least 1/2".into()));
    }
    if matches!(case, 3 | 4) && spin.two_j() < 2 {
        return Err(Error::InapplicableCase { case, two_j: spin.two_j() });
    }
    let k = coupling_decomposition(spin, two_m, theta)?;
    let j = spin.j();
    let m = f64::from(two_m) / 2.0;
    let (xmax, ymax) = multiplicity_bounds(spin);
    let (cp, cm) = (k.c_plus.norm(), k.c_minus.norm());
    let (pp, pm) = (phase_of(k.c_plus), phase_of(k.c_minus));

    match case {
        1 => {
            let (up, um) = (xmax.sqrt(), ymax.sqrt());
            let params = CovariantChoiParams::rank_one_tp(spin, pp * up, pm * um);
            Ok((0.5 * (up * cp + um * cm).powi(2), params))
        }
        2 => {
            let a2 = k.a.norm_sqr();
            let denom = (2.0 * j + 1.0) / (2.0 * j + 3.0) * a2 - cp * cp;
            if denom <= 0.0 {
                return Err(Error::Infeasible(format!("case 2 denominator {denom:e} is not positive")));
            }
            let up = ymax.sqrt() * cp * cm / denom;
            if up * up > xmax {
                return Err(Error::Infeasible(format!("case 2 requires negative α (|v+|² = {})", up * up)));
            }
            let params = CovariantChoiParams::rank_one_tp(spin, pp * up, pm * ymax.sqrt());
            let fe = (j + 1.0) / (2.0 * j + 3.0) * a2 * (1.0 + j / (j + 1.0) * cm * cm / denom);
            Ok((fe, params))
        }
        3 => {
            let alpha = (2.0 * j + 2.0) / (2.0 * j + 3.0);
            let beta = 2.0 * j / (2.0 * j - 1.0);
            let zero = C64::new(0.0, 0.0);
            let params = CovariantChoiParams::rank_one(alpha, beta, zero, zero);
            let s2 = (0.5 * theta).sin().powi(2);
            let d = 2.0 * j + 1.0;
            let fe = s2 * (((j + 1.0).powi(2) - m * m) / (d * (2.0 * j + 3.0)) + (j * j - m * m) / (d * (2.0 * j - 1.0)));
            Ok((fe, params))
        }
        4 => {
            let b2 = k.b.norm_sqr();
            let denom = (2.0 * j + 1.0) / (2.0 * j - 1.0) * b2 - cm * cm;
            if denom <= 0.0 {
                return Err(Error::Infeasible(format!("case 4 denominator {denom:e} is not positive")));
            }
            let um = xmax.sqrt() * cp * cm / denom;
            if um * um > ymax {
                return Err(Error::Infeasible(format!("case 4 requires negative β (|v−|² = {})", um * um)));
            }
            let params = CovariantChoiParams::rank_one_tp(spin, pp * xmax.sqrt(), pm * um);
            let fe = j / (2.0 * j - 1.0) * b2 * (1.0 + (j + 1.0) / j * cp * cp / denom);
            Ok((fe, params))
        }
        _ => Err(Error::InapplicableCase { case, two_j: spin.two_j() }),
    }
}

/// Case-1 entanglement fidelity for the stretched probe `m = j`.
pub fn case_one_stretched(spin: SpinLabel, theta: f64) -> f64 {
    let j = spin.j();
    let c2 = (0.5 * theta).cos().powi(2);
    let num = 1.0 + (1.0 + (2.0 * j + 1.0) / (j * j) * c2).sqrt() + (2.0 * j + 1.0) / (2.0 * j * j) * c2;
    num / (2.0 * (1.0 + 1.0 / (2.0 * j)).powi(2))
}

/// Optimal average fidelity with the stretched probe, `1/3 + (2/3) F_e`.
pub fn stretched_average_fidelity(spin: SpinLabel, theta: f64) -> f64 {
    let j = spin.j();
    let c2 = (0.5 * theta).cos().powi(2);
    1.0 / 3.0
        + (1.0 + (1.0 + (2.0 * j + 1.0) / (j * j) * c2).sqrt() + (2.0 * j + 1.0) / (2.0 * j * j) * c2)
            / (3.0 * (1.0 + 1.0 / (2.0 * j)).powi(2))
}

/// Average fidelity of the stretched-probe optimum at `θ = π`.
pub fn half_turn_fidelity(spin: SpinLabel) -> f64 {
    let j = spin.j();
    1.0 - (8.0 * j + 2.0) / (12.0 * j * j + 12.0 * j + 3.0)
}

/// Average fidelity of the `j = 1/2` measurement/universal-NOT mixture.
pub fn half_spin_mixture_fidelity(theta: f64) -> f64 {
    let c = theta.cos();
    (5.0 - c) / 12.0 - (1.0 - c) / (36.0 * (1.0 + 2.0 * c))
}

/// Weight of the universal-NOT branch in the `j = 1/2` mixture.
pub fn half_spin_mixture_alpha(theta: f64) -> f64 {
    let c = theta.cos();
    (1.0 + 8.0 * c + 9.0 * c * c) / (3.0 * (1.0 + 2.0 * c).powi(2))
}

/// Average fidelity of the `j = 1` strategy with probe `|1,0⟩`.
pub fn spin_one_equatorial_fidelity(theta: f64) -> f64 {
    1.0 / 3.0 + 0.4 * (0.5 * theta).sin().powi(2)
}

/// Entanglement fidelity of the covariant parameters, recomputed from scratch.
#[cfg(test)]
fn check_case(case: u8, spin: SpinLabel, two_m: i32, theta: f64) -> Result<f64> {
    let (fe, params) = case_fidelity(case, spin, two_m, theta)?;
    params.check(spin)?;
    let direct = covariant_fidelity(&params, spin, two_m, theta)?;
    if (fe - direct).abs() > 1e-9 {
        return Err(Error::Numerical(format!("case {case}: closed form {fe} vs parameters {direct}")));
    }
    Ok(fe)
}
