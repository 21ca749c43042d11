use super::params::{multiplicity_bounds, tp_weights};
use crate::error::{Error, Result};
use crate::numerics::nelder_mead;
use crate::spin_algebra::{coupling_decomposition, SpinLabel};

/// Grid-plus-simplex maximization of the entanglement fidelity over the covariant family.
///
/// Trace preservation ties `α` to `⟨+|M|+⟩` and `β` to `⟨−|M|−⟩`, so the search
/// runs over those two diagonal entries. `M` is taken rank one with phases
/// aligned to the coupling coefficients, which maximizes `⟨c|M|c⟩` at fixed diagonal.
pub fn brute_force_optimum(spin: SpinLabel, two_m: i32, theta: f64, grid_resolution: usize) -> Result<f64> {
    if grid_resolution < 16 {
        return Err(Error::OutOfRange { name: "grid_resolution", value: grid_resolution as f64, expected: "at least 16" });
    }
    if spin.two_j() == 0 {
        return Err(Error::InvalidQuantumNumbers("memory spin must be at least 1/2".into()));
    }
    let k = coupling_decomposition(spin, two_m, theta)?;
    let (a2, b2) = (k.a.norm_sqr(), k.b.norm_sqr());
    let (cp, cm) = (k.c_plus.norm(), k.c_minus.norm());
    let (xmax, ymax) = multiplicity_bounds(spin);
    let y_free = spin.two_j() >= 2;

    let fe = |x: f64, y: f64| -> f64 {
        let (x, y) = (x.clamp(0.0, xmax), if y_free { y.clamp(0.0, ymax) } else { ymax });
        let (alpha, beta) = tp_weights(spin, x, y);
        0.5 * (alpha * a2 + beta * b2 + (x.sqrt() * cp + y.sqrt() * cm).powi(2))
    };

    let n = grid_resolution;
    let ny = if y_free { n } else { 0 };
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..=n {
        for l in 0..=ny {
            let x = xmax * i as f64 / n as f64;
            let y = if y_free { ymax * l as f64 / n as f64 } else { ymax };
            let v = fe(x, y);
            if v > best.0 {
                best = (v, x, y);
            }
        }
    }
    let step = xmax / n as f64;
    let refined = if y_free {
        nelder_mead(|p| -fe(p[0], p[1]), &[best.1, best.2], step, 1e-15, 2000).1
    } else {
        nelder_mead(|p| -fe(p[0], ymax), &[best.1], step, 1e-15, 2000).1
    };
    Ok(best.0.max(-refined))
}
