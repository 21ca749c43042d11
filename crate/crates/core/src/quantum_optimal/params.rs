use crate::error::{Error, Result};
use crate::spin_algebra::{coupling_decomposition, SpinLabel, C64};
use crate::tolerance;

/// Covariant Choi operator `α P_{j+1} ⊕ β P_{j−1} ⊕ (P_j ⊗ M)` in the conjugated picture.
///
/// `m` is the 2×2 block in the `{|+⟩, |−⟩}` multiplicity basis, in the phase
/// convention of [`coupling_decomposition`].
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct CovariantChoiParams {
    pub alpha: f64,
    pub beta: f64,
    pub m: [[C64; 2]; 2],
}

/// Upper bounds on `⟨+|M|+⟩` and `⟨−|M|−⟩` (attained when `α = 0`, resp. `β = 0`).
pub fn multiplicity_bounds(spin: SpinLabel) -> (f64, f64) {
    let j = spin.j();
    ((2.0 * j + 2.0) / (2.0 * j + 1.0), 2.0 * j / (2.0 * j + 1.0))
}

/// `α` and `β` fixed by trace preservation for given diagonal entries of `M`.
///
/// For `j = 1/2` there is no spin-`(j−1)` sector and `β` is reported as zero.
pub fn tp_weights(spin: SpinLabel, m_plus: f64, m_minus: f64) -> (f64, f64) {
    let j = spin.j();
    let alpha = (2.0 * j + 2.0) / (2.0 * j + 3.0) * (1.0 - (2.0 * j + 1.0) / (2.0 * j + 2.0) * m_plus);
    let beta = if spin.two_j() >= 2 {
        2.0 * j / (2.0 * j - 1.0) * (1.0 - (2.0 * j + 1.0) / (2.0 * j) * m_minus)
    } else {
        0.0
    };
    (alpha, beta)
}

impl CovariantChoiParams {
    /// `M = |v⟩⟨v|`.
    pub fn rank_one(alpha: f64, beta: f64, v_plus: C64, v_minus: C64) -> Self {
        let m = [
            [v_plus * v_plus.conj(), v_plus * v_minus.conj()],
            [v_minus * v_plus.conj(), v_minus * v_minus.conj()],
        ];
        Self { alpha, beta, m }
    }

    /// Rank-one parameters with `α`, `β` chosen by trace preservation.
    pub fn rank_one_tp(spin: SpinLabel, v_plus: C64, v_minus: C64) -> Self {
        let (alpha, beta) = tp_weights(spin, v_plus.norm_sqr(), v_minus.norm_sqr());
        Self::rank_one(alpha, beta, v_plus, v_minus)
    }

    /// Trace-preservation residuals `(first, second)`; the second is the `|−⟩`
    /// constraint, whose `β` term vanishes for `j = 1/2`.
    pub fn tp_residuals(&self, spin: SpinLabel) -> Result<(f64, f64)> {
        if spin.two_j() == 0 {
            return Err(Error::InvalidQuantumNumbers("memory spin must be at least 1/2".into()));
        }
        let j = spin.j();
        let first = (2.0 * j + 3.0) / (2.0 * j + 2.0) * self.alpha + (2.0 * j + 1.0) / (2.0 * j + 2.0) * self.m[0][0].re - 1.0;
        let beta_term = if spin.two_j() >= 2 { (2.0 * j - 1.0) / (2.0 * j) * self.beta } else { 0.0 };
        let second = beta_term + (2.0 * j + 1.0) / (2.0 * j) * self.m[1][1].re - 1.0;
        Ok((first, second))
    }

    pub fn check(&self, spin: SpinLabel) -> Result<()> {
        let tol = tolerance::TP_CONSTRAINT;
        let (first, second) = self.tp_residuals(spin)?;
        if first.abs() > tol || second.abs() > tol {
            return Err(Error::ConstraintViolation(format!(
                "trace preservation residuals {first:e}, {second:e}"
            )));
        }
        if self.alpha < -tol || self.beta < -tol {
            return Err(Error::ConstraintViolation(format!("negative weights α={}, β={}", self.alpha, self.beta)));
        }
        if spin.two_j() == 1 && self.beta.abs() > tol {
            return Err(Error::ConstraintViolation("β must vanish for j = 1/2".into()));
        }
        let m = &self.m;
        let herm = (m[0][1] - m[1][0].conj()).norm() <= tol && m[0][0].im.abs() <= tol && m[1][1].im.abs() <= tol;
        let det = m[0][0].re * m[1][1].re - m[0][1].norm_sqr();
        if !herm || m[0][0].re < -tol || m[1][1].re < -tol || det < -tol {
            return Err(Error::ConstraintViolation("block M is not positive semidefinite".into()));
        }
        Ok(())
    }
}

/// `F_e = (α|a|² + β|b|² + ⟨c|M|c⟩)/2` for probe `|j,m⟩`.
pub fn covariant_fidelity(params: &CovariantChoiParams, spin: SpinLabel, two_m: i32, theta: f64) -> Result<f64> {
    let k = coupling_decomposition(spin, two_m, theta)?;
    let c = [k.c_plus, k.c_minus];
    let mut cmc = C64::new(0.0, 0.0);
    for s in 0..2 {
        for t in 0..2 {
            cmc += c[s].conj() * params.m[s][t] * c[t];
        }
    }
    Ok(0.5 * (params.alpha * k.a.norm_sqr() + params.beta * k.b.norm_sqr() + cmc.re))
}
