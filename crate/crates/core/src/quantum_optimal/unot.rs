use crate::channel_core::{partial_trace, Channel};
use crate::error::{Error, Result};
use crate::heisenberg::heisenberg_unitary;
use crate::spin_algebra::{pauli, ComplexOperator, C64};

/// Operator `T` of the optimal 2-to-1 universal NOT, on qubit ⊗ qubit ⊗ output,
/// acting as `X ↦ Tr_12[(X ⊗ I) T]`.
fn unot_operator() -> ComplexOperator {
    let id = ComplexOperator::identity(2);
    let mut t = id.kron(&id).kron(&id);
    for s in pauli() {
        let term = s.kron(&s).kron(&id) - s.kron(&id).kron(&s) - id.kron(&s).kron(&s);
        t += term * (1.0 / 3.0);
    }
    t * (3.0 / 8.0)
}

/// Optimal 2-to-1 universal NOT applied to an operator on two qubits.
///
/// Identical pure inputs with Bloch vector `r` map to Bloch vector `−r/2`.
pub fn universal_not(x: &ComplexOperator) -> Result<ComplexOperator> {
    if !x.is_square() || x.rows() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: x.rows() });
    }
    let t = unot_operator();
    Ok(ComplexOperator::from_fn(2, 2, |k, l| {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..4 {
            for ip in 0..4 {
                acc += x[(i, ip)] * t[(ip * 2 + k, i * 2 + l)];
            }
        }
        acc
    }))
}

/// Singlet projector on two qubits.
fn singlet_projector() -> ComplexOperator {
    let r = 0.5f64.sqrt();
    let s = ComplexOperator::ket(&[C64::new(0.0, 0.0), C64::new(r, 0.0), C64::new(-r, 0.0), C64::new(0.0, 0.0)]);
    ComplexOperator::outer(&s, &s)
}

/// The `j = 1/2` strategy: a yes/no measurement on memory ⊗ target, the
/// Heisenberg gate on "yes" and the universal NOT on "no".
#[derive(Clone, Debug)]
pub struct UNotMixtureChannel {
    alpha: f64,
    gate: ComplexOperator,
    m_yes: ComplexOperator,
    m_no: ComplexOperator,
}

impl UNotMixtureChannel {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Kraus operators `(M_yes, M_no)` of the measurement.
    pub fn measurement(&self) -> (&ComplexOperator, &ComplexOperator) {
        (&self.m_yes, &self.m_no)
    }
}

pub fn unot_mixture_channel(alpha: f64, theta: f64) -> Result<UNotMixtureChannel> {
    if !(0.0..=2.0 / 3.0 + 1e-12).contains(&alpha) {
        return Err(Error::OutOfRange { name: "alpha", value: alpha, expected: "[0, 2/3]" });
    }
    let p0 = singlet_projector();
    let p1 = ComplexOperator::identity(4) - p0.clone();
    let m_yes = &p1 * (1.0 - 4.0 * alpha / 3.0).max(0.0).sqrt() + p0.clone();
    let m_no = &p1 * (4.0 * alpha / 3.0).sqrt();
    let gate = heisenberg_unitary(1, 1, theta)?.matrix();
    Ok(UNotMixtureChannel { alpha, gate, m_yes, m_no })
}

impl Channel for UNotMixtureChannel {
    fn probe_dim(&self) -> usize {
        2
    }

    fn target_dim(&self) -> usize {
        2
    }

    fn apply(&self, rho: &ComplexOperator) -> Result<ComplexOperator> {
        if rho.rows() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, found: rho.rows() });
        }
        let yes = &(&self.m_yes * rho) * &self.m_yes.adjoint();
        let evolved = &(&self.gate * &yes) * &self.gate.adjoint();
        let kept = partial_trace(&evolved, &[2, 2], &[1])?;
        let no = &(&self.m_no * rho) * &self.m_no.adjoint();
        Ok(kept + universal_not(&no)?)
    }
}
