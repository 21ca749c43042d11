use rand::RngCore;

use crate::channel_core::Learner;
use crate::error::{Error, Result};
use crate::spin_algebra::{pauli, ComplexOperator, Rotation, SpinLabel, C64};

/// Measure-and-operate strategy for `j = 1`: probe `|1,0⟩`, measure in the
/// Cartesian basis `{|x⟩, |y⟩, |z⟩}` (zero eigenvectors of `Jx`, `Jy`, `Jz`),
/// then rotate the target by `π` about the observed axis.
#[derive(Clone, Debug)]
pub struct DiscreteXyz {
    basis: [ComplexOperator; 3],
    corrections: [ComplexOperator; 3],
}

pub fn discrete_xyz_strategy() -> DiscreteXyz {
    let r = 0.5f64.sqrt();
    let (z0, one) = (C64::new(0.0, 0.0), C64::new(r, 0.0));
    let basis = [
        ComplexOperator::ket(&[one, z0, -one]),
        ComplexOperator::ket(&[one, z0, one]),
        ComplexOperator::ket(&[z0, C64::new(1.0, 0.0), z0]),
    ];
    let corrections = pauli().map(|s| s.scale(C64::new(0.0, -1.0)));
    DiscreteXyz { basis, corrections }
}

impl DiscreteXyz {
    /// Projectors onto the three outcomes.
    pub fn projectors(&self) -> [ComplexOperator; 3] {
        self.basis.clone().map(|v| ComplexOperator::outer(&v, &v))
    }

    /// Outcome probabilities for a memory state.
    pub fn outcome_probabilities(&self, memory: &ComplexOperator) -> Result<[f64; 3]> {
        if memory.rows() != 3 || memory.cols() != 1 {
            return Err(Error::DimensionMismatch { expected: 3, found: memory.rows() });
        }
        Ok(self.basis.clone().map(|v| ComplexOperator::inner(&v, memory).norm_sqr()))
    }
}

impl Learner for DiscreteXyz {
    fn memory_spin(&self) -> SpinLabel {
        SpinLabel::ONE
    }

    fn target_spin(&self) -> SpinLabel {
        SpinLabel::HALF
    }

    fn probe(&self, _rng: &mut dyn RngCore) -> ComplexOperator {
        SpinLabel::ONE.ket(0).expect("m = 0 exists for j = 1")
    }

    fn output(&self, probe: &ComplexOperator, _g: &Rotation, psi: &ComplexOperator, _rng: &mut dyn RngCore) -> Result<ComplexOperator> {
        let probs = self.outcome_probabilities(probe)?;
        let mut rho = ComplexOperator::zeros(2, 2);
        for (p, w) in probs.iter().zip(&self.corrections) {
            let out = w * psi;
            rho += ComplexOperator::outer(&out, &out) * *p;
        }
        Ok(rho)
    }
}
