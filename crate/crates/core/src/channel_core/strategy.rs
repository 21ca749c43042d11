use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::{target_gate, Channel, ChoiChannel, Learner};
use crate::error::{Error, Result};
use crate::heisenberg::{heisenberg_unitary, HeisenbergGate};
use crate::memory_dynamics::thermal_state;
use crate::mo_benchmark::{MOParams, MoLearner};
use crate::quantum_optimal::{case_fidelity, covariant_choi_build, discrete_xyz_strategy, unot_mixture_channel};
use crate::spin_algebra::{ComplexOperator, Rotation, SpinLabel, SpinRep, C64};

/// A concrete learning strategy, by name and parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StrategyDescriptor {
    /// Heisenberg interaction between a `|j,j⟩` memory and a spin-k target.
    Heisenberg { two_j: u32, two_k: u32, angle_override: Option<f64> },
    /// Stationary point of the covariant family, built as an explicit Choi operator.
    CaseChoi { case: u8, two_j: u32, two_m: i32, theta: f64 },
    /// Covariant measurement with seed `|j,n⟩` followed by a rotation by `theta_prime`.
    MoStrategy { two_j: u32, two_m: i32, xi_two_n: i32, theta_prime: f64 },
    /// `j = 1/2` mixture of the Heisenberg gate and the universal NOT.
    UNotMixture { alpha: f64 },
    /// Three-outcome Cartesian measurement for `j = 1`.
    DiscreteXyz,
    /// The inner strategy fed with a thermal memory instead of `|j,j⟩`.
    ThermalWrapped { inner: Box<StrategyDescriptor>, gamma: f64 },
    /// Reference learner that applies the true rotation; fidelity one.
    ExactTarget { two_k: u32 },
}

/// Learner given by a channel on `memory ⊗ target` and a fixed probe.
pub struct ChannelLearner {
    channel: Box<dyn Channel + Send + Sync>,
    memory: SpinLabel,
    target: SpinLabel,
    probe: ComplexOperator,
}

impl ChannelLearner {
    pub fn new(channel: Box<dyn Channel + Send + Sync>, memory: SpinLabel, target: SpinLabel, probe: ComplexOperator) -> Result<Self> {
        if channel.probe_dim() != memory.dim() || probe.rows() != memory.dim() {
            return Err(Error::DimensionMismatch { expected: memory.dim(), found: probe.rows() });
        }
        if channel.target_dim() != target.dim() {
            return Err(Error::DimensionMismatch { expected: target.dim(), found: channel.target_dim() });
        }
        Ok(Self { channel, memory, target, probe })
    }
}

impl Learner for ChannelLearner {
    fn memory_spin(&self) -> SpinLabel {
        self.memory
    }

    fn target_spin(&self) -> SpinLabel {
        self.target
    }

    fn probe(&self, _rng: &mut dyn RngCore) -> ComplexOperator {
        self.probe.clone()
    }

    fn output(&self, probe: &ComplexOperator, _g: &Rotation, psi: &ComplexOperator, _rng: &mut dyn RngCore) -> Result<ComplexOperator> {
        self.channel.apply_pure(probe, psi)
    }
}

/// Heisenberg gate applied blockwise, memory discarded.
struct GateLearner {
    gate: HeisenbergGate,
    probe: ComplexOperator,
}

impl Learner for GateLearner {
    fn memory_spin(&self) -> SpinLabel {
        self.gate.memory()
    }

    fn target_spin(&self) -> SpinLabel {
        self.gate.target()
    }

    fn probe(&self, _rng: &mut dyn RngCore) -> ComplexOperator {
        self.probe.clone()
    }

    fn output(&self, probe: &ComplexOperator, _g: &Rotation, psi: &ComplexOperator, _rng: &mut dyn RngCore) -> Result<ComplexOperator> {
        let out = self.gate.apply(&probe.kron(psi))?;
        let dk = self.gate.target().dim();
        let dm = self.gate.memory().dim();
        Ok(ComplexOperator::from_fn(dk, dk, |k, l| {
            (0..dm).map(|p| out[(p * dk + k, 0)] * out[(p * dk + l, 0)].conj()).sum()
        }))
    }
}

/// Applies `V_{θ,g}` using the true rotation.
pub struct ExactTarget {
    target: SpinRep,
    v_theta: ComplexOperator,
}

impl ExactTarget {
    pub fn new(target: SpinLabel, theta: f64) -> Self {
        Self { target: SpinRep::new(target), v_theta: target_gate(target, theta) }
    }
}

impl Learner for ExactTarget {
    fn memory_spin(&self) -> SpinLabel {
        SpinLabel::new(0)
    }

    fn target_spin(&self) -> SpinLabel {
        self.target.spin()
    }

    fn probe(&self, _rng: &mut dyn RngCore) -> ComplexOperator {
        ComplexOperator::ket(&[C64::new(1.0, 0.0)])
    }

    fn output(&self, _probe: &ComplexOperator, g: &Rotation, psi: &ComplexOperator, _rng: &mut dyn RngCore) -> Result<ComplexOperator> {
        let u = self.target.irrep(g);
        let out = &(&(&u * &self.v_theta) * &u.adjoint()) * psi;
        Ok(ComplexOperator::outer(&out, &out))
    }
}

/// Wraps a learner so that its memory starts in `|j,m⟩` with thermal weights.
pub struct ThermalLearner {
    inner: Box<dyn Learner>,
    weights: Vec<f64>,
}

impl ThermalLearner {
    pub fn new(inner: Box<dyn Learner>, gamma: f64) -> Result<Self> {
        let dist = thermal_state(inner.memory_spin(), gamma)?;
        Ok(Self { weights: dist.probabilities().to_vec(), inner })
    }
}

impl Learner for ThermalLearner {
    fn memory_spin(&self) -> SpinLabel {
        self.inner.memory_spin()
    }

    fn target_spin(&self) -> SpinLabel {
        self.inner.target_spin()
    }

    fn probe(&self, rng: &mut dyn RngCore) -> ComplexOperator {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut index = self.weights.len() - 1;
        for (i, w) in self.weights.iter().enumerate() {
            acc += w;
            if u < acc {
                index = i;
                break;
            }
        }
        ComplexOperator::basis(self.weights.len(), index)
    }

    fn output(&self, probe: &ComplexOperator, g: &Rotation, psi: &ComplexOperator, rng: &mut dyn RngCore) -> Result<ComplexOperator> {
        self.inner.output(probe, g, psi, rng)
    }
}

/// Builds the operational learner for `strategy` at target angle `theta`.
pub fn realize(strategy: &StrategyDescriptor, theta: f64) -> Result<Box<dyn Learner>> {
    match strategy {
        StrategyDescriptor::Heisenberg { two_j, two_k, angle_override } => {
            let gate = match angle_override {
                Some(angle) => HeisenbergGate::with_angle(SpinLabel::new(*two_j), SpinLabel::new(*two_k), theta, *angle)?,
                None => heisenberg_unitary(*two_j, *two_k, theta)?,
            };
            let probe = gate.memory().ket(*two_j as i32)?;
            Ok(Box::new(GateLearner { gate, probe }))
        }
        StrategyDescriptor::CaseChoi { case, two_j, two_m, theta: design } => {
            let spin = SpinLabel::new(*two_j);
            let (_, params) = case_fidelity(*case, spin, *two_m, *design)?;
            let channel = ChoiChannel::new(covariant_choi_build(&params, spin)?, spin.dim())?;
            Ok(Box::new(ChannelLearner::new(Box::new(channel), spin, SpinLabel::HALF, spin.ket(*two_m)?)?))
        }
        StrategyDescriptor::MoStrategy { two_j, two_m, xi_two_n, theta_prime } => {
            let spin = SpinLabel::new(*two_j);
            let params = MOParams::new(spin, *two_m, *xi_two_n, *theta_prime)?;
            Ok(Box::new(MoLearner::new(spin, params)))
        }
        StrategyDescriptor::UNotMixture { alpha } => {
            let channel = unot_mixture_channel(*alpha, theta)?;
            Ok(Box::new(ChannelLearner::new(Box::new(channel), SpinLabel::HALF, SpinLabel::HALF, SpinLabel::HALF.ket(1)?)?))
        }
        StrategyDescriptor::DiscreteXyz => Ok(Box::new(discrete_xyz_strategy())),
        StrategyDescriptor::ThermalWrapped { inner, gamma } => Ok(Box::new(ThermalLearner::new(realize(inner, theta)?, *gamma)?)),
        StrategyDescriptor::ExactTarget { two_k } => {
            if *two_k == 0 {
                return Err(Error::InvalidQuantumNumbers("target spin must be at least 1/2".into()));
            }
            Ok(Box::new(ExactTarget::new(SpinLabel::new(*two_k), theta)))
        }
    }
}
