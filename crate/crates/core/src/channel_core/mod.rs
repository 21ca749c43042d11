//! Quantum channels on `probe ⊗ target`, their Choi operators, and fidelities.
//!
//! Choi operators use the convention `C = Σ_{ij} |i⟩⟨j| ⊗ E(|i⟩⟨j|)` on
//! `input ⊗ output`, so that `Tr_out C = I_in` for trace-preserving maps.

mod montecarlo;
mod stats;
mod strategy;
mod tensor;

pub use montecarlo::{mc_average_fidelity, mc_fidelity_at, mc_run, random_pure_state, Learner, MC_CHUNK};
pub(crate) use montecarlo::mc_scalar;
pub use strategy::{realize, ChannelLearner, ExactTarget, StrategyDescriptor, ThermalLearner};
pub use stats::{FidelityEstimate, RunningStats};
pub use tensor::{partial_trace, permute_subsystems};

use crate::error::{Error, Result};
use crate::spin_algebra::{ComplexOperator, SpinLabel, C64};
use crate::tolerance;

/// Choi operator of a map from `dim_in` to `dim_out` dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiOperator {
    matrix: ComplexOperator,
    dim_in: usize,
    dim_out: usize,
}

impl ChoiOperator {
    pub fn new(matrix: ComplexOperator, dim_in: usize, dim_out: usize) -> Result<Self> {
        let n = dim_in * dim_out;
        if !matrix.is_square() || matrix.rows() != n {
            return Err(Error::DimensionMismatch { expected: n, found: matrix.rows() });
        }
        Ok(Self { matrix, dim_in, dim_out })
    }

    /// `C = |U⟩⟩⟨⟨U|` with `|U⟩⟩ = Σ_i |i⟩ ⊗ U|i⟩`.
    pub fn of_unitary(u: &ComplexOperator) -> Self {
        let (d_out, d_in) = (u.rows(), u.cols());
        let v = ComplexOperator::from_fn(d_in * d_out, 1, |r, _| u[(r % d_out, r / d_out)]);
        Self { matrix: ComplexOperator::outer(&v, &v), dim_in: d_in, dim_out: d_out }
    }

    /// Completely depolarizing channel `ρ ↦ Tr(ρ) I/d_out`.
    pub fn depolarizing(dim_in: usize, dim_out: usize) -> Self {
        let matrix = ComplexOperator::identity(dim_in * dim_out) * (1.0 / dim_out as f64);
        Self { matrix, dim_in, dim_out }
    }

    pub fn matrix(&self) -> &ComplexOperator {
        &self.matrix
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.matrix.min_eigenvalue()
    }

    /// Largest entrywise deviation of `Tr_out C` from the identity.
    pub fn trace_preservation_residual(&self) -> f64 {
        let reduced = partial_trace(&self.matrix, &[self.dim_in, self.dim_out], &[0]).expect("dimensions checked at construction");
        reduced.max_abs_diff(&ComplexOperator::identity(self.dim_in))
    }

    /// Checks complete positivity and trace preservation.
    pub fn validate(&self, tol: f64) -> Result<()> {
        if !self.matrix.is_hermitian(tol) {
            return Err(Error::ConstraintViolation("Choi operator is not Hermitian".into()));
        }
        let min = self.min_eigenvalue();
        if min < -tol {
            return Err(Error::ConstraintViolation(format!("Choi operator has eigenvalue {min:e}")));
        }
        let tp = self.trace_preservation_residual();
        if tp > tol {
            return Err(Error::ConstraintViolation(format!("Tr_out C deviates from identity by {tp:e}")));
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate(tolerance::CHOI).is_ok()
    }

    pub fn apply(&self, rho: &ComplexOperator) -> Result<ComplexOperator> {
        apply_choi(self, rho)
    }
}

/// `E(ρ) = Tr_in[(ρ^T ⊗ I) C]`.
pub fn apply_choi(c: &ChoiOperator, rho: &ComplexOperator) -> Result<ComplexOperator> {
    let (din, dout) = (c.dim_in, c.dim_out);
    if !rho.is_square() || rho.rows() != din {
        return Err(Error::DimensionMismatch { expected: din, found: rho.rows() });
    }
    let mut out = ComplexOperator::zeros(dout, dout);
    for i in 0..din {
        for j in 0..din {
            let w = rho[(i, j)];
            if w == C64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..dout {
                for l in 0..dout {
                    out[(k, l)] += w * c.matrix[(i * dout + k, j * dout + l)];
                }
            }
        }
    }
    Ok(out)
}

/// A channel from `probe ⊗ target` to an output system of the target's dimension.
pub trait Channel {
    fn probe_dim(&self) -> usize;
    fn target_dim(&self) -> usize;

    fn output_dim(&self) -> usize {
        self.target_dim()
    }

    fn apply(&self, rho: &ComplexOperator) -> Result<ComplexOperator>;

    /// `E(|p⟩⟨p| ⊗ |a⟩⟨b|)` for target basis indices `a`, `b`.
    fn apply_probe_product(&self, probe: &ComplexOperator, a: usize, b: usize) -> Result<ComplexOperator> {
        let d = self.target_dim();
        let x = ComplexOperator::outer(probe, probe).kron(&ComplexOperator::outer(&ComplexOperator::basis(d, a), &ComplexOperator::basis(d, b)));
        self.apply(&x)
    }

    /// `E(|p⟩⟨p| ⊗ |ψ⟩⟨ψ|)`.
    fn apply_pure(&self, probe: &ComplexOperator, psi: &ComplexOperator) -> Result<ComplexOperator> {
        let v = probe.kron(psi);
        self.apply(&ComplexOperator::outer(&v, &v))
    }

    fn choi(&self) -> Result<ChoiOperator> {
        let din = self.probe_dim() * self.target_dim();
        let dout = self.output_dim();
        let mut m = ComplexOperator::zeros(din * dout, din * dout);
        for i in 0..din {
            for j in 0..din {
                let e = ComplexOperator::outer(&ComplexOperator::basis(din, i), &ComplexOperator::basis(din, j));
                let block = self.apply(&e)?;
                for k in 0..dout {
                    for l in 0..dout {
                        m[(i * dout + k, j * dout + l)] = block[(k, l)];
                    }
                }
            }
        }
        ChoiOperator::new(m, din, dout)
    }
}

/// A channel given by its Choi operator, with the input split as `probe ⊗ target`.
#[derive(Clone, Debug)]
pub struct ChoiChannel {
    choi: ChoiOperator,
    probe_dim: usize,
}

impl ChoiChannel {
    pub fn new(choi: ChoiOperator, probe_dim: usize) -> Result<Self> {
        if probe_dim == 0 || choi.dim_in % probe_dim != 0 {
            return Err(Error::DimensionMismatch { expected: choi.dim_in, found: probe_dim });
        }
        Ok(Self { choi, probe_dim })
    }

    pub fn choi_operator(&self) -> &ChoiOperator {
        &self.choi
    }
}

impl Channel for ChoiChannel {
    fn probe_dim(&self) -> usize {
        self.probe_dim
    }

    fn target_dim(&self) -> usize {
        self.choi.dim_in / self.probe_dim
    }

    fn output_dim(&self) -> usize {
        self.choi.dim_out
    }

    fn apply(&self, rho: &ComplexOperator) -> Result<ComplexOperator> {
        apply_choi(&self.choi, rho)
    }

    fn apply_probe_product(&self, probe: &ComplexOperator, a: usize, b: usize) -> Result<ComplexOperator> {
        // Only input rows (p, a) and columns (q, b) contribute.
        let (dp, dt, dout) = (self.probe_dim, self.target_dim(), self.choi.dim_out);
        if probe.rows() != dp {
            return Err(Error::DimensionMismatch { expected: dp, found: probe.rows() });
        }
        let c = self.choi.matrix();
        let mut out = ComplexOperator::zeros(dout, dout);
        for p in 0..dp {
            for q in 0..dp {
                let w = probe[(p, 0)] * probe[(q, 0)].conj();
                if w.norm_sqr() == 0.0 {
                    continue;
                }
                let (i, j) = (p * dt + a, q * dt + b);
                for k in 0..dout {
                    for l in 0..dout {
                        out[(k, l)] += w * c[(i * dout + k, j * dout + l)];
                    }
                }
            }
        }
        Ok(out)
    }

    fn choi(&self) -> Result<ChoiOperator> {
        Ok(self.choi.clone())
    }
}

/// Unitary interaction on `probe ⊗ target` followed by discarding the probe.
#[derive(Clone, Debug)]
pub struct UnitaryChannel {
    u: ComplexOperator,
    probe_dim: usize,
    target_dim: usize,
}

impl UnitaryChannel {
    pub fn new(u: ComplexOperator, probe_dim: usize, target_dim: usize) -> Result<Self> {
        let n = probe_dim * target_dim;
        if !u.is_square() || u.rows() != n {
            return Err(Error::DimensionMismatch { expected: n, found: u.rows() });
        }
        Ok(Self { u, probe_dim, target_dim })
    }

    /// Applies `V` to the target and ignores the probe.
    pub fn target_only(v: &ComplexOperator, probe_dim: usize) -> Result<Self> {
        Self::new(ComplexOperator::identity(probe_dim).kron(v), probe_dim, v.rows())
    }

    pub fn unitary(&self) -> &ComplexOperator {
        &self.u
    }

    fn reduce(&self, x: &ComplexOperator, y: &ComplexOperator) -> ComplexOperator {
        // Tr_probe |x⟩⟨y| for kets on probe ⊗ target.
        let dt = self.target_dim;
        ComplexOperator::from_fn(dt, dt, |k, l| {
            (0..self.probe_dim).map(|p| x[(p * dt + k, 0)] * y[(p * dt + l, 0)].conj()).sum()
        })
    }
}

impl Channel for UnitaryChannel {
    fn probe_dim(&self) -> usize {
        self.probe_dim
    }

    fn target_dim(&self) -> usize {
        self.target_dim
    }

    fn apply(&self, rho: &ComplexOperator) -> Result<ComplexOperator> {
        if rho.rows() != self.u.rows() {
            return Err(Error::DimensionMismatch { expected: self.u.rows(), found: rho.rows() });
        }
        let out = &(&self.u * rho) * &self.u.adjoint();
        partial_trace(&out, &[self.probe_dim, self.target_dim], &[1])
    }

    fn apply_probe_product(&self, probe: &ComplexOperator, a: usize, b: usize) -> Result<ComplexOperator> {
        let dt = self.target_dim;
        let x = &self.u * probe.kron(&ComplexOperator::basis(dt, a));
        let y = &self.u * probe.kron(&ComplexOperator::basis(dt, b));
        Ok(self.reduce(&x, &y))
    }

    fn apply_pure(&self, probe: &ComplexOperator, psi: &ComplexOperator) -> Result<ComplexOperator> {
        let x = &self.u * probe.kron(psi);
        Ok(self.reduce(&x, &x))
    }
}

/// Entanglement fidelity `⟨Φ_V|(E ⊗ I)(p ⊗ Φ⁺)|Φ_V⟩` with `Φ_V = (V ⊗ I)Φ⁺`.
///
/// Computed as `(1/d²) Σ_{ab} ⟨a|V† E(p ⊗ |a⟩⟨b|) V|b⟩`.
pub fn entanglement_fidelity(channel: &dyn Channel, probe: &ComplexOperator, target_unitary: &ComplexOperator) -> Result<FidelityEstimate> {
    let d = channel.target_dim();
    if probe.rows() != channel.probe_dim() || probe.cols() != 1 {
        return Err(Error::DimensionMismatch { expected: channel.probe_dim(), found: probe.rows() });
    }
    if target_unitary.rows() != d || channel.output_dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: target_unitary.rows() });
    }
    let vd = target_unitary.adjoint();
    let mut acc = C64::new(0.0, 0.0);
    for a in 0..d {
        for b in 0..d {
            let e = channel.apply_probe_product(probe, a, b)?;
            // ⟨a|V† E V|b⟩ = Σ_{kl} conj(V_{ka}) E_{kl} V_{lb}
            for k in 0..d {
                for l in 0..d {
                    acc += vd[(a, k)] * e[(k, l)] * target_unitary[(l, b)];
                }
            }
        }
    }
    Ok(FidelityEstimate::exact(acc.re / (d * d) as f64))
}

/// `(d F_e + 1)/(d + 1)`.
pub fn average_from_entanglement(fe: f64, target_dim: usize) -> f64 {
    let d = target_dim as f64;
    (d * fe + 1.0) / (d + 1.0)
}

/// `e^{−iθ Kz}` on a spin-k target: rotation by `theta` about the z axis.
pub fn target_gate(spin: SpinLabel, theta: f64) -> ComplexOperator {
    let phases: Vec<C64> = spin
        .two_m_values()
        .map(|two_m| C64::from_polar(1.0, -theta * f64::from(two_m) / 2.0))
        .collect();
    ComplexOperator::diagonal(&phases)
}
