use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::MOParams;
use crate::channel_core::{mc_scalar, FidelityEstimate, Learner};
use crate::error::{Error, Result};
use crate::spin_algebra::{haar_rotation, ComplexOperator, Rotation, SpinLabel, SpinRep, C64};

/// `cos(θ′/2) I − i sin(θ′/2) n·σ`.
fn rotation_about(n: [f64; 3], angle: f64) -> ComplexOperator {
    let (s, c) = (0.5 * angle).sin_cos();
    ComplexOperator::from_row_major(
        2,
        2,
        &[
            C64::new(c, -s * n[2]),
            C64::new(-s * n[1], -s * n[0]),
            C64::new(s * n[1], -s * n[0]),
            C64::new(c, s * n[2]),
        ],
    )
    .expect("2×2")
}

/// Measure-and-operate learner: samples the covariant POVM by rejection and
/// rotates the target by `θ′` about the estimated axis.
pub struct MoLearner {
    rep: SpinRep,
    params: MOParams,
    seed_index: usize,
}

impl MoLearner {
    pub fn new(spin: SpinLabel, params: MOParams) -> Self {
        let seed_index = spin.index_of(params.xi_two_n).expect("validated by MOParams");
        Self { rep: SpinRep::new(spin), params, seed_index }
    }

    /// Draws an estimate `ĝ` with density `(2j+1)|⟨ξ|U_ĝ†|probe⟩|²`.
    fn estimate(&self, probe: &ComplexOperator, rng: &mut dyn RngCore) -> Rotation {
        loop {
            let g = haar_rotation(rng);
            let u = self.rep.irrep(&g);
            let amp: C64 = (0..probe.rows()).map(|k| u[(k, self.seed_index)].conj() * probe[(k, 0)]).sum();
            if rng.random::<f64>() < amp.norm_sqr() {
                return g;
            }
        }
    }
}

impl Learner for MoLearner {
    fn memory_spin(&self) -> SpinLabel {
        self.rep.spin()
    }

    fn target_spin(&self) -> SpinLabel {
        SpinLabel::HALF
    }

    fn probe(&self, _rng: &mut dyn RngCore) -> ComplexOperator {
        self.rep.spin().ket(self.params.two_m).expect("validated by MOParams")
    }

    fn output(&self, probe: &ComplexOperator, _g: &Rotation, psi: &ComplexOperator, rng: &mut dyn RngCore) -> Result<ComplexOperator> {
        let estimate = self.estimate(probe, rng);
        let out = &rotation_about(estimate.z_axis(), self.params.theta_prime) * psi;
        Ok(ComplexOperator::outer(&out, &out))
    }
}

/// Monte-Carlo average fidelity of a measure-and-operate strategy.
///
/// Estimates are drawn exactly from the POVM density by rejection; each sample
/// scores the entanglement fidelity `|Tr(V_θ† V_{θ′,ĝ})|²/4` of the applied gate.
/// By covariance the true rotation is fixed to the identity.
pub fn mo_mc_oracle<R: Rng + ?Sized>(
    spin: SpinLabel,
    params: MOParams,
    theta: f64,
    n_samples: u64,
    rng: &mut R,
) -> Result<FidelityEstimate> {
    let rep = SpinRep::new(spin);
    let row = spin.index_of(params.two_m)?;
    let col = spin.index_of(params.xi_two_n)?;
    let (s, c) = (0.5 * theta).sin_cos();
    let (sp, cp) = (0.5 * params.theta_prime).sin_cos();
    let seed: u64 = rng.random();
    let est = mc_scalar(n_samples, seed, |rng| {
        let g = loop {
            let g = haar_rotation(rng);
            let d = rep.small_d(g.euler_zyz().beta);
            if rng.random::<f64>() < d[(row, col)].norm_sqr() {
                break g;
            }
        };
        let nz = g.z_axis()[2];
        Ok((c * cp + s * sp * nz).powi(2))
    })?;
    Ok(est.to_average(2))
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinKMoEstimate {
    /// Monte-Carlo average fidelity.
    pub estimate: FidelityEstimate,
    /// Leading-order average fidelity `1 − 2k(2k+1)(1−cosθ)/(3j)`.
    pub asymptote: f64,
}

/// `|χ_k(ω)|²` for the SU(2) element with scalar quaternion part `w`.
fn character_sqr(two_k: u32, w: f64) -> f64 {
    let omega = 2.0 * w.clamp(-1.0, 1.0).acos();
    let mut chi = 0.0;
    let mut two_mu = -(two_k as i32);
    while two_mu <= two_k as i32 {
        chi += (0.5 * f64::from(two_mu) * omega).cos();
        two_mu += 2;
    }
    chi * chi
}

/// Measure-and-operate baseline for a spin-k target: coherent-state POVM on
/// `|j,j⟩`, then the rotation by `θ` about the estimated axis.
pub fn spin_k_mo_fidelity<R: Rng + ?Sized>(two_j: u32, two_k: u32, theta: f64, n_samples: u64, rng: &mut R) -> Result<SpinKMoEstimate> {
    if two_k == 0 {
        return Err(Error::InvalidQuantumNumbers("target spin must be at least 1/2".into()));
    }
    if two_j == 0 {
        return Err(Error::InvalidQuantumNumbers("memory spin must be at least 1/2".into()));
    }
    let dk = f64::from(two_k + 1);
    let (s, c) = (0.5 * theta).sin_cos();
    let exponent = 1.0 / f64::from(two_j + 1);
    let seed: u64 = rng.random();
    let est = mc_scalar(n_samples, seed, |rng| {
        // Polar angle of the estimated axis has density ∝ cos^{4j}(φ/2).
        let cos_phi = 2.0 * rng.random::<f64>().powf(exponent) - 1.0;
        let w = c * c + s * s * cos_phi;
        Ok(character_sqr(two_k, w) / (dk * dk))
    })?;
    let j = f64::from(two_j) / 2.0;
    let k = f64::from(two_k) / 2.0;
    Ok(SpinKMoEstimate {
        estimate: est.to_average(two_k as usize + 1),
        asymptote: 1.0 - 2.0 * k * (2.0 * k + 1.0) * (1.0 - theta.cos()) / (3.0 * j),
    })
}
