use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::stats::{FidelityEstimate, RunningStats};
use super::target_gate;
use crate::error::{Error, Result};
use crate::spin_algebra::{haar_rotation, ComplexOperator, Rotation, SpinLabel, SpinRep, C64};

/// Samples per independently seeded sub-stream. Results depend on the seed and
/// this partition only, never on the number of worker threads.
pub const MC_CHUNK: u64 = 4096;

/// A learning strategy realized operationally: it sees the rotated probe and
/// produces the target output state, without reference to any fidelity formula.
pub trait Learner: Send + Sync {
    fn memory_spin(&self) -> SpinLabel;

    fn target_spin(&self) -> SpinLabel;

    /// Probe state before the unknown rotation. Mixed probes are sampled.
    fn probe(&self, rng: &mut dyn RngCore) -> ComplexOperator;

    /// Output density matrix for target input `psi`, given the rotated probe.
    ///
    /// `g` is the true rotation; only the exact-target reference strategy reads it.
    fn output(&self, probe: &ComplexOperator, g: &Rotation, psi: &ComplexOperator, rng: &mut dyn RngCore) -> Result<ComplexOperator>;
}

/// Uniformly random pure state (normalized complex Gaussian vector).
pub fn random_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexOperator {
    loop {
        let amps: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let n = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-150 {
            return ComplexOperator::ket(&amps.iter().map(|z| z / n).collect::<Vec<_>>());
        }
    }
}

struct SampleContext {
    memory: SpinRep,
    target: SpinRep,
    v_theta: ComplexOperator,
}

impl SampleContext {
    fn new(learner: &dyn Learner, theta: f64) -> Self {
        Self {
            memory: SpinRep::new(learner.memory_spin()),
            target: SpinRep::new(learner.target_spin()),
            v_theta: target_gate(learner.target_spin(), theta),
        }
    }

    fn sample(&self, learner: &dyn Learner, g: &Rotation, rng: &mut ChaCha8Rng) -> Result<f64> {
        let probe = &self.memory.irrep(g) * learner.probe(rng);
        let psi = random_pure_state(self.target.spin().dim(), rng);
        let rho = learner.output(&probe, g, &psi, rng)?;
        let ug = self.target.irrep(g);
        let v_g = &(&ug * &self.v_theta) * &ug.adjoint();
        let phi = &v_g * &psi;
        Ok(rho.expectation(&phi).re)
    }
}

/// Pooled estimate of `sample` over `n_samples` draws. Chunk `c` uses the
/// ChaCha8 stream `c` of `seed`, so results do not depend on the thread count.
pub(crate) fn mc_scalar<F>(n_samples: u64, seed: u64, sample: F) -> Result<FidelityEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync,
{
    if n_samples == 0 {
        return Err(Error::OutOfRange { name: "n_samples", value: 0.0, expected: "at least 1" });
    }
    let chunks = n_samples.div_ceil(MC_CHUNK);
    let partial: Vec<Result<RunningStats>> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let len = MC_CHUNK.min(n_samples - chunk * MC_CHUNK);
            let mut stats = RunningStats::new();
            for _ in 0..len {
                stats.push(sample(&mut rng)?);
            }
            Ok(stats)
        })
        .collect();
    let mut total = RunningStats::new();
    for s in partial {
        total.merge(&s?);
    }
    Ok(total.estimate())
}

fn run_chunks(
    learner: &dyn Learner,
    theta: f64,
    n_samples: u64,
    seed: u64,
    fixed_g: Option<Rotation>,
) -> Result<FidelityEstimate> {
    let ctx = SampleContext::new(learner, theta);
    mc_scalar(n_samples, seed, |rng| {
        let g = match fixed_g {
            Some(g) => g,
            None => haar_rotation(rng),
        };
        ctx.sample(learner, &g, rng)
    })
}

/// Haar average over `g` and uniform `ψ` of `⟨ψ|V_{θ,g}† E(probe_g ⊗ ψ) V_{θ,g}|ψ⟩`.
pub fn mc_run(learner: &dyn Learner, theta: f64, n_samples: u64, seed: u64) -> Result<FidelityEstimate> {
    run_chunks(learner, theta, n_samples, seed, None)
}

/// Average over `ψ` only, at a fixed training rotation `g`.
pub fn mc_fidelity_at(learner: &dyn Learner, theta: f64, g: &Rotation, n_samples: u64, seed: u64) -> Result<FidelityEstimate> {
    run_chunks(learner, theta, n_samples, seed, Some(*g))
}

/// Monte-Carlo average fidelity of a named strategy. One `u64` seed is drawn
/// from `rng`; every sub-stream derives from it.
pub fn mc_average_fidelity<R: Rng + ?Sized>(
    strategy: &super::StrategyDescriptor,
    theta: f64,
    n_samples: u64,
    rng: &mut R,
) -> Result<FidelityEstimate> {
    let learner = super::realize(strategy, theta)?;
    let seed: u64 = rng.random();
    mc_run(learner.as_ref(), theta, n_samples, seed)
}
