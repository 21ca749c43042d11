//! Reuse of the memory across several learning rounds and robustness to thermal noise.

mod thermal;
mod tricomi;

pub use thermal::{thermal_advantage_threshold, thermal_asymptote, thermal_fidelity, thermal_state};
pub use tricomi::{linearized_distribution, recycling_asymptote, tricomi_distribution};

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::channel_core::average_from_entanglement;
use crate::error::{Error, Result};
use crate::heisenberg::{f_angle, HeisenbergGate};
use crate::mo_benchmark::mo_optimal_fidelity;
use crate::quantum_optimal::Problem;
use crate::spin_algebra::{SpinLabel, C64};
use crate::tolerance;

/// Populations of the memory over `|j,m⟩`, stored in basis order `m = j, …, −j`.
#[derive(Clone, Debug, PartialEq)]
pub struct MemoryDistribution {
    spin: SpinLabel,
    probabilities: Vec<f64>,
}

impl MemoryDistribution {
    pub fn new(spin: SpinLabel, probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.len() != spin.dim() {
            return Err(Error::DimensionMismatch { expected: spin.dim(), found: probabilities.len() });
        }
        if let Some(&p) = probabilities.iter().find(|&&p| !(p >= -1e-12)) {
            return Err(Error::ConstraintViolation(format!("negative weight {p:e}")));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > tolerance::DISTRIBUTION {
            return Err(Error::ConstraintViolation(format!("weights sum to {total}")));
        }
        Ok(Self { spin, probabilities })
    }

    pub fn point_mass(spin: SpinLabel, two_m: i32) -> Result<Self> {
        let mut p = vec![0.0; spin.dim()];
        p[spin.index_of(two_m)?] = 1.0;
        Ok(Self { spin, probabilities: p })
    }

    pub fn spin(&self) -> SpinLabel {
        self.spin
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn weight(&self, two_m: i32) -> Result<f64> {
        Ok(self.probabilities[self.spin.index_of(two_m)?])
    }

    /// `(two_m, weight)` pairs in basis order.
    pub fn iter(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        self.probabilities.iter().enumerate().map(|(i, &p)| (self.spin.two_m_at(i), p))
    }

    pub fn total_variation(&self, other: &Self) -> Result<f64> {
        if self.spin != other.spin {
            return Err(Error::DimensionMismatch { expected: self.spin.dim(), found: other.spin.dim() });
        }
        Ok(0.5 * self.probabilities.iter().zip(&other.probabilities).map(|(a, b)| (a - b).abs()).sum::<f64>())
    }
}

/// Which transition rates drive the recycling chain.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelForm {
    /// Rates proportional to `1 − cos θ − sin²θ/(2j)`.
    #[default]
    LeadingOrder,
    /// Rates proportional to `1 − cos f(θ)`, as produced by the gate itself.
    Exact,
}

/// Transition probabilities `(m → m−1, m → m+1)` for every basis index.
fn rates(kernel: KernelForm, spin: SpinLabel, theta: f64) -> Vec<(f64, f64)> {
    let j = spin.j();
    let strength = match kernel {
        KernelForm::LeadingOrder => 1.0 - theta.cos() - theta.sin().powi(2) / (2.0 * j),
        KernelForm::Exact => 1.0 - f_angle(spin, theta).cos(),
    };
    rates_with_strength(spin, strength)
}

fn rates_with_strength(spin: SpinLabel, strength: f64) -> Vec<(f64, f64)> {
    let j = spin.j();
    let d2 = (2.0 * j + 1.0).powi(2);
    spin.two_m_values()
        .map(|two_m| {
            let m = f64::from(two_m) / 2.0;
            let down = (j + m) * (1.0 + j - m) / d2 * strength;
            let up = (j - m) * (1.0 + j + m) / d2 * strength;
            (down, up)
        })
        .collect()
}

/// One tridiagonal step; index `i+1` is `m−1`.
fn evolve(p: &[f64], rates: &[(f64, f64)]) -> Vec<f64> {
    let n = p.len();
    (0..n)
        .map(|i| {
            let (down, up) = rates[i];
            let mut v = p[i] * (1.0 - down - up);
            if i > 0 {
                v += p[i - 1] * rates[i - 1].0;
            }
            if i + 1 < n {
                v += p[i + 1] * rates[i + 1].1;
            }
            v
        })
        .collect()
}

fn check_angle(theta: f64) -> Result<()> {
    if (0.0..TAU).contains(&theta) {
        Ok(())
    } else {
        Err(Error::OutOfRange { name: "theta", value: theta, expected: "[0, 2π)" })
    }
}

/// One use of the memory followed by discarding the target, with the leading-order rates.
pub fn complementary_step(spin: SpinLabel, theta: f64, dist: &MemoryDistribution) -> Result<MemoryDistribution> {
    complementary_step_with(KernelForm::LeadingOrder, spin, theta, dist)
}

pub fn complementary_step_with(kernel: KernelForm, spin: SpinLabel, theta: f64, dist: &MemoryDistribution) -> Result<MemoryDistribution> {
    check_angle(theta)?;
    if dist.spin != spin {
        return Err(Error::DimensionMismatch { expected: spin.dim(), found: dist.spin.dim() });
    }
    MemoryDistribution::new(spin, evolve(&dist.probabilities, &rates(kernel, spin, theta)))
}

/// Memory populations after `Tr_target[U (ρ ⊗ I/2) U†]`, computed from the gate matrix.
pub fn gate_complementary_step(gate: &HeisenbergGate, dist: &MemoryDistribution) -> Result<MemoryDistribution> {
    let spin = gate.memory();
    if dist.spin != spin || gate.target() != SpinLabel::HALF {
        return Err(Error::DimensionMismatch { expected: spin.dim() * 2, found: dist.spin.dim() * gate.target().dim() });
    }
    let mut out = vec![0.0; spin.dim()];
    for (i, &p) in dist.probabilities.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        for a in 0..2 {
            let mut ket = crate::spin_algebra::ComplexOperator::zeros(gate.dim(), 1);
            ket[(i * 2 + a, 0)] = C64::new(1.0, 0.0);
            let psi = gate.apply(&ket)?;
            for (r, slot) in out.iter_mut().enumerate() {
                *slot += 0.5 * p * (psi[(r * 2, 0)].norm_sqr() + psi[(r * 2 + 1, 0)].norm_sqr());
            }
        }
    }
    MemoryDistribution::new(spin, out)
}

/// Average fidelity of the Heisenberg learner with angle `angle` for every memory state `|j,m⟩`.
fn fidelity_profile(spin: SpinLabel, theta: f64, angle: f64) -> Result<Vec<f64>> {
    let gate = HeisenbergGate::with_angle(spin, SpinLabel::HALF, theta, angle)?;
    spin.two_m_values()
        .map(|two_m| Ok(average_from_entanglement(gate.probe_fidelity(two_m, theta)?, 2)))
        .collect()
}

/// Average fidelity of the Heisenberg learner when the memory holds `|j,m⟩`.
pub fn fidelity_given_m(spin: SpinLabel, two_m: i32, theta: f64) -> Result<f64> {
    check_angle(theta)?;
    let gate = HeisenbergGate::with_angle(spin, SpinLabel::HALF, theta, f_angle(spin, theta))?;
    Ok(average_from_entanglement(gate.probe_fidelity(two_m, theta)?, 2))
}

/// Leading-order fidelity `1 − (1+2j−2m)(1−cos θ)/(3j)`.
pub fn fidelity_given_m_asymptote(spin: SpinLabel, two_m: i32, theta: f64) -> f64 {
    let j = spin.j();
    1.0 - (1.0 + 2.0 * j - f64::from(two_m)) * (1.0 - theta.cos()) / (3.0 * j)
}

/// Fidelity sequence under repeated use of one memory, starting from `|j,j⟩`.
struct Recycler {
    rates: Vec<(f64, f64)>,
    profile: Vec<f64>,
    p: Vec<f64>,
}

impl Recycler {
    fn new(kernel: KernelForm, spin: SpinLabel, theta: f64) -> Result<Self> {
        check_angle(theta)?;
        if spin.two_j() == 0 {
            return Err(Error::InvalidQuantumNumbers("memory spin must be at least 1/2".into()));
        }
        let rates = rates(kernel, spin, theta);
        if let Some((down, up)) = rates.iter().find(|(d, u)| !(*d >= 0.0 && *u >= 0.0 && d + u <= 1.0)) {
            return Err(Error::ConstraintViolation(format!("{kernel:?} rates ({down}, {up}) are not probabilities at θ={theta}")));
        }
        let mut p = vec![0.0; spin.dim()];
        p[0] = 1.0;
        Ok(Self { rates, profile: fidelity_profile(spin, theta, f_angle(spin, theta))?, p })
    }

    fn next_fidelity(&mut self) -> f64 {
        let f = self.p.iter().zip(&self.profile).map(|(p, f)| p * f).sum();
        self.p = evolve(&self.p, &self.rates);
        f
    }
}

fn check_uses(n_uses: usize) -> Result<()> {
    if n_uses == 0 {
        return Err(Error::OutOfRange { name: "n_uses", value: 0.0, expected: ">= 1" });
    }
    Ok(())
}

/// `F(j, θ, t)` for `t = 1..=n_uses`, with the leading-order rates.
pub fn recycled_fidelity(spin: SpinLabel, theta: f64, n_uses: usize) -> Result<Vec<f64>> {
    recycled_fidelity_with(KernelForm::LeadingOrder, spin, theta, n_uses)
}

pub fn recycled_fidelity_with(kernel: KernelForm, spin: SpinLabel, theta: f64, n_uses: usize) -> Result<Vec<f64>> {
    check_uses(n_uses)?;
    let mut r = Recycler::new(kernel, spin, theta)?;
    Ok((0..n_uses).map(|_| r.next_fidelity()).collect())
}

/// Recycling where the interaction angle is re-chosen before every use to
/// maximize the fidelity on the current memory populations.
pub fn recycled_fidelity_reoptimized(spin: SpinLabel, theta: f64, n_uses: usize) -> Result<Vec<f64>> {
    check_uses(n_uses)?;
    check_angle(theta)?;
    let mut p = MemoryDistribution::point_mass(spin, spin.two_j() as i32)?.probabilities;
    let score = |p: &[f64], angle: f64| -> Result<f64> {
        Ok(fidelity_profile(spin, theta, angle)?.iter().zip(p).map(|(f, w)| f * w).sum())
    };
    let mut out = Vec::with_capacity(n_uses);
    for _ in 0..n_uses {
        let grid = 64;
        let mut best = (f_angle(spin, theta), score(&p, f_angle(spin, theta))?);
        for k in 0..grid {
            let a = TAU * k as f64 / grid as f64;
            let s = score(&p, a)?;
            if s > best.1 {
                best = (a, s);
            }
        }
        // Golden-section refinement around the best grid point.
        let (mut lo, mut hi) = (best.0 - TAU / grid as f64, best.0 + TAU / grid as f64);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..60 {
            let (a, b) = (hi - g * (hi - lo), lo + g * (hi - lo));
            if score(&p, a)? > score(&p, b)? {
                hi = b;
            } else {
                lo = a;
            }
        }
        let angle = 0.5 * (lo + hi);
        let s = score(&p, angle)?;
        let angle = if s >= best.1 { angle } else { best.0 };
        out.push(s.max(best.1));
        p = evolve(&p, &rates_with_strength(spin, 1.0 - angle.cos()));
    }
    Ok(out)
}

/// Number of uses over which a quantity stays above its reference.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Horizon {
    pub steps: usize,
    /// True when the search stopped at `t_max` without the condition failing.
    pub capped: bool,
}

/// Persistence of the quantum advantage with the leading-order value `j/(1−cos θ)`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Persistence {
    pub horizon: Horizon,
    pub asymptote: f64,
}

fn horizon(mut r: Recycler, t_max: usize, keep: impl Fn(f64) -> bool) -> Horizon {
    for t in 0..t_max {
        if !keep(r.next_fidelity()) {
            return Horizon { steps: t, capped: false };
        }
    }
    Horizon { steps: t_max, capped: true }
}

/// Largest `t` with `F(j,θ,t)` strictly above the measure-and-operate optimum.
pub fn persistence(spin: SpinLabel, theta: f64, t_max: usize) -> Result<Persistence> {
    persistence_with(KernelForm::LeadingOrder, spin, theta, t_max)
}

pub fn persistence_with(kernel: KernelForm, spin: SpinLabel, theta: f64, t_max: usize) -> Result<Persistence> {
    if !(theta > 0.0 && theta < TAU) {
        return Err(Error::OutOfRange { name: "theta", value: theta, expected: "(0, 2π)" });
    }
    let benchmark = mo_optimal_fidelity(spin, theta, Problem::Problem1)?.fidelity;
    let r = Recycler::new(kernel, spin, theta)?;
    Ok(Persistence { horizon: horizon(r, t_max, |f| f > benchmark), asymptote: spin.j() / (1.0 - theta.cos()) })
}

/// Largest `t` with `F(j,θ,t) ≥ threshold`.
pub fn longevity(spin: SpinLabel, theta: f64, threshold: f64, t_max: usize) -> Result<Horizon> {
    if !(threshold > 1.0 / 3.0 && threshold < 1.0) {
        return Err(Error::OutOfRange { name: "threshold", value: threshold, expected: "(1/3, 1)" });
    }
    let r = Recycler::new(KernelForm::LeadingOrder, spin, theta)?;
    Ok(horizon(r, t_max, |f| f >= threshold))
}
