use serde::{Deserialize, Serialize};

/// A fidelity value with its Monte-Carlo uncertainty. `n_samples == 0` marks an exact value.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: u64,
}

impl FidelityEstimate {
    pub fn exact(value: f64) -> Self {
        Self { value, std_error: 0.0, n_samples: 0 }
    }

    pub fn is_exact(&self) -> bool {
        self.n_samples == 0
    }

    /// `|value − expected| ≤ sigmas · std_error`, with a rounding floor for exact or zero-variance estimates.
    pub fn agrees_with(&self, expected: f64, sigmas: f64) -> bool {
        (self.value - expected).abs() <= sigmas * self.std_error + 1e-12
    }

    /// Number of standard errors separating the estimate from `expected`.
    pub fn z_score(&self, expected: f64) -> f64 {
        if self.std_error == 0.0 {
            if (self.value - expected).abs() <= 1e-12 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.value - expected) / self.std_error
        }
    }

    /// Affine map `F ↦ (d F + 1)/(d + 1)` applied to value and error.
    pub fn to_average(&self, target_dim: usize) -> Self {
        let d = target_dim as f64;
        Self {
            value: super::average_from_entanglement(self.value, target_dim),
            std_error: self.std_error * d / (d + 1.0),
            n_samples: self.n_samples,
        }
    }
}

/// Streaming mean and variance (Welford), mergeable in a fixed order (Chan et al.).
#[derive(Copy, Clone, Debug, Default, PartialEq)]
pub struct RunningStats {
    n: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Self) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let (na, nb) = (self.n as f64, other.n as f64);
        self.mean += delta * nb / n as f64;
        self.m2 += other.m2 + delta * delta * na * nb / n as f64;
        self.n = n;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.m2 / (self.n - 1) as f64).max(0.0)
        }
    }

    pub fn estimate(&self) -> FidelityEstimate {
        let se = if self.n == 0 { 0.0 } else { (self.variance() / self.n as f64).sqrt() };
        FidelityEstimate { value: self.mean, std_error: se, n_samples: self.n }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn welford_matches_two_pass() {
        let xs: Vec<f64> = (0..1000).map(|k| ((k * 37) % 101) as f64 / 101.0).collect();
        let mut s = RunningStats::new();
        xs.iter().for_each(|&x| s.push(x));
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
        assert_relative_eq!(s.mean(), mean, epsilon = 1e-14);
        assert_relative_eq!(s.variance(), var, epsilon = 1e-14);
    }

    #[test]
    fn average_map_of_estimate() {
        let e = FidelityEstimate { value: 0.25, std_error: 0.03, n_samples: 10 };
        let a = e.to_average(2);
        assert_relative_eq!(a.value, 0.5, epsilon = 1e-15);
        assert_relative_eq!(a.std_error, 0.02, epsilon = 1e-15);
    }

    proptest! {
        #[test]
        fn merge_equals_sequential(xs in prop::collection::vec(0.0f64..1.0, 2..200), split in 0usize..200) {
            let split = split.min(xs.len());
            let mut all = RunningStats::new();
            xs.iter().for_each(|&x| all.push(x));
            let (mut a, mut b) = (RunningStats::new(), RunningStats::new());
            xs[..split].iter().for_each(|&x| a.push(x));
            xs[split..].iter().for_each(|&x| b.push(x));
            a.merge(&b);
            prop_assert_eq!(a.count(), all.count());
            prop_assert!((a.mean() - all.mean()).abs() < 1e-12);
            prop_assert!((a.variance() - all.variance()).abs() < 1e-12);
        }
    }
}
