use num_bigint::BigInt;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};

use super::{check_angle, MemoryDistribution};
use crate::error::{Error, Result};
use crate::spin_algebra::SpinLabel;
use crate::tolerance;

/// `num / 2^shift` rounded to `f64`.
fn ratio_to_f64(num: &BigInt, shift: u64) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let bits = num.bits();
    let drop = bits.saturating_sub(62);
    let mantissa = (num >> drop).to_f64().expect("62-bit value");
    let exp = drop as i64 - shift as i64;
    let half = (exp / 2) as i32;
    mantissa * 2f64.powi(half) * 2f64.powi(exp as i32 - half)
}

/// `Σ_{i=k}^{n} (−1)^{i+k} C(n,i) C(i,k) i! y^i` for `k = 0..=n`, evaluated exactly
/// for the dyadic rational `y`.
pub(crate) fn alternating_weights(y: f64, n: usize) -> Vec<f64> {
    let (mant, exp, _) = y.integer_decode();
    let (a, e) = if exp >= 0 {
        (BigInt::from(mant) << exp as u32, 0u64)
    } else {
        (BigInt::from(mant), u64::from(exp.unsigned_abs()))
    };
    // A_i = C(n,i) i! a^i 2^{e(n−i)}, the common denominator being 2^{e n}.
    let mut big_a = Vec::with_capacity(n + 1);
    let mut falling = BigInt::one();
    let mut a_pow = BigInt::one();
    for i in 0..=n {
        big_a.push((&falling * &a_pow) << (e * (n - i) as u64));
        falling *= n - i;
        a_pow *= &a;
    }
    (0..=n)
        .map(|k| {
            let mut binom = BigInt::one();
            let mut acc = BigInt::zero();
            for (i, ai) in big_a.iter().enumerate().skip(k) {
                if (i + k) % 2 == 0 {
                    acc += &binom * ai;
                } else {
                    acc -= &binom * ai;
                }
                // C(i+1,k) = C(i,k)(i+1)/(i+1−k)
                binom = binom * (i + 1) / (i + 1 - k);
            }
            let value = ratio_to_f64(&acc.abs(), e * n as u64);
            if acc.is_negative() {
                -value
            } else {
                value
            }
        })
        .collect()
}

/// Memory populations after `n` uses from the alternating-sum closed form,
/// with `y = (1 − cos θ)/(2j)` and `j − m` playing the role of `k`.
///
/// The closed form is a probability distribution while `n(1 − cos θ) ≲ 2j`;
/// past that it develops large signed weights and validation fails.
pub fn tricomi_distribution(spin: SpinLabel, theta: f64, n: usize) -> Result<MemoryDistribution> {
    check_angle(theta)?;
    if spin.two_j() == 0 {
        return Err(Error::InvalidQuantumNumbers("memory spin must be at least 1/2".into()));
    }
    let y = (1.0 - theta.cos()) / f64::from(spin.two_j());
    onto_spectrum(spin, &alternating_weights(y, n))
}

/// `k = j − m` after `n` steps of the chain `k → k+1` at rate `(k+1)y`,
/// `k → k−1` at rate `k y`, unbounded in `k`.
fn linearized_chain(y: f64, n: usize) -> Vec<f64> {
    let mut p = vec![0.0; n + 1];
    p[0] = 1.0;
    for _ in 0..n {
        let mut q = vec![0.0; n + 1];
        for k in 0..=n {
            let (kf, pk) = (k as f64, p[k]);
            q[k] += pk * (1.0 - (2.0 * kf + 1.0) * y);
            if k < n {
                q[k + 1] += pk * (kf + 1.0) * y;
            }
            if k > 0 {
                q[k - 1] += pk * kf * y;
            }
        }
        p = q;
    }
    p
}

fn onto_spectrum(spin: SpinLabel, w: &[f64]) -> Result<MemoryDistribution> {
    let mut p = vec![0.0; spin.dim()];
    for (k, &v) in w.iter().enumerate() {
        match p.get_mut(k) {
            Some(slot) => *slot = v,
            None if v.abs() > tolerance::DISTRIBUTION => {
                return Err(Error::Numerical(format!("weight {v:e} at j−m = {k} lies outside the spectrum")));
            }
            None => {}
        }
    }
    MemoryDistribution::new(spin, p)
}

/// The same populations by iterating the large-`j` linearization of the leading-order rates,
/// `y = (1 − cos θ)/(2j)`. Agrees with [`tricomi_distribution`] to rounding.
pub fn linearized_distribution(spin: SpinLabel, theta: f64, n: usize) -> Result<MemoryDistribution> {
    check_angle(theta)?;
    if spin.two_j() == 0 {
        return Err(Error::InvalidQuantumNumbers("memory spin must be at least 1/2".into()));
    }
    onto_spectrum(spin, &linearized_chain((1.0 - theta.cos()) / f64::from(spin.two_j()), n))
}

/// Geometric large-`j` form `r (1−r)^{j−m}` with `r = 2j/(n(1−cos θ)+2j)`, in basis order.
pub fn recycling_asymptote(spin: SpinLabel, theta: f64, n: usize) -> Vec<f64> {
    let two_j = f64::from(spin.two_j());
    let x = n as f64 * (1.0 - theta.cos());
    let r = two_j / (x + two_j);
    (0..spin.dim()).map(|k| r * (x / (x + two_j)).powi(k as i32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::memory_dynamics::complementary_step;
    use std::f64::consts::PI;

    #[test]
    fn zero_uses_is_stretched_state() {
        let spin = SpinLabel::new(10);
        let d = tricomi_distribution(spin, 1.0, 0).unwrap();
        assert_eq!(d, MemoryDistribution::point_mass(spin, 10).unwrap());
    }

    #[test]
    fn small_exact_values() {
        // n = 1: p_0 = 1 − y, p_1 = y.
        let w = alternating_weights(0.125, 1);
        assert_eq!(w, vec![0.875, 0.125]);
        // n = 2: p_0 = 1 − 2y + 2y², p_1 = 2y − 4y², p_2 = 2y².
        let y = 0.1;
        let w = alternating_weights(y, 2);
        assert!((w[0] - (1.0 - 2.0 * y + 2.0 * y * y)).abs() < 1e-15);
        assert!((w[1] - (2.0 * y - 4.0 * y * y)).abs() < 1e-15);
        assert!((w[2] - 2.0 * y * y).abs() < 1e-15);
    }

    #[test]
    fn closed_form_equals_linearized_chain() {
        for two_j in [100u32, 200, 400] {
            for theta in [PI / 3.0, PI / 2.0, PI] {
                let y = (1.0 - f64::cos(theta)) / f64::from(two_j);
                // Beyond n(1−cos θ) ≈ 2j the stay probability of the linear chain turns
                // negative on occupied states and the closed form stops being a distribution.
                for n in [1usize, 20, 75, 150, 200].into_iter().filter(|&n| n as f64 * y <= 1.0) {
                    let exact = alternating_weights(y, n);
                    let chain = linearized_chain(y, n);
                    let tv: f64 = 0.5 * exact.iter().zip(&chain).map(|(a, b)| (a - b).abs()).sum::<f64>();
                    assert!(tv < 1e-8, "two_j={two_j} θ={theta} n={n}: {tv:e}");
                }
            }
        }
    }

    #[test]
    fn closed_form_tracks_leading_order_chain() {
        let spin = SpinLabel::new(200);
        let mut d = MemoryDistribution::point_mass(spin, 200).unwrap();
        for _ in 0..20 {
            d = complementary_step(spin, PI, &d).unwrap();
        }
        let t = tricomi_distribution(spin, PI, 20).unwrap();
        let tv = t.total_variation(&d).unwrap();
        assert!(tv < 0.02, "{tv}");
    }

    #[test]
    fn public_routes_agree() {
        let spin = SpinLabel::new(200);
        let t = tricomi_distribution(spin, PI, 20).unwrap();
        let c = linearized_distribution(spin, PI, 20).unwrap();
        assert!(t.total_variation(&c).unwrap() < 1e-8);
    }

    #[test]
    fn closed_form_breaks_down_for_long_runs() {
        assert!(tricomi_distribution(SpinLabel::new(100), PI / 2.0, 200).is_err());
    }

    #[test]
    fn geometric_asymptote_on_leading_weights() {
        let spin = SpinLabel::new(400);
        let t = tricomi_distribution(spin, PI, 100).unwrap();
        let g = recycling_asymptote(spin, PI, 100);
        for k in 0..5 {
            let rel = (t.probabilities()[k] / g[k] - 1.0).abs();
            assert!(rel < 0.05, "k={k}: {rel}");
        }
    }
}
