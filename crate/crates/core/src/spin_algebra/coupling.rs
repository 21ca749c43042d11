use super::operator::C64;
use super::SpinLabel;
use crate::error::Result;

/// Components of `|j,−m⟩ ⊗ |Φ*_θ⟩` along the total-spin sectors `j+1`, `j−1`
/// and the two copies `|j⟩⊗|±⟩` of spin `j`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct CouplingCoeffs {
    pub a: C64,
    pub b: C64,
    pub c_plus: C64,
    pub c_minus: C64,
}

impl CouplingCoeffs {
    pub fn norm_sqr(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr() + self.c_plus.norm_sqr() + self.c_minus.norm_sqr()
    }
}

/// Closed-form coupling coefficients for probe `|j,m⟩` and rotation angle `theta`.
///
/// For `j = 0` the spin-`(j−1)` sector and the `|−⟩` copy do not exist and
/// `b = c_minus = 0`.
pub fn coupling_decomposition(spin: SpinLabel, two_m: i32, theta: f64) -> Result<CouplingCoeffs> {
    spin.check_m(two_m)?;
    let j = spin.j();
    let m = f64::from(two_m) / 2.0;
    let (s, c) = (0.5 * theta).sin_cos();
    let d = 2.0 * j + 1.0;

    let a = C64::new(0.0, -s * ((j + 1.0 + m) * (j + 1.0 - m) / ((j + 1.0) * d)).sqrt());
    let c_plus = C64::new(-c * ((j + 1.0) / d).sqrt(), -s * m / ((j + 1.0) * d).sqrt());
    if spin.two_j() == 0 {
        return Ok(CouplingCoeffs { a, b: C64::new(0.0, 0.0), c_plus, c_minus: C64::new(0.0, 0.0) });
    }
    let b = C64::new(0.0, s * ((j + m) * (j - m) / (j * d)).sqrt());
    let c_minus = C64::new(c * (j / d).sqrt(), -s * m / (j * d).sqrt());
    Ok(CouplingCoeffs { a, b, c_plus, c_minus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn zero_angle_weights() {
        for two_j in 1..=8 {
            let s = SpinLabel::new(two_j);
            let j = s.j();
            for two_m in s.two_m_values() {
                let k = coupling_decomposition(s, two_m, 0.0).unwrap();
                assert_eq!(k.a.norm(), 0.0);
                assert_eq!(k.b.norm(), 0.0);
                assert_relative_eq!(k.c_plus.norm_sqr(), (j + 1.0) / (2.0 * j + 1.0), epsilon = 1e-14);
                assert_relative_eq!(k.c_minus.norm_sqr(), j / (2.0 * j + 1.0), epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn stretched_has_no_lower_sector() {
        for two_j in 1..=10 {
            let s = SpinLabel::new(two_j);
            let k = coupling_decomposition(s, two_j as i32, 1.3).unwrap();
            assert!(k.b.norm() < 1e-15);
        }
    }

    #[test]
    fn invalid_m_rejected() {
        assert!(coupling_decomposition(SpinLabel::new(2), 1, 0.3).is_err());
        assert!(coupling_decomposition(SpinLabel::new(2), 4, 0.3).is_err());
    }

    #[test]
    fn normalized_everywhere() {
        for two_j in 0..=12 {
            let s = SpinLabel::new(two_j);
            for two_m in s.two_m_values() {
                for k in 0..17 {
                    let th = 2.0 * PI * k as f64 / 17.0;
                    let cc = coupling_decomposition(s, two_m, th).unwrap();
                    assert_relative_eq!(cc.norm_sqr(), 1.0, epsilon = 1e-12);
                }
            }
        }
    }
}
