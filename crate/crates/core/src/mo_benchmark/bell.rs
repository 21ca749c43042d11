use crate::channel_core::{permute_subsystems, ChoiOperator};
use crate::error::{Error, Result};
use crate::spin_algebra::{pauli, ComplexOperator, C64};
use crate::tolerance;

/// `{|Φ+⟩, i(σx⊗I)|Φ+⟩, i(σy⊗I)|Φ+⟩, i(σz⊗I)|Φ+⟩}` on output ⊗ reference.
fn bell_basis() -> [ComplexOperator; 4] {
    let r = 0.5f64.sqrt();
    let phi = ComplexOperator::ket(&[C64::new(r, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(r, 0.0)]);
    let id = ComplexOperator::identity(2);
    let [x, y, z] = pauli();
    let i = C64::new(0.0, 1.0);
    [
        phi.clone(),
        (&x.kron(&id) * &phi).scale(i),
        (&y.kron(&id) * &phi).scale(i),
        (&z.kron(&id) * &phi).scale(i),
    ]
}

/// Whether a qubit channel's Choi operator is real in the Bell basis, which
/// holds exactly when the channel is unital.
pub fn unital_bell_reality_check(choi: &ChoiOperator) -> Result<bool> {
    if choi.dim_in() != 2 || choi.dim_out() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: choi.dim_in().max(choi.dim_out()) });
    }
    let swapped = permute_subsystems(choi.matrix(), &[2, 2], &[1, 0])?;
    let basis = bell_basis();
    for a in &basis {
        for b in &basis {
            let entry = ComplexOperator::inner(a, &(&swapped * b));
            if entry.im.abs() > tolerance::BELL_REALITY {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel_core::{apply_choi, random_pure_state, Channel, UnitaryChannel};
    use crate::spin_algebra::{haar_rotation, rotation_irrep, Rotation, SpinLabel};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unitary_choi(u: &ComplexOperator) -> ComplexOperator {
        UnitaryChannel::new(u.clone(), 1, 2).unwrap().choi().unwrap().matrix().clone()
    }

    fn random_unitary(rng: &mut ChaCha8Rng) -> ComplexOperator {
        // A Haar SU(2) element times a random phase.
        rotation_irrep(SpinLabel::HALF, &haar_rotation(rng)).scale(C64::from_polar(1.0, rng.random_range(0.0..6.28)))
    }

    fn from_kraus(kraus: &[ComplexOperator]) -> ChoiOperator {
        let mut m = ComplexOperator::zeros(4, 4);
        for k in kraus {
            m += unitary_like_choi(k);
        }
        ChoiOperator::new(m, 2, 2).unwrap()
    }

    fn unitary_like_choi(k: &ComplexOperator) -> ComplexOperator {
        // Σ_ij |i⟩⟨j| ⊗ K|i⟩⟨j|K†
        ComplexOperator::from_fn(4, 4, |r, c| {
            let (i, kk) = (r / 2, r % 2);
            let (j, l) = (c / 2, c % 2);
            k[(kk, i)] * k[(l, j)].conj()
        })
    }

    fn is_unital(c: &ChoiOperator) -> bool {
        apply_choi(c, &ComplexOperator::identity(2)).unwrap().max_abs_diff(&ComplexOperator::identity(2)) < 1e-9
    }

    #[test]
    fn rotations_are_real() {
        for axis in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
            let u = rotation_irrep(SpinLabel::HALF, &Rotation::about_axis(axis, 1.1));
            let c = ChoiOperator::new(unitary_choi(&u), 2, 2).unwrap();
            assert!(unital_bell_reality_check(&c).unwrap());
        }
    }

    #[test]
    fn unitary_mixtures_are_real() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for _ in 0..100 {
            let weights: Vec<f64> = (0..5).map(|_| rng.random::<f64>()).collect();
            let total: f64 = weights.iter().sum();
            let kraus: Vec<ComplexOperator> = weights.iter().map(|w| random_unitary(&mut rng) * (w / total).sqrt()).collect();
            let c = from_kraus(&kraus);
            c.validate(tolerance::CHOI).unwrap();
            assert!(is_unital(&c));
            assert!(unital_bell_reality_check(&c).unwrap());
        }
    }

    #[test]
    fn amplitude_damping_is_not_real() {
        let g: f64 = 0.3;
        let k0 = ComplexOperator::diagonal(&[C64::new(1.0, 0.0), C64::new((1.0 - g).sqrt(), 0.0)]);
        let mut k1 = ComplexOperator::zeros(2, 2);
        k1[(0, 1)] = C64::new(g.sqrt(), 0.0);
        let c = from_kraus(&[k0, k1]);
        assert!(!is_unital(&c));
        assert!(!unital_bell_reality_check(&c).unwrap());
    }

    #[test]
    fn reality_is_equivalent_to_unitality() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut seen = [0usize; 2];
        for _ in 0..200 {
            // Random channel from a random isometry into qubit ⊗ environment.
            let cols: Vec<ComplexOperator> = (0..2).map(|_| random_pure_state(2 * 3, &mut rng)).collect();
            let a = &cols[0];
            let overlap = ComplexOperator::inner(a, &cols[1]);
            let b = &cols[1] - &a.scale(overlap);
            let b = b.scale(C64::new(1.0 / b.norm(), 0.0));
            let kraus: Vec<ComplexOperator> = (0..3)
                .map(|e| ComplexOperator::from_fn(2, 2, |r, c| if c == 0 { a[(r * 3 + e, 0)] } else { b[(r * 3 + e, 0)] }))
                .collect();
            let c = from_kraus(&kraus);
            c.validate(tolerance::CHOI).unwrap();
            let unital = is_unital(&c);
            seen[usize::from(unital)] += 1;
            assert_eq!(unital_bell_reality_check(&c).unwrap(), unital);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let kraus: Vec<ComplexOperator> = (0..3).map(|_| random_unitary(&mut rng) * (1.0f64 / 3.0).sqrt()).collect();
            let c = from_kraus(&kraus);
            assert!(is_unital(&c) && unital_bell_reality_check(&c).unwrap());
            seen[1] += 1;
        }
        assert!(seen[0] >= 100 && seen[1] >= 100, "{seen:?}");
    }
}
