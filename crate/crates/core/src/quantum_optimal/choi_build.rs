use super::params::CovariantChoiParams;
use crate::channel_core::ChoiOperator;
use crate::error::Result;
use crate::spin_algebra::{couple, coupling_decomposition, pauli, ComplexOperator, SpinLabel, SpinRep, C64};
use crate::spin_algebra::Rotation;
use crate::tolerance;

/// Coupled basis vector on memory ⊗ reference ⊗ output: memory and reference
/// couple to `two_l`, which then couples with the output qubit to `(two_jt, two_mt)`.
fn coupled_vector(spin: SpinLabel, two_l: i32, two_jt: i32, two_mt: i32) -> Result<ComplexOperator> {
    let tj = spin.two_j() as i32;
    let qubit = |m: i32| SpinLabel::HALF.ket(m).expect("qubit index");
    let inner = |ml: i32| {
        couple(tj, 1, two_l, ml, |m| spin.ket(m).expect("memory index"), qubit).expect("inner coupling")
    };
    couple(two_l, 1, two_jt, two_mt, inner, qubit)
}

/// `|j,−m⟩ ⊗ |Φ*_θ⟩` on memory ⊗ reference ⊗ output.
fn conjugate_probe_state(spin: SpinLabel, two_m: i32, theta: f64) -> Result<ComplexOperator> {
    let r = 0.5f64.sqrt();
    let pair = ComplexOperator::ket(&[
        C64::new(0.0, 0.0),
        -C64::from_polar(r, theta / 2.0),
        C64::from_polar(r, -theta / 2.0),
        C64::new(0.0, 0.0),
    ]);
    Ok(spin.ket(-two_m)?.kron(&pair))
}

/// Relative sign between the CG-built `|±⟩` copies and the closed-form phase convention.
fn multiplicity_signs(spin: SpinLabel) -> Result<[f64; 2]> {
    let tj = spin.two_j() as i32;
    let theta = 1.0;
    let psi = conjugate_probe_state(spin, tj, theta)?;
    let coeffs = coupling_decomposition(spin, tj, theta)?;
    let plus = ComplexOperator::inner(&coupled_vector(spin, tj + 1, tj, -tj)?, &psi);
    let minus = ComplexOperator::inner(&coupled_vector(spin, tj - 1, tj, -tj)?, &psi);
    Ok([(plus / coeffs.c_plus.conj()).re.signum(), (minus / coeffs.c_minus.conj()).re.signum()])
}

/// Assembles the Choi operator on (memory ⊗ target) → output from covariant parameters.
///
/// The block form is built in the conjugated picture and mapped back with
/// `e^{−iπJy} ⊗ σy ⊗ I`.
pub fn covariant_choi_build(params: &CovariantChoiParams, spin: SpinLabel) -> Result<ChoiOperator> {
    params.check(spin)?;
    let tj = spin.two_j() as i32;
    let dim = 4 * spin.dim();
    let mut star = ComplexOperator::zeros(dim, dim);
    let add_projector = |star: &mut ComplexOperator, weight: f64, two_l: i32, two_jt: i32| -> Result<()> {
        let mut two_mt = two_jt;
        while two_mt >= -two_jt {
            let v = coupled_vector(spin, two_l, two_jt, two_mt)?;
            *star += ComplexOperator::outer(&v, &v).scale(C64::new(weight, 0.0));
            two_mt -= 2;
        }
        Ok(())
    };
    add_projector(&mut star, params.alpha, tj + 1, tj + 2)?;
    if tj >= 2 {
        add_projector(&mut star, params.beta, tj - 1, tj - 2)?;
    }

    let signs = multiplicity_signs(spin)?;
    let mut two_mt = tj;
    while two_mt >= -tj {
        let copies = [coupled_vector(spin, tj + 1, tj, two_mt)?, coupled_vector(spin, tj - 1, tj, two_mt)?];
        for s in 0..2 {
            for t in 0..2 {
                let w = params.m[s][t].conj() * signs[s] * signs[t];
                star += ComplexOperator::outer(&copies[s], &copies[t]).scale(w);
            }
        }
        two_mt -= 2;
    }

    let flip = SpinRep::new(spin).irrep(&Rotation::about_y(std::f64::consts::PI));
    let [_, sigma_y, _] = pauli();
    let t = flip.kron(&sigma_y).kron(&ComplexOperator::identity(2));
    let c = &(&t.adjoint() * &star) * &t;
    let choi = ChoiOperator::new(c, 2 * spin.dim(), 2)?;
    choi.validate(tolerance::CHOI)?;
    Ok(choi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel_core::{entanglement_fidelity, target_gate, ChoiChannel};
    use crate::quantum_optimal::params::{covariant_fidelity, multiplicity_bounds, tp_weights};
    use crate::spin_algebra::{haar_rotation, rotation_irrep};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Valid parameters with a full-rank or rank-one `M`.
    fn params_from(spin: SpinLabel, x: f64, y: f64, phase: f64, coherence: f64) -> CovariantChoiParams {
        let (xmax, ymax) = multiplicity_bounds(spin);
        let mp = x * xmax;
        let mm = if spin.two_j() == 1 { ymax } else { y * ymax };
        let (alpha, beta) = tp_weights(spin, mp, mm);
        let off = C64::from_polar(coherence * (mp * mm).sqrt(), phase);
        CovariantChoiParams {
            alpha,
            beta,
            m: [[C64::new(mp, 0.0), off], [off.conj(), C64::new(mm, 0.0)]],
        }
    }

    #[test]
    fn built_channel_reproduces_covariant_fidelity() {
        for two_j in 1..=4u32 {
            let spin = SpinLabel::new(two_j);
            for (k, &(x, y, ph, co)) in [(1.0, 1.0, 0.3, 1.0), (0.4, 0.7, -1.2, 0.6), (0.0, 0.2, 2.0, 0.0), (0.8, 0.0, 0.9, 1.0)]
                .iter()
                .enumerate()
            {
                let params = params_from(spin, x, y, ph, co);
                let choi = covariant_choi_build(&params, spin).unwrap();
                let channel = ChoiChannel::new(choi, spin.dim()).unwrap();
                let theta = 0.4 + 1.1 * k as f64;
                let v = target_gate(SpinLabel::HALF, theta);
                for two_m in spin.two_m_values() {
                    let fe = entanglement_fidelity(&channel, &spin.ket(two_m).unwrap(), &v).unwrap().value;
                    let closed = covariant_fidelity(&params, spin, two_m, theta).unwrap();
                    assert!((fe - closed).abs() < 1e-9, "two_j={two_j} two_m={two_m} k={k}: {fe} vs {closed}");
                }
            }
        }
    }

    #[test]
    fn block_form_commutes_with_collective_rotations() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for two_j in [1u32, 2, 3] {
            let spin = SpinLabel::new(two_j);
            let choi = covariant_choi_build(&params_from(spin, 0.5, 0.3, 0.7, 0.8), spin).unwrap();
            let flip = rotation_irrep(spin, &Rotation::about_y(std::f64::consts::PI));
            let [_, sigma_y, _] = pauli();
            let t = flip.kron(&sigma_y).kron(&ComplexOperator::identity(2));
            let star = &(&t * choi.matrix()) * &t.adjoint();
            for _ in 0..20 {
                let g = haar_rotation(&mut rng);
                let u2 = rotation_irrep(SpinLabel::HALF, &g);
                let ug = rotation_irrep(spin, &g).kron(&u2).kron(&u2);
                let residual = ComplexOperator::commutator(&star, &ug).max_abs();
                assert!(residual < 1e-9, "{residual}");
            }
        }
    }

    #[test]
    fn rejects_constraint_violations() {
        let spin = SpinLabel::new(2);
        let mut p = params_from(spin, 0.5, 0.5, 0.0, 1.0);
        p.alpha += 0.01;
        assert!(covariant_choi_build(&p, spin).is_err());
        let mut q = params_from(spin, 0.5, 0.5, 0.0, 1.0);
        q.m[0][1] *= 1.5;
        q.m[1][0] *= 1.5;
        assert!(covariant_choi_build(&q, spin).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn random_valid_params_build_valid_channels(
            two_j in 1u32..5, x in 0.0f64..1.0, y in 0.0f64..1.0, ph in -3.1f64..3.1, co in 0.0f64..1.0, theta in 0.0f64..6.28,
        ) {
            let spin = SpinLabel::new(two_j);
            let params = params_from(spin, x, y, ph, co);
            let channel = ChoiChannel::new(covariant_choi_build(&params, spin).unwrap(), spin.dim()).unwrap();
            let v = target_gate(SpinLabel::HALF, theta);
            let two_m = spin.two_j() as i32;
            let fe = entanglement_fidelity(&channel, &spin.ket(two_m).unwrap(), &v).unwrap().value;
            prop_assert!((fe - covariant_fidelity(&params, spin, two_m, theta).unwrap()).abs() < 1e-9);
        }
    }
}
