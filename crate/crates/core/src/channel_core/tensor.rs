use crate::error::{Error, Result};
use crate::spin_algebra::{ComplexOperator, C64};

fn check_dims(op: &ComplexOperator, dims: &[usize]) -> Result<usize> {
    let total: usize = dims.iter().product();
    if !op.is_square() || op.rows() != total {
        return Err(Error::DimensionMismatch { expected: total, found: op.rows() });
    }
    Ok(total)
}

/// Flat index → per-subsystem digits (first subsystem most significant).
fn digits(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
}

fn flat(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&d, &n)| acc * n + d)
}

/// Reduced operator on the subsystems listed in `keep` (kept in ascending order).
pub fn partial_trace(rho: &ComplexOperator, dims: &[usize], keep: &[usize]) -> Result<ComplexOperator> {
    let total = check_dims(rho, dims)?;
    let n = dims.len();
    if let Some(&bad) = keep.iter().find(|&&k| k >= n) {
        return Err(Error::DimensionMismatch { expected: n, found: bad + 1 });
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let traced: Vec<usize> = (0..n).filter(|k| !kept.contains(k)).collect();
    let kept_dims: Vec<usize> = kept.iter().map(|&k| dims[k]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let dk: usize = kept_dims.iter().product();
    let dt: usize = traced_dims.iter().product();

    // full[r][t]: flat index of kept multi-index r combined with traced multi-index t.
    let mut full = vec![0usize; dk * dt];
    let mut dig = vec![0usize; n];
    let mut kd = vec![0usize; kept.len()];
    let mut td = vec![0usize; traced.len()];
    for r in 0..dk {
        digits(r, &kept_dims, &mut kd);
        for t in 0..dt {
            digits(t, &traced_dims, &mut td);
            for (slot, &k) in kept.iter().enumerate() {
                dig[k] = kd[slot];
            }
            for (slot, &k) in traced.iter().enumerate() {
                dig[k] = td[slot];
            }
            full[r * dt + t] = flat(&dig, dims);
        }
    }
    debug_assert!(full.iter().all(|&f| f < total));

    let mut out = ComplexOperator::zeros(dk, dk);
    for r in 0..dk {
        for c in 0..dk {
            let mut acc = C64::new(0.0, 0.0);
            for t in 0..dt {
                acc += rho[(full[r * dt + t], full[c * dt + t])];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(out)
}

/// Reorders tensor factors: subsystem `k` of the result is subsystem `perm[k]` of `op`.
pub fn permute_subsystems(op: &ComplexOperator, dims: &[usize], perm: &[usize]) -> Result<ComplexOperator> {
    let total = check_dims(op, dims)?;
    let n = dims.len();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::InvalidQuantumNumbers(format!("{perm:?} is not a permutation of {n} subsystems")));
    }
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let mut map = vec![0usize; total];
    let mut nd = vec![0usize; n];
    let mut od = vec![0usize; n];
    for (i, slot) in map.iter_mut().enumerate() {
        digits(i, &new_dims, &mut nd);
        for k in 0..n {
            od[perm[k]] = nd[k];
        }
        *slot = flat(&od, dims);
    }
    Ok(ComplexOperator::from_fn(total, total, |r, c| op[(map[r], map[c])]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> ComplexOperator {
        ComplexOperator::from_fn(n, n, |_, _| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
    }

    #[test]
    fn product_state_keeps_factor() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_matrix(2, &mut rng);
        let b = random_matrix(3, &mut rng);
        let rho = a.kron(&b);
        let kept = partial_trace(&rho, &[2, 3], &[0]).unwrap();
        assert!(kept.max_abs_diff(&a.scale(b.trace())) < 1e-12);
        let kept = partial_trace(&rho, &[2, 3], &[1]).unwrap();
        assert!(kept.max_abs_diff(&b.scale(a.trace())) < 1e-12);
    }

    #[test]
    fn bell_marginals_are_mixed() {
        let r = 0.5f64.sqrt();
        let phi = ComplexOperator::ket(&[C64::new(r, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(r, 0.0)]);
        let rho = ComplexOperator::outer(&phi, &phi);
        let half = ComplexOperator::identity(2) * 0.5;
        for keep in [0, 1] {
            assert!(partial_trace(&rho, &[2, 2], &[keep]).unwrap().max_abs_diff(&half) < 1e-15);
        }
    }

    #[test]
    fn tracing_middle_matches_loop_contraction() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let (da, db, dc) = (2, 3, 2);
        let rho = random_matrix(da * db * dc, &mut rng);
        let got = partial_trace(&rho, &[da, db, dc], &[0, 2]).unwrap();
        for a in 0..da {
            for c in 0..dc {
                for a2 in 0..da {
                    for c2 in 0..dc {
                        let mut s = C64::new(0.0, 0.0);
                        for b in 0..db {
                            s += rho[((a * db + b) * dc + c, (a2 * db + b) * dc + c2)];
                        }
                        assert!((got[(a * dc + c, a2 * dc + c2)] - s).norm() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn permutation_matches_kron_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_matrix(2, &mut rng);
        let b = random_matrix(3, &mut rng);
        let c = random_matrix(2, &mut rng);
        let abc = a.kron(&b).kron(&c);
        let cab = c.kron(&a).kron(&b);
        let got = permute_subsystems(&abc, &[2, 3, 2], &[2, 0, 1]).unwrap();
        assert!(got.max_abs_diff(&cab) < 1e-14);
        assert!(permute_subsystems(&abc, &[2, 3, 2], &[0, 0, 1]).is_err());
    }

    #[test]
    fn dimension_errors() {
        let op = ComplexOperator::identity(6);
        assert!(partial_trace(&op, &[2, 2], &[0]).is_err());
        assert!(partial_trace(&op, &[2, 3], &[2]).is_err());
    }
}
