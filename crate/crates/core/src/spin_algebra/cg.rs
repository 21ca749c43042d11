use std::sync::OnceLock;

use super::operator::ComplexOperator;
use crate::error::{Error, Result};

const LN_FACTORIAL_TABLE: usize = 8192;

fn ln_factorial(n: i64) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LN_FACTORIAL_TABLE);
        t.push(0.0);
        for k in 1..LN_FACTORIAL_TABLE {
            t.push(t[k - 1] + (k as f64).ln());
        }
        t
    });
    debug_assert!(n >= 0);
    table[n as usize]
}

fn valid_pair(two_j: i32, two_m: i32) -> bool {
    two_j >= 0 && two_m.abs() <= two_j && (two_j - two_m).rem_euclid(2) == 0
}

/// Clebsch–Gordan coefficient `⟨j1 m1; j2 m2 | J M⟩` (Condon–Shortley phase).
///
/// All arguments are twice the physical values. Selection-rule violations are
/// reported as errors; allowed-but-vanishing coefficients return `0.0`.
pub fn clebsch_gordan(two_j1: i32, two_m1: i32, two_j2: i32, two_m2: i32, two_jt: i32, two_mt: i32) -> Result<f64> {
    let bad = |why: &str| {
        Err(Error::InvalidQuantumNumbers(format!(
            "⟨{two_j1}/2 {two_m1}/2; {two_j2}/2 {two_m2}/2 | {two_jt}/2 {two_mt}/2⟩: {why}"
        )))
    };
    if !valid_pair(two_j1, two_m1) || !valid_pair(two_j2, two_m2) || !valid_pair(two_jt, two_mt) {
        return bad("magnetic index out of range or wrong parity");
    }
    if two_m1 + two_m2 != two_mt {
        return bad("M must equal m1 + m2");
    }
    if two_jt < (two_j1 - two_j2).abs() || two_jt > two_j1 + two_j2 || (two_j1 + two_j2 + two_jt) % 2 != 0 {
        return bad("triangle rule");
    }

    // Integer arguments of the Racah formula.
    let a = ((two_j1 + two_j2 - two_jt) / 2) as i64;
    let b = ((two_j1 - two_m1) / 2) as i64;
    let c = ((two_j2 + two_m2) / 2) as i64;
    let d = ((two_jt - two_j2 + two_m1) / 2) as i64;
    let e = ((two_jt - two_j1 - two_m2) / 2) as i64;

    let ln_pref = 0.5
        * (((two_jt + 1) as f64).ln()
            + ln_factorial(((two_jt + two_j1 - two_j2) / 2) as i64)
            + ln_factorial(((two_jt - two_j1 + two_j2) / 2) as i64)
            + ln_factorial(a)
            - ln_factorial(((two_j1 + two_j2 + two_jt) / 2 + 1) as i64)
            + ln_factorial(((two_jt + two_mt) / 2) as i64)
            + ln_factorial(((two_jt - two_mt) / 2) as i64)
            + ln_factorial(b)
            + ln_factorial(((two_j1 + two_m1) / 2) as i64)
            + ln_factorial(((two_j2 - two_m2) / 2) as i64)
            + ln_factorial(c));

    let k_min = 0.max(-d).max(-e);
    let k_max = a.min(b).min(c);
    let mut sum = 0.0;
    for k in k_min..=k_max {
        let ln_den = ln_factorial(k)
            + ln_factorial(a - k)
            + ln_factorial(b - k)
            + ln_factorial(c - k)
            + ln_factorial(d + k)
            + ln_factorial(e + k);
        let term = (ln_pref - ln_den).exp();
        sum += if k % 2 == 0 { term } else { -term };
    }
    Ok(sum)
}

/// Couples two angular momenta: `Σ_{m1} ⟨j1 m1; j2 M−m1 | J M⟩ |j1 m1⟩ ⊗ |j2 M−m1⟩`.
///
/// `ket1` and `ket2` return the (possibly composite) kets for each magnetic index,
/// so coupled states can be nested to build multi-spin bases.
pub fn couple(
    two_j1: i32,
    two_j2: i32,
    two_jt: i32,
    two_mt: i32,
    ket1: impl Fn(i32) -> ComplexOperator,
    ket2: impl Fn(i32) -> ComplexOperator,
) -> Result<ComplexOperator> {
    let mut out: Option<ComplexOperator> = None;
    let mut two_m1 = -two_j1;
    while two_m1 <= two_j1 {
        let two_m2 = two_mt - two_m1;
        if two_m2.abs() <= two_j2 {
            let cg = clebsch_gordan(two_j1, two_m1, two_j2, two_m2, two_jt, two_mt)?;
            if cg != 0.0 {
                let term = ket1(two_m1).kron(&ket2(two_m2)) * cg;
                out = Some(match out {
                    Some(acc) => acc + term,
                    None => term,
                });
            }
        }
        two_m1 += 2;
    }
    out.ok_or_else(|| Error::InvalidQuantumNumbers(format!("no admissible terms for J={two_jt}/2 M={two_mt}/2")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin_algebra::{spin_operators, SpinLabel};
    use approx::assert_relative_eq;

    #[test]
    fn singlet_coefficient() {
        assert_relative_eq!(clebsch_gordan(1, 1, 1, -1, 0, 0).unwrap(), 0.5f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(clebsch_gordan(1, -1, 1, 1, 0, 0).unwrap(), -(0.5f64.sqrt()), epsilon = 1e-14);
    }

    #[test]
    fn singlet_matches_total_spin_diagonalization() {
        // Independent route: kernel of total J² for two qubits.
        let s = SpinLabel::new(1);
        let (sx, sy, sz) = spin_operators(s);
        let id = ComplexOperator::identity(2);
        let mut j2 = ComplexOperator::zeros(4, 4);
        for op in [&sx, &sy, &sz] {
            let tot = op.kron(&id) + id.kron(op);
            j2 = j2 + &tot * &tot;
        }
        let (vals, vecs) = j2.eigh();
        assert_relative_eq!(vals[0], 0.0, epsilon = 1e-12);
        // |↑↓⟩ has index 1, |↓↑⟩ index 2 in the m = j..−j ordering.
        let ratio = vecs[(1, 0)] / vecs[(2, 0)];
        assert_relative_eq!(ratio.re, -1.0, epsilon = 1e-12);
        assert_relative_eq!(vecs[(1, 0)].norm(), 0.5f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn invalid_numbers_are_errors_not_zero() {
        assert!(clebsch_gordan(1, 1, 1, 1, 0, 2).is_err()); // |M| > J
        assert!(clebsch_gordan(1, 1, 1, 1, 2, 0).is_err()); // M ≠ m1 + m2
        assert!(clebsch_gordan(2, 0, 2, 0, 6, 0).is_err()); // triangle
        assert!(clebsch_gordan(2, 1, 2, 0, 2, 1).is_err()); // parity
        // Allowed but vanishing: ⟨1 0; 1 0 | 1 0⟩ = 0.
        assert_eq!(clebsch_gordan(2, 0, 2, 0, 2, 0).unwrap().abs() < 1e-15, true);
    }

    /// Ladder-operator oracle: `|J,M⟩` obtained by lowering the stretched state.
    fn ladder_state(two_j1: u32, two_j2: u32, two_mt: i32) -> ComplexOperator {
        let (s1, s2) = (SpinLabel::new(two_j1), SpinLabel::new(two_j2));
        let (x1, y1, _) = spin_operators(s1);
        let (x2, y2, _) = spin_operators(s2);
        let i = crate::spin_algebra::operator::I;
        let minus1 = &x1 - &(&y1 * i);
        let minus2 = &x2 - &(&y2 * i);
        let lower = minus1.kron(&ComplexOperator::identity(s2.dim())) + ComplexOperator::identity(s1.dim()).kron(&minus2);
        let mut v = ComplexOperator::basis(s1.dim() * s2.dim(), 0);
        let two_jt = (two_j1 + two_j2) as i32;
        let mut two_m = two_jt;
        while two_m > two_mt {
            v = &lower * &v;
            v = &v * (1.0 / v.norm());
            two_m -= 2;
        }
        v
    }

    #[test]
    fn stretched_family_matches_ladder_recursion() {
        for two_j1 in 1..=6u32 {
            for two_j2 in 1..=6u32 {
                let two_jt = (two_j1 + two_j2) as i32;
                let mut two_mt = two_jt;
                while two_mt >= -two_jt {
                    let oracle = ladder_state(two_j1, two_j2, two_mt);
                    let d2 = two_j2 as usize + 1;
                    let mut two_m1 = two_j1 as i32;
                    while two_m1 >= -(two_j1 as i32) {
                        let two_m2 = two_mt - two_m1;
                        if two_m2.abs() <= two_j2 as i32 {
                            let i1 = ((two_j1 as i32 - two_m1) / 2) as usize;
                            let i2 = ((two_j2 as i32 - two_m2) / 2) as usize;
                            let cg = clebsch_gordan(two_j1 as i32, two_m1, two_j2 as i32, two_m2, two_jt, two_mt).unwrap();
                            assert_relative_eq!(oracle[(i1 * d2 + i2, 0)].re, cg, epsilon = 1e-10);
                        }
                        two_m1 -= 2;
                    }
                    two_mt -= 2;
                }
            }
        }
    }

    #[test]
    fn orthogonality_rows_and_columns() {
        for two_j1 in 0..=8i32 {
            for two_j2 in 0..=8i32 {
                let mut two_jt = (two_j1 - two_j2).abs();
                while two_jt <= two_j1 + two_j2 {
                    let mut two_mt = -two_jt;
                    while two_mt <= two_jt {
                        let mut col = 0.0;
                        let mut two_m1 = -two_j1;
                        while two_m1 <= two_j1 {
                            let two_m2 = two_mt - two_m1;
                            if two_m2.abs() <= two_j2 {
                                col += clebsch_gordan(two_j1, two_m1, two_j2, two_m2, two_jt, two_mt).unwrap().powi(2);
                            }
                            two_m1 += 2;
                        }
                        assert_relative_eq!(col, 1.0, epsilon = 1e-10);
                        two_mt += 2;
                    }
                    two_jt += 2;
                }
                // Fixed (m1, m2): sum over J of squares is one.
                let mut two_m1 = -two_j1;
                while two_m1 <= two_j1 {
                    let mut two_m2 = -two_j2;
                    while two_m2 <= two_j2 {
                        let two_mt = two_m1 + two_m2;
                        let mut row = 0.0;
                        let mut two_jt = (two_j1 - two_j2).abs().max(two_mt.abs());
                        if (two_jt - two_mt).rem_euclid(2) != 0 {
                            two_jt += 1;
                        }
                        while two_jt <= two_j1 + two_j2 {
                            row += clebsch_gordan(two_j1, two_m1, two_j2, two_m2, two_jt, two_mt).unwrap().powi(2);
                            two_jt += 2;
                        }
                        assert_relative_eq!(row, 1.0, epsilon = 1e-10);
                        two_m2 += 2;
                    }
                    two_m1 += 2;
                }
            }
        }
    }
}
