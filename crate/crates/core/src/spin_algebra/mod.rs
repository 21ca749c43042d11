//! Angular-momentum algebra for a spin-j memory and spin-k targets.
//!
//! Basis order everywhere is `m = j, j−1, …, −j`; index `i` holds `two_m = two_j − 2i`.

mod cg;
mod coupling;
pub mod operator;
mod rotation;

pub use cg::{clebsch_gordan, couple};
pub use coupling::{coupling_decomposition, CouplingCoeffs};
pub use operator::{pauli, ComplexOperator, C64};
pub use rotation::{haar_rotation, EulerZyz, Rotation};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A spin quantum number stored as the integer `2j`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinLabel {
    two_j: u32,
}

impl SpinLabel {
    pub const HALF: SpinLabel = SpinLabel { two_j: 1 };
    pub const ONE: SpinLabel = SpinLabel { two_j: 2 };

    pub const fn new(two_j: u32) -> Self {
        Self { two_j }
    }

    pub const fn two_j(self) -> u32 {
        self.two_j
    }

    pub fn j(self) -> f64 {
        f64::from(self.two_j) / 2.0
    }

    pub const fn dim(self) -> usize {
        self.two_j as usize + 1
    }

    pub fn check_m(self, two_m: i32) -> Result<()> {
        let tj = self.two_j as i32;
        if two_m.abs() > tj || (tj - two_m).rem_euclid(2) != 0 {
            return Err(Error::InvalidMagneticIndex { two_j: self.two_j, two_m });
        }
        Ok(())
    }

    /// Basis index of `|j,m⟩`.
    pub fn index_of(self, two_m: i32) -> Result<usize> {
        self.check_m(two_m)?;
        Ok(((self.two_j as i32 - two_m) / 2) as usize)
    }

    pub fn two_m_at(self, index: usize) -> i32 {
        self.two_j as i32 - 2 * index as i32
    }

    /// Magnetic indices in basis order (descending).
    pub fn two_m_values(self) -> impl Iterator<Item = i32> {
        let tj = self.two_j as i32;
        (0..=self.two_j as i32).map(move |i| tj - 2 * i)
    }

    /// `|j,m⟩` as a column vector.
    pub fn ket(self, two_m: i32) -> Result<ComplexOperator> {
        Ok(ComplexOperator::basis(self.dim(), self.index_of(two_m)?))
    }
}

impl std::fmt::Display for SpinLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.two_j % 2 == 0 {
            write!(f, "{}", self.two_j / 2)
        } else {
            write!(f, "{}/2", self.two_j)
        }
    }
}

/// Ladder coefficient `√(j(j+1) − m(m+1))` for raising `|j,m⟩`.
pub fn raising_coefficient(spin: SpinLabel, two_m: i32) -> f64 {
    let j = spin.j();
    let m = f64::from(two_m) / 2.0;
    (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
}

/// `(Jx, Jy, Jz)` in the descending-m basis.
pub fn spin_operators(spin: SpinLabel) -> (ComplexOperator, ComplexOperator, ComplexOperator) {
    let d = spin.dim();
    let mut jp = ComplexOperator::zeros(d, d);
    let mut jz = ComplexOperator::zeros(d, d);
    for i in 0..d {
        let two_m = spin.two_m_at(i);
        jz[(i, i)] = C64::new(f64::from(two_m) / 2.0, 0.0);
        if i > 0 {
            jp[(i - 1, i)] = C64::new(raising_coefficient(spin, two_m), 0.0);
        }
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * 0.5;
    let jy = (&jp - &jm).scale(C64::new(0.0, -0.5));
    (jx, jy, jz)
}

/// Cached spectral data for building many irreps of the same spin.
#[derive(Clone, Debug)]
pub struct SpinRep {
    spin: SpinLabel,
    jy_values: Vec<f64>,
    jy_vectors: ComplexOperator,
}

impl SpinRep {
    pub fn new(spin: SpinLabel) -> Self {
        let (_, jy, _) = spin_operators(spin);
        let (jy_values, jy_vectors) = jy.eigh();
        Self { spin, jy_values, jy_vectors }
    }

    pub fn spin(&self) -> SpinLabel {
        self.spin
    }

    /// `exp(−iβ Jy)`.
    pub fn small_d(&self, beta: f64) -> ComplexOperator {
        let phases: Vec<C64> = self.jy_values.iter().map(|&l| C64::from_polar(1.0, -beta * l)).collect();
        &(&self.jy_vectors * &ComplexOperator::diagonal(&phases)) * &self.jy_vectors.adjoint()
    }

    /// `U_g = exp(−iα Jz) exp(−iβ Jy) exp(−iγ Jz)`.
    pub fn irrep(&self, g: &Rotation) -> ComplexOperator {
        let e = g.euler_zyz();
        let mut u = self.small_d(e.beta);
        let d = self.spin.dim();
        for r in 0..d {
            let mr = f64::from(self.spin.two_m_at(r)) / 2.0;
            for c in 0..d {
                let mc = f64::from(self.spin.two_m_at(c)) / 2.0;
                u[(r, c)] *= C64::from_polar(1.0, -(e.alpha * mr + e.gamma * mc));
            }
        }
        u
    }

    /// Column `two_m` of the irrep, i.e. `U_g|j,m⟩`.
    pub fn rotated_ket(&self, g: &Rotation, two_m: i32) -> Result<ComplexOperator> {
        let idx = self.spin.index_of(two_m)?;
        let u = self.irrep(g);
        Ok(ComplexOperator::from_fn(self.spin.dim(), 1, |r, _| u[(r, idx)]))
    }
}

/// `U_g^{(j)}` built factor by factor from spectral decompositions of the generators.
pub fn rotation_irrep(spin: SpinLabel, g: &Rotation) -> ComplexOperator {
    SpinRep::new(spin).irrep(g)
}

/// Spin coherent state `U_g|j,j⟩`.
pub fn coherent_state(spin: SpinLabel, g: &Rotation) -> ComplexOperator {
    SpinRep::new(spin).rotated_ket(g, spin.two_j() as i32).expect("m = j is always valid")
}

/// `|⟨j,j|U_g^{(j)}|j,j⟩|²` from the spin-1/2 amplitude raised to the power `2j`.
///
/// The stretched state is a symmetric product of `2j` qubits, so the overlap
/// factorizes. This avoids building large irreps when only the overlap is needed.
pub fn stretched_return_probability(spin: SpinLabel, g: &Rotation) -> f64 {
    let [w, _, _, z] = g.quaternion();
    let p_half = w * w + z * z;
    p_half.powi(spin.two_j() as i32)
}
