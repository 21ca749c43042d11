use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::spin_algebra::{raising_coefficient, ComplexOperator, SpinLabel, C64};

#[derive(Clone, Debug)]
struct Block {
    /// Flat indices `mem_index · (2k+1) + target_index` sharing one total `M`.
    members: Vec<usize>,
    u: DMatrix<C64>,
}

/// `exp(−i·angle·2J·K/(2j+1))` on memory ⊗ target, stored block-diagonally in total `M`.
#[derive(Clone, Debug)]
pub struct HeisenbergGate {
    memory: SpinLabel,
    target: SpinLabel,
    theta: f64,
    angle: f64,
    blocks: Vec<Block>,
    /// For each flat index: (block, position within block).
    location: Vec<(usize, usize)>,
}

impl HeisenbergGate {
    /// Gate with an explicit interaction angle. `theta` records the target rotation it is meant for.
    pub fn with_angle(memory: SpinLabel, target: SpinLabel, theta: f64, angle: f64) -> Result<Self> {
        if target.two_j() == 0 {
            return Err(Error::InvalidQuantumNumbers("target spin must be at least 1/2".into()));
        }
        let (dm, dk) = (memory.dim(), target.dim());
        let scale = 1.0 / (f64::from(memory.two_j()) + 1.0);
        let tj = memory.two_j() as i32;
        let tk = target.two_j() as i32;

        let mut blocks = Vec::new();
        let mut location = vec![(0, 0); dm * dk];
        let mut two_mt = tj + tk;
        while two_mt >= -(tj + tk) {
            // Members ordered by increasing memory m (decreasing target μ).
            let members: Vec<usize> = (0..dk)
                .filter_map(|a| {
                    let two_mu = target.two_m_at(a);
                    let two_m = two_mt - two_mu;
                    memory.index_of(two_m).ok().map(|i| i * dk + a)
                })
                .collect();
            let n = members.len();
            let mut h = DMatrix::<f64>::zeros(n, n);
            for (p, &flat) in members.iter().enumerate() {
                let (i, a) = (flat / dk, flat % dk);
                let (two_m, two_mu) = (memory.two_m_at(i), target.two_m_at(a));
                h[(p, p)] = 2.0 * scale * f64::from(two_m) * f64::from(two_mu) / 4.0;
                if p + 1 < n {
                    // Next member: memory m+1, target μ−1, reached by J+K−.
                    let c = raising_coefficient(memory, two_m) * raising_coefficient(target, two_mu - 2);
                    h[(p, p + 1)] = scale * c;
                    h[(p + 1, p)] = scale * c;
                }
            }
            let eig = SymmetricEigen::new(h);
            let v = eig.eigenvectors.map(|x| C64::new(x, 0.0));
            let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::from_polar(1.0, -angle * l)));
            let u = &v * phases * v.transpose();
            let b = blocks.len();
            for (p, &flat) in members.iter().enumerate() {
                location[flat] = (b, p);
            }
            blocks.push(Block { members, u });
            two_mt -= 2;
        }
        Ok(Self { memory, target, theta, angle, blocks, location })
    }

    pub fn memory(&self) -> SpinLabel {
        self.memory
    }

    pub fn target(&self) -> SpinLabel {
        self.target
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn dim(&self) -> usize {
        self.memory.dim() * self.target.dim()
    }

    /// Matrix element between flat basis indices `mem_index · (2k+1) + target_index`.
    pub fn element(&self, row: usize, col: usize) -> C64 {
        let (br, pr) = self.location[row];
        let (bc, pc) = self.location[col];
        if br == bc {
            self.blocks[br].u[(pr, pc)]
        } else {
            C64::new(0.0, 0.0)
        }
    }

    pub fn matrix(&self) -> ComplexOperator {
        let mut m = ComplexOperator::zeros(self.dim(), self.dim());
        for b in &self.blocks {
            for (p, &r) in b.members.iter().enumerate() {
                for (q, &c) in b.members.iter().enumerate() {
                    m[(r, c)] = b.u[(p, q)];
                }
            }
        }
        m
    }

    pub fn apply(&self, ket: &ComplexOperator) -> Result<ComplexOperator> {
        if ket.rows() != self.dim() || ket.cols() != 1 {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: ket.rows() });
        }
        let mut out = ComplexOperator::zeros(self.dim(), 1);
        for b in &self.blocks {
            for (p, &r) in b.members.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (q, &c) in b.members.iter().enumerate() {
                    acc += b.u[(p, q)] * ket[(c, 0)];
                }
                out[(r, 0)] = acc;
            }
        }
        Ok(out)
    }

    /// Entanglement fidelity with target `e^{−iθKz}` for memory probe `|j,m⟩`.
    ///
    /// The gate conserves total `M`, so only the diagonal elements `⟨m,μ|U|m,μ⟩` survive:
    /// `F = |Σ_μ e^{iθμ} ⟨m,μ|U|m,μ⟩|² / (2k+1)²`.
    pub fn probe_fidelity(&self, two_m: i32, theta: f64) -> Result<f64> {
        let i = self.memory.index_of(two_m)?;
        let dk = self.target.dim();
        let mut acc = C64::new(0.0, 0.0);
        for a in 0..dk {
            let mu = f64::from(self.target.two_m_at(a)) / 2.0;
            let flat = i * dk + a;
            acc += C64::from_polar(1.0, theta * mu) * self.element(flat, flat);
        }
        Ok(acc.norm_sqr() / (dk * dk) as f64)
    }
}
