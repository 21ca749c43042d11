use rand::Rng;
use rand_distr::StandardNormal;

/// An SO(3) element stored as a unit quaternion `(w, x, y, z)`.
///
/// The quaternion maps to the SU(2) matrix `w·I − i(x σx + y σy + z σz)`, so a
/// rotation by `φ` about the unit axis `n` is `(cos φ/2, sin φ/2 · n)`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Rotation {
    w: f64,
    x: f64,
    y: f64,
    z: f64,
}

/// ZYZ Euler angles in radians: `R = Rz(alpha) Ry(beta) Rz(gamma)`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct EulerZyz {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Rotation {
    pub const IDENTITY: Rotation = Rotation { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };

    /// Normalizes the given quaternion. Panics on the zero quaternion.
    pub fn from_quaternion(w: f64, x: f64, y: f64, z: f64) -> Self {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        assert!(n > 0.0, "zero quaternion");
        Self { w: w / n, x: x / n, y: y / n, z: z / n }
    }

    pub fn about_axis(axis: [f64; 3], angle: f64) -> Self {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        assert!(n > 0.0, "zero rotation axis");
        let (s, c) = (0.5 * angle).sin_cos();
        Self::from_quaternion(c, s * axis[0] / n, s * axis[1] / n, s * axis[2] / n)
    }

    pub fn about_x(angle: f64) -> Self {
        Self::about_axis([1.0, 0.0, 0.0], angle)
    }

    pub fn about_y(angle: f64) -> Self {
        Self::about_axis([0.0, 1.0, 0.0], angle)
    }

    pub fn about_z(angle: f64) -> Self {
        Self::about_axis([0.0, 0.0, 1.0], angle)
    }

    pub fn from_euler(e: EulerZyz) -> Self {
        Self::about_z(e.alpha)
            .compose(&Self::about_y(e.beta))
            .compose(&Self::about_z(e.gamma))
    }

    /// Smallest rotation taking `e_z` to the unit vector `n`.
    pub fn aligning_z_to(n: [f64; 3]) -> Self {
        let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        let cos_b = (n[2] / norm).clamp(-1.0, 1.0);
        let beta = cos_b.acos();
        let alpha = n[1].atan2(n[0]);
        Self::from_euler(EulerZyz { alpha, beta, gamma: 0.0 })
    }

    pub fn quaternion(&self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    /// Product `self · other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        let (a, b) = (self, other);
        Self::from_quaternion(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + b.w * a.x + a.y * b.z - a.z * b.y,
            a.w * b.y + b.w * a.y + a.z * b.x - a.x * b.z,
            a.w * b.z + b.w * a.z + a.x * b.y - a.y * b.x,
        )
    }

    pub fn inverse(&self) -> Self {
        Self { w: self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    pub fn euler_zyz(&self) -> EulerZyz {
        let beta = 2.0 * (self.x.hypot(self.y)).atan2(self.w.hypot(self.z));
        let sum = self.z.atan2(self.w);
        let diff = (-self.x).atan2(self.y);
        EulerZyz { alpha: sum + diff, beta, gamma: sum - diff }
    }

    /// Rotation angle in `[0, π]`.
    pub fn angle(&self) -> f64 {
        2.0 * self.w.abs().min(1.0).acos()
    }

    pub fn matrix(&self) -> [[f64; 3]; 3] {
        let Rotation { w, x, y, z } = *self;
        [
            [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
            [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
            [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
        ]
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let r = self.matrix();
        [
            r[0][0] * v[0] + r[0][1] * v[1] + r[0][2] * v[2],
            r[1][0] * v[0] + r[1][1] * v[1] + r[1][2] * v[2],
            r[2][0] * v[0] + r[2][1] * v[1] + r[2][2] * v[2],
        ]
    }

    /// The rotated z axis `g e_z`, i.e. the direction of the coherent state `U_g|j,j⟩`.
    pub fn z_axis(&self) -> [f64; 3] {
        self.apply([0.0, 0.0, 1.0])
    }

    /// Same SO(3) element, comparing quaternions up to the global sign.
    pub fn same_element(&self, other: &Self, tol: f64) -> bool {
        let d = self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z;
        (1.0 - d.abs()) <= tol
    }
}

/// Haar-uniform rotation: four i.i.d. standard normals, normalized.
pub fn haar_rotation<R: Rng + ?Sized>(rng: &mut R) -> Rotation {
    loop {
        let q: [f64; 4] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n2 = q.iter().map(|v| v * v).sum::<f64>();
        if n2 > 1e-300 {
            return Rotation::from_quaternion(q[0], q[1], q[2], q[3]);
        }
    }
}
