//! Unit quaternions as SU(2) matrices.
//!
//! `q = (w, x, y, z)` stands for `w·I + x·i + y·j + z·k`; its trace as a 2×2
//! matrix is `2w`, so the rotation angle `θ` with `q ~ e^{iθ}` is `acos(w)`.

use std::ops::Mul;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ONE: Quaternion = Quaternion {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn scalar(s: f64) -> Self {
        Quaternion::new(s, 0.0, 0.0, 0.0)
    }

    /// `cos θ + sin θ · u` for a unit axis `u`.
    pub fn from_axis_angle(axis: [f64; 3], theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Quaternion::new(c, s * axis[0], s * axis[1], s * axis[2])
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm(self) -> f64 {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn pow(self, n: u32) -> Self {
        (0..n).fold(Quaternion::ONE, |acc, _| acc * self)
    }

    /// Rotation angle in `[0, π]`.
    pub fn angle(self) -> f64 {
        self.w.clamp(-1.0, 1.0).acos()
    }

    /// Frobenius distance between the corresponding SU(2) matrices.
    pub fn distance(self, other: Quaternion) -> f64 {
        let d = Quaternion::new(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z);
        std::f64::consts::SQRT_2 * d.norm()
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    fn mul(self, b: Quaternion) -> Quaternion {
        let a = self;
        Quaternion::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}
