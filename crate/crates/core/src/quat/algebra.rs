//! Quaternions `w + ix + jy + kz` with `ij = k`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Tolerance on `|u| − 1` accepted by operations that need a unit.
pub const UNIT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// `e_a e_b = sign · e_c` over the basis `(1, i, j, k)`.
pub(crate) const fn basis_product(a: usize, b: usize) -> (usize, f64) {
    const TABLE: [[(usize, f64); 4]; 4] = [
        [(0, 1.0), (1, 1.0), (2, 1.0), (3, 1.0)],
        [(1, 1.0), (0, -1.0), (3, 1.0), (2, -1.0)],
        [(2, 1.0), (3, -1.0), (0, -1.0), (1, 1.0)],
        [(3, 1.0), (2, 1.0), (1, -1.0), (0, -1.0)],
    ];
    TABLE[a][b]
}

impl Quaternion {
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn pure(v: [f64; 3]) -> Self {
        Self::new(0.0, v[0], v[1], v[2])
    }

    pub fn imaginary(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sq(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn inverse(self) -> Result<Self> {
        let n = self.norm_sq();
        if n == 0.0 {
            return Err(Error::Singular("zero quaternion has no inverse".into()));
        }
        Ok(self.conj().scale(1.0 / n))
    }

    pub fn normalize(self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NonUnit(n));
        }
        Ok(self.scale(1.0 / n))
    }

    /// Errors unless `||self| − 1| ≤ UNIT_TOL`.
    pub fn check_unit(self) -> Result<Self> {
        let n = self.norm();
        if (n - 1.0).abs() > UNIT_TOL {
            Err(Error::NonUnit(n))
        } else {
            Ok(self)
        }
    }

    /// `cos(θ/2) + sin(θ/2) n` for a unit axis `n`; conjugation by it
    /// rotates by `θ` about `n`.
    pub fn from_axis_angle(axis: [f64; 3], angle: f64) -> Self {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        let (s, c) = (0.5 * angle).sin_cos();
        Self::new(c, s * axis[0] / n, s * axis[1] / n, s * axis[2] / n)
    }

    /// Matrix of `φ_u(x) = u x ū` on the imaginary quaternions.
    pub fn rotation_matrix(self) -> [[f64; 3]; 3] {
        let Quaternion { w, x, y, z } = self;
        [
            [
                w * w + x * x - y * y - z * z,
                2.0 * (x * y - w * z),
                2.0 * (x * z + w * y),
            ],
            [
                2.0 * (x * y + w * z),
                w * w - x * x + y * y - z * z,
                2.0 * (y * z - w * x),
            ],
            [
                2.0 * (x * z - w * y),
                2.0 * (y * z + w * x),
                w * w - x * x - y * y + z * z,
            ],
        ]
    }

    /// A unit `u` with `φ_u = r`, for `r ∈ SO(3)`; `w ≥ 0`.
    pub fn from_rotation_matrix(r: &[[f64; 3]; 3]) -> Self {
        let trace = r[0][0] + r[1][1] + r[2][2];
        let cands = [trace, r[0][0], r[1][1], r[2][2]];
        let big = (0..4)
            .max_by(|&a, &b| cands[a].total_cmp(&cands[b]))
            .unwrap();
        let q = match big {
            0 => {
                let s = (1.0 + trace).sqrt() * 2.0;
                Self::new(
                    0.25 * s,
                    (r[2][1] - r[1][2]) / s,
                    (r[0][2] - r[2][0]) / s,
                    (r[1][0] - r[0][1]) / s,
                )
            }
            1 => {
                let s = (1.0 + r[0][0] - r[1][1] - r[2][2]).sqrt() * 2.0;
                Self::new(
                    (r[2][1] - r[1][2]) / s,
                    0.25 * s,
                    (r[0][1] + r[1][0]) / s,
                    (r[0][2] + r[2][0]) / s,
                )
            }
            2 => {
                let s = (1.0 - r[0][0] + r[1][1] - r[2][2]).sqrt() * 2.0;
                Self::new(
                    (r[0][2] - r[2][0]) / s,
                    (r[0][1] + r[1][0]) / s,
                    0.25 * s,
                    (r[1][2] + r[2][1]) / s,
                )
            }
            _ => {
                let s = (1.0 - r[0][0] - r[1][1] + r[2][2]).sqrt() * 2.0;
                Self::new(
                    (r[1][0] - r[0][1]) / s,
                    (r[0][2] + r[2][0]) / s,
                    (r[1][2] + r[2][1]) / s,
                    0.25 * s,
                )
            }
        };
        let q = q.scale(1.0 / q.norm());
        if q.w < 0.0 {
            -q
        } else {
            q
        }
    }

    /// `φ_u(v) = u v ū` for a unit `u`.
    pub fn rotate(self, v: [f64; 3]) -> Result<[f64; 3]> {
        let u = self.check_unit()?;
        Ok((u * Quaternion::pure(v) * u.conj()).imaginary())
    }

    /// 4×4 matrix of left multiplication `x ↦ self · x` in the basis
    /// `(1, i, j, k)`.
    pub fn left_matrix(self) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        for (b, col) in Self::basis().iter().enumerate() {
            let v = (self * *col).to_array();
            for a in 0..4 {
                m[a][b] = v[a];
            }
        }
        m
    }

    /// 4×4 matrix of right multiplication `x ↦ x · self`.
    pub fn right_matrix(self) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        for (b, col) in Self::basis().iter().enumerate() {
            let v = (*col * self).to_array();
            for a in 0..4 {
                m[a][b] = v[a];
            }
        }
        m
    }

    pub fn basis() -> [Quaternion; 4] {
        [Self::ONE, Self::I, Self::J, Self::K]
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: Quaternion) -> Quaternion {
        let a = self.to_array();
        let b = rhs.to_array();
        let mut out = [0.0; 4];
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                let (c, s) = basis_product(i, j);
                out[c] += s * ai * bj;
            }
        }
        Quaternion::from_array(out)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(
            self.w + rhs.w,
            self.x + rhs.x,
            self.y + rhs.y,
            self.z + rhs.z,
        )
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Quaternion) -> Quaternion {
        self + (-rhs)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Quaternion, b: Quaternion) -> bool {
        (a - b).norm() < 1e-14
    }

    #[test]
    fn units() {
        assert_eq!(Quaternion::I * Quaternion::J, Quaternion::K);
        assert_eq!(Quaternion::J * Quaternion::K, Quaternion::I);
        assert_eq!(Quaternion::K * Quaternion::I, Quaternion::J);
        assert_eq!(Quaternion::J * Quaternion::I, -Quaternion::K);
        assert_eq!(Quaternion::I * Quaternion::I, -Quaternion::ONE);
    }

    #[test]
    fn examples() {
        let q = Quaternion::new(0.3, -1.2, 2.0, 0.7);
        assert!(close(
            q * q.conj(),
            Quaternion::new(q.norm_sq(), 0.0, 0.0, 0.0)
        ));
        let a = Quaternion::new(1.0, 1.0, 0.0, 0.0);
        let b = Quaternion::new(1.0, 0.0, 1.0, 0.0);
        assert_eq!(a * b, Quaternion::new(1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn conjugation_by_i() {
        let v = Quaternion::I.rotate([0.2, 0.5, -0.9]).unwrap();
        assert_eq!(v, [0.2, -0.5, 0.9]);
        assert!(matches!(
            Quaternion::new(1.0, 1.0, 0.0, 0.0).rotate([1.0, 0.0, 0.0]),
            Err(Error::NonUnit(_))
        ));
    }

    #[test]
    fn rotation_matrix_round_trip() {
        let u = Quaternion::new(0.2, -0.4, 0.5, 0.7).normalize().unwrap();
        let r = u.rotation_matrix();
        let v = Quaternion::from_rotation_matrix(&r);
        assert!(close(u, v) || close(u, -v));
        let x = [0.3, -0.1, 0.8];
        let rx = u.rotate(x).unwrap();
        for a in 0..3 {
            let m: f64 = (0..3).map(|b| r[a][b] * x[b]).sum();
            assert!((m - rx[a]).abs() < 1e-14);
        }
    }

    #[test]
    fn left_matrix_of_i() {
        let m = Quaternion::I.left_matrix();
        assert_eq!(m[1][0], 1.0);
        assert_eq!(m[0][1], -1.0);
        assert_eq!(m[3][2], 1.0);
        assert_eq!(m[2][3], -1.0);
    }
}
