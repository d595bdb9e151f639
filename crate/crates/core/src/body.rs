//! Rigid-body state, inertia data and the integrals of motion.
//!
//! Row convention: the i-th row of the rotation matrix `R` is the vector
//! `G_i = (R_i1, R_i2, R_i3)`. Columns of `R` are the body axes expressed in
//! the laboratory frame. Every module in this crate uses this convention.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute bound on `‖R Rᵀ − 1‖_max` and `|det R − 1|` for a matrix to count
/// as a rotation.
pub const ROTATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("inertia moments must be positive, got {0:?}")]
    NonPositiveInertia([f64; 3]),
    #[error("moments {0:?} do not describe a symmetric top (I1 != I2)")]
    NotSymmetric([f64; 3]),
    #[error("matrix is not a rotation: orthogonality defect {ortho:e}, det {det}")]
    NotRotation { ortho: f64, det: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    /// Unchecked constructor for arithmetic on values already known finite.
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    /// Validating constructor; rejects NaN and infinities.
    pub fn try_new(x: f64, y: f64, z: f64) -> Result<Self, StateError> {
        let v = Vec3 { x, y, z };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(StateError::NonFinite("vector"))
        }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    /// `[a, b]_i = ε_ijk a_j b_k`.
    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn max_abs_diff(self, o: Vec3) -> f64 {
        (self.x - o.x)
            .abs()
            .max((self.y - o.y).abs())
            .max((self.z - o.z).abs())
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

impl IndexMut<usize> for Vec3 {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        match i {
            0 => &mut self.x,
            1 => &mut self.y,
            2 => &mut self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// 3×3 matrix, row-major. `m[i][j]` is `R_(i+1)(j+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Default for Mat3 {
    fn default() -> Self {
        Mat3::IDENTITY
    }
}

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
    pub const ZERO: Mat3 = Mat3([[0.0; 3]; 3]);

    pub fn try_new(rows: [[f64; 3]; 3]) -> Result<Self, StateError> {
        let m = Mat3(rows);
        if m.is_finite() {
            Ok(m)
        } else {
            Err(StateError::NonFinite("matrix"))
        }
    }

    /// Builds from nine values in row-major order.
    pub fn from_row_major(v: [f64; 9]) -> Self {
        Mat3([[v[0], v[1], v[2]], [v[3], v[4], v[5]], [v[6], v[7], v[8]]])
    }

    pub fn to_row_major(&self) -> [f64; 9] {
        let m = &self.0;
        [
            m[0][0], m[0][1], m[0][2], m[1][0], m[1][1], m[1][2], m[2][0], m[2][1], m[2][2],
        ]
    }

    pub fn from_rows(r: [Vec3; 3]) -> Self {
        Mat3([r[0].to_array(), r[1].to_array(), r[2].to_array()])
    }

    pub fn from_cols(c: [Vec3; 3]) -> Self {
        Mat3::from_rows(c).transpose()
    }

    /// Row `G_i`.
    pub fn row(&self, i: usize) -> Vec3 {
        Vec3::from_array(self.0[i])
    }

    pub fn col(&self, j: usize) -> Vec3 {
        Vec3::new(self.0[0][j], self.0[1][j], self.0[2][j])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }

    pub fn transpose(&self) -> Mat3 {
        let m = &self.0;
        Mat3([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    pub fn mul_vec(&self, v: Vec3) -> Vec3 {
        Vec3::new(self.row(0).dot(v), self.row(1).dot(v), self.row(2).dot(v))
    }

    pub fn det(&self) -> f64 {
        self.row(0).dot(self.row(1).cross(self.row(2)))
    }

    /// `‖M Mᵀ − 1‖_max`.
    pub fn orthogonality_defect(&self) -> f64 {
        let p = *self * self.transpose();
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((p.0[i][j] - target).abs());
            }
        }
        worst
    }

    pub fn is_rotation(&self, tol: f64) -> bool {
        self.is_finite() && self.orthogonality_defect() <= tol && (self.det() - 1.0).abs() <= tol
    }

    /// Validates the rotation tag at [`ROTATION_TOL`].
    pub fn check_rotation(&self) -> Result<(), StateError> {
        if !self.is_finite() {
            return Err(StateError::NonFinite("matrix"));
        }
        if self.is_rotation(ROTATION_TOL) {
            Ok(())
        } else {
            Err(StateError::NotRotation { ortho: self.orthogonality_defect(), det: self.det() })
        }
    }

    pub fn max_abs_diff(&self, o: &Mat3) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(o.0.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Rotation about lab axis 3 by `angle`: `[[c, −s, 0], [s, c, 0], [0, 0, 1]]`.
    pub fn rot_z(angle: f64) -> Mat3 {
        let (s, c) = angle.sin_cos();
        Mat3([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, o: Mat3) -> Mat3 {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        Mat3(out)
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, o: Mat3) -> Mat3 {
        let mut out = self.0;
        for (row, orow) in out.iter_mut().zip(o.0.iter()) {
            for (v, w) in row.iter_mut().zip(orow) {
                *v += w;
            }
        }
        Mat3(out)
    }
}

/// Principal moments `(I₁, I₂, I₃)` of a body, not necessarily symmetric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrincipalMoments(pub [f64; 3]);

impl PrincipalMoments {
    pub fn new(i1: f64, i2: f64, i3: f64) -> Result<Self, StateError> {
        let m = [i1, i2, i3];
        if m.iter().any(|v| !v.is_finite()) {
            return Err(StateError::NonFinite("inertia"));
        }
        if m.iter().any(|&v| v <= 0.0) {
            return Err(StateError::NonPositiveInertia(m));
        }
        Ok(PrincipalMoments(m))
    }

    pub fn is_symmetric(&self) -> bool {
        self.0[0] == self.0[1]
    }
}

/// Symmetric-top inertia `diag(I₂, I₂, I₃)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagInertia {
    i2: f64,
    i3: f64,
}

impl DiagInertia {
    pub fn new(i2: f64, i3: f64) -> Result<Self, StateError> {
        let m = [i2, i2, i3];
        if !i2.is_finite() || !i3.is_finite() {
            return Err(StateError::NonFinite("inertia"));
        }
        if i2 <= 0.0 || i3 <= 0.0 {
            return Err(StateError::NonPositiveInertia(m));
        }
        Ok(DiagInertia { i2, i3 })
    }

    pub fn i2(&self) -> f64 {
        self.i2
    }

    pub fn i3(&self) -> f64 {
        self.i3
    }

    /// `I₃/I₂`.
    pub fn ratio(&self) -> f64 {
        self.i3 / self.i2
    }

    /// Spherical body (`I₂ = I₃`): the precession frequency vanishes.
    pub fn is_spherical(&self) -> bool {
        self.i2 == self.i3
    }

    pub fn moments(&self) -> [f64; 3] {
        [self.i2, self.i2, self.i3]
    }
}

impl From<DiagInertia> for PrincipalMoments {
    fn from(d: DiagInertia) -> Self {
        PrincipalMoments(d.moments())
    }
}

impl TryFrom<PrincipalMoments> for DiagInertia {
    type Error = StateError;
    fn try_from(p: PrincipalMoments) -> Result<Self, StateError> {
        if !p.is_symmetric() {
            return Err(StateError::NotSymmetric(p.0));
        }
        DiagInertia::new(p.0[1], p.0[2])
    }
}

/// Angular velocity in the body frame plus the body→lab rotation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BodyState {
    pub omega: Vec3,
    pub r: Mat3,
}

impl BodyState {
    /// Validated constructor: finite entries, `r` a rotation within [`ROTATION_TOL`].
    pub fn new(omega: Vec3, r: Mat3) -> Result<Self, StateError> {
        if !omega.is_finite() {
            return Err(StateError::NonFinite("angular velocity"));
        }
        r.check_rotation()?;
        Ok(BodyState { omega, r })
    }

    /// Skips the rotation check; used for integrator output whose drift is
    /// itself the quantity under test.
    pub fn from_parts_unchecked(omega: Vec3, r: Mat3) -> Self {
        BodyState { omega, r }
    }

    /// Packs as `(Ω₁, Ω₂, Ω₃, R₁₁, …, R₃₃)`.
    pub fn to_array(&self) -> [f64; 12] {
        let mut z = [0.0; 12];
        z[..3].copy_from_slice(&self.omega.to_array());
        z[3..].copy_from_slice(&self.r.to_row_major());
        z
    }

    pub fn from_array(z: &[f64]) -> Self {
        assert_eq!(z.len(), 12, "body state has 12 components");
        let mut r = [0.0; 9];
        r.copy_from_slice(&z[3..12]);
        BodyState { omega: Vec3::new(z[0], z[1], z[2]), r: Mat3::from_row_major(r) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotionInvariants {
    pub energy: f64,
    pub momentum: Vec3,
    pub omega3: f64,
}

/// `E = ½ Σ I_i Ω_i²`, `m_i = Σ_j I_j R_ij Ω_j`, and `Ω₃`.
pub fn invariants_of(inertia: impl Into<PrincipalMoments>, state: &BodyState) -> MotionInvariants {
    let i = inertia.into().0;
    let w = state.omega;
    let iw = Vec3::new(i[0] * w.x, i[1] * w.y, i[2] * w.z);
    MotionInvariants {
        energy: 0.5 * (iw.x * w.x + iw.y * w.y + iw.z * w.z),
        momentum: state.r.mul_vec(iw),
        omega3: w.z,
    }
}

/// Rigid-body initial data: `R = 1`, `Ω_i = m_i / I_i`.
pub fn rigid_initial_state(inertia: impl Into<PrincipalMoments>, momentum: Vec3) -> BodyState {
    let i = inertia.into().0;
    BodyState {
        omega: Vec3::new(momentum.x / i[0], momentum.y / i[1], momentum.z / i[2]),
        r: Mat3::IDENTITY,
    }
}
