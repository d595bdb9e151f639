//! Rigid-body motion of a free symmetric top (`R(0) = 1`, `Ω(0) = m/I`).
//!
//! The closed form is written in the lab frame adapted to the momentum,
//! where `m₁ = 0`. Because `I₁ = I₂`, rotating lab axes 1–2 and body axes
//! 1–2 by the same angle about axis 3 keeps the inertia diagonal and the
//! initial orientation equal to the identity. With `Q` from [`align_frame`]
//! (`Q m = (0, √(m₁² + m₂²), m₃)`), the solution for arbitrary `m` is
//!
//! ```text
//! R(t) = Qᵀ R_aligned(t) Q,    Ω(t) = Qᵀ Ω_aligned(t).
//! ```
//!
//! [`rigid_motion`] applies this conjugation.

use serde::{Deserialize, Serialize};

use super::{one_minus_cos_mul, sin_cos_mul, ClosedFormError};
use crate::body::{BodyState, DiagInertia, Mat3, Vec3};

/// Tolerance on `|m₁|` relative to `|m|` for the adapted frame.
pub const ALIGNMENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RigidParams {
    /// `φ = (I₂ − I₃)m₃/(I₂I₃)`
    pub phi: f64,
    /// `k = |m|/I₂`
    pub k: f64,
    /// `m/|m|`, zero when `m = 0`
    pub mhat: Vec3,
}

impl RigidParams {
    pub fn new(inertia: &DiagInertia, momentum: Vec3) -> Self {
        let (i2, i3) = (inertia.i2(), inertia.i3());
        let norm = momentum.norm();
        RigidParams {
            phi: (i2 - i3) * momentum.z / (i2 * i3),
            k: norm / i2,
            mhat: if norm > 0.0 {
                Vec3::new(momentum.x / norm, momentum.y / norm, momentum.z / norm)
            } else {
                Vec3::ZERO
            },
        }
    }
}

fn check_aligned(momentum: Vec3) -> Result<(), ClosedFormError> {
    if !momentum.is_finite() {
        return Err(crate::body::StateError::NonFinite("momentum").into());
    }
    if momentum.x.abs() > ALIGNMENT_TOL * momentum.norm() {
        return Err(ClosedFormError::MomentumNotAligned { m1: momentum.x });
    }
    Ok(())
}

/// Rotation matrix of the free symmetric top, momentum given with `m₁ = 0`.
pub fn rigid_rotation(
    inertia: &DiagInertia,
    momentum: Vec3,
    t: f64,
) -> Result<Mat3, ClosedFormError> {
    check_aligned(momentum)?;
    if momentum.norm() == 0.0 {
        return Ok(Mat3::IDENTITY);
    }
    let p = RigidParams::new(inertia, momentum);
    let (m2, m3) = (p.mhat.y, p.mhat.z);
    if m2 == 0.0 {
        let (s, c) = sin_cos_mul(momentum.z / inertia.i3(), t);
        return Ok(Mat3([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]));
    }
    let (sk, ck) = sin_cos_mul(p.k, t);
    let (sp, cp) = sin_cos_mul(p.phi, t);
    let one_minus_ck = one_minus_cos_mul(p.k, t);
    // m̂₂² + m̂₃² = 1 in the adapted frame
    let a = 1.0 - m3 * m3 * one_minus_ck;
    let b = m2 * m3 * one_minus_ck;
    Ok(Mat3([
        [ck * cp - m3 * sk * sp, -ck * sp - m3 * sk * cp, m2 * sk],
        [m3 * sk * cp + a * sp, -m3 * sk * sp + a * cp, b],
        [-m2 * sk * cp + b * sp, m2 * sk * sp + b * cp, 1.0 - m2 * m2 * one_minus_ck],
    ]))
}

/// Body-frame angular velocity of the rigid motion, `m₁ = 0`.
pub fn rigid_omega(inertia: &DiagInertia, momentum: Vec3, t: f64) -> Result<Vec3, ClosedFormError> {
    check_aligned(momentum)?;
    let p = RigidParams::new(inertia, momentum);
    let w = momentum.y / inertia.i2();
    let (s, c) = sin_cos_mul(p.phi, t);
    Ok(Vec3::new(w * s, w * c, momentum.z / inertia.i3()))
}

/// Rotation about axis 3 taking `m` to `(0, √(m₁² + m₂²), m₃)`, and that image.
pub fn align_frame(momentum: Vec3) -> (Mat3, Vec3) {
    let rho = momentum.x.hypot(momentum.y);
    if rho == 0.0 {
        return (Mat3::IDENTITY, momentum);
    }
    let (u, v) = (momentum.x / rho, momentum.y / rho);
    let q = Mat3([[v, -u, 0.0], [u, v, 0.0], [0.0, 0.0, 1.0]]);
    (q, Vec3::new(0.0, rho, momentum.z))
}

/// Full rigid state at `t` for any momentum, via frame conjugation.
pub fn rigid_motion(
    inertia: &DiagInertia,
    momentum: Vec3,
    t: f64,
) -> Result<BodyState, ClosedFormError> {
    if !momentum.is_finite() {
        return Err(crate::body::StateError::NonFinite("momentum").into());
    }
    let (q, aligned) = align_frame(momentum);
    let r = rigid_rotation(inertia, aligned, t)?;
    let w = rigid_omega(inertia, aligned, t)?;
    let qt = q.transpose();
    Ok(BodyState::from_parts_unchecked(qt.mul_vec(w), qt * r * q))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecessionGeometry {
    /// Cosine of the angle between `m̂` and the symmetry axis `R₃(t)`.
    pub cos_theta: f64,
    /// `|Ṙ₃(t)|` from the analytic derivative.
    pub r3_speed: f64,
}

/// Cone geometry of the symmetry axis (third column of `R`), `m₁ = 0`.
pub fn precession_geometry(
    inertia: &DiagInertia,
    momentum: Vec3,
    t: f64,
) -> Result<PrecessionGeometry, ClosedFormError> {
    check_aligned(momentum)?;
    if momentum.norm() == 0.0 {
        return Err(ClosedFormError::ZeroMomentum);
    }
    let p = RigidParams::new(inertia, momentum);
    let axis = rigid_rotation(inertia, momentum, t)?.col(2);
    let (m2, m3) = (p.mhat.y, p.mhat.z);
    let (sk, ck) = sin_cos_mul(p.k, t);
    let rate = Vec3::new(m2 * ck, m2 * m3 * sk, -m2 * m2 * sk).scale(p.k);
    Ok(PrecessionGeometry { cos_theta: p.mhat.dot(axis), r3_speed: rate.norm() })
}
