//! Elementary-function solutions of the Euler–Poisson equations for a
//! symmetric top `I = diag(I₂, I₂, I₃)`.
//!
//! [`omega_solution`] and [`r_general`] solve the Cauchy problem with
//! arbitrary data `(Ω′, R′)`; `R′` need not be a rotation. The `R_i1`, `R_i2`
//! columns are recovered from `R_i3(t)`, `Ṙ_i3(t)` and the conserved momentum
//! through the linear relations
//!
//! ```text
//! Ω₂ R_i1 − Ω₁ R_i2 = Ṙ_i3,    I₂(Ω₁ R_i1 + Ω₂ R_i2) = m_i − I₃ Ω₃ R_i3,
//! ```
//!
//! which requires `Ω₁′² + Ω₂′² ≠ 0`. When the transverse part vanishes the
//! rows precess about axis 3 at rate `Ω₃′` ([`r_precession`]).
//!
//! The quantity `(MΩ′, G_i′)/Ω₃′` that appears in `R_i3(t)` is computed in the
//! cancelled form `(I₃/I₂)Ω₃′(Ω₁′R′_i1 + Ω₂′R′_i2) − (Ω₁′² + Ω₂′²)R′_i3`, so the
//! general solution stays defined at `Ω₃′ = 0`. The momentum combination
//! `m_i − I₃Ω₃′R_i3(t)` is likewise formed from its small parts only, which
//! keeps the reconstruction accurate as the transverse velocity shrinks.
//!
//! [`rigid`] holds the rigid-body specialisation (`R′ = 1`), and [`series`]
//! the power-series coefficients used as independent checks.

pub mod rigid;
pub mod series;

pub use rigid::{
    align_frame, precession_geometry, rigid_motion, rigid_omega, rigid_rotation,
    PrecessionGeometry, RigidParams,
};
pub use series::{
    b2_omega1_derivative, r11_coefficient, r11_coefficient_with, r11_derivative,
    r11_partial_sum, SeriesScalar,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::body::{DiagInertia, Mat3, StateError, Vec3};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClosedFormError {
    #[error(transparent)]
    State(#[from] StateError),
    #[error("R_i3 formula divides by Ω₃′, which is zero; use r_general")]
    ZeroOmega3,
    #[error("transverse angular velocity is zero; the reconstruction needs Ω₁′² + Ω₂′² > 0")]
    NoTransverseVelocity,
    #[error("momentum has m₁ = {m1:e}; rotate the lab frame with align_frame first")]
    MomentumNotAligned { m1: f64 },
    #[error("zero angular momentum")]
    ZeroMomentum,
    #[error("even-order formula needs n ≥ 1")]
    EvenOrderZero,
}

/// `T₃` generating the rotation of `Ω` about body axis 3.
pub const T3: Mat3 = Mat3([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]);

/// Selects branch B when `Ω₁′² + Ω₂′² ≤ DEGENERACY_FACTOR · (|Ω′|² + floor)`.
pub const DEGENERACY_FACTOR: f64 = f64::EPSILON * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralSolutionInput {
    pub inertia: DiagInertia,
    pub omega0: Vec3,
    pub r0: Mat3,
}

impl GeneralSolutionInput {
    pub fn new(inertia: DiagInertia, omega0: Vec3, r0: Mat3) -> Result<Self, ClosedFormError> {
        if !omega0.is_finite() {
            return Err(StateError::NonFinite("initial angular velocity").into());
        }
        if !r0.is_finite() {
            return Err(StateError::NonFinite("initial matrix").into());
        }
        Ok(GeneralSolutionInput { inertia, omega0, r0 })
    }

    fn transverse_sq(&self) -> f64 {
        self.omega0.x * self.omega0.x + self.omega0.y * self.omega0.y
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesConstants {
    /// `φ′ = (I₂ − I₃)Ω₃′/I₂`
    pub phi_p: f64,
    /// `k′ = √(Ω₁′² + Ω₂′² + (I₃/I₂)²Ω₃′²)`
    pub k_p: f64,
    /// Diagonal of `M`.
    pub m_mat: [f64; 3],
    /// Diagonals of `B₂` and `B₃`.
    pub b2: [f64; 3],
    pub b3: [f64; 3],
}

pub fn series_constants(inp: &GeneralSolutionInput) -> SeriesConstants {
    let c = inp.inertia.ratio();
    let w = inp.omega0;
    let s = inp.transverse_sq();
    let m12 = c * w.z * w.z;
    SeriesConstants {
        phi_p: phi_prime(inp),
        k_p: (s + c * c * w.z * w.z).sqrt(),
        m_mat: [m12, m12, -s],
        b2: [1.0, 1.0, 2.0 - c],
        b3: [c, c, 1.0],
    }
}

/// `(sin ab, cos ab)` with the rounding error of the product `ab` folded
/// back in to first order, so the phase is accurate for large `t`.
pub(crate) fn sin_cos_mul(a: f64, b: f64) -> (f64, f64) {
    let hi = a * b;
    let lo = a.mul_add(b, -hi);
    let (s, c) = hi.sin_cos();
    if !lo.is_finite() {
        return (s, c);
    }
    (s + c * lo, c - s * lo)
}

/// `1 − cos ab`, computed as `2 sin²(ab/2)`.
pub(crate) fn one_minus_cos_mul(a: f64, b: f64) -> f64 {
    let half = sin_cos_mul(0.5 * a, b).0;
    2.0 * half * half
}

fn phi_prime(inp: &GeneralSolutionInput) -> f64 {
    (inp.inertia.i2() - inp.inertia.i3()) * inp.omega0.z / inp.inertia.i2()
}

pub fn omega_solution(inp: &GeneralSolutionInput, t: f64) -> Vec3 {
    let (s, c) = sin_cos_mul(phi_prime(inp), t);
    let w = inp.omega0;
    Vec3::new(w.x * c + w.y * s, -w.x * s + w.y * c, w.z)
}

/// Per-row pieces shared by the third column and the reconstruction.
#[derive(Debug, Clone, Copy)]
struct ThirdColumn {
    /// `R_i3(t)`
    value: f64,
    /// `Ṙ_i3(t)`
    rate: f64,
    /// `R_i3(t) − R′_i3`
    shift: f64,
}

struct Kinematics {
    k_p: f64,
    sin_kt: f64,
    cos_kt: f64,
    one_minus_cos_kt: f64,
}

impl Kinematics {
    fn new(inp: &GeneralSolutionInput, t: f64) -> Self {
        let k_p = series_constants(inp).k_p;
        let (sin_kt, cos_kt) = sin_cos_mul(k_p, t);
        Kinematics { k_p, sin_kt, cos_kt, one_minus_cos_kt: one_minus_cos_mul(k_p, t) }
    }
}

fn third_column(inp: &GeneralSolutionInput, kin: &Kinematics, i: usize) -> ThirdColumn {
    let g = inp.r0.row(i);
    let w = inp.omega0;
    if kin.k_p == 0.0 {
        return ThirdColumn { value: g.z, rate: 0.0, shift: 0.0 };
    }
    let c = inp.inertia.ratio();
    let s = inp.transverse_sq();
    // (MΩ′, G_i′)/Ω₃′ and [G_i′, Ω′]₃
    let q = c * w.z * (w.x * g.x + w.y * g.y) - s * g.z;
    let x = g.x * w.y - g.y * w.x;
    let k = kin.k_p;
    let shift = kin.one_minus_cos_kt * q / (k * k) + kin.sin_kt * x / k;
    ThirdColumn { value: g.z + shift, rate: kin.sin_kt * q / k + kin.cos_kt * x, shift }
}

/// `R_i3(t)` for the three rows. Requires `Ω₃′ ≠ 0`; [`r_general`] has no
/// such restriction and returns the same column.
pub fn r3_solution(inp: &GeneralSolutionInput, t: f64) -> Result<Vec3, ClosedFormError> {
    if inp.omega0.z == 0.0 {
        return Err(ClosedFormError::ZeroOmega3);
    }
    let kin = Kinematics::new(inp, t);
    Ok(Vec3::new(
        third_column(inp, &kin, 0).value,
        third_column(inp, &kin, 1).value,
        third_column(inp, &kin, 2).value,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `Ω₁′² + Ω₂′² > 0`: columns 1–2 reconstructed from column 3.
    Transverse,
    /// `Ω₁′ = Ω₂′ = 0` (to within [`DEGENERACY_FACTOR`]): precession about axis 3.
    Precession,
}

pub fn branch_of(inp: &GeneralSolutionInput) -> Branch {
    let s = inp.transverse_sq();
    let scale = inp.omega0.dot(inp.omega0) + f64::MIN_POSITIVE;
    if s > DEGENERACY_FACTOR * scale {
        Branch::Transverse
    } else {
        Branch::Precession
    }
}

/// Full `R(t)` for arbitrary Cauchy data.
pub fn r_general(inp: &GeneralSolutionInput, t: f64) -> Mat3 {
    match branch_of(inp) {
        Branch::Transverse => transverse(inp, t),
        Branch::Precession => r_precession(inp, t),
    }
}

/// The reconstruction branch alone; errors only when `Ω₁′ = Ω₂′ = 0` exactly.
pub fn r_general_transverse(inp: &GeneralSolutionInput, t: f64) -> Result<Mat3, ClosedFormError> {
    if inp.transverse_sq() == 0.0 {
        return Err(ClosedFormError::NoTransverseVelocity);
    }
    Ok(transverse(inp, t))
}

fn transverse(inp: &GeneralSolutionInput, t: f64) -> Mat3 {
    let kin = Kinematics::new(inp, t);
    let w = inp.omega0;
    let s = inp.transverse_sq();
    let ratio = inp.inertia.ratio();
    let om = omega_solution(inp, t);
    let mut rows = [[0.0; 3]; 3];
    for (i, row) in rows.iter_mut().enumerate() {
        let g = inp.r0.row(i);
        let col = third_column(inp, &kin, i);
        // (m_i − I₃Ω₃′R_i3(t)) / I₂
        let p = (w.x * g.x + w.y * g.y) - ratio * w.z * col.shift;
        row[0] = (om.y * col.rate + p * om.x) / s;
        row[1] = (-om.x * col.rate + p * om.y) / s;
        row[2] = col.value;
    }
    Mat3(rows)
}

/// Branch B: rows rotate about axis 3 at rate `Ω₃′`; column 3 is shared with
/// the general path.
pub fn r_precession(inp: &GeneralSolutionInput, t: f64) -> Mat3 {
    let kin = Kinematics::new(inp, t);
    let (s, c) = sin_cos_mul(inp.omega0.z, t);
    let mut rows = [[0.0; 3]; 3];
    for (i, row) in rows.iter_mut().enumerate() {
        let g = inp.r0.row(i);
        row[0] = g.x * c + g.y * s;
        row[1] = -g.x * s + g.y * c;
        row[2] = third_column(inp, &kin, i).value;
    }
    Mat3(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// `D^{2n}`, `n ≥ 1`
    Even,
    /// `D^{2n+1}`, `n ≥ 0`
    Odd,
}

/// Numerical value of `D^{2n}` or `D^{2n+1}` applied to `(AΩ′, G_i′)` with
/// `A = diag(a₂, a₂, a₃)`, from the closed form. Row `i` is zero-based.
pub fn lemma1_value(
    inp: &GeneralSolutionInput,
    a2: f64,
    a3: f64,
    i: usize,
    n: u32,
    parity: Parity,
) -> Result<f64, ClosedFormError> {
    let c = inp.inertia.ratio();
    let w = inp.omega0;
    let g = inp.r0.row(i);
    let s = inp.transverse_sq();
    let k_sq = s + c * c * w.z * w.z;
    let pref = a3 - c * a2;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    match parity {
        Parity::Even => {
            if n == 0 {
                return Err(ClosedFormError::EvenOrderZero);
            }
            let m_pair = c * w.z * w.z * (w.x * g.x + w.y * g.y) - s * w.z * g.z;
            Ok(-pref * sign * k_sq.powi(n as i32 - 1) * m_pair)
        }
        Parity::Odd => {
            let x = g.x * w.y - g.y * w.x;
            Ok(pref * sign * k_sq.powi(n as i32) * w.z * x)
        }
    }
}
