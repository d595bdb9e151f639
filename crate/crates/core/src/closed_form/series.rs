//! Power-series coefficients of the rigid motion at `t = 0`.
//!
//! For rigid data (`R′ = 1`, `m₁ = 0`) the even derivatives of `R₁₁` are
//!
//! ```text
//! D^{2n} R′₁₁ = (−1)ⁿ [ Σ_{j=0}^{n} C(2n, 2j) k^{2j} φ^{2n−2j}
//!                      + m̂₃ Σ_{j=0}^{n−1} C(2n, 2j+1) k^{2j+1} φ^{2n−2j−1} ]
//! ```
//!
//! and every odd derivative vanishes. Summing the series gives
//! `cos kt cos φt − m̂₃ sin kt sin φt`. The functions are generic over
//! [`SeriesScalar`] so the same code yields exact rationals for the symbolic
//! cross-check.

use std::ops::Neg;

use num_rational::BigRational;
use num_traits::Num;

use super::rigid::RigidParams;
use super::ClosedFormError;
use crate::body::{DiagInertia, Vec3};

/// Field of coefficients: `f64` or exact rationals.
pub trait SeriesScalar: Clone + Num + Neg<Output = Self> {
    fn from_i64(v: i64) -> Self;
}

impl SeriesScalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl SeriesScalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
}

fn binomial<T: SeriesScalar>(n: usize, k: usize) -> T {
    let mut c = T::one();
    for i in 0..k {
        c = c * T::from_i64((n - i) as i64) / T::from_i64((i + 1) as i64);
    }
    c
}

fn pow<T: SeriesScalar>(x: &T, e: usize) -> T {
    let mut out = T::one();
    for _ in 0..e {
        out = out * x.clone();
    }
    out
}

/// `D^{2n} R′₁₁` from `k`, `φ` and `m̂₃`.
pub fn r11_coefficient_with<T: SeriesScalar>(k: &T, phi: &T, mhat3: &T, n: usize) -> T {
    let even = (0..=n).fold(T::zero(), |acc, j| {
        acc + binomial::<T>(2 * n, 2 * j) * pow(k, 2 * j) * pow(phi, 2 * n - 2 * j)
    });
    let odd = (0..n).fold(T::zero(), |acc, j| {
        acc + binomial::<T>(2 * n, 2 * j + 1) * pow(k, 2 * j + 1) * pow(phi, 2 * n - 2 * j - 1)
    });
    let value = even + mhat3.clone() * odd;
    if n.is_multiple_of(2) {
        value
    } else {
        -value
    }
}

fn rigid_params(inertia: &DiagInertia, momentum: Vec3) -> Result<RigidParams, ClosedFormError> {
    if !momentum.is_finite() {
        return Err(crate::body::StateError::NonFinite("momentum").into());
    }
    if momentum.norm() == 0.0 {
        return Err(ClosedFormError::ZeroMomentum);
    }
    if momentum.x.abs() > super::rigid::ALIGNMENT_TOL * momentum.norm() {
        return Err(ClosedFormError::MomentumNotAligned { m1: momentum.x });
    }
    Ok(RigidParams::new(inertia, momentum))
}

/// `D^{2n} R′₁₁` for the rigid datum `(inertia, momentum)`, `m₁ = 0`.
pub fn r11_coefficient(
    inertia: &DiagInertia,
    momentum: Vec3,
    n: usize,
) -> Result<f64, ClosedFormError> {
    let p = rigid_params(inertia, momentum)?;
    Ok(r11_coefficient_with(&p.k, &p.phi, &p.mhat.z, n))
}

/// `D^{order} R′₁₁`; zero for odd orders.
pub fn r11_derivative(
    inertia: &DiagInertia,
    momentum: Vec3,
    order: usize,
) -> Result<f64, ClosedFormError> {
    if order % 2 == 1 {
        rigid_params(inertia, momentum)?;
        return Ok(0.0);
    }
    r11_coefficient(inertia, momentum, order / 2)
}

/// `Σ_{n=0}^{n_max} t^{2n}/(2n)! · D^{2n}R′₁₁`.
///
/// Each term is accumulated as `Σ_j (kt)^a/a! · (φt)^b/b!`, the same quantity
/// with the factorials distributed, so large `n_max` does not overflow.
pub fn r11_partial_sum(
    inertia: &DiagInertia,
    momentum: Vec3,
    t: f64,
    n_max: usize,
) -> Result<f64, ClosedFormError> {
    let p = rigid_params(inertia, momentum)?;
    let (kt, pt) = (p.k * t, p.phi * t);
    let top = 2 * n_max + 1;
    // scaled powers x^a / a!
    let scaled = |x: f64| {
        let mut v = Vec::with_capacity(top + 1);
        v.push(1.0);
        for a in 1..=top {
            let prev = v[a - 1];
            v.push(prev * x / a as f64);
        }
        v
    };
    let (ks, ps) = (scaled(kt), scaled(pt));
    let mut sum = 0.0;
    for n in 0..=n_max {
        let even: f64 = (0..=n).map(|j| ks[2 * j] * ps[2 * n - 2 * j]).sum();
        let odd: f64 = (0..n).map(|j| ks[2 * j + 1] * ps[2 * n - 2 * j - 1]).sum();
        let term = even + p.mhat.z * odd;
        sum += if n % 2 == 0 { term } else { -term };
    }
    Ok(sum)
}

/// `D^{order}[(B₂Ω′, G₁′)Ω₁′]` at the rigid datum, from the Leibniz
/// expansion: zero for odd orders and for order 0, otherwise
/// `−2 m̂₂² (−1)ⁿ Σ_{b=0}^{n−1} C(2n, 2b+1) k^{2b+2} φ^{2n−2b}` with `order = 2n`.
pub fn b2_omega1_derivative<T: SeriesScalar>(k: &T, phi: &T, mhat2: &T, order: usize) -> T {
    if order % 2 == 1 || order == 0 {
        return T::zero();
    }
    let n = order / 2;
    let sum = (0..n).fold(T::zero(), |acc, b| {
        acc + binomial::<T>(2 * n, 2 * b + 1) * pow(k, 2 * b + 2) * pow(phi, 2 * n - 2 * b)
    });
    let v = T::from_i64(-2) * mhat2.clone() * mhat2.clone() * sum;
    if n.is_multiple_of(2) {
        v
    } else {
        -v
    }
}
