//! Euler–Poisson system in polynomial form.
//!
//! Twelve variables ordered `(Ω₁, Ω₂, Ω₃, R₁₁, R₁₂, …, R₃₃)`. Row indices
//! `i` and column indices `j` below are zero-based (`i = 0` is `G₁`).
//! Inertia moments enter as fixed rational constants.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{PolyVectorField, Polynomial};

pub const VARCOUNT: usize = 12;

/// Variable names used for rendering.
pub const NAMES: [&str; VARCOUNT] =
    ["W1", "W2", "W3", "R11", "R12", "R13", "R21", "R22", "R23", "R31", "R32", "R33"];

pub const fn omega_index(a: usize) -> usize {
    a
}

pub const fn r_index(i: usize, j: usize) -> usize {
    3 + 3 * i + j
}

pub fn omega(a: usize) -> Polynomial {
    Polynomial::var(VARCOUNT, omega_index(a)).expect("index < 3")
}

pub fn r(i: usize, j: usize) -> Polynomial {
    Polynomial::var(VARCOUNT, r_index(i, j)).expect("index < 12")
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// `I⁻¹[IΩ, Ω]` for principal moments `(I₁, I₂, I₃)`.
pub fn euler_components(moments: &[BigRational; 3]) -> [Polynomial; 3] {
    let [i1, i2, i3] = moments;
    let w = [omega(0), omega(1), omega(2)];
    [
        (&w[1] * &w[2]).scale(&((i2 - i3) / i1)),
        (&w[2] * &w[0]).scale(&((i3 - i1) / i2)),
        (&w[0] * &w[1]).scale(&((i1 - i2) / i3)),
    ]
}

/// `[G_i, Ω]_j`, the right side of the Poisson equation for `R_ij`.
pub fn poisson_component(i: usize, j: usize) -> Polynomial {
    let (a, b) = ((j + 1) % 3, (j + 2) % 3);
    &(&r(i, a) * &omega(b)) - &(&r(i, b) * &omega(a))
}

/// Full Euler–Poisson field for arbitrary principal moments.
pub fn field(moments: &[BigRational; 3]) -> PolyVectorField {
    let mut comps: Vec<Polynomial> = euler_components(moments).into();
    for i in 0..3 {
        for j in 0..3 {
            comps.push(poisson_component(i, j));
        }
    }
    PolyVectorField::new(comps).expect("all components share 12 variables")
}

/// [`field`] for floating-point moments, converted exactly (a finite `f64` is
/// a dyadic rational). `None` if a moment is not finite.
pub fn field_from_f64(moments: [f64; 3]) -> Option<PolyVectorField> {
    let [a, b, c] = moments.map(BigRational::from_float);
    Some(field(&[a?, b?, c?]))
}

/// Euler–Poisson field of the symmetric top `diag(I₂, I₂, I₃)`.
pub fn symmetric_field(i2: &BigRational, i3: &BigRational) -> PolyVectorField {
    field(&[i2.clone(), i2.clone(), i3.clone()])
}

/// The pure-Ω operator: Euler components only, the nine `R` components zero.
/// Acts identically to [`field`] on polynomials of `Ω` alone.
pub fn euler_field(moments: &[BigRational; 3]) -> PolyVectorField {
    let mut comps: Vec<Polynomial> = euler_components(moments).into();
    comps.extend((0..9).map(|_| Polynomial::zero(VARCOUNT)));
    PolyVectorField::new(comps).expect("all components share 12 variables")
}

/// `E = ½ Σ I_a Ω_a²`.
pub fn energy(moments: &[BigRational; 3]) -> Polynomial {
    let half = BigRational::new(1.into(), 2.into());
    (0..3).fold(Polynomial::zero(VARCOUNT), |acc, a| {
        &acc + &omega(a).pow(2).scale(&(&moments[a] * &half))
    })
}

/// `m_i = Σ_j I_j R_ij Ω_j`.
pub fn momentum(moments: &[BigRational; 3], i: usize) -> Polynomial {
    (0..3).fold(Polynomial::zero(VARCOUNT), |acc, j| {
        &acc + &(&r(i, j) * &omega(j)).scale(&moments[j])
    })
}

/// `Ω₁² + Ω₂²`.
pub fn transverse_sq() -> Polynomial {
    &omega(0).pow(2) + &omega(1).pow(2)
}

/// `|Ω|²`.
pub fn omega_sq() -> Polynomial {
    &transverse_sq() + &omega(2).pow(2)
}

/// `(AΩ, G_i)` for `A = diag(a₂, a₂, a₃)`.
pub fn paired(a2: &BigRational, a3: &BigRational, i: usize) -> Polynomial {
    let planar = &(&omega(0) * &r(i, 0)) + &(&omega(1) * &r(i, 1));
    &planar.scale(a2) + &(&omega(2) * &r(i, 2)).scale(a3)
}

/// `[G_i, Ω]₃ = R_i1 Ω₂ − R_i2 Ω₁`.
pub fn cross3(i: usize) -> Polynomial {
    poisson_component(i, 2)
}

/// `(MΩ, G_i)` with `M = diag(cΩ₃², cΩ₃², −(Ω₁²+Ω₂²))`, `c = I₃/I₂`.
pub fn m_paired(i2: &BigRational, i3: &BigRational, i: usize) -> Polynomial {
    let ratio = i3 / i2;
    let w3sq = omega(2).pow(2);
    let planar = &(&omega(0) * &r(i, 0)) + &(&omega(1) * &r(i, 1));
    let first = (&w3sq * &planar).scale(&ratio);
    let second = &(&transverse_sq() * &omega(2)) * &r(i, 2);
    &first - &second
}

/// `k′² = Ω₁² + Ω₂² + (I₃/I₂)² Ω₃²`.
pub fn k_sq(i2: &BigRational, i3: &BigRational) -> Polynomial {
    let ratio = i3 / i2;
    &transverse_sq() + &omega(2).pow(2).scale(&(&ratio * &ratio))
}

fn lemma1_prefactor(i2: &BigRational, i3: &BigRational, a2: &BigRational, a3: &BigRational) -> BigRational {
    a3 - &(i3 / i2) * a2
}

fn sign(n: usize) -> BigRational {
    if n.is_multiple_of(2) {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

/// Closed form of `D^{2n} (AΩ, G_i)` for `n ≥ 1`:
/// `(A₃ − (I₃/I₂)A₂) · (−(−1)ⁿ) k′^{2n−2} (MΩ, G_i)`.
/// Returns `None` for `n = 0`, where the formula does not apply.
pub fn lemma1_even_rhs(
    i2: &BigRational,
    i3: &BigRational,
    a2: &BigRational,
    a3: &BigRational,
    i: usize,
    n: usize,
) -> Option<Polynomial> {
    if n == 0 {
        return None;
    }
    let pref = lemma1_prefactor(i2, i3, a2, a3) * -sign(n);
    if pref.is_zero() {
        return Some(Polynomial::zero(VARCOUNT));
    }
    let body = &k_sq(i2, i3).pow((n - 1) as u32) * &m_paired(i2, i3, i);
    Some(body.scale(&pref))
}

/// Closed form of `D^{2n+1} (AΩ, G_i)` for `n ≥ 0`:
/// `(A₃ − (I₃/I₂)A₂) · (−1)ⁿ k′^{2n} Ω₃ [G_i, Ω]₃`.
pub fn lemma1_odd_rhs(
    i2: &BigRational,
    i3: &BigRational,
    a2: &BigRational,
    a3: &BigRational,
    i: usize,
    n: usize,
) -> Polynomial {
    let pref = lemma1_prefactor(i2, i3, a2, a3) * sign(n);
    if pref.is_zero() {
        return Polynomial::zero(VARCOUNT);
    }
    let body = &(&k_sq(i2, i3).pow(n as u32) * &omega(2)) * &cross3(i);
    body.scale(&pref)
}

/// `(B_i)_j` for the second-derivative identity: entries 0 and 1 are
/// `(B₂Ω, G_i)` with `B₂ = diag(1, 1, 2 − I₃/I₂)`; entry 2 is `(B₃Ω, G_i)`
/// with `B₃ = diag(I₃/I₂, I₃/I₂, 1)`.
pub fn b_entry(i2: &BigRational, i3: &BigRational, i: usize, j: usize) -> Polynomial {
    let ratio = i3 / i2;
    if j < 2 {
        paired(&BigRational::one(), &(int(2) - &ratio), i)
    } else {
        paired(&ratio, &BigRational::one(), i)
    }
}

/// Right side of `D² R_ij = −|Ω|² R_ij + (B_i)_j Ω_j`.
pub fn b_identity_rhs(i2: &BigRational, i3: &BigRational, i: usize, j: usize) -> Polynomial {
    let first = -&(&omega_sq() * &r(i, j));
    &first + &(&b_entry(i2, i3, i, j) * &omega(j))
}

/// Rational point `(Ω, R)` in variable order.
pub fn point(omega: [BigRational; 3], r: [[BigRational; 3]; 3]) -> Vec<BigRational> {
    let mut z: Vec<BigRational> = omega.into();
    for row in r {
        z.extend(row);
    }
    z
}

/// Identity rotation as rational rows.
pub fn identity_rows() -> [[BigRational; 3]; 3] {
    let o = BigRational::one;
    let z = BigRational::zero;
    [[o(), z(), z()], [z(), o(), z()], [z(), z(), o()]]
}
