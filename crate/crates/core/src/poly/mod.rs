//! Sparse multivariate polynomials with exact rational coefficients, and the
//! derivation operator `D = h^k ∂/∂z^k` of a polynomial vector field.
//!
//! Terms are kept in a map keyed by [`Monomial`] under graded-lexicographic
//! order, with zero coefficients never stored, so two polynomials are equal
//! exactly when their term maps are equal. Rendering walks the terms from the
//! highest monomial down, which makes printed polynomials stable fixtures.

mod field;
pub mod ep;

pub use field::{PolyVectorField, DEFAULT_ORDER_CAP};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable count mismatch: {left} vs {right}")]
    VarcountMismatch { left: usize, right: usize },
    #[error("derivation order {requested} exceeds the symbolic cap {cap}")]
    OrderCapExceeded { requested: usize, cap: usize },
    #[error("variable index {index} out of range for {varcount} variables")]
    VariableOutOfRange { index: usize, varcount: usize },
}

/// Shorthand for an exact rational from a numerator/denominator pair.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exponent vector, one entry per variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(varcount: usize) -> Self {
        Monomial(vec![0; varcount])
    }

    pub fn var(varcount: usize, index: usize) -> Self {
        let mut e = vec![0; varcount];
        e[index] = 1;
        Monomial(e)
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn varcount(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    varcount: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero(varcount: usize) -> Self {
        Polynomial { varcount, terms: BTreeMap::new() }
    }

    pub fn constant(varcount: usize, c: BigRational) -> Self {
        let mut p = Polynomial::zero(varcount);
        p.add_term(Monomial::one(varcount), c);
        p
    }

    pub fn one(varcount: usize) -> Self {
        Polynomial::constant(varcount, BigRational::one())
    }

    /// The coordinate polynomial `z_index`.
    pub fn var(varcount: usize, index: usize) -> Result<Self, PolyError> {
        if index >= varcount {
            return Err(PolyError::VariableOutOfRange { index, varcount });
        }
        let mut p = Polynomial::zero(varcount);
        p.add_term(Monomial::var(varcount, index), BigRational::one());
        Ok(p)
    }

    /// Builds from `(coefficient, exponents)` pairs; like terms are merged.
    pub fn from_terms<I>(varcount: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (BigRational, Vec<u32>)>,
    {
        let mut p = Polynomial::zero(varcount);
        for (c, e) in terms {
            if e.len() != varcount {
                return Err(PolyError::VarcountMismatch { left: varcount, right: e.len() });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    pub fn varcount(&self) -> usize {
        self.varcount
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check(&self, o: &Polynomial) -> Result<(), PolyError> {
        if self.varcount == o.varcount {
            Ok(())
        } else {
            Err(PolyError::VarcountMismatch { left: self.varcount, right: o.varcount })
        }
    }

    pub fn try_add(&self, o: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(o)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, o: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(o)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, o: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(o)?;
        let mut out = Polynomial::zero(self.varcount);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &BigRational) -> Polynomial {
        if s.is_zero() {
            return Polynomial::zero(self.varcount);
        }
        Polynomial {
            varcount: self.varcount,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut out = Polynomial::one(self.varcount);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// `∂p/∂z_index`.
    pub fn partial(&self, index: usize) -> Result<Polynomial, PolyError> {
        if index >= self.varcount {
            return Err(PolyError::VariableOutOfRange { index, varcount: self.varcount });
        }
        let mut out = Polynomial::zero(self.varcount);
        for (m, c) in &self.terms {
            let e = m.0[index];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[index] -= 1;
            out.add_term(dm, c * BigInt::from(e));
        }
        Ok(out)
    }

    pub fn eval_rational(&self, point: &[BigRational]) -> Result<BigRational, PolyError> {
        if point.len() != self.varcount {
            return Err(PolyError::VarcountMismatch { left: self.varcount, right: point.len() });
        }
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, point: &[f64]) -> Result<f64, PolyError> {
        if point.len() != self.varcount {
            return Err(PolyError::VarcountMismatch { left: self.varcount, right: point.len() });
        }
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut t = rational_to_f64(c);
                for (x, &e) in point.iter().zip(&m.0) {
                    if e > 0 {
                        t *= x.powi(e as i32);
                    }
                }
                t
            })
            .sum())
    }

    /// Renders with the given variable names, e.g. `3/2*W1^2*R11 - 1*W2`.
    pub fn render(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            s.push_str(&c.abs().to_string());
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => {
                        s.push('*');
                        s.push_str(names.get(i).copied().unwrap_or("?"));
                    }
                    _ => {
                        s.push('*');
                        s.push_str(names.get(i).copied().unwrap_or("?"));
                        s.push('^');
                        s.push_str(&e.to_string());
                    }
                }
            }
        }
        s
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let owned: Vec<String> = (0..self.varcount).map(|i| format!("z{i}")).collect();
        let names: Vec<&str> = owned.iter().map(String::as_str).collect();
        f.write_str(&self.render(&names))
    }
}

// Operator forms panic on varcount mismatch; the `try_*` methods report it.
impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        self.try_add(o).expect("polynomial varcount mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        self.try_sub(o).expect("polynomial varcount mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        self.try_mul(o).expect("polynomial varcount mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-BigRational::one())
    }
}
