use num_bigint::BigInt;

use super::{PolyError, Polynomial};

/// Largest `n` accepted by [`PolyVectorField::apply_n`] unless a caller
/// passes its own cap.
pub const DEFAULT_ORDER_CAP: usize = 8;

/// Polynomial vector field `h = (h^0, …, h^{p-1})` on `p` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyVectorField {
    components: Vec<Polynomial>,
}

impl PolyVectorField {
    /// Every component must live in the same `p = components.len()` variables.
    pub fn new(components: Vec<Polynomial>) -> Result<Self, PolyError> {
        let p = components.len();
        if let Some(bad) = components.iter().find(|c| c.varcount() != p) {
            return Err(PolyError::VarcountMismatch { left: p, right: bad.varcount() });
        }
        Ok(PolyVectorField { components })
    }

    pub fn varcount(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    /// `D p = Σ_k h^k ∂p/∂z^k`.
    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial, PolyError> {
        if p.varcount() != self.varcount() {
            return Err(PolyError::VarcountMismatch { left: self.varcount(), right: p.varcount() });
        }
        let mut out = Polynomial::zero(p.varcount());
        for (m, c) in &p.terms {
            for (k, h) in self.components.iter().enumerate() {
                let e = m.0[k];
                if e == 0 || h.is_zero() {
                    continue;
                }
                let mut dm = m.clone();
                dm.0[k] -= 1;
                let dc = c * BigInt::from(e);
                for (hm, hc) in &h.terms {
                    out.add_term(dm.mul(hm), &dc * hc);
                }
            }
        }
        Ok(out)
    }

    /// `Dⁿ p` with the default order cap.
    pub fn apply_n(&self, p: &Polynomial, n: usize) -> Result<Polynomial, PolyError> {
        self.apply_n_capped(p, n, DEFAULT_ORDER_CAP)
    }

    pub fn apply_n_capped(
        &self,
        p: &Polynomial,
        n: usize,
        cap: usize,
    ) -> Result<Polynomial, PolyError> {
        Ok(self.iterates_capped(p, n, cap)?.pop().expect("at least D⁰"))
    }

    /// `[p, Dp, …, Dⁿp]` under the default cap.
    pub fn iterates(&self, p: &Polynomial, n: usize) -> Result<Vec<Polynomial>, PolyError> {
        self.iterates_capped(p, n, DEFAULT_ORDER_CAP)
    }

    pub fn iterates_capped(
        &self,
        p: &Polynomial,
        n: usize,
        cap: usize,
    ) -> Result<Vec<Polynomial>, PolyError> {
        if n > cap {
            return Err(PolyError::OrderCapExceeded { requested: n, cap });
        }
        if p.varcount() != self.varcount() {
            return Err(PolyError::VarcountMismatch { left: self.varcount(), right: p.varcount() });
        }
        let mut out = Vec::with_capacity(n + 1);
        out.push(p.clone());
        for _ in 0..n {
            let next = self.apply(out.last().unwrap())?;
            out.push(next);
        }
        Ok(out)
    }

    /// True iff `D p = 0`, i.e. `p` is an integral of motion of the flow.
    pub fn is_integral(&self, p: &Polynomial) -> Result<bool, PolyError> {
        Ok(self.apply(p)?.is_zero())
    }

    /// Evaluates `h(z)` in floating point.
    pub fn eval_f64(&self, z: &[f64]) -> Result<Vec<f64>, PolyError> {
        self.components.iter().map(|c| c.eval_f64(z)).collect()
    }
}
