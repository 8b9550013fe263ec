//! Linearized polynomials Σ p_i X^{q^i} over F_{q^m} under composition.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{ExtElem, ExtField};

/// A q-polynomial. Coefficients are stored low to high with a nonzero
/// leading coefficient; the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct QPoly {
    field: ExtField,
    coeffs: Vec<ExtElem>,
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly{:?}", self.coeffs)
    }
}

impl QPoly {
    pub fn zero(field: &ExtField) -> Self {
        QPoly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    /// The identity map X.
    pub fn x(field: &ExtField) -> Self {
        Self::monomial(field, field.one(), 0)
    }

    /// c·X^{q^i}.
    pub fn monomial(field: &ExtField, c: ExtElem, i: usize) -> Self {
        let mut coeffs = vec![field.zero(); i + 1];
        coeffs[i] = c;
        Self::from_coeffs(field, coeffs)
    }

    pub fn from_coeffs(field: &ExtField, mut coeffs: Vec<ExtElem>) -> Self {
        while coeffs.last().is_some_and(ExtElem::is_zero) {
            coeffs.pop();
        }
        QPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn coeffs(&self) -> &[ExtElem] {
        &self.coeffs
    }

    /// Coefficient of X^{q^i}, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> ExtElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// q-degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| *c == self.field.one())
    }

    pub fn eval(&self, x: &ExtElem) -> ExtElem {
        let f = &self.field;
        let mut acc = f.zero();
        let mut pow = x.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                pow = f.frobenius1(&pow);
            }
            if !c.is_zero() {
                acc = f.add(&acc, &f.mul(c, &pow));
            }
        }
        acc
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(&self.coeff(i), &other.coeff(i))).collect();
        Self::from_coeffs(f, coeffs)
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(&self.coeff(i), &other.coeff(i))).collect();
        Self::from_coeffs(f, coeffs)
    }

    /// c·P, i.e. (cX)∘P.
    pub fn scale(&self, c: &ExtElem) -> QPoly {
        let coeffs = self.coeffs.iter().map(|a| self.field.mul(c, a)).collect();
        Self::from_coeffs(&self.field, coeffs)
    }

    /// P∘R, so that `(P∘R)(x) = P(R(x))`.
    pub fn compose(&self, r: &QPoly) -> QPoly {
        let f = &self.field;
        if self.is_zero() || r.is_zero() {
            return Self::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + r.coeffs.len() - 1];
        for (i, p) in self.coeffs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            for (j, rj) in r.coeffs.iter().enumerate() {
                let t = f.mul(p, &f.frobenius(rj, i));
                out[i + j] = f.add(&out[i + j], &t);
            }
        }
        Self::from_coeffs(f, out)
    }

    /// Division with `self = Q∘b + R` and `deg R < deg b`.
    pub fn left_divide(&self, b: &QPoly) -> Result<(QPoly, QPoly)> {
        let f = &self.field;
        let d = b.degree().ok_or(Error::DivisionByZero)?;
        let lead = &b.coeffs[d];
        let mut rem = self.clone();
        let mut quot = vec![f.zero(); self.coeffs.len().saturating_sub(d)];
        while let Some(a) = rem.degree().filter(|&a| a >= d) {
            let s = a - d;
            // (c X^{q^s})∘b leads with c·lead^{q^s}.
            let c = f
                .mul(&rem.coeffs[a], &f.inv(&f.frobenius(lead, s)).expect("nonzero"));
            rem = rem.sub(&Self::monomial(f, c.clone(), s).compose(b));
            quot[s] = c;
        }
        Ok((Self::from_coeffs(f, quot), rem))
    }

    /// Division by a left factor: `self = v∘Q + R` with `deg R < deg v`.
    pub fn divide_left_factor(&self, v: &QPoly) -> Result<(QPoly, QPoly)> {
        let f = &self.field;
        let t = v.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(&v.coeffs[t]).expect("nonzero");
        let mut rem = self.clone();
        let mut quot = vec![f.zero(); self.coeffs.len().saturating_sub(t)];
        while let Some(a) = rem.degree().filter(|&a| a >= t) {
            let s = a - t;
            // v∘(c X^{q^s}) leads with lead·c^{q^t}.
            let c = f.frobenius_inv(&f.mul(&rem.coeffs[a], &lead_inv), t);
            rem = rem.sub(&v.compose(&Self::monomial(f, c.clone(), s)));
            quot[s] = c;
        }
        Ok((Self::from_coeffs(f, quot), rem))
    }

    /// Monic q-polynomial of least degree vanishing on the F_q-span of `u`.
    pub fn annihilator(field: &ExtField, u: &[ExtElem]) -> QPoly {
        let mut p = Self::x(field);
        let q = field.q() as u64;
        for x in u {
            let w = p.eval(x);
            if w.is_zero() {
                continue;
            }
            // (X^q − w^{q−1} X) kills w, hence p(x).
            let step = Self::from_coeffs(
                field,
                vec![field.neg(&field.pow_u64(&w, q - 1)), field.one()],
            );
            p = step.compose(&p);
        }
        p
    }
}

/// Monic annihilator of span(U); its q-degree equals dim span(U).
pub fn min_qpoly_of_subspace(field: &ExtField, u: &[ExtElem]) -> QPoly {
    QPoly::annihilator(field, u)
}
