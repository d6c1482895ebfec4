//! Truncated power series with complex coefficients (holomorphic jets).
//!
//! A [`ComplexJet`] carries the value and first N derivatives of a
//! holomorphic function at an expansion point, so products, reciprocals
//! and antiderivatives propagate derivatives exactly — no numerical
//! differentiation anywhere downstream.

use num_complex::Complex64;
use thiserror::Error;

/// Complex scalar used throughout the crate.
pub type Complex = Complex64;

/// Default truncation order. The boundary-series derivation needs
/// coefficients through w³ of the coordinate functions (through the
/// fourth coefficient of the Gauss map); 8 leaves headroom for products.
pub const DEFAULT_ORDER: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JetError {
    #[error("jet expansion bases differ: {0} vs {1}")]
    BaseMismatch(Complex, Complex),
    #[error("jet orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("reciprocal of a jet whose constant term is zero (pole at the expansion point)")]
    ZeroConstantTerm,
    #[error("derivative requires order >= 1")]
    OrderZero,
    #[error("non-finite jet coefficient")]
    NonFinite,
    #[error("a jet needs at least one coefficient")]
    Empty,
    #[error("cannot truncate a jet of order {0} to order {1}")]
    TruncationOrder(usize, usize),
}

/// Truncated Taylor expansion of a holomorphic function.
///
/// `coeffs[k]` multiplies `(w - base)^k`; the order is `coeffs.len() - 1`.
/// Jets are immutable after construction and all operations are pure, so
/// values can be shared freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexJet {
    base: Complex,
    coeffs: Vec<Complex>,
}

impl ComplexJet {
    /// Builds a jet from explicit coefficients `c0..cN` at `base`.
    pub fn new(base: Complex, coeffs: Vec<Complex>) -> Result<Self, JetError> {
        if coeffs.is_empty() {
            return Err(JetError::Empty);
        }
        if !base.re.is_finite()
            || !base.im.is_finite()
            || coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(JetError::NonFinite);
        }
        Ok(Self { base, coeffs })
    }

    /// Jet of a constant function.
    pub fn constant(base: Complex, value: Complex, order: usize) -> Self {
        let mut coeffs = vec![Complex::ZERO; order + 1];
        coeffs[0] = value;
        Self { base, coeffs }
    }

    /// Jet of the identity chart `w`, expanded at `base` (value `base`, slope 1).
    pub fn variable(base: Complex, order: usize) -> Self {
        let mut coeffs = vec![Complex::ZERO; order + 1];
        coeffs[0] = base;
        if order >= 1 {
            coeffs[1] = Complex::ONE;
        }
        Self { base, coeffs }
    }

    pub fn zero(base: Complex, order: usize) -> Self {
        Self::constant(base, Complex::ZERO, order)
    }

    pub fn base(&self) -> Complex {
        self.base
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    /// Coefficient of `(w - base)^k`.
    pub fn coeff(&self, k: usize) -> Complex {
        self.coeffs[k]
    }

    /// `k!·coeffs[k]`, the k-th derivative at the expansion point.
    pub fn derivative_at_base(&self, k: usize) -> Complex {
        let mut factorial = 1.0;
        for j in 2..=k {
            factorial *= j as f64;
        }
        self.coeffs[k] * factorial
    }

    fn check_compatible(&self, rhs: &Self) -> Result<(), JetError> {
        if self.base != rhs.base {
            return Err(JetError::BaseMismatch(self.base, rhs.base));
        }
        if self.order() != rhs.order() {
            return Err(JetError::OrderMismatch(self.order(), rhs.order()));
        }
        Ok(())
    }

    /// Coefficient-wise sum. Jets of distinct bases are never silently
    /// re-expanded; rebasing is the caller's job.
    pub fn add(&self, rhs: &Self) -> Result<Self, JetError> {
        self.check_compatible(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self { base: self.base, coeffs })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, JetError> {
        self.check_compatible(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self { base: self.base, coeffs })
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, rhs: &Self) -> Result<Self, JetError> {
        self.check_compatible(rhs)?;
        let n = self.coeffs.len();
        let mut coeffs = vec![Complex::ZERO; n];
        for i in 0..n {
            for j in 0..n - i {
                coeffs[i + j] += self.coeffs[i] * rhs.coeffs[j];
            }
        }
        Ok(Self { base: self.base, coeffs })
    }

    /// Multiplies every coefficient by a scalar.
    pub fn scale(&self, z: Complex) -> Self {
        Self {
            base: self.base,
            coeffs: self.coeffs.iter().map(|c| c * z).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(-Complex::ONE)
    }

    /// Series reciprocal: the jet `b` with `self·b = 1` up to truncation.
    pub fn recip(&self) -> Result<Self, JetError> {
        let c0 = self.coeffs[0];
        if c0 == Complex::ZERO {
            return Err(JetError::ZeroConstantTerm);
        }
        let n = self.coeffs.len();
        let mut coeffs = vec![Complex::ZERO; n];
        coeffs[0] = c0.inv();
        for k in 1..n {
            let mut acc = Complex::ZERO;
            for j in 1..=k {
                acc += self.coeffs[j] * coeffs[k - j];
            }
            coeffs[k] = -acc / c0;
        }
        Ok(Self { base: self.base, coeffs })
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, JetError> {
        self.mul(&rhs.recip()?)
    }

    /// Formal derivative; drops one order.
    pub fn derivative(&self) -> Result<Self, JetError> {
        if self.order() == 0 {
            return Err(JetError::OrderZero);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, c)| c * ((i + 1) as f64))
            .collect();
        Ok(Self { base: self.base, coeffs })
    }

    /// Formal antiderivative with the given constant term; gains one order.
    pub fn antiderivative(&self, constant: Complex) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(constant);
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c / ((i + 1) as f64)),
        );
        Self { base: self.base, coeffs }
    }

    /// Horner evaluation of the truncated polynomial at `w`. The caller is
    /// responsible for keeping `w` within the radius of validity.
    pub fn eval(&self, w: Complex) -> Complex {
        let h = w - self.base;
        let mut acc = Complex::ZERO;
        for c in self.coeffs.iter().rev() {
            acc = acc * h + c;
        }
        acc
    }

    /// Drops coefficients above order `m`.
    pub fn truncated(&self, m: usize) -> Result<Self, JetError> {
        if m > self.order() {
            return Err(JetError::TruncationOrder(self.order(), m));
        }
        Ok(Self {
            base: self.base,
            coeffs: self.coeffs[..=m].to_vec(),
        })
    }
}
