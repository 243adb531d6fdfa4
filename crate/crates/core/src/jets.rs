//! Truncated Taylor series arithmetic.
//!
//! A [`Jet`] of order `m` at base point `a` stores the normalized Taylor
//! coefficients `f^(k)(a) / k!` for `k = 0..=m`. Arithmetic and composition
//! with `sin`, `cos` and `exp` propagate these coefficients exactly (up to
//! rounding), which is how one-sided derivatives of the target functions are
//! obtained without finite differencing.

use crate::error::{Error, Result};

/// Largest jet order accepted by the constructors.
pub const MAX_JET_ORDER: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    base: f64,
    coeffs: Vec<f64>,
}

impl Jet {
    /// Jet of the identity map `x` expanded at `base`.
    pub fn var(base: f64, order: usize) -> Result<Self> {
        let mut jet = Self::constant(base, base, order)?;
        if order >= 1 {
            jet.coeffs[1] = 1.0;
        }
        Ok(jet)
    }

    pub fn constant(base: f64, value: f64, order: usize) -> Result<Self> {
        check_order(order)?;
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Ok(Self { base, coeffs })
    }

    /// Builds a jet from normalized Taylor coefficients.
    pub fn from_coeffs(base: f64, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain("a jet needs at least one coefficient".into()));
        }
        check_order(coeffs.len() - 1)?;
        Ok(Self { base, coeffs })
    }

    /// Builds a jet from raw derivative values `[f(a), f'(a), ..., f^(m)(a)]`.
    pub fn from_derivatives(base: f64, derivs: &[f64]) -> Result<Self> {
        let mut fact = 1.0;
        let coeffs = derivs
            .iter()
            .enumerate()
            .map(|(k, d)| {
                if k > 0 {
                    fact *= k as f64;
                }
                d / fact
            })
            .collect();
        Self::from_coeffs(base, coeffs)
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// `d^k f / dx^k` at the base point, i.e. `k! * coeffs[k]`.
    pub fn derivative(&self, k: usize) -> Option<f64> {
        let c = *self.coeffs.get(k)?;
        Some(c * factorial(k))
    }

    /// All derivatives `[f(a), f'(a), ..., f^(m)(a)]`.
    pub fn derivatives(&self) -> Vec<f64> {
        let mut fact = 1.0;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k > 0 {
                    fact *= k as f64;
                }
                c * fact
            })
            .collect()
    }

    /// Jet of `f'`; the order drops by one.
    pub fn differentiate(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::Domain("cannot differentiate an order-0 jet".into()));
        }
        let coeffs = (1..self.coeffs.len()).map(|k| k as f64 * self.coeffs[k]).collect();
        Ok(Self {
            base: self.base,
            coeffs,
        })
    }

    fn check_compatible(&self, other: &Jet) -> Result<()> {
        if self.base != other.base {
            return Err(Error::JetMismatch(format!(
                "base points differ ({} vs {})",
                self.base, other.base
            )));
        }
        if self.order() != other.order() {
            return Err(Error::JetMismatch(format!(
                "orders differ ({} vs {})",
                self.order(),
                other.order()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Jet) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Jet) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Jet) -> Result<Self> {
        self.check_compatible(other)?;
        let n = self.coeffs.len();
        let coeffs = (0..n)
            .map(|k| (0..=k).map(|j| self.coeffs[j] * other.coeffs[k - j]).sum())
            .collect();
        Ok(Self {
            base: self.base,
            coeffs,
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.map(|c| c * factor)
    }

    pub fn add_scalar(&self, value: f64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += value;
        out
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c)
    }

    /// `(sin u, cos u)` computed together, since each recurrence feeds the other.
    pub fn sin_cos(&self) -> (Self, Self) {
        let u = &self.coeffs;
        let n = u.len();
        let mut s = vec![0.0; n];
        let mut c = vec![0.0; n];
        (s[0], c[0]) = u[0].sin_cos();
        for k in 1..n {
            let (mut ds, mut dc) = (0.0, 0.0);
            for j in 1..=k {
                let ju = j as f64 * u[j];
                ds += ju * c[k - j];
                dc -= ju * s[k - j];
            }
            s[k] = ds / k as f64;
            c[k] = dc / k as f64;
        }
        (
            Self {
                base: self.base,
                coeffs: s,
            },
            Self {
                base: self.base,
                coeffs: c,
            },
        )
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }

    pub fn exp(&self) -> Self {
        let u = &self.coeffs;
        let n = u.len();
        let mut e = vec![0.0; n];
        e[0] = u[0].exp();
        for k in 1..n {
            let acc: f64 = (1..=k).map(|j| j as f64 * u[j] * e[k - j]).sum();
            e[k] = acc / k as f64;
        }
        Self {
            base: self.base,
            coeffs: e,
        }
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            base: self.base,
            coeffs: self.coeffs.iter().copied().map(f).collect(),
        }
    }

    fn zip_with(&self, other: &Jet, f: impl Fn(f64, f64) -> f64) -> Self {
        Self {
            base: self.base,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f(a, b)).collect(),
        }
    }
}

fn check_order(order: usize) -> Result<()> {
    if order > MAX_JET_ORDER {
        return Err(Error::UnsupportedOrder {
            requested: order,
            max: MAX_JET_ORDER,
        });
    }
    Ok(())
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}
