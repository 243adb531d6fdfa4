//! Two-point trigonometric Hermite interpolation on `[-1, 1]`.
//!
//! `H(x) = sum_{k=-(m+1)}^{m} c_k e^{i w_k x}` with `w_k = (2k+1) pi / 4`
//! matches prescribed derivatives `H^{(s)}(-1) = alpha_s` and
//! `H^{(s)}(1) = beta_s` for `s = 0..=m`.

use std::f64::consts::FRAC_PI_4;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jets::{Jet, MAX_JET_ORDER};
use crate::network::Branch;

const CONDITION_WARN: f64 = 1e10;

#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    order: usize,
    coeffs: Vec<Complex64>,
}

/// Frequency `(2k+1) pi / 4` of mode `k`.
pub fn mode_frequency(k: i64) -> f64 {
    (2 * k + 1) as f64 * FRAC_PI_4
}

/// `i^s w^s`.
fn ipow(w: f64, s: usize) -> Complex64 {
    let mag = w.powi(s as i32);
    match s % 4 {
        0 => Complex64::new(mag, 0.0),
        1 => Complex64::new(0.0, mag),
        2 => Complex64::new(-mag, 0.0),
        _ => Complex64::new(0.0, -mag),
    }
}

impl TrigPoly {
    /// `coeffs[i]` belongs to mode `k = i - (m+1)`.
    pub fn new(order: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != 2 * (order + 1) {
            return Err(Error::Domain(format!(
                "order {order} needs {} coefficients, got {}",
                2 * (order + 1),
                coeffs.len()
            )));
        }
        Ok(Self { order, coeffs })
    }

    pub fn zero(order: usize) -> Self {
        Self {
            order,
            coeffs: vec![Complex64::new(0.0, 0.0); 2 * (order + 1)],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Mode indices `k = -(m+1)..=m`, aligned with [`Self::coeffs`].
    pub fn modes(&self) -> impl Iterator<Item = i64> {
        let m = self.order as i64;
        -(m + 1)..=m
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.modes().map(mode_frequency).collect()
    }

    /// Coefficient of mode `k`.
    pub fn coeff(&self, k: i64) -> Complex64 {
        self.coeffs[(k + self.order as i64 + 1) as usize]
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `sum_k c_k (i w_k)^s e^{i w_k x}` without discarding the imaginary part.
    pub fn deriv_complex(&self, x: f64, s: usize) -> Complex64 {
        self.modes()
            .zip(&self.coeffs)
            .map(|(k, c)| {
                let w = mode_frequency(k);
                c * ipow(w, s) * Complex64::from_polar(1.0, w * x)
            })
            .sum()
    }

    /// Real part of the `s`-th derivative at `x`.
    pub fn deriv(&self, x: f64, s: usize) -> f64 {
        self.deriv_complex(x, s).re
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.deriv(x, 0)
    }

    /// `[H(x), H'(x), ..., H^{(n)}(x)]`.
    pub fn derivatives(&self, x: f64, n: usize) -> Vec<f64> {
        (0..=n).map(|s| self.deriv(x, s)).collect()
    }

    /// `Re H` composed with a jet.
    pub fn eval_jet(&self, x: &Jet) -> Result<Jet> {
        let mut acc = Jet::constant(x.base(), 0.0, x.order())?;
        for (k, c) in self.modes().zip(&self.coeffs) {
            let (s, co) = x.scale(mode_frequency(k)).sin_cos();
            acc = acc.add(&co.scale(c.re))?.add(&s.scale(-c.im))?;
        }
        Ok(acc)
    }

    /// Largest `|H^{(s)}|` on a uniform grid of `n >= 2` points over `[lo, hi]`.
    pub fn max_abs_deriv(&self, s: usize, lo: f64, hi: f64, n: usize) -> f64 {
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .map(|x| self.deriv(x, s).abs())
            .fold(0.0, f64::max)
    }

    /// One neuron per complex mode (`2(m+1)` neurons, negative frequencies kept).
    pub fn to_mode_branch(&self) -> Branch {
        Branch::from_complex(&self.frequencies(), &self.coeffs).expect("finite coefficients give a valid branch")
    }

    /// Folds each `+-w` pair into one neuron at positive frequency (`m+1` neurons).
    pub fn to_branch(&self) -> Branch {
        let m = self.order as i64;
        let (freqs, folded): (Vec<f64>, Vec<Complex64>) = (0..=m)
            .map(|k| (mode_frequency(k), self.coeff(k) + self.coeff(-k - 1).conj()))
            .unzip();
        Branch::from_complex(&freqs, &folded).expect("finite coefficients give a valid branch")
    }
}

/// Solves the `2(m+1)` endpoint conditions by dense LU with row equilibration.
pub fn hermite_endpoint(alphas: &[f64], betas: &[f64]) -> Result<TrigPoly> {
    if alphas.len() != betas.len() || alphas.is_empty() {
        return Err(Error::Domain(format!(
            "endpoint data must be nonempty and of equal length (got {} and {})",
            alphas.len(),
            betas.len()
        )));
    }
    let m = alphas.len() - 1;
    if m > MAX_JET_ORDER {
        return Err(Error::UnsupportedOrder {
            requested: m,
            max: MAX_JET_ORDER,
        });
    }
    let n = 2 * (m + 1);
    let modes: Vec<i64> = (-(m as i64 + 1)..=m as i64).collect();
    let mut a = DMatrix::<Complex64>::zeros(n, n);
    let mut rhs = nalgebra::DVector::<Complex64>::zeros(n);
    for s in 0..=m {
        for (row, (x, target)) in [(2 * s, (-1.0, alphas[s])), (2 * s + 1, (1.0, betas[s]))] {
            for (col, &k) in modes.iter().enumerate() {
                let w = mode_frequency(k);
                a[(row, col)] = ipow(w, s) * Complex64::from_polar(1.0, w * x);
            }
            let scale = (0..n).map(|c| a[(row, c)].norm()).fold(0.0, f64::max);
            for col in 0..n {
                a[(row, col)] /= scale;
            }
            rhs[row] = Complex64::new(target / scale, 0.0);
        }
    }

    let norm1 = |mat: &DMatrix<Complex64>| {
        (0..mat.ncols())
            .map(|c| mat.column(c).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    let lu = a.clone().lu();
    let inverse = lu.try_inverse().ok_or(Error::Singular {
        condition: f64::INFINITY,
    })?;
    let condition = norm1(&a) * norm1(&inverse);
    if !condition.is_finite() {
        return Err(Error::Singular { condition });
    }
    if condition > CONDITION_WARN {
        log::warn!("Hermite system for m = {m} is ill-conditioned (estimate {condition:e})");
    }
    let coeffs = lu.solve(&rhs).ok_or(Error::Singular { condition })?;
    TrigPoly::new(m, coeffs.iter().copied().collect())
}
