//! Shallow Fourier approximation of smooth non-periodic functions on `[-1, 1]`.
//!
//! A Hermite polynomial `H` takes over the endpoint mismatch of `f`, so that
//! `g = f - H` extends to a `C^m` periodic function whose Fourier coefficients
//! decay like `|k|^{-m}`. The approximation is `F = H + G_W`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::hermite::{hermite_endpoint, TrigPoly};
use crate::network::Branch;
use crate::quadrature::{QuadratureConfig, QuadratureRule};

/// `g_k = (1/2) int_{-1}^{1} g(x) e^{-i k pi x} dx` for `k = -K..=K`.
pub fn fourier_coeffs<F: Fn(f64) -> f64>(g: F, half_modes: usize, quad: &QuadratureConfig) -> Result<Vec<Complex64>> {
    let rule = quad.rule()?;
    Ok(fourier_coeffs_with(&rule, g, half_modes))
}

fn fourier_coeffs_with<F: Fn(f64) -> f64>(rule: &QuadratureRule, g: F, half_modes: usize) -> Vec<Complex64> {
    let samples: Vec<f64> = rule
        .nodes()
        .iter()
        .zip(rule.weights())
        .map(|(&x, &w)| 0.5 * w * g(x))
        .collect();
    let k_max = half_modes as i64;
    (-k_max..=k_max)
        .map(|k| {
            let w = k as f64 * PI;
            rule.nodes()
                .iter()
                .zip(&samples)
                .map(|(&x, &s)| s * Complex64::from_polar(1.0, -w * x))
                .sum()
        })
        .collect()
}

/// `F = H + G_W` for a smooth function on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothApprox {
    hermite: TrigPoly,
    /// Coefficients of `G_W`, index `k + K`.
    coeffs: Vec<Complex64>,
}

impl SmoothApprox {
    /// `minus` and `plus` hold `[f, f', ..., f^(m)]` at `-1` and `+1`.
    pub fn build<F: Fn(f64) -> f64>(
        f: F,
        minus: &[f64],
        plus: &[f64],
        half_modes: usize,
        quad: &QuadratureConfig,
    ) -> Result<Self> {
        let hermite = hermite_endpoint(minus, plus)?;
        let coeffs = fourier_coeffs(|x| f(x) - hermite.eval(x), half_modes, quad)?;
        Ok(Self { hermite, coeffs })
    }

    pub fn hermite(&self) -> &TrigPoly {
        &self.hermite
    }

    pub fn half_modes(&self) -> usize {
        (self.coeffs.len() - 1) / 2
    }

    /// `g_k` for `k = -K..=K`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        self.coeffs[(k + self.half_modes() as i64) as usize]
    }

    /// The truncated series `G_W(x)`.
    pub fn series(&self, x: f64) -> f64 {
        let k_max = self.half_modes() as i64;
        (-k_max..=k_max)
            .zip(&self.coeffs)
            .map(|(k, c)| (c * Complex64::from_polar(1.0, k as f64 * PI * x)).re)
            .sum()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.hermite.eval(x) + self.series(x)
    }

    /// Neurons for `G_W` at frequencies `k pi`, `k = -(K-1)..=K`.
    ///
    /// The `k = -K` mode is folded into the `k = K` neuron, so the `2K + 1`
    /// modes take `2K` neurons. `K = 0` keeps the constant mode alone.
    pub fn series_branch(&self) -> Branch {
        let k_max = self.half_modes() as i64;
        if k_max == 0 {
            return Branch::from_complex(&[0.0], &self.coeffs).expect("finite coefficients");
        }
        let (freqs, coeffs): (Vec<f64>, Vec<Complex64>) = (-(k_max - 1)..=k_max)
            .map(|k| {
                let c = if k == k_max {
                    self.coeff(k) + self.coeff(-k).conj()
                } else {
                    self.coeff(k)
                };
                (k as f64 * PI, c)
            })
            .collect();
        Branch::from_complex(&freqs, &coeffs).expect("finite coefficients")
    }

    /// Hermite neurons (one per mode) followed by the series neurons.
    pub fn to_branch(&self) -> Branch {
        let mut branch = self.hermite.to_mode_branch();
        branch.extend(&self.series_branch());
        branch
    }
}

/// The branch realizing [`SmoothApprox`] for `f`.
pub fn build_smooth_branch<F: Fn(f64) -> f64>(
    f: F,
    minus: &[f64],
    plus: &[f64],
    half_modes: usize,
    quad: &QuadratureConfig,
) -> Result<Branch> {
    Ok(SmoothApprox::build(f, minus, plus, half_modes, quad)?.to_branch())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::Jet;
    use crate::targets::{PiecewiseTarget, Side};

    fn quad() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn endpoint_data(t: &PiecewiseTarget, m: usize) -> (Vec<f64>, Vec<f64>) {
        (
            t.one_sided_derivs(-1.0, Side::Right, m).unwrap(),
            t.one_sided_derivs(1.0, Side::Left, m).unwrap(),
        )
    }

    #[test]
    fn orthogonality() {
        let c = fourier_coeffs(|x| (PI * x).sin(), 2, &quad()).unwrap();
        assert!((c[3] - Complex64::new(0.0, -0.5)).norm() < 1e-12);
        assert!((c[1] - Complex64::new(0.0, 0.5)).norm() < 1e-12);
        for i in [0, 2, 4] {
            assert!(c[i].norm() <= 1e-12);
        }
        let c = fourier_coeffs(|x| (PI * x).cos(), 1, &quad()).unwrap();
        assert!((c[0] - 0.5).norm() < 1e-12 && (c[2] - 0.5).norm() < 1e-12);
        let c = fourier_coeffs(|_| 1.0, 3, &quad()).unwrap();
        assert!((c[3] - 1.0).norm() < 1e-12);
        assert!(c.iter().enumerate().all(|(i, z)| i == 3 || z.norm() <= 1e-12));
    }

    #[test]
    fn periodic_input_needs_no_hermite_part() {
        // sin^2(pi x) and its first derivative vanish at both ends.
        let f = |x: f64| (PI * x).sin().powi(2);
        let derivs = |x: f64| {
            let s = Jet::var(x, 1).unwrap().scale(PI).sin();
            s.mul(&s).unwrap().derivatives()
        };
        let approx = SmoothApprox::build(f, &derivs(-1.0), &derivs(1.0), 3, &quad()).unwrap();
        assert!(approx.hermite().max_coeff() <= 1e-9);
        let branch = approx.to_branch();
        for x in [-0.9, -0.3, 0.2, 0.7] {
            assert!((branch.eval(x) - f(x)).abs() < 1e-9);
        }

        let approx = SmoothApprox::build(|x| (PI * x).sin(), &[0.0], &[0.0], 3, &quad()).unwrap();
        assert_eq!(approx.hermite().max_coeff(), 0.0);
        for x in [-0.9, -0.3, 0.2, 0.7] {
            assert!((approx.eval(x) - (PI * x).sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_with_hermite_only() {
        let approx = SmoothApprox::build(|x| x, &[-1.0, 1.0], &[1.0, 1.0], 0, &quad()).unwrap();
        let h = approx.hermite();
        assert!((h.eval(-1.0) + 1.0).abs() < 1e-12 && (h.eval(1.0) - 1.0).abs() < 1e-12);
        assert!((h.deriv(-1.0, 1) - 1.0).abs() < 1e-12 && (h.deriv(1.0, 1) - 1.0).abs() < 1e-12);
        let branch = approx.to_branch();
        assert_eq!(branch.width(), 5);
        for x in [-0.5, 0.0, 0.5] {
            assert!((branch.eval(x) - x).abs() < 0.15, "x={x}");
            assert!((branch.eval(x) - approx.eval(x)).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_function() {
        let branch = build_smooth_branch(|_| 0.0, &[0.0; 3], &[0.0; 3], 8, &quad()).unwrap();
        assert!(branch.amplitudes().all(|a| a <= 1e-12));
        assert_eq!(branch.width(), 16 + 6);
    }

    #[test]
    fn residual_is_periodizable() {
        let t = PiecewiseTarget::lookup("smooth_nonper").unwrap();
        for m in 1..=5 {
            let (minus, plus) = endpoint_data(&t, m);
            let approx = SmoothApprox::build(|x| t.value(x), &minus, &plus, 4, &quad()).unwrap();
            let scale = 1.0 + minus.iter().chain(&plus).fold(0.0f64, |a, v| a.max(v.abs()));
            for s in 0..=m {
                let g_minus = minus[s] - approx.hermite().deriv(-1.0, s);
                let g_plus = plus[s] - approx.hermite().deriv(1.0, s);
                assert!((g_minus - g_plus).abs() <= 1e-8 * scale, "m={m} s={s}");
            }
        }
    }

    #[test]
    fn parseval() {
        let t = PiecewiseTarget::lookup("smooth_nonper").unwrap();
        let (minus, plus) = endpoint_data(&t, 2);
        let approx = SmoothApprox::build(|x| t.value(x), &minus, &plus, 24, &quad()).unwrap();
        let energy: f64 = approx.coeffs().iter().map(|c| c.norm_sqr()).sum();
        let rule = quad().rule().unwrap();
        let quadrature = 0.5 * rule.integrate(|x| approx.series(x).powi(2));
        assert!((energy - quadrature).abs() <= 1e-8 * energy);
    }

    #[test]
    fn series_branch_folds_exactly() {
        let t = PiecewiseTarget::lookup("smooth_nonper").unwrap();
        let (minus, plus) = endpoint_data(&t, 3);
        for k in [0, 1, 5, 16] {
            let approx = SmoothApprox::build(|x| t.value(x), &minus, &plus, k, &quad()).unwrap();
            let branch = approx.series_branch();
            assert_eq!(branch.width(), (2 * k).max(1));
            for x in [-0.95, -0.1, 0.33, 0.8] {
                assert!((branch.eval(x) - approx.series(x)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn coefficient_decay() {
        let t = PiecewiseTarget::lookup("smooth_nonper").unwrap();
        let m = 4;
        let (minus, plus) = endpoint_data(&t, m);
        let k_max = 64;
        let approx = SmoothApprox::build(|x| t.value(x), &minus, &plus, k_max, &quad()).unwrap();
        let (xs, ys): (Vec<f64>, Vec<f64>) = (4..=k_max as i64)
            .map(|k| ((k as f64).ln(), approx.coeff(k).norm().ln()))
            .unzip();
        let n = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let slope = sxy / sxx;
        assert!(slope <= -(m as f64) + 0.5, "slope {slope}");
    }

    #[test]
    fn l2_convergence_in_width() {
        let t = PiecewiseTarget::lookup("smooth_nonper").unwrap();
        let rule = quad().rule().unwrap();
        for m in 1..=4 {
            let (minus, plus) = endpoint_data(&t, m);
            let widths = [2usize, 4, 8, 16, 32];
            let errs: Vec<f64> = widths
                .iter()
                .map(|&w| {
                    let approx = SmoothApprox::build(|x| t.value(x), &minus, &plus, w / 2, &quad()).unwrap();
                    rule.integrate(|x| (t.value(x) - approx.eval(x)).powi(2)).sqrt()
                })
                .collect();
            let xs: Vec<f64> = widths.iter().map(|&w| (w as f64).ln()).collect();
            let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
            let n = xs.len() as f64;
            let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
            let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
            let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
            let slope = sxy / sxx;
            assert!(slope <= -(m as f64 - 0.5), "m={m} slope {slope} errs {errs:?}");
        }
    }

    #[test]
    fn quadrature_refinement_is_stable() {
        let t = PiecewiseTarget::lookup("smooth_nonper").unwrap();
        let (minus, plus) = endpoint_data(&t, 2);
        let coarse = SmoothApprox::build(|x| t.value(x), &minus, &plus, 128, &quad()).unwrap();
        let fine = SmoothApprox::build(|x| t.value(x), &minus, &plus, 128, &quad().refined()).unwrap();
        for (a, b) in coarse.coeffs().iter().zip(fine.coeffs()) {
            assert!((a - b).norm() <= 1e-10);
        }
    }
}
