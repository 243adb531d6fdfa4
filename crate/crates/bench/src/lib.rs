//! Fixtures shared by the benchmarks.

use fourier_resnet::{BuildSpec, PiecewiseTarget};

/// Uniform grid on `[-1, 1]`.
pub fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64).collect()
}

/// `pw_smooth` with depth 20, the setting of the width sweeps.
pub fn sweep_spec(m: usize, half_modes: usize) -> BuildSpec {
    let target = PiecewiseTarget::lookup("pw_smooth").expect("registered target");
    BuildSpec::new(target, m, half_modes, 20)
}

/// One-sided derivative data with entries of size about one.
pub fn endpoint_data(m: usize) -> (Vec<f64>, Vec<f64>) {
    let alphas = (0..=m).map(|s| (s as f64 + 1.0).sin()).collect();
    let betas = (0..=m).map(|s| (s as f64 + 2.0).cos()).collect();
    (alphas, betas)
}
