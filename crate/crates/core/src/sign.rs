//! Width-one deep network for the sign function.
//!
//! Layer 1 computes `S_1(x) = sin(pi x / 2)`; every further layer applies the
//! fixed-point map `phi(y) = y + sin(pi y) / pi` through its h-branch, which
//! drives every nonzero input towards `+-1` quadratically.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::network::{Branch, FourierResNet, Layer};

pub fn phi(y: f64) -> f64 {
    y + (PI * y).sin() / PI
}

pub fn build_sign_net(depth: usize) -> Result<FourierResNet> {
    if depth == 0 {
        return Err(Error::Domain("sign network depth must be at least 1".into()));
    }
    let first = Branch::new(vec![FRAC_PI_2], vec![1.0], vec![0.0])?;
    let mut layers = vec![Layer::new(first, None)];
    for _ in 1..depth {
        let h = Branch::new(vec![PI], vec![1.0 / PI], vec![0.0])?;
        layers.push(Layer::new(Branch::empty(), Some(h)));
    }
    FourierResNet::new(layers)
}

/// `C_p 2^{-l/p}` with `C_p = (4/p)^{1/p}`.
pub fn sign_error_bound(l: usize, p: f64) -> Result<f64> {
    if p.is_nan() || p <= 0.0 {
        return Err(Error::Domain(format!("p must be positive, got {p}")));
    }
    Ok((4.0 / p).powf(1.0 / p) * 2f64.powf(-(l as f64) / p))
}

/// Classical sine series of `sgn` on `[-1, 1]` with `terms` odd harmonics.
pub fn truncated_sign_series(terms: usize) -> Result<Branch> {
    if terms == 0 {
        return Err(Error::Domain("series needs at least one term".into()));
    }
    let odd = (1..=terms).map(|l| (2 * l - 1) as f64);
    let freqs = odd.clone().map(|n| n * PI).collect();
    let amps = odd.map(|n| 4.0 / (PI * n)).collect();
    Branch::new(freqs, amps, vec![0.0; terms])
}
