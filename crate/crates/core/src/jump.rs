//! Matching one-sided derivative data at the breakpoint.
//!
//! With `z(x) = sgn(x) + sin(x)`, a trigonometric polynomial `H` is chosen so
//! that `q(x) = z(x) + H(z(x))` has prescribed one-sided derivatives at `0`.
//! The chain rule for `H(z(x))` is written with partial Bell polynomials.

use crate::error::{Error, Result};
use crate::hermite::{hermite_endpoint, TrigPoly};
use crate::jets::MAX_JET_ORDER;
use crate::targets::Side;

/// Value and derivatives of `z` at a point, taken on one side of `0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZProfile {
    pub value: f64,
    /// `[z', z'', ..., z^(m)]`.
    pub derivs: Vec<f64>,
}

impl ZProfile {
    pub fn order(&self) -> usize {
        self.derivs.len()
    }

    /// `z^(s)` for `s = 0..=m`.
    pub fn get(&self, s: usize) -> f64 {
        if s == 0 {
            self.value
        } else {
            self.derivs[s - 1]
        }
    }
}

/// `k`-th derivative of `sin` at `x`.
fn sin_derivative(x: f64, k: usize) -> f64 {
    match k % 4 {
        0 => x.sin(),
        1 => x.cos(),
        2 => -x.sin(),
        _ => -x.cos(),
    }
}

pub fn z_profile(point: f64, side: Side, m: usize) -> Result<ZProfile> {
    if !(-1.0..=1.0).contains(&point) {
        return Err(Error::Domain(format!("point {point} lies outside [-1, 1]")));
    }
    let sgn = if point > 0.0 {
        1.0
    } else if point < 0.0 {
        -1.0
    } else {
        match side {
            Side::Left => -1.0,
            Side::Right => 1.0,
        }
    };
    Ok(ZProfile {
        value: sgn + point.sin(),
        derivs: (1..=m).map(|k| sin_derivative(point, k)).collect(),
    })
}

/// Lower-triangular matrix `A[s][j] = B_{s,j}(z', z'', ...)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainRuleMatrix {
    entries: Vec<Vec<f64>>,
}

impl ChainRuleMatrix {
    pub fn order(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn get(&self, s: usize, j: usize) -> f64 {
        self.entries[s][j]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.entries
    }

    /// Solves `A v = rhs` by forward substitution.
    pub fn forward_substitute(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.entries.len();
        if rhs.len() != n {
            return Err(Error::Domain(format!(
                "right-hand side has length {}, expected {n}",
                rhs.len()
            )));
        }
        let mut v = vec![0.0; n];
        for s in 0..n {
            let diag = self.entries[s][s];
            if diag == 0.0 {
                return Err(Error::Domain(format!("zero pivot in row {s}")));
            }
            let partial: f64 = (0..s).map(|j| self.entries[s][j] * v[j]).sum();
            v[s] = (rhs[s] - partial) / diag;
        }
        Ok(v)
    }
}

/// Partial Bell polynomials `B_{n,k}(x_1, ..., x_m)` for `0 <= k <= n <= m`.
pub fn bell_matrix(x: &[f64]) -> Vec<Vec<f64>> {
    let m = x.len();
    let mut binom = vec![vec![0.0; m + 1]; m + 1];
    for n in 0..=m {
        binom[n][0] = 1.0;
        for k in 1..=n {
            binom[n][k] = binom[n - 1][k - 1] + if k < n { binom[n - 1][k] } else { 0.0 };
        }
    }
    let mut b = vec![vec![0.0; m + 1]; m + 1];
    b[0][0] = 1.0;
    for n in 1..=m {
        for k in 1..=n {
            b[n][k] = (1..=n - k + 1)
                .map(|i| binom[n - 1][i - 1] * x[i - 1] * b[n - i][k - 1])
                .sum();
        }
    }
    b
}

pub fn chain_rule_matrix(zp: &ZProfile) -> ChainRuleMatrix {
    ChainRuleMatrix {
        entries: bell_matrix(&zp.derivs),
    }
}

/// `H` such that `q = z + H(z)` has derivatives `alphas` at `0-` and `betas` at `0+`.
pub fn build_jump_h(alphas: &[f64], betas: &[f64]) -> Result<TrigPoly> {
    if alphas.len() != betas.len() || alphas.is_empty() {
        return Err(Error::Domain(format!(
            "jump data must be nonempty and of equal length (got {} and {})",
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
    let solve = |side: Side, targets: &[f64]| -> Result<Vec<f64>> {
        let zp = z_profile(0.0, side, m)?;
        let rhs: Vec<f64> = targets.iter().enumerate().map(|(s, t)| t - zp.get(s)).collect();
        chain_rule_matrix(&zp).forward_substitute(&rhs)
    };
    let minus = solve(Side::Left, alphas)?;
    let plus = solve(Side::Right, betas)?;
    hermite_endpoint(&minus, &plus)
}

/// `[q(p), q'(p), ..., q^(m)(p)]` for `q = z + H(z)`, one-sided at `p = 0`.
pub fn q_derivs_at(point: f64, side: Side, h: &TrigPoly, m: usize) -> Result<Vec<f64>> {
    let zp = z_profile(point, side, m)?;
    let a = chain_rule_matrix(&zp);
    let hd = h.derivatives(zp.value, m);
    Ok((0..=m)
        .map(|s| {
            if s == 0 {
                zp.value + hd[0]
            } else {
                zp.get(s) + (1..=s).map(|j| a.get(s, j) * hd[j]).sum::<f64>()
            }
        })
        .collect())
}
