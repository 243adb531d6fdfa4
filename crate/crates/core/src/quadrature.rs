//! Composite Gauss-Legendre quadrature on `[-1, 1]`.
//!
//! Panels never straddle `0`. On each side the interval is split into
//! `panels_per_side` equal panels, and the panel touching `0` is further
//! subdivided geometrically so that features living in exponentially small
//! neighbourhoods of the breakpoint are still resolved.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};

/// Smallest panel produced by the geometric grading.
pub const MIN_PANEL_WIDTH: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub panels_per_side: usize,
    pub nodes_per_panel: usize,
    /// Ratio between consecutive graded panels next to `0`; `1` disables grading.
    pub grading_ratio: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            panels_per_side: 64,
            nodes_per_panel: 12,
            grading_ratio: 0.7,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.panels_per_side == 0 {
            return Err(Error::Domain("panels_per_side must be at least 1".into()));
        }
        if !(2..=64).contains(&self.nodes_per_panel) {
            return Err(Error::Domain(format!(
                "nodes_per_panel must lie in [2, 64], got {}",
                self.nodes_per_panel
            )));
        }
        if !(self.grading_ratio > 0.0 && self.grading_ratio <= 1.0) {
            return Err(Error::Domain(format!(
                "grading_ratio must lie in (0, 1], got {}",
                self.grading_ratio
            )));
        }
        Ok(())
    }

    /// Same configuration with twice as many panels per side.
    pub fn refined(&self) -> Self {
        Self {
            panels_per_side: 2 * self.panels_per_side,
            ..*self
        }
    }

    pub fn rule(&self) -> Result<QuadratureRule> {
        QuadratureRule::new(self)
    }
}

/// Panel breakpoints on `[0, 1]`, ascending.
fn right_breakpoints(cfg: &QuadratureConfig) -> Vec<f64> {
    let p = cfg.panels_per_side;
    let first = 1.0 / p as f64;
    let mut points = vec![0.0];
    if cfg.grading_ratio < 1.0 {
        let mut graded = Vec::new();
        let mut edge = first * cfg.grading_ratio;
        while edge >= MIN_PANEL_WIDTH {
            graded.push(edge);
            edge *= cfg.grading_ratio;
        }
        points.extend(graded.into_iter().rev());
    }
    points.extend((1..=p).map(|i| i as f64 / p as f64));
    points
}

/// Flattened nodes and weights of a composite rule, ordered left to right.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn new(cfg: &QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        let n = NonZeroUsize::new(cfg.nodes_per_panel).expect("validated");
        let reference = GaussLegendre::new(n);
        let pairs = reference.as_node_weight_pairs();

        let right = right_breakpoints(cfg);
        let mut edges: Vec<f64> = right.iter().rev().map(|x| -x).collect();
        edges.extend_from_slice(&right[1..]);

        let mut nodes = Vec::with_capacity((edges.len() - 1) * pairs.len());
        let mut weights = Vec::with_capacity(nodes.capacity());
        for w in edges.windows(2) {
            let (mid, half) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
            for &(t, wt) in pairs {
                nodes.push(mid + half * t);
                weights.push(half * wt);
            }
        }
        Ok(Self { nodes, weights })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `int_{-1}^{1} f`, summed left to right.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}
