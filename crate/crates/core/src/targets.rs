//! Target functions on `[-1, 1]` with a single breakpoint at `x = 0`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jets::{Jet, MAX_JET_ORDER};

/// Which one-sided limit to take at a breakpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// A jet-evaluable expression. Receives the jet of `x` and returns the jet of
/// the piece.
pub type PieceFn = Arc<dyn Fn(&Jet) -> Result<Jet> + Send + Sync>;

/// Names of the built-in targets, in registry order.
pub const TARGET_NAMES: [&str; 4] = ["sgn", "pw_smooth", "hat", "smooth_nonper"];

#[derive(Clone)]
pub struct PiecewiseTarget {
    name: String,
    left: PieceFn,
    right: PieceFn,
    value_at_breakpoint: f64,
    max_order: usize,
    single_piece: bool,
}

impl fmt::Debug for PiecewiseTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PiecewiseTarget")
            .field("name", &self.name)
            .field("value_at_breakpoint", &self.value_at_breakpoint)
            .field("max_order", &self.max_order)
            .field("single_piece", &self.single_piece)
            .finish_non_exhaustive()
    }
}

impl PiecewiseTarget {
    /// A two-piece target: `left` on `[-1, 0]`, `right` on `(0, 1]`. The value
    /// at the breakpoint is the left-piece limit.
    pub fn new<L, R>(name: impl Into<String>, left: L, right: R) -> Self
    where
        L: Fn(&Jet) -> Result<Jet> + Send + Sync + 'static,
        R: Fn(&Jet) -> Result<Jet> + Send + Sync + 'static,
    {
        let left: PieceFn = Arc::new(left);
        let value_at_breakpoint = piece_value(&left, 0.0);
        Self {
            name: name.into(),
            left,
            right: Arc::new(right),
            value_at_breakpoint,
            max_order: MAX_JET_ORDER,
            single_piece: false,
        }
    }

    /// A target given by one expression on all of `[-1, 1]` (zero jump vector).
    pub fn smooth<F>(name: impl Into<String>, piece: F) -> Self
    where
        F: Fn(&Jet) -> Result<Jet> + Send + Sync + 'static,
    {
        let piece: PieceFn = Arc::new(piece);
        Self {
            name: name.into(),
            value_at_breakpoint: piece_value(&piece, 0.0),
            left: piece.clone(),
            right: piece,
            max_order: MAX_JET_ORDER,
            single_piece: true,
        }
    }

    pub fn with_value_at_breakpoint(mut self, value: f64) -> Self {
        self.value_at_breakpoint = value;
        self
    }

    pub fn with_max_order(mut self, max_order: usize) -> Self {
        self.max_order = max_order.min(MAX_JET_ORDER);
        self
    }

    /// Looks up one of the built-in targets listed in [`TARGET_NAMES`].
    pub fn lookup(name: &str) -> Result<Self> {
        let target = match name {
            "sgn" => Self::new(
                "sgn",
                |x: &Jet| Jet::constant(x.base(), -1.0, x.order()),
                |x: &Jet| Jet::constant(x.base(), 1.0, x.order()),
            )
            .with_value_at_breakpoint(0.0),
            "pw_smooth" => Self::new(
                "pw_smooth",
                |x: &Jet| Ok(x.add_scalar(1.0)),
                |x: &Jet| Ok(x.scale(PI).cos().add_scalar(1.0)),
            ),
            "hat" => Self::new(
                "hat",
                |x: &Jet| Ok(x.add_scalar(1.0)),
                |x: &Jet| Ok(x.neg().add_scalar(1.0)),
            ),
            "smooth_nonper" => Self::smooth("smooth_nonper", |x: &Jet| {
                let gauss = x.mul(x)?.scale(-0.5).exp();
                gauss.mul(&x.scale(8.0).cos())?.add(x)
            }),
            _ => {
                return Err(Error::UnknownTarget {
                    name: name.to_string(),
                    known: TARGET_NAMES.iter().map(|s| s.to_string()).collect(),
                })
            }
        };
        Ok(target)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn value_at_breakpoint(&self) -> f64 {
        self.value_at_breakpoint
    }

    /// True when both sides share one expression, so there is no jump at 0.
    pub fn is_single_piece(&self) -> bool {
        self.single_piece
    }

    /// Pointwise value on `[-1, 1]`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(-1.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!("x = {x} lies outside [-1, 1]")));
        }
        Ok(self.value(x))
    }

    /// Like [`eval`](Self::eval) but without the range check; the pieces are
    /// extended by their own expressions outside `[-1, 1]`.
    pub fn value(&self, x: f64) -> f64 {
        if x < 0.0 {
            piece_value(&self.left, x)
        } else if x > 0.0 {
            piece_value(&self.right, x)
        } else {
            self.value_at_breakpoint
        }
    }

    /// Evaluates one piece on an arbitrary jet of `x`.
    pub fn piece_jet(&self, side: Side, x: &Jet) -> Result<Jet> {
        match side {
            Side::Left => (self.left)(x),
            Side::Right => (self.right)(x),
        }
    }

    /// `[f(p), f'(p), ..., f^(m)(p)]` as one-sided limits at `point`.
    ///
    /// The piece is chosen by location; `side` only matters at the breakpoint.
    pub fn one_sided_derivs(&self, point: f64, side: Side, m: usize) -> Result<Vec<f64>> {
        if m > self.max_order {
            return Err(Error::UnsupportedOrder {
                requested: m,
                max: self.max_order,
            });
        }
        if !(-1.0..=1.0).contains(&point) {
            return Err(Error::Domain(format!("point {point} lies outside [-1, 1]")));
        }
        let piece = if point < 0.0 {
            Side::Left
        } else if point > 0.0 {
            Side::Right
        } else {
            side
        };
        let jet = self.piece_jet(piece, &Jet::var(point, m)?)?;
        Ok(jet.derivatives())
    }

    /// Right-minus-left jumps `[f^(s)(0+) - f^(s)(0-)]` for `s = 0..=m`.
    pub fn jump_vector(&self, m: usize) -> Result<Vec<f64>> {
        let left = self.one_sided_derivs(0.0, Side::Left, m)?;
        let right = self.one_sided_derivs(0.0, Side::Right, m)?;
        Ok(right.iter().zip(&left).map(|(r, l)| r - l).collect())
    }
}

fn piece_value(piece: &PieceFn, x: f64) -> f64 {
    Jet::var(x, 0)
        .and_then(|j| piece(&j))
        .map(|j| j.value())
        .unwrap_or(f64::NAN)
}

/// All built-in targets.
pub fn registered_targets() -> Vec<PiecewiseTarget> {
    TARGET_NAMES
        .iter()
        .map(|n| PiecewiseTarget::lookup(n).expect("built-in target"))
        .collect()
}
