//! Deep Fourier networks for piecewise-smooth targets with one jump at `0`.
//!
//! The network computes `F(x) = Z_L(x) + H(Z_L(x)) + R_W(x)` where
//!
//! * `Z_L = S_L + sin` is the depth-`L` sign network plus one `sin(x)` neuron,
//! * `H` matches the one-sided derivatives of the target at `0`,
//! * `R_W` approximates the smooth residual `r = f - z - H(z)`.
//!
//! Layers `1..=L` are the sign network, with the `sin(x)` neuron added to the
//! g-branch of layer `L`. Layer `L + 1` carries `R_W` in its g-branch and `H`
//! in its h-branch.

use crate::error::{Error, Result};
use crate::hermite::TrigPoly;
use crate::jump::{build_jump_h, q_derivs_at};
use crate::metrics::lp_error;
use crate::network::{Branch, FourierResNet, Layer};
use crate::quadrature::QuadratureConfig;
use crate::sign::build_sign_net;
use crate::smooth::SmoothApprox;
use crate::targets::{PiecewiseTarget, Side};

/// Grid resolution used to estimate the Lipschitz constant of `H`.
const LIPSCHITZ_GRID: usize = 20_001;

#[derive(Clone)]
pub struct BuildSpec {
    pub target: PiecewiseTarget,
    /// Smoothness order of the derivative matching.
    pub m: usize,
    /// `K`; the residual series uses `W = 2K` neurons.
    pub half_modes: usize,
    /// `L`, the depth of the sign network.
    pub depth: usize,
    pub quad: QuadratureConfig,
}

impl BuildSpec {
    pub fn new(target: PiecewiseTarget, m: usize, half_modes: usize, depth: usize) -> Self {
        Self {
            target,
            m,
            half_modes,
            depth,
            quad: QuadratureConfig::default(),
        }
    }

    pub fn with_quad(mut self, quad: QuadratureConfig) -> Self {
        self.quad = quad;
        self
    }

    /// `W = 2K`.
    pub fn width(&self) -> usize {
        2 * self.half_modes
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::Domain("smoothness order m must be at least 1".into()));
        }
        if self.m > self.target.max_order() {
            return Err(Error::UnsupportedOrder {
                requested: self.m,
                max: self.target.max_order(),
            });
        }
        if !self.target.is_single_piece() && self.depth < 2 {
            return Err(Error::Domain(format!("depth must be at least 2, got {}", self.depth)));
        }
        self.quad.validate()
    }

    /// Neuron count of the built network, `L + W + 1 + 4(m+1)` when `K >= 1`.
    pub fn expected_neurons(&self) -> usize {
        let series = self.width().max(1);
        if self.target.is_single_piece() {
            series + 2 * (self.m + 1)
        } else {
            self.depth + series + 1 + 4 * (self.m + 1)
        }
    }
}

impl std::fmt::Debug for BuildSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BuildSpec")
            .field("target", &self.target.name())
            .field("m", &self.m)
            .field("half_modes", &self.half_modes)
            .field("depth", &self.depth)
            .field("quad", &self.quad)
            .finish()
    }
}

/// Every stage of the construction, evaluable on its own.
#[derive(Clone)]
pub struct Components {
    target: PiecewiseTarget,
    sign: Option<FourierResNet>,
    jump: TrigPoly,
    residual: SmoothApprox,
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `z(x) + H(z(x))` with `z = sgn + sin`.
fn q_value(jump: &TrigPoly, x: f64) -> f64 {
    let z = sgn(x) + x.sin();
    z + jump.eval(z)
}

impl Components {
    pub fn target(&self) -> &PiecewiseTarget {
        &self.target
    }

    /// Depth `L` of the sign part; `0` for single-piece targets.
    pub fn depth(&self) -> usize {
        self.sign.as_ref().map_or(0, FourierResNet::depth)
    }

    /// `H`; identically zero for single-piece targets.
    pub fn jump_poly(&self) -> &TrigPoly {
        &self.jump
    }

    /// Approximation `R_W` of the residual.
    pub fn residual_approx(&self) -> &SmoothApprox {
        &self.residual
    }

    pub fn s_l(&self, x: f64) -> f64 {
        self.sign.as_ref().map_or(0.0, |n| n.eval(x))
    }

    pub fn z_l(&self, x: f64) -> f64 {
        if self.sign.is_some() {
            self.s_l(x) + x.sin()
        } else {
            0.0
        }
    }

    pub fn z(&self, x: f64) -> f64 {
        if self.sign.is_some() {
            sgn(x) + x.sin()
        } else {
            0.0
        }
    }

    pub fn h(&self, y: f64) -> f64 {
        self.jump.eval(y)
    }

    /// `q = z + H(z)`.
    pub fn q(&self, x: f64) -> f64 {
        if self.sign.is_some() {
            q_value(&self.jump, x)
        } else {
            0.0
        }
    }

    /// `r = f - q`.
    pub fn r(&self, x: f64) -> f64 {
        self.target.value(x) - self.q(x)
    }

    pub fn r_w(&self, x: f64) -> f64 {
        self.residual.eval(x)
    }

    /// `Z_L + H(Z_L) + R_W`, composed directly from the stages.
    pub fn compose(&self, x: f64) -> f64 {
        if self.sign.is_some() {
            let zl = self.z_l(x);
            zl + self.h(zl) + self.r_w(x)
        } else {
            self.r_w(x)
        }
    }

    /// `max |H'|` over the range of `z` and `Z_L`, `[-1 - sin 1, 1 + sin 1]`, widened by `delta`.
    pub fn lipschitz_h(&self, delta: f64) -> f64 {
        let reach = 1.0 + 1f64.sin() + delta;
        self.jump.max_abs_deriv(1, -reach, reach, LIPSCHITZ_GRID)
    }

    pub fn network(&self) -> FourierResNet {
        let top = self.residual.to_branch();
        let Some(sign) = &self.sign else {
            return FourierResNet::new(vec![Layer::new(top, None)]).expect("one layer");
        };
        let mut layers = sign.clone().into_layers();
        let sin_neuron = Branch::new(vec![1.0], vec![1.0], vec![0.0]).expect("finite");
        layers.last_mut().expect("depth >= 2").g.extend(&sin_neuron);
        layers.push(Layer::new(top, Some(self.jump.to_mode_branch())));
        FourierResNet::new(layers).expect("layer 1 has no h-branch")
    }

    /// Terms of the triangle-inequality bound on the `L^2` error.
    pub fn error_split(&self, quad: &QuadratureConfig, delta: f64) -> Result<ErrorSplit> {
        let total = lp_error(|x| self.target.value(x), |x| self.compose(x), 2.0, quad)?;
        let sign_term = lp_error(|x| self.z(x), |x| self.z_l(x), 2.0, quad)?;
        let width_term = lp_error(|x| self.r(x), |x| self.r_w(x), 2.0, quad)?;
        let lipschitz = self.lipschitz_h(delta);
        Ok(ErrorSplit {
            total,
            sign_term,
            lipschitz,
            width_term,
            bound: sign_term * (1.0 + lipschitz) + width_term,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSplit {
    /// `||f - F||_2`.
    pub total: f64,
    /// `||sgn - S_L||_2`.
    pub sign_term: f64,
    /// `max |H'|`.
    pub lipschitz: f64,
    /// `||r - R_W||_2`.
    pub width_term: f64,
    /// `sign_term (1 + lipschitz) + width_term`.
    pub bound: f64,
}

pub fn component_views(spec: &BuildSpec) -> Result<Components> {
    spec.validate()?;
    let (t, m) = (&spec.target, spec.m);
    let f_minus = t.one_sided_derivs(-1.0, Side::Right, m)?;
    let f_plus = t.one_sided_derivs(1.0, Side::Left, m)?;

    if t.is_single_piece() {
        let residual = SmoothApprox::build(|x| t.value(x), &f_minus, &f_plus, spec.half_modes, &spec.quad)?;
        return Ok(Components {
            target: t.clone(),
            sign: None,
            jump: TrigPoly::zero(m),
            residual,
        });
    }

    let alphas = t.one_sided_derivs(0.0, Side::Left, m)?;
    let betas = t.one_sided_derivs(0.0, Side::Right, m)?;
    let jump = build_jump_h(&alphas, &betas)?;

    let q_minus = q_derivs_at(-1.0, Side::Right, &jump, m)?;
    let q_plus = q_derivs_at(1.0, Side::Left, &jump, m)?;
    let r_minus: Vec<f64> = f_minus.iter().zip(&q_minus).map(|(f, q)| f - q).collect();
    let r_plus: Vec<f64> = f_plus.iter().zip(&q_plus).map(|(f, q)| f - q).collect();

    let r = |x: f64| t.value(x) - q_value(&jump, x);
    let residual = SmoothApprox::build(r, &r_minus, &r_plus, spec.half_modes, &spec.quad)?;
    Ok(Components {
        target: t.clone(),
        sign: Some(build_sign_net(spec.depth)?),
        jump,
        residual,
    })
}

pub fn build_piecewise_net(spec: &BuildSpec) -> Result<FourierResNet> {
    Ok(component_views(spec)?.network())
}

/// Depth and half-width aiming at an `L^2` error of about `eps`.
///
/// Uses unit constants in `2^{-L/2} ~ eps` and `W^{-m+1/2} ~ eps`:
/// `L = ceil(2 log2(1/eps))` and `W = ceil(eps^{-1/(m - 1/2)})`, rounded up to even.
pub fn suggest_parameters(eps: f64, m: usize) -> Result<(usize, usize)> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("eps must lie in (0, 1), got {eps}")));
    }
    if m == 0 {
        return Err(Error::Domain("smoothness order m must be at least 1".into()));
    }
    let depth = ((2.0 * (1.0 / eps).log2()).ceil() as usize).max(2);
    let width = eps.powf(-1.0 / (m as f64 - 0.5)).ceil();
    let half_modes = ((width / 2.0).ceil() as usize).max(1);
    Ok((depth, half_modes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::Jet;
    use crate::metrics::diagnostic_grid;
    use crate::sign::build_sign_net;

    fn spec(name: &str, m: usize, k: usize, l: usize) -> BuildSpec {
        BuildSpec::new(PiecewiseTarget::lookup(name).unwrap(), m, k, l)
    }

    #[test]
    fn neuron_counts() {
        let net = build_piecewise_net(&spec("pw_smooth", 1, 3, 5)).unwrap();
        assert_eq!(net.neuron_count(), 20);
        assert_eq!(net.depth(), 6);
        let net = build_piecewise_net(&spec("pw_smooth", 1, 5, 11)).unwrap();
        assert_eq!(net.neuron_count(), 30);
        for (name, m, k, l) in [("hat", 2, 8, 12), ("sgn", 3, 1, 4), ("smooth_nonper", 2, 6, 9)] {
            let s = spec(name, m, k, l);
            assert_eq!(build_piecewise_net(&s).unwrap().neuron_count(), s.expected_neurons());
        }
    }

    #[test]
    fn layer_widths() {
        let net = build_piecewise_net(&spec("pw_smooth", 1, 3, 5)).unwrap();
        assert_eq!(
            net.layer_widths(),
            vec![(1, 0), (0, 1), (0, 1), (0, 1), (1, 1), (4 + 6, 4)]
        );
    }

    #[test]
    fn wiring_identity() {
        for (name, m, k, l) in [
            ("pw_smooth", 2, 10, 8),
            ("hat", 3, 16, 20),
            ("sgn", 1, 4, 6),
            ("smooth_nonper", 3, 8, 2),
        ] {
            let parts = component_views(&spec(name, m, k, l)).unwrap();
            let net = parts.network();
            for x in diagnostic_grid(1000) {
                let (a, b) = (net.eval(x), parts.compose(x));
                assert!((a - b).abs() <= 1e-12, "{name} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn sign_layers_are_untouched() {
        let parts = component_views(&spec("pw_smooth", 1, 3, 7)).unwrap();
        let net = parts.network();
        let sign = build_sign_net(7).unwrap();
        for x in diagnostic_grid(101) {
            for l in 1..7 {
                assert_eq!(net.eval_prefix(x, l).unwrap(), sign.eval_prefix(x, l).unwrap());
            }
            assert!((net.eval_prefix(x, 7).unwrap() - parts.z_l(x)).abs() < 1e-15);
        }
    }

    #[test]
    fn q_matches_target_at_breakpoint() {
        let parts = component_views(&spec("pw_smooth", 2, 4, 5)).unwrap();
        let t = parts.target();
        for (side, sgn) in [(Side::Left, -1.0), (Side::Right, 1.0)] {
            let z = Jet::var(0.0, 2).unwrap().sin().add_scalar(sgn);
            let q = z.add(&parts.jump_poly().eval_jet(&z).unwrap()).unwrap().derivatives();
            let f = t.one_sided_derivs(0.0, side, 2).unwrap();
            for s in 0..=2 {
                assert!((q[s] - f[s]).abs() <= 1e-8);
            }
        }
    }

    #[test]
    fn residual_is_continuous_at_breakpoint() {
        let parts = component_views(&spec("pw_smooth", 2, 4, 5)).unwrap();
        let t = parts.target();
        let h = parts.jump_poly();
        let r_left =
            t.one_sided_derivs(0.0, Side::Left, 0).unwrap()[0] - q_derivs_at(0.0, Side::Left, h, 0).unwrap()[0];
        let r_right =
            t.one_sided_derivs(0.0, Side::Right, 0).unwrap()[0] - q_derivs_at(0.0, Side::Right, h, 0).unwrap()[0];
        assert!((r_left - r_right).abs() <= 1e-9);
        assert!((parts.r(-1e-9) - parts.r(1e-9)).abs() <= 1e-7);
    }

    #[test]
    fn sin_cancels_in_sign_term() {
        let parts = component_views(&spec("hat", 2, 4, 9)).unwrap();
        let sign = build_sign_net(9).unwrap();
        for x in diagnostic_grid(1001) {
            let lhs = parts.z(x) - parts.z_l(x);
            let rhs = x.signum() - sign.eval(x);
            assert!((lhs - rhs).abs() <= 4.0 * f64::EPSILON);
        }
    }

    #[test]
    fn sign_target_without_series() {
        let quad = QuadratureConfig::default();
        for l in [4, 8, 12] {
            let parts = component_views(&spec("sgn", 1, 0, l)).unwrap();
            let split = parts.error_split(&quad, 0.01).unwrap();
            assert!(split.total <= split.bound);
            let s_err = lp_error(f64::signum, |x| build_sign_net(l).unwrap().eval(x), 2.0, &quad).unwrap();
            assert!((split.sign_term - s_err).abs() <= 1e-12);
        }
    }

    #[test]
    fn zero_target_cancels_the_jump() {
        let zero = PiecewiseTarget::new(
            "zero",
            |x: &Jet| Jet::constant(x.base(), 0.0, x.order()),
            |x: &Jet| Jet::constant(x.base(), 0.0, x.order()),
        );
        let parts = component_views(&BuildSpec::new(zero, 2, 16, 20)).unwrap();
        let net = parts.network();
        let max = diagnostic_grid(20_001)
            .into_iter()
            .map(|x| net.eval(x).abs())
            .fold(0.0, f64::max);
        assert!(max <= 0.05, "{max}");
    }

    #[test]
    fn error_split_holds() {
        let quad = QuadratureConfig::default();
        for (name, m, k, l) in [("pw_smooth", 1, 5, 5), ("pw_smooth", 3, 20, 12), ("hat", 2, 10, 16)] {
            let split = component_views(&spec(name, m, k, l))
                .unwrap()
                .error_split(&quad, 0.01)
                .unwrap();
            assert!(split.total <= split.bound, "{name}: {split:?}");
        }
    }

    #[test]
    fn frequencies_do_not_depend_on_target() {
        for (m, k, l) in [(1, 3, 5), (3, 12, 9)] {
            let a = build_piecewise_net(&spec("pw_smooth", m, k, l)).unwrap();
            let b = build_piecewise_net(&spec("hat", m, k, l)).unwrap();
            let c = build_piecewise_net(&spec("sgn", m, k, l)).unwrap();
            assert_eq!(a.frequencies(), b.frequencies());
            assert_eq!(a.frequencies(), c.frequencies());
        }
    }

    #[test]
    fn amplitudes_stable_in_width_and_depth() {
        let amps: Vec<f64> = [(3, 2), (16, 10), (64, 20)]
            .iter()
            .map(|&(k, l)| {
                build_piecewise_net(&spec("pw_smooth", 2, k, l))
                    .unwrap()
                    .max_amplitude()
            })
            .collect();
        let (lo, hi) = amps.iter().fold((f64::MAX, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
        assert!(hi <= 1.1 * lo, "{amps:?}");
    }

    #[test]
    fn smooth_target_is_shallow() {
        let s = spec("smooth_nonper", 3, 10, 7);
        let parts = component_views(&s).unwrap();
        let net = parts.network();
        assert_eq!(net.depth(), 1);
        assert_eq!(parts.jump_poly().max_coeff(), 0.0);
        for x in diagnostic_grid(101) {
            assert!((net.eval(x) - parts.residual_approx().eval(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn spec_checks() {
        let capped = PiecewiseTarget::lookup("pw_smooth").unwrap().with_max_order(2);
        let err = build_piecewise_net(&BuildSpec::new(capped, 3, 4, 5)).unwrap_err();
        assert!(matches!(err, Error::UnsupportedOrder { requested: 3, max: 2 }));
        assert!(build_piecewise_net(&spec("pw_smooth", 0, 4, 5)).is_err());
        assert!(build_piecewise_net(&spec("pw_smooth", 1, 4, 1)).is_err());
    }

    #[test]
    fn parameter_suggestion() {
        let (l, k) = suggest_parameters(1e-3, 2).unwrap();
        assert_eq!(l, 20);
        assert_eq!(k, 50);
        assert!(suggest_parameters(0.0, 2).is_err());
        assert!(suggest_parameters(0.1, 0).is_err());
    }
}
