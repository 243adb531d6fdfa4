//! Fourier residual networks.
//!
//! A network of depth `L` computes
//!
//! ```text
//! f_1(x) = g_1(x)
//! f_l(x) = f_{l-1}(x) + g_l(x) + h_l(f_{l-1}(x)),   l = 2..L
//! ```
//!
//! where every branch is a trigonometric sum `sum_k a_k sin(w_k t) + b_k cos(w_k t)`.
//! Each `(w_k, a_k, b_k)` triple is one neuron and represents the complex
//! mode `Re(c_k e^{i w_k t})` with `c_k = b_k - i a_k`.

use std::io;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One trigonometric branch.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Branch {
    freqs: Vec<f64>,
    sin_amps: Vec<f64>,
    cos_amps: Vec<f64>,
}

impl Branch {
    pub fn new(freqs: Vec<f64>, sin_amps: Vec<f64>, cos_amps: Vec<f64>) -> Result<Self> {
        if freqs.len() != sin_amps.len() || freqs.len() != cos_amps.len() {
            return Err(Error::Validation(format!(
                "branch lists differ in length (freqs {}, a {}, b {})",
                freqs.len(),
                sin_amps.len(),
                cos_amps.len()
            )));
        }
        let all = freqs.iter().chain(&sin_amps).chain(&cos_amps);
        if let Some(bad) = all.copied().find(|v| !v.is_finite()) {
            return Err(Error::Validation(format!("non-finite branch entry {bad}")));
        }
        Ok(Self {
            freqs,
            sin_amps,
            cos_amps,
        })
    }

    /// The absent branch.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Branch realizing `Re(sum_k c_k e^{i w_k t})`, one neuron per mode.
    pub fn from_complex(freqs: &[f64], coeffs: &[Complex64]) -> Result<Self> {
        Self::new(
            freqs.to_vec(),
            coeffs.iter().map(|c| -c.im).collect(),
            coeffs.iter().map(|c| c.re).collect(),
        )
    }

    pub fn width(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn sin_amps(&self) -> &[f64] {
        &self.sin_amps
    }

    pub fn cos_amps(&self) -> &[f64] {
        &self.cos_amps
    }

    /// Appends the neurons of `other`.
    pub fn extend(&mut self, other: &Branch) {
        self.freqs.extend_from_slice(&other.freqs);
        self.sin_amps.extend_from_slice(&other.sin_amps);
        self.cos_amps.extend_from_slice(&other.cos_amps);
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for k in 0..self.freqs.len() {
            let (s, c) = (self.freqs[k] * t).sin_cos();
            acc += self.sin_amps[k] * s + self.cos_amps[k] * c;
        }
        acc
    }

    /// Modulus `|c_k| = sqrt(a_k^2 + b_k^2)` of every neuron.
    pub fn amplitudes(&self) -> impl Iterator<Item = f64> + '_ {
        self.sin_amps.iter().zip(&self.cos_amps).map(|(a, b)| a.hypot(*b))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    /// Branch fed with the network input `x`.
    pub g: Branch,
    /// Branch fed with the previous layer output; `None` in layer 1.
    pub h: Option<Branch>,
}

impl Layer {
    pub fn new(g: Branch, h: Option<Branch>) -> Self {
        Self { g, h }
    }

    pub fn width(&self) -> usize {
        self.g.width() + self.h.as_ref().map_or(0, Branch::width)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourierResNet {
    layers: Vec<Layer>,
}

impl FourierResNet {
    pub fn new(layers: Vec<Layer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::Validation("a network needs at least one layer".into()));
        }
        if layers[0].h.is_some() {
            return Err(Error::Validation("layer 1 cannot have an h-branch".into()));
        }
        Ok(Self { layers })
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn into_layers(self) -> Vec<Layer> {
        self.layers
    }

    /// `f_l(x)` for `1 <= l <= depth`.
    pub fn eval_prefix(&self, x: f64, l: usize) -> Result<f64> {
        if l == 0 || l > self.depth() {
            return Err(Error::Index {
                index: l,
                len: self.depth(),
            });
        }
        Ok(self.run(x, l))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.run(x, self.depth())
    }

    pub fn eval_grid(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.eval(x)).collect()
    }

    fn run(&self, x: f64, upto: usize) -> f64 {
        let mut f = self.layers[0].g.eval(x);
        for layer in &self.layers[1..upto] {
            let h = layer.h.as_ref().map_or(0.0, |h| h.eval(f));
            f += layer.g.eval(x) + h;
        }
        f
    }

    /// Total number of neurons across all branches.
    pub fn neuron_count(&self) -> usize {
        self.layers.iter().map(Layer::width).sum()
    }

    /// `(g width, h width)` per layer.
    pub fn layer_widths(&self) -> Vec<(usize, usize)> {
        self.layers
            .iter()
            .map(|l| (l.g.width(), l.h.as_ref().map_or(0, Branch::width)))
            .collect()
    }

    /// Every frequency of every branch, in layer order (g before h).
    pub fn frequencies(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.neuron_count());
        for layer in &self.layers {
            out.extend_from_slice(layer.g.freqs());
            if let Some(h) = &layer.h {
                out.extend_from_slice(h.freqs());
            }
        }
        out
    }

    /// Largest neuron modulus `|c|` in the network.
    pub fn max_amplitude(&self) -> f64 {
        self.layers
            .iter()
            .flat_map(|l| l.g.amplitudes().chain(l.h.iter().flat_map(Branch::amplitudes)))
            .fold(0.0, f64::max)
    }

    /// Pretty-printed JSON with every number written to 17 significant digits.
    pub fn to_json(&self) -> String {
        let doc = NetworkDoc::from(self);
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, FullPrecision::new());
        doc.serialize(&mut ser).expect("serializing to memory cannot fail");
        out.push(b'\n');
        String::from_utf8(out).expect("serde_json emits UTF-8")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: NetworkDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        doc.try_into()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkDoc {
    depth: usize,
    layers: Vec<LayerDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayerDoc {
    g: BranchDoc,
    h: Option<BranchDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BranchDoc {
    freqs: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl From<&Branch> for BranchDoc {
    fn from(b: &Branch) -> Self {
        Self {
            freqs: b.freqs.clone(),
            a: b.sin_amps.clone(),
            b: b.cos_amps.clone(),
        }
    }
}

impl From<&FourierResNet> for NetworkDoc {
    fn from(net: &FourierResNet) -> Self {
        Self {
            depth: net.depth(),
            layers: net
                .layers
                .iter()
                .map(|l| LayerDoc {
                    g: (&l.g).into(),
                    h: l.h.as_ref().map(Into::into),
                })
                .collect(),
        }
    }
}

impl TryFrom<NetworkDoc> for FourierResNet {
    type Error = Error;

    fn try_from(doc: NetworkDoc) -> Result<Self> {
        if doc.depth != doc.layers.len() {
            return Err(Error::Validation(format!(
                "depth {} does not match {} layers",
                doc.depth,
                doc.layers.len()
            )));
        }
        let layers = doc
            .layers
            .into_iter()
            .map(|l| {
                let g = Branch::new(l.g.freqs, l.g.a, l.g.b)?;
                let h = l.h.map(|h| Branch::new(h.freqs, h.a, h.b)).transpose()?;
                Ok(Layer::new(g, h))
            })
            .collect::<Result<Vec<_>>>()?;
        FourierResNet::new(layers)
    }
}

/// Pretty JSON layout, but floats are printed as `{:.16e}` (17 significant
/// digits), which round-trips every finite binary64 value.
struct FullPrecision<'a> {
    inner: serde_json::ser::PrettyFormatter<'a>,
}

impl FullPrecision<'_> {
    fn new() -> Self {
        Self {
            inner: serde_json::ser::PrettyFormatter::with_indent(b"  "),
        }
    }
}

impl serde_json::ser::Formatter for FullPrecision<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sign::build_sign_net;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn single_sin() -> FourierResNet {
        let g = Branch::new(vec![FRAC_PI_2], vec![1.0], vec![0.0]).unwrap();
        FourierResNet::new(vec![Layer::new(g, None)]).unwrap()
    }

    fn random_branch(rng: &mut ChaCha8Rng, max_width: usize) -> Branch {
        let w = rng.random_range(0..=max_width);
        Branch::new(
            (0..w).map(|_| rng.random_range(-4.0..4.0)).collect(),
            (0..w).map(|_| rng.random_range(-1.0..1.0)).collect(),
            (0..w).map(|_| rng.random_range(-1.0..1.0)).collect(),
        )
        .unwrap()
    }

    pub(crate) fn random_net(rng: &mut ChaCha8Rng, max_depth: usize, max_width: usize) -> FourierResNet {
        let depth = rng.random_range(1..=max_depth);
        let layers = (0..depth)
            .map(|l| {
                let g = random_branch(rng, max_width);
                let h = (l > 0).then(|| random_branch(rng, max_width));
                Layer::new(g, h)
            })
            .collect();
        FourierResNet::new(layers).unwrap()
    }

    // Straight-line evaluator in complex-exponential form, written independently
    // of `FourierResNet::run`. Also returns the sum of absolute values of every
    // term, the natural scale for a relative comparison of a cancelling sum.
    fn reference_eval(net: &FourierResNet, x: f64) -> (f64, f64) {
        let branch = |b: &Branch, t: f64| -> (f64, f64) {
            let (mut z, mut mag) = (Complex64::new(0.0, 0.0), 0.0);
            for k in 0..b.width() {
                let c = Complex64::new(b.cos_amps()[k], -b.sin_amps()[k]);
                let term = c * Complex64::new(0.0, b.freqs()[k] * t).exp();
                z += term;
                mag += term.re.abs();
            }
            (z.re, mag)
        };
        let layers = net.layers();
        let (mut f, mut mag) = branch(&layers[0].g, x);
        for layer in &layers[1..] {
            let (g, gm) = branch(&layer.g, x);
            let (h, hm) = layer.h.as_ref().map(|h| branch(h, f)).unwrap_or((0.0, 0.0));
            mag += gm + hm;
            f += g + h;
        }
        (f, mag)
    }

    #[test]
    fn single_neuron() {
        let net = single_sin();
        assert_eq!(net.eval_prefix(1.0, 1).unwrap(), 1.0);
        assert_eq!(net.eval_prefix(0.0, 1).unwrap(), 0.0);
        assert_eq!(net.eval_grid(&[0.0, 1.0]), vec![0.0, 1.0]);
        assert!(net.eval_grid(&[]).is_empty());
    }

    #[test]
    fn prefix_index_errors() {
        let net = single_sin();
        assert!(matches!(net.eval_prefix(0.0, 0), Err(Error::Index { .. })));
        assert!(matches!(
            net.eval_prefix(0.0, 2),
            Err(Error::Index { index: 2, len: 1 })
        ));
    }

    #[test]
    fn sign_net_vanishes_at_origin() {
        let net = build_sign_net(8).unwrap();
        for l in 1..=8 {
            assert_eq!(net.eval_prefix(0.0, l).unwrap(), 0.0);
        }
    }

    #[test]
    fn construction_checks() {
        assert!(Branch::new(vec![1.0], vec![1.0, 2.0], vec![0.0]).is_err());
        assert!(Branch::new(vec![f64::NAN], vec![1.0], vec![0.0]).is_err());
        assert!(FourierResNet::new(vec![]).is_err());
        let h = Some(Branch::empty());
        assert!(FourierResNet::new(vec![Layer::new(Branch::empty(), h)]).is_err());
    }

    #[test]
    fn evaluator_matches_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let net = random_net(&mut rng, 5, 8);
            for _ in 0..20 {
                let x = rng.random_range(-1.0..1.0);
                let (got, (want, mag)) = (net.eval(x), reference_eval(&net, x));
                assert!((got - want).abs() <= 1e-14 * mag.max(1.0), "{got} vs {want}");
            }
        }
    }

    #[test]
    fn eval_grid_is_pointwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let net = random_net(&mut rng, 5, 8);
        let xs: Vec<f64> = (0..1000).map(|_| rng.random_range(-1.0..1.0)).collect();
        let grid = net.eval_grid(&xs);
        for (x, y) in xs.iter().zip(grid) {
            assert_eq!(y.to_bits(), net.eval(*x).to_bits());
        }
    }

    #[test]
    fn depth_one_is_plain_trig_sum() {
        let g = Branch::new(vec![1.0, 2.5], vec![0.3, -0.2], vec![0.7, 0.1]).unwrap();
        let net = FourierResNet::new(vec![Layer::new(g, None)]).unwrap();
        let x: f64 = 0.37;
        let expected = 0.3 * x.sin() + 0.7 * x.cos() - 0.2 * (2.5 * x).sin() + 0.1 * (2.5 * x).cos();
        assert!((net.eval(x) - expected).abs() < 1e-15);
    }

    #[test]
    fn neuron_count_is_additive() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a = random_net(&mut rng, 4, 6);
            let b = random_net(&mut rng, 4, 6);
            let mut layers = a.clone().into_layers();
            layers.extend(b.clone().into_layers());
            let joined = FourierResNet::new(layers).unwrap();
            assert_eq!(joined.neuron_count(), a.neuron_count() + b.neuron_count());
        }
        let empty = FourierResNet::new(vec![Layer::new(Branch::empty(), None)]).unwrap();
        assert_eq!(empty.neuron_count(), 0);
    }

    #[test]
    fn json_layout() {
        let json = single_sin().to_json();
        assert!(json.contains("\"depth\": 1"));
        assert!(json.contains("1.5707963267948966e0"));
        assert!(json.contains("\"h\": null"));
    }

    #[test]
    fn truncated_document() {
        let json = single_sin().to_json();
        let cut = &json[..json.len() / 2];
        assert!(matches!(FourierResNet::from_json(cut), Err(Error::Parse { .. })));
    }

    #[test]
    fn mismatched_lengths_document() {
        let doc = r#"{"depth": 1, "layers": [{"g": {"freqs": [1.0, 2.0], "a": [1.0], "b": [0.0, 0.0]}, "h": null}]}"#;
        assert!(matches!(FourierResNet::from_json(doc), Err(Error::Validation(_))));
        let doc = r#"{"depth": 2, "layers": [{"g": {"freqs": [], "a": [], "b": []}, "h": null}]}"#;
        assert!(matches!(FourierResNet::from_json(doc), Err(Error::Validation(_))));
    }

    #[test]
    fn parse_error_reports_position() {
        let err = FourierResNet::from_json("{\n  \"depth\": 1,\n  \"layers\": [x]\n}").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn json_round_trip_is_bit_exact(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let net = random_net(&mut rng, 5, 8);
            let back = FourierResNet::from_json(&net.to_json()).unwrap();
            prop_assert_eq!(&back, &net);
            for _ in 0..50 {
                let x = rng.random_range(-1.0..1.0);
                prop_assert_eq!(back.eval(x).to_bits(), net.eval(x).to_bits());
            }
        }
    }
}
