use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Args;
use fourier_resnet::metrics::{diagnostic_grid, DIAGNOSTIC_GRID};
use fourier_resnet::smooth::fourier_coeffs;
use fourier_resnet::{
    build_sign_net, component_views, fit_rate, gibbs_support_width, lp_error, max_overshoot, sign_error_bound,
    truncated_sign_series, BuildSpec, FourierResNet, PiecewiseTarget, QuadratureConfig,
};
use rayon::prelude::*;

use crate::output::{float, svg_path, write_text, Table};
use crate::svg::{line_chart, Scale, Series};
use crate::{CliError, QuadArgs};

/// Widening of the interval on which `max |H'|` is measured.
const DELTA_LIPSCHITZ: f64 = 0.01;

fn uniform_grid(n: usize) -> Result<Vec<f64>, CliError> {
    if n < 2 {
        return Err(CliError::Usage(format!("grid needs at least 2 points, got {n}")));
    }
    Ok((0..n)
        .map(|i| {
            // Mirror the left half so the grid is exactly symmetric and hits 0 for odd n.
            let j = i.min(n - 1 - i);
            let x = -1.0 + 2.0 * j as f64 / (n - 1) as f64;
            if i == j {
                x
            } else {
                -x
            }
        })
        .collect())
}

fn nonempty<T>(list: &[T], flag: &str) -> Result<(), CliError> {
    if list.is_empty() {
        return Err(CliError::Usage(format!("--{flag} must not be empty")));
    }
    Ok(())
}

fn write_svg(enabled: bool, out: &Path, chart: impl FnOnce() -> String) -> Result<(), CliError> {
    if enabled {
        write_text(&svg_path(out), &chart())?;
    }
    Ok(())
}

#[derive(Args)]
pub struct SignCurves {
    /// Network depths, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "5,20")]
    depths: Vec<usize>,
    /// Number of uniform grid points on [-1, 1].
    #[arg(long, default_value_t = 2001)]
    grid: usize,
    #[arg(long)]
    out: PathBuf,
    /// Also write an overlay chart next to the CSV.
    #[arg(long)]
    svg: bool,
}

impl SignCurves {
    pub fn run(self) -> Result<(), CliError> {
        nonempty(&self.depths, "depths")?;
        let xs = uniform_grid(self.grid)?;
        let mut columns: Vec<(String, Vec<f64>)> = Vec::new();
        let mut series_cols = Vec::new();
        for &d in &self.depths {
            let net = build_sign_net(d)?;
            columns.push((format!("resnet_L{d}"), xs.par_iter().map(|&x| net.eval(x)).collect()));
            let series = truncated_sign_series(d)?;
            series_cols.push((format!("series_L{d}"), xs.par_iter().map(|&x| series.eval(x)).collect()));
        }
        columns.extend(series_cols);

        let mut header = vec!["x".to_string(), "sgn".to_string()];
        header.extend(columns.iter().map(|(name, _)| name.clone()));
        let mut table = Table::create(&self.out, &header)?;
        for (i, &x) in xs.iter().enumerate() {
            let mut row = vec![float(x), float(sign(x))];
            row.extend(columns.iter().map(|(_, v)| float(v[i])));
            table.row(&row)?;
        }
        table.finish()?;

        write_svg(self.svg, &self.out, || {
            let mut series = vec![Series {
                name: "sgn".into(),
                points: xs.iter().map(|&x| (x, sign(x))).collect(),
            }];
            series.extend(columns.iter().map(|(name, v)| Series {
                name: name.clone(),
                points: xs.iter().copied().zip(v.iter().copied()).collect(),
            }));
            line_chart("sign approximations", &series, Scale::Linear, Scale::Linear)
        })
    }
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[derive(Args)]
pub struct SignConvergence {
    /// Largest depth; rows cover 1..=max-depth.
    #[arg(long, default_value_t = 20)]
    max_depth: usize,
    /// Exponent of the error norm.
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[arg(long)]
    out: PathBuf,
    /// Also write a log-scale chart next to the CSV.
    #[arg(long)]
    svg: bool,
    #[command(flatten)]
    quad: QuadArgs,
}

impl SignConvergence {
    pub fn run(self) -> Result<(), CliError> {
        if self.max_depth < 2 {
            return Err(CliError::Usage(format!(
                "--max-depth must be at least 2, got {}",
                self.max_depth
            )));
        }
        let quad = self.quad.config()?;
        let p = self.p;
        let rows: Vec<(usize, f64, f64, f64)> = (1..=self.max_depth)
            .into_par_iter()
            .map(|l| -> Result<_, CliError> {
                let net = build_sign_net(l)?;
                let series = truncated_sign_series(l)?;
                let resnet = lp_error(sign, |x| net.eval(x), p, &quad)?;
                let series = lp_error(sign, |x| series.eval(x), p, &quad)?;
                Ok((l, resnet, series, sign_error_bound(l, p)?))
            })
            .collect::<Result<_, _>>()?;

        let header = ["l", "resnet_error", "series_error", "bound"].map(String::from);
        let mut table = Table::create(&self.out, &header)?;
        for &(l, a, b, c) in &rows {
            table.row(&[l.to_string(), float(a), float(b), float(c)])?;
        }
        table.finish()?;

        let pow2: Vec<f64> = rows.iter().map(|r| 2f64.powi(r.0 as i32)).collect();
        let depth: Vec<f64> = rows.iter().map(|r| r.0 as f64).collect();
        let resnet: Vec<f64> = rows.iter().map(|r| r.1).collect();
        let series: Vec<f64> = rows.iter().map(|r| r.2).collect();
        println!("resnet slope vs 2^l: {:.4}", fit_rate(&pow2, &resnet)?.slope);
        println!("series slope vs l:   {:.4}", fit_rate(&depth, &series)?.slope);

        write_svg(self.svg, &self.out, || {
            let pts = |v: &[f64]| depth.iter().copied().zip(v.iter().copied()).collect();
            let bound: Vec<f64> = rows.iter().map(|r| r.3).collect();
            let series = [
                Series {
                    name: "resnet".into(),
                    points: pts(&resnet),
                },
                Series {
                    name: "sine series".into(),
                    points: pts(&series),
                },
                Series {
                    name: "bound".into(),
                    points: pts(&bound),
                },
            ];
            line_chart("sign error against depth", &series, Scale::Linear, Scale::Log)
        })?;

        check_bound(&rows)
    }
}

fn check_bound(rows: &[(usize, f64, f64, f64)]) -> Result<(), CliError> {
    match rows.iter().find(|r| r.1 > r.3) {
        Some(&(l, err, _, bound)) => Err(CliError::Assertion(format!(
            "resnet error {err:e} exceeds bound {bound:e} at depth {l}"
        ))),
        None => Ok(()),
    }
}

#[derive(Args)]
pub struct Build {
    /// Registered target name.
    #[arg(long)]
    target: String,
    /// Number of matched derivatives.
    #[arg(long)]
    m: usize,
    /// Half-width K of the residual series (width W = 2K).
    #[arg(long)]
    modes: usize,
    /// Depth L of the sign network.
    #[arg(long)]
    depth: usize,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    quad: QuadArgs,
}

impl Build {
    pub fn run(self) -> Result<(), CliError> {
        let target = PiecewiseTarget::lookup(&self.target)?;
        let spec = BuildSpec::new(target, self.m, self.modes, self.depth).with_quad(self.quad.config()?);
        let net = component_views(&spec)?.network();
        write_text(&self.out, &net.to_json())?;
        println!("neurons: {}", net.neuron_count());
        for (i, (g, h)) in net.layer_widths().into_iter().enumerate() {
            println!("layer {}: g {g}, h {h}", i + 1);
        }
        Ok(())
    }
}

#[derive(Args)]
pub struct Eval {
    /// Network file written by `build`.
    #[arg(long)]
    net: PathBuf,
    /// Number of uniform grid points on [-1, 1].
    #[arg(long, default_value_t = 2001)]
    grid: usize,
    #[arg(long)]
    out: PathBuf,
}

impl Eval {
    pub fn run(self) -> Result<(), CliError> {
        let text =
            std::fs::read_to_string(&self.net).map_err(|e| CliError::Io(format!("{}: {e}", self.net.display())))?;
        let net = FourierResNet::from_json(&text).map_err(|e| CliError::Io(format!("{}: {e}", self.net.display())))?;
        let xs = uniform_grid(self.grid)?;
        let ys = net.eval_grid(&xs);
        let mut table = Table::create(&self.out, &["x".into(), "value".into()])?;
        for (x, y) in xs.into_iter().zip(ys) {
            table.row(&[float(x), float(y)])?;
        }
        table.finish()
    }
}

struct ExperimentRow {
    experiment: &'static str,
    m: usize,
    width: usize,
    depth: usize,
    neurons: usize,
    error_l1: f64,
    error_l2: f64,
    bound: Option<f64>,
    wall_ms: f64,
}

const RESNET: &str = "fourier_resnet";
const RESIDUAL: &str = "residual_width";
const BASELINE: &str = "fourier_baseline";

/// Terms in the baseline partial sum beyond the network width.
const BASELINE_EXTRA_TERMS: usize = 41;

#[derive(Args)]
pub struct Convergence {
    /// Registered target name.
    #[arg(long, default_value = "pw_smooth")]
    target: String,
    /// Matched derivative orders, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
    m: Vec<usize>,
    /// Half-widths K, comma separated (width W = 2K).
    #[arg(long, value_delimiter = ',', default_value = "5,10,20,40,80")]
    modes_list: Vec<usize>,
    /// Depth L of the sign network.
    #[arg(long, default_value_t = 20)]
    depth: usize,
    #[arg(long)]
    out: PathBuf,
    /// Fill the wall_ms column (makes the CSV run-dependent).
    #[arg(long)]
    timing: bool,
    /// Also write a log-log chart next to the CSV.
    #[arg(long)]
    svg: bool,
    #[command(flatten)]
    quad: QuadArgs,
}

impl Convergence {
    pub fn run(self) -> Result<(), CliError> {
        nonempty(&self.m, "m")?;
        nonempty(&self.modes_list, "modes-list")?;
        let target = PiecewiseTarget::lookup(&self.target)?;
        let quad = self.quad.config()?;
        let mut ms = self.m.clone();
        ms.sort_unstable();
        ms.dedup();
        let mut ks = self.modes_list.clone();
        ks.sort_unstable();
        ks.dedup();
        for &m in &ms {
            BuildSpec::new(target.clone(), m, ks[0], self.depth).validate()?;
        }

        let cells: Vec<(usize, usize)> = ms.iter().flat_map(|&m| ks.iter().map(move |&k| (m, k))).collect();
        let resnet: Vec<[ExperimentRow; 2]> = cells
            .par_iter()
            .map(|&(m, k)| self.resnet_cell(&target, &quad, m, k))
            .collect::<Result<_, _>>()?;
        let baseline: Vec<ExperimentRow> = ks
            .par_iter()
            .map(|&k| self.baseline_cell(&target, &quad, k))
            .collect::<Result<_, _>>()?;

        let header = [
            "experiment",
            "target",
            "m",
            "W",
            "L",
            "neurons",
            "error_l1",
            "error_l2",
            "bound",
            "wall_ms",
        ]
        .map(String::from);
        let mut table = Table::create(&self.out, &header)?;
        let all = resnet.iter().flatten().chain(&baseline);
        for r in all {
            table.row(&[
                r.experiment.to_string(),
                target.name().to_string(),
                r.m.to_string(),
                r.width.to_string(),
                r.depth.to_string(),
                r.neurons.to_string(),
                float(r.error_l1),
                float(r.error_l2),
                r.bound.map(float).unwrap_or_default(),
                if self.timing {
                    format!("{:.3}", r.wall_ms)
                } else {
                    String::new()
                },
            ])?;
        }
        table.finish()?;

        let widths: Vec<f64> = ks.iter().map(|&k| (2 * k) as f64).collect();
        let mut chart = Vec::new();
        for (i, &m) in ms.iter().enumerate() {
            let cells = &resnet[i * ks.len()..(i + 1) * ks.len()];
            let total: Vec<f64> = cells.iter().map(|c| c[0].error_l2).collect();
            let residual: Vec<f64> = cells.iter().map(|c| c[1].error_l2).collect();
            println!(
                "m={m}: L2 slope vs W {}, residual-only {} (reference -(m-1/2) = {:.1})",
                slope(&widths, &total),
                slope(&widths, &residual),
                -(m as f64 - 0.5)
            );
            chart.push(Series {
                name: format!("resnet m={m}"),
                points: widths.iter().copied().zip(total).collect(),
            });
        }
        let terms: Vec<f64> = baseline.iter().map(|r| r.neurons as f64).collect();
        let l1: Vec<f64> = baseline.iter().map(|r| r.error_l1).collect();
        println!("baseline: L1 slope vs N {}", slope(&terms, &l1));

        write_svg(self.svg, &self.out, || {
            chart.push(Series {
                name: "fourier baseline".into(),
                points: widths
                    .iter()
                    .copied()
                    .zip(baseline.iter().map(|r| r.error_l2))
                    .collect(),
            });
            line_chart(
                &format!("{} error against width", target.name()),
                &chart,
                Scale::Log,
                Scale::Log,
            )
        })
    }

    fn resnet_cell(
        &self,
        target: &PiecewiseTarget,
        quad: &QuadratureConfig,
        m: usize,
        k: usize,
    ) -> Result<[ExperimentRow; 2], CliError> {
        let start = Instant::now();
        let spec = BuildSpec::new(target.clone(), m, k, self.depth).with_quad(*quad);
        let parts = component_views(&spec)?;
        let net = parts.network();
        let error_l1 = lp_error(|x| target.value(x), |x| net.eval(x), 1.0, quad)?;
        let split = parts.error_split(quad, DELTA_LIPSCHITZ)?;
        let residual_l1 = lp_error(|x| parts.r(x), |x| parts.r_w(x), 1.0, quad)?;
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        let row = |experiment, error_l1, error_l2, bound| ExperimentRow {
            experiment,
            m,
            width: spec.width(),
            depth: self.depth,
            neurons: net.neuron_count(),
            error_l1,
            error_l2,
            bound,
            wall_ms,
        };
        Ok([
            row(RESNET, error_l1, split.total, Some(split.bound)),
            row(RESIDUAL, residual_l1, split.width_term, None),
        ])
    }

    fn baseline_cell(
        &self,
        target: &PiecewiseTarget,
        quad: &QuadratureConfig,
        k: usize,
    ) -> Result<ExperimentRow, CliError> {
        let start = Instant::now();
        let width = 2 * k;
        let half = (BASELINE_EXTRA_TERMS - 1) / 2 + k;
        let coeffs = fourier_coeffs(|x| target.value(x), half, quad)?;
        let partial = |x: f64| {
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let w = (i as f64 - half as f64) * std::f64::consts::PI * x;
                    c.re * w.cos() - c.im * w.sin()
                })
                .sum::<f64>()
        };
        let error_l1 = lp_error(|x| target.value(x), partial, 1.0, quad)?;
        let error_l2 = lp_error(|x| target.value(x), partial, 2.0, quad)?;
        Ok(ExperimentRow {
            experiment: BASELINE,
            m: 0,
            width,
            depth: 0,
            neurons: coeffs.len(),
            error_l1,
            error_l2,
            bound: None,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        })
    }
}

fn slope(xs: &[f64], errs: &[f64]) -> String {
    match fit_rate(xs, errs) {
        Ok(fit) => format!("{:.3}", fit.slope),
        Err(_) => "n/a".into(),
    }
}

#[derive(Args)]
pub struct Gibbs {
    /// Registered target name.
    #[arg(long, default_value = "pw_smooth")]
    target: String,
    /// Number of matched derivatives.
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Half-width K of the residual series.
    #[arg(long, default_value_t = 5)]
    modes: usize,
    /// Depths in ascending order, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "3,4,5,6,7")]
    depths: Vec<usize>,
    /// Pointwise error level that counts as an oscillation.
    #[arg(long, default_value_t = 0.02)]
    threshold: f64,
    #[arg(long)]
    out: PathBuf,
    /// Also write a chart next to the CSV.
    #[arg(long)]
    svg: bool,
    #[command(flatten)]
    quad: QuadArgs,
}

impl Gibbs {
    pub fn run(self) -> Result<(), CliError> {
        nonempty(&self.depths, "depths")?;
        if self.depths.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Usage(format!(
                "--depths must be strictly ascending, got {:?}",
                self.depths
            )));
        }
        let target = PiecewiseTarget::lookup(&self.target)?;
        let quad = self.quad.config()?;
        let grid = diagnostic_grid(DIAGNOSTIC_GRID);
        let (lo, hi) = grid
            .iter()
            .map(|&x| target.value(x))
            .fold((f64::MAX, f64::MIN), |(a, b), v| (a.min(v), b.max(v)));

        let rows: Vec<(usize, f64, f64)> = self
            .depths
            .par_iter()
            .map(|&l| -> Result<_, CliError> {
                let spec = BuildSpec::new(target.clone(), self.m, self.modes, l).with_quad(quad);
                let net = component_views(&spec)?.network();
                let width = gibbs_support_width(|x| target.value(x), |x| net.eval(x), self.threshold, DIAGNOSTIC_GRID)?;
                let over = max_overshoot(|x| net.eval(x), lo, hi, DIAGNOSTIC_GRID)?;
                Ok((l, width, over))
            })
            .collect::<Result<_, _>>()?;

        let header = ["L", "support_width", "max_overshoot"].map(String::from);
        let mut table = Table::create(&self.out, &header)?;
        for &(l, w, o) in &rows {
            table.row(&[l.to_string(), float(w), float(o)])?;
        }
        table.finish()?;

        write_svg(self.svg, &self.out, || {
            let series = [Series {
                name: "support width".into(),
                points: rows.iter().map(|r| (r.0 as f64, r.1)).collect(),
            }];
            line_chart("oscillation support against depth", &series, Scale::Linear, Scale::Log)
        })?;

        check_non_increasing(&rows)
    }
}

fn check_non_increasing(rows: &[(usize, f64, f64)]) -> Result<(), CliError> {
    match rows.windows(2).find(|w| w[1].1 > w[0].1) {
        Some(w) => Err(CliError::Assertion(format!(
            "support width grew from {:e} at L={} to {:e} at L={}",
            w[0].1, w[0].0, w[1].1, w[1].0
        ))),
        None => Ok(()),
    }
}
