//! Shot-noise simulation of the prepare–rotate–measure protocol on a qubit,
//! with first-order error propagation into the derived sweep quantities.
//!
//! The rotation before the `Sz` readout is folded into the observable, so a
//! shot is one projective measurement of `Sx`, `Sy` or `Sz` with outcomes
//! `±1/2`. Each `(point, axis)` pair draws from its own random stream.

use std::fmt::Write as _;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::outcome_distribution;
use crate::relations::{tau, RelationContext};
use crate::rng;
use crate::spin_ops::{build_spin_operators, Axis, SpinQuantumNumber};
use crate::states::{QuantumState, StateFamily};

pub const DEFAULT_SHOTS: u64 = 4_000_000;

/// Distance from zero below which a standard-deviation factor makes the
/// product's derivative singular.
pub const PRO0_SINGULAR: f64 = 1e-6;
/// Bound magnitude below which the square-root bounds are singular.
pub const BOUND_SINGULAR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMode {
    /// One binomial count per `(state, axis)`.
    #[default]
    Binomial,
    /// Individual Bernoulli draws; slow, kept for auditing the binomial path.
    PerDraw,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotConfig {
    pub shots: u64,
    pub seed: u64,
    #[serde(default)]
    pub mode: SamplingMode,
}

impl ShotConfig {
    pub fn new(shots: u64, seed: u64) -> Self {
        Self {
            shots,
            seed,
            mode: SamplingMode::Binomial,
        }
    }
}

impl Default for ShotConfig {
    fn default() -> Self {
        Self::new(DEFAULT_SHOTS, 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimationResult {
    pub observable_tag: Axis,
    pub estimate: f64,
    pub stderr: f64,
    pub shots: u64,
}

/// Stream index for one axis of one sweep point.
fn stream_index(point_index: u64, axis: Axis) -> u64 {
    point_index * 3 + axis.index() as u64
}

pub fn simulate_expectation(
    state: &QuantumState<f64>,
    axis: Axis,
    cfg: &ShotConfig,
) -> Result<EstimationResult> {
    simulate_expectation_at(state, axis, cfg, 0)
}

/// Sample mean of `shots` outcomes `±1/2`, with standard error
/// `s/√shots` where `s² = ⟨x²⟩ − x̄² = 1/4 − x̄²` is the plug-in sample variance.
pub fn simulate_expectation_at(
    state: &QuantumState<f64>,
    axis: Axis,
    cfg: &ShotConfig,
    point_index: u64,
) -> Result<EstimationResult> {
    if state.dim() != 2 {
        return Err(Error::NotQubit { dim: state.dim() });
    }
    if cfg.shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let ops = build_spin_operators::<f64>(SpinQuantumNumber::HALF)?;
    let dist = outcome_distribution(state, ops.component(axis))?;
    let p_up = dist.entries[0].probability.clamp(0.0, 1.0);

    let mut rng = rng::stream(cfg.seed, stream_index(point_index, axis));
    let n = cfg.shots;
    let ups = match cfg.mode {
        SamplingMode::Binomial => Binomial::new(n, p_up)
            .map_err(|e| Error::InvalidArgument(format!("binomial sampler: {e}")))?
            .sample(&mut rng),
        SamplingMode::PerDraw => (0..n).filter(|_| rng.random::<f64>() < p_up).count() as u64,
    };
    let nf = n as f64;
    let estimate = (2.0 * ups as f64 - nf) / (2.0 * nf);
    let sample_var = (0.25 - estimate * estimate).max(0.0);
    Ok(EstimationResult {
        observable_tag: axis,
        estimate,
        stderr: (sample_var / nf).sqrt(),
        shots: n,
    })
}

/// A derived quantity with its propagated standard error; `stderr` is
/// `None` where the first-order derivative is singular.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivedValue {
    pub value: f64,
    pub stderr: Option<f64>,
}

impl DerivedValue {
    fn exact(value: f64) -> Self {
        Self {
            value,
            stderr: Some(0.0),
        }
    }
}

/// `Δ = √(1/4 − ⟨O⟩²)` with `σ_Δ = (|⟨O⟩|/Δ)·σ`.
pub fn estimated_std_dev(e: &EstimationResult) -> Result<DerivedValue> {
    if e.estimate.abs() > 0.5 + 1e-12 {
        return Err(Error::EstimateOutOfRange {
            estimate: e.estimate,
        });
    }
    let value = (0.25 - e.estimate * e.estimate).max(0.0).sqrt();
    let stderr = (value > 0.0).then(|| e.estimate.abs() / value * e.stderr);
    Ok(DerivedValue { value, stderr })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowFlag {
    SingularPro0,
    SingularPro1,
    SingularPro2,
}

impl RowFlag {
    pub fn name(self) -> &'static str {
        match self {
            RowFlag::SingularPro0 => "singular_pro0",
            RowFlag::SingularPro1 => "singular_pro1",
            RowFlag::SingularPro2 => "singular_pro2",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub parameter: f64,
    /// Indexed by [`Axis::index`].
    pub estimates: [EstimationResult; 3],
    pub pro0: DerivedValue,
    pub pro1: DerivedValue,
    pub pro2: DerivedValue,
    pub sum0: DerivedValue,
    pub sum1: DerivedValue,
    pub sum2: DerivedValue,
    pub flags: Vec<RowFlag>,
}

fn quadrature(terms: impl IntoIterator<Item = f64>) -> f64 {
    terms.into_iter().map(|t| t * t).sum::<f64>().sqrt()
}

/// Derived products and sums from one state's three per-axis estimates,
/// with delta-method errors treating the axes as independent.
pub fn propagate_derived(parameter: f64, estimates: &[EstimationResult]) -> Result<SweepRow> {
    let find = |axis: Axis| {
        estimates
            .iter()
            .find(|e| e.observable_tag == axis)
            .copied()
            .ok_or(Error::MissingAxis(axis.name()))
    };
    let est = [find(Axis::X)?, find(Axis::Y)?, find(Axis::Z)?];
    let e = est.map(|r| r.estimate);
    let sigma = est.map(|r| r.stderr);
    let delta = [
        estimated_std_dev(&est[0])?.value,
        estimated_std_dev(&est[1])?.value,
        estimated_std_dev(&est[2])?.value,
    ];
    let t = tau::<f64>();
    let t32 = t.powf(1.5);
    let mut flags = Vec::new();

    let pro0_value = delta[0] * delta[1] * delta[2];
    let pro0_err = if delta.iter().any(|d| d.abs() < PRO0_SINGULAR) {
        flags.push(RowFlag::SingularPro0);
        None
    } else {
        Some(quadrature((0..3).map(|i| {
            e[i] * pro0_value / (delta[i] * delta[i]) * sigma[i]
        })))
    };

    let abs_product = (e[0] * e[1] * e[2]).abs();
    let pro1_value = (t * t * t / 8.0 * abs_product).sqrt();
    let pro2_value = (abs_product / 8.0).sqrt();
    // ∂√(c|x y z|)/∂x = √(c|x y z|)/(2|x|)
    let pro1_err = if pro1_value <= BOUND_SINGULAR {
        flags.push(RowFlag::SingularPro1);
        None
    } else {
        Some(quadrature(
            (0..3).map(|i| pro1_value / (2.0 * e[i].abs()) * sigma[i]),
        ))
    };
    let pro2_err = if pro2_value <= BOUND_SINGULAR {
        flags.push(RowFlag::SingularPro2);
        None
    } else {
        pro1_err.map(|s| s / t32)
    };

    let sum0_value: f64 = e.iter().map(|x| 0.25 - x * x).sum();
    let sum0_err = quadrature((0..3).map(|i| 2.0 * e[i] * sigma[i]));
    let abs_sum: f64 = e.iter().map(|x| x.abs()).sum();
    let sum1_value = t * abs_sum / 2.0;
    let sum2_value = abs_sum / 2.0;
    let sum2_err = quadrature(sigma.map(|s| s / 2.0));

    Ok(SweepRow {
        parameter,
        estimates: est,
        pro0: DerivedValue {
            value: pro0_value,
            stderr: pro0_err,
        },
        pro1: DerivedValue {
            value: pro1_value,
            stderr: pro1_err,
        },
        pro2: DerivedValue {
            value: pro2_value,
            stderr: pro2_err,
        },
        sum0: DerivedValue {
            value: sum0_value,
            stderr: Some(sum0_err),
        },
        sum1: DerivedValue {
            value: sum1_value,
            stderr: Some(t * sum2_err),
        },
        sum2: DerivedValue {
            value: sum2_value,
            stderr: Some(sum2_err),
        },
        flags,
    })
}

/// Exact moments of a family point, reported with zero errors.
pub fn analytic_row(
    ctx: &RelationContext<f64>,
    parameter: f64,
    state: &QuantumState<f64>,
) -> Result<SweepRow> {
    let m = ctx.moments(state)?;
    let estimates = Axis::ALL.map(|axis| EstimationResult {
        observable_tag: axis,
        estimate: m.mean[axis.index()],
        stderr: 0.0,
        shots: 0,
    });
    let mut row = propagate_derived(parameter, &estimates)?;
    // Exact curves: take the variances from the state, not from √(1/4 − ⟨·⟩²).
    row.pro0 = DerivedValue::exact(m.std_dev_product());
    row.sum0 = DerivedValue::exact(m.variance_sum());
    for v in [&mut row.pro1, &mut row.pro2, &mut row.sum1, &mut row.sum2] {
        v.stderr = Some(0.0);
    }
    row.flags.clear();
    Ok(row)
}

/// Sweep grid: `[0, 2π)` for the latitude family, `[0, π]` for the meridian.
pub fn sweep_parameters(family: StateFamily, n_points: usize) -> Result<Vec<f64>> {
    if n_points < 2 {
        return Err(Error::InvalidArgument(format!(
            "a sweep needs at least 2 points, got {n_points}"
        )));
    }
    let n = n_points as f64;
    Ok((0..n_points)
        .map(|k| match family {
            StateFamily::R1Latitude => std::f64::consts::TAU * k as f64 / n,
            StateFamily::R2Meridian => std::f64::consts::PI * k as f64 / (n - 1.0),
        })
        .collect())
}

pub fn run_sweep(
    family: StateFamily,
    n_points: usize,
    cfg: &ShotConfig,
    analytic_only: bool,
) -> Result<Vec<SweepRow>> {
    let params = sweep_parameters(family, n_points)?;
    let ctx = RelationContext::<f64>::new(SpinQuantumNumber::HALF)?;
    params
        .par_iter()
        .enumerate()
        .map(|(index, &parameter)| {
            let state = family.point(parameter).state();
            if analytic_only {
                return analytic_row(&ctx, parameter, &state);
            }
            let estimates = Axis::ALL
                .iter()
                .map(|&axis| simulate_expectation_at(&state, axis, cfg, index as u64))
                .collect::<Result<Vec<_>>>()?;
            propagate_derived(parameter, &estimates)
        })
        .collect()
}

pub const CSV_HEADER: &str =
    "param,exp_sx,err_sx,exp_sy,err_sy,exp_sz,err_sz,pro0,err_pro0,pro1,err_pro1,pro2,sum0,err_sum0,sum1,err_sum1,sum2,flags";

/// `%.12g`-style formatting: 12 significant digits, trailing zeros trimmed.
pub fn format_sig(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa.to_owned()),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_owned()
}

fn format_err(v: Option<f64>) -> String {
    v.map(format_sig).unwrap_or_else(|| "nan".into())
}

pub fn csv_line(row: &SweepRow) -> String {
    let mut line = format_sig(row.parameter);
    for e in &row.estimates {
        let _ = write!(line, ",{},{}", format_sig(e.estimate), format_sig(e.stderr));
    }
    let _ = write!(
        line,
        ",{},{},{},{},{},{},{},{},{},{}",
        format_sig(row.pro0.value),
        format_err(row.pro0.stderr),
        format_sig(row.pro1.value),
        format_err(row.pro1.stderr),
        format_sig(row.pro2.value),
        format_sig(row.sum0.value),
        format_err(row.sum0.stderr),
        format_sig(row.sum1.value),
        format_err(row.sum1.stderr),
        format_sig(row.sum2.value),
    );
    let flags: Vec<&str> = row.flags.iter().map(|f| f.name()).collect();
    let _ = write!(line, ",{}", flags.join(";"));
    line
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&csv_line(row));
        out.push('\n');
    }
    out
}
