//! Derivative-free search for minimum-gap states.
//!
//! Pure states of dimension `d` are parametrized by `2d − 2` unconstrained
//! reals: `d − 1` hyperspherical angles for the moduli (first amplitude
//! real) and `d − 1` relative phases. Mixed qubit states use the radially
//! clamped map `x ↦ x / max(1, |x|)` onto the closed Bloch ball. Every
//! parameter vector therefore maps to a valid state, and the simplex search
//! runs without constraints.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::optimize::{nelder_mead, Minimum, NelderMeadOptions};
use crate::relations::{RelationContext, RelationId};
use crate::rng::{self, derive_seed};
use crate::spin_ops::SpinQuantumNumber;
use crate::states::{
    density_from_bloch, haar_vector, random_mixed_indexed, random_pure_indexed, BlochVector,
    QuantumState,
};

/// A sampled gap below this is reported as a counterexample candidate.
pub const COUNTEREXAMPLE_THRESHOLD: f64 = -1e-8;
/// Samples refined by local search in a conjecture scan.
pub const SCAN_REFINEMENTS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProbeConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            max_iters: 2000,
            tol: 1e-10,
            seed: 0,
        }
    }
}

impl ProbeConfig {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "probe tolerance must be positive, got {}",
                self.tol
            )));
        }
        if self.restarts == 0 || self.max_iters == 0 {
            return Err(Error::InvalidArgument(
                "restarts and max_iters must be positive".into(),
            ));
        }
        Ok(())
    }

    fn optimizer(&self) -> NelderMeadOptions {
        NelderMeadOptions {
            max_iters: self.max_iters,
            // Gap values near saturation are tiny; drive the simplex well below tol.
            f_tol: self.tol * 1e-3,
            x_tol: 1e-9,
            ..NelderMeadOptions::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Manifold {
    Pure,
    /// Closed Bloch ball; spin 1/2 only.
    Mixed,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeResult {
    pub relation: RelationId,
    pub spin: SpinQuantumNumber,
    pub manifold: Manifold,
    pub min_gap: f64,
    /// Left-hand side at the minimizer.
    pub min_lhs: f64,
    pub argmin_state: QuantumState<f64>,
    pub converged: bool,
    pub evaluations: usize,
    /// Best gap reached from each start, in start order.
    pub restart_gaps: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<QuantumState<f64>>,
}

/// Unit vector from `2d − 2` parameters.
pub fn pure_amplitudes(params: &[f64]) -> Vec<Complex<f64>> {
    assert!(
        params.len() >= 2 && params.len().is_multiple_of(2),
        "pure parametrization needs 2d − 2 parameters"
    );
    let d = params.len() / 2 + 1;
    let (angles, phases) = params.split_at(d - 1);
    let mut amps = Vec::with_capacity(d);
    let mut sines = 1.0;
    for k in 0..d {
        let modulus = if k < d - 1 {
            sines * angles[k].cos()
        } else {
            sines
        };
        if k < d - 1 {
            sines *= angles[k].sin();
        }
        let phase = if k == 0 { 0.0 } else { phases[k - 1] };
        amps.push(Complex::from_polar(modulus, phase));
    }
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    debug_assert!((norm - 1.0).abs() <= 1e-12);
    amps.iter().map(|z| z / norm).collect()
}

/// Inverse of [`pure_amplitudes`] up to global phase.
pub fn pure_parameters(psi: &[Complex<f64>]) -> Vec<f64> {
    let d = psi.len();
    let global = psi[0].arg();
    let moduli: Vec<f64> = psi.iter().map(|z| z.norm()).collect();
    let mut tails = vec![0.0f64; d + 1];
    for k in (0..d).rev() {
        tails[k] = (tails[k + 1].powi(2) + moduli[k].powi(2)).sqrt();
    }
    let mut params: Vec<f64> = (0..d - 1).map(|k| tails[k + 1].atan2(moduli[k])).collect();
    params.extend((1..d).map(|k| psi[k].arg() - global));
    params
}

pub fn pure_state(params: &[f64]) -> QuantumState<f64> {
    QuantumState::from_pure(&pure_amplitudes(params)).expect("unit amplitudes")
}

pub fn ball_point(params: &[f64]) -> BlochVector<f64> {
    let r = BlochVector::new(params[0], params[1], params[2]);
    let norm = r.norm();
    if norm > 1.0 {
        BlochVector::new(r.rx / norm, r.ry / norm, r.rz / norm)
    } else {
        r
    }
}

pub fn mixed_state(params: &[f64]) -> QuantumState<f64> {
    density_from_bloch(ball_point(params)).expect("clamped into the ball")
}

fn state_of(manifold: Manifold, params: &[f64]) -> QuantumState<f64> {
    match manifold {
        Manifold::Pure => pure_state(params),
        Manifold::Mixed => mixed_state(params),
    }
}

struct Objective<'a> {
    ctx: &'a RelationContext<f64>,
    relation: Option<RelationId>,
    manifold: Manifold,
}

impl Objective<'_> {
    /// Gap of the relation, or the variance sum when `relation` is `None`.
    fn value(&self, params: &[f64]) -> f64 {
        let state = state_of(self.manifold, params);
        match self.relation {
            Some(id) => self
                .ctx
                .evaluate(id, &state)
                .map(|r| r.gap)
                .unwrap_or(f64::INFINITY),
            None => self
                .ctx
                .moments(&state)
                .map(|m| m.variance_sum())
                .unwrap_or(f64::INFINITY),
        }
    }
}

fn start_point(manifold: Manifold, dim: usize, seed: u64, index: u64) -> Vec<f64> {
    match manifold {
        Manifold::Pure => {
            let mut rng = rng::stream(derive_seed(seed, 0x5354_4152), index);
            pure_parameters(&haar_vector::<f64>(dim, &mut rng))
        }
        Manifold::Mixed => {
            let state = random_mixed_indexed::<f64>(2, derive_seed(seed, 0x4d49_5845), index);
            crate::states::bloch_from_density(&state)
                .expect("qubit")
                .to_array()
                .to_vec()
        }
    }
}

fn finish(
    ctx: &RelationContext<f64>,
    relation: RelationId,
    manifold: Manifold,
    runs: Vec<Minimum>,
    gap_of: impl Fn(&QuantumState<f64>) -> Result<(f64, f64)>,
) -> Result<ProbeResult> {
    let restart_gaps: Vec<f64> = runs.iter().map(|m| m.value).collect();
    let evaluations = runs.iter().map(|m| m.evaluations).sum();
    // Lowest value wins; ties go to the earliest start.
    let best = runs
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(i.cmp(j)))
        .map(|(_, m)| m)
        .ok_or_else(|| Error::InvalidArgument("no optimizer runs".into()))?;
    let argmin_state = state_of(manifold, &best.x);
    let (min_gap, min_lhs) = gap_of(&argmin_state)?;
    Ok(ProbeResult {
        relation,
        spin: ctx.spin(),
        manifold,
        min_gap,
        min_lhs,
        argmin_state,
        converged: best.converged,
        evaluations,
        restart_gaps,
        counterexample: None,
    })
}

/// Minimum gap of `relation` over pure states of spin `s`.
pub fn min_gap(
    relation: RelationId,
    s: SpinQuantumNumber,
    cfg: &ProbeConfig,
) -> Result<ProbeResult> {
    min_gap_on(relation, s, Manifold::Pure, cfg)
}

pub fn min_gap_on(
    relation: RelationId,
    s: SpinQuantumNumber,
    manifold: Manifold,
    cfg: &ProbeConfig,
) -> Result<ProbeResult> {
    cfg.validate()?;
    relation.check_spin(s)?;
    if manifold == Manifold::Mixed && !s.is_half() {
        return Err(Error::InvalidArgument(
            "the mixed manifold is the qubit Bloch ball; use spin 1/2".into(),
        ));
    }
    let ctx = RelationContext::<f64>::new(s)?;
    let objective = Objective {
        ctx: &ctx,
        relation: Some(relation),
        manifold,
    };
    let opts = cfg.optimizer();
    let runs: Vec<Minimum> = (0..cfg.restarts as u64)
        .into_par_iter()
        .map(|i| {
            let x0 = start_point(manifold, s.dim(), cfg.seed, i);
            nelder_mead(|x| objective.value(x), &x0, &opts)
        })
        .collect();
    finish(&ctx, relation, manifold, runs, |state| {
        let r = ctx.evaluate(relation, state)?;
        Ok((r.gap, r.lhs))
    })
}

/// Minimum of `(ΔSx)² + (ΔSy)² + (ΔSz)²` over pure states, reported
/// against the general-spin bound `s`.
pub fn min_variance_sum(s: SpinQuantumNumber, cfg: &ProbeConfig) -> Result<ProbeResult> {
    cfg.validate()?;
    let ctx = RelationContext::<f64>::new(s)?;
    let objective = Objective {
        ctx: &ctx,
        relation: None,
        manifold: Manifold::Pure,
    };
    let opts = cfg.optimizer();
    let runs: Vec<Minimum> = (0..cfg.restarts as u64)
        .into_par_iter()
        .map(|i| {
            let x0 = start_point(Manifold::Pure, s.dim(), cfg.seed, i);
            let mut m = nelder_mead(|x| objective.value(x), &x0, &opts);
            m.value -= s.value::<f64>();
            m
        })
        .collect();
    finish(
        &ctx,
        RelationId::SumGeneralSpin,
        Manifold::Pure,
        runs,
        |state| {
            let r = ctx.evaluate(RelationId::SumGeneralSpin, state)?;
            Ok((r.gap, r.lhs))
        },
    )
}

/// Random-sample scan of the higher-spin triple-product conjecture with
/// local refinement of the most promising samples.
///
/// A gap below [`COUNTEREXAMPLE_THRESHOLD`] is returned in
/// `counterexample` for review; it is not an error.
pub fn scan_conjecture(
    s: SpinQuantumNumber,
    samples: u64,
    cfg: &ProbeConfig,
) -> Result<ProbeResult> {
    cfg.validate()?;
    if s.twice_s() < 2 {
        return Err(Error::InvalidArgument(
            "the conjecture scan targets s >= 1; spin 1/2 is the triple-product relation itself"
                .into(),
        ));
    }
    let relation = RelationId::ConjectureTripleProduct;
    let ctx = RelationContext::<f64>::new(s)?;
    let sample_seed = derive_seed(cfg.seed, 0x5343_414e);
    let mut scored: Vec<(f64, u64)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let state = random_pure_indexed::<f64>(s.dim(), sample_seed, i);
            let gap = ctx
                .evaluate(relation, &state)
                .map(|r| r.gap)
                .unwrap_or(f64::INFINITY);
            (gap, i)
        })
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    scored.truncate(SCAN_REFINEMENTS);

    let objective = Objective {
        ctx: &ctx,
        relation: Some(relation),
        manifold: Manifold::Pure,
    };
    let opts = cfg.optimizer();
    let runs: Vec<Minimum> = scored
        .par_iter()
        .map(|&(gap, i)| {
            let mut rng = rng::stream(sample_seed, i);
            let x0 = pure_parameters(&haar_vector::<f64>(s.dim(), &mut rng));
            let refined = nelder_mead(|x| objective.value(x), &x0, &opts);
            if refined.value <= gap {
                refined
            } else {
                Minimum {
                    x: x0,
                    value: gap,
                    iterations: 0,
                    evaluations: 1,
                    converged: false,
                }
            }
        })
        .collect();
    let mut result = finish(&ctx, relation, Manifold::Pure, runs, |state| {
        let r = ctx.evaluate(relation, state)?;
        Ok((r.gap, r.lhs))
    })?;
    result.evaluations += samples as usize;
    if result.min_gap < COUNTEREXAMPLE_THRESHOLD {
        result.counterexample = Some(result.argmin_state.clone());
    }
    Ok(result)
}
