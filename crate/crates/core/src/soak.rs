//! Random-state soak of every relation applicable at a spin.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::relations::{EvalOptions, RelationContext, RelationId, DEFAULT_SATURATION_TOL};
use crate::rng::derive_seed;
use crate::spin_ops::SpinQuantumNumber;
use crate::states::{random_mixed_indexed, random_pure_indexed, QuantumState};

/// Gaps below `-SOAK_TOLERANCE` count as violations.
pub const SOAK_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Ensemble {
    HaarPure,
    HilbertSchmidtMixed,
}

impl Ensemble {
    pub const ALL: [Ensemble; 2] = [Ensemble::HaarPure, Ensemble::HilbertSchmidtMixed];

    pub fn name(self) -> &'static str {
        match self {
            Ensemble::HaarPure => "haar_pure",
            Ensemble::HilbertSchmidtMixed => "hs_mixed",
        }
    }

    fn tag(self) -> u64 {
        match self {
            Ensemble::HaarPure => 0x5055_5245,
            Ensemble::HilbertSchmidtMixed => 0x4d49_5845,
        }
    }

    pub fn sample(self, dim: usize, seed: u64, index: u64) -> QuantumState<f64> {
        let seed = derive_seed(seed, self.tag());
        match self {
            Ensemble::HaarPure => random_pure_indexed(dim, seed, index),
            Ensemble::HilbertSchmidtMixed => random_mixed_indexed(dim, seed, index),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SoakConfig {
    pub samples: u64,
    pub seed: u64,
    pub spin: SpinQuantumNumber,
    pub tolerance: f64,
}

impl SoakConfig {
    pub fn new(samples: u64, seed: u64, spin: SpinQuantumNumber) -> Self {
        Self {
            samples,
            seed,
            spin,
            tolerance: SOAK_TOLERANCE,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SoakRow {
    pub relation: RelationId,
    pub ensemble: Ensemble,
    pub min_gap: f64,
    /// Sample index attaining `min_gap`.
    pub argmin_index: u64,
    pub violations: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SoakSummary {
    pub config: SoakConfig,
    pub rows: Vec<SoakRow>,
}

impl SoakSummary {
    pub fn violations(&self) -> u64 {
        self.rows.iter().map(|r| r.violations).sum()
    }

    pub fn passed(&self) -> bool {
        self.violations() == 0
    }

    /// Fixed-width text table, one line per (relation, ensemble).
    pub fn table(&self) -> String {
        let mut out = format!(
            "{:<32} {:<9} {:>14} {:>8} {:>10}\n",
            "relation", "ensemble", "min_gap", "argmin", "violations"
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{:<32} {:<9} {:>14.6e} {:>8} {:>10}\n",
                r.relation.name(),
                r.ensemble.name(),
                r.min_gap,
                r.argmin_index,
                r.violations
            ));
        }
        out
    }
}

#[derive(Clone)]
struct Acc {
    min: Vec<(f64, u64)>,
    violations: Vec<u64>,
}

impl Acc {
    fn new(n: usize) -> Self {
        Self {
            min: vec![(f64::INFINITY, u64::MAX); n],
            violations: vec![0; n],
        }
    }

    fn merge(mut self, other: Acc) -> Acc {
        for (a, b) in self.min.iter_mut().zip(other.min) {
            if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
                *a = b;
            }
        }
        for (a, b) in self.violations.iter_mut().zip(other.violations) {
            *a += b;
        }
        self
    }
}

/// Evaluates every state relation at `cfg.spin` on `cfg.samples` states
/// from each ensemble. Results do not depend on the thread schedule.
pub fn run(cfg: &SoakConfig) -> Result<SoakSummary> {
    let ctx = RelationContext::<f64>::new(cfg.spin)?;
    let relations = RelationId::state_relations(cfg.spin);
    let opts = EvalOptions {
        tolerance: DEFAULT_SATURATION_TOL,
        ..EvalOptions::default()
    };
    let dim = cfg.spin.dim();
    let mut rows = Vec::new();
    for ensemble in Ensemble::ALL {
        let n = relations.len();
        let acc = (0..cfg.samples)
            .into_par_iter()
            .try_fold(
                || Acc::new(n),
                |mut acc, i| -> Result<Acc> {
                    let state = ensemble.sample(dim, cfg.seed, i);
                    let m = ctx.moments(&state)?;
                    for (k, &id) in relations.iter().enumerate() {
                        let gap = ctx.evaluate_moments(id, &m, &state, &opts)?.gap;
                        if gap < acc.min[k].0 {
                            acc.min[k] = (gap, i);
                        }
                        if gap < -cfg.tolerance || gap.is_nan() {
                            acc.violations[k] += 1;
                        }
                    }
                    Ok(acc)
                },
            )
            .try_reduce(|| Acc::new(n), |a, b| Ok(a.merge(b)))?;
        for (k, &relation) in relations.iter().enumerate() {
            rows.push(SoakRow {
                relation,
                ensemble,
                min_gap: acc.min[k].0,
                argmin_index: acc.min[k].1,
                violations: acc.violations[k],
            });
        }
    }
    Ok(SoakSummary { config: *cfg, rows })
}
