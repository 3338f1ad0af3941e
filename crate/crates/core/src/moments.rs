//! Expectations, spreads, outcome distributions and Shannon entropies of
//! observables.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{tol, Real};
use crate::spin_ops::{check_dims, OperatorMatrix};
use crate::states::QuantumState;

/// Eigenvalues closer than this are one measurement outcome.
pub const DEFAULT_MERGE_TOL: f64 = 1e-9;

/// `tr(ρO)`, with the imaginary residue checked against 1e-12.
pub fn expectation<T: Real>(state: &QuantumState<T>, op: &OperatorMatrix<T>) -> Result<T> {
    check_dims(op.dim(), state.dim())?;
    real_part(state.rho().trace_product(op.matrix()))
}

fn real_part<T: Real>(z: Complex<T>) -> Result<T> {
    if z.im.abs() > tol::<T>(1e-12) {
        return Err(Error::ComplexExpectation {
            residue: z.im.to_f64_lossy(),
        });
    }
    Ok(z.re)
}

/// `⟨(O − ⟨O⟩)²⟩`, summed as `Σ |(O − ⟨O⟩)c|²` over the state's factor.
pub fn variance<T: Real>(state: &QuantumState<T>, op: &OperatorMatrix<T>) -> Result<T> {
    let mean = expectation(state, op)?;
    Ok(central_second_moment(state, op, mean))
}

pub(crate) fn central_second_moment<T: Real>(
    state: &QuantumState<T>,
    op: &OperatorMatrix<T>,
    mean: T,
) -> T {
    let mut acc = T::zero();
    for c in state.factor() {
        let mut shifted = op.matrix().mul_vec(c);
        for (v, ci) in shifted.iter_mut().zip(c) {
            *v -= ci.scale(mean);
        }
        acc += shifted
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b);
    }
    acc
}

pub fn std_dev<T: Real>(state: &QuantumState<T>, op: &OperatorMatrix<T>) -> Result<T> {
    variance(state, op).map(T::sqrt)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome<T> {
    pub eigenvalue: T,
    pub probability: T,
}

/// Outcomes sorted by descending eigenvalue, degenerate levels merged.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution<T> {
    pub entries: Vec<Outcome<T>>,
}

impl<T: Real> OutcomeDistribution<T> {
    pub fn mean(&self) -> T {
        self.entries
            .iter()
            .fold(T::zero(), |acc, o| acc + o.eigenvalue * o.probability)
    }

    pub fn second_moment(&self) -> T {
        self.entries.iter().fold(T::zero(), |acc, o| {
            acc + o.eigenvalue * o.eigenvalue * o.probability
        })
    }

    pub fn entropy(&self, base: EntropyBase) -> T {
        let nats = self.entries.iter().fold(T::zero(), |acc, o| {
            if o.probability > T::zero() {
                acc - o.probability * o.probability.ln()
            } else {
                acc
            }
        });
        nats / base.ln_base::<T>()
    }
}

/// One eigenvalue cluster and an orthonormal basis of its eigenspace.
#[derive(Clone, Debug)]
struct Level<T> {
    eigenvalue: T,
    vectors: Vec<Vec<Complex<T>>>,
}

/// Spectral decomposition of an observable, reusable across states.
#[derive(Clone, Debug)]
pub struct Spectrum<T> {
    dim: usize,
    levels: Vec<Level<T>>,
}

impl<T: Real> Spectrum<T> {
    pub fn new(op: &OperatorMatrix<T>) -> Self {
        Self::with_merge_tol(op, DEFAULT_MERGE_TOL)
    }

    pub fn with_merge_tol(op: &OperatorMatrix<T>, merge_tol: f64) -> Self {
        let merge = tol::<T>(merge_tol);
        let eig = op.matrix().hermitian_eigen();
        let mut levels: Vec<Level<T>> = Vec::new();
        for (value, vector) in eig.values.into_iter().zip(eig.vectors) {
            match levels.last_mut() {
                Some(level) if (level.eigenvalue - value).abs() <= merge => {
                    level.vectors.push(vector)
                }
                _ => levels.push(Level {
                    eigenvalue: value,
                    vectors: vec![vector],
                }),
            }
        }
        Self {
            dim: op.dim(),
            levels,
        }
    }

    pub fn eigenvalues(&self) -> impl Iterator<Item = T> + '_ {
        self.levels.iter().map(|l| l.eigenvalue)
    }

    /// `pₖ = tr(ρ Πₖ)` for each merged eigenprojector.
    pub fn distribution(&self, state: &QuantumState<T>) -> Result<OutcomeDistribution<T>> {
        check_dims(self.dim, state.dim())?;
        let entries = self
            .levels
            .iter()
            .map(|level| {
                let p = level
                    .vectors
                    .iter()
                    .map(|v| state.rho().quadratic_form(v).re)
                    .fold(T::zero(), |a, b| a + b);
                Outcome {
                    eigenvalue: level.eigenvalue,
                    probability: p.max(T::zero()),
                }
            })
            .collect();
        Ok(OutcomeDistribution { entries })
    }
}

pub fn outcome_distribution<T: Real>(
    state: &QuantumState<T>,
    op: &OperatorMatrix<T>,
) -> Result<OutcomeDistribution<T>> {
    check_dims(op.dim(), state.dim())?;
    Spectrum::new(op).distribution(state)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum EntropyBase {
    #[default]
    Natural,
    Bits,
}

impl EntropyBase {
    pub fn ln_base<T: Real>(self) -> T {
        match self {
            EntropyBase::Natural => T::one(),
            EntropyBase::Bits => T::LN_2(),
        }
    }

    /// `log_base(x)`.
    pub fn log<T: Real>(self, x: T) -> T {
        x.ln() / self.ln_base::<T>()
    }
}

pub fn shannon_entropy<T: Real>(
    state: &QuantumState<T>,
    op: &OperatorMatrix<T>,
    base: EntropyBase,
) -> Result<T> {
    Ok(outcome_distribution(state, op)?.entropy(base))
}
