//! The relation catalog: left side, right side, gap and saturation of each
//! uncertainty relation among `Sx`, `Sy`, `Sz`, plus the naive bounds that
//! follow from chaining the pairwise relations.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::{expectation, std_dev, variance, EntropyBase, Spectrum};
use crate::scalar::{int, tol, Real};
use crate::spin_ops::{
    build_spin_operators, commutator, Axis, OperatorMatrix, SpinOperatorSet, SpinQuantumNumber,
};
use crate::states::{BlochVector, QuantumState};

pub const DEFAULT_SATURATION_TOL: f64 = 1e-9;

/// The triple constant `τ = 2/√3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TripleConstant<T> {
    pub tau: T,
}

impl<T: Real> TripleConstant<T> {
    pub fn new() -> Self {
        Self { tau: tau() }
    }
}

impl<T: Real> Default for TripleConstant<T> {
    fn default() -> Self {
        Self::new()
    }
}

pub fn tau<T: Real>() -> T {
    int::<T>(2) / int::<T>(3).sqrt()
}

macro_rules! relation_ids {
    ($($variant:ident => $name:literal),* $(,)?) => {
        /// Stable identifiers; the serialized names never change.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum RelationId {
            $(#[serde(rename = $name)] $variant,)*
        }

        impl RelationId {
            pub const ALL: &'static [RelationId] = &[$(RelationId::$variant),*];

            pub fn name(self) -> &'static str {
                match self {
                    $(RelationId::$variant => $name,)*
                }
            }
        }
    };
}

relation_ids! {
    RobertsonGeneric => "R_ROBERTSON_GENERIC",
    PairProductX => "R2_PAIR_PRODUCT_X",
    PairProductY => "R2_PAIR_PRODUCT_Y",
    PairProductZ => "R2_PAIR_PRODUCT_Z",
    TripleProduct => "R3_TRIPLE_PRODUCT",
    PairSumX => "R4_PAIR_SUM_X",
    PairSumY => "R4_PAIR_SUM_Y",
    PairSumZ => "R4_PAIR_SUM_Z",
    TripleSum => "R5_TRIPLE_SUM",
    SumHalf => "R6_SUM_HALF",
    SumGeneralSpin => "R7_SUM_GENERAL_S",
    VarianceOfSums => "R8_VARIANCE_OF_SUMS",
    EntropicPairXY => "R9_ENTROPIC_PAIR_XY",
    EntropicPairYZ => "R9_ENTROPIC_PAIR_YZ",
    EntropicPairZX => "R9_ENTROPIC_PAIR_ZX",
    EntropicTriple => "R10_ENTROPIC_TRIPLE",
    ConjectureTripleProduct => "R11_CONJECTURE_TRIPLE_PRODUCT",
    NaiveProduct => "NAIVE_PRO2",
    NaiveSum => "NAIVE_SUM2",
}

/// Where a relation is known (or conjectured) to hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Applicability {
    SpinHalf,
    AllSpins,
    /// Requires an explicit operator pair.
    OperatorPair,
}

impl RelationId {
    /// The pairwise relations are labelled by the component whose mean
    /// appears on the right: `X` is `ΔSy ΔSz ≥ |⟨Sx⟩|/2`.
    pub fn pair_axes(self) -> Option<(Axis, Axis, Axis)> {
        use RelationId::*;
        match self {
            PairProductX | PairSumX => Some((Axis::Y, Axis::Z, Axis::X)),
            PairProductY | PairSumY => Some((Axis::Z, Axis::X, Axis::Y)),
            PairProductZ | PairSumZ => Some((Axis::X, Axis::Y, Axis::Z)),
            EntropicPairXY => Some((Axis::X, Axis::Y, Axis::Z)),
            EntropicPairYZ => Some((Axis::Y, Axis::Z, Axis::X)),
            EntropicPairZX => Some((Axis::Z, Axis::X, Axis::Y)),
            _ => None,
        }
    }

    pub fn applicability(self) -> Applicability {
        use RelationId::*;
        match self {
            RobertsonGeneric => Applicability::OperatorPair,
            TripleProduct | SumHalf | VarianceOfSums | EntropicPairXY | EntropicPairYZ
            | EntropicPairZX | EntropicTriple => Applicability::SpinHalf,
            PairProductX
            | PairProductY
            | PairProductZ
            | PairSumX
            | PairSumY
            | PairSumZ
            | TripleSum
            | SumGeneralSpin
            | ConjectureTripleProduct
            | NaiveProduct
            | NaiveSum => Applicability::AllSpins,
        }
    }

    pub fn check_spin(self, s: SpinQuantumNumber) -> Result<()> {
        match self.applicability() {
            Applicability::OperatorPair => Err(Error::NeedsOperators(self.name())),
            Applicability::SpinHalf if !s.is_half() => Err(Error::SpinRestricted {
                relation: self.name(),
                twice_s: s.twice_s(),
            }),
            _ => Ok(()),
        }
    }

    /// The relations evaluable from a state alone at spin `s`.
    pub fn state_relations(s: SpinQuantumNumber) -> Vec<RelationId> {
        Self::ALL
            .iter()
            .copied()
            .filter(|id| id.check_spin(s).is_ok())
            .collect()
    }

    pub fn description(self) -> &'static str {
        use RelationId::*;
        match self {
            RobertsonGeneric => "ΔA ΔB ≥ |⟨[A,B]⟩|/2 for an explicit observable pair",
            PairProductX => "ΔSy ΔSz ≥ |⟨Sx⟩|/2",
            PairProductY => "ΔSz ΔSx ≥ |⟨Sy⟩|/2",
            PairProductZ => "ΔSx ΔSy ≥ |⟨Sz⟩|/2",
            TripleProduct => "ΔSx ΔSy ΔSz ≥ |τ³⟨Sx⟩⟨Sy⟩⟨Sz⟩/8|^(1/2)",
            PairSumX => "(ΔSy)² + (ΔSz)² ≥ |⟨Sx⟩|",
            PairSumY => "(ΔSz)² + (ΔSx)² ≥ |⟨Sy⟩|",
            PairSumZ => "(ΔSx)² + (ΔSy)² ≥ |⟨Sz⟩|",
            TripleSum => "(ΔSx)² + (ΔSy)² + (ΔSz)² ≥ τ(|⟨Sx⟩| + |⟨Sy⟩| + |⟨Sz⟩|)/2",
            SumHalf => "(ΔSx)² + (ΔSy)² + (ΔSz)² ≥ 1/2 = 3τ²/8",
            SumGeneralSpin => "(ΔSx)² + (ΔSy)² + (ΔSz)² ≥ s",
            VarianceOfSums => "Σ(ΔSi)² ≥ (2/5)·Σ[Δ(Si + Sj)]² over the three pairs",
            EntropicPairXY => "H(Sx) + H(Sy) ≥ log 2",
            EntropicPairYZ => "H(Sy) + H(Sz) ≥ log 2",
            EntropicPairZX => "H(Sz) + H(Sx) ≥ log 2",
            EntropicTriple => "H(Sx) + H(Sy) + H(Sz) ≥ log 4 = (3τ²/2) log 2",
            ConjectureTripleProduct => {
                "conjecture: ΔSx ΔSy ΔSz ≥ |τ³⟨Sx⟩⟨Sy⟩⟨Sz⟩/8|^(1/2) for every s"
            }
            NaiveProduct => "ΔSx ΔSy ΔSz ≥ |⟨Sx⟩⟨Sy⟩⟨Sz⟩/8|^(1/2), chained pairwise products",
            NaiveSum => {
                "(ΔSx)² + (ΔSy)² + (ΔSz)² ≥ (|⟨Sx⟩| + |⟨Sy⟩| + |⟨Sz⟩|)/2, chained pairwise sums"
            }
        }
    }

    pub fn applicability_text(self) -> &'static str {
        match self {
            RelationId::TripleProduct => "s = 1/2 (conjectured all s via R11)",
            RelationId::RobertsonGeneric => "any observable pair",
            RelationId::ConjectureTripleProduct => "all s (conjecture)",
            _ => match self.applicability() {
                Applicability::SpinHalf => "s = 1/2",
                _ => "all s",
            },
        }
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RelationId {
    type Err = Error;

    /// Accepts the full name, its leading token (`R5`) or any prefix that
    /// picks out one relation (`R2_PAIR_PRODUCT_X`, `NAIVE_S`); case-insensitive.
    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().to_ascii_uppercase();
        if let Some(id) = Self::ALL.iter().find(|id| id.name() == wanted) {
            return Ok(*id);
        }
        let hits: Vec<RelationId> = Self::ALL
            .iter()
            .copied()
            .filter(|id| id.name().starts_with(&wanted))
            .collect();
        match hits.as_slice() {
            [] => Err(Error::UnknownRelation(s.to_owned())),
            [id] => Ok(*id),
            many => Err(Error::AmbiguousRelation {
                given: s.to_owned(),
                candidates: many
                    .iter()
                    .map(|id| id.name())
                    .collect::<Vec<_>>()
                    .join(", "),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationReport<T> {
    pub relation: RelationId,
    pub lhs: T,
    pub rhs: T,
    /// `lhs − rhs`
    pub gap: T,
    pub saturated: bool,
    pub tolerance: T,
}

impl<T: Real> RelationReport<T> {
    pub fn new(relation: RelationId, lhs: T, rhs: T, tolerance: T) -> Self {
        let gap = lhs - rhs;
        Self {
            relation,
            lhs,
            rhs,
            gap,
            saturated: gap.abs() <= tolerance,
            tolerance,
        }
    }

    pub fn violated(&self) -> bool {
        self.gap < -self.tolerance
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalOptions {
    pub tolerance: f64,
    pub base: EntropyBase,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_SATURATION_TOL,
            base: EntropyBase::Natural,
        }
    }
}

/// `ΔA ΔB ≥ |⟨[A,B]⟩|/2`.
pub fn evaluate_robertson<T: Real>(
    state: &QuantumState<T>,
    a: &OperatorMatrix<T>,
    b: &OperatorMatrix<T>,
) -> Result<RelationReport<T>> {
    evaluate_robertson_with(state, a, b, DEFAULT_SATURATION_TOL)
}

pub fn evaluate_robertson_with<T: Real>(
    state: &QuantumState<T>,
    a: &OperatorMatrix<T>,
    b: &OperatorMatrix<T>,
    tolerance: f64,
) -> Result<RelationReport<T>> {
    let lhs = std_dev(state, a)? * std_dev(state, b)?;
    let comm = commutator(a, b)?;
    let rhs = state.rho().trace_product(&comm).norm() * T::lit(0.5);
    Ok(RelationReport::new(
        RelationId::RobertsonGeneric,
        lhs,
        rhs,
        T::lit(tolerance),
    ))
}

/// First and second moments of the three components in one state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinMoments<T> {
    pub mean: [T; 3],
    pub variance: [T; 3],
}

impl<T: Real> SpinMoments<T> {
    pub fn std_dev(&self, axis: Axis) -> T {
        self.variance[axis.index()].sqrt()
    }

    pub fn abs_mean(&self, axis: Axis) -> T {
        self.mean[axis.index()].abs()
    }

    pub fn variance_sum(&self) -> T {
        self.variance[0] + self.variance[1] + self.variance[2]
    }

    pub fn abs_mean_sum(&self) -> T {
        self.mean[0].abs() + self.mean[1].abs() + self.mean[2].abs()
    }

    pub fn std_dev_product(&self) -> T {
        (self.variance[0] * self.variance[1] * self.variance[2]).sqrt()
    }

    /// `|⟨Sx⟩⟨Sy⟩⟨Sz⟩|`
    pub fn abs_mean_product(&self) -> T {
        (self.mean[0] * self.mean[1] * self.mean[2]).abs()
    }
}

/// Precomputed operators for evaluating relations at one spin.
#[derive(Clone, Debug)]
pub struct RelationContext<T> {
    ops: SpinOperatorSet<T>,
    /// `Sx+Sy`, `Sy+Sz`, `Sz+Sx`
    pair_sums: [OperatorMatrix<T>; 3],
    spectra: [Spectrum<T>; 3],
}

impl<T: Real> RelationContext<T> {
    pub fn new(s: SpinQuantumNumber) -> Result<Self> {
        let ops = build_spin_operators(s)?;
        let pair_sums = [
            ops.sx.sum(&ops.sy)?,
            ops.sy.sum(&ops.sz)?,
            ops.sz.sum(&ops.sx)?,
        ];
        let spectra = [
            Spectrum::new(&ops.sx),
            Spectrum::new(&ops.sy),
            Spectrum::new(&ops.sz),
        ];
        Ok(Self {
            ops,
            pair_sums,
            spectra,
        })
    }

    pub fn spin(&self) -> SpinQuantumNumber {
        self.ops.s
    }

    pub fn ops(&self) -> &SpinOperatorSet<T> {
        &self.ops
    }

    pub fn moments(&self, state: &QuantumState<T>) -> Result<SpinMoments<T>> {
        state.check_dim(self.ops.dim())?;
        let mut mean = [T::zero(); 3];
        let mut var = [T::zero(); 3];
        for axis in Axis::ALL {
            let i = axis.index();
            mean[i] = expectation(state, self.ops.component(axis))?;
            var[i] =
                crate::moments::central_second_moment(state, self.ops.component(axis), mean[i]);
        }
        Ok(SpinMoments {
            mean,
            variance: var,
        })
    }

    pub fn entropy(&self, state: &QuantumState<T>, axis: Axis, base: EntropyBase) -> Result<T> {
        Ok(self.spectra[axis.index()]
            .distribution(state)?
            .entropy(base))
    }

    pub fn evaluate(
        &self,
        relation: RelationId,
        state: &QuantumState<T>,
    ) -> Result<RelationReport<T>> {
        self.evaluate_with(relation, state, &EvalOptions::default())
    }

    pub fn evaluate_with(
        &self,
        relation: RelationId,
        state: &QuantumState<T>,
        opts: &EvalOptions,
    ) -> Result<RelationReport<T>> {
        relation.check_spin(self.spin())?;
        let m = self.moments(state)?;
        self.evaluate_moments(relation, &m, state, opts)
    }

    /// Evaluates with moments computed once by the caller.
    pub fn evaluate_moments(
        &self,
        relation: RelationId,
        m: &SpinMoments<T>,
        state: &QuantumState<T>,
        opts: &EvalOptions,
    ) -> Result<RelationReport<T>> {
        use RelationId::*;
        relation.check_spin(self.spin())?;
        if let Some((lhs, rhs)) = moment_bound(relation, m, self.spin().value()) {
            return Ok(RelationReport::new(
                relation,
                lhs,
                rhs,
                T::lit(opts.tolerance),
            ));
        }
        let (lhs, rhs) = match relation {
            RobertsonGeneric => return Err(Error::NeedsOperators(relation.name())),
            VarianceOfSums => {
                let mut pair_var = T::zero();
                for op in &self.pair_sums {
                    pair_var += variance(state, op)?;
                }
                (m.variance_sum(), T::lit(0.4) * pair_var)
            }
            EntropicPairXY | EntropicPairYZ | EntropicPairZX => {
                let (a, b, _) = relation.pair_axes().expect("pair relation");
                let lhs = self.entropy(state, a, opts.base)? + self.entropy(state, b, opts.base)?;
                (lhs, opts.base.log(int::<T>(2)))
            }
            EntropicTriple => {
                let mut lhs = T::zero();
                for axis in Axis::ALL {
                    lhs += self.entropy(state, axis, opts.base)?;
                }
                (lhs, opts.base.log(int::<T>(4)))
            }
            _ => unreachable!("moment-only relations handled above"),
        };
        Ok(RelationReport::new(
            relation,
            lhs,
            rhs,
            T::lit(opts.tolerance),
        ))
    }
}

/// `(lhs, rhs)` for the relations that depend only on the component
/// means and variances; `None` for the others.
pub fn moment_bound<T: Real>(relation: RelationId, m: &SpinMoments<T>, spin: T) -> Option<(T, T)> {
    use RelationId::*;
    let half = T::lit(0.5);
    let eighth = T::lit(0.125);
    let tau = tau::<T>();
    let product = m.mean[0] * m.mean[1] * m.mean[2];
    Some(match relation {
        PairProductX | PairProductY | PairProductZ => {
            let (a, b, c) = relation.pair_axes()?;
            (m.std_dev(a) * m.std_dev(b), half * m.abs_mean(c))
        }
        PairSumX | PairSumY | PairSumZ => {
            let (a, b, c) = relation.pair_axes()?;
            (m.variance[a.index()] + m.variance[b.index()], m.abs_mean(c))
        }
        // Absolute value outside the product, as written.
        TripleProduct | ConjectureTripleProduct => (
            m.std_dev_product(),
            (tau * tau * tau * eighth * product).abs().sqrt(),
        ),
        NaiveProduct => (m.std_dev_product(), (eighth * product).abs().sqrt()),
        TripleSum => (m.variance_sum(), tau * half * m.abs_mean_sum()),
        NaiveSum => (m.variance_sum(), half * m.abs_mean_sum()),
        SumHalf => (m.variance_sum(), half),
        SumGeneralSpin => (m.variance_sum(), spin),
        _ => return None,
    })
}

/// Evaluates one relation; builds the operator context on each call.
pub fn evaluate<T: Real>(
    relation: RelationId,
    state: &QuantumState<T>,
    s: SpinQuantumNumber,
) -> Result<RelationReport<T>> {
    relation.check_spin(s)?;
    RelationContext::new(s)?.evaluate(relation, state)
}

/// The analytic equality conditions for spin 1/2, on the Bloch vector.
pub fn equality_condition<T: Real>(relation: RelationId, r: BlochVector<T>) -> Result<bool> {
    equality_condition_with(relation, r, 1e-9)
}

pub fn equality_condition_with<T: Real>(
    relation: RelationId,
    r: BlochVector<T>,
    tolerance: f64,
) -> Result<bool> {
    let eps = tol::<T>(tolerance);
    let close = |a: T, b: T| (a - b).abs() <= eps;
    let third = T::one() / int::<T>(3).sqrt();
    let diagonal = || [r.rx, r.ry, r.rz].iter().all(|c| close(c.abs(), third));
    let pure = || close(r.norm(), T::one());
    Ok(match relation {
        RelationId::TripleProduct => {
            let corner =
                (r.rx.abs() - T::one()) * (r.ry.abs() - T::one()) * (r.rz.abs() - T::one());
            diagonal() || close(corner, T::zero())
        }
        RelationId::TripleSum => diagonal(),
        RelationId::SumHalf => pure(),
        RelationId::VarianceOfSums => pure() && close(r.rx + r.ry + r.rz, T::zero()),
        RelationId::EntropicTriple => {
            let zeros = [r.rx, r.ry, r.rz]
                .iter()
                .filter(|c| close(**c, T::zero()))
                .count();
            pure() && zeros >= 2
        }
        other => return Err(Error::NoEqualityCondition(other.name())),
    })
}

/// Sufficient conditions under which the higher-spin conjecture is
/// expected to saturate.
///
/// The degenerate branch is read symmetrically as
/// `(|⟨Sx⟩| − s)(|⟨Sy⟩| − s)(|⟨Sz⟩| − s) = 0`; the printed form repeats the
/// `Sy` factor.
pub fn conjecture_equality_condition<T: Real>(
    ctx: &RelationContext<T>,
    state: &QuantumState<T>,
    tolerance: f64,
) -> Result<bool> {
    let eps = tol::<T>(tolerance);
    let s: T = ctx.spin().value();
    let m = ctx.moments(state)?;
    let target_second = ctx.spin().casimir::<T>() / int(3);
    let target_mean = s / int::<T>(3).sqrt();
    let balanced = Axis::ALL.iter().all(|&a| {
        let i = a.index();
        let second = m.variance[i] + m.mean[i] * m.mean[i];
        (second - target_second).abs() <= eps && (m.mean[i].abs() - target_mean).abs() <= eps
    });
    let corner = (m.abs_mean(Axis::X) - s) * (m.abs_mean(Axis::Y) - s) * (m.abs_mean(Axis::Z) - s);
    Ok(balanced || corner.abs() <= eps)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub id: RelationId,
    pub description: &'static str,
    pub applicability: &'static str,
}

pub fn catalog() -> Vec<CatalogEntry> {
    RelationId::ALL
        .iter()
        .map(|&id| CatalogEntry {
            id,
            description: id.description(),
            applicability: id.applicability_text(),
        })
        .collect()
}
