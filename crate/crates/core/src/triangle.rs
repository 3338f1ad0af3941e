//! The equilateral-triangle analog of the pairwise and triple relations.
//!
//! Vertices sit at `A = (0,0)`, `B = (L,0)`, `C = (L/2, L√3/2)`. Distances
//! `|PA|, |PB|, |PC|` stand in for `ΔSx, ΔSy, ΔSz`, and four times the areas
//! `|△PBC|, |△PCA|, |△PAB|` stand in for `|⟨Sx⟩|, |⟨Sy⟩|, |⟨Sz⟩|`.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::relations::{moment_bound, RelationId, RelationReport, SpinMoments};
use crate::rng;
use crate::scalar::{int, tol, Real};

/// The relations with a geometric analog, in report order.
pub const ANALOG_RELATIONS: [RelationId; 8] = [
    RelationId::PairProductX,
    RelationId::PairProductY,
    RelationId::PairProductZ,
    RelationId::TripleProduct,
    RelationId::PairSumX,
    RelationId::PairSumY,
    RelationId::PairSumZ,
    RelationId::TripleSum,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalogKind {
    PairProduct,
    TripleProduct,
    PairSum,
    TripleSum,
}

impl AnalogKind {
    pub const ALL: [AnalogKind; 4] = [
        AnalogKind::PairProduct,
        AnalogKind::TripleProduct,
        AnalogKind::PairSum,
        AnalogKind::TripleSum,
    ];

    pub fn of(relation: RelationId) -> Option<Self> {
        use RelationId::*;
        match relation {
            PairProductX | PairProductY | PairProductZ => Some(AnalogKind::PairProduct),
            TripleProduct => Some(AnalogKind::TripleProduct),
            PairSumX | PairSumY | PairSumZ => Some(AnalogKind::PairSum),
            TripleSum => Some(AnalogKind::TripleSum),
            _ => None,
        }
    }
}

/// A point of the closed triangle in barycentric coordinates `(u, v, w)`
/// with respect to `(A, B, C)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrianglePoint<T> {
    pub side: T,
    pub barycentric: [T; 3],
}

impl<T: Real> TrianglePoint<T> {
    pub fn new(side: T, barycentric: [T; 3]) -> Result<Self> {
        let eps = tol::<T>(1e-12);
        if !(side > T::zero()) || !side.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "triangle side must be positive, got {side}"
            )));
        }
        let sum = barycentric[0] + barycentric[1] + barycentric[2];
        if barycentric.iter().any(|&c| c < -eps) || (sum - T::one()).abs() > eps {
            return Err(Error::InvalidArgument(format!(
                "barycentric coordinates {barycentric:?} do not describe a point of the triangle"
            )));
        }
        Ok(Self { side, barycentric })
    }

    pub fn centroid(side: T) -> Self {
        let third = T::one() / int(3);
        Self {
            side,
            barycentric: [third; 3],
        }
    }

    /// Normalized triple of independent uniforms.
    pub fn sample(side: T, rng: &mut rng::StreamRng) -> Self {
        let raw: [f64; 3] = [rng.random(), rng.random(), rng.random()];
        let total = raw[0] + raw[1] + raw[2];
        let bary = raw.map(|x| T::lit(x / total));
        Self {
            side,
            barycentric: bary,
        }
    }

    pub fn vertices(&self) -> [[T; 2]; 3] {
        let l = self.side;
        let h = l * int::<T>(3).sqrt() / int(2);
        [[T::zero(), T::zero()], [l, T::zero()], [l / int(2), h]]
    }

    pub fn position(&self) -> [T; 2] {
        let [a, b, c] = self.vertices();
        let [u, v, w] = self.barycentric;
        [
            u * a[0] + v * b[0] + w * c[0],
            u * a[1] + v * b[1] + w * c[1],
        ]
    }
}

fn distance<T: Real>(p: [T; 2], q: [T; 2]) -> T {
    (p[0] - q[0]).hypot(p[1] - q[1])
}

fn area<T: Real>(p: [T; 2], q: [T; 2], r: [T; 2]) -> T {
    ((q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1])).abs() / int(2)
}

/// `(|PA|, |PB|, |PC|)`
pub fn vertex_distances<T: Real>(p: &TrianglePoint<T>) -> (T, T, T) {
    let [a, b, c] = p.vertices();
    let pos = p.position();
    (distance(pos, a), distance(pos, b), distance(pos, c))
}

/// `(|△PAB|, |△PBC|, |△PCA|)`
pub fn subtriangle_areas<T: Real>(p: &TrianglePoint<T>) -> (T, T, T) {
    let [a, b, c] = p.vertices();
    let pos = p.position();
    (area(pos, a, b), area(pos, b, c), area(pos, c, a))
}

/// The geometric stand-ins for the spin moments.
pub fn analog_moments<T: Real>(p: &TrianglePoint<T>) -> SpinMoments<T> {
    let (pa, pb, pc) = vertex_distances(p);
    let (pab, pbc, pca) = subtriangle_areas(p);
    let four = int::<T>(4);
    SpinMoments {
        mean: [four * pbc, four * pca, four * pab],
        variance: [pa * pa, pb * pb, pc * pc],
    }
}

pub fn check_analogs<T: Real>(p: &TrianglePoint<T>) -> Vec<RelationReport<T>> {
    check_analogs_with(p, 1e-12)
}

pub fn check_analogs_with<T: Real>(p: &TrianglePoint<T>, tolerance: f64) -> Vec<RelationReport<T>> {
    let m = analog_moments(p);
    ANALOG_RELATIONS
        .iter()
        .map(|&id| {
            let (lhs, rhs) =
                moment_bound(id, &m, T::zero()).expect("analog relations are moment-only");
            RelationReport::new(id, lhs, rhs, tol::<T>(tolerance))
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalogMinimum {
    pub kind: AnalogKind,
    pub min_gap: f64,
    pub relation: RelationId,
    pub argmin: TrianglePoint<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TriangleSummary {
    pub samples: u64,
    pub seed: u64,
    pub side: f64,
    pub minima: Vec<AnalogMinimum>,
    pub violations: u64,
}

/// Samples `samples` points and records the smallest gap of each analog kind.
pub fn scan(samples: u64, seed: u64, side: f64) -> Result<TriangleSummary> {
    if !(side > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "triangle side must be positive, got {side}"
        )));
    }
    let mut rng = rng::stream(seed, 0);
    let mut minima: Vec<AnalogMinimum> = AnalogKind::ALL
        .iter()
        .map(|&kind| AnalogMinimum {
            kind,
            min_gap: f64::INFINITY,
            relation: RelationId::TripleSum,
            argmin: TrianglePoint::centroid(side),
        })
        .collect();
    let mut violations = 0;
    for _ in 0..samples {
        let p = TrianglePoint::sample(side, &mut rng);
        for report in check_analogs(&p) {
            if report.violated() {
                violations += 1;
            }
            let kind = AnalogKind::of(report.relation).expect("analog relation");
            let slot = &mut minima[AnalogKind::ALL
                .iter()
                .position(|k| *k == kind)
                .expect("listed")];
            if report.gap < slot.min_gap {
                slot.min_gap = report.gap;
                slot.relation = report.relation;
                slot.argmin = p;
            }
        }
    }
    Ok(TriangleSummary {
        samples,
        seed,
        side,
        minima,
        violations,
    })
}
