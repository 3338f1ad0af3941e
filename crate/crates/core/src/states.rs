//! Qubit Bloch vectors, density matrices, the two experimental state
//! families and random-state ensembles.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::rng::{self, StreamRng};
use crate::scalar::{int, tol, Real};
use crate::spin_ops::{SpinOperatorSet, SpinQuantumNumber};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochVector<T> {
    pub rx: T,
    pub ry: T,
    pub rz: T,
}

impl<T: Real> BlochVector<T> {
    pub fn new(rx: T, ry: T, rz: T) -> Self {
        Self { rx, ry, rz }
    }

    pub fn from_array([rx, ry, rz]: [T; 3]) -> Self {
        Self { rx, ry, rz }
    }

    pub fn to_array(self) -> [T; 3] {
        [self.rx, self.ry, self.rz]
    }

    pub fn norm(&self) -> T {
        (self.rx * self.rx + self.ry * self.ry + self.rz * self.rz).sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        (self.rx - other.rx)
            .abs()
            .max((self.ry - other.ry).abs())
            .max((self.rz - other.rz).abs())
    }
}

/// A density matrix: Hermitian, unit trace, positive semidefinite.
///
/// A factor `ρ = Σ c c†` is kept alongside the matrix so that central
/// moments of nearly pure states avoid cancellation.
#[derive(Clone, Debug)]
pub struct QuantumState<T> {
    rho: CMatrix<T>,
    factor: Vec<Vec<Complex<T>>>,
}

impl<T: PartialEq> PartialEq for QuantumState<T> {
    fn eq(&self, other: &Self) -> bool {
        self.rho == other.rho
    }
}

impl<T: Real> QuantumState<T> {
    /// Validates Hermiticity and trace at 1e-12 and eigenvalues at -1e-10.
    pub fn new(rho: CMatrix<T>) -> Result<Self> {
        if rho.dim() == 0 {
            return Err(Error::InvalidState("empty matrix".into()));
        }
        let herm = rho.hermiticity_residual();
        if herm > tol::<T>(1e-12) {
            return Err(Error::InvalidState(format!(
                "not Hermitian (residual {herm:e})"
            )));
        }
        let trace = rho.trace();
        if (trace - Complex::new(T::one(), T::zero())).norm() > tol::<T>(1e-12) {
            return Err(Error::InvalidState(format!("trace {trace} differs from 1")));
        }
        let min_eig = rho
            .hermitian_eigen()
            .values
            .last()
            .copied()
            .unwrap_or_default();
        if min_eig < -tol::<T>(1e-10) {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self::new_unchecked(rho))
    }

    pub(crate) fn new_unchecked(rho: CMatrix<T>) -> Self {
        let factor = rho.psd_factor(tol::<T>(1e-14));
        Self { rho, factor }
    }

    /// `psi` must already be normalized.
    pub(crate) fn from_unit(psi: Vec<Complex<T>>) -> Self {
        Self {
            rho: CMatrix::outer(&psi),
            factor: vec![psi],
        }
    }

    /// `|ψ⟩⟨ψ|` for `psi` normalized here.
    pub fn from_pure(psi: &[Complex<T>]) -> Result<Self> {
        let norm = psi
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt();
        if psi.is_empty() || !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::InvalidState(
                "state vector has zero or non-finite norm".into(),
            ));
        }
        Ok(Self::from_unit(
            psi.iter().map(|z| z.unscale(norm)).collect(),
        ))
    }

    /// The basis state with magnetic quantum number index `k` (0 is `m = s`).
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut psi = vec![Complex::new(T::zero(), T::zero()); dim];
        psi[k] = Complex::new(T::one(), T::zero());
        Self::from_unit(psi)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::new_unchecked(CMatrix::identity(dim).scale_real(T::one() / int(dim as i64)))
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    pub fn rho(&self) -> &CMatrix<T> {
        &self.rho
    }

    /// Columns `c` with `ρ = Σ c c†`, dropping pivots below 1e-14.
    pub fn factor(&self) -> &[Vec<Complex<T>>] {
        &self.factor
    }

    pub fn purity(&self) -> T {
        self.rho.trace_product(&self.rho).re
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        crate::spin_ops::check_dims(dim, self.dim())
    }

    pub fn to_file(&self) -> StateFile {
        StateFile {
            dim: self.dim(),
            entries: self
                .rho
                .entries()
                .iter()
                .map(|z| [z.re.to_f64_lossy(), z.im.to_f64_lossy()])
                .collect(),
        }
    }
}

impl<T: Real> Serialize for QuantumState<T> {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(serializer)
    }
}

impl<'de, T: Real> Deserialize<'de> for QuantumState<T> {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        StateFile::deserialize(deserializer)?
            .to_state()
            .map_err(serde::de::Error::custom)
    }
}

/// On-disk state encoding: `dim` plus row-major `[re, im]` entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn to_state<T: Real>(&self) -> Result<QuantumState<T>> {
        if self.entries.len() != self.dim * self.dim {
            return Err(Error::InvalidState(format!(
                "expected {} entries for dim {}, found {}",
                self.dim * self.dim,
                self.dim,
                self.entries.len()
            )));
        }
        let entries = self
            .entries
            .iter()
            .map(|[re, im]| Complex::new(T::lit(*re), T::lit(*im)))
            .collect();
        let rho = CMatrix::from_row_major(entries).expect("length checked");
        QuantumState::new(rho)
    }
}

/// `ρ = (𝟙 + r·σ)/2`.
pub fn density_from_bloch<T: Real>(r: BlochVector<T>) -> Result<QuantumState<T>> {
    let norm = r.norm();
    if !(norm <= T::one() + tol::<T>(1e-12)) {
        return Err(Error::OutsideBlochBall {
            norm: norm.to_f64_lossy(),
        });
    }
    let half = T::lit(0.5);
    let z = |re: T, im: T| Complex::new(re, im);
    let rho = CMatrix::from_row_major(vec![
        z(half * (T::one() + r.rz), T::zero()),
        z(half * r.rx, -half * r.ry),
        z(half * r.rx, half * r.ry),
        z(half * (T::one() - r.rz), T::zero()),
    ])
    .expect("2x2");
    Ok(QuantumState::new_unchecked(rho))
}

/// `rᵢ = 2 tr(ρ Sᵢ)` with the spin-1/2 components.
pub fn bloch_from_density<T: Real>(state: &QuantumState<T>) -> Result<BlochVector<T>> {
    if state.dim() != 2 {
        return Err(Error::NotQubit { dim: state.dim() });
    }
    let rho = state.rho();
    let two = int::<T>(2);
    Ok(BlochVector {
        rx: two * rho[(1, 0)].re,
        ry: two * rho[(1, 0)].im,
        rz: rho[(0, 0)].re - rho[(1, 1)].re,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StateFamily {
    /// `(√(2/3) cos φ, √(2/3) sin φ, 1/√3)`, fixed latitude.
    #[serde(rename = "R1_LATITUDE")]
    R1Latitude,
    /// `(sin θ/√2, sin θ/√2, cos θ)`, the meridian through (1,1,0).
    #[serde(rename = "R2_MERIDIAN")]
    R2Meridian,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFamilyPoint<T> {
    pub family: StateFamily,
    pub parameter: T,
    pub bloch: BlochVector<T>,
}

impl<T: Real> StateFamilyPoint<T> {
    pub fn state(&self) -> QuantumState<T> {
        density_from_bloch(self.bloch).expect("family points are unit vectors")
    }
}

impl StateFamily {
    pub fn point<T: Real>(self, parameter: T) -> StateFamilyPoint<T> {
        match self {
            StateFamily::R1Latitude => family_r1(parameter),
            StateFamily::R2Meridian => family_r2(parameter),
        }
    }
}

pub fn family_r1<T: Real>(phi: T) -> StateFamilyPoint<T> {
    let three = int::<T>(3);
    let planar = (int::<T>(2) / three).sqrt();
    let (sin, cos) = phi.sin_cos();
    StateFamilyPoint {
        family: StateFamily::R1Latitude,
        parameter: phi,
        bloch: BlochVector::new(planar * cos, planar * sin, T::one() / three.sqrt()),
    }
}

pub fn family_r2<T: Real>(theta: T) -> StateFamilyPoint<T> {
    let (sin, cos) = theta.sin_cos();
    let diag = sin * T::FRAC_1_SQRT_2();
    StateFamilyPoint {
        family: StateFamily::R2Meridian,
        parameter: theta,
        bloch: BlochVector::new(diag, diag, cos),
    }
}

fn complex_normal<T: Real>(rng: &mut StreamRng) -> Complex<T> {
    let re = rng::standard_normal(rng);
    let im = rng::standard_normal(rng);
    Complex::new(T::lit(re), T::lit(im))
}

/// Haar-random unit vector from normalized complex Gaussians.
pub fn haar_vector<T: Real>(dim: usize, rng: &mut StreamRng) -> Vec<Complex<T>> {
    loop {
        let v: Vec<Complex<T>> = (0..dim).map(|_| complex_normal(rng)).collect();
        let norm = v
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt();
        if norm > T::zero() {
            return v.into_iter().map(|z| z.unscale(norm)).collect();
        }
    }
}

pub fn random_pure<T: Real>(dim: usize, seed: u64) -> QuantumState<T> {
    random_pure_indexed(dim, seed, 0)
}

/// Member `index` of the pure-state sequence for `seed`.
pub fn random_pure_indexed<T: Real>(dim: usize, seed: u64, index: u64) -> QuantumState<T> {
    assert!(dim >= 2, "random_pure needs dim >= 2");
    let mut rng = rng::stream(seed, index);
    QuantumState::from_unit(haar_vector::<T>(dim, &mut rng))
}

pub fn random_mixed<T: Real>(dim: usize, seed: u64) -> QuantumState<T> {
    random_mixed_indexed(dim, seed, 0)
}

/// Hilbert–Schmidt ensemble member `GG†/tr(GG†)`.
pub fn random_mixed_indexed<T: Real>(dim: usize, seed: u64, index: u64) -> QuantumState<T> {
    assert!(dim >= 2, "random_mixed needs dim >= 2");
    let mut rng = rng::stream(seed, index);
    let g = CMatrix::from_fn(dim, |_, _| complex_normal::<T>(&mut rng));
    let gg = &g * &g.adjoint();
    let trace = gg.trace().re;
    let mut rho = gg.scale_real(T::one() / trace);
    // Exact Hermitian symmetry.
    for i in 0..dim {
        rho[(i, i)].im = T::zero();
        for j in (i + 1)..dim {
            rho[(j, i)] = rho[(i, j)].conj();
        }
    }
    QuantumState::new_unchecked(rho)
}

/// The maximal-weight eigenvector of `n·S`: the spin coherent state along `n`.
pub fn coherent_state<T: Real>(ops: &SpinOperatorSet<T>, n: [T; 3]) -> QuantumState<T> {
    let e = ops.along(n).matrix().hermitian_eigen();
    QuantumState::from_pure(&e.vectors[0]).expect("eigenvectors are unit length")
}

/// Basis state `|s, m⟩` selected by `m`, given as `2m`.
pub fn magnetic_state<T: Real>(s: SpinQuantumNumber, twice_m: i32) -> Result<QuantumState<T>> {
    let twice_s = s.twice_s() as i32;
    if twice_m.abs() > twice_s || (twice_s - twice_m) % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "m = {twice_m}/2 is not a level of spin {s}"
        )));
    }
    Ok(QuantumState::basis(
        s.dim(),
        ((twice_s - twice_m) / 2) as usize,
    ))
}
