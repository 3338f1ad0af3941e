//! Spin-s angular-momentum matrices in the descending-m basis.

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::{int, tol, Real};

/// Spin quantum number stored as `2s`, so half-integers stay exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpinQuantumNumber {
    twice_s: u32,
}

impl SpinQuantumNumber {
    pub const HALF: Self = Self { twice_s: 1 };
    pub const ONE: Self = Self { twice_s: 2 };

    pub fn from_twice(twice_s: u32) -> Self {
        Self { twice_s }
    }

    pub fn twice_s(self) -> u32 {
        self.twice_s
    }

    /// Hilbert-space dimension `2s + 1`.
    pub fn dim(self) -> usize {
        self.twice_s as usize + 1
    }

    pub fn value<T: Real>(self) -> T {
        int::<T>(self.twice_s as i64) / int(2)
    }

    pub fn is_half(self) -> bool {
        self.twice_s == 1
    }

    /// `s(s+1)`, the Casimir eigenvalue.
    pub fn casimir<T: Real>(self) -> T {
        let s: T = self.value();
        s * (s + T::one())
    }

    /// Magnetic quantum numbers in basis order `s, s-1, …, -s`.
    pub fn magnetic_numbers<T: Real>(self) -> impl Iterator<Item = T> {
        let twice = self.twice_s as i64;
        (0..=twice).map(move |k| int::<T>(twice - 2 * k) / int(2))
    }
}

impl fmt::Display for SpinQuantumNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice_s.is_multiple_of(2) {
            write!(f, "{}", self.twice_s / 2)
        } else {
            write!(f, "{}/2", self.twice_s)
        }
    }
}

/// A Hermitian matrix standing for an observable.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix<T> {
    matrix: CMatrix<T>,
}

impl<T: Real> OperatorMatrix<T> {
    /// Wraps `matrix` after checking Hermiticity at 1e-12.
    pub fn new(matrix: CMatrix<T>) -> Result<Self> {
        let residual = matrix.hermiticity_residual();
        if residual > tol::<T>(1e-12) {
            return Err(Error::NotHermitian {
                residual: residual.to_f64_lossy(),
            });
        }
        Ok(Self { matrix })
    }

    pub(crate) fn new_unchecked(matrix: CMatrix<T>) -> Self {
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    /// `self²`, Hermitian by construction.
    pub fn square(&self) -> Self {
        Self::new_unchecked(&self.matrix * &self.matrix)
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self::new_unchecked(&self.matrix + &other.matrix))
    }

    /// Real linear combination `Σ cᵢ Oᵢ`.
    pub fn combination(terms: &[(T, &Self)]) -> Result<Self> {
        let dim = terms.first().map(|(_, o)| o.dim()).unwrap_or(0);
        let mut acc = CMatrix::zeros(dim);
        for (c, o) in terms {
            check_dims(dim, o.dim())?;
            acc = &acc + &o.matrix.scale_real(*c);
        }
        Ok(Self::new_unchecked(acc))
    }
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// `AB − BA`. The result is anti-Hermitian, so it is returned as a raw matrix.
pub fn commutator<T: Real>(a: &OperatorMatrix<T>, b: &OperatorMatrix<T>) -> Result<CMatrix<T>> {
    check_dims(a.dim(), b.dim())?;
    Ok(&(&a.matrix * &b.matrix) - &(&b.matrix * &a.matrix))
}

/// The three spin components for one spin quantum number.
#[derive(Clone, Debug)]
pub struct SpinOperatorSet<T> {
    pub s: SpinQuantumNumber,
    pub sx: OperatorMatrix<T>,
    pub sy: OperatorMatrix<T>,
    pub sz: OperatorMatrix<T>,
}

/// Max-entry residuals of the defining identities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IdentityResiduals {
    /// `[Sx,Sy] − iSz`
    pub comm_xy: f64,
    /// `[Sy,Sz] − iSx`
    pub comm_yz: f64,
    /// `[Sz,Sx] − iSy`
    pub comm_zx: f64,
    /// `Sx² + Sy² + Sz² − s(s+1)·𝟙`
    pub casimir: f64,
    pub hermiticity: f64,
}

impl IdentityResiduals {
    pub fn max(&self) -> f64 {
        [
            self.comm_xy,
            self.comm_yz,
            self.comm_zx,
            self.casimir,
            self.hermiticity,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Spin component selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    #[serde(rename = "SX")]
    X,
    #[serde(rename = "SY")]
    Y,
    #[serde(rename = "SZ")]
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "SX",
            Axis::Y => "SY",
            Axis::Z => "SZ",
        }
    }
}

/// Ladder construction: `S±|s,m⟩ = √(s(s+1) − m(m±1)) |s,m±1⟩`.
pub fn build_spin_operators<T: Real>(s: SpinQuantumNumber) -> Result<SpinOperatorSet<T>> {
    if s.twice_s() == 0 {
        return Err(Error::TrivialSpin);
    }
    let dim = s.dim();
    let casimir = s.casimir::<T>();
    let ms: Vec<T> = s.magnetic_numbers().collect();

    // Basis index k has m = ms[k]; raising maps k+1 -> k.
    let mut raise = CMatrix::<T>::zeros(dim);
    for k in 0..dim - 1 {
        let m = ms[k + 1];
        let amp = (casimir - m * (m + T::one())).max(T::zero()).sqrt();
        raise[(k, k + 1)] = Complex::new(amp, T::zero());
    }
    let lower = raise.adjoint();

    let half = T::lit(0.5);
    let sx = (&raise + &lower).scale_real(half);
    // (S₊ − S₋)/(2i) = −i(S₊ − S₋)/2
    let sy = (&raise - &lower).scale(Complex::new(T::zero(), -half));
    let sz = CMatrix::diagonal(&ms);

    Ok(SpinOperatorSet {
        s,
        sx: OperatorMatrix::new_unchecked(sx),
        sy: OperatorMatrix::new_unchecked(sy),
        sz: OperatorMatrix::new_unchecked(sz),
    })
}

impl<T: Real> SpinOperatorSet<T> {
    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    pub fn component(&self, axis: Axis) -> &OperatorMatrix<T> {
        match axis {
            Axis::X => &self.sx,
            Axis::Y => &self.sy,
            Axis::Z => &self.sz,
        }
    }

    /// `n·S` for a real direction `n` (not normalized).
    pub fn along(&self, n: [T; 3]) -> OperatorMatrix<T> {
        OperatorMatrix::combination(&[(n[0], &self.sx), (n[1], &self.sy), (n[2], &self.sz)])
            .expect("components share a dimension")
    }

    pub fn residuals(&self) -> IdentityResiduals {
        let i = Complex::new(T::zero(), T::one());
        let resid = |a: &OperatorMatrix<T>, b: &OperatorMatrix<T>, c: &OperatorMatrix<T>| {
            let comm = commutator(a, b).expect("components share a dimension");
            comm.max_abs_diff(&c.matrix.scale(i)).to_f64_lossy()
        };
        let total =
            &(&self.sx.square().matrix + &self.sy.square().matrix) + &self.sz.square().matrix;
        let casimir = total
            .max_abs_diff(&CMatrix::identity(self.dim()).scale_real(self.s.casimir()))
            .to_f64_lossy();
        let hermiticity = [&self.sx, &self.sy, &self.sz]
            .iter()
            .map(|o| o.matrix.hermiticity_residual().to_f64_lossy())
            .fold(0.0, f64::max);
        IdentityResiduals {
            comm_xy: resid(&self.sx, &self.sy, &self.sz),
            comm_yz: resid(&self.sy, &self.sz, &self.sx),
            comm_zx: resid(&self.sz, &self.sx, &self.sy),
            casimir,
            hermiticity,
        }
    }
}
