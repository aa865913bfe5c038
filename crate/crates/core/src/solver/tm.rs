//! Transfer matrices in the lead plane-wave basis `e^{ikx}`, `e^{-ikx}`.
//!
//! The basis uses absolute coordinates, so free propagation is the identity
//! and a segment placed at `[a, a + d]` picks up `z -> z e^{-2ika}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{to_f64, PotentialSpec};
use crate::scalar::{cis, cx, Cx, Real};

/// `c(zeta) = cos(sqrt(zeta))` and `s(zeta) = sin(sqrt(zeta)) / sqrt(zeta)` for real `zeta`.
///
/// Both are entire in `zeta`; negative arguments give the hyperbolic branch.
pub fn cos_sinc<T: Real>(zeta: T) -> (T, T) {
    if zeta.abs() < T::lit(1e-6) {
        let z2 = zeta * zeta;
        let z3 = z2 * zeta;
        let c = T::one() - zeta / T::lit(2.0) + z2 / T::lit(24.0) - z3 / T::lit(720.0);
        let s = T::one() - zeta / T::lit(6.0) + z2 / T::lit(120.0) - z3 / T::lit(5040.0);
        (c, s)
    } else if zeta > T::zero() {
        let r = zeta.sqrt();
        (r.cos(), r.sin() / r)
    } else {
        let r = (-zeta).sqrt();
        (r.cosh(), r.sinh() / r)
    }
}

/// Real 2x2 map `(A, A')(x) -> (A, A')(x + len)` inside a constant region with `U = kappa2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagator<T> {
    pub m: [[T; 2]; 2],
}

impl<T: Real> Propagator<T> {
    pub fn identity() -> Self {
        Self {
            m: [[T::one(), T::zero()], [T::zero(), T::one()]],
        }
    }

    pub fn constant(kappa2: T, len: T) -> Self {
        let (c, s) = cos_sinc(kappa2 * len * len);
        Self {
            m: [[c, len * s], [-kappa2 * len * s, c]],
        }
    }

    /// `self` applied after `first`.
    pub fn after(&self, first: &Self) -> Self {
        let a = &self.m;
        let b = &first.m;
        let mut m = [[T::zero(); 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self { m }
    }

    /// Inverse of a unimodular map.
    pub fn inverse(&self) -> Self {
        let m = &self.m;
        Self {
            m: [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]],
        }
    }

    pub fn apply(&self, s: (Cx<T>, Cx<T>)) -> (Cx<T>, Cx<T>) {
        let m = &self.m;
        (s.0 * m[0][0] + s.1 * m[0][1], s.0 * m[1][0] + s.1 * m[1][1])
    }

    pub fn half_trace(&self) -> T {
        (self.m[0][0] + self.m[1][1]) / T::two()
    }
}

/// Monodromy `(A, A')(x_0) -> (A, A')(x_N)` across the whole spec.
pub fn monodromy<T: Real>(spec: &PotentialSpec<T>, energy: T) -> Propagator<T> {
    spec.segments().iter().fold(Propagator::identity(), |acc, s| {
        Propagator::constant(energy - s.value, s.width).after(&acc)
    })
}

pub(crate) fn check_energy<T: Real>(energy: T) -> Result<T> {
    if energy.is_finite() && energy > T::zero() {
        Ok(energy.sqrt())
    } else {
        Err(Error::NonPositiveEnergy(to_f64(energy)))
    }
}

/// `[[w, z], [z*, w*]]` with `(A, B)^T = M (C, D)^T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransferMatrix<T> {
    pub w: Cx<T>,
    pub z: Cx<T>,
}

impl<T: Real> TransferMatrix<T> {
    pub fn identity() -> Self {
        Self {
            w: cx(T::one(), T::zero()),
            z: cx(T::zero(), T::zero()),
        }
    }

    /// Matrix product `self * rhs` (rhs is the part further to the right).
    pub fn then(&self, rhs: &Self) -> Self {
        Self {
            w: self.w * rhs.w + self.z * rhs.z.conj(),
            z: self.w * rhs.z + self.z * rhs.w.conj(),
        }
    }

    /// Same scatterer moved by `offset`.
    pub fn shifted(&self, offset: T, k: T) -> Self {
        Self {
            w: self.w,
            z: self.z * cis(-T::two() * k * offset),
        }
    }

    /// `|w|^2 - |z|^2 - 1`; zero for real potentials.
    pub fn unimodularity_residual(&self) -> T {
        self.w.norm_sqr() - self.z.norm_sqr() - T::one()
    }

    /// Transmission amplitude for unit incidence from the left.
    pub fn t(&self) -> Cx<T> {
        self.w.inv()
    }

    /// Reflection amplitude for unit incidence from the left.
    pub fn r(&self) -> Cx<T> {
        self.z.conj() / self.w
    }

    pub fn transmission(&self) -> T {
        T::one() / self.w.norm_sqr()
    }

    pub fn reflection(&self) -> T {
        self.z.norm_sqr() / self.w.norm_sqr()
    }

    /// Largest elementwise modulus difference.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        (self.w - other.w).norm().max((self.z - other.z).norm())
    }
}

/// Transfer matrix of one rectangular segment occupying `[0, width]`.
pub fn segment_tm<T: Real>(width: T, value: T, energy: T) -> Result<TransferMatrix<T>> {
    let k = check_energy(energy)?;
    Ok(segment_tm_unchecked(width, value, energy, k))
}

fn segment_tm_unchecked<T: Real>(width: T, value: T, energy: T, k: T) -> TransferMatrix<T> {
    let kappa2 = energy - value;
    let (c, s) = cos_sinc(kappa2 * width * width);
    let ds = width * s;
    let half = T::one() / T::two();
    let n00 = cx(c, -half * ds * (k + kappa2 / k));
    let n01 = cx(T::zero(), half * ds * (k - kappa2 / k));
    TransferMatrix {
        w: n00 * cis(k * width),
        z: n01 * cis(-k * width),
    }
}

/// Ordered product of the segment matrices, each shifted to its position.
pub fn total_tm<T: Real>(spec: &PotentialSpec<T>, energy: T) -> Result<TransferMatrix<T>> {
    let k = check_energy(energy)?;
    let xs = spec.boundaries();
    Ok(spec
        .segments()
        .iter()
        .zip(&xs)
        .fold(TransferMatrix::identity(), |acc, (s, &left)| {
            acc.then(&segment_tm_unchecked(s.width, s.value, energy, k).shifted(left, k))
        }))
}
