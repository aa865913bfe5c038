//! Bloch analysis of one unit cell repeated periodically.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::PotentialSpec;
use crate::scalar::{cis, cx, Cx, Real};
use crate::solver::tm::{check_energy, monodromy};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlochAnalysis<T> {
    /// Allowed band: `A(x + L) = e^{i k_B L} A(x)` with `(A, A')` at the cell origin given by `state`.
    Propagating {
        bloch_k: T,
        eigenvalue: Cx<T>,
        state: (Cx<T>, Cx<T>),
    },
    /// Gap: the growing solution gains `e^{growth L}` per cell.
    Evanescent { growth: T },
}

/// Eigen-decomposition of the unit-cell monodromy.
///
/// The propagating eigenvector returned is the one carrying positive current;
/// `bloch_k` lies in `(0, pi / L)`.
pub fn bloch_analysis<T: Real>(unit: &PotentialSpec<T>, energy: T) -> Result<BlochAnalysis<T>> {
    check_energy(energy)?;
    let period = unit.length();
    let p = monodromy(unit, energy);
    let half_trace = p.half_trace();
    let gap = half_trace.abs() - T::one();
    if gap.abs() <= T::lit(1e-12) {
        return Err(Error::BandEdge(half_trace.to_f64().unwrap_or(f64::NAN)));
    }
    if gap > T::zero() {
        return Ok(BlochAnalysis::Evanescent {
            growth: half_trace.abs().acosh() / period,
        });
    }
    let theta = half_trace.acos();
    let m = p.m;
    let eigvec = |lambda: Cx<T>| -> (Cx<T>, Cx<T>) {
        // (P - lambda) v = 0 from whichever row is better conditioned
        let v = if m[0][1].abs() >= m[1][0].abs() {
            (cx(m[0][1], T::zero()), lambda - m[0][0])
        } else {
            (lambda - m[1][1], cx(m[1][0], T::zero()))
        };
        let scale = if v.0.norm() > T::lit(1e-8) * v.1.norm() {
            v.0.inv()
        } else {
            cx(v.1.norm().recip(), T::zero())
        };
        (v.0 * scale, v.1 * scale)
    };
    let forward = eigvec(cis(theta));
    let current = (forward.0.conj() * forward.1).im;
    let (sign, state) = if current > T::zero() {
        (T::one(), forward)
    } else {
        (-T::one(), eigvec(cis(-theta)))
    };
    Ok(BlochAnalysis::Propagating {
        bloch_k: theta / period,
        eigenvalue: cis(sign * theta),
        state,
    })
}
