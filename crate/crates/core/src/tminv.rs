//! Transfer matrix of a reflection-symmetric unit rebuilt from its invariants.
//!
//! For a unit mirrored about `alpha`, the left-incidence invariants taken over
//! the whole unit fix the matrix completely:
//! `w = -(Q*/J) e^{2ik alpha}` and `z = -(Q~/J) e^{-2ik alpha}`.

use crate::error::{Error, Result};
use crate::invariants::compute_invariants;
use crate::potential::{check_symmetry, to_f64, Domain, PotentialSpec, SymmetryTransform};
use crate::scalar::{cis, wrap_half_turn, Cx, Real};
use crate::solver::{solve_scattering, Incidence, TransferMatrix};

/// Invariants of the left-incidence solution over a whole symmetric unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalInvariants<T> {
    pub q: Cx<T>,
    pub q_tilde: Cx<T>,
    pub current: T,
    pub axis: T,
    pub k: T,
}

/// Fails with [`Error::NotSymmetric`] unless the unit is mirror-symmetric about its center.
pub fn global_invariants<T: Real>(unit: &PotentialSpec<T>, energy: T) -> Result<GlobalInvariants<T>> {
    let axis = (unit.origin() + unit.end()) / T::two();
    let transform = SymmetryTransform::reflection(axis);
    let domain = if unit.is_empty() {
        Domain::new(axis - T::one(), axis + T::one())?
    } else {
        Domain::new(unit.origin(), unit.end())?
    };
    if !unit.is_empty() && !check_symmetry(unit, &domain, &transform) {
        return Err(Error::NotSymmetric);
    }
    let sol = solve_scattering(unit, energy, Incidence::LeftUnit)?;
    let inv = compute_invariants(&sol, &domain, &transform, 8)?;
    Ok(GlobalInvariants {
        q: inv.q,
        q_tilde: inv.q_tilde,
        current: inv.current,
        axis,
        k: sol.k,
    })
}

pub fn tm_from_invariants<T: Real>(g: &GlobalInvariants<T>) -> Result<TransferMatrix<T>> {
    if g.current.abs() <= T::lit(1e-12) * g.k {
        return Err(Error::ZeroCurrent(to_f64(g.current)));
    }
    let phase = cis(T::two() * g.k * g.axis);
    Ok(TransferMatrix {
        w: -(g.q.conj() / g.current) * phase,
        z: -(g.q_tilde / g.current) * phase.conj(),
    })
}

/// Transfer matrix of a symmetric unit obtained through [`global_invariants`].
pub fn unit_tm_via_invariants<T: Real>(unit: &PotentialSpec<T>, energy: T) -> Result<TransferMatrix<T>> {
    tm_from_invariants(&global_invariants(unit, energy)?)
}

/// Deviation of `arg z` from `pi/2 - 2k alpha`, reduced modulo `pi`.
pub fn z_phase_check<T: Real>(tm: &TransferMatrix<T>, axis: T, k: T) -> Result<T> {
    if tm.z.norm() == T::zero() {
        return Err(Error::UndefinedPhase);
    }
    let expected = T::FRAC_PI_2() - T::two() * k * axis;
    Ok(wrap_half_turn(tm.z.arg() - expected))
}
