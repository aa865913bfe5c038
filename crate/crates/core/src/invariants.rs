//! Nonlocal invariant currents `Q`, `Q~` and the field maps they induce.
//!
//! For a transform `x -> x_bar = sigma x + rho` under which the potential is
//! symmetric on a domain,
//!
//! ```text
//! Q  = (1/2i) [ sigma A(x)  A'(x_bar) - A(x_bar) A'(x)  ]
//! Q~ = (1/2i) [ sigma A*(x) A'(x_bar) - A(x_bar) A'*(x) ]
//! ```
//!
//! are constant on the domain and obey `sigma (|Q~|^2 - |Q|^2) = J^2`.
//! The real components `g1..g4` are the bracket products
//!
//! ```text
//! g1 = Re A(x_bar) Re A'(x) - sigma Re A'(x_bar) Re A(x)
//! g2 = Im A(x_bar) Re A'(x) - sigma Im A'(x_bar) Re A(x)
//! g3 = Re A(x_bar) Im A'(x) - sigma Re A'(x_bar) Im A(x)
//! g4 = Im A(x_bar) Im A'(x) - sigma Im A'(x_bar) Im A(x)
//! ```
//!
//! with `Q = (-(g2 + g3) + i (g1 - g4)) / 2`, `Q~ = (-(g2 - g3) + i (g1 + g4)) / 2`
//! and `J^2 = sigma (g1 g4 - g2 g3)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{to_f64, Domain, SymmetryTransform};
use crate::scalar::{cx, Cx, Real};
use crate::solver::FieldSolution;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvariantSet<T> {
    pub q: Cx<T>,
    pub q_tilde: Cx<T>,
    pub current: T,
    pub g: [T; 4],
    pub domain: Domain<T>,
    pub transform: SymmetryTransform<T>,
    /// `max |Q(x) - Q| / max(|Q|, |J|)` over the samples, same for `Q~`.
    pub constancy_residual: T,
    pub energy: T,
    /// Lead wavenumber of the underlying solution.
    pub k: T,
}

fn g_components<T: Real>(
    sigma: T,
    (a, da): (Cx<T>, Cx<T>),
    (b, db): (Cx<T>, Cx<T>),
) -> [T; 4] {
    [
        b.re * da.re - sigma * db.re * a.re,
        b.im * da.re - sigma * db.im * a.re,
        b.re * da.im - sigma * db.re * a.im,
        b.im * da.im - sigma * db.im * a.im,
    ]
}

fn q_from_g<T: Real>(g: &[T; 4]) -> (Cx<T>, Cx<T>) {
    let h = T::one() / T::two();
    (
        cx(-(g[1] + g[2]) * h, (g[0] - g[3]) * h),
        cx(-(g[1] - g[2]) * h, (g[0] + g[3]) * h),
    )
}

/// `(Q, Q~)` evaluated at a single point `x` and its image.
pub fn pointwise_q<T: Real>(
    sol: &FieldSolution<T>,
    t: &SymmetryTransform<T>,
    x: T,
) -> (Cx<T>, Cx<T>) {
    let here = sol.field_at(x);
    let there = sol.field_at(t.apply(x));
    let sigma = t.sigma();
    let inv2i = cx(T::zero(), -T::one() / T::two());
    let q = (here.0 * there.1 * sigma - there.0 * here.1) * inv2i;
    let qt = (here.0.conj() * there.1 * sigma - there.0 * here.1.conj()) * inv2i;
    (q, qt)
}

/// Averages the invariants over `samples` equispaced points of `domain`.
///
/// `Q` and `Q~` are rebuilt from the averaged `g` components, so the
/// reconstruction formulas hold exactly.
pub fn compute_invariants<T: Real>(
    sol: &FieldSolution<T>,
    domain: &Domain<T>,
    t: &SymmetryTransform<T>,
    samples: usize,
) -> Result<InvariantSet<T>> {
    if samples < 2 {
        return Err(Error::TooFewSamples(samples));
    }
    let xs = domain.sample_points(samples);
    let sigma = t.sigma();
    let n = T::from_usize(samples).expect("sample count");
    let mut g = [T::zero(); 4];
    let mut current = T::zero();
    let mut pointwise = Vec::with_capacity(samples);
    for &x in &xs {
        let here = sol.field_at(x);
        let there = sol.field_at(t.apply(x));
        let gx = g_components(sigma, here, there);
        for (acc, v) in g.iter_mut().zip(gx) {
            *acc = *acc + v;
        }
        current = current + (here.0.conj() * here.1).im;
        pointwise.push(q_from_g(&gx));
    }
    for v in g.iter_mut() {
        *v = *v / n;
    }
    let current = current / n;
    let (q, q_tilde) = q_from_g(&g);
    let scale_q = q.norm().max(current.abs());
    let scale_qt = q_tilde.norm().max(current.abs());
    let rel = |d: T, s: T| if s > T::zero() { d / s } else { d };
    let constancy_residual = pointwise.iter().fold(T::zero(), |acc, (pq, pqt)| {
        acc.max(rel((*pq - q).norm(), scale_q))
            .max(rel((*pqt - q_tilde).norm(), scale_qt))
    });
    Ok(InvariantSet {
        q,
        q_tilde,
        current,
        g,
        domain: *domain,
        transform: *t,
        constancy_residual,
        energy: sol.energy,
        k: sol.k,
    })
}

impl<T: Real> InvariantSet<T> {
    pub fn sigma(&self) -> T {
        self.transform.sigma()
    }

    /// `sigma (|Q~|^2 - |Q|^2)`.
    pub fn magnitude_difference(&self) -> T {
        self.sigma() * (self.q_tilde.norm_sqr() - self.q.norm_sqr())
    }

    fn identity_scale(&self) -> T {
        let j2 = self.current * self.current;
        let s = j2.max(self.q.norm_sqr()).max(self.q_tilde.norm_sqr());
        if s > T::zero() {
            s
        } else {
            T::one()
        }
    }

    /// Relative violation of `sigma (|Q~|^2 - |Q|^2) = J^2`.
    pub fn identity_residual(&self) -> T {
        (self.magnitude_difference() - self.current * self.current).abs() / self.identity_scale()
    }

    /// Relative violation of `J^2 = sigma (g1 g4 - g2 g3)`.
    pub fn g_current_residual(&self) -> T {
        let [g1, g2, g3, g4] = self.g;
        (self.sigma() * (g1 * g4 - g2 * g3) - self.current * self.current).abs()
            / self.identity_scale()
    }

    fn checked_current(&self) -> Result<T> {
        if self.current.abs() > T::lit(1e-12) * self.k {
            Ok(self.current)
        } else {
            Err(Error::ZeroCurrent(to_f64(self.current)))
        }
    }
}

/// `A(x_bar) = (Q~/J) A(x) - (Q/J) A*(x)`.
pub fn map_field<T: Real>(a: Cx<T>, inv: &InvariantSet<T>) -> Result<Cx<T>> {
    let j = inv.checked_current()?;
    Ok((inv.q_tilde * a - inv.q * a.conj()) / j)
}

/// `A'(x_bar) = sigma ((Q~/J) A'(x) - (Q/J) A'*(x))`.
pub fn map_derivative<T: Real>(da: Cx<T>, inv: &InvariantSet<T>) -> Result<Cx<T>> {
    let j = inv.checked_current()?;
    Ok((inv.q_tilde * da - inv.q * da.conj()) * (inv.sigma() / j))
}

/// `u(x_bar)` from `u(x)` and `phi(x)`; finite for every phase, `tan phi -> inf` included.
pub fn map_magnitude<T: Real>(u: T, phase: T, inv: &InvariantSet<T>) -> Result<T> {
    let j = inv.checked_current()?;
    let [g1, g2, g3, g4] = inv.g;
    let (s, c) = phase.sin_cos();
    let re = g3 * c - g1 * s;
    let im = g4 * c - g2 * s;
    Ok(u * re.hypot(im) / j.abs())
}

/// `phi(x_bar)` in `(-pi, pi]`; `tan phi(x_bar) = (g4 - g2 tan phi) / (g3 - g1 tan phi)`.
///
/// The sign of `J` fixes the branch, so the result is the full phase, not only its value mod `pi`.
pub fn map_phase<T: Real>(phase: T, inv: &InvariantSet<T>) -> Result<T> {
    let j = inv.checked_current()?;
    let [g1, g2, g3, g4] = inv.g;
    let (s, c) = phase.sin_cos();
    let (mut re, mut im) = (g3 * c - g1 * s, g4 * c - g2 * s);
    if j < T::zero() {
        re = -re;
        im = -im;
    }
    Ok(im.atan2(re))
}

/// Largest pairwise spread of `sigma (|Q~_n|^2 - |Q_n|^2)` over domains of one solution.
pub fn domain_magnitude_constraint<T: Real>(invs: &[InvariantSet<T>]) -> Result<T> {
    let first = invs.first().ok_or(Error::Empty("no invariant sets"))?;
    for inv in invs {
        if inv.energy != first.energy {
            return Err(Error::MixedSolutions(to_f64(first.energy), to_f64(inv.energy)));
        }
    }
    let values: Vec<T> = invs.iter().map(InvariantSet::magnitude_difference).collect();
    let max = values.iter().copied().fold(T::neg_infinity(), T::max);
    let min = values.iter().copied().fold(T::infinity(), T::min);
    Ok(max - min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::PotentialSpec;
    use crate::scalar::cis;
    use crate::solver::{solve_scattering, Incidence};

    fn free(e: f64) -> FieldSolution<f64> {
        solve_scattering(&PotentialSpec::empty(0.0), e, Incidence::LeftUnit).unwrap()
    }

    #[test]
    fn plane_wave_translation() {
        let (e, l) = (4.0, 0.7);
        let k = 2.0f64;
        let sol = free(e);
        let t = SymmetryTransform::translation(l);
        let (q, qt) = pointwise_q(&sol, &t, 0.3);
        assert!(q.norm() < 1e-14);
        assert!((qt - cis(k * l) * k).norm() < 1e-14);

        let inv = compute_invariants(&sol, &Domain::new(-1.0, 1.0).unwrap(), &t, 16).unwrap();
        let [g1, g2, g3, g4] = inv.g;
        assert!((g1 - k * (k * l).sin()).abs() < 1e-14);
        assert!((g4 - k * (k * l).sin()).abs() < 1e-14);
        assert!((g2 + k * (k * l).cos()).abs() < 1e-14);
        assert!((g3 - k * (k * l).cos()).abs() < 1e-14);
        assert!(inv.identity_residual() < 1e-14 && inv.g_current_residual() < 1e-14);
        assert!((inv.current - k).abs() < 1e-14);

        let x: f64 = 0.4;
        let mapped = map_field(cis(k * x), &inv).unwrap();
        assert!((mapped - cis(k * (x + l))).norm() < 1e-14);
        let dmapped = map_derivative(cx(0.0, k) * cis(k * x), &inv).unwrap();
        assert!((dmapped - cx(0.0, k) * cis(k * (x + l))).norm() < 1e-13);
        assert!((map_magnitude(1.0, k * x, &inv).unwrap() - 1.0).abs() < 1e-14);
        assert!((map_phase(k * x, &inv).unwrap() - k * (x + l)).abs() < 1e-14);
    }

    #[test]
    fn plane_wave_reflection() {
        let k = 3.0f64;
        let sol = free(k * k);
        let alpha = 0.0;
        let t = SymmetryTransform::reflection(alpha);
        let inv = compute_invariants(&sol, &Domain::new(-1.0, 1.0).unwrap(), &t, 9).unwrap();
        let [g1, g2, g3, g4] = inv.g;
        assert!(g1.abs() < 1e-14 && g4.abs() < 1e-14);
        assert!((g2 - k).abs() < 1e-14 && (g3 - k).abs() < 1e-14);
        assert!((inv.q.norm() - k).abs() < 1e-14);
        assert!(inv.q_tilde.norm() < 1e-14);

        // the image of e^{ikx} under x -> 2 alpha - x is e^{ik x_bar}
        let t = SymmetryTransform::reflection(0.8);
        let inv = compute_invariants(&sol, &Domain::new(-1.0, 2.6).unwrap(), &t, 9).unwrap();
        assert!((inv.q + cis(2.0 * k * 0.8) * k).norm() < 1e-13);
        for &x in &[-0.5, 0.1, 0.9] {
            let xb = 1.6 - x;
            assert!((map_field(cis(k * x), &inv).unwrap() - cis(k * xb)).norm() < 1e-13);
            let d = map_derivative(cx(0.0, k) * cis(k * x), &inv).unwrap();
            assert!((d - cx(0.0, k) * cis(k * xb)).norm() < 1e-12);
            assert!((map_magnitude(1.0, k * x, &inv).unwrap() - 1.0).abs() < 1e-14);
        }
        // odd phase about alpha = 0
        let inv0 = compute_invariants(&sol, &Domain::new(-1.0, 1.0).unwrap(), &SymmetryTransform::reflection(0.0), 9).unwrap();
        for &p in &[0.2, 1.3, -2.0] {
            let mapped = map_phase(p, &inv0).unwrap();
            assert!(crate::scalar::wrap_full_turn(mapped + p).abs() < 1e-14);
        }
    }

    #[test]
    fn standing_wave_has_vanishing_currents() {
        // cos(kx) = (e^{ikx} + e^{-ikx}) / 2 is a two-sided symmetric state of free space
        let k = 1.5f64;
        let sol = solve_scattering(
            &PotentialSpec::empty(0.0),
            k * k,
            Incidence::TwoSided { left: cx(0.5, 0.0), right: cx(0.5, 0.0) },
        )
        .unwrap();
        let (a, _) = sol.field_at(0.4);
        assert!((a - cx((k * 0.4).cos(), 0.0)).norm() < 1e-14);
        let inv = compute_invariants(&sol, &Domain::new(-1.0, 1.0).unwrap(), &SymmetryTransform::reflection(0.0), 11).unwrap();
        assert!(inv.q.norm() < 1e-14 && inv.q_tilde.norm() < 1e-14 && inv.current.abs() < 1e-14);
        assert!(matches!(map_field(a, &inv), Err(Error::ZeroCurrent(_))));
    }

    #[test]
    fn magnitude_map_at_quarter_phase() {
        let sol = free(2.0);
        let inv = compute_invariants(&sol, &Domain::new(0.0, 1.0).unwrap(), &SymmetryTransform::translation(0.3), 5).unwrap();
        let [g1, g2, ..] = inv.g;
        let u = map_magnitude(2.0, std::f64::consts::FRAC_PI_2, &inv).unwrap();
        assert!((u - 2.0 * g1.hypot(g2) / inv.current.abs()).abs() < 1e-14);
    }

    #[test]
    fn invariants_are_constant_on_symmetric_barrier() {
        let spec = PotentialSpec::from_pairs(&[(1.0f64, 5.0)]).unwrap();
        for &e in &[3.0, 7.0, 12.0] {
            let sol = solve_scattering(&spec, e, Incidence::LeftUnit).unwrap();
            let inv = compute_invariants(&sol, &Domain::new(0.0, 1.0).unwrap(), &SymmetryTransform::reflection(0.5), 50).unwrap();
            assert!(inv.constancy_residual < 1e-10);
            assert!((inv.g[1] - inv.g[2]).abs() < 1e-10);
        }
    }

    #[test]
    fn constraint_errors() {
        assert!(domain_magnitude_constraint::<f64>(&[]).is_err());
        let a = compute_invariants(&free(1.0), &Domain::new(0.0, 1.0).unwrap(), &SymmetryTransform::translation(1.0), 4).unwrap();
        let b = compute_invariants(&free(2.0), &Domain::new(0.0, 1.0).unwrap(), &SymmetryTransform::translation(1.0), 4).unwrap();
        assert_eq!(domain_magnitude_constraint(&[a]).unwrap(), 0.0);
        assert!(matches!(domain_magnitude_constraint(&[a, b]), Err(Error::MixedSolutions(..))));
        assert!(matches!(compute_invariants(&free(1.0), &Domain::new(0.0, 1.0).unwrap(), &SymmetryTransform::translation(1.0), 1), Err(Error::TooFewSamples(1))));
    }
}
