//! Decomposition sum rule and perfect-transmission resonance (PTR) classification.
//!
//! For a tiling of the potential into mirror-symmetric units with edges
//! `x_0 < ... < x_N`,
//!
//! ```text
//! L = sum_m (-1)^{m-1} V_m = (1/2i) [ l(x_0) - (-1)^N l(x_N) ],   l = A'/A,
//! ```
//!
//! where `V_m = -Q_m / (A(x_{m-1}) A(x_m))` and `Q_m` is the reflection
//! invariant of unit `m`. At a PTR, `L` is 0 for even `N` and `k` for odd `N`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::{compute_invariants, map_phase};
use crate::potential::{to_f64, Decomposition, Parity, PotentialSpec};
use crate::scalar::{cis, cx, wrap_half_turn, Cx, Real};
use crate::solver::{solve_scattering, total_tm, FieldSolution, Incidence};

const UNIT_SAMPLES: usize = 16;

/// Default bound on `1 - T` for a refined maximum to count as a PTR.
pub const PTR_TOL: f64 = 1e-10;
/// Default tolerance on unit transmissions and boundary magnitudes.
pub const CLASSIFY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SumRuleResult<T> {
    /// Alternating sum of the unit terms.
    pub l: Cx<T>,
    /// Value from the fields at the two outer edges.
    pub l_boundary: Cx<T>,
    pub vm: Vec<Cx<T>>,
    pub n: usize,
    pub parity: Parity,
}

impl<T: Real> SumRuleResult<T> {
    pub fn discrepancy(&self) -> T {
        (self.l - self.l_boundary).norm()
    }
}

fn check_nodes<T: Real>(sol: &FieldSolution<T>, xs: &[T]) -> Result<Vec<Cx<T>>> {
    let values: Vec<Cx<T>> = xs.iter().map(|&x| sol.field_at(x).0).collect();
    let max = values.iter().fold(T::zero(), |m, a| m.max(a.norm()));
    for (index, (a, &x)) in values.iter().zip(xs).enumerate() {
        if a.norm() <= T::lit(1e-10) * max {
            return Err(Error::BoundaryNode { index, x: to_f64(x) });
        }
    }
    Ok(values)
}

/// `V_m` for every unit of `dec`.
pub fn compute_vm<T: Real>(sol: &FieldSolution<T>, dec: &Decomposition<T>) -> Result<Vec<Cx<T>>> {
    let fields = check_nodes(sol, &dec.boundaries)?;
    dec.units
        .iter()
        .enumerate()
        .map(|(m, unit)| {
            let inv = compute_invariants(sol, &unit.domain, &unit.transform, UNIT_SAMPLES)?;
            Ok(-inv.q / (fields[m] * fields[m + 1]))
        })
        .collect()
}

/// `(1/2i) [ l(x_0) - (-1)^N l(x_N) ]` from the fields at the outer edges.
pub fn boundary_l<T: Real>(sol: &FieldSolution<T>, x0: T, xn: T, parity: Parity) -> Cx<T> {
    let log_derivative = |x: T| {
        let (a, da) = sol.field_at(x);
        da / a
    };
    let (l0, ln) = (log_derivative(x0), log_derivative(xn));
    let tail = match parity {
        Parity::Even => ln,
        Parity::Odd => -ln,
    };
    (l0 - tail) * cx(T::zero(), -T::one() / T::two())
}

pub fn compute_l<T: Real>(sol: &FieldSolution<T>, dec: &Decomposition<T>) -> Result<SumRuleResult<T>> {
    let vm = compute_vm(sol, dec)?;
    let l = vm
        .iter()
        .enumerate()
        .fold(cx(T::zero(), T::zero()), |acc, (m, v)| if m % 2 == 0 { acc + v } else { acc - v });
    let n = vm.len();
    let parity = Parity::of(n);
    let xs = &dec.boundaries;
    let l_boundary = boundary_l(sol, xs[0], xs[xs.len() - 1], parity);
    Ok(SumRuleResult {
        l,
        l_boundary,
        vm,
        n,
        parity,
    })
}

/// `-k r/(1 + r)` (even) or `k/(1 + r)` (odd), with `r` referred to an origin at `x0`.
pub fn closed_form_l<T: Real>(r: Cx<T>, k: T, x0: T, parity: Parity) -> Result<Cx<T>> {
    let r = r * cis(-T::two() * k * x0);
    let denom = r + T::one();
    if denom.norm() <= T::epsilon() {
        return Err(Error::SingularClosedForm);
    }
    Ok(match parity {
        Parity::Even => -(r * k) / denom,
        Parity::Odd => cx(k, T::zero()) / denom,
    })
}

/// `k^2 R/(1 + R + 2 Re r)` (even) or `k^2/(1 + R + 2 Re r)` (odd), with `r` referred to `x0`.
pub fn l_magnitude_squared<T: Real>(r: Cx<T>, k: T, x0: T, parity: Parity) -> Result<T> {
    let r = r * cis(-T::two() * k * x0);
    let rr = r.norm_sqr();
    let denom = T::one() + rr + T::two() * r.re;
    if denom <= T::epsilon() {
        return Err(Error::SingularClosedForm);
    }
    let num = match parity {
        Parity::Even => k * k * rr,
        Parity::Odd => k * k,
    };
    Ok(num / denom)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PtrClass {
    #[serde(rename = "s-PTR")]
    SPtr,
    #[serde(rename = "a-PTR")]
    APtr,
    #[serde(rename = "not-PTR")]
    NotPtr,
}

impl PtrClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            PtrClass::SPtr => "s-PTR",
            PtrClass::APtr => "a-PTR",
            PtrClass::NotPtr => "not-PTR",
        }
    }
}

/// Outcome of [`classify_ptr`] with the per-unit evidence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PtrClassification<T> {
    pub class: PtrClass,
    pub transmission: T,
    /// Transmission of each unit solved on its own.
    pub per_unit_t: Vec<T>,
    /// `|A(x_m)|` at every unit edge, per unit incident amplitude.
    pub boundary_magnitudes: Vec<T>,
    /// `|g1 + g4|` per unit; it vanishes together with `Q~_m`.
    pub q_tilde_indicator: Vec<T>,
    /// Largest `phi(x_bar) + phi(x) - arg Q_m` (mod pi) per unit; `None` when `|Q_m|` is negligible.
    pub phase_residual: Vec<Option<T>>,
}

fn phase_antisymmetry<T: Real>(
    sol: &FieldSolution<T>,
    inv: &crate::invariants::InvariantSet<T>,
) -> Option<T> {
    if inv.q.norm() <= T::lit(1e-10) {
        return None;
    }
    let theta = inv.q.arg();
    let mut worst = T::zero();
    for x in inv.domain.sample_points(UNIT_SAMPLES) {
        let a = sol.field_at(x).0;
        if a.norm() <= T::lit(1e-12) {
            continue;
        }
        let mapped = map_phase(a.arg(), inv).ok()?;
        worst = worst.max(wrap_half_turn(mapped + a.arg() - theta).abs());
    }
    Some(worst)
}

/// s-PTR when every unit is transparent on its own and `|A| = 1` at every unit edge.
pub fn classify_ptr<T: Real>(sol: &FieldSolution<T>, dec: &Decomposition<T>, tol: T) -> Result<PtrClassification<T>> {
    let spec = sol.potential();
    let ((incoming, _), _) = sol.lead_amplitudes();
    let scale = if incoming.norm() > T::zero() { incoming.norm() } else { T::one() };
    let transmission = sol
        .transmission()
        .unwrap_or_else(|| sol.lead_amplitudes().1 .0.norm_sqr() / (scale * scale));
    let mut per_unit_t = Vec::with_capacity(dec.unit_count());
    let mut q_tilde_indicator = Vec::with_capacity(dec.unit_count());
    let mut phase_residual = Vec::with_capacity(dec.unit_count());
    for unit in &dec.units {
        let piece = spec.slice(unit.domain.a, unit.domain.b)?;
        per_unit_t.push(total_tm(&piece, sol.energy)?.transmission());
        let inv = compute_invariants(sol, &unit.domain, &unit.transform, UNIT_SAMPLES)?;
        q_tilde_indicator.push((inv.g[0] + inv.g[3]).abs());
        phase_residual.push(phase_antisymmetry(sol, &inv));
    }
    let boundary_magnitudes: Vec<T> = dec
        .boundaries
        .iter()
        .map(|&x| sol.field_at(x).0.norm() / scale)
        .collect();
    let class = if T::one() - transmission > tol {
        PtrClass::NotPtr
    } else if per_unit_t.iter().all(|&t| t >= T::one() - tol)
        && boundary_magnitudes.iter().all(|&u| (u - T::one()).abs() <= tol)
    {
        PtrClass::SPtr
    } else {
        PtrClass::APtr
    };
    Ok(PtrClassification {
        class,
        transmission,
        per_unit_t,
        boundary_magnitudes,
        q_tilde_indicator,
        phase_residual,
    })
}

/// Refined transmission maximum with its sum-rule value and classification.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PtrRecord<T> {
    pub energy: T,
    pub transmission: T,
    /// `|r|^2`, accurate even when `1 - T` is lost to rounding.
    pub reflection: T,
    pub l: Cx<T>,
    pub l_abs: T,
    pub class: PtrClass,
    pub per_unit_t: Vec<T>,
    pub boundary_magnitudes: Vec<T>,
    pub q_tilde_indicator: Vec<T>,
    pub phase_residual: Vec<Option<T>>,
}

fn transmission_at<T: Real>(spec: &PotentialSpec<T>, energy: T) -> T {
    total_tm(spec, energy).map(|m| m.transmission()).unwrap_or(T::zero())
}

/// `|r| = |z / w|`; minimal exactly where `T` is maximal, but with a sharp minimum at `T = 1`.
fn reflection_amplitude_at<T: Real>(spec: &PotentialSpec<T>, energy: T) -> T {
    total_tm(spec, energy)
        .map(|m| m.z.norm() / m.w.norm())
        .unwrap_or(T::infinity())
}

/// Golden-section search for the maximum of `T(energy)` on `[lo, hi]`, to `tol` in energy.
///
/// The search minimizes `|r|` instead of maximizing `T` directly: near a perfect
/// peak `1 - T` is quadratic and drowns in rounding long before `tol` is reached.
pub fn refine_maximum<T: Real>(spec: &PotentialSpec<T>, lo: T, hi: T, tol: T) -> T {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::two();
    let f = |e: T| reflection_amplitude_at(spec, e);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        c
    } else {
        d
    }
}

/// Sum rule at one energy for left incidence; falls back to the boundary form on interior nodes.
pub fn sum_rule_at<T: Real>(spec: &PotentialSpec<T>, dec: &Decomposition<T>, energy: T) -> Result<(FieldSolution<T>, Cx<T>)> {
    let sol = solve_scattering(spec, energy, Incidence::LeftUnit)?;
    let l = match compute_l(&sol, dec) {
        Ok(res) => res.l,
        Err(Error::BoundaryNode { .. }) => {
            let xs = &dec.boundaries;
            boundary_l(&sol, xs[0], xs[xs.len() - 1], dec.parity())
        }
        Err(e) => return Err(e),
    };
    Ok((sol, l))
}

/// Interior local maxima of `T` on the grid, refined and classified.
pub fn ptr_scan<T: Real>(
    spec: &PotentialSpec<T>,
    dec: &Decomposition<T>,
    grid: &[T],
    tol: T,
) -> Result<Vec<PtrRecord<T>>> {
    if grid.iter().any(|&e| !(e > T::zero()) || !e.is_finite()) {
        return Err(Error::InvalidGrid("energies must be positive and finite"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("energies must be strictly increasing"));
    }
    let ts: Vec<T> = grid.iter().map(|&e| transmission_at(spec, e)).collect();
    let mut out = Vec::new();
    for i in 1..grid.len().saturating_sub(1) {
        if !(ts[i] > ts[i - 1] && ts[i] >= ts[i + 1]) {
            continue;
        }
        let energy = refine_maximum(spec, grid[i - 1], grid[i + 1], T::lit(1e-10));
        let (sol, l) = sum_rule_at(spec, dec, energy)?;
        let c = classify_ptr(&sol, dec, T::lit(CLASSIFY_TOL))?;
        let class = if T::one() - c.transmission > tol { PtrClass::NotPtr } else { c.class };
        out.push(PtrRecord {
            energy,
            transmission: c.transmission,
            reflection: sol.reflection().unwrap_or(T::zero()),
            l,
            l_abs: l.norm(),
            class,
            per_unit_t: c.per_unit_t,
            boundary_magnitudes: c.boundary_magnitudes,
            q_tilde_indicator: c.q_tilde_indicator,
            phase_residual: c.phase_residual,
        });
    }
    Ok(out)
}
