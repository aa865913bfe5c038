//! Stationary scattering states and piecewise-analytic field evaluation.

use serde::Serialize;

use crate::error::Result;
use crate::potential::{PotentialSpec, Segment};
use crate::scalar::{cis, cx, re, Cx, Real};
use crate::solver::tm::{check_energy, total_tm, Propagator};

/// Which side(s) the incoming waves enter from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Incidence<T> {
    /// `e^{ikx}` comes in from the left.
    LeftUnit,
    /// `e^{-ikx}` comes in from the right.
    RightUnit,
    /// `left e^{ikx}` from the left and `right e^{-ikx}` from the right.
    TwoSided { left: Cx<T>, right: Cx<T> },
    /// Built from a prescribed `(A, A')` at the origin (Bloch states and the like).
    Prescribed,
}

/// Field in one constant region.
///
/// Leads (`start = -inf` or `end = +inf`) use the absolute basis `f e^{ikx} + b e^{-ikx}`,
/// so their amplitudes are the lead amplitudes `A, B` and `C, D`. Interior regions
/// are anchored at their left edge: `f e^{i kappa (x - start)} + b e^{-i kappa (x - start)}`,
/// or `f + b (x - start)` when `kappa = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionWave<T> {
    pub start: T,
    pub end: T,
    pub value: T,
    /// Principal root of `energy - value` (`Im kappa >= 0`).
    pub kappa: Cx<T>,
    pub amplitudes: (Cx<T>, Cx<T>),
    /// `(A, A')` at `start` (interior regions) or at `x = 0` (leads).
    state: (Cx<T>, Cx<T>),
}

impl<T: Real> RegionWave<T> {
    fn interior(start: T, end: T, value: T, energy: T, state: (Cx<T>, Cx<T>)) -> Self {
        let kappa = re(energy - value).sqrt();
        let amplitudes = if kappa.norm() == T::zero() {
            state
        } else {
            let d = state.1 / (cx(T::zero(), T::one()) * kappa);
            ((state.0 + d) / T::two(), (state.0 - d) / T::two())
        };
        Self {
            start,
            end,
            value,
            kappa,
            amplitudes,
            state,
        }
    }

    fn lead(start: T, end: T, k: T, ab: (Cx<T>, Cx<T>)) -> Self {
        let ik = cx(T::zero(), k);
        Self {
            start,
            end,
            value: T::zero(),
            kappa: re(k),
            amplitudes: ab,
            state: (ab.0 + ab.1, ik * (ab.0 - ab.1)),
        }
    }

    fn is_lead(&self) -> bool {
        !self.start.is_finite() || !self.end.is_finite()
    }

    fn eval(&self, x: T, energy: T) -> (Cx<T>, Cx<T>) {
        if self.is_lead() {
            let k = self.kappa.re;
            let (a, b) = self.amplitudes;
            let (e, ei) = (cis(k * x), cis(-k * x));
            let ik = cx(T::zero(), k);
            (a * e + b * ei, ik * (a * e - b * ei))
        } else {
            Propagator::constant(energy - self.value, x - self.start).apply(self.state)
        }
    }
}

/// A fully matched stationary solution at one energy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldSolution<T> {
    pub energy: T,
    /// Lead wavenumber `sqrt(energy)`.
    pub k: T,
    pub incidence: Incidence<T>,
    /// Left lead, one region per segment, right lead.
    pub regions: Vec<RegionWave<T>>,
    /// Reflection and transmission amplitudes (one-sided incidence only).
    pub r: Option<Cx<T>>,
    pub t: Option<Cx<T>>,
}

/// `(A, B)` of the plane-wave decomposition of a lead state at `x`.
fn lead_amplitudes<T: Real>(x: T, k: T, s: (Cx<T>, Cx<T>)) -> (Cx<T>, Cx<T>) {
    let ik = cx(T::zero(), k);
    let d = s.1 / ik;
    (
        (s.0 + d) * cis(-k * x) / T::two(),
        (s.0 - d) * cis(k * x) / T::two(),
    )
}

fn lead_state<T: Real>(x: T, k: T, ab: (Cx<T>, Cx<T>)) -> (Cx<T>, Cx<T>) {
    let (e, ei) = (cis(k * x), cis(-k * x));
    let ik = cx(T::zero(), k);
    (ab.0 * e + ab.1 * ei, ik * (ab.0 * e - ab.1 * ei))
}

fn rescale<T: Real>(s: (Cx<T>, Cx<T>)) -> ((Cx<T>, Cx<T>), T) {
    let n = s.0.norm().max(s.1.norm());
    if n > T::zero() && n.is_finite() {
        ((s.0 / n, s.1 / n), n.ln())
    } else {
        (s, T::zero())
    }
}

/// Region edge states for one sweep: `true_state_i = exp(log_scale_i) * state_i`.
struct Sweep<T> {
    states: Vec<(Cx<T>, Cx<T>)>,
    log_scale: Vec<T>,
}

/// Propagates from the right edge to the left one, renormalizing at every edge.
fn sweep_leftward<T: Real>(spec: &PotentialSpec<T>, energy: T, right: (Cx<T>, Cx<T>)) -> Sweep<T> {
    let n = spec.len();
    let mut states = vec![right; n + 1];
    let mut log_scale = vec![T::zero(); n + 1];
    let (mut s, mut ls) = (right, T::zero());
    for i in (0..n).rev() {
        let seg = spec.segments()[i];
        let (ns, l) = rescale(Propagator::constant(energy - seg.value, seg.width).inverse().apply(s));
        s = ns;
        ls = ls + l;
        states[i] = s;
        log_scale[i] = ls;
    }
    Sweep { states, log_scale }
}

fn sweep_rightward<T: Real>(spec: &PotentialSpec<T>, energy: T, left: (Cx<T>, Cx<T>)) -> Sweep<T> {
    let n = spec.len();
    let mut states = vec![left; n + 1];
    let mut log_scale = vec![T::zero(); n + 1];
    let (mut s, mut ls) = (left, T::zero());
    for i in 0..n {
        let seg = spec.segments()[i];
        let (ns, l) = rescale(Propagator::constant(energy - seg.value, seg.width).apply(s));
        s = ns;
        ls = ls + l;
        states[i + 1] = s;
        log_scale[i + 1] = ls;
    }
    Sweep { states, log_scale }
}

impl<T: Real> Sweep<T> {
    /// Edge states multiplied by `factor * exp(log_scale_i - reference)`.
    fn materialize(&self, factor: Cx<T>, reference: T) -> Vec<(Cx<T>, Cx<T>)> {
        self.states
            .iter()
            .zip(&self.log_scale)
            .map(|(s, &l)| {
                let f = factor * (l - reference).exp();
                (s.0 * f, s.1 * f)
            })
            .collect()
    }
}

/// Solves the matching problem for the requested incidence.
pub fn solve_scattering<T: Real>(
    spec: &PotentialSpec<T>,
    energy: T,
    incidence: Incidence<T>,
) -> Result<FieldSolution<T>> {
    let k = check_energy(energy)?;
    let xs = spec.boundaries();
    let (x0, xn) = (xs[0], xs[xs.len() - 1]);
    let one = cx(T::one(), T::zero());
    let zero = cx(T::zero(), T::zero());

    // left incidence: outgoing e^{ikx} on the right, sweep towards the growing side
    let left_unit = || {
        let sw = sweep_leftward(spec, energy, lead_state(xn, k, (one, zero)));
        let (a, _) = lead_amplitudes(x0, k, sw.states[0]);
        sw.materialize(a.inv(), sw.log_scale[0])
    };
    let right_unit = || {
        let n = xs.len() - 1;
        let sw = sweep_rightward(spec, energy, lead_state(x0, k, (zero, one)));
        let (_, d) = lead_amplitudes(xn, k, sw.states[n]);
        sw.materialize(d.inv(), sw.log_scale[n])
    };

    let edges = match incidence {
        Incidence::LeftUnit => left_unit(),
        Incidence::RightUnit => right_unit(),
        Incidence::TwoSided { left, right } => left_unit()
            .into_iter()
            .zip(right_unit())
            .map(|(p, q)| (p.0 * left + q.0 * right, p.1 * left + q.1 * right))
            .collect(),
        Incidence::Prescribed => {
            return Err(crate::error::Error::Empty(
                "prescribed incidence needs FieldSolution::from_origin_state",
            ))
        }
    };
    let mut sol = assemble(spec, energy, k, incidence, &edges);
    let (ab, cd) = sol.lead_amplitudes();
    match incidence {
        Incidence::LeftUnit => {
            sol.r = Some(ab.1);
            sol.t = Some(cd.0);
        }
        Incidence::RightUnit => {
            sol.r = Some(cd.0);
            sol.t = Some(ab.1);
        }
        _ => {}
    }
    Ok(sol)
}

fn assemble<T: Real>(
    spec: &PotentialSpec<T>,
    energy: T,
    k: T,
    incidence: Incidence<T>,
    edges: &[(Cx<T>, Cx<T>)],
) -> FieldSolution<T> {
    let xs = spec.boundaries();
    let n = spec.len();
    let mut regions = Vec::with_capacity(n + 2);
    regions.push(RegionWave::lead(
        T::neg_infinity(),
        xs[0],
        k,
        lead_amplitudes(xs[0], k, edges[0]),
    ));
    for (i, seg) in spec.segments().iter().enumerate() {
        regions.push(RegionWave::interior(xs[i], xs[i + 1], seg.value, energy, edges[i]));
    }
    regions.push(RegionWave::lead(
        xs[n],
        T::infinity(),
        k,
        lead_amplitudes(xs[n], k, edges[n]),
    ));
    FieldSolution {
        energy,
        k,
        incidence,
        regions,
        r: None,
        t: None,
    }
}

impl<T: Real> FieldSolution<T> {
    /// Solution fixed by `(A, A')` at the spec origin, propagated to both sides.
    pub fn from_origin_state(
        spec: &PotentialSpec<T>,
        energy: T,
        state: (Cx<T>, Cx<T>),
    ) -> Result<Self> {
        let k = check_energy(energy)?;
        let sw = sweep_rightward(spec, energy, state);
        let edges = sw.materialize(cx(T::one(), T::zero()), T::zero());
        Ok(assemble(spec, energy, k, Incidence::Prescribed, &edges))
    }

    /// `((A, B), (C, D))`.
    pub fn lead_amplitudes(&self) -> ((Cx<T>, Cx<T>), (Cx<T>, Cx<T>)) {
        (
            self.regions[0].amplitudes,
            self.regions[self.regions.len() - 1].amplitudes,
        )
    }

    /// Left edge of the potential region.
    pub fn x_start(&self) -> T {
        self.regions[0].end
    }

    /// Right edge of the potential region.
    pub fn x_end(&self) -> T {
        self.regions[self.regions.len() - 1].start
    }

    /// The landscape this solution was built on.
    pub fn potential(&self) -> PotentialSpec<T> {
        let inner = &self.regions[1..self.regions.len() - 1];
        let segments = inner
            .iter()
            .map(|r| Segment::new(r.end - r.start, r.value))
            .collect();
        PotentialSpec::new(self.x_start(), segments).expect("regions of a valid spec")
    }

    fn region_index(&self, x: T) -> usize {
        // first region whose end lies beyond x; right edges belong to the next region
        let idx = self.regions.partition_point(|r| r.end <= x);
        idx.min(self.regions.len() - 1)
    }

    /// `(A(x), A'(x))`.
    pub fn field_at(&self, x: T) -> (Cx<T>, Cx<T>) {
        self.regions[self.region_index(x)].eval(x, self.energy)
    }

    /// Left and right limits at `x`; they coincide for a matched solution.
    pub fn one_sided_limits(&self, x: T) -> ((Cx<T>, Cx<T>), (Cx<T>, Cx<T>)) {
        let i = self.region_index(x);
        let right = self.regions[i].eval(x, self.energy);
        let left = if i > 0 && self.regions[i].start == x {
            self.regions[i - 1].eval(x, self.energy)
        } else {
            right
        };
        (left, right)
    }

    /// Current `J = Im(A* A')` at `x`.
    pub fn current_at(&self, x: T) -> T {
        let (a, da) = self.field_at(x);
        (a.conj() * da).im
    }

    pub fn transmission(&self) -> Option<T> {
        self.t.map(|t| t.norm_sqr())
    }

    pub fn reflection(&self) -> Option<T> {
        self.r.map(|r| r.norm_sqr())
    }
}

/// Left-incidence `r`, `t` straight from the transfer matrix.
pub fn amplitudes_from_tm<T: Real>(spec: &PotentialSpec<T>, energy: T) -> Result<(Cx<T>, Cx<T>)> {
    let m = total_tm(spec, energy)?;
    Ok((m.r(), m.t()))
}
