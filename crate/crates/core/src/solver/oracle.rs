//! Direct fixed-step RK4 integration of `A'' + (energy - V(x)) A = 0`.
//!
//! Independent of the analytic propagators: it only evaluates `V` and steps the
//! ODE. Step grids are aligned with segment edges so no step straddles a jump.

use crate::error::{Error, Result};
use crate::potential::PotentialSpec;
use crate::scalar::{Cx, Real};

/// Integrates `(A, A')` from `x0` to `x1` (either direction) with `steps` RK4 steps in total.
pub fn ode_oracle<T: Real>(
    spec: &PotentialSpec<T>,
    energy: T,
    y0: (Cx<T>, Cx<T>),
    x0: T,
    x1: T,
    steps: usize,
) -> Result<(Cx<T>, Cx<T>)> {
    if steps < 1000 {
        return Err(Error::TooFewSteps(steps));
    }
    if x0 == x1 {
        return Ok(y0);
    }
    let (lo, hi) = (x0.min(x1), x0.max(x1));
    let mut cuts = vec![lo];
    cuts.extend(spec.boundaries().into_iter().filter(|&x| x > lo && x < hi));
    cuts.push(hi);
    if x1 < x0 {
        cuts.reverse();
    }
    let total = (x1 - x0).abs();
    let mut y = y0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let share = ((b - a).abs() / total) * T::from_usize(steps).expect("step count");
        let n = share.round().to_usize().unwrap_or(1).max(1);
        let h = (b - a) / T::from_usize(n).expect("step count");
        let u = energy - spec.value_at((a + b) / T::two());
        for _ in 0..n {
            y = rk4_step(y, h, u);
        }
    }
    Ok(y)
}

fn rk4_step<T: Real>(y: (Cx<T>, Cx<T>), h: T, u: T) -> (Cx<T>, Cx<T>) {
    let f = |s: (Cx<T>, Cx<T>)| (s.1, s.0 * (-u));
    let add = |s: (Cx<T>, Cx<T>), d: (Cx<T>, Cx<T>), c: T| (s.0 + d.0 * c, s.1 + d.1 * c);
    let half = h / T::two();
    let k1 = f(y);
    let k2 = f(add(y, k1, half));
    let k3 = f(add(y, k2, half));
    let k4 = f(add(y, k3, h));
    let six = T::lit(6.0);
    (
        y.0 + (k1.0 + k2.0 * T::two() + k3.0 * T::two() + k4.0) * (h / six),
        y.1 + (k1.1 + k2.1 * T::two() + k3.1 * T::two() + k4.1) * (h / six),
    )
}
