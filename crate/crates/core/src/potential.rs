//! Piecewise-constant potential landscapes and their local-symmetry structure.
//!
//! A [`PotentialSpec`] is an ordered list of segments starting at `origin`;
//! everything outside the extent is a zero-potential lead. Symmetry checks are
//! structural: they compare the breakpoint pattern and the segment values on
//! both sides of the transform instead of sampling the potential.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Segment<T> {
    pub width: T,
    pub value: T,
}

impl<T> Segment<T> {
    pub fn new(width: T, value: T) -> Self {
        Self { width, value }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialSpec<T> {
    origin: T,
    segments: Vec<Segment<T>>,
}

pub(crate) fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

impl<T: Real> PotentialSpec<T> {
    pub fn new(origin: T, segments: Vec<Segment<T>>) -> Result<Self> {
        if !origin.is_finite() {
            return Err(Error::InvalidOrigin);
        }
        for (index, s) in segments.iter().enumerate() {
            if !(s.width.is_finite() && s.width > T::zero()) {
                return Err(Error::InvalidWidth { index });
            }
            if !s.value.is_finite() {
                return Err(Error::InvalidValue { index });
            }
        }
        Ok(Self { origin, segments })
    }

    /// Builds a spec at origin 0 from `(width, value)` pairs.
    pub fn from_pairs(pairs: &[(T, T)]) -> Result<Self> {
        Self::new(
            T::zero(),
            pairs.iter().map(|&(w, v)| Segment::new(w, v)).collect(),
        )
    }

    pub fn empty(origin: T) -> Self {
        Self {
            origin,
            segments: Vec::new(),
        }
    }

    pub fn origin(&self) -> T {
        self.origin
    }

    pub fn segments(&self) -> &[Segment<T>] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    /// Total length of the potential region.
    pub fn length(&self) -> T {
        self.segments
            .iter()
            .fold(T::zero(), |acc, s| acc + s.width)
    }

    /// Right edge of the potential region.
    pub fn end(&self) -> T {
        *self.boundaries().last().expect("at least the origin")
    }

    /// Segment edges `x_0 < x_1 < ... < x_n`.
    pub fn boundaries(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.segments.len() + 1);
        let mut x = self.origin;
        out.push(x);
        for s in &self.segments {
            x = x + s.width;
            out.push(x);
        }
        out
    }

    /// Potential at `x`; on an interior edge the right segment wins, outside the extent it is 0.
    pub fn value_at(&self, x: T) -> T {
        if x < self.origin {
            return T::zero();
        }
        let mut left = self.origin;
        for s in &self.segments {
            let right = left + s.width;
            if x < right {
                return s.value;
            }
            left = right;
        }
        T::zero()
    }

    /// Same landscape shifted rigidly by `offset`.
    pub fn translated(&self, offset: T) -> Self {
        Self {
            origin: self.origin + offset,
            segments: self.segments.clone(),
        }
    }

    /// Mirror image about the center of the extent.
    pub fn reversed(&self) -> Self {
        let mut segments = self.segments.clone();
        segments.reverse();
        Self {
            origin: self.origin,
            segments,
        }
    }

    /// Restriction of the landscape to `[a, b]` as a standalone spec with origin `a`.
    ///
    /// Parts of `[a, b]` outside the extent become explicit zero segments.
    pub fn slice(&self, a: T, b: T) -> Result<Self> {
        let domain = Domain::new(a, b)?;
        let mut cuts = vec![domain.a];
        for x in self.boundaries() {
            if x > domain.a && x < domain.b {
                cuts.push(x);
            }
        }
        cuts.push(domain.b);
        let mut segments: Vec<Segment<T>> = Vec::new();
        for pair in cuts.windows(2) {
            let width = pair[1] - pair[0];
            if width <= T::zero() {
                continue;
            }
            let mid = (pair[0] + pair[1]) / T::two();
            segments.push(Segment::new(width, self.value_at(mid)));
        }
        Ok(Self {
            origin: a,
            segments,
        })
    }

    /// Points where the potential value jumps, lead edges included.
    fn breakpoints(&self) -> Vec<T> {
        let xs = self.boundaries();
        let mut out = Vec::new();
        let mut prev = T::zero();
        for (i, s) in self.segments.iter().enumerate() {
            if s.value != prev {
                out.push(xs[i]);
            }
            prev = s.value;
        }
        if prev != T::zero() {
            out.push(xs[self.segments.len()]);
        }
        out
    }

    /// Absolute tolerance used when matching mapped coordinates.
    fn coordinate_tolerance(&self, extra: &[T]) -> T {
        let mut scale = T::one().max(self.origin.abs()).max(self.end().abs());
        for &x in extra {
            scale = scale.max(x.abs());
        }
        T::epsilon() * T::lit(1024.0) * scale
    }
}

/// Closed interval `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Domain<T> {
    pub a: T,
    pub b: T,
}

impl<T: Real> Domain<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidDomain {
                a: to_f64(a),
                b: to_f64(b),
            });
        }
        Ok(Self { a, b })
    }

    pub fn len(&self) -> T {
        self.b - self.a
    }

    pub fn center(&self) -> T {
        (self.a + self.b) / T::two()
    }

    pub fn contains(&self, x: T) -> bool {
        x >= self.a && x <= self.b
    }

    /// `n >= 2` equispaced points including both ends.
    pub fn sample_points(&self, n: usize) -> Vec<T> {
        let last = T::from_usize(n - 1).expect("sample count");
        (0..n)
            .map(|i| {
                let f = T::from_usize(i).expect("sample index") / last;
                self.a + (self.b - self.a) * f
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryKind {
    Reflection,
    Translation,
}

/// Affine map `x -> sigma x + rho`: a reflection about `rho / 2` or a translation by `rho`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetryTransform<T> {
    kind: SymmetryKind,
    rho: T,
}

impl<T: Real> SymmetryTransform<T> {
    pub fn reflection(axis: T) -> Self {
        Self {
            kind: SymmetryKind::Reflection,
            rho: axis * T::two(),
        }
    }

    pub fn translation(length: T) -> Self {
        Self {
            kind: SymmetryKind::Translation,
            rho: length,
        }
    }

    pub fn kind(&self) -> SymmetryKind {
        self.kind
    }

    pub fn is_reflection(&self) -> bool {
        self.kind == SymmetryKind::Reflection
    }

    /// `-1` for reflections, `+1` for translations.
    pub fn sigma(&self) -> T {
        match self.kind {
            SymmetryKind::Reflection => -T::one(),
            SymmetryKind::Translation => T::one(),
        }
    }

    pub fn rho(&self) -> T {
        self.rho
    }

    /// Mirror axis `alpha = rho / 2` (reflections only).
    pub fn axis(&self) -> Option<T> {
        self.is_reflection().then(|| self.rho / T::two())
    }

    /// Translation length `L = rho` (translations only).
    pub fn length(&self) -> Option<T> {
        (!self.is_reflection()).then_some(self.rho)
    }

    pub fn apply(&self, x: T) -> T {
        self.sigma() * x + self.rho
    }

    pub fn image(&self, d: &Domain<T>) -> Domain<T> {
        let (p, q) = (self.apply(d.a), self.apply(d.b));
        Domain { a: p.min(q), b: p.max(q) }
    }

    pub fn shifted(&self, offset: T) -> Self {
        match self.kind {
            SymmetryKind::Reflection => Self::reflection(self.rho / T::two() + offset),
            SymmetryKind::Translation => *self,
        }
    }
}

/// A domain together with the symmetry the potential obeys on it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalSymmetry<T> {
    pub domain: Domain<T>,
    pub transform: SymmetryTransform<T>,
}

impl<T: Real> LocalSymmetry<T> {
    /// Smallest interval containing the domain and its image.
    pub fn span(&self) -> Domain<T> {
        let img = self.transform.image(&self.domain);
        Domain {
            a: self.domain.a.min(img.a),
            b: self.domain.b.max(img.b),
        }
    }

    /// Image is disjoint from the domain.
    pub fn is_gapped(&self) -> bool {
        let img = self.transform.image(&self.domain);
        img.a > self.domain.b || img.b < self.domain.a
    }
}

/// Decides `U(x) = U(F(x))` on the whole domain by comparing breakpoint patterns.
pub fn check_symmetry<T: Real>(
    spec: &PotentialSpec<T>,
    domain: &Domain<T>,
    t: &SymmetryTransform<T>,
) -> bool {
    let image = t.image(domain);
    if domain.a < spec.origin()
        || domain.b > spec.end()
        || image.a < spec.origin()
        || image.b > spec.end()
    {
        log::warn!(
            "symmetry domain [{}, {}] reaches into the leads of [{}, {}]",
            domain.a,
            domain.b,
            spec.origin(),
            spec.end()
        );
    }
    let tol = spec.coordinate_tolerance(&[domain.a, domain.b, image.a, image.b]);
    let bps = spec.breakpoints();
    let inside = |d: &Domain<T>| -> Vec<T> {
        bps.iter()
            .copied()
            .filter(|&x| x > d.a + tol && x < d.b - tol)
            .collect()
    };
    let own = inside(domain);
    let mut mapped: Vec<T> = own.iter().map(|&x| t.apply(x)).collect();
    mapped.sort_by(|p, q| p.partial_cmp(q).expect("finite"));
    let target = inside(&image);
    if mapped.len() != target.len()
        || mapped
            .iter()
            .zip(&target)
            .any(|(&p, &q)| (p - q).abs() > tol)
    {
        return false;
    }
    let mut cuts = Vec::with_capacity(own.len() + 2);
    cuts.push(domain.a);
    cuts.extend(own);
    cuts.push(domain.b);
    cuts.windows(2).all(|w| {
        if w[1] - w[0] <= tol {
            return true;
        }
        let mid = (w[0] + w[1]) / T::two();
        spec.value_at(mid) == spec.value_at(t.apply(mid))
    })
}

fn tokens_equal<T: Real>(p: &Segment<T>, q: &Segment<T>) -> bool {
    p.width == q.width && p.value == q.value
}

/// Maximal palindromic and periodic runs of the segment sequence, sorted by left edge.
///
/// Reflection axes sit at segment midpoints or at edges between two identical
/// segments. Translation entries report the source domain; [`LocalSymmetry::span`]
/// gives the whole periodic run.
pub fn detect_symmetric_domains<T: Real>(spec: &PotentialSpec<T>) -> Vec<LocalSymmetry<T>> {
    let seg = spec.segments();
    let xs = spec.boundaries();
    let n = seg.len();
    let mut out = Vec::new();

    // odd palindromes centered on segment i, even ones on the edge between i-1 and i
    for center in 0..n {
        let (mut lo, mut hi) = (center, center);
        while lo > 0 && hi + 1 < n && tokens_equal(&seg[lo - 1], &seg[hi + 1]) {
            lo -= 1;
            hi += 1;
        }
        push_reflection(&mut out, &xs, lo, hi + 1);
    }
    for edge in 1..n {
        if !tokens_equal(&seg[edge - 1], &seg[edge]) {
            continue;
        }
        let (mut lo, mut hi) = (edge - 1, edge);
        while lo > 0 && hi + 1 < n && tokens_equal(&seg[lo - 1], &seg[hi + 1]) {
            lo -= 1;
            hi += 1;
        }
        push_reflection(&mut out, &xs, lo, hi + 1);
    }

    // periodic runs: seg[i] == seg[i + p] for i in [s, e], at least two full periods
    let mut periodic: Vec<(usize, usize, usize)> = Vec::new();
    for p in 1..n {
        let mut i = 0;
        while i + p < n {
            if !tokens_equal(&seg[i], &seg[i + p]) {
                i += 1;
                continue;
            }
            let s = i;
            while i + p < n && tokens_equal(&seg[i], &seg[i + p]) {
                i += 1;
            }
            let e = i; // exclusive
            if e - s < p {
                continue;
            }
            let covered = periodic
                .iter()
                .any(|&(q, ps, pe)| p % q == 0 && ps <= s && pe >= e + p);
            if covered {
                continue;
            }
            periodic.push((p, s, e + p));
            let length = xs[s + p] - xs[s];
            out.push(LocalSymmetry {
                domain: Domain {
                    a: xs[s],
                    b: xs[e],
                },
                transform: SymmetryTransform::translation(length),
            });
        }
    }

    out.sort_by(|u, v| {
        u.domain
            .a
            .partial_cmp(&v.domain.a)
            .expect("finite")
            .then(v.span().b.partial_cmp(&u.span().b).expect("finite"))
            .then((u.transform.kind() as u8).cmp(&(v.transform.kind() as u8)))
    });
    out
}

fn push_reflection<T: Real>(out: &mut Vec<LocalSymmetry<T>>, xs: &[T], lo: usize, hi: usize) {
    let domain = Domain { a: xs[lo], b: xs[hi] };
    out.push(LocalSymmetry {
        domain,
        transform: SymmetryTransform::reflection(domain.center()),
    });
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Tiling of the potential region by reflection-symmetric units.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition<T> {
    pub boundaries: Vec<T>,
    pub units: Vec<LocalSymmetry<T>>,
}

impl<T: Real> Decomposition<T> {
    /// Builds a decomposition from unit edges, each unit mirrored about its own center.
    pub fn from_boundaries(boundaries: Vec<T>) -> Result<Self> {
        if boundaries.len() < 2 {
            return Err(Error::Empty("decomposition needs at least one unit"));
        }
        let units = boundaries
            .windows(2)
            .map(|w| {
                let domain = Domain::new(w[0], w[1])?;
                Ok(LocalSymmetry {
                    domain,
                    transform: SymmetryTransform::reflection(domain.center()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { boundaries, units })
    }

    pub fn unit_count(&self) -> usize {
        self.units.len()
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.units.len())
    }

    pub fn is_valid_for(&self, spec: &PotentialSpec<T>) -> bool {
        self.units
            .iter()
            .all(|u| check_symmetry(spec, &u.domain, &u.transform))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decompositions<T> {
    pub items: Vec<Decomposition<T>>,
    /// More tilings exist beyond `max_count`.
    pub truncated: bool,
}

/// All tilings of the extent by reflection-symmetric units with edges on segment edges.
///
/// Longer leading units are explored first, so coarse tilings come out early.
pub fn enumerate_cls_decompositions<T: Real>(
    spec: &PotentialSpec<T>,
    max_count: usize,
) -> Decompositions<T> {
    let n = spec.len();
    let xs = spec.boundaries();
    if n == 0 {
        return Decompositions {
            items: Vec::new(),
            truncated: false,
        };
    }
    let mut unit_ok = vec![vec![false; n + 1]; n + 1];
    for i in 0..n {
        for j in i + 1..=n {
            let d = Domain { a: xs[i], b: xs[j] };
            unit_ok[i][j] = check_symmetry(spec, &d, &SymmetryTransform::reflection(d.center()));
        }
    }
    // finishes[i]: a tiling of [x_i, x_n] exists
    let mut finishes = vec![false; n + 1];
    finishes[n] = true;
    for i in (0..n).rev() {
        finishes[i] = (i + 1..=n).any(|j| unit_ok[i][j] && finishes[j]);
    }

    let mut items = Vec::new();
    let mut truncated = false;
    let mut path = vec![0usize];
    walk(
        &unit_ok,
        &finishes,
        n,
        &mut path,
        &mut |cuts: &[usize]| {
            if items.len() == max_count {
                truncated = true;
                return false;
            }
            let bounds = cuts.iter().map(|&i| xs[i]).collect();
            items.push(Decomposition::from_boundaries(bounds).expect("strictly increasing edges"));
            true
        },
    );
    Decompositions { items, truncated }
}

fn walk<F: FnMut(&[usize]) -> bool>(
    unit_ok: &[Vec<bool>],
    finishes: &[bool],
    n: usize,
    path: &mut Vec<usize>,
    emit: &mut F,
) -> bool {
    let i = *path.last().expect("non-empty path");
    if i == n {
        return emit(path);
    }
    for j in (i + 1..=n).rev() {
        if unit_ok[i][j] && finishes[j] {
            path.push(j);
            let more = walk(unit_ok, finishes, n, path, emit);
            path.pop();
            if !more {
                return false;
            }
        }
    }
    true
}
