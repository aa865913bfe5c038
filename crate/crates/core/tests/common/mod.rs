#![allow(dead_code)]

use std::f64::consts::PI;

use locsym::{
    detect_symmetric_domains, Domain, LocalSymmetry, PotentialSpecF64, SymmetryTransform,
};

pub struct CorpusEntry {
    pub name: &'static str,
    pub spec: PotentialSpecF64,
    /// Symmetry pairs the automatic detector does not report (gapped ones).
    pub extra: Vec<LocalSymmetry<f64>>,
}

impl CorpusEntry {
    /// Detected domains plus the hand-listed gapped ones.
    pub fn domains(&self) -> Vec<LocalSymmetry<f64>> {
        let mut out = detect_symmetric_domains(&self.spec);
        out.extend(self.extra.iter().copied());
        out
    }
}

fn entry(name: &'static str, pairs: &[(f64, f64)]) -> CorpusEntry {
    CorpusEntry {
        name,
        spec: PotentialSpecF64::from_pairs(pairs).unwrap(),
        extra: Vec::new(),
    }
}

pub fn s_ptr_pair() -> PotentialSpecF64 {
    PotentialSpecF64::from_pairs(&[(PI / 5f64.sqrt(), 5.0), (PI / 2f64.sqrt(), 8.0)]).unwrap()
}

pub fn pair(domain: (f64, f64), t: SymmetryTransform<f64>) -> LocalSymmetry<f64> {
    LocalSymmetry {
        domain: Domain::new(domain.0, domain.1).unwrap(),
        transform: t,
    }
}

/// Completely locally symmetric landscapes used across the suites.
pub fn corpus() -> Vec<CorpusEntry> {
    let mut kp = Vec::new();
    for _ in 0..5 {
        kp.push((0.5, 5.0));
        kp.push((0.5, 0.0));
    }
    let mut gapped = entry("gapped pair", &[(0.6, 6.0), (0.7, 3.0), (0.2, 9.0), (0.6, 6.0)]);
    gapped.extra = vec![
        pair((0.0, 0.6), SymmetryTransform::translation(1.5)),
        pair((0.0, 0.6), SymmetryTransform::reflection(1.05)),
    ];
    let mut fig4 = entry(
        "two barrier kinds with gaps",
        &[(0.5, 5.45), (0.3, 0.0), (0.8, 7.12), (0.3, 0.0), (0.5, 5.45), (0.5, 5.45), (0.4, 0.0), (0.5, 5.45)],
    );
    fig4.extra = vec![pair((0.0, 0.5), SymmetryTransform::translation(2.4))];
    vec![
        CorpusEntry {
            name: "s-PTR pair",
            spec: s_ptr_pair(),
            extra: Vec::new(),
        },
        entry("single barrier", &[(1.0, 5.0)]),
        entry("mixed reflection/translation", &[(1.0, 5.0), (1.0, 7.0), (1.0, 5.0), (1.0, 7.0)]),
        entry("symmetric three barriers", &[(0.5, 5.0), (0.4, 0.0), (0.8, 7.0), (0.4, 0.0), (0.5, 5.0)]),
        entry("double barrier", &[(0.5, 6.0), (1.0, 0.0), (0.5, 6.0)]),
        fig4,
        entry(
            "four barrier kinds",
            &[(0.5, 3.4197), (0.8, 5.0), (0.5, 3.4197), (0.1, 7.0806), (0.6751, 3.0671), (0.1, 7.0806)],
        ),
        entry("Kronig-Penney five cells", &kp),
        gapped,
        entry("well with central barrier", &[(1.0, -3.0), (0.5, 4.0), (1.0, -3.0)]),
        entry("tall thin barriers", &[(0.3, 15.0), (0.5, 0.0), (0.3, 15.0)]),
    ]
}

/// Textbook single-barrier transmission, one formula per regime.
pub fn barrier_transmission(v: f64, d: f64, e: f64) -> f64 {
    let ratio = if e > v {
        let q = (e - v).sqrt();
        (q * d).sin().powi(2) / (e - v)
    } else if e < v {
        let q = (v - e).sqrt();
        (q * d).sinh().powi(2) / (v - e)
    } else {
        d * d
    };
    1.0 / (1.0 + v * v * ratio / (4.0 * e))
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}
