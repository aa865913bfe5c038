mod common;

use locsym::{
    check_symmetry, compute_invariants, detect_symmetric_domains, enumerate_cls_decompositions,
    ode_oracle, solve_scattering, total_tm, Domain, Incidence, PotentialSpec, PotentialSpecF64,
    Segment, SymmetryTransform,
};
use proptest::prelude::*;

/// Dyadic widths keep every edge coordinate exact, so mirrored points compare exactly.
fn token() -> impl Strategy<Value = (f64, f64)> {
    (
        prop::sample::select(vec![0.25, 0.5, 0.75, 1.0]),
        prop::sample::select(vec![0.0, 3.0, 5.0, 7.5, -2.0]),
    )
}

fn spec_from_tokens(max_len: usize) -> impl Strategy<Value = PotentialSpecF64> {
    (
        prop::collection::vec(token(), 1..max_len),
        prop::sample::select(vec![0.0, -1.5, 2.25]),
    )
        .prop_map(|(pairs, origin)| {
            PotentialSpec::new(
                origin,
                pairs.iter().map(|&(w, v)| Segment::new(w, v)).collect(),
            )
            .unwrap()
        })
}

fn generic_spec() -> impl Strategy<Value = PotentialSpecF64> {
    prop::collection::vec((0.05f64..1.2, -4.0f64..12.0), 0..6)
        .prop_map(|pairs| PotentialSpecF64::from_pairs(&pairs).unwrap())
}

/// Maximal runs of equal value inside `[xs[i], xs[j]]`, as `(width, value)`.
fn runs(spec: &PotentialSpecF64, i: usize, j: usize) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    for s in &spec.segments()[i..j] {
        match out.last_mut() {
            Some(last) if last.1 == s.value => last.0 += s.width,
            _ => out.push((s.width, s.value)),
        }
    }
    out
}

fn is_palindrome(r: &[(f64, f64)]) -> bool {
    r.iter().eq(r.iter().rev())
}

/// Every subset of interior edges whose pieces are all palindromic run sequences.
fn brute_force_tilings(spec: &PotentialSpecF64) -> Vec<Vec<f64>> {
    let n = spec.len();
    let xs = spec.boundaries();
    let mut out = Vec::new();
    for mask in 0u32..(1 << (n - 1)) {
        let mut cuts = vec![0];
        cuts.extend((1..n).filter(|i| mask & (1 << (i - 1)) != 0));
        cuts.push(n);
        if cuts.windows(2).all(|w| is_palindrome(&runs(spec, w[0], w[1]))) {
            out.push(cuts.iter().map(|&i| xs[i]).collect());
        }
    }
    out.sort_by(|a: &Vec<f64>, b| a.partial_cmp(b).unwrap());
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn detected_domains_hold_pointwise(spec in spec_from_tokens(9)) {
        let edges = spec.boundaries();
        for sym in detect_symmetric_domains(&spec) {
            prop_assert!(check_symmetry(&spec, &sym.domain, &sym.transform));
            let span = sym.span();
            for x in span.sample_points(1000).into_iter().chain(sym.domain.sample_points(1000)) {
                if !sym.domain.contains(x) || edges.iter().any(|e| (e - x).abs() < 1e-9) {
                    continue;
                }
                prop_assert_eq!(spec.value_at(x), spec.value_at(sym.transform.apply(x)));
            }
        }
    }

    #[test]
    fn decompositions_are_valid_tilings(spec in spec_from_tokens(8)) {
        let decs = enumerate_cls_decompositions(&spec, 10_000);
        prop_assert!(!decs.truncated);
        for dec in &decs.items {
            prop_assert!(dec.is_valid_for(&spec));
            prop_assert_eq!(dec.boundaries.first().copied(), Some(spec.origin()));
            prop_assert_eq!(dec.boundaries.last().copied(), Some(spec.end()));
            prop_assert!(dec.boundaries.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn enumeration_matches_brute_force(spec in spec_from_tokens(8)) {
        let mut found: Vec<Vec<f64>> = enumerate_cls_decompositions(&spec, 100_000)
            .items
            .into_iter()
            .map(|d| d.boundaries)
            .collect();
        found.sort_by(|a, b| a.partial_cmp(b).unwrap());
        prop_assert_eq!(found, brute_force_tilings(&spec));
    }

    #[test]
    fn detection_commutes_with_translation(spec in spec_from_tokens(8), offset in -3.0f64..3.0) {
        let base = detect_symmetric_domains(&spec);
        let moved = detect_symmetric_domains(&spec.translated(offset));
        prop_assert_eq!(base.len(), moved.len());
        for (p, q) in base.iter().zip(&moved) {
            prop_assert!((p.domain.a + offset - q.domain.a).abs() < 1e-12);
            prop_assert!((p.domain.b + offset - q.domain.b).abs() < 1e-12);
            prop_assert_eq!(p.transform.kind(), q.transform.kind());
            let shifted = p.transform.shifted(offset);
            prop_assert!((shifted.rho() - q.transform.rho()).abs() < 1e-12);
        }
    }

    #[test]
    fn transfer_matrix_is_unimodular(spec in generic_spec(), e in 0.05f64..25.0) {
        let m = total_tm(&spec, e).unwrap();
        prop_assert!(m.unimodularity_residual().abs() <= 1e-9 * m.w.norm_sqr());
    }

    #[test]
    fn flux_is_conserved(spec in generic_spec(), e in 0.05f64..25.0) {
        for inc in [Incidence::LeftUnit, Incidence::RightUnit] {
            let sol = solve_scattering(&spec, e, inc).unwrap();
            let sum = sol.transmission().unwrap() + sol.reflection().unwrap();
            prop_assert!((sum - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn current_is_region_independent(spec in generic_spec(), e in 0.05f64..25.0) {
        let sol = solve_scattering(&spec, e, Incidence::LeftUnit).unwrap();
        let j = sol.current_at(sol.x_start() - 0.3);
        prop_assert!((j - sol.k * sol.transmission().unwrap()).abs() <= 1e-9 * sol.k);
        let len = spec.length().max(1e-3);
        for i in 0..=20 {
            let x = sol.x_start() + len * i as f64 / 20.0;
            prop_assert!((sol.current_at(x) - j).abs() <= 1e-9 * sol.k);
        }
    }

    #[test]
    fn reversal_keeps_transmission_amplitude(spec in generic_spec(), e in 0.05f64..25.0) {
        let left = solve_scattering(&spec, e, Incidence::LeftUnit).unwrap();
        let right = solve_scattering(&spec, e, Incidence::RightUnit).unwrap();
        let t = left.t.unwrap();
        prop_assert!((t - right.t.unwrap()).norm() <= 1e-9 * t.norm().max(1e-300));
        let reversed = total_tm(&spec.reversed(), e).unwrap();
        prop_assert!((reversed.transmission() - left.transmission().unwrap()).abs() < 1e-9);
    }

    #[test]
    fn invariants_constant_on_detected_domains(spec in spec_from_tokens(7), e in 0.5f64..15.0) {
        let sol = solve_scattering(&spec, e, Incidence::LeftUnit).unwrap();
        for sym in detect_symmetric_domains(&spec) {
            let inv = compute_invariants(&sol, &sym.domain, &sym.transform, 40).unwrap();
            prop_assert!(inv.constancy_residual < 1e-8, "residual {}", inv.constancy_residual);
            prop_assert!(inv.identity_residual() < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn field_matches_runge_kutta(spec in generic_spec(), e in 0.5f64..15.0) {
        let sol = solve_scattering(&spec, e, Incidence::LeftUnit).unwrap();
        let (x0, x1) = (sol.x_start() - 0.2, sol.x_end() + 0.2);
        let start = sol.field_at(x0);
        let end = ode_oracle(&spec, e, start, x0, x1, 10_000).unwrap();
        let scale = sol.field_at(x1).0.norm().max(start.0.norm());
        prop_assert!((end.0 - sol.field_at(x1).0).norm() < 1e-6 * scale);
    }
}

#[test]
fn single_precision_instantiation() {
    let spec32 = PotentialSpec::<f32>::from_pairs(&[(1.0, 5.0), (0.5, 0.0), (1.0, 5.0)]).unwrap();
    let spec64 = PotentialSpecF64::from_pairs(&[(1.0, 5.0), (0.5, 0.0), (1.0, 5.0)]).unwrap();
    for &e in &[2.0f32, 7.0, 12.0] {
        let t32 = total_tm(&spec32, e).unwrap().transmission();
        let t64 = total_tm(&spec64, e as f64).unwrap().transmission();
        assert!((t32 as f64 - t64).abs() < 1e-4);
        let sol = solve_scattering(&spec32, e, Incidence::LeftUnit).unwrap();
        let d = Domain::new(0.0f32, 2.5).unwrap();
        let inv = compute_invariants(&sol, &d, &SymmetryTransform::reflection(1.25), 20).unwrap();
        assert!(inv.identity_residual() < 1e-4);
    }
}
