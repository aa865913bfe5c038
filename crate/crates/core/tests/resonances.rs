mod common;

use common::{linspace, s_ptr_pair};
use locsym::{
    closed_form_l, compute_l, enumerate_cls_decompositions, ptr_scan, solve_scattering,
    Decomposition, Incidence, Parity, PotentialSpecF64, PtrClass,
};
use num_complex::Complex64;

/// Real/imaginary split of the sum rule over `u(x_0)^2 = |1 + r|^2`, in its commonly quoted form.
fn split_form(r: Complex64, k: f64, parity: Parity) -> Complex64 {
    let u2 = (r + 1.0).norm_sqr();
    let big_r = r.norm_sqr();
    match parity {
        Parity::Even => Complex64::new(2.0 * k * r.im / u2, -(2.0 * k * r.re + 2.0 * k * big_r) / u2),
        Parity::Odd => Complex64::new(2.0 * k * r.im / u2, (2.0 * k + 2.0 * k * big_r) / u2),
    }
}

#[test]
fn split_form_differs_from_closed_form() {
    let i2 = Complex64::new(0.0, 2.0);
    for &(re, im) in &[(0.1, 0.2), (-0.3, 0.4), (0.5, -0.1)] {
        let r = Complex64::new(re, im);
        let k = 2.5;
        // even: off by exactly 2i
        let even = closed_form_l(r, k, 0.0, Parity::Even).unwrap();
        assert!((split_form(r, k, Parity::Even) - i2 * even).norm() < 1e-12);
        // odd: the imaginary part carries 1 + R where 2i L has 1 + Re r
        let odd = closed_form_l(r, k, 0.0, Parity::Odd).unwrap();
        let split = split_form(r, k, Parity::Odd);
        assert!((split.re - (i2 * odd).re).abs() < 1e-12);
        assert!((split.im - (i2 * odd).im).abs() > 1e-3);
        assert!((split.im - 2.0 * k * (1.0 + r.norm_sqr()) / (r + 1.0).norm_sqr()).abs() < 1e-12);
    }
}

#[test]
fn s_ptr_pair_scan() {
    let spec = s_ptr_pair();
    let dec = Decomposition::from_boundaries(spec.boundaries()).unwrap();
    let recs = ptr_scan(&spec, &dec, &linspace(9.5, 10.5, 41), 1e-10).unwrap();
    let hit = recs.iter().find(|r| (r.energy - 10.0).abs() < 1e-4).unwrap();
    assert_eq!(hit.class, PtrClass::SPtr);
    assert!(hit.q_tilde_indicator.iter().all(|&g| g < 1e-8));
    assert!(hit.phase_residual.iter().all(|p| p.is_some_and(|v| v < 1e-8)));
    let sol = solve_scattering(&spec, hit.energy, Incidence::LeftUnit).unwrap();
    let vm = compute_l(&sol, &dec).unwrap().vm;
    // both units carry the same nonzero term, so the alternating sum cancels
    assert!((vm[0] - vm[1]).norm() < 1e-8 && vm[0].norm() > 0.1);
}

#[test]
fn fabry_perot_peak_is_asymmetric() {
    let spec = PotentialSpecF64::from_pairs(&[(0.5, 6.0), (1.0, 0.0), (0.5, 6.0)]).unwrap();
    let dec = Decomposition::from_boundaries(spec.boundaries()).unwrap();
    assert_eq!(dec.unit_count(), 3);
    let recs = ptr_scan(&spec, &dec, &linspace(0.5, 20.0, 400), 1e-10).unwrap();
    let ptrs: Vec<_> = recs.iter().filter(|r| 1.0 - r.transmission < 1e-10).collect();
    assert!(!ptrs.is_empty());
    for r in ptrs {
        assert_eq!(r.class, PtrClass::APtr, "energy {}", r.energy);
        assert!(r.per_unit_t.iter().any(|&t| t < 1.0 - 1e-8));
        // odd N: L = k at any PTR
        assert!((r.l - Complex64::new(r.energy.sqrt(), 0.0)).norm() < 1e-8 * r.energy.sqrt());
    }
}

#[test]
fn closed_form_holds_for_every_decomposition_at_a_ptr() {
    let spec = PotentialSpecF64::from_pairs(&[(0.5, 6.0), (1.0, 0.0), (0.5, 6.0)]).unwrap();
    let coarse = Decomposition::from_boundaries(spec.boundaries()).unwrap();
    let recs = ptr_scan(&spec, &coarse, &linspace(0.5, 20.0, 400), 1e-10).unwrap();
    let ptr = recs.iter().find(|r| 1.0 - r.transmission < 1e-10).unwrap();
    let sol = solve_scattering(&spec, ptr.energy, Incidence::LeftUnit).unwrap();
    let all = enumerate_cls_decompositions(&spec, 100);
    assert!(all.items.len() >= 2);
    for dec in &all.items {
        let res = compute_l(&sol, dec).unwrap();
        let expected = match res.parity {
            Parity::Even => Complex64::new(0.0, 0.0),
            Parity::Odd => Complex64::new(sol.k, 0.0),
        };
        assert!((res.l - expected).norm() < 1e-8 * sol.k, "N = {}", res.n);
    }
}

#[test]
fn closed_form_tracks_general_origin() {
    let spec = PotentialSpecF64::from_pairs(&[(0.5, 5.0), (0.8, 7.0806), (0.5, 5.0), (0.5, 5.0)])
        .unwrap()
        .translated(0.75);
    for dec in enumerate_cls_decompositions(&spec, 10).items {
        for e in [2.0, 6.5, 11.0] {
            let sol = solve_scattering(&spec, e, Incidence::LeftUnit).unwrap();
            let res = compute_l(&sol, &dec).unwrap();
            let closed = closed_form_l(sol.r.unwrap(), sol.k, spec.origin(), res.parity).unwrap();
            assert!((res.l - closed).norm() < 1e-9 * res.l.norm().max(1.0));
        }
    }
}

#[test]
fn free_unit_has_nonzero_term() {
    let spec = PotentialSpecF64::empty(0.0);
    let dec = Decomposition::from_boundaries(vec![0.0, 1.3]).unwrap();
    let sol = solve_scattering(&spec, 4.0, Incidence::LeftUnit).unwrap();
    let res = compute_l(&sol, &dec).unwrap();
    assert!(res.vm[0].norm() > 1.0);
    assert!((res.l - Complex64::new(2.0, 0.0)).norm() < 1e-12);
}
