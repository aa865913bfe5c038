use locsym::io::{invariant_csv_row, INVARIANT_CSV_HEADER};
use locsym::sumrule::{sum_rule_at, CLASSIFY_TOL};
use locsym::{
    check_symmetry, classify_ptr, compute_invariants, detect_symmetric_domains,
    enumerate_cls_decompositions, map_derivative, map_field, ptr_scan, solve_scattering, total_tm,
    unit_tm_via_invariants, z_phase_check, Decomposition, Domain, Incidence, InvariantSetF64,
    Parity, PotentialSpecF64, PtrClass, PtrRecordF64, SymmetryKind, SymmetryTransform,
    TransferMatrixF64,
};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{
    CommonArgs, DecomposeArgs, GridArgs, IncidenceArg, InvariantsArgs, MapArgs, PtrscanArgs,
    SolveArgs, SpectrumArgs, TmArgs,
};
use crate::report::{csv_table, emit, floats, json_report, load_potential, CliError, CliResult};

fn physics(msg: impl Into<String>) -> CliError {
    CliError::Physics(msg.into())
}

fn check_energy(e: f64) -> CliResult<()> {
    if e.is_finite() && e > 0.0 {
        Ok(())
    } else {
        Err(physics(format!("energy must be positive and finite (got {e})")))
    }
}

fn energy_grid(emin: f64, emax: f64, steps: usize) -> CliResult<Vec<f64>> {
    if steps == 0 {
        return Err(physics("--steps must be at least 1"));
    }
    check_energy(emin)?;
    check_energy(emax)?;
    if emax < emin {
        return Err(physics(format!("--emax ({emax}) is below --emin ({emin})")));
    }
    if steps == 1 {
        return Ok(vec![emin]);
    }
    let span = emax - emin;
    Ok((0..steps)
        .map(|i| emin + span * i as f64 / (steps - 1) as f64)
        .collect())
}

fn grid(g: &GridArgs) -> CliResult<Vec<f64>> {
    energy_grid(g.emin, g.emax, g.steps)
}

/// Worker pool honoring `LOCSYM_THREADS`.
fn pool() -> CliResult<rayon::ThreadPool> {
    let threads = std::env::var("LOCSYM_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Io(format!("thread pool: {e}")))
}

fn incidence(arg: IncidenceArg) -> Incidence<f64> {
    match arg {
        IncidenceArg::Left => Incidence::LeftUnit,
        IncidenceArg::Right => Incidence::RightUnit,
        IncidenceArg::Both => Incidence::TwoSided {
            left: Complex64::new(1.0, 0.0),
            right: Complex64::new(1.0, 0.0),
        },
    }
}

fn decomposition(spec: &PotentialSpecF64, index: usize) -> CliResult<Decomposition<f64>> {
    let found = enumerate_cls_decompositions(spec, index.saturating_add(1));
    let count = found.items.len();
    found.items.into_iter().nth(index).ok_or_else(|| {
        physics(format!(
            "decomposition {index} does not exist ({count} found; the landscape may not be completely locally symmetric)"
        ))
    })
}

fn require_symmetry(
    spec: &PotentialSpecF64,
    domain: &Domain<f64>,
    t: &SymmetryTransform<f64>,
    advisory: bool,
) -> CliResult<bool> {
    let ok = check_symmetry(spec, domain, t);
    if !ok && !advisory {
        return Err(physics(format!(
            "potential is not symmetric on [{}, {}] under x -> {} x + {} (use --advisory to proceed)",
            domain.a,
            domain.b,
            t.sigma(),
            t.rho()
        )));
    }
    Ok(ok)
}

fn out_path(c: &CommonArgs) -> Option<&std::path::Path> {
    c.out.as_deref()
}

pub fn solve(a: &SolveArgs) -> CliResult<()> {
    let loaded = load_potential(&a.common.potential)?;
    check_energy(a.energy)?;
    if a.samples < 2 {
        return Err(physics("--samples must be at least 2"));
    }
    if !(a.pad.is_finite() && a.pad >= 0.0) {
        return Err(physics("--pad must be non-negative"));
    }
    let sol = solve_scattering(&loaded.spec, a.energy, incidence(a.incidence))?;
    let (lo, hi) = (loaded.spec.origin() - a.pad, loaded.spec.end() + a.pad);
    let hi = if hi > lo { hi } else { lo + 1.0 };
    let rows: Vec<Vec<String>> = (0..a.samples)
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / (a.samples - 1) as f64;
            let (f, _) = sol.field_at(x);
            floats(&[x, f.re, f.im, f.norm(), f.arg()])
        })
        .collect();
    emit(out_path(&a.common), &csv_table(&["x", "ReA", "ImA", "absA", "phi"], &rows)?)
}

struct SpectrumRow {
    t: f64,
    r: f64,
    sums: Vec<Option<(Complex64, usize, PtrClass)>>,
}

fn spectrum_point(
    spec: &PotentialSpecF64,
    decs: &[Decomposition<f64>],
    e: f64,
    tol: f64,
) -> CliResult<SpectrumRow> {
    let m = total_tm(spec, e)?;
    let (t, r) = (m.transmission(), m.reflection());
    let sums = decs
        .iter()
        .map(|dec| {
            let (sol, l) = sum_rule_at(spec, dec, e)?;
            let class = if 1.0 - t > tol {
                PtrClass::NotPtr
            } else {
                classify_ptr(&sol, dec, CLASSIFY_TOL)?.class
            };
            Ok(Some((l, dec.unit_count(), class)))
        })
        .collect::<locsym::Result<Vec<_>>>()?;
    Ok(SpectrumRow { t, r, sums })
}

pub fn spectrum(a: &SpectrumArgs) -> CliResult<()> {
    let loaded = load_potential(&a.common.potential)?;
    let energies = grid(&a.grid)?;
    let indices = if a.decomposition.is_empty() {
        let any = !enumerate_cls_decompositions(&loaded.spec, 1).items.is_empty();
        if any { vec![0] } else { Vec::new() }
    } else {
        a.decomposition.clone()
    };
    let decs = indices
        .iter()
        .map(|&i| decomposition(&loaded.spec, i))
        .collect::<CliResult<Vec<_>>>()?;
    let points = pool()?.install(|| {
        energies
            .par_iter()
            .map(|&e| spectrum_point(&loaded.spec, &decs, e, a.tol))
            .collect::<CliResult<Vec<_>>>()
    })?;
    let mut rows = Vec::new();
    for (&e, p) in energies.iter().zip(&points) {
        let head = floats(&[e, p.t, p.r]);
        if p.sums.is_empty() {
            let mut row = head.clone();
            row.extend(std::iter::repeat_n(String::new(), 6));
            rows.push(row);
        }
        for (idx, s) in indices.iter().zip(&p.sums) {
            let mut row = head.clone();
            if let Some((l, n, class)) = s {
                row.extend(floats(&[l.norm(), l.re, l.im]));
                row.push(n.to_string());
                row.push(class.as_str().to_string());
            }
            row.push(idx.to_string());
            rows.push(row);
        }
    }
    let header = ["epsilon", "T", "R", "absL", "ReL", "ImL", "N", "class", "decomposition"];
    emit(out_path(&a.common), &csv_table(&header, &rows)?)
}

#[derive(Serialize)]
struct DomainReport {
    kind: SymmetryKind,
    domain: Domain<f64>,
    sigma: f64,
    rho: f64,
    axis: Option<f64>,
    length: Option<f64>,
    span: Domain<f64>,
    gapped: bool,
}

pub fn detect(a: &CommonArgs) -> CliResult<()> {
    let loaded = load_potential(&a.potential)?;
    let report: Vec<DomainReport> = detect_symmetric_domains(&loaded.spec)
        .into_iter()
        .map(|s| DomainReport {
            kind: s.transform.kind(),
            domain: s.domain,
            sigma: s.transform.sigma(),
            rho: s.transform.rho(),
            axis: s.transform.axis(),
            length: s.transform.length(),
            span: s.span(),
            gapped: s.is_gapped(),
        })
        .collect();
    emit(out_path(a), &json_report(&loaded, &report))
}

#[derive(Serialize)]
struct DecompositionReport {
    index: usize,
    n: usize,
    parity: Parity,
    boundaries: Vec<f64>,
}

#[derive(Serialize)]
struct DecomposeReport {
    count: usize,
    truncated: bool,
    decompositions: Vec<DecompositionReport>,
}

pub fn decompose(a: &DecomposeArgs) -> CliResult<()> {
    let loaded = load_potential(&a.common.potential)?;
    let found = enumerate_cls_decompositions(&loaded.spec, a.max_count);
    let decompositions: Vec<DecompositionReport> = found
        .items
        .into_iter()
        .enumerate()
        .map(|(index, d)| DecompositionReport {
            index,
            n: d.unit_count(),
            parity: d.parity(),
            boundaries: d.boundaries,
        })
        .collect();
    let report = DecomposeReport {
        count: decompositions.len(),
        truncated: found.truncated,
        decompositions,
    };
    emit(out_path(&a.common), &json_report(&loaded, &report))
}

#[derive(Serialize)]
struct InvariantReport {
    symmetric: bool,
    invariants: InvariantSetF64,
    identity_residual: f64,
    g_current_residual: f64,
}

pub fn invariants(a: &InvariantsArgs) -> CliResult<()> {
    let loaded = load_potential(&a.common.potential)?;
    check_energy(a.energy)?;
    let pairs: Vec<(Domain<f64>, SymmetryTransform<f64>, bool)> =
        match (a.symmetry.domain, a.symmetry.transform) {
            (Some(d), Some(t)) => {
                let ok = require_symmetry(&loaded.spec, &d, &t, a.symmetry.advisory)?;
                vec![(d, t, ok)]
            }
            _ => detect_symmetric_domains(&loaded.spec)
                .into_iter()
                .map(|s| (s.domain, s.transform, true))
                .collect(),
        };
    let sol = solve_scattering(&loaded.spec, a.energy, incidence(a.incidence))?;
    let reports = pairs
        .iter()
        .map(|(d, t, ok)| {
            let inv = compute_invariants(&sol, d, t, a.samples)?;
            Ok(InvariantReport {
                symmetric: *ok,
                identity_residual: inv.identity_residual(),
                g_current_residual: inv.g_current_residual(),
                invariants: inv,
            })
        })
        .collect::<locsym::Result<Vec<_>>>()?;
    let text = if a.csv {
        let rows: Vec<Vec<String>> = reports.iter().map(|r| invariant_csv_row(&r.invariants)).collect();
        csv_table(&INVARIANT_CSV_HEADER, &rows)?
    } else {
        json_report(&loaded, &reports)
    };
    emit(out_path(&a.common), &text)
}

#[derive(Serialize)]
struct MapSample {
    x: f64,
    x_bar: f64,
    field: Complex64,
    mapped_field: Complex64,
    direct_field: Complex64,
    mapped_derivative: Complex64,
    direct_derivative: Complex64,
}

#[derive(Serialize)]
struct MapReport {
    symmetric: bool,
    invariants: InvariantSetF64,
    max_field_error: f64,
    max_derivative_error: f64,
    samples: Vec<MapSample>,
}

pub fn map(a: &MapArgs) -> CliResult<()> {
    let loaded = load_potential(&a.common.potential)?;
    check_energy(a.energy)?;
    if a.samples < 2 {
        return Err(physics("--samples must be at least 2"));
    }
    let symmetric = require_symmetry(&loaded.spec, &a.domain, &a.transform, a.advisory)?;
    let sol = solve_scattering(&loaded.spec, a.energy, incidence(a.incidence))?;
    let inv = compute_invariants(&sol, &a.domain, &a.transform, a.samples)?;
    let samples = a
        .domain
        .sample_points(a.samples)
        .into_iter()
        .map(|x| {
            let (f, df) = sol.field_at(x);
            let x_bar = a.transform.apply(x);
            let (g, dg) = sol.field_at(x_bar);
            Ok(MapSample {
                x,
                x_bar,
                field: f,
                mapped_field: map_field(f, &inv)?,
                direct_field: g,
                mapped_derivative: map_derivative(df, &inv)?,
                direct_derivative: dg,
            })
        })
        .collect::<locsym::Result<Vec<_>>>()?;
    let max_err = |p: fn(&MapSample) -> Complex64, q: fn(&MapSample) -> Complex64| {
        samples.iter().fold(0.0f64, |m, s| m.max((p(s) - q(s)).norm()))
    };
    let report = MapReport {
        symmetric,
        max_field_error: max_err(|s| s.mapped_field, |s| s.direct_field),
        max_derivative_error: max_err(|s| s.mapped_derivative, |s| s.direct_derivative),
        invariants: inv,
        samples,
    };
    emit(out_path(&a.common), &json_report(&loaded, &report))
}

#[derive(Serialize)]
struct TmReport {
    energy: f64,
    direct: TransferMatrixF64,
    transmission: f64,
    reflection: f64,
    via_invariants: Option<TransferMatrixF64>,
    max_abs_diff: Option<f64>,
    z_phase_deviation: Option<f64>,
}

fn axis_of(spec: &PotentialSpecF64) -> f64 {
    (spec.origin() + spec.end()) / 2.0
}

fn z_phase(spec: &PotentialSpecF64, m: &TransferMatrixF64, e: f64) -> Option<f64> {
    let whole = Domain::new(spec.origin(), spec.end()).ok()?;
    if !check_symmetry(spec, &whole, &SymmetryTransform::reflection(axis_of(spec))) || m.z.norm() <= 1e-8 {
        return None;
    }
    z_phase_check(m, axis_of(spec), e.sqrt()).ok()
}

fn tm_point(spec: &PotentialSpecF64, e: f64, via: bool) -> CliResult<TmReport> {
    let direct = total_tm(spec, e)?;
    let rebuilt = if via { Some(unit_tm_via_invariants(spec, e)?) } else { None };
    Ok(TmReport {
        energy: e,
        transmission: direct.transmission(),
        reflection: direct.reflection(),
        max_abs_diff: rebuilt.map(|r| r.max_abs_diff(&direct)),
        z_phase_deviation: z_phase(spec, &direct, e),
        via_invariants: rebuilt,
        direct,
    })
}

pub fn tm(a: &TmArgs) -> CliResult<()> {
    let loaded = load_potential(&a.common.potential)?;
    if let Some(e) = a.energy {
        check_energy(e)?;
        let report = tm_point(&loaded.spec, e, a.via_invariants)?;
        return emit(out_path(&a.common), &json_report(&loaded, &report));
    }
    let (Some(emin), Some(emax), Some(steps)) = (a.emin, a.emax, a.steps) else {
        return Err(physics("tm needs --energy or --emin/--emax/--steps"));
    };
    let energies = energy_grid(emin, emax, steps)?;
    let points = pool()?.install(|| {
        energies
            .par_iter()
            .map(|&e| tm_point(&loaded.spec, e, a.via_invariants))
            .collect::<CliResult<Vec<_>>>()
    })?;
    let mut header = vec!["epsilon", "Rew", "Imw", "Rez", "Imz", "phase_deviation"];
    if a.via_invariants {
        header.push("max_abs_diff");
    }
    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|p| {
            let mut row = floats(&[p.energy, p.direct.w.re, p.direct.w.im, p.direct.z.re, p.direct.z.im]);
            row.push(p.z_phase_deviation.map(locsym::io::format_float).unwrap_or_default());
            if let Some(d) = p.max_abs_diff {
                row.push(locsym::io::format_float(d));
            }
            row
        })
        .collect();
    emit(out_path(&a.common), &csv_table(&header, &rows)?)
}

#[derive(Serialize)]
struct PtrscanReport {
    decomposition: DecompositionReport,
    tol: f64,
    records: Vec<PtrRecordF64>,
}

pub fn ptrscan(a: &PtrscanArgs) -> CliResult<()> {
    let loaded = load_potential(&a.common.potential)?;
    let energies = grid(&a.grid)?;
    if !(a.tol.is_finite() && a.tol > 0.0) {
        return Err(physics("--tol must be positive"));
    }
    let dec = decomposition(&loaded.spec, a.decomposition)?;
    let records = pool()?.install(|| ptr_scan(&loaded.spec, &dec, &energies, a.tol))?;
    let report = PtrscanReport {
        decomposition: DecompositionReport {
            index: a.decomposition,
            n: dec.unit_count(),
            parity: dec.parity(),
            boundaries: dec.boundaries.clone(),
        },
        tol: a.tol,
        records,
    };
    emit(out_path(&a.common), &json_report(&loaded, &report))
}
