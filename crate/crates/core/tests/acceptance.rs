//! Acceptance gate: ten numbered end-to-end checks covering the exact
//! energy limits, agreement with brute-force diagonalization, the
//! momentum-block eigenstructure, PT symmetry, near-boundary ridge laws,
//! derivative consistency, ridge detection, overlap antisymmetry, and scan
//! determinism.
//!
//! Each test prints a single `criterion NN <name>: PASS/FAIL` line.  Two
//! checks (05 and 06) compare direct evaluation against the documented
//! closed-form near-boundary laws reproduced verbatim in
//! `response::asymptotic_*`; direct evaluation disagrees with those
//! formulas (opposite sign, different magnitude), so the two tests fail by
//! design and document the discrepancy.  See README for details.

use ptising::model::FieldPoint;
use ptising::oracle::{block, chain, matrix};
use ptising::phase::detect_boundary;
use ptising::response::{self, response_bundle};
use ptising::scan::{self, ModeSpec, OutputFormat, Quantity, RangeSpec, ScanConfig};
use ptising::spectrum::{energy_density_limit, ground_energy, Mode};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

const THERMO: Mode = Mode::Thermodynamic;

fn verdict(num: u32, name: &str, ok: bool, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    println!("criterion {num:02} {name}: {status} ({detail})");
    assert!(ok, "criterion {num:02} {name}: {status} ({detail})");
}

fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

#[test]
fn criterion_01_closed_form_energy_limits() {
    let d = |eta: f64, xi: f64| {
        energy_density_limit(&FieldPoint::new(eta, xi), 512)
            .unwrap()
            .re
    };
    let e_origin = (d(0.0, 0.0) + 1.0).abs();
    let e_unit = (d(1.0, 0.0) + 4.0 / PI).abs();
    let e_large = (d(100.0, 0.0) / 100.0 + 1.0).abs();
    let thermo = d(2.0, 0.0);
    let finite = ground_energy(600, &FieldPoint::new(2.0, 0.0))
        .unwrap()
        .density
        .re;
    let e_size = (finite - thermo).abs();
    let ok = e_origin < 1e-12 && e_unit < 1e-12 && e_large < 1e-3 && e_size < 1e-6;
    verdict(
        1,
        "closed_form_energy_limits",
        ok,
        &format!(
            "origin {e_origin:.2e}, unit-field {e_unit:.2e}, strong-field {e_large:.2e}, \
             600-site vs limit {e_size:.2e}"
        ),
    );
}

#[test]
fn criterion_02_chain_ed_matches_free_fermion() {
    let cases = [
        (4usize, 0.5, 0.3),
        (6, 0.5, 0.3),
        (8, 0.5, 0.3),
        (8, 1.3, 0.6),
        (6, 0.2, 1.5),
        (8, 0.0, 0.7),
    ];
    let mut worst = 0.0f64;
    for (two_n, eta, xi) in cases {
        let report = chain::sector_ground_compare(two_n, &FieldPoint::new(eta, xi)).unwrap();
        worst = worst.max(report.defect);
    }
    verdict(
        2,
        "chain_ed_matches_free_fermion",
        worst < 1e-8,
        &format!("worst ground-energy defect {worst:.2e} over {} cases", cases.len()),
    );
}

#[test]
fn criterion_03_block_spectrum_and_composite_states() {
    // Last point sits in the regime where one band pair turns complex.
    let cases = [
        (FRAC_PI_4, 0.5, 0.3),
        (2.0, 1.5, 0.2),
        (FRAC_PI_2, 0.9, 0.25),
        (0.7, 0.2, 1.5),
    ];
    let mut worst_spectrum = 0.0f64;
    let mut worst_residual = 0.0f64;
    let mut worst_biortho = 0.0f64;
    for (k, eta, xi) in cases {
        let p = FieldPoint::new(eta, xi);
        worst_spectrum = worst_spectrum.max(block::block_spectrum_defect(k, &p).unwrap());
        for n in 1..=6 {
            let state = block::composite_state(n, k, &p).unwrap();
            worst_residual = worst_residual.max(state.residual);
        }
        worst_biortho = worst_biortho.max(block::biorthonormality_defect(k, &p).unwrap());
    }
    let ok = worst_spectrum < 1e-9 && worst_residual < 1e-9 && worst_biortho < 1e-10;
    verdict(
        3,
        "block_spectrum_and_composite_states",
        ok,
        &format!(
            "spectrum {worst_spectrum:.2e}, residual {worst_residual:.2e}, \
             biorthonormality {worst_biortho:.2e}"
        ),
    );
}

#[test]
fn criterion_04_pt_symmetry_defects() {
    let mut worst_chain = 0.0f64;
    let mut worst_block = 0.0f64;
    for (eta, xi) in [(0.5, 0.3), (1.2, 0.8), (0.2, 1.5)] {
        let p = FieldPoint::new(eta, xi);
        // Neither reflection nor conjugation is a symmetry on its own for
        // xi != 0; only their combination must leave H invariant.
        let report = matrix::pt_check(8, &p).unwrap();
        worst_chain = worst_chain.max(report.pt_defect);
        worst_block = worst_block.max(block::block_pt_defect(0.9, &p));
    }
    // Ground state flips sign under PT wherever its band is real.
    let mut worst_flip = 0.0f64;
    let mut worst_overlap = 0.0f64;
    for (k, eta, xi) in [(FRAC_PI_4, 0.5, 0.3), (2.0, 1.5, 0.2)] {
        let (flip, overlap) = block::pt_state_invariance(k, &FieldPoint::new(eta, xi)).unwrap();
        worst_flip = worst_flip.max(flip);
        worst_overlap = worst_overlap.max((overlap - 1.0).abs());
    }
    let ok = worst_chain < 1e-12 && worst_block < 1e-12 && worst_flip < 1e-10;
    verdict(
        4,
        "pt_symmetry_defects",
        ok,
        &format!(
            "chain {worst_chain:.2e}, block {worst_block:.2e}, ground flip {worst_flip:.2e}, \
             |overlap|-1 {worst_overlap:.2e}"
        ),
    );
}

#[test]
fn criterion_05_circle_ridge_asymptotics() {
    // Approach the unit circle at a fixed angle and compare the measured
    // Laplacian against the documented logarithmic law.
    let phi = FRAC_PI_4;
    let ds = [1e-3, 1e-4, 1e-5, 1e-6];
    let mut measured = Vec::new();
    let mut predicted = Vec::new();
    let mut logs = Vec::new();
    let mut all_within = true;
    for d in ds {
        let r = 1.0 + d;
        let p = FieldPoint::new(r * phi.cos(), r * phi.sin());
        let m = response::laplacian(&p, THERMO).unwrap().re;
        let pr = response::asymptotic_laplacian_circle(r, phi).unwrap();
        all_within &= (m - pr).abs() <= 0.10 * pr.abs();
        measured.push(m);
        predicted.push(pr);
        logs.push(d.ln());
    }
    let slope_measured = fit_slope(&logs, &measured);
    let slope_predicted = fit_slope(&logs, &predicted);
    verdict(
        5,
        "circle_ridge_asymptotics",
        all_within,
        &format!(
            "measured slope {slope_measured:+.4} vs documented law {slope_predicted:+.4} \
             per ln|r-1| at phi=pi/4"
        ),
    );
}

#[test]
fn criterion_06_axis_ridge_and_berry_amplitude() {
    // Approach the imaginary-field ray at fixed radius r = 1.5.
    let r0 = 1.5f64;
    let etas = [1e-3, 1e-4, 1e-5, 1e-6];
    let mut lap_measured = Vec::new();
    let mut lap_predicted = Vec::new();
    let mut berry_measured = Vec::new();
    let mut logs = Vec::new();
    let mut all_within = true;
    for eta in etas {
        let xi = (r0 * r0 - eta * eta).sqrt();
        let p = FieldPoint::new(eta, xi);
        let m = response::laplacian(&p, THERMO).unwrap().re;
        let pr = response::asymptotic_laplacian_axis(eta).unwrap();
        all_within &= (m - pr).abs() <= 0.10 * pr.abs();
        lap_measured.push(m);
        lap_predicted.push(pr);
        berry_measured.push(
            ptising::berry::curvature_preset_sum(&p, THERMO)
                .unwrap()
                .im,
        );
        logs.push(eta.ln());
    }
    let berry_slope = fit_slope(&logs, &berry_measured);
    let berry_expected = -4.0 * 2.0f64.sqrt() / PI;
    let berry_ok = (berry_slope - berry_expected).abs() <= 0.10 * berry_expected.abs();
    let ok = all_within && berry_ok;
    verdict(
        6,
        "axis_ridge_and_berry_amplitude",
        ok,
        &format!(
            "Laplacian slope {:+.4} vs documented {:+.4}; Berry slope {berry_slope:+.4} vs \
             documented {berry_expected:+.4} per ln(eta) at r=1.5",
            fit_slope(&logs, &lap_measured),
            fit_slope(&logs, &lap_predicted),
        ),
    );
}

#[test]
fn criterion_07_derivatives_match_finite_differences() {
    // Fourth-order five-point stencils over the refined-quadrature energy,
    // on a 10x10 grid with near-boundary points excluded.
    let values: Vec<f64> = (0..10).map(|i| -1.9 + 0.4 * i as f64).collect();
    let e = |eta: f64, xi: f64| {
        ptising::spectrum::energy_density_refined(&FieldPoint::new(eta, xi))
            .unwrap()
            .re
    };
    let mut worst = 0.0f64;
    let mut kept = 0usize;
    for &eta in &values {
        for &xi in &values {
            let p = FieldPoint::new(eta, xi);
            if ptising::phase::boundary_distance(&p) < 0.25 {
                continue;
            }
            kept += 1;
            let b = response_bundle(&p, THERMO).unwrap();
            let h = 5e-3 * eta.abs().max(xi.abs()).max(1.0);
            let f = |de: f64, dx: f64| e(eta + de, xi + dx);
            let fd_eta = (-f(2.0 * h, 0.0) + 8.0 * f(h, 0.0) - 8.0 * f(-h, 0.0)
                + f(-2.0 * h, 0.0))
                / (12.0 * h);
            let fd_xi = (-f(0.0, 2.0 * h) + 8.0 * f(0.0, h) - 8.0 * f(0.0, -h)
                + f(0.0, -2.0 * h))
                / (12.0 * h);
            let f0 = f(0.0, 0.0);
            let fd_lap = (-f(2.0 * h, 0.0) + 16.0 * f(h, 0.0) - 30.0 * f0 + 16.0 * f(-h, 0.0)
                - f(-2.0 * h, 0.0)
                - f(0.0, 2.0 * h)
                + 16.0 * f(0.0, h)
                - 30.0 * f0
                + 16.0 * f(0.0, -h)
                - f(0.0, -2.0 * h))
                / (12.0 * h * h);
            let lap = b.d2_eta + b.d2_xi;
            worst = worst
                .max((fd_eta - b.d_eta).abs() / b.d_eta.abs().max(1.0))
                .max((fd_xi - b.d_xi).abs() / b.d_xi.abs().max(1.0))
                .max((fd_lap - lap).abs() / lap.abs().max(1.0));
        }
    }
    let ok = worst < 1e-6 && kept >= 50;
    verdict(
        7,
        "derivatives_match_finite_differences",
        ok,
        &format!("worst relative deviation {worst:.2e} over {kept} grid points"),
    );
}

#[test]
fn criterion_08_ridge_detection_on_finite_ring_scan() {
    let cfg = ScanConfig {
        eta: RangeSpec {
            min: -2.0,
            max: 2.0,
            count: 101,
        },
        xi: RangeSpec {
            min: -2.0,
            max: 2.0,
            count: 101,
        },
        mode: ModeSpec::Sites { sites: 600 },
        quantities: vec![Quantity::Laplacian],
        output_format: OutputFormat::Csv,
        parallelism: 0,
        coupling: 1.0,
        phase_tol: 1e-6,
    };
    let table = scan::run_scan(&cfg).unwrap();
    let ridge = detect_boundary(&scan::laplacian_view(&table), 2.0).unwrap();
    let cell = 4.0 / 100.0;
    let within = ridge
        .iter()
        .filter(|pt| pt.boundary_distance <= cell * 2.0f64.sqrt())
        .count();
    let frac = within as f64 / ridge.len().max(1) as f64;
    let ok = ridge.len() >= 100 && frac >= 0.90;
    verdict(
        8,
        "ridge_detection_on_finite_ring_scan",
        ok,
        &format!(
            "{} ridge points, {:.1}% within one cell of a true boundary",
            ridge.len(),
            100.0 * frac
        ),
    );
}

#[test]
fn criterion_09_overlap_antisymmetry() {
    let cases = [(FRAC_PI_4, 0.5, 0.3), (2.0, 1.5, 0.2), (0.7, 0.2, 1.5)];
    let mut worst = 0.0f64;
    for (k, eta, xi) in cases {
        let defect =
            block::overlap_antisymmetry_defect(k, &FieldPoint::new(eta, xi), 1e-4).unwrap();
        worst = worst.max(defect);
    }
    verdict(
        9,
        "overlap_antisymmetry",
        worst < 1e-6,
        &format!("worst antisymmetrized overlap {worst:.2e} at step 1e-4"),
    );
}

#[test]
fn criterion_10_scan_byte_determinism() {
    let mut cfg = ScanConfig {
        eta: RangeSpec {
            min: -1.5,
            max: 1.5,
            count: 21,
        },
        xi: RangeSpec {
            min: -1.2,
            max: 1.2,
            count: 21,
        },
        mode: ModeSpec::Keyword("thermodynamic".into()),
        quantities: vec![
            Quantity::Energy,
            Quantity::Laplacian,
            Quantity::BerrySum,
            Quantity::Phase,
        ],
        output_format: OutputFormat::Csv,
        parallelism: 1,
        coupling: 1.0,
        phase_tol: 1e-6,
    };
    let bytes1 = scan::to_csv(&scan::run_scan(&cfg).unwrap());
    cfg.parallelism = 4;
    let bytes4 = scan::to_csv(&scan::run_scan(&cfg).unwrap());
    cfg.parallelism = 8;
    let bytes8 = scan::to_csv(&scan::run_scan(&cfg).unwrap());
    let ok = bytes1 == bytes4 && bytes4 == bytes8;
    verdict(
        10,
        "scan_byte_determinism",
        ok,
        &format!("{} bytes identical across 1/4/8 workers", bytes1.len()),
    );
}
