use std::f64::consts::TAU;

use kickband::floquet::{self, OperatorFamily, OperatorKind};
use kickband::monodromy::{self, ReducedOperator, TrackOptions};
use kickband::newton;
use kickband::poly::{self, ComplexPoly, SeriesPoly};
use kickband::series::TruncatedSeries;
use kickband::spectra::{self, Space, SpectrumOptions};
use kickband::Complex64;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[test]
fn tracked_paths_are_roots_of_the_reduced_polynomial() {
    let fam = OperatorFamily::ordkr(2, 5, 0.7).unwrap();
    let tp = monodromy::track_roots(&ReducedOperator { family: fam }, &TrackOptions { initial_grid: 64, ..Default::default() }).unwrap();
    for k in [0, 7, 31, 50] {
        let idx = tp.uniform[k];
        let s = tp.s_grid[idx];
        let p = ComplexPoly::new(floquet::reduced_poly(&fam, s).unwrap());
        for path in &tp.paths {
            assert!(p.eval(path[idx]).norm() < 1e-10);
        }
    }
}

#[test]
fn harper_half_flux_matches_closed_form() {
    // q = 2: E² = 4λ²cos²2πθ + |1 + e^{2πit}|², so the θ, t union is [−2√2, 2√2]
    let fam = OperatorFamily::harper(1, 2, 1.0, 0.0).unwrap();
    let opts = SpectrumOptions {
        t_grid: 256,
        theta_grid: Some(64),
        gap_tol: Some(1e-2),
        t_period: 1.0,
    };
    let b = spectra::spectrum_union(&fam, &opts).unwrap();
    assert_eq!(b.space, Space::Line);
    assert_eq!(b.count(), 1);
    let edge = 8f64.sqrt();
    assert!((b.intervals[0].0 + edge).abs() < 1e-9);
    assert!((b.intervals[0].1 - edge).abs() < 1e-9);
}

#[test]
fn every_sampled_phase_lies_in_the_union() {
    let fam = OperatorFamily::new(OperatorKind::Kh, 3, 5, 1.0, 1.0, 0.0).unwrap();
    let opts = SpectrumOptions { t_grid: 128, ..Default::default() };
    let b = spectra::spectrum_union(&fam, &opts).unwrap();
    for row in spectra::spectrum_rows(&fam, &opts).unwrap() {
        for x in row {
            assert!(b.contains(x), "{x}");
        }
    }
}

#[test]
fn series_json_feeds_the_newton_tools() {
    let n = 12;
    let s = TruncatedSeries::variable(0.0, n).scale(c(TAU)).sin();
    let q = SeriesPoly::monic(vec![
        s.mul(&s).unwrap().neg(),
        TruncatedSeries::zero(0.0, n),
        TruncatedSeries::one(0.0, n),
    ])
    .unwrap();
    let text = serde_json::to_string(&q).unwrap();
    let back: SeriesPoly = serde_json::from_str(&text).unwrap();
    assert_eq!(back, q);
    let poly = newton::newton_polygon(&back).unwrap();
    assert_eq!(poly.hull_vertices, vec![(0, 2), (2, 0)]);
    let class = newton::quadratic_cr_classify(&back).unwrap();
    assert_eq!(class.k, 2);
}

#[test]
fn series_discriminant_matches_pointwise_discriminant() {
    let n = 16;
    let t = TruncatedSeries::variable(0.0, n);
    let q0 = t.scale(Complex64::new(0.0, TAU)).exp().neg();
    let q1 = t.scale(c(0.5));
    let q = SeriesPoly::monic(vec![q0, q1, TruncatedSeries::one(0.0, n)]).unwrap();
    let d = poly::series_poly_discriminant(&q).unwrap();
    for dt in [0.0, 0.01, -0.02] {
        let pointwise = poly::discriminant(&q.eval_t(c(dt))).unwrap();
        assert!((d.eval(c(dt)) - pointwise).norm() < 1e-9);
    }
}

#[test]
fn hensel_on_a_series_input() {
    // z² − e^{2πit} has simple roots ±1 at t = 0
    let n = 16;
    let t = TruncatedSeries::variable(0.0, n);
    let q = SeriesPoly::monic(vec![
        t.scale(Complex64::new(0.0, TAU)).exp().neg(),
        TruncatedSeries::zero(0.0, n),
        TruncatedSeries::one(0.0, n),
    ])
    .unwrap();
    let f = newton::hensel_split(|dt| q.eval_t(c(dt)), &Default::default()).unwrap();
    assert_eq!(f.clusters.len(), 2);
    assert!(f.clusters.iter().all(|cl| cl.multiplicity == 1));
    for (s, &dt) in f.sample_ts.iter().enumerate() {
        let root = Complex64::from_polar(1.0, std::f64::consts::PI * dt);
        let roots: Vec<Complex64> = f.factors[s].iter().map(|p| -p.coeff(0)).collect();
        assert!(roots.iter().any(|r| (r - root).norm() < 1e-8));
        assert!(roots.iter().any(|r| (r + root).norm() < 1e-8));
    }
}
