//! Invariant suite behind `kickband verify`.
//!
//! Every check is deterministic for a given seed, and the report contains
//! no timings, so reports can be compared byte for byte.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use clap::ValueEnum;
use kickband::floquet::{self, OperatorFamily, OperatorKind};
use kickband::linalg;
use kickband::monodromy::{self, PolyFamily, ReducedOperator, TrackOptions};
use kickband::newton::{self, HenselOptions, QuadraticType};
use kickband::poly::{self, ComplexPoly, SeriesPoly};
use kickband::series::TruncatedSeries;
use kickband::spectra::{self, SpectrumOptions};
use kickband::{Complex64, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Core,
    Full,
}

pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub struct Report {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let suite = match self.suite {
            Suite::Core => "core",
            Suite::Full => "full",
        };
        let mut out = format!("verify suite={suite} seed={}\n", self.seed);
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{tag} {}: {}", c.name, c.detail);
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(out, "{passed}/{} checks passed", self.checks.len());
        out
    }
}

type Check = fn(&mut ChaCha8Rng) -> Result<(bool, String)>;

const CORE: [(&str, Check); 15] = [
    ("unitarity", unitarity),
    ("gauss-circulant", gauss_circulant),
    ("zero-kick-identity", zero_kick),
    ("coefficient-period", coefficient_period),
    ("quadratic-discriminant", quadratic_discriminant),
    ("resultant-dichotomy", resultant_dichotomy),
    ("series-ord-additivity", series_ord),
    ("harper-band-parity", harper_parity),
    ("double-kick-bands", ordkr_bands_small),
    ("monodromy-identity", monodromy_identity),
    ("monodromy-transposition", monodromy_transposition),
    ("newton-polygon", newton_polygon),
    ("quadratic-classifier", quadratic_classifier),
    ("hensel-split", hensel),
    ("unitary-kicked-harper", uh_kh),
];

const FULL: [(&str, Check); 6] = [
    ("double-kick-bands-wide", ordkr_bands_wide),
    ("monodromy-homotopy", monodromy_homotopy),
    ("projection-invariance", projection_invariance),
    ("discriminant-multiplicity", discriminant_multiplicity),
    ("hausdorff-convergence", hausdorff_convergence),
    ("band-measure-decrease", band_measure_decrease),
];

pub fn run(suite: Suite, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let list: Vec<&(&str, Check)> = match suite {
        Suite::Core => CORE.iter().collect(),
        Suite::Full => CORE.iter().chain(FULL.iter()).collect(),
    };
    let checks = list
        .into_iter()
        .map(|(name, f)| match f(&mut rng) {
            Ok((passed, detail)) => CheckResult { name, passed, detail },
            Err(e) => CheckResult {
                name,
                passed: false,
                detail: format!("error {}: {e}", e.code()),
            },
        })
        .collect();
    Report { suite, seed, checks }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

const PAIRS: [(u64, u64); 6] = [(1, 2), (1, 3), (2, 5), (3, 7), (5, 8), (8, 13)];

fn unitarity(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for kind in [OperatorKind::Ordkr, OperatorKind::Uh, OperatorKind::Kh, OperatorKind::Skr] {
        for (p, q) in PAIRS {
            let (p, q) = if kind == OperatorKind::Skr && (p * q) % 2 == 1 { (2 * p, 2 * q) } else { (p, q) };
            for kappa in [0.3, 1.0, 5.0] {
                let fam = OperatorFamily::new(kind, p, q, kappa, 1.0, 0.0)?;
                for _ in 0..5 {
                    let t: f64 = rng.gen();
                    worst = worst.max(linalg::unitarity_residual(&fam.matrix(t)));
                    count += 1;
                }
            }
        }
    }
    Ok((worst < 1e-10, format!("max residual {worst:.3e} over {count} matrices")))
}

fn gauss_circulant(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let g2 = floquet::gauss_circulant(1, 2);
    let swap = [[0.0, 1.0], [1.0, 0.0]];
    let mut err2: f64 = 0.0;
    for r in 0..2 {
        for k in 0..2 {
            err2 = err2.max((g2[(r, k)] - c(swap[r][k])).norm());
        }
    }
    let mut worst: f64 = 0.0;
    for (p, q) in PAIRS {
        worst = worst.max(linalg::unitarity_residual(&floquet::gauss_circulant(p, q)));
    }
    Ok((err2 < 1e-14 && worst < 1e-12, format!("q=2 deviation {err2:.3e}, unitarity {worst:.3e}")))
}

fn zero_kick(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for (p, q) in PAIRS {
        for t in [0.0, 0.17, 0.5] {
            let m = floquet::ordkr_matrix(p, q, 0.0, t);
            let id = linalg::CMatrix::identity(q as usize, q as usize);
            worst = worst.max(linalg::norm_inf(&(m - id)));
        }
    }
    Ok((worst < 1e-12, format!("max distance to identity {worst:.3e}")))
}

fn coefficient_period(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for (p, q) in [(2, 5), (1, 3), (3, 7)] {
        let fam = OperatorFamily::ordkr(p, q, 1.0)?;
        for k in 0..60 {
            let t = k as f64 / 60.0;
            let a = floquet::char_poly(&fam, t)?;
            let b = floquet::char_poly(&fam, t + 1.0 / q as f64)?;
            for (x, y) in a.iter().zip(&b) {
                worst = worst.max((x - y).norm());
            }
        }
    }
    Ok((worst < 1e-9, format!("max coefficient shift {worst:.3e}")))
}

fn quadratic_discriminant(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let p0 = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let p1 = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let d = poly::discriminant(&ComplexPoly::new(vec![p0, p1, c(1.0)]))?;
        let closed = p1 * p1 - p0 * 4.0;
        worst = worst.max((d - closed).norm() / closed.norm().max(1e-300));
    }
    Ok((worst < 1e-12, format!("max relative error {worst:.3e}")))
}

fn random_point(rng: &mut ChaCha8Rng, center: f64, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    c(center) + Complex64::from_polar(r, TAU * rng.gen::<f64>())
}

fn resultant_dichotomy(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let (mut shared_worst, mut apart_best): (f64, f64) = (0.0, f64::INFINITY);
    for i in 0..60 {
        let (dp, dq) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let (p, q) = if i % 2 == 0 {
            let r = random_point(rng, 0.0, 1.0);
            let mut a: Vec<Complex64> = (1..dp).map(|_| random_point(rng, -0.6, 0.3)).collect();
            let mut b: Vec<Complex64> = (1..dq).map(|_| random_point(rng, 0.6, 0.3)).collect();
            a.push(r);
            b.push(r);
            (ComplexPoly::from_roots(&a), ComplexPoly::from_roots(&b))
        } else {
            let a: Vec<Complex64> = (0..dp).map(|_| random_point(rng, -0.6, 0.3)).collect();
            let b: Vec<Complex64> = (0..dq).map(|_| random_point(rng, 0.6, 0.3)).collect();
            (ComplexPoly::from_roots(&a), ComplexPoly::from_roots(&b))
        };
        let rel = poly::sylvester_resultant(&p, &q)?.norm() / poly::resultant_scale(&p, &q);
        if i % 2 == 0 {
            shared_worst = shared_worst.max(rel);
        } else {
            apart_best = apart_best.min(rel);
        }
    }
    Ok((
        shared_worst < 1e-8 && apart_best > 1e-4,
        format!("shared max {shared_worst:.3e}, disjoint min {apart_best:.3e}"),
    ))
}

fn series_ord(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut ok = true;
    for _ in 0..50 {
        let (i, j) = (rng.gen_range(0..6), rng.gen_range(0..6));
        let mk = |k: usize, rng: &mut ChaCha8Rng| -> Result<TruncatedSeries> {
            let mut v = vec![c(0.0); 17];
            v[k] = Complex64::new(rng.gen_range(0.5..2.0), rng.gen_range(-1.0..1.0));
            for x in v.iter_mut().skip(k + 1) {
                *x = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
            TruncatedSeries::new(0.0, v)
        };
        let (a, b) = (mk(i, rng)?, mk(j, rng)?);
        ok &= a.mul(&b)?.ord(1e-9) == Some(i + j);
    }
    Ok((ok, "ord(fg) = ord f + ord g on 50 random pairs".into()))
}

fn harper_parity(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut counts = Vec::new();
    for (p, q) in [(1, 3), (2, 5), (1, 4)] {
        let fam = OperatorFamily::harper(p, q, 1.0, 0.0)?;
        let opts = SpectrumOptions {
            t_grid: 512,
            theta_grid: Some(64),
            gap_tol: Some(1e-3),
            t_period: 1.0,
        };
        counts.push(spectra::spectrum_union(&fam, &opts)?.count());
    }
    Ok((counts == [3, 5, 3], format!("bands for q = 3, 5, 4: {counts:?}")))
}

fn ordkr_bands(pairs: &[(u64, u64)], expected: &[usize]) -> Result<(bool, String)> {
    let mut counts = Vec::new();
    for &(p, q) in pairs {
        let fam = OperatorFamily::ordkr(p, q, 0.3)?;
        counts.push(spectra::spectrum_union(&fam, &SpectrumOptions::default())?.count());
    }
    Ok((counts == expected, format!("bands for {pairs:?}: {counts:?}, expected {expected:?}")))
}

fn ordkr_bands_small(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    ordkr_bands(&[(2, 5)], &[5])
}

fn ordkr_bands_wide(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    ordkr_bands(&[(1, 4), (3, 7)], &[3, 7])
}

fn track_ordkr(p: u64, q: u64, kappa: f64, grid: usize, projection: Vec<Complex64>) -> Result<(Vec<usize>, Option<f64>)> {
    let fam = ReducedOperator {
        family: OperatorFamily::ordkr(p, q, kappa)?,
    };
    let opts = TrackOptions {
        initial_grid: grid,
        projection,
        ..TrackOptions::default()
    };
    let tp = monodromy::track_roots(&fam, &opts)?;
    let res = monodromy::monodromy_permutation(&tp)?;
    let fourier = monodromy::fourier_closure_residual(&tp, &res.permutation);
    Ok((res.permutation, fourier))
}

fn monodromy_identity(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let (perm, fourier) = track_ordkr(2, 5, 1.0, 512, monodromy::default_projection())?;
    let pure = perm.iter().enumerate().all(|(i, &j)| i == j);
    let f = fourier.unwrap_or(f64::INFINITY);
    Ok((pure && f < 1e-6, format!("(2,5) kappa=1 pure={pure}, closure residual {f:.3e}")))
}

fn monodromy_transposition(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let fam = PolyFamily::new(|s: f64| ComplexPoly::new(vec![-Complex64::from_polar(1.0, TAU * s), c(0.0), c(1.0)]))?;
    let tp = monodromy::track_roots(&fam, &TrackOptions::default())?;
    let res = monodromy::monodromy_permutation(&tp)?;
    Ok((res.permutation == [1, 0] && !res.is_pure, format!("permutation {:?}", res.permutation)))
}

fn monic_series(lower: Vec<TruncatedSeries>) -> Result<SeriesPoly> {
    SeriesPoly::monic_from_lower(lower)
}

fn newton_polygon(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let n = 16;
    let q = monic_series(vec![
        TruncatedSeries::monomial(0.0, n, 3, c(-1.0)),
        TruncatedSeries::zero(0.0, n),
    ])?;
    let poly = newton::newton_polygon(&q)?;
    let branches = newton::puiseux_branches(&q, 4)?;
    let slope_ok = poly.segments.len() == 1 && poly.segments[0].slope == kickband::rational::Rational::new(-3, 2);
    let ram_ok = branches.iter().all(|b| b.ramification == 2) && !branches.is_empty();
    Ok((slope_ok && ram_ok, format!("segments {}, branches {}", poly.segments.len(), branches.len())))
}

fn quadratic_classifier(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let n = 16;
    let mut ok = true;
    for k in 0..8usize {
        // z² − t^k (1 + t): discriminant 4 t^k (1 + t)
        let q0 = TruncatedSeries::monomial(0.0, n, k, c(-1.0)).add(&TruncatedSeries::monomial(0.0, n, k + 1, c(-1.0)))?;
        let q = monic_series(vec![q0, TruncatedSeries::zero(0.0, n)])?;
        let class = newton::quadratic_cr_classify(&q)?;
        let want = if k % 2 == 0 { QuadraticType::Cr } else { QuadraticType::Irreducible };
        ok &= class.kind == want && class.k == k;
    }
    Ok((ok, "CR exactly for even k in 0..8".into()))
}

fn hensel(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let f = newton::hensel_split(
        |t| ComplexPoly::from_real(&[-t, 0.0, 1.0]).mul(&ComplexPoly::from_real(&[t - 1.0, 1.0])),
        &HenselOptions::default(),
    )?;
    let radius_ok = f
        .clusters
        .iter()
        .all(|cl| cl.radius.is_some_and(|r| (r - 1.0 / 3.0).abs() < 1e-10));
    let mults: Vec<usize> = f.clusters.iter().map(|cl| cl.multiplicity).collect();
    Ok((
        radius_ok && mults == [2, 1] && f.max_residual < 1e-8,
        format!("multiplicities {mults:?}, residual {:.3e}", f.max_residual),
    ))
}

fn uh_kh(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut ratios = Vec::new();
    for kappa in [0.1, 0.05] {
        let a = floquet::uh_kh_error(2, 5, kappa, 1.0, 0.1, 0.2);
        let b = floquet::uh_kh_error(2, 5, kappa / 2.0, 1.0, 0.1, 0.2);
        ratios.push(a / b);
    }
    let ok = ratios.iter().all(|r| (3.5..=4.5).contains(r));
    Ok((ok, format!("error ratios {:.4} {:.4}", ratios[0], ratios[1])))
}

fn monodromy_homotopy(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for (p, q, kappa) in [(2, 5, 0.25), (2, 5, 0.5), (2, 5, 1.0), (2, 5, 2.0), (2, 5, 4.0), (3, 7, 0.5), (3, 7, 2.0)] {
        let (perm, fourier) = track_ordkr(p, q, kappa, 2048, monodromy::default_projection())?;
        ok &= perm.iter().enumerate().all(|(i, &j)| i == j);
        worst = worst.max(fourier.unwrap_or(f64::INFINITY));
    }
    Ok((ok && worst < 1e-6, format!("all pure={ok}, max closure residual {worst:.3e}")))
}

fn projection_invariance(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let fam = PolyFamily::new(|s: f64| {
        let v = (TAU * s).sin();
        ComplexPoly::from_real(&[-v * v, 0.0, 1.0])
    })?;
    let mut perms = Vec::new();
    for _ in 0..20 {
        let v: Vec<Complex64> = (0..3)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let opts = TrackOptions {
            projection: monodromy::unit(v),
            ..TrackOptions::default()
        };
        perms.push(monodromy::monodromy_permutation(&monodromy::track_roots(&fam, &opts)?)?.permutation);
    }
    let ok = perms.iter().all(|p| *p == perms[0]);
    Ok((ok, format!("20 projections, permutation {:?}", perms[0])))
}

fn discriminant_multiplicity(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let fam = ReducedOperator {
        family: OperatorFamily::ordkr(2, 5, 0.3)?,
    };
    let prof = monodromy::discriminant_profile(&fam, 512)?;
    Ok((prof.multiplicity_bound <= 2, format!("largest cluster {}", prof.multiplicity_bound)))
}

const CONVERGENTS: [(u64, u64); 4] = [(2, 3), (3, 5), (5, 8), (8, 13)];

fn hausdorff_convergence(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut d = Vec::new();
    for (p, q) in CONVERGENTS {
        let a = spectra::spectrum_union(&OperatorFamily::ordkr(p, q, 1.0)?, &SpectrumOptions::default())?;
        let (kp, kq) = floquet::kh_partner(p, q).expect("q > 2");
        let kh = OperatorFamily::new(OperatorKind::Kh, kp, kq, 1.0, 1.0, 0.0)?;
        let b = spectra::spectrum_union(&kh, &SpectrumOptions::default())?;
        d.push(spectra::hausdorff_distance(&a, &b)?);
    }
    Ok((d[3] < 0.5 * d[0], format!("distances {}", fmt_list(&d))))
}

fn band_measure_decrease(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut m = Vec::new();
    for (p, q) in CONVERGENTS {
        let b = spectra::spectrum_union(&OperatorFamily::ordkr(p, q, 5.0)?, &SpectrumOptions::default())?;
        m.push(spectra::band_measure(&b));
    }
    let ok = m.windows(2).all(|w| w[1] <= w[0]);
    Ok((ok, format!("measures {}", fmt_list(&m))))
}

fn fmt_list(x: &[f64]) -> String {
    x.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>().join(" ")
}
