//! Band spectra: eigenphases, gap-rule band assembly, Hausdorff distance,
//! band measure, and flux sweeps.
//!
//! Circle intervals are stored as `(lo, hi)` with `lo ∈ [0, 1)` and
//! `lo ≤ hi ≤ lo + 1`; an interval with `hi > 1` wraps through phase 0.

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::floquet::{OperatorFamily, OperatorKind};
use crate::linalg::{self, CMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Line,
    Circle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumBands {
    pub space: Space,
    pub intervals: Vec<(f64, f64)>,
    pub sample_points: Vec<f64>,
}

impl SpectrumBands {
    pub fn count(&self) -> usize {
        self.intervals.len()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&iv| in_interval(self.space, iv, x))
    }

    /// Distance from `x` to the nearest band (0 inside a band).
    pub fn distance_to(&self, x: f64) -> f64 {
        if self.contains(x) {
            return 0.0;
        }
        self.intervals
            .iter()
            .flat_map(|&(lo, hi)| [lo, hi])
            .map(|e| metric(self.space, x, e))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Slack for rounding in the wrap-around arithmetic of circle intervals.
const MEMBERSHIP_EPS: f64 = 1e-12;

fn in_interval(space: Space, (lo, hi): (f64, f64), x: f64) -> bool {
    match space {
        Space::Line => lo - MEMBERSHIP_EPS <= x && x <= hi + MEMBERSHIP_EPS,
        Space::Circle => {
            let d = (x - lo).rem_euclid(1.0);
            d <= hi - lo + MEMBERSHIP_EPS || d >= 1.0 - MEMBERSHIP_EPS || hi - lo >= 1.0
        }
    }
}

fn metric(space: Space, a: f64, b: f64) -> f64 {
    match space {
        Space::Line => (a - b).abs(),
        Space::Circle => {
            let d = (a - b).rem_euclid(1.0);
            d.min(1.0 - d)
        }
    }
}

fn wrap01(x: f64) -> f64 {
    let y = x.rem_euclid(1.0);
    if y >= 1.0 {
        0.0
    } else {
        y
    }
}

const UNITARY_TOL: f64 = 1e-8;

/// Sorted eigenphases `arg λ / 2π ∈ [0, 1)` of a unitary matrix.
pub fn eigen_phases(m: &CMatrix) -> Result<Vec<f64>> {
    let res = linalg::unitarity_residual(m);
    if res > UNITARY_TOL {
        return Err(Error::NotUnitary(res));
    }
    let ev = linalg::eigenvalues(m)?;
    let mut phases = Vec::with_capacity(ev.len());
    for z in ev {
        if (z.norm() - 1.0).abs() > UNITARY_TOL {
            return Err(Error::NotUnitary((z.norm() - 1.0).abs()));
        }
        phases.push(wrap01(z.arg() / std::f64::consts::TAU));
    }
    phases.sort_by(f64::total_cmp);
    Ok(phases)
}

/// Splits sorted samples wherever consecutive samples are more than
/// `gap_tol` apart (cyclically on the circle).
pub fn band_count(samples: &[f64], space: Space, gap_tol: f64) -> Result<(SpectrumBands, usize)> {
    if !(gap_tol > 0.0) {
        return Err(Error::InvalidArgument(format!("gap_tol must be positive, got {gap_tol}")));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteSample("spectrum sample".into()));
    }
    let mut s: Vec<f64> = match space {
        Space::Line => samples.to_vec(),
        Space::Circle => samples.iter().map(|&x| wrap01(x)).collect(),
    };
    s.sort_by(f64::total_cmp);
    let intervals = if s.is_empty() {
        Vec::new()
    } else {
        match space {
            Space::Line => split_line(&s, gap_tol),
            Space::Circle => split_circle(&s, gap_tol),
        }
    };
    let n = intervals.len();
    Ok((
        SpectrumBands {
            space,
            intervals,
            sample_points: s,
        },
        n,
    ))
}

fn split_line(s: &[f64], tol: f64) -> Vec<(f64, f64)> {
    let mut out = vec![(s[0], s[0])];
    for &x in &s[1..] {
        let last = out.last_mut().expect("nonempty");
        if x - last.1 > tol {
            out.push((x, x));
        } else {
            last.1 = x;
        }
    }
    out
}

fn split_circle(s: &[f64], tol: f64) -> Vec<(f64, f64)> {
    let n = s.len();
    let gap_after = |i: usize| {
        if i + 1 < n {
            s[i + 1] - s[i]
        } else {
            s[0] + 1.0 - s[n - 1]
        }
    };
    let cuts: Vec<usize> = (0..n).filter(|&i| gap_after(i) > tol).collect();
    if cuts.is_empty() {
        return vec![(0.0, 1.0)];
    }
    // Each band runs from the sample after one cut to the next cut.
    let mut out: Vec<(f64, f64)> = cuts
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let prev = cuts[(k + cuts.len() - 1) % cuts.len()];
            let start = (prev + 1) % n;
            let lo = s[start];
            let mut hi = s[c];
            if hi < lo {
                hi += 1.0;
            }
            (lo, hi)
        })
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Default gap tolerance `max(1e−3, 4·spacing/grid)` where `spacing` is the
/// expected distance between neighbouring eigenvalues.
pub fn default_gap_tol(spacing: f64, grid: usize) -> f64 {
    (4.0 * spacing / grid as f64).max(1e-3)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    pub t_grid: usize,
    /// Grid over `θ ∈ [0, 1/q)` for the mother-operator union.
    pub theta_grid: Option<usize>,
    pub gap_tol: Option<f64>,
    /// Length of the `t` interval sampled from 0.
    pub t_period: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            t_grid: 512,
            theta_grid: None,
            gap_tol: None,
            t_period: 1.0,
        }
    }
}

/// Sorted eigenvalues (Harper) or eigenphases (unitary kinds) at every grid
/// point, in grid order.
pub fn spectrum_rows(family: &OperatorFamily, opts: &SpectrumOptions) -> Result<Vec<Vec<f64>>> {
    if opts.t_grid < 1 {
        return Err(Error::InvalidArgument("t grid must be nonempty".into()));
    }
    let thetas: Vec<f64> = match opts.theta_grid {
        None => vec![family.theta],
        Some(n) => (0..n)
            .map(|k| k as f64 / (n as f64 * family.q as f64))
            .collect(),
    };
    let points: Vec<(f64, f64)> = thetas
        .iter()
        .flat_map(|&th| (0..opts.t_grid).map(move |k| (th, opts.t_period * k as f64 / opts.t_grid as f64)))
        .collect();
    points
        .par_iter()
        .map(|&(theta, t)| {
            let fam = family.with_theta(theta);
            let m = fam.matrix(t);
            if fam.kind.is_unitary() {
                eigen_phases(&m)
            } else {
                Ok(linalg::hermitian_eigenvalues(&m))
            }
        })
        .collect()
}

/// Spectrum as the union over the grid of eigenvalues or eigenphases.
///
/// Sorted eigenvalue branches are continuous in the parameters, so each
/// sorted index sweeps an interval. Those intervals are taken from the
/// per-index extremes over the grid and then merged under the gap rule,
/// which keeps sampling gaps inside a band from splitting it.
pub fn spectrum_union(family: &OperatorFamily, opts: &SpectrumOptions) -> Result<SpectrumBands> {
    let rows = spectrum_rows(family, opts)?;
    let space = if family.kind.is_unitary() {
        Space::Circle
    } else {
        Space::Line
    };
    assemble_rows(&rows, space, family.q as usize, opts)
}

fn assemble_rows(rows: &[Vec<f64>], space: Space, q: usize, opts: &SpectrumOptions) -> Result<SpectrumBands> {
    let mut samples: Vec<f64> = rows.iter().flatten().copied().collect();
    samples.sort_by(f64::total_cmp);
    if samples.is_empty() {
        return Err(Error::InvalidArgument("empty spectrum".into()));
    }
    let grid = opts.t_grid;
    match space {
        Space::Line => {
            let range = samples[samples.len() - 1] - samples[0];
            let tol = opts
                .gap_tol
                .unwrap_or_else(|| default_gap_tol(range / q as f64, grid));
            let per_index = index_ranges(rows, |x| x);
            Ok(SpectrumBands {
                space,
                intervals: merge(per_index, tol),
                sample_points: samples,
            })
        }
        Space::Circle => {
            let tol = opts.gap_tol.unwrap_or_else(|| default_gap_tol(1.0 / q as f64, grid));
            // Rotate so the widest empty arc straddles phase 0.
            let n = samples.len();
            let (mut best, mut cut) = (-1.0, 0.0);
            for i in 0..n {
                let next = if i + 1 < n { samples[i + 1] } else { samples[0] + 1.0 };
                if next - samples[i] > best {
                    best = next - samples[i];
                    cut = samples[i] + best / 2.0;
                }
            }
            let rotated: Vec<Vec<f64>> = rows
                .iter()
                .map(|row| {
                    let mut r: Vec<f64> = row.iter().map(|&x| (x - cut).rem_euclid(1.0)).collect();
                    r.sort_by(f64::total_cmp);
                    r
                })
                .collect();
            let merged = merge(index_ranges(&rotated, |x| x), tol);
            let mut intervals: Vec<(f64, f64)> = if merged.len() == 1 && merged[0].0 + 1.0 - merged[0].1 <= tol {
                vec![(0.0, 1.0)]
            } else {
                merged
                    .into_iter()
                    .map(|(lo, hi)| {
                        let l = wrap01(lo + cut);
                        (l, l + (hi - lo))
                    })
                    .collect()
            };
            intervals.sort_by(|a, b| a.0.total_cmp(&b.0));
            let sample_points = samples.iter().map(|&x| wrap01(x)).collect();
            Ok(SpectrumBands {
                space,
                intervals,
                sample_points,
            })
        }
    }
}

fn index_ranges(rows: &[Vec<f64>], f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
    let width = rows.iter().map(|r| r.len()).min().unwrap_or(0);
    let mut out: Vec<(f64, f64)> = (0..width)
        .map(|j| {
            rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                let v = f(r[j]);
                (lo.min(v), hi.max(v))
            })
        })
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

fn merge(sorted: Vec<(f64, f64)>, tol: f64) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(sorted.len());
    for (lo, hi) in sorted {
        match out.last_mut() {
            Some(last) if lo - last.1 <= tol => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    }
    out
}

/// Two-sided Hausdorff distance between band unions, using the arc metric
/// on the circle.
pub fn hausdorff_distance(a: &SpectrumBands, b: &SpectrumBands) -> Result<f64> {
    if a.space != b.space {
        return Err(Error::SpaceMismatch);
    }
    Ok(directed(a, b).max(directed(b, a)))
}

/// `sup_{x∈A} d(x, B)`. The supremum is attained at an endpoint of `A` or
/// at the midpoint of a gap of `B` lying inside `A`.
fn directed(a: &SpectrumBands, b: &SpectrumBands) -> f64 {
    let mut candidates: Vec<f64> = a.intervals.iter().flat_map(|&(lo, hi)| [lo, hi]).collect();
    candidates.extend(gap_midpoints(b).into_iter().filter(|&x| a.contains(x)));
    candidates
        .into_iter()
        .map(|x| b.distance_to(x))
        .fold(0.0, f64::max)
}

fn gap_midpoints(b: &SpectrumBands) -> Vec<f64> {
    let iv = &b.intervals;
    let mut out: Vec<f64> = iv.windows(2).map(|w| (w[0].1 + w[1].0) / 2.0).collect();
    if b.space == Space::Circle && !iv.is_empty() {
        let last = iv[iv.len() - 1].1;
        let first = iv[0].0 + 1.0;
        if first > last {
            out.push(wrap01((last + first) / 2.0));
        }
    }
    out
}

pub fn band_measure(b: &SpectrumBands) -> f64 {
    b.intervals.iter().map(|(lo, hi)| hi - lo).sum()
}

pub const DEFAULT_Q_MAX: u64 = 55;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ButterflyRow {
    pub p: u64,
    pub q: u64,
    pub bands: SpectrumBands,
}

/// Spectra along a list of fluxes. Rows with `q > q_max` are skipped with a
/// warning; single-kick families with `p·q` odd are evaluated on the
/// doubled fiber.
pub fn butterfly_sweep(
    alphas: &[(u64, u64)],
    kind: OperatorKind,
    kappa: f64,
    lambda: f64,
    opts: &SpectrumOptions,
    q_max: u64,
) -> Result<Vec<ButterflyRow>> {
    let mut rows = Vec::with_capacity(alphas.len());
    for &(p, q) in alphas {
        if q > q_max {
            warn!("skipping alpha = {p}/{q}: q exceeds q_max = {q_max}");
            continue;
        }
        let (fp, fq) = if kind == OperatorKind::Skr && (p * q) % 2 == 1 {
            (2 * p, 2 * q)
        } else {
            (p, q)
        };
        let fam = OperatorFamily::new(kind, fp, fq, kappa, lambda, 0.0)?;
        let bands = spectrum_union(&fam, opts)?;
        rows.push(ButterflyRow { p, q, bands });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn line(iv: &[(f64, f64)]) -> SpectrumBands {
        SpectrumBands {
            space: Space::Line,
            intervals: iv.to_vec(),
            sample_points: Vec::new(),
        }
    }

    fn circle(iv: &[(f64, f64)]) -> SpectrumBands {
        SpectrumBands {
            space: Space::Circle,
            intervals: iv.to_vec(),
            sample_points: Vec::new(),
        }
    }

    #[test]
    fn phases_of_simple_matrices() {
        assert_eq!(eigen_phases(&CMatrix::identity(3, 3)).unwrap(), vec![0.0; 3]);
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ]));
        let ph = eigen_phases(&d).unwrap();
        for (a, b) in ph.iter().zip([0.0, 0.25, 0.5, 0.75]) {
            assert!((a - b).abs() < 1e-15);
        }
        let bad = CMatrix::identity(2, 2) * Complex64::new(2.0, 0.0);
        assert!(matches!(eigen_phases(&bad), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn phases_agree_with_char_poly_roots() {
        let fam = OperatorFamily::ordkr(2, 5, 1.0).unwrap();
        let ph = eigen_phases(&fam.matrix(0.3)).unwrap();
        let cp = crate::poly::ComplexPoly::new(crate::floquet::char_poly(&fam, 0.3).unwrap());
        let roots = crate::poly::poly_roots(&cp).unwrap();
        let mut rp: Vec<f64> = roots.iter().map(|z| wrap01(z.arg() / std::f64::consts::TAU)).collect();
        rp.sort_by(f64::total_cmp);
        for (a, b) in ph.iter().zip(&rp) {
            assert!(metric(Space::Circle, *a, *b) < 1e-8);
        }
    }

    #[test]
    fn gap_rule_examples() {
        let (_, n) = band_count(&[0.1, 0.11, 0.5, 0.51], Space::Line, 0.1).unwrap();
        assert_eq!(n, 2);
        let dense: Vec<f64> = (0..1000).map(|k| k as f64 / 1000.0).collect();
        let (b, n) = band_count(&dense, Space::Circle, 0.01).unwrap();
        assert_eq!(n, 1);
        assert_eq!(b.intervals, vec![(0.0, 1.0)]);
        let (b, n) = band_count(&[0.95, 0.98, 0.02, 0.5], Space::Circle, 0.1).unwrap();
        assert_eq!(n, 2);
        assert!((b.intervals[1].0 - 0.95).abs() < 1e-15 && (b.intervals[1].1 - 1.02).abs() < 1e-12);
        assert!(band_count(&[0.1], Space::Line, 0.0).is_err());
    }

    #[test]
    fn identity_spectrum_is_a_point() {
        let fam = OperatorFamily::ordkr(2, 5, 0.0).unwrap();
        let b = spectrum_union(&fam, &SpectrumOptions { t_grid: 64, ..Default::default() }).unwrap();
        assert_eq!(b.count(), 1);
        assert_eq!(band_measure(&b), 0.0);
        let (lo, hi) = b.intervals[0];
        assert!(metric(Space::Circle, lo, 0.0) < 1e-12 && metric(Space::Circle, hi, 0.0) < 1e-12);
    }

    #[test]
    fn small_kick_gives_q_bands() {
        let fam = OperatorFamily::ordkr(2, 5, 0.3).unwrap();
        let b = spectrum_union(&fam, &SpectrumOptions::default()).unwrap();
        assert_eq!(b.count(), 5);
        for &x in &b.sample_points {
            assert_eq!(b.intervals.iter().filter(|&&iv| in_interval(Space::Circle, iv, x)).count(), 1);
        }
    }

    #[test]
    fn hausdorff_examples() {
        let a = line(&[(0.0, 0.1)]);
        let b = line(&[(0.2, 0.3)]);
        assert!((hausdorff_distance(&a, &b).unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(hausdorff_distance(&a, &circle(&[(0.0, 0.1)])), Err(Error::SpaceMismatch));

        // A covers B's gap: the worst point is the gap midpoint.
        let a = line(&[(0.0, 1.0)]);
        let b = line(&[(0.0, 0.2), (0.8, 1.0)]);
        assert!((hausdorff_distance(&a, &b).unwrap() - 0.3).abs() < 1e-15);

        // arc metric across phase 0: 0.2 is 0.18 away from 1.02 ≡ 0.02
        let a = circle(&[(0.95, 1.02)]);
        let b = circle(&[(0.1, 0.2)]);
        assert!((hausdorff_distance(&a, &b).unwrap() - 0.18).abs() < 1e-12);
    }

    #[test]
    fn measure_examples() {
        assert!((band_measure(&line(&[(0.2, 0.5)])) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn sweep_skips_large_q() {
        let opts = SpectrumOptions { t_grid: 64, ..Default::default() };
        let rows = butterfly_sweep(&[(1, 2), (1, 60)], OperatorKind::Ordkr, 0.0, 0.0, &opts, DEFAULT_Q_MAX).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].bands.count(), 1);
        assert_eq!(band_measure(&rows[0].bands), 0.0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn bands() -> impl Strategy<Value = SpectrumBands> {
            proptest::collection::vec((0.0f64..1.0, 0.0f64..0.2), 1..4).prop_map(|v| {
                let samples: Vec<f64> = v.iter().flat_map(|&(a, w)| [a, a + w / 2.0, a + w]).collect();
                band_count(&samples, Space::Line, 0.05).unwrap().0
            })
        }

        proptest! {
            #[test]
            fn hausdorff_is_a_metric(a in bands(), b in bands(), c in bands()) {
                let ab = hausdorff_distance(&a, &b).unwrap();
                let ba = hausdorff_distance(&b, &a).unwrap();
                let bc = hausdorff_distance(&b, &c).unwrap();
                let ac = hausdorff_distance(&a, &c).unwrap();
                prop_assert_eq!(ab, ba);
                prop_assert!(ac <= ab + bc + 1e-12);
                prop_assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
            }

            #[test]
            fn every_sample_in_exactly_one_band(xs in proptest::collection::vec(0.0f64..1.0, 1..60), tol in 0.01f64..0.2, circ in any::<bool>()) {
                let space = if circ { Space::Circle } else { Space::Line };
                let (b, _) = band_count(&xs, space, tol).unwrap();
                for &x in &b.sample_points {
                    let hits = b.intervals.iter().filter(|&&iv| in_interval(space, iv, x)).count();
                    prop_assert_eq!(hits, 1);
                }
            }
        }
    }
}
