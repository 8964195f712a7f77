//! Root tracking around one period of `s ↦ P(s, ·)` and the permutation
//! the loop induces on the roots.
//!
//! Consecutive root sets are matched by minimum-cost assignment against a
//! secant prediction. An interval is bisected when the worst matched
//! distance exceeds half the smallest root gap at its right end. Where roots
//! coincide to within `gap_floor`, value matching is meaningless, and roots
//! are matched by their jets (value and derivative estimates) instead.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assignment::hungarian;
use crate::error::{Error, Result};
use crate::floquet::{char_poly, OperatorFamily};
use crate::poly::{self, ComplexPoly};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A one-parameter family of monic polynomials, period 1 in `s`.
pub trait RootFamily: Sync {
    fn degree(&self) -> usize;
    fn roots(&self, s: f64) -> Result<Vec<Complex64>>;
    fn poly(&self, s: f64) -> Result<ComplexPoly> {
        Ok(ComplexPoly::from_roots(&self.roots(s)?))
    }
}

/// Family given by a coefficient callback; roots come from the companion
/// matrix.
pub struct PolyFamily<F> {
    eval: F,
    degree: usize,
}

impl<F> PolyFamily<F>
where
    F: Fn(f64) -> ComplexPoly + Sync,
{
    pub fn new(eval: F) -> Result<Self> {
        let p0 = eval(0.0);
        if p0.degree() < 1 {
            return Err(Error::DegreeTooLow {
                required: 1,
                found: p0.degree(),
            });
        }
        if !p0.is_monic() {
            return Err(Error::NotMonic);
        }
        Ok(Self {
            degree: p0.degree(),
            eval,
        })
    }
}

impl<F> RootFamily for PolyFamily<F>
where
    F: Fn(f64) -> ComplexPoly + Sync,
{
    fn degree(&self) -> usize {
        self.degree
    }
    fn roots(&self, s: f64) -> Result<Vec<Complex64>> {
        poly::poly_roots(&(self.eval)(s))
    }
    fn poly(&self, s: f64) -> Result<ComplexPoly> {
        Ok((self.eval)(s))
    }
}

/// The reduced polynomial `P(s, ·) = C(s/q, ·)` of an operator family, with
/// roots taken as eigenvalues of `M(s/q)`.
pub struct ReducedOperator {
    pub family: OperatorFamily,
}

impl RootFamily for ReducedOperator {
    fn degree(&self) -> usize {
        self.family.dim()
    }
    fn roots(&self, s: f64) -> Result<Vec<Complex64>> {
        self.family.eigenvalues(s / self.family.q as f64)
    }
    fn poly(&self, s: f64) -> Result<ComplexPoly> {
        Ok(ComplexPoly::new(char_poly(&self.family, s / self.family.q as f64)?))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackOptions {
    pub initial_grid: usize,
    pub gap_floor: f64,
    pub max_depth: usize,
    pub max_refinements: usize,
    pub jet_step: f64,
    /// Projection vector for jet tie-breaking (at least three entries).
    pub projection: Vec<Complex64>,
}

impl Default for TrackOptions {
    fn default() -> Self {
        Self {
            initial_grid: 512,
            gap_floor: 1e-6,
            max_depth: 20,
            max_refinements: 100_000,
            jet_step: 1e-4,
            projection: default_projection(),
        }
    }
}

/// A fixed generic unit vector in ℂ³.
pub fn default_projection() -> Vec<Complex64> {
    unit(vec![
        Complex64::new(0.8123, 0.1337),
        Complex64::new(-0.4162, 0.5871),
        Complex64::new(0.2718, -0.3141),
    ])
}

/// Scales a vector to unit Euclidean norm.
pub fn unit(v: Vec<Complex64>) -> Vec<Complex64> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackedPaths {
    pub s_grid: Vec<f64>,
    /// `paths[i][k]` is root `i` at `s_grid[k]`.
    pub paths: Vec<Vec<Complex64>>,
    pub min_gap: f64,
    pub refinements: usize,
    /// Number of near-coincidences resolved by jets.
    pub jet_resolutions: usize,
    /// Highest jet order needed (0 when jets were never used).
    pub jet_order_used: usize,
    /// Indices into `s_grid` of the uniform points `k / initial_grid`.
    pub uniform: Vec<usize>,
    #[serde(skip)]
    options: Option<TrackOptions>,
}

impl TrackedPaths {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    fn column(&self, k: usize) -> Vec<Complex64> {
        self.paths.iter().map(|p| p[k]).collect()
    }

    /// Samples of path `i` at the uniform grid points.
    pub fn uniform_samples(&self, i: usize) -> Vec<Complex64> {
        self.uniform.iter().map(|&k| self.paths[i][k]).collect()
    }
}

/// Value and derivative estimates `(f, f′, f″, …)` at one parameter value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JetVector {
    pub values: Vec<Complex64>,
}

impl JetVector {
    /// 2-jet at `x` of the quadratic through three samples.
    pub fn from_samples(s: [f64; 3], f: [Complex64; 3], x: f64) -> Self {
        let mut values = vec![ZERO; 3];
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let denom = (s[i] - s[j]) * (s[i] - s[k]);
            let l0 = (x - s[j]) * (x - s[k]) / denom;
            let l1 = ((x - s[j]) + (x - s[k])) / denom;
            let l2 = 2.0 / denom;
            values[0] += f[i] * l0;
            values[1] += f[i] * l1;
            values[2] += f[i] * l2;
        }
        Self { values }
    }

    /// 2-jet of a function by centred five-point differences.
    pub fn from_fn(f: impl Fn(f64) -> Complex64, x: f64, h: f64) -> Self {
        let (m2, m1, z, p1, p2) = (f(x - 2.0 * h), f(x - h), f(x), f(x + h), f(x + 2.0 * h));
        let d1 = (m2 - p2 + (p1 - m1) * 8.0) / (12.0 * h);
        let d2 = (-m2 - p2 + (p1 + m1) * 16.0 - z * 30.0) / (12.0 * h * h);
        Self {
            values: vec![z, d1, d2],
        }
    }

    pub fn order(&self) -> usize {
        self.values.len() - 1
    }
}

/// Projected jets closer than this (relative) are indistinguishable.
const JET_SEPARATION: f64 = 1e-5;

/// Matches left jets to right jets on the scalars `v* J_k`, trying `k = 1`
/// and then `k = 2`. Returns the assignment and the order that resolved it.
pub fn jet_tiebreak(left: &[JetVector], right: &[JetVector], v: &[Complex64]) -> Result<(Vec<usize>, usize)> {
    for k in 1..=2 {
        if let Some(a) = jet_assign(left, right, v, k) {
            return Ok((a, k));
        }
    }
    Err(Error::AmbiguousCrossing {
        lo: f64::NAN,
        hi: f64::NAN,
    })
}

/// Assignment at a fixed jet order, or `None` if ambiguous at that order.
pub fn jet_assign(left: &[JetVector], right: &[JetVector], v: &[Complex64], k: usize) -> Option<Vec<usize>> {
    let n = left.len();
    if n != right.len() || v.len() <= k || left.iter().chain(right).any(|j| j.order() < k) {
        return None;
    }
    let w = unit(v[..=k].to_vec());
    let project = |j: &JetVector| -> Complex64 { (0..=k).map(|i| w[i].conj() * j.values[i]).sum() };
    let pl: Vec<Complex64> = left.iter().map(project).collect();
    let pr: Vec<Complex64> = right.iter().map(project).collect();
    let scale = pl.iter().chain(&pr).map(|z| z.norm()).fold(1.0, f64::max);
    let sep = min_gap(&pl).min(min_gap(&pr));
    if sep <= JET_SEPARATION * scale {
        return None;
    }
    let cost: Vec<Vec<f64>> = pl
        .iter()
        .map(|a| pr.iter().map(|b| (a - b).norm_sqr()).collect())
        .collect();
    let assign = hungarian(&cost);
    let worst = (0..n)
        .map(|i| (pl[i] - pr[assign[i]]).norm())
        .fold(0.0, f64::max);
    (worst < 0.5 * sep).then_some(assign)
}

fn min_gap(z: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            best = best.min((z[i] - z[j]).norm());
        }
    }
    best
}

fn assign_by_prediction(pred: &[Complex64], roots: &[Complex64]) -> (Vec<Complex64>, f64) {
    let cost: Vec<Vec<f64>> = pred
        .iter()
        .map(|a| roots.iter().map(|b| (a - b).norm_sqr()).collect())
        .collect();
    let assign = hungarian(&cost);
    let ordered: Vec<Complex64> = assign.iter().map(|&j| roots[j]).collect();
    let worst = pred
        .iter()
        .zip(&ordered)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    (ordered, worst)
}

struct Sweep<'a, R: RootFamily> {
    fam: &'a R,
    opts: &'a TrackOptions,
    s: Vec<f64>,
    cols: Vec<Vec<Complex64>>,
    refinements: usize,
    jet_resolutions: usize,
    jet_order: usize,
    min_gap: f64,
    /// Upper bound for the jet stencil so it stays inside one grid cell.
    cell: f64,
}

impl<R: RootFamily> Sweep<'_, R> {
    fn push(&mut self, s: f64, col: Vec<Complex64>) {
        self.min_gap = self.min_gap.min(min_gap(&col));
        self.s.push(s);
        self.cols.push(col);
    }

    fn last(&self) -> (f64, &[Complex64]) {
        (*self.s.last().expect("started"), self.cols.last().expect("started"))
    }

    fn prediction(&self, s_b: f64) -> Vec<Complex64> {
        let n = self.s.len();
        let (s_a, va) = self.last();
        if n < 2 {
            return va.to_vec();
        }
        let (s_p, vp) = (self.s[n - 2], &self.cols[n - 2]);
        let r = (s_b - s_a) / (s_a - s_p);
        va.iter().zip(vp).map(|(a, p)| a + (a - p) * r).collect()
    }

    fn start(&mut self, roots0: Vec<Complex64>) -> Result<()> {
        let mut r = roots0;
        r.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        if min_gap(&r) >= self.opts.gap_floor {
            self.push(0.0, r);
            return Ok(());
        }
        // Coincident roots at the start: label paths by where they go.
        let h = self.opts.jet_step.min(self.cell / 4.0);
        let right = self.forward_stencil(0.0, h)?;
        let (at0, _) = assign_by_prediction(&right[0], &r);
        self.push(0.0, at0);
        for (k, col) in right.into_iter().enumerate() {
            self.push((k + 1) as f64 * h, col);
        }
        Ok(())
    }

    /// Roots at `s + h`, `s + 2h`, `s + 3h`, consistently ordered.
    fn forward_stencil(&self, s: f64, h: f64) -> Result<Vec<Vec<Complex64>>> {
        let r1 = self.fam.roots(s + h)?;
        let r2 = self.fam.roots(s + 2.0 * h)?;
        let r3 = self.fam.roots(s + 3.0 * h)?;
        let (o2, _) = assign_by_prediction(&r1, &r2);
        let pred3: Vec<Complex64> = r1.iter().zip(&o2).map(|(a, b)| b * 2.0 - a).collect();
        let (o3, _) = assign_by_prediction(&pred3, &r3);
        Ok(vec![r1, o2, o3])
    }

    fn step_to(&mut self, s_b: f64, roots_b: Vec<Complex64>, depth: usize, allow_jets: bool) -> Result<()> {
        let gap = min_gap(&roots_b);
        if allow_jets && gap < self.opts.gap_floor {
            return self.cross_cluster(s_b, roots_b);
        }
        let pred = self.prediction(s_b);
        let (ordered, worst) = assign_by_prediction(&pred, &roots_b);
        if worst <= 0.5 * gap {
            self.push(s_b, ordered);
            return Ok(());
        }
        let s_a = self.last().0;
        if depth >= self.opts.max_depth || self.refinements >= self.opts.max_refinements {
            return Err(Error::AmbiguousCrossing { lo: s_a, hi: s_b });
        }
        self.refinements += 1;
        let s_m = 0.5 * (s_a + s_b);
        let roots_m = self.fam.roots(s_m)?;
        self.step_to(s_m, roots_m, depth + 1, allow_jets)?;
        self.step_to(s_b, roots_b, depth + 1, allow_jets)
    }

    /// Passes a point where roots nearly coincide by matching one-sided jets.
    fn cross_cluster(&mut self, s_b: f64, roots_b: Vec<Complex64>) -> Result<()> {
        let s_a = self.last().0;
        let h = self.opts.jet_step.min((s_b - s_a) / 4.0).min(self.cell / 4.0);
        let ambiguous = Error::AmbiguousCrossing {
            lo: s_b - 3.0 * h,
            hi: (s_b + 3.0 * h).min(1.0),
        };
        for k in (1..=3).rev() {
            let s = s_b - k as f64 * h;
            let r = self.fam.roots(s)?;
            self.step_to(s, r, 0, false)?;
        }
        let n = self.s.len();
        let ls = [self.s[n - 3], self.s[n - 2], self.s[n - 1]];
        let left: Vec<JetVector> = (0..roots_b.len())
            .map(|i| JetVector::from_samples(ls, [self.cols[n - 3][i], self.cols[n - 2][i], self.cols[n - 1][i]], s_b))
            .collect();

        if s_b >= 1.0 {
            let guess: Vec<Complex64> = left.iter().map(|j| j.values[0]).collect();
            let (ordered, _) = assign_by_prediction(&guess, &roots_b);
            self.push(s_b, ordered);
            return Ok(());
        }
        let stencil = self.forward_stencil(s_b, h)?;
        let rs = [s_b + h, s_b + 2.0 * h, s_b + 3.0 * h];
        let right: Vec<JetVector> = (0..roots_b.len())
            .map(|j| JetVector::from_samples(rs, [stencil[0][j], stencil[1][j], stencil[2][j]], s_b))
            .collect();
        let (assign, k) = jet_tiebreak(&left, &right, &self.opts.projection).map_err(|_| ambiguous)?;
        self.jet_resolutions += 1;
        self.jet_order = self.jet_order.max(k);

        let guess: Vec<Complex64> = assign.iter().map(|&j| right[j].values[0]).collect();
        let (at_b, _) = assign_by_prediction(&guess, &roots_b);
        self.push(s_b, at_b);
        for (col, &s) in stencil.iter().zip(&rs) {
            self.push(s, assign.iter().map(|&j| col[j]).collect());
        }
        Ok(())
    }
}

/// Tracks the roots of `P(s, ·)` for `s ∈ [0, 1]`.
pub fn track_roots<R: RootFamily>(fam: &R, opts: &TrackOptions) -> Result<TrackedPaths> {
    let k = opts.initial_grid;
    if k < 4 {
        return Err(Error::InvalidArgument("initial grid needs at least 4 intervals".into()));
    }
    if opts.projection.len() < 3 {
        return Err(Error::InvalidArgument("projection vector needs three entries".into()));
    }
    let grid: Vec<f64> = (0..=k).map(|i| i as f64 / k as f64).collect();
    let roots: Vec<Vec<Complex64>> = grid
        .par_iter()
        .map(|&s| fam.roots(s))
        .collect::<Result<_>>()?;
    let n = fam.degree();
    if roots.iter().any(|r| r.len() != n) {
        return Err(Error::EigenFailure);
    }
    let closure = multiset_distance(&roots[0], &roots[k]);
    let scale = roots[0].iter().map(|z| z.norm()).fold(1.0, f64::max);
    if closure > 1e-8 * scale {
        return Err(Error::ClosureViolation(closure));
    }

    let mut sw = Sweep {
        fam,
        opts,
        s: Vec::with_capacity(k + 1),
        cols: Vec::with_capacity(k + 1),
        refinements: 0,
        jet_resolutions: 0,
        jet_order: 0,
        min_gap: f64::INFINITY,
        cell: 1.0 / k as f64,
    };
    let mut roots = roots.into_iter();
    sw.start(roots.next().expect("grid"))?;
    let mut uniform = vec![sw.s.iter().position(|&s| s == 0.0).expect("start")];
    for (i, r) in roots.enumerate() {
        let s_b = grid[i + 1];
        if sw.last().0 >= s_b {
            return Err(Error::AmbiguousCrossing { lo: grid[i], hi: s_b });
        }
        sw.step_to(s_b, r, 0, true)?;
        let idx = sw.s.iter().rposition(|&s| s == s_b).expect("pushed");
        uniform.push(idx);
    }
    if sw.jet_resolutions > 0 {
        sw.jet_order = sw.jet_order.max(1);
    }
    let m = sw.cols.len();
    let paths = (0..n).map(|i| (0..m).map(|c| sw.cols[c][i]).collect()).collect();
    Ok(TrackedPaths {
        s_grid: sw.s,
        paths,
        min_gap: sw.min_gap,
        refinements: sw.refinements,
        jet_resolutions: sw.jet_resolutions,
        jet_order_used: sw.jet_order,
        uniform,
        options: Some(opts.clone()),
    })
}

fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assign_by_prediction(a, b).1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonodromyResult {
    /// `permutation[i]` is the path whose start path `i` ends at (0-based).
    pub permutation: Vec<usize>,
    pub is_pure: bool,
    pub min_discriminant: f64,
    pub near_degeneracies: Vec<(f64, usize)>,
    pub jet_order_used: usize,
    pub refinements: usize,
}

/// Gap below which a local minimum of the root gap is reported as a near
/// degeneracy.
pub const NEAR_DEGENERACY_GAP: f64 = 1e-2;

/// Reads off the permutation induced by one loop.
pub fn monodromy_permutation(tp: &TrackedPaths) -> Result<MonodromyResult> {
    let opts = tp.options.clone().unwrap_or_default();
    let m = tp.s_grid.len();
    if m < 3 || tp.is_empty() {
        return Err(Error::InvalidArgument("too few tracked samples".into()));
    }
    let start = tp.column(0);
    let end = tp.column(m - 1);
    let scale = start.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let (_, closure) = assign_by_prediction(&end, &start);
    if closure > 1e-8 * scale {
        return Err(Error::ClosureViolation(closure));
    }

    let mut jet_order = tp.jet_order_used;
    let permutation = if min_gap(&start) >= opts.gap_floor {
        let cost: Vec<Vec<f64>> = end
            .iter()
            .map(|a| start.iter().map(|b| (a - b).norm_sqr()).collect())
            .collect();
        hungarian(&cost)
    } else {
        let s = &tp.s_grid;
        let left: Vec<JetVector> = tp
            .paths
            .iter()
            .map(|p| JetVector::from_samples([s[m - 3], s[m - 2], s[m - 1]], [p[m - 3], p[m - 2], p[m - 1]], 1.0))
            .collect();
        let right: Vec<JetVector> = tp
            .paths
            .iter()
            .map(|p| JetVector::from_samples([s[0], s[1], s[2]], [p[0], p[1], p[2]], 0.0))
            .collect();
        let (a, k) = jet_tiebreak(&left, &right, &opts.projection).map_err(|_| Error::AmbiguousCrossing {
            lo: s[m - 3] - 1.0,
            hi: s[2],
        })?;
        jet_order = jet_order.max(k);
        a
    };
    let is_pure = permutation.iter().enumerate().all(|(i, &j)| i == j);

    let discs: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|k| {
            let col = tp.column(k);
            if col.len() < 2 {
                return Ok(f64::INFINITY);
            }
            Ok(poly::discriminant(&ComplexPoly::from_roots(&col))?.norm())
        })
        .collect::<Result<_>>()?;
    let min_discriminant = discs.iter().copied().fold(f64::INFINITY, f64::min);

    let gaps: Vec<f64> = (0..m).map(|k| min_gap(&tp.column(k))).collect();
    let mut near_degeneracies = Vec::new();
    for k in 0..m {
        let prev = if k > 0 { gaps[k - 1] } else { f64::INFINITY };
        let next = if k + 1 < m { gaps[k + 1] } else { f64::INFINITY };
        if gaps[k] < NEAR_DEGENERACY_GAP && gaps[k] <= prev && gaps[k] < next {
            near_degeneracies.push((tp.s_grid[k], largest_cluster(&tp.column(k), 3.0 * gaps[k])));
        }
    }
    Ok(MonodromyResult {
        permutation,
        is_pure,
        min_discriminant,
        near_degeneracies,
        jet_order_used: jet_order,
        refinements: tp.refinements,
    })
}

/// Size of the largest single-linkage cluster at threshold `tol`.
fn largest_cluster(z: &[Complex64], tol: f64) -> usize {
    let n = z.len();
    let mut seen = vec![false; n];
    let mut best = 0;
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let mut stack = vec![i];
        seen[i] = true;
        let mut size = 0;
        while let Some(a) = stack.pop() {
            size += 1;
            for b in 0..n {
                if !seen[b] && (z[a] - z[b]).norm() <= tol {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        best = best.max(size);
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscriminantProfile {
    pub min_abs: f64,
    pub argmin: f64,
    /// Largest root cluster seen at a local minimum of `|D|`.
    pub multiplicity_bound: usize,
    /// `(s, |D|, cluster size)` at each local minimum of `|D|`.
    pub minima: Vec<(f64, f64, usize)>,
}

/// `|D(P(s, ·))|` on a uniform grid, with root-cluster sizes at its local
/// minima.
pub fn discriminant_profile<R: RootFamily>(fam: &R, grid: usize) -> Result<DiscriminantProfile> {
    if grid < 3 {
        return Err(Error::InvalidArgument("grid needs at least 3 points".into()));
    }
    let samples: Vec<(f64, Vec<Complex64>)> = (0..grid)
        .into_par_iter()
        .map(|k| {
            let s = k as f64 / grid as f64;
            let p = fam.poly(s)?;
            let d = poly::discriminant(&p)?.norm();
            Ok((d, poly::poly_roots(&p)?))
        })
        .collect::<Result<_>>()?;
    let (mut min_abs, mut argmin) = (f64::INFINITY, 0.0);
    let mut minima = Vec::new();
    for k in 0..grid {
        let d = samples[k].0;
        if d < min_abs {
            min_abs = d;
            argmin = k as f64 / grid as f64;
        }
        let prev = samples[(k + grid - 1) % grid].0;
        let next = samples[(k + 1) % grid].0;
        if d <= prev && d < next {
            let roots = &samples[k].1;
            let gap = min_gap(roots);
            let size = if gap < NEAR_DEGENERACY_GAP {
                largest_cluster(roots, 3.0 * gap.max(1e-12))
            } else {
                1
            };
            minima.push((k as f64 / grid as f64, d, size));
        }
    }
    let multiplicity_bound = minima.iter().map(|m| m.2).max().unwrap_or(1);
    Ok(DiscriminantProfile {
        min_abs,
        argmin,
        multiplicity_bound,
        minima,
    })
}

/// Smoothness of the closed paths: each fixed path is sampled on the
/// uniform grid, the even samples are interpolated trigonometrically to
/// the odd midpoints, and the largest discrepancy (relative to the path
/// scale) is returned. `None` when no path closes on itself or the grid is
/// odd.
pub fn fourier_closure_residual(tp: &TrackedPaths, permutation: &[usize]) -> Option<f64> {
    let k = tp.uniform.len() - 1;
    if k % 2 != 0 || k < 8 {
        return None;
    }
    let half = k / 2;
    let mut worst: Option<f64> = None;
    for (i, &j) in permutation.iter().enumerate() {
        if i != j {
            continue;
        }
        let samples = tp.uniform_samples(i);
        let even: Vec<Complex64> = (0..half).map(|m| samples[2 * m]).collect();
        let coeffs = dft(&even);
        let scale = samples.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let err = (0..half)
            .map(|m| {
                let s = (2 * m + 1) as f64 / k as f64;
                (trig_eval(&coeffs, s) - samples[2 * m + 1]).norm() / scale
            })
            .fold(0.0, f64::max);
        worst = Some(worst.map_or(err, |w: f64| w.max(err)));
    }
    worst
}

fn dft(x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|f| {
            x.iter()
                .enumerate()
                .map(|(m, &v)| v * Complex64::from_polar(1.0, -TAU * ((f * m) % n) as f64 / n as f64))
                .sum::<Complex64>()
                / n as f64
        })
        .collect()
}

/// Evaluates the minimal-frequency trigonometric interpolant, splitting the
/// Nyquist term symmetrically.
fn trig_eval(c: &[Complex64], s: f64) -> Complex64 {
    let n = c.len();
    let mut acc = ZERO;
    for (f, &cf) in c.iter().enumerate() {
        let freq = if f <= n / 2 { f as i64 } else { f as i64 - n as i64 };
        if n % 2 == 0 && f == n / 2 {
            let a = Complex64::from_polar(1.0, TAU * freq as f64 * s);
            let b = Complex64::from_polar(1.0, -TAU * freq as f64 * s);
            acc += cf * (a + b) * 0.5;
        } else {
            acc += cf * Complex64::from_polar(1.0, TAU * freq as f64 * s);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn square_root_family() -> PolyFamily<impl Fn(f64) -> ComplexPoly + Sync> {
        PolyFamily::new(|s: f64| ComplexPoly::new(vec![-Complex64::from_polar(1.0, TAU * s), ZERO, c(1.0, 0.0)])).unwrap()
    }

    fn sine_square_family() -> PolyFamily<impl Fn(f64) -> ComplexPoly + Sync> {
        PolyFamily::new(|s: f64| {
            let v = (TAU * s).sin();
            ComplexPoly::new(vec![c(-v * v, 0.0), ZERO, c(1.0, 0.0)])
        })
        .unwrap()
    }

    #[test]
    fn square_root_loop_swaps() {
        let fam = square_root_family();
        let tp = track_roots(&fam, &TrackOptions::default()).unwrap();
        let res = monodromy_permutation(&tp).unwrap();
        assert_eq!(res.permutation, vec![1, 0]);
        assert!(!res.is_pure);
        // path values follow ±e^{πis}
        let k = tp.uniform[128];
        let s = tp.s_grid[k];
        let w = Complex64::from_polar(1.0, std::f64::consts::PI * s);
        assert!(tp.paths.iter().all(|p| (p[k] - w).norm() < 1e-8 || (p[k] + w).norm() < 1e-8));
    }

    #[test]
    fn separate_loops_close() {
        let fam = PolyFamily::new(|s: f64| {
            let e = Complex64::from_polar(1.0, TAU * s);
            ComplexPoly::from_roots(&[e, -e])
        })
        .unwrap();
        let tp = track_roots(&fam, &TrackOptions::default()).unwrap();
        let res = monodromy_permutation(&tp).unwrap();
        assert!(res.is_pure);
        assert!(fourier_closure_residual(&tp, &res.permutation).unwrap() < 1e-10);
    }

    #[test]
    fn constant_family() {
        let fam = PolyFamily::new(|_s: f64| ComplexPoly::from_real(&[-1.0, 0.0, 1.0])).unwrap();
        let tp = track_roots(&fam, &TrackOptions::default()).unwrap();
        assert_eq!(tp.refinements, 0);
        let res = monodromy_permutation(&tp).unwrap();
        assert!(res.is_pure);
        assert!((res.min_discriminant - 4.0).abs() < 1e-12);
    }

    #[test]
    fn crossing_roots_resolved_by_jets() {
        // ±sin 2πs cross at s = 0 and s = 1/2, both grid points
        let fam = sine_square_family();
        let tp = track_roots(&fam, &TrackOptions::default()).unwrap();
        assert!(tp.jet_resolutions >= 1);
        assert_eq!(tp.jet_order_used, 1);
        let res = monodromy_permutation(&tp).unwrap();
        assert!(res.is_pure, "{:?}", res.permutation);
        // each path is ±sin, so it changes sign through s = 1/2
        let k = tp.uniform[128];
        let k3 = tp.uniform[384];
        for p in &tp.paths {
            assert!((p[k].re + p[k3].re).abs() < 1e-8);
            assert!((p[k].re.abs() - 1.0).abs() < 1e-8);
        }
        assert!(fourier_closure_residual(&tp, &res.permutation).unwrap() < 1e-6);
    }

    #[test]
    fn crossing_permutation_ignores_projection() {
        let fam = sine_square_family();
        let base = monodromy_permutation(&track_roots(&fam, &TrackOptions::default()).unwrap()).unwrap();
        for seed in 0..5u32 {
            let f = seed as f64;
            let v = unit(vec![c(1.0 + f, 0.3), c(-0.2, 0.7 * f + 0.1), c(0.5, -f)]);
            let opts = TrackOptions {
                projection: v,
                ..TrackOptions::default()
            };
            let res = monodromy_permutation(&track_roots(&fam, &opts).unwrap()).unwrap();
            assert_eq!(res.permutation, base.permutation);
        }
    }

    #[test]
    fn jets_split_by_first_derivative() {
        let e1 = JetVector::from_fn(|t| Complex64::from_polar(1.0, TAU * t), 0.0, 1e-4);
        let e2 = JetVector::from_fn(|t| Complex64::from_polar(1.0, 2.0 * TAU * t), 0.0, 1e-4);
        assert!((e1.values[1] - c(0.0, TAU)).norm() < 1e-6);
        let left = vec![e1.clone(), e2.clone()];
        let right = vec![e2, e1];
        let (a, k) = jet_tiebreak(&left, &right, &default_projection()).unwrap();
        assert_eq!(a, vec![1, 0]);
        assert_eq!(k, 1);
    }

    #[test]
    fn jets_split_by_second_derivative() {
        let up = JetVector::from_fn(|t| c(t * t, 0.0), 0.0, 1e-4);
        let down = JetVector::from_fn(|t| c(-t * t, 0.0), 0.0, 1e-4);
        assert!(jet_assign(&[up.clone(), down.clone()], &[down.clone(), up.clone()], &default_projection(), 1).is_none());
        let (a, k) = jet_tiebreak(&[up.clone(), down.clone()], &[down.clone(), up.clone()], &default_projection()).unwrap();
        assert_eq!((a, k), (vec![1, 0], 2));

        let same = vec![up.clone(), up];
        assert!(matches!(jet_tiebreak(&same, &same, &default_projection()), Err(Error::AmbiguousCrossing { .. })));
    }

    #[test]
    fn jets_reduce_to_values_when_distinct() {
        let a = JetVector { values: vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)] };
        let b = JetVector { values: vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)] };
        let (assign, _) = jet_tiebreak(&[a.clone(), b.clone()], &[b, a], &default_projection()).unwrap();
        assert_eq!(assign, vec![1, 0]);
    }

    #[test]
    fn jets_from_samples_are_exact_on_quadratics() {
        let f = |s: f64| c(3.0 - 2.0 * s + 5.0 * s * s, s);
        let j = JetVector::from_samples([0.1, 0.2, 0.35], [f(0.1), f(0.2), f(0.35)], 0.0);
        assert!((j.values[0] - c(3.0, 0.0)).norm() < 1e-12);
        assert!((j.values[1] - c(-2.0, 1.0)).norm() < 1e-11);
        assert!((j.values[2] - c(10.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn grid_doubling_keeps_permutation() {
        let fam = square_root_family();
        for grid in [64, 128, 256] {
            let opts = TrackOptions {
                initial_grid: grid,
                ..TrackOptions::default()
            };
            let res = monodromy_permutation(&track_roots(&fam, &opts).unwrap()).unwrap();
            assert_eq!(res.permutation, vec![1, 0]);
        }
    }

    #[test]
    fn broken_period_is_rejected() {
        let fam = PolyFamily::new(|s: f64| ComplexPoly::from_real(&[-1.0 - s, 0.0, 1.0])).unwrap();
        assert!(matches!(track_roots(&fam, &TrackOptions::default()), Err(Error::ClosureViolation(_))));
    }

    #[test]
    fn discriminant_profile_of_sine_square() {
        let prof = discriminant_profile(&sine_square_family(), 256).unwrap();
        assert!(prof.min_abs < 1e-20);
        assert!(prof.argmin == 0.0 || (prof.argmin - 0.5).abs() < 1e-12);
        assert_eq!(prof.multiplicity_bound, 2);
        let zeros: Vec<f64> = prof.minima.iter().filter(|m| m.1 < 1e-12).map(|m| m.0).collect();
        assert_eq!(zeros, vec![0.0, 0.5]);
    }

    #[test]
    fn discriminant_profile_of_simple_family() {
        let prof = discriminant_profile(&square_root_family(), 128).unwrap();
        assert!((prof.min_abs - 4.0).abs() < 1e-9);
        assert_eq!(prof.multiplicity_bound, 1);
    }

    #[test]
    fn trig_interpolation_is_exact_for_low_modes() {
        let x: Vec<Complex64> = (0..16)
            .map(|m| {
                let s = m as f64 / 16.0;
                Complex64::from_polar(1.0, TAU * 3.0 * s) + c((TAU * s).cos(), 0.0)
            })
            .collect();
        let cf = dft(&x);
        let s = 0.123;
        let exact = Complex64::from_polar(1.0, TAU * 3.0 * s) + c((TAU * s).cos(), 0.0);
        assert!((trig_eval(&cf, s) - exact).norm() < 1e-12);
    }
}
