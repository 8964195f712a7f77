//! Newton polygons, Newton–Puiseux expansions, the quadratic reducibility
//! test, and point-primary (Hensel) splitting by contour integrals.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{self, ComplexPoly, SeriesPoly};
use crate::series::DEFAULT_ORD_TOL;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Series whose largest coefficient is below this fraction of the
/// polynomial's largest coefficient are treated as the zero germ.
const GERM_NOISE: f64 = 1e-13;
/// Relative threshold for "numerically zero" coefficients inside the
/// Newton–Puiseux recursion.
const PUISEUX_ZERO_TOL: f64 = 1e-9;
/// Roots of a segment's characteristic equation closer than this (relative)
/// are treated as one repeated root.
const CHAR_ROOT_CLUSTER_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    /// Horizontal length `m_j`.
    pub length: usize,
    #[serde(with = "ratio_str")]
    pub slope: Ratio<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NewtonPolygonData {
    pub points: Vec<(usize, usize)>,
    #[serde(rename = "hull")]
    pub hull_vertices: Vec<(usize, usize)>,
    pub segments: Vec<Segment>,
}

/// Lower convex hull of `{(j, ord q_j)}` from `(0, ord q_0)` to `(m, 0)`.
pub fn newton_polygon(q: &SeriesPoly) -> Result<NewtonPolygonData> {
    if !q.is_monic() {
        return Err(Error::NotMonic);
    }
    let scale = q.norm_inf();
    let ords: Vec<Option<usize>> = q
        .coeffs()
        .iter()
        .map(|s| {
            if s.max_abs() <= GERM_NOISE * scale {
                None
            } else {
                s.ord(DEFAULT_ORD_TOL)
            }
        })
        .collect();
    if ords[0].is_none() {
        return Err(Error::ZFactorRequired);
    }
    let points: Vec<(usize, usize)> = ords
        .iter()
        .enumerate()
        .filter_map(|(j, o)| o.map(|o| (j, o)))
        .collect();
    let hull = lower_hull(&points);
    let segments = hull_segments(&hull);
    Ok(NewtonPolygonData {
        points,
        hull_vertices: hull,
        segments,
    })
}

/// Lower hull of points sorted by abscissa, dropping collinear interior
/// points, so consecutive slopes strictly increase.
fn lower_hull(points: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut hull: Vec<(usize, usize)> = Vec::new();
    for &p in points {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.0 as i64 - a.0 as i64) * (p.1 as i64 - a.1 as i64)
                - (b.1 as i64 - a.1 as i64) * (p.0 as i64 - a.0 as i64);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

fn hull_segments(hull: &[(usize, usize)]) -> Vec<Segment> {
    hull.windows(2)
        .map(|w| {
            let dx = (w[1].0 - w[0].0) as i64;
            let dy = w[1].1 as i64 - w[0].1 as i64;
            Segment {
                length: dx as usize,
                slope: Ratio::new(dy, dx),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PuiseuxTerm {
    #[serde(with = "ratio_str")]
    pub exponent: Ratio<i64>,
    pub coefficient: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PuiseuxBranch {
    pub ramification: i64,
    pub terms: Vec<PuiseuxTerm>,
    pub depth: usize,
    /// Number of roots this expansion stands for; above 1 only for
    /// unresolved or repeated branches.
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub multiplicity: usize,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub unresolved: bool,
}

fn one() -> usize {
    1
}

fn is_one(n: &usize) -> bool {
    *n == 1
}

impl PuiseuxBranch {
    /// Evaluates the truncated expansion at real `t ≥ 0` (principal powers).
    pub fn eval(&self, t: f64) -> Complex64 {
        self.eval_complex(Complex64::new(t, 0.0))
    }

    pub fn eval_complex(&self, t: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|term| {
                if t == ZERO {
                    if *term.exponent.numer() == 0 {
                        term.coefficient
                    } else {
                        ZERO
                    }
                } else {
                    let e = *term.exponent.numer() as f64 / *term.exponent.denom() as f64;
                    term.coefficient * t.powf(e)
                }
            })
            .sum()
    }

    pub fn has_integer_exponents(&self) -> bool {
        self.terms.iter().all(|t| t.exponent.is_integer())
    }
}

/// Working state of one Newton–Puiseux path. Coefficients are series in
/// `w = t^{1/ram}`, each holding the `prec` coefficients that are known.
#[derive(Clone)]
struct Work {
    coeffs: Vec<Vec<Complex64>>,
    ram: i64,
    offset: Ratio<i64>,
    terms: Vec<PuiseuxTerm>,
}

impl Work {
    fn prec(&self) -> usize {
        self.coeffs[0].len()
    }

    fn ramify(&mut self, b: i64) {
        if b == 1 {
            return;
        }
        let b = b as usize;
        for c in &mut self.coeffs {
            let mut out = vec![ZERO; c.len() * b];
            for (k, &v) in c.iter().enumerate() {
                out[k * b] = v;
            }
            *c = out;
        }
        self.ram *= b as i64;
    }

    fn emit(&self, multiplicity: usize, unresolved: bool) -> PuiseuxBranch {
        let ramification = self
            .terms
            .iter()
            .fold(1i64, |acc, t| acc.lcm(t.exponent.denom()));
        PuiseuxBranch {
            ramification,
            terms: self.terms.clone(),
            depth: self.terms.len(),
            multiplicity,
            unresolved,
        }
    }
}

/// Newton–Puiseux expansion of every root of `Q`, up to `depth` terms each.
///
/// Each segment of the polygon contributes branches whose leading exponent
/// is minus its slope. Repeated roots of a characteristic equation recurse
/// with multiplicity; if they are still unresolved after `depth` terms the
/// branch is returned once with `unresolved = true`.
pub fn puiseux_branches(q: &SeriesPoly, depth: usize) -> Result<Vec<PuiseuxBranch>> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    newton_polygon(q)?;
    let work = Work {
        coeffs: q.coeffs().iter().map(|s| s.coeffs().to_vec()).collect(),
        ram: 1,
        offset: Ratio::from_integer(0),
        terms: Vec::new(),
    };
    let mut out = Vec::new();
    expand(work, q.degree(), depth, &mut out)?;
    Ok(out)
}

fn expand(work: Work, r: usize, depth_left: usize, out: &mut Vec<PuiseuxBranch>) -> Result<()> {
    let scale = work.coeffs[..=r]
        .iter()
        .flat_map(|c| c.iter())
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let tol = PUISEUX_ZERO_TOL * scale;
    let ords: Vec<Option<usize>> = work.coeffs[..=r]
        .iter()
        .map(|c| c.iter().position(|z| z.norm() > tol))
        .collect();

    // Exact zero roots in the current variable end the expansion.
    let e = ords.iter().take_while(|o| o.is_none()).count().min(r);
    if e > 0 && work.prec() > 0 && !work.terms.is_empty() {
        out.push(work.emit(e, e > 1));
    } else if e > 0 {
        // Only reachable if the polygon rejects a zero constant term upstream.
        return Err(Error::ZFactorRequired);
    }
    let rem = r - e;
    if rem == 0 {
        return Ok(());
    }
    let points: Vec<(usize, usize)> = (e..=r).filter_map(|i| ords[i].map(|o| (i, o))).collect();
    if depth_left == 0 || points.len() < 2 || work.prec() == 0 {
        out.push(work.emit(rem, rem > 1));
        return Ok(());
    }
    let hull = lower_hull(&points);
    for seg in hull.windows(2) {
        let (x0, y0) = seg[0];
        let (x1, y1) = seg[1];
        let m_j = x1 - x0;
        let slope = Ratio::new(y1 as i64 - y0 as i64, m_j as i64);
        let neg = -slope;
        let (a, b) = (*neg.numer(), *neg.denom());

        let mut w = work.clone();
        w.ramify(b);
        let y0s = y0 * b as usize;
        let g = a as usize;
        let lineval = y0s + g * x0;

        // Characteristic equation Σ a_i c^{i - x0} over the segment.
        let charpoly = ComplexPoly::new(
            (x0..=x1)
                .map(|i| {
                    let h = y0s - g * (i - x0);
                    w.coeffs[i].get(h).copied().unwrap_or(ZERO)
                })
                .collect(),
        );
        let roots = poly::poly_roots(&charpoly)?;
        let exponent = w.offset + Ratio::new(a, w.ram);
        for (c, mult) in cluster_values(&roots, CHAR_ROOT_CLUSTER_TOL) {
            let mut child = substitute(&w, c, g, lineval);
            child.offset = exponent;
            child.terms.push(PuiseuxTerm {
                exponent,
                coefficient: c,
            });
            if child.prec() == 0 {
                out.push(child.emit(mult, mult > 1));
                continue;
            }
            for k in 0..mult {
                child.coeffs[k][0] = ZERO;
            }
            expand(child, mult, depth_left - 1, out)?;
        }
    }
    Ok(())
}

/// `z = w^g (c + z₁)` followed by division by `w^L`.
fn substitute(w: &Work, c: Complex64, g: usize, l: usize) -> Work {
    let deg = w.coeffs.len() - 1;
    let prec = w.prec();
    let new_prec = prec.saturating_sub(l);
    let mut coeffs = vec![vec![ZERO; new_prec]; deg + 1];
    // binom(i, k) c^{i-k}, built row by row.
    for i in 0..=deg {
        let shift = g * i;
        let mut binom = 1.0f64;
        let mut cpow = vec![ONE; i + 1];
        for j in 1..=i {
            cpow[j] = cpow[j - 1] * c;
        }
        for k in 0..=i {
            if k > 0 {
                binom = binom * (i - k + 1) as f64 / k as f64;
            }
            let factor = cpow[i - k] * binom;
            for (n, slot) in coeffs[k].iter_mut().enumerate() {
                // coefficient index before division: n + l = shift + src
                let idx = n + l;
                if idx >= shift && idx - shift < prec {
                    *slot += factor * w.coeffs[i][idx - shift];
                }
            }
        }
    }
    Work {
        coeffs,
        ram: w.ram,
        offset: w.offset,
        terms: w.terms.clone(),
    }
}

/// Groups nearly equal values (single linkage, relative tolerance) and
/// returns cluster means with their sizes, in input order of first member.
fn cluster_values(values: &[Complex64], rel_tol: f64) -> Vec<(Complex64, usize)> {
    let n = values.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut Vec<usize>, i: usize) -> usize {
        let mut i = i;
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            let s = values[i].norm().max(values[j].norm()).max(1.0);
            if (values[i] - values[j]).norm() <= rel_tol * s {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..n {
        let root = find(&mut label, i);
        if let Some(g) = groups.iter_mut().find(|g| g.0 == root) {
            g.1 += values[i];
            g.2 += 1;
        } else {
            groups.push((root, values[i], 1));
        }
    }
    groups
        .into_iter()
        .map(|(_, sum, k)| (sum / k as f64, k))
        .collect()
}

/// Checks that the branches form one conjugacy class: rotating the last
/// branch by `t^{1/m} → e^{2πij/m} t^{1/m}` for `j = 1..m-1` yields each of
/// the other branches exactly once.
pub fn conjugacy_check(branches: &[PuiseuxBranch], m: usize, tol: f64) -> bool {
    if branches.len() != m || m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let reference = &branches[m - 1];
    let mut used = vec![false; m - 1];
    for j in 1..m {
        let mut rotated = Vec::with_capacity(reference.terms.len());
        for term in &reference.terms {
            let k = term.exponent * Ratio::from_integer(m as i64);
            if !k.is_integer() {
                return false;
            }
            let phase = TAU * (j as i64 * k.to_integer()) as f64 / m as f64;
            rotated.push((term.exponent, term.coefficient * Complex64::from_polar(1.0, phase)));
        }
        let hit = (0..m - 1).find(|&i| {
            !used[i] && {
                let other = &branches[i];
                other.terms.len() == rotated.len()
                    && other
                        .terms
                        .iter()
                        .zip(&rotated)
                        .all(|(a, (e, c))| a.exponent == *e && (a.coefficient - c).norm() <= tol)
            }
        });
        match hit {
            Some(i) => used[i] = true,
            None => return false,
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum QuadraticType {
    /// Completely reducible: the two roots are analytic germs.
    Cr,
    Irreducible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticClass {
    pub kind: QuadraticType,
    /// Vanishing order of the discriminant germ.
    pub k: usize,
}

/// A monic quadratic over germs splits iff its discriminant has even
/// vanishing order.
pub fn quadratic_cr_classify(q: &SeriesPoly) -> Result<QuadraticClass> {
    if q.degree() != 2 {
        return Err(Error::InvalidArgument(format!(
            "quadratic classifier needs degree 2, got {}",
            q.degree()
        )));
    }
    let d = poly::series_poly_discriminant(q)?;
    if d.max_abs() <= GERM_NOISE * poly::series_discriminant_scale(q) {
        return Err(Error::Degenerate);
    }
    let k = d.ord(DEFAULT_ORD_TOL).ok_or(Error::Degenerate)?;
    let kind = if k % 2 == 0 {
        QuadraticType::Cr
    } else {
        QuadraticType::Irreducible
    };
    Ok(QuadraticClass { kind, k })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HenselCluster {
    pub center: Complex64,
    pub multiplicity: usize,
    /// Contour radius; `None` when there is only one cluster.
    pub radius: Option<f64>,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HenselFactorization {
    pub clusters: Vec<HenselCluster>,
    pub sample_ts: Vec<f64>,
    /// `factors[s][c]` is the factor for cluster `c` at `sample_ts[s]`.
    pub factors: Vec<Vec<ComplexPoly>>,
    pub max_residual: f64,
}

pub struct HenselOptions {
    pub delta_max: f64,
    pub n_contour: usize,
    pub n_tsamples: usize,
}

impl Default for HenselOptions {
    fn default() -> Self {
        Self {
            delta_max: 0.1,
            n_contour: 256,
            n_tsamples: 16,
        }
    }
}

const CONTOUR_FLOOR: f64 = 1e-6;
const DELTA_PROBES: usize = 64;
const MAX_HALVINGS: usize = 40;
const RECONSTRUCTION_LIMIT: f64 = 1e-6;
const PRELIM_CLUSTER_TOL: f64 = 1e-5;
const QUADRATURE_AGREEMENT: f64 = 1e-11;

/// Point-primary factorisation of `Q(t, ·)` near `t = 0`.
///
/// Roots of `Q(0, ·)` are clustered, each cluster gets a circle of radius
/// `r = min distance between distinct centers / 3`, and for each sample `t`
/// the factor belonging to a cluster is recovered from contour power sums
/// through Newton's identities.
pub fn hensel_split<F>(q_eval: F, opts: &HenselOptions) -> Result<HenselFactorization>
where
    F: Fn(f64) -> ComplexPoly + Sync,
{
    if opts.n_contour < 64 {
        return Err(Error::InvalidArgument(format!(
            "n_contour must be at least 64, got {}",
            opts.n_contour
        )));
    }
    if opts.n_tsamples == 0 || !(opts.delta_max > 0.0) {
        return Err(Error::InvalidArgument("need positive delta_max and n_tsamples".into()));
    }
    let q0 = q_eval(0.0);
    if !q0.is_monic() {
        return Err(Error::NotMonic);
    }
    let m = q0.degree();
    if m == 0 {
        return Err(Error::DegreeTooLow { required: 1, found: 0 });
    }
    let roots0 = poly::poly_roots(&q0)?;
    let scale0 = q0.norm_inf().max(1.0);
    let prelim = cluster_values(&roots0, PRELIM_CLUSTER_TOL);

    if prelim.len() == 1 {
        let (center, mult) = prelim[0];
        let ts = sample_grid(opts.delta_max, opts.n_tsamples);
        let factors = ts.iter().map(|&t| vec![q_eval(t)]).collect();
        return Ok(HenselFactorization {
            clusters: vec![HenselCluster {
                center,
                multiplicity: mult,
                radius: None,
                delta: opts.delta_max,
            }],
            sample_ts: ts,
            factors,
            max_residual: 0.0,
        });
    }

    // Refine each center as the mean of its roots via the contour integral
    // p_1 / p_0, then fix r from the refined centers.
    let r_prelim = min_pairwise(&prelim.iter().map(|c| c.0).collect::<Vec<_>>()) / 3.0;
    let mut centers: Vec<(Complex64, usize)> = prelim
        .iter()
        .map(|&(c, k)| {
            let ps = power_sums(&q0, c, r_prelim, opts.n_contour, 1);
            let center = if ps[0].norm() > 0.5 { c + ps[1] / ps[0] } else { c };
            (center, k)
        })
        .collect();
    let r = min_pairwise(&centers.iter().map(|c| c.0).collect::<Vec<_>>()) / 3.0;
    // Single-linkage check at r/2: every root must sit within r/2 of its center.
    for &z in &roots0 {
        let d = centers.iter().map(|c| (c.0 - z).norm()).fold(f64::INFINITY, f64::min);
        if d > r / 2.0 {
            return Err(Error::Degenerate);
        }
    }
    centers.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));

    let mut clusters = Vec::with_capacity(centers.len());
    for &(center, mult) in &centers {
        let delta = search_delta(&q_eval, center, r, mult, scale0, opts)?;
        clusters.push(HenselCluster {
            center,
            multiplicity: mult,
            radius: Some(r),
            delta,
        });
    }
    let delta = clusters.iter().map(|c| c.delta).fold(f64::INFINITY, f64::min);
    let ts = sample_grid(delta, opts.n_tsamples);

    let mut factors = Vec::with_capacity(ts.len());
    let mut max_residual: f64 = 0.0;
    for &t in &ts {
        let qt = q_eval(t);
        let mut row = Vec::with_capacity(clusters.len());
        for cl in &clusters {
            let ps = power_sums(&qt, cl.center, r, opts.n_contour, cl.multiplicity);
            if (ps[0].re - cl.multiplicity as f64).abs() > 0.1 || ps[0].im.abs() > 0.1 {
                return Err(Error::ContourBreach {
                    center: format!("{}", cl.center),
                    winding: ps[0].re,
                });
            }
            row.push(factor_from_power_sums(&ps[1..], cl.center));
        }
        let product = row
            .iter()
            .fold(ComplexPoly::constant(ONE), |acc, f| acc.mul(f));
        let diff = product.sub(&qt).norm_inf() / qt.norm_inf().max(1.0);
        max_residual = max_residual.max(diff);
        factors.push(row);
    }
    if max_residual > RECONSTRUCTION_LIMIT {
        return Err(Error::QuadratureFailure {
            residual: max_residual,
            limit: RECONSTRUCTION_LIMIT,
        });
    }
    Ok(HenselFactorization {
        clusters,
        sample_ts: ts,
        factors,
        max_residual,
    })
}

fn sample_grid(delta: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| -delta + (2 * k + 1) as f64 * delta / n as f64)
        .collect()
}

fn min_pairwise(points: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            best = best.min((points[i] - points[j]).norm());
        }
    }
    best
}

fn search_delta<F>(
    q_eval: &F,
    center: Complex64,
    r: f64,
    mult: usize,
    scale: f64,
    opts: &HenselOptions,
) -> Result<f64>
where
    F: Fn(f64) -> ComplexPoly,
{
    let mut delta = opts.delta_max;
    let probe_nodes = 64usize;
    for _ in 0..MAX_HALVINGS {
        let ok = (0..DELTA_PROBES).all(|k| {
            let t = -delta + 2.0 * delta * k as f64 / (DELTA_PROBES - 1) as f64;
            let qt = q_eval(t);
            let min_abs = (0..probe_nodes)
                .map(|j| qt.eval(center + Complex64::from_polar(r, TAU * j as f64 / probe_nodes as f64)).norm())
                .fold(f64::INFINITY, f64::min);
            if min_abs <= CONTOUR_FLOOR * scale {
                return false;
            }
            let full = power_sums(&qt, center, r, opts.n_contour, mult);
            if (full[0].re - mult as f64).abs() >= 0.1 || full[0].im.abs() >= 0.1 {
                return false;
            }
            // Trapezoid error decays like (root distance / r)^nodes; comparing
            // against half the nodes detects roots hugging the contour.
            let half = power_sums(&qt, center, r, opts.n_contour / 2, mult);
            full.iter()
                .zip(&half)
                .all(|(a, b)| (a - b).norm() <= QUADRATURE_AGREEMENT * mult as f64)
        });
        if ok {
            return Ok(delta);
        }
        delta /= 2.0;
    }
    Err(Error::ContourBreach {
        center: format!("{center}"),
        winding: f64::NAN,
    })
}

/// `p_s = (1/2πi) ∮ (w − μ)^s Q′(w)/Q(w) dw` for `s = 0..=smax` on the
/// circle `|w − μ| = r`, by the trapezoid rule.
fn power_sums(q: &ComplexPoly, mu: Complex64, r: f64, nodes: usize, smax: usize) -> Vec<Complex64> {
    let dq = q.derivative();
    let mut sums = vec![ZERO; smax + 1];
    for j in 0..nodes {
        let y = Complex64::from_polar(r, TAU * j as f64 / nodes as f64);
        let w = mu + y;
        let f = dq.eval(w) / q.eval(w) * y;
        let mut ypow = ONE;
        for s in sums.iter_mut() {
            *s += f * ypow;
            ypow *= y;
        }
    }
    sums.into_iter().map(|s| s / nodes as f64).collect()
}

/// Monic polynomial in `z` whose roots `λ_i` have power sums
/// `Σ (λ_i − μ)^s = ps[s-1]`, `s = 1..k`.
fn factor_from_power_sums(ps: &[Complex64], mu: Complex64) -> ComplexPoly {
    let k = ps.len();
    // Newton's identities: j e_j = Σ_{i=1}^{j} (-1)^{i-1} e_{j-i} p_i.
    let mut e = vec![ZERO; k + 1];
    e[0] = ONE;
    for j in 1..=k {
        let mut acc = ZERO;
        for i in 1..=j {
            let term = e[j - i] * ps[i - 1];
            acc += if i % 2 == 1 { term } else { -term };
        }
        e[j] = acc / j as f64;
    }
    // In y = z − μ: Π(y − y_i) = Σ_j (-1)^j e_j y^{k-j}.
    let ycoeffs: Vec<Complex64> = (0..=k)
        .map(|d| {
            let j = k - d;
            if j % 2 == 0 {
                e[j]
            } else {
                -e[j]
            }
        })
        .collect();
    // Taylor shift back: substitute y = z − μ.
    let mut out = ComplexPoly::constant(ZERO);
    let lin = ComplexPoly::new(vec![-mu, ONE]);
    let mut pow = ComplexPoly::constant(ONE);
    for &c in &ycoeffs {
        out = out.add(&pow.scale(c));
        pow = pow.mul(&lin);
    }
    let mut coeffs = out.into_coeffs();
    coeffs.truncate(k + 1);
    coeffs[k] = ONE;
    ComplexPoly::new(coeffs)
}

mod ratio_str {
    use num_rational::Ratio;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Ratio<i64>, s: S) -> Result<S::Ok, S::Error> {
        if r.is_integer() {
            s.serialize_str(&r.numer().to_string())
        } else {
            s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio<i64>, D::Error> {
        let s = String::deserialize(d)?;
        s.parse::<Ratio<i64>>().map_err(serde::de::Error::custom)
    }
}
