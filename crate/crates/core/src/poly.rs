//! Univariate polynomials over ℂ and over truncated series: evaluation,
//! roots, ε-GCD with Bezout cofactors, Sylvester resultants and
//! discriminants.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::series::TruncatedSeries;

/// Default remainder threshold for [`euclid_gcd_bezout`].
pub const DEFAULT_GCD_EPS: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Coefficients in ascending degree. The degree is `len - 1`; a leading zero
/// is kept as given, so callers decide when to [`trim`](ComplexPoly::trim).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let coeffs = if coeffs.is_empty() { vec![ZERO] } else { coeffs };
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn from_roots(roots: &[Complex64]) -> Self {
        Self::new(linalg::poly_from_roots(roots))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.degree()]
    }

    pub fn is_monic(&self) -> bool {
        (self.leading() - ONE).norm() <= 1e-12
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// `P′`; the derivative of a constant is the zero constant.
    pub fn derivative(&self) -> Self {
        if self.degree() == 0 {
            return Self::constant(ZERO);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Drops leading coefficients with modulus at most `abs_tol`, keeping at
    /// least the constant term.
    pub fn trim(&self, abs_tol: f64) -> Self {
        let mut c = self.coeffs.clone();
        while c.len() > 1 && c[c.len() - 1].norm() <= abs_tol {
            c.pop();
        }
        Self::new(c)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn monic(&self) -> Result<Self> {
        let lead = self.leading();
        if lead == ZERO {
            return Err(Error::ZeroLeadingCoefficient);
        }
        let mut m = self.scale(lead.inv());
        let d = m.degree();
        m.coeffs[d] = ONE;
        Ok(m)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Long division; the divisor's leading coefficient must be nonzero.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let lead = divisor.leading();
        if lead == ZERO {
            return Err(Error::ZeroLeadingCoefficient);
        }
        let dn = divisor.degree();
        if self.degree() < dn {
            return Ok((Self::constant(ZERO), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![ZERO; self.degree() - dn + 1];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dn] / lead;
            quot[k] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= c * d;
            }
            rem[k + dn] = ZERO;
        }
        rem.truncate(dn.max(1));
        Ok((Self::new(quot), Self::new(rem)))
    }
}

/// The `(m+n) × (m+n)` Sylvester matrix: `n` shifted rows of `P`'s
/// coefficients (highest degree first) followed by `m` shifted rows of `Q`'s.
pub fn sylvester_matrix(p: &ComplexPoly, q: &ComplexPoly) -> DMatrix<Complex64> {
    let rows = sylvester_rows(p.coeffs(), q.coeffs(), ZERO);
    let n = rows.len();
    DMatrix::from_fn(n, n, |r, c| rows[r][c])
}

fn sylvester_rows<T: Clone>(p: &[T], q: &[T], zero: T) -> Vec<Vec<T>> {
    let m = p.len() - 1;
    let n = q.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (src, count) in [(p, n), (q, m)] {
        let deg = src.len() - 1;
        for shift in 0..count {
            let mut row = vec![zero.clone(); size];
            for (k, c) in src.iter().enumerate() {
                row[shift + deg - k] = c.clone();
            }
            rows.push(row);
        }
    }
    rows
}

fn check_resultant_args(p: &ComplexPoly, q: &ComplexPoly) -> Result<()> {
    for f in [p, q] {
        if f.degree() < 1 {
            return Err(Error::DegreeTooLow {
                required: 1,
                found: f.degree(),
            });
        }
        if f.leading() == ZERO {
            return Err(Error::ZeroLeadingCoefficient);
        }
    }
    Ok(())
}

/// `R(P, Q)` as the determinant of the Sylvester matrix (LU with pivoting).
pub fn sylvester_resultant(p: &ComplexPoly, q: &ComplexPoly) -> Result<Complex64> {
    check_resultant_args(p, q)?;
    Ok(linalg::determinant(&sylvester_matrix(p, q)))
}

/// Magnitude against which a resultant is judged to vanish:
/// `‖P‖∞^deg Q · ‖Q‖∞^deg P`, the natural size of a bihomogeneous form of
/// that bidegree.
pub fn resultant_scale(p: &ComplexPoly, q: &ComplexPoly) -> f64 {
    p.norm_inf().powi(q.degree() as i32) * q.norm_inf().powi(p.degree() as i32)
}

/// `D(P) = −R(P, P′)` for monic `P` of degree ≥ 2.
pub fn discriminant(p: &ComplexPoly) -> Result<Complex64> {
    check_discriminant_args(p)?;
    Ok(-sylvester_resultant(p, &p.derivative())?)
}

fn check_discriminant_args(p: &ComplexPoly) -> Result<()> {
    if p.degree() < 2 {
        return Err(Error::DegreeTooLow {
            required: 2,
            found: p.degree(),
        });
    }
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    Ok(())
}

pub fn discriminant_scale(p: &ComplexPoly) -> f64 {
    resultant_scale(p, &p.derivative())
}

/// Simplicity test: `|D(P)| > eps · scale`.
pub fn is_simple(p: &ComplexPoly, eps: f64) -> Result<bool> {
    let d = discriminant(p)?;
    Ok(d.norm() > eps * discriminant_scale(p))
}

/// Result of [`euclid_gcd_bezout`]: `g = p1·P + q1·Q` with `g` monic.
#[derive(Debug, Clone, PartialEq)]
pub struct GcdBezout {
    pub g: ComplexPoly,
    pub p1: ComplexPoly,
    pub q1: ComplexPoly,
}

/// Extended Euclid with ε-thresholded remainders.
///
/// A remainder is treated as zero once its ∞-norm drops below `eps` times
/// the ∞-norm of the current dividend; leading coefficients below the same
/// threshold are trimmed before the next division.
pub fn euclid_gcd_bezout(p: &ComplexPoly, q: &ComplexPoly, eps: f64) -> Result<GcdBezout> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    let p_t = p.trim(0.0);
    let q_t = q.trim(0.0);
    if p_t.is_zero() && q_t.is_zero() {
        return Err(Error::InvalidArgument("gcd of two zero polynomials".into()));
    }
    if q_t.is_zero() {
        return finish(p_t.clone(), ComplexPoly::constant(ONE), ComplexPoly::constant(ZERO));
    }
    if p_t.is_zero() {
        return finish(q_t.clone(), ComplexPoly::constant(ZERO), ComplexPoly::constant(ONE));
    }
    let swapped = p_t.degree() < q_t.degree();
    let (a, b) = if swapped { (q_t, p_t) } else { (p_t, q_t) };

    // Invariants: r0 = s0·a + t0·b, r1 = s1·a + t1·b.
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (ComplexPoly::constant(ONE), ComplexPoly::constant(ZERO));
    let (mut t0, mut t1) = (ComplexPoly::constant(ZERO), ComplexPoly::constant(ONE));
    loop {
        let (quot, rem) = r0.div_rem(&r1)?;
        let threshold = eps * r0.norm_inf();
        if rem.norm_inf() < threshold || r1.degree() == 0 {
            break;
        }
        let rem = rem.trim(threshold);
        let s2 = s0.sub(&quot.mul(&s1));
        let t2 = t0.sub(&quot.mul(&t1));
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let (pa, qa) = if swapped { (t1, s1) } else { (s1, t1) };
    finish(r1, pa, qa)
}

fn finish(g: ComplexPoly, p1: ComplexPoly, q1: ComplexPoly) -> Result<GcdBezout> {
    let lead = g.leading();
    if g.degree() == 0 {
        let inv = lead.inv();
        return Ok(GcdBezout {
            g: ComplexPoly::constant(ONE),
            p1: p1.scale(inv),
            q1: q1.scale(inv),
        });
    }
    let inv = lead.inv();
    Ok(GcdBezout {
        g: g.monic()?,
        p1: p1.scale(inv),
        q1: q1.scale(inv),
    })
}

/// Roots with multiplicity: eigenvalues of the balanced companion matrix,
/// each followed by one Newton step that is kept only if it reduces `|P|`.
pub fn poly_roots(p: &ComplexPoly) -> Result<Vec<Complex64>> {
    if p.degree() == 0 {
        return Err(Error::DegreeTooLow {
            required: 1,
            found: 0,
        });
    }
    let monic = p.monic()?;
    let m = monic.degree();
    if m == 1 {
        return Ok(vec![-monic.coeff(0)]);
    }
    let mut comp = DMatrix::from_element(m, m, ZERO);
    for i in 1..m {
        comp[(i, i - 1)] = ONE;
    }
    for i in 0..m {
        comp[(i, m - 1)] = -monic.coeff(i);
    }
    balance(&mut comp);
    let roots = linalg::eigenvalues(&comp)?;
    let dp = monic.derivative();
    Ok(roots
        .into_iter()
        .map(|z| {
            let f = monic.eval(z);
            let d = dp.eval(z);
            if d == ZERO {
                return z;
            }
            let z1 = z - f / d;
            if monic.eval(z1).norm() < f.norm() {
                z1
            } else {
                z
            }
        })
        .collect())
}

/// Parlett–Reinsch diagonal balancing with powers of two (exact in floating
/// point), applied in place.
fn balance(a: &mut DMatrix<Complex64>) {
    const RADIX: f64 = 2.0;
    let n = a.nrows();
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].norm();
                    r += a[(i, j)].norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut cc = c;
            while cc < r / RADIX {
                cc *= RADIX;
                f *= RADIX;
            }
            while cc >= r * RADIX {
                cc /= RADIX;
                f /= RADIX;
            }
            if (cc + r / f) < 0.95 * s {
                converged = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

/// Minimal ring interface for division-free determinants.
pub trait Ring: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self {
        self.zero_like().sub(self)
    }
}

impl Ring for Complex64 {
    fn zero_like(&self) -> Self {
        ZERO
    }
    fn one_like(&self) -> Self {
        ONE
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

// Binary operations here only ever see operands built from one SeriesPoly,
// which shares base point and order by construction.
impl Ring for TruncatedSeries {
    fn zero_like(&self) -> Self {
        TruncatedSeries::zero(self.base_point(), self.order())
    }
    fn one_like(&self) -> Self {
        TruncatedSeries::one(self.base_point(), self.order())
    }
    fn add(&self, other: &Self) -> Self {
        TruncatedSeries::add(self, other).expect("compatible series")
    }
    fn sub(&self, other: &Self) -> Self {
        TruncatedSeries::sub(self, other).expect("compatible series")
    }
    fn mul(&self, other: &Self) -> Self {
        TruncatedSeries::mul(self, other).expect("compatible series")
    }
}

/// Largest matrix size handled by memoised cofactor expansion.
pub const LAPLACE_MAX_SIZE: usize = 9;

/// Determinant over a commutative ring without division: memoised Laplace
/// expansion up to [`LAPLACE_MAX_SIZE`], Berkowitz's algorithm above.
pub fn ring_determinant<T: Ring>(a: &[Vec<T>]) -> T {
    if a.len() <= LAPLACE_MAX_SIZE {
        laplace_determinant(a)
    } else {
        berkowitz_determinant(a)
    }
}

/// Cofactor expansion along successive rows, memoised over column subsets
/// (`O(n 2^n)` ring multiplications).
pub fn laplace_determinant<T: Ring>(a: &[Vec<T>]) -> T {
    let n = a.len();
    assert!(n > 0 && n < 20, "laplace_determinant supports 1..20 rows");
    let unit = a[0][0].one_like();
    let mut dp: Vec<Option<T>> = vec![None; 1 << n];
    dp[0] = Some(unit);
    for mask in 1usize..(1 << n) {
        let k = mask.count_ones() as usize;
        let row = &a[k - 1];
        let mut acc = row[0].zero_like();
        let mut pos = 0;
        for (j, entry) in row.iter().enumerate() {
            if mask & (1 << j) == 0 {
                continue;
            }
            let minor = dp[mask & !(1 << j)].as_ref().expect("filled in mask order");
            let term = entry.mul(minor);
            // Sign of the (k-1, pos) cofactor within the k×k submatrix.
            acc = if (k - 1 + pos) % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            pos += 1;
        }
        dp[mask] = Some(acc);
    }
    dp.pop().flatten().expect("full mask")
}

/// Berkowitz's division-free characteristic-polynomial recursion; returns
/// the determinant.
pub fn berkowitz_determinant<T: Ring>(a: &[Vec<T>]) -> T {
    let n = a.len();
    assert!(n > 0);
    let zero = a[0][0].zero_like();
    let one = a[0][0].one_like();
    // `v` holds the characteristic polynomial of the leading r×r block,
    // highest degree first.
    let mut v = vec![one.clone(), a[0][0].neg()];
    for r in 1..n {
        // Partition of the leading (r+1)×(r+1) block: A_r (r×r), R (row), C (column), a_rr.
        let c: Vec<T> = (0..r).map(|i| a[i][r].clone()).collect();
        let row: Vec<T> = (0..r).map(|j| a[r][j].clone()).collect();
        // Toeplitz column: 1, -a_rr, -R C, -R A C, -R A² C, ...
        let mut col = Vec::with_capacity(r + 2);
        col.push(one.clone());
        col.push(a[r][r].neg());
        let mut x = c;
        for _ in 0..r {
            let rx = dot(&row, &x, &zero);
            col.push(rx.neg());
            x = (0..r)
                .map(|i| dot(&a[i][..r], &x, &zero))
                .collect();
        }
        // New polynomial = Toeplitz(col) (size (r+2)×(r+1)) times v.
        let mut next = vec![zero.clone(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                if i >= j {
                    *slot = slot.add(&col[i - j].mul(vj));
                }
            }
        }
        v = next;
    }
    let last = v[n].clone();
    if n % 2 == 0 {
        last
    } else {
        last.neg()
    }
}

fn dot<T: Ring>(a: &[T], b: &[T], zero: &T) -> T {
    a.iter().zip(b).fold(zero.clone(), |acc, (x, y)| acc.add(&x.mul(y)))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SeriesPolyRepr {
    coeffs: Vec<TruncatedSeries>,
    #[serde(default = "default_true")]
    monic: bool,
}

fn default_true() -> bool {
    true
}

/// Polynomial in `z` whose coefficients are truncated series in `t`,
/// ascending in the `z`-degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesPolyRepr", into = "SeriesPolyRepr")]
pub struct SeriesPoly {
    coeffs: Vec<TruncatedSeries>,
    monic: bool,
}

impl TryFrom<SeriesPolyRepr> for SeriesPoly {
    type Error = Error;
    fn try_from(r: SeriesPolyRepr) -> Result<Self> {
        if r.monic {
            SeriesPoly::monic(r.coeffs)
        } else {
            SeriesPoly::new(r.coeffs)
        }
    }
}

impl From<SeriesPoly> for SeriesPolyRepr {
    fn from(p: SeriesPoly) -> Self {
        SeriesPolyRepr {
            coeffs: p.coeffs,
            monic: p.monic,
        }
    }
}

impl SeriesPoly {
    pub fn new(coeffs: Vec<TruncatedSeries>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty series polynomial".into()))?;
        for c in &coeffs[1..] {
            if c.order() != first.order() {
                return Err(Error::OrderMismatch(first.order(), c.order()));
            }
            if c.base_point() != first.base_point() {
                return Err(Error::BasePointMismatch(first.base_point(), c.base_point()));
            }
        }
        let lead = coeffs.last().expect("nonempty");
        let monic = lead.coeff(0) == ONE && lead.coeffs()[1..].iter().all(|c| *c == ZERO);
        Ok(Self { coeffs, monic })
    }

    /// Like [`new`](Self::new) but requires the leading coefficient to be the
    /// constant series 1.
    pub fn monic(coeffs: Vec<TruncatedSeries>) -> Result<Self> {
        let p = Self::new(coeffs)?;
        if !p.monic {
            return Err(Error::NotMonic);
        }
        Ok(p)
    }

    /// Monic polynomial from the lower coefficients `q_0 .. q_{m-1}`.
    pub fn monic_from_lower(lower: Vec<TruncatedSeries>) -> Result<Self> {
        let first = lower
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty series polynomial".into()))?;
        let one = TruncatedSeries::one(first.base_point(), first.order());
        let mut coeffs = lower;
        coeffs.push(one);
        Self::monic(coeffs)
    }

    pub fn is_monic(&self) -> bool {
        self.monic
    }

    pub fn coeffs(&self) -> &[TruncatedSeries] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn order(&self) -> usize {
        self.coeffs[0].order()
    }

    pub fn base_point(&self) -> f64 {
        self.coeffs[0].base_point()
    }

    /// Specialisation `Q(base_point + dt, ·)` using the truncated series.
    pub fn eval_t(&self, dt: Complex64) -> ComplexPoly {
        ComplexPoly::new(self.coeffs.iter().map(|c| c.eval(dt)).collect())
    }

    /// `Q(0, z)` in local coordinates.
    pub fn at_base(&self) -> ComplexPoly {
        ComplexPoly::new(self.coeffs.iter().map(|c| c.coeff(0)).collect())
    }

    pub fn derivative_z(&self) -> Vec<TruncatedSeries> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(Complex64::new(k as f64, 0.0)))
            .collect()
    }

    /// Largest coefficient magnitude over all series coefficients.
    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().map(|c| c.max_abs()).fold(0.0, f64::max)
    }
}

/// `D(Q)` as a truncated series: the Sylvester determinant of `Q` and
/// `∂Q/∂z` with series entries, computed without division.
pub fn series_poly_discriminant(q: &SeriesPoly) -> Result<TruncatedSeries> {
    if q.degree() < 2 {
        return Err(Error::DegreeTooLow {
            required: 2,
            found: q.degree(),
        });
    }
    if !q.is_monic() {
        return Err(Error::NotMonic);
    }
    let dq = q.derivative_z();
    let zero = q.coeffs[0].zero_like();
    let rows = sylvester_rows(q.coeffs(), &dq, zero);
    Ok(ring_determinant(&rows).neg())
}

/// Scale for judging a series discriminant to vanish, mirroring
/// [`discriminant_scale`].
pub fn series_discriminant_scale(q: &SeriesPoly) -> f64 {
    let m = q.degree() as i32;
    let dnorm = q
        .derivative_z()
        .iter()
        .map(|c| c.max_abs())
        .fold(0.0, f64::max);
    q.norm_inf().powi(m - 1) * dnorm.powi(m)
}

/// Germ version of the simplicity test: the discriminant series has some
/// coefficient above `eps · scale`.
pub fn is_simple_series(q: &SeriesPoly, eps: f64) -> Result<bool> {
    let d = series_poly_discriminant(q)?;
    Ok(d.ord_abs(eps * series_discriminant_scale(q)).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::DEFAULT_ORD_TOL;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn r(re: f64) -> Complex64 {
        c(re, 0.0)
    }

    fn rand_c(rng: &mut ChaCha8Rng) -> Complex64 {
        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    }

    #[test]
    fn derivative_examples() {
        let p = ComplexPoly::new(vec![r(-3.0), r(0.5), r(1.0)]);
        assert_eq!(p.derivative().coeffs(), &[r(0.5), r(2.0)]);
        assert_eq!(ComplexPoly::from_real(&[0.0, 1.0]).derivative().coeffs(), &[r(1.0)]);
        assert_eq!(ComplexPoly::from_real(&[7.0]).derivative().coeffs(), &[r(0.0)]);
    }

    #[test]
    fn resultant_examples() {
        let zm1 = ComplexPoly::from_real(&[-1.0, 1.0]);
        let zp1 = ComplexPoly::from_real(&[1.0, 1.0]);
        assert!(sylvester_resultant(&zm1, &zm1).unwrap().norm() < 1e-15);
        assert!((sylvester_resultant(&zm1, &zp1).unwrap() - r(2.0)).norm() < 1e-14);
        let p = ComplexPoly::from_real(&[-1.0, 0.0, 1.0]);
        assert!((sylvester_resultant(&p, &p.derivative()).unwrap() - r(-4.0)).norm() < 1e-14);
        assert!((discriminant(&p).unwrap() - r(4.0)).norm() < 1e-14);
    }

    #[test]
    fn resultant_rejects_zero_leading() {
        let bad = ComplexPoly::from_real(&[1.0, 0.0]);
        let ok = ComplexPoly::from_real(&[1.0, 1.0]);
        assert_eq!(sylvester_resultant(&bad, &ok), Err(Error::ZeroLeadingCoefficient));
    }

    #[test]
    fn sylvester_layout() {
        let p = ComplexPoly::from_real(&[3.0, 2.0, 1.0]);
        let q = ComplexPoly::from_real(&[5.0, 4.0]);
        let s = sylvester_matrix(&p, &q);
        let expect = [[1.0, 2.0, 3.0], [4.0, 5.0, 0.0], [0.0, 4.0, 5.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(s[(i, j)], r(expect[i][j]));
            }
        }
    }

    #[test]
    fn discriminant_examples() {
        let sq = ComplexPoly::from_real(&[1.0, -2.0, 1.0]);
        assert!(discriminant(&sq).unwrap().norm() < 1e-14);
        assert!(!is_simple(&sq, 1e-9).unwrap());
        assert_eq!(
            discriminant(&ComplexPoly::from_real(&[1.0, 2.0, 2.0])),
            Err(Error::NotMonic)
        );
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let (p0, p1) = (rand_c(&mut rng), rand_c(&mut rng));
            let d = discriminant(&ComplexPoly::new(vec![p0, p1, r(1.0)])).unwrap();
            let closed = p1 * p1 - 4.0 * p0;
            assert!((d - closed).norm() <= 1e-12 * closed.norm().max(1e-300) + 1e-15);
        }
    }

    #[test]
    fn discriminant_is_product_of_root_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for deg in 2..=6 {
            let roots: Vec<Complex64> = (0..deg).map(|_| rand_c(&mut rng) * 2.0).collect();
            let mut oracle = r(-1.0);
            for i in 0..deg {
                for j in 0..deg {
                    if i != j {
                        oracle *= roots[i] - roots[j];
                    }
                }
            }
            let d = discriminant(&ComplexPoly::from_roots(&roots)).unwrap();
            assert!((d - oracle).norm() <= 1e-6 * oracle.norm(), "deg {deg}");
        }
    }

    #[test]
    fn gcd_examples() {
        let p = ComplexPoly::from_real(&[-1.0, 0.0, 1.0]);
        let q = ComplexPoly::from_real(&[-1.0, 1.0]);
        let g = euclid_gcd_bezout(&p, &q, DEFAULT_GCD_EPS).unwrap();
        assert!((g.g.coeff(0) - r(-1.0)).norm() < 1e-12);
        assert_eq!(g.g.degree(), 1);

        // (z-2)^2 (z+1) with its derivative
        let p = ComplexPoly::from_roots(&[r(2.0), r(2.0), r(-1.0)]);
        let g = euclid_gcd_bezout(&p, &p.derivative(), DEFAULT_GCD_EPS).unwrap();
        assert_eq!(g.g.degree(), 1);
        assert!((g.g.coeff(0) - r(-2.0)).norm() < 1e-9);
    }

    fn bezout_residual(p: &ComplexPoly, q: &ComplexPoly, g: &GcdBezout) -> f64 {
        g.p1.mul(p).add(&g.q1.mul(q)).sub(&g.g).norm_inf()
    }

    #[test]
    fn gcd_of_coprime_quadratics() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let p = ComplexPoly::new(vec![rand_c(&mut rng), rand_c(&mut rng), r(1.0)]);
            let q = ComplexPoly::new(vec![rand_c(&mut rng), rand_c(&mut rng), r(1.0)]);
            let g = euclid_gcd_bezout(&p, &q, DEFAULT_GCD_EPS).unwrap();
            assert_eq!(g.g.degree(), 0);
            assert!(bezout_residual(&p, &q, &g) < 1e-8);
        }
    }

    #[test]
    fn gcd_divides_with_planted_factor() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..30 {
            let shared: Vec<Complex64> = (0..2).map(|_| rand_c(&mut rng) * 2.0).collect();
            let mut pr = shared.clone();
            let mut qr = shared.clone();
            for _ in 0..rng.gen_range(1..5) {
                pr.push(rand_c(&mut rng) * 2.0);
            }
            for _ in 0..rng.gen_range(1..5) {
                qr.push(rand_c(&mut rng) * 2.0);
            }
            let p = ComplexPoly::from_roots(&pr);
            let q = ComplexPoly::from_roots(&qr);
            let g = euclid_gcd_bezout(&p, &q, DEFAULT_GCD_EPS).unwrap();
            if g.g.degree() != 2 {
                // a random draw can bring two roots close; skip those
                continue;
            }
            for f in [&p, &q] {
                let (_, rem) = f.div_rem(&g.g).unwrap();
                assert!(rem.norm_inf() <= 1e-6 * f.norm_inf());
            }
        }
    }

    #[test]
    fn roots_examples() {
        let mut rs = poly_roots(&ComplexPoly::from_real(&[-1.0, 0.0, 1.0])).unwrap();
        rs.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((rs[0] - r(-1.0)).norm() < 1e-14 && (rs[1] - r(1.0)).norm() < 1e-14);

        let rs = poly_roots(&ComplexPoly::from_real(&[-1.0, 0.0, 0.0, 1.0])).unwrap();
        for k in 0..3 {
            let w = Complex64::from_polar(1.0, TAU * k as f64 / 3.0);
            assert!(rs.iter().any(|z| (z - w).norm() < 1e-10));
        }
        assert!(poly_roots(&ComplexPoly::from_real(&[2.0])).is_err());
    }

    #[test]
    fn planted_degree_eight_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let planted: Vec<Complex64> = (0..8).map(|k| Complex64::from_polar(0.5 + 0.1 * k as f64, rng.gen_range(0.0..TAU))).collect();
        let rs = poly_roots(&ComplexPoly::from_roots(&planted)).unwrap();
        for p in &planted {
            assert!(rs.iter().any(|z| (z - p).norm() < 1e-8));
        }
    }

    #[test]
    fn determinant_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for n in 1..=11 {
            let a: Vec<Vec<Complex64>> = (0..n).map(|_| (0..n).map(|_| rand_c(&mut rng)).collect()).collect();
            let lu = linalg::determinant(&DMatrix::from_fn(n, n, |i, j| a[i][j]));
            let b = berkowitz_determinant(&a);
            assert!((b - lu).norm() < 1e-10 * lu.norm().max(1.0), "n={n}");
            if n <= LAPLACE_MAX_SIZE {
                let l = laplace_determinant(&a);
                assert!((l - lu).norm() < 1e-10 * lu.norm().max(1.0), "n={n}");
            }
        }
    }

    fn series(cs: &[f64]) -> TruncatedSeries {
        let mut v = cs.to_vec();
        v.resize(17, 0.0);
        TruncatedSeries::from_real(0.0, &v).unwrap()
    }

    fn sin2pi() -> TruncatedSeries {
        TruncatedSeries::variable(0.0, 16).scale(r(TAU)).sin()
    }

    #[test]
    fn series_discriminant_of_sine_square() {
        let s = sin2pi();
        let q0 = s.mul(&s).unwrap().neg();
        let q = SeriesPoly::monic_from_lower(vec![q0.clone(), series(&[])]).unwrap();
        let d = series_poly_discriminant(&q).unwrap();
        let expected = q0.scale(r(-4.0));
        for k in 0..=16 {
            assert!((d.coeff(k) - expected.coeff(k)).norm() < 1e-9 * expected.max_abs());
        }
        assert_eq!(d.ord(DEFAULT_ORD_TOL), Some(2));
        assert!(is_simple_series(&q, 1e-9).unwrap());
    }

    #[test]
    fn series_discriminant_quadratic_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p0 = TruncatedSeries::new(0.0, (0..17).map(|_| rand_c(&mut rng)).collect()).unwrap();
        let p1 = TruncatedSeries::new(0.0, (0..17).map(|_| rand_c(&mut rng)).collect()).unwrap();
        let q = SeriesPoly::monic_from_lower(vec![p0.clone(), p1.clone()]).unwrap();
        let d = series_poly_discriminant(&q).unwrap();
        let oracle = p1.mul(&p1).unwrap().sub(&p0.scale(r(4.0))).unwrap();
        for k in 0..=16 {
            assert!((d.coeff(k) - oracle.coeff(k)).norm() < 1e-10);
        }
    }

    #[test]
    fn series_discriminant_of_double_root_vanishes() {
        let q = SeriesPoly::monic_from_lower(vec![series(&[0.0, 0.0, 1.0]), series(&[0.0, -2.0])]).unwrap();
        let d = series_poly_discriminant(&q).unwrap();
        assert!(d.max_abs() < 1e-15);
        assert!(!is_simple_series(&q, 1e-9).unwrap());

        let cos = TruncatedSeries::variable(0.0, 16).scale(r(TAU)).cos();
        let q = SeriesPoly::monic_from_lower(vec![cos.neg(), series(&[])]).unwrap();
        assert!(is_simple_series(&q, 1e-9).unwrap());
    }

    #[test]
    fn series_discriminant_higher_degree_matches_pointwise() {
        // degree 6 exercises the Berkowitz route (Sylvester size 11)
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let lower: Vec<TruncatedSeries> = (0..6)
            .map(|_| TruncatedSeries::new(0.0, (0..9).map(|_| rand_c(&mut rng) * 0.5).collect()).unwrap())
            .collect();
        let q = SeriesPoly::monic_from_lower(lower).unwrap();
        let d = series_poly_discriminant(&q).unwrap();
        // the constant term must equal the discriminant of Q(0, z)
        let d0 = discriminant(&q.at_base()).unwrap();
        assert!((d.coeff(0) - d0).norm() < 1e-9 * d0.norm().max(1.0));
    }

    #[test]
    fn series_poly_json_round_trip() {
        let q = SeriesPoly::monic_from_lower(vec![series(&[0.0, 0.0, 0.0, -1.0]), series(&[])]).unwrap();
        let s = serde_json::to_string(&q).unwrap();
        let back: SeriesPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn complex() -> impl Strategy<Value = Complex64> {
            (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| c(a, b))
        }

        proptest! {
            #[test]
            fn common_root_dichotomy(shared in complex(), a in complex(), b in complex(), off in 0.5f64..2.0) {
                let p = ComplexPoly::from_roots(&[shared, a]);
                let q = ComplexPoly::from_roots(&[shared, b]);
                let res = sylvester_resultant(&p, &q).unwrap();
                prop_assert!(res.norm() < 1e-8 * resultant_scale(&p, &q));

                // separated roots: all pairwise distances at least `off`
                let p = ComplexPoly::from_roots(&[r(0.0), r(3.0 * off)]);
                let q = ComplexPoly::from_roots(&[r(off), c(0.0, 2.0 * off)]);
                let res = sylvester_resultant(&p, &q).unwrap();
                prop_assert!(res.norm() > 1e-4 * resultant_scale(&p, &q));
            }

            #[test]
            fn roots_reconstruct(rs in proptest::collection::vec(complex(), 1..12)) {
                let p = ComplexPoly::from_roots(&rs);
                let got = poly_roots(&p).unwrap();
                let back = ComplexPoly::from_roots(&got);
                let scale = p.norm_inf();
                for k in 0..=p.degree() {
                    prop_assert!((back.coeff(k) - p.coeff(k)).norm() <= 1e-8 * scale);
                }
            }

            #[test]
            fn gcd_bezout_identity(ps in proptest::collection::vec(complex(), 2..9), qs in proptest::collection::vec(complex(), 2..9)) {
                let p = ComplexPoly::new(ps);
                let q = ComplexPoly::new(qs);
                prop_assume!(p.leading().norm() > 0.1 && q.leading().norm() > 0.1);
                let g = euclid_gcd_bezout(&p, &q, DEFAULT_GCD_EPS).unwrap();
                prop_assert!(g.g.is_monic());
                for f in [&p, &q] {
                    let (_, rem) = f.div_rem(&g.g).unwrap();
                    prop_assert!(rem.norm_inf() <= 1e-6 * f.norm_inf().max(1.0));
                }
            }
        }
    }
}
