//! The q×q matrix families at rational α = p/q and their characteristic
//! polynomials.
//!
//! Phases of the form `2π·(integer)/q` are reduced in integer arithmetic
//! before taking the exponential, so the circulant and diagonal factors are
//! accurate to rounding regardless of the size of `p`, `q` and the indices.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::rational::gcd;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    /// On-resonance double kicked rotor, `D G⁻¹ D G`.
    Ordkr,
    /// Harper (almost Mathieu) Hamiltonian; Hermitian.
    Harper,
    /// Unitary Harper, `exp(−iκH)`.
    Uh,
    /// Kicked Harper.
    Kh,
    /// Single kicked rotor.
    Skr,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 5] = [
        OperatorKind::Ordkr,
        OperatorKind::Harper,
        OperatorKind::Uh,
        OperatorKind::Kh,
        OperatorKind::Skr,
    ];

    pub fn is_unitary(self) -> bool {
        self != OperatorKind::Harper
    }

    pub fn name(self) -> &'static str {
        match self {
            OperatorKind::Ordkr => "ordkr",
            OperatorKind::Harper => "harper",
            OperatorKind::Uh => "uh",
            OperatorKind::Kh => "kh",
            OperatorKind::Skr => "skr",
        }
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        OperatorKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown operator kind '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorFamily {
    pub kind: OperatorKind,
    pub p: u64,
    pub q: u64,
    pub kappa: f64,
    pub lambda: f64,
    pub theta: f64,
}

impl OperatorFamily {
    /// Validates the parameters.
    ///
    /// `gcd(p, q) = 1` is required, except that the single kicked rotor also
    /// accepts the doubled pair `(2p', 2q')` with `p'q'` odd, which is how a
    /// caller answers a [`Error::HalfAlpha`] rejection.
    pub fn new(kind: OperatorKind, p: u64, q: u64, kappa: f64, lambda: f64, theta: f64) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::NotCoprime { p, q });
        }
        let g = gcd(p, q);
        match (kind, g) {
            (OperatorKind::Skr, 1) if (p * q) % 2 == 1 => return Err(Error::HalfAlpha { p, q }),
            (OperatorKind::Skr, 2) if ((p / 2) * (q / 2)) % 2 == 1 => {}
            (_, 1) => {}
            _ => return Err(Error::NotCoprime { p, q }),
        }
        for (name, v) in [("kappa", kappa), ("lambda", lambda), ("theta", theta)] {
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!("{name} must be finite")));
            }
        }
        if kappa < 0.0 {
            return Err(Error::InvalidArgument(format!("kappa must be nonnegative, got {kappa}")));
        }
        Ok(Self {
            kind,
            p,
            q,
            kappa,
            lambda,
            theta,
        })
    }

    pub fn ordkr(p: u64, q: u64, kappa: f64) -> Result<Self> {
        Self::new(OperatorKind::Ordkr, p, q, kappa, 0.0, 0.0)
    }

    pub fn harper(p: u64, q: u64, lambda: f64, theta: f64) -> Result<Self> {
        Self::new(OperatorKind::Harper, p, q, 0.0, lambda, theta)
    }

    pub fn with_theta(&self, theta: f64) -> Self {
        Self { theta, ..*self }
    }

    pub fn dim(&self) -> usize {
        self.q as usize
    }

    pub fn alpha(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    pub fn matrix(&self, t: f64) -> CMatrix {
        let (p, q) = (self.p, self.q);
        match self.kind {
            OperatorKind::Ordkr => ordkr_matrix(p, q, self.kappa, t),
            OperatorKind::Harper => harper_matrix(p, q, self.lambda, self.theta, t),
            OperatorKind::Uh => uh_matrix(p, q, self.kappa, self.lambda, self.theta, t),
            OperatorKind::Kh => kh_matrix(p, q, self.kappa, self.lambda, self.theta, t),
            OperatorKind::Skr => skr_fiber(p, q, self.kappa, t),
        }
    }

    pub fn sample(&self, t: f64) -> MatrixSample {
        MatrixSample {
            t,
            matrix: self.matrix(t),
        }
    }

    /// Eigenvalues of the sample at `t`: real for Harper, on the unit
    /// circle otherwise.
    pub fn eigenvalues(&self, t: f64) -> Result<Vec<Complex64>> {
        let m = self.matrix(t);
        if self.kind.is_unitary() {
            linalg::eigenvalues(&m)
        } else {
            Ok(linalg::hermitian_eigenvalues(&m)
                .into_iter()
                .map(|x| Complex64::new(x, 0.0))
                .collect())
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSample {
    pub t: f64,
    pub matrix: CMatrix,
}

impl MatrixSample {
    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.matrix
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect()
    }
}

/// `exp(2πi·num/den)` with `num` reduced modulo `den` first.
fn root_of_unity(num: i128, den: u64) -> Complex64 {
    let d = den as i128;
    let r = num.rem_euclid(d);
    Complex64::from_polar(1.0, TAU * r as f64 / den as f64)
}

/// First row `g_0 .. g_{q-1}` of the Gauss circulant.
pub fn gauss_row(p: u64, q: u64) -> Vec<Complex64> {
    let (pi, qi) = (p as i128, q as u64);
    (0..q as i128)
        .map(|j| {
            let sum: Complex64 = (0..q as i128)
                .map(|k| root_of_unity(pi * (j * k - k * k), qi))
                .sum();
            sum / q as f64
        })
        .collect()
}

/// `G[r][c] = g_{(c − r) mod q}`.
pub fn gauss_circulant(p: u64, q: u64) -> CMatrix {
    let g = gauss_row(p, q);
    let n = q as usize;
    CMatrix::from_fn(n, n, |r, c| g[(c + n - r) % n])
}

/// Diagonal entries `exp(−2iκ cos 2π(t − jα))`.
pub fn kick_entries(p: u64, q: u64, kappa: f64, t: f64) -> Vec<Complex64> {
    (0..q)
        .map(|j| {
            let frac = ((j as u128 * p as u128) % q as u128) as f64 / q as f64;
            Complex64::from_polar(1.0, -2.0 * kappa * (TAU * (t - frac)).cos())
        })
        .collect()
}

pub fn kick_diagonal(p: u64, q: u64, kappa: f64, t: f64) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_vec(kick_entries(p, q, kappa, t)))
}

/// `D G⁻¹ D G`, with `G⁻¹ = G†` since `G` is unitary.
pub fn ordkr_matrix(p: u64, q: u64, kappa: f64, t: f64) -> CMatrix {
    let g = gauss_circulant(p, q);
    ordkr_with_gauss(&g, p, q, kappa, t)
}

/// As [`ordkr_matrix`] with a precomputed circulant.
pub fn ordkr_with_gauss(g: &CMatrix, p: u64, q: u64, kappa: f64, t: f64) -> CMatrix {
    let d = kick_entries(p, q, kappa, t);
    let n = q as usize;
    // (D G†)[r][c] = d_r conj(G[c][r])
    let left = CMatrix::from_fn(n, n, |r, c| d[r] * g[(c, r)].conj());
    let right = CMatrix::from_fn(n, n, |r, c| d[r] * g[(r, c)]);
    left * right
}

/// Harper fiber matrix with Bloch phase `e^{2πit}` closing the hopping.
/// For `q = 2` the corner and off-diagonal contributions add.
pub fn harper_matrix(p: u64, q: u64, lambda: f64, theta: f64, t: f64) -> CMatrix {
    let n = q as usize;
    let mut h = CMatrix::from_element(n, n, ZERO);
    for j in 0..n {
        let frac = ((j as u128 * p as u128) % q as u128) as f64 / q as f64;
        h[(j, j)] = Complex64::new(2.0 * lambda * (TAU * (frac + theta)).cos(), 0.0);
    }
    if n == 1 {
        h[(0, 0)] += Complex64::new(2.0 * (TAU * t).cos(), 0.0);
        return h;
    }
    for j in 0..n - 1 {
        h[(j, j + 1)] += ONE;
        h[(j + 1, j)] += ONE;
    }
    let bloch = Complex64::from_polar(1.0, TAU * t);
    h[(0, n - 1)] += bloch.conj();
    h[(n - 1, 0)] += bloch;
    h
}

pub fn uh_matrix(p: u64, q: u64, kappa: f64, lambda: f64, theta: f64, t: f64) -> CMatrix {
    let h = harper_matrix(p, q, lambda, theta, t);
    linalg::expm_hermitian(&h, Complex64::new(0.0, -kappa))
}

/// `S + S†` for the twisted shift `S e_r = e_{r+1}`, `S e_{q−1} = e^{2πit} e_0`.
pub fn twisted_hopping(q: u64, t: f64) -> CMatrix {
    let n = q as usize;
    let mut s = CMatrix::from_element(n, n, ZERO);
    for r in 0..n - 1 {
        s[(r + 1, r)] += ONE;
    }
    s[(0, n - 1)] += Complex64::from_polar(1.0, TAU * t);
    &s + s.adjoint()
}

fn right_diagonal(m: CMatrix, d: &[Complex64]) -> CMatrix {
    let mut m = m;
    for (c, &dc) in d.iter().enumerate() {
        for r in 0..m.nrows() {
            m[(r, c)] *= dc;
        }
    }
    m
}

pub fn kh_matrix(p: u64, q: u64, kappa: f64, lambda: f64, theta: f64, t: f64) -> CMatrix {
    let kick = linalg::expm_hermitian(&twisted_hopping(q, t), Complex64::new(0.0, -kappa));
    let d: Vec<Complex64> = (0..q)
        .map(|r| {
            let frac = ((r as u128 * p as u128) % q as u128) as f64 / q as f64;
            Complex64::from_polar(1.0, -2.0 * kappa * lambda * (TAU * (frac + theta)).cos())
        })
        .collect();
    right_diagonal(kick, &d)
}

/// Single kicked rotor; rejects `p·q` odd with [`Error::HalfAlpha`].
pub fn skr_matrix(p: u64, q: u64, kappa: f64, t: f64) -> Result<CMatrix> {
    if (p * q) % 2 == 1 {
        return Err(Error::HalfAlpha { p, q });
    }
    Ok(skr_fiber(p, q, kappa, t))
}

fn skr_fiber(p: u64, q: u64, kappa: f64, t: f64) -> CMatrix {
    let kick = linalg::expm_hermitian(&twisted_hopping(q, t), Complex64::new(0.0, -kappa));
    // exp(−iπ p r²/q) = exp(2πi·(−p r²)/(2q))
    let d: Vec<Complex64> = (0..q)
        .map(|r| root_of_unity(-(p as i128) * (r as i128) * (r as i128), 2 * q))
        .collect();
    right_diagonal(kick, &d)
}

/// Flux at which the kicked Harper family is compared with the double
/// kicked rotor at `p/q`: the double kick samples the Gauss phase
/// `e^{−2πik²α}`, twice the flux of a single free step, so the partner sits
/// at `2α mod 1`. Returns `None` when that is an integer.
pub fn kh_partner(p: u64, q: u64) -> Option<(u64, u64)> {
    let num = (2 * p) % q;
    if num == 0 {
        return None;
    }
    let g = gcd(num, q);
    Some((num / g, q / g))
}

/// `‖KH(t) − UH(−t)‖_∞`. The kicked Harper kick factor uses `S + S†`,
/// which equals the Harper hopping at the opposite Bloch phase.
pub fn uh_kh_error(p: u64, q: u64, kappa: f64, lambda: f64, theta: f64, t: f64) -> f64 {
    let kh = kh_matrix(p, q, kappa, lambda, theta, t);
    let uh = uh_matrix(p, q, kappa, lambda, theta, -t);
    linalg::norm_inf(&(kh - uh))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharPolySamples {
    pub family: OperatorFamily,
    pub ts: Vec<f64>,
    /// Ascending coefficients of `det(zI − M(t))` per sample.
    pub coeff_rows: Vec<Vec<Complex64>>,
}

pub fn char_poly(family: &OperatorFamily, t: f64) -> Result<Vec<Complex64>> {
    Ok(linalg::poly_from_roots(&family.eigenvalues(t)?))
}

/// Characteristic polynomial coefficients on a grid (parallel over `t`,
/// collected in grid order).
pub fn char_poly_samples(family: &OperatorFamily, ts: &[f64]) -> Result<CharPolySamples> {
    let coeff_rows = ts
        .par_iter()
        .map(|&t| char_poly(family, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(CharPolySamples {
        family: *family,
        ts: ts.to_vec(),
        coeff_rows,
    })
}

/// Re-labels samples of `C` on `t ∈ [0, 1/q)` as samples of `P` on
/// `s = q t ∈ [0, 1)`.
pub fn reduced_poly_samples(cps: &CharPolySamples) -> Result<CharPolySamples> {
    let q = cps.family.q as f64;
    let period = 1.0 / q;
    if cps.ts.iter().any(|&t| !(0.0..period).contains(&t)) {
        return Err(Error::GridOutsidePeriod { period });
    }
    Ok(CharPolySamples {
        family: cps.family,
        ts: cps.ts.iter().map(|&t| t * q).collect(),
        coeff_rows: cps.coeff_rows.clone(),
    })
}

/// `P(s, ·) = C(s/q, ·)` evaluated directly.
pub fn reduced_poly(family: &OperatorFamily, s: f64) -> Result<Vec<Complex64>> {
    char_poly(family, s / family.q as f64)
}

/// Uniform grid `k/n`, `k = 0..n`, scaled by `period`.
pub fn uniform_grid(n: usize, period: f64) -> Vec<f64> {
    (0..n).map(|k| period * k as f64 / n as f64).collect()
}
