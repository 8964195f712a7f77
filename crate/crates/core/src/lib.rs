//! Band spectra of rational-flux Floquet operators and the polynomial
//! machinery used to study the analyticity of their eigenvalue curves.
//!
//! The crate is organised bottom-up:
//!
//! * [`series`]: truncated Taylor series, the germs everything else is built on.
//! * [`poly`]: complex polynomials, Sylvester resultants, discriminants,
//!   numerical GCD and root finding, plus polynomials with series coefficients.
//! * [`newton`]: Newton polygons, Newton-Puiseux branches, the quadratic
//!   reducibility classifier and point-primary (Hensel) factorization.
//! * [`floquet`]: the q x q matrix families (double kicked rotor, Harper,
//!   unitary Harper, kicked Harper, single kicked rotor) and their
//!   characteristic polynomials.
//! * [`spectra`]: band assembly, Hausdorff distances, band measure and
//!   flux sweeps.
//! * [`monodromy`]: eigenvalue path tracking around one period and the
//!   induced root permutation.

pub mod assignment;
pub mod error;
pub mod floquet;
pub mod linalg;
pub mod monodromy;
pub mod newton;
pub mod poly;
pub mod rational;
pub mod series;
pub mod spectra;

pub use error::{Error, Result};
pub use num_complex::Complex64;
