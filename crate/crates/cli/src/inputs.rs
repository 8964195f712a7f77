//! Series-polynomial inputs: built-in examples or a JSON file.

use std::f64::consts::TAU;
use std::fs;
use std::path::Path;

use kickband::poly::{ComplexPoly, SeriesPoly};
use kickband::series::{TruncatedSeries, DEFAULT_ORDER};
use kickband::{Complex64, Result};

use crate::CliError;

pub const EXAMPLE_NAMES: [&str; 6] = [
    "cusp",
    "sine-square",
    "exp-square",
    "cosine-quarter",
    "double-line",
    "hensel-demo",
];

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn series_example(name: &str) -> Result<SeriesPoly> {
    let n = DEFAULT_ORDER;
    let t = TruncatedSeries::variable(0.0, n);
    let one = TruncatedSeries::one(0.0, n);
    let zero = TruncatedSeries::zero(0.0, n);
    match name {
        // z² − t³
        "cusp" => SeriesPoly::monic(vec![TruncatedSeries::monomial(0.0, n, 3, c(-1.0)), zero, one]),
        // z² − sin²2πt
        "sine-square" => {
            let s = t.scale(c(TAU)).sin();
            SeriesPoly::monic(vec![s.mul(&s)?.neg(), zero, one])
        }
        // z² − e^{2πit}
        "exp-square" => {
            let e = t.scale(Complex64::new(0.0, TAU)).exp();
            SeriesPoly::monic(vec![e.neg(), zero, one])
        }
        // z² − cos 2πt at t = 1/4
        "cosine-quarter" => {
            let b = 0.25;
            let x = TruncatedSeries::variable(b, n).add(&TruncatedSeries::constant(b, n, c(b)))?;
            SeriesPoly::monic(vec![
                x.scale(c(TAU)).cos().neg(),
                TruncatedSeries::zero(b, n),
                TruncatedSeries::one(b, n),
            ])
        }
        // z² − t²
        "double-line" => SeriesPoly::monic(vec![TruncatedSeries::monomial(0.0, n, 2, c(-1.0)), zero, one]),
        // (z² − t)(z − 1 + t) = z³ + (t − 1)z² − tz + t − t²
        "hensel-demo" => {
            let q0 = t.sub(&t.mul(&t)?)?;
            let q1 = t.neg();
            let q2 = t.sub(&one)?;
            SeriesPoly::monic(vec![q0, q1, q2, one])
        }
        other => Err(kickband::Error::InvalidArgument(format!(
            "unknown example '{other}' (known: {})",
            EXAMPLE_NAMES.join(", ")
        ))),
    }
}

/// A series polynomial plus a pointwise evaluator `t ↦ Q(t, ·)` in local
/// coordinates.
pub struct SeriesInput {
    pub series: SeriesPoly,
    exact: Option<fn(f64) -> ComplexPoly>,
}

impl SeriesInput {
    pub fn eval(&self, t: f64) -> ComplexPoly {
        match self.exact {
            Some(f) => f(t),
            None => self.series.eval_t(c(t)),
        }
    }
}

fn hensel_demo(t: f64) -> ComplexPoly {
    ComplexPoly::from_real(&[-t, 0.0, 1.0]).mul(&ComplexPoly::from_real(&[t - 1.0, 1.0]))
}

fn sine_square(t: f64) -> ComplexPoly {
    let s = (TAU * t).sin();
    ComplexPoly::from_real(&[-s * s, 0.0, 1.0])
}

fn exp_square(t: f64) -> ComplexPoly {
    ComplexPoly::new(vec![-Complex64::from_polar(1.0, TAU * t), c(0.0), c(1.0)])
}

pub fn load(input: Option<&Path>, example: Option<&str>) -> std::result::Result<SeriesInput, CliError> {
    match (input, example) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
            let series: SeriesPoly = serde_json::from_str(&text)
                .map_err(|e| CliError::Validation(format!("invalid series polynomial JSON: {e}")))?;
            Ok(SeriesInput { series, exact: None })
        }
        (None, Some(name)) => {
            let series = series_example(name)?;
            let exact: Option<fn(f64) -> ComplexPoly> = match name {
                "hensel-demo" => Some(hensel_demo),
                "sine-square" => Some(sine_square),
                "exp-square" => Some(exp_square),
                _ => None,
            };
            Ok(SeriesInput { series, exact })
        }
        _ => Err(CliError::Validation("give exactly one of --input or --example".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples_build_and_agree_with_evaluators() {
        for name in EXAMPLE_NAMES {
            let inp = load(None, Some(name)).unwrap();
            assert!(inp.series.is_monic(), "{name}");
            let t = 0.01;
            let a = inp.eval(t);
            let b = inp.series.eval_t(c(t));
            let d = a.sub(&b).norm_inf();
            assert!(d < 1e-10, "{name}: {d}");
        }
    }

    #[test]
    fn cosine_quarter_is_sine() {
        let inp = load(None, Some("cosine-quarter")).unwrap();
        let q0 = &inp.series.coeffs()[0];
        assert!((q0.coeff(1) - c(TAU)).norm() < 1e-12);
        assert!(q0.coeff(0).norm() < 1e-15);
    }
}
