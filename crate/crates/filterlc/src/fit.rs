//! Least-squares growth curves over `(L, bound)` points.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    /// `sum_{i<=n} c_i L^i`.
    Poly(usize),
    /// `exp(c_0 + c_1 L)`, fitted on `ln(bound)`.
    Exponential,
}

impl Default for Basis {
    fn default() -> Self {
        Basis::Poly(3)
    }
}

impl Basis {
    pub fn params(&self) -> usize {
        match self {
            Basis::Poly(n) => n + 1,
            Basis::Exponential => 2,
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Poly(1) => f.write_str("linear"),
            Basis::Poly(2) => f.write_str("quadratic"),
            Basis::Poly(3) => f.write_str("cubic"),
            Basis::Poly(n) => write!(f, "poly:{n}"),
            Basis::Exponential => f.write_str("exp"),
        }
    }
}

impl FromStr for Basis {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "linear" => Ok(Basis::Poly(1)),
            "quadratic" => Ok(Basis::Poly(2)),
            "cubic" => Ok(Basis::Poly(3)),
            "exp" => Ok(Basis::Exponential),
            other => other
                .strip_prefix("poly:")
                .and_then(|n| n.parse().ok())
                .map(Basis::Poly)
                .ok_or_else(|| CliError::Input(format!("unknown basis {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitModel {
    pub basis: Basis,
    pub coefficients: Vec<f64>,
    /// `observed - fitted` per input point.
    pub residuals: Vec<f64>,
    pub x_range: (f64, f64),
}

impl FitModel {
    pub fn predict(&self, x: f64) -> f64 {
        match self.basis {
            Basis::Poly(_) => self.coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c),
            Basis::Exponential => (self.coefficients[0] + self.coefficients[1] * x).exp(),
        }
    }

    pub fn rss(&self) -> f64 {
        self.residuals.iter().map(|r| r * r).sum()
    }

    pub fn is_extrapolation(&self, x: f64) -> bool {
        x < self.x_range.0 || x > self.x_range.1
    }
}

pub fn fit(points: &[(f64, f64)], basis: Basis) -> Result<FitModel, CliError> {
    let p = basis.params();
    if points.len() < 2 || points.len() < p {
        return Err(CliError::Input(format!(
            "{} points cannot determine a {basis} fit ({p} parameters)",
            points.len()
        )));
    }
    let xs: Vec<f64> = points.iter().map(|&(x, _)| x).collect();
    let ys: Vec<f64> = match basis {
        Basis::Poly(_) => points.iter().map(|&(_, y)| y).collect(),
        Basis::Exponential => {
            if points.iter().any(|&(_, y)| y <= 0.0) {
                return Err(CliError::Input("exponential fit needs positive values".into()));
            }
            points.iter().map(|&(_, y)| y.ln()).collect()
        }
    };
    let a = DMatrix::from_fn(xs.len(), p, |r, c| xs[r].powi(c as i32));
    let b = DVector::from_vec(ys);
    let svd = a.svd(true, true);
    let rank = svd.rank(1e-12 * svd.singular_values.max());
    if rank < p {
        return Err(CliError::Input(format!("{basis} fit is underdetermined: rank {rank} < {p}")));
    }
    let sol = svd.solve(&b, 1e-12).map_err(|e| CliError::Input(e.to_string()))?;
    let mut model = FitModel {
        basis,
        coefficients: sol.iter().copied().collect(),
        residuals: Vec::new(),
        x_range: (xs.iter().cloned().fold(f64::INFINITY, f64::min), xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)),
    };
    model.residuals = points.iter().map(|&(x, y)| y - model.predict(x)).collect();
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn two_points_interpolate_exactly() {
        let m = fit(&[(11.0, 242.0), (17.0, 3128.0)], Basis::Poly(1)).unwrap();
        assert!(m.rss() < 1e-12);
        assert_relative_eq!(m.predict(11.0), 242.0, epsilon = 1e-9);
        assert_relative_eq!(m.coefficients[1], (3128.0 - 242.0) / 6.0, epsilon = 1e-9);
    }

    #[test]
    fn too_few_points() {
        assert!(fit(&[(11.0, 242.0)], Basis::Poly(1)).is_err());
        assert!(fit(&[(11.0, 242.0), (17.0, 3128.0)], Basis::Poly(2)).is_err());
        assert!(fit(&[(11.0, 242.0), (11.0, 250.0)], Basis::Poly(1)).is_err());
    }

    #[test]
    fn recovers_a_cubic() {
        let pts: Vec<(f64, f64)> = (0..6).map(|i| {
            let x = f64::from(i) * 3.0 + 5.0;
            (x, 2.0 - x + 0.5 * x * x * x)
        }).collect();
        let m = fit(&pts, Basis::Poly(3)).unwrap();
        assert_relative_eq!(m.coefficients[3], 0.5, epsilon = 1e-6);
        assert!(m.is_extrapolation(89.0));
        assert!(!m.is_extrapolation(10.0));
    }

    #[test]
    fn basis_names() {
        for s in ["linear", "quadratic", "cubic", "poly:5", "exp"] {
            assert_eq!(s.parse::<Basis>().unwrap().to_string(), s);
        }
        assert!("spline".parse::<Basis>().is_err());
    }
}
