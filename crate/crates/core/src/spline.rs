//! Interpolating splines.
//!
//! Natural cubic splines are solved in local (shifted) form, which is what
//! arc-length integration over arbitrary parameter ranges needs; only the
//! final curve on `[-1, 1]` is expanded into the global monomial form that
//! [`PiecewisePoly`] stores.

use crate::error::{Error, Result};
use crate::poly::{Classical, DensePoly, PiecewisePoly};

/// Cubic segments in local form: on `[t_i, t_{i+1}]`,
/// `v(t) = c[0] + c[1] u + c[2] u² + c[3] u³` with `u = t - t_i`.
#[derive(Clone, Debug)]
pub struct LocalCubic {
    pub knots: Vec<f64>,
    pub coeffs: Vec<[f64; 4]>,
}

impl LocalCubic {
    pub fn eval(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let u = t - self.knots[i];
        let c = &self.coeffs[i];
        c[0] + u * (c[1] + u * (c[2] + u * c[3]))
    }

    pub fn eval_derivative(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let u = t - self.knots[i];
        let c = &self.coeffs[i];
        c[1] + u * (2.0 * c[2] + u * 3.0 * c[3])
    }

    fn segment(&self, t: f64) -> usize {
        let i = self.knots.partition_point(|&k| k <= t);
        i.saturating_sub(1).min(self.coeffs.len() - 1)
    }

    /// Expand every segment into monomial form in the global parameter.
    pub fn to_piecewise(&self) -> Result<PiecewisePoly> {
        let segments = self
            .coeffs
            .iter()
            .zip(&self.knots)
            .map(|(c, &t0)| DensePoly::new(Classical::Monomial, shift_cubic(c, t0).to_vec()))
            .collect();
        PiecewisePoly::new(self.knots.clone(), segments)
    }
}

/// Coefficients of `Σ c_k (t - t0)^k` in powers of `t`.
fn shift_cubic(c: &[f64; 4], t0: f64) -> [f64; 4] {
    let t02 = t0 * t0;
    [
        c[0] - c[1] * t0 + c[2] * t02 - c[3] * t02 * t0,
        c[1] - 2.0 * c[2] * t0 + 3.0 * c[3] * t02,
        c[2] - 3.0 * c[3] * t0,
        c[3],
    ]
}

fn check_knots(knots: &[f64], values: &[f64]) -> Result<()> {
    if knots.len() != values.len() {
        return Err(Error::LengthMismatch {
            expected: knots.len(),
            found: values.len(),
        });
    }
    if knots.len() < 2 {
        return Err(Error::TooFewPoints(knots.len()));
    }
    if knots.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain("spline knots must be strictly increasing".into()));
    }
    Ok(())
}

/// Piecewise-linear interpolant through `(knots[i], values[i])`.
pub fn linear(knots: &[f64], values: &[f64]) -> Result<PiecewisePoly> {
    check_knots(knots, values)?;
    let segments = knots
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| {
            let slope = (v[1] - v[0]) / (t[1] - t[0]);
            DensePoly::new(Classical::Monomial, vec![v[0] - slope * t[0], slope])
        })
        .collect();
    PiecewisePoly::new(knots.to_vec(), segments)
}

/// Natural cubic spline (zero second derivative at both ends) in local form.
pub fn natural_cubic_local(knots: &[f64], values: &[f64]) -> Result<LocalCubic> {
    check_knots(knots, values)?;
    let n = knots.len() - 1;
    let h: Vec<f64> = knots.windows(2).map(|w| w[1] - w[0]).collect();
    let slope: Vec<f64> = (0..n).map(|i| (values[i + 1] - values[i]) / h[i]).collect();

    // Second derivatives at interior knots from the tridiagonal system
    // h_{i-1} M_{i-1} + 2 (h_{i-1} + h_i) M_i + h_i M_{i+1} = 6 (slope_i - slope_{i-1}).
    let mut m = vec![0.0; n + 1];
    if n >= 2 {
        let size = n - 1;
        let mut diag: Vec<f64> = (1..n).map(|i| 2.0 * (h[i - 1] + h[i])).collect();
        let mut rhs: Vec<f64> = (1..n).map(|i| 6.0 * (slope[i] - slope[i - 1])).collect();
        // Thomas algorithm; sub- and super-diagonals are h[1..n-1].
        for r in 1..size {
            let w = h[r] / diag[r - 1];
            diag[r] -= w * h[r];
            rhs[r] -= w * rhs[r - 1];
        }
        let mut sol = vec![0.0; size];
        sol[size - 1] = rhs[size - 1] / diag[size - 1];
        for r in (0..size - 1).rev() {
            sol[r] = (rhs[r] - h[r + 1] * sol[r + 1]) / diag[r];
        }
        m[1..n].copy_from_slice(&sol);
    }

    let coeffs = (0..n)
        .map(|i| {
            [
                values[i],
                slope[i] - h[i] * (2.0 * m[i] + m[i + 1]) / 6.0,
                m[i] / 2.0,
                (m[i + 1] - m[i]) / (6.0 * h[i]),
            ]
        })
        .collect();
    Ok(LocalCubic {
        knots: knots.to_vec(),
        coeffs,
    })
}

/// Natural cubic spline expanded to a [`PiecewisePoly`].
pub fn natural_cubic(knots: &[f64], values: &[f64]) -> Result<PiecewisePoly> {
    natural_cubic_local(knots, values)?.to_piecewise()
}
