//! Least-squares fitting of pure cosine series c0 + sum_j c_j cos(j*tau),
//! the natural basis for quantities even about tau = 0 on this orbit.

use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum SeriesError {
    #[error("need at least {needed} samples for {needed} coefficients, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("duplicate harmonic multiplier {0}")]
    DuplicateMultiplier(u32),
    #[error("normal equations are singular (degenerate sample grid)")]
    Singular,
}

/// A fitted series value(tau) = c0 + sum of coeffs[j] * cos(multipliers[j] * tau).
#[derive(Debug, Clone, Serialize)]
pub struct CosineSeriesFit {
    pub c0: f64,
    pub multipliers: Vec<u32>,
    pub coeffs: Vec<f64>,
    /// Root-mean-square residual over the input samples.
    pub rms_residual: f64,
    /// Largest absolute residual over the input samples.
    pub max_residual: f64,
}

impl CosineSeriesFit {
    pub fn eval(&self, tau: f64) -> f64 {
        let mut y = self.c0;
        for (m, c) in self.multipliers.iter().zip(&self.coeffs) {
            y += c * (*m as f64 * tau).cos();
        }
        y
    }

    pub fn residual(&self, samples: &[(f64, f64)]) -> Vec<f64> {
        samples.iter().map(|&(t, v)| v - self.eval(t)).collect()
    }
}

/// Solves a small dense linear system in place by Gaussian elimination with
/// partial pivoting. Returns `None` when the matrix is singular.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut s = b[col];
        for k in col + 1..n {
            s -= a[col][k] * x[k];
        }
        x[col] = s / a[col][col];
    }
    Some(x)
}

/// Least-squares fit of `samples` (tau in radians, value) by a constant plus
/// cosines with the given harmonic multipliers, via the normal equations.
pub fn fit_cosine_series(
    samples: &[(f64, f64)],
    multipliers: &[u32],
) -> Result<CosineSeriesFit, SeriesError> {
    let n = multipliers.len() + 1;
    if samples.len() < n {
        return Err(SeriesError::TooFewSamples {
            needed: n,
            got: samples.len(),
        });
    }
    for (i, m) in multipliers.iter().enumerate() {
        if multipliers[..i].contains(m) {
            return Err(SeriesError::DuplicateMultiplier(*m));
        }
    }
    let basis = |t: f64, j: usize| {
        if j == 0 {
            1.0
        } else {
            (multipliers[j - 1] as f64 * t).cos()
        }
    };
    let mut ata = vec![vec![0.0; n]; n];
    let mut atb = vec![0.0; n];
    for &(t, v) in samples {
        for i in 0..n {
            let bi = basis(t, i);
            atb[i] += bi * v;
            for j in 0..n {
                ata[i][j] += bi * basis(t, j);
            }
        }
    }
    let x = solve(ata, atb).ok_or(SeriesError::Singular)?;
    let fit = CosineSeriesFit {
        c0: x[0],
        multipliers: multipliers.to_vec(),
        coeffs: x[1..].to_vec(),
        rms_residual: 0.0,
        max_residual: 0.0,
    };
    let res = fit.residual(samples);
    let rms = (res.iter().map(|r| r * r).sum::<f64>() / res.len() as f64).sqrt();
    let max = res.iter().fold(0.0_f64, |a, r| a.max(r.abs()));
    Ok(CosineSeriesFit {
        rms_residual: rms,
        max_residual: max,
        ..fit
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid(n: usize) -> Vec<f64> {
        (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect()
    }

    #[test]
    fn recovers_exact_cosine_series() {
        let samples: Vec<(f64, f64)> = grid(360)
            .into_iter()
            .map(|t| (t, 0.9 - 0.45 * (2.0 * t).cos() + 0.03 * (4.0 * t).cos()))
            .collect();
        let fit = fit_cosine_series(&samples, &[2, 4]).unwrap();
        assert!((fit.c0 - 0.9).abs() < 1e-12);
        assert!((fit.coeffs[0] + 0.45).abs() < 1e-12);
        assert!((fit.coeffs[1] - 0.03).abs() < 1e-12);
        assert!(fit.rms_residual < 1e-12);
    }

    #[test]
    fn extra_harmonic_never_hurts() {
        let samples: Vec<(f64, f64)> = grid(720)
            .into_iter()
            .map(|t| (t, (2.0 * t).cos().abs()))
            .collect();
        let small = fit_cosine_series(&samples, &[2]).unwrap();
        let large = fit_cosine_series(&samples, &[2, 4]).unwrap();
        assert!(large.rms_residual <= small.rms_residual + 1e-14);
    }

    #[test]
    fn orthogonality_on_uniform_grid() {
        // on a uniform full-period grid the basis is orthogonal, so adding a
        // harmonic must not change the coefficients already present
        let samples: Vec<(f64, f64)> = grid(720)
            .into_iter()
            .map(|t| (t, 1.0 + 0.5 * (2.0 * t).cos() + 0.1 * (6.0 * t).cos()))
            .collect();
        let a = fit_cosine_series(&samples, &[2]).unwrap();
        let b = fit_cosine_series(&samples, &[2, 4]).unwrap();
        assert!((a.coeffs[0] - b.coeffs[0]).abs() < 1e-12);
        assert!(b.coeffs[1].abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        let samples: Vec<(f64, f64)> = grid(8).into_iter().map(|t| (t, t.cos())).collect();
        assert!(matches!(
            fit_cosine_series(&samples[..1], &[2]),
            Err(SeriesError::TooFewSamples { .. })
        ));
        assert!(matches!(
            fit_cosine_series(&samples, &[2, 2]),
            Err(SeriesError::DuplicateMultiplier(2))
        ));
        // all samples at the same abscissa -> singular normal equations
        let degenerate = vec![(0.0, 1.0); 8];
        assert!(matches!(
            fit_cosine_series(&degenerate, &[2]),
            Err(SeriesError::Singular)
        ));
    }

    #[test]
    fn extrema_grid_interpolation() {
        // two coefficients on the 4-point extrema grid: c0 is the mean of
        // the extrema, c1 the half-range, exactly
        let (hi, lo) = (1.380471, 0.476626);
        let samples = vec![
            (0.0, hi),
            (PI / 2.0, lo),
            (PI, hi),
            (1.5 * PI, lo),
        ];
        let fit = fit_cosine_series(&samples, &[2]).unwrap();
        assert!((fit.c0 - 0.5 * (hi + lo)).abs() < 1e-12);
        assert!((fit.coeffs[0] - 0.5 * (hi - lo)).abs() < 1e-12);
        assert!(fit.max_residual < 1e-12);
    }
}
