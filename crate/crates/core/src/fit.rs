//! Small least-squares helpers for the growth classifiers.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination; 1 for a perfect (or constant) fit.
    pub r_squared: f64,
}

impl LinearFit {
    /// `sqrt(1 - R²)`: scale-free residual used to compare models.
    pub fn normalized_residual(&self) -> f64 {
        (1.0 - self.r_squared).max(0.0).sqrt()
    }
}

/// Ordinary least squares `y ≈ slope·x + intercept`; `None` with fewer than
/// two points or constant abscissae.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    Some(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticFit {
    /// `y ≈ c[0] + c[1] x + c[2] x²`.
    pub coeffs: [f64; 3],
    /// `‖y - fit‖₂ / ‖y‖₂`.
    pub relative_residual: f64,
}

impl QuadraticFit {
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs[0] + x * (self.coeffs[1] + x * self.coeffs[2])
    }
}

/// Least-squares quadratic through the points; `None` with fewer than three
/// distinct abscissae.
pub fn quadratic_fit(xs: &[f64], ys: &[f64]) -> Option<QuadraticFit> {
    assert_eq!(xs.len(), ys.len());
    if xs.len() < 3 {
        return None;
    }
    // Centre and scale x for conditioning, then solve the normal equations.
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let sx = xs.iter().map(|x| (x - mx).abs()).fold(0.0, f64::max);
    if sx == 0.0 {
        return None;
    }
    let t: Vec<f64> = xs.iter().map(|x| (x - mx) / sx).collect();
    let mut m = [[0.0f64; 4]; 3];
    for (ti, yi) in t.iter().zip(ys) {
        let pows = [1.0, *ti, ti * ti];
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] += pows[r] * pows[c];
            }
            m[r][3] += pows[r] * yi;
        }
    }
    let u = solve3(m)?;
    // Undo the substitution t = (x - mx)/sx.
    let (a, b, c) = (u[0], u[1] / sx, u[2] / (sx * sx));
    let coeffs = [a - b * mx + c * mx * mx, b - 2.0 * c * mx, c];
    let fit = QuadraticFit {
        coeffs,
        relative_residual: 0.0,
    };
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (y - fit.eval(*x)).powi(2)).sum();
    let den: f64 = ys.iter().map(|y| y * y).sum();
    Some(QuadraticFit {
        relative_residual: if den == 0.0 { 0.0 } else { (num / den).sqrt() },
        ..fit
    })
}

fn solve3(mut m: [[f64; 4]; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, piv);
        for r in 0..3 {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..4 {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    Some([m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 1.0).collect();
        let f = linear_fit(&xs, &ys).unwrap();
        assert!((f.slope - 3.0).abs() < 1e-12 && (f.intercept + 1.0).abs() < 1e-12);
        assert!(f.normalized_residual() < 1e-6);
        assert!(linear_fit(&[1.0, 1.0], &[0.0, 2.0]).is_none());
    }

    #[test]
    fn exact_parabola() {
        let xs: Vec<f64> = (10..40).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.5 * x * x - 2.0 * x + 7.0).collect();
        let q = quadratic_fit(&xs, &ys).unwrap();
        assert!((q.coeffs[2] - 0.5).abs() < 1e-9);
        assert!((q.coeffs[1] + 2.0).abs() < 1e-7);
        assert!((q.coeffs[0] - 7.0).abs() < 1e-5);
        assert!(q.relative_residual < 1e-10);
    }
}
