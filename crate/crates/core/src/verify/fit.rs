use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub a: f64,
    pub b: f64,
    pub p: f64,
    /// Euclidean norm of the residuals at the solution.
    pub residual: f64,
}

const MAX_ITERS: usize = 200;

/// Least-squares fit of `f = a·p^m + b` with `p` constrained to `[0, 1]`.
///
/// Starts from `b = 0.5` and a log-linear estimate of `a` and `p`, refines
/// with Levenberg-Marquardt, then refits `a` and `b` exactly for the final
/// `p`. Constant data returns `p = 1`, `b = 0.5`.
pub fn fit_exponential_decay(points: &[(usize, f64)]) -> Result<FitResult> {
    if points.len() < 3 {
        return Err(Error::Fit(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    let m0 = points[0].0;
    if points.iter().all(|&(m, _)| m == m0) {
        return Err(Error::Fit(
            "need at least 2 distinct sequence lengths".into(),
        ));
    }
    if points.iter().any(|&(_, f)| !f.is_finite()) {
        return Err(Error::Fit("non-finite data".into()));
    }
    let f0 = points[0].1;
    if points.iter().all(|&(_, f)| (f - f0).abs() <= 1e-12) {
        return Ok(finish(points, f0 - 0.5, 0.5, 1.0));
    }

    let (mut a, mut b, mut p) = initial_guess(points);
    let mut cost = sum_sq(points, a, b, p);
    let mut lambda = 1e-3;
    for _ in 0..MAX_ITERS {
        let mut jtj = Matrix3::zeros();
        let mut jtr = Vector3::zeros();
        for &(m, f) in points {
            let pm = p.powi(m as i32);
            let dp = if m == 0 {
                0.0
            } else {
                a * m as f64 * p.powi(m as i32 - 1)
            };
            let j = Vector3::new(pm, 1.0, dp);
            jtj += j * j.transpose();
            jtr += j * (a * pm + b - f);
        }
        let mut damped = jtj;
        for i in 0..3 {
            damped[(i, i)] += lambda * jtj[(i, i)].max(1e-12);
        }
        let Some(step) = damped.lu().solve(&(-jtr)) else {
            return Err(Error::Fit("singular normal equations".into()));
        };
        let (na, nb, np) = (a + step[0], b + step[1], (p + step[2]).clamp(0.0, 1.0));
        let next = sum_sq(points, na, nb, np);
        if next < cost {
            let converged = cost - next <= 1e-15 * cost.max(1e-300) || step.norm() < 1e-14;
            (a, b, p, cost) = (na, nb, np, next);
            lambda = (lambda / 10.0).max(1e-12);
            if converged {
                break;
            }
        } else {
            lambda *= 10.0;
            if lambda > 1e12 {
                break;
            }
        }
    }
    if let Some((ra, rb)) = refit_linear(points, p) {
        if sum_sq(points, ra, rb, p) <= cost {
            (a, b) = (ra, rb);
        }
    }
    Ok(finish(points, a, b, p))
}

fn finish(points: &[(usize, f64)], a: f64, b: f64, p: f64) -> FitResult {
    FitResult {
        a,
        b,
        p,
        residual: sum_sq(points, a, b, p).sqrt(),
    }
}

fn sum_sq(points: &[(usize, f64)], a: f64, b: f64, p: f64) -> f64 {
    points
        .iter()
        .map(|&(m, f)| (a * p.powi(m as i32) + b - f).powi(2))
        .sum()
}

fn initial_guess(points: &[(usize, f64)]) -> (f64, f64, f64) {
    let b = 0.5;
    let sign = if points.iter().map(|&(_, f)| f - b).sum::<f64>() < 0.0 {
        -1.0
    } else {
        1.0
    };
    let xs: Vec<f64> = points.iter().map(|&(m, _)| m as f64).collect();
    let ys: Vec<f64> = points
        .iter()
        .map(|&(_, f)| (sign * (f - b)).max(1e-9).ln())
        .collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let p = slope.exp().clamp(1e-6, 1.0);
    let a = sign * (my - slope * mx).exp();
    (a, b, p)
}

/// Ordinary least squares for `a` and `b` with `p` held fixed.
fn refit_linear(points: &[(usize, f64)], p: f64) -> Option<(f64, f64)> {
    let mut m = Matrix2::zeros();
    let mut v = Vector2::zeros();
    for &(k, f) in points {
        let x = Vector2::new(p.powi(k as i32), 1.0);
        m += x * x.transpose();
        v += x * f;
    }
    if m.determinant().abs() < 1e-12 * m.norm_squared().max(1.0) {
        return None;
    }
    let s = m.lu().solve(&v)?;
    Some((s[0], s[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng as _;

    fn model(a: f64, b: f64, p: f64, ms: &[usize]) -> Vec<(usize, f64)> {
        ms.iter().map(|&m| (m, a * p.powi(m as i32) + b)).collect()
    }

    #[test]
    fn recovers_exact_model() {
        let pts = model(0.5, 0.5, 0.98, &[1, 2, 4, 8, 16, 32, 64, 100]);
        let r = fit_exponential_decay(&pts).unwrap();
        assert!((r.a - 0.5).abs() < 1e-6, "{r:?}");
        assert!((r.b - 0.5).abs() < 1e-6, "{r:?}");
        assert!((r.p - 0.98).abs() < 1e-6, "{r:?}");
        assert!(r.residual < 1e-6);
    }

    #[test]
    fn constant_data() {
        let r = fit_exponential_decay(&[(1, 1.0), (5, 1.0), (9, 1.0)]).unwrap();
        assert_eq!(r.p, 1.0);
        assert!((r.a + r.b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn noisy_data() {
        let mut rng = crate::rng::seeded(11);
        let ms: Vec<usize> = (1..=10).map(|k| k * 10).collect();
        let pts: Vec<(usize, f64)> = model(0.5, 0.5, 0.97, &ms)
            .into_iter()
            .map(|(m, f)| (m, f * (1.0 + 0.01 * rng.random_range(-1.0..1.0))))
            .collect();
        let r = fit_exponential_decay(&pts).unwrap();
        assert!((r.p - 0.97).abs() < 0.02, "{r:?}");
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(
            fit_exponential_decay(&[(1, 0.9), (2, 0.8)]),
            Err(Error::Fit(_))
        ));
        assert!(fit_exponential_decay(&[(3, 0.9), (3, 0.8), (3, 0.7)]).is_err());
        assert!(fit_exponential_decay(&[(1, f64::NAN), (2, 0.8), (3, 0.7)]).is_err());
    }

    #[test]
    fn p_stays_in_unit_interval() {
        let r = fit_exponential_decay(&[(1, 0.6), (2, 0.7), (3, 0.8), (4, 0.9)]).unwrap();
        assert!((0.0..=1.0).contains(&r.p));
    }
}
