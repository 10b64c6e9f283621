use serde::Serialize;

use crate::error::{Error, Result};

/// Least-squares line through transformed points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalingFit {
    /// The fitted exponent (log-log) or rate (log-linear).
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub rms: f64,
    pub min_size: f64,
    pub max_size: f64,
}

fn line(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    (slope, intercept, rms)
}

fn check(points: &[(f64, f64)], need_positive_x: bool) -> Result<()> {
    if points.len() < 3 {
        return Err(Error::Fit(format!("need at least 3 points, got {}", points.len())));
    }
    if let Some(p) = points
        .iter()
        .find(|(x, y)| !(*y > 0.0) || (need_positive_x && !(*x > 0.0)))
    {
        return Err(Error::Fit(format!("non-positive point {p:?}")));
    }
    let first = points[0].0;
    if points.iter().all(|p| p.0 == first) {
        return Err(Error::Fit("all sizes are equal".into()));
    }
    Ok(())
}

fn span(points: &[(f64, f64)]) -> (f64, f64) {
    points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.0), hi.max(p.0)))
}

/// Slope of `ln(cost)` against `ln(size)`.
pub fn fit_exponent(points: &[(f64, f64)]) -> Result<ScalingFit> {
    check(points, true)?;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (slope, intercept, rms) = line(&xs, &ys);
    let (min_size, max_size) = span(points);
    Ok(ScalingFit {
        slope,
        intercept,
        rms,
        min_size,
        max_size,
    })
}

/// Slope of `ln(cost)` against `size`, for exponential growth `b^size`.
pub fn fit_log_linear(points: &[(f64, f64)]) -> Result<ScalingFit> {
    check(points, false)?;
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (slope, intercept, rms) = line(&xs, &ys);
    let (min_size, max_size) = span(points);
    Ok(ScalingFit {
        slope,
        intercept,
        rms,
        min_size,
        max_size,
    })
}
