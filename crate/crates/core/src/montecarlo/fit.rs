use crate::error::{Error, Result};

/// Least-squares fit of `mean ≈ a √n + b` to `(n, mean)` points.
pub fn fit_sqrt_curve(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 2 {
        return Err(Error::DegenerateFit(format!("need at least 2 points, got {}", points.len())));
    }
    let m = points.len() as f64;
    let xbar = points.iter().map(|(n, _)| n.sqrt()).sum::<f64>() / m;
    let ybar = points.iter().map(|(_, y)| y).sum::<f64>() / m;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(n, y) in points {
        let dx = n.sqrt() - xbar;
        sxx += dx * dx;
        sxy += dx * (y - ybar);
    }
    if sxx <= f64::EPSILON * xbar * xbar * m {
        return Err(Error::DegenerateFit("all n are equal".into()));
    }
    let a = sxy / sxx;
    Ok((a, ybar - a * xbar))
}
