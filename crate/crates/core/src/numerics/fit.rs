use super::NumericsError;

/// Least-squares line through `(ln s, ln v)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    /// RMS deviation of `ln v` from the fitted line.
    pub residual: f64,
}

pub fn fit_log_log_slope(pairs: &[(f64, f64)]) -> Result<LogLogFit, NumericsError> {
    if pairs.len() < 3 {
        return Err(NumericsError::DegenerateData(format!("{} pairs, need at least 3", pairs.len())));
    }
    if let Some(&(s, v)) = pairs.iter().find(|&&(s, v)| !(s > 0.0 && v > 0.0) || !s.is_finite() || !v.is_finite()) {
        return Err(NumericsError::DegenerateData(format!("non-positive pair ({s}, {v})")));
    }
    let pts: Vec<(f64, f64)> = pairs.iter().map(|&(s, v)| (s.ln(), v.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx <= 1e-300 * n || sxx.sqrt() <= 1e-12 * mx.abs().max(1.0) {
        return Err(NumericsError::DegenerateData("all abscissae equal".into()));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual =
        (pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum::<f64>() / n).sqrt();
    Ok(LogLogFit { slope, intercept, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_law() {
        let pairs: Vec<_> = (1..=4).map(|k| 10f64.powi(-k)).map(|s| (s, s * s)).collect();
        let fit = fit_log_log_slope(&pairs).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-10);
        assert!(fit.intercept.abs() < 1e-9);
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn constant_has_zero_slope() {
        let pairs: Vec<_> = [1e-1, 1e-2, 1e-3].iter().map(|&s| (s, 3.0)).collect();
        let fit = fit_log_log_slope(&pairs).unwrap();
        assert!(fit.slope.abs() < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(fit_log_log_slope(&[(0.1, 1.0), (0.1, 2.0), (0.1, 3.0)]).is_err());
        assert!(fit_log_log_slope(&[(0.1, 1.0), (0.2, 2.0)]).is_err());
        assert!(fit_log_log_slope(&[(0.1, 1.0), (0.2, -2.0), (0.3, 1.0)]).is_err());
    }
}
