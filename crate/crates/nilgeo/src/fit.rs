//! Least-squares fitting on log-log grids, shared by exponent-recovery
//! experiments and contact estimation.

/// Ordinary least squares of y against x; returns (slope, intercept, r2).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    assert!(n >= 2.0, "need at least two points to fit");
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    (slope, intercept, r2)
}

/// Fit `y = Q * x^a` from positive samples; returns (a, Q, r2).
pub fn power_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let (a, b, r2) = linear_fit(&lx, &ly);
    (a, b.exp(), r2)
}

/// Log-spaced grid of n points in [lo, hi].
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_power_law() {
        let xs = log_grid(1e-3, 1e-1, 12);
        let ys: Vec<f64> = xs.iter().map(|x| 3.5 * x.powf(1.75)).collect();
        let (a, q, r2) = power_fit(&xs, &ys);
        assert!((a - 1.75).abs() < 1e-10);
        assert!((q - 3.5).abs() < 1e-9);
        assert!(r2 > 0.999999);
    }
}
