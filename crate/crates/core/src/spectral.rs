use crate::error::{Error, Result};
use crate::tensor::SparseSymTensor;

/// Options for the shifted power iteration.
#[derive(Debug, Clone)]
pub struct SpectralConfig {
    /// Relative gap between the Collatz–Wielandt ratio bounds at which the
    /// iteration stops.
    pub tol: f64,
    pub max_iter: usize,
    /// Diagonal shift; any positive value guarantees convergence for weakly
    /// irreducible tensors that are not primitive.
    pub shift: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            tol: 1e-12,
            max_iter: 100_000,
            shift: 1.0,
        }
    }
}

impl SpectralConfig {
    fn validate(&self) -> Result<()> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "tol {} must be positive",
                self.tol
            )));
        }
        if self.max_iter < 1 {
            return Err(Error::InvalidConfig("max_iter must be at least 1".into()));
        }
        if self.shift.is_nan() || self.shift < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "shift {} must be nonnegative",
                self.shift
            )));
        }
        Ok(())
    }
}

/// The Perron pair of a weakly irreducible nonnegative tensor: spectral radius
/// `lambda_s` and entrywise positive eigenvector `x_s` with `‖x_s‖_m = 1`.
#[derive(Debug, Clone)]
pub struct PerronPair {
    pub lambda_s: f64,
    pub x_s: Vec<f64>,
    pub iterations: usize,
    /// Relative width of the ratio bracket at termination.
    pub gap: f64,
}

/// `‖x‖_m = (Σ |x_i|^m)^{1/m}`.
pub fn norm_m(x: &[f64], m: usize) -> f64 {
    x.iter()
        .map(|v| v.abs().powi(m as i32))
        .sum::<f64>()
        .powf(1.0 / m as f64)
}

/// `‖T x^{m-1} - λ x^{[m-1]}‖_∞`.
pub fn eigen_residual(t: &SparseSymTensor, lambda: f64, x: &[f64]) -> Result<f64> {
    let tx = t.apply(x)?;
    let p = t.order() as i32 - 1;
    Ok(tx
        .iter()
        .zip(x)
        .map(|(txi, xi)| (txi - lambda * xi.powi(p)).abs())
        .fold(0.0, f64::max))
}

/// Computes the Perron pair by shifted power iteration.
///
/// Starting from the uniform positive vector, each step maps
/// `y = T x^{m-1} + shift · x^{[m-1]}`, then `x ← y^{[1/(m-1)]}` normalized in
/// the m-norm. The Collatz–Wielandt ratios `y_i / x_i^{m-1}` bracket
/// `ρ(T) + shift`; iteration stops when their relative spread drops below
/// `tol`, and the midpoint (minus the shift) is reported. For `m = 2` this is
/// the ordinary shifted matrix power method.
pub fn perron_pair(t: &SparseSymTensor, cfg: &SpectralConfig) -> Result<PerronPair> {
    cfg.validate()?;
    if !t.is_nonnegative() {
        return Err(Error::NotIrreducible("tensor has negative entries".into()));
    }
    if !t.is_weakly_irreducible() {
        return Err(Error::NotIrreducible(
            "support digraph is not strongly connected".into(),
        ));
    }
    let n = t.dim();
    let m = t.order();
    let p = m - 1;

    let mut x = vec![(n as f64).powf(-1.0 / m as f64); n];
    let mut best: Option<PerronPair> = None;

    for it in 1..=cfg.max_iter {
        let tx = t.apply(&x)?;
        let mut r_min = f64::INFINITY;
        let mut r_max = f64::NEG_INFINITY;
        let mut y = vec![0.0; n];
        for i in 0..n {
            let xp = x[i].powi(p as i32);
            y[i] = tx[i] + cfg.shift * xp;
            let ratio = y[i] / xp;
            r_min = r_min.min(ratio);
            r_max = r_max.max(ratio);
        }
        let gap = (r_max - r_min) / r_max;
        let lambda = 0.5 * (r_min + r_max) - cfg.shift;
        if best.as_ref().is_none_or(|b| gap < b.gap) {
            best = Some(PerronPair {
                lambda_s: lambda,
                x_s: x.clone(),
                iterations: it,
                gap,
            });
        }
        if gap < cfg.tol {
            return Ok(PerronPair {
                lambda_s: lambda,
                x_s: x,
                iterations: it,
                gap,
            });
        }
        if p == 1 {
            x = y;
        } else {
            let inv_p = 1.0 / p as f64;
            x = y.iter().map(|v| v.powf(inv_p)).collect();
        }
        let norm = norm_m(&x, m);
        for v in &mut x {
            *v /= norm;
        }
    }

    let best = best.expect("at least one iteration ran");
    Err(Error::NoConvergence {
        iterations: cfg.max_iter,
        gap: best.gap,
        best: Box::new(best),
    })
}
