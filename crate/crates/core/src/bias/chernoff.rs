//! Numeric choice of the exponential-moment parameter `theta` behind the
//! large-deviation bound `P[|L_n - n H_n| >= eps n] < 2 alpha^n`.

use serde::Serialize;

use super::shannon_entropy;
use crate::error::{Error, Result};

pub const BETA_GRID_STEP: f64 = 1e-3;
const GOLDEN_ITERATIONS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChernoffParams {
    pub delta: f64,
    pub eps: f64,
    pub theta: f64,
    /// `1 - theta eps / 2`.
    pub alpha: f64,
    /// `min over the grid of (1 - theta eps / 2) - E exp(theta eta)`; positive.
    pub margin: f64,
}

impl ChernoffParams {
    /// `2 alpha^n`.
    pub fn bound(&self, n: usize) -> f64 {
        2.0 * self.alpha.powi(n as i32)
    }
}

fn beta_grid(delta: f64) -> Vec<f64> {
    let hi = 1.0 - delta;
    let steps = ((hi - delta) / BETA_GRID_STEP).floor() as usize;
    let mut grid: Vec<f64> = (0..=steps)
        .map(|k| delta + k as f64 * BETA_GRID_STEP)
        .collect();
    if grid.last().is_some_and(|&b| b < hi) {
        grid.push(hi);
    }
    grid
}

/// `E exp(theta eta)` for both `eta = xi - H - eps` and `eta = H - xi - eps`.
fn moments(beta: f64, theta: f64, eps: f64) -> [f64; 2] {
    let h = shannon_entropy(beta);
    let x1 = -beta.log2();
    let x0 = -(1.0 - beta).log2();
    let up = beta * (theta * (x1 - h - eps)).exp() + (1.0 - beta) * (theta * (x0 - h - eps)).exp();
    let down =
        beta * (theta * (h - x1 - eps)).exp() + (1.0 - beta) * (theta * (h - x0 - eps)).exp();
    [up, down]
}

fn margin(grid: &[f64], theta: f64, eps: f64) -> f64 {
    let target = 1.0 - theta * eps / 2.0;
    grid.iter()
        .flat_map(|&b| moments(b, theta, eps))
        .map(|m| target - m)
        .fold(f64::INFINITY, f64::min)
}

/// Golden-section search over `theta` in `(0, 2/eps)` for the largest grid margin.
///
/// The margin is a minimum of concave functions of `theta`, so it is
/// unimodal on the bracket.
pub fn chernoff_alpha(delta: f64, eps: f64) -> Result<ChernoffParams> {
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::Domain(format!(
            "delta must lie in (0, 1/2], got {delta}"
        )));
    }
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    let grid = beta_grid(delta);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0, 2.0 / eps);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (margin(&grid, c, eps), margin(&grid, d, eps));
    for _ in 0..GOLDEN_ITERATIONS {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = margin(&grid, c, eps);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = margin(&grid, d, eps);
        }
    }
    let (theta, best) = if fc >= fd { (c, fc) } else { (d, fd) };
    if !(best > 0.0 && theta > 0.0) {
        return Err(Error::Numeric(format!(
            "no theta with positive margin for delta={delta}, eps={eps}"
        )));
    }
    let alpha = 1.0 - theta * eps / 2.0;
    Ok(ChernoffParams {
        delta,
        eps,
        theta,
        alpha,
        margin: best,
    })
}
