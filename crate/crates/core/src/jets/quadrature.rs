//! Adaptive Gauss–Legendre quadrature for closed-form integrands.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const NODES: usize = 12;
const MAX_DEPTH: usize = 40;

fn gauss_legendre() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = NODES;
        let mut xs = vec![0.0; n];
        let mut ws = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let pk = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = pk;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            xs[i] = -x;
            xs[n - 1 - i] = x;
            ws[i] = w;
            ws[n - 1 - i] = w;
        }
        (xs, ws)
    })
}

fn panel(f: &mut impl FnMut(f64) -> Result<f64>, a: f64, b: f64) -> Result<f64> {
    let (xs, ws) = gauss_legendre();
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let mut sum = 0.0;
    for (x, w) in xs.iter().zip(ws) {
        sum += w * f(mid + half * x)?;
    }
    Ok(sum * half)
}

/// `∫_a^b f`, bisecting panels until successive estimates agree to `tol`
/// relative to the running magnitude.
pub fn integrate(mut f: impl FnMut(f64) -> Result<f64>, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let whole = panel(&mut f, a, b)?;
    let scale = whole.abs().max(1.0);
    let floor = 8.0 * f64::EPSILON * scale;
    recurse(&mut f, a, b, whole, (tol * scale).max(floor), floor, 0)
}

fn recurse(
    f: &mut impl FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    floor: f64,
    depth: usize,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let left = panel(f, a, m)?;
    let right = panel(f, m, b)?;
    if (left + right - whole).abs() <= tol {
        return Ok(left + right);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Quadrature { a, b });
    }
    let tol = (0.5 * tol).max(floor);
    Ok(recurse(f, a, m, left, tol, floor, depth + 1)?
        + recurse(f, m, b, right, tol, floor, depth + 1)?)
}
