//! Complex (Wirtinger) derivatives of real jets.

use num_complex::Complex64;

use super::jet::Jet;
use crate::error::{Error, Result};

/// One Wirtinger operator `∂/∂z_k` or `∂/∂z̄_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Wirtinger {
    Z(usize),
    ZBar(usize),
}

/// Assignment of real coordinates `(re, im)` to each complex coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    pub pairs: Vec<(usize, usize)>,
}

impl Pairing {
    /// `z₁ = x₀ + i x₁`, `z₂ = x₂ + i x₃`.
    pub fn standard() -> Self {
        Pairing {
            pairs: vec![(0, 1), (2, 3)],
        }
    }

    /// Real-coordinate expansion of one operator as `(variable, weight)`.
    fn expand(&self, op: Wirtinger) -> [(usize, Complex64); 2] {
        let (k, sign) = match op {
            Wirtinger::Z(k) => (k, -1.0),
            Wirtinger::ZBar(k) => (k, 1.0),
        };
        let (re, im) = self.pairs[k];
        [
            (re, Complex64::new(0.5, 0.0)),
            (im, Complex64::new(0.0, 0.5 * sign)),
        ]
    }
}

/// Applies the operators in `ops` to the real function carried by `jet` and
/// returns the value at the expansion point.
pub fn wirtinger(jet: &Jet, pairing: &Pairing, ops: &[Wirtinger]) -> Result<Complex64> {
    if jet.order() < ops.len() {
        return Err(Error::Order {
            requested: ops.len(),
            max: jet.order(),
        });
    }
    let mut vars = Vec::with_capacity(ops.len());
    let mut total = Complex64::new(0.0, 0.0);
    expand_into(
        jet,
        pairing,
        ops,
        &mut vars,
        Complex64::new(1.0, 0.0),
        &mut total,
    );
    Ok(total)
}

fn expand_into(
    jet: &Jet,
    pairing: &Pairing,
    ops: &[Wirtinger],
    vars: &mut Vec<usize>,
    weight: Complex64,
    total: &mut Complex64,
) {
    match ops.split_first() {
        None => *total += weight * jet.partial(vars),
        Some((&op, rest)) => {
            for (v, w) in pairing.expand(op) {
                vars.push(v);
                expand_into(jet, pairing, rest, vars, weight * w, total);
                vars.pop();
            }
        }
    }
}

/// `H_{z_α z̄_β}` for `α, β ∈ {1, 2}` (indices 0 and 1 here).
pub fn complex_hessian(jet: &Jet, pairing: &Pairing) -> Result<[[Complex64; 2]; 2]> {
    let mut h = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (a, row) in h.iter_mut().enumerate() {
        for (b, entry) in row.iter_mut().enumerate() {
            *entry = wirtinger(jet, pairing, &[Wirtinger::Z(a), Wirtinger::ZBar(b)])?;
        }
    }
    Ok(h)
}
