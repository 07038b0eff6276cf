//! Truncated multivariate Taylor polynomials.
//!
//! A [`Jet`] of order `r` in `n` variables stores the Taylor coefficients
//! `f^(α)(p) / α!` for every exponent vector `α` with `|α| ≤ r`, in graded
//! lexicographic order. Arithmetic on jets is exact truncated polynomial
//! arithmetic, so derivatives come out free of finite-difference noise.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest order accepted by the public evaluation entry points.
pub const MAX_ORDER: usize = 4;

/// Largest order used internally; nested partial derivatives raise the
/// evaluation order of their operands by one per level.
pub const INTERNAL_MAX_ORDER: usize = 8;

/// Largest chart dimension.
pub const MAX_DIM: usize = 4;

type Exponent = [u8; MAX_DIM];

pub(crate) struct Layout {
    dim: usize,
    order: usize,
    exps: Vec<Exponent>,
    lookup: HashMap<Exponent, usize>,
    /// `(i, j, k)` with `exps[i] + exps[j] == exps[k]`.
    products: Vec<(u16, u16, u16)>,
    /// `degree_start[d]` is the index of the first monomial of degree `d`.
    degree_start: Vec<usize>,
}

impl fmt::Debug for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Layout(dim={}, order={})", self.dim, self.order)
    }
}

fn degree(e: &Exponent) -> usize {
    e.iter().map(|&x| x as usize).sum()
}

impl Layout {
    fn build(dim: usize, order: usize) -> Self {
        let mut exps = Vec::new();
        let mut degree_start = Vec::with_capacity(order + 2);
        for d in 0..=order {
            degree_start.push(exps.len());
            let mut current = [0u8; MAX_DIM];
            push_exponents(dim, 0, d, &mut current, &mut exps);
        }
        degree_start.push(exps.len());
        let lookup: HashMap<Exponent, usize> =
            exps.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let mut products = Vec::new();
        for (i, a) in exps.iter().enumerate() {
            for (j, b) in exps.iter().enumerate() {
                if degree(a) + degree(b) > order {
                    continue;
                }
                let mut c = [0u8; MAX_DIM];
                for v in 0..MAX_DIM {
                    c[v] = a[v] + b[v];
                }
                products.push((i as u16, j as u16, lookup[&c] as u16));
            }
        }
        Layout {
            dim,
            order,
            exps,
            lookup,
            products,
            degree_start,
        }
    }

    fn len(&self) -> usize {
        self.exps.len()
    }
}

/// Exponents of total degree `remaining` over variables `var..dim`, in
/// lexicographic order (higher powers of earlier variables first).
fn push_exponents(
    dim: usize,
    var: usize,
    remaining: usize,
    current: &mut Exponent,
    out: &mut Vec<Exponent>,
) {
    if var + 1 == dim {
        current[var] = remaining as u8;
        out.push(*current);
        current[var] = 0;
        return;
    }
    for p in (0..=remaining).rev() {
        current[var] = p as u8;
        push_exponents(dim, var + 1, remaining - p, current, out);
    }
    current[var] = 0;
}

static LAYOUTS: [[OnceLock<Layout>; INTERNAL_MAX_ORDER + 1]; MAX_DIM] =
    [const { [const { OnceLock::new() }; INTERNAL_MAX_ORDER + 1] }; MAX_DIM];

pub(crate) fn layout(dim: usize, order: usize) -> &'static Layout {
    assert!(
        (1..=MAX_DIM).contains(&dim),
        "jet dimension {dim} outside 1..={MAX_DIM}"
    );
    assert!(
        order <= INTERNAL_MAX_ORDER,
        "jet order {order} exceeds {INTERNAL_MAX_ORDER}"
    );
    LAYOUTS[dim - 1][order].get_or_init(|| Layout::build(dim, order))
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Value and all partial derivatives up to a fixed order of a scalar field
/// at a point.
#[derive(Clone)]
pub struct Jet {
    layout: &'static Layout,
    coeffs: Vec<f64>,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("dim", &self.layout.dim)
            .field("order", &self.layout.order)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl Jet {
    pub fn constant(dim: usize, order: usize, value: f64) -> Self {
        let layout = layout(dim, order);
        let mut coeffs = vec![0.0; layout.len()];
        coeffs[0] = value;
        Jet { layout, coeffs }
    }

    pub fn zero(dim: usize, order: usize) -> Self {
        Self::constant(dim, order, 0.0)
    }

    /// The coordinate function `x_var` expanded at `x_var = value`.
    pub fn variable(dim: usize, order: usize, var: usize, value: f64) -> Self {
        assert!(var < dim, "variable index {var} out of range for dim {dim}");
        let mut jet = Self::constant(dim, order, value);
        if order >= 1 {
            let mut e = [0u8; MAX_DIM];
            e[var] = 1;
            let idx = jet.layout.lookup[&e];
            jet.coeffs[idx] = 1.0;
        }
        jet
    }

    /// Builds a jet from a table of partial derivatives, given as a function
    /// of the sorted multi-index of differentiation variables.
    pub fn from_partials(dim: usize, order: usize, partial: impl Fn(&[usize]) -> f64) -> Self {
        let layout = layout(dim, order);
        let coeffs = layout
            .exps
            .iter()
            .map(|e| {
                let idx = exponent_to_indices(e);
                let scale: f64 = e.iter().map(|&k| factorial(k as usize)).product();
                partial(&idx) / scale
            })
            .collect();
        Jet { layout, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.layout.dim
    }

    pub fn order(&self) -> usize {
        self.layout.order
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Raw Taylor coefficients in graded lexicographic order.
    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Partial derivative along the given variables, in any order; `&[]`
    /// is the value. Panics if the derivative order exceeds the jet order.
    pub fn partial(&self, vars: &[usize]) -> f64 {
        assert!(
            vars.len() <= self.order(),
            "partial of order {} requested from a jet of order {}",
            vars.len(),
            self.order()
        );
        let mut e = [0u8; MAX_DIM];
        for &v in vars {
            assert!(v < self.dim(), "variable {v} out of range");
            e[v] += 1;
        }
        let scale: f64 = e.iter().map(|&k| factorial(k as usize)).product();
        self.coeffs[self.layout.lookup[&e]] * scale
    }

    /// All partials keyed by sorted multi-index.
    pub fn partials(&self) -> Vec<(Vec<usize>, f64)> {
        self.layout
            .exps
            .iter()
            .zip(&self.coeffs)
            .map(|(e, c)| {
                let scale: f64 = e.iter().map(|&k| factorial(k as usize)).product();
                (exponent_to_indices(e), c * scale)
            })
            .collect()
    }

    pub fn gradient(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.partial(&[i])).collect()
    }

    /// True when every non-constant Taylor coefficient is exactly zero.
    pub fn is_constant(&self) -> bool {
        self.coeffs[1..].iter().all(|&c| c == 0.0)
    }

    pub fn truncate(&self, order: usize) -> Jet {
        assert!(order <= self.order());
        let layout = layout(self.dim(), order);
        Jet {
            layout,
            coeffs: self.coeffs[..layout.len()].to_vec(),
        }
    }

    /// Partial derivative with respect to `var`, one order lower.
    pub fn derivative(&self, var: usize) -> Jet {
        assert!(self.order() >= 1, "cannot differentiate an order-0 jet");
        let target = layout(self.dim(), self.order() - 1);
        let coeffs = target
            .exps
            .iter()
            .map(|e| {
                let mut up = *e;
                up[var] += 1;
                self.coeffs[self.layout.lookup[&up]] * up[var] as f64
            })
            .collect();
        Jet {
            layout: target,
            coeffs,
        }
    }

    fn check_compatible(&self, other: &Jet) {
        assert!(
            std::ptr::eq(self.layout, other.layout),
            "incompatible jets: {:?} vs {:?}",
            self.layout,
            other.layout
        );
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet {
            layout: self.layout,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add_const(&self, c: f64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    fn mul_jet(&self, other: &Jet) -> Jet {
        self.check_compatible(other);
        let mut coeffs = vec![0.0; self.coeffs.len()];
        for &(i, j, k) in &self.layout.products {
            coeffs[k as usize] += self.coeffs[i as usize] * other.coeffs[j as usize];
        }
        Jet {
            layout: self.layout,
            coeffs,
        }
    }

    /// `Σ_k series[k] · (self − self(p))^k`, i.e. the composition of a
    /// univariate function with Taylor coefficients `series` at `self(p)`.
    pub fn map_series(&self, series: &[f64]) -> Jet {
        let order = self.order();
        debug_assert!(series.len() > order);
        if self.is_constant() {
            return Jet::constant(self.dim(), order, series[0]);
        }
        let mut nil = self.clone();
        nil.coeffs[0] = 0.0;
        // Horner in the nilpotent part.
        let mut acc = Jet::constant(self.dim(), order, series[order]);
        for k in (0..order).rev() {
            acc = acc.mul_jet(&nil).add_const(series[k]);
        }
        acc
    }

    pub fn recip(&self) -> Result<Jet> {
        self.powi(-1)
    }

    pub fn div(&self, other: &Jet) -> Result<Jet> {
        Ok(self.mul_jet(&other.recip()?))
    }

    pub fn powi(&self, n: i32) -> Result<Jet> {
        let a = self.value();
        if n < 0 && a == 0.0 {
            return Err(Error::Domain {
                op: "powi",
                value: a,
            });
        }
        let series = (0..=self.order())
            .map(|k| {
                if n >= 0 && k as i32 > n {
                    return 0.0;
                }
                binomial(n as f64, k) * a.powi(n - k as i32)
            })
            .collect::<Vec<_>>();
        Ok(self.map_series(&series))
    }

    pub fn powf(&self, p: f64) -> Result<Jet> {
        let a = self.value();
        if a < 0.0 || (a == 0.0 && (self.order() > 0 && !self.is_constant() || p < 0.0)) {
            return Err(Error::Domain {
                op: "powf",
                value: a,
            });
        }
        let series = (0..=self.order())
            .map(|k| binomial(p, k) * a.powf(p - k as f64))
            .collect::<Vec<_>>();
        Ok(self.map_series(&series))
    }

    pub fn sqrt(&self) -> Result<Jet> {
        let a = self.value();
        if a < 0.0 || (a == 0.0 && !self.is_constant()) {
            return Err(Error::Domain {
                op: "sqrt",
                value: a,
            });
        }
        if a == 0.0 {
            return Ok(Jet::zero(self.dim(), self.order()));
        }
        self.powf(0.5)
    }

    pub fn exp(&self) -> Jet {
        let ea = self.value().exp();
        let series: Vec<f64> = (0..=self.order()).map(|k| ea / factorial(k)).collect();
        self.map_series(&series)
    }

    pub fn ln(&self) -> Result<Jet> {
        let a = self.value();
        if a <= 0.0 {
            return Err(Error::Domain { op: "ln", value: a });
        }
        let series: Vec<f64> = (0..=self.order())
            .map(|k| {
                if k == 0 {
                    a.ln()
                } else {
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    sign / (k as f64 * a.powi(k as i32))
                }
            })
            .collect();
        Ok(self.map_series(&series))
    }

    pub fn sin(&self) -> Jet {
        let a = self.value();
        let series: Vec<f64> = (0..=self.order())
            .map(|k| (a + k as f64 * std::f64::consts::FRAC_PI_2).sin() / factorial(k))
            .collect();
        self.map_series(&series)
    }

    pub fn cos(&self) -> Jet {
        let a = self.value();
        let series: Vec<f64> = (0..=self.order())
            .map(|k| (a + k as f64 * std::f64::consts::FRAC_PI_2).cos() / factorial(k))
            .collect();
        self.map_series(&series)
    }

    pub fn sinh(&self) -> Jet {
        let a = self.value();
        let series: Vec<f64> = (0..=self.order())
            .map(|k| if k % 2 == 0 { a.sinh() } else { a.cosh() } / factorial(k))
            .collect();
        self.map_series(&series)
    }

    pub fn cosh(&self) -> Jet {
        let a = self.value();
        let series: Vec<f64> = (0..=self.order())
            .map(|k| if k % 2 == 0 { a.cosh() } else { a.sinh() } / factorial(k))
            .collect();
        self.map_series(&series)
    }

    pub fn atan(&self) -> Result<Jet> {
        self.integrated(self.value().atan(), |u| {
            (u.mul_jet(u)).add_const(1.0).recip()
        })
    }

    /// Inverse cotangent with values in `(0, π)`.
    pub fn arccot(&self) -> Result<Jet> {
        Ok(self
            .atan()?
            .scale(-1.0)
            .add_const(std::f64::consts::FRAC_PI_2))
    }

    pub fn acosh(&self) -> Result<Jet> {
        let a = self.value();
        if a < 1.0 || (a == 1.0 && !self.is_constant()) {
            return Err(Error::Domain {
                op: "acosh",
                value: a,
            });
        }
        self.integrated(a.acosh(), |u| u.mul_jet(u).add_const(-1.0).powf(-0.5))
    }

    pub fn asinh(&self) -> Result<Jet> {
        self.integrated(self.value().asinh(), |u| {
            u.mul_jet(u).add_const(1.0).powf(-0.5)
        })
    }

    /// Composes with a univariate function given its value at `self(p)` and
    /// its derivative as a jet expression.
    fn integrated(&self, value: f64, derivative: impl Fn(&Jet) -> Result<Jet>) -> Result<Jet> {
        let order = self.order();
        let mut series = vec![value; order + 1];
        if order >= 1 && !self.is_constant() {
            let u = Jet::variable(1, order - 1, 0, self.value());
            let d = derivative(&u)?;
            for k in 1..=order {
                series[k] = d.coeffs[k - 1] / k as f64;
            }
        } else {
            series[1..].iter_mut().for_each(|s| *s = 0.0);
        }
        Ok(self.map_series(&series))
    }

    /// Substitutes jets for the variables of this Taylor polynomial.
    ///
    /// `self` is read as a polynomial in `(y − y₀)` where `y₀` are the
    /// values of `inner`; each `inner[i]` is a jet in the outer variables.
    /// The result has the order and dimension of the inner jets.
    pub fn compose(&self, inner: &[Jet]) -> Jet {
        assert_eq!(inner.len(), self.dim(), "compose: arity mismatch");
        let first = &inner[0];
        let (dim, order) = (first.dim(), first.order());
        assert!(order <= self.order(), "compose: outer jet order too low");
        let nil: Vec<Jet> = inner
            .iter()
            .map(|j| {
                first.check_compatible(j);
                let mut n = j.clone();
                n.coeffs[0] = 0.0;
                n
            })
            .collect();
        // powers[i][e] = nil_i^e
        let powers: Vec<Vec<Jet>> = nil
            .iter()
            .map(|n| {
                let mut ps = vec![Jet::constant(dim, order, 1.0)];
                for e in 1..=order {
                    let next = ps[e - 1].mul_jet(n);
                    ps.push(next);
                }
                ps
            })
            .collect();
        let mut out = Jet::zero(dim, order);
        let end = self.layout.degree_start[order + 1];
        for (e, &c) in self.layout.exps[..end].iter().zip(&self.coeffs[..end]) {
            if c == 0.0 {
                continue;
            }
            let mut term: Option<Jet> = None;
            for v in 0..self.dim() {
                if e[v] == 0 {
                    continue;
                }
                let p = &powers[v][e[v] as usize];
                term = Some(match term {
                    None => p.clone(),
                    Some(t) => t.mul_jet(p),
                });
            }
            match term {
                None => out.coeffs[0] += c,
                Some(t) => {
                    for (o, x) in out.coeffs.iter_mut().zip(&t.coeffs) {
                        *o += c * x;
                    }
                }
            }
        }
        out
    }
}

fn binomial(p: f64, k: usize) -> f64 {
    let mut b = 1.0;
    for i in 0..k {
        b *= (p - i as f64) / (i as f64 + 1.0);
    }
    b
}

fn exponent_to_indices(e: &Exponent) -> Vec<usize> {
    let mut idx = Vec::new();
    for (v, &k) in e.iter().enumerate() {
        idx.extend(std::iter::repeat_n(v, k as usize));
    }
    idx
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        self.check_compatible(rhs);
        Jet {
            layout: self.layout,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self.check_compatible(rhs);
        Jet {
            layout: self.layout,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.mul_jet(rhs)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        &self + &rhs
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        &self - &rhs
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        self.mul_jet(&rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_sizes_match_binomials() {
        // C(n + r, r) monomials of degree ≤ r in n variables.
        assert_eq!(layout(4, 4).len(), 70);
        assert_eq!(layout(2, 4).len(), 15);
        assert_eq!(layout(1, 3).len(), 4);
        assert_eq!(layout(3, 2).len(), 10);
    }

    #[test]
    fn square_of_variable() {
        let x = Jet::variable(1, 2, 0, 3.0);
        let f = &x * &x;
        assert_eq!(f.value(), 9.0);
        assert_eq!(f.partial(&[0]), 6.0);
        assert_eq!(f.partial(&[0, 0]), 2.0);
    }

    #[test]
    fn mixed_partials_are_order_independent() {
        let x = Jet::variable(2, 3, 0, 0.4);
        let y = Jet::variable(2, 3, 1, -1.1);
        let f = &(&x * &x) * &y;
        // ∂x∂x∂y (x² y) = 2
        assert_eq!(f.partial(&[0, 0, 1]), 2.0);
        assert_eq!(f.partial(&[1, 0, 0]), 2.0);
        assert_eq!(f.partial(&[0, 1, 0]), 2.0);
    }

    #[test]
    fn exp_log_roundtrip() {
        let x = Jet::variable(1, 4, 0, 0.7);
        let back = x.exp().ln().unwrap();
        for k in 0..=4 {
            let expect = if k == 0 {
                0.7
            } else if k == 1 {
                1.0
            } else {
                0.0
            };
            assert!((back.coefficients()[k] - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn elementary_derivatives_at_a_point() {
        let a = 0.3;
        let x = Jet::variable(1, 4, 0, a);
        let s = x.sin();
        assert!((s.partial(&[0, 0, 0]) + a.cos()).abs() < 1e-15);
        let t = x.atan().unwrap();
        assert!((t.partial(&[0]) - 1.0 / (1.0 + a * a)).abs() < 1e-15);
        // d²/dx² atan = -2x / (1+x²)²
        let expect = -2.0 * a / (1.0 + a * a).powi(2);
        assert!((t.partial(&[0, 0]) - expect).abs() < 1e-14);
        let z = Jet::variable(1, 2, 0, 2.0);
        let ac = z.acosh().unwrap();
        assert!((ac.partial(&[0]) - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        let as_ = x.asinh().unwrap();
        assert!((as_.partial(&[0, 0]) + a / (1.0 + a * a).powf(1.5)).abs() < 1e-14);
    }

    #[test]
    fn domain_errors() {
        let x = Jet::variable(1, 2, 0, -1.0);
        assert!(matches!(x.sqrt(), Err(Error::Domain { op: "sqrt", .. })));
        assert!(x.ln().is_err());
        assert!(x.acosh().is_err());
        let z = Jet::variable(1, 1, 0, 0.0);
        assert!(z.recip().is_err());
        // sqrt of a constant zero is fine, of a varying zero is not.
        assert_eq!(Jet::constant(1, 2, 0.0).sqrt().unwrap().value(), 0.0);
        assert!(z.sqrt().is_err());
    }

    #[test]
    fn compose_matches_direct_evaluation() {
        // outer g(y) = y0 * y1 expanded at (2, 3); inner y = (x², x+1) at x = √2.
        let x = Jet::variable(1, 3, 0, 2f64.sqrt());
        let y0 = &x * &x;
        let y1 = x.add_const(1.0);
        let g0 = Jet::variable(2, 3, 0, y0.value());
        let g1 = Jet::variable(2, 3, 1, y1.value());
        let outer = &g0 * &g1;
        let composed = outer.compose(&[y0.clone(), y1.clone()]);
        let direct = &y0 * &y1;
        for (a, b) in composed.coefficients().iter().zip(direct.coefficients()) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn derivative_lowers_order() {
        let x = Jet::variable(2, 3, 0, 1.5);
        let y = Jet::variable(2, 3, 1, 0.5);
        let f = (&x * &y).exp();
        let fx = f.derivative(0);
        assert_eq!(fx.order(), 2);
        // ∂x e^{xy} = y e^{xy}; ∂y of that = (1 + xy) e^{xy}
        let e = (0.75f64).exp();
        assert!((fx.value() - 0.5 * e).abs() < 1e-14);
        assert!((fx.partial(&[1]) - 1.75 * e).abs() < 1e-13);
    }
}
