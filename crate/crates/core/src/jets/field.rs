//! Scalar fields on coordinate charts, built as expression trees and
//! evaluated to jets.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use super::jet::{Jet, INTERNAL_MAX_ORDER, MAX_DIM, MAX_ORDER};
use super::quadrature;
use crate::error::{Error, Result};

/// Relative tolerance for the value of quadrature nodes.
const QUADRATURE_TOL: f64 = 1e-15;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Unary {
    Exp,
    Ln,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Sqrt,
    Atan,
    Arccot,
    Acosh,
    Asinh,
}

enum Node {
    Const(f64),
    Var(usize),
    Sum(Vec<ScalarField>),
    Sub(ScalarField, ScalarField),
    Mul(ScalarField, ScalarField),
    Div(ScalarField, ScalarField),
    Neg(ScalarField),
    Unary(Unary, ScalarField),
    Powi(ScalarField, i32),
    Powf(ScalarField, f64),
    Partial(ScalarField, usize),
    /// `outer(inner_0, …, inner_{m-1})`; `outer` has `m` variables.
    Compose(ScalarField, Vec<ScalarField>),
    /// `∫_{lower}^{upper} integrand(ξ) dξ` with a univariate integrand.
    Integral {
        integrand: ScalarField,
        lower: ScalarField,
        upper: ScalarField,
    },
}

/// A smooth real function on an `n`-dimensional chart, `1 ≤ n ≤ 4`.
///
/// Fields are immutable and cheap to clone; shared subexpressions are
/// evaluated once per [`Evaluator`].
#[derive(Clone)]
pub struct ScalarField {
    dim: usize,
    node: Arc<Node>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.node {
            Node::Const(c) => write!(f, "{c}"),
            Node::Var(i) => write!(f, "x{i}"),
            _ => write!(f, "ScalarField(dim={})", self.dim),
        }
    }
}

impl ScalarField {
    fn new(dim: usize, node: Node) -> Self {
        ScalarField {
            dim,
            node: Arc::new(node),
        }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        assert!((1..=MAX_DIM).contains(&dim));
        Self::new(dim, Node::Const(c))
    }

    pub fn zero(dim: usize) -> Self {
        Self::constant(dim, 0.0)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, 1.0)
    }

    /// The coordinate function `x_i`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim) && i < dim);
        Self::new(dim, Node::Var(i))
    }

    /// All coordinate functions of an `n`-chart.
    pub fn coordinates(dim: usize) -> Vec<Self> {
        (0..dim).map(|i| Self::coordinate(dim, i)).collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_constant(&self) -> Option<f64> {
        match *self.node {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_constant() == Some(0.0)
    }

    fn check_dim(&self, other: &ScalarField) {
        assert_eq!(
            self.dim, other.dim,
            "scalar fields live on charts of different dimension"
        );
    }

    pub fn sum(dim: usize, terms: impl IntoIterator<Item = ScalarField>) -> Self {
        let mut constant = 0.0;
        let mut rest = Vec::new();
        for t in terms {
            assert_eq!(t.dim, dim);
            match t.as_constant() {
                Some(c) => constant += c,
                None => rest.push(t),
            }
        }
        if constant != 0.0 {
            rest.push(Self::constant(dim, constant));
        }
        match rest.len() {
            0 => Self::zero(dim),
            1 => rest.pop().unwrap(),
            _ => Self::new(dim, Node::Sum(rest)),
        }
    }

    fn unary(&self, op: Unary, fold: impl Fn(f64) -> f64) -> Self {
        match self.as_constant() {
            Some(c) if fold(c).is_finite() => Self::constant(self.dim, fold(c)),
            _ => Self::new(self.dim, Node::Unary(op, self.clone())),
        }
    }

    pub fn exp(&self) -> Self {
        self.unary(Unary::Exp, f64::exp)
    }
    pub fn ln(&self) -> Self {
        self.unary(Unary::Ln, f64::ln)
    }
    pub fn sin(&self) -> Self {
        self.unary(Unary::Sin, f64::sin)
    }
    pub fn cos(&self) -> Self {
        self.unary(Unary::Cos, f64::cos)
    }
    pub fn sinh(&self) -> Self {
        self.unary(Unary::Sinh, f64::sinh)
    }
    pub fn cosh(&self) -> Self {
        self.unary(Unary::Cosh, f64::cosh)
    }
    pub fn sqrt(&self) -> Self {
        self.unary(Unary::Sqrt, f64::sqrt)
    }
    pub fn atan(&self) -> Self {
        self.unary(Unary::Atan, f64::atan)
    }
    /// Inverse cotangent with values in `(0, π)`.
    pub fn arccot(&self) -> Self {
        self.unary(Unary::Arccot, |x| std::f64::consts::FRAC_PI_2 - x.atan())
    }
    pub fn acosh(&self) -> Self {
        self.unary(Unary::Acosh, f64::acosh)
    }
    pub fn asinh(&self) -> Self {
        self.unary(Unary::Asinh, f64::asinh)
    }

    pub fn powi(&self, n: i32) -> Self {
        match (n, self.as_constant()) {
            (0, _) => Self::one(self.dim),
            (1, _) => self.clone(),
            (_, Some(c)) if c != 0.0 || n > 0 => Self::constant(self.dim, c.powi(n)),
            _ => Self::new(self.dim, Node::Powi(self.clone(), n)),
        }
    }

    pub fn powf(&self, p: f64) -> Self {
        match self.as_constant() {
            Some(c) if c > 0.0 => Self::constant(self.dim, c.powf(p)),
            _ => Self::new(self.dim, Node::Powf(self.clone(), p)),
        }
    }

    pub fn recip(&self) -> Self {
        self.powi(-1)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::constant(self.dim, s) * self
    }

    /// `∂f/∂x_i` as a new field.
    pub fn partial(&self, i: usize) -> Self {
        assert!(i < self.dim);
        let dim = self.dim;
        match &*self.node {
            Node::Const(_) => Self::zero(dim),
            Node::Var(j) => Self::constant(dim, if *j == i { 1.0 } else { 0.0 }),
            Node::Sum(ts) => Self::sum(dim, ts.iter().map(|t| t.partial(i))),
            Node::Sub(a, b) => a.partial(i) - b.partial(i),
            Node::Neg(a) => -a.partial(i),
            Node::Mul(a, b) => {
                if let Some(c) = a.as_constant() {
                    b.partial(i).scale(c)
                } else if let Some(c) = b.as_constant() {
                    a.partial(i).scale(c)
                } else {
                    &a.partial(i) * b + a * &b.partial(i)
                }
            }
            Node::Div(a, b) if b.as_constant().is_some() => a.partial(i) / b,
            _ => Self::new(dim, Node::Partial(self.clone(), i)),
        }
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.dim).map(|i| self.partial(i)).collect()
    }

    /// `self ∘ inner`: substitutes `inner[i]` for the `i`th coordinate.
    pub fn compose(&self, inner: &[ScalarField]) -> Self {
        assert_eq!(inner.len(), self.dim, "compose: arity mismatch");
        let dim = inner[0].dim;
        assert!(inner.iter().all(|f| f.dim == dim));
        match &*self.node {
            Node::Const(c) => Self::constant(dim, *c),
            Node::Var(j) => inner[*j].clone(),
            _ => Self::new(dim, Node::Compose(self.clone(), inner.to_vec())),
        }
    }

    /// `∫_{lower}^{upper} integrand(ξ) dξ` where `integrand` is a field of
    /// one variable. Values come from adaptive quadrature, derivatives from
    /// the integrand itself at the endpoints.
    pub fn integral(integrand: &ScalarField, lower: &ScalarField, upper: &ScalarField) -> Self {
        assert_eq!(integrand.dim, 1, "integrand must be univariate");
        lower.check_dim(upper);
        Self::new(
            lower.dim,
            Node::Integral {
                integrand: integrand.clone(),
                lower: lower.clone(),
                upper: upper.clone(),
            },
        )
    }

    /// Jet of order `order ≤ 4` at `p`.
    pub fn jet(&self, p: &[f64], order: usize) -> Result<Jet> {
        if order > MAX_ORDER {
            return Err(Error::Order {
                requested: order,
                max: MAX_ORDER,
            });
        }
        Evaluator::new(p)?.eval(self, order)
    }

    pub fn value(&self, p: &[f64]) -> Result<f64> {
        Ok(Evaluator::new(p)?.eval(self, 0)?.value())
    }
}

/// Validated chart point.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&coords.len()) {
            return Err(Error::Dimension {
                expected: MAX_DIM,
                found: coords.len(),
            });
        }
        if let Some(&bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::NonFinite(bad));
        }
        Ok(Point { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.coords
    }
}

/// Evaluates the analytic partials of `f` at `p` up to `order`.
pub fn eval_jet(f: &ScalarField, p: &Point, order: usize) -> Result<Jet> {
    if p.dim() != f.dim() {
        return Err(Error::Dimension {
            expected: f.dim(),
            found: p.dim(),
        });
    }
    f.jet(p.coords(), order)
}

/// Evaluates many fields at one point, sharing common subexpressions.
pub struct Evaluator {
    point: Vec<f64>,
    // Holding the node keeps its address from being reused while cached.
    cache: HashMap<(usize, usize), (Arc<Node>, Jet)>,
}

impl Evaluator {
    pub fn new(point: &[f64]) -> Result<Self> {
        if let Some(&bad) = point.iter().find(|c| !c.is_finite()) {
            return Err(Error::NonFinite(bad));
        }
        Ok(Evaluator {
            point: point.to_vec(),
            cache: HashMap::new(),
        })
    }

    pub fn point(&self) -> &[f64] {
        &self.point
    }

    pub fn value(&mut self, f: &ScalarField) -> Result<f64> {
        Ok(self.eval(f, 0)?.value())
    }

    pub fn eval(&mut self, f: &ScalarField, order: usize) -> Result<Jet> {
        if f.dim != self.point.len() {
            return Err(Error::Dimension {
                expected: f.dim,
                found: self.point.len(),
            });
        }
        if order > INTERNAL_MAX_ORDER {
            return Err(Error::Order {
                requested: order,
                max: INTERNAL_MAX_ORDER,
            });
        }
        let key = (Arc::as_ptr(&f.node) as usize, order);
        if let Some((_, j)) = self.cache.get(&key) {
            return Ok(j.clone());
        }
        let jet = self.compute(f, order)?;
        self.cache.insert(key, (f.node.clone(), jet.clone()));
        Ok(jet)
    }

    fn compute(&mut self, f: &ScalarField, order: usize) -> Result<Jet> {
        let dim = f.dim;
        Ok(match &*f.node {
            Node::Const(c) => Jet::constant(dim, order, *c),
            Node::Var(i) => Jet::variable(dim, order, *i, self.point[*i]),
            Node::Sum(ts) => {
                let mut acc = self.eval(&ts[0], order)?;
                for t in &ts[1..] {
                    acc = &acc + &self.eval(t, order)?;
                }
                acc
            }
            Node::Sub(a, b) => &self.eval(a, order)? - &self.eval(b, order)?,
            Node::Mul(a, b) => &self.eval(a, order)? * &self.eval(b, order)?,
            Node::Div(a, b) => {
                let den = self.eval(b, order)?;
                if den.value() == 0.0 {
                    return Err(Error::Domain {
                        op: "div",
                        value: 0.0,
                    });
                }
                self.eval(a, order)?.div(&den)?
            }
            Node::Neg(a) => -&self.eval(a, order)?,
            Node::Unary(op, a) => {
                let x = self.eval(a, order)?;
                match op {
                    Unary::Exp => x.exp(),
                    Unary::Ln => x.ln()?,
                    Unary::Sin => x.sin(),
                    Unary::Cos => x.cos(),
                    Unary::Sinh => x.sinh(),
                    Unary::Cosh => x.cosh(),
                    Unary::Sqrt => x.sqrt()?,
                    Unary::Atan => x.atan()?,
                    Unary::Arccot => x.arccot()?,
                    Unary::Acosh => x.acosh()?,
                    Unary::Asinh => x.asinh()?,
                }
            }
            Node::Powi(a, n) => self.eval(a, order)?.powi(*n)?,
            Node::Powf(a, p) => self.eval(a, order)?.powf(*p)?,
            Node::Partial(a, i) => self.eval(a, order + 1)?.derivative(*i),
            Node::Compose(outer, inner) => {
                let inner_jets = inner
                    .iter()
                    .map(|g| self.eval(g, order))
                    .collect::<Result<Vec<_>>>()?;
                let at: Vec<f64> = inner_jets.iter().map(Jet::value).collect();
                let outer_jet = Evaluator::new(&at)?.eval(outer, order)?;
                outer_jet.compose(&inner_jets)
            }
            Node::Integral {
                integrand,
                lower,
                upper,
            } => {
                let lo = self.eval(lower, order)?;
                let hi = self.eval(upper, order)?;
                let value = quadrature::integrate(
                    |x| integrand.value(&[x]),
                    lo.value(),
                    hi.value(),
                    QUADRATURE_TOL,
                )?;
                let upper_part = antiderivative_series(integrand, &hi, value)?;
                let lower_part = antiderivative_series(integrand, &lo, 0.0)?;
                &upper_part - &lower_part
            }
        })
    }
}

/// `F(x)` where `F(x₀) = value` and `F' = integrand`, composed with the jet
/// `x` expanded at `x₀`.
fn antiderivative_series(integrand: &ScalarField, x: &Jet, value: f64) -> Result<Jet> {
    let order = x.order();
    let mut series = vec![0.0; order + 1];
    series[0] = value;
    if order >= 1 && !x.is_constant() {
        let d = integrand.jet_internal(x.value(), order - 1)?;
        for k in 1..=order {
            series[k] = d.coefficients()[k - 1] / k as f64;
        }
    }
    Ok(x.map_series(&series))
}

impl ScalarField {
    fn jet_internal(&self, x: f64, order: usize) -> Result<Jet> {
        Evaluator::new(&[x])?.eval(self, order)
    }
}

impl Add for &ScalarField {
    type Output = ScalarField;
    fn add(self, rhs: &ScalarField) -> ScalarField {
        self.check_dim(rhs);
        ScalarField::sum(self.dim, [self.clone(), rhs.clone()])
    }
}

impl Sub for &ScalarField {
    type Output = ScalarField;
    fn sub(self, rhs: &ScalarField) -> ScalarField {
        self.check_dim(rhs);
        match (self.as_constant(), rhs.as_constant()) {
            (Some(a), Some(b)) => ScalarField::constant(self.dim, a - b),
            (_, Some(b)) if b == 0.0 => self.clone(),
            (Some(a), _) if a == 0.0 => -rhs,
            _ => ScalarField::new(self.dim, Node::Sub(self.clone(), rhs.clone())),
        }
    }
}

impl Mul for &ScalarField {
    type Output = ScalarField;
    fn mul(self, rhs: &ScalarField) -> ScalarField {
        self.check_dim(rhs);
        match (self.as_constant(), rhs.as_constant()) {
            (Some(a), Some(b)) => ScalarField::constant(self.dim, a * b),
            (Some(a), _) if a == 0.0 => ScalarField::zero(self.dim),
            (_, Some(b)) if b == 0.0 => ScalarField::zero(self.dim),
            (Some(a), _) if a == 1.0 => rhs.clone(),
            (_, Some(b)) if b == 1.0 => self.clone(),
            (Some(a), _) if a == -1.0 => -rhs,
            (_, Some(b)) if b == -1.0 => -self,
            _ => ScalarField::new(self.dim, Node::Mul(self.clone(), rhs.clone())),
        }
    }
}

impl Div for &ScalarField {
    type Output = ScalarField;
    fn div(self, rhs: &ScalarField) -> ScalarField {
        self.check_dim(rhs);
        match (self.as_constant(), rhs.as_constant()) {
            (Some(a), Some(b)) if b != 0.0 => ScalarField::constant(self.dim, a / b),
            (Some(a), _) if a == 0.0 => ScalarField::zero(self.dim),
            (_, Some(b)) if b == 1.0 => self.clone(),
            _ => ScalarField::new(self.dim, Node::Div(self.clone(), rhs.clone())),
        }
    }
}

impl Neg for &ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        match &*self.node {
            Node::Const(c) => ScalarField::constant(self.dim, -c),
            Node::Neg(a) => a.clone(),
            _ => ScalarField::new(self.dim, Node::Neg(self.clone())),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for ScalarField {
            type Output = ScalarField;
            fn $m(self, rhs: ScalarField) -> ScalarField { (&self).$m(&rhs) }
        }
        impl $tr<&ScalarField> for ScalarField {
            type Output = ScalarField;
            fn $m(self, rhs: &ScalarField) -> ScalarField { (&self).$m(rhs) }
        }
        impl $tr<ScalarField> for &ScalarField {
            type Output = ScalarField;
            fn $m(self, rhs: ScalarField) -> ScalarField { self.$m(&rhs) }
        }
        impl $tr<f64> for &ScalarField {
            type Output = ScalarField;
            fn $m(self, rhs: f64) -> ScalarField { self.$m(&ScalarField::constant(self.dim, rhs)) }
        }
        impl $tr<f64> for ScalarField {
            type Output = ScalarField;
            fn $m(self, rhs: f64) -> ScalarField { (&self).$m(&ScalarField::constant(self.dim, rhs)) }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        -&self
    }
}
