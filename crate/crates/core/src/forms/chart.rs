//! Vector fields and smooth maps between coordinate charts.

use std::ops::{Add, Sub};

use crate::error::{Error, Result};
use crate::jets::{Evaluator, ScalarField};

/// A vector field `Σ Xⁱ ∂ᵢ` on an `n`-chart.
#[derive(Clone, Debug)]
pub struct VectorField {
    comps: Vec<ScalarField>,
}

impl VectorField {
    pub fn new(comps: Vec<ScalarField>) -> Self {
        assert!(!comps.is_empty());
        let dim = comps[0].dim();
        assert_eq!(
            comps.len(),
            dim,
            "vector field needs one component per coordinate"
        );
        assert!(comps.iter().all(|c| c.dim() == dim));
        VectorField { comps }
    }

    /// The coordinate field `∂ᵢ`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        Self::new(
            (0..dim)
                .map(|j| ScalarField::constant(dim, if i == j { 1.0 } else { 0.0 }))
                .collect(),
        )
    }

    /// `Σ xᵢ ∂ᵢ` scaled componentwise by `weights`.
    pub fn euler(weights: &[f64]) -> Self {
        let dim = weights.len();
        Self::new(
            ScalarField::coordinates(dim)
                .iter()
                .zip(weights)
                .map(|(x, w)| x.scale(*w))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &ScalarField {
        &self.comps[i]
    }

    /// Directional derivative `X(f)`.
    pub fn apply(&self, f: &ScalarField) -> ScalarField {
        assert_eq!(f.dim(), self.dim());
        ScalarField::sum(
            self.dim(),
            self.comps
                .iter()
                .enumerate()
                .map(|(i, x)| x * &f.partial(i)),
        )
    }

    /// Lie bracket `[X, Y]`.
    pub fn bracket(&self, other: &VectorField) -> VectorField {
        VectorField::new(
            (0..self.dim())
                .map(|i| self.apply(&other.comps[i]) - other.apply(&self.comps[i]))
                .collect(),
        )
    }

    pub fn scale_by(&self, f: &ScalarField) -> VectorField {
        VectorField::new(self.comps.iter().map(|c| c * f).collect())
    }

    pub fn at(&self, p: &[f64]) -> Result<Vec<f64>> {
        let mut ev = Evaluator::new(p)?;
        self.value(&mut ev)
    }

    pub fn value(&self, ev: &mut Evaluator) -> Result<Vec<f64>> {
        self.comps.iter().map(|c| ev.value(c)).collect()
    }
}

impl Add for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        VectorField::new(
            self.comps
                .iter()
                .zip(&rhs.comps)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &VectorField) -> VectorField {
        VectorField::new(
            self.comps
                .iter()
                .zip(&rhs.comps)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

/// A smooth map from an `m`-chart to an `n`-chart.
#[derive(Clone, Debug)]
pub struct ChartMap {
    source_dim: usize,
    comps: Vec<ScalarField>,
}

impl ChartMap {
    pub fn new(source_dim: usize, comps: Vec<ScalarField>) -> Self {
        assert!(comps.iter().all(|c| c.dim() == source_dim));
        assert!(!comps.is_empty());
        ChartMap { source_dim, comps }
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(dim, ScalarField::coordinates(dim))
    }

    /// Inclusion of the hyperplane `{x_axis = value}` of `ℝⁿ`, parametrised
    /// by the remaining coordinates in order.
    pub fn hyperplane(n: usize, axis: usize, value: f64) -> Self {
        let m = n - 1;
        let ys = ScalarField::coordinates(m);
        let comps = (0..n)
            .map(|i| match i.cmp(&axis) {
                std::cmp::Ordering::Less => ys[i].clone(),
                std::cmp::Ordering::Equal => ScalarField::constant(m, value),
                std::cmp::Ordering::Greater => ys[i - 1].clone(),
            })
            .collect();
        Self::new(m, comps)
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.comps
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &ChartMap) -> ChartMap {
        assert_eq!(inner.target_dim(), self.source_dim);
        ChartMap::new(
            inner.source_dim,
            self.comps.iter().map(|c| c.compose(&inner.comps)).collect(),
        )
    }

    /// `f ∘ self` for a function on the target chart.
    pub fn pull_function(&self, f: &ScalarField) -> ScalarField {
        assert_eq!(f.dim(), self.target_dim());
        f.compose(&self.comps)
    }

    pub fn apply(&self, p: &[f64]) -> Result<Vec<f64>> {
        let mut ev = Evaluator::new(p)?;
        self.comps.iter().map(|c| ev.value(c)).collect()
    }

    /// Jacobian `∂φⁱ/∂xʲ` at `p`, rows indexed by target coordinates.
    pub fn jacobian(&self, p: &[f64]) -> Result<Vec<Vec<f64>>> {
        if p.len() != self.source_dim {
            return Err(Error::Dimension {
                expected: self.source_dim,
                found: p.len(),
            });
        }
        let mut ev = Evaluator::new(p)?;
        self.comps
            .iter()
            .map(|c| Ok(ev.eval(c, 1)?.gradient()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_of_rotation_fields() {
        // [−y∂x + x∂y, ∂x] = −∂y
        let c = ScalarField::coordinates(2);
        let x = VectorField::new(vec![-&c[1], c[0].clone()]);
        let b = x.bracket(&VectorField::coordinate(2, 0));
        assert_eq!(b.at(&[0.3, 0.7]).unwrap(), vec![0.0, -1.0]);
    }

    #[test]
    fn hyperplane_inclusion() {
        let phi = ChartMap::hyperplane(4, 0, 1.0);
        assert_eq!(
            phi.apply(&[2.0, 3.0, 4.0]).unwrap(),
            vec![1.0, 2.0, 3.0, 4.0]
        );
        let j = phi.jacobian(&[0.0; 3]).unwrap();
        assert_eq!(j[0], vec![0.0; 3]);
        assert_eq!(j[2], vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn composition_of_maps() {
        let c = ScalarField::coordinates(2);
        let sq = ChartMap::new(2, vec![&c[0] * &c[0], &c[0] * &c[1]]);
        let comp = sq.compose(&sq);
        // (x², xy) ↦ (x⁴, x³y)
        assert_eq!(comp.apply(&[2.0, 3.0]).unwrap(), vec![16.0, 24.0]);
    }
}
