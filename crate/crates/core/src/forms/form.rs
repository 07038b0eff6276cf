//! Differential forms with scalar-field coefficients.

use std::ops::{Add, Neg, Sub};

use super::chart::{ChartMap, VectorField};
use super::index::{combinations, permutations, position, sort_with_sign};
use super::value::FormValue;
use crate::error::{Error, Result};
use crate::jets::{Evaluator, Jet, ScalarField, MAX_DIM};

/// A degree-`k` form `Σ_I a_I dx_I` on an `n`-chart, `I` increasing.
#[derive(Clone, Debug)]
pub struct DifferentialForm {
    dim: usize,
    degree: usize,
    coeffs: Vec<ScalarField>,
}

impl DifferentialForm {
    pub fn new(dim: usize, degree: usize, coeffs: Vec<ScalarField>) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&dim) || degree > dim {
            return Err(Error::Degree(format!("degree {degree} on a {dim}-chart")));
        }
        let n = combinations(dim, degree).len();
        if coeffs.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: coeffs.len(),
            });
        }
        if let Some(c) = coeffs.iter().find(|c| c.dim() != dim) {
            return Err(Error::Dimension {
                expected: dim,
                found: c.dim(),
            });
        }
        Ok(DifferentialForm {
            dim,
            degree,
            coeffs,
        })
    }

    pub fn zero(dim: usize, degree: usize) -> Self {
        let n = combinations(dim, degree).len();
        DifferentialForm {
            dim,
            degree,
            coeffs: vec![ScalarField::zero(dim); n],
        }
    }

    pub fn function(f: ScalarField) -> Self {
        DifferentialForm {
            dim: f.dim(),
            degree: 0,
            coeffs: vec![f],
        }
    }

    /// `Σ cᵢ dxᵢ`.
    pub fn one_form(comps: Vec<ScalarField>) -> Self {
        let dim = comps.len();
        Self::new(dim, 1, comps).expect("one component per coordinate")
    }

    /// The coordinate differential `dxᵢ`.
    pub fn dx(dim: usize, i: usize) -> Self {
        Self::monomial(dim, &[i], ScalarField::one(dim))
    }

    /// `f dx_{i₁}∧…∧dx_{i_k}` for indices in any order.
    pub fn monomial(dim: usize, idx: &[usize], f: ScalarField) -> Self {
        let mut out = Self::zero(dim, idx.len());
        if let Some((sorted, sign)) = sort_with_sign(idx) {
            out.coeffs[position(dim, &sorted).unwrap()] = f.scale(sign);
        }
        out
    }

    /// `dx₀∧…∧dx_{n-1}`.
    pub fn volume(dim: usize) -> Self {
        let idx: Vec<usize> = (0..dim).collect();
        Self::monomial(dim, &idx, ScalarField::one(dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> &[ScalarField] {
        &self.coeffs
    }

    /// Coefficient on `dx_I` for any ordering of `I`.
    pub fn coefficient(&self, idx: &[usize]) -> ScalarField {
        assert_eq!(idx.len(), self.degree);
        match sort_with_sign(idx) {
            None => ScalarField::zero(self.dim),
            Some((sorted, sign)) => self.coeffs[position(self.dim, &sorted).unwrap()].scale(sign),
        }
    }

    /// Multiplication by a function.
    pub fn mul_fn(&self, f: &ScalarField) -> Self {
        DifferentialForm {
            coeffs: self.coeffs.iter().map(|c| c * f).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        DifferentialForm {
            coeffs: self.coeffs.iter().map(|c| c.scale(s)).collect(),
            ..self.clone()
        }
    }

    fn check_same(&self, other: &DifferentialForm) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.degree != other.degree {
            return Err(Error::Degree(format!(
                "cannot add forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn wedge(&self, other: &DifferentialForm) -> Result<DifferentialForm> {
        if self.dim != other.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: other.dim,
            });
        }
        let degree = self.degree + other.degree;
        if degree > self.dim {
            return Err(Error::Degree(format!(
                "wedge of degrees {} and {} on a {}-chart",
                self.degree, other.degree, self.dim
            )));
        }
        let n = combinations(self.dim, degree).len();
        let mut terms: Vec<Vec<ScalarField>> = vec![Vec::new(); n];
        let left = combinations(self.dim, self.degree);
        let right = combinations(self.dim, other.degree);
        for (a, fa) in left.iter().zip(&self.coeffs) {
            if fa.is_zero() {
                continue;
            }
            for (b, fb) in right.iter().zip(&other.coeffs) {
                if fb.is_zero() {
                    continue;
                }
                let joined: Vec<usize> = a.iter().chain(b).copied().collect();
                if let Some((sorted, sign)) = sort_with_sign(&joined) {
                    let k = position(self.dim, &sorted).unwrap();
                    terms[k].push((fa * fb).scale(sign));
                }
            }
        }
        let coeffs = terms
            .into_iter()
            .map(|t| ScalarField::sum(self.dim, t))
            .collect();
        Ok(DifferentialForm {
            dim: self.dim,
            degree,
            coeffs,
        })
    }

    /// Exterior derivative; the derivative of a top form is the zero form
    /// of the same degree.
    pub fn ext_d(&self) -> DifferentialForm {
        if self.degree == self.dim {
            return DifferentialForm::zero(self.dim, self.degree);
        }
        let degree = self.degree + 1;
        let n = combinations(self.dim, degree).len();
        let mut terms: Vec<Vec<ScalarField>> = vec![Vec::new(); n];
        for (idx, f) in combinations(self.dim, self.degree).iter().zip(&self.coeffs) {
            if f.is_zero() {
                continue;
            }
            for j in 0..self.dim {
                let mut joined = vec![j];
                joined.extend_from_slice(idx);
                if let Some((sorted, sign)) = sort_with_sign(&joined) {
                    let k = position(self.dim, &sorted).unwrap();
                    terms[k].push(f.partial(j).scale(sign));
                }
            }
        }
        DifferentialForm {
            dim: self.dim,
            degree,
            coeffs: terms
                .into_iter()
                .map(|t| ScalarField::sum(self.dim, t))
                .collect(),
        }
    }

    /// Contraction `X⌟self`; zero on functions.
    pub fn interior(&self, x: &VectorField) -> DifferentialForm {
        assert_eq!(x.dim(), self.dim, "interior: dimension mismatch");
        if self.degree == 0 {
            return DifferentialForm::zero(self.dim, 0);
        }
        let degree = self.degree - 1;
        let n = combinations(self.dim, degree).len();
        let mut terms: Vec<Vec<ScalarField>> = vec![Vec::new(); n];
        for (idx, f) in combinations(self.dim, self.degree).iter().zip(&self.coeffs) {
            if f.is_zero() {
                continue;
            }
            for r in 0..idx.len() {
                let mut rest = idx.clone();
                let i = rest.remove(r);
                let k = position(self.dim, &rest).unwrap();
                let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
                terms[k].push((x.component(i) * f).scale(sign));
            }
        }
        DifferentialForm {
            dim: self.dim,
            degree,
            coeffs: terms
                .into_iter()
                .map(|t| ScalarField::sum(self.dim, t))
                .collect(),
        }
    }

    /// `L_X = X⌟d + d X⌟`.
    pub fn lie_derivative(&self, x: &VectorField) -> DifferentialForm {
        if self.degree == self.dim {
            return self.interior(x).ext_d();
        }
        let a = self.ext_d().interior(x);
        if self.degree == 0 {
            return a;
        }
        &a + &self.interior(x).ext_d()
    }

    /// Pullback along `φ`, whose target is this form's chart.
    pub fn pullback(&self, phi: &ChartMap) -> Result<DifferentialForm> {
        if phi.target_dim() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: phi.target_dim(),
            });
        }
        let m = phi.source_dim();
        if self.degree > m {
            return Err(Error::Degree(format!(
                "pullback of a {}-form to a {m}-chart",
                self.degree
            )));
        }
        let jac: Vec<Vec<ScalarField>> = phi
            .components()
            .iter()
            .map(|c| (0..m).map(|j| c.partial(j)).collect())
            .collect();
        let pulled: Vec<ScalarField> = self.coeffs.iter().map(|c| phi.pull_function(c)).collect();
        let perms = permutations(self.degree);
        let coeffs = combinations(m, self.degree)
            .iter()
            .map(|cols| {
                let terms = combinations(self.dim, self.degree)
                    .iter()
                    .zip(&pulled)
                    .filter(|(_, f)| !f.is_zero())
                    .map(|(rows, f)| f * &minor(&jac, rows, cols, &perms))
                    .collect::<Vec<_>>();
                ScalarField::sum(m, terms)
            })
            .collect();
        DifferentialForm::new(m, self.degree, coeffs)
    }

    /// Coefficient values at the evaluator's point.
    pub fn value(&self, ev: &mut Evaluator) -> Result<FormValue> {
        let c = self
            .coeffs
            .iter()
            .map(|f| ev.value(f))
            .collect::<Result<Vec<_>>>()?;
        FormValue::new(self.dim, self.degree, c)
    }

    pub fn at(&self, p: &[f64]) -> Result<FormValue> {
        self.value(&mut Evaluator::new(p)?)
    }

    /// Coefficient jets at `p`.
    pub fn jets(&self, p: &[f64], order: usize) -> Result<Vec<Jet>> {
        self.coeffs.iter().map(|f| f.jet(p, order)).collect()
    }
}

fn minor(
    jac: &[Vec<ScalarField>],
    rows: &[usize],
    cols: &[usize],
    perms: &[(Vec<usize>, f64)],
) -> ScalarField {
    let dim = jac[0][0].dim();
    let terms = perms.iter().filter_map(|(p, sign)| {
        let mut prod = ScalarField::constant(dim, *sign);
        for (r, &c) in rows.iter().zip(p) {
            let e = &jac[*r][cols[c]];
            if e.is_zero() {
                return None;
            }
            prod = &prod * e;
        }
        Some(prod)
    });
    ScalarField::sum(dim, terms.collect::<Vec<_>>())
}

impl Add for &DifferentialForm {
    type Output = DifferentialForm;
    fn add(self, rhs: &DifferentialForm) -> DifferentialForm {
        self.check_same(rhs).expect("form addition");
        DifferentialForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
            ..self.clone()
        }
    }
}

impl Sub for &DifferentialForm {
    type Output = DifferentialForm;
    fn sub(self, rhs: &DifferentialForm) -> DifferentialForm {
        self.check_same(rhs).expect("form subtraction");
        DifferentialForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
            ..self.clone()
        }
    }
}

impl Neg for &DifferentialForm {
    type Output = DifferentialForm;
    fn neg(self) -> DifferentialForm {
        self.scale(-1.0)
    }
}

impl Add for DifferentialForm {
    type Output = DifferentialForm;
    fn add(self, rhs: DifferentialForm) -> DifferentialForm {
        &self + &rhs
    }
}

impl Sub for DifferentialForm {
    type Output = DifferentialForm;
    fn sub(self, rhs: DifferentialForm) -> DifferentialForm {
        &self - &rhs
    }
}

/// Sum of forms of equal shape.
pub fn sum_forms(forms: &[DifferentialForm]) -> DifferentialForm {
    let first = &forms[0];
    let coeffs = (0..first.coeffs.len())
        .map(|k| ScalarField::sum(first.dim, forms.iter().map(|f| f.coeffs[k].clone())))
        .collect();
    DifferentialForm {
        coeffs,
        ..first.clone()
    }
}
