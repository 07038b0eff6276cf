//! Quaternion-valued functions and differential forms.

use super::algebra::{basis_product, Quaternion};
use crate::error::{Error, Result};
use crate::forms::{ChartMap, DifferentialForm, FormValue};
use crate::jets::{Evaluator, ScalarField};

/// `f₀ + i f₁ + j f₂ + k f₃` with real scalar-field components.
#[derive(Clone, Debug)]
pub struct QuaternionField {
    comps: [ScalarField; 4],
}

impl QuaternionField {
    pub fn new(comps: [ScalarField; 4]) -> Self {
        let dim = comps[0].dim();
        assert!(comps.iter().all(|c| c.dim() == dim));
        QuaternionField { comps }
    }

    pub fn constant(dim: usize, q: Quaternion) -> Self {
        Self::new(q.to_array().map(|c| ScalarField::constant(dim, c)))
    }

    /// `q = x₀ + i x₁ + j x₂ + k x₃` on `ℝ⁴`.
    pub fn coordinate() -> Self {
        let x = ScalarField::coordinates(4);
        Self::new([x[0].clone(), x[1].clone(), x[2].clone(), x[3].clone()])
    }

    pub fn dim(&self) -> usize {
        self.comps[0].dim()
    }

    pub fn components(&self) -> &[ScalarField; 4] {
        &self.comps
    }

    pub fn conj(&self) -> Self {
        let c = &self.comps;
        Self::new([c[0].clone(), -&c[1], -&c[2], -&c[3]])
    }

    pub fn mul(&self, other: &QuaternionField) -> QuaternionField {
        let dim = self.dim();
        let mut terms: [Vec<ScalarField>; 4] = Default::default();
        for (a, fa) in self.comps.iter().enumerate() {
            for (b, fb) in other.comps.iter().enumerate() {
                let (c, s) = basis_product(a, b);
                terms[c].push((fa * fb).scale(s));
            }
        }
        Self::new(terms.map(|t| ScalarField::sum(dim, t)))
    }

    /// Componentwise exterior derivative.
    pub fn d(&self) -> QuaternionForm {
        QuaternionForm::new(
            self.comps
                .clone()
                .map(|f| DifferentialForm::function(f).ext_d()),
        )
        .expect("components share a chart")
    }

    pub fn compose(&self, phi: &ChartMap) -> QuaternionField {
        Self::new(self.comps.clone().map(|f| phi.pull_function(&f)))
    }

    pub fn at(&self, p: &[f64]) -> Result<Quaternion> {
        let mut ev = Evaluator::new(p)?;
        let mut out = [0.0; 4];
        for (o, c) in out.iter_mut().zip(&self.comps) {
            *o = ev.value(c)?;
        }
        Ok(Quaternion::from_array(out))
    }
}

/// An ℍ-valued differential form `α₀ + iα₁ + jα₂ + kα₃`, stored as four
/// real forms of equal degree on one chart.
#[derive(Clone, Debug)]
pub struct QuaternionForm {
    comps: [DifferentialForm; 4],
}

/// ℍ-valued 1-forms such as `dq` or `iα₁ + jα₂ + kα₃`.
pub type QuaternionOneForm = QuaternionForm;

impl QuaternionForm {
    pub fn new(comps: [DifferentialForm; 4]) -> Result<Self> {
        let (dim, deg) = (comps[0].dim(), comps[0].degree());
        for c in &comps[1..] {
            if c.dim() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    found: c.dim(),
                });
            }
            if c.degree() != deg {
                return Err(Error::Degree(
                    "quaternion form components differ in degree".into(),
                ));
            }
        }
        Ok(QuaternionForm { comps })
    }

    /// `iα₁ + jα₂ + kα₃`.
    pub fn pure(alphas: [DifferentialForm; 3]) -> Result<Self> {
        let [a, b, c] = alphas;
        let zero = DifferentialForm::zero(a.dim(), a.degree());
        Self::new([zero, a, b, c])
    }

    /// `dq` on `ℝ⁴`.
    pub fn dq() -> Self {
        QuaternionField::coordinate().d()
    }

    pub fn dim(&self) -> usize {
        self.comps[0].dim()
    }

    pub fn degree(&self) -> usize {
        self.comps[0].degree()
    }

    pub fn components(&self) -> &[DifferentialForm; 4] {
        &self.comps
    }

    pub fn real(&self) -> &DifferentialForm {
        &self.comps[0]
    }

    /// The three imaginary components `(α₁, α₂, α₃)`.
    pub fn imaginary(&self) -> [DifferentialForm; 3] {
        [
            self.comps[1].clone(),
            self.comps[2].clone(),
            self.comps[3].clone(),
        ]
    }

    pub fn conj(&self) -> Self {
        let c = &self.comps;
        QuaternionForm {
            comps: [c[0].clone(), -&c[1], -&c[2], -&c[3]],
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        QuaternionForm {
            comps: self.comps.clone().map(|c| c.scale(s)),
        }
    }

    pub fn ext_d(&self) -> Self {
        QuaternionForm {
            comps: self.comps.clone().map(|c| c.ext_d()),
        }
    }

    pub fn pullback(&self, phi: &ChartMap) -> Result<Self> {
        let [a, b, c, d] = &self.comps;
        Self::new([
            a.pullback(phi)?,
            b.pullback(phi)?,
            c.pullback(phi)?,
            d.pullback(phi)?,
        ])
    }

    fn combine(
        &self,
        other_len: usize,
        product: impl Fn(usize, usize) -> Result<DifferentialForm>,
    ) -> Result<QuaternionForm> {
        let mut acc: [Option<DifferentialForm>; 4] = Default::default();
        for a in 0..4 {
            for b in 0..other_len {
                let (c, s) = basis_product(a, b);
                let term = product(a, b)?.scale(s);
                acc[c] = Some(match acc[c].take() {
                    None => term,
                    Some(prev) => &prev + &term,
                });
            }
        }
        Self::new(acc.map(|t| t.expect("every slot receives a term")))
    }

    /// `(α∧β) = Σ e_a e_b α_a∧β_b`, so that on vectors
    /// `(α∧β)(v, w) = α(v)β(w) − α(w)β(v)` for 1-forms.
    pub fn wedge(&self, other: &QuaternionForm) -> Result<QuaternionForm> {
        self.combine(4, |a, b| self.comps[a].wedge(&other.comps[b]))
    }

    /// `f · self` for a quaternion-valued function `f`.
    pub fn left_mul_field(&self, f: &QuaternionField) -> Result<QuaternionForm> {
        let lhs = QuaternionForm {
            comps: f.components().clone().map(DifferentialForm::function),
        };
        lhs.combine(4, |a, b| lhs.comps[a].wedge(&self.comps[b]))
    }

    /// `self · f` for a quaternion-valued function `f`.
    pub fn right_mul_field(&self, f: &QuaternionField) -> Result<QuaternionForm> {
        let rhs: Vec<DifferentialForm> = f
            .components()
            .iter()
            .cloned()
            .map(DifferentialForm::function)
            .collect();
        self.combine(4, |a, b| self.comps[a].wedge(&rhs[b]))
    }

    pub fn left_mul(&self, q: Quaternion) -> QuaternionForm {
        self.left_mul_field(&QuaternionField::constant(self.dim(), q))
            .expect("same chart")
    }

    pub fn right_mul(&self, q: Quaternion) -> QuaternionForm {
        self.right_mul_field(&QuaternionField::constant(self.dim(), q))
            .expect("same chart")
    }

    /// `u F ū` for a unit quaternion `u`.
    pub fn conjugation_action(&self, u: Quaternion) -> Result<QuaternionForm> {
        let u = u.check_unit()?;
        Ok(self.left_mul(u).right_mul(u.conj()))
    }

    pub fn add(&self, other: &QuaternionForm) -> Result<QuaternionForm> {
        let [a, b, c, d] = &self.comps;
        let [e, f, g, h] = &other.comps;
        Self::new([a + e, b + f, c + g, d + h])
    }

    pub fn sub(&self, other: &QuaternionForm) -> Result<QuaternionForm> {
        self.add(&other.scale(-1.0))
    }

    pub fn at(&self, p: &[f64]) -> Result<[FormValue; 4]> {
        let mut ev = Evaluator::new(p)?;
        let [a, b, c, d] = &self.comps;
        Ok([
            a.value(&mut ev)?,
            b.value(&mut ev)?,
            c.value(&mut ev)?,
            d.value(&mut ev)?,
        ])
    }

    /// Evaluation on tangent vectors, as a quaternion.
    pub fn eval(&self, p: &[f64], vectors: &[&[f64]]) -> Result<Quaternion> {
        let v = self.at(p)?;
        Ok(Quaternion::from_array(v.map(|c| c.eval(vectors))))
    }
}

/// `½(dq·q̄ − q·dq̄) − ν d(q i q̄)` on `ℝ⁴`.
pub fn nu_family_qform(nu: f64) -> QuaternionForm {
    let q = QuaternionField::coordinate();
    let qbar = q.conj();
    let dq = QuaternionForm::dq();
    let first = dq.right_mul_field(&qbar).expect("same chart");
    let second = dq.conj().left_mul_field(&q).expect("same chart");
    let qiq = q
        .mul(&QuaternionField::constant(4, Quaternion::I))
        .mul(&qbar);
    first
        .sub(&second)
        .and_then(|f| f.scale(0.5).sub(&qiq.d().scale(nu)))
        .expect("same chart")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nu_family_is_pure() {
        let f = nu_family_qform(0.7);
        let v = f.at(&[0.3, -1.1, 0.4, 2.0]).unwrap();
        assert!(v[0].max_abs() < 1e-14);
    }

    #[test]
    fn standard_triple_from_dq() {
        // −½ dq∧dq̄ = iA₁ + jA₂ + kA₃ with Aᵢ = dx₀∧dxᵢ + dxⱼ∧dx_k
        let dq = QuaternionForm::dq();
        let a = dq.wedge(&dq.conj()).unwrap().scale(-0.5);
        let v = a.at(&[0.0; 4]).unwrap();
        assert!(v[0].max_abs() < 1e-15);
        for (i, (j, k)) in [(1, (2, 3)), (2, (3, 1)), (3, (1, 2))] {
            assert_eq!(v[i].coefficient(&[0, i]), 1.0);
            assert_eq!(v[i].coefficient(&[j, k]), 1.0);
        }
    }

    #[test]
    fn wedge_convention_on_vectors() {
        let dq = QuaternionForm::dq();
        let w = dq.wedge(&dq.conj()).unwrap();
        let (e0, e1) = ([1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]);
        let direct = Quaternion::ONE * Quaternion::I.conj() - Quaternion::I * Quaternion::ONE;
        let got = w.eval(&[0.0; 4], &[&e0, &e1]).unwrap();
        assert_eq!(got, direct);
        assert_eq!(got.w, 0.0);
    }

    #[test]
    fn conjugation_by_i_flips_j_and_k() {
        let f = nu_family_qform(0.0);
        let g = f.conjugation_action(Quaternion::I).unwrap();
        let p = [0.5, 0.1, -0.3, 0.8];
        let (a, b) = (f.at(&p).unwrap(), g.at(&p).unwrap());
        assert!((&a[1] - &b[1]).max_abs() < 1e-14);
        assert!((&a[2] + &b[2]).max_abs() < 1e-14);
        assert!((&a[3] + &b[3]).max_abs() < 1e-14);
        assert!(f
            .conjugation_action(Quaternion::new(2.0, 0.0, 0.0, 0.0))
            .is_err());
    }
}
