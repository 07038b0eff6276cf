//! Contact spheres: triples of contact forms on a 3-chart, tautness, the
//! structure data `(β, Λ)`, normalisation, metrics and Reeb fields.

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::forms::{DifferentialForm, FormValue, VectorField};
use crate::jets::{Evaluator, ScalarField};
pub use crate::metric::MetricField;

/// Relative size of `α₁∧α₂∧α₃` below which the coframe is degenerate.
pub const VOLUME_EPS: f64 = 1e-12;
/// Largest coframe condition number accepted by the structure fit.
pub const MAX_CONDITION: f64 = 1e10;

/// Cyclic index triples `(i, j, k)`.
pub const CYCLIC: [(usize, usize, usize); 3] = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];

/// Three 1-forms `(α₁, α₂, α₃)` on a 3-chart, with `α₁∧α₂∧α₃` declared
/// positive.
#[derive(Clone, Debug)]
pub struct ContactSphere {
    alphas: [DifferentialForm; 3],
    dalphas: [DifferentialForm; 3],
}

/// The forms `αᵢ`, `dαᵢ` and the volume coefficient at one point.
#[derive(Clone, Debug)]
pub struct SphereValues {
    pub point: Vec<f64>,
    pub alpha: [FormValue; 3],
    pub dalpha: [FormValue; 3],
    /// Coefficient of `α₁∧α₂∧α₃` against `dx₀∧dx₁∧dx₂`.
    pub volume: f64,
}

impl SphereValues {
    /// Coefficient of `αᵢ∧dαⱼ` against `α₁∧α₂∧α₃`.
    pub fn ratio(&self, i: usize, j: usize) -> f64 {
        self.alpha[i].wedge(&self.dalpha[j]).unwrap().top() / self.volume
    }

    /// `(λ·α)∧(λ·dα) / (α₁∧α₂∧α₃)`.
    pub fn contact_ratio(&self, lambda: &[f64; 3]) -> f64 {
        let a = comb(&self.alpha, lambda);
        let da = comb(&self.dalpha, lambda);
        a.wedge(&da).unwrap().top() / self.volume
    }

    /// Coframe matrix, rows `αᵢ`.
    pub fn coframe(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| self.alpha[i].coefficients()[j])
    }
}

fn comb(forms: &[FormValue; 3], lambda: &[f64; 3]) -> FormValue {
    let mut acc = forms[0].scale(lambda[0]);
    for k in 1..3 {
        acc = &acc + &forms[k].scale(lambda[k]);
    }
    acc
}

impl ContactSphere {
    pub fn new(alphas: [DifferentialForm; 3]) -> Result<Self> {
        for a in &alphas {
            if a.dim() != 3 {
                return Err(Error::Dimension {
                    expected: 3,
                    found: a.dim(),
                });
            }
            if a.degree() != 1 {
                return Err(Error::Degree(format!(
                    "contact sphere needs 1-forms, found degree {}",
                    a.degree()
                )));
            }
        }
        let dalphas = [alphas[0].ext_d(), alphas[1].ext_d(), alphas[2].ext_d()];
        Ok(ContactSphere { alphas, dalphas })
    }

    pub fn alphas(&self) -> &[DifferentialForm; 3] {
        &self.alphas
    }

    pub fn alpha(&self, i: usize) -> &DifferentialForm {
        &self.alphas[i]
    }

    pub fn d_alpha(&self, i: usize) -> &DifferentialForm {
        &self.dalphas[i]
    }

    /// `α₁∧α₂∧α₃`.
    pub fn volume(&self) -> DifferentialForm {
        self.alphas[0]
            .wedge(&self.alphas[1])
            .and_then(|w| w.wedge(&self.alphas[2]))
            .expect("1-forms on a 3-chart")
    }

    /// `(vα₁, vα₂, vα₃)`.
    pub fn scale_by(&self, v: &ScalarField) -> ContactSphere {
        ContactSphere::new(self.alphas.clone().map(|a| a.mul_fn(v))).expect("same shape")
    }

    pub fn values_with(&self, ev: &mut Evaluator) -> Result<SphereValues> {
        let [a0, a1, a2] = &self.alphas;
        let [d0, d1, d2] = &self.dalphas;
        let alpha = [a0.value(ev)?, a1.value(ev)?, a2.value(ev)?];
        let dalpha = [d0.value(ev)?, d1.value(ev)?, d2.value(ev)?];
        let volume = alpha[0].wedge(&alpha[1])?.wedge(&alpha[2])?.top();
        let scale: f64 = alpha
            .iter()
            .map(|a| a.coefficients().iter().map(|c| c * c).sum::<f64>().sqrt())
            .product();
        if !(volume.abs() > VOLUME_EPS * scale) {
            return Err(Error::DegenerateVolume {
                point: ev.point().to_vec(),
                volume,
            });
        }
        Ok(SphereValues {
            point: ev.point().to_vec(),
            alpha,
            dalpha,
            volume,
        })
    }

    pub fn values(&self, p: &[f64]) -> Result<SphereValues> {
        self.values_with(&mut Evaluator::new(p)?)
    }

    /// `Λ = (α₁∧dα₁)/(α₁∧α₂∧α₃)`.
    pub fn lambda_field(&self) -> ScalarField {
        let num = self.alphas[0].wedge(&self.dalphas[0]).unwrap();
        &num.coefficients()[0] / &self.volume().coefficients()[0]
    }

    /// `β = Σ b_k α_k` with `b_k = (dαᵢ∧αⱼ)/(α₁∧α₂∧α₃)` for cyclic `(i, j, k)`.
    pub fn beta_field(&self) -> DifferentialForm {
        let vol = self.volume().coefficients()[0].clone();
        let mut terms = Vec::new();
        for &(i, j, k) in &CYCLIC {
            let num = self.dalphas[i].wedge(&self.alphas[j]).unwrap();
            let b = &num.coefficients()[0] / &vol;
            terms.push(self.alphas[k].mul_fn(&b));
        }
        crate::forms::sum_forms(&terms)
    }
}

fn check_unit_direction(lambda: &[f64; 3]) -> Result<()> {
    let n = lambda.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnit(n));
    }
    Ok(())
}

/// Coefficient of `(λ·α)∧(λ·dα)` against `α₁∧α₂∧α₃` at `p`.
pub fn contact_residual(cs: &ContactSphere, lambda: &[f64; 3], p: &[f64]) -> Result<f64> {
    check_unit_direction(lambda)?;
    Ok(cs.values(p)?.contact_ratio(lambda))
}

/// The six taut-sphere identities as coefficients against the volume:
/// `αᵢ∧dαᵢ − αⱼ∧dαⱼ` for `(i, j) = (1,2), (2,3), (3,1)`, then
/// `αᵢ∧dαⱼ + αⱼ∧dαᵢ` for the same pairs.
pub fn tautness_residuals(cs: &ContactSphere, p: &[f64]) -> Result<[f64; 6]> {
    Ok(tautness_from_values(&cs.values(p)?))
}

pub fn tautness_from_values(v: &SphereValues) -> [f64; 6] {
    let mut out = [0.0; 6];
    for (n, &(i, j, _)) in CYCLIC.iter().enumerate() {
        out[n] = v.ratio(i, i) - v.ratio(j, j);
        out[3 + n] = v.ratio(i, j) + v.ratio(j, i);
    }
    out
}

/// Least-squares structure data at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointStructure {
    pub point: Vec<f64>,
    /// Coefficients of `β` in the coframe `(α₁, α₂, α₃)`.
    pub b: [f64; 3],
    pub lambda: f64,
    /// `|A x − dα| / |dα|` of the 9×4 fit.
    pub residual: f64,
    pub condition: f64,
}

/// Householder least squares with one refinement step.
fn least_squares(a: &DMatrix<f64>, rhs: &DVector<f64>) -> Result<DVector<f64>> {
    let qr = a.clone().qr();
    let (q, r) = (qr.q(), qr.r());
    let scale = r.diagonal().amax();
    if !(r.diagonal().iter().all(|d| d.abs() > 1e-14 * scale)) {
        return Err(Error::Singular("structure fit".into()));
    }
    let solve = |b: &DVector<f64>| {
        r.solve_upper_triangular(&(q.transpose() * b))
            .ok_or_else(|| Error::Singular("structure fit".into()))
    };
    let x = solve(rhs)?;
    Ok(&x + solve(&(rhs - a * &x))?)
}

/// Solves `dαᵢ = β∧αᵢ + Λ αⱼ∧α_k` for `(b₁, b₂, b₃, Λ)` at one point.
pub fn fit_structure(v: &SphereValues) -> Result<PointStructure> {
    let cond = {
        let sv = DMatrix::from_fn(3, 3, |i, j| v.coframe()[(i, j)]).singular_values();
        sv.max() / sv.min()
    };
    if !(cond < MAX_CONDITION) {
        return Err(Error::IllConditioned {
            point: v.point.clone(),
            condition: cond,
        });
    }
    let mut a = DMatrix::zeros(9, 4);
    let mut rhs = DVector::zeros(9);
    for &(i, j, k) in &CYCLIC {
        let pair = v.alpha[j].wedge(&v.alpha[k]).unwrap();
        for r in 0..3 {
            rhs[3 * i + r] = v.dalpha[i].coefficients()[r];
            a[(3 * i + r, 3)] = pair.coefficients()[r];
        }
        for m in 0..3 {
            let col = v.alpha[m].wedge(&v.alpha[i]).unwrap();
            for r in 0..3 {
                a[(3 * i + r, m)] = col.coefficients()[r];
            }
        }
    }
    let x = least_squares(&a, &rhs)?;
    let resid = (&a * &x - &rhs).norm() / rhs.norm().max(f64::MIN_POSITIVE);
    Ok(PointStructure {
        point: v.point.clone(),
        b: [x[0], x[1], x[2]],
        lambda: x[3],
        residual: if rhs.norm() == 0.0 {
            (&a * &x).norm()
        } else {
            resid
        },
        condition: cond,
    })
}

/// `(β, Λ)` as fields, plus the pointwise fit over the sample.
#[derive(Clone, Debug)]
pub struct StructureData {
    pub beta: DifferentialForm,
    pub lambda: ScalarField,
    /// Largest relative residual of the pointwise fit.
    pub residual: f64,
    /// Largest difference between fitted and closed-form `(b, Λ)`.
    pub agreement: f64,
    pub points: Vec<PointStructure>,
}

pub fn extract_structure(cs: &ContactSphere, sample: &[Vec<f64>]) -> Result<StructureData> {
    let beta = cs.beta_field();
    let lambda = cs.lambda_field();
    let mut points = Vec::with_capacity(sample.len());
    let (mut residual, mut agreement) = (0.0f64, 0.0f64);
    for p in sample {
        let mut ev = Evaluator::new(p)?;
        let v = cs.values_with(&mut ev)?;
        let fit = fit_structure(&v)?;
        let beta_v = beta.value(&mut ev)?;
        let lam = ev.value(&lambda)?;
        // β in the coframe: solve Cᵀ b = β_coords
        let c = v.coframe();
        let bc = c
            .transpose()
            .lu()
            .solve(&Vector3::from_column_slice(beta_v.coefficients()))
            .ok_or_else(|| Error::Singular("coframe".into()))?;
        let diff = (0..3)
            .map(|k| (bc[k] - fit.b[k]).abs())
            .fold((lam - fit.lambda).abs(), f64::max);
        residual = residual.max(fit.residual);
        agreement = agreement.max(diff);
        points.push(fit);
    }
    Ok(StructureData {
        beta,
        lambda,
        residual,
        agreement,
        points,
    })
}

/// `(vα₁, vα₂, vα₃)` with `v = Λ/c`, so that the result has `Λ ≡ c`.
pub fn normalise(cs: &ContactSphere, c: f64, sample: &[Vec<f64>]) -> Result<ContactSphere> {
    if !(c > 0.0) {
        return Err(Error::NonPositive {
            point: Vec::new(),
            value: c,
        });
    }
    let lambda = cs.lambda_field();
    for p in sample {
        let l = lambda.value(p)?;
        if !(l > 0.0) {
            return Err(Error::NonPositive {
                point: p.clone(),
                value: l,
            });
        }
    }
    Ok(cs.scale_by(&lambda.scale(1.0 / c)))
}

/// Errors unless `|Λ − c| ≤ tol` over the sample.
pub fn check_normalised(cs: &ContactSphere, c: f64, sample: &[Vec<f64>], tol: f64) -> Result<()> {
    let lambda = cs.lambda_field();
    for p in sample {
        let l = lambda.value(p)?;
        if !((l - c).abs() <= tol) {
            return Err(Error::NotNormalised {
                point: p.clone(),
                expected: c,
                found: l,
            });
        }
    }
    Ok(())
}

/// `g_s = α₁² + α₂² + α₃²` of a 1-normalised sphere.
pub fn short_metric(cs: &ContactSphere, sample: &[Vec<f64>], tol: f64) -> Result<MetricField> {
    check_normalised(cs, 1.0, sample, tol)?;
    Ok(MetricField::sum_of_squares(cs.alphas()))
}

/// `g_l = β² + α₁² + α₂² + α₃²` of a 1-normalised sphere.
pub fn long_metric(cs: &ContactSphere, sample: &[Vec<f64>], tol: f64) -> Result<MetricField> {
    check_normalised(cs, 1.0, sample, tol)?;
    let mut frame = vec![cs.beta_field()];
    frame.extend(cs.alphas().iter().cloned());
    Ok(MetricField::sum_of_squares(&frame))
}

/// Axial vector `w` of a 2-form on a 3-chart, so that `W(a, b) = w·(a×b)`.
fn axial(dalpha: &DifferentialForm) -> [ScalarField; 3] {
    let c = dalpha.coefficients(); // (01, 02, 12)
    [c[2].clone(), -&c[1], c[0].clone()]
}

/// Reeb field `R` with `α(R) = 1` and `R⌟dα = 0`, as a vector field.
pub fn reeb_vector_field(alpha: &DifferentialForm) -> Result<VectorField> {
    if alpha.dim() != 3 || alpha.degree() != 1 {
        return Err(Error::Degree(
            "Reeb fields need a 1-form on a 3-chart".into(),
        ));
    }
    let w = axial(&alpha.ext_d());
    let a = alpha.coefficients();
    let norm = ScalarField::sum(3, (0..3).map(|i| &a[i] * &w[i]));
    Ok(VectorField::new(w.iter().map(|wi| wi / &norm).collect()))
}

/// Reeb vector of `α` at `p`.
pub fn reeb_field(alpha: &DifferentialForm, p: &[f64]) -> Result<[f64; 3]> {
    let mut ev = Evaluator::new(p)?;
    let a = alpha.value(&mut ev)?;
    let da = alpha.ext_d().value(&mut ev)?;
    let c = da.coefficients();
    let w = [c[2], -c[1], c[0]];
    let aw: f64 = (0..3).map(|i| a.coefficients()[i] * w[i]).sum();
    let scale = a.coefficients().iter().map(|x| x.abs()).sum::<f64>()
        * w.iter().map(|x| x.abs()).sum::<f64>();
    if !(aw.abs() > VOLUME_EPS * scale.max(f64::MIN_POSITIVE)) || aw == 0.0 {
        return Err(Error::NonContact { point: p.to_vec() });
    }
    Ok(w.map(|x| x / aw))
}

/// Outcome of the Cartan-structure test.
#[derive(Clone, Debug, PartialEq)]
pub struct CartanReport {
    pub is_cartan: bool,
    /// Largest `|αᵢ∧dαⱼ| / vol` over `i ≠ j` and the sample.
    pub residual: f64,
}

pub fn is_cartan(cs: &ContactSphere, sample: &[Vec<f64>], tol: f64) -> Result<CartanReport> {
    let mut residual = 0.0f64;
    for p in sample {
        let v = cs.values(p)?;
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    residual = residual.max(v.ratio(i, j).abs());
                }
            }
        }
    }
    Ok(CartanReport {
        is_cartan: residual < tol,
        residual,
    })
}

/// Errors with `Orientation` unless every `αᵢ∧dαᵢ` is a positive multiple
/// of `α₁∧α₂∧α₃` over the sample.
pub fn check_naturally_ordered(cs: &ContactSphere, sample: &[Vec<f64>]) -> Result<()> {
    for p in sample {
        let v = cs.values(p)?;
        for i in 0..3 {
            let r = v.ratio(i, i);
            if !(r > 0.0) {
                return Err(Error::Orientation(format!(
                    "α{}∧dα{} / vol = {r} at {p:?}",
                    i + 1,
                    i + 1
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `αᵢ = dxᵢ + xⱼdx_k − x_kdxⱼ`
    fn chart_sphere() -> ContactSphere {
        let x = ScalarField::coordinates(3);
        let alphas = CYCLIC.map(|(i, j, k)| {
            let mut c = vec![ScalarField::zero(3); 3];
            c[i] = ScalarField::one(3);
            c[k] = x[j].clone();
            c[j] = -&x[k];
            DifferentialForm::one_form(c)
        });
        ContactSphere::new(alphas).unwrap()
    }

    #[test]
    fn contact_residual_at_origin() {
        let cs = chart_sphere();
        assert_eq!(
            contact_residual(&cs, &[1.0, 0.0, 0.0], &[0.0; 3]).unwrap(),
            2.0
        );
        assert!(matches!(
            contact_residual(&cs, &[1.0, 1.0, 0.0], &[0.0; 3]),
            Err(Error::NonUnit(_))
        ));
    }

    #[test]
    fn residual_is_even_in_lambda() {
        let cs = chart_sphere();
        let l = [0.6, -0.48, 0.64];
        let m = l.map(|x| -x);
        let p = [0.3, 0.1, -0.5];
        assert_eq!(
            contact_residual(&cs, &l, &p).unwrap(),
            contact_residual(&cs, &m, &p).unwrap()
        );
    }

    #[test]
    fn repeated_form_is_degenerate() {
        let cs = chart_sphere();
        let a = cs.alpha(0).clone();
        let bad = ContactSphere::new([a.clone(), a, cs.alpha(2).clone()]).unwrap();
        assert!(matches!(
            tautness_residuals(&bad, &[0.2, 0.3, 0.4]),
            Err(Error::DegenerateVolume { .. })
        ));
    }

    #[test]
    fn reeb_of_standard_form() {
        let x = ScalarField::coordinates(3);
        let a = DifferentialForm::one_form(vec![
            ScalarField::zero(3),
            x[0].clone(),
            ScalarField::one(3),
        ]);
        assert_eq!(reeb_field(&a, &[0.4, -1.0, 2.0]).unwrap(), [0.0, 0.0, 1.0]);
        let cs = chart_sphere();
        assert_eq!(reeb_field(cs.alpha(0), &[0.0; 3]).unwrap(), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn closed_form_is_not_contact() {
        let a = DifferentialForm::dx(3, 0);
        assert!(matches!(
            reeb_field(&a, &[0.0; 3]),
            Err(Error::NonContact { .. })
        ));
    }

    #[test]
    fn constant_rescale_divides_lambda() {
        let cs = chart_sphere().scale_by(&ScalarField::constant(3, 3.0));
        let s = extract_structure(&cs, &[vec![0.0; 3], vec![0.1, 0.2, 0.3]]).unwrap();
        let l0 = s.points[0].lambda;
        assert!((l0 - 2.0 / 3.0).abs() < 1e-14);
        assert!(s.agreement < 1e-14);
    }
}
