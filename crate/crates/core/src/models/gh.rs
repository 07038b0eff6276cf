//! Gibbons–Hawking triples `Ωᵢ = (dθ + β)∧dxᵢ + V dxⱼ∧dx_k` on the
//! 4-chart `(θ, x₁, x₂, x₃)`.

use crate::contact::{ContactSphere, CYCLIC};
use crate::error::{Error, Result};
use crate::forms::{ChartMap, DifferentialForm, VectorField};
use crate::hk::{contact_sphere_from_triple, SymplecticTriple};
use crate::jets::ScalarField;
use crate::metric::MetricField;
use crate::sampling::BoxDomain;

/// A positive function `V` and a 1-form `β = Σ bᵢ dxᵢ` on `ℝ³`.
#[derive(Clone, Debug)]
pub struct GhData {
    pub v: ScalarField,
    pub b: [ScalarField; 3],
}

impl GhData {
    pub fn new(v: ScalarField, b: [ScalarField; 3]) -> Self {
        assert!(v.dim() == 3 && b.iter().all(|f| f.dim() == 3));
        GhData { v, b }
    }

    pub fn curl_b(&self) -> [ScalarField; 3] {
        CYCLIC.map(|(_, j, k)| &self.b[k].partial(j) - &self.b[j].partial(k))
    }

    /// `max |∇V + curl b|` at `p`; zero iff every `Ωᵢ` is closed.
    pub fn monopole_residual(&self, p: &[f64]) -> Result<f64> {
        let curl = self.curl_b();
        let mut r = 0.0f64;
        for (i, c) in curl.iter().enumerate() {
            r = r.max((self.v.partial(i).value(p)? + c.value(p)?).abs());
        }
        Ok(r)
    }

    /// `ΔV` at `p`.
    pub fn laplacian(&self, p: &[f64]) -> Result<f64> {
        let j = self.v.jet(p, 2)?;
        Ok((0..3).map(|i| j.partial(&[i, i])).sum())
    }

    /// Errors unless `V > 0` and `∇V = −curl b` within `tol` over the sample.
    pub fn check(&self, sample: &[Vec<f64>], tol: f64) -> Result<()> {
        for p in sample {
            let v = self.v.value(p)?;
            if !(v > 0.0) {
                return Err(Error::NonPositive {
                    point: p.clone(),
                    value: v,
                });
            }
            let r = self.monopole_residual(p)?;
            if !(r < tol) {
                return Err(Error::Residual {
                    what: "grad V + curl b".into(),
                    residual: r,
                    tolerance: tol,
                });
            }
        }
        Ok(())
    }

    fn lift(&self, f: &ScalarField) -> ScalarField {
        let x = ScalarField::coordinates(4);
        f.compose(&[x[1].clone(), x[2].clone(), x[3].clone()])
    }

    /// `dθ + β` on the 4-chart.
    pub fn connection(&self) -> DifferentialForm {
        let mut c = vec![ScalarField::one(4)];
        c.extend(self.b.iter().map(|f| self.lift(f)));
        DifferentialForm::one_form(c)
    }

    pub fn triple(&self) -> SymplecticTriple {
        let eta = self.connection();
        let v = self.lift(&self.v);
        let omegas = CYCLIC.map(|(i, j, k)| {
            let dx = |m: usize| DifferentialForm::dx(4, m + 1);
            let a = eta.wedge(&dx(i)).expect("1-forms");
            let b = dx(j).wedge(&dx(k)).expect("1-forms").mul_fn(&v);
            &a + &b
        });
        SymplecticTriple::new(omegas).expect("2-forms on a 4-chart")
    }

    /// `V⁻¹(dθ + β)² + V(dx₁² + dx₂² + dx₃²)`.
    pub fn metric(&self) -> MetricField {
        let v = self.lift(&self.v);
        let mut frame = vec![self.connection()];
        let mut weights = vec![v.recip()];
        for m in 1..4 {
            frame.push(DifferentialForm::dx(4, m));
            weights.push(v.clone());
        }
        MetricField::from_coframe(&frame, &weights)
    }
}

/// Checked triple and metric of `data` over a sample of `ℝ³` points.
pub fn gh_triple(
    data: &GhData,
    sample: &[Vec<f64>],
    tol: f64,
) -> Result<(SymplecticTriple, MetricField)> {
    data.check(sample, tol)?;
    Ok((data.triple(), data.metric()))
}

/// `V = x₁`, `β = x₃ dx₂` with its Liouville field and a transversal.
#[derive(Clone, Debug)]
pub struct GhExample {
    pub data: GhData,
    /// `Y = ⅔ θ∂_θ + ⅓ Σ xᵢ∂ᵢ`.
    pub liouville: VectorField,
    /// `{θ = 1}` with chart `(x₁, x₂, x₃)`.
    pub transversal: ChartMap,
    /// Sample box in the transversal chart.
    pub domain: BoxDomain,
}

pub fn gh_example() -> GhExample {
    let x = ScalarField::coordinates(3);
    let zero = ScalarField::zero(3);
    GhExample {
        data: GhData::new(x[0].clone(), [zero.clone(), x[2].clone(), zero]),
        liouville: VectorField::euler(&[2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]),
        transversal: ChartMap::hyperplane(4, 0, 1.0),
        domain: BoxDomain::new(vec![0.5, -1.0, -1.0], vec![3.0, 1.0, 1.0]),
    }
}

impl GhExample {
    /// `αᵢ = ι*(Y⌟Ωᵢ)` on the transversal.
    pub fn contact_sphere(&self, sample: &[Vec<f64>]) -> Result<ContactSphere> {
        contact_sphere_from_triple(
            &self.data.triple(),
            &self.liouville,
            &self.transversal,
            sample,
        )
    }

    /// `(1/x₁)dθ² + x₁dx₁²`, the metric on `{x₂ = x₃ = 0}` in the chart `(θ, x₁)`.
    pub fn surface_metric(&self) -> MetricField {
        let s = ScalarField::coordinates(2);
        let z = ScalarField::zero(2);
        let phi = ChartMap::new(2, vec![s[0].clone(), s[1].clone(), z.clone(), z]);
        self.data.metric().pullback(&phi)
    }
}

/// `V = 1/ρ` with the Dirac potential `b = (−x₂, x₁, 0)/(ρ(ρ + x₃))`,
/// smooth off the ray `{x₁ = x₂ = 0, x₃ ≤ 0}`.
pub fn monopole() -> GhData {
    let x = ScalarField::coordinates(3);
    let rho = ScalarField::sum(3, x.iter().map(|v| v * v)).sqrt();
    let den = &rho * &(&rho + &x[2]);
    GhData::new(
        rho.recip(),
        [-&x[1] / &den, &x[0] / &den, ScalarField::zero(3)],
    )
}
