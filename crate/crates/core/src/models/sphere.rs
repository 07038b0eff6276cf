//! The ν-family of taut contact spheres on `S³`, its charts, canonical
//! slices and the moduli of taut contact circles.

use num_complex::Complex64;

use crate::contact::{tautness_residuals, ContactSphere, CYCLIC};
use crate::error::{Error, Result};
use crate::forms::{ChartMap, DifferentialForm, VectorField};
use crate::jets::ScalarField;
use crate::quat::nu_family_qform;

/// Coordinate charts of the unit sphere `S³ ⊂ ℝ⁴`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SphereChart {
    /// Stereographic, missing `(1, 0, 0, 0)`.
    North,
    /// Stereographic, missing `(−1, 0, 0, 0)`.
    South,
    /// Central projection of the hemisphere `x₀ > 0` from `{x₀ = 1}`.
    Gnomonic,
}

impl SphereChart {
    pub const STEREOGRAPHIC: [SphereChart; 2] = [SphereChart::North, SphereChart::South];

    pub fn map(self) -> ChartMap {
        let y = ScalarField::coordinates(3);
        let r2 = ScalarField::sum(3, y.iter().map(|v| v * v));
        match self {
            SphereChart::North | SphereChart::South => {
                let den = &r2 + 1.0;
                let first = if self == SphereChart::North {
                    &(&r2 - 1.0) / &den
                } else {
                    &(ScalarField::one(3) - &r2) / &den
                };
                let mut comps = vec![first];
                comps.extend(y.iter().map(|v| v.scale(2.0) / &den));
                ChartMap::new(3, comps)
            }
            SphereChart::Gnomonic => {
                let inv = (&r2 + 1.0).powf(-0.5);
                let mut comps = vec![inv.clone()];
                comps.extend(y.iter().map(|v| v * &inv));
                ChartMap::new(3, comps)
            }
        }
    }
}

/// Imaginary components `(F₁, F₂, F₃)` of `½(dq·q̄ − q·dq̄) − ν d(q i q̄)`.
pub fn nu_family_forms(nu: f64) -> [DifferentialForm; 3] {
    nu_family_qform(nu).imaginary()
}

/// The ν-family restricted to `S³` in a chart: `αᵢ = Fᵢ|_{S³}`, with
/// `Λ ≡ 2/(1 + 4ν²)`.
pub fn family_sphere(nu: f64, chart: SphereChart) -> ContactSphere {
    let phi = chart.map();
    let alphas = nu_family_forms(nu).map(|f| f.pullback(&phi).expect("1-form"));
    ContactSphere::new(alphas).expect("1-forms on a 3-chart")
}

/// `Λ` of [`family_sphere`].
pub fn family_lambda(nu: f64) -> f64 {
    2.0 / (1.0 + 4.0 * nu * nu)
}

/// `αᵢ = dxᵢ + xⱼdx_k − x_kdxⱼ` on `ℝ³`, the restriction of the `ν = 0`
/// form to the hyperplane `{x₀ = 1}`. Taut, with `Λ = 2/(1 + |x|²)`.
pub fn hyperplane_sphere() -> ContactSphere {
    let x = ScalarField::coordinates(3);
    let alphas = CYCLIC.map(|(i, j, k)| {
        let mut c = vec![ScalarField::zero(3); 3];
        c[i] = ScalarField::one(3);
        c[k] = x[j].clone();
        c[j] = -&x[k];
        DifferentialForm::one_form(c)
    });
    ContactSphere::new(alphas).expect("1-forms on a 3-chart")
}

/// The `ν = 0` sphere in the gnomonic chart,
/// `αᵢ = (dxᵢ + xⱼdx_k − x_kdxⱼ)/(1 + |x|²)`: a Cartan structure with
/// `β ≡ 0` and `Λ ≡ 2`.
pub fn cartan_chart_sphere() -> ContactSphere {
    let x = ScalarField::coordinates(3);
    let r2 = ScalarField::sum(3, x.iter().map(|v| v * v));
    hyperplane_sphere().scale_by(&(&r2 + 1.0).recip())
}

/// `Y_ν = ½ q + ν q i` on `ℝ⁴`, satisfying `Y_ν⌟Ωᵢ = ½Fᵢ` for the standard
/// flat triple.
pub fn family_liouville_field(nu: f64) -> VectorField {
    let x = ScalarField::coordinates(4);
    // q i = −x₁ + i x₀ + j x₃ − k x₂
    VectorField::new(vec![
        x[0].scale(0.5) - x[1].scale(nu),
        x[1].scale(0.5) + x[0].scale(nu),
        x[2].scale(0.5) + x[3].scale(nu),
        x[3].scale(0.5) - x[2].scale(nu),
    ])
}

/// `½Fᵢ|_{S³}`, the sphere with `eᵗαᵢ = Y_ν⌟Ωᵢ`; `Λ ≡ 4/(1 + 4ν²)`.
pub fn cone_sphere(nu: f64, chart: SphereChart) -> ContactSphere {
    family_sphere(nu, chart).scale_by(&ScalarField::constant(3, 0.5))
}

/// `(y, t) ↦ e^{t/2} φ(y) e^{iνt}`, the flow of `Y_ν` through the chart `φ`.
pub fn cone_map(nu: f64, chart: SphereChart) -> ChartMap {
    let x = ScalarField::coordinates(4);
    let inner = [x[0].clone(), x[1].clone(), x[2].clone()];
    let q: Vec<ScalarField> = chart
        .map()
        .components()
        .iter()
        .map(|f| f.compose(&inner))
        .collect();
    let t = &x[3];
    let r = t.scale(0.5).exp();
    let (c, s) = (t.scale(nu).cos(), t.scale(nu).sin());
    // q (c + i s)
    let comps = vec![
        &q[0] * &c - &q[1] * &s,
        &q[1] * &c + &q[0] * &s,
        &q[2] * &c + &q[3] * &s,
        &q[3] * &c - &q[2] * &s,
    ];
    ChartMap::new(4, comps.into_iter().map(|f| &r * &f).collect())
}

/// `‖∂t‖² = (¼ + ν²)(|z₁|² + |z₂|²)`.
pub fn dt_norm_sq(nu: f64, q: &[f64]) -> f64 {
    (0.25 + nu * nu) * q.iter().map(|x| x * x).sum::<f64>()
}

/// Radius `2/√(1 + 4ν²)` of the level set `‖∂t‖ = 1`.
pub fn canonical_slice(nu: f64) -> f64 {
    2.0 / (1.0 + 4.0 * nu * nu).sqrt()
}

/// Equivalence class of a taut contact circle
/// `(½ + δ)z₁dz₂ − (½ − δ)z₂dz₁` under `δ ∼ −δ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModuliPoint {
    delta: Complex64,
}

/// Tolerance on `Re δ` for the extension test.
pub const EXTENSION_TOL: f64 = 1e-12;

impl ModuliPoint {
    pub fn new(delta: Complex64) -> Result<Self> {
        if !(delta.re.abs() < 0.5) || !delta.im.is_finite() {
            return Err(Error::Strip {
                re: delta.re,
                im: delta.im,
            });
        }
        let flip = delta.re < 0.0 || (delta.re == 0.0 && delta.im < 0.0);
        Ok(ModuliPoint {
            delta: if flip { -delta } else { delta } + Complex64::new(0.0, 0.0),
        })
    }

    /// Representative with `Re δ ≥ 0`, and `Im δ ≥ 0` when `Re δ = 0`.
    pub fn delta(&self) -> Complex64 {
        self.delta
    }

    pub fn delta_sq(&self) -> Complex64 {
        self.delta * self.delta
    }

    /// `x < ¼ − y²` for `δ² = x + iy`.
    pub fn inside_parabola(&self) -> bool {
        let s = self.delta_sq();
        s.re < 0.25 - s.im * s.im
    }

    pub fn extends_to_sphere(&self) -> bool {
        self.delta.re.abs() <= EXTENSION_TOL
    }

    pub fn nu(&self) -> f64 {
        self.delta.im
    }
}

/// Real and imaginary parts of `(½ + δ)z₁dz₂ − (½ − δ)z₂dz₁` on `ℝ⁴`.
pub fn delta_circle(delta: Complex64) -> [DifferentialForm; 2] {
    let x = ScalarField::coordinates(4);
    let z1 = (x[0].clone(), x[1].clone());
    let z2 = (x[2].clone(), x[3].clone());
    let dz1 = (DifferentialForm::dx(4, 0), DifferentialForm::dx(4, 1));
    let dz2 = (DifferentialForm::dx(4, 2), DifferentialForm::dx(4, 3));
    let a = Complex64::new(0.5, 0.0) + delta;
    let b = -(Complex64::new(0.5, 0.0) - delta);
    let t1 = complex_term(a, &z1, &dz2);
    let t2 = complex_term(b, &z2, &dz1);
    [&t1[0] + &t2[0], &t1[1] + &t2[1]]
}

/// `c · z · dw` split into real and imaginary 1-forms.
fn complex_term(
    c: Complex64,
    z: &(ScalarField, ScalarField),
    dw: &(DifferentialForm, DifferentialForm),
) -> [DifferentialForm; 2] {
    let fr = &z.0.scale(c.re) - &z.1.scale(c.im);
    let fi = &z.0.scale(c.im) + &z.1.scale(c.re);
    [
        &dw.0.mul_fn(&fr) - &dw.1.mul_fn(&fi),
        &dw.1.mul_fn(&fr) + &dw.0.mul_fn(&fi),
    ]
}

/// Report on a modulus `δ`.
#[derive(Clone, Debug)]
pub struct ModuliReport {
    pub point: ModuliPoint,
    pub extends: bool,
    /// The ν-family sphere with `ν = Im δ` when the circle extends.
    pub sphere: Option<ContactSphere>,
    /// Largest tautness residual of the natural candidate sphere at the
    /// probe point, when the circle does not extend.
    pub candidate_residual: Option<f64>,
}

/// Probe point in the north stereographic chart for non-extension.
pub const MODULI_PROBE: [f64; 3] = [0.3, -0.2, 0.5];

/// Candidate sphere: `α₁` from the ν-family (`ν = Im δ`, scaled as `½F₁`)
/// paired with the δ-circle, restricted to `S³` in `chart`.
pub fn moduli_candidate(delta: Complex64, chart: SphereChart) -> ContactSphere {
    let phi = chart.map();
    let [f1, _, _] = nu_family_forms(delta.im);
    let [a2, a3] = delta_circle(delta);
    let alphas = [f1.scale(0.5), a2, a3].map(|a| a.pullback(&phi).expect("1-form"));
    ContactSphere::new(alphas).expect("1-forms on a 3-chart")
}

pub fn moduli(delta: Complex64) -> Result<ModuliReport> {
    let point = ModuliPoint::new(delta)?;
    let extends = point.extends_to_sphere();
    if extends {
        return Ok(ModuliReport {
            point,
            extends,
            sphere: Some(family_sphere(point.nu(), SphereChart::North)),
            candidate_residual: None,
        });
    }
    let cand = moduli_candidate(point.delta(), SphereChart::North);
    let r = tautness_residuals(&cand, &MODULI_PROBE)?;
    Ok(ModuliReport {
        point,
        extends,
        sphere: None,
        candidate_residual: Some(r.iter().fold(0.0f64, |m, v| m.max(v.abs()))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charts_land_on_the_sphere() {
        for chart in [
            SphereChart::North,
            SphereChart::South,
            SphereChart::Gnomonic,
        ] {
            let q = chart.map().apply(&[0.3, -1.2, 0.7]).unwrap();
            let n: f64 = q.iter().map(|x| x * x).sum();
            assert!((n - 1.0).abs() < 1e-15, "{chart:?}");
        }
    }

    #[test]
    fn canonicalisation() {
        let p = ModuliPoint::new(Complex64::new(-0.2, 0.1)).unwrap();
        assert_eq!(p.delta(), Complex64::new(0.2, -0.1));
        let q = ModuliPoint::new(Complex64::new(0.0, -0.4)).unwrap();
        assert_eq!(q.delta(), Complex64::new(0.0, 0.4));
        assert!(matches!(
            ModuliPoint::new(Complex64::new(0.5, 0.0)),
            Err(Error::Strip { .. })
        ));
    }

    #[test]
    fn imaginary_delta_extends() {
        let r = moduli(Complex64::new(0.0, 0.4)).unwrap();
        assert!(r.extends && r.sphere.is_some());
        assert!((r.point.delta_sq().re + 0.16).abs() < 1e-15);
        assert!(r.point.inside_parabola());
        let o = moduli(Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(o.point.delta_sq(), Complex64::new(0.0, 0.0));
        assert_eq!(o.point.nu(), 0.0);
    }

    #[test]
    fn cone_map_flows_along_y() {
        let nu = 0.3;
        let phi = cone_map(nu, SphereChart::North);
        let p = [0.2, -0.4, 0.7, 0.5];
        let jac = phi.jacobian(&p).unwrap();
        let y = family_liouville_field(nu)
            .at(&phi.apply(&p).unwrap())
            .unwrap();
        for i in 0..4 {
            assert!((jac[i][3] - y[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn slice_radius() {
        assert_eq!(canonical_slice(0.0), 2.0);
        assert!((canonical_slice(0.5) - 2f64.sqrt()).abs() < 1e-15);
        assert!(canonical_slice(100.0) < canonical_slice(10.0));
    }
}
