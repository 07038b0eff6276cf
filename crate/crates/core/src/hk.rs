//! Symplectic triples on 4-charts and the hyperkähler data they carry.
//!
//! Complex structures follow `g(v, w) = Aᵢ(v, Jᵢw)`, equivalently
//! `Aᵢ = −g(·, Jᵢ·)` since `Jᵢ² = −1`.

use nalgebra::{Matrix3, Matrix4, Vector4};
use num_complex::Complex64;

use crate::contact::{ContactSphere, StructureData};
use crate::error::{Error, Result};
use crate::forms::index::combinations;
use crate::forms::{ChartMap, DifferentialForm, FormValue, VectorField};
use crate::jets::{wirtinger, Evaluator, Pairing, ScalarField, Wirtinger};
use crate::metric::MetricField;
use crate::quat::Quaternion;

/// Index of the `t` coordinate on lifted charts.
pub const T_AXIS: usize = 3;

/// Three 2-forms `(Ω₁, Ω₂, Ω₃)` on a 4-chart.
#[derive(Clone, Debug)]
pub struct SymplecticTriple {
    omegas: [DifferentialForm; 3],
}

impl SymplecticTriple {
    pub fn new(omegas: [DifferentialForm; 3]) -> Result<Self> {
        for o in &omegas {
            if o.dim() != 4 {
                return Err(Error::Dimension {
                    expected: 4,
                    found: o.dim(),
                });
            }
            if o.degree() != 2 {
                return Err(Error::Degree(format!(
                    "symplectic triple needs 2-forms, found degree {}",
                    o.degree()
                )));
            }
        }
        Ok(SymplecticTriple { omegas })
    }

    pub fn omegas(&self) -> &[DifferentialForm; 3] {
        &self.omegas
    }

    pub fn omega(&self, i: usize) -> &DifferentialForm {
        &self.omegas[i]
    }

    pub fn scale_by(&self, f: &ScalarField) -> Self {
        SymplecticTriple {
            omegas: self.omegas.clone().map(|o| o.mul_fn(f)),
        }
    }

    pub fn values_with(&self, ev: &mut Evaluator) -> Result<[FormValue; 3]> {
        let [a, b, c] = &self.omegas;
        Ok([a.value(ev)?, b.value(ev)?, c.value(ev)?])
    }

    pub fn values(&self, p: &[f64]) -> Result<[FormValue; 3]> {
        self.values_with(&mut Evaluator::new(p)?)
    }

    /// Largest coefficient of `dΩᵢ` at `p`.
    pub fn closedness_residual(&self, p: &[f64]) -> Result<f64> {
        let mut ev = Evaluator::new(p)?;
        let mut m = 0.0f64;
        for o in &self.omegas {
            m = m.max(o.ext_d().value(&mut ev)?.max_abs());
        }
        Ok(m)
    }

    /// Largest `|L_YΩᵢ − Ωᵢ|` coefficient at `p`.
    pub fn tri_liouville_residual(&self, y: &VectorField, p: &[f64]) -> Result<f64> {
        let mut ev = Evaluator::new(p)?;
        let mut m = 0.0f64;
        for o in &self.omegas {
            let diff = &o.lie_derivative(y) - o;
            m = m.max(diff.value(&mut ev)?.max_abs());
        }
        Ok(m)
    }
}

/// `Ωᵢ∧Ωᵢ − Ωⱼ∧Ωⱼ` (three) and `Ωᵢ∧Ωⱼ` (three), divided by `|Ω₁∧Ω₁|`.
pub fn conformal_residuals(a: &[FormValue; 3]) -> Result<[f64; 6]> {
    let sq: Vec<f64> = a
        .iter()
        .map(|x| x.wedge(x).map(|w| w.top()))
        .collect::<Result<_>>()?;
    let scale = sq[0].abs();
    if scale == 0.0 {
        return Err(Error::DegenerateTriple("Ω₁∧Ω₁ vanishes".into()));
    }
    let mut out = [0.0; 6];
    for (n, (i, j)) in [(0, 1), (1, 2), (2, 0)].into_iter().enumerate() {
        out[n] = (sq[i] - sq[j]) / scale;
        out[3 + n] = a[i].wedge(&a[j])?.top() / scale;
    }
    Ok(out)
}

/// Forms on a 3-chart viewed on the 4-chart `(x₀, x₁, x₂, t)`.
pub fn extend_to_cylinder(a: &DifferentialForm) -> DifferentialForm {
    let x = ScalarField::coordinates(4);
    let proj = ChartMap::new(4, vec![x[0].clone(), x[1].clone(), x[2].clone()]);
    a.pullback(&proj).expect("projection onto a 3-chart")
}

/// `Ωᵢ = d(eᵗαᵢ)` on the 4-chart `(x₀, x₁, x₂, t)`.
pub fn lift(cs: &ContactSphere) -> SymplecticTriple {
    let et = ScalarField::coordinate(4, T_AXIS).exp();
    let omegas = cs
        .alphas()
        .clone()
        .map(|a| extend_to_cylinder(&a).mul_fn(&et).ext_d());
    SymplecticTriple::new(omegas).expect("2-forms on a 4-chart")
}

/// Antisymmetric matrix `A_ab = A(∂_a, ∂_b)` of a 2-form on `ℝ⁴`.
pub fn two_form_matrix(a: &FormValue) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    for (c, idx) in a.coefficients().iter().zip(combinations(4, 2)) {
        m[(idx[0], idx[1])] = *c;
        m[(idx[1], idx[0])] = -*c;
    }
    m
}

pub fn matrix_two_form(m: &Matrix4<f64>) -> FormValue {
    let c = combinations(4, 2)
        .iter()
        .map(|idx| m[(idx[0], idx[1])])
        .collect();
    FormValue::new(4, 2, c).expect("six coefficients")
}

/// The standard triple `Aᵢ = dx₀∧dxᵢ + dxⱼ∧dx_k`.
pub fn standard_triple() -> [FormValue; 3] {
    [(1, 2, 3), (2, 3, 1), (3, 1, 2)].map(|(i, j, k)| {
        let mut m = Matrix4::zeros();
        m[(0, i)] = 1.0;
        m[(i, 0)] = -1.0;
        m[(j, k)] = 1.0;
        m[(k, j)] = -1.0;
        matrix_two_form(&m)
    })
}

/// `SymplecticTriple` with constant standard coefficients.
pub fn standard_flat_triple() -> SymplecticTriple {
    let omegas = standard_triple().map(|v| {
        let c = v
            .coefficients()
            .iter()
            .map(|&x| ScalarField::constant(4, x))
            .collect();
        DifferentialForm::new(4, 2, c).unwrap()
    });
    SymplecticTriple::new(omegas).unwrap()
}

fn unit(i: usize) -> [f64; 4] {
    let mut e = [0.0; 4];
    e[i] = 1.0;
    e
}

/// `½g(v, v)` from `(v⌟A₁)∧(v⌟A₂)∧(v⌟A₃) = ½g(v,v) v⌟(A₁∧A₁)`, as the
/// least-squares ratio over the four coefficients of both 3-forms.
fn half_quadratic(a: &[FormValue; 3], sq: &FormValue, v: &[f64]) -> Result<Option<f64>> {
    let lhs = a[0]
        .interior(v)
        .wedge(&a[1].interior(v))?
        .wedge(&a[2].interior(v))?;
    let rhs = sq.interior(v);
    let rr: f64 = rhs.coefficients().iter().map(|x| x * x).sum();
    let scale = sq.max_abs() * v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if rr.sqrt() <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
        return Ok(None);
    }
    let lr: f64 = lhs
        .coefficients()
        .iter()
        .zip(rhs.coefficients())
        .map(|(l, r)| l * r)
        .sum();
    Ok(Some(lr / rr))
}

/// The metric determined by a conformal triple at a point, polarised over
/// the ten basis pairs.
pub fn metric_from_triple(a: &[FormValue; 3]) -> Result<Matrix4<f64>> {
    let sq = a[0].wedge(&a[0])?;
    let q = |v: &[f64]| -> Result<f64> {
        half_quadratic(a, &sq, v)?
            .map(|s| 2.0 * s)
            .ok_or_else(|| Error::DegenerateTriple("v⌟(A₁∧A₁) vanishes".into()))
    };
    let mut g = Matrix4::zeros();
    let diag: Vec<f64> = (0..4).map(|i| q(&unit(i))).collect::<Result<_>>()?;
    for i in 0..4 {
        g[(i, i)] = diag[i];
        for j in i + 1..4 {
            let mut v = unit(i);
            v[j] = 1.0;
            let gij = 0.5 * (q(&v)? - diag[i] - diag[j]);
            g[(i, j)] = gij;
            g[(j, i)] = gij;
        }
    }
    Ok(g)
}

/// Pointwise metric of a triple.
pub fn triple_metric_at(t: &SymplecticTriple, p: &[f64]) -> Result<Matrix4<f64>> {
    metric_from_triple(&t.values(p)?)
}

/// Orientation sign of the triple: sign of `A₁∧A₁`.
fn orientation(a: &[FormValue; 3]) -> Result<f64> {
    let top = a[0].wedge(&a[0])?.top();
    if top == 0.0 {
        return Err(Error::DegenerateTriple("A₁∧A₁ vanishes".into()));
    }
    Ok(top.signum())
}

/// `(⋆ω)_cd = (s√|g|/2) ε_abcd ω^ab`, with `s` the orientation sign.
pub fn hodge_star(omega: &FormValue, g: &Matrix4<f64>, sign: f64) -> Result<FormValue> {
    let ginv = g
        .try_inverse()
        .ok_or_else(|| Error::Singular("metric".into()))?;
    let w = two_form_matrix(omega);
    let up = ginv * w * ginv.transpose();
    let vol = g.determinant().abs().sqrt() * sign;
    let mut out = Matrix4::zeros();
    for c in 0..4 {
        for d in 0..4 {
            let mut s = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    s += levi_civita([a, b, c, d]) * up[(a, b)];
                }
            }
            out[(c, d)] = 0.5 * vol * s;
        }
    }
    Ok(matrix_two_form(&out))
}

fn levi_civita(idx: [usize; 4]) -> f64 {
    crate::forms::index::sort_with_sign(&idx)
        .map(|(_, s)| s)
        .unwrap_or(0.0)
}

/// `|ω|_g` with `|ω|² = ½ ω_ab ω^ab`.
pub fn form_norm(omega: &FormValue, g: &Matrix4<f64>) -> Result<f64> {
    let ginv = g
        .try_inverse()
        .ok_or_else(|| Error::Singular("metric".into()))?;
    let w = two_form_matrix(omega);
    let up = ginv * w * ginv.transpose();
    Ok((0.5 * w.component_mul(&up).sum()).sqrt())
}

/// Largest coefficient of `⋆Aᵢ − Aᵢ`, the star taken with the triple's own
/// metric and orientation.
pub fn self_duality_residual(a: &[FormValue; 3]) -> Result<f64> {
    let g = metric_from_triple(a)?;
    let s = orientation(a)?;
    let mut m = 0.0f64;
    for x in a {
        m = m.max((&hodge_star(x, &g, s)? - x).max_abs());
    }
    Ok(m)
}

/// A coframe at a point, rows `θ₀..θ₃`, in which the triple is standard.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalFrame {
    pub coframe: Matrix4<f64>,
    /// Largest coefficient of `Aᵢ − (θ₀∧θᵢ + θⱼ∧θ_k)`.
    pub residual: f64,
}

fn standard_matrices() -> [Matrix4<f64>; 3] {
    standard_triple().map(|v| two_form_matrix(&v))
}

/// Normal frame by metric, oriented Cholesky coframe, then the rotation
/// `u ∈ Sp(1)` aligning the triple.
pub fn normal_frame(a: &[FormValue; 3]) -> Result<NormalFrame> {
    let g = metric_from_triple(a)?;
    let eig = g.symmetric_eigenvalues();
    if eig.iter().all(|&e| e < 0.0) {
        return Err(Error::Orientation(
            "triple metric is negative definite; triple is not naturally ordered".into(),
        ));
    }
    let chol = g
        .cholesky()
        .ok_or_else(|| Error::DegenerateTriple(format!("triple metric is indefinite: {eig:?}")))?;
    let mut e = chol.l().transpose();
    if e.determinant().signum() != orientation(a)? {
        for c in 0..4 {
            e[(0, c)] = -e[(0, c)];
        }
    }
    let f = e
        .try_inverse()
        .ok_or_else(|| Error::Singular("coframe".into()))?;
    let std = standard_matrices();
    let hat: Vec<Matrix4<f64>> = a
        .iter()
        .map(|x| f.transpose() * two_form_matrix(x) * f)
        .collect();
    let r = Matrix3::from_fn(|i, m| hat[i].component_mul(&std[m]).sum() / 4.0);
    let ortho = (r * r.transpose() - Matrix3::identity()).abs().max();
    if ortho > 1e-6 {
        return Err(Error::DegenerateTriple(format!(
            "triple is not conformal (rotation defect {ortho:e})"
        )));
    }
    if r.determinant() < 0.0 {
        return Err(Error::Orientation(
            "aligning rotation has determinant −1".into(),
        ));
    }
    let rot = [
        [r[(0, 0)], r[(0, 1)], r[(0, 2)]],
        [r[(1, 0)], r[(1, 1)], r[(1, 2)]],
        [r[(2, 0)], r[(2, 1)], r[(2, 2)]],
    ];
    let u = Quaternion::from_rotation_matrix(&rot);
    let lm = u.left_matrix();
    let coframe = Matrix4::from_fn(|i, j| lm[i][j]) * e;
    let residual = frame_residual(a, &coframe)?;
    Ok(NormalFrame { coframe, residual })
}

/// Largest coefficient of `Aᵢ` minus the standard triple in `coframe`.
pub fn frame_residual(a: &[FormValue; 3], coframe: &Matrix4<f64>) -> Result<f64> {
    let std = standard_matrices();
    let mut m = 0.0f64;
    for (x, s) in a.iter().zip(&std) {
        let expected = coframe.transpose() * s * coframe;
        m = m.max((two_form_matrix(x) - expected).abs().max());
    }
    Ok(m)
}

/// `(J₁, J₂, J₃)` at a point, acting on tangent vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexStructureTriple {
    pub j: [Matrix4<f64>; 3],
}

impl ComplexStructureTriple {
    /// Largest entry of `Jᵢ² + I` and `J₁J₂ − J₃` (and cyclic).
    pub fn quaternionic_residual(&self) -> f64 {
        let id = Matrix4::identity();
        let mut m = 0.0f64;
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            m = m.max((self.j[i] * self.j[i] + id).abs().max());
            m = m.max((self.j[i] * self.j[j] - self.j[k]).abs().max());
        }
        m
    }

    /// Largest entry of the symmetric part of `g(·, Jᵢ·)`.
    pub fn compatibility_residual(&self, g: &Matrix4<f64>) -> f64 {
        self.j
            .iter()
            .map(|j| {
                let b = g * j;
                (b + b.transpose()).abs().max()
            })
            .fold(0.0, f64::max)
    }
}

/// `Jᵢ = [Aᵢ]⁻¹[g]`, from `g(v, w) = Aᵢ(v, Jᵢw)`.
pub fn complex_structures(a: &[FormValue; 3]) -> Result<ComplexStructureTriple> {
    let g = metric_from_triple(a)?;
    let mut j = [Matrix4::zeros(); 3];
    for (ji, x) in j.iter_mut().zip(a) {
        let inv = two_form_matrix(x)
            .try_inverse()
            .ok_or_else(|| Error::DegenerateTriple("degenerate 2-form".into()))?;
        *ji = inv * g;
    }
    Ok(ComplexStructureTriple { j })
}

/// `g = eᵗ(Λ⁻¹(dt + β)² + Λ(α₁² + α₂² + α₃²))` on `(x₀, x₁, x₂, t)`.
pub fn metric_from_structure(cs: &ContactSphere, s: &StructureData) -> Result<MetricField> {
    for p in s.points.iter() {
        if !(p.lambda > 0.0) {
            return Err(Error::NonPositive {
                point: p.point.clone(),
                value: p.lambda,
            });
        }
    }
    let et = ScalarField::coordinate(4, T_AXIS).exp();
    let lam = extend_function(&s.lambda);
    let dt_beta = &DifferentialForm::dx(4, T_AXIS) + &extend_to_cylinder(&s.beta);
    let mut frame = vec![dt_beta];
    let mut weights = vec![&et / &lam];
    for a in cs.alphas() {
        frame.push(extend_to_cylinder(a));
        weights.push(&et * &lam);
    }
    Ok(MetricField::from_coframe(&frame, &weights))
}

/// A function on a 3-chart viewed on `(x₀, x₁, x₂, t)`.
pub fn extend_function(f: &ScalarField) -> ScalarField {
    let x = ScalarField::coordinates(4);
    f.compose(&[x[0].clone(), x[1].clone(), x[2].clone()])
}

/// `αᵢ = ι*(Y⌟Ωᵢ)` on a transversal `ι` to `Y`, checked transverse at the
/// sample points of the transversal's chart.
pub fn contact_sphere_from_triple(
    t: &SymplecticTriple,
    y: &VectorField,
    iota: &ChartMap,
    sample: &[Vec<f64>],
) -> Result<ContactSphere> {
    if iota.target_dim() != 4 || iota.source_dim() != 3 {
        return Err(Error::Dimension {
            expected: 4,
            found: iota.target_dim(),
        });
    }
    for p in sample {
        let jac = iota.jacobian(p)?;
        let yv = y.at(&iota.apply(p)?)?;
        let m = Matrix4::from_fn(|r, c| if c < 3 { jac[r][c] } else { yv[r] });
        let scale = m.column_iter().map(|c| c.norm()).product::<f64>();
        if !(m.determinant().abs() > 1e-12 * scale) {
            return Err(Error::NotTransverse { point: p.clone() });
        }
    }
    let alphas = t.omegas().clone().map(|o| o.interior(y));
    let [a, b, c] = &alphas;
    ContactSphere::new([a.pullback(iota)?, b.pullback(iota)?, c.pullback(iota)?])
}

/// Kähler curvature `K_{αβ̄γδ̄}` of the potential `H` on `ℝ⁴ = ℂ²`, indexed
/// `[α][β][γ][δ]` with `G = ½(H_{z_α z̄_β})` and
/// `K_{γδ̄} = G_{z_γ z̄_δ} − G_{z_γ} G⁻¹ G_{z̄_δ}` as 2×2 matrices.
pub fn kahler_curvature(h: &ScalarField, p: &[f64]) -> Result<[[[[Complex64; 2]; 2]; 2]; 2]> {
    let jet = h.jet(p, 4)?;
    let pr = Pairing::standard();
    let w = |ops: &[Wirtinger]| wirtinger(&jet, &pr, ops).map(|v| 0.5 * v);
    type M2 = nalgebra::Matrix2<Complex64>;
    let mut g = M2::zeros();
    let mut dg = [M2::zeros(), M2::zeros()];
    let mut dbg = [M2::zeros(), M2::zeros()];
    let mut ddg = [[M2::zeros(); 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            let base = [Wirtinger::Z(a), Wirtinger::ZBar(b)];
            g[(a, b)] = w(&base)?;
            for c in 0..2 {
                dg[c][(a, b)] = w(&[base[0], base[1], Wirtinger::Z(c)])?;
                dbg[c][(a, b)] = w(&[base[0], base[1], Wirtinger::ZBar(c)])?;
                for d in 0..2 {
                    ddg[c][d][(a, b)] =
                        w(&[base[0], base[1], Wirtinger::Z(c), Wirtinger::ZBar(d)])?;
                }
            }
        }
    }
    let ginv = g
        .try_inverse()
        .ok_or_else(|| Error::Singular(format!("Kähler metric is singular at {p:?}")))?;
    let mut k = [[[[Complex64::new(0.0, 0.0); 2]; 2]; 2]; 2];
    for c in 0..2 {
        for d in 0..2 {
            let m = ddg[c][d] - dg[c] * ginv * dbg[d];
            for a in 0..2 {
                for b in 0..2 {
                    k[a][b][c][d] = m[(a, b)];
                }
            }
        }
    }
    Ok(k)
}

/// `G = ½ H_{z_α z̄_β}` at `p`.
pub fn kahler_metric(h: &ScalarField, p: &[f64]) -> Result<[[Complex64; 2]; 2]> {
    let jet = h.jet(p, 2)?;
    let m = crate::jets::complex_hessian(&jet, &Pairing::standard())?;
    Ok(m.map(|row| row.map(|v| 0.5 * v)))
}

/// `g(v, v)`.
pub fn quadratic(g: &Matrix4<f64>, v: &[f64; 4]) -> f64 {
    let x = Vector4::from_column_slice(v);
    (x.transpose() * g * x)[(0, 0)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_metric_is_identity() {
        let g = metric_from_triple(&standard_triple()).unwrap();
        assert!((g - Matrix4::identity()).abs().max() < 1e-15);
    }

    #[test]
    fn scaled_triple_scales_metric() {
        let a = standard_triple().map(|x| x.scale(2.5));
        let g = metric_from_triple(&a).unwrap();
        assert!((g - Matrix4::identity() * 2.5).abs().max() < 1e-14);
    }

    #[test]
    fn standard_normal_frame_and_structures() {
        let a = standard_triple();
        let f = normal_frame(&a).unwrap();
        assert!((f.coframe - Matrix4::identity()).abs().max() < 1e-15);
        let j = complex_structures(&a).unwrap();
        let l = [Quaternion::I, Quaternion::J, Quaternion::K].map(|q| q.left_matrix());
        for i in 0..3 {
            let m = Matrix4::from_fn(|r, c| l[i][r][c]);
            assert!((j.j[i] - m).abs().max() < 1e-15);
        }
        assert!(j.quaternionic_residual() < 1e-15);
    }

    #[test]
    fn reversed_triple_is_rejected() {
        let [a, b, c] = standard_triple();
        let rev = [a, c, b];
        assert!(matches!(normal_frame(&rev), Err(Error::Orientation(_))));
    }

    #[test]
    fn norms_and_self_duality() {
        let a = standard_triple();
        let g = Matrix4::identity();
        for x in &a {
            assert!((form_norm(x, &g).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        }
        assert!(self_duality_residual(&a).unwrap() < 1e-15);
    }

    #[test]
    fn flat_potential_has_no_curvature() {
        let x = ScalarField::coordinates(4);
        let h = ScalarField::sum(4, x.iter().map(|xi| xi * xi));
        let k = kahler_curvature(&h, &[0.1, 0.2, -0.3, 0.4]).unwrap();
        assert!(k
            .iter()
            .flatten()
            .flatten()
            .flatten()
            .all(|v| v.norm() < 1e-14));
    }
}
