use nalgebra::{Matrix3, Matrix4};
use proptest::prelude::*;
use tautlab::contact::{extract_structure, tautness_residuals};
use tautlab::forms::{ChartMap, DifferentialForm, FormValue, VectorField};
use tautlab::hk::{
    complex_structures, conformal_residuals, contact_sphere_from_triple, form_norm,
    kahler_curvature, kahler_metric, lift, matrix_two_form, metric_from_structure,
    metric_from_triple, normal_frame, self_duality_residual, standard_flat_triple, standard_triple,
    two_form_matrix, T_AXIS,
};
use tautlab::jets::ScalarField;
use tautlab::models::{
    cartan_chart_sphere, family_sphere, gh_example, hyperplane_sphere, SphereChart,
};
use tautlab::quat::Quaternion;
use tautlab::sampling::{rng, BoxDomain};
use tautlab::Error;

fn sample(n: usize, seed: u64) -> Vec<Vec<f64>> {
    BoxDomain::cube(3, 1.0).sample(n, &mut rng(seed))
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `Eᵀ Aᵢ E`, rotated by `R`, for the standard triple.
fn transformed_triple(e: &Matrix4<f64>, r: &Matrix3<f64>) -> [FormValue; 3] {
    let std = standard_triple().map(|a| two_form_matrix(&a));
    [0, 1, 2].map(|i| {
        let m = (0..3).fold(Matrix4::zeros(), |acc, k| acc + std[k] * r[(i, k)]);
        matrix_two_form(&(e.transpose() * m * e))
    })
}

fn invertible() -> impl Strategy<Value = Matrix4<f64>> {
    prop::collection::vec(-1.0..1.0f64, 16)
        .prop_map(|v| Matrix4::from_column_slice(&v) + Matrix4::identity() * 2.5)
        .prop_filter("well conditioned", |m| m.determinant().abs() > 0.5)
}

fn rotation() -> impl Strategy<Value = Matrix3<f64>> {
    [-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64]
        .prop_filter("nonzero", |a| a.iter().map(|x| x * x).sum::<f64>() > 0.01)
        .prop_map(|a| {
            let r = Quaternion::from_array(a)
                .normalize()
                .unwrap()
                .rotation_matrix();
            Matrix3::from_fn(|i, j| r[i][j])
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn triple_metric_is_equivariant(e in invertible(), r in rotation()) {
        let a = transformed_triple(&e, &r);
        let g = metric_from_triple(&a).unwrap();
        let expected = e.transpose() * e;
        let scale = expected.abs().max();
        let sign = e.determinant().signum();
        prop_assert!((g - expected * sign).abs().max() < 1e-9 * scale);
        prop_assert!(max_abs(&conformal_residuals(&a).unwrap()) < 1e-10);
    }

    #[test]
    fn oriented_triples_have_a_normal_frame(e in invertible(), r in rotation()) {
        prop_assume!(e.determinant() > 0.0);
        let a = transformed_triple(&e, &r);
        let frame = normal_frame(&a).unwrap();
        let scale = e.abs().max().powi(2);
        prop_assert!(frame.residual < 1e-9 * scale);
        let js = complex_structures(&a).unwrap();
        prop_assert!(js.quaternionic_residual() < 1e-8 * scale);
        let g = metric_from_triple(&a).unwrap();
        prop_assert!(js.compatibility_residual(&g) < 1e-8 * scale);
        for x in &a {
            prop_assert!((form_norm(x, &g).unwrap() - 2f64.sqrt()).abs() < 1e-9);
        }
        prop_assert!(self_duality_residual(&a).unwrap() < 1e-9 * scale);
    }
}

#[test]
fn reversed_triple_is_rejected() {
    let [a, b, c] = standard_triple();
    let swapped = [b, a, c];
    assert!(matches!(normal_frame(&swapped), Err(Error::Orientation(_))));
    let neg = standard_triple().map(|x| x.scale(-1.0));
    assert!(normal_frame(&neg).is_err());
}

#[test]
fn j_convention_on_the_standard_triple() {
    // g(v, w) = A₁(v, J₁w) with J₁∂₀ = ∂₁
    let js = complex_structures(&standard_triple()).unwrap();
    let e0 = nalgebra::Vector4::new(1.0, 0.0, 0.0, 0.0);
    let j1e0 = js.j[0] * e0;
    assert!(
        (j1e0 - nalgebra::Vector4::new(0.0, 1.0, 0.0, 0.0))
            .abs()
            .max()
            < 1e-15
    );
    assert!(js.quaternionic_residual() < 1e-15);
}

#[test]
fn lift_round_trip() {
    let cs = family_sphere(0.3, SphereChart::North);
    let pts = sample(6, 20);
    let cyl = lift(&cs);
    let dt = VectorField::coordinate(4, T_AXIS);
    let back =
        contact_sphere_from_triple(&cyl, &dt, &ChartMap::hyperplane(4, T_AXIS, 0.0), &pts).unwrap();
    for p in &pts {
        for i in 0..3 {
            let d = &cs.alpha(i).at(p).unwrap() - &back.alpha(i).at(p).unwrap();
            assert!(d.max_abs() < 1e-13);
        }
        let q = [p[0], p[1], p[2], 0.4];
        assert!(cyl.closedness_residual(&q).unwrap() < 1e-12);
        assert!(cyl.tri_liouville_residual(&dt, &q).unwrap() < 1e-12);
        assert!(max_abs(&conformal_residuals(&cyl.values(&q).unwrap()).unwrap()) < 1e-12);
    }
}

#[test]
fn lift_metric_is_the_triple_metric() {
    let cs = cartan_chart_sphere();
    let pts = sample(5, 21);
    let s = extract_structure(&cs, &pts).unwrap();
    let g = metric_from_structure(&cs, &s).unwrap();
    let t = lift(&cs);
    for p in &pts {
        let q = [p[0], p[1], p[2], -0.3];
        let a = metric_from_triple(&t.values(&q).unwrap()).unwrap();
        let b = g.at(&q).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((a[(i, j)] - b[(i, j)]).abs() < 1e-12, "{i}{j}");
            }
        }
    }
}

#[test]
fn flat_triple_restricts_to_the_hyperplane_sphere() {
    let y = VectorField::euler(&[0.5; 4]);
    let pts = sample(6, 22);
    let cs = contact_sphere_from_triple(
        &standard_flat_triple(),
        &y,
        &ChartMap::hyperplane(4, 0, 1.0),
        &pts,
    )
    .unwrap();
    let h = hyperplane_sphere();
    for p in &pts {
        for i in 0..3 {
            let d = &cs.alpha(i).at(p).unwrap() - &h.alpha(i).at(p).unwrap().scale(0.5);
            assert!(d.max_abs() < 1e-14);
        }
    }
}

#[test]
fn tangent_liouville_field_is_rejected() {
    let err = contact_sphere_from_triple(
        &standard_flat_triple(),
        &VectorField::coordinate(4, 1),
        &ChartMap::hyperplane(4, 0, 1.0),
        &[vec![0.1, 0.2, 0.3]],
    );
    assert!(matches!(err, Err(Error::NotTransverse { .. })));
}

#[test]
fn gh_contraction_identity() {
    // Y⌟(Ωᵢ∧Ωᵢ) = 2αᵢ∧dαᵢ with αᵢ = Y⌟Ωᵢ
    let ex = gh_example();
    let t = ex.data.triple();
    for q in [[0.3, 1.2, -0.4, 0.5], [-1.0, 2.5, 0.7, -0.2]] {
        assert!(t.tri_liouville_residual(&ex.liouville, &q).unwrap() < 1e-13);
        for o in t.omegas() {
            let a: DifferentialForm = o.interior(&ex.liouville);
            let lhs = o.wedge(o).unwrap().interior(&ex.liouville);
            let rhs = a.wedge(&a.ext_d()).unwrap().scale(2.0);
            assert!((&lhs.at(&q).unwrap() - &rhs.at(&q).unwrap()).max_abs() < 1e-12);
        }
    }
    let pts = ex.domain.sample(10, &mut rng(23));
    let cs = ex.contact_sphere(&pts).unwrap();
    for p in &pts {
        assert!(max_abs(&tautness_residuals(&cs, p).unwrap()) < 1e-10);
    }
}

#[test]
fn quadratic_potential_is_flat() {
    let x = ScalarField::coordinates(4);
    let h = ScalarField::sum(4, x.iter().map(|v| v * v));
    let k = kahler_curvature(&h, &[0.3, -0.1, 0.7, 0.2]).unwrap();
    assert!(k
        .iter()
        .flatten()
        .flatten()
        .flatten()
        .all(|v| v.norm() < 1e-13));
    let g = kahler_metric(&h, &[0.0; 4]).unwrap();
    assert!((g[0][0].re - 0.5).abs() < 1e-15 && g[0][1].norm() < 1e-15);
}

#[test]
fn curvature_is_linear_in_the_potential() {
    let x = ScalarField::coordinates(4);
    let r2 = ScalarField::sum(4, x.iter().map(|v| v * v));
    let h = &r2 + &(&x[0] * &x[0]).powi(2).scale(0.3);
    let p = [0.4, 0.2, -0.3, 0.1];
    let k1 = kahler_curvature(&h, &p).unwrap();
    let k2 = kahler_curvature(&h.scale(2.0), &p).unwrap();
    let mut nonzero = false;
    for (a, b) in k1
        .iter()
        .flatten()
        .flatten()
        .flatten()
        .zip(k2.iter().flatten().flatten().flatten())
    {
        assert!((b - a * 2.0).norm() < 1e-12);
        nonzero |= a.norm() > 1e-3;
    }
    assert!(nonzero);
}
