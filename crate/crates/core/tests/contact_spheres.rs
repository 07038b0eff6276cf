use tautlab::contact::{
    extract_structure, is_cartan, long_metric, normalise, reeb_field, reeb_vector_field,
    short_metric, tautness_residuals, ContactSphere,
};
use tautlab::forms::{ChartMap, DifferentialForm};
use tautlab::jets::ScalarField;
use tautlab::models::{
    cartan_chart_sphere, family_sphere, gh_example, hyperplane_sphere, SphereChart,
};
use tautlab::sampling::{rng, BoxDomain};
use tautlab::Error;

fn sample(n: usize, seed: u64) -> Vec<Vec<f64>> {
    BoxDomain::cube(3, 1.0).sample(n, &mut rng(seed))
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `(x dθ + y dz − z dy, …)` on `S¹ × S²` in the chart
/// `(θ, y, z) ↦ (θ, √(1 − y² − z²), y, z)`.
fn s1_s2_sphere() -> ContactSphere {
    let c = ScalarField::coordinates(4);
    let (x, y, z) = (&c[1], &c[2], &c[3]);
    let d = |i| DifferentialForm::dx(4, i);
    let alphas = [
        &(&d(0).mul_fn(x) + &d(3).mul_fn(y)) - &d(2).mul_fn(z),
        &(&d(0).mul_fn(y) + &d(1).mul_fn(z)) - &d(3).mul_fn(x),
        &(&d(0).mul_fn(z) + &d(2).mul_fn(x)) - &d(1).mul_fn(y),
    ];
    let s = ScalarField::coordinates(3);
    let r2 = &s[1] * &s[1] + &s[2] * &s[2];
    let phi = ChartMap::new(
        3,
        vec![
            s[0].clone(),
            (ScalarField::one(3) - r2).sqrt(),
            s[1].clone(),
            s[2].clone(),
        ],
    );
    ContactSphere::new(alphas.map(|a| a.pullback(&phi).unwrap())).unwrap()
}

#[test]
fn s1_times_s2_sphere_is_not_taut() {
    let r = tautness_residuals(&s1_s2_sphere(), &[0.4, 0.3, -0.2]).unwrap();
    assert!(max_abs(&r) > 0.1, "{r:?}");
}

#[test]
fn family_is_taut_in_every_chart() {
    for nu in [0.0, 0.3, 1.0] {
        for chart in [
            SphereChart::North,
            SphereChart::South,
            SphereChart::Gnomonic,
        ] {
            let cs = family_sphere(nu, chart);
            for p in sample(5, 3) {
                assert!(max_abs(&tautness_residuals(&cs, &p).unwrap()) < 1e-10);
            }
        }
    }
}

#[test]
fn family_lambda_matches_closed_form() {
    for nu in [0.0, 0.3, 1.0] {
        let s = extract_structure(&family_sphere(nu, SphereChart::South), &sample(10, 4)).unwrap();
        let expected = 2.0 / (1.0 + 4.0 * nu * nu);
        for p in &s.points {
            assert!((p.lambda - expected).abs() < 1e-12);
        }
        assert!(
            s.residual < 1e-12 && s.agreement < 1e-12,
            "{} {}",
            s.residual,
            s.agreement
        );
    }
}

#[test]
fn degenerate_triple_is_reported() {
    let cs = hyperplane_sphere();
    let a = cs.alpha(0).clone();
    let bad = ContactSphere::new([a.clone(), a, cs.alpha(2).clone()]).unwrap();
    assert!(matches!(
        tautness_residuals(&bad, &[0.1, 0.2, 0.3]),
        Err(Error::DegenerateVolume { .. })
    ));
}

#[test]
fn hyperplane_sphere_is_taut_but_cartan_only_at_the_origin() {
    let cs = hyperplane_sphere();
    for p in sample(10, 5) {
        assert!(max_abs(&tautness_residuals(&cs, &p).unwrap()) < 1e-13);
        let lam = extract_structure(&cs, std::slice::from_ref(&p))
            .unwrap()
            .points[0]
            .lambda;
        let r2: f64 = p.iter().map(|x| x * x).sum();
        assert!((lam - 2.0 / (1.0 + r2)).abs() < 1e-13);
    }
    assert!(is_cartan(&cs, &[vec![0.0; 3]], 1e-12).unwrap().is_cartan);
    assert!(
        !is_cartan(&cs, &[vec![0.5, 0.1, 0.0]], 1e-6)
            .unwrap()
            .is_cartan
    );
}

#[test]
fn cartan_sphere_normalisation_and_metrics() {
    let cs = cartan_chart_sphere();
    let pts = sample(10, 6);
    let two = normalise(&cs, 2.0, &pts).unwrap();
    for p in &pts {
        let (a, b) = (cs.alpha(0).at(p).unwrap(), two.alpha(0).at(p).unwrap());
        assert!((&a - &b).max_abs() < 1e-14);
    }
    let one = normalise(&cs, 1.0, &pts).unwrap();
    let fresh = sample(10, 7);
    let s = extract_structure(&one, &fresh).unwrap();
    assert!(s.points.iter().all(|p| (p.lambda - 1.0).abs() < 1e-12));
    let gs = short_metric(&one, &pts, 1e-10).unwrap();
    let gl = long_metric(&one, &pts, 1e-10).unwrap();
    for p in &fresh {
        assert!((gs.at(p).unwrap() - gl.at(p).unwrap()).abs().max() < 1e-12);
        let r = reeb_field(one.alpha(0), p).unwrap();
        assert!((gl.inner(p, &r, &r).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn cartan_reeb_fields_are_dual() {
    let cs = cartan_chart_sphere();
    for p in sample(10, 8) {
        for j in 0..3 {
            let r = reeb_field(cs.alpha(j), &p).unwrap();
            for i in 0..3 {
                let v = cs.alpha(i).at(&p).unwrap().eval(&[&r]);
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((v - expected).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn reeb_field_at_origin() {
    let r = reeb_field(hyperplane_sphere().alpha(0), &[0.0; 3]).unwrap();
    assert_eq!(r, [1.0, 0.0, 0.0]);
    let field = reeb_vector_field(hyperplane_sphere().alpha(0)).unwrap();
    let v = field.at(&[0.3, -0.2, 0.1]).unwrap();
    let r = reeb_field(hyperplane_sphere().alpha(0), &[0.3, -0.2, 0.1]).unwrap();
    assert!(v.iter().zip(&r).all(|(a, b)| (a - b).abs() < 1e-14));
}

#[test]
fn nonzero_nu_is_not_cartan() {
    let pts = sample(10, 9);
    assert!(
        is_cartan(&family_sphere(0.0, SphereChart::Gnomonic), &pts, 1e-10)
            .unwrap()
            .is_cartan
    );
    assert!(
        !is_cartan(&family_sphere(0.5, SphereChart::Gnomonic), &pts, 1e-10)
            .unwrap()
            .is_cartan
    );
}

#[test]
fn nonconstant_rescale_breaks_cartan() {
    let x = ScalarField::coordinate(3, 0);
    let v = &(&x * &x).scale(0.25) + 1.0;
    let cs = cartan_chart_sphere().scale_by(&v);
    let pts = sample(10, 10);
    assert!(!is_cartan(&cs, &pts, 1e-6).unwrap().is_cartan);
    let s = extract_structure(&cs, &pts).unwrap();
    assert!(s.points.iter().any(|p| max_abs(&p.b) > 1e-3));
}

#[test]
fn gh_sphere_structure_and_normalisation() {
    let ex = gh_example();
    let pts = ex.domain.sample(20, &mut rng(11));
    let cs = ex.contact_sphere(&pts).unwrap();
    let s = extract_structure(&cs, &pts).unwrap();
    assert!(s.residual < 1e-9);
    assert!(s
        .points
        .iter()
        .all(|p| p.lambda > 0.0 && p.lambda.is_finite()));
    let one = normalise(&cs, 1.0, &pts).unwrap();
    let fresh = ex.domain.sample(20, &mut rng(12));
    let t = extract_structure(&one, &fresh).unwrap();
    assert!(t.points.iter().all(|p| (p.lambda - 1.0).abs() < 1e-8));
}
