use num_complex::Complex64;
use proptest::prelude::*;
use tautlab::forms::{ChartMap, DifferentialForm};
use tautlab::jets::ScalarField;
use tautlab::models::{delta_circle, nu_family_forms};
use tautlab::quat::{nu_family_qform, Quaternion};

fn quaternion() -> impl Strategy<Value = Quaternion> {
    [-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64].prop_map(Quaternion::from_array)
}

fn unit() -> impl Strategy<Value = Quaternion> {
    quaternion()
        .prop_filter("nonzero", |q| q.norm() > 0.1)
        .prop_map(|q| q.normalize().unwrap())
}

fn point4() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.5..1.5f64, 4)
}

fn gap(a: Quaternion, b: Quaternion) -> f64 {
    (a - b).to_array().iter().fold(0.0, |m, x| m.max(x.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn multiplication_is_associative(a in quaternion(), b in quaternion(), c in quaternion()) {
        prop_assert!(gap((a * b) * c, a * (b * c)) < 1e-12);
    }

    #[test]
    fn norm_is_multiplicative(a in quaternion(), b in quaternion()) {
        prop_assert!(((a * b).norm() - a.norm() * b.norm()).abs() < 1e-12);
        prop_assert!(gap((a * b).conj(), b.conj() * a.conj()) < 1e-12);
    }

    #[test]
    fn rotation_is_a_double_cover(u in unit(), v in prop::array::uniform3(-1.0..1.0f64)) {
        prop_assert_eq!(u.rotation_matrix(), (-u).rotation_matrix());
        let w = Quaternion::from_rotation_matrix(&u.rotation_matrix());
        prop_assert!(gap(w, u).min(gap(w, -u)) < 1e-10);
        let r = u.rotate(v).unwrap();
        let direct = (u * Quaternion::pure(v) * u.conj()).imaginary();
        for i in 0..3 {
            prop_assert!((r[i] - direct[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn conjugation_preserves_sum_of_squares(u in unit(), p in point4(), v in point4()) {
        let f = nu_family_qform(0.4);
        let g = f.conjugation_action(u).unwrap();
        let a = f.eval(&p, &[&v]).unwrap();
        let b = g.eval(&p, &[&v]).unwrap();
        prop_assert!((a.norm_sq() - b.norm_sq()).abs() < 1e-10 * (1.0 + a.norm_sq()));
        prop_assert!(b.w.abs() < 1e-12);
    }

    #[test]
    fn conjugation_composes(u in unit(), w in unit(), p in point4(), v in point4()) {
        let f = nu_family_qform(-0.3);
        let twice = f.conjugation_action(u).unwrap().conjugation_action(w).unwrap();
        let once = f.conjugation_action(w * u).unwrap();
        let (a, b) = (twice.eval(&p, &[&v]).unwrap(), once.eval(&p, &[&v]).unwrap());
        prop_assert!(gap(a, b) < 1e-10);
        let flipped = f.conjugation_action(-u).unwrap().eval(&p, &[&v]).unwrap();
        prop_assert!(gap(flipped, f.conjugation_action(u).unwrap().eval(&p, &[&v]).unwrap()) < 1e-12);
    }

    #[test]
    fn right_multiplication_by_j_reverses_nu(nu in -1.0..1.0f64, p in point4()) {
        // q j = (−y, −z, w, x) for q = (w, x, y, z)
        let x = ScalarField::coordinates(4);
        let phi = ChartMap::new(4, vec![-&x[2], -&x[3], x[0].clone(), x[1].clone()]);
        let pulled = nu_family_forms(nu).map(|f| f.pullback(&phi).unwrap());
        let flipped = nu_family_forms(-nu);
        for i in 0..3 {
            let d = &pulled[i].at(&p).unwrap() - &flipped[i].at(&p).unwrap();
            prop_assert!(d.max_abs() < 1e-12, "{i}");
        }
    }
}

#[test]
fn first_component_in_coordinates() {
    // ½F₁ = ½(x₀dx₁ − x₁dx₀ + x₂dx₃ − x₃dx₂) − ν(x₀dx₀ + x₁dx₁ − x₂dx₂ − x₃dx₃)
    let nu = 0.35;
    let x = ScalarField::coordinates(4);
    let d = |i| DifferentialForm::dx(4, i);
    let rot = [(0, 1, 1.0), (1, 0, -1.0), (2, 3, 1.0), (3, 2, -1.0)];
    let mut expected = DifferentialForm::zero(4, 1);
    for (c, v, s) in rot {
        expected = &expected + &d(v).mul_fn(&x[c].scale(0.5 * s));
    }
    for (i, s) in [(0, 1.0), (1, 1.0), (2, -1.0), (3, -1.0)] {
        expected = &expected - &d(i).mul_fn(&x[i].scale(nu * s));
    }
    let half = nu_family_forms(nu)[0].scale(0.5);
    for p in [
        [0.3, -0.2, 1.1, 0.5],
        [1.0, 0.0, 0.0, 0.0],
        [-0.7, 0.4, 0.2, -0.9],
    ] {
        let diff = &half.at(&p).unwrap() - &expected.at(&p).unwrap();
        assert!(diff.max_abs() < 1e-14, "{p:?}");
    }
}

#[test]
fn remaining_components_are_the_delta_circle() {
    // ½F₂ + i ½F₃ = (½ + iν)z₁dz₂ − (½ − iν)z₂dz₁
    let nu = 0.7;
    let f = nu_family_forms(nu);
    let [re, im] = delta_circle(Complex64::new(0.0, nu));
    for p in [[0.3, -0.2, 1.1, 0.5], [0.9, 0.1, -0.4, 0.2]] {
        let a = &f[1].scale(0.5).at(&p).unwrap() - &re.at(&p).unwrap();
        let b = &f[2].scale(0.5).at(&p).unwrap() - &im.at(&p).unwrap();
        assert!(a.max_abs() < 1e-14 && b.max_abs() < 1e-14, "{p:?}");
    }
}

#[test]
fn basis_relations() {
    let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
    assert_eq!(i * j, k);
    assert_eq!(j * k, i);
    assert_eq!(k * i, j);
    assert_eq!(i * j * k, -Quaternion::ONE);
    assert!(Quaternion::new(0.0, 0.0, 0.0, 0.0).inverse().is_err());
    assert!(Quaternion::new(2.0, 0.0, 0.0, 0.0).check_unit().is_err());
}
