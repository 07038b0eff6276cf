//! Verification suites behind the subcommands.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use rayon::prelude::*;
use tautlab::contact::{
    extract_structure, fit_structure, is_cartan, normalise, reeb_vector_field, short_metric,
    tautness_from_values, ContactSphere, CYCLIC,
};
use tautlab::hk::{conformal_residuals, kahler_curvature, metric_from_structure};
use tautlab::jets::ScalarField;
use tautlab::models::{
    eq_k_residual, eq_w_residual, family_lambda, family_sphere, gh_example, helmholtz_residual,
    kahler_ma_residual, kahler_potential, legendre_k, ma_residual_jet, mercator_to_polar,
    mercator_w, moduli, sample_h, sample_h_jet, sample_u, transform_t, transform_t_inv,
    SphereChart,
};
use tautlab::sampling::{rng, unit_vector, BoxDomain, SampleRng};
use tautlab::Result;

use crate::report::{Check, ModuliSummary, Report};

/// Flags shared by every suite.
#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub seed: u64,
    /// Overrides every default tolerance.
    pub tol: Option<f64>,
    pub samples: usize,
}

impl Settings {
    fn check(&self, name: &str, default_tol: f64) -> Check {
        Check::new(name, self.tol.unwrap_or(default_tol))
    }

    fn rng(&self) -> SampleRng {
        rng(self.seed)
    }
}

/// Evaluates `f` at every point in parallel and records in input order.
fn sweep<F>(check: &mut Check, points: &[Vec<f64>], f: F) -> Result<()>
where
    F: Fn(&[f64]) -> Result<Vec<f64>> + Sync,
{
    let results: Vec<Result<Vec<f64>>> = points.par_iter().map(|p| f(p)).collect();
    for (p, r) in points.iter().zip(results) {
        check.record(p, r)?;
    }
    Ok(())
}

fn sweep_one<F>(check: &mut Check, points: &[Vec<f64>], f: F) -> Result<()>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    sweep(check, points, |p| f(p).map(|r| vec![r]))
}

/// `n × m` grid of cell centres of a box.
fn grid(lo: [f64; 2], hi: [f64; 2], (n, m): (usize, usize)) -> Vec<Vec<f64>> {
    BoxDomain::new(lo.to_vec(), hi.to_vec()).grid(&[n, m])
}

/// Grid of `U′` with `|s₁| ≤ 1.2` and `1.1 ≤ s₂/cos s₁ ≤ 2.5`.
fn u_prime_points(g: (usize, usize)) -> Vec<Vec<f64>> {
    grid([-1.2, 1.1], [1.2, 2.5], g)
        .into_iter()
        .map(|p| vec![p[0], p[1] * p[0].cos()])
        .collect()
}

fn pair(p: &[f64]) -> [f64; 2] {
    [p[0], p[1]]
}

/// Tautness residuals and the spread of the contact ratio over `lambdas`.
fn taut_checks(
    cs: &ContactSphere,
    points: &[Vec<f64>],
    lambdas: &[[f64; 3]],
    taut: &mut Check,
    spread: &mut Check,
) -> Result<()> {
    let values: Vec<_> = points.par_iter().map(|p| cs.values(p)).collect();
    for (p, v) in points.iter().zip(values) {
        let v = v?;
        taut.record(p, Ok(tautness_from_values(&v).to_vec()))?;
        let ratios: Vec<f64> = lambdas.iter().map(|l| v.contact_ratio(l)).collect();
        let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        spread.record_one(p, Ok(hi - lo))?;
    }
    Ok(())
}

fn unit_lambdas(r: &mut SampleRng, n: usize) -> Vec<[f64; 3]> {
    (0..n)
        .map(|_| {
            let v = unit_vector(3, r);
            [v[0], v[1], v[2]]
        })
        .collect()
}

/// Tautness, Λ-constancy and flatness of the ν-family sphere.
pub fn verify_family(s: &Settings, nu: f64) -> Result<Report> {
    let mut rep = Report::new("verify family", s.seed);
    rep.param("nu", nu);
    rep.param("samples", s.samples);
    let mut r = s.rng();
    let lambdas = unit_lambdas(&mut r, 100);
    let mut taut = s.check("tautness", 1e-9);
    let mut spread = s.check("contact spread", 1e-9);
    let mut lam = s.check("lambda constancy", 1e-10);
    let expected = family_lambda(nu);
    for chart in SphereChart::STEREOGRAPHIC {
        let cs = family_sphere(nu, chart);
        let pts = BoxDomain::cube(3, 1.5).sample(s.samples, &mut r);
        taut_checks(&cs, &pts, &lambdas, &mut taut, &mut spread)?;
        sweep_one(&mut lam, &pts, |p| {
            Ok(fit_structure(&cs.values(p)?)?.lambda - expected)
        })?;
    }
    let mut flat = s.check("flatness", 1e-8);
    let cs = family_sphere(nu, SphereChart::North);
    let structure = extract_structure(&cs, &BoxDomain::cube(3, 1.0).sample(8, &mut r))?;
    let g = metric_from_structure(&cs, &structure)?;
    let pts = BoxDomain::cube(4, 1.0).sample(s.samples.min(20), &mut r);
    sweep_one(&mut flat, &pts, |p| Ok(g.riemann(p)?.max_abs()))?;
    rep.checks = vec![taut, spread, lam, flat];
    Ok(rep)
}

/// The Gibbons–Hawking example `V = x₁`, `β = x₃dx₂`.
pub fn verify_gh(s: &Settings) -> Result<Report> {
    let mut rep = Report::new("verify gh", s.seed);
    rep.param("samples", s.samples);
    let ex = gh_example();
    let t = ex.data.triple();
    let mut r = s.rng();
    let dom4 = BoxDomain::new(vec![-1.0, 0.5, -1.0, -1.0], vec![1.0, 3.0, 1.0, 1.0]);
    let pts4 = dom4.sample(s.samples, &mut r);
    let mut closed = s.check("closedness", 1e-12);
    let mut conf = s.check("conformal triple", 1e-10);
    let mut liou = s.check("tri-Liouville", 1e-10);
    sweep_one(&mut closed, &pts4, |p| t.closedness_residual(p))?;
    sweep(&mut conf, &pts4, |p| {
        Ok(conformal_residuals(&t.values(p)?)?.to_vec())
    })?;
    sweep_one(&mut liou, &pts4, |p| {
        t.tri_liouville_residual(&ex.liouville, p)
    })?;
    let pts = ex.domain.sample(s.samples, &mut r);
    let cs = ex.contact_sphere(&pts)?;
    let mut taut = s.check("tautness", 1e-9);
    sweep(&mut taut, &pts, |p| {
        Ok(tautness_from_values(&cs.values(p)?).to_vec())
    })?;
    let mut gauss = s.check("gauss curvature", 1e-8);
    let sigma = ex.surface_metric();
    let line: Vec<Vec<f64>> = [1.0, 2.0, 3.0].iter().map(|&x| vec![0.0, x]).collect();
    sweep_one(&mut gauss, &line, |p| {
        Ok(sigma.riemann(p)?.gauss()? + p[1].powi(-3))
    })?;
    rep.checks = vec![closed, conf, liou, taut, gauss];
    Ok(rep)
}

/// Partials of the sample `h` at `(0, √2)`.
const H_TABLE: [(&[usize], f64); 6] = [
    (&[1], 1.0),
    (&[1, 1], SQRT_2),
    (&[1, 1, 1], -1.0),
    (&[1, 1, 1, 1], 3.0 * SQRT_2),
    (&[0, 1], 0.0),
    (&[0, 1, 1], 0.0),
];

/// The Monge–Ampère / Helmholtz chain on grids.
pub fn verify_helmholtz(s: &Settings, g: (usize, usize)) -> Result<Report> {
    let mut rep = Report::new("verify helmholtz", s.seed);
    rep.param("grid", format!("{}x{}", g.0, g.1));
    let pts = u_prime_points(g);
    let mut ma = s.check("MA2", 1e-9);
    let mut round = s.check("T round trip", 1e-10);
    let mut chain = s.check("chain commutation", 1e-8);
    let mut eqk = s.check("eq-k", 1e-8);
    let mut eqw = s.check("eq-w", 1e-8);
    sweep_one(&mut ma, &pts, |p| {
        ma_residual_jet(&sample_h_jet(pair(p), 4)?)
    })?;
    sweep_one(&mut round, &pts, |p| {
        let h = sample_h_jet(pair(p), 4)?;
        Ok(transform_t_inv(&transform_t(&h)?)?.distance(&h))
    })?;
    sweep_one(&mut chain, &pts, |p| {
        let h = sample_h_jet(pair(p), 4)?;
        let direct = transform_t(&h)?;
        Ok(mercator_to_polar(&mercator_w(&legendre_k(&h)?)?)?.distance(&direct))
    })?;
    sweep_one(&mut eqk, &pts, |p| {
        eq_k_residual(&legendre_k(&sample_h_jet(pair(p), 4)?)?)
    })?;
    sweep_one(&mut eqw, &pts, |p| {
        eq_w_residual(&mercator_w(&legendre_k(&sample_h_jet(pair(p), 4)?)?)?)
    })?;
    let mut table = s.check("derivative table", 1e-10);
    let at = vec![0.0, SQRT_2];
    table.record(
        &at,
        sample_h_jet(pair(&at), 4).map(|h| {
            let mut r: Vec<f64> = H_TABLE.iter().map(|(v, e)| h.partial(v) - e).collect();
            r.push(h.value() + h.partial(&[0, 0]) - SQRT_2);
            r
        }),
    )?;
    let mut helm = s.check("helmholtz", 1e-9);
    let u = sample_u();
    sweep_one(&mut helm, &grid([0.3, -1.5], [2.8, 1.5], g), |p| {
        helmholtz_residual(&u, pair(p))
    })?;
    let mut curv = s.check("kahler curvature", 1e-6);
    curv.record_one(&KAHLER_POINT, kahler_k2222(&kahler_potential(&sample_h())))?;
    rep.checks = vec![ma, round, chain, eqk, eqw, table, helm, curv];
    Ok(rep)
}

/// `(0, √2/2)` in `ℂ²`.
const KAHLER_POINT: [f64; 4] = [0.0, 0.0, SQRT_2 / 2.0, 0.0];

/// `|K₂̄₂₂̄₂ + √2|` at [`KAHLER_POINT`].
fn kahler_k2222(hk: &ScalarField) -> Result<f64> {
    let k = kahler_curvature(hk, &KAHLER_POINT)?[1][1][1][1];
    Ok((k - Complex64::new(-SQRT_2, 0.0)).norm())
}

/// The `ν = 0` Cartan sphere: `β = 0`, `Λ = 2`, Reeb brackets and `K = ¼`.
pub fn verify_cartan(s: &Settings) -> Result<Report> {
    let mut rep = Report::new("verify cartan", s.seed);
    rep.param("samples", s.samples);
    let cs = tautlab::models::cartan_chart_sphere();
    let mut r = s.rng();
    let pts = BoxDomain::cube(3, 1.0).sample(s.samples, &mut r);
    let mut beta = s.check("beta", 1e-10);
    let mut lam = s.check("lambda", 1e-10);
    sweep(&mut beta, &pts, |p| {
        Ok(fit_structure(&cs.values(p)?)?.b.to_vec())
    })?;
    sweep_one(&mut lam, &pts, |p| {
        Ok(fit_structure(&cs.values(p)?)?.lambda - 2.0)
    })?;
    let mut cartan = s.check("cartan ratios", 1e-10);
    sweep_one(&mut cartan, &pts, |p| {
        Ok(is_cartan(&cs, &[p.to_vec()], f64::INFINITY)?.residual)
    })?;
    let reeb = cs
        .alphas()
        .iter()
        .map(reeb_vector_field)
        .collect::<Result<Vec<_>>>()?;
    let two = ScalarField::constant(3, 2.0);
    let brackets: Vec<_> = CYCLIC
        .iter()
        .map(|&(i, j, k)| &reeb[i].bracket(&reeb[j]) + &reeb[k].scale_by(&two))
        .collect();
    let mut bracket = s.check("reeb bracket", 1e-8);
    sweep(&mut bracket, &pts, |p| {
        let mut out = Vec::new();
        for b in &brackets {
            out.extend(b.at(p)?);
        }
        Ok(out)
    })?;
    let one = normalise(&cs, 1.0, &pts)?;
    let gs = short_metric(&one, &pts, 1e-10)?;
    let planes: Vec<_> = pts
        .iter()
        .map(|_| (unit_vector(3, &mut r), unit_vector(3, &mut r)))
        .collect();
    let mut curv = s.check("sectional curvature", 1e-7);
    let results: Vec<Result<f64>> = pts
        .par_iter()
        .zip(&planes)
        .map(|(p, (u, v))| Ok(gs.riemann(p)?.sectional(u, v)? - 0.25))
        .collect();
    for (p, res) in pts.iter().zip(results) {
        curv.record_one(p, res)?;
    }
    rep.checks = vec![beta, lam, cartan, bracket, curv];
    Ok(rep)
}

/// Extension test for the modulus `δ`, with tautness checks on the emitted
/// sphere when it extends.
pub fn report_moduli(s: &Settings, delta: Complex64) -> Result<Report> {
    let mut rep = Report::new("report moduli", s.seed);
    rep.param("delta", format!("{delta}"));
    let m = moduli(delta)?;
    let c = m.point.delta();
    let sq = m.point.delta_sq();
    rep.moduli = Some(ModuliSummary {
        delta: [delta.re, delta.im],
        canonical: [c.re, c.im],
        delta_sq: [sq.re, sq.im],
        inside_parabola: m.point.inside_parabola(),
        extends_to_sphere: m.extends,
        nu: m.point.nu(),
        candidate_residual: m.candidate_residual,
    });
    if let Some(cs) = &m.sphere {
        rep.param("samples", s.samples);
        let mut r = s.rng();
        let lambdas = unit_lambdas(&mut r, 100);
        let pts = BoxDomain::cube(3, 1.5).sample(s.samples, &mut r);
        let mut taut = s.check("tautness", 1e-9);
        let mut spread = s.check("contact spread", 1e-9);
        taut_checks(cs, &pts, &lambdas, &mut taut, &mut spread)?;
        rep.checks = vec![taut, spread];
    }
    Ok(rep)
}

/// `det H_{zz̄} = e^{4x₀}` over the image of a `U′` grid, and `K₂̄₂₂̄₂`.
pub fn curvature_kahler(s: &Settings, g: (usize, usize)) -> Result<Report> {
    let mut rep = Report::new("curvature kahler", s.seed);
    rep.param("grid", format!("{}x{}", g.0, g.1));
    let hk = kahler_potential(&sample_h());
    let pts: Vec<Vec<f64>> = u_prime_points(g)
        .into_iter()
        .map(|p| vec![0.0, 0.5 * p[0], 0.5 * p[1], 0.0])
        .collect();
    let mut ma = s.check("complex monge-ampere", 1e-8);
    sweep_one(&mut ma, &pts, |p| kahler_ma_residual(&hk, p))?;
    let mut curv = s.check("K at (0, sqrt2/2)", 1e-6);
    curv.record_one(&KAHLER_POINT, kahler_k2222(&hk))?;
    rep.checks = vec![ma, curv];
    Ok(rep)
}

/// Gauss curvature of `dθ²/x₁ + x₁dx₁²` against `−1/x₁³`.
pub fn curvature_gauss(s: &Settings, g: (usize, usize)) -> Result<Report> {
    let mut rep = Report::new("curvature gauss", s.seed);
    rep.param("grid", format!("{}x{}", g.0, g.1));
    let sigma = gh_example().surface_metric();
    let mut gauss = s.check("gauss curvature", 1e-8);
    sweep_one(&mut gauss, &grid([-1.0, 0.5], [1.0, 3.0], g), |p| {
        Ok(sigma.riemann(p)?.gauss()? + p[1].powi(-3))
    })?;
    rep.checks = vec![gauss];
    Ok(rep)
}
