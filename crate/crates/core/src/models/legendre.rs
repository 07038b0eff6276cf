//! Homogeneous hyperkähler potentials in two variables.
//!
//! A potential `H = e^{2x₀} h(2x₁, 2x₂)` on `ℂ²` is hyperkähler exactly when
//! `h` solves `det ∇²h + (h h₂₂ − h₂²) = 1`. The transform `(T)` turns such an
//! `h` into a solution `u(r, θ)` of `Δu + 2u = 0` on the round sphere; the
//! Legendre transform `k` and its Mercator form `w` are intermediate steps.
//!
//! Transforms act on finite jets: a [`PlaneJet`] of order `N` is mapped to a
//! jet of order `N − 1` in the new coordinates, except for the Mercator
//! substitutions which keep the order.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::jets::{complex_hessian, Jet, Pairing, ScalarField};

/// Smallest `|h₂₂|`, `|k₂₂|` or `|u + u_rr|` accepted by the transforms.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// A 2-variable Taylor jet anchored at `point`.
#[derive(Clone, Debug)]
pub struct PlaneJet {
    pub point: [f64; 2],
    pub jet: Jet,
}

impl PlaneJet {
    pub fn new(point: [f64; 2], jet: Jet) -> Self {
        assert_eq!(jet.dim(), 2, "plane jets have two variables");
        PlaneJet { point, jet }
    }

    pub fn of(f: &ScalarField, point: [f64; 2], order: usize) -> Result<Self> {
        Ok(PlaneJet::new(point, f.jet(&point, order)?))
    }

    pub fn order(&self) -> usize {
        self.jet.order()
    }

    pub fn value(&self) -> f64 {
        self.jet.value()
    }

    pub fn partial(&self, vars: &[usize]) -> f64 {
        self.jet.partial(vars)
    }

    /// Largest difference of anchor coordinates and of every partial both
    /// jets carry.
    pub fn distance(&self, other: &PlaneJet) -> f64 {
        let n = self.order().min(other.order());
        let a = self.jet.truncate(n).partials();
        let b = other.jet.truncate(n).partials();
        let pd = (self.point[0] - other.point[0])
            .abs()
            .max((self.point[1] - other.point[1]).abs());
        a.iter()
            .zip(&b)
            .map(|(x, y)| (x.1 - y.1).abs())
            .fold(pd, f64::max)
    }
}

fn vars(point: [f64; 2], order: usize) -> [Jet; 2] {
    [0, 1].map(|i| Jet::variable(2, order, i, point[i]))
}

fn require_order(j: &PlaneJet, min: usize) -> Result<()> {
    if j.order() < min {
        return Err(Error::Order {
            requested: min,
            max: j.order(),
        });
    }
    Ok(())
}

/// Inverse of the local diffeomorphism `φ` given by its jets at `s₀`, as
/// jets at `φ(s₀)` of the same order.
pub fn invert_map(phi: [&Jet; 2], s0: [f64; 2]) -> Result<[Jet; 2]> {
    let order = phi[0].order();
    let y0 = [phi[0].value(), phi[1].value()];
    let a = Matrix2::from_fn(|i, j| phi[i].partial(&[j]));
    let scale = a.row(0).norm() * a.row(1).norm();
    if !(a.determinant().abs() > 1e-12 * scale) {
        return Err(Error::Singular(format!("jacobian {a:?} is not invertible")));
    }
    let ai = a.try_inverse().expect("nonzero determinant");
    let apply = |r: &[Jet; 2], i: usize| &r[0].scale(ai[(i, 0)]) + &r[1].scale(ai[(i, 1)]);
    let y = vars(y0, order);
    let dy = [y[0].add_const(-y0[0]), y[1].add_const(-y0[1])];
    let mut psi = [0, 1].map(|i| apply(&dy, i).add_const(s0[i]));
    // each Newton step fixes one more order
    for _ in 1..order {
        let r = [0, 1].map(|i| &phi[i].compose(&psi) - &y[i]);
        psi = [0, 1].map(|i| &psi[i] - &apply(&r, i));
    }
    Ok(psi)
}

/// `F ∘ φ⁻¹` as a plane jet at `φ(s₀)`.
fn reparametrise(f: &Jet, phi: [&Jet; 2], s0: [f64; 2]) -> Result<PlaneJet> {
    let psi = invert_map(phi, s0)?;
    Ok(PlaneJet::new(
        [phi[0].value(), phi[1].value()],
        f.compose(&psi),
    ))
}

/// `h(s₁, s₂) = cos s₁ · A(s₂/cos s₁)` with `A(ξ) = ½(ξ√(ξ²−1) − acosh ξ)`,
/// defined on `U′ = {|s₁| < π/2, s₂ > cos s₁}`.
pub fn sample_h() -> ScalarField {
    let s = ScalarField::coordinates(2);
    let c = s[0].cos();
    let xi = &s[1] / &c;
    let a = (&xi * &(&xi * &xi - 1.0).sqrt() - xi.acosh()).scale(0.5);
    &c * &a
}

/// Errors unless `|s₁| < π/2` and `s₂ ≥ cos s₁`.
pub fn check_u_prime(p: [f64; 2]) -> Result<()> {
    if !(p[0].abs() < FRAC_PI_2 && p[1] >= p[0].cos()) {
        return Err(Error::OutsideDomain {
            point: p.to_vec(),
            domain: "|s1| < π/2, s2 ≥ cos s1",
        });
    }
    Ok(())
}

/// Jet of [`sample_h`] at a point of the closure of `U′`.
pub fn sample_h_jet(p: [f64; 2], order: usize) -> Result<PlaneJet> {
    check_u_prime(p)?;
    PlaneJet::of(&sample_h(), p, order)
}

/// [`sample_h`] with `A(ξ) = ∫₁^ξ √(t² − 1) dt` evaluated by quadrature.
pub fn sample_h_quadrature() -> ScalarField {
    let s = ScalarField::coordinates(2);
    let c = s[0].cos();
    let xi = &s[1] / &c;
    let t = ScalarField::coordinate(1, 0);
    let integrand = (&t * &t - 1.0).sqrt();
    &c * &ScalarField::integral(&integrand, &ScalarField::one(2), &xi)
}

/// `u(r, θ) = cos θ sin r · g(r)` with `g(r) = −G(cot r)` and
/// `G(t) = ½(t√(1+t²) + asinh t)`.
pub fn sample_u() -> ScalarField {
    let x = ScalarField::coordinates(2);
    let (r, th) = (&x[0], &x[1]);
    let t = &r.cos() / &r.sin();
    let g = (&t * &(&t * &t + 1.0).sqrt() + t.asinh()).scale(-0.5);
    &(&th.cos() * &r.sin()) * &g
}

/// [`sample_u`] with `G(t) = ∫₀^t √(1 + τ²) dτ` evaluated by quadrature.
pub fn sample_u_quadrature() -> ScalarField {
    let x = ScalarField::coordinates(2);
    let (r, th) = (&x[0], &x[1]);
    let t = &r.cos() / &r.sin();
    let tau = ScalarField::coordinate(1, 0);
    let integrand = (&tau * &tau + 1.0).sqrt();
    let g = -ScalarField::integral(&integrand, &ScalarField::zero(2), &t);
    &(&th.cos() * &r.sin()) * &g
}

/// Grid of `n × n` points of `U′` with `|s₁| ≤ 1.2` and
/// `1.1 ≤ s₂/cos s₁ ≤ 2.5`.
pub fn u_prime_grid(n: usize) -> Vec<[f64; 2]> {
    let step = |k: usize, a: f64, b: f64| {
        if n == 1 {
            0.5 * (a + b)
        } else {
            a + (b - a) * k as f64 / (n - 1) as f64
        }
    };
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let s1 = step(i, -1.2, 1.2);
        for j in 0..n {
            out.push([s1, step(j, 1.1, 2.5) * s1.cos()]);
        }
    }
    out
}

fn ma_from_jet(j: &PlaneJet) -> f64 {
    let (h, h2) = (j.value(), j.partial(&[1]));
    let (h11, h12, h22) = (j.partial(&[0, 0]), j.partial(&[0, 1]), j.partial(&[1, 1]));
    h11 * h22 - h12 * h12 + (h * h22 - h2 * h2) - 1.0
}

/// `det ∇²h + (h h₂₂ − h₂²) − 1` at `p`.
pub fn ma_residual(h: &ScalarField, p: [f64; 2]) -> Result<f64> {
    Ok(ma_from_jet(&PlaneJet::of(h, p, 2)?))
}

/// [`ma_residual`] of a plane jet of order at least 2.
pub fn ma_residual_jet(h: &PlaneJet) -> Result<f64> {
    require_order(h, 2)?;
    Ok(ma_from_jet(h))
}

/// `Δu + 2u` for the round metric in polar coordinates `(r, θ)`,
/// `Δu = cot r u_r + u_rr + u_θθ / sin² r`, from a jet of order ≥ 2.
pub fn helmholtz_residual_jet(u: &PlaneJet) -> Result<f64> {
    require_order(u, 2)?;
    check_polar(u.point)?;
    let r = u.point[0];
    let (s, c) = r.sin_cos();
    Ok(c / s * u.partial(&[0])
        + u.partial(&[0, 0])
        + u.partial(&[1, 1]) / (s * s)
        + 2.0 * u.value())
}

pub fn helmholtz_residual(u: &ScalarField, p: [f64; 2]) -> Result<f64> {
    helmholtz_residual_jet(&PlaneJet::of(u, p, 2)?)
}

fn check_polar(p: [f64; 2]) -> Result<()> {
    if !(p[0] > 0.0 && p[0] < PI) {
        return Err(Error::OutsideDomain {
            point: p.to_vec(),
            domain: "0 < r < π",
        });
    }
    Ok(())
}

/// `(T)`: `θ = s₁`, `r = arccot h_{s₂}`, `u = −s₂ cos r + h sin r`.
pub fn transform_t(h: &PlaneJet) -> Result<PlaneJet> {
    require_order(h, 2)?;
    let h22 = h.partial(&[1, 1]);
    if !(h22.abs() > DEGENERACY_TOL) {
        return Err(Error::Degenerate(format!(
            "h_s2s2 = {h22} at {:?}",
            h.point
        )));
    }
    let n = h.order() - 1;
    let [s1, s2] = vars(h.point, n);
    let h2 = h.jet.derivative(1);
    let r = h2.arccot()?;
    let u = &h.jet.truncate(n) * &r.sin() - &s2 * &r.cos();
    reparametrise(&u, [&r, &s1], h.point)
}

/// `(T⁻¹)`: `s₁ = θ`, `s₂ = u_r sin r − u cos r`, `h = u_r cos r + u sin r`.
pub fn transform_t_inv(u: &PlaneJet) -> Result<PlaneJet> {
    require_order(u, 2)?;
    check_polar(u.point)?;
    let e = u.value() + u.partial(&[0, 0]);
    if !(e.abs() > DEGENERACY_TOL) {
        return Err(Error::Degenerate(format!(
            "u + u_rr = {e} at {:?}",
            u.point
        )));
    }
    let n = u.order() - 1;
    let [r, th] = vars(u.point, n);
    let ur = u.jet.derivative(0);
    let un = u.jet.truncate(n);
    let (sr, cr) = (r.sin(), r.cos());
    let s2 = &ur * &sr - &un * &cr;
    let h = &ur * &cr + &un * &sr;
    reparametrise(&h, [&th, &s2], u.point)
}

/// Legendre transform in `s₂`: `t₁ = s₁`, `t₂ = h_{s₂}`, `k = h − s₂ h_{s₂}`.
pub fn legendre_k(h: &PlaneJet) -> Result<PlaneJet> {
    require_order(h, 2)?;
    let h22 = h.partial(&[1, 1]);
    if !(h22.abs() > DEGENERACY_TOL) {
        return Err(Error::Degenerate(format!(
            "h_s2s2 = {h22} at {:?}",
            h.point
        )));
    }
    let n = h.order() - 1;
    let [s1, s2] = vars(h.point, n);
    let h2 = h.jet.derivative(1);
    let k = &h.jet.truncate(n) - &(&s2 * &h2);
    reparametrise(&k, [&s1, &h2], h.point)
}

/// Inverse Legendre transform: `s₂ = −k_{t₂}`, `h = k − t₂ k_{t₂}`.
pub fn legendre_h(k: &PlaneJet) -> Result<PlaneJet> {
    require_order(k, 2)?;
    let k22 = k.partial(&[1, 1]);
    if !(k22.abs() > DEGENERACY_TOL) {
        return Err(Error::Degenerate(format!(
            "k_t2t2 = {k22} at {:?}",
            k.point
        )));
    }
    let n = k.order() - 1;
    let [t1, t2] = vars(k.point, n);
    let k2 = k.jet.derivative(1);
    let h = &k.jet.truncate(n) - &(&t2 * &k2);
    reparametrise(&h, [&t1, &-&k2], k.point)
}

/// `k₁₁ + (1 + t₂²)k₂₂ − t₂k₂ + k`.
pub fn eq_k_residual(k: &PlaneJet) -> Result<f64> {
    require_order(k, 2)?;
    let t2 = k.point[1];
    Ok(
        k.partial(&[0, 0]) + (1.0 + t2 * t2) * k.partial(&[1, 1]) - t2 * k.partial(&[1])
            + k.value(),
    )
}

/// `w(x, y) = k(x, sinh y) / cosh y` at `(t₁, asinh t₂)`.
pub fn mercator_w(k: &PlaneJet) -> Result<PlaneJet> {
    let p = [k.point[0], k.point[1].asinh()];
    let [x, y] = vars(p, k.order());
    let w = k.jet.compose(&[x, y.sinh()]).div(&y.cosh())?;
    Ok(PlaneJet::new(p, w))
}

/// `w_xx + w_yy + 2w / cosh² y`.
pub fn eq_w_residual(w: &PlaneJet) -> Result<f64> {
    require_order(w, 2)?;
    let c = w.point[1].cosh();
    Ok(w.partial(&[0, 0]) + w.partial(&[1, 1]) + 2.0 * w.value() / (c * c))
}

/// `u(r, θ) = w(θ, y)` with `sinh y = cot r`, `cosh y = 1/sin r`.
pub fn mercator_to_polar(w: &PlaneJet) -> Result<PlaneJet> {
    let p = [FRAC_PI_2 - w.point[1].sinh().atan(), w.point[0]];
    let [r, th] = vars(p, w.order());
    let y = r.cos().div(&r.sin())?.asinh()?;
    Ok(PlaneJet::new(p, w.jet.compose(&[th, y])))
}

/// `H(x) = e^{2x₀} h(2x₁, 2x₂)` on `ℝ⁴ = ℂ²`, `z₁ = x₀ + ix₁`, `z₂ = x₂ + ix₃`.
pub fn kahler_potential(h: &ScalarField) -> ScalarField {
    let x = ScalarField::coordinates(4);
    x[0].scale(2.0).exp() * h.compose(&[x[1].scale(2.0), x[2].scale(2.0)])
}

/// `det(H_{z_α z̄_β}) − e^{4x₀}` at `p`.
pub fn kahler_ma_residual(hk: &ScalarField, p: &[f64]) -> Result<f64> {
    let m = complex_hessian(&hk.jet(p, 2)?, &Pairing::standard())?;
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    Ok((det.re - (4.0 * p[0]).exp()).abs().max(det.im.abs()))
}
