//! Riemannian metrics on charts and their curvature.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::forms::{ChartMap, DifferentialForm};
use crate::jets::{Evaluator, Jet, ScalarField};

/// Symmetric matrix of scalar fields `g_ij`.
#[derive(Clone, Debug)]
pub struct MetricField {
    dim: usize,
    entries: Vec<ScalarField>,
}

fn tri(i: usize, j: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    b * (b + 1) / 2 + a
}

impl MetricField {
    /// Builds `g` from `g(i, j)`, read for `i ≤ j` only.
    pub fn from_fn(dim: usize, mut g: impl FnMut(usize, usize) -> ScalarField) -> Self {
        let mut entries = vec![ScalarField::zero(dim); dim * (dim + 1) / 2];
        for j in 0..dim {
            for i in 0..=j {
                let e = g(i, j);
                assert_eq!(e.dim(), dim);
                entries[tri(i, j)] = e;
            }
        }
        MetricField { dim, entries }
    }

    pub fn euclidean(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| {
            ScalarField::constant(dim, if i == j { 1.0 } else { 0.0 })
        })
    }

    pub fn diagonal(diag: Vec<ScalarField>) -> Self {
        let dim = diag.len();
        Self::from_fn(dim, |i, j| {
            if i == j {
                diag[i].clone()
            } else {
                ScalarField::zero(dim)
            }
        })
    }

    /// `Σ_a w_a θ_a ⊗ θ_a` for 1-forms `θ_a`.
    pub fn from_coframe(coframe: &[DifferentialForm], weights: &[ScalarField]) -> Self {
        assert_eq!(coframe.len(), weights.len());
        let dim = coframe[0].dim();
        assert!(coframe.iter().all(|t| t.degree() == 1 && t.dim() == dim));
        Self::from_fn(dim, |i, j| {
            ScalarField::sum(
                dim,
                coframe.iter().zip(weights).map(|(t, w)| {
                    let c = t.coefficients();
                    w * &(&c[i] * &c[j])
                }),
            )
        })
    }

    /// `Σ θ_a ⊗ θ_a`.
    pub fn sum_of_squares(coframe: &[DifferentialForm]) -> Self {
        let dim = coframe[0].dim();
        let ones = vec![ScalarField::one(dim); coframe.len()];
        Self::from_coframe(coframe, &ones)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &ScalarField {
        &self.entries[tri(i, j)]
    }

    pub fn conformal(&self, f: &ScalarField) -> Self {
        MetricField {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * f).collect(),
        }
    }

    pub fn add(&self, other: &MetricField) -> Self {
        assert_eq!(self.dim, other.dim);
        MetricField {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &MetricField) -> Self {
        assert_eq!(self.dim, other.dim);
        MetricField {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// `φ*g` with `(φ*g)_ab = g_ij(φ) ∂_aφⁱ ∂_bφʲ`.
    pub fn pullback(&self, phi: &ChartMap) -> Self {
        assert_eq!(phi.target_dim(), self.dim);
        let m = phi.source_dim();
        let pulled: Vec<ScalarField> = self.entries.iter().map(|e| phi.pull_function(e)).collect();
        let jac: Vec<Vec<ScalarField>> = phi
            .components()
            .iter()
            .map(|c| (0..m).map(|a| c.partial(a)).collect())
            .collect();
        Self::from_fn(m, |a, b| {
            let mut terms = Vec::new();
            for i in 0..self.dim {
                for j in 0..self.dim {
                    let g = &pulled[tri(i, j)];
                    if g.is_zero() || jac[i][a].is_zero() || jac[j][b].is_zero() {
                        continue;
                    }
                    terms.push(g * &(&jac[i][a] * &jac[j][b]));
                }
            }
            ScalarField::sum(m, terms)
        })
    }

    pub fn value(&self, ev: &mut Evaluator) -> Result<DMatrix<f64>> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for j in i..self.dim {
                let v = ev.value(&self.entries[tri(i, j)])?;
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Ok(m)
    }

    pub fn at(&self, p: &[f64]) -> Result<DMatrix<f64>> {
        self.value(&mut Evaluator::new(p)?)
    }

    /// `g(u, v)` at `p`.
    pub fn inner(&self, p: &[f64], u: &[f64], v: &[f64]) -> Result<f64> {
        let g = self.at(p)?;
        Ok((0..self.dim)
            .flat_map(|i| (0..self.dim).map(move |j| (i, j)))
            .map(|(i, j)| g[(i, j)] * u[i] * v[j])
            .sum())
    }

    /// Errors with `NonPositive` unless `g(p)` is positive definite.
    pub fn check_positive(&self, p: &[f64]) -> Result<DMatrix<f64>> {
        let g = self.at(p)?;
        let min = g.clone().symmetric_eigenvalues().min();
        if min > 0.0 {
            Ok(g)
        } else {
            Err(Error::NonPositive {
                point: p.to_vec(),
                value: min,
            })
        }
    }

    /// Curvature tensor at `p` from second-order jets of the entries.
    pub fn riemann(&self, p: &[f64]) -> Result<Curvature> {
        let n = self.dim;
        let mut ev = Evaluator::new(p)?;
        let jets: Vec<Jet> = self
            .entries
            .iter()
            .map(|e| ev.eval(e, 2))
            .collect::<Result<_>>()?;
        let g = DMatrix::from_fn(n, n, |i, j| jets[tri(i, j)].value());
        let ginv = g
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Singular(format!("metric is singular at {p:?}")))?;
        if !ginv.iter().all(|v| v.is_finite()) {
            return Err(Error::Singular(format!("metric is singular at {p:?}")));
        }
        // dg[m][(i, j)] = ∂_m g_ij, ddg[m][l][(i, j)] = ∂_m ∂_l g_ij
        let dg: Vec<DMatrix<f64>> = (0..n)
            .map(|m| DMatrix::from_fn(n, n, |i, j| jets[tri(i, j)].partial(&[m])))
            .collect();
        let ddg: Vec<Vec<DMatrix<f64>>> = (0..n)
            .map(|m| {
                (0..n)
                    .map(|l| DMatrix::from_fn(n, n, |i, j| jets[tri(i, j)].partial(&[m, l])))
                    .collect()
            })
            .collect();
        let dginv: Vec<DMatrix<f64>> = dg.iter().map(|d| -(&ginv * d * &ginv)).collect();

        let idx3 = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
        // Γ_{ljk} = ½(∂_j g_lk + ∂_k g_lj − ∂_l g_jk) and its derivatives
        let mut gamma_low = vec![0.0; n * n * n];
        let mut dgamma_low = vec![0.0; n * n * n * n];
        for l in 0..n {
            for j in 0..n {
                for k in 0..n {
                    gamma_low[idx3(l, j, k)] =
                        0.5 * (dg[j][(l, k)] + dg[k][(l, j)] - dg[l][(j, k)]);
                    for m in 0..n {
                        dgamma_low[idx3(l, j, k) * n + m] =
                            0.5 * (ddg[m][j][(l, k)] + ddg[m][k][(l, j)] - ddg[m][l][(j, k)]);
                    }
                }
            }
        }
        let mut gamma = vec![0.0; n * n * n];
        let mut dgamma = vec![0.0; n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut s = 0.0;
                    for l in 0..n {
                        s += ginv[(i, l)] * gamma_low[idx3(l, j, k)];
                    }
                    gamma[idx3(i, j, k)] = s;
                    for m in 0..n {
                        let mut d = 0.0;
                        for l in 0..n {
                            d += dginv[m][(i, l)] * gamma_low[idx3(l, j, k)]
                                + ginv[(i, l)] * dgamma_low[idx3(l, j, k) * n + m];
                        }
                        dgamma[idx3(i, j, k) * n + m] = d;
                    }
                }
            }
        }
        let mut r = vec![0.0; n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut v = dgamma[idx3(i, l, j) * n + k] - dgamma[idx3(i, k, j) * n + l];
                        for m in 0..n {
                            v += gamma[idx3(i, k, m)] * gamma[idx3(m, l, j)]
                                - gamma[idx3(i, l, m)] * gamma[idx3(m, k, j)];
                        }
                        r[idx3(i, j, k) * n + l] = v;
                    }
                }
            }
        }
        Ok(Curvature { dim: n, g, r })
    }
}

/// Riemann tensor `Rⁱ_jkl = ∂_kΓⁱ_lj − ∂_lΓⁱ_kj + Γⁱ_kmΓᵐ_lj − Γⁱ_lmΓᵐ_kj`
/// at a point, with the metric there.
#[derive(Clone, Debug)]
pub struct Curvature {
    dim: usize,
    g: DMatrix<f64>,
    r: Vec<f64>,
}

impl Curvature {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn metric(&self) -> &DMatrix<f64> {
        &self.g
    }

    /// `Rⁱ_jkl`.
    pub fn up(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.dim;
        self.r[((i * n + j) * n + k) * n + l]
    }

    /// `R_ijkl = g_ia Rᵃ_jkl`.
    pub fn down(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        (0..self.dim)
            .map(|a| self.g[(i, a)] * self.up(a, j, k, l))
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.r.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Sectional curvature of the plane spanned by `u`, `v`.
    pub fn sectional(&self, u: &[f64], v: &[f64]) -> Result<f64> {
        let n = self.dim;
        let ip = |a: &[f64], b: &[f64]| -> f64 {
            (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| self.g[(i, j)] * a[i] * b[j])
                .sum()
        };
        let area = ip(u, u) * ip(v, v) - ip(u, v).powi(2);
        if area.abs() < 1e-300 {
            return Err(Error::Degenerate(
                "sectional curvature of a degenerate plane".into(),
            ));
        }
        let mut num = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        num += self.down(i, j, k, l) * u[i] * v[j] * u[k] * v[l];
                    }
                }
            }
        }
        Ok(num / area)
    }

    /// Gauss curvature `R₀₁₀₁ / det g` of a surface metric.
    pub fn gauss(&self) -> Result<f64> {
        if self.dim != 2 {
            return Err(Error::Dimension {
                expected: 2,
                found: self.dim,
            });
        }
        Ok(self.down(0, 1, 0, 1) / self.g.determinant())
    }

    pub fn ricci(&self) -> DMatrix<f64> {
        let n = self.dim;
        DMatrix::from_fn(n, n, |j, l| (0..n).map(|i| self.up(i, j, i, l)).sum())
    }

    pub fn scalar(&self) -> f64 {
        let ginv = self
            .g
            .clone()
            .try_inverse()
            .expect("checked at construction");
        let ric = self.ricci();
        ginv.component_mul(&ric).sum()
    }
}
