//! Differential forms evaluated at a single point.

use std::ops::{Add, Sub};

use super::index::{combinations, position, sort_with_sign};
use crate::error::{Error, Result};

/// A `k`-covector on `ℝⁿ`, stored on increasing multi-indices.
#[derive(Clone, Debug, PartialEq)]
pub struct FormValue {
    dim: usize,
    degree: usize,
    coeffs: Vec<f64>,
}

impl FormValue {
    pub fn new(dim: usize, degree: usize, coeffs: Vec<f64>) -> Result<Self> {
        if degree > dim {
            return Err(Error::Degree(format!("degree {degree} on a {dim}-chart")));
        }
        let n = combinations(dim, degree).len();
        if coeffs.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: coeffs.len(),
            });
        }
        Ok(FormValue {
            dim,
            degree,
            coeffs,
        })
    }

    pub fn zero(dim: usize, degree: usize) -> Self {
        let n = combinations(dim, degree).len();
        FormValue {
            dim,
            degree,
            coeffs: vec![0.0; n],
        }
    }

    /// The covector `Σ c_i dx_i`.
    pub fn covector(c: &[f64]) -> Self {
        FormValue {
            dim: c.len(),
            degree: 1,
            coeffs: c.to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient on `dx_{i₁}∧…∧dx_{i_k}` for any ordering of the indices.
    pub fn coefficient(&self, idx: &[usize]) -> f64 {
        assert_eq!(idx.len(), self.degree);
        match sort_with_sign(idx) {
            None => 0.0,
            Some((sorted, sign)) => sign * self.coeffs[position(self.dim, &sorted).unwrap()],
        }
    }

    /// Coefficient of a top-degree form against `dx₀∧…∧dx_{n-1}`.
    pub fn top(&self) -> f64 {
        assert_eq!(self.degree, self.dim, "not a top-degree form");
        self.coeffs[0]
    }

    pub fn scale(&self, s: f64) -> Self {
        FormValue {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            ..self.clone()
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn wedge(&self, other: &FormValue) -> Result<FormValue> {
        if self.dim != other.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: other.dim,
            });
        }
        let degree = self.degree + other.degree;
        if degree > self.dim {
            return Err(Error::Degree(format!(
                "wedge of degrees {} and {} on a {}-chart",
                self.degree, other.degree, self.dim
            )));
        }
        let mut out = FormValue::zero(self.dim, degree);
        let left = combinations(self.dim, self.degree);
        let right = combinations(self.dim, other.degree);
        for (i, a) in left.iter().enumerate() {
            if self.coeffs[i] == 0.0 {
                continue;
            }
            for (j, b) in right.iter().enumerate() {
                let joined: Vec<usize> = a.iter().chain(b).copied().collect();
                if let Some((sorted, sign)) = sort_with_sign(&joined) {
                    let k = position(self.dim, &sorted).unwrap();
                    out.coeffs[k] += sign * self.coeffs[i] * other.coeffs[j];
                }
            }
        }
        Ok(out)
    }

    /// Contraction `v⌟self`.
    pub fn interior(&self, v: &[f64]) -> FormValue {
        assert_eq!(v.len(), self.dim);
        if self.degree == 0 {
            return FormValue::zero(self.dim, 0);
        }
        let mut out = FormValue::zero(self.dim, self.degree - 1);
        for (c, idx) in self.coeffs.iter().zip(combinations(self.dim, self.degree)) {
            for r in 0..idx.len() {
                let mut rest = idx.clone();
                let i = rest.remove(r);
                let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
                let k = position(self.dim, &rest).unwrap();
                out.coeffs[k] += sign * v[i] * c;
            }
        }
        out
    }

    /// `self(v₁, …, v_k)` with `(dx₀∧dx₁)(∂₀, ∂₁) = 1`.
    pub fn eval(&self, vectors: &[&[f64]]) -> f64 {
        assert_eq!(vectors.len(), self.degree);
        let mut acc = self.clone();
        for v in vectors {
            acc = acc.interior(v);
        }
        acc.coeffs[0]
    }
}

impl Add for &FormValue {
    type Output = FormValue;
    fn add(self, rhs: &FormValue) -> FormValue {
        assert_eq!((self.dim, self.degree), (rhs.dim, rhs.degree));
        FormValue {
            dim: self.dim,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &FormValue {
    type Output = FormValue;
    fn sub(self, rhs: &FormValue) -> FormValue {
        self + &rhs.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dx(n: usize, i: usize) -> FormValue {
        let mut c = vec![0.0; n];
        c[i] = 1.0;
        FormValue::covector(&c)
    }

    #[test]
    fn alternating_convention() {
        let w = dx(2, 0).wedge(&dx(2, 1)).unwrap();
        assert_eq!(w.eval(&[&[1.0, 0.0], &[0.0, 1.0]]), 1.0);
        assert_eq!(w.eval(&[&[0.0, 1.0], &[1.0, 0.0]]), -1.0);
        assert_eq!(dx(2, 0).wedge(&dx(2, 0)).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn interior_of_area_form() {
        let w = dx(2, 0).wedge(&dx(2, 1)).unwrap();
        assert_eq!(w.interior(&[1.0, 0.0]), dx(2, 1));
    }

    #[test]
    fn degree_overflow() {
        let w = dx(2, 0).wedge(&dx(2, 1)).unwrap();
        assert!(matches!(w.wedge(&dx(2, 0)), Err(Error::Degree(_))));
        assert!(dx(2, 0).wedge(&dx(3, 0)).is_err());
    }

    #[test]
    fn coefficient_any_order() {
        let w = dx(3, 0).wedge(&dx(3, 2)).unwrap();
        assert_eq!(w.coefficient(&[2, 0]), -1.0);
        assert_eq!(w.coefficient(&[0, 0]), 0.0);
    }
}
