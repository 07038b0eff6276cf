//! Seeded sampling of chart points, directions and rotations.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::quat::Quaternion;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Axis-aligned box `∏ [loᵢ, hiᵢ]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxDomain {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        assert!(lo.iter().zip(&hi).all(|(a, b)| a <= b));
        BoxDomain { lo, hi }
    }

    /// The cube `[−r, r]ⁿ`.
    pub fn cube(dim: usize, r: f64) -> Self {
        Self::new(vec![-r; dim], vec![r; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim()
            && p.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(x, (a, b))| a <= x && x <= b)
    }

    pub fn sample_point(&self, rng: &mut impl Rng) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| if a == b { *a } else { rng.gen_range(*a..*b) })
            .collect()
    }

    pub fn sample(&self, n: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
        (0..n).map(|_| self.sample_point(rng)).collect()
    }

    /// Regular `n₀ × n₁ × …` grid of cell centres.
    pub fn grid(&self, counts: &[usize]) -> Vec<Vec<f64>> {
        assert_eq!(counts.len(), self.dim());
        let mut out = vec![Vec::new()];
        for (d, &n) in counts.iter().enumerate() {
            let (a, b) = (self.lo[d], self.hi[d]);
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..n).map(move |k| {
                        let mut q = p.clone();
                        q.push(a + (b - a) * (k as f64 + 0.5) / n as f64);
                        q
                    })
                })
                .collect();
        }
        out
    }
}

/// Uniform point on the unit sphere `S^{n-1}`.
pub fn unit_vector(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r2: f64 = v.iter().map(|x| x * x).sum();
        if r2 > 1e-4 && r2 <= 1.0 {
            let r = r2.sqrt();
            return v.into_iter().map(|x| x / r).collect();
        }
    }
}

pub fn unit_quaternion(rng: &mut impl Rng) -> Quaternion {
    let v = unit_vector(4, rng);
    Quaternion::new(v[0], v[1], v[2], v[3])
}
