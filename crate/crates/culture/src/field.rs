//! Agents' trait vectors and the pairwise measures on them.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CultureError, Result};

/// Number of features on which two agents hold the same trait.
pub fn similarity(x: &[u32], y: &[u32]) -> Result<usize> {
    if x.len() != y.len() {
        return Err(CultureError::LengthMismatch { left: x.len(), right: y.len() });
    }
    Ok(x.iter().zip(y).filter(|(a, b)| a == b).count())
}

/// `n − similarity`.
pub fn distance(x: &[u32], y: &[u32]) -> Result<usize> {
    Ok(x.len() - similarity(x, y)?)
}

/// Base-`q` reading of the trait vector (first feature least significant),
/// with its log-scaled height `ln h / ln q`, zero when `h ≤ 1`.
pub fn identity_metric(a: &[u32], q: u32) -> (u128, f64) {
    let q128 = q.max(1) as u128;
    let h = a.iter().rev().fold(0u128, |acc, &t| acc.saturating_mul(q128).saturating_add(t as u128));
    let hhat = if h <= 1 || q <= 1 { 0.0 } else { (h as f64).ln() / (q as f64).ln() };
    (h, hhat)
}

/// Every agent's features, stored contiguously.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Field {
    n: usize,
    q: u32,
    traits: Vec<u32>,
}

impl Field {
    pub fn new(n: usize, q: u32, agents: &[Vec<u32>]) -> Result<Field> {
        let mut traits = Vec::with_capacity(n * agents.len());
        for a in agents {
            if a.len() != n {
                return Err(CultureError::LengthMismatch { left: n, right: a.len() });
            }
            if let Some(&value) = a.iter().find(|&&t| t >= q) {
                return Err(CultureError::TraitOutOfRange { value, q });
            }
            traits.extend_from_slice(a);
        }
        Ok(Field { n, q, traits })
    }

    pub fn uniform<R: Rng + ?Sized>(n: usize, q: u32, count: usize, rng: &mut R) -> Field {
        let traits = (0..n * count).map(|_| rng.random_range(0..q)).collect();
        Field { n, q, traits }
    }

    /// See [`crate::InitSpec::Biased`].
    pub fn biased<R: Rng + ?Sized>(n: usize, q: u32, count: usize, fraction: f64, rng: &mut R) -> Field {
        let mut order: Vec<usize> = (0..count).collect();
        order.shuffle(rng);
        let favoured = ((fraction * count as f64).round() as usize).min(count);
        let mut lower_biased = vec![false; count];
        for &i in &order[..favoured] {
            lower_biased[i] = true;
        }
        let half = (q - 1) / 2;
        let mut traits = Vec::with_capacity(n * count);
        for &low in &lower_biased {
            for f in 0..n {
                let in_lower = f < n.div_ceil(2);
                let t = if in_lower == low {
                    rng.random_range(0..=half) + rng.random_range(0..=half)
                } else {
                    rng.random_range(0..q)
                };
                traits.push(t);
            }
        }
        Field { n, q, traits }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.traits.len().checked_div(self.n).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.traits.is_empty()
    }

    pub fn agent(&self, i: usize) -> &[u32] {
        &self.traits[i * self.n..(i + 1) * self.n]
    }

    pub fn agents(&self) -> impl Iterator<Item = &[u32]> {
        self.traits.chunks(self.n)
    }

    pub(crate) fn set(&mut self, i: usize, feature: usize, value: u32) {
        self.traits[i * self.n + feature] = value;
    }

    /// Agents in the same variety share every trait.
    pub fn same(&self, i: usize, j: usize) -> bool {
        self.agent(i) == self.agent(j)
    }

    pub(crate) fn sim(&self, i: usize, j: usize) -> usize {
        self.agent(i).iter().zip(self.agent(j)).filter(|(a, b)| a == b).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn similarity_and_distance() {
        assert_eq!(similarity(&[1, 2, 3, 4, 5], &[1, 2, 3, 4, 5]).unwrap(), 5);
        assert_eq!(similarity(&[1, 2, 3], &[4, 5, 6]).unwrap(), 0);
        assert_eq!(similarity(&[1, 2, 3], &[1, 9, 3]).unwrap(), 2);
        assert_eq!(distance(&[1, 2, 3, 4, 5], &[6, 7, 8, 9, 0]).unwrap(), 5);
        assert_eq!(distance(&[1, 2, 3], &[1, 2, 4]).unwrap(), 1);
        assert_eq!(
            similarity(&[1], &[1, 2]).unwrap_err(),
            CultureError::LengthMismatch { left: 1, right: 2 }
        );
    }

    #[test]
    fn identity_examples() {
        assert_eq!(identity_metric(&[0, 0, 0, 0, 0], 10), (0, 0.0));
        assert_eq!(identity_metric(&[1, 0, 0], 10), (1, 0.0));
        let (h, hhat) = identity_metric(&[9, 9], 10);
        assert_eq!(h, 99);
        assert!((hhat - 99f64.log10()).abs() < 1e-12);
        assert_eq!(identity_metric(&[3, 1], 10).0, 13);
    }

    #[test]
    fn construction_checks() {
        assert!(matches!(Field::new(2, 3, &[vec![0, 3]]), Err(CultureError::TraitOutOfRange { value: 3, q: 3 })));
        assert!(matches!(Field::new(2, 3, &[vec![0]]), Err(CultureError::LengthMismatch { .. })));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = Field::biased(12, 12, 144, 0.75, &mut rng);
        assert_eq!(f.len(), 144);
        assert!(f.agents().all(|a| a.iter().all(|&t| t < 12)));
    }
}
