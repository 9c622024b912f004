//! Multinomial logit probabilities and seeded inverse-CDF sampling.

use alloc::vec::Vec;

use rand::Rng;

/// Softmax of `scale * utilities`, shifted by the maximum so that very
/// negative utilities never underflow to an all-zero vector.
pub fn softmax_scaled(utilities: &[f64], scale: f64) -> Vec<f64> {
    let max = utilities.iter().map(|u| scale * u).fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<f64> = utilities.iter().map(|u| libm::exp(scale * u - max)).collect();
    let sum: f64 = out.iter().sum();
    for p in &mut out {
        *p /= sum;
    }
    out
}

pub fn softmax(utilities: &[f64]) -> Vec<f64> {
    softmax_scaled(utilities, 1.0)
}

/// Inverse-CDF draw over unnormalized non-negative weights. Consumes exactly
/// one uniform variate. Zero-weight entries are never returned.
pub fn sample_weighted<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    debug_assert!(!weights.is_empty());
    let total: f64 = weights.iter().sum();
    let u = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (k, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last_positive = k;
        if u < acc {
            return k;
        }
    }
    last_positive
}

/// Discrete distribution over alternatives.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution<T> {
    alternatives: Vec<T>,
    probabilities: Vec<f64>,
}

impl<T: Copy> Distribution<T> {
    pub fn new(alternatives: Vec<T>, probabilities: Vec<f64>) -> Self {
        assert_eq!(alternatives.len(), probabilities.len());
        assert!(!alternatives.is_empty(), "empty choice set");
        Distribution {
            alternatives,
            probabilities,
        }
    }

    pub fn from_utilities(alternatives: Vec<T>, utilities: &[f64], scale: f64) -> Self {
        let probabilities = softmax_scaled(utilities, scale);
        Self::new(alternatives, probabilities)
    }

    pub fn alternatives(&self) -> &[T] {
        &self.alternatives
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.alternatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alternatives.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (T, f64)> + '_ {
        self.alternatives
            .iter()
            .copied()
            .zip(self.probabilities.iter().copied())
    }

    pub fn probability_of(&self, alternative: T) -> f64
    where
        T: PartialEq,
    {
        self.iter().find(|(a, _)| *a == alternative).map_or(0.0, |(_, p)| p)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        self.alternatives[sample_weighted(&self.probabilities, rng)]
    }
}
