use std::hash::Hash;

use crate::error::{Error, Result};

/// A probability distribution over distinct pure plans.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedStrategy<P> {
    support: Vec<P>,
    probabilities: Vec<f64>,
}

impl<P: Clone + Eq + Hash> MixedStrategy<P> {
    /// Checks lengths, nonnegativity, distinct support and `Σ = 1` within 1e-9.
    pub fn new(support: Vec<P>, probabilities: Vec<f64>) -> Result<Self> {
        if support.is_empty() || support.len() != probabilities.len() {
            return Err(Error::InvalidMixture(format!(
                "{} plans with {} probabilities",
                support.len(),
                probabilities.len()
            )));
        }
        if probabilities.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidMixture("negative or non-finite probability".into()));
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidMixture(format!("probabilities sum to {sum}")));
        }
        let mut seen = std::collections::HashSet::new();
        if !support.iter().all(|p| seen.insert(p)) {
            return Err(Error::InvalidMixture("repeated plan in support".into()));
        }
        Ok(Self {
            support,
            probabilities,
        })
    }

    pub fn pure(plan: P) -> Self {
        Self {
            support: vec![plan],
            probabilities: vec![1.0],
        }
    }

    /// Normalizes nonnegative weights, merging repeated plans and dropping
    /// zero weights.
    pub fn from_weights<I: IntoIterator<Item = (P, f64)>>(weighted: I) -> Result<Self> {
        let mut support: Vec<P> = Vec::new();
        let mut weights: Vec<f64> = Vec::new();
        for (plan, w) in weighted {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidMixture(format!("weight {w}")));
            }
            if w == 0.0 {
                continue;
            }
            match support.iter().position(|p| *p == plan) {
                Some(i) => weights[i] += w,
                None => {
                    support.push(plan);
                    weights.push(w);
                }
            }
        }
        let total: f64 = weights.iter().sum();
        if support.is_empty() || total <= 0.0 {
            return Err(Error::InvalidMixture("no positive weight".into()));
        }
        Ok(Self {
            support,
            probabilities: weights.iter().map(|w| w / total).collect(),
        })
    }

    /// Uniform over `plans`, duplicates merged into larger weights.
    pub fn uniform(plans: Vec<P>) -> Result<Self> {
        Self::from_weights(plans.into_iter().map(|p| (p, 1.0)))
    }

    pub fn support(&self) -> &[P] {
        &self.support
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&P, f64)> {
        self.support.iter().zip(self.probabilities.iter().copied())
    }
}
