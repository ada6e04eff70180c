//! Symbol probability models and the Huffman codes built from them.

mod bits;
mod huffman;

pub use bits::Bitstream;
pub use huffman::{huffman_build, CodeBook};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Real;
use crate::walk::{predicted_stationary, WalkKind};

/// Where a model's weights came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelSource {
    DegreePredicted,
    EmpiricalMessage,
}

/// Positive per-symbol weights over the alphabet `0..n`.
///
/// Weights are stored unnormalised; [`ProbabilityModel::probabilities`]
/// normalises on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityModel<T> {
    weights: Vec<T>,
    source: ModelSource,
}

impl<T: Real> ProbabilityModel<T> {
    pub fn new(weights: Vec<T>, source: ModelSource) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > T::zero()))
        {
            return Err(Error::param(format!(
                "weight {w} of symbol {i} is not finite and positive"
            )));
        }
        Ok(ProbabilityModel { weights, source })
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn source(&self) -> ModelSource {
        self.source
    }

    pub fn alphabet_size(&self) -> usize {
        self.weights.len()
    }

    pub fn probabilities(&self) -> Vec<T> {
        let total: T = self.weights.iter().copied().sum();
        self.weights.iter().map(|&w| w / total).collect()
    }
}

/// Model whose weights are the stationary visit probabilities predicted
/// from the topology for the given dynamics.
pub fn degree_probability_model<T: Real>(
    g: &Graph,
    kind: &WalkKind<T>,
) -> Result<ProbabilityModel<T>> {
    ProbabilityModel::new(predicted_stationary(g, kind)?, ModelSource::DegreePredicted)
}

/// Symbol counts of `sequence` plus additive smoothing `epsilon`.
pub fn empirical_probability_model<T: Real>(
    sequence: &[usize],
    n: usize,
    epsilon: T,
) -> Result<ProbabilityModel<T>> {
    if n == 0 {
        return Err(Error::EmptyAlphabet);
    }
    if sequence.is_empty() {
        return Err(Error::param("empirical model needs a non-empty sequence"));
    }
    let mut counts = vec![0u64; n];
    for &s in sequence {
        if s >= n {
            return Err(Error::SymbolOutOfRange { symbol: s, n });
        }
        counts[s] += 1;
    }
    let weights = counts.into_iter().map(|c| T::of_u64(c) + epsilon).collect();
    ProbabilityModel::new(weights, ModelSource::EmpiricalMessage)
}

/// Shannon entropy of the normalised model, in bits.
pub fn entropy<T: Real>(model: &ProbabilityModel<T>) -> T {
    model
        .probabilities()
        .into_iter()
        .filter(|&p| p > T::zero())
        .map(|p| -p * p.log2())
        .sum()
}

/// Mean codeword length in bits per symbol under `model`.
pub fn expected_code_length<T: Real>(model: &ProbabilityModel<T>, codebook: &CodeBook) -> T {
    model
        .probabilities()
        .into_iter()
        .enumerate()
        .map(|(i, p)| p * T::of_usize(codebook.code_len(i)))
        .sum()
}

/// Bits per symbol of a fixed-width encoding of `n` symbols:
/// `ceil(log2 n)`, and 1 for a single-symbol alphabet.
pub fn fixed_width_bits(n: usize) -> u32 {
    if n <= 2 {
        1
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}
