//! Transmission of complex networks as random-walk symbol streams.
//!
//! A network is sampled by a walker, each visited node id is emitted as a
//! symbol, and a receiver rebuilds the network from consecutive symbol pairs.
//! Symbols are compressed with Huffman codes whose probabilities are predicted
//! from the topology alone, which lets transmission and compression efficiency
//! be compared across graph models and walk dynamics.
//!
//! The numerical core (transition probabilities, stationary predictions,
//! probability models, Huffman construction, correlation metrics) is generic
//! over the scalar type through [`Real`]; the `*64` aliases below fix it to
//! `f64`, which is what the experiment layer uses.

pub mod coding;
pub mod error;
pub mod experiment;
pub mod generators;
pub mod graph;
pub mod scalar;
pub mod transmission;
pub mod walk;

pub use coding::{
    degree_probability_model, empirical_probability_model, entropy, expected_code_length,
    huffman_build, Bitstream, CodeBook, ModelSource, ProbabilityModel,
};
pub use error::{Error, Result};
pub use experiment::{
    emit_plot_data, run_experiment, run_s2_study, AggregateRow, ExperimentConfig,
    ExperimentOutcome, RunRecord,
};
pub use generators::{ModelKind, ModelSpec};
pub use graph::{Degrees, Graph};
pub use scalar::Real;
pub use transmission::{
    compression_cost, measure_t90, reconstruct_stream, run_transmission, single_message_ratio,
    steering, MetricsRecord, ReceiverState, Steering, T90,
};
pub use walk::{
    predicted_stationary, simulate, transition_probs, Dynamics, Start, WalkKind, WalkState, Walker,
};

pub type WalkKind64 = WalkKind<f64>;
pub type ProbabilityModel64 = ProbabilityModel<f64>;
pub type MetricsRecord64 = MetricsRecord<f64>;
pub type Steering64 = Steering<f64>;
pub type WalkKind32 = WalkKind<f32>;
pub type ProbabilityModel32 = ProbabilityModel<f32>;
pub type MetricsRecord32 = MetricsRecord<f32>;

/// Random generator used by every stochastic routine in the crate.
///
/// ChaCha8 keeps streams identical across platforms and `rand` releases.
pub type SimRng = rand_chacha::ChaCha8Rng;

/// Builds the crate's generator from a 64-bit seed.
pub fn seeded_rng(seed: u64) -> SimRng {
    use rand::SeedableRng;
    SimRng::seed_from_u64(seed)
}
