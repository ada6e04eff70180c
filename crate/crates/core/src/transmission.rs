//! Receiver-side reconstruction and the per-run transmission metrics.
//!
//! A run streams walk symbols to a receiver that adds one edge per
//! consecutive symbol pair. `T90` is the number of transmitted steps until
//! 90% of the edges are known. Compressed costs are expressed in
//! equivalent symbols: Huffman bits divided by the fixed-width cost
//! `ceil(log2 n)`, so `T90` and `T90^C` share a unit.

use crate::coding::{
    degree_probability_model, empirical_probability_model, fixed_width_bits, huffman_build,
    CodeBook,
};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Real;
use crate::seeded_rng;
use crate::walk::{Start, WalkKind, Walker};

/// Default cap on steps spent searching for `T90`.
pub const DEFAULT_T90_CAP: u64 = 100_000_000;
/// Default long-run stream length.
pub const DEFAULT_T_LONG: u64 = 1_000_000;
/// Additive smoothing for single-message dictionaries.
pub const DEFAULT_SMOOTHING: f64 = 1.0;

/// Smallest number of received edges that reaches 90% coverage.
pub fn edges_for_90(edge_count: usize) -> usize {
    (9 * edge_count).div_ceil(10)
}

/// Partially reconstructed network at the receiver.
#[derive(Debug, Clone)]
pub struct ReceiverState<'g> {
    graph: &'g Graph,
    received: Vec<bool>,
    received_nodes: Vec<bool>,
    edges_received: usize,
    last: Option<usize>,
    symbols: usize,
}

impl<'g> ReceiverState<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        ReceiverState {
            graph,
            received: vec![false; graph.edge_count()],
            received_nodes: vec![false; graph.node_count()],
            edges_received: 0,
            last: None,
            symbols: 0,
        }
    }

    /// Accepts the next symbol; from the second symbol on, the pair with
    /// the previous one must be an edge of the original graph.
    pub fn receive(&mut self, symbol: usize) -> Result<()> {
        let n = self.graph.node_count();
        if symbol >= n {
            return Err(Error::SymbolOutOfRange { symbol, n });
        }
        if let Some(prev) = self.last {
            let edge = self
                .graph
                .edge_between(prev, symbol)
                .ok_or(Error::CorruptStream {
                    position: self.symbols,
                    from: prev,
                    to: symbol,
                })?;
            if !self.received[edge] {
                self.received[edge] = true;
                self.edges_received += 1;
            }
        }
        self.received_nodes[symbol] = true;
        self.last = Some(symbol);
        self.symbols += 1;
        Ok(())
    }

    pub fn edges_received(&self) -> usize {
        self.edges_received
    }

    pub fn coverage<T: Real>(&self) -> T {
        T::of_usize(self.edges_received) / T::of_usize(self.graph.edge_count())
    }

    /// Received edges in canonical form, ordered by edge id.
    pub fn received_edges(&self) -> Vec<(usize, usize)> {
        self.graph
            .edges()
            .iter()
            .zip(&self.received)
            .filter(|(_, &r)| r)
            .map(|(&e, _)| e)
            .collect()
    }

    pub fn received_nodes(&self) -> Vec<usize> {
        (0..self.received_nodes.len())
            .filter(|&i| self.received_nodes[i])
            .collect()
    }
}

/// Coverage after each received pair: entry `t - 1` is the fraction of
/// edges known once symbol `t` (0-based) has arrived.
pub fn reconstruct_stream<T: Real>(g: &Graph, sequence: &[usize]) -> Result<Vec<T>> {
    if g.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    let mut rx = ReceiverState::new(g);
    let mut timeline = Vec::with_capacity(sequence.len().saturating_sub(1));
    for (i, &s) in sequence.iter().enumerate() {
        rx.receive(s)?;
        if i > 0 {
            timeline.push(rx.coverage());
        }
    }
    Ok(timeline)
}

/// Outcome of a `T90` search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum T90 {
    Reached(u64),
    Censored,
}

impl T90 {
    pub fn value(self) -> Option<u64> {
        match self {
            T90::Reached(t) => Some(t),
            T90::Censored => None,
        }
    }
}

/// First step count `t <= cap` whose coverage is at least 0.9.
pub fn measure_t90<T: Real>(timeline: &[T], cap: u64) -> T90 {
    let threshold = T::of(0.9);
    timeline
        .iter()
        .take(usize::try_from(cap).unwrap_or(usize::MAX))
        .position(|&c| c >= threshold)
        .map_or(T90::Censored, |i| T90::Reached(i as u64 + 1))
}

/// Pearson correlation between visit frequencies and degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Steering<T> {
    pub value: T,
    /// Set when either input has zero variance; `value` is then 0.
    pub degenerate: bool,
}

pub fn steering<T: Real>(frequencies: &[T], degrees: &[T]) -> Result<Steering<T>> {
    if frequencies.len() != degrees.len() {
        return Err(Error::LengthMismatch(frequencies.len(), degrees.len()));
    }
    let n = frequencies.len();
    if n < 2 {
        return Err(Error::param("steering needs at least two nodes"));
    }
    let nt = T::of_usize(n);
    let mx = frequencies.iter().copied().sum::<T>() / nt;
    let my = degrees.iter().copied().sum::<T>() / nt;
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&x, &y) in frequencies.iter().zip(degrees) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == T::zero() || syy == T::zero() {
        return Ok(Steering {
            value: T::zero(),
            degenerate: true,
        });
    }
    let r = sxy / (sxx.sqrt() * syy.sqrt());
    Ok(Steering {
        value: r.max(-T::one()).min(T::one()),
        degenerate: false,
    })
}

/// Compressed cost of `sequence` in equivalent symbols: total Huffman bits
/// divided by `ceil(log2 n)`.
pub fn compression_cost<T: Real>(sequence: &[usize], codebook: &CodeBook, n: usize) -> Result<T> {
    if codebook.alphabet_size() < n {
        return Err(Error::param(format!(
            "codebook covers {} symbols, alphabet has {n}",
            codebook.alphabet_size()
        )));
    }
    let bits = codebook.encoded_len(sequence)?;
    Ok(T::of_u64(bits) / T::of_u64(u64::from(fixed_width_bits(n))))
}

/// Metrics of one transmission run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsRecord<T> {
    pub t90: Option<u64>,
    pub t90c: Option<T>,
    pub s90: Option<T>,
    pub sl: T,
    pub r90: Option<T>,
    pub rl: T,
    /// Ratio over the `T90` prefix under a dictionary estimated from a
    /// different message, when one was supplied.
    pub r90s: Option<T>,
    pub censored: bool,
}

/// Streams one walk and measures everything in a single pass.
///
/// The walk runs for `max(T90, t_long)` steps, where the `T90` search stops
/// at `t90_cap`. Costs cover the symbols produced by the steps (the start
/// symbol is excluded); visit counts include the start symbol.
fn transmit<T: Real>(
    g: &Graph,
    kind: WalkKind<T>,
    seed: u64,
    t90_cap: u64,
    t_long: u64,
    dictionary: Option<&CodeBook>,
) -> Result<MetricsRecord<T>> {
    if t_long == 0 || t90_cap == 0 {
        return Err(Error::param("t_long and t90_cap must be >= 1"));
    }
    if g.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    let n = g.node_count();
    let codebook = huffman_build(&degree_probability_model(g, &kind)?)?;
    let lens: Vec<u64> = codebook.lengths().into_iter().map(|l| l as u64).collect();
    let dict_lens: Option<Vec<u64>> = match dictionary {
        Some(cb) if cb.alphabet_size() != n => {
            return Err(Error::param(format!(
                "dictionary covers {} symbols, graph has {n}",
                cb.alphabet_size()
            )))
        }
        Some(cb) => Some(cb.lengths().into_iter().map(|l| l as u64).collect()),
        None => None,
    };
    let width = T::of_u64(u64::from(fixed_width_bits(n)));
    let degrees: Vec<T> = g.total_degrees().into_iter().map(T::of_usize).collect();
    let steer = |visits: &[u64]| -> Result<T> {
        let freq: Vec<T> = visits.iter().map(|&v| T::of_u64(v)).collect();
        Ok(steering(&freq, &degrees)?.value)
    };

    let mut walker = Walker::new(g, kind, Start::Uniform, seeded_rng(seed))?;
    let mut visits = vec![0u64; n];
    visits[walker.current()] += 1;
    let mut received = vec![false; g.edge_count()];
    let mut covered = 0usize;
    let need = edges_for_90(g.edge_count());
    let (mut bits, mut dict_bits) = (0u64, 0u64);

    let mut at_90: Option<(u64, u64, u64, T)> = None;
    let mut at_long: Option<(u64, T)> = None;
    let mut t = 0u64;
    while at_long.is_none() || (at_90.is_none() && t < t90_cap) {
        let (node, edge) = walker.step_edge()?;
        t += 1;
        visits[node] += 1;
        bits += lens[node];
        if at_90.is_none() && t <= t90_cap {
            if let Some(d) = &dict_lens {
                dict_bits += d[node];
            }
            if !received[edge] {
                received[edge] = true;
                covered += 1;
                if covered >= need {
                    at_90 = Some((t, bits, dict_bits, steer(&visits)?));
                }
            }
        }
        if t == t_long {
            at_long = Some((bits, steer(&visits)?));
        }
    }
    let (bits_long, sl) = at_long.expect("loop runs until t_long");
    let rl = T::of_u64(bits_long) / width / T::of_u64(t_long);
    let mut record = MetricsRecord {
        t90: None,
        t90c: None,
        s90: None,
        sl,
        r90: None,
        rl,
        r90s: None,
        censored: at_90.is_none(),
    };
    if let Some((t90, b90, d90, s90)) = at_90 {
        let t90c = T::of_u64(b90) / width;
        record.t90 = Some(t90);
        record.t90c = Some(t90c);
        record.s90 = Some(s90);
        record.r90 = Some(t90c / T::of_u64(t90));
        if dict_lens.is_some() {
            record.r90s = Some(T::of_u64(d90) / width / T::of_u64(t90));
        }
    }
    Ok(record)
}

/// One full transmission run with the degree-predicted dictionary.
pub fn run_transmission<T: Real>(
    g: &Graph,
    kind: WalkKind<T>,
    seed: u64,
    t90_cap: u64,
    t_long: u64,
) -> Result<MetricsRecord<T>> {
    transmit(g, kind, seed, t90_cap, t_long, None)
}

/// Like [`run_transmission`], additionally costing the `T90` prefix under
/// `dictionary` to fill [`MetricsRecord::r90s`].
pub fn run_transmission_with_dictionary<T: Real>(
    g: &Graph,
    kind: WalkKind<T>,
    seed: u64,
    t90_cap: u64,
    t_long: u64,
    dictionary: &CodeBook,
) -> Result<MetricsRecord<T>> {
    transmit(g, kind, seed, t90_cap, t_long, Some(dictionary))
}

/// The message a run transmits until `T90`: start symbol included. If the
/// cap is hit first the whole capped message is returned.
pub fn message_until_t90<T: Real>(
    g: &Graph,
    kind: WalkKind<T>,
    seed: u64,
    t90_cap: u64,
) -> Result<Vec<usize>> {
    if g.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    let mut walker = Walker::new(g, kind, Start::Uniform, seeded_rng(seed))?;
    let mut rx = ReceiverState::new(g);
    let mut message = vec![walker.current()];
    rx.receive(walker.current())?;
    let need = edges_for_90(g.edge_count());
    while rx.edges_received() < need && ((message.len() - 1) as u64) < t90_cap {
        let s = walker.step()?;
        rx.receive(s)?;
        message.push(s);
    }
    Ok(message)
}

/// Huffman dictionary estimated from the single message of `train_seed`.
pub fn single_message_codebook<T: Real>(
    g: &Graph,
    kind: WalkKind<T>,
    train_seed: u64,
    t90_cap: u64,
    epsilon: T,
) -> Result<CodeBook> {
    let message = message_until_t90(g, kind, train_seed, t90_cap)?;
    huffman_build(&empirical_probability_model(
        &message,
        g.node_count(),
        epsilon,
    )?)
}

/// `R90` of each evaluation run when the dictionary comes from one
/// training message instead of the topology. `None` for censored runs.
pub fn single_message_ratio<T: Real>(
    g: &Graph,
    kind: WalkKind<T>,
    train_seed: u64,
    eval_seeds: &[u64],
    epsilon: T,
    t90_cap: u64,
) -> Result<Vec<Option<T>>> {
    if eval_seeds.is_empty() {
        return Err(Error::param("need at least one evaluation run"));
    }
    let cb = single_message_codebook(g, kind, train_seed, t90_cap, epsilon)?;
    eval_seeds
        .iter()
        .map(|&s| transmit(g, kind, s, t90_cap, 1, Some(&cb)).map(|m| m.r90s))
        .collect()
}
