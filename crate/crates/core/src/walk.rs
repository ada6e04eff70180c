//! Walk dynamics used to sample a network into a symbol stream.
//!
//! Four dynamics are supported: the uniform random walk (RW), degree-biased
//! walks with transition weight `k_j^alpha` (RWD for `alpha = 1`, RWID for
//! `alpha = -1`), and the true self-avoiding walk (TSAW) whose weights
//! `gamma^(-f_e)` penalise edges by how often they were traversed.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Dynamics {
    Rw,
    Rwd,
    Rwid,
    Tsaw,
}

impl Dynamics {
    pub const ALL: [Dynamics; 4] = [Dynamics::Rw, Dynamics::Rwd, Dynamics::Rwid, Dynamics::Tsaw];

    pub fn name(self) -> &'static str {
        match self {
            Dynamics::Rw => "RW",
            Dynamics::Rwd => "RWD",
            Dynamics::Rwid => "RWID",
            Dynamics::Tsaw => "TSAW",
        }
    }
}

impl std::fmt::Display for Dynamics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Dynamics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "RW" => Dynamics::Rw,
            "RWD" => Dynamics::Rwd,
            "RWID" => Dynamics::Rwid,
            "TSAW" => Dynamics::Tsaw,
            _ => return Err(Error::param(format!("unknown dynamics {s:?}"))),
        })
    }
}

/// Default TSAW repulsion base.
pub const DEFAULT_GAMMA: f64 = 2.0;

/// A dynamics together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkKind<T> {
    pub dynamics: Dynamics,
    /// Degree exponent for biased walks (0 for RW, +1 RWD, -1 RWID).
    pub alpha: T,
    /// TSAW repulsion base; `gamma > 1` avoids visited edges, `gamma = 1`
    /// is a plain random walk.
    pub gamma: T,
}

impl<T: Real> WalkKind<T> {
    pub fn rw() -> Self {
        Self::of(Dynamics::Rw)
    }

    pub fn rwd() -> Self {
        Self::of(Dynamics::Rwd)
    }

    pub fn rwid() -> Self {
        Self::of(Dynamics::Rwid)
    }

    pub fn tsaw(gamma: T) -> Self {
        WalkKind {
            gamma,
            ..Self::of(Dynamics::Tsaw)
        }
    }

    /// Degree-biased walk with an arbitrary exponent.
    pub fn degree_biased(alpha: T) -> Self {
        let dynamics = if alpha < T::zero() {
            Dynamics::Rwid
        } else {
            Dynamics::Rwd
        };
        WalkKind {
            dynamics,
            alpha,
            gamma: T::of(DEFAULT_GAMMA),
        }
    }

    /// Default parameters for `dynamics`.
    pub fn of(dynamics: Dynamics) -> Self {
        let alpha = match dynamics {
            Dynamics::Rwd => T::one(),
            Dynamics::Rwid => -T::one(),
            Dynamics::Rw | Dynamics::Tsaw => T::zero(),
        };
        WalkKind {
            dynamics,
            alpha,
            gamma: T::of(DEFAULT_GAMMA),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() {
            return Err(Error::param("alpha must be finite"));
        }
        if !(self.gamma.is_finite() && self.gamma > T::zero()) {
            return Err(Error::param(format!(
                "gamma = {} must be positive",
                self.gamma
            )));
        }
        Ok(())
    }

    fn uses_edge_memory(&self) -> bool {
        self.dynamics == Dynamics::Tsaw
    }
}

/// Where a walk starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Start {
    Node(usize),
    /// Uniform over all nodes, drawn from the walk's own RNG stream.
    Uniform,
}

/// Mutable state of one walker.
#[derive(Debug, Clone)]
pub struct WalkState<R> {
    pub current: usize,
    /// Traversal count per edge id; empty unless the dynamics needs memory.
    pub edge_visits: Vec<u64>,
    pub step_index: u64,
    pub rng: R,
}

impl<R: Rng> WalkState<R> {
    pub fn new<T: Real>(g: &Graph, kind: &WalkKind<T>, start: Start, mut rng: R) -> Result<Self> {
        let n = g.node_count();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let current = match start {
            Start::Node(s) if s < n => s,
            Start::Node(s) => return Err(Error::NodeOutOfRange { node: s, n }),
            Start::Uniform => rng.random_range(0..n),
        };
        let edge_visits = if kind.uses_edge_memory() {
            vec![0; g.edge_count()]
        } else {
            Vec::new()
        };
        Ok(WalkState {
            current,
            edge_visits,
            step_index: 0,
            rng,
        })
    }
}

/// Degree used for the bias of a candidate: `k` when undirected,
/// `k_in + k_out` when directed.
fn bias_table<T: Real>(g: &Graph, kind: &WalkKind<T>) -> Vec<T> {
    match kind.dynamics {
        Dynamics::Rwd | Dynamics::Rwid => g
            .total_degrees()
            .into_iter()
            .map(|k| T::of_usize(k).powf(kind.alpha))
            .collect(),
        Dynamics::Rw | Dynamics::Tsaw => Vec::new(),
    }
}

/// Unnormalised transition weights over the out-neighbors of `node`.
fn fill_weights<T: Real>(
    g: &Graph,
    node: usize,
    kind: &WalkKind<T>,
    edge_visits: &[u64],
    bias: impl Fn(usize) -> T,
    out: &mut Vec<T>,
) -> Result<()> {
    out.clear();
    let nbrs = g.neighbors(node);
    if nbrs.is_empty() {
        return Err(Error::IsolatedNode(node));
    }
    match kind.dynamics {
        Dynamics::Rw => out.extend(nbrs.iter().map(|_| T::one())),
        Dynamics::Rwd | Dynamics::Rwid => out.extend(nbrs.iter().map(|&j| bias(j))),
        Dynamics::Tsaw => {
            let visits = g.neighbor_edges(node).iter().map(|&e| edge_visits[e]);
            // Shift exponents so the largest weight is 1; normalisation
            // cancels the shift and nothing underflows to an all-zero row.
            let shift = if kind.gamma >= T::one() {
                visits.clone().min()
            } else {
                visits.clone().max()
            }
            .expect("non-empty");
            out.extend(visits.map(|f| {
                let d = f.abs_diff(shift).min(i32::MAX as u64) as i32;
                if kind.gamma >= T::one() {
                    kind.gamma.powi(-d)
                } else {
                    kind.gamma.powi(d)
                }
            }));
        }
    }
    Ok(())
}

/// Index drawn from `weights` by one uniform draw over the cumulative sums.
fn sample_index<T: Real, R: Rng + ?Sized>(weights: &[T], rng: &mut R) -> usize {
    let total: T = weights.iter().copied().sum();
    let target = T::of(rng.random::<f64>()) * total;
    let mut acc = T::zero();
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if target < acc {
            return i;
        }
    }
    weights
        .iter()
        .rposition(|&w| w > T::zero())
        .unwrap_or(weights.len() - 1)
}

fn normalized<T: Real>(mut w: Vec<T>) -> Vec<T> {
    let total: T = w.iter().copied().sum();
    for x in w.iter_mut() {
        *x /= total;
    }
    w
}

/// Transition probabilities from the current node, in the order of
/// [`Graph::neighbors`].
pub fn transition_probs<T: Real, R>(
    g: &Graph,
    state: &WalkState<R>,
    kind: &WalkKind<T>,
) -> Result<Vec<T>> {
    let degrees = g.total_degrees();
    let mut w = Vec::new();
    fill_weights(
        g,
        state.current,
        kind,
        &state.edge_visits,
        |j| T::of_usize(degrees[j]).powf(kind.alpha),
        &mut w,
    )?;
    Ok(normalized(w))
}

fn advance<T: Real, R: Rng>(
    g: &Graph,
    state: &mut WalkState<R>,
    kind: &WalkKind<T>,
    bias: &[T],
    scratch: &mut Vec<T>,
) -> Result<(usize, usize)> {
    fill_weights(
        g,
        state.current,
        kind,
        &state.edge_visits,
        |j| bias[j],
        scratch,
    )?;
    let i = sample_index(scratch, &mut state.rng);
    let next = g.neighbors(state.current)[i];
    let edge = g.neighbor_edges(state.current)[i];
    if kind.uses_edge_memory() {
        state.edge_visits[edge] += 1;
    }
    state.current = next;
    state.step_index += 1;
    Ok((next, edge))
}

/// Moves the walker one step and returns the new node.
pub fn step<T: Real, R: Rng>(
    g: &Graph,
    state: &mut WalkState<R>,
    kind: &WalkKind<T>,
) -> Result<usize> {
    let bias = bias_table(g, kind);
    advance(g, state, kind, &bias, &mut Vec::new()).map(|(n, _)| n)
}

/// A walker bound to one graph, with the degree bias precomputed.
#[derive(Debug, Clone)]
pub struct Walker<'g, T, R> {
    graph: &'g Graph,
    kind: WalkKind<T>,
    bias: Vec<T>,
    state: WalkState<R>,
    scratch: Vec<T>,
}

impl<'g, T: Real, R: Rng> Walker<'g, T, R> {
    pub fn new(graph: &'g Graph, kind: WalkKind<T>, start: Start, rng: R) -> Result<Self> {
        kind.validate()?;
        let state = WalkState::new(graph, &kind, start, rng)?;
        Ok(Walker {
            graph,
            bias: bias_table(graph, &kind),
            kind,
            state,
            scratch: Vec::new(),
        })
    }

    pub fn current(&self) -> usize {
        self.state.current
    }

    pub fn state(&self) -> &WalkState<R> {
        &self.state
    }

    pub fn kind(&self) -> &WalkKind<T> {
        &self.kind
    }

    pub fn transition_probs(&mut self) -> Result<Vec<T>> {
        let mut w = Vec::new();
        fill_weights(
            self.graph,
            self.state.current,
            &self.kind,
            &self.state.edge_visits,
            |j| self.bias[j],
            &mut w,
        )?;
        Ok(normalized(w))
    }

    /// Next symbol.
    pub fn step(&mut self) -> Result<usize> {
        self.step_edge().map(|(n, _)| n)
    }

    /// Next symbol and the id of the edge just traversed.
    pub fn step_edge(&mut self) -> Result<(usize, usize)> {
        advance(
            self.graph,
            &mut self.state,
            &self.kind,
            &self.bias,
            &mut self.scratch,
        )
    }
}

/// Runs a walk for `steps` steps and returns the `steps + 1` visited nodes,
/// start included.
pub fn simulate<T: Real, R: Rng>(
    g: &Graph,
    kind: WalkKind<T>,
    steps: usize,
    start: Start,
    rng: R,
) -> Result<Vec<usize>> {
    if steps == 0 {
        return Err(Error::param("steps must be >= 1"));
    }
    let mut walker = Walker::new(g, kind, start, rng)?;
    let mut seq = Vec::with_capacity(steps + 1);
    seq.push(walker.current());
    for _ in 0..steps {
        seq.push(walker.step()?);
    }
    Ok(seq)
}

/// Stationary visit probabilities predicted from the topology alone.
///
/// Undirected RW and TSAW: `P_i ∝ k_i`. Undirected degree-biased walks:
/// `P_i ∝ k_i^alpha * Σ_{j ∈ Γ_i} k_j^alpha`. Directed graphs, any dynamics:
/// `P_i ∝ k_out(i)`, which is exact only when `k_in = k_out` everywhere.
pub fn predicted_stationary<T: Real>(g: &Graph, kind: &WalkKind<T>) -> Result<Vec<T>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let weights: Vec<T> = if g.is_directed() {
        g.out_degrees().into_iter().map(T::of_usize).collect()
    } else {
        match kind.dynamics {
            Dynamics::Rw | Dynamics::Tsaw => g.out_degrees().into_iter().map(T::of_usize).collect(),
            Dynamics::Rwd | Dynamics::Rwid => {
                let pow: Vec<T> = g
                    .out_degrees()
                    .into_iter()
                    .map(|k| T::of_usize(k).powf(kind.alpha))
                    .collect();
                (0..g.node_count())
                    .map(|i| pow[i] * g.neighbors(i).iter().map(|&j| pow[j]).sum::<T>())
                    .collect()
            }
        }
    };
    let total: T = weights.iter().copied().sum();
    if total.is_nan() || total <= T::zero() {
        return Err(Error::NoEdges);
    }
    Ok(normalized(weights))
}
