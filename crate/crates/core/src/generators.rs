//! Random network models calibrated to a target mean degree.
//!
//! All generators are pure functions of their parameters and the RNG stream.
//! Undirected models (ER, BA, WS, WAX, GEO) feed the directed pipeline via
//! [`Graph::to_directed`]; KN and ERE are directed by construction.

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Distance scale of the Waxman connection kernel.
pub const WAXMAN_DISTANCE_SCALE: f64 = 0.15;
/// Relative tolerance on realized mean degree for calibrated models.
pub const CALIBRATION_TOLERANCE: f64 = 0.02;
/// Bisection budget for calibrated models.
pub const CALIBRATION_STEPS: usize = 50;
/// Swap budget for configuration-model repair.
pub const ERE_SWAP_ATTEMPTS: usize = 10_000;
/// Reciprocity applied when converting undirected models to directed ones.
pub const DEFAULT_RECIPROCITY: f64 = 0.6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ModelKind {
    Er,
    Ba,
    Ws,
    Wax,
    Geo,
    Kn,
    Ere,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Er => "ER",
            ModelKind::Ba => "BA",
            ModelKind::Ws => "WS",
            ModelKind::Wax => "WAX",
            ModelKind::Geo => "GEO",
            ModelKind::Kn => "KN",
            ModelKind::Ere => "ERE",
        }
    }

    /// Models that produce directed graphs directly.
    pub fn is_directed(self) -> bool {
        matches!(self, ModelKind::Kn | ModelKind::Ere)
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "ER" => ModelKind::Er,
            "BA" => ModelKind::Ba,
            "WS" => ModelKind::Ws,
            "WAX" => ModelKind::Wax,
            "GEO" => ModelKind::Geo,
            "KN" => ModelKind::Kn,
            "ERE" => ModelKind::Ere,
            _ => return Err(Error::param(format!("unknown model {s:?}"))),
        })
    }
}

fn default_mean_degree() -> f64 {
    8.0
}

/// One network model with its parameters, as it appears in experiment
/// configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub model: ModelKind,
    /// Display label; defaults to the model name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub n: usize,
    #[serde(default = "default_mean_degree")]
    pub mean_degree: f64,
    /// WS rewiring probability.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// BA edges per new node; defaults to half the mean degree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Reciprocity used by the directed pipeline; defaults to 0.6.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reciprocity: Option<f64>,
}

impl ModelSpec {
    pub fn new(model: ModelKind, n: usize, mean_degree: f64) -> Self {
        ModelSpec {
            model,
            label: None,
            n,
            mean_degree,
            p: None,
            m: None,
            reciprocity: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = Some(m);
        self
    }

    pub fn with_reciprocity(mut self, r: f64) -> Self {
        self.reciprocity = Some(r);
        self
    }

    pub fn label(&self) -> String {
        self.label
            .clone()
            .unwrap_or_else(|| self.model.name().to_string())
    }

    pub fn reciprocity(&self) -> f64 {
        self.reciprocity.unwrap_or(DEFAULT_RECIPROCITY)
    }

    pub fn ba_m(&self) -> usize {
        self.m
            .unwrap_or_else(|| ((self.mean_degree / 2.0).round() as usize).max(1))
    }

    pub fn ws_p(&self) -> f64 {
        self.p.unwrap_or(0.01)
    }

    /// Node count actually generated: WS rounds down to a perfect square.
    pub fn resolved_n(&self) -> usize {
        match self.model {
            ModelKind::Ws => {
                let side = isqrt(self.n);
                side * side
            }
            _ => self.n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 10 {
            return Err(Error::param(format!("n = {} below 10", self.n)));
        }
        if !(self.mean_degree > 0.0 && self.mean_degree < (self.n - 1) as f64) {
            return Err(Error::param(format!(
                "mean degree {} outside (0, n - 1)",
                self.mean_degree
            )));
        }
        if let Some(r) = self.reciprocity {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::param(format!("reciprocity {r} outside [0, 1]")));
            }
        }
        match self.model {
            ModelKind::Ws => {
                let p = self.ws_p();
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::param(format!("WS p = {p} outside [0, 1]")));
                }
            }
            ModelKind::Ba => {
                if self.ba_m() == 0 {
                    return Err(Error::param("BA requires m >= 1"));
                }
            }
            ModelKind::Kn => {
                kn_threads(self.mean_degree)?;
            }
            _ => {}
        }
        Ok(())
    }

    /// Raw model output: undirected for ER/BA/WS/WAX/GEO (WAX and GEO
    /// already restricted to their giant component), directed for KN/ERE.
    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Graph> {
        self.validate()?;
        let n = self.resolved_n();
        match self.model {
            ModelKind::Er => generate_er(n, self.mean_degree, rng),
            ModelKind::Ba => generate_ba(n, self.ba_m(), rng),
            ModelKind::Ws => generate_ws(n, self.ws_p(), rng),
            ModelKind::Wax => generate_wax(n, self.mean_degree, rng),
            ModelKind::Geo => generate_geo(n, self.mean_degree, rng),
            ModelKind::Kn => generate_kn(n, self.mean_degree, rng),
            ModelKind::Ere => generate_ere(n, self.mean_degree, rng),
        }
    }

    /// Graph ready for transmission.
    ///
    /// Undirected: giant component. Directed: undirected models are converted
    /// with [`ModelSpec::reciprocity`]; then the largest strongly connected
    /// component is kept. KN and ERE require `directed`.
    pub fn prepare<R: Rng + ?Sized>(&self, directed: bool, rng: &mut R) -> Result<Graph> {
        let raw = self.generate(rng)?;
        if raw.is_directed() {
            if !directed {
                return Err(Error::param(format!(
                    "{} is intrinsically directed",
                    self.model.name()
                )));
            }
            return raw.largest_strongly_connected_component();
        }
        if directed {
            raw.to_directed(self.reciprocity(), rng)?
                .largest_strongly_connected_component()
        } else {
            raw.largest_connected_component()
        }
    }
}

fn isqrt(n: usize) -> usize {
    let mut s = (n as f64).sqrt() as usize;
    while s * s > n {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= n {
        s += 1;
    }
    s
}

fn kn_threads(mean_degree: f64) -> Result<usize> {
    let threads = mean_degree / 2.0;
    if threads < 1.0 || threads.fract() != 0.0 {
        return Err(Error::param(format!(
            "KN needs an even mean degree >= 2, got {mean_degree}"
        )));
    }
    Ok(threads as usize)
}

/// Erdős–Rényi G(n, p) with `p = mean_degree / (n - 1)`.
pub fn generate_er<R: Rng + ?Sized>(n: usize, mean_degree: f64, rng: &mut R) -> Result<Graph> {
    if n < 2 {
        return Err(Error::param("ER needs at least two nodes"));
    }
    let p = mean_degree / (n - 1) as f64;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!("ER connection probability {p}")));
    }
    gnp(n, p, rng)
}

pub(crate) fn gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, false, edges)
}

/// Barabási–Albert preferential attachment from an `(m + 1)`-clique.
pub fn generate_ba<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Graph> {
    if m == 0 {
        return Err(Error::param("BA requires m >= 1"));
    }
    if n <= m {
        return Err(Error::param(format!(
            "BA requires n > m (n = {n}, m = {m})"
        )));
    }
    let mut edges = Vec::with_capacity(m * (m + 1) / 2 + (n - m - 1) * m);
    // Each endpoint appears once per incident edge, so a uniform pick from
    // the urn is degree-proportional.
    let mut urn = Vec::with_capacity(2 * edges.capacity());
    for u in 0..=m {
        for v in u + 1..=m {
            edges.push((u, v));
            urn.push(u);
            urn.push(v);
        }
    }
    let mut chosen = Vec::with_capacity(m);
    for new in m + 1..n {
        chosen.clear();
        while chosen.len() < m {
            let t = urn[rng.random_range(0..urn.len())];
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            edges.push((t, new));
            urn.push(t);
            urn.push(new);
        }
    }
    Graph::from_edges(n, false, edges)
}

/// Edges of the Moore-neighborhood square torus of side `side`.
pub fn moore_torus_edges(side: usize) -> Vec<(usize, usize)> {
    let id = |x: usize, y: usize| (y % side) * side + (x % side);
    let mut edges = Vec::with_capacity(4 * side * side);
    for y in 0..side {
        for x in 0..side {
            let u = id(x, y);
            edges.push((u, id(x + 1, y)));
            edges.push((u, id(x, y + 1)));
            edges.push((u, id(x + 1, y + 1)));
            edges.push((u, id(x + 1, y + side - 1)));
        }
    }
    edges
}

/// Watts–Strogatz variant on a 2-D Moore torus: each lattice edge keeps its
/// first endpoint and, with probability `p`, has the other one redrawn
/// uniformly among non-neighbors.
pub fn generate_ws<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    let side = isqrt(n);
    if side * side != n {
        return Err(Error::param(format!(
            "WS lattice needs a square n, got {n}"
        )));
    }
    if side < 3 {
        return Err(Error::param("WS lattice side must be at least 3"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!("WS p = {p} outside [0, 1]")));
    }
    let lattice = moore_torus_edges(side);
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for &(u, v) in &lattice {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    for &(u, v) in &lattice {
        if !rng.random_bool(p) || adj[u].len() >= n - 1 {
            continue;
        }
        let w = loop {
            let w = rng.random_range(0..n);
            if w != u && !adj[u].contains(&w) {
                break w;
            }
        };
        adj[u].remove(&v);
        adj[v].remove(&u);
        adj[u].insert(w);
        adj[w].insert(u);
    }
    let edges = adj
        .iter()
        .enumerate()
        .flat_map(|(u, nb)| nb.iter().filter(move |&&v| u < v).map(move |&v| (u, v)));
    Graph::from_edges(n, false, edges)
}

/// Uniform positions in the unit square.
pub fn random_points<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<(f64, f64)> {
    (0..n).map(|_| (rng.random(), rng.random())).collect()
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

/// Pairs sorted by a scalar key; the graph at threshold `t` holds every pair
/// with `key < t`, so edge sets are nested in `t`.
struct ThresholdPairs {
    n: usize,
    pairs: Vec<(f64, usize, usize)>,
}

impl ThresholdPairs {
    fn new(n: usize, mut pairs: Vec<(f64, usize, usize)>) -> Self {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
        ThresholdPairs { n, pairs }
    }

    fn graph(&self, threshold: f64) -> Graph {
        let k = self.pairs.partition_point(|p| p.0 < threshold);
        Graph::from_edges(self.n, false, self.pairs[..k].iter().map(|p| (p.1, p.2)))
            .expect("pairs are distinct and in range")
    }

    fn max_key(&self) -> f64 {
        self.pairs.last().map_or(0.0, |p| p.0)
    }

    /// Bisects the threshold until the giant component's mean degree is
    /// within tolerance of `target`.
    fn calibrate(&self, model: &'static str, target: f64) -> Result<Graph> {
        let mut lo = 0.0;
        let mut hi = self.max_key() * (1.0 + 1e-9) + 1e-12;
        let mut best: Option<(f64, Graph)> = None;
        for _ in 0..CALIBRATION_STEPS {
            let mid = 0.5 * (lo + hi);
            let giant = self
                .graph(mid)
                .largest_connected_component()
                .expect("n >= 1");
            let realized = giant.mean_degree();
            let err = (realized - target).abs();
            if best.as_ref().is_none_or(|(e, _)| err < *e) {
                best = Some((err, giant));
            }
            if err <= 0.25 * CALIBRATION_TOLERANCE * target {
                break;
            }
            if realized < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        match best {
            Some((err, g)) if err <= CALIBRATION_TOLERANCE * target => Ok(g),
            best => Err(Error::CalibrationFailed {
                model,
                target,
                best: best.map_or(f64::NAN, |(_, g)| g.mean_degree()),
            }),
        }
    }
}

/// Random geometric graph on fixed positions: pairs closer than `radius`.
pub fn geometric_graph(points: &[(f64, f64)], radius: f64) -> Graph {
    let n = points.len();
    let edges = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| dist(points[u], points[v]) < radius);
    Graph::from_edges(n, false, edges).expect("pairs are distinct and in range")
}

/// Random geometric model with the radius calibrated by bisection.
pub fn generate_geo<R: Rng + ?Sized>(n: usize, mean_degree: f64, rng: &mut R) -> Result<Graph> {
    let points = random_points(n, rng);
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            pairs.push((dist(points[u], points[v]), u, v));
        }
    }
    ThresholdPairs::new(n, pairs).calibrate("GEO", mean_degree)
}

/// Waxman graph on fixed positions: each pair joins with probability
/// `beta * exp(-d / d0)`.
pub fn waxman_graph<R: Rng + ?Sized>(
    points: &[(f64, f64)],
    beta: f64,
    d0: f64,
    rng: &mut R,
) -> Graph {
    let n = points.len();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = beta * (-dist(points[u], points[v]) / d0).exp();
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, false, edges).expect("pairs are distinct and in range")
}

/// Waxman model with `d0 = 0.15` and `beta` calibrated by bisection.
///
/// One uniform draw `u` per pair is fixed up front; the pair is an edge at
/// `beta` iff `u * exp(d / d0) < beta`, so every bisection probe sees the
/// same randomness and the edge count is monotone in `beta`.
pub fn generate_wax<R: Rng + ?Sized>(n: usize, mean_degree: f64, rng: &mut R) -> Result<Graph> {
    let points = random_points(n, rng);
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            let draw: f64 = rng.random();
            let key = draw * (dist(points[u], points[v]) / WAXMAN_DISTANCE_SCALE).exp();
            pairs.push((key, u, v));
        }
    }
    ThresholdPairs::new(n, pairs).calibrate("WAX", mean_degree)
}

/// Knitted network: `mean_degree / 2` threads, each a uniformly random
/// permutation of all nodes with an arc between consecutive entries.
pub fn generate_kn<R: Rng + ?Sized>(n: usize, mean_degree: f64, rng: &mut R) -> Result<Graph> {
    let threads = kn_threads(mean_degree)?;
    knitted(n, threads, rng)
}

pub fn knitted<R: Rng + ?Sized>(n: usize, threads: usize, rng: &mut R) -> Result<Graph> {
    let mut order: Vec<usize> = (0..n).collect();
    let mut arcs = Vec::with_capacity(threads * n.saturating_sub(1));
    for _ in 0..threads {
        order.shuffle(rng);
        arcs.extend(order.windows(2).map(|w| (w[0], w[1])));
    }
    Graph::from_edges(n, true, arcs)
}

/// Directed configuration model with `k_in = k_out` at every node and no
/// self-loops, multi-arcs or reciprocal pairs.
///
/// Each node gets `d ~ Binomial(n - 1, (mean_degree / 2) / (n - 1))` in- and
/// out-stubs. Violating pairs are repaired by target swaps with random
/// partners, which keep every node's stub counts.
pub fn generate_ere<R: Rng + ?Sized>(n: usize, mean_degree: f64, rng: &mut R) -> Result<Graph> {
    if n < 3 {
        return Err(Error::param("ERE needs at least three nodes"));
    }
    let p = mean_degree / 2.0 / (n - 1) as f64;
    let binom = Binomial::new((n - 1) as u64, p)
        .map_err(|e| Error::param(format!("ERE degree distribution: {e}")))?;
    let mut tails = Vec::new();
    for u in 0..n {
        let d = binom.sample(rng) as usize;
        tails.extend(std::iter::repeat_n(u, d));
    }
    let mut heads = tails.clone();
    heads.shuffle(rng);
    let mut pairs: Vec<(usize, usize)> = tails.into_iter().zip(heads).collect();

    let mut count: HashMap<(usize, usize), usize> = HashMap::with_capacity(pairs.len());
    for &a in &pairs {
        *count.entry(a).or_default() += 1;
    }
    let bad = |a: (usize, usize), count: &HashMap<(usize, usize), usize>| {
        a.0 == a.1 || count.get(&a).copied().unwrap_or(0) > 1 || count.contains_key(&(a.1, a.0))
    };
    let remove = |a: (usize, usize), count: &mut HashMap<(usize, usize), usize>| {
        let c = count.get_mut(&a).expect("present");
        *c -= 1;
        if *c == 0 {
            count.remove(&a);
        }
    };

    let mut attempts = 0;
    while let Some(k) = (0..pairs.len()).find(|&k| bad(pairs[k], &count)) {
        if pairs.len() < 2 {
            return Err(Error::RewiringFailed { attempts });
        }
        loop {
            attempts += 1;
            if attempts > ERE_SWAP_ATTEMPTS {
                return Err(Error::RewiringFailed { attempts });
            }
            let l = rng.random_range(0..pairs.len());
            if l == k {
                continue;
            }
            let (a, b) = pairs[k];
            let (c, d) = pairs[l];
            let (x, y) = ((a, d), (c, b));
            remove(pairs[k], &mut count);
            remove(pairs[l], &mut count);
            let ok = x.0 != x.1
                && y.0 != y.1
                && x != y
                && x != (y.1, y.0)
                && !count.contains_key(&x)
                && !count.contains_key(&y)
                && !count.contains_key(&(x.1, x.0))
                && !count.contains_key(&(y.1, y.0));
            if ok {
                pairs[k] = x;
                pairs[l] = y;
            }
            *count.entry(pairs[k]).or_default() += 1;
            *count.entry(pairs[l]).or_default() += 1;
            if ok {
                break;
            }
        }
    }
    Graph::from_edges(n, true, pairs)
}
