//! Compact graph representation shared by generators, walkers and receivers.
//!
//! Nodes are dense ids `0..n`. Adjacency is stored in CSR form with each
//! node's out-neighbors sorted ascending, so enumerating transition
//! candidates is deterministic. Every edge carries an id in `0..edge_count`;
//! an undirected edge has one id shared by both traversal directions.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    directed: bool,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    arc_edge: Vec<usize>,
    /// Canonical endpoints per edge id; `(min, max)` when undirected.
    edges: Vec<(usize, usize)>,
    /// Original node id for each node, kept through component extraction.
    labels: Vec<usize>,
}

/// Degree vectors as returned by [`Graph::degrees`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Degrees {
    Undirected(Vec<usize>),
    Directed { k_in: Vec<usize>, k_out: Vec<usize> },
}

impl Graph {
    /// Builds a graph from an edge list.
    ///
    /// Duplicate edges are merged (for undirected graphs `u v` and `v u` are
    /// the same edge). Self-loops and out-of-range ids are rejected.
    pub fn from_edges<I>(n: usize, directed: bool, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list = Vec::new();
        for (u, v) in edges {
            for node in [u, v] {
                if node >= n {
                    return Err(Error::NodeOutOfRange { node, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            list.push(if directed || u < v { (u, v) } else { (v, u) });
        }
        list.sort_unstable();
        list.dedup();
        Ok(Self::from_canonical(n, directed, list, (0..n).collect()))
    }

    fn from_canonical(
        n: usize,
        directed: bool,
        edges: Vec<(usize, usize)>,
        labels: Vec<usize>,
    ) -> Self {
        let mut arcs: Vec<(usize, usize, usize)> = Vec::with_capacity(edges.len() * 2);
        for (id, &(u, v)) in edges.iter().enumerate() {
            arcs.push((u, v, id));
            if !directed {
                arcs.push((v, u, id));
            }
        }
        arcs.sort_unstable();
        let mut offsets = vec![0usize; n + 1];
        for &(u, _, _) in &arcs {
            offsets[u + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets = arcs.iter().map(|a| a.1).collect();
        let arc_edge = arcs.iter().map(|a| a.2).collect();
        Graph {
            directed,
            offsets,
            targets,
            arc_edge,
            edges,
            labels,
        }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Sorted out-neighbors of `node`.
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.targets[self.offsets[node]..self.offsets[node + 1]]
    }

    /// Edge ids parallel to [`Graph::neighbors`].
    pub fn neighbor_edges(&self, node: usize) -> &[usize] {
        &self.arc_edge[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn out_degree(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    /// Id of the edge traversed when stepping from `u` to `v`, if any.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.node_count() {
            return None;
        }
        let nbrs = self.neighbors(u);
        nbrs.binary_search(&v)
            .ok()
            .map(|i| self.neighbor_edges(u)[i])
    }

    /// Canonical edge list indexed by edge id.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Original node ids (identity unless produced by component extraction).
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn degrees(&self) -> Degrees {
        if self.directed {
            Degrees::Directed {
                k_in: self.in_degrees(),
                k_out: self.out_degrees(),
            }
        } else {
            Degrees::Undirected(self.out_degrees())
        }
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|i| self.out_degree(i)).collect()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        if !self.directed {
            return self.out_degrees();
        }
        let mut k_in = vec![0; self.node_count()];
        for &t in &self.targets {
            k_in[t] += 1;
        }
        k_in
    }

    /// Degree used as the topological reference: `k` for undirected graphs,
    /// `k_in + k_out` for directed ones.
    pub fn total_degrees(&self) -> Vec<usize> {
        if !self.directed {
            return self.out_degrees();
        }
        let mut k = self.out_degrees();
        for &t in &self.targets {
            k[t] += 1;
        }
        k
    }

    /// Mean of [`Graph::total_degrees`], i.e. `2 E / n`.
    pub fn mean_degree(&self) -> f64 {
        if self.node_count() == 0 {
            return 0.0;
        }
        2.0 * self.edge_count() as f64 / self.node_count() as f64
    }

    /// Graph with every arc reversed (identity for undirected graphs).
    pub fn transpose(&self) -> Graph {
        if !self.directed {
            return self.clone();
        }
        let edges = self.edges.iter().map(|&(u, v)| (v, u)).collect::<Vec<_>>();
        let mut g = Graph::from_edges(self.node_count(), true, edges)
            .expect("reversed arcs of a valid graph are valid");
        g.labels = self.labels.clone();
        g
    }

    /// Subgraph induced by `nodes`, relabelled `0..nodes.len()` in ascending
    /// order of the current ids. Original labels are carried over.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Graph {
        let mut keep: Vec<usize> = nodes.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut index = vec![usize::MAX; self.node_count()];
        for (new, &old) in keep.iter().enumerate() {
            index[old] = new;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]))
            .collect::<Vec<_>>();
        let labels = keep.iter().map(|&old| self.labels[old]).collect();
        let mut edges = edges;
        if !self.directed {
            for e in edges.iter_mut() {
                if e.0 > e.1 {
                    *e = (e.1, e.0);
                }
            }
        }
        edges.sort_unstable();
        Graph::from_canonical(keep.len(), self.directed, edges, labels)
    }

    /// Connected components of an undirected graph (or weak components of a
    /// directed one), each sorted ascending.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.node_count();
        let mut undirected_adj: Vec<Vec<usize>> = Vec::new();
        if self.directed {
            undirected_adj = vec![Vec::new(); n];
            for &(u, v) in &self.edges {
                undirected_adj[u].push(v);
                undirected_adj[v].push(u);
            }
        }
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                let nbrs = if self.directed {
                    &undirected_adj[u][..]
                } else {
                    self.neighbors(u)
                };
                for &v in nbrs {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Strongly connected components (Kosaraju, iterative), each sorted.
    pub fn strongly_connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.node_count();
        if !self.directed {
            return self.connected_components();
        }
        // First pass: post-order on the forward graph.
        let mut order = Vec::with_capacity(n);
        let mut visited = vec![false; n];
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for s in 0..n {
            if visited[s] {
                continue;
            }
            visited[s] = true;
            stack.push((s, 0));
            while let Some(&mut (u, ref mut next)) = stack.last_mut() {
                let nbrs = self.neighbors(u);
                if *next < nbrs.len() {
                    let v = nbrs[*next];
                    *next += 1;
                    if !visited[v] {
                        visited[v] = true;
                        stack.push((v, 0));
                    }
                } else {
                    order.push(u);
                    stack.pop();
                }
            }
        }
        // Second pass: reverse post-order on the transpose.
        let rev = self.transpose();
        let mut comp_of = vec![usize::MAX; n];
        let mut comps = Vec::new();
        let mut dfs = Vec::new();
        for &s in order.iter().rev() {
            if comp_of[s] != usize::MAX {
                continue;
            }
            let c = comps.len();
            comp_of[s] = c;
            dfs.push(s);
            let mut comp = Vec::new();
            while let Some(u) = dfs.pop() {
                comp.push(u);
                for &v in rev.neighbors(u) {
                    if comp_of[v] == usize::MAX {
                        comp_of[v] = c;
                        dfs.push(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    fn largest_of(&self, comps: Vec<Vec<usize>>) -> Graph {
        // Ties go to the component holding the smallest original label.
        let best = comps
            .into_iter()
            .max_by(|a, b| {
                let min_a = a.iter().map(|&i| self.labels[i]).min();
                let min_b = b.iter().map(|&i| self.labels[i]).min();
                a.len().cmp(&b.len()).then(min_b.cmp(&min_a))
            })
            .expect("non-empty graph has a component");
        self.induced_subgraph(&best)
    }

    /// Induced subgraph on the largest connected component of an undirected
    /// graph.
    pub fn largest_connected_component(&self) -> Result<Graph> {
        if self.directed {
            return Err(Error::Directedness {
                expected: "undirected",
            });
        }
        if self.node_count() == 0 {
            return Err(Error::EmptyGraph);
        }
        Ok(self.largest_of(self.connected_components()))
    }

    /// Induced subgraph on the largest strongly connected component.
    pub fn largest_strongly_connected_component(&self) -> Result<Graph> {
        if !self.directed {
            return Err(Error::Directedness {
                expected: "directed",
            });
        }
        if self.node_count() == 0 {
            return Err(Error::EmptyGraph);
        }
        Ok(self.largest_of(self.strongly_connected_components()))
    }

    /// True when every node reaches every other one (following arc
    /// directions for directed graphs).
    pub fn is_connected(&self) -> bool {
        match self.node_count() {
            0 => false,
            _ if self.directed => self.strongly_connected_components().len() == 1,
            _ => self.connected_components().len() == 1,
        }
    }

    /// Assigns directions to every undirected edge.
    ///
    /// With probability `r` the edge becomes a reciprocal pair; otherwise a
    /// single direction is picked with probability 1/2 each.
    pub fn to_directed<R: Rng + ?Sized>(&self, r: f64, rng: &mut R) -> Result<Graph> {
        if self.directed {
            return Err(Error::Directedness {
                expected: "undirected",
            });
        }
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::param(format!("reciprocity {r} outside [0, 1]")));
        }
        let mut arcs = Vec::with_capacity(self.edge_count() * 2);
        for &(u, v) in &self.edges {
            let draw: f64 = rng.random();
            if draw <= r {
                arcs.push((u, v));
                arcs.push((v, u));
            } else if rng.random_bool(0.5) {
                arcs.push((u, v));
            } else {
                arcs.push((v, u));
            }
        }
        arcs.sort_unstable();
        Ok(Graph::from_canonical(
            self.node_count(),
            true,
            arcs,
            self.labels.clone(),
        ))
    }

    /// Fraction of arcs whose reverse arc is also present.
    pub fn reciprocity(&self) -> Result<f64> {
        if !self.directed {
            return Err(Error::Directedness {
                expected: "directed",
            });
        }
        if self.edges.is_empty() {
            return Err(Error::NoEdges);
        }
        let mutual = self
            .edges
            .iter()
            .filter(|&&(u, v)| self.edge_between(v, u).is_some())
            .count();
        Ok(mutual as f64 / self.edges.len() as f64)
    }

    /// Serializes to the edge-list text format: a `directed <n>` or
    /// `undirected <n>` header followed by one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(16 + self.edges.len() * 10);
        let kind = if self.directed {
            "directed"
        } else {
            "undirected"
        };
        let _ = writeln!(out, "{kind} {}", self.node_count());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn read_edge_list<R: Read>(reader: R) -> Result<Graph> {
        let mut lines = BufReader::new(reader).lines().enumerate();
        let mut header = None;
        for (i, line) in lines.by_ref() {
            let line = line.map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            header = Some((i + 1, trimmed.to_string()));
            break;
        }
        let (hline, header) = header.ok_or(Error::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let mut parts = header.split_whitespace();
        let directed = match parts.next() {
            Some("directed") => true,
            Some("undirected") => false,
            other => {
                return Err(Error::Parse {
                    line: hline,
                    message: format!("expected directed|undirected, got {other:?}"),
                })
            }
        };
        let n = parse_field(parts.next(), hline)?;
        let mut edges = Vec::new();
        for (i, line) in lines {
            let line = line.map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut parts = trimmed.split_whitespace();
            let u = parse_field(parts.next(), i + 1)?;
            let v = parse_field(parts.next(), i + 1)?;
            if parts.next().is_some() {
                return Err(Error::Parse {
                    line: i + 1,
                    message: "trailing fields".into(),
                });
            }
            edges.push((u, v));
        }
        Graph::from_edges(n, directed, edges)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Graph> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Graph::read_edge_list(file)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_edge_list()).map_err(|e| Error::io(path, e))
    }
}

fn parse_field(field: Option<&str>, line: usize) -> Result<usize> {
    let field = field.ok_or(Error::Parse {
        line,
        message: "missing field".into(),
    })?;
    field.parse().map_err(|_| Error::Parse {
        line,
        message: format!("not a node id: {field:?}"),
    })
}
