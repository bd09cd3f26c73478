//! Finite simple undirected graphs with positive edge metrics.
//!
//! Everything downstream (energies, capacities, moduli, packings) works on
//! this representation: dense vertex indices, an edge list, and derived
//! adjacency. Graphs are validated at construction: no loops, no duplicate
//! edges, connected.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::collections::VecDeque;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("empty edge list")]
    EmptyEdgeList,
    #[error("vertex {index} out of range for {n} vertices")]
    VertexOutOfRange { index: usize, n: usize },
    #[error("metric has {got} values but the graph has {want} edges")]
    MetricLengthMismatch { got: usize, want: usize },
    #[error("metric value {value} at edge {edge} is not strictly positive and finite")]
    NonpositiveMetric { edge: usize, value: f64 },
    #[error("function has {got} values but the graph has {want} vertices")]
    FunctionLengthMismatch { got: usize, want: usize },
    #[error("function value at vertex {0} is not finite")]
    NonfiniteValue(usize),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Finite simple connected undirected graph with dense vertex indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    /// Builds a graph from an edge list. Vertex count is inferred as
    /// `max index + 1`; indices must therefore be dense. Rejects loops,
    /// duplicate edges (in either orientation) and disconnected input.
    pub fn from_edges(edge_list: &[(usize, usize)]) -> Result<Self, GraphError> {
        if edge_list.is_empty() {
            return Err(GraphError::EmptyEdgeList);
        }
        let n = edge_list
            .iter()
            .map(|&(u, v)| u.max(v))
            .max()
            .unwrap()
            + 1;
        Self::from_parts(n, edge_list)
    }

    /// Builds a graph with an explicit vertex count. A single vertex with no
    /// edges is allowed (needed for induced subgraphs of balls of radius 0).
    pub fn from_parts(n: usize, edge_list: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::EmptyEdgeList);
        }
        let mut edges = Vec::with_capacity(edge_list.len());
        let mut seen = std::collections::HashSet::with_capacity(edge_list.len());
        for &(u, v) in edge_list {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { index: u.max(v), n });
            }
            if u == v {
                return Err(GraphError::LoopEdge(u));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(GraphError::DuplicateEdge(key.0, key.1));
            }
            edges.push(key);
        }
        let mut adj = vec![Vec::new(); n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        let g = Graph { n, edges, adj };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::new();
        seen[0] = true;
        queue.push_back(0);
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &(u, _) in &self.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        count == self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edge endpoint pairs, normalized so `u < v`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// Neighbors of `v` as `(neighbor, edge index)`, sorted by neighbor.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edge index between `u` and `v`, if adjacent.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        let list = &self.adj[u];
        list.binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| list[i].1)
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange { index: v, n: self.n });
        }
        Ok(())
    }

    /// Hop distances from a set of sources (breadth-first search).
    /// Unreachable vertices get `usize::MAX`, which cannot happen on a
    /// connected graph with nonempty sources.
    pub fn hop_distances(&self, sources: &[usize]) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s] == usize::MAX {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &(u, _) in &self.adj[v] {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// Vertices at hop distance at most `radius` from `center`, sorted.
    pub fn ball(&self, center: usize, radius: usize) -> Vec<usize> {
        let dist = self.hop_distances(&[center]);
        (0..self.n).filter(|&v| dist[v] <= radius).collect()
    }

    /// Vertices at hop distance exactly `radius` from `center`, sorted.
    pub fn sphere(&self, center: usize, radius: usize) -> Vec<usize> {
        let dist = self.hop_distances(&[center]);
        (0..self.n).filter(|&v| dist[v] == radius).collect()
    }

    /// Induced subgraph on a vertex subset. Returns the subgraph together
    /// with the map from new indices to original ones. Errors if the induced
    /// graph is disconnected.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<(Graph, Vec<usize>), GraphError> {
        let mut keep = vec![false; self.n];
        for &v in vertices {
            self.check_vertex(v)?;
            keep[v] = true;
        }
        let old_of_new: Vec<usize> = (0..self.n).filter(|&v| keep[v]).collect();
        let mut new_of_old = vec![usize::MAX; self.n];
        for (i, &v) in old_of_new.iter().enumerate() {
            new_of_old[v] = i;
        }
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            if keep[u] && keep[v] {
                edges.push((new_of_old[u], new_of_old[v]));
            }
        }
        let g = Graph::from_parts(old_of_new.len(), &edges)?;
        Ok((g, old_of_new))
    }
}

/// Strictly positive weight per edge, indexed like `Graph::edges`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeMetric(Vec<f64>);

impl EdgeMetric {
    pub fn new(g: &Graph, values: Vec<f64>) -> Result<Self, GraphError> {
        if values.len() != g.edge_count() {
            return Err(GraphError::MetricLengthMismatch {
                got: values.len(),
                want: g.edge_count(),
            });
        }
        for (e, &v) in values.iter().enumerate() {
            if !(v > 0.0) || !v.is_finite() {
                return Err(GraphError::NonpositiveMetric { edge: e, value: v });
            }
        }
        Ok(EdgeMetric(values))
    }

    /// The natural metric: every edge gets weight 1.
    pub fn natural(g: &Graph) -> Self {
        EdgeMetric(vec![1.0; g.edge_count()])
    }

    pub fn uniform(g: &Graph, w: f64) -> Result<Self, GraphError> {
        Self::new(g, vec![w; g.edge_count()])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, e: usize) -> f64 {
        self.0[e]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// One real value per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexFunction(Vec<f64>);

impl VertexFunction {
    pub fn new(g: &Graph, values: Vec<f64>) -> Result<Self, GraphError> {
        Self::from_values(g.vertex_count(), values)
    }

    pub fn from_values(n: usize, values: Vec<f64>) -> Result<Self, GraphError> {
        if values.len() != n {
            return Err(GraphError::FunctionLengthMismatch {
                got: values.len(),
                want: n,
            });
        }
        if let Some(v) = values.iter().position(|x| !x.is_finite()) {
            return Err(GraphError::NonfiniteValue(v));
        }
        Ok(VertexFunction(values))
    }

    pub fn constant(n: usize, c: f64) -> Self {
        VertexFunction(vec![c; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, v: usize) -> f64 {
        self.0[v]
    }

    pub fn set(&mut self, v: usize, x: f64) {
        self.0[v] = x;
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// max - min of the values.
    pub fn oscillation(&self) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &x in &self.0 {
            lo = lo.min(x);
            hi = hi.max(x);
        }
        if self.0.is_empty() {
            0.0
        } else {
            hi - lo
        }
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }
}

/// A walk along adjacent vertices with no repeated edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    vertices: Vec<usize>,
    edge_ids: Vec<usize>,
}

impl Path {
    pub fn new(g: &Graph, vertices: Vec<usize>) -> Result<Self, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::InvalidPath("empty vertex list".into()));
        }
        for &v in &vertices {
            g.check_vertex(v)?;
        }
        let mut edge_ids = Vec::with_capacity(vertices.len().saturating_sub(1));
        let mut used = std::collections::HashSet::new();
        for w in vertices.windows(2) {
            let e = g.edge_between(w[0], w[1]).ok_or_else(|| {
                GraphError::InvalidPath(format!("{} and {} are not adjacent", w[0], w[1]))
            })?;
            if !used.insert(e) {
                return Err(GraphError::InvalidPath(format!(
                    "edge ({}, {}) repeated",
                    w[0], w[1]
                )));
            }
            edge_ids.push(e);
        }
        Ok(Path { vertices, edge_ids })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edge_ids(&self) -> &[usize] {
        &self.edge_ids
    }

    pub fn first(&self) -> usize {
        self.vertices[0]
    }

    pub fn last(&self) -> usize {
        *self.vertices.last().unwrap()
    }

    /// Sum of metric values over the path's edges; a single-vertex path has
    /// length 0.
    pub fn length(&self, m: &EdgeMetric) -> f64 {
        self.edge_ids.iter().map(|&e| m.get(e)).sum()
    }
}

/// `path_length(g, m, p)` as a free function; `p` must have been built
/// against `g` (edge ids are reused).
pub fn path_length(_g: &Graph, m: &EdgeMetric, p: &Path) -> f64 {
    p.length(m)
}

/// Per-edge absolute gradient `|f(v) - f(u)| / m(e)`.
pub fn gradient_abs(g: &Graph, f: &VertexFunction, m: &EdgeMetric) -> Vec<f64> {
    g.edges()
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| (f.get(v) - f.get(u)).abs() / m.get(e))
        .collect()
}

#[derive(Copy, Clone, PartialEq)]
struct HeapItem {
    dist: f64,
    vertex: usize,
}

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap and we want smallest dist first,
        // ties broken by smallest vertex index.
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multi-source Dijkstra distances and predecessor tree under a metric.
/// Ties are broken by visiting smaller vertex indices first, so the
/// predecessor tree is deterministic.
pub fn shortest_path_tree(
    g: &Graph,
    m: &EdgeMetric,
    sources: &[usize],
) -> (Vec<f64>, Vec<Option<(usize, usize)>>) {
    shortest_path_tree_weights(g, m.values(), sources)
}

/// Dijkstra over raw nonnegative edge weights (zeros allowed); used by the
/// modulus solver, whose admissible densities may vanish off the family.
pub fn shortest_path_tree_weights(
    g: &Graph,
    w: &[f64],
    sources: &[usize],
) -> (Vec<f64>, Vec<Option<(usize, usize)>>) {
    let n = g.vertex_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    for &s in sources {
        if dist[s] > 0.0 {
            dist[s] = 0.0;
            heap.push(HeapItem { dist: 0.0, vertex: s });
        }
    }
    while let Some(HeapItem { dist: d, vertex: v }) = heap.pop() {
        if done[v] {
            continue;
        }
        done[v] = true;
        for &(u, e) in g.neighbors(v) {
            let nd = d + w[e];
            if nd < dist[u] {
                dist[u] = nd;
                pred[u] = Some((v, e));
                heap.push(HeapItem { dist: nd, vertex: u });
            }
        }
    }
    (dist, pred)
}

/// Multi-source shortest distances under a metric.
pub fn metric_distances(g: &Graph, m: &EdgeMetric, sources: &[usize]) -> Vec<f64> {
    shortest_path_tree(g, m, sources).0
}

/// Shortest-path distance `d_m(u, v)`.
pub fn metric_distance(g: &Graph, m: &EdgeMetric, u: usize, v: usize) -> f64 {
    if u == v {
        return 0.0;
    }
    metric_distances(g, m, &[u])[v]
}

/// Extracts the shortest path from any source to the closest target,
/// breaking distance ties by smallest target index.
pub fn shortest_path_between(
    g: &Graph,
    m: &EdgeMetric,
    sources: &[usize],
    targets: &[usize],
) -> Option<(f64, Path)> {
    shortest_path_between_weights(g, m.values(), sources, targets)
}

/// As [`shortest_path_between`] but over raw nonnegative weights.
pub fn shortest_path_between_weights(
    g: &Graph,
    w: &[f64],
    sources: &[usize],
    targets: &[usize],
) -> Option<(f64, Path)> {
    let (dist, pred) = shortest_path_tree_weights(g, w, sources);
    let mut best: Option<(f64, usize)> = None;
    for &t in targets {
        let d = dist[t];
        if !d.is_finite() {
            continue;
        }
        let better = match best {
            None => true,
            Some((bd, bt)) => d < bd || (d == bd && t < bt),
        };
        if better {
            best = Some((d, t));
        }
    }
    let (d, t) = best?;
    let mut rev = vec![t];
    let mut cur = t;
    while let Some((p, _)) = pred[cur] {
        rev.push(p);
        cur = p;
    }
    rev.reverse();
    let path = Path::new(g, rev).expect("predecessor tree yields a valid path");
    Some((d, path))
}

fn fmt_f64(x: f64) -> String {
    // Rust's default float formatting is the shortest string that round-trips.
    format!("{x}")
}

/// Writes the graph text format:
/// line 1 `graph <n> <m>`, then one `u v [w]` line per edge.
pub fn write_graph(g: &Graph, m: Option<&EdgeMetric>, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(&format!("graph {} {}\n", g.vertex_count(), g.edge_count()));
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        match m {
            Some(metric) => out.push_str(&format!("{} {} {}\n", u, v, fmt_f64(metric.get(e)))),
            None => out.push_str(&format!("{} {}\n", u, v)),
        }
    }
    out
}

/// Reads the graph text format. Metric values are optional but must be
/// present on all edges or none.
pub fn read_graph(text: &str) -> Result<(Graph, Option<EdgeMetric>), GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        // `boundary:` lines belong to the triangulation extension of the
        // format and are skipped here.
        if line.is_empty() || line.starts_with('#') || line.starts_with("boundary:") {
            continue;
        }
        let parse = |msg: &str| GraphError::Parse {
            line: lineno + 1,
            msg: msg.to_string(),
        };
        if header.is_none() {
            let mut it = line.split_whitespace();
            if it.next() != Some("graph") {
                return Err(parse("expected header `graph <n> <m>`"));
            }
            let n: usize = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| parse("bad vertex count"))?;
            let m: usize = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| parse("bad edge count"))?;
            header = Some((n, m));
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 && fields.len() != 3 {
            return Err(parse("expected `u v [w]`"));
        }
        let u: usize = fields[0].parse().map_err(|_| parse("bad vertex index"))?;
        let v: usize = fields[1].parse().map_err(|_| parse("bad vertex index"))?;
        edges.push((u, v));
        if fields.len() == 3 {
            let w: f64 = fields[2].parse().map_err(|_| parse("bad metric value"))?;
            weights.push(w);
        }
    }
    let (n, m) = header.ok_or(GraphError::Parse {
        line: 0,
        msg: "missing header".into(),
    })?;
    if edges.len() != m {
        return Err(GraphError::Parse {
            line: 0,
            msg: format!("header promises {} edges, found {}", m, edges.len()),
        });
    }
    if !weights.is_empty() && weights.len() != edges.len() {
        return Err(GraphError::Parse {
            line: 0,
            msg: "metric values must be given on all edges or none".into(),
        });
    }
    let g = Graph::from_parts(n, &edges)?;
    let metric = if weights.is_empty() {
        None
    } else {
        Some(EdgeMetric::new(&g, weights)?)
    };
    Ok((g, metric))
}

/// Writes a vertex function as `vertex value` lines.
pub fn write_vertex_function(f: &VertexFunction) -> String {
    let mut out = String::new();
    for (v, &x) in f.values().iter().enumerate() {
        out.push_str(&format!("{} {}\n", v, fmt_f64(x)));
    }
    out
}

/// Reads `vertex value` lines; entries may be a subset of the vertices
/// (boundary data), so the result is a sparse list.
pub fn read_vertex_values(text: &str) -> Result<Vec<(usize, f64)>, GraphError> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse = |msg: &str| GraphError::Parse {
            line: lineno + 1,
            msg: msg.to_string(),
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse("expected `vertex value`"));
        }
        let v: usize = fields[0].parse().map_err(|_| parse("bad vertex index"))?;
        let x: f64 = fields[1].parse().map_err(|_| parse("bad value"))?;
        out.push((v, x));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_two_vertex_path() {
        let g = Graph::from_edges(&[(0, 1)]).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(EdgeMetric::natural(&g).values(), &[1.0]);
    }

    #[test]
    fn build_triangle() {
        let g = Graph::from_edges(&[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!((0..3).all(|v| g.degree(v) == 2));
        assert_eq!(EdgeMetric::natural(&g).values(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn rejects_loops_duplicates_disconnected() {
        assert_eq!(
            Graph::from_edges(&[(0, 0)]).unwrap_err(),
            GraphError::LoopEdge(0)
        );
        assert_eq!(
            Graph::from_edges(&[(0, 1), (1, 0)]).unwrap_err(),
            GraphError::DuplicateEdge(0, 1)
        );
        assert_eq!(
            Graph::from_edges(&[(0, 1), (2, 3)]).unwrap_err(),
            GraphError::Disconnected
        );
    }

    #[test]
    fn path_lengths() {
        let g = Graph::from_edges(&[(0, 1), (1, 2)]).unwrap();
        let m = EdgeMetric::natural(&g);
        let p = Path::new(&g, vec![0, 1, 2]).unwrap();
        assert_eq!(path_length(&g, &m, &p), 2.0);
        let single = Path::new(&g, vec![1]).unwrap();
        assert_eq!(single.length(&m), 0.0);
        let g2 = Graph::from_edges(&[(0, 1)]).unwrap();
        let m2 = EdgeMetric::new(&g2, vec![0.25]).unwrap();
        let p2 = Path::new(&g2, vec![0, 1]).unwrap();
        assert_eq!(p2.length(&m2), 0.25);
    }

    #[test]
    fn path_rejects_repeated_edge() {
        let g = Graph::from_edges(&[(0, 1), (1, 2)]).unwrap();
        assert!(Path::new(&g, vec![0, 1, 0]).is_err());
        assert!(Path::new(&g, vec![0, 2]).is_err());
    }

    #[test]
    fn metric_distance_basics() {
        let g = Graph::from_edges(&[(0, 1), (1, 2)]).unwrap();
        let m = EdgeMetric::natural(&g);
        assert_eq!(metric_distance(&g, &m, 0, 0), 0.0);
        assert_eq!(metric_distance(&g, &m, 0, 2), 2.0);
    }

    #[test]
    fn metric_distance_weighted_cycle() {
        // 4-cycle with one heavy edge: opposite vertices stay at distance 2
        // through the light side.
        let g = Graph::from_edges(&[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let m = EdgeMetric::new(&g, vec![10.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(metric_distance(&g, &m, 0, 2), 2.0);
        assert_eq!(metric_distance(&g, &m, 1, 3), 2.0);
    }

    #[test]
    fn ball_and_sphere() {
        // path 0-1-2-3
        let g = Graph::from_edges(&[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(g.ball(1, 0), vec![1]);
        assert_eq!(g.ball(1, 1), vec![0, 1, 2]);
        assert_eq!(g.ball(1, 10), vec![0, 1, 2, 3]);
        assert_eq!(g.sphere(1, 0), vec![1]);
        assert_eq!(g.sphere(1, 1), vec![0, 2]);
        assert_eq!(g.sphere(1, 5), Vec::<usize>::new());
    }

    #[test]
    fn gradient_abs_cases() {
        let g = Graph::from_edges(&[(0, 1)]).unwrap();
        let c = VertexFunction::constant(2, 3.0);
        let m = EdgeMetric::natural(&g);
        assert_eq!(gradient_abs(&g, &c, &m), vec![0.0]);
        let f = VertexFunction::new(&g, vec![0.0, 1.0]).unwrap();
        assert_eq!(gradient_abs(&g, &f, &m), vec![1.0]);
        let mh = EdgeMetric::new(&g, vec![0.5]).unwrap();
        assert_eq!(gradient_abs(&g, &f, &mh), vec![2.0]);
    }

    #[test]
    fn induced_subgraph_remaps() {
        let g = Graph::from_edges(&[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let (sub, old) = g.induced_subgraph(&[0, 1, 2]).unwrap();
        assert_eq!(sub.vertex_count(), 3);
        assert_eq!(sub.edge_count(), 2);
        assert_eq!(old, vec![0, 1, 2]);
    }

    #[test]
    fn text_format_round_trip() {
        let g = Graph::from_edges(&[(0, 1), (1, 2), (2, 0)]).unwrap();
        let m = EdgeMetric::new(&g, vec![0.1, 2.5e-7, 3.0]).unwrap();
        let text = write_graph(&g, Some(&m), &["demo".into()]);
        let (g2, m2) = read_graph(&text).unwrap();
        assert_eq!(g, g2);
        assert_eq!(m, m2.unwrap());
    }

    #[test]
    fn vertex_function_text() {
        let g = Graph::from_edges(&[(0, 1)]).unwrap();
        let f = VertexFunction::new(&g, vec![0.5, -1.25e-9]).unwrap();
        let text = write_vertex_function(&f);
        let entries = read_vertex_values(&text).unwrap();
        assert_eq!(entries, vec![(0, 0.5), (1, -1.25e-9)]);
    }
}
