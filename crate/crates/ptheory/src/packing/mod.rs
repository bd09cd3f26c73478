//! Quasi-ball packings in R^d: the data model, disjointness verification,
//! contact graphs, the packing edge metric and the stereographic lift.
//! The blocking-metric construction around an accumulation point lives in
//! [`blocking`].

pub mod blocking;

pub use blocking::{
    blocking_metric, blocking_radii, divergence_check, psi, BlockingOutcome, BlockingRadii,
    CertificateReport, PathProfile,
};

use thiserror::Error;

use crate::graph::{EdgeMetric, Graph, GraphError};

#[derive(Debug, Error)]
pub enum PackingError {
    #[error("ball {0} has invalid radii (need 0 < r_in <= r_out, finite)")]
    BadBall(usize),
    #[error("ball {ball} has {got} coordinates in dimension {dim}")]
    DimensionMismatch { ball: usize, got: usize, dim: usize },
    #[error("graph has {graph_n} vertices but the packing has {balls} balls")]
    GraphMismatch { graph_n: usize, balls: usize },
    #[error("blocking radii are missing or carry no verified certificates")]
    BadRadii,
    #[error("blocking construction exhausted: {0}")]
    Exhausted(String),
    #[error("path does not end at the vertex nearest the anchor (expected {expected}, got {got})")]
    PathMismatch { expected: usize, got: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A quasi-ball: its inner ball is contained in the domain, the outer ball
/// contains it. diam(P) is read off the outer radius.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Vec<f64>,
    pub r_in: f64,
    pub r_out: f64,
}

impl Ball {
    /// A round ball: inner and outer radius coincide.
    pub fn round(center: Vec<f64>, r: f64) -> Self {
        Ball { center, r_in: r, r_out: r }
    }

    pub fn diam(&self) -> f64 {
        2.0 * self.r_out
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// An indexed packing of quasi-balls with disjoint inner-ball interiors.
/// Disjointness is enforced on the representative inner balls; tangency (for
/// the contact graph) is read off the outer spheres.
#[derive(Debug, Clone, PartialEq)]
pub struct Packing {
    pub dim: usize,
    pub balls: Vec<Ball>,
    /// Realized max ratio r_out / r_in.
    pub roundness_bound: f64,
}

impl Packing {
    pub fn new(dim: usize, balls: Vec<Ball>) -> Result<Self, PackingError> {
        let mut roundness: f64 = 1.0;
        for (i, b) in balls.iter().enumerate() {
            if b.center.len() != dim {
                return Err(PackingError::DimensionMismatch {
                    ball: i,
                    got: b.center.len(),
                    dim,
                });
            }
            let ok = b.r_in > 0.0
                && b.r_out >= b.r_in
                && b.r_in.is_finite()
                && b.r_out.is_finite()
                && b.center.iter().all(|x| x.is_finite());
            if !ok {
                return Err(PackingError::BadBall(i));
            }
            roundness = roundness.max(b.r_out / b.r_in);
        }
        Ok(Packing { dim, balls, roundness_bound: roundness })
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    pub fn centers(&self) -> Vec<Vec<f64>> {
        self.balls.iter().map(|b| b.center.clone()).collect()
    }
}

const PAIR_SCAN_THRESHOLD: usize = 20_000;

/// All pairs (u < v) with |z_u - z_v| <= r_out(u) + r_out(v) + slack.
/// Quadratic scan at desk scale, uniform spatial grid beyond.
fn candidate_pairs(p: &Packing, slack: f64) -> Vec<(usize, usize)> {
    let n = p.len();
    let mut out = Vec::new();
    if n <= PAIR_SCAN_THRESHOLD {
        for u in 0..n {
            for v in u + 1..n {
                let reach = p.balls[u].r_out + p.balls[v].r_out + slack;
                if dist(&p.balls[u].center, &p.balls[v].center) <= reach {
                    out.push((u, v));
                }
            }
        }
        return out;
    }
    // Uniform grid keyed on integer cells of side = max reach.
    let max_r = p.balls.iter().map(|b| b.r_out).fold(0.0, f64::max);
    let cell = (2.0 * max_r + slack).max(1e-300);
    let key = |z: &[f64]| -> Vec<i64> { z.iter().map(|&x| (x / cell).floor() as i64).collect() };
    let mut grid: std::collections::HashMap<Vec<i64>, Vec<usize>> =
        std::collections::HashMap::new();
    for (i, b) in p.balls.iter().enumerate() {
        grid.entry(key(&b.center)).or_default().push(i);
    }
    let offsets = neighbor_offsets(p.dim);
    for (i, b) in p.balls.iter().enumerate() {
        let k0 = key(&b.center);
        for off in &offsets {
            let k: Vec<i64> = k0.iter().zip(off).map(|(a, d)| a + d).collect();
            if let Some(bucket) = grid.get(&k) {
                for &j in bucket {
                    if j <= i {
                        continue;
                    }
                    let reach = b.r_out + p.balls[j].r_out + slack;
                    if dist(&b.center, &p.balls[j].center) <= reach {
                        out.push((i, j));
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

fn neighbor_offsets(dim: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        let mut next = Vec::with_capacity(out.len() * 3);
        for base in &out {
            for d in [-1i64, 0, 1] {
                let mut v = base.clone();
                v.push(d);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

#[derive(Debug, Clone)]
pub struct PackingReport {
    /// Pairs whose inner balls overlap by more than the tolerance, with the
    /// overlap depth r_in(u) + r_in(v) - |z_u - z_v|.
    pub violations: Vec<(usize, usize, f64)>,
    pub roundness: f64,
}

impl PackingReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks pairwise disjointness of the inner balls up to `tol` and reports
/// the realized roundness bound.
pub fn verify_packing(p: &Packing, tol: f64) -> PackingReport {
    let mut violations = Vec::new();
    for (u, v) in candidate_pairs(p, tol) {
        let d = dist(&p.balls[u].center, &p.balls[v].center);
        let overlap = p.balls[u].r_in + p.balls[v].r_in - d;
        if overlap > tol {
            violations.push((u, v, overlap));
        }
    }
    PackingReport {
        violations,
        roundness: p.roundness_bound,
    }
}

/// Contact structure: ball u and v are joined iff their outer spheres are
/// tangent within `tol`. The vertex i <-> ball i correspondence is the
/// identity by construction.
#[derive(Debug, Clone)]
pub struct ContactGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub tangency_tol: f64,
}

impl ContactGraph {
    /// Converts to a [`Graph`]; fails if the contact graph is disconnected
    /// or empty (a lone tangency-free packing has no useful graph).
    pub fn graph(&self) -> Result<Graph, GraphError> {
        Graph::from_parts(self.n, &self.edges)
    }

    pub fn vertex_ball_map(&self) -> Vec<usize> {
        (0..self.n).collect()
    }
}

pub fn contact_graph(p: &Packing, tol: f64) -> ContactGraph {
    let mut edges = Vec::new();
    for (u, v) in candidate_pairs(p, tol) {
        let d = dist(&p.balls[u].center, &p.balls[v].center);
        if (d - (p.balls[u].r_out + p.balls[v].r_out)).abs() <= tol {
            edges.push((u, v));
        }
    }
    ContactGraph {
        n: p.len(),
        edges,
        tangency_tol: tol,
    }
}

/// The packing metric m(e) = diam(P_u) + diam(P_v) on the contact graph.
pub fn packing_metric(p: &Packing, g: &Graph) -> Result<EdgeMetric, PackingError> {
    if g.vertex_count() != p.len() {
        return Err(PackingError::GraphMismatch {
            graph_n: g.vertex_count(),
            balls: p.len(),
        });
    }
    let values: Vec<f64> = g
        .edges()
        .iter()
        .map(|&(u, v)| p.balls[u].diam() + p.balls[v].diam())
        .collect();
    Ok(EdgeMetric::new(g, values)?)
}

/// (sum_e m(e)^p)^(1/p).
pub fn metric_lp_norm(m: &EdgeMetric, p: f64) -> f64 {
    m.values().iter().map(|&x| x.powf(p)).sum::<f64>().powf(1.0 / p)
}

#[derive(Debug, Clone)]
pub struct LiftedBall {
    /// Point on the unit sphere in R^(d+1) (inverse stereographic image of
    /// the center; the origin maps to the south pole).
    pub point: Vec<f64>,
    /// First-order chordal diameter estimate diam * 2/(1+|z|^2).
    pub chordal_diam: f64,
    /// Bound on the estimate's error from the conformal factor's variation
    /// across the ball (second order in the diameter).
    pub error_bound: f64,
}

#[derive(Debug, Clone)]
pub struct LiftedPacking {
    pub balls: Vec<LiftedBall>,
    /// sum of chordal_diam^d: the finite-total-volume proxy.
    pub total_volume_proxy: f64,
}

/// Inverse stereographic lift R^d -> S^d from the north pole:
/// z maps to (2z, |z|^2 - 1) / (1 + |z|^2).
pub fn stereographic_lift(p: &Packing) -> LiftedPacking {
    let factor = |r2: f64| 2.0 / (1.0 + r2);
    let mut balls = Vec::with_capacity(p.len());
    let mut total = 0.0;
    for b in &p.balls {
        let r2: f64 = b.center.iter().map(|x| x * x).sum();
        let denom = 1.0 + r2;
        let mut point: Vec<f64> = b.center.iter().map(|&x| 2.0 * x / denom).collect();
        point.push((r2 - 1.0) / denom);
        let f0 = factor(r2);
        let chordal_diam = b.diam() * f0;
        // The factor is decreasing in |z|; bound its variation over the
        // radial interval covered by the ball.
        let r = r2.sqrt();
        let lo = (r - b.r_out).max(0.0);
        let hi = r + b.r_out;
        let fmax = factor(lo * lo);
        let fmin = factor(hi * hi);
        let error_bound = b.diam() * (fmax - f0).max(f0 - fmin);
        total += chordal_diam.powi(p.dim as i32);
        balls.push(LiftedBall {
            point,
            chordal_diam,
            error_bound,
        });
    }
    LiftedPacking {
        balls,
        total_volume_proxy: total,
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

/// Packing text format: header `packing <d> <count> <roundness_bound>`,
/// then one `x_1 ... x_d r_in r_out` line per ball.
pub fn write_packing(p: &Packing) -> String {
    let mut out = format!(
        "packing {} {} {}\n",
        p.dim,
        p.len(),
        fmt_f64(p.roundness_bound)
    );
    for b in &p.balls {
        let mut fields: Vec<String> = b.center.iter().map(|&x| fmt_f64(x)).collect();
        fields.push(fmt_f64(b.r_in));
        fields.push(fmt_f64(b.r_out));
        out.push_str(&fields.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_packing(text: &str) -> Result<Packing, PackingError> {
    let mut header: Option<(usize, usize)> = None;
    let mut balls = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse = |msg: &str| PackingError::Parse {
            line: lineno + 1,
            msg: msg.to_string(),
        };
        if header.is_none() {
            let mut it = line.split_whitespace();
            if it.next() != Some("packing") {
                return Err(parse("expected header `packing <d> <count> <roundness>`"));
            }
            let d: usize = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| parse("bad dimension"))?;
            let count: usize = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| parse("bad count"))?;
            header = Some((d, count));
            continue;
        }
        let (d, _) = header.unwrap();
        let fields: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| parse("bad number"))?;
        if fields.len() != d + 2 {
            return Err(parse(&format!("expected {} fields", d + 2)));
        }
        balls.push(Ball {
            center: fields[..d].to_vec(),
            r_in: fields[d],
            r_out: fields[d + 1],
        });
    }
    let (d, count) = header.ok_or(PackingError::Parse {
        line: 0,
        msg: "missing header".into(),
    })?;
    if balls.len() != count {
        return Err(PackingError::Parse {
            line: 0,
            msg: format!("header promises {count} balls, found {}", balls.len()),
        });
    }
    Packing::new(d, balls)
}

/// The 7-circle hexagonal flower of unit circles; handy in tests and docs.
pub fn hex_flower() -> Packing {
    let mut balls = vec![Ball::round(vec![0.0, 0.0], 1.0)];
    for k in 0..6 {
        let th = std::f64::consts::PI / 3.0 * k as f64;
        balls.push(Ball::round(vec![2.0 * th.cos(), 2.0 * th.sin()], 1.0));
    }
    Packing::new(2, balls).expect("flower is a valid packing")
}
