//! Circle packings of finite triangulated disks: boundary-value radius
//! iteration (adjust each interior radius until its angle sum is 2 pi),
//! then rigid layout by oriented face traversal. The output is a [`Packing`]
//! whose contact graph recovers the input triangulation.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::generators::GeneratedGraph;
use crate::graph::{Graph, GraphError};
use crate::packing::{Ball, Packing};

#[derive(Debug, Error)]
pub enum CirclePackError {
    #[error("not a triangulation: {0}")]
    NotTriangulation(String),
    #[error("radius iteration did not converge: angle residual {residual:.3e} after {sweeps} sweeps")]
    NoConvergence { residual: f64, sweeps: usize },
    #[error("boundary radii: expected {want} positive values, got {got}")]
    BadBoundaryRadii { want: usize, got: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A triangulated disk: the graph, its boundary cycle in cyclic order, and
/// the list of interior triangular faces.
#[derive(Debug, Clone)]
pub struct Triangulation {
    pub graph: Graph,
    pub boundary: Vec<usize>,
    pub faces: Vec<[usize; 3]>,
}

impl Triangulation {
    pub fn new(
        graph: Graph,
        boundary: Vec<usize>,
        faces: Vec<[usize; 3]>,
    ) -> Result<Self, CirclePackError> {
        let n = graph.vertex_count();
        // Boundary: a simple cycle.
        if boundary.len() < 3 {
            return Err(CirclePackError::NotTriangulation(
                "boundary cycle needs at least 3 vertices".into(),
            ));
        }
        let mut seen = vec![false; n];
        for &v in &boundary {
            graph.check_vertex(v).map_err(CirclePackError::Graph)?;
            if seen[v] {
                return Err(CirclePackError::NotTriangulation(format!(
                    "boundary repeats vertex {v}"
                )));
            }
            seen[v] = true;
        }
        for i in 0..boundary.len() {
            let u = boundary[i];
            let v = boundary[(i + 1) % boundary.len()];
            if graph.edge_between(u, v).is_none() {
                return Err(CirclePackError::NotTriangulation(format!(
                    "boundary vertices {u} and {v} are not adjacent"
                )));
            }
        }
        // Faces: triangles over existing edges; interior edges in exactly
        // two faces, boundary-cycle edges in exactly one.
        let mut edge_face_count = vec![0usize; graph.edge_count()];
        for f in &faces {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                match graph.edge_between(a, b) {
                    Some(e) => edge_face_count[e] += 1,
                    None => {
                        return Err(CirclePackError::NotTriangulation(format!(
                            "face ({}, {}, {}) uses a missing edge",
                            f[0], f[1], f[2]
                        )))
                    }
                }
            }
        }
        let mut on_cycle = vec![false; graph.edge_count()];
        for i in 0..boundary.len() {
            let e = graph
                .edge_between(boundary[i], boundary[(i + 1) % boundary.len()])
                .unwrap();
            on_cycle[e] = true;
        }
        for e in 0..graph.edge_count() {
            let want = if on_cycle[e] { 1 } else { 2 };
            if edge_face_count[e] != want {
                let (u, v) = graph.endpoints(e);
                return Err(CirclePackError::NotTriangulation(format!(
                    "edge ({u}, {v}) lies in {} faces, expected {want}",
                    edge_face_count[e]
                )));
            }
        }
        // Euler with the outer face.
        let euler = n as i64 - graph.edge_count() as i64 + faces.len() as i64 + 1;
        if euler != 2 {
            return Err(CirclePackError::NotTriangulation(format!(
                "Euler characteristic {euler} != 2"
            )));
        }
        Ok(Triangulation { graph, boundary, faces })
    }

    /// Builds the triangulation recorded by a disk generator.
    pub fn from_generated(gg: &GeneratedGraph) -> Result<Self, CirclePackError> {
        let faces = gg
            .faces
            .as_ref()
            .ok_or_else(|| CirclePackError::NotTriangulation("generator stored no faces".into()))?
            .iter()
            .map(|f| {
                if f.len() == 3 {
                    Ok([f[0], f[1], f[2]])
                } else {
                    Err(CirclePackError::NotTriangulation(
                        "non-triangular face".into(),
                    ))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Triangulation::new(gg.graph.clone(), gg.boundary.clone(), faces)
    }

    /// Reconstructs faces as the 3-cliques of the graph, dropping the outer
    /// boundary triple when the boundary is itself a triangle. Valid for
    /// cleanly triangulated disks (no separating triangles); the constructor
    /// validates the result.
    pub fn infer_faces(graph: Graph, boundary: Vec<usize>) -> Result<Self, CirclePackError> {
        let mut faces = Vec::new();
        for &(u, v) in graph.edges() {
            // Common neighbors w > v > u count each triangle once.
            for &(w, _) in graph.neighbors(v) {
                if w > v && w > u && graph.edge_between(u, w).is_some() {
                    faces.push([u, v, w]);
                }
            }
        }
        if boundary.len() == 3 {
            let mut b = boundary.clone();
            b.sort_unstable();
            faces.retain(|f| {
                let mut s = *f;
                s.sort_unstable();
                s != [b[0], b[1], b[2]]
            });
        }
        Triangulation::new(graph, boundary, faces)
    }

    pub fn interior(&self) -> Vec<usize> {
        let mut on_boundary = vec![false; self.graph.vertex_count()];
        for &v in &self.boundary {
            on_boundary[v] = true;
        }
        (0..self.graph.vertex_count())
            .filter(|&v| !on_boundary[v])
            .collect()
    }
}

/// One positive radius per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusVector(pub Vec<f64>);

/// Angle at the central circle in the tangent triple (r_v; r_u, r_w):
/// 2 asin(sqrt(r_u r_w / ((r_v + r_u)(r_v + r_w)))). Strictly decreasing in
/// r_v.
pub fn tangent_angle(r_v: f64, r_u: f64, r_w: f64) -> f64 {
    let x = (r_u * r_w) / ((r_v + r_u) * (r_v + r_w));
    2.0 * x.sqrt().clamp(0.0, 1.0).asin()
}

/// Angle sum at a vertex over its incident faces, given the central radius
/// and the neighbor radius pairs of those faces.
pub fn angle_sum(r_v: f64, fan: &[(f64, f64)]) -> f64 {
    fan.iter().map(|&(a, b)| tangent_angle(r_v, a, b)).sum()
}

#[derive(Debug, Clone)]
pub struct DiskPacking {
    pub packing: Packing,
    /// vertex i of the triangulation <-> ball i (identity by construction).
    pub vertex_map: Vec<usize>,
    pub radii: Vec<f64>,
    pub centers: Vec<[f64; 2]>,
    /// Max |angle sum - 2 pi| over interior vertices at the final radii.
    pub angle_residual: f64,
    /// Max | |z_u - z_v| - (r_u + r_v) | over triangulation edges.
    pub tangency_residual: f64,
    pub sweeps: usize,
}

/// Packs a triangulated disk with prescribed boundary radii.
///
/// Interior radii are driven to angle sum 2 pi by cyclic sweeps of the
/// uniform-neighbor update (monotone in the radius, fixed point exactly at
/// angle sum 2 pi), then circles are laid out by oriented face traversal:
/// vertex of index 0 in the seed face at the origin, its first neighbor on
/// the positive x-axis. Tangency residuals are bounded by 10 * tol.
pub fn pack_disk(
    t: &Triangulation,
    boundary_radii: &[f64],
    tol: f64,
) -> Result<DiskPacking, CirclePackError> {
    let n = t.graph.vertex_count();
    if boundary_radii.len() != t.boundary.len() || boundary_radii.iter().any(|&r| !(r > 0.0)) {
        return Err(CirclePackError::BadBoundaryRadii {
            want: t.boundary.len(),
            got: boundary_radii.len(),
        });
    }
    let interior = t.interior();

    // Fan structure: for each vertex, the (r_u, r_w) neighbor pairs of its
    // incident faces (order is irrelevant for the angle sum).
    let mut fans: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for f in &t.faces {
        for k in 0..3 {
            fans[f[k]].push((f[(k + 1) % 3], f[(k + 2) % 3]));
        }
    }

    let mut radii = vec![0.0; n];
    let mean_boundary = boundary_radii.iter().sum::<f64>() / boundary_radii.len() as f64;
    for &v in &interior {
        radii[v] = mean_boundary;
    }
    for (i, &v) in t.boundary.iter().enumerate() {
        radii[v] = boundary_radii[i];
    }

    let target = 2.0 * std::f64::consts::PI;
    // Solve radii well past the requested tolerance so layout error stays
    // within the 10x contract.
    let radius_tol = tol * 1e-2;
    let max_sweeps = 500_000;
    let mut sweeps = 0;
    let mut residual = f64::INFINITY;
    while sweeps < max_sweeps {
        residual = 0.0f64;
        for &v in &interior {
            let theta: f64 = fans[v]
                .iter()
                .map(|&(u, w)| tangent_angle(radii[v], radii[u], radii[w]))
                .sum();
            residual = residual.max((theta - target).abs());
            let k = fans[v].len() as f64;
            let beta = (theta / (2.0 * k)).sin();
            let delta = (std::f64::consts::PI / k).sin();
            if beta > 0.0 && beta < 1.0 {
                let factor = (beta * (1.0 - delta)) / ((1.0 - beta) * delta);
                radii[v] *= factor.clamp(0.25, 4.0);
            }
        }
        sweeps += 1;
        if residual <= radius_tol {
            break;
        }
    }
    if residual > tol {
        return Err(CirclePackError::NoConvergence { residual, sweeps });
    }

    let centers = layout(t, &radii)?;

    let mut tangency_residual = 0.0f64;
    for &(u, v) in t.graph.edges() {
        let dx = centers[u][0] - centers[v][0];
        let dy = centers[u][1] - centers[v][1];
        let d = (dx * dx + dy * dy).sqrt();
        tangency_residual = tangency_residual.max((d - (radii[u] + radii[v])).abs());
    }

    let balls: Vec<Ball> = (0..n)
        .map(|v| Ball::round(centers[v].to_vec(), radii[v]))
        .collect();
    let packing = Packing::new(2, balls).expect("positive radii and finite centers");
    let angle_residual = interior
        .iter()
        .map(|&v| {
            (fans[v]
                .iter()
                .map(|&(u, w)| tangent_angle(radii[v], radii[u], radii[w]))
                .sum::<f64>()
                - target)
                .abs()
        })
        .fold(0.0, f64::max);

    Ok(DiskPacking {
        packing,
        vertex_map: (0..n).collect(),
        radii,
        centers,
        angle_residual,
        tangency_residual,
        sweeps,
    })
}

/// Orients the faces consistently and places circles face by face. The seed
/// face contains vertex 0 and its smallest-indexed neighbor on an edge; that
/// neighbor sits on the positive x-axis.
fn layout(t: &Triangulation, radii: &[f64]) -> Result<Vec<[f64; 2]>, CirclePackError> {
    let nf = t.faces.len();
    // Face adjacency through shared edges.
    let mut edge_faces: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (fi, f) in t.faces.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            edge_faces.entry((a.min(b), a.max(b))).or_default().push(fi);
        }
    }

    // Consistent orientation by BFS: adjacent faces traverse their shared
    // edge in opposite directions.
    let mut oriented: Vec<[usize; 3]> = t.faces.clone();
    let mut seen = vec![false; nf];
    let mut queue = VecDeque::new();
    seen[0] = true;
    queue.push_back(0usize);
    while let Some(fi) = queue.pop_front() {
        let f = oriented[fi];
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            for &fj in &edge_faces[&(a.min(b), a.max(b))] {
                if fj == fi || seen[fj] {
                    continue;
                }
                // fj must traverse the edge as (b, a).
                let g = oriented[fj];
                let has_ab = (0..3).any(|m| g[m] == a && g[(m + 1) % 3] == b);
                if has_ab {
                    oriented[fj] = [g[0], g[2], g[1]];
                }
                seen[fj] = true;
                queue.push_back(fj);
            }
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(CirclePackError::NotTriangulation(
            "face adjacency is not connected".into(),
        ));
    }

    // Seed: vertex 0 at the origin, its smallest neighbor u on +x, in the
    // lowest-index face containing edge (0, u).
    let u = t.graph.neighbors(0)[0].0;
    let seed = edge_faces[&(0usize.min(u), 0usize.max(u))][0];
    // Re-orient the seed so it reads (0, u, w); flip the whole orientation
    // if needed (deterministic: third vertex gets positive y).
    {
        let f = oriented[seed];
        let has_0u = (0..3).any(|m| f[m] == 0 && f[(m + 1) % 3] == u);
        if !has_0u {
            for of in oriented.iter_mut() {
                *of = [of[0], of[2], of[1]];
            }
        }
    }

    let n = t.graph.vertex_count();
    let mut pos: Vec<Option<[f64; 2]>> = vec![None; n];
    pos[0] = Some([0.0, 0.0]);
    pos[u] = Some([radii[0] + radii[u], 0.0]);

    let mut placed_faces = vec![false; nf];
    let mut queue = VecDeque::new();
    queue.push_back(seed);
    placed_faces[seed] = true;
    while let Some(fi) = queue.pop_front() {
        let f = oriented[fi];
        // Rotate so the first two vertices are placed.
        let rot = (0..3).find(|&m| {
            pos[f[m]].is_some() && pos[f[(m + 1) % 3]].is_some()
        });
        let Some(m) = rot else {
            // Not ready yet; requeue (face adjacency BFS order guarantees
            // progress from the seed).
            queue.push_back(fi);
            continue;
        };
        let (a, b, c) = (f[m], f[(m + 1) % 3], f[(m + 2) % 3]);
        if pos[c].is_none() {
            let pa = pos[a].unwrap();
            let pb = pos[b].unwrap();
            pos[c] = Some(third_vertex(pa, pb, radii[a] + radii[c], radii[b] + radii[c]));
        }
        for k in 0..3 {
            let (x, y) = (f[k], f[(k + 1) % 3]);
            for &fj in &edge_faces[&(x.min(y), x.max(y))] {
                if !placed_faces[fj] {
                    placed_faces[fj] = true;
                    queue.push_back(fj);
                }
            }
        }
    }
    let mut out = Vec::with_capacity(n);
    for v in 0..n {
        match pos[v] {
            Some(p) => out.push(p),
            None => {
                return Err(CirclePackError::NotTriangulation(format!(
                    "vertex {v} not reached by face traversal"
                )))
            }
        }
    }
    Ok(out)
}

/// Third circle center: distance s_a from `a`, s_b from `b`, on the left of
/// the oriented segment a -> b.
fn third_vertex(a: [f64; 2], b: [f64; 2], s_a: f64, s_b: f64) -> [f64; 2] {
    let dx = b[0] - a[0];
    let dy = b[1] - a[1];
    let d = (dx * dx + dy * dy).sqrt();
    let ex = [dx / d, dy / d];
    let ey = [-ex[1], ex[0]];
    let x = (d * d + s_a * s_a - s_b * s_b) / (2.0 * d);
    let y2 = (s_a * s_a - x * x).max(0.0);
    let y = y2.sqrt();
    [a[0] + x * ex[0] + y * ey[0], a[1] + x * ex[1] + y * ey[1]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::triangulated_disk;
    use crate::packing::{contact_graph, verify_packing};

    #[test]
    fn angle_sum_regular_cases() {
        // Equal radii, degree 6: exactly 2 pi.
        let fan: Vec<(f64, f64)> = vec![(1.0, 1.0); 6];
        assert!((angle_sum(1.0, &fan) - 2.0 * std::f64::consts::PI).abs() < 1e-12);
        // Degree 5 at equal radii: 5 pi / 3.
        let fan5: Vec<(f64, f64)> = vec![(1.0, 1.0); 5];
        assert!((angle_sum(1.0, &fan5) - 5.0 * std::f64::consts::PI / 3.0).abs() < 1e-12);
        // Huge central radius: angle sum tends to zero.
        assert!(angle_sum(1e9, &fan) < 1e-3);
    }

    #[test]
    fn angle_sum_is_monotone_in_central_radius() {
        let fan: Vec<(f64, f64)> = vec![(0.5, 2.0), (2.0, 1.0), (1.0, 0.5)];
        let mut prev = angle_sum(0.01, &fan);
        for k in 1..60 {
            let r = 0.01 * 1.3f64.powi(k);
            let cur = angle_sum(r, &fan);
            assert!(cur < prev);
            prev = cur;
        }
    }

    #[test]
    fn flower_packs_to_unit_interior_radius() {
        let gg = triangulated_disk(1).unwrap();
        let t = Triangulation::from_generated(&gg).unwrap();
        let out = pack_disk(&t, &vec![1.0; 6], 1e-8).unwrap();
        assert!((out.radii[gg.center] - 1.0).abs() < 1e-8);
        assert!(out.tangency_residual <= 1e-7);
        assert!(verify_packing(&out.packing, 1e-7).is_valid());
    }

    #[test]
    fn descartes_configuration_interior_radius() {
        // Triangle + center: interior circle tangent to three mutually
        // tangent unit circles has radius 2/sqrt(3) - 1.
        let g = Graph::from_edges(&[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]).unwrap();
        let t = Triangulation::new(g, vec![0, 1, 2], vec![[0, 1, 3], [1, 2, 3], [0, 2, 3]])
            .unwrap();
        let out = pack_disk(&t, &[1.0, 1.0, 1.0], 1e-8).unwrap();
        let expect = 2.0 / 3f64.sqrt() - 1.0;
        assert!(
            (out.radii[3] - expect).abs() < 1e-6,
            "{} vs {expect}",
            out.radii[3]
        );
        // Round trip: the contact graph is K4 again.
        let cg = contact_graph(&out.packing, 1e-6);
        let mut edges = cg.edges.clone();
        edges.sort_unstable();
        assert_eq!(edges, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn scale_equivariance() {
        let gg = triangulated_disk(2).unwrap();
        let t = Triangulation::from_generated(&gg).unwrap();
        let base = pack_disk(&t, &vec![1.0; t.boundary.len()], 1e-9).unwrap();
        let c = 3.5;
        let scaled = pack_disk(&t, &vec![c; t.boundary.len()], 1e-9).unwrap();
        for v in 0..t.graph.vertex_count() {
            assert!(
                (scaled.radii[v] - c * base.radii[v]).abs() < 1e-6 * c,
                "vertex {v}"
            );
        }
    }

    #[test]
    fn contact_round_trip_on_disks() {
        for layers in 1..=3 {
            let gg = triangulated_disk(layers).unwrap();
            let t = Triangulation::from_generated(&gg).unwrap();
            let out = pack_disk(&t, &vec![1.0; t.boundary.len()], 1e-8).unwrap();
            assert!(out.tangency_residual <= 1e-7, "layers {layers}");
            let cg = contact_graph(&out.packing, 1e-6);
            let mut got = cg.edges.clone();
            got.sort_unstable();
            let mut want: Vec<(usize, usize)> = t.graph.edges().to_vec();
            want.sort_unstable();
            assert_eq!(got, want, "layers {layers}");
        }
    }

    #[test]
    fn infer_faces_matches_generator() {
        let gg = triangulated_disk(2).unwrap();
        let from_gen = Triangulation::from_generated(&gg).unwrap();
        let inferred = Triangulation::infer_faces(gg.graph.clone(), gg.boundary.clone()).unwrap();
        assert_eq!(from_gen.faces.len(), inferred.faces.len());
    }

    #[test]
    fn rejects_non_triangulations() {
        // 4-cycle with no faces.
        let g = Graph::from_edges(&[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(Triangulation::new(g, vec![0, 1, 2, 3], vec![]).is_err());
    }
}
