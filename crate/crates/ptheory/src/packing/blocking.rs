//! The blocking-metric construction around an accumulation point of a
//! packing: separation radii r_1 > r_2 > ..., the tent functions psi_r, the
//! potential phi = sum_n psi_{r_n}(z(.)) / (n r_n), and the induced edge
//! metric whose harmonic partial sums force paths into the anchor to be
//! long.

use crate::graph::{EdgeMetric, Graph, Path, VertexFunction};
use crate::packing::{packing_metric, Packing, PackingError};

/// The tent profile: r inside B(r), linear down to 0 on the annulus
/// B(2r) - B(r), 0 outside B(2r). 1-Lipschitz in z.
pub fn psi(r: f64, z: &[f64], anchor: &[f64]) -> f64 {
    let d = z
        .iter()
        .zip(anchor)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    psi_from_dist(r, d)
}

pub fn psi_from_dist(r: f64, dist: f64) -> f64 {
    if dist <= r {
        r
    } else if dist >= 2.0 * r {
        0.0
    } else {
        2.0 * r - dist
    }
}

/// Separation certificate for one radius: the vertex sets
/// inner = {v : |z(v) - anchor| < 2 r_n} and
/// outer = {v : |z(v) - anchor| >= r_(n-1)} are disjoint and joined by no
/// contact edge.
#[derive(Debug, Clone)]
pub struct CertificateReport {
    pub n: usize,
    pub inner_count: usize,
    pub outer_count: usize,
    pub disjoint: bool,
    pub no_crossing_edge: bool,
}

impl CertificateReport {
    pub fn holds(&self) -> bool {
        self.disjoint && self.no_crossing_edge
    }
}

#[derive(Debug, Clone)]
pub struct BlockingRadii {
    pub anchor: Vec<f64>,
    /// Coordinates are rescaled by this factor so that the whole packing
    /// fits in the unit ball around the anchor and r_1 = 1.
    pub scale: f64,
    /// Rescaled radii, r[0] = 1, r[n] < r[n-1] / 2.
    pub radii: Vec<f64>,
    /// True when the finite packing ran out of resolution before n_max.
    pub truncated: bool,
    /// One certificate per radius pair (r_(n-1), r_n), n >= 2.
    pub certificates: Vec<CertificateReport>,
}

impl BlockingRadii {
    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn all_certificates_hold(&self) -> bool {
        self.certificates.iter().all(|c| c.holds())
    }

    /// Rescaled distance of every ball center to the anchor.
    pub fn center_distances(&self, p: &Packing) -> Vec<f64> {
        p.balls
            .iter()
            .map(|b| {
                b.center
                    .iter()
                    .zip(&self.anchor)
                    .map(|(a, c)| (a - c) * (a - c))
                    .sum::<f64>()
                    .sqrt()
                    * self.scale
            })
            .collect()
    }

    /// Index of the vertex whose center is nearest the anchor.
    pub fn nearest_vertex(&self, p: &Packing) -> usize {
        let d = self.center_distances(p);
        let mut best = 0;
        for v in 1..d.len() {
            if d[v] < d[best] {
                best = v;
            }
        }
        best
    }
}

/// Builds the separation radii by the rule r_n = rho(rho(r_(n-1))) / 2,
/// where rho(r) is the largest s <= r/2 such that the closed ball B(s)
/// around the anchor meets no ball of diameter >= r/2 (computed by scanning
/// the finite packing). Construction stops, with the truncation flag set,
/// once the finite packing cannot certify separation or no ball center
/// remains inside B(r_n); the radii found so far are returned.
pub fn blocking_radii(
    p: &Packing,
    g: &Graph,
    anchor: &[f64],
    n_max: usize,
) -> Result<BlockingRadii, PackingError> {
    if g.vertex_count() != p.len() {
        return Err(PackingError::GraphMismatch {
            graph_n: g.vertex_count(),
            balls: p.len(),
        });
    }
    if p.is_empty() || n_max == 0 {
        return Err(PackingError::Exhausted("empty packing or n_max = 0".into()));
    }
    // Rescale so everything fits in the unit ball around the anchor.
    let dist0: Vec<f64> = p
        .balls
        .iter()
        .map(|b| {
            b.center
                .iter()
                .zip(anchor)
                .map(|(a, c)| (a - c) * (a - c))
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    let reach = p
        .balls
        .iter()
        .zip(&dist0)
        .map(|(b, d)| d + b.r_out)
        .fold(0.0, f64::max);
    if !(reach > 0.0) {
        return Err(PackingError::Exhausted("packing has no extent".into()));
    }
    let scale = 1.0 / reach;
    let dist: Vec<f64> = dist0.iter().map(|d| d * scale).collect();
    let radius: Vec<f64> = p.balls.iter().map(|b| b.r_out * scale).collect();

    // rho(r): clearance to balls of diameter >= r/2, capped at r/2.
    let rho = |r: f64| -> Option<f64> {
        let mut s = r / 2.0;
        for v in 0..p.len() {
            if 2.0 * radius[v] >= r / 2.0 {
                let clearance = dist[v] - radius[v];
                s = s.min(clearance * (1.0 - 1e-12));
            }
        }
        (s > 0.0).then_some(s)
    };

    let mut radii = vec![1.0];
    let mut certificates = Vec::new();
    let mut truncated = false;
    while radii.len() < n_max {
        let prev = *radii.last().unwrap();
        let inner = match rho(prev).and_then(|s| rho(s)) {
            Some(s) => s / 2.0,
            None => {
                truncated = true;
                break;
            }
        };
        // Keep only radii whose ball still contains a vertex center, so
        // every annulus contributes to the potential.
        if !dist.iter().any(|&d| d <= inner) {
            truncated = true;
            break;
        }
        let n = radii.len() + 1;
        let cert = check_certificate(g, &dist, n, prev, inner);
        if !cert.holds() {
            truncated = true;
            break;
        }
        radii.push(inner);
        certificates.push(cert);
    }
    Ok(BlockingRadii {
        anchor: anchor.to_vec(),
        scale,
        radii,
        truncated,
        certificates,
    })
}

fn check_certificate(
    g: &Graph,
    dist: &[f64],
    n: usize,
    r_prev: f64,
    r_n: f64,
) -> CertificateReport {
    let inner: Vec<bool> = dist.iter().map(|&d| d < 2.0 * r_n).collect();
    let outer: Vec<bool> = dist.iter().map(|&d| d >= r_prev).collect();
    let disjoint = inner.iter().zip(&outer).all(|(a, b)| !(a & b));
    let mut no_crossing_edge = true;
    for &(u, v) in g.edges() {
        if (inner[u] && outer[v]) || (inner[v] && outer[u]) {
            no_crossing_edge = false;
            break;
        }
    }
    CertificateReport {
        n,
        inner_count: inner.iter().filter(|&&b| b).count(),
        outer_count: outer.iter().filter(|&&b| b).count(),
        disjoint,
        no_crossing_edge,
    }
}

#[derive(Debug, Clone)]
pub struct BlockingOutcome {
    /// phi(v) = sum_n psi_{r_n}(z(v)) / (n r_n), in rescaled coordinates.
    pub phi: VertexFunction,
    /// m_p(e) = |d phi(e)| + delta * packing_metric(e): strictly positive.
    pub metric: EdgeMetric,
    /// sum_e |d phi(e)|^d.
    pub dphi_norm_d: f64,
    /// Per-annulus contributions ||d phi_n||_d^d / (n r_n)^d; by support
    /// disjointness these sum to dphi_norm_d.
    pub per_annulus_norm_d: Vec<f64>,
    pub supports_disjoint: bool,
    /// Max number of annuli active on a single edge (1 when disjoint).
    pub max_support_overlap: usize,
    /// Measured constant: max over active edges of |d phi_n(e)|^d divided by
    /// the volume of (P_u union P_v) intersected with B(3 r_n). Exact disk
    /// areas in dimension 2, a min(r, 3 r_n)-ball proxy otherwise.
    pub measured_c: f64,
}

/// Builds phi and the blocking metric from verified radii. The delta floor
/// keeps the metric positive (|d phi| alone vanishes on edges all annuli
/// miss) while staying in L^d.
pub fn blocking_metric(
    p: &Packing,
    g: &Graph,
    br: &BlockingRadii,
    delta: f64,
) -> Result<BlockingOutcome, PackingError> {
    if g.vertex_count() != p.len() {
        return Err(PackingError::GraphMismatch {
            graph_n: g.vertex_count(),
            balls: p.len(),
        });
    }
    if br.is_empty() || !(delta > 0.0) {
        return Err(PackingError::BadRadii);
    }
    if !br.all_certificates_hold() {
        return Err(PackingError::BadRadii);
    }
    let d_exp = p.dim as f64;
    let dist = br.center_distances(p);
    let n_annuli = br.radii.len();

    let phi_values: Vec<f64> = (0..p.len())
        .map(|v| {
            br.radii
                .iter()
                .enumerate()
                .map(|(i, &r)| psi_from_dist(r, dist[v]) / ((i + 1) as f64 * r))
                .sum()
        })
        .collect();

    let mut dphi = vec![0.0; g.edge_count()];
    let mut per_annulus = vec![0.0; n_annuli];
    let mut overlap_max = 0usize;
    let mut measured_c = 0.0f64;
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let mut active = 0usize;
        for (i, &r) in br.radii.iter().enumerate() {
            let dn = psi_from_dist(r, dist[u]) - psi_from_dist(r, dist[v]);
            if dn != 0.0 {
                active += 1;
                let scaled = dn.abs() / ((i + 1) as f64 * r);
                per_annulus[i] += scaled.powf(d_exp);
                // The volume bound concerns the raw annulus potential
                // psi_{r_n}(z(.)), before the harmonic 1/(n r_n) scaling.
                let vol = union_volume_in_ball(p, br, u, v, 3.0 * r);
                if vol > 0.0 {
                    measured_c = measured_c.max(dn.abs().powf(d_exp) / vol);
                }
            }
        }
        overlap_max = overlap_max.max(active);
        dphi[e] = phi_values[u] - phi_values[v];
    }
    let dphi_norm_d: f64 = dphi.iter().map(|x| x.abs().powf(d_exp)).sum();

    // Positivity floor: delta times the packing metric in rescaled units.
    let m_pack = packing_metric(p, g)?;
    let metric_values: Vec<f64> = dphi
        .iter()
        .zip(m_pack.values())
        .map(|(dp, mp)| dp.abs() + delta * mp * br.scale)
        .collect();
    let metric = EdgeMetric::new(g, metric_values)?;

    Ok(BlockingOutcome {
        phi: VertexFunction::from_values(p.len(), phi_values)?,
        metric,
        dphi_norm_d,
        per_annulus_norm_d: per_annulus,
        supports_disjoint: overlap_max <= 1,
        max_support_overlap: overlap_max,
        measured_c,
    })
}

/// Volume of (P_u union P_v) intersected with the rescaled ball B(rad)
/// around the anchor. Inner balls are disjoint, so the union volume is the
/// sum of the parts. Exact disk-disk intersection areas for d = 2; a
/// conservative min-radius ball proxy in other dimensions.
fn union_volume_in_ball(p: &Packing, br: &BlockingRadii, u: usize, v: usize, rad: f64) -> f64 {
    let part = |i: usize| -> f64 {
        let b = &p.balls[i];
        let d = b
            .center
            .iter()
            .zip(&br.anchor)
            .map(|(a, c)| (a - c) * (a - c))
            .sum::<f64>()
            .sqrt()
            * br.scale;
        let r = b.r_out * br.scale;
        if p.dim == 2 {
            disk_intersection_area(r, rad, d)
        } else {
            // omega_d min(r, rad)^d with the unit-ball volume coefficient
            // dropped into the measured constant.
            r.min(rad).powi(p.dim as i32)
        }
    };
    part(u) + part(v)
}

/// Area of the intersection of disks of radii r1, r2 with centers at
/// distance d.
fn disk_intersection_area(r1: f64, r2: f64, d: f64) -> f64 {
    use std::f64::consts::PI;
    if d >= r1 + r2 {
        return 0.0;
    }
    let (small, big) = (r1.min(r2), r1.max(r2));
    if d <= big - small {
        return PI * small * small;
    }
    let alpha = ((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1)).clamp(-1.0, 1.0);
    let beta = ((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2)).clamp(-1.0, 1.0);
    let a1 = r1 * r1 * alpha.acos();
    let a2 = r2 * r2 * beta.acos();
    let tri = 0.5
        * ((-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2))
            .max(0.0)
            .sqrt();
    a1 + a2 - tri
}

#[derive(Debug, Clone)]
pub struct PathProfile {
    /// Partial sums of the blocking metric along the path.
    pub partial_sums: Vec<f64>,
    pub phi_values: Vec<f64>,
    /// length_(m_p) >= |phi(end) - phi(start)| (telescoping bound).
    pub telescoping_ok: bool,
    pub phi_end: f64,
    /// H_N = sum_{j<=N} 1/j for the constructed radii.
    pub harmonic_target: f64,
    /// phi(end) >= H_N - c0.
    pub meets_target: bool,
    /// phi increments at the end vertex as annuli accumulate: entry n is
    /// psi_{r_n}(end)/(n r_n), ideally 1/n once the end vertex sits inside
    /// B(r_n).
    pub annulus_increments: Vec<f64>,
}

/// Profiles the blocking metric along test paths that approach the anchor.
/// Every path must end at the vertex nearest the anchor available at this
/// truncation; `c0` is the documented truncation slack for the harmonic
/// target.
pub fn divergence_check(
    p: &Packing,
    br: &BlockingRadii,
    _g: &Graph,
    metric: &EdgeMetric,
    phi: &VertexFunction,
    paths: &[Path],
    c0: f64,
) -> Result<Vec<PathProfile>, PackingError> {
    let expected = br.nearest_vertex(p);
    let dist = br.center_distances(p);
    let harmonic_target: f64 = (1..=br.radii.len()).map(|n| 1.0 / n as f64).sum();
    let mut out = Vec::with_capacity(paths.len());
    for path in paths {
        let got = path.last();
        if got != expected {
            return Err(PackingError::PathMismatch { expected, got });
        }
        let mut partial_sums = Vec::with_capacity(path.vertices().len());
        let mut acc = 0.0;
        partial_sums.push(0.0);
        for &e in path.edge_ids() {
            acc += metric.get(e);
            partial_sums.push(acc);
        }
        let phi_values: Vec<f64> = path.vertices().iter().map(|&v| phi.get(v)).collect();
        let phi_end = *phi_values.last().unwrap();
        let telescoping_ok = acc + 1e-12 >= (phi_end - phi_values[0]).abs();
        let annulus_increments: Vec<f64> = br
            .radii
            .iter()
            .enumerate()
            .map(|(i, &r)| psi_from_dist(r, dist[got]) / ((i + 1) as f64 * r))
            .collect();
        out.push(PathProfile {
            partial_sums,
            phi_values,
            telescoping_ok,
            phi_end,
            harmonic_target,
            meets_target: phi_end >= harmonic_target - c0,
            annulus_increments,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packing::{contact_graph, Ball};

    #[test]
    fn psi_branches() {
        let anchor = [0.0, 0.0];
        let r = 2.0;
        assert_eq!(psi(r, &[1.0, 0.0], &anchor), 2.0); // inside B(r)
        assert_eq!(psi(r, &[3.0, 0.0], &anchor), 1.0); // annulus: 2r - d
        assert_eq!(psi(r, &[6.0, 0.0], &anchor), 0.0); // outside B(2r)
    }

    #[test]
    fn psi_is_one_lipschitz() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let anchor = [0.3, -0.7];
        for _ in 0..200 {
            let r: f64 = rng.random_range(0.1..3.0);
            let z1: [f64; 2] = [rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)];
            let z2: [f64; 2] = [rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)];
            let dz = ((z1[0] - z2[0]).powi(2) + (z1[1] - z2[1]).powi(2)).sqrt();
            assert!((psi(r, &z1, &anchor) - psi(r, &z2, &anchor)).abs() <= dz + 1e-12);
        }
    }

    /// A chain of circles with radii 4^-k marching into the origin: a
    /// synthetic accumulation point with genuine scale separation.
    fn shrinking_chain(k: usize) -> Packing {
        let radii: Vec<f64> = (0..k).map(|i| 0.25f64.powi(i as i32)).collect();
        // Center x_i so consecutive circles are tangent and the chain
        // converges to 0: x_i = r_i + 2 sum_{j>i} r_j.
        let mut balls = Vec::with_capacity(k);
        for i in 0..k {
            let tail: f64 = radii[i + 1..].iter().sum();
            let x = radii[i] + 2.0 * tail;
            balls.push(Ball::round(vec![x, 0.0], radii[i]));
        }
        Packing::new(2, balls).unwrap()
    }

    #[test]
    fn chain_is_tangent_and_valid() {
        let p = shrinking_chain(8);
        assert!(crate::packing::verify_packing(&p, 1e-12).is_valid());
        let cg = contact_graph(&p, 1e-9);
        // Path contact graph.
        assert_eq!(cg.edges.len(), 7);
    }

    #[test]
    fn blocking_radii_on_chain() {
        let p = shrinking_chain(10);
        let g = contact_graph(&p, 1e-9).graph().unwrap();
        let br = blocking_radii(&p, &g, &[0.0, 0.0], 8).unwrap();
        assert_eq!(br.radii[0], 1.0);
        for w in br.radii.windows(2) {
            assert!(w[1] < w[0] / 2.0);
        }
        assert!(br.len() >= 3, "chain of 10 scales yields {} radii", br.len());
        assert!(br.all_certificates_hold());
    }

    #[test]
    fn blocking_metric_supports_disjoint_on_chain() {
        let p = shrinking_chain(10);
        let g = contact_graph(&p, 1e-9).graph().unwrap();
        let br = blocking_radii(&p, &g, &[0.0, 0.0], 8).unwrap();
        let out = blocking_metric(&p, &g, &br, 1e-6).unwrap();
        assert!(out.supports_disjoint);
        // Exact decomposition by disjointness.
        let total: f64 = out.per_annulus_norm_d.iter().sum();
        assert!((total - out.dphi_norm_d).abs() <= 1e-12 * (1.0 + out.dphi_norm_d));
        assert!(out.metric.values().iter().all(|&x| x > 0.0));
    }

    #[test]
    fn single_radius_phi_in_unit_range() {
        let p = shrinking_chain(6);
        let g = contact_graph(&p, 1e-9).graph().unwrap();
        let mut br = blocking_radii(&p, &g, &[0.0, 0.0], 4).unwrap();
        br.radii.truncate(1);
        br.certificates.clear();
        let out = blocking_metric(&p, &g, &br, 1e-6).unwrap();
        for &x in out.phi.values() {
            assert!((0.0..=1.0 + 1e-12).contains(&x));
        }
    }

    #[test]
    fn divergence_profile_on_chain() {
        let p = shrinking_chain(12);
        let g = contact_graph(&p, 1e-9).graph().unwrap();
        let br = blocking_radii(&p, &g, &[0.0, 0.0], 10).unwrap();
        let out = blocking_metric(&p, &g, &br, 1e-6).unwrap();
        let n = g.vertex_count();
        let path = Path::new(&g, (0..n).collect()).unwrap();
        let profiles =
            divergence_check(&p, &br, &g, &out.metric, &out.phi, &[path], 0.5).unwrap();
        let prof = &profiles[0];
        assert!(prof.telescoping_ok);
        assert!(prof.meets_target, "phi(end) = {} vs H_N = {}", prof.phi_end, prof.harmonic_target);
        // The end vertex sits inside every constructed ball, so increments
        // are exactly 1/n.
        for (i, &inc) in prof.annulus_increments.iter().enumerate() {
            assert!((inc - 1.0 / (i as f64 + 1.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn divergence_rejects_wrong_endpoint() {
        let p = shrinking_chain(6);
        let g = contact_graph(&p, 1e-9).graph().unwrap();
        let br = blocking_radii(&p, &g, &[0.0, 0.0], 4).unwrap();
        let out = blocking_metric(&p, &g, &br, 1e-6).unwrap();
        let path = Path::new(&g, vec![2, 1, 0]).unwrap();
        assert!(matches!(
            divergence_check(&p, &br, &g, &out.metric, &out.phi, &[path], 0.5),
            Err(PackingError::PathMismatch { .. })
        ));
    }
}
