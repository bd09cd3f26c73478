//! p-modulus and p-extremal length of path families, null-family trends and
//! resolving-metric checks.
//!
//! The modulus is the convex program
//!
//! ```text
//!   minimize sum_e m(e)^p   subject to   length_m(gamma) >= 1 for gamma in family,  m >= 0,
//! ```
//!
//! solved by constraint generation: the active set grows by the currently
//! shortest family path until the shortest length reaches 1 - tol. The
//! restricted problem is solved through its dual (one multiplier per active
//! path, closed-form primal recovery), by cyclic coordinate ascent with
//! bisection on each multiplier's monotone partial derivative. The returned
//! value always comes from a feasible rescaled density, so it is a certified
//! upper bound; the dual objective is reported as the matching lower bound.

use crate::capmod::{classify_capacity_trend, CapmodError, TrendThresholds, TrendVerdict};
use crate::generators::Family;
use crate::graph::{
    metric_distances, shortest_path_between_weights, EdgeMetric, Graph, Path,
};

/// A finite family of paths: explicit members, or every simple path from a
/// source set to a target set (represented implicitly).
#[derive(Debug, Clone)]
pub enum PathFamily {
    Explicit(Vec<Path>),
    Connector { sources: Vec<usize>, targets: Vec<usize> },
}

impl PathFamily {
    pub fn validate(&self, g: &Graph) -> Result<(), CapmodError> {
        match self {
            PathFamily::Explicit(paths) => {
                for p in paths {
                    if p.edge_ids().is_empty() {
                        return Err(CapmodError::BadFamily(
                            "explicit family contains a zero-edge path".into(),
                        ));
                    }
                    for &v in p.vertices() {
                        g.check_vertex(v)?;
                    }
                }
                Ok(())
            }
            PathFamily::Connector { sources, targets } => {
                if sources.is_empty() || targets.is_empty() {
                    return Err(CapmodError::Overlap);
                }
                for &v in sources.iter().chain(targets) {
                    g.check_vertex(v)?;
                }
                if sources.iter().any(|v| targets.contains(v)) {
                    return Err(CapmodError::Overlap);
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ModulusConfig {
    /// Outer stop: shortest family path length >= 1 - constraint_tol.
    pub constraint_tol: f64,
    /// Inner stop: relative duality gap on the active set.
    pub gap_tol: f64,
    pub max_outer: usize,
    pub max_inner_sweeps: usize,
}

impl Default for ModulusConfig {
    fn default() -> Self {
        ModulusConfig {
            constraint_tol: 1e-6,
            gap_tol: 1e-7,
            max_outer: 2000,
            max_inner_sweeps: 500_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ModulusResult {
    /// Certified value: the objective of the feasible rescaled density.
    pub modulus: f64,
    /// Feasible admissible density (may vanish off the family's support).
    pub weights: Vec<f64>,
    /// Dual lower bound for the modulus.
    pub dual_lower: f64,
    pub active_paths: Vec<Path>,
    /// Max |length - 1| over active paths with positive multiplier (KKT
    /// tightness certificate).
    pub max_tightness_slack: f64,
    pub outer_iterations: usize,
    pub inner_sweeps: usize,
}

struct DualState {
    p: f64,
    active: Vec<Path>,
    lambda: Vec<f64>,
    /// Per-edge multiplier load: sum of lambda over active paths through e.
    load: Vec<f64>,
    scratch: Vec<f64>,
}

impl DualState {
    fn new(g: &Graph, p: f64) -> Self {
        DualState {
            p,
            active: Vec::new(),
            lambda: Vec::new(),
            load: vec![0.0; g.edge_count()],
            scratch: Vec::new(),
        }
    }

    #[inline]
    fn density(&self, load: f64) -> f64 {
        // Closed-form primal minimizer per edge: m = (load / p)^(1/(p-1)).
        if load <= 0.0 {
            0.0
        } else {
            (load / self.p).powf(1.0 / (self.p - 1.0))
        }
    }

    fn densities(&self) -> Vec<f64> {
        self.load.iter().map(|&l| self.density(l)).collect()
    }

    fn objective(&self, w: &[f64]) -> f64 {
        w.iter().map(|&x| x.powf(self.p)).sum()
    }

    fn dual_value(&self) -> f64 {
        let p = self.p;
        let edge_part: f64 = self
            .load
            .iter()
            .map(|&l| if l <= 0.0 { 0.0 } else { (l / p).powf(p / (p - 1.0)) })
            .sum();
        self.lambda.iter().sum::<f64>() - (p - 1.0) * edge_part
    }

    fn path_length(&self, path: &Path, w: &[f64]) -> f64 {
        path.edge_ids().iter().map(|&e| w[e]).sum()
    }

    /// Exact coordinate maximization over one multiplier: the partial
    /// derivative 1 - length(gamma) is strictly decreasing in lambda, so the
    /// root is found by bracketed Newton (bisection fallback); clamped at 0.
    fn update_path(&mut self, i: usize) {
        let p = self.p;
        let q = 1.0 / (p - 1.0);
        let old = self.lambda[i];
        let path_edges = self.active[i].edge_ids();
        self.scratch.clear();
        self.scratch
            .extend(path_edges.iter().map(|&e| (self.load[e] - old).max(0.0)));
        // length and its t-derivative in one pass; one powf per edge.
        let eval = |base: &[f64], t: f64| -> (f64, f64) {
            let mut len = 0.0;
            let mut slope = 0.0;
            for &b in base {
                let l = (b + t) / p;
                if l > 0.0 {
                    let m = l.powf(q);
                    len += m;
                    slope += q * m / (l * p);
                }
            }
            (len, slope)
        };
        let new_lambda = {
            let (len0, _) = eval(&self.scratch, 0.0);
            if len0 >= 1.0 {
                0.0
            } else {
                let mut hi = old.max(1.0);
                let mut grow = 0;
                while eval(&self.scratch, hi).0 < 1.0 && grow < 400 {
                    hi *= 2.0;
                    grow += 1;
                }
                let mut lo = 0.0;
                let mut t = 0.5 * (lo + hi);
                for _ in 0..60 {
                    let (len, slope) = eval(&self.scratch, t);
                    if len < 1.0 {
                        lo = t;
                    } else {
                        hi = t;
                    }
                    if hi - lo <= 1e-14 * (1.0 + hi) {
                        break;
                    }
                    let mut tn = if slope > 0.0 { t + (1.0 - len) / slope } else { f64::NAN };
                    if !(tn > lo && tn < hi) {
                        tn = 0.5 * (lo + hi);
                    }
                    t = tn;
                }
                0.5 * (lo + hi)
            }
        };
        if new_lambda != old {
            for (k, &e) in path_edges.iter().enumerate() {
                self.load[e] = (self.scratch[k] + new_lambda).max(0.0);
            }
            self.lambda[i] = new_lambda;
        }
    }

    /// Sweeps until the relative duality gap on the active set closes.
    /// Returns (densities, sweeps used).
    fn solve_inner(&mut self, gap_tol: f64, max_sweeps: usize) -> (Vec<f64>, usize) {
        let mut sweeps = 0;
        loop {
            for i in 0..self.active.len() {
                self.update_path(i);
            }
            sweeps += 1;
            let w = self.densities();
            let obj = self.objective(&w);
            let min_len = self
                .active
                .iter()
                .map(|pa| self.path_length(pa, &w))
                .fold(f64::INFINITY, f64::min);
            let dual = self.dual_value();
            if min_len > 0.0 {
                let ub = obj / min_len.powf(self.p);
                if ub - dual <= gap_tol * ub.max(1e-300) {
                    return (w, sweeps);
                }
            }
            if sweeps >= max_sweeps {
                return (self.densities(), sweeps);
            }
        }
    }
}

/// Shortest family path under the weights; for connectors the collapsed
/// multi-source Dijkstra oracle is used, never path enumeration.
fn shortest_family_path(
    g: &Graph,
    fam: &PathFamily,
    w: &[f64],
) -> Option<(f64, Path)> {
    match fam {
        PathFamily::Explicit(paths) => {
            let mut best: Option<(f64, &Path)> = None;
            for pa in paths {
                let len: f64 = pa.edge_ids().iter().map(|&e| w[e]).sum();
                if best.as_ref().map_or(true, |&(bl, _)| len < bl) {
                    best = Some((len, pa));
                }
            }
            best.map(|(l, pa)| (l, pa.clone()))
        }
        PathFamily::Connector { sources, targets } => {
            shortest_path_between_weights(g, w, sources, targets)
        }
    }
}

/// p-modulus of a path family with its certifying admissible density.
pub fn p_modulus(
    g: &Graph,
    fam: &PathFamily,
    p: f64,
    cfg: &ModulusConfig,
) -> Result<ModulusResult, CapmodError> {
    if !(p > 1.01) {
        return Err(CapmodError::BadFamily(format!("exponent p = {p} must be > 1.01")));
    }
    fam.validate(g)?;
    if let PathFamily::Explicit(paths) = fam {
        if paths.is_empty() {
            return Ok(ModulusResult {
                modulus: 0.0,
                weights: vec![0.0; g.edge_count()],
                dual_lower: 0.0,
                active_paths: Vec::new(),
                max_tightness_slack: 0.0,
                outer_iterations: 0,
                inner_sweeps: 0,
            });
        }
    }

    // Initial uniform density 1/diameter for the first shortest-path query;
    // hop distance between the sets stands in for the diameter.
    let init_scale = match fam {
        PathFamily::Connector { sources, targets } => {
            let dist = g.hop_distances(sources);
            let h = targets.iter().map(|&t| dist[t]).min().unwrap_or(1).max(1);
            1.0 / h as f64
        }
        PathFamily::Explicit(paths) => {
            let h = paths.iter().map(|pa| pa.edge_ids().len()).min().unwrap_or(1);
            1.0 / h as f64
        }
    };
    let mut weights = vec![init_scale; g.edge_count()];

    let mut state = DualState::new(g, p);
    let mut inner_sweeps_total = 0usize;
    let mut outer = 0usize;
    let mut gap_tol = cfg.gap_tol;
    let mut last_inner_gap = f64::INFINITY;
    loop {
        outer += 1;
        let (mut len, path) = shortest_family_path(g, fam, &weights)
            .ok_or_else(|| CapmodError::BadFamily("family admits no path".into()))?;
        let mut converged = !state.active.is_empty() && len >= 1.0 - cfg.constraint_tol;
        if converged && last_inner_gap > cfg.gap_tol {
            // The active set was solved loosely while constraints were being
            // collected; certify the final value at the requested gap.
            let budget = cfg.max_inner_sweeps.saturating_sub(inner_sweeps_total).max(1);
            let (w, sweeps) = state.solve_inner(cfg.gap_tol, budget);
            inner_sweeps_total += sweeps;
            last_inner_gap = cfg.gap_tol;
            weights = w;
            let (len2, _) = shortest_family_path(g, fam, &weights)
                .ok_or_else(|| CapmodError::BadFamily("family admits no path".into()))?;
            len = len2;
            converged = len2 >= 1.0 - cfg.constraint_tol;
            if !converged {
                continue;
            }
        }
        if converged || outer > cfg.max_outer {
            let scale = if len > 0.0 { len } else { 1.0 };
            let final_weights: Vec<f64> = weights.iter().map(|&x| x / scale).collect();
            let modulus = state.objective(&final_weights);
            let dual = state.dual_value();
            // KKT tightness of the supported constraints, under the final
            // scaled density.
            let mut slack = 0.0f64;
            for (pa, &lam) in state.active.iter().zip(&state.lambda) {
                if lam > 0.0 {
                    let l: f64 = pa.edge_ids().iter().map(|&e| final_weights[e]).sum();
                    slack = slack.max((l - 1.0).abs());
                }
            }
            return Ok(ModulusResult {
                modulus,
                weights: final_weights,
                dual_lower: dual,
                active_paths: state.active,
                max_tightness_slack: slack,
                outer_iterations: outer,
                inner_sweeps: inner_sweeps_total,
            });
        }
        let duplicate = state
            .active
            .iter()
            .any(|pa| pa.vertices() == path.vertices());
        if duplicate {
            // The active-set solution is not yet accurate enough to push the
            // shortest length to 1; tighten the inner tolerance.
            gap_tol *= 0.1;
            if gap_tol < 1e-15 {
                gap_tol = 1e-15;
            }
        } else {
            state.active.push(path);
            state.lambda.push(0.0);
        }
        let budget = cfg
            .max_inner_sweeps
            .saturating_sub(inner_sweeps_total)
            .max(1);
        // Solve loosely while the shortest length is far below 1 and only
        // tighten as feasibility approaches; the converged branch certifies
        // at the requested gap before returning.
        let adaptive_gap = gap_tol.max(0.02 * (1.0 - len).max(0.0));
        let (w, sweeps) = state.solve_inner(adaptive_gap, budget);
        last_inner_gap = adaptive_gap;
        inner_sweeps_total += sweeps;
        weights = w;
    }
}

/// p-extremal length: the reciprocal of the modulus; infinite for families
/// of zero modulus (the p-null case at this finite scale).
pub fn extremal_length(
    g: &Graph,
    fam: &PathFamily,
    p: f64,
    cfg: &ModulusConfig,
) -> Result<(f64, ModulusResult), CapmodError> {
    let res = p_modulus(g, fam, p, cfg)?;
    let el = if res.modulus > 0.0 {
        1.0 / res.modulus
    } else {
        f64::INFINITY
    };
    Ok((el, res))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NullVerdict {
    NullTrend,
    NotNullTrend,
}

impl std::fmt::Display for NullVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NullVerdict::NullTrend => write!(f, "null-trend"),
            NullVerdict::NotNullTrend => write!(f, "not-null-trend"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct NullTrend {
    pub radii: Vec<usize>,
    pub moduli: Vec<f64>,
    pub verdict: NullVerdict,
}

#[derive(Debug, Clone)]
pub struct NullTrendConfig {
    /// Hard decay threshold: null-trend once the modulus falls below this
    /// fraction of its first value.
    pub absolute_ratio: f64,
    /// Decay-trend thresholds; a parabolic-style verdict on the modulus
    /// curve also counts as null (parabolicity and nullity of the full path
    /// family are equivalent, so the same classifier applies).
    pub trend: TrendThresholds,
    pub modulus: ModulusConfig,
}

impl Default for NullTrendConfig {
    fn default() -> Self {
        NullTrendConfig {
            absolute_ratio: 1e-3,
            trend: TrendThresholds::default(),
            modulus: ModulusConfig::default(),
        }
    }
}

/// Modulus of the center-to-sphere connector on growing exhaustions, with a
/// null-trend verdict.
pub fn null_family_trend(
    family: &Family,
    p: f64,
    radii: &[usize],
    cfg: &NullTrendConfig,
) -> Result<NullTrend, CapmodError> {
    let mut moduli = Vec::with_capacity(radii.len());
    for &r in radii {
        let gg = family.instantiate(r)?;
        let dist = gg.graph.hop_distances(&[gg.center]);
        let ball: Vec<usize> = (0..gg.graph.vertex_count())
            .filter(|&v| dist[v] <= r)
            .collect();
        let (sub, old_of_new) = gg.graph.induced_subgraph(&ball)?;
        let center_sub = (0..sub.vertex_count())
            .find(|&v| old_of_new[v] == gg.center)
            .expect("center in ball");
        let sphere_sub: Vec<usize> = (0..sub.vertex_count())
            .filter(|&v| dist[old_of_new[v]] == r)
            .collect();
        let fam = PathFamily::Connector {
            sources: vec![center_sub],
            targets: sphere_sub,
        };
        let res = p_modulus(&sub, &fam, p, &cfg.modulus)?;
        moduli.push(res.modulus);
    }
    let verdict = if moduli.len() >= 2 && moduli[0] > 0.0 {
        let hard = moduli.last().unwrap() / moduli[0] <= cfg.absolute_ratio;
        let trendy = classify_capacity_trend(radii, &moduli, &cfg.trend).verdict
            == TrendVerdict::ParabolicTrend;
        if hard || trendy {
            NullVerdict::NullTrend
        } else {
            NullVerdict::NotNullTrend
        }
    } else {
        NullVerdict::NotNullTrend
    };
    Ok(NullTrend {
        radii: radii.to_vec(),
        moduli,
        verdict,
    })
}

/// Where the shrinking targets of a resolving check live.
#[derive(Debug, Clone)]
pub enum Anchor {
    /// Packing case: Euclidean distances from per-vertex positions (ball
    /// centers) to a fixed point.
    Point { point: Vec<f64>, positions: Vec<Vec<f64>> },
    /// Metric case: d_m distances from a designated vertex set.
    VertexSet(Vec<usize>),
}

/// Finite stand-in for a boundary point: an anchor plus strictly
/// decreasing positive scales.
#[derive(Debug, Clone)]
pub struct BoundaryProxy {
    pub anchor: Anchor,
    pub scales: Vec<f64>,
}

impl BoundaryProxy {
    pub fn new(anchor: Anchor, scales: Vec<f64>) -> Result<Self, CapmodError> {
        if scales.is_empty() || scales.iter().any(|&s| !(s > 0.0)) {
            return Err(CapmodError::BadScales);
        }
        if scales.windows(2).any(|w| w[1] >= w[0]) {
            return Err(CapmodError::BadScales);
        }
        Ok(BoundaryProxy { anchor, scales })
    }
}

#[derive(Debug, Clone)]
pub struct ResolvingConfig {
    /// The far set collects vertices at distance >= far_fraction * max
    /// distance from the anchor.
    pub far_fraction: f64,
    /// Resolving-trend verdict requires final/initial modulus at most this.
    pub ratio_threshold: f64,
    pub modulus: ModulusConfig,
}

impl Default for ResolvingConfig {
    fn default() -> Self {
        ResolvingConfig {
            far_fraction: 0.75,
            ratio_threshold: 0.1,
            modulus: ModulusConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolvingVerdict {
    ResolvingTrend,
    NotResolving,
}

impl std::fmt::Display for ResolvingVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ResolvingVerdict::ResolvingTrend => write!(f, "resolving-trend"),
            ResolvingVerdict::NotResolving => write!(f, "not-resolving"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ResolvingResult {
    pub scales: Vec<f64>,
    pub moduli: Vec<f64>,
    pub verdict: ResolvingVerdict,
    /// L^p norm of the metric under test (a resolving metric must be L^p).
    pub metric_lp_norm: f64,
    pub far_set_size: usize,
    pub target_sizes: Vec<usize>,
}

/// Modulus of the connector from a fixed far set to shrinking neighborhoods
/// of the anchor. Verdict: resolving-trend iff the moduli strictly decrease
/// and the final one is at most ratio_threshold times the first.
pub fn resolving_check(
    g: &Graph,
    m: &EdgeMetric,
    proxy: &BoundaryProxy,
    p: f64,
    cfg: &ResolvingConfig,
) -> Result<ResolvingResult, CapmodError> {
    let n = g.vertex_count();
    let dist: Vec<f64> = match &proxy.anchor {
        Anchor::Point { point, positions } => {
            if positions.len() != n {
                return Err(CapmodError::BadFamily(format!(
                    "anchor has {} positions for {} vertices",
                    positions.len(),
                    n
                )));
            }
            positions
                .iter()
                .map(|z| {
                    z.iter()
                        .zip(point)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt()
                })
                .collect()
        }
        Anchor::VertexSet(set) => {
            if set.is_empty() {
                return Err(CapmodError::EmptyTarget);
            }
            metric_distances(g, m, set)
        }
    };
    let max_dist = dist.iter().cloned().fold(0.0, f64::max);
    let far_cut = cfg.far_fraction * max_dist;
    let far: Vec<usize> = (0..n).filter(|&v| dist[v] >= far_cut).collect();
    if far.is_empty() {
        return Err(CapmodError::EmptyTarget);
    }
    if proxy.scales[0] >= far_cut {
        return Err(CapmodError::BadScales);
    }
    let mut moduli = Vec::with_capacity(proxy.scales.len());
    let mut target_sizes = Vec::with_capacity(proxy.scales.len());
    for &s in &proxy.scales {
        let targets: Vec<usize> = (0..n).filter(|&v| dist[v] <= s).collect();
        if targets.is_empty() {
            return Err(CapmodError::EmptyTarget);
        }
        let fam = PathFamily::Connector {
            sources: far.clone(),
            targets,
        };
        let res = p_modulus(g, &fam, p, &cfg.modulus)?;
        target_sizes.push(match &fam {
            PathFamily::Connector { targets, .. } => targets.len(),
            _ => unreachable!(),
        });
        moduli.push(res.modulus);
    }
    let strictly_decreasing = moduli.windows(2).all(|w| w[1] < w[0]);
    let ratio_ok = *moduli.last().unwrap() <= cfg.ratio_threshold * moduli[0];
    let verdict = if strictly_decreasing && ratio_ok {
        ResolvingVerdict::ResolvingTrend
    } else {
        ResolvingVerdict::NotResolving
    };
    let metric_lp_norm = m
        .values()
        .iter()
        .map(|&x| x.powf(p))
        .sum::<f64>()
        .powf(1.0 / p);
    Ok(ResolvingResult {
        scales: proxy.scales.clone(),
        moduli,
        verdict,
        metric_lp_norm,
        far_set_size: far.len(),
        target_sizes,
    })
}
