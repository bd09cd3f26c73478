//! Graph family generators at finite scale: lattice boxes, rooted regular
//! trees, Cartesian products, hyperbolic {p,q} tessellations and hexagonal
//! triangulated disks.
//!
//! All generators return a [`GeneratedGraph`]: the graph plus coordinate
//! labels, a designated center, a marked boundary, and (where meaningful)
//! the face list and product structure.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexFunction};

/// Default cap on generated vertex counts; override with the
/// `PTHEORY_VERTEX_BUDGET` environment variable.
pub const DEFAULT_VERTEX_BUDGET: usize = 4_000_000;

pub fn vertex_budget() -> usize {
    std::env::var("PTHEORY_VERTEX_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_VERTEX_BUDGET)
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("size limit: {requested} vertices exceeds budget {budget}")]
    SizeLimit { requested: usize, budget: usize },
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("({p},{q}) is not hyperbolic: need (p-2)(q-2) > 4")]
    NotHyperbolic { p: usize, q: usize },
    #[error("graph is not a product with a path factor")]
    NotAProduct,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cannot parse family spec `{0}`")]
    ParseFamily(String),
}

fn check_budget(requested: usize) -> Result<(), GenError> {
    let budget = vertex_budget();
    if requested > budget {
        return Err(GenError::SizeLimit { requested, budget });
    }
    Ok(())
}

/// Which family a generated graph came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyTag {
    Lattice,
    Tree,
    Product,
    Tessellation,
    Disk,
}

/// Product bookkeeping: vertex `(a, x)` of `g x h` has index `a * right_n + x`.
#[derive(Debug, Clone)]
pub struct ProductInfo {
    pub left_n: usize,
    pub right_n: usize,
    /// If the right factor is a path: its vertices in path order.
    pub right_path: Option<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub struct GeneratedGraph {
    pub graph: Graph,
    pub family: FamilyTag,
    /// Human-readable coordinate label per vertex; labels are unique.
    pub labels: Vec<String>,
    /// Designated center (lattice origin, tree root, tiling center, ...).
    pub center: usize,
    /// Marked boundary (box faces, leaves, outermost ring).
    pub boundary: Vec<usize>,
    /// Face list for tessellations and triangulated disks.
    pub faces: Option<Vec<Vec<usize>>>,
    /// Integer coordinates where the family has them (lattice points, axial
    /// hex coordinates); used by coordinate-ramp boundary schemes.
    pub coords: Option<Vec<Vec<i64>>>,
    pub product: Option<ProductInfo>,
}

/// Nearest-neighbor graph on the box `{-R..R}^d`, center at the origin.
pub fn lattice_box(d: usize, radius: i64) -> Result<GeneratedGraph, GenError> {
    if d < 1 {
        return Err(GenError::BadParameter("dimension must be >= 1".into()));
    }
    if radius < 1 {
        return Err(GenError::BadParameter("radius must be >= 1".into()));
    }
    let side = (2 * radius + 1) as usize;
    let n = side
        .checked_pow(d as u32)
        .ok_or(GenError::SizeLimit { requested: usize::MAX, budget: vertex_budget() })?;
    check_budget(n)?;

    let coord = |mut idx: usize| -> Vec<i64> {
        let mut c = vec![0i64; d];
        for k in (0..d).rev() {
            c[k] = (idx % side) as i64 - radius;
            idx /= side;
        }
        c
    };
    let index = |c: &[i64]| -> usize {
        let mut idx = 0usize;
        for &x in c {
            idx = idx * side + (x + radius) as usize;
        }
        idx
    };

    let mut edges = Vec::new();
    let mut labels = Vec::with_capacity(n);
    let mut coords = Vec::with_capacity(n);
    let mut boundary = Vec::new();
    for v in 0..n {
        let c = coord(v);
        coords.push(c.clone());
        labels.push(format!(
            "({})",
            c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        ));
        if c.iter().any(|&x| x.abs() == radius) {
            boundary.push(v);
        }
        for k in 0..d {
            if c[k] < radius {
                let mut cu = c.clone();
                cu[k] += 1;
                edges.push((v, index(&cu)));
            }
        }
    }
    let center = index(&vec![0i64; d]);
    Ok(GeneratedGraph {
        graph: Graph::from_parts(n, &edges)?,
        family: FamilyTag::Lattice,
        labels,
        center,
        boundary,
        faces: None,
        coords: Some(coords),
        product: None,
    })
}

/// Rooted regular tree.
///
/// Convention: the root has `b` children. For `b >= 3` every non-root
/// internal vertex has `b - 1` children, so all non-leaf degrees equal `b`
/// (the b-regular tree). For `b = 2` that would degenerate into a path, so
/// `b = 2` builds the dyadic (binary) tree: two children everywhere, root
/// degree 2, internal degree 3.
pub fn regular_tree(branching: usize, depth: usize) -> Result<GeneratedGraph, GenError> {
    if branching < 2 {
        return Err(GenError::BadParameter("branching must be >= 2".into()));
    }
    if depth < 1 {
        return Err(GenError::BadParameter("depth must be >= 1".into()));
    }
    let children_inner = if branching == 2 { 2 } else { branching - 1 };

    // Count first so we can reject oversize requests before allocating.
    let mut count: usize = 1;
    let mut layer: usize = branching;
    for _ in 0..depth {
        count = count
            .checked_add(layer)
            .ok_or(GenError::SizeLimit { requested: usize::MAX, budget: vertex_budget() })?;
        layer = layer
            .checked_mul(children_inner)
            .ok_or(GenError::SizeLimit { requested: usize::MAX, budget: vertex_budget() })?;
    }
    check_budget(count)?;

    let mut edges = Vec::with_capacity(count - 1);
    let mut labels = vec!["r".to_string(); 1];
    let mut boundary = Vec::new();
    // Vertices in BFS order: current frontier with labels.
    let mut frontier = vec![0usize];
    let mut next_id = 1usize;
    for level in 0..depth {
        let mut next = Vec::new();
        for &v in &frontier {
            let k = if v == 0 { branching } else { children_inner };
            for c in 0..k {
                let u = next_id;
                next_id += 1;
                edges.push((v, u));
                labels.push(format!("{}.{}", labels[v], c));
                next.push(u);
            }
        }
        if level + 1 == depth {
            boundary = next.clone();
        }
        frontier = next;
    }
    Ok(GeneratedGraph {
        graph: Graph::from_parts(count, &edges)?,
        family: FamilyTag::Tree,
        labels,
        center: 0,
        boundary,
        faces: None,
        coords: None,
        product: None,
    })
}

/// Detects whether `h` is a path; if so returns its vertices in path order,
/// starting from the smaller-indexed endpoint.
fn path_order(h: &Graph) -> Option<Vec<usize>> {
    let n = h.vertex_count();
    if n == 1 {
        return Some(vec![0]);
    }
    let ends: Vec<usize> = (0..n).filter(|&v| h.degree(v) == 1).collect();
    if ends.len() != 2 || (0..n).any(|v| h.degree(v) > 2) {
        return None;
    }
    let start = ends[0].min(ends[1]);
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while order.len() < n {
        let next = h
            .neighbors(cur)
            .iter()
            .map(|&(u, _)| u)
            .find(|&u| u != prev)?;
        order.push(next);
        prev = cur;
        cur = next;
    }
    Some(order)
}

/// Cartesian product: `(a,x) ~ (b,y)` iff (`a=b` and `x~y`) or (`a~b` and `x=y`).
/// Vertex `(a, x)` has index `a * |V(h)| + x`. If `h` is a path, the product
/// records it so that [`z_shift`] can act on the second factor; the center is
/// then `(0, middle of path)`.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Result<GeneratedGraph, GenError> {
    let ng = g.vertex_count();
    let nh = h.vertex_count();
    let n = ng
        .checked_mul(nh)
        .ok_or(GenError::SizeLimit { requested: usize::MAX, budget: vertex_budget() })?;
    check_budget(n)?;
    let mut edges = Vec::with_capacity(ng * h.edge_count() + nh * g.edge_count());
    for a in 0..ng {
        for &(x, y) in h.edges() {
            edges.push((a * nh + x, a * nh + y));
        }
    }
    for &(a, b) in g.edges() {
        for x in 0..nh {
            edges.push((a * nh + x, b * nh + x));
        }
    }
    let mut labels = Vec::with_capacity(n);
    for a in 0..ng {
        for x in 0..nh {
            labels.push(format!("({a},{x})"));
        }
    }
    let right_path = path_order(h);
    let center = match &right_path {
        Some(order) => order[(order.len() - 1) / 2],
        None => 0,
    };
    Ok(GeneratedGraph {
        graph: Graph::from_parts(n, &edges)?,
        family: FamilyTag::Product,
        labels,
        center,
        boundary: Vec::new(),
        faces: None,
        coords: None,
        product: Some(ProductInfo {
            left_n: ng,
            right_n: nh,
            right_path,
        }),
    })
}

/// Pulls `f` back along the +1 shift of the path factor: the result at
/// `(a, x)` is `f(a, x+1)`. Vertices shifted off the segment keep the end
/// column's values.
pub fn z_shift(pg: &GeneratedGraph, f: &VertexFunction) -> Result<VertexFunction, GenError> {
    let info = pg.product.as_ref().ok_or(GenError::NotAProduct)?;
    let order = info.right_path.as_ref().ok_or(GenError::NotAProduct)?;
    let mut pos_of = vec![0usize; info.right_n];
    for (pos, &v) in order.iter().enumerate() {
        pos_of[v] = pos;
    }
    let mut out = vec![0.0; pg.graph.vertex_count()];
    for a in 0..info.left_n {
        for x in 0..info.right_n {
            let pos = pos_of[x];
            let shifted = order[(pos + 1).min(order.len() - 1)];
            out[a * info.right_n + x] = f.get(a * info.right_n + shifted);
        }
    }
    Ok(VertexFunction::from_values(pg.graph.vertex_count(), out).map_err(GraphError::from)?)
}

// --- Hyperbolic {p,q} tessellations -------------------------------------
//
// The patch is grown as concentric annuli of faces. The current patch
// boundary is a cyclic vertex list; each boundary vertex knows how many
// faces it already touches. One annulus attaches, for every boundary edge,
// a p-gon sharing that edge ("edge face"), and, at every boundary vertex v,
// a fan of q - f(v) - 2 p-gons ("vertex faces") filling the angular gap.
// Needs q >= 4 so the fan count stays nonnegative; q = 3 is produced as the
// planar dual of the {3,p} patch.

struct TessBuilder {
    p: usize,
    edges: Vec<(usize, usize)>,
    faces: Vec<Vec<usize>>,
    face_count: Vec<usize>,
    labels: Vec<String>,
    layer_of: Vec<usize>,
    next_id: usize,
}

impl TessBuilder {
    fn new_vertex(&mut self, layer: usize) -> usize {
        let v = self.next_id;
        self.next_id += 1;
        self.face_count.push(0);
        self.labels.push(format!("L{}#{}", layer, v));
        self.layer_of.push(layer);
        v
    }

    fn add_face(&mut self, verts: Vec<usize>) {
        debug_assert_eq!(verts.len(), self.p);
        for w in verts.windows(2) {
            self.edges.push((w[0], w[1]));
        }
        self.edges.push((*verts.last().unwrap(), verts[0]));
        for &v in &verts {
            self.face_count[v] += 1;
        }
        self.faces.push(verts);
    }
}

/// Vertex graph of the regular {p,q} hyperbolic tessellation, built as
/// `layers` face annuli around a central vertex. Interior vertices (all but
/// the last annulus) have degree exactly q.
pub fn hyperbolic_tessellation(
    p: usize,
    q: usize,
    layers: usize,
) -> Result<GeneratedGraph, GenError> {
    if p < 3 || q < 3 {
        return Err(GenError::BadParameter("need p >= 3 and q >= 3".into()));
    }
    if (p - 2) * (q - 2) <= 4 {
        return Err(GenError::NotHyperbolic { p, q });
    }
    if layers < 1 {
        return Err(GenError::BadParameter("layers must be >= 1".into()));
    }
    if q == 3 {
        return tessellation_dual(p, layers);
    }

    let mut b = TessBuilder {
        p,
        edges: Vec::new(),
        faces: Vec::new(),
        face_count: Vec::new(),
        labels: Vec::new(),
        layer_of: Vec::new(),
        next_id: 0,
    };
    let center = b.new_vertex(0);
    b.labels[center] = "L0#0".into();

    // Ring 1: q faces around the center. Radial vertices r_0..r_{q-1} with
    // chains of p-3 vertices between consecutive radials.
    let radials: Vec<usize> = (0..q).map(|_| b.new_vertex(1)).collect();
    let mut boundary: Vec<usize> = Vec::new();
    for j in 0..q {
        let a = radials[j];
        let c = radials[(j + 1) % q];
        let chain: Vec<usize> = (0..p - 3).map(|_| b.new_vertex(1)).collect();
        let mut face = vec![center, a];
        face.extend(&chain);
        face.push(c);
        b.add_face(face);
        boundary.push(a);
        boundary.extend(&chain);
    }

    for layer in 2..=layers {
        check_budget(b.next_id)?;
        boundary = attach_annulus(&mut b, &boundary, q, layer)?;
    }

    let n = b.next_id;
    check_budget(n)?;
    let boundary_sorted = {
        let mut s = boundary.clone();
        s.sort_unstable();
        s
    };
    Ok(GeneratedGraph {
        graph: Graph::from_parts(n, &dedup_edges(&b.edges))?,
        family: FamilyTag::Tessellation,
        labels: b.labels,
        center,
        boundary: boundary_sorted,
        faces: Some(b.faces),
        coords: None,
        product: None,
    })
}

fn dedup_edges(edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut set = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(edges.len());
    for &(u, v) in edges {
        let key = (u.min(v), u.max(v));
        if set.insert(key) {
            out.push(key);
        }
    }
    out
}

/// Attaches one annulus of faces to the boundary cycle; returns the new
/// boundary cycle.
///
/// At a boundary vertex whose fan count `q - faces - 2` is zero (chain-end
/// vertices of {p,4} tilings), the two adjacent edge-face chains share their
/// endpoint so the face cycle around that vertex closes.
fn attach_annulus(
    b: &mut TessBuilder,
    boundary: &[usize],
    q: usize,
    layer: usize,
) -> Result<Vec<usize>, GenError> {
    let p = b.p;
    let blen = boundary.len();
    // Fan counts before any annulus faces are attached.
    let fan_count: Vec<usize> = boundary
        .iter()
        .map(|&v| {
            let f = b.face_count[v];
            if f + 2 > q {
                return usize::MAX;
            }
            q - f - 2
        })
        .collect();
    if fan_count.iter().any(|&k| k == usize::MAX) {
        return Err(GenError::BadParameter(format!(
            "annulus construction needs q >= faces+2 at every boundary vertex ({{{p},{q}}})"
        )));
    }
    // Rotate so the cycle starts at a vertex with a nonzero fan; then chain
    // sharing never wraps around. Merging only occurs for q = 4, where chain
    // middles always provide such a vertex.
    let offset = fan_count
        .iter()
        .position(|&k| k > 0)
        .ok_or_else(|| GenError::BadParameter(format!("degenerate annulus for {{{p},{q}}}")))?;
    let boundary: Vec<usize> = (0..blen).map(|i| boundary[(i + offset) % blen]).collect();
    let fan_count: Vec<usize> = (0..blen).map(|i| fan_count[(i + offset) % blen]).collect();
    // Edge faces: chains of p-2 new vertices over each boundary edge; the
    // first chain vertex is reused from the previous chain when the shared
    // boundary vertex has fan count 0.
    let mut chains: Vec<Vec<usize>> = Vec::with_capacity(blen);
    let mut first_shared = vec![false; blen];
    for i in 0..blen {
        let mut chain = Vec::with_capacity(p - 2);
        if fan_count[i] == 0 && i > 0 {
            chain.push(*chains[i - 1].last().unwrap());
            first_shared[i] = true;
        }
        while chain.len() < p - 2 {
            chain.push(b.new_vertex(layer));
        }
        chains.push(chain);
    }
    for i in 0..blen {
        let u = boundary[i];
        let v = boundary[(i + 1) % blen];
        let mut face = vec![u];
        face.extend(&chains[i]);
        face.push(v);
        b.add_face(face);
    }
    // Vertex fans: at boundary vertex v_i, between the chain of edge (i-1,i)
    // and the chain of edge (i,i+1).
    let mut new_boundary = Vec::new();
    for i in 0..blen {
        let v = boundary[i];
        let k = fan_count[i];
        let prev_chain_end = *chains[(i + blen - 1) % blen].last().unwrap();
        let next_chain_start = chains[i][0];
        if k > 0 {
            // Radial endpoints of the fan: r_0 = prev chain end, r_k = next
            // chain start, with k-1 fresh radial vertices in between.
            let mut rads = vec![prev_chain_end];
            for _ in 1..k {
                rads.push(b.new_vertex(layer));
            }
            rads.push(next_chain_start);
            for j in 0..k {
                let chain: Vec<usize> = (0..p - 3).map(|_| b.new_vertex(layer)).collect();
                let mut face = vec![v, rads[j]];
                face.extend(&chain);
                face.push(rads[j + 1]);
                b.add_face(face);
                if j > 0 {
                    new_boundary.push(rads[j]);
                }
                new_boundary.extend(&chain);
            }
        }
        // The chain of edge (i, i+1) joins the boundary after the fan; skip
        // its head if it was shared with the previous chain.
        let skip = if first_shared[i] { 1 } else { 0 };
        new_boundary.extend(&chains[i][skip..]);
    }
    Ok(new_boundary)
}

/// {p,3} realized as the planar dual of the {3,p} patch: one dual vertex per
/// triangle, adjacent iff the triangles share an edge. Interior dual
/// vertices have degree 3.
fn tessellation_dual(p: usize, layers: usize) -> Result<GeneratedGraph, GenError> {
    // A {3,p} patch with layers+1 annuli gives enough triangles for `layers`
    // dual annuli.
    let primal = hyperbolic_tessellation(3, p, layers + 1)?;
    let faces = primal.faces.as_ref().expect("tessellation stores faces");
    let mut edge_to_faces: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (fi, face) in faces.iter().enumerate() {
        for i in 0..face.len() {
            let u = face[i];
            let v = face[(i + 1) % face.len()];
            edge_to_faces.entry((u.min(v), u.max(v))).or_default().push(fi);
        }
    }
    let mut edges = Vec::new();
    for fs in edge_to_faces.values() {
        if fs.len() == 2 {
            edges.push((fs[0], fs[1]));
        }
    }
    let n = faces.len();
    check_budget(n)?;
    let graph = Graph::from_parts(n, &dedup_edges(&edges))?;
    let labels: Vec<String> = (0..n).map(|i| format!("F#{i}")).collect();
    // Dual boundary: faces with at least one unshared edge.
    let mut is_boundary = vec![false; n];
    for ((_, _), fs) in edge_to_faces.iter() {
        if fs.len() == 1 {
            is_boundary[fs[0]] = true;
        }
    }
    let boundary: Vec<usize> = (0..n).filter(|&i| is_boundary[i]).collect();
    Ok(GeneratedGraph {
        graph,
        family: FamilyTag::Tessellation,
        labels,
        center: 0,
        boundary,
        faces: None,
        coords: None,
        product: None,
    })
}

// --- Hexagonal triangulated disks ----------------------------------------

fn hex_dist(q: i64, r: i64) -> i64 {
    // Axial coordinates on the triangular lattice.
    let s = -q - r;
    q.abs().max(r.abs()).max(s.abs())
}

/// Hexagonal-lattice disk with `layers` rings: all interior faces are
/// triangles, interior vertices have degree 6, the boundary is the outer
/// ring ordered as a cycle.
pub fn triangulated_disk(layers: usize) -> Result<GeneratedGraph, GenError> {
    if layers < 1 {
        return Err(GenError::BadParameter("layers must be >= 1".into()));
    }
    let l = layers as i64;
    let n = 1 + 3 * layers * (layers + 1);
    check_budget(n)?;

    let mut pts = Vec::with_capacity(n);
    for q in -l..=l {
        for r in -l..=l {
            if hex_dist(q, r) <= l {
                pts.push((q, r));
            }
        }
    }
    // Deterministic ordering: ring by ring, by angle within the ring.
    pts.sort_by(|a, b| {
        let (da, db) = (hex_dist(a.0, a.1), hex_dist(b.0, b.1));
        da.cmp(&db).then_with(|| {
            let ang = |p: &(i64, i64)| {
                let x = p.0 as f64 + 0.5 * p.1 as f64;
                let y = 3f64.sqrt() / 2.0 * p.1 as f64;
                y.atan2(x)
            };
            ang(a).partial_cmp(&ang(b)).unwrap().then(a.cmp(b))
        })
    });
    let index: HashMap<(i64, i64), usize> =
        pts.iter().enumerate().map(|(i, &p)| (p, i)).collect();

    // Triangular-lattice neighbor steps in axial coordinates.
    const STEPS: [(i64, i64); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];
    let mut edges = Vec::new();
    let mut faces = Vec::new();
    for &(q, r) in &pts {
        let v = index[&(q, r)];
        for &(dq, dr) in &STEPS {
            if let Some(&u) = index.get(&(q + dq, r + dr)) {
                if v < u {
                    edges.push((v, u));
                }
            }
        }
        // Upward and left-up unit triangles, each counted once.
        let tri = |a: (i64, i64), b: (i64, i64)| -> Option<Vec<usize>> {
            Some(vec![v, *index.get(&a)?, *index.get(&b)?])
        };
        if let Some(t) = tri((q + 1, r), (q, r + 1)) {
            faces.push(t);
        }
        if let Some(t) = tri((q, r + 1), (q - 1, r + 1)) {
            faces.push(t);
        }
    }

    let boundary: Vec<usize> = pts
        .iter()
        .enumerate()
        .filter(|(_, &(q, r))| hex_dist(q, r) == l)
        .map(|(i, _)| i)
        .collect();
    let labels: Vec<String> = pts.iter().map(|&(q, r)| format!("({q},{r})")).collect();

    Ok(GeneratedGraph {
        graph: Graph::from_parts(n, &edges)?,
        family: FamilyTag::Disk,
        labels,
        center: index[&(0, 0)],
        boundary,
        faces: Some(faces),
        coords: Some(pts.iter().map(|&(q, r)| vec![q, r]).collect()),
        product: None,
    })
}

// --- Family specs ---------------------------------------------------------

/// A parametrized family that can be instantiated at any exhaustion radius;
/// used by capacity curves, index scans and the CLI.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `lattice:<d>` -- Z^d boxes; radius parameter is the box radius.
    Lattice { dim: usize },
    /// `tree:<b>` -- rooted regular tree; radius parameter is the depth.
    Tree { branching: usize },
    /// `tree-z:<b>` -- tree(b) x Z; radius R gives depth R and segment -R..R.
    TreeZ { branching: usize },
    /// `tessellation:<p>,<q>` -- {p,q} tiling; radius parameter is the layer count.
    Tessellation { p: usize, q: usize },
    /// `disk` -- hexagonal triangulated disk; radius parameter is the layer count.
    Disk,
}

impl Family {
    pub fn parse(s: &str) -> Result<Self, GenError> {
        let err = || GenError::ParseFamily(s.to_string());
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n, a),
            None => (s, ""),
        };
        let nums: Vec<usize> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| err())?
        };
        match (name, nums.as_slice()) {
            ("lattice", [d]) => Ok(Family::Lattice { dim: *d }),
            ("tree", [b]) => Ok(Family::Tree { branching: *b }),
            ("tree-z", [b]) => Ok(Family::TreeZ { branching: *b }),
            ("tessellation", [p, q]) => Ok(Family::Tessellation { p: *p, q: *q }),
            ("disk", []) => Ok(Family::Disk),
            _ => Err(err()),
        }
    }

    /// Builds the family member large enough that the hop ball of the given
    /// radius around the center is the true infinite-graph ball.
    pub fn instantiate(&self, radius: usize) -> Result<GeneratedGraph, GenError> {
        match *self {
            Family::Lattice { dim } => lattice_box(dim, radius as i64),
            Family::Tree { branching } => regular_tree(branching, radius),
            Family::TreeZ { branching } => {
                let tree = regular_tree(branching, radius)?;
                let seg = lattice_box(1, radius as i64)?;
                cartesian_product(&tree.graph, &seg.graph)
            }
            Family::Tessellation { p, q } => hyperbolic_tessellation(p, q, radius),
            Family::Disk => triangulated_disk(radius),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::Lattice { dim } => write!(f, "lattice:{dim}"),
            Family::Tree { branching } => write!(f, "tree:{branching}"),
            Family::TreeZ { branching } => write!(f, "tree-z:{branching}"),
            Family::Tessellation { p, q } => write!(f, "tessellation:{p},{q}"),
            Family::Disk => write!(f, "disk"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_line_is_path() {
        let g = lattice_box(1, 1).unwrap();
        assert_eq!(g.graph.vertex_count(), 3);
        assert_eq!(g.graph.edge_count(), 2);
        assert_eq!(g.graph.degree(g.center), 2);
    }

    #[test]
    fn lattice_square_counts() {
        // d=2, R=1: 9 vertices, 2*2R(2R+1) = 12 edges.
        let g = lattice_box(2, 1).unwrap();
        assert_eq!(g.graph.vertex_count(), 9);
        assert_eq!(g.graph.edge_count(), 12);
        assert_eq!(g.graph.ball(g.center, 1).len(), 5);
        assert_eq!(g.graph.sphere(g.center, 1).len(), 4);
    }

    #[test]
    fn lattice_cube_center_degree() {
        let g = lattice_box(3, 1).unwrap();
        assert_eq!(g.graph.vertex_count(), 27);
        assert_eq!(g.graph.degree(g.center), 6);
    }

    #[test]
    fn lattice_edge_count_formula() {
        // d*(2R+1)^(d-1)*2R edges by the hand count, d=2.
        for r in 1..5i64 {
            let g = lattice_box(2, r).unwrap();
            let side = (2 * r + 1) as usize;
            assert_eq!(g.graph.edge_count(), 2 * side * (side - 1));
        }
    }

    #[test]
    fn binary_tree_counts() {
        let g = regular_tree(2, 1).unwrap();
        assert_eq!(g.graph.vertex_count(), 3);
        // Dyadic convention: 2^(depth+1) - 1 vertices.
        let g = regular_tree(2, 3).unwrap();
        assert_eq!(g.graph.vertex_count(), 15);
        assert_eq!(g.graph.degree(0), 2);
        assert_eq!(g.boundary.len(), 8);
    }

    #[test]
    fn three_regular_tree_counts() {
        // Root degree 3, inner vertices degree 3: 1 + 3 + 6 = 10 at depth 2.
        let g = regular_tree(3, 2).unwrap();
        assert_eq!(g.graph.vertex_count(), 10);
        assert_eq!(g.graph.degree(0), 3);
        assert_eq!(g.boundary.len(), 6);
        for v in 0..g.graph.vertex_count() {
            if !g.boundary.contains(&v) {
                assert_eq!(g.graph.degree(v), 3);
            }
        }
    }

    #[test]
    fn product_square() {
        let k2 = Graph::from_edges(&[(0, 1)]).unwrap();
        let g = cartesian_product(&k2, &k2).unwrap();
        assert_eq!(g.graph.vertex_count(), 4);
        assert_eq!(g.graph.edge_count(), 4);
        assert!((0..4).all(|v| g.graph.degree(v) == 2));
    }

    #[test]
    fn product_grid_counts() {
        let p3 = Graph::from_edges(&[(0, 1), (1, 2)]).unwrap();
        let g = cartesian_product(&p3, &p3).unwrap();
        assert_eq!(g.graph.vertex_count(), 9);
        // |V(g)|*|E(h)| + |V(h)|*|E(g)| = 3*2 + 3*2 = 12.
        assert_eq!(g.graph.edge_count(), 12);
    }

    #[test]
    fn product_tree_z_degrees() {
        let tree = regular_tree(3, 2).unwrap();
        let seg = lattice_box(1, 2).unwrap();
        let g = cartesian_product(&tree.graph, &seg.graph).unwrap();
        // Interior vertex (root, middle): degree 3 + 2.
        assert_eq!(g.graph.degree(g.center), 5);
    }

    #[test]
    fn z_shift_behaviour() {
        let tree = regular_tree(2, 2).unwrap();
        let seg = lattice_box(1, 2).unwrap();
        let pg = cartesian_product(&tree.graph, &seg.graph).unwrap();
        let n = pg.graph.vertex_count();
        let info = pg.product.as_ref().unwrap();
        let order = info.right_path.clone().unwrap();

        // Constants are shift invariant.
        let c = VertexFunction::constant(n, 2.5);
        assert_eq!(z_shift(&pg, &c).unwrap(), c);

        // f = Z-coordinate becomes f+1 on interior columns.
        let mut pos_of = vec![0usize; info.right_n];
        for (pos, &v) in order.iter().enumerate() {
            pos_of[v] = pos;
        }
        let zcoord: Vec<f64> = (0..n).map(|v| pos_of[v % info.right_n] as f64).collect();
        let f = VertexFunction::from_values(n, zcoord.clone()).unwrap();
        let shifted = z_shift(&pg, &f).unwrap();
        for v in 0..n {
            let pos = pos_of[v % info.right_n];
            if pos + 1 < info.right_n {
                assert_eq!(shifted.get(v), zcoord[v] + 1.0);
            } else {
                assert_eq!(shifted.get(v), zcoord[v]);
            }
        }

        // Tree-coordinate-only functions are invariant on interior columns.
        let tf: Vec<f64> = (0..n).map(|v| (v / info.right_n) as f64).collect();
        let f = VertexFunction::from_values(n, tf.clone()).unwrap();
        let shifted = z_shift(&pg, &f).unwrap();
        assert_eq!(shifted.values(), tf.as_slice());
    }

    #[test]
    fn z_shift_requires_product() {
        let g = lattice_box(2, 1).unwrap();
        let f = VertexFunction::constant(g.graph.vertex_count(), 0.0);
        assert!(matches!(z_shift(&g, &f), Err(GenError::NotAProduct)));
    }

    #[test]
    fn tessellation_rejects_euclidean() {
        assert!(matches!(
            hyperbolic_tessellation(3, 6, 1),
            Err(GenError::NotHyperbolic { .. })
        ));
        assert!(matches!(
            hyperbolic_tessellation(4, 4, 1),
            Err(GenError::NotHyperbolic { .. })
        ));
    }

    #[test]
    fn tessellation_45_center_degree() {
        let g = hyperbolic_tessellation(4, 5, 1).unwrap();
        assert_eq!(g.graph.degree(g.center), 5);
        // One annulus of {4,5}: center + 5 radials + 5 chain vertices.
        assert_eq!(g.graph.vertex_count(), 11);
    }

    /// Independent layer-recursion counter for {p,q} annuli (q >= 4): tracks
    /// how many boundary vertices carry each face count, without building
    /// any adjacency.
    fn annulus_count_oracle(p: usize, q: usize, layers: usize) -> usize {
        // state: #boundary vertices with f = 1, 2, 3 prior faces.
        let mut total = 1usize;
        let mut b1: usize; // f = 1
        let mut b2: usize; // f = 2
        let mut b3: usize = 0; // f = 3 (p=3 chain vertices)
        if p == 3 {
            // Ring-1 faces [center, r_j, r_{j+1}]: every radial lies in 2.
            b1 = 0;
            b2 = q;
        } else {
            b1 = q * (p - 3);
            b2 = q;
        }
        total += b1 + b2 + b3;
        for _ in 2..=layers {
            let blen = b1 + b2 + b3;
            let k = |f: usize| q - f - 2; // fan faces at a boundary vertex
            // Adjacent edge-face chains share an endpoint at k=0 vertices.
            let merges = [(b1, 1), (b2, 2), (b3, 3)]
                .iter()
                .filter(|&&(c, f)| c > 0 && k(f) == 0)
                .map(|&(c, _)| c)
                .sum::<usize>();
            let edge_new = blen * (p - 2) - merges;
            let mut new_radials = 0;
            let mut new_chain = 0;
            for &(count, f) in &[(b1, 1usize), (b2, 2), (b3, 3)] {
                if count == 0 {
                    continue;
                }
                let kf = k(f);
                new_radials += count * kf.saturating_sub(1);
                new_chain += count * kf * (p - 3);
            }
            total += edge_new + new_radials + new_chain;
            // New boundary composition: chain ends carry f=2 (merged or not),
            // chain middles f=1, fan radials f=2, fan chain vertices f=1; for
            // p=3 the single chain vertex of each edge face carries f=3.
            if p == 3 {
                b3 = blen;
                b2 = new_radials;
                b1 = new_chain;
            } else {
                b2 = 2 * blen - merges + new_radials;
                b1 = blen * (p - 4) + new_chain;
                b3 = 0;
            }
        }
        total
    }

    #[test]
    fn tessellation_counts_match_oracle() {
        for (p, q, layers) in [(4, 5, 3), (3, 7, 4), (5, 4, 3), (4, 6, 3)] {
            let g = hyperbolic_tessellation(p, q, layers).unwrap();
            assert_eq!(
                g.graph.vertex_count(),
                annulus_count_oracle(p, q, layers),
                "{{{p},{q}}} with {layers} layers"
            );
        }
    }

    #[test]
    fn tessellation_interior_degree_is_q() {
        for (p, q) in [(4, 5), (3, 7), (5, 4)] {
            let g = hyperbolic_tessellation(p, q, 3).unwrap();
            let outer: std::collections::HashSet<usize> = g.boundary.iter().copied().collect();
            // Vertices strictly inside the last annulus have reached their
            // full fan.
            for v in 0..g.graph.vertex_count() {
                let layer: usize = g.labels[v][1..g.labels[v].find('#').unwrap()]
                    .parse()
                    .unwrap();
                if layer + 2 <= 3 && !outer.contains(&v) {
                    assert_eq!(g.graph.degree(v), q, "vertex {v} layer {layer}");
                }
            }
        }
    }

    #[test]
    fn tessellation_layer_growth_is_geometric() {
        let g = hyperbolic_tessellation(4, 5, 4).unwrap();
        let mut per_layer = vec![0usize; 5];
        for v in 0..g.graph.vertex_count() {
            let layer: usize = g.labels[v][1..g.labels[v].find('#').unwrap()]
                .parse()
                .unwrap();
            per_layer[layer] += 1;
        }
        assert!(per_layer[2] > 2 * per_layer[1]);
        assert!(per_layer[3] > 2 * per_layer[2]);
        assert!(per_layer[4] > 2 * per_layer[3]);
    }

    #[test]
    fn tessellation_q3_dual_degrees() {
        let g = hyperbolic_tessellation(7, 3, 2).unwrap();
        let outer: std::collections::HashSet<usize> = g.boundary.iter().copied().collect();
        for v in 0..g.graph.vertex_count() {
            if !outer.contains(&v) {
                assert_eq!(g.graph.degree(v), 3);
            } else {
                assert!(g.graph.degree(v) <= 3);
            }
        }
    }

    #[test]
    fn disk_flower() {
        let g = triangulated_disk(1).unwrap();
        assert_eq!(g.graph.vertex_count(), 7);
        assert_eq!(g.graph.edge_count(), 12);
        assert_eq!(g.faces.as_ref().unwrap().len(), 6);
        assert_eq!(g.graph.degree(g.center), 6);
        assert_eq!(g.boundary.len(), 6);
    }

    #[test]
    fn disk_two_layers() {
        let g = triangulated_disk(2).unwrap();
        assert_eq!(g.graph.vertex_count(), 19);
        // Interior vertices all have degree 6.
        for v in 0..19 {
            if !g.boundary.contains(&v) {
                assert_eq!(g.graph.degree(v), 6);
            }
        }
        // Euler with the outer face: V - E + (F_int + 1) = 2.
        let f = g.faces.as_ref().unwrap().len();
        assert_eq!(
            19 as i64 - g.graph.edge_count() as i64 + f as i64 + 1,
            2
        );
    }

    #[test]
    fn generators_respect_budget() {
        std::env::set_var("PTHEORY_VERTEX_BUDGET", "10");
        let err = lattice_box(2, 3);
        std::env::remove_var("PTHEORY_VERTEX_BUDGET");
        assert!(matches!(err, Err(GenError::SizeLimit { .. })));
    }

    #[test]
    fn family_parse_round_trip() {
        for s in ["lattice:2", "tree:3", "tree-z:3", "tessellation:4,5", "disk"] {
            let fam = Family::parse(s).unwrap();
            assert_eq!(fam.to_string(), s);
        }
        assert!(Family::parse("nope:1").is_err());
    }
}
