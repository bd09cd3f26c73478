//! Command-line front end: thin wrappers over the library operations plus a
//! reproducible experiment runner (`run <spec.toml>`).
//!
//! Exit codes: 0 success, 2 spec/usage error, 3 computation error,
//! 4 size limit.

pub mod recipes;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use ptheory::capmod::{
    self, cheeger_constant_exact, p_capacity, p_modulus, parabolic_index_estimate, resolving_check,
    Anchor, BoundaryProxy, ModulusConfig, PathFamily, ResolvingConfig, TrendThresholds,
};
use ptheory::circlepack::{pack_disk, Triangulation};
use ptheory::generators::{Family, GenError};
use ptheory::graph::{
    read_graph, read_vertex_values, write_graph, write_vertex_function, Graph, Path as GraphPath,
};
use ptheory::packing::{
    blocking_metric, blocking_radii, contact_graph, divergence_check, packing_metric,
    read_packing, verify_packing, write_packing, Packing,
};
use ptheory::potential::{solve_dirichlet, DirichletProblem, SolverConfig};

/// Marker for user/spec errors (exit code 2).
#[derive(Debug)]
pub struct SpecError(pub String);

impl std::fmt::Display for SpecError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for SpecError {}

pub fn exit_code_for(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(gen) = cause.downcast_ref::<GenError>() {
            if matches!(gen, GenError::SizeLimit { .. }) {
                return 4;
            }
        }
        if cause.downcast_ref::<SpecError>().is_some() {
            return 2;
        }
    }
    3
}

#[derive(Parser)]
#[command(name = "ptheory", version, about = "Discrete nonlinear potential theory on graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph family member and write the graph text format.
    Generate(GenerateArgs),
    /// Solve a p-harmonic Dirichlet problem.
    Solve(SolveArgs),
    /// p-capacity between vertex sets, or a capacity curve over a family.
    Capacity(CapacityArgs),
    /// p-modulus of a connector family with its certifying density.
    Modulus(ModulusArgs),
    /// Scan a p grid and classify capacity curves (trend verdicts).
    ScanIndex(ScanIndexArgs),
    /// Modulus decay toward an anchor under shrinking scales.
    ResolveCheck(ResolveCheckArgs),
    /// Circle-pack a triangulated disk.
    Pack2d(Pack2dArgs),
    /// Verify packing disjointness and report roundness.
    PackVerify(PackVerifyArgs),
    /// Contact graph and packing metric of a packing.
    PackMetric(PackMetricArgs),
    /// Blocking radii, blocking metric and divergence profiles.
    PackBlock(PackBlockArgs),
    /// Exact Cheeger constant by enumeration (small graphs).
    Cheeger(CheegerArgs),
    /// Random-instance check of the energy/Laplacian identities.
    IdentitySuite(IdentitySuiteArgs),
    /// Run a recipe from an experiment spec file.
    Run(RunArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Family spec: lattice:<d> | tree:<b> | tree-z:<b> | tessellation:<p>,<q> | disk
    #[arg(long)]
    family: String,
    /// Radius / depth / layer parameter.
    #[arg(long)]
    radius: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Boundary data file: `vertex value` lines.
    #[arg(long)]
    boundary: PathBuf,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CapacityArgs {
    /// Graph mode: graph file plus explicit source/target sets.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    sources: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    targets: Vec<usize>,
    /// Curve mode: family spec plus radii.
    #[arg(long)]
    family: Option<String>,
    #[arg(long, value_delimiter = ',')]
    radii: Vec<usize>,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct ModulusArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_delimiter = ',')]
    sources: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    targets: Vec<usize>,
    #[arg(long)]
    p: f64,
    /// Write the certifying admissible density as `edge weight` lines.
    #[arg(long)]
    weights_out: Option<PathBuf>,
}

#[derive(Args)]
struct ScanIndexArgs {
    #[arg(long)]
    family: String,
    #[arg(long, value_delimiter = ',')]
    p_grid: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    radii: Vec<usize>,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct ResolveCheckArgs {
    #[arg(long)]
    packing: PathBuf,
    /// Anchor point "x,y,..."; `auto` picks the center of the smallest ball.
    #[arg(long, default_value = "auto")]
    anchor: String,
    /// Scales as fractions of the max center distance, strictly decreasing.
    #[arg(long, value_delimiter = ',')]
    scale_fractions: Vec<f64>,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long, default_value_t = 0.25)]
    far_fraction: f64,
    #[arg(long, default_value_t = 1e-6)]
    contact_tol: f64,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct Pack2dArgs {
    /// Triangulation file: graph text format plus a `boundary:` line.
    #[arg(long)]
    triangulation: PathBuf,
    /// Uniform boundary radius.
    #[arg(long, default_value_t = 1.0)]
    boundary_radius: f64,
    /// Optional cusp profile: radius ratio^min(j, B-j) at boundary position j.
    #[arg(long)]
    cusp_ratio: Option<f64>,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PackVerifyArgs {
    #[arg(long)]
    packing: PathBuf,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct PackMetricArgs {
    #[arg(long)]
    packing: PathBuf,
    #[arg(long, default_value_t = 1e-9)]
    contact_tol: f64,
    /// Output graph text format with the packing metric values.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PackBlockArgs {
    #[arg(long)]
    packing: PathBuf,
    #[arg(long, default_value = "auto")]
    anchor: String,
    #[arg(long, default_value_t = 10)]
    n_max: usize,
    #[arg(long, default_value_t = 1e-6)]
    delta: f64,
    #[arg(long, default_value_t = 0.5)]
    c0: f64,
    /// Number of divergence test paths (from the farthest vertices).
    #[arg(long, default_value_t = 5)]
    paths: usize,
    #[arg(long, default_value_t = 1e-6)]
    contact_tol: f64,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct CheegerArgs {
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Args)]
struct IdentitySuiteArgs {
    #[arg(long, default_value_t = 200)]
    instances: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    max_vertices: usize,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    spec: PathBuf,
}

pub fn run_cli(args: &[String]) -> Result<()> {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return Ok(());
            }
            return Err(anyhow!(SpecError(e.to_string())));
        }
    };
    match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Capacity(a) => cmd_capacity(a),
        Command::Modulus(a) => cmd_modulus(a),
        Command::ScanIndex(a) => cmd_scan_index(a),
        Command::ResolveCheck(a) => cmd_resolve_check(a),
        Command::Pack2d(a) => cmd_pack2d(a),
        Command::PackVerify(a) => cmd_pack_verify(a),
        Command::PackMetric(a) => cmd_pack_metric(a),
        Command::PackBlock(a) => cmd_pack_block(a),
        Command::Cheeger(a) => cmd_cheeger(a),
        Command::IdentitySuite(a) => cmd_identity_suite(a),
        Command::Run(a) => recipes::run_spec_file(&a.spec),
    }
}

fn parse_family(s: &str) -> Result<Family> {
    Family::parse(s).map_err(|e| anyhow!(SpecError(e.to_string())))
}

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| anyhow!(SpecError(format!("cannot read {}: {e}", path.display()))))
}

fn load_graph(path: &Path) -> Result<(Graph, Option<ptheory::EdgeMetric>)> {
    let text = read_to_string(path)?;
    read_graph(&text).map_err(|e| anyhow!(SpecError(format!("{}: {e}", path.display()))))
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

fn write_output(path: &Path, content: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)
                .with_context(|| format!("creating {}", dir.display()))?;
        }
    }
    std::fs::write(path, content).with_context(|| format!("writing {}", path.display()))
}

fn maybe_write(path: &Option<PathBuf>, content: &str) -> Result<()> {
    match path {
        Some(p) => write_output(p, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Graph text format plus `boundary: v0 v1 ...` line.
pub fn read_triangulation_file(text: &str) -> Result<Triangulation> {
    let mut graph_lines = String::new();
    let mut boundary: Option<Vec<usize>> = None;
    for line in text.lines() {
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix("boundary:") {
            let cycle: Vec<usize> = rest
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| anyhow!(SpecError("bad boundary line".into())))?;
            boundary = Some(cycle);
        } else {
            graph_lines.push_str(line);
            graph_lines.push('\n');
        }
    }
    let (graph, _) =
        read_graph(&graph_lines).map_err(|e| anyhow!(SpecError(e.to_string())))?;
    let boundary =
        boundary.ok_or_else(|| anyhow!(SpecError("missing `boundary:` line".into())))?;
    Ok(Triangulation::infer_faces(graph, boundary)?)
}

fn cmd_generate(a: GenerateArgs) -> Result<()> {
    let fam = parse_family(&a.family)?;
    let gg = fam.instantiate(a.radius)?;
    let mut comments = vec![
        format!("family {} radius {}", fam, a.radius),
        format!("center {}", gg.center),
    ];
    for (v, label) in gg.labels.iter().enumerate() {
        comments.push(format!("label {v} {label}"));
    }
    let mut text = write_graph(&gg.graph, None, &comments);
    if !gg.boundary.is_empty() {
        let line: Vec<String> = gg.boundary.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(text, "boundary: {}", line.join(" "));
    }
    write_output(&a.out, &text)?;
    println!(
        "generated {}: {} vertices, {} edges -> {}",
        fam,
        gg.graph.vertex_count(),
        gg.graph.edge_count(),
        a.out.display()
    );
    Ok(())
}

fn cmd_solve(a: SolveArgs) -> Result<()> {
    let (graph, _) = load_graph(&a.graph)?;
    let boundary_text = read_to_string(&a.boundary)?;
    let boundary =
        read_vertex_values(&boundary_text).map_err(|e| anyhow!(SpecError(e.to_string())))?;
    let cfg = SolverConfig::new(a.p)?.with_tolerance(a.tol);
    let sol = solve_dirichlet(&graph, &DirichletProblem::new(boundary), &cfg)?;
    let text = write_vertex_function(&sol.values);
    match &a.out {
        Some(path) => write_output(path, &text)?,
        None => print!("{text}"),
    }
    eprintln!(
        "residual {} after {} sweeps (+{} newton steps)",
        fmt_f64(sol.residual),
        sol.sweeps,
        sol.newton_steps
    );
    Ok(())
}

pub const CSV_HEADER_PUB: &str = "family,p,radius_or_scale,value,residual,verdict\n";
const CSV_HEADER: &str = CSV_HEADER_PUB;

fn cmd_capacity(a: CapacityArgs) -> Result<()> {
    let cfg = SolverConfig::new(a.p)?.with_tolerance(a.tol);
    match (&a.graph, &a.family) {
        (Some(path), None) => {
            if a.sources.is_empty() || a.targets.is_empty() {
                bail!(SpecError("graph mode needs --sources and --targets".into()));
            }
            let (graph, _) = load_graph(path)?;
            let cap = p_capacity(&graph, &a.sources, &a.targets, &cfg)?;
            println!("{}", fmt_f64(cap.value));
            eprintln!("residual {}", fmt_f64(cap.residual));
            Ok(())
        }
        (None, Some(famspec)) => {
            if a.radii.is_empty() {
                bail!(SpecError("curve mode needs --radii".into()));
            }
            let fam = parse_family(famspec)?;
            let curve = capmod::capacity_curve(&fam, a.p, &a.radii, &cfg)?;
            let mut out = String::from(CSV_HEADER);
            for i in 0..curve.radii.len() {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},",
                    curve.family,
                    fmt_f64(a.p),
                    curve.radii[i],
                    fmt_f64(curve.values[i]),
                    fmt_f64(curve.residuals[i])
                );
            }
            maybe_write(&a.csv, &out)
        }
        _ => bail!(SpecError(
            "use either --graph with --sources/--targets, or --family with --radii".into()
        )),
    }
}

fn cmd_modulus(a: ModulusArgs) -> Result<()> {
    let (graph, _) = load_graph(&a.graph)?;
    if a.sources.is_empty() || a.targets.is_empty() {
        bail!(SpecError("--sources and --targets are required".into()));
    }
    let fam = PathFamily::Connector {
        sources: a.sources.clone(),
        targets: a.targets.clone(),
    };
    let res = p_modulus(&graph, &fam, a.p, &ModulusConfig::default())?;
    println!("{}", fmt_f64(res.modulus));
    eprintln!(
        "dual lower bound {}, {} active paths, tightness slack {}",
        fmt_f64(res.dual_lower),
        res.active_paths.len(),
        fmt_f64(res.max_tightness_slack)
    );
    if let Some(path) = &a.weights_out {
        let mut text = String::new();
        for (e, w) in res.weights.iter().enumerate() {
            let _ = writeln!(text, "{e} {}", fmt_f64(*w));
        }
        write_output(path, &text)?;
    }
    Ok(())
}

fn cmd_scan_index(a: ScanIndexArgs) -> Result<()> {
    let fam = parse_family(&a.family)?;
    if a.p_grid.is_empty() || a.radii.is_empty() {
        bail!(SpecError("--p-grid and --radii are required".into()));
    }
    let cfg = SolverConfig::new(a.p_grid[0])?.with_tolerance(a.tol);
    let scan = parabolic_index_estimate(&fam, &a.p_grid, &a.radii, &cfg, &TrendThresholds::default())?;
    let mut out = String::from(CSV_HEADER);
    for entry in &scan {
        for i in 0..entry.curve.radii.len() {
            let verdict = if i + 1 == entry.curve.radii.len() {
                entry.report.verdict.to_string()
            } else {
                String::new()
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                entry.curve.family,
                fmt_f64(entry.p),
                entry.curve.radii[i],
                fmt_f64(entry.curve.values[i]),
                fmt_f64(entry.curve.residuals[i]),
                verdict
            );
        }
    }
    maybe_write(&a.csv, &out)
}

fn parse_anchor(spec: &str, packing: &Packing) -> Result<Vec<f64>> {
    if spec == "auto" {
        // Center of the smallest ball: the finite stand-in for a boundary
        // accumulation point.
        let mut best = 0;
        for (i, b) in packing.balls.iter().enumerate() {
            if b.r_out < packing.balls[best].r_out {
                best = i;
            }
        }
        return Ok(packing.balls[best].center.clone());
    }
    let coords: Vec<f64> = spec
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| anyhow!(SpecError(format!("bad anchor `{spec}`"))))?;
    if coords.len() != packing.dim {
        bail!(SpecError(format!(
            "anchor has {} coordinates, packing dimension is {}",
            coords.len(),
            packing.dim
        )));
    }
    Ok(coords)
}

fn cmd_resolve_check(a: ResolveCheckArgs) -> Result<()> {
    let packing = read_packing(&read_to_string(&a.packing)?)?;
    let anchor = parse_anchor(&a.anchor, &packing)?;
    if a.scale_fractions.is_empty() {
        bail!(SpecError("--scale-fractions is required".into()));
    }
    let graph = contact_graph(&packing, a.contact_tol).graph()?;
    let metric = packing_metric(&packing, &graph)?;
    let dmax = packing
        .balls
        .iter()
        .map(|b| {
            b.center
                .iter()
                .zip(&anchor)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max);
    let scales: Vec<f64> = a.scale_fractions.iter().map(|f| f * dmax).collect();
    let proxy = BoundaryProxy::new(
        Anchor::Point {
            point: anchor,
            positions: packing.centers(),
        },
        scales,
    )?;
    let rc = ResolvingConfig {
        far_fraction: a.far_fraction,
        ..ResolvingConfig::default()
    };
    let res = resolving_check(&graph, &metric, &proxy, a.p, &rc)?;
    let mut out = String::from(CSV_HEADER);
    for (i, (&s, &m)) in res.scales.iter().zip(&res.moduli).enumerate() {
        let verdict = if i + 1 == res.scales.len() {
            res.verdict.to_string()
        } else {
            String::new()
        };
        let _ = writeln!(
            out,
            "packing,{},{},{},,{}",
            fmt_f64(a.p),
            fmt_f64(s),
            fmt_f64(m),
            verdict
        );
    }
    maybe_write(&a.csv, &out)?;
    eprintln!(
        "metric L^p norm {}, far set {} vertices, verdict {}",
        fmt_f64(res.metric_lp_norm),
        res.far_set_size,
        res.verdict
    );
    Ok(())
}

/// Boundary radii for the cusp profile ratio^min(j, B-j).
pub fn cusp_profile(boundary_len: usize, ratio: f64) -> Vec<f64> {
    (0..boundary_len)
        .map(|j| ratio.powi(j.min(boundary_len - j) as i32))
        .collect()
}

fn cmd_pack2d(a: Pack2dArgs) -> Result<()> {
    let t = read_triangulation_file(&read_to_string(&a.triangulation)?)?;
    let radii = match a.cusp_ratio {
        Some(q) => {
            if !(q > 0.0 && q < 1.0) {
                bail!(SpecError("cusp ratio must lie in (0, 1)".into()));
            }
            cusp_profile(t.boundary.len(), q)
        }
        None => vec![a.boundary_radius; t.boundary.len()],
    };
    let packed = pack_disk(&t, &radii, a.tol)?;
    write_output(&a.out, &write_packing(&packed.packing))?;
    println!(
        "packed {} circles in {} sweeps; angle residual {}, tangency residual {}",
        packed.radii.len(),
        packed.sweeps,
        fmt_f64(packed.angle_residual),
        fmt_f64(packed.tangency_residual)
    );
    Ok(())
}

fn cmd_pack_verify(a: PackVerifyArgs) -> Result<()> {
    let packing = read_packing(&read_to_string(&a.packing)?)?;
    let report = verify_packing(&packing, a.tol);
    println!(
        "{} balls, roundness bound {}, {} violations",
        packing.len(),
        fmt_f64(report.roundness),
        report.violations.len()
    );
    for (u, v, overlap) in &report.violations {
        println!("overlap {u} {v} {}", fmt_f64(*overlap));
    }
    Ok(())
}

fn cmd_pack_metric(a: PackMetricArgs) -> Result<()> {
    let packing = read_packing(&read_to_string(&a.packing)?)?;
    let graph = contact_graph(&packing, a.contact_tol).graph()?;
    let metric = packing_metric(&packing, &graph)?;
    let norm = ptheory::packing::metric_lp_norm(&metric, packing.dim as f64);
    let comments = vec![format!(
        "packing metric; L^{} norm {}",
        packing.dim,
        fmt_f64(norm)
    )];
    write_output(&a.out, &write_graph(&graph, Some(&metric), &comments))?;
    println!(
        "contact graph: {} vertices, {} edges; ||m||_{} = {}",
        graph.vertex_count(),
        graph.edge_count(),
        packing.dim,
        fmt_f64(norm)
    );
    Ok(())
}

/// Shortest hop paths from the k farthest ball centers to the vertex
/// nearest the anchor; the divergence test paths.
pub fn far_paths_to_anchor(
    packing: &Packing,
    graph: &Graph,
    anchor: &[f64],
    k: usize,
) -> Vec<GraphPath> {
    let dist: Vec<f64> = packing
        .balls
        .iter()
        .map(|b| {
            b.center
                .iter()
                .zip(anchor)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    let mut order: Vec<usize> = (0..packing.len()).collect();
    order.sort_by(|&a, &b| dist[b].partial_cmp(&dist[a]).unwrap().then(a.cmp(&b)));
    let nearest = (0..packing.len())
        .min_by(|&a, &b| dist[a].partial_cmp(&dist[b]).unwrap())
        .unwrap();
    let ones = vec![1.0; graph.edge_count()];
    let mut out = Vec::new();
    for &start in order.iter().take(k) {
        if start == nearest {
            continue;
        }
        if let Some((_, path)) =
            ptheory::graph::shortest_path_between_weights(graph, &ones, &[start], &[nearest])
        {
            out.push(path);
        }
    }
    out
}

fn cmd_pack_block(a: PackBlockArgs) -> Result<()> {
    let packing = read_packing(&read_to_string(&a.packing)?)?;
    let anchor = parse_anchor(&a.anchor, &packing)?;
    let graph = contact_graph(&packing, a.contact_tol).graph()?;
    let br = blocking_radii(&packing, &graph, &anchor, a.n_max)?;
    eprintln!(
        "{} radii (truncated: {}), certificates hold: {}",
        br.len(),
        br.truncated,
        br.all_certificates_hold()
    );
    let out = blocking_metric(&packing, &graph, &br, a.delta)?;
    eprintln!(
        "supports disjoint: {} (max overlap {}), ||dphi||_d^d = {}, measured C = {}",
        out.supports_disjoint,
        out.max_support_overlap,
        fmt_f64(out.dphi_norm_d),
        fmt_f64(out.measured_c)
    );
    let paths = far_paths_to_anchor(&packing, &graph, &anchor, a.paths);
    let profiles = divergence_check(&packing, &br, &graph, &out.metric, &out.phi, &paths, a.c0)?;
    let mut csv = String::from("path,step,vertex,partial_sum,phi\n");
    for (pi, prof) in profiles.iter().enumerate() {
        for (k, (&s, &phi)) in prof
            .partial_sums
            .iter()
            .zip(&prof.phi_values)
            .enumerate()
        {
            let _ = writeln!(
                csv,
                "{pi},{k},{},{},{}",
                paths[pi].vertices()[k],
                fmt_f64(s),
                fmt_f64(phi)
            );
        }
        eprintln!(
            "path {pi}: phi(end) = {} vs H_N = {} (meets target: {}), telescoping ok: {}",
            fmt_f64(prof.phi_end),
            fmt_f64(prof.harmonic_target),
            prof.meets_target,
            prof.telescoping_ok
        );
    }
    maybe_write(&a.csv, &csv)
}

fn cmd_cheeger(a: CheegerArgs) -> Result<()> {
    let (graph, _) = load_graph(&a.graph)?;
    let out = cheeger_constant_exact(&graph)?;
    println!("{}", fmt_f64(out.h));
    let witness: Vec<String> = out.witness.iter().map(|v| v.to_string()).collect();
    eprintln!("witness set: {{{}}}", witness.join(", "));
    Ok(())
}

fn cmd_identity_suite(a: IdentitySuiteArgs) -> Result<()> {
    let report = recipes::identity_suite(a.instances, a.seed, a.max_vertices);
    maybe_write(&a.csv, &report.csv)?;
    eprintln!(
        "{} checks, {} failures",
        report.total,
        report.failures
    );
    if report.failures > 0 {
        bail!("identity suite found {} failing checks", report.failures);
    }
    Ok(())
}
