// Scratch calibration runs; removed before release.

use std::time::Instant;

use ptheory::capmod::{
    capacity_curve, classify_capacity_trend, resolving_check, Anchor, BoundaryProxy,
    ResolvingConfig, TrendThresholds,
};
use ptheory::circlepack::{pack_disk, Triangulation};
use ptheory::generators::{triangulated_disk, Family};
use ptheory::packing::{blocking_metric, blocking_radii, contact_graph, packing_metric};
use ptheory::potential::SolverConfig;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let which = args.get(1).map(|s| s.as_str()).unwrap_or("all");

    if which == "maeda2" || which == "all" {
        let t0 = Instant::now();
        let fam = Family::Lattice { dim: 2 };
        let radii = [4usize, 8, 16, 32, 64, 128];
        for p in [1.5, 2.0, 3.0] {
            let t1 = Instant::now();
            let cfg = SolverConfig::new(p).unwrap().with_tolerance(1e-8);
            let curve = capacity_curve(&fam, p, &radii, &cfg).unwrap();
            let report = classify_capacity_trend(&curve.radii, &curve.values, &TrendThresholds::default());
            println!(
                "Z2 p={p}: values={:?}\n  ratio={:.4} last_change={:.4} slope={:?} verdict={} ({:.1?}s)",
                curve.values, report.ratio, report.last_change, report.loglog_slope,
                report.verdict, t1.elapsed()
            );
        }
        println!("Z2 total {:.1?}", t0.elapsed());
    }

    if which == "maeda3" || which == "all" {
        let t0 = Instant::now();
        let fam = Family::Lattice { dim: 3 };
        let radii = [4usize, 8, 14, 20];
        for p in [2.0, 3.0] {
            let t1 = Instant::now();
            let cfg = SolverConfig::new(p).unwrap().with_tolerance(1e-8);
            let curve = capacity_curve(&fam, p, &radii, &cfg).unwrap();
            let report = classify_capacity_trend(&curve.radii, &curve.values, &TrendThresholds::default());
            println!(
                "Z3 p={p}: values={:?}\n  ratio={:.4} last_change={:.4} slope={:?} verdict={} ({:.1?}s)",
                curve.values, report.ratio, report.last_change, report.loglog_slope,
                report.verdict, t1.elapsed()
            );
        }
        println!("Z3 total {:.1?}", t0.elapsed());
    }

    if which == "tree" || which == "all" {
        for p in [1.5, 2.0, 3.0, 4.0] {
            let cfg = SolverConfig::new(p).unwrap().with_tolerance(1e-10);
            let fam = Family::Tree { branching: 2 };
            let curve = capacity_curve(&fam, p, &[4, 6, 8, 10, 11, 12], &cfg).unwrap();
            let k = curve.values.len() - 1;
            println!(
                "tree2 p={p}: {:?} last_ratio={:.4}",
                curve.values,
                curve.values[k] / curve.values[k - 1]
            );
        }
        for p in [2.0, 3.0] {
            let t1 = Instant::now();
            let cfg = SolverConfig::new(p).unwrap().with_tolerance(1e-8);
            let fam = Family::TreeZ { branching: 3 };
            let radii = [6usize, 8, 10, 11, 12];
            let curve = capacity_curve(&fam, p, &radii, &cfg).unwrap();
            let report = classify_capacity_trend(&curve.radii, &curve.values, &TrendThresholds::default());
            println!(
                "tree3xZ p={p}: values={:?} ratio={:.4} change={:.4} verdict={} ({:.1?}s)",
                curve.values, report.ratio, report.last_change, report.verdict, t1.elapsed()
            );
        }
    }

    if which == "cusp" || which == "all" {
        let t0 = Instant::now();
        let layers = 6usize;
        let gg = triangulated_disk(layers).unwrap();
        let t = Triangulation::from_generated(&gg).unwrap();
        let b = t.boundary.len();
        let ratio: f64 = 0.5;
        let radii: Vec<f64> = (0..b)
            .map(|j| ratio.powi(j.min(b - j) as i32))
            .collect();
        let packed = match pack_disk(&t, &radii, 1e-9) {
            Ok(p) => p,
            Err(e) => {
                println!("cusp pack FAILED: {e}");
                return;
            }
        };
        println!(
            "cusp pack: sweeps={} angle_res={:.2e} tangency_res={:.2e} ({:.1?})",
            packed.sweeps, packed.angle_residual, packed.tangency_residual, t0.elapsed()
        );
        let min_r = packed.radii.iter().cloned().fold(f64::INFINITY, f64::min);
        println!("min radius {:.3e}, max {:.3e}", min_r, packed.radii.iter().cloned().fold(0.0, f64::max));

        let cg = contact_graph(&packed.packing, 1e-7);
        let mut got = cg.edges.clone();
        got.sort_unstable();
        let mut want: Vec<(usize, usize)> = t.graph.edges().to_vec();
        want.sort_unstable();
        println!("contact graph exact: {}", got == want);
        let g = cg.graph().unwrap();
        let m = packing_metric(&packed.packing, &g).unwrap();

        // Anchor at the smallest boundary circle's center.
        let vstar = t.boundary[b / 2]; // j = b/2 has the smallest radius
        let anchor = packed.centers[vstar].to_vec();
        println!("anchor vertex {vstar} radius {:.3e}", packed.radii[vstar]);

        let br = blocking_radii(&packed.packing, &g, &anchor, 10).unwrap();
        println!(
            "blocking radii (N={} truncated={}): {:?}",
            br.radii.len(),
            br.truncated,
            br.radii
        );
        println!("certs hold: {}", br.all_certificates_hold());
        if br.radii.len() >= 2 {
            let out = blocking_metric(&packed.packing, &g, &br, 1e-6).unwrap();
            println!(
                "supports disjoint: {} (max overlap {}), measured C = {:.3}",
                out.supports_disjoint, out.max_support_overlap, out.measured_c
            );
            let nearest = br.nearest_vertex(&packed.packing);
            println!("nearest vertex {nearest} (vstar {vstar})");
        }

        // Resolve-check scale calibration.
        let dist: Vec<f64> = packed
            .centers
            .iter()
            .map(|c| ((c[0] - anchor[0]).powi(2) + (c[1] - anchor[1]).powi(2)).sqrt())
            .collect();
        let dmax = dist.iter().cloned().fold(0.0, f64::max);
        println!("max center distance from anchor: {dmax:.3}");
        let mut sorted = dist.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        println!("nearest center distances: {:?}", &sorted[..8.min(sorted.len())]);
        for (ff, fracs) in [
            (0.2, [0.17, 0.015, 4e-4, 5e-6]),
            (0.25, [0.22, 0.02, 5e-4, 5e-6]),
        ] {
            let scales: Vec<f64> = fracs.iter().map(|f| f * dmax).collect();
            let proxy = BoundaryProxy::new(
                Anchor::Point { point: anchor.clone(), positions: packed.packing.centers() },
                scales.clone(),
            )
            .unwrap();
            let mut rc = ResolvingConfig::default();
            rc.far_fraction = ff;
            let t1 = Instant::now();
            match resolving_check(&g, &m, &proxy, 2.0, &rc) {
                Ok(res) => println!(
                    "ff={ff} scales {:?}\n  moduli {:?} ratio {:.4} verdict {} far={} targets={:?} ({:.1?})",
                    scales, res.moduli, res.moduli.last().unwrap() / res.moduli[0],
                    res.verdict, res.far_set_size, res.target_sizes, t1.elapsed()
                ),
                Err(e) => println!("ff={ff} scales {:?} -> error {e}", scales),
            }
        }
        println!("cusp total {:.1?}", t0.elapsed());
    }
}
