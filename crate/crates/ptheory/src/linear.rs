//! Dense direct solver for the p = 2 Dirichlet problem. This is a separate
//! algebraic route (Gaussian elimination on the interior Laplacian system)
//! kept independent of the iterative solver so the two can be checked
//! against each other.

use crate::graph::{Graph, VertexFunction};
use crate::potential::{DirichletProblem, SolverError};

/// Solves the 2-harmonic Dirichlet problem by eliminating the interior
/// block of the graph Laplacian with partial pivoting. Intended for graphs
/// up to a few thousand vertices.
pub fn solve_dirichlet_p2_exact(
    g: &Graph,
    prob: &DirichletProblem,
) -> Result<VertexFunction, SolverError> {
    let n = g.vertex_count();
    if prob.boundary.is_empty() {
        return Err(SolverError::EmptyBoundary);
    }
    let mut fixed = vec![false; n];
    let mut values = vec![0.0; n];
    for &(v, x) in &prob.boundary {
        g.check_vertex(v)?;
        if fixed[v] {
            return Err(SolverError::DuplicateBoundary(v));
        }
        if !x.is_finite() {
            return Err(SolverError::NonfiniteBoundary(v));
        }
        fixed[v] = true;
        values[v] = x;
    }
    let interior: Vec<usize> = (0..n).filter(|&v| !fixed[v]).collect();
    let ni = interior.len();
    if ni == 0 {
        return Ok(VertexFunction::from_values(n, values)?);
    }
    let mut idx = vec![usize::MAX; n];
    for (i, &v) in interior.iter().enumerate() {
        idx[v] = i;
    }

    // Assemble L_II x = -L_IB f_B as a dense system.
    let mut a = vec![0.0f64; ni * ni];
    let mut b = vec![0.0f64; ni];
    for &(u, v) in g.edges() {
        match (idx[u], idx[v]) {
            (i, j) if i != usize::MAX && j != usize::MAX => {
                a[i * ni + i] += 1.0;
                a[j * ni + j] += 1.0;
                a[i * ni + j] -= 1.0;
                a[j * ni + i] -= 1.0;
            }
            (i, _) if i != usize::MAX => {
                a[i * ni + i] += 1.0;
                b[i] += values[v];
            }
            (_, j) if j != usize::MAX => {
                a[j * ni + j] += 1.0;
                b[j] += values[u];
            }
            _ => {}
        }
    }

    // Gaussian elimination with partial pivoting.
    for col in 0..ni {
        let mut piv = col;
        let mut best = a[col * ni + col].abs();
        for row in col + 1..ni {
            let mag = a[row * ni + col].abs();
            if mag > best {
                best = mag;
                piv = row;
            }
        }
        if best == 0.0 {
            return Err(SolverError::Config(
                "singular interior system; is the boundary nonempty per component?".into(),
            ));
        }
        if piv != col {
            for k in 0..ni {
                a.swap(col * ni + k, piv * ni + k);
            }
            b.swap(col, piv);
        }
        let d = a[col * ni + col];
        for row in col + 1..ni {
            let factor = a[row * ni + col] / d;
            if factor == 0.0 {
                continue;
            }
            for k in col..ni {
                a[row * ni + k] -= factor * a[col * ni + k];
            }
            b[row] -= factor * b[col];
        }
    }
    for col in (0..ni).rev() {
        let mut s = b[col];
        for k in col + 1..ni {
            s -= a[col * ni + k] * b[k];
        }
        b[col] = s / a[col * ni + col];
    }
    for (i, &v) in interior.iter().enumerate() {
        values[v] = b[i];
    }
    Ok(VertexFunction::from_values(n, values)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{solve_dirichlet, SolverConfig};
    use rand::SeedableRng;

    #[test]
    fn linear_ramp_on_path() {
        let g = Graph::from_edges(&[(0, 1), (1, 2), (2, 3)]).unwrap();
        let prob = DirichletProblem::new(vec![(0, 0.0), (3, 1.0)]);
        let f = solve_dirichlet_p2_exact(&g, &prob).unwrap();
        for v in 0..4 {
            assert!((f.get(v) - v as f64 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn matches_iterative_solver() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let g = crate::randgen::random_connected_graph(&mut rng, 50, 40);
            let prob = DirichletProblem::new(vec![(0, 1.0), (7, 0.0), (13, 0.4)]);
            let exact = solve_dirichlet_p2_exact(&g, &prob).unwrap();
            let cfg = SolverConfig::new(2.0).unwrap().with_tolerance(1e-12);
            let iter = solve_dirichlet(&g, &prob, &cfg).unwrap();
            for v in 0..g.vertex_count() {
                assert!((exact.get(v) - iter.values.get(v)).abs() < 1e-8);
            }
        }
    }
}
