//! Seeded random instances for the identity suite and tests. All sampling
//! goes through a caller-provided generator so experiment runs are
//! reproducible.

use rand::Rng;

use crate::graph::{Graph, VertexFunction};

/// Random connected graph: a uniform random spanning tree skeleton plus up
/// to `extra_edges` additional random non-parallel edges.
pub fn random_connected_graph<R: Rng>(rng: &mut R, n: usize, extra_edges: usize) -> Graph {
    assert!(n >= 2);
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(n - 1 + extra_edges);
    for v in 1..n {
        let parent = rng.random_range(0..v);
        edges.push((parent, v));
    }
    let mut seen: std::collections::HashSet<(usize, usize)> =
        edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    for _ in 0..extra_edges {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if seen.insert(key) {
            edges.push(key);
        }
    }
    Graph::from_parts(n, &edges).expect("spanning tree keeps the graph connected")
}

/// Uniform values in [-scale, scale].
pub fn random_function<R: Rng>(rng: &mut R, n: usize, scale: f64) -> VertexFunction {
    let values: Vec<f64> = (0..n).map(|_| rng.random_range(-scale..scale)).collect();
    VertexFunction::from_values(n, values).expect("finite random values")
}

/// Two disjoint nonempty random vertex sets, sizes in [1, max_size].
pub fn random_disjoint_sets<R: Rng>(
    rng: &mut R,
    n: usize,
    max_size: usize,
) -> (Vec<usize>, Vec<usize>) {
    assert!(n >= 2);
    let mut order: Vec<usize> = (0..n).collect();
    // Fisher-Yates with the provided generator.
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        order.swap(i, j);
    }
    let ka = rng.random_range(1..=max_size.min(n / 2).max(1));
    let kb = rng.random_range(1..=max_size.min(n / 2).max(1));
    let mut a: Vec<usize> = order[..ka].to_vec();
    let mut b: Vec<usize> = order[ka..ka + kb].to_vec();
    a.sort_unstable();
    b.sort_unstable();
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn random_graph_is_deterministic_per_seed() {
        let mut r1 = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut r2 = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let g1 = random_connected_graph(&mut r1, 40, 30);
        let g2 = random_connected_graph(&mut r2, 40, 30);
        assert_eq!(g1, g2);
    }

    #[test]
    fn random_sets_are_disjoint() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let (a, b) = random_disjoint_sets(&mut rng, 20, 5);
            assert!(!a.is_empty() && !b.is_empty());
            assert!(a.iter().all(|x| !b.contains(x)));
        }
    }
}
