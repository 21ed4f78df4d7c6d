#![allow(dead_code)]

use fractal_sandpile::{Configuration, SinkedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Reference stabilizer: scan for the lowest-index unstable vertex and
/// topple it once, until nothing is unstable. Returns (config, odometer).
pub fn naive_stabilize(g: &SinkedGraph, c: &Configuration) -> (Vec<u64>, Vec<u64>) {
    let n = g.n_vertices();
    let mut x = c.as_slice().to_vec();
    let mut odo = vec![0u64; n];
    loop {
        let Some(v) = (0..n).find(|&v| x[v] >= u64::from(g.degree(v))) else {
            return (x, odo);
        };
        x[v] -= u64::from(g.degree(v));
        odo[v] += 1;
        for &u in g.neighbors(v) {
            x[u] += 1;
        }
    }
}

/// Random configuration with entries in `0..=max` per vertex.
pub fn random_config(g: &SinkedGraph, seed: u64, max: u64) -> Configuration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Configuration((0..g.n_vertices()).map(|_| rng.gen_range(0..=max)).collect())
}

/// Random configuration with `total` grains spread uniformly.
pub fn random_pile(g: &SinkedGraph, seed: u64, total: u64) -> Configuration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = vec![0u64; g.n_vertices()];
    if !c.is_empty() {
        let n = c.len();
        for _ in 0..total {
            c[rng.gen_range(0..n)] += 1;
        }
    }
    Configuration(c)
}

/// `final(v) = initial(v) − deg(v)·odo(v) + Σ_{u∼v} odo(u)` for every `v`.
pub fn laplacian_identity_holds(g: &SinkedGraph, initial: &Configuration, fin: &Configuration, odo: &[u64]) -> bool {
    (0..g.n_vertices()).all(|v| {
        let inflow: i128 = g.neighbors(v).iter().map(|&u| i128::from(odo[u])).sum();
        let lhs = i128::from(fin.get(v));
        let rhs = i128::from(initial.get(v)) - i128::from(g.degree(v)) * i128::from(odo[v]) + inflow;
        lhs == rhs
    })
}
