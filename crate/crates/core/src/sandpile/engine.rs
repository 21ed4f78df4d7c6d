use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Configuration, Odometer, SandpileError, StabilizationResult};
use crate::graph::{SinkedGraph, VertexId};

/// Default step limit: generous for any graph that drains.
fn default_limit(g: &SinkedGraph, c: &Configuration) -> u64 {
    let n = g.n_vertices() as u128;
    let total = c.total();
    // every topple of a drained graph eventually pushes grains toward the
    // sink; n² · (total + n) bounds the odometer sum with room to spare
    u64::try_from(n.saturating_mul(n).saturating_mul(total + n).saturating_add(1_000_000)).unwrap_or(u64::MAX)
}

/// Totals carried out of a stabilization besides the configuration itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topplings {
    pub odometer: Odometer,
    pub absorbed: u128,
    pub steps: u64,
}

/// Stabilizes `c` in place with a FIFO worklist, toppling each visited
/// vertex `⌊q/deg⌋` times at once. `limit` caps the total number of single
/// topples.
pub fn stabilize_in_place(
    g: &SinkedGraph,
    c: &mut Configuration,
    limit: Option<u64>,
) -> Result<Topplings, SandpileError> {
    c.check_len(g)?;
    let limit = limit.unwrap_or_else(|| default_limit(g, c));
    let n = g.n_vertices();
    let deg = g.degrees();
    let grains = c.as_mut_slice();
    let mut odo = vec![0u64; n];
    let mut queued = vec![false; n];
    let mut queue: VecDeque<VertexId> = VecDeque::new();
    for v in 0..n {
        if grains[v] >= u64::from(deg[v]) {
            queued[v] = true;
            queue.push_back(v);
        }
    }
    let mut steps = 0u64;
    let mut absorbed = 0u128;
    while let Some(v) = queue.pop_front() {
        queued[v] = false;
        let d = u64::from(deg[v]);
        let t = grains[v] / d;
        if t == 0 {
            continue;
        }
        steps = steps.checked_add(t).ok_or(SandpileError::Overflow { vertex: v })?;
        if steps > limit {
            return Err(SandpileError::StepLimit(limit));
        }
        grains[v] -= t * d;
        odo[v] += t;
        absorbed += u128::from(t) * u128::from(g.sink_multiplicity(v));
        for &u in g.neighbors(v) {
            grains[u] = grains[u].checked_add(t).ok_or(SandpileError::Overflow { vertex: u })?;
            if !queued[u] && grains[u] >= u64::from(deg[u]) {
                queued[u] = true;
                queue.push_back(u);
            }
        }
    }
    Ok(Topplings { odometer: Odometer(odo), absorbed, steps })
}

pub fn stabilize(g: &SinkedGraph, c: &Configuration) -> Result<StabilizationResult, SandpileError> {
    stabilize_with_limit(g, c, None)
}

pub fn stabilize_with_limit(
    g: &SinkedGraph,
    c: &Configuration,
    limit: Option<u64>,
) -> Result<StabilizationResult, SandpileError> {
    let mut config = c.clone();
    let t = stabilize_in_place(g, &mut config, limit)?;
    Ok(StabilizationResult { config, odometer: t.odometer, absorbed: t.absorbed, steps: t.steps })
}

/// Single topples in an order drawn from `seed`: each step picks a uniformly
/// random unstable vertex. Slow; meant for checking order independence.
pub fn stabilize_random_order(
    g: &SinkedGraph,
    c: &Configuration,
    seed: u64,
) -> Result<StabilizationResult, SandpileError> {
    c.check_len(g)?;
    let limit = default_limit(g, c);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut grains = c.as_slice().to_vec();
    let n = g.n_vertices();
    let deg = g.degrees();
    let mut odo = vec![0u64; n];
    let mut pos = vec![usize::MAX; n];
    let mut unstable: Vec<VertexId> = Vec::new();
    let mark = |v: VertexId, unstable: &mut Vec<VertexId>, pos: &mut Vec<usize>| {
        if pos[v] == usize::MAX {
            pos[v] = unstable.len();
            unstable.push(v);
        }
    };
    for v in 0..n {
        if grains[v] >= u64::from(deg[v]) {
            mark(v, &mut unstable, &mut pos);
        }
    }
    let mut steps = 0u64;
    let mut absorbed = 0u128;
    while !unstable.is_empty() {
        let i = rng.gen_range(0..unstable.len());
        let v = unstable[i];
        steps += 1;
        if steps > limit {
            return Err(SandpileError::StepLimit(limit));
        }
        grains[v] -= u64::from(deg[v]);
        odo[v] += 1;
        absorbed += u128::from(g.sink_multiplicity(v));
        for &u in g.neighbors(v) {
            grains[u] = grains[u].checked_add(1).ok_or(SandpileError::Overflow { vertex: u })?;
            if grains[u] >= u64::from(deg[u]) {
                mark(u, &mut unstable, &mut pos);
            }
        }
        if grains[v] < u64::from(deg[v]) {
            let last = *unstable.last().unwrap();
            unstable.swap_remove(pos[v]);
            if last != v {
                pos[last] = pos[v];
            }
            pos[v] = usize::MAX;
        }
    }
    Ok(StabilizationResult { config: Configuration(grains), odometer: Odometer(odo), absorbed, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build, triangle_chain, Family, FamilySpec};

    #[test]
    fn single_topple_on_sg() {
        let g = build(FamilySpec::sinked(Family::Sg, 3)).unwrap();
        let v0 = g.center().unwrap();
        let c = Configuration::zeros(g.n_vertices()).drop(v0, 4).unwrap();
        let r = stabilize(&g, &c).unwrap();
        assert_eq!(r.config.get(v0), 0);
        for &u in g.neighbors(v0) {
            assert_eq!(r.config.get(u), 1);
        }
        assert_eq!(r.odometer.get(v0), 1);
        assert_eq!(r.steps, 1);
        assert_eq!(r.absorbed, 0);
    }

    #[test]
    fn four_everywhere_on_sgc() {
        for n in 1..5 {
            let g = build(FamilySpec::sinked(Family::Sgc, n)).unwrap();
            let r = stabilize(&g, &Configuration::constant(g.n_vertices(), 4)).unwrap();
            assert!(r.config.as_slice().iter().all(|&x| x == 2), "level {n}");
        }
    }

    #[test]
    fn random_order_matches_fifo() {
        let g = triangle_chain(3).unwrap();
        let c = Configuration(vec![7, 2, 9, 0, 5, 3, 11, 1, 4]);
        let a = stabilize(&g, &c).unwrap();
        for seed in 0..5 {
            assert_eq!(stabilize_random_order(&g, &c, seed).unwrap(), a);
        }
    }

    #[test]
    fn step_limit_trips() {
        let g = build(FamilySpec::sinked(Family::Sg, 2)).unwrap();
        let c = Configuration::constant(g.n_vertices(), 100);
        assert!(matches!(stabilize_with_limit(&g, &c, Some(3)), Err(SandpileError::StepLimit(3))));
    }

    #[test]
    fn overflow_is_reported() {
        let g = triangle_chain(1).unwrap();
        let c = Configuration(vec![u64::MAX, u64::MAX, 0]);
        assert!(matches!(stabilize(&g, &c), Err(SandpileError::Overflow { .. })));
    }
}
