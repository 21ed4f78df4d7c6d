//! Configurations, stabilization and the group of recurrent configurations.

mod engine;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, SinkedGraph, VertexId};
use crate::group;

pub use engine::{
    stabilize, stabilize_in_place, stabilize_random_order, stabilize_with_limit, Topplings,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SandpileError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("grain count overflow at vertex {vertex}")]
    Overflow { vertex: VertexId },
    #[error("configuration has {got} entries but the graph has {expected} vertices")]
    Length { expected: usize, got: usize },
    #[error("stabilization exceeded {0} topples")]
    StepLimit(u64),
    #[error("configuration is not stable at vertex {0}")]
    Unstable(VertexId),
    #[error("internal error: {0}")]
    Internal(String),
}

/// Grains per non-sink vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Configuration(pub Vec<u64>);

impl Configuration {
    pub fn zeros(n: usize) -> Self {
        Configuration(vec![0; n])
    }

    pub fn constant(n: usize, value: u64) -> Self {
        Configuration(vec![value; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: VertexId) -> u64 {
        self.0[v]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [u64] {
        &mut self.0
    }

    pub fn total(&self) -> u128 {
        self.0.iter().map(|&x| u128::from(x)).sum()
    }

    pub fn drop(mut self, v: VertexId, amount: u64) -> Result<Self, SandpileError> {
        let n = self.len();
        let slot = self.0.get_mut(v).ok_or(GraphError::InvalidVertex { vertex: v, n })?;
        *slot = slot.checked_add(amount).ok_or(SandpileError::Overflow { vertex: v })?;
        Ok(self)
    }

    /// Pointwise sum.
    pub fn plus(&self, other: &Configuration) -> Result<Configuration, SandpileError> {
        if self.len() != other.len() {
            return Err(SandpileError::Length { expected: self.len(), got: other.len() });
        }
        self.0
            .iter()
            .zip(&other.0)
            .enumerate()
            .map(|(v, (a, b))| a.checked_add(*b).ok_or(SandpileError::Overflow { vertex: v }))
            .collect::<Result<Vec<_>, _>>()
            .map(Configuration)
    }

    pub fn is_stable(&self, g: &SinkedGraph) -> bool {
        self.unstable_vertex(g).is_none()
    }

    fn unstable_vertex(&self, g: &SinkedGraph) -> Option<VertexId> {
        self.0.iter().zip(g.degrees()).position(|(&x, &d)| x >= u64::from(d))
    }

    pub(crate) fn check_len(&self, g: &SinkedGraph) -> Result<(), SandpileError> {
        if self.len() == g.n_vertices() {
            Ok(())
        } else {
            Err(SandpileError::Length { expected: g.n_vertices(), got: self.len() })
        }
    }
}

/// Topples per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Odometer(pub Vec<u64>);

impl Odometer {
    pub fn get(&self, v: VertexId) -> u64 {
        self.0[v]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u128 {
        self.0.iter().map(|&x| u128::from(x)).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationResult {
    pub config: Configuration,
    pub odometer: Odometer,
    /// Grains lost to the sinks.
    pub absorbed: u128,
    /// Single topples performed, equal to the odometer total.
    pub steps: u64,
}

/// `(a + b)°`
pub fn oplus(g: &SinkedGraph, a: &Configuration, b: &Configuration) -> Result<Configuration, SandpileError> {
    a.check_len(g)?;
    let mut c = a.plus(b)?;
    stabilize_in_place(g, &mut c, None)?;
    Ok(c)
}

/// Number of sink edges at every vertex.
pub fn id_f(g: &SinkedGraph) -> Configuration {
    Configuration(g.sink_multiplicities().iter().map(|&s| u64::from(s)).collect())
}

/// `deg(v) − 1` everywhere.
pub fn max_stable(g: &SinkedGraph) -> Configuration {
    Configuration(g.degrees().iter().map(|&d| u64::from(d) - 1).collect())
}

/// Whether `c ⊕ Id_f = c`, together with the odometer of that
/// stabilization. A recurrent `c` topples every vertex exactly once.
pub fn is_recurrent(g: &SinkedGraph, c: &Configuration) -> Result<(bool, Odometer), SandpileError> {
    c.check_len(g)?;
    if let Some(v) = c.unstable_vertex(g) {
        return Err(SandpileError::Unstable(v));
    }
    let r = stabilize(g, &c.plus(&id_f(g))?)?;
    let ok = r.config == *c && r.odometer.0.iter().all(|&x| x == 1);
    Ok((ok, r.odometer))
}

/// Identity of the recurrent group and the least `k` with `(k·Id_f)°`
/// recurrent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Identity {
    pub config: Configuration,
    pub k: u64,
}

/// Iterates `s_k = (s_{k−1} + Id_f)°` from `s_0 = 0` until the first
/// recurrent `s_k`.
pub fn identity(g: &SinkedGraph) -> Result<Identity, SandpileError> {
    const CHECK_BOUND_AFTER: u64 = 10_000;
    let f = id_f(g);
    let mut s = Configuration::zeros(g.n_vertices());
    let mut bound: Option<BigInt> = None;
    for k in 0u64.. {
        // s + Id_f stabilizes back to s with unit odometer iff s is recurrent
        let mut next = s.plus(&f)?;
        let t = stabilize_in_place(g, &mut next, None)?;
        if next == s && t.odometer.0.iter().all(|&x| x == 1) {
            return Ok(Identity { config: s, k });
        }
        s = next;
        if k >= CHECK_BOUND_AFTER {
            if bound.is_none() {
                let order = group::group_order(g).map_err(|e| SandpileError::Internal(e.to_string()))?;
                bound = Some(order);
            }
            if BigInt::from(k) > *bound.as_ref().unwrap() {
                return Err(SandpileError::Internal(format!("no recurrent iterate within {k} steps")));
            }
        }
    }
    unreachable!()
}

/// `(max_stable + r)°` for a seeded random `r` that is unstable somewhere.
pub fn random_recurrent(g: &SinkedGraph, seed: u64) -> Result<Configuration, SandpileError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.n_vertices();
    let mut c = max_stable(g);
    if n == 0 {
        return Ok(c);
    }
    for (v, x) in c.0.iter_mut().enumerate() {
        *x += rng.gen_range(0..=u64::from(g.degree(v)));
    }
    let hot = rng.gen_range(0..n);
    c.0[hot] += u64::from(g.degree(hot));
    stabilize_in_place(g, &mut c, None)?;
    if !is_recurrent(g, &c)?.0 {
        return Err(SandpileError::Internal("random configuration is not recurrent".into()));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build, triangle_chain, Boundary, Family, FamilySpec};

    fn sg(n: u32) -> SinkedGraph {
        build(FamilySpec::sinked(Family::Sg, n)).unwrap()
    }

    fn sgc(n: u32) -> SinkedGraph {
        build(FamilySpec::sinked(Family::Sgc, n)).unwrap()
    }

    #[test]
    fn drop_is_additive() {
        let z = Configuration::zeros(4);
        assert_eq!(z.clone().drop(2, 0).unwrap(), z);
        assert_eq!(z.clone().drop(1, 3).unwrap().drop(1, 4).unwrap(), z.clone().drop(1, 7).unwrap());
        assert!(z.clone().drop(9, 1).is_err());
        assert!(matches!(Configuration(vec![u64::MAX]).drop(0, 1), Err(SandpileError::Overflow { vertex: 0 })));
    }

    #[test]
    fn id_f_values() {
        assert_eq!(id_f(&sg(1)).0, vec![2, 2, 2]);
        let f = id_f(&sgc(3));
        assert_eq!(f.total(), 3);
        assert_eq!(f.get(0), 1);
        assert_eq!(f.get(13), 1);
        assert_eq!(f.get(26), 1);
    }

    #[test]
    fn max_stable_values() {
        assert!(max_stable(&sgc(3)).0.iter().all(|&x| x == 2));
        let g = sg(3);
        let m = max_stable(&g);
        assert!(m.is_stable(&g));
        assert!(m.0.iter().all(|&x| x == 3));
    }

    #[test]
    fn recurrence() {
        for n in 1..4 {
            let g = sgc(n);
            assert!(is_recurrent(&g, &Configuration::constant(g.n_vertices(), 2)).unwrap().0);
        }
        let g = sg(2);
        assert!(!is_recurrent(&g, &Configuration::zeros(g.n_vertices())).unwrap().0);
        assert!(is_recurrent(&g, &max_stable(&g)).unwrap().0);
        assert!(matches!(is_recurrent(&g, &Configuration::constant(g.n_vertices(), 4)), Err(SandpileError::Unstable(0))));
    }

    #[test]
    fn sgc_identity_is_all_two() {
        for n in 1..4 {
            let g = sgc(n);
            let id = identity(&g).unwrap();
            assert!(id.config.0.iter().all(|&x| x == 2));
        }
    }

    #[test]
    fn identity_is_neutral() {
        let g = sg(2);
        let id = identity(&g).unwrap();
        assert_eq!(oplus(&g, &id.config, &id.config).unwrap(), id.config);
        for seed in 0..5 {
            let r = random_recurrent(&g, seed).unwrap();
            assert_eq!(oplus(&g, &id.config, &r).unwrap(), r);
        }
    }

    #[test]
    fn empty_graph_identity() {
        let g = build(FamilySpec::new(Family::Sgc, 1, Boundary::CornerCells)).unwrap();
        let id = identity(&g).unwrap();
        assert_eq!(id.k, 0);
        assert!(id.config.is_empty());
    }

    #[test]
    fn random_recurrent_is_deterministic() {
        let g = triangle_chain(4).unwrap();
        assert_eq!(random_recurrent(&g, 7).unwrap(), random_recurrent(&g, 7).unwrap());
        let a = random_recurrent(&g, 1).unwrap();
        let b = random_recurrent(&g, 2).unwrap();
        assert!(is_recurrent(&g, &oplus(&g, &a, &b).unwrap()).unwrap().0);
    }

    #[test]
    fn oplus_laws() {
        let g = sg(2);
        let n = g.n_vertices();
        let a = Configuration((0..n as u64).map(|i| i % 5).collect());
        let b = Configuration((0..n as u64).map(|i| (i * 7) % 6).collect());
        let c = Configuration((0..n as u64).map(|i| (i * 3) % 4).collect());
        assert_eq!(oplus(&g, &a, &Configuration::zeros(n)).unwrap(), stabilize(&g, &a).unwrap().config);
        assert_eq!(oplus(&g, &a, &b).unwrap(), oplus(&g, &b, &a).unwrap());
        let left = stabilize(&g, &stabilize(&g, &a.plus(&b).unwrap()).unwrap().config.plus(&c).unwrap()).unwrap();
        let all = stabilize(&g, &a.plus(&b).unwrap().plus(&c).unwrap()).unwrap();
        assert_eq!(left.config, all.config);
    }
}
