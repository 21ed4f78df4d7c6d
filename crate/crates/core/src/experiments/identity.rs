use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::graph::{build, triangle_chain, Boundary, Corner, Family, FamilySpec};
use crate::sandpile::{identity, stabilize, Configuration};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub level: u32,
    pub k: u64,
    pub conjectured_k: Option<u64>,
    pub matches_conjecture: Option<bool>,
    /// Whether the identity has 2 grains on every vertex.
    pub all_two: bool,
}

/// Conjectured least `k` at a built level: `(5^m − 3^m)/2` for SGC at
/// `m = level`, and `(5^m − 1)/2` for SG where the tabulated values start at
/// level 1 with `m = 0`, so `m = level − 1`.
pub fn conjectured_k(family: Family, level: u32) -> Option<u64> {
    match family {
        Family::Sgc => Some((5u64.checked_pow(level)? - 3u64.pow(level)) / 2),
        Family::Sg if level >= 1 => Some((5u64.checked_pow(level - 1)? - 1) / 2),
        _ => None,
    }
}

pub fn identity_survey(family: Family, boundary: Boundary, levels: &[u32]) -> Result<Vec<IdentityRecord>, ExperimentError> {
    if levels.is_empty() {
        return Err(ExperimentError::Input("no levels given".into()));
    }
    levels
        .par_iter()
        .map(|&level| {
            let g = build(FamilySpec::new(family, level, boundary))?;
            let id = identity(&g)?;
            let conjectured = conjectured_k(family, level);
            Ok(IdentityRecord {
                level,
                k: id.k,
                conjectured_k: conjectured,
                matches_conjecture: conjectured.map(|c| c == id.k),
                all_two: id.config.as_slice().iter().all(|&x| x == 2),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingCheck {
    pub t: usize,
    pub m: u64,
    pub all_two: bool,
    pub corner_odometers: Vec<u64>,
    pub absorbed: u128,
}

impl RingCheck {
    pub fn passed(&self) -> bool {
        self.all_two
            && self.corner_odometers.iter().all(|&o| o == self.m - 2)
            && self.absorbed == self.t as u128 * u128::from(self.m - 2)
    }
}

/// `m` grains on every outer vertex of a ring of `t` triangles, 2 on the
/// inner vertices.
pub fn ring_check(t: usize, m: u64) -> Result<RingCheck, ExperimentError> {
    if m < 2 {
        return Err(ExperimentError::Input(format!("m = {m} is below 2")));
    }
    let g = triangle_chain(t)?;
    let outer: Vec<usize> = g
        .corners()
        .iter()
        .filter_map(|c| match c {
            Corner::Vertex(v) => Some(*v),
            Corner::Sink { .. } => None,
        })
        .collect();
    let mut c = Configuration::constant(g.n_vertices(), 2);
    for &v in &outer {
        c.as_mut_slice()[v] = m;
    }
    let r = stabilize(&g, &c)?;
    Ok(RingCheck {
        t,
        m,
        all_two: r.config.as_slice().iter().all(|&x| x == 2),
        corner_odometers: outer.iter().map(|&v| r.odometer.get(v)).collect(),
        absorbed: r.absorbed,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SgcIdentityReport {
    pub n: u32,
    /// 4 grains everywhere stabilizes to 2 grains everywhere.
    pub four_to_two: bool,
    pub corner_odometers: Vec<u64>,
    pub expected_corner_odometer: u64,
    pub rings: Vec<RingCheck>,
}

impl SgcIdentityReport {
    pub fn passed(&self) -> bool {
        self.four_to_two
            && self.corner_odometers.iter().all(|&o| o == self.expected_corner_odometer)
            && self.rings.iter().all(RingCheck::passed)
    }
}

/// Structural checks behind the all-2 identity of the cell graph at level
/// `n`, plus ring checks for every `(t, m)` in `rings`.
pub fn sgc_identity_check(n: u32, rings: &[(usize, u64)]) -> Result<SgcIdentityReport, ExperimentError> {
    if n == 0 {
        return Err(ExperimentError::Input("level must be at least 1".into()));
    }
    let g = build(FamilySpec::sinked(Family::Sgc, n))?;
    let r = stabilize(&g, &Configuration::constant(g.n_vertices(), 4))?;
    let corner_odometers = g
        .corners()
        .iter()
        .filter_map(|c| match c {
            Corner::Vertex(v) => Some(r.odometer.get(*v)),
            Corner::Sink { .. } => None,
        })
        .collect();
    let rings = rings.iter().map(|&(t, m)| ring_check(t, m)).collect::<Result<_, _>>()?;
    Ok(SgcIdentityReport {
        n,
        four_to_two: r.config.as_slice().iter().all(|&x| x == 2),
        corner_odometers,
        expected_corner_odometer: 2 * 3u64.pow(n - 1),
        rings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjecture_formulas() {
        let sgc: Vec<u64> = (1..5).map(|l| conjectured_k(Family::Sgc, l).unwrap()).collect();
        assert_eq!(sgc, vec![1, 8, 49, 272]);
        let sg: Vec<u64> = (1..5).map(|l| conjectured_k(Family::Sg, l).unwrap()).collect();
        assert_eq!(sg, vec![0, 2, 12, 62]);
        assert_eq!(conjectured_k(Family::Hg, 2), None);
    }

    #[test]
    fn ring_examples() {
        let one = ring_check(1, 3).unwrap();
        assert!(one.passed());
        assert_eq!(one.absorbed, 1);
        assert_eq!(ring_check(4, 7).unwrap().absorbed, 20);
    }

    #[test]
    fn sgc_level_one() {
        let rep = sgc_identity_check(1, &[(2, 5)]).unwrap();
        assert_eq!(rep.corner_odometers, vec![2, 2, 2]);
        assert!(rep.passed());
    }
}
