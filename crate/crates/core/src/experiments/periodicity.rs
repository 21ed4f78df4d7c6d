use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ExperimentError;
use crate::graph::{build, junction_cuts, Family, FamilySpec, GraphError, SinkedGraph, VertexId};
use crate::sandpile::{stabilize_in_place, Configuration};

/// First 128 bits of SHA-256 over the little-endian grain counts.
pub fn state_digest(c: &[u64]) -> u128 {
    let mut h = Sha256::new();
    for &x in c {
        h.update(x.to_le_bytes());
    }
    let out = h.finalize();
    u128::from_le_bytes(out[..16].try_into().unwrap())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicityRecord {
    pub n: u32,
    pub interior: usize,
    pub boundary: usize,
    pub preperiod: usize,
    pub period: usize,
    pub conjectured: Option<u64>,
    pub matches_conjecture: Option<bool>,
    /// Digests of the cycle states in order, starting at the preperiod.
    pub cycle_hashes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicityReport {
    pub spec: FamilySpec,
    pub records: Vec<PeriodicityRecord>,
    /// Steps of the full-graph run at which its restriction to an interior
    /// was compared with the cut run, and whether all comparisons agreed.
    pub full_graph_checked: usize,
    pub full_graph_agrees: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodicityOptions {
    /// Level of the ambient graph; defaults to `max_n + 2`.
    pub level: Option<u32>,
    pub max_states: usize,
    /// Compare the full graph against each cut at this many steps past its
    /// preperiod (0 disables).
    pub full_graph_samples: usize,
}

impl Default for PeriodicityOptions {
    fn default() -> Self {
        PeriodicityOptions { level: None, max_states: 2_000_000, full_graph_samples: 64 }
    }
}

/// Largest per-vertex period conjectured for cut index `n`.
pub fn conjectured_period(family: Family, n: u32) -> Option<u64> {
    let (c, b): (u64, u64) = match family {
        Family::Sg => (4, 3),
        Family::Hg => (2, 3),
        Family::Pg => (6, 5),
        Family::Mg | Family::Sgc => (6, 7),
        Family::TriangleChain => return None,
    };
    b.checked_pow(n).and_then(|p| p.checked_mul(c))
}

struct CutRun {
    record: PeriodicityRecord,
    ids: Vec<VertexId>,
    /// `history[k]` is the state after `k` additions.
    history: Vec<Vec<u64>>,
}

fn run_cut(
    sub: &SinkedGraph,
    eta: &Configuration,
    max_states: usize,
) -> Result<(usize, usize, Vec<Vec<u64>>, Vec<u128>), ExperimentError> {
    let mut seen: HashMap<u128, Vec<usize>> = HashMap::new();
    let mut history: Vec<Vec<u64>> = Vec::new();
    let mut digests = Vec::new();
    let mut c = Configuration::zeros(sub.n_vertices());
    loop {
        let d = state_digest(c.as_slice());
        if let Some(ks) = seen.get(&d) {
            if let Some(&k) = ks.iter().find(|&&k| history[k] == c.as_slice()) {
                let period = history.len() - k;
                return Ok((k, period, history, digests));
            }
        }
        if history.len() >= max_states {
            return Err(ExperimentError::StateCap(max_states));
        }
        seen.entry(d).or_default().push(history.len());
        history.push(c.as_slice().to_vec());
        digests.push(d);
        c = c.plus(eta)?;
        stabilize_in_place(sub, &mut c, None)?;
    }
}

/// Adds `eta` repeatedly on each cut graph `S_n` (`n = 1..=max_n`), finds
/// preperiod and period, then enforces that periods divide one another and
/// that every larger cycle restricts onto the smaller one. `eta` lives on
/// the ambient graph; by default it is one grain at the center.
pub fn periodicity_run(
    family: Family,
    max_n: u32,
    eta: Option<&Configuration>,
    opts: PeriodicityOptions,
) -> Result<PeriodicityReport, ExperimentError> {
    if max_n == 0 {
        return Err(ExperimentError::Input("max_n must be at least 1".into()));
    }
    let level = opts.level.unwrap_or(max_n + 2);
    if level < max_n + 2 {
        return Err(ExperimentError::Input(format!("level {level} only supports cuts up to {}", level.saturating_sub(2))));
    }
    let spec = FamilySpec::sinked(family, level);
    let g = build(spec)?;
    let v0 = g.center().ok_or_else(|| GraphError::Config(format!("{spec} has no center")))?;
    let system = junction_cuts(&g, v0)?;
    let eta_full = match eta {
        Some(e) => {
            if e.len() != g.n_vertices() {
                return Err(ExperimentError::Input(format!(
                    "eta has {} entries, the level-{level} graph has {}",
                    e.len(),
                    g.n_vertices()
                )));
            }
            e.clone()
        }
        None => Configuration::zeros(g.n_vertices()).drop(v0, 1)?,
    };
    let runs: Vec<CutRun> = system.cuts[..max_n as usize]
        .par_iter()
        .map(|cut| -> Result<CutRun, ExperimentError> {
            let (sub, ids) = cut.graph(&g)?;
            let eta_n = Configuration(ids.iter().map(|&v| eta_full.get(v)).collect());
            let (preperiod, period, history, digests) = run_cut(&sub, &eta_n, opts.max_states)?;
            let conjectured = conjectured_period(family, cut.n);
            let record = PeriodicityRecord {
                n: cut.n,
                interior: cut.interior.len(),
                boundary: cut.boundary.len(),
                preperiod,
                period,
                conjectured,
                matches_conjecture: conjectured.map(|c| c == period as u64),
                cycle_hashes: digests[preperiod..].iter().map(|d| format!("{d:032x}")).collect(),
            };
            Ok(CutRun { record, ids, history })
        })
        .collect::<Result<_, _>>()?;
    check_divisibility(&runs)?;
    check_restriction(&runs)?;
    let (checked, agrees) = full_graph_check(&g, &eta_full, &runs, opts.full_graph_samples)?;
    Ok(PeriodicityReport {
        spec,
        records: runs.into_iter().map(|r| r.record).collect(),
        full_graph_checked: checked,
        full_graph_agrees: agrees,
    })
}

fn check_divisibility(runs: &[CutRun]) -> Result<(), ExperimentError> {
    for a in runs {
        for b in runs.iter().filter(|b| b.record.n > a.record.n) {
            if b.record.period % a.record.period != 0 {
                return Err(ExperimentError::TheoremViolation(format!(
                    "period {} of cut {} does not divide period {} of cut {}",
                    a.record.period, a.record.n, b.record.period, b.record.n
                )));
            }
        }
    }
    Ok(())
}

fn cycle(run: &CutRun) -> &[Vec<u64>] {
    &run.history[run.record.preperiod..]
}

fn check_restriction(runs: &[CutRun]) -> Result<(), ExperimentError> {
    for small in runs {
        let want: HashSet<&[u64]> = cycle(small).iter().map(Vec::as_slice).collect();
        for big in runs.iter().filter(|b| b.record.n > small.record.n) {
            let pos: HashMap<VertexId, usize> = big.ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let idx: Vec<usize> = small
                .ids
                .iter()
                .map(|v| {
                    pos.get(v).copied().ok_or_else(|| {
                        ExperimentError::TheoremViolation(format!("cut {} is not inside cut {}", small.record.n, big.record.n))
                    })
                })
                .collect::<Result<_, _>>()?;
            let got: HashSet<Vec<u64>> = cycle(big).iter().map(|c| idx.iter().map(|&i| c[i]).collect()).collect();
            let got: HashSet<&[u64]> = got.iter().map(Vec::as_slice).collect();
            if got != want {
                return Err(ExperimentError::TheoremViolation(format!(
                    "cycle of cut {} restricts to {} states, cut {} cycles through {}",
                    big.record.n,
                    got.len(),
                    small.record.n,
                    want.len()
                )));
            }
        }
    }
    Ok(())
}

/// Runs the same additions on the ambient graph and compares its
/// restriction to each interior with the cut run, `samples` steps after
/// the cut's preperiod.
fn full_graph_check(
    g: &SinkedGraph,
    eta: &Configuration,
    runs: &[CutRun],
    samples: usize,
) -> Result<(usize, bool), ExperimentError> {
    if samples == 0 {
        return Ok((0, true));
    }
    let last = runs.iter().map(|r| r.record.preperiod + samples).max().unwrap_or(0);
    let mut c = Configuration::zeros(g.n_vertices());
    let mut checked = 0;
    let mut agrees = true;
    for k in 0..=last {
        for run in runs {
            let p = run.record.preperiod;
            if k >= p && k < p + samples {
                let j = p + (k - p) % run.record.period;
                let local: Vec<u64> = run.ids.iter().map(|&v| c.get(v)).collect();
                agrees &= local == run.history[j];
                checked += 1;
            }
        }
        if k < last {
            c = c.plus(eta)?;
            stabilize_in_place(g, &mut c, None)?;
        }
    }
    Ok((checked, agrees))
}
