use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::graph::{build, distance_map, Family, FamilySpec, GraphError, SinkedGraph, VertexId};
use crate::sandpile::{stabilize_in_place, Configuration};

/// Environment variable overriding the default auto-grow cap.
pub const LEVEL_CAP_ENV: &str = "SANDPILE_MAX_LEVEL";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthRecord {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "R")]
    pub r: u32,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub level_used: u32,
    pub touched_boundary: bool,
}

impl GrowthRecord {
    /// `lower < R < upper`
    pub fn within_bounds(&self) -> bool {
        self.lower_bound < f64::from(self.r) && f64::from(self.r) < self.upper_bound
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrowthOptions {
    pub start_level: u32,
    /// Explicit cap; otherwise the environment variable, then a per-family
    /// default.
    pub max_level: Option<u32>,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        GrowthOptions { start_level: 3, max_level: None }
    }
}

fn default_cap(family: Family) -> u32 {
    match family {
        Family::Sg | Family::Sgc => 13,
        Family::Pg => 9,
        Family::Hg | Family::Mg => 8,
        Family::TriangleChain => 0,
    }
}

fn resolve_cap(family: Family, opts: &GrowthOptions) -> Result<u32, ExperimentError> {
    if let Some(cap) = opts.max_level {
        return Ok(cap);
    }
    match std::env::var(LEVEL_CAP_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| ExperimentError::Input(format!("{LEVEL_CAP_ENV}={s} is not a level"))),
        Err(_) => Ok(default_cap(family)),
    }
}

struct Run {
    level: u32,
    g: SinkedGraph,
    v0: VertexId,
    dist: Vec<u32>,
    boundary: Vec<VertexId>,
    config: Configuration,
    odometer: Vec<u64>,
    dropped: u64,
    touched: bool,
}

/// Piles at or below this size are stabilized directly.
const DIRECT: u64 = 64;

impl Run {
    fn new(family: Family, level: u32) -> Result<Run, ExperimentError> {
        let g = build(FamilySpec::sinked(family, level))?;
        let v0 = g.center().ok_or_else(|| GraphError::Config(format!("{family} level {level} has no center")))?;
        let dist = distance_map(&g, v0)?.into_iter().map(|d| d.unwrap_or(u32::MAX)).collect();
        let boundary = g.boundary_vertices();
        let n = g.n_vertices();
        Ok(Run {
            level,
            g,
            v0,
            dist,
            boundary,
            config: Configuration::zeros(n),
            odometer: vec![0; n],
            dropped: 0,
            touched: false,
        })
    }

    /// Brings the pile to `n` grains at the center. From an empty pile,
    /// first builds the pile for `n/2` so that the warm start applies.
    fn advance_to(&mut self, n: u64) -> Result<(), ExperimentError> {
        if self.dropped == 0 && n > DIRECT {
            self.advance_to(n / 2)?;
        }
        if self.dropped == 0 {
            let c = &mut self.config.as_mut_slice()[self.v0];
            *c = n;
            let t = stabilize_in_place(&self.g, &mut self.config, None)?;
            self.odometer = t.odometer.0;
        } else {
            self.warm_start(n)?;
        }
        self.dropped = n;
        self.touched |= self.boundary.iter().any(|&v| self.config.get(v) > 0 || self.odometer[v] > 0);
        Ok(())
    }

    /// Least action: the odometer of `kN` grains is at least `k·u_N − (k−1)`,
    /// so that much toppling is applied up front and the rest is stabilized
    /// legally from the resulting (possibly negative) configuration.
    fn warm_start(&mut self, n: u64) -> Result<(), ExperimentError> {
        let k = n / self.dropped;
        let overflow = |v| crate::sandpile::SandpileError::Overflow { vertex: v };
        let mut w = vec![0u64; self.odometer.len()];
        for (v, (wv, &u)) in w.iter_mut().zip(&self.odometer).enumerate() {
            *wv = u.checked_mul(k).ok_or_else(|| overflow(v))?.saturating_sub(k - 1);
        }
        let mut grains = vec![0i64; w.len()];
        for (v, q) in grains.iter_mut().enumerate() {
            let out = i128::from(w[v]) * i128::from(self.g.degree(v));
            let inflow: i128 = self.g.neighbors(v).iter().map(|&y| i128::from(w[y])).sum();
            let drop = if v == self.v0 { i128::from(n) } else { 0 };
            *q = i64::try_from(drop - out + inflow).map_err(|_| overflow(v))?;
        }
        stabilize_signed(&self.g, &mut grains, &mut w)?;
        for (v, (c, &q)) in self.config.as_mut_slice().iter_mut().zip(&grains).enumerate() {
            *c = u64::try_from(q).map_err(|_| {
                crate::sandpile::SandpileError::Internal(format!("warm start left {q} grains at vertex {v}"))
            })?;
        }
        self.odometer = w;
        Ok(())
    }

    fn diameter(&self) -> u32 {
        self.config
            .as_slice()
            .iter()
            .zip(&self.dist)
            .filter(|(&x, _)| x > 0)
            .map(|(_, &d)| d)
            .max()
            .unwrap_or(0)
    }
}

/// Drops each `N` of the increasing `schedule` at the family's center and
/// records the diameter of the stabilized pile. Successive `N` reuse the
/// previous stable pile. Whenever sand reaches a vertex next to the sink the
/// level is raised by one and the current `N` is rerun from scratch.
pub fn growth_run(family: Family, schedule: &[u64], opts: GrowthOptions) -> Result<Vec<GrowthRecord>, ExperimentError> {
    if schedule.is_empty() {
        return Err(ExperimentError::Input("empty schedule".into()));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ExperimentError::Input("schedule must be strictly increasing".into()));
    }
    let d = family
        .growth_exponent()
        .ok_or_else(|| ExperimentError::Input(format!("no growth exponent for {family}")))?;
    let cap = resolve_cap(family, &opts)?;
    if opts.start_level > cap {
        return Err(ExperimentError::LevelCap { needed: opts.start_level, cap });
    }
    let mut run = Run::new(family, opts.start_level)?;
    let mut out = Vec::with_capacity(schedule.len());
    for &n in schedule {
        run.advance_to(n)?;
        while run.touched {
            let next = run.level + 1;
            if next > cap {
                return Err(ExperimentError::LevelCap { needed: next, cap });
            }
            run = Run::new(family, next)?;
            run.advance_to(n)?;
        }
        let nf = n as f64;
        out.push(GrowthRecord {
            n,
            r: run.diameter(),
            lower_bound: (nf / 60.0).powf(1.0 / d),
            upper_bound: (nf / 2.0).powf(1.0 / d),
            level_used: run.level,
            touched_boundary: run.touched,
        });
    }
    Ok(out)
}

/// Batch toppling from a LIFO worklist on a configuration that may hold negative entries;
/// only vertices with at least `deg` grains topple. Adds to `odo`.
fn stabilize_signed(g: &SinkedGraph, grains: &mut [i64], odo: &mut [u64]) -> Result<(), ExperimentError> {
    let overflow = |v| crate::sandpile::SandpileError::Overflow { vertex: v };
    let n = g.n_vertices();
    let deg: Vec<i64> = g.degrees().iter().map(|&d| i64::from(d)).collect();
    let mut queued = vec![false; n];
    let mut queue: Vec<VertexId> = (0..n).filter(|&v| grains[v] >= deg[v]).collect();
    for &v in &queue {
        queued[v] = true;
    }
    while let Some(v) = queue.pop() {
        queued[v] = false;
        let t = grains[v] / deg[v];
        if t <= 0 {
            continue;
        }
        grains[v] -= t * deg[v];
        odo[v] = odo[v].checked_add(t as u64).ok_or_else(|| overflow(v))?;
        for &u in g.neighbors(v) {
            grains[u] = grains[u].checked_add(t).ok_or_else(|| overflow(u))?;
            if !queued[u] && grains[u] >= deg[u] {
                queued[u] = true;
                queue.push(u);
            }
        }
    }
    Ok(())
}

/// Least-squares line through `(log N, log R)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
    /// Smallest `N` in the window.
    pub window_start: u64,
}

/// Fits `log R` against `log N` over the largest decade of `N`
/// (`N ≥ N_max / 10`), ignoring records with `R = 0`.
pub fn exponent_fit(records: &[GrowthRecord]) -> Result<Fit, ExperimentError> {
    let max = records.iter().map(|r| r.n).max().ok_or_else(|| ExperimentError::Input("no records".into()))?;
    let start = (max as f64 / 10.0).ceil() as u64;
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.n >= start && r.r > 0)
        .map(|r| ((r.n as f64).ln(), f64::from(r.r).ln()))
        .collect();
    let distinct = {
        let mut xs: Vec<u64> = records.iter().filter(|r| r.n >= start && r.r > 0).map(|r| r.n).collect();
        xs.sort_unstable();
        xs.dedup();
        xs.len()
    };
    if distinct < 2 {
        return Err(ExperimentError::Input("need at least two distinct N with R > 0 in the top decade".into()));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    Ok(Fit { slope, intercept: my - slope * mx, points: pts.len(), window_start: start })
}
