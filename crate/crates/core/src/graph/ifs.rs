//! Cell structures of the p.c.f. families and their level-n point layouts.
//!
//! A level-n cell is a word over the map alphabet, stored as a base-`maps`
//! integer with the first letter most significant. A point slot `(cell, a)`
//! is the image of boundary point `p_a` under the cell's map. Map `a` fixes
//! `p_a` for every boundary index, so a level-1 identification
//! `F_i(p_a) = F_j(p_b)` lifts to level n as
//! `(u i a…a, a) ~ (u j b…b, b)` for every prefix `u`.

use super::Family;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Affine {
    // x' = m·x + t
    m: [[f64; 2]; 2],
    t: [f64; 2],
}

impl Affine {
    const IDENTITY: Affine = Affine { m: [[1.0, 0.0], [0.0, 1.0]], t: [0.0, 0.0] };

    /// `p + s·R(θ)·(x − p)`
    fn about(p: [f64; 2], s: f64, theta: f64) -> Affine {
        let (sin, cos) = theta.sin_cos();
        let m = [[s * cos, -s * sin], [s * sin, s * cos]];
        let t = [p[0] - (m[0][0] * p[0] + m[0][1] * p[1]), p[1] - (m[1][0] * p[0] + m[1][1] * p[1])];
        Affine { m, t }
    }

    fn apply(&self, x: [f64; 2]) -> [f64; 2] {
        [
            self.m[0][0] * x[0] + self.m[0][1] * x[1] + self.t[0],
            self.m[1][0] * x[0] + self.m[1][1] * x[1] + self.t[1],
        ]
    }

    /// `self ∘ other`
    fn compose(&self, other: &Affine) -> Affine {
        let a = &self.m;
        let b = &other.m;
        Affine {
            m: [
                [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
                [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
            ],
            t: self.apply(other.t),
        }
    }
}

pub(crate) struct CellStructure {
    pub maps: usize,
    pub points: Vec<[f64; 2]>,
    pub base_edges: Vec<(usize, usize)>,
    pub gluing: Vec<((usize, usize), (usize, usize))>,
    affines: Vec<Affine>,
}

impl CellStructure {
    pub fn n_boundary(&self) -> usize {
        self.points.len()
    }

    pub fn for_family(family: Family) -> Option<CellStructure> {
        match family {
            Family::Sg | Family::Sgc => Some(Self::gasket()),
            Family::Hg => Some(Self::polygon(6, 1.0 / 3.0)),
            Family::Pg => Some(Self::polygon(5, (3.0 - 5f64.sqrt()) / 2.0)),
            Family::Mg => Some(Self::mitsubishi()),
            Family::TriangleChain => None,
        }
    }

    fn triangle() -> Vec<[f64; 2]> {
        vec![[0.0, 0.0], [1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]]
    }

    fn gasket() -> CellStructure {
        let points = Self::triangle();
        let affines = points.iter().map(|&p| Affine::about(p, 0.5, 0.0)).collect();
        CellStructure {
            maps: 3,
            base_edges: vec![(0, 1), (1, 2), (0, 2)],
            gluing: vec![((0, 1), (1, 0)), ((0, 2), (2, 0)), ((1, 2), (2, 1))],
            points,
            affines,
        }
    }

    /// Regular k-gon with one contraction toward each vertex. Neighbouring
    /// cells touch at `F_i(p_{i+2}) = F_{i+1}(p_{i-1})`.
    fn polygon(k: usize, ratio: f64) -> CellStructure {
        let tau = std::f64::consts::TAU;
        let raw: Vec<[f64; 2]> = (0..k)
            .map(|i| {
                let a = tau / 4.0 - tau * i as f64 / k as f64 + if k % 2 == 0 { tau / (2.0 * k as f64) } else { 0.0 };
                [a.cos(), a.sin()]
            })
            .collect();
        let points = normalize(raw);
        let affines = points.iter().map(|&p| Affine::about(p, ratio, 0.0)).collect();
        CellStructure {
            maps: k,
            base_edges: (0..k).map(|i| (i, (i + 1) % k)).collect(),
            gluing: (0..k).map(|i| ((i, (i + 2) % k), ((i + 1) % k, (i + k - 1) % k))).collect(),
            points,
            affines,
        }
    }

    /// Three half-size corner cells as in SG plus three quarter-size cells,
    /// rotated by π, filling the corners of the central hole. Cell `3 + k`
    /// sends `p_k` to the midpoint opposite `p_k`.
    fn mitsubishi() -> CellStructure {
        let points = Self::triangle();
        let mut affines: Vec<Affine> = points.iter().map(|&p| Affine::about(p, 0.5, 0.0)).collect();
        for k in 0..3 {
            let (i, j) = [(1, 2), (0, 2), (0, 1)][k];
            let mid = [(points[i][0] + points[j][0]) / 2.0, (points[i][1] + points[j][1]) / 2.0];
            // x ↦ mid − (x − p_k)/4
            let a = Affine::about(points[k], 0.25, std::f64::consts::PI);
            let shift = Affine { m: Affine::IDENTITY.m, t: [mid[0] - points[k][0], mid[1] - points[k][1]] };
            affines.push(shift.compose(&a));
        }
        let gluing = vec![
            ((0, 1), (1, 0)),
            ((0, 2), (2, 0)),
            ((1, 2), (2, 1)),
            ((1, 2), (3, 0)),
            ((0, 2), (4, 1)),
            ((0, 1), (5, 2)),
            ((3, 1), (4, 0)),
            ((3, 2), (5, 0)),
            ((4, 2), (5, 1)),
        ];
        CellStructure { maps: 6, base_edges: vec![(0, 1), (1, 2), (0, 2)], gluing, points, affines }
    }

    /// Point layout of the level-`level` approximation.
    pub fn layout(&self, level: u32) -> Layout {
        let nb = self.n_boundary();
        let cells = self.maps.pow(level);
        let mut uf = UnionFind::new(cells * nb);
        for k in 0..level {
            let r = level - k - 1;
            let tail = self.maps.pow(r);
            let rep = |a: usize| if r == 0 { 0 } else { a * (tail - 1) / (self.maps - 1) };
            for u in 0..self.maps.pow(k) {
                for &((i, a), (j, b)) in &self.gluing {
                    let ci = (u * self.maps + i) * tail + rep(a);
                    let cj = (u * self.maps + j) * tail + rep(b);
                    uf.union(ci * nb + a, cj * nb + b);
                }
            }
        }
        // points numbered in order of first appearance
        let mut point_of_root = vec![usize::MAX; cells * nb];
        let mut slot_point = Vec::with_capacity(cells * nb);
        let mut n_points = 0;
        for s in 0..cells * nb {
            let r = uf.find(s);
            if point_of_root[r] == usize::MAX {
                point_of_root[r] = n_points;
                n_points += 1;
            }
            slot_point.push(point_of_root[r]);
        }
        let corner = |a: usize| {
            let cell = if level == 0 { 0 } else { a * (cells - 1) / (self.maps - 1) };
            slot_point[cell * nb + a]
        };
        let corner_points = (0..nb).map(corner).collect();
        Layout { level, maps: self.maps, n_boundary: nb, slot_point, n_points, corner_points }
    }

    /// Coordinates of every point of `layout`.
    pub fn point_coords(&self, layout: &Layout) -> Vec<[f64; 2]> {
        let mut out = vec![[0.0; 2]; layout.n_points];
        let mut done = vec![false; layout.n_points];
        for (cell, f) in self.cell_affines(layout.level).iter().enumerate() {
            for a in 0..layout.n_boundary {
                let p = layout.slot_point[cell * layout.n_boundary + a];
                if !done[p] {
                    done[p] = true;
                    out[p] = f.apply(self.points[a]);
                }
            }
        }
        out
    }

    /// Composite map of every level-`level` cell.
    pub fn cell_affines(&self, level: u32) -> Vec<Affine> {
        let mut current = vec![Affine::IDENTITY];
        for _ in 0..level {
            let mut next = Vec::with_capacity(current.len() * self.maps);
            for f in &current {
                for g in &self.affines {
                    next.push(f.compose(g));
                }
            }
            current = next;
        }
        current
    }

    pub fn apply(f: &Affine, x: [f64; 2]) -> [f64; 2] {
        f.apply(x)
    }
}

/// Rescales points so the bounding box starts at the origin with width 1.
fn normalize(points: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    let min_x = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
    let max_x = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
    let min_y = points.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min);
    let w = max_x - min_x;
    points.into_iter().map(|p| [(p[0] - min_x) / w, (p[1] - min_y) / w]).collect()
}

/// Identification of point slots at one level.
pub(crate) struct Layout {
    pub level: u32,
    pub maps: usize,
    pub n_boundary: usize,
    /// point index for slot `cell * n_boundary + a`
    pub slot_point: Vec<usize>,
    pub n_points: usize,
    /// point index of each outer boundary point `p_a`
    pub corner_points: Vec<usize>,
}

impl Layout {
    pub fn n_cells(&self) -> usize {
        self.maps.pow(self.level)
    }

    pub fn slot(&self, cell: usize, a: usize) -> usize {
        self.slot_point[cell * self.n_boundary + a]
    }

    /// Cells at depth `depth` (words of that length) whose subtree contains
    /// point `p`, in increasing order.
    pub fn cells_containing(&self, p: usize, depth: u32) -> Vec<usize> {
        let below = self.maps.pow(self.level - depth);
        let mut out: Vec<usize> = (0..self.n_cells())
            .filter(|&c| (0..self.n_boundary).any(|a| self.slot(c, a) == p))
            .map(|c| c / below)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Every point inside the depth-`depth` cell `prefix`.
    pub fn points_of_cell(&self, prefix: usize, depth: u32) -> Vec<usize> {
        let below = self.maps.pow(self.level - depth);
        let mut out: Vec<usize> = (prefix * below..(prefix + 1) * below)
            .flat_map(|c| (0..self.n_boundary).map(move |a| (c, a)))
            .map(|(c, a)| self.slot(c, a))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Outer boundary points of the depth-`depth` cell `prefix`.
    pub fn cell_corners(&self, prefix: usize, depth: u32) -> Vec<usize> {
        let r = self.level - depth;
        let below = self.maps.pow(r);
        (0..self.n_boundary)
            .map(|a| {
                let tail = if r == 0 { 0 } else { a * (below - 1) / (self.maps - 1) };
                self.slot(prefix * below + tail, a)
            })
            .collect()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        // smaller root wins so numbering does not depend on union order
        if a < b {
            self.parent[b] = a;
        } else if b < a {
            self.parent[a] = b;
        }
    }
}
