//! Exhaustive backtracking oracles: minimum ghost size on a grid,
//! reconstruction from profiles, uniqueness testing, and lattice U-gon
//! checking.
//!
//! The ghost search assigns labels {+1, -1, 0} to grid cells in
//! lexicographic order, maintaining per-line running sums for every
//! direction. A line is infeasible as soon as its imbalance exceeds what
//! its unassigned cells (or the unplaced points) can cancel. The swap
//! symmetry F <-> F' is broken by forcing the first nonzero label to +1.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::constructions::GhostPair;
use crate::lattice::{Direction, DirectionSet, Grid, Point, PointConfiguration};
use crate::xray::{line_key, XRayProfile};
use crate::{Error, Result};

/// Default node budget for the backtracking engines.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

/// A ghost as a single signed object: the difference `1_F - 1_F'` of the
/// indicator (multiplicity) functions of the two sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedConfiguration {
    pub d: usize,
    pub weights: BTreeMap<Point, i64>,
}

impl SignedConfiguration {
    pub fn from_pair(f: &PointConfiguration, g: &PointConfiguration) -> SignedConfiguration {
        let mut weights: BTreeMap<Point, i64> = BTreeMap::new();
        for (p, m) in f.iter() {
            *weights.entry(p.clone()).or_insert(0) += m as i64;
        }
        for (p, m) in g.iter() {
            *weights.entry(p.clone()).or_insert(0) -= m as i64;
        }
        weights.retain(|_, w| *w != 0);
        SignedConfiguration { d: f.dim(), weights }
    }

    /// Split into the positive and negative parts.
    pub fn into_pair(&self) -> (PointConfiguration, PointConfiguration) {
        let mut f = PointConfiguration::empty(self.d);
        let mut g = PointConfiguration::empty(self.d);
        for (p, &w) in &self.weights {
            if w > 0 {
                f.insert_with_multiplicity(p.clone(), w as u64).unwrap();
            } else {
                g.insert_with_multiplicity(p.clone(), (-w) as u64).unwrap();
            }
        }
        (f, g)
    }

    /// Positive and negative total mass.
    pub fn masses(&self) -> (u64, u64) {
        let pos = self.weights.values().filter(|&&w| w > 0).sum::<i64>() as u64;
        let neg = -self.weights.values().filter(|&&w| w < 0).sum::<i64>();
        (pos, neg as u64)
    }

    /// True iff every line sum vanishes in every direction of `s`.
    pub fn all_line_sums_zero(&self, s: &DirectionSet) -> Result<bool> {
        for dir in s.iter() {
            let mut sums: BTreeMap<Vec<i128>, i64> = BTreeMap::new();
            for (p, &w) in &self.weights {
                *sums.entry(line_key(p, dir)?).or_insert(0) += w;
            }
            if sums.values().any(|&v| v != 0) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Result of a grid-restricted minimum-ghost search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchOutcome {
    /// Per-side cardinality of the smallest ghost found, if any.
    pub minimal_size: Option<u64>,
    pub witness: Option<GhostPair>,
    /// True when the stated (grid, k_max) space was fully covered.
    pub exhausted: bool,
    pub nodes_explored: u64,
    pub diagnostics: Vec<String>,
}

/// Per-direction line structure of a grid: line index of every cell.
struct LineIndex {
    /// For each direction, the line id of each cell.
    cell_line: Vec<Vec<u32>>,
    /// For each direction, the number of cells on each line.
    line_size: Vec<Vec<u32>>,
}

fn build_line_index(cells: &[Point], dirs: &[Direction]) -> Result<LineIndex> {
    let mut cell_line = Vec::with_capacity(dirs.len());
    let mut line_size = Vec::with_capacity(dirs.len());
    for dir in dirs {
        let mut ids: BTreeMap<Vec<i128>, u32> = BTreeMap::new();
        let mut per_cell = Vec::with_capacity(cells.len());
        let mut sizes: Vec<u32> = Vec::new();
        for cell in cells {
            let key = line_key(cell, dir)?;
            let next = ids.len() as u32;
            let id = *ids.entry(key).or_insert(next);
            if id as usize == sizes.len() {
                sizes.push(0);
            }
            sizes[id as usize] += 1;
            per_cell.push(id);
        }
        cell_line.push(per_cell);
        line_size.push(sizes);
    }
    Ok(LineIndex {
        cell_line,
        line_size,
    })
}

struct GhostSearch<'a> {
    cells: &'a [Point],
    index: &'a LineIndex,
    n_dirs: usize,
    k: u64,
    /// per direction: running sum per line
    sums: Vec<Vec<i32>>,
    /// per direction: unassigned cells per line
    remaining: Vec<Vec<u32>>,
    labels: Vec<i8>,
    pos_used: u64,
    neg_used: u64,
    nodes: u64,
    budget: u64,
    budget_hit: bool,
    solution: Option<Vec<i8>>,
}

impl<'a> GhostSearch<'a> {
    fn new(cells: &'a [Point], index: &'a LineIndex, k: u64, budget: u64) -> GhostSearch<'a> {
        let n_dirs = index.cell_line.len();
        GhostSearch {
            cells,
            index,
            n_dirs,
            k,
            sums: index
                .line_size
                .iter()
                .map(|s| vec![0i32; s.len()])
                .collect(),
            remaining: index.line_size.clone(),
            labels: vec![0; cells.len()],
            pos_used: 0,
            neg_used: 0,
            nodes: 0,
            budget,
            budget_hit: false,
            solution: None,
        }
    }

    fn feasible_after(&self, cell: usize) -> bool {
        let need_pos = self.k - self.pos_used;
        let need_neg = self.k - self.neg_used;
        let cells_left = (self.cells.len() - cell - 1) as u64;
        if need_pos + need_neg > cells_left {
            return false;
        }
        for dir in 0..self.n_dirs {
            let line = self.index.cell_line[dir][cell] as usize;
            let sum = self.sums[dir][line];
            let rem = self.remaining[dir][line] as i64;
            if sum > 0 && (sum as i64 > rem || sum as u64 > need_neg) {
                return false;
            }
            if sum < 0 && ((-sum) as i64 > rem || (-sum) as u64 > need_pos) {
                return false;
            }
        }
        true
    }

    fn all_sums_zero(&self) -> bool {
        self.sums.iter().all(|s| s.iter().all(|&v| v == 0))
    }

    fn dfs(&mut self, cell: usize) {
        if self.solution.is_some() || self.budget_hit {
            return;
        }
        if self.pos_used == self.k && self.neg_used == self.k {
            // remaining cells are forced to 0, so the sums are final
            if self.all_sums_zero() {
                self.solution = Some(self.labels.clone());
            }
            return;
        }
        if cell == self.cells.len() {
            return;
        }
        // +1 first, then -1, then 0: deterministic witness order
        for &label in &[1i8, -1, 0] {
            if self.budget_hit || self.solution.is_some() {
                return;
            }
            if label == 1 && self.pos_used == self.k {
                continue;
            }
            if label == -1 {
                if self.neg_used == self.k {
                    continue;
                }
                // swap symmetry: the first nonzero label is +1
                if self.pos_used == 0 && self.neg_used == 0 {
                    continue;
                }
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                self.budget_hit = true;
                return;
            }
            self.labels[cell] = label;
            match label {
                1 => self.pos_used += 1,
                -1 => self.neg_used += 1,
                _ => {}
            }
            for dir in 0..self.n_dirs {
                let line = self.index.cell_line[dir][cell] as usize;
                self.sums[dir][line] += label as i32;
                self.remaining[dir][line] -= 1;
            }
            if self.feasible_after(cell) {
                self.dfs(cell + 1);
            }
            for dir in 0..self.n_dirs {
                let line = self.index.cell_line[dir][cell] as usize;
                self.sums[dir][line] -= label as i32;
                self.remaining[dir][line] += 1;
            }
            match label {
                1 => self.pos_used -= 1,
                -1 => self.neg_used -= 1,
                _ => {}
            }
            self.labels[cell] = 0;
        }
    }
}

/// Smallest `k <= k_max` admitting disjoint k-point subsets of the grid
/// with equal X-rays in every direction of `s`, by exhaustive labeled
/// search. Deterministic for fixed input order.
pub fn min_ghost(s: &DirectionSet, grid: &Grid, k_max: u64, budget: u64) -> Result<SearchOutcome> {
    if grid.d != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            got: grid.d,
        });
    }
    if k_max < 1 {
        return Err(Error::InvalidParameter("k_max must be >= 1".into()));
    }
    let cells = grid.cells();
    let index = build_line_index(&cells, s.directions())?;
    let mut diagnostics = Vec::new();
    let mut k_cap = k_max;
    if 2 * k_max > cells.len() as u64 {
        k_cap = cells.len() as u64 / 2;
        diagnostics.push(format!(
            "k_max {} exceeds half the grid ({} cells); clamped to {}",
            k_max,
            cells.len(),
            k_cap
        ));
    }
    let mut total_nodes = 0u64;
    for k in 1..=k_cap {
        let mut search = GhostSearch::new(&cells, &index, k, budget.saturating_sub(total_nodes));
        search.dfs(0);
        total_nodes += search.nodes;
        if let Some(labels) = search.solution {
            let mut f = PointConfiguration::empty(grid.d);
            let mut g = PointConfiguration::empty(grid.d);
            for (cell, &label) in cells.iter().zip(&labels) {
                match label {
                    1 => f.insert(cell.clone())?,
                    -1 => g.insert(cell.clone())?,
                    _ => {}
                }
            }
            let witness = GhostPair::new(f, g, s.clone())?;
            return Ok(SearchOutcome {
                minimal_size: Some(k),
                witness: Some(witness),
                exhausted: true,
                nodes_explored: total_nodes,
                diagnostics,
            });
        }
        if search.budget_hit {
            diagnostics.push(format!("node budget exhausted while searching k={k}"));
            return Ok(SearchOutcome {
                minimal_size: None,
                witness: None,
                exhausted: false,
                nodes_explored: total_nodes,
                diagnostics,
            });
        }
    }
    Ok(SearchOutcome {
        minimal_size: None,
        witness: None,
        exhausted: true,
        nodes_explored: total_nodes,
        diagnostics,
    })
}

/// All configurations inside `grid` whose X-rays equal the given profiles,
/// by exhaustive multiplicity assignment with per-line capacity pruning.
pub fn sets_with_profile(
    profiles: &[XRayProfile],
    grid: &Grid,
    budget: u64,
) -> Result<Vec<PointConfiguration>> {
    if profiles.is_empty() {
        return Err(Error::InvalidProfileSet("no profiles given".into()));
    }
    let k = profiles[0].total();
    for p in profiles {
        if p.total() != k {
            return Err(Error::InvalidProfileSet(format!(
                "profile totals differ: {} vs {}",
                k,
                p.total()
            )));
        }
    }
    let cells = grid.cells();
    let n_dirs = profiles.len();
    // per direction: line id per cell (usize::MAX for lines absent from the
    // profile), required count per line, unassigned cells per line
    let mut cell_line: Vec<Vec<usize>> = Vec::with_capacity(n_dirs);
    let mut need: Vec<Vec<u64>> = Vec::with_capacity(n_dirs);
    let mut avail: Vec<Vec<u32>> = Vec::with_capacity(n_dirs);
    for profile in profiles {
        let keys: Vec<&Vec<i128>> = profile.counts.keys().collect();
        let id_of: BTreeMap<&Vec<i128>, usize> =
            keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let mut per_cell = Vec::with_capacity(cells.len());
        let mut availability = vec![0u32; keys.len()];
        for cell in &cells {
            let key = line_key(cell, &profile.direction)?;
            match id_of.get(&key) {
                Some(&id) => {
                    availability[id] += 1;
                    per_cell.push(id);
                }
                None => per_cell.push(usize::MAX),
            }
        }
        cell_line.push(per_cell);
        need.push(profile.counts.values().copied().collect());
        avail.push(availability);
    }

    struct Recon<'a> {
        cells: &'a [Point],
        cell_line: &'a [Vec<usize>],
        need: Vec<Vec<u64>>,
        avail: Vec<Vec<u32>>,
        remaining_mass: u64,
        mults: Vec<u64>,
        nodes: u64,
        budget: u64,
        out: Vec<PointConfiguration>,
        d: usize,
    }

    impl Recon<'_> {
        fn prune(&self, cell: usize) -> bool {
            // a line still needing points must keep at least one open cell
            for dir in 0..self.cell_line.len() {
                let line = self.cell_line[dir][cell];
                if line != usize::MAX && self.need[dir][line] > 0 && self.avail[dir][line] == 0 {
                    return true;
                }
            }
            false
        }

        fn dfs(&mut self, cell: usize) -> Result<()> {
            if self.nodes > self.budget {
                return Err(Error::InvalidParameter(
                    "node budget exhausted during reconstruction".into(),
                ));
            }
            if cell == self.cells.len() {
                if self.remaining_mass == 0 {
                    let mut cfg = PointConfiguration::empty(self.d);
                    for (c, &m) in self.cells.iter().zip(&self.mults) {
                        if m > 0 {
                            cfg.insert_with_multiplicity(c.clone(), m)?;
                        }
                    }
                    self.out.push(cfg);
                }
                return Ok(());
            }
            // maximum multiplicity this cell can absorb
            let mut cap = self.remaining_mass;
            for dir in 0..self.cell_line.len() {
                let line = self.cell_line[dir][cell];
                if line == usize::MAX {
                    cap = 0;
                    break;
                }
                cap = cap.min(self.need[dir][line]);
            }
            for dir in 0..self.cell_line.len() {
                let line = self.cell_line[dir][cell];
                if line != usize::MAX {
                    self.avail[dir][line] -= 1;
                }
            }
            for mult in 0..=cap {
                self.nodes += 1;
                for dir in 0..self.cell_line.len() {
                    let line = self.cell_line[dir][cell];
                    if line != usize::MAX {
                        self.need[dir][line] -= mult;
                    }
                }
                self.remaining_mass -= mult;
                self.mults[cell] = mult;
                if !self.prune(cell) {
                    self.dfs(cell + 1)?;
                }
                self.mults[cell] = 0;
                self.remaining_mass += mult;
                for dir in 0..self.cell_line.len() {
                    let line = self.cell_line[dir][cell];
                    if line != usize::MAX {
                        self.need[dir][line] += mult;
                    }
                }
            }
            for dir in 0..self.cell_line.len() {
                let line = self.cell_line[dir][cell];
                if line != usize::MAX {
                    self.avail[dir][line] += 1;
                }
            }
            Ok(())
        }
    }

    let mut recon = Recon {
        cells: &cells,
        cell_line: &cell_line,
        need,
        avail,
        remaining_mass: k,
        mults: vec![0; cells.len()],
        nodes: 0,
        budget,
        out: Vec::new(),
        d: grid.d,
    };
    recon.dfs(0)?;
    Ok(recon.out)
}

/// Outcome of a uniqueness test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub unique: bool,
    /// Configurations other than the input with identical X-rays.
    pub alternatives: Vec<PointConfiguration>,
}

/// Is `f` the only configuration in `grid` with its X-rays in `s`?
pub fn uniqueness_check(
    f: &PointConfiguration,
    s: &DirectionSet,
    grid: &Grid,
    budget: u64,
) -> Result<UniquenessReport> {
    for (p, _) in f.iter() {
        if !grid.contains(p) {
            return Err(Error::OutOfGrid(p.clone()));
        }
    }
    let profiles: Vec<XRayProfile> = s
        .iter()
        .map(|dir| crate::xray::xray(f, dir))
        .collect::<Result<_>>()?;
    let matches = sets_with_profile(&profiles, grid, budget)?;
    let alternatives: Vec<PointConfiguration> =
        matches.into_iter().filter(|c| c != f).collect();
    Ok(UniquenessReport {
        unique: alternatives.is_empty(),
        alternatives,
    })
}

/// Outcome of a lattice U-gon check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UgonReport {
    pub is_ugon: bool,
    /// The input is exactly the vertex set of its (non-degenerate) convex
    /// hull, with no interior or edge-collinear members.
    pub convex_vertex_set: bool,
    /// Pairs (vertex, direction) where the line misses every other vertex.
    pub violations: Vec<(Point, Direction)>,
}

fn cross(o: &[i64], a: &[i64], b: &[i64]) -> i128 {
    (a[0] - o[0]) as i128 * (b[1] - o[1]) as i128 - (a[1] - o[1]) as i128 * (b[0] - o[0]) as i128
}

/// Strictly convex hull (no collinear vertices kept), monotone chain.
fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let chain = |iter: &mut dyn Iterator<Item = &Point>| {
        let mut half: Vec<Point> = Vec::new();
        for p in iter {
            while half.len() >= 2 && cross(&half[half.len() - 2], &half[half.len() - 1], p) <= 0 {
                // collinear points are dropped, so hull vertices are strict turns
                half.pop();
            }
            half.push(p.clone());
        }
        half
    };
    let mut lower = chain(&mut pts.iter());
    let mut upper = chain(&mut pts.iter().rev());
    lower.pop();
    upper.pop();
    lower.append(&mut upper);
    lower
}

/// Check whether `v` is a lattice U-gon for the directions `s`: a convex
/// polygon whose every vertex line in every direction meets another vertex.
pub fn ugon_check(v: &PointConfiguration, s: &DirectionSet) -> Result<UgonReport> {
    if v.dim() != 2 || s.dim() != 2 {
        return Err(Error::InvalidParameter("U-gons live in Z^2".into()));
    }
    if v.iter().any(|(_, m)| m > 1) {
        return Err(Error::DegeneratePolygon("repeated vertices".into()));
    }
    let points: Vec<Point> = v.iter().map(|(p, _)| p.clone()).collect();
    if points.len() < 3 {
        return Err(Error::DegeneratePolygon(format!(
            "need at least 3 vertices, got {}",
            points.len()
        )));
    }
    let hull = convex_hull(&points);
    let convex_vertex_set = hull.len() == points.len();
    let mut violations = Vec::new();
    for p in &points {
        for dir in s.iter() {
            let key = line_key(p, dir)?;
            let hit = points
                .iter()
                .any(|q| q != p && line_key(q, dir).unwrap() == key);
            if !hit {
                violations.push((p.clone(), dir.clone()));
            }
        }
    }
    Ok(UgonReport {
        is_ugon: convex_vertex_set && violations.is_empty(),
        convex_vertex_set,
        violations,
    })
}
