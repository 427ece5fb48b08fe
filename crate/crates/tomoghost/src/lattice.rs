//! Foundational integer-lattice types: points, primitive directions,
//! validated direction sets, point multisets and finite grids.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A lattice point is a `d`-tuple of integers.
pub type Point = Vec<i64>;

fn gcd(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

/// A primitive lattice direction with canonical sign.
///
/// Invariants: coordinates are not all zero, their gcd is 1, and the first
/// nonzero coordinate is positive, so `v` and `-v` normalize identically.
/// Construct via [`Direction::canonicalize`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Direction {
    coords: Vec<i64>,
}

impl Direction {
    /// Divide out the gcd and flip the sign so the first nonzero coordinate
    /// is positive. Parallel inputs map to the same `Direction`.
    pub fn canonicalize(v: &[i64]) -> Result<Direction> {
        if v.iter().all(|&c| c == 0) {
            return Err(Error::InvalidDirection(format!("zero vector {v:?}")));
        }
        let g = v.iter().fold(0i64, |acc, &c| gcd(acc, c.abs())).abs();
        let mut coords: Vec<i64> = v.iter().map(|&c| c / g).collect();
        if let Some(&first) = coords.iter().find(|&&c| c != 0) {
            if first < 0 {
                for c in &mut coords {
                    *c = -*c;
                }
            }
        }
        Ok(Direction { coords })
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// True if every coordinate is >= 0 (the orientation required by the
    /// line-counting formulas).
    pub fn is_nonnegative(&self) -> bool {
        self.coords.iter().all(|&c| c >= 0)
    }

    /// Coordinatewise absolute value, re-canonicalized. Reflecting the grid
    /// in each negative coordinate maps lines of this direction onto lines
    /// of the reflected one, so line counts agree.
    pub fn reflect_nonnegative(&self) -> Direction {
        let abs: Vec<i64> = self.coords.iter().map(|&c| c.abs()).collect();
        Direction::canonicalize(&abs).expect("abs of nonzero primitive vector is nonzero")
    }
}

impl TryFrom<Vec<i64>> for Direction {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Direction> {
        Direction::canonicalize(&v)
    }
}

impl From<Direction> for Vec<i64> {
    fn from(d: Direction) -> Vec<i64> {
        d.coords
    }
}

/// Exact rank of an integer matrix via fraction-free (Bareiss-style)
/// elimination in `i128`. Rows are the input vectors.
pub fn integer_rank(rows: &[Vec<i64>], d: usize) -> usize {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&c| c as i128).collect())
        .collect();
    let mut rank = 0;
    for col in 0..d {
        let pivot = (rank..m.len()).find(|&r| m[r][col] != 0);
        let Some(p) = pivot else { continue };
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            if m[r][col] != 0 {
                let (a, b) = (m[rank][col], m[r][col]);
                let g = num_integer::gcd(a, b);
                let (fa, fb) = (a / g, b / g);
                for c in 0..d {
                    m[r][c] = m[r][c] * fa - m[rank][c] * fb;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// A validated set of pairwise linearly independent directions spanning R^d.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DirectionSetJson", into = "DirectionSetJson")]
pub struct DirectionSet {
    d: usize,
    directions: Vec<Direction>,
}

#[derive(Serialize, Deserialize)]
struct DirectionSetJson {
    d: usize,
    directions: Vec<Vec<i64>>,
}

impl TryFrom<DirectionSetJson> for DirectionSet {
    type Error = Error;
    fn try_from(j: DirectionSetJson) -> Result<DirectionSet> {
        let dirs = j
            .directions
            .iter()
            .map(|v| Direction::canonicalize(v))
            .collect::<Result<Vec<_>>>()?;
        DirectionSet::new(dirs, j.d)
    }
}

impl From<DirectionSet> for DirectionSetJson {
    fn from(s: DirectionSet) -> DirectionSetJson {
        DirectionSetJson {
            d: s.d,
            directions: s.directions.into_iter().map(Vec::from).collect(),
        }
    }
}

impl DirectionSet {
    /// Validate pairwise linear independence (distinctness after
    /// canonicalization) and spanning (integer rank = d).
    pub fn new(directions: Vec<Direction>, d: usize) -> Result<DirectionSet> {
        for dir in &directions {
            if dir.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: dir.dim(),
                });
            }
        }
        for i in 0..directions.len() {
            for j in i + 1..directions.len() {
                if directions[i] == directions[j] {
                    return Err(Error::NotPairwiseIndependent(format!(
                        "{:?} and {:?} are parallel",
                        directions[i].coords(),
                        directions[j].coords()
                    )));
                }
            }
        }
        let rows: Vec<Vec<i64>> = directions.iter().map(|s| s.coords().to_vec()).collect();
        let rank = integer_rank(&rows, d);
        if rank < d {
            return Err(Error::NotSpanning { rank, d });
        }
        Ok(DirectionSet { d, directions })
    }

    /// Validate raw integer vectors: canonicalize each, then check the set.
    pub fn from_vectors(vectors: &[Vec<i64>], d: usize) -> Result<DirectionSet> {
        let dirs = vectors
            .iter()
            .map(|v| Direction::canonicalize(v))
            .collect::<Result<Vec<_>>>()?;
        DirectionSet::new(dirs, d)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Direction> {
        self.directions.iter()
    }
}

/// A finite multiset of lattice points of a common dimension.
///
/// Multiplicities are positive; the cardinality counts multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ConfigurationJson", into = "ConfigurationJson")]
pub struct PointConfiguration {
    d: usize,
    points: BTreeMap<Point, u64>,
}

#[derive(Serialize, Deserialize)]
struct ConfigurationJson {
    d: usize,
    points: Vec<Vec<i64>>,
}

impl TryFrom<ConfigurationJson> for PointConfiguration {
    type Error = Error;
    fn try_from(j: ConfigurationJson) -> Result<PointConfiguration> {
        PointConfiguration::from_points(j.d, j.points)
    }
}

impl From<PointConfiguration> for ConfigurationJson {
    fn from(c: PointConfiguration) -> ConfigurationJson {
        // BTreeMap iteration is lexicographic, so rows come out sorted.
        let mut points = Vec::with_capacity(c.cardinality() as usize);
        for (p, &mult) in &c.points {
            for _ in 0..mult {
                points.push(p.clone());
            }
        }
        ConfigurationJson { d: c.d, points }
    }
}

impl PointConfiguration {
    pub fn empty(d: usize) -> PointConfiguration {
        PointConfiguration {
            d,
            points: BTreeMap::new(),
        }
    }

    /// Build from a list of points; repeated rows encode multiplicity.
    pub fn from_points(d: usize, pts: impl IntoIterator<Item = Point>) -> Result<PointConfiguration> {
        let mut cfg = PointConfiguration::empty(d);
        for p in pts {
            cfg.insert(p)?;
        }
        Ok(cfg)
    }

    pub fn insert(&mut self, p: Point) -> Result<()> {
        self.insert_with_multiplicity(p, 1)
    }

    pub fn insert_with_multiplicity(&mut self, p: Point, mult: u64) -> Result<()> {
        if p.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: p.len(),
            });
        }
        if mult > 0 {
            *self.points.entry(p).or_insert(0) += mult;
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Total number of points, counted with multiplicity.
    pub fn cardinality(&self) -> u64 {
        self.points.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn multiplicity(&self, p: &[i64]) -> u64 {
        self.points.get(p).copied().unwrap_or(0)
    }

    /// Distinct points with their multiplicities, in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&Point, u64)> {
        self.points.iter().map(|(p, &m)| (p, m))
    }

    /// Points expanded by multiplicity, in lexicographic order.
    pub fn expanded(&self) -> Vec<Point> {
        let mut out = Vec::new();
        for (p, m) in self.iter() {
            for _ in 0..m {
                out.push(p.clone());
            }
        }
        out
    }

    /// Multiset intersection.
    pub fn intersection(&self, other: &PointConfiguration) -> PointConfiguration {
        let mut out = PointConfiguration::empty(self.d);
        for (p, m) in self.iter() {
            let n = other.multiplicity(p);
            if n > 0 {
                out.points.insert(p.clone(), m.min(n));
            }
        }
        out
    }

    /// Remove the multiset intersection from both sides.
    pub fn cancel(a: &PointConfiguration, b: &PointConfiguration) -> (PointConfiguration, PointConfiguration) {
        let mut fa = PointConfiguration::empty(a.d);
        let mut fb = PointConfiguration::empty(b.d);
        for (p, m) in a.iter() {
            let n = b.multiplicity(p);
            if m > n {
                fa.points.insert(p.clone(), m - n);
            }
        }
        for (p, m) in b.iter() {
            let n = a.multiplicity(p);
            if m > n {
                fb.points.insert(p.clone(), m - n);
            }
        }
        (fa, fb)
    }

    /// Translate every point by `t`.
    pub fn translate(&self, t: &[i64]) -> Result<PointConfiguration> {
        if t.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: t.len(),
            });
        }
        let mut out = PointConfiguration::empty(self.d);
        for (p, m) in self.iter() {
            let q: Point = p.iter().zip(t).map(|(&a, &b)| a + b).collect();
            out.points.insert(q, m);
        }
        Ok(out)
    }
}

/// A finite axis-aligned box of lattice points: per-axis extents anchored
/// at `offset` (default all-ones, matching one-based grid conventions).
/// The cube grid `[1..n]^d` has all extents equal to `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub d: usize,
    pub extents: Vec<u64>,
    pub offset: Vec<i64>,
}

impl Grid {
    /// One-based cube grid: coordinates in `[1..n]^d`.
    pub fn cube(d: usize, n: u64) -> Grid {
        Grid {
            d,
            extents: vec![n; d],
            offset: vec![1; d],
        }
    }

    pub fn new(extents: Vec<u64>, offset: Vec<i64>) -> Result<Grid> {
        if offset.len() != extents.len() {
            return Err(Error::DimensionMismatch {
                expected: extents.len(),
                got: offset.len(),
            });
        }
        if extents.iter().any(|&e| e == 0) {
            return Err(Error::InvalidParameter("grid extent must be positive".into()));
        }
        Ok(Grid {
            d: extents.len(),
            extents,
            offset,
        })
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        p.len() == self.d
            && p.iter()
                .zip(self.offset.iter().zip(&self.extents))
                .all(|(&c, (&o, &e))| c >= o && c < o + e as i64)
    }

    pub fn contains_configuration(&self, cfg: &PointConfiguration) -> bool {
        cfg.iter().all(|(p, _)| self.contains(p))
    }

    pub fn cell_count(&self) -> u64 {
        self.extents.iter().product()
    }

    /// All cells in lexicographic order.
    pub fn cells(&self) -> Vec<Point> {
        let total = self.cell_count();
        let mut out = Vec::with_capacity(total as usize);
        let mut cur = self.offset.clone();
        loop {
            out.push(cur.clone());
            let mut axis = self.d;
            loop {
                if axis == 0 {
                    return out;
                }
                axis -= 1;
                cur[axis] += 1;
                if cur[axis] < self.offset[axis] + self.extents[axis] as i64 {
                    break;
                }
                cur[axis] = self.offset[axis];
            }
        }
    }
}
