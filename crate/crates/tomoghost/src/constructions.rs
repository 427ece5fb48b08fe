//! Explicit switching-component constructions and coprime direction
//! selection.
//!
//! The hypercube construction two-colors the vertices of `[0,1]^m` by
//! parity and projects them into `Z^d` along a chosen direction set; the
//! regular 2m-gon construction is handled combinatorially through its
//! chord-parallelism classes. Direction selection enumerates relatively
//! prime tuples in a small cube, with an exact census against the Moebius
//! formula and the zeta-density check.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::lattice::{integer_rank, DirectionSet, PointConfiguration};
use crate::xray::tomographically_equivalent;
use crate::{Error, Result};

/// Two disjoint equal-cardinality configurations with identical X-rays in
/// every direction of `directions`. Verified on construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GhostPair {
    pub f: PointConfiguration,
    pub g: PointConfiguration,
    pub directions: DirectionSet,
}

impl GhostPair {
    /// Check cardinalities, disjointness and tomographic equivalence.
    pub fn new(f: PointConfiguration, g: PointConfiguration, directions: DirectionSet) -> Result<GhostPair> {
        if f.cardinality() != g.cardinality() {
            return Err(Error::InvalidParameter(format!(
                "sides have different cardinalities: {} vs {}",
                f.cardinality(),
                g.cardinality()
            )));
        }
        if !f.intersection(&g).is_empty() {
            return Err(Error::InvalidParameter("sides are not disjoint".into()));
        }
        if f.is_empty() {
            return Err(Error::DegenerateGhost);
        }
        let eq = tomographically_equivalent(&f, &g, &directions)?;
        if !eq.equivalent {
            return Err(Error::InternalError(format!(
                "sides are not tomographically equivalent: {:?}",
                eq.witness
            )));
        }
        Ok(GhostPair { f, g, directions })
    }

    /// Re-run the full verification (useful after deserialization).
    pub fn verify(&self) -> Result<()> {
        GhostPair::new(self.f.clone(), self.g.clone(), self.directions.clone()).map(|_| ())
    }

    /// Per-side cardinality.
    pub fn size(&self) -> u64 {
        self.f.cardinality()
    }
}

/// Result of the hypercube projection: the raw parity-class multisets of
/// cardinality `2^(m-1)` each, and the pair after cancelling common points.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HypercubeGhost {
    pub raw_even: PointConfiguration,
    pub raw_odd: PointConfiguration,
    pub pair: GhostPair,
}

/// Project the parity two-coloring of `[0,1]^m` into `Z^d` along the
/// directions of `s`: vertex `v` maps to `sum v_i s_i`; even-parity images
/// against odd-parity images have equal X-rays in every direction of `s`.
pub fn hypercube_ghost(s: &DirectionSet) -> Result<HypercubeGhost> {
    let m = s.len();
    let d = s.dim();
    if m < 2 {
        return Err(Error::InvalidParameter("need at least 2 directions".into()));
    }
    if m > 26 {
        return Err(Error::InvalidParameter(format!(
            "hypercube construction with m={m} would enumerate 2^{m} vertices"
        )));
    }
    let mut even = PointConfiguration::empty(d);
    let mut odd = PointConfiguration::empty(d);
    for mask in 0u64..(1u64 << m) {
        let mut image = vec![0i64; d];
        for (i, dir) in s.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for (c, &sc) in image.iter_mut().zip(dir.coords()) {
                    *c += sc;
                }
            }
        }
        if mask.count_ones() % 2 == 0 {
            even.insert(image)?;
        } else {
            odd.insert(image)?;
        }
    }
    let (f, g) = PointConfiguration::cancel(&even, &odd);
    if f.is_empty() || g.is_empty() {
        return Err(Error::DegenerateGhost);
    }
    let pair = GhostPair::new(f, g, s.clone())?;
    Ok(HypercubeGhost {
        raw_even: even,
        raw_odd: odd,
        pair,
    })
}

/// Combinatorial certificate that the alternate vertices of a regular
/// 2m-gon form a switching component for m direction classes.
///
/// Vertices are indexed 0..2m around the polygon; chords `v_i v_j` and
/// `v_i' v_j'` are parallel iff `i + j = i' + j' (mod 2m)`. For each odd
/// residue `c` the pairs `{i, (c - i) mod 2m}` partition the vertices into
/// m parallel even-odd chords, and `2i = c (mod 2m)` has no solution, so
/// no vertex is left unpaired on a tangent line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonPairingCertificate {
    pub m: u32,
    pub classes: Vec<PolygonDirectionClass>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonDirectionClass {
    /// Odd chord-sum residue mod 2m naming the direction class.
    pub residue: u32,
    /// Vertex-index pairs, each joining one even and one odd index.
    pub pairs: Vec<(u32, u32)>,
}

pub fn polygon_ghost(m: u32) -> Result<PolygonPairingCertificate> {
    if m < 2 {
        return Err(Error::InvalidParameter("polygon construction needs m >= 2".into()));
    }
    let two_m = 2 * m;
    let mut classes = Vec::with_capacity(m as usize);
    for c in (1..two_m).step_by(2) {
        let pairs: Vec<(u32, u32)> = (0..two_m)
            .step_by(2)
            .map(|i| (i, (c + two_m - i % two_m) % two_m))
            .collect();
        classes.push(PolygonDirectionClass { residue: c, pairs });
    }
    let cert = PolygonPairingCertificate { m, classes };
    cert.check()?;
    Ok(cert)
}

impl PolygonPairingCertificate {
    /// Structural check: every class covers each vertex index exactly once
    /// and every pair joins an even index with an odd one.
    pub fn check(&self) -> Result<()> {
        let two_m = 2 * self.m;
        for class in &self.classes {
            let mut seen = vec![false; two_m as usize];
            for &(i, j) in &class.pairs {
                if i % 2 != 0 || j % 2 != 1 {
                    return Err(Error::InternalError(format!(
                        "pair ({i},{j}) in class {} does not join even with odd",
                        class.residue
                    )));
                }
                if (i + j) % two_m != class.residue {
                    return Err(Error::InternalError(format!(
                        "pair ({i},{j}) has chord sum {} != {}",
                        (i + j) % two_m,
                        class.residue
                    )));
                }
                for v in [i, j] {
                    if seen[v as usize] {
                        return Err(Error::InternalError(format!(
                            "vertex {v} covered twice in class {}",
                            class.residue
                        )));
                    }
                    seen[v as usize] = true;
                }
            }
            if seen.iter().any(|&s| !s) {
                return Err(Error::InternalError(format!(
                    "class {} does not cover all vertices",
                    class.residue
                )));
            }
        }
        Ok(())
    }

    /// Floating-point sanity check: place vertex k at angle `pi*k/m` and
    /// confirm paired chords within one class are parallel up to `tol`.
    pub fn numeric_parallel_check(&self, tol: f64) -> bool {
        let two_m = 2 * self.m;
        let vertex = |k: u32| {
            let a = std::f64::consts::PI * k as f64 / self.m as f64;
            (a.cos(), a.sin())
        };
        for class in &self.classes {
            let chords: Vec<(f64, f64)> = class
                .pairs
                .iter()
                .map(|&(i, j)| {
                    let (xi, yi) = vertex(i % two_m);
                    let (xj, yj) = vertex(j % two_m);
                    (xj - xi, yj - yi)
                })
                .collect();
            let (rx, ry) = chords[0];
            for &(cx, cy) in &chords[1..] {
                if (rx * cy - ry * cx).abs() > tol {
                    return false;
                }
            }
        }
        true
    }
}

/// The tight 6-point, 5-direction switching component in `Z^2`.
pub fn paper_example_m5() -> GhostPair {
    let f = PointConfiguration::from_points(
        2,
        vec![
            vec![0, 2],
            vec![1, 4],
            vec![2, 2],
            vec![3, 0],
            vec![4, 3],
            vec![5, 1],
        ],
    )
    .expect("static data");
    let g = PointConfiguration::from_points(
        2,
        vec![
            vec![0, 3],
            vec![1, 1],
            vec![2, 4],
            vec![3, 2],
            vec![4, 0],
            vec![5, 2],
        ],
    )
    .expect("static data");
    let s = DirectionSet::from_vectors(
        &[
            vec![1, 0],
            vec![0, 1],
            vec![1, 1],
            vec![1, -1],
            vec![-2, 1],
        ],
        2,
    )
    .expect("static data");
    GhostPair::new(f, g, s).expect("the 6-point pair is a switching component")
}

/// All tuples in `[0..max]^d \ {0}` with gcd 1, lexicographic.
pub fn primitive_tuples_nonneg(max: i64, d: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; d];
    'outer: loop {
        let g = cur.iter().fold(0i64, |acc, &c| num_integer::gcd(acc, c));
        if g == 1 {
            out.push(cur.clone());
        }
        let mut axis = d;
        loop {
            if axis == 0 {
                break 'outer;
            }
            axis -= 1;
            cur[axis] += 1;
            if cur[axis] <= max {
                break;
            }
            cur[axis] = 0;
        }
    }
    out
}

/// All tuples in `[1..q]^d` with gcd 1, lexicographic.
pub fn primitive_tuples_positive(q: u64, d: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    if q == 0 {
        return out;
    }
    let mut cur = vec![1i64; d];
    'outer: loop {
        let g = cur.iter().fold(0i64, |acc, &c| num_integer::gcd(acc, c));
        if g == 1 {
            out.push(cur.clone());
        }
        let mut axis = d;
        loop {
            if axis == 0 {
                break 'outer;
            }
            axis -= 1;
            cur[axis] += 1;
            if cur[axis] <= q as i64 {
                break;
            }
            cur[axis] = 1;
        }
    }
    out
}

/// Moebius function on `1..=n` by sieve.
pub fn moebius_sieve(n: u64) -> Vec<i8> {
    let n = n as usize;
    let mut mu = vec![1i8; n + 1];
    let mut is_prime = vec![true; n + 1];
    for p in 2..=n {
        if is_prime[p] {
            for multiple in (p..=n).step_by(p) {
                if multiple > p {
                    is_prime[multiple] = false;
                }
                mu[multiple] = -mu[multiple];
            }
            let p2 = p * p;
            if p2 <= n {
                for multiple in (p2..=n).step_by(p2) {
                    mu[multiple] = 0;
                }
            }
        }
    }
    if !mu.is_empty() {
        mu[0] = 0;
    }
    mu
}

/// Count of relatively prime d-tuples in `[1..p]^d` via the Moebius sum
/// `sum_j mu(j) * floor(p/j)^d`.
pub fn coprime_count_mobius(p: u64, d: usize) -> u128 {
    let mu = moebius_sieve(p);
    let mut total: i128 = 0;
    for j in 1..=p {
        let m = mu[j as usize];
        if m != 0 {
            total += m as i128 * ((p / j) as i128).pow(d as u32);
        }
    }
    total as u128
}

/// Count of relatively prime d-tuples in `[1..p]^d` by direct gcd
/// enumeration over all `p^d` tuples. Oracle for the Moebius route.
pub fn coprime_count_gcd(p: u64, d: usize) -> u128 {
    primitive_tuples_positive(p, d).len() as u128
}

/// Exact census of relatively prime d-tuples in `[1..p]^d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoprimeCensus {
    pub p: u64,
    pub d: usize,
    /// Number of relatively prime tuples.
    pub count: u128,
    /// Total number of tuples, `p^d`.
    pub total: u128,
    /// Exact density as a reduced fraction (numerator, denominator).
    pub density: (u128, u128),
}

impl CoprimeCensus {
    pub fn density_ratio(&self) -> Ratio<u128> {
        Ratio::new(self.density.0, self.density.1)
    }

    pub fn density_f64(&self) -> f64 {
        self.count as f64 / self.total as f64
    }
}

pub fn coprime_census(p: u64, d: usize) -> Result<CoprimeCensus> {
    if p < 1 || d < 2 {
        return Err(Error::InvalidParameter("need p >= 1 and d >= 2".into()));
    }
    let count = coprime_count_mobius(p, d);
    let total = (p as u128).pow(d as u32);
    let ratio = Ratio::new(count, total);
    Ok(CoprimeCensus {
        p,
        d,
        count,
        total,
        density: (*ratio.numer(), *ratio.denom()),
    })
}

/// Evaluate `zeta(d)` for integer `d >= 2` by partial sum plus integral
/// tail bracket; absolute error <= 1e-9.
pub fn zeta(d: usize) -> f64 {
    assert!(d >= 2);
    // tail after M terms lies in [((M+1)^(1-d))/(d-1), (M^(1-d))/(d-1)];
    // bracket width <= M^-d, so M = 2*1e9^(1/d) keeps the midpoint within 1e-9
    let m = (1e9f64.powf(1.0 / d as f64).ceil() as u64) * 2;
    let mut sum = 0.0f64;
    for j in (1..=m).rev() {
        sum += (j as f64).powi(-(d as i32));
    }
    let lo = ((m + 1) as f64).powi(1 - d as i32) / (d as f64 - 1.0);
    let hi = (m as f64).powi(1 - d as i32) / (d as f64 - 1.0);
    sum + (lo + hi) / 2.0
}

/// Does `R(p,d) > p^d / 2` hold, and how far is the density from `1/zeta(d)`?
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZetaDensityReport {
    pub p: u64,
    pub d: usize,
    pub count: u128,
    pub total: u128,
    /// R(p,d) > p^d/2, compared exactly as 2R > p^d.
    pub exceeds_half: bool,
    pub density: f64,
    pub zeta_reciprocal: f64,
    pub deviation: f64,
}

pub fn zeta_lower_check(p: u64, d: usize) -> Result<ZetaDensityReport> {
    let census = coprime_census(p, d)?;
    let zr = 1.0 / zeta(d);
    let density = census.density_f64();
    Ok(ZetaDensityReport {
        p,
        d,
        count: census.count,
        total: census.total,
        exceeds_half: 2 * census.count > census.total,
        density,
        zeta_reciprocal: zr,
        deviation: (density - zr).abs(),
    })
}

/// Outcome of the density-guided direction selection.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DirectionSelection {
    pub m: usize,
    pub d: usize,
    /// `q = ceil((2m)^(1/d))`.
    pub q_initial: u64,
    /// Final cube side actually used.
    pub q_used: u64,
    /// Whether the initial q already provided m primitive tuples.
    pub q_sufficed: bool,
    /// Whether the trailing d selections were replaced by unit vectors to
    /// restore spanning.
    pub unit_vectors_substituted: bool,
    pub set: DirectionSet,
}

/// Select `m` pairwise independent spanning directions from the primitive
/// tuples of `[1..q]^d` in lexicographic order, growing `q` when the cube
/// holds fewer than `m` of them.
pub fn select_directions(m: usize, d: usize) -> Result<DirectionSelection> {
    if d < 2 || m < d {
        return Err(Error::InvalidParameter(format!("need m >= d >= 2, got m={m} d={d}")));
    }
    // smallest q with q^d >= 2m
    let mut q = 1u64;
    while (q as u128).pow(d as u32) < 2 * m as u128 {
        q += 1;
    }
    let q_initial = q;
    let mut tuples = primitive_tuples_positive(q, d);
    while tuples.len() < m {
        q += 1;
        tuples = primitive_tuples_positive(q, d);
    }
    let q_sufficed = q == q_initial;
    let mut chosen: Vec<Vec<i64>> = tuples.into_iter().take(m).collect();
    let mut substituted = false;
    if integer_rank(&chosen, d) < d {
        // restore spanning by replacing the last d selections with the
        // standard unit vectors
        substituted = true;
        for i in 0..d {
            let mut e = vec![0i64; d];
            e[i] = 1;
            let idx = m - d + i;
            chosen[idx] = e;
        }
    }
    let set = DirectionSet::from_vectors(&chosen, d)?;
    Ok(DirectionSelection {
        m,
        d,
        q_initial,
        q_used: q,
        q_sufficed,
        unit_vectors_substituted: substituted,
        set,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(vs: &[Vec<i64>], d: usize) -> DirectionSet {
        DirectionSet::from_vectors(vs, d).unwrap()
    }

    #[test]
    fn hypercube_unit_square() {
        let s = set(&[vec![1, 0], vec![0, 1]], 2);
        let h = hypercube_ghost(&s).unwrap();
        let f = PointConfiguration::from_points(2, vec![vec![0, 0], vec![1, 1]]).unwrap();
        let g = PointConfiguration::from_points(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(h.pair.f, f);
        assert_eq!(h.pair.g, g);
    }

    #[test]
    fn hypercube_m3_matches_known_pair() {
        let s = set(&[vec![1, 0], vec![0, 1], vec![1, 1]], 2);
        let h = hypercube_ghost(&s).unwrap();
        let f = PointConfiguration::from_points(2, vec![vec![0, 0], vec![1, 2], vec![2, 1]]).unwrap();
        let g = PointConfiguration::from_points(2, vec![vec![1, 0], vec![0, 1], vec![2, 2]]).unwrap();
        assert_eq!(h.pair.f, f);
        assert_eq!(h.pair.g, g);
        assert_eq!(h.raw_even.cardinality(), 4);
        assert_eq!(h.raw_odd.cardinality(), 4);
    }

    #[test]
    fn hypercube_m4_equal_xrays() {
        let s = set(&[vec![1, 0], vec![0, 1], vec![1, 1], vec![1, -1]], 2);
        let h = hypercube_ghost(&s).unwrap();
        assert!(h.pair.size() <= 8);
        assert_eq!(h.raw_even.cardinality(), 8);
        h.pair.verify().unwrap();
    }

    #[test]
    fn polygon_square() {
        let c = polygon_ghost(2).unwrap();
        assert_eq!(c.classes.len(), 2);
        assert_eq!(c.classes[0].residue, 1);
        assert_eq!(c.classes[0].pairs, vec![(0, 1), (2, 3)]);
        assert_eq!(c.classes[1].residue, 3);
        assert_eq!(c.classes[1].pairs, vec![(0, 3), (2, 1)]);
    }

    #[test]
    fn polygon_hexagon() {
        let c = polygon_ghost(3).unwrap();
        assert_eq!(c.classes.len(), 3);
        for class in &c.classes {
            assert_eq!(class.pairs.len(), 3);
        }
    }

    #[test]
    fn polygon_numeric_parallel_m5() {
        let c = polygon_ghost(5).unwrap();
        assert!(c.numeric_parallel_check(1e-9));
    }

    #[test]
    fn polygon_involution_no_fixed_points() {
        for m in 2..=64u32 {
            let cert = polygon_ghost(m).unwrap();
            let two_m = 2 * m;
            for class in &cert.classes {
                let c = class.residue;
                for i in 0..two_m {
                    let j = (c + two_m - i % two_m) % two_m;
                    assert_ne!(i, j, "fixed point at m={m} c={c} i={i}");
                    let back = (c + two_m - j % two_m) % two_m;
                    assert_eq!(back, i);
                    assert_ne!(i % 2, j % 2);
                }
            }
        }
    }

    #[test]
    fn polygon_rejects_m1() {
        assert!(polygon_ghost(1).is_err());
    }

    #[test]
    fn paper_example_checks() {
        let pair = paper_example_m5();
        assert_eq!(pair.f.cardinality(), 6);
        assert_eq!(pair.g.cardinality(), 6);
        assert!(pair.f.intersection(&pair.g).is_empty());
        assert_eq!(pair.directions.len(), 5);
        pair.verify().unwrap();
    }

    #[test]
    fn coprime_census_small() {
        let c = coprime_census(2, 2).unwrap();
        assert_eq!(c.count, 3);
        assert_eq!(c.density, (3, 4));
        assert_eq!(coprime_census(1, 3).unwrap().count, 1);
        assert_eq!(coprime_census(4, 2).unwrap().count, 11);
    }

    #[test]
    fn coprime_gcd_matches_mobius() {
        for d in [2usize, 3, 4] {
            for p in 1..=30u64 {
                assert_eq!(
                    coprime_count_gcd(p, d),
                    coprime_count_mobius(p, d),
                    "p={p} d={d}"
                );
            }
        }
    }

    #[test]
    fn zeta_values() {
        // zeta(2) = pi^2/6
        let z2 = zeta(2);
        assert!((z2 - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-8);
        // zeta(3) (Apery) and zeta(4) = pi^4/90
        assert!((zeta(3) - 1.2020569031595943).abs() < 1e-8);
        assert!((zeta(4) - std::f64::consts::PI.powi(4) / 90.0).abs() < 1e-8);
    }

    #[test]
    fn zeta_lower_check_examples() {
        assert!(zeta_lower_check(2, 2).unwrap().exceeds_half);
        assert!(zeta_lower_check(1, 2).unwrap().exceeds_half);
        let r = zeta_lower_check(200, 2).unwrap();
        assert!(r.deviation < 0.01);
    }

    #[test]
    fn select_directions_examples() {
        let sel = select_directions(8, 2).unwrap();
        assert_eq!(sel.q_initial, 4);
        assert!(sel.q_sufficed);
        assert_eq!(sel.set.len(), 8);

        let sel = select_directions(2, 2).unwrap();
        assert_eq!(sel.q_initial, 2);
        let coords: Vec<&[i64]> = sel.set.iter().map(|s| s.coords()).collect();
        assert_eq!(coords, vec![&[1, 1][..], &[1, 2][..]]);

        let sel = select_directions(3, 3).unwrap();
        assert_eq!(sel.q_initial, 2);
        assert!(sel.q_sufficed);
    }

    #[test]
    fn select_directions_always_valid() {
        for d in [2usize, 3] {
            for m in d..=40 {
                let sel = select_directions(m, d).unwrap();
                assert_eq!(sel.set.len(), m);
            }
        }
    }

    #[test]
    fn select_directions_rejects_small_m() {
        assert!(select_directions(1, 2).is_err());
        assert!(select_directions(2, 3).is_err());
    }
}
