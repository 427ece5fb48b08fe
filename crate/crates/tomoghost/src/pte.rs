//! Prouhet-Tarry-Escott solutions from planar switching components.
//!
//! Two distinct multisets X, Y of integer r-tuples solve PTE_r at degree k
//! when all mixed power sums of total degree <= k agree. A switching
//! component in Z^2 for m directions yields a PTE_2 solution of degree
//! m - 1, and a linear functional collapses PTE_2 to PTE_1 when it keeps
//! the sides distinct.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::constructions::GhostPair;
use crate::{Error, Result};

/// A PTE_r candidate: two size-`n` multisets of integer r-tuples.
/// Rows are kept sorted so multiset equality is plain equality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PteSolution {
    pub r: usize,
    pub degree: u32,
    pub size: usize,
    pub x: Vec<Vec<i64>>,
    pub y: Vec<Vec<i64>>,
}

impl PteSolution {
    pub fn new(r: usize, degree: u32, mut x: Vec<Vec<i64>>, mut y: Vec<Vec<i64>>) -> Result<PteSolution> {
        if x.len() != y.len() {
            return Err(Error::InvalidParameter(format!(
                "sides have different sizes: {} vs {}",
                x.len(),
                y.len()
            )));
        }
        for row in x.iter().chain(&y) {
            if row.len() != r {
                return Err(Error::DimensionMismatch {
                    expected: r,
                    got: row.len(),
                });
            }
        }
        x.sort();
        y.sort();
        let size = x.len();
        Ok(PteSolution { r, degree, size, x, y })
    }
}

/// Exact mixed power sum `sum_i prod_j row_ij ^ e_j` over a multiset.
fn power_sum(rows: &[Vec<i64>], exponents: &[u32]) -> BigInt {
    let mut total = BigInt::zero();
    for row in rows {
        let mut term = BigInt::one();
        for (&c, &e) in row.iter().zip(exponents) {
            term *= BigInt::from(c).pow(e);
        }
        total += term;
    }
    total
}

/// All exponent tuples of length `r` with total degree <= `k`,
/// lexicographic.
pub fn exponent_tuples(r: usize, k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; r];
    fn go(cur: &mut Vec<u32>, pos: usize, left: u32, out: &mut Vec<Vec<u32>>) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[pos] = e;
            go(cur, pos + 1, left - e, out);
        }
        cur[pos] = 0;
    }
    go(&mut cur, 0, k, &mut out);
    out
}

/// Result of an exact identity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PteVerification {
    pub valid: bool,
    /// First exponent tuple whose power sums differ, if any.
    pub violated_exponents: Option<Vec<u32>>,
    /// False when the sides are equal multisets (not a solution even if
    /// all identities hold).
    pub sides_distinct: bool,
}

/// Check every identity of total degree <= `sol.degree` in exact
/// big-integer arithmetic, and that the sides are distinct multisets.
pub fn verify_pte(sol: &PteSolution) -> PteVerification {
    let sides_distinct = sol.x != sol.y;
    for exps in exponent_tuples(sol.r, sol.degree) {
        if power_sum(&sol.x, &exps) != power_sum(&sol.y, &exps) {
            return PteVerification {
                valid: false,
                violated_exponents: Some(exps),
                sides_distinct,
            };
        }
    }
    PteVerification {
        valid: sides_distinct,
        violated_exponents: None,
        sides_distinct,
    }
}

/// Convert a planar switching component for `m` directions into a PTE_2
/// solution of degree `m - 1`, re-verifying every identity.
pub fn ghost_to_pte2(pair: &GhostPair) -> Result<PteSolution> {
    if pair.f.dim() != 2 {
        return Err(Error::InvalidParameter(
            "PTE_2 conversion needs a planar switching component".into(),
        ));
    }
    let m = pair.directions.len() as u32;
    let sol = PteSolution::new(2, m - 1, pair.f.expanded(), pair.g.expanded())?;
    let v = verify_pte(&sol);
    if !v.valid {
        return Err(Error::InternalError(format!(
            "ghost pair failed PTE identities at exponents {:?}",
            v.violated_exponents
        )));
    }
    Ok(sol)
}

/// Collapse a PTE_2 solution through the functional
/// `(xi1, xi2) -> alpha1*xi1 + alpha2*xi2`. The images keep every identity
/// of the same degree; the functional is degenerate when the image
/// multisets coincide.
pub fn reduce_to_pte1(sol: &PteSolution, alpha: (i64, i64)) -> Result<PteSolution> {
    if sol.r != 2 {
        return Err(Error::InvalidParameter("reduction applies to r = 2 solutions".into()));
    }
    if alpha == (0, 0) {
        return Err(Error::InvalidParameter("alpha must be nonzero".into()));
    }
    let apply = |rows: &[Vec<i64>]| -> Vec<Vec<i64>> {
        rows.iter()
            .map(|row| vec![alpha.0 * row[0] + alpha.1 * row[1]])
            .collect()
    };
    let reduced = PteSolution::new(1, sol.degree, apply(&sol.x), apply(&sol.y))?;
    if reduced.x == reduced.y {
        return Err(Error::DegenerateFunctional);
    }
    let v = verify_pte(&reduced);
    if !v.valid {
        return Err(Error::InternalError(format!(
            "reduced solution failed PTE identities at exponents {:?}",
            v.violated_exponents
        )));
    }
    Ok(reduced)
}

/// Heuristic functional `alpha = (1, B)` with `B` one more than the widest
/// coordinate spread, so distinct planar points tend to stay distinct.
pub fn suggest_alpha(sol: &PteSolution) -> (i64, i64) {
    let spread = (0..sol.r.min(2))
        .map(|j| {
            let it = sol.x.iter().chain(&sol.y).map(|row| row[j]);
            let max = it.clone().max().unwrap_or(0);
            let min = it.min().unwrap_or(0);
            max - min
        })
        .max()
        .unwrap_or(0);
    (1, spread + 1)
}
