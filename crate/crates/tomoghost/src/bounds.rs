//! Exact counting certificates for the pigeonhole existence argument.
//!
//! For a direction set S over the grid `[1..n]^d` with `n` even and
//! `k = n^d/2`, the number of X-ray profile tuples a k-point subset can
//! produce is at most `prod_i N(k, l_i)` with `N(k,l) = C(k+l-1, l-1)` weak
//! compositions per direction, while there are `C(n^d, k) >= 2^(n^d/2)`
//! subsets. Whenever the first quantity is strictly smaller, two distinct
//! equal-X-ray subsets exist. Everything here is evaluated either exactly
//! in big integers (below a configurable bit cap) or as certified log2
//! intervals with outward rounding.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::constructions::select_directions;
use crate::lattice::DirectionSet;
use crate::xray::count_lines_exact;
use crate::{Error, Result};

/// Default cap on the bit size of exactly-computed quantities.
pub const DEFAULT_BIT_CAP: u64 = 1_000_000;

/// Rational bracket for Euler's number, used to decide inequalities that
/// mention `e` by exact cross-multiplied integer comparisons.
const E_LO: (u64, u64) = (2_718_281_828, 1_000_000_000);
const E_HI: (u64, u64) = (2_718_281_829, 1_000_000_000);

/// An exactly known big integer, or a certified `[lo, hi]` bracket of its
/// base-2 logarithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Magnitude {
    Exact {
        #[serde(with = "biguint_decimal")]
        value: BigUint,
    },
    Log2 {
        lo: f64,
        hi: f64,
    },
}

mod biguint_decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::from_str(&s).map_err(serde::de::Error::custom)
    }
}

impl Magnitude {
    /// Certified log2 bracket. For exact values the bracket comes from the
    /// top 64 bits plus a generous float slack.
    pub fn log2_interval(&self) -> (f64, f64) {
        match self {
            Magnitude::Exact { value } => {
                let (lo, hi) = log2_biguint_interval(value);
                (lo, hi)
            }
            Magnitude::Log2 { lo, hi } => (*lo, *hi),
        }
    }

    /// Strictly less than, `None` when the brackets overlap.
    pub fn lt(&self, other: &Magnitude) -> Option<bool> {
        if let (Magnitude::Exact { value: a }, Magnitude::Exact { value: b }) = (self, other) {
            return Some(a < b);
        }
        let (alo, ahi) = self.log2_interval();
        let (blo, bhi) = other.log2_interval();
        if ahi < blo {
            Some(true)
        } else if alo >= bhi {
            Some(false)
        } else {
            None
        }
    }
}

/// Certified log2 bracket of a positive big integer.
pub fn log2_biguint_interval(v: &BigUint) -> (f64, f64) {
    assert!(!v.is_zero());
    let bits = v.bits();
    if bits <= 53 {
        let x = v.to_u64().unwrap() as f64;
        let l = x.log2();
        return (l - 1e-12, l + 1e-12);
    }
    // top 53 bits as a float, rest as an exponent shift
    let shift = bits - 53;
    let top = (v >> shift).to_u64().unwrap() as f64;
    let l = top.log2() + shift as f64;
    // truncation loses at most one ulp of the mantissa
    (l - 1e-9, l + 1e-9)
}

/// Exact binomial coefficient.
pub fn binomial(n: u128, k: u128) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut res = BigUint::one();
    for i in 0..k {
        res = res * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    res
}

/// Certified log2 bracket of `n!`.
fn log2_factorial_interval(n: u128) -> (f64, f64) {
    if n <= 1 {
        return (0.0, 0.0);
    }
    if n <= 100_000 {
        let mut s = 0.0f64;
        for k in 2..=n {
            s += (k as f64).log2();
        }
        let err = n as f64 * 1e-12 + 1e-9;
        return (s - err, s + err);
    }
    // Stirling: ln n! lies between S0 and S0 + 1/(12n) with
    // S0 = n ln n - n + 0.5 ln(2 pi n)
    let x = n as f64;
    let s0 = x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln();
    let slack = s0.abs() * 1e-12 + 1e-9;
    let lo = (s0 - slack) / std::f64::consts::LN_2;
    let hi = (s0 + 1.0 / (12.0 * x) + slack) / std::f64::consts::LN_2;
    (lo, hi)
}

/// Certified log2 bracket of `C(n, k)`.
pub fn log2_binomial_interval(n: u128, k: u128) -> (f64, f64) {
    if k > n {
        return (f64::NEG_INFINITY, f64::NEG_INFINITY);
    }
    let (nlo, nhi) = log2_factorial_interval(n);
    let (klo, khi) = log2_factorial_interval(k);
    let (mlo, mhi) = log2_factorial_interval(n - k);
    (nlo - khi - mhi, nhi - klo - mlo)
}

/// Number of weak k-compositions of l: `C(k+l-1, l-1)`.
pub fn weak_composition_count(k: u128, l: u128) -> Result<BigUint> {
    if l == 0 {
        if k == 0 {
            return Ok(BigUint::one());
        }
        return Err(Error::InvalidParameter(
            "no weak composition of 0 parts sums to a positive value".into(),
        ));
    }
    Ok(binomial(k + l - 1, l - 1))
}

/// A positive rational tolerance exponent.
pub type Epsilon = Ratio<u64>;

/// The even grid side prescribed by the counting theorem:
/// the even member of `{ceil(m^(1+(1+eps)/d)), ceil(...)+1}`, computed with
/// exact integer root extraction.
pub fn theorem_n(m: u64, d: usize, epsilon: Epsilon) -> Result<u64> {
    if m < 1 || d < 2 {
        return Err(Error::InvalidParameter("need m >= 1 and d >= 2".into()));
    }
    if *epsilon.numer() == 0 {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    // exponent 1 + (1+eps)/d = (d*q + q + p) / (d*q) for eps = p/q
    let (p, q) = (*epsilon.numer(), *epsilon.denom());
    let num_exp = d as u64 * q + q + p;
    let den_exp = d as u64 * q;
    let power = BigUint::from(m).pow(num_exp as u32);
    let root = power.nth_root(den_exp as u32);
    let ceil = if root.pow(den_exp as u32) == power {
        root
    } else {
        root + 1u32
    };
    let c = ceil
        .to_u64()
        .ok_or_else(|| Error::InvalidParameter("theorem n does not fit in u64".into()))?;
    Ok(if c % 2 == 0 { c } else { c + 1 })
}

/// Upper bound `prod_i N(k, l_i)` on the number of profile tuples, exact
/// below `bit_cap` bits and as a log2 bracket above.
pub fn profile_space_bound(k: u128, line_counts: &[u128], bit_cap: u64) -> Result<Magnitude> {
    if line_counts.iter().any(|&l| l == 0) {
        return Err(Error::InvalidParameter("every direction must have l_i >= 1".into()));
    }
    // estimate the total bit size before multiplying anything out
    let mut est_hi = 0.0f64;
    for &l in line_counts {
        let (_, hi) = log2_binomial_interval(k + l - 1, l - 1);
        est_hi += hi;
    }
    if est_hi <= bit_cap as f64 {
        let mut prod = BigUint::one();
        for &l in line_counts {
            prod *= weak_composition_count(k, l)?;
        }
        Ok(Magnitude::Exact { value: prod })
    } else {
        let (mut lo, mut hi) = (0.0f64, 0.0f64);
        for &l in line_counts {
            let (a, b) = log2_binomial_interval(k + l - 1, l - 1);
            lo += a;
            hi += b;
        }
        Ok(Magnitude::Log2 { lo, hi })
    }
}

/// Exact `C(n^d, n^d/2)`, asserting the `>= 2^(n^d/2)` lower bound.
pub fn subset_count(n: u64, d: usize) -> Result<BigUint> {
    if n % 2 != 0 || n == 0 {
        return Err(Error::InvalidParameter("n must be even and positive".into()));
    }
    let total = (n as u128).pow(d as u32);
    let half = total / 2;
    let c = binomial(total, half);
    let lower = BigUint::one() << half as u64;
    debug_assert!(c >= lower, "C(n^d, n^d/2) >= 2^(n^d/2) must hold");
    if c < lower {
        return Err(Error::InternalError(
            "binomial lower bound 2^(n^d/2) violated".into(),
        ));
    }
    Ok(c)
}

/// `C(n^d, n^d/2)` as a [`Magnitude`] respecting the bit cap. The log path
/// uses the Stirling bracket of the central binomial coefficient.
pub fn subset_count_magnitude(n: u64, d: usize, bit_cap: u64) -> Result<Magnitude> {
    if n % 2 != 0 || n == 0 {
        return Err(Error::InvalidParameter("n must be even and positive".into()));
    }
    let total = (n as u128).pow(d as u32);
    if total <= bit_cap as u128 {
        Ok(Magnitude::Exact {
            value: subset_count(n, d)?,
        })
    } else {
        let (lo, hi) = log2_binomial_interval(total, total / 2);
        Ok(Magnitude::Log2 { lo, hi })
    }
}

/// Verdict of a counting certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// `prod N(k, l_i) < C(n^d, k)` strictly: two equal-X-ray k-subsets of
    /// the grid exist by pigeonhole (non-constructive).
    GhostGuaranteed,
    /// Brackets overlap or a resource cap was hit.
    Inconclusive,
    /// The profile bound is at least the subset count; the counting
    /// argument certifies nothing at these parameters.
    BoundFails,
}

/// Truth of each inequality in the proof chain
/// `N(k,l_i) <= C(k+l_i, l_i) <= ((k+l_i)e/l_i)^(l_i)` per direction, the
/// product steps to `(ne+e)^l <= n^(2l)`, and the final comparison with
/// `2^(n^d/2)`. `None` means the value was out of exact range and the float
/// bracket could not decide.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainReport {
    pub per_direction: Vec<DirectionChainLink>,
    /// Side condition `n >= 4` of the last chain step.
    pub n_ge_4: bool,
    /// `e(n+1) <= n^2`, the step `(ne+e)^l <= n^(2l)`.
    pub ne_plus_e_le_n_squared: Option<bool>,
    /// The end-to-end claim `n^(2l) < 2^(n^d/2)`.
    pub chain_comparison_holds: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DirectionChainLink {
    pub direction: Vec<i64>,
    pub line_count: u128,
    /// `N(k, l_i) <= C(k + l_i, l_i)`.
    pub weak_le_binomial: Option<bool>,
    /// `C(k + l_i, l_i) <= ((k + l_i) e / l_i)^(l_i)`.
    pub binomial_le_epow: Option<bool>,
    /// Side condition `l_i >= n^(d-1)`.
    pub line_count_ge_n_pow: bool,
    /// Product step `n^d / (2 l_i) <= n`, i.e. `n^(d-1) <= 2 l_i`.
    pub product_step_holds: bool,
}

/// Exact arbitrary-precision record of both sides of the counting
/// inequality, with verdict and chain diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PigeonholeReport {
    pub m: usize,
    pub d: usize,
    /// Epsilon as (numerator, denominator).
    pub epsilon: (u64, u64),
    pub n: u64,
    /// `k = n^d / 2`.
    pub k: u128,
    pub line_counts: Vec<u128>,
    /// `l = sum l_i`.
    pub total_lines: u128,
    /// `prod_i N(k, l_i)`.
    pub profile_bound: Magnitude,
    /// `C(n^d, k)`.
    pub subset_count: Magnitude,
    /// `n^(2l)` when representable under the bit cap.
    pub chain_lhs: Magnitude,
    /// `2^(n^d/2)` when representable under the bit cap.
    pub chain_rhs: Magnitude,
    pub chain: ChainReport,
    pub verdict: Verdict,
}

/// Decide `C(a, b) <= ((a * e) / b)^b` by exact cross-multiplication with
/// a rational bracket of `e`, falling back to `None` when the bracket
/// cannot separate the sides or the numbers exceed the bit cap.
fn binomial_le_epow(a: u128, b: u128, bit_cap: u64) -> Option<bool> {
    // bits of ((a*num)^b) ~ b * log2(a*num)
    let est = b as f64 * ((a as f64) * E_HI.0 as f64).log2();
    if est > bit_cap as f64 || b > u32::MAX as u128 {
        // float fallback: log2 C(a,b) vs b*log2(a e / b)
        let (clo, chi) = log2_binomial_interval(a, b);
        let rhs_lo = b as f64 * ((a as f64 * 2.718281828 / b as f64).log2() - 1e-9);
        let rhs_hi = b as f64 * ((a as f64 * 2.718281829 / b as f64).log2() + 1e-9);
        if chi <= rhs_lo {
            return Some(true);
        }
        if clo > rhs_hi {
            return Some(false);
        }
        return None;
    }
    let c = binomial(a, b);
    // true with e_lo implies true with e
    let lhs_lo = &c * BigUint::from(b).pow(b as u32) * BigUint::from(E_LO.1).pow(b as u32);
    let rhs_lo = (BigUint::from(a) * BigUint::from(E_LO.0)).pow(b as u32);
    if lhs_lo <= rhs_lo {
        return Some(true);
    }
    // false with e_hi implies false with e
    let lhs_hi = c * BigUint::from(b).pow(b as u32) * BigUint::from(E_HI.1).pow(b as u32);
    let rhs_hi = (BigUint::from(a) * BigUint::from(E_HI.0)).pow(b as u32);
    if lhs_hi > rhs_hi {
        return Some(false);
    }
    None
}

fn le_magnitude(a: &Magnitude, b: &Magnitude) -> Option<bool> {
    match b.lt(a) {
        Some(true) => Some(false),
        Some(false) => Some(true),
        None => None,
    }
}

/// Evaluate the full counting certificate.
///
/// When `directions` is omitted the density-guided selection for `(m, d)` is used;
/// when `n` is omitted the theorem's grid side is derived from `epsilon`.
/// Directions with negative entries are reflected coordinatewise for line
/// counting (reflection maps the grid onto itself).
pub fn pigeonhole_certificate(
    m: usize,
    d: usize,
    epsilon: Epsilon,
    directions: Option<&DirectionSet>,
    n: Option<u64>,
    bit_cap: u64,
) -> Result<PigeonholeReport> {
    let owned;
    let dirs: &DirectionSet = match directions {
        Some(s) => {
            if s.len() != m {
                return Err(Error::InvalidParameter(format!(
                    "direction set has {} elements, expected m={m}",
                    s.len()
                )));
            }
            s
        }
        None => {
            owned = select_directions(m, d)?.set;
            &owned
        }
    };
    if dirs.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: dirs.dim(),
        });
    }
    let n = match n {
        Some(n) => {
            if n % 2 != 0 || n == 0 {
                return Err(Error::InvalidParameter("n must be even and positive".into()));
            }
            n
        }
        None => theorem_n(m as u64, d, epsilon)?,
    };
    let total = (n as u128).pow(d as u32);
    let k = total / 2;

    let line_counts: Vec<u128> = dirs
        .iter()
        .map(|s| count_lines_exact(&s.reflect_nonnegative(), n, d))
        .collect::<Result<_>>()?;
    let total_lines: u128 = line_counts.iter().sum();

    let profile_bound = profile_space_bound(k, &line_counts, bit_cap)?;
    let subsets = subset_count_magnitude(n, d, bit_cap)?;

    // overall chain endpoints: n^(2l) and 2^(n^d/2)
    let log2_n = (n as f64).log2();
    let chain_lhs = if 2.0 * total_lines as f64 * log2_n <= bit_cap as f64
        && 2 * total_lines <= u32::MAX as u128
    {
        Magnitude::Exact {
            value: BigUint::from(n).pow(2 * total_lines as u32),
        }
    } else {
        let l = 2.0 * total_lines as f64 * (log2_n - 1e-12);
        let h = 2.0 * total_lines as f64 * (log2_n + 1e-12);
        Magnitude::Log2 { lo: l, hi: h }
    };
    let chain_rhs = if k <= bit_cap as u128 {
        Magnitude::Exact {
            value: BigUint::one() << k as u64,
        }
    } else {
        Magnitude::Log2 {
            lo: k as f64,
            hi: k as f64,
        }
    };

    // per-direction chain links
    let n_pow_dm1 = (n as u128).pow(d as u32 - 1);
    let per_direction = dirs
        .iter()
        .zip(&line_counts)
        .map(|(s, &l)| {
            let weak = weak_comp_magnitude(k, l, bit_cap);
            let binom = binom_magnitude(k + l, l, bit_cap);
            DirectionChainLink {
                direction: s.coords().to_vec(),
                line_count: l,
                weak_le_binomial: le_magnitude(&weak, &binom),
                binomial_le_epow: binomial_le_epow(k + l, l, bit_cap),
                line_count_ge_n_pow: l >= n_pow_dm1,
                product_step_holds: n_pow_dm1 <= 2 * l,
            }
        })
        .collect();

    // e(n+1) <= n^2, decided by exact cross-multiplication with the bracket
    let ne = {
        let lhs_hi = (n as u128 + 1) * E_HI.0 as u128;
        let rhs_hi = (n as u128).pow(2) * E_HI.1 as u128;
        let lhs_lo = (n as u128 + 1) * E_LO.0 as u128;
        let rhs_lo = (n as u128).pow(2) * E_LO.1 as u128;
        if lhs_hi <= rhs_hi {
            Some(true)
        } else if lhs_lo > rhs_lo {
            Some(false)
        } else {
            None
        }
    };

    let chain = ChainReport {
        per_direction,
        n_ge_4: n >= 4,
        ne_plus_e_le_n_squared: ne,
        chain_comparison_holds: chain_lhs.lt(&chain_rhs),
    };

    let verdict = match profile_bound.lt(&subsets) {
        Some(true) => Verdict::GhostGuaranteed,
        Some(false) => Verdict::BoundFails,
        None => Verdict::Inconclusive,
    };

    Ok(PigeonholeReport {
        m,
        d,
        epsilon: (*epsilon.numer(), *epsilon.denom()),
        n,
        k,
        line_counts,
        total_lines,
        profile_bound,
        subset_count: subsets,
        chain_lhs,
        chain_rhs,
        chain,
        verdict,
    })
}

fn weak_comp_magnitude(k: u128, l: u128, bit_cap: u64) -> Magnitude {
    binom_magnitude(k + l - 1, l - 1, bit_cap)
}

fn binom_magnitude(a: u128, b: u128, bit_cap: u64) -> Magnitude {
    let (lo, hi) = log2_binomial_interval(a, b);
    if hi <= bit_cap as f64 {
        Magnitude::Exact {
            value: binomial(a, b),
        }
    } else {
        Magnitude::Log2 { lo, hi }
    }
}

/// One row of a threshold scan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanRow {
    pub m: usize,
    pub n: u64,
    pub total_lines: u128,
    pub log2_profile_bound: f64,
    pub log2_subset_count: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanTable {
    pub d: usize,
    pub epsilon: (u64, u64),
    pub rows: Vec<ScanRow>,
    /// Reported n never decreases as m grows.
    pub n_nondecreasing: bool,
}

/// Evaluate the certificate over a range of m, log-domain for large values.
pub fn guaranteed_threshold_scan(
    d: usize,
    epsilon: Epsilon,
    m_from: usize,
    m_to: usize,
    bit_cap: u64,
) -> Result<ScanTable> {
    if m_from < d || m_to < m_from {
        return Err(Error::InvalidParameter(format!(
            "need d <= m_from <= m_to, got d={d} m_from={m_from} m_to={m_to}"
        )));
    }
    let mut rows = Vec::with_capacity(m_to - m_from + 1);
    for m in m_from..=m_to {
        let report = pigeonhole_certificate(m, d, epsilon, None, None, bit_cap)?;
        let (_, profile_hi) = report.profile_bound.log2_interval();
        let (subset_lo, _) = report.subset_count.log2_interval();
        rows.push(ScanRow {
            m,
            n: report.n,
            total_lines: report.total_lines,
            log2_profile_bound: profile_hi,
            log2_subset_count: subset_lo,
            verdict: report.verdict,
        });
    }
    let n_nondecreasing = rows.windows(2).all(|w| w[0].n <= w[1].n);
    Ok(ScanTable {
        d,
        epsilon: (*epsilon.numer(), *epsilon.denom()),
        rows,
        n_nondecreasing,
    })
}
