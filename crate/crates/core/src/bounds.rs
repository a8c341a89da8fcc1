//! Bounds on the minimal entropy `l_{g,n}`: Penner's lower bound, the two
//! constructed upper bounds with explicit constants, and genus bookkeeping.
//! All logarithms are natural.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::graph::PATH_TYPES;
use crate::numtheory::{genus_seq, seq_s, SeqVariant};
use crate::scalar::Real;

/// Coprime-interval constant: `min_k(2..=1000)` on the 0.25 grid.
pub const DEFAULT_K: f64 = 4.25;
/// Out-degree cap used when the caller gives none.
pub const DEFAULT_D: u64 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("genus {0} is below 2")]
    GenusTooSmall(u64),
    #[error("n = {0} is below 3")]
    PuncturesTooFew(u64),
    #[error("g = {g} is below the admissible threshold {threshold} for n = {n}")]
    NotAdmissible { g: u64, n: u64, threshold: String },
    #[error("B/g = {uniform} exceeds the Penner bound {penner} at g = {g}, n = {n}")]
    ChainViolated { g: u64, n: u64, uniform: String, penner: String },
}

fn r<F: Real>(x: u64) -> F {
    F::from_u64(x).unwrap()
}

fn ln2<F: Real>() -> F {
    F::lit(std::f64::consts::LN_2)
}

/// `ln 2 / (12g - 12 + 4n)`
pub fn penner_lower<F: Real>(g: u64, n: u64) -> Result<F, BoundError> {
    if g < 2 {
        return Err(BoundError::GenusTooSmall(g));
    }
    Ok(ln2::<F>() / r::<F>(12 * g - 12 + 4 * n))
}

/// `C n / g` with `C = 24 ln(4 D^4)`, for `g >= 17n + 1`.
pub fn thm1_upper<F: Real>(g: u64, n: u64, d: u64) -> Option<F> {
    (g > 17 * n).then(|| thm1_constant::<F>(d) * r::<F>(n) / r::<F>(g))
}

/// `24 ln(4 D^4)`
pub fn thm1_constant<F: Real>(d: u64) -> F {
    F::lit(24.0) * (F::lit(4.0) * r::<F>(d).powi(4)).ln()
}

/// `E = P D^5`
pub fn path_constant(d: u64) -> u64 {
    PATH_TYPES * d.pow(5)
}

/// `6 K n ln(n)^2`
pub fn uniform_threshold<F: Real>(n: u64, k: F) -> F {
    let l = r::<F>(n).ln();
    F::lit(6.0) * k * r::<F>(n) * l * l
}

/// `252 K ln(E) / g` for `n >= 3` and `g >= 6 K n ln(n)^2`.
pub fn uniform_upper<F: Real>(g: u64, n: u64, e: F, k: F) -> Option<F> {
    (n >= 3 && r::<F>(g) >= uniform_threshold(n, k)).then(|| F::lit(252.0) * k * e.ln() / r::<F>(g))
}

/// `B = ln 2 / (12 + 36 / C)`
pub fn b_constant<F: Real>(c: F) -> F {
    ln2::<F>() / (F::lit(12.0) + F::lit(36.0) / c)
}

/// `B_1(n) = ln 2 / (12 n)`, with `n = 0` read as `1`.
pub fn b1_constant<F: Real>(n: u64) -> F {
    ln2::<F>() / r::<F>(12 * n.max(1))
}

/// `B / g` on `g >= C n ln(n)^2`, checked against [`penner_lower`].
pub fn lower_uniform<F: Real>(g: u64, n: u64, c: F) -> Result<F, BoundError> {
    if n < 3 {
        return Err(BoundError::PuncturesTooFew(n));
    }
    let l = r::<F>(n).ln();
    let threshold = c * r::<F>(n) * l * l;
    if r::<F>(g) < threshold {
        return Err(BoundError::NotAdmissible { g, n, threshold: threshold.to_string() });
    }
    let uniform = b_constant(c) / r::<F>(g);
    let penner = penner_lower::<F>(g, n)?;
    if uniform > penner {
        return Err(BoundError::ChainViolated { g, n, uniform: uniform.to_string(), penner: penner.to_string() });
    }
    Ok(uniform)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct B2<F> {
    pub value: F,
    /// False unless all of `l_{1,n}, ..., l_{17n,n}` were supplied.
    pub complete: bool,
}

/// `max(C n, 17n l_{1,n}, ..., 17n l_{17n,n})`. Small-genus minima are
/// unknown in general, so the table is caller-supplied.
pub fn b2_constant<F: Real>(n: u64, c: F, table: Option<&[F]>) -> B2<F> {
    let scale = r::<F>(17 * n);
    let mut value = c * r::<F>(n);
    if let Some(t) = table {
        value = t.iter().fold(value, |m, &l| m.max(scale * l));
    }
    B2 { value, complete: table.is_some_and(|t| t.len() as u64 == 17 * n) }
}

/// Thurston norm and genus of `S + rF`: `(2(g + r - 1), g + r)`.
pub fn thurston_interp(g: u64, r: u64) -> Result<(u64, u64), BoundError> {
    if g < 2 {
        return Err(BoundError::GenusTooSmall(g));
    }
    Ok((2 * (g + r - 1), g + r))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenusRatio<F> {
    pub genera: Vec<u64>,
    pub max_ratio: F,
    /// 6 or 6K
    pub cap: F,
    pub holds: bool,
    pub g1: u64,
    /// `6 n a_1`
    pub g1_linear_cap: u64,
    /// `6n^2` or `6K n ln(n)^2`
    pub g1_stated_cap: F,
}

impl<F: Real> GenusRatio<F> {
    pub fn g1_linear_holds(&self) -> bool {
        self.g1 <= self.g1_linear_cap
    }

    pub fn g1_stated_holds(&self) -> bool {
        r::<F>(self.g1) <= self.g1_stated_cap
    }
}

/// Consecutive ratios of `g_i = n(6 a_i - 1) + 1` along the coprime sequence.
pub fn genus_ratio_check<F: Real>(n: u64, variant: SeqVariant, count: usize, k: F) -> GenusRatio<F> {
    let seq = seq_s::<F>(n, variant, count);
    let genera = genus_seq(n, &seq.terms);
    let max_ratio = genera
        .windows(2)
        .map(|w| r::<F>(w[1]) / r::<F>(w[0]))
        .fold(F::zero(), F::max);
    let nf = r::<F>(n);
    let (cap, g1_stated_cap) = match variant {
        SeqVariant::FloorN => (F::lit(6.0), F::lit(6.0) * nf * nf),
        SeqVariant::FloorLog2 => {
            let l = nf.ln();
            (F::lit(6.0) * k, F::lit(6.0) * k * nf * l * l)
        }
    };
    GenusRatio {
        max_ratio,
        cap,
        holds: max_ratio <= cap,
        g1: genera[0],
        g1_linear_cap: 6 * n * seq.terms[0],
        g1_stated_cap,
        genera,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Thm1,
    Uniform,
    None,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Thm1 => "thm1",
            Provenance::Uniform => "uniform",
            Provenance::None => "none",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams<F> {
    pub d: u64,
    pub k: F,
}

impl<F: Real> Default for BoundParams<F> {
    fn default() -> Self {
        BoundParams { d: DEFAULT_D, k: F::lit(DEFAULT_K) }
    }
}

impl<F: Real> BoundParams<F> {
    pub fn e(&self) -> F {
        r::<F>(path_constant(self.d))
    }

    /// `C = 6K`
    pub fn c(&self) -> F {
        F::lit(6.0) * self.k
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRecord<F> {
    pub n: u64,
    pub g: u64,
    pub lower: F,
    pub upper: Option<F>,
    pub upper_provenance: Provenance,
    /// `B_1(n) / g`
    pub lower_b1: F,
    /// `B / g` where admissible.
    pub lower_uniform: Option<F>,
    /// `ln(11) / g` on closed surfaces.
    pub reference_upper: Option<F>,
    pub constants_used: BTreeMap<&'static str, F>,
}

/// One row per `(n, g)` with `g >= 2`, sorted by `(n, g)`. The upper bound is
/// the smaller of the applicable constructions.
pub fn bounds_table<F: Real>(
    g_range: std::ops::RangeInclusive<u64>,
    n_range: std::ops::RangeInclusive<u64>,
    params: &BoundParams<F>,
) -> Vec<BoundRecord<F>> {
    let (e, c) = (params.e(), params.c());
    let constants: BTreeMap<&'static str, F> =
        [("D", r::<F>(params.d)), ("E", e), ("K", params.k), ("C", c)].into_iter().collect();
    let mut rows = Vec::new();
    for n in n_range {
        for g in g_range.clone().filter(|&g| g >= 2) {
            let candidates = [
                (n > 0).then(|| thm1_upper::<F>(g, n, params.d)).flatten().map(|u| (u, Provenance::Thm1)),
                uniform_upper(g, n, e, params.k).map(|u| (u, Provenance::Uniform)),
            ];
            let best = candidates.into_iter().flatten().min_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            rows.push(BoundRecord {
                n,
                g,
                lower: penner_lower(g, n).expect("g >= 2"),
                upper: best.map(|b| b.0),
                upper_provenance: best.map_or(Provenance::None, |b| b.1),
                lower_b1: b1_constant::<F>(n) / r::<F>(g),
                lower_uniform: lower_uniform(g, n, c).ok(),
                reference_upper: (n == 0).then(|| F::lit(11.0).ln() / r::<F>(g)),
                constants_used: constants.clone(),
            });
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn penner_values() {
        assert_eq!(penner_lower::<f64>(2, 0).unwrap(), LN_2 / 12.0);
        assert_eq!(penner_lower::<f64>(2, 4).unwrap(), LN_2 / 28.0);
        assert_eq!(penner_lower::<f64>(1_000_000, 0).unwrap(), LN_2 / 11_999_988.0);
        assert_eq!(penner_lower::<f64>(1, 0), Err(BoundError::GenusTooSmall(1)));
    }

    #[test]
    fn thm1_values() {
        let u = thm1_upper::<f64>(35, 2, 2).unwrap();
        assert!((u - 24.0 * 64f64.ln() * 2.0 / 35.0).abs() < 1e-14);
        assert_eq!(thm1_upper::<f64>(30, 2, 2), None);
        assert_eq!(thm1_upper::<f64>(5, 0, 2), Some(0.0));
    }

    #[test]
    fn uniform_values() {
        assert_eq!(path_constant(2), 10432);
        let t = uniform_threshold(3, 4.0f64);
        assert!((t - 86.9).abs() < 0.05, "{t}");
        let u = uniform_upper(100, 3, 10432.0f64, 4.0).unwrap();
        assert!((u - 252.0 * 4.0 * 10432f64.ln() / 100.0).abs() < 1e-12);
        assert_eq!(uniform_upper(86, 3, 10432.0f64, 4.0), None);
        assert_eq!(uniform_upper(10_000, 2, 10432.0f64, 4.0), None);
    }

    #[test]
    fn lower_uniform_chain() {
        assert!((b_constant(24.0f64) - LN_2 / 13.5).abs() < 1e-16);
        let b = lower_uniform(1000, 3, 24.0f64).unwrap();
        assert!(b <= penner_lower::<f64>(1000, 3).unwrap());
        let gmin = (24.0 * 3.0 * 3f64.ln().powi(2)).ceil() as u64;
        assert!(lower_uniform(gmin, 3, 24.0f64).is_ok());
        assert!(matches!(lower_uniform(gmin - 1, 3, 24.0f64), Err(BoundError::NotAdmissible { .. })));
        assert_eq!(lower_uniform(1000, 2, 24.0f64), Err(BoundError::PuncturesTooFew(2)));
    }

    #[test]
    fn b2_examples() {
        let c = 24.0 * 64f64.ln();
        let b = b2_constant(1, c, None);
        assert_eq!(b.value, c);
        assert!(!b.complete);
        let b = b2_constant(1, c, Some(&[0.0; 17]));
        assert_eq!(b.value, c);
        assert!(b.complete);
        let b = b2_constant(2, c, Some(&[1.0; 34]));
        assert_eq!(b.value, (2.0 * c).max(34.0));
    }

    #[test]
    fn thurston_values() {
        assert_eq!(thurston_interp(35, 1), Ok((70, 36)));
        assert_eq!(thurston_interp(7, 0), Ok((12, 7)));
        let (g, n) = (40, 5);
        assert!(thurston_interp(g, 6 * n).unwrap().1 < 2 * g);
        assert!(thurston_interp(1, 0).is_err());
    }

    #[test]
    fn genus_ratios() {
        let r = genus_ratio_check(3, SeqVariant::FloorN, 20, DEFAULT_K);
        assert!(r.holds && r.max_ratio <= 6.0);
        assert_eq!(r.g1, 70);
        assert!(r.g1_linear_holds());
        // a_1 = n + 1, so g_1 = 6n^2 + 5n + 1 exceeds 6n^2
        assert!(!r.g1_stated_holds());
        let g = genus_seq(1, &(3..50).collect::<Vec<_>>());
        assert!(g.windows(2).all(|w| w[1] as f64 / w[0] as f64 <= 35.0 / 18.0));
        let r = genus_ratio_check(1000, SeqVariant::FloorLog2, 100, DEFAULT_K);
        assert!(r.holds && r.g1_stated_holds());
    }

    #[test]
    fn table_shape() {
        let p = BoundParams::<f64>::default();
        let t = bounds_table(2..=10, 0..=0, &p);
        assert_eq!(t.len(), 9);
        assert_eq!(t[0].lower, LN_2 / 12.0);
        assert_eq!(t[0].reference_upper, Some(11f64.ln() / 2.0));
        assert_eq!(t[0].upper_provenance, Provenance::None);
        let (lo, hi) = (5, 4);
        assert!(bounds_table(lo..=hi, 0..=3, &p).is_empty());
        let t = bounds_table(2..=2000, 1..=4, &p);
        assert!(t.windows(2).all(|w| (w[0].n, w[0].g) < (w[1].n, w[1].g)));
        for row in &t {
            if let Some(u) = row.upper {
                assert!(u >= row.lower);
            }
        }
        let t = bounds_table(144_000..=144_010, 200..=200, &p);
        assert!(t.iter().all(|r| r.upper_provenance == Provenance::Uniform));
    }
}
