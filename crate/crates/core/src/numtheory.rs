//! Coprime residues: Jacobsthal's function, coprime intervals, `n̄`, the CRT
//! power used by Γ̄, and the coprime sequences that drive the genus families.

use num_integer::Integer;
use rayon::prelude::*;
use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumberError {
    #[error("n = {0} is below the minimum 3")]
    TooSmall(u64),
    #[error("{n} and {k} are not coprime")]
    NotCoprime { n: u64, k: u64 },
}

fn coprime(a: u64, n: u64) -> bool {
    a.gcd(&n) == 1
}

/// Smallest `j` such that every run of `j` consecutive integers contains one
/// coprime to `n`. Scans the gaps of one period.
pub fn jacobsthal(n: u64) -> u64 {
    assert!(n >= 1);
    if n == 1 {
        return 1;
    }
    let mut first = None;
    let mut last = 0;
    let mut gap = 0;
    for r in 1..n {
        if coprime(r, n) {
            match first {
                None => first = Some(r),
                Some(_) => gap = gap.max(r - last),
            }
            last = r;
        }
    }
    // wrap-around gap from the last residue to first + n
    gap.max(first.unwrap() + n - last)
}

/// Definition scan: for each start `s < window_limit`, walk forward to the
/// first integer coprime to `n`. Exact once `window_limit >= n`.
pub fn jacobsthal_bruteforce(n: u64, window_limit: u64) -> u64 {
    assert!(n >= 1);
    (0..window_limit.max(1))
        .into_par_iter()
        .map(|s| {
            let mut a = s;
            while !coprime(a, n) {
                a += 1;
            }
            a - s + 1
        })
        .max()
        .unwrap()
}

/// Returns `max j(n) / ln(n)^2` over `3..=max_n` and the per-n rows
/// `(n, j(n), ln(n)^2)`.
pub fn jacobsthal_fit<F: Real>(max_n: u64) -> (F, Vec<(u64, u64, F)>) {
    let rows: Vec<(u64, u64, F)> = (3..=max_n)
        .into_par_iter()
        .map(|n| {
            let l = F::from_u64(n).unwrap().ln();
            (n, jacobsthal(n), l * l)
        })
        .collect();
    let k = rows
        .iter()
        .map(|&(_, j, l2)| F::from_u64(j).unwrap() / l2)
        .fold(F::zero(), F::max);
    (k, rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalFailure<F> {
    pub m: u64,
    pub lo: F,
    pub hi: F,
}

/// Checks that `[L, K L)` and then each `[m K L, (m+1) K L)` for
/// `1 <= m <= m_max` contains an integer coprime to `n`, with `L = ln(n)^2`.
pub fn coprime_interval_check<F: Real>(n: u64, k: F, m_max: u64) -> Result<(), IntervalFailure<F>> {
    assert!(n >= 2 && k > F::zero());
    let ln = F::from_u64(n).unwrap().ln();
    let l = ln * ln;
    for m in 0..=m_max {
        let mf = F::from_u64(m).unwrap();
        let lo = if m == 0 { l } else { mf * k * l };
        let hi = (mf + F::one()) * k * l;
        let mut a = lo.ceil().to_u64().unwrap();
        let found = loop {
            if F::from_u64(a).unwrap() >= hi {
                break false;
            }
            if coprime(a, n) {
                break true;
            }
            a += 1;
        };
        if !found {
            return Err(IntervalFailure { m, lo, hi });
        }
    }
    Ok(())
}

pub const K_GRID_STEP: f64 = 0.25;
pub const K_GRID_MAX: f64 = 64.0;
pub const K_M_MAX: u64 = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct MinK<F> {
    /// Smallest grid value passing the check for every `n` in the range.
    pub k_star: F,
    /// Smallest passing grid value for each `n` alone.
    pub per_n: Vec<(u64, F)>,
}

fn grid<F: Real>() -> impl Iterator<Item = F> {
    let steps = (K_GRID_MAX / K_GRID_STEP) as u64;
    (1..=steps).map(|i| F::lit(i as f64 * K_GRID_STEP))
}

/// Empirical witness for the coprime-interval constant on a 0.25 grid.
/// Values that never pass up to 64 are reported as infinity.
pub fn min_k<F: Real>(ns: impl IntoIterator<Item = u64>) -> MinK<F> {
    let ns: Vec<u64> = ns.into_iter().collect();
    let passes = |n: u64, k: F| coprime_interval_check(n, k, K_M_MAX).is_ok();
    let per_n: Vec<(u64, F)> = ns
        .par_iter()
        .map(|&n| (n, grid::<F>().find(|&k| passes(n, k)).unwrap_or_else(F::infinity)))
        .collect();
    let start = per_n.iter().map(|p| p.1).fold(F::zero(), F::max);
    let k_star = grid::<F>()
        .filter(|&k| k >= start)
        .find(|&k| ns.par_iter().all(|&n| passes(n, k)))
        .unwrap_or_else(F::infinity);
    MinK { k_star, per_n }
}

/// `n̄`: `(n-1)/2`, `(n-2)/2` or `(n-4)/2` as `n` is odd, `0 mod 4`, `2 mod 4`.
pub fn nbar(n: u64) -> Result<u64, NumberError> {
    if n < 3 {
        return Err(NumberError::TooSmall(n));
    }
    Ok(match n % 4 {
        1 | 3 => (n - 1) / 2,
        0 => (n - 2) / 2,
        _ => (n - 4) / 2,
    })
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(m as i128) as u64)
}

/// The unique `1 <= c <= nk` with `c ≡ n⁻¹ k̄⁻¹ (mod k)` and
/// `c ≡ k⁻¹ n̄⁻¹ (mod n)`.
pub fn crt_power(n: u64, k: u64) -> Result<u64, NumberError> {
    let nb = nbar(n)?;
    let kb = nbar(k)?;
    if !coprime(n, k) {
        return Err(NumberError::NotCoprime { n, k });
    }
    let inv = |a, m| mod_inverse(a, m).expect("coprime residues are invertible");
    let ck = (inv(n % k, k) as u128 * inv(kb, k) as u128 % k as u128) as u64;
    let cn = (inv(k % n, n) as u128 * inv(nb, n) as u128 % n as u128) as u64;
    // c = cn + n t with n t ≡ ck - cn (mod k)
    let diff = (ck + k - cn % k) % k;
    let t = (diff as u128 * inv(n % k, k) as u128 % k as u128) as u64;
    let c = cn + n * t;
    Ok(if c == 0 { n * k } else { c })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeqVariant {
    /// `a >= n`
    FloorN,
    /// `a >= ln(n)^2`
    FloorLog2,
}

impl std::str::FromStr for SeqVariant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "floor_n" => Ok(SeqVariant::FloorN),
            "floor_log2" => Ok(SeqVariant::FloorLog2),
            _ => Err(format!("unknown variant {s:?} (expected floor_n or floor_log2)")),
        }
    }
}

/// Increasing integers coprime to `n` above a cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct CoprimeSequence<F> {
    pub n: u64,
    pub floor: F,
    pub terms: Vec<u64>,
    /// Largest consecutive ratio among the computed terms.
    pub ratio_bound: F,
}

impl<F: Real> CoprimeSequence<F> {
    pub fn ratios(&self) -> impl Iterator<Item = F> + '_ {
        self.terms
            .windows(2)
            .map(|w| F::from_u64(w[1]).unwrap() / F::from_u64(w[0]).unwrap())
    }
}

pub fn seq_s<F: Real>(n: u64, variant: SeqVariant, count: usize) -> CoprimeSequence<F> {
    assert!(n >= 1);
    let floor = match variant {
        SeqVariant::FloorN => F::from_u64(n).unwrap(),
        SeqVariant::FloorLog2 => {
            let l = F::from_u64(n).unwrap().ln();
            l * l
        }
    };
    let start = floor.ceil().to_u64().unwrap().max(1);
    let terms: Vec<u64> = (start..).filter(|&a| coprime(a, n)).take(count).collect();
    let mut seq = CoprimeSequence { n, floor, terms, ratio_bound: F::zero() };
    seq.ratio_bound = seq.ratios().fold(F::zero(), F::max);
    seq
}

/// `g = n(6a - 1) + 1` for each `a`.
pub fn genus_seq(n: u64, ks: &[u64]) -> Vec<u64> {
    ks.iter().map(|&a| n * (6 * a - 1) + 1).collect()
}
