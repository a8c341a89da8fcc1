//! Perron-Frobenius spectral radius of non-negative integer matrices.
//!
//! Floating-point power iteration supplies the estimate and eigenvector;
//! every inequality reported in a [`SpectralBracket`] comes from exact
//! big-integer row sums of `A^k`, rounded outward when converted to `F`.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::matrix::{mat_pow, IntMatrix};
use crate::scalar::{big_ln, big_to_real, Real};

/// Hard cap on power-iteration steps.
pub const MAX_ITERATIONS: usize = 1_000_000;

/// Number of squarings used by [`pf_eigen`] to tighten its row-sum bracket
/// (brackets for `k = 1, 2, 4, 8`). Larger matrices only use `k = 1`.
pub const BRACKET_SQUARINGS: u32 = 3;
const BRACKET_SQUARING_MAX_DIM: usize = 128;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralBracket<F> {
    pub lower: F,
    pub upper: F,
    pub estimate: F,
    /// Perron eigenvector normalized to max entry 1; only for primitive input.
    pub eigenvector: Option<Vec<F>>,
    pub iterations: usize,
    /// Largest power `k` whose row sums certify the bracket.
    pub power: u64,
}

impl<F: Real> SpectralBracket<F> {
    pub fn contains(&self, x: F) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn width(&self) -> F {
        self.upper - self.lower
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("matrix is reducible: no directed path from vertex {from} to vertex {to}")]
    Reducible { from: usize, to: usize },
    #[error("matrix is irreducible but periodic: gcd of cycle lengths is {period}")]
    Periodic { period: u64 },
    #[error("adjacency graph has no directed cycle")]
    Acyclic,
    #[error("power iteration did not converge within {iterations} iterations")]
    NotConverged { iterations: usize },
    #[error("tolerance must be positive and finite")]
    InvalidTolerance,
}

/// Outcome of the graph-theoretic primitivity test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Primitivity {
    Primitive,
    /// Not strongly connected; `to` is unreachable from `from`.
    Reducible { from: usize, to: usize },
    /// Strongly connected with cycle-length gcd `period > 1`.
    Periodic { period: u64 },
    /// Single vertex without a loop.
    Acyclic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimitivityReport {
    pub verdict: Primitivity,
    /// Smallest `k <= max_power` with `A^k > 0`, from the dense cross-check.
    pub exponent: Option<u64>,
}

impl PrimitivityReport {
    pub fn is_primitive(&self) -> bool {
        self.verdict == Primitivity::Primitive
    }
}

fn adjacency(a: &IntMatrix) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let n = a.dim();
    let mut fwd = vec![Vec::new(); n];
    let mut rev = vec![Vec::new(); n];
    for (i, row) in a.rows().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if !e.is_zero() {
                fwd[i].push(j);
                rev[j].push(i);
            }
        }
    }
    (fwd, rev)
}

fn bfs_levels(adj: &[Vec<usize>], src: usize) -> Vec<Option<u64>> {
    let mut level = vec![None; adj.len()];
    level[src] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        let d = level[u].unwrap();
        for &v in &adj[u] {
            if level[v].is_none() {
                level[v] = Some(d + 1);
                queue.push_back(v);
            }
        }
    }
    level
}

/// Strong connectivity plus gcd of cycle lengths.
///
/// For a strongly connected graph with BFS levels `d`, the period equals
/// `gcd(d(u) + 1 - d(v))` over all edges `u -> v`.
pub fn primitivity(a: &IntMatrix) -> Primitivity {
    let (fwd, rev) = adjacency(a);
    let levels = bfs_levels(&fwd, 0);
    if let Some(to) = levels.iter().position(Option::is_none) {
        return Primitivity::Reducible { from: 0, to };
    }
    if let Some(from) = bfs_levels(&rev, 0).iter().position(Option::is_none) {
        return Primitivity::Reducible { from, to: 0 };
    }
    let mut period = 0u64;
    for (u, outs) in fwd.iter().enumerate() {
        for &v in outs {
            let du = levels[u].unwrap() as i64;
            let dv = levels[v].unwrap() as i64;
            period = period.gcd(&((du + 1 - dv).unsigned_abs()));
        }
    }
    match period {
        0 => Primitivity::Acyclic,
        1 => Primitivity::Primitive,
        p => Primitivity::Periodic { period: p },
    }
}

/// Smallest `k` in `1..=max_power` with every entry of `A^k` positive,
/// computed on the zero/nonzero pattern.
pub fn primitive_exponent(a: &IntMatrix, max_power: u64) -> Option<u64> {
    let n = a.dim();
    let base = a.support();
    let mut cur = base.clone();
    for k in 1..=max_power {
        if cur.iter().all(|&b| b) {
            return Some(k);
        }
        let mut next = vec![false; n * n];
        for i in 0..n {
            for l in 0..n {
                if cur[i * n + l] {
                    for j in 0..n {
                        next[i * n + j] |= base[l * n + j];
                    }
                }
            }
        }
        cur = next;
    }
    None
}

/// Wielandt's bound: a primitive `n x n` matrix has `A^k > 0` for
/// `k = (n-1)^2 + 1`.
pub fn wielandt_bound(dim: usize) -> u64 {
    let m = dim.saturating_sub(1) as u64;
    m * m + 1
}

pub fn is_primitive(a: &IntMatrix, max_power: u64) -> PrimitivityReport {
    let verdict = primitivity(a);
    let exponent = match verdict {
        Primitivity::Primitive if max_power > 0 => {
            primitive_exponent(a, max_power.min(wielandt_bound(a.dim())))
        }
        _ => None,
    };
    PrimitivityReport { verdict, exponent }
}

/// Certified real bounds on `x^(1/k)`.
fn root_bounds<F: Real>(x: &BigUint, k: u64) -> (F, F) {
    if x.is_zero() {
        return (F::zero(), F::zero());
    }
    let exact = |v: &BigUint| -> Option<F> {
        let u = v.to_u64()?;
        let f = F::from_u64(u)?;
        (f.to_u64() == Some(u)).then_some(f)
    };
    let int_root = match u32::try_from(k) {
        Ok(k32) => x.nth_root(k32),
        Err(_) => BigUint::one(),
    };
    if int_root.pow(k.min(u32::MAX as u64) as u32) == *x {
        if let Some(r) = exact(&int_root) {
            return (r, r);
        }
    }
    let ln = big_ln::<F>(x);
    let kf = F::from_u64(k).unwrap();
    let r = (ln / kf).exp();
    let slack = F::epsilon() * (F::lit(4.0) + F::lit(2.0) * ln.abs() / kf);
    let lo_int: F = big_to_real(&int_root);
    let hi_int: F = big_to_real(&(&int_root + 1u32));
    let lower = (r * (F::one() - slack)).max(lo_int * (F::one() - F::epsilon()));
    let upper = (r * (F::one() + slack)).min(hi_int * (F::one() + F::epsilon()));
    (lower, upper)
}

/// `((min_i R_i(A^k))^(1/k), (max_i R_i(A^k))^(1/k))` with `A^k` exact.
///
/// `k = 0` gives the trivial bracket `[0, max_i R_i(A)]`.
pub fn row_sum_bracket<F: Real>(a: &IntMatrix, k: u64) -> SpectralBracket<F> {
    if k == 0 {
        let mut b = row_sum_bracket::<F>(a, 1);
        b.lower = F::zero();
        b.estimate = b.upper / F::lit(2.0);
        b.power = 0;
        return b;
    }
    bracket_from_power(&mat_pow(a, k), k)
}

/// Bracket from an already computed `A^k`.
pub fn bracket_from_power<F: Real>(power: &IntMatrix, k: u64) -> SpectralBracket<F> {
    let sums = power.row_sums();
    let min = sums.iter().min().unwrap();
    let max = sums.iter().max().unwrap();
    let (lower, _) = root_bounds::<F>(min, k);
    let (_, upper) = root_bounds::<F>(max, k);
    SpectralBracket {
        lower,
        upper,
        estimate: (lower + upper) / F::lit(2.0),
        eigenvector: None,
        iterations: 0,
        power: k,
    }
}

/// Intersection of the row-sum brackets for `k = 1, 2, 4, ..., 2^squarings`.
pub fn doubling_bracket<F: Real>(a: &IntMatrix, squarings: u32) -> SpectralBracket<F> {
    let mut power = a.clone();
    let mut k = 1u64;
    let mut best = bracket_from_power::<F>(&power, k);
    for _ in 0..squarings {
        power = &power * &power;
        k *= 2;
        let b = bracket_from_power::<F>(&power, k);
        best.lower = best.lower.max(b.lower);
        best.upper = best.upper.min(b.upper);
        best.power = k;
    }
    best.estimate = (best.lower + best.upper) / F::lit(2.0);
    best
}

fn check_primitive(a: &IntMatrix) -> Result<(), SpectralError> {
    match primitivity(a) {
        Primitivity::Primitive => Ok(()),
        Primitivity::Reducible { from, to } => Err(SpectralError::Reducible { from, to }),
        Primitivity::Periodic { period } => Err(SpectralError::Periodic { period }),
        Primitivity::Acyclic => Err(SpectralError::Acyclic),
    }
}

/// Unclamped output of [`power_iteration`].
#[derive(Debug, Clone, PartialEq)]
pub struct PowerIteration<F> {
    pub estimate: F,
    pub eigenvector: Vec<F>,
    pub iterations: usize,
}

/// Power iteration from the all-ones vector, normalized to max entry 1.
/// Stops once successive Rayleigh quotients differ by less than
/// `tol * max(1, estimate)` and the Collatz-Wielandt ratios
/// `(Ax)_i / x_i` agree to the same relative tolerance.
pub fn power_iteration<F: Real>(a: &IntMatrix, tol: F) -> Result<PowerIteration<F>, SpectralError> {
    if !(tol > F::zero()) || !tol.is_finite() {
        return Err(SpectralError::InvalidTolerance);
    }
    check_primitive(a)?;
    let n = a.dim();
    let dense: Vec<F> = a.rows().flatten().map(big_to_real::<F>).collect();
    let gap_tol = tol.max(F::lit(64.0) * F::from_usize_lossy(n) * F::epsilon());

    let mut x = vec![F::one(); n];
    let mut y = vec![F::zero(); n];
    let mut prev = F::nan();
    for iter in 1..=MAX_ITERATIONS {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = dense[i * n..(i + 1) * n]
                .iter()
                .zip(&x)
                .fold(F::zero(), |acc, (&aij, &xj)| acc + aij * xj);
        }
        let xy = x.iter().zip(&y).fold(F::zero(), |acc, (&p, &q)| acc + p * q);
        let xx = x.iter().fold(F::zero(), |acc, &p| acc + p * p);
        let rq = xy / xx;
        let (cw_lo, cw_hi) = x.iter().zip(&y).fold((F::infinity(), F::zero()), |(lo, hi), (&p, &q)| {
            let r = q / p;
            (lo.min(r), hi.max(r))
        });
        let scale = F::one().max(rq.abs());
        let done = (rq - prev).abs() < tol * scale && cw_hi - cw_lo <= gap_tol * scale;
        prev = rq;
        let m = y.iter().fold(F::zero(), |acc, &v| acc.max(v));
        for (xi, &yi) in x.iter_mut().zip(&y) {
            *xi = yi / m;
        }
        if done {
            debug_assert!(x.iter().all(|&v| v > F::zero()));
            return Ok(PowerIteration { estimate: rq, eigenvector: x, iterations: iter });
        }
    }
    Err(SpectralError::NotConverged { iterations: MAX_ITERATIONS })
}

/// Perron-Frobenius eigenvalue of a primitive matrix: [`power_iteration`]
/// with the estimate clamped into the certified doubling bracket.
pub fn pf_eigen<F: Real>(a: &IntMatrix, tol: F) -> Result<SpectralBracket<F>, SpectralError> {
    let PowerIteration { estimate, eigenvector, iterations } = power_iteration(a, tol)?;
    let n = a.dim();
    let squarings = if n <= BRACKET_SQUARING_MAX_DIM { BRACKET_SQUARINGS } else { 0 };
    let bracket = doubling_bracket::<F>(a, squarings);
    Ok(SpectralBracket {
        estimate: estimate.max(bracket.lower).min(bracket.upper),
        eigenvector: Some(eigenvector),
        iterations,
        ..bracket
    })
}
