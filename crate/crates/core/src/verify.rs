//! The full invariant grid. Each check returns an [`Outcome`]; [`run_all`]
//! collects them into a [`Report`] whose rendering depends only on the seed.

use std::collections::BTreeSet;
use std::f64::consts::LN_2;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{
    bounds_table, genus_ratio_check, thurston_interp, BoundParams, Provenance,
};
use crate::graph::{
    build_gamma_bar, count_paths, gamma_bar_girth_implicit, layered_path_bound, make_layered_graph,
    path_type_bound, verify_girth_lemma, DiGraph,
};
use crate::matrix::IntMatrix;
use crate::numtheory::{crt_power, jacobsthal, jacobsthal_bruteforce, min_k, nbar, seq_s, SeqVariant};
use crate::penner::{chain_system, dilatation, genus_two_example_word, Curve, CurveSystem, MappingClassWord, Side};
use crate::spectral::{pf_eigen, power_iteration, primitivity, row_sum_bracket, Primitivity};

/// Dilatation of the genus-two example word on the five-curve chain: the
/// largest root of `x^2 - 9x + 1`.
pub fn example_dilatation() -> f64 {
    (9.0 + 77f64.sqrt()) / 2.0
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    fn new(id: u8, name: &'static str, passed: bool, detail: String) -> Self {
        Outcome { id, name, passed, detail }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub seed: u64,
    pub outcomes: Vec<Outcome>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn render(&self) -> String {
        let mut out = format!("stretchlab verify-all seed={}\n", self.seed);
        for o in &self.outcomes {
            let tag = if o.passed { "PASS" } else { "FAIL" };
            writeln!(out, "[{tag}] {} {}: {}", o.id, o.name, o.detail).unwrap();
        }
        let ok = self.outcomes.iter().filter(|o| o.passed).count();
        writeln!(out, "summary: {ok}/{} passed", self.outcomes.len()).unwrap();
        out
    }
}

fn near(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

/// Coprime `(n, k)` with `3 <= n <= 12`, `n < k <= 40`.
pub fn gamma_grid() -> Vec<(u64, u64)> {
    (3..=12u64)
        .flat_map(|n| (n + 1..=40).filter(move |&k| n.gcd(&k) == 1).map(move |k| (n, k)))
        .collect()
}

fn random_primitive(rng: &mut ChaCha8Rng) -> IntMatrix {
    loop {
        let dim = rng.gen_range(1..=6);
        let rows: Vec<Vec<u64>> = (0..dim).map(|_| (0..dim).map(|_| rng.gen_range(0..=3)).collect()).collect();
        let a = IntMatrix::from_rows(rows).expect("square");
        if primitivity(&a) == Primitivity::Primitive {
            return a;
        }
    }
}

/// Power-iteration estimates of random primitive matrices lie inside the
/// row-sum brackets of `A^k`, `k = 1, 2, 4, 8`.
pub fn rowsum_bracket(seed: u64, samples: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mats: Vec<IntMatrix> = (0..samples).map(|_| random_primitive(&mut rng)).collect();
    let tol = 1e-12;
    let failures: Vec<usize> = mats
        .par_iter()
        .enumerate()
        .filter(|(_, a)| {
            let Ok(raw) = power_iteration::<f64>(a, tol) else { return true };
            let Ok(clamped) = pf_eigen::<f64>(a, tol) else { return true };
            let slack = tol * raw.estimate.max(1.0);
            ![1, 2, 4, 8].iter().all(|&k| {
                let b = row_sum_bracket::<f64>(a, k);
                b.lower - slack <= raw.estimate && raw.estimate <= b.upper + slack && b.contains(clamped.estimate)
            })
        })
        .map(|(i, _)| i)
        .collect();
    Outcome::new(
        1,
        "row-sum bracket",
        failures.is_empty(),
        format!(
            "{samples} primitive matrices, {} outside a bracket{}",
            failures.len(),
            first(&failures.iter().map(|i| format!("sample {i}")).collect::<Vec<_>>())
        ),
    )
}

fn zero_one_matrix(dim: usize, bits: u32) -> IntMatrix {
    let rows = (0..dim).map(|i| (0..dim).map(|j| ((bits >> (i * dim + j)) & 1) as u64).collect::<Vec<_>>());
    IntMatrix::from_rows(rows).expect("square")
}

/// `count_paths` against row sums of `A^L`, every 0/1 matrix of dimension
/// at most `max_dim`, `L <= max_len`.
pub fn path_count_identity(max_dim: usize, max_len: usize) -> Outcome {
    let mut checked = 0u64;
    let mut mismatches = 0u64;
    for dim in 1..=max_dim {
        let total = 1u32 << (dim * dim);
        let (c, m) = (0..total)
            .into_par_iter()
            .map(|bits| {
                let a = zero_one_matrix(dim, bits);
                let g = DiGraph::from_matrix(&a).expect("small entries");
                let mut bad = 0u64;
                let mut power = IntMatrix::identity(dim);
                for len in 0..=max_len {
                    let sums = power.row_sums();
                    bad += (0..dim).filter(|&v| count_paths(&g, v, len) != sums[v]).count() as u64;
                    power = &power * &a;
                }
                (1u64, bad)
            })
            .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
        checked += c;
        mismatches += m;
    }
    Outcome::new(
        2,
        "path-count identity",
        mismatches == 0,
        format!("{checked} matrices, lengths 0..={max_len}, {mismatches} mismatches"),
    )
}

fn two_curve_system() -> CurveSystem {
    let curves = vec![
        Curve { label: "a".into(), side: Side::Alpha },
        Curve { label: "b".into(), side: Side::Beta },
    ];
    CurveSystem::new(curves, vec![vec![0, 1], vec![1, 0]]).expect("well formed")
}

/// Two-curve word, the genus-two example and its rotations.
pub fn penner_engine() -> Outcome {
    let mut problems = Vec::new();
    let golden = (3.0 + 5f64.sqrt()) / 2.0;
    let w = MappingClassWord::new().twist("a", 1).twist("b", -1);
    match dilatation::<f64>(&two_curve_system(), &w, 1e-12) {
        Ok(b) if near(b.estimate, golden, 1e-10) => {}
        Ok(b) => problems.push(format!("two-curve word gave {:.15}", b.estimate)),
        Err(e) => problems.push(format!("two-curve word: {e}")),
    }
    let sys = chain_system(2);
    let word = genus_two_example_word();
    let mut lambdas = Vec::new();
    for r in 0..word.len() {
        match dilatation::<f64>(&sys, &word.rotated(r), 1e-12) {
            Ok(b) => lambdas.push(b.estimate),
            Err(e) => problems.push(format!("rotation {r}: {e}")),
        }
    }
    let base = lambdas.first().copied().unwrap_or(f64::NAN);
    if !(base > 1.0) {
        problems.push(format!("example dilatation {base} not above 1"));
    }
    if !near(base, example_dilatation(), 1e-9) {
        problems.push(format!("example dilatation {base:.15} differs from oracle"));
    }
    let spread = lambdas.iter().map(|&l| (l - base).abs()).fold(0.0, f64::max);
    if !(spread <= 1e-9 * base.max(1.0)) {
        problems.push(format!("rotation spread {spread:e}"));
    }
    let passed = problems.is_empty();
    let detail = if passed {
        format!("golden ratio squared reproduced; example lambda {base:.12} stable over {} rotations", lambdas.len())
    } else {
        problems.join("; ")
    };
    Outcome::new(3, "Penner engine", passed, detail)
}

fn enumerate_paths(g: &DiGraph, v: usize, len: usize) -> u64 {
    if len == 0 {
        return 1;
    }
    g.successors(v).iter().map(|&(u, m)| m * enumerate_paths(g, u, len - 1)).sum()
}

/// Seeded layered graphs, `k` in `5..=12`, `D` in `1..=3`.
pub fn layered_bound(seed: u64, per_cell: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<(usize, u64, u64)> = (5..=12)
        .flat_map(|k| (1..=3).map(move |d| (k, d)))
        .flat_map(|(k, d)| std::iter::repeat_n((k, d), per_cell))
        .map(|(k, d)| (k, d, rng.gen()))
        .collect();
    let failures: Vec<String> = cases
        .par_iter()
        .filter_map(|&(k, d, s)| {
            let (g, p) = make_layered_graph(k, d, s);
            let b = match layered_path_bound::<f64>(&g, &p) {
                Ok(b) => b,
                Err(r) => return Some(format!("k={k} D={d} seed={s}: {} hypothesis violations", r.violations.len())),
            };
            let exhaustive = (0..g.vertex_count()).map(|v| enumerate_paths(&g, v, k - 1)).max().unwrap();
            let ok = b.max_count == BigUint::from(exhaustive) && b.bound_holds && b.spectral_certified;
            (!ok).then(|| format!("k={k} D={d} seed={s}: max {exhaustive}, bound {}", b.bound))
        })
        .collect();
    Outcome::new(
        4,
        "layered path bound",
        failures.is_empty(),
        format!("{} graphs, {} failures{}", cases.len(), failures.len(), first(&failures)),
    )
}

fn first(items: &[String]) -> String {
    items.first().map(|s| format!(" (first: {s})")).unwrap_or_default()
}

/// Girth of Γ̄ exceeds `nk/7` on the grid; exact value at `(3, 4)`.
pub fn girth_lemma() -> Outcome {
    let grid = gamma_grid();
    let reports: Vec<_> = grid
        .par_iter()
        .map(|&(n, k)| {
            let r = verify_girth_lemma(n, k).expect("valid grid");
            let implicit = gamma_bar_girth_implicit(n, k).expect("valid grid");
            let invariants = build_gamma_bar(n, k).expect("valid grid").check_invariants();
            (r, implicit, invariants)
        })
        .collect();
    let mut failures = Vec::new();
    for (r, implicit, inv) in &reports {
        if !r.holds || *implicit != r.girth || !inv.is_empty() {
            failures.push(format!("({},{}) girth {} implicit {implicit} {:?}", r.n, r.k, r.girth, inv));
        }
    }
    let small = verify_girth_lemma(3, 4).expect("valid").girth;
    if small != 3 {
        failures.push(format!("girth(3,4) = {small}"));
    }
    let matched = reports.iter().filter(|(r, _, _)| r.matches_prediction()).count();
    let min_ratio = reports
        .iter()
        .map(|(r, _, _)| (7 * r.girth) as f64 / (r.n * r.k) as f64)
        .fold(f64::INFINITY, f64::min);
    Outcome::new(
        5,
        "girth lemma",
        failures.is_empty(),
        format!(
            "{} pairs, girth(3,4)={small}, min 7*girth/nk = {min_ratio:.4}, prediction matched {matched}/{}{}",
            grid.len(),
            grid.len(),
            first(&failures)
        ),
    )
}

/// Weighted path counts of length `⌈nk/7⌉` stay below `326 D^5`.
pub fn path_type_lemma() -> Outcome {
    let cells: Vec<(u64, u64, u64)> =
        gamma_grid().into_iter().flat_map(|(n, k)| (1..=3).map(move |d| (n, k, d))).collect();
    let failures: Vec<String> = cells
        .par_iter()
        .filter_map(|&(n, k, d)| {
            let r = path_type_bound(n, k, d).expect("valid grid");
            (!r.holds).then(|| format!("({n},{k}) D={d}: weighted {} unweighted {}", r.weighted_max, r.unweighted_max))
        })
        .collect();
    Outcome::new(
        6,
        "path-type lemma",
        failures.is_empty(),
        format!("{} (n, k, D) cells, {} failures{}", cells.len(), failures.len(), first(&failures)),
    )
}

/// Jacobsthal against brute force, `n̄` properties, CRT congruences.
pub fn number_theory() -> Outcome {
    let mut failures = Vec::new();
    for (n, j) in [(2, 2), (6, 4), (30, 6), (210, 10)] {
        if jacobsthal(n) != j {
            failures.push(format!("j({n}) = {}", jacobsthal(n)));
        }
    }
    let jac_bad = (1..=10_000u64)
        .into_par_iter()
        .filter(|&n| jacobsthal(n) != jacobsthal_bruteforce(n, n) || jacobsthal(n) > n)
        .count();
    if jac_bad > 0 {
        failures.push(format!("{jac_bad} Jacobsthal mismatches"));
    }
    let nbar_bad = (3..=100_000u64)
        .into_par_iter()
        .filter(|&n| {
            let b = nbar(n).expect("n >= 3");
            b.gcd(&n) != 1 || 6 * (b % n).min((n - b % n) % n) < n
        })
        .count();
    if nbar_bad > 0 {
        failures.push(format!("{nbar_bad} n-bar failures"));
    }
    let grid = gamma_grid();
    let crt_bad = grid
        .iter()
        .filter(|&&(n, k)| {
            let c = crt_power(n, k).expect("coprime");
            let (nb, kb) = (nbar(n).unwrap(), nbar(k).unwrap());
            !(1..=n * k).contains(&c) || c * n % k * kb % k != 1 || c * k % n * nb % n != 1 || c.gcd(&(n * k)) != 1
        })
        .count();
    if crt_bad > 0 {
        failures.push(format!("{crt_bad} CRT failures"));
    }
    Outcome::new(
        7,
        "number theory",
        failures.is_empty(),
        if failures.is_empty() {
            format!("Jacobsthal n <= 10000, n-bar n <= 100000, CRT on {} pairs", grid.len())
        } else {
            failures.join("; ")
        },
    )
}

/// Coprime-sequence ratios, genus ratios and the first-genus caps.
pub fn sequence_ratios() -> Outcome {
    let k = min_k::<f64>(2..=1000).k_star;
    let mut failures = Vec::new();
    let ratio_bad = (1..=1000u64)
        .into_par_iter()
        .filter(|&n| !(seq_s::<f64>(n, SeqVariant::FloorN, 101).ratio_bound < 3.0))
        .count();
    if ratio_bad > 0 {
        failures.push(format!("{ratio_bad} floor_n sequences with ratio >= 3"));
    }
    let ns: Vec<u64> = (3..=1000).collect();
    let lin = |variant| -> Vec<_> { ns.par_iter().map(|&n| genus_ratio_check(n, variant, 101, k)).collect() };
    let plain = lin(SeqVariant::FloorN);
    let logs = lin(SeqVariant::FloorLog2);
    let count = |v: &[crate::bounds::GenusRatio<f64>], f: fn(&crate::bounds::GenusRatio<f64>) -> bool| {
        v.iter().filter(|r| f(r)).count()
    };
    let (plain_ratio, log_ratio) = (count(&plain, |r| r.holds), count(&logs, |r| r.holds));
    let plain_stated = count(&plain, |r| r.g1_stated_holds());
    let plain_linear = count(&plain, |r| r.g1_linear_holds());
    let log_stated = count(&logs, |r| r.g1_stated_holds());
    let total = ns.len();
    if plain_ratio < total || log_ratio < total {
        failures.push(format!("genus ratio caps: floor_n {plain_ratio}/{total}, floor_log2 {log_ratio}/{total}"));
    }
    if plain_stated < total {
        failures.push(format!(
            "g1 <= 6n^2 holds for {plain_stated}/{total} (a1 = n+1 gives g1 = 6n^2+5n+1; g1 <= 6n*a1 holds for {plain_linear}/{total})"
        ));
    }
    if log_stated < total {
        failures.push(format!("g1 <= 6Kn ln(n)^2 holds for {log_stated}/{total}"));
    }
    Outcome::new(
        8,
        "sequence and genus ratios",
        failures.is_empty(),
        if failures.is_empty() {
            format!("n <= 1000, K = {k}")
        } else {
            format!("K = {k}; {}", failures.join("; "))
        },
    )
}

fn constant_over(values: impl Iterator<Item = f64>) -> bool {
    let v: Vec<f64> = values.collect();
    v.iter().all(|&x| near(x, v[0], 1e-12))
}

/// Table rows: exact `(2, 0)` value, `1/g` decay, ordering, Thurston grid.
pub fn bound_tables() -> Outcome {
    let params = BoundParams::<f64>::default();
    let mut rows = bounds_table(2..=3000, 0..=6, &params);
    rows.extend(bounds_table(144_000..=144_200, 200..=200, &params));
    let mut failures = Vec::new();
    if rows[0].lower != LN_2 / 12.0 {
        failures.push(format!("(2,0) lower = {}", rows[0].lower));
    }
    if let Some(r) = rows.iter().find(|r| r.upper.is_some_and(|u| u < r.lower)) {
        failures.push(format!("upper < lower at (g,n)=({},{})", r.g, r.n));
    }
    let ns: BTreeSet<u64> = rows.iter().map(|r| r.n).collect();
    let mut decay_groups = 0;
    for &n in &ns {
        let at_n = || rows.iter().filter(move |r| r.n == n);
        let mut groups = vec![at_n().map(|r| r.lower_b1 * r.g as f64).collect::<Vec<_>>()];
        groups.push(at_n().filter_map(|r| r.lower_uniform.map(|b| b * r.g as f64)).collect());
        for prov in [Provenance::Thm1, Provenance::Uniform] {
            groups.push(at_n().filter(|r| r.upper_provenance == prov).map(|r| r.upper.unwrap() * r.g as f64).collect());
        }
        for grp in groups.into_iter().filter(|g| !g.is_empty()) {
            decay_groups += 1;
            if !constant_over(grp.into_iter()) {
                failures.push(format!("1/g decay broken at n={n}"));
            }
        }
    }
    let thurston_ok = (2..=60u64)
        .flat_map(|g| (0..=60u64).map(move |r| (g, r)))
        .all(|(g, r)| thurston_interp(g, r) == Ok((2 * (g + r - 1), g + r)));
    if !thurston_ok {
        failures.push("Thurston interpolation mismatch".into());
    }
    Outcome::new(
        9,
        "bound tables",
        failures.is_empty(),
        format!("{} rows, {decay_groups} constant-product groups{}", rows.len(), first(&failures)),
    )
}

/// Every check at full size, deterministic in `seed`.
pub fn run_all(seed: u64) -> Report {
    Report {
        seed,
        outcomes: vec![
            rowsum_bracket(seed, 10_000),
            path_count_identity(4, 5),
            penner_engine(),
            layered_bound(seed, 42),
            girth_lemma(),
            path_type_lemma(),
            number_theory(),
            sequence_ratios(),
            bound_tables(),
        ],
    }
}
