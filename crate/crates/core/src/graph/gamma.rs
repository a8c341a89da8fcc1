//! The quotient graph Γ̄_{n,k}: one vertex per residue pair `(i, j)` mod
//! `(n, k)`, a translation edge `(i, j) -> (i + c, j + c)` out of every vertex,
//! and four exceptional edges into `(c, c)`.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_integer::Integer;

use super::digraph::{girth_directed, girth_through, path_counts, weighted_path_counts, DiGraph, GraphError};
use crate::numtheory::{crt_power, nbar};

/// `Σ_j C(5, j) j!`: ordered selections from the five special vertices.
pub const PATH_TYPES: u64 = 326;

/// `Σ_{j=0}^{s} C(s, j) j!`
pub fn path_type_count(s: u64) -> u64 {
    let mut total = 0;
    let mut falling = 1; // s (s-1) ... (s-j+1) = C(s, j) j!
    for j in 0..=s {
        total += falling;
        falling *= s - j;
    }
    total
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaBar {
    pub n: u64,
    pub k: u64,
    pub c: u64,
    pub graph: DiGraph,
    /// `u_{0,0}, u_{0,1}, u_{0,-1}, u_{1,0}, u_{-1,0}`
    pub special: [usize; 5],
}

fn check_params(n: u64, k: u64) -> Result<(), GraphError> {
    if n < 3 {
        return Err(GraphError::TooSmall { name: "n", value: n, min: 3 });
    }
    if k < 3 {
        return Err(GraphError::TooSmall { name: "k", value: k, min: 3 });
    }
    if n.gcd(&k) != 1 {
        return Err(GraphError::NotCoprime { n, k });
    }
    Ok(())
}

fn index(n: u64, k: u64, i: i64, j: i64) -> usize {
    (i.rem_euclid(n as i64) as u64 * k + j.rem_euclid(k as i64) as u64) as usize
}

fn exceptional_sources(n: u64, k: u64) -> [usize; 4] {
    [index(n, k, 0, 1), index(n, k, 0, -1), index(n, k, 1, 0), index(n, k, -1, 0)]
}

fn generic_successor(n: u64, k: u64, c: u64, v: usize) -> usize {
    let (i, j) = (v as u64 / k, v as u64 % k);
    index(n, k, ((i + c) % n) as i64, ((j + c) % k) as i64)
}

pub fn build_gamma_bar(n: u64, k: u64) -> Result<GammaBar, GraphError> {
    check_params(n, k)?;
    let c = crt_power(n, k).expect("parameters already checked");
    let count = (n * k) as usize;
    let mut graph = DiGraph::new(count);
    for v in 0..count {
        graph.add_edge(v, generic_successor(n, k, c, v), 1)?;
    }
    let hub = index(n, k, c as i64, c as i64);
    let sources = exceptional_sources(n, k);
    for s in sources {
        graph.add_edge(s, hub, 1)?;
    }
    let special = [index(n, k, 0, 0), sources[0], sources[1], sources[2], sources[3]];
    Ok(GammaBar { n, k, c, graph, special })
}

impl GammaBar {
    pub fn vertex(&self, i: i64, j: i64) -> usize {
        index(self.n, self.k, i, j)
    }

    pub fn coords(&self, v: usize) -> (u64, u64) {
        (v as u64 / self.k, v as u64 % self.k)
    }

    /// `u_{c,c}`, target of all exceptional edges.
    pub fn hub(&self) -> usize {
        self.vertex(self.c as i64, self.c as i64)
    }

    pub fn generic_successor(&self, v: usize) -> usize {
        generic_successor(self.n, self.k, self.c, v)
    }

    /// Length of the orbit of `u_{0,0}` under the translation.
    pub fn generic_cycle_length(&self) -> usize {
        let start = self.special[0];
        let mut v = self.generic_successor(start);
        let mut len = 1;
        while v != start {
            v = self.generic_successor(v);
            len += 1;
        }
        len
    }

    /// Structural invariants; returns a description of each failure.
    pub fn check_invariants(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let nk = (self.n * self.k) as usize;
        if self.graph.vertex_count() != nk {
            problems.push(format!("{} vertices, expected {nk}", self.graph.vertex_count()));
        }
        if self.graph.edge_count() != nk as u64 + 4 {
            problems.push(format!("{} edges, expected {}", self.graph.edge_count(), nk + 4));
        }
        let distinct: std::collections::BTreeSet<usize> = self.special.iter().copied().collect();
        if distinct.len() != 5 {
            problems.push("special vertices are not distinct".into());
        }
        let sources = exceptional_sources(self.n, self.k);
        let hub = self.hub();
        for v in 0..self.graph.vertex_count() {
            let expected = if sources.contains(&v) { 2 } else { 1 };
            if self.graph.out_degree(v) != expected {
                problems.push(format!("vertex {v} has out-degree {}", self.graph.out_degree(v)));
            }
            if self.graph.multiplicity(v, self.generic_successor(v)) == 0 {
                problems.push(format!("vertex {v} lacks its translation edge"));
            }
        }
        for s in sources {
            if self.graph.multiplicity(s, hub) == 0 {
                problems.push(format!("exceptional edge {s} -> {hub} missing"));
            }
        }
        if self.generic_cycle_length() != nk {
            problems.push(format!("translation orbit has length {}", self.generic_cycle_length()));
        }
        problems
    }

    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph gamma_{}_{} {{\n", self.n, self.k);
        for v in 0..self.graph.vertex_count() {
            let (i, j) = self.coords(v);
            let shape = if self.special.contains(&v) { "box" } else { "ellipse" };
            writeln!(out, "  {v} [label=\"{i},{j}\" shape={shape}];").unwrap();
        }
        for (u, v, _) in self.graph.edges() {
            let style = if v == self.generic_successor(u) { "" } else { " [style=dashed]" };
            writeln!(out, "  {u} -> {v}{style};").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// Girth of Γ̄ without building it: every exceptional edge ends at the hub, so
/// a cycle avoiding the hub uses translation edges only, and those form a
/// single cycle of length `nk`. One BFS from the hub settles the rest.
pub fn gamma_bar_girth_implicit(n: u64, k: u64) -> Result<usize, GraphError> {
    check_params(n, k)?;
    let c = crt_power(n, k).expect("parameters already checked");
    let nk = (n * k) as usize;
    let hub = index(n, k, c as i64, c as i64);
    let sources = exceptional_sources(n, k);
    let through = girth_through(nk, hub, |v, out: &mut Vec<usize>| {
        out.push(generic_successor(n, k, c, v));
        if sources.contains(&v) {
            out.push(hub);
        }
    });
    Ok(through.map_or(nk, |g| g.min(nk)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GirthLemmaReport {
    pub n: u64,
    pub k: u64,
    pub c: u64,
    pub girth: usize,
    /// `7 girth > nk`
    pub holds: bool,
    /// `min(nk, n r1, n r2, k r3, k r4)` from the congruence cases.
    pub predicted: u64,
}

impl GirthLemmaReport {
    /// `nk / 7`
    pub fn threshold(&self) -> f64 {
        (self.n * self.k) as f64 / 7.0
    }

    pub fn matches_prediction(&self) -> bool {
        self.girth as u64 == self.predicted
    }
}

/// Smallest positive residues of `±k̄ mod k` and `±n̄ mod n` give the four
/// candidate cycle lengths through one exceptional edge.
pub fn predicted_girth(n: u64, k: u64) -> u64 {
    let (nb, kb) = (nbar(n).expect("n >= 3"), nbar(k).expect("k >= 3"));
    let pos = |r: u64, m: u64| if r.is_multiple_of(m) { m } else { r % m };
    [n * k, n * pos(kb, k), n * pos(k - kb % k, k), k * pos(nb, n), k * pos(n - nb % n, n)]
        .into_iter()
        .min()
        .unwrap()
}

pub fn verify_girth_lemma(n: u64, k: u64) -> Result<GirthLemmaReport, GraphError> {
    let gb = build_gamma_bar(n, k)?;
    let girth = girth_directed(&gb.graph).expect("translation cycle exists");
    Ok(GirthLemmaReport {
        n,
        k,
        c: gb.c,
        girth,
        holds: 7 * girth as u64 > n * k,
        predicted: predicted_girth(n, k),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathTypeReport {
    /// `⌈nk / 7⌉`
    pub length: usize,
    pub d: u64,
    pub unweighted_max: BigUint,
    /// Edges leaving a special vertex count `D` times.
    pub weighted_max: BigUint,
    /// `P D^5`
    pub bound: BigUint,
    pub holds: bool,
}

pub fn path_type_bound(n: u64, k: u64, d: u64) -> Result<PathTypeReport, GraphError> {
    if d < 1 {
        return Err(GraphError::TooSmall { name: "D", value: d, min: 1 });
    }
    let gb = build_gamma_bar(n, k)?;
    let length = (n * k).div_ceil(7) as usize;
    let unweighted_max = path_counts(&gb.graph, length).into_iter().max().unwrap();
    let special = gb.special;
    let weighted_max = weighted_path_counts(&gb.graph, length, |u| if special.contains(&u) { d } else { 1 })
        .into_iter()
        .max()
        .unwrap();
    let bound = BigUint::from(PATH_TYPES) * BigUint::from(d).pow(5);
    let holds = weighted_max <= bound && unweighted_max <= BigUint::from(32u8);
    Ok(PathTypeReport { length, d, unweighted_max, weighted_max, bound, holds })
}
