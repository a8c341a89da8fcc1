use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::matrix::IntMatrix;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("edge multiplicity at ({0}, {1}) does not fit in 64 bits")]
    MultiplicityOverflow(usize, usize),
    #[error("n = {n} and k = {k} are not coprime")]
    NotCoprime { n: u64, k: u64 },
    #[error("parameter {name} = {value} is below its minimum {min}")]
    TooSmall { name: &'static str, value: u64, min: u64 },
}

/// Directed multigraph; `out[u]` lists `(v, multiplicity)` sorted by `v`,
/// with multiplicities positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiGraph {
    out: Vec<Vec<(usize, u64)>>,
}

impl DiGraph {
    pub fn new(vertex_count: usize) -> Self {
        DiGraph { out: vec![Vec::new(); vertex_count] }
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    /// Adds `mult` parallel edges `u -> v`.
    pub fn add_edge(&mut self, u: usize, v: usize, mult: u64) -> Result<(), GraphError> {
        let count = self.vertex_count();
        for vertex in [u, v] {
            if vertex >= count {
                return Err(GraphError::VertexOutOfRange { vertex, count });
            }
        }
        if mult == 0 {
            return Ok(());
        }
        let row = &mut self.out[u];
        match row.binary_search_by_key(&v, |&(t, _)| t) {
            Ok(pos) => row[pos].1 += mult,
            Err(pos) => row.insert(pos, (v, mult)),
        }
        Ok(())
    }

    /// Adjacency graph: `a[i][j]` parallel edges from `i` to `j`.
    pub fn from_matrix(a: &IntMatrix) -> Result<Self, GraphError> {
        let mut g = DiGraph::new(a.dim());
        for (i, row) in a.rows().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if !e.is_zero() {
                    let mult = e.to_u64().ok_or(GraphError::MultiplicityOverflow(i, j))?;
                    g.out[i].push((j, mult));
                }
            }
        }
        Ok(g)
    }

    pub fn to_matrix(&self) -> IntMatrix {
        let mut a = IntMatrix::zeros(self.vertex_count().max(1));
        for (u, row) in self.out.iter().enumerate() {
            for &(v, m) in row {
                a.set(u, v, BigUint::from(m));
            }
        }
        a
    }

    pub fn successors(&self, u: usize) -> &[(usize, u64)] {
        &self.out[u]
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u64 {
        self.out[u]
            .binary_search_by_key(&v, |&(t, _)| t)
            .map_or(0, |pos| self.out[u][pos].1)
    }

    /// Number of outgoing edges, counted with multiplicity.
    pub fn out_degree(&self, u: usize) -> u64 {
        self.out[u].iter().map(|&(_, m)| m).sum()
    }

    /// Total number of edges, counted with multiplicity.
    pub fn edge_count(&self) -> u64 {
        (0..self.vertex_count()).map(|u| self.out_degree(u)).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().map(move |&(v, m)| (u, v, m)))
    }

    pub fn is_strongly_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut rev = DiGraph::new(n);
        for (u, v, m) in self.edges() {
            rev.out[v].push((u, m));
        }
        reach_all(self, 0) && reach_all(&rev, 0)
    }
}

fn reach_all(g: &DiGraph, src: usize) -> bool {
    let mut seen = vec![false; g.vertex_count()];
    seen[src] = true;
    let mut stack = vec![src];
    while let Some(u) = stack.pop() {
        for &(v, _) in g.successors(u) {
            if !std::mem::replace(&mut seen[v], true) {
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Weighted walk counts of length `len` from every vertex: each edge `u -> v`
/// contributes `multiplicity * weight(u)`.
pub fn weighted_path_counts(g: &DiGraph, len: usize, weight: impl Fn(usize) -> u64) -> Vec<BigUint> {
    let n = g.vertex_count();
    let mut cur = vec![BigUint::from(1u8); n];
    for _ in 0..len {
        let next = (0..n)
            .map(|u| {
                let w = weight(u);
                g.successors(u).iter().fold(BigUint::zero(), |acc, &(v, m)| {
                    acc + &cur[v] * (m * w)
                })
            })
            .collect();
        cur = next;
    }
    cur
}

/// Number of directed paths (walks) of length `len` from every vertex,
/// counted with multiplicity: `Σ_j (A^len)_{v,j}`.
pub fn path_counts(g: &DiGraph, len: usize) -> Vec<BigUint> {
    weighted_path_counts(g, len, |_| 1)
}

pub fn count_paths(g: &DiGraph, v: usize, len: usize) -> BigUint {
    path_counts(g, len).swap_remove(v)
}

/// Vertex with the most paths of length `len` (smallest index on ties).
pub fn max_paths(g: &DiGraph, len: usize) -> Option<(usize, BigUint)> {
    let counts = path_counts(g, len);
    let best = counts.iter().max()?;
    let v = counts.iter().position(|c| c == best).unwrap();
    Some((v, best.clone()))
}

fn shortest_cycle_from(g: &DiGraph, s: usize) -> Option<usize> {
    let mut dist = vec![usize::MAX; g.vertex_count()];
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &(v, _) in g.successors(u) {
            if v == s {
                return Some(dist[u] + 1);
            }
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    None
}

/// Length of the shortest directed cycle; `None` for acyclic graphs.
/// Multiplicities are ignored. BFS from every vertex, run in parallel.
pub fn girth_directed(g: &DiGraph) -> Option<usize> {
    (0..g.vertex_count())
        .into_par_iter()
        .filter_map(|s| shortest_cycle_from(g, s))
        .min()
}

/// Shortest directed cycle through `start` in an implicit graph on
/// `vertex_count` vertices given by a successor function. Only a visited
/// bitset and the BFS frontiers are stored.
pub fn girth_through<S>(vertex_count: usize, start: usize, mut successors: S) -> Option<usize>
where
    S: FnMut(usize, &mut Vec<usize>),
{
    let mut visited = vec![0u64; vertex_count.div_ceil(64)];
    let mut mark = |v: usize| {
        let (w, b) = (v / 64, 1u64 << (v % 64));
        let fresh = visited[w] & b == 0;
        visited[w] |= b;
        fresh
    };
    mark(start);
    let mut frontier = vec![start];
    let mut next = Vec::new();
    let mut buf = Vec::new();
    let mut depth = 0;
    while !frontier.is_empty() {
        depth += 1;
        for &u in &frontier {
            buf.clear();
            successors(u, &mut buf);
            for &v in &buf {
                if v == start {
                    return Some(depth);
                }
                if mark(v) {
                    next.push(v);
                }
            }
        }
        std::mem::swap(&mut frontier, &mut next);
        next.clear();
    }
    None
}
