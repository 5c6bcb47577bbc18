//! Complete k-uniform and complete k-partite hypergraphs on `k·m` vertices.
//!
//! Vertices are the dense ids `0..k·m`. In the partite kind, part `i` is the
//! contiguous block `[i·m, (i+1)·m)`. Edges are sorted vertex tuples and the
//! canonical edge order is lexicographic on those tuples for both kinds:
//! uniform edges are ranked with the combinatorial number system, partite
//! edges as mixed-radix numbers with the part-0 position most significant.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::binomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    CompleteUniform,
    CompletePartite,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::CompleteUniform => "complete_uniform",
            Kind::CompletePartite => "complete_partite",
        }
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complete_uniform" | "uniform" => Ok(Kind::CompleteUniform),
            "complete_partite" | "partite" => Ok(Kind::CompletePartite),
            other => Err(Error::structural(format!("unknown hypergraph kind {other:?}"))),
        }
    }
}

/// Shape of a complete hypergraph: kind, edge size `k` and matching size `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HypergraphSpec {
    kind: Kind,
    k: usize,
    m: usize,
    edge_count: usize,
}

/// A sorted tuple of distinct vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge(Vec<usize>);

impl Edge {
    /// Builds an edge from vertex ids in any order; duplicates are rejected.
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::structural(format!("duplicate vertex in edge {vertices:?}")));
        }
        Ok(Edge(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }
}

impl From<Edge> for Vec<usize> {
    fn from(e: Edge) -> Self {
        e.0
    }
}

/// Result of [`HypergraphSpec::induced`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Induced {
    pub spec: HypergraphSpec,
    /// Order-preserving relabeling old id -> new id for every vertex of `U`.
    pub relabel: BTreeMap<usize, usize>,
}

impl HypergraphSpec {
    pub fn new(kind: Kind, k: usize, m: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::structural(format!("edge size k must be >= 2, got {k}")));
        }
        if m < 1 {
            return Err(Error::structural(format!("m must be >= 1, got {m}")));
        }
        let n = k
            .checked_mul(m)
            .ok_or_else(|| Error::structural("vertex count k*m overflows"))?;
        let count = match kind {
            Kind::CompleteUniform => binomial(n as u64, k as u64),
            Kind::CompletePartite => u32::try_from(k)
                .ok()
                .and_then(|k| (m as u128).checked_pow(k)),
        };
        let edge_count = count
            .and_then(|c| usize::try_from(c).ok())
            .ok_or_else(|| Error::structural(format!("edge count of {kind:?} k={k} m={m} overflows")))?;
        Ok(HypergraphSpec { kind, k, m, edge_count })
    }

    pub fn uniform(k: usize, m: usize) -> Result<Self> {
        Self::new(Kind::CompleteUniform, k, m)
    }

    pub fn partite(k: usize, m: usize) -> Result<Self> {
        Self::new(Kind::CompletePartite, k, m)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of vertices, `k·m`.
    pub fn n(&self) -> usize {
        self.k * self.m
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Part of `v` in the partite kind.
    pub fn part_of(&self, v: usize) -> usize {
        v / self.m
    }

    /// Number of edges through any single vertex: `C(km-1, k-1)` or `m^(k-1)`.
    pub fn vertex_degree(&self) -> usize {
        match self.kind {
            Kind::CompleteUniform => {
                binomial(self.n() as u64 - 1, self.k as u64 - 1).unwrap() as usize
            }
            Kind::CompletePartite => self.m.pow(self.k as u32 - 1),
        }
    }

    /// Checks that `edge` is an edge of this hypergraph.
    pub fn validate_edge(&self, edge: &Edge) -> Result<()> {
        let vs = edge.vertices();
        if vs.len() != self.k {
            return Err(Error::structural(format!(
                "edge {vs:?} has {} vertices, expected {}",
                vs.len(),
                self.k
            )));
        }
        if let Some(&v) = vs.iter().find(|&&v| v >= self.n()) {
            return Err(Error::structural(format!("vertex {v} out of range 0..{}", self.n())));
        }
        if self.kind == Kind::CompletePartite {
            for (i, &v) in vs.iter().enumerate() {
                if self.part_of(v) != i {
                    return Err(Error::structural(format!(
                        "edge {vs:?} does not take exactly one vertex from each part"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Canonical index of `edge`.
    pub fn edge_index(&self, edge: &Edge) -> Result<usize> {
        self.validate_edge(edge)?;
        Ok(self.rank_unchecked(edge.vertices()))
    }

    /// Rank of a validated, sorted vertex tuple.
    pub(crate) fn rank_unchecked(&self, vs: &[usize]) -> usize {
        match self.kind {
            Kind::CompleteUniform => {
                // lex rank = C(n,k) - 1 - Σ C(n-1-c_i, k-i)
                let n = self.n() as u64;
                let k = self.k as u64;
                let mut tail: u128 = 0;
                for (i, &c) in vs.iter().enumerate() {
                    tail += binomial(n - 1 - c as u64, k - i as u64).unwrap();
                }
                (self.edge_count as u128 - 1 - tail) as usize
            }
            Kind::CompletePartite => vs
                .iter()
                .enumerate()
                .fold(0usize, |acc, (i, &v)| acc * self.m + (v - i * self.m)),
        }
    }

    /// Edge with canonical index `i`.
    pub fn index_edge(&self, i: usize) -> Result<Edge> {
        if i >= self.edge_count {
            return Err(Error::structural(format!(
                "edge index {i} out of range 0..{}",
                self.edge_count
            )));
        }
        let vs = match self.kind {
            Kind::CompleteUniform => {
                let n = self.n() as u64;
                let k = self.k as u64;
                let mut rest = self.edge_count as u128 - 1 - i as u128;
                let mut out = Vec::with_capacity(self.k);
                // Greedy decomposition of the complement rank; x is searched
                // by bisection so each position costs O(log n).
                let mut hi = n; // exclusive bound on x for the next position
                for pos in 0..k {
                    let r = k - pos;
                    let (mut lo_x, mut hi_x) = (r - 1, hi - 1);
                    while lo_x < hi_x {
                        let mid = (lo_x + hi_x).div_ceil(2);
                        if binomial(mid, r).unwrap() <= rest {
                            lo_x = mid;
                        } else {
                            hi_x = mid - 1;
                        }
                    }
                    rest -= binomial(lo_x, r).unwrap();
                    out.push((n - 1 - lo_x) as usize);
                    hi = lo_x;
                }
                out
            }
            Kind::CompletePartite => {
                let mut out = vec![0; self.k];
                let mut rest = i;
                for pos in (0..self.k).rev() {
                    out[pos] = pos * self.m + rest % self.m;
                    rest /= self.m;
                }
                out
            }
        };
        Ok(Edge(vs))
    }

    /// All edges in canonical order.
    pub fn enumerate_edges(&self) -> EdgeIter {
        EdgeIter { spec: *self, next: Some(self.first_tuple()) }
    }

    fn first_tuple(&self) -> Vec<usize> {
        match self.kind {
            Kind::CompleteUniform => (0..self.k).collect(),
            Kind::CompletePartite => (0..self.k).map(|i| i * self.m).collect(),
        }
    }

    /// Lexicographic successor of a tuple, or `None` after the last edge.
    fn advance(&self, t: &mut [usize]) -> bool {
        let (k, n, m) = (self.k, self.n(), self.m);
        for pos in (0..k).rev() {
            let limit = match self.kind {
                Kind::CompleteUniform => n - k + pos,
                Kind::CompletePartite => pos * m + m - 1,
            };
            if t[pos] < limit {
                t[pos] += 1;
                for j in pos + 1..k {
                    t[j] = match self.kind {
                        Kind::CompleteUniform => t[j - 1] + 1,
                        Kind::CompletePartite => j * m,
                    };
                }
                return true;
            }
        }
        false
    }

    /// Indices of the edges containing `v`, ascending.
    pub fn incident_edges(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        assert!(v < self.n(), "vertex {v} out of range");
        let others: Vec<usize> = match self.kind {
            Kind::CompleteUniform => (0..self.n()).filter(|&u| u != v).collect(),
            Kind::CompletePartite => Vec::new(),
        };
        let part = self.part_of(v);
        let free = self.k - 1;
        let mut cursor: Option<Vec<usize>> = Some(match self.kind {
            Kind::CompleteUniform => (0..free).collect(),
            Kind::CompletePartite => vec![0; free],
        });
        std::iter::from_fn(move || {
            let cur = cursor.as_mut()?;
            let mut tuple: Vec<usize> = match self.kind {
                Kind::CompleteUniform => cur.iter().map(|&i| others[i]).collect(),
                Kind::CompletePartite => {
                    // cur holds positions 0..m for the k-1 other parts
                    let mut t = Vec::with_capacity(self.k);
                    let mut it = cur.iter();
                    for p in 0..self.k {
                        if p == part {
                            t.push(v);
                        } else {
                            t.push(p * self.m + it.next().unwrap());
                        }
                    }
                    t
                }
            };
            if self.kind == Kind::CompleteUniform {
                let at = tuple.partition_point(|&u| u < v);
                tuple.insert(at, v);
            }
            let idx = self.rank_unchecked(&tuple);
            let more = match self.kind {
                Kind::CompleteUniform => next_combination(cur, others.len()),
                Kind::CompletePartite => next_mixed_radix(cur, self.m),
            };
            if !more {
                cursor = None;
            }
            Some(idx)
        })
    }

    /// Spec of the hypergraph induced on `u`, plus the order-preserving relabeling.
    pub fn induced(&self, u: &BTreeSet<usize>) -> Result<Induced> {
        if let Some(&v) = u.iter().find(|&&v| v >= self.n()) {
            return Err(Error::structural(format!("vertex {v} out of range 0..{}", self.n())));
        }
        let l = match self.kind {
            Kind::CompleteUniform => {
                if u.is_empty() || !u.len().is_multiple_of(self.k) {
                    return Err(Error::structural(format!(
                        "|U| = {} is not a positive multiple of k = {}",
                        u.len(),
                        self.k
                    )));
                }
                u.len() / self.k
            }
            Kind::CompletePartite => {
                let mut per_part = vec![0usize; self.k];
                for &v in u {
                    per_part[self.part_of(v)] += 1;
                }
                let l = per_part[0];
                if l == 0 || per_part.iter().any(|&c| c != l) {
                    return Err(Error::structural(format!(
                        "U meets the parts in unequal or zero sizes {per_part:?}"
                    )));
                }
                l
            }
        };
        let spec = HypergraphSpec::new(self.kind, self.k, l)?;
        let relabel = match self.kind {
            Kind::CompleteUniform => u.iter().enumerate().map(|(i, &v)| (v, i)).collect(),
            Kind::CompletePartite => {
                let mut seen = vec![0usize; self.k];
                u.iter()
                    .map(|&v| {
                        let p = self.part_of(v);
                        let new = p * l + seen[p];
                        seen[p] += 1;
                        (v, new)
                    })
                    .collect()
            }
        };
        Ok(Induced { spec, relabel })
    }
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let r = c.len();
    for pos in (0..r).rev() {
        if c[pos] < n - r + pos {
            c[pos] += 1;
            for j in pos + 1..r {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn next_mixed_radix(c: &mut [usize], base: usize) -> bool {
    for pos in (0..c.len()).rev() {
        if c[pos] + 1 < base {
            c[pos] += 1;
            c[pos + 1..].iter_mut().for_each(|x| *x = 0);
            return true;
        }
    }
    false
}

/// Iterator over the edges of a spec in canonical order.
#[derive(Debug, Clone)]
pub struct EdgeIter {
    spec: HypergraphSpec,
    next: Option<Vec<usize>>,
}

impl Iterator for EdgeIter {
    type Item = Edge;

    fn next(&mut self) -> Option<Edge> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        if self.spec.advance(&mut succ) {
            self.next = Some(succ);
        }
        Some(Edge(cur))
    }
}

/// A subset of the edges of a complete hypergraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSublist {
    base: HypergraphSpec,
    members: BTreeSet<usize>,
}

/// Per-vertex degrees of an [`EdgeSublist`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Degrees {
    pub per_vertex: Vec<usize>,
    /// `Some(d)` when every vertex has degree `d`.
    pub regular: Option<usize>,
}

impl EdgeSublist {
    pub fn new(base: HypergraphSpec, members: BTreeSet<usize>) -> Result<Self> {
        if let Some(&i) = members.iter().find(|&&i| i >= base.edge_count()) {
            return Err(Error::structural(format!(
                "member index {i} out of range 0..{}",
                base.edge_count()
            )));
        }
        Ok(EdgeSublist { base, members })
    }

    pub fn full(base: HypergraphSpec) -> Self {
        EdgeSublist { base, members: (0..base.edge_count()).collect() }
    }

    pub fn empty(base: HypergraphSpec) -> Self {
        EdgeSublist { base, members: BTreeSet::new() }
    }

    pub fn from_edges<I: IntoIterator<Item = Edge>>(base: HypergraphSpec, edges: I) -> Result<Self> {
        let members = edges
            .into_iter()
            .map(|e| base.edge_index(&e))
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(EdgeSublist { base, members })
    }

    pub fn base(&self) -> &HypergraphSpec {
        &self.base
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.contains(&index)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Member edges in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.members.iter().map(|&i| self.base.index_edge(i).unwrap())
    }

    pub fn degrees(&self) -> Degrees {
        let mut per_vertex = vec![0usize; self.base.n()];
        for e in self.edges() {
            for &v in e.vertices() {
                per_vertex[v] += 1;
            }
        }
        let first = per_vertex[0];
        let regular = per_vertex.iter().all(|&d| d == first).then_some(first);
        Degrees { per_vertex, regular }
    }
}
