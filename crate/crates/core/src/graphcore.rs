//! Simple undirected graphs, Cayley graphs over indexed groups, quotients
//! and the lexicographic and direct products.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::group::FiniteGroup;
use crate::permgrp::{orbits_of, Perm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid Cayley set: {0}")]
    InvalidCayleySet(String),
    #[error("the identity cannot define a Cayley graph of this kind")]
    IdentityElement,
    #[error("the blocks do not partition the vertex set")]
    NotAPartition,
    #[error("the given set is not a subgroup")]
    NotASubgroup,
    #[error("the given subgroup is not normal")]
    NotNormal,
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
}

/// An undirected simple graph on `0..n`, stored as adjacency bitsets.
/// Equality compares adjacency only, not labels.
#[derive(Clone)]
pub struct Graph {
    rows: Vec<FixedBitSet>,
    labels: Option<Vec<usize>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
    }
}

impl Eq for Graph {}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n(), self.edge_count())
    }
}

impl Graph {
    /// The empty graph `K̄_n`.
    pub fn empty(n: usize) -> Self {
        Self {
            rows: vec![FixedBitSet::with_capacity(n); n],
            labels: None,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge_unchecked(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            g.add_edge_unchecked(u, (u + 1) % n);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 1..n {
            g.add_edge_unchecked(u - 1, u);
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.n();
        for x in [u, v] {
            if x >= n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(GraphError::Loop(u));
        }
        self.add_edge_unchecked(u, v);
        Ok(())
    }

    fn add_edge_unchecked(&mut self, u: usize, v: usize) {
        if u != v {
            self.rows[u].insert(v);
            self.rows[v].insert(u);
        }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn row(&self, u: usize) -> &FixedBitSet {
        &self.rows[u]
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[u].ones()
    }

    pub fn degree(&self, u: usize) -> usize {
        self.rows[u].count_ones(..)
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n() {
            out.extend(self.rows[u].ones().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    /// The common valency, if the graph is regular.
    pub fn regular_valency(&self) -> Option<usize> {
        let d = if self.n() == 0 { 0 } else { self.degree(0) };
        (0..self.n()).all(|u| self.degree(u) == d).then_some(d)
    }

    /// Group element indices carried by the vertices, when built from a group.
    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<usize>) -> Self {
        assert_eq!(labels.len(), self.n());
        self.labels = Some(labels);
        self
    }

    pub fn complement(&self) -> Self {
        let mut g = Self::empty(self.n());
        for u in 0..self.n() {
            for v in u + 1..self.n() {
                if !self.has_edge(u, v) {
                    g.add_edge_unchecked(u, v);
                }
            }
        }
        g
    }

    /// The graph with vertex `v` renamed to `perm(v)`.
    pub fn relabel(&self, perm: &Perm) -> Self {
        assert_eq!(perm.degree(), self.n());
        let mut g = Self::empty(self.n());
        for (u, v) in self.edges() {
            g.add_edge_unchecked(perm.apply(u), perm.apply(v));
        }
        g
    }

    /// Subgraph induced on `vertices`, renumbered in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let mut g = Self::empty(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge_unchecked(i, j);
                }
            }
        }
        g
    }

    /// Whether `perm` maps edges to edges (and hence non-edges to non-edges).
    pub fn is_automorphism(&self, perm: &Perm) -> bool {
        perm.degree() == self.n()
            && self
                .edges()
                .iter()
                .all(|&(u, v)| self.has_edge(perm.apply(u), perm.apply(v)))
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || connected_components(self).len() == 1
    }
}

/// A Cayley subset of an indexed group: identity-free and inverse-closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleySet {
    members: Vec<usize>,
}

impl CayleySet {
    pub fn new(group: &FiniteGroup, members: impl IntoIterator<Item = usize>) -> Result<Self, GraphError> {
        let set: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&x) = set.iter().find(|&&x| x >= group.order()) {
            return Err(GraphError::InvalidCayleySet(format!("element {x} is not in the group")));
        }
        if set.contains(&group.identity()) {
            return Err(GraphError::InvalidCayleySet("contains the identity".into()));
        }
        if let Some(&x) = set.iter().find(|&&x| !set.contains(&group.inv(x))) {
            return Err(GraphError::InvalidCayleySet(format!(
                "inverse of element {x} is missing"
            )));
        }
        Ok(Self {
            members: set.into_iter().collect(),
        })
    }

    /// Sorted element indices.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }
}

/// `Cay(G, S)`: `{x, y}` is an edge iff `y x^{-1} ∈ S`, so the neighbours
/// of `x` are the products `s x`.
pub fn cayley_graph(group: &FiniteGroup, s: &CayleySet) -> Graph {
    let n = group.order();
    let mut g = Graph::empty(n);
    for x in 0..n {
        for &el in s.members() {
            g.add_edge_unchecked(x, group.mul(el, x));
        }
    }
    g.with_labels((0..n).collect())
}

/// The Cayley set `g^H ∪ g^{-H}` where `H` is given by generators acting as
/// automorphisms (permutations of the element indices).
pub fn gamma_set(group: &FiniteGroup, h_generators: &[Perm], g: usize) -> Result<CayleySet, GraphError> {
    if g == group.identity() {
        return Err(GraphError::IdentityElement);
    }
    let orbit = orbits_of(group.order(), h_generators)
        .into_iter()
        .find(|o| o.contains(&g))
        .expect("every point lies in an orbit");
    let mut members = orbit.clone();
    members.extend(orbit.iter().map(|&x| group.inv(x)));
    CayleySet::new(group, members)
}

/// `Γ(G, H, g) = Cay(G, g^H ∪ g^{-H})`.
pub fn gamma_ghg(group: &FiniteGroup, h_generators: &[Perm], g: usize) -> Result<Graph, GraphError> {
    Ok(cayley_graph(group, &gamma_set(group, h_generators, g)?))
}

fn check_partition(n: usize, blocks: &[Vec<usize>]) -> Result<Vec<usize>, GraphError> {
    let mut owner = vec![usize::MAX; n];
    for (b, block) in blocks.iter().enumerate() {
        if block.is_empty() {
            return Err(GraphError::NotAPartition);
        }
        for &v in block {
            if v >= n || owner[v] != usize::MAX {
                return Err(GraphError::NotAPartition);
            }
            owner[v] = b;
        }
    }
    if owner.contains(&usize::MAX) {
        return Err(GraphError::NotAPartition);
    }
    Ok(owner)
}

/// Blocks are adjacent when some pair of their vertices is; never loops.
pub fn quotient_graph(graph: &Graph, blocks: &[Vec<usize>]) -> Result<Graph, GraphError> {
    let owner = check_partition(graph.n(), blocks)?;
    let mut q = Graph::empty(blocks.len());
    for (u, v) in graph.edges() {
        q.add_edge_unchecked(owner[u], owner[v]);
    }
    Ok(q)
}

/// `Σ[Δ]`: `(α1,β1) ~ (α2,β2)` iff `α1 ~ α2` in `Σ`, or `α1 = α2` and
/// `β1 ~ β2` in `Δ`. Vertex `(α, β)` has index `α·|VΔ| + β`.
pub fn lex_product(sigma: &Graph, delta: &Graph) -> Graph {
    let (ns, nd) = (sigma.n(), delta.n());
    let mut g = Graph::empty(ns * nd);
    for a1 in 0..ns {
        for (b1, b2) in delta.edges() {
            g.add_edge_unchecked(a1 * nd + b1, a1 * nd + b2);
        }
        for a2 in sigma.neighbors(a1) {
            for b1 in 0..nd {
                for b2 in 0..nd {
                    g.add_edge_unchecked(a1 * nd + b1, a2 * nd + b2);
                }
            }
        }
    }
    g
}

/// `Σ × Δ`: adjacent iff both coordinates are adjacent. Same indexing as
/// [`lex_product`].
pub fn direct_product(sigma: &Graph, delta: &Graph) -> Graph {
    let nd = delta.n();
    let mut g = Graph::empty(sigma.n() * nd);
    for (a1, a2) in sigma.edges() {
        for (b1, b2) in delta.edges() {
            g.add_edge_unchecked(a1 * nd + b1, a2 * nd + b2);
            g.add_edge_unchecked(a1 * nd + b2, a2 * nd + b1);
        }
    }
    g
}

/// Components, each sorted, listed by smallest vertex.
pub fn connected_components(graph: &Graph) -> Vec<Vec<usize>> {
    let n = graph.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut k = 0;
        while k < comp.len() {
            let u = comp[k];
            for v in graph.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Whether `S` is a union of cosets of the normal subgroup `M`, i.e. `SM = S`.
pub fn is_coset_union(group: &FiniteGroup, s: &CayleySet, m: &[usize]) -> Result<bool, GraphError> {
    if !group.is_subgroup(m) {
        return Err(GraphError::NotASubgroup);
    }
    if !group.is_normal_subgroup(m) {
        return Err(GraphError::NotNormal);
    }
    Ok(s
        .members()
        .iter()
        .all(|&x| m.iter().all(|&y| s.contains(group.mul(x, y)))))
}
