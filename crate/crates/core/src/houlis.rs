//! Normal edge-transitive Cayley graphs on the abelian groups of order `pq`,
//! `p^2` and `p`: the subgroups `H(d2, d1, d) ≤ Z_p^* × Z_q^*`, their
//! parameter enumeration and the corresponding graphs.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::autiso::are_isomorphic;
use crate::graphcore::{cayley_graph, lex_product, CayleySet, Graph, GraphError};
use crate::group::FiniteGroup;
use crate::modarith::{gcd, is_prime, pow_mod, primitive_root};
use crate::netcayley::{construction2, GammaParams};
use crate::permgrp::Perm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HoulisError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

fn invalid(msg: impl Into<String>) -> HoulisError {
    HoulisError::InvalidParams(msg.into())
}

fn bad(msg: impl Into<String>) -> HoulisError {
    HoulisError::BadParameters(msg.into())
}

/// Smallest primitive root, as a plain integer (1 for the prime 2).
fn root(p: u64) -> u64 {
    primitive_root(p).expect("prime checked by caller").value()
}

/// The literal divisibility and parity conditions on `(d2, d1, d)`:
/// `d2 | q-1`, `d1 | p-1`, `0 <= d < d1`, `d1 d2 | d(q-1)`, `(q-1)/d2` even
/// when `q > 2` and `(p-1)/gcd(d, d1)` even when `p > 2`.
pub fn satisfies_printed_conditions(p: u64, q: u64, d2: u64, d1: u64, d: u64) -> bool {
    d2 > 0
        && d1 > 0
        && (q - 1) % d2 == 0
        && (p - 1) % d1 == 0
        && d < d1
        && (d * (q - 1)) % (d1 * d2) == 0
        && (q == 2 || ((q - 1) / d2) % 2 == 0)
        && (p == 2 || ((p - 1) / gcd(d, d1)) % 2 == 0)
}

/// Elements of `⟨(x^d, y^{d2}), (x^{d1}, 1)⟩ ≤ Z_p^* × Z_q^*`, sorted.
fn h_elements(p: u64, q: u64, d2: u64, d1: u64, d: u64) -> Vec<(u64, u64)> {
    let (x, y) = (root(p), root(q));
    let g1 = (pow_mod(x, d, p), pow_mod(y, d2, q));
    let g2 = (pow_mod(x, d1, p), 1 % q);
    let mut seen: BTreeSet<(u64, u64)> = BTreeSet::new();
    let start = (1 % p, 1 % q);
    seen.insert(start);
    let mut stack = vec![start];
    while let Some((a, b)) = stack.pop() {
        for (u, v) in [g1, g2] {
            let next = (a * u % p, b * v % q);
            if seen.insert(next) {
                stack.push(next);
            }
        }
    }
    seen.into_iter().collect()
}

/// Parameters `(p, q, d2, d1, d)` of `H(d2, d1, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianParams {
    p: u64,
    q: u64,
    d2: u64,
    d1: u64,
    d: u64,
}

impl AbelianParams {
    /// Accepts the triple when the printed conditions hold and `H` contains
    /// the inversion `(-1, -1)`, so that the connection set is a single
    /// `H`-orbit together with its negative.
    pub fn new(p: u64, q: u64, d2: u64, d1: u64, d: u64) -> Result<Self, HoulisError> {
        if !is_prime(p) || !is_prime(q) {
            return Err(invalid(format!("p = {p} and q = {q} must be prime")));
        }
        if !satisfies_printed_conditions(p, q, d2, d1, d) {
            return Err(invalid(format!(
                "(d2, d1, d) = ({d2}, {d1}, {d}) violates the conditions for (p, q) = ({p}, {q})"
            )));
        }
        let h = h_elements(p, q, d2, d1, d);
        if h.binary_search(&(p - 1, q - 1)).is_err() && !(p == 2 && q == 2) {
            return Err(invalid(format!(
                "H({d2}, {d1}, {d}) does not contain (-1, -1) for (p, q) = ({p}, {q})"
            )));
        }
        Ok(Self { p, q, d2, d1, d })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `(d2, d1, d)`.
    pub fn triple(&self) -> (u64, u64, u64) {
        (self.d2, self.d1, self.d)
    }

    /// `(p-1)(q-1) / (d1 d2)`.
    pub fn predicted_valency(&self) -> u64 {
        (self.p - 1) * (self.q - 1) / (self.d1 * self.d2)
    }
}

/// All valid triples for `(p, q)`, sorted as `(d2, d1, d)`.
pub fn valid_params(p: u64, q: u64) -> Result<Vec<AbelianParams>, HoulisError> {
    if !is_prime(p) || !is_prime(q) {
        return Err(bad(format!("p = {p} and q = {q} must be prime")));
    }
    let mut out = Vec::new();
    for d2 in (1..q.max(2)).filter(|d2| (q - 1) % d2 == 0) {
        for d1 in (1..p.max(2)).filter(|d1| (p - 1) % d1 == 0) {
            for d in 0..d1 {
                if let Ok(params) = AbelianParams::new(p, q, d2, d1, d) {
                    out.push(params);
                }
            }
        }
    }
    Ok(out)
}

/// Generators `((x^d, y^{d2}), (x^{d1}, 1))` of `H(d2, d1, d)`.
pub fn subgroup_h_abelian(params: AbelianParams) -> [(u64, u64); 2] {
    let AbelianParams { p, q, d2, d1, d } = params;
    let (x, y) = (root(p), root(q));
    [(pow_mod(x, d, p), pow_mod(y, d2, q)), (pow_mod(x, d1, p), 1 % q)]
}

/// The elements of `H(d2, d1, d)`, sorted.
pub fn subgroup_h_elements(params: AbelianParams) -> Vec<(u64, u64)> {
    let AbelianParams { p, q, d2, d1, d } = params;
    h_elements(p, q, d2, d1, d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AbelianKind {
    /// `Z_p × Z_q` with `p ≠ q`
    ZpZq,
    /// `Z_p × Z_p`
    ZpZp,
    /// `Z_{p^2}`
    Zp2,
    /// `Z_p`
    Zp,
}

/// An abelian group of one of the four shapes, written additively. Product
/// types index `(a, b)` as `a·(second factor size) + b`.
#[derive(Clone, Debug)]
pub struct AbelianGroupTable {
    kind: AbelianKind,
    p: u64,
    q: u64,
    group: FiniteGroup,
}

impl AbelianGroupTable {
    pub fn product(p: u64, q: u64) -> Self {
        let kind = if p == q { AbelianKind::ZpZp } else { AbelianKind::ZpZq };
        let qn = q as usize;
        let group = FiniteGroup::from_fn((p * q) as usize, |x, y| {
            let (a, b) = (x / qn + y / qn, x % qn + y % qn);
            (a % p as usize) * qn + b % qn
        });
        Self { kind, p, q, group }
    }

    pub fn cyclic_square(p: u64) -> Self {
        let n = (p * p) as usize;
        Self {
            kind: AbelianKind::Zp2,
            p,
            q: p,
            group: FiniteGroup::cyclic(n),
        }
    }

    pub fn cyclic(p: u64) -> Self {
        Self {
            kind: AbelianKind::Zp,
            p,
            q: 1,
            group: FiniteGroup::cyclic(p as usize),
        }
    }

    pub fn kind(&self) -> AbelianKind {
        self.kind
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn index(&self, a: u64, b: u64) -> usize {
        match self.kind {
            AbelianKind::ZpZq | AbelianKind::ZpZp => ((a % self.p) * self.q + b % self.q) as usize,
            AbelianKind::Zp2 => (a % (self.p * self.p)) as usize,
            AbelianKind::Zp => (a % self.p) as usize,
        }
    }

    /// All group automorphisms as permutations of the indices. For
    /// `Z_p × Z_p` this is `GL(2, p)`, so keep `p` small.
    pub fn automorphisms(&self) -> Vec<Perm> {
        let n = self.group.order();
        let perm = |f: &dyn Fn(usize) -> usize| Perm::from_images((0..n).map(f).collect()).unwrap();
        match self.kind {
            AbelianKind::ZpZq => {
                let (p, q) = (self.p as usize, self.q as usize);
                let mut out = Vec::new();
                for u in 1..p {
                    for v in 1..q.max(2) {
                        out.push(perm(&|x| (x / q * u % p) * q + x % q * v % q));
                    }
                }
                out
            }
            AbelianKind::ZpZp => {
                let p = self.p as usize;
                let mut out = Vec::new();
                for a in 0..p {
                    for b in 0..p {
                        for c in 0..p {
                            for d in 0..p {
                                if (a * d + p * p - b * c) % p == 0 {
                                    continue;
                                }
                                out.push(perm(&|x| {
                                    let (s, t) = (x / p, x % p);
                                    ((s * a + t * c) % p) * p + (s * b + t * d) % p
                                }));
                            }
                        }
                    }
                }
                out
            }
            AbelianKind::Zp2 | AbelianKind::Zp => (1..n)
                .filter(|&u| gcd(u as u64, n as u64) == 1)
                .map(|u| perm(&|x| x * u % n))
                .collect(),
        }
    }
}

/// The connection set `(1,1)^H ∪ (-1,-1)^H` for `H(d2, d1, d)`.
pub fn abelian_connection_set(params: AbelianParams) -> (AbelianGroupTable, CayleySet) {
    let table = AbelianGroupTable::product(params.p, params.q);
    let h = subgroup_h_elements(params);
    let mut members = Vec::with_capacity(2 * h.len());
    for &(u, v) in &h {
        members.push(table.index(u, v));
        members.push(table.index(params.p - u, params.q - v));
    }
    let set = CayleySet::new(table.group(), members).expect("orbit of (1,1) with its negative");
    (table, set)
}

/// `Γ(Z_p × Z_q, H(d2, d1, d), (1, 1))`.
pub fn gamma_abelian(params: AbelianParams) -> Graph {
    let (table, set) = abelian_connection_set(params);
    let graph = cayley_graph(table.group(), &set);
    debug_assert_eq!(graph.regular_valency(), Some(params.predicted_valency() as usize));
    graph
}

/// The same subgroup written with the factors swapped, `H' ≤ Z_q^* × Z_p^*`.
///
/// In exponents `H` is the lattice spanned by `(d, d2)` and `(d1, 0)`. Its
/// projection to the first factor is `c2 Z` with `c2 = gcd(d, d1)`, the
/// kernel of that projection is `c1 Z` with `c1 = d1 d2 / c2`, and `c` is
/// the second coordinate over `c2`, reduced mod `c1`: `c = a d2 mod c1`
/// for any `a` with `a d ≡ c2 (mod d1)`. For `d = 0` this is `(d1, d2, 0)`.
///
/// The result is checked to describe the same subgroup, and the coordinate
/// swap is checked to be an isomorphism of the two graphs.
pub fn reparametrize(params: AbelianParams) -> Result<AbelianParams, HoulisError> {
    let AbelianParams { p, q, d2, d1, d } = params;
    let c2 = gcd(d, d1);
    let c1 = d1 * d2 / c2;
    let a = (0..d1)
        .find(|a| (a * d) % d1 == c2 % d1)
        .expect("c2 is a multiple of gcd(d, d1)");
    let c = (a * d2) % c1;
    let swapped = AbelianParams::new(q, p, c2, c1, c)?;
    let original: BTreeSet<(u64, u64)> = subgroup_h_elements(params).into_iter().collect();
    let image: BTreeSet<(u64, u64)> = subgroup_h_elements(swapped)
        .into_iter()
        .map(|(a, b)| (b, a))
        .collect();
    if original != image {
        return Err(HoulisError::InternalInconsistency(format!(
            "({c2}, {c1}, {c}) for (q, p) = ({q}, {p}) describes a different subgroup"
        )));
    }
    let (pu, qu) = (p as usize, q as usize);
    let swap = Perm::from_images((0..pu * qu).map(|v| (v % qu) * pu + v / qu).collect())
        .expect("coordinate swap is a bijection");
    if gamma_abelian(params).relabel(&swap) != gamma_abelian(swapped) {
        return Err(HoulisError::InternalInconsistency(
            "the coordinate swap does not carry one graph onto the other".into(),
        ));
    }
    Ok(swapped)
}

/// For `q | ℓ`, the triple `((q-1)/2, (p-1)/ℓ, d)` with `d = 0` when `ℓ` is
/// even and `d = (p-1)/(2ℓ)` when `ℓ` is odd, checked against `Γ(pq, ℓ, 1)`.
pub fn qdividesl_params(p: u64, q: u64, ell: u64) -> Result<AbelianParams, HoulisError> {
    let gp = GammaParams::new(p, q, ell, 1).map_err(|e| bad(e.to_string()))?;
    if q == 2 || ell % q != 0 || ell >= p - 1 {
        return Err(bad(format!(
            "need an odd q dividing ell with ell < p - 1, got q = {q}, ell = {ell}"
        )));
    }
    let d = if ell % 2 == 0 { 0 } else { (p - 1) / (2 * ell) };
    let params = AbelianParams::new(p, q, (q - 1) / 2, (p - 1) / ell, d)?;
    let frob = construction2(gp).map_err(|e| HoulisError::InternalInconsistency(e.to_string()))?;
    if !are_isomorphic(&frob, &gamma_abelian(params)) {
        return Err(HoulisError::InternalInconsistency(format!(
            "Γ({},{ell},1) is not isomorphic to the abelian graph",
            p * q
        )));
    }
    Ok(params)
}

/// The circulant `Cay(Z_p, ⟨m^{(p-1)/ℓ}⟩)`.
pub fn gamma_prime(p: u64, ell: u64) -> Result<Graph, HoulisError> {
    if !is_prime(p) {
        return Err(bad(format!("p = {p} is not prime")));
    }
    if ell == 0 || (p - 1) % ell != 0 && !(p == 2 && ell == 1) {
        return Err(bad(format!("ell = {ell} must divide p - 1")));
    }
    if ell % 2 != 0 && p != 2 {
        return Err(bad(format!("ell = {ell} must be even")));
    }
    let table = AbelianGroupTable::cyclic(p);
    let gen = pow_mod(root(p), (p - 1) / ell.max(1), p);
    let members: Vec<usize> = (0..ell).map(|k| pow_mod(gen, k, p) as usize).collect();
    let set = CayleySet::new(table.group(), members)?;
    Ok(cayley_graph(table.group(), &set))
}

/// The three graph families on groups of order `p^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrimeSquareCase {
    /// `Γ(p, ℓ)[K̄_p]`, realized on `Z_p × Z_p`
    Lex,
    /// `Cay(Z_{p^2}, S)` with `S` the subgroup of order `ℓ` of `Z_{p^2}^*`
    Units,
    /// `Z_p × Z_p` with the diagonal subgroup `H(d2, d1, d)` (here `ℓ` is
    /// only validated, the triple fixes the graph)
    Diag(u64, u64, u64),
}

pub fn gamma_prime_square(p: u64, ell: u64, case: PrimeSquareCase) -> Result<Graph, HoulisError> {
    if !is_prime(p) {
        return Err(bad(format!("p = {p} is not prime")));
    }
    if ell == 0 || (p - 1) % ell != 0 || (p > 2 && ell % 2 != 0) {
        return Err(bad(format!("ell = {ell} must be an even divisor of p - 1")));
    }
    match case {
        PrimeSquareCase::Lex => {
            let table = AbelianGroupTable::product(p, p);
            let gen = pow_mod(root(p), (p - 1) / ell, p);
            let mut members = Vec::new();
            for k in 0..ell {
                let s = pow_mod(gen, k, p);
                for b in 0..p {
                    members.push(table.index(s, b));
                }
            }
            let graph = cayley_graph(table.group(), &CayleySet::new(table.group(), members)?);
            let expected = lex_product(&gamma_prime(p, ell)?, &Graph::empty(p as usize));
            if graph != expected {
                return Err(HoulisError::InternalInconsistency(
                    "Cayley graph on Z_p × Z_p differs from the lexicographic product".into(),
                ));
            }
            Ok(graph)
        }
        PrimeSquareCase::Units => {
            let n = p * p;
            let table = AbelianGroupTable::cyclic_square(p);
            let members: Vec<usize> = (1..n)
                .filter(|&u| gcd(u, n) == 1 && pow_mod(u, ell, n) == 1)
                .map(|u| u as usize)
                .collect();
            if members.len() as u64 != ell {
                return Err(HoulisError::InternalInconsistency(format!(
                    "Z_{n}^* has {} elements of order dividing {ell}",
                    members.len()
                )));
            }
            Ok(cayley_graph(table.group(), &CayleySet::new(table.group(), members)?))
        }
        PrimeSquareCase::Diag(d2, d1, d) => {
            let params = AbelianParams::new(p, p, d2, d1, d)?;
            Ok(gamma_abelian(params))
        }
    }
}
