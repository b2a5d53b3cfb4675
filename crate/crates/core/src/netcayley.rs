//! Normal edge-transitivity of Cayley graphs and the two constructions over
//! the Frobenius group `G_pq`.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::affine::{fixed_subgroup_x, AffineElement, AffineError, CyclicSubgroupH, GroupTable};
use crate::autiso::are_isomorphic;
use crate::graphcore::{cayley_graph, direct_product, gamma_set, lex_product, CayleySet, Graph, GraphError};
use crate::group::FiniteGroup;
use crate::modarith::{self, is_prime, Residue};
use crate::permgrp::{orbits_of, Perm, PermGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Affine(#[from] AffineError),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("the element lies in the translation subgroup, so the graph is disconnected")]
    DisconnectedInput,
    #[error("the normalized subgroup centralizes the element (the graph is p copies of C_q)")]
    CentralizingH,
}

fn bad(msg: impl Into<String>) -> NetError {
    NetError::BadParameters(msg.into())
}

/// Outcome of the normal edge-transitivity test for `Cay(G, S)`.
#[derive(Clone, Debug)]
pub struct NetVerdict {
    pub is_net: bool,
    /// An `Aut(G)_S`-orbit `T` with `S = T ∪ T^{-1}`, when `is_net`.
    pub witness_orbit: Option<Vec<usize>>,
    /// `Aut(G)_S` is transitive on `S`.
    pub is_arc_transitive: bool,
    /// `Aut(G)_S` as permutations of the group elements.
    pub aut_gs: PermGroup,
}

/// Builds a permutation group from a list of its elements, keeping only the
/// elements not already generated.
pub(crate) fn group_from_elements(degree: usize, elements: impl IntoIterator<Item = Perm>) -> PermGroup {
    let mut group = PermGroup::trivial(degree);
    let mut gens: Vec<Perm> = Vec::new();
    for g in elements {
        if !group.contains(&g) {
            gens.push(g);
            group = PermGroup::new(degree, gens.clone()).expect("degree matches");
        }
    }
    group
}

/// Greedy generating set: each element not yet generated is added.
fn generating_set(group: &FiniteGroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut generated: HashSet<usize> = HashSet::from([group.identity()]);
    for g in 0..group.order() {
        if !generated.contains(&g) {
            gens.push(g);
            generated = group.generated_subgroup(&gens).into_iter().collect();
        }
    }
    gens
}

fn fixes_set(sigma: &Perm, set: &BTreeSet<usize>) -> bool {
    set.iter().all(|&x| set.contains(&sigma.apply(x)))
}

/// `Aut(G)_S` from a complete list of the automorphisms of `G`.
pub fn aut_fixing_set(group: &FiniteGroup, automorphisms: &[Perm], s: &CayleySet) -> PermGroup {
    let set: BTreeSet<usize> = s.members().iter().copied().collect();
    group_from_elements(
        group.order(),
        automorphisms.iter().filter(|a| fixes_set(a, &set)).cloned(),
    )
}

/// `aut_G_fixing_S` for the Frobenius group.
pub fn aut_g_fixing_s(table: &GroupTable, s: &CayleySet) -> PermGroup {
    let autos: Vec<Perm> = table.all_automorphisms().into_iter().map(|(_, p)| p).collect();
    aut_fixing_set(table.group(), &autos, s)
}

/// Number of orbits of the group generated by `gens` (acting on vertices) on
/// the edges, or on the arcs when `arcs` is set.
fn edge_orbit_count(graph: &Graph, gens: &[Perm], arcs: bool) -> usize {
    let key = |u: usize, v: usize| if arcs { (u, v) } else { (u.min(v), u.max(v)) };
    let mut all: Vec<(usize, usize)> = graph.edges();
    if arcs {
        let rev: Vec<(usize, usize)> = all.iter().map(|&(u, v)| (v, u)).collect();
        all.extend(rev);
    }
    let mut seen: HashSet<(usize, usize)> = HashSet::with_capacity(all.len());
    let mut orbits = 0;
    for &start in &all {
        if seen.contains(&start) {
            continue;
        }
        orbits += 1;
        seen.insert(start);
        let mut stack = vec![start];
        while let Some((u, v)) = stack.pop() {
            for g in gens {
                let e = key(g.apply(u), g.apply(v));
                if seen.insert(e) {
                    stack.push(e);
                }
            }
        }
    }
    orbits
}

/// Normal edge-transitivity of `Cay(G, S)` given all automorphisms of `G`.
///
/// The verdict from the orbit criterion (`S = T ∪ T^{-1}` for an
/// `Aut(G)_S`-orbit `T`) is checked against the number of orbits of
/// `ρ(G)·Aut(G)_S` on edges and arcs of the graph.
pub fn net_verdict(group: &FiniteGroup, automorphisms: &[Perm], s: &CayleySet) -> Result<NetVerdict, NetError> {
    if s.is_empty() {
        return Err(GraphError::InvalidCayleySet("empty set".into()).into());
    }
    let aut_gs = aut_fixing_set(group, automorphisms, s);
    let orbits = orbits_of(group.order(), aut_gs.generators());
    let member: BTreeSet<usize> = s.members().iter().copied().collect();
    let s_orbits: Vec<&Vec<usize>> = orbits.iter().filter(|o| member.contains(&o[0])).collect();
    let witness = s_orbits.iter().find(|o| {
        let mut union: BTreeSet<usize> = o.iter().copied().collect();
        union.extend(o.iter().map(|&x| group.inv(x)));
        union == member
    });
    let is_net = witness.is_some();
    let is_arc = s_orbits.len() == 1;

    let graph = cayley_graph(group, s);
    let mut gens: Vec<Perm> = generating_set(group).into_iter().map(|g| group.right_regular(g)).collect();
    gens.extend(aut_gs.generators().iter().cloned());
    let edge_orbits = edge_orbit_count(&graph, &gens, false);
    let arc_orbits = edge_orbit_count(&graph, &gens, true);
    if (edge_orbits == 1) != is_net || (arc_orbits == 1) != is_arc {
        return Err(NetError::InternalInconsistency(format!(
            "orbit criterion says net={is_net}, arc={is_arc}; ρ(G)Aut(G)_S has {edge_orbits} edge orbits and {arc_orbits} arc orbits"
        )));
    }
    Ok(NetVerdict {
        is_net,
        witness_orbit: witness.map(|o| o.to_vec()),
        is_arc_transitive: is_arc,
        aut_gs,
    })
}

pub fn is_normal_edge_transitive(table: &GroupTable, s: &CayleySet) -> Result<NetVerdict, NetError> {
    let autos: Vec<Perm> = table.all_automorphisms().into_iter().map(|(_, p)| p).collect();
    net_verdict(table.group(), &autos, s)
}

/// Validated parameters `(p, q, ℓ, i)` of `Γ(pq, ℓ, i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GammaParams {
    p: u64,
    q: u64,
    ell: u64,
    i: u64,
}

impl GammaParams {
    pub fn new(p: u64, q: u64, ell: u64, i: u64) -> Result<Self, NetError> {
        if !is_prime(p) || !is_prime(q) {
            return Err(bad(format!("p = {p} and q = {q} must be prime")));
        }
        if q >= p || (p - 1) % q != 0 {
            return Err(bad(format!("q = {q} must divide p - 1 = {}", p - 1)));
        }
        if ell <= 1 {
            return Err(bad("ell must exceed 1"));
        }
        if (p - 1) % ell != 0 {
            return Err(bad(format!("ell = {ell} must divide p - 1 = {}", p - 1)));
        }
        let ok = if q == 2 { i == 1 } else { (1..=(q - 1) / 2).contains(&i) };
        if !ok {
            return Err(bad(format!("i = {i} outside the canonical range for q = {q}")));
        }
        Ok(Self { p, q, ell, i })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn i(&self) -> u64 {
        self.i
    }

    /// All canonical `i` for the given `q`.
    pub fn i_range(q: u64) -> Vec<u64> {
        if q == 2 {
            vec![1]
        } else {
            (1..=(q - 1) / 2).collect()
        }
    }
}

impl std::fmt::Display for GammaParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Γ({},{},{})", self.p * self.q, self.ell, self.i)
    }
}

/// A constructed `Γ(G, H, g)` with its group and connection set.
#[derive(Clone, Debug)]
pub struct GammaGraph {
    pub table: GroupTable,
    pub set: CayleySet,
    pub graph: Graph,
}

fn h_generators(table: &GroupTable, h: &CyclicSubgroupH) -> Vec<Perm> {
    vec![table.conjugation_perm(h.generator()).expect("same prime")]
}

/// `Γ(G_pq, H_(ℓ,j), g)`.
pub fn gamma_pq(p: u64, q: u64, ell: u64, j: u64, g: AffineElement) -> Result<GammaGraph, NetError> {
    let table = GroupTable::frobenius(p, q)?;
    let h = CyclicSubgroupH::new(p, ell, j)?;
    let g = table
        .index_of(g)
        .ok_or_else(|| bad(format!("{g:?} is not an element of G_{}", p * q)))?;
    let set = gamma_set(table.group(), &h_generators(&table, &h), g)?;
    let graph = cayley_graph(table.group(), &set);
    Ok(GammaGraph { table, set, graph })
}

/// `Γ(pq) = Γ(G_pq, T, z)` with its connection set `zT ∪ z^{-1}T`.
pub fn construction1_full(p: u64, q: u64) -> Result<GammaGraph, NetError> {
    let table = GroupTable::frobenius(p, q)?;
    let t = table
        .conjugation_perm(AffineElement::translation(1, p))
        .expect("same prime");
    let set = gamma_set(table.group(), &[t], table.z_index())?;
    let graph = cayley_graph(table.group(), &set);
    let quotient = Graph::cycle(q as usize);
    let expected = lex_product(&quotient, &Graph::empty(p as usize));
    if graph != expected {
        return Err(NetError::InternalInconsistency(format!(
            "Γ({}) differs from the lexicographic product",
            p * q
        )));
    }
    // the refinement engine is a second witness where its search stays small
    if p <= 7 && !are_isomorphic(&graph, &expected) {
        return Err(NetError::InternalInconsistency("engine rejects the lexicographic product".into()));
    }
    Ok(GammaGraph { table, set, graph })
}

pub fn construction1(p: u64, q: u64) -> Result<Graph, NetError> {
    Ok(construction1_full(p, q)?.graph)
}

/// `Γ(pq, ℓ, i) = Γ(G_pq, H_(ℓ,1), z^i)`.
pub fn construction2_full(params: GammaParams) -> Result<GammaGraph, NetError> {
    let GammaParams { p, q, ell, i } = params;
    let table = GroupTable::frobenius(p, q)?;
    let h = CyclicSubgroupH::new(p, ell, 1)?;
    let set = gamma_set(table.group(), &h_generators(&table, &h), table.index_zt(i, 0))?;
    let graph = cayley_graph(table.group(), &set);
    if !graph.is_connected() {
        return Err(NetError::InternalInconsistency(format!("{params} is disconnected")));
    }
    Ok(GammaGraph { table, set, graph })
}

pub fn construction2(params: GammaParams) -> Result<Graph, NetError> {
    Ok(construction2_full(params)?.graph)
}

/// For `ℓ = p-1`, the relabelling `z^u t^v ↦ (v + c z^u, u i^{-1} mod q)`
/// of `Γ(pq, p-1, i)` onto `K_p × C_q` (`K_p × K_2` for `q = 2`), where `c`
/// is the point fixed by `H_(p-1,1)`. The relabelled graph is checked to
/// equal the product exactly.
pub fn full_multiplier_isomorphism(params: GammaParams) -> Result<Perm, NetError> {
    let GammaParams { p, q, ell, i } = params;
    if ell != p - 1 {
        return Err(bad(format!("need ell = p - 1 = {}, got {ell}", p - 1)));
    }
    let built = construction2_full(params)?;
    let table = &built.table;
    let m = table.primitive_root();
    let one = Residue::new(1, p).map_err(AffineError::from)?;
    let c = one.sub(m).and_then(|d| d.inv()).map_err(AffineError::from)?.value();
    let i_inv = (1..q).find(|k| k * i % q == 1 % q).unwrap_or(1);
    let z = table.z_multiplier();
    let (pu, qu) = (p as usize, q as usize);
    let images = (0..pu * qu)
        .map(|k| {
            let (u, v) = ((k / pu) as u64, (k % pu) as u64);
            let w = (v + c * z.pow(u).value()) % p;
            (w * q + u * i_inv % q) as usize
        })
        .collect();
    let sigma = Perm::from_images(images).map_err(|e| NetError::InternalInconsistency(e.to_string()))?;
    let cycle = if q == 2 { Graph::complete(2) } else { Graph::cycle(qu) };
    if built.graph.relabel(&sigma) != direct_product(&Graph::complete(pu), &cycle) {
        return Err(NetError::InternalInconsistency(format!("{params} is not carried onto K_p × C_q")));
    }
    Ok(sigma)
}

/// Brings `Γ(G_pq, H_(ℓ,j), g)` to the form `Γ(pq, ℓ, i)`.
///
/// With `g = z^i t^k`, conjugating by `y = t^{k(z^i - 1)^{-1}}` turns `g`
/// into `z^i` and `H_(ℓ,j)` into `H_(ℓ,j')`; conjugating by `m^r` with
/// `m^r = j'^{-1}` then gives `H_(ℓ,1)`. Finally `i` and `q - i` give the
/// same connection set. The composite automorphism is checked to carry one
/// graph exactly onto the other.
pub fn normalize_parameters(p: u64, q: u64, ell: u64, j: u64, g: AffineElement) -> Result<GammaParams, NetError> {
    let table = GroupTable::frobenius(p, q)?;
    let h = CyclicSubgroupH::new(p, ell, j)?;
    let gi = table
        .index_of(g)
        .ok_or_else(|| bad(format!("{g:?} is not an element of G_{}", p * q)))?;
    let i = (gi as u64) / p;
    let k = (gi as u64) % p;
    if i == 0 {
        return Err(NetError::DisconnectedInput);
    }
    let zi = g.multiplier();
    let one = Residue::new(1, p).map_err(AffineError::from)?;
    let shift = Residue::new(k, p)
        .and_then(|k| k.mul(zi.sub(one)?.inv()?))
        .map_err(AffineError::from)?;
    let y1 = AffineElement::translation(shift.value(), p);
    let h1 = h.generator().conjugate_by(y1)?;
    debug_assert_eq!(g.conjugate_by(y1)?, AffineElement::scaling(zi)?);
    let j1 = h1.translation_part();
    if j1.is_zero() {
        return Err(NetError::CentralizingH);
    }
    let mr = AffineElement::scaling(modarith::mod_inv(j1).map_err(AffineError::from)?)?;
    let y = y1.compose(mr)?;
    debug_assert_eq!(h.generator().conjugate_by(y)?.translation_part().value(), 1);
    let i_canon = if q == 2 { 1 } else { i.min(q - i) };
    let params = GammaParams::new(p, q, ell, i_canon)?;

    let source = gamma_pq(p, q, ell, j, g)?;
    let target = construction2_full(params)?;
    let sigma = table.conjugation_perm(y)?;
    if source.graph.relabel(&sigma) != target.graph {
        return Err(NetError::InternalInconsistency(format!(
            "conjugation does not carry the input graph onto {params}"
        )));
    }
    if (ell < p - 1 || p <= 7) && !are_isomorphic(&source.graph, &target.graph) {
        return Err(NetError::InternalInconsistency(format!("engine rejects the isomorphism with {params}")));
    }
    Ok(params)
}

/// For `q | ℓ`, the regular abelian group `⟨ρ(t), λ(x)⟩ ≤ Aut Γ(pq,ℓ,i)`,
/// where `x` generates the order-`q` subgroup centralised by `H_(ℓ,1)`.
/// Absent when `q ∤ ℓ`.
pub fn regular_abelian_subgroup(params: GammaParams) -> Result<Option<PermGroup>, NetError> {
    if params.ell % params.q != 0 {
        return Ok(None);
    }
    let built = construction2_full(params)?;
    let table = &built.table;
    let x = fixed_subgroup_x(params.p, params.q, params.ell, 1)?;
    let xi = table.index_of(x).expect("x lies in G_pq");
    let rho_t = table.group().right_regular(table.t_index());
    let lambda_x = table.group().left_regular(xi);
    let n = table.order();
    let group = PermGroup::new(n, vec![rho_t.clone(), lambda_x.clone()]).expect("degree matches");
    let regular = group.order() == num_bigint::BigUint::from(n)
        && group.is_transitive()
        && rho_t.commutes_with(&lambda_x);
    let inside = built.graph.is_automorphism(&rho_t) && built.graph.is_automorphism(&lambda_x);
    if !regular || !inside {
        return Err(NetError::InternalInconsistency(format!(
            "⟨ρ(t), λ(x)⟩ for {params}: regular={regular}, automorphisms={inside}"
        )));
    }
    Ok(Some(group))
}
