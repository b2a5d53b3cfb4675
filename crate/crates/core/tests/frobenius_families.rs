//! Properties of the Cayley graphs on `G_pq` over whole parameter ranges.

use netcg::affine::{fixed_subgroup_x, AffineElement, CyclicSubgroupH, GroupTable};
use netcg::autiso::are_isomorphic;
use netcg::graphcore::{
    connected_components, direct_product, gamma_ghg, gamma_set, lex_product, quotient_graph, Graph,
};
use netcg::modarith::{divisors, is_prime};
use netcg::netcayley::{
    construction2_full, full_multiplier_isomorphism, is_normal_edge_transitive, GammaParams,
};

fn frobenius_pairs(max_product: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for p in (3..max_product).filter(|&p| is_prime(p)) {
        for q in (2..p).filter(|&q| is_prime(q) && (p - 1) % q == 0 && p * q <= max_product) {
            out.push((p, q));
        }
    }
    out
}

fn ells(p: u64) -> Vec<u64> {
    divisors(p - 1).into_iter().filter(|&l| l > 1).collect()
}

#[test]
fn every_construction_is_normal_edge_transitive() {
    for (p, q) in frobenius_pairs(200) {
        for ell in ells(p) {
            for i in GammaParams::i_range(q) {
                let params = GammaParams::new(p, q, ell, i).unwrap();
                let built = construction2_full(params).unwrap();
                let verdict = is_normal_edge_transitive(&built.table, &built.set).unwrap();
                assert!(verdict.is_net, "{params}");
                if q == 2 {
                    assert!(verdict.is_arc_transitive, "{params}");
                }
            }
        }
    }
}

#[test]
fn translations_in_h_give_a_lexicographic_product() {
    for (p, q) in [(3, 2), (5, 2), (7, 3)] {
        let table = GroupTable::frobenius(p, q).unwrap();
        let t = table.conjugation_perm(AffineElement::translation(1, p)).unwrap();
        let (pu, n) = (p as usize, table.order());
        let cosets: Vec<Vec<usize>> = (0..q as usize).map(|i| (i * pu..(i + 1) * pu).collect()).collect();
        for ell in divisors(p - 1) {
            let mut gens = vec![t.clone()];
            if ell > 1 {
                let h = CyclicSubgroupH::new(p, ell, 0).unwrap();
                gens.push(table.conjugation_perm(h.generator()).unwrap());
            }
            // g outside T
            for g in pu..n {
                let graph = gamma_ghg(table.group(), &gens, g).unwrap();
                let quotient = quotient_graph(&graph, &cosets).unwrap();
                assert_eq!(graph, lex_product(&quotient, &Graph::empty(pu)), "({p},{q}) ℓ={ell} g={g}");
            }
        }
    }
}

#[test]
fn left_multiplication_by_x_commutes_with_right_regular_action() {
    for (p, q) in frobenius_pairs(200) {
        for ell in ells(p).into_iter().filter(|l| l % q == 0) {
            let table = GroupTable::frobenius(p, q).unwrap();
            let x = table.index_of(fixed_subgroup_x(p, q, ell, 1).unwrap()).unwrap();
            let group = table.group();
            let xs = group.generated_subgroup(&[x]);
            for &y in &xs {
                let lambda = group.left_regular(y);
                for g in 0..group.order() {
                    assert!(lambda.commutes_with(&group.right_regular(g)), "({p},{q},{ell})");
                }
            }
        }
    }
}

#[test]
fn q_dividing_ell_makes_i_irrelevant() {
    for (p, q) in frobenius_pairs(200).into_iter().filter(|&(_, q)| q >= 5) {
        for ell in ells(p).into_iter().filter(|&l| l % q == 0 && l < p - 1) {
            let graphs: Vec<Graph> = GammaParams::i_range(q)
                .into_iter()
                .map(|i| construction2_full(GammaParams::new(p, q, ell, i).unwrap()).unwrap().graph)
                .collect();
            for g in &graphs[1..] {
                assert!(are_isomorphic(&graphs[0], g), "({p},{q},{ell})");
            }
        }
    }
}

#[test]
fn q_not_dividing_ell_separates_every_i() {
    for (p, q) in frobenius_pairs(200).into_iter().filter(|&(_, q)| q >= 5) {
        for ell in ells(p).into_iter().filter(|&l| l % q != 0) {
            let graphs: Vec<Graph> = GammaParams::i_range(q)
                .into_iter()
                .map(|i| construction2_full(GammaParams::new(p, q, ell, i).unwrap()).unwrap().graph)
                .collect();
            for a in 0..graphs.len() {
                for b in a + 1..graphs.len() {
                    assert!(!are_isomorphic(&graphs[a], &graphs[b]), "({p},{q},{ell}) i={} i'={}", a + 1, b + 1);
                }
            }
        }
    }
}

#[test]
fn disconnected_graphs_are_copies_of_one_component() {
    for (p, q) in [(7, 3), (11, 5), (13, 3)] {
        let table = GroupTable::frobenius(p, q).unwrap();
        let group = table.group();
        for ell in ells(p) {
            for j in [0, 1] {
                let h = CyclicSubgroupH::new(p, ell, j).unwrap();
                let gens = vec![table.conjugation_perm(h.generator()).unwrap()];
                for g in 1..group.order() {
                    let set = gamma_set(group, &gens, g).unwrap();
                    let generated = group.generated_subgroup(set.members());
                    let graph = gamma_ghg(group, &gens, g).unwrap();
                    let components = connected_components(&graph);
                    assert_eq!(components.len() * generated.len(), group.order());
                    let first = graph.induced(&components[0]);
                    for c in &components[1..] {
                        assert!(are_isomorphic(&first, &graph.induced(c)));
                    }
                }
            }
        }
    }
}

#[test]
fn full_multiplier_group_gives_a_direct_product() {
    for (p, q) in frobenius_pairs(250) {
        for i in GammaParams::i_range(q) {
            let params = GammaParams::new(p, q, p - 1, i).unwrap();
            full_multiplier_isomorphism(params).unwrap_or_else(|e| panic!("{params}: {e}"));
        }
    }
    for (p, q) in [(5, 2), (7, 3), (11, 5)] {
        for i in GammaParams::i_range(q) {
            let g = construction2_full(GammaParams::new(p, q, p - 1, i).unwrap()).unwrap().graph;
            let cycle = if q == 2 { Graph::complete(2) } else { Graph::cycle(q as usize) };
            assert!(are_isomorphic(&g, &direct_product(&Graph::complete(p as usize), &cycle)));
        }
    }
}
