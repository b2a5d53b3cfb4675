//! Finite groups given by a full multiplication table over indices `0..n`.

use crate::permgrp::Perm;

/// Indexed finite group. Products follow the same left-to-right convention
/// as permutations: `mul(a, b)` is "a, then b".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    identity: usize,
}

impl FiniteGroup {
    /// Builds the table from a product closure. The caller guarantees the
    /// closure defines a group on `0..order`.
    pub fn from_fn(order: usize, mut mul: impl FnMut(usize, usize) -> usize) -> Self {
        let mut table = vec![0; order * order];
        for a in 0..order {
            for b in 0..order {
                table[a * order + b] = mul(a, b);
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| table[e * order + x] == x && table[x * order + e] == x))
            .expect("table has an identity");
        let inverse = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| table[a * order + b] == identity)
                    .expect("every element is invertible")
            })
            .collect();
        Self {
            order,
            table,
            inverse,
            identity,
        }
    }

    /// The cyclic group `Z_n` with index = residue.
    pub fn cyclic(n: usize) -> Self {
        Self::from_fn(n, |a, b| (a + b) % n)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `h^{-1} g h`.
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(self.inv(h), g), h)
    }

    pub fn pow(&self, g: usize, e: u64) -> usize {
        (0..e).fold(self.identity, |acc, _| self.mul(acc, g))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Elements of the subgroup generated by `gens`, sorted.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut out = vec![self.identity];
        let mut k = 0;
        while k < out.len() {
            let x = out[k];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            k += 1;
        }
        out.sort_unstable();
        out
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let mut member = vec![false; self.order];
        for &x in set {
            if x >= self.order {
                return false;
            }
            member[x] = true;
        }
        member[self.identity]
            && set
                .iter()
                .all(|&a| set.iter().all(|&b| member[self.mul(a, self.inv(b))]))
    }

    pub fn is_normal_subgroup(&self, set: &[usize]) -> bool {
        let mut member = vec![false; self.order];
        for &x in set {
            member[x] = true;
        }
        self.is_subgroup(set)
            && (0..self.order).all(|h| set.iter().all(|&m| member[self.conjugate(m, h)]))
    }

    /// `ρ(g): x ↦ xg`.
    pub fn right_regular(&self, g: usize) -> Perm {
        Perm::from_images((0..self.order).map(|x| self.mul(x, g)).collect())
            .expect("right multiplication is a bijection")
    }

    /// `λ(g): x ↦ g^{-1} x`.
    pub fn left_regular(&self, g: usize) -> Perm {
        let gi = self.inv(g);
        Perm::from_images((0..self.order).map(|x| self.mul(gi, x)).collect())
            .expect("left multiplication is a bijection")
    }

    /// Right cosets `Mg` of a subgroup, each sorted, listed by smallest element.
    pub fn right_cosets(&self, subgroup: &[usize]) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.order];
        let mut out = Vec::new();
        for g in 0..self.order {
            if assigned[g] {
                continue;
            }
            let mut coset: Vec<usize> = subgroup.iter().map(|&m| self.mul(m, g)).collect();
            coset.sort_unstable();
            for &x in &coset {
                assigned[x] = true;
            }
            out.push(coset);
        }
        out
    }

    /// Checks that a permutation of the elements is a group automorphism.
    pub fn is_automorphism(&self, sigma: &Perm) -> bool {
        sigma.degree() == self.order
            && (0..self.order).all(|a| {
                (0..self.order).all(|b| sigma.apply(self.mul(a, b)) == self.mul(sigma.apply(a), sigma.apply(b)))
            })
    }
}
