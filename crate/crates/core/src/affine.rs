//! The affine group `AGL(1,p)`, the Frobenius group `G_pq` inside it, the
//! cyclic complements `H_(ℓ,j)` and the conjugation action on `G_pq`.
//!
//! An [`AffineElement`] `(a, b)` is the map `x ↦ xa + b`. Products read
//! left to right: `g.compose(h)` applies `g` first, so
//! `(a, b)(c, d) = (ac, bc + d)`. With this convention the conjugation
//! formulas `(m^i t^j)^{t^k} = m^i t^{j + k(1 - m^i)}` and
//! `(m^i t^j)^m = m^i t^{jm}` hold literally.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::group::FiniteGroup;
use crate::modarith::{self, is_prime, ModArithError, Residue};
use crate::permgrp::{Perm, PermGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AffineError {
    #[error("affine elements over different primes ({0} and {1})")]
    ModulusMismatch(u64, u64),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("the multiplier of an affine map must be nonzero")]
    ZeroMultiplier,
    #[error(transparent)]
    Arith(#[from] ModArithError),
}

fn bad(msg: impl Into<String>) -> AffineError {
    AffineError::BadParameters(msg.into())
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineElement {
    a: Residue,
    b: Residue,
}

impl AffineElement {
    pub fn new(a: Residue, b: Residue) -> Result<Self, AffineError> {
        if a.modulus() != b.modulus() {
            return Err(AffineError::ModulusMismatch(a.modulus(), b.modulus()));
        }
        if a.is_zero() {
            return Err(AffineError::ZeroMultiplier);
        }
        Ok(Self { a, b })
    }

    pub fn from_values(a: u64, b: u64, p: u64) -> Result<Self, AffineError> {
        Self::new(Residue::new(a, p)?, Residue::new(b, p)?)
    }

    fn raw(a: u64, b: u64, p: u64) -> Self {
        Self {
            a: Residue::new_unchecked(a, p),
            b: Residue::new_unchecked(b, p),
        }
    }

    pub fn identity(p: u64) -> Self {
        Self::raw(1, 0, p)
    }

    /// `t^k : x ↦ x + k`.
    pub fn translation(k: u64, p: u64) -> Self {
        Self::raw(1, k, p)
    }

    /// `x ↦ xa`.
    pub fn scaling(a: Residue) -> Result<Self, AffineError> {
        Self::new(a, Residue::new_unchecked(0, a.modulus()))
    }

    pub fn multiplier(self) -> Residue {
        self.a
    }

    pub fn translation_part(self) -> Residue {
        self.b
    }

    pub fn modulus(self) -> u64 {
        self.a.modulus()
    }

    /// `self` then `other`: `(a,b)(c,d) = (ac, bc + d)`.
    pub fn compose(self, other: Self) -> Result<Self, AffineError> {
        let p = self.modulus();
        if other.modulus() != p {
            return Err(AffineError::ModulusMismatch(p, other.modulus()));
        }
        let (a, b, c, d) = (self.a.value(), self.b.value(), other.a.value(), other.b.value());
        Ok(Self::raw(a * c % p, (b * c + d) % p, p))
    }

    pub fn inverse(self) -> Self {
        let p = self.modulus();
        let ai = modarith::mod_inv(self.a).expect("multiplier is a unit");
        Self::raw(ai.value(), (p - self.b.value()) * ai.value() % p, p)
    }

    /// `h^{-1} self h`.
    pub fn conjugate_by(self, h: Self) -> Result<Self, AffineError> {
        h.inverse().compose(self)?.compose(h)
    }

    pub fn pow(self, e: u64) -> Self {
        let p = self.modulus();
        (0..e).fold(Self::identity(p), |acc, _| acc.compose(self).unwrap())
    }

    pub fn order(self) -> u64 {
        let id = Self::identity(self.modulus());
        let mut x = self;
        let mut k = 1;
        while x != id {
            x = x.compose(self).unwrap();
            k += 1;
        }
        k
    }

    /// Evaluates the map at `x`.
    pub fn eval(self, x: u64) -> u64 {
        let p = self.modulus();
        (x % p * self.a.value() + self.b.value()) % p
    }
}

impl fmt::Debug for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}) mod {}", self.a.value(), self.b.value(), self.modulus())
    }
}

/// `aff_compose`.
pub fn compose(g: AffineElement, h: AffineElement) -> Result<AffineElement, AffineError> {
    g.compose(h)
}

/// `aff_conjugate`: `h^{-1} g h`.
pub fn conjugate(g: AffineElement, h: AffineElement) -> Result<AffineElement, AffineError> {
    g.conjugate_by(h)
}

fn check_pq(p: u64, q: u64) -> Result<(), AffineError> {
    if !is_prime(p) {
        return Err(bad(format!("p = {p} is not prime")));
    }
    if !is_prime(q) {
        return Err(bad(format!("q = {q} is not prime")));
    }
    if q >= p {
        return Err(bad(format!("q = {q} must be smaller than p = {p}")));
    }
    if (p - 1) % q != 0 {
        return Err(bad(format!("q = {q} does not divide p - 1 = {}", p - 1)));
    }
    Ok(())
}

/// The Frobenius group `G_pq = ⟨z, t⟩ ≤ AGL(1,p)` with `z = m^{(p-1)/q}`,
/// indexed so that `z^i t^j` sits at position `i·p + j`.
#[derive(Clone, Debug)]
pub struct GroupTable {
    p: u64,
    q: u64,
    m: Residue,
    z: Residue,
    elements: Vec<AffineElement>,
    index: HashMap<AffineElement, usize>,
    group: FiniteGroup,
}

impl GroupTable {
    /// `frobenius_group(p, q)`.
    pub fn frobenius(p: u64, q: u64) -> Result<Self, AffineError> {
        check_pq(p, q)?;
        let m = modarith::primitive_root(p)?;
        let z = m.pow((p - 1) / q);
        let mut elements = Vec::with_capacity((p * q) as usize);
        for i in 0..q {
            let zi = z.pow(i);
            for j in 0..p {
                elements.push(AffineElement::raw(zi.value(), j, p));
            }
        }
        let index: HashMap<AffineElement, usize> =
            elements.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        let group = FiniteGroup::from_fn(elements.len(), |x, y| {
            index[&elements[x].compose(elements[y]).unwrap()]
        });
        Ok(Self {
            p,
            q,
            m,
            z,
            elements,
            index,
            group,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// The fixed primitive element `m` (the smallest primitive root).
    pub fn primitive_root(&self) -> Residue {
        self.m
    }

    /// `z` as a residue, i.e. `m^{(p-1)/q}`.
    pub fn z_multiplier(&self) -> Residue {
        self.z
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn elements(&self) -> &[AffineElement] {
        &self.elements
    }

    pub fn element(&self, idx: usize) -> AffineElement {
        self.elements[idx]
    }

    pub fn index_of(&self, g: AffineElement) -> Option<usize> {
        self.index.get(&g).copied()
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    pub fn t_index(&self) -> usize {
        1
    }

    pub fn z_index(&self) -> usize {
        self.p as usize
    }

    /// Index of `z^i t^j`.
    pub fn index_zt(&self, i: u64, j: u64) -> usize {
        ((i % self.q) * self.p + j % self.p) as usize
    }

    /// The translation subgroup `T`, positions `0..p`.
    pub fn translation_subgroup(&self) -> Vec<usize> {
        (0..self.p as usize).collect()
    }

    /// Conjugation by an element of `AGL(1,p)` as a permutation of `G_pq`.
    pub fn conjugation_perm(&self, h: AffineElement) -> Result<Perm, AffineError> {
        if h.modulus() != self.p {
            return Err(AffineError::ModulusMismatch(self.p, h.modulus()));
        }
        // h^{-1} (c, d) h = (c, b(1 - c) + a d) for h = (a, b)
        let (p, a, b) = (self.p, h.multiplier().value(), h.translation_part().value());
        let images = self
            .elements
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let c = g.multiplier().value();
                let d = g.translation_part().value();
                let shifted = (b * ((1 + p - c) % p) + a * d) % p;
                k - k % p as usize + shifted as usize
            })
            .collect();
        Ok(Perm::from_images(images).expect("conjugation permutes G_pq"))
    }

    /// The conjugation orbit `g^H`, sorted by index.
    pub fn h_orbit(&self, g: usize, h: &CyclicSubgroupH) -> Vec<usize> {
        let mut out: Vec<usize> = h
            .elements()
            .into_iter()
            .map(|x| self.index[&self.elements[g].conjugate_by(x).unwrap()])
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// `g^H` as affine elements, sorted by index.
    pub fn h_orbit_elements(&self, g: AffineElement, h: &CyclicSubgroupH) -> Option<Vec<AffineElement>> {
        let idx = self.index_of(g)?;
        Some(self.h_orbit(idx, h).into_iter().map(|k| self.elements[k]).collect())
    }

    /// All `p(p-1)` automorphisms `ι(a, b)` with their defining affine element.
    pub fn all_automorphisms(&self) -> Vec<(AffineElement, Perm)> {
        let mut out = Vec::with_capacity((self.p * (self.p - 1)) as usize);
        for a in 1..self.p {
            for b in 0..self.p {
                let h = AffineElement::raw(a, b, self.p);
                out.push((h, self.conjugation_perm(h).unwrap()));
            }
        }
        out
    }

    /// `Aut(G_pq) = ι(AGL(1,p))`, generated by conjugation by `t` and `m`.
    pub fn automorphism_group(&self) -> PermGroup {
        let t = AffineElement::translation(1, self.p);
        let m = AffineElement::scaling(self.m).unwrap();
        PermGroup::new(
            self.order(),
            vec![self.conjugation_perm(t).unwrap(), self.conjugation_perm(m).unwrap()],
        )
        .unwrap()
    }
}

/// `frobenius_group(p, q)`.
pub fn frobenius_group(p: u64, q: u64) -> Result<GroupTable, AffineError> {
    GroupTable::frobenius(p, q)
}

/// `automorphism_group_of_G(p, q)`.
pub fn automorphism_group_of_g(p: u64, q: u64) -> Result<PermGroup, AffineError> {
    Ok(GroupTable::frobenius(p, q)?.automorphism_group())
}

/// `H_(ℓ,j) = ⟨m^{(p-1)/ℓ} t^j⟩`, a cyclic subgroup of `AGL(1,p)` of order
/// `ℓ` meeting the translations trivially.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CyclicSubgroupH {
    p: u64,
    ell: u64,
    j: u64,
    generator: AffineElement,
}

impl CyclicSubgroupH {
    pub fn new(p: u64, ell: u64, j: u64) -> Result<Self, AffineError> {
        if !is_prime(p) {
            return Err(bad(format!("p = {p} is not prime")));
        }
        if ell <= 1 {
            return Err(bad("ell must exceed 1"));
        }
        if (p - 1) % ell != 0 {
            return Err(bad(format!("ell = {ell} does not divide p - 1 = {}", p - 1)));
        }
        if j >= p {
            return Err(bad(format!("j = {j} must lie in [0, p)")));
        }
        let m = modarith::primitive_root(p)?;
        let generator = AffineElement::raw(m.pow((p - 1) / ell).value(), j, p);
        Ok(Self {
            p,
            ell,
            j,
            generator,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn j(&self) -> u64 {
        self.j
    }

    pub fn generator(&self) -> AffineElement {
        self.generator
    }

    /// `1, h, h^2, ..., h^{ℓ-1}`.
    pub fn elements(&self) -> Vec<AffineElement> {
        let mut out = Vec::with_capacity(self.ell as usize);
        let mut x = AffineElement::identity(self.p);
        for _ in 0..self.ell {
            out.push(x);
            x = x.compose(self.generator).unwrap();
        }
        out
    }
}

/// `subgroup_H(p, q, ℓ, j)`; `q` is validated as a divisor of `p - 1`.
pub fn subgroup_h(p: u64, q: u64, ell: u64, j: u64) -> Result<CyclicSubgroupH, AffineError> {
    check_pq(p, q)?;
    CyclicSubgroupH::new(p, ell, j)
}

/// The generator `x = z t^{j(z-1)(m^{(p-1)/ℓ}-1)^{-1}}` of the order-`q`
/// subgroup of `G_pq` centralised by `H_(ℓ,j)`.
pub fn fixed_subgroup_x(p: u64, q: u64, ell: u64, j: u64) -> Result<AffineElement, AffineError> {
    let h = subgroup_h(p, q, ell, j)?;
    let m = modarith::primitive_root(p)?;
    let z = m.pow((p - 1) / q);
    let a = h.generator().multiplier();
    let denom = a.sub(Residue::new_unchecked(1, p))?.inv()?;
    let k = Residue::new_unchecked(j, p)
        .mul(z.sub(Residue::new_unchecked(1, p))?)?
        .mul(denom)?;
    let x = AffineElement::new(z, k)?;
    debug_assert_eq!(x.conjugate_by(h.generator()).unwrap(), x);
    Ok(x)
}
