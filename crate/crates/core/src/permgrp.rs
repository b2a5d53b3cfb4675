//! Permutation groups given by generators: orbits, stabilizer chains
//! (deterministic Schreier–Sims), group orders, blocks and primitivity.
//!
//! Permutations act on the right: `x^(gh) = (x^g)^h`, i.e. the product
//! `g * h` means "apply `g`, then `h`".

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::Mul;
use std::sync::OnceLock;

use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("images do not form a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("point {point} is out of range for degree {degree}")]
    OutOfRange { point: usize, degree: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("the group is not transitive")]
    NotTransitive,
    #[error("block computation needs two distinct points")]
    SamePoint,
}

/// A bijection of `0..n`, stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(PermError::NotAPermutation(n));
            }
            seen[x] = true;
        }
        Ok(Self { images })
    }

    /// Builds a permutation of degree `n` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x >= n {
                    return Err(PermError::OutOfRange { point: x, degree: n });
                }
                if touched[x] {
                    return Err(PermError::NotAPermutation(n));
                }
                touched[x] = true;
                images[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Self { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: self.images.iter().map(|&x| other.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Perm { images: inv }
    }

    pub fn pow(&self, mut e: u64) -> Perm {
        let mut base = self.clone();
        let mut acc = Perm::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// Smallest point not fixed, if any.
    pub fn first_moved(&self) -> Option<usize> {
        self.images.iter().enumerate().position(|(i, &x)| i != x)
    }

    /// Element order (lcm of cycle lengths).
    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.degree()];
        let mut acc = 1u64;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
                len += 1;
            }
            acc = acc / crate::modarith::gcd(acc, len) * len;
        }
        acc
    }

    pub fn commutes_with(&self, other: &Perm) -> bool {
        self.then(other) == other.then(self)
    }
}

impl Mul for &Perm {
    type Output = Perm;

    fn mul(self, rhs: &Perm) -> Perm {
        self.then(rhs)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.degree()];
        let mut wrote = false;
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
                first = false;
                x = self.images[x];
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    orbit: Vec<usize>,
    /// `transversal[beta] = u` with `base^u = beta`.
    transversal: Vec<Option<Perm>>,
    inverse: Vec<Option<Perm>>,
}

/// Base and strong generating set, built by deterministic Schreier–Sims.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
    strong: Vec<Perm>,
}

impl StabChain {
    /// Builds a chain whose base starts with `base_prefix`; further base
    /// points are the smallest points moved by the residues that need them.
    pub fn new(degree: usize, gens: &[Perm], base_prefix: &[usize]) -> Self {
        let mut chain = StabChain {
            degree,
            levels: Vec::new(),
            strong: Vec::new(),
        };
        for &b in base_prefix {
            chain.push_level(b);
        }
        for g in gens {
            if g.is_identity() {
                continue;
            }
            let (j, residue) = chain.sift(0, g.clone());
            if !residue.is_identity() {
                chain.add_strong(j, residue);
            }
        }
        chain.complete(chain.levels.len().saturating_sub(1));
        chain
    }

    fn push_level(&mut self, base: usize) {
        let mut transversal = vec![None; self.degree];
        transversal[base] = Some(Perm::identity(self.degree));
        let inverse = transversal.clone();
        self.levels.push(Level {
            base,
            orbit: vec![base],
            transversal,
            inverse,
        });
    }

    fn fixes_prefix(&self, g: &Perm, level: usize) -> bool {
        self.levels[..level].iter().all(|l| g.apply(l.base) == l.base)
    }

    fn level_gens(&self, level: usize) -> Vec<&Perm> {
        self.strong
            .iter()
            .filter(|g| self.fixes_prefix(g, level))
            .collect()
    }

    /// Adds a residue that fixes the base points below `level`; creates a new
    /// base point when it passed every level.
    fn add_strong(&mut self, level: usize, g: Perm) {
        if level == self.levels.len() {
            let b = g.first_moved().expect("non-identity residue");
            self.push_level(b);
        }
        self.strong.push(g);
    }

    fn recompute_orbit(&mut self, level: usize) {
        let gens: Vec<Perm> = self.level_gens(level).into_iter().cloned().collect();
        let lvl = &mut self.levels[level];
        let mut queue: VecDeque<usize> = lvl.orbit.iter().copied().collect();
        while let Some(beta) = queue.pop_front() {
            let u = lvl.transversal[beta].clone().expect("orbit point has a transversal");
            for s in &gens {
                let img = s.apply(beta);
                if lvl.transversal[img].is_none() {
                    let v = u.then(s);
                    lvl.inverse[img] = Some(v.inverse());
                    lvl.transversal[img] = Some(v);
                    lvl.orbit.push(img);
                    queue.push_back(img);
                }
            }
        }
    }

    /// Strips `g` through the levels starting at `from`. Returns the level at
    /// which stripping stopped and the residue.
    fn sift(&self, from: usize, mut g: Perm) -> (usize, Perm) {
        for j in from..self.levels.len() {
            let lvl = &self.levels[j];
            let beta = g.apply(lvl.base);
            match &lvl.inverse[beta] {
                None => return (j, g),
                Some(ui) => g = g.then(ui),
            }
        }
        (self.levels.len(), g)
    }

    /// Restores the Schreier–Sims invariant for all levels `<= top` after
    /// new strong generators were attached at `top`.
    fn complete(&mut self, top: usize) {
        if self.levels.is_empty() {
            return;
        }
        let top = top.min(self.levels.len() - 1);
        for l in 0..=top {
            self.recompute_orbit(l);
        }
        // Schreier generators that already sifted through stay sifted: the
        // transversals below only ever gain points.
        let mut checked: Vec<HashSet<(usize, usize)>> = vec![HashSet::new(); self.levels.len()];
        let mut i = top as isize;
        'outer: while i >= 0 {
            let level = i as usize;
            let gens: Vec<usize> = (0..self.strong.len())
                .filter(|&k| self.fixes_prefix(&self.strong[k], level))
                .collect();
            let orbit = self.levels[level].orbit.clone();
            for &beta in &orbit {
                for &k in &gens {
                    if !checked[level].insert((beta, k)) {
                        continue;
                    }
                    let lvl = &self.levels[level];
                    let s = &self.strong[k];
                    let img = s.apply(beta);
                    let u_beta = lvl.transversal[beta].as_ref().unwrap();
                    let u_img_inv = lvl.inverse[img].as_ref().unwrap();
                    let h = u_beta.then(s).then(u_img_inv);
                    if h.is_identity() {
                        continue;
                    }
                    let (j, residue) = self.sift(level + 1, h);
                    if !residue.is_identity() {
                        self.add_strong(j, residue);
                        if checked.len() < self.levels.len() {
                            checked.resize(self.levels.len(), HashSet::new());
                        }
                        for l in level + 1..=j {
                            self.recompute_orbit(l);
                        }
                        i = j as isize;
                        continue 'outer;
                    }
                }
            }
            i -= 1;
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn strong_generators(&self) -> &[Perm] {
        &self.strong
    }

    /// Sizes of the basic orbits; their product is the group order.
    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn contains(&self, g: &Perm) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (_, residue) = self.sift(0, g.clone());
        residue.is_identity()
    }

    /// The chain of `u^{-1} G u` with base points, orbits and transversals
    /// moved by `u`.
    fn conjugate(&self, u: &Perm) -> StabChain {
        let ui = u.inverse();
        let conj = |g: &Perm| ui.then(g).then(u);
        let levels = self
            .levels
            .iter()
            .map(|l| {
                let mut transversal = vec![None; self.degree];
                let mut inverse = vec![None; self.degree];
                for &beta in &l.orbit {
                    transversal[u.apply(beta)] = l.transversal[beta].as_ref().map(&conj);
                    inverse[u.apply(beta)] = l.inverse[beta].as_ref().map(&conj);
                }
                Level {
                    base: u.apply(l.base),
                    orbit: l.orbit.iter().map(|&b| u.apply(b)).collect(),
                    transversal,
                    inverse,
                }
            })
            .collect();
        StabChain {
            degree: self.degree,
            levels,
            strong: self.strong.iter().map(conj).collect(),
        }
    }

    /// The chain of the stabilizer of the first base point.
    fn drop_first(&self) -> StabChain {
        if self.levels.is_empty() {
            return self.clone();
        }
        let first = self.levels[0].base;
        StabChain {
            degree: self.degree,
            levels: self.levels[1..].to_vec(),
            strong: self
                .strong
                .iter()
                .filter(|g| g.apply(first) == first)
                .cloned()
                .collect(),
        }
    }
}

/// A permutation group on `0..degree` given by generators. The stabilizer
/// chain is built once on first use.
#[derive(Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    chain: OnceLock<StabChain>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let chain = OnceLock::new();
        if let Some(c) = self.chain.get() {
            let _ = chain.set(c.clone());
        }
        Self {
            degree: self.degree,
            generators: self.generators.clone(),
            chain,
        }
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self, PermError> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(PermError::DegreeMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
        Ok(Self {
            degree,
            generators,
            chain: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        Self {
            degree,
            generators: Vec::new(),
            chain: OnceLock::new(),
        }
    }

    /// Symmetric group on `n` points.
    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Perm::from_cycles(n, &[&[0, 1]]).unwrap());
            let cycle: Vec<usize> = (0..n).collect();
            gens.push(Perm::from_cycles(n, &[&cycle]).unwrap());
        }
        Self::new(n, gens).unwrap()
    }

    fn from_chain(chain: StabChain) -> Self {
        let degree = chain.degree;
        let generators = chain.strong.clone();
        let lock = OnceLock::new();
        let _ = lock.set(chain);
        Self {
            degree,
            generators,
            chain: lock,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::new(self.degree, &self.generators, &[]))
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.chain().contains(g)
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        (0..g.len()).all(|i| (i + 1..g.len()).all(|j| g[i].commutes_with(&g[j])))
    }

    fn check_point(&self, point: usize) -> Result<(), PermError> {
        if point >= self.degree {
            Err(PermError::OutOfRange {
                point,
                degree: self.degree,
            })
        } else {
            Ok(())
        }
    }

    /// The orbit of `point`, sorted ascending.
    pub fn orbit(&self, point: usize) -> Result<Vec<usize>, PermError> {
        self.check_point(point)?;
        let mut seen = vec![false; self.degree];
        seen[point] = true;
        let mut stack = vec![point];
        let mut out = vec![point];
        while let Some(x) = stack.pop() {
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    stack.push(y);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// All orbits, each sorted, listed by smallest point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits_of(self.degree, &self.generators)
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit(0).map(|o| o.len() == self.degree).unwrap_or(false)
    }

    /// The point stabilizer, read off a chain based at `point`. When `point`
    /// lies in the first basic orbit the existing chain is conjugated by a
    /// transversal element (which lies in the group) instead of rebuilt.
    pub fn stabilizer(&self, point: usize) -> Result<PermGroup, PermError> {
        self.check_point(point)?;
        let chain = self.chain();
        let Some(first) = chain.levels.first() else {
            return Ok(self.clone());
        };
        if first.base == point {
            return Ok(PermGroup::from_chain(chain.drop_first()));
        }
        if let Some(u) = &first.transversal[point] {
            return Ok(PermGroup::from_chain(chain.conjugate(u).drop_first()));
        }
        if chain.strong.iter().all(|g| g.apply(point) == point) {
            return Ok(self.clone());
        }
        let mut prefix = vec![point];
        prefix.extend(chain.base().into_iter().filter(|&b| b != point));
        let rebuilt = StabChain::new(self.degree, &chain.strong, &prefix);
        Ok(PermGroup::from_chain(rebuilt.drop_first()))
    }

    /// Pointwise stabilizer of a sequence of points.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> Result<PermGroup, PermError> {
        let mut g = self.clone();
        for &p in points {
            g = g.stabilizer(p)?;
        }
        Ok(g)
    }

    /// The smallest block containing `a` and `b` (union-find closure).
    /// Equals the full point set iff no proper block contains both.
    pub fn minimal_block(&self, a: usize, b: usize) -> Result<Vec<usize>, PermError> {
        self.check_point(a)?;
        self.check_point(b)?;
        if a == b {
            return Err(PermError::SamePoint);
        }
        if !self.is_transitive() {
            return Err(PermError::NotTransitive);
        }
        Ok(minimal_block_unchecked(self.degree, &self.generators, a, b))
    }

    /// Transitive and no nontrivial block contains `0`.
    pub fn is_primitive(&self) -> bool {
        if self.degree < 2 || !self.is_transitive() {
            return false;
        }
        (1..self.degree).all(|b| {
            minimal_block_unchecked(self.degree, &self.generators, 0, b).len() == self.degree
        })
    }

    /// Every minimal block system (as sorted list of sorted blocks) obtained
    /// from the blocks generated by `{0, b}`; proper ones only, deduplicated.
    pub fn minimal_block_systems(&self) -> Result<Vec<Vec<Vec<usize>>>, PermError> {
        if !self.is_transitive() {
            return Err(PermError::NotTransitive);
        }
        let mut systems: Vec<Vec<Vec<usize>>> = Vec::new();
        for b in 1..self.degree {
            let block = minimal_block_unchecked(self.degree, &self.generators, 0, b);
            if block.len() == self.degree {
                continue;
            }
            let system = block_system(self.degree, &self.generators, &block);
            if !systems.contains(&system) {
                systems.push(system);
            }
        }
        systems.sort();
        Ok(systems)
    }

    /// True when every generator maps each part of `partition` onto a part.
    pub fn preserves_partition(&self, partition: &[Vec<usize>]) -> bool {
        let mut part_of = vec![usize::MAX; self.degree];
        for (k, part) in partition.iter().enumerate() {
            for &x in part {
                part_of[x] = k;
            }
        }
        self.generators.iter().all(|g| {
            partition.iter().all(|part| {
                let target = part_of[g.apply(part[0])];
                part.iter().all(|&x| part_of[g.apply(x)] == target)
            })
        })
    }
}

pub(crate) fn orbits_of(degree: usize, gens: &[Perm]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; degree];
    let mut out = Vec::new();
    for start in 0..degree {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            for g in gens {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            k += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn minimal_block_unchecked(degree: usize, gens: &[Perm], a: usize, b: usize) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..degree).collect();
    let mut queue = VecDeque::new();
    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
    parent[rb.max(ra)] = ra.min(rb);
    queue.push_back((a, b));
    while let Some((x, y)) = queue.pop_front() {
        for g in gens {
            let (gx, gy) = (g.apply(x), g.apply(y));
            let (rx, ry) = (find(&mut parent, gx), find(&mut parent, gy));
            if rx != ry {
                parent[rx.max(ry)] = rx.min(ry);
                queue.push_back((gx, gy));
            }
        }
    }
    let root = find(&mut parent, a);
    (0..degree).filter(|&x| find(&mut parent, x) == root).collect()
}

fn block_system(degree: usize, gens: &[Perm], block: &[usize]) -> Vec<Vec<usize>> {
    let mut assigned = vec![false; degree];
    let mut blocks: Vec<Vec<usize>> = vec![block.to_vec()];
    for &x in block {
        assigned[x] = true;
    }
    let mut k = 0;
    while k < blocks.len() {
        for g in gens {
            let mut image: Vec<usize> = blocks[k].iter().map(|&x| g.apply(x)).collect();
            if assigned[image[0]] {
                continue;
            }
            image.sort_unstable();
            for &x in &image {
                assigned[x] = true;
            }
            blocks.push(image);
        }
        k += 1;
    }
    blocks.sort();
    blocks
}
