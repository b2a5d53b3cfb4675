//! Graph automorphism groups, canonical labelling and isomorphism testing by
//! individualization and equitable refinement.
//!
//! The search works on ordered partitions. A node is refined to an equitable
//! partition; if it is not discrete, each vertex of the first smallest
//! non-singleton cell is individualized in turn. Refinement records a trace
//! that depends only on the isomorphism class of (graph, node), which is used
//! both to discard subtrees and to order leaves.
//!
//! Automorphisms are found by comparing leaves with the first leaf, level by
//! level from the bottom of the first path, skipping children already known
//! to be equivalent. Canonical labelling then searches for the largest leaf
//! under (trace, relabelled edge list), pruning children by the orbits of the
//! pointwise stabilizer of the current path in the full automorphism group.

use std::cmp::Ordering;
use std::collections::VecDeque;

use sha2::{Digest, Sha256};

use crate::graphcore::Graph;
use crate::permgrp::{Perm, PermGroup};

/// An initial vertex colouring; cells are ordered by colour value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<usize>,
}

impl Coloring {
    pub fn new(colors: Vec<usize>) -> Self {
        Self { colors }
    }

    pub fn uniform(n: usize) -> Self {
        Self { colors: vec![0; n] }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn color(&self, v: usize) -> usize {
        self.colors[v]
    }

    /// Non-empty colour classes, by increasing colour.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut keys: Vec<usize> = self.colors.clone();
        keys.sort_unstable();
        keys.dedup();
        keys.iter()
            .map(|&k| (0..self.colors.len()).filter(|&v| self.colors[v] == k).collect())
            .collect()
    }
}

#[derive(Clone, Debug)]
struct Partition {
    lab: Vec<usize>,
    /// start position of the cell holding each vertex
    cell_of: Vec<usize>,
    /// indexed by cell start; end of that cell (exclusive)
    cell_end: Vec<usize>,
    cells: usize,
}

impl Partition {
    fn from_classes(n: usize, classes: &[Vec<usize>]) -> Self {
        let mut lab = Vec::with_capacity(n);
        let mut cell_of = vec![0; n];
        let mut cell_end = vec![0; n];
        for class in classes {
            let start = lab.len();
            for &v in class {
                cell_of[v] = start;
                lab.push(v);
            }
            if !class.is_empty() {
                cell_end[start] = lab.len();
            }
        }
        Self {
            lab,
            cell_of,
            cell_end,
            cells: classes.iter().filter(|c| !c.is_empty()).count(),
        }
    }

    fn is_discrete(&self) -> bool {
        self.cells == self.lab.len()
    }

    fn cell_starts(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.cells);
        let mut i = 0;
        while i < self.lab.len() {
            out.push(i);
            i = self.cell_end[i];
        }
        out
    }

    /// The first non-singleton cell with the largest number of cells it is
    /// joined to non-trivially (some but not all of a cell's vertices are
    /// neighbours). Equitability makes the count the same for every vertex
    /// of the cell, so one representative suffices.
    fn target_cell(&self, graph: &Graph) -> Option<usize> {
        let starts = self.cell_starts();
        let mut hits = vec![0usize; self.lab.len()];
        let mut best: Option<(usize, usize)> = None;
        for &c in &starts {
            if self.cell_end[c] - c == 1 {
                continue;
            }
            let v = self.lab[c];
            for w in graph.neighbors(v) {
                hits[self.cell_of[w]] += 1;
            }
            let mut joined = 0;
            for &d in &starts {
                if hits[d] > 0 && hits[d] < self.cell_end[d] - d {
                    joined += 1;
                }
                hits[d] = 0;
            }
            if best.is_none_or(|(_, j)| joined > j) {
                best = Some((c, joined));
            }
        }
        best.map(|(start, _)| start)
    }

    fn cell(&self, start: usize) -> &[usize] {
        &self.lab[start..self.cell_end[start]]
    }
}

const LEVEL_MARK: u64 = u64::MAX;

struct Refiner<'a> {
    graph: &'a Graph,
    count: Vec<u32>,
    touched: Vec<usize>,
    touched_flag: Vec<bool>,
    in_queue: Vec<bool>,
}

impl<'a> Refiner<'a> {
    fn new(graph: &'a Graph) -> Self {
        let n = graph.n();
        Self {
            graph,
            count: vec![0; n],
            touched: Vec::new(),
            touched_flag: vec![false; n],
            in_queue: vec![false; n],
        }
    }

    /// Refines `part` to the coarsest equitable partition finer than it,
    /// starting from the given splitter cells. Appends the trace to `trace`.
    fn refine(&mut self, part: &mut Partition, splitters: &[usize], trace: &mut Vec<u64>) {
        let n = part.lab.len();
        let mut queue = VecDeque::new();
        for &s in splitters {
            if !self.in_queue[s] {
                self.in_queue[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(w) = queue.pop_front() {
            self.in_queue[w] = false;
            if part.cells == n {
                continue;
            }
            let wend = part.cell_end[w];
            for i in w..wend {
                let u = part.lab[i];
                for v in self.graph.neighbors(u) {
                    if self.count[v] == 0 {
                        let c = part.cell_of[v];
                        if !self.touched_flag[c] {
                            self.touched_flag[c] = true;
                            self.touched.push(c);
                        }
                    }
                    self.count[v] += 1;
                }
            }
            self.touched.sort_unstable();
            trace.push(w as u64);
            for k in 0..self.touched.len() {
                let c = self.touched[k];
                self.touched_flag[c] = false;
                let e = part.cell_end[c];
                if e - c == 1 {
                    trace.push(((c as u64) << 32) | self.count[part.lab[c]] as u64);
                    continue;
                }
                let count = &self.count;
                part.lab[c..e].sort_unstable_by_key(|&v| count[v]);
                let mut starts = vec![c];
                for i in c + 1..e {
                    if count[part.lab[i]] != count[part.lab[i - 1]] {
                        starts.push(i);
                    }
                }
                trace.push(((c as u64) << 32) | starts.len() as u64);
                for (f, &s) in starts.iter().enumerate() {
                    let end = starts.get(f + 1).copied().unwrap_or(e);
                    trace.push((((end - s) as u64) << 32) | count[part.lab[s]] as u64);
                }
                if starts.len() == 1 {
                    continue;
                }
                let mut largest = 0;
                let mut largest_size = 0;
                for (f, &s) in starts.iter().enumerate() {
                    let end = starts.get(f + 1).copied().unwrap_or(e);
                    part.cell_end[s] = end;
                    for i in s..end {
                        part.cell_of[part.lab[i]] = s;
                    }
                    if end - s > largest_size {
                        largest = f;
                        largest_size = end - s;
                    }
                }
                part.cells += starts.len() - 1;
                let parent_queued = self.in_queue[c];
                for (f, &s) in starts.iter().enumerate() {
                    if parent_queued {
                        if f > 0 {
                            self.in_queue[s] = true;
                            queue.push_back(s);
                        }
                    } else if f != largest {
                        self.in_queue[s] = true;
                        queue.push_back(s);
                    }
                }
            }
            self.touched.clear();
            for i in w..wend {
                for v in self.graph.neighbors(part.lab[i]) {
                    self.count[v] = 0;
                }
            }
        }
        trace.push(part.cells as u64);
        trace.push(LEVEL_MARK);
    }

    fn root(&mut self, coloring: &Coloring) -> (Partition, Vec<u64>) {
        let classes = coloring.classes();
        let mut part = Partition::from_classes(self.graph.n(), &classes);
        let mut trace: Vec<u64> = classes.iter().map(|c| c.len() as u64).collect();
        trace.push(LEVEL_MARK);
        let starts = part.cell_starts();
        self.refine(&mut part, &starts, &mut trace);
        (part, trace)
    }

    fn child(&mut self, parent: &Partition, v: usize) -> (Partition, Vec<u64>) {
        let mut part = parent.clone();
        let s = part.cell_of[v];
        let e = part.cell_end[s];
        let mut trace = Vec::new();
        if e - s > 1 {
            let p = part.lab[s..e].iter().position(|&x| x == v).unwrap() + s;
            part.lab.swap(s, p);
            part.cell_end[s] = s + 1;
            part.cell_end[s + 1] = e;
            for i in s + 1..e {
                part.cell_of[part.lab[i]] = s + 1;
            }
            part.cells += 1;
        }
        trace.push(s as u64);
        self.refine(&mut part, &[s], &mut trace);
        (part, trace)
    }
}

/// Union-find orbits of a generator list.
struct Orbits {
    parent: Vec<usize>,
}

impl Orbits {
    fn new(n: usize, gens: &[&Perm]) -> Self {
        let mut o = Self {
            parent: (0..n).collect(),
        };
        for g in gens {
            for x in 0..n {
                o.union(x, g.apply(x));
            }
        }
        o
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

struct FirstPath {
    nodes: Vec<Partition>,
    /// trace produced when reaching node `d`
    traces: Vec<Vec<u64>>,
    chosen: Vec<usize>,
    leaf: Vec<usize>,
}

fn leaf_map(first: &[usize], other: &[usize]) -> Perm {
    let mut images = vec![0; first.len()];
    for (i, &v) in first.iter().enumerate() {
        images[v] = other[i];
    }
    Perm::from_images(images).expect("leaves are orderings of the vertices")
}

struct Search<'a> {
    graph: &'a Graph,
    refiner: Refiner<'a>,
}

impl<'a> Search<'a> {
    fn new(graph: &'a Graph) -> Self {
        Self {
            graph,
            refiner: Refiner::new(graph),
        }
    }

    fn first_path(&mut self, coloring: &Coloring) -> FirstPath {
        let (mut node, trace) = self.refiner.root(coloring);
        let mut nodes = Vec::new();
        let mut traces = vec![trace];
        let mut chosen = Vec::new();
        while let Some(cell) = node.target_cell(self.graph) {
            let v = node.lab[cell];
            let (next, trace) = self.refiner.child(&node, v);
            nodes.push(node);
            traces.push(trace);
            chosen.push(v);
            node = next;
        }
        FirstPath {
            nodes,
            traces,
            chosen,
            leaf: node.lab,
        }
    }

    /// Searches the subtree below `node` (at `depth`, reached by `path`) for
    /// a leaf equivalent to the first leaf.
    ///
    /// The first leaf met in the subtree is kept in `local`; later leaves
    /// equivalent to it give automorphisms fixing their common path, which
    /// are added to `gens` and let the search return to the node where the
    /// two paths diverge.
    fn explore(
        &mut self,
        first: &FirstPath,
        node: &Partition,
        path: &mut Vec<usize>,
        gens: &mut Vec<Perm>,
        local: &mut Option<(Vec<usize>, Vec<usize>)>,
    ) -> Outcome {
        if node.is_discrete() {
            let gamma = leaf_map(&first.leaf, &node.lab);
            if self.graph.is_automorphism(&gamma) {
                return Outcome::Found(gamma);
            }
            match local {
                None => *local = Some((node.lab.clone(), path.clone())),
                Some((leaf, leaf_path)) => {
                    let gamma = leaf_map(leaf, &node.lab);
                    if self.graph.is_automorphism(&gamma) {
                        gens.push(gamma);
                        let common = leaf_path.iter().zip(path.iter()).take_while(|(a, b)| a == b).count();
                        return Outcome::Backtrack(common);
                    }
                }
            }
            return Outcome::Exhausted;
        }
        let depth = path.len();
        let Some(cell) = node.target_cell(self.graph) else {
            return Outcome::Exhausted;
        };
        if first.nodes.get(depth).and_then(|n| n.target_cell(self.graph)) != Some(cell) {
            return Outcome::Exhausted;
        }
        let mut tried: Vec<usize> = Vec::new();
        for &w in node.cell(cell) {
            let fixing: Vec<&Perm> = gens
                .iter()
                .filter(|g| path.iter().all(|&x| g.apply(x) == x))
                .collect();
            let mut orbits = Orbits::new(self.graph.n(), &fixing);
            let rw = orbits.find(w);
            if tried.iter().any(|&u| orbits.find(u) == rw) {
                continue;
            }
            tried.push(w);
            let (child, trace) = self.refiner.child(node, w);
            if trace != first.traces[depth + 1] {
                continue;
            }
            path.push(w);
            let out = self.explore(first, &child, path, gens, local);
            path.pop();
            match out {
                Outcome::Found(g) => return Outcome::Found(g),
                Outcome::Backtrack(k) if k < depth => return Outcome::Backtrack(k),
                _ => {}
            }
        }
        Outcome::Exhausted
    }

    fn automorphisms(&mut self, first: &FirstPath) -> Vec<Perm> {
        let n = self.graph.n();
        let mut gens: Vec<Perm> = Vec::new();
        for d in (0..first.nodes.len()).rev() {
            let node = &first.nodes[d];
            let cell = node.target_cell(self.graph).expect("internal node");
            let v1 = first.chosen[d];
            let mut examined = vec![v1];
            for &v in node.cell(cell) {
                let mut orbits = Orbits::new(n, &gens.iter().collect::<Vec<_>>());
                let rv = orbits.find(v);
                if examined.iter().any(|&u| orbits.find(u) == rv) {
                    continue;
                }
                examined.push(v);
                let (child, trace) = self.refiner.child(node, v);
                if trace != first.traces[d + 1] {
                    continue;
                }
                let mut path: Vec<usize> = first.chosen[..d].to_vec();
                path.push(v);
                let mut local = None;
                if let Outcome::Found(gamma) = self.explore(first, &child, &mut path, &mut gens, &mut local) {
                    debug_assert!((0..d).all(|k| gamma.apply(first.chosen[k]) == first.chosen[k]));
                    gens.push(gamma);
                }
            }
        }
        gens
    }
}

enum Outcome {
    Found(Perm),
    /// resume at the node whose path has this length
    Backtrack(usize),
    Exhausted,
}

struct Best {
    trace: Vec<u64>,
    edges: Vec<(usize, usize)>,
    lab: Vec<usize>,
}

fn relabelled_edges(graph: &Graph, lab: &[usize]) -> Vec<(usize, usize)> {
    let mut pos = vec![0; lab.len()];
    for (i, &v) in lab.iter().enumerate() {
        pos[v] = i;
    }
    let mut edges: Vec<(usize, usize)> = graph
        .edges()
        .into_iter()
        .map(|(u, v)| {
            let (a, b) = (pos[u], pos[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    edges
}

impl<'a> Search<'a> {
    fn canonical_dfs(
        &mut self,
        node: &Partition,
        trace: &mut Vec<u64>,
        stabilizer: &PermGroup,
        best: &mut Option<Best>,
    ) {
        if let Some(b) = best.as_ref() {
            let k = trace.len().min(b.trace.len());
            if trace[..k] < b.trace[..k] {
                return;
            }
        }
        if node.is_discrete() {
            let edges = relabelled_edges(self.graph, &node.lab);
            let better = match best.as_ref() {
                None => true,
                Some(b) => match trace.as_slice().cmp(b.trace.as_slice()) {
                    Ordering::Greater => true,
                    Ordering::Less => false,
                    Ordering::Equal => edges > b.edges,
                },
            };
            if better {
                *best = Some(Best {
                    trace: trace.clone(),
                    edges,
                    lab: node.lab.clone(),
                });
            }
            return;
        }
        let cell = node.target_cell(self.graph).expect("non-discrete node");
        let gens: Vec<&Perm> = stabilizer.generators().iter().collect();
        let mut orbits = Orbits::new(self.graph.n(), &gens);
        let mut tried: Vec<usize> = Vec::new();
        for &w in node.cell(cell) {
            let rw = orbits.find(w);
            if tried.contains(&rw) {
                continue;
            }
            tried.push(rw);
            let (child, child_trace) = self.refiner.child(node, w);
            let mark = trace.len();
            trace.extend_from_slice(&child_trace);
            let next = stabilizer.stabilizer(w).expect("vertex in range");
            self.canonical_dfs(&child, trace, &next, best);
            trace.truncate(mark);
        }
    }
}

/// Canonical labelling of a graph: `labeling` sends each vertex to its
/// canonical label and `edges` is the sorted relabelled edge list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    n: usize,
    labeling: Perm,
    edges: Vec<(usize, usize)>,
}

impl CanonicalForm {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Vertex `v` gets canonical label `labeling().apply(v)`.
    pub fn labeling(&self) -> &Perm {
        &self.labeling
    }

    /// The fingerprint: canonical edges `(u, v)`, `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn same_graph(&self, other: &CanonicalForm) -> bool {
        self.n == other.n && self.edges == other.edges
    }

    /// Hex SHA-256 of the fingerprint, for reports.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("{}\n", self.n));
        for (u, v) in &self.edges {
            h.update(format!("{u} {v}\n"));
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Automorphism group together with the canonical form.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub group: PermGroup,
    pub canonical: CanonicalForm,
}

fn group_of(graph: &Graph, coloring: &Coloring) -> PermGroup {
    let n = graph.n();
    let mut search = Search::new(graph);
    let first = search.first_path(coloring);
    let gens = search.automorphisms(&first);
    for g in &gens {
        assert!(graph.is_automorphism(g), "engine produced a non-automorphism");
        assert!((0..n).all(|v| coloring.color(g.apply(v)) == coloring.color(v)));
    }
    PermGroup::new(n, gens).expect("generators have the graph's degree")
}

/// The full automorphism group of `graph`.
pub fn automorphism_group(graph: &Graph) -> PermGroup {
    group_of(graph, &Coloring::uniform(graph.n()))
}

/// Automorphisms of `graph` that preserve every colour class.
pub fn automorphism_group_colored(graph: &Graph, coloring: &Coloring) -> PermGroup {
    assert_eq!(coloring.len(), graph.n());
    group_of(graph, coloring)
}

/// Automorphism group and canonical form in one search.
pub fn analyze(graph: &Graph) -> Analysis {
    let coloring = Coloring::uniform(graph.n());
    let group = group_of(graph, &coloring);
    let mut search = Search::new(graph);
    let (root, root_trace) = search.refiner.root(&coloring);
    let mut trace = root_trace;
    let mut best = None;
    search.canonical_dfs(&root, &mut trace, &group, &mut best);
    let best = best.expect("the search reaches at least one leaf");
    let labeling = Perm::from_images({
        let mut pos = vec![0; best.lab.len()];
        for (i, &v) in best.lab.iter().enumerate() {
            pos[v] = i;
        }
        pos
    })
    .expect("leaf is an ordering");
    Analysis {
        group,
        canonical: CanonicalForm {
            n: graph.n(),
            labeling,
            edges: best.edges,
        },
    }
}

pub fn canonical_form(graph: &Graph) -> CanonicalForm {
    analyze(graph).canonical
}

/// An isomorphism `witness` with `g1.relabel(witness) == g2`, if one exists.
pub fn find_isomorphism(g1: &Graph, g2: &Graph) -> Option<Perm> {
    if g1.n() != g2.n() || g1.edge_count() != g2.edge_count() {
        return None;
    }
    let mut d1: Vec<usize> = (0..g1.n()).map(|v| g1.degree(v)).collect();
    let mut d2: Vec<usize> = (0..g2.n()).map(|v| g2.degree(v)).collect();
    d1.sort_unstable();
    d2.sort_unstable();
    if d1 != d2 {
        return None;
    }
    let c1 = canonical_form(g1);
    let c2 = canonical_form(g2);
    if !c1.same_graph(&c2) {
        return None;
    }
    let witness = c1.labeling().then(&c2.labeling().inverse());
    let ok = g1
        .edges()
        .iter()
        .all(|&(u, v)| g2.has_edge(witness.apply(u), witness.apply(v)));
    assert!(ok, "canonical forms agree but the witness fails");
    Some(witness)
}

pub fn are_isomorphic(g1: &Graph, g2: &Graph) -> bool {
    find_isomorphism(g1, g2).is_some()
}
