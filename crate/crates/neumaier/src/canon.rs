//! Canonical forms and automorphisms for colored graphs.
//!
//! The labeling algorithm is individualization plus equitable refinement.
//! Cells are refined until every cell has a constant neighbour count into
//! every other cell, the first smallest non-singleton cell is branched on,
//! and the search keeps two anchors: the first leaf reached, used to detect
//! automorphisms, and the leaf with the minimal (invariant sequence,
//! certificate) pair, whose certificate is the canonical key. Subtrees are
//! pruned by node invariants and by orbits of the automorphisms discovered
//! so far, restricted to the vertices fixed on the current path.
//!
//! Automorphism group orders come from a Schreier-Sims base and strong
//! generating set built over the generators the search emits.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigUint;
use num_traits::One;

use crate::graphkit::Graph;

/// Graph plus a vertex coloring. Isomorphisms must preserve colors; colors
/// are compared by numeric value.
#[derive(Clone, Debug)]
pub struct ColoredGraph {
    pub g: Graph,
    pub colors: Vec<u16>,
}

impl ColoredGraph {
    /// Wraps a graph with the all-zero coloring.
    pub fn monochrome(g: Graph) -> Self {
        let colors = vec![0; g.n()];
        ColoredGraph { g, colors }
    }

    pub fn new(g: Graph, colors: Vec<u16>) -> Self {
        assert_eq!(g.n(), colors.len(), "one color per vertex");
        ColoredGraph { g, colors }
    }
}

/// Output of [`canonical_form`].
///
/// `key` is equal for two colored graphs exactly when they are isomorphic.
/// `aut_generators` generate the full color-preserving automorphism group,
/// as permutations in image form (`perm[v]` is the image of `v`), and
/// `aut_order` is the order of that group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub key: Vec<u8>,
    pub aut_generators: Vec<Vec<u8>>,
    pub aut_order: BigUint,
}

// ---------------------------------------------------------------------------
// equitable refinement
// ---------------------------------------------------------------------------

type Cells = Vec<Vec<u8>>;

fn bitset_of(cell: &[u8]) -> u64 {
    cell.iter().fold(0u64, |acc, &v| acc | 1 << v)
}

/// Splits cells by neighbour counts into queued splitter sets until stable.
/// Sub-cells replace their parent in order of ascending count, so the final
/// cell order depends only on the isomorphism type of the colored graph and
/// of the individualized prefix.
fn refine(g: &Graph, cells: &mut Cells, queue: &mut VecDeque<u64>) {
    while let Some(splitter) = queue.pop_front() {
        let mut rebuilt: Cells = Vec::with_capacity(cells.len());
        for cell in cells.drain(..) {
            if cell.len() == 1 {
                rebuilt.push(cell);
                continue;
            }
            let mut keyed: Vec<(u32, u8)> = cell
                .iter()
                .map(|&v| ((g.neighbors(v as usize) & splitter).count_ones(), v))
                .collect();
            keyed.sort_unstable();
            if keyed.first().map(|e| e.0) == keyed.last().map(|e| e.0) {
                rebuilt.push(cell);
                continue;
            }
            let mut start = 0;
            while start < keyed.len() {
                let end = keyed[start..]
                    .iter()
                    .position(|e| e.0 != keyed[start].0)
                    .map_or(keyed.len(), |p| start + p);
                let sub: Vec<u8> = keyed[start..end].iter().map(|e| e.1).collect();
                queue.push_back(bitset_of(&sub));
                rebuilt.push(sub);
                start = end;
            }
        }
        *cells = rebuilt;
    }
}

/// Label-invariant summary of an equitable partition: cell count, then per
/// cell its size and its neighbour counts into every cell.
fn node_invariant(g: &Graph, cells: &Cells) -> Vec<u32> {
    let bitsets: Vec<u64> = cells.iter().map(|c| bitset_of(c)).collect();
    let mut inv = Vec::with_capacity(1 + cells.len() * (1 + cells.len()));
    inv.push(cells.len() as u32);
    for cell in cells {
        inv.push(cell.len() as u32);
        let rep = cell[0] as usize;
        for &bs in &bitsets {
            inv.push((g.neighbors(rep) & bs).count_ones());
        }
    }
    inv
}

fn initial_cells(cg: &ColoredGraph) -> Cells {
    let mut by_color: Vec<(u16, u8)> = cg
        .colors
        .iter()
        .enumerate()
        .map(|(v, &c)| (c, v as u8))
        .collect();
    by_color.sort_unstable();
    let mut cells: Cells = Vec::new();
    for (c, v) in by_color {
        match cells.last_mut() {
            Some(cell) if cg.colors[cell[0] as usize] == c => cell.push(v),
            _ => cells.push(vec![v]),
        }
    }
    cells
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------

#[derive(Clone)]
struct Leaf {
    inv_seq: Vec<Vec<u32>>,
    cert: Vec<u8>,
    perm: Vec<u8>,
}

struct Search<'a> {
    cg: &'a ColoredGraph,
    first: Option<Leaf>,
    best: Option<Leaf>,
    gens: Vec<Vec<u8>>,
}

fn certificate(cg: &ColoredGraph, perm: &[u8]) -> Vec<u8> {
    let n = perm.len();
    let mut cert = Vec::with_capacity(1 + 2 * n + n * n / 16 + 1);
    cert.push(n as u8);
    for &v in perm {
        cert.extend(cg.colors[v as usize].to_be_bytes());
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for p in 0..n {
        for q in p + 1..n {
            let bit = cg.g.has_edge(perm[p] as usize, perm[q] as usize);
            acc = acc << 1 | bit as u8;
            filled += 1;
            if filled == 8 {
                cert.push(acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        cert.push(acc << (8 - filled));
    }
    cert
}

/// Compares an in-progress invariant prefix against an anchor leaf. The
/// refinement invariants make equal-prefix paths reach discreteness at the
/// same depth, so a prefix comparison is enough.
fn cmp_prefix(prefix: &[Vec<u32>], anchor: &Leaf) -> std::cmp::Ordering {
    let take = prefix.len().min(anchor.inv_seq.len());
    prefix[..take].cmp(&anchor.inv_seq[..take])
}

impl<'a> Search<'a> {
    fn explore(&mut self, cells: Cells, inv_seq: Vec<Vec<u32>>, fixed: &mut Vec<u8>) {
        use std::cmp::Ordering::*;
        let keep_for_gens = match &self.first {
            None => true,
            Some(first) => cmp_prefix(&inv_seq, first) == Equal,
        };
        let keep_for_best = match &self.best {
            None => true,
            Some(best) => cmp_prefix(&inv_seq, best) != Greater,
        };
        if !keep_for_gens && !keep_for_best {
            return;
        }

        let target = cells.iter().position(|c| c.len() > 1).map(|_| {
            let min_len = cells.iter().map(|c| c.len()).filter(|&l| l > 1).min().unwrap();
            cells.iter().position(|c| c.len() == min_len).unwrap()
        });
        let Some(target) = target else {
            self.visit_leaf(&cells, inv_seq);
            return;
        };

        let branch: Vec<u8> = cells[target].clone();
        let mut visited: Vec<u8> = Vec::with_capacity(branch.len());
        for &v in &branch {
            if self.in_visited_orbit(v, &visited, fixed) {
                continue;
            }
            visited.push(v);
            let mut child: Cells = Vec::with_capacity(cells.len() + 1);
            let mut queue = VecDeque::new();
            for (i, cell) in cells.iter().enumerate() {
                if i == target {
                    let rest: Vec<u8> = cell.iter().copied().filter(|&u| u != v).collect();
                    queue.push_back(1u64 << v);
                    queue.push_back(bitset_of(&rest));
                    child.push(vec![v]);
                    child.push(rest);
                } else {
                    child.push(cell.clone());
                }
            }
            refine(&self.cg.g, &mut child, &mut queue);
            let mut child_inv = inv_seq.clone();
            child_inv.push(node_invariant(&self.cg.g, &child));
            fixed.push(v);
            self.explore(child, child_inv, fixed);
            fixed.pop();
        }
    }

    /// True if an already-branched sibling lies in the orbit of `v` under the
    /// subgroup of discovered automorphisms fixing the current path.
    fn in_visited_orbit(&self, v: u8, visited: &[u8], fixed: &[u8]) -> bool {
        if visited.is_empty() {
            return false;
        }
        let n = self.cg.g.n();
        let stab: Vec<&Vec<u8>> = self
            .gens
            .iter()
            .filter(|p| fixed.iter().all(|&f| p[f as usize] == f))
            .collect();
        if stab.is_empty() {
            return false;
        }
        let mut root: Vec<u8> = (0..n as u8).collect();
        fn find(root: &mut Vec<u8>, x: u8) -> u8 {
            let mut x = x;
            while root[x as usize] != x {
                let up = root[root[x as usize] as usize];
                root[x as usize] = up;
                x = up;
            }
            x
        }
        for p in stab {
            for x in 0..n {
                let (a, b) = (find(&mut root, x as u8), find(&mut root, p[x]));
                if a != b {
                    root[a.max(b) as usize] = a.min(b);
                }
            }
        }
        let rv = find(&mut root, v);
        visited.iter().any(|&u| find(&mut root, u) == rv)
    }

    fn visit_leaf(&mut self, cells: &Cells, inv_seq: Vec<Vec<u32>>) {
        let perm: Vec<u8> = cells.iter().map(|c| c[0]).collect();
        let cert = certificate(self.cg, &perm);
        let leaf = Leaf { inv_seq, cert, perm };
        if self.first.is_none() {
            self.first = Some(leaf.clone());
            self.best = Some(leaf);
            return;
        }
        for anchor in [self.first.clone(), self.best.clone()] {
            let anchor = anchor.unwrap();
            if anchor.inv_seq == leaf.inv_seq && anchor.cert == leaf.cert && anchor.perm != leaf.perm {
                let mut gen = vec![0u8; leaf.perm.len()];
                for p in 0..leaf.perm.len() {
                    gen[leaf.perm[p] as usize] = anchor.perm[p];
                }
                if !self.gens.contains(&gen) {
                    self.gens.push(gen);
                }
            }
        }
        let best = self.best.as_ref().unwrap();
        if (&leaf.inv_seq, &leaf.cert) < (&best.inv_seq, &best.cert) {
            self.best = Some(leaf);
        }
    }
}

/// Canonical form, automorphism generators and group order of `cg`.
pub fn canonical_form(cg: &ColoredGraph) -> CanonicalForm {
    assert_eq!(cg.g.n(), cg.colors.len(), "one color per vertex");
    let mut cells = initial_cells(cg);
    let mut queue: VecDeque<u64> = cells.iter().map(|c| bitset_of(c)).collect();
    refine(&cg.g, &mut cells, &mut queue);
    let inv_seq = vec![node_invariant(&cg.g, &cells)];
    let mut search = Search { cg, first: None, best: None, gens: Vec::new() };
    search.explore(cells, inv_seq, &mut Vec::new());
    let best = search.best.expect("search visits at least one leaf");
    let aut_order = permutation_group_order(cg.g.n(), &search.gens);
    CanonicalForm { key: best.cert, aut_generators: search.gens, aut_order }
}

/// Canonical key of an uncolored graph.
pub fn canonical_key(g: &Graph) -> Vec<u8> {
    canonical_form(&ColoredGraph::monochrome(g.clone())).key
}

/// Rebuilds the canonically labeled graph and its position colors from a key.
pub fn decode_key(key: &[u8]) -> (Graph, Vec<u16>) {
    let n = key[0] as usize;
    let colors: Vec<u16> = (0..n)
        .map(|p| u16::from_be_bytes([key[1 + 2 * p], key[2 + 2 * p]]))
        .collect();
    let bits = &key[1 + 2 * n..];
    let mut g = Graph::new(n);
    let mut idx = 0;
    for p in 0..n {
        for q in p + 1..n {
            if bits[idx / 8] >> (7 - idx % 8) & 1 == 1 {
                g.add_edge(p, q);
            }
            idx += 1;
        }
    }
    (g, colors)
}

/// Two colored graphs are isomorphic exactly when their keys agree.
pub fn are_isomorphic(a: &ColoredGraph, b: &ColoredGraph) -> bool {
    canonical_form(a).key == canonical_form(b).key
}

/// True if the automorphism group of `g` acts transitively on its vertices.
///
/// The generator orbits are merged first; remaining orbit pairs are settled
/// by comparing canonical keys with one marked vertex, which either proves
/// the orbits merge or exhibits a distinguishing invariant.
pub fn is_vertex_transitive(g: &Graph) -> bool {
    let n = g.n();
    if n <= 1 {
        return true;
    }
    let form = canonical_form(&ColoredGraph::monochrome(g.clone()));
    let mut root: Vec<usize> = (0..n).collect();
    fn find(root: &mut Vec<usize>, mut x: usize) -> usize {
        while root[x] != x {
            root[x] = root[root[x]];
            x = root[x];
        }
        x
    }
    let union = |root: &mut Vec<usize>, a: usize, b: usize| {
        let (a, b) = (find(root, a), find(root, b));
        if a != b {
            root[a.max(b)] = a.min(b);
        }
    };
    for p in &form.aut_generators {
        for v in 0..n {
            union(&mut root, v, p[v] as usize);
        }
    }
    let marked_key = |v: usize| {
        let mut colors = vec![0u16; n];
        colors[v] = 1;
        canonical_form(&ColoredGraph::new(g.clone(), colors)).key
    };
    let key0 = marked_key(0);
    loop {
        let reps: Vec<usize> = (1..n).filter(|&v| find(&mut root, v) == v).collect();
        let Some(&r) = reps.first() else {
            return true;
        };
        if marked_key(r) != key0 {
            return false;
        }
        union(&mut root, 0, r);
    }
}

// ---------------------------------------------------------------------------
// permutation group order
// ---------------------------------------------------------------------------

fn compose(a: &[u8], b: &[u8]) -> Vec<u8> {
    b.iter().map(|&x| a[x as usize]).collect()
}

fn inverse(p: &[u8]) -> Vec<u8> {
    let mut inv = vec![0u8; p.len()];
    for (x, &px) in p.iter().enumerate() {
        inv[px as usize] = x as u8;
    }
    inv
}

fn is_identity(p: &[u8]) -> bool {
    p.iter().enumerate().all(|(x, &px)| px as usize == x)
}

struct Chain {
    base: Vec<usize>,
    gens: Vec<Vec<Vec<u8>>>,
    transversals: Vec<HashMap<usize, Vec<u8>>>,
}

impl Chain {
    /// Generators available at `lvl`: everything assigned to this level or
    /// deeper, all of which fix the base points above it.
    fn level_gens(&self, lvl: usize) -> Vec<Vec<u8>> {
        self.gens[lvl..].iter().flatten().cloned().collect()
    }

    fn recompute_orbit(&mut self, lvl: usize) {
        let gens = self.level_gens(lvl);
        let b = self.base[lvl];
        let npts = gens[0].len();
        let id: Vec<u8> = (0..npts as u8).collect();
        let mut transversal = HashMap::from([(b, id)]);
        let mut frontier = vec![b];
        while let Some(pt) = frontier.pop() {
            let reach = transversal[&pt].clone();
            for s in &gens {
                let img = s[pt] as usize;
                if !transversal.contains_key(&img) {
                    transversal.insert(img, compose(s, &reach));
                    frontier.push(img);
                }
            }
        }
        self.transversals[lvl] = transversal;
    }

    /// Divides out transversal elements from `p` starting at `from`; returns
    /// the residue, which fixes every base point strictly above the level it
    /// stopped at.
    fn strip(&self, from: usize, mut p: Vec<u8>) -> Vec<u8> {
        for lvl in from..self.base.len() {
            if is_identity(&p) {
                break;
            }
            match self.transversals[lvl].get(&(p[self.base[lvl]] as usize)) {
                Some(u) => p = compose(&inverse(u), &p),
                None => break,
            }
        }
        p
    }

    fn push_level(&mut self, witness: &[u8]) {
        let b = witness.iter().enumerate().find(|(x, &px)| px as usize != *x).unwrap().0;
        self.base.push(b);
        self.gens.push(Vec::new());
        self.transversals.push(HashMap::new());
    }

    /// Returns a Schreier generator of `lvl` that does not strip to the
    /// identity through the levels below, if one exists.
    fn failing_schreier_gen(&self, lvl: usize) -> Option<Vec<u8>> {
        let gens = self.level_gens(lvl);
        let mut points: Vec<usize> = self.transversals[lvl].keys().copied().collect();
        points.sort_unstable();
        for beta in points {
            let t = &self.transversals[lvl][&beta];
            for s in &gens {
                let u = &self.transversals[lvl][&(s[beta] as usize)];
                let schreier = compose(&inverse(u), &compose(s, t));
                let residue = self.strip(lvl + 1, schreier);
                if !is_identity(&residue) {
                    return Some(residue);
                }
            }
        }
        None
    }

    fn order(&self) -> BigUint {
        let mut ord = BigUint::one();
        for t in &self.transversals {
            ord *= BigUint::from(t.len());
        }
        ord
    }
}

/// Order of the permutation group generated by `gens` on `n` points.
///
/// Builds a base and strong generating set by closing the stabilizer chain
/// level by level: a level whose Schreier generators all strip to the
/// identity is complete, and any residue is assigned one level down, from
/// where the march resumes. Orbits are recomputed whenever a level is
/// revisited, so additions deep in the chain propagate back up.
pub fn permutation_group_order(n: usize, gens: &[Vec<u8>]) -> BigUint {
    debug_assert!(gens.iter().all(|p| p.len() == n));
    let _ = n;
    let nontrivial: Vec<Vec<u8>> = gens.iter().filter(|p| !is_identity(p)).cloned().collect();
    let Some(witness) = nontrivial.first() else {
        return BigUint::one();
    };
    let mut chain = Chain { base: Vec::new(), gens: Vec::new(), transversals: Vec::new() };
    chain.push_level(&witness.clone());
    chain.gens[0] = nontrivial;
    let mut lvl = 0usize;
    loop {
        chain.recompute_orbit(lvl);
        match chain.failing_schreier_gen(lvl) {
            Some(residue) => {
                if chain.base.len() == lvl + 1 {
                    chain.push_level(&residue);
                }
                chain.gens[lvl + 1].push(residue);
                lvl += 1;
            }
            None => {
                if lvl == 0 {
                    return chain.order();
                }
                lvl -= 1;
            }
        }
    }
}
