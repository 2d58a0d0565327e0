//! The twelve 16-vertex base triples (Γ, ω₁, ω₂).
//!
//! A triple is an edge-regular (16,6,2) graph together with an ordered
//! bipartition into two 8-sets, each inducing two disjoint 4-cycles. All
//! triples here live on a fixed frame: ω₁ = {0..7} with cycles 0-1-2-3 and
//! 4-5-6-7, ω₂ = {8..15} with cycles 8-9-10-11 and 12-13-14-15. The module
//! builds the classes explicitly from their cross-adjacency patterns,
//! re-derives them by exhaustive search, computes the alignment composite
//! around the four cycles, and enumerates the compatible partition pairs.

use thiserror::Error;

use crate::canon::{canonical_form, ColoredGraph};
use crate::graphkit::{bits, cliques_of_size, edge_regular_params, Graph};

/// Bitsets of the two frame halves.
pub const OMEGA1: u64 = 0x00ff;
pub const OMEGA2: u64 = 0xff00;

/// The four frame cycles in cyclic vertex order: C₁ and C₃ lie in ω₁,
/// C₂ and C₄ in ω₂.
pub const CYCLES: [[usize; 4]; 4] = [
    [0, 1, 2, 3],
    [8, 9, 10, 11],
    [4, 5, 6, 7],
    [12, 13, 14, 15],
];

/// The eight symmetries of the 4-cycle 0-1-2-3, as position maps. Listed
/// with the identity first, then rotations, then reflections.
pub const D8: [[usize; 4]; 8] = [
    [0, 1, 2, 3],
    [1, 2, 3, 0],
    [3, 0, 1, 2],
    [2, 3, 0, 1],
    [2, 1, 0, 3],
    [0, 3, 2, 1],
    [1, 0, 3, 2],
    [3, 2, 1, 0],
];

/// Conjugacy class of a 4-cycle symmetry: 0 identity, 1 quarter turns,
/// 2 half turn, 3 diagonal reflections, 4 edge reflections.
pub fn d8_class(p: &[usize; 4]) -> u8 {
    let fixed = (0..4).filter(|&i| p[i] == i).count();
    let rotation = (0..4).all(|i| p[(i + 1) % 4] == (p[i] + 1) % 4);
    match (fixed, rotation) {
        (4, _) => 0,
        (0, true) if p[0] == 2 => 2,
        (0, true) => 1,
        (2, false) => 3,
        (0, false) => 4,
        _ => unreachable!("not a 4-cycle symmetry: {p:?}"),
    }
}

pub fn d8_label(p: &[usize; 4]) -> &'static str {
    const LABELS: [&str; 8] = [
        "()",
        "(1234)",
        "(1432)",
        "(13)(24)",
        "(13)",
        "(24)",
        "(12)(34)",
        "(14)(23)",
    ];
    let idx = D8.iter().position(|q| q == p).expect("not a D8 element");
    LABELS[idx]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairType {
    T1,
    T2,
    T3a,
    T3b,
}

/// A classified triple on the standard frame. `tag` is the class number,
/// 1 through 12, with 1 the rook triple.
#[derive(Clone, Debug)]
pub struct Triple {
    pub g: Graph,
    pub omega: [u64; 2],
    pub cycles: [[usize; 4]; 4],
    pub tag: u8,
}

/// Two partitions of the 16 frame vertices into independent 4-sets, parts
/// as bitsets. Parts 0 and 1 lie in ω₁, parts 2 and 3 in ω₂; within each
/// half the part containing the smallest vertex comes first. Parts of `p`
/// and `pp` in the same half intersect in exactly 2 vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartitionPair {
    pub p: [u64; 4],
    pub pp: [u64; 4],
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TriplesError {
    #[error("degree violation at vertex {vertex}: expected 6, found {found}")]
    DegreeViolation { vertex: usize, found: u32 },
    #[error("cross pair degree multiset {multiset:?} matches no type")]
    UnrecognizedPair { multiset: [u32; 4] },
    #[error("alignment map undefined: {reason}")]
    AlignmentUndefined { reason: String },
}

/// Coloring that pins the ordered bipartition during isomorphism tests.
pub fn omega_colors() -> Vec<u16> {
    (0..16).map(|v| (v >= 8) as u16).collect()
}

fn frame_graph() -> Graph {
    let mut g = Graph::new(16);
    for cycle in &CYCLES {
        for i in 0..4 {
            g.add_edge(cycle[i], cycle[(i + 1) % 4]);
        }
    }
    g
}

/// Cross-adjacency patterns, one row per source cycle position, entries
/// being positions on the next cycle. The forward block serves the legs
/// C₁→C₂ and C₃→C₄, the closing block the legs C₂→C₃ and C₄→C₁; on the
/// last leg the chosen symmetry is applied to its positions.
struct Pattern {
    forward: [&'static [usize]; 4],
    closing: [&'static [usize]; 4],
}

fn pattern(t: PairType) -> Pattern {
    match t {
        PairType::T1 => Pattern {
            forward: [&[0, 1], &[1, 2], &[2, 3], &[0, 3]],
            closing: [&[2, 3], &[0, 3], &[0, 1], &[1, 2]],
        },
        PairType::T2 => Pattern {
            forward: [&[0, 1, 2], &[2], &[0, 2, 3], &[0]],
            closing: [&[3], &[0, 1, 3], &[1], &[1, 2, 3]],
        },
        PairType::T3a => Pattern {
            forward: [&[0, 1, 2], &[2, 3], &[0, 3], &[0]],
            closing: [&[3], &[0, 1, 3], &[1, 2], &[2, 3]],
        },
        PairType::T3b => Pattern {
            forward: [&[0, 1, 2], &[2, 3], &[3], &[0, 3]],
            closing: [&[2, 3], &[0, 1, 3], &[1, 2], &[2]],
        },
    }
}

/// Builds the 16-vertex graph for a pair type and closing symmetry. The
/// mixed and skew types alternate the two blocks around the necklace, so
/// that at every middle vertex the edges received and sent add up to
/// four; the balanced type has flat profiles and repeats the forward
/// block, its complement closing the necklace. The closing leg between
/// C₄ and C₁ applies `phi`. Errors if any vertex misses degree 6, which
/// is exactly the condition ruling out a symmetry.
pub fn build_gamma(t: PairType, phi: [usize; 4]) -> Result<Triple, TriplesError> {
    assert!(D8.contains(&phi), "closing symmetry must be a 4-cycle symmetry");
    let mut g = frame_graph();
    let pat = pattern(t);
    let middle = if t == PairType::T1 { &pat.forward } else { &pat.closing };
    for (src, dst, rows) in [
        (0usize, 1usize, &pat.forward),
        (1, 2, middle),
        (2, 3, &pat.forward),
    ] {
        for (pos, targets) in rows.iter().enumerate() {
            let x = CYCLES[src][pos];
            for &q in *targets {
                g.add_edge(x, CYCLES[dst][q]);
            }
        }
    }
    for (pos, targets) in pat.closing.iter().enumerate() {
        let x = CYCLES[3][pos];
        for &q in *targets {
            g.add_edge(x, CYCLES[0][phi[q]]);
        }
    }
    for v in 0..16 {
        let found = g.degree(v);
        if found != 6 {
            return Err(TriplesError::DegreeViolation { vertex: v, found });
        }
    }
    debug_assert_eq!(
        edge_regular_params(&g).map(|p| (p.v, p.k, p.lambda)),
        Some((16, 6, 2))
    );
    let tag = match (t, d8_class(&phi)) {
        (PairType::T1, 0) => 2,
        (PairType::T1, 1) => 3,
        (PairType::T1, 2) => 4,
        (PairType::T1, 3) => 5,
        (PairType::T1, 4) => 6,
        (PairType::T2, 0) => 7,
        (PairType::T2, 2) => 8,
        (PairType::T2, 3) => 9,
        (PairType::T3a, 0) => 10,
        (PairType::T3b, 0) => 11,
        (PairType::T3b, 3) => 12,
        (t, c) => unreachable!("no class for surviving symmetry: {t:?} class {c}"),
    };
    Ok(Triple { g, omega: [OMEGA1, OMEGA2], cycles: CYCLES, tag })
}

/// The rook triple: the frame graph completed to the 4x4 rook graph by
/// assigning grid cells so that the two halves are the diagonal blocks.
pub fn rook4_triple() -> Triple {
    let cells: [(usize, usize); 16] = [
        (0, 0), (0, 1), (1, 1), (1, 0),
        (2, 2), (2, 3), (3, 3), (3, 2),
        (0, 2), (0, 3), (1, 3), (1, 2),
        (2, 0), (2, 1), (3, 1), (3, 0),
    ];
    let mut g = Graph::new(16);
    for u in 0..16 {
        for v in u + 1..16 {
            if cells[u].0 == cells[v].0 || cells[u].1 == cells[v].1 {
                g.add_edge(u, v);
            }
        }
    }
    let tr = Triple { g, omega: [OMEGA1, OMEGA2], cycles: CYCLES, tag: 1 };
    debug_assert!(check_frame(&tr.g));
    tr
}

/// True if the graph carries the frame structure: edge-regular (16,6,2)
/// and each half inducing exactly the two frame cycles.
pub fn check_frame(g: &Graph) -> bool {
    if g.n() != 16 {
        return false;
    }
    if edge_regular_params(g).map(|p| (p.v, p.k, p.lambda)) != Some((16, 6, 2)) {
        return false;
    }
    let frame = frame_graph();
    for u in 0..16 {
        for v in u + 1..16 {
            let same_half = (u < 8) == (v < 8);
            if same_half && g.has_edge(u, v) != frame.has_edge(u, v) {
                return false;
            }
        }
    }
    true
}

/// Per-vertex neighbour counts of one cycle into another, in cycle order.
fn cross_profile(g: &Graph, c1: &[usize; 4], c2: &[usize; 4]) -> [u32; 4] {
    let mask = c2.iter().fold(0u64, |acc, &v| acc | 1 << v);
    let mut out = [0; 4];
    for (i, &x) in c1.iter().enumerate() {
        out[i] = (g.neighbors(x) & mask).count_ones();
    }
    out
}

/// Classifies the cross pair of two 4-cycles from different halves by the
/// multiset of neighbour counts, with the 1-vertex/3-vertex adjacency
/// deciding between the two mixed cases.
pub fn pair_type(g: &Graph, c1: &[usize; 4], c2: &[usize; 4]) -> Result<PairType, TriplesError> {
    let profile = cross_profile(g, c1, c2);
    let mut sorted = profile;
    sorted.sort_unstable();
    match sorted {
        [2, 2, 2, 2] => Ok(PairType::T1),
        [1, 1, 3, 3] => Ok(PairType::T2),
        [1, 2, 2, 3] => {
            let lo = c1[profile.iter().position(|&c| c == 1).unwrap()];
            let hi = c1[profile.iter().position(|&c| c == 3).unwrap()];
            if g.has_edge(lo, hi) {
                Ok(PairType::T3a)
            } else {
                Ok(PairType::T3b)
            }
        }
        multiset => Err(TriplesError::UnrecognizedPair { multiset }),
    }
}

/// The unique cycle isomorphism C₁ → C₂ for a mixed or skew cross pair:
/// 1-vertices go to their unique neighbour, 3-vertices to the middle of
/// their neighbour path, and 2-vertices to whichever of their two
/// neighbours extends this to a cycle isomorphism. Returns the image of
/// each position of `c1` as a position of `c2`.
fn vertex_alignment(
    g: &Graph,
    c1: &[usize; 4],
    c2: &[usize; 4],
) -> Result<[usize; 4], TriplesError> {
    let undefined = |reason: String| TriplesError::AlignmentUndefined { reason };
    let mask2 = c2.iter().fold(0u64, |acc, &v| acc | 1 << v);
    let mut allowed: [u64; 4] = [0; 4];
    for (i, &x) in c1.iter().enumerate() {
        let nbrs = g.neighbors(x) & mask2;
        allowed[i] = match nbrs.count_ones() {
            1 | 2 => nbrs,
            3 => {
                let middle = bits(nbrs)
                    .find(|&m| nbrs & g.neighbors(m) & mask2 == nbrs & !(1 << m))
                    .ok_or_else(|| undefined(format!("no middle neighbour for vertex {x}")))?;
                1 << middle
            }
            c => return Err(undefined(format!("vertex {x} has {c} neighbours across"))),
        };
    }
    let mut survivors = D8.iter().filter(|sym| {
        (0..4).all(|i| allowed[i] >> c2[sym[i]] & 1 == 1)
    });
    let sym = survivors
        .next()
        .ok_or_else(|| undefined("no cycle isomorphism is compatible".into()))?;
    if survivors.next().is_some() {
        return Err(undefined("cycle isomorphism is not unique".into()));
    }
    Ok(*sym)
}

/// The vertex-to-edge alignment for a balanced cross pair, as the map from
/// positions of `c1` to edges of `c2`; each edge is named by the cycle
/// position it starts at. Injectivity can fail (it does on the rook), in
/// which case the alignment is undefined.
fn edge_alignment(g: &Graph, c1: &[usize; 4], c2: &[usize; 4]) -> Result<[usize; 4], TriplesError> {
    let undefined = |reason: String| TriplesError::AlignmentUndefined { reason };
    let mut out = [0; 4];
    for (i, &x) in c1.iter().enumerate() {
        let edge = (0..4)
            .filter(|&e| {
                g.has_edge(x, c2[e]) && g.has_edge(x, c2[(e + 1) % 4])
            })
            .collect::<Vec<_>>();
        match edge.as_slice() {
            [e] => out[i] = *e,
            _ => return Err(undefined(format!("vertex {x} spans {} edges", edge.len()))),
        }
    }
    let mut seen = [false; 4];
    for &e in &out {
        if seen[e] {
            return Err(undefined("vertex-to-edge map is not injective".into()));
        }
        seen[e] = true;
    }
    Ok(out)
}

/// The composite alignment around C₁ → C₂ → C₃ → C₄ → C₁, as a symmetry of
/// C₁ in position form. For a balanced pair the single maps swap vertices
/// and edges, so the composite pairs them up; for the other types it is a
/// plain composition of cycle isomorphisms.
pub fn delta_1234(tr: &Triple) -> Result<[usize; 4], TriplesError> {
    let order = [tr.cycles[0], tr.cycles[1], tr.cycles[2], tr.cycles[3]];
    delta_around(&tr.g, &order)
}

/// The same composite starting from an arbitrary cycle order.
pub fn delta_around(g: &Graph, order: &[[usize; 4]; 4]) -> Result<[usize; 4], TriplesError> {
    let t = pair_type(g, &order[0], &order[1])?;
    let legs: Vec<(&[usize; 4], &[usize; 4])> = (0..4).map(|i| (&order[i], &order[(i + 1) % 4])).collect();
    if t == PairType::T1 {
        // Vertex to edge on odd legs, edge back to vertex on even legs: an
        // edge starting at position e maps to the common neighbour of its
        // two endpoints on the next cycle.
        let mut composite = [0usize; 4];
        for start in 0..4 {
            let mut pos = start;
            let mut is_edge = false;
            for &(ca, cb) in &legs {
                if !is_edge {
                    pos = edge_alignment(g, ca, cb)?[pos];
                    is_edge = true;
                } else {
                    let u = ca[pos];
                    let v = ca[(pos + 1) % 4];
                    let common = (0..4)
                        .filter(|&q| g.has_edge(u, cb[q]) && g.has_edge(v, cb[q]))
                        .collect::<Vec<_>>();
                    pos = match common.as_slice() {
                        [q] => *q,
                        _ => {
                            return Err(TriplesError::AlignmentUndefined {
                                reason: format!(
                                    "edge {{{u},{v}}} has {} common neighbours across",
                                    common.len()
                                ),
                            })
                        }
                    };
                    is_edge = false;
                }
            }
            assert!(!is_edge, "four legs return to vertices");
            composite[start] = pos;
        }
        return Ok(composite);
    }
    let mut composite = [0, 1, 2, 3];
    for &(ca, cb) in &legs {
        let step = vertex_alignment(g, ca, cb)?;
        composite = [
            step[composite[0]],
            step[composite[1]],
            step[composite[2]],
            step[composite[3]],
        ];
    }
    Ok(composite)
}

/// Assigns the class tag of a frame graph: the rook by its 4-clique,
/// everything else by pair type and the conjugacy class of the composite
/// alignment.
fn tag_of(g: &Graph) -> u8 {
    if !cliques_of_size(g, 4).is_empty() {
        return 1;
    }
    let t = pair_type(g, &CYCLES[0], &CYCLES[1]).expect("frame graph has a cross type");
    let delta = delta_around(g, &[CYCLES[0], CYCLES[1], CYCLES[2], CYCLES[3]])
        .expect("composite alignment defined off the rook");
    match (t, d8_class(&delta)) {
        (PairType::T1, 0) => 2,
        (PairType::T1, 1) => 3,
        (PairType::T1, 2) => 4,
        (PairType::T1, 3) => 5,
        (PairType::T1, 4) => 6,
        (PairType::T2, 0) => 7,
        (PairType::T2, 2) => 8,
        (PairType::T2, 3) => 9,
        (PairType::T3a, 0) => 10,
        (PairType::T3b, 0) => 11,
        (PairType::T3b, 3) => 12,
        (t, c) => unreachable!("frame graph with type {t:?} and class {c}"),
    }
}

/// Exhaustively re-derives the twelve classes: the frame edges are fixed,
/// the backtracking chooses the four cross-neighbours of each ω₁ vertex,
/// pruning on the two-common-neighbour condition, and solutions are
/// deduplicated as colored graphs respecting the ordered bipartition.
/// Returned sorted by tag, exactly one triple per tag. The derivation runs
/// once; later calls serve a cached copy.
pub fn classify_all_triples() -> Vec<Triple> {
    static CACHE: std::sync::OnceLock<Vec<Triple>> = std::sync::OnceLock::new();
    CACHE.get_or_init(derive_all_triples).clone()
}

struct FrameSearch {
    candidates: Vec<u64>,
    frame: Graph,
    cycle_partners: [u64; 16],
    chosen: Vec<u64>,
    // Cross-neighbour counts so far per ω₂ cycle edge and per ω₂ vertex.
    pair_load: [u32; 8],
    vertex_load: [u32; 8],
    // All 128 frame symmetries fixing ω₁ pointwise, as vertex maps on ω₂.
    omega2_perms: Vec<[usize; 16]>,
    classes: Vec<(Vec<u8>, Triple)>,
}

/// The eight ω₂ cycle edges, in the order tracked by `pair_load`.
const OMEGA2_EDGES: [(usize, usize); 8] =
    [(8, 9), (9, 10), (10, 11), (8, 11), (12, 13), (13, 14), (14, 15), (12, 15)];

fn omega2_perms() -> Vec<[usize; 16]> {
    let mut out = Vec::with_capacity(128);
    for pa in D8 {
        for pb in D8 {
            for swap in [false, true] {
                let mut perm = [0usize; 16];
                for i in 0..4 {
                    if swap {
                        perm[8 + i] = 12 + pa[i];
                        perm[12 + i] = 8 + pb[i];
                    } else {
                        perm[8 + i] = 8 + pa[i];
                        perm[12 + i] = 12 + pb[i];
                    }
                }
                out.push(perm);
            }
        }
    }
    out
}

impl FrameSearch {
    /// True when `block` is lexicographically minimal among its images
    /// under the cycle symmetries permuting its four positions.
    fn lex_min_under_cycle_symmetry(block: &[u64]) -> bool {
        let t = [block[0], block[1], block[2], block[3]];
        D8.iter().all(|p| t <= [t[p[0]], t[p[1]], t[p[2]], t[p[3]]])
    }

    /// True unless relabeling ω₂ by some symmetry makes the prefix ending
    /// in `set` lexicographically smaller, which rules the branch out: any
    /// completion would be beaten by its own relabeled image.
    fn prefix_minimal_under_omega2(&self, x: usize, set: u64) -> bool {
        'perm: for perm in &self.omega2_perms {
            let relabel = |s: u64| bits(s).fold(0u64, |acc, y| acc | 1 << perm[y]);
            for j in 0..=x {
                let original = if j == x { set } else { self.chosen[j] };
                let image = relabel(original);
                if image < original {
                    return false;
                }
                if image > original {
                    continue 'perm;
                }
            }
        }
        true
    }

    fn search(&mut self, x: usize) {
        // Each complete ω₁ cycle must come out minimal under its own
        // symmetries, and the first cycle minimal against the second;
        // the surviving representatives still cover every class, since
        // the orbit-wide minimum passes all of the separate tests.
        if x == 4 && !Self::lex_min_under_cycle_symmetry(&self.chosen[0..4]) {
            return;
        }
        if x == 8 {
            if !Self::lex_min_under_cycle_symmetry(&self.chosen[4..8])
                || self.chosen[0..4] > self.chosen[4..8]
            {
                return;
            }
            self.finish_leaf();
            return;
        }
        'cand: for ci in 0..self.candidates.len() {
            let set = self.candidates[ci];
            // Prefix consequence of the leaf ordering checks: position 0 of
            // each block holds the smallest set, and block 1 leads block 2.
            if x >= 1 && set < self.chosen[if x >= 5 { 4 } else { 0 }] {
                continue;
            }
            for u in bits(self.cycle_partners[x] & ((1 << x) - 1)) {
                if (set & self.chosen[u]).count_ones() != 2 {
                    continue 'cand;
                }
            }
            for y in bits(set) {
                let in_omega1: u64 = self
                    .chosen
                    .iter()
                    .enumerate()
                    .filter(|(_, &s)| s >> y & 1 == 1)
                    .fold(0, |acc, (u, _)| acc | 1 << u);
                let partial = (self.cycle_partners[x] & in_omega1).count_ones()
                    + (self.cycle_partners[y] & set).count_ones();
                if partial > 2 {
                    continue 'cand;
                }
            }
            for (i, &(u, v)) in OMEGA2_EDGES.iter().enumerate() {
                if set >> u & 1 == 1 && set >> v & 1 == 1 && self.pair_load[i] == 2 {
                    continue 'cand;
                }
            }
            for y in 8..16 {
                let load = self.vertex_load[y - 8] + (set >> y & 1) as u32;
                if load > 4 || 4 - load > 7 - x as u32 {
                    continue 'cand;
                }
            }
            if !self.prefix_minimal_under_omega2(x, set) {
                continue;
            }
            self.push(set);
            self.search(x + 1);
            self.pop();
        }
    }

    fn push(&mut self, set: u64) {
        for (i, &(u, v)) in OMEGA2_EDGES.iter().enumerate() {
            if set >> u & 1 == 1 && set >> v & 1 == 1 {
                self.pair_load[i] += 1;
            }
        }
        for y in bits(set) {
            self.vertex_load[y - 8] += 1;
        }
        self.chosen.push(set);
    }

    fn pop(&mut self) {
        let set = self.chosen.pop().unwrap();
        for (i, &(u, v)) in OMEGA2_EDGES.iter().enumerate() {
            if set >> u & 1 == 1 && set >> v & 1 == 1 {
                self.pair_load[i] -= 1;
            }
        }
        for y in bits(set) {
            self.vertex_load[y - 8] -= 1;
        }
    }

    fn finish_leaf(&mut self) {
        let mut g = self.frame.clone();
        for (u, &set) in self.chosen.iter().enumerate() {
            for v in bits(set) {
                g.add_edge(u, v);
            }
        }
        if edge_regular_params(&g).map(|p| (p.v, p.k, p.lambda)) != Some((16, 6, 2)) {
            return;
        }
        let key = canonical_form(&ColoredGraph::new(g.clone(), omega_colors())).key;
        if self.classes.iter().all(|(k, _)| *k != key) {
            let tag = tag_of(&g);
            self.classes.push((key, Triple { g, omega: [OMEGA1, OMEGA2], cycles: CYCLES, tag }));
        }
    }
}

fn derive_all_triples() -> Vec<Triple> {
    let frame = frame_graph();
    let mut cycle_partners = [0u64; 16];
    for (v, slot) in cycle_partners.iter_mut().enumerate() {
        *slot = frame.neighbors(v);
    }
    let mut search = FrameSearch {
        candidates: (0u64..256).filter(|m| m.count_ones() == 4).map(|m| m << 8).collect(),
        frame,
        cycle_partners,
        chosen: Vec::with_capacity(8),
        pair_load: [0; 8],
        vertex_load: [0; 8],
        omega2_perms: omega2_perms(),
        classes: Vec::new(),
    };
    search.search(0);
    let mut out: Vec<Triple> = search.classes.into_iter().map(|(_, t)| t).collect();
    out.sort_by_key(|t| t.tag);
    assert_eq!(out.len(), 12, "the frame search yields twelve classes");
    assert!(out.iter().enumerate().all(|(i, t)| t.tag == i as u8 + 1));
    out
}

/// The four ordered pairs of compatible partitions. Each half has exactly
/// two partitions into two independent 4-sets, built from the diagonals of
/// its cycles; a compatible pair takes different partitions of each half
/// for `p` and `pp`.
pub fn enumerate_partition_pairs(tr: &Triple) -> Vec<PartitionPair> {
    let halves: Vec<[[u64; 2]; 2]> = [0usize, 1].iter().map(|&h| {
        let cycles = if h == 0 { [tr.cycles[0], tr.cycles[2]] } else { [tr.cycles[1], tr.cycles[3]] };
        let diag = |c: [usize; 4], k: usize| -> u64 { 1 << c[k] | 1 << c[k + 2] };
        // Partition 0 joins equal diagonals, partition 1 joins opposite ones.
        [
            [diag(cycles[0], 0) | diag(cycles[1], 0), diag(cycles[0], 1) | diag(cycles[1], 1)],
            [diag(cycles[0], 0) | diag(cycles[1], 1), diag(cycles[0], 1) | diag(cycles[1], 0)],
        ]
    }).collect();
    for h in &halves {
        for partition in h {
            for &part in partition {
                assert!(tr.g.is_independent(part), "cycle diagonals are independent");
            }
        }
    }
    let mut out = Vec::with_capacity(4);
    for a in 0..2 {
        for b in 0..2 {
            let p = [halves[0][a][0], halves[0][a][1], halves[1][b][0], halves[1][b][1]];
            let pp = [
                halves[0][1 - a][0],
                halves[0][1 - a][1],
                halves[1][1 - b][0],
                halves[1][1 - b][1],
            ];
            out.push(PartitionPair { p, pp });
        }
    }
    for pair in &out {
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!((pair.p[i] & pair.pp[j]).count_ones(), 2);
                assert_eq!((pair.p[2 + i] & pair.pp[2 + j]).count_ones(), 2);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::{are_isomorphic, canonical_form, ColoredGraph};
    use crate::graphkit::common_neighbors;

    fn colored(tr: &Triple) -> ColoredGraph {
        ColoredGraph::new(tr.g.clone(), omega_colors())
    }

    #[test]
    fn rook_triple_satisfies_the_frame_conditions() {
        let tr = rook4_triple();
        assert!(check_frame(&tr.g));
        assert_eq!(cliques_of_size(&tr.g, 4).len(), 8);
        for v in 0..16 {
            let local = tr.g.neighbors(v);
            let has_triangle = bits(local)
                .any(|u| local & tr.g.neighbors(u) != 0);
            assert!(has_triangle, "rook local graphs are two triangles");
        }
        assert!(are_isomorphic(
            &ColoredGraph::monochrome(tr.g.clone()),
            &ColoredGraph::monochrome(crate::samples::rook4())
        ));
    }

    #[test]
    fn surviving_symmetries_per_type() {
        let ok = |t, phi| build_gamma(t, phi).is_ok();
        for phi in D8 {
            assert!(ok(PairType::T1, phi), "all symmetries close a balanced pair");
        }
        for phi in D8 {
            let want = matches!(d8_label(&phi), "()" | "(13)" | "(24)" | "(13)(24)");
            assert_eq!(ok(PairType::T2, phi), want, "{}", d8_label(&phi));
        }
        for phi in D8 {
            assert_eq!(ok(PairType::T3a, phi), phi == D8[0], "{}", d8_label(&phi));
        }
        for phi in D8 {
            let want = matches!(d8_label(&phi), "()" | "(24)");
            assert_eq!(ok(PairType::T3b, phi), want, "{}", d8_label(&phi));
        }
    }

    #[test]
    fn constructed_graphs_are_frame_triples() {
        for (t, phi_label) in [
            (PairType::T1, "(1234)"),
            (PairType::T2, "(13)"),
            (PairType::T3a, "()"),
            (PairType::T3b, "(24)"),
        ] {
            let phi = D8[D8.iter().position(|p| d8_label(p) == phi_label).unwrap()];
            let tr = build_gamma(t, phi).unwrap();
            assert!(check_frame(&tr.g), "{t:?} {phi_label}");
        }
    }

    #[test]
    fn mirror_symmetries_give_isomorphic_triples() {
        let pick = |label: &str| D8[D8.iter().position(|p| d8_label(p) == label).unwrap()];
        let a = build_gamma(PairType::T2, pick("(13)")).unwrap();
        let b = build_gamma(PairType::T2, pick("(24)")).unwrap();
        assert!(are_isomorphic(&colored(&a), &colored(&b)));
        let c = build_gamma(PairType::T1, pick("(1234)")).unwrap();
        let d = build_gamma(PairType::T1, pick("(1432)")).unwrap();
        assert!(are_isomorphic(&colored(&c), &colored(&d)));
        let e = build_gamma(PairType::T1, pick("(12)(34)")).unwrap();
        let f = build_gamma(PairType::T1, pick("(14)(23)")).unwrap();
        assert!(are_isomorphic(&colored(&e), &colored(&f)));
    }

    #[test]
    fn pair_types_of_known_triples() {
        let rook = rook4_triple();
        assert_eq!(pair_type(&rook.g, &CYCLES[0], &CYCLES[1]).unwrap(), PairType::T1);
        let t2 = build_gamma(PairType::T2, D8[0]).unwrap();
        assert_eq!(pair_type(&t2.g, &CYCLES[0], &CYCLES[1]).unwrap(), PairType::T2);
        let t3b = build_gamma(PairType::T3b, D8[0]).unwrap();
        assert_eq!(pair_type(&t3b.g, &CYCLES[0], &CYCLES[1]).unwrap(), PairType::T3b);
        let t3a = build_gamma(PairType::T3a, D8[0]).unwrap();
        assert_eq!(pair_type(&t3a.g, &CYCLES[0], &CYCLES[1]).unwrap(), PairType::T3a);
    }

    #[test]
    fn pair_type_is_well_defined_on_all_classes() {
        for tr in classify_all_triples() {
            let c = tr.cycles;
            let reference = pair_type(&tr.g, &c[0], &c[1]).unwrap();
            for (a, b) in [(0, 1), (0, 3), (2, 1), (2, 3)] {
                assert_eq!(pair_type(&tr.g, &c[a], &c[b]).unwrap(), reference);
                assert_eq!(pair_type(&tr.g, &c[b], &c[a]).unwrap(), reference);
            }
            for &x in &c[0] {
                let m1 = (tr.g.neighbors(x) & bitmask(&c[1])).count_ones();
                let m2 = (tr.g.neighbors(x) & bitmask(&c[3])).count_ones();
                assert_eq!(m1 + m2, 4);
            }
        }
    }

    fn bitmask(c: &[usize; 4]) -> u64 {
        c.iter().fold(0u64, |acc, &v| acc | 1 << v)
    }

    #[test]
    fn composite_alignment_matches_the_closing_symmetry() {
        for (t, labels) in [
            (PairType::T1, vec!["()", "(1234)", "(13)(24)", "(13)", "(12)(34)"]),
            (PairType::T2, vec!["()", "(13)", "(13)(24)"]),
            (PairType::T3a, vec!["()"]),
            (PairType::T3b, vec!["()", "(24)"]),
        ] {
            for label in labels {
                let phi = D8[D8.iter().position(|p| d8_label(p) == label).unwrap()];
                let tr = build_gamma(t, phi).unwrap();
                let delta = delta_1234(&tr).unwrap();
                assert_eq!(d8_class(&delta), d8_class(&phi), "{t:?} {label}");
            }
        }
    }

    #[test]
    fn rook_alignment_is_undefined() {
        let rook = rook4_triple();
        assert!(matches!(
            delta_1234(&rook),
            Err(TriplesError::AlignmentUndefined { .. })
        ));
    }

    #[test]
    fn shifted_composite_is_conjugate() {
        for (t, label) in [(PairType::T2, "()"), (PairType::T3b, "(24)"), (PairType::T2, "(13)")] {
            let phi = D8[D8.iter().position(|p| d8_label(p) == label).unwrap()];
            let tr = build_gamma(t, phi).unwrap();
            let delta = delta_1234(&tr).unwrap();
            let shifted =
                delta_around(&tr.g, &[CYCLES[1], CYCLES[2], CYCLES[3], CYCLES[0]]).unwrap();
            let step = vertex_alignment(&tr.g, &CYCLES[0], &CYCLES[1]).unwrap();
            let mut conjugated = [0; 4];
            for i in 0..4 {
                let pre = step.iter().position(|&s| s == i).unwrap();
                conjugated[i] = step[delta[pre]];
            }
            assert_eq!(shifted, conjugated, "{t:?} {label}");
        }
    }

    #[test]
    fn twelve_classes_with_the_expected_structure() {
        let classes = classify_all_triples();
        assert_eq!(classes.len(), 12);
        let with_clique: Vec<u8> = classes
            .iter()
            .filter(|t| !cliques_of_size(&t.g, 4).is_empty())
            .map(|t| t.tag)
            .collect();
        assert_eq!(with_clique, vec![1]);
        let strongly_regular: Vec<u8> = classes
            .iter()
            .filter(|t| {
                let mu: Vec<u32> = (0..16)
                    .flat_map(|u| (u + 1..16).map(move |v| (u, v)))
                    .filter(|&(u, v)| !t.g.has_edge(u, v))
                    .map(|(u, v)| common_neighbors(&t.g, u, v).count_ones())
                    .collect();
                mu.iter().all(|&m| m == mu[0])
            })
            .map(|t| t.tag)
            .collect();
        assert_eq!(strongly_regular, vec![1, 4]);
    }

    #[test]
    fn classes_match_their_explicit_constructions() {
        let classes = classify_all_triples();
        let builds: Vec<(u8, Triple)> = [
            (PairType::T1, "()"),
            (PairType::T1, "(1234)"),
            (PairType::T1, "(13)(24)"),
            (PairType::T1, "(13)"),
            (PairType::T1, "(12)(34)"),
            (PairType::T2, "()"),
            (PairType::T2, "(13)(24)"),
            (PairType::T2, "(13)"),
            (PairType::T3a, "()"),
            (PairType::T3b, "()"),
            (PairType::T3b, "(24)"),
        ]
        .into_iter()
        .map(|(t, label)| {
            let phi = D8[D8.iter().position(|p| d8_label(p) == label).unwrap()];
            let tr = build_gamma(t, phi).unwrap();
            (tr.tag, tr)
        })
        .collect();
        for (tag, built) in builds {
            let class = &classes[tag as usize - 1];
            assert_eq!(class.tag, tag);
            assert!(are_isomorphic(&colored(class), &colored(&built)), "tag {tag}");
        }
        assert!(are_isomorphic(&colored(&classes[0]), &colored(&rook4_triple())));
        assert!(are_isomorphic(
            &ColoredGraph::monochrome(classes[3].g.clone()),
            &ColoredGraph::monochrome(crate::samples::shrikhande())
        ));
    }

    #[test]
    fn swapping_the_halves_preserves_the_classes() {
        let swapped: Vec<u16> = (0..16).map(|v| (v < 8) as u16).collect();
        let keys: Vec<Vec<u8>> = classify_all_triples()
            .iter()
            .map(|t| canonical_form(&ColoredGraph::new(t.g.clone(), omega_colors())).key)
            .collect();
        for t in classify_all_triples() {
            let k = canonical_form(&ColoredGraph::new(t.g.clone(), swapped.clone())).key;
            assert!(keys.contains(&k), "tag {} swaps onto some class", t.tag);
        }
    }

    #[test]
    fn four_partition_pairs_per_triple() {
        for tr in classify_all_triples() {
            let pairs = enumerate_partition_pairs(&tr);
            assert_eq!(pairs.len(), 4);
            let explicit_p1: u64 = 1 << 0 | 1 << 2 | 1 << 4 | 1 << 6;
            let explicit_p1p: u64 = 1 << 0 | 1 << 2 | 1 << 5 | 1 << 7;
            assert!(
                pairs
                    .iter()
                    .any(|pr| pr.p.contains(&explicit_p1) && pr.pp.contains(&explicit_p1p)),
                "tag {}",
                tr.tag
            );
            for pr in &pairs {
                for part in pr.p.iter().chain(pr.pp.iter()) {
                    assert_eq!(part.count_ones(), 4);
                    assert!(tr.g.is_independent(*part));
                }
                assert_eq!(pr.p[0] | pr.p[1], OMEGA1);
                assert_eq!(pr.p[2] | pr.p[3], OMEGA2);
                assert_eq!(pr.pp[0] | pr.pp[1], OMEGA1);
                assert_eq!(pr.pp[2] | pr.pp[3], OMEGA2);
            }
        }
    }
}
