//! Small-graph primitives on adjacency bitsets.
//!
//! Every graph handled by this crate has at most 64 vertices, so a row of the
//! adjacency matrix fits in one `u64` and neighbourhood algebra is a handful
//! of word operations. Vertex sets (cliques, cells, parts) use the same
//! bitset convention: bit `v` set means vertex `v` is in the set.

use thiserror::Error;

/// Maximum vertex count supported by the bitset representation.
pub const MAX_VERTICES: usize = 64;

/// Undirected simple graph on at most [`MAX_VERTICES`] vertices.
///
/// `adj[u]` is the neighbourhood of `u` as a bitset. No loops: bit `u` of
/// `adj[u]` is always clear.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: [u64; MAX_VERTICES],
}

impl Graph {
    /// Edgeless graph on `n` vertices. Panics if `n > 64`.
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "vertex count {n} exceeds {MAX_VERTICES}");
        Graph { n, adj: [0; MAX_VERTICES] }
    }

    /// Builds a graph from an edge list. Duplicate edges are idempotent.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Bitset with one bit per vertex of the graph.
    #[inline]
    pub fn vertex_mask(&self) -> u64 {
        if self.n == 64 { !0 } else { (1u64 << self.n) - 1 }
    }

    /// Inserts the edge `{u, v}`. Panics on out-of-range vertices or `u == v`.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n, "edge ({u},{v}) out of range for n={}", self.n);
        assert!(u != v, "loop at vertex {u}");
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        debug_assert!(u < self.n && v < self.n);
        self.adj[u] >> v & 1 == 1
    }

    /// Neighbourhood of `u` as a bitset.
    #[inline]
    pub fn neighbors(&self, u: usize) -> u64 {
        debug_assert!(u < self.n);
        self.adj[u]
    }

    #[inline]
    pub fn degree(&self, u: usize) -> u32 {
        self.adj[u].count_ones()
    }

    pub fn edge_count(&self) -> usize {
        self.adj[..self.n].iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges as ordered pairs `u < v`, lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            let mut rest = self.adj[u] & mask_above(u);
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                out.push((u, v));
                rest &= rest - 1;
            }
        }
        out
    }

    /// True if every two vertices of the bitset `c` are adjacent.
    pub fn is_clique(&self, c: u64) -> bool {
        debug_assert_eq!(c & !self.vertex_mask(), 0);
        let mut rest = c;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if c & !(1 << u) & !self.adj[u] != 0 {
                return false;
            }
        }
        true
    }

    /// True if no two vertices of the bitset `s` are adjacent.
    pub fn is_independent(&self, s: u64) -> bool {
        let mut rest = s;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if s & self.adj[u] != 0 {
                return false;
            }
        }
        true
    }

    /// Relabels the graph by `perm`, where `perm[old] = new`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        debug_assert_eq!(perm.len(), self.n);
        let mut g = Graph::new(self.n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// Bitset of all vertices strictly greater than `u`.
#[inline]
fn mask_above(u: usize) -> u64 {
    !0u64 >> 1 >> u << 1 << u
}

/// Iterates over the set bits of a bitset as vertex indices.
pub fn bits(mut set: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if set == 0 {
            return None;
        }
        let v = set.trailing_zeros() as usize;
        set &= set - 1;
        Some(v)
    })
}

// ---------------------------------------------------------------------------
// regularity parameters
// ---------------------------------------------------------------------------

/// Edge-regular parameters `(v, k, lambda)`: `v` vertices, `k`-regular,
/// every edge in exactly `lambda` triangles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ErgParams {
    pub v: usize,
    pub k: u32,
    pub lambda: u32,
}

/// Neumaier parameters `(v, k, lambda; e, s)`: edge-regular plus a regular
/// clique of size `s` with nexus `e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NeumaierParams {
    pub v: usize,
    pub k: u32,
    pub lambda: u32,
    pub nexus: u32,
    pub clique_size: usize,
}

/// Common neighbourhood of `u` and `v` as a bitset. Never contains `u` or
/// `v`; for `u == v` this is the neighbourhood of `u` minus `u` itself.
#[inline]
pub fn common_neighbors(g: &Graph, u: usize, v: usize) -> u64 {
    assert!(u < g.n() && v < g.n(), "vertex out of range");
    g.neighbors(u) & g.neighbors(v) & !(1 << u) & !(1 << v)
}

/// Edge-regular parameters of `g`, or `None` if `g` is not edge-regular.
/// Requires at least one edge for `lambda` to be defined.
pub fn edge_regular_params(g: &Graph) -> Option<ErgParams> {
    let n = g.n();
    if n == 0 {
        return None;
    }
    let k = g.degree(0);
    if (1..n).any(|u| g.degree(u) != k) {
        return None;
    }
    let mut lambda = None;
    for u in 0..n {
        let mut rest = g.neighbors(u) & mask_above(u);
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let l = common_neighbors(g, u, v).count_ones();
            if *lambda.get_or_insert(l) != l {
                return None;
            }
        }
    }
    lambda.map(|lambda| ErgParams { v: n, k, lambda })
}

/// Number of triangles in `g`.
pub fn triangle_count(g: &Graph) -> u64 {
    let mut total = 0u64;
    for u in 0..g.n() {
        let mut rest = g.neighbors(u) & mask_above(u);
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            total += common_neighbors(g, u, v).count_ones() as u64;
        }
    }
    total / 3
}

/// All cliques of size `s`, as bitsets, ordered lexicographically by their
/// ascending vertex tuples.
pub fn cliques_of_size(g: &Graph, s: usize) -> Vec<u64> {
    let mut out = Vec::new();
    if s == 0 || s > g.n() {
        return out;
    }
    let mut stack = Vec::with_capacity(s);
    extend_cliques(g, s, 0u64, g.vertex_mask(), &mut stack, &mut out);
    out
}

fn extend_cliques(g: &Graph, s: usize, clique: u64, cand: u64, stack: &mut Vec<usize>, out: &mut Vec<u64>) {
    if stack.len() == s {
        out.push(clique);
        return;
    }
    let need = s - stack.len();
    let mut rest = cand;
    while rest != 0 {
        if (rest.count_ones() as usize) < need {
            return;
        }
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        stack.push(v);
        extend_cliques(g, s, clique | 1 << v, rest & g.neighbors(v), stack, out);
        stack.pop();
    }
}

/// Nexus of the clique `c`: the common number of neighbours in `c` over all
/// vertices outside `c`, or `None` if that number is not constant or no
/// vertex lies outside `c`. Panics if `c` is not a clique of `g`.
pub fn regular_clique_nexus(g: &Graph, c: u64) -> Option<u32> {
    assert!(g.is_clique(c), "vertex set {c:#x} is not a clique");
    let mut nexus = None;
    let mut outside = g.vertex_mask() & !c;
    while outside != 0 {
        let x = outside.trailing_zeros() as usize;
        outside &= outside - 1;
        let e = (g.neighbors(x) & c).count_ones();
        if *nexus.get_or_insert(e) != e {
            return None;
        }
    }
    nexus
}

/// Checks whether `g` is a Neumaier graph: edge-regular with a regular
/// clique of positive nexus. Clique sizes are searched downward from
/// `lambda + 2`, the largest size a clique can reach in an edge-regular
/// graph with a regular clique; the reported clique is the largest regular
/// one, ties broken by the lexicographically smallest clique.
pub fn neumaier_check(g: &Graph) -> Option<NeumaierParams> {
    let erg = edge_regular_params(g)?;
    let mut s = (erg.lambda as usize + 2).min(g.n());
    while s >= 2 {
        for c in cliques_of_size(g, s) {
            if let Some(e) = regular_clique_nexus(g, c) {
                if e >= 1 {
                    return Some(NeumaierParams {
                        v: erg.v,
                        k: erg.k,
                        lambda: erg.lambda,
                        nexus: e,
                        clique_size: s,
                    });
                }
            }
        }
        s -= 1;
    }
    None
}

// ---------------------------------------------------------------------------
// graph6 encoding
// ---------------------------------------------------------------------------

#[derive(Debug, Error, PartialEq, Eq)]
pub enum G6Error {
    #[error("graph6 string is empty")]
    Empty,
    #[error("graph6 header {0:#x} needs the long form, only n <= 62 is supported")]
    UnsupportedHeader(u8),
    #[error("graph6 body holds {got} bytes, {want} expected for {n} vertices")]
    BadLength { n: usize, want: usize, got: usize },
    #[error("graph6 byte {byte:#x} at position {pos} is outside 0x3f..=0x7e")]
    BadByte { pos: usize, byte: u8 },
}

/// Encodes `g` in graph6 format. Panics for graphs on more than 62 vertices,
/// which would need the long header form.
pub fn g6_encode(g: &Graph) -> String {
    let n = g.n();
    assert!(n <= 62, "graph6 short form requires n <= 62, got {n}");
    let mut out = vec![n as u8 + 63];
    let mut acc = 0u8;
    let mut filled = 0;
    for v in 1..n {
        for u in 0..v {
            acc = acc << 1 | g.has_edge(u, v) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ascii")
}

/// Decodes a graph6 string produced by [`g6_encode`] or by any standard tool,
/// for graphs on at most 62 vertices.
pub fn g6_decode(s: &str) -> Result<Graph, G6Error> {
    let bytes = s.as_bytes();
    let (&header, body) = bytes.split_first().ok_or(G6Error::Empty)?;
    if header == b'~' {
        return Err(G6Error::UnsupportedHeader(header));
    }
    if !(63..=125).contains(&header) {
        return Err(G6Error::BadByte { pos: 0, byte: header });
    }
    let n = (header - 63) as usize;
    let want = n * n.saturating_sub(1) / 2;
    let want_bytes = want.div_ceil(6);
    if body.len() != want_bytes {
        return Err(G6Error::BadLength { n, want: want_bytes, got: body.len() });
    }
    for (i, &b) in body.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(G6Error::BadByte { pos: i + 1, byte: b });
        }
    }
    let mut g = Graph::new(n);
    let mut idx = 0;
    for v in 1..n {
        for u in 0..v {
            let bit = body[idx / 6] - 63 >> (5 - idx % 6) & 1;
            if bit == 1 {
                g.add_edge(u, v);
            }
            idx += 1;
        }
    }
    Ok(g)
}
