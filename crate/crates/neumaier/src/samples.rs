//! Named reference graphs: the strongly regular graphs the construction
//! is built from, plus a few standard small graphs.

use crate::graphkit::Graph;

/// 4x4 rook graph: cells of a 4x4 grid, adjacent when they share a row or
/// column. Strongly regular (16, 6, 2, 2) with eight 4-cliques.
pub fn rook4() -> Graph {
    grid_rook(4)
}

/// 3x3 rook graph, strongly regular (9, 4, 1, 2).
pub fn rook3() -> Graph {
    grid_rook(3)
}

fn grid_rook(m: usize) -> Graph {
    let mut g = Graph::new(m * m);
    for a in 0..m * m {
        for b in 0..a {
            if a / m == b / m || a % m == b % m {
                g.add_edge(a, b);
            }
        }
    }
    g
}

/// Shrikhande graph as the Cayley graph of Z4 x Z4 with connection set
/// {(1,0), (3,0), (0,1), (0,3), (1,1), (3,3)}. Strongly regular
/// (16, 6, 2, 2), no 4-cliques.
pub fn shrikhande() -> Graph {
    let idx = |r: usize, c: usize| 4 * (r % 4) + c % 4;
    let mut g = Graph::new(16);
    for r in 0..4 {
        for c in 0..4 {
            g.add_edge(idx(r, c), idx(r + 1, c));
            g.add_edge(idx(r, c), idx(r, c + 1));
            g.add_edge(idx(r, c), idx(r + 1, c + 1));
        }
    }
    g
}

/// Petersen graph via the Kneser construction on 2-subsets of {0..4}.
pub fn petersen() -> Graph {
    let pairs: Vec<(usize, usize)> = (0..5)
        .flat_map(|a| (a + 1..5).map(move |b| (a, b)))
        .collect();
    let mut g = Graph::new(10);
    for i in 0..10 {
        for j in 0..i {
            let (a, b) = pairs[i];
            let (c, d) = pairs[j];
            if a != c && a != d && b != c && b != d {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// Octahedron: K6 minus a perfect matching, the unique (6, 4, 2) edge-regular
/// graph.
pub fn octahedron() -> Graph {
    let mut g = Graph::new(6);
    for (u, v) in complete(6).edges() {
        if u + 3 != v {
            g.add_edge(u, v);
        }
    }
    g
}

pub fn complete(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in 0..u {
            g.add_edge(u, v);
        }
    }
    g
}

pub fn cycle(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        g.add_edge(u, (u + 1) % n);
    }
    g
}
