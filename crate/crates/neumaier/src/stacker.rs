//! Stacking three ingredient graphs into a 3-layer candidate graph.
//!
//! An ingredient for parameters (λ, μ) is an edge-regular graph on
//! μλ(λ+2) vertices of degree λ(μ+1) together with a partition Ω into ν
//! groups of size μ²λ and two partitions 𝒫, 𝒫′ into independent μλ-sets,
//! each group being a union of μ parts of either partition, with parts of
//! 𝒫 and 𝒫′ meeting in λ vertices inside a common group. Three
//! ingredients are glued by part bijections φ₁₂: 𝒫₁ → 𝒫₂′, φ₂₃: 𝒫₂ → 𝒫₃′,
//! φ₃₁: 𝒫₃ → 𝒫₁′ that respect groups and compose to the trivial group
//! action; every vertex is joined to the image of its part under the map
//! leaving its layer.

use thiserror::Error;

use crate::graphkit::{bits, edge_regular_params, ErgParams, Graph, MAX_VERTICES};
use crate::triples::{PartitionPair, Triple};

/// The pair (λ, μ); μ must divide λ + 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstructionParams {
    pub lambda: usize,
    pub mu: usize,
}

impl ConstructionParams {
    pub fn new(lambda: usize, mu: usize) -> Self {
        assert!(lambda >= 1 && mu >= 1, "parameters must be positive");
        assert_eq!((lambda + 2) % mu, 0, "mu must divide lambda + 2");
        ConstructionParams { lambda, mu }
    }

    pub fn nu(&self) -> usize {
        (self.lambda + 2) / self.mu
    }

    pub fn ingredient_order(&self) -> usize {
        self.mu * self.lambda * (self.lambda + 2)
    }

    pub fn ingredient_degree(&self) -> u32 {
        (self.lambda * (self.mu + 1)) as u32
    }

    pub fn part_size(&self) -> usize {
        self.mu * self.lambda
    }

    pub fn group_size(&self) -> usize {
        self.mu * self.mu * self.lambda
    }

    pub fn parts_per_ingredient(&self) -> usize {
        self.mu * self.nu()
    }

    pub fn stack_order(&self) -> usize {
        3 * self.ingredient_order()
    }

    pub fn stack_degree(&self) -> u32 {
        (self.lambda * (3 * self.mu + 1)) as u32
    }
}

/// One layer: the graph with its group partition and the two part
/// partitions, all as bitsets.
#[derive(Clone, Debug)]
pub struct Ingredient {
    pub g: Graph,
    pub omega: Vec<u64>,
    pub parts: Vec<u64>,
    pub parts_prime: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetKind {
    Omega,
    Parts,
    PartsPrime,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IngredientViolation {
    Parameters { expected: ErgParams, found: Option<ErgParams> },
    GroupCount { kind: SetKind, expected: usize, found: usize },
    NotPartition { kind: SetKind },
    WrongSize { kind: SetKind, index: usize, expected: usize, found: usize },
    NotIndependent { kind: SetKind, index: usize },
    SplitsGroup { kind: SetKind, index: usize },
    GroupFill { kind: SetKind, group: usize, expected: usize, found: usize },
    Intersection { part: usize, part_prime: usize, expected: u32, found: u32 },
}

#[derive(Debug, Error)]
pub enum StackError {
    #[error("ingredient {index} invalid: {violations:?}")]
    InvalidIngredient { index: usize, violations: Vec<IngredientViolation> },
    #[error("map {index} is not an admissible part bijection")]
    NotAdmissible { index: usize },
    #[error("composite group action on the first layer is not trivial")]
    NontrivialComposition,
}

/// A full stacking specification. `maps[0]` sends parts of layer 0 to
/// primed parts of layer 1, `maps[1]` layer 1 to layer 2, `maps[2]` layer
/// 2 back to layer 0, each as a vector indexed by part number.
#[derive(Clone, Debug)]
pub struct StackSpec {
    pub params: ConstructionParams,
    pub ingredients: [Ingredient; 3],
    pub maps: [Vec<usize>; 3],
}

/// Checks one ingredient against the parameters, returning every violation
/// found rather than stopping at the first.
pub fn validate_ingredient(ing: &Ingredient, params: &ConstructionParams) -> Vec<IngredientViolation> {
    let mut out = Vec::new();
    let expected = ErgParams {
        v: params.ingredient_order(),
        k: params.ingredient_degree(),
        lambda: params.lambda as u32,
    };
    let found = edge_regular_params(&ing.g);
    if found != Some(expected) || ing.g.n() != expected.v {
        out.push(IngredientViolation::Parameters { expected, found });
    }
    let full = ing.g.vertex_mask();
    let mut check_partition = |kind: SetKind, sets: &[u64], count: usize, size: usize| {
        if sets.len() != count {
            out.push(IngredientViolation::GroupCount { kind, expected: count, found: sets.len() });
        }
        let mut union = 0u64;
        let mut overlap = false;
        for s in sets {
            overlap |= union & s != 0;
            union |= s;
        }
        if overlap || union != full {
            out.push(IngredientViolation::NotPartition { kind });
        }
        for (index, s) in sets.iter().enumerate() {
            if s.count_ones() as usize != size {
                out.push(IngredientViolation::WrongSize {
                    kind,
                    index,
                    expected: size,
                    found: s.count_ones() as usize,
                });
            }
        }
    };
    check_partition(SetKind::Omega, &ing.omega, params.nu(), params.group_size());
    check_partition(SetKind::Parts, &ing.parts, params.parts_per_ingredient(), params.part_size());
    check_partition(
        SetKind::PartsPrime,
        &ing.parts_prime,
        params.parts_per_ingredient(),
        params.part_size(),
    );
    for (kind, sets) in [(SetKind::Parts, &ing.parts), (SetKind::PartsPrime, &ing.parts_prime)] {
        for (index, &s) in sets.iter().enumerate() {
            if !ing.g.is_independent(s) {
                out.push(IngredientViolation::NotIndependent { kind, index });
            }
            if !ing.omega.iter().any(|&o| s & o == s) {
                out.push(IngredientViolation::SplitsGroup { kind, index });
            }
        }
        for (group, &o) in ing.omega.iter().enumerate() {
            let found = sets.iter().filter(|&&s| s & o == s).count();
            if found != params.mu {
                out.push(IngredientViolation::GroupFill { kind, group, expected: params.mu, found });
            }
        }
    }
    for (part, &p) in ing.parts.iter().enumerate() {
        for (part_prime, &q) in ing.parts_prime.iter().enumerate() {
            let same_group = ing
                .omega
                .iter()
                .any(|&o| p & o == p && q & o == q);
            let expected = if same_group { params.lambda as u32 } else { 0 };
            let found = (p & q).count_ones();
            if found != expected {
                out.push(IngredientViolation::Intersection { part, part_prime, expected, found });
            }
        }
    }
    out
}

fn group_index_of(ing: &Ingredient, v: usize) -> usize {
    ing.omega
        .iter()
        .position(|&o| o >> v & 1 == 1)
        .expect("vertex lies in a group")
}

fn part_index_of(sets: &[u64], v: usize) -> usize {
    sets.iter()
        .position(|&s| s >> v & 1 == 1)
        .expect("vertex lies in a part")
}

/// True if `map` is a part bijection respecting groups: parts of one
/// source group land in the primed parts of a single target group.
pub fn is_admissible(src: &Ingredient, dst: &Ingredient, map: &[usize]) -> bool {
    let count = src.parts.len();
    if map.len() != count || dst.parts_prime.len() != count {
        return false;
    }
    let mut hit = vec![false; count];
    for &q in map {
        if q >= count || hit[q] {
            return false;
        }
        hit[q] = true;
    }
    src.omega.iter().all(|&o| {
        let targets: Vec<usize> = src
            .parts
            .iter()
            .enumerate()
            .filter(|(_, &p)| p & o == p)
            .map(|(i, _)| group_index_of(dst, dst.parts_prime[map[i]].trailing_zeros() as usize))
            .collect();
        targets.windows(2).all(|w| w[0] == w[1])
    })
}

/// The induced map on group indices.
pub fn group_action(src: &Ingredient, dst: &Ingredient, map: &[usize]) -> Vec<usize> {
    src.omega
        .iter()
        .map(|&o| {
            let p = src
                .parts
                .iter()
                .position(|&s| s & o == s)
                .expect("group contains a part");
            group_index_of(dst, dst.parts_prime[map[p]].trailing_zeros() as usize)
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap_permute(&mut items, n, &mut out);
    out.sort();
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// All admissible part bijections from `src` to the primed parts of `dst`.
/// With `identity_groups` the induced group action is pinned to the
/// identity; otherwise every group bijection is allowed.
fn admissible_maps(src: &Ingredient, dst: &Ingredient, identity_groups: bool) -> Vec<Vec<usize>> {
    let nu = src.omega.len();
    let count = src.parts.len();
    let src_by_group: Vec<Vec<usize>> = src
        .omega
        .iter()
        .map(|&o| (0..count).filter(|&i| src.parts[i] & o == src.parts[i]).collect())
        .collect();
    let dst_by_group: Vec<Vec<usize>> = dst
        .omega
        .iter()
        .map(|&o| (0..count).filter(|&i| dst.parts_prime[i] & o == dst.parts_prime[i]).collect())
        .collect();
    let mu = src_by_group[0].len();
    let sigmas = if identity_groups {
        vec![(0..nu).collect::<Vec<usize>>()]
    } else {
        permutations(nu)
    };
    let bijections = permutations(mu);
    let mut out = Vec::new();
    for sigma in &sigmas {
        let mut choice = vec![0usize; nu];
        loop {
            let mut map = vec![0usize; count];
            for (o, &c) in choice.iter().enumerate() {
                for (t, &p) in src_by_group[o].iter().enumerate() {
                    map[p] = dst_by_group[sigma[o]][bijections[c][t]];
                }
            }
            out.push(map);
            let mut digit = 0;
            loop {
                if digit == nu {
                    break;
                }
                choice[digit] += 1;
                if choice[digit] < bijections.len() {
                    break;
                }
                choice[digit] = 0;
                digit += 1;
            }
            if digit == nu {
                break;
            }
        }
    }
    out
}

/// Enumerates full map triples for a basis of three ingredients, filtered
/// so the composite group action on the first layer is trivial.
pub fn enumerate_admissible(basis: &[Ingredient; 3], canonical_groups: bool) -> Vec<[Vec<usize>; 3]> {
    let m12 = admissible_maps(&basis[0], &basis[1], canonical_groups);
    let m23 = admissible_maps(&basis[1], &basis[2], canonical_groups);
    let m31 = admissible_maps(&basis[2], &basis[0], canonical_groups);
    let mut out = Vec::new();
    for a in &m12 {
        let s12 = group_action(&basis[0], &basis[1], a);
        for b in &m23 {
            let s23 = group_action(&basis[1], &basis[2], b);
            for c in &m31 {
                let s31 = group_action(&basis[2], &basis[0], c);
                let trivial = (0..basis[0].omega.len()).all(|o| s31[s23[s12[o]]] == o);
                if trivial {
                    out.push([a.clone(), b.clone(), c.clone()]);
                }
            }
        }
    }
    out
}

/// Builds the stacked graph: three layer copies at offsets 0, n, 2n, plus
/// the cross edges joining each vertex to the image of its part.
pub fn stack(spec: &StackSpec) -> Result<Graph, StackError> {
    for (index, ing) in spec.ingredients.iter().enumerate() {
        let violations = validate_ingredient(ing, &spec.params);
        if !violations.is_empty() {
            return Err(StackError::InvalidIngredient { index, violations });
        }
    }
    for index in 0..3 {
        if !is_admissible(&spec.ingredients[index], &spec.ingredients[(index + 1) % 3], &spec.maps[index]) {
            return Err(StackError::NotAdmissible { index });
        }
    }
    let s12 = group_action(&spec.ingredients[0], &spec.ingredients[1], &spec.maps[0]);
    let s23 = group_action(&spec.ingredients[1], &spec.ingredients[2], &spec.maps[1]);
    let s31 = group_action(&spec.ingredients[2], &spec.ingredients[0], &spec.maps[2]);
    if (0..spec.ingredients[0].omega.len()).any(|o| s31[s23[s12[o]]] != o) {
        return Err(StackError::NontrivialComposition);
    }
    let n = spec.params.ingredient_order();
    assert!(3 * n <= MAX_VERTICES, "stack exceeds the vertex limit");
    let mut g = Graph::new(3 * n);
    for (layer, ing) in spec.ingredients.iter().enumerate() {
        for (u, v) in ing.g.edges() {
            g.add_edge(layer * n + u, layer * n + v);
        }
    }
    for index in 0..3 {
        let (src, dst) = (index, (index + 1) % 3);
        for (p, &part) in spec.ingredients[src].parts.iter().enumerate() {
            let image = spec.ingredients[dst].parts_prime[spec.maps[index][p]];
            for u in bits(part) {
                for v in bits(image) {
                    g.add_edge(src * n + u, dst * n + v);
                }
            }
        }
    }
    debug_assert!((0..3 * n).all(|v| g.degree(v) == spec.params.stack_degree()));
    Ok(g)
}

/// The nine-cell vertex partition around a base vertex `x` of the stacked
/// graph: the vertex itself; its group neighbours; the rest of its part
/// intersection; the rest of its group; neighbours and non-neighbours in
/// the other groups of its layer; cross neighbours; the rest of the two
/// aligned cross groups; and everything else.
pub fn relation_partition(spec: &StackSpec, x: usize) -> Result<[u64; 9], StackError> {
    let g = stack(spec)?;
    let n = spec.params.ingredient_order();
    let layer = x / n;
    let xl = x % n;
    let ing = &spec.ingredients[layer];
    let lift = |s: u64, l: usize| s << (l * n);
    let layer_mask = |l: usize| ((1u64 << n) - 1) << (l * n);
    let nbrs = g.neighbors(x);
    let group = lift(ing.omega[group_index_of(ing, xl)], layer);
    let p = part_index_of(&ing.parts, xl);
    let pp = part_index_of(&ing.parts_prime, xl);
    let meet = lift(ing.parts[p] & ing.parts_prime[pp], layer);
    let r1 = 1u64 << x;
    let r2 = group & nbrs;
    let r3 = meet & !r1;
    let r4 = group & !r1 & !r2 & !meet;
    let r5 = layer_mask(layer) & !group & nbrs;
    let r6 = layer_mask(layer) & !group & !nbrs;
    let forward = (layer + 1) % 3;
    let backward = (layer + 2) % 3;
    let fwd_ing = &spec.ingredients[forward];
    let fwd_part = fwd_ing.parts_prime[spec.maps[layer][p]];
    let fwd_group = lift(
        fwd_ing.omega[group_index_of(fwd_ing, fwd_part.trailing_zeros() as usize)],
        forward,
    );
    let bwd_ing = &spec.ingredients[backward];
    let bp = spec.maps[backward]
        .iter()
        .position(|&q| q == pp)
        .expect("maps are bijections");
    let bwd_group = lift(
        bwd_ing.omega[group_index_of(bwd_ing, bwd_ing.parts[bp].trailing_zeros() as usize)],
        backward,
    );
    let cross = layer_mask(forward) | layer_mask(backward);
    let aligned = fwd_group | bwd_group;
    let r7 = cross & nbrs;
    let r8 = aligned & !nbrs;
    let r9 = cross & !aligned;
    debug_assert_eq!(r9 & nbrs, 0, "cross neighbours stay in the aligned groups");
    Ok([r1, r2, r3, r4, r5, r6, r7, r8, r9])
}

/// Quotient of the nine-cell partition shared by every stack whose layers
/// all carry a 4-clique or none, rows and columns in cell order.
pub const RELATION_QUOTIENT: [[i64; 9]; 9] = [
    [0, 2, 0, 0, 4, 0, 8, 0, 0],
    [1, 0, 1, 0, 2, 2, 0, 8, 0],
    [0, 2, 0, 0, 0, 4, 8, 0, 0],
    [0, 0, 0, 2, 2, 2, 4, 4, 0],
    [1, 1, 0, 2, 1, 1, 0, 0, 8],
    [0, 1, 1, 2, 1, 1, 0, 0, 8],
    [1, 0, 1, 2, 0, 0, 2, 4, 4],
    [0, 2, 0, 2, 0, 0, 4, 2, 4],
    [0, 0, 0, 0, 2, 2, 2, 2, 6],
];

/// Ingredient view of a classified 16-vertex triple with one of its
/// partition pairs.
pub fn triple_ingredient(tr: &Triple, pair: &PartitionPair) -> Ingredient {
    Ingredient {
        g: tr.g.clone(),
        omega: vec![tr.omega[0], tr.omega[1]],
        parts: pair.p.to_vec(),
        parts_prime: pair.pp.to_vec(),
    }
}

/// The (1, 1) ingredient: a triangle whose groups and parts are all
/// singletons.
pub fn k3_ingredient() -> Ingredient {
    let g = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]);
    let singletons: Vec<u64> = (0..3).map(|v| 1u64 << v).collect();
    Ingredient { g: g.clone(), omega: singletons.clone(), parts: singletons.clone(), parts_prime: singletons }
}

/// The (1, 3) ingredient: the 3x3 rook graph with a single group and the
/// two partitions into disjoint transversals. Cell (r, c) is vertex 3r+c;
/// a transversal picks one cell per row along a permutation of the
/// columns, and the six of them split into two partitions of the grid.
pub fn rook3_ovoid_ingredient() -> Ingredient {
    let mut g = Graph::new(9);
    for u in 0..9 {
        for v in u + 1..9 {
            if u / 3 == v / 3 || u % 3 == v % 3 {
                g.add_edge(u, v);
            }
        }
    }
    let transversal = |cols: [usize; 3]| -> u64 {
        (0..3).fold(0u64, |acc, r| acc | 1 << (3 * r + cols[r]))
    };
    let parts = vec![
        transversal([0, 1, 2]),
        transversal([1, 2, 0]),
        transversal([2, 0, 1]),
    ];
    let parts_prime = vec![
        transversal([1, 0, 2]),
        transversal([2, 1, 0]),
        transversal([0, 2, 1]),
    ];
    Ingredient { g, omega: vec![(1 << 9) - 1], parts, parts_prime }
}

/// Exhaustive search for edge-regular graphs with every edge in exactly
/// `lambda` triangles. Returns one representative per isomorphism class.
pub fn search_edge_regular_graphs(v: usize, k: usize, lambda: u32) -> Vec<Graph> {
    search_regular(v, k, &|g| {
        edge_regular_params(g).map(|p| p.lambda) == Some(lambda)
    })
}

/// Exhaustive search for regular graphs whose every edge lies in at least
/// `min_lambda` triangles.
pub fn search_regular_min_lambda(v: usize, k: usize, min_lambda: u32) -> Vec<Graph> {
    search_regular(v, k, &|g| {
        g.edges()
            .iter()
            .all(|&(u, w)| crate::graphkit::common_neighbors(g, u, w).count_ones() >= min_lambda)
    })
}

/// The target nonexistence probe: degree-4 graphs on 8 vertices with both
/// triangle counts pinned to 2.
pub fn search_erg_8_4_2() -> Vec<Graph> {
    search_edge_regular_graphs(8, 4, 2)
}

fn search_regular(v: usize, k: usize, accept: &dyn Fn(&Graph) -> bool) -> Vec<Graph> {
    assert!(v <= 16, "exhaustive search is for small orders");
    let mut adj = vec![0u64; v];
    let mut found: Vec<(Vec<u8>, Graph)> = Vec::new();
    extend_vertex(0, v, k, &mut adj, accept, &mut found);
    found.into_iter().map(|(_, g)| g).collect()
}

fn extend_vertex(
    u: usize,
    v: usize,
    k: usize,
    adj: &mut Vec<u64>,
    accept: &dyn Fn(&Graph) -> bool,
    found: &mut Vec<(Vec<u8>, Graph)>,
) {
    if u == v {
        let mut g = Graph::new(v);
        for a in 0..v {
            for b in bits(adj[a]) {
                if a < b {
                    g.add_edge(a, b);
                }
            }
        }
        if accept(&g) {
            let key = crate::canon::canonical_key(&g);
            if found.iter().all(|(k2, _)| *k2 != key) {
                found.push((key, g));
            }
        }
        return;
    }
    let have = adj[u].count_ones() as usize;
    if have > k {
        return;
    }
    choose_neighbors(u, u + 1, k - have, v, k, adj, accept, found);
}

#[allow(clippy::too_many_arguments)]
fn choose_neighbors(
    u: usize,
    from: usize,
    need: usize,
    v: usize,
    k: usize,
    adj: &mut Vec<u64>,
    accept: &dyn Fn(&Graph) -> bool,
    found: &mut Vec<(Vec<u8>, Graph)>,
) {
    if need == 0 {
        extend_vertex(u + 1, v, k, adj, accept, found);
        return;
    }
    if v - from < need {
        return;
    }
    for w in from..v {
        if v - w < need {
            break;
        }
        if (adj[w].count_ones() as usize) < k {
            adj[u] |= 1 << w;
            adj[w] |= 1 << u;
            choose_neighbors(u, w + 1, need - 1, v, k, adj, accept, found);
            adj[u] &= !(1 << w);
            adj[w] &= !(1 << u);
        }
    }
}
