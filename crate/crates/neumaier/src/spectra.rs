//! Exact spectra via characteristic polynomials over the integers.
//!
//! Eigenvalues are reported symbolically: integer roots directly, and
//! irrational ones through a catalog of monic integer polynomials whose
//! root sets are displayed as a unit, such as `(+-sqrt2)` or `(3A)` for a
//! named cubic. A spectrum that does not factor over the catalog is an
//! error, never an approximation.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::graphkit::{bits, Graph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpectraError {
    #[error("uncatalogued factor of degree {degree}: {poly}")]
    UncataloguedFactor { degree: usize, poly: String },
    #[error("partition not equitable: vertices {u} and {v} of cell {cell} differ on cell {other}")]
    NotEquitable { cell: usize, u: usize, v: usize, other: usize },
    #[error("inconsistent spectrum: {reason}")]
    InconsistentSpectrum { reason: String },
}

// ---------------------------------------------------------------------------
// characteristic polynomials
// ---------------------------------------------------------------------------

fn trace(m: &[Vec<BigInt>]) -> BigInt {
    m.iter().enumerate().map(|(i, row)| &row[i]).sum()
}

fn adjacency_times(g: &Graph, m: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = g.n();
    (0..n)
        .map(|i| {
            let mut row = vec![BigInt::zero(); n];
            for u in bits(g.neighbors(i)) {
                for (j, entry) in row.iter_mut().enumerate() {
                    *entry += &m[u][j];
                }
            }
            row
        })
        .collect()
}

fn identity_matrix(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// Faddeev-LeVerrier iteration. `step` must compute `A * M` for the matrix
/// whose characteristic polynomial is wanted; coefficients come back leading
/// term first, so the result has length `n + 1`.
fn faddeev_leverrier(n: usize, step: impl Fn(&[Vec<BigInt>]) -> Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(BigInt::one());
    let mut m = identity_matrix(n);
    for k in 1..=n {
        let p = step(&m);
        let t = trace(&p);
        assert!((&t % k).is_zero(), "trace divisibility fails at step {k}");
        let c = -t / k;
        coeffs.push(c.clone());
        if k < n {
            m = p;
            for (i, row) in m.iter_mut().enumerate() {
                row[i] += &c;
            }
        }
    }
    coeffs
}

/// Characteristic polynomial of the adjacency matrix of `g`, over the
/// integers, leading coefficient first. The matrix products degenerate to
/// sums over neighbours, so no multiplications of large integers occur.
pub fn char_poly(g: &Graph) -> Vec<BigInt> {
    faddeev_leverrier(g.n(), |m| adjacency_times(g, m))
}

/// Characteristic polynomial of an arbitrary square integer matrix.
pub fn char_poly_int_matrix(mat: &[Vec<i64>]) -> Vec<BigInt> {
    let n = mat.len();
    for row in mat {
        assert_eq!(row.len(), n, "matrix must be square");
    }
    faddeev_leverrier(n, |m| {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|u| BigInt::from(mat[i][u]) * &m[u][j]).sum())
                    .collect()
            })
            .collect()
    })
}

// ---------------------------------------------------------------------------
// polynomial arithmetic on descending coefficient vectors
// ---------------------------------------------------------------------------

/// Divides `poly` by `x - r` in place; false and unchanged if not exact.
fn divide_by_linear(poly: &mut Vec<BigInt>, r: i64) -> bool {
    let mut quotient = Vec::with_capacity(poly.len() - 1);
    let mut acc = BigInt::zero();
    for c in &poly[..poly.len() - 1] {
        acc = acc * r + c;
        quotient.push(acc.clone());
    }
    acc = acc * r + &poly[poly.len() - 1];
    if !acc.is_zero() {
        return false;
    }
    *poly = quotient;
    true
}

/// Divides `poly` by the monic polynomial with ascending lower coefficients
/// `tail` in place; false and unchanged if not exact.
fn divide_by_monic(poly: &mut Vec<BigInt>, tail: &[i64]) -> bool {
    let d = tail.len();
    if poly.len() < d + 1 {
        return false;
    }
    let mut work = poly.clone();
    let qlen = work.len() - d;
    for i in 0..qlen {
        let q = work[i].clone();
        for (j, &t) in tail.iter().enumerate() {
            let col = i + d - j;
            let delta = &q * t;
            work[col] -= delta;
        }
    }
    if work[qlen..].iter().any(|c| !c.is_zero()) {
        return false;
    }
    work.truncate(qlen);
    *poly = work;
    true
}

fn poly_display(poly: &[BigInt]) -> String {
    let deg = poly.len() - 1;
    let mut out = String::new();
    for (i, c) in poly.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let power = deg - i;
        let mag = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let show_coeff = power == 0 || !mag.is_one();
        if show_coeff {
            out.push_str(&mag.to_string());
        }
        match power {
            0 => {}
            1 => out.push('x'),
            _ => {
                out.push_str("x^");
                out.push_str(&power.to_string());
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

// ---------------------------------------------------------------------------
// the factor catalog
// ---------------------------------------------------------------------------

/// A monic integer polynomial whose roots are displayed as a single token.
/// `tail` holds the coefficients below the leading one, constant term first.
pub struct CatalogFactor {
    pub name: &'static str,
    pub tail: &'static [i64],
}

/// Irreducible factors the engine can name, in display order. The two
/// degree-two entries with constant term -16 differ only in the sign of the
/// linear term; both are carried so that either root pair can be reported.
pub const CATALOG: &[CatalogFactor] = &[
    CatalogFactor { name: "(+-sqrt2)", tail: &[-2, 0] },
    CatalogFactor { name: "(+-sqrt8)", tail: &[-8, 0] },
    CatalogFactor { name: "(1+-sqrt5)", tail: &[-4, -2] },
    CatalogFactor { name: "(2+-2sqrt5)", tail: &[-16, -4] },
    CatalogFactor { name: "(-2+-2sqrt5)", tail: &[-16, 4] },
    CatalogFactor { name: "(3A)", tail: &[-16, -16, 4] },
    CatalogFactor { name: "(3B)", tail: &[16, -24, 2] },
    CatalogFactor { name: "(3C)", tail: &[-8, -16, 4] },
    CatalogFactor { name: "(4A)", tail: &[8, 0, -8, 0] },
    CatalogFactor { name: "(4B)", tail: &[8, -8, -16, 4] },
    CatalogFactor { name: "(4C)", tail: &[8, -16, -16, 4] },
    CatalogFactor { name: "(4D)", tail: &[16, -8, -16, 4] },
    CatalogFactor { name: "(5A)", tail: &[-64, 32, 64, -32, 0] },
    CatalogFactor { name: "(5B)", tail: &[-96, 40, 64, -32, 0] },
];

/// Index into [`CATALOG`] by display name.
pub fn catalog_index(name: &str) -> Option<usize> {
    CATALOG.iter().position(|f| f.name == name)
}

// ---------------------------------------------------------------------------
// spectra
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Part {
    Int(i64),
    Factor(usize),
}

/// A fully factored spectrum: parts with multiplicities, in display order.
///
/// Integer eigenvalues of the stack quotient lead in the fixed order 14, 6,
/// 2, -2, -6; any other integers follow in increasing order, then catalog
/// factors in catalog order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Spectrum {
    pub parts: Vec<(Part, u32)>,
}

const QUOTIENT_EIGENVALUE_ORDER: [i64; 5] = [14, 6, 2, -2, -6];

impl Spectrum {
    /// Number of distinct eigenvalues, counting each catalog root separately.
    pub fn eigenvalue_count(&self) -> usize {
        self.parts
            .iter()
            .map(|&(p, _)| match p {
                Part::Int(_) => 1,
                Part::Factor(i) => CATALOG[i].tail.len(),
            })
            .sum()
    }

    /// Total multiplicity, which equals the vertex count.
    pub fn vertex_count(&self) -> u64 {
        self.parts
            .iter()
            .map(|&(p, m)| {
                let deg = match p {
                    Part::Int(_) => 1,
                    Part::Factor(i) => CATALOG[i].tail.len(),
                };
                deg as u64 * m as u64
            })
            .sum()
    }

    pub fn multiplicity_of_int(&self, r: i64) -> u32 {
        self.parts
            .iter()
            .find_map(|&(p, m)| (p == Part::Int(r)).then_some(m))
            .unwrap_or(0)
    }

    pub fn is_integral(&self) -> bool {
        self.parts.iter().all(|&(p, _)| matches!(p, Part::Int(_)))
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &(p, m)) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match p {
                Part::Int(r) if r < 0 => write!(f, "({r})^{m}")?,
                Part::Int(r) => write!(f, "{r}^{m}")?,
                Part::Factor(idx) => write!(f, "{}^{m}", CATALOG[idx].name)?,
            }
        }
        Ok(())
    }
}

/// Parses the display form back into a spectrum: space-separated
/// `token^mult` entries, with negative integers parenthesized and catalog
/// factors under their display names.
pub fn parse_spectrum(s: &str) -> Result<Spectrum, SpectraError> {
    let bad = |reason: String| SpectraError::InconsistentSpectrum { reason };
    let mut parts = Vec::new();
    for token in s.split_whitespace() {
        let (base, mult) = token
            .rsplit_once('^')
            .ok_or_else(|| bad(format!("token {token} lacks a multiplicity")))?;
        let mult: u32 = mult
            .parse()
            .map_err(|_| bad(format!("bad multiplicity in {token}")))?;
        let part = if let Ok(r) = base.parse::<i64>() {
            Part::Int(r)
        } else if let Some(idx) = catalog_index(base) {
            Part::Factor(idx)
        } else if let Some(r) = base
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .and_then(|b| b.parse::<i64>().ok())
        {
            Part::Int(r)
        } else {
            return Err(bad(format!("unknown token {base}")));
        };
        parts.push((part, mult));
    }
    if parts.is_empty() {
        return Err(bad("empty spectrum string".into()));
    }
    Ok(Spectrum { parts })
}

/// Power sums p_1..p_max of the roots of a monic polynomial given by its
/// tail (coefficients below the leading one, constant term first, as in
/// the catalog), by Newton's identities.
pub fn root_power_sums(tail: &[i64], max: usize) -> Vec<BigInt> {
    let d = tail.len();
    let e = |k: usize| -> BigInt {
        if k > d {
            BigInt::from(0)
        } else {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            BigInt::from(sign) * BigInt::from(tail[d - k])
        }
    };
    let mut p: Vec<BigInt> = Vec::with_capacity(max + 1);
    p.push(BigInt::from(d as i64));
    for k in 1..=max {
        let mut sum = BigInt::from(0);
        for i in 1..k {
            let term = e(i) * &p[k - i];
            if i % 2 == 0 {
                sum -= term;
            } else {
                sum += term;
            }
        }
        let last = BigInt::from(k as i64) * e(k);
        let last = if k % 2 == 0 { -last } else { last };
        p.push(sum + last);
    }
    p
}

/// The j-th spectral moment, the sum of the j-th powers of all
/// eigenvalues with multiplicity.
pub fn spectrum_moment(sp: &Spectrum, j: usize) -> BigInt {
    let mut total = BigInt::from(0);
    for &(part, mult) in &sp.parts {
        let contribution = match part {
            Part::Int(r) => BigInt::from(r).pow(j as u32),
            Part::Factor(idx) => root_power_sums(CATALOG[idx].tail, j)[j].clone(),
        };
        total += contribution * BigInt::from(mult);
    }
    total
}

/// Factors a monic integer polynomial into linear factors with roots in
/// `[-root_bound, root_bound]` and catalog factors. Anything left over is an
/// uncatalogued factor and reported as the error.
pub fn factor_into_catalog(poly: &[BigInt], root_bound: i64) -> Result<Spectrum, SpectraError> {
    assert!(poly.first().map(|c| c.is_one()).unwrap_or(false), "polynomial must be monic");
    let mut work = poly.to_vec();
    let mut ints: BTreeMap<i64, u32> = BTreeMap::new();
    for r in -root_bound..=root_bound {
        while work.len() > 1 && divide_by_linear(&mut work, r) {
            *ints.entry(r).or_insert(0) += 1;
        }
    }
    let mut named: Vec<(usize, u32)> = Vec::new();
    for (idx, factor) in CATALOG.iter().enumerate() {
        let mut mult = 0;
        while divide_by_monic(&mut work, factor.tail) {
            mult += 1;
        }
        if mult > 0 {
            named.push((idx, mult));
        }
    }
    if work.len() > 1 {
        return Err(SpectraError::UncataloguedFactor {
            degree: work.len() - 1,
            poly: poly_display(&work),
        });
    }
    let mut parts: Vec<(Part, u32)> = Vec::new();
    for v in QUOTIENT_EIGENVALUE_ORDER {
        if let Some(m) = ints.remove(&v) {
            parts.push((Part::Int(v), m));
        }
    }
    for (v, m) in ints {
        parts.push((Part::Int(v), m));
    }
    for (idx, m) in named {
        parts.push((Part::Factor(idx), m));
    }
    Ok(Spectrum { parts })
}

/// Exact spectrum of `g`, factored over the catalog.
pub fn spectrum(g: &Graph) -> Result<Spectrum, SpectraError> {
    let bound = (0..g.n()).map(|v| g.degree(v)).max().unwrap_or(0) as i64;
    factor_into_catalog(&char_poly(g), bound)
}

// ---------------------------------------------------------------------------
// equitable partitions and quotients
// ---------------------------------------------------------------------------

/// Quotient matrix of an equitable partition: entry (i, j) is the number of
/// neighbours a vertex of cell i has in cell j. Cells must partition the
/// vertex set; a cell whose vertices disagree on some count is reported as
/// not equitable.
pub fn quotient_matrix(g: &Graph, cells: &[Vec<usize>]) -> Result<Vec<Vec<i64>>, SpectraError> {
    let n = g.n();
    let mut seen = 0u64;
    for cell in cells {
        for &v in cell {
            assert!(v < n, "cell vertex {v} out of range");
            assert!(seen >> v & 1 == 0, "vertex {v} appears in two cells");
            seen |= 1 << v;
        }
    }
    assert_eq!(seen, g.vertex_mask(), "cells must cover every vertex");
    let masks: Vec<u64> = cells
        .iter()
        .map(|c| c.iter().fold(0u64, |acc, &v| acc | 1 << v))
        .collect();
    let mut rows = Vec::with_capacity(cells.len());
    for (ci, cell) in cells.iter().enumerate() {
        let row: Vec<i64> = masks
            .iter()
            .map(|&m| (g.neighbors(cell[0]) & m).count_ones() as i64)
            .collect();
        for &v in &cell[1..] {
            for (cj, &m) in masks.iter().enumerate() {
                if (g.neighbors(v) & m).count_ones() as i64 != row[cj] {
                    return Err(SpectraError::NotEquitable { cell: ci, u: cell[0], v, other: cj });
                }
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Eigenvalues of an integer matrix, all of which must be integers, sorted
/// in decreasing order with multiplicities.
pub fn integer_eigenvalues(mat: &[Vec<i64>]) -> Result<Vec<(i64, u32)>, SpectraError> {
    let poly = char_poly_int_matrix(mat);
    let bound = mat.iter().map(|r| r.iter().map(|c| c.abs()).sum::<i64>()).max().unwrap_or(0);
    let mut work = poly;
    let mut roots: BTreeMap<i64, u32> = BTreeMap::new();
    for r in -bound..=bound {
        while work.len() > 1 && divide_by_linear(&mut work, r) {
            *roots.entry(r).or_insert(0) += 1;
        }
    }
    if work.len() > 1 {
        return Err(SpectraError::UncataloguedFactor {
            degree: work.len() - 1,
            poly: poly_display(&work),
        });
    }
    Ok(roots.into_iter().rev().collect())
}

// ---------------------------------------------------------------------------
// multiplicities from moment identities
// ---------------------------------------------------------------------------

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|col| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter().enumerate().filter(|&(j, _)| j != col).map(|(_, &x)| x).collect()
                    })
                    .collect();
                let sign = if col % 2 == 0 { 1 } else { -1 };
                sign * m[0][col] * det(&minor)
            })
            .sum(),
    }
}

/// Eigenvalue multiplicities of an edge-regular graph with `v` vertices,
/// valency `k` and `lambda` common neighbours per edge, given its distinct
/// eigenvalues with `eigs[0] = k`. The multiplicity of `k` is one; the rest
/// solve the linear system given by the traces of the first powers of the
/// adjacency matrix, and the solution is checked against every identity
/// through the third power. At most five distinct eigenvalues are supported,
/// since only four trace identities are determined by `(v, k, lambda)`.
pub fn solve_multiplicities(
    v: u64,
    k: u64,
    lambda: u64,
    eigs: &[i64],
) -> Result<Vec<u64>, SpectraError> {
    let fail = |reason: String| Err(SpectraError::InconsistentSpectrum { reason });
    let l = eigs.len();
    if !(2..=5).contains(&l) {
        return fail(format!("{l} distinct eigenvalues, supported range is 2 to 5"));
    }
    if eigs[0] != k as i64 {
        return fail(format!("leading eigenvalue {} is not the valency {k}", eigs[0]));
    }
    let moments: [i128; 4] =
        [v as i128, 0, (v * k) as i128, (v * k * lambda) as i128];
    let pow = |e: i64, j: usize| (e as i128).pow(j as u32);
    let unknowns = l - 1;
    let system: Vec<Vec<i128>> = (0..unknowns)
        .map(|j| (1..l).map(|i| pow(eigs[i], j)).collect())
        .collect();
    let rhs: Vec<i128> = (0..unknowns).map(|j| moments[j] - pow(eigs[0], j)).collect();
    let d = det(&system);
    if d == 0 {
        return fail("eigenvalues are not distinct".into());
    }
    let mut mults = vec![1u64];
    for i in 0..unknowns {
        let mut replaced = system.clone();
        for (j, row) in replaced.iter_mut().enumerate() {
            row[i] = rhs[j];
        }
        let num = det(&replaced);
        if num % d != 0 || num / d <= 0 {
            return fail(format!("multiplicity of {} is {num}/{d}", eigs[i + 1]));
        }
        mults.push((num / d) as u64);
    }
    for j in unknowns..4 {
        let lhs: i128 = eigs.iter().zip(&mults).map(|(&e, &m)| m as i128 * pow(e, j)).sum();
        if lhs != moments[j] {
            return fail(format!("trace of power {j} is {lhs}, expected {}", moments[j]));
        }
    }
    Ok(mults)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::*;

    #[test]
    fn complete_graph_char_poly() {
        let poly = char_poly(&complete(4));
        let want: Vec<BigInt> = [1, 0, -6, -8, -3].into_iter().map(BigInt::from).collect();
        assert_eq!(poly, want);
    }

    #[test]
    fn identity_matrix_char_poly() {
        let m = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let want: Vec<BigInt> = [1, -3, 3, -1].into_iter().map(BigInt::from).collect();
        assert_eq!(char_poly_int_matrix(&m), want);
    }

    #[test]
    fn rook_and_shrikhande_are_cospectral() {
        let a = spectrum(&rook4()).unwrap();
        let b = spectrum(&shrikhande()).unwrap();
        assert_eq!(a.to_string(), "6^1 2^6 (-2)^9");
        assert_eq!(a, b);
        assert_eq!(a.eigenvalue_count(), 3);
        assert_eq!(a.vertex_count(), 16);
        assert!(a.is_integral());
        let poly = char_poly(&rook4());
        assert_eq!(poly[1], BigInt::zero());
        assert_eq!(poly[2], BigInt::from(-48));
    }

    #[test]
    fn petersen_spectrum_display() {
        let s = spectrum(&petersen()).unwrap();
        assert_eq!(s.to_string(), "(-2)^4 1^5 3^1");
        assert_eq!(s.multiplicity_of_int(1), 5);
        assert_eq!(s.multiplicity_of_int(7), 0);
    }

    #[test]
    fn pentagon_spectrum_is_uncatalogued() {
        match spectrum(&cycle(5)) {
            Err(SpectraError::UncataloguedFactor { degree: 4, .. }) => {}
            other => panic!("expected an uncatalogued quartic, got {other:?}"),
        }
    }

    fn poly_mul(a: &[BigInt], b: &[i64]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    fn descending(tail: &[i64]) -> Vec<i64> {
        let mut d = vec![1];
        d.extend(tail.iter().rev());
        d
    }

    #[test]
    fn catalog_factors_round_trip() {
        let mut poly = vec![BigInt::one()];
        for name in ["(+-sqrt2)", "(+-sqrt2)", "(3B)", "(-2+-2sqrt5)"] {
            let f = &CATALOG[catalog_index(name).unwrap()];
            poly = poly_mul(&poly, &descending(f.tail));
        }
        poly = poly_mul(&poly, &[1, -14]);
        let s = factor_into_catalog(&poly, 14).unwrap();
        assert_eq!(s.to_string(), "14^1 (+-sqrt2)^2 (-2+-2sqrt5)^1 (3B)^1");
        assert_eq!(s.vertex_count(), 10);
        assert_eq!(s.eigenvalue_count(), 8);
    }

    #[test]
    fn sign_twin_quadratics_stay_distinct() {
        let a = factor_into_catalog(&[1, 4, -16].map(BigInt::from).to_vec(), 20).unwrap();
        let b = factor_into_catalog(&[1, -4, -16].map(BigInt::from).to_vec(), 20).unwrap();
        assert_eq!(a.to_string(), "(-2+-2sqrt5)^1");
        assert_eq!(b.to_string(), "(2+-2sqrt5)^1");
    }

    #[test]
    fn display_order_is_quotient_then_ascending_then_catalog() {
        let mut poly = vec![BigInt::one()];
        for r in [14i64, 6, 2, -2, -6, 0, 4] {
            poly = poly_mul(&poly, &[1, -r]);
        }
        let f = &CATALOG[catalog_index("(+-sqrt2)").unwrap()];
        poly = poly_mul(&poly, &descending(f.tail));
        let s = factor_into_catalog(&poly, 14).unwrap();
        assert_eq!(s.to_string(), "14^1 6^1 2^1 (-2)^1 (-6)^1 0^1 4^1 (+-sqrt2)^1");
    }

    #[test]
    fn rook_distance_partition_quotient() {
        let g = rook4();
        let from0: Vec<usize> = bits(g.neighbors(0)).collect();
        let rest: Vec<usize> =
            (1..16).filter(|&v| !g.has_edge(0, v)).collect();
        let cells = vec![vec![0], from0, rest];
        let q = quotient_matrix(&g, &cells).unwrap();
        assert_eq!(q, vec![vec![0, 6, 0], vec![1, 2, 3], vec![0, 2, 4]]);
        assert_eq!(integer_eigenvalues(&q).unwrap(), vec![(6, 1), (2, 1), (-2, 1)]);
    }

    #[test]
    fn one_cell_quotient_of_a_regular_graph() {
        let q = quotient_matrix(&rook4(), &[(0..16).collect()]).unwrap();
        assert_eq!(q, vec![vec![6]]);
    }

    #[test]
    fn unbalanced_partition_is_rejected() {
        let g = rook4();
        let cells = vec![vec![0], (1..16).collect()];
        match quotient_matrix(&g, &cells) {
            Err(SpectraError::NotEquitable { cell: 1, .. }) => {}
            other => panic!("expected a non-equitable report, got {other:?}"),
        }
    }

    #[test]
    fn multiplicities_of_strongly_regular_fixtures() {
        assert_eq!(solve_multiplicities(16, 6, 2, &[6, 2, -2]).unwrap(), vec![1, 6, 9]);
        assert_eq!(solve_multiplicities(27, 10, 1, &[10, 1, -5]).unwrap(), vec![1, 20, 6]);
        assert_eq!(solve_multiplicities(4, 3, 2, &[3, -1]).unwrap(), vec![1, 3]);
    }

    #[test]
    fn multiplicities_of_the_five_eigenvalue_spectrum() {
        assert_eq!(
            solve_multiplicities(48, 14, 2, &[14, 6, 2, -2, -6]).unwrap(),
            vec![1, 1, 26, 12, 8]
        );
    }

    #[test]
    fn impossible_spectra_are_rejected() {
        assert!(matches!(
            solve_multiplicities(16, 6, 2, &[6, 3, -2]),
            Err(SpectraError::InconsistentSpectrum { .. })
        ));
        assert!(matches!(
            solve_multiplicities(16, 5, 2, &[6, 2, -2]),
            Err(SpectraError::InconsistentSpectrum { .. })
        ));
    }

    #[test]
    fn polynomials_render_readably() {
        let p: Vec<BigInt> = [1, 0, -32, 64, 32, -64].into_iter().map(BigInt::from).collect();
        assert_eq!(poly_display(&p), "x^5 - 32x^3 + 64x^2 + 32x - 64");
    }

    #[test]
    fn display_and_parse_round_trip() {
        for s in [
            "14^1 6^1 2^26 (-2)^12 (-6)^8",
            "14^1 6^1 2^14 (-2)^12 (-6)^4 0^4 (+-sqrt8)^2",
            "14^1 (+-sqrt2)^2 (-2+-2sqrt5)^1 (3B)^2",
        ] {
            let sp = parse_spectrum(s).unwrap();
            assert_eq!(sp.to_string(), s);
        }
        assert!(parse_spectrum("14^1 nonsense^2").is_err());
        assert!(parse_spectrum("14").is_err());
        assert!(parse_spectrum("").is_err());
    }

    #[test]
    fn power_sums_of_catalog_factors() {
        let sqrt2 = root_power_sums(&[-2, 0], 3);
        assert_eq!(sqrt2, vec![2.into(), 0.into(), 4.into(), BigInt::from(0)]);
        let golden = root_power_sums(&[-4, -2], 3);
        // Roots 1 +- sqrt 5: sums 2, 2 + 10 = 12, 2 + 30 = 32.
        assert_eq!(golden, vec![2.into(), 2.into(), 12.into(), BigInt::from(32)]);
        for factor in CATALOG {
            let p = root_power_sums(factor.tail, 1);
            let trace = -BigInt::from(factor.tail[factor.tail.len() - 1]);
            assert_eq!(p[1], trace, "{}", factor.name);
        }
    }

    #[test]
    fn moments_of_the_five_eigenvalue_spectrum() {
        let sp = parse_spectrum("14^1 6^1 2^26 (-2)^12 (-6)^8").unwrap();
        assert_eq!(spectrum_moment(&sp, 0), BigInt::from(48));
        assert_eq!(spectrum_moment(&sp, 1), BigInt::from(0));
        assert_eq!(spectrum_moment(&sp, 2), BigInt::from(672));
        assert_eq!(spectrum_moment(&sp, 3), BigInt::from(1344));
    }

    #[test]
    fn moments_match_direct_computation_for_a_graph() {
        let g = crate::samples::petersen();
        let sp = spectrum(&g).unwrap();
        assert_eq!(spectrum_moment(&sp, 0), BigInt::from(10));
        assert_eq!(spectrum_moment(&sp, 1), BigInt::from(0));
        assert_eq!(spectrum_moment(&sp, 2), BigInt::from(30));
        assert_eq!(spectrum_moment(&sp, 3), BigInt::from(0));
    }
}
