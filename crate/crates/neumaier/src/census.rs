//! The full (λ, μ) = (2, 2) experiment: enumerate the stacks of every
//! type, deduplicate them, group the survivors into families by
//! characteristic polynomial, and compare the result field by field
//! against the embedded reference tables.
//!
//! A type (1, A, B) fixes the three layer classes by their tags; its
//! census stacks all 4³ partition-pair choices times the canonical map
//! triples. Types whose censuses coincide are merged under a joined
//! label such as "5/6"; types splitting into three polynomials get
//! subfamily letters matched by spectrum string.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io;
use std::path::Path;
use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::json;
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::canon::{canonical_key, decode_key, is_vertex_transitive};
use crate::graphkit::{edge_regular_params, g6_encode, neumaier_check, ErgParams};
use crate::spectra::{char_poly, factor_into_catalog, Part, SpectraError, Spectrum, CATALOG};
use crate::stacker::{
    enumerate_admissible, stack, triple_ingredient, ConstructionParams, StackError, StackSpec,
};
use crate::triples::{classify_all_triples, enumerate_partition_pairs, PartitionPair, Triple};

/// A stack type: three layer tags, first slot 1 for the clique censuses,
/// kept in nondecreasing order past the first slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StackType(pub [u8; 3]);

impl StackType {
    pub fn neumaier(a: u8, b: u8) -> StackType {
        assert!((1..=12).contains(&a) && (1..=12).contains(&b), "tags are 1..=12");
        StackType([1, a.min(b), a.max(b)])
    }

    pub fn free(mut slots: [u8; 3]) -> StackType {
        assert!(slots.iter().all(|s| (1..=12).contains(s)), "tags are 1..=12");
        slots.sort_unstable();
        StackType(slots)
    }

    pub fn is_neumaier(&self) -> bool {
        self.0[0] == 1
    }

    /// Position of a (1, A, B) type in the table order, 1 through 78.
    pub fn rank(&self) -> Option<usize> {
        if !self.is_neumaier() {
            return None;
        }
        let (a, b) = (self.0[1] as usize, self.0[2] as usize);
        Some((1..a).map(|x| 13 - x).sum::<usize>() + (b - a + 1))
    }
}

impl fmt::Display for StackType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// The 78 clique types in table order.
pub fn all_neumaier_types() -> Vec<StackType> {
    let mut out = Vec::with_capacity(78);
    for a in 1..=12 {
        for b in a..=12 {
            out.push(StackType::neumaier(a, b));
        }
    }
    out
}

/// Where a census graph first came from: the type, the partition-pair
/// choice per layer, and the three part bijections.
#[derive(Clone, Debug)]
pub struct StackProvenance {
    pub t: StackType,
    pub pair_choice: [usize; 3],
    pub maps: [Vec<usize>; 3],
}

/// Rebuilds the stack specification a provenance describes.
pub fn spec_from_provenance(p: &StackProvenance, classes: &[Triple]) -> StackSpec {
    let trs: [&Triple; 3] = [
        &classes[p.t.0[0] as usize - 1],
        &classes[p.t.0[1] as usize - 1],
        &classes[p.t.0[2] as usize - 1],
    ];
    let ingredients = [
        triple_ingredient(trs[0], &enumerate_partition_pairs(trs[0])[p.pair_choice[0]]),
        triple_ingredient(trs[1], &enumerate_partition_pairs(trs[1])[p.pair_choice[1]]),
        triple_ingredient(trs[2], &enumerate_partition_pairs(trs[2])[p.pair_choice[2]]),
    ];
    StackSpec {
        params: ConstructionParams::new(2, 2),
        ingredients,
        maps: p.maps.clone(),
    }
}

#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub key: Vec<u8>,
    pub g6: String,
    pub provenance: StackProvenance,
}

#[derive(Clone, Debug)]
pub struct FamilyRecord {
    pub label: String,
    pub types: Vec<StackType>,
    pub members: Vec<FamilyMember>,
    pub spectrum: Spectrum,
    pub spectrum_string: String,
    pub char_poly: Vec<BigInt>,
}

impl FamilyRecord {
    pub fn graph_count(&self) -> usize {
        self.members.len()
    }

    pub fn eigenvalue_count(&self) -> usize {
        self.spectrum.eigenvalue_count()
    }
}

/// Distinct keys of one type census, together with the raw stack count.
#[derive(Clone, Debug)]
pub struct TypeSummary {
    pub t: StackType,
    pub raw_count: usize,
    pub keys: Vec<Vec<u8>>,
}

#[derive(Clone, Debug)]
pub struct VtHit {
    pub family: String,
    pub g6: String,
}

#[derive(Clone, Debug, Default)]
pub struct DiffReport {
    pub lines: Vec<String>,
}

impl DiffReport {
    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct CensusReport {
    pub full_omega: bool,
    pub types: Vec<TypeSummary>,
    pub families: Vec<FamilyRecord>,
    pub identical_pairs: Vec<(StackType, StackType)>,
    pub total_distinct: usize,
    pub vertex_transitive: Vec<VtHit>,
    pub diff: DiffReport,
}

impl CensusReport {
    pub fn family(&self, label: &str) -> Option<&FamilyRecord> {
        self.families.iter().find(|f| f.label == label)
    }
}

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("type {t} produced a stack without a nexus-1 clique of size 4: {g6}")]
    CliqueCheckFailed { t: String, g6: String },
    #[error("type {t} produced a stack that is not edge-regular (48,14,2): {g6}")]
    NotEdgeRegular { t: String, g6: String },
    #[error("type censuses {a} and {b} overlap partially")]
    PartialOverlap { a: String, b: String },
    #[error("family {family}: two subfamilies share a reference spectrum; letters are ambiguous")]
    SubfamilyTie { family: String },
    #[error("family {family}: expected 1 or 3 characteristic polynomials, found {found}")]
    UnexpectedSplit { family: String, found: usize },
    #[error(transparent)]
    Stack(#[from] StackError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

// ---------------------------------------------------------------------------
// reference tables
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Deserialize)]
pub struct ExpectedFamily {
    pub label: String,
    pub types: Vec<[u8; 3]>,
    pub graphs: usize,
    pub eigenvalues: usize,
    pub spectrum: String,
}

#[derive(Deserialize)]
struct ExpectedData {
    families: Vec<ExpectedFamily>,
}

/// The embedded reference rows: 109 families with their counts,
/// eigenvalue counts, and spectrum strings.
pub fn expected_families() -> &'static [ExpectedFamily] {
    static DATA: OnceLock<Vec<ExpectedFamily>> = OnceLock::new();
    DATA.get_or_init(|| {
        let raw = include_str!("expected_families.json");
        let parsed: ExpectedData = serde_json::from_str(raw).expect("embedded tables parse");
        parsed.families
    })
}

// ---------------------------------------------------------------------------
// per-type enumeration
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
struct RawEntry {
    hits: u64,
    order: usize,
    pair_choice: [usize; 3],
    maps: [Vec<usize>; 3],
}

struct TypeRaw {
    raw_count: usize,
    entries: BTreeMap<Vec<u8>, RawEntry>,
}

fn merge_entry(acc: &mut BTreeMap<Vec<u8>, RawEntry>, key: Vec<u8>, e: RawEntry) {
    match acc.get_mut(&key) {
        None => {
            acc.insert(key, e);
        }
        Some(cur) => {
            cur.hits += e.hits;
            if e.order < cur.order {
                cur.order = e.order;
                cur.pair_choice = e.pair_choice;
                cur.maps = e.maps;
            }
        }
    }
}

/// Stacks one type exhaustively and deduplicates by canonical key. Every
/// distinct graph is checked: edge-regular (48,14,2) always, and carrying
/// a nexus-1 clique of size 4 when the type has a rook slot.
fn census_one_type(t: StackType, full_omega: bool, classes: &[Triple]) -> Result<TypeRaw, CensusError> {
    let trs: [&Triple; 3] = [
        &classes[t.0[0] as usize - 1],
        &classes[t.0[1] as usize - 1],
        &classes[t.0[2] as usize - 1],
    ];
    let pairs: [Vec<PartitionPair>; 3] = [
        enumerate_partition_pairs(trs[0]),
        enumerate_partition_pairs(trs[1]),
        enumerate_partition_pairs(trs[2]),
    ];
    let params = ConstructionParams::new(2, 2);
    let mut specs: Vec<([usize; 3], [Vec<usize>; 3])> = Vec::new();
    for i0 in 0..pairs[0].len() {
        for i1 in 0..pairs[1].len() {
            for i2 in 0..pairs[2].len() {
                let basis = [
                    triple_ingredient(trs[0], &pairs[0][i0]),
                    triple_ingredient(trs[1], &pairs[1][i1]),
                    triple_ingredient(trs[2], &pairs[2][i2]),
                ];
                for maps in enumerate_admissible(&basis, !full_omega) {
                    specs.push(([i0, i1, i2], maps));
                }
            }
        }
    }
    let process = |i: usize| -> (Vec<u8>, RawEntry) {
        let (pc, maps) = &specs[i];
        let spec = StackSpec {
            params,
            ingredients: [
                triple_ingredient(trs[0], &pairs[0][pc[0]]),
                triple_ingredient(trs[1], &pairs[1][pc[1]]),
                triple_ingredient(trs[2], &pairs[2][pc[2]]),
            ],
            maps: maps.clone(),
        };
        let g = stack(&spec).expect("enumerated specs stack cleanly");
        let key = canonical_key(&g);
        (key, RawEntry { hits: 1, order: i, pair_choice: *pc, maps: maps.clone() })
    };
    #[cfg(feature = "parallel")]
    let entries: BTreeMap<Vec<u8>, RawEntry> = (0..specs.len())
        .into_par_iter()
        .map(process)
        .fold(BTreeMap::new, |mut acc, (k, e)| {
            merge_entry(&mut acc, k, e);
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, e) in b {
                merge_entry(&mut a, k, e);
            }
            a
        });
    #[cfg(not(feature = "parallel"))]
    let entries: BTreeMap<Vec<u8>, RawEntry> = {
        let mut acc = BTreeMap::new();
        for i in 0..specs.len() {
            let (k, e) = process(i);
            merge_entry(&mut acc, k, e);
        }
        acc
    };
    for key in entries.keys() {
        let (g, _) = decode_key(key);
        let expected = ErgParams { v: 48, k: 14, lambda: 2 };
        if edge_regular_params(&g) != Some(expected) {
            return Err(CensusError::NotEdgeRegular { t: t.to_string(), g6: g6_encode(&g) });
        }
        if t.is_neumaier() {
            let ok = neumaier_check(&g)
                .map(|p| p.nexus == 1 && p.clique_size == 4)
                .unwrap_or(false);
            if !ok {
                return Err(CensusError::CliqueCheckFailed { t: t.to_string(), g6: g6_encode(&g) });
            }
        }
    }
    Ok(TypeRaw { raw_count: specs.len(), entries })
}

// ---------------------------------------------------------------------------
// family assembly
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
struct GraphInfo {
    spectrum: Spectrum,
    poly: Vec<BigInt>,
    provenance: StackProvenance,
}

fn info_for_key(key: &[u8], provenance: StackProvenance) -> Result<GraphInfo, CensusError> {
    let (g, _) = decode_key(key);
    let poly = char_poly(&g);
    let spectrum = factor_into_catalog(&poly, 14)?;
    Ok(GraphInfo { spectrum, poly, provenance })
}

fn member_for_key(key: &[u8], info: &GraphInfo) -> FamilyMember {
    let (g, _) = decode_key(key);
    FamilyMember { key: key.to_vec(), g6: g6_encode(&g), provenance: info.provenance.clone() }
}

/// Groups the distinct graphs of one (merged) type set into family
/// records: one record if they share a characteristic polynomial, three
/// lettered subfamilies matched to the reference spectra otherwise.
fn assemble_families(
    base_label: &str,
    types: &[StackType],
    keys: &[Vec<u8>],
    info: &BTreeMap<Vec<u8>, GraphInfo>,
) -> Result<Vec<FamilyRecord>, CensusError> {
    let mut by_poly: BTreeMap<Vec<BigInt>, Vec<&Vec<u8>>> = BTreeMap::new();
    for key in keys {
        by_poly.entry(info[key].poly.clone()).or_default().push(key);
    }
    let record = |label: String, members: &[&Vec<u8>]| -> FamilyRecord {
        let first = &info[members[0]];
        FamilyRecord {
            label,
            types: types.to_vec(),
            members: members.iter().map(|k| member_for_key(k, &info[*k])).collect(),
            spectrum: first.spectrum.clone(),
            spectrum_string: first.spectrum.to_string(),
            char_poly: first.poly.clone(),
        }
    };
    if by_poly.len() == 1 {
        let members = by_poly.values().next().unwrap();
        return Ok(vec![record(base_label.to_string(), members)]);
    }
    if by_poly.len() != 3 || base_label.contains('/') {
        return Err(CensusError::UnexpectedSplit {
            family: base_label.to_string(),
            found: by_poly.len(),
        });
    }
    let reference: Vec<&ExpectedFamily> = expected_families()
        .iter()
        .filter(|row| {
            row.label.len() == base_label.len() + 1
                && row.label.starts_with(base_label)
                && row.label.ends_with(['A', 'B', 'C'])
        })
        .collect();
    let mut groups: Vec<(String, Vec<&Vec<u8>>)> = Vec::new();
    let mut unmatched: Vec<Vec<&Vec<u8>>> = Vec::new();
    let mut used_letters: Vec<String> = Vec::new();
    for members in by_poly.values() {
        let spectrum_string = info[members[0]].spectrum.to_string();
        let hits: Vec<&&ExpectedFamily> =
            reference.iter().filter(|row| row.spectrum == spectrum_string).collect();
        match hits.as_slice() {
            [row] => {
                groups.push((row.label.clone(), members.clone()));
                used_letters.push(row.label.clone());
            }
            [] => unmatched.push(members.clone()),
            _ => return Err(CensusError::SubfamilyTie { family: base_label.to_string() }),
        }
    }
    // A group whose spectrum appears nowhere in the reference cannot be
    // named by matching; it gets the leftover letters in a fixed order so
    // the diff can still report the disagreement.
    unmatched.sort_by_key(|members| info[members[0]].spectrum.to_string());
    let mut free_letters = ["A", "B", "C"]
        .iter()
        .map(|l| format!("{base_label}{l}"))
        .filter(|l| !used_letters.contains(l));
    for members in unmatched {
        let label = free_letters.next().expect("three letters cover three groups");
        groups.push((label, members));
    }
    groups.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(groups.into_iter().map(|(label, members)| record(label, &members)).collect())
}

/// Census of a single type under the canonical group alignment.
pub fn run_type_census(t: StackType) -> Result<Vec<FamilyRecord>, CensusError> {
    run_type_census_with(t, false)
}

pub fn run_type_census_with(t: StackType, full_omega: bool) -> Result<Vec<FamilyRecord>, CensusError> {
    let classes = classify_all_triples();
    let raw = census_one_type(t, full_omega, &classes)?;
    let mut info: BTreeMap<Vec<u8>, GraphInfo> = BTreeMap::new();
    for (key, entry) in &raw.entries {
        let provenance =
            StackProvenance { t, pair_choice: entry.pair_choice, maps: entry.maps.clone() };
        info.insert(key.clone(), info_for_key(key, provenance)?);
    }
    let keys: Vec<Vec<u8>> = raw.entries.keys().cloned().collect();
    let base_label = match t.rank() {
        Some(r) => r.to_string(),
        None => t.to_string(),
    };
    assemble_families(&base_label, &[t], &keys, &info)
}

/// The free-mode census of three Shrikhande layers.
pub fn shrikhande_stack_census() -> Result<Vec<FamilyRecord>, CensusError> {
    run_type_census(StackType::free([4, 4, 4]))
}

/// Runs all 78 types, merges coinciding censuses, and assembles the
/// families, the vertex-transitivity survey, and the reference diff.
pub fn run_full_census(full_omega: bool) -> Result<CensusReport, CensusError> {
    let classes = classify_all_triples();
    let mut summaries: Vec<TypeSummary> = Vec::new();
    let mut per_type_keys: Vec<Vec<Vec<u8>>> = Vec::new();
    let mut info: BTreeMap<Vec<u8>, GraphInfo> = BTreeMap::new();
    for t in all_neumaier_types() {
        let raw = census_one_type(t, full_omega, &classes)?;
        for (key, entry) in &raw.entries {
            if !info.contains_key(key) {
                let provenance =
                    StackProvenance { t, pair_choice: entry.pair_choice, maps: entry.maps.clone() };
                info.insert(key.clone(), info_for_key(key, provenance)?);
            }
        }
        let keys: Vec<Vec<u8>> = raw.entries.keys().cloned().collect();
        summaries.push(TypeSummary { t, raw_count: raw.raw_count, keys: keys.clone() });
        per_type_keys.push(keys);
    }
    let count = summaries.len();
    let mut identical: Vec<(usize, usize)> = Vec::new();
    for i in 0..count {
        for j in i + 1..count {
            match compare_key_sets(&per_type_keys[i], &per_type_keys[j]) {
                KeySetRelation::Identical => identical.push((i, j)),
                KeySetRelation::Disjoint => {}
                KeySetRelation::Partial => {
                    return Err(CensusError::PartialOverlap {
                        a: summaries[i].t.to_string(),
                        b: summaries[j].t.to_string(),
                    })
                }
            }
        }
    }
    let mut parent: Vec<usize> = (0..count).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    for &(i, j) in &identical {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            parent[ri.max(rj)] = ri.min(rj);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..count {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    let mut families: Vec<FamilyRecord> = Vec::new();
    for (root, members) in &groups {
        let types: Vec<StackType> = members.iter().map(|&i| summaries[i].t).collect();
        let label = members
            .iter()
            .map(|&i| summaries[i].t.rank().expect("full census runs clique types").to_string())
            .collect::<Vec<_>>()
            .join("/");
        families.extend(assemble_families(&label, &types, &per_type_keys[*root], &info)?);
    }
    let identical_pairs: Vec<(StackType, StackType)> =
        identical.iter().map(|&(i, j)| (summaries[i].t, summaries[j].t)).collect();
    let mut report = CensusReport {
        full_omega,
        types: summaries,
        families,
        identical_pairs,
        total_distinct: info.len(),
        vertex_transitive: Vec::new(),
        diff: DiffReport::default(),
    };
    report.vertex_transitive = vertex_transitive_survey(&report);
    report.diff = diff_expected(&report);
    Ok(report)
}

enum KeySetRelation {
    Identical,
    Disjoint,
    Partial,
}

fn compare_key_sets(a: &[Vec<u8>], b: &[Vec<u8>]) -> KeySetRelation {
    if a == b {
        return KeySetRelation::Identical;
    }
    let mut i = 0;
    let mut j = 0;
    let mut shared = false;
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                shared = true;
                break;
            }
        }
    }
    if shared {
        KeySetRelation::Partial
    } else {
        KeySetRelation::Disjoint
    }
}

// ---------------------------------------------------------------------------
// derived surveys
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Overlap {
    Identical,
    Disjoint,
}

/// How two type censuses relate, plus whether the swap rule predicts it.
pub fn overlap_relation(
    t1: StackType,
    t2: StackType,
    report: &CensusReport,
) -> Result<(Overlap, bool), CensusError> {
    let keys_of = |t: StackType| {
        report
            .types
            .iter()
            .find(|s| s.t == t)
            .map(|s| &s.keys)
            .expect("type present in the report")
    };
    let relation = match compare_key_sets(keys_of(t1), keys_of(t2)) {
        KeySetRelation::Identical => Overlap::Identical,
        KeySetRelation::Disjoint => Overlap::Disjoint,
        KeySetRelation::Partial => {
            return Err(CensusError::PartialOverlap { a: t1.to_string(), b: t2.to_string() })
        }
    };
    Ok((relation, heuristic_identical(t1, t2)))
}

/// The swap rule: two distinct types coincide exactly when one arises
/// from the other by replacing every tag 5 with 6 and vice versa.
pub fn heuristic_identical(t1: StackType, t2: StackType) -> bool {
    if t1 == t2 {
        return false;
    }
    let swap = |s: u8| match s {
        5 => 6,
        6 => 5,
        other => other,
    };
    let mut swapped = [swap(t1.0[0]), swap(t1.0[1]), swap(t1.0[2])];
    swapped.sort_unstable();
    swapped == t2.0
}

pub struct SpectrumEqualities {
    pub equal_pairs: Vec<(String, String)>,
    pub distinct_count: usize,
    pub rule_violations: Vec<String>,
}

/// Groups families by spectrum and checks the three equality rules: the
/// lettered matches (59,69), (63,71), (67,72); invariance under swapping
/// tags 1 and 4; and the coincidence of "43/51" with "44".
pub fn spectrum_equalities(report: &CensusReport) -> SpectrumEqualities {
    let mut equal_pairs = Vec::new();
    for (i, a) in report.families.iter().enumerate() {
        for b in report.families.iter().skip(i + 1) {
            if a.spectrum_string == b.spectrum_string {
                equal_pairs.push((a.label.clone(), b.label.clone()));
            }
        }
    }
    let mut spectra: Vec<&str> = report.families.iter().map(|f| f.spectrum_string.as_str()).collect();
    spectra.sort_unstable();
    spectra.dedup();
    let distinct_count = spectra.len();
    let mut rule_violations = Vec::new();
    let spectrum_of = |label: &str| report.family(label).map(|f| f.spectrum_string.clone());
    for (x, y) in [(59, 69), (63, 71), (67, 72)] {
        for letter in ["A", "B", "C"] {
            let (la, lb) = (format!("{x}{letter}"), format!("{y}{letter}"));
            match (spectrum_of(&la), spectrum_of(&lb)) {
                (Some(sa), Some(sb)) if sa == sb => {}
                _ => rule_violations.push(format!("{la} and {lb} do not share a spectrum")),
            }
        }
    }
    let swap14 = |s: u8| match s {
        1 => 4,
        4 => 1,
        other => other,
    };
    for family in &report.families {
        for t in &family.types {
            let swapped = StackType::neumaier(swap14(t.0[1]), swap14(t.0[2]));
            if swapped == *t {
                continue;
            }
            let partner = report
                .families
                .iter()
                .find(|f| f.types.contains(&swapped));
            match partner {
                Some(p) if p.spectrum_string == family.spectrum_string => {}
                _ => rule_violations.push(format!(
                    "{} and the {} family do not share a spectrum",
                    family.label, swapped
                )),
            }
        }
    }
    match (spectrum_of("43/51"), spectrum_of("44")) {
        (Some(a), Some(b)) if a == b => {}
        _ => rule_violations.push("43/51 and 44 do not share a spectrum".into()),
    }
    SpectrumEqualities { equal_pairs, distinct_count, rule_violations }
}

/// Tests every census representative for vertex transitivity.
pub fn vertex_transitive_survey(report: &CensusReport) -> Vec<VtHit> {
    let mut hits = Vec::new();
    for family in &report.families {
        for member in &family.members {
            let (g, _) = decode_key(&member.key);
            if is_vertex_transitive(&g) {
                hits.push(VtHit { family: family.label.clone(), g6: member.g6.clone() });
            }
        }
    }
    hits
}

/// Field-by-field comparison against the embedded reference tables.
pub fn diff_expected(report: &CensusReport) -> DiffReport {
    diff_against(report, expected_families())
}

pub fn diff_against(report: &CensusReport, expected: &[ExpectedFamily]) -> DiffReport {
    let mut lines = Vec::new();
    for row in expected {
        let Some(ours) = report.family(&row.label) else {
            lines.push(format!("family {}: missing from census", row.label));
            continue;
        };
        if ours.graph_count() != row.graphs {
            lines.push(format!(
                "family {}: graph count expected {}, found {}",
                row.label,
                row.graphs,
                ours.graph_count()
            ));
        }
        if ours.eigenvalue_count() != row.eigenvalues {
            lines.push(format!(
                "family {}: eigenvalue count expected {}, found {}",
                row.label,
                row.eigenvalues,
                ours.eigenvalue_count()
            ));
        }
        if ours.spectrum_string != row.spectrum {
            lines.push(format!(
                "family {}: spectrum expected {}, found {}",
                row.label, row.spectrum, ours.spectrum_string
            ));
        }
        let mut expected_types: Vec<StackType> =
            row.types.iter().map(|&[a, b, c]| StackType::free([a, b, c])).collect();
        expected_types.sort();
        let mut our_types = ours.types.clone();
        our_types.sort();
        if expected_types != our_types {
            lines.push(format!("family {}: contributing types differ", row.label));
        }
    }
    for family in &report.families {
        if !expected.iter().any(|row| row.label == family.label) {
            lines.push(format!("family {}: not in reference tables", family.label));
        }
    }
    DiffReport { lines }
}

// ---------------------------------------------------------------------------
// report output
// ---------------------------------------------------------------------------

fn sanitize_label(label: &str) -> String {
    label.replace('/', "-")
}

fn spectrum_factors(sp: &Spectrum) -> serde_json::Value {
    let parts: Vec<serde_json::Value> = sp
        .parts
        .iter()
        .map(|&(p, m)| {
            let token = match p {
                Part::Int(r) if r < 0 => format!("({r})"),
                Part::Int(r) => r.to_string(),
                Part::Factor(idx) => CATALOG[idx].name.to_string(),
            };
            json!({ "token": token, "mult": m })
        })
        .collect();
    serde_json::Value::Array(parts)
}

fn type_json(t: &StackType) -> serde_json::Value {
    json!([t.0[0], t.0[1], t.0[2]])
}

/// Writes `families/<label>.g6` and `stacks/<label>.json` under `dir`.
pub fn write_family_files(families: &[FamilyRecord], dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir.join("families"))?;
    fs::create_dir_all(dir.join("stacks"))?;
    for family in families {
        let name = sanitize_label(&family.label);
        let g6: String =
            family.members.iter().map(|m| m.g6.as_str()).collect::<Vec<_>>().join("\n") + "\n";
        fs::write(dir.join("families").join(format!("{name}.g6")), g6)?;
        let stacks: Vec<serde_json::Value> = family
            .members
            .iter()
            .map(|m| {
                json!({
                    "g6": m.g6,
                    "type": type_json(&m.provenance.t),
                    "pairs": m.provenance.pair_choice,
                    "maps": m.provenance.maps,
                })
            })
            .collect();
        fs::write(
            dir.join("stacks").join(format!("{name}.json")),
            serde_json::to_string_pretty(&serde_json::Value::Array(stacks))? + "\n",
        )?;
    }
    Ok(())
}

/// Writes `census.json`, per-family g6 files with their stack sidecars,
/// and `diff.txt` under `dir`.
pub fn write_outputs(report: &CensusReport, dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let families_json: Vec<serde_json::Value> = report
        .families
        .iter()
        .map(|f| {
            json!({
                "label": f.label,
                "types": f.types.iter().map(type_json).collect::<Vec<_>>(),
                "graphs": f.graph_count(),
                "eigenvalues": f.eigenvalue_count(),
                "spectrum": f.spectrum_string,
                "factors": spectrum_factors(&f.spectrum),
                "members": f.members.iter().map(|m| m.g6.clone()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let census = json!({
        "full_omega": report.full_omega,
        "total_distinct": report.total_distinct,
        "types": report.types.iter().map(|s| json!({
            "type": type_json(&s.t),
            "raw": s.raw_count,
            "distinct": s.keys.len(),
        })).collect::<Vec<_>>(),
        "identical_type_pairs": report.identical_pairs.iter().map(|(a, b)| {
            json!([type_json(a), type_json(b)])
        }).collect::<Vec<_>>(),
        "families": families_json,
        "vertex_transitive": report.vertex_transitive.iter().map(|h| json!({
            "family": h.family,
            "g6": h.g6,
        })).collect::<Vec<_>>(),
        "diff": report.diff.lines,
    });
    fs::write(dir.join("census.json"), serde_json::to_string_pretty(&census)? + "\n")?;
    write_family_files(&report.families, dir)?;
    let mut diff = report.diff.lines.join("\n");
    if !diff.is_empty() {
        diff.push('\n');
    }
    fs::write(dir.join("diff.txt"), diff)?;
    Ok(())
}

/// Runs `f` under a worker pool of `jobs` threads when a limit is given
/// and the parallel feature is on; otherwise runs it as is.
pub fn with_thread_limit<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    #[cfg(feature = "parallel")]
    {
        match jobs {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("worker pool builds")
                .install(f),
            None => f(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
        f()
    }
}
