//! Command-line front end for the stack census pipeline.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use neumaier::canon::{canonical_form, canonical_key, ColoredGraph};
use neumaier::census::{
    run_full_census, run_type_census_with, spec_from_provenance, with_thread_limit,
    write_family_files, write_outputs, CensusReport, StackProvenance, StackType,
};
use neumaier::graphkit::{bits, g6_decode, g6_encode, neumaier_check, Graph};
use neumaier::spectra::{integer_eigenvalues, quotient_matrix, solve_multiplicities, spectrum};
use neumaier::stacker::{
    enumerate_admissible, k3_ingredient, relation_partition, rook3_ovoid_ingredient,
    search_edge_regular_graphs, search_erg_8_4_2, stack, ConstructionParams, Ingredient,
    StackSpec,
};
use neumaier::triples::{classify_all_triples, d8_label, delta_1234, pair_type, PairType};

#[derive(Parser)]
#[command(name = "neumaier", version, about = "Census of the 48-vertex clique stacks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the twelve 16-vertex layer classes and print them.
    Triples {
        /// Directory for triples.g6 and its triples.json sidecar.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Enumerate, deduplicate and group stacks.
    Census {
        /// Census one clique type, given as its three tags.
        #[arg(long = "type", value_name = "1,A,B", value_parser = parse_clique_type,
              conflicts_with_all = ["all", "free_mode"])]
        clique_type: Option<StackType>,
        /// Census all 78 clique types and assemble the families.
        #[arg(long, conflicts_with = "free_mode")]
        all: bool,
        /// Census a type without the rook slot, given as its three tags.
        #[arg(long, value_name = "A,B,C", value_parser = parse_free_type)]
        free_mode: Option<StackType>,
        /// Use all 256 alignment triples instead of the canonical 64.
        #[arg(long)]
        full_omega: bool,
        /// Directory for census.json, families/, stacks/ and diff.txt.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long, value_name = "N")]
        jobs: Option<usize>,
    },
    /// The small parameter sets: (1,1), (1,3) and the empty (2,1) search.
    SmallCases,
    /// Exact spectrum of a graph given in graph6.
    Spectrum {
        /// A graph6 string, or a path to a file whose first line is one.
        g6: String,
    },
    /// Nine-cell quotient matrix and lifted multiplicities of a stack.
    Quotient {
        /// A .g6 file with a stack sidecar: <name>.json next to it, or
        /// stacks/<name>.json in a census output tree.
        path: PathBuf,
    },
    /// Full census compared against the reference tables.
    Verify {
        /// Worker threads; defaults to the available parallelism.
        #[arg(long, value_name = "N")]
        jobs: Option<usize>,
    },
}

fn parse_tags(s: &str) -> Result<[u8; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err("expected three comma-separated tags".into());
    }
    let mut tags = [0u8; 3];
    for (slot, part) in tags.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse::<u8>()
            .ok()
            .filter(|t| (1..=12).contains(t))
            .ok_or_else(|| format!("tag {part:?} is not an integer in 1..=12"))?;
    }
    Ok(tags)
}

fn parse_clique_type(s: &str) -> Result<StackType, String> {
    let tags = parse_tags(s)?;
    let t = StackType::free(tags);
    if !t.is_neumaier() {
        return Err("a clique type needs a tag-1 slot; use --free-mode otherwise".into());
    }
    Ok(t)
}

fn parse_free_type(s: &str) -> Result<StackType, String> {
    Ok(StackType::free(parse_tags(s)?))
}

fn main() -> ExitCode {
    // Die quietly when a pager or head closes the pipe early.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Triples { out } => cmd_triples(out.as_deref()),
        Command::Census { clique_type, all, free_mode, full_omega, out, jobs } => {
            cmd_census(clique_type, all, free_mode, full_omega, out, jobs)
        }
        Command::SmallCases => cmd_small_cases(),
        Command::Spectrum { g6 } => cmd_spectrum(&g6),
        Command::Quotient { path } => cmd_quotient(&path),
        Command::Verify { jobs } => cmd_verify(jobs),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn cmd_triples(out: Option<&Path>) -> Result<ExitCode> {
    let classes = classify_all_triples();
    for tr in &classes {
        let line = describe_triple(tr)?;
        println!("{line}");
    }
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        let lines: String =
            classes.iter().map(|tr| g6_encode(&tr.g)).collect::<Vec<_>>().join("\n") + "\n";
        std::fs::write(dir.join("triples.g6"), lines)?;
        let sidecar: Vec<serde_json::Value> = classes
            .iter()
            .map(|tr| {
                serde_json::json!({
                    "tag": tr.tag,
                    "g6": g6_encode(&tr.g),
                    "omega": tr.omega.map(|half| bits(half).collect::<Vec<_>>()),
                    "cycles": tr.cycles,
                })
            })
            .collect();
        let text = serde_json::to_string_pretty(&sidecar)? + "\n";
        std::fs::write(dir.join("triples.json"), text)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn describe_triple(tr: &neumaier::triples::Triple) -> Result<String> {
    let g6 = g6_encode(&tr.g);
    if tr.tag == 1 {
        return Ok(format!("class  1: rook layer with 4-cliques                {g6}"));
    }
    let t = pair_type(&tr.g, &tr.cycles[0], &tr.cycles[1])?;
    let kind = match t {
        PairType::T1 => "T1",
        PairType::T2 => "T2",
        PairType::T3a => "T3a",
        PairType::T3b => "T3b",
    };
    let delta = delta_1234(tr)?;
    Ok(format!(
        "class {:>2}: pair type {:<3} composite symmetry {:<8} {g6}",
        tr.tag,
        kind,
        d8_label(&delta)
    ))
}

fn out_dir(flag: Option<PathBuf>) -> Option<PathBuf> {
    match std::env::var_os("NEUMAIER_OUT") {
        Some(dir) => Some(PathBuf::from(dir)),
        None => flag,
    }
}

fn cmd_census(
    clique_type: Option<StackType>,
    all: bool,
    free_mode: Option<StackType>,
    full_omega: bool,
    out: Option<PathBuf>,
    jobs: Option<usize>,
) -> Result<ExitCode> {
    let out = out_dir(out);
    if all {
        let report = with_thread_limit(jobs, || run_full_census(full_omega))?;
        print_full_report(&report);
        if let Some(dir) = &out {
            write_outputs(&report, dir)?;
            println!("wrote {}", dir.join("census.json").display());
        }
        return Ok(ExitCode::SUCCESS);
    }
    let t = clique_type
        .or(free_mode)
        .ok_or_else(|| anyhow!("pass --type 1,A,B, --free-mode A,B,C or --all"))?;
    let families = with_thread_limit(jobs, || run_type_census_with(t, full_omega))?;
    let total: usize = families.iter().map(|f| f.graph_count()).sum();
    println!("type {t}: {total} graphs, {} family record(s)", families.len());
    for f in &families {
        println!(
            "family {}: {} graphs, {} eigenvalues, spectrum {}",
            f.label,
            f.graph_count(),
            f.eigenvalue_count(),
            f.spectrum_string
        );
    }
    if let Some(dir) = &out {
        write_family_files(&families, dir)?;
        println!("wrote family files under {}", dir.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn print_full_report(report: &CensusReport) {
    for f in &report.families {
        let types: Vec<String> = f.types.iter().map(|t| t.to_string()).collect();
        println!(
            "family {:<6} {:<24} {:>3} graphs, {:>2} eigenvalues, spectrum {}",
            f.label,
            types.join(" "),
            f.graph_count(),
            f.eigenvalue_count(),
            f.spectrum_string
        );
    }
    let five: usize = report
        .families
        .iter()
        .filter(|f| f.eigenvalue_count() == 5)
        .map(|f| f.graph_count())
        .sum();
    println!(
        "{} graphs, {} families, {five} with 5 eigenvalues",
        report.total_distinct,
        report.families.len()
    );
    println!(
        "{} coinciding type pairs, {} vertex-transitive graphs, {} diff line(s)",
        report.identical_pairs.len(),
        report.vertex_transitive.len(),
        report.diff.lines.len()
    );
}

fn cmd_small_cases() -> Result<ExitCode> {
    let triangle = small_case(ConstructionParams::new(1, 1), k3_ingredient())?;
    report_small_case("(1,1)", &triangle)?;
    let ovoid = small_case(ConstructionParams::new(1, 3), rook3_ovoid_ingredient())?;
    report_small_case("(1,3)", &ovoid)?;
    let octahedra = search_edge_regular_graphs(6, 4, 2);
    let missing = search_erg_8_4_2();
    if !missing.is_empty() {
        bail!("found {} edge-regular (8,4,2) graphs, expected none", missing.len());
    }
    println!(
        "(2,1): no edge-regular (8,4,2) ingredient exists; \
         (6,4,2) admits {} graph (the octahedron), so the sequence stops there",
        octahedra.len()
    );
    Ok(ExitCode::SUCCESS)
}

struct SmallCase {
    specs: usize,
    graphs: Vec<Graph>,
}

fn small_case(params: ConstructionParams, ingredient: Ingredient) -> Result<SmallCase> {
    let basis = [ingredient.clone(), ingredient.clone(), ingredient];
    let maps = enumerate_admissible(&basis, false);
    let mut keys: Vec<(Vec<u8>, Graph)> = Vec::new();
    for m in &maps {
        let spec =
            StackSpec { params, ingredients: basis.clone(), maps: m.clone() };
        let g = stack(&spec)?;
        let key = canonical_key(&g);
        if !keys.iter().any(|(k, _)| *k == key) {
            keys.push((key, g));
        }
    }
    Ok(SmallCase { specs: maps.len(), graphs: keys.into_iter().map(|(_, g)| g).collect() })
}

fn report_small_case(name: &str, case: &SmallCase) -> Result<ExitCode> {
    for g in &case.graphs {
        let p = neumaier_check(g)
            .ok_or_else(|| anyhow!("{name}: stacked graph fails the clique check"))?;
        let aut = canonical_form(&ColoredGraph::monochrome(g.clone())).aut_order;
        println!(
            "{name}: {} specifications, {} graph: ({},{},{};{},{}) with |Aut| = {aut}, g6 {}",
            case.specs,
            case.graphs.len(),
            p.v,
            p.k,
            p.lambda,
            p.nexus,
            p.clique_size,
            g6_encode(g)
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_spectrum(arg: &str) -> Result<ExitCode> {
    let g = match g6_decode(arg) {
        Ok(g) => g,
        Err(parse_err) => {
            let path = Path::new(arg);
            if path.exists() {
                let text = std::fs::read_to_string(path)?;
                let line = text
                    .lines()
                    .find(|l| !l.trim().is_empty())
                    .ok_or_else(|| anyhow!("{arg}: empty file"))?;
                g6_decode(line.trim()).with_context(|| format!("{arg}: first line"))?
            } else {
                return Err(parse_err).with_context(|| format!("{arg} is not graph6"));
            }
        }
    };
    let sp = spectrum(&g)?;
    println!("{sp}");
    Ok(ExitCode::SUCCESS)
}

/// Locates the construction sidecar of a g6 file: either `<name>.json`
/// next to it, or `stacks/<name>.json` in the sibling directory of a
/// census output tree.
fn find_sidecar(path: &Path) -> Option<PathBuf> {
    let direct = if path.extension().map(|e| e == "g6").unwrap_or(false) {
        path.with_extension("json")
    } else {
        PathBuf::from(format!("{}.json", path.display()))
    };
    if direct.exists() {
        return Some(direct);
    }
    let name = direct.file_name()?;
    let from_stacks = path.parent()?.parent()?.join("stacks").join(name);
    from_stacks.exists().then_some(from_stacks)
}

fn cmd_quotient(path: &Path) -> Result<ExitCode> {
    let sidecar = find_sidecar(path)
        .ok_or_else(|| anyhow!("no stack sidecar found for {}", path.display()))?;
    let text = std::fs::read_to_string(path).with_context(|| path.display().to_string())?;
    let entries: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(&sidecar)
            .with_context(|| format!("stack sidecar {}", sidecar.display()))?,
    )?;
    let entries = entries.as_array().ok_or_else(|| anyhow!("sidecar is not a JSON array"))?;
    let classes = classify_all_triples();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let g6 = line.trim();
        let entry = entries
            .iter()
            .find(|e| e.get("g6").and_then(|v| v.as_str()) == Some(g6))
            .ok_or_else(|| anyhow!("{g6}: no sidecar entry"))?;
        let provenance = provenance_from_entry(entry)?;
        let spec = spec_from_provenance(&provenance, &classes);
        let g = stack(&spec)?;
        if canonical_key(&g) != canonical_key(&g6_decode(g6)?) {
            bail!("{g6}: sidecar stack does not match the graph");
        }
        let cells_bits = relation_partition(&spec, 0)?;
        let cells: Vec<Vec<usize>> =
            cells_bits.iter().map(|&mask| bits(mask).collect()).collect();
        let m = quotient_matrix(&g, &cells)?;
        println!("{g6}");
        for row in &m {
            let formatted: Vec<String> = row.iter().map(|x| format!("{x:>2}")).collect();
            println!("  [{}]", formatted.join(" "));
        }
        let eigs = integer_eigenvalues(&m)?;
        let distinct: Vec<i64> = eigs.iter().map(|&(e, _)| e).collect();
        let mults = solve_multiplicities(48, 14, 2, &distinct)?;
        let lifted: Vec<String> = distinct
            .iter()
            .zip(&mults)
            .map(|(e, m)| if *e < 0 { format!("({e})^{m}") } else { format!("{e}^{m}") })
            .collect();
        println!("  spectrum {}", lifted.join(" "));
    }
    Ok(ExitCode::SUCCESS)
}

fn provenance_from_entry(entry: &serde_json::Value) -> Result<StackProvenance> {
    let field = |name: &str| entry.get(name).ok_or_else(|| anyhow!("sidecar entry lacks {name}"));
    let tags: [u8; 3] = serde_json::from_value(field("type")?.clone())?;
    if !tags.iter().all(|t| (1..=12).contains(t)) {
        bail!("sidecar type {tags:?} has tags outside 1..=12");
    }
    let pair_choice: [usize; 3] = serde_json::from_value(field("pairs")?.clone())?;
    let maps: [Vec<usize>; 3] = serde_json::from_value(field("maps")?.clone())?;
    Ok(StackProvenance { t: StackType::free(tags), pair_choice, maps })
}

fn cmd_verify(jobs: Option<usize>) -> Result<ExitCode> {
    let report = with_thread_limit(jobs, || run_full_census(false))?;
    let five: usize = report
        .families
        .iter()
        .filter(|f| f.eigenvalue_count() == 5)
        .map(|f| f.graph_count())
        .sum();
    println!(
        "{} graphs, {} families, {five} with 5 eigenvalues",
        report.total_distinct,
        report.families.len()
    );
    if report.diff.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        for line in &report.diff.lines {
            println!("{line}");
        }
        Ok(ExitCode::FAILURE)
    }
}
