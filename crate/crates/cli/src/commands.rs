use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_rational::BigRational;
use serde_json::{json, Value};

use degencount::counting::{ind_expansion, sub_expansion, Expansion};
use degencount::dag::acyclic_orientations;
use degencount::decomposition::dtw_graph;
use degencount::elimination::{
    catalog_text, derive_dtd2_obstructions, derive_h1_h2, dtd_dag, induced_minor_contains,
    obstruction_catalog, INDUCED_MINOR_HOST_LIMIT,
};
use degencount::graph::{parse_edge_list, to_edge_list, ParsedGraph};
use degencount::hom::{count_hom_oriented, CandidatePolicy, HomOptions, HomReport};
use degencount::host::gen_degenerate;
use degencount::iso::canonical_label;
use degencount::oracle::{brute_hom, brute_ind, brute_sub};
use degencount::scaling::bench_pattern;
use degencount::{degeneracy_order, Error, Graph};

use crate::{Failure, Mode};

pub struct CountArgs {
    pub mode: Mode,
    pub pattern: PathBuf,
    pub host: PathBuf,
    pub json: bool,
    pub oracle: bool,
    pub threads: usize,
    pub emit_expansion: bool,
    pub literal: bool,
}

fn read_graph(path: &Path) -> Result<ParsedGraph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    parse_edge_list(&text).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Hom => "hom",
        Mode::Sub => "sub",
        Mode::Ind => "ind",
    }
}

/// The pattern itself with coefficient one, so `hom` prints in the same format.
fn identity_expansion(pattern: &Graph) -> Result<Expansion, Error> {
    let canon = degencount::iso::graph_from_label(&canonical_label(pattern)?);
    Ok(Expansion {
        terms: vec![(canon, BigRational::from_integer(1.into()))],
    })
}

fn orientation_json(term: usize, r: &HomReport) -> Vec<Value> {
    r.orientations
        .iter()
        .map(|o| {
            json!({
                "term": term,
                "arcs": o.arcs,
                "dtd": o.dtd,
                "forest": o.forest,
                "count": o.count.to_string(),
            })
        })
        .collect()
}

pub fn count(args: CountArgs) -> Result<(), Failure> {
    if args.threads == 0 {
        return Err(Failure::usage("--threads must be at least 1"));
    }
    let pattern = read_graph(&args.pattern)?.graph;
    let host = read_graph(&args.host)?.graph;
    let start = Instant::now();
    let ord = degeneracy_order(&host);
    let host_dag = degencount::host::orient_by_order(&host, &ord)?;
    let opts = HomOptions {
        policy: if args.literal {
            CandidatePolicy::AllHostVertices
        } else {
            CandidatePolicy::MappedNeighbors
        },
        threads: args.threads,
    };
    let expansion = match args.mode {
        Mode::Hom => None,
        Mode::Sub => Some(sub_expansion(&pattern)?),
        Mode::Ind => Some(ind_expansion(&pattern)?),
    };
    let (count, reports) = match &expansion {
        None => {
            let r = count_hom_oriented(&pattern, &host_dag, &opts)?;
            (r.count.clone(), vec![r])
        }
        Some(e) => e.evaluate_detailed(&host_dag, &opts)?,
    };
    let elapsed = start.elapsed().as_secs_f64();

    let oracle = if args.oracle {
        let value = match args.mode {
            Mode::Hom => brute_hom(&pattern, &host),
            Mode::Sub => brute_sub(&pattern, &host),
            Mode::Ind => brute_ind(&pattern, &host),
        };
        match value {
            Ok(v) => Some(Ok(v)),
            Err(Error::Guard(why)) => Some(Err(why)),
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };

    let emitted = if args.emit_expansion {
        let e = match &expansion {
            Some(e) => e.clone(),
            None => identity_expansion(&pattern)?,
        };
        Some(e.to_string())
    } else {
        None
    };

    if args.json {
        let orientations: Vec<Value> = reports
            .iter()
            .enumerate()
            .flat_map(|(i, r)| orientation_json(i, r))
            .collect();
        let oracle_json = match &oracle {
            None => Value::Null,
            Some(Ok(v)) => json!({"count": v.to_string(), "agrees": *v == count}),
            Some(Err(why)) => json!({"skipped": why}),
        };
        let report = json!({
            "mode": mode_name(args.mode),
            "count": count.to_string(),
            "degeneracy": ord.d,
            "host_vertices": host.n(),
            "host_edges": host.m(),
            "orientations_used": orientations.len(),
            "orientations": orientations,
            "max_recursion_depth": reports.iter().map(|r| r.max_depth).max().unwrap_or(0),
            "elapsed_seconds": elapsed,
            "peak_aux_bytes": reports.iter().map(|r| r.aux_bytes).max().unwrap_or(0),
            "threads": args.threads,
            "oracle": oracle_json,
            "expansion": emitted.as_ref().map(|t| t.lines().collect::<Vec<_>>()),
        });
        println!("{}", serde_json::to_string_pretty(&report).expect("serialisable"));
    } else {
        if let Some(text) = &emitted {
            print!("{text}");
        }
        println!("{count}");
        match &oracle {
            Some(Ok(v)) => eprintln!("oracle: {v}"),
            Some(Err(why)) => eprintln!("oracle skipped: guard exceeded ({why})"),
            None => {}
        }
    }
    if let Some(Ok(v)) = &oracle {
        if *v != count {
            return Err(Failure::verification(format!("oracle mismatch: counted {count}, oracle {v}")));
        }
    }
    Ok(())
}

const ORIENTATION_LISTING_LIMIT: usize = 64;

pub fn analyze(path: &Path, json_out: bool) -> Result<(), Failure> {
    let pattern = read_graph(path)?.graph;
    let (k, l) = (pattern.n(), pattern.m());
    let orientations = acyclic_orientations(&pattern)?;
    let mut histogram = vec![0usize; k + 1];
    let mut listed = Vec::new();
    let mut dtd_graph = 0;
    for d in &orientations {
        let (depth, forest) = dtd_dag(d);
        histogram[depth] += 1;
        dtd_graph = dtd_graph.max(depth);
        if listed.len() < ORIENTATION_LISTING_LIMIT {
            listed.push((d.arcs().collect::<Vec<_>>(), depth, forest.to_string()));
        }
    }
    let dtw = match dtw_graph(&pattern) {
        Ok(w) => Ok(w),
        Err(Error::TooLarge { what, limit, actual }) => Err(format!("{what} {actual} exceeds {limit}")),
        Err(e) => return Err(e.into()),
    };
    let obstructions: Result<Vec<String>, String> = if k <= INDUCED_MINOR_HOST_LIMIT {
        let mut found = Vec::new();
        for (name, g) in obstruction_catalog() {
            if induced_minor_contains(&pattern, &g)? {
                found.push(name);
            }
        }
        Ok(found)
    } else {
        Err(format!("pattern has more than {INDUCED_MINOR_HOST_LIMIT} vertices"))
    };
    let vertex_bound = k / 4 + 2;
    let edge_bound = l / 5 + 3;
    let dtw_bound = k / 5 + 3;

    if json_out {
        let report = json!({
            "vertices": k,
            "edges": l,
            "orientation_count": orientations.len(),
            "dtd_histogram": histogram,
            "orientations": listed
                .iter()
                .map(|(arcs, depth, forest)| json!({"arcs": arcs, "dtd": depth, "forest": forest}))
                .collect::<Vec<_>>(),
            "orientations_truncated": orientations.len() > listed.len(),
            "dtd_graph": dtd_graph,
            "dtw_graph": dtw.as_ref().ok(),
            "dtw_skipped": dtw.as_ref().err(),
            "bounds": {
                "dtd_vertex_bound": vertex_bound,
                "dtd_vertex_slack": vertex_bound as i64 - dtd_graph as i64,
                "dtd_edge_bound": edge_bound,
                "dtd_edge_slack": edge_bound as i64 - dtd_graph as i64,
                "dtw_vertex_bound": dtw_bound,
                "dtw_vertex_slack": dtw.as_ref().ok().map(|&w| dtw_bound as i64 - w as i64),
            },
            "dtd_at_most_2_by_obstructions": obstructions.as_ref().ok().map(|o| o.is_empty()),
            "obstructions_contained": obstructions.as_ref().ok(),
            "obstructions_skipped": obstructions.as_ref().err(),
        });
        println!("{}", serde_json::to_string_pretty(&report).expect("serialisable"));
        return Ok(());
    }

    println!("pattern: {k} vertices, {l} edges, {} acyclic orientations", orientations.len());
    for (arcs, depth, forest) in &listed {
        let arcs: Vec<String> = arcs.iter().map(|(a, b)| format!("{a}>{b}")).collect();
        println!("  dtd {depth}  forest {forest}  arcs {}", arcs.join(" "));
    }
    if orientations.len() > listed.len() {
        println!("  ({} more orientations not listed)", orientations.len() - listed.len());
    }
    let hist: Vec<String> = histogram
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(d, c)| format!("{d}:{c}"))
        .collect();
    println!("dtd histogram: {}", hist.join(" "));
    println!("dtd_graph: {dtd_graph}");
    match &dtw {
        Ok(w) => println!("dtw_graph: {w}"),
        Err(why) => println!("dtw_graph: skipped ({why})"),
    }
    println!("bound floor(k/4)+2 = {vertex_bound}, slack {}", vertex_bound as i64 - dtd_graph as i64);
    println!("bound floor(l/5)+3 = {edge_bound}, slack {}", edge_bound as i64 - dtd_graph as i64);
    if let Ok(w) = &dtw {
        println!("bound floor(k/5)+3 = {dtw_bound}, slack {}", dtw_bound as i64 - *w as i64);
    }
    match &obstructions {
        Ok(found) if found.is_empty() => println!("dtd <= 2 obstruction verdict: obstruction-free"),
        Ok(found) => println!("dtd <= 2 obstruction verdict: contains {}", found.join(", ")),
        Err(why) => println!("dtd <= 2 obstruction verdict: skipped ({why})"),
    }
    Ok(())
}

pub fn gen(n: usize, d: usize, seed: u64) -> Result<(), Failure> {
    if n == 0 {
        return Err(Failure::usage("--n must be at least 1"));
    }
    let g = gen_degenerate(n, d, seed);
    print!("# degencount gen n={n} d={d} seed={seed}\n{}", to_edge_list(&g));
    Ok(())
}

pub fn bench(path: &Path, sizes: &[usize], d: usize, seed: u64, threads: usize, json_out: bool) -> Result<(), Failure> {
    if threads == 0 {
        return Err(Failure::usage("--threads must be at least 1"));
    }
    let pattern = read_graph(path)?.graph;
    let opts = HomOptions {
        threads,
        ..HomOptions::default()
    };
    let report = bench_pattern(&pattern, sizes, d, seed, &opts)?;
    if json_out {
        let rows: Vec<Value> = report
            .rows
            .iter()
            .map(|r| {
                json!({
                    "n": r.n,
                    "seconds": r.seconds,
                    "runs": r.runs,
                    "count": r.count.to_string(),
                    "peak_aux_bytes": r.aux_bytes,
                })
            })
            .collect();
        let out = json!({
            "d": d,
            "seed": seed,
            "rows": rows,
            "slope": if report.slope.is_finite() { json!(report.slope) } else { Value::Null },
            "aux_constant": report.aux_constant,
        });
        println!("{}", serde_json::to_string_pretty(&out).expect("serialisable"));
        return Ok(());
    }
    println!("# d={d} seed={seed}");
    println!("{:>10} {:>14} {:>5} {:>10} {}", "n", "seconds", "runs", "aux_bytes", "count");
    for r in &report.rows {
        println!("{:>10} {:>14.6} {:>5} {:>10} {}", r.n, r.seconds, r.runs, r.aux_bytes, r.count);
    }
    if report.slope.is_finite() {
        println!("log-log slope: {:.3}", report.slope);
    } else {
        println!("log-log slope: n/a (need two distinct sizes)");
    }
    println!("peak auxiliary bytes constant: {}", report.aux_constant);
    Ok(())
}

pub fn obstructions(out: Option<&Path>, derive: bool) -> Result<(), Failure> {
    match derive_h1_h2() {
        Ok(_) => println!("# two-graph derivation: succeeded"),
        Err(Error::ObstructionCount(n)) => {
            eprintln!("warning: the filter for the two extra obstructions yields {n} minimal graphs, not 2");
            println!("# two-graph derivation: {n} candidates");
        }
        Err(e) => return Err(e.into()),
    }
    let catalog = if derive {
        derive_dtd2_obstructions(8)?
    } else {
        obstruction_catalog()
    };
    println!("# {} minimal obstructions for dtd <= 2", catalog.len());
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| Failure::usage(format!("{}: {e}", dir.display())))?;
    }
    for (name, g) in &catalog {
        let text = catalog_text(name, g);
        match out {
            Some(dir) => {
                let file = dir.join(format!("{name}.edges"));
                fs::write(&file, &text).map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
                println!("{name}: {} vertices, {} edges -> {}", g.n(), g.m(), file.display());
            }
            None => print!("{text}"),
        }
    }
    Ok(())
}
