//! Acceptance suite: one PASS/FAIL line per criterion on stdout.

use std::alloc::{GlobalAlloc, Layout, System};
use std::cell::Cell;
use std::io::Write;
use std::time::Instant;

use degencount::catalog::{all_graphs, connected_graphs, connected_graphs_up_to};
use degencount::counting::{count_ind, count_sub};
use degencount::dag::{acyclic_orientations, count_acyclic_orientations_via_chromatic, OrientedDag};
use degencount::decomposition::{
    associated_family, dtw_bruteforce, dtw_graph, treedepth_bruteforce, treewidth_bruteforce,
};
use degencount::elimination::{
    derive_h1_h2, dtd_dag, dtd_graph, dtd_le2_by_obstructions, induced_minor_contains,
};
use degencount::graph::named::*;
use degencount::hom::{count_hom, count_hom_dag_with, orient_host, HomOptions};
use degencount::scaling::bench_pattern;
use degencount::host::gen_degenerate;
use degencount::oracle::{brute_hom, brute_ind, brute_sub};
use degencount::{Error, Graph};

struct Counting;

thread_local! {
    static CURRENT: Cell<isize> = const { Cell::new(0) };
    static PEAK: Cell<isize> = const { Cell::new(0) };
}

fn track(delta: isize) {
    let _ = CURRENT.try_with(|c| {
        let now = c.get() + delta;
        c.set(now);
        let _ = PEAK.try_with(|p| p.set(p.get().max(now)));
    });
}

unsafe impl GlobalAlloc for Counting {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        track(layout.size() as isize);
        System.alloc(layout)
    }
    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        track(-(layout.size() as isize));
        System.dealloc(ptr, layout)
    }
    unsafe fn realloc(&self, ptr: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
        track(new_size as isize - layout.size() as isize);
        System.realloc(ptr, layout, new_size)
    }
}

#[global_allocator]
static ALLOC: Counting = Counting;

/// Peak bytes allocated on this thread by `f` above what was live when it started.
fn peak_during<T>(f: impl FnOnce() -> T) -> (T, usize) {
    let base = CURRENT.with(Cell::get);
    PEAK.with(|p| p.set(base));
    let out = f();
    let peak = PEAK.with(Cell::get);
    (out, (peak - base) as usize)
}

fn report(criterion: u32, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "[acceptance] criterion {criterion} ({name}): {verdict} - {detail}").unwrap();
}

fn alternating_c6() -> OrientedDag {
    OrientedDag::from_arcs(cycle(6), &[(0, 1), (2, 1), (2, 3), (4, 3), (4, 5), (0, 5)]).unwrap()
}

#[test]
fn criterion_1_oracle_equivalence() {
    let start = Instant::now();
    let patterns = connected_graphs_up_to(5);
    assert_eq!(patterns.len(), 31);
    let hosts: Vec<Graph> = (0..50u64)
        .map(|seed| gen_degenerate(8 + (seed as usize % 18), 1 + seed as usize % 3, seed))
        .collect();
    let mut mismatches = Vec::new();
    let mut checks = 0;
    for (pi, h) in patterns.iter().enumerate() {
        for (seed, g) in hosts.iter().enumerate() {
            let pairs = [
                ("hom", count_hom(h, g).unwrap(), brute_hom(h, g).unwrap()),
                ("sub", count_sub(h, g).unwrap(), brute_sub(h, g).unwrap()),
                ("ind", count_ind(h, g).unwrap(), brute_ind(h, g).unwrap()),
            ];
            for (mode, fast, slow) in pairs {
                checks += 1;
                if fast != slow {
                    mismatches.push(format!("{mode} pattern #{pi} host seed {seed}: {fast} vs {slow}"));
                }
            }
        }
    }
    report(
        1,
        "oracle equivalence",
        mismatches.is_empty(),
        &format!("{checks} checks, {} mismatches, {:.1?}", mismatches.len(), start.elapsed()),
    );
    assert!(mismatches.is_empty(), "{mismatches:?}");
}

#[test]
fn criterion_2_reference_values() {
    let mut failures = Vec::new();
    let mut expect = |name: &str, got: usize, want: usize| {
        if got != want {
            failures.push(format!("{name}: {got} != {want}"));
        }
    };
    let k5 = OrientedDag::from_order(complete(5), &[0, 1, 2, 3, 4]).unwrap();
    expect("dtd single-source K5", dtd_dag(&k5).0, 1);
    expect("td K5", treedepth_bruteforce(&complete(5)).unwrap(), 5);
    let k34 = OrientedDag::from_order(complete_bipartite(3, 4), &[0, 1, 2, 3, 4, 5, 6]).unwrap();
    assert_eq!(k34.sources(), vec![0, 1, 2]);
    expect("dtd three-source K3,4", dtd_dag(&k34).0, 2);
    expect("td K3,4", treedepth_bruteforce(&complete_bipartite(3, 4)).unwrap(), 4);
    expect("dtd_graph C6", dtd_graph(&cycle(6)).unwrap(), 3);
    expect("dtw_graph C5", dtw_graph(&cycle(5)).unwrap(), 1);
    expect("tw C5", treewidth_bruteforce(&cycle(5)).unwrap(), 2);
    expect("dtw_graph C6", dtw_graph(&cycle(6)).unwrap(), 2);
    let k6_max = acyclic_orientations(&complete(6))
        .unwrap()
        .iter()
        .map(|d| dtw_bruteforce(d).unwrap().0)
        .max()
        .unwrap();
    expect("dtw every orientation of K6", k6_max, 1);
    expect("dtw_graph subdivided K4", dtw_graph(&complete(4).subdivided()).unwrap(), 2);
    report(2, "exact values", failures.is_empty(), &format!("10 values, {} wrong {failures:?}", failures.len()));
    assert!(failures.is_empty());
}

#[test]
fn criterion_3_bound_suite() {
    let start = Instant::now();
    let mut violations = Vec::new();
    let mut orientations = 0usize;
    let mut dtw_hist = [0usize; 4];
    let mut dtd_hist = [0usize; 5];
    for g in connected_graphs_up_to(7) {
        let (k, l) = (g.n(), g.m());
        let mut worst = 0;
        for d in acyclic_orientations(&g).unwrap() {
            orientations += 1;
            let dtd = dtd_dag(&d).0;
            let dtw = dtw_bruteforce(&d).unwrap().0;
            worst = worst.max(dtd);
            dtd_hist[dtd.min(4)] += 1;
            dtw_hist[dtw.min(3)] += 1;
            if dtd > k / 4 + 2 {
                violations.push(format!("dtd {dtd} > k/4+2 on {:?}", d.arcs().collect::<Vec<_>>()));
            }
            if dtd > l / 5 + 3 {
                violations.push(format!("dtd {dtd} > l/5+3 on {:?}", d.arcs().collect::<Vec<_>>()));
            }
            if dtw > k / 5 + 3 || dtw > 2 {
                violations.push(format!("dtw {dtw} on {:?}", d.arcs().collect::<Vec<_>>()));
            }
        }
        if worst > 3 {
            violations.push(format!("dtd_graph {worst} on {g:?}"));
        }
    }
    report(
        3,
        "bound suite",
        violations.is_empty(),
        &format!(
            "{orientations} orientations, dtd histogram {dtd_hist:?}, dtw histogram {dtw_hist:?}, {} violations, {:.1?}",
            violations.len(),
            start.elapsed()
        ),
    );
    assert!(violations.is_empty(), "{violations:?}");
}

/// Extended check: dtd bounds and dtd_graph <= 3 on every connected graph with 8 vertices.
#[test]
#[ignore]
fn criterion_3_extended_eight_vertices() {
    let mut violations = 0;
    for g in connected_graphs(8) {
        let dtd = dtd_graph(&g).unwrap();
        if dtd > 3 || dtd > g.m() / 5 + 3 {
            violations += 1;
        }
    }
    report(3, "bound suite, 8 vertices", violations == 0, &format!("{violations} violations"));
    assert_eq!(violations, 0);
}

#[test]
fn criterion_4_characterization() {
    let start = Instant::now();
    let derivation = derive_h1_h2();
    let derived_two = derivation.is_ok();
    let derivation_note = match &derivation {
        Ok(_) => "derivation yields two graphs".to_string(),
        Err(Error::ObstructionCount(n)) => format!("derivation yields {n} minimal candidates, not 2"),
        Err(e) => format!("derivation failed: {e}"),
    };

    // with two derived graphs, test the four-graph statement itself
    let four = match &derivation {
        Ok((h1, h2)) => Some(vec![cycle(6), path(7), h1.clone(), h2.clone()]),
        Err(_) => None,
    };
    let mut four_mismatches = 0;
    let mut catalog_mismatches = 0;
    let mut graphs = 0;
    for g in connected_graphs_up_to(8) {
        graphs += 1;
        let le2 = dtd_graph(&g).unwrap() <= 2;
        if let Some(obs) = &four {
            let free = obs.iter().all(|o| !induced_minor_contains(&g, o).unwrap());
            if le2 != free {
                four_mismatches += 1;
            }
        }
        if le2 != dtd_le2_by_obstructions(&g).unwrap() {
            catalog_mismatches += 1;
        }
    }
    let pass = derived_two && four_mismatches == 0;
    report(
        4,
        "characterization",
        pass,
        &format!(
            "{derivation_note}; {graphs} graphs; four-graph mismatches {}; full derived catalog ({} graphs) mismatches {catalog_mismatches}; {:.1?}",
            if derived_two { four_mismatches.to_string() } else { "not evaluable".into() },
            degencount::elimination::dtd2_obstructions().len(),
            start.elapsed()
        ),
    );
    assert!(pass, "{derivation_note}");
}

#[test]
fn criterion_5_sandwich() {
    let mut violations = Vec::new();
    let mut dags = 0;
    for g in connected_graphs_up_to(6) {
        for d in acyclic_orientations(&g).unwrap() {
            if d.non_source_mask().count_ones() > 6 {
                continue;
            }
            dags += 1;
            let dtd = dtd_dag(&d).0;
            let dtw = dtw_bruteforce(&d).unwrap().0;
            let (mut td_lo, mut td_hi, mut tw_lo, mut tw_hi) = (false, false, false, false);
            for member in associated_family(&d).unwrap() {
                let td = treedepth_bruteforce(&member).unwrap();
                let tw = treewidth_bruteforce(&member).unwrap();
                td_lo |= td <= dtd;
                td_hi |= dtd <= td;
                // (tw + 1) / 2 <= dtw, kept in integers
                tw_lo |= tw + 1 <= 2 * dtw;
                tw_hi |= dtw <= tw + 1;
            }
            if !(td_lo && td_hi && tw_lo && tw_hi) {
                violations.push(format!("{:?}", d.arcs().collect::<Vec<_>>()));
            }
        }
    }
    report(5, "sandwich", violations.is_empty(), &format!("{dags} DAGs, {} violations", violations.len()));
    assert!(violations.is_empty(), "{violations:?}");
}

#[test]
fn criterion_6_constant_space() {
    let pattern = alternating_c6();
    let (depth, forest) = dtd_dag(&pattern);
    let opts = HomOptions::default();
    let mut rows = Vec::new();
    for n in [1_000, 10_000, 100_000] {
        let host = orient_host(&gen_degenerate(n, 2, 42)).unwrap();
        // warm-up so one-time initialisation is not attributed to the count
        count_hom_dag_with(&host, &pattern, &forest, &opts).unwrap();
        let (result, peak) = peak_during(|| count_hom_dag_with(&host, &pattern, &forest, &opts).unwrap());
        let (count, stats) = result;
        rows.push((n, peak, stats.max_depth, stats.aux_bytes, count));
    }
    let same_peak = rows.iter().all(|r| r.1 == rows[0].1);
    let same_aux = rows.iter().all(|r| r.3 == rows[0].3);
    let depth_ok = depth == 3 && rows.iter().all(|r| r.2 == 3);
    let detail = rows
        .iter()
        .map(|(n, peak, d, aux, c)| format!("n={n}: peak {peak} B, aux {aux} B, depth {d}, count {c}"))
        .collect::<Vec<_>>()
        .join("; ");
    let pass = same_peak && same_aux && depth_ok;
    report(6, "constant space", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_7_scaling() {
    let opts = HomOptions::default();
    let star_slope = bench_pattern(&star(3), &[1_000, 10_000, 100_000], 2, 7, &opts).unwrap().slope;
    let c6_slope = bench_pattern(&cycle(6), &[200, 400, 800], 2, 7, &opts).unwrap().slope;
    let pass = (0.8..=1.3).contains(&star_slope) && c6_slope <= 3.3;
    report(7, "scaling", pass, &format!("star slope {star_slope:.3}, C6 slope {c6_slope:.3}"));
    assert!(pass);
}

#[test]
fn criterion_8_orientation_count() {
    let mut mismatches = 0;
    let mut graphs = 0;
    for n in 0..=7 {
        for g in all_graphs(n) {
            graphs += 1;
            let listed = acyclic_orientations(&g).unwrap().len() as u128;
            if listed != count_acyclic_orientations_via_chromatic(&g).unwrap() {
                mismatches += 1;
            }
        }
    }
    report(8, "orientation count", mismatches == 0, &format!("{graphs} graphs, {mismatches} mismatches"));
    assert_eq!(mismatches, 0);
}
