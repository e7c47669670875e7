use degencount::catalog::connected_graphs_up_to;
use degencount::counting::{count_ind, count_sub};
use degencount::dag::{acyclic_orientations, count_acyclic_orientations_via_chromatic};
use degencount::elimination::dtd_dag;
use degencount::hom::count_hom;
use degencount::host::gen_degenerate;
use degencount::oracle::{brute_hom, brute_ind, brute_sub};
use degencount::Graph;

use crate::Failure;

pub struct VerifyArgs {
    pub max_pattern: usize,
    pub seeds: u64,
    pub seed: u64,
    pub max_host: usize,
    /// Test hook: perturbs the first fast count so the harness must report it.
    pub inject_mutation: bool,
}

/// Tally of checks with the failures that were seen.
#[derive(Default)]
struct Checks {
    run: usize,
    failures: Vec<String>,
}

impl Checks {
    fn expect(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.run += 1;
        if !ok {
            self.failures.push(describe());
        }
    }
}

fn edges(g: &Graph) -> String {
    let mut out = format!("[n={}", g.n());
    for (u, v) in g.edges() {
        out.push_str(&format!(" {u}-{v}"));
    }
    out.push(']');
    out
}

pub fn run(args: &VerifyArgs) -> Result<(), Failure> {
    let mut checks = Checks::default();
    let patterns = if args.max_pattern == 0 {
        Vec::new()
    } else {
        connected_graphs_up_to(args.max_pattern)
    };
    let host_sizes = args.max_host.max(2);
    let hosts: Vec<(u64, Graph)> = (0..args.seeds)
        .map(|i| {
            let seed = args.seed.wrapping_add(i);
            let n = 2 + (seed as usize % (host_sizes - 1));
            (seed, gen_degenerate(n, 1 + (seed as usize % 3), seed))
        })
        .collect();
    let mut mutate = args.inject_mutation;

    for h in &patterns {
        let mut dtd_graph = 0;
        let orientations = acyclic_orientations(h)?;
        for d in &orientations {
            dtd_graph = dtd_graph.max(dtd_dag(d).0);
        }
        if !hosts.is_empty() {
            checks.expect(dtd_graph <= h.n() / 4 + 2, || {
                format!("pattern {}: dtd {dtd_graph} above floor(k/4)+2", edges(h))
            });
            let chromatic = count_acyclic_orientations_via_chromatic(h)?;
            checks.expect(orientations.len() as u128 == chromatic, || {
                format!("pattern {}: {} orientations vs chromatic {chromatic}", edges(h), orientations.len())
            });
        }
        for (seed, g) in &hosts {
            let mut fast = [count_hom(h, g)?, count_sub(h, g)?, count_ind(h, g)?];
            if mutate {
                fast[0] += 1u32;
                mutate = false;
            }
            let slow = [brute_hom(h, g)?, brute_sub(h, g)?, brute_ind(h, g)?];
            for (i, mode) in ["hom", "sub", "ind"].iter().enumerate() {
                checks.expect(fast[i] == slow[i], || {
                    format!(
                        "{mode}: pattern {} host seed {seed} (n={}, m={}): counted {} oracle {}",
                        edges(h),
                        g.n(),
                        g.m(),
                        fast[i],
                        slow[i]
                    )
                });
            }
        }
    }

    if checks.run == 0 {
        eprintln!("warning: 0 checks (empty corpus)");
    }
    for f in &checks.failures {
        println!("FAIL {f}");
    }
    println!(
        "{} checks, {} failures ({} patterns, {} hosts)",
        checks.run,
        checks.failures.len(),
        patterns.len(),
        hosts.len()
    );
    if let Some(first) = checks.failures.first() {
        return Err(Failure::verification(format!("{} failed checks; first: {first}", checks.failures.len())));
    }
    Ok(())
}
