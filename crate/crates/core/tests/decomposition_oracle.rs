use degencount::catalog::connected_graphs_up_to;
use degencount::dag::{acyclic_orientations, OrientedDag};
use degencount::elimination::{dtd_dag, validate_forest};
use degencount::decomposition::{
    decomposition_of_width, dtw_bruteforce, validate_dtd_decomposition, DagTreeDecomposition,
};
use degencount::graph::bits;

fn prufer_trees(k: usize) -> Vec<Vec<(usize, usize)>> {
    if k <= 1 {
        return vec![Vec::new()];
    }
    if k == 2 {
        return vec![vec![(0, 1)]];
    }
    let len = k - 2;
    let total = k.pow(len as u32);
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        let mut seq = Vec::with_capacity(len);
        let mut c = code;
        for _ in 0..len {
            seq.push(c % k);
            c /= k;
        }
        let mut degree = vec![1; k];
        for &x in &seq {
            degree[x] += 1;
        }
        let mut edges = Vec::with_capacity(k - 1);
        for &x in &seq {
            let leaf = (0..k).find(|&i| degree[i] == 1).unwrap();
            edges.push((leaf, x));
            degree[leaf] -= 1;
            degree[x] -= 1;
        }
        let rest: Vec<usize> = (0..k).filter(|&i| degree[i] == 1).collect();
        edges.push((rest[0], rest[1]));
        out.push(edges);
    }
    out
}

/// Any family of distinct bags of size at most `w`, up to `max_bags` of them, on any tree.
fn exists_unrestricted(d: &OrientedDag, w: usize, max_bags: usize) -> bool {
    let sources = d.source_mask();
    let items: Vec<usize> = bits(sources).collect();
    let candidates: Vec<u64> = (1u64..1 << items.len())
        .filter(|m| m.count_ones() as usize <= w)
        .map(|m| bits(m).fold(0, |acc, i| acc | 1 << items[i]))
        .collect();
    let mut found = false;
    let mut chosen = Vec::new();
    fn rec(
        d: &OrientedDag,
        cands: &[u64],
        from: usize,
        max_bags: usize,
        sources: u64,
        chosen: &mut Vec<u64>,
        found: &mut bool,
    ) {
        if *found {
            return;
        }
        let covered = chosen.iter().fold(0, |m, b| m | b);
        if !chosen.is_empty() && covered == sources {
            for edges in prufer_trees(chosen.len()) {
                let t = DagTreeDecomposition {
                    bags: chosen.clone(),
                    edges,
                };
                if validate_dtd_decomposition(d, &t) {
                    *found = true;
                    return;
                }
            }
        }
        if chosen.len() == max_bags {
            return;
        }
        for i in from..cands.len() {
            chosen.push(cands[i]);
            rec(d, cands, i + 1, max_bags, sources, chosen, found);
            chosen.pop();
        }
    }
    rec(d, &candidates, 0, max_bags, sources, &mut chosen, &mut found);
    found
}

fn for_small_dags(max_n: usize, max_sources: usize, mut f: impl FnMut(&OrientedDag)) {
    for g in connected_graphs_up_to(max_n) {
        for d in acyclic_orientations(&g).unwrap() {
            if d.source_mask().count_ones() as usize <= max_sources {
                f(&d);
            }
        }
    }
}

#[test]
fn prufer_counts() {
    for k in 1usize..=6 {
        let expect = if k == 1 { 1 } else { k.pow(k as u32 - 2) };
        assert_eq!(prufer_trees(k).len(), expect);
    }
}

#[test]
fn bruteforce_matches_unrestricted_tree_search() {
    let mut checked = 0;
    for_small_dags(6, 5, |d| {
        let (w, t) = dtw_bruteforce(d).unwrap();
        assert!(validate_dtd_decomposition(d, &t));
        assert_eq!(t.width(), w);
        let s = d.source_mask().count_ones() as usize;
        assert!(exists_unrestricted(d, w, s + 1));
        if w > 1 {
            assert!(!exists_unrestricted(d, w - 1, s + 1), "{d:?}");
        }
        checked += 1;
    });
    assert!(checked > 500);
}

#[test]
fn restricted_bag_families_lose_nothing() {
    // at most one bag per source and no nested bags reach the same widths as the
    // unrestricted search with one extra bag and nesting allowed
    for_small_dags(5, 4, |d| {
        let s = d.source_mask().count_ones() as usize;
        for w in 1..=s {
            assert_eq!(
                decomposition_of_width(d, w).is_some(),
                exists_unrestricted(d, w, s + 1),
                "width {w} for {d:?}"
            );
        }
    });
}

/// Pairs of sources that are the only two reaching some non-source.
fn private_pairs(d: &OrientedDag) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for v in bits(d.non_source_mask()) {
        if let [a, b] = d.reachers(v)[..] {
            pairs.push((a, b));
        }
    }
    pairs
}

#[test]
fn private_pairs_share_or_neighbour_bags() {
    for_small_dags(6, 5, |d| {
        let (_, t) = dtw_bruteforce(d).unwrap();
        for (a, b) in private_pairs(d) {
            let holding = |x: usize| -> Vec<usize> {
                (0..t.bags.len()).filter(|&i| t.bags[i] >> x & 1 == 1).collect()
            };
            let (ha, hb) = (holding(a), holding(b));
            let ok = ha.iter().any(|&i| {
                hb.iter()
                    .any(|&j| i == j || t.edges.contains(&(i, j)) || t.edges.contains(&(j, i)))
            });
            assert!(ok, "{a} and {b} apart in {t:?}");
        }
    });
}

#[test]
fn private_pairs_share_a_forest_path() {
    for_small_dags(6, 6, |d| {
        let (_, f) = dtd_dag(d);
        assert!(validate_forest(d, &f));
        for (a, b) in private_pairs(d) {
            assert!(f.on_common_path(a, b), "{a} and {b} split in {f}");
        }
    });
}
