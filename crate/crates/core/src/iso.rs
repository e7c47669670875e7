//! Isomorphism, automorphism counting and canonical labels for pattern-sized graphs.
//!
//! All three share a colour-refinement routine: cells are split by the number of
//! neighbours each vertex has in every cell, and the resulting ordered partition is
//! an isomorphism invariant. Isomorphisms must map cell `i` to cell `i`.

use crate::error::Result;
use crate::graph::Graph;
use crate::limits::check_pattern_size;

type Cells = Vec<Vec<usize>>;

fn refine(masks: &[u64], mut cells: Cells) -> Cells {
    let n = masks.len();
    let mut cell_of = vec![0usize; n];
    loop {
        for (i, c) in cells.iter().enumerate() {
            for &v in c {
                cell_of[v] = i;
            }
        }
        let k = cells.len();
        let mut next: Cells = Vec::with_capacity(k);
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut sig: Vec<(Vec<u8>, usize)> = cell
                .iter()
                .map(|&v| {
                    let mut counts = vec![0u8; k];
                    let mut m = masks[v];
                    while m != 0 {
                        let w = m.trailing_zeros() as usize;
                        m &= m - 1;
                        counts[cell_of[w]] += 1;
                    }
                    (counts, v)
                })
                .collect();
            sig.sort();
            let mut start = 0;
            for i in 1..=sig.len() {
                if i == sig.len() || sig[i].0 != sig[start].0 {
                    next.push(sig[start..i].iter().map(|p| p.1).collect());
                    start = i;
                }
            }
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

fn cells_from_colors(colors: &[u32]) -> Cells {
    let mut order: Vec<usize> = (0..colors.len()).collect();
    order.sort_by_key(|&v| (colors[v], v));
    let mut cells: Cells = Vec::new();
    for v in order {
        match cells.last_mut() {
            Some(c) if colors[c[0]] == colors[v] => c.push(v),
            _ => cells.push(vec![v]),
        }
    }
    cells
}

fn individualize(cells: &Cells, cell: usize, v: usize) -> Cells {
    let mut out = Vec::with_capacity(cells.len() + 1);
    for (i, c) in cells.iter().enumerate() {
        if i == cell {
            out.push(vec![v]);
            out.push(c.iter().copied().filter(|&w| w != v).collect());
        } else {
            out.push(c.clone());
        }
    }
    out
}

fn is_twin(masks: &[u64], u: usize, v: usize) -> bool {
    masks[u] & !(1 << v) == masks[v] & !(1 << u)
}

fn matrix_key(masks: &[u64], perm: &[usize]) -> Vec<u8> {
    let n = perm.len();
    let mut key = vec![0u8; (n * (n - 1) / 2).div_ceil(8)];
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if masks[perm[i]] >> perm[j] & 1 == 1 {
                key[bit / 8] |= 1 << (7 - bit % 8);
            }
            bit += 1;
        }
    }
    key
}

fn canon_search(masks: &[u64], cells: Cells, best: &mut Option<Vec<u8>>) {
    let cells = refine(masks, cells);
    let Some(target) = cells.iter().position(|c| c.len() > 1) else {
        let perm: Vec<usize> = cells.iter().map(|c| c[0]).collect();
        let key = matrix_key(masks, &perm);
        if best.as_ref().is_none_or(|b| key < *b) {
            *best = Some(key);
        }
        return;
    };
    let cell = &cells[target];
    for (i, &v) in cell.iter().enumerate() {
        // swapping two twins is an automorphism fixing the current partition
        if cell[..i].iter().any(|&u| is_twin(masks, u, v)) {
            continue;
        }
        canon_search(masks, individualize(&cells, target, v), best);
    }
}

/// Canonical byte string: equal for two graphs exactly when they are isomorphic.
///
/// The label is the vertex count followed by the lexicographically smallest
/// upper-triangle adjacency matrix over the leaves of the refinement search tree.
/// The graph on zero vertices gets the empty label.
pub fn canonical_label(g: &Graph) -> Result<Vec<u8>> {
    check_pattern_size(g.n())?;
    Ok(canonical_label_unchecked(g))
}

pub(crate) fn canonical_label_unchecked(g: &Graph) -> Vec<u8> {
    let n = g.n();
    if n == 0 {
        return Vec::new();
    }
    let masks = g.masks();
    let mut best = None;
    canon_search(masks, vec![(0..n).collect()], &mut best);
    let mut label = vec![n as u8];
    label.extend(best.expect("search reaches at least one leaf"));
    label
}

/// Rebuilds a graph from a label produced by [`canonical_label`].
pub fn graph_from_label(label: &[u8]) -> Graph {
    if label.is_empty() {
        return Graph::empty(0);
    }
    let n = label[0] as usize;
    let mut edges = Vec::new();
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if label[1 + bit / 8] >> (7 - bit % 8) & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, &edges).expect("label encodes a simple graph")
}

/// Backtracking search for a colour-preserving isomorphism `g1 -> g2`.
fn find_colored_iso(g1: &Graph, c1: &[u32], g2: &Graph, c2: &[u32]) -> Option<Vec<usize>> {
    let n = g1.n();
    if n != g2.n() || g1.m() != g2.m() {
        return None;
    }
    let (m1, m2) = (g1.masks(), g2.masks());
    let r1 = refine(m1, cells_from_colors(c1));
    let r2 = refine(m2, cells_from_colors(c2));
    if r1.len() != r2.len() || r1.iter().zip(&r2).any(|(a, b)| a.len() != b.len()) {
        return None;
    }
    for (a, b) in r1.iter().zip(&r2) {
        if c1[a[0]] != c2[b[0]] || g1.degree(a[0]) != g2.degree(b[0]) {
            return None;
        }
    }
    let mut cell1 = vec![0; n];
    let mut cell2 = vec![0; n];
    for (i, c) in r1.iter().enumerate() {
        c.iter().for_each(|&v| cell1[v] = i);
    }
    for (i, c) in r2.iter().enumerate() {
        c.iter().for_each(|&v| cell2[v] = i);
    }
    // map small cells first, then grow along edges
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut placed = 0u64;
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| placed >> v & 1 == 0)
            .max_by_key(|&v| {
                (
                    (m1[v] & placed).count_ones(),
                    std::cmp::Reverse(r1[cell1[v]].len()),
                    std::cmp::Reverse(v),
                )
            })
            .unwrap();
        placed |= 1 << next;
        order.push(next);
    }
    let mut map = vec![usize::MAX; n];
    let mut used = 0u64;
    if extend_iso(0, &order, m1, m2, &cell1, &cell2, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn extend_iso(
    i: usize,
    order: &[usize],
    m1: &[u64],
    m2: &[u64],
    cell1: &[usize],
    cell2: &[usize],
    map: &mut [usize],
    used: &mut u64,
) -> bool {
    if i == order.len() {
        return true;
    }
    let v = order[i];
    for w in 0..m2.len() {
        if *used >> w & 1 == 1 || cell2[w] != cell1[v] {
            continue;
        }
        let consistent = order[..i]
            .iter()
            .all(|&u| (m1[v] >> u & 1) == (m2[w] >> map[u] & 1));
        if !consistent {
            continue;
        }
        map[v] = w;
        *used |= 1 << w;
        if extend_iso(i + 1, order, m1, m2, cell1, cell2, map, used) {
            return true;
        }
        *used &= !(1 << w);
        map[v] = usize::MAX;
    }
    false
}

/// An edge-preserving bijection `g1 -> g2`, if one exists.
pub fn find_isomorphism(g1: &Graph, g2: &Graph) -> Result<Option<Vec<usize>>> {
    check_pattern_size(g1.n())?;
    check_pattern_size(g2.n())?;
    if g1.n() != g2.n() || g1.m() != g2.m() || g1.degree_sequence() != g2.degree_sequence() {
        return Ok(None);
    }
    let zeros = vec![0; g1.n()];
    Ok(find_colored_iso(g1, &zeros, g2, &zeros))
}

pub fn is_isomorphic(g1: &Graph, g2: &Graph) -> Result<bool> {
    Ok(find_isomorphism(g1, g2)?.is_some())
}

/// Order of the automorphism group, via the orbit-stabiliser chain along vertices `0..n`.
pub fn automorphism_count(g: &Graph) -> Result<u128> {
    check_pattern_size(g.n())?;
    Ok(automorphism_count_unchecked(g))
}

pub(crate) fn automorphism_count_unchecked(g: &Graph) -> u128 {
    let n = g.n();
    let mut colors = vec![0u32; n];
    let mut next_color = 1;
    let mut total: u128 = 1;
    for v in 0..n {
        let mut orbit = 1u128;
        for w in 0..n {
            if w == v || colors[w] != colors[v] {
                continue;
            }
            let mut ca = colors.clone();
            let mut cb = colors.clone();
            ca[v] = next_color;
            cb[w] = next_color;
            if find_colored_iso(g, &ca, g, &cb).is_some() {
                orbit += 1;
            }
        }
        total *= orbit;
        colors[v] = next_color;
        next_color += 1;
    }
    total
}
