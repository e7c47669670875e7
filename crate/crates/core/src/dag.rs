//! Acyclic orientations of pattern graphs and their source/reachability structure.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{ensure_size, Error, Result};
use crate::graph::{bits, Graph};
use crate::iso::canonical_label_unchecked;
use crate::limits::{check_pattern_size, max_pattern_edges};

/// An acyclic orientation of a graph on at most 64 vertices.
///
/// `reach[v]` is the set of vertices with a directed path from `v`, excluding `v`.
#[derive(Clone, PartialEq, Eq)]
pub struct OrientedDag {
    base: Arc<Graph>,
    out: Vec<u64>,
    inn: Vec<u64>,
    sources: u64,
    reach: Vec<u64>,
}

impl OrientedDag {
    /// Orients `base` by out-neighbourhood masks; every base edge must be oriented exactly once.
    pub fn from_out_masks(base: Arc<Graph>, out: Vec<u64>) -> Result<Self> {
        let n = base.n();
        ensure_size("DAG vertex count", n, 64)?;
        if out.len() != n {
            return Err(Error::Internal("out-mask length differs from vertex count".into()));
        }
        let mut inn = vec![0u64; n];
        for (u, &m) in out.iter().enumerate() {
            for v in bits(m) {
                if v >= n || !base.has_edge(u, v) {
                    return Err(Error::InvalidEdge(u, v));
                }
                if out[v] >> u & 1 == 1 {
                    return Err(Error::InvalidEdge(u, v));
                }
                inn[v] |= 1 << u;
            }
        }
        for (u, v) in base.edges() {
            if (out[u] | out[v]) & (1 << u | 1 << v) == 0 {
                return Err(Error::InvalidEdge(u, v));
            }
        }
        let order = topological_order(&out, &inn).ok_or(Error::Cyclic)?;
        let mut reach = vec![0u64; n];
        for &v in order.iter().rev() {
            let mut r = out[v];
            for w in bits(out[v]) {
                r |= reach[w];
            }
            reach[v] = r;
        }
        let sources = (0..n).filter(|&v| inn[v] == 0).fold(0u64, |s, v| s | 1 << v);
        Ok(OrientedDag {
            base,
            out,
            inn,
            sources,
            reach,
        })
    }

    /// Orients `base` by the listed arcs `(tail, head)`.
    pub fn from_arcs(base: Graph, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut out = vec![0u64; base.n()];
        ensure_size("DAG vertex count", base.n(), 64)?;
        if arcs.len() != base.m() {
            return Err(Error::Internal(format!(
                "{} arcs given for {} edges",
                arcs.len(),
                base.m()
            )));
        }
        for &(u, v) in arcs {
            if u >= base.n() || v >= base.n() {
                return Err(Error::InvalidEdge(u, v));
            }
            out[u] |= 1 << v;
        }
        Self::from_out_masks(Arc::new(base), out)
    }

    /// Orients every edge from the smaller to the larger position in `order`.
    pub fn from_order(base: Graph, order: &[usize]) -> Result<Self> {
        let n = base.n();
        let mut rank = vec![usize::MAX; n];
        if order.len() != n {
            return Err(Error::NotPermutation);
        }
        for (i, &v) in order.iter().enumerate() {
            if v >= n || rank[v] != usize::MAX {
                return Err(Error::NotPermutation);
            }
            rank[v] = i;
        }
        let arcs: Vec<_> = base
            .edges()
            .map(|(u, v)| if rank[u] < rank[v] { (u, v) } else { (v, u) })
            .collect();
        Self::from_arcs(base, &arcs)
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn out_mask(&self, v: usize) -> u64 {
        self.out[v]
    }

    pub fn in_mask(&self, v: usize) -> u64 {
        self.inn[v]
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u] >> v & 1 == 1
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| bits(self.out[u]).map(move |v| (u, v)))
    }

    /// In-degree-zero vertices as a mask.
    pub fn source_mask(&self) -> u64 {
        self.sources
    }

    pub fn sources(&self) -> Vec<usize> {
        bits(self.sources).collect()
    }

    pub fn non_source_mask(&self) -> u64 {
        self.base.vertex_mask() & !self.sources
    }

    pub fn reach_mask(&self, v: usize) -> u64 {
        self.reach[v]
    }

    /// Vertices reachable from `s` by a directed path, `s` excluded.
    pub fn reach(&self, s: usize) -> Vec<usize> {
        bits(self.reach[s]).collect()
    }

    /// Union of the reach sets of the sources in `set`.
    pub fn reach_of_set(&self, set: u64) -> u64 {
        bits(set).fold(0, |r, s| r | self.reach[s])
    }

    /// Sources from which `u` is reachable.
    pub fn reachers(&self, u: usize) -> Vec<usize> {
        bits(self.reachers_mask(u)).collect()
    }

    pub fn reachers_mask(&self, u: usize) -> u64 {
        bits(self.sources)
            .filter(|&s| self.reach[s] >> u & 1 == 1)
            .fold(0, |m, s| m | 1 << s)
    }

    /// Underlying undirected neighbourhood masks.
    pub fn undirected_masks(&self) -> &[u64] {
        self.base.masks()
    }

    /// Topological order, ties broken by smallest id.
    pub fn topological_order(&self) -> Vec<usize> {
        topological_order(&self.out, &self.inn).expect("validated acyclic")
    }
}

impl std::fmt::Debug for OrientedDag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "OrientedDag(n={}, arcs=[", self.n())?;
        for (i, (u, v)) in self.arcs().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}->{v}")?;
        }
        write!(f, "])")
    }
}

/// Kahn's algorithm over masks; `None` when a directed cycle exists.
pub(crate) fn topological_order(out: &[u64], inn: &[u64]) -> Option<Vec<usize>> {
    let n = out.len();
    let mut indeg: Vec<u32> = inn.iter().map(|m| m.count_ones()).collect();
    let mut ready: u64 = (0..n).filter(|&v| indeg[v] == 0).fold(0, |m, v| m | 1 << v);
    let mut order = Vec::with_capacity(n);
    while ready != 0 {
        let v = ready.trailing_zeros() as usize;
        ready &= ready - 1;
        order.push(v);
        for w in bits(out[v]) {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready |= 1 << w;
            }
        }
    }
    (order.len() == n).then_some(order)
}

fn check_orientation_bounds(h: &Graph) -> Result<()> {
    check_pattern_size(h.n())?;
    ensure_size("pattern edge count", h.m(), max_pattern_edges())
}

/// Calls `visit` with the out-masks of every acyclic orientation of `h`.
///
/// Edges are assigned one at a time; the transitive closure is kept per level so an
/// arc `u -> v` is rejected as soon as `u` is already reachable from `v`.
pub fn for_each_acyclic_orientation<F: FnMut(&[u64])>(h: &Graph, mut visit: F) -> Result<()> {
    check_orientation_bounds(h)?;
    let n = h.n();
    let edges: Vec<(usize, usize)> = h.edges().collect();
    // closure[v] includes v itself
    let closure: Vec<u64> = (0..n).map(|v| 1u64 << v).collect();
    let mut out = vec![0u64; n];
    assign(&edges, 0, &closure, &mut out, &mut visit);
    Ok(())
}

fn assign<F: FnMut(&[u64])>(
    edges: &[(usize, usize)],
    i: usize,
    closure: &[u64],
    out: &mut [u64],
    visit: &mut F,
) {
    if i == edges.len() {
        visit(out);
        return;
    }
    let (a, b) = edges[i];
    for (u, v) in [(a, b), (b, a)] {
        if closure[v] >> u & 1 == 1 {
            continue;
        }
        let mut next = closure.to_vec();
        let add = closure[v];
        for x in next.iter_mut() {
            if *x >> u & 1 == 1 {
                *x |= add;
            }
        }
        out[u] |= 1 << v;
        assign(edges, i + 1, &next, out, visit);
        out[u] &= !(1 << v);
    }
}

/// Every acyclic orientation of `h`, as labelled objects (no isomorphism reduction).
pub fn acyclic_orientations(h: &Graph) -> Result<Vec<OrientedDag>> {
    let base = Arc::new(h.clone());
    let mut all = Vec::new();
    for_each_acyclic_orientation(h, |out| {
        all.push(
            OrientedDag::from_out_masks(base.clone(), out.to_vec())
                .expect("enumerated orientation is acyclic"),
        )
    })?;
    Ok(all)
}

/// `|chi_h(-1)|` by deletion-contraction with memoisation on canonical labels.
pub fn count_acyclic_orientations_via_chromatic(h: &Graph) -> Result<u128> {
    check_pattern_size(h.n())?;
    let mut memo = HashMap::new();
    Ok(chromatic_at_minus_one(h.masks(), &mut memo).unsigned_abs())
}

fn chromatic_at_minus_one(masks: &[u64], memo: &mut HashMap<Vec<u8>, i128>) -> i128 {
    let n = masks.len();
    let sign = if n % 2 == 0 { 1 } else { -1 };
    let edges: u32 = masks.iter().map(|m| m.count_ones()).sum::<u32>() / 2;
    if edges == 0 {
        return sign;
    }
    if edges as usize == n * (n - 1) / 2 {
        // chi_{K_n}(-1) = (-1)(-2)...(-n)
        return sign * (1..=n as i128).product::<i128>();
    }
    let g = Graph::from_masks(masks);
    let key = canonical_label_unchecked(&g);
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let (u, v) = g.edges().next().expect("graph has an edge");
    let mut deleted = masks.to_vec();
    deleted[u] &= !(1 << v);
    deleted[v] &= !(1 << u);
    let value = chromatic_at_minus_one(&deleted, memo) - chromatic_at_minus_one(&contract(masks, u, v), memo);
    memo.insert(key, value);
    value
}

/// Merges `v` into `u` (dropping loops and parallel edges) and removes `v`.
pub(crate) fn contract(masks: &[u64], u: usize, v: usize) -> Vec<u64> {
    let n = masks.len();
    let mut merged = masks.to_vec();
    merged[u] |= merged[v];
    for x in 0..n {
        if merged[x] >> v & 1 == 1 && x != u && x != v {
            merged[x] |= 1 << u;
        }
    }
    merged[u] &= !(1 << u | 1 << v);
    remove_vertex(&merged, v)
}

/// Deletes vertex `v`, shifting higher ids down by one.
pub(crate) fn remove_vertex(masks: &[u64], v: usize) -> Vec<u64> {
    let low = (1u64 << v) - 1;
    masks
        .iter()
        .enumerate()
        .filter(|&(x, _)| x != v)
        .map(|(_, &m)| (m & low) | ((m >> 1) & !low))
        .collect()
}
