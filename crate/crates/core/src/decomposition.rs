//! DAG tree decompositions, brute-force DAG treewidth, the associated family of
//! source graphs, and exact treedepth/treewidth of small undirected graphs.

use std::fmt;

use crate::dag::{for_each_acyclic_orientation, OrientedDag};
use crate::error::{ensure_size, Error, Result};
use crate::graph::{bits, mask_closure, mask_components, Graph};

pub const DTW_SOURCE_LIMIT: usize = 7;
pub const FAMILY_NON_SOURCE_LIMIT: usize = 8;
pub const SMALL_GRAPH_LIMIT: usize = 10;

/// A tree whose nodes are bags of sources.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DagTreeDecomposition {
    /// Bag `i` as a mask of sources.
    pub bags: Vec<u64>,
    /// Tree edges between bag indices.
    pub edges: Vec<(usize, usize)>,
}

impl DagTreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.count_ones() as usize).max().unwrap_or(0)
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Bags on the tree path from `a` to `b`, inclusive.
    pub fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let adj = self.adjacency();
        let mut parent = vec![usize::MAX; self.bags.len()];
        let mut stack = vec![a];
        parent[a] = a;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    stack.push(y);
                }
            }
        }
        let mut path = vec![b];
        let mut x = b;
        while x != a {
            x = parent[x];
            path.push(x);
        }
        path.reverse();
        path
    }

    fn is_tree(&self) -> bool {
        let k = self.bags.len();
        if k == 0 {
            return self.edges.is_empty();
        }
        if self.edges.len() != k - 1 || self.edges.iter().any(|&(a, b)| a >= k || b >= k) {
            return false;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; k];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.iter().all(|&s| s)
    }
}

/// The first failing condition found while validating a decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionViolation {
    NotATree,
    BagNotSources(usize),
    Uncovered(Vec<usize>),
    /// `R(b1) ∩ R(b2)` is not inside `R(middle)`.
    Intersection { b1: usize, b2: usize, middle: usize },
}

impl fmt::Display for DecompositionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotATree => write!(f, "bag graph is not a tree"),
            Self::BagNotSources(i) => write!(f, "bag {i} contains a non-source"),
            Self::Uncovered(s) => write!(f, "sources {s:?} are in no bag"),
            Self::Intersection { b1, b2, middle } => write!(
                f,
                "reach of bags {b1} and {b2} meet outside the reach of bag {middle} between them"
            ),
        }
    }
}

pub fn check_dtd_decomposition(
    d: &OrientedDag,
    t: &DagTreeDecomposition,
) -> std::result::Result<(), DecompositionViolation> {
    if !t.is_tree() {
        return Err(DecompositionViolation::NotATree);
    }
    let sources = d.source_mask();
    if let Some(i) = t.bags.iter().position(|&b| b & !sources != 0) {
        return Err(DecompositionViolation::BagNotSources(i));
    }
    let covered = t.bags.iter().fold(0, |m, &b| m | b);
    if covered != sources {
        return Err(DecompositionViolation::Uncovered(bits(sources & !covered).collect()));
    }
    let reach: Vec<u64> = t.bags.iter().map(|&b| d.reach_of_set(b)).collect();
    for b1 in 0..t.bags.len() {
        for b2 in b1 + 1..t.bags.len() {
            let shared = reach[b1] & reach[b2];
            if shared == 0 {
                continue;
            }
            for middle in t.path(b1, b2) {
                if shared & !reach[middle] != 0 {
                    return Err(DecompositionViolation::Intersection { b1, b2, middle });
                }
            }
        }
    }
    Ok(())
}

/// Coverage plus the reachability intersection property over all bag triples.
pub fn validate_dtd_decomposition(d: &OrientedDag, t: &DagTreeDecomposition) -> bool {
    check_dtd_decomposition(d, t).is_ok()
}

/// Maximum-weight spanning tree of the bags weighted by shared reach, when it is a
/// junction tree.
///
/// For any tree on the bags the total weight counts, per non-source `v`, the tree
/// edges joining two bags that both reach `v`; that is at most `c(v) - 1` where
/// `c(v)` is the number of such bags, with equality exactly when those bags are
/// connected. So a valid tree exists iff the maximum spanning tree attains
/// `sum (c(v) - 1)`, and then it is one.
pub fn junction_tree(reach: &[u64]) -> Option<Vec<(usize, usize)>> {
    let k = reach.len();
    if k == 0 {
        return Some(Vec::new());
    }
    let all = reach.iter().fold(0u64, |m, r| m | r);
    let target: u32 = bits(all)
        .map(|v| reach.iter().filter(|r| *r >> v & 1 == 1).count() as u32 - 1)
        .sum();
    // Prim
    let mut in_tree = vec![false; k];
    in_tree[0] = true;
    let mut edges = Vec::with_capacity(k - 1);
    let mut total = 0u32;
    for _ in 1..k {
        let mut best: Option<(u32, usize, usize)> = None;
        for a in (0..k).filter(|&a| in_tree[a]) {
            for b in (0..k).filter(|&b| !in_tree[b]) {
                let w = (reach[a] & reach[b]).count_ones();
                if best.is_none_or(|(bw, _, _)| w > bw) {
                    best = Some((w, a, b));
                }
            }
        }
        let (w, a, b) = best.unwrap();
        in_tree[b] = true;
        total += w;
        edges.push((a, b));
    }
    (total == target).then_some(edges)
}

/// Minimum-width DAG tree decomposition by exhaustive search.
///
/// Widths are tried from 1 upward. For each width the candidate bag families are
/// antichains of source sets of that size or less, covering every source, with at
/// most one bag per source; a family is accepted when its bags admit a junction
/// tree (see [`junction_tree`]).
pub fn dtw_bruteforce(d: &OrientedDag) -> Result<(usize, DagTreeDecomposition)> {
    let s = d.source_mask().count_ones() as usize;
    ensure_size("source count for DAG treewidth", s, DTW_SOURCE_LIMIT)?;
    if s == 0 {
        return Ok((0, DagTreeDecomposition::default()));
    }
    for w in 1..=s {
        if let Some(t) = decomposition_of_width(d, w) {
            debug_assert!(validate_dtd_decomposition(d, &t));
            return Ok((w, t));
        }
    }
    unreachable!("a single bag holding every source is always valid")
}

/// A decomposition of width at most `w` from the restricted search space, if any.
pub fn decomposition_of_width(d: &OrientedDag, w: usize) -> Option<DagTreeDecomposition> {
    let sources = d.source_mask();
    let s = sources.count_ones() as usize;
    if s == 0 {
        return Some(DagTreeDecomposition::default());
    }
    if w == 0 {
        return None;
    }
    let mut candidates: Vec<u64> = subsets_up_to(sources, w);
    // larger bags first: fewer, coarser bags are the likeliest to fit a tree
    candidates.sort_by_key(|b| (std::cmp::Reverse(b.count_ones()), *b));
    let mut search = FamilySearch {
        d,
        candidates: &candidates,
        sources,
        w,
        chosen: Vec::with_capacity(s),
        reach: Vec::with_capacity(s),
    };
    let min_bags = s.div_ceil(w);
    for m in min_bags..=s {
        if let Some(t) = search.pick(0, m, 0) {
            return Some(t);
        }
    }
    None
}

fn subsets_up_to(set: u64, w: usize) -> Vec<u64> {
    let items: Vec<usize> = bits(set).collect();
    let mut out = Vec::new();
    for sub in 1u64..(1 << items.len()) {
        if sub.count_ones() as usize <= w {
            out.push(bits(sub).fold(0, |m, i| m | 1 << items[i]));
        }
    }
    out
}

struct FamilySearch<'a> {
    d: &'a OrientedDag,
    candidates: &'a [u64],
    sources: u64,
    w: usize,
    chosen: Vec<u64>,
    reach: Vec<u64>,
}

impl FamilySearch<'_> {
    fn pick(&mut self, from: usize, remaining: usize, covered: u64) -> Option<DagTreeDecomposition> {
        if remaining == 0 {
            if covered != self.sources {
                return None;
            }
            return junction_tree(&self.reach).map(|edges| DagTreeDecomposition {
                bags: self.chosen.clone(),
                edges,
            });
        }
        let uncovered = (self.sources & !covered).count_ones() as usize;
        if uncovered > remaining * self.w {
            return None;
        }
        for i in from..self.candidates.len() {
            let b = self.candidates[i];
            // every bag must cover something new and the family stays an antichain
            if b & !covered == 0 || self.chosen.iter().any(|&c| c & b == b || c & b == c) {
                continue;
            }
            self.chosen.push(b);
            self.reach.push(self.d.reach_of_set(b));
            let found = self.pick(i + 1, remaining - 1, covered | b);
            self.chosen.pop();
            self.reach.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

/// Maximum DAG treewidth over all acyclic orientations of `h`.
pub fn dtw_graph(h: &Graph) -> Result<usize> {
    let base = std::sync::Arc::new(h.clone());
    let mut best = 0;
    let mut err = None;
    for_each_acyclic_orientation(h, |out| {
        if err.is_some() {
            return;
        }
        let d = OrientedDag::from_out_masks(base.clone(), out.to_vec()).expect("acyclic");
        let s = d.source_mask().count_ones() as usize;
        if s > DTW_SOURCE_LIMIT {
            err = Some(Error::TooLarge {
                what: "source count for DAG treewidth",
                limit: DTW_SOURCE_LIMIT,
                actual: s,
            });
            return;
        }
        if s > best && decomposition_of_width(&d, best).is_none() {
            best = dtw_bruteforce(&d).expect("size checked").0;
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(best),
    }
}

/// Bipartite sources-versus-non-sources graph with an edge wherever a source reaches a
/// non-source. Vertex ids are those of `d`.
pub fn bip(d: &OrientedDag) -> Graph {
    let mut edges = Vec::new();
    for s in bits(d.source_mask()) {
        for v in bits(d.reach_mask(s)) {
            edges.push((s.min(v), s.max(v)));
        }
    }
    edges.sort_unstable();
    Graph::from_edges(d.n(), &edges).expect("reachability pairs are distinct")
}

/// Graphs on the sources obtained by contracting, for every non-source, one of its
/// edges in [`bip`]. One graph per choice function, sources relabelled `0..s` in
/// ascending order.
pub struct AssociatedFamily {
    sources: Vec<usize>,
    /// Per non-source: (reach-set membership mask over source indices, candidate source indices).
    choices: Vec<(u64, Vec<usize>)>,
    counter: Vec<usize>,
    done: bool,
}

impl AssociatedFamily {
    /// Number of choice functions, i.e. the number of graphs the iterator yields.
    pub fn len(&self) -> usize {
        self.choices.iter().map(|c| c.1.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl Iterator for AssociatedFamily {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        if self.done {
            return None;
        }
        let s = self.sources.len();
        let mut masks = vec![0u64; s];
        for ((reachers, options), &pick) in self.choices.iter().zip(&self.counter) {
            let into = options[pick];
            for other in bits(*reachers & !(1 << into)) {
                masks[into] |= 1 << other;
                masks[other] |= 1 << into;
            }
        }
        // advance the mixed-radix counter
        self.done = true;
        for (c, (_, options)) in self.counter.iter_mut().zip(&self.choices) {
            *c += 1;
            if *c < options.len() {
                self.done = false;
                break;
            }
            *c = 0;
        }
        Some(Graph::from_masks(&masks))
    }
}

pub fn associated_family(d: &OrientedDag) -> Result<AssociatedFamily> {
    let non_sources = d.non_source_mask();
    ensure_size(
        "non-source count for the associated family",
        non_sources.count_ones() as usize,
        FAMILY_NON_SOURCE_LIMIT,
    )?;
    let sources: Vec<usize> = d.sources();
    let index = |s: usize| sources.iter().position(|&x| x == s).unwrap();
    let mut choices = Vec::new();
    for v in bits(non_sources) {
        let reachers: Vec<usize> = d.reachers(v).into_iter().map(index).collect();
        if reachers.is_empty() {
            return Err(Error::Internal(format!("non-source {v} is reached by no source")));
        }
        let mask = reachers.iter().fold(0u64, |m, &i| m | 1 << i);
        choices.push((mask, reachers));
    }
    let counter = vec![0; choices.len()];
    Ok(AssociatedFamily {
        sources,
        choices,
        counter,
        done: false,
    })
}

/// Exact treedepth by root choice over connected components, memoised on vertex subsets.
pub fn treedepth_bruteforce(g: &Graph) -> Result<usize> {
    ensure_size("graph vertex count", g.n(), SMALL_GRAPH_LIMIT)?;
    let mut memo = vec![u8::MAX; 1 << g.n()];
    Ok(td_of(g.masks(), g.vertex_mask(), &mut memo) as usize)
}

fn td_of(masks: &[u64], set: u64, memo: &mut [u8]) -> u8 {
    if set == 0 {
        return 0;
    }
    if memo[set as usize] != u8::MAX {
        return memo[set as usize];
    }
    let comps = mask_components(masks, set);
    let value = if comps.len() > 1 {
        comps.into_iter().map(|c| td_of(masks, c, memo)).max().unwrap()
    } else {
        1 + bits(set)
            .map(|v| td_of(masks, set & !(1 << v), memo))
            .min()
            .unwrap()
    };
    memo[set as usize] = value;
    value
}

/// Exact treewidth by the elimination-order dynamic programme over vertex subsets.
///
/// `TW(S) = min over v in S of max(TW(S - v), |Q(S - v, v)|)`, where `Q(S, v)` is the
/// set of vertices outside `S ∪ {v}` joined to `v` by a path through `S`.
pub fn treewidth_bruteforce(g: &Graph) -> Result<usize> {
    let n = g.n();
    ensure_size("graph vertex count", n, SMALL_GRAPH_LIMIT)?;
    if n == 0 {
        return Ok(0);
    }
    let masks = g.masks();
    let all = g.vertex_mask();
    let mut tw = vec![i32::MAX; 1 << n];
    tw[0] = -1;
    for set in 1u64..(1 << n) {
        let mut best = i32::MAX;
        for v in bits(set) {
            let rest = set & !(1 << v);
            let inside = mask_closure(masks, rest | 1 << v, 1 << v);
            let boundary = inside.iter_nbhd(masks) & all & !rest & !(1 << v);
            let q = boundary.count_ones() as i32;
            best = best.min(tw[rest as usize].max(q));
        }
        tw[set as usize] = best;
    }
    Ok(tw[all as usize].max(0) as usize)
}

trait Neighbourhood {
    fn iter_nbhd(self, masks: &[u64]) -> u64;
}

impl Neighbourhood for u64 {
    fn iter_nbhd(self, masks: &[u64]) -> u64 {
        bits(self).fold(0, |m, v| m | masks[v])
    }
}

/// Hypergraph on the non-sources whose hyperedges are the sources' reach sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    pub vertices: Vec<usize>,
    pub hyperedges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// One hyperedge per line as space-separated vertex ids, after a `#` header.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "# hypergraph: {} vertices, {} hyperedges\n# vertices: {}\n",
            self.vertices.len(),
            self.hyperedges.len(),
            join(&self.vertices)
        );
        for e in &self.hyperedges {
            s.push_str(&join(e));
            s.push('\n');
        }
        s
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn to_hypergraph(d: &OrientedDag) -> Hypergraph {
    let non_sources = d.non_source_mask();
    Hypergraph {
        vertices: bits(non_sources).collect(),
        hyperedges: bits(d.source_mask())
            .map(|s| d.reach_mask(s) & non_sources)
            .filter(|&e| e != 0)
            .map(|e| bits(e).collect())
            .collect(),
    }
}

/// Extremes of treedepth and treewidth over the associated family of a DAG.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyBounds {
    pub members: usize,
    pub td_min: usize,
    pub td_max: usize,
    pub tw_min: usize,
    pub tw_max: usize,
}

pub fn family_bounds(d: &OrientedDag) -> Result<FamilyBounds> {
    let mut b = FamilyBounds {
        members: 0,
        td_min: usize::MAX,
        td_max: 0,
        tw_min: usize::MAX,
        tw_max: 0,
    };
    for g in associated_family(d)? {
        let td = treedepth_bruteforce(&g)?;
        let tw = treewidth_bruteforce(&g)?;
        b.members += 1;
        b.td_min = b.td_min.min(td);
        b.td_max = b.td_max.max(td);
        b.tw_min = b.tw_min.min(tw);
        b.tw_max = b.tw_max.max(tw);
    }
    Ok(b)
}
