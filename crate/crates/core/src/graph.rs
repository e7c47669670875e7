//! Simple undirected graphs, edge-list I/O and degeneracy orderings.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Vertices with ids below this bound get a cached `u64` neighbourhood mask.
pub const MASK_BITS: usize = 64;

/// A simple undirected graph on the dense vertex ids `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    masks: Vec<u64>,
    edges: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            masks: if n <= MASK_BITS { vec![0; n] } else { Vec::new() },
            edges: 0,
        }
    }

    /// Builds a graph, rejecting self-loops, out-of-range endpoints and repeated edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u == v || u >= n || v >= n || g.has_edge(u, v) {
                return Err(Error::InvalidEdge(u, v));
            }
            g.push_edge(u, v);
        }
        g.finish();
        Ok(g)
    }

    /// Builds a graph from per-vertex neighbourhood masks (`n <= 64`).
    pub fn from_masks(masks: &[u64]) -> Self {
        let n = masks.len();
        assert!(n <= MASK_BITS);
        let mut edges = Vec::new();
        for (u, &m) in masks.iter().enumerate() {
            for v in bits(m) {
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, &edges).expect("masks describe a simple graph")
    }

    fn push_edge(&mut self, u: usize, v: usize) {
        self.adj[u].push(v);
        self.adj[v].push(u);
        if !self.masks.is_empty() {
            self.masks[u] |= 1 << v;
            self.masks[v] |= 1 << u;
        }
        self.edges += 1;
    }

    fn finish(&mut self) {
        for list in &mut self.adj {
            list.sort_unstable();
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if !self.masks.is_empty() {
            return self.masks[u] >> v & 1 == 1;
        }
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Neighbourhood of `v` as a bitmask. Panics for graphs with more than 64 vertices.
    pub fn mask(&self, v: usize) -> u64 {
        assert!(self.n() <= MASK_BITS, "bitmask view needs at most 64 vertices");
        self.masks[v]
    }

    pub fn masks(&self) -> &[u64] {
        assert!(self.n() <= MASK_BITS, "bitmask view needs at most 64 vertices");
        &self.masks
    }

    /// Mask with one bit per vertex.
    pub fn vertex_mask(&self) -> u64 {
        full_mask(self.n())
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// Subgraph induced by the vertices in `keep` (ascending order), relabelled densely.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut index = HashMap::with_capacity(keep.len());
        for (i, &v) in keep.iter().enumerate() {
            index.insert(v, i);
        }
        let mut edges = Vec::new();
        for (i, &v) in keep.iter().enumerate() {
            for w in &self.adj[v] {
                if let Some(&j) = index.get(w) {
                    if i < j {
                        edges.push((i, j));
                    }
                }
            }
        }
        Graph::from_edges(keep.len(), &edges).expect("induced subgraph is simple")
    }

    /// Relabels vertex `v` to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let edges: Vec<_> = self.edges().map(|(u, v)| (perm[u], perm[v])).collect();
        Graph::from_edges(self.n(), &edges).expect("permutation preserves simplicity")
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if !self.has_edge(u, v) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, &edges).expect("complement is simple")
    }

    /// Disjoint union, vertices of `other` shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n();
        let edges: Vec<_> = self
            .edges()
            .chain(other.edges().map(|(u, v)| (u + off, v + off)))
            .collect();
        Graph::from_edges(off + other.n(), &edges).expect("disjoint union is simple")
    }

    /// Replaces every edge by a path of length two through a new vertex.
    pub fn subdivided(&self) -> Graph {
        let n = self.n();
        let mut edges = Vec::with_capacity(2 * self.m());
        for (i, (u, v)) in self.edges().enumerate() {
            edges.push((u, n + i));
            edges.push((v, n + i));
        }
        Graph::from_edges(n + self.m(), &edges).expect("subdivision is simple")
    }

    pub fn is_connected(&self) -> bool {
        connected_components(self).len() <= 1
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n())?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "])")
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates the set bits of a mask in ascending order.
pub fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

/// Partition of the vertex set into maximal connected sets, each sorted, ordered by smallest vertex.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut comp = Vec::new();
        while let Some(v) = stack.pop() {
            comp.push(v);
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Connected components of the subgraph induced by `within`, given neighbourhood masks.
pub fn mask_components(masks: &[u64], within: u64) -> Vec<u64> {
    let mut rest = within;
    let mut comps = Vec::new();
    while rest != 0 {
        let seed = rest & rest.wrapping_neg();
        let comp = mask_closure(masks, within, seed);
        comps.push(comp);
        rest &= !comp;
    }
    comps
}

/// Vertices of `within` connected to `seed` inside `within`.
pub fn mask_closure(masks: &[u64], within: u64, seed: u64) -> u64 {
    let mut comp = seed & within;
    let mut frontier = comp;
    while frontier != 0 {
        let mut next = 0;
        for v in bits(frontier) {
            next |= masks[v];
        }
        next &= within & !comp;
        comp |= next;
        frontier = next;
    }
    comp
}

pub fn mask_is_connected(masks: &[u64], within: u64) -> bool {
    within == 0 || mask_closure(masks, within, within & within.wrapping_neg()) == within
}

/// Vertex ordering with the degeneracy it witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegeneracyOrder {
    pub order: Vec<usize>,
    pub d: usize,
}

impl DegeneracyOrder {
    /// `rank[v]` = position of `v` in the order.
    pub fn ranks(&self) -> Vec<usize> {
        let mut rank = vec![0; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            rank[v] = i;
        }
        rank
    }
}

/// Repeatedly removes a minimum-degree vertex, smallest id first among ties.
pub fn degeneracy_order(g: &Graph) -> DegeneracyOrder {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
        (0..n).map(|v| Reverse((deg[v], v))).collect();
    let mut order = Vec::with_capacity(n);
    let mut d = 0;
    while let Some(Reverse((k, v))) = heap.pop() {
        if removed[v] || k != deg[v] {
            continue;
        }
        removed[v] = true;
        d = d.max(k);
        order.push(v);
        for &w in g.neighbors(v) {
            if !removed[w] {
                deg[w] -= 1;
                heap.push(Reverse((deg[w], w)));
            }
        }
    }
    DegeneracyOrder { order, d }
}

/// Result of parsing an edge-list file: the graph plus the original label of every dense id.
#[derive(Debug, Clone)]
pub struct ParsedGraph {
    pub graph: Graph,
    pub labels: Vec<String>,
}

/// Parses the edge-list text format.
///
/// One edge `u v` per line, `#` starts a comment line, and an optional header
/// `n <count>` declares the vertex count. With a header, labels must be integers
/// in `0..count` and are used as ids directly. Without one, all-integer labels are
/// numbered in ascending numeric order and other labels by first appearance.
pub fn parse_edge_list(text: &str) -> Result<ParsedGraph> {
    let mut declared: Option<usize> = None;
    let mut raw: Vec<(usize, String, String)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected two tokens, found {}", toks.len()),
            });
        }
        if toks[0] == "n" {
            if declared.is_some() || !raw.is_empty() {
                return Err(Error::Parse {
                    line: lineno,
                    message: "vertex-count header must come first and only once".into(),
                });
            }
            let count = toks[1].parse::<usize>().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("invalid vertex count {:?}", toks[1]),
            })?;
            declared = Some(count);
            continue;
        }
        if toks[0] == toks[1] {
            return Err(Error::Parse {
                line: lineno,
                message: format!("self-loop on {}", toks[0]),
            });
        }
        raw.push((lineno, toks[0].to_string(), toks[1].to_string()));
    }

    let (n, labels, index): (usize, Vec<String>, HashMap<String, usize>) = match declared {
        Some(count) => {
            let mut index = HashMap::new();
            for (lineno, a, b) in &raw {
                for t in [a, b] {
                    match t.parse::<usize>() {
                        Ok(v) if v < count => {
                            index.insert(t.clone(), v);
                        }
                        _ => {
                            return Err(Error::Parse {
                                line: *lineno,
                                message: format!("vertex {t:?} not an integer in 0..{count}"),
                            })
                        }
                    }
                }
            }
            (count, (0..count).map(|v| v.to_string()).collect(), index)
        }
        None => {
            let mut order: Vec<String> = Vec::new();
            let mut seen = HashMap::new();
            for (_, a, b) in &raw {
                for t in [a, b] {
                    if !seen.contains_key(t) {
                        seen.insert(t.clone(), order.len());
                        order.push(t.clone());
                    }
                }
            }
            let numeric: Option<Vec<u64>> = order.iter().map(|t| t.parse().ok()).collect();
            if let Some(nums) = numeric {
                let mut pairs: Vec<(u64, String)> = nums.into_iter().zip(order).collect();
                pairs.sort();
                order = pairs.into_iter().map(|(_, t)| t).collect();
            }
            let index = order.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
            (order.len(), order, index)
        }
    };

    let mut g = Graph::empty(n);
    for (lineno, a, b) in &raw {
        let (u, v) = (index[a], index[b]);
        if u == v {
            return Err(Error::Parse {
                line: *lineno,
                message: format!("self-loop on {a}"),
            });
        }
        if g.adj[u].contains(&v) {
            return Err(Error::DuplicateEdge {
                line: *lineno,
                u: a.clone(),
                v: b.clone(),
            });
        }
        g.push_edge(u, v);
    }
    g.finish();
    Ok(ParsedGraph { graph: g, labels })
}

/// Serialises a graph in the edge-list format, with an `n` header so isolated vertices survive.
pub fn to_edge_list(g: &Graph) -> String {
    let mut s = format!("n {}\n", g.n());
    for (u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

/// Standard small graphs used throughout the tests and the CLI.
pub mod named {
    use super::Graph;

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    /// `K_{a,b}` with the `a` side on ids `0..a`.
    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..a {
            for v in 0..b {
                edges.push((u, a + v));
            }
        }
        Graph::from_edges(a + b, &edges).unwrap()
    }

    /// Star with centre 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Graph::from_edges(leaves + 1, &edges).unwrap()
    }

    /// `K_n` minus the edge `{0, 1}`.
    pub fn complete_minus_edge(n: usize) -> Graph {
        let edges: Vec<_> = complete(n).edges().filter(|&e| e != (0, 1)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }
}
