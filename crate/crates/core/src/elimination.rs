//! DAG elimination forests and DAG treedepth.
//!
//! A forest is built by repeatedly deleting a source together with everything it
//! reaches and recursing into the connected components of what is left. Deleting a
//! source's reach set never creates new sources, so the forest nodes are exactly the
//! sources of the DAG.

use std::collections::HashSet;
use std::fmt;

use crate::dag::{contract, for_each_acyclic_orientation, remove_vertex, OrientedDag};
use crate::error::{ensure_size, Error, Result};
use crate::graph::{bits, mask_components, mask_is_connected, named, Graph};
use crate::iso::{canonical_label_unchecked, graph_from_label};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestNode {
    pub source: usize,
    pub children: Vec<ForestNode>,
}

impl ForestNode {
    pub fn leaf(source: usize) -> Self {
        ForestNode {
            source,
            children: Vec::new(),
        }
    }

    pub fn with_children(source: usize, children: Vec<ForestNode>) -> Self {
        ForestNode { source, children }
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(ForestNode::depth).max().unwrap_or(0)
    }

    fn source_mask(&self) -> u64 {
        self.children
            .iter()
            .fold(1u64 << self.source, |m, c| m | c.source_mask())
    }
}

/// A DAG elimination forest; its depth counts vertices on the longest root-to-leaf path.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EliminationForest {
    pub roots: Vec<ForestNode>,
}

impl EliminationForest {
    pub fn new(roots: Vec<ForestNode>) -> Self {
        EliminationForest { roots }
    }

    pub fn depth(&self) -> usize {
        self.roots.iter().map(ForestNode::depth).max().unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        fn count(n: &ForestNode) -> usize {
            1 + n.children.iter().map(count).sum::<usize>()
        }
        self.roots.iter().map(count).sum()
    }

    /// Root-to-node paths of every node, in preorder.
    pub fn paths(&self) -> Vec<Vec<usize>> {
        fn walk(n: &ForestNode, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            prefix.push(n.source);
            out.push(prefix.clone());
            for c in &n.children {
                walk(c, prefix, out);
            }
            prefix.pop();
        }
        let mut out = Vec::new();
        for r in &self.roots {
            walk(r, &mut Vec::new(), &mut out);
        }
        out
    }

    /// True when `a` is an ancestor of `b`, `b` of `a`, or they are equal.
    pub fn on_common_path(&self, a: usize, b: usize) -> bool {
        self.paths().iter().any(|p| p.contains(&a) && p.contains(&b))
    }
}

impl fmt::Display for EliminationForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn node(n: &ForestNode, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write!(f, "{}", n.source)?;
            if !n.children.is_empty() {
                write!(f, "(")?;
                for (i, c) in n.children.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    node(c, f)?;
                }
                write!(f, ")")?;
            }
            Ok(())
        }
        write!(f, "[")?;
        for (i, r) in self.roots.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            node(r, f)?;
        }
        write!(f, "]")
    }
}

/// Why a forest failed replay, with the root-to-node path where it went wrong.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestViolation {
    pub path: Vec<usize>,
    pub reason: String,
}

impl fmt::Display for ForestViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {:?}: {}", self.path, self.reason)
    }
}

/// Replays the recursive construction deletion by deletion.
pub fn check_forest(d: &OrientedDag, f: &EliminationForest) -> std::result::Result<(), ForestViolation> {
    let all = d.base().vertex_mask();
    replay(d, all, &f.roots, &mut Vec::new())
}

pub fn validate_forest(d: &OrientedDag, f: &EliminationForest) -> bool {
    check_forest(d, f).is_ok()
}

fn replay(
    d: &OrientedDag,
    residual: u64,
    trees: &[ForestNode],
    path: &mut Vec<usize>,
) -> std::result::Result<(), ForestViolation> {
    let fail = |path: &Vec<usize>, reason: String| {
        Err(ForestViolation {
            path: path.clone(),
            reason,
        })
    };
    let comps = mask_components(d.undirected_masks(), residual);
    if comps.len() != trees.len() {
        return fail(
            path,
            format!(
                "{} residual component(s) but {} subtree(s)",
                comps.len(),
                trees.len()
            ),
        );
    }
    let mut used = vec![false; trees.len()];
    for comp in comps {
        let srcs = comp & d.source_mask();
        let Some(i) = (0..trees.len()).find(|&i| !used[i] && trees[i].source_mask() == srcs) else {
            return fail(
                path,
                format!("no subtree covers exactly the sources {:?}", bits(srcs).collect::<Vec<_>>()),
            );
        };
        used[i] = true;
        let t = &trees[i];
        path.push(t.source);
        let rest = comp & !(1u64 << t.source) & !d.reach_mask(t.source);
        replay(d, rest, &t.children, path)?;
        path.pop();
    }
    Ok(())
}

/// Searches for a forest of depth at most `k`, trying sources in ascending order.
pub fn check_dtd(d: &OrientedDag, k: usize) -> Option<EliminationForest> {
    forest_within(d, d.base().vertex_mask(), k).map(EliminationForest::new)
}

fn forest_within(d: &OrientedDag, residual: u64, k: usize) -> Option<Vec<ForestNode>> {
    let mut roots = Vec::new();
    for comp in mask_components(d.undirected_masks(), residual) {
        roots.push(tree_within(d, comp, k)?);
    }
    Some(roots)
}

fn tree_within(d: &OrientedDag, comp: u64, k: usize) -> Option<ForestNode> {
    if k == 0 {
        return None;
    }
    for s in bits(comp & d.source_mask()) {
        let rest = comp & !(1u64 << s) & !d.reach_mask(s);
        if let Some(children) = forest_within(d, rest, k - 1) {
            return Some(ForestNode::with_children(s, children));
        }
    }
    None
}

/// Whether some forest of depth at most `k` exists, without building it.
pub fn dtd_at_most(d: &OrientedDag, k: usize) -> bool {
    fits(d, d.base().vertex_mask(), k)
}

fn fits(d: &OrientedDag, residual: u64, k: usize) -> bool {
    mask_components(d.undirected_masks(), residual).into_iter().all(|comp| {
        k > 0
            && bits(comp & d.source_mask())
                .any(|s| fits(d, comp & !(1u64 << s) & !d.reach_mask(s), k - 1))
    })
}

/// DAG treedepth with a minimum-depth witness forest.
pub fn dtd_dag(d: &OrientedDag) -> (usize, EliminationForest) {
    (0..)
        .find_map(|k| check_dtd(d, k).map(|f| (k, f)))
        .expect("the source count always suffices")
}

/// DAG treedepth of a DAG, without the witness.
pub fn dtd_value(d: &OrientedDag) -> usize {
    (0..).find(|&k| dtd_at_most(d, k)).unwrap()
}

/// Maximum DAG treedepth over all acyclic orientations of `h`.
pub fn dtd_graph(h: &Graph) -> Result<usize> {
    let base = std::sync::Arc::new(h.clone());
    let mut best = 0;
    for_each_acyclic_orientation(h, |out| {
        let d = OrientedDag::from_out_masks(base.clone(), out.to_vec()).expect("acyclic");
        if !dtd_at_most(&d, best) {
            best = dtd_value(&d);
        }
    })?;
    Ok(best)
}

/// Whether every acyclic orientation of `h` has DAG treedepth at most `k`.
pub fn dtd_graph_at_most(h: &Graph, k: usize) -> Result<bool> {
    let base = std::sync::Arc::new(h.clone());
    let mut ok = true;
    // the visitor cannot stop early, so skip the work once a violation is seen
    for_each_acyclic_orientation(h, |out| {
        if ok {
            let d = OrientedDag::from_out_masks(base.clone(), out.to_vec()).expect("acyclic");
            ok = dtd_at_most(&d, k);
        }
    })?;
    Ok(ok)
}

pub const INDUCED_MINOR_HOST_LIMIT: usize = 10;

/// Whether `pattern` is an induced minor of `host`.
///
/// Searches for disjoint connected branch sets in `host`, one per pattern vertex,
/// whose quotient graph is isomorphic to `pattern` (adjacent exactly when the
/// pattern vertices are). Host vertices outside every branch set are deleted.
pub fn induced_minor_contains(host: &Graph, pattern: &Graph) -> Result<bool> {
    ensure_size("induced-minor host vertex count", host.n(), INDUCED_MINOR_HOST_LIMIT)?;
    let k = pattern.n();
    if k == 0 {
        return Ok(true);
    }
    if k > host.n() {
        return Ok(false);
    }
    let target = canonical_label_unchecked(pattern);
    let mut search = MinorSearch {
        masks: host.masks(),
        k,
        pattern_edges: pattern.m(),
        target,
        blocks: Vec::with_capacity(k),
    };
    Ok(search.assign(0))
}

struct MinorSearch<'a> {
    masks: &'a [u64],
    k: usize,
    pattern_edges: usize,
    target: Vec<u8>,
    blocks: Vec<u64>,
}

impl MinorSearch<'_> {
    fn assign(&mut self, v: usize) -> bool {
        let n = self.masks.len();
        if self.blocks.len() + (n - v) < self.k {
            return false;
        }
        if v == n {
            return self.accept();
        }
        // delete v
        if self.assign(v + 1) {
            return true;
        }
        for b in 0..self.blocks.len() {
            self.blocks[b] |= 1 << v;
            let hit = self.assign(v + 1);
            self.blocks[b] &= !(1 << v);
            if hit {
                return true;
            }
        }
        if self.blocks.len() < self.k {
            self.blocks.push(1 << v);
            let hit = self.assign(v + 1);
            self.blocks.pop();
            if hit {
                return true;
            }
        }
        false
    }

    fn accept(&mut self) -> bool {
        if self.blocks.len() != self.k {
            return false;
        }
        if !self.blocks.iter().all(|&b| mask_is_connected(self.masks, b)) {
            return false;
        }
        let nbhd: Vec<u64> = self
            .blocks
            .iter()
            .map(|&b| bits(b).fold(0, |m, v| m | self.masks[v]))
            .collect();
        let mut quotient = vec![0u64; self.k];
        let mut edges = 0;
        for i in 0..self.k {
            for j in i + 1..self.k {
                if nbhd[i] & self.blocks[j] != 0 {
                    quotient[i] |= 1 << j;
                    quotient[j] |= 1 << i;
                    edges += 1;
                }
            }
        }
        if edges != self.pattern_edges {
            return false;
        }
        canonical_label_unchecked(&Graph::from_masks(&quotient)) == self.target
    }
}

/// The two seven-vertex minimal obstructions besides `C6` and `P7`, derived by search.
///
/// Every seven-vertex supergraph of `P7` is generated; those whose DAG treedepth is
/// three and that contain neither `C6` nor another kept graph as a proper induced
/// minor are the minimal obstructions. `P7` itself is excluded from the result.
pub fn derive_h1_h2() -> Result<(Graph, Graph)> {
    let p7 = named::path(7);
    let p7_label = canonical_label_unchecked(&p7);
    let c6 = named::cycle(6);
    let non_edges: Vec<(usize, usize)> = p7.complement().edges().collect();
    let mut classes: HashSet<Vec<u8>> = HashSet::new();
    for subset in 0u32..(1 << non_edges.len()) {
        let mut edges: Vec<_> = p7.edges().collect();
        edges.extend(bits(subset as u64).map(|i| non_edges[i]));
        let g = Graph::from_edges(7, &edges)?;
        classes.insert(canonical_label_unchecked(&g));
    }
    let mut labels: Vec<Vec<u8>> = classes.into_iter().collect();
    labels.sort();
    let mut kept = Vec::new();
    for label in labels {
        if label == p7_label {
            continue;
        }
        let g = graph_from_label(&label);
        if dtd_graph(&g)? != 3 {
            continue;
        }
        if induced_minor_contains(&g, &c6)? {
            continue;
        }
        kept.push(g);
    }
    // kept graphs all have seven vertices, so none is a proper induced minor of another
    if kept.len() != 2 {
        return Err(Error::ObstructionCount(kept.len()));
    }
    kept.sort_by_key(|g| (g.m(), canonical_label_unchecked(g)));
    let h2 = kept.pop().unwrap();
    let h1 = kept.pop().unwrap();
    Ok((h1, h2))
}

/// Vertex deletions and edge contractions of `g`, one step each.
pub fn one_step_reductions(g: &Graph) -> Vec<Graph> {
    let masks = g.masks();
    let mut out: Vec<Graph> = (0..g.n())
        .map(|v| Graph::from_masks(&remove_vertex(masks, v)))
        .collect();
    out.extend(g.edges().map(|(u, v)| Graph::from_masks(&contract(masks, u, v))));
    out
}

/// A minimal obstruction for DAG treedepth at most `k`: treedepth above `k`, and every
/// one-step reduction at most `k`. Induced-minor monotonicity makes one step enough.
pub fn is_minimal_obstruction(g: &Graph, k: usize) -> Result<bool> {
    if dtd_graph_at_most(g, k)? {
        return Ok(false);
    }
    for r in one_step_reductions(g) {
        if !dtd_graph_at_most(&r, k)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All minimal obstructions for DAG treedepth at most two on up to `max_n` vertices,
/// by exhaustive search over connected graphs, named `c6`, `p7` or `m<n>_<index>`.
pub fn derive_dtd2_obstructions(max_n: usize) -> Result<Vec<(String, Graph)>> {
    let c6 = canonical_label_unchecked(&named::cycle(6));
    let p7 = canonical_label_unchecked(&named::path(7));
    let mut found = Vec::new();
    for n in 1..=max_n {
        let mut layer = Vec::new();
        for g in crate::catalog::connected_graphs(n) {
            if is_minimal_obstruction(&g, 2)? {
                layer.push(g);
            }
        }
        layer.sort_by_key(|g| (g.m(), canonical_label_unchecked(g)));
        let mut index = 0;
        for g in layer {
            let label = canonical_label_unchecked(&g);
            let name = if label == c6 {
                "c6".to_string()
            } else if label == p7 {
                "p7".to_string()
            } else {
                index += 1;
                format!("m{n}_{index:02}")
            };
            found.push((name, g));
        }
    }
    Ok(found)
}

const CATALOG: [(&str, &str); 16] = [
    ("c6", include_str!("../data/dtd2/c6.edges")),
    ("p7", include_str!("../data/dtd2/p7.edges")),
    ("m7_01", include_str!("../data/dtd2/m7_01.edges")),
    ("m7_02", include_str!("../data/dtd2/m7_02.edges")),
    ("m7_03", include_str!("../data/dtd2/m7_03.edges")),
    ("m7_04", include_str!("../data/dtd2/m7_04.edges")),
    ("m7_05", include_str!("../data/dtd2/m7_05.edges")),
    ("m7_06", include_str!("../data/dtd2/m7_06.edges")),
    ("m7_07", include_str!("../data/dtd2/m7_07.edges")),
    ("m7_08", include_str!("../data/dtd2/m7_08.edges")),
    ("m7_09", include_str!("../data/dtd2/m7_09.edges")),
    ("m7_10", include_str!("../data/dtd2/m7_10.edges")),
    ("m7_11", include_str!("../data/dtd2/m7_11.edges")),
    ("m7_12", include_str!("../data/dtd2/m7_12.edges")),
    ("m7_13", include_str!("../data/dtd2/m7_13.edges")),
    ("m7_14", include_str!("../data/dtd2/m7_14.edges")),
];

/// The shipped obstruction catalogue, generated by [`derive_dtd2_obstructions`] with `max_n = 7`.
pub fn obstruction_catalog() -> Vec<(String, Graph)> {
    CATALOG
        .iter()
        .map(|(name, text)| {
            let g = crate::graph::parse_edge_list(text)
                .expect("catalogue parses")
                .graph;
            (name.to_string(), g)
        })
        .collect()
}

/// Catalogue file text for one obstruction.
pub fn catalog_text(name: &str, g: &Graph) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "# {name}: minimal induced-minor obstruction for DAG treedepth at most 2\n"
    ));
    s.push_str("# generated by exhaustive search over connected graphs: DAG treedepth 3 (max over\n");
    s.push_str("# acyclic orientations), every vertex deletion and edge contraction at most 2\n");
    s.push_str(&format!("# vertices {}, edges {}\n", g.n(), g.m()));
    s.push_str("# adjacency:");
    for v in 0..g.n() {
        s.push_str(&format!(" {v}:{:?}", g.neighbors(v)));
    }
    s.push('\n');
    s.push_str(&crate::graph::to_edge_list(g));
    s
}

/// Graphs of the shipped obstruction catalogue.
pub fn dtd2_obstructions() -> Vec<Graph> {
    obstruction_catalog().into_iter().map(|(_, g)| g).collect()
}

/// True when `h` contains no obstruction of the catalogue as an induced minor.
pub fn dtd_le2_by_obstructions(h: &Graph) -> Result<bool> {
    ensure_size("induced-minor host vertex count", h.n(), INDUCED_MINOR_HOST_LIMIT)?;
    for o in dtd2_obstructions() {
        if induced_minor_contains(h, &o)? {
            return Ok(false);
        }
    }
    Ok(true)
}
