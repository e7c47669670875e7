//! Directed homomorphism counting along a DAG elimination forest, and undirected
//! homomorphism counting as a sum over the pattern's acyclic orientations.
//!
//! At a forest node `v` with partial map `σ`, every extension `σ'` that maps `v` and
//! the still unmapped part of `reach(v)` is enumerated; the node contributes the sum
//! over `σ'` of the product of its children's counts under `σ'`. Children are
//! independent because they live in different components of what remains.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::dag::{acyclic_orientations, OrientedDag};
use crate::elimination::{check_forest, dtd_dag, EliminationForest, ForestNode};
use crate::error::{Error, Result};
use crate::graph::{bits, degeneracy_order, Graph};
use crate::host::{orient_by_order, HostDag};
use crate::limits::check_pattern_size;

const UNMAPPED: u32 = u32::MAX;

/// Pattern-to-host assignment; `None` marks an unmapped pattern vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialHom {
    pub map: Vec<Option<usize>>,
}

impl PartialHom {
    pub fn empty(k: usize) -> Self {
        PartialHom { map: vec![None; k] }
    }

    pub fn assigned_mask(&self) -> u64 {
        self.map
            .iter()
            .enumerate()
            .filter(|(_, x)| x.is_some())
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    /// True when every pattern arc between mapped vertices lands on a host arc.
    pub fn is_consistent(&self, pattern: &OrientedDag, host: &HostDag) -> bool {
        pattern.arcs().all(|(a, b)| match (self.map[a], self.map[b]) {
            (Some(x), Some(y)) => host.has_arc(x, y),
            _ => true,
        })
    }
}

/// Where the candidates for the node's own vertex come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CandidatePolicy {
    /// Every host vertex, at every forest node.
    AllHostVertices,
    /// In-neighbours of the image of an already mapped out-neighbour when there is
    /// one, otherwise every host vertex.
    #[default]
    MappedNeighbors,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomOptions {
    pub policy: CandidatePolicy,
    /// Worker threads for the outer loop of each forest root.
    pub threads: usize,
}

impl Default for HomOptions {
    fn default() -> Self {
        HomOptions {
            policy: CandidatePolicy::default(),
            threads: 1,
        }
    }
}

/// Counters gathered during one directed count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct HomStats {
    /// Deepest forest-node nesting reached.
    pub max_depth: usize,
    /// Bytes of working state held by the counter (partial map, plan, cursors).
    pub aux_bytes: usize,
    /// Number of forest-node invocations.
    pub node_calls: u64,
    /// Number of complete extensions enumerated over all nodes.
    pub extensions: u64,
}

#[derive(Debug, Clone, Copy)]
enum Source {
    /// Every host vertex.
    All,
    /// Out-neighbours of the image of this pattern vertex.
    OutOf(usize),
    /// In-neighbours of the image of this pattern vertex.
    InOf(usize),
}

#[derive(Debug, Clone)]
struct Step {
    w: usize,
    source: Source,
    /// Mapped `p` with arc `p -> w` still to check.
    check_in: Vec<usize>,
    /// Mapped `q` with arc `w -> q` still to check.
    check_out: Vec<usize>,
}

#[derive(Debug, Clone)]
struct NodePlan {
    steps: Vec<Step>,
    children: Vec<usize>,
}

#[derive(Debug, Clone)]
struct Plan {
    nodes: Vec<NodePlan>,
    roots: Vec<usize>,
}

impl Plan {
    fn bytes(&self) -> usize {
        let mut b = std::mem::size_of::<Plan>()
            + self.nodes.capacity() * std::mem::size_of::<NodePlan>()
            + self.roots.capacity() * std::mem::size_of::<usize>();
        for n in &self.nodes {
            b += n.steps.capacity() * std::mem::size_of::<Step>()
                + n.children.capacity() * std::mem::size_of::<usize>();
            for s in &n.steps {
                b += (s.check_in.capacity() + s.check_out.capacity()) * std::mem::size_of::<usize>();
            }
        }
        b
    }
}

/// Steps mapping `v` and then the unmapped part of `reach(v)` in topological order.
fn build_steps(
    pattern: &OrientedDag,
    topo: &[usize],
    v: usize,
    mut assigned: u64,
    policy: CandidatePolicy,
    fixed_v: bool,
) -> Vec<Step> {
    let todo = (pattern.reach_mask(v) & !assigned) | 1 << v;
    let mut steps = Vec::new();
    for &w in topo.iter().filter(|&&w| todo >> w & 1 == 1) {
        let mapped_in: Vec<usize> = bits(pattern.in_mask(w) & assigned).collect();
        let mapped_out: Vec<usize> = bits(pattern.out_mask(w) & assigned).collect();
        let mut step = Step {
            w,
            source: Source::All,
            check_in: mapped_in,
            check_out: mapped_out,
        };
        if w != v {
            // some in-neighbour lies on a path from v, so it is mapped by now
            let p = step.check_in.remove(0);
            step.source = Source::OutOf(p);
        } else if !fixed_v && policy == CandidatePolicy::MappedNeighbors && !step.check_out.is_empty() {
            step.source = Source::InOf(step.check_out.remove(0));
        }
        steps.push(step);
        assigned |= 1 << w;
    }
    steps
}

fn build_plan(pattern: &OrientedDag, forest: &EliminationForest, policy: CandidatePolicy) -> Plan {
    let topo = pattern.topological_order();
    let mut nodes = Vec::with_capacity(forest.node_count());
    fn add(
        n: &ForestNode,
        assigned: u64,
        pattern: &OrientedDag,
        topo: &[usize],
        policy: CandidatePolicy,
        nodes: &mut Vec<NodePlan>,
    ) -> usize {
        let steps = build_steps(pattern, topo, n.source, assigned, policy, false);
        let below = steps.iter().fold(assigned, |m, s| m | 1 << s.w);
        let id = nodes.len();
        nodes.push(NodePlan {
            steps,
            children: Vec::new(),
        });
        let children: Vec<usize> = n
            .children
            .iter()
            .map(|c| add(c, below, pattern, topo, policy, nodes))
            .collect();
        nodes[id].children = children;
        id
    }
    let roots = forest
        .roots
        .iter()
        .map(|r| add(r, 0, pattern, &topo, policy, &mut nodes))
        .collect();
    Plan { nodes, roots }
}

trait Count: Sized + Clone {
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    fn plus(self, other: &Self) -> Option<Self>;
    fn times(self, other: &Self) -> Option<Self>;
    fn into_big(self) -> BigUint;
}

impl Count for u128 {
    fn nil() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn plus(self, other: &Self) -> Option<Self> {
        self.checked_add(*other)
    }
    fn times(self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn into_big(self) -> BigUint {
        BigUint::from(self)
    }
}

impl Count for BigUint {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn times(self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn into_big(self) -> BigUint {
        self
    }
}

struct Engine<'a> {
    host: &'a HostDag,
    plan: &'a Plan,
    sigma: Vec<u32>,
    stats: HomStats,
}

impl<'a> Engine<'a> {
    fn new(host: &'a HostDag, plan: &'a Plan, k: usize) -> Self {
        let sigma = vec![UNMAPPED; k];
        let aux_bytes = sigma.capacity() * std::mem::size_of::<u32>()
            + plan.bytes()
            + std::mem::size_of::<Engine>();
        Engine {
            host,
            plan,
            sigma,
            stats: HomStats {
                aux_bytes,
                ..HomStats::default()
            },
        }
    }

    fn node<N: Count>(&mut self, node: usize, depth: usize, range: Option<(usize, usize)>) -> Option<N> {
        self.stats.node_calls += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let mut total = N::nil();
        self.extend(node, 0, depth, range, &mut total)?;
        Some(total)
    }

    fn extend<N: Count>(
        &mut self,
        node: usize,
        i: usize,
        depth: usize,
        range: Option<(usize, usize)>,
        total: &mut N,
    ) -> Option<()> {
        let plan = self.plan;
        let np = &plan.nodes[node];
        if i == np.steps.len() {
            self.stats.extensions += 1;
            let mut p = N::unit();
            for &c in &np.children {
                let sub: N = self.node(c, depth + 1, None)?;
                if sub.is_nil() {
                    return Some(());
                }
                p = p.times(&sub)?;
            }
            *total = std::mem::replace(total, N::nil()).plus(&p)?;
            return Some(());
        }
        let step = &np.steps[i];
        let host = self.host;
        match step.source {
            Source::All => {
                let (lo, hi) = range.unwrap_or((0, host.n()));
                for u in lo..hi {
                    self.try_vertex(node, i, step, u, depth, total)?;
                }
            }
            Source::OutOf(p) => {
                for &u in host.out(self.sigma[p] as usize) {
                    self.try_vertex(node, i, step, u as usize, depth, total)?;
                }
            }
            Source::InOf(q) => {
                for &u in host.inn(self.sigma[q] as usize) {
                    self.try_vertex(node, i, step, u as usize, depth, total)?;
                }
            }
        }
        Some(())
    }

    fn try_vertex<N: Count>(
        &mut self,
        node: usize,
        i: usize,
        step: &Step,
        u: usize,
        depth: usize,
        total: &mut N,
    ) -> Option<()> {
        let host = self.host;
        if step.check_in.iter().all(|&p| host.has_arc(self.sigma[p] as usize, u))
            && step.check_out.iter().all(|&q| host.has_arc(u, self.sigma[q] as usize))
        {
            self.sigma[step.w] = u as u32;
            let r = self.extend(node, i + 1, depth, None, total);
            self.sigma[step.w] = UNMAPPED;
            r?;
        }
        Some(())
    }
}

fn run<N: Count + Send>(
    host: &HostDag,
    plan: &Plan,
    k: usize,
    threads: usize,
) -> Option<(N, HomStats)> {
    let mut product = N::unit();
    let mut stats = HomStats::default();
    for &root in &plan.roots {
        let (c, s) = if threads <= 1 || host.n() < 2 {
            let mut e = Engine::new(host, plan, k);
            let c = e.node::<N>(root, 1, None)?;
            (c, e.stats)
        } else {
            run_split::<N>(host, plan, k, root, threads)?
        };
        merge(&mut stats, &s);
        if c.is_nil() {
            return Some((N::nil(), stats));
        }
        product = product.times(&c)?;
    }
    Some((product, stats))
}

fn merge(into: &mut HomStats, s: &HomStats) {
    into.max_depth = into.max_depth.max(s.max_depth);
    into.aux_bytes = into.aux_bytes.max(s.aux_bytes);
    into.node_calls += s.node_calls;
    into.extensions += s.extensions;
}

fn run_split<N: Count + Send>(
    host: &HostDag,
    plan: &Plan,
    k: usize,
    root: usize,
    threads: usize,
) -> Option<(N, HomStats)> {
    let n = host.n();
    let threads = threads.min(n);
    let chunk = n.div_ceil(threads);
    let parts: Vec<Option<(N, HomStats)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let range = (t * chunk, ((t + 1) * chunk).min(n));
                scope.spawn(move || {
                    let mut e = Engine::new(host, plan, k);
                    let c = e.node::<N>(root, 1, Some(range))?;
                    Some((c, e.stats))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut total = N::nil();
    let mut stats = HomStats::default();
    for part in parts {
        let (c, s) = part?;
        total = total.plus(&c)?;
        merge(&mut stats, &s);
    }
    stats.aux_bytes *= threads;
    Some((total, stats))
}

/// Number of arc-preserving maps `pattern -> host`, driven by `forest`.
pub fn count_hom_dag(host: &HostDag, pattern: &OrientedDag, forest: &EliminationForest) -> Result<BigUint> {
    count_hom_dag_with(host, pattern, forest, &HomOptions::default()).map(|r| r.0)
}

/// [`count_hom_dag`] with explicit options, also returning instrumentation counters.
pub fn count_hom_dag_with(
    host: &HostDag,
    pattern: &OrientedDag,
    forest: &EliminationForest,
    opts: &HomOptions,
) -> Result<(BigUint, HomStats)> {
    check_pattern_size(pattern.n())?;
    check_forest(pattern, forest).map_err(|v| Error::InvalidForest(v.to_string()))?;
    let plan = build_plan(pattern, forest, opts.policy);
    if let Some((c, s)) = run::<u128>(host, &plan, pattern.n(), opts.threads) {
        return Ok((c.into_big(), s));
    }
    let (c, s) = run::<BigUint>(host, &plan, pattern.n(), opts.threads).expect("unbounded arithmetic");
    Ok((c, s))
}

/// Every consistent extension of `sigma` mapping `v` to `u` and all unmapped
/// vertices of `reach(v)`.
pub fn extension_enumerate(
    host: &HostDag,
    pattern: &OrientedDag,
    v: usize,
    u: usize,
    sigma: &PartialHom,
) -> impl Iterator<Item = PartialHom> {
    let assigned = sigma.assigned_mask();
    let topo = pattern.topological_order();
    let steps = build_steps(pattern, &topo, v, assigned, CandidatePolicy::AllHostVertices, true);
    let mut current: Vec<u32> = sigma
        .map
        .iter()
        .map(|x| x.map_or(UNMAPPED, |h| h as u32))
        .collect();
    let mut out = Vec::new();
    if sigma.map[v].is_none() && u < host.n() {
        enumerate(host, &steps, 0, Some(u), &mut current, &mut out);
    }
    out.into_iter()
}

fn enumerate(
    host: &HostDag,
    steps: &[Step],
    i: usize,
    fixed: Option<usize>,
    sigma: &mut Vec<u32>,
    out: &mut Vec<PartialHom>,
) {
    let Some(step) = steps.get(i) else {
        out.push(PartialHom {
            map: sigma
                .iter()
                .map(|&x| (x != UNMAPPED).then_some(x as usize))
                .collect(),
        });
        return;
    };
    let candidates: Vec<usize> = match (fixed, step.source) {
        (Some(u), _) => vec![u],
        (None, Source::OutOf(p)) => host.out(sigma[p] as usize).iter().map(|&x| x as usize).collect(),
        (None, Source::InOf(q)) => host.inn(sigma[q] as usize).iter().map(|&x| x as usize).collect(),
        (None, Source::All) => (0..host.n()).collect(),
    };
    for u in candidates {
        if step.check_in.iter().all(|&p| host.has_arc(sigma[p] as usize, u))
            && step.check_out.iter().all(|&q| host.has_arc(u, sigma[q] as usize))
        {
            sigma[step.w] = u as u32;
            enumerate(host, steps, i + 1, None, sigma, out);
            sigma[step.w] = UNMAPPED;
        }
    }
}

/// Per-orientation detail of an undirected count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientationReport {
    pub arcs: Vec<(usize, usize)>,
    pub dtd: usize,
    pub forest: String,
    pub count: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomReport {
    pub count: BigUint,
    pub orientations: Vec<OrientationReport>,
    pub max_depth: usize,
    pub aux_bytes: usize,
}

/// Degeneracy orientation of a host graph.
pub fn orient_host(host: &Graph) -> Result<HostDag> {
    orient_by_order(host, &degeneracy_order(host))
}

/// `hom(pattern, host)`: every homomorphism pulls the host orientation back to exactly
/// one acyclic orientation of the pattern, so the undirected count is the sum of the
/// directed counts over those orientations.
pub fn count_hom(pattern: &Graph, host: &Graph) -> Result<BigUint> {
    Ok(count_hom_oriented(pattern, &orient_host(host)?, &HomOptions::default())?.count)
}

pub fn count_hom_oriented(pattern: &Graph, host: &HostDag, opts: &HomOptions) -> Result<HomReport> {
    check_pattern_size(pattern.n())?;
    let mut report = HomReport {
        count: BigUint::zero(),
        orientations: Vec::new(),
        max_depth: 0,
        aux_bytes: 0,
    };
    for d in acyclic_orientations(pattern)? {
        let (dtd, forest) = dtd_dag(&d);
        let (count, stats) = count_hom_dag_with(host, &d, &forest, opts)?;
        report.count += &count;
        report.max_depth = report.max_depth.max(stats.max_depth);
        report.aux_bytes = report.aux_bytes.max(stats.aux_bytes);
        report.orientations.push(OrientationReport {
            arcs: d.arcs().collect(),
            dtd,
            forest: forest.to_string(),
            count,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::host::{gen_degenerate, orient_by_permutation};

    fn small_host(g: &Graph) -> HostDag {
        orient_host(g).unwrap()
    }

    #[test]
    fn edge_pattern_counts_arcs() {
        let g = gen_degenerate(40, 3, 5);
        let h = small_host(&g);
        let p = OrientedDag::from_arcs(path(2), &[(0, 1)]).unwrap();
        let (_, f) = dtd_dag(&p);
        assert_eq!(count_hom_dag(&h, &p, &f).unwrap(), BigUint::from(g.m()));
    }

    #[test]
    fn transitive_triangle_in_k4() {
        let h = small_host(&complete(4));
        let p = OrientedDag::from_order(complete(3), &[0, 1, 2]).unwrap();
        let (_, f) = dtd_dag(&p);
        assert_eq!(count_hom_dag(&h, &p, &f).unwrap(), BigUint::from(4u32));
    }

    #[test]
    fn edgeless_pattern_counts_all_maps() {
        let h = small_host(&gen_degenerate(17, 2, 1));
        let p = OrientedDag::from_arcs(Graph::empty(2), &[]).unwrap();
        let (_, f) = dtd_dag(&p);
        assert_eq!(count_hom_dag(&h, &p, &f).unwrap(), BigUint::from(289u32));
    }

    #[test]
    fn invalid_forest_is_rejected() {
        let h = small_host(&complete(4));
        let p = OrientedDag::from_order(complete(3), &[0, 1, 2]).unwrap();
        let bad = EliminationForest::new(vec![ForestNode::leaf(1)]);
        assert!(matches!(count_hom_dag(&h, &p, &bad), Err(Error::InvalidForest(_))));
    }

    #[test]
    fn undirected_examples() {
        let g = gen_degenerate(30, 3, 9);
        assert_eq!(count_hom(&path(2), &g).unwrap(), BigUint::from(2 * g.m()));
        let sq: usize = (0..g.n()).map(|v| g.degree(v).pow(2)).sum();
        assert_eq!(count_hom(&path(3), &g).unwrap(), BigUint::from(sq));
        assert!(count_hom(&complete(3), &cycle(5)).unwrap().is_zero());
        assert_eq!(count_hom(&complete(3), &complete(4)).unwrap(), BigUint::from(24u32));
        assert_eq!(count_hom(&cycle(4), &path(2)).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn policies_and_threads_agree() {
        let g = gen_degenerate(60, 2, 3);
        let h = small_host(&g);
        for opts in [
            HomOptions { policy: CandidatePolicy::AllHostVertices, threads: 1 },
            HomOptions { policy: CandidatePolicy::MappedNeighbors, threads: 1 },
            HomOptions { policy: CandidatePolicy::MappedNeighbors, threads: 3 },
        ] {
            let r = count_hom_oriented(&cycle(6), &h, &opts).unwrap();
            let base = count_hom_oriented(&cycle(6), &h, &HomOptions::default()).unwrap();
            assert_eq!(r.count, base.count);
        }
    }

    #[test]
    fn depth_matches_forest() {
        let g = gen_degenerate(200, 2, 4);
        let h = small_host(&g);
        let p = OrientedDag::from_arcs(cycle(6), &[(0, 1), (2, 1), (2, 3), (4, 3), (4, 5), (0, 5)]).unwrap();
        let (depth, f) = dtd_dag(&p);
        assert_eq!(depth, 3);
        let (_, s) = count_hom_dag_with(&h, &p, &f, &HomOptions::default()).unwrap();
        assert_eq!(s.max_depth, 3);
    }

    #[test]
    fn big_counts_fall_back_to_arbitrary_precision() {
        let p = OrientedDag::from_arcs(Graph::empty(12), &[]).unwrap();
        let (_, f) = dtd_dag(&p);
        let h = small_host(&Graph::empty(2000));
        let expect = BigUint::from(2000u32).pow(12);
        assert!(expect > BigUint::from(u128::MAX));
        assert_eq!(count_hom_dag(&h, &p, &f).unwrap(), expect);
    }

    #[test]
    fn extension_examples() {
        let host = orient_by_permutation(&star(3), &[0, 1, 2, 3]).unwrap();
        let p = OrientedDag::from_arcs(path(2), &[(0, 1)]).unwrap();
        let ext: Vec<PartialHom> = extension_enumerate(&host, &p, 0, 0, &PartialHom::empty(2)).collect();
        assert_eq!(ext.len(), 3);
        assert!(ext.iter().all(|s| s.map[0] == Some(0) && s.is_consistent(&p, &host)));

        // reach already mapped
        let mut sigma = PartialHom::empty(2);
        sigma.map[1] = Some(2);
        assert_eq!(extension_enumerate(&host, &p, 0, 0, &sigma).count(), 1);
        sigma.map[1] = Some(0);
        assert_eq!(extension_enumerate(&host, &p, 0, 1, &sigma).count(), 0);

        // a sink image cannot extend
        assert_eq!(extension_enumerate(&host, &p, 0, 3, &PartialHom::empty(2)).count(), 0);
    }
}
