//! Large host graphs: degeneracy orientation in compressed adjacency form and a
//! seeded generator of degenerate hosts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dag::OrientedDag;
use crate::error::{Error, Result};
use crate::graph::{DegeneracyOrder, Graph};

/// An acyclically oriented host graph with sorted out- and in-neighbour lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HostDag {
    out_off: Vec<usize>,
    out: Vec<u32>,
    in_off: Vec<usize>,
    inn: Vec<u32>,
    max_out: usize,
}

impl HostDag {
    /// Builds the host from arcs; the caller guarantees acyclicity.
    fn from_arc_list(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        if n > u32::MAX as usize {
            return Err(Error::TooLarge {
                what: "host vertex count",
                limit: u32::MAX as usize,
                actual: n,
            });
        }
        let mut out_deg = vec![0usize; n];
        let mut in_deg = vec![0usize; n];
        for &(u, v) in arcs {
            out_deg[u] += 1;
            in_deg[v] += 1;
        }
        let out_off = offsets(&out_deg);
        let in_off = offsets(&in_deg);
        let mut out = vec![0u32; arcs.len()];
        let mut inn = vec![0u32; arcs.len()];
        let mut out_fill = out_off.clone();
        let mut in_fill = in_off.clone();
        for &(u, v) in arcs {
            out[out_fill[u]] = v as u32;
            out_fill[u] += 1;
            inn[in_fill[v]] = u as u32;
            in_fill[v] += 1;
        }
        for u in 0..n {
            out[out_off[u]..out_off[u + 1]].sort_unstable();
            inn[in_off[u]..in_off[u + 1]].sort_unstable();
        }
        Ok(HostDag {
            max_out: out_deg.iter().copied().max().unwrap_or(0),
            out_off,
            out,
            in_off,
            inn,
        })
    }

    /// Copies a small oriented graph.
    pub fn from_dag(d: &OrientedDag) -> Self {
        let arcs: Vec<(usize, usize)> = d.arcs().collect();
        Self::from_arc_list(d.n(), &arcs).expect("small graph")
    }

    pub fn n(&self) -> usize {
        self.out_off.len() - 1
    }

    pub fn arc_count(&self) -> usize {
        self.out.len()
    }

    /// Largest out-degree.
    pub fn max_out_degree(&self) -> usize {
        self.max_out
    }

    pub fn out(&self, u: usize) -> &[u32] {
        &self.out[self.out_off[u]..self.out_off[u + 1]]
    }

    pub fn inn(&self, u: usize) -> &[u32] {
        &self.inn[self.in_off[u]..self.in_off[u + 1]]
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out(u).binary_search(&(v as u32)).is_ok()
    }

    pub fn sources(&self) -> Vec<usize> {
        (0..self.n()).filter(|&u| self.inn(u).is_empty()).collect()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| self.out(u).iter().map(move |&v| (u, v as usize)))
    }

    /// Kahn's algorithm; `None` when a directed cycle exists.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.n();
        let mut indeg: Vec<usize> = (0..n).map(|u| self.inn(u).len()).collect();
        let mut stack: Vec<usize> = (0..n).rev().filter(|&u| indeg[u] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(u) = stack.pop() {
            order.push(u);
            for &v in self.out(u) {
                indeg[v as usize] -= 1;
                if indeg[v as usize] == 0 {
                    stack.push(v as usize);
                }
            }
        }
        (order.len() == n).then_some(order)
    }
}

fn offsets(deg: &[usize]) -> Vec<usize> {
    let mut off = Vec::with_capacity(deg.len() + 1);
    off.push(0);
    for &d in deg {
        off.push(off.last().unwrap() + d);
    }
    off
}

/// Directs every edge from the endpoint earlier in `ord` to the later one.
pub fn orient_by_order(g: &Graph, ord: &DegeneracyOrder) -> Result<HostDag> {
    orient_by_permutation(g, &ord.order)
}

pub fn orient_by_permutation(g: &Graph, order: &[usize]) -> Result<HostDag> {
    let n = g.n();
    if order.len() != n {
        return Err(Error::NotPermutation);
    }
    let mut rank = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || rank[v] != usize::MAX {
            return Err(Error::NotPermutation);
        }
        rank[v] = i;
    }
    let arcs: Vec<(usize, usize)> = g
        .edges()
        .map(|(u, v)| if rank[u] < rank[v] { (u, v) } else { (v, u) })
        .collect();
    let host = HostDag::from_arc_list(n, &arcs)?;
    if host.topological_order().is_none() {
        return Err(Error::Cyclic);
    }
    Ok(host)
}

/// Random `d`-degenerate graph: vertex `i` joins `min(d, i)` distinct earlier
/// vertices drawn uniformly, redrawing duplicates.
pub fn gen_degenerate(n: usize, d: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(n.saturating_mul(d));
    let mut picked = Vec::with_capacity(d);
    for i in 1..n {
        picked.clear();
        let want = d.min(i);
        while picked.len() < want {
            let j = rng.gen_range(0..i);
            if !picked.contains(&j) {
                picked.push(j);
            }
        }
        edges.extend(picked.iter().map(|&j| (j, i)));
    }
    Graph::from_edges(n, &edges).expect("distinct earlier neighbours")
}
