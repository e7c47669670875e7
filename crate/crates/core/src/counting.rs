//! Subgraph and induced-subgraph counts as rational combinations of homomorphism
//! counts.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{ensure_size, Error, Result};
use crate::graph::{bits, Graph};
use crate::hom::{count_hom_oriented, orient_host, HomOptions, HomReport};
use crate::host::HostDag;
use crate::iso::{automorphism_count, canonical_label, graph_from_label};

pub const SPASM_VERTEX_LIMIT: usize = 9;
pub const IND_VERTEX_LIMIT: usize = 8;
/// Supergraph enumeration visits `2^non_edges` graphs.
pub const IND_NON_EDGE_LIMIT: usize = 20;

/// A rational combination of homomorphism counts, one term per isomorphism class.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Expansion {
    pub terms: Vec<(Graph, BigRational)>,
}

impl Expansion {
    fn from_map(map: BTreeMap<Vec<u8>, BigRational>) -> Self {
        Expansion {
            terms: map
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(label, c)| (graph_from_label(&label), c))
                .collect(),
        }
    }

    /// Evaluates the combination on a host; the result must be a nonnegative integer.
    pub fn evaluate(&self, host: &HostDag, opts: &HomOptions) -> Result<BigUint> {
        self.evaluate_detailed(host, opts).map(|r| r.0)
    }

    /// [`Expansion::evaluate`] plus the homomorphism report of every term.
    pub fn evaluate_detailed(&self, host: &HostDag, opts: &HomOptions) -> Result<(BigUint, Vec<HomReport>)> {
        let mut total = BigRational::zero();
        let mut reports = Vec::with_capacity(self.terms.len());
        for (g, c) in &self.terms {
            let r = count_hom_oriented(g, host, opts)?;
            total += c * BigRational::from_integer(BigInt::from(r.count.clone()));
            reports.push(r);
        }
        if !total.is_integer() || total.is_negative() {
            return Err(Error::NonInteger(total.to_string()));
        }
        Ok((total.to_integer().to_biguint().expect("nonnegative"), reports))
    }
}

impl fmt::Display for Expansion {
    /// One `numerator/denominator <graph>` line per term, the graph written as its
    /// vertex count and canonical edge list.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (g, c) in &self.terms {
            write!(f, "{}/{} n={}", c.numer(), c.denom(), g.n())?;
            for (u, v) in g.edges() {
                write!(f, " {u}-{v}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Calls `visit(blocks)` for every partition of the vertices into independent sets.
fn for_each_independent_partition(masks: &[u64], visit: &mut dyn FnMut(&[u64])) {
    fn rec(v: usize, masks: &[u64], blocks: &mut Vec<u64>, visit: &mut dyn FnMut(&[u64])) {
        if v == masks.len() {
            visit(blocks);
            return;
        }
        for b in 0..blocks.len() {
            if blocks[b] & masks[v] == 0 {
                blocks[b] |= 1 << v;
                rec(v + 1, masks, blocks, visit);
                blocks[b] &= !(1 << v);
            }
        }
        blocks.push(1 << v);
        rec(v + 1, masks, blocks, visit);
        blocks.pop();
    }
    rec(0, masks, &mut Vec::with_capacity(masks.len()), visit);
}

fn quotient(masks: &[u64], blocks: &[u64]) -> Graph {
    let block_of = |v: usize| blocks.iter().position(|b| b >> v & 1 == 1).unwrap();
    let mut q = vec![0u64; blocks.len()];
    for (i, &b) in blocks.iter().enumerate() {
        let nb = bits(b).fold(0u64, |m, v| m | masks[v]);
        for v in bits(nb) {
            q[i] |= 1 << block_of(v);
        }
    }
    Graph::from_masks(&q)
}

/// `prod over blocks of (-1)^(|B|-1) (|B|-1)!`
fn mobius(blocks: &[u64]) -> BigInt {
    blocks.iter().fold(BigInt::one(), |acc, b| {
        let s = b.count_ones() as u64;
        let f: BigInt = (1..s).map(BigInt::from).product();
        if s % 2 == 0 {
            -acc * f
        } else {
            acc * f
        }
    })
}

/// All graphs obtained by merging independent sets, `h` included, one per class.
pub fn spasm(h: &Graph) -> Result<Vec<Graph>> {
    ensure_size("spasm pattern vertex count", h.n(), SPASM_VERTEX_LIMIT)?;
    let mut seen = BTreeMap::new();
    let mut err = None;
    for_each_independent_partition(h.masks(), &mut |blocks| {
        if err.is_some() {
            return;
        }
        match canonical_label(&quotient(h.masks(), blocks)) {
            Ok(l) => {
                seen.insert(l, ());
            }
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(seen.into_keys().map(|l| graph_from_label(&l)).collect())
}

/// Injective homomorphisms as a combination of homomorphisms, keyed by canonical label.
fn injective_terms(h: &Graph, scale: &BigRational, into: &mut BTreeMap<Vec<u8>, BigRational>) -> Result<()> {
    let mut err = None;
    for_each_independent_partition(h.masks(), &mut |blocks| {
        if err.is_some() {
            return;
        }
        match canonical_label(&quotient(h.masks(), blocks)) {
            Ok(l) => {
                let c = scale * BigRational::from_integer(mobius(blocks));
                *into.entry(l).or_insert_with(BigRational::zero) += c;
            }
            Err(e) => err = Some(e),
        }
    });
    err.map_or(Ok(()), Err)
}

fn aut_rational(h: &Graph) -> Result<BigRational> {
    Ok(BigRational::from_integer(BigInt::from(automorphism_count(h)?)))
}

/// `sub(h, G) = sum over partitions p into independent sets of mu(p) hom(h/p, G) / aut(h)`.
pub fn sub_expansion(h: &Graph) -> Result<Expansion> {
    ensure_size("subgraph pattern vertex count", h.n(), SPASM_VERTEX_LIMIT)?;
    let scale = aut_rational(h)?.recip();
    let mut map = BTreeMap::new();
    injective_terms(h, &scale, &mut map)?;
    Ok(Expansion::from_map(map))
}

pub fn count_sub(h: &Graph, g: &Graph) -> Result<BigUint> {
    sub_expansion(h)?.evaluate(&orient_host(g)?, &HomOptions::default())
}

/// `ind(h, G) = sum over supergraphs h' of h on V(h) of (-1)^(e(h') - e(h)) inj(h', G) / aut(h)`,
/// with each `inj` expanded into homomorphisms.
pub fn ind_expansion(h: &Graph) -> Result<Expansion> {
    let k = h.n();
    ensure_size("induced pattern vertex count", k, IND_VERTEX_LIMIT)?;
    let non_edges: Vec<(usize, usize)> = (0..k)
        .flat_map(|u| (u + 1..k).map(move |v| (u, v)))
        .filter(|&(u, v)| !h.has_edge(u, v))
        .collect();
    ensure_size("induced pattern non-edge count", non_edges.len(), IND_NON_EDGE_LIMIT)?;

    // signed number of labelled supergraphs per isomorphism class
    let mut classes: BTreeMap<Vec<u8>, i64> = BTreeMap::new();
    for added in 0u64..1 << non_edges.len() {
        let mut masks = h.masks().to_vec();
        for i in bits(added) {
            let (u, v) = non_edges[i];
            masks[u] |= 1 << v;
            masks[v] |= 1 << u;
        }
        let sign = if added.count_ones() % 2 == 0 { 1 } else { -1 };
        *classes.entry(canonical_label(&Graph::from_masks(&masks))?).or_insert(0) += sign;
    }

    let aut_h = aut_rational(h)?;
    let mut map = BTreeMap::new();
    for (label, signed) in classes {
        if signed == 0 {
            continue;
        }
        let scale = BigRational::from_integer(BigInt::from(signed)) / &aut_h;
        injective_terms(&graph_from_label(&label), &scale, &mut map)?;
    }
    Ok(Expansion::from_map(map))
}

pub fn count_ind(h: &Graph, g: &Graph) -> Result<BigUint> {
    ind_expansion(h)?.evaluate(&orient_host(g)?, &HomOptions::default())
}
