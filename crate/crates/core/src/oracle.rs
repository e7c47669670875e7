//! Brute-force reference counts.
//!
//! Maps are enumerated vertex by vertex and abandoned as soon as an already placed
//! edge fails, which visits every valid map exactly once.

use num_bigint::BigUint;

use crate::dag::OrientedDag;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::host::HostDag;
use crate::iso::{automorphism_count, is_isomorphic};

/// Upper bound on the number of candidate maps or subsets an oracle will consider.
pub const ORACLE_GUARD: u128 = 1_000_000_000;

fn guard(candidates: Option<u128>, what: &str) -> Result<()> {
    match candidates {
        Some(c) if c <= ORACLE_GUARD => Ok(()),
        Some(c) => Err(Error::Guard(format!("{what}: {c}"))),
        None => Err(Error::Guard(format!("{what}: more than 2^128"))),
    }
}

fn power(n: usize, k: usize) -> Option<u128> {
    (n as u128).checked_pow(k as u32)
}

fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let mut r: u128 = 1;
    for i in 0..k as u128 {
        r = r.checked_mul(n as u128 - i)? / (i + 1);
    }
    Some(r)
}

fn falling(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    (0..k as u128).try_fold(1u128, |r, i| r.checked_mul(n as u128 - i))
}

/// Counts maps `V(pattern) -> V(host)` for which `ok(v, image, partial)` holds at
/// every step.
fn count_maps(
    k: usize,
    n: usize,
    injective: bool,
    ok: &dyn Fn(usize, usize, &[usize]) -> bool,
) -> u128 {
    fn rec(
        v: usize,
        k: usize,
        n: usize,
        injective: bool,
        map: &mut Vec<usize>,
        ok: &dyn Fn(usize, usize, &[usize]) -> bool,
    ) -> u128 {
        if v == k {
            return 1;
        }
        let mut total = 0;
        for x in 0..n {
            if injective && map.contains(&x) {
                continue;
            }
            if ok(v, x, map) {
                map.push(x);
                total += rec(v + 1, k, n, injective, map, ok);
                map.pop();
            }
        }
        total
    }
    rec(0, k, n, injective, &mut Vec::with_capacity(k), ok)
}

fn undirected_ok<'a>(pattern: &'a Graph, host: &'a Graph) -> impl Fn(usize, usize, &[usize]) -> bool + 'a {
    move |v, x, map| {
        pattern
            .neighbors(v)
            .iter()
            .filter(|&&w| w < v)
            .all(|&w| host.has_edge(map[w], x))
    }
}

/// Number of homomorphisms `pattern -> host`.
pub fn brute_hom(pattern: &Graph, host: &Graph) -> Result<BigUint> {
    guard(power(host.n(), pattern.n()), "host^pattern maps")?;
    Ok(count_maps(pattern.n(), host.n(), false, &undirected_ok(pattern, host)).into())
}

/// Number of injective homomorphisms `pattern -> host`.
pub fn brute_inj(pattern: &Graph, host: &Graph) -> Result<BigUint> {
    guard(falling(host.n(), pattern.n()), "injective maps")?;
    Ok(count_maps(pattern.n(), host.n(), true, &undirected_ok(pattern, host)).into())
}

/// Number of arc-preserving maps between oriented graphs.
pub fn brute_hom_dag(pattern: &OrientedDag, host: &HostDag) -> Result<BigUint> {
    guard(power(host.n(), pattern.n()), "host^pattern maps")?;
    let ok = |v: usize, x: usize, map: &[usize]| {
        (0..v).all(|w| {
            (!pattern.has_arc(w, v) || host.has_arc(map[w], x))
                && (!pattern.has_arc(v, w) || host.has_arc(x, map[w]))
        })
    };
    Ok(count_maps(pattern.n(), host.n(), false, &ok).into())
}

/// Number of subgraphs of `host` isomorphic to `pattern`: injective homomorphisms
/// divided by automorphisms.
pub fn brute_sub(pattern: &Graph, host: &Graph) -> Result<BigUint> {
    let candidates = binomial(host.n(), pattern.n())
        .and_then(|c| c.checked_mul(falling(pattern.n(), pattern.n())?));
    guard(candidates, "subsets times orderings")?;
    let inj = count_maps(pattern.n(), host.n(), true, &undirected_ok(pattern, host));
    let aut = automorphism_count(pattern)?;
    Ok((inj / aut).into())
}

/// Number of vertex subsets of `host` inducing a copy of `pattern`.
pub fn brute_ind(pattern: &Graph, host: &Graph) -> Result<BigUint> {
    let k = pattern.n();
    guard(binomial(host.n(), k), "vertex subsets")?;
    let target_m = pattern.m();
    let mut count: u128 = 0;
    let mut subset = Vec::with_capacity(k);
    fn rec(
        from: usize,
        k: usize,
        host: &Graph,
        pattern: &Graph,
        target_m: usize,
        subset: &mut Vec<usize>,
        count: &mut u128,
    ) -> Result<()> {
        if subset.len() == k {
            let g = host.induced(subset);
            if g.m() == target_m && is_isomorphic(&g, pattern)? {
                *count += 1;
            }
            return Ok(());
        }
        for v in from..host.n() {
            if host.n() - v < k - subset.len() {
                break;
            }
            subset.push(v);
            rec(v + 1, k, host, pattern, target_m, subset, count)?;
            subset.pop();
        }
        Ok(())
    }
    rec(0, k, host, pattern, target_m, &mut subset, &mut count)?;
    Ok(count.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn hom_examples() {
        assert_eq!(brute_hom(&complete(2), &complete(3)).unwrap(), big(6));
        assert_eq!(brute_hom(&Graph::empty(1), &cycle(7)).unwrap(), big(7));
        assert_eq!(brute_hom(&cycle(4), &complete(2)).unwrap(), big(2));
        assert!(matches!(brute_hom(&path(10), &Graph::empty(10)), Err(Error::Guard(_))));
    }

    #[test]
    fn hom_dag_examples() {
        let p = OrientedDag::from_arcs(path(2), &[(0, 1)]).unwrap();
        let dipath = OrientedDag::from_arcs(path(4), &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(brute_hom_dag(&p, &HostDag::from_dag(&dipath)).unwrap(), big(3));
        let e = OrientedDag::from_arcs(Graph::empty(2), &[]).unwrap();
        assert_eq!(brute_hom_dag(&e, &HostDag::from_dag(&dipath)).unwrap(), big(16));
        // a pattern arc cannot land on an edge whose only orientation is reversed
        let two = OrientedDag::from_arcs(path(3), &[(0, 1), (1, 2)]).unwrap();
        let inward = OrientedDag::from_arcs(path(3), &[(0, 1), (2, 1)]).unwrap();
        assert_eq!(brute_hom_dag(&two, &HostDag::from_dag(&inward)).unwrap(), big(0));
    }

    #[test]
    fn sub_and_ind_examples() {
        let g = crate::host::gen_degenerate(12, 2, 3);
        assert_eq!(brute_sub(&complete(2), &g).unwrap(), big(g.m() as u64));
        assert_eq!(brute_sub(&path(3), &complete(4)).unwrap(), big(12));
        assert_eq!(brute_sub(&cycle(4), &complete(4)).unwrap(), big(3));
        assert_eq!(brute_ind(&complete(3), &complete(4)).unwrap(), big(4));
        assert_eq!(brute_ind(&path(3), &cycle(5)).unwrap(), big(5));
        assert_eq!(brute_ind(&Graph::empty(3), &complete(4)).unwrap(), big(0));
    }

    #[test]
    fn injective_and_sub_agree() {
        let g = crate::host::gen_degenerate(10, 3, 8);
        for h in [path(3), cycle(4), star(3), complete(3)] {
            let inj = brute_inj(&h, &g).unwrap();
            let sub = brute_sub(&h, &g).unwrap();
            assert_eq!(sub * automorphism_count(&h).unwrap(), inj.clone());
            assert!(brute_hom(&h, &g).unwrap() >= inj);
        }
    }
}
