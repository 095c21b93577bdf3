use std::collections::BTreeMap;

use super::{cut_rank, DecompositionTree, Graph, LinearOrder, TreeBuilder};
use crate::error::{Error, Result};
use crate::gflow::{verify_gflow, ExtendedGFlow, OpenGraph};
use crate::simplify::stray_clifford;
use crate::zx::{ZxDiagram, V};

/// Linear decomposition from an extended gflow: vertices sorted by layer,
/// ties by index.
pub fn rw_flow(og: &OpenGraph, f: &ExtendedGFlow) -> Result<LinearOrder> {
    verify_gflow(og, f).map_err(|v| Error::InvalidGFlow(v.to_string()))?;
    let mut order: Vec<usize> = (0..og.len()).collect();
    order.sort_by_key(|&v| (f.layer[v], v));
    Ok(LinearOrder::new(&Graph::from_open_graph(og), order))
}

/// Diagram handles in flow order, with each gadget leaf placed right after
/// its body.
pub fn flow_order_ids(og: &OpenGraph, p: &LinearOrder) -> Vec<V> {
    let mut out = Vec::with_capacity(og.len() + og.leaves.len());
    for &i in &p.order {
        out.push(og.ids[i]);
        for &(leaf, body) in &og.leaves {
            if body == i {
                out.push(leaf);
            }
        }
    }
    out
}

/// Greedy linear decomposition restricted to pivot columns.
pub fn rw_greedy_linear(g: &Graph) -> LinearOrder {
    rw_greedy_linear_with(g, true)
}

/// Greedy linear decomposition. With `pivots_only` unset every remaining
/// vertex is a candidate at each step.
pub fn rw_greedy_linear_with(g: &Graph, pivots_only: bool) -> LinearOrder {
    let n = g.len();
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut ranks = Vec::with_capacity(n.saturating_sub(1));
    while order.len() < n {
        let (m, rest) = g.biadjacency(&order);
        let pick = if m.is_zero() {
            rest[0]
        } else {
            let cands: Vec<usize> = if pivots_only {
                m.pivot_cols().into_iter().map(|c| rest[c]).collect()
            } else {
                rest
            };
            let mut best = None;
            for u in cands {
                order.push(u);
                let r = cut_rank(g, &order);
                order.pop();
                if best.is_none_or(|(br, bu)| (r, u) < (br, bu)) {
                    best = Some((r, u));
                }
            }
            best.unwrap().1
        };
        order.push(pick);
        if order.len() < n {
            ranks.push(cut_rank(g, &order));
        }
    }
    LinearOrder { order, ranks }
}

/// Bottom-up greedy decomposition. Roots merge when one holds a pivot
/// column of the other's cut; among such pairs the one with the smallest
/// merged cut-rank wins, ties going to the lexicographically smallest pair
/// of node ids.
pub fn rw_greedy_b2t(g: &Graph) -> Result<DecompositionTree> {
    let n = g.len();
    if n < 2 {
        return Err(Error::TooSmall);
    }
    let mut b = TreeBuilder::new(n);
    let mut sets: BTreeMap<usize, Vec<usize>> = (0..n).map(|v| (v, vec![v])).collect();
    let mut owner: Vec<usize> = (0..n).collect();
    let pivots_of = |s: &[usize]| -> Vec<usize> {
        let (m, rest) = g.biadjacency(s);
        m.pivot_cols().into_iter().map(|c| rest[c]).collect()
    };
    let mut pivots: BTreeMap<usize, Vec<usize>> =
        sets.iter().map(|(&r, s)| (r, pivots_of(s))).collect();
    let merged_rank = |sets: &BTreeMap<usize, Vec<usize>>, i: usize, j: usize| {
        let mut u = sets[&i].clone();
        u.extend_from_slice(&sets[&j]);
        cut_rank(g, &u)
    };
    let mut cost: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (&j, piv) in &pivots {
        for &p in piv {
            let i = owner[p];
            let key = (i.min(j), i.max(j));
            cost.entry(key)
                .or_insert_with(|| merged_rank(&sets, key.0, key.1));
        }
    }
    for _ in 0..n - 1 {
        let pair = cost
            .iter()
            .min_by_key(|&(&k, &c)| (c, k))
            .map(|(&k, _)| k)
            .unwrap_or_else(|| {
                let mut it = sets.keys();
                (*it.next().unwrap(), *it.next().unwrap())
            });
        let (i, j) = pair;
        let k = b.merge(i, j);
        let mut s = sets.remove(&i).unwrap();
        s.extend(sets.remove(&j).unwrap());
        s.sort_unstable();
        for &v in &s {
            owner[v] = k;
        }
        pivots.remove(&i);
        pivots.remove(&j);
        cost.retain(|&(a, c), _| a != i && a != j && c != i && c != j);
        let pk = pivots_of(&s);
        sets.insert(k, s);
        let mut partners: Vec<usize> = pk.iter().map(|&p| owner[p]).collect();
        for (&r, piv) in &pivots {
            if piv.iter().any(|&p| owner[p] == k) {
                partners.push(r);
            }
        }
        partners.sort_unstable();
        partners.dedup();
        for r in partners {
            let key = (r.min(k), r.max(k));
            cost.insert(key, merged_rank(&sets, key.0, key.1));
        }
        pivots.insert(k, pk);
    }
    Ok(b.finish(g))
}

/// Tree over a closed reduced diagram in which every non-Clifford spider
/// and every phase gadget (body plus leaves) is one unit; units are laid
/// out along a caterpillar in handle order. The tree refers to
/// `Graph::from_diagram(d)`.
pub fn rw_tcount(d: &ZxDiagram) -> Result<DecompositionTree> {
    if !d.is_closed() {
        return Err(Error::NotClosed);
    }
    if let Some(v) = stray_clifford(d) {
        return Err(Error::NotReduced(v));
    }
    let g = Graph::from_diagram(d);
    let index: BTreeMap<V, usize> = g.ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let gadgets = d.phase_gadgets();
    let mut units: BTreeMap<V, Vec<usize>> = BTreeMap::new();
    for &v in &g.ids {
        if gadgets.iter().any(|&(l, _)| l == v) {
            continue;
        }
        let mut members = vec![index[&v]];
        for &(l, body) in &gadgets {
            if body == v {
                members.push(index[&l]);
            }
        }
        units.insert(v, members);
    }
    let n = g.len();
    if n < 2 {
        return Ok(TreeBuilder::new(n).finish(&g));
    }
    let mut b = TreeBuilder::new(n);
    let mut roots = Vec::new();
    for members in units.values() {
        let mut acc = members[0];
        for &m in &members[1..] {
            acc = b.merge(acc, m);
        }
        roots.push(acc);
    }
    let mut acc = roots[0];
    for &r in &roots[1..] {
        acc = b.merge(acc, r);
    }
    Ok(b.finish(&g))
}

/// Number of units `rw_tcount` lays out for `d`.
pub fn tcount_units(d: &ZxDiagram) -> usize {
    let gadgets = d.phase_gadgets();
    d.spiders()
        .filter(|&v| !gadgets.iter().any(|&(l, _)| l == v))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rankdecomp::verify_decomposition;

    fn complete(n: usize) -> Graph {
        let mut e = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                e.push((a, b));
            }
        }
        Graph::new(n, &e)
    }

    #[test]
    fn greedy_linear_small_cases() {
        let e = Graph::new(4, &[]);
        let p = rw_greedy_linear(&e);
        assert_eq!(p.order, vec![0, 1, 2, 3]);
        assert_eq!(p.width(), 0);
        let star = Graph::new(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert_eq!(rw_greedy_linear(&star).width(), 1);
    }

    #[test]
    fn b2t_small_cases() {
        let g = Graph::new(2, &[]);
        let t = rw_greedy_b2t(&g).unwrap();
        assert_eq!(t.width(), 0);
        assert_eq!(verify_decomposition(&g, &t), Ok(()));
        let k = complete(4);
        let t = rw_greedy_b2t(&k).unwrap();
        assert!(t.ranks.iter().all(|&r| r == 1));
        assert_eq!(verify_decomposition(&k, &t), Ok(()));
        assert_eq!(rw_greedy_b2t(&Graph::new(1, &[])), Err(Error::TooSmall));
    }
}
