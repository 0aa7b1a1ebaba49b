//! Exhaustive ground truth for small instances.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::digraph::Digraph;
use crate::error::{Error, Result};

/// Largest order accepted by the exhaustive set-to-set searches.
pub const BRUTE_FORCE_MAX_N: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleBudget {
    pub node_limit: u64,
    pub time_limit: Duration,
}

impl OracleBudget {
    pub fn new(node_limit: u64, time_limit: Duration) -> Result<Self> {
        if node_limit == 0 || time_limit.is_zero() {
            return Err(Error::InvalidParameter("oracle limits must be positive".into()));
        }
        Ok(OracleBudget { node_limit, time_limit })
    }
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            node_limit: 50_000_000,
            time_limit: Duration::from_secs(60),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum LinkageVerdict {
    Yes { paths: Vec<Vec<usize>> },
    No,
    /// The budget ran out before the search space was exhausted.
    Unknown { nodes: u64 },
}

struct Search<'a> {
    d: &'a Digraph,
    pairs: &'a [(usize, usize)],
    paths: Vec<Vec<usize>>,
    used: BitSet,
    nodes: u64,
    budget: OracleBudget,
    start: Instant,
    out_of_budget: bool,
}

impl Search<'_> {
    /// Every incomplete pair still has a route through unused vertices.
    fn all_reachable(&self) -> bool {
        (0..self.pairs.len()).all(|j| {
            let head = *self.paths[j].last().unwrap();
            let target = self.pairs[j].1;
            head == target || self.reaches(head, target)
        })
    }

    fn reaches(&self, from: usize, to: usize) -> bool {
        let mut seen = BitSet::new(self.d.n());
        seen.insert(from);
        let mut frontier = vec![from];
        while let Some(v) = frontier.pop() {
            if self.d.has_arc(v, to) {
                return true;
            }
            let mut next = self.d.out_row(v).clone();
            next.difference_with(&self.used);
            next.difference_with(&seen);
            for w in next.iter() {
                seen.insert(w);
                frontier.push(w);
            }
        }
        false
    }

    fn run(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget.node_limit
            || (self.nodes.is_multiple_of(4096) && self.start.elapsed() > self.budget.time_limit)
        {
            self.out_of_budget = true;
            return false;
        }
        let Some(i) = (0..self.pairs.len()).find(|&j| *self.paths[j].last().unwrap() != self.pairs[j].1) else {
            return true;
        };
        let head = *self.paths[i].last().unwrap();
        let target = self.pairs[i].1;
        let mut cands: Vec<usize> = Vec::new();
        if self.d.has_arc(head, target) {
            cands.push(target);
        }
        let mut free = self.d.out_row(head).clone();
        free.difference_with(&self.used);
        cands.extend(free.iter());
        cands.sort_unstable();
        for w in cands {
            let interior = w != target;
            if interior {
                self.used.insert(w);
            }
            self.paths[i].push(w);
            if self.all_reachable() && self.run() {
                return true;
            }
            self.paths[i].pop();
            if interior {
                self.used.remove(w);
            }
            if self.out_of_budget {
                return false;
            }
        }
        false
    }
}

/// Decides whether `k` vertex-disjoint `(x_i, y_i)`-paths exist.
///
/// Pairs that share a terminal are accepted and answered `No`, since
/// vertex-disjoint paths cannot share an end.
pub fn exists_disjoint_linkage(d: &Digraph, pairs: &[(usize, usize)], budget: OracleBudget) -> Result<LinkageVerdict> {
    if pairs.is_empty() {
        return Err(Error::InvalidParameter("at least one terminal pair is required".into()));
    }
    let mut used = BitSet::new(d.n());
    let mut shared = false;
    for &(x, y) in pairs {
        d.check_vertex(x)?;
        d.check_vertex(y)?;
        if x == y {
            return Err(Error::EqualEndpoints(x));
        }
        shared |= !used.insert(x);
        shared |= !used.insert(y);
    }
    if shared {
        return Ok(LinkageVerdict::No);
    }
    let mut s = Search {
        d,
        pairs,
        paths: pairs.iter().map(|&(x, _)| vec![x]).collect(),
        used,
        nodes: 0,
        budget,
        start: Instant::now(),
        out_of_budget: false,
    };
    if !s.all_reachable() {
        return Ok(LinkageVerdict::No);
    }
    Ok(if s.run() {
        LinkageVerdict::Yes { paths: s.paths }
    } else if s.out_of_budget {
        LinkageVerdict::Unknown { nodes: s.nodes }
    } else {
        LinkageVerdict::No
    })
}

fn small_sets(d: &Digraph, sources: &[usize], sinks: &[usize]) -> Result<(u32, u32)> {
    if d.n() > BRUTE_FORCE_MAX_N {
        return Err(Error::InvalidParameter(format!(
            "exhaustive search is limited to n <= {BRUTE_FORCE_MAX_N}, got {}",
            d.n()
        )));
    }
    let mut s = 0u32;
    let mut t = 0u32;
    for &v in sources {
        d.check_vertex(v)?;
        s |= 1 << v;
    }
    for &v in sinks {
        d.check_vertex(v)?;
        t |= 1 << v;
    }
    Ok((s, t))
}

/// Maximum number of vertex-disjoint paths from `sources` to `sinks` by
/// exhaustive search (a shared vertex counts as a one-vertex path).
pub fn max_disjoint_st_paths_bruteforce(d: &Digraph, sources: &[usize], sinks: &[usize]) -> Result<usize> {
    let (s, t) = small_sets(d, sources, sinks)?;
    let n = d.n();
    let adj: Vec<u32> = (0..n)
        .map(|v| (0..n).filter(|&w| d.has_arc(v, w)).fold(0u32, |m, w| m | (1 << w)))
        .collect();
    let src: Vec<usize> = (0..n).filter(|v| s >> v & 1 == 1).collect();
    let mut memo = HashMap::new();
    Ok(best_from(0, 0, &src, t, &adj, &mut memo))
}

fn best_from(i: usize, used: u32, src: &[usize], sinks: u32, adj: &[u32], memo: &mut HashMap<(usize, u32), usize>) -> usize {
    if i == src.len() {
        return 0;
    }
    if let Some(&v) = memo.get(&(i, used)) {
        return v;
    }
    let mut best = best_from(i + 1, used, src, sinks, adj, memo);
    let s = src[i];
    if used >> s & 1 == 0 {
        let mut ends = Vec::new();
        collect_path_masks(s, 1 << s, used, sinks, adj, &mut ends);
        ends.sort_unstable();
        ends.dedup();
        for mask in ends {
            best = best.max(1 + best_from(i + 1, used | mask, src, sinks, adj, memo));
        }
    }
    memo.insert((i, used), best);
    best
}

/// Vertex masks of all simple paths from the current head that stop at
/// their first sink.
fn collect_path_masks(head: usize, path: u32, used: u32, sinks: u32, adj: &[u32], out: &mut Vec<u32>) {
    if sinks >> head & 1 == 1 {
        out.push(path);
        return;
    }
    let mut next = adj[head] & !used & !path;
    while next != 0 {
        let w = next.trailing_zeros() as usize;
        next &= next - 1;
        collect_path_masks(w, path | 1 << w, used, sinks, adj, out);
    }
}

/// Smallest vertex set meeting every path from `sources` to `sinks`, by
/// enumerating subsets in order of size.
pub fn min_separator_bruteforce(d: &Digraph, sources: &[usize], sinks: &[usize]) -> Result<Vec<usize>> {
    let (s, t) = small_sets(d, sources, sinks)?;
    let n = d.n();
    let adj: Vec<u32> = (0..n)
        .map(|v| (0..n).filter(|&w| d.has_arc(v, w)).fold(0u32, |m, w| m | (1 << w)))
        .collect();
    let mut subsets: Vec<u32> = (0..1u32 << n).collect();
    subsets.sort_by_key(|m| (m.count_ones(), *m));
    for sep in subsets {
        let mut reach = s & !sep;
        loop {
            let mut grown = reach;
            let mut it = reach;
            while it != 0 {
                let v = it.trailing_zeros() as usize;
                it &= it - 1;
                grown |= adj[v] & !sep;
            }
            if grown == reach {
                break;
            }
            reach = grown;
        }
        if reach & t == 0 {
            return Ok((0..n).filter(|v| sep >> v & 1 == 1).collect());
        }
    }
    unreachable!("the full vertex set separates everything")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::verify_linkage;

    #[test]
    fn complete_digraph_links_directly() {
        let d = Digraph::complete(6);
        let pairs = [(0, 1), (2, 3), (4, 5)];
        match exists_disjoint_linkage(&d, &pairs, OracleBudget::default()).unwrap() {
            LinkageVerdict::Yes { paths } => {
                assert!(paths.iter().all(|p| p.len() == 2));
                verify_linkage(&d, &pairs, &paths).unwrap();
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn four_cycle_is_not_2_linked() {
        let d = Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        for pairs in [[(0, 2), (2, 0)], [(0, 2), (1, 3)]] {
            assert_eq!(exists_disjoint_linkage(&d, &pairs, OracleBudget::default()).unwrap(), LinkageVerdict::No);
        }
        assert!(exists_disjoint_linkage(&d, &[(1, 1)], OracleBudget::default()).is_err());
        assert!(exists_disjoint_linkage(&d, &[], OracleBudget::default()).is_err());
    }

    #[test]
    fn budget_exhaustion_is_unknown() {
        let d = crate::generators::random_tournament(12, 4);
        let tiny = OracleBudget::new(1, Duration::from_secs(5)).unwrap();
        let v = exists_disjoint_linkage(&d, &[(0, 1), (2, 3)], tiny).unwrap();
        assert!(matches!(v, LinkageVerdict::Unknown { .. }) || v == LinkageVerdict::No);
        assert!(OracleBudget::new(0, Duration::from_secs(1)).is_err());
    }

    #[test]
    fn bruteforce_small_cases() {
        let d = Digraph::from_arcs(5, [(0, 2), (1, 2), (2, 3), (2, 4)]).unwrap();
        assert_eq!(max_disjoint_st_paths_bruteforce(&d, &[0, 1], &[3, 4]).unwrap(), 1);
        assert_eq!(min_separator_bruteforce(&d, &[0, 1], &[3, 4]).unwrap(), vec![2]);
        let k = Digraph::complete(6);
        assert_eq!(max_disjoint_st_paths_bruteforce(&k, &[0, 1, 2], &[3, 4, 5]).unwrap(), 3);
        assert!(max_disjoint_st_paths_bruteforce(&Digraph::new(13), &[0], &[1]).is_err());
    }
}
