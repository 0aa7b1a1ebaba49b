//! Goodness, nearly dominating vertices and gamma-dominators.
//!
//! `v` is c-out-good for `u` when `u -> v` or there are at least `c`
//! internally disjoint `(u, v)`-paths of length two; in-goodness is the same
//! notion in the reversed digraph. `u` is nearly out-dominating when, for
//! every `c >= 1`, at most `2c` vertices fail to be c-out-good for it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::digraph::{Digraph, TieRule};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Out,
    In,
}

/// Number of middle vertices `w` with `from -> w -> to`.
pub fn count_two_paths(d: &Digraph, from: usize, to: usize) -> Result<usize> {
    d.check_vertex(from)?;
    d.check_vertex(to)?;
    if from == to {
        return Err(Error::EqualEndpoints(from));
    }
    Ok(two_paths(d, from, to))
}

#[inline]
fn two_paths(d: &Digraph, from: usize, to: usize) -> usize {
    d.out_row(from).intersection_count(d.in_row(to))
}

fn check_goodness_args(d: &Digraph, u: usize, v: usize, c: usize) -> Result<()> {
    d.check_vertex(u)?;
    d.check_vertex(v)?;
    if u == v {
        return Err(Error::EqualEndpoints(u));
    }
    if c == 0 {
        return Err(Error::InvalidParameter("c must be at least 1".into()));
    }
    Ok(())
}

pub fn is_c_out_good(d: &Digraph, u: usize, v: usize, c: usize) -> Result<bool> {
    check_goodness_args(d, u, v, c)?;
    Ok(d.has_arc(u, v) || two_paths(d, u, v) >= c)
}

pub fn is_c_in_good(d: &Digraph, u: usize, v: usize, c: usize) -> Result<bool> {
    check_goodness_args(d, u, v, c)?;
    Ok(d.has_arc(v, u) || two_paths(d, v, u) >= c)
}

/// Goodness level of `v` for `u`: the largest `c` for which `v` is c-good,
/// or `usize::MAX` when the direct arc is present.
fn level(d: &Digraph, u: usize, v: usize, dir: Direction) -> usize {
    match dir {
        Direction::Out if d.has_arc(u, v) => usize::MAX,
        Direction::Out => two_paths(d, u, v),
        Direction::In if d.has_arc(v, u) => usize::MAX,
        Direction::In => two_paths(d, v, u),
    }
}

/// Per-`c` count of bad vertices for one centre vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominationProfile {
    pub vertex: usize,
    pub direction: Direction,
    /// `bad[c - 1]` is the number of candidates that are not c-good, for
    /// every `c` that was actually scanned.
    pub bad: Vec<usize>,
    /// First `c` at which `2c` exceeds the candidate count; that `c` and all
    /// larger ones hold trivially and were not scanned.
    pub vacuous_from: Option<usize>,
    pub verdict: bool,
}

impl DominationProfile {
    /// The sharper bound `bad(c) <= 2c - 1` met by the vertex the finder
    /// returns.
    pub fn meets_strict_bound(&self) -> bool {
        self.bad.iter().enumerate().all(|(i, &b)| b < 2 * (i + 1))
    }
}

fn profile_over(d: &Digraph, u: usize, candidates: &BitSet, dir: Direction, c_max: usize) -> DominationProfile {
    let m = candidates.count();
    let mut hist = vec![0usize; c_max + 2];
    for v in candidates.iter() {
        let l = level(d, u, v, dir).min(c_max + 1);
        hist[l] += 1;
    }
    let mut bad = Vec::new();
    let mut below = 0;
    let mut vacuous_from = None;
    let mut verdict = true;
    for c in 1..=c_max {
        if 2 * c > m {
            vacuous_from = Some(c);
            break;
        }
        below += hist[c - 1];
        bad.push(below);
        if below > 2 * c {
            verdict = false;
        }
    }
    DominationProfile {
        vertex: u,
        direction: dir,
        bad,
        vacuous_from,
        verdict,
    }
}

/// Bad-vertex profile of `u` over all `c` in `1..=c_max`.
pub fn domination_profile(d: &Digraph, u: usize, dir: Direction, c_max: usize) -> Result<DominationProfile> {
    d.check_vertex(u)?;
    let mut candidates = BitSet::full(d.n());
    candidates.remove(u);
    Ok(profile_over(d, u, &candidates, dir, c_max))
}

pub fn is_nearly_out_dominating(d: &Digraph, u: usize, c_max: usize) -> Result<DominationProfile> {
    domination_profile(d, u, Direction::Out, c_max)
}

pub fn is_nearly_in_dominating(d: &Digraph, u: usize, c_max: usize) -> Result<DominationProfile> {
    domination_profile(d, u, Direction::In, c_max)
}

/// A maximum out-degree vertex of the spanning tournament (lowest id on
/// ties). Such a vertex is always nearly out-dominating; this is asserted.
pub fn find_nearly_out_dominating(d: &Digraph) -> Result<usize> {
    find_nearly_out_dominating_with(d, TieRule::LowerToHigher)
}

pub fn find_nearly_out_dominating_with(d: &Digraph, rule: TieRule) -> Result<usize> {
    if d.n() == 0 {
        return Err(Error::EmptyDigraph);
    }
    let t = d.spanning_tournament(rule)?;
    let u = (0..t.n())
        .max_by_key(|&v| (t.out_degree(v), std::cmp::Reverse(v)))
        .expect("non-empty");
    let p = domination_profile(d, u, Direction::Out, d.n())?;
    assert!(
        p.verdict && p.meets_strict_bound(),
        "max out-degree vertex {u} is not nearly out-dominating: {:?}",
        p.bad
    );
    Ok(u)
}

pub fn find_nearly_in_dominating(d: &Digraph) -> Result<usize> {
    find_nearly_out_dominating(&d.reverse())
}

pub fn find_nearly_in_dominating_with(d: &Digraph, rule: TieRule) -> Result<usize> {
    find_nearly_out_dominating_with(&d.reverse(), rule)
}

fn gamma_args(d: &Digraph, v: usize, set: &[usize]) -> Result<BitSet> {
    d.check_vertex(v)?;
    let s = d.vertex_set(set.iter().copied())?;
    if s.contains(v) {
        return Err(Error::InvalidParameter(format!("vertex {v} lies in the target set")));
    }
    Ok(s)
}

/// `v` has at least `gamma` out-neighbours in `set`.
pub fn is_gamma_out_dominator(d: &Digraph, v: usize, set: &[usize], gamma: usize) -> Result<bool> {
    let s = gamma_args(d, v, set)?;
    Ok(d.out_row(v).intersection_count(&s) >= gamma)
}

/// `v` has at least `gamma` in-neighbours in `set`.
pub fn is_gamma_in_dominator(d: &Digraph, v: usize, set: &[usize], gamma: usize) -> Result<bool> {
    let s = gamma_args(d, v, set)?;
    Ok(d.in_row(v).intersection_count(&s) >= gamma)
}

/// Every `u` in `set` has, for every `c <= c_max`, at most `2c` vertices of
/// `D - set` that are not c-in-good for it (goodness measured in `D`).
pub fn is_nearly_in_dominating_set(d: &Digraph, set: &[usize], c_max: usize) -> Result<bool> {
    if set.is_empty() {
        return Err(Error::InvalidParameter("dominating set must be non-empty".into()));
    }
    let s = d.vertex_set(set.iter().copied())?;
    let outside = s.complement();
    Ok(set
        .par_iter()
        .all(|&u| profile_over(d, u, &outside, Direction::In, c_max).verdict))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{random_tournament, rotational_tournament, transitive_tournament};

    fn cycle3() -> Digraph {
        Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn two_paths_examples() {
        assert_eq!(count_two_paths(&cycle3(), 0, 2).unwrap(), 1);
        let tt = transitive_tournament(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(count_two_paths(&tt, 0, 4).unwrap(), 3);
        assert!(count_two_paths(&tt, 1, 1).is_err());
        let d = random_tournament(10, 8);
        for a in 0..10 {
            for b in 0..10 {
                if a != b {
                    let brute = (0..10).filter(|&w| d.has_arc(a, w) && d.has_arc(w, b)).count();
                    assert_eq!(count_two_paths(&d, a, b).unwrap(), brute);
                }
            }
        }
    }

    #[test]
    fn goodness_boundary() {
        // 0 -> {1, 2} -> 3, and 3 -> 0: two middles for (0, 3).
        let d = Digraph::from_arcs(4, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 0), (1, 2)]).unwrap();
        assert!(is_c_out_good(&d, 0, 3, 2).unwrap());
        assert!(!is_c_out_good(&d, 0, 3, 3).unwrap());
        assert!(is_c_out_good(&d, 0, 1, 100).unwrap());
        assert!(is_c_in_good(&d, 3, 0, 2).unwrap());
        assert!(is_c_out_good(&d, 0, 3, 0).is_err());
    }

    #[test]
    fn nearly_dominating_examples() {
        let tt = transitive_tournament(&(0..8).collect::<Vec<_>>()).unwrap();
        let p = is_nearly_out_dominating(&tt, 0, 8).unwrap();
        assert!(p.verdict);
        assert!(p.bad.iter().all(|&b| b == 0));
        for u in 0..3 {
            let p = is_nearly_out_dominating(&cycle3(), u, 3).unwrap();
            assert!(p.verdict);
            assert_eq!(p.bad, vec![0]);
            assert_eq!(p.vacuous_from, Some(2));
        }
        assert_eq!(find_nearly_out_dominating(&tt).unwrap(), 0);
        assert_eq!(find_nearly_in_dominating(&tt).unwrap(), 7);
        assert_eq!(find_nearly_out_dominating(&rotational_tournament(9).unwrap()).unwrap(), 0);
    }

    #[test]
    fn vacuity_threshold() {
        let d = random_tournament(11, 2);
        let p = is_nearly_out_dominating(&d, 0, 100).unwrap();
        assert_eq!(p.vacuous_from, Some(6));
        assert_eq!(p.bad.len(), 5);
    }

    #[test]
    fn gamma() {
        let tt = transitive_tournament(&[0, 1, 2, 3, 4]).unwrap();
        assert!(is_gamma_out_dominator(&tt, 0, &[1, 2, 3], 3).unwrap());
        assert!(is_gamma_out_dominator(&tt, 4, &[1, 2, 3], 0).unwrap());
        assert!(!is_gamma_out_dominator(&tt, 4, &[1, 2, 3], 1).unwrap());
        assert!(is_gamma_in_dominator(&tt, 4, &[1, 2, 3], 3).unwrap());
        assert!(is_gamma_out_dominator(&tt, 1, &[1], 0).is_err());
    }

    #[test]
    fn dominating_sets() {
        let tt = transitive_tournament(&(0..6).collect::<Vec<_>>()).unwrap();
        assert!(is_nearly_in_dominating_set(&tt, &(0..6).collect::<Vec<_>>(), 6).unwrap());
        // The source has no in-neighbours and no 2-paths into it: all five
        // other vertices are 1-bad, more than 2.
        assert!(!is_nearly_in_dominating_set(&tt, &[0], 6).unwrap());
        assert!(is_nearly_in_dominating_set(&tt, &[5], 6).unwrap());
        assert!(is_nearly_in_dominating_set(&tt, &[], 6).is_err());
    }
}
