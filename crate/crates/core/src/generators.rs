//! Structured and seeded random digraph families.

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::rng::Rng64;

/// Arc `order[i] -> order[j]` for every `i < j`.
pub fn transitive_tournament(order: &[usize]) -> Result<Digraph> {
    let n = order.len();
    let mut seen = BitSet::new(n);
    for &v in order {
        if v >= n {
            return Err(Error::InvalidVertex { vertex: v, n });
        }
        if !seen.insert(v) {
            return Err(Error::InvalidParameter(format!("vertex {v} repeated in order")));
        }
    }
    let mut d = Digraph::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            d.add_arc(order[i], order[j]);
        }
    }
    Ok(d)
}

/// Circulant tournament: `u -> v` iff `(v - u) mod n` lies in `1..=(n-1)/2`.
pub fn rotational_tournament(n: usize) -> Result<Digraph> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "rotational tournament needs odd n >= 3, got {n}"
        )));
    }
    let half = (n - 1) / 2;
    let mut d = Digraph::new(n);
    for u in 0..n {
        for s in 1..=half {
            d.add_arc(u, (u + s) % n);
        }
    }
    Ok(d)
}

/// Each pair oriented by a fair coin, pairs visited as `(u, v)`, `u < v`.
pub fn random_tournament(n: usize, seed: u64) -> Digraph {
    let mut rng = Rng64::new(seed);
    let mut d = Digraph::new(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.coin(0.5) {
                d.add_arc(u, v);
            } else {
                d.add_arc(v, u);
            }
        }
    }
    d
}

/// Like [`random_tournament`], but each pair is bidirected with probability
/// `p_bidirected`. Both coins are drawn for every pair.
pub fn random_semicomplete(n: usize, p_bidirected: f64, seed: u64) -> Result<Digraph> {
    if !(0.0..=1.0).contains(&p_bidirected) {
        return Err(Error::InvalidParameter(format!(
            "p_bidirected must lie in [0, 1], got {p_bidirected}"
        )));
    }
    let mut rng = Rng64::new(seed);
    let mut d = Digraph::new(n);
    for u in 0..n {
        for v in (u + 1)..n {
            let both = rng.coin(p_bidirected);
            let forward = rng.coin(0.5);
            if both || forward {
                d.add_arc(u, v);
            }
            if both || !forward {
                d.add_arc(v, u);
            }
        }
    }
    Ok(d)
}

/// Parts `0..u_size` and `u_size..u_size + w_size`, one arc per cross pair.
pub fn bipartite_tournament(u_size: usize, w_size: usize, seed: u64) -> Result<Digraph> {
    if u_size == 0 || w_size == 0 {
        return Err(Error::InvalidParameter("bipartite parts must be non-empty".into()));
    }
    let mut rng = Rng64::new(seed);
    let mut d = Digraph::new(u_size + w_size);
    for u in 0..u_size {
        for w in u_size..u_size + w_size {
            if rng.coin(0.5) {
                d.add_arc(u, w);
            } else {
                d.add_arc(w, u);
            }
        }
    }
    Ok(d)
}

/// Random tournament whose out-degrees are all `(n-1)/2` (odd `n`) or lie in
/// `{n/2 - 1, n/2}` (even `n`).
///
/// Starts from the circulant tournament (plus one extra vertex beating the
/// first `n/2 - 1` circulant vertices when `n` is even), then applies `n^2`
/// attempts at reversing a random directed triangle, which preserves every
/// degree, and finally relabels the vertices by a random permutation.
pub fn near_regular_tournament(n: usize, seed: u64) -> Result<Digraph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("near-regular tournament needs n >= 3, got {n}")));
    }
    let base_n = if n % 2 == 1 { n } else { n - 1 };
    let base = rotational_tournament(base_n)?;
    let mut d = Digraph::new(n);
    for (u, v) in base.arcs() {
        d.add_arc(u, v);
    }
    if n != base_n {
        let z = n - 1;
        let beaten = n / 2 - 1;
        for v in 0..base_n {
            if v < beaten {
                d.add_arc(z, v);
            } else {
                d.add_arc(v, z);
            }
        }
    }
    let mut rng = Rng64::new(seed);
    for _ in 0..n * n {
        let t = rng.sample_distinct(n, 3);
        let (a, b, c) = (t[0], t[1], t[2]);
        if d.has_arc(a, b) && d.has_arc(b, c) && d.has_arc(c, a) {
            d.reverse_arc(a, b);
            d.reverse_arc(b, c);
            d.reverse_arc(c, a);
        } else if d.has_arc(a, c) && d.has_arc(c, b) && d.has_arc(b, a) {
            d.reverse_arc(a, c);
            d.reverse_arc(c, b);
            d.reverse_arc(b, a);
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut perm);
    Digraph::from_arcs(n, d.arcs().map(|(u, v)| (perm[u], perm[v])))
}

/// A generator request, as accepted by the `gen` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GenSpec {
    Transitive { n: usize },
    Rotational { n: usize },
    RandomTournament { n: usize, seed: u64 },
    RandomSemicomplete { n: usize, p_bidirected: f64, seed: u64 },
    BipartiteTournament { u_size: usize, w_size: usize, seed: u64 },
    NearRegular { n: usize, seed: u64 },
}

impl GenSpec {
    pub fn build(&self) -> Result<Digraph> {
        match *self {
            GenSpec::Transitive { n } => transitive_tournament(&(0..n).collect::<Vec<_>>()),
            GenSpec::Rotational { n } => rotational_tournament(n),
            GenSpec::RandomTournament { n, seed } => Ok(random_tournament(n, seed)),
            GenSpec::RandomSemicomplete { n, p_bidirected, seed } => random_semicomplete(n, p_bidirected, seed),
            GenSpec::BipartiteTournament { u_size, w_size, seed } => bipartite_tournament(u_size, w_size, seed),
            GenSpec::NearRegular { n, seed } => near_regular_tournament(n, seed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transitive_orders() {
        let d = transitive_tournament(&[0, 1, 2]).unwrap();
        assert_eq!(d.arcs().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
        let r = transitive_tournament(&[2, 1, 0]).unwrap();
        assert_eq!(r.arcs().collect::<Vec<_>>(), vec![(1, 0), (2, 0), (2, 1)]);
        assert_eq!(transitive_tournament(&[0]).unwrap().arc_count(), 0);
        assert!(transitive_tournament(&[0, 0]).is_err());
    }

    #[test]
    fn rotational_basics() {
        let c3 = rotational_tournament(3).unwrap();
        assert_eq!(c3.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 0)]);
        for n in [5, 9, 15, 27] {
            let r = rotational_tournament(n).unwrap();
            assert!(r.is_tournament());
            assert!((0..n).all(|v| r.out_degree(v) == (n - 1) / 2 && r.in_degree(v) == (n - 1) / 2));
        }
        assert!(rotational_tournament(4).is_err());
        assert!(rotational_tournament(1).is_err());
    }

    #[test]
    fn random_families() {
        assert_eq!(random_tournament(30, 5), random_tournament(30, 5));
        assert!(random_tournament(30, 5).is_tournament());
        let t = random_semicomplete(20, 0.0, 3).unwrap();
        assert!(t.is_tournament());
        let full = random_semicomplete(20, 1.0, 3).unwrap();
        assert_eq!(full, Digraph::complete(20));
        assert!(random_semicomplete(5, 1.5, 0).is_err());
    }

    #[test]
    fn bipartite() {
        let one = bipartite_tournament(1, 1, 0).unwrap();
        assert_eq!(one.arc_count(), 1);
        let b = bipartite_tournament(2, 2, 7).unwrap();
        assert_eq!(b.arc_count(), 4);
        assert!(!b.has_arc(0, 1) && !b.has_arc(1, 0) && !b.has_arc(2, 3) && !b.has_arc(3, 2));
        assert!(!b.is_semicomplete());
    }

    #[test]
    fn near_regular_degrees() {
        let d = near_regular_tournament(51, 11).unwrap();
        assert!(d.is_tournament());
        assert!((0..51).all(|v| d.out_degree(v) == 25));
        let e = near_regular_tournament(40, 11).unwrap();
        assert!(e.is_tournament());
        assert!((0..40).all(|v| (19..=20).contains(&e.out_degree(v))));
        assert_ne!(d, rotational_tournament(51).unwrap());
    }
}
