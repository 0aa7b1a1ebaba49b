//! Dense simple digraphs stored as out- and in-adjacency bit matrices.

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::rng::Rng64;

/// A simple digraph on vertices `0..n`: no loops, at most one arc per
/// ordered pair. Both directions of the relation are kept so that in- and
/// out-neighbourhood queries are row lookups.
#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    out: Vec<BitSet>,
    inc: Vec<BitSet>,
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Digraph")
            .field("n", &self.n)
            .field("arcs", &self.arc_count())
            .finish()
    }
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph {
            n,
            out: vec![BitSet::new(n); n],
            inc: vec![BitSet::new(n); n],
        }
    }

    pub fn from_arcs<I: IntoIterator<Item = (usize, usize)>>(n: usize, arcs: I) -> Result<Self> {
        let mut d = Digraph::new(n);
        for (u, v) in arcs {
            d.try_add_arc(u, v)?;
        }
        Ok(d)
    }

    /// Complete biorientation: both arcs between every pair.
    pub fn complete(n: usize) -> Self {
        let mut d = Digraph::new(n);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    d.add_arc(u, v);
                }
            }
        }
        d
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(v)
    }

    /// Adds `u -> v`. Panics on loops or out-of-range ids; re-adding is a no-op.
    pub fn add_arc(&mut self, u: usize, v: usize) {
        assert!(u != v, "self-loop at {u}");
        assert!(u < self.n && v < self.n, "arc {u}->{v} out of range");
        self.out[u].insert(v);
        self.inc[v].insert(u);
    }

    pub fn try_add_arc(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if self.has_arc(u, v) {
            return Err(Error::DuplicateArc(u, v));
        }
        self.add_arc(u, v);
        Ok(())
    }

    pub fn remove_arc(&mut self, u: usize, v: usize) -> bool {
        let had = self.out[u].remove(v);
        self.inc[v].remove(u);
        had
    }

    /// Replaces `u -> v` by `v -> u`. Returns false if `u -> v` was absent.
    pub fn reverse_arc(&mut self, u: usize, v: usize) -> bool {
        if !self.remove_arc(u, v) {
            return false;
        }
        self.add_arc(v, u);
        true
    }

    /// Sets the orientation of the pair `{u, v}` to exactly `u -> v`.
    pub fn orient(&mut self, u: usize, v: usize) {
        self.remove_arc(v, u);
        self.add_arc(u, v);
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::InvalidVertex { vertex: v, n: self.n })
        }
    }

    #[inline]
    pub fn out_row(&self, v: usize) -> &BitSet {
        &self.out[v]
    }

    #[inline]
    pub fn in_row(&self, v: usize) -> &BitSet {
        &self.inc[v]
    }

    pub fn out_neighbours(&self, v: usize) -> Result<Vec<usize>> {
        self.check_vertex(v)?;
        Ok(self.out[v].to_vec())
    }

    pub fn in_neighbours(&self, v: usize) -> Result<Vec<usize>> {
        self.check_vertex(v)?;
        Ok(self.inc[v].to_vec())
    }

    #[inline]
    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].count()
    }

    #[inline]
    pub fn in_degree(&self, v: usize) -> usize {
        self.inc[v].count()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(BitSet::count).sum()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.out[u].iter().map(move |v| (u, v)))
    }

    pub fn min_out_degree(&self) -> Result<usize> {
        (0..self.n).map(|v| self.out_degree(v)).min().ok_or(Error::EmptyDigraph)
    }

    pub fn min_in_degree(&self) -> Result<usize> {
        (0..self.n).map(|v| self.in_degree(v)).min().ok_or(Error::EmptyDigraph)
    }

    pub fn min_semidegree(&self) -> Result<usize> {
        Ok(self.min_out_degree()?.min(self.min_in_degree()?))
    }

    /// First unordered pair with no arc in either direction.
    pub fn missing_pair(&self) -> Option<(usize, usize)> {
        for u in 0..self.n {
            let mut adj = self.out[u].clone();
            adj.union_with(&self.inc[u]);
            adj.insert(u);
            if let Some(v) = adj.complement().iter().find(|&v| v > u) {
                return Some((u, v));
            }
        }
        None
    }

    pub fn is_semicomplete(&self) -> bool {
        self.missing_pair().is_none()
    }

    pub fn is_tournament(&self) -> bool {
        (0..self.n).all(|u| {
            self.out[u].is_disjoint(&self.inc[u]) && self.out[u].count() + self.inc[u].count() == self.n - 1
        })
    }

    pub fn require_semicomplete(&self) -> Result<()> {
        match self.missing_pair() {
            None => Ok(()),
            Some((u, v)) => Err(Error::NotSemicomplete(u, v)),
        }
    }

    pub fn reverse(&self) -> Digraph {
        Digraph {
            n: self.n,
            out: self.inc.clone(),
            inc: self.out.clone(),
        }
    }

    pub fn vertex_set<I: IntoIterator<Item = usize>>(&self, items: I) -> Result<BitSet> {
        let mut s = BitSet::new(self.n);
        for v in items {
            self.check_vertex(v)?;
            s.insert(v);
        }
        Ok(s)
    }

    /// `D<s>` with an explicit id map back to this digraph.
    pub fn induced(&self, s: &[usize]) -> Result<Subgraph> {
        let keep = self.vertex_set(s.iter().copied())?;
        Ok(self.induced_by_mask(&keep))
    }

    /// `D \ s`.
    pub fn delete(&self, s: &[usize]) -> Result<Subgraph> {
        let drop = self.vertex_set(s.iter().copied())?;
        Ok(self.induced_by_mask(&drop.complement()))
    }

    pub fn induced_by_mask(&self, keep: &BitSet) -> Subgraph {
        let to_parent: Vec<usize> = keep.to_vec();
        let mut from_parent = vec![None; self.n];
        for (i, &v) in to_parent.iter().enumerate() {
            from_parent[v] = Some(i);
        }
        let m = to_parent.len();
        let mut g = Digraph::new(m);
        for (i, &u) in to_parent.iter().enumerate() {
            for v in self.out[u].iter() {
                if let Some(j) = from_parent[v] {
                    g.add_arc(i, j);
                }
            }
        }
        Subgraph {
            graph: g,
            to_parent,
            from_parent,
        }
    }

    /// `A => B`: every arc from `a` to `b` present. The sets must be disjoint.
    pub fn dominates_set(&self, a: &[usize], b: &[usize]) -> Result<bool> {
        let aset = self.vertex_set(a.iter().copied())?;
        let bset = self.vertex_set(b.iter().copied())?;
        if let Some(v) = aset.first_common(&bset) {
            return Err(Error::OverlappingSets(v));
        }
        Ok(a.iter().all(|&u| bset.is_subset(&self.out[u])))
    }

    /// Drops one arc of every bidirected pair. Fails unless `self` is semicomplete.
    pub fn spanning_tournament(&self, rule: TieRule) -> Result<Digraph> {
        self.require_semicomplete()?;
        let mut t = self.clone();
        let mut rng = match rule {
            TieRule::LowerToHigher => None,
            TieRule::Seeded(seed) => Some(Rng64::new(seed)),
        };
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if self.has_arc(u, v) && self.has_arc(v, u) {
                    let keep_forward = match rng.as_mut() {
                        None => true,
                        Some(r) => r.coin(0.5),
                    };
                    if keep_forward {
                        t.remove_arc(v, u);
                    } else {
                        t.remove_arc(u, v);
                    }
                }
            }
        }
        Ok(t)
    }
}

/// How a bidirected pair is resolved when extracting a spanning tournament.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieRule {
    /// Keep `u -> v` for `u < v`.
    #[default]
    LowerToHigher,
    /// Keep a uniformly random direction per pair.
    Seeded(u64),
}

/// An induced subgraph together with its vertex id correspondence.
#[derive(Debug, Clone)]
pub struct Subgraph {
    pub graph: Digraph,
    pub to_parent: Vec<usize>,
    pub from_parent: Vec<Option<usize>>,
}

impl Subgraph {
    pub fn parent_of(&self, v: usize) -> usize {
        self.to_parent[v]
    }

    pub fn local_of(&self, parent: usize) -> Option<usize> {
        self.from_parent.get(parent).copied().flatten()
    }
}

/// A directed path given by its vertex sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(pub(crate) Vec<usize>);

impl Path {
    /// Validates that the vertices are distinct and consecutive pairs are arcs.
    pub fn new(d: &Digraph, vertices: Vec<usize>) -> Result<Path> {
        if vertices.is_empty() {
            return Err(Error::InvalidPath("empty vertex sequence".into()));
        }
        let mut seen = BitSet::new(d.n());
        for &v in &vertices {
            d.check_vertex(v)?;
            if !seen.insert(v) {
                return Err(Error::InvalidPath(format!("vertex {v} repeated")));
            }
        }
        for w in vertices.windows(2) {
            if !d.has_arc(w[0], w[1]) {
                return Err(Error::InvalidPath(format!("missing arc {} -> {}", w[0], w[1])));
            }
        }
        Ok(Path(vertices))
    }

    pub(crate) fn unchecked(vertices: Vec<usize>) -> Path {
        debug_assert!(!vertices.is_empty());
        Path(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vertices(self) -> Vec<usize> {
        self.0
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        *self.0.last().unwrap()
    }

    /// Number of arcs. A path is never empty; see `is_trivial`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_trivial(&self) -> bool {
        self.0.len() == 1
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.0.iter().position(|&x| x == v)
    }
}

/// Shortcuts `p` until no arc of `d` joins two of its vertices while
/// skipping interior ones. Greedy furthest-jump reaches the fixpoint in one
/// pass: after it, each vertex's successor is the furthest vertex it reaches.
pub fn reduce_to_minimal_path(d: &Digraph, p: &Path) -> Result<Path> {
    let p = Path::new(d, p.0.clone())?;
    Ok(Path(shortcut(d, &p.0)))
}

pub(crate) fn shortcut(d: &Digraph, vs: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(vs.len());
    let mut i = 0;
    out.push(vs[0]);
    while i + 1 < vs.len() {
        let row = d.out_row(vs[i]);
        let j = (i + 1..vs.len()).rev().find(|&j| row.contains(vs[j])).unwrap_or(i + 1);
        out.push(vs[j]);
        i = j;
    }
    out
}

/// Pairwise vertex-disjoint paths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSystem {
    pub paths: Vec<Path>,
}

impl PathSystem {
    pub fn new(d: &Digraph, paths: Vec<Path>) -> Result<PathSystem> {
        let mut seen = BitSet::new(d.n());
        for p in &paths {
            let p = Path::new(d, p.0.clone())?;
            for &v in p.vertices() {
                if !seen.insert(v) {
                    return Err(Error::InvalidPath(format!("paths share vertex {v}")));
                }
            }
        }
        Ok(PathSystem { paths })
    }

    pub fn empty() -> Self {
        PathSystem { paths: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn init(&self) -> Vec<usize> {
        self.paths.iter().map(Path::first).collect()
    }

    pub fn ter(&self) -> Vec<usize> {
        self.paths.iter().map(Path::last).collect()
    }

    /// Vertices that are neither initial nor terminal.
    pub fn int(&self) -> Vec<usize> {
        let ends: std::collections::BTreeSet<usize> = self.init().into_iter().chain(self.ter()).collect();
        self.paths
            .iter()
            .flat_map(|p| p.vertices().iter().copied())
            .filter(|v| !ends.contains(v))
            .collect()
    }

    pub fn total_vertices(&self) -> usize {
        self.paths.iter().map(|p| p.vertices().len()).sum()
    }

    pub fn vertex_mask(&self, n: usize) -> BitSet {
        BitSet::from_iter_with_len(n, self.paths.iter().flat_map(|p| p.vertices().iter().copied()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{rotational_tournament, transitive_tournament};

    fn cycle3() -> Digraph {
        Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn tt(n: usize) -> Digraph {
        transitive_tournament(&(0..n).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn classification() {
        let k3 = Digraph::complete(3);
        assert!(k3.is_semicomplete());
        assert!(!k3.is_tournament());
        assert!(cycle3().is_semicomplete());
        assert!(cycle3().is_tournament());
        assert!(!Digraph::new(2).is_semicomplete());
        assert!(tt(5).is_tournament());
    }

    #[test]
    fn neighbourhoods() {
        let t = tt(4);
        assert_eq!(t.out_neighbours(0).unwrap(), vec![1, 2, 3]);
        assert!(t.out_neighbours(3).unwrap().is_empty());
        for v in 0..3 {
            assert_eq!(cycle3().out_neighbours(v).unwrap().len(), 1);
        }
        assert!(matches!(t.out_neighbours(4), Err(Error::InvalidVertex { .. })));
    }

    #[test]
    fn degree_minima() {
        assert_eq!(tt(6).min_out_degree().unwrap(), 0);
        assert_eq!(rotational_tournament(9).unwrap().min_out_degree().unwrap(), 4);
        assert_eq!(cycle3().min_semidegree().unwrap(), 1);
        assert_eq!(Digraph::new(0).min_out_degree(), Err(Error::EmptyDigraph));
    }

    #[test]
    fn induced_and_delete() {
        let t5 = tt(5);
        let sub = t5.induced(&[0, 1, 2]).unwrap();
        assert_eq!(sub.graph, tt(3));
        assert_eq!(t5.delete(&[]).unwrap().graph, t5);
        let single = t5.induced(&[3]).unwrap();
        assert_eq!(single.graph.n(), 1);
        assert_eq!(single.graph.arc_count(), 0);
        assert_eq!(single.parent_of(0), 3);
        assert!(t5.induced(&[9]).is_err());
    }

    #[test]
    fn dominates() {
        let t5 = tt(5);
        assert!(t5.dominates_set(&[0], &[1, 2, 3, 4]).unwrap());
        assert!(!t5.dominates_set(&[4], &[0]).unwrap());
        assert!(t5.dominates_set(&[], &[0, 1]).unwrap());
        assert_eq!(t5.dominates_set(&[1], &[1]), Err(Error::OverlappingSets(1)));
    }

    #[test]
    fn spanning_tournaments() {
        let k3 = Digraph::complete(3);
        assert_eq!(k3.spanning_tournament(TieRule::LowerToHigher).unwrap(), tt(3));
        let c = cycle3();
        assert_eq!(c.spanning_tournament(TieRule::Seeded(4)).unwrap(), c);
        assert!(Digraph::new(3).spanning_tournament(TieRule::LowerToHigher).is_err());
    }

    #[test]
    fn minimal_paths() {
        let d = Digraph::from_arcs(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let p = Path::new(&d, vec![0, 1, 2]).unwrap();
        assert_eq!(reduce_to_minimal_path(&d, &p).unwrap().vertices(), &[0, 2]);
        let c = cycle3();
        let q = Path::new(&c, vec![0, 1, 2]).unwrap();
        assert_eq!(reduce_to_minimal_path(&c, &q).unwrap(), q);
        assert!(Path::new(&c, vec![0, 2]).is_err());
        assert!(Path::new(&c, vec![0, 1, 0]).is_err());
    }

    #[test]
    fn path_system_rejects_overlap() {
        let d = Digraph::complete(4);
        let a = Path::new(&d, vec![0, 1]).unwrap();
        let b = Path::new(&d, vec![1, 2]).unwrap();
        let c = Path::new(&d, vec![2, 3]).unwrap();
        assert!(PathSystem::new(&d, vec![a.clone(), b]).is_err());
        let ok = PathSystem::new(&d, vec![a, c]).unwrap();
        assert_eq!(ok.init(), vec![0, 2]);
        assert_eq!(ok.ter(), vec![1, 3]);
        assert!(ok.int().is_empty());
        assert_eq!(ok.total_vertices(), 4);
    }
}
