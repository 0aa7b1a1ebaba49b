//! Vertex-disjoint path systems and vertex cuts via unit-capacity flow.
//!
//! Every vertex `v` is split into `v_in -> v_out` with capacity one; arcs of
//! the digraph, the super-source edges `S -> s_in` and the super-sink edges
//! `t_out -> T` are uncapacitated, so every finite cut consists of split
//! edges only and reads off directly as a vertex separator.
//!
//! Flow is stored per vertex: `pred[v]` is the flow predecessor (or the
//! super-source) and `succ[v]` the flow successor (or the super-sink).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::digraph::{shortcut, Digraph, Path, PathSystem};
use crate::error::{Error, Result};

const NONE: usize = usize::MAX;
const TERM: usize = usize::MAX - 1;

/// A vertex separator between a source side and a sink side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutCertificate {
    pub separator: Vec<usize>,
    pub source_side: Vec<usize>,
    pub sink_side: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjointPaths {
    pub system: PathSystem,
    /// Present when the maximum is below the requested cap.
    pub cut: Option<CutCertificate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Node {
    In(usize),
    Out(usize),
}

struct Network<'a> {
    d: &'a Digraph,
    allowed: BitSet,
    is_source: BitSet,
    is_sink: BitSet,
    pred: Vec<usize>,
    succ: Vec<usize>,
    used: BitSet,
    value: usize,
}

impl<'a> Network<'a> {
    fn new(d: &'a Digraph, allowed: BitSet, sources: &BitSet, sinks: &BitSet) -> Self {
        let n = d.n();
        let mut is_source = sources.clone();
        is_source.intersect_with(&allowed);
        let mut is_sink = sinks.clone();
        is_sink.intersect_with(&allowed);
        Network {
            d,
            allowed,
            is_source,
            is_sink,
            pred: vec![NONE; n],
            succ: vec![NONE; n],
            used: BitSet::new(n),
            value: 0,
        }
    }

    /// Trivial paths and direct source->sink arcs, lowest ids first.
    fn greedy_seed(&mut self, cap: usize) {
        let sources: Vec<usize> = self.is_source.to_vec();
        for &s in &sources {
            if self.value >= cap {
                return;
            }
            if self.is_sink.contains(s) && !self.used.contains(s) {
                self.pred[s] = TERM;
                self.succ[s] = TERM;
                self.used.insert(s);
                self.value += 1;
            }
        }
        let mut free_sinks = self.is_sink.clone();
        free_sinks.difference_with(&self.used);
        for &s in &sources {
            if self.value >= cap {
                return;
            }
            if self.used.contains(s) {
                continue;
            }
            if let Some(t) = self.d.out_row(s).first_common(&free_sinks) {
                self.pred[s] = TERM;
                self.succ[s] = t;
                self.pred[t] = s;
                self.succ[t] = TERM;
                self.used.insert(s);
                self.used.insert(t);
                free_sinks.remove(t);
                self.value += 1;
            }
        }
    }

    /// Breadth-first search in the residual network. Returns the moves of an
    /// augmenting path (ending at a sink's out-node), or `None` together
    /// with the final reachable sets left in `vis_in` / `vis_out`.
    fn bfs(&self, vis_in: &mut BitSet, vis_out: &mut BitSet) -> Option<Vec<Node>> {
        let n = self.d.n();
        vis_in.clear();
        vis_out.clear();
        let mut parent_in = vec![NONE; n];
        let mut parent_out = vec![NONE; n];
        let mut queue: std::collections::VecDeque<Node> = Default::default();
        for s in self.is_source.iter() {
            vis_in.insert(s);
            parent_in[s] = TERM;
            queue.push_back(Node::In(s));
        }
        let mut reached = None;
        'search: while let Some(node) = queue.pop_front() {
            match node {
                Node::In(v) => {
                    if !self.used.contains(v) {
                        if vis_out.insert(v) {
                            parent_out[v] = 2 * v;
                            queue.push_back(Node::Out(v));
                        }
                    } else {
                        let p = self.pred[v];
                        if p < TERM && vis_out.insert(p) {
                            parent_out[p] = 2 * v;
                            queue.push_back(Node::Out(p));
                        }
                    }
                }
                Node::Out(v) => {
                    if self.is_sink.contains(v) {
                        reached = Some(v);
                        break 'search;
                    }
                    let mut cand = self.d.out_row(v).clone();
                    cand.intersect_with(&self.allowed);
                    cand.difference_with(vis_in);
                    for w in cand.iter() {
                        vis_in.insert(w);
                        parent_in[w] = 2 * v + 1;
                        queue.push_back(Node::In(w));
                    }
                    if self.used.contains(v) && vis_in.insert(v) {
                        parent_in[v] = 2 * v + 1;
                        queue.push_back(Node::In(v));
                    }
                }
            }
        }
        let t = reached?;
        let mut moves = vec![Node::Out(t)];
        let mut cur = Node::Out(t);
        loop {
            let p = match cur {
                Node::In(v) => parent_in[v],
                Node::Out(v) => parent_out[v],
            };
            if p == TERM {
                break;
            }
            cur = if p % 2 == 0 { Node::In(p / 2) } else { Node::Out(p / 2) };
            moves.push(cur);
        }
        moves.reverse();
        Some(moves)
    }

    /// Applies an augmenting path given as its residual node sequence,
    /// starting at a source in-node and ending at a sink out-node.
    fn augment(&mut self, moves: &[Node]) {
        let mut cancels = Vec::new();
        let mut adds = Vec::new();
        for w in moves.windows(2) {
            match (w[0], w[1]) {
                (Node::Out(u), Node::In(v)) if u != v => adds.push((u, v)),
                (Node::In(v), Node::Out(p)) if p != v => cancels.push((p, v)),
                _ => {}
            }
        }
        for &(p, v) in &cancels {
            debug_assert_eq!(self.succ[p], v);
            debug_assert_eq!(self.pred[v], p);
            self.succ[p] = NONE;
            self.pred[v] = NONE;
        }
        let Node::In(s) = moves[0] else { unreachable!("augmenting path starts at an in-node") };
        let Node::Out(t) = *moves.last().unwrap() else { unreachable!("augmenting path ends at an out-node") };
        self.pred[s] = TERM;
        for &(u, v) in &adds {
            self.succ[u] = v;
            self.pred[v] = u;
        }
        self.succ[t] = TERM;
        for v in moves.iter().map(|m| match *m {
            Node::In(v) | Node::Out(v) => v,
        }) {
            if self.pred[v] == NONE && self.succ[v] == NONE {
                self.used.remove(v);
            } else {
                debug_assert!(self.pred[v] != NONE && self.succ[v] != NONE);
                self.used.insert(v);
            }
        }
        self.value += 1;
    }

    fn max_flow(&mut self, cap: usize) -> Option<CutCertificate> {
        let n = self.d.n();
        let mut vis_in = BitSet::new(n);
        let mut vis_out = BitSet::new(n);
        while self.value < cap {
            match self.bfs(&mut vis_in, &mut vis_out) {
                Some(moves) => self.augment(&moves),
                None => return Some(self.cut_from(&vis_in, &vis_out)),
            }
        }
        None
    }

    fn cut_from(&self, vis_in: &BitSet, vis_out: &BitSet) -> CutCertificate {
        let mut separator = vis_in.clone();
        separator.difference_with(vis_out);
        separator.intersect_with(&self.allowed);
        let mut source_side = vis_out.clone();
        source_side.intersect_with(&self.allowed);
        let mut sink_side = self.allowed.clone();
        sink_side.difference_with(&separator);
        sink_side.difference_with(&source_side);
        debug_assert_eq!(separator.count(), self.value);
        CutCertificate {
            separator: separator.to_vec(),
            source_side: source_side.to_vec(),
            sink_side: sink_side.to_vec(),
        }
    }

    fn residual_cut(&self) -> CutCertificate {
        let n = self.d.n();
        let mut vis_in = BitSet::new(n);
        let mut vis_out = BitSet::new(n);
        let found = self.bfs(&mut vis_in, &mut vis_out);
        debug_assert!(found.is_none(), "flow is not maximum");
        self.cut_from(&vis_in, &vis_out)
    }

    /// Flow paths in order of their (original) start vertex, then cut so
    /// that each meets the sources only first and the sinks only last.
    fn decompose(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(self.value);
        for s in 0..self.d.n() {
            if self.pred[s] != TERM {
                continue;
            }
            let mut p = vec![s];
            let mut v = s;
            while self.succ[v] != TERM {
                v = self.succ[v];
                p.push(v);
            }
            out.push(self.trim(p));
        }
        out
    }

    fn trim(&self, p: Vec<usize>) -> Vec<usize> {
        let start = p.iter().rposition(|&v| self.is_source.contains(v)).unwrap_or(0);
        let rest = &p[start..];
        let end = rest.iter().position(|&v| self.is_sink.contains(v)).unwrap_or(rest.len() - 1);
        rest[..=end].to_vec()
    }

    /// Successive shortest augmenting paths, unit cost per used vertex.
    /// Dijkstra on reduced costs with Johnson potentials.
    fn min_cost_flow(&mut self, count: usize) -> bool {
        let n = self.d.n();
        let s_node = 2 * n;
        let t_node = 2 * n + 1;
        let nodes = 2 * n + 2;
        let inf = i64::MAX / 4;
        let mut pot = vec![0i64; nodes];
        let idx = |x: Node| match x {
            Node::In(v) => 2 * v,
            Node::Out(v) => 2 * v + 1,
        };
        while self.value < count {
            let mut dist = vec![inf; nodes];
            let mut parent = vec![NONE; nodes];
            let mut done = vec![false; nodes];
            dist[s_node] = 0;
            loop {
                let mut best = NONE;
                let mut bd = inf;
                for (x, &dx) in dist.iter().enumerate() {
                    if !done[x] && dx < bd {
                        bd = dx;
                        best = x;
                    }
                }
                if best == NONE {
                    break;
                }
                done[best] = true;
                if best == t_node {
                    break;
                }
                let relax = |x: usize, y: usize, cost: i64, dist: &mut Vec<i64>, parent: &mut Vec<usize>| {
                    if done[y] {
                        return;
                    }
                    let rc = cost + pot[x] - pot[y];
                    debug_assert!(rc >= 0, "negative reduced cost {rc}");
                    if dist[x] + rc < dist[y] {
                        dist[y] = dist[x] + rc;
                        parent[y] = x;
                    }
                };
                if best == s_node {
                    for s in self.is_source.iter() {
                        relax(s_node, idx(Node::In(s)), 0, &mut dist, &mut parent);
                    }
                    continue;
                }
                let v = best / 2;
                if best.is_multiple_of(2) {
                    if !self.used.contains(v) {
                        relax(best, idx(Node::Out(v)), 1, &mut dist, &mut parent);
                    } else if self.pred[v] < TERM {
                        relax(best, idx(Node::Out(self.pred[v])), 0, &mut dist, &mut parent);
                    }
                } else {
                    let mut cand = self.d.out_row(v).clone();
                    cand.intersect_with(&self.allowed);
                    for w in cand.iter() {
                        relax(best, idx(Node::In(w)), 0, &mut dist, &mut parent);
                    }
                    if self.used.contains(v) {
                        relax(best, idx(Node::In(v)), -1, &mut dist, &mut parent);
                    }
                    if self.is_sink.contains(v) {
                        relax(best, t_node, 0, &mut dist, &mut parent);
                    }
                }
            }
            if dist[t_node] >= inf {
                return false;
            }
            let dt = dist[t_node];
            for x in 0..nodes {
                pot[x] += dist[x].min(dt);
            }
            let mut moves = Vec::new();
            let mut cur = parent[t_node];
            while cur != s_node {
                moves.push(if cur.is_multiple_of(2) { Node::In(cur / 2) } else { Node::Out(cur / 2) });
                cur = parent[cur];
            }
            moves.reverse();
            self.augment(&moves);
        }
        true
    }
}

fn endpoint_sets(d: &Digraph, sources: &[usize], sinks: &[usize]) -> Result<(BitSet, BitSet)> {
    if sources.is_empty() || sinks.is_empty() {
        return Err(Error::InvalidParameter("source and sink sets must be non-empty".into()));
    }
    Ok((d.vertex_set(sources.iter().copied())?, d.vertex_set(sinks.iter().copied())?))
}

/// Maximum number (up to `cap`) of vertex-disjoint paths from `sources` to
/// `sinks`. A vertex in both sets counts as a trivial path. When the
/// maximum is below `cap` a separator of the same size is returned.
pub fn max_disjoint_paths(d: &Digraph, sources: &[usize], sinks: &[usize], cap: usize) -> Result<DisjointPaths> {
    let (src, snk) = endpoint_sets(d, sources, sinks)?;
    Ok(max_disjoint_paths_within(d, &BitSet::full(d.n()), &src, &snk, cap))
}

pub(crate) fn max_disjoint_paths_within(
    d: &Digraph,
    allowed: &BitSet,
    sources: &BitSet,
    sinks: &BitSet,
    cap: usize,
) -> DisjointPaths {
    let mut net = Network::new(d, allowed.clone(), sources, sinks);
    net.greedy_seed(cap);
    let cut = net.max_flow(cap);
    let paths = net.decompose().into_iter().map(Path::unchecked).collect();
    DisjointPaths {
        system: PathSystem { paths },
        cut,
    }
}

/// Exactly `count` disjoint paths from `sources` to `sinks` using the fewest
/// vertices in total. Each path is shortcut-free and meets the sources only
/// at its first vertex.
pub fn min_weight_disjoint_paths(d: &Digraph, sources: &[usize], sinks: &[usize], count: usize) -> Result<PathSystem> {
    let (src, snk) = endpoint_sets(d, sources, sinks)?;
    min_weight_within(d, &BitSet::full(d.n()), &src, &snk, count)
}

pub(crate) fn min_weight_within(
    d: &Digraph,
    allowed: &BitSet,
    sources: &BitSet,
    sinks: &BitSet,
    count: usize,
) -> Result<PathSystem> {
    let mut net = Network::new(d, allowed.clone(), sources, sinks);
    if !net.min_cost_flow(count) {
        return Err(Error::Infeasible {
            requested: count,
            found: net.value,
            cut: net.residual_cut(),
        });
    }
    let paths = net
        .decompose()
        .into_iter()
        .map(|p| Path::unchecked(shortcut(d, &p)))
        .collect();
    Ok(PathSystem { paths })
}

/// Result of a local connectivity query between `u` and `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalCut {
    /// Internally disjoint `(u, v)`-paths; counts the arc `u -> v` when present.
    pub value: usize,
    /// The arc `u -> v` exists, so `value` is one more than the count in
    /// the digraph without it.
    pub arc_present: bool,
    pub paths: Vec<Path>,
    /// A `(u, v)`-separator (in the digraph minus the arc `u -> v`) of size
    /// `value - arc_present`, when `value` is below the cap.
    pub separator: Option<Vec<usize>>,
}

/// Internally disjoint `(u, v)`-paths and a matching separator.
pub fn local_cut(d: &Digraph, u: usize, v: usize) -> Result<LocalCut> {
    local_cut_capped(d, u, v, d.n())
}

/// As [`local_cut`], but stops once `cap` paths are found.
pub fn local_cut_capped(d: &Digraph, u: usize, v: usize, cap: usize) -> Result<LocalCut> {
    d.check_vertex(u)?;
    d.check_vertex(v)?;
    if u == v {
        return Err(Error::EqualEndpoints(u));
    }
    let arc_present = d.has_arc(u, v);
    let inner_cap = cap.saturating_sub(arc_present as usize);
    let (count, mut paths, separator) = internal_paths(d, u, v, inner_cap);
    if arc_present {
        paths.insert(0, Path::unchecked(vec![u, v]));
    }
    Ok(LocalCut {
        value: count + arc_present as usize,
        arc_present,
        paths,
        separator,
    })
}

/// Internally disjoint `(u, v)`-paths avoiding the arc `u -> v`: these are
/// vertex-disjoint paths from `N+(u)` to `N-(v)` in `D - {u, v}`.
fn internal_paths(d: &Digraph, u: usize, v: usize, cap: usize) -> (usize, Vec<Path>, Option<Vec<usize>>) {
    let n = d.n();
    if cap == 0 {
        return (0, Vec::new(), None);
    }
    let mut allowed = BitSet::full(n);
    allowed.remove(u);
    allowed.remove(v);
    let mut sources = d.out_row(u).clone();
    sources.intersect_with(&allowed);
    let mut sinks = d.in_row(v).clone();
    sinks.intersect_with(&allowed);
    if sources.is_empty() || sinks.is_empty() {
        return (0, Vec::new(), Some(Vec::new()));
    }
    let res = max_disjoint_paths_within(d, &allowed, &sources, &sinks, cap);
    let count = res.system.len();
    let paths = res
        .system
        .paths
        .into_iter()
        .map(|p| {
            let mut vs = Vec::with_capacity(p.vertices().len() + 2);
            vs.push(u);
            vs.extend_from_slice(p.vertices());
            vs.push(v);
            Path::unchecked(vs)
        })
        .collect();
    (count, paths, res.cut.map(|c| c.separator))
}

fn internal_count(d: &Digraph, u: usize, v: usize, cap: usize) -> usize {
    internal_paths(d, u, v, cap).0
}

/// Exact vertex connectivity.
///
/// Upper bound from degrees, then local cuts from each of the vertices
/// `0, 1, ...` (while the index does not exceed the current bound) to and
/// from every other vertex. A minimum separator misses one of the first
/// `kappa + 1` vertices, so the schedule meets it.
pub fn vertex_connectivity(d: &Digraph) -> Result<usize> {
    let n = d.n();
    if n < 2 {
        return Err(Error::InvalidParameter(format!("connectivity needs n >= 2, got {n}")));
    }
    let mut best = n - 1;
    for v in 0..n {
        let (o, i) = (d.out_degree(v), d.in_degree(v));
        if o < n - 1 {
            best = best.min(o);
        }
        if i < n - 1 {
            best = best.min(i);
        }
    }
    let mut i = 0;
    while i < n && i <= best {
        for w in 0..n {
            if w == i {
                continue;
            }
            for (a, b) in [(i, w), (w, i)] {
                if best == 0 {
                    return Ok(0);
                }
                if !d.has_arc(a, b) {
                    best = best.min(internal_count(d, a, b, best));
                }
            }
        }
        i += 1;
    }
    Ok(best)
}

/// `n >= k + 1` and connectivity at least `k`; flows are capped at `k`.
pub fn is_k_connected(d: &Digraph, k: usize) -> bool {
    let n = d.n();
    if n < k + 1 {
        return false;
    }
    if k == 0 {
        return true;
    }
    (0..k).into_par_iter().all(|i| {
        (0..n).filter(|&w| w != i).all(|w| {
            [(i, w), (w, i)]
                .into_iter()
                .all(|(a, b)| d.has_arc(a, b) || internal_count(d, a, b, k) >= k)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{random_tournament, rotational_tournament, transitive_tournament};

    fn assert_separates(d: &Digraph, sources: &[usize], sinks: &[usize], sep: &[usize]) {
        let mut blocked = BitSet::from_iter_with_len(d.n(), sep.iter().copied());
        let mut stack: Vec<usize> = sources.iter().copied().filter(|v| !blocked.contains(*v)).collect();
        for &s in &stack {
            blocked.insert(s);
        }
        while let Some(v) = stack.pop() {
            assert!(!sinks.contains(&v), "sink {v} reachable past separator {sep:?}");
            for w in d.out_row(v).iter() {
                if blocked.insert(w) {
                    stack.push(w);
                }
            }
        }
    }

    #[test]
    fn complete_digraph_single_arcs() {
        let d = Digraph::complete(6);
        let r = max_disjoint_paths(&d, &[0, 1], &[4, 5], 2).unwrap();
        assert_eq!(r.system.len(), 2);
        assert!(r.system.paths.iter().all(|p| p.len() == 1));
        assert!(r.cut.is_none());
    }

    #[test]
    fn bottleneck() {
        // 0,1 -> 2 -> 3,4 only
        let d = Digraph::from_arcs(5, [(0, 2), (1, 2), (2, 3), (2, 4)]).unwrap();
        let r = max_disjoint_paths(&d, &[0, 1], &[3, 4], 5).unwrap();
        assert_eq!(r.system.len(), 1);
        let cut = r.cut.unwrap();
        assert_eq!(cut.separator, vec![2]);
        assert_separates(&d, &[0, 1], &[3, 4], &cut.separator);
    }

    #[test]
    fn overlap_is_trivial_path() {
        let d = Digraph::complete(4);
        let r = max_disjoint_paths(&d, &[0, 1], &[1, 2], 4).unwrap();
        assert_eq!(r.system.len(), 2);
        assert!(r.system.paths.iter().any(|p| p.is_trivial() && p.first() == 1));
    }

    #[test]
    fn empty_sets_rejected() {
        let d = Digraph::complete(3);
        assert!(max_disjoint_paths(&d, &[], &[1], 1).is_err());
    }

    #[test]
    fn min_weight_complete() {
        let d = Digraph::complete(8);
        let ps = min_weight_disjoint_paths(&d, &[0, 1, 2], &[5, 6, 7], 3).unwrap();
        assert_eq!(ps.len(), 3);
        assert_eq!(ps.total_vertices(), 6);
    }

    #[test]
    fn min_weight_infeasible_returns_cut() {
        let d = Digraph::from_arcs(5, [(0, 2), (1, 2), (2, 3), (2, 4)]).unwrap();
        match min_weight_disjoint_paths(&d, &[0, 1], &[3, 4], 2) {
            Err(Error::Infeasible { requested, found, cut }) => {
                assert_eq!((requested, found), (2, 1));
                assert_eq!(cut.separator, vec![2]);
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn local_cuts() {
        let tt = transitive_tournament(&[0, 1, 2, 3, 4]).unwrap();
        let c = local_cut(&tt, 4, 0).unwrap();
        assert_eq!(c.value, 0);
        assert_eq!(c.separator, Some(vec![]));
        let k5 = Digraph::complete(5);
        let c = local_cut(&k5, 1, 3).unwrap();
        assert_eq!(c.value, 4);
        assert!(c.arc_present);
        assert!(local_cut(&k5, 2, 2).is_err());
        let r9 = rotational_tournament(9).unwrap();
        for (u, v) in [(0, 5), (3, 1), (8, 2)] {
            assert!(local_cut(&r9, u, v).unwrap().value >= 3);
        }
    }

    #[test]
    fn local_cut_paths_are_internally_disjoint() {
        let d = random_tournament(14, 3);
        let c = local_cut(&d, 2, 9).unwrap();
        let mut seen = BitSet::new(14);
        for p in &c.paths {
            assert_eq!((p.first(), p.last()), (2, 9));
            Path::new(&d, p.vertices().to_vec()).unwrap();
            for &x in &p.vertices()[1..p.vertices().len() - 1] {
                assert!(seen.insert(x));
            }
        }
        assert_eq!(c.paths.len(), c.value);
        if let Some(sep) = c.separator {
            assert_eq!(sep.len() + c.arc_present as usize, c.value);
        }
    }

    #[test]
    fn connectivity_small_cases() {
        assert_eq!(vertex_connectivity(&transitive_tournament(&[0, 1, 2, 3]).unwrap()).unwrap(), 0);
        assert_eq!(vertex_connectivity(&Digraph::complete(5)).unwrap(), 4);
        let r9 = rotational_tournament(9).unwrap();
        assert!(vertex_connectivity(&r9).unwrap() >= 3);
        assert!(vertex_connectivity(&Digraph::new(1)).is_err());
        let r15 = rotational_tournament(15).unwrap();
        assert!(is_k_connected(&r15, 5));
        assert!(!is_k_connected(&transitive_tournament(&[0, 1, 2, 3, 4]).unwrap(), 1));
        assert!(!is_k_connected(&Digraph::complete(3), 3));
    }
}
