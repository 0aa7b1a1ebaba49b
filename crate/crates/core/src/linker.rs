//! Constructive k-linkage in highly connected semicomplete digraphs.
//!
//! The construction runs in three phases:
//!
//! 1. a set `U` of `3k` vertices, each nearly in-dominating in what is left
//!    after removing the terminals and earlier picks, and `k + 1` (or `k`)
//!    disjoint paths `Q` from `U` to the sinks `Y` (plus one extra sink);
//! 2. the path-adjustment program, which reroutes `Q` until every terminal
//!    `x` with many out-neighbours dominating `U` owns a private vertex
//!    `f(x)` off the paths;
//! 3. short paths `P` from each `x_i` into `U`, and greedy connectors `R`
//!    of length at most three, giving `x_i -> ... -> y_i` as `P_i R_i Q_i`.
//!
//! Every step asserts the bounds it relies on; a violated bound stops the
//! run with a [`LinkFailure`] that says whether the input hypotheses hold.

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::certificate::verify_linkage;
use crate::counterexample::sampled_connectivity_check;
use crate::digraph::{shortcut, Digraph};
use crate::dominators::{domination_profile, find_nearly_in_dominating, find_nearly_out_dominating, Direction};
use crate::error::{Error, Result};
use crate::flow::{is_k_connected, min_weight_within, CutCertificate};

/// A one-pair tournament on `5 + 2 * levels` vertices whose initial paths
/// cover every `N_x` vertex, so the adjustment program must reroute.
///
/// Vertex 0 is `x`, 1 is `y`, 2..5 become `U`. Two chains `a_1..a_L` and
/// `b_1..b_L` (ids `5 + 2(i-1)` and `6 + 2(i-1)`) move up one level per
/// arc; every other arc points down a level, so the only shortest routes
/// from `U` walk each chain in full. `a_L -> y` is the only way into `y`,
/// and `b_L` ends up as the extra sink. Needs `levels >= 8` so that
/// `|N_x| = 2(levels - 1)` reaches the threshold for `k = 1`.
pub fn adversarial_adjustment_instance(levels: usize) -> Result<(Digraph, Vec<(usize, usize)>)> {
    if levels < 8 {
        return Err(Error::InvalidParameter(format!("need at least 8 levels, got {levels}")));
    }
    let (x, y, u1, u2, u3) = (0, 1, 2, 3, 4);
    let a = |i: usize| 5 + 2 * (i - 1);
    let b = |i: usize| 6 + 2 * (i - 1);
    let n = 5 + 2 * levels;
    let mut d = Digraph::new(n);
    for i in 1..=levels {
        for j in 1..=levels {
            // One step forward, or a skip of two or more back.
            if j == i + 1 || j + 2 <= i {
                d.add_arc(a(i), a(j));
                d.add_arc(b(i), b(j));
            }
            if j >= i {
                d.add_arc(b(j), a(i));
            } else {
                d.add_arc(a(i), b(j));
            }
        }
    }
    for v in 5..n {
        let level = (v - 5) / 2 + 1;
        for u in [u1, u2, u3] {
            let entry = level == 1 && ((u == u1 && v == a(1)) || (u == u2 && v == b(1)));
            if entry {
                d.add_arc(u, v);
            } else {
                d.add_arc(v, u);
            }
        }
        if level >= 2 {
            d.add_arc(x, v);
        } else {
            d.add_arc(v, x);
        }
        if v == a(levels) {
            d.add_arc(v, y);
        } else {
            d.add_arc(y, v);
        }
    }
    d.add_arc(u2, u1);
    d.add_arc(u1, u3);
    d.add_arc(u2, u3);
    for u in [u1, u2, u3] {
        d.add_arc(x, u);
        d.add_arc(y, u);
    }
    d.add_arc(x, y);
    debug_assert!(d.is_tournament());
    Ok((d, vec![(x, y)]))
}

/// Checks that `pairs` lists `k >= 1` pairs over `2k` distinct vertices.
pub fn validate_pairs(d: &Digraph, pairs: &[(usize, usize)]) -> Result<()> {
    if pairs.is_empty() {
        return Err(Error::InvalidParameter("at least one terminal pair is required".into()));
    }
    let mut seen = BitSet::new(d.n());
    for &(x, y) in pairs {
        d.check_vertex(x)?;
        d.check_vertex(y)?;
        for v in [x, y] {
            if !seen.insert(v) {
                return Err(Error::InvalidParameter(format!("terminal {v} appears twice")));
            }
        }
    }
    Ok(())
}

/// A semicomplete digraph with `k` terminal pairs over `2k` distinct vertices.
#[derive(Debug, Clone)]
pub struct LinkageInstance<'a> {
    pub d: &'a Digraph,
    pub pairs: Vec<(usize, usize)>,
}

impl<'a> LinkageInstance<'a> {
    pub fn new(d: &'a Digraph, pairs: Vec<(usize, usize)>) -> Result<Self> {
        validate_pairs(d, &pairs)?;
        d.require_semicomplete()?;
        Ok(LinkageInstance { d, pairs })
    }

    pub fn k(&self) -> usize {
        self.pairs.len()
    }
}

/// Minimum out-degree the sufficient condition asks for: `7k^2 + 36k`.
pub fn required_out_degree(k: usize) -> usize {
    7 * k * k + 36 * k
}

/// `|N_x|` needed for `x` to join `X1`: `7k^2 + 6k + 1`.
pub fn x1_threshold(k: usize) -> usize {
    7 * k * k + 6 * k + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkStep {
    DominatingSet,
    Classify,
    InitialPaths,
    AdjustPaths,
    FinalizeQ,
    BuildP,
    BuildR,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    /// The input misses the minimum out-degree or the connectivity bound.
    HypothesisViolation,
    /// The hypotheses hold, so the failure is an implementation defect.
    Defect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RerouteCase {
    /// `o -> x**`.
    DirectArc,
    /// A middle vertex off all paths.
    FreshMiddle,
    /// Two middles `r1` before `r2` on another path `Q_m`.
    PigeonholePair,
    /// A middle on the special path itself; one suffices.
    SpecialPathMiddle,
    /// A middle on `Q_j` after `x**`.
    SamePathMiddle,
    /// `o'` lies on the special path, which is cut back to end at `o'`.
    TruncateSpecial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "procedure", rename_all = "snake_case")]
pub enum TraceEvent {
    DominatingSet {
        u: Vec<usize>,
    },
    Classified {
        x1: Vec<usize>,
        x2: Vec<usize>,
        n_sizes: Vec<usize>,
        n_total: usize,
        extra_sink: Option<usize>,
    },
    InitialPaths {
        paths: usize,
        total_vertices: usize,
    },
    A1 {
        x: usize,
        x_star: usize,
        i_size: usize,
        x1_star_size: usize,
    },
    A2 {
        round: usize,
        o: usize,
        o_prime: usize,
        j: usize,
        x_star: usize,
        x_star_star: usize,
        x_r: usize,
        case: RerouteCase,
        /// Index of the second rerouted path (`m` in the pigeonhole case).
        other_path: Option<usize>,
        bad_count: usize,
        f_size: usize,
        w_before: usize,
        w_after: usize,
        w_growth: usize,
        o_cand_size: usize,
        i_size: usize,
        x1_star_size: usize,
        /// `init_permutation[i]` is the index of the path whose start
        /// vertex path `i` now starts from.
        init_permutation: Vec<usize>,
        affected: Vec<usize>,
    },
    Finalized {
        swaps: usize,
        total_vertices: usize,
    },
    BuiltP {
        terminals: Vec<usize>,
        qualifying_counts: Vec<usize>,
    },
    BuiltR {
        lengths: Vec<usize>,
        two_path_candidates: Vec<usize>,
        three_path_first_hops: Vec<usize>,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkerTrace {
    pub events: Vec<TraceEvent>,
}

impl LinkerTrace {
    pub fn a2_rounds(&self) -> impl Iterator<Item = &TraceEvent> {
        self.events.iter().filter(|e| matches!(e, TraceEvent::A2 { .. }))
    }
}

/// Output of [`classify_terminals`]; vertex lists are sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    /// `n_x[i]`: out-neighbours of `x_i` outside `X + Y + U` with at least
    /// `2k + 1` out-neighbours in `U`.
    pub n_x: Vec<Vec<usize>>,
    /// Terminal indices with `|N_x| >= 7k^2 + 6k + 1`.
    pub x1: Vec<usize>,
    pub x2: Vec<usize>,
    pub n: Vec<usize>,
    pub extra_sink: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkerState {
    pub k: usize,
    pub xs: Vec<usize>,
    pub ys: Vec<usize>,
    pub u: Vec<usize>,
    pub classification: Option<Classification>,
    /// Paths from `U`; index `i < k` ends at `y_i`, index `k` (when present)
    /// at the special terminal.
    pub q_initial: Vec<Vec<usize>>,
    pub q_star: Vec<Vec<usize>>,
    pub q_final: Vec<Vec<usize>>,
    /// Terminal indices matched so far.
    pub i_set: Vec<usize>,
    pub x1_star: Vec<usize>,
    /// `matching[i] = Some(f(x_i))` for matched terminals.
    pub matching: Vec<Option<usize>>,
    pub w: Vec<usize>,
    pub special: Option<usize>,
    pub p: Vec<Vec<usize>>,
    pub r: Vec<Vec<usize>>,
    pub trace: LinkerTrace,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepError {
    pub step: LinkStep,
    pub message: String,
    pub cut: Option<CutCertificate>,
}

fn fail<T>(step: LinkStep, message: impl Into<String>) -> std::result::Result<T, StepError> {
    Err(StepError {
        step,
        message: message.into(),
        cut: None,
    })
}

type StepResult<T> = std::result::Result<T, StepError>;

/// Path `i` split into its three stages.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSegments {
    pub p: Vec<usize>,
    pub r: Vec<usize>,
    pub q: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkageCertificate {
    pub pairs: Vec<(usize, usize)>,
    pub paths: Vec<Vec<usize>>,
    pub segments: Vec<PathSegments>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub min_out_degree: usize,
    pub required_out_degree: usize,
    pub connectivity_target: usize,
    pub connectivity_ok: bool,
    /// `false` when connectivity was only sampled.
    pub exact: bool,
    pub min_sampled: Option<usize>,
}

impl HypothesisReport {
    pub fn holds(&self) -> bool {
        self.min_out_degree >= self.required_out_degree && self.connectivity_ok
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum HypothesisMode {
    Exact,
    Sample { pairs: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkOptions {
    /// Check the out-degree and connectivity bounds before running.
    pub hypotheses: Option<HypothesisMode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkFailure {
    pub step: LinkStep,
    pub message: String,
    pub kind: FailureKind,
    pub hypotheses: HypothesisReport,
    pub cut: Option<CutCertificate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum LinkOutcome {
    Linked(LinkageCertificate),
    Failed(LinkFailure),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkRun {
    pub outcome: LinkOutcome,
    pub hypotheses: Option<HypothesisReport>,
    pub state: LinkerState,
}

impl LinkRun {
    pub fn certificate(&self) -> Option<&LinkageCertificate> {
        match &self.outcome {
            LinkOutcome::Linked(c) => Some(c),
            LinkOutcome::Failed(_) => None,
        }
    }
}

pub fn check_hypotheses(d: &Digraph, k: usize, mode: HypothesisMode) -> Result<HypothesisReport> {
    let target = 2 * k + 1;
    let (connectivity_ok, exact, min_sampled) = match mode {
        HypothesisMode::Exact => (is_k_connected(d, target), true, None),
        HypothesisMode::Sample { pairs, seed } => {
            let s = sampled_connectivity_check(d, target, pairs, seed)?;
            (s.passed && d.n() > target, false, s.min_observed)
        }
    };
    Ok(HypothesisReport {
        min_out_degree: d.min_out_degree()?,
        required_out_degree: required_out_degree(k),
        connectivity_target: target,
        connectivity_ok,
        exact,
        min_sampled,
    })
}

fn mask(n: usize, vs: impl IntoIterator<Item = usize>) -> BitSet {
    BitSet::from_iter_with_len(n, vs)
}

fn paths_mask(n: usize, paths: &[Vec<usize>]) -> BitSet {
    mask(n, paths.iter().flatten().copied())
}

fn total_vertices(paths: &[Vec<usize>]) -> usize {
    paths.iter().map(Vec::len).sum()
}

/// `3k` vertices, each nearly in-dominating in `D` minus the terminals and
/// the earlier picks.
pub fn build_dominating_set(d: &Digraph, xs: &[usize], ys: &[usize], k: usize) -> Result<Vec<usize>> {
    if d.n() < xs.len() + ys.len() + 3 * k {
        return Err(Error::InvalidParameter(format!(
            "{} vertices cannot hold 2k terminals and 3k dominating vertices (k = {k})",
            d.n()
        )));
    }
    let mut removed: Vec<usize> = xs.iter().chain(ys).copied().collect();
    let mut u = Vec::with_capacity(3 * k);
    for _ in 0..3 * k {
        let sub = d.delete(&removed)?;
        let local = find_nearly_in_dominating(&sub.graph)?;
        let profile = domination_profile(&sub.graph, local, Direction::In, sub.graph.n())?;
        assert!(profile.verdict, "pick {local} is not nearly in-dominating");
        let v = sub.parent_of(local);
        u.push(v);
        removed.push(v);
    }
    Ok(u)
}

/// `N_x` for every terminal, the split into `X1` / `X2`, their union `N`
/// over `X1`, and the extra sink: a nearly out-dominating vertex of `D<N>`.
pub fn classify_terminals(d: &Digraph, xs: &[usize], ys: &[usize], u: &[usize], k: usize) -> Result<Classification> {
    let n = d.n();
    let u_mask = mask(n, u.iter().copied());
    let mut rest = mask(n, xs.iter().chain(ys).chain(u).copied()).complement();
    let dominators: BitSet = mask(n, rest.iter().filter(|&v| d.out_row(v).intersection_count(&u_mask) > 2 * k));
    rest.intersect_with(&dominators);
    let n_x: Vec<Vec<usize>> = xs
        .iter()
        .map(|&x| {
            let mut s = d.out_row(x).clone();
            s.intersect_with(&rest);
            s.to_vec()
        })
        .collect();
    let (x1, x2): (Vec<usize>, Vec<usize>) = (0..xs.len()).partition(|&i| n_x[i].len() >= x1_threshold(k));
    let n_union = mask(n, x1.iter().flat_map(|&i| n_x[i].iter().copied())).to_vec();
    let extra_sink = if n_union.is_empty() {
        None
    } else {
        let sub = d.induced(&n_union)?;
        Some(sub.parent_of(find_nearly_out_dominating(&sub.graph)?))
    };
    Ok(Classification {
        n_x,
        x1,
        x2,
        n: n_union,
        extra_sink,
    })
}

/// Disjoint paths of minimum total order in `D - X` from `U` to `Y` (plus
/// the extra sink when given), indexed by their terminal.
pub fn initial_path_system(
    d: &Digraph,
    xs: &[usize],
    ys: &[usize],
    u: &[usize],
    extra_sink: Option<usize>,
) -> StepResult<Vec<Vec<usize>>> {
    let n = d.n();
    let allowed = mask(n, xs.iter().copied()).complement();
    let sources = mask(n, u.iter().copied());
    let sink_list: Vec<usize> = ys.iter().copied().chain(extra_sink).collect();
    let sinks = mask(n, sink_list.iter().copied());
    let system = match min_weight_within(d, &allowed, &sources, &sinks, sink_list.len()) {
        Ok(s) => s,
        Err(Error::Infeasible { requested, found, cut }) => {
            return Err(StepError {
                step: LinkStep::InitialPaths,
                message: format!("only {found} of {requested} disjoint paths from U to the sinks in D - X"),
                cut: Some(cut),
            })
        }
        Err(e) => return fail(LinkStep::InitialPaths, e.to_string()),
    };
    let mut out = vec![Vec::new(); sink_list.len()];
    for p in system.paths {
        let idx = sink_list.iter().position(|&t| t == p.last()).expect("paths end at sinks");
        out[idx] = p.into_vertices();
    }
    Ok(out)
}

struct Adjuster<'a> {
    d: &'a Digraph,
    k: usize,
    x_mask: BitSet,
    u_mask: BitSet,
    n_mask: BitSet,
    cls: &'a Classification,
}

impl Adjuster<'_> {
    fn minimal(&self, p: &[usize]) -> bool {
        shortcut(self.d, p).len() == p.len()
    }

    fn check_paths(&self, q: &[Vec<usize>], ys: &[usize]) -> StepResult<()> {
        let n = self.d.n();
        let mut seen = BitSet::new(n);
        for (i, p) in q.iter().enumerate() {
            if p.is_empty() {
                return fail(LinkStep::AdjustPaths, format!("path {i} is empty"));
            }
            if i < ys.len() && *p.last().unwrap() != ys[i] {
                return fail(LinkStep::AdjustPaths, format!("path {i} does not end at its sink"));
            }
            if !self.u_mask.contains(p[0]) || p[1..].iter().any(|&v| self.u_mask.contains(v)) {
                return fail(LinkStep::AdjustPaths, format!("path {i} meets U other than at its start"));
            }
            for &v in p {
                if self.x_mask.contains(v) || !seen.insert(v) {
                    return fail(LinkStep::AdjustPaths, format!("path {i} reuses or leaves D - X at {v}"));
                }
            }
            if p.windows(2).any(|w| !self.d.has_arc(w[0], w[1])) || !self.minimal(p) {
                return fail(LinkStep::AdjustPaths, format!("path {i} is not a minimal path"));
            }
        }
        Ok(())
    }

    /// Vertex `v` is (2k+2)-out-good for `o` inside `D<N>`.
    fn good_in_n(&self, o: usize, v: usize) -> bool {
        if v == o {
            return false;
        }
        if self.d.has_arc(o, v) {
            return true;
        }
        let mut mid = self.d.out_row(o).clone();
        mid.intersect_with(self.d.in_row(v));
        mid.intersection_count(&self.n_mask) >= 2 * self.k + 2
    }
}

fn locate(q: &[Vec<usize>], v: usize) -> Option<(usize, usize)> {
    q.iter()
        .enumerate()
        .find_map(|(i, p)| p.iter().position(|&x| x == v).map(|pos| (i, pos)))
}

/// Procedures (A1) and (A2), alternated until every terminal of `X1` has
/// a private matched vertex off the paths.
pub fn adjust_paths(d: &Digraph, state: &mut LinkerState) -> StepResult<()> {
    let k = state.k;
    let n = d.n();
    let cls = state.classification.clone().expect("classified before adjusting");
    let mut q = state.q_initial.clone();
    state.matching = vec![None; k];
    if cls.x1.is_empty() {
        state.q_star = q;
        return Ok(());
    }
    let adj = Adjuster {
        d,
        k,
        x_mask: mask(n, state.xs.iter().copied()),
        u_mask: mask(n, state.u.iter().copied()),
        n_mask: mask(n, cls.n.iter().copied()),
        cls: &cls,
    };
    adj.check_paths(&q, &state.ys)?;
    let mut in_i = vec![false; k];
    let mut x1_star = BitSet::new(n);
    let mut w = BitSet::new(n);
    let mut round = 0;
    loop {
        // (A1): hand out fresh vertices while any pending terminal has one.
        loop {
            let mut progressed = false;
            let on_q = paths_mask(n, &q);
            for &xi in &cls.x1 {
                if in_i[xi] {
                    continue;
                }
                if let Some(&v) = adj.cls.n_x[xi].iter().find(|&&v| !on_q.contains(v) && !x1_star.contains(v)) {
                    in_i[xi] = true;
                    x1_star.insert(v);
                    state.x1_star.push(v);
                    state.matching[xi] = Some(v);
                    state.i_set.push(xi);
                    progressed = true;
                    state.trace.events.push(TraceEvent::A1 {
                        x: xi,
                        x_star: v,
                        i_size: state.i_set.len(),
                        x1_star_size: state.x1_star.len(),
                    });
                }
            }
            if !progressed {
                break;
            }
        }
        let pending: Vec<usize> = cls.x1.iter().copied().filter(|&xi| !in_i[xi]).collect();
        if pending.is_empty() {
            break;
        }
        round += 1;
        if round > cls.x1.len() {
            return fail(LinkStep::AdjustPaths, format!("more than |X1| = {} rounds of (A2)", cls.x1.len()));
        }
        a2_round(&adj, state, &mut q, &pending, &mut in_i, &mut x1_star, &mut w, round)?;
    }
    state.w = w.to_vec();
    state.q_star = q;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn a2_round(
    adj: &Adjuster<'_>,
    state: &mut LinkerState,
    q: &mut Vec<Vec<usize>>,
    pending: &[usize],
    in_i: &mut [bool],
    x1_star: &mut BitSet,
    w: &mut BitSet,
    round: usize,
) -> StepResult<()> {
    let (d, k) = (adj.d, adj.k);
    let n = d.n();
    let step = LinkStep::AdjustPaths;
    let o = *q[k].last().unwrap();
    let w_before = w.count();
    let pending_union = mask(n, pending.iter().flat_map(|&xi| adj.cls.n_x[xi].iter().copied()));
    let mut pool = pending_union.clone();
    pool.difference_with(w);
    pool.difference_with(x1_star);
    let o_good = mask(n, pool.iter().filter(|&v| adj.good_in_n(o, v)));
    let mut bad = pool.clone();
    bad.difference_with(&o_good);
    let bad_count = bad.count() - bad.contains(o) as usize;
    if bad_count > 4 * k + 4 {
        return fail(step, format!("{bad_count} vertices are not (2k+2)-out-good for o = {o}; at most 4k+4 allowed"));
    }
    w.union_with(&bad);
    w.union_with(x1_star);
    let mut f = BitSet::new(n);
    for p in q.iter() {
        for &v in p.iter().rev().filter(|&&v| o_good.contains(v)).take(2) {
            f.insert(v);
        }
    }
    w.union_with(&f);
    let w_after = w.count();
    let w_growth = w_after - w_before;
    if w_growth > 7 * k + 6 {
        return fail(step, format!("W grew by {w_growth} > 7k+6"));
    }
    let mut o_cand = pending_union;
    o_cand.difference_with(w);
    if o_cand.is_empty() {
        return fail(step, "O_cand is empty");
    }
    let cand = o_cand.to_vec();
    let sub = d.induced(&cand).map_err(|e| StepError {
        step,
        message: e.to_string(),
        cut: None,
    })?;
    let o_prime = sub.parent_of(find_nearly_out_dominating(&sub.graph).map_err(|e| StepError {
        step,
        message: e.to_string(),
        cut: None,
    })?);
    let Some((j, pos)) = locate(q, o_prime) else {
        return fail(step, format!("o' = {o_prime} lies on no path"));
    };
    let after: Vec<usize> = q[j][pos + 1..].iter().copied().filter(|&v| o_good.contains(v)).collect();
    if after.len() < 2 {
        return fail(step, format!("fewer than two good vertices follow o' = {o_prime} on path {j}"));
    }
    let (x_star, x_ss) = (after[0], after[1]);
    let Some(x_r) = pending.iter().copied().find(|&xi| adj.cls.n_x[xi].binary_search(&x_star).is_ok()) else {
        return fail(step, format!("x* = {x_star} lies in no pending N_x"));
    };
    let old = q.clone();
    let mut blocked = adj.x_mask.clone();
    blocked.union_with(&adj.u_mask);
    blocked.union_with(x1_star);
    let Some(rr) = reroute(d, &old, j, pos, x_ss, &blocked) else {
        return fail(step, format!("no reroute from o = {o} to x** = {x_ss}"));
    };
    *q = rr.paths;
    let (case, other_path, perm) = (rr.case, rr.other_path, rr.perm);
    for p in q.iter_mut() {
        *p = shortcut(d, p);
    }
    adj.check_paths(q, &state.ys)?;
    if paths_mask(n, q).contains(x_star) {
        return fail(step, format!("x* = {x_star} was not released"));
    }
    in_i[x_r] = true;
    x1_star.insert(x_star);
    state.x1_star.push(x_star);
    state.matching[x_r] = Some(x_star);
    state.i_set.push(x_r);
    let affected: Vec<usize> = (0..=k).filter(|&i| q[i] != old[i]).collect();
    state.trace.events.push(TraceEvent::A2 {
        round,
        o,
        o_prime,
        j,
        x_star,
        x_star_star: x_ss,
        x_r,
        case,
        other_path,
        bad_count,
        f_size: f.count(),
        w_before,
        w_after,
        w_growth,
        o_cand_size: cand.len(),
        i_size: state.i_set.len(),
        x1_star_size: state.x1_star.len(),
        init_permutation: perm,
        affected,
    });
    Ok(())
}

/// Result of splicing the paths in one (A2) round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reroute {
    pub paths: Vec<Vec<usize>>,
    pub case: RerouteCase,
    pub other_path: Option<usize>,
    pub perm: Vec<usize>,
}

/// Splices the paths so that the segment of `Q_j` strictly between `o'`
/// (at index `pos`) and `x**` leaves the system. The last path is the
/// special one, ending at `o`; afterwards it is `Q_j` cut at `o'`. Middle
/// vertices in `blocked` are never used. Paths are not re-minimised here.
pub fn reroute(d: &Digraph, old: &[Vec<usize>], j: usize, pos: usize, x_ss: usize, blocked: &BitSet) -> Option<Reroute> {
    let k = old.len() - 1;
    let mut q = old.to_vec();
    let mut perm: Vec<usize> = (0..=k).collect();
    let mut other_path = None;
    if j == k {
        q[k].truncate(pos + 1);
        return Some(Reroute {
            paths: q,
            case: RerouteCase::TruncateSpecial,
            other_path,
            perm,
        });
    }
    let special = &old[k];
    let o = *special.last()?;
    let xss_pos = old[j].iter().position(|&v| v == x_ss)?;
    let join = |a: &[usize], b: &[usize]| -> Vec<usize> { a.iter().chain(b).copied().collect() };
    let case = if d.has_arc(o, x_ss) {
        q[j] = join(special, &old[j][xss_pos..]);
        perm[j] = k;
        RerouteCase::DirectArc
    } else {
        let on_q = paths_mask(d.n(), old);
        let mut middles = d.out_row(o).clone();
        middles.intersect_with(d.in_row(x_ss));
        middles.difference_with(blocked);
        if let Some(mid) = middles.iter().find(|&v| !on_q.contains(v)) {
            q[j] = join(&join(special, &[mid]), &old[j][xss_pos..]);
            perm[j] = k;
            RerouteCase::FreshMiddle
        } else {
            let by_path: Vec<Vec<usize>> = old
                .iter()
                .map(|p| (0..p.len()).filter(|&i| middles.contains(p[i])).collect())
                .collect();
            if let Some(m) = (0..k).find(|&m| m != j && by_path[m].len() >= 2) {
                let (r1, r2) = (by_path[m][0], by_path[m][1]);
                q[m] = join(special, &old[m][r2..]);
                q[j] = join(&old[m][..=r1], &old[j][xss_pos..]);
                perm[m] = k;
                perm[j] = m;
                other_path = Some(m);
                RerouteCase::PigeonholePair
            } else if let Some(&r1) = by_path[k].first() {
                q[j] = join(&special[..=r1], &old[j][xss_pos..]);
                perm[j] = k;
                other_path = Some(k);
                RerouteCase::SpecialPathMiddle
            } else if let Some(&r) = by_path[j].iter().find(|&&i| i > xss_pos) {
                q[j] = join(special, &old[j][r..]);
                perm[j] = k;
                RerouteCase::SamePathMiddle
            } else {
                return None;
            }
        }
    };
    q[k] = old[j][..=pos].to_vec();
    perm[k] = j;
    Some(Reroute {
        paths: q,
        case,
        other_path,
        perm,
    })
}

/// Post-hoc check of the adjustment output: `X1*` off the paths, one
/// matched vertex per `X1` terminal via an arc, paths valid.
pub fn check_adjustment_conditions(d: &Digraph, state: &LinkerState) -> std::result::Result<(), String> {
    let cls = state.classification.as_ref().ok_or("not classified")?;
    let on_q = paths_mask(d.n(), &state.q_star);
    if let Some(&v) = state.x1_star.iter().find(|&&v| on_q.contains(v)) {
        return Err(format!("matched vertex {v} lies on a path"));
    }
    if state.x1_star.len() != cls.x1.len() {
        return Err(format!("{} matched vertices for {} terminals", state.x1_star.len(), cls.x1.len()));
    }
    let mut used = BitSet::new(d.n());
    for &xi in &cls.x1 {
        let v = state.matching[xi].ok_or(format!("terminal {xi} unmatched"))?;
        if !d.has_arc(state.xs[xi], v) || cls.n_x[xi].binary_search(&v).is_err() {
            return Err(format!("{v} is not in N_x of terminal {xi}"));
        }
        if !used.insert(v) {
            return Err(format!("{v} matched twice"));
        }
    }
    Ok(())
}

/// The first `k` paths, shortened by `u v Q_j[v..]` swaps (`u` an unused
/// vertex of `U`, `v` at index two or later) until none applies.
pub fn finalize_q(d: &Digraph, state: &mut LinkerState) -> usize {
    let k = state.k;
    let n = d.n();
    let mut q: Vec<Vec<usize>> = state.q_star[..k].to_vec();
    let u_mask = mask(n, state.u.iter().copied());
    let mut swaps = 0;
    loop {
        let mut free = u_mask.clone();
        free.difference_with(&paths_mask(n, &q));
        let hit = (0..k).find_map(|j| {
            (2..q[j].len())
                .rev()
                .find_map(|pos| d.in_row(q[j][pos]).first_common(&free).map(|u| (j, pos, u)))
        });
        let Some((j, pos, u)) = hit else { break };
        let mut p = vec![u];
        p.extend_from_slice(&q[j][pos..]);
        q[j] = p;
        swaps += 1;
    }
    state.trace.events.push(TraceEvent::Finalized {
        swaps,
        total_vertices: total_vertices(&q),
    });
    state.q_final = q;
    swaps
}

/// A swap `u v Q_j[v..]` still available after [`finalize_q`], if any.
pub fn remaining_swap(d: &Digraph, state: &LinkerState) -> Option<(usize, usize, usize)> {
    let n = d.n();
    let mut free = mask(n, state.u.iter().copied());
    free.difference_with(&paths_mask(n, &state.q_final));
    for (j, p) in state.q_final.iter().enumerate() {
        for (pos, &v) in p.iter().enumerate().skip(2) {
            for u in free.iter() {
                if d.has_arc(u, v) {
                    return Some((j, pos, u));
                }
            }
        }
    }
    None
}

/// Kuhn's augmenting-path matching, left vertices in the given order.
fn bipartite_matching(left: &[usize], options: &[Vec<usize>], n: usize) -> Vec<Option<usize>> {
    fn augment(l: usize, options: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
        for &r in &options[l] {
            if seen[r] {
                continue;
            }
            seen[r] = true;
            if owner[r].is_none_or(|other| augment(other, options, owner, seen)) {
                owner[r] = Some(l);
                return true;
            }
        }
        false
    }
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for l in 0..left.len() {
        let mut seen = vec![false; n];
        augment(l, options, &mut owner, &mut seen);
    }
    let mut out = vec![None; left.len()];
    for (r, o) in owner.iter().enumerate() {
        if let Some(l) = o {
            out[*l] = Some(r);
        }
    }
    out
}

/// Paths `x -> f(x) -> u` into unused vertices of `U` for `X1`, trivial
/// paths for `X2`; each end must see enough out-neighbours that are
/// in-dominated by `U - Init(Q**)`.
pub fn build_p(d: &Digraph, state: &mut LinkerState) -> StepResult<()> {
    let k = state.k;
    let n = d.n();
    let step = LinkStep::BuildP;
    let cls = state.classification.clone().expect("classified");
    let on_q = paths_mask(n, &state.q_final);
    let mut free_u = mask(n, state.u.iter().copied());
    free_u.difference_with(&on_q);
    let stars: Vec<usize> = cls.x1.iter().map(|&xi| state.matching[xi].expect("matched")).collect();
    let options: Vec<Vec<usize>> = stars
        .iter()
        .map(|&s| {
            let mut o = d.out_row(s).clone();
            o.intersect_with(&free_u);
            o.to_vec()
        })
        .collect();
    let m2 = bipartite_matching(&stars, &options, n);
    let mut p: Vec<Vec<usize>> = state.xs.iter().map(|&x| vec![x]).collect();
    for (idx, &xi) in cls.x1.iter().enumerate() {
        let Some(u) = m2[idx] else {
            return fail(step, format!("no free vertex of U left for f(x_{xi}) = {}", stars[idx]));
        };
        p[xi] = vec![state.xs[xi], stars[idx], u];
    }
    let all_p = paths_mask(n, &p);
    let x2_mask = mask(n, cls.x2.iter().map(|&i| state.xs[i]));
    for (i, path) in p.iter().enumerate() {
        if cls.x1.contains(&i) && path.iter().any(|&v| on_q.contains(v) || x2_mask.contains(v)) {
            return fail(step, format!("path P_{i} meets Q** or X2"));
        }
    }
    if all_p.intersection_count(&on_q) > 0 {
        return fail(step, "P meets Q**");
    }
    let mut rest = mask(n, state.xs.iter().chain(&state.ys).chain(&state.u).copied()).complement();
    let mut u_free_of_init = mask(n, state.u.iter().copied());
    for path in &state.q_final {
        u_free_of_init.remove(path[0]);
    }
    rest = mask(n, rest.iter().filter(|&v| d.in_row(v).intersection_count(&u_free_of_init) >= 1));
    let counts: Vec<usize> = p
        .iter()
        .map(|path| d.out_row(*path.last().unwrap()).intersection_count(&rest))
        .collect();
    if let Some(i) = (0..k).find(|&i| counts[i] < 25 * k) {
        return fail(
            step,
            format!("terminal p_{i} has {} qualifying out-neighbours, fewer than 25k = {}", counts[i], 25 * k),
        );
    }
    state.trace.events.push(TraceEvent::BuiltP {
        terminals: p.iter().map(|x| *x.last().unwrap()).collect(),
        qualifying_counts: counts,
    });
    state.p = p;
    Ok(())
}

/// Greedy connectors: for each `i`, the shortest `(p_i, q_i)`-path of
/// length at most three through vertices not yet used, lowest ids first.
pub fn build_r(d: &Digraph, state: &mut LinkerState) -> StepResult<()> {
    let k = state.k;
    let n = d.n();
    let ends_p: Vec<usize> = state.p.iter().map(|p| *p.last().unwrap()).collect();
    let ends_q: Vec<usize> = state.q_final.iter().map(|q| q[0]).collect();
    let mut blocked = paths_mask(n, &state.p);
    blocked.union_with(&paths_mask(n, &state.q_final));
    let mut r = Vec::with_capacity(k);
    let (mut lengths, mut twos, mut threes) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..k {
        let (a, b) = (ends_p[i], ends_q[i]);
        let allowed = blocked.complement();
        let mut mids = d.out_row(a).clone();
        mids.intersect_with(&allowed);
        let mut two = mids.clone();
        two.intersect_with(d.in_row(b));
        let first_hops = mids.iter().filter(|&m| d.out_row(m).intersection_count(&allowed) > 0).count();
        twos.push(two.count());
        threes.push(first_hops);
        let path = if d.has_arc(a, b) {
            vec![a, b]
        } else if let Some(m) = two.first() {
            vec![a, m, b]
        } else {
            let mut into_b = d.in_row(b).clone();
            into_b.intersect_with(&allowed);
            match mids.iter().find_map(|m| {
                let mut nxt = d.out_row(m).clone();
                nxt.intersect_with(&into_b);
                nxt.first().map(|m2| (m, m2))
            }) {
                Some((m1, m2)) => vec![a, m1, m2, b],
                None => {
                    return fail(
                        LinkStep::BuildR,
                        format!(
                            "no (p_{i}, q_{i})-path of length at most 3 from {a} to {b}; {} two-path middles, {first_hops} first hops",
                            two.count()
                        ),
                    )
                }
            }
        };
        for &v in &path[1..path.len() - 1] {
            blocked.insert(v);
        }
        lengths.push(path.len() - 1);
        r.push(path);
    }
    state.trace.events.push(TraceEvent::BuiltR {
        lengths,
        two_path_candidates: twos,
        three_path_first_hops: threes,
    });
    state.r = r;
    Ok(())
}

fn assemble(state: &LinkerState, pairs: &[(usize, usize)]) -> LinkageCertificate {
    let mut paths = Vec::with_capacity(state.k);
    let mut segments = Vec::with_capacity(state.k);
    for i in 0..state.k {
        let (p, r, q) = (&state.p[i], &state.r[i], &state.q_final[i]);
        let mut full = p.clone();
        full.extend_from_slice(&r[1..]);
        full.extend_from_slice(&q[1..]);
        paths.push(full);
        segments.push(PathSegments {
            p: p.clone(),
            r: r.clone(),
            q: q.clone(),
        });
    }
    LinkageCertificate {
        pairs: pairs.to_vec(),
        paths,
        segments,
    }
}

fn run_steps(d: &Digraph, pairs: &[(usize, usize)], state: &mut LinkerState) -> StepResult<LinkageCertificate> {
    let k = state.k;
    let wrap = |step: LinkStep| move |e: Error| StepError {
        step,
        message: e.to_string(),
        cut: None,
    };
    state.u = build_dominating_set(d, &state.xs, &state.ys, k).map_err(wrap(LinkStep::DominatingSet))?;
    state.trace.events.push(TraceEvent::DominatingSet { u: state.u.clone() });
    let cls = classify_terminals(d, &state.xs, &state.ys, &state.u, k).map_err(wrap(LinkStep::Classify))?;
    state.trace.events.push(TraceEvent::Classified {
        x1: cls.x1.clone(),
        x2: cls.x2.clone(),
        n_sizes: cls.n_x.iter().map(Vec::len).collect(),
        n_total: cls.n.len(),
        extra_sink: cls.extra_sink,
    });
    state.q_initial = initial_path_system(d, &state.xs, &state.ys, &state.u, cls.extra_sink)?;
    state.trace.events.push(TraceEvent::InitialPaths {
        paths: state.q_initial.len(),
        total_vertices: total_vertices(&state.q_initial),
    });
    state.classification = Some(cls);
    adjust_paths(d, state)?;
    if let Err(msg) = check_adjustment_conditions(d, state) {
        return fail(LinkStep::AdjustPaths, msg);
    }
    state.special = state.q_star.get(k).map(|p| *p.last().unwrap());
    finalize_q(d, state);
    build_p(d, state)?;
    build_r(d, state)?;
    let cert = assemble(state, pairs);
    if let Err(e) = verify_linkage(d, pairs, &cert.paths) {
        return fail(LinkStep::Verify, format!("assembled paths rejected: {e}"));
    }
    Ok(cert)
}

/// Runs the full construction. Invalid input is an `Err`; a run that
/// stops at some step is reported inside the returned [`LinkRun`].
pub fn link(d: &Digraph, pairs: &[(usize, usize)], opts: LinkOptions) -> Result<LinkRun> {
    let inst = LinkageInstance::new(d, pairs.to_vec())?;
    let k = inst.k();
    let hypotheses = opts.hypotheses.map(|m| check_hypotheses(d, k, m)).transpose()?;
    let mut state = LinkerState {
        k,
        xs: pairs.iter().map(|p| p.0).collect(),
        ys: pairs.iter().map(|p| p.1).collect(),
        ..Default::default()
    };
    let outcome = match run_steps(d, pairs, &mut state) {
        Ok(cert) => LinkOutcome::Linked(cert),
        Err(e) => {
            let report = match &hypotheses {
                Some(h) if h.exact => h.clone(),
                _ => check_hypotheses(d, k, HypothesisMode::Exact)?,
            };
            LinkOutcome::Failed(LinkFailure {
                step: e.step,
                message: e.message,
                kind: if report.holds() {
                    FailureKind::Defect
                } else {
                    FailureKind::HypothesisViolation
                },
                hypotheses: report,
                cut: e.cut,
            })
        }
    };
    Ok(LinkRun {
        outcome,
        hypotheses,
        state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::near_regular_tournament;

    fn base_paths() -> (Digraph, Vec<Vec<usize>>) {
        let q = vec![vec![0, 1, 2, 3, 4], vec![10, 11, 12, 13], vec![20, 21]];
        let mut d = Digraph::new(30);
        for p in &q {
            for w in p.windows(2) {
                d.add_arc(w[0], w[1]);
            }
        }
        (d, q)
    }

    fn splice(extra: &[(usize, usize)], blocked: &[usize]) -> Option<Reroute> {
        let (mut d, q) = base_paths();
        for &(a, b) in extra {
            d.add_arc(a, b);
        }
        reroute(&d, &q, 0, 1, 3, &BitSet::from_iter_with_len(30, blocked.iter().copied()))
    }

    #[test]
    fn reroute_cases() {
        let r = splice(&[(21, 3)], &[]).unwrap();
        assert_eq!(r.case, RerouteCase::DirectArc);
        assert_eq!(r.paths, vec![vec![20, 21, 3, 4], vec![10, 11, 12, 13], vec![0, 1]]);
        assert_eq!(r.perm, vec![2, 1, 0]);

        let r = splice(&[(21, 25), (25, 3)], &[]).unwrap();
        assert_eq!(r.case, RerouteCase::FreshMiddle);
        assert_eq!(r.paths[0], vec![20, 21, 25, 3, 4]);
        assert!(splice(&[(21, 25), (25, 3)], &[25]).is_none());

        let r = splice(&[(21, 11), (11, 3), (21, 12), (12, 3)], &[]).unwrap();
        assert_eq!(r.case, RerouteCase::PigeonholePair);
        assert_eq!(r.other_path, Some(1));
        assert_eq!(r.paths, vec![vec![10, 11, 3, 4], vec![20, 21, 12, 13], vec![0, 1]]);
        assert_eq!(r.perm, vec![1, 2, 0]);

        let r = splice(&[(21, 20), (20, 3)], &[]).unwrap();
        assert_eq!(r.case, RerouteCase::SpecialPathMiddle);
        assert_eq!(r.paths[0], vec![20, 3, 4]);
        assert_eq!(r.paths[2], vec![0, 1]);

        let r = splice(&[(21, 4), (4, 3)], &[]).unwrap();
        assert_eq!(r.case, RerouteCase::SamePathMiddle);
        assert_eq!(r.paths[0], vec![20, 21, 4]);

        // The vertex between o' and x** is released in every splice.
        for extra in [vec![(21, 3)], vec![(21, 25), (25, 3)], vec![(21, 11), (11, 3), (21, 12), (12, 3)], vec![(21, 20), (20, 3)]] {
            let r = splice(&extra, &[]).unwrap();
            assert!(r.paths.iter().flatten().all(|&v| v != 2), "{:?}", r.case);
        }

        // A single middle on another regular path is not enough.
        assert!(splice(&[(21, 11), (11, 3)], &[]).is_none());

        let (d, mut q) = base_paths();
        q[2] = vec![20, 21, 22, 23];
        let r = reroute(&d, &q, 2, 1, 23, &BitSet::new(30)).unwrap();
        assert_eq!(r.case, RerouteCase::TruncateSpecial);
        assert_eq!(r.paths[2], vec![20, 21]);
        assert!(r.paths.iter().flatten().any(|&v| v == 2));
    }

    #[test]
    fn adversarial_instance_forces_a_reroute() {
        let (d, pairs) = adversarial_adjustment_instance(10).unwrap();
        assert!(d.is_tournament());
        let run = link(&d, &pairs, LinkOptions::default()).unwrap();
        let st = &run.state;
        let cls = st.classification.as_ref().unwrap();
        assert_eq!(cls.x1, vec![0]);
        assert_eq!(cls.n_x[0].len(), 18);
        assert_eq!(cls.extra_sink, Some(6 + 2 * 9));
        assert_eq!(run.state.trace.a2_rounds().count(), 1);
        check_adjustment_conditions(&d, st).unwrap();
        let Some(TraceEvent::A2 { w_growth, bad_count, case, o_cand_size, .. }) = st.trace.a2_rounds().next().cloned() else {
            unreachable!()
        };
        assert!(w_growth <= 13 && bad_count <= 8 && o_cand_size > 0);
        assert_eq!(case, RerouteCase::DirectArc);
        // The instance is far below the degree bound; the run stops later,
        // and says so.
        match &run.outcome {
            LinkOutcome::Failed(f) => {
                assert_eq!(f.step, LinkStep::BuildP);
                assert_eq!(f.kind, FailureKind::HypothesisViolation);
            }
            LinkOutcome::Linked(_) => panic!("unexpected certificate"),
        }
        let json = serde_json::to_string(&run).unwrap();
        let back: LinkRun = serde_json::from_str(&json).unwrap();
        assert_eq!(back, run);
        assert!(adversarial_adjustment_instance(7).is_err());
    }

    #[test]
    fn links_near_regular_tournaments() {
        for seed in 0..3 {
            let d = near_regular_tournament(251, seed).unwrap();
            let pairs = [(3, 100), (250, 17)];
            let run = link(&d, &pairs, LinkOptions { hypotheses: Some(HypothesisMode::Exact) }).unwrap();
            assert!(run.hypotheses.as_ref().unwrap().holds());
            let cert = run.certificate().expect("certificate");
            verify_linkage(&d, &pairs, &cert.paths).unwrap();
            for (seg, &(x, y)) in cert.segments.iter().zip(&pairs) {
                assert_eq!(seg.p[0], x);
                assert_eq!(*seg.q.last().unwrap(), y);
                assert!(seg.r.len() <= 4);
            }
            assert!(remaining_swap(&d, &run.state).is_none());
            let u = &run.state.u;
            assert_eq!(u.len(), 6);
            let mut removed = vec![3, 100, 250, 17];
            for &v in u {
                let sub = d.delete(&removed).unwrap();
                let local = sub.from_parent[v].unwrap();
                assert!(crate::dominators::is_nearly_in_dominating(&sub.graph, local, sub.graph.n()).unwrap().verdict);
                removed.push(v);
            }
        }
    }

    #[test]
    fn rejects_bad_pairs() {
        let d = Digraph::complete(6);
        assert!(validate_pairs(&d, &[]).is_err());
        assert!(validate_pairs(&d, &[(0, 0)]).is_err());
        assert!(validate_pairs(&d, &[(0, 1), (1, 2)]).is_err());
        assert!(validate_pairs(&d, &[(0, 9)]).is_err());
        assert!(validate_pairs(&d, &[(0, 1), (2, 3)]).is_ok());
        let partial = Digraph::from_arcs(3, [(0, 1)]).unwrap();
        assert!(link(&partial, &[(0, 1)], LinkOptions::default()).is_err());
    }

    #[test]
    fn small_inputs_fail_as_hypothesis_violations() {
        let d = crate::generators::rotational_tournament(7).unwrap();
        let run = link(&d, &[(0, 3), (1, 5)], LinkOptions::default()).unwrap();
        match run.outcome {
            LinkOutcome::Failed(f) => {
                assert_eq!(f.kind, FailureKind::HypothesisViolation);
                assert_eq!(f.step, LinkStep::DominatingSet);
            }
            LinkOutcome::Linked(c) => verify_linkage(&d, &[(0, 3), (1, 5)], &c.paths).unwrap(),
        }
    }

    #[test]
    fn finalize_swaps_in_unused_dominators() {
        // Path 5 -> 6 -> 7 -> 8 from U = {5, 9}; 9 -> 8 lets the path start
        // at 9 instead.
        let mut d = Digraph::new(10);
        for (a, b) in [(5, 6), (6, 7), (7, 8), (9, 8)] {
            d.add_arc(a, b);
        }
        let mut st = LinkerState {
            k: 1,
            u: vec![5, 9],
            q_star: vec![vec![5, 6, 7, 8]],
            ..Default::default()
        };
        assert_eq!(finalize_q(&d, &mut st), 1);
        assert_eq!(st.q_final, vec![vec![9, 8]]);
        assert!(remaining_swap(&d, &st).is_none());
    }

    #[test]
    fn matching_augments() {
        // Left 0 prefers 10 but must yield it to left 1.
        let m = bipartite_matching(&[100, 101], &[vec![10, 11], vec![10]], 12);
        assert_eq!(m, vec![Some(11), Some(10)]);
        let m = bipartite_matching(&[100, 101], &[vec![10], vec![10]], 12);
        assert_eq!(m, vec![Some(10), None]);
    }
}
