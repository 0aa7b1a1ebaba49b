//! A family of highly connected tournaments with large minimum out-degree
//! that are not k-linked, together with rule-by-rule verification.
//!
//! Vertex ids: the path grid `z_i^t` comes first (`id = t * k + i`), then
//! the remaining vertices of `U-` in circulant order, then `Y-`, `Y`, `Y+`,
//! `X` and finally `z+`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::digraph::{Digraph, Path, PathSystem};
use crate::error::{Error, Result};
use crate::flow::local_cut_capped;
use crate::rng::Rng64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleParams {
    pub k: usize,
    pub n: usize,
    /// Randomizes the orientations no rule constrains (inside `U1+` off the
    /// path grid, and inside `X`). `None` keeps the deterministic defaults.
    pub seed: Option<u64>,
}

/// Smallest integer at least `(k^2 + 11k) / 26`.
pub fn min_out_degree_bound(k: usize) -> usize {
    (k * k + 11 * k).div_ceil(26)
}

/// Role labels of every vertex. All index vectors are 0-based: `grid[i][t]`
/// is `z_{i+1}^t`, `y[i]` is `y_{i+1}`, and so on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleLayout {
    pub k: usize,
    pub l: usize,
    pub n: usize,
    pub grid: Vec<Vec<usize>>,
    /// In circulant order; the first `k` entries are the path starts.
    pub u_minus: Vec<usize>,
    pub z_minus: usize,
    pub y_minus: Vec<usize>,
    pub y: Vec<usize>,
    pub y_plus: Vec<usize>,
    pub x: Vec<usize>,
    pub z_plus: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum Role {
    /// `z_i^t`; path starts (`t = 0`) also lie in `U-`.
    Grid { i: usize, t: usize },
    /// A vertex of `U-` off the path grid, `pos` its circulant position.
    UMinus { pos: usize },
    YMinus { i: usize },
    Y { i: usize },
    YPlus { i: usize },
    X { i: usize },
    ZPlus,
}

impl CounterexampleLayout {
    fn new(k: usize, n: usize) -> Result<Self> {
        let l = k / 13;
        let grid_size = k * (l + 2);
        let fixed = k * (l + 1) + 4 * k + 1;
        if n < fixed {
            return Err(Error::InvalidParameter(format!("n = {n} leaves no room for U-")));
        }
        let m = n - fixed;
        if 2 * m < k * k {
            return Err(Error::InvalidParameter(format!("|U-| = {m} is below k^2/2")));
        }
        if m.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "n = {n} forces |U-| = {m}, which is even; a regular tournament needs odd order"
            )));
        }
        let grid: Vec<Vec<usize>> = (0..k).map(|i| (0..l + 2).map(|t| t * k + i).collect()).collect();
        let mut u_minus: Vec<usize> = (0..k).collect();
        u_minus.extend(grid_size..grid_size + (m - k));
        let mut next = grid_size + (m - k);
        let mut block = || {
            let b: Vec<usize> = (next..next + k).collect();
            next += k;
            b
        };
        let y_minus = block();
        let y = block();
        let y_plus = block();
        let x = block();
        let z_plus = next;
        debug_assert_eq!(z_plus + 1, n);
        Ok(CounterexampleLayout {
            k,
            l,
            n,
            grid,
            z_minus: u_minus[k],
            u_minus,
            y_minus,
            y,
            y_plus,
            x,
            z_plus,
        })
    }

    /// `floor(k / 2)`: the paths indexed below this form `U2+`.
    pub fn half(&self) -> usize {
        self.k / 2
    }

    pub fn layer(&self, t: usize) -> Vec<usize> {
        (0..self.half()).map(|i| self.grid[i][t]).collect()
    }

    pub fn u2_plus(&self) -> Vec<usize> {
        self.interior_of(0..self.half())
    }

    pub fn u1_plus(&self) -> Vec<usize> {
        self.interior_of(self.half()..self.k)
    }

    fn interior_of(&self, paths: std::ops::Range<usize>) -> Vec<usize> {
        let mut v: Vec<usize> = paths.flat_map(|i| self.grid[i][1..=self.l].iter().copied()).collect();
        v.sort_unstable();
        v
    }

    pub fn x1(&self) -> Vec<usize> {
        self.x[..self.half()].to_vec()
    }

    pub fn x2(&self) -> Vec<usize> {
        self.x[self.half()..].to_vec()
    }

    pub fn init(&self) -> Vec<usize> {
        self.grid.iter().map(|p| p[0]).collect()
    }

    pub fn ter(&self) -> Vec<usize> {
        self.grid.iter().map(|p| p[self.l + 1]).collect()
    }

    pub fn grid_paths(&self) -> Vec<Path> {
        self.grid.iter().map(|p| Path::unchecked(p.clone())).collect()
    }

    /// Role of every vertex; fails when the lists do not partition `0..n`.
    pub fn roles(&self) -> Result<Vec<Role>> {
        let mut roles: Vec<Option<Role>> = vec![None; self.n];
        let mut put = |v: usize, r: Role| -> Result<()> {
            match roles.get_mut(v) {
                None => Err(Error::InvalidVertex { vertex: v, n: self.n }),
                Some(Some(_)) => Err(Error::InvalidParameter(format!("vertex {v} has two roles"))),
                Some(slot) => {
                    *slot = Some(r);
                    Ok(())
                }
            }
        };
        for (i, p) in self.grid.iter().enumerate() {
            for (t, &v) in p.iter().enumerate() {
                put(v, Role::Grid { i, t })?;
            }
        }
        for (pos, &v) in self.u_minus.iter().enumerate().skip(self.k) {
            put(v, Role::UMinus { pos })?;
        }
        for i in 0..self.k {
            put(self.y_minus[i], Role::YMinus { i })?;
            put(self.y[i], Role::Y { i })?;
            put(self.y_plus[i], Role::YPlus { i })?;
            put(self.x[i], Role::X { i })?;
        }
        put(self.z_plus, Role::ZPlus)?;
        roles
            .into_iter()
            .enumerate()
            .map(|(v, r)| r.ok_or_else(|| Error::InvalidParameter(format!("vertex {v} has no role"))))
            .collect()
    }

    fn check_shape(&self) -> Result<()> {
        let k = self.k;
        let ok = self.grid.len() == k
            && self.grid.iter().all(|p| p.len() == self.l + 2)
            && [&self.y_minus, &self.y, &self.y_plus, &self.x].iter().all(|s| s.len() == k)
            && self.u_minus.len() > k
            && self.u_minus[..k] == self.init()[..]
            && self.u_minus.contains(&self.z_minus)
            && !self.init().contains(&self.z_minus);
        if !ok {
            return Err(Error::InvalidParameter("layout lists have the wrong shape".into()));
        }
        self.roles().map(|_| ())
    }
}

/// Decides the orientation of every pair from the roles.
struct Orienter<'a> {
    lay: &'a CounterexampleLayout,
    roles: &'a [Role],
    m: usize,
}

impl Orienter<'_> {
    fn in_u_minus(&self, r: Role) -> Option<usize> {
        match r {
            Role::Grid { i, t: 0 } => Some(i),
            Role::UMinus { pos } => Some(pos),
            _ => None,
        }
    }

    /// `Some(true)` for `a -> b`, `Some(false)` for `b -> a`, `None` when no
    /// case below covers the ordered pair (then the swapped pair is tried).
    fn decide(&self, a: usize, b: usize) -> Option<bool> {
        let (ra, rb) = (self.roles[a], self.roles[b]);
        let (h, l, z_minus) = (self.lay.half(), self.lay.l, self.lay.z_minus);
        if let (Some(pa), Some(pb)) = (self.in_u_minus(ra), self.in_u_minus(rb)) {
            let diff = (pb + self.m - pa) % self.m;
            return Some((1..=(self.m - 1) / 2).contains(&diff));
        }
        use Role::*;
        match (ra, rb) {
            (Grid { i, t }, Grid { i: j, t: s }) => {
                if i == j && s == t + 1 {
                    return Some(true);
                }
                if i == j && t == s + 1 {
                    return Some(false);
                }
                let int = |t: usize| (1..=l).contains(&t);
                if int(t) && int(s) {
                    let (ua, ub) = (i < h, j < h);
                    if ua != ub {
                        return Some(ua);
                    }
                    // Same layer: increasing path index; otherwise from the
                    // higher layer down (the U1+ default mirrors U2+).
                    if t == s {
                        return Some(i < j);
                    }
                    return Some(t > s);
                }
                if t == l + 1 && s == l + 1 {
                    return Some(i < j);
                }
                if t == l + 1 && int(s) {
                    return Some(true);
                }
                if int(t) && s == 0 {
                    return Some(true);
                }
                if t == l + 1 && s == 0 {
                    return Some(true);
                }
                None
            }
            (Grid { t, .. }, UMinus { .. }) if t > 0 => Some(true),
            (YMinus { i }, YMinus { i: j }) | (Y { i }, Y { i: j }) => Some(i < j),
            (YPlus { i }, YPlus { i: j }) => Some(i > j),
            (YMinus { i }, Grid { i: j, t }) if t == l + 1 => Some(j < i),
            (YMinus { .. }, Grid { .. } | UMinus { .. }) => Some(true),
            (YMinus { i: j }, Y { i }) => Some(j >= i),
            (YMinus { i: j }, YPlus { i }) => Some(j < i),
            (Y { .. }, YPlus { .. }) => Some(true),
            (Y { .. } | YPlus { .. }, Grid { .. }) => Some(true),
            (Y { .. } | YPlus { .. }, UMinus { .. }) => Some(b != z_minus),
            (X { i }, X { i: j }) => Some(i < j),
            (X { i }, Y { i: j }) => Some(i != j),
            (X { .. }, ZPlus) => Some(false),
            (X { i }, other) => {
                let target_half = if i < h { 1 } else { 2 };
                let hit = match other {
                    Grid { i: p, t } if (1..=l).contains(&t) => (if p < h { 2 } else { 1 }) == target_half,
                    _ => false,
                };
                Some(hit)
            }
            (ZPlus, _) => Some(self.in_u_minus(rb).is_none()),
            _ => None,
        }
    }

    fn arc(&self, a: usize, b: usize) -> Result<bool> {
        match (self.decide(a, b), self.decide(b, a)) {
            (Some(x), None) => Ok(x),
            (None, Some(y)) => Ok(!y),
            (Some(x), Some(y)) if x != y => Ok(x),
            _ => Err(Error::InvalidParameter(format!(
                "construction defect: pair ({a}, {b}) resolved inconsistently"
            ))),
        }
    }
}

/// Builds the tournament and its layout.
pub fn build_counterexample(p: &CounterexampleParams) -> Result<(Digraph, CounterexampleLayout)> {
    if p.k < 42 {
        return Err(Error::InvalidParameter(format!("k must be at least 42, got {}", p.k)));
    }
    if p.n < p.k * p.k {
        return Err(Error::InvalidParameter(format!("n must be at least k^2 = {}, got {}", p.k * p.k, p.n)));
    }
    build_unchecked(p)
}

/// The construction without the `k >= 42`, `n >= k^2` hypotheses, for
/// smaller test instances. Still needs room for an odd `U-` of order at
/// least `k^2 / 2`.
pub fn build_unchecked(p: &CounterexampleParams) -> Result<(Digraph, CounterexampleLayout)> {
    if p.k < 2 {
        return Err(Error::InvalidParameter("k must be at least 2".into()));
    }
    let lay = CounterexampleLayout::new(p.k, p.n)?;
    let roles = lay.roles()?;
    let or = Orienter {
        lay: &lay,
        roles: &roles,
        m: lay.u_minus.len(),
    };
    let mut d = Digraph::new(p.n);
    for a in 0..p.n {
        for b in (a + 1)..p.n {
            if or.arc(a, b)? {
                d.add_arc(a, b);
            } else {
                d.add_arc(b, a);
            }
        }
    }
    if let Some(seed) = p.seed {
        randomize_free_pairs(&mut d, &lay, seed);
    }
    let report = verify_construction_rules(&d, &lay)?;
    if let Some(bad) = report.rules.iter().find(|r| !r.passed) {
        return Err(Error::InvalidParameter(format!(
            "construction defect: rule {} fails with {:?}",
            bad.rule, bad.witness
        )));
    }
    Ok((d, lay))
}

fn randomize_free_pairs(d: &mut Digraph, lay: &CounterexampleLayout, seed: u64) {
    let mut rng = Rng64::new(seed);
    let sets = Sets::new(lay);
    let mut flip = |d: &mut Digraph, a: usize, b: usize| {
        if rng.coin(0.5) {
            d.orient(a, b);
        } else {
            d.orient(b, a);
        }
    };
    for (ai, &a) in sets.u1.iter().enumerate() {
        for &b in &sets.u1[ai + 1..] {
            if !sets.on_grid(a, b) && !sets.on_grid(b, a) {
                flip(d, a, b);
            }
        }
    }
    for (ai, &a) in lay.x.iter().enumerate() {
        for &b in &lay.x[ai + 1..] {
            flip(d, a, b);
        }
    }
}

/// The thirteen construction rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    A1,
    A2,
    A3,
    A4,
    B1,
    B2,
    B3,
    B4,
    B5,
    B6,
    C1,
    C2,
    C3,
}

impl Rule {
    pub const ALL: [Rule; 13] = [
        Rule::A1,
        Rule::A2,
        Rule::A3,
        Rule::A4,
        Rule::B1,
        Rule::B2,
        Rule::B3,
        Rule::B4,
        Rule::B5,
        Rule::B6,
        Rule::C1,
        Rule::C2,
        Rule::C3,
    ];
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// A required arc is absent.
    Missing,
    /// The reverse of a required arc is present.
    Reversed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub arc: (usize, usize),
    pub kind: WitnessKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleCheck {
    pub rule: Rule,
    pub passed: bool,
    pub arcs_checked: usize,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleReport {
    pub rules: Vec<RuleCheck>,
    pub is_tournament: bool,
    pub u_minus_regular: bool,
    /// `Y-` and `Y` increasing, `Y+` decreasing, `Ter` increasing.
    pub tier_orders: bool,
}

impl RuleReport {
    pub fn all_passed(&self) -> bool {
        self.rules.iter().all(|r| r.passed) && self.is_tournament && self.u_minus_regular && self.tier_orders
    }

    pub fn get(&self, rule: Rule) -> &RuleCheck {
        self.rules.iter().find(|r| r.rule == rule).expect("every rule is reported")
    }
}

/// Collects required arcs and the first violation.
struct Checker<'a> {
    t: &'a Digraph,
    count: usize,
    witness: Option<Witness>,
}

impl Checker<'_> {
    fn need(&mut self, a: usize, b: usize) {
        self.count += 1;
        if self.witness.is_some() {
            return;
        }
        if !self.t.has_arc(a, b) {
            self.witness = Some(Witness {
                arc: (a, b),
                kind: WitnessKind::Missing,
            });
        } else if self.t.has_arc(b, a) {
            self.witness = Some(Witness {
                arc: (b, a),
                kind: WitnessKind::Reversed,
            });
        }
    }

    fn all(&mut self, from: &[usize], to: &[usize]) {
        for &a in from {
            for &b in to {
                self.need(a, b);
            }
        }
    }

    /// `order[i] -> order[j]` for `i < j`.
    fn transitive(&mut self, order: &[usize]) {
        for (i, &a) in order.iter().enumerate() {
            for &b in &order[i + 1..] {
                self.need(a, b);
            }
        }
    }
}

struct Sets {
    init: Vec<usize>,
    ter: Vec<usize>,
    int: Vec<usize>,
    u1: Vec<usize>,
    u2: Vec<usize>,
    u_plus: Vec<usize>,
    u_minus: Vec<usize>,
    grid_arcs: BitSet,
    n: usize,
}

impl Sets {
    fn new(lay: &CounterexampleLayout) -> Self {
        let n = lay.n;
        let mut grid_arcs = BitSet::new(n * n);
        for p in &lay.grid {
            for w in p.windows(2) {
                grid_arcs.insert(w[0] * n + w[1]);
            }
        }
        let u1 = lay.u1_plus();
        let u2 = lay.u2_plus();
        let mut int: Vec<usize> = u1.iter().chain(&u2).copied().collect();
        int.sort_unstable();
        Sets {
            init: lay.init(),
            ter: lay.ter(),
            u_plus: int.clone(),
            int,
            u1,
            u2,
            u_minus: lay.u_minus.clone(),
            grid_arcs,
            n,
        }
    }

    fn on_grid(&self, a: usize, b: usize) -> bool {
        self.grid_arcs.contains(a * self.n + b)
    }
}

fn check_rule(rule: Rule, t: &Digraph, lay: &CounterexampleLayout, s: &Sets) -> RuleCheck {
    let mut c = Checker {
        t,
        count: 0,
        witness: None,
    };
    let (k, l, h) = (lay.k, lay.l, lay.half());
    match rule {
        Rule::A1 => {
            for tt in 1..=l {
                c.transitive(&lay.layer(tt));
            }
        }
        Rule::A2 => {
            for i in 0..h {
                for tt in 1..l {
                    c.need(lay.grid[i][tt], lay.grid[i][tt + 1]);
                }
            }
            for tt in 1..=l {
                for j in 1..tt {
                    for &a in &lay.layer(tt) {
                        for &b in &lay.layer(j) {
                            if !s.on_grid(b, a) {
                                c.need(a, b);
                            }
                        }
                    }
                }
            }
        }
        Rule::A3 => {
            for i in h..k {
                for tt in 1..l {
                    c.need(lay.grid[i][tt], lay.grid[i][tt + 1]);
                }
            }
            c.all(&s.u2, &s.u1);
        }
        Rule::A4 => {
            c.transitive(&s.ter);
            for &z in &s.ter {
                for &u in &s.u_plus {
                    if s.on_grid(u, z) {
                        c.need(u, z);
                    } else {
                        c.need(z, u);
                    }
                }
            }
            for &u in &s.u_plus {
                for &z in &s.init {
                    if s.on_grid(z, u) {
                        c.need(z, u);
                    } else {
                        c.need(u, z);
                    }
                }
            }
            c.all(&s.ter, &s.init);
        }
        Rule::B1 => {
            for &a in s.int.iter().chain(&s.ter) {
                for &b in &s.u_minus {
                    if !s.on_grid(b, a) {
                        c.need(a, b);
                    }
                }
            }
        }
        Rule::B2 => {
            for i in 0..k {
                for j in 0..k {
                    let (z, y) = (lay.grid[j][l + 1], lay.y_minus[i]);
                    if j >= i {
                        c.need(z, y);
                    } else {
                        c.need(y, z);
                    }
                }
            }
        }
        Rule::B3 => {
            for i in 0..k {
                for j in 0..k {
                    if j >= i {
                        c.need(lay.y_minus[j], lay.y[i]);
                    } else {
                        c.need(lay.y[i], lay.y_minus[j]);
                    }
                }
            }
        }
        Rule::B4 => {
            for i in 0..k {
                for j in 0..k {
                    if j < i {
                        c.need(lay.y_minus[j], lay.y_plus[i]);
                    } else {
                        c.need(lay.y_plus[i], lay.y_minus[j]);
                    }
                }
            }
        }
        Rule::B5 => {
            c.all(&[lay.z_minus], &lay.y);
            c.all(&[lay.z_minus], &lay.y_plus);
        }
        Rule::B6 => {
            c.all(&lay.y, &lay.y_plus);
            let grid_all: Vec<usize> = lay.grid.iter().flatten().copied().collect();
            let mut targets: Vec<usize> = grid_all;
            targets.extend(s.u_minus.iter().copied().filter(|&u| u != lay.z_minus && !s.init.contains(&u)));
            c.all(&lay.y, &targets);
            c.all(&lay.y_plus, &targets);
            c.all(&lay.y_minus, &s.int);
            c.all(&lay.y_minus, &s.u_minus);
        }
        Rule::C1 => {
            let excluded = BitSet::from_iter_with_len(lay.n, lay.x.iter().chain(&lay.y).copied());
            for (xs, mine) in [(lay.x1(), &s.u1), (lay.x2(), &s.u2)] {
                let own = BitSet::from_iter_with_len(lay.n, mine.iter().copied());
                for &x in &xs {
                    for v in 0..lay.n {
                        if excluded.contains(v) {
                            continue;
                        }
                        if own.contains(v) {
                            c.need(x, v);
                        } else {
                            c.need(v, x);
                        }
                    }
                }
            }
        }
        Rule::C2 => {
            for i in 0..k {
                for j in 0..k {
                    if i == j {
                        c.need(lay.y[i], lay.x[i]);
                    } else {
                        c.need(lay.x[i], lay.y[j]);
                    }
                }
            }
        }
        Rule::C3 => {
            c.all(&s.u_minus, &[lay.z_plus]);
            let um = BitSet::from_iter_with_len(lay.n, s.u_minus.iter().copied());
            for v in 0..lay.n {
                if v != lay.z_plus && !um.contains(v) {
                    c.need(lay.z_plus, v);
                }
            }
        }
    }
    RuleCheck {
        rule,
        passed: c.witness.is_none(),
        arcs_checked: c.count,
        witness: c.witness,
    }
}

/// Checks all thirteen rules plus the structural extras.
pub fn verify_construction_rules(t: &Digraph, lay: &CounterexampleLayout) -> Result<RuleReport> {
    if t.n() != lay.n {
        return Err(Error::InvalidParameter(format!(
            "layout describes {} vertices, digraph has {}",
            lay.n,
            t.n()
        )));
    }
    lay.check_shape()?;
    let s = Sets::new(lay);
    let rules = Rule::ALL.par_iter().map(|&r| check_rule(r, t, lay, &s)).collect();
    let sub = t.induced(&s.u_minus)?;
    let g = &sub.graph;
    let deg = (g.n() - 1) / 2;
    let u_minus_regular = (0..g.n()).all(|v| g.out_degree(v) == deg && g.in_degree(v) == deg);
    let is_transitive = |order: &[usize]| {
        order
            .iter()
            .enumerate()
            .all(|(i, &a)| order[i + 1..].iter().all(|&b| t.has_arc(a, b) && !t.has_arc(b, a)))
    };
    let rev_plus: Vec<usize> = lay.y_plus.iter().rev().copied().collect();
    let tier_orders = is_transitive(&lay.y_minus) && is_transitive(&lay.y) && is_transitive(&rev_plus) && is_transitive(&s.ter);
    Ok(RuleReport {
        rules,
        is_tournament: t.is_tournament(),
        u_minus_regular,
        tier_orders,
    })
}

/// `k + 1` disjoint paths from `U-` to `Y + {z+}` avoiding the path grid,
/// `Y-` and `z-`: `u -> x_i -> y_{i+1}` (indices mod k) and `u -> z+`.
pub fn verify_property2(t: &Digraph, lay: &CounterexampleLayout) -> Result<PathSystem> {
    lay.check_shape()?;
    let k = lay.k;
    let init = lay.init();
    let spare: Vec<usize> = lay
        .u_minus
        .iter()
        .copied()
        .filter(|u| *u != lay.z_minus && !init.contains(u))
        .take(k + 1)
        .collect();
    if spare.len() < k + 1 {
        return Err(Error::InvalidParameter("U- too small for k + 1 disjoint starts".into()));
    }
    let mut paths = Vec::with_capacity(k + 1);
    for (i, &s) in spare.iter().take(k).enumerate() {
        paths.push(Path::new(t, vec![s, lay.x[i], lay.y[(i + 1) % k]])?);
    }
    paths.push(Path::new(t, vec![spare[k], lay.z_plus])?);
    let system = PathSystem::new(t, paths)?;
    let mut forbidden = BitSet::from_iter_with_len(lay.n, lay.grid.iter().flatten().copied());
    for &v in lay.y_minus.iter().chain([&lay.z_minus]) {
        forbidden.insert(v);
    }
    let targets: Vec<usize> = lay.y.iter().copied().chain([lay.z_plus]).collect();
    for p in &system.paths {
        if let Some(&v) = p.vertices().iter().find(|v| forbidden.contains(**v)) {
            return Err(Error::InvalidPath(format!("path uses excluded vertex {v}")));
        }
        if !lay.u_minus.contains(&p.first()) || !targets.contains(&p.last()) {
            return Err(Error::InvalidPath(format!("path {:?} has wrong endpoints", p.vertices())));
        }
    }
    Ok(system)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampledPair {
    pub from: usize,
    pub to: usize,
    /// Internally disjoint paths found, capped at the target.
    pub value: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampledConnectivity {
    pub target: usize,
    pub samples: Vec<SampledPair>,
    pub min_observed: Option<usize>,
    pub passed: bool,
    pub note: Option<String>,
}

/// Local connectivity of `pairs` uniformly sampled ordered pairs, each
/// required to reach `target`.
pub fn sampled_connectivity_check(t: &Digraph, target: usize, pairs: usize, seed: u64) -> Result<SampledConnectivity> {
    if target == 0 {
        return Err(Error::InvalidParameter("target must be at least 1".into()));
    }
    let n = t.n();
    if target >= n {
        return Ok(SampledConnectivity {
            target,
            samples: Vec::new(),
            min_observed: None,
            passed: false,
            note: Some(format!("no pair of a {n}-vertex digraph has {target} internally disjoint paths")),
        });
    }
    let mut rng = Rng64::new(seed);
    let chosen: Vec<(usize, usize)> = (0..pairs)
        .map(|_| {
            let p = rng.sample_distinct(n, 2);
            (p[0], p[1])
        })
        .collect();
    let samples: Vec<SampledPair> = chosen
        .par_iter()
        .map(|&(u, v)| -> Result<SampledPair> {
            Ok(SampledPair {
                from: u,
                to: v,
                value: local_cut_capped(t, u, v, target)?.value,
            })
        })
        .collect::<Result<_>>()?;
    let min_observed = samples.iter().map(|s| s.value).min();
    Ok(SampledConnectivity {
        target,
        passed: samples.iter().all(|s| s.value >= target),
        samples,
        min_observed,
        note: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> (Digraph, CounterexampleLayout) {
        build_unchecked(&CounterexampleParams { k: 13, n: 164, seed: None }).unwrap()
    }

    #[test]
    fn small_build_passes_everything() {
        let (t, lay) = small();
        assert_eq!(t.n(), 164);
        assert_eq!((lay.l, lay.u_minus.len()), (1, 85));
        let r = verify_construction_rules(&t, &lay).unwrap();
        assert!(r.all_passed(), "{r:?}");
        let ps = verify_property2(&t, &lay).unwrap();
        assert_eq!(ps.len(), 14);
    }

    #[test]
    fn hypotheses_enforced() {
        assert!(build_counterexample(&CounterexampleParams { k: 41, n: 1764, seed: None }).is_err());
        assert!(build_counterexample(&CounterexampleParams { k: 42, n: 1763, seed: None }).is_err());
        // 1765 forces an even U-.
        assert!(build_counterexample(&CounterexampleParams { k: 42, n: 1765, seed: None }).is_err());
    }

    #[test]
    fn full_scale_structure() {
        let (t, lay) = build_counterexample(&CounterexampleParams { k: 42, n: 1764, seed: None }).unwrap();
        assert!(t.is_tournament());
        assert_eq!((lay.l, lay.half(), lay.u_minus.len()), (3, 21, 1427));
        assert_eq!((lay.u1_plus().len(), lay.u2_plus().len()), (63, 63));
        assert_eq!(min_out_degree_bound(42), 86);
        assert!(t.min_out_degree().unwrap() >= 86);
        assert_eq!(lay.z_minus, 42 * 5);
        assert_eq!(verify_property2(&t, &lay).unwrap().len(), 43);
    }

    #[test]
    fn seeded_free_orientations_still_valid() {
        let (a, lay) = build_unchecked(&CounterexampleParams { k: 13, n: 164, seed: Some(5) }).unwrap();
        let (b, _) = small();
        assert_ne!(a, b);
        assert!(verify_construction_rules(&a, &lay).unwrap().all_passed());
    }

    #[test]
    fn injected_faults_are_caught() {
        let (t, lay) = small();
        let mut bad = t.clone();
        let h1 = lay.layer(1);
        bad.orient(h1[1], h1[0]);
        let r = verify_construction_rules(&bad, &lay).unwrap();
        let a1 = r.get(Rule::A1);
        assert!(!a1.passed);
        assert_eq!(a1.witness.unwrap().arc, (h1[0], h1[1]));
        assert_eq!(a1.witness.unwrap().kind, WitnessKind::Missing);

        let mut bad = t.clone();
        let u = lay.u_minus[3];
        bad.add_arc(lay.z_plus, u);
        let r = verify_construction_rules(&bad, &lay).unwrap();
        let c3 = r.get(Rule::C3).witness.unwrap();
        assert_eq!((c3.arc, c3.kind), ((lay.z_plus, u), WitnessKind::Reversed));
        assert!(!r.is_tournament);
    }

    #[test]
    fn sampled_connectivity() {
        let (t, _) = small();
        // Below the k >= 42 regime the minimum out-degree (18 here) caps
        // the connectivity, so the target is kept under it.
        let a = sampled_connectivity_check(&t, 15, 10, 1).unwrap();
        let b = sampled_connectivity_check(&t, 15, 10, 1).unwrap();
        assert_eq!(a, b);
        assert!(a.passed, "{a:?}");
        let never = sampled_connectivity_check(&t, t.n(), 5, 1).unwrap();
        assert!(!never.passed && never.samples.is_empty());
    }

    #[test]
    fn layout_round_trips_as_json() {
        let (_, lay) = small();
        let text = serde_json::to_string(&lay).unwrap();
        let back: CounterexampleLayout = serde_json::from_str(&text).unwrap();
        assert_eq!(back, lay);
    }
}
