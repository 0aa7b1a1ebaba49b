//! The acceptance suite: eight end-to-end checks with fixed seeds.
//!
//! `Profile::Full` runs every check at its stated size. `Profile::Quick`
//! shrinks the corpora so the whole suite finishes in a few seconds.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certificate::verify_linkage;
use crate::counterexample::{
    build_counterexample, min_out_degree_bound, sampled_connectivity_check, verify_construction_rules, verify_property2,
    CounterexampleLayout, CounterexampleParams, Rule, WitnessKind,
};
use crate::digraph::Digraph;
use crate::dominators::{find_nearly_out_dominating, is_nearly_out_dominating};
use crate::flow::{is_k_connected, max_disjoint_paths, vertex_connectivity};
use crate::generators::{near_regular_tournament, random_semicomplete, rotational_tournament};
use crate::linker::{
    adversarial_adjustment_instance, check_adjustment_conditions, link, LinkOptions, LinkOutcome, TraceEvent,
};
use crate::oracle::{exists_disjoint_linkage, max_disjoint_st_paths_bruteforce, LinkageVerdict, OracleBudget};
use crate::report::RunReport;
use crate::rng::Rng64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    Quick,
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {}: {} ({:.2}s) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

fn timed(id: u8, name: &str, f: impl FnOnce() -> (bool, String)) -> CriterionResult {
    let start = Instant::now();
    let (passed, detail) = f();
    CriterionResult {
        id,
        name: name.into(),
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn pick(profile: Profile, quick: usize, full: usize) -> usize {
    match profile {
        Profile::Quick => quick,
        Profile::Full => full,
    }
}

/// Rotational tournaments of odd order have connectivity at least `n / 3`.
pub fn criterion_1(profile: Profile) -> CriterionResult {
    timed(1, "rotational tournaments are floor(n/3)-connected", || {
        let top = pick(profile, 15, 27);
        let rows: Vec<(usize, usize)> = (7..=top)
            .step_by(2)
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&n| (n, vertex_connectivity(&rotational_tournament(n).unwrap()).unwrap()))
            .collect();
        let bad: Vec<_> = rows.iter().filter(|(n, c)| *c < n / 3).collect();
        (bad.is_empty(), format!("kappa by n: {rows:?}"))
    })
}

fn random_digraph(n: usize, density: f64, rng: &mut Rng64) -> Digraph {
    let mut d = Digraph::new(n);
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.coin(density) {
                d.add_arc(u, v);
            }
        }
    }
    d
}

/// Flow-based disjoint paths agree with exhaustive search.
pub fn criterion_2(profile: Profile) -> CriterionResult {
    timed(2, "max disjoint paths equal exhaustive search", || {
        let count = pick(profile, 50, 200);
        let mismatches: Vec<String> = (0..count as u64)
            .into_par_iter()
            .filter_map(|seed| {
                let mut rng = Rng64::new(0xA2_0000 + seed);
                let n = 2 + rng.below(9);
                let d = random_digraph(n, 0.15 + 0.5 * rng.unit(), &mut rng);
                let (s_len, t_len) = (1 + rng.below(n.div_ceil(2)), 1 + rng.below(n.div_ceil(2)));
                let sources = rng.sample_distinct(n, s_len);
                let sinks = rng.sample_distinct(n, t_len);
                let flow = max_disjoint_paths(&d, &sources, &sinks, n).unwrap().system.len();
                let brute = max_disjoint_st_paths_bruteforce(&d, &sources, &sinks).unwrap();
                (flow != brute).then(|| format!("seed {seed}: flow {flow}, brute {brute}"))
            })
            .collect();
        (mismatches.is_empty(), format!("{count} instances, mismatches: {mismatches:?}"))
    })
}

/// The finder's vertex is nearly out-dominating with the strict bound.
pub fn criterion_3(profile: Profile) -> CriterionResult {
    timed(3, "finder returns nearly out-dominating vertices", || {
        let count = pick(profile, 100, 500);
        let failures: Vec<u64> = (0..count as u64)
            .into_par_iter()
            .filter(|&seed| {
                let mut rng = Rng64::new(0xA3_0000 + seed);
                let n = 1 + rng.below(60);
                let density = [0.0, 0.05, 0.2, 0.5, 0.9][rng.below(5)];
                let d = random_semicomplete(n, density, seed).unwrap();
                let u = find_nearly_out_dominating(&d).unwrap();
                let p = is_nearly_out_dominating(&d, u, n).unwrap();
                !(p.verdict && p.meets_strict_bound())
            })
            .collect();
        (failures.is_empty(), format!("{count} instances, failing seeds: {failures:?}"))
    })
}

/// The 5-connected rotational tournament on 15 vertices is 2-linked.
pub fn criterion_4(profile: Profile) -> CriterionResult {
    timed(4, "R15 answers yes to random 2-linkage queries", || {
        let d = rotational_tournament(15).unwrap();
        let kappa = vertex_connectivity(&d).unwrap();
        let count = pick(profile, 10, 50);
        let mut rng = Rng64::new(0xA4);
        let queries: Vec<Vec<(usize, usize)>> = (0..count)
            .map(|_| {
                let v = rng.sample_distinct(15, 4);
                vec![(v[0], v[1]), (v[2], v[3])]
            })
            .collect();
        let bad: Vec<String> = queries
            .par_iter()
            .filter_map(|pairs| match exists_disjoint_linkage(&d, pairs, OracleBudget::default()).unwrap() {
                LinkageVerdict::Yes { paths } if verify_linkage(&d, pairs, &paths).is_ok() => None,
                v => Some(format!("{pairs:?}: {v:?}")),
            })
            .collect();
        (
            kappa >= 5 && bad.is_empty(),
            format!("kappa(R15) = {kappa}, {count} queries, failures: {bad:?}"),
        )
    })
}

/// Outcome of one linker run on a generated instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkTrial {
    pub k: usize,
    pub n: usize,
    pub seed: u64,
    pub connected: bool,
    pub min_out_degree: usize,
    pub certified: bool,
    pub failure: Option<String>,
}

pub fn link_trial(k: usize, n: usize, seed: u64) -> LinkTrial {
    let d = near_regular_tournament(n, seed).unwrap();
    let connected = is_k_connected(&d, 2 * k + 1);
    let mut rng = Rng64::new(0xA5_0000 + seed);
    let v = rng.sample_distinct(n, 2 * k);
    let pairs: Vec<(usize, usize)> = (0..k).map(|i| (v[2 * i], v[2 * i + 1])).collect();
    let run = link(&d, &pairs, LinkOptions::default()).unwrap();
    let (certified, failure) = match &run.outcome {
        LinkOutcome::Linked(c) => (verify_linkage(&d, &pairs, &c.paths).is_ok(), None),
        LinkOutcome::Failed(f) => (false, Some(format!("{:?} at {:?}: {}", f.kind, f.step, f.message))),
    };
    LinkTrial {
        k,
        n,
        seed,
        connected,
        min_out_degree: d.min_out_degree().unwrap(),
        certified,
        failure,
    }
}

/// End-to-end linkage certificates at k = 2 and k = 3.
pub fn criterion_5(profile: Profile) -> CriterionResult {
    timed(5, "linker certifies near-regular tournaments at k = 2, 3", || {
        let mut jobs: Vec<(usize, usize, u64)> = (0..pick(profile, 5, 30) as u64).map(|s| (2, 251, s)).collect();
        jobs.extend((0..pick(profile, 2, 10) as u64).map(|s| (3, 400, 100 + s)));
        let trials: Vec<LinkTrial> = jobs.par_iter().map(|&(k, n, s)| link_trial(k, n, s)).collect();
        let certified = trials.iter().filter(|t| t.certified).count();
        let bad: Vec<&LinkTrial> = trials
            .iter()
            .filter(|t| !t.certified || !t.connected || t.min_out_degree < crate::linker::required_out_degree(t.k))
            .collect();
        (
            bad.is_empty(),
            format!("{certified}/{} certified; problems: {bad:?}", trials.len()),
        )
    })
}

/// Builds the full-scale counterexample used by criteria 6 and 8.
pub fn full_scale_counterexample() -> (Digraph, CounterexampleLayout) {
    build_counterexample(&CounterexampleParams {
        k: 42,
        n: 1764,
        seed: None,
    })
    .expect("k = 42, n = 1764 is a valid parameter set")
}

/// Certification of the k = 42 counterexample.
pub fn criterion_6(profile: Profile) -> CriterionResult {
    timed(6, "k = 42 counterexample construction", || {
        let (t, lay) = full_scale_counterexample();
        let k = lay.k;
        let delta = t.min_out_degree().unwrap();
        let bound = min_out_degree_bound(k);
        let rules = verify_construction_rules(&t, &lay).unwrap();
        let failed: Vec<String> = rules.rules.iter().filter(|r| !r.passed).map(|r| r.rule.to_string()).collect();
        let p2 = verify_property2(&t, &lay);
        let p2_ok = p2.as_ref().map(|s| s.len() == k + 1).unwrap_or(false);
        let samples = pick(profile, 50, 200);
        let sc = sampled_connectivity_check(&t, 2 * k + 1, samples, 0xA6).unwrap();
        let passed = t.is_tournament()
            && delta >= bound
            && rules.all_passed()
            && rules.u_minus_regular
            && rules.tier_orders
            && p2_ok
            && sc.passed;
        (
            passed,
            format!(
                "tournament {}, min out-degree {delta} (bound {bound}), failed rules {failed:?}, property-2 paths {}, \
                 sampled cut min {:?} over {samples} pairs (target {})",
                t.is_tournament(),
                p2.map(|s| s.len()).unwrap_or(0),
                sc.min_observed,
                sc.target
            ),
        )
    })
}

/// Audit of the path-adjustment program on the hand-built instance.
pub fn criterion_7(_profile: Profile) -> CriterionResult {
    timed(7, "path-adjustment audit on the adversarial instance", || {
        let (d, pairs) = adversarial_adjustment_instance(10).unwrap();
        let run = link(&d, &pairs, LinkOptions::default()).unwrap();
        let st = &run.state;
        let k = st.k;
        let x1 = st.classification.as_ref().map(|c| c.x1.len()).unwrap_or(0);
        let mut rounds = 0;
        let mut ok = true;
        let mut notes = Vec::new();
        for e in st.trace.a2_rounds() {
            if let TraceEvent::A2 {
                round,
                w_growth,
                o_cand_size,
                bad_count,
                case,
                ..
            } = e
            {
                rounds += 1;
                ok &= *w_growth <= 7 * k + 6 && *o_cand_size > 0 && *bad_count <= 4 * k + 4;
                notes.push(format!("round {round}: W +{w_growth}, O_cand {o_cand_size}, bad {bad_count}, {case:?}"));
            }
        }
        let conditions = check_adjustment_conditions(&d, st);
        ok &= rounds >= 1 && rounds <= x1 && conditions.is_ok();
        (
            ok,
            format!("{rounds} round(s) for |X1| = {x1}; {}; final conditions {:?}", notes.join("; "), conditions),
        )
    })
}

/// Five single-arc flips, each expected to break the named rule at that arc.
pub fn mutations(lay: &CounterexampleLayout) -> Vec<(Rule, (usize, usize))> {
    let h1 = lay.layer(1);
    vec![
        (Rule::A1, (h1[0], h1[1])),
        (Rule::A3, (lay.u2_plus()[0], lay.u1_plus()[0])),
        (Rule::B3, (lay.y_minus[0], lay.y[0])),
        (Rule::B5, (lay.z_minus, lay.y[0])),
        (Rule::C2, (lay.y[0], lay.x[0])),
    ]
}

/// Fault injection: each flip is caught by its owning rule with the
/// flipped arc as witness.
pub fn criterion_8(_profile: Profile) -> CriterionResult {
    timed(8, "single-arc mutations are caught by their rules", || {
        let (t, lay) = full_scale_counterexample();
        let results: Vec<(Rule, bool)> = mutations(&lay)
            .par_iter()
            .map(|&(rule, (a, b))| {
                let mut bad = t.clone();
                assert!(bad.has_arc(a, b), "{rule}: {a}->{b} not present");
                bad.orient(b, a);
                let r = verify_construction_rules(&bad, &lay).unwrap();
                let c = r.get(rule);
                let caught = !c.passed
                    && c.witness.is_some_and(|w| w.arc == (a, b) && w.kind == WitnessKind::Missing);
                (rule, caught)
            })
            .collect();
        (
            results.iter().all(|r| r.1),
            format!("caught: {:?}", results.iter().map(|(r, c)| format!("{r}={c}")).collect::<Vec<_>>()),
        )
    })
}

pub fn run_criterion(id: u8, profile: Profile) -> Option<CriterionResult> {
    Some(match id {
        1 => criterion_1(profile),
        2 => criterion_2(profile),
        3 => criterion_3(profile),
        4 => criterion_4(profile),
        5 => criterion_5(profile),
        6 => criterion_6(profile),
        7 => criterion_7(profile),
        8 => criterion_8(profile),
        _ => return None,
    })
}

pub fn run_acceptance_suite(profile: Profile) -> RunReport {
    let mut report = RunReport::new("accept");
    report.param("profile", profile);
    for id in 1..=8 {
        let r = run_criterion(id, profile).expect("ids 1..=8 exist");
        report.timings.insert(format!("criterion_{id}"), r.seconds);
        report.verdict(format!("criterion {id}: {}", r.name), r.passed, r.detail);
    }
    report
}
