//! Property tests against exhaustive oracles on small digraphs.

use proptest::prelude::*;

use tournament_linkage::certificate::verify_linkage;
use tournament_linkage::dominators::{find_nearly_out_dominating, is_nearly_out_dominating};
use tournament_linkage::flow::{max_disjoint_paths, min_weight_disjoint_paths, vertex_connectivity};
use tournament_linkage::generators::{random_semicomplete, random_tournament};
use tournament_linkage::io::{read_arc_list, write_arc_list};
use tournament_linkage::oracle::{
    exists_disjoint_linkage, max_disjoint_st_paths_bruteforce, min_separator_bruteforce, LinkageVerdict, OracleBudget,
};
use tournament_linkage::{reduce_to_minimal_path, Digraph, Path};

fn digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let arcs = (0..n * n).filter(|&i| bits[i] && i / n != i % n).map(|i| (i / n, i % n));
            Digraph::from_arcs(n, arcs).unwrap()
        })
    })
}

fn subset(n: usize, mask: u32) -> Vec<usize> {
    let s: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
    if s.is_empty() {
        vec![0]
    } else {
        s
    }
}

/// Simple paths from a source to a sink meeting the terminal sets only at
/// their ends (a shared vertex gives a one-vertex path).
fn all_paths(d: &Digraph, sources: &[usize], sinks: &[usize]) -> Vec<Vec<usize>> {
    fn go(d: &Digraph, p: &mut Vec<usize>, srcs: &[usize], sinks: &[usize], out: &mut Vec<Vec<usize>>) {
        let h = *p.last().unwrap();
        if sinks.contains(&h) {
            out.push(p.clone());
            return;
        }
        for w in d.out_row(h).iter() {
            if !p.contains(&w) && !srcs.contains(&w) {
                p.push(w);
                go(d, p, srcs, sinks, out);
                p.pop();
            }
        }
    }
    let mut out = Vec::new();
    for &s in sources {
        go(d, &mut vec![s], sources, sinks, &mut out);
    }
    out
}

/// Minimum total order of `count` disjoint paths, by enumeration.
fn min_total_bruteforce(d: &Digraph, sources: &[usize], sinks: &[usize], count: usize) -> Option<usize> {
    fn pick(paths: &[Vec<usize>], from: usize, left: usize, used: u64, total: usize, best: &mut Option<usize>) {
        if left == 0 {
            *best = Some(best.map_or(total, |b| b.min(total)));
            return;
        }
        for i in from..paths.len() {
            let m = paths[i].iter().fold(0u64, |m, &v| m | 1 << v);
            if m & used == 0 {
                pick(paths, i + 1, left - 1, used | m, total + paths[i].len(), best);
            }
        }
    }
    let paths = all_paths(d, sources, sinks);
    let mut best = None;
    pick(&paths, 0, count, 0, 0, &mut best);
    best
}

#[test]
fn layered_instance_forces_one_long_path() {
    // 0 -> 5 directly; 1 reaches the sinks only through 2 (or the longer
    // 3 -> 4 detour).
    let d = Digraph::from_arcs(7, [(0, 5), (1, 2), (2, 6), (1, 3), (3, 4), (4, 6), (2, 5)]).unwrap();
    let sys = min_weight_disjoint_paths(&d, &[0, 1], &[5, 6], 2).unwrap();
    assert_eq!(sys.total_vertices(), 2 * 2 + 1);
    assert_eq!(min_total_bruteforce(&d, &[0, 1], &[5, 6], 2), Some(5));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn menger_duality(d in digraph(8), sm in 1u32..256, tm in 1u32..256) {
        let n = d.n();
        let (s, t) = (subset(n, sm), subset(n, tm));
        let dp = max_disjoint_paths(&d, &s, &t, n).unwrap();
        let brute = max_disjoint_st_paths_bruteforce(&d, &s, &t).unwrap();
        prop_assert_eq!(dp.system.len(), brute);
        let sep = min_separator_bruteforce(&d, &s, &t).unwrap();
        prop_assert_eq!(sep.len(), brute);
        if let Some(cut) = dp.cut {
            prop_assert_eq!(cut.separator.len(), brute);
        }
    }

    #[test]
    fn min_weight_is_optimal(d in digraph(7), sm in 1u32..128, tm in 1u32..128, count in 1usize..4) {
        let n = d.n();
        let (s, t) = (subset(n, sm), subset(n, tm));
        match (min_weight_disjoint_paths(&d, &s, &t, count), min_total_bruteforce(&d, &s, &t, count)) {
            (Ok(sys), Some(best)) => {
                prop_assert_eq!(sys.total_vertices(), best);
                for p in &sys.paths {
                    prop_assert_eq!(reduce_to_minimal_path(&d, p).unwrap().len(), p.len());
                    prop_assert!(p.vertices()[1..].iter().all(|v| !s.contains(v)));
                }
            }
            (Err(_), None) => {}
            (a, b) => prop_assert!(false, "flow {:?} vs brute {:?}", a.map(|s| s.total_vertices()), b),
        }
    }

    #[test]
    fn connectivity_matches_separator_enumeration(seed in 0u64..10_000, n in 3usize..9) {
        let d = random_tournament(n, seed);
        let kappa = vertex_connectivity(&d).unwrap();
        // Smallest set whose removal leaves some ordered pair unreachable.
        let brute = (0..n)
            .flat_map(|u| (0..n).map(move |v| (u, v)))
            .filter(|&(u, v)| u != v && !d.has_arc(u, v))
            .map(|(u, v)| min_separator_bruteforce(&d, &d.out_row(u).to_vec(), &d.in_row(v).to_vec()).unwrap().len())
            .min()
            .unwrap_or(n - 1);
        prop_assert_eq!(kappa, brute);
    }

    #[test]
    fn oracle_certificates_verify_and_relabel(seed in 0u64..10_000, n in 4usize..9, rot in 1usize..8) {
        let d = random_tournament(n, seed);
        let pairs = [(0, 1), (2, 3)];
        let v = exists_disjoint_linkage(&d, &pairs, OracleBudget::default()).unwrap();
        if let LinkageVerdict::Yes { paths } = &v {
            prop_assert!(verify_linkage(&d, &pairs, paths).is_ok());
        }
        let perm = |x: usize| (x + rot) % n;
        let e = Digraph::from_arcs(n, d.arcs().map(|(a, b)| (perm(a), perm(b)))).unwrap();
        let w = exists_disjoint_linkage(&e, &[(perm(0), perm(1)), (perm(2), perm(3))], OracleBudget::default()).unwrap();
        prop_assert_eq!(matches!(v, LinkageVerdict::Yes { .. }), matches!(w, LinkageVerdict::Yes { .. }));
    }

    #[test]
    fn minimal_path_reduction(seed in 0u64..10_000, n in 3usize..12) {
        let d = random_tournament(n, seed);
        // A Hamiltonian-style greedy walk gives a long path to reduce.
        let mut walk = vec![0];
        while let Some(w) = d.out_row(*walk.last().unwrap()).iter().find(|w| !walk.contains(w)) {
            walk.push(w);
        }
        let p = Path::new(&d, walk.clone()).unwrap();
        let r = reduce_to_minimal_path(&d, &p).unwrap();
        prop_assert_eq!(r.first(), p.first());
        prop_assert_eq!(r.last(), p.last());
        prop_assert!(r.vertices().iter().all(|v| walk.contains(v)));
        prop_assert_eq!(reduce_to_minimal_path(&d, &r).unwrap(), r.clone());
        let vs = r.vertices();
        for i in 0..vs.len() {
            for j in i + 2..vs.len() {
                prop_assert!(!d.has_arc(vs[i], vs[j]));
            }
        }
    }

    #[test]
    fn finder_meets_strict_bound(seed in 0u64..100_000, n in 1usize..40, dens in 0.0f64..1.0) {
        let d = random_semicomplete(n, dens, seed).unwrap();
        let u = find_nearly_out_dominating(&d).unwrap();
        let p = is_nearly_out_dominating(&d, u, n).unwrap();
        prop_assert!(p.verdict && p.meets_strict_bound());
    }

    #[test]
    fn arc_list_round_trip(d in digraph(10)) {
        prop_assert_eq!(read_arc_list(&write_arc_list(&d)).unwrap(), d);
    }
}
