mod common;

use proptest::prelude::*;

use cryarr::catalog::{self, make_series, Series};
use cryarr::groupoid::{traverse, GroupoidGraph, RootObject};
use cryarr::localization::{coordinate_plane, localize, rank2_cycles, sorted_plane};
use cryarr::rank2::{frieze_product, quiddity_of_vectors, QuiddityCycle};
use cryarr::verifier::{
    all_passed, check_lemcon, check_r111, check_sum_of_roots, compute_k0, max_vol2, meets_positive_orthant,
    run_suite, Hypothesis, Verdict, VerifierError,
};

fn twelve() -> RootObject {
    RootObject::new(
        3,
        [
            [0, 0, 1],
            [0, 1, 0],
            [0, 1, 1],
            [0, 1, 2],
            [0, 1, 3],
            [1, 0, 0],
            [1, 0, 1],
            [1, 1, 1],
            [1, 1, 2],
            [1, 1, 3],
            [1, 2, 3],
            [1, 2, 4],
        ]
        .iter()
        .map(|r| r.to_vec())
        .collect(),
    )
    .unwrap()
}

fn closures() -> Vec<(String, GroupoidGraph)> {
    let mut out: Vec<(String, GroupoidGraph)> = ["A3", "B3", "C3", "A4", "B4", "C4", "D4", "rank2-seven"]
        .iter()
        .map(|n| (n.to_string(), traverse(&catalog::lookup(n).unwrap().object().unwrap(), 10_000).unwrap()))
        .collect();
    out.push(("twelve".into(), traverse(&twelve(), 10_000).unwrap()));
    out
}

fn stat(g: &GroupoidGraph, check: &str, key: &str) -> i64 {
    run_suite(g).into_iter().find(|r| r.check == check).unwrap().stats[key]
}

#[test]
fn suite_passes_on_every_closure() {
    for (name, g) in closures() {
        let reports = run_suite(&g);
        assert_eq!(reports.len(), 11);
        assert!(all_passed(&reports), "{name}: {reports:#?}");
    }
}

#[test]
fn vol2_maximum_matches_minor_gcds() {
    for (name, g) in closures() {
        let oracle = g
            .objects()
            .iter()
            .flat_map(|o| {
                let r = o.roots();
                (0..r.len()).flat_map(move |x| (x + 1..r.len()).map(move |y| common::vol2_minors(&r[x], &r[y])))
            })
            .max()
            .unwrap() as i64;
        assert_eq!(max_vol2(&g), oracle, "{name}");
    }
    let g = traverse(&twelve(), 10_000).unwrap();
    assert_eq!(max_vol2(&g), 3);
}

#[test]
fn k0_on_the_twelve_root_closure() {
    let g = traverse(&twelve(), 10_000).unwrap();
    let mut instances = 0;
    let mut max = -1;
    for obj in g.objects() {
        for p in common::permutations(3) {
            let (a, b, c) = (p[0], p[1], p[2]);
            let in_plane = obj.roots().iter().filter(|r| r[c] == 0).count();
            let got = compute_k0(obj, [a, b, c]);
            if in_plane < 5 {
                assert!(matches!(got, Err(VerifierError::PreconditionFailed(_))));
                continue;
            }
            let k0 = obj.roots().iter().filter(|r| r[b] == 2 && r[c] == 1).map(|r| r[a]).min();
            assert_eq!(got.unwrap(), k0);
            let k0 = k0.expect("k0 defined");
            assert!(k0 <= 4);
            instances += 1;
            max = max.max(k0);
        }
    }
    assert_eq!(instances, 10);
    assert_eq!(stat(&g, "k0", "instances"), instances);
    assert_eq!(stat(&g, "k0", "max_k0"), max);
    assert_eq!(max, 3);
}

#[test]
fn pinned_statistics() {
    let expect = [
        ("A3", -1, 3, 1),
        ("B3", -2, 4, 2),
        ("C3", -2, 4, 2),
    ];
    for (name, min, b128, vol2) in expect {
        let g = traverse(&make_series(name[..1].parse::<Series>().unwrap(), 3).unwrap().object().unwrap(), 100).unwrap();
        assert_eq!(stat(&g, "bound7", "min_cartan"), min, "{name}");
        assert_eq!(stat(&g, "b128", "max_localization"), b128, "{name}");
        assert_eq!(stat(&g, "vol2", "max_vol2"), vol2, "{name}");
    }
}

#[test]
fn failing_objects_produce_witnesses() {
    // (1,2) is not a sum of two positive roots.
    let g = GroupoidGraph::singleton(RootObject::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 2]]).unwrap());
    let r = check_sum_of_roots(&g);
    assert_eq!(r.verdict, Verdict::Fail);
    assert!(r.witnesses.iter().any(|w| w.roots.contains(&vec![1, 2])));
    // Irreducible without (1,1,1).
    let g = GroupoidGraph::singleton(
        RootObject::new(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 0], vec![0, 1, 1]]).unwrap(),
    );
    assert_eq!(check_r111(&g).verdict, Verdict::Fail);
}

#[test]
fn lemcon_rejects_unmet_hypotheses() {
    let g = traverse(&make_series(Series::B, 3).unwrap().object().unwrap(), 100).unwrap();
    assert_eq!(
        check_lemcon(&g, 0, &[0, 1, 0], &[0, 0, 1], 1),
        Err(VerifierError::HypothesisFailed(Hypothesis::KAtLeastTwo))
    );
    // (1,0,0) + 2(0,1,0) is not a root.
    assert_eq!(
        check_lemcon(&g, 0, &[1, 0, 0], &[0, 1, 0], 2),
        Err(VerifierError::HypothesisFailed(Hypothesis::EndpointRoot))
    );
    let ok = (0..3)
        .flat_map(|a| (0..3).map(move |b| (a, b)))
        .filter(|(a, b)| a != b)
        .filter_map(|(a, b)| {
            let mut alpha = vec![0; 3];
            alpha[a] = 1;
            let mut beta = vec![0; 3];
            beta[b] = 1;
            check_lemcon(&g, 0, &alpha, &beta, 2).ok()
        })
        .collect::<Vec<_>>();
    assert!(!ok.is_empty());
    assert!(ok.iter().all(|r| r.passed()));
}

#[test]
fn localization_cycles_are_rank2_quiddities() {
    for (name, g) in closures() {
        if g.rank() != 3 {
            continue;
        }
        for obj in g.objects() {
            for p in common::permutations(3) {
                let (i, j) = (p[0], p[1]);
                let cycles = rank2_cycles(obj, i, j).unwrap();
                let n = cycles.n;
                assert_eq!(n, coordinate_plane(obj, i, j).members.len());
                assert_eq!(cycles.quiddity[..n], cycles.quiddity[n..], "{name}: period");
                let q = QuiddityCycle(cycles.quiddity[..n].to_vec());
                assert_eq!(frieze_product(&q), [[-1, 0], [0, -1]]);
                let plane: Vec<[i64; 2]> = sorted_plane(obj, i, j).unwrap().iter().map(|b| [b[i], b[j]]).collect();
                let expected = quiddity_of_vectors(&plane).unwrap();
                let mut rev = q.0.clone();
                rev.reverse();
                assert!(q.is_rotation_of(&expected) || QuiddityCycle(rev).is_rotation_of(&expected), "{name}");
                assert!(!cycles.has_consecutive_zeros(), "{name}");
            }
        }
    }
}

#[test]
fn localize_matches_span_test() {
    for (name, g) in closures() {
        if g.rank() != 3 {
            continue;
        }
        let obj = g.base();
        let roots = obj.roots();
        for x in 0..roots.len() {
            for y in x + 1..roots.len() {
                let loc = localize(obj, &[roots[x].clone(), roots[y].clone()]);
                let members: Vec<_> = roots
                    .iter()
                    .filter(|v| common::cofactor_det(&[roots[x].clone(), roots[y].clone(), v.to_vec()]) == 0)
                    .cloned()
                    .collect();
                assert_eq!(loc.members, members, "{name}");
                assert_eq!(loc.dimension, 2);
                assert!(loc.covered_by_simple(), "{name}");
            }
        }
    }
}

proptest! {
    #[test]
    fn orthant_test_matches_bruteforce(
        alpha in prop::collection::vec(-4i64..=4, 3),
        beta in prop::collection::vec(-4i64..=4, 3),
    ) {
        // Interval endpoints have denominators ≤ 4, so a feasible q can be
        // taken with denominator ≤ 8 (an endpoint or a mediant).
        prop_assert_eq!(meets_positive_orthant(&alpha, &beta), common::orthant_bruteforce(&alpha, &beta, 20));
    }
}
