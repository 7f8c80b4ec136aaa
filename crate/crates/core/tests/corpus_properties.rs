//! Structural invariants checked on every group of the finite corpus.

mod common;

use std::collections::HashSet;

use common::*;
use powroot_core::oracle::enumerate_group;
use powroot_core::{AbelianQuotient, DiagClass, Matrix, RootEngine, RootError, SeriesStrategy};

#[test]
fn layer_actions_are_homomorphisms() {
    for named in finite_corpus() {
        let g = &named.group;
        for strategy in [SeriesStrategy::Superdiagonal, SeriesStrategy::Refined] {
            let series = g.central_series(strategy).unwrap();
            for j in 0..series.len() {
                for a in g.generators() {
                    for b in g.generators() {
                        let ab = series.layer_action(&(a * b), j).unwrap().matrix;
                        let prod = &series.layer_action(a, j).unwrap().matrix * &series.layer_action(b, j).unwrap().matrix;
                        assert_eq!(ab, prod, "{} {strategy} layer {j}", named.name);
                    }
                }
                for n in g.elements().unwrap().iter().filter(|m| m.is_unitriangular()).take(50) {
                    assert!(series.layer_action(n, j).unwrap().matrix.is_identity(), "{}: N acts on layer {j}", named.name);
                }
            }
        }
    }
}

#[test]
fn fixed_spaces_grow_under_powers() {
    for named in finite_corpus() {
        let g = &named.group;
        let series = g.central_series(SeriesStrategy::Superdiagonal).unwrap();
        for x in g.elements().unwrap().iter().step_by(7) {
            for k in 2..=6 {
                let xk = x.pow(k).unwrap();
                for j in 0..series.len() {
                    let f = series.fixed_subspace(x, j).unwrap();
                    assert!(f.is_subspace_of(&series.fixed_subspace(&xk, j).unwrap()), "{}", named.name);
                }
            }
        }
    }
}

#[test]
fn quotient_roots_match_exhaustion() {
    for named in finite_corpus() {
        let g = &named.group;
        let quotient = AbelianQuotient::build(g).unwrap();
        let classes = quotient.classes().unwrap();
        for c in &classes {
            assert_eq!(&quotient.project(&quotient.lift_class(c).unwrap()), c);
        }
        for k in admissible_ks(g.field().characteristic()) {
            for a in &classes {
                let roots = quotient.kth_root_classes(a, k).unwrap();
                let mut brute: Vec<DiagClass> = classes.iter().filter(|b| b.pow(k as i64) == *a).cloned().collect();
                let mut got = roots.roots.clone();
                brute.sort_by(|x, y| x.canonical_cmp(y));
                got.sort_by(|x, y| x.canonical_cmp(y));
                assert_eq!(got, brute, "{} a={a} k={k}", named.name);
            }
        }
    }
}

#[test]
fn witness_totality_on_small_groups() {
    for named in finite_corpus().iter().filter(|n| n.group.elements().unwrap().len() <= 600) {
        let g = &named.group;
        let eng = RootEngine::new(g, SeriesStrategy::Superdiagonal).unwrap();
        let unipotents: Vec<&Matrix> = g.elements().unwrap().iter().filter(|m| m.is_unitriangular()).collect();
        let reps: Vec<Matrix> = {
            let mut seen = HashSet::new();
            g.elements().unwrap().iter().filter(|x| seen.insert(x.diagonal())).cloned().collect()
        };
        for k in admissible_ks(g.field().characteristic()) {
            for x in &reps {
                let cert = eng.coset_root_decision(x, k).unwrap();
                let Some(w) = cert.witness else { continue };
                for n in &unipotents {
                    let y = eng.construct_root(x, n, &w.b, k).unwrap();
                    assert_eq!(y.pow(k as i64).unwrap(), x * *n, "{}", named.name);
                }
            }
        }
    }
}

/// Under the obstruction preconditions `Im θ ⊆ U`, and with `x = lift(b)^k`
/// every root `y` of class `b` with `y^k ∈ x·N_j` has its layer-`j` defect in `U`.
#[test]
fn reachability_bound() {
    let mut exercised = 0;
    let mut pairs = 0;
    for named in finite_corpus() {
        let g = &named.group;
        let elements = g.elements().unwrap();
        if elements.len() > 3000 {
            continue;
        }
        let eng = RootEngine::new(g, SeriesStrategy::Superdiagonal).unwrap();
        let series = eng.series();
        let classes = eng.quotient().classes().unwrap();
        for k in admissible_ks(g.field().characteristic()).into_iter().filter(|&k| k > 1) {
            for b in &classes {
                let rep = eng.quotient().lift_class(b).unwrap();
                let x = rep.pow(k as i64).unwrap();
                let x_inv = x.pow(-1).unwrap();
                for j in 0..series.len() {
                    let o = match eng.obstruction_subspace(&x, b, j, k) {
                        Err(RootError::Precondition(_)) => continue,
                        other => other.unwrap(),
                    };
                    exercised += 1;
                    assert!(o.contained, "{} b={b} layer {j}: Im θ not in U", named.name);
                    for y in elements.iter().filter(|y| g.diag_class(y) == *b) {
                        if let Some(v) = series.layer(j).unwrap().coordinates(&(&x_inv * &y.pow(k as i64).unwrap())) {
                            pairs += 1;
                            assert!(o.u.contains(&v), "{} b={b} layer {j}: reachable v outside U", named.name);
                        }
                    }
                }
            }
        }
    }
    assert!(exercised > 0 && pairs > 0);
}

#[test]
fn oracle_structural_properties() {
    for named in finite_corpus().iter().filter(|n| n.group.elements().unwrap().len() <= 3000) {
        let g = &named.group;
        let e = enumerate_group(g, 20_000).unwrap();
        let again = enumerate_group(g, 20_000).unwrap();
        assert_eq!(e.elements(), again.elements());
        assert_eq!(e.power_image(1).size(), e.len());
        let p = g.field().characteristic();
        let images: Vec<_> = (1..=6).map(|k| e.power_image(k)).collect();
        assert_eq!(images[1], again.power_image(2));
        for k in 1..=3usize {
            for m in 2..=6 / k {
                let km = &images[k * m - 1];
                let kk = &images[k - 1];
                assert!((0..e.len()).all(|i| !km.marked[i] || kk.marked[i]), "{} P_{} ⊄ P_{k}", named.name, k * m);
            }
        }
        for k in admissible_ks(p) {
            let image = &images[k as usize - 1];
            let mut by_class = std::collections::HashMap::new();
            for x in e.elements().iter().step_by(3) {
                let truth = e.coset_coverage_truth(image, x).unwrap();
                assert_eq!(*by_class.entry(x.diagonal()).or_insert(truth), truth, "{}", named.name);
            }
        }
    }
}
