use super::*;
use crate::exactalg::Field;
use crate::group_ctx::fixtures::*;
use crate::group_ctx::GroupSpec;

fn f5() -> Field {
    f(5)
}

fn class(field: Field, v: &[i64]) -> DiagClass {
    DiagClass(v.iter().map(|&x| field.from_i64(x)).collect())
}

fn vecf(field: Field, v: &[i64]) -> Vec<FieldScalar> {
    v.iter().map(|&x| field.from_i64(x)).collect()
}

fn diag(field: Field, v: &[i64]) -> Matrix {
    Matrix::diagonal_matrix(field, &vecf(field, v))
}

fn g5() -> TriangularGroup {
    g5_spec().validate().unwrap()
}

#[test]
fn g5_square_coset_fails() {
    let ctx = g5();
    let eng = RootEngine::new(&ctx, SeriesStrategy::Superdiagonal).unwrap();
    let g = &ctx.generators()[0];
    let x = g * g;
    let filt = eng.bstar_filter(&x, 2).unwrap();
    assert_eq!(filt.roots.roots, vec![class(f5(), &[4, 2, 1]), class(f5(), &[4, 3, 1])]);
    assert!(filt.survivors.is_empty());
    for c in &filt.candidates {
        // the layer holding position (0,2)
        assert_eq!(c.first_failure().unwrap().layer, 1);
    }
    assert_eq!(eng.bstar_via_theta(&x, 2).unwrap().survivors, filt.survivors);
    let cert = eng.coset_root_decision(&x, 2).unwrap();
    assert!(!cert.decision);
    let Some(Obstruction::Layers(items)) = &cert.obstruction else { panic!() };
    assert_eq!(items.len(), 2);
    assert!(items.iter().all(|o| o.vector == vecf(f5(), &[1]) && o.positions == vec![(0, 2)]));
}

#[test]
fn g5_cube_coset_passes() {
    let ctx = g5();
    for strategy in [SeriesStrategy::Superdiagonal, SeriesStrategy::Refined, SeriesStrategy::Merged] {
        let eng = RootEngine::new(&ctx, strategy).unwrap();
        let g = &ctx.generators()[0];
        let x = g.pow(3).unwrap();
        let filt = eng.bstar_filter(&x, 3).unwrap();
        assert_eq!(filt.roots.roots, vec![class(f5(), &[4, 2, 1])]);
        assert_eq!(filt.survivors, filt.roots.roots);
        let cert = eng.coset_root_decision(&x, 3).unwrap();
        assert!(cert.decision);
        let w = cert.witness.unwrap();
        assert_eq!(w.b, class(f5(), &[4, 2, 1]));
        assert_eq!(w.root, g.clone());
    }
}

#[test]
fn identity_coset_always_passes() {
    let ctx = g5();
    let eng = RootEngine::new(&ctx, SeriesStrategy::Superdiagonal).unwrap();
    for k in [1, 2, 3, 4, 6] {
        let cert = eng.coset_root_decision(&ctx.identity(), k).unwrap();
        assert!(cert.decision);
        assert!(cert.witness.unwrap().b.is_identity());
    }
    assert_eq!(
        eng.coset_root_decision(&ctx.identity(), 5).unwrap_err(),
        RootError::NotCoprime { k: 5, characteristic: 5 }
    );
}

#[test]
fn theta_on_merged_layer() {
    let ctx = g5();
    let eng = RootEngine::new(&ctx, SeriesStrategy::Merged).unwrap();
    let b = class(f5(), &[4, 2, 1]);
    let t2 = eng.theta_operator(&b, 0, 2).unwrap();
    assert_eq!(t2.matrix, diag(f5(), &[0, 4]));
    assert!(t2.det.is_zero() && t2.inverse.is_none());
    let t3 = eng.theta_operator(&b, 0, 3).unwrap();
    assert_eq!(t3.matrix, diag(f5(), &[1, 3]));
    let e = class(f5(), &[1, 1, 1]);
    assert_eq!(eng.theta_operator(&e, 0, 4).unwrap().matrix, diag(f5(), &[4, 4]));
}

#[test]
fn g5_root_construction() {
    let ctx = g5();
    let eng = RootEngine::new(&ctx, SeriesStrategy::Superdiagonal).unwrap();
    let g = &ctx.generators()[0];
    let x = g.pow(3).unwrap();
    let n = translation(5, 1, 1);
    let b = class(f5(), &[4, 2, 1]);
    let y = eng.construct_root(&x, &n, &b, 3).unwrap();
    assert_eq!(y, Matrix::from_i64(f5(), &[&[4, 0, 4], &[0, 2, 4], &[0, 0, 1]]));
    assert_eq!(y.pow(3).unwrap(), Matrix::from_i64(f5(), &[&[4, 0, 4], &[0, 3, 3], &[0, 0, 1]]));
    // every n in N
    for u in ctx.elements().unwrap().iter().filter(|m| m.is_unitriangular()) {
        let y = eng.construct_root(&x, u, &b, 3).unwrap();
        assert_eq!(y.pow(3).unwrap(), &x * u);
    }
    let x2 = g * g;
    assert!(matches!(
        eng.construct_root(&x2, &n, &b, 2),
        Err(RootError::NotInBStar { .. })
    ));
}

#[test]
fn heisenberg_q_square_root() {
    let ctx = heisenberg_q_spec(vec![]).validate().unwrap();
    let q = Field::Rational;
    let eng = RootEngine::new(&ctx, SeriesStrategy::Superdiagonal).unwrap();
    let n = Matrix::from_i64(q, &[&[1, 1, 1], &[0, 1, 1], &[0, 0, 1]]);
    let e = ctx.identity();
    let y = eng.construct_root(&e, &n, &class(q, &[1, 1, 1]), 2).unwrap();
    let h = q.parse("1/2").unwrap();
    let expected = Matrix::from_rows(
        q,
        vec![
            vec![q.one(), h.clone(), q.parse("3/8").unwrap()],
            vec![q.zero(), q.one(), h],
            vec![q.zero(), q.zero(), q.one()],
        ],
    )
    .unwrap();
    assert_eq!(y, expected);
    let cert = eng.coset_root_decision(&n, 2).unwrap();
    assert!(cert.decision);
    assert_eq!(cert.witness.unwrap().root, expected);
}

#[test]
fn conjugator_example() {
    let sigma = diag(f5(), &[4, 2]);
    let w = solve_fixed_point_conjugator(&sigma, &vecf(f5(), &[1, 1]), 0).unwrap();
    assert_eq!(w, vecf(f5(), &[2, 3]));
    assert_eq!(solve_fixed_point_conjugator(&sigma, &vecf(f5(), &[0, 0]), 0).unwrap(), vecf(f5(), &[0, 0]));
    assert_eq!(
        solve_fixed_point_conjugator(&diag(f5(), &[1, 2]), &vecf(f5(), &[1, 1]), 3),
        Err(RootError::FixedSpaceNonzero { layer: 3 })
    );
    let ctx = g5();
    let eng = RootEngine::new(&ctx, SeriesStrategy::Merged).unwrap();
    let g = &ctx.generators()[0];
    assert_eq!(eng.fixed_point_conjugator(g, &vecf(f5(), &[1, 1]), 0).unwrap(), vecf(f5(), &[2, 3]));
}

#[test]
fn g5_obstruction_subspace() {
    let ctx = g5();
    let eng = RootEngine::new(&ctx, SeriesStrategy::Merged).unwrap();
    let g = &ctx.generators()[0];
    let x = g * g;
    let b = class(f5(), &[4, 2, 1]);
    let o = eng.obstruction_subspace(&x, &b, 0, 2).unwrap();
    let e2 = Subspace::from_spanning(f5(), 2, vec![vecf(f5(), &[0, 1])]).unwrap();
    assert_eq!(o.image_a_minus_i, e2);
    assert_eq!(o.u, e2);
    assert_eq!(o.image_theta, e2);
    assert!(o.contained);
    // a and b fix the same vectors: precondition violated
    let x3 = g.pow(3).unwrap();
    assert!(matches!(eng.obstruction_subspace(&x3, &b, 0, 3), Err(RootError::Precondition(_))));
}

#[test]
fn obstruction_on_a_trivial_line() {
    // a acts trivially, b acts by -1 on a 1-dim layer: U = 0 = Im θ
    let f3 = f(3);
    let spec = GroupSpec {
        field: f3,
        dim: 2,
        generators: vec![diag(f3, &[2, 1]), Matrix::from_i64(f3, &[&[1, 1], &[0, 1]])],
        lie_algebra: None,
        cap: None,
    };
    let ctx = spec.validate().unwrap();
    let eng = RootEngine::new(&ctx, SeriesStrategy::Superdiagonal).unwrap();
    let o = eng.obstruction_subspace(&ctx.identity(), &class(f3, &[2, 1]), 0, 2).unwrap();
    assert!(o.u.is_zero() && o.image_theta.is_zero() && o.contained);
}

#[test]
fn regularity_examples() {
    let ctx = g5();
    let g = &ctx.generators()[0];
    let merged = RootEngine::new(&ctx, SeriesStrategy::Merged).unwrap();
    let r2 = merged.pk_regularity(g, 2).unwrap();
    assert!(!r2.regular);
    assert_eq!(r2.layers[0].char_poly.to_string(), "x^2 + 4x + 3");
    assert_eq!(r2.layers[0].gcd.to_string(), "x + 1");
    assert!(merged.pk_regularity(g, 3).unwrap().regular);
    assert!(merged.pk_regularity(&translation(5, 2, 3), 4).unwrap().regular);
    let sd = RootEngine::new(&ctx, SeriesStrategy::Superdiagonal).unwrap();
    assert!(!sd.pk_regularity(g, 2).unwrap().regular);
    assert!(sd.pk_regularity(g, 3).unwrap().regular);
}

#[test]
fn surjectivity_and_center() {
    let ctx = g5();
    let eng = RootEngine::new(&ctx, SeriesStrategy::Superdiagonal).unwrap();
    let s3 = eng.group_pk_surjective(3).unwrap();
    assert!(s3.surjective && s3.classes_checked == 4);
    let s2 = eng.group_pk_surjective(2).unwrap();
    assert!(!s2.surjective);
    assert_eq!(s2.first_failure, Some(class(f5(), &[1, 4, 1])));
    assert_eq!(eng.center().unwrap(), vec![ctx.identity()]);
    for k in 1..5 {
        assert!(eng.center_pk_surjective(k).unwrap());
    }
    let h7 = heisenberg_fp_spec(7, &[]).validate().unwrap();
    let e7 = RootEngine::new(&h7, SeriesStrategy::Superdiagonal).unwrap();
    assert_eq!(e7.center().unwrap().len(), 7);
    assert!(e7.center_pk_surjective(2).unwrap());
}

#[test]
fn center_of_centralizer_examples() {
    let ctx = g5();
    let eng = RootEngine::new(&ctx, SeriesStrategy::Superdiagonal).unwrap();
    let g = &ctx.generators()[0];
    let x2 = g * g;
    assert_eq!(eng.centralizer(&x2).unwrap().len(), 20);
    assert_eq!(eng.center_of_centralizer_root(&x2, 2).unwrap(), None);
    assert!(!eng.coset_root_decision(&x2, 2).unwrap().decision);
    let x3 = g.pow(3).unwrap();
    assert_eq!(eng.center_of_centralizer_root(&x3, 3).unwrap(), Some(g.clone()));
    assert_eq!(eng.center_of_centralizer_root(&ctx.identity(), 4).unwrap(), Some(ctx.identity()));
    assert!(matches!(
        eng.center_of_centralizer_root(&translation(5, 1, 0), 2),
        Err(RootError::Unsupported(_))
    ));
}

#[test]
fn multi_k_examples() {
    let ctx = g5();
    let eng = RootEngine::new(&ctx, SeriesStrategy::Superdiagonal).unwrap();
    let g = &ctx.generators()[0];
    let x2 = g * g;
    let probes = eng.multi_k_probe(&x2, &[2, 3]).unwrap();
    assert!(probes.iter().all(|(_, p)| matches!(p, Probe::Root(_))));
    let x = &x2 * &translation(5, 1, 0);
    assert_eq!(eng.multi_k_probe(&x, &[2]).unwrap(), vec![(2, Probe::NoRoot)]);
    let all = eng.multi_k_probe(&ctx.identity(), &[1, 2, 3, 4, 5]).unwrap();
    assert!(all.iter().all(|(_, p)| *p == Probe::Root(ctx.identity())));

    let hq = heisenberg_q_spec(vec![]).validate().unwrap();
    let q = Field::Rational;
    let eq = RootEngine::new(&hq, SeriesStrategy::Superdiagonal).unwrap();
    let n = Matrix::from_i64(q, &[&[1, 1, 1], &[0, 1, 1], &[0, 0, 1]]);
    let probes = eq.multi_k_probe(&n, &[2, 3, 7]).unwrap();
    for (k, p) in probes {
        let Probe::Root(y) = p else { panic!("no root for k = {k}") };
        assert_eq!(y.pow(k as i64).unwrap(), n);
    }
}

#[test]
fn rational_element_probe_with_free_choice() {
    // G = <diag(-1,1)> ⋉ Q, x = I: y = diag(-1,1)·n is a square root of I for
    // every n, reached through a singular θ
    let q = Field::Rational;
    let e12 = Matrix::from_i64(q, &[&[0, 1], &[0, 0]]);
    let ctx = GroupSpec { field: q, dim: 2, generators: vec![diag(q, &[-1, 1])], lie_algebra: Some(vec![e12]), cap: None }
        .validate()
        .unwrap();
    let eng = RootEngine::new(&ctx, SeriesStrategy::Superdiagonal).unwrap();
    let x = Matrix::from_i64(q, &[&[1, 3], &[0, 1]]);
    let cert = eng.coset_root_decision(&x, 2).unwrap();
    assert!(cert.decision);
    let p = eng.multi_k_probe(&diag(q, &[1, 1]), &[2]).unwrap();
    assert!(matches!(p[0].1, Probe::Root(_)));
}
