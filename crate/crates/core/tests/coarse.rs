use std::sync::Arc;

use coarse_core::analysis::ElemSet;
use coarse_core::coarse::{
    continuity_modulus, continuity_modulus_from_identity, embedding_multiplicity, integer_part_map,
    inversion_bornologity_check, multiplication_bornologity_check, net_embedding, qi_fit,
    verify_certificate, BornologyVerdict, CoarseCertificate, GroupSpace, NetParams, PointMap,
};
use coarse_core::groups::{FreeAbelian, Group, Heisenberg, Vector};
use coarse_core::metrics::{snowflake, L1Norm, NormScheme, WordNorm, DEFAULT_BUDGET};
use coarse_core::Error;
use num_rational::Ratio;

type Z = GroupSpace<L1Norm<i64>>;

fn zspace(m: usize) -> Z {
    GroupSpace::new(L1Norm::new(m, DEFAULT_BUDGET))
}

fn zmap(name: &str, f: impl Fn(i64) -> i64 + Send + Sync + 'static) -> PointMap<Z, Z> {
    PointMap::new(name, zspace(1), zspace(1), move |x: &Vector<i64>| {
        Ok(Vector::from_slice(&[f(x[0])]))
    })
}

fn heis_space() -> GroupSpace<WordNorm<Heisenberg<i64>>> {
    GroupSpace::new(WordNorm::heisenberg(Heisenberg::new(), DEFAULT_BUDGET).unwrap())
}

#[test]
fn modulus_of_doubling() {
    let f = zmap("2x", |x| 2 * x);
    let r = continuity_modulus(&f, &[1, 2, 3], 50).unwrap();
    assert_eq!(r.at(3), Some(6));
    assert_eq!(r.omega, vec![2, 4, 6]);
    let (a, b) = r.witnesses[2].clone().unwrap();
    assert_eq!((b[0] - a[0]).abs(), 3);
}

#[test]
fn identity_modulus_is_delta() {
    let id = PointMap::<Z, Z>::identity(zspace(2));
    let r = continuity_modulus(&id, &[0, 1, 4, 7], 8).unwrap();
    assert_eq!(r.omega, vec![0, 1, 4, 7]);
}

#[test]
fn central_line_into_heisenberg_has_constant_modulus() {
    let h = Heisenberg::<i64>::new();
    let f = PointMap::new(
        "central line",
        zspace(1),
        heis_space(),
        move |x: &Vector<i64>| Ok(h.elem(0, x[0], 0)),
    );
    let r = continuity_modulus(&f, &[1], 100).unwrap();
    // oracle: |H(0,1,0)| is the commutator length, found by plain BFS
    let bfs = WordNorm::standard(Heisenberg::<i64>::new(), DEFAULT_BUDGET).unwrap();
    assert_eq!(r.omega[0], bfs.norm(&[0, 1, 0]).unwrap());
    assert_eq!(r.omega[0], 4);
}

#[test]
fn identity_certificate_passes() {
    let c = CoarseCertificate::bijection(PointMap::<Z, Z>::identity(zspace(2))).unwrap();
    let rep = verify_certificate(&c, 10, 10, &[1, 2, 3], &[1, 2, 3]).unwrap();
    assert!(rep.passed, "{:?}", rep.failures);
    assert_eq!(rep.roundtrip_x.max, 0);
}

#[test]
fn square_map_fails_with_witness() {
    let f = zmap("x^2", |x| x * x);
    let g = zmap("isqrt", |y| (y.max(0) as u64).isqrt() as i64);
    let c = CoarseCertificate::new(f, g, 100);
    let rep = verify_certificate(&c, 40, 40, &[1], &[1]).unwrap();
    assert!(!rep.passed);
    let (a, b) = rep.modulus_f.witnesses[0].clone().unwrap();
    let n = a[0].abs().max(b[0].abs());
    // the pair (n-1, n) gives image gap 2n - 1
    assert_eq!(rep.modulus_f.omega[0], 2 * 40 - 1);
    assert_eq!(n, 40);
    assert!(rep.failures.iter().any(|s| s.starts_with("f: omega(1)")));
}

#[test]
fn qi_fit_affine_and_identity() {
    let f = zmap("2x+1", |x| 2 * x + 1);
    let fit = qi_fit::<f64, _, _>(&f, 50).unwrap();
    assert_eq!(fit.l, 2.0);
    assert!(fit.c <= 1.0);
    let id = PointMap::<Z, Z>::identity(zspace(1));
    let fit = qi_fit::<f64, _, _>(&id, 30).unwrap();
    assert_eq!((fit.l, fit.c), (1.0, 0.0));
    assert!(!fit.degrading);
}

#[test]
fn qi_fit_flags_central_distortion() {
    let h = Heisenberg::<i64>::new();
    let f = PointMap::new(
        "central line",
        zspace(1),
        heis_space(),
        move |x: &Vector<i64>| Ok(h.elem(0, x[0], 0)),
    );
    let fit = qi_fit::<f64, _, _>(&f, 200).unwrap();
    assert!(fit.degrading);
    // L is about |z| / |H(0,z,0)| = z / (2 ceil(2 sqrt z)) for the far pairs
    assert!(fit.l > 4.0 && fit.l < 6.0, "{}", fit.l);
    assert!(fit.l > 1.2 * fit.l_half);
}

#[test]
fn qi_fit_rejects_superlinear_maps() {
    let f = zmap("x^2", |x| x * x);
    assert!(matches!(
        qi_fit::<f64, _, _>(&f, 40),
        Err(Error::NotCoarse(_))
    ));
}

#[test]
fn multiplicities() {
    let id = PointMap::<Z, Z>::identity(zspace(1));
    assert_eq!(embedding_multiplicity(&id, 20).unwrap().0, 1);
    let half = zmap("floor half", |x| x.div_euclid(2));
    assert_eq!(embedding_multiplicity(&half, 20).unwrap().0, 2);
    let proj = PointMap::new("proj", zspace(2), zspace(1), |x: &Vector<i64>| {
        Ok(Vector::from_slice(&[x[0]]))
    });
    let (m, at) = embedding_multiplicity(&proj, 5).unwrap();
    assert_eq!(m, 11);
    assert_eq!(at.unwrap()[0], 0);
}

#[test]
fn identity_reduction_matches_full_scan_on_z2() {
    let f = PointMap::new("shear", zspace(2), zspace(2), |x: &Vector<i64>| {
        Ok(Vector::from_slice(&[x[0] + 2 * x[1], x[1]]))
    });
    let deltas = [1, 2, 3, 5];
    let full = continuity_modulus(&f, &deltas, 10).unwrap();
    let fast = continuity_modulus_from_identity(&f, &deltas).unwrap();
    assert_eq!(full.omega, fast.omega);
}

#[test]
fn integer_part() {
    let f = integer_part_map(2, 10, DEFAULT_BUDGET).unwrap();
    let x = f.domain.point(&[(17, 10), (-3, 10)]).unwrap();
    let y = f.apply(&x).unwrap();
    assert_eq!(&y[..], &[1, -1]);
    let k = f.domain.point(&[(4, 1), (-7, 1)]).unwrap();
    assert_eq!(&f.apply(&k).unwrap()[..], &[4, -7]);
    let deltas: Vec<Ratio<i64>> = vec![
        Ratio::new(0, 1),
        Ratio::new(1, 4),
        Ratio::new(1, 2),
        Ratio::new(3, 2),
    ];
    let r = continuity_modulus(&f, &deltas, Ratio::new(2, 1)).unwrap();
    for (d, w) in r.deltas.iter().zip(&r.omega) {
        assert!(Ratio::from_integer(*w as i64) <= d + 1, "omega({d}) = {w}");
    }
    assert!(r.omega[0] <= 1);
}

#[test]
fn net_embedding_of_snowflaked_line() {
    let z = FreeAbelian::<i64>::new(1);
    let s = snowflake(WordNorm::standard(z, DEFAULT_BUDGET).unwrap());
    let ball = s.inner().ball(100).unwrap();
    let e = net_embedding::<_, f64>(&s, &ball, 2, &NetParams::default()).unwrap();
    assert_eq!(e.coords.len(), 201);
    assert!(e.distortion <= 4.0, "distortion {}", e.distortion);
    assert!(!e.flagged);
    let one = s.inner().ball(0).unwrap();
    let e = net_embedding::<_, f64>(&s, &one, 2, &NetParams::default()).unwrap();
    assert_eq!(e.distortion, 1.0);
}

#[test]
fn net_embedding_of_snowflaked_plane_is_finite() {
    let s = snowflake(L1Norm::<i64>::new(2, DEFAULT_BUDGET));
    let ball = s.inner().ball(20).unwrap();
    let params = NetParams {
        iterations: 60,
        ..NetParams::default()
    };
    let e = net_embedding::<_, f64>(&s, &ball, 5, &params).unwrap();
    assert!(e.distortion.is_finite());
    assert!(e.distortion >= 1.0);
}

#[test]
fn multiplication_criterion() {
    let z2 = Arc::new(L1Norm::<i64>::new(2, DEFAULT_BUDGET));
    let g = z2.group().clone();
    let rep = multiplication_bornologity_check(
        &z2,
        &ElemSet::Subgroup(vec![g.basis(0)]),
        &ElemSet::Whole,
        6,
        1,
        256,
    )
    .unwrap();
    assert_eq!(rep.verdict, BornologyVerdict::Consistent);

    let h = Heisenberg::<i64>::new();
    let w = WordNorm::heisenberg(h.clone(), DEFAULT_BUDGET).unwrap();
    let rep = multiplication_bornologity_check(
        &w,
        &ElemSet::Subgroup(vec![h.b()]),
        &ElemSet::Subgroup(vec![h.a()]),
        24,
        1,
        512,
    )
    .unwrap();
    assert_eq!(rep.verdict, BornologyVerdict::Violated);
    let (x, trace) = rep.witness.clone().unwrap();
    assert!(
        x[2] != 0 && x[0] == 0,
        "witness {x:?} should be a power of b"
    );
    assert!(trace.windows(2).all(|t| t[1].1 > t[0].1));
    assert!(rep.modulus_grows, "{:?}", rep.direct_modulus);

    let single = ElemSet::Finite(vec![h.elem(2, 3, -1)]);
    let rep = multiplication_bornologity_check(&w, &single, &ElemSet::Whole, 10, 1, 256).unwrap();
    assert_eq!(rep.verdict, BornologyVerdict::Consistent);
    assert_eq!(rep.checked, 1);
}

#[test]
fn inversion_criterion() {
    let z = L1Norm::<i64>::new(1, DEFAULT_BUDGET);
    let rep = inversion_bornologity_check(&z, &ElemSet::Whole, 8, 1, 256).unwrap();
    assert_eq!(rep.verdict, BornologyVerdict::Consistent);

    let h = Heisenberg::<i64>::new();
    let w = WordNorm::heisenberg(h.clone(), DEFAULT_BUDGET).unwrap();
    let rep = inversion_bornologity_check(&w, &ElemSet::Whole, 3, 1, 1024).unwrap();
    assert_eq!(rep.verdict, BornologyVerdict::Violated);
    // the direct modulus is a finite number on each window; no converse is inferred
    assert!(rep.direct_modulus.iter().all(|(_, m)| *m > 0));

    let rep =
        inversion_bornologity_check(&w, &ElemSet::Finite(vec![h.identity()]), 5, 1, 64).unwrap();
    assert_eq!(rep.verdict, BornologyVerdict::Consistent);
}
