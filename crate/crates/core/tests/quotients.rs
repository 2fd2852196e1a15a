use std::collections::HashMap;
use std::sync::Arc;

use coarse_core::coarse::MetricSpace;
use coarse_core::groups::{
    CoordinateChain, CyclicSum, FactorialChain, FreeAbelian, Group, Heisenberg, ModChain, QmodZ,
    Vector,
};
use coarse_core::metrics::{ChainUltraNorm, L1Norm, WeightedNorm, WordNorm, DEFAULT_BUDGET};
use coarse_core::quotients::{
    chain_quotient_map, quasi_normality_witness, section_bound_check, Alpha, ChainBase,
    ChainCosetSpace, HausdorffCosetSpace, HeisenbergCenter, HeisenbergLine, QuasiNormality,
    Section, SemigroupPredicate,
};
use coarse_core::Error;

fn z(v: i64) -> Vector<i64> {
    Vector::from_slice(&[v])
}

#[test]
fn quasi_normality_examples() {
    let h = Heisenberg::<i64>::new();
    let w = WordNorm::heisenberg(h.clone(), DEFAULT_BUDGET).unwrap();
    for x in [h.a(), h.b(), h.elem(3, -2, 5)] {
        let r = quasi_normality_witness(&w, &HeisenbergCenter::<i64>::default(), &x, 64).unwrap();
        assert_eq!(r, QuasiNormality::Witness(vec![h.identity()]));
    }

    let zn = L1Norm::<i64>::new(1, DEFAULT_BUDGET);
    let three = Arc::new(ModChain::<i64>::new(3).unwrap());
    let sub = ChainBase::new(three, vec![z(3)]);
    let r = quasi_normality_witness(&zn, &sub, &z(5), 64).unwrap();
    assert_eq!(r, QuasiNormality::Witness(vec![z(0)]));

    let r = quasi_normality_witness(&w, &HeisenbergLine::<i64>::default(), &h.b(), 64).unwrap();
    match r {
        QuasiNormality::Inconclusive { classes, trace } => {
            // b^-1 a^k b = H(k, -k, 0), one new class per k
            assert_eq!(classes.len(), 64);
            assert!(trace[1].1 > trace[0].1);
        }
        other => panic!("expected inconclusive, got {other:?}"),
    }
}

#[test]
fn chain_ultrametric_on_rationals() {
    let q = QmodZ::<i64>::new();
    let space = ChainCosetSpace::new(FactorialChain::<i64>::new(), DEFAULT_BUDGET);
    let half = q.elem(1, 2).unwrap();
    assert_eq!(space.distance(&half, &q.identity()).unwrap(), 2);
    assert_eq!(space.distance(&q.elem(1, 6).unwrap(), &half).unwrap(), 3);
    assert_eq!(space.distance(&half, &half).unwrap(), 0);
    // the ball of radius 3 is (1/6)Z/Z
    assert_eq!(space.ball(3).unwrap().len(), 6);
}

#[test]
fn hausdorff_metric_on_integers() {
    let zn = Arc::new(L1Norm::<i64>::new(1, DEFAULT_BUDGET));
    let sub = ChainBase::new(Arc::new(ModChain::<i64>::new(3).unwrap()), vec![z(3)]);
    let space = HausdorffCosetSpace::new(zn, sub, DEFAULT_BUDGET);
    assert_eq!(space.distance(&z(0), &z(1)).unwrap(), 1);
    assert_eq!(space.distance(&z(0), &z(2)).unwrap(), 1);
    assert_eq!(space.distance(&z(4), &z(7)).unwrap(), 0);
    assert_eq!(space.ball(1).unwrap().len(), 3);
}

#[test]
fn hausdorff_metric_over_heisenberg_center() {
    let h = Heisenberg::<i64>::new();
    let w = Arc::new(WordNorm::heisenberg(h.clone(), DEFAULT_BUDGET).unwrap());
    let space = HausdorffCosetSpace::new(
        w.clone(),
        HeisenbergCenter::<i64>::default(),
        DEFAULT_BUDGET,
    );
    // normal subgroup: the distance is the least norm in x^-1 y H
    let d = space.distance(&h.identity(), &h.elem(2, 0, 1)).unwrap();
    assert_eq!(d, 3);
    let g = h.elem(1, 4, -2);
    let (x, y) = (h.elem(0, 0, 3), h.elem(2, 0, -1));
    assert_eq!(
        space
            .distance(&space.act(&g, &x).unwrap(), &space.act(&g, &y).unwrap())
            .unwrap(),
        space
            .distance(&space.coset(&x).unwrap(), &space.coset(&y).unwrap())
            .unwrap()
    );
}

#[test]
fn hausdorff_metric_detects_non_quasi_normal_subgroup() {
    let h = Heisenberg::<i64>::new();
    let w = Arc::new(WordNorm::heisenberg(h.clone(), DEFAULT_BUDGET).unwrap());
    let space = HausdorffCosetSpace::new(w, HeisenbergLine::<i64>::default(), 512);
    let r = space.distance(&h.identity(), &h.b());
    assert!(
        matches!(r, Err(Error::NotCoarse(ref m)) if m.contains("infinite Hausdorff")),
        "{r:?}"
    );
}

#[test]
fn section_of_even_integers() {
    let chain = Arc::new(ModChain::<i64>::new(2).unwrap());
    let zn = Arc::new(L1Norm::<i64>::new(1, DEFAULT_BUDGET));
    let table = HashMap::from([((1, z(1)), z(1))]);
    let s = Section::build(
        chain.clone(),
        zn.clone(),
        SemigroupPredicate::all(),
        Alpha::Table(table),
        4,
        DEFAULT_BUDGET,
    )
    .unwrap();
    assert_eq!(s.eval(&z(0)).unwrap(), z(0));
    assert_eq!(s.eval(&z(6)).unwrap(), z(0));
    assert_eq!(s.eval(&z(1)).unwrap(), z(1));
    assert_eq!(s.eval(&z(-7)).unwrap(), z(1));
    let rep = section_bound_check(&s, 8, 6).unwrap();
    assert!(rep.passed(), "{rep:?}");

    // the default choice is the least element of least norm
    let s = Section::build(
        chain,
        zn,
        SemigroupPredicate::all(),
        Alpha::MinimalNorm,
        4,
        DEFAULT_BUDGET,
    )
    .unwrap();
    assert_eq!(s.eval(&z(3)).unwrap(), z(-1));
}

#[test]
fn section_rejects_alpha_outside_target() {
    let chain = Arc::new(ModChain::<i64>::new(2).unwrap());
    let zn = Arc::new(L1Norm::<i64>::new(1, DEFAULT_BUDGET));
    let table = HashMap::from([((1, z(1)), z(-1))]);
    let nonneg = SemigroupPredicate::new("nonnegative", |x: &Vector<i64>| x[0] >= 0);
    let r = Section::build(chain, zn, nonneg, Alpha::Table(table), 2, DEFAULT_BUDGET);
    assert!(matches!(r, Err(Error::Construction { level: 1, .. })));
}

#[test]
fn section_of_first_coordinate_subgroup() {
    let g = CyclicSum::infinite(2).unwrap();
    let chain = Arc::new(CoordinateChain::over_first(g.clone(), 1));
    let norm = Arc::new(WeightedNorm::coordinates(g.clone(), DEFAULT_BUDGET));
    let s = Section::build(
        chain.clone(),
        norm,
        SemigroupPredicate::all(),
        Alpha::MinimalNorm,
        8,
        DEFAULT_BUDGET,
    )
    .unwrap();
    let x = g.elem(&[(0, 1), (2, 1), (5, 1)]).unwrap();
    assert_eq!(s.eval(&x).unwrap(), g.elem(&[(2, 1), (5, 1)]).unwrap());
    assert_eq!(s.eval(&g.basis(0).unwrap()).unwrap(), g.identity());
    let rep = section_bound_check(&s, 8, 6).unwrap();
    assert_eq!(rep.cosets, 256);
    assert!(rep.passed(), "{:?}", rep.violations.first());
    assert!(rep.pairs_checked > 0);
}

#[test]
fn quotient_map_examples() {
    let zn = Arc::new(L1Norm::<i64>::new(1, DEFAULT_BUDGET));
    let space = ChainCosetSpace::new(ModChain::<i64>::new(3).unwrap(), DEFAULT_BUDGET);
    let q = chain_quotient_map(zn, space);
    assert_eq!(q.apply(&z(7)).unwrap(), z(1));
    assert_eq!(q.apply(&z(0)).unwrap(), z(0));

    let qz = QmodZ::<i64>::new();
    let norm = Arc::new(ChainUltraNorm::new(FactorialChain::<i64>::new(), DEFAULT_BUDGET).unwrap());
    let q = chain_quotient_map(
        norm,
        ChainCosetSpace::new(FactorialChain::<i64>::new(), DEFAULT_BUDGET),
    );
    let x = qz.elem(5, 12).unwrap();
    assert_eq!(q.apply(&x).unwrap(), x);
    let _ = FreeAbelian::<i64>::new(1);
}
