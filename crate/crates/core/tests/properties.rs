mod common;

use std::sync::Arc;

use coarse_core::coarse::MetricSpace;
use coarse_core::groups::{
    CoordinateChain, CyclicSum, FactorialChain, FreeAbelian, Group, Heisenberg, ModChain, QmodZ,
    Vector,
};
use coarse_core::metrics::{
    growth_sequence, ChainUltraNorm, L1Norm, LinfNorm, NormScheme, WeightedNorm, WordNorm,
    DEFAULT_BUDGET,
};
use coarse_core::quotients::{ChainBase, ChainCosetSpace, HausdorffCosetSpace, HeisenbergCenter};
use common::{norm_violations, quotient_violations, rational, small_int, sparse, SAMPLES};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn vector(v: &[i64]) -> Vector<i64> {
    Vector::from_slice(v)
}

#[test]
fn lattice_norm_axioms() {
    let l1 = L1Norm::<i64>::new(2, DEFAULT_BUDGET);
    let bad = norm_violations(&l1, &mut rng(1), SAMPLES, false, |r| {
        vector(&[small_int(r, 50), small_int(r, 50)])
    })
    .unwrap();
    assert!(bad.is_empty(), "{:?}", &bad[..bad.len().min(3)]);
    let linf = LinfNorm::<i64>::new(3, DEFAULT_BUDGET);
    let bad = norm_violations(&linf, &mut rng(2), SAMPLES, false, |r| {
        vector(&[small_int(r, 50), small_int(r, 50), small_int(r, 50)])
    })
    .unwrap();
    assert!(bad.is_empty(), "{:?}", &bad[..bad.len().min(3)]);
}

#[test]
fn heisenberg_word_norm_axioms() {
    let h = Heisenberg::<i64>::new();
    let w = WordNorm::heisenberg(h.clone(), DEFAULT_BUDGET).unwrap();
    let bad = norm_violations(&w, &mut rng(3), SAMPLES, false, |r| {
        h.elem(small_int(r, 4), small_int(r, 12), small_int(r, 4))
    })
    .unwrap();
    assert!(bad.is_empty(), "{:?}", &bad[..bad.len().min(3)]);
}

#[test]
fn weighted_norm_axioms() {
    let g = CyclicSum::infinite(2).unwrap();
    let w = WeightedNorm::coordinates(g.clone(), DEFAULT_BUDGET);
    let bad = norm_violations(&w, &mut rng(4), SAMPLES, false, |r| sparse(&g, 2, 16, r)).unwrap();
    assert!(bad.is_empty(), "{:?}", &bad[..bad.len().min(3)]);
    // the closed form against the search on small supports
    let search = WeightedNorm::from_list(
        g.clone(),
        (0..6)
            .map(|i| (g.basis(i).unwrap(), i as u64 + 1))
            .collect(),
        DEFAULT_BUDGET,
    )
    .unwrap();
    let mut r = rng(40);
    for _ in 0..2000 {
        let x = sparse(&g, 2, 6, &mut r);
        assert_eq!(w.norm(&x).unwrap(), search.norm(&x).unwrap(), "{x:?}");
    }
    let g3 = CyclicSum::infinite(3).unwrap();
    let w3 = WeightedNorm::coordinates(g3.clone(), DEFAULT_BUDGET);
    let bad = norm_violations(&w3, &mut rng(5), SAMPLES, false, |r| sparse(&g3, 3, 10, r)).unwrap();
    assert!(bad.is_empty(), "{:?}", &bad[..bad.len().min(3)]);
}

#[test]
fn chain_norms_are_ultra() {
    let g = CyclicSum::infinite(2).unwrap();
    let u = ChainUltraNorm::new(CoordinateChain::new(g.clone()), DEFAULT_BUDGET).unwrap();
    let bad = norm_violations(&u, &mut rng(6), SAMPLES, true, |r| sparse(&g, 2, 20, r)).unwrap();
    assert!(bad.is_empty(), "{:?}", &bad[..bad.len().min(3)]);
    let q = ChainUltraNorm::new(FactorialChain::<i64>::new(), DEFAULT_BUDGET).unwrap();
    let bad = norm_violations(&q, &mut rng(7), SAMPLES, true, |r| rational(r, 20)).unwrap();
    assert!(bad.is_empty(), "{:?}", &bad[..bad.len().min(3)]);
}

#[test]
fn chain_quotients_are_invariant_ultrametrics() {
    let g = CyclicSum::infinite(2).unwrap();
    let space = ChainCosetSpace::new(CoordinateChain::over_first(g.clone(), 1), DEFAULT_BUDGET);
    let bad = quotient_violations(
        &space,
        &mut rng(8),
        SAMPLES,
        true,
        |r| sparse(&g, 2, 16, r),
        |x| space.coset(x),
        |a, x| space.act(a, x),
    )
    .unwrap();
    assert!(bad.is_empty(), "{:?}", &bad[..bad.len().min(3)]);

    let space = ChainCosetSpace::new(ModChain::<i64>::new(2).unwrap(), DEFAULT_BUDGET);
    let bad = quotient_violations(
        &space,
        &mut rng(9),
        SAMPLES,
        true,
        |r| vector(&[small_int(r, 1000)]),
        |x| space.coset(x),
        |a, x| space.act(a, x),
    )
    .unwrap();
    assert!(bad.is_empty(), "{:?}", &bad[..bad.len().min(3)]);

    let space = ChainCosetSpace::new(FactorialChain::<i64>::new(), DEFAULT_BUDGET);
    let bad = quotient_violations(
        &space,
        &mut rng(10),
        SAMPLES,
        true,
        |r| rational(r, 20),
        |x| space.coset(x),
        |a, x| space.act(a, x),
    )
    .unwrap();
    assert!(bad.is_empty(), "{:?}", &bad[..bad.len().min(3)]);
}

#[test]
fn hausdorff_quotients_are_invariant() {
    let zn = Arc::new(L1Norm::<i64>::new(1, DEFAULT_BUDGET));
    let sub = ChainBase::new(
        Arc::new(ModChain::<i64>::new(5).unwrap()),
        vec![vector(&[5])],
    );
    let space = HausdorffCosetSpace::new(zn, sub, DEFAULT_BUDGET);
    let bad = quotient_violations(
        &space,
        &mut rng(11),
        SAMPLES,
        false,
        |r| vector(&[small_int(r, 100)]),
        |x| space.coset(x),
        |a, x| space.act(a, x),
    )
    .unwrap();
    assert!(bad.is_empty(), "{:?}", &bad[..bad.len().min(3)]);

    let h = Heisenberg::<i64>::new();
    let w = Arc::new(WordNorm::heisenberg(h.clone(), DEFAULT_BUDGET).unwrap());
    let space = HausdorffCosetSpace::new(w, HeisenbergCenter::<i64>::default(), DEFAULT_BUDGET);
    let bad = quotient_violations(
        &space,
        &mut rng(12),
        SAMPLES,
        false,
        |r| h.elem(small_int(r, 6), small_int(r, 6), small_int(r, 6)),
        |x| space.coset(x),
        |a, x| space.act(a, x),
    )
    .unwrap();
    assert!(bad.is_empty(), "{:?}", &bad[..bad.len().min(3)]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn word_norm_agrees_with_l1_on_lattices(x in -40i64..40, y in -40i64..40) {
        let z2 = FreeAbelian::<i64>::new(2);
        let w = WordNorm::standard(z2.clone(), DEFAULT_BUDGET).unwrap();
        let l1 = L1Norm::<i64>::new(2, DEFAULT_BUDGET);
        let v = vector(&[x, y]);
        prop_assert_eq!(w.norm(&v).unwrap(), l1.norm(&v).unwrap());
    }

    #[test]
    fn heisenberg_norm_is_left_invariant(
        x in (-3i64..=3, -8i64..=8, -3i64..=3),
        y in (-3i64..=3, -8i64..=8, -3i64..=3),
        a in (-5i64..=5, -20i64..=20, -5i64..=5),
    ) {
        let h = Heisenberg::<i64>::new();
        let w = WordNorm::heisenberg(h.clone(), DEFAULT_BUDGET).unwrap();
        let (x, y, a) = (h.elem(x.0, x.1, x.2), h.elem(y.0, y.1, y.2), h.elem(a.0, a.1, a.2));
        let d = w.distance(&x, &y).unwrap();
        prop_assert_eq!(w.distance(&h.mul(&a, &x).unwrap(), &h.mul(&a, &y).unwrap()).unwrap(), d);
        prop_assert!(w.norm(&h.mul(&x, &y).unwrap()).unwrap() <= w.norm(&x).unwrap() + w.norm(&y).unwrap());
    }

    #[test]
    fn chain_distance_is_strongly_ultrametric(a in 0i64..60, b in 0i64..60, c in 0i64..60, q in 1i64..8) {
        let qz = QmodZ::<i64>::new();
        let space = ChainCosetSpace::new(FactorialChain::<i64>::new(), DEFAULT_BUDGET);
        let x = qz.elem(a, 60).unwrap();
        let y = qz.elem(b, 60 * q).unwrap();
        let z = qz.elem(c, 7).unwrap();
        let (dxy, dyz, dxz) = (space.distance(&x, &y).unwrap(), space.distance(&y, &z).unwrap(), space.distance(&x, &z).unwrap());
        prop_assert!(dxz <= dxy.max(dyz));
    }

    #[test]
    fn balls_grow_monotonically(n in 1usize..12) {
        let h = Heisenberg::<i64>::new();
        let p = growth_sequence(&WordNorm::standard(h, DEFAULT_BUDGET).unwrap(), n);
        prop_assert!(p.sizes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn ball_contents_match_norms(r in 0u64..6) {
        let h = Heisenberg::<i64>::new();
        let w = WordNorm::standard(h, DEFAULT_BUDGET).unwrap();
        let ball = w.ball(r).unwrap();
        for (n, e) in &ball.points {
            prop_assert!(*n <= r);
            prop_assert_eq!(w.norm(e).unwrap(), *n);
        }
    }
}
