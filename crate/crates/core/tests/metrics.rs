use std::time::Instant;

use coarse_core::groups::{
    CoordinateChain, CyclicSum, DescriptorGroup, FactorialChain, FreeAbelian, Group, Heisenberg,
    QmodZ, Unitriangular,
};
use coarse_core::metrics::{
    doubling_constant, generated_subgroup_saturation, growth_sequence, snowflake,
    sqrt_triangle_holds, ChainUltraNorm, L1Norm, LinfNorm, NormScheme, Saturation, WeightedNorm,
    WordNorm, DEFAULT_BUDGET,
};
use num_rational::Ratio;

/// Independent oracle: all products of words of length <= n, deduplicated.
fn brute_ball_size<G: Group>(g: &G, gens: &[G::Elem], n: usize) -> usize {
    let mut sym: Vec<G::Elem> = gens.to_vec();
    sym.extend(gens.iter().map(|s| g.inv(s).unwrap()));
    let mut words: Vec<G::Elem> = vec![g.identity()];
    let mut all: std::collections::BTreeSet<G::Elem> = words.iter().cloned().collect();
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &words {
            for s in &sym {
                next.push(g.mul(w, s).unwrap());
            }
        }
        all.extend(next.iter().cloned());
        words = next;
    }
    all.len()
}

#[test]
fn integer_norm_and_ball() {
    let z = FreeAbelian::<i64>::new(1);
    let w = WordNorm::standard(z.clone(), DEFAULT_BUDGET).unwrap();
    assert_eq!(w.norm(&z.elem(&[7]).unwrap()).unwrap(), 7);
    let b = w.ball(3).unwrap();
    assert_eq!(b.len(), 7);
    assert_eq!(growth_sequence(&w, 5).sizes[5], 11);
}

#[test]
fn z2_growth_matches_formula() {
    let z2 = FreeAbelian::<i64>::new(2);
    let w = WordNorm::standard(z2.clone(), DEFAULT_BUDGET).unwrap();
    let p = growth_sequence(&w, 10);
    for n in 0..=10u64 {
        assert_eq!(p.sizes[n as usize], 2 * n * n + 2 * n + 1);
    }
    assert_eq!(p.sizes[3], 25);
    assert_eq!(brute_ball_size(&z2, &z2.generators().unwrap(), 3), 25);
}

#[test]
fn heisenberg_small_balls() {
    let h = Heisenberg::<i64>::new();
    let w = WordNorm::standard(h.clone(), DEFAULT_BUDGET).unwrap();
    assert_eq!(w.ball(2).unwrap().len(), 17);
    for n in 0..=5 {
        assert_eq!(
            w.ball(n).unwrap().len(),
            brute_ball_size(&h, &h.generators().unwrap(), n as usize)
        );
    }
    // a^-2 b^-2 a^2 b^2 = H(0,4,0)
    let a = h.a();
    let b = h.b();
    let a2 = h.pow(&a, 2).unwrap();
    let b2 = h.pow(&b, 2).unwrap();
    assert_eq!(h.commutator(&a2, &b2).unwrap(), h.elem(0, 4, 0));
    assert!(w.norm(&h.elem(0, 4, 0)).unwrap() <= 8);
}

#[test]
fn heisenberg_meet_in_middle_agrees_with_full_bfs() {
    let h = Heisenberg::<i64>::new();
    let lazy = WordNorm::standard(h.clone(), DEFAULT_BUDGET).unwrap();
    let full = WordNorm::standard(h.clone(), DEFAULT_BUDGET).unwrap();
    let ball = full.ball(14).unwrap();
    for (n, e) in ball.points.iter().step_by(97) {
        assert_eq!(lazy.norm(e).unwrap(), *n);
    }
    let t = Instant::now();
    let v = lazy.norm(&h.elem(0, 150, 0)).unwrap();
    assert!(v > 20 && v < 60, "{v}");
    assert!(t.elapsed().as_secs() < 60);
}

#[test]
fn unitriangular_generic_path_agrees() {
    let u = Unitriangular::<i64>::new(3).unwrap();
    let h = Heisenberg::<i64>::new();
    let wu = WordNorm::standard(u, DEFAULT_BUDGET).unwrap();
    let wh = WordNorm::standard(h, DEFAULT_BUDGET).unwrap();
    for r in 0..=6 {
        assert_eq!(wu.ball(r).unwrap().len(), wh.ball(r).unwrap().len());
    }
}

#[test]
fn weighted_norm_of_sparse_sum() {
    let g = DescriptorGroup::<i64>::parse("Z_2^inf").unwrap();
    let w = WeightedNorm::canonical(g.clone(), DEFAULT_BUDGET);
    let e = g
        .elem_from_json(&serde_json::json!([[1, 1], [4, 1]]))
        .unwrap();
    assert_eq!(w.norm(&e).unwrap(), 7);
}

#[test]
fn bfs_equals_uniform_cost_with_unit_weights() {
    let z2 = FreeAbelian::<i64>::new(2);
    let word = WordNorm::standard(z2.clone(), DEFAULT_BUDGET).unwrap();
    let list = z2
        .generators()
        .unwrap()
        .into_iter()
        .map(|s| (s, 1))
        .collect();
    let weighted = WeightedNorm::from_list(z2.clone(), list, DEFAULT_BUDGET).unwrap();
    let l1 = L1Norm::<i64>::new(2, DEFAULT_BUDGET);
    for (n, e) in word.ball(8).unwrap().points {
        assert_eq!(weighted.norm(&e).unwrap(), n);
        assert_eq!(l1.norm(&e).unwrap(), n);
    }
    assert_eq!(word.ball(8).unwrap(), weighted.ball(8).unwrap());
    assert_eq!(word.ball(8).unwrap(), l1.ball(8).unwrap());
}

#[test]
fn linf_matches_king_word_norm() {
    let z2 = FreeAbelian::<i64>::new(2);
    let linf = LinfNorm::<i64>::new(2, DEFAULT_BUDGET);
    let king = WordNorm::new(z2, &linf.unit_steps().unwrap(), DEFAULT_BUDGET).unwrap();
    assert_eq!(king.ball(6).unwrap(), linf.ball(6).unwrap());
}

#[test]
fn rational_chain_ball() {
    let c = FactorialChain::<i64>::new();
    let n = ChainUltraNorm::new(c, DEFAULT_BUDGET).unwrap();
    let b = n.ball(3).unwrap();
    assert_eq!(b.len(), 6);
    let q = n.group().clone();
    for k in 0..6 {
        assert!(b.elements().contains(&q.elem(k, 6).unwrap()));
    }
}

#[test]
fn saturation_verdicts() {
    let z = FreeAbelian::<i64>::new(1);
    let w = WordNorm::standard(z, DEFAULT_BUDGET).unwrap();
    assert_eq!(
        generated_subgroup_saturation(&w, 1, 10_000),
        Saturation::WholeGroup
    );

    let g = DescriptorGroup::<i64>::parse("Z_2^inf").unwrap();
    let wn = WeightedNorm::canonical(g, DEFAULT_BUDGET);
    assert_eq!(
        generated_subgroup_saturation(&wn, 3, 10_000),
        Saturation::ProperSubgroup { size: 8 }
    );

    let q = ChainUltraNorm::new(FactorialChain::<i64>::new(), DEFAULT_BUDGET).unwrap();
    assert_eq!(
        generated_subgroup_saturation(&q, 4, 10_000),
        Saturation::ProperSubgroup { size: 24 }
    );

    // <1/2!, ..., 1/10!> = <1/10!>, read off the denominators
    let qd = DescriptorGroup::<i64>::parse("Q/Z").unwrap();
    let wq = WeightedNorm::canonical(qd, DEFAULT_BUDGET);
    assert_eq!(
        generated_subgroup_saturation(&wq, 10, 10_000),
        Saturation::ProperSubgroup { size: 3_628_800 }
    );
    let qg = QmodZ::<i64>::new();
    let gens = [qg.elem(1, 4).unwrap(), qg.elem(5, 6).unwrap()];
    assert_eq!(qg.generated_order(&gens).unwrap().unwrap(), 12);

    let cs = CyclicSum::infinite(3).unwrap();
    let cn = ChainUltraNorm::new(CoordinateChain::new(cs), DEFAULT_BUDGET).unwrap();
    assert_eq!(
        generated_subgroup_saturation(&cn, 2, 10_000),
        Saturation::ProperSubgroup { size: 9 }
    );
}

#[test]
fn doubling_constants() {
    let z = WordNorm::standard(FreeAbelian::<i64>::new(1), DEFAULT_BUDGET).unwrap();
    // |B_2r| / |B_r| = (4r+1)/(2r+1) increases towards 2
    let d = doubling_constant(&z, 20).unwrap();
    assert_eq!(d.ratios[0], Ratio::new(5, 3));
    assert_eq!(d.constant, Ratio::new(41, 21));
    assert_eq!(d.attained_at, 10);
    // ball counts 5, 13, 25, 41, 61, 85, 113, 145
    let z2 = WordNorm::standard(FreeAbelian::<i64>::new(2), DEFAULT_BUDGET).unwrap();
    let d = doubling_constant(&z2, 8).unwrap();
    assert_eq!(
        d.ratios,
        vec![
            Ratio::new(13, 5),
            Ratio::new(41, 13),
            Ratio::new(85, 25),
            Ratio::new(145, 41)
        ]
    );
    assert!(d.constant < Ratio::from_integer(4));
    let trivial = WordNorm::standard(FreeAbelian::<i64>::new(0), DEFAULT_BUDGET).unwrap();
    assert_eq!(
        doubling_constant(&trivial, 4).unwrap().constant,
        Ratio::from_integer(1)
    );
}

#[test]
fn snowflake_values() {
    let z = FreeAbelian::<i64>::new(1);
    let s = snowflake(WordNorm::standard(z.clone(), DEFAULT_BUDGET).unwrap());
    assert_eq!(s.norm(&z.elem(&[4]).unwrap()).unwrap().to_string(), "2");
    assert_eq!(s.norm(&z.identity()).unwrap().0, 0);
    assert!(sqrt_triangle_holds(3, 4, 7));
}

#[test]
fn budget_errors_carry_lower_bound() {
    let h = Heisenberg::<i64>::new();
    let w = WordNorm::standard(h.clone(), 500).unwrap();
    match w.norm(&h.elem(0, 10_000, 0)) {
        Err(coarse_core::Error::BudgetExceeded {
            lower_bound: Some(b),
            ..
        }) => assert!(b >= 3),
        other => panic!("{other:?}"),
    }
}
