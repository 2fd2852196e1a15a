use coarse_core::asdim::{
    asdim_report, canonical_cover, chain_cover, exact_min_colors, interval_cover, product_cover,
    verify_cover, ColoredCover, LatticeSpace, Piece, DEFAULT_SEARCH_LIMIT,
};
use coarse_core::coarse::{GroupSpace, MetricSpace};
use coarse_core::groups::{CoordinateChain, CyclicSum, FactorialChain, Vector};
use coarse_core::metrics::{L1Norm, DEFAULT_BUDGET};
use coarse_core::quotients::ChainCosetSpace;
use coarse_core::Error;
use proptest::prelude::*;

fn line() -> LatticeSpace {
    GroupSpace::new(L1Norm::<i64>::new(1, DEFAULT_BUDGET))
}

fn plane() -> LatticeSpace {
    GroupSpace::new(L1Norm::<i64>::new(2, DEFAULT_BUDGET))
}

fn z(v: i64) -> Vector<i64> {
    Vector::from_slice(&[v])
}

fn interval(lo: i64, hi: i64) -> Vec<Vector<i64>> {
    (lo..=hi).map(z).collect()
}

fn z2_inf() -> ChainCosetSpace<CoordinateChain> {
    ChainCosetSpace::new(
        CoordinateChain::new(CyclicSum::infinite(2).unwrap()),
        DEFAULT_BUDGET,
    )
}

fn blocks(colors: &[usize]) -> Vec<Piece<Vector<i64>>> {
    colors
        .iter()
        .enumerate()
        .map(|(k, &c)| Piece {
            color: c,
            points: interval(10 * k as i64, 10 * k as i64 + 9),
        })
        .collect()
}

#[test]
fn verify_alternating_blocks() {
    let cover =
        ColoredCover::new(line(), interval(0, 20), blocks(&[0, 1, 0]), 2, 5, "blocks").unwrap();
    let v = verify_cover(&cover).unwrap();
    assert!(v.passed, "{:?}", v.failures);
    assert_eq!(v.mesh, 9);

    let cover = ColoredCover::new(
        line(),
        interval(0, 20),
        blocks(&[0, 0, 0]),
        1,
        5,
        "one color",
    )
    .unwrap();
    let v = verify_cover(&cover).unwrap();
    assert!(!v.passed);
    let bad = v.violation.unwrap();
    assert_eq!(bad.distance, 1);
    assert_eq!(bad.pair, (z(9), z(10)));

    let empty = ColoredCover::new(line(), Vec::new(), Vec::new(), 0, 5, "empty").unwrap();
    assert!(verify_cover(&empty).unwrap().passed);
}

#[test]
fn verify_reports_gaps_and_overlaps() {
    let pieces = vec![
        Piece {
            color: 0,
            points: interval(0, 4),
        },
        Piece {
            color: 1,
            points: interval(6, 9),
        },
    ];
    let cover = ColoredCover::new(line(), interval(0, 9), pieces, 2, 3, "gap").unwrap();
    let v = verify_cover(&cover).unwrap();
    assert_eq!(v.uncovered, Some(z(5)));
    assert!(!v.passed);

    let pieces = vec![
        Piece {
            color: 0,
            points: interval(0, 5),
        },
        Piece {
            color: 0,
            points: interval(5, 9),
        },
    ];
    let cover = ColoredCover::new(line(), interval(0, 9), pieces, 1, 3, "overlap").unwrap();
    let v = verify_cover(&cover).unwrap();
    assert_eq!(v.violation.unwrap().distance, 0);
}

/// Smallest distance between distinct same-color pieces, by all pairs.
fn brute_closest<X: MetricSpace<Dist = u64>>(cover: &ColoredCover<X>) -> Option<u64> {
    let mut best = None;
    for (i, a) in cover.pieces.iter().enumerate() {
        for b in &cover.pieces[i + 1..] {
            if a.color != b.color {
                continue;
            }
            for p in &a.points {
                for q in &b.points {
                    let d = cover.space.distance(p, q).unwrap();
                    best = Some(best.map_or(d, |x: u64| x.min(d)));
                }
            }
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn verifier_matches_all_pairs(
        cells in proptest::collection::vec((0usize..3, -6i64..6, -6i64..6, 0i64..3, 0i64..3), 1..6),
        d in 1u64..7,
    ) {
        let pieces: Vec<Piece<Vector<i64>>> = cells
            .iter()
            .map(|&(c, x, y, w, h)| Piece {
                color: c,
                points: (x..=x + w).flat_map(|a| (y..=y + h).map(move |b| Vector::from_slice(&[a, b]))).collect(),
            })
            .collect();
        let ambient: Vec<Vector<i64>> = pieces.iter().flat_map(|p| p.points.clone()).collect();
        let cover = ColoredCover::new(plane(), ambient, pieces, 3, d, "random").unwrap();
        let v = verify_cover(&cover).unwrap();
        let brute = brute_closest(&cover).filter(|&x| x < d);
        prop_assert_eq!(v.violation.map(|w| w.distance), brute);
        prop_assert_eq!(v.passed, brute.is_none());
    }
}

#[test]
fn canonical_covers_of_lattices() {
    let c = canonical_cover(1, 40, 5).unwrap();
    assert_eq!(c.colors, 2);
    let v = verify_cover(&c).unwrap();
    assert!(v.passed, "{:?}", v.failures);
    assert_eq!(v.mesh, 9);
    // intervals of length 2D alternate
    let first = c.pieces.iter().find(|p| p.points.contains(&z(0))).unwrap();
    assert_eq!(first.points.len(), 10);

    let c = canonical_cover(2, 60, 3).unwrap();
    assert_eq!(c.colors, 3);
    let v = verify_cover(&c).unwrap();
    assert!(v.passed, "{:?}", v.failures);
    assert!(v.mesh <= c.mesh_constant.unwrap() * 3);

    let c = canonical_cover(0, 0, 4).unwrap();
    assert_eq!((c.colors, c.pieces.len()), (1, 1));
    assert!(verify_cover(&c).unwrap().passed);

    for (m, d) in [(1, 2), (1, 8), (2, 2), (3, 2)] {
        let c = canonical_cover(m, 4 * (m as u64 + 1) * d, d).unwrap();
        let v = verify_cover(&c).unwrap();
        assert!(
            v.passed && v.colors == m + 1 && v.depth >= 1,
            "m = {m}, D = {d}: {:?}",
            v.failures
        );
    }

    let err = canonical_cover(2, 30, 3).err().unwrap();
    assert!(err.to_string().contains("need radius >= 36"), "{err}");
    assert!(matches!(
        canonical_cover(5, 1000, 1),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn interval_covers_have_depth() {
    let c = interval_cover(36, 3, 3).unwrap();
    let v = verify_cover(&c).unwrap();
    assert!(v.passed);
    assert_eq!(v.depth, 2);
}

#[test]
fn chain_covers_are_one_color() {
    let c = chain_cover(z2_inf(), 6, 3).unwrap();
    assert_eq!(c.pieces.len(), 8);
    assert_eq!(c.colors, 1);
    assert!(verify_cover(&c).unwrap().passed);

    let c = chain_cover(z2_inf(), 6, 0).unwrap();
    assert_eq!(c.pieces.len(), 64);
    assert!(verify_cover(&c).unwrap().passed);

    let qz = ChainCosetSpace::new(FactorialChain::<i64>::new(), DEFAULT_BUDGET);
    let c = chain_cover(qz.clone(), 5, 2).unwrap();
    // C_5 / C_2 has 120 / 2 cosets
    assert_eq!(c.pieces.len(), 60);
    let v = verify_cover(&c).unwrap();
    assert!(v.passed, "{:?}", v.failures);

    assert!(matches!(
        chain_cover(qz, 100, 2),
        Err(Error::LevelOverflow { .. })
    ));

    for d in 0..=7 {
        let c = chain_cover(z2_inf(), 8, d).unwrap();
        assert!(verify_cover(&c).unwrap().passed, "D = {d}");
    }
}

#[test]
fn products_of_covers() {
    let point = canonical_cover(0, 0, 3).unwrap();
    let cy = canonical_cover(1, 24, 3).unwrap();
    let p = product_cover(&point, &cy).unwrap();
    assert_eq!(p.colors, cy.colors);
    assert_eq!(p.pieces.len(), cy.pieces.len());
    for (a, b) in p.pieces.iter().zip(&cy.pieces) {
        assert_eq!(a.color, b.color);
        assert_eq!(
            a.points.iter().map(|x| x.1.clone()).collect::<Vec<_>>(),
            b.points
        );
    }

    let cx = interval_cover(24, 2, 3).unwrap();
    let p = product_cover(&cx, &cx).unwrap();
    assert_eq!(p.colors, 3);
    assert!(verify_cover(&p).unwrap().passed);

    let cx = canonical_cover(1, 16, 2).unwrap();
    let cy = chain_cover(z2_inf(), 4, 2).unwrap();
    let p = product_cover(&cx, &cy).unwrap();
    assert_eq!(p.colors, 2);
    assert!(verify_cover(&p).unwrap().passed);

    // two partitions into 2 colors leave corners uncovered
    let two = canonical_cover(1, 16, 2).unwrap();
    let err = product_cover(&two, &two).err().unwrap();
    assert!(matches!(err, Error::Construction { .. }), "{err}");

    let other = canonical_cover(1, 24, 3).unwrap();
    assert!(product_cover(&two, &other).is_err());
    let three = interval_cover(24, 2, 3).unwrap();
    assert!(product_cover(&two, &three).is_err());
}

/// Least colors by trying every partition of `pts` and every coloring of its blocks.
fn brute_min_colors(space: &LatticeSpace, pts: &[Vector<i64>], d: u64, m: u64) -> usize {
    let n = pts.len();
    let dist = |i: usize, j: usize| space.distance(&pts[i], &pts[j]).unwrap();
    let mut best = n;
    // restricted growth strings enumerate set partitions
    let mut block = vec![0usize; n];
    loop {
        let blocks = block.iter().max().map_or(0, |b| b + 1);
        let diam_ok = (0..n).all(|i| (0..n).all(|j| block[i] != block[j] || dist(i, j) <= m));
        if diam_ok {
            for k in 1..best {
                let mut color = vec![0usize; blocks];
                loop {
                    let ok = (0..n).all(|i| {
                        (0..n).all(|j| {
                            block[i] == block[j]
                                || color[block[i]] != color[block[j]]
                                || dist(i, j) >= d
                        })
                    });
                    if ok {
                        best = best.min(k);
                        break;
                    }
                    let mut t = 0;
                    while t < blocks && color[t] == k - 1 {
                        color[t] = 0;
                        t += 1;
                    }
                    if t == blocks {
                        break;
                    }
                    color[t] += 1;
                }
            }
        }
        // next restricted growth string
        let mut i = n;
        loop {
            if i <= 1 {
                return best;
            }
            i -= 1;
            let cap = block[..i].iter().max().unwrap() + 1;
            if block[i] < cap {
                block[i] += 1;
                for b in &mut block[i + 1..] {
                    *b = 0;
                }
                break;
            }
        }
    }
}

#[test]
fn exact_search_examples() {
    let r = exact_min_colors(&line(), &interval(0, 20), 5, 4, DEFAULT_SEARCH_LIMIT).unwrap();
    assert_eq!(r.colors, 2);
    let v = verify_cover(&r.cover).unwrap();
    assert!(v.passed && v.mesh <= 4, "{:?}", v.failures);
    let mut sizes: Vec<usize> = r.cover.pieces.iter().map(|p| p.points.len()).collect();
    sizes.sort();
    assert_eq!(sizes.iter().sum::<usize>(), 21);
    assert!(sizes.iter().all(|&s| s <= 5));

    let pts = interval(0, 9);
    assert_eq!(
        exact_min_colors(&line(), &pts, 1, 9, DEFAULT_SEARCH_LIMIT)
            .unwrap()
            .colors,
        1
    );

    let two = vec![z(0), z(3)];
    let r = exact_min_colors(&line(), &two, 5, 0, DEFAULT_SEARCH_LIMIT).unwrap();
    assert_eq!(r.colors, 2);
    assert_eq!(r.cover.pieces.len(), 2);

    let too_many = interval(0, 300);
    assert!(exact_min_colors(&line(), &too_many, 2, 2, DEFAULT_SEARCH_LIMIT).is_err());
}

#[test]
fn exact_search_agrees_with_brute_force() {
    let shapes: Vec<Vec<Vector<i64>>> = vec![
        interval(0, 6),
        vec![z(0), z(1), z(3), z(4), z(8), z(9), z(10)],
        (0..3)
            .flat_map(|a| (0..2).map(move |b| Vector::from_slice(&[a, b])))
            .collect(),
    ];
    for pts in &shapes {
        let space = if pts[0].len() == 1 { line() } else { plane() };
        for d in 1..=4 {
            for m in 0..=3 {
                let exact = exact_min_colors(&space, pts, d, m, DEFAULT_SEARCH_LIMIT).unwrap();
                assert_eq!(
                    exact.colors,
                    brute_min_colors(&space, pts, d, m),
                    "{pts:?} D = {d} M = {m}"
                );
                assert!(verify_cover(&exact.cover).unwrap().passed);
            }
        }
    }
}

#[test]
fn exact_search_on_a_grid_and_monotonicity() {
    let grid: Vec<Vector<i64>> = (0..6)
        .flat_map(|a| (0..6).map(move |b| Vector::from_slice(&[a, b])))
        .collect();
    let mut table = vec![vec![0; 4]; 4];
    for (i, d) in [1u64, 2, 3, 4].iter().enumerate() {
        for (j, m) in [1u64, 2, 4, 10].iter().enumerate() {
            table[i][j] = exact_min_colors(&plane(), &grid, *d, *m, DEFAULT_SEARCH_LIMIT)
                .unwrap()
                .colors;
        }
    }
    for i in 0..4 {
        for j in 0..4 {
            if j > 0 {
                assert!(table[i][j] <= table[i][j - 1], "{table:?}");
            }
            if i > 0 {
                assert!(table[i][j] >= table[i - 1][j], "{table:?}");
            }
        }
    }
    assert_eq!(table[0][3], 1);
}

#[test]
fn one_color_is_impossible_on_long_intervals() {
    for (len, d, m) in [(12i64, 3u64, 4u64), (15, 5, 4), (9, 2, 3)] {
        let pts = interval(0, len - 1);
        let r = exact_min_colors(&line(), &pts, d, m, DEFAULT_SEARCH_LIMIT).unwrap();
        assert!(r.colors >= 2);
    }
}

#[test]
fn chain_balls_need_one_color() {
    let space = z2_inf();
    let pts = space.ball(6).unwrap();
    let diam = space.diameter(&pts).unwrap();
    assert_eq!(diam, 6);
    for d in 0..=6 {
        assert_eq!(
            exact_min_colors(&space, &pts, d, diam, DEFAULT_SEARCH_LIMIT)
                .unwrap()
                .colors,
            1
        );
    }
}

#[test]
fn report_rows() {
    let pts = interval(-10, 10);
    let report = asdim_report(
        &line(),
        &pts,
        &[2, 3],
        &[3, 20],
        |d| {
            let c = canonical_cover(1, 8 * d, d)?;
            let space = line();
            let pieces: Vec<Piece<Vector<i64>>> = c
                .pieces
                .iter()
                .map(|p| Piece {
                    color: p.color,
                    points: p
                        .points
                        .iter()
                        .filter(|x| x[0].abs() <= 10)
                        .cloned()
                        .collect(),
                })
                .filter(|p| !p.points.is_empty())
                .collect();
            Ok(Some(ColoredCover::new(
                space,
                pts.clone(),
                pieces,
                2,
                d,
                "clipped",
            )?))
        },
        DEFAULT_SEARCH_LIMIT,
    )
    .unwrap();
    assert_eq!(report.rows.len(), 4);
    assert!(report.consistent);
    for row in &report.rows {
        assert_eq!(row.construction_passed, Some(true));
        assert!(row.exact_min.unwrap() <= 2);
    }
    assert_eq!(report.rows[1].exact_min, Some(1));
}
