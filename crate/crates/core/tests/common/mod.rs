//! Seeded sampling checks shared by the property and acceptance tests.
#![allow(dead_code)]

use coarse_core::coarse::MetricSpace;
use coarse_core::groups::{CyclicElem, CyclicSum, Group};
use coarse_core::metrics::NormScheme;
use coarse_core::Result;
use num_rational::Ratio;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const SAMPLES: usize = 10_000;

/// Violations of the norm axioms, symmetry, the triangle inequality, left
/// invariance and (when `ultra`) the strong triangle inequality.
pub fn norm_violations<N: NormScheme>(
    scheme: &N,
    rng: &mut ChaCha8Rng,
    samples: usize,
    ultra: bool,
    draw: impl Fn(&mut ChaCha8Rng) -> <N::G as Group>::Elem,
) -> Result<Vec<String>> {
    let g = scheme.group();
    let e = g.identity();
    let mut bad = Vec::new();
    if scheme.norm(&e)? != 0 {
        bad.push("|1| != 0".to_string());
    }
    for _ in 0..samples {
        let (x, y, a) = (draw(rng), draw(rng), draw(rng));
        let (nx, ny) = (scheme.norm(&x)?, scheme.norm(&y)?);
        if x != e && nx == 0 {
            bad.push(format!("|{x:?}| = 0"));
        }
        if scheme.norm(&g.inv(&x)?)? != nx {
            bad.push(format!("|{x:?}^-1| != |{x:?}|"));
        }
        let nxy = scheme.norm(&g.mul(&x, &y)?)?;
        if nxy > nx + ny {
            bad.push(format!("|xy| > |x| + |y| at {x:?}, {y:?}"));
        }
        if ultra && nxy > nx.max(ny) {
            bad.push(format!("|xy| > max(|x|, |y|) at {x:?}, {y:?}"));
        }
        let d = scheme.distance(&x, &y)?;
        if d != scheme.distance(&y, &x)? {
            bad.push(format!("d not symmetric at {x:?}, {y:?}"));
        }
        if scheme.distance(&g.mul(&a, &x)?, &g.mul(&a, &y)?)? != d {
            bad.push(format!("d(ax, ay) != d(x, y) at a = {a:?}"));
        }
    }
    Ok(bad)
}

/// Violations of metric axioms, G-invariance `d(g.x, g.y) = d(x, y)` and,
/// when `ultra`, the strong triangle inequality, on a coset space.
pub fn quotient_violations<X: MetricSpace<Dist = u64>, E: std::fmt::Debug>(
    space: &X,
    rng: &mut ChaCha8Rng,
    samples: usize,
    ultra: bool,
    draw: impl Fn(&mut ChaCha8Rng) -> E,
    coset: impl Fn(&E) -> Result<X::Point>,
    act: impl Fn(&E, &X::Point) -> Result<X::Point>,
) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    for _ in 0..samples {
        let (x, y, z) = (coset(&draw(rng))?, coset(&draw(rng))?, coset(&draw(rng))?);
        let g = draw(rng);
        let (dxy, dyz, dxz) = (
            space.distance(&x, &y)?,
            space.distance(&y, &z)?,
            space.distance(&x, &z)?,
        );
        if space.distance(&x, &x)? != 0 || (x != y && dxy == 0) {
            bad.push(format!("identity of indiscernibles at {x:?}, {y:?}"));
        }
        if dxy != space.distance(&y, &x)? {
            bad.push(format!("not symmetric at {x:?}, {y:?}"));
        }
        if dxz > dxy + dyz || (ultra && dxz > dxy.max(dyz)) {
            bad.push(format!("triangle fails at {x:?}, {y:?}, {z:?}"));
        }
        if space.distance(&act(&g, &x)?, &act(&g, &y)?)? != dxy {
            bad.push(format!("not invariant under {g:?} at {x:?}, {y:?}"));
        }
    }
    Ok(bad)
}

pub fn small_int(rng: &mut ChaCha8Rng, r: i64) -> i64 {
    rng.gen_range(-r..=r)
}

/// An element of `Z_p^inf` supported on the first `width` coordinates.
pub fn sparse(g: &CyclicSum, p: u64, width: usize, rng: &mut ChaCha8Rng) -> CyclicElem {
    let mut entries = Vec::new();
    for i in 0..width {
        if rng.gen_bool(0.3) {
            entries.push((i, rng.gen_range(0..p as i64)));
        }
    }
    g.elem(&entries).expect("valid coordinates")
}

/// A point of `Q/Z` with denominator at most `den`.
pub fn rational(rng: &mut ChaCha8Rng, den: i64) -> Ratio<i64> {
    let q = rng.gen_range(1..=den);
    let p = rng.gen_range(0..q);
    Ratio::new(p, q)
}
