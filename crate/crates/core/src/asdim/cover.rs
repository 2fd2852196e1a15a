use std::collections::BTreeMap;

use super::{verify_cover, ColoredCover, Piece};
use crate::coarse::{GroupSpace, MetricSpace, ProductSpace};
use crate::error::{Error, Result};
use crate::groups::{Chain, Group, Vector};
use crate::metrics::L1Norm;
use crate::quotients::ChainCosetSpace;

/// `Z^m` with the word metric of the standard basis.
pub type LatticeSpace = GroupSpace<L1Norm<i64>>;

/// Cover of the `L1` ball of radius `radius` in `Z^m` by `families` shifted
/// cube grids, every point lying in at least `families - m` of them.
///
/// Grid `i` has period `L = 2 families D` and is shifted by `2 i D` along the
/// diagonal; its pieces are the cubes shrunk by `D` on every side. The
/// removed slabs of one coordinate tile the circle `Z/L`, one slab per grid,
/// so a point is shallow in at most `m` grids. Distinct pieces of one grid are
/// `2D + 1` apart in some coordinate.
pub fn lattice_cover(
    m: usize,
    radius: u64,
    d: u64,
    families: usize,
) -> Result<ColoredCover<LatticeSpace>> {
    if d == 0 {
        return Err(Error::invalid("cover scale D must be at least 1"));
    }
    if families == 0 {
        return Err(Error::invalid("a cover needs at least one color"));
    }
    let needed = 4 * families as u64 * d;
    if m > 0 && radius < needed {
        return Err(Error::invalid(format!(
            "radius {radius} is below one full period: {families} colors at D = {d} need radius >= {needed}"
        )));
    }
    let space = GroupSpace::new(L1Norm::<i64>::new(m, usize::MAX));
    let ambient = space.ball(radius)?;
    let di = i64::try_from(d).map_err(|_| Error::overflow("cover scale"))?;
    let s = 2 * di;
    let period = s * families as i64;
    let mut grouped: BTreeMap<(usize, Vector<i64>), Vec<Vector<i64>>> = BTreeMap::new();
    for x in &ambient {
        for i in 0..families {
            let shift = s * i as i64;
            let cube: Option<Vector<i64>> = x
                .iter()
                .map(|c| {
                    let y = c - shift;
                    let pos = y.rem_euclid(period);
                    (di <= pos && pos < period - di).then(|| y.div_euclid(period))
                })
                .collect();
            if let Some(k) = cube {
                grouped.entry((i, k)).or_default().push(x.clone());
            }
        }
    }
    let pieces = grouped
        .into_iter()
        .map(|((color, _), points)| Piece { color, points })
        .collect();
    let label = format!("{families}-color shifted cube grids on Z^{m}, D = {d}");
    let mut cover = ColoredCover::new(space, ambient, pieces, families, d, label)?;
    cover.mesh_constant = Some(2 * m as u64 * (families as u64 - 1));
    Ok(cover)
}

/// `m + 1` colors on the radius-`radius` ball of `Z^m`; needs `radius >= 4 (m + 1) D`.
///
/// For `m = 1` these are intervals of length `2D` in alternating colors. The
/// cubes are the products of the `(m + 1)`-color interval covers, which is
/// how [`product_cover`] combines them.
pub fn canonical_cover(m: usize, radius: u64, d: u64) -> Result<ColoredCover<LatticeSpace>> {
    if m > 4 {
        return Err(Error::Unsupported(format!(
            "canonical covers are built for m <= 4, got {m}"
        )));
    }
    lattice_cover(m, radius, d, m + 1)
}

/// `colors` families of intervals on `[-radius, radius]`, each point in at least `colors - 1`.
pub fn interval_cover(radius: u64, d: u64, colors: usize) -> Result<ColoredCover<LatticeSpace>> {
    lattice_cover(1, radius, d, colors)
}

/// One color: the cosets of `G_D` inside the level-`level` ball of a chain space.
/// Distinct cosets are at distance at least `D + 1`.
pub fn chain_cover<C: Chain + 'static>(
    space: ChainCosetSpace<C>,
    level: usize,
    d: u64,
) -> Result<ColoredCover<ChainCosetSpace<C>>> {
    let chain = space.chain().clone();
    chain.check_level(level)?;
    let ambient = space.ball(level as u64)?;
    let k = (d.min(level as u64)) as usize;
    let mut grouped: BTreeMap<<C::G as Group>::Elem, Vec<<C::G as Group>::Elem>> = BTreeMap::new();
    for x in &ambient {
        grouped
            .entry(chain.coset_key(k, x)?)
            .or_default()
            .push(x.clone());
    }
    let pieces = grouped
        .into_values()
        .map(|points| Piece { color: 0, points })
        .collect();
    let label = format!("cosets of level {k} in level {level} of {}", chain.name());
    let mut cover = ColoredCover::new(space, ambient, pieces, 1, d, label)?;
    cover.mesh_constant = Some(1);
    Ok(cover)
}

/// Pieces of `cover` as `k` families; a cover holding every point in every
/// color is repeated cyclically.
fn families<X: MetricSpace<Dist = u64>>(
    cover: &ColoredCover<X>,
    k: usize,
) -> Result<Vec<Vec<&Piece<X::Point>>>> {
    if cover.colors != k && cover.depth() != cover.colors {
        return Err(Error::invalid(format!(
            "{} has {} colors and depth {}; only covers holding every point in every color can be widened to {k}",
            cover.label,
            cover.colors,
            cover.depth()
        )));
    }
    Ok((0..k)
        .map(|i| {
            cover
                .pieces
                .iter()
                .filter(|p| p.color == i % cover.colors)
                .collect()
        })
        .collect())
}

/// Same-index product: family `i` of the result is `{ U x V }` over family `i`
/// of each factor, on the max-metric product.
///
/// With `k` families on both sides, a point of `X` missing at most `a` of them
/// and a point of `Y` missing at most `b` lie in at least `k - a - b` product
/// families; `k = a + b + 1` covers. A factor holding every point in every
/// color (such as a one-color cover) is repeated to match the other. The
/// result is verified; a failed check is an error carrying the verdict.
pub fn product_cover<X, Y>(
    cx: &ColoredCover<X>,
    cy: &ColoredCover<Y>,
) -> Result<ColoredCover<ProductSpace<X, Y>>>
where
    X: MetricSpace<Dist = u64>,
    Y: MetricSpace<Dist = u64>,
{
    if cx.d != cy.d {
        return Err(Error::invalid(format!(
            "covers at different scales: D = {} and D = {}",
            cx.d, cy.d
        )));
    }
    let k = cx.colors.max(cy.colors);
    let (fx, fy) = (families(cx, k)?, families(cy, k)?);
    let mut pieces = Vec::new();
    for i in 0..k {
        for u in &fx[i] {
            for v in &fy[i] {
                let points = u
                    .points
                    .iter()
                    .flat_map(|a| v.points.iter().map(move |b| (a.clone(), b.clone())))
                    .collect();
                pieces.push(Piece { color: i, points });
            }
        }
    }
    let ambient = cx
        .ambient
        .iter()
        .flat_map(|a| cy.ambient.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    let space = ProductSpace::new(cx.space.clone(), cy.space.clone());
    let label = format!("({}) x ({})", cx.label, cy.label);
    let mut cover = ColoredCover::new(space, ambient, pieces, k, cx.d, label)?;
    cover.mesh_constant = cx
        .mesh_constant
        .zip(cy.mesh_constant)
        .map(|(a, b)| a.max(b));
    let verdict = verify_cover(&cover)?;
    if !verdict.passed {
        return Err(Error::Construction {
            level: 0,
            reason: format!(
                "product cover fails at D = {} with depth {}: {}",
                cx.d,
                verdict.depth,
                verdict.failures.join("; ")
            ),
        });
    }
    Ok(cover)
}
