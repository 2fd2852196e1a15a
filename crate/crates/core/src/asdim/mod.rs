//! Asymptotic dimension at a fixed scale: colored covers, their exact
//! verifier, covers of lattices and chain spaces, products, and an exact
//! search for the least number of colors on small spaces.
//!
//! A cover is `D`-discrete per color when distinct pieces of one color are at
//! distance at least `D`. Nothing here says anything about the limit over all `D`.

mod cover;
mod search;

pub use cover::{
    canonical_cover, chain_cover, interval_cover, lattice_cover, product_cover, LatticeSpace,
};
pub use search::{
    asdim_report, exact_min_colors, AsdimReport, AsdimRow, MinColors, DEFAULT_SEARCH_LIMIT,
};

use std::collections::VecDeque;
use std::hash::Hash;

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use serde::Serialize;

use crate::coarse::MetricSpace;
use crate::error::{Error, Result};

/// A finite piece of a cover with its color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece<P> {
    pub color: usize,
    pub points: Vec<P>,
}

/// Colored pieces covering a finite ambient set.
#[derive(Clone)]
pub struct ColoredCover<X: MetricSpace> {
    pub space: X,
    pub ambient: Vec<X::Point>,
    pub pieces: Vec<Piece<X::Point>>,
    /// Colors are `0..colors`.
    pub colors: usize,
    pub d: u64,
    /// Largest piece diameter.
    pub mesh: u64,
    /// `c` with `mesh <= c D`, when the construction guarantees one.
    pub mesh_constant: Option<u64>,
    pub label: String,
}

impl<X: MetricSpace<Dist = u64>> ColoredCover<X> {
    /// Sorts the points of every piece and computes the mesh.
    pub fn new(
        space: X,
        ambient: Vec<X::Point>,
        pieces: Vec<Piece<X::Point>>,
        colors: usize,
        d: u64,
        label: impl Into<String>,
    ) -> Result<Self> {
        if let Some(p) = pieces.iter().find(|p| p.color >= colors) {
            return Err(Error::invalid(format!(
                "piece color {} outside 0..{colors}",
                p.color
            )));
        }
        let mut pieces = pieces;
        let mut mesh = 0;
        for p in &mut pieces {
            p.points.sort();
            p.points.dedup();
            mesh = mesh.max(space.diameter(&p.points)?);
        }
        let mut ambient = ambient;
        ambient.sort();
        ambient.dedup();
        Ok(ColoredCover {
            space,
            ambient,
            pieces,
            colors,
            d,
            mesh,
            mesh_constant: None,
            label: label.into(),
        })
    }

    /// Fewest colors among the pieces holding a point, minimised over the ambient set.
    pub fn depth(&self) -> usize {
        depth_of(&self.ambient, &ColorMasks::new(&self.pieces), self.colors)
    }

    /// Pieces of color `c` with their indices.
    pub fn pieces_of_color(&self, c: usize) -> impl Iterator<Item = (usize, &Piece<X::Point>)> {
        self.pieces
            .iter()
            .enumerate()
            .filter(move |(_, p)| p.color == c)
    }
}

/// The set of colors holding each point, as bit rows.
struct ColorMasks<'a, P> {
    row: FxHashMap<&'a P, usize>,
    words: usize,
    bits: Vec<u64>,
}

impl<'a, P: Eq + Hash> ColorMasks<'a, P> {
    fn new(pieces: &'a [Piece<P>]) -> Self {
        let colors = pieces.iter().map(|p| p.color + 1).max().unwrap_or(0);
        let words = colors.div_ceil(64).max(1);
        let mut row = FxHashMap::default();
        let mut bits = Vec::new();
        for p in pieces {
            for x in &p.points {
                let r = *row.entry(x).or_insert_with(|| {
                    bits.extend(std::iter::repeat_n(0, words));
                    bits.len() / words - 1
                });
                bits[r * words + p.color / 64] |= 1 << (p.color % 64);
            }
        }
        ColorMasks { row, words, bits }
    }

    fn count(&self, x: &P) -> Option<usize> {
        let r = *self.row.get(x)?;
        Some(
            self.bits[r * self.words..(r + 1) * self.words]
                .iter()
                .map(|w| w.count_ones() as usize)
                .sum(),
        )
    }
}

fn depth_of<P: Eq + Hash>(ambient: &[P], masks: &ColorMasks<'_, P>, colors: usize) -> usize {
    ambient
        .iter()
        .map(|p| masks.count(p).unwrap_or(0))
        .min()
        .unwrap_or(colors)
}

/// Two pieces of one color closer than `D`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation<P> {
    pub color: usize,
    pub pieces: (usize, usize),
    pub pair: (P, P),
    pub distance: u64,
}

/// Outcome of [`verify_cover`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverVerdict<P> {
    pub passed: bool,
    pub colors: usize,
    pub pieces: usize,
    pub points: usize,
    pub d: u64,
    /// Recomputed largest piece diameter.
    pub mesh: u64,
    pub depth: usize,
    pub uncovered: Option<P>,
    /// The closest same-color pair, when closer than `D`.
    pub violation: Option<Violation<P>>,
    pub failures: Vec<String>,
}

/// Exact check of coverage, mesh and `D`-discreteness of every color.
///
/// On graph metrics the closest pair of distinct same-color pieces is found by
/// a multi-source search to depth `D - 1` from all their points; otherwise
/// every point's `(D - 1)`-ball is scanned.
pub fn verify_cover<X: MetricSpace<Dist = u64>>(
    cover: &ColoredCover<X>,
) -> Result<CoverVerdict<X::Point>> {
    let mut failures = Vec::new();
    let masks = ColorMasks::new(&cover.pieces);
    let uncovered = cover
        .ambient
        .iter()
        .find(|p| masks.count(p).is_none())
        .cloned();
    if let Some(p) = &uncovered {
        failures.push(format!("{p:?} is not covered"));
    }
    let mut mesh = 0;
    for p in &cover.pieces {
        mesh = mesh.max(cover.space.diameter(&p.points)?);
    }
    if mesh != cover.mesh {
        failures.push(format!(
            "declared mesh {} but the largest piece has diameter {mesh}",
            cover.mesh
        ));
    }
    if let Some(c) = cover.mesh_constant {
        if mesh > c * cover.d {
            failures.push(format!(
                "mesh {mesh} exceeds the guaranteed {c} * {}",
                cover.d
            ));
        }
    }
    let depth = depth_of(&cover.ambient, &masks, cover.colors);
    drop(masks);
    let per_color = (0..cover.colors)
        .into_par_iter()
        .map(|c| closest_pair(cover, c))
        .collect::<Result<Vec<_>>>()?;
    let mut violation: Option<Violation<X::Point>> = None;
    for v in per_color.into_iter().flatten() {
        if violation.as_ref().is_none_or(|w| v.distance < w.distance) {
            violation = Some(v);
        }
    }
    if let Some(v) = &violation {
        failures.push(format!(
            "pieces {} and {} of color {} are at distance {} < D = {}: {:?}, {:?}",
            v.pieces.0, v.pieces.1, v.color, v.distance, cover.d, v.pair.0, v.pair.1
        ));
    }
    Ok(CoverVerdict {
        passed: failures.is_empty(),
        colors: cover.colors,
        pieces: cover.pieces.len(),
        points: cover.ambient.len(),
        d: cover.d,
        mesh,
        depth,
        uncovered,
        violation,
        failures,
    })
}

type Best<P> = Option<(u64, usize, usize, P, P)>;

fn offer<P: Clone>(dist: u64, a: usize, b: usize, p: &P, q: &P, best: &mut Best<P>) {
    let (a, b, p, q) = if a <= b { (a, b, p, q) } else { (b, a, q, p) };
    if best.as_ref().is_none_or(|(bd, ..)| dist < *bd) {
        *best = Some((dist, a, b, p.clone(), q.clone()));
    }
}

/// Closest pair of distinct pieces of color `c` at distance below `D`.
fn closest_pair<X: MetricSpace<Dist = u64>>(
    cover: &ColoredCover<X>,
    c: usize,
) -> Result<Option<Violation<X::Point>>> {
    let d = cover.d;
    if d == 0 {
        return Ok(None);
    }
    // point -> (piece, distance to it, index of the source point)
    let mut seen: FxHashMap<X::Point, (u32, u32, u32)> = FxHashMap::default();
    let mut sources: Vec<&X::Point> = Vec::new();
    let mut queue = VecDeque::new();
    let mut best: Best<X::Point> = None;
    for (i, piece) in cover.pieces_of_color(c) {
        for x in &piece.points {
            match seen.get(x) {
                Some(&(j, _, _)) if j as usize != i => offer(0, j as usize, i, x, x, &mut best),
                Some(_) => {}
                None => {
                    seen.insert(x.clone(), (i as u32, 0, sources.len() as u32));
                    sources.push(x);
                    queue.push_back(x.clone());
                }
            }
        }
    }
    if d == 1 || sources.is_empty() || best.is_some() {
        return Ok(best.map(|(distance, a, b, p, q)| Violation {
            color: c,
            pieces: (a, b),
            pair: (p, q),
            distance,
        }));
    }
    if cover.space.unit_neighbors(sources[0]).is_none() {
        for (i, piece) in cover.pieces_of_color(c) {
            for x in &piece.points {
                for (dist, y) in cover.space.ball_around(x, d - 1)? {
                    if let Some(&(j, 0, _)) = seen.get(&y) {
                        if j as usize != i {
                            offer(dist, i, j as usize, x, &y, &mut best);
                        }
                    }
                }
            }
        }
    } else {
        let reach = d.saturating_sub(2).min(u32::MAX as u64) as u32;
        while let Some(u) = queue.pop_front() {
            let (pu, du, su) = seen[&u];
            for v in cover.space.unit_neighbors(&u).expect("graph metric")? {
                match seen.get(&v) {
                    Some(&(pv, dv, sv)) => {
                        if pv != pu && u64::from(du + 1 + dv) < d {
                            let (a, b) = (sources[su as usize], sources[sv as usize]);
                            offer(
                                cover.space.distance(a, b)?,
                                pu as usize,
                                pv as usize,
                                a,
                                b,
                                &mut best,
                            );
                        }
                    }
                    None if du < reach => {
                        seen.insert(v.clone(), (pu, du + 1, su));
                        queue.push_back(v);
                    }
                    None => {}
                }
            }
        }
    }
    Ok(best.map(|(distance, a, b, p, q)| Violation {
        color: c,
        pieces: (a, b),
        pair: (p, q),
        distance,
    }))
}
