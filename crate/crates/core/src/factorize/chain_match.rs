use std::collections::HashMap;
use std::sync::Arc;

use super::{Construction, Window, WitnessRecipe};
use crate::coarse::{CoarseCertificate, PointMap};
use crate::error::{Error, Result};
use crate::groups::{coset_representatives, Chain, Group};
use crate::quotients::ChainCosetSpace;

type Elem<C> = <<C as Chain>::G as Group>::Elem;

/// Largest grid step used when checking a matched window.
const GRID: usize = 6;

/// A surjection between the level-`level_u` ball of one chain space and the
/// level-`level_v` ball of another, with a section, built by nested quota filling.
///
/// Points are addressed by position: the `k`-th coset representative in the
/// order where every `G_i`-block is a contiguous range of length `|G_i|`.
pub struct ChainMatch<C1: Chain + 'static, C2: Chain + 'static> {
    pub recipe: WitnessRecipe<ChainCosetSpace<C1>, ChainCosetSpace<C2>>,
    pub level_u: usize,
    pub level_v: usize,
    pub sizes_u: Vec<u64>,
    pub sizes_v: Vec<u64>,
    /// `assignment[p]` is the position of `f` of the `p`-th point of `U`.
    pub assignment: Vec<usize>,
    /// `section[q]` is the position of `g` of the `q`-th point of `V`.
    pub section: Vec<usize>,
    /// Largest image diameter of a `G_d`-block, `d = 0..=level_u`.
    pub block_modulus_f: Vec<u64>,
    pub block_modulus_g: Vec<u64>,
    pub k: u64,
}

fn level_sizes<C: Chain>(chain: &C, top: usize) -> Result<Vec<u64>> {
    let mut sizes = vec![1u64];
    for n in 1..=top {
        let next = sizes[n - 1]
            .checked_mul(chain.index(n)? as u64)
            .ok_or(Error::Overflow { op: "level size" })?;
        sizes.push(next);
    }
    Ok(sizes)
}

/// Ultrametric distance of two positions: the least level whose block holds both.
fn position_distance(sizes: &[u64], a: usize, b: usize) -> u64 {
    sizes
        .iter()
        .position(|&s| a as u64 / s == b as u64 / s)
        .unwrap_or(sizes.len()) as u64
}

fn is_bounded<C: Chain>(chain: &C) -> bool {
    chain.group().order().is_some()
}

struct Filler<'a> {
    a: &'a [u64],
    b: &'a [u64],
    assignment: Vec<usize>,
}

impl Filler<'_> {
    /// Maps the union of the level-`i` blocks `blocks` onto the level-`j` block starting at `start`.
    fn fill(&mut self, blocks: &[usize], i: usize, start: usize, j: usize) -> Result<()> {
        if self.b[j] == 1 {
            let len = self.a[i] as usize;
            for &blk in blocks {
                for p in blk * len..(blk + 1) * len {
                    self.assignment[p] = start;
                }
            }
            return Ok(());
        }
        let children = (self.b[j] / self.b[j - 1]) as usize;
        if children == 1 {
            return self.fill(blocks, i, start, j - 1);
        }
        // deepest split level that still gives every child enough points
        let split = (0..=i).rev().find(|&ip| {
            let count = blocks.len() * (self.a[i] / self.a[ip]) as usize;
            count >= children && (count / children) as u64 * self.a[ip] >= self.b[j - 1]
        });
        let Some(ip) = split else {
            return Err(Error::NotCoarse(format!(
                "not matchable: {} points at level {i} cannot cover a level-{j} block",
                blocks.len() as u64 * self.a[i]
            )));
        };
        let per = (self.a[i] / self.a[ip]) as usize;
        let kids: Vec<usize> = blocks
            .iter()
            .flat_map(|&blk| blk * per..(blk + 1) * per)
            .collect();
        let (q, r) = (kids.len() / children, kids.len() % children);
        let mut at = 0;
        for t in 0..children {
            let take = q + usize::from(t < r);
            self.fill(
                &kids[at..at + take],
                ip,
                start + t * self.b[j - 1] as usize,
                j - 1,
            )?;
            at += take;
        }
        Ok(())
    }
}

fn block_modulus(
    sizes_from: &[u64],
    sizes_to: &[u64],
    image: impl Fn(usize) -> usize,
    top: usize,
) -> Vec<u64> {
    let total = sizes_from[top] as usize;
    (0..=top)
        .map(|d| {
            let len = sizes_from[d] as usize;
            (0..total / len)
                .map(|blk| {
                    let imgs = (blk * len..(blk + 1) * len).map(&image);
                    let (lo, hi) = imgs.fold((usize::MAX, 0), |(lo, hi), p| (lo.min(p), hi.max(p)));
                    position_distance(sizes_to, lo, hi)
                })
                .max()
                .unwrap_or(0)
        })
        .collect()
}

fn positions<C: Chain + 'static>(
    space: &ChainCosetSpace<C>,
    level: usize,
) -> Result<(Vec<Elem<C>>, HashMap<Elem<C>, usize>)> {
    let pts: Vec<Elem<C>> = coset_representatives(&**space.chain(), level)?
        .iter()
        .map(|r| space.coset(r))
        .collect::<Result<_>>()?;
    let index = pts
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    Ok((pts, index))
}

/// Matches the level-`level_u` ball of `u` with the largest ball of `v` that is not bigger.
///
/// `f` sends every `G_i`-block chosen by the recursion into one block of `v`
/// and fills each block of `v` with a near-equal share of `u`; `g` picks the
/// first point of each fibre. The result is checked by the verifier on the
/// two balls with declared block moduli.
pub fn chain_match_witness<C1, C2>(
    u: ChainCosetSpace<C1>,
    v: ChainCosetSpace<C2>,
    level_u: usize,
) -> Result<ChainMatch<C1, C2>>
where
    C1: Chain + 'static,
    C2: Chain + 'static,
{
    let (bu, bv) = (is_bounded(&**u.chain()), is_bounded(&**v.chain()));
    if bu != bv {
        return Err(Error::NotCoarse(format!(
            "not matchable: {} is {} and {} is {}",
            u.chain().name(),
            if bu { "bounded" } else { "unbounded" },
            v.chain().name(),
            if bv { "bounded" } else { "unbounded" }
        )));
    }
    let a = level_sizes(&**u.chain(), level_u)?;
    let total = a[level_u];
    let mut b = vec![1u64];
    let v_max = v.chain().max_level();
    loop {
        let j = b.len();
        if v_max.is_some_and(|m| j > m) {
            break;
        }
        let next = b[j - 1].saturating_mul(v.chain().index(j)? as u64);
        if next > total || (bv && next == b[j - 1]) {
            break;
        }
        b.push(next);
    }
    // trailing index-one levels add nothing
    while b.len() > 1 && b[b.len() - 1] == b[b.len() - 2] {
        b.pop();
    }
    let level_v = b.len() - 1;

    let mut filler = Filler {
        a: &a,
        b: &b,
        assignment: vec![0; total as usize],
    };
    filler.fill(&[0], level_u, 0, level_v)?;
    let assignment = filler.assignment;
    let mut section = vec![usize::MAX; b[level_v] as usize];
    for (p, &q) in assignment.iter().enumerate() {
        if section[q] == usize::MAX {
            section[q] = p;
        }
    }
    if let Some(q) = section.iter().position(|&p| p == usize::MAX) {
        return Err(Error::NotCoarse(format!(
            "not matchable: position {q} of the target is not covered"
        )));
    }
    let k = assignment
        .iter()
        .enumerate()
        .map(|(p, &q)| position_distance(&a, p, section[q]))
        .max()
        .unwrap_or(0);
    let block_modulus_f = block_modulus(&a, &b, |p| assignment[p], level_u);
    let block_modulus_g = block_modulus(&b, &a, |q| section[q], level_v);

    let (upts, uidx) = positions(&u, level_u)?;
    let (vpts, vidx) = positions(&v, level_v)?;
    let (asg, sec) = (Arc::new(assignment.clone()), Arc::new(section.clone()));
    let forward = move |x: &Elem<C1>| -> Result<Elem<C2>> {
        let p = uidx
            .get(x)
            .ok_or_else(|| Error::invalid(format!("{x:?} is outside the matched window")))?;
        Ok(vpts[asg[*p]].clone())
    };
    let back = Arc::new(move |y: &Elem<C2>| -> Result<Elem<C1>> {
        let q = vidx
            .get(y)
            .ok_or_else(|| Error::invalid(format!("{y:?} is outside the matched window")))?;
        Ok(upts[sec[*q]].clone())
    });
    let mut f = PointMap::new(
        format!("block matching at levels {level_u} -> {level_v}"),
        u.clone(),
        v.clone(),
        forward,
    );
    if a[level_u] == b[level_v] {
        let inv = back.clone();
        f = f.with_inverse(move |y| inv(y));
    }
    let g = PointMap::new("first point of each fibre", v, u, move |y| back(y));
    let (mf, mg) = (block_modulus_f.clone(), block_modulus_g.clone());
    let cert = CoarseCertificate::new(f, g, k).with_bounds(
        move |d| mf[(d as usize).min(level_u)],
        move |d| mg[(d as usize).min(level_v)],
    );
    let recipe = WitnessRecipe {
        construction: Construction::ChainMatch,
        ingredients: vec![
            format!(
                "U = {} at level {level_u} ({} points)",
                cert.f.domain.chain().name(),
                a[level_u]
            ),
            format!(
                "V = {} at level {level_v} ({} points)",
                cert.f.codomain.chain().name(),
                b[level_v]
            ),
        ],
        certificate: cert,
        window: Window {
            radius_x: level_u as u64,
            radius_y: level_v as u64,
            deltas_x: (1..=level_u.clamp(1, GRID) as u64).collect(),
            deltas_y: (1..=level_v.clamp(1, GRID) as u64).collect(),
        },
    };
    Ok(ChainMatch {
        recipe,
        level_u,
        level_v,
        sizes_u: a,
        sizes_v: b,
        assignment,
        section,
        block_modulus_f,
        block_modulus_g,
        k,
    })
}
