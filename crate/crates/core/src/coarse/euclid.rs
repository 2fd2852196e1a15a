use num_rational::Ratio;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::{GroupSpace, MetricSpace, PointMap};
use crate::error::{Error, Result};
use crate::groups::Group;
use crate::metrics::{Ball, LinfNorm, NormScheme, Snowflake};
use crate::scalar::{real, Real};

/// `(1/q) Z^m` inside `R^m` with the l-infinity metric, in exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalGrid {
    pub dim: usize,
    pub denom: i64,
    pub budget: usize,
}

impl RationalGrid {
    pub fn new(dim: usize, denom: i64, budget: usize) -> Result<Self> {
        if dim == 0 || denom < 1 {
            return Err(Error::invalid(
                "grid needs dimension >= 1 and denominator >= 1",
            ));
        }
        Ok(RationalGrid { dim, denom, budget })
    }

    pub fn point(&self, coords: &[(i64, i64)]) -> Result<Vec<Ratio<i64>>> {
        if coords.len() != self.dim {
            return Err(Error::invalid(format!("expected {} coordinates", self.dim)));
        }
        coords
            .iter()
            .map(|&(p, q)| {
                let r = Ratio::new(p, q);
                if (r * self.denom).is_integer() {
                    Ok(r)
                } else {
                    Err(Error::invalid(format!(
                        "{r} is not on the 1/{} grid",
                        self.denom
                    )))
                }
            })
            .collect()
    }
}

impl MetricSpace for RationalGrid {
    type Point = Vec<Ratio<i64>>;
    type Dist = Ratio<i64>;

    fn distance(&self, a: &Self::Point, b: &Self::Point) -> Result<Ratio<i64>> {
        Ok(a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .max()
            .unwrap_or_else(Ratio::zero))
    }

    fn base_point(&self) -> Self::Point {
        vec![Ratio::zero(); self.dim]
    }

    fn ball_around(
        &self,
        center: &Self::Point,
        radius: Ratio<i64>,
    ) -> Result<Vec<(Ratio<i64>, Self::Point)>> {
        let k = (radius * self.denom).floor().to_integer();
        if k < 0 {
            return Ok(Vec::new());
        }
        let side = (2 * k + 1) as usize;
        let total = side
            .checked_pow(self.dim as u32)
            .filter(|t| *t <= self.budget);
        let total = total.ok_or(Error::BudgetExceeded {
            limit: self.budget,
            lower_bound: None,
        })?;
        let mut out = Vec::with_capacity(total);
        for idx in 0..total {
            let mut rest = idx;
            let mut p = Vec::with_capacity(self.dim);
            let mut d = 0;
            for c in center {
                let off = (rest % side) as i64 - k;
                rest /= side;
                d = d.max(off.abs());
                p.push(c + Ratio::new(off, self.denom));
            }
            out.push((Ratio::new(d, self.denom), p));
        }
        Ok(out)
    }

    fn name(&self) -> String {
        format!("(1/{}) Z^{} in R^{}", self.denom, self.dim, self.dim)
    }
}

/// Coordinatewise floor from the rational grid onto `Z^m` (l-infinity on both sides).
pub fn integer_part_map(
    dim: usize,
    denom: i64,
    budget: usize,
) -> Result<PointMap<RationalGrid, GroupSpace<LinfNorm<i64>>>> {
    let grid = RationalGrid::new(dim, denom, budget)?;
    let target = GroupSpace::new(LinfNorm::<i64>::new(dim, budget));
    Ok(PointMap::new(
        "integer part",
        grid,
        target,
        |x: &Vec<Ratio<i64>>| Ok(x.iter().map(|r| r.floor().to_integer()).collect()),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetParams {
    /// Refinement sweeps after the net construction.
    pub iterations: usize,
    /// Distortion above which the result is flagged.
    pub max_distortion: f64,
}

impl Default for NetParams {
    fn default() -> Self {
        NetParams {
            iterations: 400,
            max_distortion: 4.0,
        }
    }
}

/// A heuristic embedding of a snowflaked finite metric space into `R^m`.
/// No guarantee is claimed; `distortion` is measured over all pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct NetEmbedding<F> {
    pub dim: usize,
    pub coords: Vec<Vec<F>>,
    /// After the optimal rescaling, `(1/L) sqrt(d) <= |phi x - phi y| <= L sqrt(d)`.
    pub distortion: F,
    pub min_ratio: F,
    pub max_ratio: F,
    /// Net sizes at scales `1, 2, 4, ...`.
    pub net_sizes: Vec<usize>,
    pub flagged: bool,
}

fn norm2<F: Real>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .fold(F::zero(), |s, (x, y)| s + (*x - *y) * (*x - *y))
        .sqrt()
}

fn ratios<F: Real>(coords: &[Vec<F>], target: &[Vec<F>]) -> (F, F) {
    let n = coords.len();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut lo = F::infinity();
            let mut hi = F::zero();
            for j in i + 1..n {
                let r = norm2(&coords[i], &coords[j]) / target[i][j];
                lo = lo.min(r);
                hi = hi.max(r);
            }
            (lo, hi)
        })
        .reduce(
            || (F::infinity(), F::zero()),
            |a, b| (a.0.min(b.0), a.1.max(b.1)),
        )
}

/// Greedy nets at scales `2^k` with bump coordinates (colours spread nearby net
/// points over the `m` axes), then refined by gradient steps on the squared log
/// distortion of every pair.
pub fn net_embedding<N: NormScheme, F: Real>(
    space: &Snowflake<N>,
    ball: &Ball<<N::G as Group>::Elem>,
    dim: usize,
    params: &NetParams,
) -> Result<NetEmbedding<F>> {
    if dim == 0 {
        return Err(Error::invalid("target dimension must be at least 1"));
    }
    let pts = ball.elements();
    let n = pts.len();
    let d: Vec<Vec<u64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| space.inner().distance(&pts[i], &pts[j]))
                .collect::<Result<Vec<u64>>>()
        })
        .collect::<Result<_>>()?;
    let target: Vec<Vec<F>> = d
        .iter()
        .map(|row| row.iter().map(|v| real::<F>(*v as f64).sqrt()).collect())
        .collect();
    let diam = d.iter().flatten().copied().max().unwrap_or(0);
    let mut coords = vec![vec![F::zero(); dim]; n];
    let mut net_sizes = Vec::new();
    let mut scale = 1u64;
    while scale <= diam.max(1) {
        let mut net: Vec<usize> = Vec::new();
        for i in 0..n {
            if net.iter().all(|&c| d[c][i] >= scale) {
                net.push(i);
            }
        }
        let mut colour = vec![0usize; net.len()];
        for a in 0..net.len() {
            let mut used = vec![0usize; dim];
            for b in 0..a {
                if d[net[a]][net[b]] <= 4 * scale {
                    used[colour[b]] += 1;
                }
            }
            colour[a] = (0..dim).min_by_key(|&c| (used[c], c)).unwrap_or(0);
        }
        let amp = real::<F>(scale as f64).sqrt();
        let width = real::<F>(2.0 * scale as f64);
        for (i, row) in coords.iter_mut().enumerate() {
            for (a, &c) in net.iter().enumerate() {
                let t = F::one() - real::<F>(d[i][c] as f64) / width;
                if t > F::zero() {
                    row[colour[a]] = row[colour[a]] + amp * t;
                }
            }
        }
        net_sizes.push(net.len());
        scale *= 2;
    }
    // a generic perturbation keeps distinct points apart before refining
    for (i, row) in coords.iter_mut().enumerate() {
        for (k, v) in row.iter_mut().enumerate() {
            *v = *v + real::<F>(1e-3 * (((i * 7919 + k * 104729) % 1000) as f64 / 1000.0));
        }
    }
    if n > 1 {
        let step = real::<F>(0.5 / n as f64);
        for _ in 0..params.iterations {
            let grads: Vec<Vec<F>> = (0..n)
                .into_par_iter()
                .map(|i| {
                    let mut g = vec![F::zero(); dim];
                    for j in 0..n {
                        if i == j {
                            continue;
                        }
                        let len = norm2(&coords[i], &coords[j]).max(real(1e-9));
                        let err = (len / target[i][j]).ln();
                        let w = err / (len * len);
                        for k in 0..dim {
                            g[k] = g[k] + w * (coords[i][k] - coords[j][k]);
                        }
                    }
                    g
                })
                .collect();
            for (row, g) in coords.iter_mut().zip(&grads) {
                for (v, gk) in row.iter_mut().zip(g) {
                    *v = *v - step * *gk;
                }
            }
        }
    }
    let (lo, hi) = if n > 1 {
        ratios(&coords, &target)
    } else {
        (F::one(), F::one())
    };
    let distortion = if lo > F::zero() {
        (hi / lo).sqrt()
    } else {
        F::infinity()
    };
    Ok(NetEmbedding {
        dim,
        coords,
        distortion,
        min_ratio: lo,
        max_ratio: hi,
        net_sizes,
        flagged: !(distortion <= real::<F>(params.max_distortion)),
    })
}
