use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::coarse::{qi_fit, GroupSpace, PointMap};
use crate::error::{Error, Result};
use crate::groups::Group;
use crate::metrics::{GrowthProfile, NormScheme, WordNorm};
use crate::scalar::{real, Real};

/// `|S^n| ~ C n^d` fitted on a tail of the profile.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthFit<F> {
    pub degree: F,
    /// `max |S^n| / n^d` over the tail.
    pub constant: F,
    /// Root mean square of the log residuals.
    pub residual: F,
    pub tail: (usize, usize),
}

/// Least squares of `log y` against `log x`: `(slope, intercept, rms residual)`.
fn loglog<F: Real>(points: &[(u64, u64)]) -> (F, F, F) {
    let n = real::<F>(points.len() as f64);
    let xs: Vec<F> = points.iter().map(|p| real::<F>(p.0 as f64).ln()).collect();
    let ys: Vec<F> = points.iter().map(|p| real::<F>(p.1 as f64).ln()).collect();
    let mx = xs.iter().fold(F::zero(), |a, b| a + *b) / n;
    let my = ys.iter().fold(F::zero(), |a, b| a + *b) / n;
    let sxx = xs.iter().fold(F::zero(), |a, x| a + (*x - mx) * (*x - mx));
    let sxy = xs
        .iter()
        .zip(&ys)
        .fold(F::zero(), |a, (x, y)| a + (*x - mx) * (*y - my));
    let slope = if sxx > F::zero() {
        sxy / sxx
    } else {
        F::zero()
    };
    let icpt = my - slope * mx;
    let ss = xs.iter().zip(&ys).fold(F::zero(), |a, (x, y)| {
        let r = *y - (icpt + slope * *x);
        a + r * r
    });
    (slope, icpt, (ss / n).sqrt())
}

/// Fit on the last `tail_fraction` of the profile.
pub fn growth_fit<F: Real>(profile: &GrowthProfile, tail_fraction: f64) -> Result<GrowthFit<F>> {
    let max_n = profile.max_n();
    if !(0.0..=1.0).contains(&tail_fraction) || tail_fraction == 0.0 {
        return Err(Error::invalid("tail fraction must be in (0, 1]"));
    }
    let lo = ((max_n as f64) * (1.0 - tail_fraction)).ceil().max(1.0) as usize;
    growth_fit_range(profile, lo, max_n)
}

/// Fit on `lo <= n <= hi`.
pub fn growth_fit_range<F: Real>(
    profile: &GrowthProfile,
    lo: usize,
    hi: usize,
) -> Result<GrowthFit<F>> {
    if profile.sizes.len() < 8 {
        return Err(Error::invalid(format!(
            "growth profile too short: {} terms, need 8",
            profile.sizes.len()
        )));
    }
    let lo = lo.max(1);
    if hi > profile.max_n() || lo >= hi {
        return Err(Error::invalid(format!(
            "tail [{lo}, {hi}] outside profile 0..={}",
            profile.max_n()
        )));
    }
    let pts: Vec<(u64, u64)> = (lo..=hi).map(|n| (n as u64, profile.sizes[n])).collect();
    let (d, _, residual) = if pts.iter().all(|p| p.1 == pts[0].1) {
        (F::zero(), F::zero(), F::zero())
    } else {
        loglog::<F>(&pts)
    };
    let constant = pts.iter().fold(F::zero(), |a, (n, s)| {
        a.max(real::<F>(*s as f64) / real::<F>(*n as f64).powf(d))
    });
    Ok(GrowthFit {
        degree: d,
        constant,
        residual,
        tail: (lo, hi),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DistortionRow {
    /// Intrinsic norm.
    pub n: u64,
    /// Least and largest ambient norm over subgroup elements of intrinsic norm `n`.
    pub min: u64,
    pub max: u64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistortionProfile<F> {
    pub generators: usize,
    pub rows: Vec<DistortionRow>,
    /// Slope of `log max` against `log n` over the upper half of the rows.
    pub exponent: F,
}

/// Intrinsic versus ambient norms for the subgroup generated by `sub`.
pub fn distortion_profile<N: NormScheme, F: Real>(
    ambient: &N,
    sub: &[<N::G as Group>::Elem],
    max_n: u64,
    budget: usize,
) -> Result<DistortionProfile<F>> {
    let inner = WordNorm::new(ambient.group().clone(), sub, budget)?;
    let ball = inner.ball(max_n)?;
    let normed: Vec<(u64, u64)> = ball
        .points
        .par_iter()
        .map(|(n, e)| Ok((*n, ambient.norm(e)?)))
        .collect::<Result<_>>()?;
    let mut rows: BTreeMap<u64, DistortionRow> = BTreeMap::new();
    for (n, a) in normed {
        if n == 0 {
            continue;
        }
        let r = rows.entry(n).or_insert(DistortionRow {
            n,
            min: a,
            max: a,
            count: 0,
        });
        r.min = r.min.min(a);
        r.max = r.max.max(a);
        r.count += 1;
    }
    let rows: Vec<DistortionRow> = rows.into_values().collect();
    let top = rows.last().map(|r| r.n).unwrap_or(0);
    let tail: Vec<(u64, u64)> = rows
        .iter()
        .filter(|r| 2 * r.n >= top)
        .map(|r| (r.n, r.max))
        .collect();
    let exponent = if tail.len() >= 2 {
        loglog::<F>(&tail).0
    } else {
        F::one()
    };
    Ok(DistortionProfile {
        generators: inner.generators().len(),
        rows,
        exponent,
    })
}

/// Quasi-isometry fits of one inclusion `G_i -> G_{i+1}` over growing windows.
#[derive(Debug, Clone, PartialEq)]
pub struct InclusionVerdict<F> {
    pub index: usize,
    /// `(R, L, C)`
    pub fits: Vec<(u64, F, F)>,
    pub degrading: bool,
    pub undistorted: bool,
}

/// Checks each inclusion of a chain of word norms on the same group.
pub fn undistorted_chain_check<G: Group, N, F: Real>(
    levels: &[Arc<N>],
    windows: &[u64],
) -> Result<Vec<InclusionVerdict<F>>>
where
    N: NormScheme<G = G> + 'static,
{
    let mut out = Vec::new();
    for (i, pair) in levels.windows(2).enumerate() {
        let f = PointMap::new(
            format!("inclusion {i}"),
            GroupSpace::shared(pair[0].clone()),
            GroupSpace::shared(pair[1].clone()),
            |x| Ok(x.clone()),
        );
        let mut fits = Vec::new();
        let mut degrading = false;
        for &r in windows {
            let fit = qi_fit::<F, _, _>(&f, r)?;
            degrading |= fit.degrading;
            fits.push((r, fit.l, fit.c));
        }
        if let (Some(first), Some(last)) = (fits.first(), fits.last()) {
            degrading |= last.1 > real::<F>(1.1) * first.1;
        }
        out.push(InclusionVerdict {
            index: i,
            fits,
            degrading,
            undistorted: !degrading,
        });
    }
    Ok(out)
}
