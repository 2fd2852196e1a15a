use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::{MetricSpace, PointMap};
use crate::error::{Error, Result};
use crate::scalar::{real, Distance, Real};

/// `omega_f(delta)` on a grid, exact over pairs inside the ball `B_R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulusReport<P, Dx, Dy> {
    pub radius: Dx,
    pub deltas: Vec<Dx>,
    pub omega: Vec<Dy>,
    /// The pair realising each value (`None` when no pair is that close).
    pub witnesses: Vec<Option<(P, P)>>,
    pub points: usize,
}

impl<P, Dx: Distance, Dy: Distance> ModulusReport<P, Dx, Dy> {
    pub fn at(&self, delta: Dx) -> Option<Dy> {
        self.deltas
            .iter()
            .position(|d| *d == delta)
            .map(|i| self.omega[i])
    }
}

type Best<P, D> = Option<(D, (P, P))>;

fn better<P: Ord, D: Ord>(cand: &(D, (P, P)), cur: &Best<P, D>) -> bool {
    match cur {
        None => true,
        Some((d, w)) => cand.0 > *d || (cand.0 == *d && cand.1 < *w),
    }
}

fn merge<P: Ord + Clone, D: Ord + Copy>(
    mut a: Vec<Best<P, D>>,
    b: Vec<Best<P, D>>,
) -> Vec<Best<P, D>> {
    for (x, y) in a.iter_mut().zip(b) {
        if let Some(c) = y {
            if better(&c, x) {
                *x = Some(c);
            }
        }
    }
    a
}

fn finish<P: Clone, Dx: Distance, Dy: Distance>(
    radius: Dx,
    deltas: Vec<Dx>,
    best: Vec<Best<P, Dy>>,
    points: usize,
) -> ModulusReport<P, Dx, Dy> {
    let mut omega = Vec::with_capacity(deltas.len());
    let mut witnesses = Vec::with_capacity(deltas.len());
    let mut run: Best<P, Dy> = None;
    for b in best {
        if let Some((d, w)) = b {
            if run.as_ref().is_none_or(|(r, _)| d > *r) {
                run = Some((d, w));
            }
        }
        omega.push(run.as_ref().map(|(d, _)| *d).unwrap_or(Dy::zero()));
        witnesses.push(run.as_ref().map(|(_, w)| w.clone()));
    }
    ModulusReport {
        radius,
        deltas,
        omega,
        witnesses,
        points,
    }
}

fn grid<D: Distance>(deltas: &[D]) -> Result<Vec<D>> {
    let mut d = deltas.to_vec();
    d.sort();
    d.dedup();
    if d.is_empty() {
        return Err(Error::invalid("empty delta grid"));
    }
    Ok(d)
}

/// Exact continuity modulus of `f` over all pairs in `B_R` with `d(x, y) <= delta`.
pub fn continuity_modulus<X: MetricSpace, Y: MetricSpace>(
    f: &PointMap<X, Y>,
    deltas: &[X::Dist],
    radius: X::Dist,
) -> Result<ModulusReport<X::Point, X::Dist, Y::Dist>> {
    let deltas = grid(deltas)?;
    let dmax = *deltas.last().expect("nonempty grid");
    let pts = f.domain.ball(radius)?;
    let images: HashMap<X::Point, Y::Point> = pts
        .par_iter()
        .map(|x| Ok((x.clone(), f.apply(x)?)))
        .collect::<Result<_>>()?;
    let k = deltas.len();
    let best = pts
        .par_iter()
        .try_fold(
            || vec![None; k],
            |mut acc: Vec<Best<X::Point, Y::Dist>>, x| -> Result<_> {
                let fx = &images[x];
                for (dx, y) in f.domain.ball_around(x, dmax)? {
                    if y <= *x {
                        continue;
                    }
                    let Some(fy) = images.get(&y) else { continue };
                    let i = deltas.partition_point(|d| *d < dx);
                    if i == k {
                        continue;
                    }
                    let cand = (f.codomain.distance(fx, fy)?, (x.clone(), y));
                    if better(&cand, &acc[i]) {
                        acc[i] = Some(cand);
                    }
                }
                Ok(acc)
            },
        )
        .try_reduce(|| vec![None; k], |a, b| Ok(merge(a, b)))?;
    Ok(finish(radius, deltas, best, pts.len()))
}

/// Modulus from the pairs `(base, y)` only. Equals the full scan for maps that
/// commute with left translations (homomorphisms between groups, for example).
pub fn continuity_modulus_from_identity<X: MetricSpace, Y: MetricSpace>(
    f: &PointMap<X, Y>,
    deltas: &[X::Dist],
) -> Result<ModulusReport<X::Point, X::Dist, Y::Dist>> {
    let deltas = grid(deltas)?;
    let dmax = *deltas.last().expect("nonempty grid");
    let o = f.domain.base_point();
    let fo = f.apply(&o)?;
    let k = deltas.len();
    let mut best: Vec<Best<X::Point, Y::Dist>> = vec![None; k];
    let ball = f.domain.ball_around(&o, dmax)?;
    for (dx, y) in &ball {
        let i = deltas.partition_point(|d| *d < *dx);
        if i == k || *y == o {
            continue;
        }
        let cand = (
            f.codomain.distance(&fo, &f.apply(y)?)?,
            (o.clone(), y.clone()),
        );
        if better(&cand, &best[i]) {
            best[i] = Some(cand);
        }
    }
    Ok(finish(dmax, deltas, best, ball.len()))
}

type Bound<A, B> = Arc<dyn Fn(A) -> B + Send + Sync>;

/// A pair of maps claimed to be a coarse equivalence with round-trip constant `k`.
pub struct CoarseCertificate<X: MetricSpace, Y: MetricSpace> {
    pub f: PointMap<X, Y>,
    pub g: PointMap<Y, X>,
    pub k: u64,
    /// Claimed bound `omega_f(delta) <= bound(delta)`; checked on the window.
    pub f_bound: Option<Bound<X::Dist, Y::Dist>>,
    pub g_bound: Option<Bound<Y::Dist, X::Dist>>,
}

impl<X: MetricSpace, Y: MetricSpace> Clone for CoarseCertificate<X, Y> {
    fn clone(&self) -> Self {
        CoarseCertificate {
            f: self.f.clone(),
            g: self.g.clone(),
            k: self.k,
            f_bound: self.f_bound.clone(),
            g_bound: self.g_bound.clone(),
        }
    }
}

impl<X: MetricSpace, Y: MetricSpace> CoarseCertificate<X, Y> {
    pub fn new(f: PointMap<X, Y>, g: PointMap<Y, X>, k: u64) -> Self {
        CoarseCertificate {
            f,
            g,
            k,
            f_bound: None,
            g_bound: None,
        }
    }

    /// Certificate of a bijection with its declared inverse (`K = 0`).
    pub fn bijection(f: PointMap<X, Y>) -> Result<Self> {
        let g = f.inverse_map()?;
        Ok(Self::new(f, g, 0))
    }

    pub fn with_bounds(
        mut self,
        f_bound: impl Fn(X::Dist) -> Y::Dist + Send + Sync + 'static,
        g_bound: impl Fn(Y::Dist) -> X::Dist + Send + Sync + 'static,
    ) -> Self {
        self.f_bound = Some(Arc::new(f_bound));
        self.g_bound = Some(Arc::new(g_bound));
        self
    }
}

/// Largest displacement `d(g f x, x)` over a ball.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTrip<P, D> {
    pub max: D,
    pub witness: Option<P>,
    pub points: usize,
}

fn round_trip<X: MetricSpace, Y: MetricSpace>(
    f: &PointMap<X, Y>,
    g: &PointMap<Y, X>,
    radius: X::Dist,
) -> Result<RoundTrip<X::Point, X::Dist>> {
    let pts = f.domain.ball(radius)?;
    let best = pts
        .par_iter()
        .map(|x| -> Result<(X::Dist, Option<X::Point>)> {
            let back = g.apply(&f.apply(x)?)?;
            Ok((f.domain.distance(&back, x)?, Some(x.clone())))
        })
        .try_reduce(
            || (X::Dist::zero(), None),
            |a, b| {
                Ok(
                    if b.0 > a.0 || (b.0 == a.0 && b.0 > X::Dist::zero() && b.1 < a.1) {
                        b
                    } else {
                        a
                    },
                )
            },
        )?;
    let witness = if best.0 > X::Dist::zero() {
        best.1
    } else {
        None
    };
    Ok(RoundTrip {
        max: best.0,
        witness,
        points: pts.len(),
    })
}

/// Outcome of checking a certificate on finite windows.
#[derive(Debug, Clone)]
pub struct CertificateReport<X: MetricSpace, Y: MetricSpace> {
    pub passed: bool,
    pub k: u64,
    pub modulus_f: ModulusReport<X::Point, X::Dist, Y::Dist>,
    pub modulus_g: ModulusReport<Y::Point, Y::Dist, X::Dist>,
    /// Moduli on the half-size windows, used when no bound is declared.
    pub half_modulus_f: Option<ModulusReport<X::Point, X::Dist, Y::Dist>>,
    pub half_modulus_g: Option<ModulusReport<Y::Point, Y::Dist, X::Dist>>,
    pub roundtrip_x: RoundTrip<X::Point, X::Dist>,
    pub roundtrip_y: RoundTrip<Y::Point, Y::Dist>,
    pub failures: Vec<String>,
}

fn check_modulus<P: std::fmt::Debug + Clone, Dx: Distance, Dy: Distance>(
    label: &str,
    full: &ModulusReport<P, Dx, Dy>,
    bound: Option<&Bound<Dx, Dy>>,
    half: Option<&ModulusReport<P, Dx, Dy>>,
    failures: &mut Vec<String>,
) {
    for (i, d) in full.deltas.iter().enumerate() {
        let w = &full.witnesses[i];
        if let Some(b) = bound {
            let lim = b(*d);
            if full.omega[i] > lim {
                failures.push(format!(
                    "{label}: omega({d}) = {} exceeds declared {lim}, witness {w:?}",
                    full.omega[i]
                ));
            }
        } else if let Some(h) = half {
            if full.omega[i] > h.omega[i] {
                failures.push(format!(
                    "{label}: omega({d}) grows from {} at R = {} to {} at R = {}, witness {w:?}",
                    h.omega[i], h.radius, full.omega[i], full.radius
                ));
            }
        }
    }
}

/// Checks a certificate: both moduli bounded on the grid (declared bounds, or
/// unchanged between `B_{R/2}` and `B_R`) and both round trips within `K`.
pub fn verify_certificate<X: MetricSpace, Y: MetricSpace>(
    cert: &CoarseCertificate<X, Y>,
    radius_x: X::Dist,
    radius_y: Y::Dist,
    deltas_x: &[X::Dist],
    deltas_y: &[Y::Dist],
) -> Result<CertificateReport<X, Y>> {
    let modulus_f = continuity_modulus(&cert.f, deltas_x, radius_x)?;
    let modulus_g = continuity_modulus(&cert.g, deltas_y, radius_y)?;
    let half_modulus_f = match cert.f_bound {
        Some(_) => None,
        None => Some(continuity_modulus(&cert.f, deltas_x, radius_x.half())?),
    };
    let half_modulus_g = match cert.g_bound {
        Some(_) => None,
        None => Some(continuity_modulus(&cert.g, deltas_y, radius_y.half())?),
    };
    let roundtrip_x = round_trip(&cert.f, &cert.g, radius_x)?;
    let roundtrip_y = round_trip(&cert.g, &cert.f, radius_y)?;
    let mut failures = Vec::new();
    check_modulus(
        "f",
        &modulus_f,
        cert.f_bound.as_ref(),
        half_modulus_f.as_ref(),
        &mut failures,
    );
    check_modulus(
        "g",
        &modulus_g,
        cert.g_bound.as_ref(),
        half_modulus_g.as_ref(),
        &mut failures,
    );
    if roundtrip_x.max > X::Dist::from_u64(cert.k) {
        failures.push(format!(
            "d(g f x, x) = {} > K = {} at {:?}",
            roundtrip_x.max, cert.k, roundtrip_x.witness
        ));
    }
    if roundtrip_y.max > Y::Dist::from_u64(cert.k) {
        failures.push(format!(
            "d(f g y, y) = {} > K = {} at {:?}",
            roundtrip_y.max, cert.k, roundtrip_y.witness
        ));
    }
    Ok(CertificateReport {
        passed: failures.is_empty(),
        k: cert.k,
        modulus_f,
        modulus_g,
        half_modulus_f,
        half_modulus_g,
        roundtrip_x,
        roundtrip_y,
        failures,
    })
}

/// Fitted quasi-isometry constants on a window.
#[derive(Debug, Clone)]
pub struct QiFit<F, P> {
    pub l: F,
    pub c: F,
    pub radius: u64,
    /// Worst violation of the fitted inequalities with `C = 0`; equals `c`.
    pub slack: F,
    /// `L` fitted on the half window.
    pub l_half: F,
    /// `L` grows with the window: the map looks distorted.
    pub degrading: bool,
    pub binding_l: Option<(P, P)>,
    pub binding_c: Option<(P, P)>,
}

struct PairStats<F, P> {
    up: F,
    low: F,
    up_pair: Option<(P, P)>,
    low_pair: Option<(P, P)>,
    collapsed: Option<(P, P)>,
}

fn far_ratios<F: Real, P: Clone>(pairs: &[(u64, u64, P, P)], far: u64) -> PairStats<F, P> {
    let mut s = PairStats {
        up: F::zero(),
        low: F::zero(),
        up_pair: None,
        low_pair: None,
        collapsed: None,
    };
    for (dx, dy, x, y) in pairs {
        if *dx < far || *dx == 0 {
            continue;
        }
        if *dy == 0 {
            s.collapsed = Some((x.clone(), y.clone()));
            continue;
        }
        let up = real::<F>(*dy as f64) / real::<F>(*dx as f64);
        let low = real::<F>(*dx as f64) / real::<F>(*dy as f64);
        if up > s.up {
            s.up = up;
            s.up_pair = Some((x.clone(), y.clone()));
        }
        if low > s.low {
            s.low = low;
            s.low_pair = Some((x.clone(), y.clone()));
        }
    }
    s
}

/// Fits `(1/L) d - C <= d(f x, f x') <= L d + C` on all pairs of `B_R`.
///
/// `L` is the best multiplicative constant on far pairs (`d(x, x') >= R`); `C`
/// is then the least additive constant making both inequalities hold on every
/// pair. Minimising `L` first over all pairs would be degenerate on a finite
/// window (any `L` works once `C` absorbs the diameter).
pub fn qi_fit<F: Real, X, Y>(f: &PointMap<X, Y>, radius: u64) -> Result<QiFit<F, X::Point>>
where
    X: MetricSpace<Dist = u64>,
    Y: MetricSpace<Dist = u64>,
{
    let pts = f.domain.ball(radius)?;
    let images: Vec<Y::Point> = pts.par_iter().map(|x| f.apply(x)).collect::<Result<_>>()?;
    let pairs: Vec<(u64, u64, X::Point, X::Point)> = (0..pts.len())
        .into_par_iter()
        .map(|i| -> Result<Vec<_>> {
            let mut v = Vec::new();
            for j in i + 1..pts.len() {
                let dx = f.domain.distance(&pts[i], &pts[j])?;
                let dy = f.codomain.distance(&images[i], &images[j])?;
                v.push((dx, dy, pts[i].clone(), pts[j].clone()));
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let maxd = pairs.iter().map(|p| p.0).max().unwrap_or(0);
    let far = radius.min(maxd.div_ceil(2)).max(1);
    let full = far_ratios::<F, _>(&pairs, far);
    if let Some(w) = full.collapsed {
        return Err(Error::NotCoarse(format!("far pair {w:?} has equal images")));
    }
    let half_r = radius / 2;
    let half_pairs: Vec<_> = {
        let inside: std::collections::HashSet<&X::Point> = pts
            .iter()
            .filter(|p| {
                f.domain
                    .distance(&f.domain.base_point(), p)
                    .is_ok_and(|d| d <= half_r)
            })
            .collect();
        pairs
            .iter()
            .filter(|p| inside.contains(&p.2) && inside.contains(&p.3))
            .cloned()
            .collect()
    };
    let half_far = half_r
        .min(
            half_pairs
                .iter()
                .map(|p| p.0)
                .max()
                .unwrap_or(0)
                .div_ceil(2),
        )
        .max(1);
    let half = far_ratios::<F, _>(&half_pairs, half_far);
    let grow = real::<F>(1.5);
    if half.up > F::zero() && full.up > grow * half.up && full.up > real(2.0) {
        return Err(Error::NotCoarse(format!(
            "not asymptotically Lipschitz on window: upper ratio {} at R = {radius} vs {} at R = {half_r}",
            full.up, half.up
        )));
    }
    let l = F::one().max(full.up).max(full.low);
    let l_half = F::one().max(half.up).max(half.low);
    let binding_l = if full.up >= full.low {
        full.up_pair
    } else {
        full.low_pair
    };
    let mut c = F::zero();
    let mut binding_c = None;
    for (dx, dy, x, y) in &pairs {
        let (dx, dy) = (real::<F>(*dx as f64), real::<F>(*dy as f64));
        let v = (dy - l * dx).max(dx / l - dy);
        if v > c {
            c = v;
            binding_c = Some((x.clone(), y.clone()));
        }
    }
    Ok(QiFit {
        l,
        c,
        radius,
        slack: c,
        l_half,
        degrading: l > real::<F>(1.1) * l_half,
        binding_l,
        binding_c,
    })
}

/// Largest fibre of `f` on `B_R`, with one image attaining it.
pub fn embedding_multiplicity<X: MetricSpace, Y: MetricSpace>(
    f: &PointMap<X, Y>,
    radius: X::Dist,
) -> Result<(usize, Option<Y::Point>)> {
    let pts = f.domain.ball(radius)?;
    let mut counts: HashMap<Y::Point, usize> = HashMap::new();
    for x in &pts {
        *counts.entry(f.apply(x)?).or_default() += 1;
    }
    Ok(counts
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .map(|(y, n)| (n, Some(y)))
        .unwrap_or((0, None)))
}
