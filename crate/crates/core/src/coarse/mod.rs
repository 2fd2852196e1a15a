//! Metric spaces, evaluable maps, continuity moduli and coarse-equivalence certificates.
//!
//! Moduli are computed over pairs: the supremum of `diam f(A)` over sets with
//! `diam A <= delta` equals the supremum over two-point sets.

mod bornology;
mod euclid;
mod sum;
mod verify;

use std::collections::HashSet;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groups::Group;
use crate::metrics::NormScheme;
use crate::scalar::Distance;

pub use bornology::{
    inversion_bornologity_check, multiplication_bornologity_check, BornologyReport,
    BornologyVerdict,
};
pub use euclid::{integer_part_map, net_embedding, NetEmbedding, NetParams, RationalGrid};
pub use sum::SumSpace;
pub use verify::{
    continuity_modulus, continuity_modulus_from_identity, embedding_multiplicity, qi_fit,
    verify_certificate, CertificateReport, CoarseCertificate, ModulusReport, QiFit, RoundTrip,
};

/// A metric space whose balls can be enumerated.
pub trait MetricSpace: Clone + Send + Sync {
    type Point: Clone + Debug + Eq + Ord + Hash + Send + Sync + 'static;
    type Dist: Distance;

    fn distance(&self, a: &Self::Point, b: &Self::Point) -> Result<Self::Dist>;

    fn base_point(&self) -> Self::Point;

    /// Points within `radius` of `center`, with their distances.
    fn ball_around(
        &self,
        center: &Self::Point,
        radius: Self::Dist,
    ) -> Result<Vec<(Self::Dist, Self::Point)>>;

    /// Sorted closed ball around the base point.
    fn ball(&self, radius: Self::Dist) -> Result<Vec<Self::Point>> {
        let mut pts: Vec<Self::Point> = self
            .ball_around(&self.base_point(), radius)?
            .into_iter()
            .map(|(_, p)| p)
            .collect();
        pts.sort();
        Ok(pts)
    }

    /// Neighbours at distance one when the metric is a graph path metric.
    fn unit_neighbors(&self, _p: &Self::Point) -> Option<Result<Vec<Self::Point>>> {
        None
    }

    fn diameter(&self, pts: &[Self::Point]) -> Result<Self::Dist> {
        let mut best = Self::Dist::zero();
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                best = best.max(self.distance(a, b)?);
            }
        }
        Ok(best)
    }

    fn name(&self) -> String;
}

/// A group with a norm, as a metric space.
pub struct GroupSpace<N: NormScheme> {
    norm: Arc<N>,
}

impl<N: NormScheme> Clone for GroupSpace<N> {
    fn clone(&self) -> Self {
        GroupSpace {
            norm: self.norm.clone(),
        }
    }
}

impl<N: NormScheme> GroupSpace<N> {
    pub fn new(norm: N) -> Self {
        GroupSpace {
            norm: Arc::new(norm),
        }
    }

    pub fn shared(norm: Arc<N>) -> Self {
        GroupSpace { norm }
    }

    pub fn norm(&self) -> &Arc<N> {
        &self.norm
    }

    pub fn group(&self) -> &N::G {
        self.norm.group()
    }
}

impl<N: NormScheme> MetricSpace for GroupSpace<N> {
    type Point = <N::G as Group>::Elem;
    type Dist = u64;

    fn distance(&self, a: &Self::Point, b: &Self::Point) -> Result<u64> {
        self.norm.distance(a, b)
    }

    fn base_point(&self) -> Self::Point {
        self.norm.group().identity()
    }

    fn ball_around(&self, center: &Self::Point, radius: u64) -> Result<Vec<(u64, Self::Point)>> {
        let g = self.norm.group();
        let ball = self.norm.ball(radius)?;
        ball.points
            .iter()
            .map(|(n, e)| Ok((*n, g.mul(center, e)?)))
            .collect()
    }

    fn ball(&self, radius: u64) -> Result<Vec<Self::Point>> {
        let mut pts = self.norm.ball(radius)?.elements();
        pts.sort();
        Ok(pts)
    }

    fn unit_neighbors(&self, p: &Self::Point) -> Option<Result<Vec<Self::Point>>> {
        let steps = self.norm.unit_steps()?;
        let g = self.norm.group();
        Some(steps.iter().map(|s| g.mul(p, s)).collect())
    }

    fn diameter(&self, pts: &[Self::Point]) -> Result<u64> {
        if let Some(d) = self.norm.diameter_hint(pts) {
            return d;
        }
        let mut best = 0;
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                best = best.max(self.distance(a, b)?);
            }
        }
        Ok(best)
    }

    fn name(&self) -> String {
        self.norm.name()
    }
}

/// `X x Y` with the max metric.
#[derive(Clone)]
pub struct ProductSpace<X, Y> {
    pub left: X,
    pub right: Y,
}

impl<X: MetricSpace, Y: MetricSpace<Dist = X::Dist>> ProductSpace<X, Y> {
    pub fn new(left: X, right: Y) -> Self {
        ProductSpace { left, right }
    }
}

impl<X: MetricSpace, Y: MetricSpace<Dist = X::Dist>> MetricSpace for ProductSpace<X, Y> {
    type Point = (X::Point, Y::Point);
    type Dist = X::Dist;

    fn distance(&self, a: &Self::Point, b: &Self::Point) -> Result<X::Dist> {
        Ok(self
            .left
            .distance(&a.0, &b.0)?
            .max(self.right.distance(&a.1, &b.1)?))
    }

    fn base_point(&self) -> Self::Point {
        (self.left.base_point(), self.right.base_point())
    }

    fn ball_around(
        &self,
        center: &Self::Point,
        radius: X::Dist,
    ) -> Result<Vec<(X::Dist, Self::Point)>> {
        let a = self.left.ball_around(&center.0, radius)?;
        let b = self.right.ball_around(&center.1, radius)?;
        let mut out = Vec::with_capacity(a.len() * b.len());
        for (da, x) in &a {
            for (db, y) in &b {
                out.push(((*da).max(*db), (x.clone(), y.clone())));
            }
        }
        Ok(out)
    }

    fn unit_neighbors(&self, p: &Self::Point) -> Option<Result<Vec<Self::Point>>> {
        let run = || -> Option<Result<Vec<Self::Point>>> {
            let s = match self.left.unit_neighbors(&p.0)? {
                Ok(s) => s,
                Err(e) => return Some(Err(e)),
            };
            let t = match self.right.unit_neighbors(&p.1)? {
                Ok(t) => t,
                Err(e) => return Some(Err(e)),
            };
            let mut out: Vec<Self::Point> = s.iter().map(|a| (a.clone(), p.1.clone())).collect();
            out.extend(t.iter().map(|b| (p.0.clone(), b.clone())));
            for a in &s {
                for b in &t {
                    out.push((a.clone(), b.clone()));
                }
            }
            Some(Ok(out))
        };
        run()
    }

    fn diameter(&self, pts: &[Self::Point]) -> Result<X::Dist> {
        let xs: Vec<X::Point> = pts
            .iter()
            .map(|p| p.0.clone())
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        let ys: Vec<Y::Point> = pts
            .iter()
            .map(|p| p.1.clone())
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        // exact only for full rectangles; fall back to pairs otherwise
        if xs.len() * ys.len() == pts.len() {
            Ok(self.left.diameter(&xs)?.max(self.right.diameter(&ys)?))
        } else {
            let mut best = X::Dist::zero();
            for (i, a) in pts.iter().enumerate() {
                for b in &pts[i + 1..] {
                    best = best.max(self.distance(a, b)?);
                }
            }
            Ok(best)
        }
    }

    fn name(&self) -> String {
        format!("{} x {}", self.left.name(), self.right.name())
    }
}

type DistFn<P> = dyn Fn(&P, &P) -> u64 + Send + Sync;

/// A finite metric space given by its points and a distance function.
pub struct FiniteSpace<P> {
    points: Arc<Vec<P>>,
    dist: Arc<DistFn<P>>,
    label: String,
}

impl<P> Clone for FiniteSpace<P> {
    fn clone(&self) -> Self {
        FiniteSpace {
            points: self.points.clone(),
            dist: self.dist.clone(),
            label: self.label.clone(),
        }
    }
}

impl<P: Clone + Debug + Eq + Ord + Hash + Send + Sync + 'static> FiniteSpace<P> {
    pub fn new(
        label: impl Into<String>,
        mut points: Vec<P>,
        dist: impl Fn(&P, &P) -> u64 + Send + Sync + 'static,
    ) -> Result<Self> {
        points.sort();
        points.dedup();
        if points.is_empty() {
            return Err(Error::invalid("a finite space needs at least one point"));
        }
        Ok(FiniteSpace {
            points: Arc::new(points),
            dist: Arc::new(dist),
            label: label.into(),
        })
    }

    pub fn points(&self) -> &[P] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl<P: Clone + Debug + Eq + Ord + Hash + Send + Sync + 'static> MetricSpace for FiniteSpace<P> {
    type Point = P;
    type Dist = u64;

    fn distance(&self, a: &P, b: &P) -> Result<u64> {
        Ok((self.dist)(a, b))
    }

    fn base_point(&self) -> P {
        self.points[0].clone()
    }

    fn ball_around(&self, center: &P, radius: u64) -> Result<Vec<(u64, P)>> {
        Ok(self
            .points
            .iter()
            .filter_map(|p| {
                let d = (self.dist)(center, p);
                (d <= radius).then(|| (d, p.clone()))
            })
            .collect())
    }

    fn name(&self) -> String {
        self.label.clone()
    }
}

type EvalFn<X, Y> =
    dyn Fn(&<X as MetricSpace>::Point) -> Result<<Y as MetricSpace>::Point> + Send + Sync;

/// An evaluable map between metric spaces.
pub struct PointMap<X: MetricSpace, Y: MetricSpace> {
    pub name: String,
    pub domain: X,
    pub codomain: Y,
    eval: Arc<EvalFn<X, Y>>,
    inverse: Option<Arc<EvalFn<Y, X>>>,
    /// Claimed, not proved; the verifier checks it on windows.
    pub bijective: bool,
}

impl<X: MetricSpace, Y: MetricSpace> Clone for PointMap<X, Y> {
    fn clone(&self) -> Self {
        PointMap {
            name: self.name.clone(),
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            eval: self.eval.clone(),
            inverse: self.inverse.clone(),
            bijective: self.bijective,
        }
    }
}

impl<X: MetricSpace, Y: MetricSpace> PointMap<X, Y> {
    pub fn new(
        name: impl Into<String>,
        domain: X,
        codomain: Y,
        eval: impl Fn(&X::Point) -> Result<Y::Point> + Send + Sync + 'static,
    ) -> Self {
        PointMap {
            name: name.into(),
            domain,
            codomain,
            eval: Arc::new(eval),
            inverse: None,
            bijective: false,
        }
    }

    /// Declares an inverse and claims bijectivity.
    pub fn with_inverse(
        mut self,
        inverse: impl Fn(&Y::Point) -> Result<X::Point> + Send + Sync + 'static,
    ) -> Self {
        self.inverse = Some(Arc::new(inverse));
        self.bijective = true;
        self
    }

    pub fn apply(&self, x: &X::Point) -> Result<Y::Point> {
        (self.eval)(x)
    }

    pub fn has_inverse(&self) -> bool {
        self.inverse.is_some()
    }

    pub fn apply_inverse(&self, y: &Y::Point) -> Result<X::Point> {
        match &self.inverse {
            Some(g) => g(y),
            None => Err(Error::invalid(format!(
                "{} has no declared inverse",
                self.name
            ))),
        }
    }

    /// The declared inverse as a map in the other direction.
    pub fn inverse_map(&self) -> Result<PointMap<Y, X>> {
        let inv = self
            .inverse
            .clone()
            .ok_or_else(|| Error::invalid(format!("{} has no declared inverse", self.name)))?;
        let fwd = self.eval.clone();
        Ok(PointMap {
            name: format!("{} inverse", self.name),
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            eval: inv,
            inverse: Some(fwd),
            bijective: self.bijective,
        })
    }

    /// `g o f`
    pub fn then<Z: MetricSpace>(&self, g: &PointMap<Y, Z>) -> PointMap<X, Z> {
        let (f1, g1) = (self.eval.clone(), g.eval.clone());
        let mut out = PointMap::new(
            format!("{} then {}", self.name, g.name),
            self.domain.clone(),
            g.codomain.clone(),
            move |x| g1(&f1(x)?),
        );
        if let (Some(fi), Some(gi)) = (self.inverse.clone(), g.inverse.clone()) {
            out = out.with_inverse(move |z| fi(&gi(z)?));
            out.bijective = self.bijective && g.bijective;
        }
        out
    }

    pub fn identity(space: X) -> PointMap<X, X> {
        PointMap::new("identity", space.clone(), space, |x| Ok(x.clone()))
            .with_inverse(|x| Ok(x.clone()))
    }
}

/// `f x g` between product spaces.
pub fn product_map<X1, Y1, X2, Y2>(
    f: &PointMap<X1, Y1>,
    g: &PointMap<X2, Y2>,
) -> PointMap<ProductSpace<X1, X2>, ProductSpace<Y1, Y2>>
where
    X1: MetricSpace,
    Y1: MetricSpace,
    X2: MetricSpace<Dist = X1::Dist>,
    Y2: MetricSpace<Dist = Y1::Dist>,
{
    let (fe, ge) = (f.eval.clone(), g.eval.clone());
    let mut out = PointMap::new(
        format!("{} x {}", f.name, g.name),
        ProductSpace::new(f.domain.clone(), g.domain.clone()),
        ProductSpace::new(f.codomain.clone(), g.codomain.clone()),
        move |p: &(X1::Point, X2::Point)| Ok((fe(&p.0)?, ge(&p.1)?)),
    );
    if let (Some(fi), Some(gi)) = (f.inverse.clone(), g.inverse.clone()) {
        out = out.with_inverse(move |q: &(Y1::Point, Y2::Point)| Ok((fi(&q.0)?, gi(&q.1)?)));
        out.bijective = f.bijective && g.bijective;
    }
    out
}
