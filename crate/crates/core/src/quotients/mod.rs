//! Coset spaces `G/H` with `G`-invariant metrics, and sections of `G -> G/H`.

mod section;
mod subgroup;

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

use crate::analysis::{enumerate_set, ElemSet};
use crate::coarse::{GroupSpace, MetricSpace, PointMap};
use crate::error::{Error, Result};
use crate::groups::{coset_representatives, Chain, Group};
use crate::metrics::NormScheme;

pub use section::{section_bound_check, Alpha, Section, SectionBoundReport, SemigroupPredicate};
pub use subgroup::{
    ChainBase, FactorSubgroup, HeisenbergCenter, HeisenbergLine, Subgroup, TrivialSubgroup,
};

type Elem<G> = <G as Group>::Elem;

/// `F_x` with `x^-1 H x` inside `F_x H`, or the classes found before giving up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuasiNormality<E> {
    Witness(Vec<E>),
    /// Classes still appearing at the budget; `trace` is `(elements of H used, classes)`.
    Inconclusive {
        classes: Vec<E>,
        trace: Vec<(usize, usize)>,
    },
}

/// Enumerates `h` in `H` by norm and collects the cosets `x^-1 h x H`. The set
/// is returned as `F_x` when the second half of the budget adds no class.
pub fn quasi_normality_witness<N: NormScheme, S: Subgroup<N::G>>(
    scheme: &N,
    sub: &S,
    x: &Elem<N::G>,
    budget: usize,
) -> Result<QuasiNormality<Elem<N::G>>> {
    let g = scheme.group();
    let gens = sub.generators();
    let hs = if gens.is_empty() {
        vec![g.identity()]
    } else {
        enumerate_set(
            scheme,
            &ElemSet::Subgroup(gens),
            budget.max(2),
            budget.saturating_mul(4).max(64),
        )?
        .0
    };
    let mut classes = BTreeSet::new();
    let mut trace = Vec::new();
    let half = hs.len().div_ceil(2);
    for (i, h) in hs.iter().enumerate() {
        classes.insert(sub.coset_key(&g.conjugate(h, x)?)?);
        if i + 1 == half || i + 1 == hs.len() {
            trace.push((i + 1, classes.len()));
        }
    }
    let stable = trace.len() < 2 || trace[0].1 == trace[trace.len() - 1].1;
    let classes: Vec<_> = classes.into_iter().collect();
    Ok(if stable {
        QuasiNormality::Witness(classes)
    } else {
        QuasiNormality::Inconclusive { classes, trace }
    })
}

/// `G/G_0` with the chain ultrametric `d(xH, yH) = min { n : x G_n = y G_n }`.
/// Points are canonical coset representatives.
pub struct ChainCosetSpace<C: Chain> {
    chain: Arc<C>,
    budget: usize,
    levels: Arc<RwLock<HashMap<usize, Arc<Vec<Elem<C::G>>>>>>,
}

impl<C: Chain> Clone for ChainCosetSpace<C> {
    fn clone(&self) -> Self {
        ChainCosetSpace {
            chain: self.chain.clone(),
            budget: self.budget,
            levels: self.levels.clone(),
        }
    }
}

impl<C: Chain> ChainCosetSpace<C> {
    pub fn new(chain: C, budget: usize) -> Self {
        Self::shared(Arc::new(chain), budget)
    }

    pub fn shared(chain: Arc<C>, budget: usize) -> Self {
        ChainCosetSpace {
            chain,
            budget,
            levels: Arc::default(),
        }
    }

    pub fn chain(&self) -> &Arc<C> {
        &self.chain
    }

    /// Canonical representative of `x H`.
    pub fn coset(&self, x: &Elem<C::G>) -> Result<Elem<C::G>> {
        self.chain.coset_key(0, x)
    }

    /// `g . xH`
    pub fn act(&self, g: &Elem<C::G>, x: &Elem<C::G>) -> Result<Elem<C::G>> {
        self.coset(&self.chain.group().mul(g, x)?)
    }

    /// Canonical representatives of the cosets of `H` inside `G_n`, sorted.
    pub fn cosets_in_level(&self, n: usize) -> Result<Vec<Elem<C::G>>> {
        Ok(self.level_cosets(n)?.to_vec())
    }

    fn level_cosets(&self, n: usize) -> Result<Arc<Vec<Elem<C::G>>>> {
        if let Some(v) = self.levels.read().expect("level cache").get(&n) {
            return Ok(v.clone());
        }
        let mut count = 1usize;
        for k in 1..=n {
            count = count.saturating_mul(self.chain.index(k)?);
            if count > self.budget {
                return Err(Error::BudgetExceeded {
                    limit: self.budget,
                    lower_bound: None,
                });
            }
        }
        let out: Vec<_> = coset_representatives(&*self.chain, n)?
            .iter()
            .map(|r| self.coset(r))
            .collect::<Result<BTreeSet<_>>>()?
            .into_iter()
            .collect();
        let out = Arc::new(out);
        self.levels
            .write()
            .expect("level cache")
            .insert(n, out.clone());
        Ok(out)
    }
}

impl<C: Chain + 'static> MetricSpace for ChainCosetSpace<C> {
    type Point = Elem<C::G>;
    type Dist = u64;

    fn distance(&self, a: &Self::Point, b: &Self::Point) -> Result<u64> {
        Ok(self.chain.level(&self.chain.group().between(a, b)?)? as u64)
    }

    fn base_point(&self) -> Self::Point {
        self.chain
            .coset_key(0, &self.chain.group().identity())
            .expect("identity has a coset")
    }

    fn ball_around(&self, center: &Self::Point, radius: u64) -> Result<Vec<(u64, Self::Point)>> {
        let r = match self.chain.max_level() {
            Some(m) => (radius as usize).min(m),
            None => radius as usize,
        };
        let g = self.chain.group();
        self.level_cosets(r)?
            .iter()
            .map(|p| {
                let y = self.coset(&g.mul(center, p)?)?;
                Ok((self.distance(center, &y)?, y))
            })
            .collect()
    }

    /// Ultrametric: the largest distance from any one point.
    fn diameter(&self, pts: &[Self::Point]) -> Result<u64> {
        let Some(first) = pts.first() else {
            return Ok(0);
        };
        pts.iter()
            .try_fold(0, |m, p| Ok(m.max(self.distance(first, p)?)))
    }

    fn name(&self) -> String {
        format!("cosets of {}", self.chain.name())
    }
}

/// `G/H` with the Hausdorff distance between cosets, for a left-invariant norm on `G`.
///
/// For `z = x^-1 y`, `d(xH, yH)` is the larger of the suprema over `h` in `H`
/// of the least norm in `h^-1 z h H` and in `h^-1 z^-1 h H`. The supremum runs
/// over `h` by norm until the set of classes stops changing.
pub struct HausdorffCosetSpace<N: NormScheme, S> {
    scheme: Arc<N>,
    sub: Arc<S>,
    budget: usize,
    min_norm: Arc<RwLock<HashMap<Elem<N::G>, u64>>>,
}

impl<N: NormScheme, S> Clone for HausdorffCosetSpace<N, S> {
    fn clone(&self) -> Self {
        HausdorffCosetSpace {
            scheme: self.scheme.clone(),
            sub: self.sub.clone(),
            budget: self.budget,
            min_norm: self.min_norm.clone(),
        }
    }
}

impl<N: NormScheme, S: Subgroup<N::G>> HausdorffCosetSpace<N, S> {
    pub fn new(scheme: Arc<N>, sub: S, budget: usize) -> Self {
        HausdorffCosetSpace {
            scheme,
            sub: Arc::new(sub),
            budget,
            min_norm: Arc::default(),
        }
    }

    pub fn coset(&self, x: &Elem<N::G>) -> Result<Elem<N::G>> {
        self.sub.coset_key(x)
    }

    pub fn act(&self, g: &Elem<N::G>, x: &Elem<N::G>) -> Result<Elem<N::G>> {
        self.coset(&self.scheme.group().mul(g, x)?)
    }

    /// Least norm of an element of the coset with key `key`.
    fn coset_norm(&self, key: &Elem<N::G>) -> Result<u64> {
        if let Some(&v) = self.min_norm.read().expect("memo lock").get(key) {
            return Ok(v);
        }
        let mut r = 1;
        let v = loop {
            let ball = self.scheme.ball(r)?;
            let mut found = None;
            for (n, e) in &ball.points {
                if self.sub.coset_key(e)? == *key {
                    found = Some(*n);
                    break;
                }
            }
            if let Some(v) = found {
                break v;
            }
            if ball.len() >= self.budget {
                return Err(Error::BudgetExceeded {
                    limit: self.budget,
                    lower_bound: Some(r + 1),
                });
            }
            r *= 2;
        };
        self.min_norm
            .write()
            .expect("memo lock")
            .insert(key.clone(), v);
        Ok(v)
    }

    /// `sup_h min |h^-1 z h H|`
    fn one_sided(&self, z: &Elem<N::G>) -> Result<u64> {
        let g = self.scheme.group();
        let gens = self.sub.generators();
        if g.is_abelian() || gens.is_empty() {
            return self.coset_norm(&self.coset(z)?);
        }
        let mut count = 16;
        let mut prev: Option<BTreeSet<Elem<N::G>>> = None;
        loop {
            let (hs, exhausted) = enumerate_set(
                &*self.scheme,
                &ElemSet::Subgroup(gens.clone()),
                count,
                self.budget.saturating_mul(4),
            )?;
            let classes: BTreeSet<_> = hs
                .iter()
                .map(|h| self.coset(&g.conjugate(z, h)?))
                .collect::<Result<_>>()?;
            if exhausted || prev.as_ref() == Some(&classes) {
                let mut best = 0;
                for c in &classes {
                    best = best.max(self.coset_norm(c)?);
                }
                return Ok(best);
            }
            if count >= self.budget {
                return Err(Error::NotCoarse(format!(
                    "infinite Hausdorff distance: conjugates of {z:?} reach {} cosets of H",
                    classes.len()
                )));
            }
            prev = Some(classes);
            count *= 2;
        }
    }
}

impl<N: NormScheme + 'static, S: Subgroup<N::G> + 'static> MetricSpace
    for HausdorffCosetSpace<N, S>
{
    type Point = Elem<N::G>;
    type Dist = u64;

    fn distance(&self, a: &Self::Point, b: &Self::Point) -> Result<u64> {
        let g = self.scheme.group();
        let z = g.between(a, b)?;
        if self.coset(&z)? == self.coset(&g.identity())? {
            return Ok(0);
        }
        Ok(self.one_sided(&z)?.max(self.one_sided(&g.inv(&z)?)?))
    }

    fn base_point(&self) -> Self::Point {
        self.coset(&self.scheme.group().identity())
            .expect("identity has a coset")
    }

    fn ball_around(&self, center: &Self::Point, radius: u64) -> Result<Vec<(u64, Self::Point)>> {
        // d(xH, yH) <= r forces y H = x g H for some |g| <= r
        let g = self.scheme.group();
        let mut keys = BTreeSet::new();
        for e in self.scheme.ball(radius)?.elements() {
            keys.insert(self.coset(&g.mul(center, &e)?)?);
        }
        let mut out = Vec::new();
        for k in keys {
            let d = self.distance(center, &k)?;
            if d <= radius {
                out.push((d, k));
            }
        }
        Ok(out)
    }

    fn name(&self) -> String {
        format!("{} / {} (Hausdorff)", self.scheme.name(), self.sub.name())
    }
}

/// A space of cosets `G/H` whose points are canonical coset keys.
pub trait CosetSpace: MetricSpace {
    type Group: Group<Elem = Self::Point>;

    fn coset_group(&self) -> &Self::Group;

    /// Canonical representative of `xH`.
    fn coset_of(&self, x: &Self::Point) -> Result<Self::Point>;
}

impl<C: Chain + 'static> CosetSpace for ChainCosetSpace<C> {
    type Group = C::G;

    fn coset_group(&self) -> &C::G {
        self.chain.group()
    }

    fn coset_of(&self, x: &Self::Point) -> Result<Self::Point> {
        self.coset(x)
    }
}

impl<N: NormScheme + 'static, S: Subgroup<N::G> + 'static> CosetSpace
    for HausdorffCosetSpace<N, S>
{
    type Group = N::G;

    fn coset_group(&self) -> &N::G {
        self.scheme.group()
    }

    fn coset_of(&self, x: &Self::Point) -> Result<Self::Point> {
        self.coset(x)
    }
}

/// A subgroup `H` with the metric restricted from `G`.
pub struct SubgroupSpace<N: NormScheme, S> {
    scheme: Arc<N>,
    sub: Arc<S>,
}

impl<N: NormScheme, S> Clone for SubgroupSpace<N, S> {
    fn clone(&self) -> Self {
        SubgroupSpace {
            scheme: self.scheme.clone(),
            sub: self.sub.clone(),
        }
    }
}

impl<N: NormScheme, S: Subgroup<N::G>> SubgroupSpace<N, S> {
    pub fn new(scheme: Arc<N>, sub: Arc<S>) -> Self {
        SubgroupSpace { scheme, sub }
    }

    pub fn subgroup(&self) -> &Arc<S> {
        &self.sub
    }

    pub fn scheme(&self) -> &Arc<N> {
        &self.scheme
    }
}

impl<N: NormScheme + 'static, S: Subgroup<N::G> + 'static> MetricSpace for SubgroupSpace<N, S> {
    type Point = Elem<N::G>;
    type Dist = u64;

    fn distance(&self, a: &Self::Point, b: &Self::Point) -> Result<u64> {
        self.scheme.distance(a, b)
    }

    fn base_point(&self) -> Self::Point {
        self.scheme.group().identity()
    }

    fn ball_around(&self, center: &Self::Point, radius: u64) -> Result<Vec<(u64, Self::Point)>> {
        let g = self.scheme.group();
        let mut out = Vec::new();
        for (n, e) in self.scheme.ball(radius)?.points {
            if self.sub.contains(&e)? {
                out.push((n, g.mul(center, &e)?));
            }
        }
        Ok(out)
    }

    fn name(&self) -> String {
        format!("{} in {}", self.sub.name(), self.scheme.name())
    }
}

/// `x -> xH` from `G` with its norm.
pub fn quotient_map<N, Y>(
    scheme: Arc<N>,
    space: Y,
    key: impl Fn(&Elem<N::G>) -> Result<Y::Point> + Send + Sync + 'static,
) -> PointMap<GroupSpace<N>, Y>
where
    N: NormScheme + 'static,
    Y: MetricSpace<Point = Elem<N::G>>,
{
    PointMap::new("quotient map", GroupSpace::shared(scheme), space, key)
}

/// `x -> xG_0` into the chain coset space.
pub fn chain_quotient_map<N, C>(
    scheme: Arc<N>,
    space: ChainCosetSpace<C>,
) -> PointMap<GroupSpace<N>, ChainCosetSpace<C>>
where
    N: NormScheme + 'static,
    C: Chain<G = N::G> + 'static,
{
    let s = space.clone();
    quotient_map(scheme, space, move |x| s.coset(x))
}

/// `x -> xH` into the Hausdorff coset space.
pub fn hausdorff_quotient_map<N, S>(
    space: HausdorffCosetSpace<N, S>,
) -> PointMap<GroupSpace<N>, HausdorffCosetSpace<N, S>>
where
    N: NormScheme + 'static,
    S: Subgroup<N::G> + 'static,
{
    let s = space.clone();
    quotient_map(space.scheme.clone(), space, move |x| s.coset(x))
}
