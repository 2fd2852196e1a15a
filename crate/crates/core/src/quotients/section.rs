use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, RwLock};

use rayon::prelude::*;

use super::ChainCosetSpace;
use crate::error::{Error, Result};
use crate::groups::{Chain, Group};
use crate::metrics::NormScheme;

type Elem<C> = <<C as Chain>::G as Group>::Elem;

/// The target set `S` of a section, closed under products.
pub struct SemigroupPredicate<E> {
    pub name: String,
    test: Arc<dyn Fn(&E) -> bool + Send + Sync>,
}

impl<E> Clone for SemigroupPredicate<E> {
    fn clone(&self) -> Self {
        SemigroupPredicate {
            name: self.name.clone(),
            test: self.test.clone(),
        }
    }
}

impl<E> SemigroupPredicate<E> {
    pub fn new(name: impl Into<String>, test: impl Fn(&E) -> bool + Send + Sync + 'static) -> Self {
        SemigroupPredicate {
            name: name.into(),
            test: Arc::new(test),
        }
    }

    pub fn all() -> Self {
        Self::new("all", |_| true)
    }

    pub fn contains(&self, e: &E) -> bool {
        (self.test)(e)
    }
}

type Rule<E> = dyn Fn(usize, &E) -> Result<E> + Send + Sync;

/// Choice of `alpha_n(x G_{n-1})` in `S` for each nontrivial coset of `G_{n-1}` in `G_n`.
pub enum Alpha<E> {
    /// Least norm, then least element, in the coset and in `S`.
    MinimalNorm,
    /// Keyed by `(n, coset key of x G_{n-1})`.
    Table(HashMap<(usize, E), E>),
    /// `(n, coset key) -> alpha`.
    Rule(Arc<Rule<E>>),
}

/// A section `s: G/H -> S` built level by level:
/// `s_n(xH) = alpha_n(x G_{n-1}) s_{n-1}(alpha_n(x G_{n-1})^-1 x H)` and `s_0(H) = 1`.
/// Evaluation is lazy and memoises the alpha choices.
pub struct Section<C: Chain, N> {
    chain: Arc<C>,
    scheme: Arc<N>,
    target: SemigroupPredicate<Elem<C>>,
    alpha: Alpha<Elem<C>>,
    memo: RwLock<HashMap<(usize, Elem<C>), Elem<C>>>,
    budget: usize,
    checked: usize,
    deepest: AtomicUsize,
}

impl<C: Chain, N: NormScheme<G = C::G>> Section<C, N> {
    /// Builds the section and checks, for every level up to `horizon`, that each
    /// coset of `G_{n-1}` in `G_n` has its alpha in `S`.
    pub fn build(
        chain: Arc<C>,
        scheme: Arc<N>,
        target: SemigroupPredicate<Elem<C>>,
        alpha: Alpha<Elem<C>>,
        horizon: usize,
        budget: usize,
    ) -> Result<Self> {
        let s = Section {
            chain,
            scheme,
            target,
            alpha,
            memo: RwLock::new(HashMap::new()),
            budget,
            checked: 0,
            deepest: AtomicUsize::new(0),
        };
        let top = s.chain.max_level().map_or(horizon, |m| m.min(horizon));
        for n in 1..=top {
            for t in s.chain.transversal(n)? {
                s.alpha_at(n, &t)?;
            }
        }
        Ok(Section { checked: top, ..s })
    }

    pub fn chain(&self) -> &Arc<C> {
        &self.chain
    }

    pub fn scheme(&self) -> &Arc<N> {
        &self.scheme
    }

    pub fn target(&self) -> &SemigroupPredicate<Elem<C>> {
        &self.target
    }

    /// Levels whose alpha choices were all checked at construction.
    pub fn checked_horizon(&self) -> usize {
        self.checked
    }

    /// Deepest level reached by any evaluation so far.
    pub fn deepest_level(&self) -> usize {
        self.deepest.load(Ordering::Relaxed)
    }

    fn construction(&self, n: usize, key: &Elem<C>, why: &str) -> Error {
        Error::Construction {
            level: n,
            reason: format!("coset {key:?} G_{}: {why}", n - 1),
        }
    }

    /// `alpha_n(x G_{n-1})`, identity on `G_{n-1}` itself.
    pub fn alpha_at(&self, n: usize, x: &Elem<C>) -> Result<Elem<C>> {
        let g = self.chain.group();
        let key = self.chain.coset_key(n - 1, x)?;
        if key == self.chain.coset_key(n - 1, &g.identity())? {
            return Ok(g.identity());
        }
        if let Some(a) = self.memo.read().expect("memo lock").get(&(n, key.clone())) {
            return Ok(a.clone());
        }
        let a = match &self.alpha {
            Alpha::MinimalNorm => self.minimal(n, &key)?,
            Alpha::Table(t) => t
                .get(&(n, key.clone()))
                .cloned()
                .ok_or_else(|| self.construction(n, &key, "no alpha given"))?,
            Alpha::Rule(f) => f(n, &key)?,
        };
        if !self.target.contains(&a) {
            return Err(self.construction(
                n,
                &key,
                &format!("alpha {a:?} is not in {}", self.target.name),
            ));
        }
        if self.chain.coset_key(n - 1, &a)? != key {
            return Err(self.construction(n, &key, &format!("alpha {a:?} lies in another coset")));
        }
        // every thread computes the same value, so the first insert wins harmlessly
        self.memo
            .write()
            .expect("memo lock")
            .entry((n, key))
            .or_insert(a.clone());
        Ok(a)
    }

    fn minimal(&self, n: usize, key: &Elem<C>) -> Result<Elem<C>> {
        let mut r = 1;
        loop {
            let ball = self.scheme.ball(r)?;
            for (_, e) in &ball.points {
                let k = match self.chain.coset_key(n - 1, e) {
                    Ok(k) => k,
                    Err(Error::LevelOverflow { .. }) => continue,
                    Err(err) => return Err(err),
                };
                if k == *key && self.target.contains(e) {
                    return Ok(e.clone());
                }
            }
            if ball.len() >= self.budget {
                return Err(self.construction(
                    n,
                    key,
                    &format!(
                        "no representative in {} within the budget",
                        self.target.name
                    ),
                ));
            }
            r *= 2;
        }
    }

    /// `s(xH)`; depends only on the coset.
    pub fn eval(&self, x: &Elem<C>) -> Result<Elem<C>> {
        let g = self.chain.group();
        let mut acc = g.identity();
        let mut cur = x.clone();
        let mut top = 0;
        loop {
            let n = self.chain.level(&cur)?;
            if n == 0 {
                break;
            }
            top = top.max(n);
            let a = self.alpha_at(n, &cur)?;
            acc = g.mul(&acc, &a)?;
            cur = g.between(&a, &cur)?;
        }
        self.deepest.fetch_max(top, Ordering::Relaxed);
        Ok(acc)
    }
}

/// Result of checking a section on the cosets inside `G_L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionBoundReport<E> {
    pub level: usize,
    pub cosets: usize,
    /// Cosets with `q(s(xH)) != xH`.
    pub not_sections: Vec<E>,
    /// Cosets whose value is neither the identity nor in `S`.
    pub outside_target: Vec<E>,
    /// `diam s(G_e / H)` for `e = 0..=max_eps`.
    pub diameters: Vec<u64>,
    pub pairs_checked: usize,
    /// `(rho, xH, yH, d(s xH, s yH))` with the distance above `diameters[rho]`.
    pub violations: Vec<(usize, E, E, u64)>,
}

impl<E> SectionBoundReport<E> {
    pub fn passed(&self) -> bool {
        self.not_sections.is_empty() && self.outside_target.is_empty() && self.violations.is_empty()
    }
}

/// Checks `q o s = id` on every coset of `H` inside `G_L`, and the bound
/// `d(s xH, s yH) <= diam s(G_rho / H)` for all pairs there with `rho <= max_eps`.
pub fn section_bound_check<C, N>(
    section: &Section<C, N>,
    level: usize,
    max_eps: usize,
) -> Result<SectionBoundReport<Elem<C>>>
where
    C: Chain + 'static,
    N: NormScheme<G = C::G>,
{
    let space = ChainCosetSpace::shared(section.chain.clone(), usize::MAX);
    let g = section.chain.group();
    let cosets = space.cosets_in_level(level)?;
    let values: Vec<Elem<C>> = cosets
        .par_iter()
        .map(|c| section.eval(c))
        .collect::<Result<_>>()?;
    let mut not_sections = Vec::new();
    let mut outside_target = Vec::new();
    for (c, s) in cosets.iter().zip(&values) {
        if space.coset(s)? != *c {
            not_sections.push(c.clone());
        }
        if !g.is_identity(s) && !section.target.contains(s) {
            outside_target.push(c.clone());
        }
    }
    let index: HashMap<&Elem<C>, usize> = cosets.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut diameters = Vec::new();
    for e in 0..=max_eps.min(level) {
        let pts: Vec<&Elem<C>> = space
            .cosets_in_level(e)?
            .iter()
            .map(|c| &values[index[c]])
            .collect();
        let d = pts
            .par_iter()
            .enumerate()
            .map(|(i, a)| {
                pts[i + 1..]
                    .iter()
                    .map(|b| section.scheme.distance(a, b))
                    .try_fold(0, |m, d| d.map(|d| m.max(d)))
            })
            .try_reduce(|| 0, |a, b| Ok(a.max(b)))?;
        diameters.push(d);
    }
    let rows: Vec<(usize, Vec<(usize, Elem<C>, Elem<C>, u64)>)> = (0..cosets.len())
        .into_par_iter()
        .map(|i| {
            let mut count = 0;
            let mut bad = Vec::new();
            for j in i + 1..cosets.len() {
                let rho = section.chain.level(&g.between(&cosets[i], &cosets[j])?)?;
                if rho == 0 || rho > max_eps || rho >= diameters.len() {
                    continue;
                }
                count += 1;
                let d = section.scheme.distance(&values[i], &values[j])?;
                if d > diameters[rho] {
                    bad.push((rho, cosets[i].clone(), cosets[j].clone(), d));
                }
            }
            Ok((count, bad))
        })
        .collect::<Result<_>>()?;
    let pairs_checked = rows.iter().map(|r| r.0).sum();
    let violations = rows.into_iter().flat_map(|r| r.1).collect();
    Ok(SectionBoundReport {
        level,
        cosets: cosets.len(),
        not_sections,
        outside_target,
        diameters,
        pairs_checked,
        violations,
    })
}
