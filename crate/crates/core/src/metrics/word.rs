use std::collections::{HashMap, HashSet};
use std::sync::{Arc, RwLock};

use super::{Ball, NormScheme};
use crate::error::{Error, Result};
use crate::groups::{symmetrize, Group, Heisenberg};
use crate::scalar::{self, Coord};

struct Table<E> {
    dist: HashMap<E, u32>,
    /// `spheres[r]` holds the elements of norm exactly `r`.
    spheres: Vec<Vec<E>>,
    /// The whole (finite) group has been enumerated.
    complete: bool,
}

/// Word norm for a finite symmetric generating set, computed by breadth-first search.
///
/// Layers are memoised; norms beyond the memoised radius `R` but at most `2R`
/// are resolved exactly by meeting in the middle across the sphere of radius `R`.
pub struct WordNorm<G: Group> {
    group: G,
    gens: Vec<G::Elem>,
    budget: usize,
    table: RwLock<Table<G::Elem>>,
    /// Norms beyond the memoised radius, found by meeting in the middle.
    far: RwLock<HashMap<G::Elem, u64>>,
    closed_form: Option<Arc<ClosedForm<G>>>,
}

type ClosedForm<G> = dyn Fn(&<G as Group>::Elem) -> Option<u64> + Send + Sync;

impl<G: Group> WordNorm<G> {
    pub fn new(group: G, generators: &[G::Elem], budget: usize) -> Result<Self> {
        for s in generators {
            if !group.contains(s) {
                return Err(Error::DescriptorMismatch {
                    group: group.name(),
                });
            }
        }
        let gens = symmetrize(&group, generators)?;
        let id = group.identity();
        let table = Table {
            dist: HashMap::from([(id.clone(), 0)]),
            spheres: vec![vec![id]],
            complete: false,
        };
        Ok(WordNorm {
            group,
            gens,
            budget,
            table: RwLock::new(table),
            far: RwLock::new(HashMap::new()),
            closed_form: None,
        })
    }

    /// Word norm for the family's standard generators.
    pub fn standard(group: G, budget: usize) -> Result<Self> {
        let gens = group
            .generators()
            .ok_or_else(|| Error::invalid(format!("{} is not finitely generated", group.name())))?;
        Self::new(group, &gens, budget)
    }

    /// Installs a known exact formula, consulted before any search. The
    /// formula returns `None` for elements it does not cover.
    pub fn with_closed_form(
        mut self,
        f: impl Fn(&G::Elem) -> Option<u64> + Send + Sync + 'static,
    ) -> Self {
        self.closed_form = Some(Arc::new(f));
        self
    }

    pub fn generators(&self) -> &[G::Elem] {
        &self.gens
    }

    fn radius(&self) -> u64 {
        let t = self.table.read().expect("table lock");
        t.spheres.len() as u64 - 1
    }

    /// Extends the memo to radius `r` (or to the whole group if smaller).
    fn grow(&self, r: u64) -> Result<()> {
        if self.table.read().expect("table lock").spheres.len() as u64 > r {
            return Ok(());
        }
        let mut t = self.table.write().expect("table lock");
        while (t.spheres.len() as u64) <= r && !t.complete {
            let last = t.spheres.last().expect("nonempty");
            let mut next = Vec::new();
            let mut fresh: HashSet<G::Elem> = HashSet::new();
            for x in last {
                for s in &self.gens {
                    let y = self.group.mul(x, s)?;
                    if !t.dist.contains_key(&y) && fresh.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            if t.dist.len() + next.len() > self.budget {
                return Err(Error::BudgetExceeded {
                    limit: self.budget,
                    lower_bound: None,
                });
            }
            if next.is_empty() {
                t.complete = true;
                break;
            }
            next.sort();
            let r = t.spheres.len() as u32;
            for y in &next {
                t.dist.insert(y.clone(), r);
            }
            t.spheres.push(next);
        }
        Ok(())
    }

    /// `|B_r|`
    pub fn ball_size(&self, r: u64) -> Result<usize> {
        self.grow(r)?;
        let t = self.table.read().expect("table lock");
        Ok(t.spheres.iter().take(r as usize + 1).map(|s| s.len()).sum())
    }

    /// `|S_r|`, the number of elements of norm exactly `r`.
    pub fn sphere_size(&self, r: u64) -> Result<usize> {
        self.grow(r)?;
        let t = self.table.read().expect("table lock");
        Ok(t.spheres.get(r as usize).map(|s| s.len()).unwrap_or(0))
    }

    /// Meet in the middle: exact if `|x| <= 2R` where `R` is the memoised radius.
    fn meet_in_middle(&self, x: &G::Elem) -> Result<Option<u64>> {
        let t = self.table.read().expect("table lock");
        if let Some(&d) = t.dist.get(x) {
            return Ok(Some(d as u64));
        }
        if t.complete {
            return Err(Error::DescriptorMismatch {
                group: self.group.name(),
            });
        }
        let r = t.spheres.len() - 1;
        let mut best: Option<u64> = None;
        for y in &t.spheres[r] {
            let z = self.group.between(y, x)?;
            if let Some(&d) = t.dist.get(&z) {
                let v = r as u64 + d as u64;
                if best.is_none_or(|b| v < b) {
                    best = Some(v);
                }
            }
        }
        Ok(best)
    }
}

impl<G: Group> NormScheme for WordNorm<G> {
    type G = G;

    fn group(&self) -> &G {
        &self.group
    }

    fn norm(&self, x: &G::Elem) -> Result<u64> {
        if !self.group.contains(x) {
            return Err(Error::DescriptorMismatch {
                group: self.group.name(),
            });
        }
        if let Some(v) = self.closed_form.as_ref().and_then(|f| f(x)) {
            return Ok(v);
        }
        if let Some(&v) = self.far.read().expect("memo lock").get(x) {
            return Ok(v);
        }
        loop {
            if let Some(v) = self.meet_in_middle(x)? {
                if v as usize >= self.table.read().expect("table lock").spheres.len() {
                    self.far.write().expect("memo lock").insert(x.clone(), v);
                }
                return Ok(v);
            }
            let r = self.radius();
            if let Err(e) = self.grow(r + 1) {
                return Err(match e {
                    Error::BudgetExceeded { limit, .. } => Error::BudgetExceeded {
                        limit,
                        lower_bound: Some(2 * r + 1),
                    },
                    other => other,
                });
            }
        }
    }

    fn within(&self, x: &G::Elem, r: u64) -> Result<bool> {
        if let Some(v) = self.closed_form.as_ref().and_then(|f| f(x)) {
            return Ok(v <= r);
        }
        if let Some(&v) = self.far.read().expect("memo lock").get(x) {
            return Ok(v <= r);
        }
        self.grow(r.div_ceil(2))?;
        // the memo now reaches at least r / 2, so the meeting point finds every norm <= r
        Ok(match self.meet_in_middle(x) {
            Ok(v) => v.is_some_and(|v| v <= r),
            Err(Error::DescriptorMismatch { .. })
                if self.table.read().expect("table lock").complete =>
            {
                false
            }
            Err(e) => return Err(e),
        })
    }

    fn ball(&self, r: u64) -> Result<Ball<G::Elem>> {
        self.grow(r)?;
        let t = self.table.read().expect("table lock");
        let mut points = Vec::new();
        for (n, s) in t.spheres.iter().enumerate().take(r as usize + 1) {
            points.extend(s.iter().map(|e| (n as u64, e.clone())));
        }
        Ok(Ball {
            radius: r,
            points,
            exact: true,
        })
    }

    fn budget(&self) -> usize {
        self.budget
    }

    fn name(&self) -> String {
        format!(
            "word norm on {} ({} generators)",
            self.group.name(),
            self.gens.len()
        )
    }

    fn unit_steps(&self) -> Option<Vec<G::Elem>> {
        Some(self.gens.clone())
    }
}

/// `|H(0,n,0)|` for the generators `a, b`: a word with trivial `x` and `z`
/// parts is a closed lattice path whose signed area is `n`, and the least
/// perimeter enclosing area `n` is `2 ceil(2 sqrt(n))`.
pub fn heisenberg_central_norm(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut m = (4.0 * n as f64).sqrt() as u64;
    while m * m < 4 * n {
        m += 1;
    }
    while m > 0 && (m - 1) * (m - 1) >= 4 * n {
        m -= 1;
    }
    2 * m
}

impl<T: Coord> WordNorm<Heisenberg<T>> {
    /// Word norm for `a, b` with the exact formula on the center.
    pub fn heisenberg(group: Heisenberg<T>, budget: usize) -> Result<Self> {
        let norm = Self::standard(group, budget)?;
        Ok(norm.with_closed_form(|x: &[T; 3]| {
            if x[0].is_zero() && x[2].is_zero() {
                scalar::abs_u64(&x[1])
                    .ok()
                    .filter(|n| *n < 1 << 60)
                    .map(heisenberg_central_norm)
            } else {
                None
            }
        }))
    }
}
