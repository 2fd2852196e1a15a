use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::sync::{Arc, RwLock};

use super::{Ball, NormScheme};
use crate::error::{Error, Result};
use crate::groups::{CyclicSum, DescriptorGroup, Group};
use crate::scalar::Coord;

type Source<E> = dyn Fn(u64) -> Result<Vec<(E, u64)>> + Send + Sync;
type ClosedForm<E> = dyn Fn(&E) -> Option<u64> + Send + Sync;

struct Table<E> {
    radius: u64,
    dist: HashMap<E, u64>,
}

/// Norm from a weighted generating sequence: the least total weight of a
/// factorisation into generators and their inverses.
///
/// The sequence is given through `generators_up_to(w)`, which lists every
/// generator of weight at most `w`; weights must be positive and there may be
/// only finitely many of each weight.
pub struct WeightedNorm<G: Group> {
    group: G,
    source: Arc<Source<G::Elem>>,
    budget: usize,
    label: String,
    table: RwLock<Table<G::Elem>>,
    closed_form: Option<Arc<ClosedForm<G::Elem>>>,
}

impl<G: Group> WeightedNorm<G> {
    pub fn new(
        group: G,
        label: impl Into<String>,
        budget: usize,
        generators_up_to: impl Fn(u64) -> Result<Vec<(G::Elem, u64)>> + Send + Sync + 'static,
    ) -> Self {
        let table = Table {
            radius: 0,
            dist: HashMap::from([(group.identity(), 0)]),
        };
        WeightedNorm {
            group,
            source: Arc::new(generators_up_to),
            budget,
            label: label.into(),
            table: RwLock::new(table),
            closed_form: None,
        }
    }

    /// Exact norms known in closed form; `None` falls back to the search.
    pub fn with_closed_form(
        mut self,
        f: impl Fn(&G::Elem) -> Option<u64> + Send + Sync + 'static,
    ) -> Self {
        self.closed_form = Some(Arc::new(f));
        self
    }

    /// A finite weighted list; weights must be positive and listed in nondecreasing order.
    pub fn from_list(group: G, list: Vec<(G::Elem, u64)>, budget: usize) -> Result<Self> {
        for w in list.windows(2) {
            if w[1].1 < w[0].1 {
                return Err(Error::invalid("generator weights must be nondecreasing"));
            }
        }
        for (s, w) in &list {
            if *w == 0 {
                return Err(Error::invalid("generator weights must be positive"));
            }
            if !group.contains(s) {
                return Err(Error::DescriptorMismatch {
                    group: group.name(),
                });
            }
        }
        let list = Arc::new(list);
        Ok(Self::new(group, "explicit weights", budget, move |w| {
            Ok(list.iter().filter(|(_, k)| *k <= w).cloned().collect())
        }))
    }

    fn gens(&self, w: u64) -> Result<Vec<(G::Elem, u64)>> {
        let mut out = Vec::new();
        let raw = (self.source)(w)?;
        for pair in raw.windows(2) {
            if pair[1].1 < pair[0].1 {
                return Err(Error::invalid("generator weights must be nondecreasing"));
            }
        }
        for (s, k) in raw {
            if k == 0 {
                return Err(Error::invalid("generator weights must be positive"));
            }
            if k > w {
                continue;
            }
            let si = self.group.inv(&s)?;
            out.push((s, k));
            out.push((si, k));
        }
        Ok(out)
    }

    /// Uniform-cost search bounded by total weight `r`.
    fn compute(&self, r: u64) -> Result<()> {
        if self.table.read().expect("table lock").radius >= r {
            return Ok(());
        }
        let gens = self.gens(r)?;
        let id = self.group.identity();
        let mut dist: HashMap<G::Elem, u64> = HashMap::from([(id.clone(), 0)]);
        let mut heap = BinaryHeap::from([Reverse((0u64, id))]);
        while let Some(Reverse((d, x))) = heap.pop() {
            if dist.get(&x).is_some_and(|&e| e < d) {
                continue;
            }
            for (s, w) in &gens {
                let nd = d + w;
                if nd > r {
                    continue;
                }
                let y = self.group.mul(&x, s)?;
                if dist.get(&y).is_none_or(|&e| nd < e) {
                    dist.insert(y.clone(), nd);
                    if dist.len() > self.budget {
                        return Err(Error::BudgetExceeded {
                            limit: self.budget,
                            lower_bound: None,
                        });
                    }
                    heap.push(Reverse((nd, y)));
                }
            }
        }
        let mut t = self.table.write().expect("table lock");
        if t.radius < r {
            *t = Table { radius: r, dist };
        }
        Ok(())
    }
}

impl<T: Coord> WeightedNorm<DescriptorGroup<T>> {
    /// Canonical weighted norm of a descriptor group.
    pub fn canonical(group: DescriptorGroup<T>, budget: usize) -> Self {
        let g = group.clone();
        let label = format!("canonical weights on {}", group.name());
        Self::new(group, label, budget, move |w| g.weighted_generators(w))
    }
}

impl WeightedNorm<CyclicSum> {
    /// Coordinate `i` (from 0) weighs `i + 1`; the norm is
    /// `sum (i + 1) min(v_i, n_i - v_i)` since the coordinates are independent.
    pub fn coordinates(group: CyclicSum, budget: usize) -> Self {
        let g = group.clone();
        let h = group.clone();
        let label = format!("coordinate weights on {}", group.name());
        Self::new(group, label, budget, move |w| {
            let top = g.len().map_or(w as usize, |n| n.min(w as usize));
            (0..top).map(|i| Ok((g.basis(i)?, i as u64 + 1))).collect()
        })
        .with_closed_form(move |x| {
            x.entries().iter().try_fold(0u64, |acc, &(i, v)| {
                let n = h.order_at(i as usize)?;
                acc.checked_add((u64::from(i) + 1).checked_mul(v.min(n - v))?)
            })
        })
    }
}

impl<G: Group> NormScheme for WeightedNorm<G> {
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
        if let Some(n) = self.closed_form.as_ref().and_then(|f| f(x)) {
            return Ok(n);
        }
        loop {
            let r = {
                let t = self.table.read().expect("table lock");
                if let Some(&d) = t.dist.get(x) {
                    return Ok(d);
                }
                t.radius
            };
            let next = (2 * r).max(4);
            if let Err(e) = self.compute(next) {
                return Err(match e {
                    Error::BudgetExceeded { limit, .. } => Error::BudgetExceeded {
                        limit,
                        lower_bound: Some(r + 1),
                    },
                    other => other,
                });
            }
        }
    }

    fn ball(&self, r: u64) -> Result<Ball<G::Elem>> {
        self.compute(r)?;
        let t = self.table.read().expect("table lock");
        let points = t
            .dist
            .iter()
            .filter(|(_, &d)| d <= r)
            .map(|(e, &d)| (d, e.clone()))
            .collect();
        Ok(Ball::from_unsorted(r, points))
    }

    fn budget(&self) -> usize {
        self.budget
    }

    fn name(&self) -> String {
        format!("weighted norm ({})", self.label)
    }
}
