use std::fmt;
use std::sync::{Arc, RwLock};

use super::Group;
use crate::error::{Error, Result};

/// Direct product `A x B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Product<A, B> {
    pub left: A,
    pub right: B,
}

impl<A: Group, B: Group> Product<A, B> {
    pub fn new(left: A, right: B) -> Self {
        Product { left, right }
    }
}

impl<A: Group, B: Group> Group for Product<A, B> {
    type Elem = (A::Elem, B::Elem);

    fn identity(&self) -> Self::Elem {
        (self.left.identity(), self.right.identity())
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok((self.left.mul(&a.0, &b.0)?, self.right.mul(&a.1, &b.1)?))
    }

    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem> {
        Ok((self.left.inv(&a.0)?, self.right.inv(&a.1)?))
    }

    fn contains(&self, a: &Self::Elem) -> bool {
        self.left.contains(&a.0) && self.right.contains(&a.1)
    }

    fn is_abelian(&self) -> bool {
        self.left.is_abelian() && self.right.is_abelian()
    }

    fn generators(&self) -> Option<Vec<Self::Elem>> {
        let l = self.left.generators()?;
        let r = self.right.generators()?;
        let mut out: Vec<Self::Elem> = l.into_iter().map(|x| (x, self.right.identity())).collect();
        out.extend(r.into_iter().map(|y| (self.left.identity(), y)));
        Some(out)
    }

    fn order(&self) -> Option<u64> {
        self.left.order()?.checked_mul(self.right.order()?)
    }

    fn name(&self) -> String {
        format!("({}) x ({})", self.left.name(), self.right.name())
    }
}

/// Finitely supported element of a direct sum: sorted `(index, component)` pairs, no identities.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SparseElem<E>(pub Vec<(u32, E)>);

impl<E> Default for SparseElem<E> {
    fn default() -> Self {
        SparseElem(Vec::new())
    }
}

impl<E: Clone> SparseElem<E> {
    pub fn get(&self, i: usize) -> Option<&E> {
        self.0
            .iter()
            .find(|(j, _)| *j as usize == i)
            .map(|(_, e)| e)
    }
}

type FactorFn<G> = dyn Fn(usize) -> G + Send + Sync;

/// Restricted direct sum of the groups `factor(0), factor(1), ...`.
#[derive(Clone)]
pub struct DirectSum<G> {
    factor: Arc<FactorFn<G>>,
    len: Option<usize>,
    label: String,
    cache: Arc<RwLock<Vec<Arc<G>>>>,
}

impl<G: Group> fmt::Debug for DirectSum<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirectSum")
            .field("label", &self.label)
            .field("len", &self.len)
            .finish()
    }
}

impl<G: Group> DirectSum<G> {
    /// `len = None` gives countably many summands.
    pub fn new(
        label: impl Into<String>,
        len: Option<usize>,
        factor: impl Fn(usize) -> G + Send + Sync + 'static,
    ) -> Self {
        DirectSum {
            factor: Arc::new(factor),
            len,
            label: label.into(),
            cache: Arc::new(RwLock::new(Vec::new())),
        }
    }

    pub fn len(&self) -> Option<usize> {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == Some(0)
    }

    pub fn factor(&self, i: usize) -> Result<Arc<G>> {
        if self.len.is_some_and(|n| i >= n) {
            return Err(Error::DescriptorMismatch {
                group: self.label.clone(),
            });
        }
        if let Some(g) = self.cache.read().expect("cache lock").get(i) {
            return Ok(g.clone());
        }
        let mut w = self.cache.write().expect("cache lock");
        while w.len() <= i {
            let k = w.len();
            w.push(Arc::new((self.factor)(k)));
        }
        Ok(w[i].clone())
    }

    /// Element with a single nonzero component.
    pub fn single(&self, i: usize, e: G::Elem) -> Result<SparseElem<G::Elem>> {
        let g = self.factor(i)?;
        if g.is_identity(&e) {
            Ok(SparseElem::default())
        } else {
            Ok(SparseElem(vec![(i as u32, e)]))
        }
    }

    /// Builds an element from `(index, component)` pairs in any order.
    pub fn elem(&self, parts: Vec<(usize, G::Elem)>) -> Result<SparseElem<G::Elem>> {
        let mut acc = SparseElem::default();
        for (i, e) in parts {
            acc = self.mul(&acc, &self.single(i, e)?)?;
        }
        Ok(acc)
    }
}

impl<G: Group> Group for DirectSum<G> {
    type Elem = SparseElem<G::Elem>;

    fn identity(&self) -> Self::Elem {
        SparseElem::default()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        let (x, y) = (&a.0, &b.0);
        let mut out = Vec::with_capacity(x.len().max(y.len()));
        let (mut i, mut j) = (0, 0);
        while i < x.len() || j < y.len() {
            if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
                out.push(x[i].clone());
                i += 1;
            } else if i == x.len() || y[j].0 < x[i].0 {
                out.push(y[j].clone());
                j += 1;
            } else {
                let g = self.factor(x[i].0 as usize)?;
                let p = g.mul(&x[i].1, &y[j].1)?;
                if !g.is_identity(&p) {
                    out.push((x[i].0, p));
                }
                i += 1;
                j += 1;
            }
        }
        Ok(SparseElem(out))
    }

    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem> {
        let mut out = Vec::with_capacity(a.0.len());
        for (i, e) in &a.0 {
            out.push((*i, self.factor(*i as usize)?.inv(e)?));
        }
        Ok(SparseElem(out))
    }

    fn contains(&self, a: &Self::Elem) -> bool {
        a.0.windows(2).all(|w| w[0].0 < w[1].0)
            && a.0.iter().all(|(i, e)| match self.factor(*i as usize) {
                Ok(g) => g.contains(e) && !g.is_identity(e),
                Err(_) => false,
            })
    }

    fn is_abelian(&self) -> bool {
        // every summand is assumed to be of the same kind
        self.factor(0).map(|g| g.is_abelian()).unwrap_or(true)
    }

    fn generators(&self) -> Option<Vec<Self::Elem>> {
        let n = self.len?;
        let mut out = Vec::new();
        for i in 0..n {
            for s in self.factor(i).ok()?.generators()? {
                out.push(self.single(i, s).ok()?);
            }
        }
        Some(out)
    }

    fn order(&self) -> Option<u64> {
        let n = self.len?;
        (0..n).try_fold(1u64, |acc, i| {
            acc.checked_mul(self.factor(i).ok()?.order()?)
        })
    }

    fn name(&self) -> String {
        self.label.clone()
    }
}
