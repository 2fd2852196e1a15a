use super::{Ball, NormScheme};
use crate::error::{Error, Result};
use crate::groups::{Group, Product};

/// `|(a, b)| = max(|a|, |b|)` on a direct product.
pub struct ProductNorm<A: NormScheme, B: NormScheme> {
    left: A,
    right: B,
    group: Product<A::G, B::G>,
}

impl<A: NormScheme, B: NormScheme> ProductNorm<A, B> {
    pub fn new(left: A, right: B) -> Self {
        let group = Product::new(left.group().clone(), right.group().clone());
        ProductNorm { left, right, group }
    }

    pub fn left(&self) -> &A {
        &self.left
    }

    pub fn right(&self) -> &B {
        &self.right
    }
}

impl<A: NormScheme, B: NormScheme> NormScheme for ProductNorm<A, B> {
    type G = Product<A::G, B::G>;

    fn group(&self) -> &Self::G {
        &self.group
    }

    fn norm(&self, x: &<Self::G as Group>::Elem) -> Result<u64> {
        Ok(self.left.norm(&x.0)?.max(self.right.norm(&x.1)?))
    }

    fn ball(&self, r: u64) -> Result<Ball<<Self::G as Group>::Elem>> {
        let a = self.left.ball(r)?;
        let b = self.right.ball(r)?;
        if a.len().saturating_mul(b.len()) > self.budget() {
            return Err(Error::BudgetExceeded {
                limit: self.budget(),
                lower_bound: None,
            });
        }
        let mut points = Vec::with_capacity(a.len() * b.len());
        for (na, x) in &a.points {
            for (nb, y) in &b.points {
                points.push(((*na).max(*nb), (x.clone(), y.clone())));
            }
        }
        Ok(Ball::from_unsorted(r, points))
    }

    fn budget(&self) -> usize {
        self.left.budget().max(self.right.budget())
    }

    fn name(&self) -> String {
        format!("max of ({}) and ({})", self.left.name(), self.right.name())
    }

    /// Strong product of the two Cayley graphs.
    fn unit_steps(&self) -> Option<Vec<<Self::G as Group>::Elem>> {
        let s = self.left.unit_steps()?;
        let t = self.right.unit_steps()?;
        let (e, f) = (self.left.group().identity(), self.right.group().identity());
        let mut out: Vec<_> = s.iter().map(|a| (a.clone(), f.clone())).collect();
        out.extend(t.iter().map(|b| (e.clone(), b.clone())));
        for a in &s {
            for b in &t {
                out.push((a.clone(), b.clone()));
            }
        }
        Some(out)
    }
}
