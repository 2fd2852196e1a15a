use super::{Ball, NormScheme};
use crate::error::{Error, Result};
use crate::groups::{level_elements, Chain, Group};

/// Chain ultra-norm `|x| = level(x)` for an exhaustion with trivial `G_0`.
pub struct ChainUltraNorm<C: Chain> {
    chain: C,
    budget: usize,
}

impl<C: Chain> ChainUltraNorm<C> {
    pub fn new(chain: C, budget: usize) -> Result<Self> {
        let base = chain.base_elements()?;
        if base.len() != 1 {
            return Err(Error::invalid("an exhaustion needs a trivial G_0"));
        }
        Ok(ChainUltraNorm { chain, budget })
    }

    pub fn chain(&self) -> &C {
        &self.chain
    }
}

impl<C: Chain> NormScheme for ChainUltraNorm<C> {
    type G = C::G;

    fn group(&self) -> &C::G {
        self.chain.group()
    }

    fn norm(&self, x: &<C::G as Group>::Elem) -> Result<u64> {
        Ok(self.chain.level(x)? as u64)
    }

    fn ball(&self, r: u64) -> Result<Ball<<C::G as Group>::Elem>> {
        let top = match self.chain.max_level() {
            Some(m) => (r as usize).min(m),
            None => r as usize,
        };
        let mut size = 1usize;
        for n in 1..=top {
            size = size.saturating_mul(self.chain.index(n)?);
            if size > self.budget {
                return Err(Error::BudgetExceeded {
                    limit: self.budget,
                    lower_bound: None,
                });
            }
        }
        let mut points = Vec::with_capacity(size);
        for e in level_elements(&self.chain, top)? {
            points.push((self.chain.level(&e)? as u64, e));
        }
        Ok(Ball::from_unsorted(r, points))
    }

    fn budget(&self) -> usize {
        self.budget
    }

    fn name(&self) -> String {
        format!("ultra-norm of {}", self.chain.name())
    }
}
