use std::marker::PhantomData;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groups::{
    Chain, DescriptorElem, DescriptorGroup, Factor, FactorElem, Group, Heisenberg,
};
use crate::scalar::Coord;

/// A subgroup `H` with a canonical representative for each left coset `xH`.
pub trait Subgroup<G: Group>: Send + Sync {
    fn contains(&self, x: &G::Elem) -> Result<bool>;

    /// Canonical element of `xH`; `key(key(x)) = key(x)`.
    fn coset_key(&self, x: &G::Elem) -> Result<G::Elem>;

    /// A generating set, used to list `H` by norm. Empty for the trivial subgroup.
    fn generators(&self) -> Vec<G::Elem>;

    fn name(&self) -> String;
}

/// `G_0` of a chain.
pub struct ChainBase<C: Chain> {
    chain: Arc<C>,
    gens: Vec<<C::G as Group>::Elem>,
}

impl<C: Chain> ChainBase<C> {
    pub fn new(chain: Arc<C>, gens: Vec<<C::G as Group>::Elem>) -> Self {
        ChainBase { chain, gens }
    }
}

impl<C: Chain> Subgroup<C::G> for ChainBase<C> {
    fn contains(&self, x: &<C::G as Group>::Elem) -> Result<bool> {
        Ok(self.chain.level(x)? == 0)
    }
    fn coset_key(&self, x: &<C::G as Group>::Elem) -> Result<<C::G as Group>::Elem> {
        self.chain.coset_key(0, x)
    }
    fn generators(&self) -> Vec<<C::G as Group>::Elem> {
        self.gens.clone()
    }
    fn name(&self) -> String {
        format!("base of {}", self.chain.name())
    }
}

pub struct TrivialSubgroup<G> {
    group: G,
}

impl<G: Group> TrivialSubgroup<G> {
    pub fn new(group: G) -> Self {
        TrivialSubgroup { group }
    }
}

impl<G: Group> Subgroup<G> for TrivialSubgroup<G> {
    fn contains(&self, x: &G::Elem) -> Result<bool> {
        Ok(self.group.is_identity(x))
    }
    fn coset_key(&self, x: &G::Elem) -> Result<G::Elem> {
        Ok(x.clone())
    }
    fn generators(&self) -> Vec<G::Elem> {
        Vec::new()
    }
    fn name(&self) -> String {
        "1".into()
    }
}

/// The center `<H(0,1,0)>`; cosets are keyed by zeroing the central coordinate.
#[derive(Debug, Clone, Default)]
pub struct HeisenbergCenter<T>(PhantomData<T>);

impl<T: Coord> Subgroup<Heisenberg<T>> for HeisenbergCenter<T> {
    fn contains(&self, x: &[T; 3]) -> Result<bool> {
        Ok(x[0].is_zero() && x[2].is_zero())
    }
    fn coset_key(&self, x: &[T; 3]) -> Result<[T; 3]> {
        Ok([x[0].clone(), T::zero(), x[2].clone()])
    }
    fn generators(&self) -> Vec<[T; 3]> {
        vec![Heisenberg::<T>::new().c()]
    }
    fn name(&self) -> String {
        "center".into()
    }
}

/// `<a> = { H(k,0,0) }`; `H(x,y,z) a^k = H(x+k, y, z)`, so the key zeroes `x`.
#[derive(Debug, Clone, Default)]
pub struct HeisenbergLine<T>(PhantomData<T>);

impl<T: Coord> Subgroup<Heisenberg<T>> for HeisenbergLine<T> {
    fn contains(&self, x: &[T; 3]) -> Result<bool> {
        Ok(x[1].is_zero() && x[2].is_zero())
    }
    fn coset_key(&self, x: &[T; 3]) -> Result<[T; 3]> {
        Ok([T::zero(), x[1].clone(), x[2].clone()])
    }
    fn generators(&self) -> Vec<[T; 3]> {
        vec![Heisenberg::<T>::new().a()]
    }
    fn name(&self) -> String {
        "<a>".into()
    }
}

/// The sum of some summands of a descriptor group; cosets are keyed by zeroing them.
#[derive(Debug, Clone)]
pub struct FactorSubgroup<T: Coord> {
    group: DescriptorGroup<T>,
    summands: Vec<usize>,
}

/// Generators listed for a summand that is not finitely generated.
const LISTED_BASIS: usize = 8;

impl<T: Coord> FactorSubgroup<T> {
    pub fn new(group: DescriptorGroup<T>, summands: Vec<usize>) -> Result<Self> {
        if let Some(i) = summands.iter().find(|&&i| i >= group.factors().len()) {
            return Err(Error::invalid(format!(
                "{} has no summand {i}",
                group.name()
            )));
        }
        Ok(FactorSubgroup { group, summands })
    }
}

impl<T: Coord> Subgroup<DescriptorGroup<T>> for FactorSubgroup<T> {
    fn contains(&self, x: &DescriptorElem<T>) -> Result<bool> {
        let id = self.group.identity();
        Ok(x.0
            .iter()
            .zip(&id.0)
            .enumerate()
            .all(|(i, (a, e))| self.summands.contains(&i) || a == e))
    }

    fn coset_key(&self, x: &DescriptorElem<T>) -> Result<DescriptorElem<T>> {
        let id = self.group.identity();
        let mut out = x.clone();
        for &i in &self.summands {
            out.0[i] = id.0[i].clone();
        }
        Ok(out)
    }

    /// Standard generators; only the first few coordinates of an infinite summand.
    fn generators(&self) -> Vec<DescriptorElem<T>> {
        let mut out = Vec::new();
        for &i in &self.summands {
            let gens: Vec<FactorElem<T>> = match &self.group.factors()[i] {
                Factor::Free(g) => g
                    .generators()
                    .unwrap_or_default()
                    .into_iter()
                    .map(FactorElem::Free)
                    .collect(),
                Factor::Cyclic(g) => {
                    let top = g.len().unwrap_or(LISTED_BASIS).min(LISTED_BASIS);
                    (0..top)
                        .filter_map(|k| g.basis(k).ok())
                        .map(FactorElem::Cyclic)
                        .collect()
                }
                Factor::Rational(g) => (2..=LISTED_BASIS as i64)
                    .filter_map(|k| g.elem(1, k).ok())
                    .map(FactorElem::Rational)
                    .collect(),
                Factor::Heis(g) => g
                    .generators()
                    .unwrap_or_default()
                    .into_iter()
                    .map(FactorElem::Heis)
                    .collect(),
                Factor::Ut(g) => g
                    .generators()
                    .unwrap_or_default()
                    .into_iter()
                    .map(FactorElem::Ut)
                    .collect(),
                Factor::FreeInf(g) => (0..LISTED_BASIS)
                    .filter_map(|k| g.single(k, std::iter::once(T::one()).collect()).ok())
                    .map(FactorElem::FreeInf)
                    .collect(),
            };
            out.extend(gens.into_iter().filter_map(|e| self.group.embed(i, e).ok()));
        }
        out
    }

    fn name(&self) -> String {
        let parts: Vec<String> = self.summands.iter().map(|i| format!("#{i}")).collect();
        format!("summands {} of {}", parts.join(", "), self.group.name())
    }
}
