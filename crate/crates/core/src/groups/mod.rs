//! Countable groups with exact arithmetic.

mod abelian;
mod chain;
mod descriptor;
mod nilpotent;
mod product;

use std::fmt::Debug;
use std::hash::Hash;

use crate::error::Result;

pub use abelian::{CyclicElem, CyclicSum, FreeAbelian, QmodZ, Vector};
pub use chain::{
    closure, coset_representatives, level_elements, Chain, CoordinateChain, FactorialChain,
    FiniteChain, GeneratedChain, ModChain, ProductChain, Shifted,
};
pub use descriptor::{
    DescriptorChain, DescriptorElem, DescriptorGroup, Factor, FactorElem, GroupDescriptor,
};
pub use nilpotent::{Heisenberg, Unitriangular, UtMatrix};
pub use product::{DirectSum, Product, SparseElem};

/// A countable group. Elements are canonical values, so `==` is group equality.
pub trait Group: Clone + Debug + Send + Sync + 'static {
    type Elem: Clone + Debug + Eq + Ord + Hash + Send + Sync + 'static;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    /// Whether `a` is a canonical element of this particular group.
    fn contains(&self, a: &Self::Elem) -> bool;
    fn is_abelian(&self) -> bool;
    /// A finite generating set when the group is finitely generated.
    fn generators(&self) -> Option<Vec<Self::Elem>>;
    /// Cardinality, `None` when infinite.
    fn order(&self) -> Option<u64>;
    /// Short human readable name.
    fn name(&self) -> String;

    /// Order of the subgroup generated by `gens`, for families with a closed
    /// form; `None` leaves it to enumeration.
    fn generated_order(&self, _gens: &[Self::Elem]) -> Option<Result<u64>> {
        None
    }

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }

    /// `a^-1 b^-1 a b`
    fn commutator(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        let ai = self.inv(a)?;
        let bi = self.inv(b)?;
        let l = self.mul(&ai, &bi)?;
        let r = self.mul(a, b)?;
        self.mul(&l, &r)
    }

    /// `a^-1 x a`
    fn conjugate(&self, x: &Self::Elem, a: &Self::Elem) -> Result<Self::Elem> {
        let ai = self.inv(a)?;
        let t = self.mul(&ai, x)?;
        self.mul(&t, a)
    }

    /// `a^-1 b`, the element whose norm is the left-invariant distance.
    fn between(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        let ai = self.inv(a)?;
        self.mul(&ai, b)
    }

    fn pow(&self, a: &Self::Elem, k: i64) -> Result<Self::Elem> {
        let mut base = if k < 0 { self.inv(a)? } else { a.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// Product of a word, left to right.
    fn product<'a, I>(&self, word: I) -> Result<Self::Elem>
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        let mut acc = self.identity();
        for w in word {
            acc = self.mul(&acc, w)?;
        }
        Ok(acc)
    }
}

/// Closes a set under inverses, dropping the identity and duplicates; keeps first-seen order.
pub fn symmetrize<G: Group>(g: &G, gens: &[G::Elem]) -> Result<Vec<G::Elem>> {
    let mut out: Vec<G::Elem> = Vec::with_capacity(gens.len() * 2);
    let mut seen = std::collections::HashSet::new();
    for s in gens {
        for t in [s.clone(), g.inv(s)?] {
            if !g.is_identity(&t) && seen.insert(t.clone()) {
                out.push(t);
            }
        }
    }
    Ok(out)
}
