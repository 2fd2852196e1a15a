use std::marker::PhantomData;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedSub, One, Zero};
use smallvec::SmallVec;

use super::Group;
use crate::error::{Error, Result};
use crate::scalar::{self, Coord};

/// Coordinates of a free abelian element.
pub type Vector<T> = SmallVec<[T; 4]>;

/// `Z^m` with coordinates of type `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeAbelian<T> {
    rank: usize,
    _t: PhantomData<T>,
}

impl<T: Coord> FreeAbelian<T> {
    pub fn new(rank: usize) -> Self {
        FreeAbelian {
            rank,
            _t: PhantomData,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn elem(&self, coords: &[i64]) -> Result<Vector<T>> {
        if coords.len() != self.rank {
            return Err(Error::DescriptorMismatch { group: self.name() });
        }
        Ok(coords.iter().map(|&c| scalar::from_i64(c)).collect())
    }

    pub fn basis(&self, i: usize) -> Vector<T> {
        (0..self.rank)
            .map(|j| if i == j { T::one() } else { T::zero() })
            .collect()
    }
}

impl<T: Coord> Group for FreeAbelian<T> {
    type Elem = Vector<T>;

    fn identity(&self) -> Self::Elem {
        (0..self.rank).map(|_| T::zero()).collect()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        if a.len() != self.rank || b.len() != self.rank {
            return Err(Error::DescriptorMismatch { group: self.name() });
        }
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| scalar::add(x, y))
            .collect()
    }

    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem> {
        if a.len() != self.rank {
            return Err(Error::DescriptorMismatch { group: self.name() });
        }
        a.iter().map(scalar::neg).collect()
    }

    fn contains(&self, a: &Self::Elem) -> bool {
        a.len() == self.rank
    }

    fn is_abelian(&self) -> bool {
        true
    }

    fn generators(&self) -> Option<Vec<Self::Elem>> {
        Some((0..self.rank).map(|i| self.basis(i)).collect())
    }

    fn order(&self) -> Option<u64> {
        if self.rank == 0 {
            Some(1)
        } else {
            None
        }
    }

    fn name(&self) -> String {
        match self.rank {
            1 => "Z".into(),
            r => format!("Z^{r}"),
        }
    }
}

/// Sparse element of a sum of cyclic groups: sorted `(coordinate, residue)` pairs, residues nonzero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CyclicElem(pub SmallVec<[(u32, u64); 4]>);

impl CyclicElem {
    pub fn entries(&self) -> &[(u32, u64)] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u64 {
        self.0
            .iter()
            .find(|(j, _)| *j as usize == i)
            .map(|(_, r)| *r)
            .unwrap_or(0)
    }

    /// Highest nonzero coordinate plus one; 0 for the identity.
    pub fn support_end(&self) -> usize {
        self.0.last().map(|(i, _)| *i as usize + 1).unwrap_or(0)
    }
}

/// `Z_{n_0} + ... + Z_{n_k}`, optionally followed by infinitely many copies of `Z_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicSum {
    orders: Vec<u64>,
    tail: Option<u64>,
}

impl CyclicSum {
    pub fn new(orders: Vec<u64>, tail: Option<u64>) -> Result<Self> {
        if orders.iter().chain(tail.iter()).any(|&n| n < 2) {
            return Err(Error::invalid("cyclic orders must be at least 2"));
        }
        Ok(CyclicSum { orders, tail })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n], None)
    }

    /// `Z_p^inf`
    pub fn infinite(p: u64) -> Result<Self> {
        Self::new(Vec::new(), Some(p))
    }

    pub fn finite_orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn tail(&self) -> Option<u64> {
        self.tail
    }

    /// Number of coordinates, `None` when infinite.
    pub fn len(&self) -> Option<usize> {
        match self.tail {
            Some(_) => None,
            None => Some(self.orders.len()),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    pub fn order_at(&self, i: usize) -> Option<u64> {
        self.orders.get(i).copied().or(if i >= self.orders.len() {
            self.tail
        } else {
            None
        })
    }

    /// Builds an element from arbitrary `(coordinate, value)` pairs, reducing residues.
    pub fn elem(&self, entries: &[(usize, i64)]) -> Result<CyclicElem> {
        let mut v: Vec<(u32, u64)> = Vec::new();
        for &(i, x) in entries {
            let n = self
                .order_at(i)
                .ok_or_else(|| Error::DescriptorMismatch { group: self.name() })?;
            let r = (x as i128).rem_euclid(n as i128) as u64;
            match v.iter_mut().find(|(j, _)| *j as usize == i) {
                Some(e) => e.1 = ((e.1 as u128 + r as u128) % n as u128) as u64,
                None => v.push((i as u32, r)),
            }
        }
        v.retain(|e| e.1 != 0);
        v.sort_unstable();
        Ok(CyclicElem(v.into_iter().collect()))
    }

    pub fn basis(&self, i: usize) -> Result<CyclicElem> {
        self.elem(&[(i, 1)])
    }
}

impl Group for CyclicSum {
    type Elem = CyclicElem;

    fn identity(&self) -> Self::Elem {
        CyclicElem::default()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        let (x, y) = (&a.0, &b.0);
        let mut out = SmallVec::with_capacity(x.len().max(y.len()));
        let (mut i, mut j) = (0, 0);
        while i < x.len() || j < y.len() {
            if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
                out.push(x[i]);
                i += 1;
            } else if i == x.len() || y[j].0 < x[i].0 {
                out.push(y[j]);
                j += 1;
            } else {
                let n = self
                    .order_at(x[i].0 as usize)
                    .ok_or_else(|| Error::DescriptorMismatch { group: self.name() })?;
                let r = ((x[i].1 as u128 + y[j].1 as u128) % n as u128) as u64;
                if r != 0 {
                    out.push((x[i].0, r));
                }
                i += 1;
                j += 1;
            }
        }
        Ok(CyclicElem(out))
    }

    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem> {
        let mut out = SmallVec::with_capacity(a.0.len());
        for &(i, r) in &a.0 {
            let n = self
                .order_at(i as usize)
                .ok_or_else(|| Error::DescriptorMismatch { group: self.name() })?;
            out.push((i, n - r));
        }
        Ok(CyclicElem(out))
    }

    fn contains(&self, a: &Self::Elem) -> bool {
        a.0.windows(2).all(|w| w[0].0 < w[1].0)
            && a.0
                .iter()
                .all(|&(i, r)| r != 0 && self.order_at(i as usize).is_some_and(|n| r < n))
    }

    fn is_abelian(&self) -> bool {
        true
    }

    fn generators(&self) -> Option<Vec<Self::Elem>> {
        match self.tail {
            Some(_) => None,
            None => Some(
                (0..self.orders.len())
                    .map(|i| self.basis(i).expect("in range"))
                    .collect(),
            ),
        }
    }

    fn order(&self) -> Option<u64> {
        match self.tail {
            Some(_) => None,
            None => self
                .orders
                .iter()
                .try_fold(1u64, |acc, &n| acc.checked_mul(n)),
        }
    }

    fn name(&self) -> String {
        let mut parts: Vec<String> = self.orders.iter().map(|n| format!("Z_{n}")).collect();
        if let Some(p) = self.tail {
            parts.push(format!("Z_{p}^inf"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// `Q/Z`, elements are reduced fractions in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QmodZ<T> {
    _t: PhantomData<T>,
}

impl<T: Coord> Default for QmodZ<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Coord> QmodZ<T> {
    pub fn new() -> Self {
        QmodZ { _t: PhantomData }
    }

    /// `p/q mod 1`
    pub fn elem(&self, p: i64, q: i64) -> Result<Ratio<T>> {
        if q == 0 {
            return Err(Error::invalid("zero denominator"));
        }
        let (p, q) = if q < 0 {
            (-(p as i128), -(q as i128))
        } else {
            (p as i128, q as i128)
        };
        let r = p.rem_euclid(q);
        Ok(Ratio::new(
            T::from_i128(r).ok_or(Error::overflow("elem"))?,
            T::from_i128(q).ok_or(Error::overflow("elem"))?,
        ))
    }
}

impl<T: Coord> Group for QmodZ<T> {
    type Elem = Ratio<T>;

    fn identity(&self) -> Self::Elem {
        Ratio::zero()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        let s = a.checked_add(b).ok_or(Error::overflow("add"))?;
        if s >= Ratio::one() {
            s.checked_sub(&Ratio::one()).ok_or(Error::overflow("sub"))
        } else {
            Ok(s)
        }
    }

    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem> {
        if a.is_zero() {
            Ok(a.clone())
        } else {
            Ratio::<T>::one()
                .checked_sub(a)
                .ok_or(Error::overflow("sub"))
        }
    }

    fn contains(&self, a: &Self::Elem) -> bool {
        !a.denom().is_negative()
            && !a.numer().is_negative()
            && a.numer() < a.denom()
            && a.numer().gcd(a.denom()).is_one()
    }

    fn is_abelian(&self) -> bool {
        true
    }

    fn generators(&self) -> Option<Vec<Self::Elem>> {
        None
    }

    fn order(&self) -> Option<u64> {
        None
    }

    fn name(&self) -> String {
        "Q/Z".into()
    }

    /// `<p_1/q_1, ..., p_k/q_k> = <1/lcm(q_i)>` for reduced fractions.
    fn generated_order(&self, gens: &[Self::Elem]) -> Option<Result<u64>> {
        Some(gens.iter().try_fold(1u64, |acc, r| {
            let q = r.denom().to_u64().ok_or(Error::overflow("denominator"))?;
            (acc / acc.gcd(&q))
                .checked_mul(q)
                .ok_or(Error::overflow("lcm"))
        }))
    }
}
