use std::collections::{HashMap, HashSet, VecDeque};

use num_rational::Ratio;
use num_traits::Zero;

use super::{CyclicElem, CyclicSum, FreeAbelian, Group, Product, QmodZ};
use crate::error::{Error, Result};
use crate::scalar::{self, Coord};

/// An increasing chain of subgroups `H = G_0 <= G_1 <= ...` whose union is the group.
///
/// Serves both as an exhaustion of a locally finite group (with `G_0` trivial)
/// and as a chain over a subgroup `H` used to build sections of `G -> G/H`.
pub trait Chain: Send + Sync {
    type G: Group;

    fn group(&self) -> &Self::G;

    /// Highest level the chain can represent, `None` if unbounded.
    fn max_level(&self) -> Option<usize>;

    /// Least `n` with `x` in `G_n`.
    fn level(&self, x: &<Self::G as Group>::Elem) -> Result<usize>;

    /// Canonical representative of the left coset `x G_k`.
    fn coset_key(&self, k: usize, x: &<Self::G as Group>::Elem)
        -> Result<<Self::G as Group>::Elem>;

    /// Left coset representatives of `G_n / G_{n-1}` for `n >= 1`, identity first.
    fn transversal(&self, n: usize) -> Result<Vec<<Self::G as Group>::Elem>>;

    /// Elements of `G_0`, when finite.
    fn base_elements(&self) -> Result<Vec<<Self::G as Group>::Elem>>;

    fn name(&self) -> String;

    fn check_level(&self, n: usize) -> Result<()> {
        match self.max_level() {
            Some(m) if n > m => Err(Error::LevelOverflow {
                requested: n,
                max: m,
            }),
            _ => Ok(()),
        }
    }

    /// `[G_n : G_{n-1}]`
    fn index(&self, n: usize) -> Result<usize> {
        Ok(self.transversal(n)?.len())
    }
}

/// One representative for each left coset of `G_0` in `G_n`: products `t_n t_{n-1} ... t_1`.
pub fn coset_representatives<C: Chain>(chain: &C, n: usize) -> Result<Vec<<C::G as Group>::Elem>> {
    chain.check_level(n)?;
    let g = chain.group();
    let mut reps = vec![g.identity()];
    for k in 1..=n {
        let t = chain.transversal(k)?;
        let mut next = Vec::with_capacity(reps.len() * t.len());
        for a in &t {
            for r in &reps {
                next.push(g.mul(a, r)?);
            }
        }
        reps = next;
    }
    Ok(reps)
}

/// All elements of `G_n`, sorted. Requires `G_0` finite.
pub fn level_elements<C: Chain>(chain: &C, n: usize) -> Result<Vec<<C::G as Group>::Elem>> {
    let base = chain.base_elements()?;
    let reps = coset_representatives(chain, n)?;
    let g = chain.group();
    let mut out = Vec::with_capacity(base.len() * reps.len());
    for r in &reps {
        for h in &base {
            out.push(g.mul(r, h)?);
        }
    }
    out.sort();
    Ok(out)
}

/// Coordinate chain on a cyclic sum: `G_n` is spanned by the first `base + n` coordinates.
#[derive(Debug, Clone)]
pub struct CoordinateChain {
    group: CyclicSum,
    base: usize,
}

impl CoordinateChain {
    /// Chain with `G_0` trivial.
    pub fn new(group: CyclicSum) -> Self {
        CoordinateChain { group, base: 0 }
    }

    /// Chain over the subgroup spanned by the first `base` coordinates.
    pub fn over_first(group: CyclicSum, base: usize) -> Self {
        CoordinateChain { group, base }
    }

    fn coord_count(&self) -> Option<usize> {
        self.group.len()
    }
}

impl Chain for CoordinateChain {
    type G = CyclicSum;

    fn group(&self) -> &CyclicSum {
        &self.group
    }

    fn max_level(&self) -> Option<usize> {
        self.coord_count().map(|n| n.saturating_sub(self.base))
    }

    fn level(&self, x: &CyclicElem) -> Result<usize> {
        if !self.group.contains(x) {
            return Err(Error::DescriptorMismatch {
                group: self.group.name(),
            });
        }
        Ok(x.support_end().saturating_sub(self.base))
    }

    fn coset_key(&self, k: usize, x: &CyclicElem) -> Result<CyclicElem> {
        let cut = self.base + k;
        Ok(CyclicElem(
            x.0.iter()
                .copied()
                .filter(|(i, _)| *i as usize >= cut)
                .collect(),
        ))
    }

    fn transversal(&self, n: usize) -> Result<Vec<CyclicElem>> {
        if n == 0 {
            return Err(Error::invalid("transversal levels start at 1"));
        }
        self.check_level(n)?;
        let i = self.base + n - 1;
        let p = self.group.order_at(i).expect("level checked");
        (0..p).map(|r| self.group.elem(&[(i, r as i64)])).collect()
    }

    fn base_elements(&self) -> Result<Vec<CyclicElem>> {
        let mut out = vec![self.group.identity()];
        for i in 0..self.base {
            let p = self
                .group
                .order_at(i)
                .ok_or_else(|| Error::invalid("base beyond group"))?;
            let mut next = Vec::with_capacity(out.len() * p as usize);
            for r in 0..p {
                let t = self.group.elem(&[(i, r as i64)])?;
                for e in &out {
                    next.push(self.group.mul(&t, e)?);
                }
            }
            out = next;
        }
        Ok(out)
    }

    fn name(&self) -> String {
        format!(
            "coordinates of {} over first {}",
            self.group.name(),
            self.base
        )
    }
}

/// `C_n = (1/n!) Z / Z` in `Q/Z`, with `C_0 = C_1 = 0`.
#[derive(Debug, Clone)]
pub struct FactorialChain<T> {
    group: QmodZ<T>,
    max: Option<usize>,
}

impl<T: Coord> Default for FactorialChain<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Coord> FactorialChain<T> {
    pub fn new() -> Self {
        // Highest n whose factorial is representable; capped for unbounded types.
        let mut f = T::one();
        let mut max = None;
        for n in 2..=512usize {
            match f.checked_mul(&scalar::from_i64::<T>(n as i64)) {
                Some(v) => f = v,
                None => {
                    max = Some(n - 1);
                    break;
                }
            }
        }
        FactorialChain {
            group: QmodZ::new(),
            max,
        }
    }

    pub fn factorial(&self, n: usize) -> Result<T> {
        self.check_level(n)?;
        let mut f = T::one();
        for k in 2..=n {
            f = scalar::mul(&f, &scalar::from_i64(k as i64))?;
        }
        Ok(f)
    }
}

impl<T: Coord> Chain for FactorialChain<T> {
    type G = QmodZ<T>;

    fn group(&self) -> &QmodZ<T> {
        &self.group
    }

    fn max_level(&self) -> Option<usize> {
        self.max
    }

    fn level(&self, x: &Ratio<T>) -> Result<usize> {
        let q = x.denom();
        if q.is_one() {
            return Ok(0);
        }
        let mut f = T::one();
        let mut n = 1usize;
        loop {
            n += 1;
            self.check_level(n)?;
            f = scalar::mul(&f, &scalar::from_i64(n as i64))?;
            if (f.clone() % q.clone()).is_zero() {
                return Ok(n);
            }
        }
    }

    fn coset_key(&self, k: usize, x: &Ratio<T>) -> Result<Ratio<T>> {
        // representative in [0, 1/k!)
        let f = self.factorial(k.max(1))?;
        let scaled = Ratio::new(scalar::mul(x.numer(), &f)?, x.denom().clone());
        let whole = scaled.floor();
        let sub = Ratio::new(whole.to_integer(), f);
        Ok(x.clone() - sub)
    }

    fn transversal(&self, n: usize) -> Result<Vec<Ratio<T>>> {
        if n == 0 {
            return Err(Error::invalid("transversal levels start at 1"));
        }
        if n == 1 {
            return Ok(vec![Ratio::zero()]);
        }
        let f = self.factorial(n)?;
        let count = n as i64;
        Ok((0..count)
            .map(|j| Ratio::new(scalar::from_i64(j), f.clone()))
            .collect())
    }

    fn base_elements(&self) -> Result<Vec<Ratio<T>>> {
        Ok(vec![Ratio::zero()])
    }

    fn name(&self) -> String {
        "factorial chain of Q/Z".into()
    }
}

/// `G_n = A x C_n`: a chain over `A x C_0` in `A x C`.
#[derive(Debug, Clone)]
pub struct ProductChain<A: Group, C: Chain> {
    group: Product<A, C::G>,
    inner: C,
}

impl<A: Group, C: Chain> ProductChain<A, C> {
    pub fn new(left: A, inner: C) -> Self {
        let right = inner.group().clone();
        ProductChain {
            group: Product::new(left, right),
            inner,
        }
    }

    pub fn inner(&self) -> &C {
        &self.inner
    }
}

impl<A: Group, C: Chain> Chain for ProductChain<A, C> {
    type G = Product<A, C::G>;

    fn group(&self) -> &Self::G {
        &self.group
    }

    fn max_level(&self) -> Option<usize> {
        self.inner.max_level()
    }

    fn level(&self, x: &(A::Elem, <C::G as Group>::Elem)) -> Result<usize> {
        self.inner.level(&x.1)
    }

    fn coset_key(
        &self,
        k: usize,
        x: &(A::Elem, <C::G as Group>::Elem),
    ) -> Result<(A::Elem, <C::G as Group>::Elem)> {
        Ok((self.group.left.identity(), self.inner.coset_key(k, &x.1)?))
    }

    fn transversal(&self, n: usize) -> Result<Vec<(A::Elem, <C::G as Group>::Elem)>> {
        let id = self.group.left.identity();
        Ok(self
            .inner
            .transversal(n)?
            .into_iter()
            .map(|t| (id.clone(), t))
            .collect())
    }

    fn base_elements(&self) -> Result<Vec<(A::Elem, <C::G as Group>::Elem)>> {
        Err(Error::Unsupported(format!(
            "{} x C_0 is infinite",
            self.group.left.name()
        )))
    }

    fn name(&self) -> String {
        format!("{} x ({})", self.group.left.name(), self.inner.name())
    }
}

/// `G'_n = G_{k+n}`.
#[derive(Debug, Clone)]
pub struct Shifted<C> {
    inner: C,
    shift: usize,
}

impl<C: Chain> Shifted<C> {
    pub fn new(inner: C, shift: usize) -> Result<Self> {
        inner.check_level(shift)?;
        Ok(Shifted { inner, shift })
    }
}

impl<C: Chain> Chain for Shifted<C> {
    type G = C::G;

    fn group(&self) -> &C::G {
        self.inner.group()
    }

    fn max_level(&self) -> Option<usize> {
        self.inner.max_level().map(|m| m - self.shift)
    }

    fn level(&self, x: &<C::G as Group>::Elem) -> Result<usize> {
        Ok(self.inner.level(x)?.saturating_sub(self.shift))
    }

    fn coset_key(&self, k: usize, x: &<C::G as Group>::Elem) -> Result<<C::G as Group>::Elem> {
        self.inner.coset_key(k + self.shift, x)
    }

    fn transversal(&self, n: usize) -> Result<Vec<<C::G as Group>::Elem>> {
        if n == 0 {
            return Err(Error::invalid("transversal levels start at 1"));
        }
        self.inner.transversal(n + self.shift)
    }

    fn base_elements(&self) -> Result<Vec<<C::G as Group>::Elem>> {
        level_elements(&self.inner, self.shift)
    }

    fn name(&self) -> String {
        format!("{} shifted by {}", self.inner.name(), self.shift)
    }
}

/// `nZ <= Z`: `G_0 = nZ` and `G_k = Z` for `k >= 1`.
#[derive(Debug, Clone)]
pub struct ModChain<T> {
    group: FreeAbelian<T>,
    n: i64,
}

impl<T: Coord> ModChain<T> {
    pub fn new(n: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::invalid("modulus must be positive"));
        }
        Ok(ModChain {
            group: FreeAbelian::new(1),
            n,
        })
    }

    pub fn modulus(&self) -> i64 {
        self.n
    }
}

impl<T: Coord> Chain for ModChain<T> {
    type G = FreeAbelian<T>;

    fn group(&self) -> &FreeAbelian<T> {
        &self.group
    }

    fn max_level(&self) -> Option<usize> {
        None
    }

    fn level(&self, x: &super::Vector<T>) -> Result<usize> {
        let n: T = scalar::from_i64(self.n);
        Ok(if (x[0].clone() % n).is_zero() { 0 } else { 1 })
    }

    fn coset_key(&self, k: usize, x: &super::Vector<T>) -> Result<super::Vector<T>> {
        if k >= 1 {
            return Ok(self.group.identity());
        }
        let n: T = scalar::from_i64(self.n);
        let r = num_integer::Integer::mod_floor(&x[0], &n);
        Ok(std::iter::once(r).collect())
    }

    fn transversal(&self, k: usize) -> Result<Vec<super::Vector<T>>> {
        match k {
            0 => Err(Error::invalid("transversal levels start at 1")),
            1 => Ok((0..self.n)
                .map(|r| std::iter::once(scalar::from_i64(r)).collect())
                .collect()),
            _ => Ok(vec![self.group.identity()]),
        }
    }

    fn base_elements(&self) -> Result<Vec<super::Vector<T>>> {
        Err(Error::Unsupported(format!("{}Z is infinite", self.n)))
    }

    fn name(&self) -> String {
        format!("{}Z in Z", self.n)
    }
}

/// A finite group as the chain `1 <= G`.
#[derive(Debug, Clone)]
pub struct FiniteChain<G: Group> {
    group: G,
    elements: Vec<G::Elem>,
}

impl<G: Group> FiniteChain<G> {
    pub fn new(group: G, budget: usize) -> Result<Self> {
        let gens = group
            .generators()
            .ok_or_else(|| Error::invalid("group is not finitely generated"))?;
        let elements = closure(&group, &gens, budget)?;
        Ok(FiniteChain { group, elements })
    }
}

impl<G: Group> Chain for FiniteChain<G> {
    type G = G;

    fn group(&self) -> &G {
        &self.group
    }

    fn max_level(&self) -> Option<usize> {
        None
    }

    fn level(&self, x: &G::Elem) -> Result<usize> {
        Ok(usize::from(!self.group.is_identity(x)))
    }

    fn coset_key(&self, k: usize, x: &G::Elem) -> Result<G::Elem> {
        Ok(if k == 0 {
            x.clone()
        } else {
            self.group.identity()
        })
    }

    fn transversal(&self, n: usize) -> Result<Vec<G::Elem>> {
        match n {
            0 => Err(Error::invalid("transversal levels start at 1")),
            1 => Ok(self.elements.clone()),
            _ => Ok(vec![self.group.identity()]),
        }
    }

    fn base_elements(&self) -> Result<Vec<G::Elem>> {
        Ok(vec![self.group.identity()])
    }

    fn name(&self) -> String {
        format!("1 <= {}", self.group.name())
    }
}

/// Subgroup generated by `gens`, identity first then breadth-first order.
pub fn closure<G: Group>(g: &G, gens: &[G::Elem], budget: usize) -> Result<Vec<G::Elem>> {
    let gens = super::symmetrize(g, gens)?;
    let mut seen: HashSet<G::Elem> = HashSet::new();
    let mut order = vec![g.identity()];
    seen.insert(g.identity());
    let mut queue: VecDeque<G::Elem> = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        for s in &gens {
            let y = g.mul(&x, s)?;
            if seen.insert(y.clone()) {
                if seen.len() > budget {
                    return Err(Error::BudgetExceeded {
                        limit: budget,
                        lower_bound: None,
                    });
                }
                order.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(order)
}

/// Chain with finitely many finite levels, `G_n = <gens_0, ..., gens_n>`.
#[derive(Debug, Clone)]
pub struct GeneratedChain<G: Group> {
    group: G,
    levels: Vec<Vec<G::Elem>>,
    sets: Vec<HashSet<G::Elem>>,
    keys: Vec<HashMap<G::Elem, G::Elem>>,
}

impl<G: Group> GeneratedChain<G> {
    pub fn new(group: G, level_generators: Vec<Vec<G::Elem>>, budget: usize) -> Result<Self> {
        if level_generators.is_empty() {
            return Err(Error::invalid("chain needs at least one level"));
        }
        let mut levels = Vec::new();
        let mut acc: Vec<G::Elem> = Vec::new();
        for gens in level_generators {
            for s in &gens {
                if !group.contains(s) {
                    return Err(Error::DescriptorMismatch {
                        group: group.name(),
                    });
                }
            }
            acc.extend(gens);
            levels.push(closure(&group, &acc, budget)?);
        }
        let sets: Vec<HashSet<G::Elem>> =
            levels.iter().map(|l| l.iter().cloned().collect()).collect();
        let mut keys = Vec::new();
        for lvl in &levels {
            keys.push(left_coset_keys(&group, lvl, &levels[levels.len() - 1])?);
        }
        Ok(GeneratedChain {
            group,
            levels,
            sets,
            keys,
        })
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }
}

/// Maps each element of `ambient` to the least element of its left coset `x K`.
fn left_coset_keys<G: Group>(
    g: &G,
    k: &[G::Elem],
    ambient: &[G::Elem],
) -> Result<HashMap<G::Elem, G::Elem>> {
    let mut out = HashMap::with_capacity(ambient.len());
    for x in ambient {
        if out.contains_key(x) {
            continue;
        }
        let coset: Vec<G::Elem> = k.iter().map(|h| g.mul(x, h)).collect::<Result<_>>()?;
        let key = coset.iter().min().expect("nonempty").clone();
        for y in coset {
            out.insert(y, key.clone());
        }
    }
    Ok(out)
}

impl<G: Group> Chain for GeneratedChain<G> {
    type G = G;

    fn group(&self) -> &G {
        &self.group
    }

    fn max_level(&self) -> Option<usize> {
        Some(self.top())
    }

    fn level(&self, x: &G::Elem) -> Result<usize> {
        self.sets
            .iter()
            .position(|s| s.contains(x))
            .ok_or(Error::LevelOverflow {
                requested: self.top() + 1,
                max: self.top(),
            })
    }

    fn coset_key(&self, k: usize, x: &G::Elem) -> Result<G::Elem> {
        self.check_level(k)?;
        self.keys[k].get(x).cloned().ok_or(Error::LevelOverflow {
            requested: self.top() + 1,
            max: self.top(),
        })
    }

    fn transversal(&self, n: usize) -> Result<Vec<G::Elem>> {
        if n == 0 {
            return Err(Error::invalid("transversal levels start at 1"));
        }
        self.check_level(n)?;
        // left cosets of G_{n-1} inside G_n, one representative each
        let id = self.group.identity();
        let mut seen = HashSet::new();
        seen.insert(self.keys[n - 1][&id].clone());
        let mut out = vec![id];
        for x in &self.levels[n] {
            if seen.insert(self.keys[n - 1][x].clone()) {
                out.push(x.clone());
            }
        }
        Ok(out)
    }

    fn base_elements(&self) -> Result<Vec<G::Elem>> {
        Ok(self.levels[0].clone())
    }

    fn name(&self) -> String {
        format!("generated chain in {}", self.group.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_levels() {
        let c = FactorialChain::<i64>::new();
        let q = c.group().clone();
        assert_eq!(c.level(&q.elem(0, 1).unwrap()).unwrap(), 0);
        assert_eq!(c.level(&q.elem(1, 2).unwrap()).unwrap(), 2);
        assert_eq!(c.level(&q.elem(1, 3).unwrap()).unwrap(), 3);
        assert_eq!(c.level(&q.elem(1, 4).unwrap()).unwrap(), 4);
        assert_eq!(c.level(&q.elem(1, 5).unwrap()).unwrap(), 5);
        assert_eq!(c.level(&q.elem(1, 7).unwrap()).unwrap(), 7);
        assert_eq!(c.max_level(), Some(20));
        assert!(matches!(
            c.level(&q.elem(1, 23).unwrap()),
            Err(Error::LevelOverflow { .. })
        ));
        for n in 0..7 {
            assert_eq!(
                level_elements(&c, n).unwrap().len(),
                (1..=n.max(1)).product::<usize>()
            );
        }
    }

    #[test]
    fn coordinate_chain_sizes() {
        let g = CyclicSum::infinite(2).unwrap();
        let c = CoordinateChain::new(g.clone());
        assert_eq!(level_elements(&c, 5).unwrap().len(), 32);
        let e = g.elem(&[(2, 1), (4, 1)]).unwrap();
        assert_eq!(c.level(&e).unwrap(), 5);
        assert_eq!(c.coset_key(3, &e).unwrap(), g.elem(&[(4, 1)]).unwrap());
        let over = CoordinateChain::over_first(g, 1);
        assert_eq!(over.base_elements().unwrap().len(), 2);
        assert_eq!(over.level(&e).unwrap(), 4);
    }

    #[test]
    fn generated_chain_matches_coordinates() {
        let g = CyclicSum::new(vec![2, 3, 4], None).unwrap();
        let gens: Vec<Vec<CyclicElem>> = vec![
            vec![],
            vec![g.basis(0).unwrap()],
            vec![g.basis(1).unwrap()],
            vec![g.basis(2).unwrap()],
        ];
        let c = GeneratedChain::new(g.clone(), gens, 1000).unwrap();
        assert_eq!(c.index(1).unwrap(), 2);
        assert_eq!(c.index(2).unwrap(), 3);
        assert_eq!(c.index(3).unwrap(), 4);
        let x = g.elem(&[(1, 2)]).unwrap();
        assert_eq!(c.level(&x).unwrap(), 2);
        assert_eq!(level_elements(&c, 3).unwrap().len(), 24);
    }

    #[test]
    fn mod_chain_keys() {
        let c = ModChain::<i64>::new(3).unwrap();
        let z = c.group().clone();
        assert_eq!(
            c.coset_key(0, &z.elem(&[-4]).unwrap()).unwrap(),
            z.elem(&[2]).unwrap()
        );
        assert_eq!(c.level(&z.elem(&[9]).unwrap()).unwrap(), 0);
        assert_eq!(c.transversal(1).unwrap().len(), 3);
    }
}
