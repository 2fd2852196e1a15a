use std::marker::PhantomData;

use smallvec::SmallVec;

use super::Group;
use crate::error::{Error, Result};
use crate::scalar::{self, Coord};

/// The integer Heisenberg group. `[x, y, z]` is the matrix
/// `[[1, x, y], [0, 1, z], [0, 0, 1]]`, so `y` is the central coordinate and
/// `H(x1,y1,z1) H(x2,y2,z2) = H(x1+x2, y1+y2+x1*z2, z1+z2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Heisenberg<T> {
    _t: PhantomData<T>,
}

impl<T: Coord> Default for Heisenberg<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Coord> Heisenberg<T> {
    pub fn new() -> Self {
        Heisenberg { _t: PhantomData }
    }

    pub fn elem(&self, x: i64, y: i64, z: i64) -> [T; 3] {
        [
            scalar::from_i64(x),
            scalar::from_i64(y),
            scalar::from_i64(z),
        ]
    }

    /// `a = H(1,0,0)`
    pub fn a(&self) -> [T; 3] {
        self.elem(1, 0, 0)
    }

    /// `b = H(0,0,1)`
    pub fn b(&self) -> [T; 3] {
        self.elem(0, 0, 1)
    }

    /// `c = [a, b] = H(0,1,0)`, generating the center.
    pub fn c(&self) -> [T; 3] {
        self.elem(0, 1, 0)
    }
}

impl<T: Coord> Group for Heisenberg<T> {
    type Elem = [T; 3];

    fn identity(&self) -> Self::Elem {
        [T::zero(), T::zero(), T::zero()]
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        let cross = scalar::mul(&a[0], &b[2])?;
        Ok([
            scalar::add(&a[0], &b[0])?,
            scalar::add(&scalar::add(&a[1], &b[1])?, &cross)?,
            scalar::add(&a[2], &b[2])?,
        ])
    }

    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem> {
        // H(x,y,z)^-1 = H(-x, xz - y, -z)
        let xz = scalar::mul(&a[0], &a[2])?;
        Ok([
            scalar::neg(&a[0])?,
            scalar::sub(&xz, &a[1])?,
            scalar::neg(&a[2])?,
        ])
    }

    fn contains(&self, _a: &Self::Elem) -> bool {
        true
    }

    fn is_abelian(&self) -> bool {
        false
    }

    fn generators(&self) -> Option<Vec<Self::Elem>> {
        Some(vec![self.a(), self.b()])
    }

    fn order(&self) -> Option<u64> {
        None
    }

    fn name(&self) -> String {
        "UT3".into()
    }
}

/// Strictly upper triangular entries of a unitriangular matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UtMatrix<T>(pub SmallVec<[T; 10]>);

/// Upper unitriangular `n x n` integer matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unitriangular<T> {
    n: usize,
    _t: PhantomData<T>,
}

impl<T: Coord> Unitriangular<T> {
    pub fn new(n: usize) -> Result<Self> {
        if !(3..=5).contains(&n) {
            return Err(Error::invalid(format!(
                "unitriangular size {n} outside 3..=5"
            )));
        }
        Ok(Unitriangular { n, _t: PhantomData })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.n);
        // rows before i contribute (n-1) + (n-2) + ... + (n-i) entries
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    fn entries(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    pub fn entry<'a>(&self, m: &'a UtMatrix<T>, i: usize, j: usize) -> &'a T {
        &m.0[self.idx(i, j)]
    }

    /// Elementary matrix `I + v * E_{ij}`.
    pub fn elementary(&self, i: usize, j: usize, v: i64) -> UtMatrix<T> {
        let mut m = self.identity();
        m.0[self.idx(i, j)] = scalar::from_i64(v);
        m
    }

    pub fn from_entries(&self, entries: &[i64]) -> Result<UtMatrix<T>> {
        if entries.len() != self.entries() {
            return Err(Error::DescriptorMismatch { group: self.name() });
        }
        Ok(UtMatrix(
            entries.iter().map(|&v| scalar::from_i64(v)).collect(),
        ))
    }
}

impl<T: Coord> Group for Unitriangular<T> {
    type Elem = UtMatrix<T>;

    fn identity(&self) -> Self::Elem {
        UtMatrix((0..self.entries()).map(|_| T::zero()).collect())
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        if a.0.len() != self.entries() || b.0.len() != self.entries() {
            return Err(Error::DescriptorMismatch { group: self.name() });
        }
        let mut out = self.identity();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let mut s = scalar::add(&a.0[self.idx(i, j)], &b.0[self.idx(i, j)])?;
                for k in i + 1..j {
                    let t = scalar::mul(&a.0[self.idx(i, k)], &b.0[self.idx(k, j)])?;
                    s = scalar::add(&s, &t)?;
                }
                out.0[self.idx(i, j)] = s;
            }
        }
        Ok(out)
    }

    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem> {
        if a.0.len() != self.entries() {
            return Err(Error::DescriptorMismatch { group: self.name() });
        }
        // Solve A B = I column by column, increasing distance from the diagonal.
        let mut b = self.identity();
        for d in 1..self.n {
            for i in 0..self.n - d {
                let j = i + d;
                let mut s = a.0[self.idx(i, j)].clone();
                for k in i + 1..j {
                    let t = scalar::mul(&a.0[self.idx(i, k)], &b.0[self.idx(k, j)])?;
                    s = scalar::add(&s, &t)?;
                }
                b.0[self.idx(i, j)] = scalar::neg(&s)?;
            }
        }
        Ok(b)
    }

    fn contains(&self, a: &Self::Elem) -> bool {
        a.0.len() == self.entries()
    }

    fn is_abelian(&self) -> bool {
        false
    }

    fn generators(&self) -> Option<Vec<Self::Elem>> {
        Some(
            (0..self.n - 1)
                .map(|i| self.elementary(i, i + 1, 1))
                .collect(),
        )
    }

    fn order(&self) -> Option<u64> {
        None
    }

    fn name(&self) -> String {
        format!("UT{}", self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg_commutator_is_central_generator() {
        let h = Heisenberg::<i64>::new();
        assert_eq!(h.commutator(&h.a(), &h.b()).unwrap(), h.c());
        let m = 7;
        let am = h.pow(&h.a(), m).unwrap();
        let bm = h.pow(&h.b(), m).unwrap();
        assert_eq!(h.commutator(&am, &bm).unwrap(), h.elem(0, m * m, 0));
    }

    #[test]
    fn unitriangular_three_matches_heisenberg() {
        let u = Unitriangular::<i64>::new(3).unwrap();
        let h = Heisenberg::<i64>::new();
        let to_u = |e: &[i64; 3]| u.from_entries(&[e[0], e[1], e[2]]).unwrap();
        let samples = [[1, 2, 3], [-4, 0, 5], [2, -7, -1], [0, 0, 0], [3, 3, -3]];
        for a in &samples {
            for b in &samples {
                assert_eq!(
                    to_u(&h.mul(a, b).unwrap()),
                    u.mul(&to_u(a), &to_u(b)).unwrap()
                );
            }
            assert_eq!(to_u(&h.inv(a).unwrap()), u.inv(&to_u(a)).unwrap());
        }
    }

    #[test]
    fn unitriangular_inverse_ut5() {
        let u = Unitriangular::<i64>::new(5).unwrap();
        let m = u.from_entries(&[1, -2, 3, 4, 5, -6, 7, 8, -9, 10]).unwrap();
        assert_eq!(u.mul(&m, &u.inv(&m).unwrap()).unwrap(), u.identity());
        assert_eq!(u.mul(&u.inv(&m).unwrap(), &m).unwrap(), u.identity());
    }

    #[test]
    fn overflow_is_reported() {
        let h = Heisenberg::<i64>::new();
        let big = h.elem(i64::MAX / 2, 0, 4);
        assert!(matches!(h.mul(&big, &big), Err(Error::Overflow { .. })));
    }
}
