use std::marker::PhantomData;

use super::{Ball, NormScheme};
use crate::error::{Error, Result};
use crate::groups::{FreeAbelian, Group, Vector};
use crate::scalar::{self, Coord};

/// Word norm of `Z^m` for the basis `{±e_i}`, in closed form: the l1 norm.
pub struct L1Norm<T> {
    group: FreeAbelian<T>,
    budget: usize,
    _t: PhantomData<T>,
}

/// Word norm of `Z^m` for the king moves `{-1,0,1}^m \ 0`, in closed form: the l-infinity norm.
pub struct LinfNorm<T> {
    group: FreeAbelian<T>,
    budget: usize,
    _t: PhantomData<T>,
}

impl<T: Coord> L1Norm<T> {
    pub fn new(rank: usize, budget: usize) -> Self {
        L1Norm {
            group: FreeAbelian::new(rank),
            budget,
            _t: PhantomData,
        }
    }
}

impl<T: Coord> LinfNorm<T> {
    pub fn new(rank: usize, budget: usize) -> Self {
        LinfNorm {
            group: FreeAbelian::new(rank),
            budget,
            _t: PhantomData,
        }
    }
}

/// Lattice points with every |coordinate| <= r, optionally cut by l1 norm <= r.
fn lattice_ball<T: Coord>(
    m: usize,
    r: u64,
    l1: bool,
    budget: usize,
) -> Result<Vec<(u64, Vector<T>)>> {
    let r = r as i64;
    let mut out = Vec::new();
    let mut cur = vec![0i64; m];
    fn rec<T: Coord>(
        i: usize,
        used: i64,
        maxabs: i64,
        r: i64,
        l1: bool,
        cur: &mut Vec<i64>,
        out: &mut Vec<(u64, Vector<T>)>,
        budget: usize,
    ) -> Result<()> {
        if i == cur.len() {
            if out.len() >= budget {
                return Err(Error::BudgetExceeded {
                    limit: budget,
                    lower_bound: None,
                });
            }
            let n = if l1 { used } else { maxabs };
            out.push((n as u64, cur.iter().map(|&c| scalar::from_i64(c)).collect()));
            return Ok(());
        }
        let room = if l1 { r - used } else { r };
        for v in -room..=room {
            cur[i] = v;
            rec::<T>(
                i + 1,
                used + v.abs(),
                maxabs.max(v.abs()),
                r,
                l1,
                cur,
                out,
                budget,
            )?;
        }
        cur[i] = 0;
        Ok(())
    }
    rec::<T>(0, 0, 0, r, l1, &mut cur, &mut out, budget)?;
    Ok(out)
}

impl<T: Coord> NormScheme for L1Norm<T> {
    type G = FreeAbelian<T>;

    fn group(&self) -> &FreeAbelian<T> {
        &self.group
    }

    fn norm(&self, x: &Vector<T>) -> Result<u64> {
        if !self.group.contains(x) {
            return Err(Error::DescriptorMismatch {
                group: self.group.name(),
            });
        }
        x.iter().try_fold(0u64, |acc, c| {
            acc.checked_add(scalar::abs_u64(c)?)
                .ok_or(Error::overflow("norm"))
        })
    }

    fn ball(&self, r: u64) -> Result<Ball<Vector<T>>> {
        Ok(Ball::from_unsorted(
            r,
            lattice_ball(self.group.rank(), r, true, self.budget)?,
        ))
    }

    fn budget(&self) -> usize {
        self.budget
    }

    fn name(&self) -> String {
        format!("l1 norm on {}", self.group.name())
    }

    fn unit_steps(&self) -> Option<Vec<Vector<T>>> {
        let g = &self.group;
        let mut out = Vec::new();
        for i in 0..g.rank() {
            let e = g.basis(i);
            out.push(g.inv(&e).expect("negation of a unit"));
            out.push(e);
        }
        Some(out)
    }

    /// l1 diameter: the largest spread of `sum sign_i x_i` over sign patterns.
    fn diameter_hint(&self, points: &[Vector<T>]) -> Option<Result<u64>> {
        Some(l1_diameter(self.group.rank(), points))
    }
}

fn to_i128<T: Coord>(c: &T) -> Result<i128> {
    c.to_i128().ok_or(Error::overflow("diameter"))
}

fn l1_diameter<T: Coord>(m: usize, points: &[Vector<T>]) -> Result<u64> {
    if points.is_empty() || m == 0 {
        return Ok(0);
    }
    let mut best = 0i128;
    // fixing the first sign halves the patterns
    for mask in 0..(1u32 << (m - 1)) {
        let (mut lo, mut hi) = (i128::MAX, i128::MIN);
        for p in points {
            let mut v = to_i128(&p[0])?;
            for (i, c) in p.iter().enumerate().skip(1) {
                let c = to_i128(c)?;
                v += if mask >> (i - 1) & 1 == 1 { -c } else { c };
            }
            lo = lo.min(v);
            hi = hi.max(v);
        }
        best = best.max(hi - lo);
    }
    u64::try_from(best).map_err(|_| Error::overflow("diameter"))
}

fn linf_diameter<T: Coord>(m: usize, points: &[Vector<T>]) -> Result<u64> {
    let mut best = 0i128;
    for i in 0..m {
        let (mut lo, mut hi) = (i128::MAX, i128::MIN);
        for p in points {
            let c = to_i128(&p[i])?;
            lo = lo.min(c);
            hi = hi.max(c);
        }
        if !points.is_empty() {
            best = best.max(hi - lo);
        }
    }
    u64::try_from(best).map_err(|_| Error::overflow("diameter"))
}

impl<T: Coord> NormScheme for LinfNorm<T> {
    type G = FreeAbelian<T>;

    fn group(&self) -> &FreeAbelian<T> {
        &self.group
    }

    fn norm(&self, x: &Vector<T>) -> Result<u64> {
        if !self.group.contains(x) {
            return Err(Error::DescriptorMismatch {
                group: self.group.name(),
            });
        }
        x.iter()
            .try_fold(0u64, |acc, c| Ok(acc.max(scalar::abs_u64(c)?)))
    }

    fn ball(&self, r: u64) -> Result<Ball<Vector<T>>> {
        Ok(Ball::from_unsorted(
            r,
            lattice_ball(self.group.rank(), r, false, self.budget)?,
        ))
    }

    fn budget(&self) -> usize {
        self.budget
    }

    fn name(&self) -> String {
        format!("l-infinity norm on {}", self.group.name())
    }

    fn unit_steps(&self) -> Option<Vec<Vector<T>>> {
        let ball =
            lattice_ball::<T>(self.group.rank(), 1, false, usize::MAX).expect("unbounded budget");
        Some(
            ball.into_iter()
                .filter(|(n, _)| *n == 1)
                .map(|(_, e)| e)
                .collect(),
        )
    }

    fn diameter_hint(&self, points: &[Vector<T>]) -> Option<Result<u64>> {
        Some(linf_diameter(self.group.rank(), points))
    }
}
