use super::MetricSpace;
use crate::error::Result;

/// Finite direct sum `X_0 + ... + X_{k-1}` with `d(x, y) = sum_i (i + 1) d_i(x_i, y_i)`.
///
/// The growing weights keep the metric proper when the list is read as the
/// first coordinates of an infinite sum.
#[derive(Clone)]
pub struct SumSpace<X> {
    factors: Vec<X>,
}

impl<X: MetricSpace<Dist = u64>> SumSpace<X> {
    pub fn new(factors: Vec<X>) -> Self {
        SumSpace { factors }
    }

    pub fn factors(&self) -> &[X] {
        &self.factors
    }

    pub fn weight(i: usize) -> u64 {
        i as u64 + 1
    }
}

impl<X: MetricSpace<Dist = u64>> MetricSpace for SumSpace<X> {
    type Point = Vec<X::Point>;
    type Dist = u64;

    fn distance(&self, a: &Self::Point, b: &Self::Point) -> Result<u64> {
        let mut d = 0;
        for (i, f) in self.factors.iter().enumerate() {
            d += Self::weight(i) * f.distance(&a[i], &b[i])?;
        }
        Ok(d)
    }

    fn base_point(&self) -> Self::Point {
        self.factors.iter().map(|f| f.base_point()).collect()
    }

    fn ball_around(&self, center: &Self::Point, radius: u64) -> Result<Vec<(u64, Self::Point)>> {
        let mut out = vec![(0u64, Vec::with_capacity(self.factors.len()))];
        for (i, f) in self.factors.iter().enumerate() {
            let w = Self::weight(i);
            let local = f.ball_around(&center[i], radius / w)?;
            let mut next = Vec::new();
            for (d, p) in &out {
                for (e, q) in &local {
                    let nd = d + w * e;
                    if nd <= radius {
                        let mut v = p.clone();
                        v.push(q.clone());
                        next.push((nd, v));
                    }
                }
            }
            out = next;
        }
        Ok(out)
    }

    fn name(&self) -> String {
        let parts: Vec<String> = self.factors.iter().map(|f| f.name()).collect();
        format!("weighted sum ({})", parts.join(", "))
    }
}
