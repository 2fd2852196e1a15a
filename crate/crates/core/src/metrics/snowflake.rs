use std::fmt;

use super::NormScheme;
use crate::error::Result;
use crate::groups::Group;
use crate::scalar::Distance;

/// The exact value `sqrt(v)` of an integer `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SqrtDist(pub u64);

impl fmt::Display for SqrtDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.0.isqrt();
        if r * r == self.0 {
            write!(f, "{r}")
        } else {
            write!(f, "sqrt({})", self.0)
        }
    }
}

impl Distance for SqrtDist {
    fn zero() -> Self {
        SqrtDist(0)
    }
    fn from_u64(v: u64) -> Self {
        SqrtDist(v.saturating_mul(v))
    }
    fn to_f64(self) -> f64 {
        (self.0 as f64).sqrt()
    }
    fn half(self) -> Self {
        SqrtDist(self.0 / 4)
    }
}

/// `sqrt(a) + sqrt(b) >= sqrt(c)`, decided in integers.
pub fn sqrt_triangle_holds(a: u64, b: u64, c: u64) -> bool {
    // square both sides: a + b + 2 sqrt(ab) >= c
    let (a, b, c) = (a as u128, b as u128, c as u128);
    if c <= a + b {
        return true;
    }
    let excess = c - a - b;
    excess * excess <= 4 * a * b
}

/// `x -> sqrt(|x|)`: still a proper left-invariant metric.
pub struct Snowflake<N> {
    inner: N,
}

pub fn snowflake<N: NormScheme>(inner: N) -> Snowflake<N> {
    Snowflake { inner }
}

impl<N: NormScheme> Snowflake<N> {
    pub fn inner(&self) -> &N {
        &self.inner
    }

    pub fn norm(&self, x: &<N::G as Group>::Elem) -> Result<SqrtDist> {
        Ok(SqrtDist(self.inner.norm(x)?))
    }

    pub fn distance(
        &self,
        x: &<N::G as Group>::Elem,
        y: &<N::G as Group>::Elem,
    ) -> Result<SqrtDist> {
        Ok(SqrtDist(self.inner.distance(x, y)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_decisions() {
        assert!(sqrt_triangle_holds(3, 4, 7));
        assert!(sqrt_triangle_holds(1, 1, 4));
        assert!(!sqrt_triangle_holds(1, 1, 5));
        assert!(sqrt_triangle_holds(0, 9, 9));
        assert!(!sqrt_triangle_holds(0, 9, 10));
        assert_eq!(SqrtDist(16).to_string(), "4");
    }
}
