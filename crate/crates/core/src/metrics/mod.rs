//! Proper left-invariant norms, balls, growth and large-scale connectedness.

mod lattice;
mod product;
mod snowflake;
mod ultra;
mod weighted;
mod word;

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::groups::{symmetrize, Group};

pub use lattice::{L1Norm, LinfNorm};
pub use product::ProductNorm;
pub use snowflake::{snowflake, sqrt_triangle_holds, Snowflake, SqrtDist};
pub use ultra::ChainUltraNorm;
pub use weighted::WeightedNorm;
pub use word::{heisenberg_central_norm, WordNorm};

/// Default ball-size budget.
pub const DEFAULT_BUDGET: usize = 1_000_000;

type Elem<N> = <<N as NormScheme>::G as Group>::Elem;

/// A proper left-invariant norm on a group; `d(x, y) = |x^-1 y|`.
pub trait NormScheme: Send + Sync {
    type G: Group;

    fn group(&self) -> &Self::G;

    /// Exact norm of `x`.
    fn norm(&self, x: &Elem<Self>) -> Result<u64>;

    /// Closed ball of radius `r` around the identity, sorted by (norm, element).
    fn ball(&self, r: u64) -> Result<Ball<Elem<Self>>>;

    fn budget(&self) -> usize;

    fn name(&self) -> String;

    fn distance(&self, x: &Elem<Self>, y: &Elem<Self>) -> Result<u64> {
        self.norm(&self.group().between(x, y)?)
    }

    /// `|x| <= r`, possibly without computing a large norm.
    fn within(&self, x: &Elem<Self>, r: u64) -> Result<bool> {
        Ok(self.norm(x)? <= r)
    }

    /// Right multipliers `s` with `|s| = 1` such that the metric is the path
    /// metric of the graph with edges `x ~ x s`. `None` if not a graph metric.
    fn unit_steps(&self) -> Option<Vec<Elem<Self>>> {
        None
    }

    /// Closed-form diameter of a finite set, when the norm has one.
    fn diameter_hint(&self, _points: &[Elem<Self>]) -> Option<Result<u64>> {
        None
    }
}

impl<N: NormScheme> NormScheme for Arc<N> {
    type G = N::G;

    fn group(&self) -> &Self::G {
        (**self).group()
    }
    fn norm(&self, x: &Elem<Self>) -> Result<u64> {
        (**self).norm(x)
    }
    fn ball(&self, r: u64) -> Result<Ball<Elem<Self>>> {
        (**self).ball(r)
    }
    fn budget(&self) -> usize {
        (**self).budget()
    }
    fn name(&self) -> String {
        (**self).name()
    }
    fn distance(&self, x: &Elem<Self>, y: &Elem<Self>) -> Result<u64> {
        (**self).distance(x, y)
    }
    fn within(&self, x: &Elem<Self>, r: u64) -> Result<bool> {
        (**self).within(x, r)
    }
    fn unit_steps(&self) -> Option<Vec<Elem<Self>>> {
        (**self).unit_steps()
    }
    fn diameter_hint(&self, points: &[Elem<Self>]) -> Option<Result<u64>> {
        (**self).diameter_hint(points)
    }
}

/// Closed ball around the identity: elements with their norms, sorted by (norm, element).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball<E> {
    pub radius: u64,
    pub points: Vec<(u64, E)>,
    /// Every listed norm is exact. Always true for balls returned by the library.
    pub exact: bool,
}

impl<E: Clone + Ord> Ball<E> {
    pub fn from_unsorted(radius: u64, mut points: Vec<(u64, E)>) -> Self {
        points.sort();
        Ball {
            radius,
            points,
            exact: true,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn elements(&self) -> Vec<E> {
        self.points.iter().map(|(_, e)| e.clone()).collect()
    }

    /// Number of elements of norm at most `r <= radius`.
    pub fn count_within(&self, r: u64) -> usize {
        self.points.partition_point(|(n, _)| *n <= r)
    }
}

/// Closed ball of radius `r` around the identity.
pub fn ball<N: NormScheme>(scheme: &N, r: u64) -> Result<Ball<Elem<N>>> {
    scheme.ball(r)
}

/// `n -> |S^n|` for a word norm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthProfile {
    pub generators: String,
    /// `sizes[n] = |S^n|`, the number of elements of norm at most `n`.
    pub sizes: Vec<u64>,
    /// Set when the budget stopped the computation before the requested `n`.
    pub truncated: bool,
}

impl GrowthProfile {
    pub fn max_n(&self) -> usize {
        self.sizes.len().saturating_sub(1)
    }
}

/// Exact ball sizes `|S^n|` for `n <= max_n`, truncated (and flagged) at the budget.
pub fn growth_sequence<G: Group>(scheme: &WordNorm<G>, max_n: usize) -> GrowthProfile {
    let mut sizes = Vec::with_capacity(max_n + 1);
    let mut truncated = false;
    for n in 0..=max_n {
        match scheme.ball_size(n as u64) {
            Ok(s) => sizes.push(s as u64),
            Err(_) => {
                truncated = true;
                break;
            }
        }
    }
    GrowthProfile {
        generators: scheme.name(),
        sizes,
        truncated,
    }
}

/// Outcome of closing a ball under the group operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Saturation {
    WholeGroup,
    /// The closure stabilised at a subgroup of this size.
    ProperSubgroup {
        size: usize,
    },
    Inconclusive {
        explored: usize,
    },
}

/// Closes `B_eps(1)` under products and inverses, up to `budget` elements.
pub fn generated_subgroup_saturation<N: NormScheme>(
    scheme: &N,
    eps: u64,
    budget: usize,
) -> Saturation {
    let g = scheme.group();
    let ball = match scheme.ball(eps) {
        Ok(b) => b,
        Err(_) => return Saturation::Inconclusive { explored: 0 },
    };
    let gens = match symmetrize(g, &ball.elements()) {
        Ok(s) => s,
        Err(_) => {
            return Saturation::Inconclusive {
                explored: ball.len(),
            }
        }
    };
    if let Some(order) = g.generated_order(&gens) {
        return match order {
            Ok(n) if g.order() == Some(n) => Saturation::WholeGroup,
            Ok(n) => Saturation::ProperSubgroup { size: n as usize },
            Err(_) => Saturation::Inconclusive {
                explored: ball.len(),
            },
        };
    }
    // Finitely generated families: reaching every standard generator proves equality.
    let mut targets: Vec<Elem<N>> = g.generators().unwrap_or_default();
    let mut seen: HashSet<Elem<N>> = HashSet::from([g.identity()]);
    let mut queue = VecDeque::from([g.identity()]);
    let check_targets = |seen: &HashSet<Elem<N>>, targets: &mut Vec<Elem<N>>| {
        targets.retain(|t| !seen.contains(t));
        g.generators().is_some() && targets.is_empty()
    };
    for s in &gens {
        seen.insert(s.clone());
    }
    if check_targets(&seen, &mut targets) {
        return Saturation::WholeGroup;
    }
    queue.extend(gens.iter().cloned());
    while let Some(x) = queue.pop_front() {
        for s in &gens {
            let y = match g.mul(&x, s) {
                Ok(y) => y,
                Err(_) => {
                    return Saturation::Inconclusive {
                        explored: seen.len(),
                    }
                }
            };
            if seen.insert(y.clone()) {
                if seen.len() > budget {
                    return Saturation::Inconclusive {
                        explored: seen.len(),
                    };
                }
                queue.push_back(y);
            }
        }
        if check_targets(&seen, &mut targets) {
            return Saturation::WholeGroup;
        }
    }
    if g.order() == Some(seen.len() as u64) {
        Saturation::WholeGroup
    } else {
        Saturation::ProperSubgroup { size: seen.len() }
    }
}

/// Exact doubling ratios of the balls around the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Doubling {
    /// `max_r |B_2r| / |B_r|`
    pub constant: Ratio<u64>,
    pub attained_at: u64,
    /// `ratios[r - 1] = |B_2r| / |B_r|` for `1 <= r <= R/2`.
    pub ratios: Vec<Ratio<u64>>,
}

/// `max_{1 <= r <= R/2} |B_2r| / |B_r|`, exact. Left-invariance makes the centre irrelevant.
pub fn doubling_constant<N: NormScheme>(scheme: &N, radius: u64) -> Result<Doubling> {
    if radius < 2 {
        return Err(Error::invalid("doubling constant needs R >= 2"));
    }
    let big = scheme.ball(radius)?;
    let ratios: Vec<Ratio<u64>> = (1..=radius / 2)
        .map(|r| Ratio::new(big.count_within(2 * r) as u64, big.count_within(r) as u64))
        .collect();
    let (i, constant) =
        ratios
            .iter()
            .enumerate()
            .fold((0, Ratio::from_integer(1)), |best, (i, q)| {
                if *q > best.1 {
                    (i, *q)
                } else {
                    best
                }
            });
    Ok(Doubling {
        constant,
        attained_at: i as u64 + 1,
        ratios,
    })
}
