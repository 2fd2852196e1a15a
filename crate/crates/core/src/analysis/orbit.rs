use std::collections::{BTreeSet, HashSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use super::{enumerate_set, ElemSet};
use crate::error::Result;
use crate::groups::{symmetrize, Group};
use crate::metrics::NormScheme;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum OrbitVerdict {
    Stabilized(usize),
    GrowingAtBudget { count: usize, budget: usize },
}

/// The conjugation orbit `x^A = { a^-1 x a : a in A }` as far as it was explored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitReport<E> {
    pub x: E,
    pub acting: String,
    /// Sorted.
    pub orbit: Vec<E>,
    pub verdict: OrbitVerdict,
    /// `(number of acting elements used, orbit size)` at each budget doubling.
    pub trace: Vec<(usize, usize)>,
}

impl<E> OrbitReport<E> {
    pub fn is_stabilized(&self) -> bool {
        matches!(self.verdict, OrbitVerdict::Stabilized(_))
    }
}

const DOUBLINGS: usize = 5;

/// Orbit of `x` under conjugation by `A`.
///
/// When `A` is generated by a known finite set the orbit is closed under
/// conjugation by the generators; if that closure terminates within `budget`
/// elements it is the exact orbit. Otherwise the orbit of the first
/// `budget / 2^i` elements of `A` (by norm) is recorded for `i = 5, ..., 0`.
pub fn conjugacy_orbit<N: NormScheme>(
    scheme: &N,
    x: &<N::G as Group>::Elem,
    set: &ElemSet<<N::G as Group>::Elem>,
    budget: usize,
) -> Result<OrbitReport<<N::G as Group>::Elem>> {
    let g = scheme.group();
    let acting = set.label();
    let done = |orbit: Vec<_>, trace| {
        let n = orbit.len();
        Ok(OrbitReport {
            x: x.clone(),
            acting: acting.clone(),
            orbit,
            verdict: OrbitVerdict::Stabilized(n),
            trace,
        })
    };
    if g.is_abelian() {
        return done(vec![x.clone()], vec![(0, 1)]);
    }
    if let ElemSet::Finite(v) = set {
        let orbit: BTreeSet<_> = v
            .par_iter()
            .map(|a| g.conjugate(x, a))
            .collect::<Result<_>>()?;
        let n = orbit.len();
        return done(orbit.into_iter().collect(), vec![(v.len(), n)]);
    }
    let gens = match set {
        ElemSet::Subgroup(s) => Some(s.clone()),
        ElemSet::Whole => g.generators(),
        ElemSet::Finite(_) => None,
    };
    if let Some(gens) = &gens {
        let s = symmetrize(g, gens)?;
        let mut seen: HashSet<_> = HashSet::from([x.clone()]);
        let mut queue = VecDeque::from([x.clone()]);
        while let Some(y) = queue.pop_front() {
            if seen.len() > budget {
                break;
            }
            for a in &s {
                let z = g.conjugate(&y, a)?;
                if seen.insert(z.clone()) {
                    queue.push_back(z);
                }
            }
        }
        if queue.is_empty() {
            let mut orbit: Vec<_> = seen.into_iter().collect();
            orbit.sort();
            let n = orbit.len();
            return done(orbit, vec![(s.len(), n)]);
        }
    }
    let (elems, exhausted) =
        enumerate_set(scheme, set, budget, budget.saturating_mul(4).max(4096))?;
    let conj: Vec<_> = elems
        .par_iter()
        .map(|a| g.conjugate(x, a))
        .collect::<Result<_>>()?;
    let mut orbit = BTreeSet::new();
    let mut trace = Vec::new();
    let mut used = 0;
    for i in (0..=DOUBLINGS).rev() {
        let n = (budget >> i).max(1).min(conj.len());
        orbit.extend(conj[used.min(n)..n].iter().cloned());
        used = used.max(n);
        trace.push((n, orbit.len()));
    }
    let count = orbit.len();
    let settled = trace.len() >= 2 && trace[trace.len() - 1].1 == trace[trace.len() - 2].1;
    let verdict = if exhausted || (gens.is_none() && settled) {
        OrbitVerdict::Stabilized(count)
    } else {
        OrbitVerdict::GrowingAtBudget { count, budget }
    };
    Ok(OrbitReport {
        x: x.clone(),
        acting,
        orbit: orbit.into_iter().collect(),
        verdict,
        trace,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum QVerdict {
    InQ {
        orbit_size: usize,
    },
    /// The orbit grew at each of the last five budget doublings.
    EvidenceAgainst {
        trace: Vec<(usize, usize)>,
    },
    Inconclusive {
        trace: Vec<(usize, usize)>,
    },
}

/// Membership of `x` in the quasi-centralizer `Q(A)`, at scale.
pub fn quasi_centralizer_test<N: NormScheme>(
    scheme: &N,
    x: &<N::G as Group>::Elem,
    set: &ElemSet<<N::G as Group>::Elem>,
    budget: usize,
) -> Result<QVerdict> {
    let r = conjugacy_orbit(scheme, x, set, budget)?;
    Ok(verdict_of(&r))
}

fn verdict_of<E>(r: &OrbitReport<E>) -> QVerdict {
    match r.verdict {
        OrbitVerdict::Stabilized(n) => QVerdict::InQ { orbit_size: n },
        OrbitVerdict::GrowingAtBudget { .. } => {
            let t = &r.trace;
            let growing = t.len() > DOUBLINGS
                && t[t.len() - DOUBLINGS - 1..]
                    .windows(2)
                    .all(|w| w[1].1 > w[0].1);
            if growing {
                QVerdict::EvidenceAgainst { trace: t.clone() }
            } else {
                QVerdict::Inconclusive { trace: t.clone() }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FcVerdict<E> {
    FcAtScale {
        checked: usize,
    },
    NotFc {
        witness: E,
        trace: Vec<(usize, usize)>,
    },
    Inconclusive {
        checked: usize,
        undecided: Vec<E>,
    },
}

/// Tests the first `samples` elements (by norm) for finite conjugacy classes.
pub fn fc_test<N: NormScheme>(
    scheme: &N,
    samples: usize,
    budget: usize,
) -> Result<FcVerdict<<N::G as Group>::Elem>> {
    let (xs, _) = enumerate_set(scheme, &ElemSet::Whole, samples, budget)?;
    let verdicts: Vec<QVerdict> = xs
        .par_iter()
        .map(|x| quasi_centralizer_test(scheme, x, &ElemSet::Whole, budget))
        .collect::<Result<_>>()?;
    let mut undecided = Vec::new();
    for (x, v) in xs.iter().zip(&verdicts) {
        match v {
            QVerdict::EvidenceAgainst { trace } => {
                return Ok(FcVerdict::NotFc {
                    witness: x.clone(),
                    trace: trace.clone(),
                })
            }
            QVerdict::Inconclusive { .. } => undecided.push(x.clone()),
            QVerdict::InQ { .. } => {}
        }
    }
    Ok(if undecided.is_empty() {
        FcVerdict::FcAtScale { checked: xs.len() }
    } else {
        FcVerdict::Inconclusive {
            checked: xs.len(),
            undecided,
        }
    })
}
