use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{enumerate_set, quasi_centralizer_test, ElemSet, QVerdict};
use crate::error::Result;
use crate::groups::Group;
use crate::metrics::NormScheme;

type Elem<N> = <<N as NormScheme>::G as Group>::Elem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BornologyVerdict {
    /// Every tested element has a finite orbit.
    Consistent,
    /// Some tested element has an orbit that kept growing.
    Violated,
    Inconclusive,
}

/// The orbit criterion at scale and, separately, the directly measured modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BornologyReport<E> {
    pub verdict: BornologyVerdict,
    /// Number of elements of `A^-1 A` inside the ball that were tested.
    pub checked: usize,
    /// First element (by norm) whose orbit kept growing, with its trace.
    pub witness: Option<(E, Vec<(usize, usize)>)>,
    pub delta: u64,
    /// `(window, omega(delta))` for the map itself on `A` (and `B`) inside each window.
    pub direct_modulus: Vec<(u64, u64)>,
    /// The direct modulus increased between the windows.
    pub modulus_grows: bool,
}

/// Elements of the set with ambient norm at most `r`, sorted by (norm, element).
fn truncate<N: NormScheme>(
    scheme: &N,
    set: &ElemSet<Elem<N>>,
    r: u64,
    budget: usize,
) -> Result<Vec<Elem<N>>> {
    if let ElemSet::Whole = set {
        return Ok(scheme.ball(r)?.elements());
    }
    let (elems, _) = enumerate_set(scheme, set, budget, budget.saturating_mul(4))?;
    let inside: Vec<Elem<N>> = elems
        .into_par_iter()
        .map(|e| Ok(scheme.within(&e, r)?.then_some(e)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let mut keyed: Vec<(u64, Elem<N>)> = inside
        .into_par_iter()
        .map(|e| Ok((scheme.norm(&e)?, e)))
        .collect::<Result<_>>()?;
    keyed.sort();
    Ok(keyed.into_iter().map(|(_, e)| e).collect())
}

fn difference_set<N: NormScheme>(
    scheme: &N,
    a: &[Elem<N>],
    r: u64,
    cap: usize,
) -> Result<Vec<Elem<N>>> {
    let g = scheme.group();
    let mut out = BTreeSet::new();
    for x in a {
        for y in a {
            let d = g.between(x, y)?;
            if scheme.within(&d, r)? {
                out.insert((scheme.norm(&d)?, d));
            }
        }
        if out.len() >= cap {
            break;
        }
    }
    Ok(out.into_iter().take(cap).map(|(_, e)| e).collect())
}

fn orbit_criterion<N: NormScheme>(
    scheme: &N,
    xs: &[Elem<N>],
    acting: &ElemSet<Elem<N>>,
    budget: usize,
) -> Result<(BornologyVerdict, Option<(Elem<N>, Vec<(usize, usize)>)>)> {
    let verdicts: Vec<QVerdict> = xs
        .par_iter()
        .map(|x| quasi_centralizer_test(scheme, x, acting, budget))
        .collect::<Result<_>>()?;
    let mut undecided = false;
    for (x, v) in xs.iter().zip(verdicts) {
        match v {
            QVerdict::EvidenceAgainst { trace } => {
                return Ok((BornologyVerdict::Violated, Some((x.clone(), trace))))
            }
            QVerdict::Inconclusive { .. } => undecided = true,
            QVerdict::InQ { .. } => {}
        }
    }
    Ok((
        if undecided {
            BornologyVerdict::Inconclusive
        } else {
            BornologyVerdict::Consistent
        },
        None,
    ))
}

/// Index pairs `(i, j)` with `d(p_i, p_j) <= delta`, including `i = j`.
fn close_pairs<N: NormScheme>(
    scheme: &N,
    pts: &[Elem<N>],
    delta: u64,
) -> Result<Vec<(usize, usize)>> {
    let rows: Vec<Vec<(usize, usize)>> = (0..pts.len())
        .into_par_iter()
        .map(|i| {
            let mut v = Vec::new();
            for j in 0..pts.len() {
                if scheme.distance(&pts[i], &pts[j])? <= delta {
                    v.push((i, j));
                }
            }
            Ok(v)
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

const PAIR_CAP: usize = 4_000_000;

fn windows(r: u64) -> Vec<u64> {
    let mut w = vec![(r / 2).max(1), r.max(1)];
    w.dedup();
    w
}

fn grows(m: &[(u64, u64)]) -> bool {
    m.windows(2).any(|w| w[1].1 > w[0].1)
}

/// Criterion for bornologity of `(a, b) -> a b` on `A x B`: `A^-1 A` should lie
/// in the quasi-centralizer `Q(B)`. Tested on `A^-1 A` inside `B_R`, and
/// cross-checked against the modulus of the multiplication measured directly.
pub fn multiplication_bornologity_check<N: NormScheme>(
    scheme: &N,
    a: &ElemSet<Elem<N>>,
    b: &ElemSet<Elem<N>>,
    radius: u64,
    delta: u64,
    budget: usize,
) -> Result<BornologyReport<Elem<N>>> {
    let g = scheme.group();
    let a_r = truncate(scheme, a, radius, budget)?;
    let xs = difference_set(scheme, &a_r, radius, budget)?;
    let (verdict, witness) = if g.is_abelian() {
        (BornologyVerdict::Consistent, None)
    } else {
        orbit_criterion(scheme, &xs, b, budget)?
    };
    let mut direct = Vec::new();
    for w in windows(radius) {
        let aw = truncate(scheme, a, w, budget)?;
        let bw = truncate(scheme, b, w, budget)?;
        let pa = close_pairs(scheme, &aw, delta)?;
        let pb = close_pairs(scheme, &bw, delta)?;
        if pa.len().saturating_mul(pb.len()) > PAIR_CAP {
            break;
        }
        let omega = pa
            .par_iter()
            .map(|&(i, j)| {
                let mut best = 0;
                for &(k, l) in &pb {
                    let x = g.mul(&aw[i], &bw[k])?;
                    let y = g.mul(&aw[j], &bw[l])?;
                    best = best.max(scheme.distance(&x, &y)?);
                }
                Ok(best)
            })
            .try_reduce(|| 0, |p, q| Ok(p.max(q)))?;
        direct.push((w, omega));
    }
    let modulus_grows = grows(&direct);
    Ok(BornologyReport {
        verdict,
        checked: xs.len(),
        witness,
        delta,
        direct_modulus: direct,
        modulus_grows,
    })
}

/// Criterion for bornologity of `a -> a^-1` on `A`: `A^-1 A` inside `Q(A^-1)`.
/// The criterion is only sufficient, so the direct modulus is reported on its own.
pub fn inversion_bornologity_check<N: NormScheme>(
    scheme: &N,
    a: &ElemSet<Elem<N>>,
    radius: u64,
    delta: u64,
    budget: usize,
) -> Result<BornologyReport<Elem<N>>> {
    let g = scheme.group();
    let inverse_set = match a {
        ElemSet::Whole => ElemSet::Whole,
        ElemSet::Subgroup(s) => ElemSet::Subgroup(s.clone()),
        ElemSet::Finite(v) => ElemSet::Finite(v.iter().map(|x| g.inv(x)).collect::<Result<_>>()?),
    };
    let a_r = truncate(scheme, a, radius, budget)?;
    let xs = difference_set(scheme, &a_r, radius, budget)?;
    let (verdict, witness) = if g.is_abelian() {
        (BornologyVerdict::Consistent, None)
    } else {
        orbit_criterion(scheme, &xs, &inverse_set, budget)?
    };
    let mut direct = Vec::new();
    for w in windows(radius) {
        let aw = truncate(scheme, a, w, budget)?;
        let pa = close_pairs(scheme, &aw, delta)?;
        let omega = pa
            .par_iter()
            .map(|&(i, j)| scheme.distance(&g.inv(&aw[i])?, &g.inv(&aw[j])?))
            .try_reduce(|| 0, |p, q| Ok(p.max(q)))?;
        direct.push((w, omega));
    }
    let modulus_grows = grows(&direct);
    Ok(BornologyReport {
        verdict,
        checked: xs.len(),
        witness,
        delta,
        direct_modulus: direct,
        modulus_grows,
    })
}
