//! Diagnostics at scale: conjugacy orbits, quasi-centralizers, growth fits and
//! subgroup distortion.

mod distortion;
mod orbit;

use crate::error::Result;
use crate::groups::Group;
use crate::metrics::{NormScheme, WordNorm};

pub use distortion::{
    distortion_profile, growth_fit, growth_fit_range, undistorted_chain_check, DistortionProfile,
    DistortionRow, GrowthFit, InclusionVerdict,
};
pub use orbit::{
    conjugacy_orbit, fc_test, quasi_centralizer_test, FcVerdict, OrbitReport, OrbitVerdict,
    QVerdict,
};

/// A subset of a group that can be listed in order of norm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElemSet<E> {
    Whole,
    /// The subgroup generated by these elements, listed by its own word norm.
    Subgroup(Vec<E>),
    Finite(Vec<E>),
}

impl<E: Clone + Ord> ElemSet<E> {
    pub fn label(&self) -> String {
        match self {
            ElemSet::Whole => "G".into(),
            ElemSet::Subgroup(g) => format!("<{} generators>", g.len()),
            ElemSet::Finite(v) => format!("finite set of {}", v.len()),
        }
    }
}

/// The first `count` elements of `set` in order of norm, and whether the set
/// was exhausted before reaching `count`.
pub fn enumerate_set<N: NormScheme>(
    scheme: &N,
    set: &ElemSet<<N::G as Group>::Elem>,
    count: usize,
    budget: usize,
) -> Result<(Vec<<N::G as Group>::Elem>, bool)> {
    match set {
        ElemSet::Finite(v) => {
            let mut keyed = v
                .iter()
                .map(|e| Ok((scheme.norm(e)?, e.clone())))
                .collect::<Result<Vec<_>>>()?;
            keyed.sort();
            keyed.dedup();
            let done = keyed.len() <= count;
            Ok((
                keyed.into_iter().take(count).map(|(_, e)| e).collect(),
                done,
            ))
        }
        ElemSet::Whole => {
            // stagnation proves finiteness only for path metrics
            let graph = scheme.unit_steps().is_some();
            let order = scheme.group().order();
            grow_until(
                |r| Ok(scheme.ball(r)?.elements()),
                count,
                |prev, cur| (graph && prev == cur) || order.is_some_and(|o| cur as u64 >= o),
            )
        }
        ElemSet::Subgroup(gens) => {
            let sub = WordNorm::new(scheme.group().clone(), gens, budget)?;
            grow_until(
                |r| Ok(sub.ball(r)?.elements()),
                count,
                |prev, cur| prev == cur,
            )
        }
    }
}

fn grow_until<E>(
    ball: impl Fn(u64) -> Result<Vec<E>>,
    count: usize,
    exhausted: impl Fn(usize, usize) -> bool,
) -> Result<(Vec<E>, bool)> {
    let mut r = 1;
    let mut prev = ball(0)?;
    loop {
        let cur = ball(r)?;
        if cur.len() >= count {
            return Ok((cur.into_iter().take(count).collect(), false));
        }
        if exhausted(prev.len(), cur.len()) {
            return Ok((cur, true));
        }
        prev = cur;
        r *= 2;
    }
}
