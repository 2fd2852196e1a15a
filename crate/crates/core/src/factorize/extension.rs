use std::collections::BTreeSet;
use std::sync::Arc;

use super::{Construction, Window, WitnessRecipe};
use crate::analysis::{enumerate_set, quasi_centralizer_test, ElemSet, QVerdict};
use crate::coarse::{CoarseCertificate, GroupSpace, PointMap, ProductSpace};
use crate::error::{Error, Result};
use crate::groups::Group;
use crate::metrics::NormScheme;
use crate::quotients::{
    quasi_normality_witness, CosetSpace, QuasiNormality, Subgroup, SubgroupSpace,
};

type Elem<N> = <<N as NormScheme>::G as Group>::Elem;

/// A section `G/H -> G`, evaluated on canonical coset keys.
pub type SectionFn<E> = Arc<dyn Fn(&E) -> Result<E> + Send + Sync>;

type Domain<N, S, Q> = ProductSpace<SubgroupSpace<N, S>, Q>;

fn rejected(reason: String) -> Error {
    Error::Construction { level: 0, reason }
}

/// Section values on the quotient window, each checked to lie in its coset.
fn section_values<Q: CosetSpace<Dist = u64>>(
    quotient: &Q,
    s: &SectionFn<Q::Point>,
    radius: u64,
) -> Result<Vec<(Q::Point, Q::Point)>> {
    let mut out = Vec::new();
    for q in quotient.ball(radius)? {
        let v = s(&q)?;
        if quotient.coset_of(&v)? != q {
            return Err(rejected(format!(
                "not a section: s({q:?}) = {v:?} lies in another coset"
            )));
        }
        out.push((q, v));
    }
    Ok(out)
}

fn orbit_check<N: NormScheme>(
    scheme: &N,
    x: &Elem<N>,
    acting: &ElemSet<Elem<N>>,
    label: &str,
    budget: usize,
) -> Result<()> {
    match quasi_centralizer_test(scheme, x, acting, budget)? {
        QVerdict::InQ { .. } => Ok(()),
        QVerdict::EvidenceAgainst { trace } => Err(rejected(format!(
            "{x:?} is not in Q({label}): orbit trace {trace:?}"
        ))),
        QVerdict::Inconclusive { trace } => Err(rejected(format!(
            "{x:?} in Q({label}) undecided at budget: trace {trace:?}"
        ))),
    }
}

/// `H x G/H -> G`, `(x, yH) -> s(yH) x`, inverse `z -> (s(zH)^-1 z, zH)`.
///
/// Every section value on the quotient window must pass the `Q(H)` orbit test;
/// the first failure rejects the construction. Moduli are checked by
/// comparing the window with its half.
pub fn t4_witness<N, S, Q>(
    scheme: Arc<N>,
    sub: Arc<S>,
    quotient: Q,
    section: SectionFn<Elem<N>>,
    window: Window<u64, u64>,
    budget: usize,
) -> Result<WitnessRecipe<Domain<N, S, Q>, GroupSpace<N>>>
where
    N: NormScheme + 'static,
    S: Subgroup<N::G> + 'static,
    Q: CosetSpace<Point = Elem<N>, Dist = u64, Group = N::G> + 'static,
{
    let gens = sub.generators();
    let values = section_values(&quotient, &section, window.radius_x)?;
    if !gens.is_empty() {
        let acting = ElemSet::Subgroup(gens);
        for (_, v) in &values {
            orbit_check(&*scheme, v, &acting, &sub.name(), budget)?;
        }
    }
    let domain = ProductSpace::new(
        SubgroupSpace::new(scheme.clone(), sub.clone()),
        quotient.clone(),
    );
    let group = GroupSpace::shared(scheme.clone());
    let (s1, s2) = (section.clone(), section);
    let (g1, g2) = (scheme.group().clone(), scheme.group().clone());
    let q2 = quotient;
    let f = PointMap::new(
        "(x, yH) -> s(yH) x",
        domain,
        group,
        move |p: &(Elem<N>, Elem<N>)| g1.mul(&s1(&p.1)?, &p.0),
    )
    .with_inverse(move |z: &Elem<N>| {
        let q = q2.coset_of(z)?;
        let s = s2(&q)?;
        Ok((g2.between(&s, z)?, q))
    });
    Ok(WitnessRecipe {
        construction: Construction::T4,
        ingredients: vec![
            format!("G = {}", scheme.name()),
            format!("H = {}", sub.name()),
            format!("section checked on {} cosets", values.len()),
        ],
        certificate: CoarseCertificate::bijection(f)?,
        window,
    })
}

/// Data for [`t5_witness`]: the set `A = A^-1` holding the section values and,
/// optionally, the finite set `F` with `x^-1 H x` inside `F H` for every `x`.
pub struct T5Ingredients<E> {
    pub f_set: Option<Vec<E>>,
    pub a_label: String,
    pub a_contains: Arc<dyn Fn(&E) -> bool + Send + Sync>,
    /// `A` as an acting set for the orbit evidence `Q(A) = G`.
    pub a_set: ElemSet<E>,
    /// Elements of `G`, by norm, tested for membership in `Q(A)` and used to search for `F`.
    pub samples: usize,
}

/// `H x G/H -> G`, `(x, yH) -> x s(yH)^-1`, inverse `z -> (z s(z^-1 H), z^-1 H)`.
///
/// Requires section values in `A`, orbit evidence that sampled elements lie
/// in `Q(A)`, and a finite `F` (given, or assembled from quasi-normality
/// witnesses of the samples).
pub fn t5_witness<N, S, Q>(
    scheme: Arc<N>,
    sub: Arc<S>,
    quotient: Q,
    section: SectionFn<Elem<N>>,
    ingredients: T5Ingredients<Elem<N>>,
    window: Window<u64, u64>,
    budget: usize,
) -> Result<WitnessRecipe<Domain<N, S, Q>, GroupSpace<N>>>
where
    N: NormScheme + 'static,
    S: Subgroup<N::G> + 'static,
    Q: CosetSpace<Point = Elem<N>, Dist = u64, Group = N::G> + 'static,
{
    let g = scheme.group();
    let values = section_values(&quotient, &section, window.radius_x)?;
    for (q, v) in &values {
        if !(ingredients.a_contains)(v) {
            return Err(rejected(format!(
                "s({q:?}) = {v:?} is not in {}",
                ingredients.a_label
            )));
        }
    }
    let (samples, _) = enumerate_set(
        &*scheme,
        &ElemSet::Whole,
        ingredients.samples.max(1),
        budget,
    )?;
    for x in &samples {
        orbit_check(
            &*scheme,
            x,
            &ingredients.a_set,
            &ingredients.a_label,
            budget,
        )?;
    }
    let f_size = match &ingredients.f_set {
        Some(f) => f.len(),
        None => {
            let mut classes = BTreeSet::new();
            for x in &samples {
                match quasi_normality_witness(&*scheme, &*sub, x, budget)? {
                    QuasiNormality::Witness(c) => classes.extend(c),
                    QuasiNormality::Inconclusive { trace, .. } => {
                        return Err(rejected(format!(
                            "no finite F found for {x:?} at budget: trace {trace:?}"
                        )))
                    }
                }
            }
            classes.len()
        }
    };
    let domain = ProductSpace::new(
        SubgroupSpace::new(scheme.clone(), sub.clone()),
        quotient.clone(),
    );
    let group = GroupSpace::shared(scheme.clone());
    let (s1, s2) = (section.clone(), section);
    let (g1, g2) = (g.clone(), g.clone());
    let q2 = quotient;
    let f = PointMap::new(
        "(x, yH) -> x s(yH)^-1",
        domain,
        group,
        move |p: &(Elem<N>, Elem<N>)| {
            let si = g1.inv(&s1(&p.1)?)?;
            g1.mul(&p.0, &si)
        },
    )
    .with_inverse(move |z: &Elem<N>| {
        let q = q2.coset_of(&g2.inv(z)?)?;
        Ok((g2.mul(z, &s2(&q)?)?, q))
    });
    Ok(WitnessRecipe {
        construction: Construction::T5,
        ingredients: vec![
            format!("G = {}", scheme.name()),
            format!("H = {}", sub.name()),
            format!("A = {}", ingredients.a_label),
            format!("|F| = {f_size}"),
            format!("Q(A) evidence on {} elements", samples.len()),
        ],
        certificate: CoarseCertificate::bijection(f)?,
        window,
    })
}
