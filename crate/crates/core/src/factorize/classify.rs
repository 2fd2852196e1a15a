use serde::Serialize;

use super::{
    chain_match_witness, interleave_witness, product_witness, Construction, StageSummary, Window,
    WitnessRecipe, ZSpace,
};
use crate::coarse::{CoarseCertificate, GroupSpace, PointMap, ProductSpace};
use crate::error::{Error, Result};
use crate::groups::{
    DescriptorChain, DescriptorElem, DescriptorGroup, FactorElem, FactorialChain, Group,
    GroupDescriptor, Vector,
};
use crate::metrics::{L1Norm, WeightedNorm, DEFAULT_BUDGET};
use crate::quotients::ChainCosetSpace;

/// Largest torsion ball matched against `Q/Z`.
const MATCH_POINTS: u64 = 4096;

/// Block table of a chain matching stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchTable {
    pub level_u: usize,
    pub level_v: usize,
    pub sizes_u: Vec<u64>,
    pub sizes_v: Vec<u64>,
    pub assignment: Vec<usize>,
    pub section: Vec<usize>,
    pub k: u64,
}

/// Coarse type of an abelian descriptor with the verified stages reaching it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub descriptor: String,
    /// Torsion-free rank, `None` when infinite.
    pub rank: Option<usize>,
    pub finitely_generated: bool,
    pub target: String,
    pub stages: Vec<StageSummary>,
    pub chain_match: Option<MatchTable>,
    pub passed: bool,
}

fn target_name(rank: Option<usize>, fg: bool) -> String {
    let free = match rank {
        None => "Z^inf".to_string(),
        Some(0) => String::new(),
        Some(1) => "Z".into(),
        Some(r) => format!("Z^{r}"),
    };
    match (free.is_empty(), fg || rank.is_none()) {
        (true, true) => "0".into(),
        (false, true) => free,
        (true, false) => "Q/Z".into(),
        (false, false) => format!("{free} + Q/Z"),
    }
}

type DGroup = DescriptorGroup<i64>;
type DElem = DescriptorElem<i64>;
type ZmSpace = GroupSpace<L1Norm<i64>>;
type Weighted = GroupSpace<WeightedNorm<DGroup>>;

/// Splits an element into its free coordinates and the rest.
fn split(e: &DElem) -> (Vector<i64>, DElem) {
    let mut free = Vector::new();
    let mut rest = Vec::new();
    for c in &e.0 {
        match c {
            FactorElem::Free(v) => free.extend(v.iter().copied()),
            other => rest.push(other.clone()),
        }
    }
    (free, DescriptorElem(rest))
}

fn join(ranks: &[Option<usize>], free: &Vector<i64>, rest: &DElem) -> Result<DElem> {
    let mut out = Vec::with_capacity(ranks.len());
    let (mut at, mut t) = (0, 0);
    for r in ranks {
        match r {
            Some(m) => {
                let part = free
                    .get(at..at + m)
                    .ok_or_else(|| Error::invalid("free part too short"))?;
                out.push(FactorElem::Free(part.iter().copied().collect()));
                at += m;
            }
            None => {
                out.push(
                    rest.0
                        .get(t)
                        .cloned()
                        .ok_or_else(|| Error::invalid("torsion part too short"))?,
                );
                t += 1;
            }
        }
    }
    Ok(DescriptorElem(out))
}

/// Norm bound, in canonical weights, for torsion elements of chain level at most `d`.
fn torsion_cost(summands: &[GroupDescriptor], d: u64) -> u64 {
    let mut total = 0;
    for s in summands {
        match s {
            GroupDescriptor::CyclicSum { orders, tail } => {
                for i in 0..d as usize {
                    let (order, weight) = match orders.get(i) {
                        Some(m) => (*m, 1),
                        None => match tail {
                            Some(p) => (*p, (i - orders.len()) as u64 + 1),
                            None => break,
                        },
                    };
                    total += order / 2 * weight;
                }
            }
            GroupDescriptor::QmodZ => total += (2..=d).map(|k| (k - 1) * k).sum::<u64>(),
            _ => {}
        }
    }
    total
}

fn identity_on(rank: usize, radius: u64) -> WitnessRecipe<ZmSpace, ZmSpace> {
    let z = GroupSpace::new(L1Norm::<i64>::new(rank, DEFAULT_BUDGET));
    let f = PointMap::<ZmSpace, ZmSpace>::identity(z);
    let g = f.inverse_map().expect("identity has an inverse");
    WitnessRecipe {
        construction: Construction::Classification,
        ingredients: vec![format!("identity on Z^{rank}")],
        certificate: CoarseCertificate::new(f, g, 0).with_bounds(|d| d, |d| d),
        window: Window {
            radius_x: radius,
            radius_y: radius,
            deltas_x: vec![1, 2],
            deltas_y: vec![1, 2],
        },
    }
}

/// Target and verified witnesses for an abelian descriptor.
///
/// Finitely generated: projection onto the free part. Otherwise: the
/// canonical weighted norm is reweighted to `Z^r` times the torsion chain
/// space, whose ball is block matched against `Q/Z`; for `r > 0` the identity
/// of `Z^r` is multiplied in. `Z^inf` gets the coordinatewise identity.
pub fn classification_witness(descriptor: &GroupDescriptor) -> Result<Classification> {
    if !descriptor.is_abelian() {
        return Err(Error::invalid(format!(
            "{descriptor} is not abelian; only abelian descriptors are classified"
        )));
    }
    let rank = descriptor.free_rank();
    let fg = descriptor.is_finitely_generated();
    let target = target_name(rank, fg);
    let summands = descriptor.summands();
    let mut out = Classification {
        descriptor: descriptor.to_string(),
        rank,
        finitely_generated: fg,
        target,
        stages: Vec::new(),
        chain_match: None,
        passed: false,
    };
    let Some(r) = rank else {
        if summands.len() != 1 {
            return Err(Error::Unsupported(format!(
                "{descriptor}: Z^inf with further summands is not classified"
            )));
        }
        let coords = (0..3)
            .map(|_| identity_on(1, 4))
            .collect::<Vec<WitnessRecipe<ZSpace, ZSpace>>>();
        out.stages
            .push(interleave_witness(coords, 8, vec![1, 2, 4])?.summarize()?);
        out.passed = out.stages.iter().all(|s| s.passed);
        return Ok(out);
    };

    let group = DGroup::new(descriptor)?;
    let ranks: Vec<Option<usize>> = summands
        .iter()
        .map(|s| match s {
            GroupDescriptor::FreeAbelian(m) => Some(*m),
            _ => None,
        })
        .collect();
    let weighted: Weighted =
        GroupSpace::new(WeightedNorm::canonical(group.clone(), DEFAULT_BUDGET));
    let zr: ZmSpace = GroupSpace::new(L1Norm::<i64>::new(r, DEFAULT_BUDGET));
    let torsion: Vec<GroupDescriptor> = summands
        .iter()
        .filter(|s| !matches!(s, GroupDescriptor::FreeAbelian(_)))
        .cloned()
        .collect();

    if fg {
        // every finite coordinate sits below level 64
        let diam: u64 = torsion_cost(&torsion, 64);
        let rk = ranks.clone();
        let zero_torsion = split(&group.identity()).1;
        let f = PointMap::new(
            "projection onto the free part",
            weighted,
            zr,
            |x: &DElem| Ok(split(x).0),
        );
        let g = PointMap::new(
            "inclusion of the free part",
            f.codomain.clone(),
            f.domain.clone(),
            move |v: &Vector<i64>| join(&rk, v, &zero_torsion),
        );
        let recipe = WitnessRecipe {
            construction: Construction::Classification,
            ingredients: vec![
                format!("{descriptor} with canonical weights"),
                format!("torsion diameter {diam}"),
            ],
            certificate: CoarseCertificate::new(f, g, diam).with_bounds(|d| d, |d| d),
            window: Window {
                radius_x: 6,
                radius_y: 6,
                deltas_x: vec![1, 2, 3, 4],
                deltas_y: vec![1, 2, 3, 4],
            },
        };
        out.stages.push(recipe.summarize()?);
        out.passed = out.stages.iter().all(|s| s.passed);
        return Ok(out);
    }

    // reweighting onto Z^r x (torsion chain space)
    let tgroup = DGroup::new(&GroupDescriptor::DirectSum(torsion.clone()))?;
    let tchain = DescriptorChain::new(tgroup)?;
    let tspace = ChainCosetSpace::new(tchain, DEFAULT_BUDGET);
    let split_space = ProductSpace::new(zr.clone(), tspace.clone());
    let rk = ranks.clone();
    let f = PointMap::new(
        "split into free part and torsion",
        weighted,
        split_space,
        |x: &DElem| Ok(split(x)),
    )
    .with_inverse(move |p: &(Vector<i64>, DElem)| join(&rk, &p.0, &p.1));
    let tors = torsion.clone();
    let reweight = WitnessRecipe {
        construction: Construction::Classification,
        ingredients: vec![
            format!("{descriptor} with canonical weights"),
            "torsion with its chain ultrametric".into(),
        ],
        certificate: CoarseCertificate::bijection(f)?
            .with_bounds(|d| d, move |d| d + torsion_cost(&tors, d)),
        window: Window {
            radius_x: 6,
            radius_y: 4,
            deltas_x: vec![1, 2, 3, 4],
            deltas_y: vec![1, 2, 3],
        },
    };
    out.stages.push(reweight.summarize()?);

    // largest torsion level with at most MATCH_POINTS points
    let mut level = 0;
    let mut size = 1u64;
    loop {
        let next =
            size.saturating_mul(crate::groups::Chain::index(&**tspace.chain(), level + 1)? as u64);
        if next > MATCH_POINTS {
            break;
        }
        size = next;
        level += 1;
    }
    let qz = ChainCosetSpace::new(FactorialChain::<i64>::new(), DEFAULT_BUDGET);
    let matched = chain_match_witness(tspace, qz, level)?;
    out.stages.push(matched.recipe.summarize()?);
    if r > 0 {
        let (rx, ry) = if r == 1 { (8, 6) } else { (4, 4) };
        let window = Window {
            radius_x: rx.min(matched.level_u as u64),
            radius_y: ry.min(matched.level_v as u64),
            deltas_x: vec![1, 2, 3, 4],
            deltas_y: vec![1, 2, 3, 4],
        };
        out.stages
            .push(product_witness(&identity_on(r, rx), &matched.recipe, window).summarize()?);
    }
    out.chain_match = Some(MatchTable {
        level_u: matched.level_u,
        level_v: matched.level_v,
        sizes_u: matched.sizes_u.clone(),
        sizes_v: matched.sizes_v.clone(),
        assignment: matched.assignment.clone(),
        section: matched.section.clone(),
        k: matched.k,
    });
    out.passed = out.stages.iter().all(|s| s.passed);
    Ok(out)
}
