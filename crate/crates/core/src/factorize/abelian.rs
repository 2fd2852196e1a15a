use std::sync::Arc;

use super::{Construction, Window, WitnessRecipe};
use crate::coarse::{CoarseCertificate, GroupSpace, MetricSpace, PointMap, ProductSpace, SumSpace};
use crate::error::{Error, Result};
use crate::groups::{CyclicElem, CyclicSum, Vector};
use crate::metrics::{L1Norm, WeightedNorm};

/// `Z` with `|k|`.
pub type ZSpace = GroupSpace<L1Norm<i64>>;
/// `Z_n` with the word norm of the generator `1`.
pub type ZnSpace = GroupSpace<WeightedNorm<CyclicSum>>;
/// `Z x Z_n` with the max metric.
pub type ZxZnSpace = ProductSpace<ZSpace, ZnSpace>;

/// Radius of the window `z_times_zn_witness` is checked on.
pub const ZXZN_RADIUS: u64 = 10_000;

/// `Z x Z_n -> Z`, `(k, r) -> n k + r` with `r in {0, ..., n-1}`, and its inverse by floor division.
pub fn z_times_zn_witness(n: u64) -> Result<WitnessRecipe<ZxZnSpace, ZSpace>> {
    if n < 2 {
        return Err(Error::invalid(format!("Z x Z_n needs n >= 2, got {n}")));
    }
    let ni = i64::try_from(n).map_err(|_| Error::Overflow { op: "modulus" })?;
    let cyclic = CyclicSum::cyclic(n)?;
    let zn = GroupSpace::new(WeightedNorm::coordinates(cyclic.clone(), n as usize + 1));
    let z = GroupSpace::new(L1Norm::<i64>::new(1, 4 * ZXZN_RADIUS as usize + 16));
    let domain = ProductSpace::new(z.clone(), zn);
    let c2 = cyclic.clone();
    let f = PointMap::new(
        format!("(k, r) -> {n}k + r"),
        domain,
        z,
        move |p: &(Vector<i64>, CyclicElem)| {
            let r = p.1.get(0) as i64;
            let k = p.0[0];
            let m = k
                .checked_mul(ni)
                .and_then(|v| v.checked_add(r))
                .ok_or(Error::Overflow { op: "n k + r" })?;
            Ok(std::iter::once(m).collect())
        },
    )
    .with_inverse(move |m: &Vector<i64>| {
        let m = m[0];
        let k = m.div_euclid(ni);
        let r = m.rem_euclid(ni);
        Ok((std::iter::once(k).collect(), c2.elem(&[(0, r)])?))
    });
    let cert = CoarseCertificate::bijection(f)?.with_bounds(
        move |d| if d == 0 { 0 } else { n * d + (n - 1) },
        move |d| {
            if d == 0 {
                0
            } else {
                (d / n + 1).max(d.min(n / 2))
            }
        },
    );
    let deltas: Vec<u64> = vec![1, 2, 3, 4, 8];
    Ok(WitnessRecipe {
        construction: Construction::ZxZn,
        ingredients: vec![
            format!("Z x Z_{n}"),
            "residues 0..n-1, floor division".into(),
        ],
        certificate: cert,
        window: Window {
            radius_x: ZXZN_RADIUS,
            radius_y: ZXZN_RADIUS,
            deltas_x: deltas.clone(),
            deltas_y: deltas,
        },
    })
}

type Bound = Arc<dyn Fn(u64) -> u64 + Send + Sync>;

fn sum_bound(bounds: Vec<Bound>) -> impl Fn(u64) -> u64 + Send + Sync {
    move |d| {
        let mut total = 0;
        for (i, b) in bounds.iter().enumerate() {
            let w = SumSpace::<ZSpace>::weight(i);
            if w <= d {
                total += w * b(d / w);
            }
        }
        total
    }
}

/// Coordinatewise assembly `(x_i) -> (f_i(x_i))` of bijective witnesses that fix
/// the base points, on weighted sums of the coordinate spaces.
pub fn interleave_witness<X, Y>(
    coords: Vec<WitnessRecipe<X, Y>>,
    radius: u64,
    deltas: Vec<u64>,
) -> Result<WitnessRecipe<SumSpace<X>, SumSpace<Y>>>
where
    X: MetricSpace<Dist = u64> + 'static,
    Y: MetricSpace<Dist = u64> + 'static,
{
    let mut fs = Vec::new();
    let mut gs = Vec::new();
    let mut ingredients = Vec::new();
    for (i, r) in coords.iter().enumerate() {
        let c = &r.certificate;
        if !c.f.bijective || !c.f.has_inverse() {
            return Err(Error::invalid(format!(
                "coordinate {i} ({}) is not a bijective witness",
                c.f.name
            )));
        }
        let (x0, y0) = (c.f.domain.base_point(), c.f.codomain.base_point());
        if c.f.apply(&x0)? != y0 || c.g.apply(&y0)? != x0 {
            return Err(Error::invalid(format!(
                "coordinate {i} ({}) moves the identity",
                c.f.name
            )));
        }
        ingredients.push(format!("{i}: {}", c.f.name));
        fs.push(c.f.clone());
        gs.push(c.g.clone());
    }
    let domain = SumSpace::new(fs.iter().map(|f| f.domain.clone()).collect());
    let codomain = SumSpace::new(fs.iter().map(|f| f.codomain.clone()).collect());
    let (f2, g2) = (fs.clone(), gs.clone());
    let f = PointMap::new(
        "coordinatewise",
        domain,
        codomain,
        move |x: &Vec<X::Point>| f2.iter().zip(x).map(|(f, p)| f.apply(p)).collect(),
    )
    .with_inverse(move |y: &Vec<Y::Point>| g2.iter().zip(y).map(|(g, q)| g.apply(q)).collect());
    let mut cert = CoarseCertificate::bijection(f)?;
    let fb: Option<Vec<Bound>> = coords
        .iter()
        .map(|r| r.certificate.f_bound.clone())
        .collect();
    let gb: Option<Vec<Bound>> = coords
        .iter()
        .map(|r| r.certificate.g_bound.clone())
        .collect();
    if let (Some(fb), Some(gb)) = (fb, gb) {
        cert = cert.with_bounds(sum_bound(fb), sum_bound(gb));
    }
    Ok(WitnessRecipe {
        construction: Construction::Interleave,
        ingredients,
        certificate: cert,
        window: Window {
            radius_x: radius,
            radius_y: radius,
            deltas_x: deltas.clone(),
            deltas_y: deltas,
        },
    })
}
