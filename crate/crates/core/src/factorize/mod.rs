//! Explicit coarse equivalences: extension splittings, `Z x Z_n ~ Z`,
//! coordinatewise assembly, block matching of chain spaces and the
//! classification of abelian descriptors.

mod abelian;
mod chain_match;
mod classify;
mod extension;

use std::fmt;

use serde::Serialize;

use crate::coarse::{
    product_map, verify_certificate, CertificateReport, CoarseCertificate, MetricSpace,
    ProductSpace,
};
use crate::error::Result;

pub use abelian::{
    interleave_witness, z_times_zn_witness, ZSpace, ZnSpace, ZxZnSpace, ZXZN_RADIUS,
};
pub use chain_match::{chain_match_witness, ChainMatch};
pub use classify::{classification_witness, Classification, MatchTable};
pub use extension::{t4_witness, t5_witness, SectionFn, T5Ingredients};

/// Which construction produced a recipe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Construction {
    T4,
    T5,
    ZxZn,
    Interleave,
    ChainMatch,
    Classification,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Construction::T4 => "t4",
            Construction::T5 => "t5",
            Construction::ZxZn => "z_times_zn",
            Construction::Interleave => "interleave",
            Construction::ChainMatch => "chain_match",
            Construction::Classification => "classification",
        };
        f.write_str(s)
    }
}

/// Balls and modulus grids on which a recipe is checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window<Dx, Dy> {
    pub radius_x: Dx,
    pub radius_y: Dy,
    pub deltas_x: Vec<Dx>,
    pub deltas_y: Vec<Dy>,
}

/// A named construction with its certificate and the window it is checked on.
/// Nothing is claimed outside the window.
pub struct WitnessRecipe<X: MetricSpace, Y: MetricSpace> {
    pub construction: Construction,
    /// Human readable ingredients (groups, chains, sections, coordinates).
    pub ingredients: Vec<String>,
    pub certificate: CoarseCertificate<X, Y>,
    pub window: Window<X::Dist, Y::Dist>,
}

impl<X: MetricSpace, Y: MetricSpace> WitnessRecipe<X, Y> {
    pub fn is_bijective(&self) -> bool {
        self.certificate.f.bijective
    }

    pub fn verify(&self) -> Result<CertificateReport<X, Y>> {
        let w = &self.window;
        verify_certificate(
            &self.certificate,
            w.radius_x,
            w.radius_y,
            &w.deltas_x,
            &w.deltas_y,
        )
    }
}

/// Verification outcome of one recipe, without point types.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageSummary {
    pub construction: Construction,
    pub maps: String,
    pub ingredients: Vec<String>,
    pub bijective: bool,
    pub radius_x: u64,
    pub radius_y: u64,
    pub k: u64,
    /// `(delta, omega_f(delta))`
    pub modulus_f: Vec<(u64, u64)>,
    pub modulus_g: Vec<(u64, u64)>,
    pub roundtrip_x: u64,
    pub roundtrip_y: u64,
    pub points_x: usize,
    pub points_y: usize,
    pub passed: bool,
    pub failures: Vec<String>,
}

impl<X: MetricSpace<Dist = u64>, Y: MetricSpace<Dist = u64>> WitnessRecipe<X, Y> {
    /// Verifies and flattens the report.
    pub fn summarize(&self) -> Result<StageSummary> {
        let r = self.verify()?;
        let table = |d: &[u64], o: &[u64]| d.iter().copied().zip(o.iter().copied()).collect();
        Ok(StageSummary {
            construction: self.construction,
            maps: format!(
                "{}: {} -> {}",
                self.certificate.f.name,
                self.certificate.f.domain.name(),
                self.certificate.f.codomain.name()
            ),
            ingredients: self.ingredients.clone(),
            bijective: self.is_bijective(),
            radius_x: self.window.radius_x,
            radius_y: self.window.radius_y,
            k: r.k,
            modulus_f: table(&r.modulus_f.deltas, &r.modulus_f.omega),
            modulus_g: table(&r.modulus_g.deltas, &r.modulus_g.omega),
            roundtrip_x: r.roundtrip_x.max,
            roundtrip_y: r.roundtrip_y.max,
            points_x: r.roundtrip_x.points,
            points_y: r.roundtrip_y.points,
            passed: r.passed,
            failures: r.failures,
        })
    }
}

/// `f1 x f2` with `g1 x g2` on max-metric products; `K` and the declared bounds
/// are the larger of the two. Tagged with the second recipe's construction.
pub fn product_witness<X1, Y1, X2, Y2>(
    first: &WitnessRecipe<X1, Y1>,
    second: &WitnessRecipe<X2, Y2>,
    window: Window<u64, u64>,
) -> WitnessRecipe<ProductSpace<X1, X2>, ProductSpace<Y1, Y2>>
where
    X1: MetricSpace<Dist = u64> + 'static,
    Y1: MetricSpace<Dist = u64> + 'static,
    X2: MetricSpace<Dist = u64> + 'static,
    Y2: MetricSpace<Dist = u64> + 'static,
{
    let (a, b) = (&first.certificate, &second.certificate);
    let mut cert = CoarseCertificate::new(
        product_map(&a.f, &b.f),
        product_map(&a.g, &b.g),
        a.k.max(b.k),
    );
    if let (Some(fa), Some(ga), Some(fb), Some(gb)) = (
        a.f_bound.clone(),
        a.g_bound.clone(),
        b.f_bound.clone(),
        b.g_bound.clone(),
    ) {
        cert = cert.with_bounds(move |d| fa(d).max(fb(d)), move |d| ga(d).max(gb(d)));
    }
    let mut ingredients = first.ingredients.clone();
    ingredients.extend(second.ingredients.iter().cloned());
    WitnessRecipe {
        construction: second.construction,
        ingredients,
        certificate: cert,
        window,
    }
}
