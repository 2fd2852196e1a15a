use std::sync::Arc;

use anyhow::{anyhow, Context};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use coarse_core::analysis::{
    conjugacy_orbit, distortion_profile, growth_fit, quasi_centralizer_test, ElemSet,
};
use coarse_core::asdim::{
    canonical_cover, chain_cover, exact_min_colors, verify_cover, ColoredCover,
};
use coarse_core::coarse::{GroupSpace, MetricSpace};
use coarse_core::factorize::{
    classification_witness, t4_witness, z_times_zn_witness, SectionFn, Window,
};
use coarse_core::groups::{
    Chain, CoordinateChain, CyclicSum, DescriptorElem, DescriptorGroup, FactorialChain, Group,
    GroupDescriptor, Heisenberg, ModChain,
};
use coarse_core::metrics::{
    doubling_constant, growth_sequence, L1Norm, NormScheme, WeightedNorm, WordNorm, DEFAULT_BUDGET,
};
use coarse_core::quotients::{
    section_bound_check, Alpha, ChainCosetSpace, HausdorffCosetSpace, HeisenbergCenter, Section,
    SemigroupPredicate,
};
use coarse_core::Error;

use crate::report::Report;
use crate::{Command, Common, RunConfig, SchemeChoice, VerifyTarget};

type DGroup = DescriptorGroup<i64>;
type DElem = DescriptorElem<i64>;

enum Scheme {
    Word(WordNorm<DGroup>),
    Weighted(WeightedNorm<DGroup>),
}

macro_rules! with_scheme {
    ($scheme:expr, $n:ident => $body:expr) => {
        match $scheme {
            Scheme::Word($n) => $body,
            Scheme::Weighted($n) => $body,
        }
    };
}

/// Budget and configuration errors exit with 2, everything else with 1.
fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Overflow { .. }) => 2,
        Some(core) if core.is_budget_or_config() => 2,
        Some(_) => 1,
        None => 2,
    }
}

pub fn run(config: &RunConfig) -> Report {
    match dispatch(config) {
        Ok(r) => r,
        Err(e) => Report::failure(exit_code(&e), format!("{e:#}")),
    }
}

fn dispatch(config: &RunConfig) -> anyhow::Result<Report> {
    let c = &config.common;
    match &config.command {
        Command::Ball { list } => ball(c, *list),
        Command::Growth { n } => growth(c, *n),
        Command::Growthfit { n, tail } => growthfit(c, *n, *tail),
        Command::Section { level, eps, index } => section(c, *level, *eps, *index),
        Command::Witness => witness(c),
        Command::Verify { target, n, samples } => verify(c, *target, *n, *samples),
        Command::Modulus => modulus(c),
        Command::Asdim {
            d,
            m,
            colors_witness,
            limit,
        } => asdim(c, d, m, *colors_witness, *limit),
        Command::Orbit {
            x,
            acting,
            finite,
            limit,
        } => orbit(c, x, acting, *finite, *limit),
        Command::Distortion { sub, n } => distortion(c, sub, *n),
        Command::Doubling => doubling(c),
    }
}

fn descriptor(c: &Common) -> anyhow::Result<GroupDescriptor> {
    Ok(GroupDescriptor::parse(&c.descriptor)?)
}

fn scheme(c: &Common) -> anyhow::Result<(DGroup, Scheme)> {
    let g = DGroup::parse(&c.descriptor)?;
    let fg = g.descriptor().is_finitely_generated();
    let s = match (c.scheme, fg) {
        (SchemeChoice::Word, _) | (SchemeChoice::Auto, true) => {
            Scheme::Word(WordNorm::standard(g.clone(), c.budget)?)
        }
        _ => Scheme::Weighted(WeightedNorm::canonical(g.clone(), c.budget)),
    };
    Ok((g, s))
}

fn word_norm(c: &Common) -> anyhow::Result<WordNorm<DGroup>> {
    if c.scheme == SchemeChoice::Weighted {
        return Err(Error::invalid(
            "growth is measured in the word metric; drop --scheme weighted",
        )
        .into());
    }
    Ok(WordNorm::standard(DGroup::parse(&c.descriptor)?, c.budget)?)
}

fn elem(g: &DGroup, text: &str) -> anyhow::Result<DElem> {
    let v: Value =
        serde_json::from_str(text).with_context(|| format!("element {text:?} is not JSON"))?;
    Ok(g.elem_from_json(&v)?)
}

fn elems(g: &DGroup, text: &str) -> anyhow::Result<Vec<DElem>> {
    let v: Value = serde_json::from_str(text).with_context(|| format!("{text:?} is not JSON"))?;
    let items = v
        .as_array()
        .ok_or_else(|| anyhow!("expected a JSON list of elements"))?;
    items.iter().map(|e| Ok(g.elem_from_json(e)?)).collect()
}

fn ball(c: &Common, list: bool) -> anyhow::Result<Report> {
    let (g, s) = scheme(c)?;
    let b = with_scheme!(&s, n => n.ball(c.radius)?);
    let name = with_scheme!(&s, n => n.name());
    let mut r = if list {
        Report::new(&["norm", "element"])
    } else {
        Report::new(&["r", "size"])
    };
    let sizes: Vec<usize> = (0..=c.radius).map(|k| b.count_within(k)).collect();
    r.set("norm", name).set("sizes", json!(sizes));
    if list {
        let points: Vec<Value> = b
            .points
            .iter()
            .map(|(n, e)| json!({"norm": n, "element": g.elem_to_json(e)}))
            .collect();
        for (n, e) in &b.points {
            r.row(vec![n.to_string(), g.elem_to_json(e).to_string()]);
        }
        r.set("elements", points);
    } else {
        for (k, s) in sizes.iter().enumerate() {
            r.row(vec![k.to_string(), s.to_string()]);
        }
    }
    Ok(r)
}

fn growth(c: &Common, n: usize) -> anyhow::Result<Report> {
    let w = word_norm(c)?;
    let p = growth_sequence(&w, n);
    let mut r = Report::new(&["n", "size"]);
    for (k, s) in p.sizes.iter().enumerate() {
        r.row(vec![k.to_string(), s.to_string()]);
    }
    r.set("generators", p.generators.clone())
        .set("sizes", json!(p.sizes))
        .set("truncated", p.truncated);
    if p.truncated {
        r.exit = 2;
        r.error = Some(format!(
            "budget of {} elements reached after n = {}",
            c.budget,
            p.max_n()
        ));
    }
    Ok(r)
}

fn growthfit(c: &Common, n: usize, tail: f64) -> anyhow::Result<Report> {
    let w = word_norm(c)?;
    let p = growth_sequence(&w, n);
    if p.truncated {
        return Err(Error::BudgetExceeded {
            limit: c.budget,
            lower_bound: None,
        })
        .context(format!("growth sequence stopped at n = {}", p.max_n()));
    }
    let fit = growth_fit::<f64>(&p, tail)?;
    let mut r = Report::new(&["degree", "constant", "residual", "tail_from", "tail_to"]);
    r.row(vec![
        fit.degree.to_string(),
        fit.constant.to_string(),
        fit.residual.to_string(),
        fit.tail.0.to_string(),
        fit.tail.1.to_string(),
    ]);
    r.set("sizes", json!(p.sizes))
        .set("tail", json!([fit.tail.0, fit.tail.1]))
        .set(
            "fitted",
            json!({"degree": fit.degree, "constant": fit.constant, "residual": fit.residual}),
        );
    Ok(r)
}

fn section_report<C, N>(s: &Section<C, N>, level: usize, eps: usize) -> anyhow::Result<Report>
where
    C: Chain + 'static,
    N: NormScheme<G = C::G>,
{
    let rep = section_bound_check(s, level, eps)?;
    let mut r = Report::new(&["eps", "diameter"]);
    for (e, d) in rep.diameters.iter().enumerate() {
        r.row(vec![e.to_string(), d.to_string()]);
    }
    let first: Vec<String> = rep
        .violations
        .iter()
        .take(5)
        .map(|v| format!("{v:?}"))
        .collect();
    r.set("level", rep.level)
        .set("cosets", rep.cosets)
        .set("diameters", json!(rep.diameters))
        .set("pairs_checked", rep.pairs_checked)
        .set("not_sections", rep.not_sections.len())
        .set("outside_target", rep.outside_target.len())
        .set("violations", rep.violations.len())
        .set("first_violations", json!(first))
        .set("checked_horizon", s.checked_horizon());
    r.verdict(rep.passed());
    Ok(r)
}

fn section(c: &Common, level: usize, eps: usize, index: i64) -> anyhow::Result<Report> {
    match descriptor(c)? {
        GroupDescriptor::FreeAbelian(1) => {
            let chain = Arc::new(ModChain::<i64>::new(index)?);
            let norm = Arc::new(L1Norm::<i64>::new(1, c.budget));
            let s = Section::build(
                chain,
                norm,
                SemigroupPredicate::all(),
                Alpha::MinimalNorm,
                level,
                c.budget,
            )?;
            let mut r = section_report(&s, level, eps)?;
            r.set("subgroup", format!("{index}Z"));
            Ok(r)
        }
        GroupDescriptor::CyclicSum {
            orders,
            tail: Some(p),
        } if orders.is_empty() => {
            let g = CyclicSum::infinite(p)?;
            let chain = Arc::new(CoordinateChain::over_first(g.clone(), 1));
            let norm = Arc::new(WeightedNorm::coordinates(g, c.budget));
            let s = Section::build(
                chain,
                norm,
                SemigroupPredicate::all(),
                Alpha::MinimalNorm,
                level,
                c.budget,
            )?;
            let mut r = section_report(&s, level, eps)?;
            r.set("subgroup", "first coordinate");
            Ok(r)
        }
        other => Err(Error::Unsupported(format!(
            "sections are built for Z and Z_p^inf, not {other}"
        ))
        .into()),
    }
}

fn classification_report(
    c: &Common,
) -> anyhow::Result<(Report, coarse_core::factorize::Classification)> {
    let cl = classification_witness(&descriptor(c)?)?;
    let mut r = Report::new(&[
        "stage",
        "construction",
        "maps",
        "radius_x",
        "radius_y",
        "k",
        "passed",
    ]);
    for (i, s) in cl.stages.iter().enumerate() {
        r.row(vec![
            i.to_string(),
            s.construction.to_string(),
            s.maps.clone(),
            s.radius_x.to_string(),
            s.radius_y.to_string(),
            s.k.to_string(),
            s.passed.to_string(),
        ]);
    }
    let witness = if cl.finitely_generated {
        "projection"
    } else if cl.chain_match.is_some() {
        "chain_match"
    } else {
        "interleave"
    };
    let window = cl
        .stages
        .first()
        .map(|s| json!({"radius_x": s.radius_x, "radius_y": s.radius_y}));
    r.set("descriptor", cl.descriptor.clone())
        .set("target", cl.target.clone())
        .set("rank", json!(cl.rank))
        .set("finitely_generated", cl.finitely_generated)
        .set("witness", witness)
        .set("window", json!(window))
        .set("stages", serde_json::to_value(&cl.stages)?)
        .set("chain_match", serde_json::to_value(&cl.chain_match)?);
    r.verdict(cl.passed);
    Ok((r, cl))
}

fn witness(c: &Common) -> anyhow::Result<Report> {
    Ok(classification_report(c)?.0)
}

fn modulus(c: &Common) -> anyhow::Result<Report> {
    let (_, cl) = classification_report(c)?;
    let mut r = Report::new(&["stage", "map", "delta", "omega"]);
    let mut tables = Vec::new();
    for (i, s) in cl.stages.iter().enumerate() {
        for (map, table) in [("f", &s.modulus_f), ("g", &s.modulus_g)] {
            for (d, o) in table {
                r.row(vec![
                    i.to_string(),
                    map.into(),
                    d.to_string(),
                    o.to_string(),
                ]);
            }
        }
        tables.push(json!({"stage": i, "construction": s.construction.to_string(), "f": s.modulus_f, "g": s.modulus_g}));
    }
    r.set("target", cl.target.clone()).set("moduli", tables);
    r.verdict(cl.passed);
    Ok(r)
}

fn verify(c: &Common, target: VerifyTarget, n: u64, samples: usize) -> anyhow::Result<Report> {
    match target {
        VerifyTarget::Classification => witness(c),
        VerifyTarget::ZTimesZn => {
            let recipe = z_times_zn_witness(n)?;
            let s = recipe.summarize()?;
            let mut r = Report::new(&["map", "delta", "omega"]);
            for (map, table) in [("f", &s.modulus_f), ("g", &s.modulus_g)] {
                for (d, o) in table {
                    r.row(vec![map.into(), d.to_string(), o.to_string()]);
                }
            }
            r.set("stage", serde_json::to_value(&s)?);
            r.verdict(s.passed);
            Ok(r)
        }
        VerifyTarget::T4Center => t4_center(c),
        VerifyTarget::Axioms => axioms(c, samples),
    }
}

/// The obvious section `H(x, 0, z)` of the Heisenberg group over its center.
fn t4_center(c: &Common) -> anyhow::Result<Report> {
    let h = Heisenberg::<i64>::new();
    let scheme = Arc::new(WordNorm::heisenberg(h.clone(), DEFAULT_BUDGET)?);
    let sub = HeisenbergCenter::<i64>::default();
    let quotient = HausdorffCosetSpace::new(scheme.clone(), sub.clone(), c.budget);
    let s: SectionFn<[i64; 3]> = Arc::new(move |q: &[i64; 3]| Ok(h.elem(q[0], 0, q[2])));
    let radius = c.radius.min(8);
    let window = Window {
        radius_x: radius,
        radius_y: radius,
        deltas_x: vec![1, 2],
        deltas_y: vec![1, 2],
    };
    let w = t4_witness(scheme, Arc::new(sub), quotient, s, window, 256)?;
    let rep = w.verify()?;
    let mut r = Report::new(&["window", "delta", "omega"]);
    let mut push =
        |win: u64, m: &coarse_core::coarse::ModulusReport<([i64; 3], [i64; 3]), u64, u64>| {
            for (d, o) in m.deltas.iter().zip(&m.omega) {
                r.row(vec![win.to_string(), d.to_string(), o.to_string()]);
            }
        };
    if let Some(half) = &rep.half_modulus_f {
        push(half.radius, half);
    }
    push(rep.modulus_f.radius, &rep.modulus_f);
    let witness = rep
        .modulus_f
        .witnesses
        .first()
        .cloned()
        .flatten()
        .map(|(a, b)| json!([a, b]));
    r.set(
        "modulus_f",
        json!(rep
            .modulus_f
            .deltas
            .iter()
            .zip(&rep.modulus_f.omega)
            .collect::<Vec<_>>()),
    )
    .set(
        "half_modulus_f",
        json!(rep.half_modulus_f.as_ref().map(|m| m
            .deltas
            .iter()
            .zip(&m.omega)
            .collect::<Vec<_>>())),
    )
    .set("modulus_witness", json!(witness))
    .set("failures", json!(rep.failures));
    r.verdict(rep.passed);
    Ok(r)
}

/// Seeded samples from the ball of radius `--radius`.
fn axioms(c: &Common, samples: usize) -> anyhow::Result<Report> {
    let (g, s) = scheme(c)?;
    let pts = with_scheme!(&s, n => n.ball(c.radius)?).elements();
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut bad: Vec<String> = Vec::new();
    let e = g.identity();
    with_scheme!(&s, n => {
        if n.norm(&e)? != 0 {
            bad.push("|1| != 0".into());
        }
        for _ in 0..samples {
            let mut pick = || pts[rng.gen_range(0..pts.len())].clone();
            let (x, y, a) = (pick(), pick(), pick());
            let (nx, ny) = (n.norm(&x)?, n.norm(&y)?);
            if x != e && nx == 0 {
                bad.push(format!("|{x:?}| = 0"));
            }
            if n.norm(&g.inv(&x)?)? != nx {
                bad.push(format!("|x^-1| != |x| at {x:?}"));
            }
            if n.norm(&g.mul(&x, &y)?)? > nx + ny {
                bad.push(format!("triangle inequality fails at {x:?}, {y:?}"));
            }
            if n.distance(&g.mul(&a, &x)?, &g.mul(&a, &y)?)? != n.distance(&x, &y)? {
                bad.push(format!("left invariance fails at {a:?}, {x:?}, {y:?}"));
            }
        }
    });
    let mut r = Report::new(&["samples", "violations"]);
    r.row(vec![samples.to_string(), bad.len().to_string()]);
    r.set("samples", samples)
        .set("ball", pts.len())
        .set("violations", bad.len())
        .set(
            "first_violations",
            json!(bad.iter().take(5).collect::<Vec<_>>()),
        );
    r.verdict(bad.is_empty());
    Ok(r)
}

fn asdim(
    c: &Common,
    ds: &[u64],
    ms: &[u64],
    witness: bool,
    limit: usize,
) -> anyhow::Result<Report> {
    let radius = c.radius;
    match descriptor(c)? {
        GroupDescriptor::FreeAbelian(m) => {
            let space = GroupSpace::new(L1Norm::<i64>::new(m, c.budget));
            asdim_rows(&space, radius, ds, ms, witness, limit, |d| {
                Ok(canonical_cover(m, radius, d)?)
            })
        }
        GroupDescriptor::CyclicSum {
            orders,
            tail: Some(p),
        } if orders.is_empty() => {
            let space =
                ChainCosetSpace::new(CoordinateChain::new(CyclicSum::infinite(p)?), c.budget);
            asdim_rows(&space, radius, ds, ms, witness, limit, |d| {
                Ok(chain_cover(space.clone(), radius as usize, d)?)
            })
        }
        GroupDescriptor::QmodZ => {
            let space = ChainCosetSpace::new(FactorialChain::<i64>::new(), c.budget);
            asdim_rows(&space, radius, ds, ms, witness, limit, |d| {
                Ok(chain_cover(space.clone(), radius as usize, d)?)
            })
        }
        other => Err(Error::Unsupported(format!(
            "covers are built for Z^m, Z_p^inf and Q/Z, not {other}"
        ))
        .into()),
    }
}

fn pieces_json<X: MetricSpace<Dist = u64>>(cover: &ColoredCover<X>) -> Value {
    json!(cover
        .pieces
        .iter()
        .map(|p| json!({"color": p.color, "points": p.points.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>()}))
        .collect::<Vec<_>>())
}

fn asdim_rows<X: MetricSpace<Dist = u64>>(
    space: &X,
    radius: u64,
    ds: &[u64],
    ms: &[u64],
    witness: bool,
    limit: usize,
    build: impl Fn(u64) -> anyhow::Result<ColoredCover<X>>,
) -> anyhow::Result<Report> {
    let mut r = Report::new(&["D", "M", "colors", "mesh", "depth", "passed", "exact_min"]);
    let ambient = space.ball(radius)?;
    let mut covers = Vec::new();
    let mut all_passed = true;
    let mut consistent = true;
    for &d in ds {
        // a ball too small for the construction still gets the exact search
        let cover = match build(d) {
            Ok(c) => Some(c),
            Err(e)
                if ambient.len() <= limit
                    && matches!(e.downcast_ref::<Error>(), Some(Error::Invalid(_))) =>
            {
                r.set("construction_skipped", format!("{e:#}"));
                None
            }
            Err(e) => return Err(e),
        };
        let v = cover.as_ref().map(verify_cover).transpose()?;
        all_passed &= v.as_ref().is_none_or(|v| v.passed);
        let bounds = match (&v, ms.is_empty()) {
            (Some(v), true) => vec![v.mesh],
            (None, true) => {
                return Err(Error::invalid("give --M when no cover is constructed").into())
            }
            _ => ms.to_vec(),
        };
        let mut exact = Vec::new();
        for &m in &bounds {
            let found = if ambient.len() <= limit {
                Some(exact_min_colors(space, &ambient, d, m, limit)?)
            } else {
                None
            };
            let usable = v.as_ref().is_some_and(|v| v.passed && v.mesh <= m);
            let colors = cover.as_ref().map(|c| c.colors).filter(|_| usable);
            if let (Some(f), Some(c)) = (&found, colors) {
                consistent &= f.colors <= c;
            }
            let opt = |x: Option<String>| x.unwrap_or_default();
            r.row(vec![
                d.to_string(),
                m.to_string(),
                opt(colors.map(|c| c.to_string())),
                opt(v.as_ref().map(|v| v.mesh.to_string())),
                opt(v.as_ref().map(|v| v.depth.to_string())),
                opt(v.as_ref().map(|v| v.passed.to_string())),
                opt(found.as_ref().map(|f| f.colors.to_string())),
            ]);
            let mut row = json!({"M": m, "exact_min": found.as_ref().map(|f| f.colors), "lower_bound": found.as_ref().map(|f| f.lower_bound)});
            if witness {
                row["exact_witness"] = found
                    .as_ref()
                    .map(|f| pieces_json(&f.cover))
                    .unwrap_or(Value::Null);
            }
            exact.push(row);
        }
        let mut entry = json!({"D": d, "points": ambient.len(), "exact": exact});
        if let (Some(cover), Some(v)) = (&cover, &v) {
            entry["label"] = json!(cover.label);
            entry["colors"] = json!(cover.colors);
            entry["pieces"] = json!(v.pieces);
            entry["mesh"] = json!(v.mesh);
            entry["depth"] = json!(v.depth);
            entry["passed"] = json!(v.passed);
            entry["failures"] = json!(v.failures);
            entry["violation"] = json!(v.violation.as_ref().map(|w| format!("{w:?}")));
            if witness {
                entry["cover"] = pieces_json(cover);
            }
        }
        covers.push(entry);
    }
    r.set("space", space.name())
        .set("covers", covers)
        .set("consistent", consistent);
    r.verdict(all_passed && consistent);
    Ok(r)
}

fn parse_set(g: &DGroup, acting: &str, finite: bool) -> anyhow::Result<ElemSet<DElem>> {
    if acting == "whole" {
        return Ok(ElemSet::Whole);
    }
    let list = elems(g, acting)?;
    Ok(if finite {
        ElemSet::Finite(list)
    } else {
        ElemSet::Subgroup(list)
    })
}

fn orbit(c: &Common, x: &str, acting: &str, finite: bool, limit: usize) -> anyhow::Result<Report> {
    let (g, s) = scheme(c)?;
    let x = elem(&g, x)?;
    let set = parse_set(&g, acting, finite)?;
    let (rep, q) = with_scheme!(&s, n => (conjugacy_orbit(n, &x, &set, limit)?, quasi_centralizer_test(n, &x, &set, limit)?));
    let mut r = Report::new(&["acting", "orbit"]);
    for (a, o) in &rep.trace {
        r.row(vec![a.to_string(), o.to_string()]);
    }
    r.set("x", g.elem_to_json(&x))
        .set("acting", rep.acting.clone())
        .set("orbit_size", rep.orbit.len())
        .set("verdict", serde_json::to_value(&rep.verdict)?)
        .set("quasi_centralizer", serde_json::to_value(&q)?)
        .set("trace", json!(rep.trace))
        .set(
            "orbit",
            json!(rep
                .orbit
                .iter()
                .map(|e| g.elem_to_json(e))
                .collect::<Vec<_>>()),
        );
    Ok(r)
}

fn distortion(c: &Common, sub: &str, n: u64) -> anyhow::Result<Report> {
    let (g, s) = scheme(c)?;
    let sub = elems(&g, sub)?;
    let prof = with_scheme!(&s, a => distortion_profile::<_, f64>(a, &sub, n, c.budget)?);
    let mut r = Report::new(&["n", "min", "max", "count"]);
    for row in &prof.rows {
        r.row(vec![
            row.n.to_string(),
            row.min.to_string(),
            row.max.to_string(),
            row.count.to_string(),
        ]);
    }
    let rows: Vec<Value> = prof
        .rows
        .iter()
        .map(|w| json!({"n": w.n, "min": w.min, "max": w.max, "count": w.count}))
        .collect();
    r.set("generators", prof.generators)
        .set("rows", rows)
        .set("fitted", json!({"exponent": prof.exponent}));
    Ok(r)
}

fn doubling(c: &Common) -> anyhow::Result<Report> {
    let (_, s) = scheme(c)?;
    let d = with_scheme!(&s, n => doubling_constant(n, c.radius)?);
    let frac = |q: &num_rational::Ratio<u64>| format!("{}/{}", q.numer(), q.denom());
    let mut r = Report::new(&["r", "ratio"]);
    for (i, q) in d.ratios.iter().enumerate() {
        r.row(vec![(i + 1).to_string(), frac(q)]);
    }
    r.set("constant", frac(&d.constant))
        .set("attained_at", d.attained_at)
        .set(
            "ratios",
            json!(d.ratios.iter().map(frac).collect::<Vec<_>>()),
        );
    Ok(r)
}
