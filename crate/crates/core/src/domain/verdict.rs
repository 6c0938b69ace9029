use super::inscribed::{enumerate_polygons, EnumerationLimits, InscribedPolygon};
use super::model::{EdgeKind, ScherkDomain};
use super::truncation::truncation_table;
use super::TOL_STRICT;
use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;

/// Which existence theorem governs a domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Theorem {
    /// Compact domain, no ideal vertices.
    Compact,
    /// Ideal vertices together with `C` or `D` edges.
    MixedData,
    /// Ideal polygon with only `A` and `B` edges.
    IdealPolygon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictKind {
    Satisfied,
    Violated,
    Inconclusive,
}

/// The inequalities for one polygon at one generation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolygonCheck {
    pub polygon: String,
    pub vertices: Vec<usize>,
    pub is_whole_domain: bool,
    pub generation: u32,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// `γ - 2α`, required positive.
    pub margin_alpha: f64,
    /// `γ - 2β`, required positive.
    pub margin_beta: f64,
    /// Set when the polygon must satisfy `α = β` instead.
    pub equality: bool,
    pub status: VerdictKind,
}

impl PolygonCheck {
    /// Signed slack: positive when the polygon passes.
    pub fn slack(&self) -> f64 {
        if self.equality {
            -(self.alpha - self.beta).abs()
        } else {
            self.margin_alpha.min(self.margin_beta)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub theorem: Theorem,
    pub kind: VerdictKind,
    /// Horocycle generation at which the verdict was reached.
    pub generation: Option<u32>,
    pub witness: Option<PolygonCheck>,
    pub polygons_checked: usize,
    pub tolerance: f64,
    /// Checks at the deciding generation, tightest first.
    pub checks: Vec<PolygonCheck>,
}

/// Generations examined for domains with ideal vertices.
pub const GENERATIONS: [u32; 3] = [1, 2, 3];

fn classify(slack: f64, equality: bool, tol: f64) -> VerdictKind {
    if equality {
        if slack >= -tol {
            VerdictKind::Satisfied
        } else {
            VerdictKind::Violated
        }
    } else if slack > tol {
        VerdictKind::Satisfied
    } else if slack < -tol {
        VerdictKind::Violated
    } else {
        VerdictKind::Inconclusive
    }
}

fn evaluate(
    d: &ScherkDomain,
    polys: &[InscribedPolygon],
    generation: u32,
    equality_for_whole: bool,
) -> Result<Vec<PolygonCheck>> {
    polys
        .par_iter()
        .map(|p| {
            let row = truncation_table(d, p, &[generation])?.remove(0);
            let equality = equality_for_whole && p.is_whole_domain;
            let mut c = PolygonCheck {
                polygon: p.label(d),
                vertices: p.vertices.clone(),
                is_whole_domain: p.is_whole_domain,
                generation,
                alpha: row.alpha,
                beta: row.beta,
                gamma: row.gamma,
                margin_alpha: row.gamma - 2.0 * row.alpha,
                margin_beta: row.gamma - 2.0 * row.beta,
                equality,
                status: VerdictKind::Inconclusive,
            };
            c.status = if row.degenerate { VerdictKind::Inconclusive } else { classify(c.slack(), equality, TOL_STRICT) };
            Ok(c)
        })
        .collect()
}

fn sorted(mut checks: Vec<PolygonCheck>) -> Vec<PolygonCheck> {
    checks.sort_by(|a, b| a.slack().total_cmp(&b.slack()).then_with(|| a.vertices.cmp(&b.vertices)));
    checks
}

fn summarize(theorem: Theorem, generation: Option<u32>, checks: Vec<PolygonCheck>) -> Verdict {
    let checks = sorted(checks);
    let kind = if checks.iter().any(|c| c.status == VerdictKind::Violated) {
        VerdictKind::Violated
    } else if checks.iter().any(|c| c.status == VerdictKind::Inconclusive) {
        VerdictKind::Inconclusive
    } else {
        VerdictKind::Satisfied
    };
    let witness = (kind != VerdictKind::Satisfied).then(|| checks[0].clone());
    Verdict { theorem, kind, generation, witness, polygons_checked: checks.len(), tolerance: TOL_STRICT, checks }
}

fn polygons(d: &ScherkDomain) -> Result<Vec<InscribedPolygon>> {
    enumerate_polygons(d, &EnumerationLimits::default())
}

/// Compact domains: strict inequalities for every polygon, except that the
/// whole domain needs `α = β` when there are no `C` edges.
pub fn check_theorem1(d: &ScherkDomain) -> Result<Verdict> {
    if d.has_ideal_vertices() || d.has_kind(EdgeKind::D) {
        return Err(Error::Misconfiguration("the compact criterion needs a domain without ideal vertices".into()));
    }
    let polys = polygons(d)?;
    let equality = !d.has_kind(EdgeKind::C);
    let checks = evaluate(d, &polys, 1, equality)?;
    Ok(summarize(Theorem::Compact, None, checks))
}

fn with_generations(d: &ScherkDomain, theorem: Theorem, equality: bool) -> Result<Verdict> {
    let polys = polygons(d)?;
    let mut per_gen = Vec::new();
    for &g in &GENERATIONS {
        let v = summarize(theorem, Some(g), evaluate(d, &polys, g, equality)?);
        if v.kind == VerdictKind::Satisfied {
            return Ok(v);
        }
        per_gen.push(v);
    }
    // The slack γ_n - 2α_n never decreases with n, and it is constant exactly
    // when each ideal vertex of the polygon carries one A side (B for β).
    // A violation that is constant between the last two generations persists.
    let last = per_gen.pop().unwrap();
    let prev = per_gen.pop().unwrap();
    let persistent = last.checks.iter().find(|c| {
        c.status == VerdictKind::Violated
            && prev
                .checks
                .iter()
                .find(|p| p.vertices == c.vertices)
                .is_some_and(|p| (p.slack() - c.slack()).abs() <= 1e-9)
    });
    let mut v = last.clone();
    match persistent {
        Some(w) => {
            v.kind = VerdictKind::Violated;
            v.witness = Some(w.clone());
        }
        None => {
            v.kind = VerdictKind::Inconclusive;
        }
    }
    Ok(v)
}

/// Domains with ideal vertices and continuous data.
pub fn check_theorem2(d: &ScherkDomain) -> Result<Verdict> {
    if !(d.has_kind(EdgeKind::C) || d.has_kind(EdgeKind::D)) || !d.has_ideal_vertices() {
        return Err(Error::Misconfiguration(
            "this criterion needs ideal vertices and at least one C or D edge".into(),
        ));
    }
    require_horocycles(d)?;
    with_generations(d, Theorem::MixedData, false)
}

/// Ideal polygons with `A` and `B` edges only.
pub fn check_theorem3(d: &ScherkDomain) -> Result<Verdict> {
    if d.has_kind(EdgeKind::C) || d.has_kind(EdgeKind::D) || !d.has_ideal_vertices() {
        return Err(Error::Misconfiguration("this criterion needs an ideal polygon with A and B edges only".into()));
    }
    require_horocycles(d)?;
    with_generations(d, Theorem::IdealPolygon, true)
}

fn require_horocycles(d: &ScherkDomain) -> Result<()> {
    for (v, e) in d.vertices.iter().enumerate() {
        if e.is_ideal() && d.horocycles[v].is_none() {
            return Err(Error::Misconfiguration(format!("ideal vertex {} has no horocycle", d.names[v])));
        }
    }
    Ok(())
}

/// Dispatches to the criterion matching the boundary structure.
pub fn check(d: &ScherkDomain) -> Result<Verdict> {
    if !d.has_ideal_vertices() && !d.has_kind(EdgeKind::D) {
        check_theorem1(d)
    } else if d.has_kind(EdgeKind::C) || d.has_kind(EdgeKind::D) {
        check_theorem2(d)
    } else {
        check_theorem3(d)
    }
}
