//! The JSON domain file.
//!
//! ```json
//! {
//!   "schema": 1,
//!   "model": "half-plane",
//!   "vertices": [
//!     { "name": "v1", "point": [0, 1] },
//!     { "name": "v2", "point": [0, 2.718281828459045] },
//!     { "name": "v3", "point": [1, 2] }
//!   ],
//!   "edges": [
//!     { "kind": "A", "from": "v1", "to": "v2" },
//!     { "kind": "C", "from": "v2", "to": "v3", "data": 0 },
//!     { "kind": "C", "from": "v3", "to": "v1", "data": [[0, 0], [0.5, 1], [1, 0]] }
//!   ]
//! }
//! ```
//!
//! Ideal vertices use `"ideal"`: an abscissa or `"inf"` in the half-plane
//! model, a boundary angle in the disk model. Edges of one boundary
//! component share a `"component"` index (default `0`) and are listed in
//! order. Horocycle sizes follow the model: Euclidean diameter, or height
//! for `∞`, in the half-plane; Euclidean diameter in the disk.

use crate::domain::{BoundaryData, Edge, EdgeKind, ScherkDomain};
use crate::error::{Error, Result, SchemaIssue};
use crate::hyperbolic::disk::{horocycle_from_disk, ideal_from_angle, to_halfplane};
use crate::hyperbolic::{Endpoint, HPoint, Horocycle, IdealPoint};
use crate::lab::{ChartCurve, Normal, NonuniquenessConfig, NonzeroFluxConfig};
use crate::solver::{SequenceConfig, SolverOptions};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use std::collections::{BTreeMap, HashMap};
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    HalfPlane,
    Disk,
}

/// An ideal coordinate: a number, or the string `"inf"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IdealSpec {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<IdealSpec>,
}

/// Boundary data: one constant or `(t, value)` samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DataSpec {
    Constant(f64),
    Samples(Vec<[f64; 2]>),
}

fn is_zero(c: &usize) -> bool {
    *c == 0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub kind: EdgeKind,
    pub from: String,
    pub to: String,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub component: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<DataSpec>,
    /// Interior points of a curved `C` edge.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub path: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HorocycleSpec {
    pub vertex: String,
    pub size: f64,
}

/// Settings for `solve` and `sequence`. Absent fields take the library defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generations: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_edge: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_inset: Option<f64>,
    /// Probe points, in the file's model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probes: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonzero_flux: Option<NonzeroFluxConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonuniqueness: Option<NonuniquenessConfig>,
}

/// A named curve for the `flux` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcSpec {
    pub name: String,
    /// Polyline vertices in the file's model. Disk points are mapped one by
    /// one, so disk polylines should be dense.
    pub points: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub closed: bool,
    #[serde(default = "default_normal")]
    pub normal: Normal,
}

fn default_normal() -> Normal {
    Normal::Right
}

/// The document as written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainFile {
    pub schema: u32,
    pub model: Model,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertices: Vec<VertexSpec>,
    pub edges: Vec<EdgeSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub horocycles: Vec<HorocycleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiments: Option<ExperimentBlock>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub arcs: Vec<ArcSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A named curve ready for flux evaluation, in half-plane coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedArc {
    pub name: String,
    pub curve: ChartCurve,
    pub normal: Normal,
}

/// A parsed and validated file.
#[derive(Debug, Clone)]
pub struct ParsedDomain {
    pub file: DomainFile,
    pub domain: ScherkDomain,
    pub arcs: Vec<NamedArc>,
}

/// Byte offsets of the list elements, for error positions.
#[derive(Deserialize)]
struct Spans<'a> {
    #[serde(borrow, default)]
    vertices: Vec<&'a RawValue>,
    #[serde(borrow, default)]
    edges: Vec<&'a RawValue>,
    #[serde(borrow, default)]
    horocycles: Vec<&'a RawValue>,
    #[serde(borrow, default)]
    arcs: Vec<&'a RawValue>,
}

struct Locator<'a> {
    text: &'a str,
    spans: Option<Spans<'a>>,
}

impl<'a> Locator<'a> {
    fn new(text: &'a str) -> Self {
        Self { text, spans: serde_json::from_str(text).ok() }
    }

    fn line_col(&self, offset: usize) -> (usize, usize) {
        let before = &self.text[..offset.min(self.text.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rfind('\n').map_or(before.chars().count(), |i| before[i + 1..].chars().count()) + 1;
        (line, column)
    }

    fn element(&self, list: &str, i: usize) -> (usize, usize) {
        let raw = self.spans.as_ref().and_then(|s| match list {
            "vertices" => s.vertices.get(i),
            "edges" => s.edges.get(i),
            "horocycles" => s.horocycles.get(i),
            "arcs" => s.arcs.get(i),
            _ => None,
        });
        match raw {
            Some(r) => self.line_col(r.get().as_ptr() as usize - self.text.as_ptr() as usize),
            None => self.key(list),
        }
    }

    fn key(&self, key: &str) -> (usize, usize) {
        self.text.find(&format!("\"{key}\"")).map_or((1, 1), |o| self.line_col(o))
    }
}

struct Issues<'a> {
    loc: Locator<'a>,
    list: Vec<SchemaIssue>,
}

impl Issues<'_> {
    fn at(&mut self, (line, column): (usize, usize), path: String, message: impl Into<String>) {
        self.list.push(SchemaIssue { line, column, path, message: message.into() });
    }

    fn element(&mut self, list: &str, i: usize, field: &str, message: impl Into<String>) {
        let pos = self.loc.element(list, i);
        let path = if field.is_empty() { format!("{list}[{i}]") } else { format!("{list}[{i}].{field}") };
        self.at(pos, path, message);
    }

    fn key(&mut self, key: &str, message: impl Into<String>) {
        let pos = self.loc.key(key);
        self.at(pos, key.to_string(), message);
    }
}

impl DomainFile {
    /// Reads the document without resolving it.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::Schema(vec![SchemaIssue {
                line: e.line(),
                column: e.column(),
                path: "document".into(),
                message: strip_position(&e.to_string()),
            }])
        })
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("domain files always serialize");
        s.push('\n');
        s
    }

    /// Half-plane description of an existing domain, with vertex names kept.
    pub fn from_domain(d: &ScherkDomain) -> Self {
        let vertices = d
            .vertices
            .iter()
            .zip(&d.names)
            .map(|(v, name)| match v {
                Endpoint::Interior(p) => VertexSpec { name: name.clone(), point: Some([p.x, p.y]), ideal: None },
                Endpoint::Ideal(IdealPoint::Infinity) => {
                    VertexSpec { name: name.clone(), point: None, ideal: Some(IdealSpec::Text("inf".into())) }
                }
                Endpoint::Ideal(IdealPoint::Finite(a)) => {
                    VertexSpec { name: name.clone(), point: None, ideal: Some(IdealSpec::Number(*a)) }
                }
            })
            .collect();
        let edges = d
            .edges()
            .map(|(c, _, e)| EdgeSpec {
                kind: e.kind,
                from: d.names[e.from].clone(),
                to: d.names[e.to].clone(),
                component: c,
                data: e.data.as_ref().map(|b| match b.samples.as_slice() {
                    [(_, v0), (_, v1)] if v0 == v1 => DataSpec::Constant(*v0),
                    s => DataSpec::Samples(s.iter().map(|(t, v)| [*t, *v]).collect()),
                }),
                path: e.path.iter().map(|p| [p.x, p.y]).collect(),
            })
            .collect();
        let horocycles = d
            .horocycles
            .iter()
            .zip(&d.names)
            .filter_map(|(h, name)| h.map(|h| HorocycleSpec { vertex: name.clone(), size: h.size }))
            .collect();
        DomainFile {
            schema: SCHEMA_VERSION,
            model: Model::HalfPlane,
            name: None,
            vertices,
            edges,
            horocycles,
            solver: None,
            experiments: None,
            arcs: Vec::new(),
            seed: None,
        }
    }

    fn point(&self, [x, y]: [f64; 2]) -> std::result::Result<Endpoint, String> {
        match self.model {
            Model::HalfPlane => HPoint::new(x, y).map(Endpoint::Interior).map_err(|e| e.to_string()),
            Model::Disk => {
                if x * x + y * y >= 1.0 {
                    return Err(format!("({x}, {y}) is not inside the unit disk"));
                }
                to_halfplane(x, y).map_err(|e| e.to_string())
            }
        }
    }

    fn ideal(&self, spec: &IdealSpec) -> std::result::Result<IdealPoint, String> {
        match (self.model, spec) {
            (_, IdealSpec::Number(v)) if !v.is_finite() => Err("ideal coordinate must be finite".into()),
            (Model::HalfPlane, IdealSpec::Number(v)) => Ok(IdealPoint::Finite(*v)),
            (Model::Disk, IdealSpec::Number(v)) => Ok(ideal_from_angle(*v)),
            (Model::HalfPlane, IdealSpec::Text(t)) if t == "inf" => Ok(IdealPoint::Infinity),
            (Model::Disk, IdealSpec::Text(t)) if t == "inf" => {
                Err("\"inf\" belongs to the half-plane model; give a boundary angle".into())
            }
            (_, IdealSpec::Text(t)) => Err(format!("expected a number or \"inf\", found {t:?}")),
        }
    }

    /// Half-plane probe points of the solver block.
    pub fn probes(&self) -> Result<Vec<(f64, f64)>> {
        let Some(probes) = self.solver.as_ref().and_then(|s| s.probes.as_ref()) else {
            return Ok(Vec::new());
        };
        probes
            .iter()
            .map(|p| match self.point(*p) {
                Ok(Endpoint::Interior(q)) => Ok((q.x, q.y)),
                Ok(_) => Err(Error::Misconfiguration("probe on the ideal boundary".into())),
                Err(e) => Err(Error::Misconfiguration(e)),
            })
            .collect()
    }

    /// Sequence settings from the solver block over the library defaults.
    pub fn sequence_config(&self) -> Result<SequenceConfig> {
        let mut cfg = SequenceConfig::default();
        let mut options = SolverOptions::default();
        if let Some(s) = &self.solver {
            if let Some(h) = s.h {
                cfg.h = h;
            }
            if let Some(l) = &s.levels {
                cfg.levels = l.clone();
            }
            if let Some(g) = &s.generations {
                cfg.generations = g.clone();
            }
            if let Some(t) = s.tolerance {
                options.tolerance = t;
            }
            if let Some(n) = s.max_iterations {
                options.max_iterations = n;
            }
            if let Some(n) = s.per_edge {
                cfg.per_edge = n;
            }
            if let Some(i) = s.edge_inset {
                cfg.edge_inset = i;
            }
        }
        cfg.options = options;
        cfg.probes = self.probes()?;
        Ok(cfg)
    }

    /// Checks references and builds the domain.
    pub fn resolve(self, text: &str) -> Result<ParsedDomain> {
        let mut issues = Issues { loc: Locator::new(text), list: Vec::new() };
        if self.schema != SCHEMA_VERSION {
            issues.key("schema", format!("unsupported schema version {}, expected {SCHEMA_VERSION}", self.schema));
        }

        let mut index: HashMap<&str, usize> = HashMap::new();
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for (i, v) in self.vertices.iter().enumerate() {
            if v.name.is_empty() {
                issues.element("vertices", i, "name", "vertex names cannot be empty");
            } else if index.insert(v.name.as_str(), i).is_some() {
                issues.element("vertices", i, "name", format!("duplicate vertex name {:?}", v.name));
            }
            let endpoint = match (&v.point, &v.ideal) {
                (Some(p), None) => self.point(*p),
                (None, Some(q)) => self.ideal(q).map(Endpoint::Ideal),
                _ => Err("give exactly one of \"point\" and \"ideal\"".into()),
            };
            match endpoint {
                Ok(e) => vertices.push(e),
                Err(m) => {
                    issues.element("vertices", i, "", m);
                    vertices.push(Endpoint::Ideal(IdealPoint::Infinity));
                }
            }
        }

        let mut components: BTreeMap<usize, Vec<Edge>> = BTreeMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            let mut ends = [0usize; 2];
            for (slot, (field, name)) in [("from", &e.from), ("to", &e.to)].into_iter().enumerate() {
                match index.get(name.as_str()) {
                    Some(v) => ends[slot] = *v,
                    None => issues.element("edges", i, field, format!("unknown vertex {name:?}")),
                }
            }
            let mut edge = Edge::new(e.kind, ends[0], ends[1]);
            match (&e.data, e.kind) {
                (Some(_), EdgeKind::A | EdgeKind::B) => {
                    issues.element("edges", i, "data", "A and B edges carry infinite data and take no samples")
                }
                (Some(DataSpec::Constant(c)), _) => edge = edge.with_data(BoundaryData::constant(*c)),
                (Some(DataSpec::Samples(s)), _) => {
                    match BoundaryData::new(s.iter().map(|[t, v]| (*t, *v)).collect()) {
                        Ok(b) if b.samples.first().is_some_and(|s| s.0 < 0.0) || b.samples.last().is_some_and(|s| s.0 > 1.0) => {
                            issues.element("edges", i, "data", "sample abscissae must lie in [0, 1]")
                        }
                        Ok(b) => edge = edge.with_data(b),
                        Err(err) => issues.element("edges", i, "data", strip_prefix(&err)),
                    }
                }
                (None, _) => {}
            }
            if !e.path.is_empty() {
                let mut path = Vec::with_capacity(e.path.len());
                for p in &e.path {
                    match self.point(*p) {
                        Ok(Endpoint::Interior(q)) => path.push(q),
                        Ok(_) => issues.element("edges", i, "path", "path points must be interior"),
                        Err(m) => issues.element("edges", i, "path", m),
                    }
                }
                edge = edge.with_path(path);
            }
            components.entry(e.component).or_default().push(edge);
        }
        if self.edges.is_empty() {
            issues.key("edges", "the domain needs at least one boundary component");
        }
        if let Some((pos, c)) = components.keys().enumerate().find(|(p, c)| *p != **c) {
            issues.key("edges", format!("component indices must run from 0 without gaps; found {c} in position {pos}"));
        }
        let mut seen_component = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if seen_component.last() != Some(&e.component) {
                if seen_component.contains(&e.component) {
                    issues.element("edges", i, "component", "edges of one component must be listed together");
                }
                seen_component.push(e.component);
            }
        }

        let mut horocycles: Vec<Option<Horocycle>> = vec![None; vertices.len()];
        for (i, h) in self.horocycles.iter().enumerate() {
            let Some(&v) = index.get(h.vertex.as_str()) else {
                issues.element("horocycles", i, "vertex", format!("unknown vertex {:?}", h.vertex));
                continue;
            };
            if horocycles[v].is_some() {
                issues.element("horocycles", i, "vertex", format!("second horocycle at {:?}", h.vertex));
                continue;
            }
            let made = match (vertices[v], self.model) {
                (Endpoint::Ideal(p), Model::HalfPlane) => Horocycle::new(p, h.size),
                (Endpoint::Ideal(_), Model::Disk) => match &self.vertices[v].ideal {
                    Some(IdealSpec::Number(angle)) => horocycle_from_disk(*angle, h.size),
                    _ => continue,
                },
                (Endpoint::Interior(_), _) => {
                    issues.element("horocycles", i, "vertex", format!("{:?} is not an ideal vertex", h.vertex));
                    continue;
                }
            };
            match made {
                Ok(hc) => horocycles[v] = Some(hc),
                Err(err) => issues.element("horocycles", i, "size", strip_prefix(&err)),
            }
        }

        if let Some(s) = &self.solver {
            if s.h.is_some_and(|h| !(h > 0.0)) {
                issues.key("solver", "h must be positive");
            }
            if s.levels.as_ref().is_some_and(|l| l.is_empty() || l.windows(2).any(|w| !(w[1] > w[0]))) {
                issues.key("solver", "levels must be non-empty and strictly increasing");
            }
        }

        let mut arcs = Vec::with_capacity(self.arcs.len());
        let mut arc_names: HashMap<&str, usize> = HashMap::new();
        for (i, a) in self.arcs.iter().enumerate() {
            if arc_names.insert(a.name.as_str(), i).is_some() {
                issues.element("arcs", i, "name", format!("duplicate arc name {:?}", a.name));
            }
            if a.points.len() < 2 {
                issues.element("arcs", i, "points", "an arc needs at least two points");
                continue;
            }
            let mut points = Vec::with_capacity(a.points.len() + 1);
            for p in &a.points {
                match self.point(*p) {
                    Ok(Endpoint::Interior(q)) => points.push((q.x, q.y)),
                    Ok(_) => issues.element("arcs", i, "points", "arc points must be interior"),
                    Err(m) => issues.element("arcs", i, "points", m),
                }
            }
            if a.closed {
                points.push(points[0]);
            }
            arcs.push(NamedArc { name: a.name.clone(), curve: ChartCurve::Polyline { points }, normal: a.normal });
        }

        if !issues.list.is_empty() {
            return Err(Error::Schema(issues.list));
        }
        let names = self.vertices.iter().map(|v| v.name.clone()).collect();
        match ScherkDomain::new(vertices, names, components.into_values().collect(), horocycles) {
            Ok(domain) => Ok(ParsedDomain { file: self, domain, arcs }),
            Err(err) => {
                issues.key("edges", strip_prefix(&err));
                Err(Error::Schema(issues.list))
            }
        }
    }
}

fn strip_prefix(err: &Error) -> String {
    match err {
        Error::InvalidDomain(m) | Error::Misconfiguration(m) | Error::Domain(m) => m.clone(),
        other => other.to_string(),
    }
}

/// serde_json appends " at line L column C"; the issue carries those separately.
fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

/// Parses and validates domain-file text.
pub fn parse_domain(text: &str) -> Result<ParsedDomain> {
    DomainFile::from_json(text)?.resolve(text)
}

/// Reads, parses and validates a domain file.
pub fn read_domain_file(path: &Path) -> Result<ParsedDomain> {
    let text = std::fs::read_to_string(path)?;
    parse_domain(&text)
}
