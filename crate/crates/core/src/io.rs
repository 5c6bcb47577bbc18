//! Instance files, seeded instance generation and run configuration.
//!
//! An instance is a JSON document:
//!
//! ```json
//! {
//!   "kind": "complete_uniform",
//!   "k": 2,
//!   "m": 2,
//!   "default_weight": 1.0,
//!   "entries": [{"edge": [0, 1], "w": 0.5}]
//! }
//! ```
//!
//! `kind` is `complete_uniform` or `complete_partite`. Edges are strictly
//! increasing global vertex ids; partite part `i` is `[i·m, (i+1)·m)`. A
//! weight instance lists `entries` and needs `default_weight` unless the
//! entries cover every edge. A sublist instance instead carries
//! `sublist_members`, a list of edges, and no weights. Unknown fields are
//! rejected.
//!
//! Serialisation is canonical: every edge is written, in canonical order, and
//! floats use 17 significant digits so that a parse of the output restores
//! every value bit for bit.
//!
//! Random instances use ChaCha8 (`rand_chacha`) seeded with
//! `seed_from_u64(seed)`. A uniform variate is `(next_u64() >> 11) · 2⁻⁵³`,
//! and each edge draws one variate in canonical edge order.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::hypergraph::{Edge, EdgeSublist, HypergraphSpec, Kind};
use crate::weight::WeightVector;

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Weights(WeightVector),
    Sublist(EdgeSublist),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub spec: HypergraphSpec,
    pub payload: Payload,
}

impl Instance {
    pub fn weights(w: WeightVector) -> Self {
        Instance { spec: *w.spec(), payload: Payload::Weights(w) }
    }

    pub fn sublist(s: EdgeSublist) -> Self {
        Instance { spec: *s.base(), payload: Payload::Sublist(s) }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    kind: String,
    k: usize,
    m: usize,
    #[serde(default)]
    default_weight: Option<f64>,
    #[serde(default)]
    entries: Option<Vec<EntryDoc>>,
    #[serde(default)]
    sublist_members: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryDoc {
    edge: Vec<usize>,
    w: f64,
}

fn parse_edge(spec: &HypergraphSpec, vs: &[usize], locus: &str) -> Result<usize> {
    if vs.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::parse(locus, format!("edge {vs:?} is not strictly increasing")));
    }
    let edge = Edge::new(vs.to_vec()).map_err(|e| Error::parse(locus, e.to_string()))?;
    spec.edge_index(&edge).map_err(|e| Error::parse(locus, e.to_string()))
}

pub fn parse_instance(bytes: &[u8]) -> Result<Instance> {
    let doc: InstanceDoc = serde_json::from_slice(bytes)
        .map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    let kind: Kind = doc.kind.parse().map_err(|e: Error| Error::parse("kind", e.to_string()))?;
    let spec = HypergraphSpec::new(kind, doc.k, doc.m).map_err(|e| Error::parse("k/m", e.to_string()))?;

    if let Some(members) = doc.sublist_members {
        if doc.entries.is_some() || doc.default_weight.is_some() {
            return Err(Error::parse(
                "sublist_members",
                "a sublist instance carries no entries or default_weight",
            ));
        }
        let mut set = BTreeSet::new();
        for (i, vs) in members.iter().enumerate() {
            let locus = format!("sublist_members[{i}]");
            let idx = parse_edge(&spec, vs, &locus)?;
            if !set.insert(idx) {
                return Err(Error::parse(locus, format!("duplicate edge {vs:?}")));
            }
        }
        let sub = EdgeSublist::new(spec, set)?;
        return Ok(Instance::sublist(sub));
    }

    let entries = doc.entries.unwrap_or_default();
    let mut values: Vec<Option<f64>> = vec![None; spec.edge_count()];
    for (i, entry) in entries.iter().enumerate() {
        let idx = parse_edge(&spec, &entry.edge, &format!("entries[{i}].edge"))?;
        if !entry.w.is_finite() || entry.w < 0.0 {
            return Err(Error::parse(format!("entries[{i}].w"), format!("weight {} must be finite and >= 0", entry.w)));
        }
        if values[idx].replace(entry.w).is_some() {
            return Err(Error::parse(format!("entries[{i}].edge"), format!("duplicate edge {:?}", entry.edge)));
        }
    }
    if let Some(d) = doc.default_weight {
        if !d.is_finite() || d < 0.0 {
            return Err(Error::parse("default_weight", format!("weight {d} must be finite and >= 0")));
        }
    }
    let values = values
        .into_iter()
        .map(|v| v.or(doc.default_weight))
        .collect::<Option<Vec<f64>>>()
        .ok_or_else(|| Error::parse("default_weight", "required when entries do not cover every edge"))?;
    Ok(Instance::weights(WeightVector::new(spec, values)?))
}

/// Float with 17 significant digits, valid as a JSON number.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_edge(out: &mut String, vs: &[usize]) {
    out.push('[');
    for (i, v) in vs.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{v}");
    }
    out.push(']');
}

pub fn serialize_instance(inst: &Instance) -> String {
    let spec = &inst.spec;
    let mut out = String::new();
    let _ = write!(
        out,
        "{{\n  \"kind\": \"{}\",\n  \"k\": {},\n  \"m\": {},\n",
        spec.kind().as_str(),
        spec.k(),
        spec.m()
    );
    match &inst.payload {
        Payload::Weights(w) => {
            out.push_str("  \"entries\": [");
            for (i, (edge, &x)) in spec.enumerate_edges().zip(w.values()).enumerate() {
                out.push_str(if i == 0 { "\n    " } else { ",\n    " });
                out.push_str("{\"edge\": ");
                write_edge(&mut out, edge.vertices());
                let _ = write!(out, ", \"w\": {}}}", format_f64(x));
            }
            out.push_str("\n  ]\n");
        }
        Payload::Sublist(s) => {
            out.push_str("  \"sublist_members\": [");
            for (i, edge) in s.edges().enumerate() {
                out.push_str(if i == 0 { "\n    " } else { ",\n    " });
                write_edge(&mut out, edge.vertices());
            }
            if !s.is_empty() {
                out.push_str("\n  ");
            }
            out.push_str("]\n");
        }
    }
    out.push_str("}\n");
    out
}

/// Seeded stream of uniform variates on `[0, 1)`.
pub struct UniformStream {
    rng: ChaCha8Rng,
}

impl UniformStream {
    pub fn new(seed: u64) -> Self {
        UniformStream { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Weights drawn independently and uniformly from `[1, α]`.
pub fn gen_balanced(spec: &HypergraphSpec, alpha: f64, seed: u64) -> Result<WeightVector> {
    if !(alpha >= 1.0) || !alpha.is_finite() {
        return Err(Error::domain(format!("alpha must be finite and >= 1, got {alpha}")));
    }
    let mut u = UniformStream::new(seed);
    let values = (0..spec.edge_count()).map(|_| 1.0 + (alpha - 1.0) * u.next_f64()).collect();
    WeightVector::new(*spec, values)
}

/// Sublist keeping each edge independently with probability `p`.
pub fn gen_sublist(spec: &HypergraphSpec, p: f64, seed: u64) -> Result<EdgeSublist> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("edge probability must be in [0, 1], got {p}")));
    }
    let mut u = UniformStream::new(seed);
    let members = (0..spec.edge_count()).filter(|_| u.next_f64() < p).collect();
    EdgeSublist::new(*spec, members)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Machine,
}

/// Numeric settings shared by the command-line entry points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub tol: f64,
    pub max_sweeps: usize,
    pub leaf_budget: u64,
    pub seed: u64,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tol: 1e-10,
            max_sweeps: 10_000,
            leaf_budget: 1_000_000_000,
            seed: 0,
            output_format: OutputFormat::Text,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::domain(format!("tol must be > 0, got {}", self.tol)));
        }
        if self.max_sweeps < 1 || self.leaf_budget < 1 {
            return Err(Error::domain("budgets must be >= 1"));
        }
        Ok(())
    }

    pub fn exact(&self) -> crate::exact::ExactConfig {
        crate::exact::ExactConfig { leaf_budget: self.leaf_budget }
    }

    pub fn scaling(&self) -> crate::scaling::ScalingConfig {
        crate::scaling::ScalingConfig { tol: self.tol, max_sweeps: self.max_sweeps, ..Default::default() }
    }
}
