//! Problem file schema, strict validation and compilation into library
//! types.
//!
//! Files are UTF-8 JSON. Unknown fields are rejected so that typos in
//! label keys cannot silently drop scientific payload. All referential
//! integrity (edge endpoints, label keys, divisor supports, order names)
//! is checked before anything is computed.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use jumplab::graph::{EdgeId, MultiGraph, VertexId};
use jumplab::jump::SectionDivisor;
use jumplab::labels::{BoundaryBasis, Label, LabelledGraph, OrderVector};

/// Error carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    pub fn from_lib(err: jumplab::Error) -> Self {
        let code = match err {
            jumplab::Error::DisconnectedNetwork => 3,
            jumplab::Error::TooLargeForEnumeration { .. } => 5,
            _ => 2,
        };
        CliError {
            code,
            message: err.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub divisor_basis: Vec<String>,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    #[serde(default)]
    pub divisors: BTreeMap<String, BTreeMap<String, i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orders: Option<BTreeMap<String, u64>>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub allow_nonzero_degree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub id: String,
    pub ends: [String; 2],
    pub label: BTreeMap<String, u64>,
}

fn is_false(b: &bool) -> bool {
    !*b
}

impl ProblemFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        serde_json::from_str(text)
            .map_err(|e| CliError::input(format!("invalid problem file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files serialize")
    }
}

/// Validated problem with library objects and name tables.
#[derive(Debug)]
pub struct CompiledProblem {
    pub lg: LabelledGraph,
    pub vertex_names: Vec<String>,
    pub edge_names: Vec<String>,
    pub divisors: BTreeMap<String, Vec<(VertexId, i64)>>,
    pub orders: Option<OrderVector>,
}

impl CompiledProblem {
    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edge_names[e.0]
    }

    pub fn graph(&self) -> &MultiGraph {
        self.lg.graph()
    }

    pub fn section_divisor(&self, name: &str) -> CliResult<SectionDivisor> {
        let supports = self
            .divisors
            .get(name)
            .ok_or_else(|| CliError::input(format!("divisor {name:?} is not declared")))?;
        Ok(SectionDivisor::new(supports.clone()))
    }

    /// Orders from the file, required.
    pub fn require_orders(&self) -> CliResult<&OrderVector> {
        self.orders
            .as_ref()
            .ok_or_else(|| CliError::input("this command needs an \"orders\" map in the file"))
    }

    /// Parses an inline `name=value,...` order assignment over the basis.
    pub fn parse_inline_orders(&self, text: &str) -> CliResult<OrderVector> {
        let basis = self.lg.basis();
        let mut by_name: BTreeMap<String, u64> = BTreeMap::new();
        for part in text.split(',').filter(|p| !p.trim().is_empty()) {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| CliError::input(format!("bad order assignment {part:?}")))?;
            let name = name.trim();
            if basis.index_of(name).is_none() {
                return Err(CliError::input(format!(
                    "order name {name:?} is not in the divisor basis"
                )));
            }
            let value: u64 = value
                .trim()
                .parse()
                .map_err(|_| CliError::input(format!("bad order value {value:?}")))?;
            by_name.insert(name.to_string(), value);
        }
        Ok(order_vector(basis, &by_name))
    }
}

fn order_vector(basis: &BoundaryBasis, by_name: &BTreeMap<String, u64>) -> OrderVector {
    OrderVector::new(
        basis
            .names()
            .iter()
            .map(|n| by_name.get(n).copied().unwrap_or(0))
            .collect(),
    )
}

pub fn compile(file: &ProblemFile) -> CliResult<CompiledProblem> {
    if file.vertices.is_empty() {
        return Err(CliError::input("at least one vertex is required"));
    }
    let mut vertex_index: BTreeMap<&str, VertexId> = BTreeMap::new();
    for (i, name) in file.vertices.iter().enumerate() {
        if vertex_index.insert(name, VertexId(i)).is_some() {
            return Err(CliError::input(format!("vertex {name:?} declared twice")));
        }
    }
    let basis = BoundaryBasis::new(file.divisor_basis.clone()).map_err(CliError::from_lib)?;

    let mut graph = MultiGraph::new(file.vertices.len());
    let mut labels: BTreeMap<EdgeId, Label> = BTreeMap::new();
    let mut edge_names = Vec::with_capacity(file.edges.len());
    let mut edge_seen: BTreeSet<&str> = BTreeSet::new();
    for spec in &file.edges {
        if !edge_seen.insert(&spec.id) {
            return Err(CliError::input(format!(
                "edge {:?} declared twice",
                spec.id
            )));
        }
        let mut ends = [VertexId(0); 2];
        for (slot, name) in ends.iter_mut().zip(&spec.ends) {
            *slot = *vertex_index.get(name.as_str()).ok_or_else(|| {
                CliError::input(format!("edge {:?}: unknown vertex {name:?}", spec.id))
            })?;
        }
        for key in spec.label.keys() {
            if basis.index_of(key).is_none() {
                return Err(CliError::input(format!(
                    "edge {:?}: label key {key:?} is not in the divisor basis",
                    spec.id
                )));
            }
        }
        let exponents: Vec<u64> = basis
            .names()
            .iter()
            .map(|n| spec.label.get(n).copied().unwrap_or(0))
            .collect();
        if exponents.iter().all(|&a| a == 0) {
            return Err(CliError::input(format!(
                "edge {:?}: label is the unit ideal (all exponents zero); \
                 such edges must be contracted before writing the file",
                spec.id
            )));
        }
        let id = graph.add_edge(ends[0], ends[1]);
        labels.insert(id, Label::new(exponents));
        edge_names.push(spec.id.clone());
    }

    let mut divisors = BTreeMap::new();
    for (name, weights) in &file.divisors {
        let mut supports = Vec::new();
        let mut degree = 0i64;
        for (vertex, &coefficient) in weights {
            let v = *vertex_index.get(vertex.as_str()).ok_or_else(|| {
                CliError::input(format!("divisor {name:?}: unknown vertex {vertex:?}"))
            })?;
            degree += coefficient;
            supports.push((v, coefficient));
        }
        if degree != 0 && !file.allow_nonzero_degree {
            return Err(CliError::input(format!(
                "divisor {name:?} has total degree {degree}; \
                 set \"allow_nonzero_degree\": true to permit it"
            )));
        }
        divisors.insert(name.clone(), supports);
    }

    let orders = match &file.orders {
        None => None,
        Some(by_name) => {
            for key in by_name.keys() {
                if basis.index_of(key).is_none() {
                    return Err(CliError::input(format!(
                        "order name {key:?} is not in the divisor basis"
                    )));
                }
            }
            Some(order_vector(&basis, by_name))
        }
    };

    let lg = LabelledGraph::new(graph, basis, labels).map_err(CliError::from_lib)?;
    Ok(CompiledProblem {
        lg,
        vertex_names: file.vertices.clone(),
        edge_names,
        divisors,
        orders,
    })
}
