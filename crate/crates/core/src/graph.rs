//! Simple undirected graphs carrying a vertex weight.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, ParseError, Result};
use crate::linalg::SymMatrix;

/// Where the vertex weights came from.
///
/// `Degree` weights may be zero on isolated vertices; `Custom` weights are
/// always strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightRegime {
    Degree,
    Custom,
}

/// A simple graph on vertices `0..n` with vertex weights ω.
///
/// Edges are stored as sorted pairs `(i, j)` with `i < j`, in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    weights: Vec<f64>,
    regime: WeightRegime,
}

/// Two-colouring of the vertices; `side[v]` is the colour of `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub side: Vec<bool>,
}

impl WeightedGraph {
    /// Graph with explicit, strictly positive weights.
    pub fn new(n: usize, edges: &[(usize, usize)], weights: Vec<f64>) -> Result<Self> {
        let edges = normalize_edges(n, edges)?;
        if weights.len() != n {
            return Err(Error::InvalidGraph(format!(
                "expected {n} weights, got {}",
                weights.len()
            )));
        }
        if let Some((v, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > 0.0))
        {
            return Err(Error::InvalidGraph(format!(
                "weight of vertex {v} is {w}, weights must be positive"
            )));
        }
        Ok(Self {
            n,
            edges,
            weights,
            regime: WeightRegime::Custom,
        })
    }

    /// Graph weighted by vertex degree; isolated vertices get weight 0.
    pub fn with_degree_weight(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let edges = normalize_edges(n, edges)?;
        let mut weights = vec![0.0; n];
        for &(i, j) in &edges {
            weights[i] += 1.0;
            weights[j] += 1.0;
        }
        Ok(Self {
            n,
            edges,
            weights,
            regime: WeightRegime::Degree,
        })
    }

    pub fn with_constant_weight(n: usize, edges: &[(usize, usize)], c: f64) -> Result<Self> {
        Self::new(n, edges, vec![c; n])
    }

    /// Same edges, new strictly positive weights.
    pub fn reweighted(&self, weights: Vec<f64>) -> Result<Self> {
        Self::new(self.n, &self.edges, weights)
    }

    /// Same edges, degree weights.
    pub fn degree_weighted(&self) -> Self {
        Self::with_degree_weight(self.n, &self.edges).expect("edges already validated")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn regime(&self) -> WeightRegime {
        self.regime
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(i, j) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg
    }

    pub fn mean_weight(&self) -> f64 {
        self.weights.iter().sum::<f64>() / self.n as f64
    }

    fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }

    /// A(G): symmetric 0/1 matrix with zero diagonal.
    pub fn adjacency_matrix(&self) -> SymMatrix {
        self.edge_matrix(1.0, |_| 0.0)
    }

    /// D_ω(G) = diag(ω).
    pub fn weight_diag(&self) -> SymMatrix {
        SymMatrix::from_diag(&self.weights).expect("weights are finite and n >= 1")
    }

    /// L_ω(G) = D_ω(G) − A(G).
    pub fn laplacian(&self) -> SymMatrix {
        self.edge_matrix(-1.0, |w| w)
    }

    /// L†_ω(G) = D_ω(G) + A(G).
    pub fn signless_laplacian(&self) -> SymMatrix {
        self.edge_matrix(1.0, |w| w)
    }

    fn edge_matrix(&self, off: f64, diag: impl Fn(f64) -> f64) -> SymMatrix {
        let edges: BTreeSet<(usize, usize)> = self.edges.iter().copied().collect();
        SymMatrix::symmetric_from_fn(self.n, |i, j| {
            if i == j {
                diag(self.weights[i])
            } else if edges.contains(&(i, j)) {
                off
            } else {
                0.0
            }
        })
        .expect("n >= 1 and finite entries")
    }

    /// Breadth-first two-colouring, one component at a time.
    pub fn is_bipartite(&self) -> Option<Bipartition> {
        let adj = self.neighbours();
        let mut colour: Vec<Option<bool>> = vec![None; self.n];
        for start in 0..self.n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let cu = colour[u].expect("queued vertices are coloured");
                for &v in &adj[u] {
                    match colour[v] {
                        None => {
                            colour[v] = Some(!cu);
                            queue.push_back(v);
                        }
                        Some(cv) if cv == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(Bipartition {
            side: colour
                .into_iter()
                .map(|c| c.expect("every vertex visited"))
                .collect(),
        })
    }

    /// All weights equal up to `tol` (max − min ≤ tol).
    pub fn is_omega_regular(&self, tol: f64) -> bool {
        let (lo, hi) = self
            .weights
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &w| {
                (lo.min(w), hi.max(w))
            });
        hi - lo <= tol
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Vertex sets of the connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.neighbours();
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Disjoint union; vertices of `parts[k]` follow those of `parts[..k]` and
    /// each vertex keeps its weight.
    ///
    /// The result stays in the degree regime only if every part is; degree
    /// weights are preserved by disjoint union.
    pub fn disjoint_union(parts: &[WeightedGraph]) -> Result<WeightedGraph> {
        if parts.is_empty() {
            return Err(Error::Empty("disjoint union part list"));
        }
        let mut n = 0;
        let mut edges = Vec::new();
        let mut weights = Vec::new();
        for g in parts {
            edges.extend(g.edges.iter().map(|&(i, j)| (i + n, j + n)));
            weights.extend_from_slice(&g.weights);
            n += g.n;
        }
        let regime = if parts.iter().all(|g| g.regime == WeightRegime::Degree) {
            WeightRegime::Degree
        } else if weights.iter().all(|&w| w > 0.0) {
            WeightRegime::Custom
        } else {
            return Err(Error::InvalidGraph(
                "cannot mix zero degree weights with custom weights".into(),
            ));
        };
        Ok(WeightedGraph {
            n,
            edges,
            weights,
            regime,
        })
    }

    /// Serializes to the canonical compact JSON form.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("graph documents always serialize")
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            n: self.n,
            edges: self.edges.iter().map(|&(i, j)| [i, j]).collect(),
            weights: match self.regime {
                WeightRegime::Degree => WeightsField::Degree,
                WeightRegime::Custom => WeightsField::Values(self.weights.clone()),
            },
        }
    }

    /// Parses the graph JSON schema: `{"n": int, "edges": [[i, j], ...],
    /// "weights": [numbers] | "degree"}`.
    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        let doc: Value =
            serde_json::from_str(text).map_err(|e| ParseError::Malformed(e.to_string()))?;
        Self::from_value(&doc)
    }

    pub fn from_value(doc: &Value) -> Result<Self, ParseError> {
        let obj = doc.as_object().ok_or_else(|| ParseError::WrongType {
            field: "<root>".into(),
            expected: "an object",
        })?;
        let n = obj
            .get("n")
            .ok_or(ParseError::MissingField("n"))?
            .as_u64()
            .ok_or_else(|| ParseError::WrongType {
                field: "n".into(),
                expected: "a non-negative integer",
            })? as usize;
        if n == 0 {
            return Err(ParseError::NoVertices);
        }

        let raw_edges = obj
            .get("edges")
            .ok_or(ParseError::MissingField("edges"))?
            .as_array()
            .ok_or_else(|| ParseError::WrongType {
                field: "edges".into(),
                expected: "an array",
            })?;
        let mut seen = BTreeSet::new();
        for (k, e) in raw_edges.iter().enumerate() {
            let field = format!("edges[{k}]");
            let pair =
                e.as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| ParseError::WrongType {
                        field: field.clone(),
                        expected: "a 2-element array of vertex indices",
                    })?;
            let mut ends = [0usize; 2];
            for (slot, v) in ends.iter_mut().zip(pair) {
                let idx = v.as_u64().ok_or_else(|| ParseError::WrongType {
                    field: field.clone(),
                    expected: "non-negative integer vertex indices",
                })?;
                if idx >= n as u64 {
                    return Err(ParseError::IndexOutOfRange {
                        field,
                        index: idx,
                        n,
                    });
                }
                *slot = idx as usize;
            }
            let (i, j) = (ends[0].min(ends[1]), ends[0].max(ends[1]));
            if i == j {
                return Err(ParseError::SelfLoop { field, vertex: i });
            }
            if !seen.insert((i, j)) {
                return Err(ParseError::DuplicateEdge {
                    field,
                    edge: (i, j),
                });
            }
        }
        let edges: Vec<(usize, usize)> = seen.into_iter().collect();

        let weights = obj
            .get("weights")
            .ok_or(ParseError::MissingField("weights"))?;
        match weights {
            Value::String(s) if s == "degree" => {
                Ok(Self::with_degree_weight(n, &edges).expect("edges validated above"))
            }
            Value::Array(ws) => {
                if ws.len() != n {
                    return Err(ParseError::WeightCount {
                        expected: n,
                        found: ws.len(),
                    });
                }
                let mut values = Vec::with_capacity(n);
                for (k, w) in ws.iter().enumerate() {
                    let field = format!("weights[{k}]");
                    let value = w.as_f64().ok_or_else(|| ParseError::WrongType {
                        field: field.clone(),
                        expected: "a number",
                    })?;
                    if !(value.is_finite() && value > 0.0) {
                        return Err(ParseError::NonPositiveWeight { field, value });
                    }
                    values.push(value);
                }
                Ok(Self {
                    n,
                    edges,
                    weights: values,
                    regime: WeightRegime::Custom,
                })
            }
            _ => Err(ParseError::WrongType {
                field: "weights".into(),
                expected: "an array of numbers or the string \"degree\"",
            }),
        }
    }
}

/// Serialized graph, as written to files and embedded in reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphDocument {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub weights: WeightsField,
}

/// Either explicit weights or the marker string `"degree"`.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightsField {
    Values(Vec<f64>),
    Degree,
}

impl Serialize for WeightsField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            WeightsField::Values(v) => v.serialize(s),
            WeightsField::Degree => s.serialize_str("degree"),
        }
    }
}

impl Serialize for WeightedGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_document().serialize(s)
    }
}

fn normalize_edges(n: usize, edges: &[(usize, usize)]) -> Result<Vec<(usize, usize)>> {
    if n == 0 {
        return Err(Error::InvalidGraph(
            "graph must have at least one vertex".into(),
        ));
    }
    let mut set = BTreeSet::new();
    for &(a, b) in edges {
        if a >= n || b >= n {
            return Err(Error::InvalidGraph(format!(
                "edge ({a}, {b}) out of range for n = {n}"
            )));
        }
        if a == b {
            return Err(Error::InvalidGraph(format!("self-loop on vertex {a}")));
        }
        if !set.insert((a.min(b), a.max(b))) {
            return Err(Error::InvalidGraph(format!("duplicate edge ({a}, {b})")));
        }
    }
    Ok(set.into_iter().collect())
}
