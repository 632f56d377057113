//! Graph files: a JSON object or a plain edge list.
//!
//! JSON: `{"n": 3, "mode": "rational", "edges": [[1, 2, "1"], [2, 3, "1/2"]]}`
//! with optional `"labels"`. Edge list: a header `n <N> mode <mode>` followed
//! by `i j w` lines, optional `label i name` lines, `#` comments. Vertices
//! are 1-based and loops are written `i i w`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};
use crate::linalg::{Field, Mode, Rational};

/// Serialized graph, also embedded in reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    pub edges: Vec<(usize, usize, WeightToken)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// Weight as written in a file: a string, or a bare JSON number.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightToken {
    Text(String),
    Number(serde_json::Number),
}

impl WeightToken {
    fn text(&self) -> String {
        match self {
            WeightToken::Text(s) => s.clone(),
            WeightToken::Number(n) => n.to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Json,
    EdgeList,
}

/// A graph in whichever scalar mode it was loaded.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyGraph {
    Rational(Graph<Rational>),
    Float(Graph<f64>),
}

impl AnyGraph {
    pub fn n(&self) -> usize {
        match self {
            AnyGraph::Rational(g) => g.n(),
            AnyGraph::Float(g) => g.n(),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            AnyGraph::Rational(_) => Mode::Rational,
            AnyGraph::Float(_) => Mode::Float,
        }
    }

    pub fn to_file(&self) -> GraphFile {
        match self {
            AnyGraph::Rational(g) => g.to_file(),
            AnyGraph::Float(g) => g.to_file(),
        }
    }

    /// Converts to the requested mode (float weights convert exactly).
    pub fn into_mode(self, mode: Mode) -> AnyGraph {
        match (self, mode) {
            (AnyGraph::Rational(g), Mode::Float) => AnyGraph::Float(g.to_float()),
            (AnyGraph::Float(g), Mode::Rational) => AnyGraph::Rational(g.to_rational()),
            (g, _) => g,
        }
    }
}

impl From<Graph<Rational>> for AnyGraph {
    fn from(g: Graph<Rational>) -> Self {
        AnyGraph::Rational(g)
    }
}

impl From<Graph<f64>> for AnyGraph {
    fn from(g: Graph<f64>) -> Self {
        AnyGraph::Float(g)
    }
}

impl<T: Field> Graph<T> {
    /// Canonical serialized form: edges with `i <= j` in row order.
    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            n: self.n(),
            mode: Some(T::MODE),
            edges: self
                .edges()
                .into_iter()
                .map(|(i, j, w)| (i + 1, j + 1, WeightToken::Text(w.weight_string())))
                .collect(),
            labels: self.labels().map(<[String]>::to_vec),
        }
    }
}

impl GraphFile {
    /// Builds a graph in `mode`, or the declared mode, or rational by default.
    pub fn into_graph(self, mode: Option<Mode>) -> Result<AnyGraph> {
        let mode = mode.or(self.mode).unwrap_or(Mode::Rational);
        let edges: Vec<Located> = self
            .edges
            .iter()
            .enumerate()
            .map(|(k, (i, j, w))| Located {
                location: format!("edges[{k}]"),
                i: *i,
                j: *j,
                weight: w.text(),
            })
            .collect();
        build(self.n, mode, &edges, self.labels)
    }
}

struct Located {
    location: String,
    i: usize,
    j: usize,
    weight: String,
}

fn parse_error(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.into(),
        message: message.into(),
    }
}

fn build(n: usize, mode: Mode, edges: &[Located], labels: Option<Vec<String>>) -> Result<AnyGraph> {
    match mode {
        Mode::Rational => Ok(AnyGraph::Rational(build_typed(n, edges, labels)?)),
        Mode::Float => Ok(AnyGraph::Float(build_typed(n, edges, labels)?)),
    }
}

fn build_typed<T: Field>(n: usize, edges: &[Located], labels: Option<Vec<String>>) -> Result<Graph<T>> {
    if n == 0 {
        return Err(parse_error("n", "a graph needs at least one vertex"));
    }
    let mut seen: BTreeMap<(usize, usize), T> = BTreeMap::new();
    let mut g = Graph::empty(n);
    for e in edges {
        for (field, x) in [("i", e.i), ("j", e.j)] {
            if x == 0 || x > n {
                return Err(parse_error(
                    format!("{}, field {field}", e.location),
                    format!("vertex {x} out of range 1..={n}"),
                ));
            }
        }
        let w = T::parse_weight(&e.weight)
            .map_err(|m| parse_error(format!("{}, field weight", e.location), m))?;
        let key = (e.i.min(e.j) - 1, e.i.max(e.j) - 1);
        if let Some(prev) = seen.get(&key) {
            if *prev != w {
                return Err(parse_error(
                    e.location.clone(),
                    format!(
                        "conflicting duplicate edge ({}, {}): {} vs {}",
                        key.0 + 1,
                        key.1 + 1,
                        prev.weight_string(),
                        w.weight_string()
                    ),
                ));
            }
            continue;
        }
        g.set_edge(key.0, key.1, w.clone());
        seen.insert(key, w);
    }
    match labels {
        Some(l) => g
            .with_labels(l)
            .map_err(|e| parse_error("labels", e.to_string())),
        None => Ok(g),
    }
}

/// Parses either format; `mode` overrides the declared mode.
pub fn parse_graph(text: &str, mode: Option<Mode>) -> Result<AnyGraph> {
    if text.trim_start().starts_with('{') {
        let file: GraphFile = serde_json::from_str(text).map_err(|e| {
            parse_error(format!("line {}, column {}", e.line(), e.column()), e.to_string())
        })?;
        file.into_graph(mode)
    } else {
        parse_edge_list(text, mode)
    }
}

fn parse_edge_list(text: &str, mode: Option<Mode>) -> Result<AnyGraph> {
    let mut header: Option<(usize, Option<Mode>)> = None;
    let mut edges = Vec::new();
    let mut labels: BTreeMap<usize, String> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let at = |field: &str| format!("line {line_no}, field {field}");
        if header.is_none() {
            if fields[0] != "n" || fields.len() < 2 {
                return Err(parse_error(at("n"), "expected header `n <N> mode <mode>`"));
            }
            let n: usize = fields[1]
                .parse()
                .map_err(|_| parse_error(at("n"), format!("invalid vertex count `{}`", fields[1])))?;
            let declared = match fields.get(2..) {
                Some(["mode", m]) => Some(
                    m.parse::<Mode>()
                        .map_err(|e| parse_error(at("mode"), e.to_string()))?,
                ),
                Some([]) => None,
                _ => return Err(parse_error(at("mode"), "expected `mode rational|float`")),
            };
            header = Some((n, declared));
            continue;
        }
        if fields[0] == "label" {
            if fields.len() < 3 {
                return Err(parse_error(at("label"), "expected `label <i> <name>`"));
            }
            let i: usize = fields[1]
                .parse()
                .map_err(|_| parse_error(at("i"), format!("invalid vertex `{}`", fields[1])))?;
            labels.insert(i, fields[2..].join(" "));
            continue;
        }
        if fields.len() != 3 {
            return Err(parse_error(
                at("edge"),
                format!("expected `i j w`, found {} fields", fields.len()),
            ));
        }
        let idx_field = |k: usize, name: &str| -> Result<usize> {
            fields[k]
                .parse()
                .map_err(|_| parse_error(at(name), format!("invalid vertex `{}`", fields[k])))
        };
        edges.push(Located {
            location: format!("line {line_no}"),
            i: idx_field(0, "i")?,
            j: idx_field(1, "j")?,
            weight: fields[2].to_string(),
        });
    }
    let Some((n, declared)) = header else {
        return Err(parse_error("line 1", "missing header `n <N> mode <mode>`"));
    };
    let labels = if labels.is_empty() {
        None
    } else {
        if labels.len() != n || labels.keys().copied().ne(1..=n) {
            return Err(parse_error("labels", "labels must cover every vertex exactly once"));
        }
        Some(labels.into_values().collect())
    };
    build(n, mode.or(declared).unwrap_or(Mode::Rational), &edges, labels)
}

/// Canonical text in the given format.
pub fn save_graph(g: &AnyGraph, format: GraphFormat) -> String {
    let file = g.to_file();
    match format {
        GraphFormat::Json => {
            let mut s = serde_json::to_string_pretty(&file).expect("graph files serialize");
            s.push('\n');
            s
        }
        GraphFormat::EdgeList => {
            let mut s = format!("n {} mode {}\n", file.n, g.mode());
            for (i, j, w) in &file.edges {
                s.push_str(&format!("{i} {j} {}\n", w.text()));
            }
            if let Some(labels) = &file.labels {
                for (k, l) in labels.iter().enumerate() {
                    s.push_str(&format!("label {} {l}\n", k + 1));
                }
            }
            s
        }
    }
}

pub fn load_graph(path: &Path, mode: Option<Mode>) -> Result<AnyGraph> {
    let text = std::fs::read_to_string(path)?;
    parse_graph(&text, mode)
}
