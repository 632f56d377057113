use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};
use walkmult_core::cospectral::{all_cospectral_pairs, is_cospectral_pair, singlets};
use walkmult_core::eigenstructure::eigen_report;
use walkmult_core::generators::{generate_bundle, Template, WeightScheme};
use walkmult_core::graph::{load_graph, save_graph, GraphFormat};
use walkmult_core::multiplets::{enumerate_multiplets, Multiplet, MultipletReport, ParityFilter, DEFAULT_BUDGET};
use walkmult_core::symmetry::{find_automorphisms, has_exchange_automorphism};
use walkmult_core::transforms::{apply_step, TransformStep};
use walkmult_core::{AnyGraph, Error, Field, Graph, Result, Tolerance, VertexPair};

use crate::{plot, pretty, Common};

const DEFAULT_MAX_SIZE: usize = 3;
const EIGEN_MAX_SIZE: usize = 2;
const RECHECK_SIZE: usize = 2;

/// A finished command: its report, and an error to exit with after the
/// report has been written.
pub struct Output {
    pub report: Value,
    pub svg: Option<String>,
    pub status: Option<Error>,
}

impl Output {
    fn ok(report: Value) -> Self {
        Output {
            report,
            svg: None,
            status: None,
        }
    }
}

pub fn emit(c: &Common, o: &Output) -> Result<()> {
    let text = match (&o.svg, c.pretty) {
        (Some(svg), _) => svg.clone(),
        (None, true) => pretty::render(&o.report),
        (None, false) => serde_json::to_string_pretty(&o.report)? + "\n",
    };
    match &c.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

macro_rules! with_graph {
    ($any:expr, $g:ident => $body:expr) => {
        match $any {
            AnyGraph::Rational($g) => $body,
            AnyGraph::Float($g) => $body,
        }
    };
}

fn tagged(command: &str, mut v: Value) -> Value {
    if let Value::Object(map) = &mut v {
        map.insert("command".into(), json!(command));
    }
    v
}

fn resolve_pair<T: Field>(g: &Graph<T>, pair: Option<&[usize]>, tol: &Tolerance) -> Result<VertexPair> {
    match pair {
        Some([a, b]) => VertexPair::one_based(*a, *b),
        Some(_) => Err(Error::InvalidArgument("--pair takes two vertices".into())),
        None => all_cospectral_pairs(g, tol)?
            .into_iter()
            .next()
            .ok_or_else(|| Error::Verification("the graph has no cospectral pair".into())),
    }
}

fn max_size(c: &Common, default: usize, n: usize) -> Result<usize> {
    match c.max_size.unwrap_or(default) {
        0 => Err(Error::InvalidArgument("--max-size must be at least 1".into())),
        m => Ok(m.min(n).max(1)),
    }
}

pub fn analyze(c: &Common, path: &Path) -> Result<Output> {
    let tol = c.tolerance()?;
    with_graph!(load_graph(path, c.mode)?, g => analyze_graph(&g, &tol))
}

fn analyze_graph<T: Field>(g: &Graph<T>, tol: &Tolerance) -> Result<Output> {
    let mut pairs = Vec::new();
    for pair in all_cospectral_pairs(g, tol)? {
        let singles: Vec<Value> = singlets(g, &pair, tol)?
            .into_iter()
            .map(|(v, p)| json!({"vertex": v + 1, "parity": p}))
            .collect();
        pairs.push(json!({
            "pair": pair,
            "singlets": singles,
            "exchange_automorphism": has_exchange_automorphism(g, &pair)?,
        }));
    }
    Ok(Output::ok(json!({
        "command": "analyze",
        "graph": g.to_file(),
        "pairs": pairs,
        "automorphisms": find_automorphisms(g),
    })))
}

pub fn multiplets(c: &Common, path: &Path, pair: Option<&[usize]>, parity: &str) -> Result<Output> {
    let tol = c.tolerance()?;
    let filter: ParityFilter = parity.parse()?;
    with_graph!(load_graph(path, c.mode)?, g => {
        let pair = resolve_pair(&g, pair, &tol)?;
        let size = max_size(c, DEFAULT_MAX_SIZE, g.n())?;
        let ms = enumerate_multiplets(&g, &pair, size, filter, c.budget.unwrap_or(DEFAULT_BUDGET), &tol)?;
        let report = MultipletReport {
            graph: g.to_file(),
            pair,
            cospectral: is_cospectral_pair(&g, &pair, &tol)?.is_cospectral(),
            max_size: size,
            parity_filter: filter,
            multiplets: ms.iter().map(|m| m.to_record()).collect(),
        };
        Ok(Output::ok(tagged("multiplets", serde_json::to_value(report)?)))
    })
}

/// Script step that names multiplets by their index in the enumeration of
/// the current graph.
#[derive(Deserialize, Debug)]
#[serde(tag = "op", rename_all = "kebab-case", deny_unknown_fields)]
enum IndexedStep {
    Cone {
        multiplet: usize,
        weights: Vec<String>,
    },
    Interconnect {
        x: usize,
        gamma: Vec<String>,
        y: usize,
        delta: Vec<String>,
    },
    RemoveMultiplet {
        multiplet: usize,
        #[serde(default)]
        force: bool,
    },
}

#[derive(Deserialize, Debug)]
#[serde(untagged)]
enum ScriptStep {
    Direct(TransformStep),
    Indexed(IndexedStep),
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct Script {
    #[serde(default)]
    pair: Option<Vec<usize>>,
    steps: Vec<ScriptStep>,
}

/// Per-vertex weights for an indexed multiplet. A list with one entry per
/// vertex is taken as is, one entry per basis vector gives the parameters of
/// a combination, and an empty list picks weights with full support.
fn expand_weights<T: Field>(m: &Multiplet<T>, weights: Vec<String>, tol: &Tolerance) -> Result<Vec<String>> {
    let params: Vec<T> = if weights.is_empty() {
        return m
            .generic_weights(tol)
            .map(|w| w.iter().map(Field::weight_string).collect())
            .ok_or_else(|| Error::InvalidArgument(format!("{} has no weighting with full support", m.notation())));
    } else if weights.len() == m.len() {
        return Ok(weights);
    } else if weights.len() == m.dimension() {
        weights
            .iter()
            .map(|w| T::parse_weight(w).map_err(|e| Error::InvalidArgument(format!("weight `{w}`: {e}"))))
            .collect::<Result<_>>()?
    } else {
        return Err(Error::InvalidArgument(format!(
            "{} needs {} vertex weights or {} parameters, got {}",
            m.notation(),
            m.len(),
            m.dimension(),
            weights.len()
        )));
    };
    Ok(m.combination(&params).iter().map(Field::weight_string).collect())
}

fn resolve_step<T: Field>(
    g: &Graph<T>,
    pair: &VertexPair,
    step: ScriptStep,
    c: &Common,
    tol: &Tolerance,
) -> Result<TransformStep> {
    let indexed = match step {
        ScriptStep::Direct(mut s) => {
            match &mut s {
                TransformStep::RemoveVertex { force, .. } | TransformStep::RemoveMultiplet { force, .. } => {
                    *force |= c.force;
                }
                _ => {}
            }
            return Ok(s);
        }
        ScriptStep::Indexed(i) => i,
    };
    let size = max_size(c, DEFAULT_MAX_SIZE, g.n())?;
    let ms = enumerate_multiplets(g, pair, size, ParityFilter::Any, c.budget.unwrap_or(DEFAULT_BUDGET), tol)?;
    let pick = |k: usize| {
        ms.get(k).ok_or_else(|| {
            Error::InvalidArgument(format!("multiplet index {k} out of range; the graph has {} multiplets", ms.len()))
        })
    };
    let one_based = |v: &[usize]| v.iter().map(|x| x + 1).collect::<Vec<_>>();
    Ok(match indexed {
        IndexedStep::Cone { multiplet, weights } => {
            let m = pick(multiplet)?;
            TransformStep::Cone {
                subset: one_based(&m.subset),
                parity: m.parity,
                weights: expand_weights(m, weights, tol)?,
            }
        }
        IndexedStep::Interconnect { x, gamma, y, delta } => {
            let (mx, my) = (pick(x)?, pick(y)?);
            let parity = mx.parity.meet(&my.parity).ok_or_else(|| Error::Refused {
                rule: "same-parity interconnection rule".into(),
                message: format!("parities {} and {} differ", mx.parity, my.parity),
            })?;
            TransformStep::Interconnect {
                parity,
                x: one_based(&mx.subset),
                gamma: expand_weights(mx, gamma, tol)?,
                y: one_based(&my.subset),
                delta: expand_weights(my, delta, tol)?,
            }
        }
        IndexedStep::RemoveMultiplet { multiplet, force } => {
            let m = pick(multiplet)?;
            TransformStep::RemoveMultiplet {
                subset: one_based(&m.subset),
                parity: m.parity,
                force: force || c.force,
            }
        }
    })
}

pub fn apply(c: &Common, path: &Path, script: &Path, pair: Option<&[usize]>, out_graph: Option<&Path>) -> Result<Output> {
    let tol = c.tolerance()?;
    let text = std::fs::read_to_string(script)?;
    let script: Script = serde_json::from_str(&text).map_err(|e| Error::Parse {
        location: format!("{} line {}, column {}", script.display(), e.line(), e.column()),
        message: e.to_string(),
    })?;
    with_graph!(load_graph(path, c.mode)?, g => {
        let pair = resolve_pair(&g, pair.or(script.pair.as_deref()), &tol)?;
        let mut cur = g.clone();
        let mut p = pair;
        let mut chain = Vec::new();
        let mut status = None;
        let mut failed_step = None;
        for (k, step) in script.steps.into_iter().enumerate() {
            let applied = resolve_step(&cur, &p, step, c, &tol)
                .and_then(|s| apply_step(&cur, &p, &s, RECHECK_SIZE, &tol));
            match applied {
                Ok(t) => {
                    let accepted = t.record.certificate.accepted;
                    cur = t.graph;
                    p = t.pair;
                    chain.push(t.record);
                    if !accepted {
                        status = Some(Error::Verification(format!(
                            "step {} was forced and the pair {p} is no longer cospectral",
                            k + 1
                        )));
                    }
                }
                Err(e) => {
                    failed_step = Some(k + 1);
                    status = Some(e);
                    break;
                }
            }
        }
        if let (Some(out), None) = (out_graph, &failed_step) {
            let format = if out.extension().is_some_and(|e| e == "json") {
                GraphFormat::Json
            } else {
                GraphFormat::EdgeList
            };
            std::fs::write(out, save_graph(&AnyGraph::from(cur.clone()), format))?;
        }
        let mut report = json!({
            "command": "apply",
            "input": g.to_file(),
            "graph": cur.to_file(),
            "pair": p,
            "chain": chain,
        });
        if let (Some(k), Some(e)) = (failed_step, &status) {
            report["failed_step"] = json!(k);
            report["error"] = json!(e.to_string());
        }
        Ok(Output { report, svg: None, status })
    })
}

pub fn eigen(c: &Common, path: &Path, pair: Option<&[usize]>) -> Result<Output> {
    let tol = c.tolerance()?;
    with_graph!(load_graph(path, c.mode)?, g => {
        let pair = resolve_pair(&g, pair, &tol)?;
        let size = max_size(c, EIGEN_MAX_SIZE, g.n())?;
        let report = eigen_report(&g, &pair, size, c.budget.unwrap_or(DEFAULT_BUDGET), &tol)?;
        let status = (!report.all_zero_sums_hold)
            .then(|| Error::Verification("an eigenvector zero sum required by a multiplet fails".into()));
        let mut v = tagged("eigen", serde_json::to_value(&report)?);
        v["graph"] = serde_json::to_value(g.to_file())?;
        Ok(Output { report: v, svg: None, status })
    })
}

pub fn generate(c: &Common, template: &str, steps: usize, weights: &str, out_dir: Option<&Path>) -> Result<Output> {
    let tol = c.tolerance()?;
    let t: Template = template.parse()?;
    let scheme = match weights {
        "unit" => WeightScheme::Unit,
        "random" => WeightScheme::Random,
        other => return Err(Error::InvalidArgument(format!("unknown weight scheme `{other}` (expected unit|random)"))),
    };
    let bundle = generate_bundle(t, scheme, c.seed, steps, &tol)?;
    let mut v = tagged("generate", serde_json::to_value(&bundle)?);
    v["directory"] = json!(bundle.directory_name()?);
    if let Some(root) = out_dir {
        let dir = bundle.write(root)?;
        v["written_to"] = json!(dir.display().to_string());
    }
    Ok(Output::ok(v))
}

pub fn plot(_c: &Common, path: &Path, multiplet: Option<usize>, vector: Option<usize>) -> Result<Output> {
    let text = std::fs::read_to_string(path)?;
    let report: Value = if text.trim().is_empty() {
        json!({})
    } else {
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            location: format!("{} line {}, column {}", path.display(), e.line(), e.column()),
            message: e.to_string(),
        })?
    };
    let svg = plot::render(&report, multiplet, vector);
    Ok(Output {
        report,
        svg: Some(svg),
        status: None,
    })
}
