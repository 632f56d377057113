//! Graph edits that keep a cospectral pair cospectral.
//!
//! Every transform re-verifies its postcondition on the edited graph and
//! returns an error instead of an unverified graph. Each successful edit
//! produces a [`TransformRecord`] that can be replayed from the input graph.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::cospectral::{check_pair_with, singlet_parity_with, CospectralVerdict, SingletParity};
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphFile, VertexPair, WeightedIndicatorVector};
use crate::linalg::{Field, Rational, Tolerance};
use crate::multiplets::{
    enumerate_multiplets_with, satisfies_condition, weight_space_with, Multiplet, Parity, ParityFilter,
    DEFAULT_BUDGET,
};
use crate::walks::WalkTable;

const SINGLET_REMOVAL_RULE: &str = "singlet removal criterion";
const SINGLET_ATTACHMENT_RULE: &str = "singlet attachment rule";
const INTERCONNECTION_RULE: &str = "same-parity interconnection rule";
const PAIR_EDGE_RULE: &str = "pair edge toggle rule";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransformKind {
    Cone,
    AttachGraph,
    Interconnect,
    RemoveVertex,
    TogglePairEdge,
    RemoveMultiplet,
}

/// Replayable description of one edit; vertices are 1-based and weights are
/// exact strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum TransformStep {
    Cone {
        subset: Vec<usize>,
        parity: Parity,
        weights: Vec<String>,
    },
    AttachGraph {
        singlet: usize,
        graph: GraphFile,
        /// `(vertex of the attached graph, weight)` bridges to `singlet`.
        bridges: Vec<(usize, String)>,
    },
    Interconnect {
        parity: Parity,
        x: Vec<usize>,
        gamma: Vec<String>,
        y: Vec<usize>,
        delta: Vec<String>,
    },
    RemoveVertex {
        vertex: usize,
        #[serde(default)]
        force: bool,
    },
    TogglePairEdge {
        weight: String,
    },
    RemoveMultiplet {
        subset: Vec<usize>,
        parity: Parity,
        #[serde(default)]
        force: bool,
    },
}

impl TransformStep {
    pub fn kind(&self) -> TransformKind {
        match self {
            TransformStep::Cone { .. } => TransformKind::Cone,
            TransformStep::AttachGraph { .. } => TransformKind::AttachGraph,
            TransformStep::Interconnect { .. } => TransformKind::Interconnect,
            TransformStep::RemoveVertex { .. } => TransformKind::RemoveVertex,
            TransformStep::TogglePairEdge { .. } => TransformKind::TogglePairEdge,
            TransformStep::RemoveMultiplet { .. } => TransformKind::RemoveMultiplet,
        }
    }
}

/// Named sub-check of a certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

/// Edge whose weight moved from or to zero (1-based, `i <= j`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeChange {
    pub i: usize,
    pub j: usize,
    pub before: String,
    pub after: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub accepted: bool,
    pub pair: VertexPair,
    pub cospectral: CospectralVerdict,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub created_edges: Vec<EdgeChange>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub removed_edges: Vec<EdgeChange>,
    pub n_before: usize,
    pub n_after: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransformRecord {
    pub kind: TransformKind,
    pub step: TransformStep,
    pub certificate: Certificate,
}

/// Output of a transform: the edited graph, the pair in its numbering, the
/// record, and the new tip vertex for cones.
#[derive(Clone, Debug)]
pub struct Transformed<T> {
    pub graph: Graph<T>,
    pub pair: VertexPair,
    pub record: TransformRecord,
    pub tip: Option<usize>,
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

fn strings<T: Field>(v: &[T]) -> Vec<String> {
    v.iter().map(Field::weight_string).collect()
}

fn verification_failure(kind: TransformKind, checks: &[Check]) -> Error {
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    Error::Verification(format!("{kind:?} postcondition failed: {}", failed.join("; ")))
}

/// Same-parity multiplets from `previous` must keep every basis vector valid.
fn recheck_multiplets<T: Field>(
    table: &WalkTable<T>,
    pair: &VertexPair,
    parity: Parity,
    previous: &[Multiplet<T>],
    tol: &Tolerance,
    checks: &mut Vec<Check>,
) {
    for m in previous {
        let Some(common) = m.parity.meet(&parity) else {
            continue;
        };
        let ok = common.signs().iter().all(|&p| {
            m.weight_space
                .iter()
                .all(|b| satisfies_condition(table, pair, &m.subset, b, p, tol))
        });
        checks.push(Check {
            name: format!("multiplet {} still valid", m.notation()),
            passed: ok,
        });
    }
}

fn weight_is_member<T: Field>(m: &Multiplet<T>, gamma: &[T], tol: &Tolerance) -> Result<()> {
    if !m.contains(gamma, tol) || gamma.iter().all(|x| x.is_zero_tol(tol.tol_zero)) {
        return Err(Error::InvalidArgument(format!(
            "weights are not a nonzero member of the weight space of {}",
            m.notation()
        )));
    }
    Ok(())
}

/// Cone over a multiplet: the pair stays cospectral, the tip is a singlet
/// of the same parity, and same-parity multiplets in `previous` survive.
pub fn extend_by_cone<T: Field>(
    g: &Graph<T>,
    m: &Multiplet<T>,
    gamma: &[T],
    previous: &[Multiplet<T>],
    tol: &Tolerance,
) -> Result<Transformed<T>> {
    let pair = m.pair;
    weight_is_member(m, gamma, tol)?;
    let (support, weights): (Vec<usize>, Vec<T>) = m
        .subset
        .iter()
        .zip(gamma)
        .filter(|(_, w)| !w.is_exactly_zero())
        .map(|(s, w)| (*s, w.clone()))
        .unzip();
    let e = WeightedIndicatorVector::new(g.n(), support, weights)?;
    let h = g.cone_over(&e)?;
    let tip = g.n();
    let table = WalkTable::new(&h);
    let cospectral = check_pair_with(&table, &pair, tol)?;
    let tip_parity = singlet_parity_with(&table, &pair, tip, tol)?;
    let mut checks = vec![
        Check {
            name: "pair cospectral".into(),
            passed: cospectral.is_cospectral(),
        },
        Check {
            name: format!("tip singlet {}", m.parity.name()),
            passed: m.parity.signs().iter().all(|&p| tip_parity.has_sign(p)),
        },
    ];
    recheck_multiplets(&table, &pair, m.parity, previous, tol, &mut checks);
    finish(
        h,
        pair,
        Some(tip),
        TransformStep::Cone {
            subset: one_based(&m.subset),
            parity: m.parity,
            weights: strings(gamma),
        },
        cospectral,
        checks,
        g.n(),
        (vec![], vec![]),
    )
}

#[allow(clippy::too_many_arguments)]
fn finish<T: Field>(
    graph: Graph<T>,
    pair: VertexPair,
    tip: Option<usize>,
    step: TransformStep,
    cospectral: CospectralVerdict,
    checks: Vec<Check>,
    n_before: usize,
    edges: (Vec<EdgeChange>, Vec<EdgeChange>),
) -> Result<Transformed<T>> {
    let kind = step.kind();
    let accepted = checks.iter().all(|c| c.passed);
    if !accepted {
        return Err(verification_failure(kind, &checks));
    }
    let record = TransformRecord {
        kind,
        step,
        certificate: Certificate {
            accepted,
            pair,
            cospectral,
            checks,
            created_edges: edges.0,
            removed_edges: edges.1,
            n_before,
            n_after: graph.n(),
        },
    };
    Ok(Transformed {
        graph,
        pair,
        record,
        tip,
    })
}

/// Joins an arbitrary graph `other` to the singlet `c` through bridges
/// `(vertex of other, weight)`. Every vertex of `other` becomes a singlet
/// of the parity of `c`.
pub fn attach_graph_to_singlet<T: Field>(
    g: &Graph<T>,
    pair: &VertexPair,
    c: usize,
    other: &Graph<T>,
    bridges: &[(usize, T)],
    tol: &Tolerance,
) -> Result<Transformed<T>> {
    pair.check(g.n())?;
    let table = WalkTable::new(g);
    let parity = singlet_parity_with(&table, pair, c, tol)?;
    if !parity.is_singlet() {
        return Err(Error::Refused {
            rule: SINGLET_ATTACHMENT_RULE.into(),
            message: format!("vertex {} is not a walk singlet relative to {pair}", c + 1),
        });
    }
    let n = g.n();
    let mut h = g.disjoint_union(other);
    for (x, w) in bridges {
        if *x >= other.n() {
            return Err(Error::InvalidArgument(format!(
                "bridge vertex {} out of range for the attached graph",
                x + 1
            )));
        }
        h.set_edge(c, n + x, w.clone());
    }
    let table_h = WalkTable::new(&h);
    let cospectral = check_pair_with(&table_h, pair, tol)?;
    let mut checks = vec![Check {
        name: "pair cospectral".into(),
        passed: cospectral.is_cospectral(),
    }];
    let signs: &[i32] = match parity {
        SingletParity::Even => &[1],
        SingletParity::Odd => &[-1],
        _ => &[1, -1],
    };
    for x in n..h.n() {
        let px = singlet_parity_with(&table_h, pair, x, tol)?;
        checks.push(Check {
            name: format!("attached vertex {} is a singlet", x + 1),
            passed: signs.iter().all(|&p| px.has_sign(p)),
        });
    }
    finish(
        h,
        *pair,
        None,
        TransformStep::AttachGraph {
            singlet: c + 1,
            graph: other.to_file(),
            bridges: bridges.iter().map(|(x, w)| (x + 1, w.weight_string())).collect(),
        },
        cospectral,
        checks,
        n,
        (vec![], vec![]),
    )
}

fn edge_changes<T: Field>(before: &Graph<T>, after: &Graph<T>, tol: &Tolerance) -> (Vec<EdgeChange>, Vec<EdgeChange>) {
    let mut created = Vec::new();
    let mut removed = Vec::new();
    for i in 0..before.n() {
        for j in i..before.n() {
            let (a, b) = (before.weight(i, j), after.weight(i, j));
            let (za, zb) = (a.is_zero_tol(tol.tol_zero), b.is_zero_tol(tol.tol_zero));
            let change = EdgeChange {
                i: i + 1,
                j: j + 1,
                before: a.weight_string(),
                after: b.weight_string(),
            };
            if za && !zb {
                created.push(change);
            } else if !za && zb {
                removed.push(change);
            }
        }
    }
    (created, removed)
}

/// `H = G + γ̂δ̂ᵀ + δ̂γ̂ᵀ` with `γ̂, δ̂` the weight tuples extended by zero.
/// Off the overlap this adds `γ_x δ_y` between `x ∈ X` and `y ∈ Y`; inside
/// the overlap both products add, giving loops `2 γ_z δ_z`.
pub fn interconnect_multiplets<T: Field>(
    g: &Graph<T>,
    x: &Multiplet<T>,
    gamma: &[T],
    y: &Multiplet<T>,
    delta: &[T],
    previous: &[Multiplet<T>],
    tol: &Tolerance,
) -> Result<Transformed<T>> {
    if x.pair != y.pair {
        return Err(Error::InvalidArgument(format!(
            "multiplets refer to different pairs {} and {}",
            x.pair, y.pair
        )));
    }
    let pair = x.pair;
    let parity = x.parity.meet(&y.parity).ok_or_else(|| Error::Refused {
        rule: INTERCONNECTION_RULE.into(),
        message: format!(
            "parities {} and {} differ; only same-parity multiplets may be interconnected",
            x.parity, y.parity
        ),
    })?;
    weight_is_member(x, gamma, tol)?;
    weight_is_member(y, delta, tol)?;
    let n = g.n();
    let mut gh = vec![T::zero(); n];
    let mut dh = vec![T::zero(); n];
    for (&m, w) in x.subset.iter().zip(gamma) {
        gh[m] = w.clone();
    }
    for (&m, w) in y.subset.iter().zip(delta) {
        dh[m] = w.clone();
    }
    let mut h = g.clone();
    for i in 0..n {
        for j in i..n {
            let add = gh[i].mul(&dh[j]).add(&dh[i].mul(&gh[j]));
            if !add.is_exactly_zero() {
                let w = g.weight(i, j).add(&add);
                h.set_edge(i, j, w);
            }
        }
    }
    let edges = edge_changes(g, &h, tol);
    let table = WalkTable::new(&h);
    let cospectral = check_pair_with(&table, &pair, tol)?;
    let mut checks = vec![Check {
        name: "pair cospectral".into(),
        passed: cospectral.is_cospectral(),
    }];
    recheck_multiplets(&table, &pair, parity, previous, tol, &mut checks);
    finish(
        h,
        pair,
        None,
        TransformStep::Interconnect {
            parity,
            x: one_based(&x.subset),
            gamma: strings(gamma),
            y: one_based(&y.subset),
            delta: strings(delta),
        },
        cospectral,
        checks,
        n,
        edges,
    )
}

/// Sets the weight of the edge between the pair vertices; loops untouched.
pub fn toggle_pair_edge<T: Field>(g: &Graph<T>, pair: &VertexPair, w: T, tol: &Tolerance) -> Result<Transformed<T>> {
    pair.check(g.n())?;
    if !check_pair_with(&WalkTable::new(g), pair, tol)?.is_cospectral() {
        return Err(Error::Refused {
            rule: PAIR_EDGE_RULE.into(),
            message: format!("pair {pair} is not cospectral in the input graph"),
        });
    }
    let mut h = g.clone();
    h.set_edge(pair.u(), pair.v(), w.clone());
    let edges = edge_changes(g, &h, tol);
    let cospectral = check_pair_with(&WalkTable::new(&h), pair, tol)?;
    let checks = vec![Check {
        name: "pair cospectral".into(),
        passed: cospectral.is_cospectral(),
    }];
    finish(
        h,
        *pair,
        None,
        TransformStep::TogglePairEdge {
            weight: w.weight_string(),
        },
        cospectral,
        checks,
        g.n(),
        edges,
    )
}

fn shifted_pair(pair: &VertexPair, map: &[Option<usize>]) -> Result<VertexPair> {
    match (map[pair.u()], map[pair.v()]) {
        (Some(a), Some(b)) => VertexPair::new(a, b),
        _ => Err(Error::InvalidArgument(format!("cannot delete a vertex of the pair {pair}"))),
    }
}

/// Removal outcome when the edit is forced past a refusal: the graph is
/// returned together with the (possibly negative) cospectrality verdict.
#[derive(Clone, Debug)]
pub struct ForcedRemoval<T> {
    pub graph: Graph<T>,
    pub pair: VertexPair,
    pub cospectral: CospectralVerdict,
    pub was_singlet: SingletParity,
}

/// Deletes `c` only if it is a walk singlet relative to the pair.
pub fn remove_vertex_checked<T: Field>(
    g: &Graph<T>,
    pair: &VertexPair,
    c: usize,
    tol: &Tolerance,
) -> Result<Transformed<T>> {
    pair.check(g.n())?;
    let parity = singlet_parity_with(&WalkTable::new(g), pair, c, tol)?;
    if !parity.is_singlet() {
        return Err(Error::Refused {
            rule: SINGLET_REMOVAL_RULE.into(),
            message: format!(
                "vertex {} is not a walk singlet relative to {pair}; removing a single vertex keeps the pair cospectral only for singlets",
                c + 1
            ),
        });
    }
    let d = g.delete_vertices(&[c])?;
    let new_pair = shifted_pair(pair, &d.index_map)?;
    let cospectral = check_pair_with(&WalkTable::new(&d.graph), &new_pair, tol)?;
    let checks = vec![Check {
        name: "pair cospectral".into(),
        passed: cospectral.is_cospectral(),
    }];
    finish(
        d.graph,
        new_pair,
        None,
        TransformStep::RemoveVertex {
            vertex: c + 1,
            force: false,
        },
        cospectral,
        checks,
        g.n(),
        (vec![], vec![]),
    )
}

/// Deletes vertices without any precondition and reports what happened.
pub fn remove_vertices_forced<T: Field>(
    g: &Graph<T>,
    pair: &VertexPair,
    vertices: &[usize],
    tol: &Tolerance,
) -> Result<ForcedRemoval<T>> {
    pair.check(g.n())?;
    let was_singlet = match vertices {
        [c] => singlet_parity_with(&WalkTable::new(g), pair, *c, tol)?,
        _ => SingletParity::None,
    };
    let d = g.delete_vertices(vertices)?;
    let new_pair = shifted_pair(pair, &d.index_map)?;
    let cospectral = check_pair_with(&WalkTable::new(&d.graph), &new_pair, tol)?;
    Ok(ForcedRemoval {
        graph: d.graph,
        pair: new_pair,
        cospectral,
        was_singlet,
    })
}

/// Verdict of the removable-multiplet test.
#[derive(Clone, Debug)]
pub struct RemovalCheck<T> {
    /// Pairwise cospectral members with the remaining members singlets.
    pub removable: bool,
    pub explanation: String,
    /// Whether the pair stays cospectral after deleting the whole subset,
    /// evaluated directly on the reduced graph.
    pub direct: bool,
    /// The verified removal, when `removable`.
    pub result: Option<Transformed<T>>,
}

/// Tests the special case in which a uniform multiplet can be deleted: all
/// pairs of its vertices are cospectral and, relative to each such pair,
/// the other vertices of the multiplet are singlets. The direct test checks
/// `[R^k]_{uu} = [R^k]_{vv}` on the reduced graph `R`, which is equivalent
/// to the walk identity that governs removal.
pub fn removable_multiplet_check<T: Field>(g: &Graph<T>, m: &Multiplet<T>, tol: &Tolerance) -> Result<RemovalCheck<T>> {
    let pair = m.pair;
    if !m.uniform {
        return Err(Error::InvalidArgument(format!(
            "{} is not uniform; the removal test needs a uniform multiplet",
            m.notation()
        )));
    }
    if m.subset.iter().any(|&s| pair.contains(s)) {
        return Err(Error::InvalidArgument(
            "the multiplet contains a vertex of the pair".into(),
        ));
    }
    let table = WalkTable::new(g);
    let mut reasons = Vec::new();
    for (i, &a) in m.subset.iter().enumerate() {
        for &b in &m.subset[i + 1..] {
            let inner = VertexPair::new(a, b)?;
            if !check_pair_with(&table, &inner, tol)?.is_cospectral() {
                reasons.push(format!("{inner} is not cospectral"));
                continue;
            }
            for &c in &m.subset {
                if c != a && c != b && !singlet_parity_with(&table, &inner, c, tol)?.is_singlet() {
                    reasons.push(format!("{} is not a singlet relative to {inner}", c + 1));
                }
            }
        }
    }
    let removable = reasons.is_empty();
    let forced = remove_vertices_forced(g, &pair, &m.subset, tol)?;
    let direct = forced.cospectral.is_cospectral();
    if !removable {
        return Ok(RemovalCheck {
            removable,
            explanation: reasons.join("; "),
            direct,
            result: None,
        });
    }
    let checks = vec![Check {
        name: "pair cospectral".into(),
        passed: direct,
    }];
    let result = finish(
        forced.graph,
        forced.pair,
        None,
        TransformStep::RemoveMultiplet {
            subset: one_based(&m.subset),
            parity: m.parity,
            force: false,
        },
        forced.cospectral,
        checks,
        g.n(),
        (vec![], vec![]),
    )?;
    Ok(RemovalCheck {
        removable,
        explanation: "members are pairwise cospectral and the others are singlets relative to each such pair".into(),
        direct,
        result: Some(result),
    })
}

/// Both sides of the cone equivalence for arbitrary `(M, γ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeIffVerdict {
    pub cone_preserves_cospectrality: bool,
    /// Parity for which `γ` satisfies the multiplet condition, if any.
    pub multiplet_parity: Option<Parity>,
}

impl ConeIffVerdict {
    pub fn agree(&self) -> bool {
        self.cone_preserves_cospectrality == self.multiplet_parity.is_some()
    }
}

/// Builds the cone and tests cospectrality, tests the multiplet condition
/// independently, and fails if the two verdicts differ.
pub fn verify_cone_iff<T: Field>(
    g: &Graph<T>,
    pair: &VertexPair,
    subset: &[usize],
    gamma: &[T],
    tol: &Tolerance,
) -> Result<ConeIffVerdict> {
    pair.check(g.n())?;
    if !check_pair_with(&WalkTable::new(g), pair, tol)?.is_cospectral() {
        return Err(Error::InvalidArgument(format!(
            "pair {pair} is not cospectral in the base graph"
        )));
    }
    let e = WeightedIndicatorVector::new(g.n(), subset.to_vec(), gamma.to_vec())?;
    let h = g.cone_over(&e)?;
    let cone = check_pair_with(&WalkTable::new(&h), pair, tol)?.is_cospectral();
    let table = WalkTable::new(g);
    let even = satisfies_condition(&table, pair, e.support(), e.gamma(), 1, tol);
    let odd = satisfies_condition(&table, pair, e.support(), e.gamma(), -1, tol);
    let verdict = ConeIffVerdict {
        cone_preserves_cospectrality: cone,
        multiplet_parity: match (even, odd) {
            (true, true) => Some(Parity::Both),
            (true, false) => Some(Parity::Even),
            (false, true) => Some(Parity::Odd),
            (false, false) => None,
        },
    };
    if !verdict.agree() {
        return Err(Error::Verification(format!(
            "cone over {:?}: cospectrality {} but multiplet condition {}",
            one_based(subset),
            cone,
            verdict.multiplet_parity.is_some()
        )));
    }
    Ok(verdict)
}

/// Fast exact test of whether a cone keeps a pair cospectral.
///
/// Works on the integer-scaled adjacency matrix with `i128` arithmetic and
/// never builds the cone graph: the diagonal walk sums of the bordered
/// matrix are computed by repeated matrix-vector products, stopping at the
/// first mismatch. Returns `None` if an intermediate value overflows.
#[derive(Clone, Debug)]
pub struct ConeProbe {
    n: usize,
    pair: VertexPair,
    scale: BigInt,
    kernel: Vec<i128>,
}

impl ConeProbe {
    pub fn new(g: &Graph<Rational>, pair: &VertexPair) -> Result<Self> {
        pair.check(g.n())?;
        let scale = g
            .weights()
            .data()
            .iter()
            .fold(BigInt::one(), |l, w| l.lcm(w.denom()));
        let kernel = g
            .weights()
            .data()
            .iter()
            .map(|w| (w.numer() * (&scale / w.denom())).to_i128())
            .collect::<Option<Vec<i128>>>()
            .ok_or_else(|| Error::InvalidArgument("weights too large for the cone probe".into()))?;
        Ok(ConeProbe {
            n: g.n(),
            pair: *pair,
            scale,
            kernel,
        })
    }

    /// `Some(true)` iff the cone over `subset` with `gamma` keeps the pair
    /// cospectral.
    pub fn cone_preserves(&self, subset: &[usize], gamma: &[Rational]) -> Option<bool> {
        let n = self.n;
        let l = gamma.iter().fold(self.scale.clone(), |l, w| l.lcm(w.denom()));
        let extra = (&l / &self.scale).to_i128()?;
        let mut border = vec![0i128; n];
        for (&m, w) in subset.iter().zip(gamma) {
            border[m] = (w.numer() * (&l / w.denom())).to_i128()?;
        }
        let size = n + 1;
        let mul = |x: &[i128]| -> Option<Vec<i128>> {
            let mut y = vec![0i128; size];
            for i in 0..n {
                let mut acc = 0i128;
                let row = &self.kernel[i * n..(i + 1) * n];
                for (a, b) in row.iter().zip(x) {
                    if *a != 0 && *b != 0 {
                        acc = acc.checked_add(a.checked_mul(*b)?.checked_mul(extra)?)?;
                    }
                }
                if border[i] != 0 && x[n] != 0 {
                    acc = acc.checked_add(border[i].checked_mul(x[n])?)?;
                }
                y[i] = acc;
            }
            let mut tip = 0i128;
            for i in 0..n {
                if border[i] != 0 && x[i] != 0 {
                    tip = tip.checked_add(border[i].checked_mul(x[i])?)?;
                }
            }
            y[n] = tip;
            Some(y)
        };
        let (u, v) = (self.pair.u(), self.pair.v());
        let mut xu = vec![0i128; size];
        let mut xv = vec![0i128; size];
        xu[u] = 1;
        xv[v] = 1;
        // [H^k]_{uu} = x_a · x_b with a + b = k, so powers up to ceil(N/2)
        // cover every k <= N.
        let mut hu = vec![xu.clone()];
        let mut hv = vec![xv.clone()];
        for k in 1..=size {
            if k % 2 == 1 {
                xu = mul(&xu)?;
                xv = mul(&xv)?;
                hu.push(xu.clone());
                hv.push(xv.clone());
            }
            let (a, b) = (k / 2, k - k / 2);
            let dot = |p: &[i128], q: &[i128]| -> Option<i128> {
                p.iter().zip(q).try_fold(0i128, |acc, (x, y)| acc.checked_add(x.checked_mul(*y)?))
            };
            if dot(&hu[a], &hu[b])? != dot(&hv[a], &hv[b])? {
                return Some(false);
            }
        }
        Some(true)
    }
}

/// Applies a scripted step, verifying it. Cones and interconnections
/// re-check the same-parity multiplets with at most `recheck_size` vertices.
pub fn apply_step<T: Field>(
    g: &Graph<T>,
    pair: &VertexPair,
    step: &TransformStep,
    recheck_size: usize,
    tol: &Tolerance,
) -> Result<Transformed<T>> {
    let parse = |ws: &[String]| -> Result<Vec<T>> {
        ws.iter()
            .map(|w| T::parse_weight(w).map_err(Error::InvalidArgument))
            .collect()
    };
    let zero_based = |vs: &[usize]| -> Result<Vec<usize>> {
        vs.iter()
            .map(|&v| {
                if v == 0 || v > g.n() {
                    Err(Error::InvalidArgument(format!("vertex {v} out of range 1..={}", g.n())))
                } else {
                    Ok(v - 1)
                }
            })
            .collect()
    };
    let table = WalkTable::new(g);
    let multiplet = |subset: &[usize], parity: Parity| -> Result<Multiplet<T>> {
        weight_space_with(&table, pair, &zero_based(subset)?, parity, tol)?.ok_or_else(|| {
            Error::InvalidArgument(format!("{subset:?} is not a {parity} multiplet relative to {pair}"))
        })
    };
    let previous = |parity: Parity| -> Result<Vec<Multiplet<T>>> {
        let filter = match parity {
            Parity::Even => ParityFilter::Even,
            Parity::Odd => ParityFilter::Odd,
            Parity::Both => ParityFilter::Any,
        };
        enumerate_multiplets_with(&table, pair, recheck_size.min(g.n()).max(1), filter, DEFAULT_BUDGET, tol)
    };
    match step {
        TransformStep::Cone { subset, parity, weights } => {
            let m = multiplet(subset, *parity)?;
            extend_by_cone(g, &m, &parse(weights)?, &previous(*parity)?, tol)
        }
        TransformStep::AttachGraph { singlet, graph, bridges } => {
            let other = match graph.clone().into_graph(Some(T::MODE))? {
                crate::graph::AnyGraph::Rational(r) => convert::<Rational, T>(&r),
                crate::graph::AnyGraph::Float(f) => convert::<f64, T>(&f),
            };
            let c = zero_based(&[*singlet])?[0];
            let bridges = bridges
                .iter()
                .map(|(x, w)| {
                    if *x == 0 {
                        return Err(Error::InvalidArgument("vertex indices are 1-based".into()));
                    }
                    Ok((x - 1, T::parse_weight(w).map_err(Error::InvalidArgument)?))
                })
                .collect::<Result<Vec<_>>>()?;
            attach_graph_to_singlet(g, pair, c, &other, &bridges, tol)
        }
        TransformStep::Interconnect { parity, x, gamma, y, delta } => {
            let mx = multiplet(x, *parity)?;
            let my = multiplet(y, *parity)?;
            interconnect_multiplets(g, &mx, &parse(gamma)?, &my, &parse(delta)?, &previous(*parity)?, tol)
        }
        TransformStep::RemoveVertex { vertex, force } => {
            let c = zero_based(&[*vertex])?[0];
            if *force {
                forced_record(g, pair, &[c], step.clone(), tol)
            } else {
                remove_vertex_checked(g, pair, c, tol)
            }
        }
        TransformStep::TogglePairEdge { weight } => {
            toggle_pair_edge(g, pair, T::parse_weight(weight).map_err(Error::InvalidArgument)?, tol)
        }
        TransformStep::RemoveMultiplet { subset, parity, force } => {
            let m = multiplet(subset, *parity)?;
            if *force {
                return forced_record(g, pair, &m.subset, step.clone(), tol);
            }
            let check = removable_multiplet_check(g, &m, tol)?;
            check.result.ok_or_else(|| Error::Refused {
                rule: "removable multiplet condition".into(),
                message: check.explanation,
            })
        }
    }
}

/// A forced deletion recorded with an honest (possibly failed) certificate.
fn forced_record<T: Field>(
    g: &Graph<T>,
    pair: &VertexPair,
    vertices: &[usize],
    step: TransformStep,
    tol: &Tolerance,
) -> Result<Transformed<T>> {
    let f = remove_vertices_forced(g, pair, vertices, tol)?;
    let passed = f.cospectral.is_cospectral();
    let kind = step.kind();
    Ok(Transformed {
        pair: f.pair,
        record: TransformRecord {
            kind,
            step,
            certificate: Certificate {
                accepted: passed,
                pair: f.pair,
                cospectral: f.cospectral,
                checks: vec![Check {
                    name: "pair cospectral".into(),
                    passed,
                }],
                created_edges: vec![],
                removed_edges: vec![],
                n_before: g.n(),
                n_after: f.graph.n(),
            },
        },
        graph: f.graph,
        tip: None,
    })
}

fn convert<S: Field, T: Field>(g: &Graph<S>) -> Graph<T> {
    let edges: Vec<(usize, usize, T)> = g
        .edges()
        .into_iter()
        .map(|(i, j, w)| {
            let r = Rational::parse_weight(&w.weight_string()).expect("canonical weights parse");
            (i, j, T::from_rational(&r))
        })
        .collect();
    Graph::from_edges(g.n(), &edges).expect("edges are in range")
}

/// Replays recorded steps from `g` and checks each certificate matches.
pub fn replay<T: Field>(
    g: &Graph<T>,
    pair: &VertexPair,
    records: &[TransformRecord],
    recheck_size: usize,
    tol: &Tolerance,
) -> Result<(Graph<T>, VertexPair)> {
    let mut cur = g.clone();
    let mut p = *pair;
    for (i, r) in records.iter().enumerate() {
        let t = apply_step(&cur, &p, &r.step, recheck_size, tol)?;
        if t.record.certificate.accepted != r.certificate.accepted || t.graph.n() != r.certificate.n_after {
            return Err(Error::Verification(format!(
                "replay of step {} does not reproduce its certificate",
                i + 1
            )));
        }
        cur = t.graph;
        p = t.pair;
    }
    Ok((cur, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiplets::weight_space;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn p3() -> Graph<Rational> {
        Graph::from_edges(3, &[(0, 1, q(1)), (1, 2, q(1))]).unwrap()
    }

    fn pair13() -> VertexPair {
        VertexPair::one_based(1, 3).unwrap()
    }

    #[test]
    fn cone_over_pair_doublet() {
        let tol = Tolerance::default();
        let g = p3();
        let m = weight_space(&g, &pair13(), &[0, 2], Parity::Even, &tol).unwrap().unwrap();
        let t = extend_by_cone(&g, &m, &[q(1), q(1)], std::slice::from_ref(&m), &tol).unwrap();
        assert_eq!(t.graph.n(), 4);
        assert_eq!(t.tip, Some(3));
        assert!(t.record.certificate.accepted);
        let back = remove_vertex_checked(&t.graph, &pair13(), 3, &tol).unwrap();
        assert_eq!(back.graph, g);
        assert!(extend_by_cone(&g, &m, &[q(1), q(2)], &[], &tol).is_err());
    }

    #[test]
    fn remark_three_loops_and_edge() {
        let tol = Tolerance::default();
        let g = p3();
        let m = weight_space(&g, &pair13(), &[0, 2], Parity::Even, &tol).unwrap().unwrap();
        let t = interconnect_multiplets(&g, &m, &[q(3), q(3)], &m, &[q(3), q(3)], &[], &tol).unwrap();
        assert_eq!(t.graph.weight(0, 0), &q(18));
        assert_eq!(t.graph.weight(2, 2), &q(18));
        assert_eq!(t.graph.weight(0, 2), &q(18));
        assert_eq!(t.record.certificate.created_edges.len(), 3);
        let off = toggle_pair_edge(&t.graph, &pair13(), q(0), &tol).unwrap();
        assert_eq!(off.record.certificate.removed_edges.len(), 1);
    }

    #[test]
    fn refusals() {
        let tol = Tolerance::default();
        let g = Graph::from_edges(4, &[(0, 1, q(1)), (1, 2, q(1)), (0, 3, q(1))]).unwrap();
        let pair = VertexPair::new(0, 2).unwrap();
        let err = toggle_pair_edge(&g, &pair, q(1), &tol).unwrap_err();
        assert!(matches!(err, Error::Refused { .. }));
        let err = remove_vertex_checked(&p3(), &VertexPair::new(0, 1).unwrap(), 2, &tol).unwrap_err();
        assert!(matches!(err, Error::Refused { ref rule, .. } if rule == SINGLET_REMOVAL_RULE));
    }

    #[test]
    fn probe_matches_graph_route() {
        let tol = Tolerance::default();
        let g = p3();
        let probe = ConeProbe::new(&g, &pair13()).unwrap();
        for (subset, gamma) in [
            (vec![0, 2], vec![q(1), q(1)]),
            (vec![0, 2], vec![q(1), q(2)]),
            (vec![1], vec![q(-2)]),
            (vec![0], vec![q(3)]),
            (vec![0, 1], vec![Rational::new(1.into(), 2.into()), q(1)]),
        ] {
            let v = verify_cone_iff(&g, &pair13(), &subset, &gamma, &tol).unwrap();
            assert_eq!(probe.cone_preserves(&subset, &gamma), Some(v.cone_preserves_cospectrality));
        }
    }

    #[test]
    fn replay_reproduces_graph() {
        let tol = Tolerance::default();
        let g = p3();
        let steps = [
            TransformStep::Cone {
                subset: vec![2],
                parity: Parity::Even,
                weights: vec!["5/2".into()],
            },
            TransformStep::TogglePairEdge { weight: "7/3".into() },
            TransformStep::RemoveVertex { vertex: 4, force: false },
        ];
        let mut cur = g.clone();
        let mut records = Vec::new();
        for s in &steps {
            let t = apply_step(&cur, &pair13(), s, 2, &tol).unwrap();
            cur = t.graph;
            records.push(t.record);
        }
        let (again, _) = replay(&g, &pair13(), &records, 2, &tol).unwrap();
        assert_eq!(again, cur);
        let json = serde_json::to_string(&records).unwrap();
        let back: Vec<TransformRecord> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, records);
    }
}
