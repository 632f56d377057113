//! Seeded fixtures with planted cospectral pairs and the symmetry-breaking
//! pipeline.
//!
//! Every fixture is built from an unweighted edge pattern and a signed
//! involution `σ` with signs `s`: an edge `{i, j}` of weight `w` forces the
//! edge `{σi, σj}` to carry `s_i s_j w`. The signed permutation then
//! commutes with the adjacency matrix, so every swapped pair `{i, σi}` is
//! cospectral. Random weights are exact rationals with numerators in
//! `[-9, 9] \ {0}` and denominators in `[1, 4]`.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{save_graph, AnyGraph, Graph, GraphFile, GraphFormat, VertexPair};
use crate::linalg::{Field, Rational, Tolerance};
use crate::multiplets::{enumerate_multiplets, Multiplet, Parity, ParityFilter, DEFAULT_BUDGET};
use crate::symmetry::{find_automorphisms, AutomorphismReport};
use crate::transforms::{apply_step, TransformRecord, TransformStep};

/// Symmetric base graphs with known cospectral pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Template {
    Path { n: usize },
    Cycle { n: usize },
    /// Two legs joined by `rungs` rungs.
    Ladder { rungs: usize },
    /// Two `k`-cycles joined vertex by vertex.
    Prism { k: usize },
    SignedStar,
    /// Two copies of a lobe whose roots are joined through a shared vertex.
    TwoLobe { lobe: usize },
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Template::Path { n } => write!(f, "path:{n}"),
            Template::Cycle { n } => write!(f, "cycle:{n}"),
            Template::Ladder { rungs } => write!(f, "ladder:{rungs}"),
            Template::Prism { k } => write!(f, "prism:{k}"),
            Template::SignedStar => write!(f, "signed-star"),
            Template::TwoLobe { lobe } => write!(f, "two-lobe:{lobe}"),
        }
    }
}

impl FromStr for Template {
    type Err = Error;

    /// `name` or `name:parameter`, e.g. `ladder:3`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, param) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let num = |default: usize| -> Result<usize> {
            match param {
                None => Ok(default),
                Some(p) => p
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("template parameter `{p}` is not a positive integer"))),
            }
        };
        let t = match name {
            "path" => Template::Path { n: num(5)? },
            "cycle" => Template::Cycle { n: num(4)? },
            "ladder" => Template::Ladder { rungs: num(3)? },
            "prism" => Template::Prism { k: num(3)? },
            "signed-star" if param.is_none() => Template::SignedStar,
            "two-lobe" => Template::TwoLobe { lobe: num(4)? },
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "unknown template `{s}`; expected path, cycle, ladder, prism, signed-star or two-lobe"
                )))
            }
        };
        t.validate()?;
        Ok(t)
    }
}

impl Template {
    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(format!("{self}: {m}")));
        match *self {
            Template::Path { n } if n < 2 => bad("a path needs at least 2 vertices"),
            Template::Cycle { n } if n < 3 => bad("a cycle needs at least 3 vertices"),
            Template::Ladder { rungs } if rungs < 1 => bad("a ladder needs at least 1 rung"),
            Template::Prism { k } if k < 3 => bad("a prism needs cycles of length at least 3"),
            Template::TwoLobe { lobe } if lobe < 1 => bad("a lobe needs at least 1 vertex"),
            _ => Ok(()),
        }
    }

    /// `(n, edges, involution, signs, planted pairs)`.
    #[allow(clippy::type_complexity)]
    fn pattern(&self) -> (usize, Vec<(usize, usize)>, Vec<usize>, Vec<i8>, Vec<(usize, usize)>) {
        match *self {
            Template::Path { n } => {
                let edges = (0..n - 1).map(|i| (i, i + 1)).collect();
                let sigma = (0..n).map(|i| n - 1 - i).collect();
                let pairs = (0..n / 2).map(|i| (i, n - 1 - i)).collect();
                (n, edges, sigma, vec![1; n], pairs)
            }
            Template::Cycle { n } => {
                let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
                if n % 2 == 0 {
                    let sigma = (0..n).map(|i| (i + n / 2) % n).collect();
                    let pairs = (0..n / 2).map(|i| (i, i + n / 2)).collect();
                    (n, edges, sigma, vec![1; n], pairs)
                } else {
                    let sigma = (0..n).map(|i| (n - i) % n).collect();
                    let pairs = (1..=n / 2).map(|i| (i, n - i)).collect();
                    (n, edges, sigma, vec![1; n], pairs)
                }
            }
            Template::Ladder { rungs: r } => {
                let mut edges: Vec<(usize, usize)> = Vec::new();
                for i in 0..r {
                    edges.push((i, r + i));
                    if i + 1 < r {
                        edges.push((i, i + 1));
                        edges.push((r + i, r + i + 1));
                    }
                }
                let sigma = (0..2 * r).map(|i| (i + r) % (2 * r)).collect();
                let mut order: Vec<usize> = (0..r).collect();
                order.sort_by_key(|&i| (2 * i).abs_diff(r - 1));
                let pairs = order.into_iter().map(|i| (i, r + i)).collect();
                (2 * r, edges, sigma, vec![1; 2 * r], pairs)
            }
            Template::Prism { k } => {
                let mut edges = Vec::new();
                for i in 0..k {
                    edges.push((i, (i + 1) % k));
                    edges.push((k + i, k + (i + 1) % k));
                    edges.push((i, k + i));
                }
                let sigma = (0..2 * k).map(|i| (i + k) % (2 * k)).collect();
                let pairs = (0..k).map(|i| (i, k + i)).collect();
                (2 * k, edges, sigma, vec![1; 2 * k], pairs)
            }
            Template::SignedStar => (3, vec![(0, 2), (1, 2)], vec![1, 0, 2], vec![1, 1, -1], vec![(0, 1)]),
            Template::TwoLobe { lobe: l } => {
                let mut edges = Vec::new();
                for base in [0, l] {
                    for i in 0..l.saturating_sub(1) {
                        edges.push((base + i, base + i + 1));
                    }
                    if l >= 4 {
                        edges.push((base + 1, base + l - 1));
                    }
                }
                let s = 2 * l;
                edges.push((0, s));
                edges.push((l, s));
                let sigma = (0..2 * l).map(|i| (i + l) % (2 * l)).chain([s]).collect();
                (2 * l + 1, edges, sigma, vec![1; 2 * l + 1], vec![(0, l)])
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightScheme {
    Unit,
    /// One random weight per orbit of edges under the planted involution.
    Random,
}

/// A graph with planted cospectral pairs and the signed involution that
/// witnesses them.
#[derive(Clone, Debug, PartialEq)]
pub struct Fixture {
    pub name: String,
    pub graph: Graph<Rational>,
    pub planted: Vec<VertexPair>,
    /// Vertex `i` maps to `involution[i]`, with sign `signs[i]`.
    pub involution: Vec<usize>,
    pub signs: Vec<i8>,
    /// Edge orbits under the involution; each shares one weight class.
    pub weight_classes: Vec<Vec<(usize, usize)>>,
}

/// Edge orbits that share one weight.
type EdgeClasses = Vec<Vec<(usize, usize)>>;

/// Nonzero rational with numerator in `[-9, 9]` and denominator in `[1, 4]`.
pub fn random_weight<R: Rng>(rng: &mut R) -> Rational {
    let mut num: i64 = rng.gen_range(1..=9);
    if rng.gen_bool(0.5) {
        num = -num;
    }
    let den: i64 = rng.gen_range(1..=4);
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn orbit_key(e: (usize, usize), sigma: &[usize]) -> ((usize, usize), (usize, usize)) {
    let a = (e.0.min(e.1), e.0.max(e.1));
    let (x, y) = (sigma[e.0], sigma[e.1]);
    let b = (x.min(y), x.max(y));
    (a.min(b), a.max(b))
}

/// Applies one weight per edge orbit; orbits whose involution image would
/// contradict its sign are dropped.
fn weigh<R: Rng>(
    n: usize,
    edges: &[(usize, usize)],
    sigma: &[usize],
    signs: &[i8],
    mut draw: impl FnMut(&mut R) -> Rational,
    rng: &mut R,
) -> Result<(Graph<Rational>, EdgeClasses)> {
    let mut g = Graph::empty(n);
    let mut seen = BTreeSet::new();
    let mut classes = Vec::new();
    for &e in edges {
        let (a, b) = orbit_key(e, sigma);
        if !seen.insert((a, b)) {
            continue;
        }
        let s = (signs[a.0] * signs[a.1]) as i64;
        if a == b && s < 0 {
            continue;
        }
        let w = draw(rng);
        g.set_edge(a.0, a.1, w.clone());
        g.set_edge(b.0, b.1, w * Rational::from_integer(BigInt::from(s)));
        classes.push(if a == b { vec![a] } else { vec![a, b] });
    }
    Ok((g, classes))
}

fn make_pairs(pairs: &[(usize, usize)]) -> Result<Vec<VertexPair>> {
    pairs
        .iter()
        .map(|&(a, b)| VertexPair::new(a.min(b), a.max(b)))
        .collect()
}

/// Builds a template with unit or seeded random weights.
pub fn build_template(t: Template, scheme: WeightScheme, seed: u64) -> Result<Fixture> {
    t.validate()?;
    let (n, edges, sigma, signs, pairs) = t.pattern();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (graph, weight_classes) = match scheme {
        WeightScheme::Unit => weigh(n, &edges, &sigma, &signs, |_| Rational::from_integer(1.into()), &mut rng)?,
        WeightScheme::Random => weigh(n, &edges, &sigma, &signs, random_weight, &mut rng)?,
    };
    Ok(Fixture {
        name: t.to_string(),
        graph,
        planted: make_pairs(&pairs)?,
        involution: sigma,
        signs,
        weight_classes,
    })
}

/// Random graph on `n` vertices with vertices 1 and 2 exchanged by a random
/// signed involution; each edge orbit is present with probability
/// `density`, loops with a third of that.
pub fn planted_random_graph(n: usize, density: f64, seed: u64) -> Result<Fixture> {
    if n < 2 {
        return Err(Error::InvalidArgument("a planted pair needs at least 2 vertices".into()));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidArgument(format!("density {density} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sigma: Vec<usize> = (0..n).collect();
    let mut signs = vec![1i8; n];
    sigma[0] = 1;
    sigma[1] = 0;
    let mut rest: Vec<usize> = (2..n).collect();
    rest.shuffle(&mut rng);
    let mut i = 0;
    while i < rest.len() {
        let s: i8 = if rng.gen_bool(0.5) { 1 } else { -1 };
        if i + 1 < rest.len() && rng.gen_bool(0.5) {
            let (a, b) = (rest[i], rest[i + 1]);
            sigma[a] = b;
            sigma[b] = a;
            signs[a] = s;
            signs[b] = s;
            i += 2;
        } else {
            signs[rest[i]] = s;
            i += 1;
        }
    }
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a..n {
            let p = if a == b { density / 3.0 } else { density };
            if orbit_key((a, b), &sigma).0 == (a, b) && rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    let (graph, weight_classes) = weigh(n, &edges, &sigma, &signs, random_weight, &mut rng)?;
    let planted = (0..n)
        .filter(|&a| sigma[a] > a)
        .map(|a| VertexPair::new(a, sigma[a]))
        .collect::<Result<Vec<_>>>()?;
    Ok(Fixture {
        name: format!("planted-n{n}-seed{seed}"),
        graph,
        planted,
        involution: sigma,
        signs,
        weight_classes,
    })
}

/// Vertices 1, 2 form the pair; 3 is attached with weights `(1, 1)` and is
/// an even singlet, 4 with weights `(1, -1)` and is an odd singlet.
pub fn even_odd_singlet_fixture() -> Fixture {
    let q = |v: i64| Rational::from_integer(v.into());
    let graph = Graph::from_edges(4, &[(0, 2, q(1)), (1, 2, q(1)), (0, 3, q(1)), (1, 3, q(-1))]).expect("valid edges");
    Fixture {
        name: "even-odd-singlets".into(),
        graph,
        planted: vec![VertexPair::new(0, 1).expect("ordered")],
        involution: vec![1, 0, 2, 3],
        signs: vec![1, 1, 1, -1],
        weight_classes: vec![vec![(0, 2), (1, 2)], vec![(0, 3), (1, 3)]],
    }
}

/// Pair `{1, 2}` with an odd uniform doublet `{3, 4}` whose members are
/// exchanged, up to sign, by the planted signed involution.
pub fn anti_doublet_fixture() -> Fixture {
    let sigma = vec![1, 0, 3, 2, 4, 5];
    let signs = vec![1, 1, -1, -1, 1, -1];
    let edges = [(0, 2), (0, 3), (2, 3), (0, 1), (4, 0), (5, 0), (2, 4)];
    let weights = [1, 2, 1, 1, 3, 1, 1];
    let mut it = weights.iter();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let (graph, weight_classes) = weigh(
        6,
        &edges,
        &sigma,
        &signs,
        |_| Rational::from_integer((*it.next().expect("one weight per orbit")).into()),
        &mut rng,
    )
    .expect("valid pattern");
    Fixture {
        name: "anti-doublet".into(),
        graph,
        planted: vec![VertexPair::new(0, 1).expect("ordered")],
        involution: sigma,
        signs,
        weight_classes,
    }
}

/// Outcome of the symmetry-breaking pipeline.
#[derive(Clone, Debug)]
pub struct PipelineResult {
    pub graph: Graph<Rational>,
    pub pair: VertexPair,
    pub chain: Vec<TransformRecord>,
    pub automorphisms: AutomorphismReport,
}

fn random_member<R: Rng>(m: &Multiplet<Rational>, rng: &mut R) -> Vec<Rational> {
    let mut best = m.combination(&vec![Rational::from_integer(1.into()); m.dimension()]);
    for _ in 0..16 {
        let params: Vec<Rational> = (0..m.dimension()).map(|_| random_weight(rng)).collect();
        let w = m.combination(&params);
        let ok = w.iter().all(|x| !x.is_exactly_zero());
        best = w;
        if ok {
            break;
        }
    }
    best
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(Field::weight_string).collect()
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

/// Applies up to `steps` random verified transforms (cones with random
/// weights, interconnections of same-parity multiplets, pair edge toggles)
/// chosen from multiplets with at most three vertices. Stops early once the
/// automorphism group is trivial.
pub fn break_symmetry_pipeline(
    g: &Graph<Rational>,
    pair: &VertexPair,
    steps: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<PipelineResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = g.clone();
    let mut p = *pair;
    let mut chain = Vec::new();
    let mut report = find_automorphisms(&cur);
    for _ in 0..steps {
        if report.trivial() {
            break;
        }
        let ms = enumerate_multiplets(&cur, &p, 3.min(cur.n()), ParityFilter::Any, DEFAULT_BUDGET, tol)?;
        let step = match rng.gen_range(0..4) {
            0 if ms.len() >= 2 => {
                let x = &ms[rng.gen_range(0..ms.len())];
                let same: Vec<&Multiplet<Rational>> = ms.iter().filter(|y| y.parity.meet(&x.parity).is_some()).collect();
                let y = same[rng.gen_range(0..same.len())];
                let parity = x.parity.meet(&y.parity).expect("filtered");
                TransformStep::Interconnect {
                    parity,
                    x: one_based(&x.subset),
                    gamma: strings(&random_member(x, &mut rng)),
                    y: one_based(&y.subset),
                    delta: strings(&random_member(y, &mut rng)),
                }
            }
            1 => TransformStep::TogglePairEdge {
                weight: random_weight(&mut rng).weight_string(),
            },
            _ => {
                let m = &ms[rng.gen_range(0..ms.len())];
                let parity = if m.parity == Parity::Both { Parity::Even } else { m.parity };
                TransformStep::Cone {
                    subset: one_based(&m.subset),
                    parity,
                    weights: strings(&random_member(m, &mut rng)),
                }
            }
        };
        let t = apply_step(&cur, &p, &step, 2, tol)?;
        cur = t.graph;
        p = t.pair;
        chain.push(t.record);
        report = find_automorphisms(&cur);
    }
    Ok(PipelineResult {
        graph: cur,
        pair: p,
        chain,
        automorphisms: report,
    })
}

/// Multiplets found under every sampled weighting of an edge pattern.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobustnessReport {
    pub samples: usize,
    pub insufficient_samples: bool,
    /// `(1-based subset, parity)` present in every sample.
    pub robust: Vec<(Vec<usize>, Parity)>,
    /// `(1-based subset, parity)` present in some but not all samples.
    pub non_robust: Vec<(Vec<usize>, Parity)>,
}

/// Re-weights the edges of `pattern` class by class, one random weight per
/// class, and enumerates multiplets on each sample. Robustness is a
/// probabilistic surrogate for a statement about all weightings.
pub fn sample_weight_classes(
    pattern: &Graph<Rational>,
    classes: &[Vec<(usize, usize)>],
    pair: &VertexPair,
    max_size: usize,
    n_samples: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<RobustnessReport> {
    let edges: BTreeSet<(usize, usize)> = pattern.edges().into_iter().map(|(i, j, _)| (i, j)).collect();
    let covered: BTreeSet<(usize, usize)> = classes
        .iter()
        .flatten()
        .map(|&(i, j)| (i.min(j), i.max(j)))
        .collect();
    if let Some(e) = edges.difference(&covered).next() {
        return Err(Error::InvalidArgument(format!(
            "edge {{{}, {}}} is in no weight class",
            e.0 + 1,
            e.1 + 1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all: Vec<BTreeSet<(Vec<usize>, Parity)>> = Vec::new();
    for _ in 0..n_samples {
        let g = sample_weighting(pattern, classes, &mut rng);
        let ms = enumerate_multiplets(&g, pair, max_size, ParityFilter::Any, DEFAULT_BUDGET, tol)?;
        all.push(ms.iter().map(|m| (one_based(&m.subset), m.parity)).collect());
    }
    let union: BTreeSet<_> = all.iter().flatten().cloned().collect();
    let (robust, non_robust) = union.into_iter().partition(|x| all.iter().all(|s| s.contains(x)));
    Ok(RobustnessReport {
        samples: n_samples,
        insufficient_samples: n_samples < 2,
        robust,
        non_robust,
    })
}

/// One random weight per class, keeping the sign pattern of `pattern`.
pub fn sample_weighting<R: Rng>(pattern: &Graph<Rational>, classes: &[Vec<(usize, usize)>], rng: &mut R) -> Graph<Rational> {
    let mut g = pattern.clone();
    for class in classes {
        let w = random_weight(rng);
        for &(i, j) in class {
            let sign = if *pattern.weight(i, j) < Rational::from_integer(0.into()) { -1 } else { 1 };
            g.set_edge(i, j, w.clone() * Rational::from_integer(sign.into()));
        }
    }
    g
}

/// Content-addressed fixture bundle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureBundle {
    pub template: String,
    pub seed: u64,
    pub graph: GraphFile,
    pub planted: Vec<VertexPair>,
    pub pair: VertexPair,
    pub chain: Vec<TransformRecord>,
    pub automorphisms: AutomorphismReport,
}

impl FixtureBundle {
    /// First 16 hex digits of the SHA-256 of the canonical graph JSON.
    pub fn directory_name(&self) -> Result<String> {
        let canonical = serde_json::to_string(&self.graph)?;
        Ok(hex::encode(Sha256::digest(canonical.as_bytes()))[..16].to_string())
    }

    /// Writes `graph.json`, `pairs.json`, `chain.json` and `bundle.json`
    /// under `root/<hash>` and returns that directory.
    pub fn write(&self, root: &Path) -> Result<PathBuf> {
        let dir = root.join(self.directory_name()?);
        std::fs::create_dir_all(&dir)?;
        let graph: AnyGraph = self.graph.clone().into_graph(None)?;
        std::fs::write(dir.join("graph.json"), save_graph(&graph, GraphFormat::Json))?;
        std::fs::write(dir.join("pairs.json"), serde_json::to_string_pretty(&self.planted)? + "\n")?;
        std::fs::write(dir.join("chain.json"), serde_json::to_string_pretty(&self.chain)? + "\n")?;
        std::fs::write(dir.join("bundle.json"), serde_json::to_string_pretty(self)? + "\n")?;
        Ok(dir)
    }
}

/// Template plus `steps` pipeline steps, packaged with its provenance.
pub fn generate_bundle(template: Template, scheme: WeightScheme, seed: u64, steps: usize, tol: &Tolerance) -> Result<FixtureBundle> {
    let fixture = build_template(template, scheme, seed)?;
    let pair = fixture.planted[0];
    let result = break_symmetry_pipeline(&fixture.graph, &pair, steps, seed, tol)?;
    Ok(FixtureBundle {
        template: template.to_string(),
        seed,
        graph: result.graph.to_file(),
        planted: fixture.planted,
        pair: result.pair,
        chain: result.chain,
        automorphisms: result.automorphisms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cospectral::{is_cospectral_pair, is_walk_singlet, SingletParity};
    use crate::transforms::replay;

    #[test]
    fn templates_plant_cospectral_pairs() {
        let tol = Tolerance::default();
        for name in ["path:5", "cycle:4", "cycle:5", "ladder:3", "prism:3", "signed-star", "two-lobe:4"] {
            let t: Template = name.parse().unwrap();
            for scheme in [WeightScheme::Unit, WeightScheme::Random] {
                let f = build_template(t, scheme, 7).unwrap();
                for p in &f.planted {
                    assert!(is_cospectral_pair(&f.graph, p, &tol).unwrap().is_cospectral(), "{name} {p}");
                }
            }
        }
        let ladder = build_template(Template::Ladder { rungs: 3 }, WeightScheme::Unit, 0).unwrap();
        assert_eq!(ladder.graph.n(), 6);
        assert_eq!(ladder.planted[0], VertexPair::one_based(2, 5).unwrap());
        assert!("cube".parse::<Template>().is_err());
        assert!("ladder:0".parse::<Template>().is_err());
    }

    #[test]
    fn planted_random_graphs() {
        let tol = Tolerance::default();
        for seed in 0..20 {
            let f = planted_random_graph(7, 0.5, seed).unwrap();
            for p in &f.planted {
                assert!(is_cospectral_pair(&f.graph, p, &tol).unwrap().is_cospectral());
            }
            assert_eq!(f, planted_random_graph(7, 0.5, seed).unwrap());
        }
    }

    #[test]
    fn singlet_fixtures() {
        let tol = Tolerance::default();
        let f = even_odd_singlet_fixture();
        let p = f.planted[0];
        assert_eq!(is_walk_singlet(&f.graph, &p, 2, &tol).unwrap(), SingletParity::Even);
        assert_eq!(is_walk_singlet(&f.graph, &p, 3, &tol).unwrap(), SingletParity::Odd);
        let a = anti_doublet_fixture();
        assert!(is_cospectral_pair(&a.graph, &a.planted[0], &tol).unwrap().is_cospectral());
    }

    #[test]
    fn pipeline_is_replayable() {
        let tol = Tolerance::default();
        let f = build_template(Template::Ladder { rungs: 3 }, WeightScheme::Unit, 1).unwrap();
        let none = break_symmetry_pipeline(&f.graph, &f.planted[0], 0, 1, &tol).unwrap();
        assert_eq!(none.graph, f.graph);
        let r = break_symmetry_pipeline(&f.graph, &f.planted[0], 4, 1, &tol).unwrap();
        let (again, _) = replay(&f.graph, &f.planted[0], &r.chain, 2, &tol).unwrap();
        assert_eq!(again, r.graph);
        assert!(is_cospectral_pair(&r.graph, &r.pair, &tol).unwrap().is_cospectral());
    }

    #[test]
    fn robustness_sampling() {
        let tol = Tolerance::default();
        let f = build_template(Template::Ladder { rungs: 3 }, WeightScheme::Unit, 0).unwrap();
        let all: Vec<(usize, usize)> = f.graph.edges().into_iter().map(|(i, j, _)| (i, j)).collect();
        let r = sample_weight_classes(&f.graph, &[all], &f.planted[0], 2, 5, 3, &tol).unwrap();
        assert!(r.robust.contains(&(vec![2, 5], Parity::Even)));
        let one = sample_weight_classes(&f.graph, &f.weight_classes, &f.planted[0], 1, 1, 3, &tol).unwrap();
        assert!(one.insufficient_samples);
    }
}
