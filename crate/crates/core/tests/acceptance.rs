//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use walkmult_core::cospectral::{is_cospectral_pair, CospectralVerdict};
use walkmult_core::eigenstructure::{build_parity_basis, count_parity_vectors, verify_zero_sums, VectorParity};
use walkmult_core::generators::{
    anti_doublet_fixture, build_template, even_odd_singlet_fixture, planted_random_graph, random_weight, Fixture,
    Template, WeightScheme,
};
use walkmult_core::multiplets::{
    enumerate_multiplets, satisfies_condition, subsets_of_size, weight_space, Multiplet, Parity, ParityFilter,
    DEFAULT_BUDGET,
};
use walkmult_core::symmetry::find_automorphisms;
use walkmult_core::transforms::{
    extend_by_cone, interconnect_multiplets, remove_vertices_forced, removable_multiplet_check, toggle_pair_edge,
    attach_graph_to_singlet, verify_cone_iff, ConeProbe,
};
use walkmult_core::walks::WalkTable;
use walkmult_core::{Field, Graph, Rational, Tolerance, VertexPair};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn q(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// Seeded corpus of planted-pair graphs with `N` in `[4, 10]`.
fn corpus(count: u64) -> Vec<Fixture> {
    (0..count)
        .map(|s| planted_random_graph(4 + (s % 7) as usize, 0.5, s).expect("valid corpus parameters"))
        .collect()
}

fn random_member<R: Rng>(m: &Multiplet<Rational>, rng: &mut R) -> Vec<Rational> {
    loop {
        let params: Vec<Rational> = (0..m.dimension()).map(|_| random_weight(rng)).collect();
        let w = m.combination(&params);
        if w.iter().all(|x| !x.is_exactly_zero()) {
            return w;
        }
    }
}

fn criterion_1(tol: &Tolerance) -> Outcome {
    let mut failures = 0;
    let fixtures = corpus(500);
    for f in &fixtures {
        let pair = f.planted[0];
        let table = WalkTable::new(&f.graph);
        let direct = satisfies_condition(&table, &pair, &[pair.u(), pair.v()], &[q(1), q(1)], 1, tol);
        let space = weight_space(&f.graph, &pair, &[pair.u(), pair.v()], Parity::Even, tol)
            .ok()
            .flatten()
            .is_some_and(|m| m.contains(&[q(1), q(1)], tol));
        if !(direct && space) {
            failures += 1;
        }
    }
    outcome(failures == 0, format!("{} graphs, {failures} failures", fixtures.len()))
}

fn criterion_2(tol: &Tolerance) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut cones, mut failures) = (0usize, 0usize);
    let mut first_error = String::new();
    for f in corpus(500) {
        let pair = f.planted[0];
        let ms = match enumerate_multiplets(&f.graph, &pair, 3, ParityFilter::Any, DEFAULT_BUDGET, tol) {
            Ok(ms) => ms,
            Err(e) => {
                failures += 1;
                first_error = e.to_string();
                continue;
            }
        };
        for m in &ms {
            for _ in 0..3 {
                cones += 1;
                let gamma = random_member(m, &mut rng);
                if let Err(e) = extend_by_cone(&f.graph, m, &gamma, &ms, tol) {
                    failures += 1;
                    if first_error.is_empty() {
                        first_error = format!("{}: {e}", f.name);
                    }
                }
            }
        }
    }
    outcome(failures == 0, format!("{cones} cones, {failures} failures {first_error}"))
}

fn criterion_3(tol: &Tolerance) -> Outcome {
    const GRID: [i64; 5] = [-2, -1, 1, 2, 3];
    const CAP: usize = 100_000;
    let (mut trials, mut discrepancies, mut cross_checks, mut removals) = (0usize, 0usize, 0usize, 0usize);
    let (mut preserving, mut singlet_removals) = (0usize, 0usize);
    let mut detail = String::new();
    for s in 0..200u64 {
        let f = planted_random_graph(3 + (s % 4) as usize, 0.6, 10_000 + s).expect("valid parameters");
        let (g, pair) = (&f.graph, f.planted[0]);
        let n = g.n();
        let table = WalkTable::new(g);
        let probe = ConeProbe::new(g, &pair).expect("small weights");
        let mut count = 0usize;
        'subsets: for size in 1..=n {
            for subset in subsets_of_size(n, size) {
                let mut idx = vec![0usize; size];
                loop {
                    if count >= CAP {
                        break 'subsets;
                    }
                    count += 1;
                    let gamma: Vec<Rational> = idx.iter().map(|&i| q(GRID[i])).collect();
                    let condition = satisfies_condition(&table, &pair, &subset, &gamma, 1, tol)
                        || satisfies_condition(&table, &pair, &subset, &gamma, -1, tol);
                    let cone = match probe.cone_preserves(&subset, &gamma) {
                        Some(c) if !count.is_multiple_of(997) => c,
                        fast => {
                            cross_checks += 1;
                            let full = verify_cone_iff(g, &pair, &subset, &gamma, tol)
                                .map(|v| v.cone_preserves_cospectrality)
                                .unwrap_or(!condition);
                            if fast.is_some_and(|c| c != full) {
                                discrepancies += 1;
                                detail = format!("probe disagrees on {} subset {subset:?}", f.name);
                            }
                            full
                        }
                    };
                    preserving += usize::from(cone);
                    if cone != condition {
                        discrepancies += 1;
                        detail = format!("{} subset {subset:?} weights {idx:?}", f.name);
                    }
                    let mut k = 0;
                    while k < size && idx[k] + 1 == GRID.len() {
                        idx[k] = 0;
                        k += 1;
                    }
                    if k == size {
                        break;
                    }
                    idx[k] += 1;
                }
            }
        }
        trials += count;
        for c in (0..n).filter(|&c| !pair.contains(c)) {
            removals += 1;
            let forced = remove_vertices_forced(g, &pair, &[c], tol).expect("valid deletion");
            singlet_removals += usize::from(forced.was_singlet.is_singlet());
            if forced.cospectral.is_cospectral() != forced.was_singlet.is_singlet() {
                discrepancies += 1;
                detail = format!("{} removal of {}", f.name, c + 1);
            }
        }
    }
    outcome(
        discrepancies == 0,
        format!(
            "{trials} cone trials ({preserving} preserving, {cross_checks} cross-checked), {removals} removals ({singlet_removals} singlets), {discrepancies} discrepancies {detail}"
        ),
    )
}

fn criterion_4(tol: &Tolerance) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut done, mut overlapping, mut failures) = (0usize, 0usize, 0usize);
    let mut detail = String::new();
    let mut seed = 0u64;
    while done < 200 {
        let f = planted_random_graph(4 + (seed % 7) as usize, 0.5, 40_000 + seed).expect("valid parameters");
        seed += 1;
        let pair = f.planted[0];
        let ms = enumerate_multiplets(&f.graph, &pair, 3, ParityFilter::Any, DEFAULT_BUDGET, tol).expect("small graph");
        let x = &ms[rng.gen_range(0..ms.len())];
        let candidates: Vec<&Multiplet<Rational>> = ms.iter().filter(|y| y.parity.meet(&x.parity).is_some()).collect();
        let overlap: Vec<&&Multiplet<Rational>> = candidates
            .iter()
            .filter(|y| y.subset.iter().any(|v| x.subset.contains(v)))
            .collect();
        let y = if rng.gen_bool(0.5) {
            *overlap[rng.gen_range(0..overlap.len())]
        } else {
            candidates[rng.gen_range(0..candidates.len())]
        };
        if y.subset.iter().any(|v| x.subset.contains(v)) {
            overlapping += 1;
        }
        let (gamma, delta) = (random_member(x, &mut rng), random_member(y, &mut rng));
        if let Err(e) = interconnect_multiplets(&f.graph, x, &gamma, y, &delta, &ms, tol) {
            failures += 1;
            detail = format!("{}: {e}", f.name);
        }
        done += 1;
    }
    let mut special = 0usize;
    for s in 0..20u64 {
        let f = planted_random_graph(6, 0.5, 45_000 + s).expect("valid parameters");
        let pair = f.planted[0];
        let (u, v) = (pair.u(), pair.v());
        let m = weight_space(&f.graph, &pair, &[u, v], Parity::Even, tol).unwrap().unwrap();
        let t = random_weight(&mut rng);
        let two_t2 = q(2) * &t * &t;
        let ok = interconnect_multiplets(&f.graph, &m, &[t.clone(), t.clone()], &m, &[t.clone(), t], &[], tol)
            .and_then(|h| {
                let pattern = [(u, u), (v, v), (u, v)]
                    .iter()
                    .all(|&(i, j)| h.graph.weight(i, j) == &(f.graph.weight(i, j) + &two_t2));
                let off = toggle_pair_edge(&h.graph, &pair, q(0), tol)?;
                Ok(pattern && off.record.certificate.cospectral.is_cospectral())
            })
            .unwrap_or(false);
        if ok {
            special += 1;
        } else {
            failures += 1;
            detail = format!("pair self-interconnection on {}", f.name);
        }
    }
    outcome(
        failures == 0,
        format!("{done} interconnections ({overlapping} overlapping), {special}/20 loop+edge toggles, {failures} failures {detail}"),
    )
}

fn criterion_5(tol: &Tolerance) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut sums, mut worst, mut failures) = (0usize, 0.0f64, 0usize);
    let mut bases = Vec::new();
    for s in 0..200u64 {
        let f = planted_random_graph(4 + (s % 7) as usize, 0.5, 50_000 + s).expect("valid parameters");
        let g = f.graph.to_float();
        let pair = f.planted[0];
        let basis = match build_parity_basis(&g, &pair, tol) {
            Ok(b) => b,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        let ms = enumerate_multiplets(&g, &pair, 3, ParityFilter::Any, DEFAULT_BUDGET, tol).expect("small graph");
        for m in &ms {
            for r in verify_zero_sums(&g, &basis, m, tol).expect("matching pair") {
                for x in r.residuals {
                    sums += 1;
                    worst = worst.max(x);
                    if x > 1e-9 {
                        failures += 1;
                    }
                }
            }
        }
        bases.push((f, basis));
    }
    let mut reverse = 0usize;
    let mut reverse_failures = 0usize;
    while reverse < 1000 {
        let (f, basis) = &bases[rng.gen_range(0..bases.len())];
        let n = f.graph.n();
        let size = rng.gen_range(1..=3.min(n));
        let mut subset: Vec<usize> = rand::seq::index::sample(&mut rng, n, size).into_vec();
        subset.sort_unstable();
        let gamma: Vec<Rational> = (0..size).map(|_| random_weight(&mut rng)).collect();
        let p: i32 = if rng.gen_bool(0.5) { 1 } else { -1 };
        let table = WalkTable::new(&f.graph);
        if satisfies_condition(&table, &f.planted[0], &subset, &gamma, p, tol) {
            continue;
        }
        reverse += 1;
        let gf: Vec<f64> = gamma.iter().map(walkmult_core::Ring::to_f64).collect();
        let violation = basis
            .vectors
            .iter()
            .filter(|v| v.parity.sign() == Some(-p))
            .map(|v| subset.iter().zip(&gf).map(|(&i, w)| w * v.components[i]).sum::<f64>().abs())
            .fold(0.0f64, f64::max);
        if violation <= 1e-6 {
            reverse_failures += 1;
        }
    }
    outcome(
        failures == 0 && reverse_failures == 0,
        format!(
            "{sums} zero sums, max residual {worst:.2e}, {failures} forward failures; {reverse} non-multiplets, {reverse_failures} without a violating eigenvector"
        ),
    )
}

fn criterion_6(tol: &Tolerance) -> Outcome {
    let mut failures = Vec::new();
    let mut degenerate = 0usize;
    let cases = [
        (Template::Cycle { n: 4 }, 0usize),
        (Template::Prism { k: 3 }, 0),
        (Template::Prism { k: 4 }, 0),
        (Template::Cycle { n: 6 }, 1),
    ];
    for (t, which) in cases {
        let f = build_template(t, WeightScheme::Unit, 0).expect("valid template");
        let pair = f.planted[which];
        let basis = match build_parity_basis(&f.graph, &pair, tol) {
            Ok(b) => b,
            Err(e) => {
                failures.push(format!("{t}: {e}"));
                continue;
            }
        };
        for c in &basis.clusters {
            if c.multiplicity > 1 {
                degenerate += 1;
            }
            let count = |p| c.vectors.iter().filter(|&&k| basis.vectors[k].parity == p).count();
            if count(VectorParity::Even) > 1 || count(VectorParity::Odd) > 1 || count(VectorParity::Indeterminate) > 0 {
                failures.push(format!("{t}: cluster at {:.4}", c.value));
            }
        }
        for v in basis.vectors.iter().filter(|v| v.parity == VectorParity::Zero) {
            if v.components[pair.u()].abs() > 1e-10 || v.components[pair.v()].abs() > 1e-10 {
                failures.push(format!("{t}: completion vector nonzero on the pair"));
            }
        }
        if basis.orthonormality_error() > 1e-10 {
            failures.push(format!("{t}: orthonormality {:.2e}", basis.orthonormality_error()));
        }
        let c = count_parity_vectors(&basis);
        if c.even + c.odd + c.zero + c.indeterminate != f.graph.n() {
            failures.push(format!("{t}: counts do not sum to N"));
        }
    }
    outcome(
        failures.is_empty() && degenerate > 0,
        format!("{} fixtures, {degenerate} degenerate clusters {}", cases.len(), failures.join("; ")),
    )
}

fn criterion_7(tol: &Tolerance) -> Outcome {
    let ladder = build_template(Template::Ladder { rungs: 3 }, WeightScheme::Unit, 0).expect("valid template");
    let g = &ladder.graph;
    let pair = VertexPair::one_based(2, 5).expect("ordered");
    let order = find_automorphisms(g).order.unwrap_or(0);
    let base_cospectral = is_cospectral_pair(g, &pair, tol).unwrap().is_cospectral();
    let ms = enumerate_multiplets(g, &pair, 2, ParityFilter::Even, DEFAULT_BUDGET, tol).unwrap();
    let doublet = |h: &Graph<Rational>, a: usize, b: usize| {
        weight_space(h, &pair, &[a - 1, b - 1], Parity::Even, tol)
            .unwrap()
            .filter(|m| m.uniform)
    };
    let listed = [[2usize, 5usize], [3, 6], [1, 6]]
        .iter()
        .all(|s| ms.iter().any(|m| m.subset == vec![s[0] - 1, s[1] - 1] && m.parity == Parity::Even));
    let (a, b) = (q(1), q(2));
    let result = (|| -> walkmult_core::Result<(bool, bool, bool)> {
        let d1 = doublet(g, 3, 6).expect("even doublet");
        let first = extend_by_cone(g, &d1, &[a.clone(), a.clone()], &ms, tol)?;
        let ms1 = enumerate_multiplets(&first.graph, &pair, 2, ParityFilter::Even, DEFAULT_BUDGET, tol)?;
        let d2 = doublet(&first.graph, 1, 6).expect("doublet survives the first cone");
        let second = extend_by_cone(&first.graph, &d2, &[b.clone(), b.clone()], &ms1, tol)?;
        let trivial = find_automorphisms(&second.graph).trivial();
        let cospectral = is_cospectral_pair(&second.graph, &pair, tol)?.is_cospectral();
        let d3 = doublet(g, 1, 6).expect("even doublet");
        let inter = interconnect_multiplets(g, &d1, &[a.clone(), a.clone()], &d3, &[b.clone(), b.clone()], &ms, tol)?;
        let loop_ok = inter.graph.weight(5, 5) == &(q(2) * &a * &b);
        Ok((trivial, cospectral, loop_ok))
    })();
    match result {
        Ok((trivial, cospectral, loop_ok)) => outcome(
            order >= 4 && base_cospectral && listed && trivial && cospectral && loop_ok,
            format!(
                "ladder order {order}, doublets listed {listed}; after cones a=1, b=2: trivial group {trivial}, pair cospectral {cospectral}; loop 2ab on vertex 6 {loop_ok}"
            ),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn criterion_8(tol: &Tolerance) -> Outcome {
    let f = even_odd_singlet_fixture();
    let pair = f.planted[0];
    let values: Vec<i64> = (-5..=5).filter(|&x| x != 0).collect();
    let (mut trials, mut exceptions) = (0usize, 0usize);
    for &x in &values {
        for &y in &values {
            trials += 1;
            let e = walkmult_core::WeightedIndicatorVector::new(4, vec![2, 3], vec![q(x), q(y)]).unwrap();
            let h = f.graph.cone_over(&e).unwrap();
            match is_cospectral_pair(&h, &pair, tol).unwrap() {
                CospectralVerdict::NotCospectral(nc) if nc.first_failing_k < h.n() => {}
                _ => exceptions += 1,
            }
        }
    }
    outcome(exceptions == 0, format!("{trials} cones over an even and an odd singlet, {exceptions} exceptions"))
}

fn criterion_9(tol: &Tolerance) -> Outcome {
    let f = anti_doublet_fixture();
    let pair = f.planted[0];
    let good = weight_space(&f.graph, &pair, &[2, 3], Parity::Odd, tol)
        .unwrap()
        .filter(|m| m.uniform)
        .map(|m| removable_multiplet_check(&f.graph, &m, tol));
    let good_ok = matches!(&good, Some(Ok(c)) if c.removable && c.direct && c.result.is_some());

    let ladder = build_template(Template::Ladder { rungs: 3 }, WeightScheme::Unit, 0).unwrap();
    let lp = ladder.planted[0];
    let rung = weight_space(&ladder.graph, &lp, &[0, 3], Parity::Even, tol).unwrap().unwrap();
    let coned = extend_by_cone(&ladder.graph, &rung, &[q(1), q(1)], &[], tol).unwrap();
    let control = weight_space(&coned.graph, &lp, &[0, 5], Parity::Even, tol)
        .unwrap()
        .filter(|m| m.uniform)
        .map(|m| removable_multiplet_check(&coned.graph, &m, tol));
    let control_ok = matches!(&control, Some(Ok(c)) if !c.removable && !c.direct);
    outcome(
        good_ok && control_ok,
        format!("anti-doublet {{3,4}} removable and preserved: {good_ok}; control doublet {{1,6}} refused and broken when forced: {control_ok}"),
    )
}

fn criterion_10(tol: &Tolerance) -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for s in 0..20u64 {
        let f = planted_random_graph(6 + (s % 4) as usize, 0.5, 60_000 + s).unwrap();
        let pair = f.planted[0];
        let n = f.graph.n();
        let attached = planted_random_graph(10, 0.4, 70_000 + s).unwrap().graph;
        let mut run = || -> walkmult_core::Result<()> {
            let m = weight_space(&f.graph, &pair, &[pair.u(), pair.v()], Parity::Even, tol)?.expect("pair doublet");
            let cone = extend_by_cone(&f.graph, &m, &[q(1), q(1)], &[], tol)?;
            let c = cone.tip.expect("cone has a tip");
            let h = attach_graph_to_singlet(&cone.graph, &pair, c, &attached, &[(0, q(1))], tol)?.graph;
            let gf = f.graph.to_float();
            let hf = h.to_float();
            let before = build_parity_basis(&gf, &pair, tol)?;
            let after = build_parity_basis(&hf, &pair, tol)?;
            let odd_before = count_parity_vectors(&before).odd;
            let odd_after = count_parity_vectors(&after).odd;
            if odd_before != odd_after {
                failures.push(format!("seed {s}: {odd_before} odd vectors before, {odd_after} after"));
            }
            for v in after.vectors.iter().filter(|v| v.parity == VectorParity::Odd) {
                if v.components[n..].iter().any(|x| x.abs() > 1e-9) {
                    failures.push(format!("seed {s}: odd vector at {:.4} is nonzero on new vertices", v.value));
                }
            }
            for v in before.vectors.iter().filter(|v| v.parity == VectorParity::Odd) {
                let mut ext = v.components.clone();
                ext.resize(h.n(), 0.0);
                let hv = hf.weights().mul_vec(&ext);
                let res = hv.iter().zip(&ext).map(|(a, b)| (a - v.value * b).abs()).fold(0.0, f64::max);
                if res > 1e-9 {
                    failures.push(format!("seed {s}: zero extension is not an eigenvector ({res:.2e})"));
                }
            }
            checked += odd_before;
            Ok(())
        };
        if let Err(e) = run() {
            failures.push(format!("seed {s}: {e}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!("20 graphs, {checked} odd eigenvectors extended by zero on 11 new vertices {}", failures.join("; ")),
    )
}

type Criterion = fn(&Tolerance) -> Outcome;

fn main() -> ExitCode {
    let tol = Tolerance::default();
    let criteria: [(&str, Criterion, Option<Duration>); 10] = [
        ("pair is an even doublet", criterion_1, Some(Duration::from_secs(30))),
        ("cone extension over multiplets", criterion_2, Some(Duration::from_secs(300))),
        ("cone and removal equivalences", criterion_3, None),
        ("multiplet interconnection", criterion_4, None),
        ("eigenvector zero sums", criterion_5, None),
        ("parity eigenbasis structure", criterion_6, None),
        ("symmetry breaking on the ladder", criterion_7, Some(Duration::from_secs(10))),
        ("opposite-parity exclusion", criterion_8, None),
        ("removable multiplet", criterion_9, None),
        ("compact eigenvectors", criterion_10, None),
    ];
    let mut all = true;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut o = run(&tol);
        let elapsed = start.elapsed();
        if let Some(limit) = limit {
            if elapsed > *limit {
                o.passed = false;
                o.detail.push_str(&format!("; exceeded {}s", limit.as_secs()));
            }
        }
        all &= o.passed;
        println!(
            "{} criterion {:>2} {name}: {} [{:.2}s]",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            o.detail.trim_end(),
            elapsed.as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
