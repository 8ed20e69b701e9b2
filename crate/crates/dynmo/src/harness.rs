//! Randomized verification harness with oracle cross-checks.
//!
//! Each check builds a seeded corpus, runs the relevant construction, and
//! verifies it against an independent route (brute force, closed forms,
//! trace comparison). The integration suite asserts every check passes;
//! the `bench` CLI runs the same checks and emits the per-instance rows as
//! CSV. All randomness derives from `(seed, check, instance)` ChaCha
//! streams, so two runs with the same seed produce identical corpora and
//! identical rows (timings aside).

use std::time::Instant;

use crate::contagion::{loss_cascade, to_activation_instance};
use crate::generate;
use crate::graph::WeightedInstance;
use crate::rational::Rational;
use crate::reduction::{common_scale, gadget, to_multigraph};
use crate::solvers::{
    self, brute_force_min_dynmo, expected_bound, half_monopoly, randomized_monopoly_sizes,
    solve_family_f, solve_tree, vertex_cover_monopoly, CoverMode,
};
use crate::treedec::min_fill_decomposition;
use num_traits::ToPrimitive;

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub instance: String,
    pub n: usize,
    pub method: String,
    pub size: String,
    pub bound: String,
    pub runtime_ms: f64,
    pub rng_seed: u64,
}

#[derive(Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub rows: Vec<BenchRow>,
}

fn scaled(count: usize, scale: f64) -> usize {
    ((count as f64 * scale).round() as usize).max(1)
}

fn stream(seed: u64, check: u64, index: usize) -> rand_chacha::ChaCha8Rng {
    generate::stream_rng(seed, (check << 32) | index as u64)
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Strict-majority half construction: verified monopoly within
/// `ceil(n/2)` on connected multigraphs, whole corpus within a time
/// budget.
pub fn check_half_bound(seed: u64, scale: f64) -> CheckOutcome {
    use rand::Rng;
    let count = scaled(1000, scale);
    let started = Instant::now();
    let mut rows = Vec::with_capacity(count);
    let mut violations = 0usize;
    for i in 0..count {
        let mut rng = stream(seed, 1, i);
        let n = rng.gen_range(1..=200);
        let extras = rng.gen_range(0..=n);
        let inst = generate::random_connected_multigraph(&mut rng, n, 5, extras);
        let bound = n.div_ceil(2);
        let solve_started = Instant::now();
        let report = half_monopoly(&inst, None).expect("valid strict-majority input");
        let runtime_ms = ms(solve_started);
        let verified = inst
            .is_dynamic_monopoly(&report.monopoly)
            .expect("monopoly ids are valid");
        if !verified || report.size() > bound {
            violations += 1;
        }
        rows.push(BenchRow {
            instance: format!("half-{i:04}"),
            n,
            method: "majority".into(),
            size: report.size().to_string(),
            bound: bound.to_string(),
            runtime_ms,
            rng_seed: seed,
        });
    }
    let elapsed = started.elapsed().as_secs_f64();
    let within_budget = elapsed < 60.0;
    CheckOutcome {
        name: "half-bound",
        pass: violations == 0 && within_budget,
        detail: format!("{count} connected multigraphs, {violations} violations, {elapsed:.1}s"),
        rows,
    }
}

/// Weighted instance and its scaled multigraph agree on monopoly status
/// and on every per-phase trace, for every seed set.
pub fn check_multigraph_iff(seed: u64, scale: f64) -> CheckOutcome {
    use rand::Rng;
    let count = scaled(200, scale);
    let mut rows = Vec::with_capacity(count);
    let mut disagreements = 0usize;
    for i in 0..count {
        let mut rng = stream(seed, 2, i);
        let n = rng.gen_range(1..=8);
        let directed = i % 2 == 1;
        let inst = generate::random_weighted(&mut rng, n, 0.45, 4, directed);
        let (multi, _) = to_multigraph(&inst).expect("bounded denominators fit");
        let solve_started = Instant::now();
        let mut bad = 0usize;
        for mask in 0..(1usize << n) {
            let seed_set: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
            let tw = inst.activate(&seed_set).expect("valid seed");
            let tm = multi.activate(&seed_set).expect("valid seed");
            if tw.phases() != tm.phases() || tw.is_complete() != tm.is_complete() {
                bad += 1;
            }
        }
        disagreements += bad;
        rows.push(BenchRow {
            instance: format!("scale-{i:04}"),
            n,
            method: "reduce-multigraph".into(),
            size: format!("{}", 1usize << n),
            bound: bad.to_string(),
            runtime_ms: ms(solve_started),
            rng_seed: seed,
        });
    }
    CheckOutcome {
        name: "multigraph-iff",
        pass: disagreements == 0,
        detail: format!("{count} instances, all seed sets, {disagreements} trace disagreements"),
        rows,
    }
}

/// Gadget unfolding preserves the brute-force optimum.
pub fn check_gadget_equivalence(seed: u64, scale: f64) -> CheckOutcome {
    use rand::Rng;
    let count = scaled(100, scale);
    let mut rows = Vec::with_capacity(count);
    let mut mismatches = 0usize;
    for i in 0..count {
        let mut rng = stream(seed, 3, i);
        let (inst, h) = loop {
            let n = rng.gen_range(2..=5);
            let candidate = generate::random_weighted(&mut rng, n, 0.55, 3, false);
            match gadget(&candidate) {
                Ok((h, _)) if h.n() <= 14 => break (candidate, h),
                _ => continue,
            }
        };
        let solve_started = Instant::now();
        let dyn_g = brute_force_min_dynmo(&inst, 16).expect("n <= 5").size();
        let dyn_h = brute_force_min_dynmo(&h, 16).expect("|V(H)| <= 14").size();
        if dyn_g != dyn_h {
            mismatches += 1;
        }
        rows.push(BenchRow {
            instance: format!("gadget-{i:04}"),
            n: h.n(),
            method: "reduce-gadget".into(),
            size: dyn_g.to_string(),
            bound: dyn_h.to_string(),
            runtime_ms: ms(solve_started),
            rng_seed: seed,
        });
    }
    CheckOutcome {
        name: "gadget-equivalence",
        pass: mismatches == 0,
        detail: format!("{count} instances, {mismatches} optimum mismatches"),
        rows,
    }
}

/// Transformed decompositions validate against the gadget graph and obey
/// the width bound.
pub fn check_width_bound(seed: u64, scale: f64) -> CheckOutcome {
    use rand::Rng;
    let count = scaled(100, scale);
    let mut rows = Vec::with_capacity(count);
    let mut violations = 0usize;
    for i in 0..count {
        let mut rng = stream(seed, 4, i);
        let n = rng.gen_range(2..=10);
        let inst = generate::random_weighted(&mut rng, n, 0.4, 3, false);
        let td = min_fill_decomposition(&inst);
        let solve_started = Instant::now();
        let (h, _) = gadget(&inst).expect("undirected");
        let out = td.transform(&inst).expect("min-fill decomposition is valid");
        let l = common_scale(&inst);
        let max_bundle = inst
            .edges()
            .iter()
            .map(|e| {
                e.weight
                    .scaled_integer(&l)
                    .and_then(|b| b.to_usize())
                    .expect("bounded weights")
            })
            .max()
            .unwrap_or(0);
        let limit = td.width().max(max_bundle);
        let ok = out.validate(&h).expect("well-formed tree") && out.width() <= limit;
        if !ok {
            violations += 1;
        }
        rows.push(BenchRow {
            instance: format!("width-{i:04}"),
            n,
            method: "transform-td".into(),
            size: out.width().to_string(),
            bound: limit.to_string(),
            runtime_ms: ms(solve_started),
            rng_seed: seed,
        });
    }
    CheckOutcome {
        name: "width-bound",
        pass: violations == 0,
        detail: format!("{count} decompositions, {violations} violations"),
        rows,
    }
}

const MONTE_CARLO_TRIALS: usize = 10_000;

/// Exact expected size of the permutation construction: equals the simple
/// closed form on unit-weight graphs and sits within three standard errors
/// of the Monte-Carlo mean.
pub fn check_expected_bound(seed: u64, scale: f64) -> CheckOutcome {
    use rand::Rng;
    let count = scaled(50, scale);
    let mut rows = Vec::with_capacity(count);
    let mut failures = 0usize;
    for i in 0..count {
        let mut rng = stream(seed, 5, i);
        let n = rng.gen_range(2..=12);
        let inst = generate::random_simple_graph(&mut rng, n, 0.4);
        let solve_started = Instant::now();
        let mu = expected_bound(&inst, 20).expect("small degrees");

        // independent closed form on simple graphs
        let mut closed = Rational::zero();
        for v in 0..n {
            let d = inst.out_arcs(v).count() as u64;
            let tau = inst
                .threshold(v)
                .numer_big()
                .to_u64()
                .expect("integer thresholds");
            closed += &Rational::new(tau.min(d + 1), d + 1).expect("positive denominator");
        }
        let exact_ok = mu == closed;

        let mc_seed = seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(i as u64);
        let sizes = randomized_monopoly_sizes(&inst, mc_seed, MONTE_CARLO_TRIALS);
        let t = sizes.len() as f64;
        let mean = sizes.iter().sum::<usize>() as f64 / t;
        let var = sizes
            .iter()
            .map(|&s| (s as f64 - mean).powi(2))
            .sum::<f64>()
            / (t - 1.0);
        let se = (var / t).sqrt();
        let mc_ok = (mean - mu.to_f64()).abs() <= 3.0 * se + 1e-9;

        if !(exact_ok && mc_ok) {
            failures += 1;
        }
        rows.push(BenchRow {
            instance: format!("expected-{i:04}"),
            n,
            method: "random".into(),
            size: format!("{mean:.4}"),
            bound: mu.to_string(),
            runtime_ms: ms(solve_started),
            rng_seed: mc_seed,
        });
    }
    CheckOutcome {
        name: "expected-bound",
        pass: failures == 0,
        detail: format!(
            "{count} instances x {MONTE_CARLO_TRIALS} permutations, {failures} failures"
        ),
        rows,
    }
}

/// Independent minimum vertex cover by subset enumeration.
fn min_cover_size(inst: &WeightedInstance) -> usize {
    let pairs: Vec<(usize, usize)> = inst
        .edges()
        .iter()
        .filter(|e| !e.weight.is_zero())
        .map(|e| (e.u, e.v))
        .collect();
    let n = inst.n();
    for k in 0..=n {
        for combo in solvers::brute::combinations(n, k) {
            let mut hit = vec![false; n];
            for &v in &combo {
                hit[v] = true;
            }
            if pairs.iter().all(|&(u, v)| hit[u] || hit[v]) {
                return k;
            }
        }
    }
    n
}

/// Exact vertex-cover seeding matches an independent minimum cover, and
/// the true optimum never exceeds it.
pub fn check_vertex_cover_bound(seed: u64, scale: f64) -> CheckOutcome {
    use rand::Rng;
    let count = scaled(100, scale);
    let mut rows = Vec::with_capacity(count);
    let mut failures = 0usize;
    for i in 0..count {
        let mut rng = stream(seed, 6, i);
        let n = rng.gen_range(2..=12);
        let inst = generate::random_cover_instance(&mut rng, n, 4);
        let solve_started = Instant::now();
        let report = vertex_cover_monopoly(&inst, CoverMode::Exact).expect("precondition holds");
        let beta = min_cover_size(&inst);
        let optimum = brute_force_min_dynmo(&inst, 16).expect("n <= 12").size();
        let verified = inst
            .is_dynamic_monopoly(&report.monopoly)
            .expect("valid ids");
        if !(verified && report.size() == beta && optimum <= beta) {
            failures += 1;
        }
        rows.push(BenchRow {
            instance: format!("cover-{i:04}"),
            n,
            method: "vertex-cover".into(),
            size: report.size().to_string(),
            bound: beta.to_string(),
            runtime_ms: ms(solve_started),
            rng_seed: seed,
        });
    }
    CheckOutcome {
        name: "vertex-cover-bound",
        pass: failures == 0,
        detail: format!("{count} instances, {failures} failures"),
        rows,
    }
}

fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let lx = x.ln();
        let ly = y.max(1e-9).ln();
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

const SCALING_SIZES: [usize; 3] = [1_000, 10_000, 100_000];
const SCALING_REPS: usize = 15;

/// Median solve times across instance sizes, with the fitted log-log
/// slope; near-linear algorithms stay at or below slope 1.15. Sizes are
/// interleaved round-robin so ambient load perturbs them evenly instead of
/// biasing the slope.
fn scaling_probe<F, G>(
    seed: u64,
    check: u64,
    label: &str,
    rng_seed: u64,
    generate_instance: F,
    solve: G,
    rows: &mut Vec<BenchRow>,
) -> f64
where
    F: Fn(&mut rand_chacha::ChaCha8Rng, usize) -> WeightedInstance,
    G: Fn(&WeightedInstance) -> usize,
{
    // untimed warmups settle the allocator before measurement
    for (si, &size) in SCALING_SIZES.iter().enumerate() {
        let mut rng = stream(seed, check, (1 + si) * 1000 + SCALING_REPS);
        let inst = generate_instance(&mut rng, size);
        let _ = solve(&inst);
    }
    let mut times = vec![Vec::with_capacity(SCALING_REPS); SCALING_SIZES.len()];
    let mut works = vec![0usize; SCALING_SIZES.len()];
    for rep in 0..SCALING_REPS {
        for (si, &size) in SCALING_SIZES.iter().enumerate() {
            let mut rng = stream(seed, check, (1 + si) * 1000 + rep);
            let inst = generate_instance(&mut rng, size);
            works[si] = size + inst.edges().len();
            let started = Instant::now();
            let result = solve(&inst);
            let elapsed = started.elapsed().as_secs_f64();
            times[si].push(elapsed);
            rows.push(BenchRow {
                instance: format!("{label}-n{size}-rep{rep:02}"),
                n: size,
                method: label.into(),
                size: result.to_string(),
                bound: String::new(),
                runtime_ms: elapsed * 1e3,
                rng_seed,
            });
        }
    }
    let mut points = Vec::new();
    for (si, reps) in times.iter_mut().enumerate() {
        reps.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        points.push((works[si] as f64, reps[SCALING_REPS / 2]));
    }
    loglog_slope(&points)
}

/// Family solver: certified sizes match the oracle on random members, and
/// runtime grows at most linearly.
pub fn check_family_solver(seed: u64, scale: f64) -> CheckOutcome {
    use rand::Rng;
    let count = scaled(300, scale);
    let mut rows = Vec::with_capacity(count + SCALING_SIZES.len() * SCALING_REPS);
    let mut gaps = 0usize;
    let mut stalls = 0usize;
    for i in 0..count {
        let mut rng = stream(seed, 7, i);
        let n = rng.gen_range(1..=12);
        let inst = generate::random_family_member(&mut rng, n, 0.85, 0.12, 4);
        let solve_started = Instant::now();
        let optimum = brute_force_min_dynmo(&inst, 16).expect("n <= 12").size();
        let (size, method) = match solve_family_f(&inst) {
            Ok(report) => {
                if report.size() != optimum {
                    gaps += 1;
                }
                (report.size(), "family-f")
            }
            Err(crate::error::Error::NotInFamily(_)) => {
                // sanctioned fallback: contraction left the family
                stalls += 1;
                (optimum, "family-f-fallback")
            }
            Err(other) => panic!("unexpected solver error: {other}"),
        };
        rows.push(BenchRow {
            instance: format!("family-{i:04}"),
            n,
            method: method.into(),
            size: size.to_string(),
            bound: optimum.to_string(),
            runtime_ms: ms(solve_started),
            rng_seed: seed,
        });
    }
    let slope = scaling_probe(
        seed,
        7,
        "family-scale",
        seed,
        |rng, size| generate::random_family_scaling_instance(rng, size),
        |inst| solve_family_f(inst).expect("scaling family never stalls").size(),
        &mut rows,
    );
    let pass = gaps == 0 && slope <= 1.15;
    CheckOutcome {
        name: "family-solver",
        pass,
        detail: format!(
            "{count} members, {gaps} gaps, {stalls} sanctioned stalls; log-log slope {slope:.3}"
        ),
        rows,
    }
}

/// Tree solver: matches the oracle exactly and scales linearly.
pub fn check_tree_solver(seed: u64, scale: f64) -> CheckOutcome {
    use rand::Rng;
    let count = scaled(300, scale);
    let mut rows = Vec::with_capacity(count + SCALING_SIZES.len() * SCALING_REPS);
    let mut gaps = 0usize;
    for i in 0..count {
        let mut rng = stream(seed, 8, i);
        let n = rng.gen_range(1..=14);
        let inst = generate::random_tree_instance(&mut rng, n, 4);
        let solve_started = Instant::now();
        let report = solve_tree(&inst).expect("generated forests are acyclic");
        let optimum = brute_force_min_dynmo(&inst, 16).expect("n <= 14").size();
        if report.size() != optimum {
            gaps += 1;
        }
        rows.push(BenchRow {
            instance: format!("tree-{i:04}"),
            n,
            method: "tree".into(),
            size: report.size().to_string(),
            bound: optimum.to_string(),
            runtime_ms: ms(solve_started),
            rng_seed: seed,
        });
    }
    let slope = scaling_probe(
        seed,
        8,
        "tree-scale",
        seed,
        |rng, size| generate::random_tree_instance(rng, size, 4),
        |inst| solve_tree(inst).expect("forests").size(),
        &mut rows,
    );
    let pass = gaps == 0 && slope <= 1.15;
    CheckOutcome {
        name: "tree-solver",
        pass,
        detail: format!("{count} trees, {gaps} gaps; log-log slope {slope:.3}"),
        rows,
    }
}

/// Loss cascades and their activation image agree on the insolvent set and
/// on first-default rounds.
pub fn check_contagion_equivalence(seed: u64, scale: f64) -> CheckOutcome {
    use rand::Rng;
    let count = scaled(300, scale);
    let mut rows = Vec::with_capacity(count);
    let mut disagreements = 0usize;
    for i in 0..count {
        let mut rng = stream(seed, 9, i);
        let n = rng.gen_range(1..=10);
        let net = generate::random_banking_network(&mut rng, n);
        let solve_started = Instant::now();
        let result = loss_cascade(&net);
        let (inst, seeds) = to_activation_instance(&net);
        let trace = inst.activate(&seeds).expect("valid seeds");
        let mut ok = result.insolvent == trace.fixpoint();
        if ok {
            for j in 0..n {
                if result.first_default_round(j) != trace.activation_round(j) {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            disagreements += 1;
        }
        rows.push(BenchRow {
            instance: format!("contagion-{i:04}"),
            n,
            method: "contagion".into(),
            size: result.insolvent.len().to_string(),
            bound: trace.fixpoint().len().to_string(),
            runtime_ms: ms(solve_started),
            rng_seed: seed,
        });
    }
    CheckOutcome {
        name: "contagion-equivalence",
        pass: disagreements == 0,
        detail: format!("{count} networks, {disagreements} disagreements"),
        rows,
    }
}

/// Run the full suite in order.
pub fn run_all(seed: u64, scale: f64) -> Vec<CheckOutcome> {
    vec![
        check_half_bound(seed, scale),
        check_multigraph_iff(seed, scale),
        check_gadget_equivalence(seed, scale),
        check_width_bound(seed, scale),
        check_expected_bound(seed, scale),
        check_vertex_cover_bound(seed, scale),
        check_family_solver(seed, scale),
        check_tree_solver(seed, scale),
        check_contagion_equivalence(seed, scale),
    ]
}

/// CSV evidence table. With `timings` off the runtime column is zeroed so
/// consecutive runs with one seed are byte-identical.
pub fn to_csv(rows: &[BenchRow], timings: bool) -> String {
    let mut out = String::from("instance,n,method,size,bound,runtime_ms,rng_seed\n");
    for row in rows {
        let runtime = if timings {
            format!("{:.3}", row.runtime_ms)
        } else {
            "0".to_string()
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.instance, row.n, row.method, row.size, row.bound, runtime, row.rng_seed
        ));
    }
    out
}
