//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each, and
//! exits non-zero if any fails.

mod common;

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use probvar::cli::run_with;
use probvar::conditional::{cond_expectation, total_probability, verify_properties};
use probvar::lp::{clarkson_first, clarkson_second, holder_check, norm_monotonicity_check};
use probvar::random::{
    random_instance, random_space_and_partition, random_variable, trial_rng, Shape,
};
use probvar::{EnergyProblem, SigmaAlgebra, SolverConfig};
use rand::Rng;

const SEED: u64 = 20_241_015;
const IDENTITY: f64 = 1e-12;
const GD_AGREEMENT: f64 = 1e-8;
const GD_TOL: f64 = 1e-10;
const FD_STEP: f64 = 1e-5;
const FD_REL: f64 = 1e-6;
const SLACK: f64 = -1e-12;
const P_GRID: [f64; 5] = [1.25, 1.5, 2.0, 3.0, 4.0];

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: String) -> Outcome {
    Outcome { ok, detail }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed >= limit {
            o.ok = false;
        }
        o.detail = format!(
            "{}; {:.3}s (limit {:.0}s)",
            o.detail,
            elapsed.as_secs_f64(),
            limit.as_secs_f64()
        );
    } else {
        o.detail = format!("{}; {:.3}s", o.detail, elapsed.as_secs_f64());
    }
    o
}

/// 1. Law of total probability, exhaustive on DIE6 and on 1000 random instances.
fn law_of_total_probability() -> Outcome {
    let (space, partition, _) = common::die6();
    let mut worst: f64 = 0.0;
    for mask in 0u32..64 {
        let a = space.event((0..6).filter(|i| mask >> i & 1 == 1)).unwrap();
        let oracle = common::brute_prob(space.weights(), |i| mask >> i & 1 == 1);
        let total = total_probability(&space, &a, &partition).unwrap();
        worst = worst.max((total - oracle).abs());
    }
    let die_worst = worst;
    for trial in 0..1000 {
        let inst = random_instance(&mut trial_rng(SEED, trial), Shape::default());
        let oracle = common::brute_prob(inst.space.weights(), |i| inst.event.contains(i));
        let total = total_probability(&inst.space, &inst.event, &inst.partition).unwrap();
        worst = worst.max((total - oracle).abs());
    }
    outcome(
        worst <= IDENTITY,
        format!("64 DIE6 events (max dev {die_worst:.1e}) + 1000 random, max |Σ P(A|Bj)P(Bj) − P(A)| = {worst:.2e}"),
    )
}

/// 2. Dirichlet's principle: both minimizers agree with P(A∩Bj)/P(Bj).
fn dirichlet_equivalence() -> Outcome {
    let mut exact_worst: f64 = 0.0;
    let mut gd_worst: f64 = 0.0;
    let mut unconverged = 0;
    for trial in 0..500 {
        let inst = random_instance(&mut trial_rng(SEED + 1, trial), Shape::default());
        let w = inst.space.weights();
        let closed: Vec<f64> = inst
            .partition
            .blocks()
            .iter()
            .map(|b| {
                common::brute_prob(w, |i| b.contains(i) && inst.event.contains(i))
                    / common::brute_prob(w, |i| b.contains(i))
            })
            .collect();
        let problem =
            EnergyProblem::for_event(inst.space.clone(), inst.partition.clone(), &inst.event)
                .unwrap();
        let exact = problem.minimize(&SolverConfig::exact()).unwrap();
        let gd = problem
            .minimize(&SolverConfig {
                tol: GD_TOL,
                ..SolverConfig::gradient_descent()
            })
            .unwrap();
        if !gd.converged {
            unconverged += 1;
        }
        for ((e, g), c) in exact.coefficients.iter().zip(&gd.coefficients).zip(&closed) {
            exact_worst = exact_worst.max((e - c).abs());
            gd_worst = gd_worst.max((g - c).abs());
        }
    }

    let mut fixtures_ok = true;
    let mut fixture_notes = Vec::new();
    for (name, (space, partition, a), want, want_energy) in [
        ("DIE6", common::die6(), vec![0.5, 0.5, 0.5], -0.125),
        ("SKEW", common::skew(), vec![1.0, 0.6], -0.34),
    ] {
        let problem = EnergyProblem::for_event(space, partition, &a).unwrap();
        for config in [SolverConfig::exact(), SolverConfig::gradient_descent()] {
            let tol = if config == SolverConfig::exact() {
                IDENTITY
            } else {
                GD_AGREEMENT
            };
            let r = problem.minimize(&config).unwrap();
            let coeff_ok = r
                .coefficients
                .iter()
                .zip(&want)
                .all(|(u, v)| (u - v).abs() <= tol);
            let energy_ok = (r.energy - want_energy).abs() <= tol;
            fixtures_ok &= coeff_ok && energy_ok && r.converged;
            fixture_notes.push(format!("{name}/{:?} J={:.6}", r.method, r.energy));
        }
    }
    outcome(
        exact_worst <= IDENTITY && gd_worst <= GD_AGREEMENT && unconverged == 0 && fixtures_ok,
        format!(
            "500 random: exact dev {exact_worst:.2e}, gd dev {gd_worst:.2e}, unconverged {unconverged}; {}",
            fixture_notes.join(", ")
        ),
    )
}

/// 3. Every computed ξ passes measurability and property (iii) over all 2^N members.
fn definition_audit() -> Outcome {
    let shape = Shape {
        max_blocks: 10,
        ..Shape::default()
    }
    .with_nulls(0.2);
    let mut worst: f64 = 0.0;
    let mut failed = 0;
    let mut members = 0u64;
    for trial in 0..200 {
        let inst = random_instance(&mut trial_rng(SEED + 2, trial), shape);
        assert!(inst.partition.len() <= 10);
        let indicator = inst.space.indicator(&inst.event).unwrap();
        for x in [&inst.variable, &indicator] {
            let xi = cond_expectation(&inst.space, x, &inst.partition).unwrap();
            let report =
                verify_properties(&inst.space, x, &inst.partition, &xi.as_variable).unwrap();
            worst = worst.max(report.property_iii_max_violation);
            members += report.members_checked;
            let expected = 1u64 << inst.partition.len();
            if !(report.measurable && report.complete && report.members_checked == expected) {
                failed += 1;
            }
        }
    }
    outcome(
        failed == 0 && worst <= IDENTITY,
        format!("200 instances × 2 variables, {members} member integrals, max violation {worst:.2e}, failures {failed}"),
    )
}

/// 4. Central differences match J′ and J″(y, y) > 0.
fn derivative_correctness() -> Outcome {
    let mut worst_rel: f64 = 0.0;
    let mut min_curvature = f64::INFINITY;
    for trial in 0..200 {
        let mut rng = trial_rng(SEED + 3, trial);
        let inst = random_instance(&mut rng, Shape::default().with_nulls(0.2));
        let n = inst.space.n();
        let target = inst.space.indicator(&inst.event).unwrap();
        let problem =
            EnergyProblem::new(inst.space.clone(), inst.partition.clone(), target).unwrap();
        let y = random_variable(&mut rng, n);
        let fd = problem.fd_check(&inst.variable, &y, FD_STEP).unwrap();
        worst_rel = worst_rel.max(fd.relative_error);

        let mut z = random_variable(&mut rng, n);
        while inst.space.support().all(|i| z.values()[i] == 0.0) {
            z = random_variable(&mut rng, n);
        }
        min_curvature = min_curvature.min(problem.gateaux_second(&z, &z).unwrap());
    }
    outcome(
        worst_rel <= FD_REL && min_curvature > 0.0,
        format!("200 instances: max relative error {worst_rel:.2e} at h = {FD_STEP:e}, min J″(y,y) = {min_curvature:.3e}"),
    )
}

/// 5. Hölder, both Clarkson inequalities and norm monotonicity on 1000 trials each.
fn inequality_suites() -> Outcome {
    let mut failures = [0usize; 4];
    let mut worst = [f64::INFINITY; 4];
    let mut parallelogram: f64 = 0.0;
    for trial in 0..1000u64 {
        let mut rng = trial_rng(SEED + 4, trial);
        let inst = random_instance(&mut rng, Shape::default());
        let s = &inst.space;
        let x = &inst.variable;
        let y = random_variable(&mut rng, s.n());
        let k = (trial % 5) as usize;
        let p = P_GRID[k];
        // case 1 lives on (1, 2], case 2 on [2, ∞); both run at p = 2
        let p1 = [1.25, 1.5, 2.0][k % 3];
        let p2 = [2.0, 3.0, 4.0][k % 3];
        let r = rng.random_range(1.0..p);
        let reports = [
            holder_check(s, x, &y, p).unwrap(),
            clarkson_first(s, x, &y, p1).unwrap(),
            clarkson_second(s, x, &y, p2).unwrap(),
            norm_monotonicity_check(s, x, r, p.max(r + 0.5)).unwrap(),
        ];
        for (i, rep) in reports.iter().enumerate() {
            worst[i] = worst[i].min(rep.slack);
            if rep.slack < SLACK || !rep.holds {
                failures[i] += 1;
            }
        }
        if p1 == 2.0 {
            parallelogram = parallelogram.max(reports[1].slack.abs());
        }
        if p2 == 2.0 {
            parallelogram = parallelogram.max(reports[2].slack.abs());
        }
    }
    outcome(
        failures.iter().all(|&f| f == 0) && parallelogram <= IDENTITY,
        format!(
            "failures holder/clarkson1/clarkson2/monotonicity = {failures:?}, worst slacks {:.1e}/{:.1e}/{:.1e}/{:.1e}, max |slack| at p=2 {parallelogram:.1e}",
            worst[0], worst[1], worst[2], worst[3]
        ),
    )
}

/// 6. σ-algebra structure for N = 1..12, exhaustive.
fn sigma_structure() -> Outcome {
    let mut problems = Vec::new();
    let mut time_at_12 = Duration::ZERO;
    for n_blocks in 1..=12usize {
        let start = Instant::now();
        let mut rng = trial_rng(SEED + 5, n_blocks as u64);
        let n = n_blocks + rng.random_range(0..=n_blocks);
        let (space, partition) = random_space_and_partition(&mut rng, n, n_blocks, 0.2);
        let sigma = SigmaAlgebra::generate(partition);
        let members = sigma.members().unwrap();
        let set: HashSet<_> = members.iter().cloned().collect();
        if members.len() != 1 << n_blocks || set.len() != members.len() {
            problems.push(format!("N={n_blocks}: {} members", members.len()));
        }
        if !set.contains(&space.empty_event()) || !set.contains(&space.full_event()) {
            problems.push(format!("N={n_blocks}: ∅ or Ω missing"));
        }
        for e in members {
            if !set.contains(&e.complement()) {
                problems.push(format!("N={n_blocks}: complement of {e} missing"));
            }
            for f in members {
                if !set.contains(&e.union(f).unwrap()) {
                    problems.push(format!("N={n_blocks}: {e} ∪ {f} missing"));
                }
            }
        }
        if n_blocks == 12 {
            time_at_12 = start.elapsed();
        }
    }
    if time_at_12 >= Duration::from_secs(5) {
        problems.push("N=12 over the 5s limit".into());
    }
    problems.truncate(3);
    outcome(
        problems.is_empty(),
        format!(
            "N = 1..12 exhaustive, N=12 took {:.3}s {problems:?}",
            time_at_12.as_secs_f64()
        ),
    )
}

/// 7. J(ξ + d) − J(ξ) = ½‖d‖² for measurable d.
fn quadratic_expansion() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut min_gap = f64::INFINITY;
    for trial in 0..200 {
        let mut rng = trial_rng(SEED + 6, trial);
        let inst = random_instance(&mut rng, Shape::default().with_nulls(0.2));
        let problem =
            EnergyProblem::for_event(inst.space.clone(), inst.partition.clone(), &inst.event)
                .unwrap();
        let xi = cond_expectation(&inst.space, problem.target(), &inst.partition).unwrap();
        let alpha: Vec<f64> = (0..inst.partition.len())
            .map(|_| rng.random_range(-2.0..2.0))
            .collect();
        let d = inst
            .space
            .simple_combination(&alpha, inst.partition.blocks())
            .unwrap();
        let gap = problem.energy(&xi.as_variable.add(&d).unwrap()).unwrap()
            - problem.energy(&xi.as_variable).unwrap();
        let half = 0.5 * inst.space.inner_product(&d, &d).unwrap();
        worst = worst.max((gap - half).abs());
        min_gap = min_gap.min(gap);
    }
    outcome(
        worst <= IDENTITY && min_gap > 0.0,
        format!("200 perturbations: max |ΔJ − ½‖d‖²| = {worst:.2e}, min ΔJ = {min_gap:.3e}"),
    )
}

/// 8. `check` output is byte-identical across runs with a fixed seed.
fn determinism() -> Outcome {
    let mut mismatched = Vec::new();
    for suite in ["holder", "clarkson", "monotonicity", "sigma", "dirichlet"] {
        let args = [
            "probvar", "check", "--suite", suite, "--trials", "200", "--seed", "7",
        ];
        let run = || {
            let mut out = Vec::new();
            let code = run_with(args, &mut out, &mut std::io::sink());
            (code, out)
        };
        let first = run();
        if first.0 != 0 || run() != first {
            mismatched.push(suite);
        }
        let bin = std::process::Command::new(env!("CARGO_BIN_EXE_probvar"))
            .args(&args[1..])
            .env_remove("PROBVAR_SEED")
            .output()
            .unwrap();
        if bin.stdout != first.1 {
            mismatched.push(suite);
        }
    }
    outcome(
        mismatched.is_empty(),
        format!("5 suites × (2 in-process runs + 1 binary run), mismatches {mismatched:?}"),
    )
}

/// Name, check, and wall-clock limit.
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria: [Criterion; 8] = [
        (
            "AC1 law of total probability",
            law_of_total_probability,
            secs(1),
        ),
        (
            "AC2 Dirichlet principle equivalence",
            dirichlet_equivalence,
            secs(10),
        ),
        ("AC3 conditional expectation audit", definition_audit, None),
        ("AC4 derivative correctness", derivative_correctness, None),
        ("AC5 inequality suites", inequality_suites, None),
        ("AC6 sigma-algebra structure", sigma_structure, None),
        ("AC7 quadratic expansion", quadratic_expansion, None),
        ("AC8 determinism", determinism, None),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let o = timed(limit, run);
        println!(
            "[{}] {name}: {}",
            if o.ok { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.ok {
            failed += 1;
        }
    }
    println!("{} criteria, {failed} failed", criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
