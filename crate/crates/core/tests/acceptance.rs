//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_traits::{Pow, Zero};
use pbt::fidelity::{
    asymptote_standard, block_spectrum, fidelity_given_coefficients, fidelity_standard, lower_bound_standard,
    optimize_coefficients, optimize_from_table, standard_from_table, BlockOperator, EigenOptions,
    PortCoefficients,
};
use pbt::oracle::{
    average_state, certificate_x, certificate_y, certify_optimality, eta_ensemble, partial_trace_first,
    pbt_ensemble, pretty_good_measurement, scaled, success_probability, teleportation_fidelity_direct,
    young_projectors, DenseOperator, PortState, C64,
};
use pbt::young::{
    enumerate_partitions, remove_box_predecessors, sn_character, specht_dim, weyl_dim, BranchingTable, NumericMode,
    Partition,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{expand, max_deviation, part, random_coefficients, specht, weyl, Objective, SEED};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

const ORACLE_SET: [(u32, u32); 6] = [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3)];

fn criterion_1() -> Outcome {
    for d in 1..=5u32 {
        let r = fidelity_standard(d, 1).map_err(|e| e.to_string())?;
        ensure!(r.numeric_mode == NumericMode::ExactHybrid, "d={d}: not in exact mode");
        ensure!(r.fidelity == 1.0 / f64::from(d * d), "d={d}: F = {}", r.fidelity);
    }
    Ok("F(d,1) = 1/d^2 exactly for d = 1..5".into())
}

fn criterion_2() -> Outcome {
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    for (d, n) in ORACLE_SET {
        let start = Instant::now();
        let formula = fidelity_standard(d, n).unwrap().fidelity;
        let e = pbt_ensemble(d, n).unwrap();
        let povm = pretty_good_measurement(&e).unwrap();
        let p = success_probability(&e, &povm.elements).unwrap();
        let dev = (formula - f64::from(n) / f64::from(d * d) * p).abs();
        let elapsed = start.elapsed();
        ensure!(dev <= 1e-9, "(d,N)=({d},{n}): deviation {dev:e}");
        ensure!(elapsed < Duration::from_secs(10), "(d,N)=({d},{n}) took {elapsed:?}");
        worst = worst.max(dev);
        slowest = slowest.max(elapsed);
    }
    Ok(format!("max |F - (N/d^2) p_succ| = {worst:.2e}, slowest case {slowest:.2?}"))
}

fn criterion_3() -> Outcome {
    let mut worst = 0.0f64;
    for (d, n) in [(2, 2), (2, 3)] {
        let e = pbt_ensemble(d, n).unwrap();
        let povm = pretty_good_measurement(&e).unwrap();
        let direct = teleportation_fidelity_direct(d, n, PortState::Standard, &povm.elements).unwrap();
        let dev = (direct - fidelity_standard(d, n).unwrap().fidelity).abs();
        ensure!(dev <= 1e-9, "(d,N)=({d},{n}): channel {direct} deviates by {dev:e}");
        worst = worst.max(dev);
    }
    Ok(format!("channel simulation matches the formula, max deviation {worst:.2e}"))
}

// {r_{mu,alpha} repeated m_alpha d_mu times} from the reference dimensions.
fn reference_avg_spectrum(d: u32, n: u32) -> Vec<f64> {
    let mut out = Vec::new();
    for alpha in common::partitions(n - 1, d) {
        for mu in common::add_box(&alpha, d) {
            let r = f64::from(n) / f64::from(d).powi(n as i32) * weyl(&mu, d) * specht(&alpha)
                / (weyl(&alpha, d) * specht(&mu));
            let times = (weyl(&alpha, d) * specht(&mu)) as usize;
            out.extend(std::iter::repeat(r).take(times));
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

fn criterion_4() -> Outcome {
    let mut worst = 0.0f64;
    for (d, n) in ORACLE_SET {
        let rho = average_state(&pbt_ensemble(d, n).unwrap(), false);
        let oracle = rho.nonzero_spectrum(1e-10).unwrap();
        let reference = reference_avg_spectrum(d, n);
        let table = BranchingTable::new(d, n, NumericMode::ExactHybrid).unwrap();
        let library = expand(&block_spectrum(&table, BlockOperator::AverageState, None).unwrap());
        let dev = max_deviation(&oracle, &reference).max(max_deviation(&library, &reference));
        ensure!(dev <= 1e-9, "(d,N)=({d},{n}): spectrum deviation {dev:e}");
        worst = worst.max(dev);
    }
    Ok(format!("nonzero spectrum of the average state matches r_(mu,alpha), max deviation {worst:.2e}"))
}

fn criterion_5() -> Outcome {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for d in 1..=3u32 {
        let mut previous: Vec<(Partition, DenseOperator)> = Vec::new();
        for n in 1..=4u32 {
            let projectors = young_projectors(d, n).unwrap();
            for (mu, p) in &projectors {
                let m_mu = weyl(mu.parts(), d);
                if n == 1 {
                    // Only the empty diagram remains: tr P_(1) = m_(1).
                    let dev = (p.trace().re - m_mu).abs();
                    ensure!(dev <= 1e-10, "d={d}: tr P_(1) = {}", p.trace().re);
                    worst = worst.max(dev);
                    cases += 1;
                    continue;
                }
                let lhs = partial_trace_first(p).unwrap();
                let dim = lhs.dim();
                let mut rhs = DMatrix::<C64>::zeros(dim, dim);
                for rel in remove_box_predecessors(mu) {
                    let (_, p_alpha) = previous.iter().find(|(a, _)| *a == rel.alpha).unwrap();
                    rhs += p_alpha.matrix() * C64::new(m_mu / weyl(rel.alpha.parts(), d), 0.0);
                }
                let dev = (lhs.matrix() - rhs).iter().fold(0.0f64, |m, z| m.max(z.norm()));
                ensure!(dev <= 1e-10, "d={d}, mu={mu}: deviation {dev:e}");
                worst = worst.max(dev);
                cases += 1;
            }
            previous = projectors;
        }
    }
    Ok(format!("{cases} diagrams, max deviation {worst:.2e}"))
}

fn lambda_min_gap(k: &DenseOperator, states: &[DenseOperator]) -> f64 {
    states
        .iter()
        .map(|s| {
            let diff = DenseOperator::new(k.matrix() - s.matrix(), k.factor_dims().to_vec()).unwrap();
            diff.lambda_min().unwrap()
        })
        .fold(f64::INFINITY, f64::min)
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut worst_feas, mut worst_gap) = (f64::INFINITY, 0.0f64);
    let mut certificates = 0;
    for (d, n) in ORACLE_SET {
        let rho = pbt_ensemble(d, n).unwrap();
        let povm = pretty_good_measurement(&rho).unwrap();
        let x = certificate_x(d, n).unwrap().operator;
        let feas = lambda_min_gap(&x, rho.states());
        let report = certify_optimality(&rho, &povm.elements, &scaled(&x, f64::from(n))).unwrap();
        ensure!(feas >= -1e-9, "X at ({d},{n}): lambda_min(X - rho_i) = {feas:e}");
        ensure!(report.gap.abs() <= 1e-8, "X at ({d},{n}): gap {:e}", report.gap);
        worst_feas = worst_feas.min(feas);
        worst_gap = worst_gap.max(report.gap.abs());
        certificates += 1;

        let table = BranchingTable::new(d, n, NumericMode::ExactHybrid).unwrap();
        for draw in 0..5 {
            let c = random_coefficients(&table, &mut rng);
            let eta = eta_ensemble(d, n, &c).unwrap();
            let y = certificate_y(d, n, &c).unwrap().operator;
            let feas = lambda_min_gap(&y, eta.states());
            let report = certify_optimality(&eta, &povm.elements, &scaled(&y, f64::from(n))).unwrap();
            ensure!(feas >= -1e-9, "Y at ({d},{n}) draw {draw}: lambda_min(Y - eta_i) = {feas:e}");
            ensure!(report.gap.abs() <= 1e-8, "Y at ({d},{n}) draw {draw}: gap {:e}", report.gap);
            worst_feas = worst_feas.min(feas);
            worst_gap = worst_gap.max(report.gap.abs());
            certificates += 1;
        }
    }
    Ok(format!(
        "{certificates} certificates, min lambda_min {worst_feas:.2e}, max |gap| {worst_gap:.2e}"
    ))
}

fn criterion_7() -> Outcome {
    let opt = optimize_coefficients(2, 2).unwrap();
    ensure!((opt.fidelity - 0.5).abs() <= 1e-12, "F*(2,2) = {}", opt.fidelity);
    let c = opt.coefficients.as_ref().unwrap();
    let povm = pretty_good_measurement(&pbt_ensemble(2, 2).unwrap()).unwrap();
    let p = success_probability(&eta_ensemble(2, 2, c).unwrap(), &povm.elements).unwrap();
    ensure!((p - 1.0).abs() <= 1e-9, "oracle p_succ = {p}");

    let mut worst = 0.0f64;
    for (d, n) in ORACLE_SET {
        let eigen = optimize_coefficients(d, n).unwrap().fidelity;
        let objective = Objective::new(d, n);
        let (direct, u) = objective.maximize(20, SEED + u64::from(d * 100 + n));
        let table = BranchingTable::new(d, n, NumericMode::ExactHybrid).unwrap();
        let c = PortCoefficients::renormalized(&table, objective.coefficients(&u)).unwrap();
        let evaluated = fidelity_given_coefficients(&c).unwrap().fidelity;
        let dev = (eigen - direct).abs().max((eigen - evaluated).abs());
        ensure!(dev <= 1e-8, "(d,N)=({d},{n}): eigen {eigen} vs projected gradient {direct}");
        worst = worst.max(dev);
    }
    Ok(format!(
        "F*(2,2) = {}, oracle p_succ = {p:.12}, eigen vs projected gradient max deviation {worst:.2e}",
        opt.fidelity
    ))
}

fn criterion_8() -> Outcome {
    let mut points = 0;
    for d in [2u32, 3] {
        let grid: Vec<u32> = if d == 2 {
            (1..=400).collect()
        } else {
            (1..=40).chain([50, 100, 200, 300, 400]).collect()
        };
        for n in 1..=400u32 {
            let table = BranchingTable::new(d, n, NumericMode::for_size(n, 40)).unwrap();
            let f = standard_from_table(&table).fidelity;
            ensure!(
                lower_bound_standard(d, n) <= f && f <= 1.0,
                "d={d}, N={n}: F = {f} outside [{}, 1]",
                lower_bound_standard(d, n)
            );
            if grid.contains(&n) {
                let opt = optimize_from_table(&table, &EigenOptions::default()).map_err(|e| e.to_string())?;
                ensure!(opt.fidelity >= f - 1e-12, "d={d}, N={n}: F* = {} < F = {f}", opt.fidelity);
                points += 1;
            }
        }
        let target = f64::from(d * d - 1) / 4.0;
        let residuals: Vec<f64> = [50u32, 100, 200, 400]
            .iter()
            .map(|&n| (f64::from(n) * (1.0 - fidelity_standard(d, n).unwrap().fidelity) - target).abs())
            .collect();
        ensure!(
            residuals.windows(2).all(|w| w[1] < w[0]),
            "d={d}: residuals {residuals:?} not decreasing"
        );
        ensure!(
            (asymptote_standard(d, 400) - fidelity_standard(d, 400).unwrap().fidelity).abs() < residuals[0] / 400.0,
            "d={d}: asymptote not approached"
        );
    }
    Ok(format!("bounds hold for N <= 400, residuals decrease, F* >= F at {points} points"))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let output = Command::new(env!("CARGO_BIN_EXE_pbt"))
        .args(["scan", "--d", "2", "--from", "1", "--to", "1000", "--mode", "standard", "--format", "csv"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure!(output.status.success(), "scan exited with {}", output.status);
    let text = String::from_utf8(output.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    ensure!(rows.len() == 1000, "{} rows", rows.len());
    ensure!(rows[999].ends_with(",log-domain,"), "row 1000 is `{}`", rows[999]);
    ensure!(elapsed < Duration::from_secs(60), "scan took {elapsed:?}");

    let mut worst = 0.0f64;
    for d in 2..=4u32 {
        for n in 1..=30u32 {
            let exact = standard_from_table(&BranchingTable::new(d, n, NumericMode::ExactHybrid).unwrap()).fidelity;
            let log = standard_from_table(&BranchingTable::new(d, n, NumericMode::LogDomain).unwrap()).fidelity;
            let rel = ((exact - log) / exact).abs();
            ensure!(rel <= 1e-10, "d={d}, N={n}: exact {exact} vs log-domain {log}");
            worst = worst.max(rel);
        }
    }
    Ok(format!(
        "scan 1..1000 in {:.1} s, exact vs log-domain max relative deviation {worst:.2e}",
        elapsed.as_secs_f64()
    ))
}

fn z_centralizer(shape: &Partition) -> f64 {
    let mut z = 1.0;
    let parts = shape.parts();
    let mut k = 0;
    while k < parts.len() {
        let len = parts[k];
        let count = parts[k..].iter().take_while(|&&p| p == len).count();
        z *= f64::from(len).powi(count as i32) * (1..=count).map(|x| x as f64).product::<f64>();
        k += count;
    }
    z
}

fn criterion_10() -> Outcome {
    for d in 1..=4u32 {
        for n in 0..=30u32 {
            let total = enumerate_partitions(n, d)
                .iter()
                .fold(BigUint::zero(), |acc, mu| acc + specht_dim(mu) * weyl_dim(mu, d).unwrap());
            ensure!(total == BigUint::from(d).pow(n), "d={d}, N={n}: sum d_mu m_mu = {total}");
        }
    }
    for n in 1..=30u32 {
        for mu in enumerate_partitions(n, n) {
            let branched = remove_box_predecessors(&mu)
                .iter()
                .fold(BigUint::zero(), |acc, rel| acc + specht_dim(&rel.alpha));
            ensure!(branched == specht_dim(&mu), "Specht branching fails at {mu}");
        }
    }
    for d in 1..=4u32 {
        for n in 0..=20u32 {
            for alpha in enumerate_partitions(n, d) {
                let pieri = common::add_box(alpha.parts(), d)
                    .iter()
                    .fold(BigUint::zero(), |acc, mu| acc + weyl_dim(&part(mu), d).unwrap());
                ensure!(
                    pieri == weyl_dim(&alpha, d).unwrap() * BigUint::from(d),
                    "Pieri sum fails at d={d}, alpha={alpha}"
                );
            }
        }
    }
    for n in 1..=6u32 {
        let shapes = enumerate_partitions(n, n);
        let order: f64 = (1..=n).map(f64::from).product();
        for a in &shapes {
            for b in &shapes {
                let inner: f64 = shapes
                    .iter()
                    .map(|s| {
                        let (x, y) = (sn_character(a, s).unwrap(), sn_character(b, s).unwrap());
                        order / z_centralizer(s) * (x * y) as f64
                    })
                    .sum();
                let expected = if a == b { order } else { 0.0 };
                ensure!((inner - expected).abs() < 1e-9, "orthogonality fails for {a}, {b}");
            }
        }
    }
    let mut worst = 0.0f64;
    for d in 1..=3u32 {
        for n in 1..=4u32 {
            let projectors = young_projectors(d, n).unwrap();
            let dim = projectors[0].1.dim();
            let mut sum = DMatrix::<C64>::zeros(dim, dim);
            for (i, (mu, p)) in projectors.iter().enumerate() {
                let pm = p.matrix();
                let idem = (pm * pm - pm).iter().fold(0.0f64, |m, z| m.max(z.norm()));
                let trace = (p.trace().re - specht(mu.parts()) * weyl(mu.parts(), d)).abs();
                worst = worst.max(idem).max(trace).max(p.hermitian_defect());
                for (_, q) in &projectors[i + 1..] {
                    let cross = (pm * q.matrix()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
                    worst = worst.max(cross);
                }
                sum += pm;
            }
            let complete = (sum - DMatrix::<C64>::identity(dim, dim)).iter().fold(0.0f64, |m, z| m.max(z.norm()));
            worst = worst.max(complete);
            ensure!(worst <= 1e-10, "projector identities fail at d={d}, N={n}: {worst:e}");
        }
    }
    Ok(format!(
        "dimension sums, branching, Pieri and orthogonality exact; projector identities within {worst:.2e}"
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("trivial anchor", criterion_1),
        ("formula vs oracle PGM", criterion_2),
        ("end-to-end channel", criterion_3),
        ("average-state spectrum", criterion_4),
        ("partial trace of Young projectors", criterion_5),
        ("dual certificates", criterion_6),
        ("optimized protocol", criterion_7),
        ("bounds and asymptotics", criterion_8),
        ("performance and numeric modes", criterion_9),
        ("representation theory", criterion_10),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1} s)", k + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} ({secs:.1} s)", k + 1);
            }
        }
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
