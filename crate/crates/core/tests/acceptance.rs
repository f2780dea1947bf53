//! Acceptance gate: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dirbandit::index::{
    break_even_observation, break_even_value, index_sweep, ArmFamily, IndexOptions,
};
use dirbandit::verify::{
    check_break_even_order, check_icx_monotonicity, check_known_payoff_mass,
    check_mean_replacement, check_montecarlo, check_oracle, check_prior_weight,
    check_reallocation_convexity, check_stopping, SuiteConfig, SuiteReport,
};
use dirbandit::{value, BanditState, DiscountSeq, DiscreteMeasure, Exact, Scalar, SolverOptions};

const SEED: u64 = 20_240_601;

struct Gate {
    failures: usize,
    residuals: Vec<f64>,
}

impl Gate {
    fn line(&mut self, id: &str, pass: bool, detail: String) {
        if !pass {
            self.failures += 1;
        }
        println!("[{}] {id:<3} {detail}", if pass { "PASS" } else { "FAIL" });
    }

    fn suite(&mut self, id: &str, what: &str, r: &SuiteReport, limit: Option<Duration>) -> bool {
        let in_time = limit.is_none_or(|l| r.elapsed <= l);
        let limit_note = limit.map_or(String::new(), |l| format!(" (limit {}s)", l.as_secs()));
        self.line(
            id,
            r.passed && in_time,
            format!(
                "{what}: {} trials, {} violations, slack {:e}, worst margin {:e}, {:.2}s{limit_note}",
                r.trials,
                r.violations.len(),
                r.slack,
                r.worst_margin,
                r.elapsed.as_secs_f64()
            ),
        );
        r.max_residual.inspect(|m| self.residuals.push(*m));
        r.passed && in_time
    }
}

fn cfg(trials: usize) -> SuiteConfig {
    SuiteConfig::new(SEED, trials)
}

fn run_or_fail<F>(gate: &mut Gate, id: &str, what: &str, f: F, limit: Option<Duration>)
where
    F: FnOnce() -> Result<SuiteReport, dirbandit::verify::VerifyError>,
{
    match f() {
        Ok(r) => {
            gate.suite(id, what, &r, limit);
        }
        Err(e) => gate.line(id, false, format!("{what}: error {e}")),
    }
}

fn worked_instance(gate: &mut Gate) {
    let q = |s: &str| Exact::parse_number(s).unwrap();
    let coin = DiscreteMeasure::new([(0.0, 1.0), (1.0, 1.0)]).unwrap();
    let half = DiscreteMeasure::point_mass(0.5, 1.0).unwrap();
    let a = DiscountSeq::uniform(2).unwrap();
    let state = BanditState::new(coin.clone(), half, a.clone());
    let w = value(&state, &SolverOptions::default()).unwrap().w;
    let w_exact = value(&state.to_exact(), &SolverOptions::default())
        .unwrap()
        .w;
    let opts = IndexOptions::default();
    let lam = break_even_value(&coin, &a, &opts).unwrap();
    let b = break_even_observation(&coin, &a, &opts).unwrap();
    gate.residuals.push(lam.residual);
    let ok = (w - 13.0 / 12.0).abs() <= 1e-12
        && w_exact == q("13/12")
        && (lam.value - 5.0 / 9.0).abs() <= 1e-9
        && (b.value - 2.0 / 3.0).abs() <= 1e-8;
    gate.line(
        "2",
        ok,
        format!(
            "worked instance: W = {w:.12} (exact {w_exact}), Λ = {:.10}, b = {:.10}; tolerances 1e-12 / 1e-9 / 1e-8",
            lam.value, b.value
        ),
    );
}

fn mass_sweeps(gate: &mut Gate) {
    let grid = [1.0, 2.0, 4.0, 8.0];
    let discounts = [
        DiscountSeq::uniform(6).unwrap(),
        DiscountSeq::truncated_geometric(0.75, 6).unwrap(),
    ];
    let mut min_gap = f64::INFINITY;
    let mut ok = true;
    for p in [0.25, 0.5, 0.75] {
        let bernoulli = DiscreteMeasure::new([(0.0, 1.0 - p), (1.0, p)]).unwrap();
        for a in &discounts {
            match index_sweep(
                &ArmFamily::Mass(bernoulli.clone()),
                a,
                &grid,
                &IndexOptions::with_tol(1e-11),
            ) {
                Ok(t) => {
                    for r in &t.rows {
                        gate.residuals.push(r.residual);
                    }
                    for w in t.rows.windows(2) {
                        min_gap = min_gap.min(w[0].lambda - w[1].lambda);
                    }
                }
                Err(e) => {
                    ok = false;
                    println!("      sweep error: {e}");
                }
            }
        }
    }
    gate.line(
        "4b",
        ok && min_gap > 1e-7,
        format!(
            "mass sweep M = 1, 2, 4, 8 on Bernoulli arms: minimum Λ gap {min_gap:e} (needs > 1e-7)"
        ),
    );
}

fn performance(gate: &mut Gate) {
    let two = BanditState::new(
        DiscreteMeasure::new([(0.0, 1.0), (1.0, 1.0)]).unwrap(),
        DiscreteMeasure::new([(0.25, 1.0), (0.75, 2.0)]).unwrap(),
        DiscountSeq::uniform(10).unwrap(),
    );
    let three = BanditState::new(
        DiscreteMeasure::new([(0.0, 1.0), (0.5, 1.0), (1.0, 1.0)]).unwrap(),
        DiscreteMeasure::new([(0.125, 1.0), (0.5, 2.0), (0.875, 1.0)]).unwrap(),
        DiscountSeq::uniform(8).unwrap(),
    );
    let time = |s: &BanditState| {
        let start = Instant::now();
        let ok = value(s, &SolverOptions::default()).is_ok();
        (ok, start.elapsed())
    };
    let (ok2, t2) = time(&two);
    let (ok3, t3) = time(&three);
    gate.line(
        "11",
        ok2 && ok3 && t2 < Duration::from_secs(1) && t3 < Duration::from_secs(30),
        format!(
            "performance: s = 2, n = 10 in {:.4}s (limit 1s); s = 3, n = 8 in {:.4}s (limit 30s)",
            t2.as_secs_f64(),
            t3.as_secs_f64()
        ),
    );
}

fn main() -> ExitCode {
    let mut gate = Gate {
        failures: 0,
        residuals: Vec::new(),
    };
    let minute = Duration::from_secs(60);
    let five = Duration::from_secs(300);

    run_or_fail(
        &mut gate,
        "1",
        "oracle equivalence (n ≤ 4, ≤ 3 atoms)",
        || check_oracle(&cfg(100)),
        Some(minute),
    );
    worked_instance(&mut gate);
    run_or_fail(
        &mut gate,
        "3",
        "icx monotonicity, n ≤ 6",
        || check_icx_monotonicity(&cfg(200)),
        Some(five),
    );
    run_or_fail(
        &mut gate,
        "4a",
        "prior weight monotonicity with index companion",
        || check_prior_weight(&cfg(200)),
        Some(five),
    );
    mass_sweeps(&mut gate);
    run_or_fail(
        &mut gate,
        "5",
        "convexity on 9-point grids",
        || check_reallocation_convexity(&cfg(100), 9),
        None,
    );
    run_or_fail(
        &mut gate,
        "6a",
        "mass at the known payoff",
        || check_known_payoff_mass(&cfg(100)),
        None,
    );
    run_or_fail(
        &mut gate,
        "6b",
        "prior mean replacement",
        || check_mean_replacement(&cfg(100), 5),
        None,
    );
    run_or_fail(
        &mut gate,
        "7",
        "break-even observation ≥ value",
        || check_break_even_order(&cfg(100)),
        None,
    );

    let max_residual = gate.residuals.iter().cloned().fold(0.0, f64::max);
    let count = gate.residuals.len();
    gate.line(
        "8",
        max_residual <= 1e-8,
        format!("index residuals: max {max_residual:e} over {count} recorded maxima (limit 1e-8)"),
    );

    run_or_fail(
        &mut gate,
        "9",
        "Monte Carlo, 1e5 trajectories each, 4 SE",
        || check_montecarlo(&cfg(50), 100_000),
        None,
    );
    run_or_fail(
        &mut gate,
        "10",
        "stopping structure at Λ ± 0.01",
        || check_stopping(&cfg(100), 0.01),
        None,
    );
    performance(&mut gate);

    if gate.failures == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", gate.failures);
        ExitCode::FAILURE
    }
}
