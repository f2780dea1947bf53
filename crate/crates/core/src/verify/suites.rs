use std::str::FromStr;
use std::time::Instant;

use rand::Rng;

use super::{
    rng_for, simulate_policy, split_seed, GapSummary, InstanceGen, SuiteConfig, SuiteReport,
    VerifyError, Violation,
};
use crate::index::{break_even_observation, break_even_value, IndexOptions, IndexResult};
use crate::measure::DiscreteMeasure;
use crate::order::{leq_icx, random_mean_preserving_spread};
use crate::par;
use crate::scalar::{Exact, Scalar};
use crate::solver::{
    brute_force_value, value, value_one_armed, Action, Arithmetic, BanditState, SolverOptions,
};
use crate::DiscountSeq;

/// Bisection tolerance for `Λ` comparisons inside suites; far below the
/// float slack so that two indices of equal value never differ by more.
pub const SUITE_INDEX_TOL: f64 = 1e-11;
/// Slack for `b ≥ Λ`.
pub const BREAK_EVEN_SLACK: f64 = 1e-8;
/// Allowed `|value - brute force|`.
pub const ORACLE_TOL: f64 = 1e-10;
pub const DEFAULT_STRICT_MARGIN: f64 = 1e-7;
pub const DEFAULT_MC_SAMPLES: usize = 100_000;
/// Monte Carlo band, in standard errors.
pub const MC_BAND: f64 = 4.0;
/// Fraction of Monte Carlo instances allowed outside the band.
pub const MC_ALLOWED_MISS: f64 = 0.01;

/// Outcome of one trial.
#[derive(Debug, Clone, Default)]
struct Trial {
    margin: f64,
    /// A float-arithmetic margin with its own slack (index comparisons
    /// inside exact-mode suites).
    side: Option<(f64, f64)>,
    residual: Option<f64>,
    gap: Option<f64>,
    note: Option<String>,
}

impl Trial {
    fn margin(margin: f64) -> Self {
        Self {
            margin,
            ..Self::default()
        }
    }
}

fn solver() -> SolverOptions {
    SolverOptions::sequential()
}

fn index_opts(tol: f64) -> IndexOptions {
    IndexOptions {
        tol,
        solver: solver(),
        ..IndexOptions::default()
    }
}

fn solve_err(seed: u64) -> impl Fn(crate::solver::SolveError) -> VerifyError {
    move |source| VerifyError::Solve { seed, source }
}

fn index_err(seed: u64) -> impl Fn(crate::index::IndexError) -> VerifyError {
    move |source| VerifyError::Index { seed, source }
}

fn run<F>(name: &str, cfg: &SuiteConfig, slack: f64, trial: F) -> Result<SuiteReport, VerifyError>
where
    F: Fn(u64) -> Result<Trial, VerifyError> + Sync + Send,
{
    run_with_margin(name, cfg, slack, DEFAULT_STRICT_MARGIN, trial)
}

fn run_with_margin<F>(
    name: &str,
    cfg: &SuiteConfig,
    slack: f64,
    strict_margin: f64,
    trial: F,
) -> Result<SuiteReport, VerifyError>
where
    F: Fn(u64) -> Result<Trial, VerifyError> + Sync + Send,
{
    let start = Instant::now();
    let outcomes = par::map_indexed(cfg.trials, cfg.parallel, |i| {
        let seed = split_seed(cfg.gen.seed, i as u64);
        trial(seed).map(|t| (seed, t))
    });
    let mut violations = Vec::new();
    let mut worst = f64::INFINITY;
    let mut max_residual: Option<f64> = None;
    let mut gaps = Vec::new();
    let mut notes = Vec::new();
    for outcome in outcomes {
        let (seed, t) = outcome?;
        let mut margin = t.margin;
        let mut violated = t.margin < -slack;
        if let Some((side, side_slack)) = t.side {
            margin = margin.min(side);
            violated |= side < -side_slack;
        }
        if violated {
            violations.push(Violation { seed, margin });
        }
        worst = worst.min(margin);
        if let Some(r) = t.residual {
            max_residual = Some(max_residual.map_or(r, |m: f64| m.max(r)));
        }
        if let Some(g) = t.gap {
            gaps.push((seed, g));
        }
        if let Some(n) = t.note {
            notes.push(format!("instance seed {seed}: {n}"));
        }
    }
    let passed = violations.is_empty();
    Ok(SuiteReport {
        suite: name.to_string(),
        seed: cfg.gen.seed,
        trials: cfg.trials,
        mode: cfg.mode,
        slack,
        violations,
        worst_margin: if worst.is_finite() { worst } else { 0.0 },
        passed,
        max_residual,
        gaps: (!gaps.is_empty()).then(|| summarize_gaps(&gaps, strict_margin)),
        notes,
        elapsed: start.elapsed(),
    })
}

fn summarize_gaps(gaps: &[(u64, f64)], strict_margin: f64) -> GapSummary {
    let mut values: Vec<f64> = gaps.iter().map(|g| g.1).collect();
    values.sort_by(f64::total_cmp);
    GapSummary {
        strict_margin,
        min: values[0],
        median: values[values.len() / 2],
        max: values[values.len() - 1],
        below_margin: gaps
            .iter()
            .filter(|g| g.1 <= strict_margin || g.1.is_nan())
            .map(|g| g.0)
            .collect(),
    }
}

fn w_of<S: Scalar>(
    arm1: DiscreteMeasure<S>,
    arm2: DiscreteMeasure<S>,
    a: &DiscountSeq<S>,
    seed: u64,
) -> Result<S, VerifyError> {
    value(&BanditState::new(arm1, arm2, a.clone()), &solver())
        .map(|r| r.w)
        .map_err(solve_err(seed))
}

fn scalar<S: Scalar>(x: f64) -> S {
    S::from_f64(x).expect("generated values are finite")
}

// ---------------------------------------------------------------------------
// Convexity in atom reallocation
// ---------------------------------------------------------------------------

fn convexity_trial<S: Scalar>(
    gen: &InstanceGen,
    seed: u64,
    grid_points: usize,
) -> Result<Trial, VerifyError> {
    let mut rng = rng_for(seed);
    let n = gen.horizon(&mut rng, 1);
    let a = gen.discount(&mut rng, n).cast::<S>();
    let alpha = gen.measure(&mut rng).cast::<S>();
    let other = gen.measure(&mut rng).cast::<S>();
    let u: S = scalar(gen.location(&mut rng));
    let v: S = scalar(gen.location(&mut rng));
    let r: S = scalar(gen.mass(&mut rng));
    let varied_is_arm1 = rng.random_bool(0.5);
    let steps = S::from_i64(grid_points as i64 - 1);
    let mut phi = Vec::with_capacity(grid_points);
    for k in 0..grid_points {
        let rho = r.clone() * S::from_i64(k as i64) / steps.clone();
        let m = DiscreteMeasure::new(
            alpha
                .pairs()
                .chain([(u.clone(), rho.clone()), (v.clone(), r.clone() - rho)]),
        )
        .expect("nonnegative reallocation");
        let w = if varied_is_arm1 {
            w_of(m, other.clone(), &a, seed)?
        } else {
            w_of(other.clone(), m, &a, seed)?
        };
        phi.push(w);
    }
    let margin = phi
        .windows(3)
        .map(|w| (w[0].clone() - S::from_i64(2) * w[1].clone() + w[2].clone()).to_f64())
        .fold(f64::INFINITY, f64::min);
    Ok(Trial::margin(margin))
}

/// `ρ ↦ W(α + ρδ_u + (r-ρ)δ_v, α_2; A)` is convex: second differences on a
/// uniform `ρ`-grid are nonnegative.
pub fn check_reallocation_convexity(
    cfg: &SuiteConfig,
    grid_points: usize,
) -> Result<SuiteReport, VerifyError> {
    if grid_points < 3 {
        return Err(VerifyError::InvalidParameter(
            "the convexity suite needs at least 3 grid points",
        ));
    }
    let gen = &cfg.gen;
    run("lemma1", cfg, cfg.slack(), |seed| match cfg.mode {
        Arithmetic::Float => convexity_trial::<f64>(gen, seed, grid_points),
        Arithmetic::Exact => convexity_trial::<Exact>(gen, seed, grid_points),
    })
}

// ---------------------------------------------------------------------------
// Increasing convex order of the prior mean
// ---------------------------------------------------------------------------

/// A pair `F ≤icx F̃` built from upward atom shifts and mean-preserving
/// spreads; the pair is checked with [`leq_icx`] before use.
pub fn icx_pair(
    gen: &InstanceGen,
    rng: &mut impl Rng,
    seed: u64,
) -> Result<(DiscreteMeasure, DiscreteMeasure), VerifyError> {
    let f = gen.distribution(rng, 1);
    let mut larger = f.clone();
    for _ in 0..rng.random_range(0..=3) {
        if rng.random_bool(0.5) {
            let index = rng.random_range(0..larger.len());
            let up = rng.random_range(1..=4) as f64 / 8.0;
            let x = larger.atoms()[index].location + up;
            larger = larger.relocate_atom(index, x).expect("index in range");
        } else {
            larger = random_mean_preserving_spread(&larger, rng.random());
        }
    }
    let check = leq_icx(&f, &larger).map_err(|e| VerifyError::GeneratorFailed {
        seed,
        reason: e.to_string(),
    })?;
    if !check.holds {
        return Err(VerifyError::GeneratorFailed {
            seed,
            reason: format!("constructed pair fails icx at {:?}", check.witness),
        });
    }
    Ok((f, larger))
}

fn icx_trial<S: Scalar>(gen: &InstanceGen, seed: u64) -> Result<Trial, VerifyError> {
    let mut rng = rng_for(seed);
    let (f, larger) = icx_pair(gen, &mut rng, seed)?;
    let mass = gen.mass(&mut rng);
    let other = gen.measure(&mut rng).cast::<S>();
    let n = gen.horizon(&mut rng, 1);
    let a = gen.discount(&mut rng, n).cast::<S>();
    let small = f.with_total_mass(mass).expect("positive").cast::<S>();
    let big = larger.with_total_mass(mass).expect("positive").cast::<S>();
    let (lo, hi) = if rng.random_bool(0.5) {
        (
            w_of(small, other.clone(), &a, seed)?,
            w_of(big, other, &a, seed)?,
        )
    } else {
        (
            w_of(other.clone(), small, &a, seed)?,
            w_of(other, big, &a, seed)?,
        )
    };
    Ok(Trial::margin((hi - lo).to_f64()))
}

/// `F ≤icx F̃  ⇒  W(MF, α_2; A) ≤ W(MF̃, α_2; A)`.
pub fn check_icx_monotonicity(cfg: &SuiteConfig) -> Result<SuiteReport, VerifyError> {
    let gen = &cfg.gen;
    run("thm1", cfg, cfg.slack(), |seed| match cfg.mode {
        Arithmetic::Float => icx_trial::<f64>(gen, seed),
        Arithmetic::Exact => icx_trial::<Exact>(gen, seed),
    })
}

// ---------------------------------------------------------------------------
// Prior weight
// ---------------------------------------------------------------------------

fn lambda(
    arm: &DiscreteMeasure,
    a: &DiscountSeq,
    tol: f64,
    seed: u64,
) -> Result<IndexResult, VerifyError> {
    break_even_value(arm, a, &index_opts(tol)).map_err(index_err(seed))
}

fn prior_weight_trial<S: Scalar>(gen: &InstanceGen, seed: u64) -> Result<Trial, VerifyError> {
    let mut rng = rng_for(seed);
    let f = gen.distribution(&mut rng, 1);
    let mass = gen.mass(&mut rng);
    let heavier = mass + gen.mass(&mut rng);
    let other = gen.measure(&mut rng);
    let n = gen.horizon(&mut rng, 1);
    let a = gen.discount(&mut rng, n);
    let light_f = f.with_total_mass(mass).expect("positive");
    let heavy_f = f.with_total_mass(heavier).expect("positive");
    let (light, heavy) = (light_f.cast::<S>(), heavy_f.cast::<S>());
    let a_s = a.cast::<S>();
    let (wl, wh) = if rng.random_bool(0.5) {
        (
            w_of(light, other.cast(), &a_s, seed)?,
            w_of(heavy, other.cast(), &a_s, seed)?,
        )
    } else {
        (
            w_of(other.cast(), light, &a_s, seed)?,
            w_of(other.cast(), heavy, &a_s, seed)?,
        )
    };
    // Companion index comparison on a regular sequence.
    let regular = if a.is_regular() && *a.at(0) > 0.0 {
        a
    } else {
        gen.regular_positive_discount(&mut rng, n)
    };
    let ll = lambda(&light_f, &regular, SUITE_INDEX_TOL, seed)?;
    let lh = lambda(&heavy_f, &regular, SUITE_INDEX_TOL, seed)?;
    Ok(Trial {
        margin: (wl - wh).to_f64(),
        side: Some((ll.value - lh.value, 1e-9)),
        residual: Some(ll.residual.max(lh.residual)),
        ..Trial::default()
    })
}

/// `0 < M < M̃  ⇒  W(MF, α_2; A) ≥ W(M̃F, α_2; A)`, and for regular `A`,
/// `Λ(MF; A) ≥ Λ(M̃F; A)`.
pub fn check_prior_weight(cfg: &SuiteConfig) -> Result<SuiteReport, VerifyError> {
    let gen = &cfg.gen;
    run("thm2", cfg, cfg.slack(), |seed| match cfg.mode {
        Arithmetic::Float => prior_weight_trial::<f64>(gen, seed),
        Arithmetic::Exact => prior_weight_trial::<Exact>(gen, seed),
    })
}

// ---------------------------------------------------------------------------
// Adding mass at the known arm's payoff
// ---------------------------------------------------------------------------

fn known_payoff_trial<S: Scalar>(gen: &InstanceGen, seed: u64) -> Result<Trial, VerifyError> {
    let mut rng = rng_for(seed);
    let alpha = gen.measure(&mut rng).cast::<S>();
    let lam: S = scalar(gen.location(&mut rng));
    let n = gen.horizon(&mut rng, 1);
    let a = gen.discount(&mut rng, n).cast::<S>();
    let known = DiscreteMeasure::point_mass(lam.clone(), S::one()).expect("unit weight");
    let base = w_of(alpha.clone(), known.clone(), &a, seed)?;
    let mut margin = f64::INFINITY;
    for c in [S::one() / S::from_i64(2), S::one(), S::from_i64(2)] {
        let boosted = alpha.add_point(lam.clone(), c).expect("positive weight");
        let w = w_of(boosted, known.clone(), &a, seed)?;
        margin = margin.min((base.clone() - w).to_f64());
    }
    Ok(Trial::margin(margin))
}

/// `W(α + cδ_λ, δ_λ; A) ≤ W(α, δ_λ; A)` for `c ∈ {1/2, 1, 2}`.
pub fn check_known_payoff_mass(cfg: &SuiteConfig) -> Result<SuiteReport, VerifyError> {
    let gen = &cfg.gen;
    run("lemma3", cfg, cfg.slack(), |seed| match cfg.mode {
        Arithmetic::Float => known_payoff_trial::<f64>(gen, seed),
        Arithmetic::Exact => known_payoff_trial::<Exact>(gen, seed),
    })
}

// ---------------------------------------------------------------------------
// Replacing point masses by the prior mean distribution
// ---------------------------------------------------------------------------

fn mean_replacement_trial<S: Scalar>(
    gen: &InstanceGen,
    seed: u64,
    theta_grid: usize,
) -> Result<Trial, VerifyError> {
    let mut rng = rng_for(seed);
    let alpha = gen.measure(&mut rng).cast::<S>();
    let f = gen.distribution(&mut rng, 1).cast::<S>();
    let total: S = scalar(gen.mass(&mut rng));
    let other = gen.measure(&mut rng).cast::<S>();
    let n = gen.horizon(&mut rng, 1);
    let a = gen.discount(&mut rng, n).cast::<S>();
    let steps = S::from_i64(theta_grid as i64 - 1);
    let mut expectations = Vec::with_capacity(theta_grid);
    for k in 0..theta_grid {
        let theta = total.clone() * S::from_i64(k as i64) / steps.clone();
        let spread_part: Vec<(S, S)> = f.pairs().map(|(x, p)| (x, p * theta.clone())).collect();
        let mut terms = Vec::with_capacity(f.len());
        for (x, p) in f.pairs() {
            let m = DiscreteMeasure::new(
                alpha
                    .pairs()
                    .chain(spread_part.iter().cloned())
                    .chain([(x, total.clone() - theta.clone())]),
            )
            .expect("nonnegative weights");
            terms.push(p * w_of(m, other.clone(), &a, seed)?);
        }
        expectations.push(S::sum(terms));
    }
    let margin = expectations
        .windows(2)
        .map(|w| (w[0].clone() - w[1].clone()).to_f64())
        .fold(f64::INFINITY, f64::min);
    Ok(Trial::margin(margin))
}

/// `θ ↦ E[W(α + θF + (L-θ)δ_X, α_2; A) | X ~ F]` is nonincreasing on `[0, L]`.
pub fn check_mean_replacement(
    cfg: &SuiteConfig,
    theta_grid: usize,
) -> Result<SuiteReport, VerifyError> {
    if theta_grid < 2 {
        return Err(VerifyError::InvalidParameter(
            "the replacement suite needs at least 2 grid points",
        ));
    }
    let gen = &cfg.gen;
    run("lemma4", cfg, cfg.slack(), |seed| match cfg.mode {
        Arithmetic::Float => mean_replacement_trial::<f64>(gen, seed, theta_grid),
        Arithmetic::Exact => mean_replacement_trial::<Exact>(gen, seed, theta_grid),
    })
}

// ---------------------------------------------------------------------------
// Break-even observation versus break-even value
// ---------------------------------------------------------------------------

/// `b(α; A) ≥ Λ(α; A)` for regular, all-positive `A` with `n ≥ 2`.
/// Index computations are float-only; the suite ignores `cfg.mode`.
pub fn check_break_even_order(cfg: &SuiteConfig) -> Result<SuiteReport, VerifyError> {
    let gen = &cfg.gen;
    run("prop1", cfg, BREAK_EVEN_SLACK, |seed| {
        let mut rng = rng_for(seed);
        let alpha = gen.measure(&mut rng);
        let n = gen.horizon(&mut rng, 2);
        let a = gen.regular_positive_discount(&mut rng, n);
        if !(a.is_regular() && a.all_positive()) {
            return Err(VerifyError::GeneratorFailed {
                seed,
                reason: "discount is not regular and positive".into(),
            });
        }
        let opts = index_opts(crate::index::DEFAULT_TOL);
        let lam = break_even_value(&alpha, &a, &opts).map_err(index_err(seed))?;
        let b = break_even_observation(&alpha, &a, &opts).map_err(index_err(seed))?;
        Ok(Trial {
            margin: b.value - lam.value,
            residual: Some(lam.residual),
            note: b
                .nonmonotone
                .then(|| "break-even probes were not monotone".to_string()),
            ..Trial::default()
        })
    })
}

// ---------------------------------------------------------------------------
// Strict prior-weight monotonicity under uniform discounting
// ---------------------------------------------------------------------------

/// Reports `Λ(MF) - Λ(M̃F)` under uniform discounting for nondegenerate
/// `F`. Gaps below `strict_margin` are listed, never failed.
pub fn check_strictness(cfg: &SuiteConfig, strict_margin: f64) -> Result<SuiteReport, VerifyError> {
    let gen = &cfg.gen;
    let mut report = run_with_margin("strictness", cfg, f64::INFINITY, strict_margin, |seed| {
        let mut rng = rng_for(seed);
        let f = gen.distribution(&mut rng, 2);
        let mass = gen.mass(&mut rng);
        let heavier = mass + gen.mass(&mut rng);
        let n = gen.horizon(&mut rng, 2);
        let a = DiscountSeq::uniform(n).expect("n >= 2");
        let ll = lambda(
            &f.with_total_mass(mass).expect("positive"),
            &a,
            SUITE_INDEX_TOL,
            seed,
        )?;
        let lh = lambda(
            &f.with_total_mass(heavier).expect("positive"),
            &a,
            SUITE_INDEX_TOL,
            seed,
        )?;
        let gap = ll.value - lh.value;
        Ok(Trial {
            margin: gap,
            gap: Some(gap),
            residual: Some(ll.residual.max(lh.residual)),
            ..Trial::default()
        })
    })?;
    report.passed = true;
    Ok(report)
}

// ---------------------------------------------------------------------------
// Oracle equivalence and Monte Carlo
// ---------------------------------------------------------------------------

fn oracle_trial<S: Scalar>(gen: &InstanceGen, seed: u64) -> Result<Trial, VerifyError> {
    let mut rng = rng_for(seed);
    let max_n = gen.max_horizon.min(4);
    let n = rng.random_range(1..=max_n.max(1));
    let state = BanditState::new(
        gen.measure(&mut rng),
        gen.measure(&mut rng),
        gen.discount(&mut rng, n),
    );
    let w = value(&state.cast::<S>(), &solver())
        .map_err(solve_err(seed))?
        .w
        .to_f64();
    let oracle = brute_force_value(&state).map_err(solve_err(seed))?;
    Ok(Trial::margin(-(w - oracle).abs()))
}

/// Memoized recursion against the exhaustive history-tree search
/// (`n ≤ 4`, at most `max_atoms` atoms per arm).
pub fn check_oracle(cfg: &SuiteConfig) -> Result<SuiteReport, VerifyError> {
    let gen = &cfg.gen;
    run("oracle", cfg, ORACLE_TOL, |seed| match cfg.mode {
        Arithmetic::Float => oracle_trial::<f64>(gen, seed),
        Arithmetic::Exact => oracle_trial::<Exact>(gen, seed),
    })
}

/// Simulated payoff of the optimal policy against the recursion value,
/// `samples` trajectories per instance. Passes when no more than 1% of
/// instances fall outside `4` standard errors.
pub fn check_montecarlo(cfg: &SuiteConfig, samples: usize) -> Result<SuiteReport, VerifyError> {
    let gen = &cfg.gen;
    let mut report = run("montecarlo", cfg, 0.0, |seed| {
        let mut rng = rng_for(seed);
        let n = gen.horizon(&mut rng, 1);
        let state = BanditState::new(
            gen.measure(&mut rng),
            gen.measure(&mut rng),
            gen.discount(&mut rng, n),
        );
        let w = value(&state, &solver()).map_err(solve_err(seed))?.w;
        let est = simulate_policy(&state, samples, rng.random(), false).map_err(solve_err(seed))?;
        // The absolute term covers instances with zero spread.
        let band = MC_BAND * est.std_error + 1e-12;
        Ok(Trial::margin(band - (est.mean - w).abs()))
    })?;
    let allowed = (MC_ALLOWED_MISS * cfg.trials as f64).floor() as usize;
    report.passed = report.violations.len() <= allowed;
    Ok(report)
}

// ---------------------------------------------------------------------------
// Optimal stopping structure of the one-armed bandit
// ---------------------------------------------------------------------------

/// For regular `A`: at `λ = Λ + offset` the known arm is optimal and
/// `W = λ·T_1` (within `1e-10`); at `λ = Λ - offset` arm 1 is strictly
/// optimal. Not part of [`SuiteName::ALL`].
pub fn check_stopping(cfg: &SuiteConfig, offset: f64) -> Result<SuiteReport, VerifyError> {
    let gen = &cfg.gen;
    run("stopping", cfg, 0.0, |seed| {
        let mut rng = rng_for(seed);
        let alpha = gen.measure(&mut rng);
        let n = gen.horizon(&mut rng, 1);
        let a = gen.regular_positive_discount(&mut rng, n);
        let lam = lambda(&alpha, &a, crate::index::DEFAULT_TOL, seed)?;
        let total = a.total();
        let above = lam.value + offset;
        let hi = value_one_armed(&alpha, above, &a, &solver()).map_err(solve_err(seed))?;
        let mut margin = 1e-10 - (hi.w - above * total).abs();
        let mut note = None;
        if hi.action != Action::Arm2 {
            margin = margin.min(-1.0);
            note = Some(format!("action {} above the index", hi.action));
        }
        let below = lam.value - offset;
        let lo = value_one_armed(&alpha, below, &a, &solver()).map_err(solve_err(seed))?;
        if lo.action != Action::Arm1 {
            margin = margin.min(-1.0);
            note = Some(format!("action {} below the index", lo.action));
        }
        Ok(Trial {
            margin,
            residual: Some(lam.residual),
            note,
            ..Trial::default()
        })
    })
}

// ---------------------------------------------------------------------------
// Named suites
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteName {
    Convexity,
    IcxMonotone,
    PriorWeight,
    KnownPayoffMass,
    MeanReplacement,
    BreakEvenOrder,
    Strictness,
    Oracle,
    MonteCarlo,
}

impl SuiteName {
    pub const ALL: [SuiteName; 9] = [
        SuiteName::Convexity,
        SuiteName::IcxMonotone,
        SuiteName::PriorWeight,
        SuiteName::KnownPayoffMass,
        SuiteName::MeanReplacement,
        SuiteName::BreakEvenOrder,
        SuiteName::Strictness,
        SuiteName::Oracle,
        SuiteName::MonteCarlo,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Convexity => "lemma1",
            SuiteName::IcxMonotone => "thm1",
            SuiteName::PriorWeight => "thm2",
            SuiteName::KnownPayoffMass => "lemma3",
            SuiteName::MeanReplacement => "lemma4",
            SuiteName::BreakEvenOrder => "prop1",
            SuiteName::Strictness => "strictness",
            SuiteName::Oracle => "oracle",
            SuiteName::MonteCarlo => "montecarlo",
        }
    }

    pub fn default_trials(self) -> usize {
        match self {
            SuiteName::IcxMonotone | SuiteName::PriorWeight => 200,
            SuiteName::MonteCarlo => 50,
            _ => 100,
        }
    }
}

impl FromStr for SuiteName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SuiteName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// Per-suite parameters for [`run_suite`].
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteParams {
    pub convexity_grid: usize,
    pub replacement_grid: usize,
    pub strict_margin: f64,
    pub mc_samples: usize,
}

impl Default for SuiteParams {
    fn default() -> Self {
        Self {
            convexity_grid: 9,
            replacement_grid: 5,
            strict_margin: DEFAULT_STRICT_MARGIN,
            mc_samples: DEFAULT_MC_SAMPLES,
        }
    }
}

pub fn run_suite(
    name: SuiteName,
    cfg: &SuiteConfig,
    params: &SuiteParams,
) -> Result<SuiteReport, VerifyError> {
    match name {
        SuiteName::Convexity => check_reallocation_convexity(cfg, params.convexity_grid),
        SuiteName::IcxMonotone => check_icx_monotonicity(cfg),
        SuiteName::PriorWeight => check_prior_weight(cfg),
        SuiteName::KnownPayoffMass => check_known_payoff_mass(cfg),
        SuiteName::MeanReplacement => check_mean_replacement(cfg, params.replacement_grid),
        SuiteName::BreakEvenOrder => check_break_even_order(cfg),
        SuiteName::Strictness => check_strictness(cfg, params.strict_margin),
        SuiteName::Oracle => check_oracle(cfg),
        SuiteName::MonteCarlo => check_montecarlo(cfg, params.mc_samples),
    }
}
