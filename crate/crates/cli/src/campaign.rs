//! Seeded verification campaigns.
//!
//! Every check turns an inequality `lhs ≤ rhs` into a slack `rhs − lhs` and
//! passes when the slack is at least `−tol`. Equalities are recorded with
//! slack `−|lhs − rhs|`. Each trial and each check draws from its own
//! random stream, so results depend neither on thread count nor on which
//! other checks are selected.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use gramdist::{
    bessel_sum, boas_bellman_rhs, bombieri_rhs, bound_interval, bound_interval_relaxed, check_gram_hadamard,
    check_gram_product_split, check_gram_triangle, combination_bound, condition_holds, distance_bound,
    distance_sq_gram_ratio, distance_sq_orthonormal, distance_sq_projection, distance_sq_quadratic, gram_determinant,
    hadamard_chain, in_orthogonal_complement, inner_product, lagrange_identity_residual, max_off_diagonal_rhs, norm,
    norm_sq, pairwise_orthogonal, reverse_bessel, BoundMethod, CombinationMethod, HadamardVariant, IntervalData,
    RowSumRelaxation, Scalar, ToleranceConfig, Vector, VectorSystem, WELL_CONDITIONED,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{HarnessError, Result};
use crate::generator::{gaussian, generate_with, sample_intervals, trial_rng, GeneratedInstance, GeneratorConfig};
use crate::oracle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, clap::ValueEnum)]
pub enum CheckId {
    /// Conjugate symmetry, Cauchy–Schwarz and linearity of the inner product.
    InnerProduct,
    /// Gram determinant against an orthogonalization oracle, Hadamard,
    /// block-product and triangle inequalities.
    Gram,
    /// Agreement of the exact distance representations with the oracle.
    Representations,
    /// Every unconditional bound dominates the exact distance.
    Dominance,
    /// Closed forms of the bounds on orthonormal systems.
    OrthonormalCollapse,
    /// Bessel-type right-hand sides on systems with dependent vectors.
    Bessel,
    /// The Lagrange-type identity for `‖Σ α_i z_i‖²`.
    Lagrange,
    /// Every combination bound and its internal relaxation chain.
    Combinations,
    /// Refined Hadamard chains.
    Hadamard,
    /// Interval-condition bounds, the equivalent forms of the condition and
    /// the reverse Bessel inequality.
    Conditional,
}

impl CheckId {
    pub const ALL: [CheckId; 10] = [
        CheckId::InnerProduct,
        CheckId::Gram,
        CheckId::Representations,
        CheckId::Dominance,
        CheckId::OrthonormalCollapse,
        CheckId::Bessel,
        CheckId::Lagrange,
        CheckId::Combinations,
        CheckId::Hadamard,
        CheckId::Conditional,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::InnerProduct => "inner-product",
            CheckId::Gram => "gram",
            CheckId::Representations => "representations",
            CheckId::Dominance => "dominance",
            CheckId::OrthonormalCollapse => "orthonormal-collapse",
            CheckId::Bessel => "bessel",
            CheckId::Lagrange => "lagrange",
            CheckId::Combinations => "combinations",
            CheckId::Hadamard => "hadamard",
            CheckId::Conditional => "conditional",
        }
    }

    fn stream_key(self) -> u64 {
        (self as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub generator: GeneratorConfig,
    pub checks: Vec<CheckId>,
    /// Worker threads; `None` uses the global pool, `Some(1)` runs serially.
    pub threads: Option<usize>,
    /// Factor applied to the bound side of every comparison. `1.0` checks the
    /// inequalities as stated; values below 1 exercise the failure path.
    pub mutation: f64,
    /// Failure records kept in full; counts are always exact.
    pub max_failures: usize,
}

impl CampaignConfig {
    pub fn new(generator: GeneratorConfig) -> Self {
        CampaignConfig {
            generator,
            checks: CheckId::ALL.to_vec(),
            threads: None,
            mutation: 1.0,
            max_failures: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckSummary {
    pub evaluated: u64,
    pub failed: u64,
    /// Smallest slack seen; `None` if nothing was evaluated.
    pub worst_slack: Option<f64>,
}

impl CheckSummary {
    fn empty() -> Self {
        CheckSummary {
            evaluated: 0,
            failed: 0,
            worst_slack: None,
        }
    }

    fn merge(&mut self, other: &CheckSummary) {
        self.evaluated += other.evaluated;
        self.failed += other.failed;
        self.worst_slack = match (self.worst_slack, other.worst_slack) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
    }
}

/// Enough to re-run the offending trial with [`replay`].
#[derive(Debug, Clone, PartialEq)]
pub struct FailureRecord {
    pub check: CheckId,
    pub label: String,
    pub seed: u64,
    pub trial: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignResult {
    pub seed: u64,
    pub trials: u64,
    pub checks: BTreeMap<CheckId, CheckSummary>,
    pub failures: Vec<FailureRecord>,
    pub failure_count: u64,
    pub runtime: Duration,
}

impl CampaignResult {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    pub fn evaluated(&self) -> u64 {
        self.checks.values().map(|c| c.evaluated).sum()
    }
}

/// Collects comparisons for one check of one trial.
struct Recorder {
    check: CheckId,
    seed: u64,
    trial: u64,
    mutation: f64,
    summary: CheckSummary,
    failures: Vec<FailureRecord>,
}

impl Recorder {
    fn new(check: CheckId, seed: u64, trial: u64, mutation: f64) -> Self {
        Recorder {
            check,
            seed,
            trial,
            mutation,
            summary: CheckSummary::empty(),
            failures: Vec::new(),
        }
    }

    fn record(&mut self, label: &str, lhs: f64, rhs: f64, slack: f64, tol: f64) {
        self.summary.evaluated += 1;
        let worst = self.summary.worst_slack.map_or(slack, |w| w.min(slack));
        self.summary.worst_slack = Some(worst);
        let passed = slack >= -tol;
        if !passed {
            self.summary.failed += 1;
            self.failures.push(FailureRecord {
                check: self.check,
                label: label.to_string(),
                seed: self.seed,
                trial: self.trial,
                lhs,
                rhs,
                slack,
            });
        }
    }

    /// `lhs ≤ rhs` within `tol`.
    fn le(&mut self, label: &str, lhs: f64, rhs: f64, tol: f64) {
        let rhs = rhs * self.mutation;
        self.record(label, lhs, rhs, rhs - lhs, tol);
    }

    /// `|lhs − rhs| ≤ tol`.
    fn eq(&mut self, label: &str, lhs: f64, rhs: f64, tol: f64) {
        let rhs = rhs * self.mutation;
        self.record(label, lhs, rhs, -(lhs - rhs).abs(), tol);
    }

    /// An operation that should have succeeded returned an error.
    fn error(&mut self, label: &str, err: impl fmt::Display) {
        self.summary.evaluated += 1;
        self.summary.failed += 1;
        self.failures.push(FailureRecord {
            check: self.check,
            label: format!("{label}: {err}"),
            seed: self.seed,
            trial: self.trial,
            lhs: f64::NAN,
            rhs: f64::NAN,
            slack: f64::NAN,
        });
    }

    fn ok<T, E: fmt::Display>(&mut self, label: &str, r: std::result::Result<T, E>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.error(label, e);
                None
            }
        }
    }
}

struct TrialOutcome {
    checks: Vec<(CheckId, CheckSummary)>,
    failures: Vec<FailureRecord>,
}

fn check_rng(seed: u64, trial: u64, check: CheckId) -> ChaCha8Rng {
    trial_rng(seed ^ check.stream_key(), trial)
}

fn run_trial(config: &CampaignConfig, trial: u64, only: Option<CheckId>) -> TrialOutcome {
    let gen = &config.generator;
    let mut rng = trial_rng(gen.seed, trial);
    let instance = generate_with(gen, trial, &mut rng);
    let mut checks = Vec::new();
    let mut failures = Vec::new();
    for &check in &config.checks {
        if only.is_some_and(|c| c != check) {
            continue;
        }
        let mut rec = Recorder::new(check, gen.seed, trial, config.mutation);
        match &instance {
            Ok(inst) => {
                let mut rng = check_rng(gen.seed, trial, check);
                run_check(check, inst, &gen.tolerance, &mut rng, &mut rec);
            }
            Err(e) => rec.error("generate", e),
        }
        checks.push((check, rec.summary));
        failures.extend(rec.failures);
    }
    TrialOutcome { checks, failures }
}

fn collect(config: &CampaignConfig) -> Vec<TrialOutcome> {
    let trials = config.generator.trials;
    (0..trials)
        .into_par_iter()
        .map(|t| run_trial(config, t, None))
        .collect()
}

/// Runs every selected check on every trial.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignResult> {
    config.generator.validate()?;
    if !(config.mutation.is_finite() && config.mutation > 0.0) {
        return Err(HarnessError::InvalidConfig(format!(
            "mutation factor {} must be positive",
            config.mutation
        )));
    }
    let start = Instant::now();
    let outcomes = match config.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .map_err(|e| HarnessError::InvalidConfig(format!("thread pool: {e}")))?
            .install(|| collect(config)),
        None => collect(config),
    };

    let mut checks: BTreeMap<CheckId, CheckSummary> = BTreeMap::new();
    let mut failures = Vec::new();
    let mut failure_count = 0;
    for outcome in outcomes {
        for (id, summary) in &outcome.checks {
            checks.entry(*id).or_insert_with(CheckSummary::empty).merge(summary);
        }
        for f in outcome.failures {
            failure_count += 1;
            if failures.len() < config.max_failures {
                failures.push(f);
            }
        }
    }
    Ok(CampaignResult {
        seed: config.generator.seed,
        trials: config.generator.trials,
        checks,
        failures,
        failure_count,
        runtime: start.elapsed(),
    })
}

/// Re-executes the trial and check named by `record` under `config` and
/// returns the failures it produces.
pub fn replay(config: &CampaignConfig, record: &FailureRecord) -> Result<Vec<FailureRecord>> {
    let mut gen = config.generator.clone();
    gen.seed = record.seed;
    gen.validate()?;
    let cfg = CampaignConfig {
        generator: gen,
        checks: vec![record.check],
        ..config.clone()
    };
    Ok(run_trial(&cfg, record.trial, Some(record.check)).failures)
}

/// Re-executes one trial with every configured check.
pub fn replay_trial(config: &CampaignConfig, trial: u64) -> Result<CampaignResult> {
    config.generator.validate()?;
    let start = Instant::now();
    let outcome = run_trial(config, trial, None);
    let failure_count = outcome.failures.len() as u64;
    Ok(CampaignResult {
        seed: config.generator.seed,
        trials: 1,
        checks: outcome.checks.into_iter().collect(),
        failures: outcome.failures,
        failure_count,
        runtime: start.elapsed(),
    })
}

fn run_check(
    check: CheckId,
    inst: &GeneratedInstance,
    tol: &ToleranceConfig,
    rng: &mut ChaCha8Rng,
    rec: &mut Recorder,
) {
    match check {
        CheckId::InnerProduct => check_inner_product(inst, rng, rec),
        CheckId::Gram => check_gram(inst, tol, rec),
        CheckId::Representations => check_representations(inst, tol, rec),
        CheckId::Dominance => check_dominance(inst, rec),
        CheckId::OrthonormalCollapse => check_orthonormal_collapse(inst, tol, rec),
        CheckId::Bessel => check_bessel(inst, rng, rec),
        CheckId::Lagrange => check_lagrange(inst, rng, rec),
        CheckId::Combinations => check_combinations(inst, rng, rec),
        CheckId::Hadamard => check_hadamard(inst, tol, rng, rec),
        CheckId::Conditional => check_conditional(inst, tol, rng, rec),
    }
}

fn random_scalars(rng: &mut ChaCha8Rng, system: &VectorSystem) -> Vec<Scalar> {
    (0..system.len()).map(|_| gaussian(rng, system.field())).collect()
}

fn orthonormalized(system: &VectorSystem, tol: &ToleranceConfig) -> gramdist::Result<VectorSystem> {
    VectorSystem::with_tolerance(oracle::orthonormal_basis(system.vectors(), 1e-8), *tol)
}

fn check_inner_product(inst: &GeneratedInstance, rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let x = &inst.x;
    let vs = inst.system.vectors();
    let nx = norm(x);
    for v in vs {
        let (Some(a), Some(b)) = (
            rec.ok("inner product", inner_product(x, v)),
            rec.ok("inner product", inner_product(v, x)),
        ) else {
            return;
        };
        let nv = norm(v);
        rec.le(
            "conjugate symmetry",
            (a - b.conj()).norm(),
            0.0,
            1e-14 * (1.0 + nx * nv),
        );
        let rhs = nx * nx * nv * nv;
        rec.le("cauchy-schwarz", a.norm_sqr(), rhs, 1e-12 * rhs);
    }
    let c = gaussian(rng, x.field());
    let (u, w) = (&vs[0], vs.last().expect("nonempty system"));
    let lhs = x.scaled(c).and_then(|cx| cx.add(u)).and_then(|s| inner_product(&s, w));
    let rhs = inner_product(x, w).and_then(|a| inner_product(u, w).map(|b| c * a + b));
    if let (Some(l), Some(r)) = (rec.ok("linearity", lhs), rec.ok("linearity", rhs)) {
        let scale = 1.0 + (c.norm() * nx + norm(u)) * norm(w);
        rec.le("linearity", (l - r).norm(), 0.0, 1e-12 * scale);
    }
}

fn check_gram(inst: &GeneratedInstance, tol: &ToleranceConfig, rec: &mut Recorder) {
    let s = &inst.system;
    let prod: f64 = s.norms_sq().iter().product();
    let det = gram_determinant(s);
    if s.is_independent() {
        let o = oracle::gram_determinant(s.vectors());
        rec.le(
            "determinant vs oracle",
            (det - o).abs(),
            0.0,
            1e-8 * det.max(o) + tol.rank_rel_tol * prod,
        );
    }
    if let Some(h) = rec.ok("hadamard", check_gram_hadamard(s)) {
        rec.le("determinant nonnegative", 0.0, h.gram_det, 0.0);
        rec.le(
            "hadamard",
            h.gram_det,
            h.norm_product,
            tol.compare_rel_tol * h.norm_product,
        );
    }
    for k in 1..s.len() {
        if let Some(v) = rec.ok("product split", check_gram_product_split(s, k)) {
            let rhs = v.head_det * v.tail_det;
            rec.le("product split", v.gram_det, rhs, tol.compare_rel_tol * rhs.max(prod));
        }
    }
    let vs = s.vectors();
    if let Some(t) = rec.ok("triangle", check_gram_triangle(&inst.x, &vs[0], &vs[1..], tol)) {
        let rhs = t.first_root + t.second_root;
        let rest: f64 = vs[1..].iter().map(norm_sq).product::<f64>().sqrt();
        let scale = rhs.max(rest * (norm(&inst.x) + norm(&vs[0])));
        rec.le("triangle", t.sum_root, rhs, tol.compare_rel_tol * scale);
    }
}

fn check_representations(inst: &GeneratedInstance, tol: &ToleranceConfig, rec: &mut Recorder) {
    let (s, x) = (&inst.system, &inst.x);
    if !s.is_independent() || s.gram().condition_number() > WELL_CONDITIONED {
        return;
    }
    let (Some(ratio), Some(quad), Some(proj)) = (
        rec.ok("gram ratio", distance_sq_gram_ratio(s, x)),
        rec.ok("quadratic form", distance_sq_quadratic(s, x)),
        rec.ok("projection estimate", distance_sq_projection(s, x, tol)),
    ) else {
        return;
    };
    let o = oracle::distance_sq(s.vectors(), x);
    rec.le(
        "gram ratio vs quadratic form",
        (ratio - quad).abs(),
        0.0,
        1e-8 * (1.0 + quad),
    );
    rec.le("quadratic form vs oracle", (quad - o).abs(), 0.0, 1e-8 * (1.0 + o));
    rec.le("gram ratio vs oracle", (ratio - o).abs(), 0.0, 1e-8 * (1.0 + o));
    rec.le("projection estimate dominates", quad, proj, 1e-10 * (1.0 + quad));
    rec.le("distance nonnegative", 0.0, quad, 0.0);
    rec.le("distance at most norm", quad, norm_sq(x), 0.0);
}

fn check_dominance(inst: &GeneratedInstance, rec: &mut Recorder) {
    let (s, x) = (&inst.system, &inst.x);
    let Some(d2) = rec.ok("exact distance", distance_sq_quadratic(s, x)) else {
        return;
    };
    for m in BoundMethod::UNCONDITIONAL {
        if let Some(b) = rec.ok(m.name(), distance_bound(s, x, m)) {
            rec.le(m.name(), d2, b, 1e-10 * (1.0 + d2));
        }
    }
    if s.len() >= 2 {
        let ev = s.gram().eigenvalues();
        if ev[0] >= 1e-3 * ev[ev.len() - 1] {
            if let Some(b) = rec.ok("sum-norms strict", distance_bound(s, x, BoundMethod::SumNorms)) {
                rec.le("sum-norms strict", d2 + 1e-12, b, 0.0);
            }
        }
    }
}

fn check_orthonormal_collapse(inst: &GeneratedInstance, tol: &ToleranceConfig, rec: &mut Recorder) {
    let x = &inst.x;
    let Some(e) = rec.ok("orthonormalize", orthonormalized(&inst.system, tol)) else {
        return;
    };
    if rec.ok("orthonormal", e.require_orthonormal()).is_none() {
        return;
    }
    if in_orthogonal_complement(&e, x, tol).unwrap_or(true) {
        return;
    }
    let (Some(sum), Some(d2)) = (
        rec.ok("bessel sum", bessel_sum(&e, x)),
        rec.ok("distance", distance_sq_orthonormal(&e, x)),
    ) else {
        return;
    };
    let nx = norm_sq(x);
    let gap = nx - sum;
    let t = 1e-10 * nx.max(1.0);
    rec.eq("orthonormal distance", d2, gap, t);
    let n = e.len() as f64;
    let expected = [
        (BoundMethod::SumNorms, gap + sum * (1.0 - 1.0 / n)),
        (BoundMethod::BoasBellman, gap),
        (BoundMethod::MaxOffDiagonal, gap),
        (BoundMethod::Bombieri, gap),
        (BoundMethod::Frobenius, gap + sum * (1.0 - 1.0 / n.sqrt())),
    ];
    for (m, value) in expected {
        if let Some(b) = rec.ok(m.name(), distance_bound(&e, x, m)) {
            rec.eq(m.name(), b, value, t);
        }
    }
}

fn check_bessel(inst: &GeneratedInstance, rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let s = &inst.system;
    let field = s.field();
    let mut vectors = s.vectors().to_vec();
    let extra = rng.random_range(1..=3);
    for _ in 0..extra {
        let i = rng.random_range(0..vectors.len());
        let j = rng.random_range(0..vectors.len());
        let combo = vectors[i]
            .scaled(gaussian(rng, field))
            .and_then(|a| vectors[j].scaled(gaussian(rng, field)).and_then(|b| a.add(&b)));
        match combo {
            Ok(v) => vectors.push(v),
            Err(e) => return rec.error("augment", e),
        }
    }
    let Some(dep) = rec.ok(
        "augmented system",
        VectorSystem::with_tolerance(vectors, *s.tolerance()),
    ) else {
        return;
    };
    let x = &inst.x;
    let Some(sum) = rec.ok("bessel sum", bessel_sum(&dep, x)) else {
        return;
    };
    let t = 1e-12 * (1.0 + sum);
    if let Some(r) = rec.ok("boas-bellman", boas_bellman_rhs(&dep, x)) {
        rec.le("boas-bellman", sum, r, t);
    }
    if let Some(r) = rec.ok("max-off-diagonal", max_off_diagonal_rhs(&dep, x)) {
        rec.le("max-off-diagonal", sum, r, t);
    }
    if let Some(r) = rec.ok("bombieri", bombieri_rhs(&dep, x)) {
        rec.le("bombieri", sum, r, t);
    }
}

fn check_lagrange(inst: &GeneratedInstance, rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let s = &inst.system;
    let alphas = random_scalars(rng, s);
    if let Some(r) = rec.ok("lagrange", lagrange_identity_residual(&alphas, s)) {
        let a2: f64 = alphas.iter().map(|a| a.norm_sqr()).sum();
        let z2: f64 = s.norms_sq().iter().sum();
        rec.le("lagrange residual", r.abs(), 0.0, 1e-12 * (1.0 + a2 * z2));
    }
}

/// Every combination method exercised by the campaign.
pub fn combination_methods() -> Vec<CombinationMethod> {
    const EXPONENTS: [f64; 3] = [1.5, 2.0, 3.0];
    let mut methods = vec![
        CombinationMethod::CauchySchwarz,
        CombinationMethod::MaxInner,
        CombinationMethod::OffDiagonalFrobenius,
    ];
    for a in EXPONENTS {
        for c in EXPONENTS {
            methods.extend(gramdist::all_splits(a, c));
        }
    }
    methods.push(CombinationMethod::RowSum(RowSumRelaxation::MaxRow));
    methods.push(CombinationMethod::RowSum(RowSumRelaxation::MaxCoefficient));
    for p in EXPONENTS {
        methods.push(CombinationMethod::RowSum(RowSumRelaxation::Holder(p)));
    }
    for p in [1.25, 2.0, 4.0] {
        methods.push(CombinationMethod::GramHolder(p));
    }
    methods
}

fn check_combinations(inst: &GeneratedInstance, rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let s = &inst.system;
    let alphas = random_scalars(rng, s);
    for m in combination_methods() {
        let name = m.name();
        let Some(r) = rec.ok(&name, combination_bound(&alphas, s, m)) else {
            continue;
        };
        rec.le(&name, r.lhs, r.bound, 1e-10 * r.bound);
        if let Some(relaxed) = r.relaxed {
            rec.le(&format!("{name} relaxation"), r.bound, relaxed, 1e-10 * relaxed);
        }
    }
    let n = alphas.len() as f64;
    let sum: f64 = alphas.iter().map(|a| a.norm()).sum();
    let sum_sq: f64 = alphas.iter().map(|a| a.norm_sqr()).sum();
    rec.le("coefficient sum", sum * sum, n * sum_sq, 1e-12 * n * sum_sq);
}

fn check_chains(label: &str, s: &VectorSystem, rec: &mut Recorder) {
    let tol = s.tolerance().compare_rel_tol;
    for v in HadamardVariant::ALL {
        let Some(r) = rec.ok(label, hadamard_chain(s, v)) else {
            continue;
        };
        rec.le(&format!("{label} {v} lower"), r.gamma, r.refined, tol * r.refined);
        rec.le(&format!("{label} {v} upper"), r.refined, r.hadamard, tol * r.hadamard);
        let product = s.gram().norm_sq(0) * r.per_step_factors.iter().product::<f64>();
        rec.eq(&format!("{label} {v} factors"), product, r.refined, 1e-12 * r.refined);
    }
}

fn check_hadamard(inst: &GeneratedInstance, tol: &ToleranceConfig, rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let s = &inst.system;
    if s.len() < 2 || !s.is_independent() {
        return;
    }
    check_chains("chain", s, rec);

    let mut permuted = s.vectors().to_vec();
    let shift = rng.random_range(1..permuted.len());
    permuted.rotate_left(shift);
    if let Some(p) = rec.ok("permute", VectorSystem::with_tolerance(permuted, *tol)) {
        if p.is_independent() {
            check_chains("permuted chain", &p, rec);
        }
    }

    if !pairwise_orthogonal(s) {
        let prod: f64 = s.norms_sq().iter().product();
        rec.le("strict hadamard", gram_determinant(s), prod, 0.0);
    }

    if let Some(e) = rec.ok("orthonormalize", orthonormalized(s, tol)) {
        if e.len() >= 2 {
            for v in HadamardVariant::ALL {
                if let Some(r) = rec.ok("orthonormal chain", hadamard_chain(&e, v)) {
                    let label = format!("orthonormal {v}");
                    rec.eq(&format!("{label} gamma"), r.gamma, 1.0, 1e-12);
                    rec.eq(&format!("{label} refined"), r.refined, 1.0, 1e-12);
                    rec.eq(&format!("{label} hadamard"), r.hadamard, 1.0, 1e-12);
                }
            }
        }
    }
}

fn conditional_bounds(s: &VectorSystem, x: &Vector, iv: &IntervalData, rec: &mut Recorder) {
    let Some(cond) = rec.ok("condition", condition_holds(s, x, iv)) else {
        return;
    };
    let scale = norm_sq(x).max(cond.radius_sq);
    rec.le(
        "condition inner form",
        0.0,
        cond.inner,
        s.tolerance().compare_rel_tol * scale,
    );
    rec.le(
        "condition ball form",
        cond.center_dist_sq,
        cond.radius_sq,
        s.tolerance().compare_rel_tol * scale,
    );
    rec.eq(
        "condition forms agree",
        f64::from(u8::from(!cond.forms_agree)),
        0.0,
        0.0,
    );
    let (Some(d2), Some(tight)) = (
        rec.ok("distance", distance_sq_quadratic(s, x)),
        rec.ok("interval", bound_interval(s, x, iv)),
    ) else {
        return;
    };
    rec.le("interval", d2, tight, 1e-10 * (1.0 + d2));
    for m in BoundMethod::RELAXED_INTERVAL {
        if let Some(b) = rec.ok(m.name(), bound_interval_relaxed(s, x, iv, m)) {
            rec.le(m.name(), tight, b, 1e-10);
        }
    }
}

/// `x = e_1 + e_2`, `φ = 0`, `Φ = 2` with `M = span{e_1}` attains equality.
fn sharpness_witness(rec: &mut Recorder) {
    let e1 = VectorSystem::from_real_rows(&[&[1.0, 0.0]]);
    let x = Vector::real([1.0, 1.0]);
    let iv = IntervalData::real(&[0.0], &[2.0]);
    let (Some(e1), Some(x), Some(iv)) = (rec.ok("witness", e1), rec.ok("witness", x), rec.ok("witness", iv)) else {
        return;
    };
    if let (Some(d2), Some(b)) = (
        rec.ok("witness", distance_sq_quadratic(&e1, &x)),
        rec.ok("witness", bound_interval(&e1, &x, &iv)),
    ) {
        rec.eq("sharpness witness", d2, b, 1e-12);
    }
}

fn check_conditional(inst: &GeneratedInstance, tol: &ToleranceConfig, rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let s = &inst.system;
    match &inst.intervals {
        Some(iv) => conditional_bounds(s, &inst.x, iv, rec),
        None => {
            let t = rng.random::<f64>();
            if let Some((iv, x)) = rec.ok("sample intervals", sample_intervals(rng, s, t)) {
                conditional_bounds(s, &x, &iv, rec);
            }
        }
    }

    for t in [1.0 - 1e-9, 1.0, 1.0 + 1e-9] {
        if let Some((iv, x)) = rec.ok("sample boundary", sample_intervals(rng, s, t)) {
            if let Some(c) = rec.ok("boundary condition", condition_holds(s, &x, &iv)) {
                rec.eq("boundary forms agree", f64::from(u8::from(!c.forms_agree)), 0.0, 0.0);
            }
        }
    }

    if let Some(e) = rec.ok("orthonormalize", orthonormalized(s, tol)) {
        let t = rng.random::<f64>();
        if let Some((iv, x)) = rec.ok("sample reverse bessel", sample_intervals(rng, &e, t)) {
            if let Some(r) = rec.ok("reverse bessel", reverse_bessel(&e, &x, &iv)) {
                let scale = tol.compare_rel_tol * norm_sq(&x).max(r.bound);
                rec.le("bessel", 0.0, r.bessel_gap, scale);
                rec.le("reverse bessel", r.bessel_gap, r.bound, scale);
            }
        }
    }

    sharpness_witness(rec);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(trials: u64) -> CampaignConfig {
        CampaignConfig::new(GeneratorConfig {
            seed: 7,
            trials,
            ..GeneratorConfig::default()
        })
    }

    #[test]
    fn passes_and_is_deterministic() {
        let a = run_campaign(&small(50)).unwrap();
        assert!(a.passed(), "{:?}", a.failures);
        assert_eq!(a.checks.len(), CheckId::ALL.len());
        let b = run_campaign(&CampaignConfig {
            threads: Some(1),
            ..small(50)
        })
        .unwrap();
        assert_eq!(a.checks, b.checks);
    }

    #[test]
    fn zero_trials_is_vacuous() {
        let r = run_campaign(&small(0)).unwrap();
        assert!(r.passed());
        assert!(r.checks.is_empty());
        assert_eq!(r.evaluated(), 0);
    }

    #[test]
    fn mutated_bounds_fail_and_replay() {
        let cfg = CampaignConfig {
            mutation: 0.9,
            checks: vec![CheckId::Dominance],
            ..small(20)
        };
        let r = run_campaign(&cfg).unwrap();
        assert!(!r.passed());
        let f = &r.failures[0];
        assert!(replay(&cfg, f).unwrap().contains(f));
    }

    #[test]
    fn check_names_match_value_enum() {
        use clap::ValueEnum;
        for c in CheckId::ALL {
            assert_eq!(c.to_possible_value().unwrap().get_name(), c.name());
        }
    }
}
