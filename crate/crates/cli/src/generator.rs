//! Seeded random instances with controlled conditioning.
//!
//! Coordinates of the `n` vectors are the rows of `U · diag(s) · Vᴴ`, with `U`
//! unitary `n × n`, `V` a `dim × n` matrix with orthonormal columns and
//! singular values spaced geometrically from `1` down to `1/κ`. The Gram
//! matrix `A Aᴴ` then has condition number `κ²`.

use std::fmt;
use std::str::FromStr;

use gramdist::{in_orthogonal_complement, Field, IntervalData, Scalar, ToleranceConfig, Vector, VectorSystem};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{HarnessError, Result};

const MAX_DIM: usize = 512;
const MAX_REDRAWS: usize = 64;

/// Inclusive integer range written `lo..hi` or as a single value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeRange {
    pub lo: usize,
    pub hi: usize,
}

impl SizeRange {
    pub fn new(lo: usize, hi: usize) -> Self {
        SizeRange { lo, hi }
    }

    pub fn exact(v: usize) -> Self {
        SizeRange { lo: v, hi: v }
    }
}

impl FromStr for SizeRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| format!("invalid size '{t}': {e}"))
        };
        match s.split_once("..") {
            Some((lo, hi)) => {
                let hi = hi.strip_prefix('=').unwrap_or(hi);
                Ok(SizeRange::new(parse(lo)?, parse(hi)?))
            }
            None => Ok(SizeRange::exact(parse(s)?)),
        }
    }
}

impl fmt::Display for SizeRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

/// Target singular-value ratio of the coordinate matrix, drawn log-uniformly
/// from `lo..hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conditioning {
    pub lo: f64,
    pub hi: f64,
}

impl Conditioning {
    pub fn exact(k: f64) -> Self {
        Conditioning { lo: k, hi: k }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        if self.lo == self.hi {
            return self.lo;
        }
        let (a, b) = (self.lo.ln(), self.hi.ln());
        (a + (b - a) * rng.random::<f64>()).exp()
    }
}

impl Default for Conditioning {
    fn default() -> Self {
        Conditioning { lo: 1.0, hi: 1e3 }
    }
}

impl FromStr for Conditioning {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let parse = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| format!("invalid conditioning '{t}': {e}"))
        };
        match s.split_once("..") {
            Some((lo, hi)) => Ok(Conditioning {
                lo: parse(lo)?,
                hi: parse(hi)?,
            }),
            None => Ok(Conditioning::exact(parse(s)?)),
        }
    }
}

impl fmt::Display for Conditioning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{:e}", self.lo)
        } else {
            write!(f, "{:e}..{:e}", self.lo, self.hi)
        }
    }
}

/// Field of generated instances; `Mixed` picks one per trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FieldChoice {
    Real,
    Complex,
    Mixed,
}

impl fmt::Display for FieldChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldChoice::Real => "real",
            FieldChoice::Complex => "complex",
            FieldChoice::Mixed => "mixed",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub field: FieldChoice,
    pub dim: SizeRange,
    pub n: SizeRange,
    /// Keep `n ≤ dim − 1` so the span is a proper subspace.
    pub proper_subspace: bool,
    pub conditioning: Conditioning,
    pub orthonormal: bool,
    /// Attach interval data satisfying the interval condition, with `x`
    /// placed inside the admissible ball.
    pub intervals: bool,
    pub trials: u64,
    pub tolerance: ToleranceConfig,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            seed: 0,
            field: FieldChoice::Mixed,
            dim: SizeRange::new(2, 8),
            n: SizeRange::new(1, 7),
            proper_subspace: true,
            conditioning: Conditioning::default(),
            orthonormal: false,
            intervals: false,
            trials: 1000,
            tolerance: ToleranceConfig::default(),
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        let invalid = |m: String| Err(HarnessError::InvalidConfig(m));
        if self.dim.lo < 1 || self.dim.hi > MAX_DIM || self.dim.lo > self.dim.hi {
            return invalid(format!("dim range {} must lie within 1..{MAX_DIM}", self.dim));
        }
        if self.n.lo < 1 || self.n.lo > self.n.hi {
            return invalid(format!("n range {} must be nonempty and start at 1 or more", self.n));
        }
        let cap = if self.proper_subspace {
            self.dim.lo - 1
        } else {
            self.dim.lo
        };
        if self.n.lo > cap {
            return invalid(format!(
                "n = {} exceeds {} for dim = {}",
                self.n.lo,
                if self.proper_subspace { "dim − 1" } else { "dim" },
                self.dim.lo
            ));
        }
        let c = self.conditioning;
        if !(c.lo >= 1.0 && c.hi >= c.lo && c.hi.is_finite()) {
            return invalid(format!("conditioning {c} must satisfy 1 ≤ lo ≤ hi < ∞"));
        }
        self.tolerance.validate()?;
        Ok(())
    }
}

/// Independent stream for one trial; identical regardless of the order in
/// which trials run.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub trial: u64,
    pub system: VectorSystem,
    pub x: Vector,
    pub intervals: Option<IntervalData>,
    /// Singular-value ratio the coordinates were built with.
    pub target_conditioning: f64,
}

pub(crate) fn gaussian(rng: &mut ChaCha8Rng, field: Field) -> Scalar {
    let re: f64 = rng.sample(StandardNormal);
    match field {
        Field::Real => Scalar::new(re, 0.0),
        Field::Complex => Scalar::new(re, rng.sample(StandardNormal)) * std::f64::consts::FRAC_1_SQRT_2,
    }
}

pub(crate) fn gaussian_vector(rng: &mut ChaCha8Rng, field: Field, dim: usize) -> Vector {
    let scale = 1.0 / (dim as f64).sqrt();
    Vector::new(field, (0..dim).map(|_| gaussian(rng, field) * scale).collect()).expect("finite Gaussian coordinates")
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, field: Field, rows: usize, cols: usize) -> DMatrix<Scalar> {
    DMatrix::from_fn(rows, cols, |_, _| gaussian(rng, field))
}

fn real_part_only(field: Field, mut v: Scalar) -> Scalar {
    if field == Field::Real {
        v.im = 0.0;
    }
    v
}

/// Rows of `U · diag(s) · Vᴴ` with `s_k = κ^{−k/(n−1)}`.
pub fn conditioned_rows(rng: &mut ChaCha8Rng, field: Field, n: usize, dim: usize, kappa: f64) -> Vec<Vector> {
    let u = gaussian_matrix(rng, field, n, n).qr().q();
    let v = gaussian_matrix(rng, field, dim, n).qr().q();
    let s: Vec<f64> = (0..n)
        .map(|k| {
            if n == 1 {
                1.0
            } else {
                kappa.powf(-(k as f64) / (n as f64 - 1.0))
            }
        })
        .collect();
    let mut us = u;
    for (k, &sk) in s.iter().enumerate() {
        us.column_mut(k).scale_mut(sk);
    }
    let a = us * v.adjoint();
    (0..n)
        .map(|i| {
            Vector::new(field, (0..dim).map(|j| real_part_only(field, a[(i, j)])).collect())
                .expect("finite coordinates")
        })
        .collect()
}

/// Interval data centred on Gaussian coefficients with half-widths in
/// `[0, 1)`, and a point at relative radius `t` from the centre along a
/// random direction. `t ≤ 1` keeps the interval condition satisfied.
pub fn sample_intervals(rng: &mut ChaCha8Rng, system: &VectorSystem, t: f64) -> Result<(IntervalData, Vector)> {
    let field = system.field();
    let n = system.len();
    let centres: Vec<Scalar> = (0..n).map(|_| gaussian(rng, field)).collect();
    let widths: Vec<Scalar> = (0..n).map(|_| Scalar::new(rng.random::<f64>(), 0.0)).collect();
    let lower = centres.iter().zip(&widths).map(|(c, w)| c - w).collect();
    let upper = centres.iter().zip(&widths).map(|(c, w)| c + w).collect();
    let centre = gramdist::linear_combination(&centres, system.vectors())?;
    let radius = gramdist::norm(&gramdist::linear_combination(&widths, system.vectors())?);
    let dir = gaussian_vector(rng, field, system.dim());
    let len = gramdist::norm(&dir);
    let x = if len > 0.0 {
        centre.add(&dir.scaled(Scalar::new(t * radius / len, 0.0))?)?
    } else {
        centre
    };
    Ok((IntervalData::new(lower, upper)?, x))
}

/// Instance for `(config.seed, trial)`.
pub fn generate_system(config: &GeneratorConfig, trial: u64) -> Result<GeneratedInstance> {
    config.validate()?;
    let mut rng = trial_rng(config.seed, trial);
    generate_with(config, trial, &mut rng)
}

/// Like [`generate_system`], continuing an existing trial stream so callers
/// can draw further randomness afterwards.
pub fn generate_with(config: &GeneratorConfig, trial: u64, rng: &mut ChaCha8Rng) -> Result<GeneratedInstance> {
    let field = match config.field {
        FieldChoice::Real => Field::Real,
        FieldChoice::Complex => Field::Complex,
        FieldChoice::Mixed if rng.random::<bool>() => Field::Complex,
        FieldChoice::Mixed => Field::Real,
    };
    let dim = rng.random_range(config.dim.lo..=config.dim.hi);
    let cap = if config.proper_subspace { dim - 1 } else { dim };
    let n = rng.random_range(config.n.lo..=config.n.hi.min(cap).max(config.n.lo));
    let kappa = if config.orthonormal {
        1.0
    } else {
        config.conditioning.sample(rng)
    };
    let rows = conditioned_rows(rng, field, n, dim, kappa);
    let system = VectorSystem::with_tolerance(rows, config.tolerance)?;
    if config.orthonormal {
        system.require_orthonormal()?;
    }

    for _ in 0..MAX_REDRAWS {
        let (x, intervals) = if config.intervals {
            let t = rng.random::<f64>();
            let (iv, x) = sample_intervals(rng, &system, t)?;
            (x, Some(iv))
        } else {
            (gaussian_vector(rng, field, dim), None)
        };
        if !x.is_zero() && !in_orthogonal_complement(&system, &x, &config.tolerance)? {
            return Ok(GeneratedInstance {
                trial,
                system,
                x,
                intervals,
                target_conditioning: kappa,
            });
        }
    }
    Err(HarnessError::Generation(format!(
        "trial {trial}: no target outside the orthogonal complement after {MAX_REDRAWS} draws"
    )))
}

/// Ratio of extreme singular values of the coordinate matrix, i.e. the
/// square root of the Gram condition number.
pub fn coordinate_conditioning(system: &VectorSystem) -> f64 {
    system.gram().condition_number().sqrt()
}
