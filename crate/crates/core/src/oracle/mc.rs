//! Sharded Monte-Carlo estimates of `P(Σ c_i X_i > t)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StudentT};
use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{WeightRepr, WeightSequence};
use crate::error::{Error, Result};
use crate::exponent::{Assumptions, Exponent};
use crate::tails::{DistributionSpec, Family, Support};

/// Two-sided 99% normal quantile.
pub const Z99: f64 = 2.575_829_303_548_901;

/// Environment variable capping the worker threads used for shards.
pub const THREADS_VAR: &str = "TAILCALC_THREADS";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McConfig {
    pub samples: u64,
    /// Number of leading weights kept for infinite weight families.
    pub truncation: usize,
    /// Ascending.
    pub thresholds: Vec<f64>,
    pub seed: u64,
    pub shards: usize,
}

impl McConfig {
    pub fn new(samples: u64, thresholds: Vec<f64>) -> Self {
        McConfig { samples, truncation: 64, thresholds, seed: 0, shards: 64 }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn truncation(mut self, n: usize) -> Self {
        self.truncation = n;
        self
    }

    pub fn shards(mut self, n: usize) -> Self {
        self.shards = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 || self.shards == 0 || self.truncation == 0 {
            return Err(Error::precondition("samples, shards and truncation must be positive"));
        }
        if self.thresholds.is_empty() || self.thresholds.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
            return Err(Error::precondition("thresholds must be nonempty and strictly ascending"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
enum Kind {
    Burr { beta: f64, inv_tau: f64, inv_gamma: f64 },
    Pareto { inv_alpha: f64 },
    Frechet { inv_alpha: f64 },
    Exponential { theta: f64 },
    Student(StudentT<f64>),
    LogGamma { z: Gamma<f64>, alpha: f64 },
    HallWeissman { a: f64, b: f64, alpha: f64, beta: f64 },
    PointMass(f64),
}

/// Draws from a distribution family by inverse CDF where possible.
#[derive(Clone, Debug)]
pub struct Sampler {
    kind: Kind,
    /// Attach an independent random sign.
    symmetric: bool,
}

fn num(e: &Exponent) -> Result<f64> {
    e.eval(&Assumptions::new()).ok_or_else(|| Error::Unsupported(format!("symbolic parameter {e} in sampling")))
}

impl Sampler {
    pub fn new(spec: &DistributionSpec<f64>) -> Result<Self> {
        let kind = match &spec.family {
            Family::Burr { beta, tau, gamma } => Kind::Burr { beta: *beta, inv_tau: 1.0 / num(tau)?, inv_gamma: 1.0 / num(gamma)? },
            Family::Pareto { alpha } => Kind::Pareto { inv_alpha: 1.0 / num(alpha)? },
            Family::Frechet { alpha } => Kind::Frechet { inv_alpha: 1.0 / num(alpha)? },
            Family::Exponential { theta } => Kind::Exponential { theta: *theta },
            Family::Student { alpha } => {
                Kind::Student(StudentT::new(num(alpha)?).map_err(|e| Error::precondition(e.to_string()))?)
            }
            Family::LogGamma { lambda, alpha } => Kind::LogGamma {
                z: Gamma::new(num(lambda)?, 1.0).map_err(|e| Error::precondition(e.to_string()))?,
                alpha: num(alpha)?,
            },
            Family::HallWeissman { a, b, alpha, beta } => {
                if (a + b - 1.0).abs() > 1e-12 {
                    return Err(Error::precondition("Hall-Weissman sampling needs a + b = 1"));
                }
                Kind::HallWeissman { a: *a, b: *b, alpha: num(alpha)?, beta: num(beta)? }
            }
            Family::PointMass { at } => Kind::PointMass(*at),
            Family::PowerSeriesTail { .. } => return Err(Error::Unsupported("no sampler for a power-series law".into())),
        };
        let symmetric = match (&spec.support, &kind) {
            (_, Kind::Student(_)) => false,
            (Support::Symmetric, _) => true,
            (Support::Nonnegative | Support::Unspecified, _) => false,
            (Support::TwoSided { .. }, _) => return Err(Error::Unsupported("no sampler for an explicit lower tail".into())),
        };
        Ok(Sampler { kind, symmetric })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        // u in (0, 1]
        let u = 1.0 - rng.gen::<f64>();
        let x = match &self.kind {
            Kind::Burr { beta, inv_tau, inv_gamma } => (beta * (u.powf(-inv_gamma) - 1.0)).powf(*inv_tau),
            Kind::Pareto { inv_alpha } => u.powf(-inv_alpha) - 1.0,
            Kind::Frechet { inv_alpha } => (-(1.0 - u).ln()).powf(-inv_alpha),
            Kind::Exponential { theta } => -theta * u.ln(),
            Kind::Student(d) => d.sample(rng),
            Kind::LogGamma { z, alpha } => (z.sample(rng) / alpha).exp(),
            Kind::HallWeissman { a, b, alpha, beta } => hall_weissman_quantile(*a, *b, *alpha, *beta, u),
            Kind::PointMass(at) => *at,
        };
        if self.symmetric && rng.gen::<bool>() {
            -x
        } else {
            x
        }
    }
}

/// Solves `a t^{-α} + b t^{-β} = u` on `[1, ∞)` by bisection in `log t`.
fn hall_weissman_quantile(a: f64, b: f64, alpha: f64, beta: f64, u: f64) -> f64 {
    let tail = |l: f64| a * (-alpha * l).exp() + b * (-beta * l).exp();
    if u >= 1.0 {
        return 1.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while tail(hi) > u {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if tail(mid) > u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi)).exp()
}

/// Wilson score interval for `k` hits out of `n` at normal quantile `z`.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    let (k, n) = (k as f64, n as f64);
    let p = k / n;
    let z2 = z * z;
    let den = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / den;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / den;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McRow {
    pub threshold: f64,
    pub hits: u64,
    pub estimate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// Bound on the effect of dropping weights beyond the truncation.
    pub truncation_bias: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McReport {
    pub config: McConfig,
    pub rows: Vec<McRow>,
}

/// `Σ_{i≥n} P(|a|^i |X| > δt)` with `δ = 1/100`.
fn truncation_bias(w: &WeightSequence<f64>, spec: &DistributionSpec<f64>, n: usize, t: f64) -> f64 {
    let WeightRepr::Ar1(a) = &w.repr else { return 0.0 };
    let a = a.abs();
    if a == 0.0 {
        return 0.0;
    }
    let two_sided = !matches!(spec.support, Support::Nonnegative);
    let mut s = 0.0;
    for i in n..n + 2000 {
        let x = 0.01 * t / a.powi(i as i32);
        if !x.is_finite() {
            break;
        }
        let p = spec.tail_probability(x).unwrap_or(1.0) * if two_sided { 2.0 } else { 1.0 };
        s += p;
        if p < 1e-300 {
            break;
        }
    }
    s
}

fn run_shard(c: &[f64], sampler: &Sampler, thresholds: &[f64], seed: u64, shard: usize, n: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard as u64);
    let mut bins = vec![0u64; thresholds.len() + 1];
    for _ in 0..n {
        let mut x = 0.0;
        for ci in c {
            x += ci * sampler.sample(&mut rng);
        }
        bins[thresholds.partition_point(|t| *t < x)] += 1;
    }
    bins
}

/// Per-threshold estimates with Wilson 99% intervals; identical configurations give identical output.
pub fn mc_tail(w: &WeightSequence<f64>, spec: &DistributionSpec<f64>, cfg: &McConfig) -> Result<McReport> {
    cfg.validate()?;
    w.validate()?;
    let sampler = Sampler::new(spec)?;
    let c = w.truncated(cfg.truncation)?;
    let per = cfg.samples / cfg.shards as u64;
    let rem = (cfg.samples % cfg.shards as u64) as usize;
    let work = || -> Vec<Vec<u64>> {
        (0..cfg.shards)
            .into_par_iter()
            .map(|s| run_shard(&c, &sampler, &cfg.thresholds, cfg.seed, s, per + u64::from(s < rem)))
            .collect()
    };
    let shards = match std::env::var(THREADS_VAR).ok().and_then(|v| v.parse::<usize>().ok()).filter(|n| *n > 0) {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?
            .install(work),
        None => work(),
    };
    let mut bins = vec![0u64; cfg.thresholds.len() + 1];
    for s in &shards {
        for (b, x) in bins.iter_mut().zip(s) {
            *b += x;
        }
    }
    let mut rows = Vec::with_capacity(cfg.thresholds.len());
    for (i, &t) in cfg.thresholds.iter().enumerate() {
        let hits: u64 = bins[i + 1..].iter().sum();
        if hits == 0 {
            return Err(Error::DegenerateInterval(t));
        }
        let (ci_lo, ci_hi) = wilson_interval(hits, cfg.samples, Z99);
        rows.push(McRow {
            threshold: t,
            hits,
            estimate: hits as f64 / cfg.samples as f64,
            ci_lo,
            ci_hi,
            truncation_bias: truncation_bias(w, spec, c.len(), t),
        });
    }
    Ok(McReport { config: cfg.clone(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pareto(a: &str) -> DistributionSpec<f64> {
        DistributionSpec::new(Family::Pareto { alpha: a.parse().unwrap() })
    }

    #[test]
    fn single_pareto_tail() {
        // (1+t)^{-3} = 1e-3 at t = 9
        let cfg = McConfig::new(2_000_000, vec![9.0]).seed(7).shards(8);
        let r = mc_tail(&WeightSequence::explicit(vec![1.0]), &pareto("3"), &cfg).unwrap();
        let row = &r.rows[0];
        assert!(row.ci_lo <= 1e-3 && 1e-3 <= row.ci_hi, "{row:?}");
    }

    #[test]
    fn deterministic() {
        let cfg = McConfig::new(100_000, vec![1.0, 3.0]).seed(3).shards(5);
        let w = WeightSequence::ar1(0.5);
        let a = mc_tail(&w, &pareto("3"), &cfg.clone().truncation(20)).unwrap();
        let b = mc_tail(&w, &pareto("3"), &cfg.truncation(20)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_hits_is_an_error() {
        let cfg = McConfig::new(1000, vec![1e12]);
        let r = mc_tail(&WeightSequence::explicit(vec![1.0]), &pareto("3"), &cfg);
        assert!(matches!(r, Err(Error::DegenerateInterval(_))));
    }

    #[test]
    fn wilson_contains_mle() {
        let (lo, hi) = wilson_interval(50, 10_000, Z99);
        assert!(lo < 0.005 && 0.005 < hi);
    }

    #[test]
    fn samplers_match_tails() {
        let specs = [
            DistributionSpec::new(Family::Burr { beta: 1.0, tau: "3/2".parse().unwrap(), gamma: "2".parse().unwrap() }),
            DistributionSpec::new(Family::Frechet { alpha: "2".parse().unwrap() }),
            DistributionSpec::new(Family::HallWeissman { a: 0.5, b: 0.5, alpha: "2".parse().unwrap(), beta: "3".parse().unwrap() }),
            DistributionSpec::new(Family::LogGamma { lambda: "2".parse().unwrap(), alpha: "3".parse().unwrap() }),
            DistributionSpec::new(Family::Student { alpha: "3".parse().unwrap() }),
        ];
        for spec in specs {
            let t = 2.0;
            let cfg = McConfig::new(400_000, vec![t]).seed(11).shards(4);
            let row = mc_tail(&WeightSequence::explicit(vec![1.0]), &spec, &cfg).unwrap().rows[0].clone();
            let p = spec.tail_probability(t).unwrap();
            assert!(row.ci_lo <= p && p <= row.ci_hi, "{:?}: {row:?} vs {p}", spec.family);
        }
    }
}
