//! Monte-Carlo checks: Mahler measure, a Metropolis ball walk on monic
//! coefficient vectors with density M̃(b)^{−s}, root classification and
//! empirical root statistics.
//!
//! Only the monic ensemble is sampled. The non-monic ensemble on ℝ^{N+1}
//! factors as an independent leading coefficient times a monic polynomial,
//! so its root statistics are those of the monic chain.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polys::{quadratic_roots, roots, PolyCoeffs};
use num_complex::Complex64;

type C64 = Complex64;

/// Nodes of the periodic rule used for the Jensen cross-check.
const JENSEN_NODES: usize = 512;

/// Minimum root distance from 𝕋 for the Jensen check to be meaningful.
const JENSEN_MARGIN: f64 = 0.05;

fn log_measure_of_roots(rs: &[C64]) -> f64 {
    rs.iter().map(|r| r.norm().max(1.0).ln()).sum()
}

/// (1/2π)∫ log|p(e^{iθ})| dθ by the periodic trapezoid rule.
pub fn jensen_log_measure(p: &PolyCoeffs) -> f64 {
    let mut acc = 0.0;
    for k in 0..JENSEN_NODES {
        let z = C64::from_polar(1.0, 2.0 * PI * k as f64 / JENSEN_NODES as f64);
        acc += p.eval_c(z).norm().ln();
    }
    acc / JENSEN_NODES as f64
}

/// M(p) = |a| ∏ max{1, |root|}. When every root is at least 0.05 away from
/// the unit circle the value is cross-checked against the log-modulus circle
/// average.
pub fn mahler_measure(p: &PolyCoeffs) -> Result<f64> {
    if p.is_zero() {
        return Err(Error::Domain("Mahler measure of the zero polynomial".into()));
    }
    let rs = p.roots()?;
    let log_m = p.leading().abs().ln() + log_measure_of_roots(&rs);
    let margin = rs.iter().map(|r| (r.norm() - 1.0).abs()).fold(f64::INFINITY, f64::min);
    if margin > JENSEN_MARGIN {
        let log_j = jensen_log_measure(p);
        let rel = (log_m - log_j).exp_m1().abs();
        if rel > 1e-4 {
            return Err(Error::Conditioning(format!(
                "roots give M = {:e}, circle average gives {:e}",
                log_m.exp(),
                log_j.exp()
            )));
        }
    }
    Ok(log_m.exp())
}

/// log M̃(b) for the monic polynomial with lower coefficients b; +∞ when the
/// roots cannot be found.
pub fn monic_log_measure(b: &[f64]) -> f64 {
    match b.len() {
        0 => 0.0,
        1 => b[0].abs().max(1.0).ln(),
        2 => log_measure_of_roots(&quadratic_roots(b[1], b[0])),
        _ => {
            let mut c = b.to_vec();
            c.push(1.0);
            roots(&c).map(|rs| log_measure_of_roots(&rs)).unwrap_or(f64::INFINITY)
        }
    }
}

/// Parameters of the ball walk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub n: usize,
    /// Weight exponent; ∞ samples uniformly from the monic star body.
    pub s: f64,
    pub step_length: f64,
    /// Total number of proposals, burn-in included.
    pub steps: u64,
    pub burn_in: u64,
    pub thin: u64,
    pub seed: u64,
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParams("degree must be positive".into()));
        }
        if !(self.step_length > 0.0) || !self.step_length.is_finite() {
            return Err(Error::InvalidParams(format!(
                "step length must be positive, got {}",
                self.step_length
            )));
        }
        if self.thin == 0 {
            return Err(Error::InvalidParams("thin must be positive".into()));
        }
        if self.steps < self.burn_in {
            return Err(Error::InvalidParams("steps must be at least burn_in".into()));
        }
        if self.s.is_nan() || self.s <= self.n as f64 {
            return Err(Error::Domain(format!("need s > N = {}, got {}", self.n, self.s)));
        }
        Ok(())
    }
}

/// One emitted state of the chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    /// Proposal index (1-based) after which the state was recorded.
    pub step: u64,
    pub poly: PolyCoeffs,
}

/// Metropolis ball walk started at z^N. Proposals b + δu with u uniform in
/// the unit ball are accepted with probability min{1, (M̃(b′)/M̃(b))^{−s}};
/// for s = ∞ exactly when M̃(b′) ≤ 1. Rejected proposals keep the state.
#[derive(Debug, Clone)]
pub struct Chain {
    cfg: SamplerConfig,
    rng: ChaCha8Rng,
    b: Vec<f64>,
    log_m: f64,
    step: u64,
    accepted: u64,
}

impl Chain {
    pub fn new(cfg: SamplerConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Chain {
            cfg,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            b: vec![0.0; cfg.n],
            log_m: 0.0,
            step: 0,
            accepted: 0,
        })
    }

    pub fn state(&self) -> PolyCoeffs {
        PolyCoeffs::monic(&self.b)
    }

    pub fn steps_taken(&self) -> u64 {
        self.step
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.step == 0 {
            0.0
        } else {
            self.accepted as f64 / self.step as f64
        }
    }

    /// Uniform point of the unit ball in ℝ^N.
    fn ball_point(&mut self) -> Vec<f64> {
        let n = self.cfg.n;
        let mut g: Vec<f64> = (0..n).map(|_| self.rng.sample(StandardNormal)).collect();
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        let r = self.rng.random::<f64>().powf(1.0 / n as f64);
        for x in &mut g {
            *x *= r / norm;
        }
        g
    }

    /// Performs one proposal; returns whether it was accepted.
    pub fn advance(&mut self) -> bool {
        let u = self.ball_point();
        let prop: Vec<f64> = self
            .b
            .iter()
            .zip(&u)
            .map(|(b, d)| b + self.cfg.step_length * d)
            .collect();
        let lm = monic_log_measure(&prop);
        self.step += 1;
        let accept = if self.cfg.s.is_infinite() {
            lm <= 1e-12
        } else if lm <= self.log_m {
            true
        } else {
            let log_ratio = -self.cfg.s * (lm - self.log_m);
            self.rng.random::<f64>().ln() < log_ratio
        };
        if accept {
            self.b = prop;
            self.log_m = lm;
            self.accepted += 1;
        }
        accept
    }
}

impl Iterator for Chain {
    type Item = Sample;

    fn next(&mut self) -> Option<Sample> {
        while self.step < self.cfg.steps {
            self.advance();
            if self.step > self.cfg.burn_in && (self.step - self.cfg.burn_in).is_multiple_of(self.cfg.thin) {
                return Some(Sample {
                    step: self.step,
                    poly: self.state(),
                });
            }
        }
        None
    }
}

/// All emitted states of one chain.
pub fn sample(cfg: &SamplerConfig) -> Result<Vec<Sample>> {
    Ok(Chain::new(*cfg)?.collect())
}

/// Roots split into real roots and upper-half-plane representatives of
/// conjugate pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub reals: Vec<f64>,
    pub pairs: Vec<C64>,
}

impl RootSet {
    pub fn degree(&self) -> usize {
        self.reals.len() + 2 * self.pairs.len()
    }
}

/// Companion-matrix roots; |Im r| ≤ tol·(1 + |r|) counts as real, the rest
/// are matched to their nearest conjugate.
pub fn roots_classify(p: &PolyCoeffs, tol: f64) -> Result<RootSet> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParams(format!("tolerance must be positive, got {tol}")));
    }
    let rs = match p.degree() {
        2 => {
            let a = p.leading();
            quadratic_roots(p.coeffs[1] / a, p.coeffs[0] / a).to_vec()
        }
        _ => p.roots()?,
    };
    classify(rs, tol)
}

fn classify(rs: Vec<C64>, tol: f64) -> Result<RootSet> {
    let mut reals = Vec::new();
    let mut uppers = Vec::new();
    let mut lowers = Vec::new();
    for r in rs {
        if r.im.abs() <= tol * (1.0 + r.norm()) {
            reals.push(r.re);
        } else if r.im > 0.0 {
            uppers.push(r);
        } else {
            lowers.push(r);
        }
    }
    if uppers.len() != lowers.len() {
        return Err(Error::Pairing(format!(
            "{} roots above the axis, {} below",
            uppers.len(),
            lowers.len()
        )));
    }
    let mut pairs = Vec::with_capacity(uppers.len());
    for u in uppers {
        let (k, d) = lowers.iter().enumerate().map(|(k, l)| (k, (l.conj() - u).norm())).fold(
            (usize::MAX, f64::INFINITY),
            |best, x| if x.1 < best.1 { x } else { best },
        );
        if d > 1e-6 * (1.0 + u.norm()) {
            return Err(Error::Pairing(format!(
                "no conjugate partner for {u} (nearest at {d:e})"
            )));
        }
        let l = lowers.swap_remove(k);
        pairs.push(0.5 * (u + l.conj()));
    }
    reals.sort_by(f64::total_cmp);
    Ok(RootSet { reals, pairs })
}

/// Uniform bins on [lo, hi].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealGrid {
    pub lo: f64,
    pub hi: f64,
    pub bins: usize,
}

/// Uniform bins on a rectangle of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexGrid {
    pub re_lo: f64,
    pub re_hi: f64,
    pub im_lo: f64,
    pub im_hi: f64,
    pub re_bins: usize,
    pub im_bins: usize,
}

fn bin_of(x: f64, lo: f64, hi: f64, bins: usize) -> Option<usize> {
    if !(x >= lo && x < hi) {
        return None;
    }
    Some((((x - lo) / (hi - lo)) * bins as f64).floor().min(bins as f64 - 1.0) as usize)
}

/// Root density per bin (roots per unit length or area per polynomial) and
/// its batch-means standard error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram1D {
    pub edges: Vec<f64>,
    pub density: Vec<f64>,
    pub stderr: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram2D {
    pub re_edges: Vec<f64>,
    pub im_edges: Vec<f64>,
    /// Row-major over (re bin, im bin).
    pub density: Vec<f64>,
    pub stderr: Vec<f64>,
}

/// A sample mean with its batch-means standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    /// n·var/(batch-means variance of the mean·n), capped at n.
    pub effective_samples: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalStats {
    pub samples: usize,
    pub batches: usize,
    /// Real roots per polynomial.
    pub real_count: Estimate,
    /// Real roots in [−1, 1] per polynomial.
    pub real_count_inside: Estimate,
    /// Mean of (#real + 2·#pairs); equals N.
    pub mean_total_roots: f64,
    pub real_hist: Histogram1D,
    pub complex_hist: Histogram2D,
}

/// Batch means of a per-sample series.
fn batch_estimate(xs: &[f64], batches: usize) -> Estimate {
    let n = xs.len();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let size = n / batches;
    let bm: Vec<f64> = (0..batches)
        .map(|k| xs[k * size..(k + 1) * size].iter().sum::<f64>() / size as f64)
        .collect();
    let bmean = bm.iter().sum::<f64>() / batches as f64;
    let bvar = bm.iter().map(|x| (x - bmean).powi(2)).sum::<f64>() / (batches as f64 - 1.0);
    let stderr = (bvar / batches as f64).sqrt();
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0).max(1.0);
    let effective_samples = if stderr > 0.0 {
        (var / (stderr * stderr)).min(n as f64)
    } else {
        n as f64
    };
    Estimate {
        mean,
        stderr,
        effective_samples,
    }
}

/// Histograms and counts over a sample stream, with standard errors from
/// `batches` contiguous batch means (the stream is a Markov chain).
pub fn empirical_stats<I: IntoIterator<Item = PolyCoeffs>>(
    samples: I,
    real_grid: &RealGrid,
    complex_grid: &ComplexGrid,
    batches: usize,
) -> Result<EmpiricalStats> {
    if real_grid.bins == 0 || complex_grid.re_bins == 0 || complex_grid.im_bins == 0 {
        return Err(Error::InvalidParams("histograms need at least one bin".into()));
    }
    if !(real_grid.hi > real_grid.lo)
        || !(complex_grid.re_hi > complex_grid.re_lo)
        || !(complex_grid.im_hi > complex_grid.im_lo)
    {
        return Err(Error::InvalidParams("histogram ranges must be non-empty".into()));
    }
    if batches < 2 {
        return Err(Error::InvalidParams("need at least two batches".into()));
    }
    let nb1 = real_grid.bins;
    let nb2 = complex_grid.re_bins * complex_grid.im_bins;
    let mut counts_real = Vec::new();
    let mut counts_in = Vec::new();
    let mut total_roots = 0usize;
    // per-sample bin hits, stored sparsely
    let mut hits1: Vec<Vec<usize>> = Vec::new();
    let mut hits2: Vec<Vec<usize>> = Vec::new();
    for p in samples {
        let rs = roots_classify(&p, 1e-9)?;
        total_roots += rs.degree();
        counts_real.push(rs.reals.len() as f64);
        counts_in.push(rs.reals.iter().filter(|x| x.abs() <= 1.0).count() as f64);
        hits1.push(
            rs.reals
                .iter()
                .filter_map(|&x| bin_of(x, real_grid.lo, real_grid.hi, nb1))
                .collect(),
        );
        hits2.push(
            rs.pairs
                .iter()
                .filter_map(|z| {
                    let i = bin_of(z.re, complex_grid.re_lo, complex_grid.re_hi, complex_grid.re_bins)?;
                    let j = bin_of(z.im, complex_grid.im_lo, complex_grid.im_hi, complex_grid.im_bins)?;
                    Some(i * complex_grid.im_bins + j)
                })
                .collect(),
        );
    }
    let n = counts_real.len();
    if n < 1000 {
        return Err(Error::InvalidParams(format!("need at least 1000 samples, got {n}")));
    }
    if batches > n / 10 {
        return Err(Error::InvalidParams(format!(
            "{batches} batches is too many for {n} samples"
        )));
    }
    let used = (n / batches) * batches;
    let hist = |hits: &[Vec<usize>], bins: usize, cell: f64| -> (Vec<f64>, Vec<f64>) {
        let size = used / batches;
        let mut bcounts = vec![vec![0.0; bins]; batches];
        let mut total = vec![0.0; bins];
        for (k, h) in hits.iter().enumerate() {
            for &b in h {
                total[b] += 1.0;
                if k < used {
                    bcounts[k / size][b] += 1.0;
                }
            }
        }
        let density = total.iter().map(|t| t / (n as f64 * cell)).collect();
        let stderr = (0..bins)
            .map(|b| {
                let m: Vec<f64> = bcounts.iter().map(|c| c[b] / (size as f64 * cell)).collect();
                let mean = m.iter().sum::<f64>() / batches as f64;
                let var = m.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (batches as f64 - 1.0);
                (var / batches as f64).sqrt()
            })
            .collect();
        (density, stderr)
    };
    let w1 = (real_grid.hi - real_grid.lo) / nb1 as f64;
    let (d1, e1) = hist(&hits1, nb1, w1);
    let area = (complex_grid.re_hi - complex_grid.re_lo) / complex_grid.re_bins as f64
        * (complex_grid.im_hi - complex_grid.im_lo)
        / complex_grid.im_bins as f64;
    let (d2, e2) = hist(&hits2, nb2, area);
    let edges = |lo: f64, hi: f64, k: usize| {
        (0..=k)
            .map(|i| lo + (hi - lo) * i as f64 / k as f64)
            .collect::<Vec<_>>()
    };
    Ok(EmpiricalStats {
        samples: n,
        batches,
        real_count: batch_estimate(&counts_real[..used], batches),
        real_count_inside: batch_estimate(&counts_in[..used], batches),
        mean_total_roots: total_roots as f64 / n as f64,
        real_hist: Histogram1D {
            edges: edges(real_grid.lo, real_grid.hi, nb1),
            density: d1,
            stderr: e1,
        },
        complex_hist: Histogram2D {
            re_edges: edges(complex_grid.re_lo, complex_grid.re_hi, complex_grid.re_bins),
            im_edges: edges(complex_grid.im_lo, complex_grid.im_hi, complex_grid.im_bins),
            density: d2,
            stderr: e2,
        },
    })
}

/// Σ ((observed − expected)/stderr)² over bins with positive stderr, and the
/// number of such bins.
pub fn chi_square(observed: &[f64], stderr: &[f64], expected: &[f64]) -> (f64, usize) {
    let mut chi = 0.0;
    let mut k = 0;
    for ((o, e), x) in observed.iter().zip(stderr).zip(expected) {
        if *e > 0.0 {
            chi += ((o - x) / e).powi(2);
            k += 1;
        }
    }
    (chi, k)
}
