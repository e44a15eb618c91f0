//! Finite Gamma-function identities behind the exact sums, checked on
//! random admissible parameters.
//!
//! Each check returns both sides and a scale: the sum of the absolute values
//! of the summands (or |rhs| where there is no finite sum). Errors are
//! reported relative to that scale, so alternating sums are judged by the
//! accuracy floating point can deliver for them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::quad::Adaptive;
use crate::specfun::gamma_quotient;

/// Two sides of one identity instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sides {
    pub lhs: f64,
    pub rhs: f64,
    pub scale: f64,
}

impl Sides {
    pub fn error(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.scale.max(f64::MIN_POSITIVE)
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// (1/(Γ(b)Γ(a))) Σ_{k≤n} Γ(k+a)Γ(n−k+b)/(k!(n−k)!) ∏_{j≤k}(j−b)/(j+a−1) · 1/(x−k+b)
/// against x(x−1)⋯(x−n+1)/((x+b)(x+b−1)⋯(x+b−n)).
pub fn partial_fractions(n: usize, a: f64, b: f64, x: f64) -> Result<Sides> {
    let mut lhs = 0.0;
    let mut scale = 0.0;
    for k in 0..=n {
        let mut prod = 1.0;
        for j in 1..=k {
            prod *= (j as f64 - b) / (j as f64 + a - 1.0);
        }
        let t = gamma_quotient(k as f64 + a, a)? * gamma_quotient((n - k) as f64 + b, b)?
            / (factorial(k) * factorial(n - k))
            * prod
            / (x - k as f64 + b);
        lhs += t;
        scale += t.abs();
    }
    let mut rhs = 1.0 / (x + b - n as f64);
    for j in 0..n {
        rhs *= (x - j as f64) / (x + b - j as f64);
    }
    Ok(Sides { lhs, rhs, scale })
}

/// Σ_{m≤M} (−1)^m C(M,m) Γ(m+x)/Γ(m+x+y) against Γ(x)Γ(M+y)/(Γ(y)Γ(M+x+y)).
pub fn alternating_binomial(m_max: usize, x: f64, y: f64) -> Result<Sides> {
    let mut lhs = 0.0;
    let mut scale = 0.0;
    for m in 0..=m_max {
        let t = binomial(m_max, m) * gamma_quotient(m as f64 + x, m as f64 + x + y)?;
        lhs += if m % 2 == 0 { t } else { -t };
        scale += t.abs();
    }
    let rhs = gamma_quotient(x, y)? * gamma_quotient(m_max as f64 + y, m_max as f64 + x + y)?;
    Ok(Sides { lhs, rhs, scale })
}

/// Σ_{j≤J} Γ(j+1+x)/Γ(j+1) against Γ(J+2+x)/((1+x)Γ(J+1)).
pub fn gamma_sum_induction(j_max: usize, x: f64) -> Result<Sides> {
    let mut lhs = 0.0;
    let mut scale = 0.0;
    for j in 0..=j_max {
        let t = gamma_quotient(j as f64 + 1.0 + x, j as f64 + 1.0)?;
        lhs += t;
        scale += t.abs();
    }
    let rhs = gamma_quotient(j_max as f64 + 2.0 + x, j_max as f64 + 1.0)? / (1.0 + x);
    Ok(Sides { lhs, rhs, scale })
}

/// (Γ(N)/Γ(N+1+γ)) Σ_{n<N} Γ(n+1+γ)/Γ(n+1) (1+η)^n against
/// ∫₀¹ x^γ (1+ηx)^{N−1} dx, the integral by quadrature after t = x^{γ+1}.
pub fn gamma_sum_integral(n: usize, gamma: f64, eta: f64) -> Result<Sides> {
    let pre = gamma_quotient(n as f64, n as f64 + 1.0 + gamma)?;
    let mut lhs = 0.0;
    let mut scale = 0.0;
    for k in 0..n {
        let t = pre * gamma_quotient(k as f64 + 1.0 + gamma, k as f64 + 1.0)? * (1.0 + eta).powi(k as i32);
        lhs += t;
        scale += t.abs();
    }
    let p = 1.0 / (gamma + 1.0);
    let (v, _) = Adaptive::with_order(32)
        .tol(0.0, 1e-14)
        .run(0.0, 1.0, |t| (1.0 + eta * t.powf(p)).powi(n as i32 - 1));
    let rhs = p * v;
    Ok(Sides {
        lhs,
        rhs,
        scale: scale.max(rhs.abs()),
    })
}

/// Σ_{m≤M} [Γ(m+½)/Γ(m+1)][Γ(M−m+1+x)/Γ(M−m+5/2+x)] against
/// 4/(2M+3+2x) · Γ(M+3/2)/Γ(M+1) · Γ(1+x)/Γ(3/2+x).
pub fn half_integer_convolution(m_max: usize, x: f64) -> Result<Sides> {
    let mut lhs = 0.0;
    for m in 0..=m_max {
        let r = (m_max - m) as f64;
        lhs += gamma_quotient(m as f64 + 0.5, m as f64 + 1.0)? * gamma_quotient(r + 1.0 + x, r + 2.5 + x)?;
    }
    let mf = m_max as f64;
    let rhs =
        4.0 / (2.0 * mf + 3.0 + 2.0 * x) * gamma_quotient(mf + 1.5, mf + 1.0)? * gamma_quotient(1.0 + x, 1.5 + x)?;
    Ok(Sides { lhs, rhs, scale: lhs })
}

/// Σ_{j<J} [Γ(j+½)/Γ(j+1)][Γ(j+x)/Γ(j+3/2+x)] against
/// (2/x) · Γ(J+½)/Γ(J) · Γ(J+x)/Γ(J+½+x).
pub fn half_integer_telescoping(j_max: usize, x: f64) -> Result<Sides> {
    let mut lhs = 0.0;
    for j in 0..j_max {
        let jf = j as f64;
        lhs += gamma_quotient(jf + 0.5, jf + 1.0)? * gamma_quotient(jf + x, jf + 1.5 + x)?;
    }
    let jf = j_max as f64;
    let rhs = 2.0 / x * gamma_quotient(jf + 0.5, jf)? * gamma_quotient(jf + x, jf + 0.5 + x)?;
    Ok(Sides { lhs, rhs, scale: lhs })
}

/// Outcome of one identity over a batch of random draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub draws: usize,
    pub failures: usize,
    pub max_error: f64,
    /// Parameters of the worst draw.
    pub worst: Vec<f64>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Poles of the rational side sit at x = j − b; draws closer than this are
/// resampled.
const POLE_GAP: f64 = 0.05;

/// Runs every identity `draws` times with parameters from a seeded stream.
pub fn identity_suite(draws: usize, seed: u64, tol: f64) -> Result<Vec<IdentityCheck>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    type Case = (&'static str, Box<dyn Fn(&mut ChaCha8Rng) -> (Vec<f64>, Result<Sides>)>);
    let cases: Vec<Case> = vec![
        (
            "partial_fractions",
            Box::new(|r: &mut ChaCha8Rng| {
                let n = r.random_range(0..=10usize);
                let a = r.random_range(0.1..4.0);
                let b = r.random_range(0.1..4.0);
                let x = loop {
                    let x: f64 = r.random_range(-3.0..8.0);
                    if (0..=n).all(|j| (x + b - j as f64).abs() > POLE_GAP) {
                        break x;
                    }
                };
                (vec![n as f64, a, b, x], partial_fractions(n, a, b, x))
            }),
        ),
        (
            "alternating_binomial",
            Box::new(|r: &mut ChaCha8Rng| {
                let m = r.random_range(0..=12usize);
                let x = r.random_range(0.1..5.0);
                let y = r.random_range(0.1..5.0);
                (vec![m as f64, x, y], alternating_binomial(m, x, y))
            }),
        ),
        (
            "gamma_sum_induction",
            Box::new(|r: &mut ChaCha8Rng| {
                let j = r.random_range(0..=30usize);
                let x = r.random_range(-0.9..5.0);
                (vec![j as f64, x], gamma_sum_induction(j, x))
            }),
        ),
        (
            "gamma_sum_integral",
            Box::new(|r: &mut ChaCha8Rng| {
                let n = r.random_range(1..=20usize);
                let g = r.random_range(-0.9..3.0);
                let e = r.random_range(-0.9..1.5);
                (vec![n as f64, g, e], gamma_sum_integral(n, g, e))
            }),
        ),
        (
            "half_integer_convolution",
            Box::new(|r: &mut ChaCha8Rng| {
                let m = r.random_range(0..=30usize);
                let x = r.random_range(-0.9..5.0);
                (vec![m as f64, x], half_integer_convolution(m, x))
            }),
        ),
        (
            "half_integer_telescoping",
            Box::new(|r: &mut ChaCha8Rng| {
                let j = r.random_range(1..=30usize);
                let x = r.random_range(0.05..5.0);
                (vec![j as f64, x], half_integer_telescoping(j, x))
            }),
        ),
    ];
    let mut out = Vec::with_capacity(cases.len());
    for (name, case) in &cases {
        let mut check = IdentityCheck {
            name: name.to_string(),
            draws,
            failures: 0,
            max_error: 0.0,
            worst: vec![],
        };
        for _ in 0..draws {
            let (params, sides) = case(&mut rng);
            let err = sides?.error();
            if !(err <= tol) {
                check.failures += 1;
            }
            if !(err <= check.max_error) {
                check.max_error = err;
                check.worst = params;
            }
        }
        out.push(check);
    }
    Ok(out)
}
