//! Gauss–Legendre rules, adaptive bisection and the substitutions used for
//! semi-infinite ranges.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values that can be integrated: reals and complex numbers.
pub trait Scalar:
    Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync
{
    fn mag(&self) -> f64;
}

impl Scalar for f64 {
    fn mag(&self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    fn mag(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes and weights on [-1, 1] by Newton iteration on P_n.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate<T: Scalar, F: FnMut(f64) -> T>(&self, a: f64, b: f64, mut f: F) -> T {
        let h = 0.5 * (b - a);
        let c = 0.5 * (b + a);
        let mut acc = T::default();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(c + h * x) * (w * h);
        }
        acc
    }

    /// Composite rule on `panels` equal subintervals.
    pub fn integrate_panels<T: Scalar, F: FnMut(f64) -> T>(&self, a: f64, b: f64, panels: usize, mut f: F) -> T {
        let h = (b - a) / panels as f64;
        let mut acc = T::default();
        for k in 0..panels {
            let lo = a + h * k as f64;
            acc = acc + self.integrate(lo, lo + h, &mut f);
        }
        acc
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Shared rule of order `n`, built once per process.
pub fn rule(n: usize) -> Arc<GaussLegendre> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("quadrature cache poisoned");
    map.entry(n).or_insert_with(|| Arc::new(GaussLegendre::new(n))).clone()
}

/// Panel order, overridable through `MAHLER_QUAD_ORDER`.
pub fn default_order() -> usize {
    static ORDER: OnceLock<usize> = OnceLock::new();
    *ORDER.get_or_init(|| {
        std::env::var("MAHLER_QUAD_ORDER")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .map(|n| n.clamp(8, 1024))
            .unwrap_or(64)
    })
}

#[derive(Debug, Clone, Copy)]
pub struct Adaptive {
    pub order: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: usize,
}

impl Default for Adaptive {
    fn default() -> Self {
        Adaptive {
            order: 32,
            abs_tol: 1e-14,
            rel_tol: 1e-12,
            max_depth: 40,
        }
    }
}

impl Adaptive {
    pub fn with_order(order: usize) -> Self {
        Adaptive {
            order,
            ..Adaptive::default()
        }
    }

    pub fn tol(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    /// Bisection driven by the difference between a panel and its halves.
    /// Returns the value and the accumulated error estimate.
    pub fn run<T: Scalar, F: FnMut(f64) -> T>(&self, a: f64, b: f64, mut f: F) -> (T, f64) {
        let gl = rule(self.order);
        let whole = gl.integrate(a, b, &mut f);
        let scale = whole.mag();
        let mut stack = vec![(a, b, whole, 0usize)];
        let mut total = T::default();
        let mut err = 0.0;
        let width = (b - a).abs();
        while let Some((lo, hi, est, depth)) = stack.pop() {
            let mid = 0.5 * (lo + hi);
            let left = gl.integrate(lo, mid, &mut f);
            let right = gl.integrate(mid, hi, &mut f);
            let refined = left + right;
            let diff = (refined - est).mag();
            let share = (hi - lo).abs() / width;
            let budget = self.abs_tol.max(self.rel_tol * scale.max(refined.mag())) * share.max(1e-3);
            if diff <= budget || depth >= self.max_depth {
                total = total + refined;
                err += diff;
            } else {
                stack.push((mid, hi, right, depth + 1));
                stack.push((lo, mid, left, depth + 1));
            }
        }
        (total, err)
    }

    /// Like [`Adaptive::run`] but fails when the estimate exceeds `fail_rel`.
    pub fn checked<T: Scalar, F: FnMut(f64) -> T>(&self, a: f64, b: f64, fail_rel: f64, f: F) -> Result<T> {
        let (v, err) = self.run(a, b, f);
        if err > fail_rel * v.mag().max(self.abs_tol) && err > self.abs_tol {
            return Err(Error::Quadrature { value: v.mag(), err });
        }
        Ok(v)
    }
}

/// ∫_a^∞ f(x) dx for a > 0 via x = 1/t.
pub fn tail<T: Scalar, F: FnMut(f64) -> T>(adaptive: &Adaptive, a: f64, mut f: F) -> (T, f64) {
    assert!(a > 0.0, "tail integral needs a positive lower limit");
    adaptive.run(0.0, 1.0 / a, move |t| {
        if t == 0.0 {
            T::default()
        } else {
            f(1.0 / t) * (1.0 / (t * t))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 32, 64, 96, 200] {
            let g = GaussLegendre::new(n);
            let s: f64 = g.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n} sum={s}");
        }
    }

    #[test]
    fn exact_for_polynomials() {
        let g = GaussLegendre::new(10);
        // degree 19 is integrated exactly
        let v = g.integrate(0.0, 1.0, |x: f64| x.powi(19));
        assert!((v - 1.0 / 20.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_sqrt_endpoint() {
        let (v, _) = Adaptive::default().run(0.0, 1.0, |x: f64| x.sqrt());
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn tail_of_power() {
        let (v, _) = tail(&Adaptive::default(), 2.0, |x: f64| x.powi(-3));
        assert!((v - 0.125).abs() < 1e-13);
    }

    #[test]
    fn complex_integrand() {
        let g = rule(40);
        let v = g.integrate(0.0, 1.0, |x| (Complex64::i() * x).exp());
        let exact = (Complex64::i().exp() - 1.0) / Complex64::i();
        assert!((v - exact).norm() < 1e-14);
    }
}
