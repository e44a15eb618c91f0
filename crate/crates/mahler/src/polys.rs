//! The polynomials P_n^{α,β}, the skew-orthogonal family π_n built from them,
//! their ε-transforms and the norms s_{2n}.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{c_table, is_nonpositive_integer, ln_gamma_ratio};

type C64 = Complex64;

/// Real coefficients in ascending degree order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyCoeffs {
    pub coeffs: Vec<f64>,
}

impl PolyCoeffs {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        PolyCoeffs { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_c(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Monic polynomial z^N + b_{N-1} z^{N-1} + … + b_0 from b.
    pub fn monic(b: &[f64]) -> Self {
        let mut c = b.to_vec();
        c.push(1.0);
        PolyCoeffs { coeffs: c }
    }

    pub fn scale(&self, k: f64) -> Self {
        PolyCoeffs::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Roots by companion-matrix eigenvalues followed by Newton polishing.
    pub fn roots(&self) -> Result<Vec<C64>> {
        roots(&self.coeffs)
    }
}

fn check_params(alpha: f64, beta: f64) -> Result<()> {
    for p in [alpha, beta] {
        if is_nonpositive_integer(1.0 + p) {
            return Err(Error::Pole(1.0 + p));
        }
    }
    Ok(())
}

/// Coefficients c_k(α)c_{n-k}(β) of P_n^{α,β}.
pub fn p_poly(n: usize, alpha: f64, beta: f64) -> Result<PolyCoeffs> {
    check_params(alpha, beta)?;
    Ok(PolyCoeffs {
        coeffs: p_coeffs(n, alpha, beta),
    })
}

pub(crate) fn p_coeffs(n: usize, alpha: f64, beta: f64) -> Vec<f64> {
    let ca = c_table(n, alpha);
    let cb = c_table(n, beta);
    (0..=n).map(|k| ca[k] * cb[n - k]).collect()
}

/// P_0(z), …, P_{count-1}(z) by the three-term recurrence.
pub fn p_values(count: usize, alpha: f64, beta: f64, z: C64) -> Result<Vec<C64>> {
    check_params(alpha, beta)?;
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return Ok(out);
    }
    out.push(C64::new(1.0, 0.0));
    if count == 1 {
        return Ok(out);
    }
    out.push(z * (1.0 + alpha) + (1.0 + beta));
    for n in 2..count {
        let nf = n as f64;
        let a = z * ((nf + alpha) / nf) + (nf + beta) / nf;
        let b = z * ((nf + alpha + beta) / nf);
        let v = a * out[n - 1] - b * out[n - 2];
        out.push(v);
    }
    Ok(out)
}

/// P_n^{α,β}(z) by the recurrence.
pub fn p_eval(n: usize, alpha: f64, beta: f64, z: C64) -> Result<C64> {
    Ok(*p_values(n + 1, alpha, beta, z)?.last().unwrap())
}

/// Coefficients generated by running the recurrence on polynomials.
pub fn p_poly_recurrence(n: usize, alpha: f64, beta: f64) -> Result<PolyCoeffs> {
    check_params(alpha, beta)?;
    let mut prev = vec![1.0];
    if n == 0 {
        return Ok(PolyCoeffs::new(prev));
    }
    let mut cur = vec![1.0 + beta, 1.0 + alpha];
    for k in 2..=n {
        let kf = k as f64;
        let mut next = vec![0.0; k + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i] += c * (kf + beta) / kf;
            next[i + 1] += c * (kf + alpha) / kf;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i + 1] -= c * (kf + alpha + beta) / kf;
        }
        prev = cur;
        cur = next;
    }
    Ok(PolyCoeffs { coeffs: cur })
}

/// Weight max{1,|z|}^{-s}; the indicator of the closed disk when s = ∞.
pub fn weight(s: f64, r: f64) -> f64 {
    if r <= 1.0 {
        1.0
    } else if s.is_infinite() {
        0.0
    } else {
        r.powf(-s)
    }
}

/// The skew-orthonormal family π_0, …, π_{count-1} for a fixed s.
#[derive(Debug, Clone)]
pub struct SkewFamily {
    pub s: f64,
    count: usize,
    /// π_{2j} = Σ_k even[j][k] z^{2k}
    even: Vec<Vec<f64>>,
    /// π_{2j+1} = Σ_k odd[j][k] z^{2k+1}
    odd: Vec<Vec<f64>>,
    /// coefficients of P_j^{-1/2,-1/2} and P_j^{1/2,-3/2} for the closed ε pieces
    eps_even: Vec<Vec<f64>>,
    eps_odd: Vec<Vec<f64>>,
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * x + v)
}

fn horner_c(c: &[f64], x: C64) -> C64 {
    c.iter().rev().fold(C64::new(0.0, 0.0), |acc, &v| acc * x + v)
}

impl SkewFamily {
    /// Family with indices 0..count. Needs s > count - 1 (or s = ∞) so that
    /// every weighted member has a finite ε-transform.
    pub fn new(count: usize, s: f64) -> Result<Self> {
        if !(s > 0.0) {
            return Err(Error::Domain(format!("weight exponent s = {s} must be positive")));
        }
        let pairs = count.div_ceil(2);
        let mut even = Vec::with_capacity(pairs);
        let mut odd = Vec::with_capacity(pairs);
        let mut eps_even = Vec::with_capacity(pairs);
        let mut eps_odd = Vec::with_capacity(pairs);
        for j in 0..pairs {
            even.push(p_coeffs(j, 0.5, -0.5));
            eps_even.push(p_coeffs(j, -0.5, -0.5));
            let c_half = c_table(j, 0.5);
            let c_m32 = c_table(j, -1.5);
            let b: Vec<f64> = (0..=j)
                .map(|k| {
                    let f = if s.is_infinite() {
                        0.25
                    } else {
                        (s - 2.0 * k as f64 - 2.0) / (4.0 * s)
                    };
                    f * c_half[k] * c_m32[j - k]
                })
                .collect();
            odd.push(b);
            eps_odd.push(p_coeffs(j, 0.5, -1.5));
        }
        Ok(SkewFamily {
            s,
            count,
            even,
            odd,
            eps_even,
            eps_odd,
        })
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn poly(&self, k: usize) -> PolyCoeffs {
        let mut c = vec![0.0; k + 1];
        if k.is_multiple_of(2) {
            for (i, a) in self.even[k / 2].iter().enumerate() {
                c[2 * i] = *a;
            }
        } else {
            for (i, b) in self.odd[k / 2].iter().enumerate() {
                c[2 * i + 1] = *b;
            }
        }
        PolyCoeffs { coeffs: c }
    }

    /// π_k(z) without weight.
    pub fn pi(&self, k: usize, z: C64) -> C64 {
        let z2 = z * z;
        if k.is_multiple_of(2) {
            horner_c(&self.even[k / 2], z2)
        } else {
            z * horner_c(&self.odd[k / 2], z2)
        }
    }

    pub fn pi_real(&self, k: usize, x: f64) -> f64 {
        let x2 = x * x;
        if k.is_multiple_of(2) {
            horner(&self.even[k / 2], x2)
        } else {
            x * horner(&self.odd[k / 2], x2)
        }
    }

    /// Weighted π̃_k(z) = π_k(z) max{1,|z|}^{-s}.
    pub fn pi_tilde(&self, k: usize, z: C64) -> C64 {
        let w = weight(self.s, z.norm());
        if w == 0.0 {
            return C64::new(0.0, 0.0);
        }
        self.pi(k, z) * w
    }

    pub fn pi_tilde_real(&self, k: usize, x: f64) -> f64 {
        let w = weight(self.s, x.abs());
        if w == 0.0 {
            return 0.0;
        }
        self.pi_real(k, x) * w
    }

    /// επ̃_k(y) for real y, piecewise closed form.
    pub fn eps_real(&self, k: usize, y: f64) -> Result<f64> {
        let s = self.s;
        let j = k / 2;
        let ay = y.abs();
        if k.is_multiple_of(2) {
            if ay <= 1.0 {
                return Ok(-y * horner(&self.eps_even[j], y * y));
            }
            if s.is_infinite() {
                return Ok(-y.signum());
            }
            if s <= (2 * j + 1) as f64 {
                return Err(Error::Integrability(format!(
                    "even member of degree {} needs s > {}",
                    2 * j,
                    2 * j + 1
                )));
            }
            // anchor επ̃_{2j}(±1) = ∓1, then add ∫_1^{|y|} π̃_{2j}
            let l = ay.ln();
            let tail: f64 = self.even[j]
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let e = (2 * i + 1) as f64 - s;
                    a * (-(e * l).exp_m1()) / (s - (2 * i + 1) as f64)
                })
                .sum();
            Ok(-y.signum() * (1.0 + tail))
        } else {
            if !s.is_infinite() && s <= (2 * j + 2) as f64 {
                return Err(Error::Integrability(format!(
                    "odd member of degree {} needs s > {}",
                    2 * j + 1,
                    2 * j + 2
                )));
            }
            if ay >= 1.0 {
                if s.is_infinite() {
                    return Ok(0.0);
                }
                let y2 = y * y;
                return Ok(y2 / (4.0 * s) * horner(&self.eps_odd[j], y2) * ay.powf(-s));
            }
            // anchor επ̃_{2j+1}(±1) = 1/(4s), then add ∫_{|y|}^1 π_{2j+1}
            let anchor = if s.is_infinite() { 0.0 } else { 0.25 / s };
            let y2 = y * y;
            let inner: f64 = self.odd[j]
                .iter()
                .enumerate()
                .map(|(i, b)| {
                    let p = (i + 1) as i32;
                    b * (1.0 - y2.powi(p)) / (2 * i + 2) as f64
                })
                .sum();
            Ok(anchor + inner)
        }
    }

    /// επ̃_k at any point: the real transform on ℝ, i·sgn(Im z)·π̃_k(z̄) off it.
    pub fn eps(&self, k: usize, z: C64) -> Result<C64> {
        if z.im == 0.0 {
            return Ok(C64::new(self.eps_real(k, z.re)?, 0.0));
        }
        Ok(C64::new(0.0, z.im.signum()) * self.pi_tilde(k, z.conj()))
    }
}

/// ε(z^d max{1,|z|}^{-s}) at a real point, from exact antiderivatives.
pub fn eps_weighted_monomial(d: usize, s: f64, y: f64) -> Result<f64> {
    let df = d as f64;
    if !s.is_infinite() && s <= df + 1.0 {
        return Err(Error::Integrability(format!("degree {d} needs s > {}", d + 1)));
    }
    let ay = y.abs();
    let v = if d.is_multiple_of(2) {
        if ay <= 1.0 {
            -y.powi(d as i32 + 1) / (df + 1.0)
        } else if s.is_infinite() {
            -y.signum() / (df + 1.0)
        } else {
            -y.signum() * (1.0 / (df + 1.0) + (1.0 - ay.powf(df + 1.0 - s)) / (s - df - 1.0))
        }
    } else if ay <= 1.0 {
        let tail = if s.is_infinite() { 0.0 } else { 1.0 / (s - df - 1.0) };
        1.0 / (df + 1.0) + tail - y.powi(d as i32 + 1) / (df + 1.0)
    } else if s.is_infinite() {
        0.0
    } else {
        ay.powf(df + 1.0 - s) / (s - df - 1.0)
    };
    Ok(v)
}

/// ε(p̃) at a real point for a polynomial p, termwise.
pub fn eps_weighted(p: &PolyCoeffs, s: f64, y: f64) -> Result<f64> {
    let mut acc = 0.0;
    for (d, &a) in p.coeffs.iter().enumerate() {
        if a != 0.0 {
            acc += a * eps_weighted_monomial(d, s, y)?;
        }
    }
    Ok(acc)
}

/// (π_{2n}, π_{2n+1}) as coefficient vectors.
pub fn pi_pair(n: usize, s: f64) -> Result<(PolyCoeffs, PolyCoeffs)> {
    let fam = SkewFamily::new(2 * n + 2, s)?;
    Ok((fam.poly(2 * n), fam.poly(2 * n + 1)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// επ̃_{2n} or επ̃_{2n+1} at a real point.
pub fn eps_pi(kind: Parity, n: usize, s: f64, y: f64) -> Result<f64> {
    let fam = SkewFamily::new(2 * n + 2, s)?;
    match kind {
        Parity::Even => fam.eps_real(2 * n, y),
        Parity::Odd => fam.eps_real(2 * n + 1, y),
    }
}

/// s_{2n} = ∫_ℝ π̃_{2n}(x) dx.
pub fn s_norm(n: usize, s: f64) -> Result<f64> {
    if s.is_infinite() {
        return Ok(2.0);
    }
    let nf = n as f64;
    if s <= 2.0 * nf + 1.0 {
        return Err(Error::Domain(format!("s_2n needs s > {}, got {s}", 2 * n + 1)));
    }
    let (l1, s1) = ln_gamma_ratio((s + 2.0) / 2.0, (s + 1.0) / 2.0)?;
    let (l2, s2) = ln_gamma_ratio((s - 2.0 * nf - 1.0) / 2.0, (s - 2.0 * nf) / 2.0)?;
    Ok(2.0 * s1 * s2 * (l1 + l2).exp())
}

/// Roots of Σ c_k z^k.
pub fn roots(c: &[f64]) -> Result<Vec<C64>> {
    let mut c = c.to_vec();
    while c.len() > 1 && *c.last().unwrap() == 0.0 {
        c.pop();
    }
    let n = c.len() - 1;
    if n == 0 {
        if c[0] == 0.0 {
            return Err(Error::Domain("zero polynomial has no finite root set".into()));
        }
        return Ok(vec![]);
    }
    let lead = c[n];
    // leading zeros at the origin are split off exactly
    let zeros = c.iter().take_while(|&&v| v == 0.0).count();
    let reduced: Vec<f64> = c[zeros..].iter().map(|v| v / lead).collect();
    let m = reduced.len() - 1;
    let mut out = vec![C64::new(0.0, 0.0); zeros];
    if m == 0 {
        return Ok(out);
    }
    if m == 1 {
        out.push(C64::new(-reduced[0], 0.0));
        return Ok(out);
    }
    if m == 2 {
        out.extend(quadratic_roots(reduced[1], reduced[0]));
        return Ok(out);
    }
    let mut comp = DMatrix::<f64>::zeros(m, m);
    for i in 1..m {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..m {
        comp[(i, m - 1)] = -reduced[i];
    }
    let eig: Vec<C64> = match Schur::try_new(comp, f64::EPSILON, 100 * m) {
        Some(schur) => schur.complex_eigenvalues().iter().copied().collect(),
        None => aberth(&reduced)?,
    };
    for r in eig {
        out.push(polish(&reduced, r));
    }
    Ok(out)
}

/// Simultaneous Aberth–Ehrlich iteration for a monic polynomial; used when
/// the Schur iteration on the companion matrix stalls (clustered roots).
fn aberth(c: &[f64]) -> Result<Vec<C64>> {
    let m = c.len() - 1;
    // Cauchy bound for the starting circle
    let radius = 1.0 + c[..m].iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let r0 = radius.clamp(0.5, 2.0);
    let mut z: Vec<C64> = (0..m)
        .map(|k| C64::from_polar(r0, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / m as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..m {
            let (p, dp, scale) = eval_with_derivative(c, z[i]);
            if p.norm() <= 4.0 * f64::EPSILON * scale {
                continue;
            }
            let ratio = p / dp;
            let sum: C64 = (0..m).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (C64::new(1.0, 0.0) - ratio * sum);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            return Ok(z);
        }
    }
    if z.iter().all(|r| root_residual(c, *r) < 1e-10) {
        Ok(z)
    } else {
        Err(Error::Conditioning("root iteration did not converge".into()))
    }
}

/// Roots of z² + b z + c without cancellation.
pub fn quadratic_roots(b: f64, c: f64) -> [C64; 2] {
    let disc = b * b - 4.0 * c;
    if disc >= 0.0 {
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        if q == 0.0 {
            return [C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
        }
        let r1 = q;
        let r2 = c / q;
        [C64::new(r1, 0.0), C64::new(r2, 0.0)]
    } else {
        let re = -0.5 * b;
        let im = 0.5 * (-disc).sqrt();
        [C64::new(re, im), C64::new(re, -im)]
    }
}

fn eval_with_derivative(c: &[f64], z: C64) -> (C64, C64, f64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    let mut scale = 0.0;
    let r = z.norm();
    for &v in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + v;
        scale = scale * r + v.abs();
    }
    (p, dp, scale)
}

fn polish(c: &[f64], mut z: C64) -> C64 {
    let (mut p, _, _) = eval_with_derivative(c, z);
    for _ in 0..3 {
        let (_, dp, _) = eval_with_derivative(c, z);
        if dp.norm() == 0.0 {
            break;
        }
        let cand = z - p / dp;
        let (pc, _, _) = eval_with_derivative(c, cand);
        if pc.norm() < p.norm() {
            z = cand;
            p = pc;
        } else {
            break;
        }
    }
    if z.im.abs() <= 1e-300 {
        z.im = 0.0;
    }
    z
}

/// Backward error |p(r)| / Σ|c_k||r|^k.
pub fn root_residual(c: &[f64], r: C64) -> f64 {
    let (p, _, scale) = eval_with_derivative(c, r);
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LocationClass {
    /// all zeros in the open disk or at 1
    DiskOrOne,
    /// all zeros on the unit circle
    Circle,
    Other,
}

#[derive(Debug, Clone, Serialize)]
pub struct ZeroReport {
    pub order_at_1: usize,
    pub all_simple_away_from_1: bool,
    pub location_class: LocationClass,
    pub max_modulus: f64,
    pub max_circle_distance: f64,
    /// Largest backward error after moving every root radially onto 𝕋.
    pub circle_residual: f64,
    /// Same, moving only roots outside the closed disk.
    pub disk_residual: f64,
    pub roots: Vec<(f64, f64)>,
}

/// Locates the zeros of P_n^{α,β} relative to the unit circle.
pub fn zero_check(n: usize, alpha: f64, beta: f64) -> Result<ZeroReport> {
    zero_check_tol(n, alpha, beta, 1e-6)
}

pub fn zero_check_tol(n: usize, alpha: f64, beta: f64, tol: f64) -> Result<ZeroReport> {
    if n > 64 {
        return Err(Error::Domain(format!("degree {n} exceeds 64")));
    }
    let p = p_poly(n, alpha, beta)?;
    let t = -1.0 - alpha - beta;
    let m = t.round();
    if (t - m).abs() <= 1e-12 && m >= 1.0 && m <= n as f64 {
        return zero_check_integer(n, m as usize, alpha, &p.coeffs, tol);
    }
    let mut c = p.coeffs.clone();
    // multiplicity at 1: derivatives at 1 vanish relative to their term sizes
    let mut order = 0;
    while c.len() > 1 {
        let sum: f64 = c.iter().sum();
        let size: f64 = c.iter().map(|v| v.abs()).sum();
        if sum.abs() > 1e-10 * size {
            break;
        }
        c = deflate_at_one(&c);
        order += 1;
    }
    let rest = roots(&c)?;
    for r in &rest {
        let res = root_residual(&c, *r);
        if res > tol {
            return Err(Error::Conditioning(format!("root {r} has backward error {res:e}")));
        }
    }
    Ok(zero_report(order, rest, tol, |z| root_residual(&c, z)))
}

/// Synthetic division by (z − 1).
fn deflate_at_one(c: &[f64]) -> Vec<f64> {
    let d = c.len() - 1;
    let mut q = vec![0.0; d];
    let mut acc = 0.0;
    for k in (1..=d).rev() {
        acc += c[k];
        q[k - 1] = acc;
    }
    q
}

fn max_residual(c: &[f64], rs: &[C64]) -> f64 {
    rs.iter().map(|r| root_residual(c, *r)).fold(0.0, f64::max)
}

/// m+1+α+β = 0: P_n = const·(1−z)^m Q. Two root sets for Q are formed:
/// explicit division by (z−1)^m, and Q(z) = (z−1)^{n−m} q(1/(z−1)) with
/// q(w) = Σ_{j≤n−m} C(n−m, j) c_{n−j}(α) w^j, which avoids the cancellation
/// of the division when m is large. The set with the smaller backward error
/// (each in its own representation) is kept.
fn zero_check_integer(n: usize, m: usize, alpha: f64, full: &[f64], tol: f64) -> Result<ZeroReport> {
    let mut c = full.to_vec();
    for _ in 0..m {
        c = deflate_at_one(&c);
    }
    let direct = roots(&c)?;
    let err_direct = max_residual(&c, &direct);

    let d = n - m;
    let ca = c_table(n, alpha);
    let mut binom = 1.0;
    let mut q = Vec::with_capacity(d + 1);
    for j in 0..=d {
        q.push(binom * ca[n - j]);
        binom *= (d - j) as f64 / (j + 1) as f64;
    }
    let ws = roots(&q)?;
    let err_w = max_residual(&q, &ws);

    if err_direct.min(err_w) > tol {
        return Err(Error::Conditioning(format!(
            "deflated roots have backward error {:e}",
            err_direct.min(err_w)
        )));
    }
    if err_direct <= err_w {
        Ok(zero_report(m, direct, tol, |z| root_residual(&c, z)))
    } else {
        let rest = ws.iter().map(|w| 1.0 + w.inv()).collect();
        Ok(zero_report(m, rest, tol, |z| root_residual(&q, (z - 1.0).inv())))
    }
}

/// `residual` is the backward error of a point for the polynomial the roots
/// were computed from; the location class holds when the roots, moved onto
/// the claimed set, still have backward error ≤ tol.
fn zero_report(order: usize, rest: Vec<C64>, tol: f64, residual: impl Fn(C64) -> f64) -> ZeroReport {
    let mut simple = true;
    for i in 0..rest.len() {
        for j in i + 1..rest.len() {
            if (rest[i] - rest[j]).norm() <= tol {
                simple = false;
            }
        }
        if (rest[i] - 1.0).norm() <= tol {
            simple = false;
        }
    }
    let mut all: Vec<C64> = vec![C64::new(1.0, 0.0); order];
    all.extend(rest.iter().copied());
    let max_modulus = rest.iter().map(|r| r.norm()).fold(0.0, f64::max);
    let max_circle_distance = rest.iter().map(|r| (r.norm() - 1.0).abs()).fold(0.0, f64::max);
    let onto = |r: &C64| {
        if r.norm() > 0.0 {
            r / r.norm()
        } else {
            C64::new(1.0, 0.0)
        }
    };
    let circle_residual = rest
        .iter()
        .map(|r| {
            if (r.norm() - 1.0).abs() <= tol {
                0.0
            } else {
                residual(onto(r))
            }
        })
        .fold(0.0, f64::max);
    let disk_residual = rest
        .iter()
        .map(|r| if r.norm() <= 1.0 + tol { 0.0 } else { residual(onto(r)) })
        .fold(0.0, f64::max);
    let location_class = if circle_residual <= tol {
        LocationClass::Circle
    } else if disk_residual <= tol {
        LocationClass::DiskOrOne
    } else {
        LocationClass::Other
    };
    ZeroReport {
        order_at_1: order,
        all_simple_away_from_1: simple,
        location_class,
        max_modulus: if order > 0 { max_modulus.max(1.0) } else { max_modulus },
        max_circle_distance,
        circle_residual,
        disk_residual,
        roots: all.iter().map(|z| (z.re, z.im)).collect(),
    }
}

/// Hypotheses under which the zero locations of P_n^{α,β} are known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZeroCase {
    /// α > β with 2+α+β > 0 or m+1+α+β = 0, m ≤ n: zeros in 𝔻 ∪ {1}
    DiskOrOne,
    /// α = β with 3+2α > 0 or m+1+2α = 0, m ≤ n even: zeros on 𝕋
    Circle,
}

#[derive(Debug, Clone, Serialize)]
pub struct ZeroSuite {
    pub case: ZeroCase,
    pub draws: usize,
    pub failures: Vec<(usize, f64, f64)>,
    /// Largest excess over the claimed region (modulus − 1, or distance to 𝕋).
    pub worst_excess: f64,
}

fn admissible(p: f64) -> bool {
    !is_nonpositive_integer(1.0 + p) && (1.0 + p - (1.0 + p).round()).abs() > 1e-3 || 1.0 + p > 0.5
}

/// Random admissible (n ≤ 30, α, β) for one case; a quarter of the draws
/// use the integer alternative m+1+α+β = 0.
pub fn zero_location_suite(case: ZeroCase, draws: usize, seed: u64, tol: f64) -> Result<ZeroSuite> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for _ in 0..draws {
        let n = rng.random_range(1..=30usize);
        // the integer alternatives need m ≤ n (for m > n there is no zero at
        // 1 and the location claim fails, e.g. n = 2, α = β = −5/2)
        let integer = rng.random_bool(0.25) && (case == ZeroCase::DiskOrOne || n >= 2);
        let (a, b) = loop {
            let (a, b) = match (case, integer) {
                (ZeroCase::DiskOrOne, false) => {
                    let b: f64 = rng.random_range(-3.0..3.0);
                    let a = rng.random_range(b.max(-2.0 - b)..b.max(-2.0 - b) + 4.0);
                    (a, b)
                }
                (ZeroCase::DiskOrOne, true) => {
                    let m = rng.random_range(1..=n) as f64;
                    let d = rng.random_range(0.01..3.0);
                    (-(m + 1.0) / 2.0 + d, -(m + 1.0) / 2.0 - d)
                }
                (ZeroCase::Circle, false) => {
                    let a = rng.random_range(-1.5..10.0);
                    (a, a)
                }
                (ZeroCase::Circle, true) => {
                    let m = 2 * rng.random_range(1..=n / 2) as u32;
                    let a = -(m as f64 + 1.0) / 2.0;
                    (a, a)
                }
            };
            let strict = match case {
                ZeroCase::DiskOrOne => a > b,
                ZeroCase::Circle => a == b && (3.0 + 2.0 * a > 0.0 || integer),
            };
            if strict && admissible(a) && admissible(b) {
                break (a, b);
            }
        };
        let r = match zero_check_tol(n, a, b, tol) {
            Ok(r) => r,
            Err(_) => {
                failures.push((n, a, b));
                continue;
            }
        };
        let excess = match case {
            ZeroCase::DiskOrOne => r.max_modulus - 1.0,
            ZeroCase::Circle => r.max_circle_distance,
        };
        worst = worst.max(excess);
        let ok = match case {
            ZeroCase::DiskOrOne => r.location_class != LocationClass::Other,
            ZeroCase::Circle => r.location_class == LocationClass::Circle,
        };
        if !ok {
            failures.push((n, a, b));
        }
    }
    Ok(ZeroSuite {
        case,
        draws,
        failures,
        worst_excess: worst,
    })
}
