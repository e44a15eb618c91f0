//! Finite-N kernels: the polynomial sums K_N, the scalar kernel κ_N, the
//! 2×2 matrix kernel for both species, Pfaffians, correlation functions and
//! expected root counts.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polys::{p_values, s_norm, weight, SkewFamily};
use crate::quad::{tail, Adaptive};
use crate::specfun::ln_gamma_ratio;

type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Degree N and weight exponent s > N (s may be infinite).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleParams {
    pub n: usize,
    pub s: f64,
    pub lambda: f64,
}

impl EnsembleParams {
    pub fn new(n: usize, s: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("degree N must be positive".into()));
        }
        if s.is_nan() || (!s.is_infinite() && s <= n as f64) {
            return Err(Error::Domain(format!("need s > N = {n}, got {s}")));
        }
        if s.is_infinite() && s < 0.0 {
            return Err(Error::Domain("s = -inf".into()));
        }
        let lambda = if s.is_infinite() { 0.0 } else { n as f64 / s };
        Ok(EnsembleParams { n, s, lambda })
    }

    pub fn j(&self) -> usize {
        self.n / 2
    }

    pub fn is_odd(&self) -> bool {
        self.n % 2 == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelValue2x2 {
    pub e11: C64,
    pub e12: C64,
    pub e21: C64,
    pub e22: C64,
}

impl KernelValue2x2 {
    /// −Kᵀ, the value of the kernel with its arguments swapped.
    pub fn neg_transpose(&self) -> Self {
        KernelValue2x2 {
            e11: -self.e11,
            e12: -self.e21,
            e21: -self.e12,
            e22: -self.e22,
        }
    }

    pub fn entries(&self) -> [C64; 4] {
        [self.e11, self.e12, self.e21, self.e22]
    }
}

/// Real points and open-upper-half-plane points.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PointConfig {
    pub reals: Vec<f64>,
    pub uppers: Vec<C64>,
}

impl PointConfig {
    pub fn validate(&self) -> Result<()> {
        if self.reals.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParams("real points must be finite".into()));
        }
        if self
            .uppers
            .iter()
            .any(|z| !(z.im > 0.0) || !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidParams(
                "complex points must lie in the open upper half-plane".into(),
            ));
        }
        Ok(())
    }
}

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

fn neumaier(acc: &mut (f64, f64), x: f64) {
    let t = acc.0 + x;
    if acc.0.abs() >= x.abs() {
        acc.1 += (acc.0 - t) + x;
    } else {
        acc.1 += (x - t) + acc.0;
    }
    acc.0 = t;
}

impl CompensatedSum {
    pub fn add(&mut self, z: C64) {
        neumaier(&mut self.re, z.re);
        neumaier(&mut self.im, z.im);
    }

    pub fn value(&self) -> C64 {
        C64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

/// K_N^{a1,b1,a2,b2}(z, w) = Σ_{n<N} P_n^{a1,b1}(z) P_n^{a2,b2}(w).
pub fn sum_k(n: usize, a1: f64, b1: f64, a2: f64, b2: f64, z: C64, w: C64) -> Result<C64> {
    let pz = p_values(n, a1, b1, z)?;
    let pw = p_values(n, a2, b2, w)?;
    let mut acc = CompensatedSum::default();
    for (a, b) in pz.iter().zip(&pw) {
        acc.add(a * b);
    }
    Ok(acc.value())
}

/// π̃_k and επ̃_k for k < N at one point.
#[derive(Debug, Clone)]
pub struct PointEval {
    pub z: C64,
    pub real: bool,
    pub pi: Vec<C64>,
    pub eps: Vec<C64>,
}

/// The finite-N kernel with its polynomial family precomputed.
#[derive(Debug, Clone)]
pub struct FiniteKernel {
    pub params: EnsembleParams,
    fam: SkewFamily,
    /// s_{2j}/s_{2J} for j < J (odd N only)
    ratios: Vec<f64>,
    inv_s2j: f64,
}

impl FiniteKernel {
    pub fn new(params: EnsembleParams) -> Result<Self> {
        if params.n > 64 {
            return Err(Error::Domain(format!(
                "kernel assembly limited to N <= 64, got {}",
                params.n
            )));
        }
        let fam = SkewFamily::new(params.n, params.s)?;
        let (ratios, inv_s2j) = if params.is_odd() {
            let jj = params.j();
            let top = s_norm(jj, params.s)?;
            let r = (0..jj)
                .map(|j| s_norm(j, params.s).map(|v| v / top))
                .collect::<Result<Vec<_>>>()?;
            (r, 1.0 / top)
        } else {
            (vec![], 0.0)
        };
        Ok(FiniteKernel {
            params,
            fam,
            ratios,
            inv_s2j,
        })
    }

    pub fn family(&self) -> &SkewFamily {
        &self.fam
    }

    pub fn point(&self, z: C64) -> Result<PointEval> {
        let n = self.params.n;
        let real = z.im == 0.0;
        let mut pi = Vec::with_capacity(n);
        let mut eps = Vec::with_capacity(n);
        for k in 0..n {
            pi.push(self.fam.pi_tilde(k, z));
            eps.push(self.fam.eps(k, z)?);
        }
        Ok(PointEval { z, real, pi, eps })
    }

    /// 2Σ[f_{2j} g_{2j+1} − g_{2j} f_{2j+1}] with the odd-N corrections.
    fn skew_sum(&self, f: &[C64], g: &[C64]) -> C64 {
        let jj = self.params.j();
        let mut acc = CompensatedSum::default();
        for j in 0..jj {
            acc.add((f[2 * j] * g[2 * j + 1] - g[2 * j] * f[2 * j + 1]) * 2.0);
        }
        if self.params.is_odd() {
            let top = 2 * jj;
            for j in 0..jj {
                let r = self.ratios[j];
                acc.add(-(f[top] * g[2 * j + 1] - g[top] * f[2 * j + 1]) * (2.0 * r));
            }
        }
        acc.value()
    }

    fn chi_term(&self, f: &PointEval, g: &PointEval, use_eps: bool) -> C64 {
        if !self.params.is_odd() || !g.real {
            return ZERO;
        }
        let top = 2 * self.params.j();
        let v = if use_eps { f.eps[top] } else { f.pi[top] };
        v * self.inv_s2j
    }

    pub fn kappa_at(&self, u: &PointEval, v: &PointEval) -> C64 {
        self.skew_sum(&u.pi, &v.pi)
    }

    fn e12(&self, u: &PointEval, v: &PointEval) -> C64 {
        self.skew_sum(&u.pi, &v.eps) + self.chi_term(u, v, false)
    }

    pub fn matrix_at(&self, u: &PointEval, v: &PointEval) -> KernelValue2x2 {
        let e11 = self.kappa_at(u, v);
        let e12 = self.e12(u, v);
        let e21 = -self.e12(v, u);
        let mut e22 = self.skew_sum(&u.eps, &v.eps) + self.chi_term(u, v, true) - self.chi_term(v, u, true);
        if u.real && v.real {
            e22 += 0.5 * sgn(u.z.re - v.z.re);
        }
        KernelValue2x2 { e11, e12, e21, e22 }
    }

    pub fn kappa(&self, u: C64, v: C64) -> Result<C64> {
        Ok(self.kappa_at(&self.point(u)?, &self.point(v)?))
    }

    pub fn matrix(&self, u: C64, v: C64) -> Result<KernelValue2x2> {
        Ok(self.matrix_at(&self.point(u)?, &self.point(v)?))
    }

    /// R_{1,0}(x) = K^{(1,2)}(x, x).
    pub fn r10(&self, x: f64) -> Result<f64> {
        let p = self.point(C64::new(x, 0.0))?;
        Ok(self.e12(&p, &p).re)
    }

    /// R_{0,1}(z) = i·sgn(Im z)·κ_N(z, z̄), extended symmetrically to the
    /// lower half-plane; zero on ℝ.
    pub fn r01(&self, z: C64) -> Result<f64> {
        if z.im == 0.0 {
            return Ok(0.0);
        }
        let a = self.point(z)?;
        let b = self.point(z.conj())?;
        Ok((C64::new(0.0, z.im.signum()) * self.kappa_at(&a, &b)).re)
    }

    /// Pfaffian of the block matrix of kernel values.
    pub fn correlation(&self, pts: &PointConfig) -> Result<f64> {
        pts.validate()?;
        let (l, m) = (pts.reals.len(), pts.uppers.len());
        if l + 2 * m > self.params.n {
            return Err(Error::InvalidParams(format!(
                "correlation order l + 2m = {} exceeds N = {}",
                l + 2 * m,
                self.params.n
            )));
        }
        if l + m == 0 {
            return Ok(1.0);
        }
        let evals = pts
            .reals
            .iter()
            .map(|&x| C64::new(x, 0.0))
            .chain(pts.uppers.iter().copied())
            .map(|z| self.point(z))
            .collect::<Result<Vec<_>>>()?;
        let k = evals.len();
        let mut a = DMatrix::<C64>::zeros(2 * k, 2 * k);
        for i in 0..k {
            for j in i..k {
                let kv = self.matrix_at(&evals[i], &evals[j]);
                put_block(&mut a, i, j, &kv);
                if j != i {
                    put_block(&mut a, j, i, &kv.neg_transpose());
                }
            }
        }
        // the diagonal blocks are antisymmetric by construction
        for i in 0..k {
            a[(2 * i, 2 * i)] = ZERO;
            a[(2 * i + 1, 2 * i + 1)] = ZERO;
            a[(2 * i + 1, 2 * i)] = -a[(2 * i, 2 * i + 1)];
        }
        let pf = pfaffian(&a)?;
        if pf.im.abs() > 1e-9 * pf.re.abs().max(1.0) {
            return Err(Error::Residual(pf.im));
        }
        Ok(pf.re)
    }
}

fn put_block(a: &mut DMatrix<C64>, i: usize, j: usize, kv: &KernelValue2x2) {
    a[(2 * i, 2 * j)] = kv.e11;
    a[(2 * i, 2 * j + 1)] = kv.e12;
    a[(2 * i + 1, 2 * j)] = kv.e21;
    a[(2 * i + 1, 2 * j + 1)] = kv.e22;
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// κ_N(u, v).
pub fn kappa_n(p: &EnsembleParams, u: C64, v: C64) -> Result<C64> {
    FiniteKernel::new(*p)?.kappa(u, v)
}

/// K_N(u, v) with species dispatch on Im = 0.
pub fn matrix_kernel(p: &EnsembleParams, u: C64, v: C64) -> Result<KernelValue2x2> {
    FiniteKernel::new(*p)?.matrix(u, v)
}

/// R_{ℓ,m} at a point configuration.
pub fn correlation(p: &EnsembleParams, pts: &PointConfig) -> Result<f64> {
    FiniteKernel::new(*p)?.correlation(pts)
}

/// Pfaffian by skew-symmetric Gaussian elimination with partial pivoting.
pub fn pfaffian(a: &DMatrix<C64>) -> Result<C64> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::InvalidParams("Pfaffian needs a square matrix".into()));
    }
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    let norm = a.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut resid: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            resid = resid.max((a[(i, j)] + a[(j, i)]).norm());
        }
    }
    if resid > 1e-10 * norm.max(f64::MIN_POSITIVE) {
        return Err(Error::NotAntisymmetric(resid));
    }
    let mut m = a.clone();
    let mut pf = C64::new(1.0, 0.0);
    let mut k = 0;
    while k + 1 < n {
        let mut kp = k + 1;
        let mut best = m[(k + 1, k)].norm();
        for i in k + 2..n {
            let v = m[(i, k)].norm();
            if v > best {
                best = v;
                kp = i;
            }
        }
        if kp != k + 1 {
            m.swap_rows(k + 1, kp);
            m.swap_columns(k + 1, kp);
            pf = -pf;
        }
        let piv = m[(k, k + 1)];
        if piv.norm() == 0.0 {
            return Ok(ZERO);
        }
        pf *= piv;
        if k + 2 < n {
            let tau: Vec<C64> = (k + 2..n).map(|j| m[(k, j)] / piv).collect();
            let col: Vec<C64> = (k + 2..n).map(|i| m[(i, k + 1)]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    let upd = tau[ii] * col[jj] - col[ii] * tau[jj];
                    m[(i, j)] += upd;
                }
            }
        }
        k += 2;
    }
    Ok(pf)
}

/// Regions for expected root counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Region {
    /// real roots in [−1, 1]
    Inside,
    /// real roots with |x| > 1
    Outside,
    /// all real roots
    RealLine,
    /// real roots in [a, b]
    RealInterval(f64, f64),
    /// nonreal roots with |z| < r
    Disk(f64),
    /// all nonreal roots
    ComplexPlane,
    /// nonreal roots in the rectangle [re0, re1] × [im0, im1]
    Rect { re0: f64, re1: f64, im0: f64, im1: f64 },
}

fn adaptive() -> Adaptive {
    Adaptive::default().tol(1e-13, 1e-11)
}

fn checked(value: f64, err: f64, rel: f64) -> Result<f64> {
    if err > rel * value.abs().max(1e-12) {
        return Err(Error::Quadrature { value, err });
    }
    Ok(value)
}

impl FiniteKernel {
    fn real_integral(&self, a: f64, b: f64) -> (f64, f64) {
        let f = |x: f64| self.r10(x).unwrap_or(f64::NAN);
        adaptive().run(a, b, f)
    }

    fn real_tail(&self, a: f64) -> (f64, f64) {
        if self.params.s.is_infinite() && a >= 1.0 {
            return (0.0, 0.0);
        }
        let f = |x: f64| self.r10(x).unwrap_or(f64::NAN) + self.r10(-x).unwrap_or(f64::NAN);
        tail(&adaptive(), a, f)
    }

    /// ∫ R_{0,1} over the annulus r0 < |z| < r1 (both half-planes).
    fn complex_annulus(&self, r0: f64, r1: f64) -> (f64, f64) {
        let ring = |r: f64| -> f64 {
            let (v, _) = Adaptive::default()
                .tol(1e-14, 1e-11)
                .run(0.0, PI, |t: f64| self.r01(C64::from_polar(r, t)).unwrap_or(f64::NAN));
            2.0 * v * r
        };
        if r1.is_infinite() {
            tail(&adaptive(), r0, ring)
        } else {
            adaptive().run(r0, r1, ring)
        }
    }

    pub fn expected_counts(&self, region: Region) -> Result<f64> {
        let rel = 1e-6;
        match region {
            Region::Inside => {
                let (v, e) = self.real_integral(-1.0, 1.0);
                checked(v, e, rel)
            }
            Region::Outside => {
                let (v, e) = self.real_tail(1.0);
                checked(v, e, rel)
            }
            Region::RealLine => {
                let a = self.expected_counts(Region::Inside)?;
                let b = self.expected_counts(Region::Outside)?;
                Ok(a + b)
            }
            Region::RealInterval(a, b) => {
                if !(a < b) {
                    return Err(Error::InvalidParams(format!("empty interval [{a}, {b}]")));
                }
                let mut cuts = vec![a];
                for c in [-1.0, 1.0] {
                    if a < c && c < b {
                        cuts.push(c);
                    }
                }
                cuts.push(b);
                let mut total = 0.0;
                let mut err = 0.0;
                for w in cuts.windows(2) {
                    let (v, e) = if w[1].is_infinite() || w[0].is_infinite() {
                        one_sided_tail(self, w[0], w[1])
                    } else {
                        self.real_integral(w[0], w[1])
                    };
                    total += v;
                    err += e;
                }
                checked(total, err, rel)
            }
            Region::Disk(r) => {
                if !(r > 0.0) {
                    return Err(Error::InvalidParams(format!("disk radius {r} must be positive")));
                }
                let (v, e) = if r <= 1.0 {
                    self.complex_annulus(0.0, r)
                } else {
                    let (a, ea) = self.complex_annulus(0.0, 1.0);
                    let (b, eb) = self.complex_annulus(1.0, r);
                    (a + b, ea + eb)
                };
                checked(v, e, rel)
            }
            Region::ComplexPlane => {
                let (a, ea) = self.complex_annulus(0.0, 1.0);
                let (b, eb) = if self.params.s.is_infinite() {
                    (0.0, 0.0)
                } else {
                    self.complex_annulus(1.0, f64::INFINITY)
                };
                checked(a + b, ea + eb, rel)
            }
            Region::Rect { re0, re1, im0, im1 } => {
                if !(re0 < re1 && im0 < im1) {
                    return Err(Error::InvalidParams("empty rectangle".into()));
                }
                let ad = Adaptive::default().tol(1e-13, 1e-10);
                let mut inner_err = 0.0;
                let (v, e) = ad.run(im0, im1, |y: f64| {
                    let (v, e) = ad.run(re0, re1, |x: f64| self.r01(C64::new(x, y)).unwrap_or(f64::NAN));
                    inner_err += e;
                    v
                });
                checked(v, e + inner_err * 1e-3, rel)
            }
        }
    }
}

fn one_sided_tail(k: &FiniteKernel, a: f64, b: f64) -> (f64, f64) {
    let f = |x: f64| k.r10(x).unwrap_or(f64::NAN);
    if b.is_infinite() {
        tail(&adaptive(), a, f)
    } else {
        tail(&adaptive(), -b, |t| f(-t))
    }
}

pub fn expected_counts(p: &EnsembleParams, region: Region) -> Result<f64> {
    FiniteKernel::new(*p)?.expected_counts(region)
}

/// Exact Gamma sums for the expected number of real roots inside and
/// outside [−1, 1], even N only. Valid in log space to N of a few thousand.
pub fn expected_real_exact(n: usize, s: f64) -> Result<(f64, f64)> {
    let p = EnsembleParams::new(n, s)?;
    if p.is_odd() {
        return Err(Error::OddDimension(n));
    }
    let jj = p.j();
    let lr = |a: f64, b: f64| -> Result<f64> { Ok(ln_gamma_ratio(a, b)?.0) };
    // Γ(m+½)/m!, Γ(m+3/2)/m!, Γ(k+1)/Γ(k+5/2)
    let half: Vec<f64> = (0..jj)
        .map(|m| lr(m as f64 + 0.5, m as f64 + 1.0))
        .collect::<Result<_>>()?;
    let three_half: Vec<f64> = (0..jj)
        .map(|m| lr(m as f64 + 1.5, m as f64 + 1.0))
        .collect::<Result<_>>()?;
    let ck: Vec<f64> = (0..2 * jj)
        .map(|k| lr(k as f64 + 1.0, k as f64 + 2.5))
        .collect::<Result<_>>()?;
    let inf = s.is_infinite();
    let base = if inf { 0.0 } else { jj as f64 / s };
    let mut e_in = CompensatedSum::default();
    e_in.add(C64::new(base, 0.0));
    for n in 0..jj {
        let mut inner = CompensatedSum::default();
        for m in 0..=n {
            let f = if inf { 1.0 } else { (s + 2.0 * m as f64 + 1.0) / s };
            let v = f * (half[m] + half[n - m] + ck[n + m] + three_half[m]).exp();
            inner.add(C64::new(v, 0.0));
        }
        let shift = if inf { 0.0 } else { -2.0 / s };
        e_in.add(C64::new(shift + inner.value().re / PI, 0.0));
    }
    if inf {
        return Ok((e_in.value().re, 0.0));
    }
    // Γ(s−i)/Γ(s−i−½) and Γ(s−k−3/2)/Γ(s−k)
    let d: Vec<f64> = (0..jj)
        .map(|i| lr(s - i as f64, s - i as f64 - 0.5))
        .collect::<Result<_>>()?;
    let e: Vec<f64> = (0..2 * jj)
        .map(|k| lr(s - k as f64 - 1.5, s - k as f64))
        .collect::<Result<_>>()?;
    let mut e_out = CompensatedSum::default();
    e_out.add(C64::new(base, 0.0));
    for n in 0..jj {
        let mut inner = CompensatedSum::default();
        for i in 0..=n {
            let v = (three_half[i] + half[n - i] + d[i] + e[i + n]).exp();
            inner.add(C64::new(v, 0.0));
        }
        e_out.add(C64::new(2.0 / (PI * s) * inner.value().re, 0.0));
    }
    Ok((e_in.value().re, e_out.value().re))
}

/// Expected real counts inside and outside [−1, 1] by quadrature of R_{1,0}.
pub fn expected_real_quadrature(p: &EnsembleParams) -> Result<(f64, f64)> {
    let k = FiniteKernel::new(*p)?;
    Ok((k.expected_counts(Region::Inside)?, k.expected_counts(Region::Outside)?))
}

/// Finite-N kernel of the complex ensemble,
/// (1/π) w(z) w(w) Σ_{n<N} ((n+1)(s−n−1)/s) (z w̄)^n.
pub fn complex_kernel_n(n: usize, s: f64, z: C64, w: C64) -> C64 {
    let wz = weight(s, z.norm());
    let ww = weight(s, w.norm());
    if wz == 0.0 || ww == 0.0 {
        return ZERO;
    }
    let q = z * w.conj();
    let mut acc = CompensatedSum::default();
    let mut pw = C64::new(1.0, 0.0);
    for k in 0..n {
        let kf = k as f64;
        let f = if s.is_infinite() {
            kf + 1.0
        } else {
            (kf + 1.0) * (s - kf - 1.0) / s
        };
        acc.add(pw * f);
        pw *= q;
    }
    acc.value() * (wz * ww / PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polys::p_poly;
    use crate::volume::{gram_pf, monomial_basis};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn params_validation() {
        assert!(EnsembleParams::new(4, 4.0).is_err());
        assert!(EnsembleParams::new(0, 4.0).is_err());
        let p = EnsembleParams::new(4, 8.0).unwrap();
        assert_eq!(p.lambda, 0.5);
        assert_eq!(EnsembleParams::new(3, f64::INFINITY).unwrap().lambda, 0.0);
    }

    #[test]
    fn sum_k_examples() {
        assert_eq!(
            sum_k(1, 0.3, 0.2, -0.4, 1.1, c(0.3, 2.0), c(-5.0, 0.1)).unwrap(),
            c(1.0, 0.0)
        );
        // brute force from the coefficient formula
        let (a1, b1, a2, b2) = (0.3, -0.6, 1.2, 0.4);
        let (z, w) = (c(0.4, -0.7), c(-1.1, 0.25));
        let mut want = C64::new(0.0, 0.0);
        for n in 0..3 {
            let p = p_poly(n, a1, b1).unwrap();
            let q = p_poly(n, a2, b2).unwrap();
            for (i, pi) in p.coeffs.iter().enumerate() {
                for (j, qj) in q.coeffs.iter().enumerate() {
                    want += z.powi(i as i32) * w.powi(j as i32) * (pi * qj);
                }
            }
        }
        let got = sum_k(3, a1, b1, a2, b2, z, w).unwrap();
        assert!((got - want).norm() < 1e-12);
    }

    #[test]
    fn sum_k_at_origin_tends_to_gamma_quotient() {
        use crate::specfun::gamma;
        let (b1, b2) = (-0.8, -0.8);
        let lim = gamma(-1.0 - b1 - b2).unwrap() / (gamma(-b1).unwrap() * gamma(-b2).unwrap());
        let mut prev = f64::INFINITY;
        for n in [8, 32, 128, 512] {
            let v = sum_k(n, 0.0, b1, 0.0, b2, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
            let e = (v.re - lim).abs();
            assert!(e < prev, "N={n} err {e}");
            prev = e;
        }
    }

    #[test]
    fn kappa_two_and_antisymmetry() {
        let s = 5.5;
        let p = EnsembleParams::new(2, s).unwrap();
        for (u, v) in [(0.3, -0.8), (0.9, 0.1)] {
            let k = kappa_n(&p, c(u, 0.0), c(v, 0.0)).unwrap();
            let want = (s - 2.0) / (2.0 * s) * (v - u);
            assert!((k.re - want).abs() < 1e-14);
        }
        let p = EnsembleParams::new(5, 7.0).unwrap();
        let (u, v) = (c(0.3, 1.2), c(-1.4, 0.0));
        let a = kappa_n(&p, u, v).unwrap();
        let b = kappa_n(&p, v, u).unwrap();
        assert!((a + b).norm() < 1e-14);
    }

    #[test]
    fn kappa_matches_inverse_gram_matrix() {
        let (n, s) = (4, 6.5);
        let p = EnsembleParams::new(n, s).unwrap();
        let (u, _) = gram_pf(n, s, &monomial_basis(n)).unwrap();
        let um = DMatrix::from_fn(n, n, |i, j| u.entries[i][j]);
        let mu = um.try_inverse().unwrap();
        for (a, b) in [(c(0.3, 0.0), c(-0.6, 0.0)), (c(1.4, 0.5), c(-0.2, 2.0))] {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    acc += a.powi(i as i32) * b.powi(j as i32) * mu[(i, j)];
                }
            }
            let want = acc * (-2.0 * weight(s, a.norm()) * weight(s, b.norm()));
            let got = kappa_n(&p, a, b).unwrap();
            assert!((got - want).norm() < 1e-8 * want.norm().max(1.0), "{got} vs {want}");
        }
    }

    #[test]
    fn matrix_kernel_structure() {
        let p = EnsembleParams::new(4, 9.0).unwrap();
        let k = FiniteKernel::new(p).unwrap();
        let m = k.matrix(c(0.4, 0.0), c(0.4, 0.0)).unwrap();
        assert_eq!(m.e11.norm(), 0.0);
        assert!((m.e21 + m.e12).norm() < 1e-15);
        let (z, w) = (c(0.3, 0.2), c(0.1, -0.5));
        let m = k.matrix(z, w).unwrap();
        let want = C64::new(0.0, -1.0) * k.kappa(z, w.conj()).unwrap();
        assert!((m.e12 - want).norm() < 1e-13);
        // K(y, z) = −K(z, y)ᵀ
        let (y, z) = (c(-0.4, 0.0), c(0.2, 0.3));
        let a = k.matrix(y, z).unwrap();
        let b = k.matrix(z, y).unwrap().neg_transpose();
        for (x, y) in a.entries().iter().zip(b.entries().iter()) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn n2_intensity() {
        for s in [3.0, 5.0, 12.0] {
            let k = FiniteKernel::new(EnsembleParams::new(2, s).unwrap()).unwrap();
            for x in [-0.9, -0.2, 0.0, 0.5, 1.0] {
                let want = 0.25 + (s - 2.0) / (4.0 * s) * x * x;
                assert!((k.r10(x).unwrap() - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn n2_expectation_three_ways() {
        for s in [3.0, 5.0, 9.5] {
            let p = EnsembleParams::new(2, s).unwrap();
            let (ein, eout) = expected_real_exact(2, s).unwrap();
            let (qin, qout) = expected_real_quadrature(&p).unwrap();
            let closed = (2.0 * s - 1.0) / (3.0 * s);
            assert!((ein - closed).abs() < 1e-12);
            assert!((qin - closed).abs() < 1e-10);
            assert!((eout - qout).abs() < 1e-9, "{eout} vs {qout}");
            let cplx = expected_counts(&p, Region::ComplexPlane).unwrap();
            assert!((ein + eout + cplx - 2.0).abs() < 1e-6, "total {}", ein + eout + cplx);
        }
    }

    #[test]
    fn exact_sums_match_quadrature() {
        for (n, s) in [(4, 5.0), (4, 8.0), (6, 7.0), (6, f64::INFINITY)] {
            let p = EnsembleParams::new(n, s).unwrap();
            let (ein, eout) = expected_real_exact(n, s).unwrap();
            let (qin, qout) = expected_real_quadrature(&p).unwrap();
            assert!((ein - qin).abs() < 1e-9, "N={n} s={s}: {ein} vs {qin}");
            assert!((eout - qout).abs() < 1e-8, "N={n} s={s}: {eout} vs {qout}");
        }
        assert_eq!(expected_real_exact(4, f64::INFINITY).unwrap().1, 0.0);
    }

    #[test]
    fn normalization() {
        for n in [2usize, 3, 4, 5] {
            for s in [n as f64 + 1.0, 2.0 * n as f64, f64::INFINITY] {
                let p = EnsembleParams::new(n, s).unwrap();
                let k = FiniteKernel::new(p).unwrap();
                let real = k.expected_counts(Region::RealLine).unwrap();
                let cplx = k.expected_counts(Region::ComplexPlane).unwrap();
                assert!((real + cplx - n as f64).abs() < 1e-5, "N={n} s={s}: {}", real + cplx);
            }
        }
    }

    #[test]
    fn correlation_basics() {
        let p = EnsembleParams::new(4, 8.0).unwrap();
        let k = FiniteKernel::new(p).unwrap();
        let x = 0.37;
        let one = k
            .correlation(&PointConfig {
                reals: vec![x],
                uppers: vec![],
            })
            .unwrap();
        assert!((one - k.r10(x).unwrap()).abs() < 1e-15);
        let z = c(0.2, 0.6);
        let r = k
            .correlation(&PointConfig {
                reals: vec![],
                uppers: vec![z],
            })
            .unwrap();
        assert!((r - k.r01(z).unwrap()).abs() < 1e-14);
        assert!((k.r01(z).unwrap() - k.r01(z.conj()).unwrap()).abs() < 1e-14);
        assert!(k
            .correlation(&PointConfig {
                reals: vec![0.1, 0.2, 0.3],
                uppers: vec![z]
            })
            .is_err());
    }

    #[test]
    fn pair_correlation_integrates_to_factorial_moment() {
        // N = 2 has L ∈ {0, 2}, so E[L(L−1)] = E[L]; at s = ∞ all real roots lie in [−1, 1]
        let k = FiniteKernel::new(EnsembleParams::new(2, f64::INFINITY).unwrap()).unwrap();
        let ad = Adaptive::default().tol(1e-12, 1e-10);
        let r20 = |x: f64, y: f64| {
            k.correlation(&PointConfig {
                reals: vec![x, y],
                uppers: vec![],
            })
            .unwrap()
        };
        let (v, _) = ad.run(-1.0, 1.0, |x: f64| {
            ad.run(-1.0, x, |y| r20(x, y)).0 + ad.run(x, 1.0, |y| r20(x, y)).0
        });
        assert!((v - 2.0 / 3.0).abs() < 1e-8, "{v}");
    }

    #[test]
    fn intensities_nonnegative_and_vanish_at_axis() {
        for (n, s) in [(4, 5.0), (5, 10.0), (6, f64::INFINITY)] {
            let k = FiniteKernel::new(EnsembleParams::new(n, s).unwrap()).unwrap();
            for i in 0..41 {
                let x = -3.0 + 0.15 * i as f64;
                assert!(k.r10(x).unwrap() >= -1e-9);
                for y in [0.05, 0.4, 1.3] {
                    assert!(k.r01(c(x, y)).unwrap() >= -1e-9);
                }
            }
            let vals: Vec<f64> = [0.2, 0.1, 0.05].iter().map(|&y| k.r01(c(0.3, y)).unwrap()).collect();
            assert!(vals[0] > vals[1] && vals[1] > vals[2]);
        }
    }

    #[test]
    fn complex_correlation_conjugation_invariance() {
        let k = FiniteKernel::new(EnsembleParams::new(5, 7.0).unwrap()).unwrap();
        let base = PointConfig {
            reals: vec![0.3],
            uppers: vec![c(-0.2, 0.7)],
        };
        let v = k.correlation(&base).unwrap();
        // replacing z by its conjugate: evaluate the block matrix directly
        let evals = [k.point(c(0.3, 0.0)).unwrap(), k.point(c(-0.2, -0.7)).unwrap()];
        let mut a = DMatrix::<C64>::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                put_block(&mut a, i, j, &k.matrix_at(&evals[i], &evals[j]));
            }
        }
        let w = pfaffian(&a).unwrap();
        assert!((w.re - v).abs() < 1e-10, "{} vs {v}", w.re);
    }

    fn random_antisym(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<C64> {
        let mut a = DMatrix::<C64>::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let v = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                a[(i, j)] = v;
                a[(j, i)] = -v;
            }
        }
        a
    }

    #[test]
    fn pfaffian_identities() {
        let a = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(2.5, 1.0), c(-2.5, -1.0), c(0.0, 0.0)]);
        assert_eq!(pfaffian(&a).unwrap(), c(2.5, 1.0));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = random_antisym(6, &mut rng);
            let pf = pfaffian(&a).unwrap();
            let det = a.clone().determinant();
            assert!((pf * pf - det).norm() <= 1e-9 * det.norm());
            let b = random_antisym(4, &mut rng);
            let nm = DMatrix::from_fn(4, 4, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            let lhs = pfaffian(&(&nm * &b * nm.transpose())).unwrap();
            let rhs = pfaffian(&b).unwrap() * nm.determinant();
            assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm().max(1e-3));
        }
        assert!(matches!(
            pfaffian(&DMatrix::<C64>::zeros(3, 3)),
            Err(Error::OddDimension(3))
        ));
        let mut bad = random_antisym(4, &mut rng);
        bad[(0, 1)] += 1.0;
        assert!(matches!(pfaffian(&bad), Err(Error::NotAntisymmetric(_))));
    }

    #[test]
    fn complex_helper_kernel_inside_limit() {
        let z = c(0.8, 0.0);
        let lim = 1.0 / (PI * (1.0 - z * z.conj()).powi(2)).re;
        let mut prev = f64::INFINITY;
        for n in [8, 16, 32] {
            let k = complex_kernel_n(n, f64::INFINITY, z, z).re;
            let e = (k - lim).abs();
            assert!(e < prev);
            prev = e;
        }
    }

    proptest! {
        #[test]
        fn kappa_antisymmetric(ur in -2.0f64..2.0, ui in -2.0f64..2.0, vr in -2.0f64..2.0, vi in -2.0f64..2.0) {
            let p = EnsembleParams::new(6, 8.0).unwrap();
            let k = FiniteKernel::new(p).unwrap();
            let a = k.kappa(c(ur, ui), c(vr, vi)).unwrap();
            let b = k.kappa(c(vr, vi), c(ur, ui)).unwrap();
            prop_assert!((a + b).norm() <= 1e-14 * a.norm().max(1.0));
        }
    }
}
