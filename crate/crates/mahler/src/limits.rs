//! Limiting kernels of the real ensemble: the scaled kernels at non-real and
//! real points of the unit circle, the unscaled limits inside and outside the
//! disk, the K[A] assembly of a 2×2 kernel from one scalar function, the
//! asymptotic real-root counts, and a harness measuring finite-N agreement.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::KernelValue2x2;
use crate::quad::{rule, Adaptive};
use crate::specfun::{gamma_quotient, m_fn, m_prime, omega, unit_gl};

type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// ι(z) = i·sgn(Im z).
pub fn iota(z: C64) -> C64 {
    C64::new(0.0, sgn(z.im))
}

/// Where the limit is taken.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Regime {
    /// Scaled limit at ζ ∈ 𝕋∖{±1}.
    CircleComplex { zeta: C64 },
    /// Scaled limit at ξ = ±1.
    CircleReal { xi: f64 },
    /// Unscaled limit inside the open disk.
    InsideDisk,
    /// Unscaled limit outside the closed disk.
    OutsideDisk,
}

/// A limiting kernel: the regime, λ = lim N/s and c = lim (s − N).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitKernelSpec {
    pub regime: Regime,
    pub lambda: f64,
    /// Only meaningful outside the disk; may be infinite.
    pub c: f64,
}

impl LimitKernelSpec {
    pub fn circle_complex(zeta: C64, lambda: f64) -> Result<Self> {
        let s = LimitKernelSpec {
            regime: Regime::CircleComplex { zeta },
            lambda,
            c: f64::INFINITY,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn circle_real(xi: f64, lambda: f64) -> Result<Self> {
        let s = LimitKernelSpec {
            regime: Regime::CircleReal { xi },
            lambda,
            c: f64::INFINITY,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn inside(lambda: f64) -> Result<Self> {
        let s = LimitKernelSpec {
            regime: Regime::InsideDisk,
            lambda,
            c: f64::INFINITY,
        };
        s.validate()?;
        Ok(s)
    }

    /// Outside the disk. A finite c forces λ = 1; c = ∞ is approached along
    /// s = 2N, so λ = 1/2.
    pub fn outside(c: f64) -> Result<Self> {
        let s = LimitKernelSpec {
            regime: Regime::OutsideDisk,
            lambda: if c.is_finite() { 1.0 } else { 0.5 },
            c,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(Error::Domain(format!("lambda must lie in [0, 1], got {}", self.lambda)));
        }
        match self.regime {
            Regime::CircleComplex { zeta } => {
                if (zeta.norm() - 1.0).abs() > 1e-12 || zeta.im.abs() < 1e-12 {
                    return Err(Error::Domain(format!("zeta must lie on the circle off ±1, got {zeta}")));
                }
            }
            Regime::CircleReal { xi } => {
                if xi != 1.0 && xi != -1.0 {
                    return Err(Error::Domain(format!("xi must be ±1, got {xi}")));
                }
            }
            Regime::InsideDisk => {}
            Regime::OutsideDisk => {
                if self.c.is_nan() || self.c < 1.0 {
                    return Err(Error::Domain(format!("c must be at least 1, got {}", self.c)));
                }
            }
        }
        Ok(())
    }

    /// The finite-N exponent s used to approach this limit.
    pub fn s_for(&self, n: usize) -> f64 {
        let nf = n as f64;
        match self.regime {
            Regime::OutsideDisk => {
                if self.c.is_infinite() {
                    2.0 * nf
                } else {
                    nf + self.c
                }
            }
            _ => {
                if self.lambda == 0.0 {
                    f64::INFINITY
                } else if self.lambda == 1.0 {
                    nf + 1.0
                } else {
                    nf / self.lambda
                }
            }
        }
    }
}

/// K_ζ(z, w) = ω(z ζ̄) ω(w̄ ζ) (1/π) ∫₀¹ x(1 − λx) e^{(z ζ̄ + w̄ ζ)x} dx.
pub fn k_zeta(lambda: f64, zeta: C64, z: C64, w: C64) -> C64 {
    let a = z * zeta.conj();
    let b = w.conj() * zeta;
    let wt = omega(lambda, a) * omega(lambda, b);
    if wt == 0.0 {
        return ZERO;
    }
    let t = a + b;
    unit_gl(|x| (t * x).exp() * (x * (1.0 - lambda * x))) * (wt / PI)
}

/// κ_1(u, v); κ_ξ(u, v) = ξ κ_1(ξu, ξv).
fn kappa_one(lambda: f64, u: C64, v: C64) -> C64 {
    let wt = omega(lambda, u) * omega(lambda, v);
    if wt == 0.0 {
        return ZERO;
    }
    let g = unit_gl(|t| {
        let (a, b) = (u * t, v * t);
        (m_prime(a) * m_fn(b) - m_fn(a) * m_prime(b)) * (t * (1.0 - lambda * t))
    });
    g * (wt / 4.0)
}

/// κ_ξ(u, v) = ω(uξ) ω(vξ) (ξ/4) ∫₀¹ τ(1 − λτ)[M′(uξτ)M(vξτ) − M(uξτ)M′(vξτ)] dτ.
pub fn kappa_xi(lambda: f64, xi: f64, u: C64, v: C64) -> C64 {
    kappa_one(lambda, u * xi, v * xi) * xi
}

/// (1/4π) scaled intensity appearing in the comparison with the complex
/// ensemble: (ι(z)/4)[M′(z)M(z̄) − M(z)M′(z̄)].
pub fn compare_intensity(z: C64) -> C64 {
    let zb = z.conj();
    iota(z) * (m_prime(z) * m_fn(zb) - m_fn(z) * m_prime(zb)) * 0.25
}

/// Entries of a 2×2 kernel built from one scalar function A and its
/// derivatives (D on the left differentiates the first argument, on the
/// right the second).
pub trait ScalarKernel {
    fn a(&self, u: C64, v: C64) -> Result<C64>;
    fn da(&self, u: C64, v: C64) -> Result<C64>;
    fn ad(&self, u: C64, v: C64) -> Result<C64>;
    fn dad(&self, u: C64, v: C64) -> Result<C64>;
}

/// K[A](u, v) with species taken from Im = 0.
///
/// Real/real: [[DAD, −DA], [−AD, A + ½sgn(x − y)]]. This is the form that
/// satisfies K(x, y) = −K(y, x)ᵀ for antisymmetric A and agrees with the
/// finite-N kernels.
pub fn assemble_matrix<K: ScalarKernel + ?Sized>(k: &K, u: C64, v: C64) -> Result<KernelValue2x2> {
    let (ur, vr) = (u.im == 0.0, v.im == 0.0);
    match (ur, vr) {
        (true, true) => Ok(KernelValue2x2 {
            e11: k.dad(u, v)?,
            e12: -k.da(u, v)?,
            e21: -k.ad(u, v)?,
            e22: k.a(u, v)? + 0.5 * sgn(u.re - v.re),
        }),
        (false, true) => Ok(KernelValue2x2 {
            e11: k.dad(u, v)?,
            e12: -k.da(u, v)?,
            e21: iota(u) * k.dad(u.conj(), v)?,
            e22: -iota(u) * k.da(u.conj(), v)?,
        }),
        (true, false) => Ok(assemble_matrix(k, v, u)?.neg_transpose()),
        (false, false) => {
            let (iu, iv) = (iota(u), iota(v));
            Ok(KernelValue2x2 {
                e11: k.dad(u, v)?,
                e12: iv * k.dad(u, v.conj())?,
                e21: iu * k.dad(u.conj(), v)?,
                e22: iu * iv * k.dad(u.conj(), v.conj())?,
            })
        }
    }
}

/// The scalar kernel A_ξ at ξ = ±1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AXi {
    pub lambda: f64,
    pub xi: f64,
}

/// ∫₀^b ω(u) M(uτ) du and ∫₀^b ω(u) M′(uτ) du at the 96 unit nodes τ.
struct Antiderivs {
    f0: Vec<C64>,
    f1: Vec<C64>,
}

impl AXi {
    pub fn new(lambda: f64, xi: f64) -> Result<Self> {
        LimitKernelSpec::circle_real(xi, lambda)?;
        Ok(AXi { lambda, xi })
    }

    fn antiderivs(&self, b: f64) -> Antiderivs {
        let gl = rule(96);
        let lam = self.lambda;
        let mut f0 = Vec::with_capacity(96);
        let mut f1 = Vec::with_capacity(96);
        for &x in &gl.nodes {
            let t = 0.5 * (x + 1.0);
            let v0: C64 = gl.integrate(0.0, b, |u| m_fn(C64::new(u * t, 0.0)) * omega(lam, C64::new(u, 0.0)));
            let v1: C64 = gl.integrate(0.0, b, |u| m_prime(C64::new(u * t, 0.0)) * omega(lam, C64::new(u, 0.0)));
            f0.push(v0);
            f1.push(v1);
        }
        Antiderivs { f0, f1 }
    }

    /// (ω(v)/4) ∫₀¹ (1 − λu) M(vu) du.
    fn g(&self, v: C64) -> C64 {
        let w = omega(self.lambda, v);
        if w == 0.0 {
            return ZERO;
        }
        unit_gl(|u| m_fn(v * u) * (1.0 - self.lambda * u)) * (w / 4.0)
    }

    /// ∫₀^b g.
    fn g_int(&self, b: f64) -> C64 {
        rule(96).integrate(0.0, b, |v| self.g(C64::new(v, 0.0)))
    }

    /// ∫₀¹ τ(1 − λτ) h(k, τ) dτ over the unit nodes.
    fn tau_sum<F: FnMut(usize, f64) -> C64>(&self, mut h: F) -> C64 {
        let gl = rule(96);
        let mut acc = ZERO;
        for (k, (&x, &w)) in gl.nodes.iter().zip(&gl.weights).enumerate() {
            let t = 0.5 * (x + 1.0);
            acc += h(k, t) * (0.5 * w * t * (1.0 - self.lambda * t));
        }
        acc
    }

    fn a_one(&self, a: f64, b: f64) -> C64 {
        let (fa, fb) = (self.antiderivs(a), self.antiderivs(b));
        let boxed = self.tau_sum(|k, _| fa.f1[k] * fb.f0[k] - fa.f0[k] * fb.f1[k]) * 0.25;
        boxed + self.g_int(b) - self.g_int(a)
    }

    fn da_one(&self, a: C64, b: f64) -> C64 {
        let fb = self.antiderivs(b);
        let w = omega(self.lambda, a);
        let part = if w == 0.0 {
            ZERO
        } else {
            self.tau_sum(|k, t| m_prime(a * t) * fb.f0[k] - m_fn(a * t) * fb.f1[k]) * (0.25 * w)
        };
        part - self.g(a)
    }

    fn ad_one(&self, a: f64, b: C64) -> C64 {
        let fa = self.antiderivs(a);
        let w = omega(self.lambda, b);
        let part = if w == 0.0 {
            ZERO
        } else {
            self.tau_sum(|k, t| fa.f1[k] * m_fn(b * t) - fa.f0[k] * m_prime(b * t)) * (0.25 * w)
        };
        part + self.g(b)
    }

    /// The simplified form valid for aξ, bξ < 0:
    /// (ξ/4)∫₀¹ ((1 − λτ)/τ)(I′(aξτ)I(bξτ) − I(aξτ)I′(bξτ)) dτ, I = 2z(M′ − M).
    pub fn a_iform(&self, a: f64, b: f64) -> Result<f64> {
        let (a1, b1) = (a * self.xi, b * self.xi);
        if a1 >= 0.0 || b1 >= 0.0 {
            return Err(Error::Domain(format!("I-form needs a·xi, b·xi < 0, got ({a1}, {b1})")));
        }
        let i_fn = |z: C64| (m_prime(z) - m_fn(z)) * z * 2.0;
        let v = unit_gl(|t| {
            let (x, y) = (C64::new(a1 * t, 0.0), C64::new(b1 * t, 0.0));
            (m_fn(x) * i_fn(y) - i_fn(x) * m_fn(y)) * ((1.0 - self.lambda * t) / t)
        });
        Ok(v.re * 0.25 * self.xi)
    }
}

fn need_real(x: C64, what: &str) -> Result<f64> {
    if x.im != 0.0 {
        return Err(Error::Domain(format!("{what} needs a real argument, got {x}")));
    }
    Ok(x.re)
}

impl ScalarKernel for AXi {
    fn a(&self, u: C64, v: C64) -> Result<C64> {
        let (a, b) = (need_real(u, "A_xi")?, need_real(v, "A_xi")?);
        Ok(self.a_one(a * self.xi, b * self.xi) * self.xi)
    }

    fn da(&self, u: C64, v: C64) -> Result<C64> {
        let b = need_real(v, "DA_xi")?;
        Ok(self.da_one(u * self.xi, b * self.xi))
    }

    fn ad(&self, u: C64, v: C64) -> Result<C64> {
        let a = need_real(u, "A_xi D")?;
        Ok(self.ad_one(a * self.xi, v * self.xi))
    }

    fn dad(&self, u: C64, v: C64) -> Result<C64> {
        Ok(kappa_xi(self.lambda, self.xi, u, v))
    }
}

/// A_ξ(a, b) for real a, b.
pub fn a_xi(lambda: f64, xi: f64, a: f64, b: f64) -> Result<f64> {
    Ok(AXi::new(lambda, xi)?.a(C64::new(a, 0.0), C64::new(b, 0.0))?.re)
}

/// √(−τ) on 𝕋 with the branch cut at τ = 1: e^{i(θ−π)/2} for τ = e^{iθ},
/// θ ∈ (0, 2π).
pub fn sqrt_neg_tau(theta: f64) -> C64 {
    C64::from_polar(1.0, 0.5 * (theta - PI))
}

/// Symmetric partial sum −(2/π) Σ_{|m| ≤ M} τ^m/(2m − 1) of the Fourier series
/// defining the branch of √(−τ), plus the leading estimate of both tails
/// (τ^{M+1}/((2M+1)(1 − τ)) and its mirror), which lifts the O(1/M) error of
/// the raw partial sum to O(1/M²). Requires τ ≠ 1.
pub fn sqrt_neg_tau_series(tau: C64, terms: usize) -> C64 {
    let mut acc = ZERO;
    let mut pos = C64::new(1.0, 0.0);
    let mut neg = C64::new(1.0, 0.0);
    let tb = tau.inv();
    acc += pos / -1.0;
    for m in 1..=terms as i64 {
        pos *= tau;
        neg *= tb;
        acc += pos / (2 * m - 1) as f64 + neg / (-2 * m - 1) as f64;
    }
    let one = C64::new(1.0, 0.0);
    let mf = terms as f64;
    acc += pos * tau / ((2.0 * mf + 1.0) * (one - tau)) - neg * tb / ((2.0 * mf + 3.0) * (one - tb));
    acc * (-2.0 / PI)
}

/// The scalar kernel inside the disk,
/// A_𝔻(u, v) = (1/4π) ∫_𝕋 (v√(−τ) − u√(−τ̄)) |dτ| / ((1 − u²τ̄)^{1/2}(1 − v²τ)^{1/2}).
#[derive(Debug, Clone, Copy, Default)]
pub struct ADisk;

#[derive(Clone, Copy)]
enum DiskPart {
    A,
    Da,
    Ad,
    Dad,
}

impl ADisk {
    fn eval(&self, u: C64, v: C64, part: DiskPart) -> Result<C64> {
        if u.norm() >= 1.0 || v.norm() >= 1.0 {
            return Err(Error::Domain(format!("A_D needs |u|, |v| < 1, got {u}, {v}")));
        }
        let (u2, v2) = (u * u, v * v);
        let ad = Adaptive::with_order(32).tol(1e-15, 1e-13);
        let (val, _) = ad.run(0.0, 2.0 * PI, |th| {
            let tau = C64::from_polar(1.0, th);
            let sq = sqrt_neg_tau(th);
            let sqb = sq.conj();
            let p = C64::new(1.0, 0.0) - u2 * tau.conj();
            let q = C64::new(1.0, 0.0) - v2 * tau;
            let f = p.sqrt().inv();
            let g = q.sqrt().inv();
            let f_u = u * tau.conj() * f / p;
            let g_v = v * tau * g / q;
            let h = v * sq - u * sqb;
            match part {
                DiskPart::A => h * f * g,
                DiskPart::Da => -sqb * f * g + h * f_u * g,
                DiskPart::Ad => sq * f * g + h * f * g_v,
                DiskPart::Dad => -sqb * f * g_v + sq * f_u * g + h * f_u * g_v,
            }
        });
        Ok(val / (4.0 * PI))
    }
}

impl ScalarKernel for ADisk {
    fn a(&self, u: C64, v: C64) -> Result<C64> {
        self.eval(u, v, DiskPart::A)
    }
    fn da(&self, u: C64, v: C64) -> Result<C64> {
        self.eval(u, v, DiskPart::Da)
    }
    fn ad(&self, u: C64, v: C64) -> Result<C64> {
        self.eval(u, v, DiskPart::Ad)
    }
    fn dad(&self, u: C64, v: C64) -> Result<C64> {
        self.eval(u, v, DiskPart::Dad)
    }
}

/// A_𝔻(u, v).
pub fn a_disk(u: C64, v: C64) -> Result<C64> {
    ADisk.a(u, v)
}

/// √(z² − 1) holomorphic off [−1, 1]; negative on (−∞, −1).
pub fn sqrt_branch(z: C64) -> C64 {
    z * (C64::new(1.0, 0.0) - (z * z).inv()).sqrt()
}

fn outside_check(u: C64) -> Result<()> {
    if u.norm() <= 1.0 {
        return Err(Error::Domain(format!("need |u| > 1, got {u}")));
    }
    Ok(())
}

/// B(u, v) without the 1/(√(u²−1)√(v²−1)) factor.
fn b_core(c: f64, u: C64, v: C64) -> C64 {
    if c.is_infinite() {
        return ZERO;
    }
    let q = u * v - 1.0;
    let lead = (q.inv() + c) * (u * v).norm().powf(-c) / PI;
    lead * (v - u) / q
}

/// B(u, v) = (1/π)[c + 1/(uv − 1)] |uv|^{−c} (v − u) / ((uv − 1)√(u²−1)√(v²−1)).
pub fn b_outside(c: f64, u: C64, v: C64) -> Result<C64> {
    outside_check(u)?;
    outside_check(v)?;
    Ok(b_core(c, u, v) / (sqrt_branch(u) * sqrt_branch(v)))
}

/// Panels covering [p0, p0 + 64] with geometrically growing widths.
fn tail_panels(p0: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let (mut lo, mut w) = (p0, 0.5);
    while lo < p0 + 64.0 {
        out.push((lo, lo + w));
        lo += w;
        w *= 2.0;
    }
    out
}

/// ∫_{P}^∞ f(p) dp for integrands decaying at least like e^{−p}.
fn cosh_tail<T: crate::quad::Scalar, F: FnMut(f64) -> T>(p0: f64, mut f: F) -> T {
    let gl = rule(32);
    let mut acc = T::default();
    for (a, b) in tail_panels(p0) {
        acc = acc + gl.integrate(a, b, &mut f);
    }
    acc
}

/// The scalar kernel outside the disk for c = lim (s − N).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AOutside {
    pub c: f64,
}

impl AOutside {
    pub fn new(c: f64) -> Result<Self> {
        LimitKernelSpec::outside(c)?;
        Ok(AOutside { c })
    }

    /// Γ((c+1)/2) / (√π Γ(c/2)).
    fn kc(&self) -> Result<f64> {
        Ok(gamma_quotient(0.5 * (self.c + 1.0), 0.5 * self.c)? / PI.sqrt())
    }

    /// ∫_{sgn(x)∞}^x du / (|u|^c √(u²−1)).
    fn h(&self, x: f64) -> f64 {
        let c = self.c;
        -cosh_tail(x.abs().acosh(), |p: f64| p.cosh().powf(-c))
    }

    fn real_outside(&self, x: C64) -> Result<f64> {
        let x = need_real(x, "A_O")?;
        if x.abs() <= 1.0 {
            return Err(Error::Domain(format!("A_O needs |x| > 1, got {x}")));
        }
        Ok(x)
    }

    /// ∫_{sgn(y)∞}^y B(u, v) dv for any u outside the disk.
    fn b_int_second(&self, u: C64, y: f64) -> C64 {
        let sy = sgn(y);
        let c = self.c;
        -cosh_tail(y.abs().acosh(), |q: f64| b_core(c, u, C64::new(sy * q.cosh(), 0.0))) / sqrt_branch(u)
    }
}

impl ScalarKernel for AOutside {
    fn a(&self, u: C64, v: C64) -> Result<C64> {
        let (x, y) = (self.real_outside(u)?, self.real_outside(v)?);
        if self.c.is_infinite() {
            return Ok(ZERO);
        }
        let (sx, sy, c) = (sgn(x), sgn(y), self.c);
        let q0 = y.abs().acosh();
        let boxed = cosh_tail(x.abs().acosh(), |p: f64| {
            let uu = C64::new(sx * p.cosh(), 0.0);
            cosh_tail(q0, |q: f64| b_core(c, uu, C64::new(sy * q.cosh(), 0.0)))
        });
        let edge = self.kc()? * (sx * self.h(y) - sy * self.h(x));
        Ok(boxed + edge)
    }

    fn da(&self, u: C64, v: C64) -> Result<C64> {
        outside_check(u)?;
        let y = self.real_outside(v)?;
        if self.c.is_infinite() {
            return Ok(ZERO);
        }
        let edge = sgn(y) * self.kc()? * u.norm().powf(-self.c);
        Ok(self.b_int_second(u, y) - edge / sqrt_branch(u))
    }

    fn ad(&self, u: C64, v: C64) -> Result<C64> {
        let x = self.real_outside(u)?;
        outside_check(v)?;
        if self.c.is_infinite() {
            return Ok(ZERO);
        }
        // B(u, v) = −B(v, u)
        let edge = sgn(x) * self.kc()? * v.norm().powf(-self.c);
        Ok(-self.b_int_second(v, x) + edge / sqrt_branch(v))
    }

    fn dad(&self, u: C64, v: C64) -> Result<C64> {
        b_outside(self.c, u, v)
    }
}

/// A_𝕆(x, y) for real |x|, |y| > 1; identically zero when c = ∞.
pub fn a_outside(c: f64, x: f64, y: f64) -> Result<f64> {
    Ok(AOutside::new(c)?.a(C64::new(x, 0.0), C64::new(y, 0.0))?.re)
}

/// The limiting 2×2 kernel of a regime at (u, v).
pub fn limit_matrix(spec: &LimitKernelSpec, u: C64, v: C64) -> Result<KernelValue2x2> {
    spec.validate()?;
    match spec.regime {
        Regime::CircleComplex { zeta } => Ok(KernelValue2x2 {
            e11: ZERO,
            e12: k_zeta(spec.lambda, zeta, u, v),
            e21: -k_zeta(spec.lambda, zeta, v, u),
            e22: ZERO,
        }),
        Regime::CircleReal { xi } => assemble_matrix(&AXi::new(spec.lambda, xi)?, u, v),
        Regime::InsideDisk => assemble_matrix(&ADisk, u, v),
        Regime::OutsideDisk => assemble_matrix(&AOutside::new(spec.c)?, u, v),
    }
}

/// Intensity of complex roots in the limit, the (1,2) entry at (z, z);
/// zero on the real axis.
pub fn limit_intensity(spec: &LimitKernelSpec, z: C64) -> Result<f64> {
    if z.im == 0.0 {
        spec.validate()?;
        return Ok(0.0);
    }
    Ok(limit_matrix(spec, z, z)?.e12.re)
}

/// Intensity of real roots in the limit at x; not defined for the
/// circle_complex regime, whose anchor is off the real axis.
pub fn limit_real_intensity(spec: &LimitKernelSpec, x: f64) -> Result<f64> {
    if let Regime::CircleComplex { .. } = spec.regime {
        return Err(Error::Domain("no real roots near a non-real anchor".into()));
    }
    let z = C64::new(x, 0.0);
    Ok(limit_matrix(spec, z, z)?.e12.re)
}

/// Leading-order expected real-root counts and the regime of E[N_out].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticCounts {
    /// (1/π) log N.
    pub e_in: f64,
    /// −(1/π)(√(N(2s − N))/s) log(1 − N/s).
    pub e_out: f64,
    /// α in s = N + N^{1−α}, clamped to [0, 1]; the leading term of E[N_out]
    /// is (α/π) log N.
    pub alpha: f64,
    pub regime: OutsideCountRegime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutsideCountRegime {
    /// N/s bounded away from 1: E[N_out] = O(√(N/s)).
    Bounded,
    /// s = N + N^{1−α} with 0 < α < 1.
    Intermediate,
    /// s − N bounded: E[N_out] ≈ (1/π) log N, total ≈ (2/π) log N.
    Critical,
}

/// Leading terms of E[N_in] and E[N_out].
pub fn asymptotic_real_counts(n: usize, s: f64) -> Result<AsymptoticCounts> {
    let nf = n as f64;
    if n == 0 || s.is_nan() || s <= nf {
        return Err(Error::Domain(format!("need s > N = {n}, got {s}")));
    }
    let e_in = nf.ln() / PI;
    if s.is_infinite() {
        return Ok(AsymptoticCounts {
            e_in,
            e_out: 0.0,
            alpha: 0.0,
            regime: OutsideCountRegime::Bounded,
        });
    }
    let r = nf / s;
    let e_out = -(nf * (2.0 * s - nf)).sqrt() / s * (-r).ln_1p() / PI;
    let alpha = if n > 1 {
        (1.0 - (s - nf).ln() / nf.ln()).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let regime = if s - nf <= 1.0 + 1e-12 || alpha >= 1.0 {
        OutsideCountRegime::Critical
    } else if r <= 0.5 || alpha <= 0.0 {
        OutsideCountRegime::Bounded
    } else {
        OutsideCountRegime::Intermediate
    };
    Ok(AsymptoticCounts {
        e_in,
        e_out,
        alpha,
        regime,
    })
}

/// Sup-norm errors of one finite-N quantity against its limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceSeries {
    pub label: String,
    pub n: Vec<usize>,
    pub sup_error: Vec<f64>,
}

impl ConvergenceSeries {
    pub fn strictly_decreasing(&self) -> bool {
        self.sup_error.windows(2).all(|w| w[1] < w[0])
    }
}

/// All series measured for one regime, with the grid they were measured on
/// (rows re u, im u, re v, im v).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub regime: String,
    pub spec: Option<LimitKernelSpec>,
    pub grid: Vec<[f64; 4]>,
    pub series: Vec<ConvergenceSeries>,
}

impl ConvergenceReport {
    pub fn strictly_decreasing(&self) -> bool {
        self.series.iter().all(ConvergenceSeries::strictly_decreasing)
    }
}

fn grid_rows(grid: &[(C64, C64)]) -> Vec<[f64; 4]> {
    grid.iter().map(|(u, v)| [u.re, u.im, v.re, v.im]).collect()
}

fn check_n_list(n_list: &[usize]) -> Result<()> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParams("N list must be non-empty and increasing".into()));
    }
    if n_list[0] < 2 || *n_list.last().unwrap() > 64 {
        return Err(Error::InvalidParams("N list entries must lie in [2, 64]".into()));
    }
    Ok(())
}

/// Collects per-N error vectors (one slot per label) into series.
struct SeriesBuilder {
    labels: Vec<String>,
    n: Vec<usize>,
    errs: Vec<Vec<f64>>,
}

impl SeriesBuilder {
    fn new(labels: &[&str]) -> Self {
        SeriesBuilder {
            labels: labels.iter().map(|s| s.to_string()).collect(),
            n: vec![],
            errs: vec![vec![]; labels.len()],
        }
    }

    fn push(&mut self, n: usize, errs: &[f64]) {
        self.n.push(n);
        for (slot, e) in self.errs.iter_mut().zip(errs) {
            slot.push(*e);
        }
    }

    fn finish(self) -> Vec<ConvergenceSeries> {
        let n = self.n;
        self.labels
            .into_iter()
            .zip(self.errs)
            .map(|(label, sup_error)| ConvergenceSeries {
                label,
                n: n.clone(),
                sup_error,
            })
            .collect()
    }
}

fn max_into(acc: &mut [f64], vals: [f64; 4]) {
    for (a, v) in acc.iter_mut().zip(vals) {
        *a = a.max(v);
    }
}

fn entry_errors(a: &KernelValue2x2, b: &KernelValue2x2) -> [f64; 4] {
    [
        (a.e11 - b.e11).norm(),
        (a.e12 - b.e12).norm(),
        (a.e21 - b.e21).norm(),
        (a.e22 - b.e22).norm(),
    ]
}

fn scale_entries(m: &KernelValue2x2, f: [f64; 4]) -> KernelValue2x2 {
    KernelValue2x2 {
        e11: m.e11 * f[0],
        e12: m.e12 * f[1],
        e21: m.e21 * f[2],
        e22: m.e22 * f[3],
    }
}

const ENTRY_LABELS: [&str; 4] = ["(1,1)", "(1,2)", "(2,1)", "(2,2)"];

fn finite_kernel(n: usize, s: f64) -> Result<crate::kernel::FiniteKernel> {
    crate::kernel::FiniteKernel::new(crate::kernel::EnsembleParams::new(n, s)?)
}

/// Finite-N against limit for one of the four kernel regimes.
///
/// * circle_complex: N^{−2}K_N(ζ + z/N, ζ + w/N) against [[0, K_ζ(z,w)], [−K_ζ(w,z), 0]].
/// * circle_real: N^{−2}κ_N(ξ + u/N, ξ + v/N) against κ_ξ, and the species-scaled
///   matrix kernel against K[A_ξ].
/// * inside: K_N(u, v) against K[A_𝔻], and the complex-ensemble kernel against
///   (1/π)(1 − u v̄)^{−2}.
/// * outside: the normalised κ_N against its limit, the phase-corrected K̂_N
///   against K[A_𝕆], and the normalised complex-ensemble kernel.
pub fn convergence_report(spec: &LimitKernelSpec, grid: &[(C64, C64)], n_list: &[usize]) -> Result<ConvergenceReport> {
    spec.validate()?;
    check_n_list(n_list)?;
    let series = match spec.regime {
        Regime::CircleComplex { zeta } => circle_complex_series(spec, zeta, grid, n_list)?,
        Regime::CircleReal { xi } => circle_real_series(spec, xi, grid, n_list)?,
        Regime::InsideDisk => inside_series(spec, grid, n_list)?,
        Regime::OutsideDisk => outside_series(spec, grid, n_list)?,
    };
    let regime = match spec.regime {
        Regime::CircleComplex { .. } => "circle_complex",
        Regime::CircleReal { .. } => "circle_real",
        Regime::InsideDisk => "inside_disk",
        Regime::OutsideDisk => "outside_disk",
    };
    Ok(ConvergenceReport {
        regime: regime.into(),
        spec: Some(*spec),
        grid: grid_rows(grid),
        series,
    })
}

fn circle_complex_series(
    spec: &LimitKernelSpec,
    zeta: C64,
    grid: &[(C64, C64)],
    n_list: &[usize],
) -> Result<Vec<ConvergenceSeries>> {
    let lam = spec.lambda;
    let limits: Vec<KernelValue2x2> = grid
        .iter()
        .map(|&(z, w)| KernelValue2x2 {
            e11: ZERO,
            e12: k_zeta(lam, zeta, z, w),
            e21: -k_zeta(lam, zeta, w, z),
            e22: ZERO,
        })
        .collect();
    let mut sb = SeriesBuilder::new(&[
        "(1,1) -> 0",
        "(1,2) -> K_zeta(z,w)",
        "(2,1) -> -K_zeta(w,z)",
        "(2,2) -> 0",
    ]);
    for &n in n_list {
        let k = finite_kernel(n, spec.s_for(n))?;
        let nf = n as f64;
        let mut acc = [0.0; 4];
        for (&(z, w), lim) in grid.iter().zip(&limits) {
            let m = k.matrix(zeta + z / nf, zeta + w / nf)?;
            let sm = scale_entries(&m, [1.0 / (nf * nf); 4]);
            max_into(&mut acc, entry_errors(&sm, lim));
        }
        sb.push(n, &acc);
    }
    Ok(sb.finish())
}

/// Powers of 1/N attached to each entry at ±1, by species of (u, v).
fn species_scaling(u: C64, v: C64, nf: f64) -> [f64; 4] {
    let (a, b) = (1.0 / nf, 1.0 / (nf * nf));
    match (u.im == 0.0, v.im == 0.0) {
        (true, true) => [b, a, a, 1.0],
        (true, false) => [b, b, a, a],
        (false, true) => [b, a, b, a],
        (false, false) => [b; 4],
    }
}

fn circle_real_series(
    spec: &LimitKernelSpec,
    xi: f64,
    grid: &[(C64, C64)],
    n_list: &[usize],
) -> Result<Vec<ConvergenceSeries>> {
    let ax = AXi::new(spec.lambda, xi)?;
    let kap: Vec<C64> = grid.iter().map(|&(u, v)| kappa_xi(spec.lambda, xi, u, v)).collect();
    let mats = grid
        .iter()
        .map(|&(u, v)| assemble_matrix(&ax, u, v))
        .collect::<Result<Vec<_>>>()?;
    let labels: Vec<String> = std::iter::once("kappa_N -> kappa_xi".to_string())
        .chain(ENTRY_LABELS.iter().map(|e| format!("{e} -> K[A_xi]")))
        .collect();
    let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
    let mut sb = SeriesBuilder::new(&labels);
    for &n in n_list {
        let k = finite_kernel(n, spec.s_for(n))?;
        let nf = n as f64;
        let mut ek = 0.0f64;
        let mut acc = [0.0; 4];
        for (i, &(u, v)) in grid.iter().enumerate() {
            let (pu, pv) = (k.point(xi + u / nf)?, k.point(xi + v / nf)?);
            ek = ek.max((k.kappa_at(&pu, &pv) / (nf * nf) - kap[i]).norm());
            let m = scale_entries(&k.matrix_at(&pu, &pv), species_scaling(u, v, nf));
            max_into(&mut acc, entry_errors(&m, &mats[i]));
        }
        sb.push(n, &[ek, acc[0], acc[1], acc[2], acc[3]]);
    }
    Ok(sb.finish())
}

fn inside_series(spec: &LimitKernelSpec, grid: &[(C64, C64)], n_list: &[usize]) -> Result<Vec<ConvergenceSeries>> {
    let mats = grid
        .iter()
        .map(|&(u, v)| assemble_matrix(&ADisk, u, v))
        .collect::<Result<Vec<_>>>()?;
    let labels: Vec<String> = ENTRY_LABELS
        .iter()
        .map(|e| format!("{e} -> K[A_D]"))
        .chain(std::iter::once(
            "complex ensemble K_N -> (1/pi)(1 - u conj v)^-2".to_string(),
        ))
        .collect();
    let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
    let mut sb = SeriesBuilder::new(&labels);
    for &n in n_list {
        let s = spec.s_for(n);
        let k = finite_kernel(n, s)?;
        let mut acc = [0.0; 4];
        let mut ec = 0.0f64;
        for (i, &(u, v)) in grid.iter().enumerate() {
            max_into(&mut acc, entry_errors(&k.matrix(u, v)?, &mats[i]));
            let lim = (C64::new(1.0, 0.0) - u * v.conj()).powi(-2) / PI;
            ec = ec.max((crate::kernel::complex_kernel_n(n, s, u, v) - lim).norm());
        }
        sb.push(n, &[acc[0], acc[1], acc[2], acc[3], ec]);
    }
    Ok(sb.finish())
}

fn outside_series(spec: &LimitKernelSpec, grid: &[(C64, C64)], n_list: &[usize]) -> Result<Vec<ConvergenceSeries>> {
    let c = spec.c;
    let lam = spec.lambda;
    let ao = AOutside::new(c)?;
    let cinv = if c.is_infinite() { 0.0 } else { 1.0 / c };
    let mats = grid
        .iter()
        .map(|&(u, v)| assemble_matrix(&ao, u, v))
        .collect::<Result<Vec<_>>>()?;
    let dsn: Vec<C64> = grid
        .iter()
        .map(|&(u, v)| {
            let q = u * v - 1.0;
            (q.inv() * cinv + 1.0) * (lam / PI) * (v - u) / (q * sqrt_branch(u) * sqrt_branch(v))
        })
        .collect();
    let labels: Vec<String> = std::iter::once("|uv|^s (uv)^-N kappa_N/(s-N) -> DSN limit".to_string())
        .chain(
            ENTRY_LABELS
                .iter()
                .map(|e| format!("{e} of phase-corrected K_N -> K[A_O]")),
        )
        .chain(std::iter::once(
            "complex ensemble normalised K_N -> outside limit".to_string(),
        ))
        .collect();
    let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
    let mut sb = SeriesBuilder::new(&labels);
    for &n in n_list {
        let s = spec.s_for(n);
        let k = finite_kernel(n, s)?;
        let ni = n as i32;
        let mut e_dsn = 0.0f64;
        let mut acc = [0.0; 4];
        let mut ec = 0.0f64;
        for (i, &(u, v)) in grid.iter().enumerate() {
            let m = k.matrix(u, v)?;
            let uv = u * v;
            let norm = C64::from(uv.norm().powf(s)) / uv.powi(ni) / (s - n as f64);
            e_dsn = e_dsn.max((m.e11 * norm - dsn[i]).norm());
            let ph = |a: C64, b: C64| C64::from((a * b).norm()).powi(ni) / (a * b).powi(ni);
            let hat = KernelValue2x2 {
                e11: m.e11 * ph(u, v),
                e12: m.e12 * ph(u, v.conj()),
                e21: m.e21 * ph(u.conj(), v),
                e22: m.e22 * ph(u.conj(), v.conj()),
            };
            max_into(&mut acc, entry_errors(&hat, &mats[i]));
            let q = u * v.conj();
            let lim = (q - 1.0).inv() * ((q - 1.0).inv() * cinv + 1.0) * (lam / PI);
            let kn = crate::kernel::complex_kernel_n(n, s, u, v);
            let scaled = kn * C64::from(q.norm().powf(s)) / q.powi(ni) / (s - n as f64);
            ec = ec.max((scaled - lim).norm());
        }
        sb.push(n, &[e_dsn, acc[0], acc[1], acc[2], acc[3], ec]);
    }
    Ok(sb.finish())
}

/// Parameters (α1, β1, α2, β2) of a polynomial sum K_N^{α1,β1,α2,β2}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumParams {
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
}

/// Limit of K_N(0, 0) when β1 + β2 + 1 < 0: Γ(−β1−β2−1)/(Γ(−β1)Γ(−β2)).
pub fn sum_limit_at_origin(p: &SumParams) -> Result<f64> {
    let e = p.b1 + p.b2 + 1.0;
    if e >= 0.0 {
        return Err(Error::InfiniteValue(format!(
            "K_N(0,0) diverges when b1 + b2 + 1 = {e} >= 0"
        )));
    }
    Ok(crate::specfun::gamma(-e)? / (crate::specfun::gamma(-p.b1)? * crate::specfun::gamma(-p.b2)?))
}

/// lim K_N(z, w) inside the disk when β1 + β2 + 1 < 0:
/// (1/2π)∫_𝕋 Λ(ζ)|dζ| / ((1 − z ζ̄)^{1+α1}(1 − wζ)^{1+α2}).
pub fn sum_limit_inside(p: &SumParams, z: C64, w: C64) -> Result<C64> {
    if z.norm() >= 1.0 || w.norm() >= 1.0 {
        return Err(Error::Domain("sum limit inside needs |z|, |w| < 1".into()));
    }
    let one = C64::new(1.0, 0.0);
    let mut fail = None;
    let ad = Adaptive::with_order(32).tol(1e-14, 1e-12);
    let (v, _) = ad.run(0.0, 2.0 * PI, |th| {
        let zeta = C64::from_polar(1.0, th);
        match crate::specfun::lambda_weight(p.b1, p.b2, zeta) {
            Ok(l) => l * (one - z * zeta.conj()).powf(-1.0 - p.a1) * (one - w * zeta).powf(-1.0 - p.a2),
            Err(e) => {
                fail.get_or_insert(e);
                ZERO
            }
        }
    });
    if let Some(e) = fail {
        return Err(e);
    }
    Ok(v / (2.0 * PI))
}

/// lim K_N(z, w)/K_N(0, 0) inside the disk when β1 + β2 + 1 ≥ 0.
pub fn sum_ratio_limit_inside(p: &SumParams, z: C64, w: C64) -> C64 {
    let one = C64::new(1.0, 0.0);
    ((one - z).powf(1.0 + p.a1) * (one - w).powf(1.0 + p.a2)).inv()
}

/// lim K_N(z, w)/(N^{α1+α2}(zw)^N) outside the disk.
pub fn sum_limit_outside(p: &SumParams, z: C64, w: C64) -> Result<C64> {
    let one = C64::new(1.0, 0.0);
    let g = crate::specfun::gamma(1.0 + p.a1)? * crate::specfun::gamma(1.0 + p.a2)?;
    let den = (z * w - 1.0) * (one - z.inv()).powf(1.0 + p.b1) * (one - w.inv()).powf(1.0 + p.b2);
    Ok(den.inv() / g)
}

/// Sum asymptotics away from the circle: K_N(0,0), the inside limits in both
/// parameter ranges, and the normalised outside limit.
pub fn sum_limits_report(n_list: &[usize]) -> Result<ConvergenceReport> {
    check_n_list(n_list)?;
    let neg = SumParams {
        a1: 0.5,
        b1: -1.5,
        a2: 0.5,
        b2: -1.5,
    };
    let pos = SumParams {
        a1: 0.5,
        b1: -0.25,
        a2: 1.5,
        b2: -0.25,
    };
    let inside = [
        (C64::new(0.3, 0.2), C64::new(-0.4, 0.1)),
        (C64::new(0.5, 0.0), C64::new(0.2, -0.3)),
    ];
    let outside = [
        (C64::new(1.5, 0.0), C64::new(2.0, 0.0)),
        (C64::new(1.3, 0.8), C64::new(-1.6, 0.4)),
    ];
    let origin = sum_limit_at_origin(&neg)?;
    let in_neg = inside
        .iter()
        .map(|&(z, w)| sum_limit_inside(&neg, z, w))
        .collect::<Result<Vec<_>>>()?;
    let in_pos: Vec<C64> = inside
        .iter()
        .map(|&(z, w)| sum_ratio_limit_inside(&pos, z, w))
        .collect();
    let out = outside
        .iter()
        .map(|&(z, w)| sum_limit_outside(&pos, z, w))
        .collect::<Result<Vec<_>>>()?;
    let mut sb = SeriesBuilder::new(&[
        "K_N(0,0) -> Gamma ratio (b1+b2+1 < 0)",
        "K_N(z,w) -> Lambda circle integral (b1+b2+1 < 0)",
        "K_N(z,w)/K_N(0,0) -> (1-z)^-(1+a1)(1-w)^-(1+a2) (b1+b2+1 >= 0)",
        "K_N(z,w)/(N^(a1+a2)(zw)^N) -> outside limit",
    ]);
    let (zero, sk) = (ZERO, |p: &SumParams, n, z, w| {
        crate::kernel::sum_k(n, p.a1, p.b1, p.a2, p.b2, z, w)
    });
    for &n in n_list {
        let e0 = (sk(&neg, n, zero, zero)?.re - origin).abs();
        let mut e1 = 0.0f64;
        let mut e2 = 0.0f64;
        let k00 = sk(&pos, n, zero, zero)?;
        for (i, &(z, w)) in inside.iter().enumerate() {
            e1 = e1.max((sk(&neg, n, z, w)? - in_neg[i]).norm());
            e2 = e2.max((sk(&pos, n, z, w)? / k00 - in_pos[i]).norm());
        }
        let mut e3 = 0.0f64;
        let nf = n as f64;
        for (i, &(z, w)) in outside.iter().enumerate() {
            let norm = nf.powf(pos.a1 + pos.a2) * (z * w).powi(n as i32);
            e3 = e3.max((sk(&pos, n, z, w)? / norm - out[i]).norm());
        }
        sb.push(n, &[e0, e1, e2, e3]);
    }
    Ok(ConvergenceReport {
        regime: "sum_asymptotics".into(),
        spec: None,
        grid: grid_rows(&inside).into_iter().chain(grid_rows(&outside)).collect(),
        series: sb.finish(),
    })
}

/// Ratio limits of the sums on the circle: at ζ = i,
/// K_N(ζ + a1/N, ζ̄ + ā2/N)/K_N(ζ, ζ̄) → E_{α1+α2}(a1ζ̄ + ā2ζ), and at 1,
/// K_N(1 + a1/N, 1 + a2/N)/K_N(1, 1) → E_{α1,β1,α2,β2}(a1, a2).
pub fn sum_ratio_report(n_list: &[usize]) -> Result<ConvergenceReport> {
    check_n_list(n_list)?;
    let p = SumParams {
        a1: 0.5,
        b1: -0.5,
        a2: 1.5,
        b2: -0.5,
    };
    let zeta = C64::new(0.0, 1.0);
    let pts = [
        (C64::new(0.4, 0.2), C64::new(-0.3, 0.5)),
        (C64::new(-0.6, 0.0), C64::new(0.2, -0.4)),
    ];
    let at_zeta: Vec<C64> = pts
        .iter()
        .map(|&(a1, a2)| crate::specfun::e_gamma(p.a1 + p.a2, a1 * zeta.conj() + a2.conj() * zeta))
        .collect::<Result<_>>()?;
    let at_one: Vec<C64> = pts
        .iter()
        .map(|&(a1, a2)| crate::specfun::e_pair(p.a1, p.b1, p.a2, p.b2, a1, a2))
        .collect::<Result<_>>()?;
    let mut sb = SeriesBuilder::new(&["ratio at zeta = i -> E_gamma", "ratio at 1 -> E pair"]);
    let sk = |n, z, w| crate::kernel::sum_k(n, p.a1, p.b1, p.a2, p.b2, z, w);
    let one = C64::new(1.0, 0.0);
    for &n in n_list {
        let nf = n as f64;
        let dz = sk(n, zeta, zeta.conj())?;
        let d1 = sk(n, one, one)?;
        let mut e0 = 0.0f64;
        let mut e1 = 0.0f64;
        for (i, &(a1, a2)) in pts.iter().enumerate() {
            let r = sk(n, zeta + a1 / nf, zeta.conj() + a2.conj() / nf)? / dz;
            e0 = e0.max((r - at_zeta[i]).norm());
            let r1 = sk(n, one + a1 / nf, one + a2 / nf)? / d1;
            e1 = e1.max((r1 - at_one[i]).norm());
        }
        sb.push(n, &[e0, e1]);
    }
    Ok(ConvergenceReport {
        regime: "sum_ratios".into(),
        spec: None,
        grid: grid_rows(&pts),
        series: sb.finish(),
    })
}

/// |compare_intensity(z) − e^{2 Re z}/π| along Im z at fixed Re z, pointwise
/// and as the maximum over one period [Im z, Im z + π] of the oscillating
/// correction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub re: f64,
    pub im: Vec<f64>,
    pub error: Vec<f64>,
    pub envelope: Vec<f64>,
}

impl CompareReport {
    pub fn strictly_decreasing(&self) -> bool {
        self.error.windows(2).all(|w| w[1] < w[0])
    }

    pub fn envelope_decreasing(&self) -> bool {
        self.envelope.windows(2).all(|w| w[1] < w[0])
    }
}

pub fn compare_report(re: f64, ims: &[f64]) -> CompareReport {
    let target = (2.0 * re).exp() / PI;
    let err = |im: f64| (compare_intensity(C64::new(re, im)) - target).norm();
    let error = ims.iter().map(|&im| err(im)).collect();
    let envelope = ims
        .iter()
        .map(|&im| (0..=128).map(|k| err(im + PI * k as f64 / 128.0)).fold(0.0, f64::max))
        .collect();
    CompareReport {
        re,
        im: ims.to_vec(),
        error,
        envelope,
    }
}

/// The grid used by [`standard_reports`] for a regime.
pub fn default_grid(regime: &Regime) -> Vec<(C64, C64)> {
    let c = C64::new;
    match regime {
        Regime::CircleComplex { .. } => vec![
            (c(0.3, -0.2), c(-0.4, 0.5)),
            (c(0.0, 0.0), c(0.0, 0.0)),
            (c(0.5, 0.5), c(0.5, 0.5)),
            (c(-1.0, 0.2), c(0.7, -0.3)),
        ],
        Regime::CircleReal { .. } => vec![
            (c(0.5, 0.0), c(-0.3, 0.4)),
            (c(0.5, 0.0), c(-0.3, 0.0)),
            (c(-0.7, 0.0), c(-0.2, 0.0)),
            (c(0.5, 0.4), c(-0.3, 0.0)),
            (c(0.5, 0.4), c(-0.3, 0.6)),
        ],
        Regime::InsideDisk => vec![
            (c(0.3, 0.0), c(-0.5, 0.0)),
            (c(0.3, 0.2), c(-0.5, 0.0)),
            (c(0.3, 0.2), c(-0.1, -0.4)),
            (c(0.3, 0.0), c(0.3, 0.0)),
        ],
        Regime::OutsideDisk => vec![
            (c(1.4, 0.0), c(1.8, 0.0)),
            (c(1.4, 0.0), c(-1.8, 0.0)),
            (c(1.2, 0.9), c(-1.8, 0.0)),
            (c(1.2, 0.9), c(-0.3, -1.5)),
        ],
    }
}

/// The specs exercised by [`standard_reports`]: ζ = i with λ = 1, ξ = ±1 with
/// λ = 1/2, the disk interior at s = ∞ and the exterior with c = 1.
pub fn standard_specs() -> Vec<LimitKernelSpec> {
    vec![
        LimitKernelSpec::circle_complex(C64::new(0.0, 1.0), 1.0).expect("valid"),
        LimitKernelSpec::circle_real(1.0, 0.5).expect("valid"),
        LimitKernelSpec::circle_real(-1.0, 0.5).expect("valid"),
        LimitKernelSpec::inside(0.0).expect("valid"),
        LimitKernelSpec::outside(1.0).expect("valid"),
    ]
}

/// Every kernel regime on its default grid plus the sum asymptotics and the
/// ratio limits.
pub fn standard_reports(n_list: &[usize]) -> Result<Vec<ConvergenceReport>> {
    let mut out = standard_specs()
        .iter()
        .map(|s| convergence_report(s, &default_grid(&s.regime), n_list))
        .collect::<Result<Vec<_>>>()?;
    out.push(sum_limits_report(n_list)?);
    out.push(sum_ratio_report(n_list)?);
    Ok(out)
}
