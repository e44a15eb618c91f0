//! The skew-symmetric bilinear form, the Gram matrix U of a monic basis,
//! its Pfaffian and the product formula F(s) for the star-body volume.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::pfaffian;
use crate::polys::{eps_weighted, weight, PolyCoeffs};
use crate::quad::{rule, tail, Adaptive};

/// ⟨z^{2n} | z^{2m+1}⟩ in closed form.
pub fn skew_moment(n: usize, m: usize, s: f64) -> Result<f64> {
    let need = ((2 * m + 2).max(2 * n + 1)) as f64;
    if !s.is_infinite() && s <= need {
        return Err(Error::Domain(format!(
            "skew moment ({n},{m}) needs s > {need}, got {s}"
        )));
    }
    let f = if s.is_infinite() {
        1.0
    } else {
        s / (s - 2.0 * m as f64 - 2.0)
    };
    let (nf, mf) = (n as f64, m as f64);
    Ok(f / ((nf + 0.5) * (mf - nf + 0.5)))
}

/// ⟨z^j | z^k⟩ for arbitrary degrees.
pub fn monomial_pairing(j: usize, k: usize, s: f64) -> Result<f64> {
    match (j % 2, k % 2) {
        (0, 1) => skew_moment(j / 2, (k - 1) / 2, s),
        (1, 0) => Ok(-skew_moment(k / 2, (j - 1) / 2, s)?),
        _ => Ok(0.0),
    }
}

/// ⟨p | q⟩ by bilinearity from the closed-form moments.
pub fn pairing(p: &PolyCoeffs, q: &PolyCoeffs, s: f64) -> Result<f64> {
    let mut acc = 0.0;
    for (j, a) in p.coeffs.iter().enumerate() {
        if *a == 0.0 {
            continue;
        }
        for (k, b) in q.coeffs.iter().enumerate() {
            if *b != 0.0 {
                acc += a * b * monomial_pairing(j, k, s)?;
            }
        }
    }
    Ok(acc)
}

/// Real part of the form, ∫∫ f̃(x) g̃(y) sgn(y − x), reduced to one
/// dimension through the exact ε-antiderivative and integrated numerically.
pub fn bilinear_real(f: &PolyCoeffs, g: &PolyCoeffs, s: f64) -> Result<f64> {
    for p in [f, g] {
        if !s.is_infinite() && s <= p.degree() as f64 + 1.0 {
            return Err(Error::Integrability(format!(
                "degree {} needs s > {}",
                p.degree(),
                p.degree() + 1
            )));
        }
    }
    let ad = Adaptive::default().tol(1e-15, 1e-13);
    let h = |y: f64| -> f64 {
        let w = weight(s, y.abs());
        if w == 0.0 {
            return 0.0;
        }
        g.eval(y) * w * eps_weighted(f, s, y).unwrap_or(f64::NAN)
    };
    let (mid, _) = ad.run(-1.0, 1.0, h);
    let mut total = mid;
    if !s.is_infinite() {
        let (r, _) = tail(&ad, 1.0, h);
        let (l, _) = tail(&ad, 1.0, |t| h(-t));
        total += r + l;
    }
    if !total.is_finite() {
        return Err(Error::Quadrature {
            value: total,
            err: f64::INFINITY,
        });
    }
    Ok(-2.0 * total)
}

/// Complex part of the form, 2i∫ f̃(z) g̃(z̄) sgn(Im z), in polar coordinates
/// split at |z| = 1.
pub fn bilinear_complex(f: &PolyCoeffs, g: &PolyCoeffs, s: f64) -> Result<f64> {
    let deg = (f.degree() + g.degree()) as f64;
    if !s.is_infinite() && 2.0 * s <= deg + 2.0 {
        return Err(Error::Integrability(format!(
            "degree sum {deg} needs 2s > {}",
            deg + 2.0
        )));
    }
    let gl = rule(64);
    let ad = Adaptive::default().tol(1e-15, 1e-13);
    // −4 ∫_upper Im(f(z) g(z̄)) w(z)² dμ
    let ring = |r: f64| -> f64 {
        let w = weight(s, r);
        if w == 0.0 {
            return 0.0;
        }
        let ang = gl.integrate(0.0, std::f64::consts::PI, |t: f64| {
            let z = Complex64::from_polar(r, t);
            (f.eval_c(z) * g.eval_c(z.conj())).im
        });
        -4.0 * ang * w * w * r
    };
    let (inner, _) = ad.run(0.0, 1.0, ring);
    let mut total = inner;
    if !s.is_infinite() {
        let (outer, _) = tail(&ad, 1.0, ring);
        total += outer;
    }
    Ok(total)
}

/// ⟨f | g⟩ = ⟨f | g⟩_ℝ + ⟨f | g⟩_ℂ by quadrature.
pub fn bilinear(f: &PolyCoeffs, g: &PolyCoeffs, s: f64) -> Result<f64> {
    Ok(bilinear_real(f, g, s)? + bilinear_complex(f, g, s)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct GramMatrix {
    pub n: usize,
    pub s: f64,
    pub entries: Vec<Vec<f64>>,
    pub basis: Vec<PolyCoeffs>,
}

pub fn monomial_basis(n: usize) -> Vec<PolyCoeffs> {
    (0..n)
        .map(|k| {
            let mut c = vec![0.0; k + 1];
            c[k] = 1.0;
            PolyCoeffs { coeffs: c }
        })
        .collect()
}

/// U_{ij} = ⟨p_{i} | p_{j}⟩ for a monic basis of degrees 0..N−1, and Pf U.
pub fn gram_pf(n: usize, s: f64, basis: &[PolyCoeffs]) -> Result<(GramMatrix, f64)> {
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    check_s(n, s)?;
    if basis.len() != n {
        return Err(Error::InvalidParams(format!(
            "basis has {} members, need {n}",
            basis.len()
        )));
    }
    for (k, p) in basis.iter().enumerate() {
        if p.degree() != k || (p.leading() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParams(format!(
                "basis member {k} is not monic of degree {k}"
            )));
        }
    }
    let mut entries = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = pairing(&basis[i], &basis[j], s)?;
            entries[i][j] = v;
            entries[j][i] = -v;
        }
    }
    let m = nalgebra::DMatrix::from_fn(n, n, |i, j| Complex64::new(entries[i][j], 0.0));
    let pf = if n == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        pfaffian(&m)?
    };
    Ok((
        GramMatrix {
            n,
            s,
            entries,
            basis: basis.to_vec(),
        },
        pf.re,
    ))
}

fn check_s(n: usize, s: f64) -> Result<()> {
    if s.is_nan() || (!s.is_infinite() && s <= n as f64) {
        return Err(Error::Domain(format!("need s > N = {n}, got {s}")));
    }
    Ok(())
}

/// C_N = 2^N ∏_{j=1}^{J} (2j/(2j+1))^{N−2j}, the volume of the monic body.
pub fn chern_vaaler_c(n: usize) -> f64 {
    let j_max = n / 2;
    let mut ln = n as f64 * std::f64::consts::LN_2;
    for j in 1..=j_max {
        let jf = j as f64;
        ln += (n - 2 * j) as f64 * (2.0 * jf / (2.0 * jf + 1.0)).ln();
    }
    ln.exp()
}

/// F(s) = C_N ∏_{j=0}^{J} s/(s − (N − 2j)).
pub fn chern_vaaler_f(n: usize, s: f64) -> Result<f64> {
    check_s(n, s)?;
    let c = chern_vaaler_c(n);
    if s.is_infinite() {
        return Ok(c);
    }
    let mut prod = c;
    for j in 0..=n / 2 {
        prod *= s / (s - (n - 2 * j) as f64);
    }
    Ok(prod)
}

/// vol B_λ = 2F(s)/(N+1) with s = (N+1)/λ.
pub fn star_body_volume(n: usize, lambda: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Domain(format!("lambda = {lambda} outside [0,1]")));
    }
    let s = if lambda == 0.0 {
        f64::INFINITY
    } else {
        (n as f64 + 1.0) / lambda
    };
    Ok(2.0 * chern_vaaler_f(n, s)? / (n as f64 + 1.0))
}
