//! Property suite across all modules, runnable as one batch.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::identities::identity_suite;
use crate::kernel::{expected_real_exact, EnsembleParams, FiniteKernel, Region};
use crate::limits::{compare_report, standard_reports};
use crate::mc::{mahler_measure, monic_log_measure, sample, SamplerConfig};
use crate::polys::{zero_location_suite, PolyCoeffs, ZeroCase};
use crate::volume::{chern_vaaler_f, gram_pf, monomial_basis};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub module: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(module: &str, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            module: module.into(),
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn specfun_checks(seed: u64) -> Result<Vec<Check>> {
    Ok(identity_suite(100, seed, 1e-11)?
        .into_iter()
        .map(|c| {
            Check::new(
                "specfun",
                format!("identity {}", c.name),
                c.passed(),
                format!(
                    "{} draws, {} failures, max error {:.3e}",
                    c.draws, c.failures, c.max_error
                ),
            )
        })
        .collect())
}

fn polys_checks(seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for case in [ZeroCase::DiskOrOne, ZeroCase::Circle] {
        let r = zero_location_suite(case, 50, seed, 1e-6)?;
        out.push(Check::new(
            "polys",
            format!("zero location {case:?}"),
            r.failures.is_empty(),
            format!(
                "{} draws, {} failures, worst excess {:.3e}",
                r.draws,
                r.failures.len(),
                r.worst_excess
            ),
        ));
    }
    Ok(out)
}

fn volume_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in [2usize, 4, 6] {
        let nf = n as f64;
        let mut ss = vec![nf + 1.0, nf + 2.0, 2.0 * nf, f64::INFINITY];
        ss.dedup();
        for s in ss {
            let f = chern_vaaler_f(n, s)?;
            let (_, pf) = gram_pf(n, s, &monomial_basis(n))?;
            let e = rel(pf, f);
            out.push(Check::new(
                "volume",
                format!("Pf(U) = F at N={n}, s={s}"),
                e <= 1e-8,
                format!("F = {f:.12e}, Pf = {pf:.12e}, rel {e:.2e}"),
            ));
        }
    }
    Ok(out)
}

fn kernel_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in [2usize, 4, 5] {
        let s = n as f64 + 2.0;
        let k = FiniteKernel::new(EnsembleParams::new(n, s)?)?;
        let total = k.expected_counts(Region::RealLine)? + k.expected_counts(Region::ComplexPlane)?;
        let e = (total - n as f64).abs();
        out.push(Check::new(
            "kernel",
            format!("normalization N={n}, s={s}"),
            e <= 1e-5,
            format!("total {total:.10}, error {e:.2e}"),
        ));
    }
    for s in [5.0, 8.0, 20.0] {
        let (e_in, _) = expected_real_exact(2, s)?;
        let closed = (2.0 * s - 1.0) / (3.0 * s);
        let e = (e_in - closed).abs();
        out.push(Check::new(
            "kernel",
            format!("N=2 expected inside count, s={s}"),
            e <= 1e-9,
            format!("exact sum {e_in:.15}, closed form {closed:.15}"),
        ));
    }
    Ok(out)
}

fn limits_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for r in standard_reports(&[8, 16, 32])? {
        let worst = r
            .series
            .iter()
            .map(|s| format!("{}: {:.2e}", s.label, s.sup_error.last().copied().unwrap_or(f64::NAN)))
            .collect::<Vec<_>>()
            .join(", ");
        let name = match &r.spec {
            Some(spec) => format!("convergence {} {:?}", r.regime, spec.regime),
            None => format!("convergence {}", r.regime),
        };
        out.push(Check::new("limits", name, r.strictly_decreasing(), worst));
    }
    for re in [0.0, 0.5] {
        let r = compare_report(re, &[5.0, 10.0, 20.0, 40.0]);
        out.push(Check::new(
            "limits",
            format!("compare envelope Re z = {re}"),
            r.envelope_decreasing(),
            format!("envelope {:?}", r.envelope),
        ));
    }
    Ok(out)
}

fn mc_checks(seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let cases: [(&[f64], f64); 3] = [
        (&[-2.0, 1.0], 2.0),
        (&[-1.0, 0.0, 0.0, 0.0, 0.0, 1.0], 1.0),
        (&[3.0, -10.0, 3.0], 9.0),
    ];
    for (c, want) in cases {
        let m = mahler_measure(&PolyCoeffs::new(c.to_vec()))?;
        out.push(Check::new(
            "mc",
            format!("Mahler measure of {c:?}"),
            rel(m, want) <= 1e-12,
            format!("{m:.15}"),
        ));
    }
    let cfg = SamplerConfig {
        n: 5,
        s: f64::INFINITY,
        step_length: 0.6,
        steps: 5000,
        burn_in: 500,
        thin: 5,
        seed,
    };
    let a = sample(&cfg)?;
    let worst = a
        .iter()
        .map(|s| monic_log_measure(&s.poly.coeffs[..cfg.n]).exp())
        .fold(0.0, f64::max);
    out.push(Check::new(
        "mc",
        "s = inf chain stays in the monic body",
        worst <= 1.0 + 1e-12,
        format!("max measure {worst:.15}"),
    ));
    out.push(Check::new(
        "mc",
        "seeded chain is reproducible",
        sample(&cfg)? == a,
        format!("{} samples", a.len()),
    ));
    Ok(out)
}

/// Runs every module's checks; `seed` drives the randomized ones.
pub fn run_all(seed: u64) -> Result<Vec<Check>> {
    let mut out = specfun_checks(seed)?;
    out.extend(polys_checks(seed)?);
    out.extend(volume_checks()?);
    out.extend(kernel_checks()?);
    out.extend(limits_checks()?);
    out.extend(mc_checks(seed)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_groups_pass() {
        for c in specfun_checks(1)
            .unwrap()
            .into_iter()
            .chain(polys_checks(1).unwrap())
            .chain(mc_checks(1).unwrap())
        {
            assert!(c.passed, "{c:?}");
        }
    }
}
