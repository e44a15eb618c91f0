//! `mahler`: CSV and JSON artifacts for the real Mahler ensemble.
//!
//! Exit codes: 0 success, 1 numerical or tolerance failure, 2 invalid
//! arguments.

mod config;
mod output;

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mahler::kernel::{expected_real_exact, EnsembleParams, FiniteKernel, Region};
use mahler::limits::{
    asymptotic_real_counts, convergence_report, default_grid, limit_intensity, limit_matrix, limit_real_intensity,
    standard_reports,
};
use mahler::mc::{empirical_stats, Chain, ComplexGrid, RealGrid, SamplerConfig};
use mahler::volume::{chern_vaaler_f, gram_pf, monomial_basis};
use mahler::{Complex64, KernelValue2x2};
use rayon::prelude::*;
use serde_json::json;

use config::{parse_complex, parse_list, parse_s, Format, Grid, KernelArgs, RegimeArg, Species, Target};
use output::{write_json, Cell, Table};

#[derive(Debug)]
pub enum Failure {
    /// Invalid or inconsistent arguments (exit 2).
    Usage(String),
    /// A computed check missed its tolerance (exit 1).
    Tolerance(String),
    /// Any other failure (exit 1).
    Other(anyhow::Error),
}

impl From<mahler::Error> for Failure {
    fn from(e: mahler::Error) -> Self {
        use mahler::Error as E;
        match e {
            E::Domain(_) | E::InvalidParams(_) | E::OddDimension(_) | E::Pole(_) | E::Integrability(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Other(e.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

type Outcome = Result<(), Failure>;

#[derive(Debug, Parser)]
#[command(name = "mahler", version, about = "Random polynomials with Mahler measure weights")]
struct Cli {
    /// Gauss-Legendre panel order (sets MAHLER_QUAD_ORDER).
    #[arg(long, global = true)]
    quad_order: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, Args)]
struct ChainArgs {
    #[arg(long = "N")]
    n: usize,
    #[arg(long, value_parser = parse_s)]
    s: f64,
    #[arg(long, default_value_t = 1.0)]
    step_length: f64,
    #[arg(long, default_value_t = 100_000)]
    steps: u64,
    #[arg(long, default_value_t = 1_000)]
    burn_in: u64,
    #[arg(long, default_value_t = 1)]
    thin: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ChainArgs {
    fn config(&self) -> SamplerConfig {
        SamplerConfig {
            n: self.n,
            s: self.s,
            step_length: self.step_length,
            steps: self.steps,
            burn_in: self.burn_in,
            thin: self.thin,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Pf of the Gram matrix against the closed-form volume product.
    Volume {
        #[arg(long = "N")]
        n: usize,
        #[arg(long, value_parser = parse_s)]
        s: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// 2×2 matrix kernel K(u, v) with u over a grid.
    Kernel {
        #[command(flatten)]
        k: KernelArgs,
        /// re_lo:re_hi:n[,im_lo:im_hi:m]
        #[arg(long, value_parser = Grid::parse, allow_hyphen_values = true)]
        grid: Grid,
        /// Fixed second point "re,im"; v = u when absent.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        v: Option<Complex64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One-point root intensity over a grid.
    Intensity {
        #[command(flatten)]
        k: KernelArgs,
        #[arg(long, value_parser = Grid::parse, allow_hyphen_values = true)]
        grid: Grid,
        #[arg(long, value_enum, default_value = "complex")]
        species: Species,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expected real roots inside and outside [−1, 1] with the log N term.
    ExpectedRoots {
        #[arg(long = "N")]
        n: usize,
        #[arg(long, value_parser = parse_s)]
        s: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sup-norm errors of finite-N kernels against a limit.
    Convergence {
        #[command(flatten)]
        k: KernelArgs,
        #[arg(long, value_parser = parse_list, default_value = "8,16,32")]
        n_list: std::vec::Vec<usize>,
        /// Every regime on its default grid, plus the sum asymptotics.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monic polynomials from the Metropolis chain, one row per sample.
    Sample {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Root density histogram of a chain with batch-means standard errors.
    Histogram {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, value_enum, default_value = "real")]
        species: Species,
        /// Bins as lo:hi:bins (real) or re_lo:re_hi:n,im_lo:im_hi:m (complex).
        #[arg(long, value_parser = Grid::parse, allow_hyphen_values = true)]
        grid: Option<Grid>,
        #[arg(long, default_value_t = 50)]
        batches: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the property checks of every module.
    Validate {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Also write the checks as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn s_json(s: f64) -> serde_json::Value {
    if s.is_infinite() {
        json!("inf")
    } else {
        json!(s)
    }
}

fn run_volume(n: usize, s: f64, out: Option<&Path>) -> Outcome {
    let basis = monomial_basis(n);
    let (_, pf) = gram_pf(n, s, &basis)?;
    let f = chern_vaaler_f(n, s)?;
    let diff = (pf - f).abs();
    let doc = json!({ "N": n, "s": s_json(s), "F_product": f, "Pf_U": pf, "abs_diff": diff });
    write_json(&doc, out)?;
    if diff <= 1e-8 * f.abs() {
        Ok(())
    } else {
        Err(Failure::Tolerance(format!("|Pf - F| = {diff:e} exceeds 1e-8·|F|")))
    }
}

/// Evaluates `f` on every grid point, rows (fixed Im) in parallel, and
/// returns rows in grid order.
fn eval_grid<F>(grid: &Grid, f: F) -> Result<Vec<Vec<Cell>>, Failure>
where
    F: Fn(Complex64) -> Result<Vec<f64>, Failure> + Sync,
{
    let res = grid.re.points();
    let rows: Vec<Vec<Vec<Cell>>> = grid
        .im
        .points()
        .par_iter()
        .map(|&im| {
            res.iter()
                .map(|&re| {
                    let z = Complex64::new(re, im);
                    let mut row = vec![re, im];
                    row.extend(f(z)?);
                    Ok(Table::nums(row))
                })
                .collect::<Result<Vec<_>, Failure>>()
        })
        .collect::<Result<_, Failure>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Points outside a kernel's domain become NaN; other errors propagate.
fn or_nan<T>(r: mahler::Result<T>, nan: T) -> Result<T, Failure> {
    match r {
        Ok(v) => Ok(v),
        Err(mahler::Error::Domain(_)) => Ok(nan),
        Err(e) => Err(e.into()),
    }
}

fn matrix_cells(m: &KernelValue2x2) -> Vec<f64> {
    m.entries().iter().flat_map(|z| [z.re, z.im]).collect()
}

fn run_kernel(k: &KernelArgs, grid: &Grid, v: Option<Complex64>, format: Format, out: Option<&Path>) -> Outcome {
    let target = k.target()?;
    let nan = KernelValue2x2 {
        e11: Complex64::new(f64::NAN, f64::NAN),
        e12: Complex64::new(f64::NAN, f64::NAN),
        e21: Complex64::new(f64::NAN, f64::NAN),
        e22: Complex64::new(f64::NAN, f64::NAN),
    };
    let rows = eval_grid(grid, |u| {
        let w = v.unwrap_or(u);
        let m = match &target {
            Target::Finite(fk) => or_nan(fk.matrix(u, w), nan)?,
            Target::Limit(spec) => or_nan(limit_matrix(spec, u, w), nan)?,
        };
        let mut row = vec![w.re, w.im];
        row.extend(matrix_cells(&m));
        Ok(row)
    })?;
    let mut t = Table::new([
        "re_u", "im_u", "re_v", "im_v", "e11_re", "e11_im", "e12_re", "e12_im", "e21_re", "e21_im", "e22_re", "e22_im",
    ]);
    t.rows = rows;
    t.write(out, format)?;
    Ok(())
}

fn run_intensity(k: &KernelArgs, grid: &Grid, species: Species, format: Format, out: Option<&Path>) -> Outcome {
    let target = k.target()?;
    if species == Species::Real && grid.im.n != 1 {
        return Err(Failure::Usage("real intensity takes a one-axis grid lo:hi:n".into()));
    }
    let rows = eval_grid(grid, |z| {
        let v = match (&target, species) {
            (Target::Finite(fk), Species::Complex) => or_nan(fk.r01(z), f64::NAN)?,
            (Target::Finite(fk), Species::Real) => or_nan(fk.r10(z.re), f64::NAN)?,
            (Target::Limit(spec), Species::Complex) => or_nan(limit_intensity(spec, z), f64::NAN)?,
            (Target::Limit(spec), Species::Real) => limit_real_intensity(spec, z.re)?,
        };
        Ok(vec![v])
    })?;
    let mut t = Table::new(["re_z", "im_z", "intensity"]);
    t.rows = rows;
    t.write(out, format)?;
    Ok(())
}

fn run_expected_roots(n: usize, s: f64, out: Option<&Path>) -> Outcome {
    let p = EnsembleParams::new(n, s)?;
    let (e_in, e_out, method) = if p.is_odd() {
        let k = FiniteKernel::new(p)?;
        (
            k.expected_counts(Region::Inside)?,
            k.expected_counts(Region::Outside)?,
            "quadrature",
        )
    } else {
        let (a, b) = expected_real_exact(n, s)?;
        (a, b, "exact_sum")
    };
    let log_term = (n as f64).ln() / PI;
    let doc = json!({
        "N": n,
        "s": s_json(s),
        "method": method,
        "E_in": e_in,
        "E_out": e_out,
        "log_N_over_pi": log_term,
        "E_in_minus_log": e_in - log_term,
        "asymptotic": asymptotic_real_counts(n, s)?,
    });
    write_json(&doc, out)?;
    Ok(())
}

fn run_convergence(k: &KernelArgs, n_list: &[usize], all: bool, out: Option<&Path>) -> Outcome {
    if all {
        write_json(&standard_reports(n_list)?, out)?;
        return Ok(());
    }
    if k.regime == RegimeArg::Finite {
        return Err(Failure::Usage("convergence needs a limit regime or --all".into()));
    }
    let Target::Limit(spec) = k.target()? else {
        unreachable!("limit regime");
    };
    write_json(&convergence_report(&spec, &default_grid(&spec.regime), n_list)?, out)?;
    Ok(())
}

fn run_sample(chain: &ChainArgs, format: Format, out: Option<&Path>) -> Outcome {
    let cfg = chain.config();
    let mut ch = Chain::new(cfg)?;
    let mut t = Table::new(
        ["seed".to_string(), "step".to_string()]
            .into_iter()
            .chain((0..=cfg.n).map(|k| format!("c{k}"))),
    );
    for smp in ch.by_ref() {
        let mut row = vec![Cell::Int(cfg.seed), Cell::Int(smp.step)];
        row.extend(smp.poly.coeffs.iter().map(|&c| Cell::Num(c)));
        t.rows.push(row);
    }
    eprintln!("{} samples, acceptance rate {:.4}", t.rows.len(), ch.acceptance_rate());
    t.write(out, format)?;
    Ok(())
}

fn run_histogram(
    chain: &ChainArgs,
    species: Species,
    grid: Option<Grid>,
    batches: usize,
    format: Format,
    out: Option<&Path>,
) -> Outcome {
    let cfg = chain.config();
    let ch = Chain::new(cfg)?;
    let (rg, cg) = match (species, grid) {
        (Species::Real, Some(g)) => {
            if g.im.n != 1 {
                return Err(Failure::Usage("real histograms take lo:hi:bins".into()));
            }
            (
                RealGrid {
                    lo: g.re.lo,
                    hi: g.re.hi,
                    bins: g.re.n,
                },
                default_complex(),
            )
        }
        (Species::Complex, Some(g)) => (
            default_real(),
            ComplexGrid {
                re_lo: g.re.lo,
                re_hi: g.re.hi,
                im_lo: g.im.lo,
                im_hi: g.im.hi,
                re_bins: g.re.n,
                im_bins: g.im.n,
            },
        ),
        (_, None) => (default_real(), default_complex()),
    };
    let stats = empirical_stats(ch.map(|s| s.poly), &rg, &cg, batches)?;
    eprintln!(
        "{} samples, real roots per polynomial {:.6} ± {:.6}, effective samples {:.0}",
        stats.samples, stats.real_count.mean, stats.real_count.stderr, stats.real_count.effective_samples
    );
    let t = match species {
        Species::Real => {
            let h = &stats.real_hist;
            let mut t = Table::new(["edge_lo", "edge_hi", "density", "stderr"]);
            for (i, (d, e)) in h.density.iter().zip(&h.stderr).enumerate() {
                t.rows.push(Table::nums([h.edges[i], h.edges[i + 1], *d, *e]));
            }
            t
        }
        Species::Complex => {
            let h = &stats.complex_hist;
            let m = h.im_edges.len() - 1;
            let mut t = Table::new(["re_lo", "re_hi", "im_lo", "im_hi", "density", "stderr"]);
            for (idx, (d, e)) in h.density.iter().zip(&h.stderr).enumerate() {
                let (i, j) = (idx / m, idx % m);
                t.rows.push(Table::nums([
                    h.re_edges[i],
                    h.re_edges[i + 1],
                    h.im_edges[j],
                    h.im_edges[j + 1],
                    *d,
                    *e,
                ]));
            }
            t
        }
    };
    t.write(out, format)?;
    Ok(())
}

fn default_real() -> RealGrid {
    RealGrid {
        lo: -3.0,
        hi: 3.0,
        bins: 60,
    }
}

fn default_complex() -> ComplexGrid {
    ComplexGrid {
        re_lo: -2.0,
        re_hi: 2.0,
        im_lo: 0.0,
        im_hi: 2.0,
        re_bins: 20,
        im_bins: 10,
    }
}

fn run_validate(seed: u64, out: Option<&Path>) -> Outcome {
    let checks = mahler::validate::run_all(seed)?;
    for c in &checks {
        println!(
            "{} {} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.module,
            c.name,
            c.detail
        );
    }
    if let Some(p) = out {
        write_json(&checks, Some(p))?;
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Tolerance(format!(
            "{failed} of {} checks failed",
            checks.len()
        )))
    }
}

fn run(cli: Cli) -> Outcome {
    match &cli.cmd {
        Cmd::Volume { n, s, out } => run_volume(*n, *s, out.as_deref()),
        Cmd::Kernel {
            k,
            grid,
            v,
            format,
            out,
        } => run_kernel(k, grid, *v, *format, out.as_deref()),
        Cmd::Intensity {
            k,
            grid,
            species,
            format,
            out,
        } => run_intensity(k, grid, *species, *format, out.as_deref()),
        Cmd::ExpectedRoots { n, s, out } => run_expected_roots(*n, *s, out.as_deref()),
        Cmd::Convergence { k, n_list, all, out } => run_convergence(k, n_list, *all, out.as_deref()),
        Cmd::Sample { chain, format, out } => run_sample(chain, *format, out.as_deref()),
        Cmd::Histogram {
            chain,
            species,
            grid,
            batches,
            format,
            out,
        } => run_histogram(chain, *species, *grid, *batches, *format, out.as_deref()),
        Cmd::Validate { seed, out } => run_validate(*seed, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(q) = cli.quad_order {
        std::env::set_var("MAHLER_QUAD_ORDER", q.to_string());
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Tolerance(m)) => {
            eprintln!("failed: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
