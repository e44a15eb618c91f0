//! Argument types shared by the subcommands and their consistency checks.

use clap::{Args, ValueEnum};
use mahler::kernel::{EnsembleParams, FiniteKernel};
use mahler::{Complex64, LimitKernelSpec};

use crate::Failure;

/// Parses an exponent s, accepting "inf".
pub fn parse_s(v: &str) -> Result<f64, String> {
    match v.trim() {
        "inf" | "Inf" | "infinity" | "∞" => Ok(f64::INFINITY),
        t => t.parse::<f64>().map_err(|e| format!("not a number or \"inf\": {e}")),
    }
}

/// Parses "x" or "x,y" as a complex number.
pub fn parse_complex(v: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("bad number {t:?}: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected \"re\" or \"re,im\", got {v:?}")),
    }
}

/// Parses a comma separated list of degrees.
pub fn parse_list(v: &str) -> Result<Vec<usize>, String> {
    v.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| format!("bad degree {t:?}: {e}")))
        .collect()
}

/// One axis "lo:hi:n" of a grid; n = 1 gives the single point lo.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn parse(v: &str) -> Result<Axis, String> {
        let parts: Vec<&str> = v.split(':').map(str::trim).collect();
        let [lo, hi, n] = parts.as_slice() else {
            return Err(format!("expected lo:hi:n, got {v:?}"));
        };
        let lo = lo.parse::<f64>().map_err(|e| format!("bad bound {lo:?}: {e}"))?;
        let hi = hi.parse::<f64>().map_err(|e| format!("bad bound {hi:?}: {e}"))?;
        let n = n.parse::<usize>().map_err(|e| format!("bad count {n:?}: {e}"))?;
        if n == 0 || !lo.is_finite() || !hi.is_finite() || (n > 1 && hi <= lo) {
            return Err(format!("empty axis {v:?}"));
        }
        Ok(Axis { lo, hi, n })
    }

    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let h = (self.hi - self.lo) / (self.n - 1) as f64;
        (0..self.n)
            .map(|k| {
                if k + 1 == self.n {
                    self.hi
                } else {
                    self.lo + h * k as f64
                }
            })
            .collect()
    }
}

/// A rectangular grid "re_lo:re_hi:n,im_lo:im_hi:m"; the imaginary axis
/// defaults to the single point 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub re: Axis,
    pub im: Axis,
}

impl Grid {
    pub fn parse(v: &str) -> Result<Grid, String> {
        let (re, im) = match v.split_once(',') {
            Some((a, b)) => (Axis::parse(a)?, Axis::parse(b)?),
            None => (Axis::parse(v)?, Axis { lo: 0.0, hi: 0.0, n: 1 }),
        };
        Ok(Grid { re, im })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum RegimeArg {
    /// The finite-N kernel.
    Finite,
    CircleComplex,
    CircleReal,
    Inside,
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Species {
    /// Nonreal roots, density per unit area.
    Complex,
    /// Real roots, density per unit length.
    Real,
}

/// Ensemble or limit selection. The finite regime takes N and s; the limit
/// regimes take lambda (or N and s, with lambda = N/s), the exterior takes c
/// (or N and s, with c = s − N), and the circle regimes need an anchor.
#[derive(Debug, Clone, Args)]
pub struct KernelArgs {
    #[arg(long, value_enum, default_value = "finite")]
    pub regime: RegimeArg,
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long, value_parser = parse_s)]
    pub s: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, value_parser = parse_s)]
    pub c: Option<f64>,
    /// ξ = ±1 for circle_real, "re,im" on the unit circle for circle_complex.
    #[arg(long, alias = "xi", alias = "zeta", value_parser = parse_complex, allow_hyphen_values = true)]
    pub anchor: Option<Complex64>,
}

pub enum Target {
    Finite(Box<FiniteKernel>),
    Limit(LimitKernelSpec),
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

impl KernelArgs {
    fn lambda_from(&self) -> Result<f64, Failure> {
        match (self.lambda, self.n, self.s) {
            (Some(_), _, Some(_)) => Err(usage("s and lambda are mutually exclusive")),
            (Some(l), _, None) => Ok(l),
            (None, Some(n), Some(s)) => Ok(n as f64 / s),
            _ => Err(usage("limit regimes need lambda, or N and s")),
        }
    }

    fn anchor(&self) -> Result<Complex64, Failure> {
        self.anchor.ok_or_else(|| usage("circle regimes need --anchor"))
    }

    /// Checks the combination of flags and builds the kernel it names.
    pub fn target(&self) -> Result<Target, Failure> {
        let circle = matches!(self.regime, RegimeArg::CircleComplex | RegimeArg::CircleReal);
        if !circle && self.anchor.is_some() {
            return Err(usage("--anchor applies to circle regimes only"));
        }
        if self.regime != RegimeArg::Outside && self.c.is_some() {
            return Err(usage("--c applies to the outside regime only"));
        }
        let spec = match self.regime {
            RegimeArg::Finite => {
                if self.lambda.is_some() {
                    return Err(usage("s and lambda are mutually exclusive; the finite regime takes s"));
                }
                let (Some(n), Some(s)) = (self.n, self.s) else {
                    return Err(usage("the finite regime needs N and s"));
                };
                let k = FiniteKernel::new(EnsembleParams::new(n, s)?)?;
                return Ok(Target::Finite(Box::new(k)));
            }
            RegimeArg::CircleComplex => LimitKernelSpec::circle_complex(self.anchor()?, self.lambda_from()?)?,
            RegimeArg::CircleReal => {
                let a = self.anchor()?;
                if a.im != 0.0 {
                    return Err(usage("circle_real needs a real anchor ±1"));
                }
                LimitKernelSpec::circle_real(a.re, self.lambda_from()?)?
            }
            RegimeArg::Inside => LimitKernelSpec::inside(self.lambda_from()?)?,
            RegimeArg::Outside => {
                if self.lambda.is_some() {
                    return Err(usage("the outside regime takes c, not lambda"));
                }
                let c = match (self.c, self.n, self.s) {
                    (Some(_), _, Some(_)) => return Err(usage("c and s are mutually exclusive")),
                    (Some(c), _, None) => c,
                    (None, Some(n), Some(s)) => s - n as f64,
                    _ => return Err(usage("the outside regime needs c, or N and s")),
                };
                LimitKernelSpec::outside(c)?
            }
        };
        Ok(Target::Limit(spec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(regime: RegimeArg) -> KernelArgs {
        KernelArgs {
            regime,
            n: None,
            s: None,
            lambda: None,
            c: None,
            anchor: None,
        }
    }

    #[test]
    fn parsers() {
        assert_eq!(parse_s("inf").unwrap(), f64::INFINITY);
        assert_eq!(parse_s("5").unwrap(), 5.0);
        assert!(parse_s("five").is_err());
        assert_eq!(parse_complex("0,1").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(parse_complex("-1").unwrap(), Complex64::new(-1.0, 0.0));
        assert_eq!(parse_list("8,16,32").unwrap(), vec![8, 16, 32]);
        let g = Grid::parse("-1:1:5,0:0.5:3").unwrap();
        assert_eq!(g.re.points(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(g.im.points(), vec![0.0, 0.25, 0.5]);
        assert_eq!(Grid::parse("0:2:3").unwrap().im.points(), vec![0.0]);
        assert!(Grid::parse("1:0:3").is_err());
        assert!(Axis::parse("0:1").is_err());
    }

    #[test]
    fn consistency_rules() {
        let mut a = args(RegimeArg::CircleReal);
        a.lambda = Some(1.0);
        assert!(matches!(a.target(), Err(Failure::Usage(_))));
        a.anchor = Some(Complex64::new(1.0, 0.0));
        assert!(matches!(a.target(), Ok(Target::Limit(_))));
        a.s = Some(5.0);
        assert!(matches!(a.target(), Err(Failure::Usage(_))));

        let mut f = args(RegimeArg::Finite);
        f.n = Some(4);
        f.s = Some(6.0);
        assert!(matches!(f.target(), Ok(Target::Finite(_))));
        f.lambda = Some(0.5);
        assert!(matches!(f.target(), Err(Failure::Usage(_))));

        let mut o = args(RegimeArg::Outside);
        o.n = Some(10);
        o.s = Some(11.0);
        match o.target() {
            Ok(Target::Limit(spec)) => assert_eq!(spec.c, 1.0),
            _ => panic!("outside from N and s"),
        }
        let mut i = args(RegimeArg::Inside);
        i.lambda = Some(2.0);
        assert!(matches!(i.target(), Err(Failure::Usage(_))));
    }
}
