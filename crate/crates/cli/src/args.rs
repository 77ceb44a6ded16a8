use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ladder_core::factorization::Ordering;
use ladder_core::triangles::{Boundary, SumRule};
use ladder_core::{AlgebraSpec, Profile};
use num_complex::Complex64;

#[derive(Debug, Parser)]
#[command(name = "ladder", version, about = "Generalized ladder algebras: factorizations, G_n functions, coefficient diagrams")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Ascii,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Overrides the command's tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Truncation window as lo:hi.
    #[arg(long, global = true, value_parser = parse_range, allow_hyphen_values = true)]
    pub window: Option<(i64, i64)>,
    /// Padding around the core instead of the default rule.
    #[arg(long, global = true)]
    pub pad: Option<i64>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON file whose keys are read as flags; command-line flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Commutator residuals and block structure of a truncated algebra.
    CheckAlgebra(CheckAlgebraArgs),
    /// Normal and anti-normal products against the brute-force exponential.
    Factorize(FactorizeArgs),
    /// G_n or G_nm on a grid of y by several routes.
    Gn(GnArgs),
    /// Exact coefficient diagrams.
    Triangle(TriangleArgs),
    /// SU(2) rotation matrices.
    Rotate(RotateArgs),
    /// Phase-operator matrix elements.
    Phase(PhaseArgs),
    /// Bessel and phase sum rules.
    Sumrule(SumruleArgs),
}

#[derive(Debug, Args, Clone)]
pub struct SpecArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
    #[arg(long, value_parser = parse_profile, conflicts_with_all = ["alpha", "beta", "sigma"])]
    pub profile: Option<Profile>,
}

impl SpecArgs {
    pub fn spec(&self) -> Result<AlgebraSpec, String> {
        if let Some(p) = self.profile {
            return Ok(AlgebraSpec::profile(p));
        }
        match (self.alpha, self.beta, self.sigma) {
            (Some(a), Some(b), Some(s)) => Ok(AlgebraSpec::parametric(a, b, s)),
            _ => Err("give --alpha, --beta and --sigma, or --profile".into()),
        }
    }
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct CheckAlgebraArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// States trimmed from each open side of the window to form the core.
    #[arg(long, default_value_t = 2)]
    pub inset: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderingChoice {
    Normal,
    AntiNormal,
    Both,
}

impl OrderingChoice {
    pub fn orderings(self) -> Vec<Ordering> {
        match self {
            OrderingChoice::Normal => vec![Ordering::Normal],
            OrderingChoice::AntiNormal => vec![Ordering::AntiNormal],
            OrderingChoice::Both => vec![Ordering::Normal, Ordering::AntiNormal],
        }
    }
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct FactorizeArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// U₁ parameter: the exponent is iy(L + R).
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["a", "b", "c"])]
    pub y: Option<f64>,
    /// U₂ coefficient of L, as re,im or a number ending in i.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub a: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub b: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub c: Option<Complex64>,
    /// Core on which the products are compared, lo:hi.
    #[arg(long, value_parser = parse_range, default_value = "0:11", allow_hyphen_values = true)]
    pub core: (i64, i64),
    #[arg(long, value_enum, default_value = "both")]
    pub ordering: OrderingChoice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteChoice {
    All,
    Closed,
    Series,
    Oracle,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct GnArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 0)]
    pub m: u32,
    /// y values: a comma list or lo:hi:count.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub y: Grid,
    #[arg(long, value_enum, default_value = "all")]
    pub route: RouteChoice,
    /// Terms of the anti-normal series route.
    #[arg(long, default_value_t = 400)]
    pub terms: u32,
    /// Adds the central-difference recursion residual at each y.
    #[arg(long)]
    pub recursion: bool,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct TriangleArgs {
    /// tilde:P, bar:P, gauss-tilde, gauss-bar, unit, or lambda (with the spec flags).
    #[arg(long)]
    pub rule: String,
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, value_parser = parse_boundary, default_value = "triangular")]
    pub boundary: Boundary,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub start: i64,
    #[arg(long, default_value_t = 8)]
    pub rows: usize,
    /// Also emit the signed Taylor series read down this column.
    #[arg(long, allow_hyphen_values = true)]
    pub column: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    All,
    Factorized,
    Direct,
    Antinormal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Layout {
    /// `M[k][l] = ⟨m_k|U|m_l⟩`.
    Matrix,
    /// Transposed, as the matrices are printed in the literature.
    KetAction,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct RotateArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub omega: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi: f64,
    /// Spin j, e.g. 1, 3/2 or 2.5.
    #[arg(long, value_parser = parse_two_j)]
    pub j: u32,
    #[arg(long, value_enum, default_value = "all")]
    pub method: Method,
    #[arg(long, value_enum, default_value = "matrix")]
    pub layout: Layout,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct PhaseArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 0)]
    pub m: u32,
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub y: Grid,
    /// States in the brute-force comparison window; 0 skips it.
    #[arg(long, default_value_t = 60)]
    pub oracle_size: usize,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct SumruleArgs {
    /// A rule name or "all".
    #[arg(long, default_value = "all")]
    pub name: String,
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub y: Grid,
    #[arg(long, default_value_t = 16)]
    pub k_max: u32,
}

impl SumruleArgs {
    pub fn rules(&self) -> Result<Vec<SumRule>, String> {
        if self.name == "all" {
            return Ok(SumRule::ALL.to_vec());
        }
        self.name.parse::<SumRule>().map(|r| vec![r]).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

pub fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got '{s}'"))?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("bad lower bound '{lo}': {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("bad upper bound '{hi}': {e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok((lo, hi))
}

pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number '{t}': {e}"));
    let parts: Vec<&str> = s.split(':').collect();
    let values = match parts.as_slice() {
        [lo, hi, count] => {
            let (lo, hi) = (num(lo)?, num(hi)?);
            let count: usize = count.trim().parse().map_err(|e| format!("bad count '{count}': {e}"))?;
            match count {
                0 => return Err("a grid needs at least one point".into()),
                1 => vec![lo],
                _ => (0..count).map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64).collect(),
            }
        }
        [_] => s.split(',').map(num).collect::<Result<_, _>>()?,
        _ => return Err(format!("expected a comma list or lo:hi:count, got '{s}'")),
    };
    if values.iter().any(|v: &f64| !v.is_finite()) {
        return Err("grid values must be finite".into());
    }
    Ok(Grid(values))
}

pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number '{t}': {e}"));
    if let Some((re, im)) = s.split_once(',') {
        return Ok(Complex64::new(num(re)?, num(im)?));
    }
    if let Some(im) = s.trim().strip_suffix('i') {
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => num(other)?,
        };
        return Ok(Complex64::new(0.0, im));
    }
    Ok(Complex64::new(num(s)?, 0.0))
}

pub fn parse_two_j(s: &str) -> Result<u32, String> {
    let twice = match s.split_once('/') {
        Some((num, "2")) => num.trim().parse::<u32>().map_err(|e| e.to_string())?,
        Some(_) => return Err(format!("spin must be a multiple of 1/2, got '{s}'")),
        None => {
            let j: f64 = s.trim().parse().map_err(|e| format!("bad spin '{s}': {e}"))?;
            let t = 2.0 * j;
            if j < 0.0 || t.fract() != 0.0 {
                return Err(format!("spin must be a non-negative multiple of 1/2, got '{s}'"));
            }
            t as u32
        }
    };
    Ok(twice)
}

fn parse_profile(s: &str) -> Result<Profile, String> {
    s.parse().map_err(|e: ladder_core::LadderError| e.to_string())
}

fn parse_boundary(s: &str) -> Result<Boundary, String> {
    s.parse().map_err(|e: ladder_core::LadderError| e.to_string())
}
