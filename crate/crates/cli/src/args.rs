use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use locsym::{Domain, SymmetryTransform};

#[derive(Debug, Parser)]
#[command(name = "locsym", version, about = "Local-symmetry analysis of 1D scattering on piecewise-constant potentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the scattering field on a grid (CSV: x, ReA, ImA, |A|, phi).
    #[command(allow_negative_numbers = true)]
    Solve(SolveArgs),
    /// Transmission, reflection and sum rule over an energy grid (CSV).
    #[command(allow_negative_numbers = true)]
    Spectrum(SpectrumArgs),
    /// List reflection and translation symmetric domains (JSON).
    Detect(CommonArgs),
    /// Enumerate tilings into mirror-symmetric units (JSON).
    Decompose(DecomposeArgs),
    /// Invariant currents on symmetric domains (JSON, or CSV with --csv).
    #[command(allow_negative_numbers = true)]
    Invariants(InvariantsArgs),
    /// Map the field across a symmetry and compare with the direct solution (JSON).
    #[command(allow_negative_numbers = true)]
    Map(MapArgs),
    /// Transfer matrix of the landscape, optionally rebuilt from invariants.
    #[command(allow_negative_numbers = true)]
    Tm(TmArgs),
    /// Locate, refine and classify transmission peaks (JSON).
    #[command(allow_negative_numbers = true)]
    Ptrscan(PtrscanArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Potential file: {"origin": x0, "segments": [{"width": d, "value": V}, ...]}
    #[arg(long)]
    pub potential: PathBuf,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum IncidenceArg {
    Left,
    Right,
    /// Unit waves from both sides.
    Both,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub emin: f64,
    #[arg(long)]
    pub emax: f64,
    /// Number of grid points.
    #[arg(long)]
    pub steps: usize,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub energy: f64,
    #[arg(long, default_value_t = 401)]
    pub samples: usize,
    #[arg(long, value_enum, default_value = "left")]
    pub incidence: IncidenceArg,
    /// Lead length sampled on each side of the potential region.
    #[arg(long, default_value_t = 1.0)]
    pub pad: f64,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Decomposition index (as listed by `decompose`); repeat for several.
    #[arg(long)]
    pub decomposition: Vec<usize>,
    /// Bound on 1 - T below which a grid point is classified.
    #[arg(long, default_value_t = locsym::sumrule::PTR_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 1000)]
    pub max_count: usize,
}

#[derive(Debug, Args)]
pub struct SymmetryArgs {
    /// reflect:<axis> or translate:<length>
    #[arg(long, value_parser = parse_transform, requires = "domain")]
    pub transform: Option<SymmetryTransform<f64>>,
    /// Source domain as <a>,<b>
    #[arg(long, value_parser = parse_domain, requires = "transform", allow_hyphen_values = true)]
    pub domain: Option<Domain<f64>>,
    /// Report instead of rejecting a domain on which the potential is not symmetric.
    #[arg(long)]
    pub advisory: bool,
}

#[derive(Debug, Args)]
pub struct InvariantsArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub energy: f64,
    #[arg(long, value_enum, default_value = "left")]
    pub incidence: IncidenceArg,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[command(flatten)]
    pub symmetry: SymmetryArgs,
    /// Emit CSV rows instead of a JSON report.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub energy: f64,
    #[arg(long, value_enum, default_value = "left")]
    pub incidence: IncidenceArg,
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
    #[arg(long, value_parser = parse_transform)]
    pub transform: SymmetryTransform<f64>,
    #[arg(long, value_parser = parse_domain, allow_hyphen_values = true)]
    pub domain: Domain<f64>,
    #[arg(long)]
    pub advisory: bool,
}

#[derive(Debug, Args)]
pub struct TmArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Single energy (JSON report); otherwise use --emin/--emax/--steps (CSV).
    #[arg(long, conflicts_with_all = ["emin", "emax", "steps"])]
    pub energy: Option<f64>,
    #[arg(long, requires_all = ["emax", "steps"])]
    pub emin: Option<f64>,
    #[arg(long)]
    pub emax: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Also rebuild the matrix from the invariants (mirror-symmetric landscapes only).
    #[arg(long)]
    pub via_invariants: bool,
}

#[derive(Debug, Args)]
pub struct PtrscanArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 0)]
    pub decomposition: usize,
    #[arg(long, default_value_t = locsym::sumrule::PTR_TOL)]
    pub tol: f64,
}

pub fn parse_transform(s: &str) -> Result<SymmetryTransform<f64>, String> {
    let (kind, value) = s
        .split_once(':')
        .ok_or_else(|| format!("expected reflect:<axis> or translate:<length>, got `{s}`"))?;
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|e| format!("bad number `{value}`: {e}"))?;
    if !v.is_finite() {
        return Err(format!("non-finite value `{value}`"));
    }
    match kind.trim() {
        "reflect" => Ok(SymmetryTransform::reflection(v)),
        "translate" => Ok(SymmetryTransform::translation(v)),
        other => Err(format!("unknown transform `{other}`")),
    }
}

pub fn parse_domain(s: &str) -> Result<Domain<f64>, String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected <a>,<b>, got `{s}`"))?;
    let parse = |x: &str| {
        x.trim()
            .parse::<f64>()
            .map_err(|e| format!("bad number `{x}`: {e}"))
    };
    Domain::new(parse(a)?, parse(b)?).map_err(|e| e.to_string())
}
