use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::{Vector3, Vector4};

/// Build, compose, classify and verify kinematic transformation groups.
#[derive(Parser, Debug)]
#[command(name = "kinegroup", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Override the verb's acceptance tolerance
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,

    /// Seed for random sampling
    #[arg(long, env = "KINEGROUP_SEED", global = true)]
    pub seed: Option<u64>,

    /// Write the result here instead of stdout
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Construct a transformation and print it as a 4×4 map with translation
    Build(Box<BuildArgs>),
    /// Compose maps read from JSON files, rightmost applied first
    Compose {
        #[arg(required = true, num_args = 2..)]
        maps: Vec<PathBuf>,
    },
    /// Classify a special family as GALILEO, LORENTZ or ANISOTROPIC
    Classify {
        #[command(flatten)]
        params: CaseArgs,
        /// Treat parameters below 1e-12 in magnitude as zero
        #[arg(long)]
        numeric: bool,
    },
    /// Compose two collinear velocities with a family's addition law
    Addvel {
        #[command(flatten)]
        params: CaseArgs,
        #[arg(long, allow_hyphen_values = true)]
        v1: f64,
        #[arg(long, allow_hyphen_values = true)]
        v2: f64,
    },
    /// Geometry of the admissible-velocity ellipsoid, optionally sampled
    Ellipsoid(EllipsoidArgs),
    /// Time light around a closed path in a chart and compare with c
    VerifyTwoWay(VerifyArgs),
    /// Recover two-way family parameters from a map, or report non-membership
    Decompose(DecomposeArgs),
    /// Run the acceptance suite; the exit code is the verdict
    Selftest {
        /// Run criteria one after another instead of in parallel
        #[arg(long)]
        sequential: bool,
    },
    /// Emit a table described by a key=value config file
    Sweep { config: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    Galilean,
    Exp,
    Power,
    Bounded,
}

/// A special family from flags. Unset coefficients are zero, `c0` is 1.
#[derive(Args, Debug, Clone)]
pub struct CaseArgs {
    #[arg(long, value_enum)]
    pub case: Case,
    #[arg(long, default_value_t = 1.0)]
    pub c0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub eta: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub l: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub r1: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub r2: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub a1: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub lambda1: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Special family element along `--u` with speed `--v`
    Special,
    Galilei,
    Lorentz,
    /// Reichenbach shear `λK(k)`
    Shear,
    /// `λ·K(k₂)·Σ_R·Λ(V)·K(k₁)⁻¹ + b`
    TwoWay,
    /// Two-way map with `k₂` solved for absolute simultaneity
    AbsoluteSimultaneity,
    Tangherlini,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[arg(long, value_enum, default_value_t = Family::Special)]
    pub family: Family,
    /// Case flags, used by `--family special`
    #[arg(long, value_enum)]
    pub case: Option<Case>,
    #[arg(long)]
    pub c0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub l: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub r1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub r2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda1: Option<f64>,
    /// Scalar speed (special, tangherlini)
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<f64>,
    /// Unit direction for the special family
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true, default_value = "1,0,0")]
    pub u: Vector3<f64>,
    /// Velocity vector (galilei, lorentz, two-way)
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub velocity: Option<Vector3<f64>>,
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub k: Option<Vector3<f64>>,
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub k1: Option<Vector3<f64>>,
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub k2: Option<Vector3<f64>>,
    /// Rotation as a scaled axis (radians)
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub rotation: Option<Vector3<f64>>,
    /// Translation `x1,x2,x3,t`
    #[arg(long, value_parser = parse_vec4, allow_hyphen_values = true)]
    pub translation: Option<Vector4<f64>>,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
}

#[derive(Args, Debug)]
pub struct EllipsoidArgs {
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub k: Vector3<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Random boundary points (needs a seed)
    #[arg(long, conflicts_with_all = ["theta_steps", "phi_steps"])]
    pub points: Option<usize>,
    #[arg(long, requires = "phi_steps")]
    pub theta_steps: Option<usize>,
    #[arg(long, requires = "theta_steps")]
    pub phi_steps: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    Identity,
    /// The shear chart `K(k)`
    Shear,
    /// `t̄ = t + sin(x¹)/(2c)`
    Sine,
    /// An affine map from `--map-file`, read out of the chart with synchrony `--k`
    File,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = MapKind::Identity)]
    pub map: MapKind,
    #[arg(long, required_if_eq("map", "file"))]
    pub map_file: Option<PathBuf>,
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true, default_value = "0,0,0")]
    pub k: Vector3<f64>,
    /// `unit-square` or a JSON file `{"vertices": [[x,y,z], ...]}`
    #[arg(long, default_value = "unit-square")]
    pub path: String,
    /// Quadrature steps per edge
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    pub map_file: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Fit the Tangherlini family instead of the general two-way family
    #[arg(long)]
    pub tangherlini: bool,
}

fn parse_components<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!(
            "expected {N} comma-separated numbers, got {}",
            parts.len()
        ));
    }
    let mut out = [0.0; N];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.parse().map_err(|e| format!("{p:?}: {e}"))?;
    }
    Ok(out)
}

pub fn parse_vec3(s: &str) -> Result<Vector3<f64>, String> {
    parse_components::<3>(s).map(Vector3::from)
}

pub fn parse_vec4(s: &str) -> Result<Vector4<f64>, String> {
    parse_components::<4>(s).map(Vector4::from)
}
