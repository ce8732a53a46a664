//! Argument definitions and subcommand dispatch for the `allee` binary.

use std::path::{Path, PathBuf};

use allee_core::dynamics::ConnectionKind;
use allee_core::{model, DimensionalParams, ModelParams};
use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};

use crate::commands;
use crate::error::{CliError, CliResult};
use crate::format::Document;
use crate::presets::{self, Preset};

#[derive(Parser, Debug)]
#[command(
    name = "allee",
    version,
    about = "Equilibrium, stability, and bifurcation analysis of a \
             Leslie-Gower predator-prey model with a weak Allee effect",
    after_help = "Exit codes: 0 success, 1 verification failure, 2 validation \
                  error, 3 I/O error, 4 numeric procedure failure."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify boundary and positive equilibria at one parameter point
    Equilibria(EquilibriaArgs),
    /// Phase portrait: nullclines, manifolds, cycles, sample orbits
    Portrait(PortraitArgs),
    /// Two-parameter (Q,S) bifurcation diagram
    Bifurcation(BifurcationArgs),
    /// Basins of attraction over a state-space grid
    Basins(BasinsArgs),
    /// Run the invariant-check suite at one parameter point
    Verify(VerifyArgs),
    /// Bisect for a heteroclinic or homoclinic connection in S
    Connection(ConnectionArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Svg,
    Both,
}

impl OutputFormat {
    pub fn wants_csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }

    pub fn wants_svg(self) -> bool {
        matches!(self, OutputFormat::Svg | OutputFormat::Both)
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectionKindArg {
    Heteroclinic,
    Homoclinic,
}

impl From<ConnectionKindArg> for ConnectionKind {
    fn from(k: ConnectionKindArg) -> Self {
        match k {
            ConnectionKindArg::Heteroclinic => ConnectionKind::Heteroclinic,
            ConnectionKindArg::Homoclinic => ConnectionKind::Homoclinic,
        }
    }
}

/// Parameter, preset, output, and tolerance flags shared by all
/// subcommands. The dimensional flag set uses `-h` for the predator
/// carrying-capacity factor, so the automatic short help flag is disabled
/// and `--help` is declared manually.
#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    #[arg(long = "help", action = ArgAction::Help, help = "Print help")]
    help: Option<bool>,

    /// Relative refuge size A in (0, 1)
    #[arg(short = 'A', value_name = "A", allow_negative_numbers = true)]
    pub big_a: Option<f64>,
    /// Rescaled Allee threshold M (M < 0 is the weak-Allee scope)
    #[arg(short = 'M', value_name = "M", allow_negative_numbers = true)]
    pub big_m: Option<f64>,
    /// Rescaled predation intensity Q > 0
    #[arg(short = 'Q', value_name = "Q", allow_negative_numbers = true)]
    pub big_q: Option<f64>,
    /// Rescaled predator growth rate S > 0
    #[arg(short = 'S', value_name = "S", allow_negative_numbers = true)]
    pub big_s: Option<f64>,

    /// Supply dimensional parameters (-r -K -q -a -s -h -m) instead of
    /// the nondimensional quadruple
    #[arg(long)]
    pub dimensional: bool,
    /// Prey intrinsic growth rate r > 0 (dimensional mode)
    #[arg(short = 'r', value_name = "R", allow_negative_numbers = true)]
    pub dim_r: Option<f64>,
    /// Prey carrying capacity K > 0 (dimensional mode)
    #[arg(short = 'K', value_name = "K", allow_negative_numbers = true)]
    pub dim_k: Option<f64>,
    /// Predation rate q > 0 (dimensional mode)
    #[arg(short = 'q', value_name = "Q", allow_negative_numbers = true)]
    pub dim_q: Option<f64>,
    /// Refuge size a > 0 (dimensional mode)
    #[arg(short = 'a', value_name = "A", allow_negative_numbers = true)]
    pub dim_a: Option<f64>,
    /// Predator growth rate s > 0 (dimensional mode)
    #[arg(short = 's', value_name = "S", allow_negative_numbers = true)]
    pub dim_s: Option<f64>,
    /// Predator carrying factor h > 0 (dimensional mode)
    #[arg(short = 'h', value_name = "H", allow_negative_numbers = true)]
    pub dim_h: Option<f64>,
    /// Allee threshold m (dimensional mode; m < 0 in scope)
    #[arg(short = 'm', value_name = "M", allow_negative_numbers = true)]
    pub dim_m: Option<f64>,

    /// Figure preset id (F02, F04a, F04b, F05a-c, F06a/b, F08, F09a-f,
    /// F10a/b); explicit parameter flags override preset values
    #[arg(long, value_name = "ID")]
    pub figure: Option<String>,
    /// Output directory for generated files
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
    /// Which artifact formats to write
    #[arg(long, value_enum, default_value_t = OutputFormat::Both)]
    pub format: OutputFormat,

    /// Integrator relative tolerance
    #[arg(long = "tol-rel", value_name = "T")]
    pub tol_rel: Option<f64>,
    /// Integrator absolute tolerance
    #[arg(long = "tol-abs", value_name = "T")]
    pub tol_abs: Option<f64>,
    /// Comparison tolerance for finite-difference verification checks
    #[arg(long = "tol-verify", value_name = "T")]
    pub tol_verify: Option<f64>,
    /// Scale for equilibrium-root residual checks
    #[arg(long = "tol-root", value_name = "T")]
    pub tol_root: Option<f64>,
    /// Maximum accepted limit-cycle closure residual
    #[arg(long = "tol-cycle", value_name = "T")]
    pub tol_cycle: Option<f64>,
    /// Connection-search bracket width target
    #[arg(long = "tol-bracket", value_name = "T")]
    pub tol_bracket: Option<f64>,
}

#[derive(Args, Debug)]
#[command(disable_help_flag = true)]
pub struct EquilibriaArgs {
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Args, Debug)]
#[command(disable_help_flag = true)]
pub struct PortraitArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Number of sample trajectories (0 for none)
    #[arg(long, value_name = "N", default_value_t = 8)]
    pub trajectories: usize,
}

#[derive(Args, Debug)]
#[command(disable_help_flag = true)]
pub struct BifurcationArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Parameter window: qmin qmax smin smax
    #[arg(
        long,
        value_names = ["QMIN", "QMAX", "SMIN", "SMAX"],
        num_args = 4,
        allow_negative_numbers = true
    )]
    pub window: Option<Vec<f64>>,
    /// Region-grid resolution per axis
    #[arg(long, value_name = "N")]
    pub resolution: Option<usize>,
}

#[derive(Args, Debug)]
#[command(disable_help_flag = true)]
pub struct BasinsArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// State window: umin umax vmin vmax
    #[arg(
        long,
        value_names = ["UMIN", "UMAX", "VMIN", "VMAX"],
        num_args = 4,
        allow_negative_numbers = true
    )]
    pub window: Option<Vec<f64>>,
    /// Grid resolution per axis
    #[arg(long, value_name = "N")]
    pub resolution: Option<usize>,
}

#[derive(Args, Debug)]
#[command(disable_help_flag = true)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Args, Debug)]
#[command(disable_help_flag = true)]
pub struct ConnectionArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Connection type to search for
    #[arg(long, value_enum)]
    pub kind: Option<ConnectionKindArg>,
    /// S bracket: lo hi
    #[arg(long, value_names = ["LO", "HI"], num_args = 2, allow_negative_numbers = true)]
    pub bracket: Option<Vec<f64>>,
}

/// Tolerances in effect for a run; overridable via `--tol-*`.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
    pub verify: f64,
    pub root: f64,
    pub cycle: f64,
    pub bracket: f64,
}

impl Tolerances {
    fn from_args(args: &ParamArgs) -> Self {
        Tolerances {
            rel: args.tol_rel.unwrap_or(1e-8),
            abs: args.tol_abs.unwrap_or(1e-10),
            verify: args.tol_verify.unwrap_or(1e-5),
            root: args.tol_root.unwrap_or(1e-10),
            cycle: args.tol_cycle.unwrap_or(1e-7),
            bracket: args.tol_bracket.unwrap_or(1e-8),
        }
    }
}

/// Fully resolved run inputs.
pub struct Resolved {
    pub params: ModelParams,
    /// Present when the user supplied the dimensional septuple.
    pub dimensional: Option<DimensionalParams>,
    pub preset: Option<&'static Preset>,
    pub tol: Tolerances,
    pub out: PathBuf,
    pub format: OutputFormat,
}

impl Resolved {
    /// Output path `<out>/<figure->stem.ext`.
    pub fn path(&self, stem: &str, ext: &str) -> PathBuf {
        let prefix = self
            .preset
            .map(|p| format!("{}-", p.id))
            .unwrap_or_default();
        self.out.join(format!("{prefix}{stem}.{ext}"))
    }

    /// Standard header block: schema parameters and active tolerances.
    pub fn push_header(&self, doc: &mut Document) {
        if let Some(p) = self.preset {
            doc.meta("figure", vec![crate::format::Field::text(p.id)]);
        }
        doc.param("A", self.params.a);
        doc.param("M", self.params.m);
        doc.param("Q", self.params.q);
        doc.param("S", self.params.s);
        if let Some(d) = &self.dimensional {
            doc.meta("mode", vec![crate::format::Field::text("dimensional")]);
            doc.param("r", d.r);
            doc.param("K", d.k);
            doc.param("q", d.q);
            doc.param("a", d.a);
            doc.param("s", d.s);
            doc.param("h", d.h);
            doc.param("m", d.m);
        }
        doc.tol("rel", self.tol.rel);
        doc.tol("abs", self.tol.abs);
        doc.tol("verify", self.tol.verify);
        doc.tol("root", self.tol.root);
        doc.tol("cycle", self.tol.cycle);
        doc.tol("bracket", self.tol.bracket);
    }
}

/// Resolves preset/flag/dimensional inputs into a validated parameter set.
///
/// Rules: `--figure` supplies base values that explicit `-A -M -Q -S` flags
/// may override; `--dimensional` requires the full septuple and excludes
/// both the nondimensional flags and `--figure`; otherwise all four
/// nondimensional values are required.
pub fn resolve(args: &ParamArgs) -> CliResult<Resolved> {
    let tol = Tolerances::from_args(args);
    for (name, value) in [
        ("tol-rel", tol.rel),
        ("tol-abs", tol.abs),
        ("tol-verify", tol.verify),
        ("tol-root", tol.root),
        ("tol-cycle", tol.cycle),
        ("tol-bracket", tol.bracket),
    ] {
        if !value.is_finite() || value < 0.0 {
            return Err(CliError::Validation(format!(
                "--{name} must be a finite non-negative number, got {value}"
            )));
        }
    }

    let nondim_given = args.big_a.is_some()
        || args.big_m.is_some()
        || args.big_q.is_some()
        || args.big_s.is_some();

    let (params, dimensional, preset) = if args.dimensional {
        if nondim_given || args.figure.is_some() {
            return Err(CliError::Validation(
                "--dimensional excludes -A/-M/-Q/-S and --figure; supply exactly one \
                 parameter set"
                    .to_string(),
            ));
        }
        let mut missing = Vec::new();
        let mut need = |flag: &'static str, v: Option<f64>| {
            if v.is_none() {
                missing.push(flag);
            }
            v.unwrap_or(f64::NAN)
        };
        let r = need("-r", args.dim_r);
        let k = need("-K", args.dim_k);
        let q = need("-q", args.dim_q);
        let a = need("-a", args.dim_a);
        let s = need("-s", args.dim_s);
        let h = need("-h", args.dim_h);
        let m = need("-m", args.dim_m);
        if !missing.is_empty() {
            return Err(CliError::Validation(format!(
                "dimensional mode requires -r -K -q -a -s -h -m; missing: {}",
                missing.join(" ")
            )));
        }
        let dims = DimensionalParams::new(r, k, q, a, s, h, m)?;
        // Only the parameter map is needed; the state argument is inert here.
        let (params, _) = model::nondimensionalize(&dims, model::DimensionalState::new(k, h * k))?;
        (params, Some(dims), None)
    } else if let Some(id) = &args.figure {
        let preset = presets::lookup(id)?;
        let a = args.big_a.unwrap_or(preset.a);
        let m = args.big_m.unwrap_or(preset.m);
        let q = match args.big_q {
            Some(q) => q,
            None => preset.q_value()?,
        };
        let s = args.big_s.unwrap_or(preset.s);
        (ModelParams::new(a, m, q, s)?, None, Some(preset))
    } else {
        let mut missing = Vec::new();
        for (flag, v) in [
            ("-A", args.big_a),
            ("-M", args.big_m),
            ("-Q", args.big_q),
            ("-S", args.big_s),
        ] {
            if v.is_none() {
                missing.push(flag);
            }
        }
        if !missing.is_empty() {
            return Err(CliError::Validation(format!(
                "missing required parameter flags: {} (or use --figure / --dimensional)",
                missing.join(" ")
            )));
        }
        (
            ModelParams::new(
                args.big_a.unwrap(),
                args.big_m.unwrap(),
                args.big_q.unwrap(),
                args.big_s.unwrap(),
            )?,
            None,
            None,
        )
    };

    if params.m >= 0.0 {
        eprintln!(
            "warning: M = {} >= 0 is outside the weak-Allee scope; results describe \
             the strong/degenerate Allee regime",
            params.m
        );
    }

    Ok(Resolved {
        params,
        dimensional,
        preset,
        tol,
        out: args.out.clone(),
        format: args.format,
    })
}

/// Like [`resolve`], but for subcommands that only need `(A, M)`: missing
/// `Q`/`S` fall back to neutral placeholders instead of erroring.
pub fn resolve_plane(args: &ParamArgs) -> CliResult<Resolved> {
    let mut patched = args.clone();
    if !patched.dimensional && patched.figure.is_none() {
        patched.big_q = patched.big_q.or(Some(1.0));
        patched.big_s = patched.big_s.or(Some(1.0));
    }
    resolve(&patched)
}

/// Writes a document atomically to `path` and echoes the location.
pub fn emit(doc: &Document, path: &Path) -> CliResult<()> {
    crate::fsio::write_atomic(path, doc.to_text().as_bytes())?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn emit_svg(svg: &str, path: &Path) -> CliResult<()> {
    crate::fsio::write_atomic(path, svg.as_bytes())?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Equilibria(args) => commands::equilibria::run(&args),
        Command::Portrait(args) => commands::portrait::run(&args),
        Command::Bifurcation(args) => commands::bifurcation::run(&args),
        Command::Basins(args) => commands::basins::run(&args),
        Command::Verify(args) => commands::verify::run(&args),
        Command::Connection(args) => commands::connection::run(&args),
    }
}
