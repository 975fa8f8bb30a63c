//! The `gft` command: transforms of field files, theorem checks, PPM color
//! images and a preset listing.
//!
//! Exit codes: 0 success, 1 a theorem check failed, 2 bad input (usage,
//! parse or validation errors), 3 I/O errors.

pub mod fieldfile;
pub mod kernelconfig;
pub mod ppm;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use gft_core::kernels::{separability, Separability};
use gft_core::theorems::{run_suite, suite_presets, Status, SuiteConfig, Theorem};
use gft_core::transform::default_freqs;
use gft_core::{gft, FreqGrid, GftError, GftSpec, Grid, Multivector, Preset, Side, Signature};

use fieldfile::{Encoding, FieldFile, Kind};
use kernelconfig::KernelConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "gft", version, about = "Geometric Fourier transforms over Clifford algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transform a field file and write its spectrum.
    Transform(TransformArgs),
    /// Check the transform's calculation rules on random data.
    Verify(VerifyArgs),
    /// Transform a PPM color image with the color-image preset.
    Image(ImageArgs),
    /// List the built-in presets.
    Presets(PresetsArgs),
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    /// Input field (.mvf).
    #[arg(long)]
    pub field: PathBuf,
    /// Preset name, e.g. quaternionic or clifford:3.
    #[arg(long, required_unless_present = "kernels", conflicts_with = "kernels")]
    pub preset: Option<String>,
    /// Kernel config file (TOML).
    #[arg(long)]
    pub kernels: Option<PathBuf>,
    /// `auto`, `auto:SCALE`, or a file whose header gives dims/origin/spacing.
    #[arg(long, default_value = "auto")]
    pub freqs: String,
    /// Output spectrum (.mvf).
    #[arg(long)]
    pub out: PathBuf,
    /// Write the payload as little-endian f64 instead of text.
    #[arg(long)]
    pub binary: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// linearity, scaling, left-product, right-product, shift, existence, or all.
    #[arg(long, default_value = "all")]
    pub theorem: String,
    /// Preset name, or `all` for every built-in preset.
    #[arg(long, default_value = "all")]
    pub preset: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Grid nodes per axis (at most 4 for four-dimensional transforms).
    #[arg(long, default_value_t = 8)]
    pub size: usize,
    /// Relative tolerance for every check (defaults: 1e-12 linearity, 1e-10 otherwise).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Also print norms and term counts.
    #[arg(long)]
    pub verbose: bool,
}

#[derive(Debug, Args)]
pub struct ImageArgs {
    /// Binary PPM (P6) image.
    #[arg(long)]
    pub input: PathBuf,
    /// Unit bivector of G(4,0) used by the kernels.
    #[arg(long, default_value = "e12")]
    pub bivector: String,
    #[arg(long, default_value = "auto")]
    pub freqs: String,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub binary: bool,
}

#[derive(Debug, Args)]
pub struct PresetsArgs {
    /// Dimension for the parametrized presets.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Print JSON instead of a table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(msg) => f.write_str(msg),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl From<GftError> for CliError {
    fn from(e: GftError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

fn invalid(e: impl fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Transform(a) => cmd_transform(&a, out),
        Command::Verify(a) => cmd_verify(&a, out, err),
        Command::Image(a) => cmd_image(&a, out),
        Command::Presets(a) => cmd_presets(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Frequency grid from `auto`, `auto:SCALE` or a grid file.
pub fn resolve_freqs(spec: &str, field_grid: &Grid) -> Result<FreqGrid, CliError> {
    if spec == "auto" {
        return Ok(default_freqs(field_grid, 1.0)?);
    }
    if let Some(scale) = spec.strip_prefix("auto:") {
        let scale: f64 = scale.parse().map_err(|_| invalid(format!("bad frequency scale '{scale}'")))?;
        return Ok(default_freqs(field_grid, scale)?);
    }
    let bytes = read(Path::new(spec))?;
    let grid = fieldfile::parse_grid(&bytes).map_err(|e| invalid(format!("{spec}: {e}")))?;
    if grid.dim() != field_grid.dim() {
        return Err(invalid(format!(
            "{spec}: frequency grid has {} axes, the field has {}",
            grid.dim(),
            field_grid.dim()
        )));
    }
    Ok(grid)
}

fn load_spec(preset: Option<&str>, kernels: Option<&Path>) -> Result<GftSpec, CliError> {
    match (preset, kernels) {
        (Some(name), _) => Ok(name.parse::<Preset>()?.build()?),
        (None, Some(path)) => {
            let text = String::from_utf8(read(path)?).map_err(|_| invalid(format!("{}: not UTF-8", path.display())))?;
            KernelConfig::parse(&text).and_then(|c| c.to_spec()).map_err(invalid)
        }
        (None, None) => Err(invalid("one of --preset or --kernels is required")),
    }
}

fn encoding(binary: bool) -> Encoding {
    if binary {
        Encoding::Binary
    } else {
        Encoding::Text
    }
}

fn shape(grid: &Grid) -> String {
    grid.dims().iter().map(|d| d.to_string()).collect::<Vec<_>>().join("x")
}

pub fn cmd_transform(args: &TransformArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let input =
        FieldFile::from_bytes(&read(&args.field)?).map_err(|e| invalid(format!("{}: {e}", args.field.display())))?;
    let spec = load_spec(args.preset.as_deref(), args.kernels.as_deref())?;
    let freqs = resolve_freqs(&args.freqs, input.field.grid())?;
    let spectrum = gft(&spec, &input.field, &freqs)?;
    write(&args.out, &FieldFile::new(Kind::Spectrum, spectrum).to_bytes(encoding(args.binary)))?;
    let _ = writeln!(out, "wrote {} spectrum over {} to {}", shape(&freqs), spec.sig(), args.out.display());
    Ok(EXIT_OK)
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let theorems: Vec<Theorem> =
        if args.theorem == "all" { Theorem::ALL.to_vec() } else { vec![args.theorem.parse()?] };
    let presets = if args.preset == "all" { suite_presets() } else { vec![args.preset.parse::<Preset>()?] };
    if let Some(tol) = args.tol {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(invalid(format!("tolerance must be positive, got {tol}")));
        }
    }
    let cfg = SuiteConfig { seed: args.seed, size: args.size, tol: args.tol };
    let (mut passed, mut failed, mut skipped) = (0, 0, 0);
    for preset in &presets {
        for mut report in run_suite(preset, &theorems, &cfg)? {
            if presets.len() > 1 {
                report.name = format!("{preset}/{}", report.name);
            }
            let _ = writeln!(out, "{report}");
            if args.verbose && !matches!(report.status, Status::Skip(_)) {
                let terms = report.terms.map(|t| format!(" terms={t}")).unwrap_or_default();
                let _ = writeln!(out, "  lhs_norm={:e} rhs_norm={:e}{terms}", report.lhs_norm, report.rhs_norm);
            }
            match report.status {
                Status::Pass => passed += 1,
                Status::Fail => failed += 1,
                Status::Skip(_) => skipped += 1,
            }
        }
    }
    let _ = writeln!(err, "{passed} passed, {failed} failed, {skipped} skipped");
    Ok(if failed > 0 { EXIT_FAILED } else { EXIT_OK })
}

pub fn cmd_image(args: &ImageArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let bytes = read(&args.input)?;
    let img = ppm::decode(&bytes).map_err(|e| invalid(format!("{}: {e}", args.input.display())))?;
    let bivector = Multivector::parse(Signature::euclidean(4)?, &args.bivector)?;
    let spec = Preset::ColorImage(bivector).build()?;
    let field = ppm::to_field(&img).map_err(invalid)?;
    let freqs = resolve_freqs(&args.freqs, field.grid())?;
    let spectrum = gft(&spec, &field, &freqs)?;
    write(&args.out, &FieldFile::new(Kind::Spectrum, spectrum).to_bytes(encoding(args.binary)))?;
    let _ = writeln!(
        out,
        "wrote {} spectrum of a {}x{} image to {}",
        shape(&freqs),
        img.width,
        img.height,
        args.out.display()
    );
    Ok(EXIT_OK)
}

/// One line of the preset listing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PresetRow {
    pub name: String,
    pub signature: Option<String>,
    pub m: Option<usize>,
    pub mu: Option<usize>,
    pub nu: Option<usize>,
    pub left_separable: Option<String>,
    pub right_separable: Option<String>,
    pub note: Option<String>,
}

fn separability_label(spec: &GftSpec, side: Side) -> String {
    match separability(spec, side) {
        Separability::Constant(_) => "yes",
        Separability::UDependent => "unknown",
        Separability::NotSeparable => "no",
    }
    .to_string()
}

pub fn preset_rows(n: usize) -> Vec<PresetRow> {
    let presets = [
        Preset::Clifford(n),
        Preset::Buelow(n),
        Preset::Quaternionic,
        Preset::Spacetime,
        Preset::ColorImage(Preset::default_color_bivector()),
        Preset::Cylindrical(n),
    ];
    presets
        .iter()
        .map(|p| match p.build() {
            Ok(spec) => PresetRow {
                name: p.to_string(),
                signature: Some(spec.sig().to_string()),
                m: Some(spec.dim()),
                mu: Some(spec.mu()),
                nu: Some(spec.nu()),
                left_separable: Some(separability_label(&spec, Side::Left)),
                right_separable: Some(separability_label(&spec, Side::Right)),
                note: None,
            },
            Err(e) => PresetRow {
                name: p.to_string(),
                signature: None,
                m: None,
                mu: None,
                nu: None,
                left_separable: None,
                right_separable: None,
                note: Some(e.to_string()),
            },
        })
        .collect()
}

pub fn cmd_presets(args: &PresetsArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let rows = preset_rows(args.n);
    if args.json {
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&rows).map_err(invalid)?);
        return Ok(EXIT_OK);
    }
    let cell = |v: &Option<String>| v.clone().unwrap_or_else(|| "-".into());
    let num = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_else(|| "-".into());
    let header = format!(
        "{:<16} {:<9} {:>2} {:>3} {:>3}  {:<9} {}",
        "preset", "algebra", "m", "mu", "nu", "left-sep", "right-sep"
    );
    let _ = writeln!(out, "{header}");
    for r in &rows {
        let mut line = format!(
            "{:<16} {:<9} {:>2} {:>3} {:>3}  {:<9} {:<9}",
            r.name,
            cell(&r.signature),
            num(r.m),
            num(r.mu),
            num(r.nu),
            cell(&r.left_separable),
            cell(&r.right_separable)
        );
        if let Some(note) = &r.note {
            line.push_str(note);
        }
        let _ = writeln!(out, "{}", line.trim_end());
    }
    Ok(EXIT_OK)
}
