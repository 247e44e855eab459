use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use photonloc::scenarios::Fig2Scenario;
use photonloc::UnitsConfig;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "photonloc",
    version,
    about = "Energy density and localization diagnostics for single-photon pulse states"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    None,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Operators,
    Isomorphism,
    Energy,
    Scenarios,
    Locality,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Grid points per axis
    #[arg(long, default_value_t = 4096, global = true)]
    pub grid_n: usize,

    /// Length of the periodic box
    #[arg(long, default_value_t = 16.0, global = true)]
    pub domain_length: f64,

    /// Pulse support length L
    #[arg(long, default_value_t = 1.0, global = true)]
    pub pulse_length: f64,

    #[arg(long, default_value_t = 1.0, global = true)]
    pub hbar: f64,

    #[arg(long, default_value_t = 1.0, global = true)]
    pub c: f64,

    #[arg(long, default_value_t = 1.0, global = true)]
    pub eps0: f64,

    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,

    #[arg(long, value_enum, default_value_t = PlotKind::None, global = true)]
    pub plot: PlotKind,

    /// Logarithmic y axis for single plots
    #[arg(long, global = true)]
    pub log_scale: bool,

    #[arg(long, env = "PHOTONLOC_OUTPUT_DIR", default_value = ".", global = true)]
    pub output_dir: PathBuf,

    /// Relative floor below which a value counts as zero
    #[arg(long, default_value_t = 1e-10, global = true)]
    pub floor: f64,

    /// Relative floor above which a value counts as nonzero
    #[arg(long, default_value_t = 1e-8, global = true)]
    pub nonzero_floor: f64,

    /// Box enlargement factor used to compute the figure states
    #[arg(long, default_value_t = 8, global = true)]
    pub padding: usize,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Write the six-panel LP/BB/energy dataset for the three example states
    DemoFig2 {
        /// Also write the three states as JSON state files
        #[arg(long)]
        save_states: bool,
    },
    /// Energy density of a state file
    Energy { state: PathBuf },
    /// Knight test, tail fits and antilocality witness for a state file
    Locality {
        state: PathBuf,

        /// `lo,hi` (1D), `x0,y0,z0,x1,y1,z1` (box) or `cx,cy,cz,r` (ball);
        /// defaults to the support estimate of the stored field
        #[arg(long, allow_hyphen_values = true)]
        source_volume: Option<String>,

        /// Radial tail window `r_min,r_max`; repeatable, defaults to `2L,6L`
        #[arg(long = "windows", allow_hyphen_values = true)]
        windows: Vec<String>,
    },
    /// Run the invariant suites
    Check {
        /// Restrict to the named suites
        #[arg(long, value_enum)]
        suite: Vec<Suite>,
    },
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::Validation(format!("--{name} must be positive, got {v}")))
    }
}

fn fraction(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(CliError::Validation(format!("--{name} must lie in (0, 1), got {v}")))
    }
}

impl CommonArgs {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.grid_n < 2 || !self.grid_n.is_multiple_of(2) {
            return Err(CliError::Validation(format!(
                "--grid-n must be a positive even integer, got {}",
                self.grid_n
            )));
        }
        positive("domain-length", self.domain_length)?;
        positive("pulse-length", self.pulse_length)?;
        if self.pulse_length >= self.domain_length {
            return Err(CliError::Validation("--pulse-length must be shorter than --domain-length".into()));
        }
        positive("hbar", self.hbar)?;
        positive("c", self.c)?;
        positive("eps0", self.eps0)?;
        fraction("floor", self.floor)?;
        fraction("nonzero-floor", self.nonzero_floor)?;
        if self.padding == 0 {
            return Err(CliError::Validation("--padding must be at least 1".into()));
        }
        Ok(())
    }

    pub fn units(&self) -> UnitsConfig {
        UnitsConfig {
            hbar: self.hbar,
            c: self.c,
            eps0: self.eps0,
        }
    }

    pub fn scenario(&self) -> Fig2Scenario {
        Fig2Scenario {
            grid_n: self.grid_n,
            domain_length: self.domain_length,
            pulse_length: self.pulse_length,
            padding: self.padding,
            units: self.units(),
        }
    }
}
