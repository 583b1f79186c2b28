//! Command-line front end: build states, report entanglement, maximize the
//! Svetlichny operator, sweep the state families, check the 3-parameter
//! bounds and estimate the 3-tangle from simulated shots.

pub mod commands;
pub mod format;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use tritangle_core::{Complex64, Family, FamilyParams, PureState3};

pub use commands::run;
pub use format::SweepRecord;

#[derive(Debug, Parser)]
#[command(name = "tritangle", version, about = "3-tangle and Svetlichny nonlocality of three-qubit pure states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a state's amplitudes and its entanglement measures.
    State(StateArgs),
    /// Numerically maximize the Svetlichny operator for a state.
    Svetlichny(SvetlichnyArgs),
    /// Tabulate analytic and numerical S_max over a family's parameter grid.
    Sweep(SweepArgs),
    /// Check |S²/16 − 1| ≤ τ ≤ S²/32 on random 3-parameter family states.
    VerifyBounds(VerifyBoundsArgs),
    /// Estimate τ of a GGHZ state from simulated measurement shots.
    Estimate(EstimateArgs),
}

/// A state given either as a family member or as eight raw amplitudes.
#[derive(Debug, Clone, Default, Args)]
pub struct StateSpec {
    /// State family.
    #[arg(long, value_parser = parse_family, conflicts_with = "amps")]
    pub family: Option<Family>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta3: Option<f64>,
    /// Eight comma-separated complex amplitudes such as `0.5+0.5i`; normalized on input.
    #[arg(long, allow_hyphen_values = true)]
    pub amps: Option<String>,
    /// Read angles in degrees instead of radians.
    #[arg(long)]
    pub degrees: bool,
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    #[command(flatten)]
    pub state: StateSpec,
}

#[derive(Debug, Clone, Args)]
pub struct SvetlichnyArgs {
    #[command(flatten)]
    pub state: StateSpec,
    /// Number of optimizer restarts.
    #[arg(long, default_value_t = 64)]
    pub budget: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    /// Grid size, at least 2.
    #[arg(long, default_value_t = 41)]
    pub points: usize,
    #[arg(long, default_value_t = 64)]
    pub budget: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Fixed θ2 for the 3-parameter family sweep (default π/2).
    #[arg(long, allow_negative_numbers = true)]
    pub theta2: Option<f64>,
    /// Fixed θ3 for the 3-parameter family sweep (default π/2).
    #[arg(long, allow_negative_numbers = true)]
    pub theta3: Option<f64>,
    #[arg(long)]
    pub degrees: bool,
    /// CSV destination; without it the CSV goes to standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a gnuplot script next to the CSV as `<out>.gp`.
    #[arg(long, requires = "out")]
    pub gnuplot: bool,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyBoundsArgs {
    /// Number of random (θ1, θ2, θ3) triples.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 64)]
    pub budget: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Check one triple instead of random samples; needs all three angles.
    #[arg(long, allow_negative_numbers = true)]
    pub theta1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta3: Option<f64>,
    #[arg(long)]
    pub degrees: bool,
}

#[derive(Debug, Clone, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub state: StateSpec,
    /// Shots per measurement setting.
    #[arg(long, default_value_t = 100_000)]
    pub shots: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse()
}

pub(crate) fn to_radians(x: f64, degrees: bool) -> f64 {
    if degrees {
        x.to_radians()
    } else {
        x
    }
}

/// Parse `--amps`: eight comma-separated complex literals.
pub fn parse_amps(text: &str) -> Result<[Complex64; 8]> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 8 {
        bail!("--amps: expected 8 comma-separated amplitudes, got {}", parts.len());
    }
    let mut out = [Complex64::new(0.0, 0.0); 8];
    for (i, p) in parts.iter().enumerate() {
        let compact: String = p.chars().filter(|c| !c.is_whitespace()).collect();
        out[i] = compact
            .parse::<Complex64>()
            .map_err(|_| anyhow!("--amps: entry {} `{p}` is not a complex number", i + 1))?;
        if !(out[i].re.is_finite() && out[i].im.is_finite()) {
            bail!("--amps: entry {} `{p}` is not finite", i + 1);
        }
    }
    Ok(out)
}

/// A resolved input state and, when it came from a family, its parameters.
#[derive(Clone, Debug)]
pub struct ResolvedState {
    pub state: PureState3,
    pub params: Option<FamilyParams>,
}

impl StateSpec {
    pub fn resolve(&self) -> Result<ResolvedState> {
        if let Some(amps) = &self.amps {
            if self.theta1.is_some() || self.theta2.is_some() || self.theta3.is_some() {
                bail!("--amps cannot be combined with --theta1/--theta2/--theta3");
            }
            let raw = parse_amps(amps)?;
            let state = PureState3::from_amplitudes(raw).context("--amps")?;
            return Ok(ResolvedState { state, params: None });
        }
        let family = self
            .family
            .ok_or_else(|| anyhow!("either --family or --amps is required"))?;
        let angle = |v: Option<f64>, flag: &str| -> Result<f64> {
            let x = v.ok_or_else(|| anyhow!("{flag} is required for family {family}"))?;
            if !x.is_finite() {
                bail!("{flag} must be finite");
            }
            Ok(to_radians(x, self.degrees))
        };
        let unused = |v: Option<f64>, flag: &str| -> Result<()> {
            match v {
                Some(_) => bail!("{flag} is not used by family {family}"),
                None => Ok(()),
            }
        };
        let params = match family {
            Family::Gghz => {
                unused(self.theta2, "--theta2")?;
                unused(self.theta3, "--theta3")?;
                FamilyParams::gghz(angle(self.theta1, "--theta1")?)
            }
            Family::Ms => {
                unused(self.theta1, "--theta1")?;
                unused(self.theta2, "--theta2")?;
                FamilyParams::ms(angle(self.theta3, "--theta3")?)
            }
            Family::ThreeParam => FamilyParams::three_param(
                angle(self.theta1, "--theta1")?,
                angle(self.theta2, "--theta2")?,
                angle(self.theta3, "--theta3")?,
            ),
        };
        Ok(ResolvedState {
            state: params.state(),
            params: Some(params),
        })
    }
}
