use std::fs;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use sdepth_core::formulas::{maximal_ideal_sdepth, morey_depth_lower_bound, path_power_sdepth};
use sdepth_core::poset::DEFAULT_VOLUME_LIMIT;
use sdepth_core::{BoundVector, CharPoset, Error, Mode, MonomialIdeal};
use serde::Serialize;

use crate::CliError;

pub const VOLUME_ENV: &str = "SDEPTH_VOLUME_LIMIT";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    /// Path ideal I(P_n), optionally raised to --t
    Path,
    /// Power I(P_n)^t of the path ideal
    PathPower,
    /// Graded maximal ideal (x1, ..., xn)
    Maximal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Quotient,
    Ideal,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Quotient => Mode::Quotient,
            ModeArg::Ideal => Mode::Ideal,
        }
    }
}

/// Where the ideal comes from, plus the poset options.
#[derive(Clone, Debug, Args)]
pub struct InstanceArgs {
    /// Built-in ideal family
    #[arg(long, conflicts_with = "ideal", required_unless_present = "ideal", requires = "n")]
    pub family: Option<FamilyArg>,

    /// Number of variables for --family
    #[arg(long)]
    pub n: Option<usize>,

    /// Power for the path families
    #[arg(long)]
    pub t: Option<u32>,

    /// Ideal file: a `vars <n>` line followed by one monomial per line
    #[arg(long, value_name = "FILE")]
    pub ideal: Option<PathBuf>,

    /// Poset of S/I (quotient) or of I (ideal); defaults to ideal for the
    /// maximal family and quotient otherwise
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,

    /// Bound vector as a comma-separated list; defaults to the componentwise
    /// maximum of the generators, floored at 1
    #[arg(long, value_delimiter = ',')]
    pub g: Option<Vec<u32>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Instance {
    pub source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<u32>,
    pub g: Vec<u32>,
    pub mode: String,
    #[serde(skip)]
    pub ideal: MonomialIdeal,
    #[serde(skip)]
    pub bound: BoundVector,
}

pub fn family_ideal(family: FamilyArg, n: usize, t: Option<u32>) -> Result<(MonomialIdeal, Option<u32>), Error> {
    match family {
        FamilyArg::Path => {
            let t = t.unwrap_or(1);
            Ok((MonomialIdeal::path(n)?.power(t)?, Some(t)))
        }
        FamilyArg::PathPower => {
            let t = t.ok_or_else(|| Error::Argument("--family path-power needs --t".into()))?;
            Ok((MonomialIdeal::path(n)?.power(t)?, Some(t)))
        }
        FamilyArg::Maximal => {
            if t.is_some_and(|t| t != 1) {
                return Err(Error::Argument("--t does not apply to the maximal family".into()));
            }
            Ok((MonomialIdeal::maximal(n)?, None))
        }
    }
}

pub fn default_mode(family: Option<FamilyArg>) -> Mode {
    match family {
        Some(FamilyArg::Maximal) => Mode::Ideal,
        _ => Mode::Quotient,
    }
}

/// Closed-form value for a family instance, when one applies to the mode.
pub fn formula(family: FamilyArg, n: usize, t: Option<u32>, mode: Mode) -> Result<Option<u32>, Error> {
    let n = n as u32;
    Ok(match (family, mode) {
        (FamilyArg::Path | FamilyArg::PathPower, Mode::Quotient) => Some(path_power_sdepth(n, t.unwrap_or(1))?),
        (FamilyArg::Maximal, Mode::Ideal) => Some(maximal_ideal_sdepth(n)?),
        _ => None,
    })
}

/// The cited lower bound on depth(S/I(P_n)^t), reported next to path results.
pub fn cited_depth_bound(family: FamilyArg, n: usize, t: Option<u32>, mode: Mode) -> Result<Option<u32>, Error> {
    Ok(match (family, mode) {
        (FamilyArg::Path | FamilyArg::PathPower, Mode::Quotient) => {
            Some(morey_depth_lower_bound(n as u32, t.unwrap_or(1))?)
        }
        _ => None,
    })
}

impl InstanceArgs {
    pub fn resolve(&self) -> Result<Instance, CliError> {
        let (ideal, family, file, t) = match (&self.family, &self.ideal) {
            (Some(family), None) => {
                let n = self.n.ok_or_else(|| CliError::usage("--family needs --n"))?;
                let (ideal, t) = family_ideal(*family, n, self.t)?;
                (ideal, Some(*family), None, t)
            }
            (None, Some(path)) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
                (
                    MonomialIdeal::parse_file(&text)?,
                    None,
                    Some(path.display().to_string()),
                    None,
                )
            }
            _ => return Err(CliError::usage("give exactly one of --family or --ideal")),
        };
        let mode = self.mode.map(Mode::from).unwrap_or_else(|| default_mode(family));
        match mode {
            Mode::Quotient if ideal.is_unit() => {
                return Err(Error::EmptyPoset(format!("S/I is zero for the unit ideal {ideal}")).into())
            }
            Mode::Ideal if ideal.is_zero() => {
                return Err(Error::EmptyPoset("the zero ideal has no members".into()).into())
            }
            _ => {}
        }
        let bound = match &self.g {
            Some(g) => BoundVector::from_slice(g)?,
            None => BoundVector::default_for(&ideal)?,
        };
        Ok(Instance {
            source: if family.is_some() { "family" } else { "file" },
            family,
            file,
            n: ideal.n_vars(),
            t,
            g: bound.as_vector().as_slice().to_vec(),
            mode: mode.to_string(),
            ideal,
            bound,
        })
    }
}

impl Instance {
    pub fn mode(&self) -> Mode {
        self.mode.parse().expect("mode was produced by Display")
    }

    pub fn poset(&self) -> Result<CharPoset, CliError> {
        Ok(CharPoset::build(
            &self.ideal,
            &self.bound,
            self.mode(),
            volume_limit()?,
        )?)
    }
}

pub fn volume_limit() -> Result<u64, CliError> {
    match std::env::var(VOLUME_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("{VOLUME_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_VOLUME_LIMIT),
    }
}
