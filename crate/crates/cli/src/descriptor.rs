//! Text descriptors for weight sequences and reduction indices.
//!
//! Weights: `poly:q`, `geo:c` or `explicit:path`, optionally followed by
//! `^p` to raise every weight to the power `p`. Reductions: `zero`, `log:p`
//! or `explicit:path`. Explicit files hold numbers separated by whitespace
//! or commas; `#` starts a comment.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use latticeforge_core::{ReductionIndices, WeightSequence};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum WeightFamily {
    Poly(f64),
    Geo(f64),
    Explicit(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightDescriptor {
    pub family: WeightFamily,
    pub power: f64,
}

impl WeightDescriptor {
    pub fn resolve(&self) -> Result<WeightSequence> {
        let base = match &self.family {
            WeightFamily::Poly(q) => WeightSequence::polynomial(*q)?,
            WeightFamily::Geo(c) => WeightSequence::geometric(*c)?,
            WeightFamily::Explicit(path) => WeightSequence::explicit(read_numbers(path)?)?,
        };
        Ok(if self.power == 1.0 { base } else { base.pow(self.power)? })
    }

    /// The same family with the power multiplied by `p`.
    pub fn pow(&self, p: f64) -> Self {
        Self { family: self.family.clone(), power: self.power * p }
    }
}

impl FromStr for WeightDescriptor {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let (body, power) = match s.rsplit_once('^') {
            Some((body, p)) => (body, parse_number(s, p)?),
            None => (s, 1.0),
        };
        if !(power > 0.0 && power.is_finite()) {
            return Err(usage(s, "weight power must be positive"));
        }
        let (kind, arg) = body.split_once(':').ok_or_else(|| usage(s, "expected poly:q, geo:c or explicit:path"))?;
        let family = match kind {
            "poly" => WeightFamily::Poly(parse_number(s, arg)?),
            "geo" => WeightFamily::Geo(parse_number(s, arg)?),
            "explicit" if !arg.is_empty() => WeightFamily::Explicit(PathBuf::from(arg)),
            _ => return Err(usage(s, "expected poly:q, geo:c or explicit:path")),
        };
        Ok(Self { family, power })
    }
}

impl fmt::Display for WeightDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            WeightFamily::Poly(q) => write!(f, "poly:{q}")?,
            WeightFamily::Geo(c) => write!(f, "geo:{c}")?,
            WeightFamily::Explicit(p) => write!(f, "explicit:{}", p.display())?,
        }
        if self.power != 1.0 {
            write!(f, "^{}", self.power)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReductionDescriptor {
    Zero,
    Log(f64),
    Explicit(PathBuf),
}

impl ReductionDescriptor {
    pub fn resolve(&self) -> Result<ReductionIndices> {
        Ok(match self {
            Self::Zero => ReductionIndices::Zero,
            Self::Log(p) => ReductionIndices::logarithmic(*p)?,
            Self::Explicit(path) => {
                let values = read_numbers(path)?
                    .into_iter()
                    .map(|x| {
                        if x >= 0.0 && x.fract() == 0.0 && x <= u32::MAX as f64 {
                            Ok(x as u32)
                        } else {
                            Err(CliError::Validation(format!("{}: reduction index {x} is not a non-negative integer", path.display())))
                        }
                    })
                    .collect::<Result<Vec<u32>>>()?;
                ReductionIndices::explicit(values)?
            }
        })
    }
}

impl FromStr for ReductionDescriptor {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        if s == "zero" {
            return Ok(Self::Zero);
        }
        match s.split_once(':') {
            Some(("log", p)) => Ok(Self::Log(parse_number(s, p)?)),
            Some(("explicit", path)) if !path.is_empty() => Ok(Self::Explicit(PathBuf::from(path))),
            _ => Err(usage(s, "expected zero, log:p or explicit:path")),
        }
    }
}

impl fmt::Display for ReductionDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => f.write_str("zero"),
            Self::Log(p) => write!(f, "log:{p}"),
            Self::Explicit(p) => write!(f, "explicit:{}", p.display()),
        }
    }
}

fn usage(token: &str, hint: &str) -> CliError {
    CliError::Usage(format!("bad descriptor '{token}': {hint}"))
}

fn parse_number(token: &str, s: &str) -> Result<f64> {
    s.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| usage(token, &format!("'{s}' is not a number")))
}

fn read_numbers(path: &PathBuf) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    text.lines()
        .map(|line| line.split('#').next().unwrap_or(""))
        .flat_map(|line| line.split(|c: char| c == ',' || c.is_whitespace()))
        .filter(|tok| !tok.is_empty())
        .map(|tok| {
            tok.parse::<f64>().map_err(|_| CliError::Validation(format!("{}: '{tok}' is not a number", path.display())))
        })
        .collect()
}

/// Inclusive integer range `a..b`, a single value, or a comma list.
pub fn parse_list(s: &str) -> Result<Vec<u64>> {
    let bad = || CliError::Usage(format!("bad list '{s}': expected a..b, a single value or a,b,c"));
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    let values: Vec<u64> = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    if values.is_empty() {
        return Err(CliError::Usage(format!("empty list '{s}'")));
    }
    Ok(values)
}
