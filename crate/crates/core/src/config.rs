//! TOML instance files.
//!
//! ```toml
//! arm1 = [{ location = 0, weight = 1 }, { location = 1, weight = 1 }]
//! arm2 = { known = "1/2" }
//! discount = { values = [1, 1] }
//!
//! [solver]
//! mode = "exact"
//! ```
//!
//! Numbers may be TOML integers, TOML floats or strings in decimal or
//! fraction syntax. Floats go through their shortest decimal form, so
//! `0.1` means exactly `1/10` in exact mode.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::discount::{DiscountError, DiscountSeq};
use crate::measure::{DiscreteMeasure, MeasureError};
use crate::scalar::{ParseNumberError, Scalar};
use crate::solver::{Arithmetic, BanditState, SolverOptions};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: {source}")]
    Number {
        field: String,
        source: ParseNumberError,
    },
    #[error("{field}: {source}")]
    Measure {
        field: &'static str,
        source: MeasureError,
    },
    #[error("discount: {0}")]
    Discount(#[from] DiscountError),
    #[error("discount: {0}")]
    Family(&'static str),
    #[error("arm2 is required for a two-armed instance")]
    MissingArm2,
}

/// Numeric field: integer, float, or decimal/fraction string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Number {
    fn text(&self) -> String {
        match self {
            Number::Int(i) => i.to_string(),
            Number::Float(f) => f.to_string(),
            Number::Text(s) => s.trim().to_string(),
        }
    }

    pub fn parse<S: Scalar>(&self, field: impl Into<String>) -> Result<S, ConfigError> {
        S::parse_number(&self.text()).map_err(|source| ConfigError::Number {
            field: field.into(),
            source,
        })
    }
}

impl<S: Scalar> From<&S> for Number {
    fn from(x: &S) -> Self {
        Number::Text(x.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub location: Number,
    pub weight: Number,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ArmSpec {
    Known { known: Number },
    Atoms(Vec<AtomSpec>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Uniform,
    Geometric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DiscountSpec {
    Values {
        values: Vec<Number>,
    },
    Family {
        family: Family,
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        beta: Option<Number>,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Arithmetic>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tie_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub memo_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parallel: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    pub arm1: ArmSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arm2: Option<ArmSpec>,
    pub discount: DiscountSpec,
    #[serde(default, skip_serializing_if = "is_default")]
    pub solver: SolverSpec,
}

fn is_default(s: &SolverSpec) -> bool {
    *s == SolverSpec::default()
}

fn line_column(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn arm_measure<S: Scalar>(
    spec: &ArmSpec,
    field: &'static str,
) -> Result<DiscreteMeasure<S>, ConfigError> {
    let measure = match spec {
        ArmSpec::Known { known } => {
            DiscreteMeasure::point_mass(known.parse(format!("{field}.known"))?, S::one())
        }
        ArmSpec::Atoms(atoms) => {
            let pairs = atoms
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    Ok((
                        a.location.parse(format!("{field}[{i}].location"))?,
                        a.weight.parse(format!("{field}[{i}].weight"))?,
                    ))
                })
                .collect::<Result<Vec<(S, S)>, ConfigError>>()?;
            DiscreteMeasure::new(pairs)
        }
    };
    measure.map_err(|source| ConfigError::Measure { field, source })
}

impl InstanceConfig {
    pub fn from_toml_str(src: &str) -> Result<Self, ConfigError> {
        toml::from_str(src).map_err(|e: toml::de::Error| {
            let (line, column) = e.span().map_or((1, 1), |s| line_column(src, s.start));
            ConfigError::Parse {
                line,
                column,
                message: e.message().to_string(),
            }
        })
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Writes every number as a decimal or fraction string.
    pub fn from_state<S: Scalar>(state: &BanditState<S>, solver: SolverSpec) -> Self {
        let atoms = |m: &DiscreteMeasure<S>| {
            ArmSpec::Atoms(
                m.atoms()
                    .iter()
                    .map(|a| AtomSpec {
                        location: Number::from(&a.location),
                        weight: Number::from(&a.weight),
                    })
                    .collect(),
            )
        };
        Self {
            arm1: atoms(&state.arm1),
            arm2: Some(atoms(&state.arm2)),
            discount: DiscountSpec::Values {
                values: state.discount.values().iter().map(Number::from).collect(),
            },
            solver,
        }
    }

    pub fn arm1<S: Scalar>(&self) -> Result<DiscreteMeasure<S>, ConfigError> {
        arm_measure(&self.arm1, "arm1")
    }

    pub fn arm2<S: Scalar>(&self) -> Result<Option<DiscreteMeasure<S>>, ConfigError> {
        self.arm2
            .as_ref()
            .map(|a| arm_measure(a, "arm2"))
            .transpose()
    }

    /// Payoff of arm 2 when it is given as `{ known = λ }`.
    pub fn known_payoff<S: Scalar>(&self) -> Result<Option<S>, ConfigError> {
        match &self.arm2 {
            Some(ArmSpec::Known { known }) => known.parse("arm2.known").map(Some),
            _ => Ok(None),
        }
    }

    pub fn discount<S: Scalar>(&self) -> Result<DiscountSeq<S>, ConfigError> {
        match &self.discount {
            DiscountSpec::Values { values } => {
                let v = values
                    .iter()
                    .enumerate()
                    .map(|(i, x)| x.parse(format!("discount.values[{i}]")))
                    .collect::<Result<Vec<S>, _>>()?;
                Ok(DiscountSeq::new(v)?)
            }
            DiscountSpec::Family { family, n, beta } => match (family, beta) {
                (Family::Uniform, None) => Ok(DiscountSeq::uniform(*n)?),
                (Family::Uniform, Some(_)) => Err(ConfigError::Family("uniform takes no beta")),
                (Family::Geometric, Some(b)) => Ok(DiscountSeq::truncated_geometric(
                    b.parse("discount.beta")?,
                    *n,
                )?),
                (Family::Geometric, None) => Err(ConfigError::Family("geometric needs beta")),
            },
        }
    }

    pub fn state<S: Scalar>(&self) -> Result<BanditState<S>, ConfigError> {
        let arm2 = self.arm2()?.ok_or(ConfigError::MissingArm2)?;
        Ok(BanditState::new(self.arm1()?, arm2, self.discount()?))
    }

    pub fn solver_options(&self) -> SolverOptions {
        let d = SolverOptions::default();
        SolverOptions {
            mode: self.solver.mode.unwrap_or(d.mode),
            tie_tol: self.solver.tie_tol.unwrap_or(d.tie_tol),
            memo_cap: self.solver.memo_cap.unwrap_or(d.memo_cap),
            parallel: self.solver.parallel.unwrap_or(d.parallel),
        }
    }
}

impl fmt::Display for InstanceConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_toml_string())
    }
}
