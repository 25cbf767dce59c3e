//! Named state families and their `--param` values.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_complex::Complex;
use serde::Serialize;

use super::{CliError, CliResult};
use crate::states::{bell_phi_plus, x_state, DensityMatrix, NoiseFamilyPoint, XStateParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Bell,
    GhzNoise,
    WNoise,
    Knoll,
    XState,
}

const X_PARAMS: [&str; 8] = ["r11", "r22", "r33", "r44", "re14", "im14", "re23", "im23"];

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Self::Bell => "bell",
            Self::GhzNoise => "ghz-noise",
            Self::WNoise => "w-noise",
            Self::Knoll => "knoll",
            Self::XState => "x-state",
        }
    }

    /// `(required, optional)` parameter names.
    fn params(self) -> (&'static [&'static str], &'static [&'static str]) {
        match self {
            Self::Bell => (&[], &[]),
            Self::GhzNoise => (&["alpha"], &[]),
            Self::WNoise => (&["beta"], &[]),
            Self::Knoll => (&["omega", "eta"], &["gamma"]),
            Self::XState => (&X_PARAMS[..4], &X_PARAMS[4..]),
        }
    }

    /// Parameter a sweep varies when `--vary` is not given.
    pub fn default_sweep_parameter(self) -> Option<&'static str> {
        match self {
            Self::GhzNoise => Some("alpha"),
            Self::WNoise => Some("beta"),
            Self::Knoll => Some("gamma"),
            Self::Bell | Self::XState => None,
        }
    }

    pub fn accepts(self, param: &str) -> bool {
        let (req, opt) = self.params();
        req.contains(&param) || opt.contains(&param)
    }
}

impl std::str::FromStr for Family {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "bell" => Self::Bell,
            "ghz-noise" => Self::GhzNoise,
            "w-noise" => Self::WNoise,
            "knoll" => Self::Knoll,
            "x-state" => Self::XState,
            other => {
                return Err(CliError::Validation(format!(
                    "unknown family {other:?} (bell, ghz-noise, w-noise, knoll, x-state)"
                )))
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    pub family: Family,
    pub params: BTreeMap<String, f64>,
}

impl FamilySpec {
    pub fn parse(name: &str, raw: &[String]) -> CliResult<Self> {
        let family: Family = name.parse()?;
        let mut params = BTreeMap::new();
        for item in raw {
            let (k, v) = item.split_once('=').ok_or_else(|| {
                CliError::Validation(format!("--param {item:?}: expected name=value"))
            })?;
            let k = k.trim().to_ascii_lowercase();
            let v: f64 = v.trim().parse().map_err(|_| {
                CliError::Validation(format!("--param {item:?}: value is not a number"))
            })?;
            if !v.is_finite() {
                return Err(CliError::Validation(format!(
                    "--param {item:?}: value must be finite"
                )));
            }
            if !family.accepts(&k) {
                return Err(CliError::Validation(format!(
                    "family {} has no parameter {k:?}",
                    family.name()
                )));
            }
            if params.insert(k.clone(), v).is_some() {
                return Err(CliError::Validation(format!("--param {k} given twice")));
            }
        }
        Ok(Self { family, params })
    }

    pub fn with(&self, name: &str, value: f64) -> Self {
        let mut out = self.clone();
        out.params.insert(name.to_string(), value);
        out
    }

    fn get(&self, name: &str) -> CliResult<f64> {
        self.params.get(name).copied().ok_or_else(|| {
            CliError::Validation(format!(
                "family {} needs --param {name}=...",
                self.family.name()
            ))
        })
    }

    fn get_or_zero(&self, name: &str) -> f64 {
        self.params.get(name).copied().unwrap_or(0.0)
    }

    pub fn state(&self) -> CliResult<DensityMatrix<f64>> {
        let (required, _) = self.family.params();
        for name in required {
            self.get(name)?;
        }
        let point = match self.family {
            Family::Bell => return Ok(bell_phi_plus()),
            Family::XState => {
                let [r11, r22, r33, r44] = [0, 1, 2, 3].map(|i| self.get_or_zero(X_PARAMS[i]));
                let p = XStateParams::new(
                    [r11, r22, r33, r44],
                    Complex::new(self.get_or_zero("re14"), self.get_or_zero("im14")),
                    Complex::new(self.get_or_zero("re23"), self.get_or_zero("im23")),
                );
                return Ok(x_state(&p)?);
            }
            Family::GhzNoise => NoiseFamilyPoint::GhzWhiteNoise {
                alpha: self.get("alpha")?,
            },
            Family::WNoise => NoiseFamilyPoint::WWhiteNoise {
                beta: self.get("beta")?,
            },
            Family::Knoll => NoiseFamilyPoint::Knoll {
                omega: self.get("omega")?,
                eta: self.get("eta")?,
                gamma: self.params.get("gamma").copied(),
            },
        };
        Ok(point.state()?)
    }

    pub fn descriptor(&self) -> InputDescriptor {
        InputDescriptor::Family {
            family: self.family.name().to_string(),
            params: self.params.clone(),
        }
    }
}

/// Where the analysed state came from.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InputDescriptor {
    Family {
        family: String,
        params: BTreeMap<String, f64>,
    },
    File {
        path: String,
    },
}

impl InputDescriptor {
    pub fn file(path: &Path) -> Self {
        Self::File {
            path: path.display().to_string(),
        }
    }
}

impl fmt::Display for InputDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Family { family, params } => {
                let list: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                write!(f, "{family}({})", list.join(","))
            }
            Self::File { path } => f.write_str(path),
        }
    }
}
