//! The TOML action document.
//!
//! ```toml
//! p = 5
//! signature = -3
//! euler = 5
//! b2 = 3
//! points = [[1, -1], [2, -1], [2, -1]]
//! spheres = [{ c = 1, alpha = -2 }]
//!
//! [line]                 # optional
//! lambda_points = [0, 1, 2]
//! lambda_spheres = [0]
//! m_spheres = [0]
//! c1_squared = 1         # optional; needed by `check --mode line`
//!
//! [su2]                  # optional
//! weights = "fiber"      # or "adjoint"
//! ell_points = [1, 1, 1]
//! ell_spheres = [1]
//! m_spheres = [0]        # may be omitted with --assume-m-zero
//! c2 = 1
//! ```
//!
//! Rotation numbers may be given in any range; they are reduced mod `p`.

use std::path::Path;

use eqbundle::action::symmetric;
use eqbundle::{AdjointLift, GroupAction, LineIsotropy, Su2Isotropy};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub p: u64,
    pub signature: i64,
    pub euler: i64,
    pub b2: i64,
    #[serde(default)]
    pub points: Vec<[i64; 2]>,
    #[serde(default)]
    pub spheres: Vec<SphereDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<LineDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub su2: Option<Su2Doc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereDoc {
    pub c: i64,
    pub alpha: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineDoc {
    #[serde(default)]
    pub lambda_points: Vec<i64>,
    #[serde(default)]
    pub lambda_spheres: Vec<i64>,
    #[serde(default)]
    pub m_spheres: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1_squared: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weights {
    #[default]
    Fiber,
    Adjoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Su2Doc {
    #[serde(default)]
    pub weights: Weights,
    #[serde(default)]
    pub ell_points: Vec<i64>,
    #[serde(default)]
    pub ell_spheres: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_spheres: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c2: Option<i64>,
}

impl Document {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    /// Reads a file, or standard input for `-`.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = if path.as_os_str() == "-" {
            std::io::read_to_string(std::io::stdin())
        } else {
            std::fs::read_to_string(path)
        }
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("document serializes")
    }

    pub fn from_action(action: &GroupAction) -> Self {
        let p = action.p();
        Self {
            p,
            signature: action.signature(),
            euler: action.euler(),
            b2: action.b2(),
            points: action
                .points()
                .iter()
                .map(|pt| {
                    let (a, b) = pt.display_pair(p);
                    [a, b]
                })
                .collect(),
            spheres: action.spheres().iter().map(|s| SphereDoc { c: symmetric(s.c(), p), alpha: s.alpha }).collect(),
            line: None,
            su2: None,
        }
    }

    pub fn action(&self) -> Result<GroupAction, CliError> {
        let points: Vec<(i64, i64)> = self.points.iter().map(|&[a, b]| (a, b)).collect();
        let spheres: Vec<(i64, i64)> = self.spheres.iter().map(|s| (s.c, s.alpha)).collect();
        Ok(GroupAction::new(self.p, &points, &spheres, self.signature, self.euler, self.b2)?)
    }

    pub fn line_isotropy(&self) -> Result<LineIsotropy, CliError> {
        let line = self.line.as_ref().ok_or(CliError::MissingSection("line"))?;
        Ok(LineIsotropy {
            lambda_points: line.lambda_points.clone(),
            lambda_spheres: line.lambda_spheres.clone(),
            m_spheres: line.m_spheres.clone(),
            c1_squared: line.c1_squared,
        })
    }

    fn su2_section(&self) -> Result<&Su2Doc, CliError> {
        self.su2.as_ref().ok_or(CliError::MissingSection("su2"))
    }

    fn su2_m(&self, assume_m_zero: bool) -> Result<Vec<i64>, CliError> {
        match (&self.su2_section()?.m_spheres, assume_m_zero) {
            (Some(m), _) => Ok(m.clone()),
            (None, true) => Ok(vec![0; self.spheres.len()]),
            (None, false) if self.spheres.is_empty() => Ok(Vec::new()),
            (None, false) => Err(CliError::Missing("su2.m_spheres is missing; pass --assume-m-zero to use 0".into())),
        }
    }

    /// Fibre-weight SU(2) data; adjoint weights are halved mod `p`.
    pub fn su2_isotropy(&self, assume_m_zero: bool) -> Result<Su2Isotropy, CliError> {
        let su2 = self.su2_section()?;
        let c2 = su2.c2.ok_or_else(|| CliError::Missing("su2.c2 is missing".into()))?;
        let m_spheres = self.su2_m(assume_m_zero)?;
        match su2.weights {
            Weights::Fiber => Ok(Su2Isotropy {
                ell_points: su2.ell_points.clone(),
                ell_spheres: su2.ell_spheres.clone(),
                m_spheres,
                c2,
            }),
            Weights::Adjoint => {
                let lift =
                    AdjointLift { ell_points: su2.ell_points.clone(), ell_spheres: su2.ell_spheres.clone(), m_spheres };
                Ok(Su2Isotropy::from_adjoint(&lift, self.p, c2)?)
            }
        }
    }

    pub fn adjoint_lift(&self, assume_m_zero: bool) -> Result<AdjointLift, CliError> {
        let su2 = self.su2_section()?;
        let m_spheres = self.su2_m(assume_m_zero)?;
        let lift = AdjointLift { ell_points: su2.ell_points.clone(), ell_spheres: su2.ell_spheres.clone(), m_spheres };
        Ok(match su2.weights {
            Weights::Adjoint => lift,
            Weights::Fiber => {
                let fibre = Su2Isotropy {
                    ell_points: lift.ell_points,
                    ell_spheres: lift.ell_spheres,
                    m_spheres: lift.m_spheres,
                    c2: 0,
                };
                fibre.adjoint_lift()
            }
        })
    }

    pub fn c2(&self) -> Option<i64> {
        self.su2.as_ref().and_then(|s| s.c2)
    }
}
