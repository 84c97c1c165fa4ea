//! Kernel specification files.
//!
//! A spec is a JSON object with a `family`, a `params` map and, for the
//! finite family, a row-major `matrix` of `[re, im]` pairs:
//!
//! ```json
//! { "family": "finite", "matrix": [[[0.3, 0], [0, 0]], [[0, 0], [0.7, 0]]] }
//! { "family": "ginibre", "params": { "alpha": 0.5, "beta": 1.5 } }
//! { "family": "sphere-coefficients",
//!   "params": { "d": 2, "rho": 0.05, "beta": [0.5, 0.25], "tail_ratio": 0.5 } }
//! ```

use dpp_palm::models::{
    ginibre_kernel, jinc_kernel, jinc_kernel_quadrature, multiquadric, sphere_kernel, sphere_model, CoefficientTail,
};
use dpp_palm::{CMatrix, FiniteDpp, GinibreParams, Kernel, SphereModel};
use num_complex::Complex64;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Finite,
    Ginibre,
    Jinc,
    Sinc,
    SphereMultiquadric,
    SphereCoefficients,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Finite => "finite",
            Family::Ginibre => "ginibre",
            Family::Jinc => "jinc",
            Family::Sinc => "sinc",
            Family::SphereMultiquadric => "sphere-multiquadric",
            Family::SphereCoefficients => "sphere-coefficients",
        }
    }

    /// `(name, required)` for every accepted parameter.
    fn params(self) -> &'static [(&'static str, bool)] {
        match self {
            Family::Finite | Family::Sinc => &[],
            Family::Ginibre => &[("alpha", true), ("beta", true)],
            Family::Jinc => &[("d", false)],
            Family::SphereMultiquadric => &[("delta", true), ("rho", true)],
            Family::SphereCoefficients => &[
                ("d", true),
                ("rho", true),
                ("beta", true),
                ("tail_ratio", false),
                ("tail_unknown", false),
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Number(f64),
    List(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSpecFile {
    pub family: Family,
    #[serde(default)]
    pub params: BTreeMap<String, ParamValue>,
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
}

/// A malformed spec file, with the offending field or position.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecError {
    pub field: Option<String>,
    pub message: String,
}

impl SpecError {
    fn field(field: impl Into<String>, message: impl Into<String>) -> SpecError {
        SpecError {
            field: Some(field.into()),
            message: message.into(),
        }
    }
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.field {
            Some(field) => write!(f, "field `{field}`: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for SpecError {}

/// Validated model, ready for the commands.
#[derive(Clone)]
pub enum Model {
    Finite(FiniteDpp),
    Euclidean(Kernel),
    Sphere { model: SphereModel, kernel: Kernel, multiquadric: Option<(f64, f64)> },
}

impl Model {
    pub fn kernel(&self) -> Kernel {
        match self {
            Model::Finite(dpp) => dpp.kernel(),
            Model::Euclidean(k) => k.clone(),
            Model::Sphere { kernel, .. } => kernel.clone(),
        }
    }
}

impl KernelSpecFile {
    pub fn parse(text: &str) -> Result<KernelSpecFile, SpecError> {
        let spec: KernelSpecFile = serde_json::from_str(text).map_err(|e| SpecError {
            field: None,
            message: e.to_string(),
        })?;
        spec.check()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<KernelSpecFile, SpecError> {
        let text = std::fs::read_to_string(path).map_err(|e| SpecError {
            field: None,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    /// Structural checks: known parameter names, finite values, square matrix.
    fn check(&self) -> Result<(), SpecError> {
        let allowed = self.family.params();
        for (name, value) in &self.params {
            if !allowed.iter().any(|(a, _)| a == name) {
                return Err(SpecError::field(
                    format!("params.{name}"),
                    format!("unknown parameter for family `{}`", self.family.name()),
                ));
            }
            let finite = match value {
                ParamValue::Number(x) => x.is_finite(),
                ParamValue::List(xs) => xs.iter().all(|x| x.is_finite()),
            };
            if !finite {
                return Err(SpecError::field(format!("params.{name}"), "value is not finite"));
            }
        }
        for (name, required) in allowed {
            if *required && !self.params.contains_key(*name) {
                return Err(SpecError::field(format!("params.{name}"), "missing required parameter"));
            }
        }
        match (&self.matrix, self.family) {
            (None, Family::Finite) => return Err(SpecError::field("matrix", "finite family needs a matrix")),
            (Some(_), f) if f != Family::Finite => {
                return Err(SpecError::field("matrix", "only the finite family takes a matrix"))
            }
            (Some(m), _) => {
                let n = m.len();
                if n == 0 {
                    return Err(SpecError::field("matrix", "matrix is empty"));
                }
                if let Some(i) = m.iter().position(|row| row.len() != n) {
                    return Err(SpecError::field(
                        format!("matrix[{i}]"),
                        format!("row has {} entries, matrix is not square ({n} rows)", m[i].len()),
                    ));
                }
                if m.iter().flatten().flatten().any(|x| !x.is_finite()) {
                    return Err(SpecError::field("matrix", "entry is not finite"));
                }
            }
            _ => {}
        }
        Ok(())
    }

    fn number(&self, name: &str) -> Result<Option<f64>, SpecError> {
        match self.params.get(name) {
            None => Ok(None),
            Some(ParamValue::Number(x)) => Ok(Some(*x)),
            Some(ParamValue::List(_)) => Err(SpecError::field(format!("params.{name}"), "expected a number")),
        }
    }

    fn required(&self, name: &str) -> Result<f64, SpecError> {
        Ok(self.number(name)?.expect("presence checked on parse"))
    }

    fn dimension(&self, name: &str, default: usize) -> Result<usize, SpecError> {
        match self.number(name)? {
            None => Ok(default),
            Some(x) if x >= 1.0 && x.fract() == 0.0 && x <= 64.0 => Ok(x as usize),
            Some(x) => Err(SpecError::field(format!("params.{name}"), format!("expected a dimension, got {x}"))),
        }
    }

    /// Builds and validates the model. The outer error is an ill-typed
    /// parameter, the inner one the library's validation.
    pub fn build(&self) -> Result<dpp_palm::Result<Model>, SpecError> {
        Ok(match self.family {
            Family::Finite => {
                let rows = self.matrix.as_ref().expect("checked on parse");
                let n = rows.len();
                let m = CMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1]));
                FiniteDpp::validate(m).map(Model::Finite)
            }
            Family::Ginibre => {
                let (alpha, beta) = (self.required("alpha")?, self.required("beta")?);
                GinibreParams::new(alpha, beta)
                    .and_then(ginibre_kernel)
                    .map(Model::Euclidean)
            }
            Family::Sinc => jinc_kernel(1).map(Model::Euclidean),
            Family::Jinc => {
                let d = self.dimension("d", 2)?;
                if d <= 2 {
                    jinc_kernel(d).map(Model::Euclidean)
                } else {
                    jinc_kernel_quadrature(d).map(Model::Euclidean)
                }
            }
            Family::SphereMultiquadric => {
                let (delta, rho) = (self.required("delta")?, self.required("rho")?);
                multiquadric(delta, rho).map(|(model, kernel)| Model::Sphere {
                    model,
                    kernel,
                    multiquadric: Some((delta, rho)),
                })
            }
            Family::SphereCoefficients => {
                let d = self.dimension("d", 2)?;
                let rho = self.required("rho")?;
                let beta = match &self.params["beta"] {
                    ParamValue::List(b) => b.clone(),
                    ParamValue::Number(b) => vec![*b],
                };
                let tail = match (self.number("tail_ratio")?, self.number("tail_unknown")?) {
                    (Some(_), Some(u)) if u != 0.0 => {
                        return Err(SpecError::field("params.tail_unknown", "conflicts with tail_ratio"))
                    }
                    (Some(ratio), _) => CoefficientTail::Geometric { ratio },
                    (None, Some(u)) if u != 0.0 => CoefficientTail::Unknown,
                    _ => CoefficientTail::None,
                };
                sphere_model(d, rho, beta, tail).map(|model| Model::Sphere {
                    kernel: sphere_kernel(&model),
                    model,
                    multiquadric: None,
                })
            }
        })
    }
}
