//! Problem files: an algebra, a three-dimensional subspace and a unit body.

use std::path::Path;
use std::str::FromStr;

use nalgebra::{Matrix3, Matrix4x3, Vector3};
use serde::{Deserialize, Serialize};
use subfinsler_core::abnormality::DEFAULT_TOL;
use subfinsler_core::adapted::AdaptedBasis;
use subfinsler_core::catalog::{AlgebraFamily, Family};
use subfinsler_core::gauge::GaugeBody;
use subfinsler_core::{StructureConstants, Subspace, Vector4};

use crate::error::{CliError, Result};

/// Largest Jacobi residual accepted for literal structure constants.
pub const JACOBI_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub algebra: AlgebraSpec,
    /// Three spanning vectors in the `E₁..E₄` coordinates.
    pub subspace: Option<[[f64; 4]; 3]>,
    pub body: Option<BodySpec>,
    #[serde(default)]
    pub frame: FrameChoice,
    #[serde(default)]
    pub tolerances: Tolerances,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraSpec {
    Catalog {
        family: String,
        #[serde(default)]
        params: Vec<f64>,
    },
    /// Nonzero `C^k_ij` with `i < j`; the rest are zero.
    Constants(Vec<ConstantRecord>),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantRecord {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum BodySpec {
    Euclidean,
    /// `{uᵀQu ≤ 1}`, rows of `Q`.
    Ellipsoid { matrix: [[f64; 3]; 3] },
    Polytope { vertices: Vec<[f64; 3]> },
    /// `{Σ |uᵢ/scaleᵢ|^p ≤ 1}`.
    Pnorm {
        p: f64,
        #[serde(default = "unit_scale")]
        scale: [f64; 3],
    },
}

fn unit_scale() -> [f64; 3] {
    [1.0; 3]
}

/// Coordinates the body is written in.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameChoice {
    /// Coefficients of the listed subspace vectors.
    #[default]
    Ambient,
    /// Coefficients of `e₁, e₂, e₃` of the adapted frame the tool reports.
    Adapted,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub support: Option<f64>,
    pub jacobi: Option<f64>,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Builds the module inputs. Literal constants are checked against the
    /// Jacobi identity and matched against the catalog.
    pub fn resolve(&self) -> Result<Problem> {
        let (constants, family) = match &self.algebra {
            AlgebraSpec::Catalog { family, params } => {
                let f = Family::from_str(family).map_err(|_| CliError::Parse(format!("unknown family {family:?}")))?;
                let fam = AlgebraFamily::new(f, params)?;
                (fam.build(), Some(fam))
            }
            AlgebraSpec::Constants(records) => {
                let c = constants_from_records(records)?;
                let tol = self.tolerances.jacobi.unwrap_or(JACOBI_TOL);
                let residual = c.check_jacobi();
                if !(residual <= tol) {
                    return Err(CliError::Jacobi { residual, tol });
                }
                let fam = AlgebraFamily::identify(&c).ok();
                (c, fam)
            }
        };
        let rows = self.subspace.ok_or_else(|| CliError::Parse("missing field `subspace`".into()))?;
        let vectors = rows.map(Vector4::from);
        if vectors.iter().flatten().any(|x| !x.is_finite()) {
            return Err(CliError::Parse("subspace vectors must be finite".into()));
        }
        let subspace = Subspace::of(&vectors);
        if subspace.dim() != 3 {
            return Err(CliError::Parse("subspace vectors are linearly dependent".into()));
        }
        let body = match &self.body {
            None => GaugeBody::euclidean(),
            Some(spec) => spec.build()?,
        };
        if let Some(t) = self.tolerances.support {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Parse("tolerances.support must be positive".into()));
            }
        }
        Ok(Problem {
            constants,
            family,
            vectors,
            subspace,
            body,
            frame: self.frame,
            support_tol: self.tolerances.support.unwrap_or(DEFAULT_TOL),
        })
    }
}

fn constants_from_records(records: &[ConstantRecord]) -> Result<StructureConstants> {
    let mut c = StructureConstants::zero();
    let mut seen = std::collections::BTreeSet::new();
    for r in records {
        if !(1 <= r.i && r.i < r.j && r.j <= 4 && (1..=4).contains(&r.k)) {
            return Err(CliError::Parse(format!(
                "constant ({}, {}, {}) needs 1 <= i < j <= 4 and 1 <= k <= 4",
                r.i, r.j, r.k
            )));
        }
        if !r.value.is_finite() {
            return Err(CliError::Parse(format!("C^{}_{}{} is not finite", r.k, r.i, r.j)));
        }
        if !seen.insert((r.i, r.j, r.k)) {
            return Err(CliError::Parse(format!("C^{}_{}{} given twice", r.k, r.i, r.j)));
        }
        c.set(r.i, r.j, r.k, r.value);
    }
    Ok(c)
}

impl BodySpec {
    pub fn build(&self) -> Result<GaugeBody> {
        let body = match self {
            BodySpec::Euclidean => GaugeBody::euclidean(),
            BodySpec::Ellipsoid { matrix } => {
                GaugeBody::ellipsoid(Matrix3::from_row_iterator(matrix.iter().flatten().copied()))?
            }
            BodySpec::Polytope { vertices } => {
                GaugeBody::polytope(vertices.iter().map(|v| Vector3::from(*v)).collect())?
            }
            BodySpec::Pnorm { p, scale } => GaugeBody::pnorm(*p, *scale)?,
        };
        Ok(body)
    }
}

/// A resolved problem file.
#[derive(Clone, Debug)]
pub struct Problem {
    pub constants: StructureConstants,
    /// Catalog entry, given or recognized.
    pub family: Option<AlgebraFamily>,
    pub vectors: [Vector4; 3],
    pub subspace: Subspace,
    /// The body in the coordinates of [`frame`](Self::frame).
    pub body: GaugeBody,
    pub frame: FrameChoice,
    pub support_tol: f64,
}

impl Problem {
    pub fn algebra_name(&self) -> String {
        match &self.family {
            Some(f) => f.to_string(),
            None => "structure constants".into(),
        }
    }

    /// The body in the coordinates of `basis`.
    pub fn body_in(&self, basis: &AdaptedBasis) -> Result<GaugeBody> {
        match self.frame {
            FrameChoice::Adapted => Ok(self.body.clone()),
            FrameChoice::Ambient => {
                // column i: coefficients of eᵢ over the listed vectors
                let v = Matrix4x3::from_columns(&self.vectors);
                let qr = v.qr();
                let mut m = Matrix3::zeros();
                for i in 0..3 {
                    let x = qr
                        .r()
                        .solve_upper_triangular(&(qr.q().transpose() * basis.e[i]))
                        .ok_or_else(|| CliError::Parse("subspace vectors are linearly dependent".into()))?;
                    m.set_column(i, &x);
                }
                Ok(self.body.pullback(&m)?)
            }
        }
    }
}
