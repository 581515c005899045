//! Wire formats shared with the CLI: the space config file, JSON forms
//! of graded matrices, state values and face descriptions, and the
//! constraint-system ingestion format. Matrix payloads are row-major
//! real/imaginary part lists.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::face::{FaceDescription, LinearConstraint};
use crate::rkhs::{GradedMatrix, StateValue};
use crate::series::{SpaceKind, SpaceSpec};

/// Config-file form of a space: `kind` is `"hs"` or `"explicit"`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SpaceConfig {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
}

impl SpaceConfig {
    pub fn to_spec(&self) -> Result<SpaceSpec> {
        match self.kind.as_str() {
            "hs" => {
                let s = self
                    .s
                    .ok_or_else(|| Error::InvalidSpec("kind \"hs\" needs the key `s`".into()))?;
                let depth = self.depth.ok_or_else(|| {
                    Error::InvalidSpec("kind \"hs\" needs the key `depth`".into())
                })?;
                if depth == 0 {
                    return Err(Error::InvalidSpec("depth must be ≥ 1".into()));
                }
                Ok(SpaceSpec::hs(s, depth))
            }
            "explicit" => {
                let coeffs = self.coeffs.clone().ok_or_else(|| {
                    Error::InvalidSpec("kind \"explicit\" needs the key `coeffs`".into())
                })?;
                if coeffs.len() < 2 {
                    return Err(Error::InvalidSpec(
                        "explicit coefficient list needs at least two entries".into(),
                    ));
                }
                if let Some(depth) = self.depth {
                    if depth != coeffs.len() - 1 {
                        return Err(Error::InvalidSpec(format!(
                            "depth {} disagrees with {} coefficients",
                            depth,
                            coeffs.len()
                        )));
                    }
                }
                Ok(SpaceSpec::explicit(coeffs))
            }
            other => Err(Error::InvalidSpec(format!("unknown kind \"{other}\""))),
        }
    }

    pub fn from_spec(spec: &SpaceSpec) -> Self {
        match &spec.kind {
            SpaceKind::HsScale(s) => SpaceConfig {
                kind: "hs".into(),
                s: Some(*s),
                coeffs: None,
                depth: Some(spec.depth),
            },
            SpaceKind::Explicit(coeffs) => SpaceConfig {
                kind: "explicit".into(),
                s: None,
                coeffs: Some(coeffs.clone()),
                depth: Some(spec.depth),
            },
        }
    }
}

fn matrix_to_parts(m: &DMatrix<Complex64>) -> (Vec<f64>, Vec<f64>) {
    let mut re = Vec::with_capacity(m.len());
    let mut im = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            re.push(m[(i, j)].re);
            im.push(m[(i, j)].im);
        }
    }
    (re, im)
}

fn parts_to_matrix(re: &[f64], im: &[f64], rows: usize, cols: usize) -> Result<DMatrix<Complex64>> {
    if re.len() != rows * cols || im.len() != rows * cols {
        return Err(Error::InvalidSpec(format!(
            "matrix payload needs {} entries, got {}/{}",
            rows * cols,
            re.len(),
            im.len()
        )));
    }
    Ok(DMatrix::from_fn(rows, cols, |i, j| {
        Complex64::new(re[i * cols + j], im[i * cols + j])
    }))
}

/// JSON form of a graded matrix.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GradedMatrixJson {
    pub deg_in: usize,
    pub deg_out: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&GradedMatrix> for GradedMatrixJson {
    fn from(m: &GradedMatrix) -> Self {
        let (re, im) = matrix_to_parts(m.entries());
        GradedMatrixJson {
            deg_in: m.deg_in(),
            deg_out: m.deg_out(),
            re,
            im,
        }
    }
}

impl GradedMatrixJson {
    pub fn to_matrix(&self) -> Result<GradedMatrix> {
        let entries = parts_to_matrix(&self.re, &self.im, self.deg_out + 1, self.deg_in + 1)?;
        Ok(GradedMatrix::new(entries, self.deg_in, self.deg_out))
    }
}

/// JSON form of a state evaluation.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StateValueJson {
    pub value_re: f64,
    pub value_im: f64,
    pub error_bound: f64,
    pub functional: String,
}

impl From<&StateValue> for StateValueJson {
    fn from(v: &StateValue) -> Self {
        StateValueJson {
            value_re: v.value.re,
            value_im: v.value.im,
            error_bound: v.error_bound,
            functional: v.functional.name().into(),
        }
    }
}

/// One ingested constraint: row-major Hermitian observable and target.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ConstraintJson {
    pub g_re: Vec<f64>,
    pub g_im: Vec<f64>,
    pub target: f64,
}

/// Optional objective for functional ranges.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ObjectiveJson {
    pub h_re: Vec<f64>,
    pub h_im: Vec<f64>,
}

/// The constraint-system input file.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FaceProblemJson {
    pub n: usize,
    pub constraints: Vec<ConstraintJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective: Option<ObjectiveJson>,
}

impl FaceProblemJson {
    pub fn parse(&self) -> Result<(Vec<LinearConstraint>, Option<DMatrix<Complex64>>)> {
        let constraints = self
            .constraints
            .iter()
            .map(|c| {
                let g = parts_to_matrix(&c.g_re, &c.g_im, self.n, self.n)?;
                LinearConstraint::new(g, c.target)
            })
            .collect::<Result<Vec<_>>>()?;
        let objective = self
            .objective
            .as_ref()
            .map(|o| parts_to_matrix(&o.h_re, &o.h_im, self.n, self.n))
            .transpose()?;
        Ok((constraints, objective))
    }
}

/// Matrix payload inside emitted face descriptions.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixJson {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&DMatrix<Complex64>> for MatrixJson {
    fn from(m: &DMatrix<Complex64>) -> Self {
        let (re, im) = matrix_to_parts(m);
        MatrixJson { re, im }
    }
}

/// Emitted form of a resolved face.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FaceDescriptionJson {
    pub n: usize,
    pub support_projection: MatrixJson,
    pub affine_dimension: usize,
    pub extreme_param: String,
    pub feasible_sample: MatrixJson,
    pub tier: String,
    pub certified: bool,
}

impl From<&FaceDescription> for FaceDescriptionJson {
    fn from(f: &FaceDescription) -> Self {
        FaceDescriptionJson {
            n: f.support_projection.nrows(),
            support_projection: MatrixJson::from(&f.support_projection),
            affine_dimension: f.affine_dimension,
            extreme_param: f.extreme_param.clone(),
            feasible_sample: MatrixJson::from(f.feasible_sample.entries()),
            tier: f.tier.name().into(),
            certified: f.certified,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rkhs::{p0_matrix, Functional};
    use crate::series::coeffs_a;

    #[test]
    fn space_config_roundtrip_and_keys() {
        let spec = SpaceSpec::hs(-2.0, 200);
        let config = SpaceConfig::from_spec(&spec);
        let json = serde_json::to_value(&config).unwrap();
        assert_eq!(json["kind"], "hs");
        assert_eq!(json["s"], -2.0);
        assert_eq!(json["depth"], 200);
        let back: SpaceConfig = serde_json::from_value(json).unwrap();
        assert_eq!(back.to_spec().unwrap(), spec);

        let explicit: SpaceConfig =
            serde_json::from_str(r#"{"kind":"explicit","coeffs":[1.0,0.5,0.25]}"#).unwrap();
        let spec = explicit.to_spec().unwrap();
        assert_eq!(spec.depth, 2);
    }

    #[test]
    fn space_config_rejects_bad_input() {
        let bad: SpaceConfig = serde_json::from_str(r#"{"kind":"hs","depth":10}"#).unwrap();
        assert!(bad.to_spec().is_err());
        let bad: SpaceConfig =
            serde_json::from_str(r#"{"kind":"explicit","coeffs":[1.0,0.5],"depth":5}"#).unwrap();
        assert!(bad.to_spec().is_err());
        let bad: SpaceConfig = serde_json::from_str(r#"{"kind":"weird"}"#).unwrap();
        assert!(bad.to_spec().is_err());
    }

    #[test]
    fn graded_matrix_json_keys_and_roundtrip() {
        let a = coeffs_a(&SpaceSpec::hs(-2.0, 5)).unwrap();
        let m = crate::rkhs::mz_matrix(&a, 2).unwrap();
        let dto = GradedMatrixJson::from(&m);
        let json = serde_json::to_value(&dto).unwrap();
        for key in ["deg_in", "deg_out", "re", "im"] {
            assert!(json.get(key).is_some(), "missing key {key}");
        }
        let back: GradedMatrixJson = serde_json::from_value(json).unwrap();
        assert_eq!(back.to_matrix().unwrap(), m);
    }

    #[test]
    fn state_value_json_keys() {
        let v = StateValue {
            value: Complex64::new(0.5, -0.25),
            error_bound: 1e-6,
            functional: Functional::Psi,
        };
        let json = serde_json::to_value(StateValueJson::from(&v)).unwrap();
        assert_eq!(json["value_re"], 0.5);
        assert_eq!(json["value_im"], -0.25);
        assert_eq!(json["error_bound"], 1e-6);
        assert_eq!(json["functional"], "psi");
    }

    #[test]
    fn face_problem_ingestion() {
        let text = r#"{
            "n": 2,
            "constraints": [
                {"g_re": [0.0, 0.0, 0.0, 1.0], "g_im": [0.0, 0.0, 0.0, 0.0], "target": 0.0}
            ],
            "objective": {"h_re": [1.0, 0.0, 0.0, 0.0], "h_im": [0.0, 0.0, 0.0, 0.0]}
        }"#;
        let problem: FaceProblemJson = serde_json::from_str(text).unwrap();
        let (constraints, objective) = problem.parse().unwrap();
        assert_eq!(constraints.len(), 1);
        assert!(objective.is_some());
        let face = crate::face::face_dimension(&constraints, 2).unwrap();
        assert_eq!(face.affine_dimension, 0);
        let emitted = serde_json::to_value(FaceDescriptionJson::from(&face)).unwrap();
        for key in [
            "n",
            "support_projection",
            "affine_dimension",
            "extreme_param",
            "feasible_sample",
            "tier",
            "certified",
        ] {
            assert!(emitted.get(key).is_some(), "missing key {key}");
        }
    }

    #[test]
    fn face_problem_rejects_wrong_sizes() {
        let text = r#"{"n": 2, "constraints": [{"g_re": [1.0], "g_im": [0.0], "target": 0.0}]}"#;
        let problem: FaceProblemJson = serde_json::from_str(text).unwrap();
        assert!(problem.parse().is_err());
    }

    #[test]
    fn p0_roundtrips_through_json() {
        let m = p0_matrix(3, 3);
        let dto = GradedMatrixJson::from(&m);
        let text = serde_json::to_string(&dto).unwrap();
        let back: GradedMatrixJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_matrix().unwrap(), m);
    }
}
