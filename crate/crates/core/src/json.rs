//! JSON documents for every value that crosses the command line.
//!
//! Scalars are decimal strings: `["num", "den"]` over `Q` (reduced, positive denominator) and a
//! canonical residue `"x"` over `F_p`. Field order in each document struct is the emitted key
//! order, so rendering is byte-stable.

use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificate::{LowerBoundCertificate, Verdict};
use crate::commgraph::{Assignment, CommGraph, Realization};
use crate::exactla::{FieldSpec, Matrix, Scalar, Vector};
use crate::modsplit::{CompositionReport, CountCheck, CountVerdict, ModuleSpec};
use crate::search::SearchReport;

/// A malformed or inconsistent document; `path` locates the offending value.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{path}: {message}")]
pub struct JsonError {
    pub path: String,
    pub message: String,
}

impl JsonError {
    fn at(path: impl Into<String>, message: impl ToString) -> Self {
        JsonError {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

/// Parses `text` into `D`, reporting the path of the first offending value.
pub fn parse<D: DeserializeOwned>(text: &str) -> Result<D, JsonError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        JsonError::at(if path.is_empty() { ".".into() } else { path }, e.into_inner())
    })
}

/// Pretty-printed document with a trailing newline.
pub fn render<D: Serialize>(doc: &D) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents always serialize");
    s.push('\n');
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarDoc {
    Fraction(String, String),
    Residue(String),
}

impl From<&Scalar> for ScalarDoc {
    fn from(s: &Scalar) -> Self {
        match s {
            Scalar::Rational(q) => ScalarDoc::Fraction(q.numer().to_string(), q.denom().to_string()),
            Scalar::Residue { value, .. } => ScalarDoc::Residue(value.to_string()),
        }
    }
}

fn parse_int(s: &str, path: &str) -> Result<BigInt, JsonError> {
    s.parse::<BigInt>()
        .map_err(|_| JsonError::at(path, format!("`{s}` is not a decimal integer")))
}

impl ScalarDoc {
    pub fn to_scalar(&self, field: FieldSpec, path: &str) -> Result<Scalar, JsonError> {
        match (self, field) {
            (ScalarDoc::Fraction(n, d), FieldSpec::Rationals) => {
                let n = parse_int(n, path)?;
                let d = parse_int(d, path)?;
                field.from_fraction(&n, &d).map_err(|e| JsonError::at(path, e))
            }
            (ScalarDoc::Residue(x), FieldSpec::PrimeField(_)) => Ok(field.from_bigint(&parse_int(x, path)?)),
            (ScalarDoc::Residue(_), FieldSpec::Rationals) => {
                Err(JsonError::at(path, "expected a [\"num\", \"den\"] pair over Q"))
            }
            (ScalarDoc::Fraction(..), FieldSpec::PrimeField(_)) => {
                Err(JsonError::at(path, format!("expected a residue string over {field}")))
            }
        }
    }
}

fn vector_doc(v: &[Scalar]) -> Vec<ScalarDoc> {
    v.iter().map(ScalarDoc::from).collect()
}

fn vector_from(docs: &[ScalarDoc], field: FieldSpec, path: &str) -> Result<Vector, JsonError> {
    docs.iter()
        .enumerate()
        .map(|(i, d)| d.to_scalar(field, &format!("{path}[{i}]")))
        .collect()
}

fn field_from(s: &str, path: &str) -> Result<FieldSpec, JsonError> {
    s.parse::<FieldSpec>().map_err(|e| JsonError::at(path, e))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub field: String,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<ScalarDoc>,
}

impl From<&Matrix> for MatrixDoc {
    fn from(m: &Matrix) -> Self {
        MatrixDoc {
            field: m.field().to_string(),
            rows: m.rows(),
            cols: m.cols(),
            entries: vector_doc(m.entries()),
        }
    }
}

impl MatrixDoc {
    pub fn to_matrix(&self, path: &str) -> Result<Matrix, JsonError> {
        let field = field_from(&self.field, &format!("{path}.field"))?;
        if self.entries.len() != self.rows * self.cols {
            return Err(JsonError::at(
                format!("{path}.entries"),
                format!("{} entries for a {}x{} matrix", self.entries.len(), self.rows, self.cols),
            ));
        }
        let entries = vector_from(&self.entries, field, &format!("{path}.entries"))?;
        Matrix::new(field, self.rows, self.cols, entries).map_err(|e| JsonError::at(path, e))
    }

    fn to_matrix_in(&self, field: FieldSpec, path: &str) -> Result<Matrix, JsonError> {
        let m = self.to_matrix(path)?;
        if m.field() != field {
            return Err(JsonError::at(
                format!("{path}.field"),
                format!("expected {field}, found {}", m.field()),
            ));
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&CommGraph> for GraphDoc {
    fn from(g: &CommGraph) -> Self {
        GraphDoc {
            vertices: g.vertex_count(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl GraphDoc {
    pub fn to_graph(&self) -> Result<CommGraph, JsonError> {
        CommGraph::new(self.vertices, self.edges.iter().map(|&[u, v]| (u, v)))
            .map_err(|e| JsonError::at(".edges", e))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentDoc {
    pub graph_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub matrices: Vec<MatrixDoc>,
}

impl From<&Assignment> for AssignmentDoc {
    fn from(a: &Assignment) -> Self {
        AssignmentDoc {
            graph_dim: a.graph_dim(),
            labels: a.labels().map(<[String]>::to_vec),
            matrices: a.matrices().iter().map(MatrixDoc::from).collect(),
        }
    }
}

impl AssignmentDoc {
    pub fn to_assignment(&self) -> Result<Assignment, JsonError> {
        if self.matrices.len() != self.graph_dim {
            return Err(JsonError::at(
                ".matrices",
                format!("{} matrices for graph_dim {}", self.matrices.len(), self.graph_dim),
            ));
        }
        let mats = self
            .matrices
            .iter()
            .enumerate()
            .map(|(i, m)| m.to_matrix(&format!(".matrices[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let a = Assignment::new(mats).map_err(|e| JsonError::at(".matrices", e))?;
        match &self.labels {
            Some(labels) => a.with_labels(labels.clone()).map_err(|e| JsonError::at(".labels", e)),
            None => Ok(a),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationDoc {
    pub u: usize,
    pub v: usize,
    pub expected: String,
    pub observed: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationDoc {
    pub realizes: bool,
    pub violations: Vec<ViolationDoc>,
}

impl From<&Realization> for RealizationDoc {
    fn from(r: &Realization) -> Self {
        RealizationDoc {
            realizes: r.realizes(),
            violations: r
                .violations
                .iter()
                .map(|v| ViolationDoc {
                    u: v.u,
                    v: v.v,
                    expected: v.expected.as_str().into(),
                    observed: v.observed.as_str().into(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub field: String,
    pub n: usize,
    pub r: usize,
    pub v: Vec<ScalarDoc>,
    pub alpha: Vec<ScalarDoc>,
    pub z: Vec<MatrixDoc>,
    pub gram: MatrixDoc,
    pub image_rank: usize,
    pub bound: usize,
}

impl From<&LowerBoundCertificate> for CertificateDoc {
    fn from(c: &LowerBoundCertificate) -> Self {
        CertificateDoc {
            field: c.field.to_string(),
            n: c.n,
            r: c.r,
            v: vector_doc(&c.v),
            alpha: vector_doc(&c.alpha),
            z: c.z.iter().map(MatrixDoc::from).collect(),
            gram: MatrixDoc::from(&c.gram),
            image_rank: c.image_rank,
            bound: c.concluded_bound,
        }
    }
}

impl CertificateDoc {
    /// Only scalar encodings are checked here; shapes are the verifier's business.
    pub fn to_certificate(&self) -> Result<LowerBoundCertificate, JsonError> {
        let field = field_from(&self.field, ".field")?;
        Ok(LowerBoundCertificate {
            field,
            n: self.n,
            r: self.r,
            v: vector_from(&self.v, field, ".v")?,
            alpha: vector_from(&self.alpha, field, ".alpha")?,
            z: self
                .z
                .iter()
                .enumerate()
                .map(|(i, m)| m.to_matrix_in(field, &format!(".z[{i}]")))
                .collect::<Result<_, _>>()?,
            gram: self.gram.to_matrix_in(field, ".gram")?,
            image_rank: self.image_rank,
            concluded_bound: self.bound,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReasonDoc {
    pub code: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictDoc {
    pub valid: bool,
    pub reasons: Vec<ReasonDoc>,
}

impl From<&Verdict> for VerdictDoc {
    fn from(v: &Verdict) -> Self {
        VerdictDoc {
            valid: v.valid,
            reasons: v
                .reasons
                .iter()
                .map(|r| ReasonDoc {
                    code: r.code().into(),
                    detail: r.to_string(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDoc {
    pub field: String,
    pub dim: usize,
    pub generators: Vec<MatrixDoc>,
}

impl From<&ModuleSpec> for ModuleDoc {
    fn from(m: &ModuleSpec) -> Self {
        ModuleDoc {
            field: m.field().to_string(),
            dim: m.dim(),
            generators: m.generators().iter().map(MatrixDoc::from).collect(),
        }
    }
}

impl ModuleDoc {
    pub fn to_module(&self) -> Result<ModuleSpec, JsonError> {
        let field = field_from(&self.field, ".field")?;
        let mut gens = Vec::with_capacity(self.generators.len());
        for (i, g) in self.generators.iter().enumerate() {
            let path = format!(".generators[{i}]");
            let m = g.to_matrix_in(field, &path)?;
            if m.rows() != self.dim || m.cols() != self.dim {
                return Err(JsonError::at(path, format!("expected a {0}x{0} matrix", self.dim)));
            }
            gens.push(m);
        }
        ModuleSpec::new(gens).map_err(|e| JsonError::at(".generators", e))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionDoc {
    pub field: String,
    pub dim: usize,
    pub factor_dims: Vec<usize>,
    pub series: Vec<usize>,
    pub flag_basis: MatrixDoc,
    pub base_field_only: bool,
}

impl From<&CompositionReport> for CompositionDoc {
    fn from(c: &CompositionReport) -> Self {
        CompositionDoc {
            field: c.field.to_string(),
            dim: c.dim,
            factor_dims: c.factor_dims.clone(),
            series: c.series.clone(),
            flag_basis: MatrixDoc::from(&c.flag_basis),
            base_field_only: c.base_field_only,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountCheckDoc {
    pub verdict: String,
    pub sets: Vec<Vec<usize>>,
    pub uncovered: Vec<usize>,
    pub sum_of_products: String,
    pub sum_of_powers: String,
    pub sum_of_doubled_sizes: String,
    pub two_n: String,
    pub chain_holds: [bool; 3],
}

impl From<&CountCheck> for CountCheckDoc {
    fn from(c: &CountCheck) -> Self {
        CountCheckDoc {
            verdict: match c.verdict {
                CountVerdict::Satisfied => "satisfied",
                CountVerdict::PreconditionFailed => "precondition_failed",
            }
            .into(),
            sets: c.sets.clone(),
            uncovered: c.uncovered.clone(),
            sum_of_products: c.sum_of_products.to_string(),
            sum_of_powers: c.sum_of_powers.to_string(),
            sum_of_doubled_sizes: c.sum_of_doubled_sizes.to_string(),
            two_n: c.two_n.to_string(),
            chain_holds: c.holds,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExclusionDoc {
    pub r: usize,
    pub method: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReportDoc {
    pub graph: GraphDoc,
    pub field: String,
    pub mode: String,
    pub status: String,
    pub lower: usize,
    pub upper: Option<usize>,
    pub exclusions: Vec<ExclusionDoc>,
    pub witness: Option<AssignmentDoc>,
    pub witness_source: Option<String>,
    pub nodes_explored: u64,
    pub budget: u64,
}

impl From<&SearchReport> for SearchReportDoc {
    fn from(r: &SearchReport) -> Self {
        SearchReportDoc {
            graph: GraphDoc::from(&r.graph),
            field: r.field.to_string(),
            mode: r.mode.as_str().into(),
            status: r.status.as_str().into(),
            lower: r.lower,
            upper: r.upper,
            exclusions: r
                .exclusions
                .iter()
                .map(|e| ExclusionDoc {
                    r: e.r,
                    method: e.method.as_str().into(),
                })
                .collect(),
            witness: r.witness.as_ref().map(AssignmentDoc::from),
            witness_source: r.witness_source.map(|s| s.as_str().into()),
            nodes_explored: r.nodes_explored,
            budget: r.budget,
        }
    }
}
