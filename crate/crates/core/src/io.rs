//! JSON problem and result files.
//!
//! Matrices are dense and row-major. Floats are written in shortest
//! round-trip form and parsed with correct rounding, so writing and reading
//! a file reproduces every value bit for bit.

use serde::{Deserialize, Serialize};

use crate::approx::{ApproxParams, ConeApproximation, CuttingResult, EdaResult, RunStats};
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::polyc::{HRep, VRep};
use crate::spectra::Spectrahedron;

/// Asymmetry tolerated silently when loading a pencil.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// On-disk form of a pencil `A0 + Σ x_i A_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "A0")]
    pub a0: Vec<Vec<f64>>,
    #[serde(rename = "Ai")]
    pub ai: Vec<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

/// A validated problem.
#[derive(Debug, Clone)]
pub struct Problem {
    pub spectrahedron: Spectrahedron,
    pub name: Option<String>,
    pub notes: Option<String>,
    /// Non-fatal findings, e.g. matrices that had to be symmetrized.
    pub warnings: Vec<String>,
}

impl ProblemFile {
    pub fn from_spectrahedron(c: &Spectrahedron, name: Option<String>) -> Self {
        Self {
            n: c.n(),
            m: c.m(),
            a0: c.a0().to_rows(),
            ai: c.coeffs().iter().map(|a| a.to_rows()).collect(),
            name,
            notes: None,
        }
    }

    pub fn into_problem(self) -> Result<Problem> {
        if self.n == 0 || self.m == 0 {
            return Err(Error::Parse("n and m must be positive".into()));
        }
        if self.ai.len() != self.n {
            return Err(Error::Parse(format!("expected {} coefficient matrices, found {}", self.n, self.ai.len())));
        }
        let mut warnings = Vec::new();
        let mut load = |label: String, rows: &[Vec<f64>]| -> Result<SymMatrix> {
            if rows.len() != self.m || rows.iter().any(|r| r.len() != self.m) {
                return Err(Error::Parse(format!("{label} is not {m}x{m}", m = self.m)));
            }
            let skew = (0..self.m)
                .flat_map(|i| (0..i).map(move |j| (i, j)))
                .map(|(i, j)| (rows[i][j] - rows[j][i]).abs())
                .fold(0.0, f64::max);
            if skew > SYMMETRY_TOL {
                warnings.push(format!("{label} is asymmetric by {skew:e}; symmetrized"));
            }
            SymMatrix::from_rows(rows).map_err(|e| Error::Parse(format!("{label}: {e}")))
        };
        let a0 = load("A0".into(), &self.a0)?;
        let coeffs = self
            .ai
            .iter()
            .enumerate()
            .map(|(k, rows)| load(format!("A{}", k + 1), rows))
            .collect::<Result<Vec<_>>>()?;
        let spectrahedron = Spectrahedron::new(a0, coeffs).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(Problem { spectrahedron, name: self.name, notes: self.notes, warnings })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files serialize")
    }
}

/// Parses and validates a problem file.
pub fn parse_problem(text: &str) -> Result<Problem> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_problem()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResultKind {
    /// `(ε, δ)`-approximation of an unbounded spectrahedron.
    Approx,
    /// ε-approximation of a compact spectrahedron.
    Cutting,
    /// Approximation of a spectrahedral cone.
    Cone,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Facets {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Containment {
    pub samples: usize,
    pub failures: usize,
    pub max_distance: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// Upper bounds on the distance from each vertex to the input set.
    #[serde(default)]
    pub vertex_bounds: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    /// Constructive bound on the truncated Hausdorff distance of the cones.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone_delta: Option<f64>,
    /// Sampled lower bound on the same distance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone_lower_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub containment: Option<Containment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone_facets: Option<Facets>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsBlock {
    pub sdp_solves: usize,
    pub vertices: usize,
    /// Wall time; only recorded on request since it breaks reproducibility.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

impl StatsBlock {
    pub fn new(stats: &RunStats, with_time: bool) -> Self {
        Self {
            sdp_solves: stats.sdp_solves,
            vertices: stats.vertices_final,
            seconds: with_time.then_some(stats.seconds),
        }
    }
}

/// On-disk form of a computed polyhedron `conv V + cone D` and its
/// certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub kind: ResultKind,
    pub n: usize,
    pub vertices: Vec<Vec<f64>>,
    pub rays: Vec<Vec<f64>>,
    pub certificate: Certificate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<StatsBlock>,
}

fn facets(h: &HRep) -> Facets {
    Facets { a: h.rows().to_vec(), b: h.rhs().to_vec() }
}

impl ResultFile {
    pub fn from_approx(r: &EdaResult, params: &ApproxParams, with_time: bool) -> Self {
        let cert = &r.certificate;
        Self {
            kind: ResultKind::Approx,
            n: r.polyhedron.n(),
            vertices: r.polyhedron.vertices().to_vec(),
            rays: r.polyhedron.rays().to_vec(),
            certificate: Certificate {
                eps: Some(params.eps),
                delta: Some(params.delta),
                vertex_bounds: cert.vertex_bounds.clone(),
                cone_delta: Some(cert.cone_delta),
                containment: Some(Containment {
                    samples: cert.containment_samples,
                    failures: cert.containment_failures,
                    max_distance: cert.containment_max_distance,
                    seed: params.seed,
                }),
                cone_facets: Some(facets(&r.cone_facets)),
                ..Certificate::default()
            },
            stats: Some(StatsBlock::new(&cert.stats, with_time)),
        }
    }

    pub fn from_cutting(r: &CuttingResult, eps: f64, with_time: bool) -> Self {
        Self {
            kind: ResultKind::Cutting,
            n: r.polytope.n(),
            vertices: r.polytope.vertices().to_vec(),
            rays: vec![],
            certificate: Certificate {
                eps: Some(eps),
                vertex_bounds: r.vertex_bounds.clone(),
                kappa: Some(r.kappa),
                ..Certificate::default()
            },
            stats: Some(StatsBlock::new(&r.stats, with_time)),
        }
    }

    pub fn from_cone(r: &ConeApproximation, delta: f64, with_time: bool) -> Self {
        let n = r.facets.n();
        Self {
            kind: ResultKind::Cone,
            n,
            vertices: vec![vec![0.0; n]],
            rays: r.generators.clone(),
            certificate: Certificate {
                delta: Some(delta),
                vertex_bounds: vec![0.0],
                cone_delta: Some(r.cone_delta),
                cone_lower_bound: Some(r.lower_bound.value),
                cone_facets: Some(facets(&r.facets)),
                ..Certificate::default()
            },
            stats: Some(StatsBlock::new(&r.stats, with_time)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Parse("n must be positive".into()));
        }
        if self.vertices.is_empty() {
            return Err(Error::Parse("a result needs at least one vertex".into()));
        }
        let n = self.n;
        if let Some(bad) = self.vertices.iter().chain(&self.rays).find(|v| v.len() != n) {
            return Err(Error::Parse(format!("vector of length {} in a {n}-dimensional result", bad.len())));
        }
        if !self.certificate.vertex_bounds.is_empty() && self.certificate.vertex_bounds.len() != self.vertices.len() {
            return Err(Error::Parse("vertex_bounds and vertices differ in length".into()));
        }
        if let Some(f) = &self.certificate.cone_facets {
            if f.a.len() != f.b.len() || f.a.iter().any(|r| r.len() != n) {
                return Err(Error::Parse("malformed cone_facets".into()));
            }
        }
        Ok(())
    }

    pub fn vrep(&self) -> Result<VRep> {
        VRep::new(self.vertices.clone(), self.rays.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result files serialize")
    }
}

/// Parses and validates a result file.
pub fn parse_result(text: &str) -> Result<ResultFile> {
    let file: ResultFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.validate()?;
    Ok(file)
}
