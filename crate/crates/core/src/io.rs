//! JSON file formats. Matrices are row-major nested arrays; numbers are
//! written with 17 significant digits so output is byte-reproducible and
//! round-trips exactly.

use std::io;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::ser::Serialize;
use serde::{Deserialize, Serialize as SerializeDerive};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::eigendata::{EigenpairInput, RealEigenpairs};
use crate::error::{Error, Result};
use crate::generate::GeneratedProblem;
use crate::solver::{MonicPolynomial, SolveOutcome};
use crate::structures::{StructureBasis, StructureKind};
use crate::verify::ResidualReport;

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct VectorJson {
    pub re: Vec<f64>,
    #[serde(default)]
    pub im: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct EigenpairJson {
    pub lambda: ComplexJson,
    pub vector: VectorJson,
}

/// `{"n": int, "eigenpairs": [{"lambda": {"re", "im"}, "vector": {"re": [..], "im": [..]}}]}`
///
/// `structure`, `k` and `consistency_tol` are optional hints written by the
/// generator; `ground_truth` is the generating polynomial when known.
#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct EigendataFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub consistency_tol: Option<f64>,
    pub eigenpairs: Vec<EigenpairJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ground_truth: Option<PolynomialFile>,
}

impl EigendataFile {
    pub fn from_eigenpairs(n: usize, pairs: &[EigenpairInput]) -> Self {
        let eigenpairs = pairs
            .iter()
            .map(|p| EigenpairJson {
                lambda: ComplexJson { re: p.lambda.re, im: p.lambda.im },
                vector: VectorJson {
                    re: p.vector.iter().map(|z| z.re).collect(),
                    im: p.vector.iter().map(|z| z.im).collect(),
                },
            })
            .collect();
        Self { n, structure: None, k: None, consistency_tol: None, eigenpairs, ground_truth: None }
    }

    pub fn from_problem(problem: &GeneratedProblem) -> Self {
        let mut file = Self::from_eigenpairs(problem.n, &problem.eigenpairs);
        file.structure = Some(problem.structure.as_str().to_string());
        file.k = Some(problem.degree);
        file.consistency_tol = problem.consistency_tol;
        file.ground_truth = problem.ground_truth.as_ref().map(PolynomialFile::from_polynomial);
        file
    }

    pub fn to_eigenpairs(&self) -> Result<Vec<EigenpairInput>> {
        self.eigenpairs
            .iter()
            .enumerate()
            .map(|(idx, p)| {
                let n = p.vector.re.len();
                if n != self.n {
                    return Err(Error::DimensionMismatch(format!(
                        "eigenpairs[{idx}].vector.re has length {n}, expected n = {}",
                        self.n
                    )));
                }
                let im = if p.vector.im.is_empty() { vec![0.0; n] } else { p.vector.im.clone() };
                if im.len() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "eigenpairs[{idx}].vector.im has length {}, expected n = {}",
                        im.len(),
                        self.n
                    )));
                }
                Ok(EigenpairInput {
                    lambda: Complex64::new(p.lambda.re, p.lambda.im),
                    vector: DVector::from_iterator(n, p.vector.re.iter().zip(&im).map(|(&a, &b)| Complex64::new(a, b))),
                })
            })
            .collect()
    }
}

/// `{"E": [[..]], "X": [[..]]}` plus the number of complex blocks.
#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct RealFormFile {
    #[serde(rename = "E")]
    pub e: Vec<Vec<f64>>,
    #[serde(rename = "X")]
    pub x: Vec<Vec<f64>>,
    #[serde(default)]
    pub t: usize,
}

impl RealFormFile {
    pub fn from_real_form(ep: &RealEigenpairs) -> Self {
        Self { e: matrix_to_rows(ep.e()), x: matrix_to_rows(ep.x()), t: ep.t() }
    }

    pub fn to_real_form(&self) -> Result<RealEigenpairs> {
        RealEigenpairs::from_parts(rows_to_matrix(&self.x, "X")?, rows_to_matrix(&self.e, "E")?, self.t)
    }
}

/// `{"n": int, "matrices": [[[row-major reals]]]}`
#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct BasisFile {
    pub n: usize,
    pub matrices: Vec<Vec<Vec<f64>>>,
}

impl BasisFile {
    pub fn from_basis(basis: &StructureBasis) -> Self {
        Self { n: basis.n(), matrices: basis.matrices().iter().map(matrix_to_rows).collect() }
    }

    pub fn to_basis(&self) -> Result<StructureBasis> {
        let matrices = self
            .matrices
            .iter()
            .enumerate()
            .map(|(i, rows)| {
                let m = rows_to_matrix(rows, &format!("matrices[{i}]"))?;
                if m.shape() != (self.n, self.n) {
                    return Err(Error::ShapeMismatch(format!(
                        "matrices[{i}] is {}x{}, expected n = {}",
                        m.nrows(),
                        m.ncols(),
                        self.n
                    )));
                }
                Ok(m)
            })
            .collect::<Result<Vec<_>>>()?;
        StructureBasis::from_matrices(&matrices)
    }
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct CoefficientJson {
    pub i: usize,
    pub matrix: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<f64>>,
}

/// `{"n": int, "k": int, "monic": true, "coefficients": [{"i": 0, "matrix": [[..]]}, ..]}`
///
/// A solve report is a superset of this format and parses as one.
#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct PolynomialFile {
    pub n: usize,
    pub k: usize,
    pub monic: bool,
    pub coefficients: Vec<CoefficientJson>,
}

impl PolynomialFile {
    pub fn from_polynomial(poly: &MonicPolynomial) -> Self {
        Self { n: poly.n(), k: poly.degree(), monic: true, coefficients: coefficient_entries(poly) }
    }

    pub fn to_polynomial(&self) -> Result<MonicPolynomial> {
        if !self.monic {
            return Err(Error::DimensionMismatch("only monic polynomials are supported (\"monic\": true)".into()));
        }
        if self.coefficients.len() != self.k || self.k == 0 {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coefficients, found {}",
                self.k,
                self.coefficients.len()
            )));
        }
        let mut slots: Vec<Option<DMatrix<f64>>> = vec![None; self.k];
        for c in &self.coefficients {
            if c.i >= self.k {
                return Err(Error::IndexOutOfRange { index: c.i, degree: self.k });
            }
            let m = rows_to_matrix(&c.matrix, &format!("coefficients[i={}].matrix", c.i))?;
            if m.shape() != (self.n, self.n) {
                return Err(Error::ShapeMismatch(format!("coefficient {} is not {}x{}", c.i, self.n, self.n)));
            }
            slots[c.i] = Some(m);
        }
        let coefficients = slots
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| Error::DimensionMismatch(format!("coefficient {i} missing"))))
            .collect::<Result<Vec<_>>>()?;
        MonicPolynomial::new(coefficients)
    }
}

fn coefficient_entries(poly: &MonicPolynomial) -> Vec<CoefficientJson> {
    (0..poly.degree())
        .map(|i| CoefficientJson {
            i,
            matrix: matrix_to_rows(poly.coefficient(i)),
            coords: poly.coords(i).map(|c| c.iter().copied().collect()),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct TolerancesJson {
    pub consistency: f64,
    pub rank_cutoff_factor: f64,
    pub rank_cutoff: f64,
    pub membership: f64,
}

/// Output of the `solve` command.
#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct SolveReport {
    pub structure: String,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub r: usize,
    pub monic: bool,
    pub consistent: bool,
    pub unique: bool,
    pub rank: usize,
    pub nullity: usize,
    /// `|U U^+ b - b|_2`.
    pub consistency_residual: f64,
    /// Residual of the emitted polynomial, or of the least-squares
    /// coefficients `U^+ b` when the system is inconsistent.
    pub residual_fro: f64,
    pub sigma_max: f64,
    pub sigma_min: f64,
    pub coefficients: Vec<CoefficientJson>,
    pub tolerances: TolerancesJson,
}

impl SolveReport {
    pub fn new(structure: StructureKind, outcome: &SolveOutcome) -> Self {
        let fam = &outcome.family;
        let sys = &outcome.system;
        let tol = fam.tolerances();
        let sv = fam.singular_values();
        Self {
            structure: structure.as_str().to_string(),
            n: sys.n(),
            k: sys.degree(),
            m: sys.m(),
            r: sys.r(),
            monic: true,
            consistent: fam.consistent(),
            unique: fam.unique(),
            rank: fam.rank(),
            nullity: fam.nullity(),
            consistency_residual: fam.consistency_residual(),
            residual_fro: outcome.residual_fro.unwrap_or(fam.consistency_residual()),
            sigma_max: sv.first().copied().unwrap_or(0.0),
            sigma_min: sv.last().copied().unwrap_or(0.0),
            coefficients: outcome.polynomial.as_ref().map(coefficient_entries).unwrap_or_default(),
            tolerances: TolerancesJson {
                consistency: tol.consistency,
                rank_cutoff_factor: tol.rank_cutoff_factor.unwrap_or(0.0),
                rank_cutoff: fam.rank_cutoff(),
                membership: tol.membership,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct ResidualJson {
    pub fro: f64,
    pub relative: f64,
    pub per_pair: Vec<f64>,
    pub pass: bool,
    pub threshold: f64,
}

impl ResidualJson {
    pub fn new(report: &ResidualReport, threshold: f64) -> Self {
        Self {
            fro: report.fro,
            relative: report.relative,
            per_pair: report.per_pair.clone(),
            pass: report.relative <= threshold,
            threshold,
        }
    }
}

pub fn matrix_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// Row-major nested array to a matrix; `what` names the field in errors.
pub fn rows_to_matrix(rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 {
        return Err(Error::ShapeMismatch(format!("{what} is empty")));
    }
    if let Some(bad) = rows.iter().position(|r| r.len() != ncols) {
        return Err(Error::ShapeMismatch(format!("{what}: row {bad} has {} entries, expected {ncols}", rows[bad].len())));
    }
    Ok(DMatrix::from_row_iterator(nrows, ncols, rows.iter().flatten().copied()))
}

/// Pretty JSON with every float written as `{:.16e}` (17 significant digits).
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedDigits::default());
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

#[derive(Default)]
struct FixedDigits {
    pretty: PrettyFormatter<'static>,
}

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.pretty.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.pretty.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_object_value(writer)
    }
}
