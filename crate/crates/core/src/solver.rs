//! Structured solve of the eigenvalue-eigenvector relation.
//!
//! For a monic polynomial `lambda^k I + sum_i lambda^i A_i` and real-form
//! eigendata `(X, E)` the relation `sum_{i<k} A_i X E^i = -X E^k` is linear in
//! the structure coordinates of the `A_i`. Stacking the coordinates as
//! `x = [c(A_{k-1}); ...; c(A_0)]` gives `U x = b` with
//!
//! ```text
//! U = [ ((X E^{k-1})^T (x) I) P  ...  (X^T (x) I) P ]     (mn x kr)
//! b = vec(-X E^k)
//! ```
//!
//! The system is solvable iff `U U^+ b = b`; every solution is
//! `U^+ b + (I - U^+ U) y`, and it is unique iff `rank U = kr`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::eigendata::RealEigenpairs;
use crate::error::{Error, Result};
use crate::linalg::{self, Pseudoinverse};
use crate::structures::{StructureBasis, StructuredMatrix, MEMBERSHIP_TOL};
use crate::verify;

/// Numerical thresholds used by the solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Relative singular-value cutoff; `None` means `eps * max(mn, kr)`.
    pub rank_cutoff_factor: Option<f64>,
    /// `|U U^+ b - b| <= consistency * max(1, |b|)` decides solvability.
    pub consistency: f64,
    /// Relative structure-membership tolerance.
    pub membership: f64,
    /// Relative positive-definiteness threshold for monicization.
    pub positive_definite: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { rank_cutoff_factor: None, consistency: 1e-8, membership: MEMBERSHIP_TOL, positive_definite: 1e-12 }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let check = |name: &'static str, value: f64| {
            if value > 0.0 && value.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidTolerance { name, value })
            }
        };
        if let Some(f) = self.rank_cutoff_factor {
            check("rank_cutoff_factor", f)?;
        }
        check("consistency", self.consistency)?;
        check("membership", self.membership)?;
        check("positive_definite", self.positive_definite)
    }

    pub fn with_consistency(mut self, tol: f64) -> Self {
        self.consistency = tol;
        self
    }
}

/// Whether the `m <= kn` bound on the number of eigencolumns is enforced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundPolicy {
    #[default]
    Strict,
    AllowOverdetermined,
}

/// The linear system `U x = b`.
#[derive(Debug, Clone)]
pub struct AssembledSystem {
    u: DMatrix<f64>,
    b: DVector<f64>,
    n: usize,
    m: usize,
    k: usize,
    r: usize,
}

impl AssembledSystem {
    pub fn u(&self) -> &DMatrix<f64> {
        &self.u
    }

    pub fn b(&self) -> &DVector<f64> {
        &self.b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of unknowns `kr`.
    pub fn unknowns(&self) -> usize {
        self.k * self.r
    }
}

/// Builds `U` and `b`, enforcing `1 <= m <= kn`.
pub fn assemble(ep: &RealEigenpairs, basis: &StructureBasis, k: usize) -> Result<AssembledSystem> {
    assemble_with(ep, basis, k, BoundPolicy::Strict)
}

pub fn assemble_with(ep: &RealEigenpairs, basis: &StructureBasis, k: usize, bound: BoundPolicy) -> Result<AssembledSystem> {
    if k == 0 {
        return Err(Error::ZeroDegree);
    }
    let n = basis.n();
    if ep.n() != n {
        return Err(Error::DimensionMismatch(format!("eigenvectors have length {}, structure order is {n}", ep.n())));
    }
    let m = ep.m();
    if m == 0 || (bound == BoundPolicy::Strict && m > k * n) {
        return Err(Error::ProblemBound { m, bound: k * n });
    }
    let r = basis.r();
    let x = ep.x();
    let powers = linalg::powers(ep.e(), k);
    let mut u = DMatrix::zeros(m * n, k * r);
    for block in 0..k {
        // block-column `block` multiplies c(A_{k-1-block})
        let y = x * &powers[k - 1 - block];
        for l in 0..r {
            let col = block * r + l;
            // ((Y^T (x) I) vec(S_l)) = vec(S_l Y)
            for &(i, j, s) in basis.entries(l) {
                for c in 0..m {
                    u[(c * n + i, col)] += s * y[(j, c)];
                }
            }
        }
    }
    let b = -crate::structures::vec(&(x * &powers[k]));
    Ok(AssembledSystem { u, b, n, m, k, r })
}

/// Existence and uniqueness diagnostics together with the solution family.
#[derive(Debug, Clone)]
pub struct SolutionFamily {
    x0: DVector<f64>,
    consistent: bool,
    consistency_residual: f64,
    b_norm: f64,
    tolerances: ToleranceConfig,
    pinv: Pseudoinverse,
}

impl SolutionFamily {
    /// Minimal-norm solution `U^+ b`.
    pub fn x0(&self) -> &DVector<f64> {
        &self.x0
    }

    pub fn rank(&self) -> usize {
        self.pinv.rank()
    }

    pub fn unknowns(&self) -> usize {
        self.pinv.shape().1
    }

    /// Dimension of the nullspace of `U`.
    pub fn nullity(&self) -> usize {
        self.unknowns() - self.rank()
    }

    pub fn consistent(&self) -> bool {
        self.consistent
    }

    pub fn unique(&self) -> bool {
        self.nullity() == 0
    }

    /// `|U U^+ b - b|_2`.
    pub fn consistency_residual(&self) -> f64 {
        self.consistency_residual
    }

    pub fn b_norm(&self) -> f64 {
        self.b_norm
    }

    /// Singular values of `U`, descending.
    pub fn singular_values(&self) -> &[f64] {
        self.pinv.singular_values()
    }

    /// Absolute singular-value cutoff that decided the rank.
    pub fn rank_cutoff(&self) -> f64 {
        self.pinv.cutoff()
    }

    /// Tolerances with the rank-cutoff factor resolved.
    pub fn tolerances(&self) -> &ToleranceConfig {
        &self.tolerances
    }

    /// `(I - U^+ U) w`.
    pub fn project_null(&self, w: &DVector<f64>) -> DVector<f64> {
        self.pinv.project_null(w)
    }

    /// Family member `U^+ b + (I - U^+ U) y`.
    pub fn member(&self, y: &DVector<f64>) -> Result<DVector<f64>> {
        if y.len() != self.unknowns() {
            return Err(Error::LengthMismatch { expected: self.unknowns(), got: y.len() });
        }
        Ok(&self.x0 + self.project_null(y))
    }

    /// Dense `U^+ U`.
    pub fn pinv_times_u(&self) -> DMatrix<f64> {
        self.pinv.row_space_projector()
    }

    /// Dense nullspace projector `I - U^+ U`.
    pub fn null_projector(&self) -> DMatrix<f64> {
        let q = self.unknowns();
        DMatrix::identity(q, q) - self.pinv_times_u()
    }
}

/// SVD of `U`, minimal-norm solution and the existence/uniqueness tests.
pub fn analyze(sys: &AssembledSystem, tol: &ToleranceConfig) -> Result<SolutionFamily> {
    tol.validate()?;
    let (rows, cols) = sys.u.shape();
    let factor = tol.rank_cutoff_factor.unwrap_or_else(|| Pseudoinverse::default_factor(rows, cols));
    let pinv = Pseudoinverse::new(&sys.u, Some(factor));
    let x0 = pinv.apply(&sys.b);
    let b_norm = sys.b.norm();
    let consistency_residual = (pinv.project_range(&sys.b) - &sys.b).norm();
    let consistent = consistency_residual <= tol.consistency * b_norm.max(1.0);
    let tolerances = ToleranceConfig { rank_cutoff_factor: Some(factor), ..*tol };
    Ok(SolutionFamily { x0, consistent, consistency_residual, b_norm, tolerances, pinv })
}

/// Coordinates of `A_i` inside the stacked unknown vector.
pub fn extract_coefficient(x: &DVector<f64>, i: usize, k: usize, r: usize) -> Result<DVector<f64>> {
    if i >= k {
        return Err(Error::IndexOutOfRange { index: i, degree: k });
    }
    if x.len() != k * r {
        return Err(Error::LengthMismatch { expected: k * r, got: x.len() });
    }
    let start = (k - 1 - i) * r;
    Ok(x.rows(start, r).into_owned())
}

/// Monic matrix polynomial `lambda^k I + sum_{i<k} lambda^i A_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonicPolynomial {
    coefficients: Vec<DMatrix<f64>>,
    coords: Option<Vec<DVector<f64>>>,
}

impl MonicPolynomial {
    /// From dense `A_0 .. A_{k-1}`.
    pub fn new(coefficients: Vec<DMatrix<f64>>) -> Result<Self> {
        let first = coefficients.first().ok_or(Error::ZeroDegree)?;
        let n = first.nrows();
        for (i, a) in coefficients.iter().enumerate() {
            if a.nrows() != n || a.ncols() != n {
                return Err(Error::ShapeMismatch(format!("A_{i} is {}x{}, expected {n}x{n}", a.nrows(), a.ncols())));
            }
        }
        Ok(Self { coefficients, coords: None })
    }

    /// From structured `A_0 .. A_{k-1}`, keeping their coordinates.
    pub fn from_structured(coefficients: Vec<StructuredMatrix>) -> Result<Self> {
        let coords = coefficients.iter().map(|c| c.coords().clone()).collect();
        let mut poly = Self::new(coefficients.into_iter().map(StructuredMatrix::into_dense).collect())?;
        poly.coords = Some(coords);
        Ok(poly)
    }

    pub fn n(&self) -> usize {
        self.coefficients[0].nrows()
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len()
    }

    /// `A_i` for `i < k`.
    pub fn coefficient(&self, i: usize) -> &DMatrix<f64> {
        &self.coefficients[i]
    }

    pub fn coefficients(&self) -> &[DMatrix<f64>] {
        &self.coefficients
    }

    /// Structure coordinates of `A_i`, when the polynomial came from a solve.
    pub fn coords(&self, i: usize) -> Option<&DVector<f64>> {
        self.coords.as_ref().map(|c| &c[i])
    }

    /// `P(lambda)` as a complex matrix.
    pub fn eval(&self, lambda: Complex64) -> DMatrix<Complex64> {
        let n = self.n();
        // Horner: start from the identity leading coefficient
        let mut acc = DMatrix::<Complex64>::identity(n, n);
        for a in self.coefficients.iter().rev() {
            acc *= lambda;
            acc += a.map(|v| Complex64::new(v, 0.0));
        }
        acc
    }
}

/// Result of [`solve`]. `polynomial` is `None` when the system is inconsistent.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub system: AssembledSystem,
    pub family: SolutionFamily,
    pub polynomial: Option<MonicPolynomial>,
    /// Frobenius norm of `sum_i A_i X E^i` (with `A_k = I`) when solved.
    pub residual_fro: Option<f64>,
}

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    pub tol: ToleranceConfig,
    /// Free vector `y`; zero when absent.
    pub free: Option<DVector<f64>>,
    pub bound: BoundPolicy,
}

/// Assemble, analyze and, when consistent, realize `A_0 .. A_{k-1}`.
pub fn solve(ep: &RealEigenpairs, basis: &StructureBasis, k: usize, opts: &SolveOptions) -> Result<SolveOutcome> {
    let system = assemble_with(ep, basis, k, opts.bound)?;
    let family = analyze(&system, &opts.tol)?;
    if !family.consistent() {
        return Ok(SolveOutcome { system, family, polynomial: None, residual_fro: None });
    }
    let x = match &opts.free {
        Some(y) => family.member(y)?,
        None => family.x0().clone(),
    };
    let r = basis.r();
    let coefficients = (0..k)
        .map(|i| basis.realize(&extract_coefficient(&x, i, k, r)?))
        .collect::<Result<Vec<_>>>()?;
    let polynomial = MonicPolynomial::from_structured(coefficients)?;
    let residual_fro = verify::residual(&polynomial, ep)?.fro;
    Ok(SolveOutcome { system, family, polynomial: Some(polynomial), residual_fro: Some(residual_fro) })
}

/// Monic form of a symmetric polynomial with positive-definite leading
/// coefficient.
#[derive(Debug, Clone)]
pub struct Monicized {
    /// `A_k^{-1/2} A_i A_k^{-1/2}` for `i < k`.
    pub coefficients: Vec<DMatrix<f64>>,
    /// Principal square root `A_k^{1/2}`; eigenvectors map as `xi = A_k^{1/2} x`.
    pub transform: DMatrix<f64>,
    pub inverse_transform: DMatrix<f64>,
}

impl Monicized {
    pub fn polynomial(&self) -> MonicPolynomial {
        MonicPolynomial { coefficients: self.coefficients.clone(), coords: None }
    }
}

/// Reduces `lambda^k A_k + sum lambda^i A_i` (all symmetric, `A_k` SPD) to
/// monic form by the congruence `A_k^{-1/2} . A_k^{-1/2}`.
pub fn monicize(ak: &DMatrix<f64>, coeffs: &[DMatrix<f64>], tol: &ToleranceConfig) -> Result<Monicized> {
    let n = ak.nrows();
    if ak.ncols() != n {
        return Err(Error::ShapeMismatch(format!("A_k is {}x{}", ak.nrows(), ak.ncols())));
    }
    let sym_tol = 1e-10 * ak.norm();
    let asym = linalg::asymmetry(ak);
    if asym > sym_tol {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    for a in coeffs {
        if a.shape() != (n, n) {
            return Err(Error::ShapeMismatch(format!("coefficient is {}x{}, expected {n}x{n}", a.nrows(), a.ncols())));
        }
        let asym = linalg::asymmetry(a);
        if asym > 1e-10 * a.norm().max(f64::MIN_POSITIVE) {
            return Err(Error::NotSymmetric { asymmetry: asym });
        }
    }
    let eig = SymmetricEigen::new(ak.clone());
    let lo = eig.eigenvalues.min();
    let hi = eig.eigenvalues.max();
    if hi.is_nan() || hi <= 0.0 || lo <= tol.positive_definite * hi {
        let ratio = if hi > 0.0 { lo / hi } else { lo };
        return Err(Error::NotPositiveDefinite { ratio });
    }
    let q = &eig.eigenvectors;
    let scaled = |f: fn(f64) -> f64| {
        let d = DMatrix::from_diagonal(&eig.eigenvalues.map(f));
        let s = q * d * q.transpose();
        symmetrize(&s)
    };
    let transform = scaled(f64::sqrt);
    let inverse_transform = scaled(|w| 1.0 / w.sqrt());
    let coefficients = coeffs.iter().map(|a| symmetrize(&(&inverse_transform * a * &inverse_transform))).collect();
    Ok(Monicized { coefficients, transform, inverse_transform })
}

fn symmetrize(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}
