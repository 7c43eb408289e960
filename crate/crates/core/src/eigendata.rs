//! Real-form packing of partial eigendata.
//!
//! A conjugate pair `alpha +- i beta` with eigenvectors `u +- i v` becomes the
//! 2x2 block `[[alpha, beta], [-beta, alpha]]` of `E` and the two columns
//! `u, v` of `X`. Real eigenpairs become a scalar of `E` and one column of
//! `X`. Complex blocks come first. With this packing the complex relation
//! `P(lambda) z = 0` is equivalent to the real relation `sum_i A_i X E^i = 0`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on the imaginary part of an eigenvector paired with a real eigenvalue.
pub const REAL_VECTOR_TOL: f64 = 1e-12;
/// Relative tolerance used to detect a conjugate supplied twice.
pub const CONJUGATE_TOL: f64 = 1e-10;

/// One eigenvalue with its eigenvector. For a complex eigenvalue this stands
/// for the whole conjugate pair.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenpairInput {
    pub lambda: Complex64,
    pub vector: DVector<Complex64>,
}

impl EigenpairInput {
    pub fn new(lambda: Complex64, vector: DVector<Complex64>) -> Self {
        Self { lambda, vector }
    }

    pub fn real(lambda: f64, vector: &[f64]) -> Self {
        Self {
            lambda: Complex64::new(lambda, 0.0),
            vector: DVector::from_iterator(vector.len(), vector.iter().map(|&x| Complex64::new(x, 0.0))),
        }
    }

    /// Complex eigenpair `(re + i im, u + i v)`.
    pub fn complex(re: f64, im: f64, u: &[f64], v: &[f64]) -> Self {
        assert_eq!(u.len(), v.len(), "real and imaginary parts must have equal length");
        Self {
            lambda: Complex64::new(re, im),
            vector: DVector::from_iterator(u.len(), u.iter().zip(v).map(|(&a, &b)| Complex64::new(a, b))),
        }
    }

    pub fn is_real(&self) -> bool {
        self.lambda.im == 0.0
    }

    /// Number of real columns this eigenpair contributes (1 or 2).
    pub fn columns(&self) -> usize {
        if self.is_real() {
            1
        } else {
            2
        }
    }
}

/// Real-form eigendata `(X, E)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealEigenpairs {
    t: usize,
    x: DMatrix<f64>,
    e: DMatrix<f64>,
}

impl RealEigenpairs {
    /// Builds from explicit matrices, validating the block layout of `E`.
    pub fn from_parts(x: DMatrix<f64>, e: DMatrix<f64>, t: usize) -> Result<Self> {
        let m = x.ncols();
        if m == 0 {
            return Err(Error::MalformedBlocks("no eigencolumns".into()));
        }
        if e.nrows() != m || e.ncols() != m {
            return Err(Error::MalformedBlocks(format!(
                "E is {}x{}, X has {m} columns",
                e.nrows(),
                e.ncols()
            )));
        }
        if 2 * t > m {
            return Err(Error::MalformedBlocks(format!("{t} complex blocks do not fit in {m} columns")));
        }
        let scale = e.amax().max(1.0);
        let tol = 1e-12 * scale;
        let block_of = |c: usize| if c < 2 * t { c / 2 } else { t + (c - 2 * t) };
        for i in 0..m {
            for j in 0..m {
                if block_of(i) != block_of(j) && e[(i, j)].abs() > tol {
                    return Err(Error::MalformedBlocks(format!("E[{i},{j}] lies outside the block diagonal")));
                }
            }
        }
        for j in 0..t {
            let (a, b) = (2 * j, 2 * j + 1);
            if (e[(a, a)] - e[(b, b)]).abs() > tol || (e[(a, b)] + e[(b, a)]).abs() > tol {
                return Err(Error::MalformedBlocks(format!("block {j} is not of the form [[a, b], [-b, a]]")));
            }
            if e[(a, b)] == 0.0 {
                return Err(Error::MalformedBlocks(format!("block {j} has zero imaginary part")));
            }
        }
        Ok(Self { t, x, e })
    }

    /// Number of rows of `X` (polynomial order).
    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    /// Number of real eigencolumns.
    pub fn m(&self) -> usize {
        self.x.ncols()
    }

    /// Number of complex-conjugate blocks.
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn e(&self) -> &DMatrix<f64> {
        &self.e
    }

    /// Column ranges of each eigenpair, complex blocks first.
    pub fn column_groups(&self) -> Vec<std::ops::Range<usize>> {
        let mut out: Vec<_> = (0..self.t).map(|j| 2 * j..2 * j + 2).collect();
        out.extend((2 * self.t..self.m()).map(|c| c..c + 1));
        out
    }
}

/// Packs eigenpairs into real form.
pub fn encode(pairs: &[EigenpairInput], n: usize) -> Result<RealEigenpairs> {
    for (index, p) in pairs.iter().enumerate() {
        if p.vector.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "eigenvector {index} has length {}, expected {n}",
                p.vector.len()
            )));
        }
        let norm = p.vector.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroEigenvector { index });
        }
        if p.is_real() {
            let imag_norm = p.vector.iter().map(|z| z.im * z.im).sum::<f64>().sqrt();
            if imag_norm > REAL_VECTOR_TOL * norm.max(1.0) {
                return Err(Error::ComplexVectorForRealEigenvalue { index, imag_norm });
            }
        }
    }
    let complex: Vec<usize> = (0..pairs.len()).filter(|&i| !pairs[i].is_real()).collect();
    for (a, &i) in complex.iter().enumerate() {
        for &j in &complex[a + 1..] {
            if is_conjugate_duplicate(&pairs[i], &pairs[j]) {
                return Err(Error::DuplicateConjugate { first: i, second: j });
            }
        }
    }
    let real: Vec<usize> = (0..pairs.len()).filter(|&i| pairs[i].is_real()).collect();
    let t = complex.len();
    let m = 2 * t + real.len();
    if m == 0 {
        return Err(Error::MalformedBlocks("no eigenpairs supplied".into()));
    }

    let mut x = DMatrix::zeros(n, m);
    let mut e = DMatrix::zeros(m, m);
    for (j, &i) in complex.iter().enumerate() {
        let p = &pairs[i];
        let (c0, c1) = (2 * j, 2 * j + 1);
        for r in 0..n {
            x[(r, c0)] = p.vector[r].re;
            x[(r, c1)] = p.vector[r].im;
        }
        e[(c0, c0)] = p.lambda.re;
        e[(c1, c1)] = p.lambda.re;
        e[(c0, c1)] = p.lambda.im;
        e[(c1, c0)] = -p.lambda.im;
    }
    for (j, &i) in real.iter().enumerate() {
        let p = &pairs[i];
        let c = 2 * t + j;
        for r in 0..n {
            x[(r, c)] = p.vector[r].re;
        }
        e[(c, c)] = p.lambda.re;
    }
    Ok(RealEigenpairs { t, x, e })
}

fn is_conjugate_duplicate(a: &EigenpairInput, b: &EigenpairInput) -> bool {
    let close = (a.lambda - b.lambda.conj()).norm() <= CONJUGATE_TOL * a.lambda.norm().max(1.0);
    if !close {
        return false;
    }
    // b's vector parallel to conj(a's vector)
    let inner: Complex64 = a.vector.iter().zip(b.vector.iter()).map(|(x, y)| x * y).sum();
    let scale = a.vector.norm() * b.vector.norm();
    (inner.norm() - scale).abs() <= 1e-8 * scale
}

/// Unpacks real-form eigendata, one eigenpair per conjugate pair.
pub fn decode(re: &RealEigenpairs) -> Result<Vec<EigenpairInput>> {
    let checked = RealEigenpairs::from_parts(re.x.clone(), re.e.clone(), re.t)?;
    let n = checked.n();
    let mut out = Vec::with_capacity(checked.m() - checked.t);
    for j in 0..checked.t {
        let (c0, c1) = (2 * j, 2 * j + 1);
        let lambda = Complex64::new(checked.e[(c0, c0)], checked.e[(c0, c1)]);
        let vector = DVector::from_iterator(n, (0..n).map(|r| Complex64::new(checked.x[(r, c0)], checked.x[(r, c1)])));
        out.push(EigenpairInput { lambda, vector });
    }
    for c in 2 * checked.t..checked.m() {
        let vector = DVector::from_iterator(n, (0..n).map(|r| Complex64::new(checked.x[(r, c)], 0.0)));
        out.push(EigenpairInput { lambda: Complex64::new(checked.e[(c, c)], 0.0), vector });
    }
    Ok(out)
}
