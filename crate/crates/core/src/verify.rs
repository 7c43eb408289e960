//! Forward checks: residual of the eigenvalue-eigenvector relation and a
//! companion-linearization eigensolver used as an independent oracle.

use nalgebra::{DMatrix, DVector, Schur};
use num_complex::Complex64;

use crate::eigendata::{EigenpairInput, RealEigenpairs};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::solver::MonicPolynomial;

/// Eigenvalues with `|im| <= SNAP_TOL * (1 + |re|)` are treated as real.
pub const SNAP_TOL: f64 = 1e-10;

const INVERSE_ITERATIONS: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    /// `|sum_{i<=k} A_i X E^i|_F` with `A_k = I`.
    pub fro: f64,
    /// Frobenius norm of the residual columns of each eigenpair.
    pub per_pair: Vec<f64>,
    /// `fro / max(1, |X E^k|_F)`.
    pub relative: f64,
}

/// Evaluates `X E^k + sum_{i<k} A_i X E^i`.
pub fn residual_matrix(poly: &MonicPolynomial, ep: &RealEigenpairs) -> Result<(DMatrix<f64>, f64)> {
    if poly.n() != ep.n() {
        return Err(Error::DimensionMismatch(format!(
            "polynomial order {} does not match eigenvector length {}",
            poly.n(),
            ep.n()
        )));
    }
    let mut xe = ep.x().clone();
    let mut acc = DMatrix::zeros(ep.n(), ep.m());
    for a in poly.coefficients() {
        acc += a * &xe;
        xe = &xe * ep.e();
    }
    let lead = xe.norm();
    acc += &xe;
    Ok((acc, lead))
}

pub fn residual(poly: &MonicPolynomial, ep: &RealEigenpairs) -> Result<ResidualReport> {
    let (res, lead) = residual_matrix(poly, ep)?;
    let per_pair = ep.column_groups().into_iter().map(|g| res.columns_range(g).norm()).collect();
    let fro = res.norm();
    Ok(ResidualReport { fro, per_pair, relative: fro / lead.max(1.0) })
}

/// Block companion matrix with first block row `-A_{k-1} .. -A_0` and
/// identity blocks on the subdiagonal.
pub fn companion_matrix(poly: &MonicPolynomial) -> DMatrix<f64> {
    let (n, k) = (poly.n(), poly.degree());
    let mut c = DMatrix::zeros(k * n, k * n);
    for block in 0..k {
        let a = poly.coefficient(k - 1 - block);
        c.view_mut((0, block * n), (n, n)).copy_from(&(-a));
    }
    for block in 1..k {
        c.view_mut((block * n, (block - 1) * n), (n, n)).fill_with_identity();
    }
    c
}

/// All eigenvalues of the polynomial (with multiplicity, `kn` of them), with
/// near-real values snapped to the real axis.
pub fn companion_eigenvalues(poly: &MonicPolynomial) -> Result<Vec<Complex64>> {
    let c = companion_matrix(poly);
    let schur = Schur::try_new(c, f64::EPSILON, 10_000).ok_or(Error::NoConvergence)?;
    Ok(schur.complex_eigenvalues().iter().map(|&z| snap(z)).collect())
}

fn snap(z: Complex64) -> Complex64 {
    if z.im.abs() <= SNAP_TOL * (1.0 + z.re.abs()) {
        Complex64::new(z.re, 0.0)
    } else {
        z
    }
}

/// Eigenpairs of the polynomial via the companion matrix, one representative
/// (positive imaginary part) per conjugate pair, sorted by real then
/// imaginary part. Eigenvectors have unit 2-norm, with their largest
/// component real and positive.
pub fn companion_eigs(poly: &MonicPolynomial) -> Result<Vec<EigenpairInput>> {
    let c = companion_matrix(poly).map(|v| Complex64::new(v, 0.0));
    let mut lambdas: Vec<Complex64> = companion_eigenvalues(poly)?.into_iter().filter(|z| z.im >= 0.0).collect();
    lambdas.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    lambdas
        .into_iter()
        .map(|lambda| {
            let v = companion_eigenvector(&c, lambda)?;
            let vector = polynomial_block(&v, poly.n(), poly.degree(), lambda.im == 0.0);
            Ok(EigenpairInput { lambda, vector })
        })
        .collect()
}

/// Inverse iteration on `C - lambda I`.
fn companion_eigenvector(c: &DMatrix<Complex64>, lambda: Complex64) -> Result<DVector<Complex64>> {
    let dim = c.nrows();
    let shifted = |mu: Complex64| {
        let mut m = c.clone();
        for i in 0..dim {
            m[(i, i)] -= mu;
        }
        m.lu()
    };
    let mut lu = shifted(lambda);
    if !lu.is_invertible() {
        let nudge = 1e-13 * (1.0 + lambda.norm());
        lu = shifted(lambda + Complex64::new(nudge, nudge));
    }
    let mut v = DVector::from_iterator(dim, (0..dim).map(|j| Complex64::new(1.0 + ((j * 7919) % 101) as f64 / 101.0, 0.0)));
    v /= Complex64::new(v.norm(), 0.0);
    for _ in 0..INVERSE_ITERATIONS {
        let w = lu.solve(&v).ok_or(Error::NoConvergence)?;
        let norm = w.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NoConvergence);
        }
        v = w / Complex64::new(norm, 0.0);
    }
    Ok(v)
}

/// A companion eigenvector stacks `lambda^{k-1} z, ..., lambda z, z`; the
/// blocks are proportional, so take the one with the largest norm.
fn polynomial_block(v: &DVector<Complex64>, n: usize, k: usize, real: bool) -> DVector<Complex64> {
    let best = (0..k)
        .max_by(|&a, &b| v.rows(a * n, n).norm().total_cmp(&v.rows(b * n, n).norm()))
        .unwrap_or(0);
    let mut z = v.rows(best * n, n).into_owned();
    let norm = z.norm();
    z /= Complex64::new(norm, 0.0);
    let pivot = z
        .iter()
        .copied()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()).then(b.0.cmp(&a.0)))
        .map(|(_, p)| p)
        .unwrap_or(Complex64::new(1.0, 0.0));
    let phase = pivot.conj() / pivot.norm();
    z *= phase;
    if real {
        for entry in z.iter_mut() {
            entry.im = 0.0;
        }
        let norm = z.norm();
        z /= Complex64::new(norm, 0.0);
    }
    z
}

/// The 50 x 50 symmetric tridiagonal quadratic used as a reference problem.
pub fn generate_example3() -> MonicPolynomial {
    let a1 = fixtures::symmetric_tridiagonal(&fixtures::EXAMPLE3_A1_DIAG, &fixtures::EXAMPLE3_A1_OFF);
    let a0 = fixtures::symmetric_tridiagonal(&fixtures::EXAMPLE3_A0_DIAG, &fixtures::EXAMPLE3_A0_OFF);
    MonicPolynomial::new(vec![a0, a1]).expect("fixture matrices are square")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigendata::encode;
    use crate::structures::{StructureBasis, StructureKind};

    fn scalar(coeffs: &[f64]) -> MonicPolynomial {
        MonicPolynomial::new(coeffs.iter().map(|&c| DMatrix::from_element(1, 1, c)).collect()).unwrap()
    }

    #[test]
    fn factored_scalar_quadratic() {
        let eigs = companion_eigs(&scalar(&[2.0, 3.0])).unwrap();
        let values: Vec<f64> = eigs.iter().map(|e| e.lambda.re).collect();
        assert_eq!(eigs.len(), 2);
        assert!((values[0] + 2.0).abs() < 1e-12 && (values[1] + 1.0).abs() < 1e-12);
        assert!(eigs.iter().all(|e| e.lambda.im == 0.0));
    }

    #[test]
    fn linear_case_is_eigenvalues_of_minus_a0() {
        let a0 = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let eigs = companion_eigs(&MonicPolynomial::new(vec![a0]).unwrap()).unwrap();
        assert!((eigs[0].lambda.re + 3.0).abs() < 1e-12);
        assert!((eigs[1].lambda.re + 1.0).abs() < 1e-12);
        let z = &eigs[0].vector;
        assert!((z[0].re - z[1].re).abs() < 1e-12);
    }

    #[test]
    fn complex_roots_are_deduplicated() {
        // lambda^2 + 1: roots +-i, keep +i
        let eigs = companion_eigs(&scalar(&[1.0, 0.0])).unwrap();
        assert_eq!(eigs.len(), 1);
        assert!((eigs[0].lambda - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn zero_eigenvalue_still_gives_a_vector() {
        // lambda^2 + lambda: roots 0 and -1
        let eigs = companion_eigs(&scalar(&[0.0, 1.0])).unwrap();
        assert_eq!(eigs.len(), 2);
        for e in eigs {
            assert!((e.vector.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn residual_of_zero_polynomial_is_lead_term() {
        let ep = encode(&[EigenpairInput::real(2.0, &[1.0, 0.0])], 2).unwrap();
        let poly = MonicPolynomial::new(vec![DMatrix::zeros(2, 2)]).unwrap();
        let rep = residual(&poly, &ep).unwrap();
        assert_eq!(rep.fro, 2.0);
        assert_eq!(rep.per_pair, vec![2.0]);
        assert_eq!(rep.relative, 1.0);
    }

    #[test]
    fn residual_dimension_mismatch() {
        let ep = encode(&[EigenpairInput::real(2.0, &[1.0, 0.0])], 2).unwrap();
        assert!(residual(&scalar(&[1.0]), &ep).is_err());
    }

    #[test]
    fn perturbed_eigenvalue_increases_residual() {
        // P(lambda) = lambda^2 I + A1 lambda + A0 with known root
        let poly = generate_example3();
        let eigs = companion_eigs(&poly).unwrap();
        let pick = eigs.iter().find(|e| e.lambda.im == 0.0).unwrap().clone();
        let exact = residual(&poly, &encode(std::slice::from_ref(&pick), 50).unwrap()).unwrap();
        let mut moved = pick.clone();
        moved.lambda.re += 0.1;
        let off = residual(&poly, &encode(&[moved], 50).unwrap()).unwrap();
        assert!(exact.fro < 1e-9);
        // direct evaluation of (lambda+d)^2 z + (lambda+d) A1 z + A0 z with P(lambda) z = 0
        let z = pick.vector.map(|c| c.re);
        let l = pick.lambda.re;
        let d = 0.1;
        let direct = (&z * ((l + d) * (l + d) - l * l) + poly.coefficient(1) * &z * d).norm();
        assert!((off.fro - direct).abs() < 1e-8 * direct);
    }

    #[test]
    fn example3_generator_entries() {
        let p = generate_example3();
        assert_eq!(p.n(), 50);
        let (a0, a1) = (p.coefficient(0), p.coefficient(1));
        assert_eq!(a1[(0, 0)], 10.0);
        assert_eq!(a1[(0, 1)], 2.8);
        assert_eq!(a1[(1, 0)], 2.8);
        assert_eq!(a0[(0, 0)], 5.6);
        assert_eq!(a0[(0, 1)], 3.2);
        let basis = StructureBasis::build(StructureKind::SymmetricTridiagonal, 50).unwrap();
        assert!(basis.coords_of(a0).is_ok());
        assert!(basis.coords_of(a1).is_ok());
    }

    #[test]
    fn example3_spectrum_contains_published_values() {
        let eigs = companion_eigs(&generate_example3()).unwrap();
        for target in [Complex64::new(-2.5036, 0.0), Complex64::new(-2.1202, 0.0), Complex64::new(-1.5564, 0.0232)] {
            let best = eigs.iter().map(|e| (e.lambda - target).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 5e-4, "{target} not found (closest {best:.2e})");
        }
        let count: usize = eigs.iter().map(EigenpairInput::columns).sum();
        assert_eq!(count, 100);
    }
}
