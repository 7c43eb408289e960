//! Reference data for three mass-spring test problems, transcribed to four
//! decimals exactly as published. The same data ships as JSON under
//! `fixtures/` at the repository root.
//!
//! * problem 1: n = 3, symmetric coefficients, one complex pair and one real
//!   eigenvalue;
//! * problem 2: n = 4, skew-symmetric coefficients, one complex pair;
//! * problem 3: n = 50, symmetric tridiagonal generator polynomial.

use nalgebra::{DMatrix, DVector};

use crate::eigendata::EigenpairInput;

#[rustfmt::skip]
const EX1_X: [f64; 9] = [
    -0.0406, -0.4699,  0.4231,
    -0.4504, -0.2542,  0.3510,
     0.7128, -0.0438, -0.8353,
];

pub fn example1_x() -> DMatrix<f64> {
    DMatrix::from_row_slice(3, 3, &EX1_X)
}

pub fn example1_eigenpairs() -> Vec<EigenpairInput> {
    let x = example1_x();
    let col = |c: usize| x.column(c).iter().copied().collect::<Vec<_>>();
    vec![
        EigenpairInput::complex(-1.3064, 0.5436, &col(0), &col(1)),
        EigenpairInput::real(-0.2582, &col(2)),
    ]
}

/// Published `A_0` for problem 1.
pub fn example1_a0() -> DMatrix<f64> {
    #[rustfmt::skip]
    let a = DMatrix::from_row_slice(3, 3, &[
         4.2248, -0.0174, 2.4278,
        -0.0174,  1.8133, 0.2806,
         2.4278,  0.2806, 1.5618,
    ]);
    a
}

/// Published `A_1` for problem 1.
pub fn example1_a1() -> DMatrix<f64> {
    #[rustfmt::skip]
    let a = DMatrix::from_row_slice(3, 3, &[
        2.3283,  1.2405,  2.7130,
        1.2405,  0.1189, -1.2603,
        2.7130, -1.2603,  1.9321,
    ]);
    a
}

/// Alternative symmetric basis used with problem 1 (ordering E11, sym12,
/// sym13, E22, sym23, E33, with S3 and S6 modified).
pub fn example1_alt_basis() -> Vec<DMatrix<f64>> {
    let m = |v: [f64; 9]| DMatrix::from_row_slice(3, 3, &v);
    vec![
        m([1., 0., 0., 0., 0., 0., 0., 0., 0.]),
        m([0., 1., 0., 1., 0., 0., 0., 0., 0.]),
        m([1., 0., 1., 0., 0., 0., 1., 0., 0.]),
        m([0., 0., 0., 0., 1., 0., 0., 0., 0.]),
        m([0., 0., 0., 0., 0., 1., 0., 1., 0.]),
        m([0., 0., 0., 0., 0., 1., 0., 1., 1.]),
    ]
}

/// Symmetric basis in the second published ordering (E11, sym12, sym13, E22,
/// sym23, E33).
pub fn example1_listed_basis() -> Vec<DMatrix<f64>> {
    let m = |v: [f64; 9]| DMatrix::from_row_slice(3, 3, &v);
    vec![
        m([1., 0., 0., 0., 0., 0., 0., 0., 0.]),
        m([0., 1., 0., 1., 0., 0., 0., 0., 0.]),
        m([0., 0., 1., 0., 0., 0., 1., 0., 0.]),
        m([0., 0., 0., 0., 1., 0., 0., 0., 0.]),
        m([0., 0., 0., 0., 0., 1., 0., 1., 0.]),
        m([0., 0., 0., 0., 0., 0., 0., 0., 1.]),
    ]
}

#[rustfmt::skip]
const EX2_X: [f64; 8] = [
    -0.2164, -0.6066,
    -0.5435, -0.0169,
    -0.3518,  0.2746,
    -0.1845,  0.2374,
];

pub fn example2_x() -> DMatrix<f64> {
    DMatrix::from_row_slice(4, 2, &EX2_X)
}

pub fn example2_eigenpairs() -> Vec<EigenpairInput> {
    let x = example2_x();
    let col = |c: usize| x.column(c).iter().copied().collect::<Vec<_>>();
    vec![EigenpairInput::complex(0.5950, 9.5092, &col(0), &col(1))]
}

/// Published minimal-norm solution vector for problem 2.
pub const EXAMPLE2_SOLUTION: [f64; 12] = [
    6.1761, 5.1682, 3.0933, 2.9398, 2.5033, 0.6224, 3.7036, 3.0992, 1.8550, 1.7629, 1.5011, 0.3732,
];

/// Published squared residual `|X E^2 + A_1 X E + A_0 X|_F^2` for problem 2.
pub const EXAMPLE2_SQUARED_RESIDUAL: f64 = 8.0185e-6;

/// Consistency tolerance appropriate for data given to four decimals.
pub const FOUR_DECIMAL_CONSISTENCY_TOL: f64 = 1e-3;

fn skew4(upper: [f64; 6]) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(4, 4);
    let mut it = upper.iter();
    for i in 0..4 {
        for j in i + 1..4 {
            let v = *it.next().unwrap();
            a[(i, j)] = v;
            a[(j, i)] = -v;
        }
    }
    a
}

pub fn example2_a0() -> DMatrix<f64> {
    skew4([3.7036, 3.0992, 1.8550, 1.7629, 1.5011, 0.3732])
}

pub fn example2_a1() -> DMatrix<f64> {
    skew4([6.1761, 5.1682, 3.0933, 2.9398, 2.5033, 0.6224])
}

/// Alternative skew-symmetric basis for problem 2: the canonical one with
/// `S_1` replaced by `E12 - E21 - 2 E13 + 2 E31`.
pub fn example2_alt_basis() -> Vec<DMatrix<f64>> {
    let mut basis: Vec<DMatrix<f64>> = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            let mut s = DMatrix::zeros(4, 4);
            s[(i, j)] = 1.0;
            s[(j, i)] = -1.0;
            basis.push(s);
        }
    }
    basis[0][(0, 2)] = -2.0;
    basis[0][(2, 0)] = 2.0;
    basis
}

/// Published `A_0` for problem 2 under the alternative basis.
pub fn example2_alt_a0() -> DMatrix<f64> {
    skew4([-1.2396, 6.4982, 2.0008, 4.0440, 3.6581, 0.3732])
}

/// Published `A_1` for problem 2 under the alternative basis.
pub fn example2_alt_a1() -> DMatrix<f64> {
    skew4([6.1815, 5.1892, 3.6862, 2.7181, 1.7956, 1.3404])
}

/// Diagonal of `A_1` for problem 3.
#[rustfmt::skip]
pub const EXAMPLE3_A1_DIAG: [f64; 50] = [
    10.0, 20.0, 6.0, 8.0, 40.0, 10.0, 50.0, 60.0, 3.0, 70.0,
    30.0, 7.0, 9.0, 4.0, 80.0, 4.2, 6.5, 8.1, 1.2, 6.2,
    2.7, 4.3, 3.2, 2.6, 14.0, 2.9, 13.0, 12.4, 4.6, 14.2,
    8.0, 1.9, 2.4, 1.6, 25.0, 10.84, 22.3, 42.62, 54.24, 26.24,
    1.0, 4.0, 0.5, 0.3, 7.0, 3.0, 8.0, 0.9, 5.0, 0.2,
];

/// Off-diagonal of `A_1` for problem 3.
#[rustfmt::skip]
pub const EXAMPLE3_A1_OFF: [f64; 49] = [
    2.8, 1.2, 36.0, 8.0, 4.0, 16.0, 2.0, 1.2, 28.0, 12.0,
    32.0, 3.6, 20.0, 0.8, 1.8, 0.96, 3.92, 3.24, 1.04, 6.0,
    0.9, 3.0, 0.4, 4.0, 0.2, 2.0, 0.5, 0.6, 0.8, 0.3,
    2.0, 1.0, 6.0, 0.9, 3.0, 0.4, 4.0, 0.2, 2.0, 5.0,
    2.0, 1.0, 0.7, 8.0, 0.2, 0.6, 7.0, 0.4, 7.0,
];

/// Diagonal of `A_0` for problem 3.
#[rustfmt::skip]
pub const EXAMPLE3_A0_DIAG: [f64; 50] = [
    5.6, 2.4, 16.0, 8.0, 48.0, 7.2, 24.0, 3.2, 32.0, 1.6,
    16.0, 4.0, 4.8, 6.4, 72.0, 80.0, 168.0, 328.0, 432.0, 200.0,
    17.6, 26.4, 23.2, 17.6, 96.0, 19.2, 84.0, 75.2, 35.6, 85.6,
    52.0, 12.4, 15.6, 11.2, 168.0, 85.04, 175.8, 337.72, 433.44, 207.44,
    0.4, 4.0, 0.2, 2.0, 0.5, 0.6, 0.8, 9.0, 10.0, 21.0,
];

/// Off-diagonal of `A_0` for problem 3.
#[rustfmt::skip]
pub const EXAMPLE3_A0_OFF: [f64; 49] = [
    3.2, 3.6, 16.0, 20.0, 8.0, 4.0, 2.8, 32.0, 0.8, 2.4,
    28.0, 1.6, 28.0, 2.0, 76.0, 96.0, 112.0, 136.0, 204.0, 4.0,
    0.2, 2.0, 0.5, 0.6, 0.7, 0.3, 2.0, 1.0, 6.0, 8.0,
    16.0, 4.8, 6.4, 32.0, 8.0, 40.0, 48.0, 2.4, 56.0, 24.0,
    5.6, 7.2, 3.2, 64.0, 3.36, 5.2, 6.48, 0.96, 4.96,
];

/// The four published eigenvalues (one per conjugate pair) used for the
/// m = 4 case of problem 3, to four decimals.
pub const EXAMPLE3_SELECTED: [(f64, f64); 3] = [(-1.5564, 0.0232), (-2.5036, 0.0), (-2.1202, 0.0)];

/// Published residual norms of problem 3 for m = 2, 4, 6, 10.
pub const EXAMPLE3_TABLE: [(usize, bool, f64); 4] = [(2, false, 2.5e-11), (4, true, 7.1e-8), (6, true, 3.6e-8), (10, true, 5.74e-6)];

/// Symmetric tridiagonal matrix from its diagonal and off-diagonal.
pub fn symmetric_tridiagonal(diag: &[f64], off: &[f64]) -> DMatrix<f64> {
    let n = diag.len();
    assert_eq!(off.len() + 1, n, "off-diagonal must have n - 1 entries");
    let mut a = DMatrix::from_diagonal(&DVector::from_column_slice(diag));
    for (i, &b) in off.iter().enumerate() {
        a[(i, i + 1)] = b;
        a[(i + 1, i)] = b;
    }
    a
}
