//! Linear matrix structures.
//!
//! A structure is a linear subspace of the `n x n` real matrices given by an
//! ordered basis `S_1 .. S_r`. Every member is `A = sum_l alpha_l S_l` and the
//! column-stacked form satisfies `vec(A) = P * alpha`, where column `l` of the
//! `n^2 x r` matrix `P` is `vec(S_l)`.
//!
//! Built-in bases use entries in `{-1, 0, 1}` with pairwise disjoint supports,
//! so `P^T P` is diagonal and coordinates are recovered by a diagonal scaling.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;

/// Default relative tolerance for structure membership.
pub const MEMBERSHIP_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructureKind {
    Symmetric,
    SkewSymmetric,
    Tridiagonal,
    SymmetricTridiagonal,
    Pentadiagonal,
    Hankel,
    Toeplitz,
    Diagonal,
    Full,
    Custom,
}

impl StructureKind {
    pub const BUILT_IN: [StructureKind; 9] = [
        StructureKind::Symmetric,
        StructureKind::SkewSymmetric,
        StructureKind::Tridiagonal,
        StructureKind::SymmetricTridiagonal,
        StructureKind::Pentadiagonal,
        StructureKind::Hankel,
        StructureKind::Toeplitz,
        StructureKind::Diagonal,
        StructureKind::Full,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StructureKind::Symmetric => "symmetric",
            StructureKind::SkewSymmetric => "skew_symmetric",
            StructureKind::Tridiagonal => "tridiagonal",
            StructureKind::SymmetricTridiagonal => "symmetric_tridiagonal",
            StructureKind::Pentadiagonal => "pentadiagonal",
            StructureKind::Hankel => "hankel",
            StructureKind::Toeplitz => "toeplitz",
            StructureKind::Diagonal => "diagonal",
            StructureKind::Full => "full",
            StructureKind::Custom => "custom",
        }
    }

    /// Smallest order for which the kind has a nonempty canonical basis
    /// matching its dimension formula.
    pub fn min_order(self) -> usize {
        match self {
            StructureKind::SkewSymmetric => 2,
            StructureKind::Pentadiagonal => 3,
            _ => 1,
        }
    }

    /// Subspace dimension `r` for order `n`, or `None` for custom structures.
    pub fn dimension(self, n: usize) -> Option<usize> {
        let r = match self {
            StructureKind::Symmetric => n * (n + 1) / 2,
            StructureKind::SkewSymmetric => n * n.saturating_sub(1) / 2,
            StructureKind::Tridiagonal => (3 * n).saturating_sub(2),
            StructureKind::SymmetricTridiagonal => (2 * n).saturating_sub(1),
            StructureKind::Pentadiagonal => (5 * n).saturating_sub(6),
            StructureKind::Hankel | StructureKind::Toeplitz => (2 * n).saturating_sub(1),
            StructureKind::Diagonal => n,
            StructureKind::Full => n * n,
            StructureKind::Custom => return None,
        };
        Some(r)
    }

    /// Human-readable dimension formula.
    pub fn formula(self) -> &'static str {
        match self {
            StructureKind::Symmetric => "n(n+1)/2",
            StructureKind::SkewSymmetric => "n(n-1)/2",
            StructureKind::Tridiagonal => "3n-2",
            StructureKind::SymmetricTridiagonal => "2n-1",
            StructureKind::Pentadiagonal => "5n-6",
            StructureKind::Hankel | StructureKind::Toeplitz => "2n-1",
            StructureKind::Diagonal => "n",
            StructureKind::Full => "n^2",
            StructureKind::Custom => "-",
        }
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StructureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let kind = match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "symmetric" => StructureKind::Symmetric,
            "skew_symmetric" | "skew" => StructureKind::SkewSymmetric,
            "tridiagonal" => StructureKind::Tridiagonal,
            "symmetric_tridiagonal" => StructureKind::SymmetricTridiagonal,
            "pentadiagonal" => StructureKind::Pentadiagonal,
            "hankel" => StructureKind::Hankel,
            "toeplitz" => StructureKind::Toeplitz,
            "diagonal" => StructureKind::Diagonal,
            "full" => StructureKind::Full,
            "custom" => StructureKind::Custom,
            _ => return Err(Error::UnknownStructure(s.to_string())),
        };
        Ok(kind)
    }
}

/// One nonzero entry `(row, col, value)` of a basis matrix.
pub type Entry = (usize, usize, f64);

/// How coordinates are recovered from a dense matrix.
#[derive(Debug, Clone)]
enum CoordSolver {
    /// Columns of `P` have disjoint supports: `alpha = diag(1/|S_l|^2) P^T vec(A)`.
    Orthogonal(Vec<f64>),
    /// General basis: precomputed `P^+`.
    Pseudoinverse(DMatrix<f64>),
}

/// An ordered basis of a linear matrix structure together with its `P` matrix.
#[derive(Debug, Clone)]
pub struct StructureBasis {
    n: usize,
    kind: StructureKind,
    entries: Vec<Vec<Entry>>,
    p: DMatrix<f64>,
    coord_solver: CoordSolver,
}

impl StructureBasis {
    /// Builds the canonical basis of a built-in structure.
    pub fn build(kind: StructureKind, n: usize) -> Result<Self> {
        if kind == StructureKind::Custom {
            return Err(Error::CustomNeedsMatrices);
        }
        if n < kind.min_order() {
            return Err(Error::OrderTooSmall { kind: kind.as_str(), n, min: kind.min_order() });
        }
        let entries = canonical_entries(kind, n);
        debug_assert_eq!(Some(entries.len()), kind.dimension(n));
        Ok(Self::from_entries(kind, n, entries))
    }

    /// Loads an arbitrary ordered basis. Linear independence is checked via
    /// the numerical rank of `P`.
    pub fn from_matrices(matrices: &[DMatrix<f64>]) -> Result<Self> {
        let first = matrices.first().ok_or(Error::EmptyBasis)?;
        let n = first.nrows();
        if n == 0 {
            return Err(Error::ShapeMismatch("basis matrices must be nonempty".into()));
        }
        for (idx, s) in matrices.iter().enumerate() {
            if s.nrows() != n || s.ncols() != n {
                return Err(Error::ShapeMismatch(format!(
                    "basis matrix {idx} is {}x{}, expected {n}x{n}",
                    s.nrows(),
                    s.ncols()
                )));
            }
        }
        let r = matrices.len();
        if r > n * n {
            return Err(Error::LinearlyDependent { rank: n * n, count: r });
        }
        let entries: Vec<Vec<Entry>> = matrices
            .iter()
            .map(|s| {
                let mut e = Vec::new();
                for j in 0..n {
                    for i in 0..n {
                        let v = s[(i, j)];
                        if v != 0.0 {
                            e.push((i, j, v));
                        }
                    }
                }
                e
            })
            .collect();
        let p = assemble_p(n, &entries);
        let pinv = linalg::Pseudoinverse::new(&p, None);
        if pinv.rank() < r {
            return Err(Error::LinearlyDependent { rank: pinv.rank(), count: r });
        }
        Ok(Self {
            n,
            kind: StructureKind::Custom,
            entries,
            p,
            coord_solver: CoordSolver::Pseudoinverse(pinv.matrix()),
        })
    }

    fn from_entries(kind: StructureKind, n: usize, entries: Vec<Vec<Entry>>) -> Self {
        let p = assemble_p(n, &entries);
        let norms = entries.iter().map(|e| e.iter().map(|&(_, _, v)| v * v).sum()).collect();
        Self { n, kind, entries, p, coord_solver: CoordSolver::Orthogonal(norms) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension of the subspace.
    pub fn r(&self) -> usize {
        self.entries.len()
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    /// The `n^2 x r` matrix whose columns are `vec(S_l)`.
    pub fn p(&self) -> &DMatrix<f64> {
        &self.p
    }

    /// Nonzero entries of basis matrix `l`, in column-major order.
    pub fn entries(&self, l: usize) -> &[Entry] {
        &self.entries[l]
    }

    /// Dense basis matrix `S_l`.
    pub fn matrix(&self, l: usize) -> DMatrix<f64> {
        let mut s = DMatrix::zeros(self.n, self.n);
        for &(i, j, v) in &self.entries[l] {
            s[(i, j)] = v;
        }
        s
    }

    pub fn matrices(&self) -> Vec<DMatrix<f64>> {
        (0..self.r()).map(|l| self.matrix(l)).collect()
    }

    /// `sum_l S_l coords[l]`.
    pub fn realize(&self, coords: &DVector<f64>) -> Result<StructuredMatrix> {
        if coords.len() != self.r() {
            return Err(Error::LengthMismatch { expected: self.r(), got: coords.len() });
        }
        let mut dense = DMatrix::zeros(self.n, self.n);
        for (l, entries) in self.entries.iter().enumerate() {
            let c = coords[l];
            for &(i, j, v) in entries {
                dense[(i, j)] += v * c;
            }
        }
        Ok(StructuredMatrix { coords: coords.clone(), dense })
    }

    /// Coordinates of `a` in this basis, with the default membership tolerance.
    pub fn coords_of(&self, a: &DMatrix<f64>) -> Result<DVector<f64>> {
        self.coords_of_with_tol(a, MEMBERSHIP_TOL)
    }

    /// Coordinates of `a` in this basis. Fails when
    /// `|P c - vec(a)| > tol * max(1, |a|_F)`.
    pub fn coords_of_with_tol(&self, a: &DMatrix<f64>, tol: f64) -> Result<DVector<f64>> {
        if a.nrows() != self.n || a.ncols() != self.n {
            return Err(Error::ShapeMismatch(format!(
                "matrix is {}x{}, structure order is {}",
                a.nrows(),
                a.ncols(),
                self.n
            )));
        }
        let v = vec(a);
        let coords = match &self.coord_solver {
            CoordSolver::Orthogonal(norms) => DVector::from_iterator(
                self.r(),
                self.entries.iter().zip(norms).map(|(entries, &nrm)| {
                    let dot: f64 = entries.iter().map(|&(i, j, s)| s * a[(i, j)]).sum();
                    dot / nrm
                }),
            ),
            CoordSolver::Pseudoinverse(pinv) => pinv * &v,
        };
        let residual = (&self.p * &coords - &v).norm();
        let tolerance = tol * a.norm().max(1.0);
        if residual > tolerance {
            return Err(Error::NotInStructure { residual, tolerance });
        }
        Ok(coords)
    }

    /// Whether `a` belongs to the structure within `tol`.
    pub fn contains(&self, a: &DMatrix<f64>, tol: f64) -> bool {
        self.coords_of_with_tol(a, tol).is_ok()
    }
}

/// A member of a structure together with its coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuredMatrix {
    coords: DVector<f64>,
    dense: DMatrix<f64>,
}

impl StructuredMatrix {
    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn dense(&self) -> &DMatrix<f64> {
        &self.dense
    }

    pub fn into_dense(self) -> DMatrix<f64> {
        self.dense
    }
}

/// Column-major stacking of a matrix.
pub fn vec(a: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_column_slice(a.as_slice())
}

/// Inverse of [`vec`] for an `nrows x ncols` matrix.
pub fn unvec(v: &DVector<f64>, nrows: usize, ncols: usize) -> DMatrix<f64> {
    DMatrix::from_column_slice(nrows, ncols, v.as_slice())
}

fn assemble_p(n: usize, entries: &[Vec<Entry>]) -> DMatrix<f64> {
    let mut p = DMatrix::zeros(n * n, entries.len());
    for (l, e) in entries.iter().enumerate() {
        for &(i, j, v) in e {
            p[(j * n + i, l)] = v;
        }
    }
    p
}

fn sym_pair(i: usize, j: usize) -> Vec<Entry> {
    if i == j {
        vec![(i, i, 1.0)]
    } else {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        // column-major: (hi, lo) comes before (lo, hi)
        vec![(hi, lo, 1.0), (lo, hi, 1.0)]
    }
}

fn skew_pair(i: usize, j: usize) -> Vec<Entry> {
    // +1 at (i, j) above the diagonal, -1 at (j, i)
    vec![(j, i, -1.0), (i, j, 1.0)]
}

fn single(i: usize, j: usize) -> Vec<Entry> {
    vec![(i, j, 1.0)]
}

fn diagonal_band(n: usize, offset: isize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).filter_map(move |i| {
        let j = i as isize + offset;
        (0..n as isize).contains(&j).then_some((i, j as usize))
    })
}

fn canonical_entries(kind: StructureKind, n: usize) -> Vec<Vec<Entry>> {
    let mut out = Vec::new();
    match kind {
        StructureKind::Symmetric => {
            for j in 0..n {
                for i in 0..=j {
                    out.push(sym_pair(i, j));
                }
            }
        }
        StructureKind::SkewSymmetric => {
            for i in 0..n {
                for j in i + 1..n {
                    out.push(skew_pair(i, j));
                }
            }
        }
        StructureKind::Tridiagonal => {
            for offset in [0, 1, -1] {
                out.extend(diagonal_band(n, offset).map(|(i, j)| single(i, j)));
            }
        }
        StructureKind::SymmetricTridiagonal => {
            out.extend((0..n).map(|i| single(i, i)));
            out.extend((0..n - 1).map(|i| sym_pair(i, i + 1)));
        }
        StructureKind::Pentadiagonal => {
            for offset in [0, 1, -1, 2, -2] {
                out.extend(diagonal_band(n, offset).map(|(i, j)| single(i, j)));
            }
        }
        StructureKind::Hankel => {
            for d in 0..2 * n - 1 {
                let mut e: Vec<Entry> = Vec::new();
                for j in 0..n {
                    if d >= j && d - j < n {
                        e.push((d - j, j, 1.0));
                    }
                }
                out.push(e);
            }
        }
        StructureKind::Toeplitz => {
            for offset in -(n as isize - 1)..=(n as isize - 1) {
                let mut e: Vec<Entry> = diagonal_band(n, offset).map(|(i, j)| (i, j, 1.0)).collect();
                e.sort_by_key(|&(i, j, _)| (j, i));
                out.push(e);
            }
        }
        StructureKind::Diagonal => out.extend((0..n).map(|i| single(i, i))),
        StructureKind::Full => {
            for j in 0..n {
                for i in 0..n {
                    out.push(single(i, j));
                }
            }
        }
        StructureKind::Custom => unreachable!("custom kinds are rejected before this point"),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_a() -> DMatrix<f64> {
        DMatrix::from_row_slice(3, 3, &[4.0, 2.0, 8.0, 2.0, 7.0, 9.0, 8.0, 9.0, 5.0])
    }

    #[test]
    fn dimensions_for_documented_examples() {
        assert_eq!(StructureBasis::build(StructureKind::Symmetric, 3).unwrap().r(), 6);
        assert_eq!(StructureBasis::build(StructureKind::SkewSymmetric, 4).unwrap().r(), 6);
        assert_eq!(StructureBasis::build(StructureKind::SymmetricTridiagonal, 50).unwrap().r(), 99);
        let d = StructureBasis::build(StructureKind::Diagonal, 1).unwrap();
        assert_eq!(d.r(), 1);
        assert_eq!(d.matrix(0), DMatrix::from_element(1, 1, 1.0));
    }

    #[test]
    fn dimension_formula_holds_for_small_orders() {
        for kind in StructureKind::BUILT_IN {
            for n in kind.min_order()..=12 {
                let b = StructureBasis::build(kind, n).unwrap();
                assert_eq!(Some(b.r()), kind.dimension(n), "{kind} n={n}");
            }
        }
    }

    #[test]
    fn order_below_minimum_is_rejected() {
        assert!(matches!(
            StructureBasis::build(StructureKind::Pentadiagonal, 2),
            Err(Error::OrderTooSmall { min: 3, .. })
        ));
        assert!(matches!(
            StructureBasis::build(StructureKind::SkewSymmetric, 1),
            Err(Error::OrderTooSmall { .. })
        ));
        assert!(matches!(StructureBasis::build(StructureKind::Custom, 3), Err(Error::CustomNeedsMatrices)));
        assert!("heptagonal".parse::<StructureKind>().is_err());
    }

    #[test]
    fn p_gram_is_diagonal_with_support_sizes() {
        for kind in StructureKind::BUILT_IN {
            let b = StructureBasis::build(kind, 5).unwrap();
            let g = b.p().transpose() * b.p();
            for a in 0..b.r() {
                for c in 0..b.r() {
                    let expect = if a == c { b.entries(a).len() as f64 } else { 0.0 };
                    assert_eq!(g[(a, c)], expect, "{kind} ({a},{c})");
                }
            }
        }
    }

    #[test]
    fn symmetric_p_matches_printed_layout() {
        let b = StructureBasis::build(StructureKind::Symmetric, 3).unwrap();
        #[rustfmt::skip]
        let expected = DMatrix::from_row_slice(9, 6, &[
            1., 0., 0., 0., 0., 0.,
            0., 1., 0., 0., 0., 0.,
            0., 0., 0., 1., 0., 0.,
            0., 1., 0., 0., 0., 0.,
            0., 0., 1., 0., 0., 0.,
            0., 0., 0., 0., 1., 0.,
            0., 0., 0., 1., 0., 0.,
            0., 0., 0., 0., 1., 0.,
            0., 0., 0., 0., 0., 1.,
        ]);
        assert_eq!(b.p(), &expected);
    }

    #[test]
    fn vec_is_column_major() {
        let v = vec(&sample_a());
        assert_eq!(v.as_slice(), &[4.0, 2.0, 8.0, 2.0, 7.0, 9.0, 8.0, 9.0, 5.0]);
        assert_eq!(vec(&DMatrix::identity(2, 2)).as_slice(), &[1.0, 0.0, 0.0, 1.0]);
        assert!(vec(&DMatrix::zeros(3, 3)).iter().all(|&x| x == 0.0));
    }

    #[test]
    fn symmetric_coordinates() {
        let b = StructureBasis::build(StructureKind::Symmetric, 3).unwrap();
        let c = b.coords_of(&sample_a()).unwrap();
        assert_eq!(c.as_slice(), &[4.0, 2.0, 7.0, 8.0, 9.0, 5.0]);
        let back = b.realize(&c).unwrap();
        assert_eq!(back.dense(), &sample_a());

        let id = b.coords_of(&DMatrix::identity(3, 3)).unwrap();
        assert_eq!(id.as_slice(), &[1.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn skew_matrix_is_not_symmetric_member() {
        let b = StructureBasis::build(StructureKind::Symmetric, 2).unwrap();
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        assert!(matches!(b.coords_of(&a), Err(Error::NotInStructure { .. })));
    }

    #[test]
    fn realize_edge_cases() {
        let b = StructureBasis::build(StructureKind::Diagonal, 2).unwrap();
        let a = b.realize(&DVector::from_vec(vec![3.0, 5.0])).unwrap();
        assert_eq!(a.dense(), &DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 5.0])));
        let z = b.realize(&DVector::zeros(2)).unwrap();
        assert!(z.dense().iter().all(|&x| x == 0.0));
        assert!(matches!(b.realize(&DVector::zeros(3)), Err(Error::LengthMismatch { expected: 2, got: 3 })));
    }

    #[test]
    fn skew_basis_follows_row_major_upper_triangle() {
        let b = StructureBasis::build(StructureKind::SkewSymmetric, 4).unwrap();
        let s1 = b.matrix(0);
        assert_eq!(s1[(0, 1)], 1.0);
        assert_eq!(s1[(1, 0)], -1.0);
        let s4 = b.matrix(3);
        assert_eq!(s4[(1, 2)], 1.0);
        assert_eq!(s4[(2, 1)], -1.0);
    }

    #[test]
    fn toeplitz_and_hankel_orderings() {
        let t = StructureBasis::build(StructureKind::Toeplitz, 3).unwrap();
        assert_eq!(t.entries(0), &[(2, 0, 1.0)]);
        assert_eq!(t.entries(4), &[(0, 2, 1.0)]);
        let h = StructureBasis::build(StructureKind::Hankel, 3).unwrap();
        assert_eq!(h.entries(0), &[(0, 0, 1.0)]);
        assert_eq!(h.entries(4), &[(2, 2, 1.0)]);
        assert_eq!(h.entries(2).len(), 3);
    }

    #[test]
    fn custom_basis_checks() {
        let sym = StructureBasis::build(StructureKind::Symmetric, 3).unwrap();
        let custom = StructureBasis::from_matrices(&sym.matrices()).unwrap();
        assert_eq!(custom.r(), 6);
        assert_eq!(custom.kind(), StructureKind::Custom);

        let s1 = sym.matrix(1);
        let dup = StructureBasis::from_matrices(&[s1.clone(), &s1 * 2.0]);
        assert!(matches!(dup, Err(Error::LinearlyDependent { rank: 1, count: 2 })));
        assert!(matches!(StructureBasis::from_matrices(&[]), Err(Error::EmptyBasis)));
        let bad = StructureBasis::from_matrices(&[DMatrix::identity(2, 2), DMatrix::identity(3, 3)]);
        assert!(matches!(bad, Err(Error::ShapeMismatch(_))));
    }
}
