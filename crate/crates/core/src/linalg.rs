//! Small dense helpers shared by the solver modules.

use nalgebra::{DMatrix, DVector};

/// SVD-based Moore-Penrose pseudoinverse with a numerical-rank cutoff.
///
/// Singular values `s <= factor * s_max` are treated as zero. The default
/// factor is `eps * max(rows, cols)`.
#[derive(Debug, Clone)]
pub struct Pseudoinverse {
    rows: usize,
    cols: usize,
    /// Left singular vectors of the retained range, `rows x rank`.
    u: DMatrix<f64>,
    /// Right singular vectors of the retained range, `cols x rank`.
    v: DMatrix<f64>,
    sigma: DVector<f64>,
    singular_values: Vec<f64>,
    cutoff: f64,
}

impl Pseudoinverse {
    pub fn default_factor(rows: usize, cols: usize) -> f64 {
        f64::EPSILON * rows.max(cols) as f64
    }

    pub fn new(a: &DMatrix<f64>, factor: Option<f64>) -> Self {
        let (rows, cols) = a.shape();
        let factor = factor.unwrap_or_else(|| Self::default_factor(rows, cols));
        let (u_full, vt_full, sv) = tall_svd(a);

        let mut order: Vec<usize> = (0..sv.len()).collect();
        order.sort_by(|&i, &j| sv[j].total_cmp(&sv[i]));
        let singular_values: Vec<f64> = order.iter().map(|&i| sv[i]).collect();
        let smax = singular_values.first().copied().unwrap_or(0.0);
        let cutoff = factor * smax;
        let kept: Vec<usize> = order.into_iter().filter(|&i| sv[i] > cutoff && sv[i] > 0.0).collect();

        let rank = kept.len();
        let mut u = DMatrix::zeros(rows, rank);
        let mut v = DMatrix::zeros(cols, rank);
        let mut sigma = DVector::zeros(rank);
        for (c, &i) in kept.iter().enumerate() {
            u.set_column(c, &u_full.column(i));
            v.set_column(c, &vt_full.row(i).transpose());
            sigma[c] = sv[i];
        }
        Self { rows, cols, u, v, sigma, singular_values, cutoff }
    }

    pub fn rank(&self) -> usize {
        self.sigma.len()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// All singular values, descending.
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// `A^+ b`.
    pub fn apply(&self, b: &DVector<f64>) -> DVector<f64> {
        let mut coeffs = self.u.tr_mul(b);
        coeffs.component_div_assign(&self.sigma);
        &self.v * coeffs
    }

    /// `A A^+ b`, the orthogonal projection of `b` onto the range of `A`.
    pub fn project_range(&self, b: &DVector<f64>) -> DVector<f64> {
        &self.u * self.u.tr_mul(b)
    }

    /// `(I - A^+ A) y`, the orthogonal projection of `y` onto the nullspace.
    pub fn project_null(&self, y: &DVector<f64>) -> DVector<f64> {
        y - &self.v * self.v.tr_mul(y)
    }

    /// Dense `A^+`.
    pub fn matrix(&self) -> DMatrix<f64> {
        let mut scaled = self.v.clone();
        for (mut col, s) in scaled.column_iter_mut().zip(self.sigma.iter()) {
            col /= *s;
        }
        scaled * self.u.transpose()
    }

    /// Dense `A^+ A`.
    pub fn row_space_projector(&self) -> DMatrix<f64> {
        &self.v * self.v.transpose()
    }
}

/// Thin SVD `(U, V^T, s)` computed with faer, whose SVD stays accurate on
/// rank-deficient input.
fn tall_svd(a: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>, DVector<f64>) {
    let (rows, cols) = a.shape();
    let p = rows.min(cols);
    if p == 0 {
        return (DMatrix::zeros(rows, 0), DMatrix::zeros(0, cols), DVector::zeros(0));
    }
    let m = faer::Mat::<f64>::from_fn(rows, cols, |i, j| a[(i, j)]);
    let svd = m.thin_svd().expect("SVD of a finite matrix converges");
    let (u, v, s) = (svd.U(), svd.V(), svd.S().column_vector());
    (
        DMatrix::from_fn(rows, p, |i, j| u[(i, j)]),
        DMatrix::from_fn(p, cols, |i, j| v[(j, i)]),
        DVector::from_fn(p, |i, _| s[i]),
    )
}

/// Largest absolute entry of `a - a^T`.
pub fn asymmetry(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..i {
            worst = worst.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    worst
}

/// `a^0 .. a^k` by repeated multiplication.
pub fn powers(a: &DMatrix<f64>, k: usize) -> Vec<DMatrix<f64>> {
    let mut out = Vec::with_capacity(k + 1);
    out.push(DMatrix::identity(a.nrows(), a.ncols()));
    for i in 1..=k {
        let next = &out[i - 1] * a;
        out.push(next);
    }
    out
}
