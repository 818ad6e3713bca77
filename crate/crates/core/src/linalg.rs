//! Small dense linear-algebra helpers over nalgebra.

use nalgebra::{DMatrix, DVector};

/// Stacks column vectors side by side. All columns must share a length.
pub fn stack_columns(rows: usize, columns: &[DVector<f64>]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(rows, columns.len());
    for (j, c) in columns.iter().enumerate() {
        debug_assert_eq!(c.len(), rows);
        m.set_column(j, c);
    }
    m
}

/// Singular values in descending order. An empty matrix has none.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut values: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Orthonormal basis of the column span, keeping directions whose singular value exceeds
/// `rank_tol` times the largest one.
pub fn orthonormal_basis(m: &DMatrix<f64>, rank_tol: f64) -> DMatrix<f64> {
    if m.ncols() == 0 {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let sigma = &svd.singular_values;
    let largest = sigma.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..sigma.len())
        .filter(|&i| largest > 0.0 && sigma[i] > rank_tol * largest)
        .collect();
    let mut basis = DMatrix::zeros(m.nrows(), keep.len());
    for (j, &i) in keep.iter().enumerate() {
        basis.set_column(j, &u.column(i));
    }
    basis
}

/// Component of `v` orthogonal to the span of the orthonormal columns of `basis`.
pub fn project_out(v: &DVector<f64>, basis: &DMatrix<f64>) -> DVector<f64> {
    if basis.ncols() == 0 {
        return v.clone();
    }
    let coeffs = basis.transpose() * v;
    let mut r = v - basis * &coeffs;
    // second pass for orthogonality at the 1e-16 level
    let again = basis.transpose() * &r;
    r -= basis * again;
    r
}

/// Smallest principal angle (radians) between two column spans. Returns π/2 when either is empty.
pub fn min_principal_angle(a: &DMatrix<f64>, b: &DMatrix<f64>, rank_tol: f64) -> f64 {
    let qa = orthonormal_basis(a, rank_tol);
    let qb = orthonormal_basis(b, rank_tol);
    if qa.ncols() == 0 || qb.ncols() == 0 {
        return std::f64::consts::FRAC_PI_2;
    }
    let cosines = singular_values(&(qa.transpose() * qb));
    let largest = cosines.first().copied().unwrap_or(0.0).clamp(0.0, 1.0);
    largest.acos()
}

/// Orthonormalizes the columns in order (thin QR). Spans of leading column prefixes are preserved.
pub fn orthonormalize(columns: &[DVector<f64>]) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(columns.len());
    for c in columns {
        let mut v = c.clone();
        // modified Gram-Schmidt, two passes
        for _ in 0..2 {
            for q in &out {
                let proj = q.dot(&v);
                v -= q * proj;
            }
        }
        let n = v.norm();
        out.push(v / n);
    }
    out
}
