//! Small dense linear algebra. Factorizations run in `f64` through nalgebra
//! and are converted back to the working scalar.

use nalgebra::DMatrix;

use crate::scalar::Scalar;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_columns(cols: &[Vec<S>]) -> Self {
        let rows = cols.first().map_or(0, Vec::len);
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn mul_vec(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// `Aᵀ x`
    pub fn tr_mul_vec(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.rows);
        let mut out = vec![S::zero(); self.cols];
        for (i, &xi) in x.iter().enumerate() {
            if xi == S::zero() {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += a * xi;
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == S::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other[(l, j)];
                    out[(i, j)] += a * b;
                }
            }
        }
        out
    }

    pub fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].to_f64_lossy())
    }

    pub fn from_nalgebra(m: &DMatrix<f64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| S::lit(m[(i, j)]))
    }

    pub fn max_abs(&self) -> S {
        self.data
            .iter()
            .fold(S::zero(), |m, &x| if x.abs() > m { x.abs() } else { m })
    }
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

pub fn determinant<S: Scalar>(a: &Matrix<S>) -> S {
    assert_eq!(a.rows, a.cols);
    if a.rows == 0 {
        return S::one();
    }
    S::lit(a.to_nalgebra().lu().determinant())
}

/// Solves `A x = b`; `None` if `A` is numerically singular.
pub fn solve<S: Scalar>(a: &Matrix<S>, b: &[S]) -> Option<Vec<S>> {
    let rhs = nalgebra::DVector::from_iterator(b.len(), b.iter().map(|x| x.to_f64_lossy()));
    let x = a.to_nalgebra().lu().solve(&rhs)?;
    if x.iter().any(|v| !v.is_finite()) {
        return None;
    }
    Some(x.iter().map(|&v| S::lit(v)).collect())
}

/// Minimum-norm least-squares solution through the SVD, discarding singular
/// values below `rel_cut · σ_max`.
pub fn lstsq<S: Scalar>(a: &Matrix<S>, b: &[S], rel_cut: f64) -> Vec<S> {
    let m = a.to_nalgebra();
    let rhs = nalgebra::DVector::from_iterator(b.len(), b.iter().map(|x| x.to_f64_lossy()));
    let svd = m.svd(true, true);
    let smax = svd.singular_values.max();
    let eps = (rel_cut * smax).max(f64::MIN_POSITIVE);
    match svd.solve(&rhs, eps) {
        Ok(x) => x.iter().map(|&v| S::lit(v)).collect(),
        Err(_) => vec![S::zero(); a.cols],
    }
}

/// Eigen-decomposition of a symmetric matrix: eigenvalues ascending, with
/// eigenvectors as the matching columns.
pub fn symmetric_eigen<S: Scalar>(a: &Matrix<S>) -> (Vec<S>, Matrix<S>) {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let m = a.to_nalgebra();
    let sym = (&m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| S::lit(eig.eigenvalues[i])).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| S::lit(eig.eigenvectors[(r, order[c])]));
    (values, vectors)
}

/// Pseudo-inverse solve for a symmetric matrix, dropping eigenvalues with
/// `|λ| < rel_cut · max|λ|`.
pub fn symmetric_pinv_solve<S: Scalar>(a: &Matrix<S>, b: &[S], rel_cut: f64) -> Vec<S> {
    let (vals, vecs) = symmetric_eigen(a);
    let lmax = vals
        .iter()
        .fold(0.0f64, |m, v| m.max(v.to_f64_lossy().abs()));
    let cut = rel_cut * lmax;
    let n = a.rows;
    let mut x = vec![0.0f64; n];
    for (c, &lam) in vals.iter().enumerate() {
        let lam = lam.to_f64_lossy();
        if lam.abs() <= cut || lam == 0.0 {
            continue;
        }
        let coef: f64 = (0..n)
            .map(|r| vecs[(r, c)].to_f64_lossy() * b[r].to_f64_lossy())
            .sum::<f64>()
            / lam;
        for (r, xr) in x.iter_mut().enumerate() {
            *xr += coef * vecs[(r, c)].to_f64_lossy();
        }
    }
    x.into_iter().map(S::lit).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn determinant_and_solve() {
        let a = Matrix::from_fn(2, 2, |i, j| [[2.0, 1.0], [1.0, 3.0]][i][j]);
        assert_relative_eq!(determinant(&a), 5.0, epsilon = 1e-12);
        let x = solve(&a, &[3.0, 5.0]).unwrap();
        assert_relative_eq!(x[0], 0.8, epsilon = 1e-12);
        assert_relative_eq!(x[1], 1.4, epsilon = 1e-12);
        let s = Matrix::from_fn(2, 2, |_, _| 1.0f64);
        assert!(solve(&s, &[1.0, 2.0]).is_none());
    }

    #[test]
    fn eigen_sorted() {
        let a = Matrix::from_fn(3, 3, |i, j| if i == j { [3.0, -1.0, 2.0][i] } else { 0.0 });
        let (vals, vecs) = symmetric_eigen(&a);
        assert_eq!(vals, vec![-1.0, 2.0, 3.0]);
        assert_relative_eq!(f64::abs(vecs[(1, 0)]), 1.0);
    }

    #[test]
    fn pinv_drops_null_space() {
        let a = Matrix::from_fn(2, 2, |i, j| if i == j && i == 0 { 2.0 } else { 0.0 });
        let x = symmetric_pinv_solve(&a, &[4.0, 1.0], 1e-12);
        assert_relative_eq!(x[0], 2.0, epsilon = 1e-14);
        assert_eq!(x[1], 0.0);
    }

    #[test]
    fn least_squares_min_norm() {
        let a = Matrix::from_fn(1, 2, |_, _| 1.0f64);
        let x = lstsq(&a, &[2.0], 1e-12);
        assert_relative_eq!(x[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(x[1], 1.0, epsilon = 1e-12);
    }
}
