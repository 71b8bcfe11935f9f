//! Dense real matrix kernels.
//!
//! Everything here works on small dense square matrices stored row-major. The
//! symmetric eigensolver is a cyclic Jacobi iteration, which is slow compared
//! to tridiagonal QR but accurate to a few ulps and gives orthonormal
//! eigenvectors directly. Graph matrices in this crate rarely exceed a few
//! dozen vertices.

use crate::error::{Error, Result};

/// Convergence threshold on the off-diagonal Frobenius norm, relative to `1 + ‖M‖_F`.
pub const JACOBI_TOL: f64 = 1e-12;

/// Hard cap on the number of Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// A dense real square matrix.
///
/// The `symmetric` flag is set only when `entries[i][j] == entries[j][i]`
/// holds bit-for-bit; symmetric constructors mirror the upper triangle so the
/// flag is exact by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
    symmetric: bool,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        Ok(Self {
            n,
            data: vec![0.0; n * n],
            symmetric: true,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        Ok(m)
    }

    pub fn from_diag(diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            check_finite(d, i, i)?;
            m.data[i * m.n + i] = d;
        }
        Ok(m)
    }

    /// Builds a symmetric matrix from `f(i, j)` evaluated on the upper triangle
    /// (`i <= j`); the lower triangle is mirrored.
    pub fn symmetric_from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                check_finite(v, i, j)?;
                m.data[i * n + j] = v;
                m.data[j * n + i] = v;
            }
        }
        Ok(m)
    }

    /// Builds a matrix from rows. The symmetric flag is set iff the rows are
    /// exactly symmetric.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::Ragged {
                    expected: n,
                    row: i,
                    found: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                check_finite(v, i, j)?;
            }
            data.extend_from_slice(row);
        }
        let symmetric = (0..n).all(|i| (i + 1..n).all(|j| data[i * n + j] == data[j * n + i]));
        Ok(Self { n, data, symmetric })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn transpose(&self) -> Self {
        if self.symmetric {
            return self.clone();
        }
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j];
            }
        }
        Self {
            n,
            data,
            symmetric: false,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|x| c * x)
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x)
    }

    /// Returns `M + c·I`.
    pub fn shift_diagonal(&self, c: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.data[i * self.n + i] += c;
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(Self::with_detected_symmetry(n, data))
    }

    /// `Mᵀ·M`, returned with an exactly mirrored (symmetric) layout.
    pub fn gram(&self) -> Self {
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let s: f64 = (0..n)
                    .map(|k| self.data[k * n + i] * self.data[k * n + j])
                    .sum();
                data[i * n + j] = s;
                data[j * n + i] = s;
            }
        }
        Self {
            n,
            data,
            symmetric: true,
        }
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.same_order(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&x| f(x)).collect(),
            symmetric: self.symmetric,
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.same_order(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        if self.symmetric && other.symmetric {
            // elementwise ops on two exactly symmetric operands stay exactly symmetric
            Ok(Self {
                n: self.n,
                data,
                symmetric: true,
            })
        } else {
            Ok(Self::with_detected_symmetry(self.n, data))
        }
    }

    fn same_order(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    fn with_detected_symmetry(n: usize, data: Vec<f64>) -> Self {
        let symmetric = (0..n).all(|i| (i + 1..n).all(|j| data[i * n + j] == data[j * n + i]));
        Self { n, data, symmetric }
    }
}

fn check_finite(v: f64, row: usize, col: usize) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { row, col })
    }
}

/// Eigenvalues sorted non-increasing, with optional orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Column-major `n×n`: column `k` is the unit eigenvector for `eigenvalues[k]`.
    eigenvectors: Option<Vec<f64>>,
}

impl Spectrum {
    pub fn order(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn has_vectors(&self) -> bool {
        self.eigenvectors.is_some()
    }

    pub fn eigenvector(&self, k: usize) -> Option<&[f64]> {
        let n = self.order();
        self.eigenvectors.as_ref().map(|v| &v[k * n..(k + 1) * n])
    }

    pub fn min(&self) -> f64 {
        *self.eigenvalues.last().expect("spectrum is non-empty")
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Rebuilds `V·diag(f(λ))·Vᵀ`. Requires eigenvectors.
    pub fn reconstruct(&self, f: impl Fn(f64) -> f64) -> Option<SymMatrix> {
        let vecs = self.eigenvectors.as_ref()?;
        let n = self.order();
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        SymMatrix::symmetric_from_fn(n, |i, j| {
            (0..n)
                .map(|k| vecs[k * n + i] * fl[k] * vecs[k * n + j])
                .sum()
        })
        .ok()
    }
}

/// Non-negative singular values sorted non-increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularValues {
    pub values: Vec<f64>,
}

impl SingularValues {
    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Full symmetric eigendecomposition with eigenvectors.
pub fn eigh(m: &SymMatrix) -> Result<Spectrum> {
    jacobi(m, true, JACOBI_MAX_SWEEPS)
}

/// Eigenvalues only; skips eigenvector accumulation.
pub fn eigvalsh(m: &SymMatrix) -> Result<Vec<f64>> {
    jacobi(m, false, JACOBI_MAX_SWEEPS).map(|s| s.eigenvalues)
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

fn jacobi(m: &SymMatrix, want_vectors: bool, max_sweeps: usize) -> Result<Spectrum> {
    if !m.symmetric {
        return Err(Error::NotSymmetric);
    }
    let n = m.n;
    let mut a = m.data.clone();
    let mut v = if want_vectors {
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
        Some(v)
    } else {
        None
    };
    let threshold = JACOBI_TOL * (1.0 + m.frobenius_norm());

    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&a, n);
    while off > threshold {
        if sweeps == max_sweeps {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;

                a[p * n + p] -= t * apq;
                a[q * n + q] += t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    a[k * n + p] = new_kp;
                    a[p * n + k] = new_kp;
                    a[k * n + q] = new_kq;
                    a[q * n + k] = new_kq;
                }
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&a, n);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]));
    let eigenvalues = order.iter().map(|&i| a[i * n + i]).collect();
    // v is row-major with eigenvectors in columns; store them column-major
    let eigenvectors = v.map(|v| {
        let mut cols = Vec::with_capacity(n * n);
        for &k in &order {
            cols.extend((0..n).map(|i| v[i * n + k]));
        }
        cols
    });
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

fn sort_descending(values: &mut [f64]) {
    values.sort_by(|a, b| b.total_cmp(a));
}

/// Singular values. Symmetric input uses `|λ_i|`; otherwise the square roots
/// of the eigenvalues of `MᵀM`, with roundoff negatives clamped to zero.
pub fn singular_values(m: &SymMatrix) -> Result<SingularValues> {
    let mut values: Vec<f64> = if m.symmetric {
        eigvalsh(m)?.into_iter().map(f64::abs).collect()
    } else {
        eigvalsh(&m.gram())?
            .into_iter()
            .map(|l| l.max(0.0).sqrt())
            .collect()
    };
    sort_descending(&mut values);
    Ok(SingularValues { values })
}

/// Sum of singular values (trace norm).
pub fn matrix_energy(m: &SymMatrix) -> Result<f64> {
    singular_values(m).map(|s| s.sum())
}

/// PSD test: `λ_min ≥ −tol·(1 + ‖M‖_F)`.
pub fn is_psd(m: &SymMatrix, tol: f64) -> Result<bool> {
    min_eigenvalue(m).map(|min| min >= -tol * (1.0 + m.frobenius_norm()))
}

fn min_eigenvalue(m: &SymMatrix) -> Result<f64> {
    eigvalsh(m).map(|ev| ev.last().copied().expect("order >= 1"))
}

/// Matrix absolute value `|M| = (MᵀM)^{1/2}`.
///
/// For symmetric `M` this is `V·diag(|λ_i|)·Vᵀ`; otherwise the positive square
/// root of the Gram matrix.
pub fn matrix_abs(m: &SymMatrix) -> Result<SymMatrix> {
    let spectrum = if m.symmetric {
        eigh(m)?
    } else {
        eigh(&m.gram())?
    };
    let f: fn(f64) -> f64 = if m.symmetric {
        f64::abs
    } else {
        |l| l.max(0.0).sqrt()
    };
    Ok(spectrum
        .reconstruct(f)
        .expect("eigh returns eigenvectors and entries stay finite"))
}

/// Block-diagonal direct sum.
pub fn direct_sum(blocks: &[SymMatrix]) -> Result<SymMatrix> {
    if blocks.is_empty() {
        return Err(Error::Empty("direct sum block list"));
    }
    let n: usize = blocks.iter().map(SymMatrix::order).sum();
    let mut data = vec![0.0; n * n];
    let mut offset = 0;
    for b in blocks {
        for i in 0..b.n {
            let row = (offset + i) * n + offset;
            data[row..row + b.n].copy_from_slice(&b.data[i * b.n..(i + 1) * b.n]);
        }
        offset += b.n;
    }
    Ok(SymMatrix {
        n,
        data,
        symmetric: blocks.iter().all(SymMatrix::is_symmetric),
    })
}

/// For a PSD matrix, checks that every (numerically) zero diagonal entry has a
/// zero row and column.
pub fn psd_zero_diag_rows(m: &SymMatrix, tol: f64) -> Result<bool> {
    let min = min_eigenvalue(m)?;
    let norm = m.frobenius_norm();
    if min < -tol * (1.0 + norm) {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    let bound = tol.sqrt() * (1.0 + norm);
    let n = m.n;
    Ok((0..n)
        .filter(|&i| m.get(i, i).abs() <= tol)
        .all(|i| (0..n).all(|j| m.get(i, j).abs() <= bound && m.get(j, i).abs() <= bound)))
}
