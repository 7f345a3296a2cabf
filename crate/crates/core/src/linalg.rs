//! Dense complex linear algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector, Dim, Matrix, RawStorage, SymmetricEigen};
use num_complex::Complex64;

use crate::algebra::{ComplexMatrix, ComplexVector};

/// Eigendecomposition of a Hermitian matrix with a reproducible basis.
///
/// Eigenvalues ascend; each eigenvector is rotated so that its first
/// component with modulus above `1e-12` is real and positive.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn new(m: &ComplexMatrix) -> Self {
        assert!(m.is_square(), "Hermitian eigendecomposition of a non-square matrix");
        let n = m.nrows();
        if n == 0 {
            return Self { values: vec![], vectors: DMatrix::zeros(0, 0) };
        }
        let sym = (m + m.adjoint()).scale(0.5);
        let eig = SymmetricEigen::new(sym);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let mut vectors = DMatrix::zeros(n, n);
        for (k, &i) in order.iter().enumerate() {
            let mut v: DVector<Complex64> = eig.eigenvectors.column(i).into_owned();
            if let Some(lead) = v.iter().find(|z| z.norm() > 1e-12).copied() {
                let phase = lead.conj() / lead.norm();
                v *= phase;
            }
            vectors.set_column(k, &v);
        }
        Self { values, vectors }
    }

    /// `V diag(f(λ)) V†`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let mut scaled = self.vectors.clone();
        for (k, &lam) in self.values.iter().enumerate() {
            let s = f(lam);
            for z in scaled.column_mut(k).iter_mut() {
                *z *= s;
            }
        }
        scaled * self.vectors.adjoint()
    }

    pub fn max_abs_value(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

/// Largest entry modulus of a complex matrix or vector.
pub trait MaxModulus {
    fn max_modulus(&self) -> f64;
}

impl<R: Dim, C: Dim, S: RawStorage<Complex64, R, C>> MaxModulus for Matrix<Complex64, R, C, S> {
    fn max_modulus(&self) -> f64 {
        self.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub fn hermitian_defect(m: &ComplexMatrix) -> f64 {
    (m - m.adjoint()).max_modulus()
}

/// `⟨u, v⟩`, conjugate-linear in the first argument.
pub fn inner(u: &ComplexVector, v: &ComplexVector) -> Complex64 {
    u.dotc(v)
}
