//! The convolution *-algebra of a finite groupoid.
//!
//! Elements are dense coefficient vectors indexed by transition id. For a
//! finite groupoid the algebra is finite-dimensional, so no completion is
//! needed; the operator norm of the left-regular representation serves as
//! the C*-norm.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupoid::FiniteGroupoid;

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// A finitely supported complex function on the transitions of a groupoid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlgebraElement(Vec<Complex64>);

impl AlgebraElement {
    pub fn zero(len: usize) -> Self {
        Self(vec![Complex64::default(); len])
    }

    /// The basis element `δ_id`.
    pub fn delta(len: usize, id: usize) -> Self {
        let mut f = Self::zero(len);
        f.0[id] = Complex64::new(1.0, 0.0);
        f
    }

    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        Self(coeffs)
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self(self.0.iter().map(|x| x * c).collect())
    }

    /// Largest coefficientwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len(), "elements of different groupoids");
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn to_vector(&self) -> ComplexVector {
        DVector::from_column_slice(&self.0)
    }
}

impl Index<usize> for AlgebraElement {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for AlgebraElement {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.0[i]
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.len(), rhs.len(), "elements of different groupoids");
        AlgebraElement(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.len(), rhs.len(), "elements of different groupoids");
        AlgebraElement(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<&AlgebraElement> for Complex64 {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        rhs.scale(self)
    }
}

pub(crate) fn check_len(g: &FiniteGroupoid, f: &AlgebraElement) -> Result<()> {
    if f.len() != g.len() {
        return Err(Error::DimensionMismatch { expected: g.len(), got: f.len() });
    }
    Ok(())
}

/// `(f ⋆ h)(γ) = Σ_{α ∘ β = γ} f(α) h(β)`.
pub fn convolve(g: &FiniteGroupoid, f: &AlgebraElement, h: &AlgebraElement) -> Result<AlgebraElement> {
    check_len(g, f)?;
    check_len(g, h)?;
    let mut out = AlgebraElement::zero(g.len());
    for &(a, b, c) in g.composable_triples() {
        out.0[c] += f.0[a] * h.0[b];
    }
    Ok(out)
}

/// Left-to-right product of several elements.
pub fn convolve_all(g: &FiniteGroupoid, factors: &[&AlgebraElement]) -> Result<AlgebraElement> {
    let mut acc = unit_element(g);
    for f in factors {
        acc = convolve(g, &acc, f)?;
    }
    Ok(acc)
}

/// `f*(α) = conj(f(α⁻¹))`.
pub fn adjoint(g: &FiniteGroupoid, f: &AlgebraElement) -> Result<AlgebraElement> {
    check_len(g, f)?;
    Ok(AlgebraElement((0..g.len()).map(|a| f.0[g.inverse(a)].conj()).collect()))
}

/// `Σ_x δ_{1_x}`.
pub fn unit_element(g: &FiniteGroupoid) -> AlgebraElement {
    let mut f = AlgebraElement::zero(g.len());
    for &u in g.units() {
        f.0[u] = Complex64::new(1.0, 0.0);
    }
    f
}

/// The element with coefficient one on every transition.
pub fn incidence_element(g: &FiniteGroupoid) -> AlgebraElement {
    AlgebraElement(vec![Complex64::new(1.0, 0.0); g.len()])
}

/// Largest coefficientwise modulus of `f - f*`.
pub fn self_adjoint_defect(g: &FiniteGroupoid, f: &AlgebraElement) -> Result<f64> {
    Ok(f.max_abs_diff(&adjoint(g, f)?))
}

pub fn is_self_adjoint(g: &FiniteGroupoid, f: &AlgebraElement, tol: f64) -> Result<bool> {
    Ok(self_adjoint_defect(g, f)? <= tol)
}

/// Matrix of `λ(f) ψ = f ⋆ ψ` in the δ-basis.
pub fn regular_representation(g: &FiniteGroupoid, f: &AlgebraElement) -> Result<ComplexMatrix> {
    check_len(g, f)?;
    let n = g.len();
    let mut m = ComplexMatrix::zeros(n, n);
    for &(a, b, c) in g.composable_triples() {
        m[(c, b)] += f.0[a];
    }
    Ok(m)
}

/// Recovers `f` from an operator of the form `λ(f)` by applying it to the unit element.
pub fn from_regular(g: &FiniteGroupoid, m: &ComplexMatrix) -> Result<AlgebraElement> {
    if m.nrows() != g.len() || m.ncols() != g.len() {
        return Err(Error::DimensionMismatch { expected: g.len(), got: m.nrows() });
    }
    let mut f = AlgebraElement::zero(g.len());
    // λ(f) δ_{1_x} = f restricted to transitions leaving x.
    for &u in g.units() {
        for a in 0..g.len() {
            f.0[a] += m[(a, u)];
        }
    }
    Ok(f)
}

/// Operator norm of `λ(f)`.
pub fn norm(g: &FiniteGroupoid, f: &AlgebraElement) -> Result<f64> {
    let m = regular_representation(g, f)?;
    Ok(m.singular_values().iter().copied().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::MaxModulus;
    use crate::random::{random_element, rng_for};
    use crate::ratchet::{c23, id};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn delta_products_follow_the_table() {
        let g = c23();
        let n = g.len();
        let d = |name| AlgebraElement::delta(n, id(&g, name));
        assert_eq!(convolve(&g, &d("alpha_1"), &d("beta_2")).unwrap(), d("1_+"));
        assert_eq!(convolve(&g, &d("1_+"), &d("1_+")).unwrap(), d("1_+"));
        assert_eq!(convolve(&g, &d("alpha_1"), &d("alpha_1")).unwrap(), AlgebraElement::zero(n));
    }

    #[test]
    fn qubit_hamiltonian_squares_to_quarter_units() {
        let g = c23();
        let n = g.len();
        let mut h = AlgebraElement::zero(n);
        h[id(&g, "alpha_2")] = c(0.5);
        h[id(&g, "beta_1")] = c(0.5);
        let mut expected = AlgebraElement::zero(n);
        expected[id(&g, "1_+")] = c(0.25);
        expected[id(&g, "1_-")] = c(0.25);
        assert!(convolve(&g, &h, &h).unwrap().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn adjoint_of_delta_is_delta_of_inverse() {
        let g = c23();
        let n = g.len();
        let a = AlgebraElement::delta(n, id(&g, "alpha_1"));
        assert_eq!(adjoint(&g, &a).unwrap(), AlgebraElement::delta(n, id(&g, "beta_2")));
        let u = unit_element(&g);
        assert_eq!(adjoint(&g, &u).unwrap(), u);
        let inc = incidence_element(&g);
        assert_eq!(adjoint(&g, &inc).unwrap(), inc);
    }

    #[test]
    fn unit_and_incidence_shapes() {
        let g = c23();
        let u = unit_element(&g);
        assert_eq!(u.coeffs().iter().filter(|z| z.re == 1.0).count(), 2);
        assert_eq!(u[id(&g, "1_+")], c(1.0));
        assert_eq!(u[id(&g, "1_-")], c(1.0));
        assert_eq!(incidence_element(&g).len(), 12);
        let p1 = FiniteGroupoid::pair(1).unwrap();
        assert_eq!(unit_element(&p1), AlgebraElement::from_real(&[1.0]));
        assert_eq!(incidence_element(&FiniteGroupoid::pair(3).unwrap()).len(), 9);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let g = c23();
        let f = AlgebraElement::zero(4);
        assert!(matches!(convolve(&g, &f, &f), Err(Error::DimensionMismatch { expected: 12, got: 4 })));
        assert!(adjoint(&g, &f).is_err());
    }

    #[test]
    fn regular_representation_of_unit_is_identity() {
        let g = c23();
        let m = regular_representation(&g, &unit_element(&g)).unwrap();
        assert_eq!(m, ComplexMatrix::identity(12, 12));
    }

    #[test]
    fn sigma_plus_acts_as_partial_permutation() {
        let g = c23();
        let m = regular_representation(&g, &AlgebraElement::delta(12, id(&g, "sigma_+"))).unwrap();
        let nonzero_cols: Vec<usize> = (0..12).filter(|&j| m.column(j).iter().any(|z| z.norm() > 0.0)).collect();
        assert_eq!(nonzero_cols.len(), 6);
        for &j in &nonzero_cols {
            assert_eq!(g.target(j), crate::ratchet::PLUS);
            assert_eq!(m.column(j).iter().filter(|z| **z == c(1.0)).count(), 1);
        }
        for i in 0..12 {
            assert!(m.row(i).iter().filter(|z| z.norm() > 0.0).count() <= 1);
        }
    }

    #[test]
    fn norms_of_simple_elements() {
        let g = c23();
        assert!((norm(&g, &unit_element(&g)).unwrap() - 1.0).abs() < 1e-12);
        let a = AlgebraElement::delta(12, id(&g, "alpha_1"));
        assert!((norm(&g, &a).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn regular_representation_is_a_star_homomorphism() {
        let g = c23();
        let mut rng = rng_for("algebra-homomorphism");
        for _ in 0..20 {
            let f = random_element(&mut rng, g.len());
            let h = random_element(&mut rng, g.len());
            let lhs = regular_representation(&g, &convolve(&g, &f, &h).unwrap()).unwrap();
            let rhs = regular_representation(&g, &f).unwrap() * regular_representation(&g, &h).unwrap();
            assert!((lhs - rhs).max_modulus() < 1e-12);
            let adj = regular_representation(&g, &adjoint(&g, &f).unwrap()).unwrap();
            assert!((adj - regular_representation(&g, &f).unwrap().adjoint()).max_modulus() < 1e-15);
            assert_eq!(from_regular(&g, &regular_representation(&g, &f).unwrap()).unwrap(), f);
        }
    }

    #[test]
    fn c_star_identity() {
        let g = FiniteGroupoid::pair(3).unwrap();
        let mut rng = rng_for("c-star");
        for _ in 0..10 {
            let f = random_element(&mut rng, g.len());
            let ff = convolve(&g, &adjoint(&g, &f).unwrap(), &f).unwrap();
            let nf = norm(&g, &f).unwrap();
            assert!((norm(&g, &ff).unwrap() - nf * nf).abs() < 1e-10);
        }
    }
}
