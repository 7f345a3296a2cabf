//! GNS representation of a state and the fundamental representation on `C^Ω`.
//!
//! The GNS space is the quotient of the algebra by the null ideal
//! `{f : ρ(f*⋆f) = 0}`. It is realized through the Hermitian
//! eigendecomposition of the Gram matrix `G[α][β] = ρ(δ_{α⁻¹∘β})`: with
//! `G = V Λ V†`, the class of `f` has coordinates `Λ_k^{1/2} V_k† f` over the
//! eigenvalues above the null threshold. The inner product is conjugate-linear
//! in the first slot, so `⟨Ψ_f, Ψ_h⟩ = ρ(f*⋆h)` and `⟨0|0⟩ = ρ(1) = 1`.

use num_complex::Complex64;

use crate::algebra::{check_len, regular_representation, unit_element, AlgebraElement, ComplexMatrix, ComplexVector};
use crate::error::{Error, Result};
use crate::groupoid::FiniteGroupoid;
use crate::linalg::HermitianEigen;
use crate::states::State;

/// Default relative eigenvalue threshold separating null directions.
pub const NULL_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct GnsSpace {
    dim: usize,
    project: ComplexMatrix,
    lift: ComplexMatrix,
    cyclic_vector: ComplexVector,
    gram: ComplexMatrix,
    gram_eigenvalues: Vec<f64>,
}

pub fn gram_matrix(g: &FiniteGroupoid, s: &State) -> Result<ComplexMatrix> {
    if s.len() != g.len() {
        return Err(Error::DimensionMismatch { expected: g.len(), got: s.len() });
    }
    let n = g.len();
    Ok(ComplexMatrix::from_fn(n, n, |a, b| match g.compose(g.inverse(a), b) {
        Some(c) => s.value(c),
        None => Complex64::default(),
    }))
}

pub fn gns_build(g: &FiniteGroupoid, s: &State, null_tol: f64) -> Result<GnsSpace> {
    let gram = gram_matrix(g, s)?;
    let eig = HermitianEigen::new(&gram);
    let top = eig.values.last().copied().unwrap_or(0.0);
    if top <= f64::EPSILON {
        return Err(Error::DegenerateState);
    }
    let kept: Vec<usize> = (0..eig.values.len()).filter(|&k| eig.values[k] > null_tol * top).collect();
    let dim = kept.len();
    let n = g.len();
    let mut project = ComplexMatrix::zeros(dim, n);
    let mut lift = ComplexMatrix::zeros(n, dim);
    for (row, &k) in kept.iter().enumerate() {
        let root = eig.values[k].sqrt();
        let v = eig.vectors.column(k);
        for a in 0..n {
            project[(row, a)] = v[a].conj() * root;
            lift[(a, row)] = v[a] / root;
        }
    }
    let cyclic_vector = &project * unit_element(g).to_vector();
    Ok(GnsSpace { dim, project, lift, cyclic_vector, gram, gram_eigenvalues: eig.values })
}

impl GnsSpace {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coordinates of the class `Ψ_f`.
    pub fn vector(&self, f: &AlgebraElement) -> ComplexVector {
        &self.project * f.to_vector()
    }

    /// The class of the unit element, `|0⟩`.
    pub fn cyclic_vector(&self) -> &ComplexVector {
        &self.cyclic_vector
    }

    pub fn gram(&self) -> &ComplexMatrix {
        &self.gram
    }

    /// All Gram eigenvalues in ascending order, including the null ones.
    pub fn gram_eigenvalues(&self) -> &[f64] {
        &self.gram_eigenvalues
    }

    pub fn projection(&self) -> &ComplexMatrix {
        &self.project
    }

    /// Right inverse of the projection on the orthogonal complement of the null space.
    pub fn lift(&self) -> &ComplexMatrix {
        &self.lift
    }

    /// Membership in the null ideal: `ρ(f*⋆f) = ‖Ψ_f‖² < tol`.
    pub fn is_null(&self, f: &AlgebraElement, tol: f64) -> bool {
        self.vector(f).norm_squared() < tol
    }
}

/// Matrix of `π_ρ(f)`, acting by `Ψ_h ↦ Ψ_{f⋆h}`.
pub fn represent(sp: &GnsSpace, g: &FiniteGroupoid, f: &AlgebraElement) -> Result<ComplexMatrix> {
    let lambda = regular_representation(g, f)?;
    if sp.project.ncols() != g.len() {
        return Err(Error::DimensionMismatch { expected: sp.project.ncols(), got: g.len() });
    }
    Ok(&sp.project * lambda * &sp.lift)
}

/// `⟨y|π₀(f)|x⟩ = Σ_{α: x → y} f(α)`.
pub fn fundamental_representation(g: &FiniteGroupoid, f: &AlgebraElement) -> Result<ComplexMatrix> {
    check_len(g, f)?;
    let n = g.num_outcomes();
    let mut m = ComplexMatrix::zeros(n, n);
    for t in g.transitions() {
        m[(t.target, t.source)] += f[t.id];
    }
    Ok(m)
}

/// Outcome-space vector `Ψ_f(x) = Σ_{t(α) = x} f(α) φ(α)` of a factorizable state.
pub fn psi_vector(g: &FiniteGroupoid, s: &State, f: &AlgebraElement) -> Result<ComplexVector> {
    if !s.is_factorizable() {
        return Err(Error::NotFactorizable);
    }
    check_len(g, f)?;
    let mut v = ComplexVector::zeros(g.num_outcomes());
    for t in g.transitions() {
        v[t.target] += f[t.id] * s.phi()[t.id];
    }
    Ok(v)
}

/// `w · Σ_x conj(u(x)) v(x)`, the inner product matching `ρ(f*⋆h)`.
pub fn psi_inner(s: &State, u: &ComplexVector, v: &ComplexVector) -> Complex64 {
    u.dotc(v) * s.weight()
}

/// The map `T` with `T·Ψ_f = psi_vector(f)`, from GNS coordinates to `C^Ω`.
///
/// Only defined for factorizable states; `√w·T` is then an isometry.
pub fn outcome_intertwiner(g: &FiniteGroupoid, s: &State, sp: &GnsSpace) -> Result<ComplexMatrix> {
    if !s.is_factorizable() {
        return Err(Error::NotFactorizable);
    }
    let mut psi = ComplexMatrix::zeros(g.num_outcomes(), g.len());
    for t in g.transitions() {
        psi[(t.target, t.id)] = s.phi()[t.id];
    }
    Ok(psi * &sp.lift)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::algebra::{adjoint, convolve, incidence_element};
    use crate::linalg::MaxModulus;
    use crate::random::{random_element, rng_for};
    use crate::ratchet::{c23, id, ratchet_state, MINUS, PLUS};
    use crate::states::{expectation, state_from_phi, GroupoidFunction};

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn flat_state(n: usize) -> (FiniteGroupoid, State) {
        let g = FiniteGroupoid::pair(n).unwrap();
        let s = state_from_phi(&g, GroupoidFunction::constant(n * n, one())).unwrap();
        (g, s)
    }

    #[test]
    fn dimensions() {
        let g = c23();
        let s = ratchet_state(&g, 0.7, 2.0 * PI / 3.0).unwrap();
        let sp = gns_build(&g, &s, NULL_TOL).unwrap();
        assert_eq!(sp.dim(), 2);
        assert!((sp.cyclic_vector().norm_squared() - 1.0).abs() < 1e-12);

        let (g1, s1) = flat_state(1);
        assert_eq!(gns_build(&g1, &s1, NULL_TOL).unwrap().dim(), 1);
        // Block-diagonal Gram: one all-ones block per target fiber.
        let (g3, s3) = flat_state(3);
        let sp3 = gns_build(&g3, &s3, NULL_TOL).unwrap();
        assert_eq!(sp3.dim(), 3);
        let nonzero: Vec<f64> = sp3.gram_eigenvalues().iter().copied().filter(|v| v.abs() > 1e-12).collect();
        assert_eq!(nonzero.len(), 3);
        assert!(nonzero.iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn gram_is_hermitian() {
        let g = c23();
        let s = ratchet_state(&g, 0.7, 2.0 * PI / 3.0).unwrap();
        let sp = gns_build(&g, &s, NULL_TOL).unwrap();
        assert!((sp.gram() - sp.gram().adjoint()).max_modulus() < 1e-14);
    }

    #[test]
    fn represented_unit_and_units() {
        let g = c23();
        let s = ratchet_state(&g, 0.7, 2.0 * PI / 3.0).unwrap();
        let sp = gns_build(&g, &s, NULL_TOL).unwrap();
        let id_m = represent(&sp, &g, &unit_element(&g)).unwrap();
        assert!((id_m - ComplexMatrix::identity(2, 2)).max_modulus() < 1e-12);
        let p = represent(&sp, &g, &AlgebraElement::delta(12, id(&g, "1_+"))).unwrap();
        let v0 = sp.cyclic_vector();
        assert!((v0.dotc(&(p * v0)) - Complex64::new(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn representation_reproduces_state_and_products() {
        let g = c23();
        let s = ratchet_state(&g, 0.7, 2.0 * PI / 3.0).unwrap();
        let sp = gns_build(&g, &s, NULL_TOL).unwrap();
        let mut rng = rng_for("gns-homomorphism");
        for _ in 0..30 {
            let f = random_element(&mut rng, 12);
            let h = random_element(&mut rng, 12);
            let pf = represent(&sp, &g, &f).unwrap();
            let ph = represent(&sp, &g, &h).unwrap();
            let pfh = represent(&sp, &g, &convolve(&g, &f, &h).unwrap()).unwrap();
            assert!((pfh - &pf * &ph).max_modulus() < 1e-10);
            let pfs = represent(&sp, &g, &adjoint(&g, &f).unwrap()).unwrap();
            assert!((pfs - pf.adjoint()).max_modulus() < 1e-10);
            let v0 = sp.cyclic_vector();
            assert!((v0.dotc(&(&pf * v0)) - expectation(&s, &f).unwrap()).norm() < 1e-10);
            // π(f)Ψ_h = Ψ_{f⋆h}
            let lhs = &pf * sp.vector(&h);
            assert!((lhs - sp.vector(&convolve(&g, &f, &h).unwrap())).max_modulus() < 1e-10);
        }
    }

    #[test]
    fn null_ideal_membership() {
        let g = c23();
        let s = ratchet_state(&g, 0.7, 2.0 * PI / 3.0).unwrap();
        let sp = gns_build(&g, &s, NULL_TOL).unwrap();
        // The incidence element is annihilated by this state.
        let inc = incidence_element(&g);
        let norm = expectation(&s, &convolve(&g, &adjoint(&g, &inc).unwrap(), &inc).unwrap()).unwrap();
        assert!(norm.norm() < 1e-12);
        assert!(sp.is_null(&inc, 1e-10));
        assert!(!sp.is_null(&unit_element(&g), 1e-10));
    }

    #[test]
    fn fundamental_representation_examples() {
        let g = c23();
        let inc = fundamental_representation(&g, &incidence_element(&g)).unwrap();
        assert_eq!(inc, ComplexMatrix::from_element(2, 2, Complex64::new(3.0, 0.0)));
        let a = fundamental_representation(&g, &AlgebraElement::delta(12, id(&g, "alpha_1"))).unwrap();
        let mut expected = ComplexMatrix::zeros(2, 2);
        expected[(PLUS, MINUS)] = one();
        assert_eq!(a, expected);
        assert_eq!(fundamental_representation(&g, &unit_element(&g)).unwrap(), ComplexMatrix::identity(2, 2));
    }

    #[test]
    fn psi_vectors() {
        let g = c23();
        let s = ratchet_state(&g, 0.7, 2.0 * PI / 3.0).unwrap();
        let u = psi_vector(&g, &s, &unit_element(&g)).unwrap();
        assert!((u[0] - one()).norm() < 1e-12 && (u[1] - one()).norm() < 1e-12);
        let a = psi_vector(&g, &s, &AlgebraElement::delta(12, id(&g, "alpha_1"))).unwrap();
        assert!((a[PLUS] - Complex64::from_polar(1.0, 0.7)).norm() < 1e-12);
        assert_eq!(a[MINUS], Complex64::default());

        let sp = gns_build(&g, &s, NULL_TOL).unwrap();
        let t = outcome_intertwiner(&g, &s, &sp).unwrap();
        let mut rng = rng_for("gns-psi");
        for _ in 0..100 {
            let f = random_element(&mut rng, 12);
            let psi = psi_vector(&g, &s, &f).unwrap();
            let ff = expectation(&s, &convolve(&g, &adjoint(&g, &f).unwrap(), &f).unwrap()).unwrap();
            assert!((ff - psi_inner(&s, &psi, &psi)).norm() < 1e-10);
            assert!((&t * sp.vector(&f) - psi).max_modulus() < 1e-10);
        }
        // √w·T is unitary when dim = |Ω|.
        let iso = t.scale(s.weight().sqrt());
        assert!((iso.adjoint() * &iso - ComplexMatrix::identity(2, 2)).max_modulus() < 1e-12);
    }

    #[test]
    fn gns_and_fundamental_spectra_agree() {
        let g = c23();
        let s = ratchet_state(&g, 0.7, 2.0 * PI / 3.0).unwrap();
        let sp = gns_build(&g, &s, NULL_TOL).unwrap();
        let t = outcome_intertwiner(&g, &s, &sp).unwrap().scale(s.weight().sqrt());
        let mut rng = rng_for("gns-vs-fundamental");
        for _ in 0..10 {
            let f = random_element(&mut rng, 12);
            // Twisting f by φ carries π_ρ onto π₀.
            let twisted = AlgebraElement::from_coeffs((0..12).map(|a| f[a] * s.phi()[a]).collect());
            let p0 = fundamental_representation(&g, &twisted).unwrap();
            let prho = represent(&sp, &g, &f).unwrap();
            assert!((&t * prho * t.adjoint() - p0).max_modulus() < 1e-10);
        }
    }

    #[test]
    fn non_factorizable_state_has_no_psi() {
        let p = FiniteGroupoid::pair(2).unwrap();
        let mut v = vec![one(); 4];
        v[1] = Complex64::new(0.5, 0.0);
        v[2] = Complex64::new(0.5, 0.0);
        let s = state_from_phi(&p, GroupoidFunction::new(v)).unwrap();
        assert!(matches!(psi_vector(&p, &s, &unit_element(&p)), Err(Error::NotFactorizable)));
    }
}
