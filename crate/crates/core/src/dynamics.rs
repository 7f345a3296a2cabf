//! Hamiltonian dynamics inside the groupoid algebra.
//!
//! `u_t = exp(i t h)` is computed by diagonalizing the Hermitian matrix
//! `λ(h)` of the left-regular representation once, exponentiating its
//! spectrum and pulling the operator back to algebra coefficients.
//! Observables evolve as `Φ_t(a) = u_t* ⋆ a ⋆ u_t`, so `dΦ_t(a)/dt = i[Φ_t(a), h]`.
//! In a GNS space the vector `ψ_t = π(u_t)|0⟩` obeys `-i dψ/dt = Hψ` with `H = π(h)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    adjoint, convolve, convolve_all, from_regular, incidence_element, regular_representation, self_adjoint_defect,
    AlgebraElement, ComplexVector,
};
use crate::error::{Error, Result};
use crate::gns::{represent, GnsSpace};
use crate::groupoid::{FiniteGroupoid, OutcomeId};
use crate::linalg::HermitianEigen;
use crate::states::{expectation, State};

/// Tolerance on `‖h − h*‖_max` for accepting a Hamiltonian.
pub const SELF_ADJOINT_TOL: f64 = 1e-12;

/// Default step for central finite differences.
pub const FD_EPS: f64 = 1e-4;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A self-adjoint algebra element.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    element: AlgebraElement,
}

impl Hamiltonian {
    pub fn new(g: &FiniteGroupoid, element: AlgebraElement) -> Result<Self> {
        let defect = self_adjoint_defect(g, &element)?;
        if defect > SELF_ADJOINT_TOL {
            return Err(Error::NotSelfAdjoint { defect });
        }
        Ok(Self { element })
    }

    pub fn element(&self) -> &AlgebraElement {
        &self.element
    }
}

/// Inclusive evenly spaced times; `steps` is the number of points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(start: f64, stop: f64, steps: usize) -> Result<Self> {
        let grid = Self { start, stop, steps };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::Grid("bounds must be finite".into()));
        }
        if self.stop < self.start {
            return Err(Error::Grid(format!("stop {} precedes start {}", self.stop, self.start)));
        }
        if self.steps == 0 {
            return Err(Error::Grid("steps must be at least 1".into()));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let span = self.stop - self.start;
        let last = (self.steps - 1) as f64;
        (0..self.steps).map(|k| self.start + span * (k as f64) / last).collect()
    }
}

/// `D(a) = i (a⋆h − h⋆a)`.
pub fn derivation(g: &FiniteGroupoid, a: &AlgebraElement, h: &Hamiltonian) -> Result<AlgebraElement> {
    let ah = convolve(g, a, &h.element)?;
    let ha = convolve(g, &h.element, a)?;
    Ok((&ah - &ha).scale(I))
}

/// The one-parameter unitary group of a Hamiltonian, with its spectral data cached.
#[derive(Debug, Clone)]
pub struct Propagator<'g> {
    g: &'g FiniteGroupoid,
    eigen: HermitianEigen,
}

impl<'g> Propagator<'g> {
    pub fn new(g: &'g FiniteGroupoid, h: &Hamiltonian) -> Result<Self> {
        let lambda = regular_representation(g, &h.element)?;
        Ok(Self { g, eigen: HermitianEigen::new(&lambda) })
    }

    /// Spectrum of `λ(h)`, ascending.
    pub fn spectrum(&self) -> &[f64] {
        &self.eigen.values
    }

    /// `u_t = exp(i t h)`.
    pub fn unitary(&self, t: f64) -> AlgebraElement {
        let m = self.eigen.apply_fn(|lam| Complex64::from_polar(1.0, lam * t));
        from_regular(self.g, &m).expect("propagator matrix matches its groupoid")
    }

    /// `u_t* ⋆ a ⋆ u_t`.
    pub fn heisenberg(&self, a: &AlgebraElement, t: f64) -> Result<AlgebraElement> {
        let u = self.unitary(t);
        let us = adjoint(self.g, &u)?;
        convolve_all(self.g, &[&us, a, &u])
    }

    /// `ρ(δ_{1_y} ⋆ u_t ⋆ δ_{1_x})`.
    pub fn amplitude(&self, s: &State, x: OutcomeId, y: OutcomeId, t: f64) -> Result<Complex64> {
        let u = self.unitary(t);
        // δ_{1_y} ⋆ u ⋆ δ_{1_x} keeps the coefficients of u on transitions x → y.
        let mut restricted = AlgebraElement::zero(self.g.len());
        for a in self.g.hom(x, y) {
            restricted[a] = u[a];
        }
        expectation(s, &restricted)
    }
}

pub fn exponential(g: &FiniteGroupoid, h: &Hamiltonian, t: f64) -> Result<AlgebraElement> {
    Ok(Propagator::new(g, h)?.unitary(t))
}

pub fn heisenberg_evolve(g: &FiniteGroupoid, a: &AlgebraElement, h: &Hamiltonian, t: f64) -> Result<AlgebraElement> {
    Propagator::new(g, h)?.heisenberg(a, t)
}

/// Transition amplitude `⟨y|x⟩(t) = ρ(δ_{1_y} ⋆ u_t ⋆ δ_{1_x})`.
pub fn amplitude(
    g: &FiniteGroupoid,
    s: &State,
    x: OutcomeId,
    y: OutcomeId,
    h: &Hamiltonian,
    t: f64,
) -> Result<Complex64> {
    Propagator::new(g, h)?.amplitude(s, x, y, t)
}

/// `ψ_t = π(u_t)|0⟩` for every grid time.
pub fn schrodinger_evolve(
    sp: &GnsSpace,
    g: &FiniteGroupoid,
    h: &Hamiltonian,
    grid: &TimeGrid,
) -> Result<Vec<ComplexVector>> {
    grid.validate()?;
    let prop = Propagator::new(g, h)?;
    grid.points().into_iter().map(|t| gns_vector_at(sp, g, &prop, t)).collect()
}

fn gns_vector_at(sp: &GnsSpace, g: &FiniteGroupoid, prop: &Propagator<'_>, t: f64) -> Result<ComplexVector> {
    Ok(represent(sp, g, &prop.unitary(t))? * sp.cyclic_vector())
}

/// `‖−i (ψ_{t+ε} − ψ_{t−ε}) / 2ε − H ψ_t‖`, which is `O(ε²)`.
pub fn schrodinger_residual(sp: &GnsSpace, g: &FiniteGroupoid, h: &Hamiltonian, t: f64, eps: f64) -> Result<f64> {
    let prop = Propagator::new(g, h)?;
    let plus = gns_vector_at(sp, g, &prop, t + eps)?;
    let minus = gns_vector_at(sp, g, &prop, t - eps)?;
    let psi = gns_vector_at(sp, g, &prop, t)?;
    let big_h = represent(sp, g, h.element())?;
    let derivative = (plus - minus).scale(1.0 / (2.0 * eps));
    Ok((derivative * (-I) - big_h * psi).norm())
}

/// Feynman's vector `π(I)|0⟩`.
pub fn feynman_vector(sp: &GnsSpace, g: &FiniteGroupoid) -> Result<ComplexVector> {
    Ok(represent(sp, g, &incidence_element(g))? * sp.cyclic_vector())
}
