//! Events, the decoherence functional and the quantum measure it induces,
//! plus outcome-space transition amplitudes of factorizable states.

use bitvec::prelude::*;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::ComplexMatrix;
use crate::error::{Error, Result};
use crate::groupoid::{FiniteGroupoid, OutcomeId, TransitionId};
use crate::linalg::MaxModulus;
use crate::states::State;

/// A subset of the transitions of a groupoid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Event {
    members: BitVec,
}

impl Event {
    pub fn empty(len: usize) -> Self {
        Self { members: bitvec![0; len] }
    }

    pub fn full(len: usize) -> Self {
        Self { members: bitvec![1; len] }
    }

    pub fn from_ids(len: usize, ids: impl IntoIterator<Item = TransitionId>) -> Self {
        let mut e = Self::empty(len);
        for i in ids {
            e.members.set(i, true);
        }
        e
    }

    /// `A_{y,x}`: every transition `x → y`.
    pub fn hom(g: &FiniteGroupoid, x: OutcomeId, y: OutcomeId) -> Self {
        Self::from_ids(g.len(), g.hom(x, y))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.not_any()
    }

    pub fn contains(&self, id: TransitionId) -> bool {
        self.members[id]
    }

    pub fn ids(&self) -> impl Iterator<Item = TransitionId> + '_ {
        self.members.iter_ones()
    }

    pub fn count(&self) -> usize {
        self.members.count_ones()
    }

    pub fn union(&self, other: &Self) -> Self {
        Self { members: self.members.clone() | other.members.clone() }
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        (self.members.clone() & other.members.clone()).not_any()
    }
}

fn check_event(s: &State, e: &Event) -> Result<()> {
    if e.len() != s.len() {
        return Err(Error::DimensionMismatch { expected: s.len(), got: e.len() });
    }
    Ok(())
}

/// `D(A, B) = Σ φ(α⁻¹ ∘ β)` over `α ∈ A, β ∈ B` with a common target.
///
/// Uses the raw characteristic function (no weight).
pub fn decoherence(g: &FiniteGroupoid, s: &State, a: &Event, b: &Event) -> Result<Complex64> {
    check_event(s, a)?;
    check_event(s, b)?;
    let phi = s.phi();
    let mut sum = Complex64::default();
    for alpha in a.ids() {
        let inv = g.inverse(alpha);
        for beta in b.ids() {
            if let Some(c) = g.compose(inv, beta) {
                sum += phi[c];
            }
        }
    }
    Ok(sum)
}

/// Value of `μ(A) = D(A, A)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureValue {
    /// Real part of `D(A, A)` as computed.
    pub raw: f64,
    /// `raw` clamped at zero.
    pub clamped: f64,
    /// Imaginary residue of `D(A, A)`; zero up to rounding for Hermitian `φ`.
    pub imag: f64,
}

pub fn quantum_measure(g: &FiniteGroupoid, s: &State, a: &Event) -> Result<MeasureValue> {
    let d = decoherence(g, s, a, a)?;
    Ok(MeasureValue { raw: d.re, clamped: d.re.max(0.0), imag: d.im })
}

/// `μ(A ∪ B) − μ(A) − μ(B)` for disjoint `A, B`; equals `2 Re D(A, B)`.
pub fn interference(g: &FiniteGroupoid, s: &State, a: &Event, b: &Event) -> Result<f64> {
    let ab = quantum_measure(g, s, &a.union(b))?.raw;
    Ok(ab - quantum_measure(g, s, a)?.raw - quantum_measure(g, s, b)?.raw)
}

/// The grade-2 combination `μ(ABC) − μ(AB) − μ(BC) − μ(AC) + μ(A) + μ(B) + μ(C)`,
/// which vanishes for pairwise-disjoint events.
pub fn sorkin_sum(g: &FiniteGroupoid, s: &State, a: &Event, b: &Event, c: &Event) -> Result<f64> {
    let mu = |e: &Event| quantum_measure(g, s, e).map(|m| m.raw);
    Ok(mu(&a.union(b).union(c))? - mu(&a.union(b))? - mu(&b.union(c))? - mu(&a.union(c))? + mu(a)? + mu(b)? + mu(c)?)
}

fn require_factorizable(s: &State) -> Result<()> {
    if !s.is_factorizable() {
        return Err(Error::NotFactorizable);
    }
    Ok(())
}

/// `Φ(y, x) = Σ_{α: x → y} φ(α)`.
pub fn amplitude_matrix(g: &FiniteGroupoid, s: &State) -> Result<ComplexMatrix> {
    require_factorizable(s)?;
    let n = g.num_outcomes();
    let mut m = ComplexMatrix::zeros(n, n);
    for t in g.transitions() {
        m[(t.target, t.source)] += s.phi()[t.id];
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReproducibilityDefect {
    /// `‖Φ·Φ/|Ω| − Φ‖_max`.
    pub normalized: f64,
    /// `‖Φ·Φ − Φ‖_max`.
    pub raw: f64,
}

pub fn reproducibility_defect(g: &FiniteGroupoid, s: &State) -> Result<ReproducibilityDefect> {
    let phi = amplitude_matrix(g, s)?;
    let sq = &phi * &phi;
    let n = g.num_outcomes() as f64;
    Ok(ReproducibilityDefect { normalized: (sq.scale(1.0 / n) - &phi).max_modulus(), raw: (sq - &phi).max_modulus() })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::random::{random_disjoint_triple, random_event, rng_for};
    use crate::ratchet::{c23, id, ratchet_state, MINUS, PLUS};
    use crate::states::{state_from_phi, GroupoidFunction};

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn single_transition_and_empty_events() {
        let g = c23();
        let s = ratchet_state(&g, 0.7, 2.0 * PI / 3.0).unwrap();
        let a = Event::from_ids(12, [id(&g, "alpha_1")]);
        assert!((decoherence(&g, &s, &a, &a).unwrap() - one()).norm() < 1e-14);
        let empty = Event::empty(12);
        assert_eq!(decoherence(&g, &s, &empty, &a).unwrap(), Complex64::default());
        assert_eq!(quantum_measure(&g, &s, &empty).unwrap().raw, 0.0);
    }

    #[test]
    fn ratchet_cross_fiber_is_precluded() {
        let g = c23();
        let s = ratchet_state(&g, 0.7, 2.0 * PI / 3.0).unwrap();
        let a = Event::hom(&g, MINUS, PLUS);
        assert_eq!(a.count(), 3);
        assert!(decoherence(&g, &s, &a, &a).unwrap().norm() < 1e-14);
        assert!(amplitude_matrix(&g, &s).unwrap().max_modulus() < 1e-14);
        let d = reproducibility_defect(&g, &s).unwrap();
        assert!(d.normalized < 1e-14 && d.raw < 1e-14);
    }

    #[test]
    fn measure_of_hom_sets_is_squared_amplitude() {
        let g = c23();
        // A generic phase with δ = 0 keeps the amplitudes nonzero.
        let s = ratchet_state(&g, 0.4, 0.0).unwrap();
        let amp = amplitude_matrix(&g, &s).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                let mu = quantum_measure(&g, &s, &Event::hom(&g, x, y)).unwrap();
                assert!((mu.raw - amp[(y, x)].norm_sqr()).abs() < 1e-12);
                assert!(mu.imag.abs() < 1e-12);
            }
        }
        assert!((amp[(PLUS, MINUS)].norm() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn pair_groupoid_amplitudes() {
        let p2 = FiniteGroupoid::pair(2).unwrap();
        let s = state_from_phi(&p2, GroupoidFunction::constant(4, one())).unwrap();
        let amp = amplitude_matrix(&p2, &s).unwrap();
        assert_eq!(amp, ComplexMatrix::from_element(2, 2, one()));
        let p1 = FiniteGroupoid::pair(1).unwrap();
        let s1 = state_from_phi(&p1, GroupoidFunction::constant(1, one())).unwrap();
        assert_eq!(amplitude_matrix(&p1, &s1).unwrap(), ComplexMatrix::from_element(1, 1, one()));
        let d = reproducibility_defect(&p1, &s1).unwrap();
        assert_eq!((d.raw, d.normalized), (0.0, 0.0));
    }

    #[test]
    fn pair_groupoid_phases_normalized_reproducibility() {
        let n = 4;
        let p = FiniteGroupoid::pair(n).unwrap();
        let u: Vec<Complex64> = (0..n).map(|k| Complex64::from_polar(1.0, 0.9 * k as f64 + 0.2)).collect();
        let phi = GroupoidFunction::new(p.transitions().iter().map(|t| u[t.target] * u[t.source].conj()).collect());
        let s = state_from_phi(&p, phi).unwrap();
        assert!(s.is_factorizable());
        let d = reproducibility_defect(&p, &s).unwrap();
        assert!(d.normalized < 1e-12);
        // The unnormalized identity fails by a factor |Ω|.
        assert!(d.raw > 1.0);
    }

    #[test]
    fn non_factorizable_states_have_no_amplitude_matrix() {
        let p = FiniteGroupoid::pair(2).unwrap();
        let mut v = vec![one(); 4];
        v[p.transition_by_name("(1,0)").unwrap()] = Complex64::new(0.5, 0.0);
        v[p.transition_by_name("(0,1)").unwrap()] = Complex64::new(0.5, 0.0);
        let s = state_from_phi(&p, GroupoidFunction::new(v)).unwrap();
        assert!(!s.is_factorizable());
        assert!(matches!(amplitude_matrix(&p, &s), Err(Error::NotFactorizable)));
    }

    #[test]
    fn hermiticity_and_grade_two_rule() {
        let g = c23();
        let s = ratchet_state(&g, 0.25, 2.0 * PI / 3.0).unwrap();
        let mut rng = rng_for("measure-props");
        for _ in 0..50 {
            let a = random_event(&mut rng, 12);
            let b = random_event(&mut rng, 12);
            let dab = decoherence(&g, &s, &a, &b).unwrap();
            let dba = decoherence(&g, &s, &b, &a).unwrap();
            assert!((dab - dba.conj()).norm() < 1e-12);
            let mu = quantum_measure(&g, &s, &a).unwrap();
            assert!(mu.raw >= -1e-12 && mu.imag.abs() < 1e-12);
            let [x, y, z] = random_disjoint_triple(&mut rng, 12);
            assert!(sorkin_sum(&g, &s, &x, &y, &z).unwrap().abs() < 1e-12);
            let i = interference(&g, &s, &x, &y).unwrap();
            assert!((i - 2.0 * decoherence(&g, &s, &x, &y).unwrap().re).abs() < 1e-12);
        }
    }

    #[test]
    fn event_set_operations() {
        let a = Event::from_ids(5, [0, 2]);
        let b = Event::from_ids(5, [1]);
        assert!(a.is_disjoint(&b));
        assert_eq!(a.union(&b).ids().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert!(!a.is_disjoint(&Event::full(5)));
        assert!(Event::empty(3).is_empty());
    }
}
