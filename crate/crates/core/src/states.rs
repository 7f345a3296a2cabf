//! States on the groupoid algebra, represented by their characteristic
//! function `φ` on transitions together with a scalar weight `w`, so that
//! `ρ(δ_α) = w·φ(α)` and `w = 1 / Σ_x φ(1_x)`.

use std::collections::VecDeque;
use std::fmt;
use std::ops::Index;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{check_len, AlgebraElement};
use crate::error::{Error, GroupoidError, Result};
use crate::groupoid::{FiniteGroupoid, OutcomeId, Quiver, TransitionId};
use crate::linalg::{hermitian_defect, HermitianEigen, MaxModulus};

/// Relative tolerance for conflicting word values in [`factorizable_extend`].
pub const EXTEND_TOL: f64 = 1e-9;

/// Tolerance used when classifying states at construction.
pub const STATE_TOL: f64 = 1e-10;

/// A complex function on transitions, indexed by transition id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupoidFunction(Vec<Complex64>);

impl GroupoidFunction {
    pub fn new(values: Vec<Complex64>) -> Self {
        Self(values)
    }

    pub fn constant(len: usize, value: Complex64) -> Self {
        Self(vec![value; len])
    }

    pub fn values(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Index<usize> for GroupoidFunction {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

fn check_phi(g: &FiniteGroupoid, phi: &GroupoidFunction) -> Result<()> {
    if phi.len() != g.len() {
        return Err(Error::DimensionMismatch { expected: g.len(), got: phi.len() });
    }
    Ok(())
}

/// Outcome of a positive-definiteness check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsdReport {
    pub positive_definite: bool,
    /// Smallest eigenvalue of the Gram block over each target fiber.
    pub min_eigenvalues: Vec<f64>,
    /// First failing fiber and its smallest eigenvalue.
    pub witness: Option<(OutcomeId, f64)>,
}

/// The Gram block `φ(α⁻¹ ∘ β)` over transitions `α, β` ending at `y`.
pub fn fiber_matrix(g: &FiniteGroupoid, phi: &GroupoidFunction, y: OutcomeId) -> DMatrix<Complex64> {
    let fiber: Vec<TransitionId> = g.target_fiber(y).collect();
    let k = fiber.len();
    DMatrix::from_fn(k, k, |i, j| {
        let c = g.compose(g.inverse(fiber[i]), fiber[j]).expect("same target fiber composes");
        phi[c]
    })
}

/// Checks that every target-fiber Gram block is Hermitian and has smallest
/// eigenvalue at least `-tol · max|entry|`.
pub fn is_positive_definite(g: &FiniteGroupoid, phi: &GroupoidFunction, tol: f64) -> Result<PsdReport> {
    check_phi(g, phi)?;
    let mut report = PsdReport { positive_definite: true, min_eigenvalues: vec![], witness: None };
    for y in 0..g.num_outcomes() {
        let m = fiber_matrix(g, phi, y);
        let scale = m.max_modulus();
        let min = if hermitian_defect(&m) > tol * scale.max(1.0) {
            // Not Hermitian: the quadratic form is not even real.
            f64::NEG_INFINITY
        } else {
            HermitianEigen::new(&m).values.first().copied().unwrap_or(0.0)
        };
        report.min_eigenvalues.push(min);
        if min < -tol * scale && report.witness.is_none() {
            report.positive_definite = false;
            report.witness = Some((y, min));
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct UnitarityReport {
    pub unitary: bool,
    /// Transitions where `φ` vanishes.
    pub zeros: Vec<TransitionId>,
    /// Transitions with `|φ| ≠ 1` or `φ(α⁻¹) ≠ conj(φ(α))`.
    pub violations: Vec<TransitionId>,
}

pub fn check_unitarity(g: &FiniteGroupoid, phi: &GroupoidFunction, tol: f64) -> Result<UnitarityReport> {
    check_phi(g, phi)?;
    let mut r = UnitarityReport::default();
    for a in 0..g.len() {
        let v = phi[a];
        if v.norm() <= tol {
            r.zeros.push(a);
        } else if (v.norm() - 1.0).abs() > tol || (phi[g.inverse(a)] - v.conj()).norm() > tol {
            r.violations.push(a);
        }
    }
    r.unitary = r.zeros.is_empty() && r.violations.is_empty();
    Ok(r)
}

/// Whether `φ(α ∘ β) = φ(α) φ(β)` on every composable pair.
pub fn is_factorizable(g: &FiniteGroupoid, phi: &GroupoidFunction, tol: f64) -> Result<bool> {
    check_phi(g, phi)?;
    Ok(g.composable_triples().iter().all(|&(a, b, c)| (phi[c] - phi[a] * phi[b]).norm() <= tol))
}

/// Two words in the generators reaching the same transition with different values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContradictionReport {
    pub transition: String,
    pub first_word: Vec<String>,
    pub first_value: Complex64,
    pub second_word: Vec<String>,
    pub second_value: Complex64,
}

impl fmt::Display for ContradictionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = |w: &[String]| if w.is_empty() { "1".to_string() } else { w.join(" . ") };
        write!(
            f,
            "{}: word [{}] gives {:.6}, word [{}] gives {:.6}",
            self.transition,
            word(&self.first_word),
            self.first_value,
            word(&self.second_word),
            self.second_value
        )
    }
}

/// Extends generator values multiplicatively to the whole groupoid.
///
/// Units get `1`, inverse generators the conjugate value, and each
/// transition the product along a breadth-first word. Every relation
/// `φ(ℓ ∘ α) = φ(ℓ) φ(α)` for letters `ℓ` is checked; a mismatch larger
/// than `tol` (relative) is returned as a [`ContradictionReport`].
pub fn factorizable_extend(
    g: &FiniteGroupoid,
    q: &Quiver,
    gen_values: &[Complex64],
    tol: f64,
) -> Result<GroupoidFunction> {
    if gen_values.len() != q.generators().len() {
        return Err(Error::GeneratorCount { expected: q.generators().len(), got: gen_values.len() });
    }
    // (transition, value, display name)
    let mut letters = Vec::new();
    for (i, (arrow, &v)) in q.generators().iter().zip(gen_values).enumerate() {
        let a = g.find(arrow.target, arrow.label, arrow.source).ok_or(Error::GeneratorNotFound(i))?;
        let name = arrow.name.clone().unwrap_or_else(|| g.transition(a).name.clone());
        letters.push((a, v, name.clone()));
        letters.push((g.inverse(a), v.conj(), format!("{name}^-1")));
    }

    let n = g.len();
    let mut value: Vec<Option<Complex64>> = vec![None; n];
    let mut word: Vec<Vec<String>> = vec![Vec::new(); n];
    let mut queue = VecDeque::new();
    for &u in g.units() {
        value[u] = Some(Complex64::new(1.0, 0.0));
        queue.push_back(u);
    }
    let conflict = |t: usize, w1: &[String], v1, w2: Vec<String>, v2| {
        Error::Contradiction(Box::new(ContradictionReport {
            transition: g.transition(t).name.clone(),
            first_word: w1.to_vec(),
            first_value: v1,
            second_word: w2,
            second_value: v2,
        }))
    };
    while let Some(a) = queue.pop_front() {
        let va = value[a].unwrap();
        for (l, vl, lname) in &letters {
            let Some(c) = g.compose(*l, a) else { continue };
            let candidate = vl * va;
            let mut w = vec![lname.clone()];
            w.extend(word[a].iter().cloned());
            match value[c] {
                None => {
                    value[c] = Some(candidate);
                    word[c] = w;
                    queue.push_back(c);
                }
                Some(existing) => {
                    if (existing - candidate).norm() > tol * existing.norm().max(1.0) {
                        return Err(conflict(c, &word[c], existing, w, candidate));
                    }
                }
            }
        }
    }
    if let Some(missing) = value.iter().position(Option::is_none) {
        return Err(GroupoidError::InvalidArgument(format!(
            "quiver does not generate transition {}",
            g.transition(missing).name
        ))
        .into());
    }
    let phi = GroupoidFunction(value.into_iter().map(Option::unwrap).collect());
    for &(a, b, c) in g.composable_triples() {
        let prod = phi[a] * phi[b];
        if (phi[c] - prod).norm() > tol * phi[c].norm().max(1.0) {
            let mut w = word[a].clone();
            w.extend(word[b].iter().cloned());
            return Err(conflict(c, &word[c], phi[c], w, prod));
        }
    }
    Ok(phi)
}

/// A positive normalized functional `ρ(δ_α) = weight · φ(α)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct State {
    phi: GroupoidFunction,
    weight: f64,
    positive_definite: bool,
    unitary: bool,
    factorizable: bool,
}

/// Builds the state of a positive-definite `φ`, normalizing by `Σ_x φ(1_x)`.
pub fn state_from_phi(g: &FiniteGroupoid, phi: GroupoidFunction) -> Result<State> {
    let psd = is_positive_definite(g, &phi, STATE_TOL)?;
    if let Some((outcome, eigenvalue)) = psd.witness {
        return Err(Error::NotPositiveDefinite { outcome, eigenvalue });
    }
    let total: Complex64 = g.units().iter().map(|&u| phi[u]).sum();
    if total.norm() <= STATE_TOL || total.re <= 0.0 || total.im.abs() > STATE_TOL * total.norm() {
        return Err(Error::BadNormalization(total));
    }
    let unitary = check_unitarity(g, &phi, STATE_TOL)?.unitary;
    let factorizable = is_factorizable(g, &phi, STATE_TOL)?;
    Ok(State { weight: 1.0 / total.re, phi, positive_definite: true, unitary, factorizable })
}

impl State {
    /// A state with an explicitly supplied weight; the weight must normalize `ρ(1) = 1`.
    pub fn with_weight(g: &FiniteGroupoid, phi: GroupoidFunction, weight: f64) -> Result<Self> {
        let s = state_from_phi(g, phi)?;
        if (s.weight - weight).abs() > STATE_TOL * s.weight.max(1.0) {
            let total: Complex64 = g.units().iter().map(|&u| s.phi[u]).sum();
            return Err(Error::BadNormalization(total * weight));
        }
        Ok(s)
    }

    pub fn phi(&self) -> &GroupoidFunction {
        &self.phi
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn is_positive_definite(&self) -> bool {
        self.positive_definite
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    pub fn is_factorizable(&self) -> bool {
        self.factorizable
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    /// `ρ(δ_α)`.
    pub fn value(&self, a: TransitionId) -> Complex64 {
        self.phi[a] * self.weight
    }
}

/// `ρ(f) = Σ_α f(α) · w · φ(α)`.
pub fn expectation(s: &State, f: &AlgebraElement) -> Result<Complex64> {
    if f.len() != s.len() {
        return Err(Error::DimensionMismatch { expected: s.len(), got: f.len() });
    }
    let sum: Complex64 = f.coeffs().iter().zip(s.phi.values()).map(|(a, p)| a * p).sum();
    Ok(sum * s.weight)
}

/// Expectation with an explicit groupoid check.
pub fn expectation_in(g: &FiniteGroupoid, s: &State, f: &AlgebraElement) -> Result<Complex64> {
    check_len(g, f)?;
    expectation(s, f)
}
