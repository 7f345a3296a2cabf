//! The two-outcome ratchet: the cyclic groupoid C_{2,3} with its customary
//! transition names, the two Hamiltonians studied on it and the factorizable
//! state fixed by phases on the generators `alpha_1`, `beta_1`.
//!
//! Outcome `+` has id 0, `-` has id 1. Group element `j` of Z_3 is `σ^j`.

use num_complex::Complex64;

use crate::algebra::AlgebraElement;
use crate::dynamics::Hamiltonian;
use crate::error::Result;
use crate::group::FiniteGroup;
use crate::groupoid::{generate_from_quiver, FiniteGroupoid, Quiver, QuiverArrow, TransitionId};
use crate::states::{factorizable_extend, state_from_phi, State};

pub const PLUS: usize = 0;
pub const MINUS: usize = 1;

/// Row order of the customary multiplication-table layout (grouped by source).
pub const TABLE_ROWS: [&str; 12] = [
    "1_+", "sigma_+", "sigma2_+", "beta_1", "beta_2", "beta_3", "1_-", "sigma_-", "sigma2_-", "alpha_1", "alpha_2",
    "alpha_3",
];

/// Column order of the customary layout (grouped by target).
pub const TABLE_COLS: [&str; 12] = [
    "1_+", "sigma_+", "sigma2_+", "alpha_1", "alpha_2", "alpha_3", "1_-", "sigma_-", "sigma2_-", "beta_1", "beta_2",
    "beta_3",
];

/// Name of the transition `(target, σ^label, source)` in C_{2,3}.
pub fn transition_name(target: usize, label: usize, source: usize) -> String {
    let sign = if target == PLUS { '+' } else { '-' };
    match (target == source, label % 3) {
        (true, 0) => format!("1_{sign}"),
        (true, 1) => format!("sigma_{sign}"),
        (true, _) => format!("sigma2_{sign}"),
        (false, l) => {
            let j = if l == 0 { 3 } else { l };
            if target == PLUS {
                format!("alpha_{j}")
            } else {
                format!("beta_{j}")
            }
        }
    }
}

/// Renames a two-outcome, Z_3-labeled groupoid with the ratchet names.
pub fn apply_names(g: FiniteGroupoid) -> Result<FiniteGroupoid> {
    let ok = g.num_outcomes() == 2 && g.group().map(|gr| gr.order()) == Some(3) && g.len() == 12;
    if !ok {
        return Err(crate::error::GroupoidError::InvalidArgument(
            "ratchet naming needs a 12-element groupoid over two outcomes labeled in Z_3".into(),
        )
        .into());
    }
    let names = g.transitions().iter().map(|t| transition_name(t.target, t.label.unwrap(), t.source)).collect();
    Ok(g.with_names(names)?)
}

fn outcome_labels() -> Vec<String> {
    vec!["+".into(), "-".into()]
}

/// C_{2,3} built directly as a cyclic groupoid.
pub fn c23() -> FiniteGroupoid {
    let g = FiniteGroupoid::cyclic_with_labels(&outcome_labels(), 3).expect("valid arguments");
    apply_names(g).expect("C_{2,3} has 12 transitions")
}

/// The generating quiver `{alpha_1, beta_1}`, both carrying `σ`.
pub fn c23_quiver() -> Quiver {
    let gens = vec![
        QuiverArrow { name: Some("alpha_1".into()), source: MINUS, target: PLUS, label: 1 },
        QuiverArrow { name: Some("beta_1".into()), source: PLUS, target: MINUS, label: 1 },
    ];
    Quiver::new(outcome_labels(), FiniteGroup::cyclic(3), gens).expect("valid quiver")
}

/// C_{2,3} obtained as the closure of [`c23_quiver`].
pub fn c23_from_quiver() -> FiniteGroupoid {
    apply_names(generate_from_quiver(&c23_quiver())).expect("closure has 12 transitions")
}

pub fn id(g: &FiniteGroupoid, name: &str) -> TransitionId {
    g.transition_by_name(name).unwrap_or_else(|| panic!("no transition named {name}"))
}

fn sum_of(g: &FiniteGroupoid, names: &[&str], coeff: Complex64) -> AlgebraElement {
    let mut f = AlgebraElement::zero(g.len());
    for n in names {
        f[id(g, n)] += coeff;
    }
    f
}

/// `h = Σ_j (δ_{alpha_j} + δ_{beta_j})`, which has spectrum `{0, ±3}`.
pub fn ratchet_hamiltonian(g: &FiniteGroupoid) -> Hamiltonian {
    let names = ["alpha_1", "alpha_2", "alpha_3", "beta_1", "beta_2", "beta_3"];
    Hamiltonian::new(g, sum_of(g, &names, Complex64::new(1.0, 0.0))).expect("self-adjoint")
}

/// `h̃ = ½(δ_{alpha_2} + δ_{beta_1})`, a qubit-like Hamiltonian.
pub fn qubit_hamiltonian(g: &FiniteGroupoid) -> Hamiltonian {
    Hamiltonian::new(g, sum_of(g, &["alpha_2", "beta_1"], Complex64::new(0.5, 0.0))).expect("self-adjoint")
}

/// Generator values `φ(alpha_1) = e^{is}`, `φ(beta_1) = e^{i(δ - s)}`.
pub fn generator_values(s: f64, delta: f64) -> Vec<Complex64> {
    vec![Complex64::from_polar(1.0, s), Complex64::from_polar(1.0, delta - s)]
}

/// The factorizable ratchet state; fails unless `e^{3iδ} = 1`.
pub fn ratchet_state(g: &FiniteGroupoid, s: f64, delta: f64) -> Result<State> {
    let phi = factorizable_extend(g, &c23_quiver(), &generator_values(s, delta), crate::states::EXTEND_TOL)?;
    state_from_phi(g, phi)
}
