use std::f64::consts::PI;

use gqm_core::algebra::{adjoint, convolve, from_regular, regular_representation, unit_element, AlgebraElement};
use gqm_core::gns::{gns_build, gram_matrix, NULL_TOL};
use gqm_core::linalg::{hermitian_defect, MaxModulus};
use gqm_core::measure::{decoherence, interference, Event};
use gqm_core::ratchet::{c23, ratchet_state};
use gqm_core::states::{is_positive_definite, state_from_phi, STATE_TOL};
use gqm_core::{Complex64, FiniteGroup, FiniteGroupoid, GroupoidFunction, State};
use proptest::prelude::*;

fn groupoids() -> Vec<FiniteGroupoid> {
    vec![
        c23(),
        FiniteGroupoid::pair(3).unwrap(),
        FiniteGroupoid::from_group(FiniteGroup::symmetric(3)),
        FiniteGroupoid::cyclic(3, 2).unwrap(),
    ]
}

fn groupoid() -> impl Strategy<Value = FiniteGroupoid> {
    (0..groupoids().len()).prop_map(|k| groupoids().swap_remove(k))
}

fn coeffs(len: usize) -> impl Strategy<Value = AlgebraElement> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), len)
        .prop_map(|v| AlgebraElement::from_coeffs(v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()))
}

fn with_elements(k: usize) -> impl Strategy<Value = (FiniteGroupoid, Vec<AlgebraElement>)> {
    groupoid().prop_flat_map(move |g| {
        let n = g.len();
        (Just(g), prop::collection::vec(coeffs(n), k))
    })
}

/// Pair-groupoid state `φ(y ← x) = e^{i(θ_y − θ_x)}`.
fn pair_state() -> impl Strategy<Value = (FiniteGroupoid, State)> {
    (1usize..5).prop_flat_map(|n| prop::collection::vec(-PI..PI, n)).prop_map(|theta| {
        let g = FiniteGroupoid::pair(theta.len()).unwrap();
        let phi =
            g.transitions().iter().map(|t| Complex64::from_polar(1.0, theta[t.target] - theta[t.source])).collect();
        let s = state_from_phi(&g, GroupoidFunction::new(phi)).unwrap();
        (g, s)
    })
}

fn event(len: usize) -> impl Strategy<Value = Event> {
    prop::collection::vec(any::<bool>(), len)
        .prop_map(move |mask| Event::from_ids(len, mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)))
}

proptest! {
    #[test]
    fn composition_is_associative(g in groupoid()) {
        for &(a, b, ab) in g.composable_triples() {
            for &(b2, c, bc) in g.composable_triples() {
                if b2 == b {
                    prop_assert_eq!(g.compose(ab, c), g.compose(a, bc));
                }
            }
        }
    }

    #[test]
    fn inverses_and_units(g in groupoid()) {
        for t in g.transitions() {
            let a = t.id;
            prop_assert_eq!(g.compose(a, g.inverse(a)), Some(g.unit(t.target)));
            prop_assert_eq!(g.compose(g.inverse(a), a), Some(g.unit(t.source)));
            prop_assert_eq!(g.compose(g.unit(t.target), a), Some(a));
            prop_assert_eq!(g.inverse(g.inverse(a)), a);
        }
    }

    #[test]
    fn convolution_is_associative((g, f) in with_elements(3)) {
        let left = convolve(&g, &convolve(&g, &f[0], &f[1]).unwrap(), &f[2]).unwrap();
        let right = convolve(&g, &f[0], &convolve(&g, &f[1], &f[2]).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right) < 1e-12);
    }

    #[test]
    fn star_is_an_antilinear_antimultiplicative_involution((g, f) in with_elements(2), re in -2.0..2.0f64, im in -2.0..2.0f64) {
        let z = Complex64::new(re, im);
        let star = |x: &AlgebraElement| adjoint(&g, x).unwrap();
        prop_assert!(star(&star(&f[0])).max_abs_diff(&f[0]) < 1e-15);
        let fg = convolve(&g, &f[0], &f[1]).unwrap();
        let rev = convolve(&g, &star(&f[1]), &star(&f[0])).unwrap();
        prop_assert!(star(&fg).max_abs_diff(&rev) < 1e-12);
        prop_assert!(star(&(z * &f[0])).max_abs_diff(&(z.conj() * &star(&f[0]))) < 1e-14);
    }

    #[test]
    fn unit_is_neutral((g, f) in with_elements(1)) {
        let one = unit_element(&g);
        prop_assert!(convolve(&g, &one, &f[0]).unwrap().max_abs_diff(&f[0]) < 1e-15);
        prop_assert!(convolve(&g, &f[0], &one).unwrap().max_abs_diff(&f[0]) < 1e-15);
    }

    #[test]
    fn regular_representation_is_a_star_homomorphism((g, f) in with_elements(2)) {
        let l = |x: &AlgebraElement| regular_representation(&g, x).unwrap();
        let fg = convolve(&g, &f[0], &f[1]).unwrap();
        prop_assert!((l(&fg) - l(&f[0]) * l(&f[1])).max_modulus() < 1e-12);
        prop_assert!((l(&adjoint(&g, &f[0]).unwrap()) - l(&f[0]).adjoint()).max_modulus() < 1e-12);
        prop_assert!(from_regular(&g, &l(&f[0])).unwrap().max_abs_diff(&f[0]) < 1e-15);
    }

    #[test]
    fn states_are_positive((g, s) in pair_state(), f in coeffs(16)) {
        let f = AlgebraElement::from_coeffs(f.coeffs()[..g.len()].to_vec());
        let ff = convolve(&g, &adjoint(&g, &f).unwrap(), &f).unwrap();
        let v = gqm_core::states::expectation(&s, &ff).unwrap();
        prop_assert!(v.re > -1e-12 && v.im.abs() < 1e-12);
        prop_assert!(is_positive_definite(&g, s.phi(), STATE_TOL).unwrap().witness.is_none());
        let gram = gram_matrix(&g, &s).unwrap();
        prop_assert!(hermitian_defect(&gram) < 1e-14);
    }

    #[test]
    fn ratchet_states_are_positive(sv in -PI..PI, k in 0usize..3) {
        let g = c23();
        let s = ratchet_state(&g, sv, 2.0 * PI * k as f64 / 3.0).unwrap();
        prop_assert_eq!(gns_build(&g, &s, NULL_TOL).unwrap().dim(), 2);
    }

    #[test]
    fn decoherence_is_hermitian_and_biadditive((g, s) in pair_state(), a in event(16), b in event(16), c in event(16)) {
        let cut = |e: &Event| Event::from_ids(g.len(), e.ids().filter(|&i| i < g.len()));
        let (a, b, c) = (cut(&a), cut(&b), cut(&c));
        let d = |x: &Event, y: &Event| decoherence(&g, &s, x, y).unwrap();
        prop_assert!((d(&a, &b) - d(&b, &a).conj()).norm() < 1e-12);
        prop_assert!(d(&a, &a).re > -1e-12);
        // Bi-additivity on the disjoint pieces b \ c and c.
        let b_minus_c = Event::from_ids(g.len(), b.ids().filter(|&i| !c.contains(i)));
        let sum = d(&a, &b_minus_c) + d(&a, &c);
        prop_assert!((d(&a, &b_minus_c.union(&c)) - sum).norm() < 1e-12);
        let i = interference(&g, &s, &b_minus_c, &c).unwrap();
        prop_assert!((i - 2.0 * d(&b_minus_c, &c).re).abs() < 1e-12);
    }
}
