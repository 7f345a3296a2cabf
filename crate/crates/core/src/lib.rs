//! Finite groupoids of selective measurements and the quantum mechanics
//! built on them.
//!
//! A physical system is described by a finite groupoid of transitions between
//! measurement outcomes. Observables live in its convolution *-algebra,
//! states are positive normalized functionals on that algebra, and every
//! state yields a Hilbert-space (GNS) representation, a decoherence
//! functional with its quantum measure, and unitary dynamics generated by a
//! self-adjoint Hamiltonian element.
//!
//! ```
//! use gqm_core::{dynamics::amplitude, ratchet};
//!
//! let g = ratchet::c23();
//! let state = ratchet::ratchet_state(&g, 0.7, 2.0 * std::f64::consts::PI / 3.0).unwrap();
//! let h = ratchet::ratchet_hamiltonian(&g);
//! let a = amplitude(&g, &state, ratchet::PLUS, ratchet::PLUS, &h, 1.5).unwrap();
//! assert!((a.re - 0.5).abs() < 1e-10 && a.im.abs() < 1e-10);
//! ```

pub mod algebra;
pub mod dynamics;
pub mod error;
pub mod gns;
pub mod group;
pub mod groupoid;
pub mod io;
pub mod linalg;
pub mod measure;
pub mod random;
pub mod ratchet;
pub mod states;

pub use algebra::{AlgebraElement, ComplexMatrix, ComplexVector};
pub use dynamics::{Hamiltonian, Propagator, TimeGrid};
pub use error::{Error, GroupError, GroupoidError, Result};
pub use gns::GnsSpace;
pub use group::FiniteGroup;
pub use groupoid::{AxiomReport, FiniteGroupoid, GroupoidTable, Quiver, QuiverArrow};
pub use measure::Event;
pub use num_complex::Complex64;
pub use states::{GroupoidFunction, State};
