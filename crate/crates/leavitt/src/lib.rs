//! Leavitt inverse semigroups and path algebras over directed graphs.
//!
//! The crate models finite directed graphs, the inverse semigroup generated
//! by their vertices, edges, and ghost edges, and the associated path
//! algebra. On connected graphs of out-degree ≤ 1 it decides graded
//! isomorphism, producing either a machine-checkable witness plus a chain of
//! elementary matrix-algebra moves, or a separating invariant.
//!
//! Heavy sweeps (grading audits, brute-force searches, witness
//! verification) run data-parallel by default; the `parallel` feature can be
//! disabled, and every entry point also takes an explicit [`Exec`] override.

pub mod algebra;
pub mod classify;
pub mod error;
pub mod exec;
pub mod expr;
pub mod generate;
pub mod graph;
pub mod laurent;
pub mod lis;
pub mod shift;

pub use algebra::{
    ck_ideal_generators, lpa_dimension_acyclic, quotient_dimension, quotient_dimension_with_limit,
    sink_blocks, structure_constants, AlgebraElement,
};
pub use classify::{
    apply_witness, brute_force_iso, build_witness, canonical_invariant, certificate_from_json,
    certificate_to_json, decide_graded_iso, decompose, depth_profile, verify_certificate,
    verify_witness, CanonicalInvariant, Certificate, DepthProfile, Histogram, Witness,
};
pub use error::Error;
pub use exec::Exec;
pub use expr::parse_element_expr;
pub use graph::{Dir, Graph, Path, ValidationReport};
pub use laurent::{explicit_inverse, is_unit, laurent_add, laurent_mul, LaurentPoly};
pub use lis::{
    assert_graded, enumerate_elements, multiply, normalize, render, star, Grade, LisElement,
};
pub use shift::{
    apply_move, entry_degree, find_move_sequence, lpa_descriptor, realize_matrix_iso, Descriptor,
    MatrixUnit, Move, RealizedIso,
};
