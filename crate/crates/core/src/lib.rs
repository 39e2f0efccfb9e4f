//! Arithmetic of λ-quiddities over finite commutative rings.

pub mod error;
pub mod fixtures;
pub mod irreducible;
pub mod mat2;
pub mod quiddity;
pub mod ring;
pub mod search;

pub use error::{Error, Result};
pub use irreducible::{
    brute_force_reducible, build_coset_system, decompose_via_cosets, find_reduction_window, is_irreducible,
    CosetKind, CosetSystem, ReductionWitness, Sign,
};
pub use mat2::{continuant, m_n, sl2_order, Mat2, Sl2Method};
pub use quiddity::{equivalent, is_quiddity, normal_form, quiddity_sign, sum_oplus, QTuple, QuiddSign};
pub use ring::{build_ring, parse_ring_spec, ring_from_str, validate_submagma, Elem, Ring, RingSpec, SubsetR};
pub use search::{
    bounds_report, certificate_two_tuple, coset_refined_bound, count_quiddities, ell_search, enumerate_irreducible,
    enumerate_quiddities, monotonicity_check, theta_bound, BoundsReport, SearchOptions, SearchReport,
};
