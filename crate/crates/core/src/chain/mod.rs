//! Bounded chain complexes and the standard constructions on them.
//!
//! Sign conventions, used by every other module:
//!
//! * shift: `C[m]_k = C_{k-m}`, differential times `(-1)^m`;
//! * cone: `cone(f)_n = A_{n-1} ⊕ B_n`, differential `[[-d_A, 0], [-f, d_B]]`;
//! * tensor: `d(a ⊗ b) = da ⊗ b + (-1)^{|a|} a ⊗ db`;
//! * mapping complex: `d(f) = d_B ∘ f − (-1)^{|f|} f ∘ d_A`;
//! * homotopy `h` from `f` to `g`: `g − f = d·h + h·d`.

mod complex;
mod maps;
mod ops;

pub use complex::{sign, ChainComplex};
pub use maps::{check_homotopy, homotopy_defects, ChainHomotopy, ChainMap};
pub use ops::{
    cone, cone_functor, direct_sum, hom_complex, hom_vector_to_homotopy, hom_vector_to_map,
    is_quasi_iso, map_to_hom_vector, pair_into_sum, shift, shift_map, tensor, tensor_associator,
    tensor_maps, tensor_position, Cone,
};
