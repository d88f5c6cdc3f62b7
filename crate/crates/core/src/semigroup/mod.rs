//! The semigroup of paths (over `Ω̄`) and the semigroup of asymptotic
//! behaviours (over `Ω`) of a pair of automata, with derivation tracking.

mod closure;
mod derivation;
mod element;

pub use closure::{
    asymptotic_closure, generators, paths_closure, paths_size_bound, Closure, ClosureConfig,
    WorklistOrder, DEFAULT_SEMIGROUP_CAP,
};
pub use derivation::{Derivation, DerivationNode};
pub use element::{generator_element, AsympElement, Element, PathElement};
