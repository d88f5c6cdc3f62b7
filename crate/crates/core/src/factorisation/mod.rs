//! Factorisation trees over the semigroup of paths, contributors, faults,
//! and the two ways out of them: a witness built from a fault, or the
//! constant `c_h` bounding `A` by `B` when there is none.

mod build;
mod certificate;
mod contributors;
mod fault;
mod green;
mod tree;

pub use build::{build_tree, build_tree_with};
pub use certificate::{c_h, certificate_lambda, node_value, node_values, HeightConstant};
pub use contributors::compute_contributors;
pub use fault::{find_faults, is_fault, subtree_derivation, witness_from_fault};
pub use tree::{leaf_labels, FactTree, Node, NodeKind, TreeBuilder};

#[cfg(test)]
mod tests;
