//! Decides whether one max-plus automaton is big-O of another
//! (`∃c. f_A ≤ c·f_B + c`) and, when it is not, produces a family of words
//! violating every affine bound.
//!
//! The pipeline: [`reduction::simplify`] makes `A` deterministic and `f_B`
//! total, [`semigroup`] builds the finite semigroups of paths and asymptotic
//! behaviours, [`decision`] looks for a witness of non-domination and
//! [`counterexample`] turns a witness derivation into concrete words.
//! [`factorisation`] gives the tree-based view: faults of Simon trees yield
//! witnesses, and fault-free trees give the constant of the big-O
//! certificate.

pub mod automaton;
pub mod cli;
pub mod counterexample;
pub mod decision;
pub mod error;
pub mod factorisation;
pub mod fixtures;
pub mod format;
pub mod matrix;
pub mod nfa;
pub mod oracle;
pub mod reduction;
pub mod semigroup;
pub mod semiring;
pub mod word;

pub use automaton::{AutomatonBuilder, MaxPlusAutomaton, Run};
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use semiring::{Bar, BarValue, NmaxValue, OmegaValue, Semiring};
pub use word::{Alphabet, Letter, RleWord, Word};
