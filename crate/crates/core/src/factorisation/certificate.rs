use num_bigint::BigUint;
use num_traits::One;

use crate::automaton::MaxPlusAutomaton;
use crate::error::Result;
use crate::matrix::Matrix;
use crate::reduction::max_finite;
use crate::semiring::NmaxValue;

use super::tree::FactTree;

/// `c_h = (4|Q_B| + 4)^h · Λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightConstant {
    pub lambda: BigUint,
    pub height: usize,
    pub b_states: usize,
    pub value: BigUint,
}

impl HeightConstant {
    pub fn new(b_states: usize, height: usize, lambda: BigUint) -> Self {
        let base = BigUint::from(4 * b_states as u64 + 4);
        let value = num_traits::pow(base, height) * &lambda;
        HeightConstant {
            lambda,
            height,
            b_states,
            value,
        }
    }
}

/// `Λ` used in certificates: the largest transition weight of `A`, plus its
/// largest initial and final weights so that a bound on run weights also
/// bounds `f_A`, and at least 1.
pub fn certificate_lambda(a: &MaxPlusAutomaton) -> BigUint {
    let l = a.lambda() + max_finite(a.initial()) + max_finite(a.finals());
    l.max(BigUint::one())
}

pub fn c_h(a: &MaxPlusAutomaton, b: &MaxPlusAutomaton, h: usize) -> HeightConstant {
    HeightConstant::new(b.num_states(), h, certificate_lambda(a))
}

/// Weight of the `A`-run on the node's factor, and `M_B` of the factor.
pub fn node_value(
    t: &FactTree,
    id: usize,
    a: &MaxPlusAutomaton,
    b: &MaxPlusAutomaton,
) -> Result<(NmaxValue, Matrix<NmaxValue>)> {
    let (i, j) = t.node(id).span;
    let factor = crate::word::Word(t.word().letters()[i..j].to_vec());
    let run = a
        .run_from(t.run()[i], &factor)?
        .expect("the tree's run covers every factor");
    Ok((NmaxValue::Finite(run.weight), b.word_matrix(&factor)?))
}

/// [`node_value`] for every node, indexed by node id.
pub fn node_values(
    t: &FactTree,
    a: &MaxPlusAutomaton,
    b: &MaxPlusAutomaton,
) -> Result<Vec<(NmaxValue, Matrix<NmaxValue>)>> {
    (0..t.len()).map(|id| node_value(t, id, a, b)).collect()
}
