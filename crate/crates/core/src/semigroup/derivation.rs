use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::automaton::MaxPlusAutomaton;
use crate::error::{Error, Result};
use crate::word::Alphabet;

use super::element::{generator_element, AsympElement};

#[derive(Debug, PartialEq, Eq, Hash)]
pub enum DerivationNode {
    Generator { letter: usize, from: usize, to: usize },
    Product(Derivation, Derivation),
    Stabilise(Derivation),
    Flatten(Derivation),
}

/// How an element of a closure was obtained. Shared subterms make this a DAG.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation(Arc<DerivationNode>);

impl Derivation {
    pub fn generator(letter: usize, from: usize, to: usize) -> Self {
        Derivation(Arc::new(DerivationNode::Generator { letter, from, to }))
    }

    pub fn product(left: &Derivation, right: &Derivation) -> Self {
        Derivation(Arc::new(DerivationNode::Product(left.clone(), right.clone())))
    }

    pub fn stabilise(child: &Derivation) -> Self {
        Derivation(Arc::new(DerivationNode::Stabilise(child.clone())))
    }

    pub fn flatten(child: &Derivation) -> Self {
        Derivation(Arc::new(DerivationNode::Flatten(child.clone())))
    }

    pub fn node(&self) -> &DerivationNode {
        &self.0
    }

    pub fn ptr(&self) -> *const DerivationNode {
        Arc::as_ptr(&self.0)
    }

    /// Replays the operations over `A` and `B`.
    pub fn eval(&self, a: &MaxPlusAutomaton, b: &MaxPlusAutomaton) -> Result<AsympElement> {
        let mut memo = HashMap::new();
        self.eval_memo(a, b, &mut memo)
    }

    fn eval_memo(
        &self,
        a: &MaxPlusAutomaton,
        b: &MaxPlusAutomaton,
        memo: &mut HashMap<*const DerivationNode, AsympElement>,
    ) -> Result<AsympElement> {
        if let Some(e) = memo.get(&self.ptr()) {
            return Ok(e.clone());
        }
        let e = match self.node() {
            DerivationNode::Generator { letter, from, to } => {
                if *letter >= a.alphabet().len() || *from >= a.num_states() || *to >= a.num_states() {
                    return Err(Error::DerivationMismatch(format!(
                        "generator ({letter}, {from}, {to}) is out of range"
                    )));
                }
                generator_element(a, b, *letter, *from, *to)
                    .ok_or_else(|| {
                        Error::DerivationMismatch(format!(
                            "no transition {} --{}--> {}",
                            a.state_name(*from),
                            a.alphabet().name(*letter),
                            a.state_name(*to)
                        ))
                    })?
                    .lift()
            }
            DerivationNode::Product(l, r) => l.eval_memo(a, b, memo)?.mul(&r.eval_memo(a, b, memo)?),
            DerivationNode::Stabilise(c) => c.eval_memo(a, b, memo)?.stabilise()?,
            DerivationNode::Flatten(c) => c.eval_memo(a, b, memo)?.flatten()?,
        };
        memo.insert(self.ptr(), e.clone());
        Ok(e)
    }

    /// Maximal number of nested flattenings.
    pub fn flatten_depth(&self) -> usize {
        match self.node() {
            DerivationNode::Generator { .. } => 0,
            DerivationNode::Product(l, r) => l.flatten_depth().max(r.flatten_depth()),
            DerivationNode::Stabilise(c) => c.flatten_depth(),
            DerivationNode::Flatten(c) => 1 + c.flatten_depth(),
        }
    }

    /// Number of stabilisations, counted with multiplicity along the DAG.
    pub fn stabilisations(&self) -> usize {
        match self.node() {
            DerivationNode::Generator { .. } => 0,
            DerivationNode::Product(l, r) => l.stabilisations() + r.stabilisations(),
            DerivationNode::Stabilise(c) => 1 + c.stabilisations(),
            DerivationNode::Flatten(c) => c.stabilisations(),
        }
    }

    /// Renders as an expression such as `(a b (a)^# b)^b`, using letter names.
    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> DerivationDisplay<'a> {
        DerivationDisplay {
            derivation: self,
            alphabet,
        }
    }
}

pub struct DerivationDisplay<'a> {
    derivation: &'a Derivation,
    alphabet: &'a Alphabet,
}

impl fmt::Display for DerivationDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_derivation(self.derivation, self.alphabet, f)
    }
}

fn write_derivation(d: &Derivation, al: &Alphabet, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match d.node() {
        DerivationNode::Generator { letter, .. } => f.write_str(al.name(*letter)),
        DerivationNode::Product(l, r) => {
            write_derivation(l, al, f)?;
            f.write_str(" ")?;
            write_derivation(r, al, f)
        }
        DerivationNode::Stabilise(c) => {
            f.write_str("(")?;
            write_derivation(c, al, f)?;
            f.write_str(")^#")
        }
        DerivationNode::Flatten(c) => {
            f.write_str("(")?;
            write_derivation(c, al, f)?;
            f.write_str(")^flat")
        }
    }
}
