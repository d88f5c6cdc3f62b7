use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::semigroup::{AsympElement, Derivation};
use crate::semiring::BarValue;

use super::tree::{FactTree, NodeKind};

pub fn is_fault(t: &FactTree, id: usize) -> bool {
    let Some(parent) = t.node(id).parent else {
        return false;
    };
    if t.node(parent).kind != NodeKind::Idempotent {
        return false;
    }
    let (pos, count) = t.child_position(id).expect("child of its parent");
    if pos == 0 || pos + 1 == count {
        return false;
    }
    let node = t.node(id);
    if node.alpha.weight() != Some(&BarValue::One) {
        return false;
    }
    let m = node.alpha.matrix().expect("tree labels are never bot");
    node.contributors.iter().all(|&(i, j)| *m.get(i, j) == BarValue::Zero)
}

/// Faults, highest first and then left-most.
pub fn find_faults(t: &FactTree) -> Vec<usize> {
    let heights = heights(t);
    let mut faults: Vec<usize> = t.preorder().into_iter().filter(|&v| is_fault(t, v)).collect();
    faults.sort_by_key(|&v| (std::cmp::Reverse(heights[&v]), t.node(v).span.0));
    faults
}

fn heights(t: &FactTree) -> HashMap<usize, usize> {
    let mut h = HashMap::new();
    for v in t.preorder().into_iter().rev() {
        let x = t
            .node(v)
            .children
            .iter()
            .map(|c| h[c] + 1)
            .max()
            .unwrap_or(0);
        h.insert(v, x);
    }
    h
}

/// A derivation of `α(id)` from the generators along the run.
pub fn subtree_derivation(t: &FactTree, id: usize) -> Derivation {
    let node = t.node(id);
    match node.kind {
        NodeKind::Leaf => {
            let i = node.span.0;
            Derivation::generator(t.word().letters()[i], t.run()[i], t.run()[i + 1])
        }
        NodeKind::Product => Derivation::product(
            &subtree_derivation(t, node.children[0]),
            &subtree_derivation(t, node.children[1]),
        ),
        // The children share the idempotent label, so any one of them derives it.
        NodeKind::Idempotent => subtree_derivation(t, node.children[0]),
    }
}

/// The β-labelling from `fault` up to the root: stabilise at the parent,
/// multiply by sibling labels at product nodes and by the node's own label
/// at the outer children of idempotent nodes, flatten at middle children.
/// Returns `β(root)` with its derivation; when `fault` has maximal height
/// this is a tractable witness.
pub fn witness_from_fault(t: &FactTree, fault: usize) -> Result<(AsympElement, Derivation)> {
    if !is_fault(t, fault) {
        return Err(Error::NotAFault(fault));
    }
    let mut beta = t.node(fault).alpha.lift().stabilise()?;
    let mut d = Derivation::stabilise(&subtree_derivation(t, fault));
    let mut current = t.node(fault).parent.expect("faults have a parent");
    while let Some(parent) = t.node(current).parent {
        let (pos, count) = t.child_position(current).unwrap();
        let p = t.node(parent);
        match p.kind {
            NodeKind::Product if pos == 0 => {
                let sib = p.children[1];
                beta = beta.mul(&t.node(sib).alpha.lift());
                d = Derivation::product(&d, &subtree_derivation(t, sib));
            }
            NodeKind::Product => {
                let sib = p.children[0];
                beta = t.node(sib).alpha.lift().mul(&beta);
                d = Derivation::product(&subtree_derivation(t, sib), &d);
            }
            NodeKind::Idempotent if pos == 0 => {
                beta = beta.mul(&t.node(current).alpha.lift());
                d = Derivation::product(&d, &subtree_derivation(t, current));
            }
            NodeKind::Idempotent if pos + 1 == count => {
                beta = t.node(current).alpha.lift().mul(&beta);
                d = Derivation::product(&subtree_derivation(t, current), &d);
            }
            NodeKind::Idempotent => {
                beta = beta.flatten()?;
                d = Derivation::flatten(&d);
            }
            NodeKind::Leaf => unreachable!("leaves have no children"),
        }
        current = parent;
    }
    Ok((beta, d))
}
