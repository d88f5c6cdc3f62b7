use std::collections::BTreeSet;

use crate::automaton::MaxPlusAutomaton;
use crate::matrix::Matrix;
use crate::semiring::BarValue;

use super::tree::{FactTree, NodeKind};

type Pairs = BTreeSet<(usize, usize)>;

fn finite(m: &Matrix<BarValue>, i: usize, j: usize) -> bool {
    *m.get(i, j) != BarValue::NegInf
}

fn matrix(t: &FactTree, id: usize) -> &Matrix<BarValue> {
    t.node(id).alpha.matrix().expect("tree labels are never bot")
}

/// Fills in the contributor sets top-down.
pub fn compute_contributors(t: &mut FactTree, b: &MaxPlusAutomaton) {
    let root = t.root();
    let m = matrix(t, root);
    let mut c = Pairs::new();
    for i in b.initial_states() {
        for j in b.final_states() {
            if finite(m, i, j) {
                c.insert((i, j));
            }
        }
    }
    t.nodes[root].contributors = c;
    for id in t.preorder() {
        let children = t.node(id).children.clone();
        let sets = match t.node(id).kind {
            NodeKind::Leaf => continue,
            NodeKind::Product => {
                product_children(&t.node(id).contributors, matrix(t, children[0]), matrix(t, children[1]))
            }
            NodeKind::Idempotent => idempotent_children(&t.node(id).contributors, matrix(t, id), children.len()),
        };
        for (child, set) in children.into_iter().zip(sets) {
            t.nodes[child].contributors = set;
        }
    }
}

fn product_children(c: &Pairs, m: &Matrix<BarValue>, p: &Matrix<BarValue>) -> Vec<Pairs> {
    let n = m.cols();
    let mut left = Pairs::new();
    let mut right = Pairs::new();
    for &(i, j) in c {
        for l in 0..n {
            if finite(m, i, l) && finite(p, l, j) {
                left.insert((i, l));
                right.insert((l, j));
            }
        }
    }
    vec![left, right]
}

fn idempotent_children(c: &Pairs, m: &Matrix<BarValue>, count: usize) -> Vec<Pairs> {
    let n = m.cols();
    let mut first = Pairs::new();
    let mut last = Pairs::new();
    let mut middle = Pairs::new();
    for &(i, j) in c {
        for l in 0..n {
            if finite(m, i, l) && finite(m, l, j) {
                first.insert((i, l));
                last.insert((l, j));
            }
            if !finite(m, i, l) {
                continue;
            }
            for k in 0..n {
                if finite(m, k, j) && finite(m, l, k) && finite(m, k, l) {
                    middle.insert((l, k));
                }
            }
        }
    }
    let mut out = vec![first];
    out.extend(std::iter::repeat_n(middle, count - 2));
    out.push(last);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorisation::build_tree;
    use crate::fixtures::{running_a, running_b};
    use crate::word::Word;

    #[test]
    fn single_leaf_uses_the_root_rule() {
        let (a, b) = (running_a(), running_b());
        let t = build_tree(&Word(vec![0]), &a, &b).unwrap();
        let mb = b.trans(0);
        let expected: Pairs = b
            .initial_states()
            .flat_map(|i| b.final_states().map(move |j| (i, j)))
            .filter(|&(i, j)| mb.get(i, j).is_finite())
            .collect();
        assert_eq!(t.node(t.root()).contributors, expected);
        assert!(!expected.is_empty());
    }

    #[test]
    fn every_node_has_a_contributor() {
        let (a, b) = (running_a(), running_b());
        let w = a.alphabet().parse_word("(a b a^4 b)^5 a a b").unwrap().expand(1000).unwrap();
        let t = build_tree(&w, &a, &b).unwrap();
        for id in t.preorder() {
            assert!(!t.node(id).contributors.is_empty(), "node {id}");
        }
    }
}
