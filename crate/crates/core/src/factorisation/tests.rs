use num_bigint::BigUint;
use rand::{Rng, SeedableRng};

use super::*;
use crate::decision::is_witness;
use crate::fixtures::{running_a, running_b};
use crate::matrix::omega_matrix;
use crate::semigroup::Element;
use crate::semiring::{nmax, NmaxValue, OmegaValue};
use crate::word::Word;

fn parse(s: &str) -> Word {
    running_a().alphabet().parse_word(s).unwrap().expand(1 << 16).unwrap()
}

/// `a^n b`, as an idempotent node over the a's times the b leaf.
fn anb(t: &mut TreeBuilder, start: usize, n: usize) -> usize {
    let a_s: Vec<usize> = (start..start + n).map(|i| t.leaf(i)).collect();
    let idem = t.idempotent(a_s);
    let b = t.leaf(start + n);
    t.product(idem, b)
}

/// The tree of the running example on `(a^n b a^n b)^m`.
fn sample_tree(n: usize, m: usize) -> FactTree {
    let (a, b) = (running_a(), running_b());
    let w = parse(&format!("(a^{n} b a^{n} b)^{m}"));
    let mut t = TreeBuilder::new(&w, &a, &b).unwrap();
    let block = 2 * (n + 1);
    let halves: Vec<usize> = (0..m)
        .map(|k| {
            let left = anb(&mut t, k * block, n);
            let right = anb(&mut t, k * block + n + 1, n);
            t.product(left, right)
        })
        .collect();
    let root = t.idempotent(halves);
    let mut tree = t.finish(root).unwrap();
    compute_contributors(&mut tree, &b);
    tree
}

#[test]
fn sample_tree_has_the_expected_faults() {
    let (a, b) = (running_a(), running_b());
    let t = sample_tree(3, 3);
    assert_eq!(t.height(), 4);
    let faults = find_faults(&t);
    // Both a-blocks of the middle child are faults; the left one comes first.
    let spans: Vec<_> = faults.iter().map(|&f| t.node(f).span).collect();
    assert_eq!(spans, vec![(9, 10), (13, 14)]);
    for &f in &faults {
        let (beta, d) = witness_from_fault(&t, f).unwrap();
        assert!(is_witness(&beta, &a, &b));
        assert_eq!(d.eval(&a, &b).unwrap(), beta);
        assert_eq!(beta.bar(), t.node(t.root()).alpha);
        assert_eq!(d.flatten_depth(), 1);
        assert_eq!(d.stabilisations(), 1);
    }
    // The right one follows the path ν₁ … ν₅ up to the root.
    let (beta, _) = witness_from_fault(&t, faults[1]).unwrap();
    assert_eq!(
        beta,
        Element::new(0, OmegaValue::Inf, 0, omega_matrix("0 0 1 -; - - 1 -; - - 0 -; - - - 1"))
    );
}

#[test]
fn outer_children_hold_no_fault() {
    let t = sample_tree(3, 3);
    let root = t.node(t.root());
    for &outer in [root.children[0], *root.children.last().unwrap()].iter() {
        let (lo, hi) = t.node(outer).span;
        assert!(find_faults(&t).iter().all(|&f| t.node(f).span.0 >= hi || t.node(f).span.1 <= lo));
    }
}

#[test]
fn built_trees_have_height_five() {
    let (a, b) = (running_a(), running_b());
    for (n, k, faults) in [(2, 5, 0), (3, 3, 2), (4, 3, 4)] {
        let t = build_tree(&parse(&format!("(a^{n} b a^{n} b)^{k}")), &a, &b).unwrap();
        assert_eq!(t.height(), 5);
        assert_eq!(find_faults(&t).len(), faults, "n={n} k={k}");
    }
}

#[test]
fn subword_anb_has_no_fault() {
    let (a, b) = (running_a(), running_b());
    let w = parse("a^3 b");
    let mut t = TreeBuilder::new(&w, &a, &b).unwrap();
    let root = anb(&mut t, 0, 3);
    let mut t = t.finish(root).unwrap();
    compute_contributors(&mut t, &b);
    assert!(find_faults(&t).is_empty());
    let middle = t.node(t.node(t.node(root).children[0]).children[1]);
    assert!(middle.contributors.contains(&(1, 1)));
    assert!(matches!(witness_from_fault(&t, 1), Err(crate::Error::NotAFault(1))));
}

#[test]
fn built_trees_on_long_words_find_faults() {
    let (a, b) = (running_a(), running_b());
    let t = build_tree(&parse("(a^3 b a^3 b)^3"), &a, &b).unwrap();
    let faults = find_faults(&t);
    assert!(!faults.is_empty());
    let (beta, d) = witness_from_fault(&t, faults[0]).unwrap();
    assert!(is_witness(&beta, &a, &b));
    assert_eq!(d.eval(&a, &b).unwrap(), beta);
}

#[test]
fn height_constants() {
    let (a, b) = (running_a(), running_b());
    assert_eq!(c_h(&a, &b, 0).value, BigUint::from(1u32));
    assert_eq!(c_h(&a, &b, 1).value, BigUint::from(20u32));
    for h in 1..10 {
        assert!(c_h(&a, &b, h).value > BigUint::from(2u32) * c_h(&a, &b, h - 1).value);
    }
}

#[test]
fn node_values_follow_the_run() {
    let (a, b) = (running_a(), running_b());
    let w = parse("a b a b");
    let t = build_tree(&w, &a, &b).unwrap();
    let values = node_values(&t, &a, &b).unwrap();
    let (aval, bval) = &values[t.root()];
    assert_eq!(*aval, a.evaluate(&w).unwrap());
    assert_eq!(*bval, b.word_matrix(&w).unwrap());
    for (aval, _) in &values[..w.len()] {
        assert_eq!(*aval, nmax(1));
    }
}

/// Without faults, every node obeys `aval ≤ c_h · max_C bval + c_h`.
#[test]
fn fault_free_trees_obey_the_height_bound() {
    let (a, b) = (running_a(), running_b());
    let lambda = a.lambda().clone();
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    let mut checked = 0;
    for _ in 0..200 {
        let len = rng.gen_range(1..40);
        let w = Word((0..len).map(|_| rng.gen_range(0..2)).collect());
        let t = build_tree(&w, &a, &b).unwrap();
        if !find_faults(&t).is_empty() {
            continue;
        }
        checked += 1;
        let values = node_values(&t, &a, &b).unwrap();
        for id in t.preorder() {
            let c = HeightConstant::new(b.num_states(), t.node_height(id), lambda.clone()).value;
            let best = t
                .node(id)
                .contributors
                .iter()
                .map(|&(i, j)| values[id].1.get(i, j).clone())
                .max()
                .unwrap();
            let NmaxValue::Finite(best) = best else {
                panic!("contributors have finite entries")
            };
            let NmaxValue::Finite(aval) = &values[id].0 else {
                unreachable!()
            };
            assert!(*aval <= &c * best + &c);
        }
    }
    assert!(checked > 50);
}

#[test]
fn renderings_mark_faults() {
    let (a, _) = (running_a(), running_b());
    let t = sample_tree(3, 3);
    let faults = find_faults(&t);
    let dot = t.to_dot(&a, &faults);
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("color=red"));
    let text = t.to_text(&a, &faults);
    assert!(text.contains("FAULT"));
    assert!(text.lines().next().unwrap().starts_with("idempotent"));
}
