//! Brute-force checks that share no code with the decision procedure
//! beyond word evaluation. Bounded: they can confirm a refutation but never
//! prove domination.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigUint;

use crate::automaton::MaxPlusAutomaton;
use crate::semigroup::{generator_element, PathElement};
use crate::semiring::{NmaxValue, Semiring};
use crate::word::{Alphabet, Letter, Word};

/// All words of length `0..=max_len` over `alphabet`, in length-lexicographic order.
pub fn enumerate_words(alphabet: &Alphabet, max_len: usize) -> impl Iterator<Item = Word> {
    let k = alphabet.len();
    let mut current: Option<Vec<Letter>> = Some(Vec::new());
    std::iter::from_fn(move || {
        let out = current.take()?;
        current = next_word(&out, k, max_len);
        Some(Word(out))
    })
}

fn next_word(w: &[Letter], k: usize, max_len: usize) -> Option<Vec<Letter>> {
    if k == 0 {
        return None;
    }
    let mut next = w.to_vec();
    // Increment as a base-k numeral; overflow moves to the next length.
    for i in (0..next.len()).rev() {
        if next[i] + 1 < k {
            next[i] += 1;
            return Some(next);
        }
        next[i] = 0;
    }
    (w.len() < max_len).then(|| vec![0; w.len() + 1])
}

fn step_row(row: &[NmaxValue], m: &crate::matrix::Matrix<NmaxValue>) -> Vec<NmaxValue> {
    (0..m.cols())
        .map(|j| {
            row.iter()
                .enumerate()
                .fold(NmaxValue::NegInf, |acc, (i, x)| acc.oplus(&x.otimes(m.get(i, j))))
        })
        .collect()
}

fn close(row: &[NmaxValue], finals: &[NmaxValue]) -> NmaxValue {
    row.iter()
        .zip(finals)
        .fold(NmaxValue::NegInf, |acc, (x, f)| acc.oplus(&x.otimes(f)))
}

/// The shortest, then lexicographically least, word of length at most
/// `max_len` with `f_A(w) > c·f_B(w) + c`. Both automata must share an alphabet.
pub fn refute_bigo(a: &MaxPlusAutomaton, b: &MaxPlusAutomaton, c: &BigUint, max_len: usize) -> Option<Word> {
    assert!(
        a.alphabet().same_letters(b.alphabet()),
        "refute_bigo needs a common alphabet"
    );
    let k = a.alphabet().len();
    let mut layer = vec![(Vec::new(), a.initial().to_vec(), b.initial().to_vec())];
    for len in 0..=max_len {
        for (w, ra, rb) in &layer {
            let fa = close(ra, a.finals());
            let fb = close(rb, b.finals());
            if beats(&fa, &fb, c) {
                return Some(Word(w.clone()));
            }
        }
        if len == max_len {
            break;
        }
        let mut next = Vec::with_capacity(layer.len() * k);
        for (w, ra, rb) in &layer {
            for l in 0..k {
                let mut w2 = w.clone();
                w2.push(l);
                next.push((w2, step_row(ra, a.trans(l)), step_row(rb, b.trans(l))));
            }
        }
        layer = next;
    }
    None
}

fn beats(fa: &NmaxValue, fb: &NmaxValue, c: &BigUint) -> bool {
    match (fa, fb) {
        (NmaxValue::NegInf, _) => false,
        (NmaxValue::Finite(_), NmaxValue::NegInf) => true,
        (NmaxValue::Finite(x), NmaxValue::Finite(y)) => *x > c * y + c,
    }
}

/// A shortest word whose product of leaf labels is `e`, by breadth-first
/// search over the semigroup of paths keeping one word per element.
pub fn check_path_element(
    e: &PathElement,
    a: &MaxPlusAutomaton,
    b: &MaxPlusAutomaton,
    max_len: usize,
) -> Option<Word> {
    if e.is_bot() || max_len == 0 {
        return None;
    }
    let mut gens = Vec::new();
    for l in a.alphabet().letters() {
        for p in 0..a.num_states() {
            for q in 0..a.num_states() {
                if let Some(g) = generator_element(a, b, l, p, q) {
                    gens.push((l, g));
                }
            }
        }
    }
    let mut seen: HashMap<PathElement, Word> = HashMap::new();
    let mut queue = VecDeque::new();
    for (l, g) in &gens {
        if !seen.contains_key(g) {
            seen.insert(g.clone(), Word(vec![*l]));
            queue.push_back(g.clone());
        }
    }
    while let Some(x) = queue.pop_front() {
        let w = seen[&x].clone();
        if x == *e {
            return Some(w);
        }
        if w.len() >= max_len {
            continue;
        }
        for (l, g) in &gens {
            let y = x.mul(g);
            if y.is_bot() || seen.contains_key(&y) {
                continue;
            }
            seen.insert(y.clone(), w.concat(&Word(vec![*l])));
            queue.push_back(y);
        }
    }
    None
}
