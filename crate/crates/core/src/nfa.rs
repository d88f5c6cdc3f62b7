//! Unweighted automata and language inclusion by subset construction.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::word::{Letter, Word};

pub const DEFAULT_SUBSET_CAP: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    num_letters: usize,
    initial: Vec<bool>,
    accepting: Vec<bool>,
    /// `delta[state][letter]` lists successors.
    delta: Vec<Vec<Vec<usize>>>,
}

impl Nfa {
    pub fn new(num_letters: usize, num_states: usize) -> Self {
        Nfa {
            num_letters,
            initial: vec![false; num_states],
            accepting: vec![false; num_states],
            delta: vec![vec![Vec::new(); num_letters]; num_states],
        }
    }

    /// One state, initial and accepting, looping on every letter.
    pub fn universal(num_letters: usize) -> Self {
        let mut n = Nfa::new(num_letters, 1);
        n.set_initial(0, true);
        n.set_accepting(0, true);
        for a in 0..num_letters {
            n.add_transition(0, a, 0);
        }
        n
    }

    pub fn num_letters(&self) -> usize {
        self.num_letters
    }

    pub fn num_states(&self) -> usize {
        self.initial.len()
    }

    pub fn set_initial(&mut self, q: usize, v: bool) {
        self.initial[q] = v;
    }

    pub fn set_accepting(&mut self, q: usize, v: bool) {
        self.accepting[q] = v;
    }

    pub fn add_transition(&mut self, p: usize, a: Letter, q: usize) {
        let succ = &mut self.delta[p][a];
        if !succ.contains(&q) {
            succ.push(q);
            succ.sort_unstable();
        }
    }

    fn initial_set(&self) -> StateSet {
        StateSet::from_iter(self.num_states(), (0..self.num_states()).filter(|&q| self.initial[q]))
    }

    fn post(&self, s: &StateSet, a: Letter) -> StateSet {
        StateSet::from_iter(
            self.num_states(),
            s.iter().flat_map(|p| self.delta[p][a].iter().copied()),
        )
    }

    fn accepts_set(&self, s: &StateSet) -> bool {
        s.iter().any(|q| self.accepting[q])
    }

    pub fn accepts(&self, w: &Word) -> bool {
        let mut s = self.initial_set();
        for &a in w.letters() {
            s = self.post(&s, a);
        }
        self.accepts_set(&s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct StateSet(Vec<u64>);

impl StateSet {
    fn from_iter(n: usize, it: impl Iterator<Item = usize>) -> Self {
        let mut bits = vec![0u64; n.div_ceil(64)];
        for q in it {
            bits[q / 64] |= 1 << (q % 64);
        }
        StateSet(bits)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| i * 64 + b)
        })
    }
}

/// Shortest word in `L(a) \ L(b)`, or `None` when `L(a) ⊆ L(b)`.
///
/// Explores the product of `a` with the subset construction of `b`
/// breadth-first; `cap` bounds the number of product states visited.
pub fn separating_word(a: &Nfa, b: &Nfa, cap: usize) -> Result<Option<Word>> {
    if a.num_letters != b.num_letters {
        return Err(Error::AlphabetMismatch(format!(
            "{} letters versus {}",
            a.num_letters, b.num_letters
        )));
    }
    type Node = (usize, StateSet);
    let mut parent: HashMap<Node, Option<(Node, Letter)>> = HashMap::new();
    let mut queue = VecDeque::new();
    let start = b.initial_set();
    for p in (0..a.num_states()).filter(|&p| a.initial[p]) {
        let node = (p, start.clone());
        if parent.insert(node.clone(), None).is_none() {
            queue.push_back(node);
        }
    }
    while let Some(node) = queue.pop_front() {
        if a.accepting[node.0] && !b.accepts_set(&node.1) {
            let mut letters = Vec::new();
            let mut cur = node;
            while let Some(Some((prev, l))) = parent.get(&cur).cloned() {
                letters.push(l);
                cur = prev;
            }
            letters.reverse();
            return Ok(Some(Word(letters)));
        }
        for l in 0..a.num_letters {
            let next_b = b.post(&node.1, l);
            for &q in &a.delta[node.0][l] {
                let next = (q, next_b.clone());
                if parent.contains_key(&next) {
                    continue;
                }
                if parent.len() >= cap {
                    return Err(Error::CapExceeded {
                        what: "subset construction states",
                        cap,
                    });
                }
                parent.insert(next.clone(), Some((node.clone(), l)));
                queue.push_back(next);
            }
        }
    }
    Ok(None)
}

/// `L(a) ⊆ L(b)`.
pub fn nfa_inclusion(a: &Nfa, b: &Nfa, cap: usize) -> Result<bool> {
    Ok(separating_word(a, b, cap)?.is_none())
}
