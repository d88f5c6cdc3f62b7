#![allow(dead_code)]

use maxplus_core::{Alphabet, AutomatonBuilder, MaxPlusAutomaton, Word};
use rand::rngs::StdRng;
use rand::Rng;

pub fn ab() -> Alphabet {
    Alphabet::new(["a", "b"]).unwrap()
}

fn names(n: usize, prefix: &str) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// A random automaton over `{a, b}` with weights in `{0, 1}`. With
/// `deterministic` set, state 0 is the only initial state and every state
/// has at most one successor per letter.
pub fn random_automaton(rng: &mut StdRng, max_states: usize, density: f64, deterministic: bool) -> MaxPlusAutomaton {
    let n = rng.gen_range(1..=max_states);
    let states = names(n, "s");
    let mut bld = AutomatonBuilder::new(ab(), states.clone());
    if deterministic {
        bld = bld.initial(&states[0], 0).unwrap();
    } else {
        let first = rng.gen_range(0..n);
        for (i, q) in states.iter().enumerate() {
            if i == first || rng.gen_bool(0.3) {
                bld = bld.initial(q, rng.gen_range(0..=1)).unwrap();
            }
        }
    }
    let last = rng.gen_range(0..n);
    for (i, q) in states.iter().enumerate() {
        if i == last || rng.gen_bool(0.4) {
            bld = bld.final_weight(q, rng.gen_range(0..=1)).unwrap();
        }
    }
    for p in &states {
        for l in ["a", "b"] {
            if deterministic {
                if rng.gen_bool(density) {
                    let q = &states[rng.gen_range(0..n)];
                    bld = bld.transition(p, l, rng.gen_range(0..=1), q).unwrap();
                }
            } else {
                for q in &states {
                    if rng.gen_bool(density) {
                        bld = bld.transition(p, l, rng.gen_range(0..=1), q).unwrap();
                    }
                }
            }
        }
    }
    bld.build().unwrap()
}

pub fn random_word(rng: &mut StdRng, max_len: usize) -> Word {
    let n = rng.gen_range(1..=max_len);
    Word((0..n).map(|_| rng.gen_range(0..2)).collect())
}

pub fn running_word(s: &str) -> Word {
    ab().parse_word(s).unwrap().expand(1 << 20).unwrap()
}
