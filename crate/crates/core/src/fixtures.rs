//! The two-letter example pair used throughout the docs and tests: `A`
//! computes the word length, `B` the maximum of the longest block of `a`s and
//! the number of `b`s. `A` is not big-O of `B`, while `B` is big-O of `A`.

use crate::automaton::{AutomatonBuilder, MaxPlusAutomaton};
use crate::word::Alphabet;

fn ab() -> Alphabet {
    Alphabet::new(["a", "b"]).expect("valid alphabet")
}

pub fn running_a() -> MaxPlusAutomaton {
    AutomatonBuilder::new(ab(), ["p"])
        .initial("p", 0)
        .and_then(|b| b.final_weight("p", 0))
        .and_then(|b| b.transition("p", "a", 1, "p"))
        .and_then(|b| b.transition("p", "b", 1, "p"))
        .and_then(|b| b.build())
        .expect("valid automaton")
}

pub fn running_b() -> MaxPlusAutomaton {
    let mut b = AutomatonBuilder::new(ab(), ["q1", "q2", "q3", "q4"]);
    for q in ["q1", "q2", "q4"] {
        b = b.initial(q, 0).expect("known state");
    }
    for q in ["q2", "q3", "q4"] {
        b = b.final_weight(q, 0).expect("known state");
    }
    let edges = [
        ("q1", "a", 0, "q1"),
        ("q2", "a", 1, "q2"),
        ("q3", "a", 0, "q3"),
        ("q4", "a", 0, "q4"),
        ("q1", "b", 0, "q1"),
        ("q1", "b", 0, "q2"),
        ("q2", "b", 0, "q3"),
        ("q3", "b", 0, "q3"),
        ("q4", "b", 1, "q4"),
    ];
    for (p, a, x, q) in edges {
        b = b.transition(p, a, x, q).expect("known state and letter");
    }
    b.build().expect("valid automaton")
}
