//! Reduction of an arbitrary instance to the simplified problem: `A`
//! deterministic and `f_B` total into `N`.

use num_bigint::BigUint;

use crate::automaton::MaxPlusAutomaton;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::nfa::{self, Nfa};
use crate::semiring::{NmaxValue, Semiring};
use crate::word::{Alphabet, Letter, RleWord, Word};

/// Maps letters of a simplified instance back to the original alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LetterMap {
    pub original: Alphabet,
    pub simplified: Alphabet,
    erase: Vec<Letter>,
}

impl LetterMap {
    pub fn identity(alphabet: &Alphabet) -> Self {
        LetterMap {
            original: alphabet.clone(),
            simplified: alphabet.clone(),
            erase: alphabet.letters().collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.original == self.simplified
    }

    pub fn erase(&self, a: Letter) -> Result<Letter> {
        self.erase.get(a).copied().ok_or(Error::LetterOutOfRange(a))
    }
}

/// Removes the state annotations from a word over the simplified alphabet.
pub fn pull_back_word(map: &LetterMap, w: &Word) -> Result<Word> {
    w.letters().iter().map(|&a| map.erase(a)).collect::<Result<Vec<_>>>().map(Word)
}

pub fn pull_back_rle(map: &LetterMap, w: &RleWord) -> Result<RleWord> {
    if let Some(a) = w.max_letter() {
        map.erase(a)?;
    }
    Ok(w.map_letters(&|a| map.erase[a]))
}

fn fresh_name(base: &str, taken: &[String]) -> String {
    let mut name = base.to_string();
    let mut k = 0;
    while taken.contains(&name) {
        k += 1;
        name = format!("{base}{k}");
    }
    name
}

/// Adds a state that is initial and final with weight 0 and loops on every
/// letter with weight 0, so that `f_B'(w) = max(f_B(w), 0)`.
pub fn totalize_b(b: &MaxPlusAutomaton) -> MaxPlusAutomaton {
    let n = b.num_states();
    let mut states = b.states().to_vec();
    states.push(fresh_name("top", &states));
    let trans = b
        .alphabet()
        .letters()
        .map(|a| {
            let mut m = Matrix::zeros(n + 1, n + 1);
            for (p, q, v) in b.trans(a).entries() {
                m.set(p, q, v.clone());
            }
            m.set(n, n, NmaxValue::one());
            m
        })
        .collect();
    let mut initial = b.initial().to_vec();
    initial.push(NmaxValue::one());
    let mut finals = b.finals().to_vec();
    finals.push(NmaxValue::one());
    MaxPlusAutomaton::new(b.alphabet().clone(), states, trans, initial, finals)
        .expect("adding a state keeps the automaton well formed")
}

/// Makes `A` deterministic by annotating every letter with its target state.
///
/// Over `Σ' = {a_q}`, `A'` has the states of `A` plus a fresh initial state
/// `r`; `p --a_q:x--> q` whenever `p --a:x--> q` in `A`, and
/// `r --a_q:x+I_A(p)--> q` for initial `p`. `B'` reads `a_q` as `a`.
pub fn determinize_pair(
    a: &MaxPlusAutomaton,
    b: &MaxPlusAutomaton,
) -> Result<(MaxPlusAutomaton, MaxPlusAutomaton, LetterMap)> {
    if !a.alphabet().same_letters(b.alphabet()) {
        return Err(Error::AlphabetMismatch("A and B must share letters".into()));
    }
    let b = b.with_alphabet(a.alphabet())?;
    let sigma = a.alphabet();
    let n = a.num_states();

    let mut names = Vec::new();
    let mut erase = Vec::new();
    for l in sigma.letters() {
        for q in 0..n {
            names.push(format!("{}_{}", sigma.name(l), a.state_name(q)));
            erase.push(l);
        }
    }
    let simplified = match Alphabet::new(names) {
        Ok(al) => al,
        // State names that collide or contain reserved characters: fall back to indices.
        Err(_) => Alphabet::new(
            sigma
                .letters()
                .flat_map(|l| (0..n).map(move |q| format!("{}_{q}", sigma.name(l)))),
        )?,
    };
    let annotated = |l: Letter, q: usize| l * n + q;

    let r = n;
    let mut states = a.states().to_vec();
    states.push(fresh_name("r", &states));
    let mut trans = vec![Matrix::zeros(n + 1, n + 1); simplified.len()];
    for l in sigma.letters() {
        for (p, q, x) in a.trans(l).entries() {
            if !x.is_finite() {
                continue;
            }
            let m = &mut trans[annotated(l, q)];
            m.set(p, q, x.clone());
            let from_r = x.otimes(&a.initial()[p]);
            let v = m.get(r, q).oplus(&from_r);
            m.set(r, q, v);
        }
    }
    let mut initial = vec![NmaxValue::NegInf; n + 1];
    initial[r] = NmaxValue::one();
    let mut finals = a.finals().to_vec();
    // f_A(ε) = max over p of I_A(p) + F_A(p).
    finals.push(
        (0..n).fold(NmaxValue::NegInf, |acc, p| {
            acc.oplus(&a.initial()[p].otimes(&a.finals()[p]))
        }),
    );
    let a2 = MaxPlusAutomaton::new(simplified.clone(), states, trans, initial, finals)?;

    let b_trans = (0..simplified.len())
        .map(|l| b.trans(erase[l]).clone())
        .collect();
    let b2 = MaxPlusAutomaton::new(
        simplified.clone(),
        b.states().to_vec(),
        b_trans,
        b.initial().to_vec(),
        b.finals().to_vec(),
    )?;
    Ok((
        a2,
        b2,
        LetterMap {
            original: sigma.clone(),
            simplified,
            erase,
        },
    ))
}

/// A simplified instance together with what is needed to map results back.
#[derive(Clone, Debug)]
pub struct SimplifiedInstance {
    /// Deterministic and trim.
    pub a: MaxPlusAutomaton,
    /// Trim, with `f_B(w) ∈ N` for every word.
    pub b: MaxPlusAutomaton,
    pub letter_map: LetterMap,
    pub original_a: MaxPlusAutomaton,
    /// The original `B`, over the alphabet order of the original `A`.
    pub original_b: MaxPlusAutomaton,
    pub determinized: bool,
    pub totalized: bool,
}

#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
pub enum Simplification {
    /// `L_A ⊄ L_B`: `w` is accepted by `A` and rejected by `B`, so
    /// `f_A(w) > c·f_B(w) + c = -∞` for every `c`.
    Immediate { word: Word },
    Simplified(SimplifiedInstance),
}

/// Runs the language-inclusion pre-check, then totalizes `B` (unless it
/// already accepts every word) and determinizes `A` (unless it already is
/// deterministic). Both automata are trimmed.
pub fn simplify(a: &MaxPlusAutomaton, b: &MaxPlusAutomaton, subset_cap: usize) -> Result<Simplification> {
    let b = b.with_alphabet(a.alphabet())?;
    let bool_b = b.boolean_projection();
    if let Some(word) = nfa::separating_word(&a.boolean_projection(), &bool_b, subset_cap)? {
        return Ok(Simplification::Immediate { word });
    }
    let universal = Nfa::universal(a.alphabet().len());
    let b_total = nfa::nfa_inclusion(&universal, &bool_b, subset_cap)?;
    let a_trim = a.trim();
    let b_trim = b.trim();
    let b_simple = if b_total { b_trim } else { totalize_b(&b_trim) };
    let (a_simple, b_simple, letter_map, determinized) = if a_trim.is_deterministic() {
        let map = LetterMap::identity(a.alphabet());
        (a_trim, b_simple, map, false)
    } else {
        let (a2, b2, map) = determinize_pair(&a_trim, &b_simple)?;
        (a2.trim(), b2, map, true)
    };
    Ok(Simplification::Simplified(SimplifiedInstance {
        a: a_simple,
        b: b_simple,
        letter_map,
        original_a: a.clone(),
        original_b: b,
        determinized,
        totalized: !b_total,
    }))
}

/// A word over the simplified alphabet whose unique `A`-run follows a
/// maximal-weight run of the original `A` on `w`. `None` if `A` rejects `w`.
pub fn lift_word(instance: &SimplifiedInstance, w: &Word) -> Result<Option<Word>> {
    if !instance.determinized {
        return Ok(Some(w.clone()));
    }
    // Same trimming as `simplify`, so letter `l` annotated with target `q`
    // has index `l·n + q`.
    let a = instance.original_a.trim();
    let n = a.num_states();
    let mut best: Vec<NmaxValue> = a.initial().to_vec();
    let mut back: Vec<Vec<usize>> = Vec::with_capacity(w.len());
    for &l in w.letters() {
        let m = a.trans(l);
        let mut next = vec![NmaxValue::NegInf; n];
        let mut from = vec![0; n];
        for (p, q, x) in m.entries() {
            let v = best[p].otimes(x);
            if v.is_finite() && v > next[q] {
                next[q] = v;
                from[q] = p;
            }
        }
        back.push(from);
        best = next;
    }
    let end = (0..n)
        .map(|q| (best[q].otimes(&a.finals()[q]), q))
        .filter(|(v, _)| v.is_finite())
        .max_by(|x, y| x.0.cmp(&y.0).then(y.1.cmp(&x.1)));
    let Some((_, mut q)) = end else {
        return Ok(None);
    };
    let mut letters = vec![0; w.len()];
    for i in (0..w.len()).rev() {
        letters[i] = w.letters()[i] * n + q;
        q = back[i][q];
    }
    Ok(Some(Word(letters)))
}

/// Largest finite entry, or 0.
pub(crate) fn max_finite(values: &[NmaxValue]) -> BigUint {
    values
        .iter()
        .filter_map(NmaxValue::as_finite)
        .max()
        .cloned()
        .unwrap_or_default()
}
