//! Max-plus automata over `N ∪ {-∞}`.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::nfa::Nfa;
use crate::semiring::{NmaxValue, Semiring};
use crate::word::{Alphabet, Letter, RleNode, RleWord, Word};

/// A weighted automaton `(Q, Σ, M, I, F)`. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxPlusAutomaton {
    alphabet: Alphabet,
    states: Vec<String>,
    trans: Vec<Matrix<NmaxValue>>,
    initial: Vec<NmaxValue>,
    finals: Vec<NmaxValue>,
    lambda: BigUint,
}

/// The unique run of a deterministic automaton on a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    /// `len(word) + 1` states, starting with the source.
    pub states: Vec<usize>,
    /// Sum of the transition weights (initial and final weights excluded).
    pub weight: BigUint,
}

impl Run {
    pub fn last(&self) -> usize {
        *self.states.last().expect("a run has at least one state")
    }
}

impl MaxPlusAutomaton {
    pub fn new(
        alphabet: Alphabet,
        states: Vec<String>,
        trans: Vec<Matrix<NmaxValue>>,
        initial: Vec<NmaxValue>,
        finals: Vec<NmaxValue>,
    ) -> Result<Self> {
        let n = states.len();
        if trans.len() != alphabet.len() {
            return Err(Error::InvalidAutomaton(format!(
                "{} transition matrices for {} letters",
                trans.len(),
                alphabet.len()
            )));
        }
        if trans.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::InvalidAutomaton(format!(
                "transition matrices must be {n}x{n}"
            )));
        }
        if initial.len() != n || finals.len() != n {
            return Err(Error::InvalidAutomaton(
                "initial and final vectors must have one entry per state".into(),
            ));
        }
        let mut names = std::collections::HashSet::new();
        if let Some(dup) = states.iter().find(|s| !names.insert(s.as_str())) {
            return Err(Error::InvalidAutomaton(format!("duplicate state `{dup}`")));
        }
        let lambda = trans
            .iter()
            .flat_map(|m| m.entries().map(|(_, _, v)| v))
            .chain(initial.iter())
            .chain(finals.iter())
            .filter_map(NmaxValue::as_finite)
            .max()
            .cloned()
            .unwrap_or_else(BigUint::zero);
        Ok(MaxPlusAutomaton {
            alphabet,
            states,
            trans,
            initial,
            finals,
            lambda,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn trans(&self, a: Letter) -> &Matrix<NmaxValue> {
        &self.trans[a]
    }

    pub fn initial(&self) -> &[NmaxValue] {
        &self.initial
    }

    pub fn finals(&self) -> &[NmaxValue] {
        &self.finals
    }

    /// Largest finite weight among transitions, initial and final vectors (`Λ`).
    pub fn lambda(&self) -> &BigUint {
        &self.lambda
    }

    pub fn initial_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_states()).filter(|&q| self.initial[q].is_finite())
    }

    pub fn final_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_states()).filter(|&q| self.finals[q].is_finite())
    }

    pub fn initial_row(&self) -> Matrix<NmaxValue> {
        Matrix::from_rows(vec![self.initial.clone()])
            .unwrap_or_else(|_| Matrix::zeros(1, 0))
    }

    pub fn final_column(&self) -> Matrix<NmaxValue> {
        let mut m = Matrix::zeros(self.num_states(), 1);
        for (q, v) in self.finals.iter().enumerate() {
            m.set(q, 0, v.clone());
        }
        m
    }

    fn check_letter(&self, a: Letter) -> Result<()> {
        if a < self.alphabet.len() {
            Ok(())
        } else {
            Err(Error::LetterOutOfRange(a))
        }
    }

    /// `M(w)`; the identity for the empty word.
    pub fn word_matrix(&self, w: &Word) -> Result<Matrix<NmaxValue>> {
        let mut m = Matrix::identity(self.num_states());
        for &a in w.letters() {
            self.check_letter(a)?;
            m = &m * &self.trans[a];
        }
        Ok(m)
    }

    /// `M(w)` for a run-length encoded word, by repeated squaring on powers.
    pub fn rle_matrix(&self, w: &RleWord) -> Result<Matrix<NmaxValue>> {
        let mut memo = HashMap::new();
        self.rle_matrix_memo(w, &mut memo)
    }

    fn rle_matrix_memo(
        &self,
        w: &RleWord,
        memo: &mut HashMap<*const RleNode, Matrix<NmaxValue>>,
    ) -> Result<Matrix<NmaxValue>> {
        if let Some(m) = memo.get(&w.ptr()) {
            return Ok(m.clone());
        }
        let m = match w.node() {
            RleNode::Letter(a) => {
                self.check_letter(*a)?;
                self.trans[*a].clone()
            }
            RleNode::Concat(parts) => {
                let mut m = Matrix::identity(self.num_states());
                for p in parts {
                    m = &m * &self.rle_matrix_memo(p, memo)?;
                }
                m
            }
            RleNode::Power(base, k) => self.rle_matrix_memo(base, memo)?.pow(*k)?,
        };
        memo.insert(w.ptr(), m.clone());
        Ok(m)
    }

    fn close(&self, m: &Matrix<NmaxValue>) -> NmaxValue {
        (&(&self.initial_row() * m) * &self.final_column())
            .get(0, 0)
            .clone()
    }

    /// `f(w) = I ⊗ M(w₁) ⊗ … ⊗ M(w_k) ⊗ F`.
    pub fn evaluate(&self, w: &Word) -> Result<NmaxValue> {
        // Vector-matrix products keep this linear in |Q| per letter.
        let mut row = self.initial.clone();
        for &a in w.letters() {
            self.check_letter(a)?;
            row = vec_mat(&row, &self.trans[a]);
        }
        Ok(row
            .iter()
            .zip(&self.finals)
            .fold(NmaxValue::NegInf, |acc, (x, f)| acc.oplus(&x.otimes(f))))
    }

    pub fn evaluate_rle(&self, w: &RleWord) -> Result<NmaxValue> {
        Ok(self.close(&self.rle_matrix(w)?))
    }

    /// `I` has at most one finite entry and every row of every `M(a)` at most one.
    pub fn is_deterministic(&self) -> bool {
        self.initial.iter().filter(|v| v.is_finite()).count() <= 1
            && self.trans.iter().all(|m| {
                (0..m.rows()).all(|i| m.row(i).iter().filter(|v| v.is_finite()).count() <= 1)
            })
    }

    /// The unique successor of `p` on `a` in a deterministic automaton.
    pub fn step(&self, p: usize, a: Letter) -> Option<(usize, &BigUint)> {
        self.trans[a]
            .row(p)
            .iter()
            .enumerate()
            .find_map(|(q, v)| v.as_finite().map(|x| (q, x)))
    }

    /// Follows the unique finite entry per row from `p`; `None` if the run
    /// dies. Requires a deterministic automaton.
    pub fn run_from(&self, p: usize, w: &Word) -> Result<Option<Run>> {
        if !self.is_deterministic() {
            return Err(Error::NotDeterministic);
        }
        let mut states = vec![p];
        let mut weight = BigUint::zero();
        let mut cur = p;
        for &a in w.letters() {
            self.check_letter(a)?;
            match self.step(cur, a) {
                Some((q, x)) => {
                    weight += x;
                    cur = q;
                    states.push(q);
                }
                None => return Ok(None),
            }
        }
        Ok(Some(Run { states, weight }))
    }

    /// The accepting run on `w` from the initial state, if any.
    pub fn accepting_run(&self, w: &Word) -> Result<Option<Run>> {
        let Some(p) = self.initial_states().next() else {
            return Ok(None);
        };
        Ok(self
            .run_from(p, w)?
            .filter(|r| self.finals[r.last()].is_finite()))
    }

    fn reachable(&self, seeds: impl Iterator<Item = usize>, forward: bool) -> Vec<bool> {
        let n = self.num_states();
        let mut seen = vec![false; n];
        let mut queue: VecDeque<usize> = seeds.collect();
        for &q in &queue {
            seen[q] = true;
        }
        while let Some(p) = queue.pop_front() {
            for m in &self.trans {
                for (q, done) in seen.iter_mut().enumerate() {
                    let v = if forward { m.get(p, q) } else { m.get(q, p) };
                    if v.is_finite() && !*done {
                        *done = true;
                        queue.push_back(q);
                    }
                }
            }
        }
        seen
    }

    /// Restricts to accessible and co-accessible states. The result may have
    /// no states at all, in which case it computes the constant `-∞`.
    pub fn trim(&self) -> MaxPlusAutomaton {
        let fwd = self.reachable(self.initial_states(), true);
        let bwd = self.reachable(self.final_states(), false);
        let keep: Vec<usize> = (0..self.num_states()).filter(|&q| fwd[q] && bwd[q]).collect();
        self.restrict(&keep)
    }

    fn restrict(&self, keep: &[usize]) -> MaxPlusAutomaton {
        let k = keep.len();
        let trans = self
            .trans
            .iter()
            .map(|m| {
                let mut r = Matrix::zeros(k, k);
                for (i, &p) in keep.iter().enumerate() {
                    for (j, &q) in keep.iter().enumerate() {
                        r.set(i, j, m.get(p, q).clone());
                    }
                }
                r
            })
            .collect();
        MaxPlusAutomaton::new(
            self.alphabet.clone(),
            keep.iter().map(|&q| self.states[q].clone()).collect(),
            trans,
            keep.iter().map(|&q| self.initial[q].clone()).collect(),
            keep.iter().map(|&q| self.finals[q].clone()).collect(),
        )
        .expect("restriction of a valid automaton is valid")
    }

    /// The same automaton over `alphabet`, which must contain exactly the
    /// same letter names, possibly in another order.
    pub fn with_alphabet(&self, alphabet: &Alphabet) -> Result<MaxPlusAutomaton> {
        if !self.alphabet.same_letters(alphabet) {
            return Err(Error::AlphabetMismatch(format!(
                "{{{}}} versus {{{}}}",
                self.alphabet.names().join(", "),
                alphabet.names().join(", ")
            )));
        }
        let trans = alphabet
            .names()
            .iter()
            .map(|n| Ok(self.trans[self.alphabet.letter(n)?].clone()))
            .collect::<Result<Vec<_>>>()?;
        MaxPlusAutomaton::new(
            alphabet.clone(),
            self.states.clone(),
            trans,
            self.initial.clone(),
            self.finals.clone(),
        )
    }

    /// The NFA obtained by forgetting weights; it accepts `w` iff `f(w) ≠ -∞`.
    pub fn boolean_projection(&self) -> Nfa {
        let n = self.num_states();
        let mut nfa = Nfa::new(self.alphabet.len(), n);
        for q in 0..n {
            nfa.set_initial(q, self.initial[q].is_finite());
            nfa.set_accepting(q, self.finals[q].is_finite());
        }
        for (a, m) in self.trans.iter().enumerate() {
            for (p, q, v) in m.entries() {
                if v.is_finite() {
                    nfa.add_transition(p, a, q);
                }
            }
        }
        nfa
    }
}

fn vec_mat(row: &[NmaxValue], m: &Matrix<NmaxValue>) -> Vec<NmaxValue> {
    let mut out = vec![NmaxValue::NegInf; m.cols()];
    for (k, x) in row.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in m.row(k).iter().enumerate() {
            if !y.is_zero() {
                out[j] = out[j].oplus(&x.otimes(y));
            }
        }
    }
    out
}

/// Incremental construction by state and letter names. Repeated transitions
/// between the same states on the same letter keep the larger weight.
#[derive(Clone, Debug)]
pub struct AutomatonBuilder {
    alphabet: Alphabet,
    states: Vec<String>,
    trans: Vec<Matrix<NmaxValue>>,
    initial: Vec<NmaxValue>,
    finals: Vec<NmaxValue>,
}

impl AutomatonBuilder {
    pub fn new<S: Into<String>>(alphabet: Alphabet, states: impl IntoIterator<Item = S>) -> Self {
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        let n = states.len();
        AutomatonBuilder {
            trans: vec![Matrix::zeros(n, n); alphabet.len()],
            initial: vec![NmaxValue::NegInf; n],
            finals: vec![NmaxValue::NegInf; n],
            alphabet,
            states,
        }
    }

    fn state(&self, name: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::InvalidAutomaton(format!("unknown state `{name}`")))
    }

    pub fn initial(mut self, state: &str, weight: u64) -> Result<Self> {
        let q = self.state(state)?;
        self.initial[q] = self.initial[q].oplus(&weight.into());
        Ok(self)
    }

    pub fn final_weight(mut self, state: &str, weight: u64) -> Result<Self> {
        let q = self.state(state)?;
        self.finals[q] = self.finals[q].oplus(&weight.into());
        Ok(self)
    }

    pub fn transition(self, from: &str, letter: &str, weight: u64, to: &str) -> Result<Self> {
        self.transition_big(from, letter, NmaxValue::from(weight), to)
    }

    pub fn transition_big(mut self, from: &str, letter: &str, weight: NmaxValue, to: &str) -> Result<Self> {
        let p = self.state(from)?;
        let q = self.state(to)?;
        let a = self.alphabet.letter(letter)?;
        let v = self.trans[a].get(p, q).oplus(&weight);
        self.trans[a].set(p, q, v);
        Ok(self)
    }

    pub fn build(self) -> Result<MaxPlusAutomaton> {
        MaxPlusAutomaton::new(self.alphabet, self.states, self.trans, self.initial, self.finals)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{running_a, running_b};
    use crate::semiring::nmax;

    fn w(al: &Alphabet, s: &str) -> Word {
        al.parse_word(s).unwrap().expand(1 << 20).unwrap()
    }

    #[test]
    fn running_example_values() {
        let (a, b) = (running_a(), running_b());
        let al = a.alphabet().clone();
        assert_eq!(a.evaluate(&w(&al, "abab")).unwrap(), nmax(4));
        assert_eq!(b.evaluate(&w(&al, "abab")).unwrap(), nmax(2));
        assert_eq!(a.evaluate(&Word::empty()).unwrap(), nmax(0));
        // (a^{n-1} b)^n gives n^2 and n.
        for n in 2..7u64 {
            let word = al.parse_word(&format!("(a^{} b)^{n}", n - 1)).unwrap();
            assert_eq!(a.evaluate_rle(&word).unwrap(), nmax(n * n));
            assert_eq!(b.evaluate_rle(&word).unwrap(), nmax(n));
        }
    }

    #[test]
    fn long_word_values() {
        // 81 blocks of 23 letters, each letter weighing 1.
        let (a, b) = (running_a(), running_b());
        let word = a.alphabet().parse_word("(a b a^20 b)^81").unwrap();
        assert_eq!(a.evaluate_rle(&word).unwrap(), nmax(1863));
        assert_eq!(b.evaluate_rle(&word).unwrap(), nmax(162));
        let expanded = word.expand(10_000).unwrap();
        assert_eq!(a.evaluate(&expanded).unwrap(), nmax(1863));
        assert_eq!(b.evaluate(&expanded).unwrap(), nmax(162));
    }

    #[test]
    fn rle_and_plain_evaluation_agree() {
        let b = running_b();
        let al = b.alphabet().clone();
        for src in ["", "a", "b b", "(a b^2)^3 a", "((a b)^2 b a^3)^2"] {
            let r = al.parse_word(src).unwrap();
            assert_eq!(
                b.evaluate_rle(&r).unwrap(),
                b.evaluate(&r.expand(1000).unwrap()).unwrap(),
                "{src}"
            );
        }
    }

    #[test]
    fn determinism() {
        assert!(running_a().is_deterministic());
        assert!(!running_b().is_deterministic());
        let empty = AutomatonBuilder::new(Alphabet::new(Vec::<String>::new()).unwrap(), ["q"])
            .build()
            .unwrap();
        assert!(empty.is_deterministic());
    }

    #[test]
    fn trim_examples() {
        let b = running_b();
        assert_eq!(b.trim(), b);

        let al = b.alphabet().clone();
        let mut names: Vec<String> = b.states().to_vec();
        names.push("dead".into());
        let mut builder = AutomatonBuilder::new(al.clone(), names);
        for a in al.letters() {
            for (p, q, v) in b.trans(a).entries() {
                if let NmaxValue::Finite(x) = v {
                    builder = builder
                        .transition_big(b.state_name(p), al.name(a), NmaxValue::Finite(x.clone()), b.state_name(q))
                        .unwrap();
                }
            }
        }
        for q in b.initial_states() {
            builder = builder.initial(b.state_name(q), 0).unwrap();
        }
        for q in b.final_states() {
            builder = builder.final_weight(b.state_name(q), 0).unwrap();
        }
        let with_dead = builder.transition("dead", "a", 3, "q1").unwrap().build().unwrap();
        assert_eq!(with_dead.num_states(), 5);
        assert_eq!(with_dead.trim(), b);

        let no_final = AutomatonBuilder::new(al, ["x"])
            .initial("x", 0)
            .unwrap()
            .transition("x", "a", 1, "x")
            .unwrap()
            .build()
            .unwrap();
        let t = no_final.trim();
        assert_eq!(t.num_states(), 0);
        assert_eq!(t.evaluate(&Word(vec![0])).unwrap(), NmaxValue::NegInf);
    }

    #[test]
    fn unique_run_reconstruction() {
        let a = running_a();
        let word = w(a.alphabet(), "aab");
        let run = a.accepting_run(&word).unwrap().unwrap();
        assert_eq!(run.states, vec![0, 0, 0, 0]);
        assert_eq!(run.weight, BigUint::from(3u32));
        assert!(matches!(running_b().run_from(0, &word), Err(Error::NotDeterministic)));
    }

    #[test]
    fn lambda_is_cached_max_weight() {
        assert_eq!(*running_a().lambda(), BigUint::from(1u32));
        assert_eq!(*running_b().lambda(), BigUint::from(1u32));
    }

    #[test]
    fn letter_out_of_range() {
        assert!(matches!(
            running_a().evaluate(&Word(vec![7])),
            Err(Error::LetterOutOfRange(7))
        ));
    }
}
