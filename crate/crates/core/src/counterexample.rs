//! Turning a witness derivation into words `w_s` on which `A` beats `s·B + s`.
//!
//! Realization follows the structure of the derivation: products
//! concatenate (inflating the unbounded side so that it dominates the
//! bounded one), stabilisations of weight-1 loops and flattenings of
//! unbounded elements are iterated often enough for the `A`-weight to
//! outgrow every bounded `B`-entry. `x_s` is read off the actual `A`-run
//! rather than recomputed from the recursion.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::automaton::MaxPlusAutomaton;
use crate::decision::{Refutation, Verdict};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::reduction::pull_back_rle;
use crate::semigroup::{AsympElement, Derivation, DerivationNode, Element};
use crate::semiring::{Bar, NmaxValue, OmegaValue};
use crate::word::RleWord;

/// Realized words longer than this are refused.
pub const DEFAULT_LENGTH_CAP: u128 = 1 << 60;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub word: RleWord,
    /// Weight of the `A`-run of `word` from the element's source state.
    pub weight: NmaxValue,
}

struct Realizer<'a> {
    a: &'a MaxPlusAutomaton,
    b: &'a MaxPlusAutomaton,
    length_cap: u128,
    elements: HashMap<*const DerivationNode, AsympElement>,
    words: HashMap<(*const DerivationNode, u64), RleWord>,
}

fn weight_of(e: &AsympElement) -> OmegaValue {
    *e.weight().expect("derivations of the closure never evaluate to bot")
}

fn mul_s(s: u64, k: &BigUint) -> Result<u64> {
    (BigUint::from(s) * k)
        .to_u64()
        .ok_or(Error::Overflow("inflating the realization parameter"))
}

fn max_finite_entry(m: &Matrix<NmaxValue>) -> BigUint {
    m.entries()
        .filter_map(|(_, _, v)| v.as_finite())
        .max()
        .cloned()
        .unwrap_or_default()
}

impl Realizer<'_> {
    fn element(&mut self, d: &Derivation) -> Result<AsympElement> {
        if let Some(e) = self.elements.get(&d.ptr()) {
            return Ok(e.clone());
        }
        let e = d.eval(self.a, self.b)?;
        if e.is_bot() {
            return Err(Error::DerivationMismatch("the derivation evaluates to bot".into()));
        }
        self.elements.insert(d.ptr(), e.clone());
        Ok(e)
    }

    fn theta(&self, w: &RleWord) -> Result<BigUint> {
        Ok(max_finite_entry(&self.b.rle_matrix(w)?))
    }

    fn word(&mut self, d: &Derivation, s: u64) -> Result<RleWord> {
        if let Some(w) = self.words.get(&(d.ptr(), s)) {
            return Ok(w.clone());
        }
        let qb = BigUint::from(self.b.num_states());
        let w = match d.node() {
            DerivationNode::Generator { letter, .. } => RleWord::letter(*letter),
            DerivationNode::Product(l, r) => {
                let y = weight_of(&self.element(l)?);
                let z = weight_of(&self.element(r)?);
                match (y == OmegaValue::Inf, z == OmegaValue::Inf) {
                    (true, false) => {
                        let v0 = self.word(r, 0)?;
                        let k = self.theta(&v0)? + 1u32;
                        let u = self.word(l, mul_s(s, &k)?)?;
                        RleWord::concat(vec![u, v0])
                    }
                    (false, true) => {
                        let u0 = self.word(l, 0)?;
                        let k = self.theta(&u0)? + 1u32;
                        let v = self.word(r, mul_s(s, &k)?)?;
                        RleWord::concat(vec![u0, v])
                    }
                    _ => RleWord::concat(vec![self.word(l, s)?, self.word(r, s)?]),
                }
            }
            DerivationNode::Stabilise(c) => match weight_of(&self.element(c)?) {
                OmegaValue::One => {
                    let u0 = self.word(c, 0)?;
                    let k = self.theta(&u0)? * &qb + 1u32;
                    // At s = 0 the family would start with the empty word,
                    // which has no weight 1 run; one copy keeps (1)–(3).
                    RleWord::power(u0, mul_s(s, &k)?.max(1))
                }
                _ => self.word(c, s)?,
            },
            DerivationNode::Flatten(c) => {
                let u = self.word(c, s)?;
                if weight_of(&self.element(c)?) == OmegaValue::Inf {
                    let k = self.theta(&u)? * &qb + 1u32;
                    let k = k.to_u64().ok_or(Error::Overflow("computing a flattening exponent"))?;
                    RleWord::power(u, k)
                } else {
                    u
                }
            }
        };
        match w.len() {
            Some(len) if len <= self.length_cap => {}
            _ => {
                return Err(Error::CapExceeded {
                    what: "realized word length",
                    cap: self.length_cap.min(usize::MAX as u128) as usize,
                })
            }
        }
        self.words.insert((d.ptr(), s), w.clone());
        Ok(w)
    }
}

/// The pair `(w_s, x_s)` for the element derived by `d`.
pub fn realize(d: &Derivation, s: u64, a: &MaxPlusAutomaton, b: &MaxPlusAutomaton) -> Result<Realization> {
    realize_with_cap(d, s, a, b, DEFAULT_LENGTH_CAP)
}

pub fn realize_with_cap(
    d: &Derivation,
    s: u64,
    a: &MaxPlusAutomaton,
    b: &MaxPlusAutomaton,
    length_cap: u128,
) -> Result<Realization> {
    let mut r = Realizer {
        a,
        b,
        length_cap,
        elements: HashMap::new(),
        words: HashMap::new(),
    };
    let e = r.element(d)?;
    let word = r.word(d, s)?;
    let (from, to) = (e.from_state().unwrap(), e.to_state().unwrap());
    let (end, weight) = run_weight(a, from, &word)?
        .ok_or_else(|| Error::DerivationMismatch("the realized word has no run in A".into()))?;
    if end != to {
        return Err(Error::DerivationMismatch(format!(
            "the realized run ends in {} instead of {}",
            a.state_name(end),
            a.state_name(to)
        )));
    }
    Ok(Realization { word, weight })
}

/// End state and weight of the run of a deterministic `A` from `p`.
fn run_weight(a: &MaxPlusAutomaton, p: usize, w: &RleWord) -> Result<Option<(usize, NmaxValue)>> {
    let m = a.rle_matrix(w)?;
    Ok(m.row(p)
        .iter()
        .enumerate()
        .find(|(_, v)| v.is_finite())
        .map(|(q, v)| (q, v.clone())))
}

/// Checks the three properties of a realization of `e = (p, x, q, M)`:
/// the `A`-run `p → q` on `w_s` weighs `x_s` with `x̄_s = x̄`;
/// `M_B(w_s)` projects to `M̄`; and if `x = ∞`, `x_s ≥ s·M_B(w_s)_{i,j} + s`
/// wherever `M_{i,j} ≤ 1` and the entry is finite.
pub fn verify_realization(
    e: &AsympElement,
    w: &RleWord,
    x_s: &NmaxValue,
    s: u64,
    a: &MaxPlusAutomaton,
    b: &MaxPlusAutomaton,
) -> bool {
    let Element::Path {
        from,
        weight,
        to,
        matrix,
    } = e
    else {
        return false;
    };
    let Ok(Some((end, run))) = run_weight(a, *from, w) else {
        return false;
    };
    if end != *to || run != *x_s || x_s.bar() != weight.bar() {
        return false;
    }
    let Ok(mb) = b.rle_matrix(w) else {
        return false;
    };
    if mb.bar() != matrix.bar() {
        return false;
    }
    if *weight != OmegaValue::Inf {
        return true;
    }
    let NmaxValue::Finite(x) = x_s else {
        return false;
    };
    let s = BigUint::from(s);
    matrix.entries().all(|(i, j, m)| {
        *m == OmegaValue::Inf
            || match mb.get(i, j) {
                NmaxValue::Finite(v) => *x >= &s * v + &s,
                NmaxValue::NegInf => true,
            }
    })
}

/// One member of a violating family, over the original alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub s: u64,
    /// Parameter of the realization actually used; larger than `s` when
    /// initial and final weights needed a longer word.
    pub realized_s: u64,
    pub word: RleWord,
    pub f_a: NmaxValue,
    pub f_b: NmaxValue,
}

impl Violation {
    /// `f_A(w) > s·f_B(w) + s`, with `-∞` on the right always losing.
    pub fn holds(&self) -> bool {
        violates(&self.f_a, &self.f_b, self.s)
    }
}

pub fn violates(f_a: &NmaxValue, f_b: &NmaxValue, s: u64) -> bool {
    match (f_a, f_b) {
        (NmaxValue::NegInf, _) => false,
        (NmaxValue::Finite(_), NmaxValue::NegInf) => true,
        (NmaxValue::Finite(x), NmaxValue::Finite(y)) => *x > BigUint::from(s) * y + s,
    }
}

/// How far `s` is escalated before giving up on one member of the family.
const MAX_ESCALATIONS: u32 = 40;

/// For each `s`, a word with `f_A(w) > s·f_B(w) + s`, checked by evaluating
/// the original automata. Returns `None` for a big-O verdict.
pub fn violation_family(verdict: &Verdict, s_values: &[u64]) -> Result<Option<Vec<Violation>>> {
    let refutation = match verdict {
        Verdict::BigO(_) => return Ok(None),
        Verdict::NotBigO(r) => r,
    };
    let mut out = Vec::new();
    match refutation {
        Refutation::LanguageGap { word, a, b } => {
            let w = RleWord::from_word(word);
            let (f_a, f_b) = (a.evaluate(word)?, b.evaluate(word)?);
            for &s in s_values {
                out.push(Violation {
                    s,
                    realized_s: s,
                    word: w.clone(),
                    f_a: f_a.clone(),
                    f_b: f_b.clone(),
                });
            }
        }
        Refutation::Witness(report) => {
            let inst = &report.instance;
            for &s in s_values {
                let mut t = s;
                let mut found = None;
                for _ in 0..=MAX_ESCALATIONS {
                    let r = realize(&report.derivation, t, &inst.a, &inst.b)?;
                    let w = pull_back_rle(&inst.letter_map, &r.word)?;
                    let f_a = inst.original_a.evaluate_rle(&w)?;
                    let f_b = inst.original_b.evaluate_rle(&w)?;
                    if violates(&f_a, &f_b, s) {
                        found = Some(Violation {
                            s,
                            realized_s: t,
                            word: w,
                            f_a,
                            f_b,
                        });
                        break;
                    }
                    t = t.checked_mul(2).map(|x| x.max(1)).ok_or(Error::Overflow("escalating s"))?;
                }
                match found {
                    Some(v) => out.push(v),
                    None => {
                        return Err(Error::DerivationMismatch(format!(
                            "no violating word found for s = {s}"
                        )))
                    }
                }
            }
        }
    }
    Ok(Some(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::{decide_bigo, DecideOptions, SearchMethod};
    use crate::fixtures::{running_a, running_b};
    use crate::semigroup::{asymptotic_closure, generators, ClosureConfig};
    use crate::semiring::nmax;

    fn running_derivation() -> Derivation {
        let ga = Derivation::generator(0, 0, 0);
        let gb = Derivation::generator(1, 0, 0);
        Derivation::flatten(&Derivation::product(
            &Derivation::product(&ga, &gb),
            &Derivation::product(&Derivation::stabilise(&ga), &gb),
        ))
    }

    #[test]
    fn running_family() {
        let (a, b) = (running_a(), running_b());
        for s in 1..4u64 {
            let r = realize(&running_derivation(), s, &a, &b).unwrap();
            let expected = a
                .alphabet()
                .parse_word(&format!("(a b a^{} b)^{}", 20 * s, 80 * s + 1))
                .unwrap();
            assert_eq!(r.word.expand(1 << 24).unwrap(), expected.expand(1 << 24).unwrap());
            // The run weight is (20s + 3)(80s + 1).
            assert_eq!(r.weight, nmax((20 * s + 3) * (80 * s + 1)));
        }
        let r = realize(&running_derivation(), 1, &a, &b).unwrap();
        assert_eq!(r.word.display(a.alphabet()).to_string(), "(a b a^20 b)^81");
    }

    #[test]
    fn small_derivations() {
        let (a, b) = (running_a(), running_b());
        let ga = Derivation::generator(0, 0, 0);
        let r = realize(&ga, 7, &a, &b).unwrap();
        assert_eq!(r.word, RleWord::letter(0));
        assert_eq!(r.weight, nmax(1));
        for s in 1..5 {
            let r = realize(&Derivation::stabilise(&ga), s, &a, &b).unwrap();
            assert_eq!(r.word.expand(1000).unwrap().len() as u64, 5 * s);
        }
    }

    #[test]
    fn every_closure_element_realizes() {
        let (a, b) = (running_a(), running_b());
        let gens = generators(&a, &b).unwrap();
        let asym = asymptotic_closure(&gens, ClosureConfig::default()).unwrap();
        for (e, d) in asym.iter() {
            if e.is_bot() {
                continue;
            }
            for s in 0..3 {
                let r = realize(d, s, &a, &b).unwrap();
                assert!(verify_realization(e, &r.word, &r.weight, s, &a, &b), "{e} at s = {s}");
            }
        }
    }

    #[test]
    fn verification_rejects_wrong_claims() {
        let (a, b) = (running_a(), running_b());
        let d = running_derivation();
        let e = d.eval(&a, &b).unwrap();
        let r = realize(&d, 1, &a, &b).unwrap();
        assert!(verify_realization(&e, &r.word, &r.weight, 1, &a, &b));
        assert!(!verify_realization(&e, &r.word, &nmax(5), 1, &a, &b));
        assert!(!verify_realization(&e, &RleWord::letter(0), &nmax(1), 1, &a, &b));
    }

    #[test]
    fn running_example_violations() {
        let (a, b) = (running_a(), running_b());
        for method in [SearchMethod::Exhaustive, SearchMethod::Tractable] {
            let options = DecideOptions {
                method,
                ..DecideOptions::default()
            };
            let verdict = decide_bigo(&a, &b, &options).unwrap();
            let family = violation_family(&verdict, &[1, 2, 3, 4, 5]).unwrap().unwrap();
            for v in &family {
                assert!(v.holds());
                assert_eq!(a.evaluate_rle(&v.word).unwrap(), v.f_a);
                assert_eq!(b.evaluate_rle(&v.word).unwrap(), v.f_b);
            }
            let bigo = decide_bigo(&b, &a, &options).unwrap();
            assert!(violation_family(&bigo, &[1]).unwrap().is_none());
        }
    }
}
