//! Witnesses of non-domination and the big-O verdict.

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;

use crate::automaton::MaxPlusAutomaton;
use crate::error::{Error, Result};
use crate::factorisation::{certificate_lambda, HeightConstant};
use crate::matrix::Matrix;
use crate::nfa::DEFAULT_SUBSET_CAP;
use crate::reduction::{simplify, Simplification, SimplifiedInstance};
use crate::semigroup::{
    asymptotic_closure, generators, paths_closure, AsympElement, Closure, ClosureConfig, Derivation,
    Element, PathElement, DEFAULT_SEMIGROUP_CAP,
};
use crate::semiring::{Bar, BarValue, OmegaValue, Semiring};
use crate::word::Word;

/// `(p, ∞, q, M)` with `p` initial and `q` final in `A`, and
/// `Ī_B ⊗ M ⊗ F̄_B < ∞`. `⊥` is never a witness.
pub fn is_witness(e: &AsympElement, a: &MaxPlusAutomaton, b: &MaxPlusAutomaton) -> bool {
    let Element::Path {
        from,
        weight,
        to,
        matrix,
    } = e
    else {
        return false;
    };
    if *weight != OmegaValue::Inf || !a.initial()[*from].is_finite() || !a.finals()[*to].is_finite() {
        return false;
    }
    let n = b.num_states();
    let mut best = OmegaValue::NegInf;
    for i in 0..n {
        let bi = b.initial()[i].bar();
        if bi == BarValue::NegInf {
            continue;
        }
        for j in 0..n {
            let fj = b.finals()[j].bar();
            if fj == BarValue::NegInf {
                continue;
            }
            let v = bi.lift().otimes(matrix.get(i, j)).otimes(&fj.lift());
            best = best.max(v);
        }
    }
    best < OmegaValue::Inf
}

/// Index of the first witness in insertion order.
pub fn find_witness_exhaustive(
    closure: &Closure<OmegaValue>,
    a: &MaxPlusAutomaton,
    b: &MaxPlusAutomaton,
) -> Option<usize> {
    closure.elements().iter().position(|e| is_witness(e, a, b))
}

/// A witness found by the layered search, with the number of nested
/// flattenings it uses.
#[derive(Clone, Debug)]
pub struct TractableWitness {
    pub element: AsympElement,
    pub derivation: Derivation,
    pub depth: usize,
}

/// `3|S̄|`, the default nesting bound of the layered search.
pub fn default_k_max(paths: &Closure<BarValue>) -> usize {
    3 * paths.len()
}

/// Searches witnesses of the shape `g₀(g₁(…(g_k)♯…)♭g′₁)♭g′₀` with the `gᵢ`,
/// `g′ᵢ` in `S̄` or the identity, layer by layer:
/// `R₀ = {e♯}`, `R_{d+1} = {(g·e·g′)♭ : e ∈ R_d}`, checking `g·e·g′` for
/// witnesses at every layer. Elements already met in an earlier layer are
/// not expanded again, which makes the search stop at the fixpoint.
pub fn find_tractable_witness(
    paths: &Closure<BarValue>,
    a: &MaxPlusAutomaton,
    b: &MaxPlusAutomaton,
    k_max: usize,
) -> Result<Option<TractableWitness>> {
    // `None` stands for the identity.
    let mut factors: Vec<Option<(AsympElement, &Derivation)>> = vec![None];
    for (e, d) in paths.iter().filter(|(e, _)| !e.is_bot()) {
        factors.push(Some((e.lift(), d)));
    }
    let by_to = index_by(&factors, |e| e.to_state());
    let by_from = index_by(&factors, |e| e.from_state());

    let mut seen: HashSet<AsympElement> = HashSet::new();
    let mut frontier: Vec<(AsympElement, Derivation)> = Vec::new();
    for (e, d) in paths.iter() {
        if !e.is_bot() && e.is_path_idempotent()? {
            let s = e.lift().stabilise()?;
            if seen.insert(s.clone()) {
                frontier.push((s, Derivation::stabilise(d)));
            }
        }
    }

    for depth in 0..=k_max {
        let mut next = Vec::new();
        for (e, d) in &frontier {
            let (p, q) = (e.from_state().unwrap(), e.to_state().unwrap());
            for &gi in [0].iter().chain(by_to.get(&p).into_iter().flatten()) {
                let (ge, dge) = multiply(&factors[gi], e, d, true);
                for &hi in [0].iter().chain(by_from.get(&q).into_iter().flatten()) {
                    let (x, dx) = multiply(&factors[hi], &ge, &dge, false);
                    if is_witness(&x, a, b) {
                        return Ok(Some(TractableWitness {
                            element: x,
                            derivation: dx,
                            depth,
                        }));
                    }
                    if depth < k_max && x.is_path_idempotent()? {
                        let f = x.flatten()?;
                        if seen.insert(f.clone()) {
                            next.push((f, Derivation::flatten(&dx)));
                        }
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(None)
}

/// Indices (identity excluded) of the factors grouped by a state.
fn index_by(
    factors: &[Option<(AsympElement, &Derivation)>],
    key: impl Fn(&AsympElement) -> Option<usize>,
) -> HashMap<usize, Vec<usize>> {
    let mut map: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, f) in factors.iter().enumerate() {
        if let Some((e, _)) = f {
            if let Some(s) = key(e) {
                map.entry(s).or_default().push(i);
            }
        }
    }
    map
}

fn multiply(
    factor: &Option<(AsympElement, &Derivation)>,
    e: &AsympElement,
    d: &Derivation,
    on_left: bool,
) -> (AsympElement, Derivation) {
    match factor {
        None => (e.clone(), d.clone()),
        Some((g, dg)) if on_left => (g.mul(e), Derivation::product(dg, d)),
        Some((g, dg)) => (e.mul(g), Derivation::product(d, dg)),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SearchMethod {
    /// Materialise the semigroup of asymptotic behaviours and scan it.
    #[default]
    Exhaustive,
    /// Layered search for tractable witnesses over the semigroup of paths.
    Tractable,
}

#[derive(Clone, Copy, Debug)]
pub struct DecideOptions {
    pub method: SearchMethod,
    pub semigroup_cap: usize,
    pub subset_cap: usize,
    /// Nesting bound for the tractable search; `None` means `3|S̄|`.
    pub k_max: Option<usize>,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            method: SearchMethod::Exhaustive,
            semigroup_cap: DEFAULT_SEMIGROUP_CAP,
            subset_cap: DEFAULT_SUBSET_CAP,
            k_max: None,
        }
    }
}

/// Evidence that `A` is big-O of `B`: `f_A ≤ c·f_B + c` with `c = c_H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub constant: BigUint,
    /// `H = 3|S̄|`.
    pub height: usize,
    pub lambda: BigUint,
    pub paths_size: usize,
    pub b_states: usize,
}

#[derive(Clone, Debug)]
pub struct WitnessReport {
    /// Element of the semigroup of asymptotic behaviours of the simplified instance.
    pub element: AsympElement,
    pub derivation: Derivation,
    pub instance: SimplifiedInstance,
    pub method: SearchMethod,
}

#[derive(Clone, Debug)]
pub enum Refutation {
    /// A word accepted by `A` and rejected by `B`.
    LanguageGap {
        word: Word,
        a: Box<MaxPlusAutomaton>,
        b: Box<MaxPlusAutomaton>,
    },
    Witness(Box<WitnessReport>),
}

#[derive(Clone, Debug)]
pub enum Verdict {
    BigO(Certificate),
    NotBigO(Refutation),
}

impl Verdict {
    pub fn is_bigo(&self) -> bool {
        matches!(self, Verdict::BigO(_))
    }
}

/// Sizes gathered while deciding, for reports.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecisionStats {
    pub generators: usize,
    pub paths_size: usize,
    pub asymptotic_size: Option<usize>,
}

pub fn decide_bigo(a: &MaxPlusAutomaton, b: &MaxPlusAutomaton, options: &DecideOptions) -> Result<Verdict> {
    decide_bigo_with_stats(a, b, options).map(|(v, _)| v)
}

pub fn decide_bigo_with_stats(
    a: &MaxPlusAutomaton,
    b: &MaxPlusAutomaton,
    options: &DecideOptions,
) -> Result<(Verdict, DecisionStats)> {
    let instance = match simplify(a, b, options.subset_cap)? {
        Simplification::Immediate { word } => {
            let verdict = Verdict::NotBigO(Refutation::LanguageGap {
                word,
                a: Box::new(a.clone()),
                b: Box::new(b.with_alphabet(a.alphabet())?),
            });
            return Ok((verdict, DecisionStats::default()));
        }
        Simplification::Simplified(s) => s,
    };
    decide_simplified(instance, options)
}

/// Decides an instance that is already simplified.
pub fn decide_simplified(
    instance: SimplifiedInstance,
    options: &DecideOptions,
) -> Result<(Verdict, DecisionStats)> {
    let (a, b) = (&instance.a, &instance.b);
    if !a.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    let config = ClosureConfig {
        cap: options.semigroup_cap,
        ..ClosureConfig::default()
    };
    let gens = generators(a, b)?;
    let paths = paths_closure(&gens, config)?;
    let mut stats = DecisionStats {
        generators: gens.len(),
        paths_size: paths.len(),
        asymptotic_size: None,
    };
    let found = match options.method {
        SearchMethod::Exhaustive => {
            let asym = asymptotic_closure(&gens, config)?;
            stats.asymptotic_size = Some(asym.len());
            find_witness_exhaustive(&asym, a, b)
                .map(|i| (asym.get(i).clone(), asym.derivation(i).clone()))
        }
        SearchMethod::Tractable => {
            let k_max = options.k_max.unwrap_or_else(|| default_k_max(&paths));
            find_tractable_witness(&paths, a, b, k_max)?.map(|w| (w.element, w.derivation))
        }
    };
    let verdict = match found {
        Some((element, derivation)) => Verdict::NotBigO(Refutation::Witness(Box::new(WitnessReport {
            element,
            derivation,
            instance,
            method: options.method,
        }))),
        None => {
            let height = 3 * paths.len();
            let lambda = certificate_lambda(a);
            let c = HeightConstant::new(b.num_states(), height, lambda.clone());
            Verdict::BigO(Certificate {
                constant: c.value,
                height,
                lambda,
                paths_size: paths.len(),
                b_states: b.num_states(),
            })
        }
    };
    Ok((verdict, stats))
}

/// The barred element `(p, x̄, q, M̄)` of a word over a deterministic `A`,
/// or `⊥` when `A` has no run from `p` on it. Used by tests and tools.
pub fn path_element_of(
    a: &MaxPlusAutomaton,
    b: &MaxPlusAutomaton,
    from: usize,
    w: &Word,
) -> Result<PathElement> {
    let Some(run) = a.run_from(from, w)? else {
        return Ok(Element::Bot);
    };
    let to = run.last();
    let x = crate::semiring::NmaxValue::Finite(run.weight).bar();
    let m: Matrix<BarValue> = b.word_matrix(w)?.bar();
    Ok(Element::new(from, x, to, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::AutomatonBuilder;
    use crate::fixtures::{running_a, running_b};
    use crate::matrix::omega_matrix;
    use crate::word::Alphabet;

    fn el(x: OmegaValue, m: &str) -> AsympElement {
        Element::new(0, x, 0, omega_matrix(m))
    }

    #[test]
    fn witness_examples() {
        let (a, b) = (running_a(), running_b());
        assert!(is_witness(&el(OmegaValue::Inf, "0 0 1 -; - - 1 -; - - 0 -; - - - 1"), &a, &b));
        assert!(!is_witness(&el(OmegaValue::One, "0 - - -; - 1 - -; - - 0 -; - - - 0"), &a, &b));
        assert!(!is_witness(&el(OmegaValue::Inf, "0 - - -; - i - -; - - 0 -; - - - 0"), &a, &b));
        assert!(!is_witness(&AsympElement::Bot, &a, &b));
    }

    #[test]
    fn running_example_verdicts() {
        let (a, b) = (running_a(), running_b());
        for method in [SearchMethod::Exhaustive, SearchMethod::Tractable] {
            let options = DecideOptions {
                method,
                ..DecideOptions::default()
            };
            match decide_bigo(&a, &b, &options).unwrap() {
                Verdict::NotBigO(Refutation::Witness(w)) => {
                    assert!(is_witness(&w.element, &w.instance.a, &w.instance.b));
                    assert_eq!(w.derivation.eval(&a, &b).unwrap(), w.element);
                }
                other => panic!("expected a witness, got {other:?}"),
            }
            let Verdict::BigO(cert) = decide_bigo(&b, &a, &options).unwrap() else {
                panic!("B is big-O of A");
            };
            assert!(cert.constant >= BigUint::from(1u32));
            assert!(decide_bigo(&a, &a, &options).unwrap().is_bigo());
        }
    }

    #[test]
    fn tractable_search_finds_a_depth_one_witness() {
        let (a, b) = (running_a(), running_b());
        let gens = generators(&a, &b).unwrap();
        let paths = paths_closure(&gens, ClosureConfig::default()).unwrap();
        let w = find_tractable_witness(&paths, &a, &b, default_k_max(&paths)).unwrap().unwrap();
        assert_eq!(w.depth, 1);
        assert_eq!(w.derivation.flatten_depth(), 1);
        assert!(is_witness(&w.element, &a, &b));
        // With no flattening allowed nothing qualifies.
        assert!(find_tractable_witness(&paths, &a, &b, 0).unwrap().is_none());
    }

    #[test]
    fn zero_weights_never_witness() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let zero = AutomatonBuilder::new(al, ["p"])
            .initial("p", 0)
            .and_then(|x| x.final_weight("p", 0))
            .and_then(|x| x.transition("p", "a", 0, "p"))
            .and_then(|x| x.transition("p", "b", 0, "p"))
            .and_then(|x| x.build())
            .unwrap();
        let b = running_b();
        let gens = generators(&zero, &b).unwrap();
        let asym = asymptotic_closure(&gens, ClosureConfig::default()).unwrap();
        assert!(find_witness_exhaustive(&asym, &zero, &b).is_none());
        assert!(decide_bigo(&zero, &b, &DecideOptions::default()).unwrap().is_bigo());
    }

    #[test]
    fn path_elements_of_words() {
        let (a, b) = (running_a(), running_b());
        let gens = generators(&a, &b).unwrap();
        let ab = path_element_of(&a, &b, 0, &Word(vec![0, 1])).unwrap();
        assert_eq!(ab, gens[0].0.mul(&gens[1].0));
    }
}
