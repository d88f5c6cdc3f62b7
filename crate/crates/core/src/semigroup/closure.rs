use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use crate::automaton::MaxPlusAutomaton;
use crate::error::{Error, Result};
use crate::semiring::{Bar, BarValue, OmegaValue, Semiring};

use super::derivation::Derivation;
use super::element::{generator_element, AsympElement, Element, PathElement};

pub const DEFAULT_SEMIGROUP_CAP: usize = 1_000_000;

/// Which end of the worklist the closure takes its next element from. The
/// resulting set does not depend on it; only insertion order does.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WorklistOrder {
    #[default]
    Fifo,
    Lifo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureConfig {
    pub cap: usize,
    pub order: WorklistOrder,
}

impl Default for ClosureConfig {
    fn default() -> Self {
        ClosureConfig {
            cap: DEFAULT_SEMIGROUP_CAP,
            order: WorklistOrder::Fifo,
        }
    }
}

/// A finite set of elements in insertion order, each with the first
/// derivation that produced it.
#[derive(Clone, Debug)]
pub struct Closure<V> {
    elements: Vec<Element<V>>,
    derivations: Vec<Derivation>,
    index: HashMap<Element<V>, usize>,
    cap: usize,
}

impl<V: Semiring + Bar + Eq + Hash> Closure<V> {
    fn new(cap: usize) -> Self {
        Closure {
            elements: Vec::new(),
            derivations: Vec::new(),
            index: HashMap::new(),
            cap,
        }
    }

    /// Inserts `e` unless already present; returns its index if it is new.
    fn insert(&mut self, e: Element<V>, d: Derivation) -> Result<Option<usize>> {
        if self.index.contains_key(&e) {
            return Ok(None);
        }
        if self.elements.len() >= self.cap {
            return Err(Error::CapExceeded {
                what: "semigroup elements",
                cap: self.cap,
            });
        }
        let i = self.elements.len();
        self.index.insert(e.clone(), i);
        self.elements.push(e);
        self.derivations.push(d);
        Ok(Some(i))
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element<V>] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &Element<V> {
        &self.elements[i]
    }

    pub fn derivation(&self, i: usize) -> &Derivation {
        &self.derivations[i]
    }

    pub fn position(&self, e: &Element<V>) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn contains(&self, e: &Element<V>) -> bool {
        self.index.contains_key(e)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Element<V>, &Derivation)> {
        self.elements.iter().zip(&self.derivations)
    }
}

/// One generator per transition `p --a:x--> q` of `A`, in letter-major
/// order; duplicates keep their first derivation.
pub fn generators(a: &MaxPlusAutomaton, b: &MaxPlusAutomaton) -> Result<Vec<(PathElement, Derivation)>> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch("A and B must use the same alphabet".into()));
    }
    let mut out: Vec<(PathElement, Derivation)> = Vec::new();
    for letter in a.alphabet().letters() {
        for (p, q, _) in a.trans(letter).entries().filter(|(_, _, x)| x.is_finite()) {
            let e = generator_element(a, b, letter, p, q).expect("finite transition");
            if !out.iter().any(|(f, _)| *f == e) {
                out.push((e, Derivation::generator(letter, p, q)));
            }
        }
    }
    Ok(out)
}

fn pop<T>(queue: &mut VecDeque<T>, order: WorklistOrder) -> Option<T> {
    match order {
        WorklistOrder::Fifo => queue.pop_front(),
        WorklistOrder::Lifo => queue.pop_back(),
    }
}

/// The semigroup of paths: the closure of the generators under product.
pub fn paths_closure(gens: &[(PathElement, Derivation)], config: ClosureConfig) -> Result<Closure<BarValue>> {
    let mut closure = Closure::new(config.cap);
    let mut queue = VecDeque::new();
    for (e, d) in gens {
        if let Some(i) = closure.insert(e.clone(), d.clone())? {
            queue.push_back(i);
        }
    }
    // Every element is a product of generators, so right multiplication by
    // generators reaches all of them.
    while let Some(i) = pop(&mut queue, config.order) {
        if closure.get(i).is_bot() {
            continue;
        }
        for (g, dg) in gens {
            let e = closure.get(i).mul(g);
            let d = Derivation::product(closure.derivation(i), dg);
            if let Some(j) = closure.insert(e, d)? {
                queue.push_back(j);
            }
        }
    }
    Ok(closure)
}

/// The semigroup of asymptotic behaviours: the lifted generators closed
/// under product, stabilisation and flattening (the last two applied to
/// path-idempotent elements only).
pub fn asymptotic_closure(
    gens: &[(PathElement, Derivation)],
    config: ClosureConfig,
) -> Result<Closure<OmegaValue>> {
    let mut closure: Closure<OmegaValue> = Closure::new(config.cap);
    let mut queue = VecDeque::new();
    for (e, d) in gens {
        if let Some(i) = closure.insert(e.lift(), d.clone())? {
            queue.push_back(i);
        }
    }
    // When an element is processed it is multiplied on both sides with every
    // element present, so each pair is covered once the later one is popped.
    while let Some(i) = pop(&mut queue, config.order) {
        let e = closure.get(i).clone();
        if e.is_bot() {
            continue;
        }
        let de = closure.derivation(i).clone();
        let mut fresh: Vec<(AsympElement, Derivation)> = Vec::new();
        if e.is_path_idempotent()? {
            fresh.push((e.stabilise()?, Derivation::stabilise(&de)));
            fresh.push((e.flatten()?, Derivation::flatten(&de)));
        }
        let mut j = 0;
        while j < closure.len() {
            let f = closure.get(j);
            if !f.is_bot() {
                let df = closure.derivation(j);
                fresh.push((e.mul(f), Derivation::product(&de, df)));
                fresh.push((f.mul(&e), Derivation::product(df, &de)));
            }
            j += 1;
            for (x, d) in fresh.drain(..) {
                if let Some(k) = closure.insert(x, d)? {
                    queue.push_back(k);
                }
            }
        }
    }
    Ok(closure)
}

/// Upper bound on the size of the semigroup of paths:
/// `|Q_A|²·3·3^{|Q_B|²} + 1` (the `+1` for `⊥`). `None` on overflow.
pub fn paths_size_bound(qa: usize, qb: usize) -> Option<u128> {
    let cells = u32::try_from(qb.checked_mul(qb)?).ok()?;
    (qa as u128)
        .checked_mul(qa as u128)?
        .checked_mul(3)?
        .checked_mul(3u128.checked_pow(cells)?)?
        .checked_add(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{running_a, running_b};
    use crate::matrix::{bar_matrix, omega_matrix};
    use crate::semiring::{BarValue, OmegaValue};
    use std::collections::HashSet;

    fn running_gens() -> Vec<(PathElement, Derivation)> {
        generators(&running_a(), &running_b()).unwrap()
    }

    fn pe(m: &str) -> PathElement {
        Element::new(0, BarValue::One, 0, bar_matrix(m))
    }

    fn ae(x: OmegaValue, m: &str) -> AsympElement {
        Element::new(0, x, 0, omega_matrix(m))
    }

    #[test]
    fn running_generators() {
        let gens = running_gens();
        assert_eq!(gens.len(), 2);
        assert_eq!(gens[0].0, pe("0 - - -; - 1 - -; - - 0 -; - - - 0"));
        assert_eq!(gens[1].0, pe("0 0 - -; - - 0 -; - - 0 -; - - - 1"));
    }

    #[test]
    fn paths_closure_matches_brute_force() {
        let gens = running_gens();
        let closure = paths_closure(&gens, ClosureConfig::default()).unwrap();
        assert!(closure.contains(&pe("0 0 - -; - - 1 -; - - 0 -; - - - 1")));
        assert!(closure.contains(&pe("0 0 0 -; - - 0 -; - - 0 -; - - - 1")));
        assert!(closure.len() >= 4);

        // Products of all words up to length 6 already reach every element.
        let mut seen = HashSet::new();
        let mut layer = vec![PathElement::Bot; 0];
        for (g, _) in &gens {
            layer.push(g.clone());
        }
        for _ in 0..6 {
            let mut next = Vec::new();
            for e in &layer {
                seen.insert(e.clone());
                for (g, _) in &gens {
                    next.push(e.mul(g));
                }
            }
            layer = next;
        }
        let closed: HashSet<_> = closure.elements().iter().cloned().collect();
        assert_eq!(seen, closed);
    }

    #[test]
    fn trivial_closures() {
        let idem = vec![(pe("0 - ; - 0"), Derivation::generator(0, 0, 0))];
        assert_eq!(paths_closure(&idem, ClosureConfig::default()).unwrap().len(), 1);
        assert!(paths_closure(&[], ClosureConfig::default()).unwrap().is_empty());
        assert!(asymptotic_closure(&[], ClosureConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn asymptotic_closure_contains_reference_elements() {
        let closure = asymptotic_closure(&running_gens(), ClosureConfig::default()).unwrap();
        for (x, m) in [
            (OmegaValue::Inf, "0 - - -; - i - -; - - 0 -; - - - 0"),
            (OmegaValue::Inf, "0 0 - -; - - i -; - - 0 -; - - - 1"),
            (OmegaValue::Inf, "0 0 i -; - - i -; - - 0 -; - - - 1"),
            (OmegaValue::Inf, "0 0 i -; - - i -; - - 0 -; - - - i"),
            (OmegaValue::Inf, "0 0 1 -; - - 1 -; - - 0 -; - - - 1"),
        ] {
            assert!(closure.contains(&ae(x, m)), "{m}");
        }
        // Every derivation replays to its element.
        let (a, b) = (running_a(), running_b());
        for (e, d) in closure.iter() {
            assert_eq!(&d.eval(&a, &b).unwrap(), e);
        }
    }

    #[test]
    fn closure_set_is_independent_of_worklist_order() {
        let gens = running_gens();
        let mut reversed = gens.clone();
        reversed.reverse();
        let fifo = asymptotic_closure(&gens, ClosureConfig::default()).unwrap();
        let lifo = asymptotic_closure(
            &reversed,
            ClosureConfig {
                order: WorklistOrder::Lifo,
                ..ClosureConfig::default()
            },
        )
        .unwrap();
        let s1: HashSet<_> = fifo.elements().iter().collect();
        let s2: HashSet<_> = lifo.elements().iter().collect();
        assert_eq!(s1, s2);
        let again = asymptotic_closure(&gens, ClosureConfig::default()).unwrap();
        assert_eq!(fifo.elements(), again.elements());
    }

    #[test]
    fn bar_maps_asymptotic_onto_paths() {
        let gens = running_gens();
        let paths = paths_closure(&gens, ClosureConfig::default()).unwrap();
        let asym = asymptotic_closure(&gens, ClosureConfig::default()).unwrap();
        let barred: HashSet<_> = asym.elements().iter().map(Element::bar).collect();
        let expected: HashSet<_> = paths.elements().iter().cloned().collect();
        assert_eq!(barred, expected);
        for e in asym.elements().iter().filter(|e| !e.is_bot()) {
            if e.is_path_idempotent().unwrap() {
                assert_eq!(e.stabilise().unwrap().bar(), e.bar());
                assert_eq!(e.flatten().unwrap().bar(), e.bar());
            }
        }
        for e in paths.elements() {
            if e.is_idempotent() && !e.is_bot() {
                assert_eq!(e.lift().flatten().unwrap(), e.lift());
            }
        }
        assert!((paths.len() as u128) <= paths_size_bound(1, 4).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let config = ClosureConfig {
            cap: 3,
            ..ClosureConfig::default()
        };
        assert!(matches!(
            asymptotic_closure(&running_gens(), config),
            Err(Error::CapExceeded { cap: 3, .. })
        ));
    }
}
