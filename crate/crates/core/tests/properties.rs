mod common;

use maxplus_core::counterexample::{realize, verify_realization};
use maxplus_core::decision::{path_element_of, DecideOptions, Refutation, Verdict};
use maxplus_core::factorisation::{build_tree, find_faults, witness_from_fault};
use maxplus_core::fixtures::{running_a, running_b};
use maxplus_core::format::{from_json, to_json};
use maxplus_core::oracle::refute_bigo;
use maxplus_core::semigroup::{asymptotic_closure, generators, ClosureConfig};
use maxplus_core::{decision, NmaxValue, RleWord, Word};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use common::{ab, random_automaton};

fn word_strategy(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0usize..2, 0..=max_len).prop_map(Word)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip(seed in any::<u64>(), det in any::<bool>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let aut = random_automaton(&mut rng, 4, 0.4, det);
        let text = to_json(&aut).unwrap();
        prop_assert_eq!(from_json(&text).unwrap(), aut);
    }

    #[test]
    fn words_print_and_parse_back(w in word_strategy(30)) {
        let alphabet = ab();
        let text = alphabet.format_word(&w);
        let parsed = alphabet.parse_word(&text).unwrap().expand(1000).unwrap();
        prop_assert_eq!(parsed, w);
    }

    #[test]
    fn run_length_evaluation_matches_letters(base in word_strategy(6), k in 0u64..20, tail in word_strategy(5)) {
        let a = running_a();
        let b = running_b();
        let rle = RleWord::concat(vec![RleWord::power(RleWord::from_word(&base), k), RleWord::from_word(&tail)]);
        let flat = rle.expand(1 << 12).unwrap();
        prop_assert_eq!(a.evaluate_rle(&rle).unwrap(), a.evaluate(&flat).unwrap());
        prop_assert_eq!(b.evaluate_rle(&rle).unwrap(), b.evaluate(&flat).unwrap());
    }

    #[test]
    fn leaf_products_are_path_elements(w in word_strategy(40)) {
        prop_assume!(!w.is_empty());
        let (a, b) = (running_a(), running_b());
        let t = build_tree(&w, &a, &b).unwrap();
        let root = t.node(t.root());
        prop_assert_eq!(&root.alpha, &path_element_of(&a, &b, 0, &w).unwrap());
        prop_assert!(t.validate().is_ok());
        for f in find_faults(&t) {
            let (beta, _) = witness_from_fault(&t, f).unwrap();
            prop_assert!(decision::is_witness(&beta, &a, &b));
        }
    }
}

#[test]
fn bigo_verdicts_never_contradict_the_oracle() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..60 {
        let a = random_automaton(&mut rng, 2, 0.6, false);
        let b = random_automaton(&mut rng, 2, 0.6, false);
        let verdict = decision::decide_bigo(&a, &b, &DecideOptions::default()).unwrap();
        if let Verdict::BigO(cert) = verdict {
            assert!(refute_bigo(&a, &b, &cert.constant, 10).is_none());
        } else if let Verdict::NotBigO(Refutation::LanguageGap { word, .. }) = verdict {
            assert!(a.evaluate(&word).unwrap().is_finite());
            assert_eq!(b.evaluate(&word).unwrap(), NmaxValue::NegInf);
        }
    }
}

#[test]
fn asymptotic_elements_are_realized() {
    let (a, b) = (running_a(), running_b());
    let gens = generators(&a, &b).unwrap();
    let closure = asymptotic_closure(&gens, ClosureConfig::default()).unwrap();
    for (e, d) in closure.iter() {
        for s in [1u64, 2] {
            let r = realize(d, s, &a, &b).unwrap();
            assert!(verify_realization(e, &r.word, &r.weight, s, &a, &b), "{}", d.display(a.alphabet()));
        }
    }
}
