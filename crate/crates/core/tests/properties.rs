mod common;

use common::*;
use invlam::ccg::{Chart, ChartConfig, RuleSet};
use invlam::corpus::{match_sr, EvalReport, MatchOptions};
use invlam::inverse::{inverse_l, inverse_r, verify_inverse, Direction};
use invlam::lambda::{alpha_eq, normalize_with, replace, substitute, Signature, Strategy, Term};
use invlam::learner::{checkpoint_text, gradient, parse_checkpoint, Model, TrainConfig};
use invlam::lexicon::{
    generalize_all, generalize_d, normalize_word, Lexicon, LexiconEntry, Origin,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_term(r: &mut impl Rng) -> Term {
    let b = body(r, 3, &[Term::var("x"), Term::var("y")]);
    let b = if r.gen_bool(0.3) {
        Term::app(Term::var("x"), b)
    } else {
        b
    };
    Term::lam("x", Term::lam("y", b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_parse_round_trip(seed in any::<u64>()) {
        let term = random_term(&mut rng(seed));
        let back: Term = term.to_string().parse().unwrap();
        prop_assert_eq!(back, term);
    }

    #[test]
    fn alpha_renaming_preserves_key(seed in any::<u64>()) {
        let term = random_term(&mut rng(seed));
        let Term::Lam(x, b) = &term else { unreachable!() };
        let renamed = Term::lam("fresh", substitute(b, x, &Term::var("fresh")));
        prop_assert!(alpha_eq(&term, &renamed));
        prop_assert_eq!(term.alpha_key(), renamed.alpha_key());
    }

    #[test]
    fn strategies_agree_with_reference(seed in any::<u64>()) {
        let p = inverse_pair(&mut rng(seed));
        let app = Term::app(p.f.clone(), p.g.clone());
        let a = normalize_with(&app, Strategy::LeftmostOutermost, 10_000).unwrap();
        let b = normalize_with(&app, Strategy::Innermost, 10_000).unwrap();
        prop_assert!(alpha_eq(&a, &b));
        let mut fuel = 10_000;
        prop_assert_eq!(db_normalize(&to_db(&app), &mut fuel).unwrap(), to_db(&a));
    }

    #[test]
    fn substitution_of_absent_variable_is_identity(seed in any::<u64>()) {
        let term = random_term(&mut rng(seed));
        prop_assert_eq!(substitute(&term, "absent", &Term::constant("c")), term);
    }

    #[test]
    fn substitution_matches_beta(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = body(&mut r, 3, &[Term::var("x"), Term::var("y")]);
        let s = Term::lam("z", Term::atom("p", vec![Term::var("y"), Term::var("z")]));
        let direct = substitute(&Term::lam("y", b.clone()), "x", &s);
        let via = Term::app(Term::lam("x", Term::lam("y", b)), s);
        let mut fuel = 100;
        prop_assert_eq!(db_normalize(&to_db(&via), &mut fuel).unwrap(), to_db(&direct));
    }

    #[test]
    fn replacing_by_itself_is_identity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let h = body(&mut r, 3, &[]);
        let subs = invlam::lambda::subterms(&h);
        let k = subs.choose(&mut r).unwrap().term.clone();
        prop_assert_eq!(replace(&h, std::slice::from_ref(&k), std::slice::from_ref(&k)), h.clone());
        let v = Term::var("hole");
        let abstracted = Term::lam("hole", replace(&h, std::slice::from_ref(&k), std::slice::from_ref(&v)));
        let mut fuel = 100;
        prop_assert_eq!(db_normalize(&to_db(&Term::app(abstracted, k)), &mut fuel).unwrap(), to_db(&h));
    }

    #[test]
    fn inverse_candidates_are_sound(seed in any::<u64>()) {
        let p = inverse_pair(&mut rng(seed));
        for c in inverse_r(&p.h, &p.f).unwrap().terms() {
            prop_assert!(reduces_to(&p.f, c, &p.h), "right candidate {} for {}", c, p.h);
            prop_assert!(verify_inverse(&p.h, &p.f, c, Direction::Right));
        }
        for c in inverse_l(&p.h, &p.g).unwrap().terms() {
            prop_assert!(reduces_to(c, &p.g, &p.h), "left candidate {} for {}", c, p.h);
            prop_assert!(verify_inverse(&p.h, &p.g, c, Direction::Left));
        }
    }

    #[test]
    fn chart_matches_brute_force_with_composition(seed in any::<u64>()) {
        let opts = random_options(&mut rng(seed));
        let cfg = ChartConfig { rules: RuleSet::with_composition(), beam: 100_000, cell_limit: None };
        let chart = Chart::build(&leaf_items(&opts), &cfg);
        let got: std::collections::BTreeSet<(String, String)> = chart
            .roots()
            .iter()
            .map(|i| (i.node.category.to_string(), i.node.semantics.as_ref().unwrap().alpha_key()))
            .collect();
        prop_assert_eq!(got, brute_force(&opts, true));
    }

    #[test]
    fn parse_probabilities_sum_to_one(weights in proptest::collection::vec(-3.0f64..3.0, 9)) {
        let mut lex = toy_lexicon();
        lex.set_weights(&weights);
        let model = Model::new(lex, ChartConfig { beam: 10_000, cell_limit: None, ..ChartConfig::default() });
        for ex in toy_examples() {
            let total: f64 = model.parses(&ex.tokens).unwrap().iter().map(|p| p.probability()).sum();
            prop_assert!((total - 1.0).abs() <= 1e-9);
            let (_, best) = model.best_parse(&ex.tokens).unwrap();
            prop_assert!(best > 0.0 && best <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn match_sr_is_an_equivalence(seed in any::<u64>()) {
        let mut r = rng(seed);
        let opts = MatchOptions::default();
        let parts: Vec<Term> = (0..3).map(|_| body(&mut r, 2, &[])).collect();
        let perm = |r: &mut ChaCha8Rng| {
            let mut p = parts.clone();
            p.shuffle(r);
            Term::atom("and", p)
        };
        let (a, b, c) = (perm(&mut r), perm(&mut r), perm(&mut r));
        prop_assert!(match_sr(&a, &a, &opts));
        prop_assert_eq!(match_sr(&a, &b, &opts), match_sr(&b, &a, &opts));
        prop_assert!(match_sr(&a, &b, &opts) && match_sr(&b, &c, &opts) && match_sr(&a, &c, &opts));
        let other = body(&mut r, 2, &[]);
        if match_sr(&a, &other, &opts) {
            prop_assert!(match_sr(&b, &other, &opts));
        }
    }

    #[test]
    fn report_counts_are_ordered(total in 0usize..50, a in 0usize..50, b in 0usize..50) {
        let returned = a.min(total);
        let correct = b.min(returned);
        let r = EvalReport::from_counts(returned, correct, total);
        prop_assert!(r.correct <= r.returned && r.returned <= r.total);
        prop_assert!(r.precision <= 100.0 && r.recall <= 100.0 && r.f_measure <= 100.0);
        if r.precision + r.recall > 0.0 {
            prop_assert!((r.f_measure - 2.0 * r.precision * r.recall / (r.precision + r.recall)).abs() < 1e-9);
        }
    }

    #[test]
    fn word_normalization_is_idempotent(w in "[A-Za-z]{1,8}[.,?!]?") {
        let once = normalize_word(&w);
        prop_assert_eq!(normalize_word(&once), once);
    }
}

fn random_lexicon(r: &mut ChaCha8Rng) -> Lexicon {
    let words = [
        "largest", "longest", "smallest", "texas", "ohio", "state", "states", "rivers", "the",
    ];
    let shapes = [
        ("N/N", "\\x.\\y.{w}(y,x@y)"),
        ("NP", "{w}"),
        ("N", "\\x.{w}(x)"),
    ];
    let mut lex = Lexicon::new();
    for _ in 0..r.gen_range(2..8) {
        let w = *words.choose(r).unwrap();
        let (c, s) = *shapes.choose(r).unwrap();
        let sem = if r.gen_bool(0.3) {
            None
        } else {
            Some(t(&s.replace("{w}", w)))
        };
        lex.insert(LexiconEntry::new(
            w,
            cat(c),
            sem,
            r.gen_range(-1.0..1.0),
            Origin::Initial,
        ));
    }
    lex
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn generalize_all_is_idempotent(seed in any::<u64>()) {
        let lex = random_lexicon(&mut rng(seed));
        let once = generalize_all(&lex);
        prop_assert!(once.len() >= lex.len());
        prop_assert_eq!(generalize_all(&once).triples(), once.triples());
    }

    #[test]
    fn generalize_d_only_adds(seed in any::<u64>()) {
        let mut r = rng(seed);
        let lex = random_lexicon(&mut r);
        let mut grown = lex.clone();
        let c = cat(["N/N", "NP", "N"].choose(&mut r).unwrap());
        generalize_d(&mut grown, "biggest", &c);
        prop_assert!(grown.len() >= lex.len());
        for (id, e) in lex.iter() {
            prop_assert_eq!(grown.get(id), e);
        }
    }

    #[test]
    fn checkpoint_round_trip_is_exact(seed in any::<u64>()) {
        let lex = random_lexicon(&mut rng(seed));
        let cfg = TrainConfig { seed, ..TrainConfig::default() };
        let text = checkpoint_text(&lex, &cfg);
        let (back, back_cfg) = parse_checkpoint(&text, &Signature::dynamic()).unwrap();
        prop_assert_eq!(&back, &lex);
        prop_assert_eq!(back.weights(), lex.weights());
        prop_assert_eq!(back_cfg.unwrap().seed, seed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn gradient_matches_finite_differences(weights in proptest::collection::vec(-2.0f64..2.0, 9)) {
        let mut lex = toy_lexicon();
        lex.set_weights(&weights);
        let mut model = Model::new(lex, ChartConfig { beam: 10_000, cell_limit: None, ..ChartConfig::default() });
        let examples = toy_examples();
        let (_, grad) = gradient(&model, &examples);
        let eps = 1e-5;
        for i in 0..weights.len() {
            let mut w = weights.clone();
            w[i] += eps;
            model.lexicon.set_weights(&w);
            let lp = gradient(&model, &examples).0;
            w[i] -= 2.0 * eps;
            model.lexicon.set_weights(&w);
            let lm = gradient(&model, &examples).0;
            let fd = (lp - lm) / (2.0 * eps);
            let tol = 1e-5 * grad[i].abs().max(fd.abs()) + 1e-8;
            prop_assert!((grad[i] - fd).abs() <= tol, "entry {}: {} vs {}", i, grad[i], fd);
        }
    }
}
