mod support;

use fibwqed::bound_states::allowed_positions;
use fibwqed::dynamics::{evolve_exact, uniform_grid, Initial, Propagator};
use fibwqed::lattice::{build_coupled, EmitterSpec, WaveguideSpec};
use fibwqed::words::{HoppingSequence, SubstitutionRule, Symbol, SymbolWord};
use num_complex::Complex64;
use proptest::prelude::*;
use support::rewrite_word;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lengths_follow_the_recurrence(p in 1u32..7, q in 1u32..7, k in 2usize..12) {
        let r = SubstitutionRule::new(p, q).unwrap();
        let (p, q) = (p as u128, q as u128);
        let (mut a, mut b) = (1u128, p + 1);
        for _ in 2..=k {
            (a, b) = (b, p * b + q * a);
        }
        prop_assert_eq!(r.word_length(k), Some(b));
    }

    #[test]
    fn words_match_string_rewriting(p in 1u32..4, q in 1u32..4, k in 0usize..7) {
        let w = SubstitutionRule::new(p, q).unwrap().generate(k).unwrap();
        prop_assert_eq!(w.to_string(), rewrite_word(p as usize, q as usize, k));
    }

    #[test]
    fn generations_are_prefixes(p in 1u32..5, q in 1u32..5, k in 0usize..8) {
        let r = SubstitutionRule::new(p, q).unwrap();
        let a = r.generate(k).unwrap().to_string();
        let b = r.generate(k + 1).unwrap().to_string();
        prop_assert!(b.starts_with(&a));
    }

    #[test]
    fn gapped_rules_have_a_on_even_bonds(p in 1u32..7, q in 1u32..7) {
        let r = SubstitutionRule::new(p, q).unwrap();
        let w = r.generate_at_least(400).unwrap();
        let even_a = w.symbols().iter().step_by(2).all(|&s| s == Symbol::A);
        prop_assert_eq!(even_a, r.is_gapped());
    }

    #[test]
    fn allowed_positions_ignore_hopping_values(ta in 0.2f64..3.0, tb in 0.2f64..3.0, d in 1usize..15) {
        prop_assume!((ta - tb).abs() > 1e-3);
        let w = SubstitutionRule::FIBONACCI.generate_at_least(300).unwrap();
        let a = HoppingSequence::new(w.clone(), ta, tb).unwrap();
        let b = HoppingSequence::new(w, 1.0, 0.5).unwrap();
        prop_assert_eq!(allowed_positions(&a, d, 300), allowed_positions(&b, d, 300));
    }

    #[test]
    fn exact_evolution_is_unitary(
        n in 8usize..60, g in 0.01f64..0.5, pos in 0usize..1000, t in 0.0f64..500.0, tb in 0.1f64..1.0,
    ) {
        let spec = WaveguideSpec::fibonacci(SubstitutionRule::new(1, 2).unwrap(), n, tb);
        let h = build_coupled(&spec, &[EmitterSpec::local(pos % n, g)]).unwrap();
        let tr = evolve_exact(&h, &Initial::emitter(0), &uniform_grid(t, 7)).unwrap();
        prop_assert!(tr.max_norm_drift() <= 1e-10);
        for p in &tr.populations[0] {
            prop_assert!(*p >= 0.0 && *p <= 1.0 + 1e-10);
        }

        let prop = Propagator::new(h.matrix()).unwrap();
        let psi0: Vec<Complex64> = (0..h.dim()).map(|i| Complex64::new(((i * 7 + 3) % 11) as f64, 0.0)).collect();
        let back = prop.apply(&prop.apply(&psi0, t), -t);
        for (a, b) in back.iter().zip(&psi0) {
            prop_assert!((a - b).norm() <= 1e-9 * 11.0);
        }
    }
}

#[test]
fn census_examples() {
    let r = SubstitutionRule::FIBONACCI;
    let c = r.census(2).unwrap();
    let f: Vec<String> = c.factors.iter().map(ToString::to_string).collect();
    assert_eq!(f, ["AA", "AB", "BA"]);
    assert!(c.stable);
    // a factor census of length L has L + 1 members for a Sturmian word
    for len in 1..12 {
        assert_eq!(r.census(len).unwrap().factors.len(), len + 1);
    }
    let forbidden: SymbolWord = "BB".parse().unwrap();
    assert!(r.generate(15).unwrap().subword_positions(&forbidden).is_empty());
    let aaa: SymbolWord = "AAA".parse().unwrap();
    assert!(r.generate(15).unwrap().subword_positions(&aaa).is_empty());
}
