//! Property tests: diagram counting identities, reduction invariance,
//! classification additivity, and signature bounds under fuzzing.

use braidsig::braid::{
    betti, classify, parse_braid_word, reduce, split_components, BraidWord, ClassificationKind,
};
use braidsig::diagram::{build_diagram, chessboard, face_census, Color};
use braidsig::goeritz::{gl_signature, goeritz_matrix, goeritz_matrix_excluding};
use braidsig::seifert::oracle_signature_nullity;
use braidsig::sigcore::{check_tridiagonal_bound, rat, ratio, signature, tridiagonal};
use proptest::prelude::*;

fn arb_word(max_gen: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    prop::collection::vec(1..=max_gen, 1..=max_len)
        .prop_map(|letters| BraidWord::from_letters(letters).unwrap())
}

fn arb_nonsplit(max_gen: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    arb_word(max_gen, max_len).prop_filter("every generator used", |w| {
        (1..=w.generators()).all(|i| w.occurrences(i) > 0)
    })
}

proptest! {
    #[test]
    fn census_identities_hold(word in arb_nonsplit(3, 12)) {
        let diagram = build_diagram(&word).unwrap();
        let census = face_census(&diagram).unwrap();
        let total: usize = census.f.values().sum();
        prop_assert_eq!(total, word.crossings());
        let chess = chessboard(&diagram).unwrap();
        if chess.connected() {
            prop_assert_eq!(chess.h1_black + chess.h1_white, word.crossings());
        }
    }

    #[test]
    fn reduction_preserves_invariants(word in arb_nonsplit(3, 10)) {
        let trace = reduce(&word);
        let out = &trace.result;
        prop_assert!(out.strands() <= word.strands());
        prop_assert!(out.index_sum() <= word.index_sum());
        prop_assert!(!trace.budget_exhausted);
        let before = oracle_signature_nullity(&word).unwrap();
        let after = oracle_signature_nullity(out).unwrap();
        prop_assert_eq!(before, after);
        prop_assert_eq!(betti(&word).unwrap(), betti(out).unwrap());
    }

    #[test]
    fn chessboard_equals_fiber_signature(word in arb_nonsplit(3, 10)) {
        let diagram = build_diagram(&word).unwrap();
        let gl = gl_signature(&diagram).unwrap();
        let (oracle, _) = oracle_signature_nullity(&word).unwrap();
        prop_assert_eq!(gl, oracle);
    }

    #[test]
    fn parse_display_roundtrip(word in arb_word(5, 12)) {
        let text = word.to_string();
        let back = parse_braid_word(&text).unwrap();
        prop_assert_eq!(back, word);
    }

    #[test]
    fn component_counts_add_up(word in arb_word(4, 12)) {
        let c = classify(&word);
        match c.kind {
            ClassificationKind::Split => {
                let (a, b) = c.parts.unwrap();
                prop_assert_eq!(
                    word.closure_components(),
                    a.closure_components() + b.closure_components()
                );
            }
            ClassificationKind::ConnectedSum => {
                let (a, b) = c.parts.unwrap();
                prop_assert_eq!(
                    word.closure_components(),
                    a.closure_components() + b.closure_components() - 1
                );
            }
            _ => {}
        }
    }

    #[test]
    fn split_betti_is_additive(word in arb_word(4, 12)) {
        let parts = split_components(&word);
        let total: i64 = parts
            .iter()
            .map(|p| p.crossings() as i64 - p.generators() as i64)
            .sum();
        prop_assert_eq!(braidsig::braid::betti_total(&word), total);
        for part in &parts {
            // Leaves are nonsplit; the oracle accepts them.
            prop_assert!(oracle_signature_nullity(part).is_ok());
        }
    }

    #[test]
    fn tridiagonal_bounds_both_sides(diag in prop::collection::vec(-5i64..=5, 0..=7)) {
        let lower = check_tridiagonal_bound(&diag);
        prop_assert!(lower.holds, "lower bound fails for {:?}", diag);
        // Mirror bound: sigma <= 1/2 + (sum of positive diagonal entries).
        let sigma = signature(&tridiagonal(&diag)).signature();
        let tr_plus: i64 = diag.iter().filter(|&&d| d > 0).sum();
        prop_assert!(rat(sigma) <= ratio(1, 2) + rat(tr_plus));
        // And the mirror is literally the bound for -M.
        let neg: Vec<i64> = diag.iter().map(|d| -d).collect();
        prop_assert_eq!(
            signature(&tridiagonal(&neg)).signature(),
            // negating all entries of a tridiagonal matrix is a congruence
            // of -M (flip alternate basis vectors), so this equals -sigma
            -sigma
        );
    }

    #[test]
    fn local_entry_rules_audit_is_clean(word in arb_nonsplit(3, 12)) {
        let diagram = build_diagram(&word).unwrap();
        let violations = braidsig::goeritz::audit_entry_rules(&diagram).unwrap();
        prop_assert!(violations.is_empty(), "{:?}", violations);
    }

    #[test]
    fn excluded_face_choice_is_immaterial(word in arb_nonsplit(3, 9)) {
        let diagram = build_diagram(&word).unwrap();
        let chess = chessboard(&diagram).unwrap();
        for surface in [Color::Black, Color::White] {
            let default = goeritz_matrix(&diagram, surface).unwrap();
            // The basis size equals the first Betti number of the surface.
            let h1 = match surface {
                Color::Black => chess.h1_black,
                Color::White => chess.h1_white,
            };
            prop_assert_eq!(default.dim(), h1);
            let faces: Vec<usize> = default
                .basis
                .iter()
                .map(|&(f, _)| f)
                .chain([default.excluded])
                .collect();
            for f in faces {
                let alt = goeritz_matrix_excluding(&diagram, surface, Some(f)).unwrap();
                prop_assert_eq!(alt.sigma(), default.sigma());
                prop_assert_eq!(alt.dim(), default.dim());
            }
        }
    }
}
