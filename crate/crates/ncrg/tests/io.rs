use std::sync::Arc;

use ncrg::io::{
    family_from_json, interaction_from_json, interaction_to_json, propagator_from_json,
    theory_from_json, theory_to_json,
};
use ncrg::renorm::{canonical_family, to_eps, EpsFunction, PropagatorFamily};
use ncrg::scalar::{rat, Rational};
use ncrg::tensor_algebra::random::{random_interaction, rng};
use ncrg::tensor_algebra::{Cell, GradedSpace, NcInteraction, Tensor, Truncation};
use ncrg::Error;

const PLANE: &str = r#"{
  "labels": ["x", "y"],
  "degrees": [0, 0],
  "pairing": [["1", "0"], ["0", "1"]],
  "h": [["1", "0"], ["0", "3"]]
}"#;

fn graded_space() -> Arc<GradedSpace> {
    Arc::new(GradedSpace::new(
        vec!["u".into(), "p".into(), "q".into()],
        vec![0, 1, -1],
    ))
}

#[test]
fn theory_round_trip() {
    let t = theory_from_json(PLANE).unwrap();
    assert_eq!(t.space.labels(), ["x", "y"]);
    assert_eq!(t.h[1][1], rat(3, 1));
    let again = theory_from_json(&theory_to_json(&t).to_string()).unwrap();
    assert_eq!(again, t);
}

#[test]
fn odd_theory_with_operator() {
    let s = r#"{
      "degrees": [0, 1],
      "pairing_degree": -1,
      "pairing": [["0", "1"], ["-1", "0"]],
      "d": [["0", "1"], ["0", "0"]]
    }"#;
    let t = theory_from_json(s).unwrap();
    assert_eq!(t.pairing.degree, -1);
    assert_eq!(t.space.labels(), ["e0", "e1"]);
    assert!(t.d.is_some());
    assert_eq!(theory_from_json(&theory_to_json(&t).to_string()).unwrap(), t);
}

#[test]
fn malformed_theories_are_rejected() {
    for s in [
        r#"{"degrees": [0, 0], "pairing": [["1", "0"], ["0", "0"]]}"#,
        r#"{"degrees": [0, 0], "pairing": [["1", "0"]]}"#,
        r#"{"degrees": [0, 0], "pairing": [["1", "0"], ["0", "1/0"]]}"#,
        r#"{"degrees": [0, 0], "pairing": [["1", "2"], ["3", "1"]]}"#,
        r#"{"degrees": [0], "labels": ["x", "y"], "pairing": [["1"]]}"#,
        r#"{"degrees": [0, 0], "pairing": [["1", "0"], ["0", "1"]], "h": [["0", "1"], ["0", "0"]]}"#,
        r#"{"degrees": []}"#,
        "not json",
    ] {
        assert!(theory_from_json(s).is_err(), "{s}");
    }
}

#[test]
fn interaction_round_trip() {
    let space = graded_space();
    for seed in 0..4 {
        let i = random_interaction(&mut rng(seed), &space, Truncation::new(2, 3), 8, |_| true);
        let text = interaction_to_json(&i).to_string();
        assert_eq!(interaction_from_json::<Rational>(&text, &space).unwrap(), i);
        let e = to_eps(&i);
        let text = interaction_to_json(&e).to_string();
        assert_eq!(interaction_from_json::<EpsFunction>(&text, &space).unwrap(), e);
    }
}

#[test]
fn terms_expand_like_words() {
    let space = graded_space();
    let s = r#"{"nmax": 1, "lmax": 3, "terms": [
        {"i": 0, "j": 0, "k": 1, "l": 3, "r": [3], "coefficient": "2/3", "word": ["u", "p", "q"]},
        {"i": 0, "j": 0, "k": 2, "l": 3, "r": [2, 1], "coefficient": "-1", "word": ["u", "p", "q"]}
    ]}"#;
    let i: NcInteraction<Rational> = interaction_from_json(s, &space).unwrap();
    let mut expected = NcInteraction::new(space.clone(), Truncation::new(1, 3));
    expected.add_word(Cell::new(0, 0, 1, 3), &[3], rat(2, 3), &[0, 1, 2]);
    expected.add_word(Cell::new(0, 0, 2, 3), &[1, 2], rat(-1, 1), &[0, 1, 2]);
    assert_eq!(i, expected);
}

#[test]
fn cutoff_coefficients_are_parsed() {
    let space = graded_space();
    let s = r#"{"nmax": 0, "lmax": 3, "terms": [
        {"i": 0, "j": 0, "k": 1, "l": 3, "r": [3], "coefficient": "1/e + log(e)", "word": ["u", "u", "u"]}
    ]}"#;
    let i: NcInteraction<EpsFunction> = interaction_from_json(s, &space).unwrap();
    let t = i.get(&Cell::new(0, 0, 1, 3), &[3]).unwrap();
    assert_eq!(t.get(&[0, 0, 0]), EpsFunction::parse("3/e + 3*log(e)").unwrap());
}

#[test]
fn malformed_interactions_are_rejected() {
    let space = graded_space();
    let bad = [
        // Not cyclically invariant.
        r#"{"nmax": 0, "lmax": 3, "components": [{"i": 0, "j": 0, "k": 1, "l": 3, "r": [3],
            "entries": [{"word": ["u", "p", "q"], "value": "1"}]}]}"#,
        // Outside the truncation.
        r#"{"nmax": 0, "lmax": 3, "terms": [{"i": 0, "j": 1, "k": 1, "l": 3, "r": [3],
            "coefficient": "1", "word": ["u", "u", "u"]}]}"#,
        // Cycle lengths do not fit the cell.
        r#"{"nmax": 1, "lmax": 3, "terms": [{"i": 0, "j": 0, "k": 2, "l": 3, "r": [3],
            "coefficient": "1", "word": ["u", "u", "u"]}]}"#,
        // Unknown label.
        r#"{"nmax": 0, "lmax": 3, "terms": [{"i": 0, "j": 0, "k": 1, "l": 3, "r": [3],
            "coefficient": "1", "word": ["u", "u", "z"]}]}"#,
        // Word of the wrong length.
        r#"{"nmax": 0, "lmax": 3, "terms": [{"i": 0, "j": 0, "k": 1, "l": 3, "r": [3],
            "coefficient": "1", "word": ["u", "u"]}]}"#,
        // Nonzero degree.
        r#"{"nmax": 0, "lmax": 3, "terms": [{"i": 0, "j": 0, "k": 1, "l": 3, "r": [3],
            "coefficient": "1", "word": ["u", "u", "p"]}]}"#,
        // Bad coefficient.
        r#"{"nmax": 0, "lmax": 3, "terms": [{"i": 0, "j": 0, "k": 1, "l": 3, "r": [3],
            "coefficient": "one", "word": ["u", "u", "u"]}]}"#,
    ];
    for s in bad {
        assert!(interaction_from_json::<Rational>(s, &space).is_err(), "{s}");
    }
}

#[test]
fn numeric_labels_refer_to_indices() {
    let space = Arc::new(GradedSpace::with_degrees(&[0, 0]));
    let s = r#"{"nmax": 0, "lmax": 3, "terms": [{"i": 0, "j": 0, "k": 1, "l": 3, "r": [3],
        "coefficient": "1", "word": ["0", "e1", "1"]}]}"#;
    let i: NcInteraction<Rational> = interaction_from_json(s, &space).unwrap();
    let mut expected = NcInteraction::new(space, Truncation::new(0, 3));
    expected.add_word(Cell::new(0, 0, 1, 3), &[3], rat(1, 1), &[0, 1, 1]);
    assert_eq!(i, expected);
}

#[test]
fn propagator_files() {
    let space = GradedSpace::with_degrees(&[0, 0]);
    let p = propagator_from_json(r#"{"matrix": [["1", "1/2"], ["1/2", "0"]]}"#, &space).unwrap();
    assert_eq!(
        p,
        Tensor::from_entries(
            2,
            [(vec![0, 0], rat(1, 1)), (vec![0, 1], rat(1, 2)), (vec![1, 0], rat(1, 2))]
        )
    );
    assert!(propagator_from_json(r#"{"matrix": [["1"]]}"#, &space).is_err());
}

#[test]
fn family_files() {
    let theory = theory_from_json(PLANE).unwrap();
    let canonical = family_from_json("{}", &theory).unwrap();
    assert_eq!(canonical, canonical_family(&theory).unwrap());

    let injected = family_from_json(
        r#"{"base": "zero", "regular": [["1", "0"], ["0", "0"]], "singular": [["0", "0"], ["0", "2"]]}"#,
        &theory,
    )
    .unwrap();
    let expected = PropagatorFamily::injected(
        theory.space.clone(),
        &Tensor::from_entries(2, [(vec![0, 0], rat(1, 1))]),
        &Tensor::from_entries(2, [(vec![1, 1], rat(2, 1))]),
    )
    .unwrap();
    assert_eq!(injected, expected);

    let overridden = family_from_json(
        r#"{"entries": [{"word": ["y", "y"], "value": "2/e - 2/L"}]}"#,
        &theory,
    )
    .unwrap();
    assert_eq!(
        overridden.tensor().get(&[1, 1]),
        EpsFunction::parse("2/e - 2/L").unwrap()
    );
    assert_eq!(
        overridden.tensor().get(&[0, 0]),
        canonical.tensor().get(&[0, 0])
    );
}

#[test]
fn malformed_families_are_rejected() {
    let theory = theory_from_json(PLANE).unwrap();
    for s in [
        r#"{"base": "other"}"#,
        r#"{"entries": [{"word": ["x", "y"], "value": "L"}]}"#,
        r#"{"entries": [{"word": ["x", "x"], "value": "L + e"}]}"#,
        r#"{"entries": [{"word": ["x"], "value": "L"}]}"#,
        r#"{"entries": [{"word": ["x", "x"], "value": "L +"}]}"#,
    ] {
        assert!(family_from_json(s, &theory).is_err(), "{s}");
    }
    let err = family_from_json(r#"{"base": "other"}"#, &theory).unwrap_err();
    assert!(matches!(err, Error::Parse(_)));
}
