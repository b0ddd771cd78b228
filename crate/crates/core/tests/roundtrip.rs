use fdq_core::expr::{parse, parse_symbol, parse_symbol_with, parse_word, print_symbol, print_symbol_with, print_word, Dialect};
use fdq_core::json::{symbol_from_json, symbol_to_json};
use fdq_core::sample::{self, SampleShape};
use fdq_core::{wick_transform, Error, ModeSpace};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn symbols_round_trip_through_text_and_json() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let shape = SampleShape {
        max_degree: 5,
        max_terms: 5,
        max_h_power: 3,
        complex: true,
    };
    for _ in 0..1000 {
        let space = sample::space(&mut rng, 3);
        let s = sample::symbol(&mut rng, space, &shape);
        let text = print_symbol(&s);
        let back = parse_symbol(&text, space).unwrap();
        assert_eq!(back, s, "{text}");
        assert_eq!(print_symbol(&back), text);
        assert_eq!(symbol_from_json(&symbol_to_json(&s)).unwrap(), s);
    }
}

#[test]
fn words_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..200 {
        let space = sample::space(&mut rng, 2);
        let w = sample::word(&mut rng, space, 3, 2);
        let text = print_word(&w);
        let back = parse_word(&text, space).unwrap();
        assert_eq!(back, w, "{text}");
        assert_eq!(print_word(&back), text);
    }
}

#[test]
fn wick_dialect_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let omega = fdq_core::wick::frequencies_from_ints(ModeSpace::new(2).unwrap(), &[1, 3]).unwrap();
    for _ in 0..50 {
        let s = sample::symbol(&mut rng, ModeSpace::new(2).unwrap(), &SampleShape::default());
        let w = wick_transform(&s, &omega).unwrap();
        let text = print_symbol_with(w.inner(), Dialect::WICK);
        assert_eq!(parse_symbol_with(&text, s.space(), Dialect::WICK).unwrap(), *w.inner());
    }
}

#[test]
fn parse_errors_carry_positions() {
    match parse("phi[1]^-2") {
        Err(Error::Parse { pos, .. }) => assert_eq!(pos, 7),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse("phi[1] +"), Err(Error::Parse { .. })));
    assert!(matches!(parse("(phi[1]"), Err(Error::Parse { .. })));
    assert!(matches!(parse("1/0"), Err(Error::Parse { .. }) | Err(Error::Validation(_))));
}
