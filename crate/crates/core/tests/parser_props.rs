mod common;

use common::poly;
use germlab::parse::{parse_bytes, parse_germ, render, render_default};
use germlab::{MapGerm, Poly};
use proptest::prelude::*;

fn germ() -> impl Strategy<Value = MapGerm> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(n, m)| {
        proptest::collection::vec(poly(n, 5, 4), m).prop_map(move |comps| {
            let comps = comps.into_iter().map(|p| &p - &Poly::constant(n, p.constant_term())).collect();
            MapGerm::new(n, comps).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn render_then_parse_is_identity(g in germ()) {
        let back = parse_germ(&render_default(&g)).unwrap();
        prop_assert_eq!(&back.germ, &g);
        let names: Vec<String> = (0..g.src_dim()).map(|i| format!("v_{i}")).collect();
        prop_assert_eq!(parse_germ(&render(&g, &names)).unwrap().germ, g);
    }

    #[test]
    fn arbitrary_bytes_never_panic(bytes in proptest::collection::vec(any::<u8>(), 0..64)) {
        let _ = parse_bytes(&bytes);
    }

    #[test]
    fn grammar_shaped_noise_never_panics(
        toks in proptest::collection::vec(
            prop_oneof![
                Just("x1"), Just("x2"), Just("+"), Just("-"), Just("*"), Just("/"), Just("^"),
                Just("("), Just(")"), Just(";"), Just("3"), Just("0"), Just("vars:"), Just(","),
                Just("|"), Just("params:"), Just("="), Just("\n"), Just("#"), Just("99"),
            ],
            0..40,
        )
    ) {
        let text = toks.concat();
        if let Err(e) = parse_germ(&text) {
            prop_assert!(e.line >= 1 && e.col >= 1 && e.span.0 <= e.span.1 && e.span.1 <= text.len() + 1);
        }
    }
}
