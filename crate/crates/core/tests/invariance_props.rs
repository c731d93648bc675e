mod common;

use common::{label_with_eta, nonzero_rat, orientation_preserving, small_rat, transform};
use germlab::corpus::normal_form_corpus;
use germlab::lowdim::classify_surface;
use germlab::sigma20::{classify_sigma20, classify_sigma20_with, target_normalize};
use germlab::label::{morin_normal_form, sigma20_elli, sigma20_hyp};
use germlab::{analyze, classify, isotopy_class, null_field, Family, MapGerm, Poly, Rat, RatMatrix};
use proptest::prelude::*;

fn corpus_entry() -> impl Strategy<Value = (usize, RatMatrix, RatMatrix)> {
    let corpus = normal_form_corpus();
    (0..corpus.len()).prop_flat_map(move |i| {
        let (n, m) = (corpus[i].germ.src_dim(), corpus[i].germ.tgt_dim());
        (Just(i), orientation_preserving(n), orientation_preserving(m))
    })
}

fn x(n: usize, i: usize) -> Poly {
    Poly::var(n, i)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn labels_survive_linear_changes((i, a, b) in corpus_entry()) {
        let e = &normal_form_corpus()[i];
        let g = transform(&e.germ, &a, &b);
        prop_assert_eq!(classify(&g).unwrap().label, classify(&e.germ).unwrap().label, "{}", e.name);
    }

    #[test]
    fn morin_labels_survive_linear_changes(
        (n, k, e1, e2, a, b) in (1usize..=5).prop_flat_map(|n| (
            Just(n), 1..=n, prop_oneof![Just(1i8), Just(-1i8)], prop_oneof![Just(1i8), Just(-1i8)],
            orientation_preserving(n), orientation_preserving(n),
        ))
    ) {
        let f = morin_normal_form(n, k, e1, e2);
        prop_assert_eq!(isotopy_class(&transform(&f, &a, &b)).unwrap(), isotopy_class(&f).unwrap());
    }

    #[test]
    fn rank_survives_linear_changes((i, a, b) in corpus_entry()) {
        let f = &normal_form_corpus()[i].germ;
        let (before, after) = (analyze(f), analyze(&transform(f, &a, &b)));
        prop_assert_eq!((before.rank0, before.corank0), (after.rank0, after.corank0));
    }

    #[test]
    fn null_field_identity((i, a, b) in corpus_entry()) {
        let f = transform(&normal_form_corpus()[i].germ, &a, &b);
        let info = analyze(&f);
        prop_assume!(f.src_dim() == f.tgt_dim() && info.corank0 == 1);
        let eta = null_field(&f).unwrap();
        let lambda = info.lambda.unwrap();
        let j = f.jacobian();
        let n = f.src_dim();
        let mut hits = 0;
        for r in 0..n {
            let mut acc = Poly::zero(n);
            for c in 0..n {
                acc = &acc + &(j.get(r, c) * &eta.components()[c]);
            }
            if acc == lambda || acc == -&lambda {
                hits += 1;
            } else {
                prop_assert!(acc.is_zero());
            }
        }
        prop_assert_eq!(hits, 1);
        let e0 = eta.at_origin();
        prop_assert!(e0.iter().any(|v| !v.is_zero()));
        prop_assert!(f.linear_part().mul_vec(&e0).unwrap().iter().all(Rat::is_zero));
    }

    #[test]
    fn eta_rescaling_keeps_labels(
        i in 0usize..30,
        c in nonzero_rat(),
        lin in proptest::collection::vec(small_rat(), 4),
    ) {
        let e = &normal_form_corpus()[i];
        let n = e.germ.src_dim();
        let mut phi = Poly::constant(n, c);
        for (j, l) in lin.iter().take(n).enumerate() {
            phi = &phi + &x(n, j).scale(l);
        }
        prop_assert_eq!(label_with_eta(&e.germ, &phi), classify(&e.germ).unwrap().label, "{}", e.name);
    }

    #[test]
    fn umbilic_kernel_basis_independence(
        which in 0usize..6,
        p in proptest::collection::vec(-3i64..=3, 4).prop_filter("singular", |v| v[0] * v[3] != v[1] * v[2]),
    ) {
        let f = if which < 2 { sigma20_hyp([1, -1][which]) } else { sigma20_elli([1, -1][which % 2], [1, -1][which / 4]) };
        let base = classify_sigma20(&f).unwrap();
        let kernel = target_normalize(&f).unwrap().0.linear_part().nullspace();
        let comb = |s: i64, t: i64| -> Vec<Rat> {
            kernel[0].iter().zip(&kernel[1]).map(|(u, v)| &(u * &Rat::int(s)) + &(v * &Rat::int(t))).collect()
        };
        let r = classify_sigma20_with(&f, &comb(p[0], p[1]), &comb(p[2], p[3])).unwrap();
        let d2 = Rat::int((p[0] * p[3] - p[1] * p[2]).pow(2));
        prop_assert_eq!(&r.big_det, &(&base.big_det * &d2));
        prop_assert_eq!(&r.hess_det, &(&base.hess_det * &d2));
        prop_assert_eq!(r.label, base.label);
    }

    #[test]
    fn umbilic_target_and_source_independence(
        which in 0usize..6,
        a in orientation_preserving(4),
        b in orientation_preserving(4),
    ) {
        let f = if which < 2 { sigma20_hyp([1, -1][which]) } else { sigma20_elli([1, -1][which % 2], [1, -1][which / 4]) };
        let base = classify_sigma20(&f).unwrap();
        let t = classify_sigma20(&f.compose_target(&b).unwrap()).unwrap();
        prop_assert_eq!(&t.label, &base.label);
        prop_assert_eq!(t.big_det_sign(), base.big_det_sign());
        let s = classify_sigma20(&f.compose_source(&a).unwrap()).unwrap();
        prop_assert_eq!(&s.label, &base.label);
        prop_assert_eq!(s.hess_det_sign(), base.hess_det_sign());
    }

    /// `(x1², x1 h(x1², x2), x2)` with `h(0) = 0`: the surface criteria are
    /// `ξw(0) = -2 h_v(0)`, and when that vanishes
    /// `det hess w(0) = -24 h_vv(0) h_u(0)` and `ηηw(0) = 12 h_u(0)`.
    #[test]
    fn surface_criteria_from_h(
        coeffs in proptest::collection::vec(small_rat(), 6),
        hv in small_rat(),
    ) {
        // h(u, v) = hv v + a u + b u v + c v² + d u² + e v³ + g u v²
        let (u, v) = (x(2, 0).pow(2), x(2, 1));
        let parts = [u.clone(), &u * &v, v.pow(2), u.pow(2), v.pow(3), &u * &v.pow(2)];
        let mut h = v.scale(&hv);
        for (c, m) in coeffs.iter().zip(&parts) {
            h = &h + &m.scale(c);
        }
        let f = MapGerm::new(2, vec![x(2, 0).pow(2), &x(2, 0) * &h, x(2, 1)]).unwrap();
        let c = classify_surface(&f).unwrap();
        let value = |name: &str| c.criteria.iter().find(|k| k.name == name).map(|k| k.value.to_string());
        prop_assert_eq!(value("d w/dx2"), Some((&hv * &Rat::int(-2)).to_string()));
        if hv.is_zero() {
            let (hu, hvv) = (&coeffs[0], &coeffs[2] * &Rat::int(2));
            prop_assert_eq!(value("det hess w"), Some((&(&hvv * hu) * &Rat::int(-24)).to_string()));
            prop_assert_eq!(value("eta^2 w"), Some((hu * &Rat::int(12)).to_string()));
        } else {
            prop_assert_eq!(c.label.family, Family::WhitneyUmbrella);
        }
    }
}

#[test]
fn eta_reversal_over_corpus() {
    for e in normal_form_corpus() {
        let n = e.germ.src_dim();
        let base = classify(&e.germ).unwrap().label;
        for c in [-1, 2, -3] {
            assert_eq!(label_with_eta(&e.germ, &Poly::constant(n, Rat::int(c))), base, "{} with {c}", e.name);
        }
    }
}

#[test]
fn umbilic_class_counts() {
    use std::collections::HashSet;
    let hyp: HashSet<_> = [1, -1].map(|e| classify_sigma20(&sigma20_hyp(e)).unwrap().label).into();
    let elli: HashSet<_> = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
        .map(|(a, b)| classify_sigma20(&sigma20_elli(a, b)).unwrap().label)
        .into();
    assert_eq!((hyp.len(), elli.len()), (2, 4));
}

#[test]
fn plane_agrees_with_morin_on_fold_and_cusp() {
    use germlab::lowdim::classify_plane;
    for (k, e1) in [(1, 1), (1, -1), (2, 1), (2, -1)] {
        let f = morin_normal_form(2, k, e1, 1);
        assert_eq!(classify_plane(&f).unwrap().label, isotopy_class(&f).unwrap());
    }
}
