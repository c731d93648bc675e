mod common;

use common::poly;
use germlab::{PolyMatrix, Poly, Rat};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(a in poly(3, 5, 3), b in poly(3, 5, 3), c in poly(3, 5, 3)) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Poly::one(3), a.clone());
    }

    #[test]
    fn mixed_partials_commute(p in poly(3, 6, 4), i in 0usize..3, j in 0usize..3) {
        let pij = p.partial(i).unwrap().partial(j).unwrap();
        let pji = p.partial(j).unwrap().partial(i).unwrap();
        prop_assert_eq!(pij, pji);
    }

    #[test]
    fn adjugate_identity(
        n in 2usize..=4,
        entries in proptest::collection::vec(poly(2, 3, 2), 16),
    ) {
        let m = PolyMatrix::new(n, n, entries[..n * n].to_vec()).unwrap();
        let det = m.det().unwrap();
        let prod = m.mul(&m.adjugate().unwrap()).unwrap();
        for r in 0..n {
            for c in 0..n {
                let want = if r == c { det.clone() } else { Poly::zero(2) };
                prop_assert_eq!(prod.get(r, c), &want);
            }
        }
    }

    #[test]
    fn partials_match_central_differences(
        p in poly(3, 6, 4),
        pt in proptest::collection::vec(-8i64..=8, 3),
        i in 0usize..3,
    ) {
        let point: Vec<Rat> = pt.iter().map(|&v| Rat::new(v, 8)).collect();
        let exact = p.partial(i).unwrap().eval(&point).unwrap().to_f64();
        let h = 1e-4;
        let at = |d: f64| {
            let mut q: Vec<f64> = point.iter().map(Rat::to_f64).collect();
            q[i] += d;
            p.terms()
                .map(|(m, c)| c.to_f64() * (0..3).map(|j| q[j].powi(m.exp(j) as i32)).product::<f64>())
                .sum::<f64>()
        };
        let fd = (at(h) - at(-h)) / (2.0 * h);
        prop_assert!((fd - exact).abs() <= 1e-6 * (1.0 + exact.abs()), "{} vs {}", fd, exact);
    }

    #[test]
    fn translation_recovers_gradient(p in poly(3, 6, 3), pt in proptest::collection::vec(-4i64..=4, 3)) {
        let point: Vec<Rat> = pt.iter().map(|&v| Rat::new(v, 2)).collect();
        let grad: Vec<Rat> = (0..3).map(|i| p.partial(i).unwrap().eval(&point).unwrap()).collect();
        prop_assert_eq!(p.shift(&point).unwrap().linear_part(), grad);
    }
}
