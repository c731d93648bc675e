//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Two criteria are known to fail because the published tables disagree
//! with the definitions they summarize (see `KNOWN_FAILURES`). The binary
//! exits nonzero if any other criterion fails, or if a known failure starts
//! passing, so the list cannot go stale silently.

#![allow(clippy::type_complexity)]

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use common::{label_with_eta, random_orientation_preserving, transform};
use germlab::corpus::normal_form_corpus;
use germlab::label::{beaks, lips, morin_normal_form, planar_swallowtail, s1, sigma20_elli, sigma20_hyp};
use germlab::parse::{parse_bytes, parse_map, render_default};
use germlab::perturb::{
    family_b_identity, locus_discrepancies, morin_points, sweep, ParamGrid, UnfoldingFamily, UnfoldingSpec,
};
use germlab::sigma20::classify_sigma20;
use germlab::tables::{b_constant, class_count};
use germlab::{classify, isotopy_class, recognize_morin, Family, MapGerm, Poly, Rat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criterion number and the clauses expected to fail.
const KNOWN_FAILURES: &[(usize, &[&str])] = &[
    (5, &["n=3 printed parametrization", "n=4 invariant signs"]),
    (6, &["n=4 l=2 invariant", "n=4 l=3 invariant"]),
];

struct Outcome {
    failed: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            failed: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, clause: impl Into<String>) {
        if !ok {
            self.failed.push(clause.into());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

fn c1() -> Outcome {
    let mut o = Outcome::new();
    let counts: Vec<usize> = (1..=6).map(|n| class_count(n, n).unwrap().count).collect();
    o.check(counts == [2, 2, 2, 4, 2, 2], format!("counts {counts:?}"));
    o.note(format!("k=n=1..6: {counts:?}"));
    o
}

fn c2() -> Outcome {
    let mut o = Outcome::new();
    for n in 2..=6 {
        for k in 1..n {
            let c = class_count(n, k).unwrap().count;
            let want = if k % 2 == 0 { 2 } else { 1 };
            o.check(c == want, format!("(k,n)=({k},{n}) count {c}"));
        }
        let plain = isotopy_class(&morin_normal_form(n, 1, 1, 1)).unwrap();
        let mut comps = vec![Poly::var(n, 0).pow(2)];
        comps.extend((1..n).map(|i| Poly::var(n, i)));
        let reference = isotopy_class(&MapGerm::new(n, comps).unwrap()).unwrap();
        let flipped = isotopy_class(&morin_normal_form(n, 1, -1, 1)).unwrap();
        o.check(plain == reference && flipped == reference, format!("fold n={n}"));
    }
    o.note("k<n<=6 counts alternate 1,2 by parity; folds share one label");
    o
}

fn c3() -> Outcome {
    let mut o = Outcome::new();
    let mut checked = 0;
    for n in 1..=6usize {
        // The fold normal form carries no ε2.
        let e2s: &[i8] = if n == 1 { &[1] } else { &[1, -1] };
        for e1 in [1i8, -1] {
            for &e2 in e2s {
                let r = recognize_morin(&morin_normal_form(n, n, e1, e2)).unwrap();
                let sign = if (n - 1) % 2 == 0 { 1 } else { -1 } * e1.pow(n as u32) * e2.pow(n as u32 + 1);
                o.check(r.eta_k_lambda_sign == e1 * e2, format!("eta^k lambda n={n} ({e1},{e2})"));
                o.check(r.grad_det_sign == Some(sign), format!("det grad n={n} ({e1},{e2})"));
                checked += 1;
            }
        }
    }
    o.note(format!("{checked} normal forms"));
    o
}

fn c4() -> Outcome {
    let mut o = Outcome::new();
    let corpus = normal_form_corpus();
    let base: Vec<_> = corpus.iter().map(|e| classify(&e.germ).unwrap().label).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e72_6d6c);
    let mut passed = 0;
    for i in 0..200 {
        let e = &corpus[i % corpus.len()];
        let a = random_orientation_preserving(e.germ.src_dim(), &mut rng);
        let b = random_orientation_preserving(e.germ.tgt_dim(), &mut rng);
        let label = classify(&transform(&e.germ, &a, &b)).unwrap().label;
        if label == base[i % corpus.len()] {
            passed += 1;
        } else {
            o.check(false, format!("change {i} on {}", e.name));
        }
    }
    o.check(corpus.len() == 30, "corpus size");
    o.note(format!("{passed}/200 changes over {} normal forms", corpus.len()));
    o
}

fn signs(rep: &germlab::perturb::PerturbationReport) -> BTreeSet<Vec<i8>> {
    rep.points.iter().map(|p| p.classifier_invariant.clone()).collect()
}

fn c5() -> Outcome {
    let mut o = Outcome::new();
    for n in 2..=5 {
        let rep = morin_points(&UnfoldingSpec::family_b(n, Rat::int(-b_constant(n))).unwrap()).unwrap();
        o.check(rep.count == 2, format!("n={n} count {}", rep.count));
        o.check(rep.points.iter().all(|p| p.k == n), format!("n={n} Morin order"));
        let expected: BTreeSet<Vec<i8>> = match n {
            3 => [vec![1]].into(),
            4 => [vec![1, 1], vec![-1, -1]].into(),
            _ => [vec![1], vec![-1]].into(),
        };
        let got = signs(&rep);
        if got != expected {
            o.check(false, format!("n={n} invariant signs"));
            o.note(format!("n={n}: classifier {got:?}, table {expected:?}"));
        }
        let printed = family_b_identity(n, true).unwrap();
        if !printed.holds {
            o.check(false, format!("n={n} printed parametrization"));
            o.note(format!("n={n} printed: {}", printed.residuals.join("; ")));
        }
        o.check(family_b_identity(n, false).unwrap().holds, format!("n={n} derived parametrization"));
    }
    o
}

fn c6() -> Outcome {
    let mut o = Outcome::new();
    // q̄ = x² - 1 and q̄ = (x+3)(x-1)(x-2).
    let cases: [(usize, Vec<Rat>, fn(&Rat) -> Rat); 2] = [
        (2, vec![Rat::int(-1)], |x| x * &Rat::int(2)),
        (3, vec![Rat::int(6), Rat::int(-7)], |x| &(&(x * x) * &Rat::int(3)) - &Rat::int(7)),
    ];
    for (l, params, dq) in cases {
        for n in 2..=5 {
            let rep = morin_points(&UnfoldingSpec::family_a(n, l, params.clone()).unwrap()).unwrap();
            o.check(rep.count == l, format!("n={n} l={l} count {}", rep.count));
            o.check(rep.points.iter().all(|p| p.k == n), format!("n={n} l={l} Morin order"));
            for p in &rep.points {
                let xn = p.location[n - 1].exact.clone().expect("rational root");
                let s = dq(&xn).signum();
                let want = match n {
                    2 => vec![1],
                    4 => vec![1, s],
                    _ => vec![s],
                };
                if p.classifier_invariant != want {
                    o.check(false, format!("n={n} l={l} invariant"));
                    o.note(format!(
                        "n={n} l={l} at x{n}={xn}: classifier {:?}, table {want:?}",
                        p.classifier_invariant
                    ));
                }
            }
        }
    }
    o.failed.dedup();
    o
}

fn c7() -> Outcome {
    let mut o = Outcome::new();
    let grid: ParamGrid = "-2:2:1/4,-2:4:1/2".parse().unwrap();
    for n in 2..=5 {
        let s = sweep(&UnfoldingSpec::family_c(n, Rat::zero(), Rat::zero()).unwrap(), &grid, 40).unwrap();
        o.check(s.max_count == 4, format!("n={n} max {}", s.max_count));
        let points: usize = s.reports.iter().filter(|r| r.stable).map(|r| r.count).sum();
        let agree: usize = s
            .reports
            .iter()
            .filter(|r| r.stable)
            .flat_map(|r| &r.points)
            .filter(|p| p.k == n && p.table_invariant == p.classifier_invariant)
            .count();
        o.check(agree == points, format!("n={n} agreement {agree}/{points}"));
        o.note(format!(
            "n={n}: max 4 first at {:?}, {agree}/{points} points agree",
            s.argmax.as_ref().map(|a| a.iter().map(|r| r.to_string()).collect::<Vec<_>>())
        ));
        for d in locus_discrepancies(UnfoldingFamily::C, n).unwrap() {
            o.note(format!("reported: C{n} {} printed {} derived {}", d.item, d.printed, d.derived));
        }
    }
    let reported: Vec<(usize, String)> = (2..=5)
        .flat_map(|n| locus_discrepancies(UnfoldingFamily::C, n).unwrap())
        .map(|d| (d.n, d.item))
        .collect();
    o.check(
        reported == [(4, "equation".to_string()), (5, "x3".to_string())],
        format!("discrepancy report {reported:?}"),
    );
    o
}

fn c8() -> Outcome {
    let mut o = Outcome::new();
    for e1 in [1, -1] {
        let r = classify_sigma20(&sigma20_hyp(e1)).unwrap();
        o.check(r.label.family == Family::Sigma20Hyp && r.eps1 == e1, format!("hyp {e1}"));
        for e2 in [1, -1] {
            let r = classify_sigma20(&sigma20_elli(e1, e2)).unwrap();
            o.check(
                r.label.family == Family::Sigma20Elli && (r.eps1, r.eps2) == (e1, Some(e2)),
                format!("elli {e1} {e2}"),
            );
        }
    }
    let r = classify_sigma20(&sigma20_hyp(1)).unwrap();
    o.check(r.hess_det == Rat::int(-16), format!("hess det {}", r.hess_det));
    o.check(r.big_det == Rat::int(-4), format!("4x4 det {}", r.big_det));
    o.note(format!("hyp: det hess = {}, 4x4 det = {}", r.hess_det, r.big_det));
    o
}

fn c9() -> Outcome {
    let mut o = Outcome::new();
    let named = [
        ("x1^2 ; x2", Family::Fold),
        ("x1^3 + x1*x2 ; x2", Family::Cusp),
        ("x1^3 + x1*x2^2 ; x2", Family::Lips),
        ("x1^3 - x1*x2^2 ; x2", Family::Beaks),
        ("x1^4 + x1*x2 ; x2", Family::PlanarSwallowtail),
        ("x1^2 ; x1*x2 ; x2", Family::WhitneyUmbrella),
        ("x1^2 ; x1*(x1^2 + x2^2) ; x2", Family::S1Plus),
        ("x1^2 ; x1*(x1^2 - x2^2) ; x2", Family::S1Minus),
    ];
    for (text, family) in named {
        let got = classify(&parse_map(text).unwrap()).unwrap().label.family;
        o.check(got == family, format!("{text} gave {got}"));
    }
    let families: [(&str, fn(i8) -> MapGerm, usize); 6] = [
        ("lips", lips, 2),
        ("beaks", beaks, 2),
        ("planar swallowtail", planar_swallowtail, 2),
        ("S1+", |e| s1(true, e), 2),
        ("S1-", |e| s1(false, e), 2),
        ("Whitney umbrella", |_| parse_map("x1^2 ; x1*x2 ; x2").unwrap(), 1),
    ];
    for (name, make, want) in families {
        let labels: BTreeSet<String> = [1, -1].iter().map(|&e| classify(&make(e)).unwrap().label.to_string()).collect();
        o.check(labels.len() == want, format!("{name}: {labels:?}"));
    }
    o
}

fn c10() -> Outcome {
    let mut o = Outcome::new();
    let corpus = normal_form_corpus();
    let mut runs = 0;
    for e in &corpus {
        let n = e.germ.src_dim();
        let base = classify(&e.germ).unwrap().label;
        let x = |i: usize| Poly::var(n, i % n);
        let fields = [
            Poly::constant(n, Rat::int(-1)),
            Poly::constant(n, Rat::new(5, 2)),
            &Poly::constant(n, Rat::int(3)) + &(&x(0) - &x(1)),
            &Poly::constant(n, Rat::int(-2)) + &x(1).pow(2),
        ];
        for phi in &fields {
            runs += 1;
            o.check(label_with_eta(&e.germ, phi) == base, format!("{} with phi = {phi}", e.name));
        }
    }
    o.note(format!("{runs} recomputations over {} germs", corpus.len()));
    o
}

fn c11() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut round_trips = 0;
    for _ in 0..1000 {
        let n = rng.random_range(1..=4);
        let m = rng.random_range(1..=4);
        let comps: Vec<Poly> = (0..m)
            .map(|_| {
                let terms: Vec<(Vec<u16>, Rat)> = (0..rng.random_range(0..=5))
                    .map(|_| {
                        let mut e: Vec<u16> = (0..n).map(|_| rng.random_range(0..=4)).collect();
                        if e.iter().all(|&d| d == 0) {
                            e[0] = 1;
                        }
                        (e, Rat::new(rng.random_range(-9..=9), rng.random_range(1..=5)))
                    })
                    .collect();
                Poly::from_terms(n, terms).unwrap()
            })
            .collect();
        let g = MapGerm::new(n, comps).unwrap();
        if parse_map(&render_default(&g)).ok() == Some(g) {
            round_trips += 1;
        }
    }
    o.check(round_trips == 1000, format!("round trips {round_trips}/1000"));
    let alphabet = b"x1234567890+-*/^();:,|= \n#varsmx_";
    let mut structured = 0;
    let outcome = std::panic::catch_unwind(move || {
        for i in 0..100_000 {
            let len = rng.random_range(0..48);
            let bytes: Vec<u8> = if i % 2 == 0 {
                (0..len).map(|_| rng.random()).collect()
            } else {
                (0..len).map(|_| alphabet[rng.random_range(0..alphabet.len())]).collect()
            };
            if parse_bytes(&bytes).is_err() {
                structured += 1;
            }
        }
        structured
    });
    match outcome {
        Ok(errors) => o.note(format!("1000 round trips; 100000 fuzz inputs, {errors} structured errors, 0 crashes")),
        Err(_) => o.check(false, "fuzz panicked"),
    }
    o
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("class counts, k = n", c1),
        ("class counts, k < n; folds", c2),
        ("sign identities on normal forms", c3),
        ("label invariance under linear changes", c4),
        ("family B", c5),
        ("family A", c6),
        ("family C", c7),
        ("umbilics", c8),
        ("plane and surface germs", c9),
        ("eta reversal and rescaling", c10),
        ("parser round trip and fuzz", c11),
    ];
    let mut unexpected = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let number = i + 1;
        let start = Instant::now();
        let out = run();
        let status = if out.failed.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {number:>2} {status}  {name} ({:.2?})", start.elapsed());
        for f in &out.failed {
            println!("    failed: {f}");
        }
        for n in &out.notes {
            println!("    {n}");
        }
        let known: BTreeSet<&str> = KNOWN_FAILURES
            .iter()
            .find(|(c, _)| *c == number)
            .map(|(_, f)| f.iter().copied().collect())
            .unwrap_or_default();
        let actual: BTreeSet<&str> = out.failed.iter().map(String::as_str).collect();
        if actual != known {
            unexpected.push(format!("criterion {number}: failed {actual:?}, documented {known:?}"));
        }
    }
    if !unexpected.is_empty() {
        for u in &unexpected {
            eprintln!("{u}");
        }
        std::process::exit(1);
    }
    println!("all failures match the documented table defects");
}
