//! A fixed corpus of normal forms spanning every classifier, used by the
//! invariance checks and the benchmarks.

use crate::germ::MapGerm;
use crate::label::{
    beaks, lips, morin_normal_form, planar_swallowtail, s1, sigma20_elli, sigma20_hyp, whitney_umbrella, Family,
};

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub germ: MapGerm,
    pub family: Family,
}

fn entry(name: String, germ: MapGerm, family: Family) -> CorpusEntry {
    CorpusEntry { name, germ, family }
}

/// Thirty normal forms: thirteen Morin germs with `k <= n <= 4` covering
/// every sign pattern of the equidimensional cases, the eleven signed
/// plane and surface forms, and the six signed umbilics.
pub fn normal_form_corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::with_capacity(30);
    let morin: [(usize, usize, i8, i8); 13] = [
        (1, 1, 1, 1),
        (1, 1, -1, 1),
        (2, 1, -1, 1),
        (2, 2, 1, 1),
        (2, 2, -1, 1),
        (3, 2, -1, 1),
        (3, 3, 1, 1),
        (3, 3, 1, -1),
        (4, 3, 1, -1),
        (4, 4, 1, 1),
        (4, 4, 1, -1),
        (4, 4, -1, 1),
        (4, 4, -1, -1),
    ];
    for (n, k, e1, e2) in morin {
        out.push(entry(
            format!("f^{k}({e1:+},{e2:+}) n={n}"),
            morin_normal_form(n, k, e1, e2),
            Family::morin(k),
        ));
    }
    for e in [1, -1] {
        out.push(entry(format!("lips {e:+}"), lips(e), Family::Lips));
        out.push(entry(format!("beaks {e:+}"), beaks(e), Family::Beaks));
        out.push(entry(
            format!("planar swallowtail {e:+}"),
            planar_swallowtail(e),
            Family::PlanarSwallowtail,
        ));
        out.push(entry(format!("S1+ {e:+}"), s1(true, e), Family::S1Plus));
        out.push(entry(format!("S1- {e:+}"), s1(false, e), Family::S1Minus));
    }
    out.push(entry("Whitney umbrella".into(), whitney_umbrella(), Family::WhitneyUmbrella));
    for e1 in [1, -1] {
        out.push(entry(format!("hyp {e1:+}"), sigma20_hyp(e1), Family::Sigma20Hyp));
        for e2 in [1, -1] {
            out.push(entry(format!("elli {e1:+} {e2:+}"), sigma20_elli(e1, e2), Family::Sigma20Elli));
        }
    }
    out
}
