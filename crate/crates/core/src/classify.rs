//! Dispatch to the right classifier by dimensions and corank: Morin first,
//! then the plane, surface and umbilic criteria. Failures to match any
//! criterion come back as an `unrecognized` label with a note, so batch runs
//! never abort on a single germ.

use crate::error::{Error, Result};
use crate::germ::MapGerm;
use crate::label::{Classification, ClassLabel, Criterion, CriterionValue};
use crate::lowdim::{classify_plane, classify_surface};
use crate::morin::recognize_morin;
use crate::par::par_map;
use crate::sigma20::classify_sigma20;

pub fn classify(f: &MapGerm) -> Result<Classification> {
    let dims = (f.src_dim(), f.tgt_dim());
    let rank = f.linear_part().rank();
    let unrecognized = |why: String| {
        let c = Criterion::new("rank df(0)", CriterionValue::Count(rank));
        Ok(Classification::new(ClassLabel::unrecognized(dims), "none", vec![c]).with_note(why))
    };
    match dims {
        (n, m) if n == m => match recognize_morin(f) {
            Ok(r) => Ok(Classification::new(r.label, "morin", r.criteria)),
            Err(Error::Degenerate(_)) if n == 2 => classify_plane(f),
            Err(Error::NotCorankOne(2)) if n == 4 => match classify_sigma20(f) {
                Ok(r) => Ok(r.classification()),
                Err(e @ Error::DegenerateSigma2(_)) => unrecognized(e.to_string()),
                Err(e) => Err(e),
            },
            Err(e @ (Error::Degenerate(_) | Error::NotCorankOne(_))) => unrecognized(e.to_string()),
            Err(e) => Err(e),
        },
        (2, 3) => match classify_surface(f) {
            Err(e @ Error::NotCorankOne(_)) => unrecognized(e.to_string()),
            other => other,
        },
        (n, m) => unrecognized(format!("no classifier for germs R^{n} -> R^{m}")),
    }
}

/// Classifies many germs; output order matches input order.
pub fn classify_all(germs: &[MapGerm]) -> Vec<Result<Classification>> {
    par_map(germs, classify)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::{beaks, morin_normal_form, s1, sigma20_elli, whitney_umbrella, Family};
    use crate::poly::Poly;

    fn family(f: &MapGerm) -> Family {
        classify(f).unwrap().label.family
    }

    #[test]
    fn dispatch() {
        assert_eq!(family(&morin_normal_form(3, 2, -1, 1)), Family::Cusp);
        assert_eq!(family(&beaks(1)), Family::Beaks);
        assert_eq!(family(&whitney_umbrella()), Family::WhitneyUmbrella);
        assert_eq!(family(&s1(false, 1)), Family::S1Minus);
        assert_eq!(family(&sigma20_elli(-1, 1)), Family::Sigma20Elli);
        assert_eq!(family(&MapGerm::identity(3)), Family::Regular);
    }

    #[test]
    fn unrecognized_with_notes() {
        let x = |i| Poly::var(3, i);
        let f = MapGerm::new(3, vec![x(0).pow(2), x(1).pow(2), x(2)]).unwrap();
        let c = classify(&f).unwrap();
        assert!(!c.is_recognized());
        assert!(c.notes[0].contains("corank 2"));
        let g = MapGerm::new(3, vec![x(0), x(1)]).unwrap();
        assert!(!classify(&g).unwrap().is_recognized());
    }

    #[test]
    fn batch_matches_single() {
        let germs: Vec<MapGerm> = (1..=4).map(|k| morin_normal_form(4, k, 1, -1)).collect();
        let all = classify_all(&germs);
        for (g, c) in germs.iter().zip(all) {
            assert_eq!(c.unwrap().label, classify(g).unwrap().label);
        }
    }
}
