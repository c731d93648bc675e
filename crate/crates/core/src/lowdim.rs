//! Codimension-one germs of the plane into the plane (lips, beaks, planar
//! swallowtail) and corank-one germs of the plane into 3-space (Whitney
//! umbrella, S1±).

use crate::error::{Error, Result};
use crate::germ::{null_field, MapGerm, VecField};
use crate::label::{Classification, ClassLabel, Criterion, CriterionValue, Family, SignSlot};
use crate::matrix::PolyMatrix;
use crate::morin::recognize_morin;
use crate::poly::Poly;
use crate::rat::Rat;

/// Null field `η` and the complementary constant field `ξ`, with `ξ(0)` the
/// rotation of `η(0)` by a quarter turn, so `(η(0), ξ(0))` is positive.
#[derive(Clone, Debug)]
pub struct FrameChoice {
    pub xi: VecField,
    pub eta: VecField,
}

impl FrameChoice {
    pub fn from_eta(eta: VecField) -> Self {
        let e0 = eta.at_origin();
        let xi = VecField::constant(2, &[-&e0[1], e0[0].clone()]);
        FrameChoice { xi, eta }
    }
}

fn hessian_at_origin(p: &Poly) -> [[Rat; 2]; 2] {
    let d = |i: usize, j: usize| {
        p.partial(i)
            .and_then(|q| q.partial(j))
            .expect("two variables")
            .constant_term()
    };
    [[d(0, 0), d(0, 1)], [d(1, 0), d(1, 1)]]
}

fn det2(h: &[[Rat; 2]; 2]) -> Rat {
    &h[0][0] * &h[1][1] - &h[0][1] * &h[1][0]
}

fn exact(name: &str, v: &Rat) -> Criterion {
    Criterion::new(name, CriterionValue::Exact(v.clone()))
}

fn single(family: Family, e: i8, dims: (usize, usize)) -> ClassLabel {
    ClassLabel::new(family, (SignSlot::of(e), SignSlot::Irrelevant), dims)
}

/// Classifies a plane-to-plane germ of corank one.
pub fn classify_plane(f: &MapGerm) -> Result<Classification> {
    if (f.src_dim(), f.tgt_dim()) != (2, 2) {
        return Err(Error::Precondition("plane germs are maps R^2 -> R^2".into()));
    }
    match recognize_morin(f) {
        Ok(r) => {
            return Ok(Classification::new(r.label, "morin", r.criteria))
        }
        Err(Error::Degenerate(_)) => {}
        Err(e) => return Err(e),
    }
    let lambda = f.jacobian().det()?;
    let frame = FrameChoice::from_eta(null_field(f)?);
    plane_with_frame(f, &lambda, &frame)
}

/// Plane criteria with a supplied frame (exposed for invariance checks).
pub fn plane_with_frame(f: &MapGerm, lambda: &Poly, frame: &FrameChoice) -> Result<Classification> {
    let eta = &frame.eta;
    let d1 = eta.apply(lambda)?;
    let d2 = eta.apply(&d1)?;
    let d3 = eta.apply(&d2)?;
    let grad0: Vec<Rat> = lambda.linear_part();
    let e2 = d2.constant_term();
    let mut criteria = vec![
        exact("lambda", &lambda.constant_term()),
        exact("d lambda/dx1", &grad0[0]),
        exact("d lambda/dx2", &grad0[1]),
        exact("eta lambda", &d1.constant_term()),
        exact("eta^2 lambda", &e2),
    ];
    let dims = (f.src_dim(), f.tgt_dim());
    let label = if grad0.iter().all(Rat::is_zero) {
        let hdet = det2(&hessian_at_origin(lambda));
        criteria.push(exact("det hess lambda", &hdet));
        match (hdet.signum(), e2.signum()) {
            (1, s) if s != 0 => single(Family::Lips, s, dims),
            (-1, s) if s != 0 => single(Family::Beaks, s, dims),
            _ => ClassLabel::unrecognized(dims),
        }
    } else {
        let e3 = d3.constant_term();
        let xl = frame.xi.apply(lambda)?.constant_term();
        criteria.push(exact("eta^3 lambda", &e3));
        criteria.push(exact("xi lambda", &xl));
        let s = (&xl * &e3).signum();
        if d1.constant_term().is_zero() && e2.is_zero() && s != 0 {
            single(Family::PlanarSwallowtail, s, dims)
        } else {
            ClassLabel::unrecognized(dims)
        }
    };
    Ok(Classification::new(label, "plane", criteria))
}

/// Classifies a corank-one germ `R^2 -> R^3` through
/// `w = det(ξf, ηf, ηηf)` with constant `η` spanning `ker df(0)`.
pub fn classify_surface(f: &MapGerm) -> Result<Classification> {
    if (f.src_dim(), f.tgt_dim()) != (2, 3) {
        return Err(Error::Precondition("surface germs are maps R^2 -> R^3".into()));
    }
    let dims = (2, 3);
    let df0 = f.linear_part();
    let rank = df0.rank();
    if rank == 2 {
        let label = ClassLabel::new(
            Family::Regular,
            (SignSlot::Irrelevant, SignSlot::Irrelevant),
            dims,
        );
        let criteria = vec![Criterion::new("rank df(0)", CriterionValue::Count(2))];
        return Ok(Classification::new(label, "surface", criteria));
    }
    if rank != 1 {
        return Err(Error::NotCorankOne(2 - rank));
    }
    let kernel = df0.nullspace().remove(0);
    let frame = FrameChoice::from_eta(VecField::constant(2, &kernel));
    surface_with_frame(f, &frame)
}

/// `w = det(ξf, ηf, ηηf)`.
pub fn surface_w(f: &MapGerm, frame: &FrameChoice) -> Result<Poly> {
    // Row i holds (ξf_i, ηf_i, ηηf_i); the determinant is that of the columns.
    let mut entries = Vec::with_capacity(9);
    for c in f.components() {
        let ef = frame.eta.apply(c)?;
        let eef = frame.eta.apply(&ef)?;
        entries.extend([frame.xi.apply(c)?, ef, eef]);
    }
    PolyMatrix::new(3, 3, entries)?.det()
}

/// Surface criteria with a supplied frame.
pub fn surface_with_frame(f: &MapGerm, frame: &FrameChoice) -> Result<Classification> {
    let dims = (2, 3);
    let w = surface_w(f, frame)?;
    let dw = w.linear_part();
    let mut criteria = vec![
        exact("w", &w.constant_term()),
        exact("d w/dx1", &dw[0]),
        exact("d w/dx2", &dw[1]),
    ];
    let label = if dw.iter().any(|c| !c.is_zero()) {
        ClassLabel::new(
            Family::WhitneyUmbrella,
            (SignSlot::Irrelevant, SignSlot::Irrelevant),
            dims,
        )
    } else {
        let hdet = det2(&hessian_at_origin(&w));
        let eew = frame.eta.apply(&frame.eta.apply(&w)?)?.constant_term();
        criteria.push(exact("det hess w", &hdet));
        criteria.push(exact("eta^2 w", &eew));
        match (hdet.signum(), eew.signum()) {
            (-1, s) if s != 0 => single(Family::S1Plus, s, dims),
            (1, s) if s != 0 => single(Family::S1Minus, s, dims),
            _ => ClassLabel::unrecognized(dims),
        }
    };
    Ok(Classification::new(label, "surface", criteria))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::{beaks, lips, planar_swallowtail, s1, whitney_umbrella};

    fn x(i: usize) -> Poly {
        Poly::var(2, i)
    }

    fn value(c: &Classification, name: &str) -> Rat {
        c.criteria
            .iter()
            .find_map(|k| match (&k.value, k.name == name) {
                (CriterionValue::Exact(v), true) => Some(v.clone()),
                _ => None,
            })
            .unwrap()
    }

    #[test]
    fn lips_example() {
        let f = MapGerm::new(2, vec![&x(0).pow(3) + &(&x(0) * &x(1).pow(2)), x(1)]).unwrap();
        let c = classify_plane(&f).unwrap();
        assert_eq!(c.label.family, Family::Lips);
        assert_eq!(c.label.e1(), Some(1));
    }

    #[test]
    fn beaks_example() {
        let f = MapGerm::new(2, vec![&(&x(0) * &x(1).pow(2)) - &x(0).pow(3), x(1)]).unwrap();
        let c = classify_plane(&f).unwrap();
        assert_eq!(c.label.family, Family::Beaks);
        assert_eq!(c.label.e1(), Some(-1));
    }

    #[test]
    fn planar_swallowtail_example() {
        let f = MapGerm::new(2, vec![&x(0).pow(4) + &(&x(0) * &x(1)), x(1)]).unwrap();
        let c = classify_plane(&f).unwrap();
        assert_eq!(c.label.family, Family::PlanarSwallowtail);
        assert_eq!(c.label.e1(), Some(1));
    }

    #[test]
    fn plane_normal_forms_classify_to_themselves() {
        for e in [1, -1] {
            for (g, fam) in [
                (lips(e), Family::Lips),
                (beaks(e), Family::Beaks),
                (planar_swallowtail(e), Family::PlanarSwallowtail),
            ] {
                let c = classify_plane(&g).unwrap();
                assert_eq!((c.label.family, c.label.e1()), (fam, Some(e)));
            }
        }
    }

    #[test]
    fn plane_delegates_cusp() {
        let f = MapGerm::new(2, vec![&x(0).pow(3) + &(&x(0) * &x(1)), x(1)]).unwrap();
        let c = classify_plane(&f).unwrap();
        assert_eq!(c.label.family, Family::Cusp);
        assert_eq!(c.classifier, "morin");
    }

    #[test]
    fn whitney_umbrella_w() {
        let f = whitney_umbrella();
        let frame = FrameChoice::from_eta(VecField::constant(2, &[Rat::one(), Rat::zero()]));
        assert_eq!(surface_w(&f, &frame).unwrap(), x(1).scale(&Rat::int(-2)));
        assert_eq!(classify_surface(&f).unwrap().label.family, Family::WhitneyUmbrella);
    }

    #[test]
    fn s1_plus_values() {
        let c = classify_surface(&s1(true, 1)).unwrap();
        assert_eq!(c.label.family, Family::S1Plus);
        assert_eq!(c.label.e1(), Some(1));
        assert_eq!(value(&c, "det hess w"), Rat::int(-48));
        assert_eq!(value(&c, "eta^2 w"), Rat::int(12));
    }

    #[test]
    fn s1_minus_example() {
        let c = classify_surface(&s1(false, -1)).unwrap();
        assert_eq!(c.label.family, Family::S1Minus);
        assert_eq!(c.label.e1(), Some(-1));
    }

    #[test]
    fn unrecognized_surface() {
        // (x1^2, x1^3, x2): w vanishes to high order.
        let f = MapGerm::new(2, vec![x(0).pow(2), x(0).pow(3), x(1)]).unwrap();
        let c = classify_surface(&f).unwrap();
        assert!(!c.is_recognized());
    }
}
