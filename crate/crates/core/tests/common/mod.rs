//! Helpers shared by the integration tests.
#![allow(dead_code)]

use germlab::{MapGerm, Poly, Rat, RatMatrix};
use proptest::prelude::*;
use rand::Rng;

/// Integer matrix with entries in `-3..=3` and positive determinant.
pub fn random_orientation_preserving(n: usize, rng: &mut impl Rng) -> RatMatrix {
    loop {
        let vals: Vec<i64> = (0..n * n).map(|_| rng.random_range(-3..=3)).collect();
        if let Some(m) = orient(RatMatrix::from_i64(n, n, &vals)) {
            return m;
        }
    }
}

/// Flips the first row if needed; `None` for singular matrices.
fn orient(mut m: RatMatrix) -> Option<RatMatrix> {
    match m.det().unwrap().signum() {
        0 => None,
        1 => Some(m),
        _ => {
            for c in 0..m.cols() {
                let v = -m.get(0, c);
                m.set(0, c, v);
            }
            Some(m)
        }
    }
}

pub fn orientation_preserving(n: usize) -> impl Strategy<Value = RatMatrix> {
    proptest::collection::vec(-3i64..=3, n * n)
        .prop_filter_map("singular", move |v| orient(RatMatrix::from_i64(n, n, &v)))
}

/// `B ∘ f ∘ A`.
pub fn transform(f: &MapGerm, a: &RatMatrix, b: &RatMatrix) -> MapGerm {
    f.compose_source(a).unwrap().compose_target(b).unwrap()
}

pub fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=3).prop_map(|(p, q)| Rat::new(p, q))
}

pub fn nonzero_rat() -> impl Strategy<Value = Rat> {
    small_rat().prop_filter("zero", |r| !r.is_zero())
}

/// Polynomial in `nvars` variables with up to `terms` terms of degree
/// at most `max_exp` in each variable.
pub fn poly(nvars: usize, terms: usize, max_exp: u16) -> impl Strategy<Value = Poly> {
    proptest::collection::vec(
        (proptest::collection::vec(0..=max_exp, nvars), small_rat()),
        0..=terms,
    )
    .prop_map(move |t| Poly::from_terms(nvars, t).unwrap())
}

/// Label recomputed with `η` replaced by `φ·η`. For the surface and umbilic
/// classifiers, whose criteria use constant fields, only `φ(0)` is used.
pub fn label_with_eta(f: &MapGerm, phi: &Poly) -> germlab::ClassLabel {
    use germlab::lowdim::{plane_with_frame, surface_with_frame, FrameChoice};
    use germlab::morin::recognize_with_field;
    use germlab::sigma20::classify_sigma20_with;
    use germlab::{null_field, Error, VecField};

    let scale = |v: &VecField| VecField(v.components().iter().map(|c| c * phi).collect());
    let c = phi.constant_term();
    assert!(!c.is_zero(), "phi must not vanish at the origin");
    match (f.src_dim(), f.tgt_dim()) {
        (2, 3) => {
            let df0 = f.linear_part();
            if df0.rank() == 2 {
                return germlab::classify(f).unwrap().label;
            }
            let k: Vec<Rat> = df0.nullspace().remove(0).iter().map(|x| x * &c).collect();
            let frame = FrameChoice::from_eta(VecField::constant(2, &k));
            surface_with_frame(f, &frame).unwrap().label
        }
        (4, 4) if f.linear_part().rank() == 2 => {
            let kernel = f.linear_part().nullspace();
            let eta: Vec<Rat> = kernel[1].iter().map(|x| x * &c).collect();
            classify_sigma20_with(f, &kernel[0], &eta).unwrap().label
        }
        _ => {
            let eta = scale(&null_field(f).unwrap());
            match recognize_with_field(f, &eta) {
                Ok(r) => r.label,
                Err(Error::Degenerate(_)) => {
                    let lambda = f.jacobian().det().unwrap();
                    plane_with_frame(f, &lambda, &FrameChoice::from_eta(eta)).unwrap().label
                }
                Err(e) => panic!("{e}"),
            }
        }
    }
}
