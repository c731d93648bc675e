//! Exact evaluation of polynomials at a base point: rational values at the
//! origin, or values in `Q(α)` at a point whose coordinates are polynomials
//! in a real algebraic number `α`.

use std::collections::HashMap;
use std::fmt::Debug;

use crate::matrix::RatMatrix;
use crate::poly::Poly;
use crate::rat::Rat;
use crate::univariate::{RealAlgebraic, UPoly};

/// Ring of values at a point with an exact sign test.
pub trait PointEval {
    type V: Clone + Debug;

    fn value(&self, p: &Poly) -> Self::V;
    fn sign(&self, v: &Self::V) -> i8;
    fn zero(&self) -> Self::V;
    fn one(&self) -> Self::V;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn neg(&self, a: &Self::V) -> Self::V;

    /// Exact rational form of a value, when available.
    fn exact(&self, v: &Self::V) -> Option<Rat>;

    /// Whether the point is the origin (so truncated jets suffice).
    fn is_origin(&self) -> bool {
        false
    }

    fn is_zero(&self, v: &Self::V) -> bool {
        self.sign(v) == 0
    }

    /// Determinant of a square matrix of values.
    fn det(&self, m: &[Vec<Self::V>]) -> Self::V {
        laplace_det(self, m)
    }

    /// Rank of a matrix of values: the size of its largest nonzero minor.
    fn rank(&self, m: &[Vec<Self::V>]) -> usize {
        let rows = m.len();
        let cols = m.first().map_or(0, |r| r.len());
        (1..=rows.min(cols))
            .rev()
            .find(|&r| {
                subsets(rows, r).iter().any(|rs| {
                    subsets(cols, r).iter().any(|cs| {
                        let sub: Vec<Vec<Self::V>> = rs
                            .iter()
                            .map(|&i| cs.iter().map(|&j| m[i][j].clone()).collect())
                            .collect();
                        !self.is_zero(&self.det(&sub))
                    })
                })
            })
            .unwrap_or(0)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Division-free determinant by Laplace expansion over column subsets.
fn laplace_det<E: PointEval + ?Sized>(e: &E, m: &[Vec<E::V>]) -> E::V {
    let k = m.len();
    let mut dets: HashMap<u32, E::V> = HashMap::new();
    dets.insert(0, e.one());
    for (r, row) in m.iter().enumerate() {
        let mut next: HashMap<u32, E::V> = HashMap::new();
        for (&mask, base) in &dets {
            for (j, entry) in row.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    continue;
                }
                let pos = (mask & ((1u32 << j) - 1)).count_ones() as usize;
                let mut term = e.mul(entry, base);
                if (r + pos) % 2 == 1 {
                    term = e.neg(&term);
                }
                let slot = next.entry(mask | (1 << j)).or_insert_with(|| e.zero());
                *slot = e.add(slot, &term);
            }
        }
        dets = next;
    }
    if k == 0 {
        return e.one();
    }
    dets.remove(&((1u32 << k) - 1)).unwrap_or_else(|| e.zero())
}

/// The origin, where a polynomial's value is its constant term.
#[derive(Clone, Copy, Debug, Default)]
pub struct Origin;

impl PointEval for Origin {
    type V = Rat;

    fn value(&self, p: &Poly) -> Rat {
        p.constant_term()
    }

    fn sign(&self, v: &Rat) -> i8 {
        v.signum()
    }

    fn zero(&self) -> Rat {
        Rat::zero()
    }

    fn one(&self) -> Rat {
        Rat::one()
    }

    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a + b
    }

    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }

    fn neg(&self, a: &Rat) -> Rat {
        -a
    }

    fn exact(&self, v: &Rat) -> Option<Rat> {
        Some(v.clone())
    }

    fn is_origin(&self) -> bool {
        true
    }

    fn det(&self, m: &[Vec<Rat>]) -> Rat {
        RatMatrix::from_rows(m.to_vec())
            .and_then(|a| a.det())
            .expect("square matrix")
    }

    fn rank(&self, m: &[Vec<Rat>]) -> usize {
        RatMatrix::from_rows(m.to_vec())
            .map(|a| a.rank())
            .unwrap_or(0)
    }
}

/// A point whose coordinates are `c_i(α)` for a real algebraic `α`.
#[derive(Clone, Debug)]
pub struct AlgebraicPoint {
    alpha: RealAlgebraic,
    coords: Vec<UPoly>,
}

impl AlgebraicPoint {
    pub fn new(alpha: RealAlgebraic, coords: Vec<UPoly>) -> Self {
        let coords = coords.iter().map(|c| alpha.reduce(c)).collect();
        AlgebraicPoint { alpha, coords }
    }

    pub fn alpha(&self) -> &RealAlgebraic {
        &self.alpha
    }

    pub fn coords(&self) -> &[UPoly] {
        &self.coords
    }

    /// Rational coordinates, when every coordinate is a rational number.
    pub fn rational_coords(&self) -> Option<Vec<Rat>> {
        let r = self.alpha.detect_rational();
        self.coords
            .iter()
            .map(|c| {
                if c.degree().unwrap_or(0) == 0 {
                    Some(c.coeff(0))
                } else {
                    r.as_ref().map(|r| c.eval(r))
                }
            })
            .collect()
    }

    /// Coordinates approximated to within `2^-bits` of `α`.
    pub fn approx_coords(&self, bits: u32) -> Vec<Rat> {
        let mut a = self.alpha.clone();
        a.refine_bits(bits);
        let x = a.approx();
        self.coords.iter().map(|c| c.eval(&x)).collect()
    }
}

impl PointEval for AlgebraicPoint {
    type V = UPoly;

    fn value(&self, p: &Poly) -> UPoly {
        let mut powers: Vec<Vec<UPoly>> =
            vec![vec![UPoly::constant(Rat::one())]; self.coords.len()];
        let mut total = UPoly::zero();
        for (m, c) in p.terms() {
            let mut t = UPoly::constant(c.clone());
            for (i, pw) in powers.iter_mut().enumerate() {
                let e = m.exp(i) as usize;
                if e == 0 {
                    continue;
                }
                while pw.len() <= e {
                    let next = self.alpha.reduce(&(pw.last().unwrap() * &self.coords[i]));
                    pw.push(next);
                }
                t = self.alpha.reduce(&(&t * &pw[e]));
            }
            total = &total + &t;
        }
        total
    }

    fn sign(&self, v: &UPoly) -> i8 {
        self.alpha.sign_of(v)
    }

    fn zero(&self) -> UPoly {
        UPoly::zero()
    }

    fn one(&self) -> UPoly {
        UPoly::constant(Rat::one())
    }

    fn add(&self, a: &UPoly, b: &UPoly) -> UPoly {
        a + b
    }

    fn mul(&self, a: &UPoly, b: &UPoly) -> UPoly {
        self.alpha.reduce(&(a * b))
    }

    fn neg(&self, a: &UPoly) -> UPoly {
        -a
    }

    fn exact(&self, v: &UPoly) -> Option<Rat> {
        if v.degree().unwrap_or(0) == 0 {
            return Some(v.coeff(0));
        }
        self.alpha.detect_rational().map(|r| v.eval(&r))
    }
}
