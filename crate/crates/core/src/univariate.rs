//! Univariate rational polynomials, Sturm sequences and real algebraic
//! numbers given by isolating intervals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::rat::Rat;

/// Dense univariate polynomial, coefficients from the constant term upward,
/// without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<Rat>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        UPoly::new(coeffs.iter().map(|&c| Rat::int(c)).collect())
    }

    pub fn zero() -> Self {
        UPoly { coeffs: vec![] }
    }

    pub fn constant(c: Rat) -> Self {
        UPoly::new(vec![c])
    }

    /// The identity polynomial `t`.
    pub fn t() -> Self {
        UPoly::new(vec![Rat::zero(), Rat::one()])
    }

    pub fn monomial(c: Rat, e: usize) -> Self {
        let mut v = vec![Rat::zero(); e + 1];
        v[e] = c;
        UPoly::new(v)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Rat) -> i8 {
        self.eval(x).signum()
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::int(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rat) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> UPoly {
        let mut acc = UPoly::constant(Rat::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    /// Absolute leading coefficient of the primitive integer multiple.
    fn integer_content_lead(&self) -> BigInt {
        let mut den = BigInt::from(1);
        for c in &self.coeffs {
            den = den.lcm(&c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |a, b| a.gcd(b));
        (ints.last().expect("nonzero polynomial") / g).abs()
    }

    /// Euclidean division; panics on division by zero.
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.leading().recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let f = rem.last().unwrap() * &lead_inv;
            if !f.is_zero() {
                for (i, c) in d.coeffs.iter().enumerate() {
                    rem[k + i] = &rem[k + i] - &(&f * c);
                }
                quot[k] = f;
            }
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (UPoly::new(quot), UPoly::new(rem))
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.div_rem(d).1
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree().unwrap_or(0) == 0
    }

    /// `p / gcd(p, p')`, monic.
    pub fn squarefree_part(&self) -> UPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Standard Sturm sequence `p, p', -rem(p, p'), …`.
    pub fn sturm_sequence(&self) -> Vec<UPoly> {
        let mut seq = vec![self.clone()];
        if self.is_zero() {
            return seq;
        }
        let d = self.derivative();
        if d.is_zero() {
            return seq;
        }
        seq.push(d);
        loop {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(-r);
        }
        seq
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count_roots(&self, lo: &Rat, hi: &Rat) -> usize {
        count_roots_with(&self.sturm_sequence(), lo, hi)
    }

    /// Cauchy bound: every real root lies strictly inside `(-B, B)`.
    pub fn root_bound(&self) -> Rat {
        let lead = self.leading().abs();
        let m = self
            .coeffs
            .iter()
            .take(self.coeffs.len().saturating_sub(1))
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(Rat::zero);
        m + Rat::one()
    }

    /// Isolates every real root of a nonzero polynomial. Exact rational
    /// roots met during bisection are reported as such.
    pub fn isolate_real_roots(&self) -> Vec<RealRoot> {
        if self.degree().unwrap_or(0) == 0 {
            return vec![];
        }
        let sf = self.squarefree_part();
        let seq = sf.sturm_sequence();
        let b = sf.root_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            let n = count_roots_with(&seq, &lo, &hi);
            if n == 0 {
                continue;
            }
            if sf.eval(&hi).is_zero() {
                out.push(RealRoot::Exact(hi.clone()));
                if n == 1 {
                    continue;
                }
                // Shrink below the exact root so it is not counted twice.
                let h2;
                let mut step = (&hi - &lo) / Rat::int(2);
                loop {
                    let cand = &hi - &step;
                    if count_roots_with(&seq, &cand, &hi) == 1 && !sf.eval(&cand).is_zero() {
                        h2 = cand;
                        break;
                    }
                    step = step / Rat::int(2);
                }
                stack.push((lo, h2));
                continue;
            }
            if n == 1 && !sf.eval(&lo).is_zero() {
                out.push(RealRoot::Isolated(RealAlgebraic {
                    poly: sf.clone(),
                    lo,
                    hi,
                }));
                continue;
            }
            let mid = lo.midpoint(&hi);
            stack.push((mid.clone(), hi));
            stack.push((lo, mid));
        }
        out.sort_by_key(|a| a.lower());
        out
    }
}

fn sign_variations(seq: &[UPoly], x: &Rat) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in seq {
        let s = p.sign_at(x);
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn count_roots_with(seq: &[UPoly], lo: &Rat, hi: &Rat) -> usize {
    sign_variations(seq, lo).saturating_sub(sign_variations(seq, hi))
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Add for UPoly {
    type Output = UPoly;
    fn add(self, rhs: UPoly) -> UPoly {
        &self + &rhs
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Sub for UPoly {
    type Output = UPoly;
    fn sub(self, rhs: UPoly) -> UPoly {
        &self - &rhs
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UPoly::new(v)
    }
}

impl Mul for UPoly {
    type Output = UPoly;
    fn mul(self, rhs: UPoly) -> UPoly {
        &self * &rhs
    }
}

impl Neg for UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        -self.clone()
    }
}

impl Zero for UPoly {
    fn zero() -> Self {
        UPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.signum() < 0;
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{a}*t")?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{a}*t^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly({self})")
    }
}

/// A real root of a univariate polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealRoot {
    Exact(Rat),
    Isolated(RealAlgebraic),
}

impl RealRoot {
    pub fn lower(&self) -> Rat {
        match self {
            RealRoot::Exact(r) => r.clone(),
            RealRoot::Isolated(a) => a.lo.clone(),
        }
    }

    pub fn to_algebraic(&self) -> RealAlgebraic {
        match self {
            RealRoot::Exact(r) => RealAlgebraic::rational(r.clone()),
            RealRoot::Isolated(a) => a.clone(),
        }
    }
}

/// Real algebraic number: the unique root of the squarefree `poly` inside
/// the open interval `(lo, hi)`; `poly` does not vanish at either endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealAlgebraic {
    poly: UPoly,
    lo: Rat,
    hi: Rat,
}

impl RealAlgebraic {
    pub fn rational(r: Rat) -> Self {
        RealAlgebraic {
            poly: UPoly::new(vec![-&r, Rat::one()]),
            lo: &r - &Rat::one(),
            hi: &r + &Rat::one(),
        }
    }

    pub fn poly(&self) -> &UPoly {
        &self.poly
    }

    pub fn interval(&self) -> (&Rat, &Rat) {
        (&self.lo, &self.hi)
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    /// The value, when the defining polynomial is linear.
    pub fn as_rational(&self) -> Option<Rat> {
        (self.poly.degree() == Some(1)).then(|| -(self.poly.coeff(0) / self.poly.coeff(1)))
    }

    /// One bisection step; returns `Some(r)` if the midpoint is the root.
    fn bisect(&mut self) -> Option<Rat> {
        let mid = self.lo.midpoint(&self.hi);
        let s_mid = self.poly.sign_at(&mid);
        if s_mid == 0 {
            return Some(mid);
        }
        if s_mid == self.poly.sign_at(&self.lo) {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
        None
    }

    /// Bisects until the interval is narrower than `2^-bits`. If the root
    /// turns out to be rational along the way, switches to its exact form.
    pub fn refine_bits(&mut self, bits: u32) {
        let target = Rat::from_bigints(BigInt::from(1), BigInt::from(1) << bits as usize)
            .expect("nonzero");
        while self.width() >= target {
            if let Some(r) = self.bisect() {
                let w = self.width();
                *self = RealAlgebraic {
                    poly: UPoly::new(vec![-&r, Rat::one()]),
                    lo: &r - &(&w / Rat::int(4)),
                    hi: &r + &(&w / Rat::int(4)),
                };
            }
        }
    }

    /// Exact rational value of the root, if it is rational. A rational root
    /// of an integer polynomial has a denominator dividing the leading
    /// coefficient `L`, and two such rationals differ by at least `1/L^2`,
    /// so once the interval is that narrow its simplest rational is the only
    /// candidate.
    pub fn detect_rational(&self) -> Option<Rat> {
        if let Some(r) = self.as_rational() {
            return Some(r);
        }
        let lead = self.poly.integer_content_lead();
        let target = Rat::from_bigints(BigInt::from(1), &lead * &lead).expect("nonzero");
        let mut me = self.clone();
        while me.width() >= target {
            if let Some(r) = me.bisect() {
                return Some(r);
            }
        }
        let cand = simplest_between(&me.lo, &me.hi);
        self.poly.eval(&cand).is_zero().then_some(cand)
    }

    pub fn approx(&self) -> Rat {
        self.lo.midpoint(&self.hi)
    }

    pub fn to_f64(&self) -> f64 {
        self.approx().to_f64()
    }

    /// Reduces `g` modulo the defining polynomial; the value at the root is
    /// unchanged.
    pub fn reduce(&self, g: &UPoly) -> UPoly {
        if g.degree() >= self.poly.degree() {
            g.rem(&self.poly)
        } else {
            g.clone()
        }
    }

    /// Exact sign of `g` at this number.
    pub fn sign_of(&self, g: &UPoly) -> i8 {
        let g = self.reduce(g);
        if g.is_zero() {
            return 0;
        }
        if g.degree() == Some(0) {
            return g.leading().signum();
        }
        let h = self.poly.gcd(&g);
        if h.degree().unwrap_or(0) > 0 && h.count_roots(&self.lo, &self.hi) > 0 {
            return 0;
        }
        let gs = g.squarefree_part();
        let seq = gs.sturm_sequence();
        let mut me = self.clone();
        loop {
            if let Some(r) = me.as_rational() {
                return g.sign_at(&r);
            }
            if !gs.eval(&me.hi).is_zero() && count_roots_with(&seq, &me.lo, &me.hi) == 0 {
                return g.sign_at(&me.hi);
            }
            if let Some(r) = me.bisect() {
                return g.sign_at(&r);
            }
        }
    }
}

/// Simplest rational (smallest denominator, then numerator) in `[lo, hi]`.
pub fn simplest_between(lo: &Rat, hi: &Rat) -> Rat {
    debug_assert!(lo <= hi);
    if lo.signum() <= 0 && hi.signum() >= 0 {
        return Rat::zero();
    }
    if hi.signum() < 0 {
        return -simplest_between(&-hi, &-lo);
    }
    simplest_positive(lo, hi)
}

fn simplest_positive(lo: &Rat, hi: &Rat) -> Rat {
    // Continued-fraction descent on 0 < lo <= hi.
    let fl = floor(lo);
    if &Rat::from(fl.clone()) == lo {
        return lo.clone();
    }
    let candidate = Rat::from(&fl + BigInt::from(1));
    if &candidate <= hi {
        return candidate;
    }
    let fl_r = Rat::from(fl.clone());
    let inner = simplest_positive(&(hi - &fl_r).recip(), &(lo - &fl_r).recip());
    fl_r + inner.recip()
}

fn floor(r: &Rat) -> BigInt {
    r.numer().div_floor(&r.denom())
}
