//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::rat::Rat;

/// Upper bound on the number of variables of a [`Poly`].
pub const MAX_VARS: usize = 8;

/// Exponent vector. Slots past the owning polynomial's `nvars` are zero.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial([u16; MAX_VARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; MAX_VARS])
    }

    /// Panics if `exps` is longer than [`MAX_VARS`].
    pub fn from_exps(exps: &[u16]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many exponents");
        let mut m = [0u16; MAX_VARS];
        m[..exps.len()].copy_from_slice(exps);
        Monomial(m)
    }

    pub fn var(i: usize) -> Self {
        let mut m = Monomial::one();
        m.0[i] = 1;
        m
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.0[i]
    }

    pub fn exps(&self) -> &[u16; MAX_VARS] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(other.0.iter()) {
            *a += *b;
        }
        Monomial(m)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Polynomial in `nvars` variables over the rationals.
///
/// Only nonzero coefficients are stored, keyed by exponent vector, so two
/// polynomials are equal exactly when their term maps are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Rat::one())
    }

    /// The coordinate function `x_i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        Poly::term(nvars, Rat::one(), Monomial::var(i))
    }

    pub fn term(nvars: usize, c: Rat, m: Monomial) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(m, c);
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// exponent vectors are summed.
    pub fn from_terms<I, E>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (E, Rat)>,
        E: AsRef<[u16]>,
    {
        if nvars > MAX_VARS {
            return Err(Error::TooManyVariables(nvars));
        }
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            let e = e.as_ref();
            if e.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: e.len(),
                });
            }
            p.add_term(Monomial::from_exps(e), c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&Monomial::one())
    }

    /// Largest total degree of a term; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Smallest total degree of a term (order of vanishing at the origin);
    /// `None` for the zero polynomial.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &Poly) -> Result<()> {
        if self.nvars != other.nvars {
            Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            })
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        Ok(self.mul_impl(other, None))
    }

    /// Product with every term of total degree above `max_degree` dropped.
    pub fn mul_truncated(&self, other: &Poly, max_degree: u32) -> Result<Poly> {
        self.check_same(other)?;
        Ok(self.mul_impl(other, Some(max_degree)))
    }

    fn mul_impl(&self, other: &Poly, max_degree: Option<u32>) -> Poly {
        let mut out = Poly::zero(self.nvars);
        if self.is_zero() || other.is_zero() {
            return out;
        }
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if let Some(maxd) = max_degree {
                if da > maxd {
                    continue;
                }
            }
            for (mb, cb) in &other.terms {
                if let Some(maxd) = max_degree {
                    if da + mb.degree() > maxd {
                        continue;
                    }
                }
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_impl(&base, None);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_impl(&base, None);
            }
        }
        acc
    }

    /// Drops every term of total degree above `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= max_degree)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Formal partial derivative with respect to `x_i` (0-based index).
    pub fn partial(&self, i: usize) -> Result<Poly> {
        if i >= self.nvars {
            return Err(Error::IndexOutOfRange {
                index: i,
                nvars: self.nvars,
            });
        }
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = *m;
            m2.0[i] = e - 1;
            out.add_term(m2, c * Rat::int(e as i64));
        }
        Ok(out)
    }

    pub fn gradient(&self) -> Vec<Poly> {
        (0..self.nvars)
            .map(|i| self.partial(i).expect("index in range"))
            .collect()
    }

    /// Directional derivative `Σ v_i ∂p/∂x_i` along the vector field `v`.
    pub fn dir_deriv(&self, v: &[Poly]) -> Result<Poly> {
        self.dir_deriv_impl(v, None)
    }

    /// Directional derivative with the result truncated at `max_degree`.
    pub fn dir_deriv_truncated(&self, v: &[Poly], max_degree: u32) -> Result<Poly> {
        self.dir_deriv_impl(v, Some(max_degree))
    }

    fn dir_deriv_impl(&self, v: &[Poly], max_degree: Option<u32>) -> Result<Poly> {
        if v.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: v.len(),
            });
        }
        let mut out = Poly::zero(self.nvars);
        for (i, vi) in v.iter().enumerate() {
            self.check_same(vi)?;
            if vi.is_zero() {
                continue;
            }
            let d = self.partial(i)?;
            let term = vi.mul_impl(&d, max_degree);
            out = out.checked_add(&term)?;
        }
        Ok(out)
    }

    /// Exact value at `point`.
    pub fn eval(&self, point: &[Rat]) -> Result<Rat> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        let mut powers: Vec<Vec<Rat>> = vec![vec![Rat::one()]; self.nvars];
        let mut total = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, p) in powers.iter_mut().enumerate() {
                let e = m.0[i] as usize;
                if e == 0 {
                    continue;
                }
                while p.len() <= e {
                    let next = p.last().unwrap() * &point[i];
                    p.push(next);
                }
                t *= &p[e];
            }
            total += t;
        }
        Ok(total)
    }

    /// Value at the origin.
    pub fn eval_origin(&self) -> Rat {
        self.constant_term()
    }

    /// Gradient at the origin: the linear coefficients.
    pub fn linear_part(&self) -> Vec<Rat> {
        (0..self.nvars).map(|i| self.coeff(&Monomial::var(i))).collect()
    }

    /// Composition `p(g_1, …, g_nvars)`; every `g_i` must share one variable
    /// count, which becomes the variable count of the result.
    pub fn substitute(&self, values: &[Poly]) -> Result<Poly> {
        if values.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: values.len(),
            });
        }
        let target_nvars = match values.first() {
            Some(v) => v.nvars,
            None => return Ok(self.clone()),
        };
        for v in values {
            if v.nvars != target_nvars {
                return Err(Error::DimensionMismatch {
                    expected: target_nvars,
                    found: v.nvars,
                });
            }
        }
        let mut powers: Vec<Vec<Poly>> = vec![vec![Poly::one(target_nvars)]; self.nvars];
        let mut out = Poly::zero(target_nvars);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target_nvars, c.clone());
            for (i, p) in powers.iter_mut().enumerate() {
                let e = m.0[i] as usize;
                if e == 0 {
                    continue;
                }
                while p.len() <= e {
                    let next = p.last().unwrap().mul_impl(&values[i], None);
                    p.push(next);
                }
                t = t.mul_impl(&p[e], None);
            }
            out = out.checked_add(&t)?;
        }
        Ok(out)
    }

    /// `p ∘ A`, i.e. `x ↦ p(A x)`.
    pub fn compose_linear(&self, a: &RatMatrix) -> Result<Poly> {
        if a.rows() != self.nvars || a.cols() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: if a.rows() != self.nvars {
                    a.rows()
                } else {
                    a.cols()
                },
            });
        }
        let n = self.nvars;
        let images: Vec<Poly> = (0..n)
            .map(|i| {
                let mut p = Poly::zero(n);
                for j in 0..n {
                    p.add_term(Monomial::var(j), a.get(i, j).clone());
                }
                p
            })
            .collect();
        self.substitute(&images)
    }

    /// `x ↦ p(x + shift)`.
    pub fn shift(&self, shift: &[Rat]) -> Result<Poly> {
        if shift.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: shift.len(),
            });
        }
        let n = self.nvars;
        let images: Vec<Poly> = (0..n)
            .map(|i| {
                let mut p = Poly::var(n, i);
                p.add_term(Monomial::one(), shift[i].clone());
                p
            })
            .collect();
        self.substitute(&images)
    }

    /// Renders with the given variable names (`x1, x2, …` when `None`).
    pub fn display_with<'a>(&'a self, names: Option<&'a [String]>) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    names: Option<&'a [String]>,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.poly;
        if p.is_zero() {
            return write!(f, "0");
        }
        let name = |i: usize| -> String {
            match self.names {
                Some(ns) => ns[i].clone(),
                None => format!("x{}", i + 1),
            }
        };
        // Highest total degree first, then descending exponent vectors.
        let mut terms: Vec<(&Monomial, &Rat)> = p.terms.iter().collect();
        terms.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then(b.0.cmp(a.0)));
        for (idx, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.signum() < 0;
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for i in 0..p.nvars {
                match m.0[i] {
                    0 => {}
                    1 => factors.push(name(i)),
                    e => factors.push(format!("{}^{}", name(i), e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(None))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.nvars, self)
    }
}

// Operator forms panic on a variable-count mismatch; use the `checked_*`
// methods when the operands come from untrusted input.
impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("nvars mismatch in Poly addition")
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("nvars mismatch in Poly subtraction")
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("nvars mismatch in Poly product")
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&Rat::int(-1))
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}
