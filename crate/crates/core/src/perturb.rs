//! Perturbation lab: versal unfoldings of the corank-one families A, B and C,
//! their n-Morin points at fixed parameters, and cross-checks of the point
//! coordinates and invariants against closed-form tables.
//!
//! Source coordinates of an unfolding are `(t, x2, …, xn)`; the map is
//! `(q, x2, …, xn)`, so `λ = q_t` and `η = ∂t`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::germ::MapGerm;
use crate::morin::{recognize_morin, recognize_morin_at, MorinInvariant, MorinResult};
use crate::par::par_map;
use crate::point::{AlgebraicPoint, PointEval};
use crate::poly::{Monomial, Poly};
use crate::rat::Rat;
use crate::univariate::UPoly;

pub const DEFAULT_BITS: u32 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum UnfoldingFamily {
    A,
    B,
    C,
}

impl fmt::Display for UnfoldingFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            UnfoldingFamily::A => "A",
            UnfoldingFamily::B => "B",
            UnfoldingFamily::C => "C",
        };
        f.write_str(s)
    }
}

impl FromStr for UnfoldingFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(UnfoldingFamily::A),
            "B" | "b" => Ok(UnfoldingFamily::B),
            "C" | "c" => Ok(UnfoldingFamily::C),
            other => Err(Error::InvalidSpec(format!("unknown family {other:?}"))),
        }
    }
}

/// One member of a family at fixed parameter values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnfoldingSpec {
    pub family: UnfoldingFamily,
    pub n: usize,
    /// Degree of `q̄` (family A only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    pub params: Vec<Rat>,
}

impl UnfoldingSpec {
    pub fn new(family: UnfoldingFamily, n: usize, l: Option<usize>, params: Vec<Rat>) -> Result<Self> {
        let spec = UnfoldingSpec { family, n, l, params };
        spec.validate()?;
        Ok(spec)
    }

    pub fn family_a(n: usize, l: usize, params: Vec<Rat>) -> Result<Self> {
        Self::new(UnfoldingFamily::A, n, Some(l), params)
    }

    pub fn family_b(n: usize, u0: Rat) -> Result<Self> {
        Self::new(UnfoldingFamily::B, n, None, vec![u0])
    }

    pub fn family_c(n: usize, u0: Rat, u1: Rat) -> Result<Self> {
        Self::new(UnfoldingFamily::C, n, None, vec![u0, u1])
    }

    /// Number of unfolding parameters.
    pub fn param_count(family: UnfoldingFamily, l: Option<usize>) -> usize {
        match family {
            UnfoldingFamily::A => l.unwrap_or(2).saturating_sub(1),
            UnfoldingFamily::B => 1,
            UnfoldingFamily::C => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=5).contains(&self.n) {
            return Err(Error::InvalidSpec(format!("n = {} outside 2..=5", self.n)));
        }
        match (self.family, self.l) {
            (UnfoldingFamily::A, None) => {
                return Err(Error::InvalidSpec("family A needs l".into()));
            }
            (UnfoldingFamily::A, Some(l)) if l < 2 => {
                return Err(Error::InvalidSpec(format!("l = {l} < 2")));
            }
            (UnfoldingFamily::B | UnfoldingFamily::C, Some(_)) => {
                return Err(Error::InvalidSpec("l only applies to family A".into()));
            }
            _ => {}
        }
        let want = Self::param_count(self.family, self.l);
        if self.params.len() != want {
            return Err(Error::InvalidSpec(format!(
                "family {} takes {want} parameter(s), got {}",
                self.family,
                self.params.len()
            )));
        }
        Ok(())
    }

    /// The genotype `q(t, 0, 0)`, e.g. `t^4`.
    pub fn genotype(&self) -> String {
        let e = match self.family {
            UnfoldingFamily::A => self.n + 1,
            _ => self.n + 2,
        };
        format!("t^{e}")
    }

    /// Maximal number of n-Morin points over stable perturbations.
    pub fn c_f(&self) -> usize {
        match self.family {
            UnfoldingFamily::A => self.l.unwrap_or(2),
            UnfoldingFamily::B => 2,
            UnfoldingFamily::C => 4,
        }
    }

    pub fn var_names(&self) -> Vec<String> {
        let mut v = vec!["t".to_string()];
        v.extend((2..=self.n).map(|i| format!("x{i}")));
        v
    }
}

fn tpow(nv: usize, e: u32) -> Poly {
    Poly::var(nv, 0).pow(e)
}

fn c(v: i64) -> Rat {
    Rat::int(v)
}

/// `F_u` at the spec's parameter values.
pub fn build_unfolding(spec: &UnfoldingSpec) -> Result<MapGerm> {
    spec.validate()?;
    let n = spec.n;
    let q = match spec.family {
        UnfoldingFamily::A => {
            let xn = Poly::var(n, n - 1);
            let qbar = qbar(spec, &xn);
            let mut q = &tpow(n, n as u32 + 1) + &(&qbar * &tpow(n, n as u32 - 1));
            for i in 2..n {
                q = &q + &(&Poly::var(n, i - 1) * &tpow(n, i as u32 - 1));
            }
            q
        }
        UnfoldingFamily::B | UnfoldingFamily::C => {
            let values: Vec<Poly> = (0..n)
                .map(|i| Poly::var(n, i))
                .chain(spec.params.iter().map(|u| Poly::constant(n, u.clone())))
                .chain((spec.params.len()..2).map(|_| Poly::zero(n)))
                .collect();
            symbolic_q(spec.family, n).substitute(&values)?
        }
    };
    let mut comps = vec![q];
    comps.extend((1..n).map(|i| Poly::var(n, i)));
    MapGerm::new(n, comps)
}

/// `q̄(xn) = xn^l + u0 + u1 xn + … + u_{l-2} xn^{l-2}` for a variable `xn`.
fn qbar(spec: &UnfoldingSpec, xn: &Poly) -> Poly {
    let l = spec.l.unwrap_or(2) as u32;
    let mut q = xn.pow(l);
    for (j, u) in spec.params.iter().enumerate() {
        q = &q + &xn.pow(j as u32).scale(u);
    }
    q
}

/// `q̄` as a univariate polynomial in `xn`.
pub fn qbar_upoly(spec: &UnfoldingSpec) -> UPoly {
    let l = spec.l.unwrap_or(2);
    let mut coeffs = vec![Rat::zero(); l + 1];
    coeffs[..spec.params.len()].clone_from_slice(&spec.params);
    coeffs[l] = Rat::one();
    UPoly::new(coeffs)
}

// Symbolic ring for families B and C: variables (t, x2, …, xn, u0, u1).

fn sym_nvars(n: usize) -> usize {
    n + 2
}

fn sym_x(n: usize, i: usize) -> Poly {
    Poly::var(sym_nvars(n), i - 1)
}

fn sym_u(n: usize, j: usize) -> Poly {
    Poly::var(sym_nvars(n), n + j)
}

/// Builds `Σ c · t^a u0^b u1^d` in the symbolic ring.
/// `coef · t^a · u0^b · u1^d`.
type SymTerm = (i64, u16, u16, u16);

fn sym_terms(n: usize, terms: &[SymTerm]) -> Poly {
    let nv = sym_nvars(n);
    let mut p = Poly::zero(nv);
    for &(coef, a, b, d) in terms {
        let mut e = vec![0u16; nv];
        e[0] = a;
        e[n] = b;
        e[n + 1] = d;
        p = &p + &Poly::term(nv, c(coef), Monomial::from_exps(&e));
    }
    p
}

fn symbolic_q(family: UnfoldingFamily, n: usize) -> Poly {
    let nv = sym_nvars(n);
    let t = |e: usize| tpow(nv, e as u32);
    match family {
        UnfoldingFamily::B => {
            let mut q = &t(n + 2) + &(&sym_u(n, 0) * &t(n));
            for i in 2..=n {
                q = &q + &(&sym_x(n, i) * &t(i - 1));
            }
            q
        }
        UnfoldingFamily::C => {
            let xn = sym_x(n, n);
            let inner = &(&xn.pow(2) + &sym_u(n, 0)) + &(&sym_u(n, 1) * &xn);
            let mut q = &(&t(n + 2) + &(&inner * &t(n - 1))) + &(&xn * &t(n));
            for i in 2..n {
                q = &q + &(&sym_x(n, i) * &t(i - 1));
            }
            q
        }
        UnfoldingFamily::A => unreachable!("family A is built at fixed parameters"),
    }
}

fn sym_names(n: usize) -> Vec<String> {
    let mut v = vec!["t".to_string()];
    v.extend((2..=n).map(|i| format!("x{i}")));
    v.extend(["u0".to_string(), "u1".to_string()]);
    v
}

fn t_derivative(p: &Poly, times: usize) -> Poly {
    (0..times).fold(p.clone(), |acc, _| acc.partial(0).expect("t is variable 0"))
}

/// The n-Morin locus of a family in the symbolic ring: a single equation in
/// `(t, u)` plus each `x_i` as a polynomial in `(t, u)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Locus {
    pub n: usize,
    pub equation: Poly,
    /// `coords[i - 2]` is `x_i`.
    pub coords: Vec<Poly>,
}

impl Locus {
    pub fn render_equation(&self) -> String {
        let names = sym_names(self.n);
        format!("{} = 0", self.equation.display_with(Some(&names)))
    }

    pub fn render_coord(&self, i: usize) -> String {
        let names = sym_names(self.n);
        format!("x{i} = {}", self.coords[i - 2].display_with(Some(&names)))
    }
}

/// Derives the locus `λ = ηλ = … = η^{n-1}λ = 0` by back-substitution. Every
/// `η^jλ = ∂t^{j+1} q` is linear in the `x_i` it contains, and the lowest of
/// them carries a constant coefficient, so the system is triangular.
pub fn derive_locus(family: UnfoldingFamily, n: usize) -> Result<Locus> {
    if family == UnfoldingFamily::A || !(2..=5).contains(&n) {
        return Err(Error::InvalidSpec(format!("no parametrized locus for family {family}, n = {n}")));
    }
    let nv = sym_nvars(n);
    let q = symbolic_q(family, n);
    let mut solved: Vec<Option<Poly>> = vec![None; n + 1];
    let current = |solved: &Vec<Option<Poly>>, p: &Poly| -> Poly {
        let mut values = vec![Poly::var(nv, 0)];
        for (i, s) in solved.iter().enumerate().skip(2) {
            values.push(s.clone().unwrap_or_else(|| sym_x(n, i)));
        }
        values.extend([sym_u(n, 0), sym_u(n, 1)]);
        p.substitute(&values).expect("same ring")
    };
    let solve_for = |solved: &mut Vec<Option<Poly>>, order: usize, i: usize| {
        let e = current(solved, &t_derivative(&q, order));
        let mut zeroed: Vec<Poly> = (0..nv).map(|v| Poly::var(nv, v)).collect();
        zeroed[i - 1] = Poly::zero(nv);
        let rest = e.substitute(&zeroed).expect("same ring");
        let coef = (&e - &rest).coeff(&Monomial::var(i - 1));
        solved[i] = Some(rest.scale(&(-coef.recip())));
    };
    let equation = match family {
        UnfoldingFamily::B => {
            for order in (1..n).rev() {
                solve_for(&mut solved, order, order + 1);
            }
            t_derivative(&q, n)
        }
        _ => {
            solve_for(&mut solved, n, n);
            for order in (1..n - 1).rev() {
                solve_for(&mut solved, order, order + 1);
            }
            current(&solved, &t_derivative(&q, n - 1))
        }
    };
    let equation = normalize_equation(&equation);
    let mut coords: Vec<Poly> = (2..=n).map(|i| solved[i].clone().expect("all solved")).collect();
    if family == UnfoldingFamily::B {
        // The equation is c t^2 + u0; eliminate u0.
        let mut values: Vec<Poly> = (0..nv).map(|v| Poly::var(nv, v)).collect();
        values[n] = &sym_u(n, 0) - &equation;
        coords = coords
            .iter()
            .map(|p| p.substitute(&values))
            .collect::<Result<_>>()?;
    }
    Ok(Locus { n, equation, coords })
}

/// Scales so that the `u0` coefficient is 1 (both families have one).
fn normalize_equation(p: &Poly) -> Poly {
    let n = p.nvars() - 2;
    let mut e = vec![0u16; p.nvars()];
    e[n] = 1;
    let k = p.coeff(&Monomial::from_exps(&e));
    if k.is_zero() {
        p.clone()
    } else {
        p.scale(&k.recip())
    }
}

/// The locus as printed in the closed-form tables.
pub fn printed_locus(family: UnfoldingFamily, n: usize) -> Result<Locus> {
    let t = |coef: i64, a: u16| (coef, a, 0u16, 0u16);
    let (eq, coords): (Vec<SymTerm>, Vec<Vec<SymTerm>>) = match (family, n) {
        (UnfoldingFamily::B, 2) => (vec![t(6, 2), (1, 0, 1, 0)], vec![vec![t(8, 3)]]),
        (UnfoldingFamily::B, 3) => (
            vec![t(10, 2), (1, 0, 1, 0)],
            vec![vec![t(105, 4)], vec![t(-40, 3)]],
        ),
        (UnfoldingFamily::B, 4) => (
            vec![t(15, 2), (1, 0, 1, 0)],
            vec![vec![t(24, 5)], vec![t(-45, 4)], vec![t(40, 3)]],
        ),
        (UnfoldingFamily::B, 5) => (
            vec![t(21, 2), (1, 0, 1, 0)],
            vec![vec![t(-35, 6)], vec![t(84, 5)], vec![t(-105, 4)], vec![t(70, 3)]],
        ),
        (UnfoldingFamily::C, 2) => (
            vec![t(36, 4), t(-8, 3), (-6, 2, 0, 1), (1, 0, 1, 0)],
            vec![vec![t(-6, 2)]],
        ),
        (UnfoldingFamily::C, 3) => (
            vec![t(100, 4), t(-20, 3), (-10, 2, 0, 1), (1, 0, 1, 0)],
            vec![
                vec![t(25, 4), t(-200, 5), (20, 3, 0, 1), (-2, 1, 1, 0)],
                vec![t(-10, 2)],
            ],
        ),
        (UnfoldingFamily::C, 4) => (
            vec![t(255, 4), t(-40, 3), (-15, 2, 0, 1), (1, 0, 1, 0)],
            vec![
                vec![t(675, 6), t(-96, 5), (-45, 4, 0, 1), (3, 2, 1, 0)],
                vec![t(-675, 5), t(75, 4), (45, 3, 0, 1), (-3, 1, 1, 0)],
                vec![t(-15, 2)],
            ],
        ),
        (UnfoldingFamily::C, 5) => (
            vec![t(441, 4), t(-70, 3), (-21, 2, 0, 1), (1, 0, 1, 0)],
            vec![
                vec![t(-1764, 7), t(245, 6), (84, 5, 0, 1), (-4, 3, 1, 0)],
                vec![t(2640, 6), t(-336, 5), (-126, 4, 0, 1), (6, 2, 1, 0)],
                vec![t(-1764, 5), t(175, 4), (84, 3, 0, 1), (-4, 1, 1, 0)],
                vec![t(-21, 2)],
            ],
        ),
        _ => {
            return Err(Error::InvalidSpec(format!("no printed locus for family {family}, n = {n}")));
        }
    };
    Ok(Locus {
        n,
        equation: sym_terms(n, &eq),
        coords: coords.iter().map(|c| sym_terms(n, c)).collect(),
    })
}

/// A mismatch between a printed formula and its re-derivation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub family: UnfoldingFamily,
    pub n: usize,
    pub item: String,
    pub printed: String,
    pub derived: String,
}

/// Compares the printed locus with the derived one. Equations are compared
/// up to a nonzero scalar, coordinates exactly.
pub fn locus_discrepancies(family: UnfoldingFamily, n: usize) -> Result<Vec<Discrepancy>> {
    let derived = derive_locus(family, n)?;
    let printed = printed_locus(family, n)?;
    let mut out = Vec::new();
    let mk = |item: String, printed: String, derived: String| Discrepancy {
        family,
        n,
        item,
        printed,
        derived,
    };
    if normalize_equation(&printed.equation) != derived.equation {
        out.push(mk(
            "equation".into(),
            printed.render_equation(),
            derived.render_equation(),
        ));
    }
    for i in 2..=n {
        if printed.coords[i - 2] != derived.coords[i - 2] {
            out.push(mk(format!("x{i}"), printed.render_coord(i), derived.render_coord(i)));
        }
    }
    Ok(out)
}

/// Result of substituting a family-B parametrization into `λ, …, η^{n-1}λ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub n: usize,
    pub source: &'static str,
    pub holds: bool,
    /// Nonzero residuals `η^jλ` as polynomials in `t`.
    pub residuals: Vec<String>,
}

/// Substitutes `x_i = x_i(t)` and `u0 = -c_n t^2` into `η^jλ`, `j < n`, and
/// checks that every result vanishes identically in `t`.
pub fn family_b_identity(n: usize, printed: bool) -> Result<IdentityCheck> {
    let locus = if printed {
        printed_locus(UnfoldingFamily::B, n)?
    } else {
        derive_locus(UnfoldingFamily::B, n)?
    };
    let nv = sym_nvars(n);
    let cn = locus.equation.coeff(&Monomial::from_exps(&{
        let mut e = vec![0u16; nv];
        e[0] = 2;
        e
    }));
    // Values in the one-variable ring of t.
    let to_t = |p: &Poly| -> Poly {
        let mut vals = vec![Poly::var(1, 0)];
        vals.extend((1..nv).map(|_| Poly::zero(1)));
        p.substitute(&vals).expect("same ring")
    };
    let mut values = vec![Poly::var(1, 0)];
    values.extend(locus.coords.iter().map(to_t));
    values.push(Poly::var(1, 0).pow(2).scale(&-cn));
    values.push(Poly::zero(1));
    let q = symbolic_q(UnfoldingFamily::B, n);
    let mut residuals = Vec::new();
    for j in 0..n {
        let e = t_derivative(&q, j + 1).substitute(&values)?;
        if !e.is_zero() {
            let names = ["t".to_string()];
            residuals.push(format!("eta^{j} lambda = {}", e.display_with(Some(&names))));
        }
    }
    Ok(IdentityCheck {
        n,
        source: if printed { "printed" } else { "derived" },
        holds: residuals.is_empty(),
        residuals,
    })
}

/// Sign formulas of the invariant column, as polynomials in the source
/// variables at fixed parameters. For `n ≡ 0 mod 4` there are two entries.
pub fn table_invariants(spec: &UnfoldingSpec) -> Result<Vec<Poly>> {
    spec.validate()?;
    let n = spec.n;
    if spec.family == UnfoldingFamily::A {
        let dq = qbar(spec, &Poly::var(n, n - 1)).partial(n - 1)?;
        return Ok(match n {
            2 => vec![Poly::one(n)],
            4 => vec![Poly::one(n), dq],
            _ => vec![dq],
        });
    }
    let t = |coef: i64, a: u16| (coef, a, 0u16, 0u16);
    let formulas: Vec<Vec<(i64, u16, u16, u16)>> = match (spec.family, n) {
        (UnfoldingFamily::B, 3) => vec![vec![t(1, 2)]],
        (UnfoldingFamily::B, 4) => vec![vec![t(1, 1)], vec![t(1, 1)]],
        (UnfoldingFamily::B, _) => vec![vec![t(1, 1)]],
        (UnfoldingFamily::C, 2) => vec![vec![t(1, 1)]],
        (UnfoldingFamily::C, 3) => vec![vec![t(-20, 2), t(3, 1), (1, 0, 0, 1)]],
        (UnfoldingFamily::C, 4) => vec![
            vec![t(1, 1)],
            vec![t(30, 3), t(-4, 2), (-1, 1, 0, 1)],
        ],
        _ => vec![vec![t(-42, 3), t(5, 2), (1, 1, 0, 1)]],
    };
    let mut values: Vec<Poly> = (0..n).map(|i| Poly::var(n, i)).collect();
    values.extend(spec.params.iter().map(|u| Poly::constant(n, u.clone())));
    values.extend((spec.params.len()..2).map(|_| Poly::zero(n)));
    formulas
        .iter()
        .map(|f| sym_terms(n, f).substitute(&values))
        .collect()
}

/// The classifier's invariant signs: one sign, or for `n ≡ 0 mod 4` the
/// pair `(sign η^nλ, sign det grad(λ, …, η^{n-1}λ))`.
pub fn classifier_invariants(r: &MorinResult) -> Vec<i8> {
    match r.invariant {
        MorinInvariant::None => vec![],
        MorinInvariant::EtaK { sign }
        | MorinInvariant::GradDet { sign }
        | MorinInvariant::Curvature { sign }
        | MorinInvariant::Product { sign } => vec![sign],
        MorinInvariant::Pair { eta_k, grad_det } => vec![eta_k, grad_det],
    }
}

/// Isolating interval of one coordinate of a Morin point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coordinate {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<Rat>,
    pub lo: Rat,
    pub hi: Rat,
    pub lo_decimal: String,
    pub hi_decimal: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorinPoint {
    /// Defining polynomial of the parameter (`t`, or `xn` for family A).
    pub root_of: String,
    pub location: Vec<Coordinate>,
    pub k: usize,
    pub label: String,
    pub table_invariant: Vec<i8>,
    pub classifier_invariant: Vec<i8>,
    /// `translated` when the point is rational and was re-centred at the
    /// origin, `algebraic` when the criteria were evaluated in `Q(α)`.
    pub method: &'static str,
    /// The point is `n`-Morin and both invariants agree.
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerturbationReport {
    pub spec: UnfoldingSpec,
    pub genotype: String,
    pub equation: String,
    pub points: Vec<MorinPoint>,
    pub count: usize,
    pub c_f_bound: usize,
    pub stable: bool,
    pub notes: Vec<String>,
}

impl PerturbationReport {
    pub fn all_verified(&self) -> bool {
        self.points.iter().all(|p| p.verified)
    }
}

fn upoly_of_t(p: &Poly, params: &[Rat]) -> Result<UPoly> {
    let nv = p.nvars();
    let n = nv - 2;
    let mut vals = vec![Poly::var(1, 0)];
    vals.extend((1..n).map(|_| Poly::zero(1)));
    for j in 0..2 {
        vals.push(Poly::constant(1, params.get(j).cloned().unwrap_or_else(Rat::zero)));
    }
    let s = p.substitute(&vals)?;
    let deg = s.total_degree() as usize;
    let mut coeffs = vec![Rat::zero(); deg + 1];
    for (m, c) in s.terms() {
        coeffs[m.exp(0) as usize] = c.clone();
    }
    Ok(UPoly::new(coeffs))
}

/// Range of `p` over `[lo, hi]` by termwise interval evaluation.
fn upoly_range(p: &UPoly, lo: &Rat, hi: &Rat) -> (Rat, Rat) {
    let (mut a, mut b) = (Rat::zero(), Rat::zero());
    for (k, coef) in p.coeffs().iter().enumerate() {
        if coef.is_zero() {
            continue;
        }
        let (pl, ph) = (lo.pow(k as u32), hi.pow(k as u32));
        let (mut xl, mut xh) = if pl <= ph { (pl, ph) } else { (ph, pl) };
        if k % 2 == 0 && k > 0 && lo.signum() < 0 && hi.signum() > 0 {
            xl = Rat::zero();
            xh = lo.pow(k as u32).max(hi.pow(k as u32));
        }
        let (tl, th) = if coef.signum() > 0 {
            (coef * &xl, coef * &xh)
        } else {
            (coef * &xh, coef * &xl)
        };
        a += tl;
        b += th;
    }
    (a, b)
}

fn locate(pt: &AlgebraicPoint, names: &[String], bits: u32) -> Vec<Coordinate> {
    let digits = (bits as usize * 3).div_ceil(10);
    let threshold = Rat::from_bigints(1.into(), num_bigint::BigInt::from(1) << bits).expect("nonzero");
    let exact = pt.rational_coords();
    let mut alpha = pt.alpha().clone();
    let mut refine = bits;
    let ranges = loop {
        alpha.refine_bits(refine);
        let (lo, hi) = alpha.interval();
        let r: Vec<(Rat, Rat)> = pt.coords().iter().map(|c| upoly_range(c, lo, hi)).collect();
        if r.iter().all(|(a, b)| b - a < threshold) || exact.is_some() {
            break r;
        }
        refine += 8;
    };
    names
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let ex = exact.as_ref().map(|v| v[i].clone());
            let (lo, hi) = match &ex {
                Some(v) => (v.clone(), v.clone()),
                None => ranges[i].clone(),
            };
            Coordinate {
                name: name.clone(),
                lo_decimal: lo.to_decimal(digits),
                hi_decimal: hi.to_decimal(digits),
                exact: ex,
                lo,
                hi,
            }
        })
        .collect()
}

fn examine_point(
    f: &MapGerm,
    spec: &UnfoldingSpec,
    pt: &AlgebraicPoint,
    root_of: &str,
    formulas: &[Poly],
    bits: u32,
) -> MorinPoint {
    let n = spec.n;
    let (result, method) = match pt.rational_coords() {
        Some(p) => (f.translate(&p).and_then(|g| recognize_morin(&g)), "translated"),
        None => (recognize_morin_at(f, pt), "algebraic"),
    };
    let table: Vec<i8> = formulas.iter().map(|p| pt.sign(&pt.value(p))).collect();
    let (k, label, classifier) = match &result {
        Ok(r) => (r.k, r.label.to_string(), classifier_invariants(r)),
        Err(e) => (0, format!("not Morin: {e}"), vec![]),
    };
    MorinPoint {
        root_of: root_of.to_string(),
        location: locate(pt, &spec.var_names(), bits),
        k,
        label,
        verified: k == n && table == classifier,
        table_invariant: table,
        classifier_invariant: classifier,
        method,
    }
}

/// Enumerates the n-Morin points of `F_u` at the default precision.
pub fn morin_points(spec: &UnfoldingSpec) -> Result<PerturbationReport> {
    morin_points_with(spec, DEFAULT_BITS)
}

/// Enumerates the n-Morin points, isolating coordinates to `2^-bits`.
pub fn morin_points_with(spec: &UnfoldingSpec, bits: u32) -> Result<PerturbationReport> {
    spec.validate()?;
    let n = spec.n;
    let f = build_unfolding(spec)?;
    let formulas = table_invariants(spec)?;
    let mut notes = Vec::new();
    let (equation, coords, param_name) = match spec.family {
        UnfoldingFamily::A => {
            let mut coords = vec![UPoly::zero(); n];
            coords[n - 1] = UPoly::t();
            (qbar_upoly(spec), coords, format!("x{n}"))
        }
        family => {
            let locus = derive_locus(family, n)?;
            let mut eq = upoly_of_t(&locus.equation, &spec.params)?;
            if eq.is_zero() {
                return Err(Error::InvalidSpec("locus equation vanishes identically".into()));
            }
            let mut zero_roots = 0;
            while eq.degree().unwrap_or(0) > 0 && eq.coeff(0).is_zero() {
                eq = eq.div_rem(&UPoly::t()).0;
                zero_roots += 1;
            }
            if zero_roots > 0 {
                notes.push(format!("root t = 0 (multiplicity {zero_roots}) excluded"));
            }
            let mut coords = vec![UPoly::t()];
            for x in &locus.coords {
                coords.push(upoly_of_t(x, &spec.params)?);
            }
            (eq, coords, "t".to_string())
        }
    };
    let stable = equation.is_squarefree();
    if !stable {
        notes.push("non-stable parameter: repeated root".into());
    }
    let root_of = format!("{} = 0 in {param_name}", render_upoly(&equation, &param_name));
    let points: Vec<MorinPoint> = equation
        .isolate_real_roots()
        .into_iter()
        .map(|root| {
            let pt = AlgebraicPoint::new(root.to_algebraic(), coords.clone());
            examine_point(&f, spec, &pt, &root_of, &formulas, bits)
        })
        .collect();
    Ok(PerturbationReport {
        spec: spec.clone(),
        genotype: spec.genotype(),
        equation: root_of,
        count: points.len(),
        points,
        c_f_bound: spec.c_f(),
        stable,
        notes,
    })
}

fn render_upoly(p: &UPoly, var: &str) -> String {
    let names = [var.to_string()];
    let terms = p.coeffs().iter().enumerate().map(|(k, c)| (vec![k as u16], c.clone()));
    let poly = Poly::from_terms(1, terms).expect("one variable");
    poly.display_with(Some(&names)).to_string()
}

/// One axis `lo:hi:step` of a parameter grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Axis {
    pub lo: Rat,
    pub hi: Rat,
    pub step: Rat,
}

/// A rectangular lattice of parameter values, e.g. `-2:4:1/2,-2:2:1/4`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParamGrid {
    pub axes: Vec<Axis>,
}

impl FromStr for ParamGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidSpec(format!("grid {s:?}: {why}"));
        let axes = s
            .split(',')
            .map(|part| {
                let fields: Vec<&str> = part.split(':').map(str::trim).collect();
                if fields.len() != 3 {
                    return Err(bad("each axis is lo:hi:step"));
                }
                let r: Vec<Rat> = fields
                    .iter()
                    .map(|f| f.parse::<Rat>().map_err(|_| bad("bad rational")))
                    .collect::<Result<_>>()?;
                if r[2].signum() <= 0 || r[0] > r[1] {
                    return Err(bad("need lo <= hi and step > 0"));
                }
                Ok(Axis {
                    lo: r[0].clone(),
                    hi: r[1].clone(),
                    step: r[2].clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ParamGrid { axes })
    }
}

impl ParamGrid {
    /// All lattice points, first axis varying slowest.
    pub fn points(&self) -> Vec<Vec<Rat>> {
        let mut out = vec![vec![]];
        for axis in &self.axes {
            let mut vals = Vec::new();
            let mut v = axis.lo.clone();
            while v <= axis.hi {
                vals.push(v.clone());
                v = &v + &axis.step;
            }
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    vals.iter().map(move |v| {
                        let mut p = prefix.clone();
                        p.push(v.clone());
                        p
                    })
                })
                .collect();
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub family: UnfoldingFamily,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    pub grid: ParamGrid,
    pub c_f: usize,
    pub max_count: usize,
    pub attained: bool,
    /// Unverified points at stable grid points.
    pub unverified_points: usize,
    /// First grid point (in grid order) reaching `max_count`.
    pub argmax: Option<Vec<Rat>>,
    pub unstable_points: usize,
    pub reports: Vec<PerturbationReport>,
}

/// Runs `morin_points` over every grid point; aggregation is in grid order.
pub fn sweep(template: &UnfoldingSpec, grid: &ParamGrid, bits: u32) -> Result<SweepReport> {
    let want = UnfoldingSpec::param_count(template.family, template.l);
    if grid.axes.len() != want {
        return Err(Error::InvalidSpec(format!(
            "grid has {} axes, family {} takes {want} parameter(s)",
            grid.axes.len(),
            template.family
        )));
    }
    let specs: Vec<UnfoldingSpec> = grid
        .points()
        .into_iter()
        .map(|params| UnfoldingSpec {
            params,
            ..template.clone()
        })
        .collect();
    let reports = par_map(&specs, |s| morin_points_with(s, bits)).into_iter().collect::<Result<Vec<_>>>()?;
    let max_count = reports.iter().map(|r| r.count).max().unwrap_or(0);
    let argmax = reports
        .iter()
        .find(|r| r.count == max_count)
        .map(|r| r.spec.params.clone());
    Ok(SweepReport {
        family: template.family,
        n: template.n,
        l: template.l,
        grid: grid.clone(),
        c_f: template.c_f(),
        max_count,
        attained: max_count == template.c_f(),
        argmax,
        unstable_points: reports.iter().filter(|r| !r.stable).count(),
        unverified_points: reports
            .iter()
            .filter(|r| r.stable)
            .map(|r| r.points.iter().filter(|p| !p.verified).count())
            .sum(),
        reports,
    })
}
