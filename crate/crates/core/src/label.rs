//! Class labels, their sign invariants and normal-form representatives.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::germ::MapGerm;
use crate::poly::Poly;
use crate::rat::Rat;

/// Singularity type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Regular,
    Fold,
    Cusp,
    Swallowtail,
    Butterfly,
    /// k-Morin for `k >= 5`.
    Morin(usize),
    Lips,
    Beaks,
    PlanarSwallowtail,
    WhitneyUmbrella,
    S1Plus,
    S1Minus,
    Sigma20Hyp,
    Sigma20Elli,
    Unrecognized,
}

impl Family {
    /// Morin family for `k >= 1`; `k = 0` is the regular germ.
    pub fn morin(k: usize) -> Family {
        match k {
            0 => Family::Regular,
            1 => Family::Fold,
            2 => Family::Cusp,
            3 => Family::Swallowtail,
            4 => Family::Butterfly,
            k => Family::Morin(k),
        }
    }

    /// The Morin index, for Morin families.
    pub fn morin_k(&self) -> Option<usize> {
        match self {
            Family::Fold => Some(1),
            Family::Cusp => Some(2),
            Family::Swallowtail => Some(3),
            Family::Butterfly => Some(4),
            Family::Morin(k) => Some(*k),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Family::Regular => "regular".into(),
            Family::Fold => "fold".into(),
            Family::Cusp => "cusp".into(),
            Family::Swallowtail => "swallowtail".into(),
            Family::Butterfly => "butterfly".into(),
            Family::Morin(k) => format!("morin-{k}"),
            Family::Lips => "lips".into(),
            Family::Beaks => "beaks".into(),
            Family::PlanarSwallowtail => "planar-swallowtail".into(),
            Family::WhitneyUmbrella => "whitney-umbrella".into(),
            Family::S1Plus => "S1+".into(),
            Family::S1Minus => "S1-".into(),
            Family::Sigma20Hyp => "sigma20-hyp".into(),
            Family::Sigma20Elli => "sigma20-elli".into(),
            Family::Unrecognized => "unrecognized".into(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown family `{0}`")]
pub struct ParseLabelError(pub String);

impl FromStr for Family {
    type Err = ParseLabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s
            .trim()
            .to_lowercase()
            .replace(['_', ' '], "-")
            .replace('−', "-")
            .replace('⁺', "+")
            .replace('⁻', "-")
            .replace('σ', "sigma")
            .replace('²', "2")
            .replace('⁰', "0");
        let fam = match norm.as_str() {
            "regular" | "immersion" => Family::Regular,
            "fold" | "morin-1" => Family::Fold,
            "cusp" | "morin-2" => Family::Cusp,
            "swallowtail" | "morin-3" => Family::Swallowtail,
            "butterfly" | "morin-4" => Family::Butterfly,
            "lips" => Family::Lips,
            "beaks" => Family::Beaks,
            "planar-swallowtail" => Family::PlanarSwallowtail,
            "whitney-umbrella" | "umbrella" | "cross-cap" => Family::WhitneyUmbrella,
            "s1+" => Family::S1Plus,
            "s1-" => Family::S1Minus,
            "sigma20-hyp" | "hyp" | "hyperbolic-umbilic" => Family::Sigma20Hyp,
            "sigma20-elli" | "elli" | "elliptic-umbilic" => Family::Sigma20Elli,
            "unrecognized" => Family::Unrecognized,
            other => match other.strip_prefix("morin-").map(str::parse::<usize>) {
                Some(Ok(k)) if k >= 1 => Family::morin(k),
                _ => return Err(ParseLabelError(s.to_string())),
            },
        };
        Ok(fam)
    }
}

/// One sign slot of a label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SignSlot {
    Neg,
    Pos,
    Irrelevant,
}

impl SignSlot {
    /// Panics on zero.
    pub fn of(s: i8) -> SignSlot {
        match s.signum() {
            1 => SignSlot::Pos,
            -1 => SignSlot::Neg,
            _ => panic!("sign slot from zero"),
        }
    }

    pub fn value(&self) -> Option<i8> {
        match self {
            SignSlot::Neg => Some(-1),
            SignSlot::Pos => Some(1),
            SignSlot::Irrelevant => None,
        }
    }

    /// `+1` for an irrelevant slot (used to pick a representative).
    pub fn or_plus(&self) -> i8 {
        self.value().unwrap_or(1)
    }
}

/// A-isotopy class: family, signs `(ε1, ε2)` and source/target dimensions.
#[derive(Clone, Debug)]
pub struct ClassLabel {
    pub family: Family,
    pub signs: (SignSlot, SignSlot),
    pub dims: (usize, usize),
    pub normal_form: Option<MapGerm>,
}

impl PartialEq for ClassLabel {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for ClassLabel {}

impl std::hash::Hash for ClassLabel {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl ClassLabel {
    /// Builds the label and attaches its normal form.
    pub fn new(family: Family, signs: (SignSlot, SignSlot), dims: (usize, usize)) -> Self {
        let normal_form = normal_form(family, signs, dims);
        ClassLabel {
            family,
            signs,
            dims,
            normal_form,
        }
    }

    pub fn unrecognized(dims: (usize, usize)) -> Self {
        ClassLabel::new(
            Family::Unrecognized,
            (SignSlot::Irrelevant, SignSlot::Irrelevant),
            dims,
        )
    }

    fn key(&self) -> (Family, (SignSlot, SignSlot), (usize, usize)) {
        (self.family, self.signs, self.dims)
    }

    pub fn e1(&self) -> Option<i8> {
        self.signs.0.value()
    }

    pub fn e2(&self) -> Option<i8> {
        self.signs.1.value()
    }

    /// Whether this label satisfies a (possibly partial) claim.
    pub fn matches(&self, claim: &LabelClaim) -> bool {
        if self.family != claim.family {
            return false;
        }
        let ok = |want: Option<i8>, have: SignSlot| match want {
            None => true,
            Some(w) => have.value() == Some(w),
        };
        ok(claim.e1, self.signs.0) && ok(claim.e2, self.signs.1)
    }

    pub fn report(&self) -> LabelReport {
        LabelReport {
            family: self.family.name(),
            label: self.to_string(),
            e1: self.e1(),
            e2: self.e2(),
            normal_form: self.normal_form.as_ref().map(|g| g.to_string()),
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family)?;
        for (name, slot) in [("e1", self.signs.0), ("e2", self.signs.1)] {
            if let Some(v) = slot.value() {
                write!(f, " {name}={}", if v > 0 { "+1" } else { "-1" })?;
            }
        }
        Ok(())
    }
}

/// Serializable view of a label.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LabelReport {
    pub family: String,
    pub label: String,
    pub e1: Option<i8>,
    pub e2: Option<i8>,
    pub normal_form: Option<String>,
}

/// A claimed class such as `butterfly e1=-1 e2=-1`; omitted signs match
/// anything.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelClaim {
    pub family: Family,
    pub e1: Option<i8>,
    pub e2: Option<i8>,
}

impl FromStr for LabelClaim {
    type Err = ParseLabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseLabelError(s.to_string());
        let s = s.replace(',', " ");
        let mut words = s.split_whitespace();
        let family: Family = words.next().ok_or_else(err)?.parse()?;
        let mut claim = LabelClaim {
            family,
            e1: None,
            e2: None,
        };
        for w in words {
            let (key, val) = w.split_once('=').ok_or_else(err)?;
            let v = parse_sign(val).ok_or_else(err)?;
            match key.trim().to_lowercase().as_str() {
                "e" | "e1" | "eps" | "eps1" | "ε" | "ε1" | "ε₁" => claim.e1 = Some(v),
                "e2" | "eps2" | "ε2" | "ε₂" => claim.e2 = Some(v),
                _ => return Err(err()),
            }
        }
        Ok(claim)
    }
}

fn parse_sign(s: &str) -> Option<i8> {
    match s.trim().replace('−', "-").as_str() {
        "+1" | "1" | "+" => Some(1),
        "-1" | "-" => Some(-1),
        _ => None,
    }
}

fn x(n: usize, i: usize) -> Poly {
    Poly::var(n, i)
}

/// `f^k_{(ε1,ε2)}` in `n` variables; `k = 0` gives the identity.
///
/// For `k >= 2`: `(ε1(ε2 x2 x1 + x3 x1^2 + … + xk x1^{k-1} + x1^{k+1}), ε2 x2, x3, …, xn)`;
/// for `k = 1`: `(ε1 x1^2, x2, …, xn)`.
pub fn morin_normal_form(n: usize, k: usize, e1: i8, e2: i8) -> MapGerm {
    assert!(k <= n && n >= 1, "need k <= n");
    if k == 0 {
        return MapGerm::identity(n);
    }
    let x1 = x(n, 0);
    let mut comps: Vec<Poly> = (0..n).map(|i| x(n, i)).collect();
    if k == 1 {
        comps[0] = x1.pow(2).scale(&Rat::int(e1 as i64));
        return MapGerm::from_parts(n, comps);
    }
    let mut first = (&x(n, 1) * &x1).scale(&Rat::int(e2 as i64));
    for j in 3..=k {
        first = &first + &(&x(n, j - 1) * &x1.pow(j as u32 - 1));
    }
    first = &first + &x1.pow(k as u32 + 1);
    comps[0] = first.scale(&Rat::int(e1 as i64));
    comps[1] = x(n, 1).scale(&Rat::int(e2 as i64));
    MapGerm::from_parts(n, comps)
}

/// Lips `(εx1(x1² + x2²), x2)`.
pub fn lips(e: i8) -> MapGerm {
    let (x1, x2) = (x(2, 0), x(2, 1));
    let f1 = (&x1 * &(&x1.pow(2) + &x2.pow(2))).scale(&Rat::int(e as i64));
    MapGerm::from_parts(2, vec![f1, x2])
}

/// Beaks `(εx1(x1² - x2²), x2)`.
pub fn beaks(e: i8) -> MapGerm {
    let (x1, x2) = (x(2, 0), x(2, 1));
    let f1 = (&x1 * &(&x1.pow(2) - &x2.pow(2))).scale(&Rat::int(e as i64));
    MapGerm::from_parts(2, vec![f1, x2])
}

/// Planar swallowtail `(εx1x2 + x1⁴, x2)`.
pub fn planar_swallowtail(e: i8) -> MapGerm {
    let (x1, x2) = (x(2, 0), x(2, 1));
    let f1 = &(&x1 * &x2).scale(&Rat::int(e as i64)) + &x1.pow(4);
    MapGerm::from_parts(2, vec![f1, x2])
}

/// Whitney umbrella `(x1², x1x2, x2)`.
pub fn whitney_umbrella() -> MapGerm {
    let (x1, x2) = (x(2, 0), x(2, 1));
    MapGerm::from_parts(2, vec![x1.pow(2), &x1 * &x2, x2])
}

/// `S1±`: `(x1², εx1(x1² ± x2²), x2)`.
pub fn s1(plus: bool, e: i8) -> MapGerm {
    let (x1, x2) = (x(2, 0), x(2, 1));
    let h = if plus {
        &x1.pow(2) + &x2.pow(2)
    } else {
        &x1.pow(2) - &x2.pow(2)
    };
    let f2 = (&x1 * &h).scale(&Rat::int(e as i64));
    MapGerm::from_parts(2, vec![x1.pow(2), f2, x2])
}

/// Hyperbolic umbilic `(x1² + x2x3, x2² + ε1 x1x4, x3, x4)`.
pub fn sigma20_hyp(e1: i8) -> MapGerm {
    let v: Vec<Poly> = (0..4).map(|i| x(4, i)).collect();
    let e1 = Rat::int(e1 as i64);
    MapGerm::from_parts(
        4,
        vec![
            &v[0].pow(2) + &(&v[1] * &v[2]),
            &v[1].pow(2) + &(&v[0] * &v[3]).scale(&e1),
            v[2].clone(),
            v[3].clone(),
        ],
    )
}

/// Elliptic umbilic
/// `(x1² - x2² + ε1 x1x3 + x2x4, ε1 x1x2 + ε1 x1x4 - x2x3, x3, ε2 x4)`.
pub fn sigma20_elli(e1: i8, e2: i8) -> MapGerm {
    let v: Vec<Poly> = (0..4).map(|i| x(4, i)).collect();
    let e1 = Rat::int(e1 as i64);
    let f1 = &(&(&v[0].pow(2) - &v[1].pow(2)) + &(&v[0] * &v[2]).scale(&e1)) + &(&v[1] * &v[3]);
    let f2 = &(&(&v[0] * &v[1]).scale(&e1) + &(&v[0] * &v[3]).scale(&e1)) - &(&v[1] * &v[2]);
    MapGerm::from_parts(4, vec![f1, f2, v[2].clone(), v[3].scale(&Rat::int(e2 as i64))])
}

fn normal_form(family: Family, signs: (SignSlot, SignSlot), dims: (usize, usize)) -> Option<MapGerm> {
    let (n, m) = dims;
    let (e1, e2) = (signs.0.or_plus(), signs.1.or_plus());
    match family {
        Family::Regular if n == m => Some(MapGerm::identity(n)),
        f if f.morin_k().is_some() => {
            let k = f.morin_k().unwrap();
            (n == m && k <= n).then(|| morin_normal_form(n, k, e1, e2))
        }
        Family::Lips if dims == (2, 2) => Some(lips(e1)),
        Family::Beaks if dims == (2, 2) => Some(beaks(e1)),
        Family::PlanarSwallowtail if dims == (2, 2) => Some(planar_swallowtail(e1)),
        Family::WhitneyUmbrella if dims == (2, 3) => Some(whitney_umbrella()),
        Family::S1Plus if dims == (2, 3) => Some(s1(true, e1)),
        Family::S1Minus if dims == (2, 3) => Some(s1(false, e1)),
        Family::Sigma20Hyp if dims == (4, 4) => Some(sigma20_hyp(e1)),
        Family::Sigma20Elli if dims == (4, 4) => Some(sigma20_elli(e1, e2)),
        _ => None,
    }
}

/// Value recorded for one evaluated criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum CriterionValue {
    Exact(Rat),
    Sign(i8),
    Count(usize),
}

impl fmt::Display for CriterionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CriterionValue::Exact(r) => write!(f, "{r}"),
            CriterionValue::Sign(s) => write!(f, "sign {s:+}"),
            CriterionValue::Count(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Criterion {
    pub name: String,
    pub value: CriterionValue,
}

impl Criterion {
    pub fn new(name: impl Into<String>, value: CriterionValue) -> Self {
        Criterion {
            name: name.into(),
            value,
        }
    }
}

/// Outcome of a classifier: the label plus every criterion it evaluated.
#[derive(Clone, Debug)]
pub struct Classification {
    pub label: ClassLabel,
    pub classifier: &'static str,
    pub criteria: Vec<Criterion>,
    /// Why a germ was left unrecognized, or which checks were skipped.
    pub notes: Vec<String>,
}

impl Classification {
    pub fn new(label: ClassLabel, classifier: &'static str, criteria: Vec<Criterion>) -> Self {
        Classification {
            label,
            classifier,
            criteria,
            notes: Vec::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn is_recognized(&self) -> bool {
        self.label.family != Family::Unrecognized
    }
}
