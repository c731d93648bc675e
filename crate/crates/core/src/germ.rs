//! Polynomial map-germs based at the origin and the first-order data the
//! classifiers share.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{PolyMatrix, RatMatrix};
use crate::poly::Poly;
use crate::rat::Rat;

/// A polynomial map-germ `(R^n, 0) -> (R^m, 0)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MapGerm {
    n: usize,
    components: Vec<Poly>,
    shifted: bool,
}

impl MapGerm {
    /// Builds a germ from `m` components in `n` variables. Nonzero constant
    /// terms are subtracted so that `f(0) = 0`; [`MapGerm::was_shifted`]
    /// reports whether that happened.
    pub fn new(n: usize, components: Vec<Poly>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        let mut shifted = false;
        let mut comps = Vec::with_capacity(components.len());
        for c in components {
            if c.nvars() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: c.nvars(),
                });
            }
            let c0 = c.constant_term();
            if c0.is_zero() {
                comps.push(c);
            } else {
                shifted = true;
                comps.push(&c - &Poly::constant(n, c0));
            }
        }
        Ok(MapGerm {
            n,
            components: comps,
            shifted,
        })
    }

    /// Germ with `f(0) = 0` already guaranteed by the caller.
    pub(crate) fn from_parts(n: usize, components: Vec<Poly>) -> Self {
        debug_assert!(components.iter().all(|c| c.nvars() == n));
        debug_assert!(components.iter().all(|c| c.constant_term().is_zero()));
        MapGerm {
            n,
            components,
            shifted: false,
        }
    }

    pub fn identity(n: usize) -> Self {
        MapGerm::from_parts(n, (0..n).map(|i| Poly::var(n, i)).collect())
    }

    pub fn src_dim(&self) -> usize {
        self.n
    }

    pub fn tgt_dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Poly {
        &self.components[i]
    }

    pub fn was_shifted(&self) -> bool {
        self.shifted
    }

    /// The `m x n` Jacobian matrix `(∂f_i/∂x_j)`.
    pub fn jacobian(&self) -> PolyMatrix {
        let entries = self
            .components
            .iter()
            .flat_map(|c| c.gradient())
            .collect();
        PolyMatrix::new(self.tgt_dim(), self.n, entries).expect("consistent shape")
    }

    /// `df(0)` as a rational matrix.
    pub fn linear_part(&self) -> RatMatrix {
        let rows = self.components.iter().map(|c| c.linear_part()).collect();
        RatMatrix::from_rows(rows).expect("consistent shape")
    }

    /// `x ↦ f(x + p) - f(p)`.
    pub fn translate(&self, p: &[Rat]) -> Result<MapGerm> {
        if p.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: p.len(),
            });
        }
        let comps = self
            .components
            .iter()
            .map(|c| {
                let s = c.shift(p)?;
                let c0 = s.constant_term();
                Ok(&s - &Poly::constant(self.n, c0))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MapGerm::from_parts(self.n, comps))
    }

    /// Source change `f ∘ A`.
    pub fn compose_source(&self, a: &RatMatrix) -> Result<MapGerm> {
        let comps = self
            .components
            .iter()
            .map(|c| c.compose_linear(a))
            .collect::<Result<Vec<_>>>()?;
        Ok(MapGerm::from_parts(self.n, comps))
    }

    /// Target change `B ∘ f`.
    pub fn compose_target(&self, b: &RatMatrix) -> Result<MapGerm> {
        let m = self.tgt_dim();
        if b.rows() != m || b.cols() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: b.rows(),
            });
        }
        let comps = (0..m)
            .map(|i| {
                let mut acc = Poly::zero(self.n);
                for (j, c) in self.components.iter().enumerate() {
                    let bij = b.get(i, j);
                    if !bij.is_zero() {
                        acc = &acc + &c.scale(bij);
                    }
                }
                acc
            })
            .collect();
        Ok(MapGerm::from_parts(self.n, comps))
    }

    /// Renders as `comp ; comp ; …` with the given variable names.
    pub fn display_with<'a>(&'a self, names: Option<&'a [String]>) -> GermDisplay<'a> {
        GermDisplay { germ: self, names }
    }
}

pub struct GermDisplay<'a> {
    germ: &'a MapGerm,
    names: Option<&'a [String]>,
}

impl fmt::Display for GermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.germ.components.iter().enumerate() {
            if i > 0 {
                write!(f, " ; ")?;
            }
            write!(f, "{}", c.display_with(self.names))?;
        }
        Ok(())
    }
}

impl fmt::Display for MapGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.display_with(None))
    }
}

impl fmt::Debug for MapGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MapGerm[{}->{}]{}", self.n, self.tgt_dim(), self)
    }
}

/// Polynomial vector field on the source.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VecField(pub Vec<Poly>);

impl VecField {
    pub fn constant(nvars: usize, v: &[Rat]) -> Self {
        VecField(v.iter().map(|c| Poly::constant(nvars, c.clone())).collect())
    }

    pub fn components(&self) -> &[Poly] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Derivative of `p` along the field.
    pub fn apply(&self, p: &Poly) -> Result<Poly> {
        p.dir_deriv(&self.0)
    }

    pub fn at_origin(&self) -> Vec<Rat> {
        self.0.iter().map(|c| c.constant_term()).collect()
    }

    pub fn scale(&self, c: &Rat) -> VecField {
        VecField(self.0.iter().map(|p| p.scale(c)).collect())
    }

    pub fn neg(&self) -> VecField {
        self.scale(&Rat::int(-1))
    }
}

/// First-order data of a germ at the origin.
#[derive(Clone, Debug)]
pub struct GermAnalysis {
    pub jacobian: PolyMatrix,
    /// `det` of the Jacobian; `None` unless `n = m`.
    pub lambda: Option<Poly>,
    pub rank0: usize,
    pub corank0: usize,
}

pub fn analyze(f: &MapGerm) -> GermAnalysis {
    let jacobian = f.jacobian();
    let lambda = (f.src_dim() == f.tgt_dim()).then(|| jacobian.det().expect("square"));
    let rank0 = f.linear_part().rank();
    GermAnalysis {
        jacobian,
        lambda,
        rank0,
        corank0: f.src_dim() - rank0,
    }
}

/// Index of the first adjugate column of `df(0)` that does not vanish, with
/// the sign making the first nonzero entry of that column positive.
pub(crate) fn adjugate_choice(df0: &RatMatrix) -> Option<(usize, i8)> {
    let n = df0.rows();
    if n == 1 {
        return Some((0, 1));
    }
    for j in 0..n {
        // Entries of adjugate column j are the cofactors C_{j,i}.
        for i in 0..n {
            let minor = minor_rat(df0, j, i);
            let d = minor.det().expect("square");
            if !d.is_zero() {
                let sign = if (i + j) % 2 == 0 { d.signum() } else { -d.signum() };
                return Some((j, sign));
            }
        }
    }
    None
}

fn minor_rat(m: &RatMatrix, skip_row: usize, skip_col: usize) -> RatMatrix {
    let rows = (0..m.rows())
        .filter(|&r| r != skip_row)
        .map(|r| {
            (0..m.cols())
                .filter(|&c| c != skip_col)
                .map(|c| m.get(r, c).clone())
                .collect()
        })
        .collect();
    RatMatrix::from_rows(rows).expect("consistent shape")
}

/// Null vector field `η`: the first column of `adj(J)` nonvanishing at the
/// origin, negated if needed so that its first nonzero entry at the origin
/// is positive. Then `J·η = ±λ·e_j`.
pub fn null_field(f: &MapGerm) -> Result<VecField> {
    let (j, sign) = null_field_choice(f)?;
    let col = f.jacobian().adjugate_column(j)?;
    Ok(orient(col, sign))
}

/// As [`null_field`] with every component truncated at `max_degree`.
pub(crate) fn null_field_truncated(f: &MapGerm, max_degree: u32) -> Result<VecField> {
    let (j, sign) = null_field_choice(f)?;
    let col = f
        .jacobian()
        .map(|p| p.truncate(max_degree))
        .adjugate_column_truncated(j, max_degree)?;
    Ok(orient(col, sign))
}

fn null_field_choice(f: &MapGerm) -> Result<(usize, i8)> {
    if f.src_dim() != f.tgt_dim() {
        return Err(Error::NotSquare {
            rows: f.tgt_dim(),
            cols: f.src_dim(),
        });
    }
    let df0 = f.linear_part();
    let corank = f.src_dim() - df0.rank();
    if corank != 1 {
        return Err(Error::NotCorankOne(corank));
    }
    Ok(adjugate_choice(&df0).expect("corank one has a nonzero adjugate"))
}

fn orient(col: Vec<Poly>, sign: i8) -> VecField {
    if sign < 0 {
        VecField(col.into_iter().map(|p| -p).collect())
    } else {
        VecField(col)
    }
}

/// Converts `rows` of small integers to a rational matrix.
pub fn int_matrix(rows: &[&[i64]]) -> RatMatrix {
    RatMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&v| Rat::int(v)).collect())
            .collect(),
    )
    .expect("rectangular")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    fn cusp() -> MapGerm {
        let (x1, x2) = (x(2, 0), x(2, 1));
        MapGerm::new(2, vec![&x1.pow(3) + &(&x1 * &x2), x2]).unwrap()
    }

    #[test]
    fn analyze_fold() {
        let f = MapGerm::new(2, vec![x(2, 0).pow(2), x(2, 1)]).unwrap();
        let a = analyze(&f);
        assert_eq!(a.lambda.unwrap(), x(2, 0).scale(&Rat::int(2)));
        assert_eq!((a.rank0, a.corank0), (1, 1));
    }

    #[test]
    fn analyze_identity() {
        let a = analyze(&MapGerm::identity(3));
        assert_eq!(a.lambda.unwrap(), Poly::one(3));
        assert_eq!((a.rank0, a.corank0), (3, 0));
    }

    #[test]
    fn analyze_hyperbolic_umbilic() {
        let v: Vec<Poly> = (0..4).map(|i| x(4, i)).collect();
        let f = MapGerm::new(
            4,
            vec![
                &v[0].pow(2) + &(&v[1] * &v[2]),
                &v[1].pow(2) + &(&v[0] * &v[3]),
                v[2].clone(),
                v[3].clone(),
            ],
        )
        .unwrap();
        let a = analyze(&f);
        let expected = &(&v[0] * &v[1]).scale(&Rat::int(4)) - &(&v[2] * &v[3]);
        assert_eq!(a.lambda.unwrap(), expected);
        assert_eq!(a.rank0, 2);
    }

    #[test]
    fn null_field_of_cusp() {
        let eta = null_field(&cusp()).unwrap();
        assert_eq!(eta.at_origin(), vec![Rat::one(), Rat::zero()]);
        assert_eq!(eta.0[1], Poly::zero(2));
    }

    #[test]
    fn null_field_of_fold_in_three_variables() {
        let f = MapGerm::new(3, vec![x(3, 0).pow(2), x(3, 1), x(3, 2)]).unwrap();
        let eta = null_field(&f).unwrap();
        assert_eq!(eta.0, vec![Poly::one(3), Poly::zero(3), Poly::zero(3)]);
    }

    #[test]
    fn null_field_contract_on_swapped_cusp() {
        let (x1, x2) = (x(2, 0), x(2, 1));
        let f = MapGerm::new(2, vec![x2.clone(), &x1.pow(3) + &(&x1 * &x2)]).unwrap();
        let eta = null_field(&f).unwrap();
        assert!(eta.at_origin().iter().any(|c| !c.is_zero()));
        let j = f.jacobian();
        let lambda = j.det().unwrap();
        let image: Vec<Poly> = (0..2)
            .map(|r| &(j.get(r, 0) * &eta.0[0]) + &(j.get(r, 1) * &eta.0[1]))
            .collect();
        let nonzero: Vec<&Poly> = image.iter().filter(|p| !p.is_zero()).collect();
        assert_eq!(nonzero.len(), 1);
        assert!(*nonzero[0] == lambda || *nonzero[0] == -lambda);
    }

    #[test]
    fn null_field_rejects_other_coranks() {
        assert_eq!(
            null_field(&MapGerm::identity(2)).unwrap_err(),
            Error::NotCorankOne(0)
        );
        let f = MapGerm::new(2, vec![x(2, 0).pow(2), x(2, 1).pow(2)]).unwrap();
        assert_eq!(null_field(&f).unwrap_err(), Error::NotCorankOne(2));
    }

    #[test]
    fn translate_examples() {
        let f = MapGerm::new(2, vec![x(2, 0).pow(2), x(2, 1)]).unwrap();
        assert_eq!(f.translate(&[Rat::zero(), Rat::zero()]).unwrap(), f);
        let g = f.translate(&[Rat::one(), Rat::zero()]).unwrap();
        assert_eq!(
            g.component(0),
            &(&x(2, 0).pow(2) + &x(2, 0).scale(&Rat::int(2)))
        );
        assert_eq!(g.component(1), &x(2, 1));
    }

    #[test]
    fn constant_terms_are_removed() {
        let f = MapGerm::new(1, vec![&x(1, 0) + &Poly::one(1)]).unwrap();
        assert!(f.was_shifted());
        assert_eq!(f.component(0), &x(1, 0));
    }

    #[test]
    fn linear_changes() {
        let f = cusp();
        let swap = int_matrix(&[&[0, 1], &[1, 0]]);
        let g = f.compose_target(&swap).unwrap();
        assert_eq!(g.component(0), f.component(1));
        let id = RatMatrix::identity(2);
        assert_eq!(f.compose_source(&id).unwrap(), f);
    }
}
