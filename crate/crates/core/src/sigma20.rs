//! Corank-two germs `R^4 -> R^4`: signed hyperbolic and elliptic umbilics.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::germ::MapGerm;
use crate::label::{Classification, ClassLabel, Criterion, CriterionValue, Family, SignSlot};
use crate::matrix::RatMatrix;
use crate::poly::Poly;
use crate::rat::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum UmbilicKind {
    Hyp,
    Elli,
}

#[derive(Clone, Debug)]
pub struct Sigma20Result {
    pub kind: UmbilicKind,
    pub eps1: i8,
    pub eps2: Option<i8>,
    pub hess: [[Rat; 2]; 2],
    pub hess_det: Rat,
    pub big_det: Rat,
    pub trace: Option<Rat>,
    /// Target change used for normalization.
    pub target_change: RatMatrix,
    pub label: ClassLabel,
}

impl Sigma20Result {
    pub fn hess_det_sign(&self) -> i8 {
        self.hess_det.signum()
    }

    pub fn big_det_sign(&self) -> i8 {
        self.big_det.signum()
    }

    pub fn criteria(&self) -> Vec<Criterion> {
        let mut out = vec![
            Criterion::new("det hess lambda", CriterionValue::Exact(self.hess_det.clone())),
            Criterion::new(
                "det(grad xi f1, grad xi f2, grad eta f1, grad eta f2)",
                CriterionValue::Exact(self.big_det.clone()),
            ),
        ];
        if let Some(t) = &self.trace {
            out.push(Criterion::new("trace hess lambda", CriterionValue::Exact(t.clone())));
        }
        out
    }

    pub fn classification(&self) -> Classification {
        Classification::new(self.label.clone(), "sigma20", self.criteria())
    }
}

fn require_rank_two(f: &MapGerm) -> Result<RatMatrix> {
    if (f.src_dim(), f.tgt_dim()) != (4, 4) {
        return Err(Error::Precondition("umbilic germs are maps R^4 -> R^4".into()));
    }
    let df0 = f.linear_part();
    let rank = df0.rank();
    if rank != 2 {
        return Err(Error::Precondition(format!("rank df(0) = {rank}, expected 2")));
    }
    Ok(df0)
}

/// Orientation-preserving linear target change `B` such that the first two
/// components of `B∘f` have vanishing differential at 0.
pub fn target_normalize(f: &MapGerm) -> Result<(MapGerm, RatMatrix)> {
    let df0 = require_rank_two(f)?;
    let mut rows = df0.left_nullspace();
    for i in 0..4 {
        if rows.len() == 4 {
            break;
        }
        let mut e = vec![Rat::zero(); 4];
        e[i] = Rat::one();
        rows.push(e);
        if RatMatrix::from_rows(rows.clone())?.rank() < rows.len() {
            rows.pop();
        }
    }
    let mut b = RatMatrix::from_rows(rows)?;
    if b.det()?.signum() < 0 {
        for c in 0..4 {
            let v = -b.get(0, c);
            b.set(0, c, v);
        }
    }
    Ok((f.compose_target(&b)?, b))
}

fn second_derivative(p: &Poly, u: &[Rat], v: &[Rat]) -> Rat {
    let nv = p.nvars();
    let uf: Vec<Poly> = u.iter().map(|c| Poly::constant(nv, c.clone())).collect();
    let vf: Vec<Poly> = v.iter().map(|c| Poly::constant(nv, c.clone())).collect();
    p.dir_deriv(&uf)
        .and_then(|q| q.dir_deriv(&vf))
        .expect("matching dimensions")
        .constant_term()
}

/// `hess_{(ξ,η)} λ(0)` and `det(grad ξg1, grad ξg2, grad ηg1, grad ηg2)(0)`
/// for a target-normalized germ `g` and constant fields `ξ, η`.
pub fn umbilic_quantities(g: &MapGerm, xi: &[Rat], eta: &[Rat]) -> Result<([[Rat; 2]; 2], Rat)> {
    let lambda = g.jacobian().det_truncated(2)?;
    let hess = [
        [second_derivative(&lambda, xi, xi), second_derivative(&lambda, xi, eta)],
        [second_derivative(&lambda, eta, xi), second_derivative(&lambda, eta, eta)],
    ];
    let nv = g.src_dim();
    let field = |v: &[Rat]| -> Vec<Poly> { v.iter().map(|c| Poly::constant(nv, c.clone())).collect() };
    let (xf, ef) = (field(xi), field(eta));
    // Rows (ξg1, ξg2, ηg1, ηg2).
    let mut rows = Vec::with_capacity(4);
    for dir in [&xf, &ef] {
        for comp in &g.components()[..2] {
            rows.push(comp.dir_deriv(dir)?.linear_part());
        }
    }
    let big = RatMatrix::from_rows(rows)?.det()?;
    Ok((hess, big))
}

pub fn classify_sigma20(f: &MapGerm) -> Result<Sigma20Result> {
    let kernel = require_rank_two(f)?.nullspace();
    classify_sigma20_with(f, &kernel[0], &kernel[1])
}

/// Classification with a caller-chosen basis `(ξ, η)` of `ker df(0)`.
pub fn classify_sigma20_with(f: &MapGerm, xi: &[Rat], eta: &[Rat]) -> Result<Sigma20Result> {
    let (g, b) = target_normalize(f)?;
    let df0 = g.linear_part();
    let basis = RatMatrix::from_rows(vec![xi.to_vec(), eta.to_vec()])?;
    let in_kernel = |v: &[Rat]| df0.mul_vec(v).map(|w| w.iter().all(Rat::is_zero));
    if basis.rank() != 2 || !in_kernel(xi)? || !in_kernel(eta)? {
        return Err(Error::Precondition("(xi, eta) must be a basis of ker df(0)".into()));
    }
    let (hess, big_det) = umbilic_quantities(&g, xi, eta)?;
    let hess_det = &hess[0][0] * &hess[1][1] - &hess[0][1] * &hess[1][0];
    if hess_det.is_zero() {
        return Err(Error::DegenerateSigma2("det hess lambda(0) = 0".into()));
    }
    if big_det.is_zero() {
        return Err(Error::DegenerateSigma2("4x4 determinant vanishes".into()));
    }
    let (kind, eps1, eps2, trace) = if hess_det.signum() < 0 {
        (UmbilicKind::Hyp, -big_det.signum(), None, None)
    } else {
        let trace = &hess[0][0] + &hess[1][1];
        if trace.is_zero() {
            return Err(Error::DegenerateSigma2("trace hess lambda(0) = 0".into()));
        }
        let e1 = big_det.signum();
        (UmbilicKind::Elli, e1, Some(trace.signum() * e1), Some(trace))
    };
    let (family, e2slot) = match eps2 {
        None => (Family::Sigma20Hyp, SignSlot::Irrelevant),
        Some(e) => (Family::Sigma20Elli, SignSlot::of(e)),
    };
    Ok(Sigma20Result {
        kind,
        eps1,
        eps2,
        hess,
        hess_det,
        big_det,
        trace,
        target_change: b,
        label: ClassLabel::new(family, (SignSlot::of(eps1), e2slot), (4, 4)),
    })
}
