//! Recognition of k-Morin singularities and their A-isotopy invariants.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::germ::{null_field_truncated, MapGerm, VecField};
use crate::label::{ClassLabel, Criterion, CriterionValue, Family, SignSlot};
use crate::point::{Origin, PointEval};
use crate::poly::Poly;
use crate::rat::Rat;

/// Which invariant combination classifies a given `(k, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MorinInvariant {
    /// Regular germ or odd `k < n`: a single class.
    None,
    /// `sign η^kλ(0)`.
    EtaK { sign: i8 },
    /// `sign det grad(λ, …, η^{n-1}λ)(0)`.
    GradDet { sign: i8 },
    /// `sign η²f1(0)` for `k = n = 1`.
    Curvature { sign: i8 },
    /// Both signs, for `k = n ≡ 0 mod 4`.
    Pair { eta_k: i8, grad_det: i8 },
    /// `sign(η^kλ · det grad)`, for `k = n ≡ 3 mod 4`.
    Product { sign: i8 },
}

#[derive(Clone, Debug)]
pub struct MorinResult {
    pub k: usize,
    pub n: usize,
    pub eta_k_lambda_sign: i8,
    pub grad_det_sign: Option<i8>,
    pub invariant: MorinInvariant,
    pub label: ClassLabel,
    pub criteria: Vec<Criterion>,
}

/// Recognizes the Morin type of `f` at the origin and computes its class.
pub fn recognize_morin(f: &MapGerm) -> Result<MorinResult> {
    let n = square_dim(f)?;
    let df0 = f.linear_part();
    let corank = n - df0.rank();
    if corank == 0 {
        let lambda0 = df0.det()?;
        return Ok(regular(n, CriterionValue::Exact(lambda0.clone()), lambda0.signum()));
    }
    if corank > 1 {
        return Err(Error::NotCorankOne(corank));
    }
    // Every quantity needed lives in the jet of order `n` (order 2 for the
    // fold curvature when n = 1).
    let jet = n.max(2) as u32;
    let lambda = f.jacobian().map(|p| p.truncate(jet)).det_truncated(jet)?;
    let eta = null_field_truncated(f, jet)?;
    morin_core(&Origin, f, &lambda, &eta, Some(jet))
}

/// Recognition with an explicitly supplied null vector field, without jet
/// truncation. Used to check independence from the choice of `η`.
pub fn recognize_with_field(f: &MapGerm, eta: &VecField) -> Result<MorinResult> {
    square_dim(f)?;
    let lambda = f.jacobian().det()?;
    morin_core(&Origin, f, &lambda, eta, None)
}

/// Recognition at an arbitrary point given by an evaluator.
pub fn recognize_morin_at<E: PointEval>(f: &MapGerm, e: &E) -> Result<MorinResult> {
    let n = square_dim(f)?;
    let jac = f.jacobian();
    let lambda = jac.det()?;
    let lv = e.value(&lambda);
    if !e.is_zero(&lv) {
        let value = match e.exact(&lv) {
            Some(r) => CriterionValue::Exact(r),
            None => CriterionValue::Sign(e.sign(&lv)),
        };
        return Ok(regular(n, value, e.sign(&lv)));
    }
    let eta = null_field_at(f, e)?;
    morin_core(e, f, &lambda, &eta, None)
}

/// `η` at a point: the first adjugate column not vanishing there, oriented
/// so that its first nonzero entry there is positive.
pub fn null_field_at<E: PointEval>(f: &MapGerm, e: &E) -> Result<VecField> {
    let n = square_dim(f)?;
    let jac = f.jacobian();
    for j in 0..n {
        let col = jac.adjugate_column(j)?;
        let vals: Vec<E::V> = col.iter().map(|p| e.value(p)).collect();
        if let Some(first) = vals.iter().find(|v| !e.is_zero(v)) {
            let col = if e.sign(first) < 0 {
                col.into_iter().map(|p| -p).collect()
            } else {
                col
            };
            return Ok(VecField(col));
        }
    }
    let rows: Vec<Vec<E::V>> = (0..n)
        .map(|r| (0..n).map(|c| e.value(jac.get(r, c))).collect())
        .collect();
    Err(Error::NotCorankOne(n - e.rank(&rows)))
}

/// Recognition plus a check that the Morin index equals `k`.
pub fn morin_invariants(f: &MapGerm, k: usize) -> Result<MorinResult> {
    let r = recognize_morin(f)?;
    if r.k != k {
        return Err(Error::Precondition(format!(
            "germ is {}-Morin, not {k}-Morin",
            r.k
        )));
    }
    Ok(r)
}

/// The A-isotopy class of a germ of corank at most one.
pub fn isotopy_class(f: &MapGerm) -> Result<ClassLabel> {
    Ok(recognize_morin(f)?.label)
}

fn square_dim(f: &MapGerm) -> Result<usize> {
    if f.src_dim() != f.tgt_dim() {
        return Err(Error::NotSquare {
            rows: f.tgt_dim(),
            cols: f.src_dim(),
        });
    }
    Ok(f.src_dim())
}

fn regular(n: usize, lambda0: CriterionValue, sign: i8) -> MorinResult {
    MorinResult {
        k: 0,
        n,
        eta_k_lambda_sign: sign,
        grad_det_sign: None,
        invariant: MorinInvariant::None,
        label: ClassLabel::new(
            Family::Regular,
            (SignSlot::Irrelevant, SignSlot::Irrelevant),
            (n, n),
        ),
        criteria: vec![Criterion::new("lambda", lambda0)],
    }
}

fn deriv_name(j: usize) -> String {
    match j {
        0 => "lambda".to_string(),
        1 => "eta lambda".to_string(),
        j => format!("eta^{j} lambda"),
    }
}

fn derive(p: &Poly, eta: &VecField, jet: Option<u32>) -> Result<Poly> {
    match jet {
        Some(d) => p.dir_deriv_truncated(eta.components(), d),
        None => p.dir_deriv(eta.components()),
    }
}

fn morin_core<E: PointEval>(
    e: &E,
    f: &MapGerm,
    lambda: &Poly,
    eta: &VecField,
    jet: Option<u32>,
) -> Result<MorinResult> {
    let n = f.src_dim();
    let record = |v: &E::V| match e.exact(v) {
        Some(r) => CriterionValue::Exact(r),
        None => CriterionValue::Sign(e.sign(v)),
    };
    let mut criteria = Vec::new();
    let mut derivs = vec![lambda.clone()];
    let mut values = vec![e.value(lambda)];
    criteria.push(Criterion::new(deriv_name(0), record(&values[0])));
    if !e.is_zero(&values[0]) {
        return Err(Error::Precondition("lambda does not vanish at the point".into()));
    }
    // Search for the first nonvanishing η^jλ; each derivative is only
    // trusted up to order jet - j, which is all that is used.
    let mut k = None;
    for j in 1..=n {
        let next = derive(&derivs[j - 1], eta, jet.map(|d| d.saturating_sub(j as u32)))?;
        let v = e.value(&next);
        criteria.push(Criterion::new(deriv_name(j), record(&v)));
        let nonzero = !e.is_zero(&v);
        derivs.push(next);
        values.push(v);
        if nonzero {
            k = Some(j);
            break;
        }
    }
    let k = k.ok_or_else(|| {
        Error::Degenerate(format!("eta^j lambda vanishes at the point for every j <= {n}"))
    })?;
    let grads: Vec<Vec<E::V>> = derivs[..k]
        .iter()
        .map(|p| {
            p.gradient()
                .iter()
                .map(|g| e.value(g))
                .collect::<Vec<_>>()
        })
        .collect();
    let rank = e.rank(&grads);
    criteria.push(Criterion::new(
        format!("rank d({}..{})", deriv_name(0), deriv_name(k - 1)),
        CriterionValue::Count(rank),
    ));
    if rank < k {
        return Err(Error::Degenerate(format!(
            "rank d(lambda, …, eta^{} lambda) = {rank} < {k}",
            k - 1
        )));
    }
    let a = e.sign(&values[k]);
    let grad_det = (k == n).then(|| {
        let d = e.det(&grads);
        criteria.push(Criterion::new(
            format!("det grad({}..{})", deriv_name(0), deriv_name(n - 1)),
            record(&d),
        ));
        e.sign(&d)
    });
    let invariant = if n == 1 {
        let f1 = f.component(0);
        let d1 = derive(f1, eta, jet.map(|d| d.saturating_sub(1)))?;
        let d2 = derive(&d1, eta, jet.map(|d| d.saturating_sub(2)))?;
        let v = e.value(&d2);
        criteria.push(Criterion::new("eta^2 f1", record(&v)));
        let s = e.sign(&v);
        if s == 0 {
            return Err(Error::Degenerate("eta^2 f1 vanishes".into()));
        }
        MorinInvariant::Curvature { sign: s }
    } else {
        invariant_for(k, n, a, grad_det)
    };
    let label = label_for(k, n, &invariant);
    Ok(MorinResult {
        k,
        n,
        eta_k_lambda_sign: a,
        grad_det_sign: grad_det,
        invariant,
        label,
        criteria,
    })
}

fn invariant_for(k: usize, n: usize, a: i8, grad_det: Option<i8>) -> MorinInvariant {
    if k < n {
        return if k.is_multiple_of(2) {
            MorinInvariant::EtaK { sign: a }
        } else {
            MorinInvariant::None
        };
    }
    let b = grad_det.expect("k = n");
    match n % 4 {
        0 => MorinInvariant::Pair {
            eta_k: a,
            grad_det: b,
        },
        1 => MorinInvariant::GradDet { sign: b },
        2 => MorinInvariant::EtaK { sign: a },
        _ => MorinInvariant::Product { sign: a * b },
    }
}

/// Maps an invariant to the signs `(ε1, ε2)` of the normal form in its class.
fn label_for(k: usize, n: usize, inv: &MorinInvariant) -> ClassLabel {
    use SignSlot::Irrelevant as I;
    let signs = match *inv {
        MorinInvariant::None => (I, I),
        MorinInvariant::EtaK { sign }
        | MorinInvariant::GradDet { sign }
        | MorinInvariant::Curvature { sign } => (SignSlot::of(sign), I),
        // sign η^kλ = ε1ε2 and sign det grad = -ε2 when n ≡ 0 mod 4.
        MorinInvariant::Pair { eta_k, grad_det } => {
            let e2 = -grad_det;
            (SignSlot::of(eta_k * e2), SignSlot::of(e2))
        }
        MorinInvariant::Product { sign } => (I, SignSlot::of(sign)),
    };
    ClassLabel::new(Family::morin(k), signs, (n, n))
}

/// The exact value of a named criterion, if it was recorded exactly.
pub fn criterion_value(r: &MorinResult, name: &str) -> Option<Rat> {
    r.criteria.iter().find_map(|c| match (&c.value, c.name == name) {
        (CriterionValue::Exact(v), true) => Some(v.clone()),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::null_field;
    use crate::label::morin_normal_form;

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    #[test]
    fn fold_in_three_variables() {
        let f = MapGerm::new(3, vec![x(3, 0).pow(2), x(3, 1), x(3, 2)]).unwrap();
        let r = recognize_morin(&f).unwrap();
        assert_eq!(r.k, 1);
        assert_eq!(r.label.family, Family::Fold);
    }

    #[test]
    fn cusp_has_positive_eta2_lambda() {
        let (x1, x2) = (x(2, 0), x(2, 1));
        let f = MapGerm::new(2, vec![&x1.pow(3) + &(&x1 * &x2), x2]).unwrap();
        let r = recognize_morin(&f).unwrap();
        assert_eq!(r.k, 2);
        assert_eq!(criterion_value(&r, "eta^2 lambda"), Some(Rat::int(6)));
        assert_eq!(r.label.e1(), Some(1));
    }

    #[test]
    fn degenerate_cubic() {
        let f = MapGerm::new(2, vec![x(2, 0).pow(3), x(2, 1)]).unwrap();
        assert!(matches!(recognize_morin(&f), Err(Error::Degenerate(_))));
    }

    #[test]
    fn butterfly_normal_form() {
        let f = morin_normal_form(4, 4, -1, 1);
        let r = recognize_morin(&f).unwrap();
        assert_eq!(r.k, 4);
        assert_eq!(r.label.signs, (SignSlot::Neg, SignSlot::Pos));
    }

    #[test]
    fn regular_and_corank_two() {
        let r = recognize_morin(&MapGerm::identity(3)).unwrap();
        assert_eq!(r.label.family, Family::Regular);
        let f = MapGerm::new(2, vec![x(2, 0).pow(2), x(2, 1).pow(2)]).unwrap();
        assert_eq!(recognize_morin(&f).unwrap_err(), Error::NotCorankOne(2));
    }

    #[test]
    fn truncated_and_full_computations_agree() {
        for n in 1..=4 {
            for k in 1..=n {
                for (e1, e2) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                    let f = morin_normal_form(n, k, e1, e2);
                    let a = recognize_morin(&f).unwrap();
                    let b = recognize_with_field(&f, &null_field(&f).unwrap()).unwrap();
                    assert_eq!(a.label, b.label);
                    assert_eq!(a.criteria, b.criteria);
                }
            }
        }
    }

    #[test]
    fn sign_formulas_on_normal_forms() {
        for n in 1..=5usize {
            for (e1, e2) in [(1i8, 1i8), (1, -1), (-1, 1), (-1, -1)] {
                let r = recognize_morin(&morin_normal_form(n, n, e1, e2)).unwrap();
                if n == 1 {
                    continue;
                }
                assert_eq!(r.eta_k_lambda_sign, e1 * e2, "n={n}");
                let expected = if (n - 1) % 2 == 0 { 1 } else { -1 }
                    * e1.pow(n as u32)
                    * e2.pow(n as u32 + 1);
                assert_eq!(r.grad_det_sign, Some(expected), "n={n}");
            }
        }
    }
}
