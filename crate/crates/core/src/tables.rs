//! Machine-readable class-count and perturbation tables.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::Result;
use crate::label::{morin_normal_form, Family};
use crate::morin::isotopy_class;
use crate::par::par_map;
use crate::perturb::{
    family_b_identity, locus_discrepancies, morin_points_with, Discrepancy, IdentityCheck, UnfoldingFamily,
    UnfoldingSpec, DEFAULT_BITS,
};
use crate::rat::Rat;

/// Number of A-isotopy classes among the `f^k_{(ε1,ε2)}` in `n` variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassCountRow {
    pub n: usize,
    pub k: usize,
    pub name: String,
    pub count: usize,
    pub labels: Vec<String>,
}

pub fn class_count(n: usize, k: usize) -> Result<ClassCountRow> {
    let mut labels = BTreeSet::new();
    for e1 in [1, -1] {
        for e2 in [1, -1] {
            labels.insert(isotopy_class(&morin_normal_form(n, k, e1, e2))?.to_string());
        }
    }
    Ok(ClassCountRow {
        n,
        k,
        name: Family::morin(k).name(),
        count: labels.len(),
        labels: labels.into_iter().collect(),
    })
}

/// Rows for `1 <= k <= n <= max_n`, ordered by `n` then `k`.
pub fn class_counts(max_n: usize) -> Result<Vec<ClassCountRow>> {
    let pairs: Vec<(usize, usize)> = (1..=max_n).flat_map(|n| (1..=n).map(move |k| (n, k))).collect();
    par_map(&pairs, |&(n, k)| class_count(n, k)).into_iter().collect()
}

/// The invariant column of the perturbation tables as printed.
pub fn inv_formula(family: UnfoldingFamily, n: usize) -> &'static str {
    use UnfoldingFamily::*;
    match (family, n) {
        (A, 2) => "1",
        (A, 3) => "q̄_{x₃}",
        (A, 4) => "(1, q̄_{x₄})",
        (A, 5) => "q̄_{x₅}",
        (B, 2) | (B, 5) => "t",
        (B, 3) => "t²",
        (B, 4) => "(t, t)",
        (C, 2) => "t",
        (C, 3) => "−20t²+3t+u₁",
        (C, 4) => "(t, t(30t²−4t−u₁))",
        (C, 5) => "t(−42t²+5t+u₁)",
        _ => "",
    }
}

/// Reference parameters at which the tabulated maximum is attained.
///
/// Family A uses `q̄ = x² - 1` for `l = 2` and `q̄ = (x+3)(x-1)(x-2)` for
/// `l = 3`; family B puts the points at `t = ±1`; family C uses a grid
/// point reaching four points for every `n`.
pub fn reference_spec(family: UnfoldingFamily, n: usize, l: Option<usize>) -> Result<UnfoldingSpec> {
    match family {
        UnfoldingFamily::A => {
            let params = match l.unwrap_or(2) {
                2 => vec![Rat::int(-1)],
                3 => vec![Rat::int(6), Rat::int(-7)],
                l => (0..l - 1).map(|_| Rat::zero()).collect(),
            };
            UnfoldingSpec::family_a(n, l.unwrap_or(2), params)
        }
        UnfoldingFamily::B => UnfoldingSpec::family_b(n, Rat::int(-b_constant(n))),
        UnfoldingFamily::C => UnfoldingSpec::family_c(n, Rat::new(1, 4), Rat::new(3, 2)),
    }
}

/// `c_n` with `t² = -u0/c_n` on the family-B locus.
pub fn b_constant(n: usize) -> i64 {
    match n {
        2 => 6,
        3 => 10,
        4 => 15,
        _ => 21,
    }
}

/// One column of a perturbation table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyColumn {
    pub family: UnfoldingFamily,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    pub params: Vec<Rat>,
    pub c_f: usize,
    pub count: usize,
    pub inv: &'static str,
    /// Per point: the invariant column evaluated at the point.
    pub table_signs: Vec<Vec<i8>>,
    /// Per point: the classifier's signs.
    pub classifier_signs: Vec<Vec<i8>>,
    pub labels: Vec<String>,
    pub all_verified: bool,
}

pub fn family_column(family: UnfoldingFamily, n: usize, l: Option<usize>, bits: u32) -> Result<FamilyColumn> {
    let spec = reference_spec(family, n, l)?;
    let rep = morin_points_with(&spec, bits)?;
    Ok(FamilyColumn {
        family,
        n,
        l: spec.l,
        params: spec.params.clone(),
        c_f: spec.c_f(),
        count: rep.count,
        inv: inv_formula(family, n),
        table_signs: rep.points.iter().map(|p| p.table_invariant.clone()).collect(),
        classifier_signs: rep.points.iter().map(|p| p.classifier_invariant.clone()).collect(),
        labels: rep.points.iter().map(|p| p.label.clone()).collect(),
        all_verified: rep.all_verified(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tables {
    pub class_counts: Vec<ClassCountRow>,
    pub family_a: Vec<FamilyColumn>,
    pub family_b: Vec<FamilyColumn>,
    pub family_c: Vec<FamilyColumn>,
    pub family_b_identities: Vec<IdentityCheck>,
    pub discrepancies: Vec<Discrepancy>,
}

/// Regenerates every table. The output is deterministic.
pub fn all_tables(bits: u32) -> Result<Tables> {
    use UnfoldingFamily::*;
    let mut jobs = Vec::new();
    for l in [2, 3] {
        jobs.extend((2..=5).map(|n| (A, n, Some(l))));
    }
    for fam in [B, C] {
        jobs.extend((2..=5).map(|n| (fam, n, None)));
    }
    let columns: Vec<FamilyColumn> = par_map(&jobs, |&(f, n, l)| family_column(f, n, l, bits))
        .into_iter()
        .collect::<Result<_>>()?;
    let pick = |f| columns.iter().filter(|c| c.family == f).cloned().collect();
    let mut identities = Vec::new();
    let mut discrepancies = Vec::new();
    for n in 2..=5 {
        identities.push(family_b_identity(n, true)?);
        for f in [B, C] {
            discrepancies.extend(locus_discrepancies(f, n)?);
        }
    }
    Ok(Tables {
        class_counts: class_counts(6)?,
        family_a: pick(A),
        family_b: pick(B),
        family_c: pick(C),
        family_b_identities: identities,
        discrepancies,
    })
}

pub fn default_tables() -> Result<Tables> {
    all_tables(DEFAULT_BITS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows() {
        assert_eq!(class_count(4, 4).unwrap().count, 4);
        assert_eq!(class_count(5, 3).unwrap().count, 1);
        assert_eq!(class_count(3, 2).unwrap().count, 2);
        assert_eq!(class_count(1, 1).unwrap().count, 2);
        assert_eq!(class_count(2, 1).unwrap().count, 1);
    }

    #[test]
    fn family_c_inv_rendering() {
        assert_eq!(inv_formula(UnfoldingFamily::C, 5), "t(−42t²+5t+u₁)");
    }

    #[test]
    fn reference_columns_attain_bound() {
        for (f, l) in [(UnfoldingFamily::A, Some(3)), (UnfoldingFamily::B, None), (UnfoldingFamily::C, None)] {
            let c = family_column(f, 3, l, DEFAULT_BITS).unwrap();
            assert_eq!(c.count, c.c_f, "{f:?}");
            assert!(c.all_verified);
        }
    }
}
