//! J-invariant and J-anti-invariant subgroups of invariant `H²`.
//!
//! Everything here is computed on left-invariant forms, so the results are
//! statements about Lie algebra cohomology.

use crate::acs::{AlmostComplexStructure, TypeSign};
use crate::cohomology::{CohomologyClass, CohomologySpace, SubspaceOfH};
use crate::echelon::Echelon;
use crate::error::{Error, Result};
use crate::exterior::KForm;
use crate::liealg::LieAlgebraSpec;
use crate::linalg::RatMatrix;

fn check_dims(g: &LieAlgebraSpec, j: &AlmostComplexStructure) -> Result<()> {
    if g.dim() != j.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: j.dim() });
    }
    Ok(())
}

/// Echelon basis of the closed forms in `Λ^±_J`.
pub fn invariant_cocycles(
    g: &LieAlgebraSpec,
    j: &AlmostComplexStructure,
    sign: TypeSign,
) -> Result<Vec<KForm>> {
    check_dims(g, j)?;
    let n = g.dim();
    let generators = j.type_space(sign);
    if generators.is_empty() {
        return Ok(Vec::new());
    }
    let columns = generators
        .iter()
        .map(|f| Ok(g.d(f)?.to_dense()))
        .collect::<Result<Vec<_>>>()?;
    let d_restricted = RatMatrix::from_columns(&columns);
    let closed: Vec<KForm> = d_restricted
        .nullspace()
        .iter()
        .map(|coeffs| {
            let mut f = KForm::zero(n, 2);
            for (c, gen) in coeffs.iter().zip(&generators) {
                f.add_scaled(gen, c);
            }
            f
        })
        .collect();
    Ok(Echelon::from_forms(n, 2, &closed).forms())
}

/// `H^±_J` inside the given `H²`.
pub fn h_subgroup_in(
    h2: &CohomologySpace,
    j: &AlmostComplexStructure,
    sign: TypeSign,
) -> Result<SubspaceOfH> {
    if h2.degree() != 2 {
        return Err(Error::DegreeMismatch { expected: 2, found: h2.degree() });
    }
    h2.span(&invariant_cocycles(h2.algebra(), j, sign)?)
}

pub fn h_subgroup(
    g: &LieAlgebraSpec,
    j: &AlmostComplexStructure,
    sign: TypeSign,
) -> Result<SubspaceOfH> {
    check_dims(g, j)?;
    h_subgroup_in(&CohomologySpace::compute(g, 2)?, j, sign)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PurityReport {
    pub betti2: usize,
    pub h_plus: SubspaceOfH,
    pub h_minus: SubspaceOfH,
    pub intersection: SubspaceOfH,
    pub dim_intersection: usize,
    pub dim_sum: usize,
    pub is_pure: bool,
    pub is_full: bool,
    pub is_pure_and_full: bool,
}

impl PurityReport {
    /// Stable `key=value` lines.
    pub fn key_values(&self) -> Vec<(&'static str, String)> {
        vec![
            ("betti2", self.betti2.to_string()),
            ("dim_h_plus", self.h_plus.dim().to_string()),
            ("dim_h_minus", self.h_minus.dim().to_string()),
            ("dim_intersection", self.dim_intersection.to_string()),
            ("dim_sum", self.dim_sum.to_string()),
            ("pure", self.is_pure.to_string()),
            ("full", self.is_full.to_string()),
            ("pure_and_full", self.is_pure_and_full.to_string()),
        ]
    }
}

pub fn purity_report(g: &LieAlgebraSpec, j: &AlmostComplexStructure) -> Result<PurityReport> {
    check_dims(g, j)?;
    let h2 = CohomologySpace::compute(g, 2)?;
    purity_report_in(&h2, j)
}

pub fn purity_report_in(h2: &CohomologySpace, j: &AlmostComplexStructure) -> Result<PurityReport> {
    let h_plus = h_subgroup_in(h2, j, TypeSign::Plus)?;
    let h_minus = h_subgroup_in(h2, j, TypeSign::Minus)?;
    let intersection = h_plus.intersect(&h_minus)?;
    let dim_sum = h_plus.sum(&h_minus)?.dim();
    let dim_intersection = intersection.dim();
    let is_pure = dim_intersection == 0;
    let is_full = dim_sum == h2.betti();
    Ok(PurityReport {
        betti2: h2.betti(),
        h_plus,
        h_minus,
        intersection,
        dim_intersection,
        dim_sum,
        is_pure,
        is_full,
        is_pure_and_full: is_pure && is_full,
    })
}

#[derive(Clone, Debug)]
pub struct PowerCheck {
    pub class: CohomologyClass,
    pub power: KForm,
    pub is_zero: bool,
}

/// Class of `a^m` and whether it vanishes in cohomology.
pub fn class_power_check(g: &LieAlgebraSpec, a: &KForm, m: usize) -> Result<PowerCheck> {
    let da = g.d(a)?;
    if !da.is_zero() {
        return Err(Error::NotClosed { differential: da });
    }
    let power = a.wedge_power(m);
    if power.degree() > g.dim() {
        return Err(Error::Precondition(format!(
            "a^{m} has degree {} above the dimension {}",
            power.degree(),
            g.dim()
        )));
    }
    let class = CohomologySpace::compute(g, power.degree())?.class_of(&power)?;
    let is_zero = class.is_zero();
    Ok(PowerCheck { class, power, is_zero })
}

/// Consistency check of a closed 2-form against the top-power obstructions:
/// a class in `H⁺ ∩ H⁻` has vanishing top power, and for odd `n` so does
/// any class in `H⁻`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerObstructionAudit {
    pub n: usize,
    pub in_plus: bool,
    pub in_minus: bool,
    pub top_power_vanishes: bool,
    pub top_power_form_vanishes: bool,
    /// `Some(ok)` when `[a] ∈ H⁺ ∩ H⁻`.
    pub both_check: Option<bool>,
    /// `Some(ok)` when `n` is odd and `[a] ∈ H⁻`.
    pub odd_minus_check: Option<bool>,
    pub consistent: bool,
}

pub fn power_obstruction_audit(
    g: &LieAlgebraSpec,
    j: &AlmostComplexStructure,
    a: &KForm,
) -> Result<PowerObstructionAudit> {
    check_dims(g, j)?;
    if a.degree() != 2 {
        return Err(Error::DegreeMismatch { expected: 2, found: a.degree() });
    }
    let n = g.dim() / 2;
    let h2 = CohomologySpace::compute(g, 2)?;
    let class = h2.class_of(a)?;
    let in_plus = h_subgroup_in(&h2, j, TypeSign::Plus)?.contains(&class)?;
    let in_minus = h_subgroup_in(&h2, j, TypeSign::Minus)?.contains(&class)?;
    let top = class_power_check(g, a, n)?;
    let both_check = (in_plus && in_minus).then_some(top.is_zero);
    let odd_minus_check = (n % 2 == 1 && in_minus).then_some(top.is_zero);
    let consistent = both_check.unwrap_or(true) && odd_minus_check.unwrap_or(true);
    Ok(PowerObstructionAudit {
        n,
        in_plus,
        in_minus,
        top_power_vanishes: top.is_zero,
        top_power_form_vanishes: top.power.is_zero(),
        both_check,
        odd_minus_check,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::ComplexKForm;
    use crate::liealg::{example_nilpotent, su2_plus_r3};

    fn kf(dim: usize, s: &str) -> KForm {
        KForm::parse(dim, s).unwrap()
    }

    fn j_from(dim: usize, list: &[&str]) -> AlmostComplexStructure {
        let psis: Vec<ComplexKForm> =
            list.iter().map(|s| ComplexKForm::parse(dim, s).unwrap()).collect();
        AlmostComplexStructure::from_one_zero_forms(dim, &psis).unwrap()
    }

    #[test]
    fn torus_cocycles() {
        let g = LieAlgebraSpec::abelian(4);
        let j = AlmostComplexStructure::standard(4).unwrap();
        let minus = invariant_cocycles(&g, &j, TypeSign::Minus).unwrap();
        assert_eq!(minus, vec![kf(4, "e13 - e24"), kf(4, "e14 + e23")]);
        let r = purity_report(&LieAlgebraSpec::abelian(6), &AlmostComplexStructure::standard(6).unwrap())
            .unwrap();
        assert_eq!((r.h_plus.dim(), r.h_minus.dim(), r.dim_sum), (9, 6, 15));
        assert!(r.is_pure_and_full);
    }

    #[test]
    fn example_classes_in_both_subgroups() {
        let g = example_nilpotent();
        let j = j_from(6, &["e1+i*e2", "e4+i*e6", "e3+i*e5"]);
        let minus = invariant_cocycles(&g, &j, TypeSign::Minus).unwrap();
        let span = Echelon::from_forms(6, 2, &minus);
        assert!(span.contains(&kf(6, "e26 - e14")));
        assert!(span.contains(&kf(6, "e15 + e23")));
        let h2 = CohomologySpace::compute(&g, 2).unwrap();
        let plus = h_subgroup_in(&h2, &j, TypeSign::Plus).unwrap();
        let minus = h_subgroup_in(&h2, &j, TypeSign::Minus).unwrap();
        for rep in ["e26", "e15"] {
            let c = h2.class_of(&kf(6, rep)).unwrap();
            assert!(plus.contains(&c).unwrap() && minus.contains(&c).unwrap());
        }
        let r = purity_report_in(&h2, &j).unwrap();
        assert!(!r.is_pure);
        assert_eq!(r.dim_sum + r.dim_intersection, r.h_plus.dim() + r.h_minus.dim());
    }

    #[test]
    fn powers_of_the_example_class() {
        let g = example_nilpotent();
        let a = kf(6, "e26 - e15");
        let sq = class_power_check(&g, &a, 2).unwrap();
        assert!(!sq.is_zero);
        let h4 = CohomologySpace::compute(&g, 4).unwrap();
        assert_eq!(sq.class, h4.class_of(&kf(6, "2*e1256")).unwrap());
        assert!(class_power_check(&g, &a, 3).unwrap().is_zero);
        assert!(class_power_check(&g, &kf(6, "e12"), 1).unwrap().is_zero);
        assert!(class_power_check(&g, &kf(6, "e12"), 2).unwrap().is_zero);
        assert!(matches!(class_power_check(&g, &kf(6, "e35"), 2), Err(Error::NotClosed { .. })));
    }

    #[test]
    fn audits() {
        let g = example_nilpotent();
        let j = j_from(6, &["e1+i*e2", "e4+i*e6", "e3+i*e5"]);
        let audit = power_obstruction_audit(&g, &j, &kf(6, "e26 - e15")).unwrap();
        assert!(audit.in_plus && audit.in_minus);
        assert_eq!(audit.both_check, Some(true));
        assert!(audit.consistent);

        let t6 = LieAlgebraSpec::abelian(6);
        let std6 = AlmostComplexStructure::standard(6).unwrap();
        let audit = power_obstruction_audit(&t6, &std6, &kf(6, "e14 + e23")).unwrap();
        assert!(audit.in_minus && audit.top_power_form_vanishes);
        assert_eq!(audit.odd_minus_check, Some(true));

        let t4 = LieAlgebraSpec::abelian(4);
        let std4 = AlmostComplexStructure::standard(4).unwrap();
        let alpha = kf(4, "e13 - e24");
        assert_eq!(alpha.wedge_power(2), kf(4, "2*e1234"));
        let audit = power_obstruction_audit(&t4, &std4, &alpha).unwrap();
        assert!(audit.in_minus && !audit.in_plus && !audit.top_power_vanishes);
        assert_eq!((audit.both_check, audit.odd_minus_check), (None, None));
        assert!(audit.consistent);
    }

    #[test]
    fn su2_is_full_not_pure() {
        let j = j_from(6, &["e1+i*e4", "e2+i*e5", "e3+i*e6"]);
        let r = purity_report(&su2_plus_r3(), &j).unwrap();
        assert_eq!(r.betti2, 3);
        assert!(r.is_full);
        assert!(!r.is_pure);
    }
}
