//! The tensor-algebra engine for universal localization at an idempotent:
//! Γ = T_A(Ae ⊗ kε ⊗ eA) with |ε| = -1 and d(e ⊗ ε ⊗ e) = e, realized as
//! the quotient endomorphism complex of the regular module inside the
//! category of complexes on {A, eA}. Its cohomology detects whether AeA is
//! a stratifying ideal: H^0(Γ) = A/AeA always, and the ideal is stratifying
//! exactly when the negative cohomology vanishes.

use crate::algebra::{Algebra, AlgebraModule, Side};
use crate::category::DgCategoryTable;
use crate::complexes_category::{complexes_category, ComplexesModel, ModuleComplex};
use crate::error::{DgError, Result};
use crate::field::Scalar;
use crate::quotient::{
    quotient_cohomology, quotient_hom, QuotientCohomology, QuotientHomTruncation,
};

/// The realized Γ data: the ambient two-object category of stalk complexes
/// and the truncated quotient endomorphism complex of the regular module.
#[derive(Debug, Clone)]
pub struct GammaAlgebra {
    pub algebra: Algebra,
    pub idempotent: Vec<Scalar>,
    pub depth: usize,
    pub category: DgCategoryTable,
    pub model: ComplexesModel,
    pub truncation: QuotientHomTruncation,
    /// dimension of the two-sided ideal A e A
    pub ideal_dim: usize,
}

/// Builds Γ up to cohomological depth `p_max`: the truncation carries all
/// words of length <= p_max + 1, which certifies H^{-p} exactly for
/// p <= p_max. Split dimensions are cross-checked against the product
/// formula dim(Ae) dim(eAe)^{p-1} dim(eA), and H^0 against dim A/AeA.
pub fn gamma_algebra(algebra: &Algebra, e: &[Scalar], p_max: usize) -> Result<GammaAlgebra> {
    if !algebra.is_idempotent(e) {
        return Err(DgError::NotIdempotent(format!("{e:?}")));
    }
    let reg = AlgebraModule::regular(algebra, Side::Right);
    let (ea, _) = AlgebraModule::idempotent_slice(algebra, Side::Right, e)?;
    let (ae_dim, eae_dim, ea_dim) = {
        let (ae, _) = AlgebraModule::idempotent_slice(algebra, Side::Left, e)?;
        let (corner, _) = algebra.corner_algebra(e)?;
        (ae.dim, corner.dim(), ea.dim)
    };
    let (category, model, _) = complexes_category(
        algebra,
        vec![
            ("A".into(), ModuleComplex::stalk(reg, 0)),
            ("eA".into(), ModuleComplex::stalk(ea, 0)),
        ],
        None,
    )?;
    let a_idx = category.object_index("A")?;
    let ea_idx = category.object_index("eA")?;
    let truncation = quotient_hom(&category, &[ea_idx], a_idx, a_idx, p_max + 1)?;

    // word-space dimension two ways
    for p in 1..=p_max + 1 {
        let by_enumeration: usize = truncation
            .words
            .values()
            .flatten()
            .filter(|w| w.length() == p)
            .count();
        let by_formula = ea_dim
            * eae_dim.pow(p.saturating_sub(1) as u32)
            * ae_dim;
        if by_enumeration != by_formula {
            return Err(DgError::Invalid(format!(
                "length-{p} word space has dimension {by_enumeration}, formula gives {by_formula}"
            )));
        }
    }

    let ideal_dim = algebra.two_sided_ideal_dim(e);
    let g = GammaAlgebra {
        algebra: algebra.clone(),
        idempotent: e.to_vec(),
        depth: p_max,
        category,
        model,
        truncation,
        ideal_dim,
    };
    // H^0(Γ) must match A / AeA
    let h0 = gamma_cohomology(&g, 0)?;
    let expected = algebra.dim() - ideal_dim;
    if h0 != expected {
        return Err(DgError::Invalid(format!(
            "H^0 of the localization complex is {h0}, but dim A/AeA = {expected}"
        )));
    }
    Ok(g)
}

/// dim H^{-p}(Γ), exact for p <= depth (the stalk category is concentrated
/// in degree 0, so the degree-decay certificate applies).
pub fn gamma_cohomology(g: &GammaAlgebra, p: usize) -> Result<usize> {
    if p > g.depth {
        return Err(DgError::Invalid(format!(
            "depth {} does not certify H^-{p}",
            g.depth
        )));
    }
    match quotient_cohomology(&g.truncation, -(p as i32), 3) {
        QuotientCohomology::Exact { dim, .. } => Ok(dim),
        QuotientCohomology::Stabilization { .. } => Err(DgError::Invalid(
            "expected certified-exact cohomology for an ordinary-algebra instance".into(),
        )),
    }
}

/// Degree record {0: dim H^0, -1: dim H^-1, ...} down to -depth.
pub fn gamma_degree_record(g: &GammaAlgebra) -> Result<Vec<(i32, usize)>> {
    (0..=g.depth)
        .map(|p| Ok((-(p as i32), gamma_cohomology(g, p)?)))
        .collect()
}

/// The verdict of the stratifying-ideal criterion, always bounded by the
/// inspected depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StratifyingVerdict {
    /// H^{-p}(Γ) = 0 for 1 <= p <= depth and H^0(Γ) = A/AeA
    Stratifying { depth: usize },
    /// the least p in 1..=depth with H^{-p}(Γ) != 0
    NotStratifying { least_failing_p: usize, dim: usize },
}

/// AeA is stratifying iff the projection A -> A/AeA is a homological
/// epimorphism iff Γ is quasi-isomorphic to A/AeA; detected through the
/// vanishing of H^{-p}(Γ) for p up to the requested depth.
pub fn stratifying_check(algebra: &Algebra, e: &[Scalar], p_max: usize) -> Result<StratifyingVerdict> {
    let g = gamma_algebra(algebra, e, p_max)?;
    for p in 1..=p_max {
        let dim = gamma_cohomology(&g, p)?;
        if dim != 0 {
            return Ok(StratifyingVerdict::NotStratifying {
                least_failing_p: p,
                dim,
            });
        }
    }
    Ok(StratifyingVerdict::Stratifying { depth: p_max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{path_algebra, Arrow, QuiverPresentation, RelationTerm};
    use crate::field::FieldSpec;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn a2() -> Algebra {
        path_algebra(
            q(),
            &QuiverPresentation {
                vertices: vec!["1".into(), "2".into()],
                arrows: vec![Arrow {
                    name: "a".into(),
                    from: "1".into(),
                    to: "2".into(),
                }],
                relations: vec![],
                nilpotency_bound: 1,
            },
        )
        .unwrap()
    }

    fn two_cycle() -> Algebra {
        path_algebra(
            q(),
            &QuiverPresentation {
                vertices: vec!["1".into(), "2".into()],
                arrows: vec![
                    Arrow {
                        name: "a".into(),
                        from: "1".into(),
                        to: "2".into(),
                    },
                    Arrow {
                        name: "b".into(),
                        from: "2".into(),
                        to: "1".into(),
                    },
                ],
                relations: vec![vec![RelationTerm {
                    coeff: FieldSpec::Rationals.one(),
                    arrows: vec!["a".into(), "b".into()],
                }]],
                nilpotency_bound: 2,
            },
        )
        .unwrap()
    }

    #[test]
    fn a2_is_stratifying() {
        let a = a2();
        let e = a.element_by_label("e1").unwrap();
        let g = gamma_algebra(&a, &e, 4).unwrap();
        assert_eq!(gamma_cohomology(&g, 0).unwrap(), 1);
        for p in 1..=4 {
            assert_eq!(gamma_cohomology(&g, p).unwrap(), 0, "H^-{p}");
        }
        assert_eq!(
            stratifying_check(&a, &e, 4).unwrap(),
            StratifyingVerdict::Stratifying { depth: 4 }
        );
    }

    #[test]
    fn two_cycle_is_not_stratifying() {
        let a = two_cycle();
        let e = a.element_by_label("e1").unwrap();
        let g = gamma_algebra(&a, &e, 3).unwrap();
        let record = gamma_degree_record(&g).unwrap();
        assert_eq!(record, vec![(0, 1), (-1, 1), (-2, 1), (-3, 1)]);
        assert_eq!(
            stratifying_check(&a, &e, 3).unwrap(),
            StratifyingVerdict::NotStratifying {
                least_failing_p: 1,
                dim: 1
            }
        );
    }

    #[test]
    fn zero_idempotent_is_stratifying() {
        let a = two_cycle();
        let e = a.zero();
        let g = gamma_algebra(&a, &e, 3).unwrap();
        assert_eq!(gamma_cohomology(&g, 0).unwrap(), a.dim());
        assert_eq!(
            stratifying_check(&a, &e, 3).unwrap(),
            StratifyingVerdict::Stratifying { depth: 3 }
        );
    }

    #[test]
    fn unit_idempotent_kills_everything() {
        let a = a2();
        let e = a.unit();
        let g = gamma_algebra(&a, &e, 3).unwrap();
        for p in 0..=3 {
            assert_eq!(gamma_cohomology(&g, p).unwrap(), 0, "H^-{p}");
        }
        assert_eq!(
            stratifying_check(&a, &e, 3).unwrap(),
            StratifyingVerdict::Stratifying { depth: 3 }
        );
    }

    #[test]
    fn non_idempotent_is_rejected() {
        let a = a2();
        let bad = a.element_by_label("a").unwrap();
        assert!(matches!(
            gamma_algebra(&a, &bad, 2),
            Err(DgError::NotIdempotent(_))
        ));
    }
}
