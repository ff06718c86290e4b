//! Shared fixtures for the benchmarks.

use dgcat_core::algebra::{path_algebra, Arrow, QuiverPresentation, RelationTerm};
use dgcat_core::{Algebra, FieldSpec};

pub fn two_cycle(field: FieldSpec) -> Algebra {
    path_algebra(
        field,
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
                coeff: field.one(),
                arrows: vec!["a".into(), "b".into()],
            }]],
            nilpotency_bound: 2,
        },
    )
    .expect("presentation expands")
}
