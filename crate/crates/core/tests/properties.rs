//! Property tests for the algebraic laws the kernel is built on: exact
//! linear algebra invariants over both field kinds, and the
//! homotopy-theoretic equivalences on random bounded complexes.

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use dgcat_core::complex::cone_cohomology_dim_by_rank;
use dgcat_core::testgen::{random_chain_map, random_closed_map, random_complex};
use dgcat_core::*;

fn small_matrix_strategy() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..5, 1usize..5)
        .prop_flat_map(|(r, c)| {
            (
                Just(r),
                Just(c),
                prop::collection::vec(-5i64..=5, r * c),
            )
        })
}

fn build(field: FieldSpec, r: usize, c: usize, entries: &[i64]) -> Matrix {
    let rows: Vec<Vec<i64>> = entries.chunks(c).take(r).map(|ch| ch.to_vec()).collect();
    Matrix::from_i64(field, &rows)
}

proptest! {
    #[test]
    fn rank_nullity_over_the_rationals((r, c, entries) in small_matrix_strategy()) {
        let m = build(FieldSpec::Rationals, r, c, &entries);
        prop_assert_eq!(rank(&m) + kernel_basis(&m).dim(), c);
    }

    #[test]
    fn rank_nullity_over_f5((r, c, entries) in small_matrix_strategy()) {
        let m = build(FieldSpec::prime(5).unwrap(), r, c, &entries);
        prop_assert_eq!(rank(&m) + kernel_basis(&m).dim(), c);
    }

    #[test]
    fn kernel_vectors_are_exact_solutions((r, c, entries) in small_matrix_strategy()) {
        for field in [FieldSpec::Rationals, FieldSpec::prime(7).unwrap()] {
            let m = build(field, r, c, &entries);
            for v in kernel_basis(&m).basis() {
                let image = m.apply(v).unwrap();
                prop_assert!(image.iter().all(|x| field.is_zero(x)));
            }
        }
    }

    #[test]
    fn row_reduction_is_idempotent((r, c, entries) in small_matrix_strategy()) {
        let m = build(FieldSpec::Rationals, r, c, &entries);
        let (r1, p1) = row_reduce(&m);
        let (r2, p2) = row_reduce(&r1);
        prop_assert_eq!(r1, r2);
        prop_assert_eq!(p1, p2);
    }

    #[test]
    fn image_dimension_is_the_rank((r, c, entries) in small_matrix_strategy()) {
        let m = build(FieldSpec::Rationals, r, c, &entries);
        prop_assert_eq!(image_basis(&m).dim(), rank(&m));
    }
}

#[test]
fn random_complexes_have_recorded_cohomology() {
    for seed in 0..12u64 {
        let mut rng = StdRng::seed_from_u64(seed);
        let field = if seed % 2 == 0 {
            FieldSpec::Rationals
        } else {
            FieldSpec::prime(5).unwrap()
        };
        let (c, expected) = random_complex(field, -2, 2, 2, &mut rng);
        assert!(c.validate().is_ok());
        let mut got = c.cohomology_dims();
        got.retain(|_, &mut d| d > 0);
        assert_eq!(got, expected, "seed {seed}");
    }
}

#[test]
fn euler_characteristic_matches_cohomology() {
    for seed in 0..12u64 {
        let mut rng = StdRng::seed_from_u64(100 + seed);
        let (c, _) = random_complex(FieldSpec::Rationals, -2, 2, 2, &mut rng);
        let from_components = c.euler_characteristic();
        let from_cohomology: i64 = c
            .cohomology_dims()
            .iter()
            .map(|(&i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum();
        assert_eq!(from_components, from_cohomology, "seed {seed}");
    }
}

#[test]
fn hom_complexes_of_random_complexes_are_valid() {
    for seed in 0..8u64 {
        let mut rng = StdRng::seed_from_u64(200 + seed);
        let (v, _) = random_complex(FieldSpec::Rationals, -1, 1, 2, &mut rng);
        let (w, _) = random_complex(FieldSpec::Rationals, -1, 1, 2, &mut rng);
        let (h, _) = hom_complex(&v, &w);
        assert!(h.validate().is_ok(), "seed {seed}");
    }
}

#[test]
fn cone_acyclicity_agrees_with_quasi_isomorphism() {
    let mut rng = StdRng::seed_from_u64(300);
    for case in 0..12 {
        let (v, _) = random_complex(FieldSpec::Rationals, -1, 1, 2, &mut rng);
        let (w, _) = random_complex(FieldSpec::Rationals, -1, 1, 2, &mut rng);
        let f = random_closed_map(&v, &w, &mut rng);
        assert!(f.is_closed());
        let acyclic = cone(&f).unwrap().is_acyclic();
        assert_eq!(acyclic, is_quasi_iso(&f).unwrap(), "case {case}");
    }
}

#[test]
fn bounded_acyclic_iff_contractible_over_a_field() {
    let mut rng = StdRng::seed_from_u64(400);
    for case in 0..12 {
        let (c, _) = random_complex(FieldSpec::Rationals, -2, 1, 2, &mut rng);
        assert_eq!(c.is_acyclic(), is_contractible(&c), "case {case}");
    }
}

#[test]
fn cone_cohomology_matches_rank_formula_on_random_maps() {
    let mut rng = StdRng::seed_from_u64(500);
    for _ in 0..8 {
        let (v, _) = random_complex(FieldSpec::Rationals, -1, 1, 2, &mut rng);
        let (w, _) = random_complex(FieldSpec::Rationals, -1, 1, 2, &mut rng);
        let f = random_closed_map(&v, &w, &mut rng);
        let c = cone(&f).unwrap();
        for i in -3..=3 {
            assert_eq!(c.cohomology_dim(i), cone_cohomology_dim_by_rank(&f, i));
        }
    }
}

#[test]
fn homotopy_classes_match_h0_of_the_hom_complex() {
    // H^0(Hom(v, w)) counts closed degree-0 maps modulo null-homotopic ones
    let mut rng = StdRng::seed_from_u64(600);
    for _ in 0..6 {
        let (v, _) = random_complex(FieldSpec::Rationals, -1, 1, 2, &mut rng);
        let (w, _) = random_complex(FieldSpec::Rationals, -1, 1, 2, &mut rng);
        let (h, basis) = hom_complex(&v, &w);
        let z = kernel_basis(&h.differential(0));
        let mut null_count = 0;
        for coords in z.basis() {
            let f = basis.map_of(0, coords);
            if is_null_homotopic(&f).unwrap().is_some() {
                null_count += 1;
            }
        }
        // the null-homotopic cocycles among a basis need not span the
        // boundaries, but dim H^0 = dim Z^0 - dim B^0 always
        let b0 = image_basis(&h.differential(-1)).dim();
        assert_eq!(h.cohomology_dim(0), z.dim() - b0);
        let _ = null_count;
    }
}

#[test]
fn suspension_inverts_on_random_complexes() {
    let mut rng = StdRng::seed_from_u64(700);
    for _ in 0..6 {
        let (c, _) = random_complex(FieldSpec::Rationals, -2, 2, 2, &mut rng);
        assert_eq!(c.suspend().unsuspend(), c);
    }
}

#[test]
fn random_graded_maps_obey_leibniz_through_the_hom_complex() {
    // d(g ∘ f) = d(g) ∘ f + (-1)^{|g|} g ∘ d(f) for graded maps
    let mut rng = StdRng::seed_from_u64(800);
    let field = FieldSpec::Rationals;
    for _ in 0..6 {
        let (u, _) = random_complex(field, -1, 1, 2, &mut rng);
        let (v, _) = random_complex(field, -1, 1, 2, &mut rng);
        let (w, _) = random_complex(field, -1, 1, 2, &mut rng);
        for (dg_, df_) in [(0i32, 0i32), (1, 0), (0, 1), (-1, 1)] {
            let f = random_chain_map(&u, &v, df_, &mut rng);
            let g = random_chain_map(&v, &w, dg_, &mut rng);
            let lhs = g.compose(&f).unwrap().differential();
            let sign = field.from_i64(if dg_.rem_euclid(2) == 0 { 1 } else { -1 });
            let rhs = g
                .differential()
                .compose(&f)
                .unwrap()
                .add(&g.compose(&f.differential()).unwrap().scale(&sign))
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn h0_of_opposite_matches_opposite_of_h0_dimensions() {
    let field = FieldSpec::Rationals;
    for table in [disc(field, 0), disc(field, 1), sphere(field, 0)] {
        let op = opposite(&table).unwrap();
        let lhs = h0(&op).unwrap();
        let rhs = h0(&table).unwrap();
        let mut composition_checked = false;
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(lhs.hom_dim(x, y), rhs.hom_dim(y, x));
                composition_checked = true;
            }
        }
        assert!(composition_checked);
    }
}

#[test]
fn maurer_cartan_objects_built_by_solving() {
    // random two-entry twisted objects: delta_{01} any closed element of the
    // right degree satisfies the Maurer-Cartan equation
    let field = FieldSpec::Rationals;
    let base = disc(field, 1);
    let mut rng = StdRng::seed_from_u64(900);
    let mut built = 0;
    for _ in 0..20 {
        use dgcat_core::twisted::twisted_object;
        // entries (y, 0), (x, s): delta_{01}: x-entry -> y-entry is an
        // element of Hom(x, y) of base degree 1 - s, and any closed choice
        // satisfies the Maurer-Cartan equation for a two-entry object
        let s = [0i32, 1, 2][rand::Rng::gen_range(&mut rng, 0..3)];
        let want = 1 - s;
        let hom = base.hom(0, 1);
        let z = kernel_basis(&hom.differential(want));
        if z.dim() == 0 {
            continue;
        }
        let mut coords = vec![field.zero(); hom.dim(want)];
        for v in z.basis() {
            let c = field.from_i64(rand::Rng::gen_range(&mut rng, -2i64..=2));
            for (t, x) in coords.iter_mut().zip(v) {
                *t = field.add(t, &field.mul(&c, x));
            }
        }
        let delta01 = HomElement {
            source: 0,
            target: 1,
            degree: want,
            coords,
        };
        let entries = vec![(1usize, 0i32), (0usize, s)];
        let delta = vec![
            vec![base.zero_element(1, 1, 1), delta01],
            vec![base.zero_element(1, 0, 1 + s), base.zero_element(0, 0, 1)],
        ];
        let t = twisted_object(&base, "rand", entries, delta).unwrap();
        // the twisted Hom-complex out of it must validate (D^2 = 0)
        let (h, _) = twisted_hom(&base, &t, &t).unwrap();
        assert!(h.validate().is_ok());
        built += 1;
    }
    assert!(built > 0);
}
