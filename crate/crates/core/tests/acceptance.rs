//! The acceptance suite: one test per criterion, each printing a pass/fail
//! line with its runtime. Everything is exact arithmetic; the only
//! tolerances are the wall-clock budgets, which are asserted.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use dgcat_core::algebra::{path_algebra, Arrow, QuiverPresentation, RelationTerm};
use dgcat_core::complex::tensor_complex;
use dgcat_core::complexes_category::ModuleComplex;
use dgcat_core::mor_cat::MorObject;
use dgcat_core::quotient::ExactCertificate;
use dgcat_core::twisted::{twisted_identity, verify_cone_axioms, TwistedObject};
use dgcat_core::*;

fn q() -> FieldSpec {
    FieldSpec::Rationals
}

fn f2() -> FieldSpec {
    FieldSpec::prime(2).unwrap()
}

fn a2_algebra(field: FieldSpec) -> Algebra {
    path_algebra(
        field,
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

fn two_cycle_algebra(field: FieldSpec) -> Algebra {
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
    .unwrap()
}

fn complexes_table_on_a_and_ea(algebra: &Algebra) -> DgCategoryTable {
    let reg = AlgebraModule::regular(algebra, Side::Right);
    let e1 = algebra.element_by_label("e1").unwrap();
    let (ea, _) = AlgebraModule::idempotent_slice(algebra, Side::Right, &e1).unwrap();
    let (cat, _, _) = complexes_category(
        algebra,
        vec![
            ("A".into(), ModuleComplex::stalk(reg, 0)),
            ("eA".into(), ModuleComplex::stalk(ea, 0)),
        ],
        None,
    )
    .unwrap();
    cat
}

/// The corpus of dg category tables exercised by the axiom criteria.
fn corpus_tables() -> Vec<(String, DgCategoryTable)> {
    let mut out: Vec<(String, DgCategoryTable)> = Vec::new();
    for n in -2..=2 {
        out.push((format!("disc({n})"), disc(q(), n)));
        out.push((format!("sphere({n})"), sphere(q(), n)));
    }
    let tensors = vec![
        ("disc(0) x disc(1)".to_string(), tensor(&disc(q(), 0), &disc(q(), 1)).unwrap()),
        ("sphere(0) x disc(-1)".to_string(), tensor(&sphere(q(), 0), &disc(q(), -1)).unwrap()),
        ("disc(1) x sphere(1)".to_string(), tensor(&disc(q(), 1), &sphere(q(), 1)).unwrap()),
    ];
    for (n, t) in &tensors {
        out.push((format!("opposite({n})"), opposite(t).unwrap()));
    }
    out.extend(tensors);
    out.push(("opposite(disc(1))".into(), opposite(&disc(q(), 1)).unwrap()));
    out.push(("opposite(sphere(0))".into(), opposite(&sphere(q(), 0)).unwrap()));
    // morphism categories
    {
        let p = point_category(q(), "*");
        let (m, _) = mor_category(
            &p,
            vec![
                MorObject {
                    label: "(id)".into(),
                    source: 0,
                    target: 0,
                    arrow: p.identity(0),
                },
                MorObject {
                    label: "(0)".into(),
                    source: 0,
                    target: 0,
                    arrow: p.zero_element(0, 0, 0),
                },
            ],
        )
        .unwrap();
        out.push(("mor(point)".into(), m));
        let d1 = disc(q(), 1);
        let eps = d1.basis_element(0, 1, 0, 0);
        let (m, _) = mor_category(
            &d1,
            vec![
                MorObject {
                    label: "(x,y;eps)".into(),
                    source: 0,
                    target: 1,
                    arrow: eps,
                },
                MorObject {
                    label: "(x,x;1)".into(),
                    source: 0,
                    target: 0,
                    arrow: d1.identity(0),
                },
            ],
        )
        .unwrap();
        out.push(("mor(disc(1))".into(), m));
        let d0 = disc(q(), 0);
        let (m, _) = mor_category(
            &d0,
            vec![
                MorObject {
                    label: "(x,y;0)".into(),
                    source: 0,
                    target: 1,
                    arrow: d0.zero_element(0, 1, 0),
                },
                MorObject {
                    label: "(y,y;1)".into(),
                    source: 1,
                    target: 1,
                    arrow: d0.identity(1),
                },
            ],
        )
        .unwrap();
        out.push(("mor(disc(0))".into(), m));
    }
    // hulls
    out.push((
        "hull(k; -1..1)".into(),
        standard_k_hull(q(), -1..=1).unwrap().0,
    ));
    out.push((
        "hull(k; 0..1, F2)".into(),
        standard_k_hull(f2(), 0..=1).unwrap().0,
    ));
    // categories of complexes
    out.push((
        "complexes(A2; A, eA)".into(),
        complexes_table_on_a_and_ea(&a2_algebra(q())),
    ));
    out.push((
        "complexes(two-cycle; A, eA)".into(),
        complexes_table_on_a_and_ea(&two_cycle_algebra(q())),
    ));
    out
}

fn report(name: &str, start: Instant, budget: Duration, passed: bool) {
    let elapsed = start.elapsed();
    println!(
        "[{}] {} ({:.2?}, budget {:.0?})",
        if passed { "PASS" } else { "FAIL" },
        name,
        elapsed,
        budget
    );
    assert!(passed, "{name} failed");
    assert!(
        elapsed <= budget,
        "{name} exceeded its time budget: {elapsed:.2?} > {budget:.2?}"
    );
}

#[test]
fn criterion_1_axiom_suite() {
    let start = Instant::now();
    let budget = Duration::from_secs(10);
    let mut ok = true;
    for (name, table) in corpus_tables() {
        if let Err(e) = table.validate() {
            println!("  axiom failure in {name}: {e}");
            ok = false;
        }
    }
    // fabricated single-sign violations are detected
    {
        let mut bad = disc(q(), 1);
        assert!(bad.perturb_composition_sign());
        if bad.validate().is_ok() {
            println!("  perturbed composition passed validation");
            ok = false;
        }
        let mut bad = tensor(&disc(q(), 0), &disc(q(), 1)).unwrap();
        assert!(bad.perturb_differential_sign());
        if bad.validate().is_ok() {
            println!("  perturbed differential passed validation");
            ok = false;
        }
    }
    report("axiom suite over the corpus", start, budget, ok);
}

#[test]
fn criterion_2_koszul_commutativity() {
    let start = Instant::now();
    let budget = Duration::from_secs(30);
    let mut ok = true;
    let factors = vec![
        (disc(q(), 0), disc(q(), 1)),
        (sphere(q(), 0), disc(q(), -1)),
        (disc(q(), 1), sphere(q(), 1)),
        (sphere(q(), -1), sphere(q(), 2)),
    ];
    for (a, b) in factors {
        let t = tensor(&a, &b).unwrap();
        let nb = b.object_count();
        let obj = |x: usize, u: usize| x * nb + u;
        let field = t.field;
        for x in 0..a.object_count() {
            for y in 0..a.object_count() {
                for u in 0..nb {
                    for v in 0..nb {
                        for (pa, ia) in a.basis_labels(x, y) {
                            for (pb, ib) in b.basis_labels(u, v) {
                                let elem = |xx: usize,
                                            uu: usize,
                                            yy: usize,
                                            vv: usize,
                                            la: (i32, usize, bool),
                                            lb: (i32, usize, bool)|
                                 -> HomElement {
                                    // build a pure tensor of a basis element or
                                    // an identity on each side
                                    let (tc, basis) =
                                        tensor_complex(t_factor(&a, xx, yy), t_factor(&b, uu, vv));
                                    let mut coords = vec![field.zero(); 0];
                                    coords.resize(tc.dim(la.0 + lb.0), field.zero());
                                    let fill = |coords: &mut Vec<_>,
                                                ca: &[_],
                                                cb: &[_],
                                                da: i32,
                                                db: i32| {
                                        for (ka, sa) in
                                            Vec::from(ca).iter().enumerate()
                                        {
                                            for (kb, sb) in
                                                Vec::from(cb).iter().enumerate()
                                            {
                                                let pos = basis
                                                    .position(da + db, ((da, ka), (db, kb)))
                                                    .unwrap();
                                                coords[pos] = field.mul(sa, sb);
                                            }
                                        }
                                    };
                                    let ca: Vec<_> = if la.2 {
                                        a.identity(xx).coords
                                    } else {
                                        a.basis_element(xx, yy, la.0, la.1).coords
                                    };
                                    let cb: Vec<_> = if lb.2 {
                                        b.identity(uu).coords
                                    } else {
                                        b.basis_element(uu, vv, lb.0, lb.1).coords
                                    };
                                    fill(&mut coords, &ca, &cb, la.0, lb.0);
                                    t.element(obj(xx, uu), obj(yy, vv), la.0 + lb.0, coords)
                                        .unwrap()
                                };
                                // (a ⊗ 1_{v}) ∘ (1_x ⊗ b)
                                let a_one = elem(x, v, y, v, (pa, ia, false), (0, 0, true));
                                let one_b = elem(x, u, x, v, (0, 0, true), (pb, ib, false));
                                let lhs = t.compose(&a_one, &one_b).unwrap();
                                let ab = elem(x, u, y, v, (pa, ia, false), (pb, ib, false));
                                // (1_y ⊗ b) ∘ (a ⊗ 1_u), with the Koszul sign
                                let one_b2 = elem(y, u, y, v, (0, 0, true), (pb, ib, false));
                                let a_one2 = elem(x, u, y, u, (pa, ia, false), (0, 0, true));
                                let rhs = t.compose(&one_b2, &a_one2).unwrap();
                                let sign = field.from_i64(if (pa * pb).rem_euclid(2) == 0 {
                                    1
                                } else {
                                    -1
                                });
                                if lhs != ab || t.scale(&rhs, &sign) != ab {
                                    ok = false;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    report("Koszul commutativity on all tensor basis pairs", start, budget, ok);
}

fn t_factor(a: &DgCategoryTable, x: usize, y: usize) -> &dgcat_core::complex::Complex {
    a.hom(x, y)
}

#[test]
fn criterion_3_morphism_category_comparison() {
    let start = Instant::now();
    let budget = Duration::from_secs(30);
    let mut ok = true;
    // instance 1: zero differentials, the comparison is an isomorphism
    {
        let p = point_category(q(), "*");
        let rep = h0_mor_comparison(
            &p,
            vec![MorObject {
                label: "(id)".into(),
                source: 0,
                target: 0,
                arrow: p.identity(0),
            }],
            8,
            41,
        )
        .unwrap();
        ok &= rep.passed() && rep.kernel_pairs_tested > 0;
    }
    // instance 2: disc(0), where fullness needs honest homotopy lifting
    {
        let d = disc(q(), 0);
        let rep = h0_mor_comparison(
            &d,
            vec![
                MorObject {
                    label: "(x,x;1)".into(),
                    source: 0,
                    target: 0,
                    arrow: d.identity(0),
                },
                MorObject {
                    label: "(x,y;0)".into(),
                    source: 0,
                    target: 1,
                    arrow: d.zero_element(0, 1, 0),
                },
                MorObject {
                    label: "(y,y;1)".into(),
                    source: 1,
                    target: 1,
                    arrow: d.identity(1),
                },
            ],
            8,
            42,
        )
        .unwrap();
        ok &= rep.passed() && rep.kernel_pairs_tested > 0;
    }
    // instance 3: disc(1) with the closed arrow eps
    {
        let d = disc(q(), 1);
        let eps = d.basis_element(0, 1, 0, 0);
        let rep = h0_mor_comparison(
            &d,
            vec![
                MorObject {
                    label: "(x,y;eps)".into(),
                    source: 0,
                    target: 1,
                    arrow: eps,
                },
                MorObject {
                    label: "(x,x;1)".into(),
                    source: 0,
                    target: 0,
                    arrow: d.identity(0),
                },
                MorObject {
                    label: "(y,y;1)".into(),
                    source: 1,
                    target: 1,
                    arrow: d.identity(1),
                },
            ],
            8,
            43,
        )
        .unwrap();
        ok &= rep.passed() && rep.kernel_pairs_tested > 0;
    }
    report(
        "morphism-category comparison: full, dense, square-zero kernel",
        start,
        budget,
        ok,
    );
}

#[test]
fn criterion_4_yoneda_and_adjunction() {
    let start = Instant::now();
    let budget = Duration::from_secs(60);
    let mut ok = true;
    let tables = vec![
        ("disc(0)".to_string(), disc(q(), 0)),
        ("disc(1)".to_string(), disc(q(), 1)),
        ("sphere(0)".to_string(), sphere(q(), 0)),
        (
            "complexes(A2)".to_string(),
            complexes_table_on_a_and_ea(&a2_algebra(q())),
        ),
    ];
    for (name, table) in &tables {
        for y in 0..table.object_count() {
            for target in 0..table.object_count() {
                let m = free_module(table, target).unwrap();
                let rep = yoneda_check(table, y, &m).unwrap();
                if !rep.passed() {
                    println!("  yoneda fails on {name} at y={y}, module Hom({target},-)");
                    ok = false;
                }
            }
        }
    }
    // tensor-Hom adjunction and free-module absorption on regular bimodules
    for (name, table) in [
        ("point".to_string(), point_category(q(), "*")),
        ("disc(1)".to_string(), disc(q(), 1)),
        ("sphere(0)".to_string(), sphere(q(), 0)),
    ] {
        let x = regular_bimodule(&table).unwrap();
        for y in 0..table.object_count() {
            if !absorption_check(&x, y).unwrap() {
                println!("  absorption fails on {name} at {y}");
                ok = false;
            }
        }
        for n_obj in 0..table.object_count() {
            for m_obj in 0..table.object_count() {
                let n = free_module(&table, n_obj).unwrap();
                let m = free_module(&table, m_obj).unwrap();
                let rep = adjunction_check(&x, &n, &m).unwrap();
                if !rep.passed() {
                    println!("  adjunction fails on {name} at ({n_obj},{m_obj})");
                    ok = false;
                }
            }
        }
    }
    report(
        "Yoneda and tensor-Hom adjunction: degreewise bijections with d",
        start,
        budget,
        ok,
    );
}

/// Builds the disc(1)-based hull used by the cone criteria: plain objects,
/// their shifts, and the cones of eps, id_x, and the zero map.
fn disc_hull() -> (DgCategoryTable, HullModel) {
    use dgcat_core::twisted::cone_twisted;
    let base = disc(q(), 1);
    let x0 = TwistedObject::plain(&base, "x", 0);
    let y0 = TwistedObject::plain(&base, "y", 1);
    let mut xs = x0.clone();
    xs.label = "x[1]".into();
    xs.entries[0].1 = 1;
    let mut ys = y0.clone();
    ys.label = "y[1]".into();
    ys.entries[0].1 = 1;
    let eps = {
        // the closed degree-0 element of Hom(x, y) as a twisted matrix
        let mut m = dgcat_core::twisted::twisted_zero(&base, &x0, &y0, 0);
        m.entries[0][0] = base.basis_element(0, 1, 0, 0);
        m
    };
    let (mut cone_eps, _) = cone_twisted(&base, &x0, &y0, &eps).unwrap();
    cone_eps.label = "C(eps)".into();
    let idx = twisted_identity(&base, &x0);
    let (mut cone_id, _) = cone_twisted(&base, &x0, &x0, &idx).unwrap();
    cone_id.label = "C(id)".into();
    let zero = dgcat_core::twisted::twisted_zero(&base, &x0, &y0, 0);
    let (mut cone_zero, _) = cone_twisted(&base, &x0, &y0, &zero).unwrap();
    cone_zero.label = "C(0)".into();
    hull_category(&base, vec![x0, y0, xs, ys, cone_eps, cone_id, cone_zero]).unwrap()
}

#[test]
fn criterion_5_cone_axioms_and_cone_functor() {
    use dgcat_core::twisted::cone_twisted;
    let start = Instant::now();
    let budget = Duration::from_secs(30);
    let mut ok = true;

    // every cone produced by cone_twisted passes the axioms, including on
    // random closed maps between shifted objects
    {
        let base = point_category(q(), "k");
        let mut rng = StdRng::seed_from_u64(51);
        for _ in 0..10 {
            let s1 = rng.gen_range(-1..=1);
            let s2 = rng.gen_range(-1..=1);
            let mut t1 = TwistedObject::plain(&base, "a", 0);
            t1.entries[0].1 = s1;
            let mut t2 = TwistedObject::plain(&base, "b", 0);
            t2.entries[0].1 = s2;
            let (hom, basis) = twisted_hom(&base, &t1, &t2).unwrap();
            let z = kernel_basis(&hom.differential(0));
            let mut coords = vec![q().zero(); hom.dim(0)];
            for v in z.basis() {
                let c = q().from_i64(rng.gen_range(-2i64..=2));
                for (t, b) in coords.iter_mut().zip(v) {
                    *t = q().add(t, &q().mul(&c, b));
                }
            }
            let f = basis.recover(&base, 0, &coords);
            let (_, w) = cone_twisted(&base, &t1, &t2, &f).unwrap();
            let rep = verify_cone_axioms(&base, &t1, &t2, &f, &w).unwrap();
            if !rep.all_pass() {
                println!("  cone axioms fail over k: {rep:?}");
                ok = false;
            }
        }
    }

    // instance 1: the k-hull cone functor on 50 random morphisms
    {
        let base = point_category(q(), "k");
        let mut objects = Vec::new();
        for s in -1..=2 {
            let mut t = TwistedObject::plain(&base, &format!("k[{s}]"), 0);
            t.entries[0].1 = s;
            objects.push(t);
        }
        let k0 = TwistedObject::plain(&base, "tmp", 0);
        let idm = twisted_identity(&base, &k0);
        let (mut c_id, _) = cone_twisted(&base, &k0, &k0, &idm).unwrap();
        c_id.label = "C(id)".into();
        objects.push(c_id);
        let mut k1t = TwistedObject::plain(&base, "tmp", 0);
        k1t.entries[0].1 = 1;
        let zf = dgcat_core::twisted::twisted_zero(&base, &k0, &k1t, 0);
        let (mut c_zero, _) = cone_twisted(&base, &k0, &k1t, &zf).unwrap();
        c_zero.label = "C(0)".into();
        objects.push(c_zero);
        let (table, model) = hull_category(&base, objects).unwrap();
        let k0i = table.object_index("k[0]").unwrap();
        let k1i = table.object_index("k[1]").unwrap();
        let id0 = table.identity(k0i);
        let z01 = table.zero_element(k0i, k1i, 0);
        let (mor, mor_model) = mor_category(
            &table,
            vec![
                MorObject {
                    label: "(id)".into(),
                    source: k0i,
                    target: k0i,
                    arrow: id0.clone(),
                },
                MorObject {
                    label: "(0)".into(),
                    source: k0i,
                    target: k1i,
                    arrow: z01.clone(),
                },
            ],
        )
        .unwrap();
        let w0 = hull_cone_witness(&table, &model, "cone(id)", &id0)
            .unwrap()
            .expect("listed");
        let w1 = hull_cone_witness(&table, &model, "cone(0)", &z01)
            .unwrap()
            .expect("listed");
        for w in [&w0, &w1] {
            let rep = verify_table_cone_axioms(&table, w).unwrap();
            if !rep.all_pass() {
                println!("  table cone axioms fail: {rep:?}");
                ok = false;
            }
        }
        let data = ConeFunctorData {
            cones: vec![w0, w1],
        };
        let rep = cone_functor_check(&table, &mor, &mor_model, &data, 50, 52).unwrap();
        ok &= rep.passed() && rep.samples >= 50;
    }

    // instance 2: the disc(1)-based hull on 50 random morphisms
    {
        let (table, model) = disc_hull();
        let xi = table.object_index("x").unwrap();
        let yi = table.object_index("y").unwrap();
        // eps as a hull element: the unique degree-0 basis vector of Hom(x, y)
        let eps = {
            assert_eq!(table.hom(xi, yi).dim(0), 1);
            table.basis_element(xi, yi, 0, 0)
        };
        let id_x = table.identity(xi);
        let zero_xy = table.zero_element(xi, yi, 0);
        let (mor, mor_model) = mor_category(
            &table,
            vec![
                MorObject {
                    label: "(x,y;eps)".into(),
                    source: xi,
                    target: yi,
                    arrow: eps.clone(),
                },
                MorObject {
                    label: "(x,x;1)".into(),
                    source: xi,
                    target: xi,
                    arrow: id_x.clone(),
                },
                MorObject {
                    label: "(x,y;0)".into(),
                    source: xi,
                    target: yi,
                    arrow: zero_xy.clone(),
                },
            ],
        )
        .unwrap();
        let we = hull_cone_witness(&table, &model, "cone(eps)", &eps)
            .unwrap()
            .expect("cone of eps listed");
        let wi = hull_cone_witness(&table, &model, "cone(id)", &id_x)
            .unwrap()
            .expect("cone of id listed");
        let wz = hull_cone_witness(&table, &model, "cone(0)", &zero_xy)
            .unwrap()
            .expect("cone of zero listed");
        for w in [&we, &wi, &wz] {
            let rep = verify_table_cone_axioms(&table, w).unwrap();
            if !rep.all_pass() {
                println!("  disc-hull cone axioms fail for {}: {rep:?}", w.label);
                ok = false;
            }
        }
        let data = ConeFunctorData {
            cones: vec![we, wi, wz],
        };
        let rep = cone_functor_check(&table, &mor, &mor_model, &data, 50, 53).unwrap();
        ok &= rep.passed() && rep.samples >= 50;
    }
    report(
        "cone axioms and the cone dg functor on random morphisms",
        start,
        budget,
        ok,
    );
}

#[test]
fn criterion_6_quotient_structure() {
    let start = Instant::now();
    let budget = Duration::from_secs(60);
    let mut ok = true;
    // small corpus instances at length bound 6
    let instances: Vec<(String, DgCategoryTable, Vec<usize>, usize, usize)> = vec![
        ("disc(0), B={y}, (x,y)".into(), disc(q(), 0), vec![1], 0, 1),
        ("disc(0), B={y}, (y,y)".into(), disc(q(), 0), vec![1], 1, 1),
        ("disc(1), B={y}, (x,y)".into(), disc(q(), 1), vec![1], 0, 1),
        ("sphere(0), B={y}, (x,y)".into(), sphere(q(), 0), vec![1], 0, 1),
        (
            "complexes(A2), B={eA}, (A,A)".into(),
            complexes_table_on_a_and_ea(&a2_algebra(q())),
            vec![1],
            0,
            0,
        ),
        (
            "complexes(two-cycle), B={eA}, (A,A)".into(),
            complexes_table_on_a_and_ea(&two_cycle_algebra(q())),
            vec![1],
            0,
            0,
        ),
    ];
    for (name, table, contracted, x, y) in &instances {
        let t = match quotient_hom(table, contracted, *x, *y, 6) {
            Ok(t) => t,
            Err(e) => {
                println!("  {name}: construction failed: {e}");
                ok = false;
                continue;
            }
        };
        let rep = quotient_filtration_check(&t).unwrap();
        if !rep.passed() {
            println!("  {name}: filtration report {rep:?}");
            ok = false;
        }
    }
    // the F2 hull instance at length bound 6
    {
        let (table, _model) = standard_k_hull(f2(), 0..=1).unwrap();
        let k0 = table.object_index("k[0]").unwrap();
        let c = table.object_index("C").unwrap();
        let t = quotient_hom(&table, &[c], k0, k0, 6).unwrap();
        let rep = quotient_filtration_check(&t).unwrap();
        if !rep.passed() {
            println!("  F2 hull instance: filtration report {rep:?}");
            ok = false;
        }
        // contracted endomorphisms: 1_C = d(eps_C) and H^*(End C) = 0, exact
        let tc = quotient_hom(&table, &[c], c, c, 3).unwrap();
        let eps = tc.epsilon_element(c).unwrap();
        let deps = tc.differential(&eps);
        let one = tc.include_length_zero(&table.identity(c)).unwrap();
        if deps != one {
            println!("  F2 hull instance: d(eps) != 1");
            ok = false;
        }
        for i in -3..=3 {
            let coh = quotient_cohomology(&tc, i, 3);
            if !coh.is_exact() || coh.dimension() != 0 {
                println!("  F2 hull instance: End(C) cohomology at {i}: {coh:?}");
                ok = false;
            }
        }
    }
    // epsilon identities on the small instances
    for (table, u) in [
        (disc(q(), 0), 1usize),
        (disc(q(), 1), 1),
        (sphere(q(), 0), 1),
    ] {
        let t = quotient_hom(&table, &[u], u, u, 5).unwrap();
        let eps = t.epsilon_element(u).unwrap();
        if t.differential(&eps) != t.include_length_zero(&table.identity(u)).unwrap() {
            println!("  d(eps) != 1 on a small instance");
            ok = false;
        }
        for i in -3..=1 {
            let coh = quotient_cohomology(&t, i, 3);
            if !coh.is_exact() || coh.dimension() != 0 {
                println!("  End(U) quotient cohomology at {i} not exactly zero: {coh:?}");
                ok = false;
            }
        }
    }
    report(
        "quotient structure: d^2, filtration, bottom sequence, contractibility",
        start,
        budget,
        ok,
    );
}

#[test]
fn criterion_7_gamma_matches_tor() {
    let start = Instant::now();
    let budget = Duration::from_secs(60);
    let mut ok = true;
    // the A2 instance
    {
        let a = a2_algebra(q());
        let e = a.element_by_label("e1").unwrap();
        let g = gamma_algebra(&a, &e, 6).unwrap();
        ok &= gamma_cohomology(&g, 0).unwrap() == 1;
        for p in 1..=6 {
            ok &= gamma_cohomology(&g, p).unwrap() == 0;
        }
        ok &= stratifying_check(&a, &e, 6).unwrap() == StratifyingVerdict::Stratifying { depth: 6 };
        // oracle side: eAe is the ground field, Tor vanishes positively
        let (corner, corner_basis) = a.corner_algebra(&e).unwrap();
        assert_eq!(corner.dim(), 1);
        let m = module_from_slice(&a, &corner, &corner_basis, Side::Right, &e, true);
        let n = module_from_slice(&a, &corner, &corner_basis, Side::Left, &e, false);
        // trivial resolution of the right module m (free over a field)
        let res = Resolution {
            terms: vec![
                m.clone(),
                AlgebraModule::zero_module(&corner, Side::Right),
                AlgebraModule::zero_module(&corner, Side::Right),
            ],
            differentials: vec![
                Matrix::zero(q(), m.dim, 0),
                Matrix::zero(q(), 0, 0),
            ],
            augmentation: Matrix::identity(q(), m.dim),
        };
        let tor = tor_oracle(&corner, &m, &n, &res, 1).unwrap();
        ok &= tor[1] == 0;
        // H^-1 = ker(Ae ⊗_{eAe} eA -> A): dim = Tor_0 - dim AeA
        let (t0, _) = tensor_over_algebra(&corner, &m, &n);
        ok &= gamma_cohomology(&g, 1).unwrap() == t0 - a.two_sided_ideal_dim(&e);
    }
    // the two-cycle instance
    {
        let a = two_cycle_algebra(q());
        let e = a.element_by_label("e1").unwrap();
        let g = gamma_algebra(&a, &e, 6).unwrap();
        let record = gamma_degree_record(&g).unwrap();
        let expected: Vec<(i32, usize)> = (0..=6).map(|p| (-(p as i32), 1usize)).collect();
        if record != expected {
            println!("  two-cycle degree record {record:?}");
            ok = false;
        }
        ok &= stratifying_check(&a, &e, 6).unwrap()
            == StratifyingVerdict::NotStratifying {
                least_failing_p: 1,
                dim: 1,
            };
        // the Tor oracle, recomputed in-run over the corner dual numbers
        let (corner, corner_basis) = a.corner_algebra(&e).unwrap();
        assert_eq!(corner.dim(), 2);
        let m = module_from_slice(&a, &corner, &corner_basis, Side::Right, &e, true);
        let n = module_from_slice(&a, &corner, &corner_basis, Side::Left, &e, false);
        // resolution of m = Ae over eAe: P_0 = R^2 covering the generators
        // e1 and a, P_q = R with d = t for q >= 1
        let res = build_ae_resolution(&a, &corner, &corner_basis, &m, 7);
        res.validate(&corner, &m).unwrap();
        let tor = tor_oracle(&corner, &m, &n, &res, 5).unwrap();
        // Tor_0 = dim (Ae ⊗ eA) = 5; Tor_p = 1 for p >= 1
        if tor != vec![5, 1, 1, 1, 1, 1] {
            println!("  two-cycle oracle Tor = {tor:?}");
            ok = false;
        }
        // H^{-p}(Γ) = Tor_{p-1} for p >= 2; H^{-1} = Tor_0 - dim AeA
        for p in 2..=6usize {
            ok &= gamma_cohomology(&g, p).unwrap() == tor[p - 1];
        }
        ok &= gamma_cohomology(&g, 1).unwrap() == tor[0] - a.two_sided_ideal_dim(&e);
    }
    report("localization cohomology matches the Tor oracle", start, budget, ok);
}

/// Ae (left = false: eA) as a one-sided module over the corner algebra, with
/// actions transported through the embeddings.
fn module_from_slice(
    a: &Algebra,
    corner: &Algebra,
    corner_basis: &[Vec<Scalar>],
    side: Side,
    e: &[Scalar],
    left_slice: bool,
) -> AlgebraModule {
    let field = a.field;
    let (_, emb) = AlgebraModule::idempotent_slice(
        a,
        if left_slice { Side::Left } else { Side::Right },
        e,
    )
    .unwrap();
    let dim = emb.len();
    let action: Vec<Matrix> = (0..corner.dim())
        .map(|i| {
            let r = &corner_basis[i];
            let cols: Vec<Vec<Scalar>> = emb
                .iter()
                .map(|mvec| {
                    let product = match side {
                        Side::Right => a.multiply(mvec, r),
                        Side::Left => a.multiply(r, mvec),
                    };
                    coordinates_in(&emb.to_vec(), &product, field)
                        .expect("slice closed under the corner action")
                })
                .collect();
            Matrix::from_columns(field, &cols, dim)
        })
        .collect();
    AlgebraModule::new(corner, side, dim, action).unwrap()
}

/// ... -> R --t--> R --t--> R^2 --(e1, a)--> Ae -> 0 over R = eAe of the
/// two-cycle algebra.
fn build_ae_resolution(
    a: &Algebra,
    corner: &Algebra,
    corner_basis: &[Vec<Scalar>],
    m: &AlgebraModule,
    terms: usize,
) -> Resolution {
    let field = a.field;
    let e = a.element_by_label("e1").unwrap();
    let (_, emb) = AlgebraModule::idempotent_slice(a, Side::Left, &e).unwrap();
    // generators of Ae over the corner: e1 and the arrow a
    let gens = vec![
        a.element_by_label("e1").unwrap(),
        a.element_by_label("a").unwrap(),
    ];
    let p0 = AlgebraModule::free(corner, Side::Right, 2);
    // augmentation: block b, corner basis i maps to gens[b] * corner_basis[i]
    let mut aug = Matrix::zero(field, m.dim, p0.dim);
    for b in 0..2 {
        for i in 0..corner.dim() {
            let img = a.multiply(&gens[b], &corner_basis[i]);
            let coords = coordinates_in(&emb.to_vec(), &img, field).unwrap();
            for (r, c) in coords.iter().enumerate() {
                aug.set(r, b * corner.dim() + i, c.clone());
            }
        }
    }
    // t in corner coordinates
    let ba = a.element_by_label("b*a").unwrap();
    let t_corner = coordinates_in(&corner_basis.to_vec(), &ba, field).unwrap();
    let t_left = corner.left_multiplication(&t_corner);
    // d_1: R -> R^2, 1 |-> (0, t)
    let mut d1 = Matrix::zero(field, p0.dim, corner.dim());
    for i in 0..corner.dim() {
        // image of corner basis element i is (0, t * r_i)
        let tri = corner.multiply(&t_corner, &corner.basis_vector(i));
        for (r, c) in tri.iter().enumerate() {
            d1.set(corner.dim() + r, i, c.clone());
        }
    }
    // terms P_0, P_1, ..., P_n with differentials d_1: P_1 -> P_0 the
    // (0, t)-map and d_q = t for q >= 2
    let reg = AlgebraModule::regular(corner, Side::Right);
    let mut res_terms = vec![p0];
    let mut diffs = vec![d1];
    for depth in 1..=terms {
        res_terms.push(reg.clone());
        if depth >= 2 {
            diffs.push(t_left.clone());
        }
    }
    Resolution {
        terms: res_terms,
        differentials: diffs,
        augmentation: aug,
    }
}

#[test]
fn criterion_8_quotient_enhances_the_verdier_quotient() {
    let start = Instant::now();
    let budget = Duration::from_secs(30);
    let mut ok = true;
    // the quotient side over F2: hull of k on {k[0], C}, contract C
    let (table, _model) = standard_k_hull(f2(), 0..=1).unwrap();
    let k0 = table.object_index("k[0]").unwrap();
    let c = table.object_index("C").unwrap();
    let t = quotient_hom(&table, &[c], k0, k0, 4).unwrap();
    let mut quotient_dims = BTreeMap::new();
    for i in -3..=3 {
        let coh = quotient_cohomology(&t, i, 3);
        if !coh.is_exact() {
            println!("  quotient cohomology at {i} not certified exact");
            ok = false;
        }
        if let dgcat_core::quotient::QuotientCohomology::Exact { certificate, .. } = &coh {
            if i == 0 && *certificate != ExactCertificate::AcyclicInterior {
                println!("  unexpected certificate {certificate:?}");
            }
        }
        quotient_dims.insert(i, coh.dimension());
        let expected = usize::from(i == 0);
        if coh.dimension() != expected {
            println!("  H^{i} = {} (expected {expected})", coh.dimension());
            ok = false;
        }
    }
    // the Verdier side: roof enumeration over a shift window
    let (table2, model2) = standard_k_hull(f2(), -4..=4).unwrap();
    let c2 = table2.object_index("C").unwrap();
    let x = table2.object_index("k[0]").unwrap();
    for i in -3..=3i32 {
        let y = table2.object_index(&format!("k[{i}]")).unwrap();
        let rep = verdier_oracle(&table2, &model2, &[c2], x, y).unwrap();
        if !rep.filtered_certificate {
            println!("  oracle index not certified filtered at {i}");
            ok = false;
        }
        if rep.dim != quotient_dims[&i] {
            println!(
                "  mismatch at {i}: oracle {} vs quotient {}",
                rep.dim, quotient_dims[&i]
            );
            ok = false;
        }
    }
    report(
        "dg quotient cohomology matches the Verdier-quotient oracle",
        start,
        budget,
        ok,
    );
}

#[test]
fn criterion_9_euler_conservation() {
    let start = Instant::now();
    let budget = Duration::from_secs(60);
    let mut ok = true;
    let euler_matches = |c: &dgcat_core::complex::Complex| -> bool {
        let lhs = c.euler_characteristic();
        let rhs: i64 = c
            .cohomology_dims()
            .iter()
            .map(|(&i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum();
        lhs == rhs
    };
    for (name, table) in corpus_tables() {
        for x in 0..table.object_count() {
            for y in 0..table.object_count() {
                if !euler_matches(table.hom(x, y)) {
                    println!("  Euler mismatch in {name} at ({x},{y})");
                    ok = false;
                }
            }
        }
    }
    // quotient truncations are bounded complexes as well
    {
        let a = two_cycle_algebra(q());
        let e = a.element_by_label("e1").unwrap();
        let g = gamma_algebra(&a, &e, 4).unwrap();
        if !euler_matches(&g.truncation.dense_complex()) {
            println!("  Euler mismatch on the localization truncation");
            ok = false;
        }
    }
    report(
        "Euler characteristic equals alternating cohomology sum",
        start,
        budget,
        ok,
    );
}
