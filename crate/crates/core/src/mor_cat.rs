//! The morphism dg category: objects are triples (x, y; a) with a closed of
//! degree zero, morphisms are triangular matrices (α, β, h) composing by
//! matrix multiplication, and the differential is
//!     d(α, β, h) = (-d α, d β, d h + a' ∘ α - (-1)^p β ∘ a).
//! That this squares to zero is certified by the table validator.
//!
//! Also the canonical comparison from H^0 of the morphism category to the
//! ordinary morphism category of H^0: full and dense on chosen objects, with
//! square-zero kernel ideal exhibited by an explicit primitive.

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::category::{DgCategoryTable, HomElement};
use crate::complex::Complex;
use crate::error::{DgError, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{image_basis, kernel_basis, solve, Matrix, Subspace};

/// One object of the morphism category.
#[derive(Debug, Clone, PartialEq)]
pub struct MorObject {
    pub label: String,
    pub source: usize,
    pub target: usize,
    pub arrow: HomElement,
}

/// Block layout of the morphism category's Hom-complexes: per degree p the
/// basis is [α-block | β-block | h-block] with α in Hom(x,x')^p,
/// β in Hom(y,y')^p, h in Hom(x,y')^{p-1}.
#[derive(Debug, Clone)]
pub struct MorModel {
    pub base: DgCategoryTable,
    pub objects: Vec<MorObject>,
}

impl MorModel {
    fn block_dims(&self, i: usize, j: usize, p: i32) -> (usize, usize, usize) {
        let (oi, oj) = (&self.objects[i], &self.objects[j]);
        (
            self.base.hom(oi.source, oj.source).dim(p),
            self.base.hom(oi.target, oj.target).dim(p),
            self.base.hom(oi.source, oj.target).dim(p - 1),
        )
    }

    /// Splits an element of Hom((x,y;a), (x',y';a'))^p into (α, β, h).
    pub fn split(&self, e: &HomElement) -> (HomElement, HomElement, HomElement) {
        let (i, j, p) = (e.source, e.target, e.degree);
        let (da, db, _dh) = self.block_dims(i, j, p);
        let (oi, oj) = (&self.objects[i], &self.objects[j]);
        let alpha = HomElement {
            source: oi.source,
            target: oj.source,
            degree: p,
            coords: e.coords[..da].to_vec(),
        };
        let beta = HomElement {
            source: oi.target,
            target: oj.target,
            degree: p,
            coords: e.coords[da..da + db].to_vec(),
        };
        let h = HomElement {
            source: oi.source,
            target: oj.target,
            degree: p - 1,
            coords: e.coords[da + db..].to_vec(),
        };
        (alpha, beta, h)
    }

    /// Assembles (α, β, h) into an element of the morphism category.
    pub fn join(
        &self,
        i: usize,
        j: usize,
        alpha: &HomElement,
        beta: &HomElement,
        h: &HomElement,
    ) -> HomElement {
        let p = alpha.degree;
        debug_assert_eq!(beta.degree, p);
        debug_assert_eq!(h.degree, p - 1);
        let mut coords = alpha.coords.clone();
        coords.extend(beta.coords.iter().cloned());
        coords.extend(h.coords.iter().cloned());
        HomElement {
            source: i,
            target: j,
            degree: p,
            coords,
        }
    }
}

/// Builds the morphism dg category on a caller-enumerated finite list of
/// closed degree-0 morphisms. Rejects arrows that are not closed of degree 0.
pub fn mor_category(
    base: &DgCategoryTable,
    objects: Vec<MorObject>,
) -> Result<(DgCategoryTable, MorModel)> {
    let field = base.field;
    for o in &objects {
        if o.arrow.degree != 0 {
            return Err(DgError::WrongDegree {
                expected: 0,
                got: o.arrow.degree,
            });
        }
        if o.arrow.source != o.source || o.arrow.target != o.target {
            return Err(DgError::EndpointMismatch(format!(
                "object {}",
                o.label
            )));
        }
        if !base.is_closed(&o.arrow) {
            return Err(DgError::NotClosed { degree: 0 });
        }
    }
    let model = MorModel {
        base: base.clone(),
        objects,
    };
    let n = model.objects.len();

    let mut homs = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let (oi, oj) = (&model.objects[i], &model.objects[j]);
            let hxx = base.hom(oi.source, oj.source);
            let hyy = base.hom(oi.target, oj.target);
            let hxy = base.hom(oi.source, oj.target);
            // degrees where any block is present
            let mut degrees: Vec<i32> = Vec::new();
            for p in hxx.support().chain(hyy.support()) {
                if !degrees.contains(&p) {
                    degrees.push(p);
                }
            }
            for p in hxy.support().map(|d| d + 1) {
                if !degrees.contains(&p) {
                    degrees.push(p);
                }
            }
            degrees.sort_unstable();
            let mut components = BTreeMap::new();
            for &p in &degrees {
                let (da, db, dh) = model.block_dims(i, j, p);
                if da + db + dh > 0 {
                    components.insert(p, da + db + dh);
                }
            }
            let mut differentials = BTreeMap::new();
            for &p in &degrees {
                let (da, db, dh) = model.block_dims(i, j, p);
                let src = da + db + dh;
                let (ta, tb, th) = model.block_dims(i, j, p + 1);
                let tgt = ta + tb + th;
                if src == 0 || tgt == 0 {
                    continue;
                }
                let mut m = Matrix::zero(field, tgt, src);
                let sign_p = field.from_i64(if p.rem_euclid(2) == 0 { -1 } else { 1 });
                // α column block
                let dxx = hxx.differential(p);
                for c in 0..da {
                    // -d(α)
                    for r in 0..ta {
                        let v = dxx.get(r, c);
                        if !field.is_zero(v) {
                            m.set(r, c, field.neg(v));
                        }
                    }
                    // a' ∘ α lands in the h-block of degree p+1 (an element
                    // of Hom(x, y')^{p}, the h-part of degree p+1)
                    let alpha = base.basis_element(oi.source, oj.source, p, c);
                    let aa = base.compose(&oj.arrow, &alpha).expect("endpoints");
                    for (r, v) in aa.coords.iter().enumerate() {
                        if !field.is_zero(v) {
                            m.set(ta + tb + r, c, v.clone());
                        }
                    }
                }
                // β column block
                let dyy = hyy.differential(p);
                for c in 0..db {
                    for r in 0..tb {
                        let v = dyy.get(r, c);
                        if !field.is_zero(v) {
                            m.set(ta + r, da + c, v.clone());
                        }
                    }
                    // -(-1)^p β ∘ a in the h-block
                    let beta = base.basis_element(oi.target, oj.target, p, c);
                    let ba = base.compose(&beta, &oi.arrow).expect("endpoints");
                    for (r, v) in ba.coords.iter().enumerate() {
                        if !field.is_zero(v) {
                            m.set(ta + tb + r, da + c, field.mul(v, &sign_p));
                        }
                    }
                }
                // h column block: d(h)
                let dxy = hxy.differential(p - 1);
                for c in 0..dh {
                    for r in 0..th {
                        let v = dxy.get(r, c);
                        if !field.is_zero(v) {
                            m.set(ta + tb + r, da + db + c, v.clone());
                        }
                    }
                }
                differentials.insert(p, m);
            }
            homs.insert(
                (i, j),
                Complex::new_unchecked(field, components, differentials)?,
            );
        }
    }

    let mut ids = BTreeMap::new();
    for i in 0..n {
        let o = &model.objects[i];
        let (da, db, dh) = model.block_dims(i, i, 0);
        let mut coords = vec![field.zero(); da + db + dh];
        let ix = base.identity(o.source);
        let iy = base.identity(o.target);
        coords[..da].clone_from_slice(&ix.coords);
        coords[da..da + db].clone_from_slice(&iy.coords);
        ids.insert(i, coords);
    }

    let labels: Vec<String> = model.objects.iter().map(|o| o.label.clone()).collect();
    let model_ref = &model;
    let table = DgCategoryTable::from_parts(
        field,
        labels,
        homs,
        ids,
        |i, j, l, (q_, jj), (p_, ii), out_dim| {
            // matrix multiplication: (α',β',h') ∘ (α,β,h)
            //   = (α'∘α, β'∘β, h'∘α + β'∘h)
            let e1 = {
                let mut e = HomElement {
                    source: i,
                    target: j,
                    degree: p_,
                    coords: vec![field.zero(); {
                        let (a, b, c) = model_ref.block_dims(i, j, p_);
                        a + b + c
                    }],
                };
                e.coords[ii] = field.one();
                e
            };
            let e2 = {
                let mut e = HomElement {
                    source: j,
                    target: l,
                    degree: q_,
                    coords: vec![field.zero(); {
                        let (a, b, c) = model_ref.block_dims(j, l, q_);
                        a + b + c
                    }],
                };
                e.coords[jj] = field.one();
                e
            };
            let (a1, b1, h1) = model_ref.split(&e1);
            let (a2, b2, h2) = model_ref.split(&e2);
            let base = &model_ref.base;
            let alpha = base.compose(&a2, &a1).expect("endpoints");
            let beta = base.compose(&b2, &b1).expect("endpoints");
            let h = base
                .add(
                    &base.compose(&h2, &a1).expect("endpoints"),
                    &base.compose(&b2, &h1).expect("endpoints"),
                )
                .expect("same shape");
            let out = model_ref.join(i, l, &alpha, &beta, &h);
            debug_assert_eq!(out.coords.len(), out_dim);
            out.coords
        },
    )?;
    table.validate()?;
    Ok((table, model))
}

/// Outcome of the comparison H^0(mor(A)) -> mor(H^0(A)) on chosen objects.
#[derive(Debug)]
pub struct MorComparisonReport {
    /// every homotopy-commutative square on chosen objects lifts to a closed
    /// degree-0 morphism of the morphism category
    pub full: bool,
    /// every H^0 class between chosen endpoints is realized by a closed arrow
    pub dense: bool,
    /// every tested kernel-ideal composite equals d of the displayed primitive
    pub kernel_square_zero: bool,
    pub kernel_pairs_tested: usize,
}

impl MorComparisonReport {
    pub fn passed(&self) -> bool {
        self.full && self.dense && self.kernel_square_zero
    }
}

fn random_element(
    rng: &mut StdRng,
    field: FieldSpec,
    table: &DgCategoryTable,
    x: usize,
    y: usize,
    degree: i32,
) -> HomElement {
    let dim = table.hom(x, y).dim(degree);
    let coords = (0..dim)
        .map(|_| field.from_i64(rng.gen_range(-3i64..=3)))
        .collect();
    HomElement {
        source: x,
        target: y,
        degree,
        coords,
    }
}

/// Verifies fullness and density of the comparison functor on the chosen
/// objects, and checks the square-zero kernel identity on randomly generated
/// kernel pairs: for composable kernel morphisms the composite equals
/// d(-d(u')∘u, v'∘d(v), v'∘h - h'∘u + v'∘a'∘u).
pub fn h0_mor_comparison(
    base: &DgCategoryTable,
    objects: Vec<MorObject>,
    trials: usize,
    seed: u64,
) -> Result<MorComparisonReport> {
    let field = base.field;
    let (mor, model) = mor_category(base, objects)?;
    let n = model.objects.len();
    let mut rng = StdRng::seed_from_u64(seed);

    // fullness: for each ordered pair of chosen objects, every homotopy-
    // commutative square (ᾱ, β̄) lifts: β∘a - a'∘α must be a coboundary and
    // the lift h must exist
    let mut full = true;
    for i in 0..n {
        for j in 0..n {
            let (oi, oj) = (&model.objects[i], &model.objects[j]);
            let zxx = kernel_basis(&base.hom(oi.source, oj.source).differential(0));
            let zyy = kernel_basis(&base.hom(oi.target, oj.target).differential(0));
            let hxy = base.hom(oi.source, oj.target);
            let im_d = image_basis(&hxy.differential(-1));
            // homotopy-commutative squares: pairs (α, β) of cocycles with
            // β∘a - a'∘α in the image of d
            let na_ = zxx.dim();
            let nb_ = zyy.dim();
            let target_dim = hxy.dim(0);
            let mut rows: Vec<Vec<Scalar>> = vec![Vec::new(); 0];
            // assemble the map (α, β) -> class of β∘a - a'∘α in coker(d)
            let (qdim, qreps) = if target_dim == 0 {
                (0, Vec::new())
            } else {
                crate::linalg::quotient_data(&Subspace::full(field, target_dim), &im_d)?
            };
            let express_class = |v: &[Scalar]| -> Vec<Scalar> {
                if qdim == 0 {
                    return Vec::new();
                }
                let mut cols: Vec<Vec<Scalar>> = qreps.clone();
                cols.extend(im_d.basis().iter().cloned());
                let coords = crate::linalg::coordinates_in(&cols, v, field)
                    .expect("reps and boundaries span");
                coords[..qdim].to_vec()
            };
            for k in 0..na_ + nb_ {
                let (alpha, beta) = if k < na_ {
                    (
                        HomElement {
                            source: oi.source,
                            target: oj.source,
                            degree: 0,
                            coords: zxx.basis()[k].to_vec(),
                        },
                        base.zero_element(oi.target, oj.target, 0),
                    )
                } else {
                    (
                        base.zero_element(oi.source, oj.source, 0),
                        HomElement {
                            source: oi.target,
                            target: oj.target,
                            degree: 0,
                            coords: zyy.basis()[k - na_].to_vec(),
                        },
                    )
                };
                let defect = base.sub(
                    &base.compose(&beta, &oi.arrow)?,
                    &base.compose(&oj.arrow, &alpha)?,
                )?;
                let row = express_class(&defect.coords);
                rows.push(row);
            }
            // kernel of the class map = liftable squares; each must lift
            let square_space: Vec<Vec<Scalar>> = if qdim == 0 || rows.is_empty() {
                (0..na_ + nb_)
                    .map(|k| {
                        let mut v = vec![field.zero(); na_ + nb_];
                        v[k] = field.one();
                        v
                    })
                    .collect()
            } else {
                let m = Matrix::from_rows(field, rows)?.transpose();
                kernel_basis(&m).basis().to_vec()
            };
            for sq in &square_space {
                let mut alpha = base.zero_element(oi.source, oj.source, 0);
                let mut beta = base.zero_element(oi.target, oj.target, 0);
                for (k, c) in sq.iter().enumerate() {
                    if field.is_zero(c) {
                        continue;
                    }
                    if k < na_ {
                        for (t, bc) in alpha.coords.iter_mut().zip(&zxx.basis()[k]) {
                            *t = field.add(t, &field.mul(c, bc));
                        }
                    } else {
                        for (t, bc) in beta.coords.iter_mut().zip(&zyy.basis()[k - na_]) {
                            *t = field.add(t, &field.mul(c, bc));
                        }
                    }
                }
                let defect = base.sub(
                    &base.compose(&beta, &oi.arrow)?,
                    &base.compose(&oj.arrow, &alpha)?,
                )?;
                let d = hxy.differential(-1);
                if target_dim > 0 && solve(&d, &defect.coords).is_none() {
                    full = false;
                }
            }
        }
    }

    // density: every H^0 class between endpoints of chosen objects has a
    // closed representative realizing a morphism-category object
    let mut dense = true;
    for o in &model.objects {
        let h = base.hom(o.source, o.target);
        let (hd, reps) = h.cohomology(0);
        for k in 0..hd {
            let rep = HomElement {
                source: o.source,
                target: o.target,
                degree: 0,
                coords: reps[k].clone(),
            };
            if !base.is_closed(&rep) {
                dense = false;
            }
        }
    }

    // kernel ideal is square zero, with the displayed primitive
    let mut kernel_ok = true;
    let mut tested = 0usize;
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                let (oi, oj, ol) = (&model.objects[i], &model.objects[j], &model.objects[l]);
                for _ in 0..trials {
                    // kernel morphism m: (x,y;a) -> (x',y';a') with
                    // α = d(u), β = d(v), h solving closedness
                    let u = random_element(&mut rng, field, base, oi.source, oj.source, -1);
                    let v = random_element(&mut rng, field, base, oi.target, oj.target, -1);
                    let up = random_element(&mut rng, field, base, oj.source, ol.source, -1);
                    let vp = random_element(&mut rng, field, base, oj.target, ol.target, -1);
                    let du = base.differential(&u);
                    let dv = base.differential(&v);
                    let dup = base.differential(&up);
                    let dvp = base.differential(&vp);
                    // h = v∘a - a'∘u solves d(h) = β∘a - a'∘α
                    let h = base.sub(
                        &base.compose(&v, &oi.arrow)?,
                        &base.compose(&oj.arrow, &u)?,
                    )?;
                    let hp = base.sub(
                        &base.compose(&vp, &oj.arrow)?,
                        &base.compose(&ol.arrow, &up)?,
                    )?;
                    let m1 = model.join(i, j, &du, &dv, &h);
                    let m2 = model.join(j, l, &dup, &dvp, &hp);
                    // both must be closed in the morphism category
                    if !mor.is_closed(&m1) || !mor.is_closed(&m2) {
                        kernel_ok = false;
                        continue;
                    }
                    let composite = mor.compose(&m2, &m1)?;
                    // primitive: (-d(u')∘u, v'∘d(v), v'∘h - h'∘u + v'∘a'∘u)
                    let top = base.scale(
                        &base.compose(&dup, &u)?,
                        &field.from_i64(-1),
                    );
                    let bottom = base.compose(&vp, &dv)?;
                    let htilde = base.add(
                        &base.sub(&base.compose(&vp, &h)?, &base.compose(&hp, &u)?)?,
                        &base.compose(&vp, &base.compose(&oj.arrow, &u)?)?,
                    )?;
                    let primitive = model.join(i, l, &top, &bottom, &htilde);
                    if mor.differential(&primitive) != composite {
                        kernel_ok = false;
                    }
                    tested += 1;
                }
            }
        }
    }
    Ok(MorComparisonReport {
        full,
        dense,
        kernel_square_zero: kernel_ok,
        kernel_pairs_tested: tested,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{disc, point_category};

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn mor_of_point_with_identity_validates() {
        let p = point_category(q(), "*");
        let objects = vec![
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
        ];
        let (mor, model) = mor_category(&p, objects).unwrap();
        mor.validate().unwrap();
        // End of (id): α, β in degree 0 and the h-block in degree 1 (h has
        // underlying degree p - 1 = 0 there)
        assert_eq!(mor.hom(0, 0).dim(0), 2);
        assert_eq!(mor.hom(0, 0).dim(1), 1);
        // H^0 of End(id) is k: the square α = β up to the coboundary from h
        assert_eq!(mor.hom(0, 0).cohomology_dim(0), 1);
        let _ = model;
    }

    #[test]
    fn mor_rejects_non_closed_arrows() {
        let d = disc(q(), 0);
        // delta has degree 0 but d(delta) = eps != 0
        let delta = d.basis_element(0, 1, 0, 0);
        let objects = vec![MorObject {
            label: "bad".into(),
            source: 0,
            target: 1,
            arrow: delta,
        }];
        assert!(matches!(
            mor_category(&d, objects),
            Err(DgError::NotClosed { .. })
        ));
    }

    #[test]
    fn mor_composition_is_matrix_multiplication() {
        let d = disc(q(), 1);
        // eps: x -> y is closed of degree 0 in disc(1)
        let eps = d.basis_element(0, 1, 0, 0);
        assert!(d.is_closed(&eps));
        let objects = vec![
            MorObject {
                label: "c".into(),
                source: 0,
                target: 1,
                arrow: eps,
            },
            MorObject {
                label: "zx".into(),
                source: 0,
                target: 0,
                arrow: d.zero_element(0, 0, 0),
            },
        ];
        let (mor, model) = mor_category(&d, objects).unwrap();
        mor.validate().unwrap();
        // split/join round trip on a basis element
        for (p, i) in mor.basis_labels(0, 0) {
            let e = mor.basis_element(0, 0, p, i);
            let (a, b, h) = model.split(&e);
            assert_eq!(model.join(0, 0, &a, &b, &h), e);
        }
    }

    #[test]
    fn zero_differential_base_gives_exact_comparison() {
        // with zero differentials the kernel ideal is zero and the functor is
        // an isomorphism on chosen objects; the report passes trivially
        let p = point_category(q(), "*");
        let objects = vec![MorObject {
            label: "(id)".into(),
            source: 0,
            target: 0,
            arrow: p.identity(0),
        }];
        let rep = h0_mor_comparison(&p, objects, 4, 7).unwrap();
        assert!(rep.passed());
        assert!(rep.kernel_pairs_tested > 0);
    }

    #[test]
    fn disc_comparison_is_full_with_square_zero_kernel() {
        let d = disc(q(), 0);
        let objects = vec![
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
        ];
        let rep = h0_mor_comparison(&d, objects, 6, 11).unwrap();
        assert!(rep.full, "fullness fails");
        assert!(rep.dense, "density fails");
        assert!(rep.kernel_square_zero, "square-zero identity fails");
    }
}
