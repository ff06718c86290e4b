//! Natural-transformation complexes and functor dg categories, with the
//! currying comparison Hom(A ⊗ B, C) ≅ Hom(A, Hom(B, C)) on finite functor
//! lists.

use std::collections::BTreeMap;

use crate::category::{tensor, DgCategoryTable, DgFunctorTable, HomElement};
use crate::complex::{tensor_complex, Complex};
use crate::error::{DgError, Result};
use crate::field::Scalar;
use crate::linalg::{coordinates_in, kernel_basis, Matrix};

/// A graded natural-transformation family: one element of Hom(Fx, Gx) per
/// source object, all of one degree.
pub type NatFamily = Vec<HomElement>;

/// Chosen bases of the natural-transformation complex between two parallel
/// functors.
#[derive(Debug, Clone)]
pub struct NatTransBasis {
    pub families: BTreeMap<i32, Vec<NatFamily>>,
    kernels: BTreeMap<i32, Vec<Vec<Scalar>>>,
    layout: BTreeMap<i32, Vec<(usize, usize)>>,
    target_pairs: Vec<(usize, usize)>,
}

impl NatTransBasis {
    pub fn dim(&self, p: i32) -> usize {
        self.families.get(&p).map_or(0, Vec::len)
    }

    fn vectorize(&self, p: i32, fam: &NatFamily) -> Vec<Scalar> {
        let lay = self.layout.get(&p).map_or(&[][..], Vec::as_slice);
        lay.iter()
            .map(|&(x, i)| {
                let (fx, gx) = self.target_pairs[x];
                debug_assert_eq!(fam[x].source, fx);
                debug_assert_eq!(fam[x].target, gx);
                fam[x].coords[i].clone()
            })
            .collect()
    }

    /// Coordinates of a family in the chosen basis; None if it violates
    /// graded naturality.
    pub fn express(&self, b: &DgCategoryTable, p: i32, fam: &NatFamily) -> Option<Vec<Scalar>> {
        let v = self.vectorize(p, fam);
        let empty = Vec::new();
        let kernel = self.kernels.get(&p).unwrap_or(&empty);
        coordinates_in(kernel, &v, b.field)
    }
}

/// The Hom-complex of the functor category: degree-p families (η_x) with
/// G(a) ∘ η_x = (-1)^{|η| |a|} η_{x'} ∘ F(a), differential (dη)_x = d(η_x).
pub fn nat_trans_complex(
    f: &DgFunctorTable,
    g: &DgFunctorTable,
) -> Result<(Complex, NatTransBasis)> {
    let a = &f.source;
    let b = &f.target;
    if g.source != *a || g.target != *b {
        return Err(DgError::Invalid("functors must be parallel".into()));
    }
    let field = b.field;
    let n = a.object_count();
    let target_pairs: Vec<(usize, usize)> = (0..n)
        .map(|x| (f.object_image(x), g.object_image(x)))
        .collect();

    // candidate degrees
    let mut degrees: Vec<i32> = Vec::new();
    for x in 0..n {
        let (fx, gx) = target_pairs[x];
        for p in b.hom(fx, gx).support() {
            if !degrees.contains(&p) {
                degrees.push(p);
            }
        }
    }
    degrees.sort_unstable();

    let layout_of = |p: i32| -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..n {
            let (fx, gx) = target_pairs[x];
            for i in 0..b.hom(fx, gx).dim(p) {
                out.push((x, i));
            }
        }
        out
    };

    let family_from = |p: i32, lay: &[(usize, usize)], v: &[Scalar]| -> NatFamily {
        let mut fam: NatFamily = (0..n)
            .map(|x| {
                let (fx, gx) = target_pairs[x];
                b.zero_element(fx, gx, p)
            })
            .collect();
        for (k, &(x, i)) in lay.iter().enumerate() {
            fam[x].coords[i] = v[k].clone();
        }
        fam
    };

    let mut families = BTreeMap::new();
    let mut kernels = BTreeMap::new();
    let mut layouts = BTreeMap::new();
    for &p in &degrees {
        let lay = layout_of(p);
        if lay.is_empty() {
            continue;
        }
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for x in 0..n {
            for xp in 0..n {
                for (r, j) in a.basis_labels(x, xp) {
                    let av = a.basis_element(x, xp, r, j);
                    let fa = f.apply(&av);
                    let ga = g.apply(&av);
                    let (fx, gx) = target_pairs[x];
                    let (_fxp, gxp) = target_pairs[xp];
                    let out_dim = b.hom(fx, gxp).dim(p + r);
                    if out_dim == 0 && b.hom(fx, gx).dim(p) == 0 {
                        continue;
                    }
                    let sign = field.from_i64(if (p * r).rem_euclid(2) == 0 { 1 } else { -1 });
                    let mut rowset = vec![vec![field.zero(); lay.len()]; out_dim];
                    for (k, &(xx, i)) in lay.iter().enumerate() {
                        if xx == x {
                            // G(a) ∘ η_x
                            let eta = b.basis_element(fx, gx, p, i);
                            let t = b.compose(&ga, &eta)?;
                            for (ro, c) in t.coords.iter().enumerate() {
                                if !field.is_zero(c) {
                                    rowset[ro][k] = field.add(&rowset[ro][k], c);
                                }
                            }
                        }
                        if xx == xp {
                            // -(-1)^{pr} η_{x'} ∘ F(a)
                            let (fxp2, gxp2) = target_pairs[xp];
                            let eta = b.basis_element(fxp2, gxp2, p, i);
                            let t = b.compose(&eta, &fa)?;
                            for (ro, c) in t.coords.iter().enumerate() {
                                if !field.is_zero(c) {
                                    rowset[ro][k] =
                                        field.sub(&rowset[ro][k], &field.mul(c, &sign));
                                }
                            }
                        }
                    }
                    rows.extend(
                        rowset
                            .into_iter()
                            .filter(|r| r.iter().any(|c| !field.is_zero(c))),
                    );
                }
            }
        }
        let kernel: Vec<Vec<Scalar>> = if rows.is_empty() {
            (0..lay.len())
                .map(|k| {
                    let mut v = vec![field.zero(); lay.len()];
                    v[k] = field.one();
                    v
                })
                .collect()
        } else {
            let sys = Matrix::from_rows(field, rows)?;
            kernel_basis(&sys).basis().to_vec()
        };
        families.insert(
            p,
            kernel
                .iter()
                .map(|v| family_from(p, &lay, v))
                .collect::<Vec<_>>(),
        );
        kernels.insert(p, kernel);
        layouts.insert(p, lay);
    }

    let basis = NatTransBasis {
        families,
        kernels,
        layout: layouts,
        target_pairs,
    };

    let components: BTreeMap<i32, usize> = basis
        .families
        .iter()
        .map(|(&p, fs)| (p, fs.len()))
        .filter(|&(_, d)| d > 0)
        .collect();
    let mut differentials = BTreeMap::new();
    let ps: Vec<i32> = basis.families.keys().copied().collect();
    for &p in &ps {
        let src = basis.dim(p);
        let tgt = basis.dim(p + 1);
        if src == 0 || tgt == 0 {
            continue;
        }
        let mut mat = Matrix::zero(field, tgt, src);
        for col in 0..src {
            let fam = &basis.families[&p][col];
            let dfam: NatFamily = fam.iter().map(|e| b.differential(e)).collect();
            let coords = basis.express(b, p + 1, &dfam).ok_or_else(|| {
                DgError::Invalid(
                    "naturality constraint is not closed under the differential".into(),
                )
            })?;
            for (row, c) in coords.iter().enumerate() {
                if !field.is_zero(c) {
                    mat.set(row, col, c.clone());
                }
            }
        }
        differentials.insert(p, mat);
    }
    let complex = Complex::new(field, components, differentials)?;
    Ok((complex, basis))
}

/// The functor dg category on a finite list of parallel dg functors:
/// Hom = natural-transformation complexes, composition objectwise.
pub fn functor_dg_category(
    a: &DgCategoryTable,
    b: &DgCategoryTable,
    functors: Vec<(String, DgFunctorTable)>,
) -> Result<(DgCategoryTable, Vec<Vec<NatTransBasis>>)> {
    let field = b.field;
    for (name, f) in &functors {
        if f.source != *a || f.target != *b {
            return Err(DgError::Invalid(format!(
                "functor {name:?} is not a functor between the given categories"
            )));
        }
        f.validate()
            .map_err(|e| DgError::Invalid(format!("functor {name:?}: {e}")))?;
    }
    let nf = functors.len();
    let mut homs = BTreeMap::new();
    let mut bases: Vec<Vec<Option<NatTransBasis>>> = vec![(0..nf).map(|_| None).collect(); nf];
    for i in 0..nf {
        for j in 0..nf {
            let (c, basis) = nat_trans_complex(&functors[i].1, &functors[j].1)?;
            homs.insert((i, j), c);
            bases[i][j] = Some(basis);
        }
    }
    let bases: Vec<Vec<NatTransBasis>> = bases
        .into_iter()
        .map(|row| row.into_iter().map(Option::unwrap).collect())
        .collect();
    let mut ids = BTreeMap::new();
    for i in 0..nf {
        let fam: NatFamily = (0..a.object_count())
            .map(|x| b.identity(functors[i].1.object_image(x)))
            .collect();
        let coords = bases[i][i]
            .express(b, 0, &fam)
            .ok_or_else(|| DgError::Invalid("identity transformation is not natural?".into()))?;
        ids.insert(i, coords);
    }
    let labels: Vec<String> = functors.iter().map(|(n, _)| n.clone()).collect();
    let bases_ref = &bases;
    let table = DgCategoryTable::from_parts(
        field,
        labels,
        homs,
        ids,
        |i, j, l, (q_, jj), (p_, ii), _out| {
            let eta = &bases_ref[i][j].families[&p_][ii];
            let etap = &bases_ref[j][l].families[&q_][jj];
            let fam: NatFamily = eta
                .iter()
                .zip(etap)
                .map(|(e, ep)| b.compose(ep, e).expect("endpoints"))
                .collect();
            bases_ref[i][l]
                .express(b, p_ + q_, &fam)
                .expect("objectwise composites stay natural")
        },
    )?;
    table.validate()?;
    Ok((table, bases))
}

/// Builds the functor A ⊗ B -> C determined by a pair of "commuting" functor
/// images along a fixed object of the other factor is not needed here; this
/// helper curries an existing functor on the tensor product: for each object
/// x of A it restricts to a functor B -> C.
pub fn restrict_tensor_functor(
    a: &DgCategoryTable,
    b: &DgCategoryTable,
    t: &DgCategoryTable,
    f: &DgFunctorTable,
    x: usize,
) -> Result<DgFunctorTable> {
    if f.source != *t {
        return Err(DgError::Invalid("functor not defined on the tensor".into()));
    }
    let nb = b.object_count();
    let obj = |xa: usize, xb: usize| xa * nb + xb;
    let object_map: Vec<usize> = (0..nb).map(|u| f.object_image(obj(x, u))).collect();
    let field = b.field;
    let mut maps = BTreeMap::new();
    for u in 0..nb {
        for v in 0..nb {
            let src = b.hom(u, v);
            let mut per_degree = BTreeMap::new();
            for p in src.support() {
                let rows = f
                    .target
                    .hom(object_map[u], object_map[v])
                    .dim(p);
                let mut m = Matrix::zero(field, rows, src.dim(p));
                let (_tc, tb) = tensor_complex(a.hom(x, x), src);
                for i in 0..src.dim(p) {
                    // 1_x ⊗ b_i as an element of the tensor category
                    let idx = tb
                        .position(p, ((0, 0), (p, i)))
                        .expect("tensor label for identity pairing");
                    let mut coords = vec![field.zero(); t.hom(obj(x, u), obj(x, v)).dim(p)];
                    // identity coordinates of A(x,x) may be a combination
                    let ida = a.identity(x);
                    for (k0, c0) in ida.coords.iter().enumerate() {
                        if field.is_zero(c0) {
                            continue;
                        }
                        let idx2 = tb.position(p, ((0, k0), (p, i))).expect("tensor label");
                        let _ = idx;
                        coords[idx2] = c0.clone();
                    }
                    let e = t.element(obj(x, u), obj(x, v), p, coords)?;
                    let img = f.apply(&e);
                    for (r, c) in img.coords.iter().enumerate() {
                        if !field.is_zero(c) {
                            m.set(r, i, c.clone());
                        }
                    }
                }
                per_degree.insert(p, m);
            }
            maps.insert((u, v), per_degree);
        }
    }
    DgFunctorTable::new(b.clone(), f.target.clone(), object_map, maps)
}

/// Report of the currying comparison on supplied functor lists.
#[derive(Debug)]
pub struct CurryingReport {
    pub hom_dimensions_match: bool,
    pub differentials_match: bool,
}

impl CurryingReport {
    pub fn passed(&self) -> bool {
        self.hom_dimensions_match && self.differentials_match
    }
}

/// Compares Hom(A ⊗ B, C) with Hom(A, Hom(B, C)) on a supplied list of
/// functors out of the tensor product: both functor categories are
/// materialized and the corresponding Hom-complexes compared degreewise.
pub fn currying_check(
    a: &DgCategoryTable,
    b: &DgCategoryTable,
    c: &DgCategoryTable,
    functors: Vec<(String, DgFunctorTable)>,
) -> Result<CurryingReport> {
    let t = tensor(a, b)?;
    let (lhs, _) = functor_dg_category(&t, c, functors.clone())?;

    // curried side: target category Hom(B, C) on all restrictions
    let mut restricted: Vec<(String, DgFunctorTable)> = Vec::new();
    for (name, f) in &functors {
        for x in 0..a.object_count() {
            restricted.push((format!("{name}@{x}"), restrict_tensor_functor(a, b, &t, f, x)?));
        }
    }
    let (hom_bc, nat_bases) = functor_dg_category(b, c, restricted.clone())?;

    // curried functors A -> Hom(B, C)
    let mut curried: Vec<(String, DgFunctorTable)> = Vec::new();
    let na = a.object_count();
    for (fi, (name, f)) in functors.iter().enumerate() {
        let object_map: Vec<usize> = (0..na).map(|x| fi * na + x).collect();
        let field = c.field;
        let mut maps = BTreeMap::new();
        for x in 0..na {
            for y in 0..na {
                let src = a.hom(x, y);
                let mut per_degree = BTreeMap::new();
                for p in src.support() {
                    let rows = hom_bc.hom(object_map[x], object_map[y]).dim(p);
                    let mut mat = Matrix::zero(field, rows, src.dim(p));
                    for i in 0..src.dim(p) {
                        // the transformation with components F(a ⊗ 1_u)
                        let nb = b.object_count();
                        let obj = |xa: usize, xb: usize| xa * nb + xb;
                        let fam: NatFamily = (0..nb)
                            .map(|u| {
                                let (_tc, tb) =
                                    tensor_complex(a.hom(x, y), b.hom(u, u));
                                let idb = b.identity(u);
                                let mut coords =
                                    vec![field.zero(); t.hom(obj(x, u), obj(y, u)).dim(p)];
                                for (k0, c0) in idb.coords.iter().enumerate() {
                                    if field.is_zero(c0) {
                                        continue;
                                    }
                                    let pos = tb
                                        .position(p, ((p, i), (0, k0)))
                                        .expect("tensor label");
                                    coords[pos] = c0.clone();
                                }
                                let e = t
                                    .element(obj(x, u), obj(y, u), p, coords)
                                    .expect("dims");
                                f.apply(&e)
                            })
                            .collect();
                        let coords = nat_bases[fi * na + x][fi * na + y]
                            .express(c, p, &fam)
                            .ok_or_else(|| {
                                DgError::Invalid("curried image is not natural".into())
                            })?;
                        for (r, cc) in coords.iter().enumerate() {
                            if !field.is_zero(cc) {
                                mat.set(r, i, cc.clone());
                            }
                        }
                    }
                    per_degree.insert(p, mat);
                }
                maps.insert((x, y), per_degree);
            }
        }
        curried.push((
            name.clone(),
            DgFunctorTable::new(a.clone(), hom_bc.clone(), object_map, maps)?,
        ));
    }
    let (rhs, _) = functor_dg_category(a, &hom_bc, curried)?;

    let mut dims_ok = true;
    let mut diff_ok = true;
    for i in 0..functors.len() {
        for j in 0..functors.len() {
            let hl = lhs.hom(i, j);
            let hr = rhs.hom(i, j);
            if hl.components() != hr.components() {
                dims_ok = false;
            }
            for p in hl.support() {
                // compare cohomology dimensions degreewise as a
                // basis-independent probe of the differentials
                if hl.cohomology_dim(p) != hr.cohomology_dim(p) {
                    diff_ok = false;
                }
            }
        }
    }
    Ok(CurryingReport {
        hom_dimensions_match: dims_ok,
        differentials_match: diff_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{disc, point_category};
    use crate::field::FieldSpec;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn center_of_point_category() {
        let a = point_category(q(), "*");
        let f = DgFunctorTable::identity(&a);
        let (c, _) = nat_trans_complex(&f, &f).unwrap();
        // the center of k is k itself in degree 0
        assert_eq!(c.dim(0), 1);
        assert_eq!(c.total_dim(), 1);
    }

    #[test]
    fn identity_functor_category_is_one_object_table() {
        let a = disc(q(), 1);
        let f = DgFunctorTable::identity(&a);
        let (cat, _) = functor_dg_category(&a, &a, vec![("id".into(), f)]).unwrap();
        assert_eq!(cat.object_count(), 1);
        cat.validate().unwrap();
    }

    #[test]
    fn nat_trans_into_disc_endpoints() {
        // functors from the point into disc(1) picking x and y; the
        // transformations between them recover Hom(x, y)
        let p = point_category(q(), "*");
        let d = disc(q(), 1);
        let pick = |obj: usize| {
            let maps = BTreeMap::from([(
                (0usize, 0usize),
                BTreeMap::from([(0, Matrix::identity(q(), 1))]),
            )]);
            DgFunctorTable::new(p.clone(), d.clone(), vec![obj], maps).unwrap()
        };
        let fx = pick(0);
        let fy = pick(1);
        let (c, _) = nat_trans_complex(&fx, &fy).unwrap();
        assert_eq!(c.components(), d.hom(0, 1).components());
        let (cat, _) = functor_dg_category(
            &p,
            &d,
            vec![("x".into(), fx), ("y".into(), fy)],
        )
        .unwrap();
        cat.validate().unwrap();
    }

    #[test]
    fn currying_on_points_into_disc() {
        let a = point_category(q(), "*");
        let b = point_category(q(), "#");
        let c = disc(q(), 1);
        let t = tensor(&a, &b).unwrap();
        // functors t -> c: pick an object of c
        let pick = |obj: usize| {
            let maps = BTreeMap::from([(
                (0usize, 0usize),
                BTreeMap::from([(0, Matrix::identity(q(), 1))]),
            )]);
            DgFunctorTable::new(t.clone(), c.clone(), vec![obj], maps).unwrap()
        };
        let rep = currying_check(
            &a,
            &b,
            &c,
            vec![("x".into(), pick(0)), ("y".into(), pick(1))],
        )
        .unwrap();
        assert!(rep.passed());
    }
}
