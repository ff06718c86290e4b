//! Pretriangulated-hull instances as tabular dg categories: a finite set of
//! twisted objects with the twisted Hom-complexes, suspension and cone
//! witnesses at table level, exactness certification over a supplied witness
//! closure, and the cone dg functor out of the morphism category.

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::category::{DgCategoryTable, HomElement};
use crate::error::{DgError, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::kernel_basis;
use crate::mor_cat::MorModel;
use crate::twisted::{
    cone_twisted, find_table_suspension_witness, suspend_twisted, twisted_hom, twisted_identity, ConeAxiomReport, TwistedHom, TwistedHomBasis, TwistedObject,
};

/// The twisted objects behind a hull table, with the chosen Hom bases.
#[derive(Debug, Clone)]
pub struct HullModel {
    pub base: DgCategoryTable,
    pub objects: Vec<TwistedObject>,
    pub bases: BTreeMap<(usize, usize), TwistedHomBasis>,
}

impl HullModel {
    pub fn find_object(&self, t: &TwistedObject) -> Option<usize> {
        self.objects.iter().position(|o| o.same_shape(t))
    }

    pub fn to_element(&self, src: usize, tgt: usize, f: &TwistedHom) -> HomElement {
        let coords = self.bases[&(src, tgt)].vectorize(&self.base, f);
        HomElement {
            source: src,
            target: tgt,
            degree: f.degree,
            coords,
        }
    }

    pub fn to_matrix(&self, e: &HomElement) -> TwistedHom {
        self.bases[&(e.source, e.target)].recover(&self.base, e.degree, &e.coords)
    }
}

/// Builds the tabular dg category on a finite list of Maurer-Cartan-valid
/// twisted objects. Contains the base along single-entry zero-shift objects
/// whenever those are listed.
pub fn hull_category(
    base: &DgCategoryTable,
    objects: Vec<TwistedObject>,
) -> Result<(DgCategoryTable, HullModel)> {
    let field = base.field;
    let n = objects.len();
    {
        let mut labels: Vec<&str> = objects.iter().map(|o| o.label.as_str()).collect();
        labels.sort_unstable();
        labels.dedup();
        if labels.len() != n {
            return Err(DgError::Invalid("duplicate twisted object labels".into()));
        }
    }
    let mut homs = BTreeMap::new();
    let mut bases = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let (h, b) = twisted_hom(base, &objects[i], &objects[j])?;
            homs.insert((i, j), h);
            bases.insert((i, j), b);
        }
    }
    let model = HullModel {
        base: base.clone(),
        objects,
        bases,
    };
    let mut ids = BTreeMap::new();
    for i in 0..n {
        let idm = twisted_identity(base, &model.objects[i]);
        ids.insert(i, model.to_element(i, i, &idm).coords);
    }
    let labels: Vec<String> = model.objects.iter().map(|o| o.label.clone()).collect();
    let model_ref = &model;
    let table = DgCategoryTable::from_parts(
        field,
        labels,
        homs,
        ids,
        |i, j, l, (q_, jj), (p_, ii), out_dim| {
            let f = model_ref.bases[&(i, j)].recover(
                base,
                p_,
                &unit(field, model_ref.bases[&(i, j)].dim(p_), ii),
            );
            let g = model_ref.bases[&(j, l)].recover(
                base,
                q_,
                &unit(field, model_ref.bases[&(j, l)].dim(q_), jj),
            );
            let comp = crate::twisted::twisted_compose(
                base,
                (
                    &model_ref.objects[i],
                    &model_ref.objects[j],
                    &model_ref.objects[l],
                ),
                &g,
                &f,
            )
            .expect("validated twisted objects");
            let out = model_ref.bases[&(i, l)].vectorize(base, &comp);
            debug_assert_eq!(out.len(), out_dim);
            out
        },
    )?;
    table.validate()?;
    Ok((table, model))
}

fn unit(field: FieldSpec, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

/// A suspension witness at table level: a closed degree-one isomorphism from
/// the suspension object to the original.
#[derive(Debug, Clone)]
pub struct TableSuspensionWitness {
    pub object: usize,
    pub suspension: usize,
    /// ξ: suspension -> object, closed, degree 1
    pub xi: HomElement,
    pub xi_inv: HomElement,
}

/// A cone witness at table level.
#[derive(Debug, Clone)]
pub struct TableConeWitness {
    pub label: String,
    /// the closed degree-0 morphism being coned
    pub arrow: HomElement,
    pub cone: usize,
    pub include: HomElement,
    pub project: HomElement,
    pub retract: HomElement,
    pub section: HomElement,
    /// suspension witness for the arrow's source
    pub source_suspension: TableSuspensionWitness,
}

/// Canonical suspension witness inside a hull: present when the literally
/// shifted object is in the list.
pub fn hull_suspension_witness(
    table: &DgCategoryTable,
    model: &HullModel,
    x: usize,
) -> Result<Option<TableSuspensionWitness>> {
    let (st, w) = suspend_twisted(&model.base, &model.objects[x])?;
    let Some(sx) = model.find_object(&st) else {
        return Ok(None);
    };
    let witness = TableSuspensionWitness {
        object: x,
        suspension: sx,
        xi: model.to_element(sx, x, &w.xi),
        xi_inv: model.to_element(x, sx, &w.xi_inv),
    };
    verify_table_suspension_witness(table, &witness)?;
    Ok(Some(witness))
}

/// Canonical cone witness inside a hull: present when the literal cone
/// object (and the source suspension) are in the list.
pub fn hull_cone_witness(
    table: &DgCategoryTable,
    model: &HullModel,
    label: &str,
    f: &HomElement,
) -> Result<Option<TableConeWitness>> {
    let (src_i, tgt_i) = (f.source, f.target);
    let fm = model.to_matrix(f);
    let (cone, w) = cone_twisted(&model.base, &model.objects[src_i], &model.objects[tgt_i], &fm)?;
    let Some(cone_i) = model.find_object(&cone) else {
        return Ok(None);
    };
    let Some(sw) = hull_suspension_witness(table, model, src_i)? else {
        return Ok(None);
    };
    let sus_i = sw.suspension;
    let witness = TableConeWitness {
        label: label.to_string(),
        arrow: f.clone(),
        cone: cone_i,
        include: model.to_element(tgt_i, cone_i, &w.include),
        project: model.to_element(cone_i, sus_i, &w.project),
        retract: model.to_element(cone_i, tgt_i, &w.retract),
        section: model.to_element(sus_i, cone_i, &w.section),
        source_suspension: sw,
    };
    Ok(Some(witness))
}

pub fn verify_table_suspension_witness(
    table: &DgCategoryTable,
    w: &TableSuspensionWitness,
) -> Result<()> {
    if w.xi.degree != 1 || w.xi_inv.degree != -1 {
        return Err(DgError::InvalidWitness("suspension witness degrees".into()));
    }
    if !table.is_closed(&w.xi) {
        return Err(DgError::InvalidWitness("xi is not closed".into()));
    }
    if table.compose(&w.xi, &w.xi_inv)? != table.identity(w.object) {
        return Err(DgError::InvalidWitness("xi ∘ xi^{-1} != 1".into()));
    }
    if table.compose(&w.xi_inv, &w.xi)? != table.identity(w.suspension) {
        return Err(DgError::InvalidWitness("xi^{-1} ∘ xi != 1".into()));
    }
    Ok(())
}

/// (C1)-(C3) and the two equivalent identities, at table level.
pub fn verify_table_cone_axioms(
    table: &DgCategoryTable,
    w: &TableConeWitness,
) -> Result<ConeAxiomReport> {
    let field = table.field;
    let f = &w.arrow;
    let sw = &w.source_suspension;
    let tgt = f.target;
    let sus = sw.suspension;
    let cone = w.cone;
    let tj = table.compose(&w.retract, &w.include)?;
    let ps = table.compose(&w.project, &w.section)?;
    let jt = table.compose(&w.include, &w.retract)?;
    let sp = table.compose(&w.section, &w.project)?;
    let pj = table.compose(&w.project, &w.include)?;
    let ts = table.compose(&w.retract, &w.section)?;
    let biproduct = [
        tj == table.identity(tgt),
        ps == table.identity(sus),
        table.add(&jt, &sp)? == table.identity(cone),
        pj.is_zero(&field),
        ts.is_zero(&field),
    ];
    let closed_solid = [
        table.is_closed(&w.include),
        table.is_closed(&w.project),
    ];
    let ds = table.differential(&w.section);
    let dt = table.differential(&w.retract);
    let r1 = table.compose(&table.compose(&w.retract, &ds)?, &sw.xi_inv)?;
    let r2 = table.scale(
        &table.compose(&table.compose(&dt, &w.section)?, &sw.xi_inv)?,
        &field.from_i64(-1),
    );
    let recovers_map = [r1 == *f, r2 == *f];
    let jfxi = table.compose(&w.include, &table.compose(f, &sw.xi)?)?;
    let fxip = table.scale(
        &table.compose(f, &table.compose(&sw.xi, &w.project)?)?,
        &field.from_i64(-1),
    );
    let remark_identities = [ds == jfxi, dt == fxip];
    Ok(ConeAxiomReport {
        biproduct,
        closed_solid,
        recovers_map,
        remark_identities,
    })
}

/// Status of one required witness in an exactness report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessStatus {
    Verified,
    ProvenAbsent,
    NotSupplied,
    Failed(String),
}

/// Exactness certification over a supplied witness closure.
#[derive(Debug)]
pub struct ExactnessReport {
    /// per object: a suspension witness (the object has a suspension)
    pub suspension_status: BTreeMap<usize, WitnessStatus>,
    /// per object: a desuspension witness (the object is a suspension)
    pub desuspension_status: BTreeMap<usize, WitnessStatus>,
    /// per supplied cone witness: label and outcome
    pub cone_status: Vec<(String, WitnessStatus)>,
    pub proven_obstructions: Vec<String>,
}

impl ExactnessReport {
    /// Every supplied witness verified and no proven obstruction.
    pub fn exact_on_closure(&self) -> bool {
        self.proven_obstructions.is_empty()
            && self
                .cone_status
                .iter()
                .all(|(_, s)| *s == WitnessStatus::Verified)
            && self
                .suspension_status
                .values()
                .chain(self.desuspension_status.values())
                .all(|s| !matches!(s, WitnessStatus::Failed(_)))
    }

    /// Fully witnessed: every object has verified witnesses both ways and
    /// all supplied cones verified.
    pub fn strictly_exact(&self) -> bool {
        self.exact_on_closure()
            && self
                .suspension_status
                .values()
                .chain(self.desuspension_status.values())
                .all(|s| *s == WitnessStatus::Verified)
    }
}

/// Certifies exactness data: supplied suspension witnesses are verified; for
/// objects without one, a bounded search runs (zero candidate spaces prove
/// absence). Supplied cone witnesses are checked against all axioms.
pub fn is_exact(
    table: &DgCategoryTable,
    suspensions: &[TableSuspensionWitness],
    cones: &[TableConeWitness],
) -> Result<ExactnessReport> {
    let n = table.object_count();
    let mut suspension_status = BTreeMap::new();
    let mut desuspension_status = BTreeMap::new();
    let mut proven = Vec::new();
    for x in 0..n {
        // a suspension of x: some x' with closed degree-1 iso x' -> x
        let status = if let Some(w) = suspensions.iter().find(|w| w.object == x) {
            match verify_table_suspension_witness(table, w) {
                Ok(()) => WitnessStatus::Verified,
                Err(e) => WitnessStatus::Failed(e.to_string()),
            }
        } else if let Some((sx, xi, xi_inv)) = find_table_suspension_witness(table, x) {
            let w = TableSuspensionWitness {
                object: x,
                suspension: sx,
                xi,
                xi_inv,
            };
            match verify_table_suspension_witness(table, &w) {
                Ok(()) => WitnessStatus::Verified,
                Err(e) => WitnessStatus::Failed(e.to_string()),
            }
        } else if (0..n).all(|cand| {
            kernel_basis(&table.hom(cand, x).differential(1)).dim() == 0
        }) {
            proven.push(format!(
                "object {} has no closed degree-1 morphism into it",
                table.objects()[x]
            ));
            WitnessStatus::ProvenAbsent
        } else {
            WitnessStatus::NotSupplied
        };
        suspension_status.insert(x, status);
        // x as a suspension: some target with closed degree-1 iso x -> target
        let dstatus = if let Some(w) = suspensions.iter().find(|w| w.suspension == x) {
            match verify_table_suspension_witness(table, w) {
                Ok(()) => WitnessStatus::Verified,
                Err(e) => WitnessStatus::Failed(e.to_string()),
            }
        } else {
            let mut found = None;
            for tgt in 0..n {
                let cands = kernel_basis(&table.hom(x, tgt).differential(1));
                for v in cands.basis() {
                    let xi = HomElement {
                        source: x,
                        target: tgt,
                        degree: 1,
                        coords: v.clone(),
                    };
                    if let Some(inv) = crate::twisted::two_sided_inverse(table, &xi) {
                        found = Some((tgt, xi, inv));
                        break;
                    }
                }
                if found.is_some() {
                    break;
                }
            }
            match found {
                Some(_) => WitnessStatus::Verified,
                None => {
                    if (0..n).all(|tgt| {
                        kernel_basis(&table.hom(x, tgt).differential(1)).dim() == 0
                    }) {
                        proven.push(format!(
                            "object {} admits no closed degree-1 morphism out of it",
                            table.objects()[x]
                        ));
                        WitnessStatus::ProvenAbsent
                    } else {
                        WitnessStatus::NotSupplied
                    }
                }
            }
        };
        desuspension_status.insert(x, dstatus);
    }
    let mut cone_status = Vec::new();
    for w in cones {
        let status = match verify_table_cone_axioms(table, w) {
            Ok(rep) if rep.all_pass() => WitnessStatus::Verified,
            Ok(rep) => WitnessStatus::Failed(format!("cone axioms fail: {rep:?}")),
            Err(e) => WitnessStatus::Failed(e.to_string()),
        };
        cone_status.push((w.label.clone(), status));
    }
    Ok(ExactnessReport {
        suspension_status,
        desuspension_status,
        cone_status,
        proven_obstructions: proven,
    })
}

/// Witness data for the cone functor on a morphism category over `table`:
/// one cone witness per morphism object (the arrow must match).
#[derive(Debug, Clone)]
pub struct ConeFunctorData {
    pub cones: Vec<TableConeWitness>,
}

/// The image of a morphism-category element under the cone functor:
/// (α, β, h) maps to j'∘β∘t + j'∘h∘ξ_x∘p + s'∘ξ_{x'}^{-1}∘α∘ξ_x∘p.
pub fn cone_functor_image(
    table: &DgCategoryTable,
    model: &MorModel,
    data: &ConeFunctorData,
    m: &HomElement,
) -> Result<HomElement> {
    let (i, j) = (m.source, m.target);
    let (alpha, beta, h) = model.split(m);
    let wi = &data.cones[i];
    let wj = &data.cones[j];
    let xi_x = &wi.source_suspension.xi;
    let xi_xp_inv = &wj.source_suspension.xi_inv;
    let term1 = table.compose(&wj.include, &table.compose(&beta, &wi.retract)?)?;
    let term2 = table.compose(
        &wj.include,
        &table.compose(&h, &table.compose(xi_x, &wi.project)?)?,
    )?;
    let term3 = table.compose(
        &wj.section,
        &table.compose(
            xi_xp_inv,
            &table.compose(&alpha, &table.compose(xi_x, &wi.project)?)?,
        )?,
    )?;
    table.add(&table.add(&term1, &term2)?, &term3)
}

/// Outcome of the cone functor verification.
#[derive(Debug)]
pub struct ConeFunctorReport {
    pub preserves_identities: bool,
    pub preserves_composition: bool,
    pub preserves_differential: bool,
    pub commutative_squares: bool,
    pub samples: usize,
}

impl ConeFunctorReport {
    pub fn passed(&self) -> bool {
        self.preserves_identities
            && self.preserves_composition
            && self.preserves_differential
            && self.commutative_squares
    }
}

fn random_mor_element(
    rng: &mut StdRng,
    mor: &DgCategoryTable,
    i: usize,
    j: usize,
) -> Option<HomElement> {
    let degrees: Vec<i32> = mor.hom(i, j).support().collect();
    if degrees.is_empty() {
        return None;
    }
    let p = degrees[rng.gen_range(0..degrees.len())];
    let dim = mor.hom(i, j).dim(p);
    let field = mor.field;
    let coords = (0..dim)
        .map(|_| field.from_i64(rng.gen_range(-2i64..=2)))
        .collect();
    Some(HomElement {
        source: i,
        target: j,
        degree: p,
        coords,
    })
}

/// Verifies that the cone assignment is a dg functor on the given morphism
/// category: identities, composition on random pairs, differentials, and
/// the commutative diagram for random closed degree-0 morphisms.
pub fn cone_functor_check(
    table: &DgCategoryTable,
    mor: &DgCategoryTable,
    model: &MorModel,
    data: &ConeFunctorData,
    trials: usize,
    seed: u64,
) -> Result<ConeFunctorReport> {
    let n = model.objects.len();
    if data.cones.len() != n {
        return Err(DgError::Invalid(
            "need one cone witness per morphism object".into(),
        ));
    }
    for (k, o) in model.objects.iter().enumerate() {
        if data.cones[k].arrow != o.arrow {
            return Err(DgError::Invalid(format!(
                "cone witness {k} does not match the morphism object arrow"
            )));
        }
        let rep = verify_table_cone_axioms(table, &data.cones[k])?;
        if !rep.all_pass() {
            return Err(DgError::InvalidWitness(format!(
                "cone witness {k} fails the axioms: {rep:?}"
            )));
        }
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let field = table.field;
    let mut identities = true;
    for k in 0..n {
        let img = cone_functor_image(table, model, data, &mor.identity(k))?;
        if img != table.identity(data.cones[k].cone) {
            identities = false;
        }
    }
    let mut composition = true;
    let mut differential = true;
    let mut squares = true;
    let mut samples = 0usize;
    for _ in 0..trials {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        let l = rng.gen_range(0..n);
        let (Some(m1), Some(m2)) = (
            random_mor_element(&mut rng, mor, i, j),
            random_mor_element(&mut rng, mor, j, l),
        ) else {
            continue;
        };
        samples += 1;
        let lhs = cone_functor_image(table, model, data, &mor.compose(&m2, &m1)?)?;
        let rhs = table.compose(
            &cone_functor_image(table, model, data, &m2)?,
            &cone_functor_image(table, model, data, &m1)?,
        )?;
        if lhs != rhs {
            composition = false;
        }
        let dl = cone_functor_image(table, model, data, &mor.differential(&m1))?;
        let dr = table.differential(&cone_functor_image(table, model, data, &m1)?);
        if dl != dr {
            differential = false;
        }
        // a random closed degree-0 morphism i -> j and its squares
        let z = kernel_basis(&mor.hom(i, j).differential(0));
        if z.dim() > 0 {
            let mut coords = vec![field.zero(); mor.hom(i, j).dim(0)];
            for v in z.basis() {
                let c = field.from_i64(rng.gen_range(-2i64..=2));
                for (t, b) in coords.iter_mut().zip(v) {
                    *t = field.add(t, &field.mul(&c, b));
                }
            }
            let m = HomElement {
                source: i,
                target: j,
                degree: 0,
                coords,
            };
            let (alpha, beta, _h) = model.split(&m);
            let fm = cone_functor_image(table, model, data, &m)?;
            let (wi, wj) = (&data.cones[i], &data.cones[j]);
            // F(m) ∘ j_i = j_j ∘ β
            let lhs1 = table.compose(&fm, &wi.include)?;
            let rhs1 = table.compose(&wj.include, &beta)?;
            // p_j ∘ F(m) = Σ(α) ∘ p_i with Σ(α) = ξ_{x'}^{-1} ∘ α ∘ ξ_x
            let sigma_alpha = table.compose(
                &wj.source_suspension.xi_inv,
                &table.compose(&alpha, &wi.source_suspension.xi)?,
            )?;
            let lhs2 = table.compose(&wj.project, &fm)?;
            let rhs2 = table.compose(&sigma_alpha, &wi.project)?;
            if lhs1 != rhs1 || lhs2 != rhs2 {
                squares = false;
            }
        }
    }
    Ok(ConeFunctorReport {
        preserves_identities: identities,
        preserves_composition: composition,
        preserves_differential: differential,
        commutative_squares: squares,
        samples,
    })
}

/// Convenience: the hull of the one-object ground-field category on shifted
/// copies of the generator plus the cone of the identity.
pub fn standard_k_hull(
    field: FieldSpec,
    shifts: std::ops::RangeInclusive<i32>,
) -> Result<(DgCategoryTable, HullModel)> {
    let base = crate::category::point_category(field, "k");
    let mut objects = Vec::new();
    for s in shifts {
        let mut t = TwistedObject::plain(&base, &format!("k[{s}]"), 0);
        t.entries[0].1 = s;
        objects.push(t);
    }
    let k0 = TwistedObject::plain(&base, "k0-tmp", 0);
    let f = twisted_identity(&base, &k0);
    let (cone, _) = cone_twisted(&base, &k0, &k0, &f)?;
    let mut cone = cone;
    cone.label = "C".into();
    objects.push(cone);
    hull_category(&base, objects)
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
    fn hull_on_plain_objects_copies_the_base() {
        let d = disc(q(), 1);
        let objects = vec![
            TwistedObject::plain(&d, "x", 0),
            TwistedObject::plain(&d, "y", 1),
        ];
        let (table, _) = hull_category(&d, objects).unwrap();
        table.validate().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(table.hom(i, j).components(), d.hom(i, j).components());
            }
        }
    }

    #[test]
    fn standard_hull_validates_and_has_witnesses() {
        let (table, model) = standard_k_hull(q(), -1..=1).unwrap();
        table.validate().unwrap();
        // k[-1] and k[0] have literal suspensions in the list
        for label in ["k[-1]", "k[0]"] {
            let x = table.object_index(label).unwrap();
            let w = hull_suspension_witness(&table, &model, x).unwrap();
            assert!(w.is_some(), "no suspension witness for {label}");
        }
        // k[1] has no suspension in the window
        let k1 = table.object_index("k[1]").unwrap();
        assert!(hull_suspension_witness(&table, &model, k1)
            .unwrap()
            .is_none());
    }

    #[test]
    fn hull_cone_witness_passes_axioms() {
        // hull on {k[0], k[1], Cone(id)}: the identity of k[0] has its cone
        // and suspension in the list
        let (table, model) = standard_k_hull(q(), 0..=1).unwrap();
        let k0 = table.object_index("k[0]").unwrap();
        let id = table.identity(k0);
        let w = hull_cone_witness(&table, &model, "cone(id)", &id)
            .unwrap()
            .expect("cone of the identity is listed");
        let rep = verify_table_cone_axioms(&table, &w).unwrap();
        assert!(rep.all_pass(), "{rep:?}");
        // the cone's End complex is contractible
        let c = w.cone;
        assert!(crate::complex::is_contractible(table.hom(c, c)));
    }

    #[test]
    fn triangle_composites_vanish_in_h0() {
        // x -> y -> Cone -> Σx with zero composites in H^0
        let (table, model) = standard_k_hull(q(), 0..=1).unwrap();
        let k0 = table.object_index("k[0]").unwrap();
        let id = table.identity(k0);
        let w = hull_cone_witness(&table, &model, "cone(id)", &id)
            .unwrap()
            .unwrap();
        // j ∘ f and p ∘ j are coboundaries (here even zero on the nose for pj)
        let jf = table.compose(&w.include, &id).unwrap();
        assert!(table.coboundary_primitive(&jf).is_some());
        let pj = table.compose(&w.project, &w.include).unwrap();
        assert!(pj.is_zero(&q()));
    }

    #[test]
    fn exactness_reports() {
        // one-object k: proven not exact
        let p = point_category(q(), "k");
        let rep = is_exact(&p, &[], &[]).unwrap();
        assert!(!rep.proven_obstructions.is_empty());
        assert!(!rep.strictly_exact());
        // disc(1): proven not exact through the missing suspension of x
        let d = disc(q(), 1);
        let rep = is_exact(&d, &[], &[]).unwrap();
        assert!(rep
            .suspension_status
            .values()
            .any(|s| *s == WitnessStatus::ProvenAbsent));
        // a shift window: canonical witnesses verify on the interior, and the
        // top shift is honestly reported as provably missing its suspension
        let (table, model) = standard_k_hull(q(), -1..=1).unwrap();
        let mut sws = Vec::new();
        for x in 0..table.object_count() {
            if let Some(w) = hull_suspension_witness(&table, &model, x).unwrap() {
                sws.push(w);
            }
        }
        let rep = is_exact(&table, &sws, &[]).unwrap();
        for label in ["k[-1]", "k[0]"] {
            let x = table.object_index(label).unwrap();
            assert_eq!(rep.suspension_status[&x], WitnessStatus::Verified);
        }
        let k1 = table.object_index("k[1]").unwrap();
        assert_eq!(rep.suspension_status[&k1], WitnessStatus::ProvenAbsent);
        assert!(!rep.exact_on_closure());
        assert!(rep
            .suspension_status
            .values()
            .all(|s| !matches!(s, WitnessStatus::Failed(_))));
    }

    #[test]
    fn cone_functor_on_k_hull() {
        use crate::mor_cat::{mor_category, MorObject};
        let (table, model) = standard_k_hull(q(), -1..=2).unwrap();
        let k0 = table.object_index("k[0]").unwrap();
        let k1 = table.object_index("k[1]").unwrap();
        let id0 = table.identity(k0);
        let zero01 = table.zero_element(k0, k1, 0);
        let mor_objects = vec![
            MorObject {
                label: "(id k0)".into(),
                source: k0,
                target: k0,
                arrow: id0.clone(),
            },
            MorObject {
                label: "(0: k0 -> k1)".into(),
                source: k0,
                target: k1,
                arrow: zero01.clone(),
            },
        ];
        let (mor, mor_model) = mor_category(&table, mor_objects).unwrap();
        // witnesses: cone(id) is C; cone(0: k0 -> k1) = k1 ⊕ k[1] is not in
        // the window, so extend the hull instead of shrinking the test:
        // build the cone object and a bigger hull containing it
        let fm0 = model.to_matrix(&id0);
        let (c_id, _) = cone_twisted(&model.base, &model.objects[k0], &model.objects[k0], &fm0)
            .unwrap();
        let fm1 = model.to_matrix(&zero01);
        let (c_zero, _) =
            cone_twisted(&model.base, &model.objects[k0], &model.objects[k1], &fm1).unwrap();
        let mut objects = model.objects.clone();
        let mut c_id = c_id;
        c_id.label = "C(id)".into();
        let mut c_zero = c_zero;
        c_zero.label = "C(0)".into();
        // C(id) may coincide in shape with the listed C; reuse when so
        if model.find_object(&c_id).is_none() {
            objects.push(c_id);
        }
        objects.push(c_zero);
        let (table2, model2) = hull_category(&model.base, objects).unwrap();
        let k0 = table2.object_index("k[0]").unwrap();
        let k1 = table2.object_index("k[1]").unwrap();
        let id0 = table2.identity(k0);
        let zero01 = table2.zero_element(k0, k1, 0);
        let mor_objects = vec![
            MorObject {
                label: "(id k0)".into(),
                source: k0,
                target: k0,
                arrow: id0.clone(),
            },
            MorObject {
                label: "(0: k0 -> k1)".into(),
                source: k0,
                target: k1,
                arrow: zero01.clone(),
            },
        ];
        let (mor2, mor_model2) = mor_category(&table2, mor_objects).unwrap();
        let w0 = hull_cone_witness(&table2, &model2, "cone(id)", &id0)
            .unwrap()
            .expect("cone of id listed");
        let w1 = hull_cone_witness(&table2, &model2, "cone(0)", &zero01)
            .unwrap()
            .expect("cone of zero listed");
        let data = ConeFunctorData {
            cones: vec![w0, w1],
        };
        let rep = cone_functor_check(&table2, &mor2, &mor_model2, &data, 40, 17).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.samples > 0);
        let _ = (mor, mor_model);
    }
}
