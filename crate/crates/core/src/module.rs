//! Left and right dg modules over a tabular dg category: free modules,
//! module Hom-complexes, the Yoneda comparison, suspension, and cones with
//! their biproduct diagram.
//!
//! A left action satisfies d(a.m) = d(a).m + (-1)^{|a|} a.d(m); a right
//! action satisfies d(n.a) = d(n).a + (-1)^{|n|} n.d(a). Both are validated
//! exactly on basis elements.

use std::collections::BTreeMap;

use crate::algebra::Side;
use crate::category::{DgCategoryTable, HomElement};
use crate::complex::Complex;
use crate::error::{DgError, Result};
#[cfg(test)]
use crate::field::FieldSpec;
use crate::field::Scalar;
use crate::linalg::{coordinates_in, kernel_basis, Matrix};

/// A homogeneous element of one value complex of a module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleElement {
    pub object: usize,
    pub degree: i32,
    pub coords: Vec<Scalar>,
}

type ActKey = ((i32, usize), (i32, usize));
type SparseVec = Vec<(usize, Scalar)>;

/// A dg module over a tabular dg category, with finite support realized as an
/// object-indexed family of complexes.
#[derive(Debug, Clone, PartialEq)]
pub struct DgModuleTable {
    pub base: DgCategoryTable,
    pub side: Side,
    values: Vec<Complex>,
    /// For a left module, action[(x,y)] sends Hom(x,y) ⊗ M(x) to M(y);
    /// for a right module it sends Hom(x,y) ⊗ M(y) to M(x).
    action: BTreeMap<(usize, usize), BTreeMap<ActKey, SparseVec>>,
}

impl DgModuleTable {
    /// Assembles and validates a module from its value complexes and an
    /// action rule on basis pairs. The rule receives (x, y, hom label,
    /// module label, output dimension) with the module label living in M(x)
    /// for a left module and M(y) for a right one.
    pub fn from_parts<F>(
        base: &DgCategoryTable,
        side: Side,
        values: Vec<Complex>,
        act_basis: F,
    ) -> Result<Self>
    where
        F: Fn(usize, usize, (i32, usize), (i32, usize), usize) -> Vec<Scalar>,
    {
        let field = base.field;
        let n = base.object_count();
        if values.len() != n {
            return Err(DgError::ShapeMismatch(
                "need one value complex per object".into(),
            ));
        }
        let mut action = BTreeMap::new();
        for x in 0..n {
            for y in 0..n {
                let hom = base.hom(x, y);
                let m_obj = match side {
                    Side::Left => x,
                    Side::Right => y,
                };
                let out_obj = match side {
                    Side::Left => y,
                    Side::Right => x,
                };
                let mut table: BTreeMap<ActKey, SparseVec> = BTreeMap::new();
                for p in hom.support() {
                    for q in values[m_obj].support() {
                        let out_dim = values[out_obj].dim(p + q);
                        for j in 0..hom.dim(p) {
                            for i in 0..values[m_obj].dim(q) {
                                let coords = act_basis(x, y, (p, j), (q, i), out_dim);
                                if coords.len() != out_dim {
                                    return Err(DgError::ShapeMismatch(format!(
                                        "action ({x},{y}) at degrees ({p},{q}) returned {} coords, expected {out_dim}",
                                        coords.len()
                                    )));
                                }
                                let sparse: SparseVec = coords
                                    .into_iter()
                                    .enumerate()
                                    .filter(|(_, c)| !field.is_zero(c))
                                    .collect();
                                if !sparse.is_empty() {
                                    table.insert(((p, j), (q, i)), sparse);
                                }
                            }
                        }
                    }
                }
                if !table.is_empty() {
                    action.insert((x, y), table);
                }
            }
        }
        let m = DgModuleTable {
            base: base.clone(),
            side,
            values,
            action,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn value(&self, x: usize) -> &Complex {
        &self.values[x]
    }

    pub fn zero_element(&self, object: usize, degree: i32) -> ModuleElement {
        ModuleElement {
            object,
            degree,
            coords: vec![self.base.field.zero(); self.values[object].dim(degree)],
        }
    }

    pub fn basis_element(&self, object: usize, degree: i32, idx: usize) -> ModuleElement {
        let mut e = self.zero_element(object, degree);
        e.coords[idx] = self.base.field.one();
        e
    }

    pub fn basis_labels(&self, object: usize) -> Vec<(i32, usize)> {
        let v = &self.values[object];
        v.support()
            .flat_map(|p| (0..v.dim(p)).map(move |i| (p, i)))
            .collect()
    }

    pub fn differential(&self, m: &ModuleElement) -> ModuleElement {
        ModuleElement {
            object: m.object,
            degree: m.degree + 1,
            coords: self.values[m.object].apply_d(m.degree, &m.coords),
        }
    }

    pub fn add(&self, a: &ModuleElement, b: &ModuleElement) -> Result<ModuleElement> {
        if a.object != b.object || a.degree != b.degree {
            return Err(DgError::ShapeMismatch("module element addition".into()));
        }
        let field = self.base.field;
        Ok(ModuleElement {
            object: a.object,
            degree: a.degree,
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| field.add(x, y))
                .collect(),
        })
    }

    pub fn scale(&self, a: &ModuleElement, s: &Scalar) -> ModuleElement {
        let field = self.base.field;
        ModuleElement {
            object: a.object,
            degree: a.degree,
            coords: a.coords.iter().map(|x| field.mul(x, s)).collect(),
        }
    }

    /// a.m for a left module, m.a for a right one.
    pub fn act(&self, a: &HomElement, m: &ModuleElement) -> Result<ModuleElement> {
        let field = self.base.field;
        let expected = match self.side {
            Side::Left => a.source,
            Side::Right => a.target,
        };
        if m.object != expected {
            return Err(DgError::EndpointMismatch(
                "module action object mismatch".into(),
            ));
        }
        let out_obj = match self.side {
            Side::Left => a.target,
            Side::Right => a.source,
        };
        let mut out = self.zero_element(out_obj, a.degree + m.degree);
        let Some(table) = self.action.get(&(a.source, a.target)) else {
            return Ok(out);
        };
        for (j, ac) in a.coords.iter().enumerate() {
            if field.is_zero(ac) {
                continue;
            }
            for (i, mc) in m.coords.iter().enumerate() {
                if field.is_zero(mc) {
                    continue;
                }
                if let Some(sparse) = table.get(&((a.degree, j), (m.degree, i))) {
                    let s = field.mul(ac, mc);
                    for (k, c) in sparse {
                        out.coords[*k] = field.add(&out.coords[*k], &field.mul(c, &s));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Unit action, action associativity, and the Leibniz rule on all basis
    /// combinations.
    pub fn validate(&self) -> Result<()> {
        let field = self.base.field;
        let n = self.base.object_count();
        for v in &self.values {
            v.validate()?;
        }
        for x in 0..n {
            let one = self.base.identity(x);
            for (q, i) in self.basis_labels(x) {
                let m = self.basis_element(x, q, i);
                if self.act(&one, &m)? != m {
                    return Err(DgError::AxiomViolation {
                        axiom: "module unit".into(),
                        witness: format!("object {}, basis ({q},{i})", self.base.objects()[x]),
                    });
                }
            }
        }
        // associativity and Leibniz
        for x in 0..n {
            for y in 0..n {
                for (r, j) in self.base.basis_labels(x, y) {
                    let a = self.base.basis_element(x, y, r, j);
                    let da = self.base.differential(&a);
                    let sign_a = field.from_i64(if r.rem_euclid(2) == 0 { 1 } else { -1 });
                    let m_obj = match self.side {
                        Side::Left => x,
                        Side::Right => y,
                    };
                    for (q, i) in self.basis_labels(m_obj) {
                        let m = self.basis_element(m_obj, q, i);
                        let am = self.act(&a, &m)?;
                        let lhs = self.differential(&am);
                        let rhs = match self.side {
                            Side::Left => self.add(
                                &self.act(&da, &m)?,
                                &self.scale(&self.act(&a, &self.differential(&m))?, &sign_a),
                            )?,
                            Side::Right => {
                                let sign_m =
                                    field.from_i64(if q.rem_euclid(2) == 0 { 1 } else { -1 });
                                self.add(
                                    &self.act(&a, &self.differential(&m))?,
                                    &self.scale(&self.act(&da, &m)?, &sign_m),
                                )?
                            }
                        };
                        if lhs != rhs {
                            return Err(DgError::AxiomViolation {
                                axiom: "module Leibniz rule".into(),
                                witness: format!(
                                    "a = ({r},{j}) in Hom({},{}), m = ({q},{i})",
                                    self.base.objects()[x],
                                    self.base.objects()[y]
                                ),
                            });
                        }
                    }
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for (r2, j2) in self.base.basis_labels(y, z) {
                        let a = self.base.basis_element(y, z, r2, j2);
                        for (r1, j1) in self.base.basis_labels(x, y) {
                            let b = self.base.basis_element(x, y, r1, j1);
                            let ab = self.base.compose(&a, &b)?;
                            let m_obj = match self.side {
                                Side::Left => x,
                                Side::Right => z,
                            };
                            for (q, i) in self.basis_labels(m_obj) {
                                let m = self.basis_element(m_obj, q, i);
                                let (lhs, rhs) = match self.side {
                                    Side::Left => {
                                        (self.act(&ab, &m)?, self.act(&a, &self.act(&b, &m)?)?)
                                    }
                                    Side::Right => {
                                        (self.act(&ab, &m)?, self.act(&b, &self.act(&a, &m)?)?)
                                    }
                                };
                                if lhs != rhs {
                                    return Err(DgError::AxiomViolation {
                                        axiom: "module action associativity".into(),
                                        witness: format!(
                                            "a = ({r2},{j2}), b = ({r1},{j1}), m = ({q},{i}) over ({},{},{})",
                                            self.base.objects()[x],
                                            self.base.objects()[y],
                                            self.base.objects()[z]
                                        ),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The free left module Hom(y, -): value at x is Hom(y, x), the action is
/// composition.
pub fn free_module(base: &DgCategoryTable, y: usize) -> Result<DgModuleTable> {
    let values = (0..base.object_count())
        .map(|x| base.hom(y, x).clone())
        .collect();
    DgModuleTable::from_parts(base, Side::Left, values, |x, t, (p, j), (q, i), out_dim| {
        // a in Hom(x, t), m in Hom(y, x): a ∘ m in Hom(y, t)
        let a = base.basis_element(x, t, p, j);
        let m = base.basis_element(y, x, q, i);
        let out = base.compose(&a, &m).expect("endpoints");
        debug_assert_eq!(out.coords.len(), out_dim);
        out.coords
    })
}

/// The free right module Hom(-, y): value at x is Hom(x, y), the action is
/// precomposition.
pub fn free_right_module(base: &DgCategoryTable, y: usize) -> Result<DgModuleTable> {
    let values = (0..base.object_count())
        .map(|x| base.hom(x, y).clone())
        .collect();
    DgModuleTable::from_parts(base, Side::Right, values, |x, t, (p, j), (q, i), out_dim| {
        // a in Hom(x, t), n in Hom(t, y): n ∘ a in Hom(x, y)
        let a = base.basis_element(x, t, p, j);
        let nn = base.basis_element(t, y, q, i);
        let out = base.compose(&nn, &a).expect("endpoints");
        debug_assert_eq!(out.coords.len(), out_dim);
        out.coords
    })
}

/// The zero module.
pub fn zero_module(base: &DgCategoryTable, side: Side) -> DgModuleTable {
    let values = (0..base.object_count())
        .map(|_| Complex::zero(base.field))
        .collect();
    DgModuleTable::from_parts(base, side, values, |_, _, _, _, _| Vec::new())
        .expect("zero module is trivially valid")
}

/// A homogeneous family of graded maps M(x) -> N(x), not necessarily closed.
#[derive(Debug, Clone, PartialEq)]
pub struct DgModuleMap {
    pub degree: i32,
    /// components[(x, n)]: M(x)^n -> N(x)^{n + degree}
    pub components: BTreeMap<(usize, i32), Matrix>,
}

impl DgModuleMap {
    pub fn component(
        &self,
        m: &DgModuleTable,
        n: &DgModuleTable,
        x: usize,
        deg: i32,
    ) -> Matrix {
        match self.components.get(&(x, deg)) {
            Some(mat) => mat.clone(),
            None => Matrix::zero(
                m.base.field,
                n.value(x).dim(deg + self.degree),
                m.value(x).dim(deg),
            ),
        }
    }

    pub fn identity(m: &DgModuleTable) -> Self {
        let mut components = BTreeMap::new();
        for x in 0..m.base.object_count() {
            for d in m.value(x).support() {
                components.insert((x, d), Matrix::identity(m.base.field, m.value(x).dim(d)));
            }
        }
        DgModuleMap {
            degree: 0,
            components,
        }
    }

    pub fn zero(degree: i32) -> Self {
        DgModuleMap {
            degree,
            components: BTreeMap::new(),
        }
    }

    pub fn apply(&self, m: &DgModuleTable, n: &DgModuleTable, e: &ModuleElement) -> ModuleElement {
        let mat = self.component(m, n, e.object, e.degree);
        ModuleElement {
            object: e.object,
            degree: e.degree + self.degree,
            coords: mat.apply(&e.coords).expect("component shape"),
        }
    }

    /// (df)_x = d_N ∘ f_x - (-1)^{|f|} f_x ∘ d_M.
    pub fn differential(&self, m: &DgModuleTable, n: &DgModuleTable) -> DgModuleMap {
        let field = m.base.field;
        let sign = field.from_i64(if self.degree.rem_euclid(2) == 0 { -1 } else { 1 });
        let mut components = BTreeMap::new();
        for x in 0..m.base.object_count() {
            for deg in m.value(x).support() {
                let a = n
                    .value(x)
                    .differential(deg + self.degree)
                    .mul(&self.component(m, n, x, deg))
                    .expect("shapes");
                let b = self
                    .component(m, n, x, deg + 1)
                    .mul(&m.value(x).differential(deg))
                    .expect("shapes");
                let out = a.add(&b.scale(&sign)).expect("same shape");
                if out.rows() > 0 && out.cols() > 0 && !out.is_zero() {
                    components.insert((x, deg), out);
                }
            }
        }
        DgModuleMap {
            degree: self.degree + 1,
            components,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(Matrix::is_zero)
    }

    pub fn add(&self, other: &DgModuleMap) -> Result<DgModuleMap> {
        if self.degree != other.degree {
            return Err(DgError::ShapeMismatch("module map addition".into()));
        }
        let mut components = self.components.clone();
        for (k, v) in &other.components {
            match components.get_mut(k) {
                Some(e) => *e = e.add(v)?,
                None => {
                    components.insert(*k, v.clone());
                }
            }
        }
        Ok(DgModuleMap {
            degree: self.degree,
            components,
        })
    }

    pub fn scale(&self, s: &Scalar) -> DgModuleMap {
        DgModuleMap {
            degree: self.degree,
            components: self
                .components
                .iter()
                .map(|(&k, m)| (k, m.scale(s)))
                .collect(),
        }
    }

    pub fn compose(
        &self,
        inner: &DgModuleMap,
        m: &DgModuleTable,
        mid: &DgModuleTable,
        n: &DgModuleTable,
    ) -> DgModuleMap {
        let mut components = BTreeMap::new();
        for x in 0..m.base.object_count() {
            for deg in m.value(x).support() {
                let out = self
                    .component(mid, n, x, deg + inner.degree)
                    .mul(&inner.component(m, mid, x, deg))
                    .expect("shapes");
                if out.rows() > 0 && out.cols() > 0 && !out.is_zero() {
                    components.insert((x, deg), out);
                }
            }
        }
        DgModuleMap {
            degree: self.degree + inner.degree,
            components,
        }
    }

    /// Graded naturality: f(a.m) = (-1)^{|f||a|} a.f(m) for left modules,
    /// f(n.a) = f(n).a for right ones, on all basis pairs.
    pub fn is_module_map(&self, m: &DgModuleTable, n: &DgModuleTable) -> Result<bool> {
        let field = m.base.field;
        let objs = m.base.object_count();
        for x in 0..objs {
            for y in 0..objs {
                for (r, j) in m.base.basis_labels(x, y) {
                    let a = m.base.basis_element(x, y, r, j);
                    let m_obj = match m.side {
                        Side::Left => x,
                        Side::Right => y,
                    };
                    for (q, i) in m.basis_labels(m_obj) {
                        let elt = m.basis_element(m_obj, q, i);
                        let lhs = self.apply(m, n, &m.act(&a, &elt)?);
                        let rhs = match m.side {
                            Side::Left => {
                                let sign = field.from_i64(
                                    if (self.degree * r).rem_euclid(2) == 0 { 1 } else { -1 },
                                );
                                n.scale(&n.act(&a, &self.apply(m, n, &elt))?, &sign)
                            }
                            Side::Right => n.act(&a, &self.apply(m, n, &elt))?,
                        };
                        if lhs != rhs {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Flat bookkeeping for the Hom-complex of two parallel dg modules: the
/// degree-p families are cut out of the product of componentwise Hom spaces
/// by graded naturality. Carries enough data to express any family in the
/// chosen kernel basis.
#[derive(Debug, Clone)]
pub struct ModuleHomBasis {
    pub source: DgModuleTable,
    pub target: DgModuleTable,
    pub degree_families: BTreeMap<i32, Vec<DgModuleMap>>,
    kernels: BTreeMap<i32, Vec<Vec<Scalar>>>,
}

impl ModuleHomBasis {
    pub fn family(&self, p: i32, k: usize) -> &DgModuleMap {
        &self.degree_families[&p][k]
    }

    pub fn dim(&self, p: i32) -> usize {
        self.degree_families.get(&p).map_or(0, Vec::len)
    }

    fn layout(&self, p: i32) -> Vec<(usize, i32, usize, usize)> {
        let (m, n) = (&self.source, &self.target);
        let mut out = Vec::new();
        for x in 0..m.base.object_count() {
            for deg in m.value(x).support() {
                for i in 0..m.value(x).dim(deg) {
                    for j in 0..n.value(x).dim(deg + p) {
                        out.push((x, deg, i, j));
                    }
                }
            }
        }
        out
    }

    pub fn vectorize(&self, f: &DgModuleMap) -> Vec<Scalar> {
        self.layout(f.degree)
            .iter()
            .map(|&(x, deg, i, j)| {
                f.component(&self.source, &self.target, x, deg).get(j, i).clone()
            })
            .collect()
    }

    /// Coordinates of a family in the chosen basis; None when the family does
    /// not satisfy the naturality constraint.
    pub fn express(&self, f: &DgModuleMap) -> Option<Vec<Scalar>> {
        let field = self.source.base.field;
        let v = self.vectorize(f);
        let empty = Vec::new();
        let kernel = self.kernels.get(&f.degree).unwrap_or(&empty);
        coordinates_in(kernel, &v, field)
    }

    /// Reconstructs the family with the given coordinates at degree p.
    pub fn combine(&self, p: i32, coords: &[Scalar]) -> DgModuleMap {
        let field = self.source.base.field;
        let mut out = DgModuleMap::zero(p);
        if let Some(fams) = self.degree_families.get(&p) {
            for (f, c) in fams.iter().zip(coords) {
                if !field.is_zero(c) {
                    out = out.add(&f.scale(c)).expect("same degree");
                }
            }
        }
        out
    }
}

/// The Hom-complex between two dg modules of the same side over the same
/// base, presented in a chosen basis of naturality-kernel families.
pub fn module_hom_complex(
    m: &DgModuleTable,
    n: &DgModuleTable,
) -> Result<(Complex, ModuleHomBasis)> {
    if m.side != n.side {
        return Err(DgError::Invalid("modules must share a side".into()));
    }
    if m.base != n.base {
        return Err(DgError::Invalid("modules must share a base category".into()));
    }
    let field = m.base.field;
    let objs = m.base.object_count();

    // candidate degrees: differences of supports
    let mut degrees: Vec<i32> = Vec::new();
    for x in 0..objs {
        for qm in m.value(x).support() {
            for qn in n.value(x).support() {
                let p = qn - qm;
                if !degrees.contains(&p) {
                    degrees.push(p);
                }
            }
        }
    }
    degrees.sort_unstable();

    // flat unknown index per degree p: (x, deg, i in M(x)^deg, j in N(x)^{deg+p})
    let layout = |p: i32| -> Vec<(usize, i32, usize, usize)> {
        let mut out = Vec::new();
        for x in 0..objs {
            for deg in m.value(x).support() {
                for i in 0..m.value(x).dim(deg) {
                    for j in 0..n.value(x).dim(deg + p) {
                        out.push((x, deg, i, j));
                    }
                }
            }
        }
        out
    };

    let family_from_vec = |p: i32, v: &[Scalar]| -> DgModuleMap {
        let mut components: BTreeMap<(usize, i32), Matrix> = BTreeMap::new();
        for (k, &(x, deg, i, j)) in layout(p).iter().enumerate() {
            if field.is_zero(&v[k]) {
                continue;
            }
            let entry = components.entry((x, deg)).or_insert_with(|| {
                Matrix::zero(field, n.value(x).dim(deg + p), m.value(x).dim(deg))
            });
            entry.set(j, i, v[k].clone());
        }
        DgModuleMap {
            degree: p,
            components,
        }
    };

    let vec_from_family = |p: i32, f: &DgModuleMap| -> Vec<Scalar> {
        layout(p)
            .iter()
            .map(|&(x, deg, i, j)| f.component(m, n, x, deg).get(j, i).clone())
            .collect()
    };

    let mut families: BTreeMap<i32, Vec<DgModuleMap>> = BTreeMap::new();
    let mut kernels: BTreeMap<i32, Vec<Vec<Scalar>>> = BTreeMap::new();
    for &p in &degrees {
        let lay = layout(p);
        if lay.is_empty() {
            continue;
        }
        // constraint rows: for each basis a: x -> y and each m-basis element,
        // impose graded naturality per output coordinate
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for x in 0..objs {
            for y in 0..objs {
                for (r, j) in m.base.basis_labels(x, y) {
                    let a = m.base.basis_element(x, y, r, j);
                    let m_obj = match m.side {
                        Side::Left => x,
                        Side::Right => y,
                    };
                    let out_obj = match m.side {
                        Side::Left => y,
                        Side::Right => x,
                    };
                    for (q, i) in m.basis_labels(m_obj) {
                        let elt = m.basis_element(m_obj, q, i);
                        let am = m.act(&a, &elt)?;
                        let out_dim = n.value(out_obj).dim(q + r + p);
                        if out_dim == 0 && n.value(m_obj).dim(q + p) == 0 {
                            continue;
                        }
                        let mut rowset = vec![vec![field.zero(); lay.len()]; out_dim];
                        // lhs: f(a.m): linear in the components at (out_obj, q+r)
                        for (k, &(xx, deg, ii, jj)) in lay.iter().enumerate() {
                            if xx == out_obj && deg == q + r {
                                let c = &am.coords[ii];
                                if !field.is_zero(c) && jj < out_dim {
                                    rowset[jj][k] = field.add(&rowset[jj][k], c);
                                }
                            }
                        }
                        // rhs: ±(a . f(m)) (left) or f(n).a (right)
                        let sign = match m.side {
                            Side::Left => field
                                .from_i64(if (p * r).rem_euclid(2) == 0 { 1 } else { -1 }),
                            Side::Right => field.one(),
                        };
                        for (k, &(xx, deg, ii, jj)) in lay.iter().enumerate() {
                            if xx == m_obj && deg == q && ii == i {
                                // f(m) = sum_j coeff_j n-basis_j at (m_obj, q+p)
                                let fv = n.basis_element(m_obj, q + p, jj);
                                let moved = n.act(&a, &fv)?;
                                for (jo, c) in moved.coords.iter().enumerate() {
                                    if !field.is_zero(c) {
                                        rowset[jo][k] =
                                            field.sub(&rowset[jo][k], &field.mul(c, &sign));
                                    }
                                }
                            }
                        }
                        rows.extend(rowset.into_iter().filter(|r| {
                            r.iter().any(|c| !field.is_zero(c))
                        }));
                    }
                }
            }
        }
        let kernel = if rows.is_empty() {
            Matrix::identity(field, lay.len())
                .transpose()
                .is_zero()
                .then(Vec::new)
                .unwrap_or_else(|| {
                    (0..lay.len())
                        .map(|k| {
                            let mut v = vec![field.zero(); lay.len()];
                            v[k] = field.one();
                            v
                        })
                        .collect()
                })
        } else {
            let sys = Matrix::from_rows(field, rows)?;
            kernel_basis(&sys).basis().to_vec()
        };
        families.insert(p, kernel.iter().map(|v| family_from_vec(p, v)).collect());
        kernels.insert(p, kernel);
    }

    let components: BTreeMap<i32, usize> = families
        .iter()
        .map(|(&p, fs)| (p, fs.len()))
        .filter(|&(_, d)| d > 0)
        .collect();
    let mut differentials = BTreeMap::new();
    for (&p, fs) in &families {
        let tgt_dim = families.get(&(p + 1)).map_or(0, Vec::len);
        if tgt_dim == 0 || fs.is_empty() {
            continue;
        }
        let mut mat = Matrix::zero(field, tgt_dim, fs.len());
        for (col, f) in fs.iter().enumerate() {
            let df = f.differential(m, n);
            let dv = vec_from_family(p + 1, &df);
            let coords = coordinates_in(&kernels[&(p + 1)], &dv, field).ok_or_else(|| {
                DgError::Invalid(
                    "differential left the naturality kernel (action does not commute with d)"
                        .into(),
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
    Ok((
        complex,
        ModuleHomBasis {
            source: m.clone(),
            target: n.clone(),
            degree_families: families,
            kernels,
        },
    ))
}

/// Report from the Yoneda comparison Hom(Hom(y,-), M) -> M(y).
#[derive(Debug)]
pub struct YonedaReport {
    pub degreewise_bijection: bool,
    pub commutes_with_differential: bool,
}

impl YonedaReport {
    pub fn passed(&self) -> bool {
        self.degreewise_bijection && self.commutes_with_differential
    }
}

/// Verifies that evaluation at the identity, f -> f_y(1_y), is a degreewise
/// bijection commuting with the differentials.
pub fn yoneda_check(base: &DgCategoryTable, y: usize, m: &DgModuleTable) -> Result<YonedaReport> {
    let field = base.field;
    let free = free_module(base, y)?;
    let (hom, basis) = module_hom_complex(&free, m)?;
    let one = base.identity(y);
    // evaluation matrix per degree
    let mut bijection = true;
    let mut commutes = true;
    let eval = |p: i32| -> Matrix {
        let fs = basis.degree_families.get(&p).map_or(&[][..], Vec::as_slice);
        let cols: Vec<Vec<Scalar>> = fs
            .iter()
            .map(|f| {
                f.apply(
                    &free,
                    m,
                    &ModuleElement {
                        object: y,
                        degree: 0,
                        coords: one.coords.clone(),
                    },
                )
                .coords
            })
            .collect();
        Matrix::from_columns(field, &cols, m.value(y).dim(p))
    };
    let mut degrees: Vec<i32> = hom.support().collect();
    for d in m.value(y).support() {
        if !degrees.contains(&d) {
            degrees.push(d);
        }
    }
    for &p in &degrees {
        let e = eval(p);
        if e.rows() != e.cols() || crate::linalg::rank(&e) != e.rows() {
            bijection = false;
        }
        // commutation: eval(d_hom(f)) = d_M(eval(f))
        let d_hom = hom.differential(p);
        let e_next = eval(p + 1);
        let lhs = e_next.mul(&d_hom).expect("shapes");
        let rhs = m.value(y).differential(p).mul(&e).expect("shapes");
        if lhs != rhs {
            commutes = false;
        }
    }
    Ok(YonedaReport {
        degreewise_bijection: bijection,
        commutes_with_differential: commutes,
    })
}

/// Suspension of a dg module: values suspended; for a left module the action
/// picks up the sign a.Σ(m) = (-1)^{|a|} Σ(a.m), a right action is unchanged
/// on symbols.
pub fn suspend_module(m: &DgModuleTable) -> Result<DgModuleTable> {
    shift_module(m, 1)
}

/// Inverse of `suspend_module`.
pub fn unsuspend_module(m: &DgModuleTable) -> Result<DgModuleTable> {
    shift_module(m, -1)
}

fn shift_module(m: &DgModuleTable, s: i32) -> Result<DgModuleTable> {
    let field = m.base.field;
    let values: Vec<Complex> = (0..m.base.object_count())
        .map(|x| m.value(x).shift(s))
        .collect();
    let side = m.side;
    DgModuleTable::from_parts(&m.base, side, values, |x, yy, (p, j), (q, i), out_dim| {
        // the stored element of degree q is Σ^s of an old element of degree q + s
        let a = m.base.basis_element(x, yy, p, j);
        let m_obj = match side {
            Side::Left => x,
            Side::Right => yy,
        };
        let old = m.basis_element(m_obj, q + s, i);
        let moved = m.act(&a, &old).expect("validated action");
        let sign = match side {
            // a . Σ^s(m) = (-1)^{s |a|} Σ^s(a . m)
            Side::Left => field.from_i64(if (s * p).rem_euclid(2) == 0 { 1 } else { -1 }),
            Side::Right => field.one(),
        };
        let out = moved.coords.iter().map(|c| field.mul(c, &sign)).collect::<Vec<_>>();
        debug_assert_eq!(out.len(), out_dim);
        out
    })
}

/// The four structural maps of a module cone: solid arrows are closed, the
/// dotted pair is not in general.
#[derive(Debug, Clone)]
pub struct ConeModuleDiagram {
    /// M' -> Cone(f), closed
    pub include_target: DgModuleMap,
    /// Cone(f) -> ΣM, closed
    pub project_suspension: DgModuleMap,
    /// Cone(f) -> M', dotted
    pub retract_target: DgModuleMap,
    /// ΣM -> Cone(f), dotted
    pub section_suspension: DgModuleMap,
}

/// Mapping cone of a closed degree-0 module map f: M -> M': objectwise the
/// complex cone, with the blockwise module action. Returns the cone and the
/// biproduct diagram.
pub fn cone_module(
    f: &DgModuleMap,
    m: &DgModuleTable,
    mp: &DgModuleTable,
) -> Result<(DgModuleTable, ConeModuleDiagram)> {
    if f.degree != 0 {
        return Err(DgError::WrongDegree {
            expected: 0,
            got: f.degree,
        });
    }
    if !f.differential(m, mp).is_zero() {
        return Err(DgError::NotClosed { degree: 0 });
    }
    let field = m.base.field;
    let objs = m.base.object_count();
    let sm = suspend_module(m)?;
    // cone values: per object, M'(x)^p ⊕ ΣM(x)^p with twisted differential
    let mut values = Vec::new();
    for x in 0..objs {
        let a = mp.value(x);
        let b = sm.value(x);
        let mut components = BTreeMap::new();
        for (&i, &d) in a.components().iter().chain(b.components().iter()) {
            *components.entry(i).or_insert(0) += d;
        }
        let mut differentials = BTreeMap::new();
        for &i in components.keys() {
            let (st, ss) = (a.dim(i), b.dim(i));
            let (tt, ts) = (a.dim(i + 1), b.dim(i + 1));
            if tt + ts == 0 {
                continue;
            }
            let mut mat = Matrix::zero(field, tt + ts, st + ss);
            let da = a.differential(i);
            for r in 0..da.rows() {
                for c in 0..da.cols() {
                    mat.set(r, c, da.get(r, c).clone());
                }
            }
            let fb = f.component(m, mp, x, i + 1);
            for r in 0..fb.rows() {
                for c in 0..fb.cols() {
                    mat.set(r, st + c, fb.get(r, c).clone());
                }
            }
            let db = b.differential(i);
            for r in 0..db.rows() {
                for c in 0..db.cols() {
                    mat.set(tt + r, st + c, db.get(r, c).clone());
                }
            }
            differentials.insert(i, mat);
        }
        values.push(Complex::new(field, components, differentials)?);
    }
    let side = m.side;
    let cone = DgModuleTable::from_parts(&m.base, side, values, |x, yy, (p, j), (q, i), out_dim| {
        // block action: M'-part then ΣM-part; the input index i splits at
        // dim M'(src)^q
        let src_obj = match side {
            Side::Left => x,
            Side::Right => yy,
        };
        let out_obj = match side {
            Side::Left => yy,
            Side::Right => x,
        };
        let a = m.base.basis_element(x, yy, p, j);
        let split_in = mp.value(src_obj).dim(q);
        let split_out = mp.value(out_obj).dim(p + q);
        let mut out = vec![field.zero(); out_dim];
        if i < split_in {
            let elt = mp.basis_element(src_obj, q, i);
            let moved = mp.act(&a, &elt).expect("validated");
            for (k, c) in moved.coords.iter().enumerate() {
                out[k] = c.clone();
            }
        } else {
            let elt = sm.basis_element(src_obj, q, i - split_in);
            let moved = sm.act(&a, &elt).expect("validated");
            for (k, c) in moved.coords.iter().enumerate() {
                out[split_out + k] = c.clone();
            }
        }
        out
    })?;
    // structural maps
    let mut inc = BTreeMap::new();
    let mut proj = BTreeMap::new();
    let mut retr = BTreeMap::new();
    let mut sect = BTreeMap::new();
    for x in 0..objs {
        for d in cone.value(x).support() {
            let st = mp.value(x).dim(d);
            let ss = sm.value(x).dim(d);
            if st > 0 {
                let mut mi = Matrix::zero(field, st + ss, st);
                let mut mr = Matrix::zero(field, st, st + ss);
                for k in 0..st {
                    mi.set(k, k, field.one());
                    mr.set(k, k, field.one());
                }
                inc.insert((x, d), mi);
                retr.insert((x, d), mr);
            }
            if ss > 0 {
                let mut msec = Matrix::zero(field, st + ss, ss);
                let mut mp_ = Matrix::zero(field, ss, st + ss);
                for k in 0..ss {
                    msec.set(st + k, k, field.one());
                    mp_.set(k, st + k, field.one());
                }
                sect.insert((x, d), msec);
                proj.insert((x, d), mp_);
            }
        }
    }
    Ok((
        cone,
        ConeModuleDiagram {
            include_target: DgModuleMap {
                degree: 0,
                components: inc,
            },
            project_suspension: DgModuleMap {
                degree: 0,
                components: proj,
            },
            retract_target: DgModuleMap {
                degree: 0,
                components: retr,
            },
            section_suspension: DgModuleMap {
                degree: 0,
                components: sect,
            },
        },
    ))
}

/// Objectwise contractibility of every value complex.
pub fn module_objectwise_contractible(m: &DgModuleTable) -> bool {
    (0..m.base.object_count()).all(|x| crate::complex::is_contractible(m.value(x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{disc, point_category, sphere};

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn free_modules_validate() {
        for n in -1..=1 {
            let d = disc(q(), n);
            for y in 0..2 {
                free_module(&d, y).unwrap();
                free_right_module(&d, y).unwrap();
            }
        }
        let s = sphere(q(), 0);
        free_module(&s, 0).unwrap();
    }

    #[test]
    fn free_module_over_point_is_regular() {
        let p = point_category(q(), "*");
        let m = free_module(&p, 0).unwrap();
        assert_eq!(m.value(0).dim(0), 1);
    }

    #[test]
    fn disc_free_module_values_read_off_the_table() {
        let d = disc(q(), 1);
        let m = free_module(&d, 0).unwrap();
        assert_eq!(m.value(0).components(), d.hom(0, 0).components());
        assert_eq!(m.value(1).components(), d.hom(0, 1).components());
    }

    #[test]
    fn yoneda_for_free_modules() {
        let d = disc(q(), 1);
        for y in 0..2 {
            for target in 0..2 {
                let m = free_module(&d, target).unwrap();
                let rep = yoneda_check(&d, y, &m).unwrap();
                assert!(rep.passed(), "yoneda fails at y={y}, module Hom({target},-)");
            }
        }
    }

    #[test]
    fn hom_into_zero_module_vanishes() {
        let d = disc(q(), 0);
        let m = free_module(&d, 0).unwrap();
        let z = zero_module(&d, Side::Left);
        let (h, _) = module_hom_complex(&m, &z).unwrap();
        assert_eq!(h.total_dim(), 0);
    }

    #[test]
    fn module_end_of_free_matches_endomorphisms() {
        // Hom(free(y), free(y)) has the dimensions of Hom(y, y)
        let d = disc(q(), 1);
        let m = free_module(&d, 0).unwrap();
        let (h, _) = module_hom_complex(&m, &m).unwrap();
        assert_eq!(h.dim(0), d.hom(0, 0).dim(0));
        assert_eq!(h.total_dim(), d.hom(0, 0).total_dim());
    }

    #[test]
    fn suspension_round_trip() {
        let d = disc(q(), 1);
        let m = free_module(&d, 0).unwrap();
        let s = suspend_module(&m).unwrap();
        let back = unsuspend_module(&s).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn cone_of_identity_is_objectwise_contractible() {
        let d = disc(q(), 1);
        let m = free_module(&d, 0).unwrap();
        let id = DgModuleMap::identity(&m);
        let (cone, _) = cone_module(&id, &m, &m).unwrap();
        assert!(module_objectwise_contractible(&cone));
    }

    #[test]
    fn cone_biproduct_identities() {
        let d = disc(q(), 1);
        let m = free_module(&d, 0).unwrap();
        let mp = free_module(&d, 1).unwrap();
        // a closed degree-0 map m -> mp: composition with a closed element of
        // Hom(1, 0)... that hom is zero, so use the zero map; the diagram
        // identities are still exercised
        let f = DgModuleMap::zero(0);
        let (cone, diag) = cone_module(&f, &m, &mp).unwrap();
        let sm = suspend_module(&m).unwrap();
        // solid arrows closed
        assert!(diag.include_target.differential(&mp, &cone).is_zero());
        assert!(diag.project_suspension.differential(&cone, &sm).is_zero());
        // biproduct identities
        let rt = diag
            .retract_target
            .compose(&diag.include_target, &mp, &cone, &mp);
        assert_eq!(rt, DgModuleMap::identity(&mp));
        let ps = diag
            .project_suspension
            .compose(&diag.section_suspension, &sm, &cone, &sm);
        assert_eq!(ps, DgModuleMap::identity(&sm));
        let it = diag
            .include_target
            .compose(&diag.retract_target, &cone, &mp, &cone);
        let sp = diag
            .section_suspension
            .compose(&diag.project_suspension, &cone, &sm, &cone);
        assert_eq!(it.add(&sp).unwrap(), DgModuleMap::identity(&cone));
        // cross composites vanish
        let pj = diag
            .project_suspension
            .compose(&diag.include_target, &mp, &cone, &sm);
        let ts = diag
            .retract_target
            .compose(&diag.section_suspension, &sm, &cone, &mp);
        assert!(pj.is_zero());
        assert!(ts.is_zero());
    }
}
