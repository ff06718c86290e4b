//! Cochain complexes of finite total dimension over an exact field.
//!
//! The differential raises degree by one. Components are stored with finite
//! support; a constructed [`Complex`] always satisfies d^2 = 0 (checked at
//! construction, re-checkable through [`Complex::validate`]).

use std::collections::BTreeMap;

use crate::error::{DgError, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{
    coordinates_in, image_basis, kernel_basis, quotient_data, rank, solve, Matrix, Subspace,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Complex {
    pub field: FieldSpec,
    components: BTreeMap<i32, usize>,
    /// d^i : C^i -> C^{i+1}, stored exactly where both ends are nonzero.
    differentials: BTreeMap<i32, Matrix>,
}

impl Complex {
    /// Builds and validates a complex. Missing differentials between nonzero
    /// components are taken to be zero; zero-dimensional components are dropped.
    pub fn new(
        field: FieldSpec,
        components: BTreeMap<i32, usize>,
        differentials: BTreeMap<i32, Matrix>,
    ) -> Result<Self> {
        let c = Self::new_unchecked(field, components, differentials)?;
        c.validate()?;
        Ok(c)
    }

    /// Shape normalization without the d^2 check (used by tests that need to
    /// fabricate invalid complexes, and internally when d^2 = 0 is certified
    /// separately).
    pub fn new_unchecked(
        field: FieldSpec,
        components: BTreeMap<i32, usize>,
        differentials: BTreeMap<i32, Matrix>,
    ) -> Result<Self> {
        let components: BTreeMap<i32, usize> =
            components.into_iter().filter(|&(_, d)| d > 0).collect();
        let mut normalized = BTreeMap::new();
        for (&i, m) in &differentials {
            let src = components.get(&i).copied().unwrap_or(0);
            let tgt = components.get(&(i + 1)).copied().unwrap_or(0);
            if src == 0 || tgt == 0 {
                if !m.is_zero() {
                    return Err(DgError::MalformedComplex(format!(
                        "nonzero differential at degree {i} next to a zero component"
                    )));
                }
                continue;
            }
            if m.rows() != tgt || m.cols() != src {
                return Err(DgError::MalformedComplex(format!(
                    "differential at degree {i} has shape {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    tgt,
                    src
                )));
            }
            normalized.insert(i, m.clone());
        }
        for (&i, &src) in &components {
            let tgt = components.get(&(i + 1)).copied().unwrap_or(0);
            if tgt > 0 {
                normalized
                    .entry(i)
                    .or_insert_with(|| Matrix::zero(field, tgt, src));
            }
        }
        Ok(Complex {
            field,
            components,
            differentials: normalized,
        })
    }

    pub fn zero(field: FieldSpec) -> Self {
        Complex {
            field,
            components: BTreeMap::new(),
            differentials: BTreeMap::new(),
        }
    }

    /// One copy of the ground field in the given degree.
    pub fn point(field: FieldSpec, degree: i32) -> Self {
        Complex {
            field,
            components: BTreeMap::from([(degree, 1)]),
            differentials: BTreeMap::new(),
        }
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.components.get(&degree).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.components.values().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = i32> + '_ {
        self.components.keys().copied()
    }

    pub fn degree_range(&self) -> Option<(i32, i32)> {
        let min = self.components.keys().next()?;
        let max = self.components.keys().last()?;
        Some((*min, *max))
    }

    pub fn components(&self) -> &BTreeMap<i32, usize> {
        &self.components
    }

    /// The differential out of degree `i` (zero matrix when absent).
    pub fn differential(&self, i: i32) -> Matrix {
        match self.differentials.get(&i) {
            Some(m) => m.clone(),
            None => Matrix::zero(self.field, self.dim(i + 1), self.dim(i)),
        }
    }

    /// Applies d to an element of degree `i`.
    pub fn apply_d(&self, i: i32, v: &[Scalar]) -> Vec<Scalar> {
        self.differential(i).apply(v).expect("degree dims agree")
    }

    /// Checks d^2 = 0 at every degree; reports the first failing degree.
    pub fn validate(&self) -> Result<()> {
        for &i in self.components.keys() {
            let d1 = self.differential(i);
            let d2 = self.differential(i + 1);
            if d2.rows() == 0 || d1.cols() == 0 {
                continue;
            }
            if !d2.mul(&d1).expect("chained shapes").is_zero() {
                return Err(DgError::DifferentialSquare { degree: i });
            }
        }
        Ok(())
    }

    /// Cohomology at degree `i`: dimension plus cocycle representatives that
    /// span a complement of the coboundaries.
    pub fn cohomology(&self, i: i32) -> (usize, Vec<Vec<Scalar>>) {
        let n = self.dim(i);
        if n == 0 {
            return (0, Vec::new());
        }
        let cycles = kernel_basis(&self.differential(i));
        let boundaries = if self.dim(i - 1) == 0 {
            Subspace::zero(self.field, n)
        } else {
            image_basis(&self.differential(i - 1))
        };
        let (dim, reps) =
            quotient_data(&cycles, &boundaries).expect("boundaries are cycles since d^2 = 0");
        (dim, reps)
    }

    pub fn cohomology_dim(&self, i: i32) -> usize {
        self.cohomology(i).0
    }

    /// All nonzero cohomology dimensions.
    pub fn cohomology_dims(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for &i in self.components.keys() {
            let d = self.cohomology_dim(i);
            if d > 0 {
                out.insert(i, d);
            }
        }
        out
    }

    pub fn is_acyclic(&self) -> bool {
        self.cohomology_dims().is_empty()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.components
            .iter()
            .map(|(&i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }

    /// Suspension: components shift down by one, differentials negate.
    pub fn suspend(&self) -> Complex {
        self.shift(1)
    }

    /// Inverse of `suspend`.
    pub fn unsuspend(&self) -> Complex {
        self.shift(-1)
    }

    /// s-fold suspension: component at p becomes the old component at p + s,
    /// with differentials scaled by (-1)^s.
    pub fn shift(&self, s: i32) -> Complex {
        let components = self
            .components
            .iter()
            .map(|(&i, &d)| (i - s, d))
            .collect::<BTreeMap<_, _>>();
        let sign = self.field.from_i64(if s.rem_euclid(2) == 0 { 1 } else { -1 });
        let differentials = self
            .differentials
            .iter()
            .map(|(&i, m)| (i - s, m.scale(&sign)))
            .collect();
        Complex {
            field: self.field,
            components,
            differentials,
        }
    }

    /// Direct sum, first summand's coordinates first.
    pub fn direct_sum(&self, other: &Complex) -> Complex {
        let mut components = BTreeMap::new();
        for (&i, &d) in self.components.iter().chain(other.components.iter()) {
            *components.entry(i).or_insert(0) += d;
        }
        let mut differentials = BTreeMap::new();
        for &i in components.keys() {
            let tgt = components.get(&(i + 1)).copied().unwrap_or(0);
            let src = components[&i];
            if tgt == 0 {
                continue;
            }
            let mut m = Matrix::zero(self.field, tgt, src);
            let (a, b) = (self.differential(i), other.differential(i));
            for r in 0..a.rows() {
                for c in 0..a.cols() {
                    m.set(r, c, a.get(r, c).clone());
                }
            }
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    m.set(self.dim(i + 1) + r, self.dim(i) + c, b.get(r, c).clone());
                }
            }
            differentials.insert(i, m);
        }
        Complex {
            field: self.field,
            components,
            differentials,
        }
    }
}

/// A homogeneous graded map between complexes, degree `p`: components
/// C^n -> D^{n+p}. "Closed" is a derived predicate, not an invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMap {
    pub source: Complex,
    pub target: Complex,
    pub degree: i32,
    components: BTreeMap<i32, Matrix>,
}

impl ChainMap {
    pub fn new(
        source: Complex,
        target: Complex,
        degree: i32,
        components: BTreeMap<i32, Matrix>,
    ) -> Result<Self> {
        for (&n, m) in &components {
            let rows = target.dim(n + degree);
            let cols = source.dim(n);
            if m.rows() != rows || m.cols() != cols {
                return Err(DgError::ShapeMismatch(format!(
                    "chain map component at degree {n}: {}x{} (expected {rows}x{cols})",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let components = components
            .into_iter()
            .filter(|(_, m)| m.rows() > 0 && m.cols() > 0)
            .collect();
        Ok(ChainMap {
            source,
            target,
            degree,
            components,
        })
    }

    pub fn zero(source: Complex, target: Complex, degree: i32) -> Self {
        ChainMap {
            source,
            target,
            degree,
            components: BTreeMap::new(),
        }
    }

    pub fn identity(c: &Complex) -> Self {
        let components = c
            .support()
            .map(|i| (i, Matrix::identity(c.field, c.dim(i))))
            .collect();
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            degree: 0,
            components,
        }
    }

    pub fn component(&self, n: i32) -> Matrix {
        match self.components.get(&n) {
            Some(m) => m.clone(),
            None => Matrix::zero(
                self.source.field,
                self.target.dim(n + self.degree),
                self.source.dim(n),
            ),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(Matrix::is_zero)
    }

    /// d(f) = d_target . f - (-1)^|f| f . d_source, one degree higher.
    pub fn differential(&self) -> ChainMap {
        let f = &self.source.field;
        let sign = f.from_i64(if self.degree.rem_euclid(2) == 0 { -1 } else { 1 });
        let mut components = BTreeMap::new();
        for n in self.source.support() {
            let a = self
                .target
                .differential(n + self.degree)
                .mul(&self.component(n))
                .expect("shapes agree");
            let b = self
                .component(n + 1)
                .mul(&self.source.differential(n))
                .expect("shapes agree");
            let m = a.add(&b.scale(&sign)).expect("same shape");
            if m.rows() > 0 && m.cols() > 0 && !m.is_zero() {
                components.insert(n, m);
            }
        }
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree + 1,
            components,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.differential().is_zero()
    }

    pub fn compose(&self, inner: &ChainMap) -> Result<ChainMap> {
        if inner.target != self.source {
            return Err(DgError::EndpointMismatch(
                "chain map composition endpoints".into(),
            ));
        }
        let mut components = BTreeMap::new();
        for n in inner.source.support() {
            let m = self
                .component(n + inner.degree)
                .mul(&inner.component(n))
                .expect("shapes agree");
            if m.rows() > 0 && m.cols() > 0 && !m.is_zero() {
                components.insert(n, m);
            }
        }
        Ok(ChainMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            degree: self.degree + inner.degree,
            components,
        })
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap> {
        if self.source != other.source || self.target != other.target || self.degree != other.degree
        {
            return Err(DgError::ShapeMismatch("chain map addition".into()));
        }
        let mut components = BTreeMap::new();
        for n in self.source.support() {
            let m = self.component(n).add(&other.component(n))?;
            if m.rows() > 0 && m.cols() > 0 && !m.is_zero() {
                components.insert(n, m);
            }
        }
        Ok(ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            components,
        })
    }

    pub fn scale(&self, s: &Scalar) -> ChainMap {
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            components: self
                .components
                .iter()
                .map(|(&n, m)| (n, m.scale(s)))
                .collect(),
        }
    }
}

/// Basis bookkeeping for a tensor product of complexes: the degree-p basis
/// consists of pairs ((q, i), (p-q, j)) ordered by q, then i, then j.
#[derive(Debug, Clone)]
pub struct TensorBasis {
    index: BTreeMap<i32, Vec<((i32, usize), (i32, usize))>>,
}

impl TensorBasis {
    pub fn dim(&self, p: i32) -> usize {
        self.index.get(&p).map_or(0, Vec::len)
    }

    pub fn labels(&self, p: i32) -> &[((i32, usize), (i32, usize))] {
        self.index.get(&p).map_or(&[], Vec::as_slice)
    }

    pub fn position(&self, p: i32, label: ((i32, usize), (i32, usize))) -> Option<usize> {
        self.index.get(&p)?.iter().position(|&l| l == label)
    }
}

/// Tensor product of complexes with d(v ⊗ w) = dv ⊗ w + (-1)^{|v|} v ⊗ dw.
pub fn tensor_complex(v: &Complex, w: &Complex) -> (Complex, TensorBasis) {
    let field = v.field;
    let mut index: BTreeMap<i32, Vec<((i32, usize), (i32, usize))>> = BTreeMap::new();
    for qv in v.support() {
        for qw in w.support() {
            let slot = index.entry(qv + qw).or_default();
            for i in 0..v.dim(qv) {
                for j in 0..w.dim(qw) {
                    slot.push(((qv, i), (qw, j)));
                }
            }
        }
    }
    let basis = TensorBasis { index };
    let components: BTreeMap<i32, usize> = basis
        .index
        .iter()
        .map(|(&p, ls)| (p, ls.len()))
        .filter(|&(_, d)| d > 0)
        .collect();
    let mut differentials = BTreeMap::new();
    for (&p, labels) in &basis.index {
        let tgt = basis.dim(p + 1);
        if tgt == 0 || labels.is_empty() {
            continue;
        }
        let mut m = Matrix::zero(field, tgt, labels.len());
        for (col, &((qv, i), (qw, j))) in labels.iter().enumerate() {
            let dv = v.differential(qv);
            for r in 0..dv.rows() {
                let x = dv.get(r, i);
                if field.is_zero(x) {
                    continue;
                }
                let row = basis
                    .position(p + 1, ((qv + 1, r), (qw, j)))
                    .expect("tensor label");
                m.set(row, col, field.add(m.get(row, col), x));
            }
            let sign = field.from_i64(if qv.rem_euclid(2) == 0 { 1 } else { -1 });
            let dw = w.differential(qw);
            for r in 0..dw.rows() {
                let x = dw.get(r, j);
                if field.is_zero(x) {
                    continue;
                }
                let row = basis
                    .position(p + 1, ((qv, i), (qw + 1, r)))
                    .expect("tensor label");
                m.set(row, col, field.add(m.get(row, col), &field.mul(&sign, x)));
            }
        }
        differentials.insert(p, m);
    }
    let complex = Complex::new(field, components, differentials)
        .expect("tensor differential squares to zero");
    (complex, basis)
}

/// Mapping cone of a closed degree-0 map: target ⊕ suspended source, with the
/// block-upper-triangular differential [[d_target, f], [0, -d_source]].
pub fn cone(f: &ChainMap) -> Result<Complex> {
    if f.degree != 0 {
        return Err(DgError::WrongDegree {
            expected: 0,
            got: f.degree,
        });
    }
    if !f.is_closed() {
        let bad = f
            .differential()
            .components
            .keys()
            .next()
            .copied()
            .unwrap_or(0);
        return Err(DgError::NotClosed { degree: bad });
    }
    let field = f.source.field;
    let sm = f.source.suspend();
    let mut components = BTreeMap::new();
    for (&i, &d) in f.target.components().iter().chain(sm.components().iter()) {
        *components.entry(i).or_insert(0) += d;
    }
    let mut differentials = BTreeMap::new();
    for &i in components.keys() {
        let src_t = f.target.dim(i);
        let src_s = sm.dim(i);
        let tgt_t = f.target.dim(i + 1);
        let tgt_s = sm.dim(i + 1);
        if tgt_t + tgt_s == 0 {
            continue;
        }
        let mut m = Matrix::zero(field, tgt_t + tgt_s, src_t + src_s);
        let dt = f.target.differential(i);
        for r in 0..dt.rows() {
            for c in 0..dt.cols() {
                m.set(r, c, dt.get(r, c).clone());
            }
        }
        // suspended source sits in degree i as old degree i+1; the twist block
        // is the component f^{i+1}
        let fb = f.component(i + 1);
        for r in 0..fb.rows() {
            for c in 0..fb.cols() {
                m.set(r, src_t + c, fb.get(r, c).clone());
            }
        }
        let ds = sm.differential(i);
        for r in 0..ds.rows() {
            for c in 0..ds.cols() {
                m.set(tgt_t + r, src_t + c, ds.get(r, c).clone());
            }
        }
        differentials.insert(i, m);
    }
    let out = Complex::new_unchecked(field, components, differentials)?;
    out.validate()?;
    Ok(out)
}

/// Flat index bookkeeping for the Hom-complex between two complexes: the
/// degree-p basis consists of matrix units indexed by (source degree n,
/// source index i, target index j), target degree n + p.
#[derive(Debug, Clone)]
pub struct HomBasis {
    pub source: Complex,
    pub target: Complex,
    /// degree -> list of (n, i, j)
    index: BTreeMap<i32, Vec<(i32, usize, usize)>>,
}

impl HomBasis {
    pub fn new(source: &Complex, target: &Complex) -> Self {
        let mut index: BTreeMap<i32, Vec<(i32, usize, usize)>> = BTreeMap::new();
        for n in source.support() {
            for m in target.support() {
                let p = m - n;
                let slot = index.entry(p).or_default();
                for i in 0..source.dim(n) {
                    for j in 0..target.dim(m) {
                        slot.push((n, i, j));
                    }
                }
            }
        }
        HomBasis {
            source: source.clone(),
            target: target.clone(),
            index,
        }
    }

    pub fn dim(&self, p: i32) -> usize {
        self.index.get(&p).map_or(0, Vec::len)
    }

    pub fn labels(&self, p: i32) -> &[(i32, usize, usize)] {
        self.index.get(&p).map_or(&[], Vec::as_slice)
    }

    pub fn position(&self, p: i32, label: (i32, usize, usize)) -> Option<usize> {
        self.index.get(&p)?.iter().position(|&l| l == label)
    }

    /// Encodes a graded map of degree p as a coordinate vector.
    pub fn vector_of(&self, f: &ChainMap) -> Vec<Scalar> {
        let field = self.source.field;
        let labels = self.labels(f.degree);
        let mut v = vec![field.zero(); labels.len()];
        for (k, &(n, i, j)) in labels.iter().enumerate() {
            v[k] = f.component(n).get(j, i).clone();
        }
        v
    }

    /// Decodes a coordinate vector into a graded map of degree p.
    pub fn map_of(&self, p: i32, v: &[Scalar]) -> ChainMap {
        let field = self.source.field;
        let mut components: BTreeMap<i32, Matrix> = BTreeMap::new();
        for (k, &(n, i, j)) in self.labels(p).iter().enumerate() {
            if field.is_zero(&v[k]) {
                continue;
            }
            let entry = components.entry(n).or_insert_with(|| {
                Matrix::zero(field, self.target.dim(n + p), self.source.dim(n))
            });
            entry.set(j, i, v[k].clone());
        }
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: p,
            components,
        }
    }
}

/// The Hom-complex between two finite-dimensional complexes, with the
/// differential d(f) = d_W . f - (-1)^|f| f . d_V. Validity of the output is
/// itself a sign test.
pub fn hom_complex(v: &Complex, w: &Complex) -> (Complex, HomBasis) {
    let field = v.field;
    let basis = HomBasis::new(v, w);
    let components: BTreeMap<i32, usize> = basis
        .index
        .iter()
        .map(|(&p, ls)| (p, ls.len()))
        .filter(|&(_, d)| d > 0)
        .collect();
    let mut differentials = BTreeMap::new();
    for (&p, labels) in &basis.index {
        let tgt = basis.dim(p + 1);
        if tgt == 0 || labels.is_empty() {
            continue;
        }
        let mut m = Matrix::zero(field, tgt, labels.len());
        for (col, _label) in labels.iter().enumerate() {
            let unit = {
                let mut coords = vec![field.zero(); labels.len()];
                coords[col] = field.one();
                basis.map_of(p, &coords)
            };
            let df = unit.differential();
            let out = basis.vector_of(&df);
            for (row, x) in out.iter().enumerate() {
                if !field.is_zero(x) {
                    m.set(row, col, x.clone());
                }
            }
        }
        differentials.insert(p, m);
    }
    let complex = Complex::new(field, components, differentials)
        .expect("hom-complex differential squares to zero");
    (complex, basis)
}

/// If f = d(h) is solvable in the Hom-complex, returns such an h.
/// Rejects maps that are not closed.
pub fn is_null_homotopic(f: &ChainMap) -> Result<Option<ChainMap>> {
    if !f.is_closed() {
        let bad = f
            .differential()
            .components
            .keys()
            .next()
            .copied()
            .unwrap_or(0);
        return Err(DgError::NotClosed { degree: bad });
    }
    let (hom, basis) = hom_complex(&f.source, &f.target);
    let p = f.degree;
    let target_vec = basis.vector_of(f);
    if target_vec.iter().all(|x| f.source.field.is_zero(x)) {
        return Ok(Some(ChainMap::zero(
            f.source.clone(),
            f.target.clone(),
            p - 1,
        )));
    }
    let d = hom.differential(p - 1);
    match solve(&d, &target_vec) {
        Some(h) => Ok(Some(basis.map_of(p - 1, &h))),
        None => Ok(None),
    }
}

/// A complex is contractible when its identity is null-homotopic.
pub fn is_contractible(c: &Complex) -> bool {
    is_null_homotopic(&ChainMap::identity(c))
        .expect("identity is closed")
        .is_some()
}

/// A closed degree-0 map is a quasi-isomorphism iff its cone is acyclic.
pub fn is_quasi_iso(f: &ChainMap) -> Result<bool> {
    Ok(cone(f)?.is_acyclic())
}

/// dim H^i(cone f) via ranks of the assembled block matrices, used as an
/// independent cross-check on the cone construction.
pub fn cone_cohomology_dim_by_rank(f: &ChainMap, i: i32) -> usize {
    let c = cone(f).expect("closed input");
    let n = c.dim(i);
    let r_out = rank(&c.differential(i));
    let r_in = rank(&c.differential(i - 1));
    n - r_out - r_in
}

/// Expresses a closed element's class in the cohomology basis produced by
/// [`Complex::cohomology`]: returns None if `v` is not a cocycle.
pub fn cohomology_class(c: &Complex, i: i32, v: &[Scalar]) -> Option<Vec<Scalar>> {
    let field = c.field;
    if !c.apply_d(i, v).iter().all(|x| field.is_zero(x)) {
        return None;
    }
    let (h, reps) = c.cohomology(i);
    if h == 0 {
        return Some(Vec::new());
    }
    // v = sum of class coords on reps + boundary
    let boundaries = image_basis(&c.differential(i - 1));
    let mut cols: Vec<Vec<Scalar>> = reps.clone();
    cols.extend(boundaries.basis().iter().cloned());
    let coords = coordinates_in(&cols, v, field)?;
    Some(coords[..h].to_vec())
}
