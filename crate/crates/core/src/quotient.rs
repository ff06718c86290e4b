//! Hom-complexes of the dg quotient of a tabular category by a full
//! subcategory spanned by chosen objects: for each contracted object U a new
//! endomorphism ε_U of degree -1 with d(ε_U) = 1_U is freely adjoined.
//!
//! A Hom space of the quotient decomposes into words
//! a_n ⊗ ε_{U_n} ⊗ a_{n-1} ⊗ ... ⊗ ε_{U_1} ⊗ a_0 graded by the number of ε
//! letters; the count never grows under d, which gives an ascending
//! filtration by subcomplexes. Truncations at a maximal length are finite
//! in every degree and carry certified-exact or stabilization-traced
//! cohomology.

use std::collections::BTreeMap;

use crate::category::{DgCategoryTable, HomElement};
use crate::complex::Complex;
use crate::error::{DgError, Result};
use crate::field::Scalar;
use crate::linalg::Matrix;

/// A basis word of fixed length: interior objects and the slot labels
/// (degree, basis index) of a_0 .. a_n.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct QuotientWord {
    /// U_1 .. U_n
    pub interior: Vec<usize>,
    /// a_0 .. a_n, where a_0: x -> U_1, a_i: U_i -> U_{i+1}, a_n: U_n -> y
    pub slots: Vec<(i32, usize)>,
}

impl QuotientWord {
    pub fn length(&self) -> usize {
        self.interior.len()
    }

    pub fn degree(&self) -> i32 {
        let slot_sum: i32 = self.slots.iter().map(|&(d, _)| d).sum();
        slot_sum - self.interior.len() as i32
    }
}

/// A homogeneous element of one degree component of a truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientElement {
    pub degree: i32,
    pub coords: Vec<Scalar>,
}

/// Why the reported cohomology is exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactCertificate {
    /// no contracted objects: the quotient is the original Hom-complex
    NoContractedObjects,
    /// no words of positive length exist at all
    NoWords,
    /// every Hom-complex between contracted objects is concentrated in
    /// degrees <= 0, so word degrees decay and long words cannot reach the
    /// requested window
    DegreeDecay,
    /// every Hom-complex between contracted objects is acyclic, so the
    /// length-graded pieces beyond length one are acyclic over a field
    AcyclicInterior,
}

/// The word-basis truncation of one quotient Hom-complex. Differentials are
/// kept as sparse columns; dense complexes are materialized per degree
/// window on demand.
#[derive(Debug, Clone)]
pub struct QuotientHomTruncation {
    pub base: DgCategoryTable,
    pub contracted: Vec<usize>,
    pub source: usize,
    pub target: usize,
    pub max_length: usize,
    /// per degree, the word basis in a canonical order
    pub words: BTreeMap<i32, Vec<QuotientWord>>,
    index: BTreeMap<i32, BTreeMap<QuotientWord, usize>>,
    /// diff[p][col] lists (row in degree p+1, coefficient)
    diff: BTreeMap<i32, Vec<Vec<(usize, Scalar)>>>,
}

impl QuotientHomTruncation {
    pub fn dim(&self, degree: i32) -> usize {
        self.words.get(&degree).map_or(0, Vec::len)
    }

    pub fn zero_element(&self, degree: i32) -> QuotientElement {
        QuotientElement {
            degree,
            coords: vec![self.base.field.zero(); self.dim(degree)],
        }
    }

    pub fn word_position(&self, degree: i32, w: &QuotientWord) -> Option<usize> {
        self.index.get(&degree)?.get(w).copied()
    }

    /// The length-0 inclusion of an ambient Hom element.
    pub fn include_length_zero(&self, e: &HomElement) -> Result<QuotientElement> {
        if e.source != self.source || e.target != self.target {
            return Err(DgError::EndpointMismatch("length-zero inclusion".into()));
        }
        let mut out = self.zero_element(e.degree);
        for (i, c) in e.coords.iter().enumerate() {
            if self.base.field.is_zero(c) {
                continue;
            }
            let w = QuotientWord {
                interior: vec![],
                slots: vec![(e.degree, i)],
            };
            let pos = self
                .word_position(e.degree, &w)
                .ok_or_else(|| DgError::Invalid("length-zero word missing".into()))?;
            out.coords[pos] = c.clone();
        }
        Ok(out)
    }

    /// The ε_U element of End(U) in the quotient (only for source = target =
    /// U contracted): 1_U ⊗ ε ⊗ 1_U, of degree -1.
    pub fn epsilon_element(&self, u: usize) -> Result<QuotientElement> {
        if self.source != u || self.target != u || !self.contracted.contains(&u) {
            return Err(DgError::Invalid(
                "epsilon lives in End(U) for a contracted U".into(),
            ));
        }
        let field = self.base.field;
        let one = self.base.identity(u);
        let mut out = self.zero_element(-1);
        for (i, ci) in one.coords.iter().enumerate() {
            for (j, cj) in one.coords.iter().enumerate() {
                let c = field.mul(ci, cj);
                if field.is_zero(&c) {
                    continue;
                }
                let w = QuotientWord {
                    interior: vec![u],
                    slots: vec![(0, j), (0, i)],
                };
                let pos = self
                    .word_position(-1, &w)
                    .ok_or_else(|| DgError::Invalid("epsilon word missing".into()))?;
                out.coords[pos] = field.add(&out.coords[pos], &c);
            }
        }
        Ok(out)
    }

    pub fn differential(&self, e: &QuotientElement) -> QuotientElement {
        let field = self.base.field;
        let mut out = self.zero_element(e.degree + 1);
        if let Some(cols) = self.diff.get(&e.degree) {
            for (c, v) in e.coords.iter().enumerate() {
                if field.is_zero(v) {
                    continue;
                }
                for (r, coeff) in &cols[c] {
                    out.coords[*r] = field.add(&out.coords[*r], &field.mul(coeff, v));
                }
            }
        }
        out
    }

    /// Sparse differential column of one basis word.
    pub fn diff_column(&self, degree: i32, col: usize) -> &[(usize, Scalar)] {
        self.diff
            .get(&degree)
            .map_or(&[][..], |cols| cols[col].as_slice())
    }

    pub fn degree_range(&self) -> Option<(i32, i32)> {
        let lo = *self.words.keys().next()?;
        let hi = *self.words.keys().last()?;
        Some((lo, hi))
    }

    /// Densifies the degrees in [lo, hi] into a complex (differentials for
    /// p in lo..hi).
    pub fn dense_window(&self, lo: i32, hi: i32) -> Complex {
        let field = self.base.field;
        let components: BTreeMap<i32, usize> = self
            .words
            .iter()
            .filter(|(&d, _)| d >= lo && d <= hi)
            .map(|(&d, v)| (d, v.len()))
            .collect();
        let mut differentials = BTreeMap::new();
        for (&p, cols) in &self.diff {
            if p < lo || p >= hi {
                continue;
            }
            let rows = self.dim(p + 1);
            let mut m = Matrix::zero(field, rows, cols.len());
            for (c, col) in cols.iter().enumerate() {
                for (r, coeff) in col {
                    m.set(*r, c, coeff.clone());
                }
            }
            differentials.insert(p, m);
        }
        Complex::new_unchecked(field, components, differentials)
            .expect("window of a valid truncation")
    }

    /// The full truncation as a dense complex (small instances only).
    pub fn dense_complex(&self) -> Complex {
        match self.degree_range() {
            Some((lo, hi)) => self.dense_window(lo, hi),
            None => Complex::zero(self.base.field),
        }
    }
}

/// All maximal degrees of Hom complexes from x into the contracted set, etc.
fn max_degree_over(
    base: &DgCategoryTable,
    pairs: impl Iterator<Item = (usize, usize)>,
) -> Option<i32> {
    let mut out = None;
    for (s, t) in pairs {
        if let Some((_, hi)) = base.hom(s, t).degree_range() {
            out = Some(out.map_or(hi, |o: i32| o.max(hi)));
        }
    }
    out
}

/// Builds the truncation with all words of length <= max_length. The
/// differential acts by the graded Leibniz rule over the word factors with
/// left-degree-sum signs, each ε differentiating to the identity, which
/// merges its neighbor slots.
pub fn quotient_hom(
    base: &DgCategoryTable,
    contracted: &[usize],
    x: usize,
    y: usize,
    max_length: usize,
) -> Result<QuotientHomTruncation> {
    let field = base.field;
    let n_obj = base.object_count();
    for &u in contracted {
        if u >= n_obj {
            return Err(DgError::UnknownObject(format!("object index {u}")));
        }
    }
    if x >= n_obj || y >= n_obj {
        return Err(DgError::UnknownObject("quotient endpoints".into()));
    }

    // enumerate words
    let mut words: BTreeMap<i32, Vec<QuotientWord>> = BTreeMap::new();
    let nb = contracted.len();
    for len in 0..=max_length {
        if len > 0 && nb == 0 {
            break;
        }
        let seq_count = if len == 0 {
            1
        } else {
            nb.checked_pow(len as u32)
                .ok_or_else(|| DgError::Invalid("word count overflow".into()))?
        };
        for code in 0..seq_count {
            // decode the interior sequence
            let mut interior = Vec::with_capacity(len);
            let mut c = code;
            for _ in 0..len {
                interior.push(contracted[c % nb]);
                c /= nb;
            }
            // slot endpoint chain
            let mut endpoints = Vec::with_capacity(len + 1);
            let mut prev = x;
            for &u in &interior {
                endpoints.push((prev, u));
                prev = u;
            }
            endpoints.push((prev, y));
            // cartesian product over slot bases
            let slot_bases: Vec<Vec<(i32, usize)>> = endpoints
                .iter()
                .map(|&(s, t)| base.basis_labels(s, t))
                .collect();
            if slot_bases.iter().any(Vec::is_empty) {
                continue;
            }
            let mut cursor = vec![0usize; len + 1];
            loop {
                let slots: Vec<(i32, usize)> = cursor
                    .iter()
                    .zip(&slot_bases)
                    .map(|(&k, b)| b[k])
                    .collect();
                let w = QuotientWord {
                    interior: interior.clone(),
                    slots,
                };
                words.entry(w.degree()).or_default().push(w);
                // advance
                let mut pos = 0;
                loop {
                    cursor[pos] += 1;
                    if cursor[pos] < slot_bases[pos].len() {
                        break;
                    }
                    cursor[pos] = 0;
                    pos += 1;
                    if pos > len {
                        break;
                    }
                }
                if pos > len {
                    break;
                }
            }
        }
    }
    for v in words.values_mut() {
        v.sort();
    }
    let index: BTreeMap<i32, BTreeMap<QuotientWord, usize>> = words
        .iter()
        .map(|(&d, v)| {
            (
                d,
                v.iter()
                    .enumerate()
                    .map(|(i, w)| (w.clone(), i))
                    .collect(),
            )
        })
        .collect();

    // assemble sparse differential columns
    let mut diff: BTreeMap<i32, Vec<Vec<(usize, Scalar)>>> = BTreeMap::new();
    let degrees: Vec<i32> = words.keys().copied().collect();
    for &p in &degrees {
        let cols = words[&p].len();
        let rows = words.get(&(p + 1)).map_or(0, Vec::len);
        if cols == 0 || rows == 0 {
            continue;
        }
        let mut sparse_cols: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); cols];
        for (col, w) in words[&p].iter().enumerate() {
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (_, coeff, out_word) in word_differential(base, x, y, w)? {
                debug_assert!(out_word.length() <= w.length());
                let row = index
                    .get(&(p + 1))
                    .and_then(|ix| ix.get(&out_word))
                    .copied();
                let Some(row) = row else {
                    return Err(DgError::Invalid(
                        "differential produced a word outside the truncation".into(),
                    ));
                };
                acc.entry(row)
                    .and_modify(|v| *v = field.add(v, &coeff))
                    .or_insert(coeff);
            }
            sparse_cols[col] = acc
                .into_iter()
                .filter(|(_, v)| !field.is_zero(v))
                .collect();
        }
        diff.insert(p, sparse_cols);
    }
    let trunc = QuotientHomTruncation {
        base: base.clone(),
        contracted: contracted.to_vec(),
        source: x,
        target: y,
        max_length,
        words,
        index,
        diff,
    };
    // sparse d^2 = 0 check, column by column
    for (&p, v) in &trunc.words {
        for i in 0..v.len() {
            let mut e = trunc.zero_element(p);
            e.coords[i] = field.one();
            let dd = trunc.differential(&trunc.differential(&e));
            if !dd.coords.iter().all(|c| field.is_zero(c)) {
                return Err(DgError::DifferentialSquare { degree: p });
            }
        }
    }
    Ok(trunc)
}

/// The terms of d(word): a list of (slot position or merge, coefficient,
/// resulting word).
fn word_differential(
    base: &DgCategoryTable,
    x: usize,
    y: usize,
    w: &QuotientWord,
) -> Result<Vec<(usize, Scalar, QuotientWord)>> {
    let field = base.field;
    let n = w.length();
    // endpoint chain
    let mut endpoints = Vec::with_capacity(n + 1);
    let mut prev = x;
    for &u in &w.interior {
        endpoints.push((prev, u));
        prev = u;
    }
    endpoints.push((prev, y));

    // parity of the degree sum of factors strictly left of slot a_i:
    // factors are a_n, ε_n, ..., ε_{i+1} -> Σ_{l>i} |a_l| + (n - i)
    let slot_left_parity = |i: usize| -> i32 {
        let mut s: i32 = 0;
        for l in (i + 1)..=n {
            s += w.slots[l].0;
        }
        s + (n as i32 - i as i32)
    };
    // factors strictly left of ε_j (j = 1..=n): a_n .. a_j and ε_n .. ε_{j+1}
    let eps_left_parity = |j: usize| -> i32 {
        let mut s: i32 = 0;
        for l in j..=n {
            s += w.slots[l].0;
        }
        s + (n as i32 - j as i32)
    };

    let mut out = Vec::new();
    // slot differentials
    for i in 0..=n {
        let (s, t) = endpoints[i];
        let (deg, idx) = w.slots[i];
        let d = base.hom(s, t).differential(deg);
        let sign = field.from_i64(if slot_left_parity(i).rem_euclid(2) == 0 {
            1
        } else {
            -1
        });
        for r in 0..d.rows() {
            let c = d.get(r, idx);
            if field.is_zero(c) {
                continue;
            }
            let mut slots = w.slots.clone();
            slots[i] = (deg + 1, r);
            out.push((
                i,
                field.mul(c, &sign),
                QuotientWord {
                    interior: w.interior.clone(),
                    slots,
                },
            ));
        }
    }
    // ε merges: d(ε_{U_j}) = 1_{U_j} composes a_j ∘ a_{j-1}
    for j in 1..=n {
        let sign = field.from_i64(if eps_left_parity(j).rem_euclid(2) == 0 {
            1
        } else {
            -1
        });
        let (s0, t0) = endpoints[j - 1];
        let (s1, t1) = endpoints[j];
        let a0 = base.basis_element(s0, t0, w.slots[j - 1].0, w.slots[j - 1].1);
        let a1 = base.basis_element(s1, t1, w.slots[j].0, w.slots[j].1);
        let comp = base.compose(&a1, &a0)?;
        for (k, c) in comp.coords.iter().enumerate() {
            if field.is_zero(c) {
                continue;
            }
            let mut interior = w.interior.clone();
            interior.remove(j - 1);
            let mut slots = w.slots.clone();
            slots[j - 1] = (comp.degree, k);
            slots.remove(j);
            out.push((
                n + j,
                field.mul(c, &sign),
                QuotientWord { interior, slots },
            ));
        }
    }
    Ok(out)
}

/// Concatenation through the shared endpoint: bilinear, lengths add. The
/// result lives in a truncation of the combined length.
pub fn quotient_compose(
    out: &QuotientHomTruncation,
    left: &QuotientHomTruncation,
    e_left: &QuotientElement,
    right: &QuotientHomTruncation,
    e_right: &QuotientElement,
) -> Result<QuotientElement> {
    if left.source != right.target {
        return Err(DgError::EndpointMismatch("quotient composition".into()));
    }
    if out.source != right.source || out.target != left.target {
        return Err(DgError::EndpointMismatch(
            "output truncation endpoints".into(),
        ));
    }
    let base = &out.base;
    let field = base.field;
    let mut result = out.zero_element(e_left.degree + e_right.degree);
    let lw = left.words.get(&e_left.degree).map_or(&[][..], Vec::as_slice);
    let rw = right
        .words
        .get(&e_right.degree)
        .map_or(&[][..], Vec::as_slice);
    for (li, lc) in e_left.coords.iter().enumerate() {
        if field.is_zero(lc) {
            continue;
        }
        let w1 = &lw[li];
        for (ri, rc) in e_right.coords.iter().enumerate() {
            if field.is_zero(rc) {
                continue;
            }
            let w2 = &rw[ri];
            // junction: a'_0 (first slot of w1) composed with a_{n2} (last of w2)
            let mid = left.source;
            let first_src = if w1.interior.is_empty() {
                // w1 has a single slot mid -> target
                (mid, left.target)
            } else {
                (mid, w1.interior[0])
            };
            let last_tgt = if w2.interior.is_empty() {
                (right.source, mid)
            } else {
                (*w2.interior.last().unwrap(), mid)
            };
            let a_first = base.basis_element(first_src.0, first_src.1, w1.slots[0].0, w1.slots[0].1);
            let a_last = base.basis_element(
                last_tgt.0,
                last_tgt.1,
                w2.slots[w2.slots.len() - 1].0,
                w2.slots[w2.slots.len() - 1].1,
            );
            let junction = base.compose(&a_first, &a_last)?;
            let scale = field.mul(lc, rc);
            for (k, c) in junction.coords.iter().enumerate() {
                if field.is_zero(c) {
                    continue;
                }
                let mut interior = w2.interior.clone();
                interior.extend(&w1.interior);
                let mut slots: Vec<(i32, usize)> =
                    w2.slots[..w2.slots.len() - 1].to_vec();
                slots.push((junction.degree, k));
                slots.extend(&w1.slots[1..]);
                let word = QuotientWord { interior, slots };
                let deg = word.degree();
                debug_assert_eq!(deg, result.degree);
                let pos = out
                    .word_position(deg, &word)
                    .ok_or_else(|| DgError::Invalid("composite word outside truncation".into()))?;
                result.coords[pos] =
                    field.add(&result.coords[pos], &field.mul(c, &scale));
            }
        }
    }
    Ok(result)
}

/// The sub-truncation spanned by words of length <= m restricted to degrees
/// [lo, hi], as a complex, plus the positions of its words inside the full
/// truncation.
pub fn length_subcomplex(
    t: &QuotientHomTruncation,
    m: usize,
    lo: i32,
    hi: i32,
) -> (Complex, BTreeMap<i32, Vec<usize>>) {
    let field = t.base.field;
    let mut keep: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (&d, v) in &t.words {
        if d < lo || d > hi {
            continue;
        }
        let ks: Vec<usize> = v
            .iter()
            .enumerate()
            .filter(|(_, w)| w.length() <= m)
            .map(|(i, _)| i)
            .collect();
        if !ks.is_empty() {
            keep.insert(d, ks);
        }
    }
    let components: BTreeMap<i32, usize> = keep.iter().map(|(&d, v)| (d, v.len())).collect();
    let mut differentials = BTreeMap::new();
    for (&d, cols) in &keep {
        if d >= hi {
            continue;
        }
        let Some(rows) = keep.get(&(d + 1)) else {
            continue;
        };
        let row_pos: BTreeMap<usize, usize> =
            rows.iter().enumerate().map(|(ri, &r)| (r, ri)).collect();
        let mut m2 = Matrix::zero(field, rows.len(), cols.len());
        for (ci, &c) in cols.iter().enumerate() {
            for (r, coeff) in t.diff_column(d, c) {
                if let Some(&ri) = row_pos.get(r) {
                    m2.set(ri, ci, coeff.clone());
                }
            }
        }
        differentials.insert(d, m2);
    }
    let complex = Complex::new_unchecked(field, components, differentials)
        .expect("restriction of a valid differential");
    (complex, keep)
}

/// Certificate decision for one degree at one truncation bound.
pub fn exactness_certificate(
    t: &QuotientHomTruncation,
    degree: i32,
) -> Option<ExactCertificate> {
    let base = &t.base;
    if t.contracted.is_empty() {
        return Some(ExactCertificate::NoContractedObjects);
    }
    let m_first = max_degree_over(
        base,
        t.contracted.iter().map(|&u| (t.source, u)),
    );
    let m_last = max_degree_over(base, t.contracted.iter().map(|&u| (u, t.target)));
    if m_first.is_none() || m_last.is_none() {
        return Some(ExactCertificate::NoWords);
    }
    let interior_pairs = || {
        t.contracted
            .iter()
            .flat_map(|&u| t.contracted.iter().map(move |&v| (u, v)))
    };
    let all_acyclic = interior_pairs().all(|(u, v)| base.hom(u, v).is_acyclic());
    if all_acyclic && t.max_length >= 1 {
        return Some(ExactCertificate::AcyclicInterior);
    }
    let m_int = max_degree_over(base, interior_pairs());
    // word degree bound for length nn: m_first + m_last + (nn-1) m_int - nn;
    // decays only when m_int <= 0
    let decays = m_int.map_or(true, |mi| mi <= 0);
    if decays {
        let bound_at = |nn: i32| -> Option<i32> {
            if nn >= 2 && m_int.is_none() {
                return None; // no interior morphisms at all: no such words
            }
            Some(m_first.unwrap() + m_last.unwrap() + (nn - 1) * m_int.unwrap_or(0) - nn)
        };
        // need every length beyond the truncation to miss degrees >= degree - 1
        let next = t.max_length as i32 + 1;
        match bound_at(next) {
            None => return Some(ExactCertificate::NoWords),
            Some(b) if b < degree - 1 => return Some(ExactCertificate::DegreeDecay),
            _ => {}
        }
    }
    None
}

/// The report of one cohomology query.
#[derive(Debug, Clone)]
pub enum QuotientCohomology {
    Exact {
        degree: i32,
        dim: usize,
        certificate: ExactCertificate,
    },
    Stabilization {
        degree: i32,
        /// (length bound, dim H at that bound)
        dims: Vec<(usize, usize)>,
        /// ranks of the induced maps between consecutive bounds
        induced_ranks: Vec<usize>,
        stabilized: bool,
        window: usize,
    },
}

impl QuotientCohomology {
    pub fn dimension(&self) -> usize {
        match self {
            QuotientCohomology::Exact { dim, .. } => *dim,
            QuotientCohomology::Stabilization { dims, .. } => {
                dims.last().map_or(0, |&(_, d)| d)
            }
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, QuotientCohomology::Exact { .. })
    }
}

/// Cohomology of the quotient Hom-complex at one degree: exact when a
/// finiteness certificate covers the truncation, otherwise a stabilization
/// trace over increasing length bounds (explicitly a heuristic).
pub fn quotient_cohomology(
    t: &QuotientHomTruncation,
    degree: i32,
    window: usize,
) -> QuotientCohomology {
    if let Some(cert) = exactness_certificate(t, degree) {
        return QuotientCohomology::Exact {
            degree,
            dim: t.dense_window(degree - 1, degree + 1).cohomology_dim(degree),
            certificate: cert,
        };
    }
    let (lo, hi) = (degree - 1, degree + 1);
    let mut dims = Vec::new();
    let mut ranks = Vec::new();
    let mut prev: Option<(Complex, BTreeMap<i32, Vec<usize>>)> = None;
    for m in 0..=t.max_length {
        let (sub, keep) = length_subcomplex(t, m, lo, hi);
        let (hdim, reps) = sub.cohomology(degree);
        dims.push((m, hdim));
        if let Some((prev_sub, prev_keep)) = &prev {
            // induced map H(prev) -> H(sub): include representatives and
            // take classes
            let field = t.base.field;
            let (prev_h, prev_reps) = prev_sub.cohomology(degree);
            let mut mat = Matrix::zero(field, hdim, prev_h);
            for (col, rep) in prev_reps.iter().enumerate() {
                // pad prev coordinates into the m-subcomplex coordinates
                let empty = Vec::new();
                let prev_pos = prev_keep.get(&degree).unwrap_or(&empty);
                let cur_pos = keep.get(&degree).unwrap_or(&empty);
                let mut padded = vec![field.zero(); cur_pos.len()];
                for (k, &full_idx) in prev_pos.iter().enumerate() {
                    let here = cur_pos
                        .iter()
                        .position(|&fi| fi == full_idx)
                        .expect("filtration is increasing");
                    padded[here] = rep[k].clone();
                }
                let class = crate::complex::cohomology_class(&sub, degree, &padded)
                    .expect("cocycles stay cocycles up the filtration");
                for (row, c) in class.iter().enumerate() {
                    if !field.is_zero(c) {
                        mat.set(row, col, c.clone());
                    }
                }
            }
            ranks.push(crate::linalg::rank(&mat));
        }
        prev = Some((sub, keep));
        let _ = reps;
    }
    // stabilized: the last `window` steps are isomorphisms
    let stabilized = if dims.len() > window && window > 0 {
        let tail = &dims[dims.len() - window - 1..];
        let tail_ranks = &ranks[ranks.len().saturating_sub(window)..];
        tail.windows(2).all(|w| w[0].1 == w[1].1)
            && tail_ranks
                .iter()
                .zip(tail.iter().skip(1))
                .all(|(&r, &(_, d))| r == d)
            && tail.iter().all(|&(_, d)| d == tail[0].1)
    } else {
        false
    };
    QuotientCohomology::Stabilization {
        degree,
        dims,
        induced_ranks: ranks,
        stabilized,
        window,
    }
}

/// Structural report for the length filtration and the bottom exact
/// sequence 0 -> length 0 -> truncation -> higher words -> 0.
#[derive(Debug)]
pub struct FiltrationReport {
    pub differential_squares_to_zero: bool,
    pub filtration_by_subcomplexes: bool,
    pub bottom_sequence_exact: bool,
    pub quotient_d_squares_to_zero: bool,
}

impl FiltrationReport {
    pub fn passed(&self) -> bool {
        self.differential_squares_to_zero
            && self.filtration_by_subcomplexes
            && self.bottom_sequence_exact
            && self.quotient_d_squares_to_zero
    }
}

/// Verifies, degreewise at the truncation: d^2 = 0; the image of d on a
/// length-n word has length <= n; and the sequence
/// 0 -> F_0 -> F_N -> F_N / F_0 -> 0 is degreewise exact with an induced
/// differential squaring to zero.
pub fn quotient_filtration_check(t: &QuotientHomTruncation) -> Result<FiltrationReport> {
    let field = t.base.field;
    // d^2 (already enforced at construction; re-checked here sparsely)
    let mut d2 = true;
    for (&p, v) in &t.words {
        for i in 0..v.len() {
            let mut e = t.zero_element(p);
            e.coords[i] = field.one();
            let dd = t.differential(&t.differential(&e));
            if !dd.coords.iter().all(|c| field.is_zero(c)) {
                d2 = false;
            }
        }
    }
    // filtration: scan sparse columns
    let mut filt = true;
    for (&p, v) in &t.words {
        for (col, w) in v.iter().enumerate() {
            for (row, _) in t.diff_column(p, col) {
                let out_w = &t.words[&(p + 1)][*row];
                if out_w.length() > w.length() {
                    filt = false;
                }
            }
        }
    }
    // bottom sequence: coordinates split by length == 0
    let mut exact = true;
    let mut qd2 = true;
    let degrees: Vec<i32> = t.words.keys().copied().collect();
    // quotient differential: restrict to length >= 1 coordinates
    let keep_q: BTreeMap<i32, Vec<usize>> = t
        .words
        .iter()
        .map(|(&d, v)| {
            (
                d,
                v.iter()
                    .enumerate()
                    .filter(|(_, w)| w.length() >= 1)
                    .map(|(i, _)| i)
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    for &p in &degrees {
        let n_all = t.dim(p);
        let n0 = t.words[&p].iter().filter(|w| w.length() == 0).count();
        let nq = keep_q.get(&p).map_or(0, Vec::len);
        if n0 + nq != n_all {
            exact = false;
        }
    }
    // induced quotient differential squares to zero: apply d twice through
    // positive-length coordinates only
    for &p in &degrees {
        let empty: Vec<usize> = Vec::new();
        let c0 = keep_q.get(&p).unwrap_or(&empty);
        let len_pos = |deg: i32, row: usize| t.words[&deg][row].length() >= 1;
        for &c in c0 {
            // first step restricted to positive length
            let mut mid: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (r, coeff) in t.diff_column(p, c) {
                if len_pos(p + 1, *r) {
                    mid.insert(*r, coeff.clone());
                }
            }
            let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (r, coeff) in mid {
                for (r2, coeff2) in t.diff_column(p + 1, r) {
                    if len_pos(p + 2, *r2) {
                        let e = out.entry(*r2).or_insert_with(|| field.zero());
                        *e = field.add(e, &field.mul(&coeff, coeff2));
                    }
                }
            }
            if out.values().any(|v| !field.is_zero(v)) {
                qd2 = false;
            }
        }
    }
    Ok(FiltrationReport {
        differential_squares_to_zero: d2,
        filtration_by_subcomplexes: filt,
        bottom_sequence_exact: exact,
        quotient_d_squares_to_zero: qd2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{disc, sphere, DgCategoryTable};
    use crate::complex::Complex;
    use crate::field::FieldSpec;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::collections::BTreeMap;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    /// one object with End = k·1 ⊕ k·σ, |σ| = 1, σ² = 0, zero differential
    fn graded_point() -> DgCategoryTable {
        let field = q();
        let end = Complex::new(
            field,
            BTreeMap::from([(0, 1), (1, 1)]),
            BTreeMap::new(),
        )
        .unwrap();
        let homs = BTreeMap::from([((0, 0), end)]);
        let ids = BTreeMap::from([(0, vec![field.one()])]);
        DgCategoryTable::from_parts(
            field,
            vec!["u".into()],
            homs,
            ids,
            |_, _, _, (q_, _), (p_, _), out| {
                // 1∘1 = 1, 1∘σ = σ∘1 = σ, σ∘σ = 0
                let mut coords = vec![field.zero(); out];
                if q_ + p_ <= 1 && out > 0 {
                    coords[0] = field.one();
                }
                coords
            },
        )
        .unwrap()
    }

    #[test]
    fn empty_contracted_set_gives_the_original_hom() {
        let d = disc(q(), 0);
        for n in [0usize, 2, 5] {
            let t = quotient_hom(&d, &[], 0, 1, n).unwrap();
            let dense = t.dense_complex();
            assert_eq!(dense.components(), d.hom(0, 1).components());
            for p in dense.support() {
                assert_eq!(dense.differential(p), d.hom(0, 1).differential(p));
            }
            let c = quotient_cohomology(&t, 0, 3);
            assert!(c.is_exact());
        }
    }

    #[test]
    fn length_one_word_differential_expands_as_displayed() {
        // in disc(0) with contracted {y}: d(1_y ε δ) = δ - (1_y ε ε)
        let d = disc(q(), 0);
        let t = quotient_hom(&d, &[1], 0, 1, 2).unwrap();
        let field = q();
        // delta is the degree-0 basis element of Hom(x, y); eps the degree-1
        let w = QuotientWord {
            interior: vec![1],
            slots: vec![(0, 0), (0, 0)], // a_0 = delta, a_1 = 1_y
        };
        assert_eq!(w.degree(), -1);
        let pos = t.word_position(-1, &w).unwrap();
        let mut e = t.zero_element(-1);
        e.coords[pos] = field.one();
        let de = t.differential(&e);
        // expected: + delta at length 0, - (1_y ε eps-slot) at length 1
        let w_len0 = QuotientWord {
            interior: vec![],
            slots: vec![(0, 0)],
        };
        let w_eps = QuotientWord {
            interior: vec![1],
            slots: vec![(1, 0), (0, 0)],
        };
        let p0 = t.word_position(0, &w_len0).unwrap();
        let p1 = t.word_position(0, &w_eps).unwrap();
        for (k, c) in de.coords.iter().enumerate() {
            if k == p0 {
                assert_eq!(*c, field.one());
            } else if k == p1 {
                assert_eq!(*c, field.from_i64(-1));
            } else {
                assert!(field.is_zero(c), "unexpected term at {k}");
            }
        }
    }

    #[test]
    fn epsilon_differentiates_to_the_identity() {
        for (a, u) in [(disc(q(), 0), 1usize), (disc(q(), 1), 1), (sphere(q(), 0), 1)] {
            let t = quotient_hom(&a, &[u], u, u, 3).unwrap();
            let eps = t.epsilon_element(u).unwrap();
            let deps = t.differential(&eps);
            let one = t.include_length_zero(&a.identity(u)).unwrap();
            assert_eq!(deps, one);
        }
    }

    #[test]
    fn contracted_endomorphisms_are_acyclic_in_exact_mode() {
        let d = disc(q(), 0);
        let t = quotient_hom(&d, &[1], 1, 1, 5).unwrap();
        for i in -4..=1 {
            let c = quotient_cohomology(&t, i, 3);
            assert!(c.is_exact(), "End(y) should be certified at degree {i}");
            assert_eq!(c.dimension(), 0, "H^{i} of End(y) in the quotient");
        }
    }

    #[test]
    fn absent_reverse_homs_certify_no_words() {
        // disc(0), contracted {y}: Hom(y, x) = 0 so Hom_q(x, x) = End(x)
        let d = disc(q(), 0);
        let t = quotient_hom(&d, &[1], 0, 0, 4).unwrap();
        assert_eq!(t.dense_complex().total_dim(), 1);
        let c = quotient_cohomology(&t, 0, 3);
        match &c {
            QuotientCohomology::Exact { dim, certificate, .. } => {
                assert_eq!(*dim, 1);
                assert_eq!(*certificate, ExactCertificate::NoWords);
            }
            other => panic!("expected exact mode, got {other:?}"),
        }
    }

    #[test]
    fn filtration_check_passes_on_corpus_instances() {
        let cases: Vec<(DgCategoryTable, usize, usize, usize, usize)> = vec![
            (disc(q(), 0), 1, 0, 1, 4),
            (disc(q(), 1), 1, 0, 1, 3),
            (sphere(q(), 0), 1, 0, 1, 2),
            (graded_point(), 0, 0, 0, 3),
        ];
        for (a, u, x, y, n) in cases {
            let t = quotient_hom(&a, &[u], x, y, n).unwrap();
            let rep = quotient_filtration_check(&t).unwrap();
            assert!(rep.passed(), "{rep:?}");
        }
    }

    #[test]
    fn graded_point_reports_honest_non_stabilization() {
        // End(u) has a degree-1 class, so no certificate applies. The object
        // u is contractible in the quotient, and indeed every truncation
        // class dies one step later (all induced ranks vanish), but new
        // transient classes keep appearing, so the heuristic refuses to
        // declare stabilization.
        let a = graded_point();
        let t = quotient_hom(&a, &[0], 0, 0, 5).unwrap();
        let c = quotient_cohomology(&t, 0, 3);
        match &c {
            QuotientCohomology::Stabilization {
                dims,
                induced_ranks,
                stabilized,
                ..
            } => {
                assert!(!*stabilized, "{dims:?}");
                assert!(induced_ranks.iter().all(|&r| r == 0), "{induced_ranks:?}");
            }
            other => panic!("expected stabilization mode, got {other:?}"),
        }
    }

    #[test]
    fn exact_mode_is_stable_under_longer_truncations() {
        let d = disc(q(), 1);
        for i in -3..=1 {
            let t1 = quotient_hom(&d, &[1], 1, 1, 4).unwrap();
            let c1 = quotient_cohomology(&t1, i, 3);
            if !c1.is_exact() {
                continue;
            }
            let t2 = quotient_hom(&d, &[1], 1, 1, 6).unwrap();
            let c2 = quotient_cohomology(&t2, i, 3);
            assert!(c2.is_exact());
            assert_eq!(c1.dimension(), c2.dimension(), "degree {i}");
        }
    }

    #[test]
    fn compose_with_identity_word_is_unchanged() {
        let d = disc(q(), 0);
        let t_xy = quotient_hom(&d, &[1], 0, 1, 2).unwrap();
        let t_yy = quotient_hom(&d, &[1], 1, 1, 2).unwrap();
        let t_out = quotient_hom(&d, &[1], 0, 1, 4).unwrap();
        let one_y = t_yy.include_length_zero(&d.identity(1)).unwrap();
        for (&p, v) in &t_xy.words {
            if v.is_empty() || p > 2 {
                continue;
            }
            for i in 0..v.len() {
                let mut e = t_xy.zero_element(p);
                e.coords[i] = q().one();
                let composed = quotient_compose(&t_out, &t_yy, &one_y, &t_xy, &e).unwrap();
                // the composite is the same word seen in the bigger truncation
                let w = &v[i];
                let pos = t_out.word_position(p, w).unwrap();
                for (k, c) in composed.coords.iter().enumerate() {
                    if k == pos {
                        assert_eq!(*c, q().one());
                    } else {
                        assert!(q().is_zero(c));
                    }
                }
            }
        }
    }

    #[test]
    fn composition_satisfies_leibniz_on_random_pairs() {
        let d = disc(q(), 0);
        let field = q();
        let t_left = quotient_hom(&d, &[1], 1, 1, 2).unwrap(); // y -> y
        let t_right = quotient_hom(&d, &[1], 0, 1, 2).unwrap(); // x -> y
        let t_out = quotient_hom(&d, &[1], 0, 1, 4).unwrap();
        let mut rng = StdRng::seed_from_u64(23);
        let rand_elem = |t: &QuotientHomTruncation, rng: &mut StdRng| -> Option<QuotientElement> {
            let degs: Vec<i32> = t.words.keys().copied().collect();
            if degs.is_empty() {
                return None;
            }
            let p = degs[rng.gen_range(0..degs.len())];
            let mut e = t.zero_element(p);
            for c in e.coords.iter_mut() {
                *c = field.from_i64(rng.gen_range(-2i64..=2));
            }
            Some(e)
        };
        for _ in 0..20 {
            let (Some(w1), Some(w2)) = (rand_elem(&t_left, &mut rng), rand_elem(&t_right, &mut rng))
            else {
                continue;
            };
            let lhs = t_out.differential(
                &quotient_compose(&t_out, &t_left, &w1, &t_right, &w2).unwrap(),
            );
            let dw1 = t_left.differential(&w1);
            let dw2 = t_right.differential(&w2);
            let term1 = quotient_compose(&t_out, &t_left, &dw1, &t_right, &w2).unwrap();
            let sign = field.from_i64(if w1.degree.rem_euclid(2) == 0 { 1 } else { -1 });
            let term2 = quotient_compose(&t_out, &t_left, &w1, &t_right, &dw2).unwrap();
            let mut rhs = term1;
            for (a, b) in rhs.coords.iter_mut().zip(&term2.coords) {
                *a = field.add(a, &field.mul(&sign, b));
            }
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn word_dimension_formula_single_interior_object() {
        // over the graded point: length-n space has dim 2^{n+1}
        let a = graded_point();
        let t = quotient_hom(&a, &[0], 0, 0, 5).unwrap();
        for n in 0..=5usize {
            let count: usize = t
                .words
                .values()
                .flatten()
                .filter(|w| w.length() == n)
                .count();
            assert_eq!(count, 2usize.pow(n as u32 + 1));
        }
    }
}
