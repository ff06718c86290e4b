//! Lowers a parsed workspace file into core objects, with full referential
//! validation: every name must resolve, every constructed object passes its
//! validator before use.

use std::collections::{BTreeMap, BTreeSet};

use anyhow::{anyhow, bail, Context, Result};

use dgcat_core::algebra::{Arrow, QuiverPresentation, RelationTerm};
use dgcat_core::complexes_category::ModuleComplex;
use dgcat_core::mor_cat::MorObject;
use dgcat_core::twisted::twisted_object;
use dgcat_core::{
    complexes_category, functor_dg_category, hull_category, mor_category, opposite, path_algebra,
    tensor, Algebra, AlgebraModule, ChainMap, Complex, DgCategoryTable, DgFunctorTable,
    FieldSpec, HomElement, HullModel, Matrix, MorModel, Resolution, Scalar, Side,
};

use crate::schema::*;

#[derive(Debug, Clone)]
pub struct ResolvedCategory {
    pub table: DgCategoryTable,
    pub kind: String,
    pub hull: Option<HullModel>,
    pub mor: Option<MorModel>,
}

#[derive(Debug)]
pub struct Workspace {
    pub field: FieldSpec,
    pub algebras: BTreeMap<String, Algebra>,
    pub categories: BTreeMap<String, ResolvedCategory>,
    pub complexes: BTreeMap<String, Complex>,
    pub chain_maps: BTreeMap<String, ChainMap>,
    /// module name -> (algebra name, module)
    pub modules: BTreeMap<String, (String, AlgebraModule)>,
    /// resolution name -> (algebra name, module name, resolution)
    pub resolutions: BTreeMap<String, (String, String, Resolution)>,
    pub functors: BTreeMap<String, DgFunctorTable>,
    pub commands: Vec<CommandSpec>,
}

pub fn scalar(field: FieldSpec, lit: &ScalarLit) -> Result<Scalar> {
    match lit {
        toml::Value::Integer(n) => Ok(field.from_i64(*n)),
        toml::Value::String(s) => field
            .parse(s)
            .map_err(|e| anyhow!("cannot parse scalar {s:?}: {e}")),
        other => bail!("scalars must be integers or \"n/d\" strings, got {other}"),
    }
}

pub fn vector(field: FieldSpec, lits: &[ScalarLit]) -> Result<Vec<Scalar>> {
    lits.iter().map(|l| scalar(field, l)).collect()
}

pub fn matrix(field: FieldSpec, lits: &MatrixLit, rows: usize, cols: usize) -> Result<Matrix> {
    if lits.len() != rows || lits.iter().any(|r| r.len() != cols) {
        bail!(
            "matrix must be {rows} x {cols}, got {} x {}",
            lits.len(),
            lits.first().map_or(0, Vec::len)
        );
    }
    let data: Result<Vec<Vec<Scalar>>> = lits.iter().map(|r| vector(field, r)).collect();
    Matrix::from_rows(field, data?).map_err(|e| anyhow!("{e}"))
}

/// Parses an idempotent expression: "0", "1", a basis label, or a
/// "+"-separated sum of basis labels.
pub fn idempotent_of(algebra: &Algebra, expr: &str) -> Result<Vec<Scalar>> {
    let field = algebra.field;
    let expr = expr.trim();
    if expr == "0" {
        return Ok(algebra.zero());
    }
    if expr == "1" {
        return Ok(algebra.unit());
    }
    let mut out = algebra.zero();
    for part in expr.split('+') {
        let v = algebra
            .element_by_label(part.trim())
            .map_err(|e| anyhow!("{e}"))?;
        for (o, c) in out.iter_mut().zip(&v) {
            *o = field.add(o, c);
        }
    }
    if !algebra.is_idempotent(&out) {
        bail!("{expr:?} is not idempotent");
    }
    Ok(out)
}

fn degree_key(key: &str) -> Result<i32> {
    key.parse::<i32>()
        .with_context(|| format!("degree keys must be integers, got {key:?}"))
}

fn field_of(section: &FieldSection) -> Result<FieldSpec> {
    match section.kind.as_str() {
        "rationals" => Ok(FieldSpec::Rationals),
        "prime" => {
            let p = section
                .p
                .ok_or_else(|| anyhow!("prime field requires p"))?;
            FieldSpec::prime(p).map_err(|e| anyhow!("{e}"))
        }
        other => bail!("unknown field kind {other:?} (expected \"rationals\" or \"prime\")"),
    }
}

/// The one-object dg category of an ordinary algebra, concentrated in
/// degree zero.
pub fn dg_category_of_algebra(a: &Algebra) -> Result<DgCategoryTable> {
    let field = a.field;
    let end = Complex::new(
        field,
        BTreeMap::from([(0, a.dim())]),
        BTreeMap::new(),
    )
    .map_err(|e| anyhow!("{e}"))?;
    let homs = BTreeMap::from([((0, 0), end)]);
    let ids = BTreeMap::from([(0, a.unit())]);
    let table = DgCategoryTable::from_parts(
        field,
        vec!["*".into()],
        homs,
        ids,
        |_, _, _, (_, j), (_, i), _| a.multiply(&a.basis_vector(j), &a.basis_vector(i)),
    )
    .map_err(|e| anyhow!("{e}"))?;
    table.validate().map_err(|e| anyhow!("{e}"))?;
    Ok(table)
}

pub fn resolve(file: &WorkspaceFile) -> Result<Workspace> {
    let field = field_of(&file.field)?;

    // algebras
    let mut algebras = BTreeMap::new();
    for (name, spec) in &file.algebras {
        let a = resolve_algebra(field, name, spec)
            .with_context(|| format!("algebra {name:?}"))?;
        algebras.insert(name.clone(), a);
    }

    // modules over algebras
    let mut modules: BTreeMap<String, (String, AlgebraModule)> = BTreeMap::new();
    for (name, spec) in &file.modules {
        let algebra = algebras
            .get(&spec.algebra)
            .ok_or_else(|| anyhow!("module {name:?}: unknown algebra {:?}", spec.algebra))?;
        let side = match spec.side.as_str() {
            "left" => Side::Left,
            "right" => Side::Right,
            other => bail!("module {name:?}: side must be left or right, got {other:?}"),
        };
        let m = if let Some(rank) = spec.free_rank {
            AlgebraModule::free(algebra, side, rank)
        } else if let Some(expr) = &spec.idempotent {
            let e = idempotent_of(algebra, expr)?;
            AlgebraModule::idempotent_slice(algebra, side, &e)
                .map_err(|e| anyhow!("{e}"))?
                .0
        } else {
            let dim = spec
                .dim
                .ok_or_else(|| anyhow!("module {name:?}: need dim with an explicit action"))?;
            let action_spec = spec
                .action
                .as_ref()
                .ok_or_else(|| anyhow!("module {name:?}: need an action table"))?;
            let mut action = Vec::new();
            for label in algebra.labels() {
                let m = action_spec.get(label).ok_or_else(|| {
                    anyhow!("module {name:?}: missing action for basis element {label:?}")
                })?;
                action.push(matrix(field, m, dim, dim)?);
            }
            AlgebraModule::new(algebra, side, dim, action).map_err(|e| anyhow!("{e}"))?
        };
        modules.insert(name.clone(), (spec.algebra.clone(), m));
    }

    // plain complexes
    let mut complexes = BTreeMap::new();
    for (name, spec) in &file.complexes {
        let mut components = BTreeMap::new();
        for (k, &d) in &spec.components {
            components.insert(degree_key(k)?, d);
        }
        let mut differentials = BTreeMap::new();
        for (k, m) in &spec.differentials {
            let deg = degree_key(k)?;
            let rows = components.get(&(deg + 1)).copied().unwrap_or(0);
            let cols = components.get(&deg).copied().unwrap_or(0);
            differentials.insert(deg, matrix(field, m, rows, cols)?);
        }
        let c = Complex::new(field, components, differentials)
            .with_context(|| format!("complex {name:?}"))?;
        complexes.insert(name.clone(), c);
    }

    // chain maps between plain complexes
    let mut chain_maps = BTreeMap::new();
    for (name, spec) in &file.chain_maps {
        let source = complexes
            .get(&spec.source)
            .ok_or_else(|| anyhow!("chain map {name:?}: unknown complex {:?}", spec.source))?
            .clone();
        let target = complexes
            .get(&spec.target)
            .ok_or_else(|| anyhow!("chain map {name:?}: unknown complex {:?}", spec.target))?
            .clone();
        let mut components = BTreeMap::new();
        for (k, m) in &spec.components {
            let deg = degree_key(k)?;
            let rows = target.dim(deg + spec.degree);
            let cols = source.dim(deg);
            components.insert(deg, matrix(field, m, rows, cols)?);
        }
        let f = ChainMap::new(source, target, spec.degree, components)
            .map_err(|e| anyhow!("chain map {name:?}: {e}"))?;
        chain_maps.insert(name.clone(), f);
    }

    // categories, functors, and functor categories: resolved with explicit
    // recursion and cycle detection
    let mut resolver = CategoryResolver {
        field,
        file,
        algebras: &algebras,
        modules: &modules,
        done: BTreeMap::new(),
        functors: BTreeMap::new(),
        in_progress: BTreeSet::new(),
    };
    let mut names: Vec<String> = file.categories.keys().cloned().collect();
    names.sort();
    for name in &names {
        resolver.category(name)?;
    }
    for name in file.functors.keys() {
        resolver.functor(name)?;
    }
    let CategoryResolver {
        done: categories,
        functors,
        ..
    } = resolver;

    // resolutions
    let mut resolutions = BTreeMap::new();
    for (name, spec) in &file.resolutions {
        let algebra = algebras
            .get(&spec.algebra)
            .ok_or_else(|| anyhow!("resolution {name:?}: unknown algebra {:?}", spec.algebra))?;
        let (malg, module) = modules
            .get(&spec.module)
            .ok_or_else(|| anyhow!("resolution {name:?}: unknown module {:?}", spec.module))?;
        if malg != &spec.algebra {
            bail!("resolution {name:?}: module lives over a different algebra");
        }
        let mut terms = Vec::new();
        for t in &spec.terms {
            terms.push(module_ref(algebra, &modules, &spec.algebra, t, Side::Right)?);
        }
        let mut differentials = Vec::new();
        for (k, m) in spec.differentials.iter().enumerate() {
            let rows = terms[k].dim;
            let cols = terms
                .get(k + 1)
                .map(|t| t.dim)
                .ok_or_else(|| anyhow!("resolution {name:?}: more differentials than terms"))?;
            differentials.push(matrix(field, m, rows, cols)?);
        }
        let augmentation = matrix(field, &spec.augmentation, module.dim, terms[0].dim)?;
        let resolution = Resolution {
            terms,
            differentials,
            augmentation,
        };
        resolution
            .validate(algebra, module)
            .map_err(|e| anyhow!("resolution {name:?}: {e}"))?;
        resolutions.insert(
            name.clone(),
            (spec.algebra.clone(), spec.module.clone(), resolution),
        );
    }

    Ok(Workspace {
        field,
        algebras,
        categories,
        complexes,
        chain_maps,
        modules,
        resolutions,
        functors,
        commands: file.commands.clone(),
    })
}

fn resolve_algebra(field: FieldSpec, name: &str, spec: &AlgebraSpec) -> Result<Algebra> {
    if let Some(quiver) = &spec.quiver {
        if spec.basis.is_some() || spec.table.is_some() {
            bail!("give either a quiver or an explicit table, not both");
        }
        let arrows = quiver
            .arrows
            .iter()
            .map(|a| Arrow {
                name: a.name.clone(),
                from: a.from.clone(),
                to: a.to.clone(),
            })
            .collect();
        let mut relations = Vec::new();
        for rel in &quiver.relations {
            let mut terms = Vec::new();
            for t in rel {
                terms.push(RelationTerm {
                    coeff: scalar(field, &t.coeff)?,
                    arrows: t.path.clone(),
                });
            }
            relations.push(terms);
        }
        let presentation = QuiverPresentation {
            vertices: quiver.vertices.clone(),
            arrows,
            relations,
            nilpotency_bound: quiver.nilpotency_bound,
        };
        return path_algebra(field, &presentation).map_err(|e| anyhow!("{e}"));
    }
    let basis = spec
        .basis
        .as_ref()
        .ok_or_else(|| anyhow!("need a basis or a quiver"))?;
    let n = basis.len();
    let table_spec = spec
        .table
        .as_ref()
        .ok_or_else(|| anyhow!("need a multiplication table"))?;
    if table_spec.len() != n || table_spec.iter().any(|r| r.len() != n) {
        bail!("multiplication table must be {n} x {n}");
    }
    let mut table = Vec::new();
    for row in table_spec {
        let mut out_row = Vec::new();
        for entry in row {
            if entry.len() != n {
                bail!("table entries must have {n} coordinates");
            }
            out_row.push(vector(field, entry)?);
        }
        table.push(out_row);
    }
    let unit = vector(
        field,
        spec.unit
            .as_ref()
            .ok_or_else(|| anyhow!("need unit coordinates"))?,
    )?;
    let _ = name;
    Algebra::new(field, basis.clone(), table, unit).map_err(|e| anyhow!("{e}"))
}

fn module_ref(
    algebra: &Algebra,
    modules: &BTreeMap<String, (String, AlgebraModule)>,
    algebra_name: &str,
    spec: &ModuleRefSpec,
    side: Side,
) -> Result<AlgebraModule> {
    match spec {
        ModuleRefSpec::Named(n) if n == "regular" => Ok(AlgebraModule::regular(algebra, side)),
        ModuleRefSpec::Named(n) if n == "zero" => Ok(AlgebraModule::zero_module(algebra, side)),
        ModuleRefSpec::Named(n) => {
            let (alg, m) = modules
                .get(n)
                .ok_or_else(|| anyhow!("unknown module {n:?}"))?;
            if alg != algebra_name {
                bail!("module {n:?} lives over algebra {alg:?}, expected {algebra_name:?}");
            }
            if m.side != side {
                bail!("module {n:?} has the wrong side");
            }
            Ok(m.clone())
        }
        ModuleRefSpec::Idempotent { idempotent } => {
            let e = idempotent_of(algebra, idempotent)?;
            Ok(AlgebraModule::idempotent_slice(algebra, side, &e)
                .map_err(|e| anyhow!("{e}"))?
                .0)
        }
        ModuleRefSpec::Free { free_rank } => Ok(AlgebraModule::free(algebra, side, *free_rank)),
    }
}

struct CategoryResolver<'a> {
    field: FieldSpec,
    file: &'a WorkspaceFile,
    algebras: &'a BTreeMap<String, Algebra>,
    modules: &'a BTreeMap<String, (String, AlgebraModule)>,
    done: BTreeMap<String, ResolvedCategory>,
    functors: BTreeMap<String, DgFunctorTable>,
    in_progress: BTreeSet<String>,
}

impl<'a> CategoryResolver<'a> {
    fn category(&mut self, name: &str) -> Result<ResolvedCategory> {
        if let Some(c) = self.done.get(name) {
            return Ok(c.clone());
        }
        if !self.in_progress.insert(name.to_string()) {
            bail!("category {name:?} is defined through itself");
        }
        let spec = self
            .file
            .categories
            .get(name)
            .ok_or_else(|| anyhow!("unknown category {name:?}"))?;
        let resolved = self
            .build_category(name, spec)
            .with_context(|| format!("category {name:?}"))?;
        resolved
            .table
            .validate()
            .map_err(|e| anyhow!("category {name:?} fails validation: {e}"))?;
        self.in_progress.remove(name);
        self.done.insert(name.to_string(), resolved.clone());
        Ok(resolved)
    }

    fn build_category(&mut self, name: &str, spec: &CategorySpec) -> Result<ResolvedCategory> {
        let field = self.field;
        let builders = [
            spec.disc.is_some(),
            spec.sphere.is_some(),
            spec.algebra.is_some(),
            spec.tensor.is_some(),
            spec.opposite.is_some(),
            spec.mor.is_some(),
            spec.complexes.is_some(),
            spec.hull.is_some(),
            spec.functors.is_some(),
        ];
        if builders.iter().filter(|&&b| b).count() != 1 {
            bail!("give exactly one builder");
        }
        let plain = |table: DgCategoryTable, kind: &str| ResolvedCategory {
            table,
            kind: kind.to_string(),
            hull: None,
            mor: None,
        };
        if let Some(d) = &spec.disc {
            return Ok(plain(dgcat_core::disc(field, d.n), "disc"));
        }
        if let Some(s) = &spec.sphere {
            return Ok(plain(dgcat_core::sphere(field, s.n), "sphere"));
        }
        if let Some(a) = &spec.algebra {
            let algebra = self
                .algebras
                .get(a)
                .ok_or_else(|| anyhow!("unknown algebra {a:?}"))?;
            return Ok(plain(dg_category_of_algebra(algebra)?, "algebra"));
        }
        if let Some(t) = &spec.tensor {
            let l = self.category(&t.left)?;
            let r = self.category(&t.right)?;
            return Ok(plain(
                tensor(&l.table, &r.table).map_err(|e| anyhow!("{e}"))?,
                "tensor",
            ));
        }
        if let Some(o) = &spec.opposite {
            let b = self.category(&o.base)?;
            return Ok(plain(
                opposite(&b.table).map_err(|e| anyhow!("{e}"))?,
                "opposite",
            ));
        }
        if let Some(m) = &spec.mor {
            let b = self.category(&m.base)?;
            let mut objects = Vec::new();
            for o in &m.objects {
                let source = b.table.object_index(&o.source).map_err(|e| anyhow!("{e}"))?;
                let target = b.table.object_index(&o.target).map_err(|e| anyhow!("{e}"))?;
                let arrow = if o.identity {
                    if source != target {
                        bail!("identity arrow of {:?} needs source = target", o.name);
                    }
                    b.table.identity(source)
                } else if let Some(coords) = &o.coords {
                    b.table
                        .element(source, target, 0, vector(field, coords)?)
                        .map_err(|e| anyhow!("{e}"))?
                } else {
                    b.table.zero_element(source, target, 0)
                };
                objects.push(MorObject {
                    label: o.name.clone(),
                    source,
                    target,
                    arrow,
                });
            }
            let (table, model) = mor_category(&b.table, objects).map_err(|e| anyhow!("{e}"))?;
            return Ok(ResolvedCategory {
                table,
                kind: "mor".into(),
                hull: None,
                mor: Some(model),
            });
        }
        if let Some(c) = &spec.complexes {
            let algebra = self
                .algebras
                .get(&c.algebra)
                .ok_or_else(|| anyhow!("unknown algebra {:?}", c.algebra))?;
            let mut objects = Vec::new();
            for o in &c.objects {
                let mut terms = BTreeMap::new();
                for t in &o.terms {
                    let m = module_ref(algebra, self.modules, &c.algebra, &t.module, Side::Right)?;
                    terms.insert(t.degree, m);
                }
                let degrees: Vec<i32> = terms.keys().copied().collect();
                let mut differentials = BTreeMap::new();
                for (k, dm) in o.differentials.iter().enumerate() {
                    let Some(&d) = degrees.get(k) else {
                        bail!("complex {:?}: more differentials than terms", o.name);
                    };
                    if !terms.contains_key(&(d + 1)) {
                        bail!(
                            "complex {:?}: differential {k} needs a term in degree {}",
                            o.name,
                            d + 1
                        );
                    }
                    let rows = terms[&(d + 1)].dim;
                    let cols = terms[&d].dim;
                    differentials.insert(d, matrix(field, dm, rows, cols)?);
                }
                objects.push((o.name.clone(), ModuleComplex {
                    terms,
                    differentials,
                }));
            }
            let idempotents = if c.check_projectivity {
                Some(orthogonal_idempotent_basis(algebra)?)
            } else {
                None
            };
            let (table, _, _) =
                complexes_category(algebra, objects, idempotents.as_deref())
                    .map_err(|e| anyhow!("{e}"))?;
            return Ok(plain(table, "complexes"));
        }
        if let Some(h) = &spec.hull {
            let b = self.category(&h.base)?;
            let mut objects = Vec::new();
            for o in &h.objects {
                let mut entries = Vec::new();
                for e in &o.entries {
                    let obj = b.table.object_index(&e.object).map_err(|e| anyhow!("{e}"))?;
                    entries.push((obj, e.shift));
                }
                let n = entries.len();
                let mut delta: Vec<Vec<HomElement>> = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                let (bj, sj) = entries[j];
                                let (bi, si) = entries[i];
                                b.table.zero_element(bj, bi, 1 + si - sj)
                            })
                            .collect()
                    })
                    .collect();
                for d in &o.delta {
                    if d.row >= n || d.col >= n {
                        bail!("twisted object {:?}: delta index out of range", o.name);
                    }
                    let (bj, sj) = entries[d.col];
                    let (bi, si) = entries[d.row];
                    let coords = vector(field, &d.coords)?;
                    delta[d.row][d.col] = b
                        .table
                        .element(bj, bi, 1 + si - sj, coords)
                        .map_err(|e| anyhow!("{e}"))?;
                }
                objects.push(
                    twisted_object(&b.table, &o.name, entries, delta)
                        .map_err(|e| anyhow!("{e}"))?,
                );
            }
            let (table, model) = hull_category(&b.table, objects).map_err(|e| anyhow!("{e}"))?;
            return Ok(ResolvedCategory {
                table,
                kind: "hull".into(),
                hull: Some(model),
                mor: None,
            });
        }
        if let Some(f) = &spec.functors {
            let src = self.category(&f.source)?;
            let tgt = self.category(&f.target)?;
            let mut list = Vec::new();
            for fname in &f.functors {
                let ft = self.functor(fname)?;
                list.push((fname.clone(), ft));
            }
            let (table, _) = functor_dg_category(&src.table, &tgt.table, list)
                .map_err(|e| anyhow!("{e}"))?;
            return Ok(plain(table, "functor-cat"));
        }
        let _ = name;
        unreachable!("builder count checked above");
    }

    fn functor(&mut self, name: &str) -> Result<DgFunctorTable> {
        if let Some(f) = self.functors.get(name) {
            return Ok(f.clone());
        }
        let spec = self
            .file
            .functors
            .get(name)
            .ok_or_else(|| anyhow!("unknown functor {name:?}"))?;
        let src = self.category(&spec.source)?;
        let tgt = self.category(&spec.target)?;
        let f = if spec.identity {
            if spec.source != spec.target {
                bail!("functor {name:?}: identity requires source = target");
            }
            DgFunctorTable::identity(&src.table)
        } else {
            let object_map_labels = spec
                .object_map
                .as_ref()
                .ok_or_else(|| anyhow!("functor {name:?}: need an object map"))?;
            let mut object_map = Vec::new();
            for l in object_map_labels {
                object_map.push(tgt.table.object_index(l).map_err(|e| anyhow!("{e}"))?);
            }
            let mut maps: BTreeMap<(usize, usize), BTreeMap<i32, Matrix>> = BTreeMap::new();
            for c in &spec.components {
                let x = src.table.object_index(&c.source).map_err(|e| anyhow!("{e}"))?;
                let y = src.table.object_index(&c.target).map_err(|e| anyhow!("{e}"))?;
                let rows = tgt
                    .table
                    .hom(object_map[x], object_map[y])
                    .dim(c.degree);
                let cols = src.table.hom(x, y).dim(c.degree);
                maps.entry((x, y))
                    .or_default()
                    .insert(c.degree, matrix(self.field, &c.matrix, rows, cols)?);
            }
            DgFunctorTable::new(src.table.clone(), tgt.table.clone(), object_map, maps)
                .map_err(|e| anyhow!("{e}"))?
        };
        f.validate()
            .map_err(|e| anyhow!("functor {name:?} fails validation: {e}"))?;
        self.functors.insert(name.to_string(), f.clone());
        Ok(f)
    }
}

/// For projectivity checks: the basis elements that are idempotent must form
/// a complete orthogonal family (true for path algebras, where they are the
/// vertices).
fn orthogonal_idempotent_basis(algebra: &Algebra) -> Result<Vec<Vec<Scalar>>> {
    let field = algebra.field;
    let mut out = Vec::new();
    for i in 0..algebra.dim() {
        let b = algebra.basis_vector(i);
        if algebra.is_idempotent(&b) && b.iter().filter(|c| !field.is_zero(c)).count() == 1 {
            out.push(b);
        }
    }
    let mut total = algebra.zero();
    for e in &out {
        for (t, c) in total.iter_mut().zip(e) {
            *t = field.add(t, c);
        }
    }
    if total != algebra.unit() {
        bail!("basis idempotents do not sum to the unit; cannot check projectivity");
    }
    for a in &out {
        for b in &out {
            if a != b {
                let p = algebra.multiply(a, b);
                if p.iter().any(|c| !field.is_zero(c)) {
                    bail!("basis idempotents are not orthogonal");
                }
            }
        }
    }
    Ok(out)
}
