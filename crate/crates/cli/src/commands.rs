//! Executes workspace commands against the resolved objects.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Result};

use dgcat_core::quotient::{
    quotient_cohomology, quotient_filtration_check, quotient_hom, QuotientCohomology,
};
use dgcat_core::{
    cone, gamma_algebra, gamma_cohomology, h0, hull_cone_witness, stratifying_check, tor_oracle,
    verdier_oracle, verify_table_cone_axioms, yoneda_check, z0, free_module, KCategoryTable,
    StratifyingVerdict,
};

use crate::report::{CommandReport, Report};
use crate::resolve::{idempotent_of, vector, ResolvedCategory, Workspace};
use crate::schema::CommandSpec;

/// Per-invocation parameter overrides from the command line.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub max_length: Option<usize>,
    pub depth: Option<usize>,
    pub degree: Option<i32>,
    pub window: Option<usize>,
}

pub const KNOWN_OPS: &[&str] = &[
    "validate",
    "h0",
    "z0",
    "cohomology",
    "tensor",
    "opposite",
    "mor",
    "functor-cat",
    "yoneda",
    "cone",
    "hull",
    "cone-axioms",
    "quotient-hom",
    "quotient-cohomology",
    "gamma",
    "tor-oracle",
    "stratifying",
    "verdier-oracle",
];

/// Executes the workspace's commands, keeping those matching `op_filter`
/// when one is given. Fails early on unknown ops (an input error).
pub fn run(ws: &Workspace, op_filter: Option<&str>, overrides: &Overrides) -> Result<Report> {
    for c in &ws.commands {
        if !KNOWN_OPS.contains(&c.op.as_str()) {
            bail!("unknown op {:?} in the command list", c.op);
        }
    }
    let selected: Vec<(usize, &CommandSpec)> = ws
        .commands
        .iter()
        .enumerate()
        .filter(|(_, c)| op_filter.map_or(true, |f| c.op == f))
        .collect();
    if selected.is_empty() {
        match op_filter {
            Some(f) => bail!("the workspace has no {f:?} commands"),
            None => {}
        }
    }
    let mut report = Report::new(ws.field.to_string());
    for (index, spec) in selected {
        let cr = execute(ws, index, spec, overrides)
            .map_err(|e| anyhow!("command {index} ({}): {e}", spec.op))?;
        report.push(cr);
    }
    Ok(report)
}

fn category<'a>(ws: &'a Workspace, spec: &'a CommandSpec) -> Result<(&'a str, &'a ResolvedCategory)> {
    let name = spec
        .category
        .as_deref()
        .ok_or_else(|| anyhow!("needs category = \"...\""))?;
    let c = ws
        .categories
        .get(name)
        .ok_or_else(|| anyhow!("unknown category {name:?}"))?;
    Ok((name, c))
}

fn k_table_records(cr: &mut CommandReport, k: &KCategoryTable) {
    let mut dims = BTreeMap::new();
    for (x, xl) in k.objects().iter().enumerate() {
        for (y, yl) in k.objects().iter().enumerate() {
            let d = k.hom_dim(x, y);
            if d > 0 {
                dims.insert(format!("({xl},{yl})"), d);
            }
        }
    }
    cr.record("hom_dims", dims);
}

fn execute(
    ws: &Workspace,
    index: usize,
    spec: &CommandSpec,
    ov: &Overrides,
) -> Result<CommandReport> {
    let field = ws.field;
    let max_length = ov.max_length.or(spec.max_length).unwrap_or(4);
    let depth = ov.depth.or(spec.depth).unwrap_or(4);
    let window = ov.window.or(spec.window).unwrap_or(3);
    let degree = ov.degree.or(spec.degree);

    match spec.op.as_str() {
        "validate" => {
            if let Some(name) = &spec.algebra {
                let a = ws
                    .algebras
                    .get(name)
                    .ok_or_else(|| anyhow!("unknown algebra {name:?}"))?;
                let mut cr = CommandReport::new(index, &spec.op, name);
                match a.validate() {
                    Ok(()) => {
                        cr.record("dim", a.dim());
                        cr.pass();
                    }
                    Err(e) => cr.fail(e.to_string()),
                }
                return Ok(cr);
            }
            if let Some(name) = &spec.complex {
                let c = ws
                    .complexes
                    .get(name)
                    .ok_or_else(|| anyhow!("unknown complex {name:?}"))?;
                let mut cr = CommandReport::new(index, &spec.op, name);
                match c.validate() {
                    Ok(()) => {
                        cr.record("total_dim", c.total_dim());
                        cr.pass();
                    }
                    Err(e) => cr.fail(e.to_string()),
                }
                return Ok(cr);
            }
            let (name, c) = category(ws, spec)?;
            let mut cr = CommandReport::new(index, &spec.op, name);
            match c.table.validate() {
                Ok(()) => {
                    cr.record("objects", c.table.objects().to_vec());
                    cr.pass();
                }
                Err(e) => cr.fail(e.to_string()),
            }
            Ok(cr)
        }
        "z0" | "h0" => {
            let (name, c) = category(ws, spec)?;
            let mut cr = CommandReport::new(index, &spec.op, name);
            let k = if spec.op == "z0" {
                z0(&c.table)?
            } else {
                h0(&c.table)?
            };
            k.validate()?;
            k_table_records(&mut cr, &k);
            cr.pass();
            Ok(cr)
        }
        "cohomology" => {
            let (name, c) = category(ws, spec)?;
            let src = c
                .table
                .object_index(spec.source.as_deref().ok_or_else(|| anyhow!("needs source"))?)?;
            let tgt = c
                .table
                .object_index(spec.target.as_deref().ok_or_else(|| anyhow!("needs target"))?)?;
            let hom = c.table.hom(src, tgt);
            let mut cr = CommandReport::new(index, &spec.op, name);
            let mut dims = BTreeMap::new();
            match degree {
                Some(i) => {
                    dims.insert(i.to_string(), hom.cohomology_dim(i));
                }
                None => {
                    for (i, d) in hom.cohomology_dims() {
                        dims.insert(i.to_string(), d);
                    }
                }
            }
            cr.record("cohomology", dims);
            cr.pass();
            Ok(cr)
        }
        "tensor" | "opposite" | "mor" | "functor-cat" | "hull" => {
            let (name, c) = category(ws, spec)?;
            if c.kind != spec.op {
                bail!("category {name:?} was not built by the {:?} builder", spec.op);
            }
            let mut cr = CommandReport::new(index, &spec.op, name);
            c.table.validate()?;
            cr.record("objects", c.table.objects().to_vec());
            let mut dims = BTreeMap::new();
            for (x, xl) in c.table.objects().iter().enumerate() {
                for (y, yl) in c.table.objects().iter().enumerate() {
                    let t = c.table.hom(x, y).total_dim();
                    if t > 0 {
                        dims.insert(format!("({xl},{yl})"), t);
                    }
                }
            }
            cr.record("hom_total_dims", dims);
            cr.pass();
            Ok(cr)
        }
        "yoneda" => {
            let (name, c) = category(ws, spec)?;
            let y = c
                .table
                .object_index(spec.object.as_deref().ok_or_else(|| anyhow!("needs object"))?)?;
            let m_obj = c.table.object_index(
                spec.module_object
                    .as_deref()
                    .ok_or_else(|| anyhow!("needs module_object"))?,
            )?;
            let module = free_module(&c.table, m_obj)?;
            let rep = yoneda_check(&c.table, y, &module)?;
            let mut cr = CommandReport::new(index, &spec.op, name);
            cr.record("degreewise_bijection", rep.degreewise_bijection);
            cr.record("commutes_with_differential", rep.commutes_with_differential);
            if rep.passed() {
                cr.pass();
            } else {
                cr.fail("evaluation at the identity is not a chain isomorphism");
            }
            Ok(cr)
        }
        "cone" => {
            let name = spec
                .chain_map
                .as_deref()
                .ok_or_else(|| anyhow!("needs chain_map"))?;
            let f = ws
                .chain_maps
                .get(name)
                .ok_or_else(|| anyhow!("unknown chain map {name:?}"))?;
            let mut cr = CommandReport::new(index, &spec.op, name);
            match cone(f) {
                Ok(c) => {
                    let mut dims = BTreeMap::new();
                    for (i, d) in c.cohomology_dims() {
                        dims.insert(i.to_string(), d);
                    }
                    cr.record("cone_cohomology", dims);
                    cr.record("acyclic", c.is_acyclic());
                    cr.pass();
                }
                Err(e) => cr.fail(e.to_string()),
            }
            Ok(cr)
        }
        "cone-axioms" => {
            let (name, c) = category(ws, spec)?;
            let model = c
                .hull
                .as_ref()
                .ok_or_else(|| anyhow!("category {name:?} is not a hull build"))?;
            let m = spec
                .morphism
                .as_ref()
                .ok_or_else(|| anyhow!("needs morphism = {{source, target, coords}}"))?;
            let src = c.table.object_index(&m.source)?;
            let tgt = c.table.object_index(&m.target)?;
            let arrow = if m.identity {
                c.table.identity(src)
            } else if let Some(coords) = &m.coords {
                c.table.element(src, tgt, 0, vector(field, coords)?)?
            } else {
                c.table.zero_element(src, tgt, 0)
            };
            let mut cr = CommandReport::new(index, &spec.op, name);
            match hull_cone_witness(&c.table, model, "cone", &arrow)? {
                Some(w) => {
                    let rep = verify_table_cone_axioms(&c.table, &w)?;
                    cr.record("biproduct", rep.biproduct.to_vec());
                    cr.record("closed_solid", rep.closed_solid.to_vec());
                    cr.record("recovers_map", rep.recovers_map.to_vec());
                    cr.record("remark_identities", rep.remark_identities.to_vec());
                    cr.record("cone_object", c.table.objects()[w.cone].clone());
                    if rep.all_pass() {
                        cr.pass();
                    } else {
                        cr.fail("a cone axiom fails");
                    }
                }
                None => cr.fail(
                    "the cone or the source suspension is not among the listed twisted objects",
                ),
            }
            Ok(cr)
        }
        "quotient-hom" | "quotient-cohomology" => {
            let (name, c) = category(ws, spec)?;
            let mut contracted = Vec::new();
            for l in &spec.contracted {
                contracted.push(c.table.object_index(l)?);
            }
            let src = c
                .table
                .object_index(spec.source.as_deref().ok_or_else(|| anyhow!("needs source"))?)?;
            let tgt = c
                .table
                .object_index(spec.target.as_deref().ok_or_else(|| anyhow!("needs target"))?)?;
            let t = quotient_hom(&c.table, &contracted, src, tgt, max_length)?;
            let mut cr = CommandReport::new(index, &spec.op, name);
            if spec.op == "quotient-hom" {
                let mut dims: BTreeMap<String, usize> = BTreeMap::new();
                for (d, words) in &t.words {
                    dims.insert(d.to_string(), words.len());
                }
                cr.record("word_dims_by_degree", dims);
                let rep = quotient_filtration_check(&t)?;
                cr.record("d_squared_zero", rep.differential_squares_to_zero);
                cr.record("filtration_by_subcomplexes", rep.filtration_by_subcomplexes);
                cr.record("bottom_sequence_exact", rep.bottom_sequence_exact);
                cr.record("quotient_d_squared_zero", rep.quotient_d_squares_to_zero);
                if rep.passed() {
                    cr.pass();
                } else {
                    cr.fail("a structural check fails");
                }
            } else {
                let degrees: Vec<i32> = match degree {
                    Some(i) => vec![i],
                    None => (-3..=1).collect(),
                };
                let mut out = BTreeMap::new();
                for i in degrees {
                    match quotient_cohomology(&t, i, window) {
                        QuotientCohomology::Exact {
                            dim, certificate, ..
                        } => {
                            out.insert(
                                i.to_string(),
                                serde_json::json!({
                                    "mode": "exact",
                                    "dim": dim,
                                    "certificate": format!("{certificate:?}"),
                                }),
                            );
                        }
                        QuotientCohomology::Stabilization {
                            dims,
                            induced_ranks,
                            stabilized,
                            ..
                        } => {
                            out.insert(
                                i.to_string(),
                                serde_json::json!({
                                    "mode": "stabilization-heuristic",
                                    "dims": dims,
                                    "induced_ranks": induced_ranks,
                                    "stabilized": stabilized,
                                    "window": window,
                                }),
                            );
                        }
                    }
                }
                cr.record("cohomology", out);
                cr.pass();
            }
            Ok(cr)
        }
        "gamma" => {
            let name = spec
                .algebra
                .as_deref()
                .ok_or_else(|| anyhow!("needs algebra"))?;
            let a = ws
                .algebras
                .get(name)
                .ok_or_else(|| anyhow!("unknown algebra {name:?}"))?;
            let e = idempotent_of(
                a,
                spec.idempotent
                    .as_deref()
                    .ok_or_else(|| anyhow!("needs idempotent"))?,
            )?;
            let g = gamma_algebra(a, &e, depth)?;
            let mut cr = CommandReport::new(index, &spec.op, name);
            let mut record = BTreeMap::new();
            for p in 0..=depth {
                record.insert((-(p as i32)).to_string(), gamma_cohomology(&g, p)?);
            }
            cr.record("degree_record", record);
            cr.record("ideal_dim", g.ideal_dim);
            cr.record("h0_equals_quotient_dim", a.dim() - g.ideal_dim);
            cr.pass();
            Ok(cr)
        }
        "tor-oracle" => {
            let rname = spec
                .resolution
                .as_deref()
                .ok_or_else(|| anyhow!("needs resolution"))?;
            let (alg_name, module_name, resolution) = ws
                .resolutions
                .get(rname)
                .ok_or_else(|| anyhow!("unknown resolution {rname:?}"))?;
            let a = &ws.algebras[alg_name];
            let (_, m) = &ws.modules[module_name];
            let nname = spec
                .with
                .as_deref()
                .ok_or_else(|| anyhow!("needs with = \"<left module>\""))?;
            let (nalg, n) = ws
                .modules
                .get(nname)
                .ok_or_else(|| anyhow!("unknown module {nname:?}"))?;
            if nalg != alg_name {
                bail!("modules live over different algebras");
            }
            let mut cr = CommandReport::new(index, &spec.op, rname);
            match tor_oracle(a, m, n, resolution, depth) {
                Ok(tor) => {
                    let rec: BTreeMap<String, usize> = tor
                        .iter()
                        .enumerate()
                        .map(|(p, &d)| (p.to_string(), d))
                        .collect();
                    cr.record("tor_dims", rec);
                    cr.pass();
                }
                Err(e) => cr.fail(e.to_string()),
            }
            Ok(cr)
        }
        "stratifying" => {
            let name = spec
                .algebra
                .as_deref()
                .ok_or_else(|| anyhow!("needs algebra"))?;
            let a = ws
                .algebras
                .get(name)
                .ok_or_else(|| anyhow!("unknown algebra {name:?}"))?;
            let e = idempotent_of(
                a,
                spec.idempotent
                    .as_deref()
                    .ok_or_else(|| anyhow!("needs idempotent"))?,
            )?;
            let verdict = stratifying_check(a, &e, depth)?;
            let mut cr = CommandReport::new(index, &spec.op, name);
            match verdict {
                StratifyingVerdict::Stratifying { depth } => {
                    cr.record("verdict", "STRATIFYING");
                    cr.record("checked_depth", depth);
                }
                StratifyingVerdict::NotStratifying {
                    least_failing_p,
                    dim,
                } => {
                    cr.record("verdict", "NOT_STRATIFYING");
                    cr.record("least_failing_p", least_failing_p);
                    cr.record("failing_dim", dim);
                }
            }
            cr.pass();
            Ok(cr)
        }
        "verdier-oracle" => {
            let (name, c) = category(ws, spec)?;
            let model = c
                .hull
                .as_ref()
                .ok_or_else(|| anyhow!("category {name:?} is not a hull build"))?;
            let mut thick = Vec::new();
            for l in &spec.thick {
                thick.push(c.table.object_index(l)?);
            }
            let src = c
                .table
                .object_index(spec.source.as_deref().ok_or_else(|| anyhow!("needs source"))?)?;
            let tgt = c
                .table
                .object_index(spec.target.as_deref().ok_or_else(|| anyhow!("needs target"))?)?;
            let rep = verdier_oracle(&c.table, model, &thick, src, tgt)?;
            let mut cr = CommandReport::new(index, &spec.op, name);
            cr.record("dim", rep.dim);
            cr.record(
                "thick_closure",
                rep.thick_closure
                    .iter()
                    .map(|&i| c.table.objects()[i].clone())
                    .collect::<Vec<_>>(),
            );
            cr.record("index_size", rep.index_size);
            cr.record("filtered_certificate", rep.filtered_certificate);
            if rep.filtered_certificate {
                cr.pass();
            } else {
                cr.fail("object list is not closed enough to stabilize the colimit");
            }
            Ok(cr)
        }
        other => bail!("unknown op {other:?}"),
    }
}
