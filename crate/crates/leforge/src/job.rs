//! Batch front end: parse a job file describing a hypersurface or a
//! parameterized hypersurface, run the requested tasks, and emit a
//! deterministic report (JSON or text).
//!
//! Reports are byte-stable for a fixed job and seed: key order is fixed by
//! the struct layout, all numbers are exact integers or rational strings,
//! and every randomized choice derives from the recorded seed.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ctx::{Caps, Ctx};
use crate::deform::{
    default_t0_candidates, surface_invariants, verify_double_point_formula,
    verify_le_conservation, verify_link_euler, verify_mu_conservation,
    verify_ndot_slice_identity, verify_surface_counts,
};
use crate::error::{Error, Result};
use crate::lecycles::{
    generic_ipa_tuple, is_ipa_deformation, is_ipa_tuple, le_numbers, milnor_number,
    verify_slice_formula, CoordTuple,
};
use crate::paramhyp::{ndot_with_generic_slicing, Parameterization, Unfolding};
use crate::poly::{parse_poly, parse_rational, LinearForm, Poly, Q, VarRing};
use crate::verify::{all_pass, VerificationEntry};

pub const REPORT_VERSION: &str = concat!("leforge/", env!("CARGO_PKG_VERSION"));

// ---------------------------------------------------------------------------
// Job specification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    /// ambient (target) variable names, order significant
    pub ring: Vec<String>,
    pub object: ObjectSpec,
    /// linear forms, leading coordinates first; omitted entries are drawn
    /// generically from the seed
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<String>>,
    pub tasks: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<JobOptions>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ObjectSpec {
    Hypersurface {
        f: String,
        /// optional normalization sheets for multiple-point tasks
        #[serde(default, skip_serializing_if = "Option::is_none")]
        source_vars: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        normalization: Option<Vec<Vec<String>>>,
    },
    Map {
        source_vars: Vec<String>,
        /// one list of components, or several for a multi-sheet map
        #[serde(default, skip_serializing_if = "Option::is_none")]
        components: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sheets: Option<Vec<Vec<String>>>,
    },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// slice window candidates, e.g. ["1/4", "1/9"]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kmax: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<u32>,
}

pub const TASKS: &[&str] = &[
    "milnor",
    "le-numbers",
    "ipa-check",
    "ndot",
    "verify-milnor",
    "verify-eq2",
    "verify-slice",
    "verify-ipa2",
    "verify-main",
    "surface-invariants",
    "verify-surface",
    "verify-corollary",
];

// ---------------------------------------------------------------------------
// Report document
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct ReportDocument {
    pub version: String,
    pub seed: u64,
    pub job: JobSpec,
    pub results: Vec<TaskResult>,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Serialize)]
pub struct TaskResult {
    pub task: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub verifications: Vec<VerificationEntry>,
}

#[derive(Debug, Default, Serialize)]
pub struct Diagnostics {
    /// largest truncation exponent at which a local colength stabilized
    pub stabilized_at: u32,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

struct JobInput {
    f: Poly,
    unfolding: Option<Unfolding>,
    map: Option<Parameterization>,
    coords: Option<CoordTuple>,
}

fn build_input(spec: &JobSpec, ctx: &Ctx) -> Result<JobInput> {
    let target = VarRing::new(spec.ring.clone())?;
    let (map, f): (Option<Parameterization>, Poly) = match &spec.object {
        ObjectSpec::Hypersurface {
            f,
            source_vars,
            normalization,
        } => {
            let poly = parse_poly(f, &target)?;
            let map = match (source_vars, normalization) {
                (Some(sv), Some(sheets)) => {
                    let src = VarRing::new(sv.clone())?;
                    let parsed: Vec<Vec<Poly>> = sheets
                        .iter()
                        .map(|sheet| {
                            sheet
                                .iter()
                                .map(|c| parse_poly(c, &src))
                                .collect::<Result<Vec<Poly>>>()
                        })
                        .collect::<Result<_>>()?;
                    let p = Parameterization::new(&src, &target, parsed)?;
                    // the declared normalization must actually parameterize f
                    let image = p.image_equation(ctx)?;
                    if image != poly.primitive() {
                        return Err(Error::Job(format!(
                            "normalization image `{image}` does not match f"
                        )));
                    }
                    Some(p)
                }
                (None, None) => None,
                _ => {
                    return Err(Error::Job(
                        "normalization needs both source_vars and sheets".into(),
                    ))
                }
            };
            (map, poly)
        }
        ObjectSpec::Map {
            source_vars,
            components,
            sheets,
        } => {
            let src = VarRing::new(source_vars.clone())?;
            let sheet_texts: Vec<Vec<String>> = match (components, sheets) {
                (Some(c), None) => vec![c.clone()],
                (None, Some(s)) => s.clone(),
                _ => {
                    return Err(Error::Job(
                        "map object needs either components or sheets".into(),
                    ))
                }
            };
            let parsed: Vec<Vec<Poly>> = sheet_texts
                .iter()
                .map(|sheet| {
                    sheet
                        .iter()
                        .map(|c| parse_poly(c, &src))
                        .collect::<Result<Vec<Poly>>>()
                })
                .collect::<Result<_>>()?;
            let p = Parameterization::new(&src, &target, parsed)?;
            let f = p.image_equation(ctx)?;
            (Some(p), f)
        }
    };
    let unfolding = match &map {
        Some(p) if Unfolding::shape_ok(p) => Some(Unfolding::new(p.clone())?),
        _ => None,
    };
    let coords = match &spec.coords {
        Some(texts) => {
            let forms: Vec<LinearForm> = texts
                .iter()
                .map(|t| LinearForm::parse(t, &target))
                .collect::<Result<_>>()?;
            if forms.len() == target.nvars() {
                Some(CoordTuple::new(&target, forms)?)
            } else {
                // partial list: complete generically from the seed
                Some(generic_ipa_tuple(&f, &forms, ctx, "job-coords")?)
            }
        }
        None => None,
    };
    Ok(JobInput {
        f,
        unfolding,
        map,
        coords,
    })
}

fn coords_for(input: &JobInput, ctx: &Ctx, purpose: &str) -> Result<CoordTuple> {
    match &input.coords {
        Some(c) => Ok(c.clone()),
        None => {
            // unfoldings keep the parameter first
            let fixed = match &input.unfolding {
                Some(unf) => {
                    let idx = input
                        .f
                        .ring()
                        .index_of(unf.parameter_name())
                        .ok_or_else(|| Error::Job("parameter not in the target ring".into()))?;
                    vec![LinearForm::var(input.f.ring(), idx)]
                }
                None => vec![],
            };
            generic_ipa_tuple(&input.f, &fixed, ctx, purpose)
        }
    }
}

fn t0_candidates(spec: &JobSpec) -> Result<Vec<Q>> {
    match spec.options.as_ref().and_then(|o| o.t0.as_ref()) {
        Some(texts) => {
            let mut out = Vec::new();
            for t in texts {
                let v = parse_rational(t)?;
                if v == Q::from_integer(0.into()) {
                    return Err(Error::Job("slice windows must be nonzero".into()));
                }
                out.push(v);
            }
            if out.is_empty() {
                return Err(Error::Job("empty slice window list".into()));
            }
            Ok(out)
        }
        None => Ok(default_t0_candidates()),
    }
}

fn values_map(pairs: &[(&str, String)]) -> Option<BTreeMap<String, String>> {
    Some(
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect(),
    )
}

fn need_unfolding<'a>(input: &'a JobInput, task: &str) -> Result<&'a Unfolding> {
    input.unfolding.as_ref().ok_or_else(|| {
        Error::Precondition(format!(
            "task {task} needs a one-parameter unfolding (first component equal to the parameter)"
        ))
    })
}

fn run_task(
    task: &str,
    input: &JobInput,
    spec: &JobSpec,
    ctx: &Ctx,
    warnings: &mut Vec<String>,
) -> Result<TaskResult> {
    let t0s = t0_candidates(spec)?;
    let entries_result = |task: &str, entries: Vec<VerificationEntry>| TaskResult {
        task: task.to_string(),
        values: None,
        verifications: entries,
    };
    match task {
        "milnor" => {
            let mu = milnor_number(&input.f, ctx)?;
            Ok(TaskResult {
                task: task.into(),
                values: values_map(&[("mu", mu.to_string())]),
                verifications: vec![],
            })
        }
        "le-numbers" => {
            let coords = coords_for(input, ctx, "le-numbers")?;
            let le = le_numbers(&input.f, &coords, ctx)?;
            let mut pairs: Vec<(&str, String)> =
                vec![("sigma_dim", le.sigma_dim.to_string())];
            let lambda_strings: Vec<String> = le
                .values
                .iter()
                .map(|(i, v)| format!("lambda^{i}={v}"))
                .collect();
            pairs.push(("lambda", lambda_strings.join(", ")));
            let polar_strings: Vec<String> = le
                .polar_numbers
                .iter()
                .map(|(k, v)| format!("gamma^{k}={v}"))
                .collect();
            pairs.push(("polar_numbers", polar_strings.join(", ")));
            Ok(TaskResult {
                task: task.into(),
                values: values_map(&pairs),
                verifications: vec![],
            })
        }
        "ipa-check" => {
            let coords = coords_for(input, ctx, "ipa-check")?;
            let chk = is_ipa_deformation(&input.f, &coords, ctx)?;
            if !chk.agrees() {
                warnings.push(
                    "isolated-polar-activity test and its fiber variant disagree".into(),
                );
            }
            let tuple = is_ipa_tuple(&input.f, &coords, input.f.ring().nvars(), ctx)?;
            Ok(TaskResult {
                task: task.into(),
                values: values_map(&[
                    ("ipa_deformation", chk.holds.to_string()),
                    ("ipa_fiber_variant", chk.variant_holds.to_string()),
                    ("ipa_tuple", tuple.to_string()),
                ]),
                verifications: vec![],
            })
        }
        "ndot" => {
            let map = input.map.as_ref().ok_or_else(|| {
                Error::Precondition(
                    "task ndot needs a parameterization (map object or a hypersurface with a \
                     normalization)"
                        .into(),
                )
            })?;
            let (nd, _) = ndot_with_generic_slicing(map, ctx, "job-ndot")?;
            let mut values: BTreeMap<String, String> = BTreeMap::new();
            values.insert("lambda0".into(), nd.lambda0.to_string());
            values.insert("m_origin".into(), nd.m_origin.to_string());
            if let Some(l1) = nd.lambda1 {
                values.insert("lambda1".into(), l1.to_string());
            }
            for (i, (ideal, m, mult)) in nd.components.iter().enumerate() {
                values.insert(
                    format!("component_{i}"),
                    format!("{ideal} m={m} mult={mult}"),
                );
            }
            Ok(TaskResult {
                task: task.into(),
                values: Some(values),
                verifications: vec![],
            })
        }
        "verify-milnor" => {
            let unf = need_unfolding(input, task)?;
            Ok(entries_result(
                task,
                verify_double_point_formula(unf, &t0s, ctx)?,
            ))
        }
        "verify-eq2" => {
            let unf = need_unfolding(input, task)?;
            Ok(entries_result(task, verify_mu_conservation(unf, &t0s, ctx)?))
        }
        "verify-slice" => {
            let coords = coords_for(input, ctx, "verify-slice")?;
            Ok(entries_result(
                task,
                verify_slice_formula(&input.f, &coords, ctx)?,
            ))
        }
        "verify-ipa2" => {
            let unf = need_unfolding(input, task)?;
            Ok(entries_result(
                task,
                verify_ndot_slice_identity(unf, &t0s, ctx)?,
            ))
        }
        "verify-main" => {
            let coords = coords_for(input, ctx, "verify-main")?;
            Ok(entries_result(
                task,
                verify_le_conservation(&input.f, &coords, input.unfolding.as_ref(), &t0s, ctx)?,
            ))
        }
        "surface-invariants" => {
            let unf = need_unfolding(input, task)?;
            let (inv, _) = surface_invariants(unf, &t0s, ctx)?;
            let mut pairs = vec![
                ("T", inv.triple_points.to_string()),
                ("C", inv.cross_caps.to_string()),
                ("delta", inv.delta.to_string()),
                ("P", inv.polar_correction.to_string()),
                ("P_generic_cut", inv.polar_correction_z_cut.to_string()),
            ];
            if let Some(chi) = inv.chi_link {
                pairs.push(("chi_link", chi.to_string()));
            }
            if inv.polar_correction != inv.polar_correction_z_cut {
                warnings.push(format!(
                    "polar-curve counts differ between the parameter cut ({}) and the generic \
                     cut ({}); identities use the parameter cut",
                    inv.polar_correction, inv.polar_correction_z_cut
                ));
            }
            Ok(TaskResult {
                task: task.into(),
                values: values_map(&pairs),
                verifications: vec![],
            })
        }
        "verify-surface" => {
            let unf = need_unfolding(input, task)?;
            let (entries, _) = verify_surface_counts(unf, &t0s, ctx)?;
            Ok(entries_result(task, entries))
        }
        "verify-corollary" => {
            let unf = need_unfolding(input, task)?;
            Ok(entries_result(task, verify_link_euler(unf, &t0s, ctx)?))
        }
        other => Err(Error::Job(format!("unknown task `{other}`"))),
    }
}

/// Run a job: execute the tasks in order and assemble the report. The
/// returned exit code follows the documented contract (0 all passed,
/// 1 verification failed, 2 precondition violated, 3 parse error,
/// 4 resource cap).
pub fn run_job(spec: JobSpec, seed_override: Option<u64>, caps: Option<Caps>) -> (ReportDocument, i32) {
    let seed = seed_override
        .or_else(|| spec.options.as_ref().and_then(|o| o.seed))
        .unwrap_or(1);
    let mut caps = caps.unwrap_or_default();
    if let Some(o) = &spec.options {
        if let Some(k) = o.kmax {
            caps.k_max = k;
        }
        if let Some(d) = o.max_degree {
            caps.max_total_degree = d;
        }
    }
    let ctx = Ctx::with_caps(seed, caps);
    let mut results = Vec::new();
    let mut warnings = Vec::new();
    let mut exit = 0i32;
    if spec.tasks.is_empty() {
        let doc = ReportDocument {
            version: REPORT_VERSION.into(),
            seed,
            job: spec,
            results,
            diagnostics: Diagnostics {
                stabilized_at: 0,
                warnings: vec!["no tasks requested".into()],
            },
        };
        return (doc, 3);
    }
    match build_input(&spec, &ctx) {
        Ok(input) => {
            for task in &spec.tasks {
                match run_task(task, &input, &spec, &ctx, &mut warnings) {
                    Ok(res) => {
                        if !all_pass(&res.verifications) {
                            exit = exit.max(1);
                        }
                        results.push(res);
                    }
                    Err(e) => {
                        exit = exit.max(e.exit_code());
                        warnings.push(format!("task {task}: {e}"));
                        results.push(TaskResult {
                            task: task.clone(),
                            values: values_map(&[("error", e.to_string())]),
                            verifications: vec![],
                        });
                    }
                }
            }
        }
        Err(e) => {
            exit = e.exit_code();
            warnings.push(format!("job: {e}"));
        }
    }
    let doc = ReportDocument {
        version: REPORT_VERSION.into(),
        seed,
        job: spec,
        results,
        diagnostics: Diagnostics {
            stabilized_at: ctx.max_stabilized_at(),
            warnings,
        },
    };
    (doc, exit)
}

/// Parse a job document from JSON text.
pub fn parse_job(text: &str) -> Result<JobSpec> {
    Ok(serde_json::from_str(text)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Text,
}

/// Render a report: canonical JSON (struct key order, integers unquoted,
/// no floats) or an aligned text table.
pub fn print_report(doc: &ReportDocument, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("report serializes");
            s.push('\n');
            s
        }
        ReportFormat::Text => {
            let mut out = String::new();
            out.push_str(&format!("{} (seed {})\n", doc.version, doc.seed));
            for r in &doc.results {
                out.push_str(&format!("task {}\n", r.task));
                if let Some(values) = &r.values {
                    for (k, v) in values {
                        out.push_str(&format!("  {k} = {v}\n"));
                    }
                }
                for v in &r.verifications {
                    let status = if v.passed() { "PASS" } else { "FAIL" };
                    let rel = if v.passed() { "=" } else { "!=" };
                    out.push_str(&format!(
                        "  {status} {} {rel} {}  {}\n",
                        v.lhs, v.rhs, v.name
                    ));
                    if let Some(note) = &v.note {
                        out.push_str(&format!("       {note}\n"));
                    }
                }
            }
            out.push_str(&format!(
                "diagnostics: stabilized_at={}\n",
                doc.diagnostics.stabilized_at
            ));
            for w in &doc.diagnostics.warnings {
                out.push_str(&format!("warning: {w}\n"));
            }
            out
        }
    }
}

/// Convenience for tests and the demo: run a job given as JSON text.
pub fn run_job_text(text: &str, seed_override: Option<u64>) -> Result<(String, i32)> {
    let spec = parse_job(text)?;
    let (doc, code) = run_job(spec, seed_override, None);
    Ok((print_report(&doc, ReportFormat::Json), code))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triple_point_job() {
        let job = r#"{
            "ring": ["x", "y", "z"],
            "object": {
                "kind": "hypersurface",
                "f": "x*y*z",
                "source_vars": ["a", "b"],
                "normalization": [["0","a","b"], ["a","0","b"], ["a","b","0"]]
            },
            "tasks": ["ndot"],
            "options": {"seed": 5}
        }"#;
        let spec = parse_job(job).unwrap();
        let (doc, code) = run_job(spec, None, None);
        assert_eq!(code, 0, "{:?}", doc.diagnostics.warnings);
        let values = doc.results[0].values.as_ref().unwrap();
        assert_eq!(values.get("lambda0").unwrap(), "1");
        assert_eq!(values.get("lambda1").unwrap(), "3");
        assert_eq!(values.get("m_origin").unwrap(), "2");
    }

    #[test]
    fn cusp_family_job_passes() {
        let job = r#"{
            "ring": ["t", "x", "y"],
            "object": {
                "kind": "map",
                "source_vars": ["t", "u"],
                "components": ["t", "u^2 - t", "u*(u^2 - t)"]
            },
            "coords": ["t", "x", "y"],
            "tasks": ["verify-milnor", "verify-eq2", "verify-main"],
            "options": {"seed": 7}
        }"#;
        let spec = parse_job(job).unwrap();
        let (doc, code) = run_job(spec, None, None);
        assert_eq!(code, 0, "{:?}", doc);
        for r in &doc.results {
            assert!(all_pass(&r.verifications), "{r:?}");
        }
    }

    #[test]
    fn syntax_error_exit_code() {
        let job = r#"{
            "ring": ["x", "y"],
            "object": {"kind": "hypersurface", "f": "y^^2"},
            "tasks": ["milnor"]
        }"#;
        let spec = parse_job(job).unwrap();
        let (doc, code) = run_job(spec, None, None);
        assert_eq!(code, 3);
        assert!(!doc.diagnostics.warnings.is_empty());
    }

    #[test]
    fn reports_are_byte_stable() {
        let job = r#"{
            "ring": ["x", "y"],
            "object": {"kind": "hypersurface", "f": "y^2 - x^3"},
            "coords": ["x", "y"],
            "tasks": ["milnor", "le-numbers", "ipa-check"],
            "options": {"seed": 11}
        }"#;
        let (a, code_a) = run_job_text(job, None).unwrap();
        let (b, code_b) = run_job_text(job, None).unwrap();
        assert_eq!(code_a, 0);
        assert_eq!(code_a, code_b);
        assert_eq!(a, b);
        assert!(a.contains("\"mu\": \"2\""));
    }

    #[test]
    fn precondition_exit_code() {
        // verify-surface on a plane-curve family: wrong shape
        let job = r#"{
            "ring": ["t", "x", "y"],
            "object": {
                "kind": "map",
                "source_vars": ["t", "u"],
                "components": ["t", "u^2 - t", "u*(u^2 - t)"]
            },
            "tasks": ["verify-surface"],
            "options": {"seed": 3}
        }"#;
        let spec = parse_job(job).unwrap();
        let (_, code) = run_job(spec, None, None);
        assert_eq!(code, 2);
    }

    #[test]
    fn text_format_renders_pass_lines() {
        let job = r#"{
            "ring": ["t", "x", "y"],
            "object": {
                "kind": "map",
                "source_vars": ["t", "u"],
                "components": ["t", "u^2 - t", "u*(u^2 - t)"]
            },
            "coords": ["t", "x", "y"],
            "tasks": ["verify-milnor"],
            "options": {"seed": 7}
        }"#;
        let spec = parse_job(job).unwrap();
        let (doc, code) = run_job(spec, None, None);
        assert_eq!(code, 0);
        let text = print_report(&doc, ReportFormat::Text);
        assert!(text.contains("PASS 2 = 2"), "{text}");
    }
}
