//! One function per subcommand. Each returns the machine-readable JSON
//! value, the human-readable text, and the process exit code; the binary
//! front end only parses flags and prints.

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use detstrata::verdicts::{
    RULE_CODIMENSION_BOUND, RULE_CODIM_TWO_QUOTIENT, RULE_COMPONENT_VIA_SURJECTIVITY,
    RULE_DIMENSION_VIA_MODULE, RULE_GLICCI, RULE_SMOOTH_COMPONENT,
};
use detstrata::{
    buchsbaum_rim_betti, eagon_northcott_betti, general_standard_sample, maximal_minors,
    minimal_free_resolution, minimal_quotient_betti, sample_matrix, verify_generization,
    BettiTable, CodimensionVerdict, DegreeMatrixSpec, FormulasError, FreeResolution,
    GradedFreeModule, GradedMatrix, HypothesisRecord, QuotientContext, ResolutionBounds,
    RuleStatus, SampleMode, StandardContext, StratumInvariants, StratumReport, VerdictSet,
    VerdictsError,
};

use crate::output::{tagged, CLOSED_FORM, GROEBNER, LINEAR_ALGEBRA, TRUNCATED};
use crate::registry::{self, CaseStatus, ExampleOutcome};
use crate::{CliError, EXIT_EMPTY, EXIT_MISMATCH, EXIT_OK, EXIT_UNDECIDED};

pub struct CommandOutput {
    pub json: Value,
    pub text: String,
    pub exit: i32,
}

const ALL_RULES: [&str; 6] = [
    RULE_CODIM_TWO_QUOTIENT,
    RULE_DIMENSION_VIA_MODULE,
    RULE_CODIMENSION_BOUND,
    RULE_SMOOTH_COMPONENT,
    RULE_COMPONENT_VIA_SURJECTIVITY,
    RULE_GLICCI,
];

/// Verbatim echo of the requested parameters; documented as input, so its
/// numbers carry no method tags.
fn input_echo(spec: &DegreeMatrixSpec) -> Value {
    json!({
        "n": spec.n,
        "b": spec.b,
        "a": spec.a,
        "p": spec.p,
        "seed": spec.seed,
        "explicit_entries": spec.explicit_entries.is_some(),
    })
}

fn table_json(table: &BettiTable) -> Value {
    json!(table.entries().collect::<Vec<_>>())
}

fn betti_text(table: &BettiTable, truncated: bool) -> String {
    let mut text = table.render_text();
    text.push_str(&format!("total rank: {}\n", table.total()));
    if truncated {
        text.push_str("(truncated: the bounds cut the resolution before it ended)\n");
    }
    text
}

// ---------------------------------------------------------------------------
// stratum-info
// ---------------------------------------------------------------------------

pub fn stratum_info(spec: &DegreeMatrixSpec) -> Result<CommandOutput, CliError> {
    let shape = format!(
        "b = {:?}, a = {:?}, n = {} (t = {}, c = {}) over GF({})",
        spec.b,
        spec.a,
        spec.n,
        spec.t(),
        spec.c(),
        spec.p
    );
    match StratumInvariants::compute(spec) {
        Err(FormulasError::EmptyStratum) => Ok(CommandOutput {
            json: json!({
                "input": input_echo(spec),
                "nonempty": tagged(false, CLOSED_FORM),
                "reason": "empty stratum: need a_(i-1) >= b_i for all i, strictly for some i",
            }),
            text: format!("{shape}\nempty stratum: need a_(i-1) >= b_i for all i, strictly for some i\n"),
            exit: EXIT_EMPTY,
        }),
        Err(e) => Err(e.into()),
        Ok(inv) => {
            let json = json!({
                "input": input_echo(spec),
                "nonempty": tagged(true, CLOSED_FORM),
                "lambda_c": tagged(inv.lambda_c, CLOSED_FORM),
                "k": tagged(inv.k.clone(), CLOSED_FORM),
                "ell": tagged(inv.ell.clone(), CLOSED_FORM),
                "lambda": tagged(inv.lambda, CLOSED_FORM),
                "dim_via_module_hilbert": tagged(inv.dim_via_hm, LINEAR_ALGEBRA),
                "h_vector": tagged(inv.h.clone(), GROEBNER),
                "negative_k": tagged(inv.negative_k, CLOSED_FORM),
                "meta": { "sample_seeds": inv.sample_seeds },
            });
            let mut text = format!("{shape}\n");
            text.push_str("nonempty: true\n");
            text.push_str(&format!("lambda_c = {}\n", inv.lambda_c));
            text.push_str(&format!("K_3..K_c = {:?}\n", inv.k));
            text.push_str(&format!("lambda = dim W_s(b; a) = {}\n", inv.lambda));
            text.push_str(&format!(
                "dim via the module Hilbert-function route = {}\n",
                inv.dim_via_hm
            ));
            text.push_str(&format!("h-vector = {:?}\n", inv.h));
            if inv.negative_k {
                text.push_str("warning: some K_i is negative; the closed form is reported as-is\n");
            }
            Ok(CommandOutput {
                json,
                text,
                exit: EXIT_OK,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn invariants_json(inv: &StratumInvariants) -> Value {
    json!({
        "lambda_c": tagged(inv.lambda_c, CLOSED_FORM),
        "k": tagged(inv.k.clone(), CLOSED_FORM),
        "ell": tagged(inv.ell.clone(), CLOSED_FORM),
        "h_vector": tagged(inv.h.clone(), GROEBNER),
        "lambda": tagged(inv.lambda, CLOSED_FORM),
        "dim_via_module_hilbert": tagged(inv.dim_via_hm, LINEAR_ALGEBRA),
        "nonempty": tagged(inv.nonempty, CLOSED_FORM),
        "negative_k": tagged(inv.negative_k, CLOSED_FORM),
        "meta": { "sample_seeds": inv.sample_seeds },
    })
}

fn hypotheses_json(h: &HypothesisRecord) -> Value {
    let mut map = Map::new();
    map.insert("c".into(), tagged(h.c, CLOSED_FORM));
    map.insert("dim_a".into(), tagged(h.dim_a, CLOSED_FORM));
    map.insert("lambda".into(), tagged(h.lambda, CLOSED_FORM));
    map.insert("hom_mm".into(), tagged(h.hom_mm, LINEAR_ALGEBRA));
    map.insert("hom_a_mm_is_k".into(), tagged(h.hom_a_mm_is_k, LINEAR_ALGEBRA));
    map.insert("ext1_r_mm".into(), tagged(h.ext1_r_mm, LINEAR_ALGEBRA));
    map.insert("ext1_a_mm".into(), tagged(h.ext1_a_mm, LINEAR_ALGEBRA));
    map.insert(
        "ext2_a_mm".into(),
        tagged(json!(h.ext2_a_mm), TRUNCATED),
    );
    map.insert("rank_delta0".into(), tagged(h.rank_delta0, LINEAR_ALGEBRA));
    map.insert("e2_01".into(), tagged(h.e2_01, LINEAR_ALGEBRA));
    map.insert("ker_ext2".into(), tagged(h.ker_ext2, LINEAR_ALGEBRA));
    map.insert(
        "delta0_injective".into(),
        tagged(h.delta0_injective, LINEAR_ALGEBRA),
    );
    map.insert(
        "delta0_surjective".into(),
        tagged(h.delta0_surjective, LINEAR_ALGEBRA),
    );
    map.insert("hom_i_a".into(), tagged(h.hom_i_a, LINEAR_ALGEBRA));
    map.insert(
        "ext1_a_conormal".into(),
        tagged(json!(h.ext1_a_conormal), TRUNCATED),
    );
    map.insert("depth_a".into(), tagged(json!(h.depth_a), TRUNCATED));
    Value::Object(map)
}

fn codim_json(v: &CodimensionVerdict) -> Value {
    match v {
        CodimensionVerdict::Exact { value } => json!({ "kind": "exact", "value": value }),
        CodimensionVerdict::Interval { lower, upper } => {
            json!({ "kind": "interval", "lower": lower, "upper": upper })
        }
    }
}

fn verdicts_json(v: &VerdictSet) -> Value {
    json!({
        "dim_ws": tagged(json!(v.dim_ws), LINEAR_ALGEBRA),
        "codim_in_family": tagged(
            v.codim_in_family.as_ref().map(codim_json).unwrap_or(Value::Null),
            LINEAR_ALGEBRA,
        ),
        "generically_smooth": tagged(json!(v.generically_smooth), LINEAR_ALGEBRA),
        "is_component": tagged(json!(v.is_component), LINEAR_ALGEBRA),
        "every_def_from_matrix": tagged(json!(v.every_def_from_matrix), LINEAR_ALGEBRA),
        "glicci_general_element": tagged(json!(v.glicci_general_element), TRUNCATED),
    })
}

fn status_name(s: RuleStatus) -> &'static str {
    match s {
        RuleStatus::Fired => "fired",
        RuleStatus::Refused => "refused",
        RuleStatus::Unverifiable => "unverifiable",
    }
}

/// Findings explain the absence of a dimension verdict; in particular they
/// record when the sample admits first-order deformations beyond those of the
/// matrix entries, the signature of a stratum closure strictly inside an
/// irreducible component.
fn verify_findings(report: &StratumReport) -> Vec<String> {
    let mut findings = Vec::new();
    if report.verdicts.dim_ws.is_none() {
        let h = &report.hypotheses;
        if !h.hom_a_mm_is_k {
            findings.push(format!(
                "no dimension verdict: the degree-zero endomorphisms of the module have dimension {} (scalars would give 1), so the dimension rule refuses",
                h.hom_mm
            ));
        }
        if h.rank_delta0 < h.e2_01 {
            findings.push(format!(
                "strict inclusion not ruled out: matrix deformations induce only {} of the {} degree-zero deformations of the ideal ({} unexplained directions), so the stratum closure can sit strictly inside an irreducible component",
                h.rank_delta0,
                h.e2_01,
                h.e2_01 - h.rank_delta0
            ));
        }
        if let Some(ext2) = h.ext2_a_mm {
            if ext2 > 0 {
                findings.push(format!(
                    "the obstruction space for module deformations has dimension {ext2}"
                ));
            }
        }
    }
    findings
}

pub fn verify(spec: &DegreeMatrixSpec, rules: Option<&[String]>) -> Result<CommandOutput, CliError> {
    let requested: Vec<&str> = match rules {
        None => ALL_RULES.to_vec(),
        Some(list) => {
            let mut seen = Vec::new();
            for name in list {
                let canon = ALL_RULES
                    .iter()
                    .find(|r| **r == name.as_str())
                    .ok_or_else(|| {
                        CliError::BadFlag(format!(
                            "unknown rule {name:?}; valid rules: {}",
                            ALL_RULES.join(", ")
                        ))
                    })?;
                if !seen.contains(canon) {
                    seen.push(canon);
                }
            }
            seen
        }
    };

    let report = match detstrata::evaluate_stratum(spec) {
        Err(VerdictsError::Formulas(FormulasError::EmptyStratum)) => {
            return Ok(CommandOutput {
                json: json!({
                    "input": input_echo(spec),
                    "nonempty": tagged(false, CLOSED_FORM),
                    "reason": "empty stratum: need a_(i-1) >= b_i for all i, strictly for some i",
                }),
                text: "empty stratum: need a_(i-1) >= b_i for all i, strictly for some i\n".into(),
                exit: EXIT_EMPTY,
            })
        }
        other => other?,
    };

    let findings = verify_findings(&report);

    // A requested rule that could not be decided within bounds is an
    // `unverifiable` provenance entry. That only fails the run when no
    // requested rule fired at all: partial ignorance next to a delivered
    // verdict is reported, not fatal.
    let fired = report
        .provenance
        .iter()
        .any(|p| p.status == RuleStatus::Fired && requested.contains(&p.rule.as_str()));
    let undecided: Vec<&str> = report
        .provenance
        .iter()
        .filter(|p| p.status == RuleStatus::Unverifiable && requested.contains(&p.rule.as_str()))
        .map(|p| p.rule.as_str())
        .collect();
    let exit = if !fired && !undecided.is_empty() {
        EXIT_UNDECIDED
    } else {
        EXIT_OK
    };

    let provenance_json: Vec<Value> = report
        .provenance
        .iter()
        .map(|p| {
            json!({
                "rule": p.rule,
                "status": status_name(p.status),
                "detail": p.detail,
            })
        })
        .collect();

    let json = json!({
        "schema_version": report.schema_version,
        "input": input_echo(spec),
        "requested_rules": requested,
        "invariants": invariants_json(&report.invariants),
        "hypotheses": hypotheses_json(&report.hypotheses),
        "verdicts": verdicts_json(&report.verdicts),
        "provenance": provenance_json,
        "findings": findings,
        "undecided_rules": undecided,
    });

    let mut text = format!(
        "stratum b = {:?}, a = {:?}, n = {} over GF({})\n",
        spec.b, spec.a, spec.n, spec.p
    );
    let v = &report.verdicts;
    text.push_str("verdicts:\n");
    match v.dim_ws {
        Some(d) => text.push_str(&format!("  dim W_s(b; a) = {d}\n")),
        None => text.push_str("  dim W_s(b; a): no verdict\n"),
    }
    match &v.codim_in_family {
        Some(CodimensionVerdict::Exact { value }) => {
            text.push_str(&format!("  codim in the family = {value} (exact)\n"))
        }
        Some(CodimensionVerdict::Interval { lower, upper }) => {
            text.push_str(&format!("  codim in the family in [{lower}, {upper}]\n"))
        }
        None => text.push_str("  codim in the family: no verdict\n"),
    }
    for (name, value) in [
        ("generically smooth", v.generically_smooth),
        ("is an irreducible component", v.is_component),
        ("every graded deformation comes from the matrix", v.every_def_from_matrix),
        ("general element glicci", v.glicci_general_element),
    ] {
        match value {
            Some(flag) => text.push_str(&format!("  {name}: {flag}\n")),
            None => text.push_str(&format!("  {name}: no verdict\n")),
        }
    }
    text.push_str("rules:\n");
    for p in &report.provenance {
        if requested.contains(&p.rule.as_str()) {
            text.push_str(&format!("  {}: {} — {}\n", p.rule, status_name(p.status), p.detail));
        }
    }
    let skipped: Vec<&str> = report
        .provenance
        .iter()
        .filter(|p| p.rule.starts_with("hypothesis:"))
        .map(|p| p.rule.as_str())
        .collect();
    if !skipped.is_empty() {
        text.push_str(&format!("hypotheses not computed: {}\n", skipped.join(", ")));
    }
    for f in &findings {
        text.push_str(&format!("finding: {f}\n"));
    }
    if exit == EXIT_UNDECIDED {
        text.push_str(&format!(
            "undecided within bounds: {}\n",
            undecided.join(", ")
        ));
    }

    Ok(CommandOutput { json, text, exit })
}

// ---------------------------------------------------------------------------
// betti
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingChoice {
    R,
    A,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuleChoice {
    A,
    M,
    IConormal,
}

pub struct BettiRequest {
    pub ring: RingChoice,
    pub of: ModuleChoice,
    /// Evaluate the closed-form complex instead of resolving minimally.
    pub closed_form: bool,
    pub mode: SampleMode,
    pub bounds: Option<ResolutionBounds>,
}

fn sample_for(spec: &DegreeMatrixSpec, mode: SampleMode) -> Result<GradedMatrix, CliError> {
    if spec.explicit_entries.is_some() || mode == SampleMode::Minimal {
        Ok(sample_matrix(spec, mode)?)
    } else {
        let (matrix, _, _) = general_standard_sample(spec)?;
        Ok(matrix)
    }
}

fn degree_guard(spec: &DegreeMatrixSpec) -> i64 {
    eagon_northcott_betti(spec)
        .max_internal_degree()
        .unwrap_or(0)
        + 2
}

/// Default truncation for resolutions over the quotient ring, where minimal
/// resolutions are typically infinite.
fn quotient_bounds(spec: &DegreeMatrixSpec, user: Option<ResolutionBounds>) -> ResolutionBounds {
    user.unwrap_or(ResolutionBounds {
        max_homological: 4,
        max_degree: degree_guard(spec) + 2,
    })
}

fn resolution_output(res: &FreeResolution, method: &'static str) -> (Value, String) {
    let table = res.betti_table();
    let json = json!({
        "table": tagged(table_json(&table), method),
        "truncated": tagged(res.truncated, method),
        "length": tagged(res.length(), method),
    });
    (json, betti_text(&table, res.truncated))
}

pub fn betti(spec: &DegreeMatrixSpec, req: &BettiRequest) -> Result<CommandOutput, CliError> {
    let (body, mut text) = match (req.ring, req.of) {
        (RingChoice::R, ModuleChoice::A) => {
            if req.closed_form {
                let table = eagon_northcott_betti(spec);
                (
                    json!({
                        "table": tagged(table_json(&table), CLOSED_FORM),
                        "truncated": tagged(false, CLOSED_FORM),
                    }),
                    betti_text(&table, false),
                )
            } else {
                let matrix = sample_for(spec, req.mode)?;
                let (table, truncated) = minimal_quotient_betti(&matrix)?;
                (
                    json!({
                        "table": tagged(table_json(&table), GROEBNER),
                        "truncated": tagged(truncated, GROEBNER),
                    }),
                    betti_text(&table, truncated),
                )
            }
        }
        (RingChoice::R, ModuleChoice::M) => {
            if req.closed_form {
                let table = buchsbaum_rim_betti(spec);
                (
                    json!({
                        "table": tagged(table_json(&table), CLOSED_FORM),
                        "truncated": tagged(false, CLOSED_FORM),
                    }),
                    betti_text(&table, false),
                )
            } else {
                let matrix = sample_for(spec, req.mode)?;
                let presentation = matrix.presentation_of_m();
                let bounds = req.bounds.unwrap_or(ResolutionBounds {
                    max_homological: spec.n + 2,
                    max_degree: buchsbaum_rim_betti(spec)
                        .max_internal_degree()
                        .unwrap_or(0)
                        + 2,
                });
                let res = minimal_free_resolution(
                    presentation.target(),
                    &presentation.relation_columns(),
                    bounds,
                )?;
                resolution_output(&res, GROEBNER)
            }
        }
        (RingChoice::A, ModuleChoice::M) => {
            if req.closed_form {
                return Err(CliError::BadFlag(
                    "no closed form is provided over the quotient ring; drop --closed-form".into(),
                ));
            }
            let matrix = sample_for(spec, req.mode)?;
            let ring = matrix.ring();
            let quotient = QuotientContext::new(ring, &maximal_minors(&matrix));
            let presentation = matrix.presentation_of_m();
            let bounds = quotient_bounds(spec, req.bounds);
            let res = quotient.minimal_free_resolution_quotient(
                presentation.target(),
                &presentation.relation_columns(),
                bounds,
            )?;
            resolution_output(&res, TRUNCATED)
        }
        (RingChoice::A, ModuleChoice::IConormal) => {
            if req.closed_form {
                return Err(CliError::BadFlag(
                    "no closed form is provided over the quotient ring; drop --closed-form".into(),
                ));
            }
            let matrix = sample_for(spec, req.mode)?;
            let ring = matrix.ring();
            let minors = maximal_minors(&matrix);
            // Presentation of I/I² over A: push the first two steps of the
            // minimal resolution of R/I down to the quotient.
            let ambient = minimal_free_resolution(
                &GradedFreeModule::new(ring, vec![0]),
                &minors
                    .iter()
                    .cloned()
                    .map(|f| GradedFreeModule::new(ring, vec![0]).element(vec![f]))
                    .collect::<Vec<_>>(),
                ResolutionBounds {
                    max_homological: spec.n + 2,
                    max_degree: degree_guard(spec),
                },
            )?;
            if ambient.modules.len() < 2 {
                return Err(CliError::BadFlag(
                    "the minor ideal is zero; there is no conormal module to resolve".into(),
                ));
            }
            let generators = ambient.modules[1].clone();
            let relations = if ambient.differentials.len() > 1 {
                ambient.differentials[1].clone()
            } else {
                Vec::new()
            };
            let quotient = QuotientContext::new(ring, &minors);
            let bounds = quotient_bounds(spec, req.bounds);
            let res = quotient.minimal_free_resolution_quotient(&generators, &relations, bounds)?;
            resolution_output(&res, TRUNCATED)
        }
        (RingChoice::A, ModuleChoice::A) => {
            return Err(CliError::BadFlag(
                "A over itself is free; choose --of M or --of I-conormal".into(),
            ))
        }
        (RingChoice::R, ModuleChoice::IConormal) => {
            return Err(CliError::BadFlag(
                "the conormal module is resolved over the quotient ring; use --ring A".into(),
            ))
        }
    };

    let mut json = json!({
        "input": input_echo(spec),
        "ring": match req.ring { RingChoice::R => "R", RingChoice::A => "A" },
        "of": match req.of {
            ModuleChoice::A => "A",
            ModuleChoice::M => "M",
            ModuleChoice::IConormal => "I-conormal",
        },
        "closed_form": req.closed_form,
    });
    if let (Value::Object(target), Value::Object(extra)) = (&mut json, body) {
        target.extend(extra);
    }
    let header = format!(
        "Betti numbers over {} of {}{}\n",
        match req.ring { RingChoice::R => "the polynomial ring", RingChoice::A => "the quotient ring" },
        match req.of {
            ModuleChoice::A => "the quotient",
            ModuleChoice::M => "the cokernel module",
            ModuleChoice::IConormal => "the conormal module",
        },
        if req.closed_form { " (closed form)" } else { "" },
    );
    text.insert_str(0, &header);

    Ok(CommandOutput {
        json,
        text,
        exit: EXIT_OK,
    })
}

// ---------------------------------------------------------------------------
// ghost
// ---------------------------------------------------------------------------

pub fn ghost(spec: &DegreeMatrixSpec, row: usize, col: usize) -> Result<CommandOutput, CliError> {
    let report = verify_generization(spec, row, col, &[])?;
    let persistent: Vec<Value> = report
        .special_ledger
        .overlaps
        .iter()
        .filter_map(|o| match o.persistent() {
            Some(p) if p > 0 => Some(json!([o.lower, o.upper, o.degree, p])),
            _ => None,
        })
        .collect();
    let json = json!({
        "input": input_echo(spec),
        "corner": { "row": row, "col": col },
        "reduced": { "b": report.reduced.b, "a": report.reduced.a },
        "special_witnessed": tagged(report.special_witnessed, GROEBNER),
        "special_table": tagged(table_json(&report.special_table), GROEBNER),
        "general_table": tagged(table_json(&report.general_table), GROEBNER),
        "removable_pairs": tagged(json!(report.removable_pairs), CLOSED_FORM),
        "persistent_overlaps": tagged(Value::Array(persistent), GROEBNER),
        "hilbert_agree": tagged(json!(report.hilbert_agree), GROEBNER),
        "hilbert_checked_through": tagged(report.hilbert_checked_through, GROEBNER),
        "table_matches_prediction": tagged(json!(report.table_matches_prediction), GROEBNER),
        "bordered_ideal_matches": tagged(report.bordered_ideal_matches, GROEBNER),
        "findings": report.findings,
        "meta": { "special_seed": report.special_seed, "general_seeds": report.general_seeds },
    });
    Ok(CommandOutput {
        json,
        text: report.render_comparison(),
        exit: EXIT_OK,
    })
}

// ---------------------------------------------------------------------------
// reproduce
// ---------------------------------------------------------------------------

fn value_compact(v: &Value) -> String {
    serde_json::to_string(v).unwrap_or_else(|_| "<unprintable>".into())
}

fn example_text(example: &ExampleOutcome) -> String {
    let mut text = format!("{}: {}\n", example.id, example.description);
    for case in &example.cases {
        let status = match &case.status {
            CaseStatus::Ok => "ok".to_string(),
            CaseStatus::OkAfterRetry {
                first_prime,
                retry_prime,
            } => format!("ok after retry (p={first_prime} -> p={retry_prime})"),
            CaseStatus::Mismatch => "MISMATCH".to_string(),
        };
        text.push_str(&format!(
            "  [{status}] case {} at p={} seed={}\n",
            case.label, case.prime, case.seed
        ));
        for field in &case.fields {
            if field.ok {
                text.push_str(&format!(
                    "    ok {} = {} ({}{})\n",
                    field.field,
                    value_compact(&field.computed),
                    field.method,
                    field
                        .provenance
                        .as_deref()
                        .map(|p| format!(", {p}"))
                        .unwrap_or_default(),
                ));
            } else {
                text.push_str(&format!(
                    "    MISMATCH {}: expected {} got {} ({})\n",
                    field.field,
                    value_compact(&field.expected),
                    value_compact(&field.computed),
                    field.method,
                ));
            }
        }
        for note in &case.notes {
            text.push_str(&format!("    note: {note}\n"));
        }
    }
    text
}

pub fn reproduce(
    ids: &[String],
    all: bool,
    prime_override: Option<u64>,
    seed_override: Option<u64>,
) -> Result<CommandOutput, CliError> {
    let targets: Vec<String> = if all {
        registry::IDS.iter().map(|s| s.to_string()).collect()
    } else if ids.is_empty() {
        return Err(CliError::BadFlag(
            "name at least one example id or pass --all".into(),
        ));
    } else {
        ids.to_vec()
    };
    for id in &targets {
        if !registry::IDS.contains(&id.as_str()) {
            return Err(CliError::UnknownExample(id.clone()));
        }
    }

    // One command stays one process; within it the entries are independent
    // recomputations, so they may run on the thread pool.
    let results: Vec<Result<ExampleOutcome, CliError>> = targets
        .par_iter()
        .map(|id| registry::reproduce_example(id, prime_override, seed_override))
        .collect();

    let mut examples = Vec::with_capacity(results.len());
    for result in results {
        examples.push(result?);
    }

    let ok = examples.iter().all(|e| e.ok);
    let mut text = String::new();
    for example in &examples {
        text.push_str(&example_text(example));
    }
    let total_cases: usize = examples.iter().map(|e| e.cases.len()).sum();
    let failed: Vec<&str> = examples
        .iter()
        .filter(|e| !e.ok)
        .map(|e| e.id.as_str())
        .collect();
    if ok {
        text.push_str(&format!(
            "all {} examples ({} cases) reproduce\n",
            examples.len(),
            total_cases
        ));
    } else {
        text.push_str(&format!("mismatched examples: {}\n", failed.join(", ")));
    }

    let json = json!({
        "examples": serde_json::to_value(&examples).expect("outcomes serialize"),
        "ok": ok,
    });
    Ok(CommandOutput {
        json,
        text,
        exit: if ok { EXIT_OK } else { EXIT_MISMATCH },
    })
}
