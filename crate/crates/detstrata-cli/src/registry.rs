//! The example registry: named parameter sets with golden values, plus the
//! engine that recomputes every golden field and diffs it.
//!
//! Golden files live in `goldens/` and are compiled in, so a binary is
//! self-contained. Each case records where its numbers come from
//! (`stated` = copied from the source table, `derived` = obtained by a
//! closed-form evaluation recorded alongside the registry) and the diff
//! report preserves those annotations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use detstrata::formulas;
use detstrata::{
    eagon_northcott_betti, evaluate_sample, general_standard_sample, h_vector,
    verify_generization, BettiTable, CodimensionVerdict, DegreeMatrixSpec, StandardContext,
    StratumInvariants,
};

use crate::output::{CLOSED_FORM, GROEBNER, LINEAR_ALGEBRA, TRUNCATED};
use crate::CliError;

/// Default working prime and the alternate used to separate genuine
/// mismatches from characteristic-sensitive ranks.
pub const DEFAULT_PRIME: u64 = 10007;
pub const RETRY_PRIME: u64 = 10009;

pub const IDS: [&str; 15] = [
    "boij-i",
    "boij-ii",
    "thm41-ex-i",
    "thm41-ex-ii",
    "thm43-ex-i",
    "thm43-ex-ii",
    "blin-i",
    "blin-ii",
    "points-c3",
    "points-c4",
    "points-c5",
    "points-c6",
    "ex53-i",
    "ex53-ii",
    "ex54",
];

fn golden_source(id: &str) -> Option<&'static str> {
    Some(match id {
        "boij-i" => include_str!("../goldens/boij-i.json"),
        "boij-ii" => include_str!("../goldens/boij-ii.json"),
        "thm41-ex-i" => include_str!("../goldens/thm41-ex-i.json"),
        "thm41-ex-ii" => include_str!("../goldens/thm41-ex-ii.json"),
        "thm43-ex-i" => include_str!("../goldens/thm43-ex-i.json"),
        "thm43-ex-ii" => include_str!("../goldens/thm43-ex-ii.json"),
        "blin-i" => include_str!("../goldens/blin-i.json"),
        "blin-ii" => include_str!("../goldens/blin-ii.json"),
        "points-c3" => include_str!("../goldens/points-c3.json"),
        "points-c4" => include_str!("../goldens/points-c4.json"),
        "points-c5" => include_str!("../goldens/points-c5.json"),
        "points-c6" => include_str!("../goldens/points-c6.json"),
        "ex53-i" => include_str!("../goldens/ex53-i.json"),
        "ex53-ii" => include_str!("../goldens/ex53-ii.json"),
        "ex54" => include_str!("../goldens/ex54.json"),
        _ => return None,
    })
}

// ---------------------------------------------------------------------------
// Golden file schema
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Golden {
    pub id: String,
    pub description: String,
    pub cases: Vec<GoldenCase>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenCase {
    pub label: String,
    pub spec: DegreeMatrixSpec,
    pub expect: Expected,
    /// Per-field annotation: `stated` or `derived`.
    #[serde(default)]
    pub provenance: BTreeMap<String, String>,
    #[serde(default)]
    pub notes: Option<String>,
}

/// Every field is optional; a case is diffed only on the fields it states.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub h_vector: Option<Vec<i64>>,
    pub lambda: Option<i64>,
    pub dim: Option<i64>,
    pub codim: Option<usize>,
    pub hom_conormal: Option<usize>,
    pub ext1_r: Option<usize>,
    pub ext1_a: Option<usize>,
    pub ext2_a: Option<usize>,
    pub ext1_conormal: Option<usize>,
    pub ext1_conormal_positive: Option<bool>,
    pub k3: Option<i64>,
    pub k4: Option<i64>,
    pub lambda4: Option<i64>,
    /// 1-based row and 0-based column of a boundary equality a_j = b_i.
    pub corner: Option<(usize, usize)>,
    pub special_table: Option<BettiTable>,
    pub general_table: Option<BettiTable>,
    /// (lower homological index, upper, internal degree, surviving count).
    pub persistent_overlaps: Option<Vec<(usize, usize, i64, u64)>>,
}

pub fn load_golden(id: &str) -> Result<Golden, CliError> {
    let source = golden_source(id).ok_or_else(|| CliError::UnknownExample(id.to_string()))?;
    let golden: Golden = serde_json::from_str(source).map_err(|e| CliError::BadGolden {
        id: id.to_string(),
        detail: e.to_string(),
    })?;
    if golden.id != id {
        return Err(CliError::BadGolden {
            id: id.to_string(),
            detail: format!("file declares id {:?}", golden.id),
        });
    }
    for case in &golden.cases {
        case.spec.validate().map_err(|e| CliError::BadGolden {
            id: id.to_string(),
            detail: format!("case {:?}: {e}", case.label),
        })?;
    }
    Ok(golden)
}

// ---------------------------------------------------------------------------
// Diff outcome
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct FieldOutcome {
    pub field: String,
    pub expected: Value,
    pub computed: Value,
    pub method: &'static str,
    /// `stated` / `derived` when the golden annotates the field.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum CaseStatus {
    Ok,
    OkAfterRetry { first_prime: u64, retry_prime: u64 },
    Mismatch,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseOutcome {
    pub label: String,
    /// Prime at which the reported field values were computed.
    pub prime: u64,
    pub seed: u64,
    #[serde(flatten)]
    pub status: CaseStatus,
    pub fields: Vec<FieldOutcome>,
    pub notes: Vec<String>,
}

impl CaseOutcome {
    pub fn ok(&self) -> bool {
        !matches!(self.status, CaseStatus::Mismatch)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExampleOutcome {
    pub id: String,
    pub description: String,
    pub cases: Vec<CaseOutcome>,
    pub ok: bool,
}

// ---------------------------------------------------------------------------
// Field computation
// ---------------------------------------------------------------------------

struct FieldSink {
    fields: Vec<FieldOutcome>,
}

impl FieldSink {
    fn new() -> Self {
        FieldSink { fields: Vec::new() }
    }

    fn push(
        &mut self,
        field: &str,
        expected: Value,
        computed: Value,
        method: &'static str,
        provenance: Option<&String>,
    ) {
        self.fields.push(FieldOutcome {
            field: field.to_string(),
            ok: expected == computed,
            expected,
            computed,
            method,
            provenance: provenance.cloned(),
        });
    }
}

fn table_triples(table: &BettiTable) -> Vec<(usize, i64, u64)> {
    table.entries().collect()
}

/// Recompute every stated field of one golden case at the given prime.
fn compute_case(case: &GoldenCase, prime: u64, seed: Option<u64>) -> Result<Vec<FieldOutcome>, CliError> {
    let mut spec = case.spec.clone().with_prime(prime);
    if let Some(s) = seed {
        spec = spec.with_seed(s);
    }
    if case.expect.corner.is_some() {
        compute_ghost_case(case, &spec)
    } else {
        compute_stratum_case(case, &spec)
    }
}

fn compute_stratum_case(
    case: &GoldenCase,
    spec: &DegreeMatrixSpec,
) -> Result<Vec<FieldOutcome>, CliError> {
    let e = &case.expect;
    let prov = &case.provenance;
    let mut sink = FieldSink::new();

    let invariants = StratumInvariants::compute(spec)?;
    let (matrix, _, _) = general_standard_sample(spec)?;

    if let Some(exp) = &e.h_vector {
        let guard = eagon_northcott_betti(spec).max_internal_degree().unwrap_or(0) + 2;
        let got = h_vector(&matrix, guard);
        sink.push("h_vector", json!(exp), json!(got), GROEBNER, prov.get("h_vector"));
    }
    if let Some(exp) = e.lambda {
        sink.push(
            "lambda",
            json!(exp),
            json!(invariants.lambda),
            CLOSED_FORM,
            prov.get("lambda"),
        );
    }
    if let Some(exp) = e.k3 {
        sink.push(
            "k3",
            json!(exp),
            json!(invariants.k.first()),
            CLOSED_FORM,
            prov.get("k3"),
        );
    }
    if let Some(exp) = e.k4 {
        sink.push(
            "k4",
            json!(exp),
            json!(invariants.k.get(1)),
            CLOSED_FORM,
            prov.get("k4"),
        );
    }
    if let Some(exp) = e.lambda4 {
        if spec.c() != 4 {
            return Err(CliError::BadGolden {
                id: case.label.clone(),
                detail: "lambda4 only makes sense for codimension-4 shapes".into(),
            });
        }
        sink.push(
            "lambda4",
            json!(exp),
            json!(formulas::lambda_c(spec)),
            CLOSED_FORM,
            prov.get("lambda4"),
        );
    }

    if e.dim.is_some() || e.codim.is_some() {
        let report = evaluate_sample(matrix.clone(), invariants.clone())?;
        if let Some(exp) = e.dim {
            sink.push(
                "dim",
                json!(exp),
                json!(report.verdicts.dim_ws),
                LINEAR_ALGEBRA,
                prov.get("dim"),
            );
        }
        if let Some(exp) = e.codim {
            let got = match report.verdicts.codim_in_family {
                Some(CodimensionVerdict::Exact { value }) => json!(value),
                Some(CodimensionVerdict::Interval { lower, upper }) if lower == upper => {
                    json!(lower)
                }
                Some(CodimensionVerdict::Interval { lower, upper }) => {
                    json!(format!("{lower}..{upper}"))
                }
                None => Value::Null,
            };
            sink.push("codim", json!(exp), got, LINEAR_ALGEBRA, prov.get("codim"));
        }
    }

    let needs_ctx = e.ext1_r.is_some()
        || e.ext1_a.is_some()
        || e.hom_conormal.is_some()
        || e.ext2_a.is_some()
        || e.ext1_conormal.is_some()
        || e.ext1_conormal_positive.is_some();
    if needs_ctx {
        let ctx = StandardContext::new(matrix)?;
        if e.ext1_r.is_some() || e.ext1_a.is_some() {
            let five = ctx.five_term()?;
            if let Some(exp) = e.ext1_r {
                sink.push(
                    "ext1_r",
                    json!(exp),
                    json!(five.ext1_r),
                    LINEAR_ALGEBRA,
                    prov.get("ext1_r"),
                );
            }
            if let Some(exp) = e.ext1_a {
                sink.push(
                    "ext1_a",
                    json!(exp),
                    json!(five.ext1_a),
                    LINEAR_ALGEBRA,
                    prov.get("ext1_a"),
                );
            }
        }
        if let Some(exp) = e.hom_conormal {
            sink.push(
                "hom_conormal",
                json!(exp),
                json!(ctx.hom_i_a()),
                LINEAR_ALGEBRA,
                prov.get("hom_conormal"),
            );
        }
        if let Some(exp) = e.ext2_a {
            sink.push(
                "ext2_a",
                json!(exp),
                json!(ctx.ext_a_mm_truncated(2, None)?),
                TRUNCATED,
                prov.get("ext2_a"),
            );
        }
        if e.ext1_conormal.is_some() || e.ext1_conormal_positive.is_some() {
            let conormal = ctx.ext1_a_conormal(None)?;
            if let Some(exp) = e.ext1_conormal {
                sink.push(
                    "ext1_conormal",
                    json!(exp),
                    json!(conormal.ext1),
                    TRUNCATED,
                    prov.get("ext1_conormal"),
                );
            }
            if let Some(exp) = e.ext1_conormal_positive {
                sink.push(
                    "ext1_conormal_positive",
                    json!(exp),
                    json!(conormal.ext1 > 0),
                    TRUNCATED,
                    prov.get("ext1_conormal_positive"),
                );
            }
        }
    }

    Ok(sink.fields)
}

fn compute_ghost_case(
    case: &GoldenCase,
    spec: &DegreeMatrixSpec,
) -> Result<Vec<FieldOutcome>, CliError> {
    let e = &case.expect;
    let prov = &case.provenance;
    let (row, col) = e.corner.expect("caller checked corner presence");
    let mut sink = FieldSink::new();

    if let Some(exp) = &e.h_vector {
        let (matrix, _, _) = general_standard_sample(spec)?;
        let guard = eagon_northcott_betti(spec).max_internal_degree().unwrap_or(0) + 2;
        let got = h_vector(&matrix, guard);
        sink.push("h_vector", json!(exp), json!(got), GROEBNER, prov.get("h_vector"));
    }

    let report = verify_generization(spec, row, col, &[])?;
    let checks: [(&str, bool); 4] = [
        ("generization/special_witnessed", report.special_witnessed),
        ("generization/hilbert_agree", report.hilbert_agree == Some(true)),
        (
            "generization/table_matches_prediction",
            report.table_matches_prediction == Some(true),
        ),
        (
            "generization/bordered_ideal_matches",
            report.bordered_ideal_matches,
        ),
    ];
    for (name, got) in checks {
        sink.push(name, json!(true), json!(got), GROEBNER, None);
    }

    if let Some(exp) = &e.special_table {
        sink.push(
            "special_table",
            json!(table_triples(exp)),
            json!(table_triples(&report.special_table)),
            GROEBNER,
            prov.get("special_table"),
        );
    }
    if let Some(exp) = &e.general_table {
        sink.push(
            "general_table",
            json!(table_triples(exp)),
            json!(table_triples(&report.general_table)),
            GROEBNER,
            prov.get("general_table"),
        );
    }
    if let Some(exp) = &e.persistent_overlaps {
        let got: Vec<(usize, usize, i64, u64)> = report
            .special_ledger
            .overlaps
            .iter()
            .filter_map(|o| match o.persistent() {
                Some(p) if p > 0 => Some((o.lower, o.upper, o.degree, p)),
                _ => None,
            })
            .collect();
        sink.push(
            "persistent_overlaps",
            json!(exp),
            json!(got),
            GROEBNER,
            prov.get("persistent_overlaps"),
        );
    }

    Ok(sink.fields)
}

// ---------------------------------------------------------------------------
// Reproduce engine with characteristic retry
// ---------------------------------------------------------------------------

fn failing_fields(fields: &[FieldOutcome]) -> Vec<String> {
    fields
        .iter()
        .filter(|f| !f.ok)
        .map(|f| f.field.clone())
        .collect()
}

/// Recompute one case. On a mismatch at the default prime the whole case is
/// rerun at the alternate prime: a clean rerun classifies the disagreement as
/// characteristic-sensitive rather than a wrong golden value. A user-pinned
/// prime disables the retry so the report reflects exactly the requested
/// characteristic.
pub fn reproduce_case(
    case: &GoldenCase,
    prime_override: Option<u64>,
    seed_override: Option<u64>,
) -> Result<CaseOutcome, CliError> {
    let base_prime = prime_override.unwrap_or(case.spec.p);
    let seed = seed_override.unwrap_or(case.spec.seed);
    let mut notes: Vec<String> = case.notes.iter().cloned().collect();

    let fields = compute_case(case, base_prime, seed_override)?;
    if fields.iter().all(|f| f.ok) {
        return Ok(CaseOutcome {
            label: case.label.clone(),
            prime: base_prime,
            seed,
            status: CaseStatus::Ok,
            fields,
            notes,
        });
    }

    if prime_override.is_some() {
        notes.push(format!(
            "fields {:?} disagree at the requested prime {base_prime}; retry disabled because the prime was pinned",
            failing_fields(&fields)
        ));
        return Ok(CaseOutcome {
            label: case.label.clone(),
            prime: base_prime,
            seed,
            status: CaseStatus::Mismatch,
            fields,
            notes,
        });
    }

    let retry_prime = if base_prime == RETRY_PRIME {
        DEFAULT_PRIME
    } else {
        RETRY_PRIME
    };
    let first_failures = failing_fields(&fields);
    let retry_fields = compute_case(case, retry_prime, seed_override)?;
    if retry_fields.iter().all(|f| f.ok) {
        notes.push(format!(
            "fields {first_failures:?} disagreed at p={base_prime} but every field matches at p={retry_prime}; classified as characteristic-sensitive"
        ));
        return Ok(CaseOutcome {
            label: case.label.clone(),
            prime: retry_prime,
            seed,
            status: CaseStatus::OkAfterRetry {
                first_prime: base_prime,
                retry_prime,
            },
            fields: retry_fields,
            notes,
        });
    }

    notes.push(format!(
        "fields {:?} still disagree at p={retry_prime}; the golden value and the computation genuinely differ",
        failing_fields(&retry_fields)
    ));
    Ok(CaseOutcome {
        label: case.label.clone(),
        prime: base_prime,
        seed,
        status: CaseStatus::Mismatch,
        fields,
        notes,
    })
}

pub fn reproduce_example(
    id: &str,
    prime_override: Option<u64>,
    seed_override: Option<u64>,
) -> Result<ExampleOutcome, CliError> {
    let golden = load_golden(id)?;
    let mut cases = Vec::with_capacity(golden.cases.len());
    for case in &golden.cases {
        cases.push(reproduce_case(case, prime_override, seed_override)?);
    }
    let ok = cases.iter().all(CaseOutcome::ok);
    Ok(ExampleOutcome {
        id: golden.id,
        description: golden.description,
        cases,
        ok,
    })
}
